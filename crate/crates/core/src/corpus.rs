//! Bundled example surfaces.

use crate::surface::{SurfaceDefinition, SurfaceError, TranslationSurface};

const ENTRIES: &[(&str, &str)] = &[
    ("torus", include_str!("../corpus/torus.json")),
    ("l_2_2", include_str!("../corpus/l_2_2.json")),
    ("golden_l", include_str!("../corpus/golden_l.json")),
    ("octagon", include_str!("../corpus/octagon.json")),
    ("stsurf_3", include_str!("../corpus/stsurf_3.json")),
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CorpusError {
    #[error("unknown corpus surface {0:?}")]
    UnknownSurface(String),
    #[error("corpus surface {name:?} is invalid: {source}")]
    Invalid { name: String, source: SurfaceError },
}

/// Names of the bundled surfaces, in a fixed order.
pub fn corpus_list() -> Vec<&'static str> {
    ENTRIES.iter().map(|(n, _)| *n).collect()
}

/// The raw JSON text of a bundled surface.
pub fn corpus_text(name: &str) -> Result<&'static str, CorpusError> {
    ENTRIES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| CorpusError::UnknownSurface(name.to_string()))
}

pub fn corpus_definition(name: &str) -> Result<SurfaceDefinition, CorpusError> {
    let text = corpus_text(name)?;
    SurfaceDefinition::from_json(text).map_err(|e| CorpusError::Invalid {
        name: name.to_string(),
        source: SurfaceError::Parse(e.to_string()),
    })
}

pub fn corpus_get(name: &str) -> Result<TranslationSurface, CorpusError> {
    let def = corpus_definition(name)?;
    TranslationSurface::build(&def)
        .map_err(|source| CorpusError::Invalid { name: name.to_string(), source })
}
