//! The surface definition file: one JSON document
//! `{"polygons": [[[x,y],...],...], "gluings": [[a,i,b,j],...]}`.

use serde::{Deserialize, Serialize};

use super::coord::{parse_rational, Arithmetic, CoordParseError};

/// A coordinate as written in a definition file: a decimal or `p/q` string,
/// or a bare JSON number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordText {
    Text(String),
    Number(f64),
}

impl CoordText {
    pub fn to_f64(&self) -> Result<f64, CoordParseError> {
        match self {
            CoordText::Number(v) => Ok(*v),
            CoordText::Text(s) => {
                if s.contains('/') {
                    let q = parse_rational(s)?;
                    Ok(super::coord::rat_to_f64(&q))
                } else {
                    s.trim().parse::<f64>().map_err(|_| CoordParseError(s.clone()))
                }
            }
        }
    }

    pub fn to_rational(&self) -> Result<num_rational::BigRational, CoordParseError> {
        match self {
            CoordText::Number(v) => super::coord::f64_to_rat(*v)
                .ok_or_else(|| CoordParseError(v.to_string())),
            CoordText::Text(s) => parse_rational(s),
        }
    }
}

impl From<&str> for CoordText {
    fn from(s: &str) -> Self {
        CoordText::Text(s.to_string())
    }
}

/// Raw polygon-and-gluing description, before validation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceDefinition {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Defaults to exact when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arithmetic: Option<Arithmetic>,
    pub polygons: Vec<Vec<[CoordText; 2]>>,
    pub gluings: Vec<[usize; 4]>,
}

impl SurfaceDefinition {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("surface definitions always serialize")
    }

    /// Convenience constructor from integer coordinates.
    pub fn from_integer_polygons(polygons: &[Vec<(i64, i64)>], gluings: &[[usize; 4]]) -> Self {
        Self {
            name: None,
            arithmetic: Some(Arithmetic::Exact),
            polygons: polygons
                .iter()
                .map(|p| {
                    p.iter()
                        .map(|&(x, y)| [CoordText::Text(x.to_string()), CoordText::Text(y.to_string())])
                        .collect()
                })
                .collect(),
            gluings: gluings.to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_mixed_coordinate_forms() {
        let text = r#"{"polygons": [[["0","0"],["1/2",0],[0.5,"1.5"]]], "gluings": [[0,0,0,1]]}"#;
        let def = SurfaceDefinition::from_json(text).unwrap();
        assert_eq!(def.polygons[0].len(), 3);
        assert_eq!(def.polygons[0][1][0].to_f64().unwrap(), 0.5);
        assert_eq!(def.polygons[0][2][1].to_f64().unwrap(), 1.5);
        assert_eq!(def.arithmetic, None);
        let again = SurfaceDefinition::from_json(&def.to_json()).unwrap();
        assert_eq!(again, def);
    }
}
