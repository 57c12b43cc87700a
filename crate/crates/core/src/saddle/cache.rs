//! On-disk cache of enumeration results keyed by surface fingerprint and
//! radius, so repeated experiments skip re-enumeration.
//!
//! Layout (little endian): magic `FGHC`, format version, radius bits,
//! optional denominator, node count, witness flag, vector count, then one
//! record per vector.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use super::{enumerate_with, EnumConfig, HolonomySet, HolonomyVector, SaddleError};
use crate::surface::{TranslationSurface, Vec2};

pub const CACHE_DIR_ENV: &str = "FLATGAP_CACHE_DIR";
const MAGIC: &[u8; 4] = b"FGHC";
const VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error(transparent)]
    Enumerate(#[from] SaddleError),
    #[error("cache i/o: {0}")]
    Io(#[from] io::Error),
}

/// The cache directory named by `FLATGAP_CACHE_DIR`, if set and non-empty.
pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn cache_path(dir: &Path, s: &TranslationSurface, r: f64, witnesses: bool) -> PathBuf {
    let fp = s.canonical_form().fingerprint();
    dir.join(format!("{fp}-{:016x}-{}.bin", r.to_bits(), if witnesses { "w" } else { "n" }))
}

/// Enumerates through the cache in `dir` (no caching when `None`).
/// Unreadable cache files are replaced rather than trusted.
pub fn enumerate_cached(
    s: &TranslationSurface,
    r: f64,
    cfg: &EnumConfig,
    dir: Option<&Path>,
) -> Result<HolonomySet, CacheError> {
    let Some(dir) = dir else { return Ok(enumerate_with(s, r, cfg)?) };
    let path = cache_path(dir, s, r, cfg.keep_witnesses);
    if let Ok(bytes) = fs::read(&path) {
        match decode(&bytes) {
            Ok(set) => return Ok(set),
            Err(e) => log::warn!("ignoring unreadable cache file {}: {e}", path.display()),
        }
    }
    let set = enumerate_with(s, r, cfg)?;
    fs::create_dir_all(dir)?;
    let tmp = path.with_extension("tmp");
    fs::File::create(&tmp)?.write_all(&encode(&set))?;
    fs::rename(&tmp, &path)?;
    Ok(set)
}

pub(crate) fn encode(set: &HolonomySet) -> Vec<u8> {
    let mut out = Vec::with_capacity(64 + set.vectors.len() * 80);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&set.radius.to_bits().to_le_bytes());
    put_opt_i128(&mut out, set.denominator);
    out.extend_from_slice(&set.nodes.to_le_bytes());
    out.extend_from_slice(&(set.vectors.len() as u64).to_le_bytes());
    for h in &set.vectors {
        out.extend_from_slice(&h.v.x.to_bits().to_le_bytes());
        out.extend_from_slice(&h.v.y.to_bits().to_le_bytes());
        match h.lattice {
            Some([x, y]) => {
                out.push(1);
                out.extend_from_slice(&x.to_le_bytes());
                out.extend_from_slice(&y.to_le_bytes());
            }
            None => out.push(0),
        }
        for n in [h.start.0, h.start.1, h.end.0, h.end.1, h.start_cone, h.end_cone] {
            out.extend_from_slice(&(n as u32).to_le_bytes());
        }
        match &h.witness {
            Some(w) => {
                out.push(1);
                out.extend_from_slice(&(w.len() as u32).to_le_bytes());
                for &(p, e) in w {
                    out.extend_from_slice(&(p as u32).to_le_bytes());
                    out.extend_from_slice(&(e as u32).to_le_bytes());
                }
            }
            None => out.push(0),
        }
    }
    out
}

fn put_opt_i128(out: &mut Vec<u8>, v: Option<i128>) {
    match v {
        Some(x) => {
            out.push(1);
            out.extend_from_slice(&x.to_le_bytes());
        }
        None => out.push(0),
    }
}

struct Reader<'a>(&'a [u8]);

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> io::Result<[u8; N]> {
        let mut buf = [0u8; N];
        self.0.read_exact(&mut buf)?;
        Ok(buf)
    }
    fn u8(&mut self) -> io::Result<u8> {
        Ok(self.take::<1>()?[0])
    }
    fn u32(&mut self) -> io::Result<u32> {
        Ok(u32::from_le_bytes(self.take()?))
    }
    fn u64(&mut self) -> io::Result<u64> {
        Ok(u64::from_le_bytes(self.take()?))
    }
    fn f64(&mut self) -> io::Result<f64> {
        Ok(f64::from_bits(self.u64()?))
    }
    fn i128(&mut self) -> io::Result<i128> {
        Ok(i128::from_le_bytes(self.take()?))
    }
    fn usize(&mut self) -> io::Result<usize> {
        Ok(self.u32()? as usize)
    }
}

fn invalid(msg: &str) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, msg.to_string())
}

pub(crate) fn decode(bytes: &[u8]) -> io::Result<HolonomySet> {
    let mut r = Reader(bytes);
    if &r.take::<4>()? != MAGIC {
        return Err(invalid("bad magic"));
    }
    if r.u32()? != VERSION {
        return Err(invalid("unsupported version"));
    }
    let radius = r.f64()?;
    let denominator = if r.u8()? == 1 { Some(r.i128()?) } else { None };
    let nodes = r.u64()?;
    let count = r.u64()? as usize;
    let mut vectors = Vec::with_capacity(count.min(1 << 24));
    for _ in 0..count {
        let v = Vec2::new(r.f64()?, r.f64()?);
        let lattice = if r.u8()? == 1 { Some([r.i128()?, r.i128()?]) } else { None };
        let start = (r.usize()?, r.usize()?);
        let end = (r.usize()?, r.usize()?);
        let start_cone = r.usize()?;
        let end_cone = r.usize()?;
        let witness = if r.u8()? == 1 {
            let n = r.usize()?;
            let mut w = Vec::with_capacity(n.min(1 << 20));
            for _ in 0..n {
                w.push((r.usize()?, r.usize()?));
            }
            Some(w)
        } else {
            None
        };
        vectors.push(HolonomyVector {
            v,
            lattice,
            length: v.norm(),
            angle: v.arg(),
            start,
            end,
            start_cone,
            end_cone,
            witness,
        });
    }
    if !r.0.is_empty() {
        return Err(invalid("trailing bytes"));
    }
    Ok(HolonomySet { radius, denominator, vectors, nodes })
}
