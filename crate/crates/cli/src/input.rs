use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use serde::de::DeserializeOwned;
use weil_core::io::{AlgebraFile, FileRef, PointFile};
use weil_core::{PadicAlgebra, PadicContext, PadicNumber};

use crate::Global;

/// Precision used when neither the flags nor the input file give one.
pub const DEFAULT_PRECISION: u32 = 20;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Flags win over the file; the prime has no default.
pub fn context(global: &Global, prime: Option<u64>, precision: Option<u32>) -> Result<PadicContext> {
    let p = global
        .prime
        .or(prime)
        .ok_or_else(|| anyhow!("no prime given: pass --p or set \"prime\" in the input file"))?;
    let n = global.precision.or(precision).unwrap_or(DEFAULT_PRECISION);
    Ok(PadicContext::new(p, n)?)
}

/// Comma-separated rational literals, e.g. `"1/3,0,-2"`.
pub fn parse_list(ctx: &PadicContext, text: &str) -> Result<Vec<PadicNumber>> {
    text.split(',')
        .map(|s| ctx.parse(s.trim()).with_context(|| format!("bad literal {s:?}")))
        .collect()
}

/// Reads a nested file relative to the file that references it.
pub fn resolve<T: DeserializeOwned + Clone>(parent: &Path, r: &FileRef<T>) -> Result<T> {
    match r {
        FileRef::Inline(t) => Ok(t.clone()),
        FileRef::Path(p) => {
            let base = parent.parent().map(Path::to_path_buf).unwrap_or_default();
            read_json(&base.join(PathBuf::from(p)))
        }
    }
}

pub struct LoadedPoint {
    pub algebra_file: AlgebraFile,
    pub file: PointFile,
}

impl LoadedPoint {
    pub fn read(path: &Path) -> Result<Self> {
        let file: PointFile = read_json(path)?;
        let algebra_file = resolve(path, &file.algebra)?;
        Ok(Self { algebra_file, file })
    }

    pub fn build(&self, ctx: &PadicContext) -> Result<(PadicAlgebra, Vec<Vec<PadicNumber>>)> {
        let algebra = self.algebra_file.build(ctx)?;
        Ok((algebra, self.file.coords(ctx)?))
    }
}
