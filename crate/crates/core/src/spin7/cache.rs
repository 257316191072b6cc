//! On-disk cache of the enumerated S(q^n), keyed by (p, m, n) and the crate version.
//! Deleting it is always safe; a stale or corrupt file is ignored and rewritten.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Spin7Context, Spin7Error, SylowElement, SylowGroup};
use crate::cliffspin::{spin7_order, two_part};

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "SPINFUSION_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: String,
    p: u64,
    m: u32,
    n: u32,
    elements: Vec<Vec<u64>>,
}

/// The cache directory from the environment, if set.
pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).map(PathBuf::from)
}

fn file_name(ctx: &Spin7Context) -> String {
    let f = ctx.field();
    format!(
        "sylow-p{}-m{}-n{}-v{}.json",
        f.p(),
        f.m(),
        ctx.n(),
        env!("CARGO_PKG_VERSION")
    )
}

fn try_load(ctx: &Spin7Context, path: &Path) -> Option<SylowGroup> {
    let text = std::fs::read_to_string(path).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    let f = ctx.field();
    if file.version != env!("CARGO_PKG_VERSION")
        || file.p != f.p()
        || file.m != f.m()
        || file.n != ctx.n()
    {
        return None;
    }
    let els: Vec<SylowElement> = file
        .elements
        .iter()
        .map(|v| SylowElement::from_indices(v))
        .collect::<Option<_>>()?;
    let expected = two_part(&spin7_order(ctx.qn()));
    if num_bigint::BigUint::from(els.len()) != expected
        || !els
            .iter()
            .all(|g| ctx.is_rational(g) && g.normalized(f) == *g)
    {
        return None;
    }
    SylowGroup::from_elements(ctx, els).ok()
}

/// Loads S(q^n) from `dir` when a valid cache file exists, otherwise builds it and
/// writes the cache (write errors are ignored).
pub fn load_or_build(ctx: &Spin7Context, dir: Option<&Path>) -> Result<SylowGroup, Spin7Error> {
    let Some(dir) = dir else {
        return SylowGroup::build(ctx);
    };
    let path = dir.join(file_name(ctx));
    if let Some(s) = try_load(ctx, &path) {
        return Ok(s);
    }
    let s = SylowGroup::build(ctx)?;
    let f = ctx.field();
    let file = CacheFile {
        version: env!("CARGO_PKG_VERSION").to_string(),
        p: f.p(),
        m: f.m(),
        n: ctx.n(),
        elements: s.elements().iter().map(|g| g.indices()).collect(),
    };
    if std::fs::create_dir_all(dir).is_ok() {
        if let Ok(text) = serde_json::to_string(&file) {
            let tmp = path.with_extension("tmp");
            if std::fs::write(&tmp, text).is_ok() {
                let _ = std::fs::rename(&tmp, &path);
            }
        }
    }
    Ok(s)
}
