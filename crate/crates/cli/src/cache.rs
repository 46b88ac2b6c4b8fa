//! Subgroup lists memoized on disk under `$NORMCALC_CACHE`, keyed by a
//! SHA-256 of the multiplication table.

use std::path::PathBuf;
use std::sync::Arc;

use normcalc::group::{enumerate_subgroups, FiniteGroup, GroupContext, Subgroup};
use normcalc::Result;
use sha2::{Digest, Sha256};

fn key(group: &FiniteGroup) -> String {
    let mut hasher = Sha256::new();
    for row in group.table() {
        for x in row {
            hasher.update((x as u32).to_le_bytes());
        }
    }
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("NORMCALC_CACHE").filter(|v| !v.is_empty()).map(PathBuf::from)
}

/// The group context, reusing the cached subgroup list when one exists.
/// Cache failures fall back to computing from scratch.
pub fn context(group: FiniteGroup) -> Result<Arc<GroupContext>> {
    let Some(dir) = cache_dir() else { return GroupContext::new(group) };
    let path = dir.join(format!("{}.json", key(&group)));
    if let Some(subs) = std::fs::read(&path).ok().and_then(|b| serde_json::from_slice::<Vec<Vec<usize>>>(&b).ok()) {
        let subs: Vec<Subgroup> = subs.into_iter().map(Subgroup::from_elements).collect();
        if subs.iter().all(|s| group.is_subgroup(s)) {
            return Ok(GroupContext::from_subgroups(group, subs));
        }
    }
    let subs = enumerate_subgroups(&group)?;
    let lists: Vec<Vec<usize>> = subs.iter().map(|s| s.iter().collect()).collect();
    if std::fs::create_dir_all(&dir).is_ok() {
        if let Ok(bytes) = serde_json::to_vec(&lists) {
            let _ = std::fs::write(&path, bytes);
        }
    }
    Ok(GroupContext::from_subgroups(group, subs))
}
