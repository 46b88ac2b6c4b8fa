//! Transfer systems on actual subgroups, with no use of the class-level
//! tables.

use std::collections::BTreeSet;

use crate::group::{GroupContext, Subgroup};

/// Orbits of `G` acting on pairs `K < H` by simultaneous conjugation.
struct ElementPairs<'a> {
    ctx: &'a GroupContext,
    subs: &'a [Subgroup],
    /// pair (k, h) of subgroup indices to orbit id
    orbit_of: std::collections::HashMap<(usize, usize), usize>,
    orbits: Vec<Vec<(usize, usize)>>,
}

impl<'a> ElementPairs<'a> {
    fn new(ctx: &'a GroupContext) -> Self {
        let subs = &ctx.poset.subgroups;
        let idx = &ctx.poset.index;
        let mut orbit_of = std::collections::HashMap::new();
        let mut orbits = Vec::new();
        for h in 0..subs.len() {
            for k in 0..subs.len() {
                if k == h || !subs[k].is_subset(&subs[h]) || orbit_of.contains_key(&(k, h)) {
                    continue;
                }
                let id = orbits.len();
                let mut members = Vec::new();
                for g in 0..ctx.order() {
                    let kk = idx[&ctx.group.conjugate_subgroup(g, &subs[k])];
                    let hh = idx[&ctx.group.conjugate_subgroup(g, &subs[h])];
                    if orbit_of.insert((kk, hh), id).is_none() {
                        members.push((kk, hh));
                    }
                }
                orbits.push(members);
            }
        }
        ElementPairs { ctx, subs, orbit_of, orbits }
    }

    fn is_transfer_system(&self, rel: &BTreeSet<usize>) -> bool {
        let has = |k: usize, h: usize| k == h || self.orbit_of.get(&(k, h)).is_some_and(|o| rel.contains(o));
        let idx = &self.ctx.poset.index;
        for &o in rel {
            for &(k, h) in &self.orbits[o] {
                for m in 0..self.subs.len() {
                    if self.subs[m].is_subset(&self.subs[h]) {
                        let km = idx[&self.subs[k].intersection(&self.subs[m])];
                        if !has(km, m) {
                            return false;
                        }
                    }
                }
                for (&(l, k2), _) in self.orbit_of.iter().filter(|(_, oo)| rel.contains(oo)) {
                    if k2 == k && !has(l, h) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn close(&self, rel: &mut BTreeSet<usize>) {
        let idx = &self.ctx.poset.index;
        loop {
            let mut add = BTreeSet::new();
            for &o in rel.iter() {
                for &(k, h) in &self.orbits[o] {
                    for m in 0..self.subs.len() {
                        if self.subs[m].is_subset(&self.subs[h]) {
                            let km = idx[&self.subs[k].intersection(&self.subs[m])];
                            if km != m {
                                add.insert(self.orbit_of[&(km, m)]);
                            }
                        }
                    }
                    for &o2 in rel.iter() {
                        for &(l, k2) in &self.orbits[o2] {
                            if k2 == k {
                                add.insert(self.orbit_of[&(l, h)]);
                            }
                        }
                    }
                }
            }
            let before = rel.len();
            rel.extend(add);
            if rel.len() == before {
                return;
            }
        }
    }

    /// Class-level `(level, local)` description of a relation, read off
    /// at the class representatives.
    fn to_pairs(&self, rel: &BTreeSet<usize>) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for &o in rel {
            for &(k, h) in &self.orbits[o] {
                let (c, _) = self.ctx.classify(&self.subs[h]).expect("listed subgroup");
                if self.ctx.level(c).sub == self.subs[h] {
                    let (j, _) = self.ctx.level(c).local_of(&self.subs[k]).expect("subgroup of the representative");
                    out.insert((c, j));
                }
            }
        }
        out
    }
}

/// Every transfer system of `G` as class-level pairs. Subsets are brute
/// forced when there are at most 20 pair orbits; otherwise closed sets are
/// grown one orbit at a time and deduplicated.
pub fn transfer_systems(ctx: &GroupContext) -> BTreeSet<BTreeSet<(usize, usize)>> {
    let ep = ElementPairs::new(ctx);
    let n = ep.orbits.len();
    let mut out = BTreeSet::new();
    if n <= 20 {
        for mask in 0u32..1 << n {
            let rel: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            if ep.is_transfer_system(&rel) {
                out.insert(ep.to_pairs(&rel));
            }
        }
        return out;
    }
    let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    let mut frontier = vec![BTreeSet::new()];
    seen.insert(BTreeSet::new());
    while let Some(rel) = frontier.pop() {
        for o in 0..n {
            if rel.contains(&o) {
                continue;
            }
            let mut next = rel.clone();
            next.insert(o);
            ep.close(&mut next);
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    seen.iter().map(|r| ep.to_pairs(r)).collect()
}

/// The least element-level transfer system containing the class-level
/// pairs `a ∪ b`.
pub fn join(ctx: &GroupContext, a: &BTreeSet<(usize, usize)>, b: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    let ep = ElementPairs::new(ctx);
    let mut rel = BTreeSet::new();
    for &(c, j) in a.iter().chain(b) {
        let h = ctx.poset.index[&ctx.level(c).sub];
        let k = ctx.poset.index[&ctx.level(c).locals[j].rep];
        rel.insert(ep.orbit_of[&(k, h)]);
    }
    ep.close(&mut rel);
    ep.to_pairs(&rel)
}
