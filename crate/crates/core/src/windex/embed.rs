use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::{saturate, WeakIndexingSystem};
use crate::error::{Error, Result};
use crate::group::{GroupContext, Subgroup};
use crate::gset::restrict_local;

/// A subgroup `H ≤ G` with its own context and the identification of each
/// subgroup class of `H` with a `G`-class.
#[derive(Debug)]
pub struct SubgroupEmbedding {
    pub parent: Arc<GroupContext>,
    pub sub: Arc<GroupContext>,
    pub subgroup: Subgroup,
    /// element of `H` (as numbered in `sub`) to element of `G`
    pub elements: Vec<usize>,
    /// per `H`-class `d`: the `G`-class and the map of local classes at `d`
    /// to local classes at that `G`-class
    pub classes: Vec<(usize, Vec<usize>)>,
}

impl SubgroupEmbedding {
    pub fn new(parent: &Arc<GroupContext>, h: &Subgroup) -> Result<Self> {
        let (group, elements) = parent.group.subgroup_as_group(h)?;
        let sub = GroupContext::new(group)?;
        let lift = |s: &Subgroup| Subgroup::from_elements(s.iter().map(|x| elements[x]));
        let mut classes = Vec::with_capacity(sub.num_classes());
        for level in &sub.levels {
            let d = lift(&level.sub);
            let (e, _) = parent.classify(&d)?;
            let map = level.locals.iter().map(|l| parent.transport(&d, &lift(&l.rep))).collect::<Result<Vec<_>>>()?;
            classes.push((e, map));
        }
        Ok(SubgroupEmbedding { parent: parent.clone(), sub, subgroup: *h, elements, classes })
    }

    /// Embedding of the subgroup class representative `(c)` of `G`.
    pub fn of_class(parent: &Arc<GroupContext>, c: usize) -> Result<Self> {
        Self::new(parent, &parent.level(c).sub)
    }

    /// Counts at `H`-level `d` rewritten at the corresponding `G`-level.
    fn push(&self, d: usize, counts: &[u64]) -> (usize, Vec<u64>) {
        let (e, map) = &self.classes[d];
        let mut out = vec![0u64; self.parent.level(*e).len()];
        for (j, &n) in counts.iter().enumerate() {
            out[map[j]] += n;
        }
        (*e, out)
    }
}

fn check_parent(w: &WeakIndexingSystem, emb: &SubgroupEmbedding) -> Result<()> {
    if Arc::ptr_eq(w.context(), &emb.parent) {
        Ok(())
    } else {
        Err(Error::GroupMismatch)
    }
}

fn check_sub(w: &WeakIndexingSystem, emb: &SubgroupEmbedding) -> Result<()> {
    if Arc::ptr_eq(w.context(), &emb.sub) {
        Ok(())
    } else {
        Err(Error::GroupMismatch)
    }
}

/// `Res^G_H W`: the admissible `K`-sets for `K ≤ H` read off at the
/// `G`-class of `K`.
pub fn restrict_system(w: &WeakIndexingSystem, emb: &SubgroupEmbedding) -> Result<WeakIndexingSystem> {
    check_parent(w, emb)?;
    let window = emb.sub.window(w.bound());
    let admissible = window
        .levels
        .iter()
        .enumerate()
        .map(|(d, lw)| {
            let mut bits = FixedBitSet::with_capacity(lw.len());
            for (i, s) in lw.sets.iter().enumerate() {
                let (e, counts) = emb.push(d, &s.counts);
                if w.contains_counts(e, &counts) {
                    bits.insert(i);
                }
            }
            bits
        })
        .collect();
    Ok(WeakIndexingSystem::from_bits(&emb.sub, window, admissible, w.is_saturated()))
}

/// The least `G`-system whose restriction to `H` contains `W`.
pub fn induce_system(w: &WeakIndexingSystem, emb: &SubgroupEmbedding) -> Result<WeakIndexingSystem> {
    check_sub(w, emb)?;
    let gens: Vec<_> = w
        .all_sets()
        .into_iter()
        .map(|s| {
            let (e, counts) = emb.push(s.level, &s.counts);
            crate::gset::OrbitMultiset { level: e, counts }
        })
        .collect();
    saturate(&emb.parent, &gens, w.bound())
}

/// The greatest `G`-system whose restriction to `H` is contained in `W`.
pub fn coinduce_system(w: &WeakIndexingSystem, emb: &SubgroupEmbedding) -> Result<WeakIndexingSystem> {
    check_sub(w, emb)?;
    let parent = &emb.parent;
    let window = parent.window(w.bound());
    // allowed[e]: sets at G-level e every H-incarnation of which lies in W
    let mut allowed: Vec<Option<FixedBitSet>> = vec![None; parent.num_classes()];
    for (d, (e, _)) in emb.classes.iter().enumerate() {
        let lw = &window.levels[*e];
        let mut bits = FixedBitSet::with_capacity(lw.len());
        for s in w.admissible_sets(d) {
            let (_, counts) = emb.push(d, &s.counts);
            if let Some(id) = lw.id(&counts) {
                bits.insert(id);
            }
        }
        match &mut allowed[*e] {
            Some(a) => a.intersect_with(&bits),
            slot => *slot = Some(bits),
        }
    }
    let admissible = (0..parent.num_classes())
        .map(|c| {
            let level = parent.level(c);
            let lw = &window.levels[c];
            let mut bits = FixedBitSet::with_capacity(lw.len());
            for (i, s) in lw.sets.iter().enumerate() {
                let ok = (0..level.len()).all(|m| match &allowed[level.locals[m].global] {
                    None => true,
                    Some(a) => {
                        let r = restrict_local(parent, s, m);
                        window.levels[r.level].id(&r.counts).is_some_and(|id| a.contains(id))
                    }
                });
                if ok {
                    bits.insert(i);
                }
            }
            bits
        })
        .collect();
    let out = WeakIndexingSystem::from_bits(parent, window, admissible, true);
    out.validate()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::windex::Family;

    #[test]
    fn restriction_to_the_trivial_subgroup() {
        let c2 = GroupContext::from_builtin("C2").unwrap();
        let emb = SubgroupEmbedding::of_class(&c2, 0).unwrap();
        let all = restrict_system(&WeakIndexingSystem::complete(&c2, 8), &emb).unwrap();
        assert_eq!(all, WeakIndexingSystem::complete(&emb.sub, 8));
        let f = Family::from_classes(&c2, &[0]).unwrap();
        let r = restrict_system(&WeakIndexingSystem::e0(&c2, &f, 8), &emb).unwrap();
        let sets: Vec<u64> = r.admissible_sets(0).map(|s| s.counts[0]).collect();
        assert_eq!(sets, vec![0, 1]);
    }

    #[test]
    fn induce_and_coinduce_from_e() {
        let c2 = GroupContext::from_builtin("C2").unwrap();
        let emb = SubgroupEmbedding::of_class(&c2, 0).unwrap();
        let triv = WeakIndexingSystem::trivial(&emb.sub, 8);
        let ind = induce_system(&triv, &emb).unwrap();
        assert_eq!(ind.count_at(0), 1);
        assert_eq!(ind.count_at(1), 0);
        let co = coinduce_system(&WeakIndexingSystem::complete(&emb.sub, 8), &emb).unwrap();
        assert_eq!(co, WeakIndexingSystem::complete(&c2, 8));
    }

    #[test]
    fn galois_laws_on_s3() {
        let s3 = GroupContext::from_builtin("S3").unwrap();
        for c in 0..s3.num_classes() {
            let emb = SubgroupEmbedding::of_class(&s3, c).unwrap();
            for w in [
                WeakIndexingSystem::trivial(&emb.sub, 6),
                WeakIndexingSystem::finf(&emb.sub, 6),
                WeakIndexingSystem::nonunital_complete(&emb.sub, 6),
                WeakIndexingSystem::complete(&emb.sub, 6),
            ] {
                let ind = induce_system(&w, &emb).unwrap();
                assert!(w.is_subset(&restrict_system(&ind, &emb).unwrap()));
                let co = coinduce_system(&w, &emb).unwrap();
                assert!(restrict_system(&co, &emb).unwrap().is_subset(&w));
            }
        }
    }

    #[test]
    fn classes_of_a_klein_subgroup_of_s4() {
        let s4 = GroupContext::from_builtin("S4").unwrap();
        let v4 = (0..s4.num_classes()).find(|&c| s4.level(c).sub.len() == 4 && s4.poset.classes[c].members.len() == 1).unwrap();
        let emb = SubgroupEmbedding::of_class(&s4, v4).unwrap();
        assert_eq!(emb.sub.num_classes(), 5);
        // the three order-2 subgroups of the normal Klein group fuse in S4
        let twos: Vec<usize> = (0..5).filter(|&d| emb.sub.level(d).sub.len() == 2).map(|d| emb.classes[d].0).collect();
        assert!(twos.windows(2).all(|w| w[0] == w[1]));
    }
}
