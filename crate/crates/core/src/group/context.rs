use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::lattice::{double_cosets_in, poset_from_subgroups, SubconjugacyPoset};
use super::subgroup::{enumerate_subgroups_capped, Subgroup, DEFAULT_SUBGROUP_CAP};
use super::FiniteGroup;
use crate::error::{Error, Result};
use crate::gset::Window;

/// An `H`-conjugacy class of subgroups of the representative `H` of some
/// level. Orbits `[H/K]` of an `H`-set are labelled by these.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalClass {
    pub rep: Subgroup,
    /// `G`-conjugacy class of `rep`
    pub global: usize,
    /// `[H : rep]`, the size of the orbit `[H/rep]`
    pub index: u64,
    pub order: usize,
    pub label: String,
}

/// Everything about one conjugacy class `(H)` of subgroups of `G` that
/// computations with `H`-sets need.
#[derive(Clone, Debug)]
pub struct Level {
    pub class: usize,
    pub sub: Subgroup,
    pub locals: Vec<LocalClass>,
    local_of: HashMap<Subgroup, (usize, usize)>,
    /// `marks[l][k] = |(H/K)^L|`
    pub marks: Vec<Vec<u64>>,
    /// distinct permutations of the local classes induced by `N_G(H)`
    pub weyl_perms: Vec<Vec<usize>>,
    /// `induce_maps[k][j]`: orbit `[K'/J]` at level `global(k)` induces to
    /// `[H/induce_maps[k][j]]`
    pub induce_maps: Vec<Vec<usize>>,
    /// `restrict[m][k]`: counts of `Res_M [H/K]` at level `global(m)`
    pub restrict: Vec<Vec<Vec<u64>>>,
}

impl Level {
    pub fn top(&self) -> usize {
        self.locals.len() - 1
    }

    pub fn len(&self) -> usize {
        self.locals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locals.is_empty()
    }

    /// Local class of a subgroup `S ≤ H`, with `h ∈ H` such that
    /// `h S h⁻¹` is the local representative.
    pub fn local_of(&self, s: &Subgroup) -> Option<(usize, usize)> {
        self.local_of.get(s).copied()
    }
}

/// A finite group together with its subgroup lattice and the per-level
/// tables used by every other module. Build once, share through [`Arc`].
#[derive(Debug)]
pub struct GroupContext {
    pub group: FiniteGroup,
    pub poset: SubconjugacyPoset,
    pub levels: Vec<Level>,
    windows: Mutex<HashMap<usize, Arc<Window>>>,
}

impl GroupContext {
    pub fn new(group: FiniteGroup) -> Result<Arc<Self>> {
        let subgroups = enumerate_subgroups_capped(&group, DEFAULT_SUBGROUP_CAP)?;
        Ok(Self::from_subgroups(group, subgroups))
    }

    pub fn from_builtin(name: &str) -> Result<Arc<Self>> {
        Self::new(super::builtin(name)?)
    }

    /// Builds the context from an already enumerated (sorted) subgroup list.
    pub fn from_subgroups(group: FiniteGroup, subgroups: Vec<Subgroup>) -> Arc<Self> {
        let poset = poset_from_subgroups(&group, subgroups);
        let mut levels: Vec<Level> = (0..poset.len()).map(|c| build_level(&group, &poset, c)).collect();
        for c in 0..levels.len() {
            let (induce_maps, restrict) = level_tables(&group, &poset, &levels, c);
            levels[c].induce_maps = induce_maps;
            levels[c].restrict = restrict;
        }
        Arc::new(GroupContext { group, poset, levels, windows: Mutex::new(HashMap::new()) })
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn name(&self) -> &str {
        self.group.name().unwrap_or("G")
    }

    pub fn num_classes(&self) -> usize {
        self.poset.len()
    }

    pub fn top(&self) -> usize {
        self.poset.top()
    }

    pub fn level(&self, c: usize) -> &Level {
        &self.levels[c]
    }

    pub fn class_label(&self, c: usize) -> &str {
        self.poset.label(c)
    }

    pub fn class_by_label(&self, label: &str) -> Result<usize> {
        self.poset.class_by_label(label).ok_or_else(|| Error::Parse(format!("no subgroup class labelled {label:?}")))
    }

    /// Local class at level `c` by label; the global label is accepted when it
    /// names a single local class.
    pub fn local_by_label(&self, c: usize, label: &str) -> Result<usize> {
        let locals = &self.levels[c].locals;
        if let Some(k) = locals.iter().position(|l| l.label == label) {
            return Ok(k);
        }
        Err(Error::Parse(format!("no orbit type {label:?} at level {}", self.class_label(c))))
    }

    /// The conjugacy class of a subgroup and some `g` with `g S g⁻¹` equal to
    /// the class representative.
    pub fn classify(&self, s: &Subgroup) -> Result<(usize, usize)> {
        match self.poset.index.get(s) {
            Some(&i) => Ok((self.poset.class_of[i], self.poset.conjugator[i])),
            None => Err(Error::NotASubgroup(format!("{s:?}"))),
        }
    }

    /// For `J ≤ S`, the local class at level `class(S)` that `J` becomes once
    /// `S` is identified with its class representative by its conjugator.
    pub fn transport(&self, s: &Subgroup, j: &Subgroup) -> Result<usize> {
        let (c, t) = self.classify(s)?;
        let moved = self.group.conjugate_subgroup(t, j);
        self.levels[c]
            .local_of(&moved)
            .map(|x| x.0)
            .ok_or_else(|| Error::NotSubconjugate(format!("{j:?} is not a subgroup of {s:?}")))
    }

    /// The actual subgroup of `S` corresponding to local class `k` at level
    /// `class(S)` (inverse of [`transport`](Self::transport)).
    pub fn untransport(&self, s: &Subgroup, k: usize) -> Result<Subgroup> {
        let (c, t) = self.classify(s)?;
        let rep = self.levels[c].locals[k].rep;
        Ok(self.group.conjugate_subgroup(self.group.inv(t), &rep))
    }

    /// `(K) ≤ (H)` in the subconjugacy order.
    pub fn leq(&self, k: usize, h: usize) -> bool {
        self.poset.leq(k, h)
    }

    /// Cached window of all multisets of carrier at most `bound`.
    pub fn window(self: &Arc<Self>, bound: usize) -> Arc<Window> {
        let mut cache = self.windows.lock().expect("window cache poisoned");
        if let Some(w) = cache.get(&bound) {
            return w.clone();
        }
        // a larger cached window truncates cheaply
        let larger = cache.iter().filter(|(b, _)| **b > bound).min_by_key(|(b, _)| **b).map(|(_, w)| w.clone());
        let w = Arc::new(match larger {
            Some(big) => big.truncate(bound),
            None => Window::build(self, bound),
        });
        cache.insert(bound, w.clone());
        w
    }
}

fn build_level(group: &FiniteGroup, poset: &SubconjugacyPoset, c: usize) -> Level {
    let h = poset.classes[c].representative;
    let h_elems = h.elements();
    let inside: Vec<Subgroup> = poset.subgroups.iter().filter(|s| s.is_subset(&h)).copied().collect();
    let mut local_of: HashMap<Subgroup, (usize, usize)> = HashMap::new();
    let mut locals: Vec<LocalClass> = Vec::new();
    for s in &inside {
        if local_of.contains_key(s) {
            continue;
        }
        let k = locals.len();
        for &x in &h_elems {
            let conj = group.conjugate_subgroup(x, s);
            local_of.entry(conj).or_insert((k, group.inv(x)));
        }
        let global = poset.class_of[poset.index[s]];
        locals.push(LocalClass {
            rep: *s,
            global,
            index: (h.len() / s.len()) as u64,
            order: s.len(),
            label: String::new(),
        });
    }
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for l in &locals {
        *seen.entry(l.global).or_default() += 1;
    }
    let mut counter: HashMap<usize, usize> = HashMap::new();
    for l in locals.iter_mut() {
        let glabel = poset.label(l.global);
        l.label = if seen[&l.global] == 1 {
            glabel.to_string()
        } else {
            let j = counter.entry(l.global).or_default();
            *j += 1;
            format!("{glabel}.{j}")
        };
    }
    let n = locals.len();
    let mut marks = vec![vec![0u64; n]; n];
    for (li, l) in locals.iter().enumerate() {
        for (ki, k) in locals.iter().enumerate() {
            if k.order % l.order != 0 {
                continue;
            }
            let count = h_elems
                .iter()
                .filter(|&&x| l.rep.iter().all(|y| k.rep.contains(group.conj(group.inv(x), y))))
                .count();
            marks[li][ki] = (count / k.order) as u64;
        }
    }
    let mut weyl_perms: Vec<Vec<usize>> = Vec::new();
    for x in poset.classes[c].normalizer.iter() {
        let perm: Vec<usize> = locals.iter().map(|l| local_of[&group.conjugate_subgroup(x, &l.rep)].0).collect();
        if perm.iter().enumerate().any(|(i, &p)| i != p) && !weyl_perms.contains(&perm) {
            weyl_perms.push(perm);
        }
    }
    Level { class: c, sub: h, locals, local_of, marks, weyl_perms, induce_maps: Vec::new(), restrict: Vec::new() }
}

type Tables = (Vec<Vec<usize>>, Vec<Vec<Vec<u64>>>);

fn level_tables(group: &FiniteGroup, poset: &SubconjugacyPoset, levels: &[Level], c: usize) -> Tables {
    let level = &levels[c];
    let h = level.sub;
    let conjugator = |s: &Subgroup| poset.conjugator[poset.index[s]];
    let induce_maps = level
        .locals
        .iter()
        .map(|k| {
            let t_inv = group.inv(conjugator(&k.rep));
            levels[k.global]
                .locals
                .iter()
                .map(|j| level.local_of[&group.conjugate_subgroup(t_inv, &j.rep)].0)
                .collect()
        })
        .collect();
    let restrict = level
        .locals
        .iter()
        .map(|m| {
            let t = conjugator(&m.rep);
            let target = &levels[m.global];
            level
                .locals
                .iter()
                .map(|k| {
                    let mut counts = vec![0u64; target.len()];
                    for d in double_cosets_in(group, &h, &m.rep, &k.rep) {
                        let moved = group.conjugate_subgroup(t, &d.intersection);
                        counts[target.local_of[&moved].0] += 1;
                    }
                    counts
                })
                .collect()
        })
        .collect();
    (induce_maps, restrict)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_level_locals_match_global_classes() {
        for name in ["S3", "D8", "A4", "C2xC2"] {
            let ctx = GroupContext::from_builtin(name).unwrap();
            let top = ctx.level(ctx.top());
            assert_eq!(top.len(), ctx.num_classes(), "{name}");
            for (k, l) in top.locals.iter().enumerate() {
                assert_eq!(l.global, k);
                assert_eq!(l.label, ctx.class_label(k));
            }
        }
    }

    #[test]
    fn marks_diagonal_is_weyl_order() {
        let ctx = GroupContext::from_builtin("S4").unwrap();
        let top = ctx.level(ctx.top());
        for k in 0..top.len() {
            assert_eq!(top.marks[k][k] as usize, ctx.poset.classes[k].weyl_order);
        }
    }

    #[test]
    fn restriction_preserves_carrier() {
        let ctx = GroupContext::from_builtin("D8").unwrap();
        for level in &ctx.levels {
            for (m, row) in level.restrict.iter().enumerate() {
                let target = ctx.level(level.locals[m].global);
                for (k, counts) in row.iter().enumerate() {
                    let size: u64 = counts.iter().zip(&target.locals).map(|(n, l)| n * l.index).sum();
                    assert_eq!(size, level.locals[k].index);
                }
            }
        }
    }

    #[test]
    fn s3_restriction_of_c3_cosets_to_c2_is_free() {
        let ctx = GroupContext::from_builtin("S3").unwrap();
        let top = ctx.level(3);
        // Res_{C2} [S3/C3] = [C2/e]
        assert_eq!(top.restrict[1][2], vec![1, 0]);
    }

    #[test]
    fn weyl_perms_of_klein_four_in_s4() {
        let ctx = GroupContext::from_builtin("S4").unwrap();
        // the normal Klein four subgroup: its three C2 subgroups are permuted by S3
        let v = ctx
            .levels
            .iter()
            .find(|l| l.sub.len() == 4 && ctx.poset.classes[l.class].members.len() == 1)
            .unwrap();
        assert!(!v.weyl_perms.is_empty());
    }
}
