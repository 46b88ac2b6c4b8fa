//! Transfer systems: the pairs `K → H` along which an indexing system admits
//! the orbit `[H/K]`.
//!
//! A relation is stored as pairs `(c, k)` where `c` is the class of `H` and
//! `k` a local class at that level (a subgroup of the representative `H_c`
//! up to `H_c`-conjugacy) other than `H_c` itself. Pairs are kept closed
//! under the normalizer action, so they describe `K ≤ H` up to simultaneous
//! conjugation exactly.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupContext;
use crate::gset::OrbitMultiset;
use crate::windex::WeakIndexingSystem;

/// Largest group for which [`enumerate_transfer_systems`] runs.
pub const ENUMERATION_CAP: usize = 60;

#[derive(Clone)]
pub struct TransferSystem {
    ctx: Arc<GroupContext>,
    pairs: BTreeSet<(usize, usize)>,
}

impl PartialEq for TransferSystem {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.pairs == other.pairs
    }
}

impl Eq for TransferSystem {}

impl std::hash::Hash for TransferSystem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.pairs.hash(state);
    }
}

impl std::fmt::Debug for TransferSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.display())
    }
}

/// Closure tables over the nonreflexive pairs of a group.
struct PairTable {
    pairs: Vec<(usize, usize)>,
    id: Vec<Vec<Option<usize>>>,
    /// pair ids forced by a pair on its own (conjugates and restrictions)
    forced: Vec<Vec<usize>>,
    /// `(lower, result)` for each pair used as the upper factor
    compose_up: Vec<Vec<(usize, usize)>>,
    /// `(upper, result)` for each pair used as the lower factor
    compose_down: Vec<Vec<(usize, usize)>>,
}

impl PairTable {
    fn new(ctx: &GroupContext) -> Self {
        let mut pairs = Vec::new();
        let mut id = Vec::with_capacity(ctx.num_classes());
        for (c, level) in ctx.levels.iter().enumerate() {
            let mut row = vec![None; level.len()];
            for (k, slot) in row.iter_mut().enumerate() {
                if k != level.top() {
                    *slot = Some(pairs.len());
                    pairs.push((c, k));
                }
            }
            id.push(row);
        }
        let get = |c: usize, k: usize| id[c][k];
        let mut forced = vec![Vec::new(); pairs.len()];
        let mut compose_up = vec![Vec::new(); pairs.len()];
        let mut compose_down = vec![Vec::new(); pairs.len()];
        for (p, &(c, k)) in pairs.iter().enumerate() {
            let level = ctx.level(c);
            for perm in &level.weyl_perms {
                forced[p].extend(get(c, perm[k]));
            }
            for m in 0..level.len() {
                let e = level.locals[m].global;
                for (j, &n) in level.restrict[m][k].iter().enumerate() {
                    if n > 0 {
                        forced[p].extend(get(e, j));
                    }
                }
            }
            forced[p].sort_unstable();
            forced[p].dedup();
            // L ≤ K_k at the level of K_k, composed with K_k ≤ H
            let kc = level.locals[k].global;
            for j in 0..ctx.level(kc).len() {
                if let Some(q) = get(kc, j) {
                    if let Some(r) = get(c, level.induce_maps[k][j]) {
                        compose_up[p].push((q, r));
                        compose_down[q].push((p, r));
                    }
                }
            }
        }
        PairTable { pairs, id, forced, compose_up, compose_down }
    }

    fn len(&self) -> usize {
        self.pairs.len()
    }

    /// Closes `set` after inserting `new`; returns false as soon as an
    /// element of `forbidden` is reached.
    fn close_with(&self, set: &mut FixedBitSet, new: impl IntoIterator<Item = usize>, forbidden: Option<&FixedBitSet>) -> bool {
        let mut queue: VecDeque<usize> = VecDeque::new();
        let push = |set: &mut FixedBitSet, queue: &mut VecDeque<usize>, p: usize| -> bool {
            if forbidden.is_some_and(|f| f.contains(p)) {
                return false;
            }
            if !set.put(p) {
                queue.push_back(p);
            }
            true
        };
        for p in new {
            if !push(set, &mut queue, p) {
                return false;
            }
        }
        while let Some(p) = queue.pop_front() {
            for &q in &self.forced[p] {
                if !push(set, &mut queue, q) {
                    return false;
                }
            }
            for &(q, r) in &self.compose_up[p] {
                if set.contains(q) && !push(set, &mut queue, r) {
                    return false;
                }
            }
            for &(q, r) in &self.compose_down[p] {
                if set.contains(q) && !push(set, &mut queue, r) {
                    return false;
                }
            }
        }
        true
    }

    fn to_bits(&self, pairs: &BTreeSet<(usize, usize)>) -> FixedBitSet {
        let mut bits = FixedBitSet::with_capacity(self.len());
        for &(c, k) in pairs {
            if let Some(p) = self.id[c][k] {
                bits.insert(p);
            }
        }
        bits
    }

    fn from_bits(&self, bits: &FixedBitSet) -> BTreeSet<(usize, usize)> {
        bits.ones().map(|p| self.pairs[p]).collect()
    }
}

fn check_pair(ctx: &GroupContext, (c, k): (usize, usize)) -> Result<()> {
    if c >= ctx.num_classes() || k >= ctx.level(c).len() {
        return Err(Error::ShapeMismatch(format!("pair ({c}, {k}) is out of range")));
    }
    Ok(())
}

impl TransferSystem {
    /// The empty relation.
    pub fn empty(ctx: &Arc<GroupContext>) -> Self {
        TransferSystem { ctx: ctx.clone(), pairs: BTreeSet::new() }
    }

    /// Every `K ≤ H`.
    pub fn complete(ctx: &Arc<GroupContext>) -> Self {
        TransferSystem { ctx: ctx.clone(), pairs: PairTable::new(ctx).pairs.into_iter().collect() }
    }

    /// The least transfer system containing the given `(level, local)` pairs.
    /// Reflexive pairs are ignored.
    pub fn generated(ctx: &Arc<GroupContext>, pairs: &[(usize, usize)]) -> Result<Self> {
        for &p in pairs {
            check_pair(ctx, p)?;
        }
        let table = PairTable::new(ctx);
        let mut bits = FixedBitSet::with_capacity(table.len());
        table.close_with(&mut bits, pairs.iter().filter_map(|&(c, k)| table.id[c][k]), None);
        Ok(TransferSystem { ctx: ctx.clone(), pairs: table.from_bits(&bits) })
    }

    /// Takes the pairs as given and checks the axioms.
    pub fn from_pairs(ctx: &Arc<GroupContext>, pairs: &[(usize, usize)]) -> Result<Self> {
        let closed = Self::generated(ctx, pairs)?;
        let given: BTreeSet<(usize, usize)> = pairs.iter().copied().filter(|&(c, k)| k != ctx.level(c).top()).collect();
        if closed.pairs != given {
            let missing = closed.pairs.difference(&given).next().copied().expect("closure only adds pairs");
            return Err(Error::InvalidSystem(format!(
                "relation is not a transfer system: it forces {}",
                pair_label(ctx, missing)
            )));
        }
        Ok(closed)
    }

    /// One generating transfer `K → H` given by class labels, with `K` named
    /// by its local label at `H`.
    pub fn generated_by_labels(ctx: &Arc<GroupContext>, pairs: &[(&str, &str)]) -> Result<Self> {
        let mut out = Vec::new();
        for (k, h) in pairs {
            let c = ctx.class_by_label(h)?;
            out.push((c, ctx.local_by_label(c, k)?));
        }
        Self::generated(ctx, &out)
    }

    pub fn context(&self) -> &Arc<GroupContext> {
        &self.ctx
    }

    /// Nonreflexive pairs, sorted.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Whether `K_k → H_c`; reflexive pairs always hold.
    pub fn contains(&self, c: usize, k: usize) -> bool {
        k == self.ctx.level(c).top() || self.pairs.contains(&(c, k))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.pairs.is_subset(&other.pairs)
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        Ok(TransferSystem { ctx: self.ctx.clone(), pairs: self.pairs.intersection(&other.pairs).copied().collect() })
    }

    /// Pairs admitting an alternating chain of transfers from both inputs:
    /// transitive closure of the union, then restriction closure, repeated
    /// to a fixed point.
    pub fn join_rubin(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        let table = PairTable::new(&self.ctx);
        let mut bits = table.to_bits(&self.pairs);
        bits.union_with(&table.to_bits(&other.pairs));
        loop {
            let before = bits.count_ones(..);
            // transitive closure
            let mut changed = true;
            while changed {
                changed = false;
                for p in bits.ones().collect::<Vec<_>>() {
                    for &(q, r) in &table.compose_up[p] {
                        if bits.contains(q) && !bits.put(r) {
                            changed = true;
                        }
                    }
                }
            }
            // restriction and conjugation
            for p in bits.ones().collect::<Vec<_>>() {
                for &q in &table.forced[p] {
                    bits.insert(q);
                }
            }
            if bits.count_ones(..) == before {
                break;
            }
        }
        Ok(TransferSystem { ctx: self.ctx.clone(), pairs: table.from_bits(&bits) })
    }

    /// The indexing system whose admissible `H`-sets are those all of whose
    /// orbits `[H/K]` have `K → H`.
    pub fn to_indexing_system(&self, bound: usize) -> WeakIndexingSystem {
        WeakIndexingSystem::from_predicate(&self.ctx, bound, |s| s.orbits().all(|(k, _)| self.contains(s.level, k)))
    }

    /// `{K → H : [H/K] admissible}`. Bound-relative: pairs with index above
    /// the bound are never seen.
    pub fn underlying(w: &WeakIndexingSystem) -> Self {
        let ctx = w.context();
        let mut pairs = BTreeSet::new();
        for c in 0..ctx.num_classes() {
            let level = ctx.level(c);
            for k in 0..level.len() {
                if k != level.top() && w.contains(&OrbitMultiset::orbit(ctx, c, k)) {
                    pairs.insert((c, k));
                }
            }
        }
        TransferSystem { ctx: ctx.clone(), pairs }
    }

    pub fn display(&self) -> String {
        let items: Vec<String> = self.pairs.iter().map(|&p| pair_label(&self.ctx, p)).collect();
        format!("{{{}}}", items.join(", "))
    }

    pub fn to_json(&self) -> TransferJson {
        TransferJson {
            schema: TRANSFER_SCHEMA.into(),
            group: self.ctx.name().to_string(),
            relations: self
                .pairs
                .iter()
                .map(|&(c, k)| [self.ctx.level(c).locals[k].label.clone(), self.ctx.class_label(c).to_string()])
                .collect(),
        }
    }

    pub fn from_json(ctx: &Arc<GroupContext>, json: &TransferJson) -> Result<Self> {
        let mut pairs = Vec::new();
        for [k, h] in &json.relations {
            let c = ctx.class_by_label(h)?;
            pairs.push((c, ctx.local_by_label(c, k)?));
        }
        Self::from_pairs(ctx, &pairs)
    }

    /// Graphviz drawing: one node per subgroup class, one edge per transfer.
    pub fn to_dot(&self) -> String {
        let ctx = &self.ctx;
        let mut out = String::from("digraph transfers {\n  rankdir=BT;\n");
        for c in 0..ctx.num_classes() {
            let _ = writeln!(out, "  n{c} [label=\"{}\"];", ctx.class_label(c));
        }
        for &(c, k) in &self.pairs {
            let local = &ctx.level(c).locals[k];
            if local.label == ctx.class_label(local.global) {
                let _ = writeln!(out, "  n{} -> n{c};", local.global);
            } else {
                let _ = writeln!(out, "  n{} -> n{c} [label=\"{}\"];", local.global, local.label);
            }
        }
        out.push_str("}\n");
        out
    }
}

fn pair_label(ctx: &GroupContext, (c, k): (usize, usize)) -> String {
    format!("{}→{}", ctx.level(c).locals[k].label, ctx.class_label(c))
}

pub const TRANSFER_SCHEMA: &str = "normcalc.transfer.v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferJson {
    #[serde(default)]
    pub schema: String,
    #[serde(default)]
    pub group: String,
    pub relations: Vec<[String; 2]>,
}

/// Every transfer system of `G`, sorted by size and then by pairs.
pub fn enumerate_transfer_systems(ctx: &Arc<GroupContext>) -> Result<Vec<TransferSystem>> {
    if ctx.order() > ENUMERATION_CAP {
        return Err(Error::GroupTooLarge { order: ctx.order(), cap: ENUMERATION_CAP });
    }
    let table = PairTable::new(ctx);
    let n = table.len();
    let mut found = Vec::new();
    branch(&table, 0, FixedBitSet::with_capacity(n), FixedBitSet::with_capacity(n), &mut found);
    let mut systems: Vec<TransferSystem> =
        found.iter().map(|bits| TransferSystem { ctx: ctx.clone(), pairs: table.from_bits(bits) }).collect();
    systems.sort_by(|a, b| (a.len(), &a.pairs).cmp(&(b.len(), &b.pairs)));
    Ok(systems)
}

/// Decides pair `i` in or out; every closed set is reached exactly once.
fn branch(table: &PairTable, i: usize, set: FixedBitSet, excluded: FixedBitSet, out: &mut Vec<FixedBitSet>) {
    if i == table.len() {
        out.push(set);
        return;
    }
    if set.contains(i) {
        return branch(table, i + 1, set, excluded, out);
    }
    let mut with = set.clone();
    if table.close_with(&mut with, [i], Some(&excluded)) {
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut without = excluded.clone();
        without.insert(i);
        if i < 6 {
            rayon::join(
                || branch(table, i + 1, with, excluded, &mut left),
                || branch(table, i + 1, set, without, &mut right),
            );
        } else {
            branch(table, i + 1, with, excluded, &mut left);
            branch(table, i + 1, set, without, &mut right);
        }
        out.append(&mut left);
        out.append(&mut right);
    } else {
        let mut without = excluded;
        without.insert(i);
        branch(table, i + 1, set, without, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(name: &str) -> Arc<GroupContext> {
        GroupContext::from_builtin(name).unwrap()
    }

    #[test]
    fn counts_for_small_groups() {
        for (name, n) in [("1", 1), ("C2", 2), ("C4", 5), ("C8", 14), ("C2xC2", 19), ("S3", 9)] {
            assert_eq!(enumerate_transfer_systems(&ctx(name)).unwrap().len(), n, "{name}");
        }
    }

    #[test]
    fn enumeration_is_capped() {
        assert!(matches!(enumerate_transfer_systems(&ctx("S5")), Err(Error::GroupTooLarge { .. })));
    }

    #[test]
    fn rubin_join_on_c4() {
        let c = ctx("C4");
        let a = TransferSystem::generated_by_labels(&c, &[("1", "2")]).unwrap();
        let b = TransferSystem::generated_by_labels(&c, &[("2", "4")]).unwrap();
        let j = a.join_rubin(&b).unwrap();
        assert!(j.contains(2, 0));
        assert_eq!(j, TransferSystem::complete(&c));
        assert_eq!(a.join_rubin(&a).unwrap(), a);
        assert_eq!(TransferSystem::empty(&c).join_rubin(&b).unwrap(), b);
        assert!(a.meet(&b).unwrap().is_empty());
    }

    #[test]
    fn restriction_is_forced() {
        // 1 → 4 in C4 restricts to 1 → 2
        let c = ctx("C4");
        let t = TransferSystem::generated_by_labels(&c, &[("1", "4")]).unwrap();
        assert!(t.contains(1, 0));
        assert!(!t.contains(2, 1));
        assert!(TransferSystem::from_pairs(&c, &[(2, 0)]).is_err());
    }

    #[test]
    fn conversion_round_trip() {
        let c = ctx("S3");
        assert_eq!(TransferSystem::empty(&c).to_indexing_system(8), WeakIndexingSystem::finf(&c, 8));
        assert_eq!(TransferSystem::complete(&c).to_indexing_system(8), WeakIndexingSystem::complete(&c, 8));
        for t in enumerate_transfer_systems(&c).unwrap() {
            let w = t.to_indexing_system(6);
            w.validate().unwrap();
            assert!(w.predicates().is_indexing_system);
            assert_eq!(TransferSystem::underlying(&w), t);
        }
    }

    #[test]
    fn json_round_trip() {
        let c = ctx("C2xC2");
        for t in enumerate_transfer_systems(&c).unwrap() {
            let back = TransferSystem::from_json(&c, &t.to_json()).unwrap();
            assert_eq!(back, t);
        }
    }
}
