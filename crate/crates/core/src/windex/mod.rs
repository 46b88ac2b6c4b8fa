//! Weak indexing systems over a finite group, stored as a finite window of
//! admissible sets.
//!
//! A [`WeakIndexingSystem`] records, for each conjugacy class `(H)`, which
//! `H`-sets of carrier at most the window bound `B` are admissible. Every
//! negative answer is therefore relative to `B`. Systems are built by
//! [`saturate`], which closes generators under
//!
//! * (IS-a) `*_H` is admissible wherever anything is,
//! * (R) restriction along subgroups and conjugation by normalizers,
//! * (IS-b) admissible-indexed coproducts,
//!
//! as far as the window allows.

mod embed;
mod family;
mod saturate;

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

pub use embed::{coinduce_system, induce_system, restrict_system, SubgroupEmbedding};
pub use family::Family;

use crate::error::{Error, Result};
use crate::group::GroupContext;
use crate::gset::{restrict_local, OrbitMultiset, OrbitMultisetJson, Window};
use saturate::{substitute, Saturator};

pub const DEFAULT_BOUND: usize = 8;

#[derive(Clone)]
pub struct WeakIndexingSystem {
    ctx: Arc<GroupContext>,
    window: Arc<Window>,
    admissible: Vec<FixedBitSet>,
    generators: Vec<OrbitMultiset>,
    saturated: bool,
    ambient: Option<Family>,
}

/// Bound-relative membership verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Admissible,
    InadmissibleWithinBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predicates {
    pub has_one_color: bool,
    pub is_unital: bool,
    pub is_almost_unital: bool,
    #[serde(rename = "is_aE_unital")]
    pub is_ae_unital: bool,
    pub is_indexing_system: bool,
}

/// Output of [`tensor_weak_ninfty`]: the Borelified join together with the
/// aE-unitality of both inputs.
#[derive(Clone, Debug)]
pub struct TensorResult {
    pub system: WeakIndexingSystem,
    pub lhs_ae_unital: bool,
    pub rhs_ae_unital: bool,
}

impl PartialEq for WeakIndexingSystem {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.bound() == other.bound() && self.admissible == other.admissible
    }
}

impl Eq for WeakIndexingSystem {}

impl std::hash::Hash for WeakIndexingSystem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.bound().hash(state);
        for a in &self.admissible {
            a.as_slice().hash(state);
        }
    }
}

impl fmt::Debug for WeakIndexingSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for c in 0..self.ctx.num_classes() {
            let sets: Vec<String> = self.admissible_sets(c).map(|s| s.display(&self.ctx)).collect();
            m.entry(&self.ctx.class_label(c), &sets);
        }
        m.finish()
    }
}

fn check_generators(ctx: &GroupContext, bound: usize, generators: &[OrbitMultiset]) -> Result<()> {
    for g in generators {
        if g.level >= ctx.num_classes() || g.counts.len() != ctx.level(g.level).len() {
            return Err(Error::ShapeMismatch("generator does not match the group".into()));
        }
        let carrier = g.carrier(ctx);
        if carrier > bound as u64 {
            return Err(Error::BoundTooSmall { carrier, bound });
        }
    }
    Ok(())
}

/// The least windowed weak indexing system containing `generators`.
pub fn saturate(ctx: &Arc<GroupContext>, generators: &[OrbitMultiset], bound: usize) -> Result<WeakIndexingSystem> {
    check_generators(ctx, bound, generators)?;
    let window = ctx.window(bound);
    let mut sat = Saturator::new(ctx, &window);
    for g in generators {
        sat.add(g.level, &g.counts);
    }
    let admissible = sat.run();
    let mut gens = generators.to_vec();
    gens.sort();
    gens.dedup();
    Ok(WeakIndexingSystem { ctx: ctx.clone(), window, admissible, generators: gens, saturated: true, ambient: None })
}

impl WeakIndexingSystem {
    /// Wraps raw per-level admissible sets without closing them. The result
    /// is marked unsaturated; [`validate`](Self::validate) reports whether it
    /// is a weak indexing system.
    pub fn from_sets(ctx: &Arc<GroupContext>, bound: usize, sets: &[OrbitMultiset]) -> Result<Self> {
        check_generators(ctx, bound, sets)?;
        let window = ctx.window(bound);
        let mut admissible: Vec<FixedBitSet> = window.levels.iter().map(|lw| FixedBitSet::with_capacity(lw.len())).collect();
        for s in sets {
            let id = window.levels[s.level].id(&s.counts).expect("checked against the bound");
            admissible[s.level].insert(id);
        }
        let mut sys = WeakIndexingSystem { ctx: ctx.clone(), window, admissible, generators: sets.to_vec(), saturated: false, ambient: None };
        sys.saturated = sys.validate().is_ok();
        Ok(sys)
    }

    pub(crate) fn from_bits(ctx: &Arc<GroupContext>, window: Arc<Window>, admissible: Vec<FixedBitSet>, saturated: bool) -> Self {
        let mut sys = WeakIndexingSystem { ctx: ctx.clone(), window, admissible, generators: Vec::new(), saturated, ambient: None };
        sys.generators = sys.all_sets();
        sys
    }

    pub(crate) fn from_predicate(ctx: &Arc<GroupContext>, bound: usize, pred: impl Fn(&OrbitMultiset) -> bool) -> Self {
        let window = ctx.window(bound);
        let admissible: Vec<FixedBitSet> = window
            .levels
            .iter()
            .map(|lw| {
                let mut bits = FixedBitSet::with_capacity(lw.len());
                for (i, s) in lw.sets.iter().enumerate() {
                    if pred(s) {
                        bits.insert(i);
                    }
                }
                bits
            })
            .collect();
        let mut sys = WeakIndexingSystem { ctx: ctx.clone(), window, admissible, generators: Vec::new(), saturated: true, ambient: None };
        sys.generators = sys.all_sets();
        sys
    }

    /// The terminal system: everything admissible.
    pub fn complete(ctx: &Arc<GroupContext>, bound: usize) -> Self {
        Self::from_predicate(ctx, bound, |_| true)
    }

    /// The initial one-color system `I^triv`: only `*_H`.
    pub fn trivial(ctx: &Arc<GroupContext>, bound: usize) -> Self {
        Self::from_predicate(ctx, bound, |s| s.is_point(ctx))
    }

    /// The initial indexing system `F^∞`: `n·*_H` for all `n ≥ 0`.
    pub fn finf(ctx: &Arc<GroupContext>, bound: usize) -> Self {
        let top = |s: &OrbitMultiset| ctx.level(s.level).top();
        Self::from_predicate(ctx, bound, |s| s.orbits().all(|(k, _)| k == top(s)))
    }

    /// `I^0_F`: `{∅_V, *_V}` for `V ∈ F` and `{*_V}` otherwise.
    pub fn e0(ctx: &Arc<GroupContext>, family: &Family, bound: usize) -> Self {
        Self::from_predicate(ctx, bound, |s| s.is_point(ctx) || (s.is_empty() && family.contains(s.level)))
    }

    /// The terminal weak indexing system with unit family `F`. Levels in `F`
    /// are complete; at `V ∉ F` a set `S` is admissible when every
    /// restriction `Res_U S` with `U ∉ F` keeps an orbit whose stabilizer
    /// class lies outside `F`. Taking `U = V` removes every set all of whose
    /// orbits lie in `F`, `∅_V` included.
    pub fn terminal_with_unit_family(ctx: &Arc<GroupContext>, family: &Family, bound: usize) -> Self {
        Self::from_predicate(ctx, bound, |s| {
            if family.contains(s.level) {
                return true;
            }
            let level = ctx.level(s.level);
            (0..level.len()).filter(|&m| !family.contains(level.locals[m].global)).all(|m| {
                let r = restrict_local(ctx, s, m);
                let rl = ctx.level(r.level);
                let keeps = r.orbits().any(|(k, _)| !family.contains(rl.locals[k].global));
                keeps
            })
        })
    }

    /// `Comm_nu` over any group: every nonempty set.
    pub fn nonunital_complete(ctx: &Arc<GroupContext>, bound: usize) -> Self {
        Self::terminal_with_unit_family(ctx, &Family::none(ctx), bound)
    }

    pub fn context(&self) -> &Arc<GroupContext> {
        &self.ctx
    }

    pub fn bound(&self) -> usize {
        self.window.bound
    }

    pub fn window(&self) -> &Arc<Window> {
        &self.window
    }

    pub fn generators(&self) -> &[OrbitMultiset] {
        &self.generators
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    /// The color bound recorded by [`extend`](Self::extend) or
    /// [`borelify`](Self::borelify), if any.
    pub fn ambient(&self) -> Option<&Family> {
        self.ambient.as_ref()
    }

    pub fn admissible_sets(&self, level: usize) -> impl Iterator<Item = &OrbitMultiset> + '_ {
        let lw = &self.window.levels[level];
        self.admissible[level].ones().map(move |i| &lw.sets[i])
    }

    pub fn all_sets(&self) -> Vec<OrbitMultiset> {
        (0..self.ctx.num_classes()).flat_map(|c| self.admissible_sets(c).cloned().collect::<Vec<_>>()).collect()
    }

    pub fn count(&self) -> usize {
        self.admissible.iter().map(|a| a.count_ones(..)).sum()
    }

    pub fn count_at(&self, level: usize) -> usize {
        self.admissible[level].count_ones(..)
    }

    pub(crate) fn contains_counts(&self, level: usize, counts: &[u64]) -> bool {
        self.window.levels[level].id(counts).is_some_and(|id| self.admissible[level].contains(id))
    }

    /// Admissibility of a set of carrier at most the bound.
    pub fn membership(&self, s: &OrbitMultiset) -> Result<Membership> {
        if s.level >= self.ctx.num_classes() || s.counts.len() != self.ctx.level(s.level).len() {
            return Err(Error::ShapeMismatch("set does not match the group".into()));
        }
        let carrier = s.carrier(&self.ctx);
        if carrier > self.bound() as u64 {
            return Err(Error::QueryExceedsBound { carrier, bound: self.bound() });
        }
        Ok(if self.contains_counts(s.level, &s.counts) { Membership::Admissible } else { Membership::InadmissibleWithinBound })
    }

    pub fn contains(&self, s: &OrbitMultiset) -> bool {
        self.contains_counts(s.level, &s.counts)
    }

    pub fn is_subset(&self, other: &WeakIndexingSystem) -> bool {
        self.admissible.iter().zip(&other.admissible).all(|(a, b)| a.is_subset(b))
    }

    fn family_from(&self, what: &str, pred: impl Fn(usize) -> bool) -> Result<Family> {
        let members = (0..self.ctx.num_classes()).map(pred).collect();
        Family::new(&self.ctx, members).map_err(|e| Error::NotAFamily(format!("{what} family: {e}")))
    }

    /// `c(I) = {V : *_V admissible}`.
    pub fn color_family(&self) -> Result<Family> {
        self.family_from("color", |c| self.contains(&OrbitMultiset::point(&self.ctx, c)))
    }

    /// `υ(I) = {V : ∅_V admissible}`.
    pub fn unit_family(&self) -> Result<Family> {
        self.family_from("unit", |c| self.contains(&OrbitMultiset::empty(&self.ctx, c)))
    }

    pub fn predicates(&self) -> Predicates {
        let n = self.ctx.num_classes();
        let has_one_color = (0..n).all(|c| self.contains(&OrbitMultiset::point(&self.ctx, c)));
        let is_unital = (0..n).all(|c| self.contains(&OrbitMultiset::empty(&self.ctx, c)));
        let is_ae_unital = (0..n).all(|c| {
            self.contains(&OrbitMultiset::empty(&self.ctx, c)) || self.admissible_sets(c).all(|s| s.is_point(&self.ctx))
        });
        let closed_under_unions = (0..n).all(|c| {
            let sets: Vec<&OrbitMultiset> = self.admissible_sets(c).collect();
            sets.iter().all(|a| {
                sets.iter().all(|b| {
                    let u: Vec<u64> = a.counts.iter().zip(&b.counts).map(|(x, y)| x + y).collect();
                    self.window.levels[c].id(&u).is_none() || self.contains_counts(c, &u)
                })
            })
        });
        Predicates {
            has_one_color,
            is_unital,
            is_almost_unital: is_ae_unital && has_one_color,
            is_ae_unital,
            is_indexing_system: has_one_color && is_unital && closed_under_unions,
        }
    }

    /// Checks IS-a, restriction and conjugation closure, and closure under
    /// every single-orbit substitution that stays in the window.
    pub fn validate(&self) -> Result<()> {
        let ctx = &self.ctx;
        let bound = self.bound() as u64;
        let describe = |s: &OrbitMultiset| format!("{} at level {}", s.display(ctx), ctx.class_label(s.level));
        for c in 0..ctx.num_classes() {
            let level = ctx.level(c);
            let any = self.count_at(c) > 0;
            if any && !self.contains(&OrbitMultiset::point(ctx, c)) {
                return Err(Error::InvalidSystem(format!("IS-a fails at level {}", ctx.class_label(c))));
            }
            for s in self.admissible_sets(c) {
                for m in 0..level.len() {
                    let r = restrict_local(ctx, s, m);
                    if !self.contains(&r) {
                        return Err(Error::InvalidSystem(format!(
                            "restriction of {} to {} is {} which is not admissible",
                            describe(s),
                            level.locals[m].label,
                            r.display(ctx)
                        )));
                    }
                }
                for perm in &level.weyl_perms {
                    let p = s.permute(perm);
                    if !self.contains(&p) {
                        return Err(Error::InvalidSystem(format!("conjugate of {} is not admissible", describe(s))));
                    }
                }
                let carrier = s.carrier(ctx);
                for (k, _) in s.orbits() {
                    let e = level.locals[k].global;
                    let idx = level.locals[k].index;
                    for x in self.admissible_sets(e) {
                        if carrier + idx * x.carrier(ctx) > bound + idx {
                            continue;
                        }
                        let counts = substitute(ctx, s, c, k, x);
                        if !self.contains_counts(c, &counts) {
                            return Err(Error::InvalidSystem(format!(
                                "IS-b fails: substituting {} into an orbit [{}/{}] of {}",
                                x.display(ctx),
                                ctx.class_label(c),
                                level.locals[k].label,
                                describe(s)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn same_group(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// Levelwise intersection.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.same_group(other)?;
        if self.bound() != other.bound() {
            return Err(Error::BoundMismatch(self.bound(), other.bound()));
        }
        let admissible: Vec<FixedBitSet> = self.admissible.iter().zip(&other.admissible).map(|(a, b)| a & b).collect();
        let mut out = WeakIndexingSystem {
            ctx: self.ctx.clone(),
            window: self.window.clone(),
            admissible,
            generators: Vec::new(),
            saturated: self.saturated && other.saturated,
            ambient: None,
        };
        out.generators = out.all_sets();
        Ok(out)
    }

    /// The closure of the union, at the larger of the two bounds.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.join_at(other, self.bound().max(other.bound()))
    }

    pub fn join_at(&self, other: &Self, bound: usize) -> Result<Self> {
        self.same_group(other)?;
        let window = self.ctx.window(bound);
        let mut sat = Saturator::new(&self.ctx, &window);
        for sys in [self, other] {
            for s in sys.all_sets() {
                sat.add(s.level, &s.counts);
            }
        }
        let admissible = sat.run();
        let mut generators: Vec<OrbitMultiset> = self.generators.iter().chain(&other.generators).cloned().collect();
        generators.sort();
        generators.dedup();
        Ok(WeakIndexingSystem { ctx: self.ctx.clone(), window, admissible, generators, saturated: true, ambient: None })
    }

    /// `Bor_F(I) = I ∩ F_F`: drops levels outside `F` and every set with an
    /// orbit whose stabilizer class lies outside `F`.
    pub fn borelify(&self, family: &Family) -> Self {
        let ctx = self.ctx.clone();
        let admissible = (0..ctx.num_classes())
            .map(|c| {
                let lw = &self.window.levels[c];
                let level = ctx.level(c);
                let mut bits = FixedBitSet::with_capacity(lw.len());
                if family.contains(c) {
                    for i in self.admissible[c].ones() {
                        if lw.sets[i].orbits().all(|(k, _)| family.contains(level.locals[k].global)) {
                            bits.insert(i);
                        }
                    }
                }
                bits
            })
            .collect();
        let mut out = WeakIndexingSystem {
            ctx: self.ctx.clone(),
            window: self.window.clone(),
            admissible,
            generators: Vec::new(),
            saturated: self.saturated,
            ambient: Some(family.clone()),
        };
        out.generators = out.all_sets();
        out
    }

    /// The extension along a larger color bound: the same admissible sets,
    /// with the new ambient family recorded.
    pub fn extend(&self, ambient: &Family) -> Self {
        let mut out = self.clone();
        out.ambient = if ambient.is_all() { None } else { Some(ambient.clone()) };
        out
    }

    /// Closes this system again at another bound, with all admissible sets
    /// of the current window as generators.
    pub fn resaturate(&self, bound: usize) -> Result<Self> {
        saturate(&self.ctx, &self.generators, bound.max(self.generators.iter().map(|g| g.carrier(&self.ctx) as usize).max().unwrap_or(0)))
    }

    /// Cuts the window down to a smaller bound.
    pub fn truncate(&self, bound: usize) -> Self {
        let bound = bound.min(self.bound());
        let window = self.ctx.window(bound);
        let admissible = self
            .admissible
            .iter()
            .zip(&window.levels)
            .map(|(a, lw)| {
                let mut bits = FixedBitSet::with_capacity(lw.len());
                bits.extend(a.ones().take_while(|&i| i < lw.len()));
                bits
            })
            .collect();
        let mut out = WeakIndexingSystem {
            ctx: self.ctx.clone(),
            window,
            admissible,
            generators: Vec::new(),
            saturated: self.saturated,
            ambient: self.ambient.clone(),
        };
        out.generators = self.generators.iter().filter(|g| g.carrier(&self.ctx) <= bound as u64).cloned().collect();
        out
    }

    /// Whether `self` and `other` agree on all sets of carrier at most
    /// `bound`.
    pub fn agrees_up_to(&self, other: &Self, bound: usize) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.truncate(bound).admissible == other.truncate(bound).admissible
    }

    /// First set (in window order) on which the two systems differ.
    pub fn first_difference(&self, other: &Self) -> Option<(OrbitMultiset, bool)> {
        let bound = self.bound().min(other.bound());
        let (a, b) = (self.truncate(bound), other.truncate(bound));
        for c in 0..self.ctx.num_classes() {
            let lw = &a.window.levels[c];
            for i in 0..lw.len() {
                let (x, y) = (a.admissible[c].contains(i), b.admissible[c].contains(i));
                if x != y {
                    return Some((lw.sets[i].clone(), x));
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> SystemJson {
        let ctx = &self.ctx;
        SystemJson {
            schema: SYSTEM_SCHEMA.into(),
            group: ctx.name().to_string(),
            bound: self.bound(),
            levels: (0..ctx.num_classes())
                .map(|c| LevelJson {
                    class: ctx.class_label(c).to_string(),
                    admissible: self.admissible_sets(c).map(|s| OrbitMultisetJson::from_multiset(ctx, s)).collect(),
                })
                .collect(),
            generators: self.generators.iter().map(|s| OrbitMultisetJson::from_multiset(ctx, s)).collect(),
            flags: Some(self.predicates()),
        }
    }

    /// Reads a system back; the admissible sets are taken as given and
    /// validated.
    pub fn from_json(ctx: &Arc<GroupContext>, json: &SystemJson) -> Result<Self> {
        let mut sets = Vec::new();
        for level in &json.levels {
            for s in &level.admissible {
                sets.push(s.to_multiset(ctx)?);
            }
        }
        Self::from_sets(ctx, json.bound, &sets)
    }
}

pub const SYSTEM_SCHEMA: &str = "normcalc.system.v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemJson {
    pub schema: String,
    pub group: String,
    pub bound: usize,
    pub levels: Vec<LevelJson>,
    pub generators: Vec<OrbitMultisetJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flags: Option<Predicates>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelJson {
    pub class: String,
    pub admissible: Vec<OrbitMultisetJson>,
}

/// `Bor_{c1 ∩ c2}(W1 ∨ W2)`.
pub fn tensor_weak_ninfty(w1: &WeakIndexingSystem, w2: &WeakIndexingSystem) -> Result<TensorResult> {
    let colors = w1.color_family()?.intersection(&w2.color_family()?);
    let joined = w1.join(w2)?;
    Ok(TensorResult {
        system: joined.borelify(&colors),
        lhs_ae_unital: w1.predicates().is_ae_unital,
        rhs_ae_unital: w2.predicates().is_ae_unital,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(name: &str) -> Arc<GroupContext> {
        GroupContext::from_builtin(name).unwrap()
    }

    #[test]
    fn point_generates_the_trivial_system() {
        for name in ["1", "C2", "S3", "D8"] {
            let c = ctx(name);
            let top = c.top();
            let w = saturate(&c, &[OrbitMultiset::point(&c, top)], 8).unwrap();
            assert_eq!(w, WeakIndexingSystem::trivial(&c, 8), "{name}");
        }
    }

    #[test]
    fn two_points_generate_comm_nu() {
        let c = ctx("1");
        let w = saturate(&c, &[OrbitMultiset::points(&c, 0, 2)], 8).unwrap();
        let counts: Vec<u64> = w.admissible_sets(0).map(|s| s.counts[0]).collect();
        assert_eq!(counts, (1..=8).collect::<Vec<_>>());
        assert_eq!(w, WeakIndexingSystem::nonunital_complete(&c, 8));
        assert!(!w.predicates().is_ae_unital);
    }

    #[test]
    fn inflated_example() {
        let c = ctx("C2");
        let f = Family::from_classes(&c, &[0]).unwrap();
        let w = saturate(&c, &[OrbitMultiset::empty(&c, 0), OrbitMultiset::point(&c, 1)], 8).unwrap();
        assert_eq!(w, WeakIndexingSystem::e0(&c, &f, 8));
        assert!(w.color_family().unwrap().is_all());
        assert_eq!(w.unit_family().unwrap(), f);
        let p = w.predicates();
        assert!(!p.is_unital && p.is_almost_unital);
    }

    #[test]
    fn bound_is_enforced() {
        let c = ctx("C2");
        let big = OrbitMultiset::points(&c, 1, 9);
        assert!(matches!(saturate(&c, &[big.clone()], 8), Err(Error::BoundTooSmall { carrier: 9, bound: 8 })));
        let w = WeakIndexingSystem::complete(&c, 8);
        assert!(matches!(w.membership(&big), Err(Error::QueryExceedsBound { .. })));
    }

    #[test]
    fn membership_examples() {
        let c = ctx("S3");
        let t = WeakIndexingSystem::trivial(&c, 8);
        assert_eq!(t.membership(&OrbitMultiset::point(&c, 2)).unwrap(), Membership::Admissible);
        assert_eq!(t.membership(&OrbitMultiset::points(&c, 3, 2)).unwrap(), Membership::InadmissibleWithinBound);
        let all = WeakIndexingSystem::complete(&c, 8);
        assert!(all.predicates().is_indexing_system);
        assert_eq!(all.membership(&OrbitMultiset::orbit(&c, 3, 0)).unwrap(), Membership::Admissible);
    }

    #[test]
    fn builtins_validate() {
        for name in ["1", "C2", "C4", "S3", "C2xC2", "D8"] {
            let c = ctx(name);
            for f in Family::enumerate(&c) {
                WeakIndexingSystem::e0(&c, &f, 8).validate().unwrap();
                WeakIndexingSystem::terminal_with_unit_family(&c, &f, 8).validate().unwrap();
            }
            WeakIndexingSystem::complete(&c, 8).validate().unwrap();
            WeakIndexingSystem::trivial(&c, 8).validate().unwrap();
            WeakIndexingSystem::finf(&c, 8).validate().unwrap();
        }
    }

    #[test]
    fn terminal_with_unit_family_over_c2() {
        let c = ctx("C2");
        let e = Family::from_classes(&c, &[0]).unwrap();
        let w = WeakIndexingSystem::terminal_with_unit_family(&c, &e, 8);
        // orbits of [C2/e] all have stabilizer in F, so it goes; 2·* stays
        assert!(!w.contains(&OrbitMultiset::orbit(&c, 1, 0)));
        assert!(w.contains(&OrbitMultiset::points(&c, 1, 2)));
        assert!(w.contains(&OrbitMultiset { level: 1, counts: vec![1, 1] }));
        assert!(!w.contains(&OrbitMultiset::empty(&c, 1)));
        assert_eq!(w.unit_family().unwrap(), e);
        assert_eq!(WeakIndexingSystem::terminal_with_unit_family(&c, &Family::all(&c), 8), WeakIndexingSystem::complete(&c, 8));
    }

    #[test]
    fn borelification() {
        let c = ctx("C2");
        let e = Family::from_classes(&c, &[0]).unwrap();
        let b = WeakIndexingSystem::complete(&c, 8).borelify(&e);
        assert_eq!(b.count_at(0), 9);
        assert_eq!(b.count_at(1), 0);
        let i0 = WeakIndexingSystem::e0(&c, &e, 8);
        assert_eq!(i0.borelify(&Family::all(&c)), i0);
        let b = i0.borelify(&e);
        assert_eq!(b.count_at(0), 2);
        assert_eq!(b.count_at(1), 0);
        b.validate().unwrap();
    }

    #[test]
    fn lattice_examples() {
        let c = ctx("C4");
        let t = WeakIndexingSystem::trivial(&c, 8);
        let all = WeakIndexingSystem::complete(&c, 8);
        assert_eq!(t.meet(&all).unwrap(), t);
        assert_eq!(t.join(&t).unwrap(), t);
        let f = WeakIndexingSystem::finf(&c, 8);
        assert_eq!(t.join(&f).unwrap(), f);
        assert!(matches!(t.meet(&WeakIndexingSystem::trivial(&c, 6)), Err(Error::BoundMismatch(8, 6))));
        let other = ctx("C4");
        assert!(matches!(t.meet(&WeakIndexingSystem::trivial(&other, 8)), Err(Error::GroupMismatch)));
    }

    #[test]
    fn tensor_unit_and_idempotence() {
        let c = ctx("S3");
        let t = WeakIndexingSystem::trivial(&c, 8);
        for w in [WeakIndexingSystem::complete(&c, 8), WeakIndexingSystem::finf(&c, 8)] {
            assert_eq!(tensor_weak_ninfty(&t, &w).unwrap().system, w);
            assert_eq!(tensor_weak_ninfty(&w, &w).unwrap().system, w);
        }
    }

    #[test]
    fn truncation_and_agreement() {
        let c = ctx("C2xC2");
        let a = WeakIndexingSystem::complete(&c, 10);
        let b = WeakIndexingSystem::complete(&c, 6);
        assert!(a.agrees_up_to(&b, 6));
        assert_eq!(a.truncate(6), b);
        assert!(a.first_difference(&b).is_none());
    }
}
