//! Representations through their fixed-point dimensions, and the arities
//! they support: an `H`-set `S` is `V`-admissible when `S` embeds
//! `H`-equivariantly into `V`.
//!
//! An orbit `[H/K]` embeds when `V` has a point with stabilizer exactly `K`,
//! that is when `V^K` is not covered by the `V^L` for `K ⊊ L ≤ H`. Over the
//! reals a vector space is never a finite union of proper subspaces, so
//! this happens iff `V^L ≠ V^K` for each such `L`. A nonzero `V^K` then has
//! infinitely many such points; `V^K = 0` only offers the origin, whose
//! stabilizer is `H`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupContext;
use crate::gset::{restrict_local, OrbitMultiset};
use crate::windex::WeakIndexingSystem;

/// A natural number or `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dim {
    Fin(u64),
    Inf,
}

impl Dim {
    pub fn is_zero(self) -> bool {
        self == Dim::Fin(0)
    }

    pub fn add(self, other: Dim) -> Dim {
        match (self, other) {
            (Dim::Fin(a), Dim::Fin(b)) => Dim::Fin(a + b),
            _ => Dim::Inf,
        }
    }

    /// Product with `0 · ∞ = 0`.
    pub fn mul(self, other: Dim) -> Dim {
        match (self, other) {
            (Dim::Fin(0), _) | (_, Dim::Fin(0)) => Dim::Fin(0),
            (Dim::Fin(a), Dim::Fin(b)) => Dim::Fin(a * b),
            _ => Dim::Inf,
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Fin(n) => write!(f, "{n}"),
            Dim::Inf => write!(f, "∞"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DimRepr {
    Fin(u64),
    Word(String),
}

impl Serialize for Dim {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Dim::Fin(n) => DimRepr::Fin(*n),
            Dim::Inf => DimRepr::Word("inf".into()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Dim {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match DimRepr::deserialize(d)? {
            DimRepr::Fin(n) => Ok(Dim::Fin(n)),
            DimRepr::Word(w) if matches!(w.as_str(), "inf" | "∞" | "infinity") => Ok(Dim::Inf),
            DimRepr::Word(w) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {w:?}"))),
        }
    }
}

/// A summand `mult · W` with `W` given by its fixed-point dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Part {
    pub dims: Vec<Dim>,
    pub mult: Dim,
}

/// A real representation remembered through the fixed-point dimensions of
/// its summands. Keeping summands apart matters for infinite multiples:
/// `∞ρ` and `∞·triv` have the same dimensions but different fixed-point
/// subspaces inside each other.
#[derive(Clone)]
pub struct DimensionFunction {
    ctx: Arc<GroupContext>,
    parts: Vec<Part>,
    synthetic: bool,
}

impl PartialEq for DimensionFunction {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.dims() == other.dims() && self.exactness() == other.exactness()
    }
}

impl fmt::Debug for DimensionFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

fn check_antitone(ctx: &GroupContext, dims: &[Dim]) -> Result<()> {
    if dims.len() != ctx.num_classes() {
        return Err(Error::ShapeMismatch(format!("{} dimensions for {} classes", dims.len(), ctx.num_classes())));
    }
    for k in 0..dims.len() {
        for l in 0..dims.len() {
            if ctx.leq(k, l) && dims[l] > dims[k] {
                return Err(Error::NotAntitone(format!(
                    "dim V^{} = {} exceeds dim V^{} = {}",
                    ctx.class_label(l),
                    dims[l],
                    ctx.class_label(k),
                    dims[k]
                )));
            }
        }
    }
    Ok(())
}

impl DimensionFunction {
    pub fn zero(ctx: &Arc<GroupContext>) -> Self {
        DimensionFunction { ctx: ctx.clone(), parts: Vec::new(), synthetic: false }
    }

    /// `mult · ℝ[X]` for a `G`-set `X`: `dim ℝ[X]^K` is the number of
    /// `K`-orbits of `X`.
    pub fn from_permutation_rep(ctx: &Arc<GroupContext>, x: &OrbitMultiset, mult: Dim) -> Result<Self> {
        if x.level != ctx.top() {
            return Err(Error::ShapeMismatch("permutation representations are built from G-sets".into()));
        }
        let dims = (0..ctx.num_classes()).map(|k| Dim::Fin(restrict_local(ctx, x, k).num_orbits())).collect();
        Ok(DimensionFunction { ctx: ctx.clone(), parts: vec![Part { dims, mult }], synthetic: false })
    }

    pub fn trivial(ctx: &Arc<GroupContext>, mult: Dim) -> Self {
        Self::from_permutation_rep(ctx, &OrbitMultiset::point(ctx, ctx.top()), mult).expect("point is a G-set")
    }

    /// `mult · ℝ[G]`.
    pub fn regular(ctx: &Arc<GroupContext>, mult: Dim) -> Self {
        Self::from_permutation_rep(ctx, &OrbitMultiset::orbit(ctx, ctx.top(), 0), mult).expect("free orbit is a G-set")
    }

    /// The sign character with the given kernel, a normal subgroup of index
    /// two.
    pub fn sign(ctx: &Arc<GroupContext>, kernel: usize, mult: Dim) -> Result<Self> {
        let class = &ctx.poset.classes[kernel];
        if class.members.len() != 1 || 2 * class.order != ctx.order() {
            return Err(Error::NotASubgroup(format!("({}) is not a normal subgroup of index 2", ctx.class_label(kernel))));
        }
        let dims = (0..ctx.num_classes()).map(|k| Dim::Fin(ctx.leq(k, kernel) as u64)).collect();
        Ok(DimensionFunction { ctx: ctx.clone(), parts: vec![Part { dims, mult }], synthetic: false })
    }

    /// An explicit antitone table. No representation need realize it, so
    /// the result is flagged synthetic; two `∞` entries are read as equal
    /// fixed-point subspaces.
    pub fn from_table(ctx: &Arc<GroupContext>, dims: Vec<Dim>) -> Result<Self> {
        check_antitone(ctx, &dims)?;
        Ok(DimensionFunction { ctx: ctx.clone(), parts: vec![Part { dims, mult: Dim::Fin(1) }], synthetic: true })
    }

    pub fn from_parts(ctx: &Arc<GroupContext>, parts: Vec<Part>, synthetic: bool) -> Result<Self> {
        for p in &parts {
            check_antitone(ctx, &p.dims)?;
        }
        Ok(DimensionFunction { ctx: ctx.clone(), parts, synthetic })
    }

    pub fn context(&self) -> &Arc<GroupContext> {
        &self.ctx
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn is_synthetic(&self) -> bool {
        self.synthetic
    }

    pub fn dim(&self, k: usize) -> Dim {
        self.parts.iter().fold(Dim::Fin(0), |acc, p| acc.add(p.mult.mul(p.dims[k])))
    }

    pub fn dims(&self) -> Vec<Dim> {
        (0..self.ctx.num_classes()).map(|k| self.dim(k)).collect()
    }

    /// Whether `V^L` is strictly smaller than `V^K` for `(K) ≤ (L)`.
    fn drops(&self, k: usize, l: usize) -> bool {
        self.parts.iter().any(|p| !p.mult.is_zero() && p.dims[k] > p.dims[l])
    }

    /// Per level and local class, the multiplicity bound for that orbit type.
    fn exactness(&self) -> Vec<Vec<Dim>> {
        let ctx = &self.ctx;
        ctx.levels
            .iter()
            .map(|level| {
                let h = level.sub;
                (0..level.len())
                    .map(|k| {
                        let kk = level.locals[k].rep;
                        let kc = level.locals[k].global;
                        let exact = ctx
                            .poset
                            .subgroups
                            .iter()
                            .filter(|l| kk.is_subset(l) && **l != kk && l.is_subset(&h))
                            .all(|l| self.drops(kc, ctx.poset.class_of[ctx.poset.index[l]]));
                        match (exact, self.dim(kc).is_zero()) {
                            (false, _) => Dim::Fin(0),
                            (true, false) => Dim::Inf,
                            (true, true) => Dim::Fin((k == level.top()) as u64),
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// How many orbits `[H_c/K_k]` fit into `V` at once.
    pub fn capacity(&self, c: usize, k: usize) -> Dim {
        self.exactness()[c][k]
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if !Arc::ptr_eq(&self.ctx, &other.ctx) {
            return Err(Error::GroupMismatch);
        }
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Ok(DimensionFunction { ctx: self.ctx.clone(), parts, synthetic: self.synthetic || other.synthetic })
    }

    pub fn scale(&self, mult: Dim) -> Self {
        let parts = self.parts.iter().map(|p| Part { dims: p.dims.clone(), mult: p.mult.mul(mult) }).collect();
        DimensionFunction { ctx: self.ctx.clone(), parts, synthetic: self.synthetic }
    }

    /// `V ≃ V ⊕ V`, i.e. every dimension is `0` or `∞`.
    pub fn is_weak_universe(&self) -> bool {
        self.dims().iter().all(|d| matches!(d, Dim::Fin(0) | Dim::Inf))
    }

    /// Whether `self` is a summand of `other` (each part of `self` occurs in
    /// `other` with at least its multiplicity).
    pub fn is_summand_of(&self, other: &Self) -> bool {
        let tally = |parts: &[Part]| {
            let mut m: BTreeMap<Vec<Dim>, Dim> = BTreeMap::new();
            for p in parts {
                let e = m.entry(p.dims.clone()).or_insert(Dim::Fin(0));
                *e = e.add(p.mult);
            }
            m
        };
        let ours = tally(&self.parts);
        let theirs = tally(&other.parts);
        ours.iter().all(|(d, n)| n.is_zero() || theirs.get(d).is_some_and(|m| m >= n))
    }

    /// `F^V`: the windowed system of `V`-embeddable sets.
    pub fn arity_support(&self, bound: usize) -> Result<WeakIndexingSystem> {
        let caps = self.exactness();
        let w = WeakIndexingSystem::from_predicate(&self.ctx, bound, |s| {
            s.orbits().all(|(k, n)| match caps[s.level][k] {
                Dim::Inf => true,
                Dim::Fin(c) => n <= c,
            })
        });
        w.validate()?;
        Ok(w)
    }

    pub fn display(&self) -> String {
        let items: Vec<String> =
            self.dims().iter().enumerate().map(|(k, d)| format!("{}:{d}", self.ctx.class_label(k))).collect();
        format!("({})", items.join(", "))
    }

    pub fn to_json(&self) -> DimensionJson {
        DimensionJson {
            schema: REP_SCHEMA.into(),
            dims: (0..self.ctx.num_classes()).map(|k| (self.ctx.class_label(k).to_string(), self.dim(k))).collect(),
            parts: Some(self.parts.clone()),
            synthetic: self.synthetic,
            weak_universe: Some(self.is_weak_universe()),
        }
    }

    /// Reads `parts` when present, otherwise the `dims` table (synthetic).
    pub fn from_json(ctx: &Arc<GroupContext>, json: &DimensionJson) -> Result<Self> {
        if let Some(parts) = &json.parts {
            return Self::from_parts(ctx, parts.clone(), json.synthetic);
        }
        let mut dims = vec![None; ctx.num_classes()];
        for (label, d) in &json.dims {
            dims[ctx.class_by_label(label)?] = Some(*d);
        }
        let dims = dims
            .into_iter()
            .enumerate()
            .map(|(k, d)| d.ok_or_else(|| Error::Parse(format!("no dimension for class {}", ctx.class_label(k)))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_table(ctx, dims)
    }
}

pub const REP_SCHEMA: &str = "normcalc.rep.v1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionJson {
    #[serde(default)]
    pub schema: String,
    pub dims: BTreeMap<String, Dim>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<Part>>,
    #[serde(default)]
    pub synthetic: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weak_universe: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditivityReport {
    pub holds: bool,
    pub bound: usize,
    /// admissible sets in `F^V ∨ F^W` and in `F^{V⊕W}`
    pub join_count: usize,
    pub sum_count: usize,
    /// first set on which the sides differ, and whether the join has it
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<(String, bool)>,
}

/// Compares `F^V ∨ F^W` with `F^{V⊕W}` inside the window.
pub fn check_additivity(v: &DimensionFunction, w: &DimensionFunction, bound: usize) -> Result<AdditivityReport> {
    let sum = v.direct_sum(w)?;
    let join = v.arity_support(bound)?.join(&w.arity_support(bound)?)?;
    let direct = sum.arity_support(bound)?;
    let discrepancy = join.first_difference(&direct).map(|(s, in_join)| {
        let ctx = v.context();
        (format!("{} at level {}", s.display(ctx), ctx.class_label(s.level)), in_join)
    });
    Ok(AdditivityReport { holds: discrepancy.is_none(), bound, join_count: join.count(), sum_count: direct.count(), discrepancy })
}

/// A named representation for catalogs.
#[derive(Clone, Debug)]
pub struct NamedRep {
    pub name: String,
    pub rep: DimensionFunction,
}

/// A few standard representations of `G`: trivial, regular, the sign
/// characters, permutation representations on the orbits, and sums.
pub fn catalog(ctx: &Arc<GroupContext>) -> Vec<NamedRep> {
    let one = Dim::Fin(1);
    let mut out = vec![
        NamedRep { name: "0".into(), rep: DimensionFunction::zero(ctx) },
        NamedRep { name: "triv".into(), rep: DimensionFunction::trivial(ctx, one) },
        NamedRep { name: "inf.triv".into(), rep: DimensionFunction::trivial(ctx, Dim::Inf) },
        NamedRep { name: "rho".into(), rep: DimensionFunction::regular(ctx, one) },
        NamedRep { name: "inf.rho".into(), rep: DimensionFunction::regular(ctx, Dim::Inf) },
    ];
    let top = ctx.top();
    for c in 0..ctx.num_classes() {
        if c != top && c != 0 {
            let x = OrbitMultiset::orbit(ctx, top, c);
            let rep = DimensionFunction::from_permutation_rep(ctx, &x, one).expect("orbit is a G-set");
            out.push(NamedRep { name: format!("R[G/{}]", ctx.class_label(c)), rep });
        }
    }
    for c in 0..ctx.num_classes() {
        if let Ok(sigma) = DimensionFunction::sign(ctx, c, one) {
            let label = ctx.class_label(c);
            out.push(NamedRep { name: format!("sign[{label}]"), rep: sigma.clone() });
            out.push(NamedRep { name: format!("2sign[{label}]"), rep: sigma.scale(Dim::Fin(2)) });
            out.push(NamedRep { name: format!("inf.sign[{label}]"), rep: sigma.scale(Dim::Inf) });
            let plus = sigma.direct_sum(&DimensionFunction::trivial(ctx, one)).expect("same group");
            out.push(NamedRep { name: format!("sign[{label}]+triv"), rep: plus });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Arc<GroupContext> {
        GroupContext::from_builtin("C2").unwrap()
    }

    fn sigma(ctx: &Arc<GroupContext>) -> DimensionFunction {
        DimensionFunction::sign(ctx, 0, Dim::Fin(1)).unwrap()
    }

    #[test]
    fn constructors() {
        let c = c2();
        assert_eq!(DimensionFunction::trivial(&c, Dim::Fin(1)).dims(), vec![Dim::Fin(1); 2]);
        assert_eq!(DimensionFunction::regular(&c, Dim::Fin(1)).dims(), vec![Dim::Fin(2), Dim::Fin(1)]);
        let s = sigma(&c);
        assert_eq!(s.dims(), vec![Dim::Fin(1), Dim::Fin(0)]);
        assert_eq!(DimensionFunction::from_table(&c, vec![Dim::Fin(1), Dim::Fin(0)]).unwrap(), s);
        assert!(matches!(DimensionFunction::from_table(&c, vec![Dim::Fin(0), Dim::Fin(1)]), Err(Error::NotAntitone(_))));
        assert_eq!(s.direct_sum(&s).unwrap().dims(), vec![Dim::Fin(2), Dim::Fin(0)]);
        assert_eq!(s.direct_sum(&s.scale(Dim::Inf)).unwrap().dims(), vec![Dim::Inf, Dim::Fin(0)]);
        assert_eq!(s.direct_sum(&DimensionFunction::zero(&c)).unwrap(), s);
    }

    #[test]
    fn sign_support_over_c2_is_mu() {
        let c = c2();
        let f = sigma(&c).arity_support(8).unwrap();
        for n in 0..=8u64 {
            let at: Vec<&OrbitMultiset> = f.admissible_sets(1).filter(|s| s.carrier(&c) == n).collect();
            assert_eq!(at.len(), 1, "carrier {n}");
            assert_eq!(at[0].counts, vec![n / 2, n % 2]);
        }
        assert!(f.predicates().is_unital && f.predicates().has_one_color);
    }

    #[test]
    fn trivial_and_regular_supports() {
        let c = c2();
        assert_eq!(DimensionFunction::trivial(&c, Dim::Inf).arity_support(8).unwrap(), WeakIndexingSystem::finf(&c, 8));
        assert_eq!(DimensionFunction::regular(&c, Dim::Fin(1)).arity_support(8).unwrap(), WeakIndexingSystem::complete(&c, 8));
        // ∞ρ and ∞·triv agree on dimensions but not on supports
        let inf_rho = DimensionFunction::regular(&c, Dim::Inf);
        assert_eq!(inf_rho.dims(), DimensionFunction::trivial(&c, Dim::Inf).dims());
        assert_eq!(inf_rho.arity_support(8).unwrap(), WeakIndexingSystem::complete(&c, 8));
    }

    #[test]
    fn zero_rep_supports_empty_and_point() {
        let c = c2();
        let f = DimensionFunction::zero(&c).arity_support(8).unwrap();
        assert_eq!(f.count_at(1), 2);
        assert_eq!(f.count_at(0), 2);
        assert!(DimensionFunction::zero(&c).is_weak_universe());
    }

    #[test]
    fn weak_universes() {
        let c = c2();
        assert!(sigma(&c).scale(Dim::Inf).is_weak_universe());
        assert!(!sigma(&c).is_weak_universe());
    }

    #[test]
    fn additivity_examples() {
        let c = c2();
        let s = sigma(&c);
        let t = DimensionFunction::trivial(&c, Dim::Fin(1));
        let z = DimensionFunction::zero(&c);
        assert!(check_additivity(&z, &z, 8).unwrap().holds);
        let r = check_additivity(&s, &s, 8).unwrap();
        assert_eq!(r.join_count, r.sum_count);
        let st = check_additivity(&s, &t, 8).unwrap();
        assert_eq!(st.sum_count, DimensionFunction::regular(&c, Dim::Fin(1)).arity_support(8).unwrap().count());
    }

    #[test]
    fn pointwise_larger_dimensions_need_not_support_more() {
        let c = c2();
        let s = sigma(&c);
        let two = DimensionFunction::trivial(&c, Dim::Fin(2));
        assert!(s.dims().iter().zip(two.dims()).all(|(a, b)| *a <= b));
        assert!(!s.arity_support(6).unwrap().is_subset(&two.arity_support(6).unwrap()));
        let bigger = s.direct_sum(&two).unwrap();
        assert!(s.is_summand_of(&bigger));
        assert!(s.arity_support(6).unwrap().is_subset(&bigger.arity_support(6).unwrap()));
    }

    #[test]
    fn json_round_trip() {
        let c = GroupContext::from_builtin("S3").unwrap();
        for named in catalog(&c) {
            let json = serde_json::to_string(&named.rep.to_json()).unwrap();
            let back: DimensionJson = serde_json::from_str(&json).unwrap();
            assert_eq!(DimensionFunction::from_json(&c, &back).unwrap(), named.rep, "{}", named.name);
        }
        let table: DimensionJson = serde_json::from_str(r#"{"dims": {"1": "inf", "2": 0, "3": "inf", "6": 0}}"#).unwrap();
        let v = DimensionFunction::from_json(&c, &table).unwrap();
        assert!(v.is_synthetic() && v.is_weak_universe());
    }
}
