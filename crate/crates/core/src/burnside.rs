//! The effective Burnside monoid: finite `H`-sets under disjoint union with
//! restrictions and indexed-coproduct transfers, a pointed variant whose
//! transfers outside a family are zero, and the checks showing that the two
//! interchange while differing.
//!
//! Elements carry an adjoined basepoint distinct from `∅`. `∅` is the unit
//! of disjoint union; the basepoint absorbs every operation.

use std::collections::HashMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupContext, Subgroup};
use crate::gset::{indexed_coproduct, restrict_local, ConcreteGSet, OrbitMultiset, OrbitMultisetJson};
use crate::windex::{Family, Membership, WeakIndexingSystem};

/// An iso class of finite `H`-sets at some level, or the basepoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BurnsideElement {
    pub level: usize,
    pub value: Option<OrbitMultiset>,
}

impl BurnsideElement {
    pub fn set(x: OrbitMultiset) -> Self {
        BurnsideElement { level: x.level, value: Some(x) }
    }

    pub fn zero(level: usize) -> Self {
        BurnsideElement { level, value: None }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_none()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.level != other.level {
            return Err(Error::ShapeMismatch("summands live at different levels".into()));
        }
        Ok(match (&self.value, &other.value) {
            (Some(a), Some(b)) => Self::set(a.union(b)?),
            _ => Self::zero(self.level),
        })
    }

    /// Restriction along the local class `m`; keeps the basepoint.
    pub fn restrict(&self, ctx: &GroupContext, m: usize) -> Self {
        match &self.value {
            Some(x) => Self::set(restrict_local(ctx, x, m)),
            None => Self::zero(ctx.level(self.level).locals[m].global),
        }
    }

    pub fn display(&self, ctx: &GroupContext) -> String {
        match &self.value {
            Some(x) => x.display(ctx),
            None => "0".into(),
        }
    }

    pub fn to_json(&self, ctx: &GroupContext) -> ElementJson {
        ElementJson {
            level: ctx.class_label(self.level).to_string(),
            zero: self.is_zero(),
            set: self.value.as_ref().map(|x| OrbitMultisetJson::from_multiset(ctx, x)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub level: String,
    pub zero: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub set: Option<OrbitMultisetJson>,
}

/// Which transfers are available: all of them, or zero outside `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Variant {
    Plain,
    Zeroed(Family),
}

fn check_index(system: &WeakIndexingSystem, s: &OrbitMultiset) -> Result<()> {
    let ctx = system.context();
    match system.membership(s)? {
        Membership::Admissible => Ok(()),
        Membership::InadmissibleWithinBound => Err(Error::InadmissibleIndex(format!(
            "{} at level {} is not admissible",
            s.display(ctx),
            ctx.class_label(s.level)
        ))),
    }
}

/// The `S`-indexed transfer `∐^S X_U`. `inputs[k]` lists one element per copy
/// of the orbit type `k` of `S`, at the level of that orbit's stabilizer.
pub fn tr(system: &WeakIndexingSystem, s: &OrbitMultiset, inputs: &[Vec<BurnsideElement>]) -> Result<BurnsideElement> {
    check_index(system, s)?;
    let ctx = system.context();
    let level = ctx.level(s.level);
    if inputs.len() != level.len() {
        return Err(Error::ShapeMismatch(format!("{} input slots for {} orbit types", inputs.len(), level.len())));
    }
    let mut family = Vec::with_capacity(inputs.len());
    let mut zero = false;
    for (k, xs) in inputs.iter().enumerate() {
        let mut sets = Vec::with_capacity(xs.len());
        for x in xs {
            if x.level != level.locals[k].global {
                return Err(Error::ShapeMismatch(format!(
                    "input for orbit type {} lives at {}",
                    level.locals[k].label,
                    ctx.class_label(x.level)
                )));
            }
            match &x.value {
                Some(v) => sets.push(v.clone()),
                None => {
                    zero = true;
                    sets.push(OrbitMultiset::empty(ctx, x.level));
                }
            }
        }
        family.push(sets);
    }
    let out = indexed_coproduct(ctx, s, &family)?;
    Ok(if zero { BurnsideElement::zero(s.level) } else { BurnsideElement::set(out) })
}

/// The transfer of the zeroed variant: equal to [`tr`] at levels in `F` and
/// for `S = *_V`, the basepoint otherwise.
pub fn tr_zero(system: &WeakIndexingSystem, s: &OrbitMultiset, inputs: &[Vec<BurnsideElement>], family: &Family) -> Result<BurnsideElement> {
    let plain = tr(system, s, inputs)?;
    if family.contains(s.level) || s.is_point(system.context()) {
        Ok(plain)
    } else {
        Ok(BurnsideElement::zero(s.level))
    }
}

/// The transfer of either variant.
pub fn transfer(
    system: &WeakIndexingSystem,
    variant: &Variant,
    s: &OrbitMultiset,
    inputs: &[Vec<BurnsideElement>],
) -> Result<BurnsideElement> {
    match variant {
        Variant::Plain => tr(system, s, inputs),
        Variant::Zeroed(f) => tr_zero(system, s, inputs, f),
    }
}

/// The constant family of points indexed by `S`.
pub fn diagonal_points(ctx: &GroupContext, s: &OrbitMultiset) -> Vec<Vec<BurnsideElement>> {
    let level = ctx.level(s.level);
    (0..level.len())
        .map(|k| {
            let e = level.locals[k].global;
            (0..s.counts[k]).map(|_| BurnsideElement::set(OrbitMultiset::point(ctx, e))).collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistinctnessWitness {
    pub index: OrbitMultisetJson,
    /// the constant tuple of points
    pub input: Vec<ElementJson>,
    pub tr_value: ElementJson,
    pub tr_zero_value: ElementJson,
}

/// For a noncontractible admissible `S` at a level outside `F`, the tuple
/// `Δ(*)` on which the two `S`-indexed multiplications differ: the plain one
/// returns `S` itself, the zeroed one the basepoint.
pub fn distinctness_witness(system: &WeakIndexingSystem, family: &Family, s: &OrbitMultiset) -> Result<DistinctnessWitness> {
    let ctx = system.context();
    if s.is_point(ctx) {
        return Err(Error::NoWitnessRequired("the index set is a point".into()));
    }
    if family.contains(s.level) {
        return Err(Error::NoWitnessRequired(format!("level {} lies in the family", ctx.class_label(s.level))));
    }
    let input = diagonal_points(ctx, s);
    let a = tr(system, s, &input)?;
    let b = tr_zero(system, s, &input, family)?;
    if a == b {
        return Err(Error::NoWitnessRequired("the two transfers agree".into()));
    }
    Ok(DistinctnessWitness {
        index: OrbitMultisetJson::from_multiset(ctx, s),
        input: input.iter().flatten().map(|x| x.to_json(ctx)).collect(),
        tr_value: a.to_json(ctx),
        tr_zero_value: b.to_json(ctx),
    })
}

/// Orbits of `S × T` at the level representative `V`, with per-point
/// bookkeeping.
struct Grid {
    s: ConcreteGSet,
    t: ConcreteGSet,
    /// representative point of each orbit of `S × T` and its stabilizer
    reps: Vec<(usize, Subgroup)>,
    /// for each point of `S × T`: its orbit and some `g` moving the orbit
    /// representative onto it
    place: Vec<(usize, usize)>,
}

impl Grid {
    fn new(ctx: &Arc<GroupContext>, s: &OrbitMultiset, t: &OrbitMultiset) -> Result<Self> {
        let s_real = ConcreteGSet::realize(ctx, s)?;
        let t_real = ConcreteGSet::realize(ctx, t)?;
        let v: Vec<usize> = ctx.level(s.level).sub.iter().collect();
        let nt = t_real.size();
        let n = s_real.size() * nt;
        let act = |g: usize, p: usize| s_real.apply(g, p / nt) * nt + t_real.apply(g, p % nt);
        let mut place = vec![(usize::MAX, 0); n];
        let mut reps = Vec::new();
        for p in 0..n {
            if place[p].0 != usize::MAX {
                continue;
            }
            let o = reps.len();
            let stab = Subgroup::from_elements(v.iter().copied().filter(|&g| act(g, p) == p));
            for &g in &v {
                let q = act(g, p);
                if place[q].0 == usize::MAX {
                    place[q] = (o, g);
                }
            }
            reps.push((p, stab));
        }
        Ok(Grid { s: s_real, t: t_real, reps, place })
    }

    fn point(&self, x: usize, y: usize) -> usize {
        x * self.t.size() + y
    }
}

/// Bag of actual subgroups of an owner subgroup, read as a set at the owner's
/// class in the coordinates of `transport(owner, ·)`.
fn bag_at(ctx: &GroupContext, owner: &Subgroup, bag: &[Subgroup]) -> Result<OrbitMultiset> {
    let (c, _) = ctx.classify(owner)?;
    let mut out = OrbitMultiset::empty(ctx, c);
    for j in bag {
        out.counts[ctx.transport(owner, j)?] += 1;
    }
    Ok(out)
}

/// Orbit stabilizers of an input placed at a point `q = g·p_O`.
fn moved_bag(ctx: &GroupContext, grid: &Grid, input: &OrbitMultiset, q: usize) -> Result<Vec<Subgroup>> {
    let (o, g) = grid.place[q];
    let stab = &grid.reps[o].1;
    let mut out = Vec::new();
    for (j, n) in input.orbits() {
        let sub = ctx.group.conjugate_subgroup(g, &ctx.untransport(stab, j)?);
        out.extend(std::iter::repeat_n(sub, n as usize));
    }
    Ok(out)
}

/// Per local orbit type of `X` (realized concretely at `V`), the points
/// representing each copy together with an element of `V` moving the
/// stabilizer onto the local representative.
fn orbit_slots(ctx: &GroupContext, x: &ConcreteGSet, level: usize) -> Vec<Vec<(usize, usize)>> {
    let lvl = ctx.level(level);
    let mut slots = vec![Vec::new(); lvl.len()];
    for orbit in x.orbits() {
        let p = orbit[0];
        let (k, h) = lvl.local_of(&x.stabilizer(p)).expect("stabilizer lies in the level");
        slots[k].push((p, h));
    }
    slots
}

/// Both composites of the interchange square for one input array.
fn composites(
    system: &WeakIndexingSystem,
    family: &Family,
    s: &OrbitMultiset,
    t: &OrbitMultiset,
    grid: &Grid,
    inputs: &[Option<OrbitMultiset>],
) -> Result<(BurnsideElement, BurnsideElement)> {
    let ctx = system.context();
    let v = s.level;
    let lvl = ctx.level(v);

    // plain transfer over T inside each S-orbit, then the zeroed transfer over S
    let s_slots = orbit_slots(ctx, &grid.s, v);
    let mut outer = Vec::with_capacity(lvl.len());
    for (k, copies) in s_slots.iter().enumerate() {
        let mut elems = Vec::with_capacity(copies.len());
        for &(x, h) in copies {
            let mut bag = Vec::new();
            let mut zero = false;
            // V_x-orbits of {x} × T, one per orbit of S × T over the orbit of x
            let mut done = vec![false; grid.reps.len()];
            for y in 0..grid.t.size() {
                let (o, _) = grid.place[grid.point(x, y)];
                if std::mem::replace(&mut done[o], true) {
                    continue;
                }
                match &inputs[o] {
                    Some(input) => bag.extend(moved_bag(ctx, grid, input, grid.point(x, y))?),
                    None => zero = true,
                }
            }
            let local = lvl.locals[k].rep;
            let moved: Vec<Subgroup> = bag.iter().map(|j| ctx.group.conjugate_subgroup(h, j)).collect();
            elems.push(if zero { BurnsideElement::zero(lvl.locals[k].global) } else { BurnsideElement::set(bag_at(ctx, &local, &moved)?) });
        }
        outer.push(elems);
    }
    let first = tr_zero(system, s, &outer, family)?;

    // zeroed transfer over S inside each T-orbit, then the plain transfer over T
    let t_slots = orbit_slots(ctx, &grid.t, v);
    let s_is_point = s.is_point(ctx);
    let mut outer = Vec::with_capacity(lvl.len());
    for (k, copies) in t_slots.iter().enumerate() {
        let w_class = lvl.locals[k].global;
        let mut elems = Vec::with_capacity(copies.len());
        for &(y, h) in copies {
            let mut bag = Vec::new();
            let mut zero = !family.contains(w_class) && !s_is_point;
            let mut done = vec![false; grid.reps.len()];
            for x in 0..grid.s.size() {
                let (o, _) = grid.place[grid.point(x, y)];
                if std::mem::replace(&mut done[o], true) {
                    continue;
                }
                match &inputs[o] {
                    Some(input) => bag.extend(moved_bag(ctx, grid, input, grid.point(x, y))?),
                    None => zero = true,
                }
            }
            let local = lvl.locals[k].rep;
            let moved: Vec<Subgroup> = bag.iter().map(|j| ctx.group.conjugate_subgroup(h, j)).collect();
            elems.push(if zero { BurnsideElement::zero(w_class) } else { BurnsideElement::set(bag_at(ctx, &local, &moved)?) });
        }
        outer.push(elems);
    }
    let second = tr(system, t, &outer)?;
    Ok((first, second))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterchangeReport {
    pub passed: bool,
    pub checked: usize,
    pub exhaustive: bool,
    pub seed: u64,
    /// orbits of `S × T`, i.e. entries of each input array
    pub cells: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<InterchangeFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InterchangeFailure {
    pub inputs: Vec<ElementJson>,
    pub first: ElementJson,
    pub second: ElementJson,
}

/// Options for [`check_interchange`].
#[derive(Clone, Copy, Debug)]
pub struct InterchangeOptions {
    /// largest total carrier of an input array in the exhaustive sweep
    pub carrier: u64,
    /// most basepoint entries per array in the exhaustive sweep
    pub zeros: usize,
    /// arrays to check; the sweep is exhaustive when it fits, seeded random
    /// otherwise
    pub budget: usize,
    pub seed: u64,
}

impl Default for InterchangeOptions {
    fn default() -> Self {
        InterchangeOptions { carrier: 4, zeros: 1, budget: 20_000, seed: 0 }
    }
}

/// Checks `tr⁰_S ∘ (tr_T)_S = tr_T ∘ (tr⁰_S)_T` on input arrays indexed by
/// the orbits of `S × T`.
pub fn check_interchange(
    system: &WeakIndexingSystem,
    family: &Family,
    s: &OrbitMultiset,
    t: &OrbitMultiset,
    opts: &InterchangeOptions,
) -> Result<InterchangeReport> {
    let ctx = system.context();
    if s.level != t.level {
        return Err(Error::ShapeMismatch("index sets live at different levels".into()));
    }
    check_index(system, s)?;
    check_index(system, t)?;
    let grid = Grid::new(ctx, s, t)?;
    let cells: Vec<usize> = grid.reps.iter().map(|(_, stab)| ctx.classify(stab).map(|x| x.0)).collect::<Result<_>>()?;
    // candidate values per cell, by carrier
    let window = ctx.window(opts.carrier as usize);
    let choices: Vec<Vec<(u64, OrbitMultiset)>> = cells
        .iter()
        .map(|&c| window.levels[c].sets.iter().zip(&window.levels[c].carriers).map(|(x, &n)| (n, x.clone())).collect())
        .collect();

    let mut arrays: Vec<Vec<Option<OrbitMultiset>>> = Vec::new();
    let mut current = Vec::with_capacity(cells.len());
    let overflow = !sweep(&choices, 0, opts.carrier, opts.zeros, &mut current, &mut arrays, opts.budget);
    let exhaustive = !overflow;
    if overflow {
        arrays.clear();
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        for _ in 0..opts.budget {
            let arr = choices
                .iter()
                .map(|ch| if rng.gen_ratio(1, 10) { None } else { Some(ch[rng.gen_range(0..ch.len())].1.clone()) })
                .collect();
            arrays.push(arr);
        }
    }
    let mut report = InterchangeReport { passed: true, checked: 0, exhaustive, seed: opts.seed, cells: cells.len(), failure: None };
    for arr in &arrays {
        let (a, b) = composites(system, family, s, t, &grid, arr)?;
        report.checked += 1;
        if a != b {
            report.passed = false;
            report.failure = Some(InterchangeFailure {
                inputs: arr
                    .iter()
                    .zip(&cells)
                    .map(|(x, &c)| match x {
                        Some(x) => BurnsideElement::set(x.clone()).to_json(ctx),
                        None => BurnsideElement::zero(c).to_json(ctx),
                    })
                    .collect(),
                first: a.to_json(ctx),
                second: b.to_json(ctx),
            });
            break;
        }
    }
    Ok(report)
}

/// All arrays of total carrier at most `budget_carrier` with at most `zeros`
/// basepoints; returns false once more than `cap` arrays accumulate.
fn sweep(
    choices: &[Vec<(u64, OrbitMultiset)>],
    i: usize,
    carrier: u64,
    zeros: usize,
    current: &mut Vec<Option<OrbitMultiset>>,
    out: &mut Vec<Vec<Option<OrbitMultiset>>>,
    cap: usize,
) -> bool {
    if i == choices.len() {
        out.push(current.clone());
        return out.len() <= cap;
    }
    if zeros > 0 {
        current.push(None);
        let ok = sweep(choices, i + 1, carrier, zeros - 1, current, out, cap);
        current.pop();
        if !ok {
            return false;
        }
    }
    for (n, x) in &choices[i] {
        if *n > carrier {
            break;
        }
        current.push(Some(x.clone()));
        let ok = sweep(choices, i + 1, carrier - n, zeros, current, out, cap);
        current.pop();
        if !ok {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EckmannHiltonReport {
    pub modulus: u64,
    pub degenerate: bool,
    pub mu_commutative: bool,
    pub mu_associative: bool,
    pub mu0_commutative: bool,
    pub mu0_associative: bool,
    pub interchange: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub differing_pair: Option<(u64, u64)>,
}

impl EckmannHiltonReport {
    pub fn passed(&self) -> bool {
        !self.degenerate
            && self.mu_commutative
            && self.mu_associative
            && self.mu0_commutative
            && self.mu0_associative
            && self.interchange
            && self.differing_pair.is_some()
    }
}

/// Over `ℤ/n`: `μ(r, s) = rs` and `μ₀ = 0` are commutative, associative and
/// interchange, yet differ.
pub fn eckmann_hilton_failure_demo(n: u64) -> EckmannHiltonReport {
    let n = n.max(1);
    let mu = |a: u64, b: u64| (a * b) % n;
    let mu0 = |_: u64, _: u64| 0u64;
    let all = || 0..n;
    let commutative = |f: &dyn Fn(u64, u64) -> u64| all().all(|a| all().all(|b| f(a, b) == f(b, a)));
    let associative =
        |f: &dyn Fn(u64, u64) -> u64| all().all(|a| all().all(|b| all().all(|c| f(f(a, b), c) == f(a, f(b, c)))));
    let interchange = all().all(|a| {
        all().all(|b| all().all(|c| all().all(|d| mu0(mu(a, b), mu(c, d)) == mu(mu0(a, c), mu0(b, d)))))
    });
    let differing_pair = all().flat_map(|a| all().map(move |b| (a, b))).find(|&(a, b)| mu(a, b) != mu0(a, b));
    EckmannHiltonReport {
        modulus: n,
        degenerate: n == 1,
        mu_commutative: commutative(&mu),
        mu_associative: associative(&mu),
        mu0_commutative: commutative(&mu0),
        mu0_associative: associative(&mu0),
        interchange,
        differing_pair,
    }
}

/// Counts restriction-naturality failures of [`tr`]: `Res_m ∐^S X_U` against
/// the double coset expansion computed on concrete sets.
pub fn restriction_naturality(system: &WeakIndexingSystem, s: &OrbitMultiset, inputs: &[Vec<OrbitMultiset>]) -> Result<bool> {
    let ctx = system.context();
    let elems: Vec<Vec<BurnsideElement>> =
        inputs.iter().map(|xs| xs.iter().cloned().map(BurnsideElement::set).collect()).collect();
    let total = tr(system, s, &elems)?.value.expect("no basepoint inputs");
    // concrete: realize every summand induced up and restrict the union
    let level = ctx.level(s.level);
    let mut real = ConcreteGSet::empty(ctx, level.sub);
    for (k, xs) in inputs.iter().enumerate() {
        let kk = level.locals[k].rep;
        for x in xs {
            let piece = ConcreteGSet::realize_on(ctx, &kk, x)?.induce(&level.sub)?;
            real = real.union(&piece)?;
        }
    }
    let mut memo: HashMap<usize, bool> = HashMap::new();
    for m in 0..level.len() {
        let sub = level.locals[m].rep;
        let concrete = real.restrict(&sub)?.decompose()?;
        let formula = restrict_local(ctx, &total, m);
        memo.insert(m, concrete == formula);
    }
    Ok(memo.values().all(|&b| b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Arc<GroupContext> {
        GroupContext::from_builtin("C2").unwrap()
    }

    #[test]
    fn transfer_examples() {
        let c = c2();
        let all = WeakIndexingSystem::complete(&c, 8);
        let x = BurnsideElement::set(OrbitMultiset::orbit(&c, 1, 0));
        let star = OrbitMultiset::point(&c, 1);
        assert_eq!(tr(&all, &star, &[vec![], vec![x.clone()]]).unwrap(), x);
        let free = OrbitMultiset::orbit(&c, 1, 0);
        let pt = BurnsideElement::set(OrbitMultiset::point(&c, 0));
        assert_eq!(tr(&all, &free, &[vec![pt], vec![]]).unwrap(), BurnsideElement::set(free.clone()));
        let two = OrbitMultiset::points(&c, 1, 2);
        let s = BurnsideElement::set(OrbitMultiset { level: 1, counts: vec![1, 1] });
        let out = tr(&all, &two, &[vec![], vec![s.clone(), s.clone()]]).unwrap();
        assert_eq!(out.value.unwrap().counts, vec![2, 2]);
        let zero = BurnsideElement::zero(1);
        assert!(tr(&all, &two, &[vec![], vec![s, zero]]).unwrap().is_zero());
    }

    #[test]
    fn inadmissible_index_is_rejected() {
        let c = c2();
        let t = WeakIndexingSystem::trivial(&c, 8);
        let two = OrbitMultiset::points(&c, 1, 2);
        let p = BurnsideElement::set(OrbitMultiset::point(&c, 1));
        assert!(matches!(tr(&t, &two, &[vec![], vec![p.clone(), p]]), Err(Error::InadmissibleIndex(_))));
    }

    #[test]
    fn zeroed_transfer() {
        let c = c2();
        let all = WeakIndexingSystem::complete(&c, 8);
        let e = Family::from_classes(&c, &[0]).unwrap();
        let two = OrbitMultiset::points(&c, 1, 2);
        let p = BurnsideElement::set(OrbitMultiset::point(&c, 1));
        assert!(tr_zero(&all, &two, &[vec![], vec![p.clone(), p.clone()]], &e).unwrap().is_zero());
        let star = OrbitMultiset::point(&c, 1);
        assert_eq!(tr_zero(&all, &star, &[vec![], vec![p.clone()]], &e).unwrap(), p);
        let two_e = OrbitMultiset::points(&c, 0, 2);
        let q = BurnsideElement::set(OrbitMultiset::point(&c, 0));
        let ins = [vec![q.clone(), q]];
        assert_eq!(tr_zero(&all, &two_e, &ins, &e).unwrap(), tr(&all, &two_e, &ins).unwrap());
    }

    #[test]
    fn witnesses() {
        let triv = GroupContext::from_builtin("1").unwrap();
        let none = Family::none(&triv);
        let nu = WeakIndexingSystem::terminal_with_unit_family(&triv, &none, 8);
        let w = distinctness_witness(&nu, &none, &OrbitMultiset::points(&triv, 0, 2)).unwrap();
        assert!(!w.tr_value.zero && w.tr_zero_value.zero);
        let c = c2();
        let e = Family::from_classes(&c, &[0]).unwrap();
        let sys = WeakIndexingSystem::terminal_with_unit_family(&c, &e, 8);
        let s = OrbitMultiset { level: 1, counts: vec![1, 1] };
        let w = distinctness_witness(&sys, &e, &s).unwrap();
        assert_eq!(w.tr_value.set.as_ref().unwrap().orbits.len(), 2);
        assert!(matches!(distinctness_witness(&sys, &e, &OrbitMultiset::point(&c, 1)), Err(Error::NoWitnessRequired(_))));
    }

    #[test]
    fn interchange_over_c2() {
        let c = c2();
        let e = Family::from_classes(&c, &[0]).unwrap();
        let sys = WeakIndexingSystem::terminal_with_unit_family(&c, &e, 4);
        let sets: Vec<OrbitMultiset> = sys.admissible_sets(1).cloned().collect();
        for s in &sets {
            for t in &sets {
                let r = check_interchange(&sys, &e, s, t, &InterchangeOptions::default()).unwrap();
                assert!(r.passed, "{r:?}");
            }
        }
        // the free orbit is not in the system, so it cannot index
        let mu2 = OrbitMultiset::orbit(&c, 1, 0);
        assert!(matches!(
            check_interchange(&sys, &e, &mu2, &mu2, &InterchangeOptions::default()),
            Err(Error::InadmissibleIndex(_))
        ));
    }

    #[test]
    fn interchange_fails_without_the_unit_family_condition() {
        // in the complete system the free orbit indexes, and the zeroed
        // transfer no longer interchanges with the plain one
        let c = c2();
        let e = Family::from_classes(&c, &[0]).unwrap();
        let all = WeakIndexingSystem::complete(&c, 4);
        let two = OrbitMultiset::points(&c, 1, 2);
        let mu2 = OrbitMultiset::orbit(&c, 1, 0);
        let r = check_interchange(&all, &e, &two, &mu2, &InterchangeOptions::default()).unwrap();
        assert!(!r.passed);
        assert!(r.failure.is_some());
    }

    #[test]
    fn eckmann_hilton() {
        let r = eckmann_hilton_failure_demo(2);
        assert_eq!(r.differing_pair, Some((1, 1)));
        assert!(r.passed());
        assert!(eckmann_hilton_failure_demo(4).passed());
        let r = eckmann_hilton_failure_demo(1);
        assert!(r.degenerate && !r.passed());
    }

    #[test]
    fn naturality_on_s3() {
        let c = GroupContext::from_builtin("S3").unwrap();
        let all = WeakIndexingSystem::complete(&c, 10);
        let top = c.top();
        let s = OrbitMultiset { level: top, counts: vec![0, 1, 1, 0] };
        let lvl = c.level(top);
        let inputs: Vec<Vec<OrbitMultiset>> = (0..lvl.len())
            .map(|k| (0..s.counts[k]).map(|_| OrbitMultiset::points(&c, lvl.locals[k].global, 1).union(&OrbitMultiset::orbit(&c, lvl.locals[k].global, 0)).unwrap()).collect())
            .collect();
        assert!(restriction_naturality(&all, &s, &inputs).unwrap());
    }
}
