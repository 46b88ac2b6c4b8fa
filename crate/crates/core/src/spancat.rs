//! The homotopy category of spans `X ← R → Y` of finite `V`-sets whose
//! forward leg lies in a weak indexing system. Hom-sets are free commutative
//! monoids on spans with a single-orbit apex; composition is by pullback.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupContext, Subgroup};
use crate::gset::{marks, ConcreteGSet, EquivariantMap, OrbitMultiset, OrbitMultisetJson};
use crate::windex::{Membership, WeakIndexingSystem};

/// Largest carrier of `X × Y` accepted when enumerating basic spans.
pub const SPAN_CAP: usize = 4096;

/// Iso class of a basic span: the orbit of `X × Y` hit by the apex and the
/// class of the apex stabilizer inside the stabilizer of that orbit's
/// representative point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpanKey {
    pub orbit: usize,
    pub local: usize,
}

/// The orbits of `X × Y` for concrete `X` and `Y` over a common subgroup
/// `V`, with everything needed to classify transitive spans.
#[derive(Debug)]
pub struct SpanSpace {
    ctx: Arc<GroupContext>,
    pub source: ConcreteGSet,
    pub target: ConcreteGSet,
    /// least point of each orbit of `X × Y` and its stabilizer
    reps: Vec<(usize, Subgroup)>,
    /// per point of `X × Y`: its orbit and some `v` with `v·rep = point`
    place: Vec<(usize, usize)>,
}

impl SpanSpace {
    pub fn new(source: ConcreteGSet, target: ConcreteGSet) -> Result<Arc<Self>> {
        if source.acting() != target.acting() || !Arc::ptr_eq(source.context(), target.context()) {
            return Err(Error::NotComposable("source and target are acted on by different subgroups".into()));
        }
        let n = source.size() * target.size();
        if n > SPAN_CAP {
            return Err(Error::TooLarge(format!("X × Y has {n} points, above the cap {SPAN_CAP}")));
        }
        let ctx = source.context().clone();
        let v: Vec<usize> = source.acting().iter().collect();
        let nt = target.size();
        let act = |g: usize, p: usize| source.apply(g, p / nt) * nt + target.apply(g, p % nt);
        let mut place = vec![(usize::MAX, 0); n];
        let mut reps = Vec::new();
        for p in 0..n {
            if place[p].0 != usize::MAX {
                continue;
            }
            let o = reps.len();
            for &g in &v {
                let q = act(g, p);
                if place[q].0 == usize::MAX {
                    place[q] = (o, g);
                }
            }
            reps.push((p, Subgroup::from_elements(v.iter().copied().filter(|&g| act(g, p) == p))));
        }
        Ok(Arc::new(SpanSpace { ctx, source, target, reps, place }))
    }

    /// Spaces for canonical realizations of two multisets at one level.
    pub fn of_multisets(ctx: &Arc<GroupContext>, x: &OrbitMultiset, y: &OrbitMultiset) -> Result<Arc<Self>> {
        if x.level != y.level {
            return Err(Error::NotComposable("source and target live at different levels".into()));
        }
        Self::new(ConcreteGSet::realize(ctx, x)?, ConcreteGSet::realize(ctx, y)?)
    }

    pub fn context(&self) -> &Arc<GroupContext> {
        &self.ctx
    }

    pub fn acting(&self) -> &Subgroup {
        self.source.acting()
    }

    fn pair(&self, p: usize) -> (usize, usize) {
        (p / self.target.size(), p % self.target.size())
    }

    fn point(&self, x: usize, y: usize) -> usize {
        x * self.target.size() + y
    }

    /// Every key, in order.
    pub fn keys(&self) -> Result<Vec<SpanKey>> {
        let mut out = Vec::new();
        for (o, (_, stab)) in self.reps.iter().enumerate() {
            let (c, _) = self.ctx.classify(stab)?;
            out.extend((0..self.ctx.level(c).len()).map(|local| SpanKey { orbit: o, local }));
        }
        Ok(out)
    }

    /// Key of the transitive span whose apex point with stabilizer `l` maps
    /// to `(x, y)`.
    pub fn classify(&self, x: usize, y: usize, l: &Subgroup) -> Result<SpanKey> {
        let (orbit, v) = self.place[self.point(x, y)];
        let g = &self.ctx.group;
        let moved = g.conjugate_subgroup(g.inv(v), l);
        let local = self.ctx.transport(&self.reps[orbit].1, &moved)?;
        Ok(SpanKey { orbit, local })
    }

    /// The apex stabilizer of a key, as an actual subgroup of the stabilizer
    /// of the orbit representative.
    pub fn apex_subgroup(&self, key: SpanKey) -> Result<Subgroup> {
        self.ctx.untransport(&self.reps[key.orbit].1, key.local)
    }

    /// Concrete model of the basic span of `key`.
    pub fn realize(&self, key: SpanKey) -> Result<BasicSpan> {
        let l = self.apex_subgroup(key)?;
        let apex = ConcreteGSet::coset_space(&self.ctx, self.acting(), &l)?;
        let (x, y) = self.pair(self.reps[key.orbit].0);
        let mut backward = vec![usize::MAX; apex.size()];
        let mut forward = vec![usize::MAX; apex.size()];
        for a in self.acting().iter() {
            let c = apex.apply(a, 0);
            if backward[c] == usize::MAX {
                backward[c] = self.source.apply(a, x);
                forward[c] = self.target.apply(a, y);
            }
        }
        Ok(BasicSpan {
            key,
            apex,
            apex_subgroup: l,
            backward: EquivariantMap { images: backward },
            forward: EquivariantMap { images: forward },
        })
    }

    /// Fingerprint of a key: marks of the apex together with its images.
    pub fn fingerprint(&self, key: SpanKey) -> Result<SpanFingerprint> {
        let l = self.apex_subgroup(key)?;
        let (c, _) = self.ctx.classify(&l)?;
        let (x, y) = self.pair(self.reps[key.orbit].0);
        let apex = ConcreteGSet::coset_space(&self.ctx, self.acting(), &l)?.decompose()?;
        Ok(SpanFingerprint {
            apex_class: c,
            apex_marks: marks(&self.ctx, &apex).entries,
            source_orbit: self.source.orbit_of()[x],
            target_orbit: self.target.orbit_of()[y],
            orbit: key.orbit,
        })
    }

    /// Whether the forward leg of the basic span `key` has an admissible
    /// fiber over the orbit it hits.
    pub fn forward_admissible(&self, system: &WeakIndexingSystem, key: SpanKey) -> Result<bool> {
        let (_, y) = self.pair(self.reps[key.orbit].0);
        let stab = self.target.stabilizer(y);
        let l = self.apex_subgroup(key)?;
        let (c, _) = self.ctx.classify(&stab)?;
        let mut fiber = OrbitMultiset::empty(&self.ctx, c);
        fiber.counts[self.ctx.transport(&stab, &l)?] = 1;
        Ok(system.membership(&fiber)? == Membership::Admissible)
    }

    pub fn label(&self, key: SpanKey) -> String {
        let (x, y) = self.pair(self.reps[key.orbit].0);
        let stab = &self.reps[key.orbit].1;
        let c = self.ctx.classify(stab).map(|r| r.0).unwrap_or(0);
        format!("[{}/{}]->({x},{y})", self.ctx.class_label(c), self.ctx.level(c).locals[key.local].label)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpanFingerprint {
    pub apex_class: usize,
    pub apex_marks: Vec<u64>,
    pub source_orbit: usize,
    pub target_orbit: usize,
    pub orbit: usize,
}

/// A span `X ← V/L → Y`.
#[derive(Clone, Debug)]
pub struct BasicSpan {
    pub key: SpanKey,
    pub apex: ConcreteGSet,
    pub apex_subgroup: Subgroup,
    pub backward: EquivariantMap,
    pub forward: EquivariantMap,
}

/// Two concrete transitive spans are isomorphic: search for an equivariant
/// bijection of apexes commuting with both legs.
pub fn spans_isomorphic(a: &BasicSpan, b: &BasicSpan) -> bool {
    if a.apex.size() != b.apex.size() {
        return false;
    }
    b.apex.equivariant_maps(&a.apex, usize::MAX).map_or(false, |maps| {
        maps.iter().any(|m| {
            (0..b.apex.size()).all(|p| a.backward.apply(m.apply(p)) == b.backward.apply(p) && a.forward.apply(m.apply(p)) == b.forward.apply(p))
        })
    })
}

/// All basic spans `X → Y`, restricted to those whose forward leg lies in
/// `system` when one is given.
pub fn basic_spans(space: &SpanSpace, system: Option<&WeakIndexingSystem>) -> Result<Vec<SpanKey>> {
    let keys = space.keys()?;
    let Some(system) = system else { return Ok(keys) };
    let keep: Vec<bool> = keys.par_iter().map(|&k| space.forward_admissible(system, k)).collect::<Result<_>>()?;
    Ok(keys.into_iter().zip(keep).filter(|(_, k)| *k).map(|(k, _)| k).collect())
}

/// A morphism of the span category: a finite multiset of basic spans.
#[derive(Clone, Debug)]
pub struct SpanHom {
    pub space: Arc<SpanSpace>,
    pub basis: BTreeMap<SpanKey, u64>,
}

impl PartialEq for SpanHom {
    fn eq(&self, other: &Self) -> bool {
        self.space.source == other.space.source && self.space.target == other.space.target && self.basis == other.basis
    }
}

impl Eq for SpanHom {}

impl SpanHom {
    pub fn zero(space: &Arc<SpanSpace>) -> Self {
        SpanHom { space: space.clone(), basis: BTreeMap::new() }
    }

    pub fn basic(space: &Arc<SpanSpace>, key: SpanKey) -> Self {
        SpanHom { space: space.clone(), basis: BTreeMap::from([(key, 1)]) }
    }

    /// The diagonal `X ← X → X`.
    pub fn identity(x: &ConcreteGSet) -> Result<Self> {
        let space = SpanSpace::new(x.clone(), x.clone())?;
        let mut basis = BTreeMap::new();
        for orbit in x.orbits() {
            let p = orbit[0];
            *basis.entry(space.classify(p, p, &x.stabilizer(p))?).or_insert(0) += 1;
        }
        Ok(SpanHom { space, basis })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.space.source != other.space.source || self.space.target != other.space.target {
            return Err(Error::ShapeMismatch("summands have different endpoints".into()));
        }
        let mut basis = self.basis.clone();
        for (k, n) in &other.basis {
            *basis.entry(*k).or_insert(0) += n;
        }
        Ok(SpanHom { space: self.space.clone(), basis })
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Number of apex orbits, with multiplicity.
    pub fn len(&self) -> u64 {
        self.basis.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// `self` followed by `g`, by pullback over the middle object.
    pub fn compose(&self, g: &SpanHom) -> Result<SpanHom> {
        if self.space.target != g.space.source {
            return Err(Error::NotComposable("target of the first span is not the source of the second".into()));
        }
        let out = SpanSpace::new(self.space.source.clone(), g.space.target.clone())?;
        let left: Vec<(SpanKey, u64, BasicSpan)> =
            self.basis.iter().map(|(&k, &n)| Ok((k, n, self.space.realize(k)?))).collect::<Result<_>>()?;
        let right: Vec<(SpanKey, u64, BasicSpan)> =
            g.basis.iter().map(|(&k, &n)| Ok((k, n, g.space.realize(k)?))).collect::<Result<_>>()?;
        let pieces: Vec<Vec<(SpanKey, u64)>> = left
            .par_iter()
            .flat_map(|a| right.par_iter().map(move |b| (a, b)))
            .map(|((_, m, a), (_, n, b))| {
                let pb = a.apex.pullback(&a.forward, &b.apex, &b.backward, &g.space.source)?;
                let mut found = Vec::new();
                for orbit in pb.set.orbits() {
                    let p = orbit[0];
                    let (r, q) = pb.pairs[p];
                    let key = out.classify(a.backward.apply(r), b.forward.apply(q), &pb.set.stabilizer(p))?;
                    found.push((key, m * n));
                }
                Ok(found)
            })
            .collect::<Result<_>>()?;
        let mut basis = BTreeMap::new();
        for (k, n) in pieces.into_iter().flatten() {
            *basis.entry(k).or_insert(0) += n;
        }
        Ok(SpanHom { space: out, basis })
    }

    /// Whether the forward leg lies in `system`: every fiber over every
    /// orbit of the target, including empty fibers, is admissible.
    pub fn in_system(&self, system: &WeakIndexingSystem) -> Result<bool> {
        let space = &self.space;
        let ctx = &space.ctx;
        let y = &space.target;
        let orbit_of = y.orbit_of();
        let orbits = y.orbits();
        let mut fibers: Vec<Vec<Subgroup>> = vec![Vec::new(); orbits.len()];
        for (&key, &n) in &self.basis {
            let (_, py) = space.pair(space.reps[key.orbit].0);
            let o = orbit_of[py];
            let y0 = orbits[o][0];
            let v = space.acting().iter().find(|&v| y.apply(v, py) == y0).expect("same orbit");
            let l = ctx.group.conjugate_subgroup(v, &space.apex_subgroup(key)?);
            fibers[o].extend(std::iter::repeat_n(l, n as usize));
        }
        for (o, bag) in fibers.iter().enumerate() {
            let stab = y.stabilizer(orbits[o][0]);
            let (c, _) = ctx.classify(&stab)?;
            let mut fiber = OrbitMultiset::empty(ctx, c);
            for l in bag {
                fiber.counts[ctx.transport(&stab, l)?] += 1;
            }
            if system.membership(&fiber)? != Membership::Admissible {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> SpanHomJson {
        let ctx = &self.space.ctx;
        let side = |x: &ConcreteGSet| x.decompose().map(|m| OrbitMultisetJson::from_multiset(ctx, &m)).ok();
        SpanHomJson {
            source: side(&self.space.source),
            target: side(&self.space.target),
            basis: self.basis.iter().map(|(&k, &mult)| BasisEntryJson { key: self.space.label(k), mult }).collect(),
        }
    }
}

impl fmt::Display for SpanHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.basis.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .basis
            .iter()
            .map(|(&k, &n)| if n == 1 { self.space.label(k) } else { format!("{n}·{}", self.space.label(k)) })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanHomJson {
    pub source: Option<OrbitMultisetJson>,
    pub target: Option<OrbitMultisetJson>,
    pub basis: Vec<BasisEntryJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisEntryJson {
    pub key: String,
    pub mult: u64,
}

/// Stabilizer-class of the fiber of `f: a → b` over the point `y`, as a set
/// at the class of `Stab(y)`.
pub fn fiber(a: &ConcreteGSet, f: &EquivariantMap, b: &ConcreteGSet, y: usize) -> Result<OrbitMultiset> {
    let ctx = a.context();
    let stab = b.stabilizer(y);
    let (c, _) = ctx.classify(&stab)?;
    let mut out = OrbitMultiset::empty(ctx, c);
    let mut seen = vec![false; a.size()];
    for p in 0..a.size() {
        if f.apply(p) != y || seen[p] {
            continue;
        }
        for g in stab.iter() {
            seen[a.apply(g, p)] = true;
        }
        out.counts[ctx.transport(&stab, &a.stabilizer(p))?] += 1;
    }
    Ok(out)
}

/// Whether every fiber of `f: a → b` is admissible.
pub fn map_in_system(system: &WeakIndexingSystem, a: &ConcreteGSet, f: &EquivariantMap, b: &ConcreteGSet) -> Result<bool> {
    for orbit in b.orbits() {
        if system.membership(&fiber(a, f, b, orbit[0])?)? != Membership::Admissible {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PullbackFailure {
    pub level: String,
    /// the fibers of the map in the system, per orbit of its target
    pub fibers: Vec<OrbitMultisetJson>,
    pub along: OrbitMultisetJson,
    /// the fiber of the pulled-back map that is not admissible
    pub bad_fiber: OrbitMultisetJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub passed: bool,
    pub checked: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<PullbackFailure>,
}

/// A map `R → Y` in `system` assembled from chosen fibers over each orbit of
/// `Y`.
fn map_with_fibers(ctx: &Arc<GroupContext>, y: &ConcreteGSet, fibers: &[OrbitMultiset]) -> Result<(ConcreteGSet, EquivariantMap)> {
    let v = *y.acting();
    let mut r = ConcreteGSet::empty(ctx, v);
    let mut images = Vec::new();
    for (orbit, fib) in y.orbits().iter().zip(fibers) {
        let y0 = orbit[0];
        let stab = y.stabilizer(y0);
        let piece = ConcreteGSet::realize_on(ctx, &stab, fib)?.induce(&v)?;
        let cosets = ConcreteGSet::coset_space(ctx, &v, &stab)?;
        let mut reps = vec![usize::MAX; cosets.size()];
        for a in v.iter() {
            let c = cosets.apply(a, 0);
            if reps[c] == usize::MAX {
                reps[c] = a;
            }
        }
        let n = fib.carrier(ctx) as usize;
        for p in 0..piece.size() {
            images.push(y.apply(reps[p / n.max(1)], y0));
        }
        r = r.union(&piece)?;
    }
    Ok((r, EquivariantMap { images }))
}

/// Pullbacks of maps in `system` along arbitrary maps stay in `system`.
/// Every admissible set of carrier at most `sweep` is pulled back along every
/// orbit `V/K → *`; the rest of the budget goes to random maps into small
/// targets.
pub fn verify_pullback_stability(system: &WeakIndexingSystem, budget: usize, seed: u64) -> Result<StabilityReport> {
    let ctx = system.context().clone();
    let mut report = StabilityReport { passed: true, checked: 0, seed, failure: None };
    let check = |report: &mut StabilityReport,
                 y: &ConcreteGSet,
                 fibers: &[OrbitMultiset],
                 z: &ConcreteGSet,
                 g: &EquivariantMap|
     -> Result<bool> {
        let (r, f) = map_with_fibers(&ctx, y, fibers)?;
        let pb = r.pullback(&f, z, g, y)?;
        report.checked += 1;
        for orbit in z.orbits() {
            let fib = fiber(&pb.set, &pb.to_right, z, orbit[0])?;
            if system.membership(&fib)? != Membership::Admissible {
                report.passed = false;
                report.failure = Some(PullbackFailure {
                    level: ctx.class_label(ctx.classify(y.acting())?.0).to_string(),
                    fibers: fibers.iter().map(|x| OrbitMultisetJson::from_multiset(&ctx, x)).collect(),
                    along: OrbitMultisetJson::from_multiset(&ctx, &z.decompose()?),
                    bad_fiber: OrbitMultisetJson::from_multiset(&ctx, &fib),
                });
                return Ok(false);
            }
        }
        Ok(true)
    };

    let sweep = system.bound().min(6) as u64;
    for c in 0..ctx.num_classes() {
        let level = ctx.level(c);
        let point = ConcreteGSet::point(&ctx, level.sub);
        for s in system.admissible_sets(c) {
            if s.carrier(&ctx) > sweep {
                continue;
            }
            for k in 0..level.len() {
                let z = ConcreteGSet::coset_space(&ctx, &level.sub, &level.locals[k].rep)?;
                if !check(&mut report, &point, std::slice::from_ref(s), &z, &z.to_point())? {
                    return Ok(report);
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let small = ctx.window(3);
    let mut attempts = 0;
    while report.checked < budget && attempts < budget * 20 {
        attempts += 1;
        let c = rng.gen_range(0..ctx.num_classes());
        let Some(ym) = small.levels[c].sets.choose(&mut rng) else { continue };
        let Some(zm) = small.levels[c].sets.choose(&mut rng) else { continue };
        let y = ConcreteGSet::realize(&ctx, ym)?;
        let z = ConcreteGSet::realize(&ctx, zm)?;
        let maps = match z.equivariant_maps(&y, 64) {
            Ok(m) if !m.is_empty() => m,
            _ => continue,
        };
        let g = maps.choose(&mut rng).expect("nonempty");
        let mut fibers = Vec::new();
        for orbit in y.orbits() {
            let stab = y.stabilizer(orbit[0]);
            let d = ctx.classify(&stab)?.0;
            let options: Vec<&OrbitMultiset> = system.admissible_sets(d).filter(|s| s.carrier(&ctx) <= 4).collect();
            match options.choose(&mut rng) {
                Some(s) => fibers.push((*s).clone()),
                None => break,
            }
        }
        if fibers.len() != y.orbits().len() {
            continue;
        }
        if !check(&mut report, &y, &fibers, &z, g)? {
            return Ok(report);
        }
    }
    Ok(report)
}

/// A copy of `system` with one restriction removed: a set `Res S` at a lower
/// level is deleted while `S` is kept. `None` when no such set exists.
pub fn corrupt_one_restriction(system: &WeakIndexingSystem) -> Result<Option<(WeakIndexingSystem, OrbitMultiset)>> {
    let ctx = system.context();
    for c in (0..ctx.num_classes()).rev() {
        let level = ctx.level(c);
        for s in system.admissible_sets(c) {
            for m in 0..level.top() {
                let r = crate::gset::restrict_local(ctx, s, m);
                if r.is_empty() {
                    continue;
                }
                let sets: Vec<OrbitMultiset> = system.all_sets().into_iter().filter(|x| *x != r).collect();
                let bad = WeakIndexingSystem::from_sets(ctx, system.bound(), &sets)?;
                return Ok(Some((bad, r)));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegalReport {
    pub passed: bool,
    pub whole: usize,
    pub left: usize,
    pub right: usize,
    /// sampled homs checked for `f ∈ I ⇔ f|S ∈ I and f|S′ ∈ I`
    pub homs_checked: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

/// The basis of `Hom_I(T, S ⊔ S′)` is the disjoint union of the bases of
/// `Hom_I(T, S)` and `Hom_I(T, S′)`, and a span into `S ⊔ S′` has forward leg
/// in `I` exactly when both of its restrictions do.
pub fn verify_segal(
    system: &WeakIndexingSystem,
    t: &OrbitMultiset,
    s: &OrbitMultiset,
    s2: &OrbitMultiset,
    samples: usize,
    seed: u64,
) -> Result<SegalReport> {
    let ctx = system.context();
    if t.level != s.level || s.level != s2.level {
        return Err(Error::ShapeMismatch("objects live at different levels".into()));
    }
    let tr = ConcreteGSet::realize(ctx, t)?;
    let sr = ConcreteGSet::realize(ctx, s)?;
    let s2r = ConcreteGSet::realize(ctx, s2)?;
    let whole = SpanSpace::new(tr.clone(), sr.union(&s2r)?)?;
    let left = SpanSpace::new(tr.clone(), sr.clone())?;
    let right = SpanSpace::new(tr, s2r)?;
    let n = sr.size();

    // where a basic span into S ⊔ S′ lands
    let split = |key: SpanKey| -> Result<(bool, SpanKey)> {
        let (x, y) = whole.pair(whole.reps[key.orbit].0);
        let l = whole.apex_subgroup(key)?;
        if y < n {
            Ok((false, left.classify(x, y, &l)?))
        } else {
            Ok((true, right.classify(x, y - n, &l)?))
        }
    };
    let all_whole = whole.keys()?;
    let mut report = SegalReport { passed: true, whole: 0, left: 0, right: 0, homs_checked: 0, failure: None };
    let bw = basic_spans(&whole, Some(system))?;
    let bl = basic_spans(&left, Some(system))?;
    let br = basic_spans(&right, Some(system))?;
    report.whole = bw.len();
    report.left = bl.len();
    report.right = br.len();
    let mut image: Vec<(bool, SpanKey)> = bw.iter().map(|&k| split(k)).collect::<Result<_>>()?;
    image.sort();
    let mut expected: Vec<(bool, SpanKey)> = bl.iter().map(|&k| (false, k)).chain(br.iter().map(|&k| (true, k))).collect();
    expected.sort();
    if image != expected {
        report.passed = false;
        report.failure = Some(format!("{} basic spans into the union, {} + {} into the summands", bw.len(), bl.len(), br.len()));
        return Ok(report);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..samples {
        let mut f = SpanHom::zero(&whole);
        let mut fl = SpanHom::zero(&left);
        let mut fr = SpanHom::zero(&right);
        if i > 0 && !all_whole.is_empty() {
            for _ in 0..rng.gen_range(1..=3) {
                let k = *all_whole.choose(&mut rng).expect("nonempty");
                *f.basis.entry(k).or_insert(0) += 1;
                let (side, k2) = split(k)?;
                let part = if side { &mut fr } else { &mut fl };
                *part.basis.entry(k2).or_insert(0) += 1;
            }
        }
        let lhs = match f.in_system(system) {
            Ok(b) => b,
            Err(Error::QueryExceedsBound { .. }) => continue,
            Err(e) => return Err(e),
        };
        let rhs = match (fl.in_system(system), fr.in_system(system)) {
            (Ok(a), Ok(b)) => a && b,
            (Err(Error::QueryExceedsBound { .. }), _) | (_, Err(Error::QueryExceedsBound { .. })) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        report.homs_checked += 1;
        if lhs != rhs {
            report.passed = false;
            report.failure = Some(format!("{f} has forward leg in I: {lhs}; its restrictions: {rhs}"));
            return Ok(report);
        }
    }
    Ok(report)
}

/// Basic spans `* → *` at level `c` against orbit types `[H/K]`: the key
/// of each basic span records its apex class.
pub fn burnside_basis(ctx: &Arc<GroupContext>, c: usize) -> Result<Vec<(SpanKey, usize)>> {
    let p = OrbitMultiset::point(ctx, c);
    let space = SpanSpace::of_multisets(ctx, &p, &p)?;
    let keys = basic_spans(&space, None)?;
    keys.into_iter()
        .map(|k| {
            let l = space.apex_subgroup(k)?;
            Ok((k, ctx.transport(space.acting(), &l)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Arc<GroupContext> {
        GroupContext::from_builtin("C2").unwrap()
    }

    #[test]
    fn basic_span_counts() {
        let c = c2();
        let e = OrbitMultiset::empty(&c, 1);
        assert!(basic_spans(&SpanSpace::of_multisets(&c, &e, &e).unwrap(), None).unwrap().is_empty());
        let triv = GroupContext::from_builtin("1").unwrap();
        let p = OrbitMultiset::point(&triv, 0);
        assert_eq!(basic_spans(&SpanSpace::of_multisets(&triv, &p, &p).unwrap(), None).unwrap().len(), 1);
        let star = OrbitMultiset::point(&c, 1);
        let space = SpanSpace::of_multisets(&c, &star, &star).unwrap();
        let all = WeakIndexingSystem::complete(&c, 8);
        assert_eq!(basic_spans(&space, Some(&all)).unwrap().len(), 2);
        let triv_sys = WeakIndexingSystem::trivial(&c, 8);
        assert_eq!(basic_spans(&space, Some(&triv_sys)).unwrap().len(), 1);
    }

    #[test]
    fn free_self_span_squares_to_twice_itself() {
        let c = c2();
        let star = OrbitMultiset::point(&c, 1);
        let space = SpanSpace::of_multisets(&c, &star, &star).unwrap();
        let free = space.keys().unwrap().into_iter().find(|k| space.apex_subgroup(*k).unwrap().len() == 1).unwrap();
        let f = SpanHom::basic(&space, free);
        let ff = f.compose(&f).unwrap();
        assert_eq!(ff.basis, BTreeMap::from([(free, 2)]));
    }

    #[test]
    fn identity_and_zero() {
        let s3 = GroupContext::from_builtin("S3").unwrap();
        let top = s3.top();
        let x = OrbitMultiset { level: top, counts: vec![1, 0, 1, 1] };
        let y = OrbitMultiset { level: top, counts: vec![0, 1, 0, 1] };
        let space = SpanSpace::of_multisets(&s3, &x, &y).unwrap();
        let keys = space.keys().unwrap();
        let mut f = SpanHom::zero(&space);
        f.basis.insert(keys[0], 2);
        f.basis.insert(keys[keys.len() / 2], 1);
        let idx = SpanHom::identity(&space.source).unwrap();
        let idy = SpanHom::identity(&space.target).unwrap();
        assert_eq!(idx.compose(&f).unwrap(), f);
        assert_eq!(f.compose(&idy).unwrap(), f);
        let zero = SpanHom::zero(&SpanSpace::new(space.target.clone(), space.source.clone()).unwrap());
        assert!(f.compose(&zero).unwrap().is_zero());
        assert!(matches!(f.compose(&f), Err(Error::NotComposable(_))));
    }

    #[test]
    fn keys_are_iso_classes() {
        let s3 = GroupContext::from_builtin("S3").unwrap();
        let top = s3.top();
        let x = OrbitMultiset { level: top, counts: vec![0, 1, 1, 0] };
        let space = SpanSpace::of_multisets(&s3, &x, &x).unwrap();
        let spans: Vec<BasicSpan> = space.keys().unwrap().into_iter().map(|k| space.realize(k).unwrap()).collect();
        for (i, a) in spans.iter().enumerate() {
            for (j, b) in spans.iter().enumerate() {
                assert_eq!(spans_isomorphic(a, b), i == j);
            }
            let (r, q) = (a.backward.apply(0), a.forward.apply(0));
            assert_eq!(space.classify(r, q, &a.apex_subgroup).unwrap(), a.key);
        }
    }

    #[test]
    fn segal_examples() {
        let triv = GroupContext::from_builtin("1").unwrap();
        let all = WeakIndexingSystem::complete(&triv, 8);
        let p = OrbitMultiset::point(&triv, 0);
        let r = verify_segal(&all, &p, &p, &p, 20, 1).unwrap();
        assert!(r.passed);
        assert_eq!((r.whole, r.left, r.right), (2, 1, 1));
        let c = c2();
        let all = WeakIndexingSystem::complete(&c, 8);
        let free = OrbitMultiset::orbit(&c, 1, 0);
        let star = OrbitMultiset::point(&c, 1);
        let r = verify_segal(&all, &free, &star, &star, 50, 2).unwrap();
        assert!(r.passed);
        assert_eq!(r.whole, r.left + r.right);
        let empty = OrbitMultiset::empty(&c, 1);
        let r = verify_segal(&WeakIndexingSystem::nonunital_complete(&c, 8), &free, &star, &empty, 50, 3).unwrap();
        assert!(r.passed);
        assert_eq!(r.right, 0);
    }

    #[test]
    fn pullback_stability_and_corruption() {
        let c = c2();
        let all = WeakIndexingSystem::complete(&c, 6);
        let r = verify_pullback_stability(&all, 200, 7).unwrap();
        assert!(r.passed && r.checked >= 200, "{r:?}");
        let (bad, removed) = corrupt_one_restriction(&all).unwrap().unwrap();
        assert!(!bad.contains(&removed));
        let r = verify_pullback_stability(&bad, 200, 7).unwrap();
        assert!(!r.passed);
        assert!(r.failure.is_some());
    }

    #[test]
    fn burnside_basis_matches_orbit_types() {
        let s3 = GroupContext::from_builtin("S3").unwrap();
        let b = burnside_basis(&s3, s3.top()).unwrap();
        let mut types: Vec<usize> = b.iter().map(|x| x.1).collect();
        types.sort();
        assert_eq!(types, (0..s3.level(s3.top()).len()).collect::<Vec<_>>());
    }
}
