//! The acceptance battery: each criterion recomputes its quantities and
//! compares them with an independent oracle or a closed-form expectation.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::burnside::{check_interchange, distinctness_witness, eckmann_hilton_failure_demo, InterchangeOptions};
use crate::error::Result;
use crate::group::GroupContext;
use crate::gset::{coinduce, iso_class_from_marks, marks, OrbitMultiset};
use crate::oracle;
use crate::repsupport::{catalog, check_additivity, Dim, DimensionFunction};
use crate::spancat::{corrupt_one_restriction, verify_pullback_stability, verify_segal};
use crate::transfer::{enumerate_transfer_systems, TransferSystem};
use crate::windex::{saturate, tensor_weak_ninfty, Family, WeakIndexingSystem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
    pub limit_secs: Option<u64>,
}

pub const CRITERIA: [(u8, &str, Option<u64>); 11] = [
    (1, "transfer-system enumeration matches brute force", Some(60)),
    (2, "closure join equals alternating-chain join", Some(120)),
    (3, "lattice laws", None),
    (4, "tensor formula algebra", None),
    (5, "aE-unitality gate", None),
    (6, "additivity of arity supports", Some(120)),
    (7, "sigma-admissibility", None),
    (8, "weak-indexing-category axioms via spans", Some(120)),
    (9, "Eckmann-Hilton failure", Some(60)),
    (10, "mark calculus", Some(120)),
    (11, "saturation stability", None),
];

/// Groups whose full transfer-system catalogs are used throughout.
pub const CATALOG_GROUPS: [&str; 4] = ["Cp2", "C9", "C2xC2", "S3"];

/// Window bound for the indexing systems of a group: large enough that
/// every orbit `[H/K]` is visible.
pub fn catalog_bound(ctx: &GroupContext) -> usize {
    ctx.order().max(6)
}

struct Outcome {
    passed: bool,
    detail: String,
    /// systems produced along the way, for the stability criterion
    systems: Vec<WeakIndexingSystem>,
}

fn ok(detail: impl Into<String>) -> Outcome {
    Outcome { passed: true, detail: detail.into(), systems: Vec::new() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { passed: false, detail: detail.into(), systems: Vec::new() }
}

fn ctx(name: &str) -> Result<Arc<GroupContext>> {
    GroupContext::from_builtin(name)
}

fn strip_reflexive(ctx: &GroupContext, rel: &BTreeSet<(usize, usize)>) -> BTreeSet<(usize, usize)> {
    rel.iter().copied().filter(|&(c, j)| j != ctx.level(c).top()).collect()
}

fn criterion_1() -> Result<Outcome> {
    let cases = [("1", 1), ("C2", 2), ("C3", 2), ("Cp2", 5), ("C9", 5), ("Cp3", 14), ("C27", 14)];
    let mut parts = Vec::new();
    for (name, expected) in cases {
        let c = ctx(name)?;
        let fast: BTreeSet<BTreeSet<(usize, usize)>> =
            enumerate_transfer_systems(&c)?.iter().map(|t| t.pairs().collect()).collect();
        let brute: BTreeSet<BTreeSet<(usize, usize)>> =
            oracle::transfer::transfer_systems(&c).iter().map(|r| strip_reflexive(&c, r)).collect();
        if fast.len() != expected || fast != brute {
            return Ok(fail(format!("{name}: enumerated {}, brute force {}, expected {expected}", fast.len(), brute.len())));
        }
        parts.push(format!("{name}:{expected}"));
    }
    Ok(ok(parts.join(" ")))
}

/// Transfer systems of one catalog group with their indexing systems.
struct Catalog {
    ctx: Arc<GroupContext>,
    bound: usize,
    transfers: Vec<TransferSystem>,
    systems: Vec<WeakIndexingSystem>,
}

fn catalogs() -> Result<Vec<Catalog>> {
    CATALOG_GROUPS
        .iter()
        .map(|name| {
            let c = ctx(name)?;
            let bound = catalog_bound(&c);
            let transfers = enumerate_transfer_systems(&c)?;
            let systems = transfers.iter().map(|t| t.to_indexing_system(bound)).collect();
            Ok(Catalog { ctx: c, bound, transfers, systems })
        })
        .collect()
}

fn criterion_2(cats: &[Catalog]) -> Result<Outcome> {
    let mut total = 0;
    let mut systems = Vec::new();
    for cat in cats {
        let n = cat.transfers.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        let results: Vec<Option<(String, WeakIndexingSystem)>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let (a, b) = (&cat.transfers[i], &cat.transfers[j]);
                let joined = cat.systems[i].join(&cat.systems[j])?;
                let closure = TransferSystem::underlying(&joined);
                let rubin = a.join_rubin(b)?;
                let a_pairs: BTreeSet<_> = a.pairs().collect();
                let b_pairs: BTreeSet<_> = b.pairs().collect();
                let brute = strip_reflexive(&cat.ctx, &oracle::transfer::join(&cat.ctx, &a_pairs, &b_pairs));
                let rubin_pairs: BTreeSet<_> = rubin.pairs().collect();
                if closure != rubin || rubin_pairs != brute {
                    return Ok(Some((format!("{}: {} ∨ {}", cat.ctx.name(), a.display(), b.display()), joined)));
                }
                Ok(if i <= j { None } else { Some((String::new(), joined)) })
            })
            .collect::<Result<_>>()?;
        for r in results.into_iter().flatten() {
            if !r.0.is_empty() {
                return Ok(fail(format!("joins differ for {}", r.0)));
            }
            systems.push(r.1);
        }
        total += pairs.len();
    }
    Ok(Outcome { passed: true, detail: format!("{total} ordered pairs"), systems })
}

fn lattice_laws(a: &WeakIndexingSystem, b: &WeakIndexingSystem, c: &WeakIndexingSystem) -> Result<Option<&'static str>> {
    let ab = a.join(b)?;
    let mab = a.meet(b)?;
    if ab != b.join(a)? {
        return Ok(Some("join commutativity"));
    }
    if mab != b.meet(a)? {
        return Ok(Some("meet commutativity"));
    }
    if ab.join(c)? != a.join(&b.join(c)?)? {
        return Ok(Some("join associativity"));
    }
    if mab.meet(c)? != a.meet(&b.meet(c)?)? {
        return Ok(Some("meet associativity"));
    }
    if a.join(a)? != *a || a.meet(a)? != *a {
        return Ok(Some("idempotence"));
    }
    if a.join(&mab)? != *a || a.meet(&ab)? != *a {
        return Ok(Some("absorption"));
    }
    Ok(None)
}

fn transfer_laws(a: &TransferSystem, b: &TransferSystem, c: &TransferSystem) -> Result<Option<&'static str>> {
    let ab = a.join_rubin(b)?;
    let mab = a.meet(b)?;
    if ab != b.join_rubin(a)? || mab != b.meet(a)? {
        return Ok(Some("commutativity"));
    }
    if ab.join_rubin(c)? != a.join_rubin(&b.join_rubin(c)?)? || mab.meet(c)? != a.meet(&b.meet(c)?)? {
        return Ok(Some("associativity"));
    }
    if a.join_rubin(a)? != *a || a.meet(a)? != *a || a.join_rubin(&mab)? != *a || a.meet(&ab)? != *a {
        return Ok(Some("idempotence or absorption"));
    }
    Ok(None)
}

/// A random saturated system from one to three small generators.
fn random_system(ctx: &Arc<GroupContext>, bound: usize, rng: &mut impl Rng) -> Result<WeakIndexingSystem> {
    let window = ctx.window(bound.min(4));
    let n = rng.gen_range(1..=3);
    let mut gens = Vec::new();
    for _ in 0..n {
        let c = rng.gen_range(0..ctx.num_classes());
        if let Some(s) = window.levels[c].sets.choose(rng) {
            gens.push(s.clone());
        }
    }
    saturate(ctx, &gens, bound)
}

fn criterion_3(cats: &[Catalog], seed: u64) -> Result<Outcome> {
    let mut checked = 0usize;
    for cat in cats {
        let n = cat.transfers.len();
        let triples: Vec<(usize, usize, usize)> =
            (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k)))).collect();
        let bad = triples.par_iter().map(|&(i, j, k)| {
            let t = transfer_laws(&cat.transfers[i], &cat.transfers[j], &cat.transfers[k])?;
            let w = lattice_laws(&cat.systems[i], &cat.systems[j], &cat.systems[k])?;
            Ok(t.or(w).map(|law| format!("{law} fails on {} triple ({i},{j},{k})", cat.ctx.name())))
        });
        let bad: Vec<Option<String>> = bad.collect::<Result<_>>()?;
        if let Some(msg) = bad.into_iter().flatten().next() {
            return Ok(fail(msg));
        }
        checked += triples.len();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampled = 0;
    for name in ["C4", "D8", "A4"] {
        let c = ctx(name)?;
        let bound = 6;
        for _ in 0..500 {
            let a = random_system(&c, bound, &mut rng)?;
            let b = random_system(&c, bound, &mut rng)?;
            let d = random_system(&c, bound, &mut rng)?;
            if let Some(law) = lattice_laws(&a, &b, &d)? {
                return Ok(fail(format!("{law} fails on a random {name} triple (seed {seed})")));
            }
            sampled += 1;
        }
    }
    Ok(ok(format!("{checked} catalog triples, {sampled} random triples")))
}

/// Catalog systems together with the weak systems built from families.
fn weak_catalog(cat: &Catalog) -> Result<Vec<WeakIndexingSystem>> {
    let ctx = &cat.ctx;
    let b = cat.bound;
    let mut out = cat.systems.clone();
    out.push(WeakIndexingSystem::trivial(ctx, b));
    out.push(WeakIndexingSystem::finf(ctx, b));
    out.push(WeakIndexingSystem::nonunital_complete(ctx, b));
    for f in Family::enumerate(ctx) {
        out.push(WeakIndexingSystem::e0(ctx, &f, b));
        out.push(WeakIndexingSystem::terminal_with_unit_family(ctx, &f, b));
        out.push(WeakIndexingSystem::complete(ctx, b).borelify(&f));
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|w| seen.insert(w.clone()));
    Ok(out)
}

fn criterion_4(cats: &[Catalog]) -> Result<Outcome> {
    let mut checked = 0;
    let mut systems = Vec::new();
    for cat in cats {
        let ws = weak_catalog(cat)?;
        let triv = WeakIndexingSystem::trivial(&cat.ctx, cat.bound);
        for w in &ws {
            if w.predicates().has_one_color && tensor_weak_ninfty(&triv, w)?.system != *w {
                return Ok(fail(format!("{}: unit law fails", cat.ctx.name())));
            }
        }
        let n = ws.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let results: Vec<std::result::Result<WeakIndexingSystem, String>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let t = tensor_weak_ninfty(&ws[i], &ws[j])?.system;
                if t != tensor_weak_ninfty(&ws[j], &ws[i])?.system {
                    return Ok(Err(format!("{}: tensor is not commutative on ({i},{j})", cat.ctx.name())));
                }
                let colors = ws[i].color_family()?.intersection(&ws[j].color_family()?);
                if t.color_family()? != colors {
                    return Ok(Err(format!("{}: color law fails on ({i},{j})", cat.ctx.name())));
                }
                Ok(Ok(t))
            })
            .collect::<Result<_>>()?;
        for r in results {
            match r {
                Ok(t) => systems.push(t),
                Err(msg) => return Ok(fail(msg)),
            }
        }
        checked += pairs.len();
    }
    Ok(Outcome { passed: true, detail: format!("{checked} unordered pairs"), systems })
}

fn criterion_5() -> Result<Outcome> {
    let mut checked = 0;
    let mut systems = Vec::new();
    for name in ["1", "C2", "C4", "C2xC2", "S3"] {
        let c = ctx(name)?;
        let b = 6;
        let mut expect = vec![
            (WeakIndexingSystem::nonunital_complete(&c, b), false, "Comm_nu".to_string()),
            (WeakIndexingSystem::trivial(&c, b), true, "triv".to_string()),
            (WeakIndexingSystem::finf(&c, b), true, "F^inf".to_string()),
            (WeakIndexingSystem::complete(&c, b), true, "complete".to_string()),
        ];
        for f in Family::enumerate(&c) {
            expect.push((WeakIndexingSystem::e0(&c, &f, b), true, format!("E0[{}]", f.labels(&c).join(","))));
        }
        for rep in catalog(&c) {
            expect.push((rep.rep.arity_support(b)?, true, format!("F^{}", rep.name)));
        }
        for (w, want, label) in expect {
            if w.predicates().is_ae_unital != want {
                return Ok(fail(format!("{name}: {label} classified as aE-unital = {}", !want)));
            }
            checked += 1;
            systems.push(w);
        }
    }
    Ok(Outcome { passed: true, detail: format!("{checked} systems classified"), systems })
}

fn criterion_6() -> Result<Outcome> {
    let bound = 6;
    let mut checked = 0;
    let mut systems = Vec::new();
    for name in ["C2", "C4", "C2xC2", "S3"] {
        let c = ctx(name)?;
        let reps = catalog(&c);
        if reps.len() < 6 {
            return Ok(fail(format!("{name}: only {} representations in the catalog", reps.len())));
        }
        let pairs: Vec<(usize, usize)> = (0..reps.len()).flat_map(|i| (0..reps.len()).map(move |j| (i, j))).collect();
        let reports: Vec<_> = pairs
            .par_iter()
            .map(|&(i, j)| check_additivity(&reps[i].rep, &reps[j].rep, bound).map(|r| (i, j, r)))
            .collect::<Result<_>>()?;
        for (i, j, r) in reports {
            if !r.holds {
                return Ok(fail(format!("{name}: {} ⊕ {}: {:?}", reps[i].name, reps[j].name, r.discrepancy)));
            }
        }
        for rep in &reps {
            systems.push(rep.rep.arity_support(bound)?);
        }
        checked += pairs.len();
    }
    Ok(Outcome { passed: true, detail: format!("{checked} ordered pairs at B = {bound}"), systems })
}

fn criterion_7() -> Result<Outcome> {
    let c = ctx("C2")?;
    let bound = 8;
    let sigma = DimensionFunction::sign(&c, 0, Dim::Fin(1))?;
    let support = sigma.arity_support(bound)?;
    let mut per_carrier = vec![0usize; bound + 1];
    for s in support.admissible_sets(c.top()) {
        per_carrier[s.carrier(&c) as usize] += 1;
    }
    let passed = per_carrier.iter().all(|&n| n == 1);
    let detail = format!("sets per carrier 0..{bound}: {per_carrier:?}");
    Ok(Outcome { passed, detail, systems: vec![support] })
}

fn criterion_8(cats: &[Catalog], seed: u64) -> Result<Outcome> {
    let mut systems_checked = 0;
    let mut segal_total = 0;
    let mut pullback_total = 0;
    for cat in cats {
        let ctx = &cat.ctx;
        let small = ctx.window(2);
        let mut triples = Vec::new();
        for c in 0..ctx.num_classes() {
            let sets = &small.levels[c].sets;
            for t in sets {
                for s in sets {
                    for s2 in sets {
                        triples.push((t.clone(), s.clone(), s2.clone()));
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        triples.shuffle(&mut rng);
        triples.truncate(50.max(triples.len().min(60)));
        let results: Vec<(usize, usize, Option<String>)> = cat
            .systems
            .par_iter()
            .enumerate()
            .map(|(i, w)| {
                let r = verify_pullback_stability(w, 200, seed + i as u64)?;
                if !r.passed || r.checked < 200 {
                    return Ok((r.checked, 0, Some(format!("{}: pullback stability {:?}", ctx.name(), r.failure))));
                }
                let mut segal = 0;
                for (t, s, s2) in &triples {
                    let rep = verify_segal(w, t, s, s2, 4, seed)?;
                    if !rep.passed {
                        return Ok((r.checked, segal, Some(format!("{}: Segal {:?}", ctx.name(), rep.failure))));
                    }
                    segal += 1;
                }
                Ok((r.checked, segal, None))
            })
            .collect::<Result<_>>()?;
        for (p, s, err) in results {
            if let Some(msg) = err {
                return Ok(fail(msg));
            }
            if s < 50 {
                return Ok(fail(format!("{}: only {s} Segal checks", ctx.name())));
            }
            pullback_total += p;
            segal_total += s;
            systems_checked += 1;
        }
    }
    let c2 = ctx("S3")?;
    let all = WeakIndexingSystem::complete(&c2, 6);
    let Some((bad, removed)) = corrupt_one_restriction(&all)? else {
        return Ok(fail("no restriction to delete"));
    };
    let report = verify_pullback_stability(&bad, 200, seed)?;
    let Some(witness) = report.failure.filter(|_| !report.passed) else {
        return Ok(fail("the corrupted system passed pullback stability"));
    };
    Ok(ok(format!(
        "{systems_checked} systems, {pullback_total} pullbacks, {segal_total} Segal checks; corrupted system (without {}) fails with fiber {}",
        removed.display(&c2),
        witness.bad_fiber.to_multiset(&c2).map(|f| f.display(&c2)).unwrap_or_default()
    )))
}

fn criterion_9() -> Result<Outcome> {
    let eh = eckmann_hilton_failure_demo(4);
    if !eh.passed() {
        return Ok(fail(format!("Z/4 demo: {eh:?}")));
    }
    let c = ctx("C2")?;
    let e = Family::from_classes(&c, &[0])?;
    let bound = 4;
    let sys = WeakIndexingSystem::terminal_with_unit_family(&c, &e, bound);
    let top = c.top();
    let sets: Vec<OrbitMultiset> = sys.admissible_sets(top).cloned().collect();
    let mut checked = 0;
    for s in &sets {
        for t in &sets {
            let r = check_interchange(&sys, &e, s, t, &InterchangeOptions { budget: 2_000_000, ..Default::default() })?;
            if !r.passed || !r.exhaustive {
                return Ok(fail(format!("interchange on {} × {}: {:?}", s.display(&c), t.display(&c), r.failure)));
            }
            checked += r.checked;
        }
    }
    let mut witnesses = 0;
    for s in &sets {
        if s.is_point(&c) {
            continue;
        }
        distinctness_witness(&sys, &e, s)?;
        witnesses += 1;
    }
    Ok(ok(format!(
        "Z/4 differs at {:?}; {} index pairs, {checked} input arrays; {witnesses} witnesses",
        eh.differing_pair,
        sets.len() * sets.len()
    )))
}

fn criterion_10() -> Result<Outcome> {
    let mut roundtrips = 0usize;
    for name in ["1", "C2", "C3", "C4", "C2xC2", "C5", "S3", "C6", "C7", "C8", "D8", "Q8", "C2xC4", "C9", "D10", "A4", "D12", "S4"] {
        let c = ctx(name)?;
        let window = c.window(20);
        let bad: Option<String> = window.levels.par_iter().find_map_any(|lw| {
            lw.sets.iter().find_map(|s| match iso_class_from_marks(&c, &marks(&c, s)) {
                Ok(back) if back == *s => None,
                _ => Some(format!("{name}: {} does not round-trip", s.display(&c))),
            })
        });
        if let Some(msg) = bad {
            return Ok(fail(msg));
        }
        roundtrips += window.total();
    }
    let mut coinductions = 0;
    for name in ["C2", "C3", "C4", "C2xC2", "S3", "C6", "D8", "Q8", "C8"] {
        let c = ctx(name)?;
        for h in 0..c.num_classes() {
            let level = c.level(h);
            for k in 0..level.len() {
                let ksub = level.locals[k].rep;
                let kc = level.locals[k].global;
                for x in c.window(3).levels[kc].sets.iter() {
                    let ours = coinduce(&c, x, &ksub, &level.sub)?;
                    let Some(theirs) = oracle::gset::coinduce_marks(&c, x, &ksub, &level.sub) else { continue };
                    if marks(&c, &ours).entries != theirs {
                        return Ok(fail(format!("{name}: coinduction of {} along {}", x.display(&c), level.locals[k].label)));
                    }
                    coinductions += 1;
                }
            }
        }
    }
    Ok(ok(format!("{roundtrips} mark round trips, {coinductions} coinductions against the function-set model")))
}

fn criterion_11(systems: &[WeakIndexingSystem]) -> Result<Outcome> {
    let bad = systems.par_iter().map(|w| {
        let b = w.bound();
        for extra in [2, 4] {
            let again = w.resaturate(b + extra)?;
            if !again.agrees_up_to(w, b) {
                return Ok(Some(format!("{}: resaturation at {} changes the window {b}", w.context().name(), b + extra)));
            }
        }
        Ok(None)
    });
    let bad: Vec<Option<String>> = bad.collect::<Result<_>>()?;
    if let Some(msg) = bad.into_iter().flatten().next() {
        return Ok(fail(msg));
    }
    Ok(ok(format!("{} systems", systems.len())))
}

/// Runs the criteria with the given ids, in order. Systems built by
/// criteria 2 to 7 feed criterion 11.
pub fn run(ids: &[u8], seed: u64) -> Vec<CriterionResult> {
    let mut produced: Vec<WeakIndexingSystem> = Vec::new();
    let mut cats: Option<Vec<Catalog>> = None;
    let mut out = Vec::new();
    for &(id, name, limit) in CRITERIA.iter() {
        let start = Instant::now();
        let needs_catalog = matches!(id, 2 | 3 | 4 | 8 | 11);
        let wanted = ids.contains(&id);
        if !wanted && !(matches!(id, 2..=7) && ids.contains(&11)) {
            continue;
        }
        if needs_catalog && cats.is_none() {
            match catalogs() {
                Ok(c) => cats = Some(c),
                Err(e) => {
                    out.push(CriterionResult { id, name: name.into(), passed: false, detail: e.to_string(), millis: 0, limit_secs: limit });
                    continue;
                }
            }
        }
        let cats_ref = cats.as_deref().unwrap_or(&[]);
        let outcome = match id {
            1 => criterion_1(),
            2 => criterion_2(cats_ref),
            3 => criterion_3(cats_ref, seed),
            4 => criterion_4(cats_ref),
            5 => criterion_5(),
            6 => criterion_6(),
            7 => criterion_7(),
            8 => criterion_8(cats_ref, seed),
            9 => criterion_9(),
            10 => criterion_10(),
            _ => {
                let mut all: Vec<WeakIndexingSystem> = cats_ref.iter().flat_map(|c| c.systems.iter().cloned()).collect();
                all.extend(produced.iter().cloned());
                criterion_11(&all)
            }
        };
        let millis = start.elapsed().as_millis();
        let result = match outcome {
            Ok(o) => {
                produced.extend(o.systems);
                let in_time = limit.is_none_or(|l| millis <= u128::from(l) * 1000);
                let detail = if in_time { o.detail } else { format!("{} (over the {}s limit)", o.detail, limit.unwrap_or(0)) };
                CriterionResult { id, name: name.into(), passed: o.passed && in_time, detail, millis, limit_secs: limit }
            }
            Err(e) => CriterionResult { id, name: name.into(), passed: false, detail: format!("{}: {e}", e.name()), millis, limit_secs: limit },
        };
        if wanted {
            out.push(result);
        }
    }
    out
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    let ids: Vec<u8> = CRITERIA.iter().map(|c| c.0).collect();
    run(&ids, seed)
}

/// One line per criterion.
pub fn format_line(r: &CriterionResult) -> String {
    format!(
        "criterion {:>2} {} [{:.2}s] {}: {}",
        r.id,
        if r.passed { "PASS" } else { "FAIL" },
        r.millis as f64 / 1000.0,
        r.name,
        r.detail
    )
}
