use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use normcalc::burnside::{restriction_naturality, tr, BurnsideElement};
use normcalc::group::GroupContext;
use normcalc::gset::{ConcreteGSet, induce_local, iso_class_from_marks, marks, restrict_local, OrbitMultiset};
use normcalc::oracle;
use normcalc::spancat::{basic_spans, SpanHom, SpanSpace};
use normcalc::windex::{saturate, WeakIndexingSystem};

const GROUPS: [&str; 5] = ["C2", "C3", "C4", "C2xC2", "S3"];

fn ctx(i: usize) -> Arc<GroupContext> {
    static CTX: OnceLock<Vec<Arc<GroupContext>>> = OnceLock::new();
    CTX.get_or_init(|| GROUPS.iter().map(|g| GroupContext::from_builtin(g).unwrap()).collect())[i].clone()
}

/// Raw material for a set: group, level seed and multiplicities.
fn raw_set() -> impl Strategy<Value = (usize, usize, Vec<u64>)> {
    (0..GROUPS.len(), any::<usize>(), prop::collection::vec(0..3u64, 8))
}

/// Fits the raw counts onto a level, dropping orbits until the carrier is
/// at most `bound`.
fn set_from(c: &GroupContext, level: usize, raw: &[u64], bound: u64) -> OrbitMultiset {
    let n = c.level(level).len();
    let mut counts: Vec<u64> = raw.iter().copied().cycle().take(n).collect();
    loop {
        let s = OrbitMultiset::from_counts(c, level, counts.clone()).unwrap();
        if s.carrier(c) <= bound {
            return s;
        }
        let i = counts.iter().position(|&x| x > 0).unwrap();
        counts[i] -= 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn marks_determine_sets((g, l, raw) in raw_set()) {
        let c = ctx(g);
        let x = set_from(&c, l % c.num_classes(), &raw, 12);
        let m = marks(&c, &x);
        prop_assert_eq!(&m.entries, &oracle::gset::marks_by_counting(&c, &x));
        prop_assert_eq!(iso_class_from_marks(&c, &m).unwrap(), x);
    }

    #[test]
    fn induction_multiplies_carrier((g, l, raw) in raw_set(), up in any::<usize>()) {
        let c = ctx(g);
        let x = set_from(&c, l % c.num_classes(), &raw, 8);
        let above: Vec<(usize, usize)> = (0..c.num_classes())
            .flat_map(|h| c.level(h).locals.iter().enumerate().filter(|(_, loc)| loc.global == x.level).map(move |(k, _)| (h, k)))
            .collect();
        let (h, k) = above[up % above.len()];
        let y = induce_local(&c, &x, h, k).unwrap();
        let index = (c.poset.classes[h].order / c.poset.classes[x.level].order) as u64;
        prop_assert_eq!(y.carrier(&c), index * x.carrier(&c));
        // restricting back along the same orbit type contains the original
        let back = restrict_local(&c, &y, k);
        for (o, n) in x.orbits() {
            prop_assert!(back.counts[o] >= n);
        }
    }

    #[test]
    fn saturation_is_closed((g, l, raw) in raw_set(), (l2, raw2) in (any::<usize>(), prop::collection::vec(0..2u64, 8))) {
        let c = ctx(g);
        let bound = 6;
        let gens = vec![
            set_from(&c, l % c.num_classes(), &raw, bound as u64),
            set_from(&c, l2 % c.num_classes(), &raw2, bound as u64),
        ];
        let w = saturate(&c, &gens, bound).unwrap();
        prop_assert!(w.validate().is_ok());
        for s in &gens {
            prop_assert!(w.contains(s));
        }
        prop_assert_eq!(&saturate(&c, &w.all_sets(), bound).unwrap(), &w);
        let other = WeakIndexingSystem::finf(&c, bound);
        let meet = w.meet(&other).unwrap();
        let join = w.join(&other).unwrap();
        prop_assert!(meet.is_subset(&w) && meet.is_subset(&other));
        prop_assert!(w.is_subset(&join) && other.is_subset(&join));
    }

    #[test]
    fn transfers_commute_with_restriction((g, l, raw) in raw_set(), seeds in prop::collection::vec(prop::collection::vec(0..2u64, 8), 6)) {
        let c = ctx(g);
        let all = WeakIndexingSystem::complete(&c, 8);
        let s = set_from(&c, l % c.num_classes(), &raw, 4);
        let level = c.level(s.level);
        let mut seeds = seeds.iter().cycle();
        let inputs: Vec<Vec<OrbitMultiset>> = (0..level.len())
            .map(|k| (0..s.counts[k]).map(|_| set_from(&c, level.locals[k].global, seeds.next().unwrap(), 3)).collect())
            .collect();
        prop_assert!(restriction_naturality(&all, &s, &inputs).unwrap());
    }

    #[test]
    fn transfer_of_points_is_the_index((g, l, raw) in raw_set()) {
        let c = ctx(g);
        let all = WeakIndexingSystem::complete(&c, 8);
        let s = set_from(&c, l % c.num_classes(), &raw, 8);
        let level = c.level(s.level);
        let inputs: Vec<Vec<BurnsideElement>> = (0..level.len())
            .map(|k| vec![BurnsideElement::set(OrbitMultiset::point(&c, level.locals[k].global)); s.counts[k] as usize])
            .collect();
        prop_assert_eq!(tr(&all, &s, &inputs).unwrap().value.unwrap(), s);
    }
}

fn space(c: &Arc<GroupContext>, a: &OrbitMultiset, b: &OrbitMultiset) -> Arc<SpanSpace> {
    SpanSpace::of_multisets(c, a, b).unwrap()
}

fn hom(c: &Arc<GroupContext>, a: &OrbitMultiset, b: &OrbitMultiset, picks: &[u64]) -> SpanHom {
    let sp = space(c, a, b);
    let keys = basic_spans(&sp, None).unwrap();
    let mut h = SpanHom::zero(&sp);
    for (k, n) in keys.iter().zip(picks) {
        if *n > 0 {
            h.basis.insert(*k, *n);
        }
    }
    h
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn spans_form_a_category(
        (g, l) in (0..GROUPS.len(), any::<usize>()),
        raws in prop::collection::vec(prop::collection::vec(0..2u64, 8), 4),
        picks in prop::collection::vec(prop::collection::vec(0..2u64, 12), 3),
    ) {
        let c = ctx(g);
        let level = l % c.num_classes();
        let objs: Vec<OrbitMultiset> = raws.iter().map(|r| set_from(&c, level, r, 4)).collect();
        let f = hom(&c, &objs[0], &objs[1], &picks[0]);
        let gg = hom(&c, &objs[1], &objs[2], &picks[1]);
        let h = hom(&c, &objs[2], &objs[3], &picks[2]);
        let id0 = SpanHom::identity(&ConcreteGSet::realize(&c, &objs[0]).unwrap()).unwrap();
        let id1 = SpanHom::identity(&ConcreteGSet::realize(&c, &objs[1]).unwrap()).unwrap();
        prop_assert_eq!(&id0.compose(&f).unwrap(), &f);
        prop_assert_eq!(&f.compose(&id1).unwrap(), &f);
        let left = f.compose(&gg).unwrap().compose(&h).unwrap();
        let right = f.compose(&gg.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        // composition distributes over sums
        let f2 = f.add(&f).unwrap();
        prop_assert_eq!(f2.compose(&gg).unwrap(), f.compose(&gg).unwrap().add(&f.compose(&gg).unwrap()).unwrap());
    }
}
