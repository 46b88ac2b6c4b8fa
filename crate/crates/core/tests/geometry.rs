//! Arity supports of small representations against a direct search for
//! equivariant embeddings among lattice points.

use std::sync::Arc;

use normcalc::group::GroupContext;
use normcalc::gset::OrbitMultiset;
use normcalc::oracle::geometry::RealRep;
use normcalc::repsupport::{Dim, DimensionFunction};

const RADIUS: i64 = 2;

/// Permutation representations on `G/K` and the sign characters, in both
/// descriptions.
fn basic_reps(ctx: &Arc<GroupContext>) -> Vec<(String, RealRep, DimensionFunction)> {
    let top = ctx.top();
    let mut out = Vec::new();
    for (k, local) in ctx.level(top).locals.iter().enumerate() {
        let x = OrbitMultiset::orbit(ctx, top, k);
        let df = DimensionFunction::from_permutation_rep(ctx, &x, Dim::Fin(1)).unwrap();
        out.push((format!("R[G/{}]", local.label), RealRep::cosets(ctx, local.global), df));
    }
    for (c, class) in ctx.poset.classes.iter().enumerate() {
        if class.members.len() == 1 && 2 * class.order == ctx.order() {
            let df = DimensionFunction::sign(ctx, c, Dim::Fin(1)).unwrap();
            out.push((format!("sign[{}]", class.label), RealRep::sign(ctx, c), df));
        }
    }
    out
}

/// Every set whose orbit multiplicities are at most 2 must be in `F^V`
/// exactly when lattice points realize it.
fn compare(name: &str, rep: &RealRep, df: &DimensionFunction) {
    let ctx = df.context();
    let support = df.arity_support(8).unwrap();
    assert_eq!(rep.fixed_dims(ctx), df.dims().iter().map(|d| if let Dim::Fin(n) = d { *n } else { 0 }).collect::<Vec<_>>());
    for c in 0..ctx.num_classes() {
        let n = ctx.level(c).len();
        let mut counts = vec![0u64; n];
        loop {
            let s = OrbitMultiset::from_counts(ctx, c, counts.clone()).unwrap();
            if s.carrier(ctx) <= 8 {
                assert_eq!(
                    support.contains(&s),
                    rep.embeds(ctx, &s, RADIUS),
                    "{}: {name}, {} at level {}",
                    ctx.name(),
                    s.display(ctx),
                    ctx.class_label(c)
                );
            }
            let mut i = 0;
            while i < n && counts[i] == 2 {
                counts[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            counts[i] += 1;
        }
    }
}

#[test]
fn arity_support_matches_embeddings() {
    for g in ["C2", "C3", "C4", "C2xC2", "S3"] {
        let ctx = GroupContext::from_builtin(g).unwrap();
        let reps = basic_reps(&ctx);
        for (name, rep, df) in &reps {
            compare(name, rep, df);
        }
        // a few sums, where supports can grow beyond either summand
        for (i, (n1, r1, d1)) in reps.iter().enumerate() {
            for (n2, r2, d2) in reps.iter().skip(i) {
                if r1.dim + r2.dim <= 5 {
                    compare(&format!("{n1}+{n2}"), &r1.sum(r2), &d1.direct_sum(d2).unwrap());
                }
            }
        }
    }
}
