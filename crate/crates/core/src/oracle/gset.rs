//! Marks by counting fixed points of explicit models, and coinduction as the
//! set of `K`-equivariant functions `H → X`.

use std::sync::Arc;

use crate::group::{GroupContext, Subgroup};
use crate::gset::{ConcreteGSet, OrbitMultiset};

/// `|X^L|` for every local class `L` of the level of `x`, by inspecting each
/// point of a concrete model.
pub fn marks_by_counting(ctx: &Arc<GroupContext>, x: &OrbitMultiset) -> Vec<u64> {
    let real = ConcreteGSet::realize(ctx, x).expect("multiset matches its level");
    ctx.level(x.level)
        .locals
        .iter()
        .map(|l| (0..real.size()).filter(|&p| l.rep.iter().all(|g| real.apply(g, p) == p)).count() as u64)
        .collect()
}

/// Marks at the level of `h` of `Map_K(H, X)`, the functions with
/// `f(ak) = k⁻¹ f(a)`, under `(b·f)(a) = f(b⁻¹a)`. Enumerates every
/// function, so only tiny inputs are feasible.
pub fn coinduce_marks(ctx: &Arc<GroupContext>, x: &OrbitMultiset, k: &Subgroup, h: &Subgroup) -> Option<Vec<u64>> {
    let g = &ctx.group;
    let real = ConcreteGSet::realize_on(ctx, k, x).ok()?;
    let hs: Vec<usize> = h.iter().collect();
    let mut reps = Vec::new();
    let mut coset_of = vec![usize::MAX; ctx.order()];
    for &a in &hs {
        if coset_of[a] != usize::MAX {
            continue;
        }
        for kk in k.iter() {
            coset_of[g.mul(a, kk)] = reps.len();
        }
        reps.push(a);
    }
    let n = real.size();
    let total = (n as f64).powi(reps.len() as i32);
    if total > 2e5 {
        return None;
    }
    // value of f at a, from its values on coset representatives
    let value = |f: &[usize], a: usize| {
        let r = reps[coset_of[a]];
        let kk = g.mul(g.inv(r), a);
        real.apply(g.inv(kk), f[coset_of[a]])
    };
    let (c, _) = ctx.classify(h).ok()?;
    let level = ctx.level(c);
    let ls: Vec<Subgroup> = (0..level.len()).map(|m| ctx.untransport(h, m).expect("local class")).collect();
    let mut counts = vec![0u64; ls.len()];
    if n == 0 {
        return Some(counts);
    }
    let mut f = vec![0usize; reps.len()];
    loop {
        for (m, l) in ls.iter().enumerate() {
            let fixed = l.iter().all(|b| {
                let bi = g.inv(b);
                reps.iter().enumerate().all(|(i, &r)| value(&f, g.mul(bi, r)) == f[i])
            });
            if fixed {
                counts[m] += 1;
            }
        }
        let mut i = 0;
        loop {
            if i == f.len() {
                return Some(counts);
            }
            f[i] += 1;
            if f[i] < n {
                break;
            }
            f[i] = 0;
            i += 1;
        }
    }
}
