//! Explicit integer representations and a lattice-point search for
//! equivariant embeddings of finite sets.

use std::collections::{BTreeSet, HashMap};

use crate::group::{GroupContext, Subgroup};
use crate::gset::OrbitMultiset;

/// Integer matrices `ρ(g)` for every element of `G`.
#[derive(Clone, Debug)]
pub struct RealRep {
    pub dim: usize,
    pub mats: Vec<Vec<Vec<i64>>>,
}

impl RealRep {
    pub fn zero(ctx: &GroupContext) -> Self {
        RealRep { dim: 0, mats: vec![Vec::new(); ctx.order()] }
    }

    /// Permutation representation on the cosets `G/K` of the class
    /// representative of `k`.
    pub fn cosets(ctx: &GroupContext, k: usize) -> Self {
        let g = &ctx.group;
        let sub: Subgroup = ctx.poset.classes[k].representative;
        let mut cosets: Vec<BTreeSet<usize>> = Vec::new();
        let mut coset_of = vec![usize::MAX; g.order()];
        for x in 0..g.order() {
            if coset_of[x] == usize::MAX {
                let c: BTreeSet<usize> = sub.iter().map(|s| g.mul(x, s)).collect();
                for &y in &c {
                    coset_of[y] = cosets.len();
                }
                cosets.push(c);
            }
        }
        let n = cosets.len();
        let mats = (0..g.order())
            .map(|a| {
                let mut m = vec![vec![0i64; n]; n];
                for (i, c) in cosets.iter().enumerate() {
                    let j = coset_of[g.mul(a, *c.iter().next().unwrap())];
                    m[j][i] = 1;
                }
                m
            })
            .collect();
        RealRep { dim: n, mats }
    }

    /// The character `G → {±1}` with the given normal kernel.
    pub fn sign(ctx: &GroupContext, kernel: usize) -> Self {
        let sub = ctx.poset.classes[kernel].representative;
        let mats = (0..ctx.order()).map(|a| vec![vec![if sub.contains(a) { 1 } else { -1 }]]).collect();
        RealRep { dim: 1, mats }
    }

    pub fn sum(&self, other: &RealRep) -> RealRep {
        let d = self.dim + other.dim;
        let mats = self
            .mats
            .iter()
            .zip(&other.mats)
            .map(|(a, b)| {
                let mut m = vec![vec![0i64; d]; d];
                for i in 0..self.dim {
                    m[i][..self.dim].copy_from_slice(&a[i]);
                }
                for i in 0..other.dim {
                    m[self.dim + i][self.dim..].copy_from_slice(&b[i]);
                }
                m
            })
            .collect();
        RealRep { dim: d, mats }
    }

    fn act(&self, g: usize, v: &[i64]) -> Vec<i64> {
        self.mats[g].iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// `dim V^K` for the representative of each class, as the rank of
    /// `Σ_{k∈K} ρ(k)`.
    pub fn fixed_dims(&self, ctx: &GroupContext) -> Vec<u64> {
        (0..ctx.num_classes())
            .map(|c| {
                let sub = ctx.poset.classes[c].representative;
                let mut m = vec![vec![0f64; self.dim]; self.dim];
                for x in sub.iter() {
                    for i in 0..self.dim {
                        for j in 0..self.dim {
                            m[i][j] += self.mats[x][i][j] as f64;
                        }
                    }
                }
                rank(m) as u64
            })
            .collect()
    }

    /// Equivariant embedding test for a set at level `c` by counting
    /// orbits of lattice points in `[-r, r]^dim`, sorted by stabilizer.
    pub fn embeds(&self, ctx: &GroupContext, s: &OrbitMultiset, r: i64) -> bool {
        let available = self.orbit_counts(ctx, s.level, r);
        s.orbits().all(|(k, n)| available.get(&k).copied().unwrap_or(0) >= n)
    }

    fn orbit_counts(&self, ctx: &GroupContext, c: usize, r: i64) -> HashMap<usize, u64> {
        let level = ctx.level(c);
        let h: Vec<usize> = level.sub.iter().collect();
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut counts: HashMap<usize, u64> = HashMap::new();
        let mut v = vec![-r; self.dim];
        loop {
            let orbit: BTreeSet<Vec<i64>> = h.iter().map(|&g| self.act(g, &v)).collect();
            if seen.insert(orbit.iter().next().unwrap().clone()) {
                let stab = Subgroup::from_elements(h.iter().copied().filter(|&g| self.act(g, &v) == v));
                let (k, _) = level.local_of(&stab).expect("stabilizer is a subgroup of the level");
                *counts.entry(k).or_default() += 1;
            }
            // next lattice point
            let mut i = 0;
            while i < self.dim && v[i] == r {
                v[i] = -r;
                i += 1;
            }
            if i == self.dim {
                break;
            }
            v[i] += 1;
        }
        counts
    }
}

fn rank(mut m: Vec<Vec<f64>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs())) else { break };
        if m[p][col].abs() < 1e-9 {
            continue;
        }
        m.swap(rank, p);
        for r in 0..rows {
            if r != rank {
                let f = m[r][col] / m[rank][col];
                for j in col..cols {
                    m[r][j] -= f * m[rank][j];
                }
            }
        }
        rank += 1;
    }
    rank
}
