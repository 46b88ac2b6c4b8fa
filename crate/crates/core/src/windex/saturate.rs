use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use crate::group::GroupContext;
use crate::gset::{OrbitMultiset, Window};

/// Worklist closure of per-level admissible sets under IS-a, restriction
/// (including Weyl conjugation) and single-orbit substitution
/// `S ↦ S − [H/K] + Ind_K X`, all within the window.
pub(crate) struct Saturator<'a> {
    ctx: &'a GroupContext,
    window: &'a Window,
    pub(crate) adm: Vec<FixedBitSet>,
    queue: VecDeque<(usize, usize)>,
    /// `users[e]`: `(level, local class)` pairs whose orbit type has class `e`
    users: Vec<Vec<(usize, usize)>>,
}

impl<'a> Saturator<'a> {
    pub(crate) fn new(ctx: &'a GroupContext, window: &'a Window) -> Self {
        let adm = window.levels.iter().map(|lw| FixedBitSet::with_capacity(lw.len())).collect();
        let mut users = vec![Vec::new(); ctx.num_classes()];
        for (c, level) in ctx.levels.iter().enumerate() {
            for (k, l) in level.locals.iter().enumerate() {
                users[l.global].push((c, k));
            }
        }
        Saturator { ctx, window, adm, queue: VecDeque::new(), users }
    }

    /// Adds a set if it lies in the window; returns whether it fits.
    pub(crate) fn add(&mut self, level: usize, counts: &[u64]) -> bool {
        match self.window.levels[level].id(counts) {
            Some(id) => {
                self.add_id(level, id);
                true
            }
            None => false,
        }
    }

    pub(crate) fn add_id(&mut self, level: usize, id: usize) {
        if !self.adm[level].put(id) {
            self.queue.push_back((level, id));
        }
    }

    pub(crate) fn run(mut self) -> Vec<FixedBitSet> {
        let bound = self.window.bound as u64;
        while let Some((c, id)) = self.queue.pop_front() {
            let level = self.ctx.level(c);
            let s = self.window.levels[c].sets[id].clone();
            let s_carrier = self.window.levels[c].carriers[id];
            // IS-a
            let mut star = vec![0u64; level.len()];
            star[level.top()] = 1;
            self.add(c, &star);
            // restriction and conjugation
            for m in 0..level.len() {
                let r = crate::gset::restrict_local(self.ctx, &s, m);
                self.add(r.level, &r.counts);
            }
            for perm in &level.weyl_perms {
                let p = s.permute(perm);
                self.add(c, &p.counts);
            }
            // s as the index set
            for (k, _) in s.orbits() {
                let e = level.locals[k].global;
                let idx = level.locals[k].index;
                let summands: Vec<usize> = self.adm[e].ones().collect();
                for x in summands {
                    let x_carrier = self.window.levels[e].carriers[x];
                    if s_carrier + idx * x_carrier > bound + idx {
                        continue;
                    }
                    let counts = substitute(self.ctx, &s, c, k, &self.window.levels[e].sets[x]);
                    self.add(c, &counts);
                }
            }
            // s as a summand
            let users = self.users[c].clone();
            for (c2, k) in users {
                let idx = self.ctx.level(c2).locals[k].index;
                if idx * s_carrier > bound + idx {
                    continue;
                }
                let indices: Vec<usize> = self.adm[c2].ones().collect();
                for t in indices {
                    let t_set = &self.window.levels[c2].sets[t];
                    if t_set.counts[k] == 0 {
                        continue;
                    }
                    let t_carrier = self.window.levels[c2].carriers[t];
                    if t_carrier + idx * s_carrier > bound + idx {
                        continue;
                    }
                    let counts = substitute(self.ctx, t_set, c2, k, &s);
                    self.add(c2, &counts);
                }
            }
        }
        self.adm
    }
}

/// `S − [H/K_k] + Ind_{K_k} X`.
pub(crate) fn substitute(ctx: &GroupContext, s: &OrbitMultiset, c: usize, k: usize, x: &OrbitMultiset) -> Vec<u64> {
    let level = ctx.level(c);
    let mut counts = s.counts.clone();
    counts[k] -= 1;
    let map = &level.induce_maps[k];
    for (j, n) in x.orbits() {
        counts[map[j]] += n;
    }
    counts
}
