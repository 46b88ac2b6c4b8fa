use std::collections::HashMap;

use super::OrbitMultiset;
use crate::group::GroupContext;

/// All orbit multisets of carrier at most `bound`, per level, sorted by
/// `(carrier, counts)`. The window for a smaller bound is a prefix of this
/// one, which makes truncation and cross-bound comparison cheap.
#[derive(Clone, Debug)]
pub struct Window {
    pub bound: usize,
    pub levels: Vec<LevelWindow>,
}

#[derive(Clone, Debug)]
pub struct LevelWindow {
    pub sets: Vec<OrbitMultiset>,
    pub carriers: Vec<u64>,
    index: HashMap<Vec<u64>, u32>,
}

impl LevelWindow {
    fn from_sorted(sets: Vec<OrbitMultiset>, carriers: Vec<u64>) -> Self {
        let index = sets.iter().enumerate().map(|(i, s)| (s.counts.clone(), i as u32)).collect();
        LevelWindow { sets, carriers, index }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn id(&self, counts: &[u64]) -> Option<usize> {
        self.index.get(counts).map(|&i| i as usize)
    }

    /// Number of sets of carrier at most `bound`.
    pub fn prefix_len(&self, bound: u64) -> usize {
        self.carriers.partition_point(|&c| c <= bound)
    }
}

impl Window {
    pub fn build(ctx: &GroupContext, bound: usize) -> Window {
        let levels = ctx
            .levels
            .iter()
            .map(|level| {
                let sizes: Vec<u64> = level.locals.iter().map(|l| l.index).collect();
                let mut sets = Vec::new();
                let mut counts = vec![0u64; sizes.len()];
                fill(&sizes, 0, bound as u64, &mut counts, &mut |c| sets.push(c.to_vec()));
                let mut keyed: Vec<(u64, Vec<u64>)> =
                    sets.into_iter().map(|c| (c.iter().zip(&sizes).map(|(n, s)| n * s).sum(), c)).collect();
                keyed.sort();
                let carriers = keyed.iter().map(|(c, _)| *c).collect();
                let sets = keyed.into_iter().map(|(_, counts)| OrbitMultiset { level: level.class, counts }).collect();
                LevelWindow::from_sorted(sets, carriers)
            })
            .collect();
        Window { bound, levels }
    }

    pub fn truncate(&self, bound: usize) -> Window {
        let levels = self
            .levels
            .iter()
            .map(|lw| {
                let n = lw.prefix_len(bound as u64);
                LevelWindow::from_sorted(lw.sets[..n].to_vec(), lw.carriers[..n].to_vec())
            })
            .collect();
        Window { bound, levels }
    }

    pub fn total(&self) -> usize {
        self.levels.iter().map(|l| l.len()).sum()
    }
}

fn fill(sizes: &[u64], k: usize, budget: u64, counts: &mut Vec<u64>, out: &mut impl FnMut(&[u64])) {
    if k == sizes.len() {
        out(counts);
        return;
    }
    let mut n = 0;
    while n * sizes[k] <= budget {
        counts[k] = n;
        fill(sizes, k + 1, budget - n * sizes[k], counts, out);
        n += 1;
    }
    counts[k] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupContext;

    #[test]
    fn trivial_group_window_is_all_multiples() {
        let ctx = GroupContext::from_builtin("1").unwrap();
        let w = ctx.window(8);
        assert_eq!(w.levels[0].len(), 9);
        assert_eq!(w.levels[0].sets[3].counts, vec![3]);
    }

    #[test]
    fn truncation_is_a_prefix() {
        let ctx = GroupContext::from_builtin("D8").unwrap();
        let big = Window::build(&ctx, 10);
        let small = Window::build(&ctx, 6);
        let cut = big.truncate(6);
        for (a, b) in small.levels.iter().zip(&cut.levels) {
            assert_eq!(a.sets, b.sets);
        }
        assert_eq!(ctx.window(6).total(), small.total());
    }

    #[test]
    fn c2_window_counts() {
        let ctx = GroupContext::from_builtin("C2").unwrap();
        let w = ctx.window(4);
        // a + 2b ≤ 4
        assert_eq!(w.levels[1].len(), 9);
        assert_eq!(w.levels[0].len(), 5);
    }
}
