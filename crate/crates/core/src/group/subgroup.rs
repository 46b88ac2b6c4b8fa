use std::collections::HashSet;
use std::fmt;

use super::FiniteGroup;
use crate::error::{Error, Result};

pub const DEFAULT_SUBGROUP_CAP: usize = 200;

/// A subset of group elements stored as a 256-bit set. Used both for
/// subgroups and for arbitrary element sets during closure.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subgroup {
    bits: [u64; 4],
}

impl Subgroup {
    pub fn empty() -> Self {
        Subgroup { bits: [0; 4] }
    }

    pub fn trivial() -> Self {
        let mut s = Self::empty();
        s.insert(0);
        s
    }

    pub fn from_elements(elems: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty();
        for e in elems {
            s.insert(e);
        }
        s
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.bits[x >> 6] >> (x & 63) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, x: usize) {
        self.bits[x >> 6] |= 1 << (x & 63);
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &Subgroup) -> bool {
        self.bits.iter().zip(other.bits.iter()).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let mut bits = [0; 4];
        for (i, b) in bits.iter_mut().enumerate() {
            *b = self.bits[i] & other.bits[i];
        }
        Subgroup { bits }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..4).flat_map(move |w| {
            let mut word = self.bits[w];
            std::iter::from_fn(move || {
                if word == 0 {
                    None
                } else {
                    let t = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some(w * 64 + t)
                }
            })
        })
    }

    pub fn elements(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Sort key of the canonical subgroup order: by order, then bitset.
pub(crate) fn canonical_key(s: &Subgroup) -> (usize, [u64; 4]) {
    (s.len(), s.bits)
}

/// All subgroups of `group`, sorted by (order, bitset).
pub fn enumerate_subgroups(group: &FiniteGroup) -> Result<Vec<Subgroup>> {
    enumerate_subgroups_capped(group, DEFAULT_SUBGROUP_CAP)
}

/// Incremental closure: every subgroup is reached by adjoining one element at
/// a time to a smaller subgroup, starting from the trivial one.
pub fn enumerate_subgroups_capped(group: &FiniteGroup, cap: usize) -> Result<Vec<Subgroup>> {
    if group.order() > cap {
        return Err(Error::GroupTooLarge { order: group.order(), cap });
    }
    let n = group.order();
    let trivial = Subgroup::trivial();
    let mut seen: HashSet<Subgroup> = HashSet::from([trivial]);
    let mut work: Vec<(Subgroup, Vec<usize>)> = vec![(trivial, Vec::new())];
    let mut out = vec![trivial];
    while let Some((sub, gens)) = work.pop() {
        let mut tried = sub;
        let sub_elems = sub.elements();
        for g in 0..n {
            if tried.contains(g) {
                continue;
            }
            let mut next_gens = gens.clone();
            next_gens.push(g);
            let next = group.closure(&next_gens);
            if seen.insert(next) {
                out.push(next);
                work.push((next, next_gens));
            }
            // <sub, g> = <sub, g^k s> for s in sub and k coprime to |g|
            let ord = group.element_order(g);
            let mut power = g;
            for k in 1..=ord {
                if gcd(k, ord) == 1 {
                    for &s in &sub_elems {
                        tried.insert(group.mul(power, s));
                    }
                }
                power = group.mul(power, g);
            }
        }
    }
    out.sort_by_key(canonical_key);
    Ok(out)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin;

    #[test]
    fn counts_of_small_groups() {
        for (name, count) in [("1", 1), ("C2", 2), ("C4", 3), ("S3", 6), ("C2xC2", 5), ("D8", 10), ("Q8", 6), ("A4", 10), ("S4", 30)] {
            let g = builtin(name).unwrap();
            assert_eq!(enumerate_subgroups(&g).unwrap().len(), count, "{name}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = builtin("S5").unwrap();
        assert!(matches!(enumerate_subgroups_capped(&g, 100), Err(Error::GroupTooLarge { order: 120, cap: 100 })));
        assert_eq!(enumerate_subgroups(&g).unwrap().len(), 156);
    }

    #[test]
    fn bitset_iter() {
        let s = Subgroup::from_elements([0, 5, 64, 130, 255]);
        assert_eq!(s.elements(), vec![0, 5, 64, 130, 255]);
        assert_eq!(s.len(), 5);
        assert!(Subgroup::trivial().is_subset(&s));
    }
}
