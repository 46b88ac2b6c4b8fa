//! Finite groups as multiplication tables, their subgroups, conjugacy
//! classes of subgroups and double cosets.
//!
//! A [`FiniteGroup`] numbers its elements `0..order` with `0` the identity.
//! Groups built from permutations are numbered by breadth-first search from
//! the generators in input order, so every downstream object is
//! deterministic.

mod builtin;
mod context;
mod lattice;
mod perm;
mod subgroup;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

pub use builtin::builtin;
pub use context::{GroupContext, Level, LocalClass};
pub use lattice::{double_cosets, subconjugacy_poset, DoubleCoset, SubconjugacyPoset, SubgroupClass};
pub(crate) use lattice::double_cosets_in as double_cosets_in_sub;
pub use perm::{format_cycles, parse_cycles, Permutation};
pub use subgroup::{enumerate_subgroups, enumerate_subgroups_capped, Subgroup, DEFAULT_SUBGROUP_CAP};

use crate::error::{Error, Result};

/// Largest group order a [`Subgroup`] bitset can hold.
pub const MAX_ORDER: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: Option<String>,
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    generators: Vec<usize>,
}

/// How a group is described on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupSpec {
    Builtin(String),
    Permutations { points: usize, generators: Vec<Permutation> },
    Table { table: Vec<Vec<usize>>, generators: Option<Vec<usize>> },
}

/// The JSON group input format.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupInput {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
}

impl GroupInput {
    /// Interprets the input: a table wins, then permutation generators, then
    /// a builtin name.
    pub fn to_spec(&self) -> Result<GroupSpec> {
        if let Some(table) = &self.table {
            let generators = match &self.generators {
                None => None,
                Some(gens) => Some(
                    gens.iter()
                        .map(|g| g.trim().parse::<usize>().map_err(|e| Error::Parse(format!("table generator {g:?}: {e}"))))
                        .collect::<Result<Vec<_>>>()?,
                ),
            };
            return Ok(GroupSpec::Table { table: table.clone(), generators });
        }
        if let Some(gens) = &self.generators {
            let parsed = gens.iter().map(|g| parse_cycles(g)).collect::<Result<Vec<_>>>()?;
            let needed = parsed.iter().flat_map(|c| c.iter().flatten().copied()).max().map_or(1, |m| m + 1);
            let points = self.points.unwrap_or(needed);
            if points < needed {
                return Err(Error::Parse(format!("cycle mentions point {} but only {points} points declared", needed - 1)));
            }
            let generators = parsed.iter().map(|c| Permutation::from_cycles(points, c)).collect::<Result<Vec<_>>>()?;
            return Ok(GroupSpec::Permutations { points, generators });
        }
        match &self.name {
            Some(name) => Ok(GroupSpec::Builtin(name.clone())),
            None => Err(Error::Parse("group input needs a name, generators or a table".into())),
        }
    }
}

/// Builds and validates a group from any supported description.
pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Builtin(name) => builtin(name),
        GroupSpec::Permutations { points, generators } => FiniteGroup::from_permutations(None, *points, generators),
        GroupSpec::Table { table, generators } => FiniteGroup::from_table(None, table, generators.as_deref()),
    }
}

impl FiniteGroup {
    /// Closes the generators under composition. Elements are numbered in BFS
    /// order starting from the identity, right-multiplying by each generator
    /// in input order.
    pub fn from_permutations(name: Option<String>, points: usize, generators: &[Permutation]) -> Result<Self> {
        for g in generators {
            if g.degree() != points {
                return Err(Error::Parse(format!("permutation of degree {} in a group on {points} points", g.degree())));
            }
        }
        let identity = Permutation::identity(points);
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Permutation, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p = elements[i].compose(g);
                if !index.contains_key(&p) {
                    if elements.len() >= MAX_ORDER {
                        return Err(Error::GroupTooLarge { order: elements.len() + 1, cap: MAX_ORDER });
                    }
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let n = elements.len();
        let mut table = vec![vec![0usize; n]; n];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                table[a][b] = index[&pa.compose(pb)];
            }
        }
        let gens: Vec<usize> = generators.iter().map(|g| index[g]).collect();
        let mut group = Self::from_table(name, &table, Some(&gens))?;
        group.generators = dedup_generators(&gens);
        Ok(group)
    }

    /// Validates an explicit Cayley table. When no generators are supplied a
    /// greedy generating set is chosen.
    pub fn from_table(name: Option<String>, table: &[Vec<usize>], generators: Option<&[usize]>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Parse("empty multiplication table".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::GroupTooLarge { order: n, cap: MAX_ORDER });
        }
        for row in table {
            if row.len() != n {
                return Err(Error::Parse("multiplication table is not square".into()));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::Parse(format!("table entry {bad} out of range")));
            }
        }
        for e in 0..n {
            if table[0][e] != e || table[e][0] != e {
                return Err(Error::NoIdentity { element: e });
            }
        }
        let mut inv = vec![0u16; n];
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == 0 && table[b][a] == 0) {
                Some(b) => inv[a] = b as u16,
                None => return Err(Error::NoInverse { element: a }),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::NonAssociative { a, b, c });
                    }
                }
            }
        }
        let mul: Vec<u16> = table.iter().flatten().map(|&x| x as u16).collect();
        let mut group = FiniteGroup { name, order: n, mul, inv, generators: Vec::new() };
        group.generators = match generators {
            Some(gens) => {
                if let Some(&bad) = gens.iter().find(|&&g| g >= n) {
                    return Err(Error::Parse(format!("generator {bad} out of range")));
                }
                let closure = group.closure(gens);
                if closure.len() != n {
                    return Err(Error::GeneratorsDoNotGenerate { closure: closure.len(), order: n });
                }
                dedup_generators(gens)
            }
            None => group.greedy_generators(),
        };
        Ok(group)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    /// Subgroup generated by `gens`.
    pub fn closure(&self, gens: &[usize]) -> Subgroup {
        let mut sub = Subgroup::trivial();
        let mut queue = vec![0usize];
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !sub.contains(y) {
                    sub.insert(y);
                    queue.push(y);
                }
            }
        }
        sub
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_elements(0..self.order)
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = Subgroup::trivial();
        for g in 1..self.order {
            if !span.contains(g) {
                gens.push(g);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// Checks that `set` is closed under products and inverses and contains
    /// the identity.
    pub fn is_subgroup(&self, set: &Subgroup) -> bool {
        if !set.contains(0) {
            return false;
        }
        let elems: Vec<usize> = set.iter().collect();
        elems.iter().all(|&a| set.contains(self.inv(a)) && elems.iter().all(|&b| set.contains(self.mul(a, b))))
    }

    pub fn conjugate_subgroup(&self, g: usize, h: &Subgroup) -> Subgroup {
        Subgroup::from_elements(h.iter().map(|x| self.conj(g, x)))
    }

    /// Builds the group of a subgroup `h`, numbering its elements in
    /// increasing order of their ids in `self`. Returns the group and the
    /// embedding (new id → old id).
    pub fn subgroup_as_group(&self, h: &Subgroup) -> Result<(FiniteGroup, Vec<usize>)> {
        if !self.is_subgroup(h) {
            return Err(Error::NotSubgroup(format!("{h:?}")));
        }
        let elems: Vec<usize> = h.iter().collect();
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let table: Vec<Vec<usize>> =
            elems.iter().map(|&a| elems.iter().map(|&b| pos[&self.mul(a, b)]).collect()).collect();
        let name = self.name.as_ref().map(|n| format!("{n}|{}", elems.len()));
        let group = FiniteGroup::from_table(name, &table, None)?;
        Ok((group, elems))
    }
}

fn dedup_generators(gens: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    for &g in gens {
        if g != 0 && !out.contains(&g) {
            out.push(g);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_c2_has_order_two() {
        let g = builtin("C2").unwrap();
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn transposition_and_three_cycle_give_s3() {
        let input = GroupInput { generators: Some(vec!["(0 1)".into(), "(0 1 2)".into()]), ..Default::default() };
        let g = build_group(&input.to_spec().unwrap()).unwrap();
        assert_eq!(g.order(), 6);
        // nonabelian
        let ab = (0..6).any(|a| (0..6).any(|b| g.mul(a, b) != g.mul(b, a)));
        assert!(ab);
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // identity 0, and 1*1 = 2, 2*2 = 1, 1*2 = 1, 2*1 = 2: a loop, not a group
        let table = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 0]];
        let err = FiniteGroup::from_table(None, &table, None).unwrap_err();
        assert!(matches!(err, Error::NonAssociative { .. } | Error::NoInverse { .. }), "{err:?}");
        let table = vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 2, 0]];
        assert!(matches!(FiniteGroup::from_table(None, &table, None).unwrap_err(), Error::NonAssociative { .. }));
    }

    #[test]
    fn missing_identity_and_inverse() {
        let table = vec![vec![1, 0], vec![0, 1]];
        assert!(matches!(FiniteGroup::from_table(None, &table, None).unwrap_err(), Error::NoIdentity { .. }));
        let table = vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 1, 2]];
        assert!(matches!(FiniteGroup::from_table(None, &table, None).unwrap_err(), Error::NoInverse { element: 1 }));
    }

    #[test]
    fn generators_must_generate() {
        let g = builtin("C4").unwrap();
        let sq = g.mul(g.generators()[0], g.generators()[0]);
        let err = FiniteGroup::from_table(None, &g.table(), Some(&[sq])).unwrap_err();
        assert_eq!(err, Error::GeneratorsDoNotGenerate { closure: 2, order: 4 });
    }

    #[test]
    fn bfs_numbering_is_deterministic() {
        let a = builtin("S3").unwrap();
        let b = builtin("S3").unwrap();
        assert_eq!(a, b);
        // first generator is element 1
        assert_eq!(a.generators()[0], 1);
    }
}
