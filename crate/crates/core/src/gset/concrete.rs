use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use super::OrbitMultiset;
use crate::error::{Error, Result};
use crate::group::{GroupContext, Subgroup};

/// Default carrier cap for enumerating equivariant maps.
pub const DEFAULT_MAP_CAP: usize = 24;

/// A finite `H`-set with an explicit carrier `0..size`, for a subgroup `H`
/// of the context group. The action of every element of `H` is stored.
#[derive(Clone)]
pub struct ConcreteGSet {
    ctx: Arc<GroupContext>,
    acting: Subgroup,
    gens: Vec<usize>,
    size: usize,
    act: Vec<Vec<u32>>,
}

impl PartialEq for ConcreteGSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.acting == other.acting && self.size == other.size && self.act == other.act
    }
}

impl Eq for ConcreteGSet {}

impl fmt::Debug for ConcreteGSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<(usize, &[u32])> = self.gens.iter().map(|&g| (g, self.act[g].as_slice())).collect();
        f.debug_struct("ConcreteGSet").field("acting", &self.acting).field("size", &self.size).field("gens", &gens).finish()
    }
}

/// An equivariant map given by its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EquivariantMap {
    pub images: Vec<usize>,
}

impl EquivariantMap {
    pub fn identity(n: usize) -> Self {
        EquivariantMap { images: (0..n).collect() }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn compose(&self, first: &EquivariantMap) -> EquivariantMap {
        EquivariantMap { images: first.images.iter().map(|&x| self.images[x]).collect() }
    }
}

/// The pullback `X ×_Z Y` with its two projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub set: ConcreteGSet,
    /// carrier point → `(x, y)`
    pub pairs: Vec<(usize, usize)>,
    pub to_left: EquivariantMap,
    pub to_right: EquivariantMap,
}

fn subgroup_generators(ctx: &GroupContext, h: &Subgroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span = Subgroup::trivial();
    for g in h.iter() {
        if !span.contains(g) {
            gens.push(g);
            span = ctx.group.closure(&gens);
        }
    }
    gens
}

impl ConcreteGSet {
    /// Builds an action from permutations of the carrier for a generating
    /// set of `acting`, extending along words and rejecting inconsistent
    /// relations.
    pub fn from_generators(ctx: &Arc<GroupContext>, acting: Subgroup, size: usize, gens: &[(usize, Vec<usize>)]) -> Result<Self> {
        if !ctx.group.is_subgroup(&acting) {
            return Err(Error::NotASubgroup(format!("{acting:?}")));
        }
        let n = ctx.order();
        for (g, p) in gens {
            if !acting.contains(*g) {
                return Err(Error::InvalidAction(format!("element {g} is not in the acting subgroup")));
            }
            let mut seen = vec![false; size];
            if p.len() != size || p.iter().any(|&x| x >= size || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::InvalidAction(format!("image list for element {g} is not a permutation of {size} points")));
            }
        }
        let gen_ids: Vec<usize> = gens.iter().map(|(g, _)| *g).collect();
        if ctx.group.closure(&gen_ids) != acting {
            return Err(Error::InvalidAction("the given elements do not generate the acting subgroup".into()));
        }
        let mut act: Vec<Vec<u32>> = vec![Vec::new(); n];
        act[0] = (0..size as u32).collect();
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (g, p) in gens {
                let xg = ctx.group.mul(x, *g);
                // (xg)·pt = x·(g·pt)
                let img: Vec<u32> = p.iter().map(|&q| act[x][q]).collect();
                if act[xg].is_empty() {
                    act[xg] = img;
                    queue.push_back(xg);
                } else if act[xg] != img {
                    return Err(Error::InvalidAction(format!("relation violated at element {xg}")));
                }
            }
        }
        Ok(ConcreteGSet { ctx: ctx.clone(), gens: subgroup_generators(ctx, &acting), acting, size, act })
    }

    fn from_table(ctx: &Arc<GroupContext>, acting: Subgroup, size: usize, act: Vec<Vec<u32>>) -> Self {
        ConcreteGSet { ctx: ctx.clone(), gens: subgroup_generators(ctx, &acting), acting, size, act }
    }

    pub fn empty(ctx: &Arc<GroupContext>, acting: Subgroup) -> Self {
        let act = (0..ctx.order()).map(|_| Vec::new()).collect();
        Self::from_table(ctx, acting, 0, act)
    }

    /// Left cosets `H/K`, numbered by their least element.
    pub fn coset_space(ctx: &Arc<GroupContext>, h: &Subgroup, k: &Subgroup) -> Result<Self> {
        if !k.is_subset(h) || !ctx.group.is_subgroup(k) {
            return Err(Error::NotSubconjugate(format!("{k:?} is not a subgroup of {h:?}")));
        }
        let g = &ctx.group;
        let mut coset_of = vec![u32::MAX; ctx.order()];
        let mut reps = Vec::new();
        for x in h.iter() {
            if coset_of[x] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            reps.push(x);
            for y in k.iter() {
                coset_of[g.mul(x, y)] = id;
            }
        }
        let mut act = vec![Vec::new(); ctx.order()];
        for a in h.iter() {
            act[a] = reps.iter().map(|&r| coset_of[g.mul(a, r)]).collect();
        }
        Ok(Self::from_table(ctx, *h, reps.len(), act))
    }

    /// A concrete model of an orbit multiset, as a set over the class
    /// representative of its level. Orbits appear in increasing local class
    /// order.
    pub fn realize(ctx: &Arc<GroupContext>, x: &OrbitMultiset) -> Result<Self> {
        let level = ctx.level(x.level);
        let mut out = Self::empty(ctx, level.sub);
        for (k, n) in x.orbits() {
            let orbit = Self::coset_space(ctx, &level.sub, &level.locals[k].rep)?;
            for _ in 0..n {
                out = out.union(&orbit)?;
            }
        }
        Ok(out)
    }

    /// A model of `x` acted on by the actual subgroup `h` of class `x.level`.
    pub fn realize_on(ctx: &Arc<GroupContext>, h: &Subgroup, x: &OrbitMultiset) -> Result<Self> {
        let (c, _) = ctx.classify(h)?;
        if c != x.level {
            return Err(Error::ShapeMismatch("realization subgroup has the wrong class".into()));
        }
        let mut out = Self::empty(ctx, *h);
        for (k, n) in x.orbits() {
            let orbit = Self::coset_space(ctx, h, &ctx.untransport(h, k)?)?;
            for _ in 0..n {
                out = out.union(&orbit)?;
            }
        }
        Ok(out)
    }

    pub fn context(&self) -> &Arc<GroupContext> {
        &self.ctx
    }

    pub fn acting(&self) -> &Subgroup {
        &self.acting
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.act[g][x] as usize
    }

    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        Subgroup::from_elements(self.acting.iter().filter(|&g| self.apply(g, x) == x))
    }

    /// Orbits as point lists, each starting with its least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for start in 0..self.size {
            if seen[start] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < orbit.len() {
                let x = orbit[i];
                for &g in &self.gens {
                    let y = self.apply(g, x);
                    if !seen[y] {
                        seen[y] = true;
                        orbit.push(y);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    pub fn orbit_of(&self) -> Vec<usize> {
        let mut id = vec![0; self.size];
        for (i, orbit) in self.orbits().iter().enumerate() {
            for &x in orbit {
                id[x] = i;
            }
        }
        id
    }

    /// Iso class, at the conjugacy class of the acting subgroup.
    pub fn decompose(&self) -> Result<OrbitMultiset> {
        let (c, _) = self.ctx.classify(&self.acting)?;
        let mut out = OrbitMultiset::empty(&self.ctx, c);
        for orbit in self.orbits() {
            out.counts[self.ctx.transport(&self.acting, &self.stabilizer(orbit[0]))?] += 1;
        }
        Ok(out)
    }

    pub fn fixed_points(&self, l: &Subgroup) -> usize {
        (0..self.size).filter(|&x| l.iter().all(|g| self.apply(g, x) == x)).count()
    }

    pub fn restrict(&self, k: &Subgroup) -> Result<Self> {
        if !k.is_subset(&self.acting) || !self.ctx.group.is_subgroup(k) {
            return Err(Error::NotSubconjugate(format!("{k:?} is not a subgroup of {:?}", self.acting)));
        }
        let act = (0..self.ctx.order()).map(|g| if k.contains(g) { self.act[g].clone() } else { Vec::new() }).collect();
        Ok(Self::from_table(&self.ctx, *k, self.size, act))
    }

    /// The same carrier acted on by `g H g⁻¹` through `g h g⁻¹ ↦ h`.
    pub fn conjugate(&self, g: usize) -> Self {
        let grp = &self.ctx.group;
        let mut act = vec![Vec::new(); self.ctx.order()];
        for h in self.acting.iter() {
            act[grp.conj(g, h)] = self.act[h].clone();
        }
        Self::from_table(&self.ctx, grp.conjugate_subgroup(g, &self.acting), self.size, act)
    }

    fn same_acting(&self, other: &Self) -> Result<()> {
        if !Arc::ptr_eq(&self.ctx, &other.ctx) {
            return Err(Error::GroupMismatch);
        }
        if self.acting != other.acting {
            return Err(Error::NotEquivariant("sets are acted on by different subgroups".into()));
        }
        Ok(())
    }

    /// Disjoint union; points of `other` follow those of `self`.
    pub fn union(&self, other: &Self) -> Result<Self> {
        self.same_acting(other)?;
        let off = self.size as u32;
        let act = (0..self.ctx.order())
            .map(|g| {
                if self.acting.contains(g) {
                    self.act[g].iter().copied().chain(other.act[g].iter().map(|&y| y + off)).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        Ok(Self::from_table(&self.ctx, self.acting, self.size + other.size, act))
    }

    /// Cartesian product with the diagonal action; `(x, y)` is point
    /// `x * |Y| + y`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.same_acting(other)?;
        let m = other.size;
        let act = (0..self.ctx.order())
            .map(|g| {
                if !self.acting.contains(g) {
                    return Vec::new();
                }
                let mut v = Vec::with_capacity(self.size * m);
                for x in 0..self.size {
                    for y in 0..m {
                        v.push(self.act[g][x] * m as u32 + other.act[g][y]);
                    }
                }
                v
            })
            .collect();
        Ok(Self::from_table(&self.ctx, self.acting, self.size * m, act))
    }

    /// `Ind_K^H X = H ×_K X` for `K` the acting subgroup.
    pub fn induce(&self, h: &Subgroup) -> Result<Self> {
        let k = self.acting;
        let cosets = Self::coset_space(&self.ctx, h, &k)?;
        let g = &self.ctx.group;
        // least element of each coset
        let mut reps = vec![usize::MAX; cosets.size];
        for x in h.iter() {
            let c = cosets.apply(x, 0);
            if reps[c] == usize::MAX {
                reps[c] = x;
            }
        }
        let n = self.size;
        let mut act = vec![Vec::new(); self.ctx.order()];
        for a in h.iter() {
            let mut v = Vec::with_capacity(reps.len() * n);
            for &r in &reps {
                let ar = g.mul(a, r);
                let j = cosets.apply(ar, 0);
                let kk = g.mul(g.inv(reps[j]), ar);
                for x in 0..n {
                    v.push((j * n + self.apply(kk, x)) as u32);
                }
            }
            act[a] = v;
        }
        Ok(Self::from_table(&self.ctx, *h, reps.len() * n, act))
    }

    pub fn is_equivariant(&self, f: &EquivariantMap, target: &Self) -> bool {
        self.same_acting(target).is_ok()
            && f.images.len() == self.size
            && f.images.iter().all(|&y| y < target.size)
            && self.gens.iter().all(|&g| (0..self.size).all(|x| f.apply(self.apply(g, x)) == target.apply(g, f.apply(x))))
    }

    /// All equivariant maps `self → target`: each orbit representative goes
    /// to a point fixed by its stabilizer.
    pub fn equivariant_maps(&self, target: &Self, cap: usize) -> Result<Vec<EquivariantMap>> {
        self.same_acting(target)?;
        if self.size > cap || target.size > cap {
            return Err(Error::TooLarge(format!("carriers {} and {} exceed the map cap {cap}", self.size, target.size)));
        }
        let orbits = self.orbits();
        let choices: Vec<(usize, Vec<usize>)> = orbits
            .iter()
            .map(|o| {
                let stab = self.stabilizer(o[0]);
                (o[0], (0..target.size).filter(|&y| stab.iter().all(|g| target.apply(g, y) == y)).collect())
            })
            .collect();
        let total: f64 = choices.iter().map(|(_, c)| c.len() as f64).product();
        if total > 1e6 {
            return Err(Error::TooLarge(format!("{total} equivariant maps")));
        }
        let mut out = Vec::new();
        let mut pick = vec![0usize; choices.len()];
        if choices.iter().any(|(_, c)| c.is_empty()) {
            return Ok(out);
        }
        loop {
            let mut images = vec![usize::MAX; self.size];
            for (i, (rep, c)) in choices.iter().enumerate() {
                let y = c[pick[i]];
                for g in self.acting.iter() {
                    images[self.apply(g, *rep)] = target.apply(g, y);
                }
            }
            out.push(EquivariantMap { images });
            let mut i = 0;
            loop {
                if i == pick.len() {
                    return Ok(out);
                }
                pick[i] += 1;
                if pick[i] < choices[i].1.len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
        }
    }

    /// `X ×_Z Y` for `f: X → Z` (with `self = X`) and `g: Y → Z`.
    pub fn pullback(&self, f: &EquivariantMap, y: &Self, g: &EquivariantMap, z: &Self) -> Result<Pullback> {
        if !self.is_equivariant(f, z) {
            return Err(Error::NotEquivariant("left map".into()));
        }
        if !y.is_equivariant(g, z) {
            return Err(Error::NotEquivariant("right map".into()));
        }
        let pairs: Vec<(usize, usize)> =
            (0..self.size).flat_map(|a| (0..y.size).map(move |b| (a, b))).filter(|&(a, b)| f.apply(a) == g.apply(b)).collect();
        let mut index = std::collections::HashMap::new();
        for (i, p) in pairs.iter().enumerate() {
            index.insert(*p, i as u32);
        }
        let act = (0..self.ctx.order())
            .map(|h| {
                if !self.acting.contains(h) {
                    return Vec::new();
                }
                pairs.iter().map(|&(a, b)| index[&(self.apply(h, a), y.apply(h, b))]).collect()
            })
            .collect();
        let set = Self::from_table(&self.ctx, self.acting, pairs.len(), act);
        let to_left = EquivariantMap { images: pairs.iter().map(|p| p.0).collect() };
        let to_right = EquivariantMap { images: pairs.iter().map(|p| p.1).collect() };
        Ok(Pullback { set, pairs, to_left, to_right })
    }

    /// The unique map to the one-point set.
    pub fn to_point(&self) -> EquivariantMap {
        EquivariantMap { images: vec![0; self.size] }
    }

    pub fn point(ctx: &Arc<GroupContext>, acting: Subgroup) -> Self {
        Self::coset_space(ctx, &acting, &acting).expect("a subgroup is a subgroup of itself")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gset::marks;

    fn c2() -> Arc<GroupContext> {
        GroupContext::from_builtin("C2").unwrap()
    }

    #[test]
    fn decomposition_examples() {
        let ctx = c2();
        let g = ctx.group.whole();
        assert!(ConcreteGSet::empty(&ctx, g).decompose().unwrap().is_empty());

        let swap = ConcreteGSet::from_generators(&ctx, g, 2, &[(1, vec![1, 0])]).unwrap();
        assert_eq!(swap.decompose().unwrap().counts, vec![1, 0]);

        let three = ConcreteGSet::from_generators(&ctx, g, 3, &[(1, vec![1, 0, 2])]).unwrap();
        assert_eq!(three.decompose().unwrap().counts, vec![1, 1]);
    }

    #[test]
    fn inconsistent_action_is_rejected() {
        let ctx = GroupContext::from_builtin("C4").unwrap();
        let g = ctx.group.whole();
        let gen = ctx.group.generators()[0];
        // a 3-cycle cannot be the image of an element of order 4
        let bad = ConcreteGSet::from_generators(&ctx, g, 3, &[(gen, vec![1, 2, 0])]);
        assert!(matches!(bad, Err(Error::InvalidAction(_))));
        assert!(ConcreteGSet::from_generators(&ctx, g, 2, &[(gen, vec![1, 0])]).is_ok());
    }

    #[test]
    fn realize_roundtrip_and_marks() {
        let ctx = GroupContext::from_builtin("S3").unwrap();
        let x = OrbitMultiset { level: 3, counts: vec![1, 2, 0, 1] };
        let r = ConcreteGSet::realize(&ctx, &x).unwrap();
        assert_eq!(r.size() as u64, x.carrier(&ctx));
        assert_eq!(r.decompose().unwrap(), x);
        let m = marks(&ctx, &x);
        for (k, l) in ctx.level(3).locals.iter().enumerate() {
            assert_eq!(r.fixed_points(&l.rep) as u64, m.entries[k]);
        }
    }

    #[test]
    fn equivariant_map_counts() {
        let ctx = c2();
        let g = ctx.group.whole();
        let point = ConcreteGSet::point(&ctx, g);
        let free = ConcreteGSet::coset_space(&ctx, &g, &Subgroup::trivial()).unwrap();
        assert!(point.equivariant_maps(&free, DEFAULT_MAP_CAP).unwrap().is_empty());
        assert_eq!(free.equivariant_maps(&free, DEFAULT_MAP_CAP).unwrap().len(), 2);
        assert_eq!(ConcreteGSet::empty(&ctx, g).equivariant_maps(&free, DEFAULT_MAP_CAP).unwrap().len(), 1);
    }

    #[test]
    fn pullback_examples() {
        let ctx = c2();
        let g = ctx.group.whole();
        let point = ConcreteGSet::point(&ctx, g);
        let free = ConcreteGSet::coset_space(&ctx, &g, &Subgroup::trivial()).unwrap();
        let pb = free.pullback(&free.to_point(), &free, &free.to_point(), &point).unwrap();
        assert_eq!(pb.set.size(), 4);
        assert_eq!(pb.set.decompose().unwrap().counts, vec![2, 0]);

        let id = EquivariantMap::identity(2);
        let pb = free.pullback(&id, &free, &id, &free).unwrap();
        assert_eq!(pb.set.size(), 2);
        assert_eq!(pb.to_left, id);

        let empty = ConcreteGSet::empty(&ctx, g);
        let pb = empty.pullback(&empty.to_point(), &free, &free.to_point(), &point).unwrap();
        assert!(pb.set.is_empty());
    }

    #[test]
    fn induction_of_concrete_sets() {
        let ctx = GroupContext::from_builtin("S3").unwrap();
        let x = ConcreteGSet::realize(&ctx, &OrbitMultiset { level: 2, counts: vec![1, 1] }).unwrap();
        let ind = x.induce(&ctx.group.whole()).unwrap();
        assert_eq!(ind.size(), 8);
        assert_eq!(ind.decompose().unwrap().counts, vec![1, 0, 1, 0]);
    }
}
