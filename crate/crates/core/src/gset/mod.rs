//! Finite H-sets, both as isomorphism classes ([`OrbitMultiset`]) and
//! concretely ([`ConcreteGSet`]).
//!
//! An orbit multiset at level `c` is an `H`-set for the class representative
//! `H` of `c`, stored as a dense count vector over the local classes of that
//! level (see [`Level`](crate::group::Level)).

mod concrete;
mod window;

use serde::{Deserialize, Serialize};

pub use concrete::{ConcreteGSet, EquivariantMap, Pullback, DEFAULT_MAP_CAP};
pub use window::{LevelWindow, Window};

use crate::error::{Error, Result};
use crate::group::{GroupContext, Subgroup};

/// Isomorphism class of a finite `H`-set: `counts[k]` copies of the orbit
/// `[H/K_k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitMultiset {
    pub level: usize,
    pub counts: Vec<u64>,
}

/// Fixed-point counts `|X^L|` for each local class `L` of a level.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MarkVector {
    pub level: usize,
    pub entries: Vec<u64>,
}

impl OrbitMultiset {
    /// `∅_H`.
    pub fn empty(ctx: &GroupContext, level: usize) -> Self {
        OrbitMultiset { level, counts: vec![0; ctx.level(level).len()] }
    }

    /// `*_H`, the one-point set.
    pub fn point(ctx: &GroupContext, level: usize) -> Self {
        Self::orbit(ctx, level, ctx.level(level).top())
    }

    /// `n·*_H`.
    pub fn points(ctx: &GroupContext, level: usize, n: u64) -> Self {
        let mut s = Self::empty(ctx, level);
        let top = ctx.level(level).top();
        s.counts[top] = n;
        s
    }

    /// The single orbit `[H/K]` for local class `k`.
    pub fn orbit(ctx: &GroupContext, level: usize, k: usize) -> Self {
        let mut s = Self::empty(ctx, level);
        s.counts[k] = 1;
        s
    }

    pub fn from_counts(ctx: &GroupContext, level: usize, counts: Vec<u64>) -> Result<Self> {
        if level >= ctx.num_classes() {
            return Err(Error::ShapeMismatch(format!("level {level} out of range")));
        }
        if counts.len() != ctx.level(level).len() {
            return Err(Error::ShapeMismatch(format!(
                "{} counts for {} orbit types at level {}",
                counts.len(),
                ctx.level(level).len(),
                ctx.class_label(level)
            )));
        }
        Ok(OrbitMultiset { level, counts })
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn carrier(&self, ctx: &GroupContext) -> u64 {
        self.counts.iter().zip(&ctx.level(self.level).locals).map(|(n, l)| n * l.index).sum()
    }

    pub fn num_orbits(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Contractible means isomorphic to `*_H`.
    pub fn is_point(&self, ctx: &GroupContext) -> bool {
        let top = ctx.level(self.level).top();
        self.counts.iter().enumerate().all(|(k, &n)| n == u64::from(k == top))
    }

    /// `(local class, multiplicity)` for every orbit type present.
    pub fn orbits(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().enumerate().filter(|(_, &n)| n > 0).map(|(k, &n)| (k, n))
    }

    /// Disjoint union.
    pub fn union(&self, other: &OrbitMultiset) -> Result<OrbitMultiset> {
        if self.level != other.level {
            return Err(Error::ShapeMismatch("disjoint union of sets at different levels".into()));
        }
        Ok(OrbitMultiset { level: self.level, counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect() })
    }

    pub fn scale(&self, n: u64) -> OrbitMultiset {
        OrbitMultiset { level: self.level, counts: self.counts.iter().map(|c| c * n).collect() }
    }

    /// Orbit-type permutation by an element of the Weyl group.
    pub fn permute(&self, perm: &[usize]) -> OrbitMultiset {
        let mut counts = vec![0; self.counts.len()];
        for (k, &n) in self.counts.iter().enumerate() {
            counts[perm[k]] += n;
        }
        OrbitMultiset { level: self.level, counts }
    }

    /// Human-readable form such as `2·[S3/2] + [S3/6]`.
    pub fn display(&self, ctx: &GroupContext) -> String {
        if self.is_empty() {
            return "∅".into();
        }
        let level = ctx.level(self.level);
        let h = ctx.class_label(self.level);
        self.orbits()
            .map(|(k, n)| {
                let orbit = format!("[{h}/{}]", level.locals[k].label);
                if n == 1 {
                    orbit
                } else {
                    format!("{n}·{orbit}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// The JSON form of an orbit multiset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitMultisetJson {
    pub level: String,
    pub orbits: Vec<OrbitJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitJson {
    pub stabilizer: String,
    pub mult: u64,
}

impl OrbitMultisetJson {
    pub fn from_multiset(ctx: &GroupContext, x: &OrbitMultiset) -> Self {
        let level = ctx.level(x.level);
        OrbitMultisetJson {
            level: ctx.class_label(x.level).to_string(),
            orbits: x.orbits().map(|(k, n)| OrbitJson { stabilizer: level.locals[k].label.clone(), mult: n }).collect(),
        }
    }

    pub fn to_multiset(&self, ctx: &GroupContext) -> Result<OrbitMultiset> {
        let level = ctx.class_by_label(&self.level)?;
        let mut x = OrbitMultiset::empty(ctx, level);
        for o in &self.orbits {
            let k = ctx.local_by_label(level, &o.stabilizer)?;
            x.counts[k] += o.mult;
        }
        Ok(x)
    }
}

/// `|X^L|` for every local class `L`.
pub fn marks(ctx: &GroupContext, x: &OrbitMultiset) -> MarkVector {
    let table = &ctx.level(x.level).marks;
    let entries = table.iter().map(|row| row.iter().zip(&x.counts).map(|(m, n)| m * n).sum()).collect();
    MarkVector { level: x.level, entries }
}

/// Inverts [`marks`] by back-substitution from the top of the triangular
/// table of marks.
pub fn iso_class_from_marks(ctx: &GroupContext, m: &MarkVector) -> Result<OrbitMultiset> {
    let level = ctx.level(m.level);
    if m.entries.len() != level.len() {
        return Err(Error::ShapeMismatch(format!("{} marks for {} classes", m.entries.len(), level.len())));
    }
    let table = &level.marks;
    let mut counts = vec![0u64; level.len()];
    for k in (0..level.len()).rev() {
        let mut rest = m.entries[k] as i128;
        for (j, &c) in counts.iter().enumerate().skip(k + 1) {
            rest -= table[k][j] as i128 * c as i128;
        }
        let diag = table[k][k] as i128;
        if rest < 0 || rest % diag != 0 {
            return Err(Error::NotRealizable {
                class: level.locals[k].label.clone(),
                reason: if rest < 0 {
                    format!("back-substitution gives {rest}/{diag}")
                } else {
                    format!("{rest} is not divisible by the Weyl order {diag}")
                },
            });
        }
        counts[k] = (rest / diag) as u64;
    }
    Ok(OrbitMultiset { level: m.level, counts })
}

/// Parses the form printed by [`OrbitMultiset::display`]: terms `n·[H/K]`
/// (also `n*[H/K]` or `n[H/K]`) joined by `+`, or `∅[H]` / `0[H]` for the
/// empty `H`-set. `[H]` abbreviates the point `[H/H]`.
pub fn parse_multiset(ctx: &GroupContext, text: &str) -> Result<OrbitMultiset> {
    let text = text.trim();
    let bad = || Error::Parse(format!("cannot read {text:?} as a finite set; expected terms like 2·[H/K]"));
    for prefix in ["∅[", "0["] {
        if let Some(rest) = text.strip_prefix(prefix) {
            let label = rest.strip_suffix(']').ok_or_else(bad)?;
            return Ok(OrbitMultiset::empty(ctx, ctx.class_by_label(label.trim())?));
        }
    }
    let mut out: Option<OrbitMultiset> = None;
    for term in text.split('+') {
        let term = term.trim();
        let open = term.find('[').ok_or_else(bad)?;
        let coeff = term[..open].trim().trim_end_matches(['·', '*']).trim();
        let n: u64 = if coeff.is_empty() { 1 } else { coeff.parse().map_err(|_| bad())? };
        let inner = term[open + 1..].strip_suffix(']').ok_or_else(bad)?;
        let (h, k) = match inner.split_once('/') {
            Some((h, k)) => (h, Some(k)),
            None => (inner, None),
        };
        let level = ctx.class_by_label(h.trim())?;
        let x = out.get_or_insert_with(|| OrbitMultiset::empty(ctx, level));
        if x.level != level {
            return Err(Error::Parse(format!("{text:?} mixes orbits of different levels")));
        }
        let k = match k {
            Some(k) => ctx.local_by_label(level, k.trim())?,
            None => ctx.level(level).top(),
        };
        x.counts[k] += n;
    }
    out.ok_or_else(bad)
}

/// Restriction along the local class `m` through the precomputed tables.
pub fn restrict_local(ctx: &GroupContext, x: &OrbitMultiset, m: usize) -> OrbitMultiset {
    let level = ctx.level(x.level);
    let target = level.locals[m].global;
    let mut counts = vec![0u64; ctx.level(target).len()];
    for (k, n) in x.orbits() {
        for (c, r) in counts.iter_mut().zip(&level.restrict[m][k]) {
            *c += n * r;
        }
    }
    OrbitMultiset { level: target, counts }
}

/// `Res_K X` for a subgroup `K` of the level representative `H`, by the
/// double coset formula. The result lives at the class of `K`.
pub fn restrict(ctx: &GroupContext, x: &OrbitMultiset, k: &Subgroup) -> Result<OrbitMultiset> {
    let h = ctx.level(x.level).sub;
    let k = inside(ctx, k, &h)?;
    let (target, _) = ctx.classify(&k)?;
    let level = ctx.level(x.level);
    let mut out = OrbitMultiset::empty(ctx, target);
    for (j, n) in x.orbits() {
        let l = level.locals[j].rep;
        for d in double_cosets_within(ctx, &h, &k, &l) {
            out.counts[ctx.transport(&k, &d)?] += n;
        }
    }
    Ok(out)
}

fn double_cosets_within(ctx: &GroupContext, h: &Subgroup, k: &Subgroup, l: &Subgroup) -> Vec<Subgroup> {
    crate::group::double_cosets_in_sub(&ctx.group, h, k, l).into_iter().map(|d| d.intersection).collect()
}

/// Replaces `k` by an `H`-subgroup: `k` itself if it lies in `h`, otherwise a
/// `G`-conjugate that does.
fn inside(ctx: &GroupContext, k: &Subgroup, h: &Subgroup) -> Result<Subgroup> {
    if !ctx.group.is_subgroup(k) {
        return Err(Error::NotASubgroup(format!("{k:?}")));
    }
    if k.is_subset(h) {
        return Ok(*k);
    }
    (0..ctx.order())
        .map(|g| ctx.group.conjugate_subgroup(g, k))
        .find(|c| c.is_subset(h))
        .ok_or_else(|| Error::NotSubconjugate(format!("{k:?} is not subconjugate to {h:?}")))
}

/// `Ind` from level `global(k)` to level `c` along the local class `k`.
pub fn induce_local(ctx: &GroupContext, x: &OrbitMultiset, c: usize, k: usize) -> Result<OrbitMultiset> {
    let level = ctx.level(c);
    if level.locals[k].global != x.level {
        return Err(Error::NotSubconjugate(format!(
            "set lives at {} but orbit type {} has class {}",
            ctx.class_label(x.level),
            level.locals[k].label,
            ctx.class_label(level.locals[k].global)
        )));
    }
    let map = &level.induce_maps[k];
    let mut counts = vec![0u64; level.len()];
    for (j, n) in x.orbits() {
        counts[map[j]] += n;
    }
    Ok(OrbitMultiset { level: c, counts })
}

/// `Ind_K^H X` where `X` lives at the class of `K` and `K ≤ H` are actual
/// subgroups. The result lives at the class of `H`.
pub fn induce(ctx: &GroupContext, x: &OrbitMultiset, k: &Subgroup, h: &Subgroup) -> Result<OrbitMultiset> {
    check_level(ctx, x, k)?;
    if !k.is_subset(h) {
        return Err(Error::NotSubconjugate(format!("{k:?} is not contained in {h:?}")));
    }
    let (target, _) = ctx.classify(h)?;
    let mut out = OrbitMultiset::empty(ctx, target);
    for (j, n) in x.orbits() {
        let sub = ctx.untransport(k, j)?;
        out.counts[ctx.transport(h, &sub)?] += n;
    }
    Ok(out)
}

fn check_level(ctx: &GroupContext, x: &OrbitMultiset, k: &Subgroup) -> Result<()> {
    let (c, _) = ctx.classify(k)?;
    if c != x.level {
        return Err(Error::NotSubconjugate(format!(
            "set lives at {} but the subgroup has class {}",
            ctx.class_label(x.level),
            ctx.class_label(c)
        )));
    }
    Ok(())
}

/// `CoInd_K^H X` through marks: `|CoInd(X)^L| = Π_{LgK} |X^{g⁻¹Lg ∩ K}|`.
pub fn coinduce(ctx: &GroupContext, x: &OrbitMultiset, k: &Subgroup, h: &Subgroup) -> Result<OrbitMultiset> {
    check_level(ctx, x, k)?;
    if !k.is_subset(h) {
        return Err(Error::NotSubconjugate(format!("{k:?} is not contained in {h:?}")));
    }
    let (target, _) = ctx.classify(h)?;
    let xm = marks(ctx, x);
    let g = &ctx.group;
    let mut entries = Vec::new();
    for li in 0..ctx.level(target).len() {
        let l_sub = ctx.untransport(h, li)?;
        let mut product: u64 = 1;
        for d in crate::group::double_cosets_in_sub(g, h, &l_sub, k) {
            // d.intersection = L ∩ g K g⁻¹; conjugate back: g⁻¹ L g ∩ K
            let back = g.conjugate_subgroup(g.inv(d.representative), &d.intersection);
            let fixed = xm.entries[ctx.transport(k, &back)?];
            product = product
                .checked_mul(fixed)
                .ok_or_else(|| Error::TooLarge("coinduced set has more than 2^64 points".into()))?;
        }
        entries.push(product);
    }
    iso_class_from_marks(ctx, &MarkVector { level: target, entries })
}

/// Coinduction along the local class `k` of level `c`.
pub fn coinduce_local(ctx: &GroupContext, x: &OrbitMultiset, c: usize, k: usize) -> Result<OrbitMultiset> {
    let level = ctx.level(c);
    coinduce(ctx, x, &level.locals[k].rep, &level.sub)
}

/// `∐_U^S X_U`: `family[k]` holds one set for each of the `counts[k]` copies of
/// the orbit type `k` in `S`, each living at the class of that orbit type.
pub fn indexed_coproduct(ctx: &GroupContext, s: &OrbitMultiset, family: &[Vec<OrbitMultiset>]) -> Result<OrbitMultiset> {
    let level = ctx.level(s.level);
    if family.len() != level.len() {
        return Err(Error::ShapeMismatch(format!("family has {} slots for {} orbit types", family.len(), level.len())));
    }
    let mut out = OrbitMultiset::empty(ctx, s.level);
    for (k, sets) in family.iter().enumerate() {
        if sets.len() as u64 != s.counts[k] {
            return Err(Error::ShapeMismatch(format!(
                "{} summands for {} copies of [{}/{}]",
                sets.len(),
                s.counts[k],
                ctx.class_label(s.level),
                level.locals[k].label
            )));
        }
        for x in sets {
            let ind = induce_local(ctx, x, s.level, k).map_err(|e| Error::ShapeMismatch(e.to_string()))?;
            for (o, i) in out.counts.iter_mut().zip(ind.counts) {
                *o += i;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupContext;

    fn c2() -> std::sync::Arc<GroupContext> {
        GroupContext::from_builtin("C2").unwrap()
    }

    #[test]
    fn parse_roundtrip() {
        let ctx = GroupContext::from_builtin("S3").unwrap();
        let x = OrbitMultiset { level: 3, counts: vec![0, 2, 0, 1] };
        assert_eq!(parse_multiset(&ctx, &x.display(&ctx)).unwrap(), x);
        assert_eq!(parse_multiset(&ctx, "2*[6/2] + [6]").unwrap(), x);
        assert_eq!(parse_multiset(&ctx, "∅[2]").unwrap(), OrbitMultiset::empty(&ctx, 1));
        assert!(parse_multiset(&ctx, "[6/2] + [2/1]").is_err());
    }

    #[test]
    fn marks_of_c2_orbits() {
        let ctx = c2();
        let free = OrbitMultiset::orbit(&ctx, 1, 0);
        assert_eq!(marks(&ctx, &free).entries, vec![2, 0]);
        assert_eq!(marks(&ctx, &OrbitMultiset::point(&ctx, 1)).entries, vec![1, 1]);
    }

    #[test]
    fn marks_of_s3_mod_c2() {
        let ctx = GroupContext::from_builtin("S3").unwrap();
        let x = OrbitMultiset::orbit(&ctx, 3, 1);
        assert_eq!(marks(&ctx, &x).entries, vec![3, 1, 0, 0]);
    }

    #[test]
    fn iso_class_inversion() {
        let ctx = c2();
        let m = |e: Vec<u64>| MarkVector { level: 1, entries: e };
        assert_eq!(iso_class_from_marks(&ctx, &m(vec![1, 1])).unwrap(), OrbitMultiset::point(&ctx, 1));
        assert_eq!(iso_class_from_marks(&ctx, &m(vec![4, 2])).unwrap().counts, vec![1, 2]);
        let err = iso_class_from_marks(&ctx, &m(vec![1, 2])).unwrap_err();
        assert!(matches!(err, Error::NotRealizable { .. }));
    }

    #[test]
    fn restriction_examples() {
        let ctx = c2();
        let e = Subgroup::trivial();
        let r = restrict(&ctx, &OrbitMultiset::point(&ctx, 1), &e).unwrap();
        assert_eq!(r, OrbitMultiset::point(&ctx, 0));
        assert!(restrict(&ctx, &OrbitMultiset::empty(&ctx, 1), &e).unwrap().is_empty());

        let s3 = GroupContext::from_builtin("S3").unwrap();
        let c2 = s3.level(1).sub;
        let r = restrict(&s3, &OrbitMultiset::orbit(&s3, 3, 2), &c2).unwrap();
        assert_eq!(r, OrbitMultiset::orbit(&s3, 1, 0));
        assert_eq!(restrict_local(&s3, &OrbitMultiset::orbit(&s3, 3, 2), 1), r);
    }

    #[test]
    fn induction_examples() {
        let ctx = c2();
        let e = Subgroup::trivial();
        let g = ctx.group.whole();
        assert_eq!(induce(&ctx, &OrbitMultiset::point(&ctx, 0), &e, &g).unwrap().counts, vec![1, 0]);
        assert_eq!(induce(&ctx, &OrbitMultiset::points(&ctx, 0, 2), &e, &g).unwrap().counts, vec![2, 0]);

        let s3 = GroupContext::from_builtin("S3").unwrap();
        let c3 = s3.level(2).sub;
        let free_c3 = OrbitMultiset::orbit(&s3, 2, 0);
        assert_eq!(induce(&s3, &free_c3, &c3, &s3.group.whole()).unwrap(), OrbitMultiset::orbit(&s3, 3, 0));
    }

    #[test]
    fn coinduction_examples() {
        let ctx = c2();
        let e = Subgroup::trivial();
        let g = ctx.group.whole();
        assert_eq!(coinduce(&ctx, &OrbitMultiset::point(&ctx, 0), &e, &g).unwrap(), OrbitMultiset::point(&ctx, 1));
        assert_eq!(coinduce(&ctx, &OrbitMultiset::points(&ctx, 0, 2), &e, &g).unwrap().counts, vec![1, 2]);
        let x = OrbitMultiset { level: 1, counts: vec![2, 3] };
        assert_eq!(coinduce(&ctx, &x, &g, &g).unwrap(), x);
    }

    #[test]
    fn indexed_coproduct_examples() {
        let ctx = c2();
        let x = OrbitMultiset { level: 1, counts: vec![1, 2] };
        let star = OrbitMultiset::point(&ctx, 1);
        assert_eq!(indexed_coproduct(&ctx, &star, &[vec![], vec![x.clone()]]).unwrap(), x);

        let two = OrbitMultiset::points(&ctx, 1, 2);
        let fam = [vec![], vec![star.clone(), OrbitMultiset::empty(&ctx, 1)]];
        assert_eq!(indexed_coproduct(&ctx, &two, &fam).unwrap(), star);

        let free = OrbitMultiset::orbit(&ctx, 1, 0);
        let fam = [vec![OrbitMultiset::points(&ctx, 0, 2)], vec![]];
        assert_eq!(indexed_coproduct(&ctx, &free, &fam).unwrap().counts, vec![2, 0]);

        assert!(matches!(indexed_coproduct(&ctx, &free, &[vec![], vec![]]), Err(Error::ShapeMismatch(_))));
    }
}
