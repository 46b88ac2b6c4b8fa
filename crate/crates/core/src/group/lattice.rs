use std::collections::HashMap;

use serde::Serialize;

use super::subgroup::{enumerate_subgroups_capped, Subgroup, DEFAULT_SUBGROUP_CAP};
use super::FiniteGroup;
use crate::error::{Error, Result};

/// A conjugacy class of subgroups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupClass {
    pub representative: Subgroup,
    pub members: Vec<Subgroup>,
    pub normalizer: Subgroup,
    pub weyl_order: usize,
    pub order: usize,
    pub label: String,
}

/// Subgroup classes ordered by increasing order, with the subconjugacy
/// relation.
#[derive(Clone, Debug)]
pub struct SubconjugacyPoset {
    pub subgroups: Vec<Subgroup>,
    pub index: HashMap<Subgroup, usize>,
    /// subgroup index → class index
    pub class_of: Vec<usize>,
    /// subgroup index → some `g` with `g S g⁻¹` = class representative
    pub conjugator: Vec<usize>,
    pub classes: Vec<SubgroupClass>,
    leq: Vec<Vec<bool>>,
}

impl SubconjugacyPoset {
    /// `(K) ≤ (H)`: some conjugate of `K` lies in `H`.
    pub fn leq(&self, k: usize, h: usize) -> bool {
        self.leq[k][h]
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.classes.len() - 1
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn class_of_subgroup(&self, s: &Subgroup) -> Option<usize> {
        self.index.get(s).map(|&i| self.class_of[i])
    }

    pub fn label(&self, class: usize) -> &str {
        &self.classes[class].label
    }

    pub fn class_by_label(&self, label: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.label == label)
    }
}

pub fn subconjugacy_poset(group: &FiniteGroup) -> Result<SubconjugacyPoset> {
    let subgroups = enumerate_subgroups_capped(group, DEFAULT_SUBGROUP_CAP)?;
    Ok(poset_from_subgroups(group, subgroups))
}

pub(crate) fn poset_from_subgroups(group: &FiniteGroup, subgroups: Vec<Subgroup>) -> SubconjugacyPoset {
    let index: HashMap<Subgroup, usize> = subgroups.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let n = group.order();
    let mut class_of = vec![usize::MAX; subgroups.len()];
    let mut conjugator = vec![0; subgroups.len()];
    let mut classes: Vec<SubgroupClass> = Vec::new();
    for (i, rep) in subgroups.iter().enumerate() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let c = classes.len();
        let mut members = Vec::new();
        let mut normalizer = Subgroup::empty();
        for g in 0..n {
            let conj = group.conjugate_subgroup(g, rep);
            let j = index[&conj];
            if j == i {
                normalizer.insert(g);
            }
            if class_of[j] == usize::MAX {
                class_of[j] = c;
                // g⁻¹ (g R g⁻¹) g = R
                conjugator[j] = group.inv(g);
                members.push(conj);
            }
        }
        members.sort_by_key(super::subgroup::canonical_key);
        classes.push(SubgroupClass {
            representative: *rep,
            weyl_order: normalizer.len() / rep.len(),
            order: rep.len(),
            normalizer,
            members,
            label: String::new(),
        });
    }
    // labels: order, with a letter suffix when several classes share an order
    let mut by_order: HashMap<usize, Vec<usize>> = HashMap::new();
    for (c, cls) in classes.iter().enumerate() {
        by_order.entry(cls.order).or_default().push(c);
    }
    for (order, list) in by_order {
        for (k, &c) in list.iter().enumerate() {
            classes[c].label = if list.len() == 1 {
                order.to_string()
            } else if list.len() <= 26 {
                format!("{order}{}", (b'a' + k as u8) as char)
            } else {
                format!("{order}_{k}")
            };
        }
    }
    let m = classes.len();
    let mut leq = vec![vec![false; m]; m];
    for k in 0..m {
        for h in 0..m {
            if classes[k].order <= classes[h].order && classes[h].order % classes[k].order == 0 {
                let hr = classes[h].representative;
                leq[k][h] = classes[k].members.iter().any(|km| km.is_subset(&hr));
            }
        }
    }
    SubconjugacyPoset { subgroups, index, class_of, conjugator, classes, leq }
}

/// One double coset `K g H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoubleCoset {
    pub representative: usize,
    /// `K ∩ g H g⁻¹`
    #[serde(serialize_with = "ser_subgroup")]
    pub intersection: Subgroup,
    pub size: usize,
}

fn ser_subgroup<S: serde::Serializer>(s: &Subgroup, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq(s.iter())
}

/// Double cosets `K \ G / H`, representatives chosen as the least element of
/// each double coset.
pub fn double_cosets(group: &FiniteGroup, k: &Subgroup, h: &Subgroup) -> Result<Vec<DoubleCoset>> {
    for (name, s) in [("K", k), ("H", h)] {
        if !group.is_subgroup(s) {
            return Err(Error::NotASubgroup(format!("{name} = {s:?}")));
        }
    }
    Ok(double_cosets_in(group, &group.whole(), k, h))
}

/// Double cosets `K \ A / H` inside an ambient subgroup `A ⊇ K, H`.
pub(crate) fn double_cosets_in(group: &FiniteGroup, ambient: &Subgroup, k: &Subgroup, h: &Subgroup) -> Vec<DoubleCoset> {
    let mut covered = Subgroup::empty();
    let ks = k.elements();
    let hs = h.elements();
    let mut out = Vec::new();
    for g in ambient.iter() {
        if covered.contains(g) {
            continue;
        }
        let mut size = 0;
        for &a in &ks {
            let ag = group.mul(a, g);
            for &b in &hs {
                let x = group.mul(ag, b);
                if !covered.contains(x) {
                    covered.insert(x);
                    size += 1;
                }
            }
        }
        let conj = group.conjugate_subgroup(g, h);
        out.push(DoubleCoset { representative: g, intersection: k.intersection(&conj), size });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin;

    #[test]
    fn s3_classes_and_weyl_orders() {
        let g = builtin("S3").unwrap();
        let p = subconjugacy_poset(&g).unwrap();
        assert_eq!(p.subgroups.len(), 6);
        assert_eq!(p.len(), 4);
        let labels: Vec<&str> = p.classes.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["1", "2", "3", "6"]);
        assert_eq!(p.classes[1].weyl_order, 1);
        assert_eq!(p.classes[2].weyl_order, 2);
        assert_eq!(p.classes[1].members.len(), 3);
        assert!(p.leq(1, 3) && p.leq(0, 1) && !p.leq(1, 2) && !p.leq(2, 1));
    }

    #[test]
    fn cyclic_prime_square_is_a_chain() {
        for name in ["C4", "C9"] {
            let p = subconjugacy_poset(&builtin(name).unwrap()).unwrap();
            assert_eq!(p.len(), 3);
            for a in 0..3 {
                for b in 0..3 {
                    assert_eq!(p.leq(a, b), a <= b);
                }
            }
        }
    }

    #[test]
    fn klein_four_has_five_classes() {
        let p = subconjugacy_poset(&builtin("C2xC2").unwrap()).unwrap();
        assert_eq!(p.subgroups.len(), 5);
        assert_eq!(p.len(), 5);
        assert_eq!(p.label(1), "2a");
    }

    #[test]
    fn conjugators_conjugate_to_representative() {
        let g = builtin("S4").unwrap();
        let p = subconjugacy_poset(&g).unwrap();
        for (i, s) in p.subgroups.iter().enumerate() {
            let rep = p.classes[p.class_of[i]].representative;
            assert_eq!(g.conjugate_subgroup(p.conjugator[i], s), rep);
        }
    }

    #[test]
    fn double_coset_examples() {
        let g = builtin("S3").unwrap();
        let p = subconjugacy_poset(&g).unwrap();
        let whole = g.whole();
        let d = double_cosets(&g, &whole, &whole).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].intersection, whole);

        let c2 = p.classes[1].representative;
        let c3 = p.classes[2].representative;
        let d = double_cosets(&g, &c2, &c3).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].intersection, Subgroup::trivial());
        assert_eq!(d[0].size, 6);

        let c = builtin("C2").unwrap();
        let e = Subgroup::trivial();
        assert_eq!(double_cosets(&c, &e, &e).unwrap().len(), 2);
        assert!(double_cosets(&c, &Subgroup::from_elements([1]), &e).is_err());
    }
}
