use crate::error::{Error, Result};
use crate::group::GroupContext;

/// A downward-closed set of subgroup classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Family {
    members: Vec<bool>,
}

impl Family {
    /// Checks downward closure.
    pub fn new(ctx: &GroupContext, members: Vec<bool>) -> Result<Self> {
        if members.len() != ctx.num_classes() {
            return Err(Error::NotAFamily(format!("{} flags for {} classes", members.len(), ctx.num_classes())));
        }
        for h in (0..members.len()).filter(|&h| members[h]) {
            if let Some(k) = (0..members.len()).find(|&k| !members[k] && ctx.leq(k, h)) {
                return Err(Error::NotAFamily(format!(
                    "contains ({}) but not its subgroup class ({})",
                    ctx.class_label(h),
                    ctx.class_label(k)
                )));
            }
        }
        Ok(Family { members })
    }

    pub fn from_classes(ctx: &GroupContext, classes: &[usize]) -> Result<Self> {
        let mut members = vec![false; ctx.num_classes()];
        for &c in classes {
            members[c] = true;
        }
        Self::new(ctx, members)
    }

    /// The smallest family containing `classes`.
    pub fn generated(ctx: &GroupContext, classes: &[usize]) -> Self {
        let members = (0..ctx.num_classes()).map(|k| classes.iter().any(|&h| ctx.leq(k, h))).collect();
        Family { members }
    }

    pub fn all(ctx: &GroupContext) -> Self {
        Family { members: vec![true; ctx.num_classes()] }
    }

    pub fn none(ctx: &GroupContext) -> Self {
        Family { members: vec![false; ctx.num_classes()] }
    }

    pub fn contains(&self, c: usize) -> bool {
        self.members[c]
    }

    pub fn classes(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&c| self.members[c]).collect()
    }

    pub fn is_all(&self) -> bool {
        self.members.iter().all(|&m| m)
    }

    pub fn is_empty(&self) -> bool {
        self.members.iter().all(|&m| !m)
    }

    pub fn intersection(&self, other: &Family) -> Family {
        Family { members: self.members.iter().zip(&other.members).map(|(a, b)| *a && *b).collect() }
    }

    pub fn union(&self, other: &Family) -> Family {
        Family { members: self.members.iter().zip(&other.members).map(|(a, b)| *a || *b).collect() }
    }

    pub fn is_subset(&self, other: &Family) -> bool {
        self.members.iter().zip(&other.members).all(|(a, b)| !*a || *b)
    }

    pub fn labels(&self, ctx: &GroupContext) -> Vec<String> {
        self.classes().into_iter().map(|c| ctx.class_label(c).to_string()).collect()
    }

    /// Every family of the group, in increasing bitmask order.
    pub fn enumerate(ctx: &GroupContext) -> Vec<Family> {
        let n = ctx.num_classes();
        assert!(n < 24, "too many subgroup classes to enumerate families");
        (0u32..1 << n)
            .filter_map(|mask| Family::new(ctx, (0..n).map(|c| mask >> c & 1 == 1).collect()).ok())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn downward_closure_is_checked() {
        let ctx = GroupContext::from_builtin("C2").unwrap();
        assert!(Family::from_classes(&ctx, &[0]).is_ok());
        assert!(matches!(Family::from_classes(&ctx, &[1]), Err(Error::NotAFamily(_))));
        assert_eq!(Family::generated(&ctx, &[1]), Family::all(&ctx));
    }

    #[test]
    fn families_of_cyclic_groups_form_a_chain() {
        let ctx = GroupContext::from_builtin("C4").unwrap();
        assert_eq!(Family::enumerate(&ctx).len(), 4);
        let ctx = GroupContext::from_builtin("C2xC2").unwrap();
        // ∅, {e}, three {e, C2}, three pairs of C2's, all C2's, everything
        assert_eq!(Family::enumerate(&ctx).len(), 10);
    }
}
