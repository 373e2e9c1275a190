//! Subgroups, normality, quotients and normal-subgroup inventories.

use std::cmp::Ordering;
use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::hom::GroupHom;
use crate::limits::Limits;

/// A subgroup stored as a membership bitset over its parent's elements.
#[derive(Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<bool>,
    size: usize,
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup{:?}", self.elements())
    }
}

impl Subgroup {
    pub fn trivial(parent: &Arc<FiniteGroup>) -> Self {
        subgroup_generated(parent, &[])
    }

    pub fn whole(parent: &Arc<FiniteGroup>) -> Self {
        Subgroup {
            parent: parent.clone(),
            members: vec![true; parent.order()],
            size: parent.order(),
        }
    }

    /// Wraps a member set after checking the subgroup axioms.
    pub fn from_elements(parent: &Arc<FiniteGroup>, elems: &[Elem]) -> Result<Self> {
        let candidate = subgroup_generated(parent, elems);
        if candidate.len() != {
            let mut e = elems.to_vec();
            e.sort_unstable();
            e.dedup();
            e.len()
        } {
            return Err(Error::NotAGroup("element set is not closed".into()));
        }
        Ok(candidate)
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, g: Elem) -> bool {
        self.members[g as usize]
    }

    pub fn elements(&self) -> Vec<Elem> {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| i as Elem)
            .collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    pub fn is_whole(&self) -> bool {
        self.size == self.parent.order()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.iter().zip(&other.members).all(|(&a, &b)| !a || b)
    }

    pub fn is_normal(&self) -> bool {
        let gens = self.parent.generators();
        let elems = self.elements();
        gens.iter()
            .all(|&g| elems.iter().all(|&n| self.contains(self.parent.conjugate(n, g))))
    }

    /// The subgroup as a group in its own right, plus the inclusion.
    pub fn to_group(&self) -> (FiniteGroup, GroupHom) {
        let elems = self.elements();
        let g = self.parent.clone();
        let sub = FiniteGroup::from_elements(&elems, |a, b| g.mul(*a, *b));
        let sub = Arc::new(sub);
        let inclusion = GroupHom::new_unchecked(sub.clone(), self.parent.clone(), elems);
        ((*sub).clone(), inclusion)
    }

    /// Product set `self * other`, which is a subgroup when either factor is normal.
    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let mut gens = self.elements();
        gens.extend(other.elements());
        subgroup_generated(&self.parent, &gens)
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let members: Vec<bool> = self.members.iter().zip(&other.members).map(|(&a, &b)| a && b).collect();
        let size = members.iter().filter(|&&m| m).count();
        Subgroup {
            parent: self.parent.clone(),
            members,
            size,
        }
    }

    fn canonical_cmp(&self, other: &Subgroup) -> Ordering {
        self.size
            .cmp(&other.size)
            .then_with(|| self.elements().cmp(&other.elements()))
    }
}

/// Smallest subgroup containing `elems` (closure fixpoint).
pub fn subgroup_generated(group: &Arc<FiniteGroup>, elems: &[Elem]) -> Subgroup {
    let mut members = vec![false; group.order()];
    members[0] = true;
    let mut queue = VecDeque::from([0 as Elem]);
    let mut size = 1;
    let gens: Vec<Elem> = elems.iter().copied().filter(|&g| g != 0).collect();
    while let Some(x) = queue.pop_front() {
        for &g in &gens {
            let y = group.mul(x, g);
            if !members[y as usize] {
                members[y as usize] = true;
                size += 1;
                queue.push_back(y);
            }
        }
    }
    Subgroup {
        parent: group.clone(),
        members,
        size,
    }
}

/// Quotient by a normal subgroup with minimal-index coset representatives.
///
/// Cosets are numbered in ascending order of their representatives, so the
/// coset of the identity is element 0.
pub fn quotient_group(group: &Arc<FiniteGroup>, normal: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
    if !normal.is_normal() {
        return Err(Error::NotNormal(format!("{:?}", normal.elements())));
    }
    let n = group.order();
    let mut coset = vec![u32::MAX; n];
    let mut reps = Vec::new();
    let members = normal.elements();
    for g in 0..n as Elem {
        if coset[g as usize] != u32::MAX {
            continue;
        }
        let idx = reps.len() as u32;
        reps.push(g);
        for &m in &members {
            coset[group.mul(g, m) as usize] = idx;
        }
    }
    let q = reps.len();
    let mut rows = Vec::with_capacity(q);
    for &a in &reps {
        rows.push(
            reps.iter()
                .map(|&b| coset[group.mul(a, b) as usize])
                .collect::<Vec<_>>(),
        );
    }
    let quotient = Arc::new(FiniteGroup::from_table(&rows)?);
    let projection = GroupHom::new_unchecked(group.clone(), quotient.clone(), coset);
    Ok(((*quotient).clone(), projection))
}

/// Normal closure of a set of elements.
pub fn normal_closure(group: &Arc<FiniteGroup>, elems: &[Elem]) -> Subgroup {
    let gens = group.generators();
    let mut current = subgroup_generated(group, elems);
    loop {
        let mut extra = Vec::new();
        for n in current.elements() {
            for &g in &gens {
                let c = group.conjugate(n, g);
                if !current.contains(c) {
                    extra.push(c);
                }
            }
        }
        if extra.is_empty() {
            return current;
        }
        extra.extend(current.elements());
        current = subgroup_generated(group, &extra);
    }
}

/// Conjugacy class representatives, smallest index first.
fn class_representatives(group: &FiniteGroup) -> Vec<Elem> {
    let gens = group.generators();
    let mut seen = vec![false; group.order()];
    let mut reps = Vec::new();
    for g in group.elements() {
        if seen[g as usize] {
            continue;
        }
        reps.push(g);
        seen[g as usize] = true;
        let mut queue = VecDeque::from([g]);
        while let Some(x) = queue.pop_front() {
            for &s in &gens {
                let y = group.conjugate(x, s);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    reps
}

#[derive(Debug, Clone)]
pub struct NormalInventory {
    /// All normal subgroups ordered by (size, element list).
    pub subgroups: Vec<Subgroup>,
    pub is_simple: bool,
}

/// All normal subgroups of `group`, built from normal closures of single
/// elements and then closed under joins.
pub fn normal_subgroup_inventory(group: &Arc<FiniteGroup>, limits: &Limits) -> Result<NormalInventory> {
    if group.order() > limits.enumeration {
        return Err(Error::SizeLimit {
            what: "normal subgroup enumeration",
            needed: group.order(),
            limit: limits.enumeration,
        });
    }
    let mut found: Vec<Subgroup> = vec![Subgroup::trivial(group)];
    for g in class_representatives(group) {
        let n = normal_closure(group, &[g]);
        if !found.contains(&n) {
            found.push(n);
        }
    }
    let mut i = 0;
    while i < found.len() {
        let mut j = 0;
        while j < i {
            let joined = found[i].join(&found[j]);
            if !found.contains(&joined) {
                found.push(joined);
            }
            j += 1;
        }
        i += 1;
    }
    found.sort_by(|a, b| a.canonical_cmp(b));
    let is_simple = found.len() == 2;
    Ok(NormalInventory {
        subgroups: found,
        is_simple,
    })
}

/// Simplicity test usable at any order: every non-identity conjugacy class
/// must normally generate the whole group.
pub fn is_simple(group: &Arc<FiniteGroup>) -> bool {
    if group.order() == 1 {
        return false;
    }
    class_representatives(group)
        .into_iter()
        .filter(|&g| g != 0)
        .all(|g| normal_closure(group, &[g]).is_whole())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{a5_generators, product_index};

    fn c(n: usize) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(n))
    }

    fn a5() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::permutation(5, &a5_generators(), &Limits::default()).unwrap())
    }

    #[test]
    fn generated_subgroups() {
        let c4 = c(4);
        assert_eq!(subgroup_generated(&c4, &[]).elements(), vec![0]);
        assert_eq!(subgroup_generated(&c4, &[2]).elements(), vec![0, 2]);
        let a5 = a5();
        // the 5-cycle generator
        let five = (0..60).find(|&g| a5.element_order(g) == 5).unwrap();
        assert_eq!(subgroup_generated(&a5, &[five]).len(), 5);
    }

    #[test]
    fn quotients() {
        let c4 = c(4);
        let n = subgroup_generated(&c4, &[2]);
        let (q, proj) = quotient_group(&c4, &n).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj.image_of(3), 1);

        let c4c2 = Arc::new(FiniteGroup::product(&[
            &FiniteGroup::cyclic(4),
            &FiniteGroup::cyclic(2),
        ]));
        let left = subgroup_generated(&c4c2, &[product_index(&[4, 2], &[1, 0])]);
        let (q, _) = quotient_group(&c4c2, &left).unwrap();
        assert_eq!(q.order(), 2);

        let c44 = Arc::new(FiniteGroup::product(&[
            &FiniteGroup::cyclic(4),
            &FiniteGroup::cyclic(4),
        ]));
        let graph = subgroup_generated(&c44, &[product_index(&[4, 4], &[1, 2])]);
        assert_eq!(graph.len(), 4);
        let (q, _) = quotient_group(&c44, &graph).unwrap();
        assert_eq!(q.order(), 4);
    }

    #[test]
    fn quotient_requires_normality() {
        let s3 = Arc::new(FiniteGroup::permutation(3, &[vec![1, 0, 2], vec![1, 2, 0]], &Limits::default()).unwrap());
        let transposition = (0..6).find(|&g| s3.element_order(g) == 2).unwrap();
        let h = subgroup_generated(&s3, &[transposition]);
        assert!(matches!(quotient_group(&s3, &h), Err(Error::NotNormal(_))));
    }

    #[test]
    fn inventories() {
        let limits = Limits::default();
        let inv = normal_subgroup_inventory(&c(2), &limits).unwrap();
        assert_eq!(inv.subgroups.len(), 2);
        assert!(inv.is_simple);
        let inv = normal_subgroup_inventory(&c(4), &limits).unwrap();
        let sets: Vec<_> = inv.subgroups.iter().map(|s| s.elements()).collect();
        assert_eq!(sets, vec![vec![0], vec![0, 2], vec![0, 1, 2, 3]]);
        assert!(!inv.is_simple);
        let inv = normal_subgroup_inventory(&a5(), &limits).unwrap();
        assert_eq!(inv.subgroups.len(), 2);
        assert!(inv.is_simple);
        assert!(is_simple(&a5()));
        assert!(!is_simple(&c(6)));
        assert!(is_simple(&c(7)));
    }

    #[test]
    fn inventory_size_limit() {
        let limits = Limits {
            enumeration: 8,
            ..Limits::default()
        };
        assert!(matches!(
            normal_subgroup_inventory(&c(9), &limits),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn quotient_orders_multiply_for_every_normal_subgroup() {
        let limits = Limits::default();
        let groups = vec![
            c(12),
            Arc::new(FiniteGroup::klein4()),
            Arc::new(FiniteGroup::permutation(4, &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]], &limits).unwrap()),
        ];
        for g in groups {
            for n in normal_subgroup_inventory(&g, &limits).unwrap().subgroups {
                let (q, _) = quotient_group(&g, &n).unwrap();
                assert_eq!(q.order() * n.len(), g.order());
            }
        }
    }

    #[test]
    fn products_of_nonabelian_simple_groups() {
        // normal subgroups of A5 x A5 are exactly the four products
        let a = FiniteGroup::permutation(5, &a5_generators(), &Limits::default()).unwrap();
        let aa = Arc::new(FiniteGroup::product(&[&a, &a]));
        let limits = Limits {
            enumeration: 4000,
            ..Limits::default()
        };
        let inv = normal_subgroup_inventory(&aa, &limits).unwrap();
        let sizes: Vec<usize> = inv.subgroups.iter().map(|s| s.len()).collect();
        assert_eq!(sizes, vec![1, 60, 60, 3600]);
    }
}
