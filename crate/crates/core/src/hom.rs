//! Group homomorphisms and isomorphism search.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::limits::Limits;
use crate::subgroup::{subgroup_generated, Subgroup};

#[derive(Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    images: Vec<Elem>,
}

impl std::fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupHom{:?}", self.images)
    }
}

impl GroupHom {
    /// Checks the homomorphism law on every pair.
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, images: Vec<Elem>) -> Result<Self> {
        if images.len() != source.order() {
            return Err(Error::Malformed(format!(
                "hom has {} images for a group of order {}",
                images.len(),
                source.order()
            )));
        }
        if images.iter().any(|&x| x as usize >= target.order()) {
            return Err(Error::Malformed("hom image out of range".into()));
        }
        let hom = GroupHom::new_unchecked(source, target, images);
        if !hom.respects_products() {
            return Err(Error::Malformed("map is not a homomorphism".into()));
        }
        Ok(hom)
    }

    pub(crate) fn new_unchecked(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, images: Vec<Elem>) -> Self {
        GroupHom { source, target, images }
    }

    pub fn identity(group: &Arc<FiniteGroup>) -> Self {
        GroupHom::new_unchecked(group.clone(), group.clone(), group.elements().collect())
    }

    /// The map sending everything to the identity.
    pub fn zero(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Self {
        GroupHom::new_unchecked(source.clone(), target.clone(), vec![0; source.order()])
    }

    fn respects_products(&self) -> bool {
        if self.images[0] != 0 {
            return false;
        }
        let gens = self.source.generators();
        self.source.elements().all(|x| {
            gens.iter().all(|&g| {
                self.images[self.source.mul(x, g) as usize]
                    == self.target.mul(self.images[x as usize], self.images[g as usize])
            })
        })
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    #[inline]
    pub fn image_of(&self, g: Elem) -> Elem {
        self.images[g as usize]
    }

    /// `other` after `self`.
    pub fn then(&self, other: &GroupHom) -> GroupHom {
        let images = self.images.iter().map(|&x| other.image_of(x)).collect();
        GroupHom::new_unchecked(self.source.clone(), other.target.clone(), images)
    }

    pub fn kernel(&self) -> Subgroup {
        let elems: Vec<Elem> = self
            .source
            .elements()
            .filter(|&g| self.images[g as usize] == 0)
            .collect();
        subgroup_generated(&self.source, &elems)
    }

    pub fn image(&self) -> Subgroup {
        subgroup_generated(&self.target, &self.images)
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.target.order()];
        if self.source.order() != self.target.order() {
            return false;
        }
        self.images
            .iter()
            .all(|&x| !std::mem::replace(&mut seen[x as usize], true))
    }

    /// `self` composed with itself `k` times (endomorphisms only).
    pub fn power(&self, k: usize) -> GroupHom {
        let mut acc = GroupHom::identity(&self.source);
        for _ in 0..k {
            acc = acc.then(self);
        }
        acc
    }

    pub fn is_trivial(&self) -> bool {
        self.images.iter().all(|&x| x == 0)
    }

    /// Inverse of a bijective homomorphism.
    pub fn inverse(&self) -> Option<GroupHom> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.images.len()];
        for (g, &x) in self.images.iter().enumerate() {
            inv[x as usize] = g as Elem;
        }
        Some(GroupHom::new_unchecked(self.target.clone(), self.source.clone(), inv))
    }
}

/// Enumerates homomorphisms `source -> target` by backtracking on a greedy
/// generating set. `visit` returns `false` to stop early.
///
/// With `injective_orders` the images of generators must have the same
/// element order (isomorphism search); otherwise the image order must divide.
fn search_homs<F>(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>, injective_orders: bool, mut visit: F)
where
    F: FnMut(GroupHom) -> bool,
{
    let gens = source.generators();
    let target_orders: Vec<usize> = target.elements().map(|h| target.element_order(h)).collect();
    let candidates: Vec<Vec<Elem>> = gens
        .iter()
        .map(|&g| {
            let o = source.element_order(g);
            target
                .elements()
                .filter(|&h| {
                    let t = target_orders[h as usize];
                    if injective_orders {
                        t == o
                    } else {
                        o.is_multiple_of(t)
                    }
                })
                .collect()
        })
        .collect();
    let mut choice = vec![0usize; gens.len()];
    if candidates.iter().any(|c| c.is_empty()) {
        return;
    }
    loop {
        let assignment: Vec<Elem> = choice.iter().enumerate().map(|(k, &c)| candidates[k][c]).collect();
        if let Some(images) = extend_on_generators(source, target, &gens, &assignment) {
            if !visit(GroupHom::new_unchecked(source.clone(), target.clone(), images)) {
                return;
            }
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == choice.len() {
                return;
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Extends generator images along the Cayley graph; `None` when inconsistent.
fn extend_on_generators(
    source: &FiniteGroup,
    target: &FiniteGroup,
    gens: &[Elem],
    assignment: &[Elem],
) -> Option<Vec<Elem>> {
    let mut images = vec![u32::MAX; source.order()];
    images[0] = 0;
    let mut queue = VecDeque::from([0 as Elem]);
    while let Some(x) = queue.pop_front() {
        for (k, &g) in gens.iter().enumerate() {
            let y = source.mul(x, g);
            let fy = target.mul(images[x as usize], assignment[k]);
            if images[y as usize] == u32::MAX {
                images[y as usize] = fy;
                queue.push_back(y);
            } else if images[y as usize] != fy {
                return None;
            }
        }
    }
    Some(images)
}

/// Some isomorphism `g -> h`, if one exists.
pub fn find_isomorphism(g: &Arc<FiniteGroup>, h: &Arc<FiniteGroup>, limits: &Limits) -> Result<Option<GroupHom>> {
    let mut result = None;
    for_each_isomorphism(g, h, limits, |iso| {
        result = Some(iso);
        false
    })?;
    Ok(result)
}

/// Visits isomorphisms `g -> h` until `visit` returns `false`.
pub fn for_each_isomorphism<F>(g: &Arc<FiniteGroup>, h: &Arc<FiniteGroup>, limits: &Limits, mut visit: F) -> Result<()>
where
    F: FnMut(GroupHom) -> bool,
{
    for grp in [g, h] {
        if grp.order() > limits.enumeration {
            return Err(Error::SizeLimit {
                what: "isomorphism search",
                needed: grp.order(),
                limit: limits.enumeration,
            });
        }
    }
    if g.order() != h.order() || g.order_census() != h.order_census() {
        return Ok(());
    }
    search_homs(g, h, true, |hom| if hom.is_bijective() { visit(hom) } else { true });
    Ok(())
}

/// All homomorphisms `source -> target`.
pub fn all_homomorphisms(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Vec<GroupHom> {
    let mut out = Vec::new();
    search_homs(source, target, false, |hom| {
        out.push(hom);
        true
    });
    out
}
