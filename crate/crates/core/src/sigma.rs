//! Finite groups with an endomorphism.

use std::sync::Arc;

use crate::error::Result;
use crate::group::{Elem, FiniteGroup};
use crate::hom::{for_each_isomorphism, GroupHom};
use crate::limits::Limits;
use crate::subgroup::{subgroup_generated, Subgroup};

/// A finite group `group` together with an endomorphism `sigma`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSigmaGroup {
    group: Arc<FiniteGroup>,
    sigma: GroupHom,
}

impl FiniteSigmaGroup {
    pub fn new(group: Arc<FiniteGroup>, sigma_images: Vec<Elem>) -> Result<Self> {
        let sigma = GroupHom::new(group.clone(), group.clone(), sigma_images)?;
        Ok(FiniteSigmaGroup { group, sigma })
    }

    pub(crate) fn from_parts(group: Arc<FiniteGroup>, sigma: GroupHom) -> Self {
        FiniteSigmaGroup { group, sigma }
    }

    pub fn trivial() -> Self {
        let g = Arc::new(FiniteGroup::trivial());
        let sigma = GroupHom::identity(&g);
        FiniteSigmaGroup { group: g, sigma }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn sigma(&self) -> &GroupHom {
        &self.sigma
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    /// Least `n` with `sigma^n` trivial, if any.
    pub fn nilpotency_power(&self) -> Option<usize> {
        let mut power = GroupHom::identity(&self.group);
        for n in 0..=self.group.order() {
            if power.is_trivial() {
                return Some(n);
            }
            power = power.then(&self.sigma);
        }
        None
    }

    pub fn is_automorphism(&self) -> bool {
        self.sigma.is_bijective()
    }

    /// `{g : sigma^n(g) = 1 for some n}`, the subgroup absorbed by iterating sigma.
    pub fn nub(&self) -> Subgroup {
        let power = self.sigma.power(self.group.order());
        let elems: Vec<Elem> = self.group.elements().filter(|&g| power.image_of(g) == 0).collect();
        subgroup_generated(&self.group, &elems)
    }

    /// Isomorphism of groups intertwining the two endomorphisms.
    pub fn is_isomorphic(&self, other: &FiniteSigmaGroup, limits: &Limits) -> Result<bool> {
        let mut found = false;
        for_each_isomorphism(&self.group, &other.group, limits, |iso| {
            let ok = self
                .group
                .elements()
                .all(|g| iso.image_of(self.sigma.image_of(g)) == other.sigma.image_of(iso.image_of(g)));
            found = ok;
            !ok
        })?;
        Ok(found)
    }
}
