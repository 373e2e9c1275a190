//! Finite groups carrying an action of a finite quotient `D` of the Galois
//! group together with a compatible endomorphism.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::hom::{for_each_isomorphism, GroupHom};
use crate::limits::Limits;
use crate::subgroup::normal_subgroup_inventory;
use crate::topology::finite_space_sigma_components;

/// A finite group `D` with an endomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaContext {
    delta: Arc<FiniteGroup>,
    sigma_delta: GroupHom,
}

impl DeltaContext {
    pub fn new(delta: Arc<FiniteGroup>, sigma_images: Vec<Elem>) -> Result<Self> {
        let sigma_delta = GroupHom::new(delta.clone(), delta.clone(), sigma_images)?;
        Ok(DeltaContext { delta, sigma_delta })
    }

    pub fn trivial() -> Self {
        let delta = Arc::new(FiniteGroup::trivial());
        DeltaContext {
            sigma_delta: GroupHom::identity(&delta),
            delta,
        }
    }

    pub fn delta(&self) -> &Arc<FiniteGroup> {
        &self.delta
    }

    pub fn sigma_delta(&self) -> &GroupHom {
        &self.sigma_delta
    }

    /// `(i0, p)` with `p >= 1` minimal such that the `(i0 + p)`-th power of
    /// the endomorphism equals the `i0`-th.
    pub fn periodicity(&self) -> (usize, usize) {
        let mut seen: Vec<GroupHom> = vec![GroupHom::identity(&self.delta)];
        loop {
            let next = seen.last().expect("non-empty").then(&self.sigma_delta);
            if let Some(i0) = seen.iter().position(|h| *h == next) {
                return (i0, seen.len() - i0);
            }
            seen.push(next);
        }
    }
}

/// A finite group with an action of `D` by automorphisms and a compatible
/// endomorphism: `sigma(t.g) = sigma_delta(t).sigma(g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaGroup {
    context: DeltaContext,
    group: Arc<FiniteGroup>,
    /// `action[t][g]` is `t.g`.
    action: Vec<Vec<Elem>>,
    sigma: GroupHom,
}

impl DeltaGroup {
    pub fn new(
        context: DeltaContext,
        group: Arc<FiniteGroup>,
        action: Vec<Vec<Elem>>,
        sigma_images: Vec<Elem>,
    ) -> Result<Self> {
        let sigma = GroupHom::new(group.clone(), group.clone(), sigma_images)?;
        let built = DeltaGroup {
            context,
            group,
            action,
            sigma,
        };
        built.validate()?;
        Ok(built)
    }

    fn validate(&self) -> Result<()> {
        let delta = &self.context.delta;
        let g = &self.group;
        if self.action.len() != delta.order() {
            return Err(Error::IncompatibleAction(format!(
                "{} action rows for a quotient of order {}",
                self.action.len(),
                delta.order()
            )));
        }
        for (t, row) in self.action.iter().enumerate() {
            let auto = GroupHom::new(g.clone(), g.clone(), row.clone())
                .map_err(|_| Error::IncompatibleAction(format!("element {t} does not act by a homomorphism")))?;
            if !auto.is_bijective() {
                return Err(Error::IncompatibleAction(format!(
                    "element {t} does not act bijectively"
                )));
            }
        }
        if self.action[0].iter().enumerate().any(|(x, &y)| x as Elem != y) {
            return Err(Error::IncompatibleAction("identity acts non-trivially".into()));
        }
        for s in delta.elements() {
            for t in delta.elements() {
                let st = delta.mul(s, t);
                for x in g.elements() {
                    if self.act(st, x) != self.act(s, self.act(t, x)) {
                        return Err(Error::IncompatibleAction(format!(
                            "action of {s}*{t} is not a composite"
                        )));
                    }
                }
            }
        }
        for t in delta.elements() {
            let st = self.context.sigma_delta.image_of(t);
            for x in g.elements() {
                if self.sigma.image_of(self.act(t, x)) != self.act(st, self.sigma.image_of(x)) {
                    return Err(Error::IncompatibleAction(format!(
                        "endomorphism does not intertwine the action at ({t}, {x})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn context(&self) -> &DeltaContext {
        &self.context
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn sigma(&self) -> &GroupHom {
        &self.sigma
    }

    pub fn act(&self, t: Elem, x: Elem) -> Elem {
        self.action[t as usize][x as usize]
    }

    pub fn has_trivial_action(&self) -> bool {
        self.action
            .iter()
            .all(|row| row.iter().enumerate().all(|(x, &y)| x as Elem == y))
    }

    /// The same group and endomorphism, with `t` acting as `sigma_delta(t)` did.
    pub fn twist(&self) -> Result<DeltaGroup> {
        let sd = &self.context.sigma_delta;
        let action = self
            .context
            .delta
            .elements()
            .map(|t| self.action[sd.image_of(t) as usize].clone())
            .collect();
        let twisted = DeltaGroup {
            context: self.context.clone(),
            group: self.group.clone(),
            action,
            sigma: self.sigma.clone(),
        };
        twisted.validate()?;
        Ok(twisted)
    }

    /// The `n`-fold twist.
    pub fn twist_n(&self, n: usize) -> Result<DeltaGroup> {
        let mut out = self.clone();
        for _ in 0..n {
            out = out.twist()?;
        }
        Ok(out)
    }

    /// No normal subgroup other than the trivial one and the whole group is
    /// stable under the action.
    pub fn is_delta_simple(&self, limits: &Limits) -> Result<bool> {
        if self.group.order() == 1 {
            return Ok(false);
        }
        let inventory = normal_subgroup_inventory(&self.group, limits)?;
        Ok(!inventory.subgroups.iter().any(|n| {
            !n.is_trivial()
                && !n.is_whole()
                && self
                    .context
                    .delta
                    .elements()
                    .all(|t| n.elements().iter().all(|&x| n.contains(self.act(t, x))))
        }))
    }

    /// Every twist is simple as a group with action.
    pub fn is_sigma_stably_simple(&self, limits: &Limits) -> Result<bool> {
        let (i0, p) = self.context.periodicity();
        let mut current = self.clone();
        for _ in 0..i0 + p {
            if !current.is_delta_simple(limits)? {
                return Ok(false);
            }
            current = current.twist()?;
        }
        Ok(true)
    }

    /// A group isomorphism intertwining the two actions.
    pub fn is_equivariantly_isomorphic(&self, other: &DeltaGroup, limits: &Limits) -> Result<bool> {
        if self.context != other.context {
            return Ok(false);
        }
        let mut found = false;
        for_each_isomorphism(&self.group, &other.group, limits, |iso| {
            found = self.context.delta.elements().all(|t| {
                self.group
                    .elements()
                    .all(|x| iso.image_of(self.act(t, x)) == other.act(t, iso.image_of(x)))
            });
            !found
        })?;
        Ok(found)
    }
}

/// Some twist of `a` is equivariantly isomorphic to some twist of `b`,
/// searching twist indices below the periodicity bound of the context.
pub fn sigma_stably_equivalent(a: &DeltaGroup, b: &DeltaGroup, limits: &Limits) -> Result<bool> {
    if a.context != b.context || a.group.order() != b.group.order() {
        return Ok(false);
    }
    let (i0, p) = a.context.periodicity();
    let bound = i0 + p;
    let twists_a: Vec<DeltaGroup> = (0..bound).map(|i| a.twist_n(i)).collect::<Result<_>>()?;
    let twists_b: Vec<DeltaGroup> = (0..bound).map(|i| b.twist_n(i)).collect::<Result<_>>()?;
    for ta in &twists_a {
        for tb in &twists_b {
            if ta.is_equivariantly_isomorphic(tb, limits)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Components of a finite set with a self-map after passing to the orbits
/// of `D`. `action[t][s]` is `t.s`; the map must satisfy
/// `sigma(t.s) = sigma_delta(t).sigma(s)`.
pub fn components_over_base(sigma: &[usize], context: &DeltaContext, action: &[Vec<usize>]) -> Result<usize> {
    let n = sigma.len();
    if sigma.iter().any(|&y| y >= n) {
        return Err(Error::Malformed("self-map leaves the set".into()));
    }
    if action.len() != context.delta.order() || action.iter().any(|row| row.len() != n || row.iter().any(|&y| y >= n)) {
        return Err(Error::IncompatibleAction("action table has the wrong shape".into()));
    }
    for t in context.delta.elements() {
        let st = context.sigma_delta.image_of(t) as usize;
        for s in 0..n {
            if sigma[action[t as usize][s]] != action[st][sigma[s]] {
                return Err(Error::IncompatibleAction(format!(
                    "self-map does not intertwine the action at ({t}, {s})"
                )));
            }
        }
    }
    let mut orbit_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for s in 0..n {
        if orbit_of[s] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(s);
        for row in action {
            orbit_of[row[s]] = id;
        }
    }
    let induced: Vec<usize> = reps.iter().map(|&s| orbit_of[sigma[s]]).collect();
    Ok(finite_space_sigma_components(&induced).len())
}
