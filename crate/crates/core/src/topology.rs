//! Connected components of the shift space under the shift map.
//!
//! At level `i` the blocks of `G[i]` form a digraph with an edge from the
//! prefix to the suffix of every block of `G[i+1]`. Its weak components are
//! the clopen sets of level `i` that are closed under the shift and its
//! preimage. Counts stabilize; a level is accepted only when the identity
//! class yields a certified identity component.

use std::collections::HashMap;

use petgraph::unionfind::UnionFind;

use crate::code::{quotient_shift, SlidingBlockHom};
use crate::error::{Error, Result};
use crate::shift::{Comparison, GroupShift};
use crate::sigma::FiniteSigmaGroup;
use crate::BlockGroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentPartition {
    pub level: usize,
    /// Block indices of `G[level]`, each class sorted, classes ordered by least member.
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub identity_class: usize,
}

impl ComponentPartition {
    pub fn count(&self) -> usize {
        self.classes.len()
    }

    fn from_labels(level: usize, labels: &[usize]) -> Self {
        let mut renumber: HashMap<usize, usize> = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut class_of = Vec::with_capacity(labels.len());
        for (i, &l) in labels.iter().enumerate() {
            let next = classes.len();
            let c = *renumber.entry(l).or_insert(next);
            if c == classes.len() {
                classes.push(Vec::new());
            }
            classes[c].push(i);
            class_of.push(c);
        }
        let identity_class = class_of.first().copied().unwrap_or(0);
        ComponentPartition {
            level,
            classes,
            class_of,
            identity_class,
        }
    }
}

/// Evidence that a candidate identity component is the right one.
#[derive(Debug, Clone)]
pub struct ComponentCertificate {
    pub level: usize,
    pub pi0: FiniteSigmaGroup,
    pub quotient_finite: bool,
    pub sigma_bijective: bool,
    pub kernel_connected: bool,
}

impl ComponentCertificate {
    pub fn is_accepted(&self) -> bool {
        self.quotient_finite && self.sigma_bijective && self.kernel_connected
    }
}

/// Everything learned while certifying the component structure.
#[derive(Debug, Clone)]
pub struct Components {
    pub count: usize,
    pub partition: ComponentPartition,
    pub identity_component: GroupShift,
    pub quotient: GroupShift,
    pub quotient_code: SlidingBlockHom,
    pub certificate: ComponentCertificate,
}

/// Weak components of the level-`i` block digraph.
pub fn component_partition(shift: &GroupShift, level: usize) -> Result<ComponentPartition> {
    let blocks = shift.closure_group(level)?;
    let next = shift.closure_group(level + 1)?;
    let mut uf: UnionFind<usize> = UnionFind::new(blocks.size());
    for c in next.iter() {
        let a = blocks.index_of(&c[..level + 1]).expect("prefix in closure");
        let b = blocks.index_of(&c[1..]).expect("suffix in closure");
        uf.union(a, b);
    }
    Ok(ComponentPartition::from_labels(level, &uf.into_labeling()))
}

/// Partition of `0..map.len()` generated by `x ~ map[x]`.
pub fn finite_space_sigma_components(map: &[usize]) -> Vec<Vec<usize>> {
    let mut uf: UnionFind<usize> = UnionFind::new(map.len());
    for (x, &y) in map.iter().enumerate() {
        uf.union(x, y);
    }
    ComponentPartition::from_labels(0, &uf.into_labeling()).classes
}

/// Components of a finite group under its endomorphism.
pub fn sigma_group_components(group: &FiniteSigmaGroup) -> Vec<Vec<usize>> {
    let map: Vec<usize> = group.sigma().images().iter().map(|&x| x as usize).collect();
    finite_space_sigma_components(&map)
}

/// Closure of the union of all shift-power kernels.
///
/// A length-`r` state lies in the closure iff it has a path to the identity
/// state, so the closure is cut out by the windows ending in such states.
pub fn nub_closure(shift: &GroupShift) -> Result<GroupShift> {
    let p = shift.trim();
    let r = p.window_len();
    if r == 0 {
        return Ok(p);
    }
    let window = p.essential_window();
    let states = p.closure_group(r - 1)?;
    let mut predecessors: Vec<Vec<usize>> = vec![Vec::new(); states.size()];
    for w in window.iter() {
        let from = states.index_of(&w[..r]).expect("window head is a state");
        let to = states.index_of(&w[1..]).expect("window tail is a state");
        predecessors[to].push(from);
    }
    let mut reach = vec![false; states.size()];
    reach[0] = true;
    let mut stack = vec![0usize];
    while let Some(s) = stack.pop() {
        for &t in &predecessors[s] {
            if !reach[t] {
                reach[t] = true;
                stack.push(t);
            }
        }
    }
    let kept = window.filter(|w| reach[states.index_of(&w[1..]).expect("state")]);
    Ok(GroupShift::from_window(r, kept, *p.limits()).trim())
}

fn certify(shift: &GroupShift, partition: &ComponentPartition) -> Result<Option<Components>> {
    let level = partition.level;
    let blocks = shift.closure_group(level)?;
    let class = &partition.classes[partition.identity_class];
    let candidate = BlockGroup::from_blocks(
        shift.alphabet(),
        level + 1,
        class.iter().map(|&i| blocks.block(i).to_vec()),
    );
    if candidate.check_subgroup().is_err() {
        return Ok(None);
    }
    let k = GroupShift::from_window(level, candidate, *shift.limits())
        .trim()
        .minimize_window()?;
    let (quotient, quotient_code) = match quotient_shift(shift, &k) {
        Ok(pair) => pair,
        Err(Error::NotNormal(_)) | Err(Error::DepthExceeded { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let quotient_finite = quotient.limit_degree() == 1;
    if !quotient_finite {
        return Ok(None);
    }
    let pi0 = quotient.finite_sigma_group_of()?;
    let sigma_bijective = pi0.is_automorphism();
    let kernel_connected = nub_closure(&k)?.compare(&k)? == Comparison::Equal;
    let certificate = ComponentCertificate {
        level,
        pi0,
        quotient_finite,
        sigma_bijective,
        kernel_connected,
    };
    if !certificate.is_accepted() || sigma_group_components(&certificate.pi0).len() != partition.count() {
        return Ok(None);
    }
    if nub_closure(shift)?.compare(&k)? != Comparison::Equal {
        return Err(Error::InconsistentCertificate(format!(
            "kernel closure differs from the identity component certified at level {level}"
        )));
    }
    Ok(Some(Components {
        count: partition.count(),
        partition: partition.clone(),
        identity_component: k,
        quotient,
        quotient_code,
        certificate,
    }))
}

/// Certified component structure, searching levels up to `max_level`.
///
/// Works on the presentation with the shortest window, so the partition
/// levels refer to that presentation.
pub fn analyze_components(shift: &GroupShift, max_level: usize) -> Result<Components> {
    let p = shift.trim().minimize_window()?;
    let start = 2 * (p.window_len() + 1);
    let mut partitions: HashMap<usize, ComponentPartition> = HashMap::new();
    let count_at = |level: usize, partitions: &mut HashMap<usize, ComponentPartition>| -> Result<usize> {
        if let Some(part) = partitions.get(&level) {
            return Ok(part.count());
        }
        let part = component_partition(&p, level)?;
        let n = part.count();
        partitions.insert(level, part);
        Ok(n)
    };
    for level in start..=max_level {
        let n = count_at(level, &mut partitions)?;
        if count_at(level + 1, &mut partitions)? != n || count_at(level + 2, &mut partitions)? != n {
            continue;
        }
        if let Some(found) = certify(&p, &partitions[&level])? {
            return Ok(found);
        }
        partitions.retain(|&l, _| l > level);
    }
    Err(Error::Undecided { level: max_level })
}

/// Number of components, with the certificate.
pub fn sigma_components(shift: &GroupShift) -> Result<(usize, ComponentCertificate)> {
    let c = analyze_components(shift, shift.limits().max_level)?;
    Ok((c.count, c.certificate))
}

/// The identity component, with the certificate.
pub fn identity_component(shift: &GroupShift) -> Result<(GroupShift, ComponentCertificate)> {
    let c = analyze_components(shift, shift.limits().max_level)?;
    Ok((c.identity_component, c.certificate))
}

/// The component group: the quotient by the identity component as a finite group with automorphism.
pub fn pi0(shift: &GroupShift) -> Result<FiniteSigmaGroup> {
    Ok(analyze_components(shift, shift.limits().max_level)?.certificate.pi0)
}
