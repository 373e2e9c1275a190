//! Normal subshifts of a full shift over a simple group.
//!
//! Over a non-abelian simple alphabet every proper normal subshift is a
//! kernel of a shift power. Over a cyclic group of prime order it is cut
//! out by a recurrence `x[t+r] = psi(x[t], ..., x[t+r-1])`.

use std::collections::HashSet;
use std::sync::Arc;

use crate::blocks::BlockGroup;
use crate::code::SlidingBlockHom;
use crate::error::{Error, Result};
use crate::group::{product_index, Elem, FiniteGroup};
use crate::hom::GroupHom;
use crate::limits::Limits;
use crate::shift::{Comparison, GroupShift};
use crate::subgroup::{is_simple, normal_subgroup_inventory};

#[derive(Debug, Clone)]
pub enum NormalClassification {
    /// Configurations that are the identity from coordinate `r` on.
    FrobeniusKernel(usize),
    /// The graph of `psi` on `r` consecutive coordinates.
    Recurrence {
        r: usize,
        psi: GroupHom,
        /// `x -> (x[t+r] - psi(x[t..t+r]))_t`, onto the full shift with kernel `N`.
        quotient: SlidingBlockHom,
    },
}

impl NormalClassification {
    pub fn level(&self) -> usize {
        match self {
            NormalClassification::FrobeniusKernel(r) => *r,
            NormalClassification::Recurrence { r, .. } => *r,
        }
    }
}

/// Classifies a proper normal subshift `n` of the full shift over `alphabet`.
pub fn classify_normal_in_benign(alphabet: &Arc<FiniteGroup>, n: &GroupShift) -> Result<NormalClassification> {
    if !is_simple(alphabet) {
        return Err(Error::NotSimpleAlphabet);
    }
    let limits = *n.limits();
    let full = GroupShift::full(alphabet.clone(), limits);
    let n = n.trim().minimize_window()?;
    if n.alphabet() != alphabet {
        return Err(Error::NotASubshift);
    }
    if n.limit_degree() == alphabet.order() && n.compare(&full)? == Comparison::Equal {
        return Err(Error::Malformed("the whole shift is not a proper subshift".into()));
    }
    let window = n.essential_window();
    let blocks = full.closure_group(n.window_len())?;
    if !window.is_normal_in(&blocks) {
        return Err(Error::NotNormal("window is not normal in the full block group".into()));
    }
    if n.is_trivial() {
        return Ok(NormalClassification::FrobeniusKernel(0));
    }
    if !alphabet.is_abelian() {
        let r = n.is_sigma_infinitesimal()?.ok_or(Error::UnexpectedShape)?;
        let order = n.finite_sigma_group_of()?.order();
        let expected = alphabet.order().checked_pow(r as u32);
        if expected != Some(order) {
            return Err(Error::UnexpectedShape);
        }
        return Ok(NormalClassification::FrobeniusKernel(r));
    }
    recurrence(alphabet, &full, &n)
}

fn recurrence(alphabet: &Arc<FiniteGroup>, full: &GroupShift, n: &GroupShift) -> Result<NormalClassification> {
    let limits = *n.limits();
    let q = alphabet.order();
    let mut r = 1;
    loop {
        if r > limits.max_level {
            return Err(Error::Undecided {
                level: limits.max_level,
            });
        }
        let upper = n.closure_group(r)?;
        let lower = n.closure_group(r - 1)?;
        if upper.size() == lower.size() {
            if lower.size() != q.pow(r as u32) {
                return Err(Error::UnexpectedShape);
            }
            break;
        }
        r += 1;
    }
    let graph = n.closure_group(r)?;
    let orders = vec![q; r];
    let factors: Vec<&FiniteGroup> = (0..r).map(|_| alphabet.as_ref()).collect();
    let domain = Arc::new(FiniteGroup::product(&factors));
    let mut images = vec![0 as Elem; domain.order()];
    for b in graph.iter() {
        images[product_index(&orders, &b[..r]) as usize] = b[r];
    }
    let psi = GroupHom::new(domain, alphabet.clone(), images)?;
    let quotient = SlidingBlockHom::from_fn(full, full, r, |b| {
        let predicted = psi.image_of(product_index(&orders, &b[..r]));
        alphabet.mul(b[r], alphabet.inv(predicted))
    })?;
    if quotient.kernel()?.compare(n)? != Comparison::Equal || !quotient.is_surjective()? {
        return Err(Error::UnexpectedShape);
    }
    Ok(NormalClassification::Recurrence { r, psi, quotient })
}

/// Whether every block of length `depth` in the target occurs as an image,
/// by applying the code to every source block.
pub fn brute_force_surjective(code: &SlidingBlockHom, depth: usize) -> Result<bool> {
    if depth == 0 {
        return Ok(true);
    }
    let a = code.anticipation();
    let source = code.source().closure_group(depth - 1 + a)?;
    let target = code.target().closure_group(depth - 1)?;
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    for block in source.iter() {
        let image: Vec<Elem> = (0..depth).map(|t| code.rule_at(&block[t..t + a + 1])).collect();
        seen.insert(image);
    }
    let covered = target.iter().all(|b| seen.contains(b));
    Ok(covered)
}

/// Distinct subshifts of the full shift over `alphabet` cut out by a normal
/// window of length `window_len + 1`.
pub fn normal_window_subshifts(
    alphabet: &Arc<FiniteGroup>,
    window_len: usize,
    limits: &Limits,
) -> Result<Vec<GroupShift>> {
    let blocks = BlockGroup::full(alphabet, window_len + 1, limits.block_budget)?;
    let group = Arc::new(blocks.to_group(limits.group_order)?);
    let inventory = normal_subgroup_inventory(&group, limits)?;
    let mut out: Vec<GroupShift> = Vec::new();
    for sub in &inventory.subgroups {
        let window = BlockGroup::from_blocks(
            alphabet,
            window_len + 1,
            sub.elements().into_iter().map(|i| blocks.block(i as usize).to_vec()),
        );
        let shift = GroupShift::from_window(window_len, window, *limits)
            .trim()
            .minimize_window()?;
        let mut fresh = true;
        for known in &out {
            if known.compare(&shift)? == Comparison::Equal {
                fresh = false;
                break;
            }
        }
        if fresh {
            out.push(shift);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    #[test]
    fn diagonal_is_identity_recurrence() {
        let diag = GroupShift::new(c2(), 1, &[vec![1, 1]], Limits::default()).unwrap();
        match classify_normal_in_benign(&c2(), &diag).unwrap() {
            NormalClassification::Recurrence { r, psi, quotient } => {
                assert_eq!(r, 1);
                assert_eq!(psi.images(), &[0, 1]);
                assert!(brute_force_surjective(&quotient, 4).unwrap());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trivial_and_kernel_over_c2() {
        let t = GroupShift::trivial(c2(), Limits::default());
        assert!(matches!(
            classify_normal_in_benign(&c2(), &t).unwrap(),
            NormalClassification::FrobeniusKernel(0)
        ));
        let k1 = GroupShift::new(c2(), 1, &[vec![1, 0]], Limits::default()).unwrap();
        match classify_normal_in_benign(&c2(), &k1).unwrap() {
            NormalClassification::Recurrence { r, psi, .. } => {
                assert_eq!(r, 1);
                assert!(psi.is_trivial());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_non_simple_and_whole() {
        let c4 = Arc::new(FiniteGroup::cyclic(4));
        let t = GroupShift::trivial(c4.clone(), Limits::default());
        assert_eq!(
            classify_normal_in_benign(&c4, &t).unwrap_err(),
            Error::NotSimpleAlphabet
        );
        let full = GroupShift::full(c2(), Limits::default());
        assert!(classify_normal_in_benign(&c2(), &full).is_err());
    }

    #[test]
    fn c2_windows() {
        let subs = normal_window_subshifts(&c2(), 1, &Limits::default()).unwrap();
        let full = GroupShift::full(c2(), Limits::default());
        for s in &subs {
            if s.compare(&full).unwrap() != Comparison::Equal {
                assert_eq!(s.limit_degree(), 1);
                classify_normal_in_benign(&c2(), s).unwrap();
            }
        }
        // trivial, kernel of the shift, diagonal, full
        assert_eq!(subs.len(), 4);
    }

    #[test]
    fn surjectivity_check_detects_failure() {
        let full = GroupShift::full(c2(), Limits::default());
        let zero = SlidingBlockHom::from_fn(&full, &full, 0, |_| 0).unwrap();
        assert!(!brute_force_surjective(&zero, 2).unwrap());
        assert!(brute_force_surjective(&SlidingBlockHom::identity(&full).unwrap(), 3).unwrap());
    }
}
