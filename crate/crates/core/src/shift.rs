//! Group shifts of finite type.
//!
//! A [`GroupShift`] over an alphabet group `H` with window length `r` and
//! window subgroup `W <= H^(r+1)` presents the one-sided configuration space
//! `X = { x in H^N : every length-(r+1) window of x lies in W }`. The shift
//! map drops the first coordinate.
//!
//! Every query runs on the essential window `W*`, the windows that actually
//! occur in configurations. The level-`i` closure `G[i]` is the group of
//! length-`(i+1)` prefixes of configurations; levels are computed on demand
//! and cached.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::blocks::BlockGroup;
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::hom::GroupHom;
use crate::limits::Limits;
use crate::sigma::FiniteSigmaGroup;

#[derive(Clone)]
pub struct GroupShift {
    inner: Arc<ShiftInner>,
}

struct ShiftInner {
    alphabet: Arc<FiniteGroup>,
    window_len: usize,
    window: BlockGroup,
    trimmed: bool,
    limits: Limits,
    essential: OnceLock<BlockGroup>,
    successors: OnceLock<HashMap<Vec<Elem>, Vec<Elem>>>,
    levels: RwLock<Vec<Arc<BlockGroup>>>,
}

impl std::fmt::Debug for GroupShift {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GroupShift(|H| = {}, r = {}, |W| = {})",
            self.alphabet().order(),
            self.window_len(),
            self.window().size()
        )
    }
}

/// Outcome of [`GroupShift::compare`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    /// `self` is strictly contained in the other shift.
    Subset,
    /// `self` strictly contains the other shift.
    Superset,
    Incomparable,
}

impl GroupShift {
    /// Presentation whose window is the subgroup generated by `generators`.
    pub fn new(
        alphabet: Arc<FiniteGroup>,
        window_len: usize,
        generators: &[Vec<Elem>],
        limits: Limits,
    ) -> Result<Self> {
        let window = BlockGroup::generated(&alphabet, window_len + 1, generators, limits.block_budget)?;
        Ok(GroupShift::from_window(window_len, window, limits))
    }

    /// Presentation with an explicit window subgroup.
    pub fn from_window(window_len: usize, window: BlockGroup, limits: Limits) -> Self {
        assert_eq!(window.block_len(), window_len + 1, "window block length");
        GroupShift::build(window_len, window, false, limits)
    }

    fn build(window_len: usize, window: BlockGroup, trimmed: bool, limits: Limits) -> Self {
        GroupShift {
            inner: Arc::new(ShiftInner {
                alphabet: window.alphabet().clone(),
                window_len,
                window,
                trimmed,
                limits,
                essential: OnceLock::new(),
                successors: OnceLock::new(),
                levels: RwLock::new(Vec::new()),
            }),
        }
    }

    /// The full shift `H^N`.
    pub fn full(alphabet: Arc<FiniteGroup>, limits: Limits) -> Self {
        let window = BlockGroup::from_blocks(&alphabet, 1, alphabet.elements().map(|g| vec![g]));
        GroupShift::build(0, window, true, limits)
    }

    /// The full shift over a subgroup of the alphabet, given by its elements.
    pub fn full_over(alphabet: Arc<FiniteGroup>, elements: &[Elem], limits: Limits) -> Result<Self> {
        let gens: Vec<Vec<Elem>> = elements.iter().map(|&g| vec![g]).collect();
        GroupShift::new(alphabet, 0, &gens, limits)
    }

    /// The shift consisting of the identity configuration only.
    pub fn trivial(alphabet: Arc<FiniteGroup>, limits: Limits) -> Self {
        let window = BlockGroup::trivial(&alphabet, 1);
        GroupShift::build(0, window, true, limits)
    }

    /// A finite group with endomorphism as the shift of its orbits: window
    /// length one, window the graph of the endomorphism.
    pub fn from_sigma_group(group: &FiniteSigmaGroup, limits: Limits) -> Self {
        let alphabet = group.group().clone();
        let pairs = alphabet.elements().map(|g| vec![g, group.sigma().image_of(g)]);
        let window = BlockGroup::from_blocks(&alphabet, 2, pairs);
        GroupShift::build(1, window, true, limits)
    }

    pub fn alphabet(&self) -> &Arc<FiniteGroup> {
        &self.inner.alphabet
    }

    pub fn window_len(&self) -> usize {
        self.inner.window_len
    }

    /// The window as given (before trimming).
    pub fn window(&self) -> &BlockGroup {
        &self.inner.window
    }

    pub fn is_trimmed(&self) -> bool {
        self.inner.trimmed
    }

    pub fn limits(&self) -> &Limits {
        &self.inner.limits
    }

    /// A copy of this presentation carrying different limits.
    pub fn with_limits(&self, limits: Limits) -> Self {
        GroupShift::build(self.window_len(), self.window().clone(), self.is_trimmed(), limits)
    }

    /// Essential window: iterate `T -> { w in T : w has an overlapping successor in T }`.
    pub fn essential_window(&self) -> &BlockGroup {
        self.inner.essential.get_or_init(|| {
            let r = self.window_len();
            let mut current = self.inner.window.clone();
            if self.inner.trimmed || r == 0 {
                return current;
            }
            loop {
                let heads = current.prefix(r);
                let next = current.filter(|w| heads.contains(&w[1..]));
                if next.size() == current.size() {
                    return current;
                }
                current = next;
            }
        })
    }

    /// The same configuration space presented by its essential window.
    pub fn trim(&self) -> GroupShift {
        if self.is_trimmed() {
            return self.clone();
        }
        GroupShift::build(self.window_len(), self.essential_window().clone(), true, *self.limits())
    }

    fn successors(&self) -> &HashMap<Vec<Elem>, Vec<Elem>> {
        self.inner.successors.get_or_init(|| {
            let r = self.window_len();
            let mut map: HashMap<Vec<Elem>, Vec<Elem>> = HashMap::new();
            for w in self.essential_window().iter() {
                map.entry(w[..r].to_vec()).or_default().push(w[r]);
            }
            for v in map.values_mut() {
                v.sort_unstable();
            }
            map
        })
    }

    /// Limit degree: the number of `h` with `(1, ..., 1, h)` in the essential window.
    pub fn limit_degree(&self) -> usize {
        self.essential_window().last_coordinate_kernel()
    }

    /// The level-`i` closure group `G[i] <= H^(i+1)`.
    pub fn closure_group(&self, level: usize) -> Result<Arc<BlockGroup>> {
        {
            let levels = self.inner.levels.read().expect("level cache poisoned");
            if let Some(g) = levels.get(level) {
                return Ok(g.clone());
            }
        }
        let mut levels = self.inner.levels.write().expect("level cache poisoned");
        let r = self.window_len();
        if levels.is_empty() {
            let top = self.essential_window().clone();
            let mut below: Vec<Arc<BlockGroup>> = (0..r).map(|i| Arc::new(top.prefix(i + 1))).collect();
            below.push(Arc::new(top));
            *levels = below;
        }
        let budget = self.limits().block_budget;
        let ld = self.limit_degree();
        while levels.len() <= level {
            let last = levels.last().expect("non-empty").clone();
            let needed = last.size().saturating_mul(ld);
            if needed > budget {
                return Err(Error::SizeLimit {
                    what: "block enumeration",
                    needed,
                    limit: budget,
                });
            }
            let len = last.block_len();
            let succ = self.successors();
            let mut data = Vec::with_capacity(needed * (len + 1));
            for b in last.iter() {
                if let Some(next) = succ.get(&b[len - r..]) {
                    for &h in next {
                        data.extend_from_slice(b);
                        data.push(h);
                    }
                }
            }
            levels.push(Arc::new(BlockGroup::from_sorted_data(self.alphabet(), len + 1, data)));
        }
        Ok(levels[level].clone())
    }

    /// Sizes of the kernels of `G[i] -> G[i-1]` for `i = 1..=up_to`.
    pub fn kernel_sizes(&self, up_to: usize) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(up_to);
        for i in 1..=up_to {
            out.push(self.closure_group(i)?.size() / self.closure_group(i - 1)?.size());
        }
        Ok(out)
    }

    /// Whether every window of `block` occurs; short blocks are checked against `G[len-1]`.
    pub fn is_allowed(&self, block: &[Elem]) -> Result<bool> {
        let r = self.window_len();
        if block.is_empty() {
            return Ok(true);
        }
        if block.len() <= r {
            return Ok(self.closure_group(block.len() - 1)?.contains(block));
        }
        let w = self.essential_window();
        Ok(block.windows(r + 1).all(|win| w.contains(win)))
    }

    /// Configurations that are the identity from coordinate `m` on, with the
    /// shift as endomorphism.
    pub fn frobenius_kernel(&self, m: usize) -> Result<FiniteSigmaGroup> {
        if m == 0 {
            return Ok(FiniteSigmaGroup::trivial());
        }
        let r = self.window_len();
        let prefixes = self.closure_group(m - 1)?;
        let kept = prefixes.filter(|b| {
            let mut ext = b.to_vec();
            ext.extend(std::iter::repeat_n(0, r));
            self.is_allowed(&ext).unwrap_or(false)
        });
        let group = Arc::new(kept.to_group(self.limits().group_order)?);
        let images: Vec<Elem> = kept
            .iter()
            .map(|b| {
                let mut shifted = b[1..].to_vec();
                shifted.push(0);
                kept.index_of(&shifted).expect("shift of a tail-identity block") as Elem
            })
            .collect();
        let sigma = GroupHom::new(group.clone(), group.clone(), images)?;
        Ok(FiniteSigmaGroup::from_parts(group, sigma))
    }

    /// First level `L` at which `|G[L+1]| = |G[L]|`, for limit degree one.
    pub(crate) fn stable_level(&self) -> Result<usize> {
        let ld = self.limit_degree();
        if ld != 1 {
            return Err(Error::NotFinite(ld));
        }
        let mut level = 0;
        while self.closure_group(level + 1)?.size() != self.closure_group(level)?.size() {
            level += 1;
        }
        Ok(level)
    }

    /// The finite group of configurations of a limit-degree-one shift with
    /// the shift as endomorphism.
    pub fn finite_sigma_group_of(&self) -> Result<FiniteSigmaGroup> {
        let level = self.stable_level()?;
        let base = self.closure_group(level)?;
        let next = self.closure_group(level + 1)?;
        let mut images = vec![0 as Elem; base.size()];
        for c in next.iter() {
            let from = base.index_of(&c[..level + 1]).expect("prefix in closure");
            let to = base.index_of(&c[1..]).expect("suffix in closure");
            images[from] = to as Elem;
        }
        let group = Arc::new(base.to_group(self.limits().group_order)?);
        let sigma = GroupHom::new(group.clone(), group.clone(), images)?;
        Ok(FiniteSigmaGroup::from_parts(group, sigma))
    }

    /// Least `n` such that the `n`-fold shift kills every configuration.
    pub fn is_sigma_infinitesimal(&self) -> Result<Option<usize>> {
        if self.limit_degree() != 1 {
            return Ok(None);
        }
        Ok(self.finite_sigma_group_of()?.nilpotency_power())
    }

    /// `G[0]` when the shift is the full shift over it (limit degree equals `|G[0]|`).
    pub fn recognize_full_shift(&self) -> Result<Option<FiniteGroup>> {
        let level0 = self.closure_group(0)?;
        if self.limit_degree() != level0.size() {
            return Ok(None);
        }
        Ok(Some(level0.to_group(self.limits().group_order)?))
    }

    /// The alphabet elements of `G[0]` when the shift is full over them.
    pub fn full_shift_support(&self) -> Result<Option<Vec<Elem>>> {
        let level0 = self.closure_group(0)?;
        if self.limit_degree() != level0.size() {
            return Ok(None);
        }
        Ok(Some(level0.iter().map(|b| b[0]).collect()))
    }

    fn same_alphabet(&self, other: &GroupShift) -> Result<()> {
        if self.alphabet() != other.alphabet() {
            return Err(Error::Malformed("shifts have different alphabets".into()));
        }
        Ok(())
    }

    /// `self` is contained in `other`.
    pub fn is_subshift_of(&self, other: &GroupShift) -> Result<bool> {
        self.same_alphabet(other)?;
        let level = other.window_len();
        Ok(self.closure_group(level)?.is_subset_of(other.essential_window()))
    }

    /// Exact containment comparison of two shifts over the same alphabet.
    pub fn compare(&self, other: &GroupShift) -> Result<Comparison> {
        let sub = self.is_subshift_of(other)?;
        let sup = other.is_subshift_of(self)?;
        Ok(match (sub, sup) {
            (true, true) => Comparison::Equal,
            (true, false) => Comparison::Subset,
            (false, true) => Comparison::Superset,
            (false, false) => Comparison::Incomparable,
        })
    }

    /// An equivalent trimmed presentation with the least possible window length.
    pub fn minimize_window(&self) -> Result<GroupShift> {
        let r = self.window_len();
        let target = self.closure_group(r)?.size();
        for shorter in 0..r {
            let window = (*self.closure_group(shorter)?).clone();
            let candidate = GroupShift::from_window(shorter, window, *self.limits()).trim();
            // past the window length every level multiplies the size by ld
            let base = candidate.closure_group(shorter)?.size();
            let predicted = (shorter..r).try_fold(base, |acc, _| acc.checked_mul(candidate.limit_degree()));
            if predicted == Some(target) {
                return Ok(candidate);
            }
        }
        Ok(self.trim())
    }

    pub fn is_trivial(&self) -> bool {
        self.essential_window().size() == 1
    }
}
