//! Sliding block homomorphisms between group shifts, with kernels, images,
//! preimages, quotients and higher block recoding.

use std::sync::Arc;

use crate::blocks::BlockGroup;
use crate::error::{Error, Result, Witness};
use crate::group::Elem;
use crate::shift::GroupShift;

/// A map `x -> (rule(x[j..=j+a]))_j` with `rule` a homomorphism on the
/// level-`a` closure group of the source.
#[derive(Clone)]
pub struct SlidingBlockHom {
    source: GroupShift,
    target: GroupShift,
    anticipation: usize,
    domain: Arc<BlockGroup>,
    rule: Arc<[Elem]>,
}

impl std::fmt::Debug for SlidingBlockHom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SlidingBlockHom(a = {}, {:?} -> {:?})",
            self.anticipation, self.source, self.target
        )
    }
}

impl SlidingBlockHom {
    /// Validated code. `rule[i]` is the image of block `i` of `G_src[a]`.
    pub fn new(source: &GroupShift, target: &GroupShift, anticipation: usize, rule: Vec<Elem>) -> Result<Self> {
        let domain = source.closure_group(anticipation)?;
        if rule.len() != domain.size() {
            return Err(Error::Malformed(format!(
                "rule has {} entries, domain has {} blocks",
                rule.len(),
                domain.size()
            )));
        }
        if rule.iter().any(|&x| x as usize >= target.alphabet().order()) {
            return Err(Error::Malformed("rule value outside the target alphabet".into()));
        }
        let code = SlidingBlockHom {
            source: source.clone(),
            target: target.clone(),
            anticipation,
            domain,
            rule: rule.into(),
        };
        code.check_homomorphism()?;
        code.check_windows()?;
        Ok(code)
    }

    /// Validated code from a function on blocks of length `a + 1`.
    pub fn from_fn<F>(source: &GroupShift, target: &GroupShift, anticipation: usize, f: F) -> Result<Self>
    where
        F: Fn(&[Elem]) -> Elem,
    {
        let domain = source.closure_group(anticipation)?;
        let rule = domain.iter().map(f).collect();
        SlidingBlockHom::new(source, target, anticipation, rule)
    }

    fn unchecked(source: &GroupShift, target: &GroupShift, anticipation: usize, rule: Vec<Elem>) -> Result<Self> {
        Ok(SlidingBlockHom {
            source: source.clone(),
            target: target.clone(),
            anticipation,
            domain: source.closure_group(anticipation)?,
            rule: rule.into(),
        })
    }

    pub fn identity(shift: &GroupShift) -> Result<Self> {
        SlidingBlockHom::from_fn(shift, shift, 0, |b| b[0])
    }

    /// The `m`-fold shift as an endomorphism.
    pub fn shift_power(shift: &GroupShift, m: usize) -> Result<Self> {
        SlidingBlockHom::from_fn(shift, shift, m, |b| b[m])
    }

    /// Letterwise application of an alphabet homomorphism.
    pub fn letter_map(source: &GroupShift, target: &GroupShift, images: &[Elem]) -> Result<Self> {
        SlidingBlockHom::from_fn(source, target, 0, |b| images[b[0] as usize])
    }

    /// Same rule with a different target, revalidated.
    pub fn with_target(&self, target: &GroupShift) -> Result<Self> {
        SlidingBlockHom::new(&self.source, target, self.anticipation, self.rule.to_vec())
    }

    /// Same rule restricted to a subshift of the source.
    pub fn restrict(&self, sub: &GroupShift) -> Result<Self> {
        if !sub.is_subshift_of(&self.source)? {
            return Err(Error::NotASubshift);
        }
        let a = self.anticipation;
        SlidingBlockHom::from_fn(sub, &self.target, a, |b| self.rule_at(b))
    }

    fn check_homomorphism(&self) -> Result<()> {
        let gens = self.domain.generators();
        let tgt = self.target.alphabet();
        for (i, x) in self.domain.iter().enumerate() {
            for g in &gens {
                let xg = self.domain.mul(x, g);
                let j = self.domain.index_of(&xg).expect("closure group is a group");
                let gi = self.domain.index_of(g).expect("generator in group");
                if self.rule[j] != tgt.mul(self.rule[i], self.rule[gi]) {
                    return Err(Error::NonHomomorphicRule(Witness(xg)));
                }
            }
        }
        if self.rule[0] != 0 {
            return Err(Error::NonHomomorphicRule(Witness(self.domain.block(0).to_vec())));
        }
        Ok(())
    }

    fn check_windows(&self) -> Result<()> {
        let rt = self.target.window_len();
        let level = self.source.closure_group(self.anticipation + rt)?;
        let allowed = self.target.essential_window();
        for g in level.generators() {
            if !allowed.contains(&self.apply(&g)) {
                return Err(Error::WindowViolation(Witness(g)));
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &GroupShift {
        &self.source
    }

    pub fn target(&self) -> &GroupShift {
        &self.target
    }

    pub fn anticipation(&self) -> usize {
        self.anticipation
    }

    /// Rule table indexed by the blocks of `G_src[a]`.
    pub fn rule(&self) -> &[Elem] {
        &self.rule
    }

    /// Image of one block of length `a + 1`.
    pub fn rule_at(&self, block: &[Elem]) -> Elem {
        let i = self
            .domain
            .index_of(block)
            .unwrap_or_else(|| panic!("block {block:?} is not in the code's domain"));
        self.rule[i]
    }

    /// Image of a source block of length `n > a`: a target block of length `n - a`.
    pub fn apply(&self, block: &[Elem]) -> Vec<Elem> {
        block.windows(self.anticipation + 1).map(|w| self.rule_at(w)).collect()
    }

    /// Level-`i` closure group of the image.
    pub fn image_level(&self, level: usize) -> Result<BlockGroup> {
        let src = self.source.closure_group(level + self.anticipation)?;
        let blocks: std::collections::BTreeSet<Vec<Elem>> = src.iter().map(|b| self.apply(b)).collect();
        Ok(BlockGroup::from_blocks(self.target.alphabet(), level + 1, blocks))
    }

    /// `|ker(G[1] -> G[0])|` of the image closure.
    pub fn metric(&self) -> Result<usize> {
        Ok(self.image_level(1)?.last_coordinate_kernel())
    }

    /// `other` after `self`.
    pub fn then(&self, other: &SlidingBlockHom) -> Result<SlidingBlockHom> {
        if self.target.alphabet() != other.source.alphabet() {
            return Err(Error::Malformed("codes are not composable".into()));
        }
        let a = self.anticipation + other.anticipation;
        let domain = self.source.closure_group(a)?;
        let rule = domain.iter().map(|b| other.rule_at(&self.apply(b))).collect();
        SlidingBlockHom::unchecked(&self.source, &other.target, a, rule)
    }

    /// Presentation of the kernel with window length `max(r_src, a)`.
    pub fn kernel(&self) -> Result<GroupShift> {
        let r = self.source.window_len().max(self.anticipation);
        let blocks = self.source.closure_group(r)?;
        let window = blocks.filter(|b| self.apply(b).iter().all(|&x| x == 0));
        Ok(GroupShift::from_window(r, window, *self.source.limits()).trim())
    }

    /// Finite-type presentation of the image, found by verify-or-deepen.
    pub fn image(&self) -> Result<GroupShift> {
        let bound = self.source.window_len() + self.anticipation + self.source.limits().image_extra_depth;
        let limits = *self.target.limits();
        for r in 0..=bound {
            let candidate = GroupShift::from_window(r, self.image_level(r)?, limits).trim();
            let mut ok = true;
            for extra in 1..=2 {
                if candidate.closure_group(r + extra)?.size() != self.image_level(r + extra)?.size() {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(candidate);
            }
        }
        Err(Error::DepthExceeded { bound })
    }

    /// Whether the image is all of the target.
    pub fn is_surjective(&self) -> Result<bool> {
        self.target.is_subshift_of(&self.image()?)
    }

    /// Presentation of `{x : phi(x) in sub}` for a subshift of the target.
    pub fn preimage(&self, sub: &GroupShift) -> Result<GroupShift> {
        if !sub.is_subshift_of(&self.target)? {
            return Err(Error::NotASubshift);
        }
        let r = self.source.window_len().max(self.anticipation + sub.window_len());
        let blocks = self.source.closure_group(r)?;
        let allowed = sub.essential_window();
        let w = sub.window_len() + 1;
        let window = blocks.filter(|b| self.apply(b).windows(w).all(|x| allowed.contains(x)));
        Ok(GroupShift::from_window(r, window, *self.source.limits()).trim())
    }
}

/// Quotient of `shift` by a normal subshift: the image presentation and the
/// quotient code, whose kernel is exactly `normal`.
pub fn quotient_shift(shift: &GroupShift, normal: &GroupShift) -> Result<(GroupShift, SlidingBlockHom)> {
    if !normal.is_subshift_of(shift)? {
        return Err(Error::NotASubshift);
    }
    let level = shift.window_len().max(normal.window_len());
    let whole = shift.closure_group(level)?;
    let sub = normal.closure_group(level)?;
    if !sub.is_normal_in(&whole) {
        return Err(Error::NotNormal(format!("level-{level} closure of the subshift")));
    }
    let (q, cosets) = whole.quotient(&sub, shift.limits().group_order)?;
    let full = GroupShift::full(Arc::new(q), *shift.limits());
    let code = SlidingBlockHom::unchecked(shift, &full, level, cosets)?;
    let image = code.image()?;
    let code = SlidingBlockHom::unchecked(shift, &image, level, code.rule.to_vec())?;
    Ok((image, code))
}

/// Recoding over the alphabet `G[m]` with window length one, with the
/// forward and inverse conjugacies. Element `i` of the new alphabet is block
/// `i` of `G[m]`.
pub fn higher_block(shift: &GroupShift, m: usize) -> Result<(GroupShift, SlidingBlockHom, SlidingBlockHom)> {
    let level = shift.closure_group(m)?;
    let alphabet = Arc::new(level.to_group(shift.limits().group_order)?);
    let next = shift.closure_group(m + 1)?;
    let pairs = next.iter().map(|c| {
        vec![
            level.index_of(&c[..m + 1]).expect("prefix in closure") as Elem,
            level.index_of(&c[1..]).expect("suffix in closure") as Elem,
        ]
    });
    let window = BlockGroup::from_blocks(&alphabet, 2, pairs);
    let recoded = GroupShift::from_window(1, window, *shift.limits()).trim();
    let forward = SlidingBlockHom::unchecked(shift, &recoded, m, (0..level.size() as Elem).collect())?;
    let inverse_domain = recoded.closure_group(0)?;
    let inverse_rule = inverse_domain.iter().map(|b| level.block(b[0] as usize)[0]).collect();
    let inverse = SlidingBlockHom::unchecked(&recoded, shift, 0, inverse_rule)?;
    Ok((recoded, forward, inverse))
}
