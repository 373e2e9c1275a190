//! Subnormal series of a group shift: component group on top, full shifts
//! over simple groups in the middle, a finite nilpotent piece at the bottom.
//!
//! The connected part is handled by induction on the limit degree. A
//! descent loop starting from the higher block embedding either reaches an
//! embedding whose image is a full shift over the target alphabet, or finds
//! a normal subshift of intermediate limit degree. In the second case the
//! quotient and the subshift are decomposed separately and the finite piece
//! left between them is pushed to the bottom with shift-power preimages.

use std::collections::HashMap;
use std::sync::Arc;

use crate::blocks::BlockGroup;
use crate::code::{higher_block, quotient_shift, SlidingBlockHom};
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::hom::{all_homomorphisms, find_isomorphism};
use crate::limits::Limits;
use crate::shift::{Comparison, GroupShift};
use crate::sigma::FiniteSigmaGroup;
use crate::subgroup::{is_simple, normal_subgroup_inventory, subgroup_generated};
use crate::topology::{analyze_components, Components};

/// A certified series `P = G_0 >= G_1 >= ... >= G_n`.
#[derive(Debug, Clone)]
pub struct DecompositionReport {
    /// `chain[0]` is the input, `chain[1]` its identity component, the last entry the finite tail.
    pub chain: Vec<GroupShift>,
    /// The component group with its automorphism.
    pub head: FiniteSigmaGroup,
    /// `chain[i+1] / chain[i+2]` is the full shift over `factors[i]`.
    pub factors: Vec<FiniteGroup>,
    pub tail: FiniteSigmaGroup,
    pub tail_power: usize,
    /// Quotient codes `chain[i+1] -> chain[i+1] / chain[i+2]`.
    pub witnesses: Vec<SlidingBlockHom>,
}

/// One move of the descent loop.
#[derive(Debug, Clone)]
pub enum DescentStep {
    /// The image is the full shift over the target alphabet.
    Done(Arc<FiniteGroup>),
    /// Composing with a shift power lands in a proper subgroup of the alphabet.
    ShiftReduce(SlidingBlockHom),
    /// A smaller embedding with finite nilpotent kernel.
    Next(SlidingBlockHom),
    /// A normal subshift of intermediate limit degree.
    FoundIntermediate(GroupShift),
}

fn violation(msg: impl Into<String>) -> Error {
    Error::InvariantViolation(msg.into())
}

/// Letters of the image at positions `j >= 1`, for the first `j` where they
/// miss part of the alphabet.
fn shrinking_position(phi: &SlidingBlockHom) -> Result<Option<(usize, Vec<Elem>)>> {
    let src = phi.source();
    let a = phi.anticipation();
    let len = (a + 1).max(src.window_len());
    let states = src.closure_group(len - 1)?;
    let ext = src.closure_group(len)?;
    let order = phi.target().alphabet().order();
    let mut live = vec![true; states.size()];
    for j in 1.. {
        let mut next = vec![false; states.size()];
        for c in ext.iter() {
            if live[states.index_of(&c[..len]).expect("prefix is a state")] {
                next[states.index_of(&c[1..]).expect("suffix is a state")] = true;
            }
        }
        if next == live {
            return Ok(None);
        }
        live = next;
        let mut letters: Vec<Elem> = (0..states.size())
            .filter(|&i| live[i])
            .map(|i| phi.rule_at(&states.block(i)[..a + 1]))
            .collect();
        letters.sort_unstable();
        letters.dedup();
        if letters.len() < order {
            return Ok(Some((j, letters)));
        }
    }
    unreachable!()
}

/// One step of the descent loop for a dense embedding into a full shift
/// whose first-order kernel has size `ld`.
pub fn substandard_descent_step(phi: &SlidingBlockHom, ld: usize) -> Result<DescentStep> {
    let src = phi.source();
    let limits = *src.limits();
    let alphabet = phi.target().alphabet().clone();
    let a = phi.anticipation();

    if let Some((j, letters)) = shrinking_position(phi)? {
        let sub = subgroup_generated(&alphabet, &letters);
        if sub.len() != letters.len() {
            return Err(violation("shifted letter set is not a subgroup"));
        }
        let (group, inclusion) = sub.to_group();
        let position: HashMap<Elem, Elem> = inclusion
            .images()
            .iter()
            .enumerate()
            .map(|(i, &g)| (g, i as Elem))
            .collect();
        let target = GroupShift::full(Arc::new(group), limits);
        let next = SlidingBlockHom::from_fn(src, &target, a + j, |b| position[&phi.rule_at(&b[j..j + a + 1])])?;
        return Ok(DescentStep::ShiftReduce(next));
    }

    let pairs = phi.image_level(1)?;
    let first = pairs.filter(|p| p[0] == 0);
    let second = pairs.filter(|p| p[1] == 0);
    let product: Vec<Vec<Elem>> = second
        .iter()
        .flat_map(|g| first.iter().map(move |h| vec![g[0], h[1]]))
        .collect();
    let joint = BlockGroup::from_blocks(&alphabet, 2, product);
    let (h_group, cosets) = pairs.quotient(&joint, limits.group_order)?;
    if h_group.order() == 1 && alphabet.order() == ld {
        return Ok(DescentStep::Done(alphabet));
    }
    let h_order = h_group.order();
    let target = GroupShift::full(Arc::new(h_group), limits);
    let next = SlidingBlockHom::from_fn(src, &target, a + 1, |b| {
        cosets[pairs.index_of(&phi.apply(b)).expect("image pair in closure")]
    })?;
    let kernel = next.kernel()?;
    let kernel_ld = kernel.limit_degree();
    if kernel_ld == 1 && kernel.is_sigma_infinitesimal()?.is_some() && h_order < alphabet.order() {
        return Ok(DescentStep::Next(next));
    }
    if 1 < kernel_ld && kernel_ld < ld {
        return Ok(DescentStep::FoundIntermediate(kernel.minimize_window()?));
    }
    Err(violation(format!(
        "descent step has no valid outcome (|target| = {}, |H| = {h_order}, kernel ld = {kernel_ld}, ld = {ld})",
        alphabet.order()
    )))
}

/// Series `G = C_0 >= ... >= C_m` of a connected shift with full simple
/// quotients and a finite nilpotent last term.
pub fn series_connected(shift: &GroupShift) -> Result<Vec<GroupShift>> {
    let g = shift.trim().minimize_window()?;
    let series = tighten(descend(&g)?)?;
    reduce_tail(&g, series)
}

/// The configurations of a finite shift listed by `elems`, as a subshift.
fn points_subshift(finite: &GroupShift, elems: &[Elem]) -> Result<GroupShift> {
    let level = finite.stable_level()?;
    let power = finite.is_sigma_infinitesimal()?.unwrap_or(0);
    let wide = level + power + finite.window_len();
    let base = finite.closure_group(level)?;
    let blocks = finite.closure_group(wide)?;
    let keep: std::collections::HashSet<Elem> = elems.iter().copied().collect();
    let window = blocks.filter(|b| keep.contains(&(base.index_of(&b[..level + 1]).expect("prefix") as Elem)));
    GroupShift::from_window(wide, window, *finite.limits())
        .trim()
        .minimize_window()
}

/// Replaces the tail by a smaller shift-invariant subgroup `T` when the
/// quotient by `T` has a series ending in the trivial shift.
fn reduce_tail(g: &GroupShift, series: Vec<GroupShift>) -> Result<Vec<GroupShift>> {
    let tail = series.last().expect("series is non-empty");
    if tail.is_trivial() || series.len() < 2 {
        return Ok(series);
    }
    let finite = tail.finite_sigma_group_of()?;
    let group = finite.group();
    let mut candidates: Vec<Vec<Elem>> = vec![vec![group.identity()]];
    for t in group.elements() {
        let mut orbit = vec![t];
        let mut x = finite.sigma().image_of(t);
        while !orbit.contains(&x) {
            orbit.push(x);
            x = finite.sigma().image_of(x);
        }
        let elems = subgroup_generated(group, &orbit).elements();
        if elems.len() < group.order() && !candidates.contains(&elems) {
            candidates.push(elems);
        }
    }
    candidates.sort_by_key(|c| c.len());
    for elems in candidates {
        let sub = points_subshift(tail, &elems)?;
        let (q, code) = match quotient_shift(g, &sub) {
            Ok(pair) => pair,
            Err(Error::NotNormal(_)) => continue,
            Err(e) => return Err(e),
        };
        let q = q.minimize_window()?;
        if SlidingBlockHom::shift_power(&q, 1)?.image()?.compare(&q)? != Comparison::Equal {
            continue;
        }
        let upper = match descend(&q).and_then(tighten) {
            Ok(upper) => upper,
            Err(Error::InvariantViolation(_)) => continue,
            Err(e) => return Err(e),
        };
        if !upper.last().expect("series is non-empty").is_trivial() {
            continue;
        }
        let code = code.with_target(&q)?;
        let mut chain = Vec::with_capacity(upper.len());
        for term in &upper {
            chain.push(code.preimage(term)?.minimize_window()?);
        }
        return Ok(chain);
    }
    Ok(series)
}

/// Pushes a series forward by the power that kills its tail, provided the
/// shift map is onto the top term and every factor survives unchanged.
fn tighten(series: Vec<GroupShift>) -> Result<Vec<GroupShift>> {
    let last = series.last().expect("series is non-empty");
    let power = match last.is_sigma_infinitesimal()? {
        Some(p) if p > 0 && series.len() > 1 => p,
        _ => return Ok(series),
    };
    let top = &series[0];
    if SlidingBlockHom::shift_power(top, power)?.image()?.compare(top)? != Comparison::Equal {
        return Ok(series);
    }
    let mut pushed = Vec::with_capacity(series.len());
    pushed.push(top.clone());
    for term in &series[1..] {
        pushed.push(SlidingBlockHom::shift_power(term, power)?.image()?.minimize_window()?);
    }
    for i in 0..series.len() - 1 {
        let before = recognize_full_up_to_isomorphism(&quotient_shift(&series[i], &series[i + 1])?.0)?;
        let after = match quotient_shift(&pushed[i], &pushed[i + 1]) {
            Ok((q, _)) => recognize_full_up_to_isomorphism(&q)?,
            Err(Error::NotNormal(_)) | Err(Error::NotASubshift) => return Ok(series),
            Err(e) => return Err(e),
        };
        match (before, after) {
            (Some(a), Some(b)) if a.order() == b.order() => {}
            _ => return Ok(series),
        }
    }
    Ok(pushed)
}

enum Outcome {
    Done(SlidingBlockHom, Arc<FiniteGroup>),
    Intermediate(GroupShift),
}

/// Runs descent steps from the higher block embedding of `g` until one ends it.
fn run_descent(g: &GroupShift) -> Result<Outcome> {
    let ld = g.limit_degree();
    let m = g.window_len().saturating_sub(1);
    let (recoded, forward, _) = higher_block(g, m)?;
    let full = GroupShift::full(recoded.alphabet().clone(), *g.limits());
    let mut phi = forward.with_target(&full)?;
    loop {
        let order = phi.target().alphabet().order();
        match substandard_descent_step(&phi, ld)? {
            DescentStep::ShiftReduce(next) | DescentStep::Next(next) => {
                if next.target().alphabet().order() >= order {
                    return Err(violation("descent target did not shrink"));
                }
                phi = next;
            }
            DescentStep::FoundIntermediate(n) => return Ok(Outcome::Intermediate(n)),
            DescentStep::Done(alphabet) => return Ok(Outcome::Done(phi, alphabet)),
        }
    }
}

/// The alphabet of a full shift isomorphic to `shift`, if there is one that
/// the descent can exhibit.
pub fn recognize_full_up_to_isomorphism(shift: &GroupShift) -> Result<Option<FiniteGroup>> {
    let g = shift.trim().minimize_window()?;
    if let Some(alphabet) = g.recognize_full_shift()? {
        return Ok(Some(alphabet));
    }
    if g.limit_degree() == 1 {
        return Ok(None);
    }
    match run_descent(&g) {
        Ok(Outcome::Done(phi, alphabet)) => {
            if phi.kernel()?.is_trivial() && phi.is_surjective()? {
                return Ok(Some((*alphabet).clone()));
            }
            Ok(coordinate_isomorphism(&g, &alphabet)?.map(|_| (*alphabet).clone()))
        }
        Ok(Outcome::Intermediate(_)) | Err(Error::InvariantViolation(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Largest block group searched for a coordinate homomorphism.
const COORDINATE_SEARCH_ORDER: usize = 64;

/// A code `x -> (f(x[n..=n+a]))_n` onto the full shift over `alphabet`
/// with trivial kernel, for a block homomorphism `f`.
fn coordinate_isomorphism(g: &GroupShift, alphabet: &Arc<FiniteGroup>) -> Result<Option<SlidingBlockHom>> {
    let limits = *g.limits();
    let full = GroupShift::full(alphabet.clone(), limits);
    for a in 0..=g.window_len() {
        let domain = g.closure_group(a)?;
        if domain.size() > COORDINATE_SEARCH_ORDER {
            break;
        }
        let group = Arc::new(domain.to_group(limits.group_order)?);
        for f in all_homomorphisms(&group, alphabet) {
            if !f.image().is_whole() {
                continue;
            }
            let index = domain.index_map();
            let code = SlidingBlockHom::from_fn(g, &full, a, |b| f.image_of(index[b] as Elem))?;
            if code.kernel()?.is_trivial() && code.is_surjective()? {
                return Ok(Some(code));
            }
        }
    }
    Ok(None)
}

fn descend(shift: &GroupShift) -> Result<Vec<GroupShift>> {
    let g = shift.trim().minimize_window()?;
    let limits = *g.limits();
    if g.limit_degree() == 1 {
        if g.is_sigma_infinitesimal()?.is_none() {
            return Err(violation("finite connected part is not nilpotent"));
        }
        return Ok(vec![g]);
    }
    match run_descent(&g)? {
        Outcome::Intermediate(n) => series_through(&g, &n),
        Outcome::Done(phi, alphabet) => {
            if is_simple(&alphabet) {
                let kernel = phi.kernel()?.minimize_window()?;
                if kernel.is_sigma_infinitesimal()?.is_none() {
                    return Err(violation("embedding kernel is not nilpotent"));
                }
                return Ok(vec![g, kernel]);
            }
            let inventory = normal_subgroup_inventory(&alphabet, &limits)?;
            let smallest = inventory
                .subgroups
                .iter()
                .find(|s| !s.is_trivial() && !s.is_whole())
                .ok_or_else(|| violation("non-simple alphabet without proper normal subgroup"))?;
            let sub = GroupShift::full_over(alphabet.clone(), &smallest.elements(), limits)?;
            let n = phi.preimage(&sub)?.minimize_window()?;
            series_through(&g, &n)
        }
    }
}

/// The stable value of `N, s(N), s(s(N)), ...` for the shift map `s`.
pub fn eventual_image(shift: &GroupShift) -> Result<GroupShift> {
    let mut current = shift.trim().minimize_window()?;
    for _ in 0..=shift.limits().max_level {
        let next = SlidingBlockHom::shift_power(&current, 1)?.image()?.minimize_window()?;
        if next.compare(&current)? == Comparison::Equal {
            return Ok(current);
        }
        current = next;
    }
    Err(Error::Undecided {
        level: shift.limits().max_level,
    })
}

/// Series of a connected shift through a normal subshift `n` with
/// `1 < ld(n) < ld(g)`.
pub fn series_through(g: &GroupShift, n: &GroupShift) -> Result<Vec<GroupShift>> {
    let ld = g.limit_degree();
    let n_ld = n.limit_degree();
    if !(1 < n_ld && n_ld < ld) {
        return Err(violation(format!(
            "intermediate subshift has ld {n_ld}, whole has ld {ld}"
        )));
    }
    let connected = analyze_components(n, n.limits().max_level)?
        .identity_component
        .minimize_window()?;
    let core = eventual_image(&connected)?;
    let (n0, (q, code)) = match quotient_shift(g, &core) {
        Ok(pair) => (core, pair),
        Err(Error::NotNormal(_)) => {
            let pair = quotient_shift(g, &connected)?;
            (connected, pair)
        }
        Err(e) => return Err(e),
    };
    let upper = series_connected(&q)?;
    let mut chain = Vec::with_capacity(upper.len() + 4);
    for qi in &upper {
        chain.push(code.preimage(qi)?.minimize_window()?);
    }
    let lower = series_connected(&n0)?;
    let power = upper
        .last()
        .expect("series is non-empty")
        .is_sigma_infinitesimal()?
        .ok_or_else(|| violation("quotient tail is not nilpotent"))?;
    if power == 0 {
        chain.extend(lower.into_iter().skip(1));
    } else {
        let x = chain.last().expect("series is non-empty").clone();
        let frobenius = SlidingBlockHom::shift_power(&x, power)?;
        for ni in lower.iter().skip(1) {
            chain.push(frobenius.preimage(ni)?.minimize_window()?);
        }
    }
    Ok(chain)
}

fn assemble(shift: &GroupShift, comps: Components, connected: Vec<GroupShift>) -> Result<DecompositionReport> {
    let limits = *shift.limits();
    let mut factors = Vec::new();
    let mut witnesses = Vec::new();
    for pair in connected.windows(2) {
        let (q, code) = quotient_shift(&pair[0], &pair[1])?;
        let alphabet =
            recognize_full_up_to_isomorphism(&q)?.ok_or_else(|| violation("series quotient is not a full shift"))?;
        if !is_simple(&Arc::new(alphabet.clone())) {
            return Err(violation("series quotient alphabet is not simple"));
        }
        factors.push(alphabet);
        witnesses.push(code);
    }
    let last = connected.last().expect("series is non-empty");
    let tail = last.finite_sigma_group_of()?;
    let tail_power = tail
        .nilpotency_power()
        .ok_or_else(|| violation("tail endomorphism is not nilpotent"))?;
    let mut chain = vec![shift.trim()];
    chain.extend(connected);
    let report = DecompositionReport {
        chain,
        head: comps.certificate.pi0,
        factors,
        tail,
        tail_power,
        witnesses,
    };
    let failures = verify_series_with(shift, &report, &limits)?;
    if !failures.is_empty() {
        return Err(violation(format!(
            "series failed verification: {}",
            failures.join("; ")
        )));
    }
    Ok(report)
}

/// Certified decomposition of `shift`.
pub fn decompose(shift: &GroupShift) -> Result<DecompositionReport> {
    let comps = analyze_components(shift, shift.limits().max_level)?;
    let connected = series_connected(&comps.identity_component)?;
    assemble(shift, comps, connected)
}

/// Decomposition forced through a chosen normal subshift of the identity component.
pub fn decompose_via(shift: &GroupShift, intermediate: &GroupShift) -> Result<DecompositionReport> {
    let comps = analyze_components(shift, shift.limits().max_level)?;
    let k = comps.identity_component.clone();
    if !intermediate.is_subshift_of(&k)? {
        return Err(Error::NotASubshift);
    }
    let connected = series_through(&k, intermediate)?;
    assemble(shift, comps, connected)
}

/// Names of the failed checks; empty when the report is valid for `shift`.
pub fn verify_series(shift: &GroupShift, report: &DecompositionReport) -> Result<Vec<String>> {
    verify_series_with(shift, report, shift.limits())
}

fn verify_series_with(shift: &GroupShift, report: &DecompositionReport, limits: &Limits) -> Result<Vec<String>> {
    let mut failures = Vec::new();
    let chain = &report.chain;
    if chain.len() < 2 || chain.len() != report.factors.len() + 2 {
        failures.push("chain-length".to_string());
        return Ok(failures);
    }
    if chain[0].compare(shift)? != Comparison::Equal {
        failures.push("chain-start".to_string());
    }
    let comps = analyze_components(shift, limits.max_level)?;
    if chain[1].compare(&comps.identity_component)? != Comparison::Equal {
        failures.push("identity-component".to_string());
    }
    if !comps.certificate.pi0.is_isomorphic(&report.head, limits)? || !report.head.is_automorphism() {
        failures.push("head".to_string());
    }
    let mut product = 1usize;
    for (i, factor) in report.factors.iter().enumerate() {
        let (upper, lower) = (&chain[i + 1], &chain[i + 2]);
        if !lower.is_subshift_of(upper)? {
            failures.push(format!("inclusion-{i}"));
            continue;
        }
        let q = match quotient_shift(upper, lower) {
            Ok((q, _)) => q,
            Err(Error::NotNormal(_)) => {
                failures.push(format!("normality-{i}"));
                continue;
            }
            Err(e) => return Err(e),
        };
        let recognized = match recognize_full_up_to_isomorphism(&q)? {
            Some(alpha) => find_isomorphism(&Arc::new(alpha), &Arc::new(factor.clone()), limits)?.is_some(),
            None => false,
        };
        if !recognized {
            failures.push(format!("quotient-recognition-{i}"));
        }
        if !is_simple(&Arc::new(factor.clone())) {
            failures.push(format!("factor-simple-{i}"));
        }
        product *= factor.order();
    }
    let last = chain.last().expect("non-empty");
    match last.is_sigma_infinitesimal()? {
        Some(power) if power == report.tail_power => {
            if !last.finite_sigma_group_of()?.is_isomorphic(&report.tail, limits)? {
                failures.push("tail".to_string());
            }
        }
        _ => failures.push("tail-nilpotent".to_string()),
    }
    if shift.limit_degree() != product {
        failures.push("ld-product".to_string());
    }
    Ok(failures)
}

/// Same length, isomorphic heads, tails of equal order and power, and
/// matching factor multisets.
pub fn series_equivalent(a: &DecompositionReport, b: &DecompositionReport, limits: &Limits) -> Result<bool> {
    if a.chain.len() != b.chain.len() || a.factors.len() != b.factors.len() {
        return Ok(false);
    }
    if !a.head.is_isomorphic(&b.head, limits)? {
        return Ok(false);
    }
    if a.tail.order() != b.tail.order() || a.tail_power != b.tail_power {
        return Ok(false);
    }
    let mut unused: Vec<Arc<FiniteGroup>> = b.factors.iter().map(|f| Arc::new(f.clone())).collect();
    for f in &a.factors {
        let f = Arc::new(f.clone());
        let mut hit = None;
        for (i, g) in unused.iter().enumerate() {
            if find_isomorphism(&f, g, limits)?.is_some() {
                hit = Some(i);
                break;
            }
        }
        match hit {
            Some(i) => {
                unused.remove(i);
            }
            None => return Ok(false),
        }
    }
    Ok(true)
}
