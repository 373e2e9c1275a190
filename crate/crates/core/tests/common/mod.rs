#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use proptest::prelude::*;
use sigma_kit::{
    analyze_components, decompose, higher_block, parse_fixture, quotient_shift, report, Error, FiniteGroup, Fixture,
    GroupShift, Limits, SlidingBlockHom,
};

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn load(file: &str, limits: &Limits) -> Fixture {
    let text = std::fs::read_to_string(fixtures_dir().join(file)).expect("fixture readable");
    parse_fixture(&text, limits).expect("fixture parses")
}

/// Every `*.fx` file directly under the fixture directory, sorted by name.
pub fn bundled(limits: &Limits) -> Vec<(String, Fixture)> {
    let mut names: Vec<String> = std::fs::read_dir(fixtures_dir())
        .expect("fixture directory")
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".fx"))
        .collect();
    names.sort();
    names.into_iter().map(|n| (n.clone(), load(&n, limits))).collect()
}

/// Every shift and finite sigma-group of the bundled fixtures, as trimmed shifts.
pub fn bundled_shifts(limits: &Limits) -> Vec<(String, GroupShift)> {
    let mut out = Vec::new();
    for (_, fx) in bundled(limits) {
        for (name, obj) in fx.analyzable() {
            out.push((name, report::as_shift(&obj, limits).expect("object builds")));
        }
    }
    out
}

pub fn alphabet(choice: usize) -> Arc<FiniteGroup> {
    Arc::new(match choice {
        0 => FiniteGroup::cyclic(2),
        1 => FiniteGroup::cyclic(3),
        2 => FiniteGroup::cyclic(4),
        _ => FiniteGroup::klein4(),
    })
}

/// A random window: alphabet choice, window length, generator blocks, and
/// whether the last coordinate of every generator is forced to the identity.
#[derive(Debug, Clone)]
pub struct ShiftCase {
    pub alphabet: usize,
    pub window_len: usize,
    pub generators: Vec<Vec<u32>>,
    pub killed: bool,
}

impl ShiftCase {
    pub fn build(&self) -> GroupShift {
        let a = alphabet(self.alphabet);
        let n = a.order() as u32;
        let gens: Vec<Vec<u32>> = self
            .generators
            .iter()
            .map(|g| {
                let mut b: Vec<u32> = g.iter().take(self.window_len + 1).map(|x| x % n).collect();
                if self.killed {
                    *b.last_mut().unwrap() = 0;
                }
                b
            })
            .collect();
        GroupShift::new(a, self.window_len, &gens, Limits::default())
            .unwrap()
            .trim()
    }
}

pub fn shift_case() -> impl Strategy<Value = ShiftCase> {
    (
        0usize..4,
        1usize..=2,
        prop::collection::vec(prop::collection::vec(0u32..12, 3), 1..=3),
        prop::bool::weighted(0.25),
    )
        .prop_map(|(alphabet, window_len, generators, killed)| ShiftCase {
            alphabet,
            window_len,
            generators,
            killed,
        })
}

fn e(x: Error) -> String {
    x.to_string()
}

/// ld(source) = ld(kernel) * ld(image) for the shift code, the quotient by
/// each generator-prefix subshift, and every decomposition witness.
pub fn ld_multiplicative(g: &GroupShift) -> Result<(), String> {
    let mut pairs: Vec<(GroupShift, GroupShift, GroupShift)> = Vec::new();
    let shift = SlidingBlockHom::shift_power(g, 1).map_err(e)?;
    pairs.push((g.clone(), shift.kernel().map_err(e)?, shift.image().map_err(e)?));
    if g.alphabet().is_abelian() {
        let gens: Vec<Vec<u32>> = g.window().iter().map(|b| b.to_vec()).collect();
        for k in [1, gens.len() / 2] {
            let sub = GroupShift::new(g.alphabet().clone(), g.window_len(), &gens[..k.max(1)], *g.limits())
                .map_err(e)?
                .trim();
            let (q, _) = quotient_shift(g, &sub).map_err(e)?;
            pairs.push((g.clone(), sub, q));
        }
    }
    if let Ok(rep) = decompose(g) {
        for w in &rep.witnesses {
            pairs.push((w.source().clone(), w.kernel().map_err(e)?, w.image().map_err(e)?));
        }
    }
    for (whole, kernel, quotient) in pairs {
        let (a, b, c) = (whole.limit_degree(), kernel.limit_degree(), quotient.limit_degree());
        if a != b * c {
            return Err(format!("ld {a} != {b} * {c}"));
        }
    }
    Ok(())
}

/// Frobenius kernels grow with the power, both in order and as subshifts.
pub fn frobenius_monotone(g: &GroupShift) -> Result<(), String> {
    let mut last_order = 0;
    let mut last: Option<GroupShift> = None;
    for m in 0..=3 {
        let order = g.frobenius_kernel(m).map_err(e)?.order();
        if order < last_order {
            return Err(format!("kernel order drops at power {m}"));
        }
        last_order = order;
        let kernel = SlidingBlockHom::shift_power(g, m).map_err(e)?.kernel().map_err(e)?;
        if let Some(prev) = &last {
            if !prev.is_subshift_of(&kernel).map_err(e)? {
                return Err(format!("kernel at power {} not inside power {m}", m - 1));
            }
        }
        if kernel.finite_sigma_group_of().map_err(e)?.order() != order {
            return Err(format!("kernel presentations disagree at power {m}"));
        }
        last = Some(kernel);
    }
    Ok(())
}

fn factor_orders(g: &GroupShift) -> sigma_kit::Result<Vec<usize>> {
    let mut v: Vec<usize> = decompose(g)?.factors.iter().map(|f| f.order()).collect();
    v.sort_unstable();
    Ok(v)
}

fn higher_block_violation(g: &GroupShift) -> sigma_kit::Result<Option<String>> {
    let (hb, _, _) = higher_block(g, 1)?;
    if hb.limit_degree() != g.limit_degree() {
        return Ok(Some("ld changed".into()));
    }
    let max = g.limits().max_level;
    let (a, b) = (analyze_components(g, max)?.count, analyze_components(&hb, max)?.count);
    if a != b {
        return Ok(Some(format!("components {a} vs {b}")));
    }
    if factor_orders(g)? != factor_orders(&hb)? {
        return Ok(Some("factor orders changed".into()));
    }
    Ok(None)
}

/// Recoding to 2-blocks preserves ld, component count and factor orders.
/// `Ok(false)` when the recoded shift exceeds the block budget.
pub fn higher_block_invariant(g: &GroupShift) -> Result<bool, String> {
    match higher_block_violation(g) {
        Ok(None) => Ok(true),
        Ok(Some(m)) => Err(m),
        Err(Error::SizeLimit { .. }) => Ok(false),
        Err(x) => Err(e(x)),
    }
}

pub fn infinitesimal_is_connected(g: &GroupShift) -> Result<(), String> {
    if g.limit_degree() == 1 && g.is_sigma_infinitesimal().map_err(e)?.is_some() {
        let count = analyze_components(g, g.limits().max_level).map_err(e)?.count;
        if count != 1 {
            return Err(format!("infinitesimal with {count} components"));
        }
    } else if g.limit_degree() != 1 && matches!(g.is_sigma_infinitesimal(), Ok(Some(_))) {
        return Err("infinitesimal with ld > 1".into());
    }
    Ok(())
}

/// All four properties; the flag tells whether the higher-block check ran.
pub fn all_properties(g: &GroupShift) -> Result<bool, String> {
    ld_multiplicative(g).map_err(|m| format!("ld multiplicativity: {m}"))?;
    frobenius_monotone(g).map_err(|m| format!("Frobenius chain: {m}"))?;
    let checked = higher_block_invariant(g).map_err(|m| format!("higher block: {m}"))?;
    infinitesimal_is_connected(g).map_err(|m| format!("infinitesimal: {m}"))?;
    Ok(checked)
}
