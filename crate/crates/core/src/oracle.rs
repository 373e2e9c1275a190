//! Brute-force recomputation of closure groups, component partitions and
//! quotient surjectivity, sharing no code with the main algorithms beyond
//! reading the presentation window.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::classify::brute_force_surjective;
use crate::error::{Error, Result};
use crate::group::Elem;
use crate::shift::{Comparison, GroupShift};
use crate::topology::{analyze_components, component_partition, nub_closure};

/// Largest level size handled by set-partition enumeration.
pub const PARTITION_ENUMERATION_MAX: usize = 10;

type Block = Vec<Elem>;

/// Words of length `len + 1` of infinite sequences whose windows all lie in
/// the presentation window, by depth-first prefix extension.
pub fn oracle_closure(shift: &GroupShift, level: usize, budget: usize) -> Result<Vec<Block>> {
    let r = shift.window_len();
    let windows: HashSet<Block> = shift.window().iter().map(|w| w.to_vec()).collect();
    let live = live_states(&windows, r);
    let letters: BTreeSet<Elem> = windows.iter().flat_map(|w| w.iter().copied()).collect();
    let target_len = (level + 1).max(r + 1);
    let mut out: BTreeSet<Block> = BTreeSet::new();
    let mut visited = 0usize;
    let mut stack: Vec<Block> = windows.iter().cloned().collect();
    while let Some(word) = stack.pop() {
        visited += 1;
        if visited > budget {
            return Err(Error::OracleBudgetExceeded(format!(
                "closure enumeration at level {level}"
            )));
        }
        if word.len() == target_len {
            if live.contains(&word[word.len() - r..]) {
                out.insert(word[..level + 1].to_vec());
            }
            continue;
        }
        for &x in &letters {
            let mut next = word.clone();
            next.push(x);
            if windows.contains(&next[next.len() - r - 1..]) {
                stack.push(next);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Length-`r` words from which an infinite path leaves.
fn live_states(windows: &HashSet<Block>, r: usize) -> HashSet<Block> {
    let mut states: HashSet<Block> = windows.iter().map(|w| w[..r].to_vec()).collect();
    loop {
        let keep: HashSet<Block> = states
            .iter()
            .filter(|s| windows.iter().any(|w| w[..r] == s[..] && states.contains(&w[1..])))
            .cloned()
            .collect();
        if keep.len() == states.len() {
            return keep;
        }
        states = keep;
    }
}

/// Canonical form: classes sorted internally, then by least member.
fn canonical(mut classes: Vec<Vec<Block>>) -> Vec<Vec<Block>> {
    for c in &mut classes {
        c.sort();
    }
    classes.sort();
    classes
}

/// The finest partition of the level-`level` blocks in which every block of
/// the next level has its prefix and suffix in one class.
pub fn oracle_partition(shift: &GroupShift, level: usize, budget: usize) -> Result<Vec<Vec<Block>>> {
    let nodes = oracle_closure(shift, level, budget)?;
    let next = oracle_closure(shift, level + 1, budget)?;
    let index: HashMap<&[Elem], usize> = nodes.iter().enumerate().map(|(i, b)| (b.as_slice(), i)).collect();
    let edges: Vec<(usize, usize)> = next.iter().map(|c| (index[&c[..level + 1]], index[&c[1..]])).collect();
    let labels = if nodes.len() <= PARTITION_ENUMERATION_MAX {
        finest_invariant_partition(nodes.len(), &edges)
    } else {
        reachability_labels(nodes.len(), &edges)
    };
    let mut classes: HashMap<usize, Vec<Block>> = HashMap::new();
    for (i, l) in labels.into_iter().enumerate() {
        classes.entry(l).or_default().push(nodes[i].clone());
    }
    Ok(canonical(classes.into_values().collect()))
}

/// Enumerates every set partition as a restricted growth string.
fn finest_invariant_partition(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut best: Vec<usize> = vec![0; n];
    let mut best_count = if n == 0 { 0 } else { 1 };
    let mut labels = vec![0usize; n];
    fn walk(
        i: usize,
        max: usize,
        labels: &mut Vec<usize>,
        edges: &[(usize, usize)],
        best: &mut Vec<usize>,
        best_count: &mut usize,
    ) {
        let n = labels.len();
        if i == n {
            if edges.iter().all(|&(a, b)| labels[a] == labels[b]) && max + 1 > *best_count {
                *best_count = max + 1;
                best.clone_from(labels);
            }
            return;
        }
        for l in 0..=max + 1 {
            labels[i] = l;
            walk(i + 1, max.max(l), labels, edges, best, best_count);
        }
    }
    if n > 0 {
        labels[0] = 0;
        walk(1, 0, &mut labels, edges, &mut best, &mut best_count);
    }
    best
}

/// Breadth-first search over the undirected edge relation.
fn reachability_labels(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut label = vec![usize::MAX; n];
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = start;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if label[y] == usize::MAX {
                    label[y] = start;
                    queue.push_back(y);
                }
            }
        }
    }
    label
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub object: String,
    pub depth: usize,
    pub closure_levels: usize,
    pub closure_mismatches: Vec<usize>,
    pub partition_levels: usize,
    pub partition_mismatches: Vec<usize>,
    /// Class count of the oracle partition at the deepest level checked.
    pub oracle_components: Option<usize>,
    pub quotient_surjective: Option<bool>,
    pub nub_consistent: Option<bool>,
    pub notes: Vec<String>,
    pub passed: bool,
}

/// Compares the main algorithms with the oracle up to `depth`: closure
/// groups at levels `0..=depth`, partitions at levels `0..depth`, and
/// surjectivity of the component quotient code on blocks of length `depth`.
pub fn oracle_check(name: &str, shift: &GroupShift, depth: usize) -> Result<OracleReport> {
    let budget = shift.limits().block_budget;
    let shift = shift.trim();
    let mut report = OracleReport {
        object: name.to_string(),
        depth,
        closure_levels: depth + 1,
        closure_mismatches: Vec::new(),
        partition_levels: depth,
        partition_mismatches: Vec::new(),
        oracle_components: None,
        quotient_surjective: None,
        nub_consistent: None,
        notes: Vec::new(),
        passed: false,
    };
    for level in 0..=depth {
        let main: Vec<Block> = shift.closure_group(level)?.iter().map(|b| b.to_vec()).collect();
        let mut main_sorted = main.clone();
        main_sorted.sort();
        if main_sorted != oracle_closure(&shift, level, budget)? {
            report.closure_mismatches.push(level);
        }
    }
    for level in 0..depth {
        let blocks = shift.closure_group(level)?;
        let main = component_partition(&shift, level)?;
        let main_classes: Vec<Vec<Block>> = main
            .classes
            .iter()
            .map(|c| c.iter().map(|&i| blocks.block(i).to_vec()).collect())
            .collect();
        let oracle = oracle_partition(&shift, level, budget)?;
        report.oracle_components = Some(oracle.len());
        if canonical(main_classes) != oracle {
            report.partition_mismatches.push(level);
        }
    }
    match analyze_components(&shift, shift.limits().max_level) {
        Ok(c) => {
            report.quotient_surjective = Some(brute_force_surjective(&c.quotient_code, depth.max(1))?);
            report.nub_consistent = Some(nub_closure(&shift)?.compare(&c.identity_component)? == Comparison::Equal);
        }
        Err(Error::InconsistentCertificate(msg)) => {
            report.nub_consistent = Some(false);
            report.notes.push(msg);
        }
        Err(e) if e.is_undecided() => report.notes.push(format!("component certification: {e}")),
        Err(e) => return Err(e),
    }
    report.passed = report.closure_mismatches.is_empty()
        && report.partition_mismatches.is_empty()
        && report.quotient_surjective != Some(false)
        && report.nub_consistent != Some(false);
    Ok(report)
}
