//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use common::*;
use proptest::test_runner::{Config, TestRunner};
use sigma_kit::group::{a5_generators, product_index};
use sigma_kit::hom::all_homomorphisms;
use sigma_kit::{
    analyze, analyze_components, brute_force_surjective, classify_normal_in_benign, components_over_base, decompose,
    decompose_via, normal_window_subshifts, oracle_check, recognize_full_up_to_isomorphism, series_equivalent,
    verify_series, Comparison, DeltaContext, FiniteGroup, FiniteSigmaGroup, GroupShift, Limits, NormalClassification,
};

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn ok<T>(r: sigma_kit::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn c1_strongly_etale() -> Outcome {
    let limits = Limits::default();
    let fx = load("ssetale.fx", &limits);
    let mut checked = 0;
    for n in 2..=8usize {
        for m in 1..=2 {
            for alpha in 0..n {
                let name = format!("ssetale_cyclic_{n}_{m}_{alpha}");
                let obj = fx.analyzable_named(&name).ok_or(format!("missing {name}"))?;
                let report = ok(analyze(&name, &obj, &limits))?;
                let flag = report.strongly_sigma_etale.value().copied();
                ensure!(flag == Some(gcd(alpha, n) == 1), "{name}: flag {flag:?}");
                ensure!(report.flags_consistent(), "{name}: inconsistent flags");
                checked += 1;
            }
        }
    }
    let two = ok(analyze(
        "",
        &fx.analyzable_named("ssetale_cyclic_4_1_2").unwrap(),
        &limits,
    ))?;
    ensure!(
        two.sigma_infinitesimal.value() == Some(&Some(2)),
        "(4,1,2) infinitesimal power"
    );
    Ok(format!("{checked} presentations, flag = [gcd(alpha, n) = 1]"))
}

fn c2_sconnected3() -> Outcome {
    let fx = load("galois.fx", &Limits::default());
    let get = |n: &str| fx.sigma_set(n).map(|s| s.components).ok_or(format!("missing {n}"));
    let counts = (
        get("sconnected3_swap")?,
        get("sconnected3_trivial")?,
        get("sconnected3_sigma_swap")?,
    );
    ensure!(counts == (2, 3, 2), "counts {counts:?}");
    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let swap = ok(DeltaContext::new(c2, vec![0, 1]))?;
    let direct = ok(components_over_base(&[0, 1, 2], &swap, &[vec![0, 1, 2], vec![0, 2, 1]]))?;
    ensure!(direct == 2, "direct count {direct}");
    Ok(format!("component counts {counts:?}"))
}

fn classics(name: &str) -> std::result::Result<GroupShift, String> {
    load("classics.fx", &Limits::default())
        .shift(name)
        .cloned()
        .ok_or(format!("missing {name}"))
}

fn factor_orders(rep: &sigma_kit::DecompositionReport) -> Vec<usize> {
    rep.factors.iter().map(|f| f.order()).collect()
}

fn c3_easy_babbitt() -> Outcome {
    let g = classics("easy_babbitt")?;
    let comps = ok(analyze_components(&g, 64))?;
    ensure!(comps.count == 1, "components {}", comps.count);
    let rep = ok(decompose(&g))?;
    ensure!(factor_orders(&rep) == vec![2], "factors {:?}", factor_orders(&rep));
    let tail_cyclic = rep.tail.order() == 4 && rep.tail.group().element_order(1) == 4;
    ensure!(tail_cyclic, "tail is not C4");
    ensure!(
        rep.tail.sigma().is_trivial(),
        "tail endomorphism {:?}",
        rep.tail.sigma().images()
    );
    let failures = ok(verify_series(&g, &rep))?;
    ensure!(failures.is_empty(), "verify: {failures:?}");
    Ok("connected; factors [C2]; tail C4 with zero endomorphism; verified".into())
}

fn c4_kitchens() -> Outcome {
    let g = classics("kitchens")?;
    ensure!(g.limit_degree() == 4, "ld {}", g.limit_degree());
    let comps = ok(analyze_components(&g, 64))?;
    ensure!(comps.count == 1, "components {}", comps.count);
    let rep = ok(decompose(&g))?;
    ensure!(factor_orders(&rep) == vec![2, 2], "factors {:?}", factor_orders(&rep));
    ensure!(rep.tail.order() == 1, "tail order {}", rep.tail.order());
    ensure!(
        factor_orders(&rep).iter().product::<usize>() == g.limit_degree(),
        "product"
    );
    ensure!(ok(verify_series(&g, &rep))?.is_empty(), "verify");
    Ok("ld 4 = 2*2; connected; factors [C2, C2]; trivial tail".into())
}

fn c5_babbitt_long() -> Outcome {
    let g = classics("babbitt_long")?;
    ensure!(g.limit_degree() == 4, "ld {}", g.limit_degree());
    let rep = ok(decompose(&g))?;
    ensure!(
        rep.head.order() == 2 && rep.head.sigma().images() == [0, 1],
        "head {:?}",
        rep.head.sigma().images()
    );
    ensure!(factor_orders(&rep) == vec![2, 2], "factors {:?}", factor_orders(&rep));
    ensure!(
        rep.tail.order() == 4 && rep.tail_power == 1,
        "tail {} power {}",
        rep.tail.order(),
        rep.tail_power
    );
    let comps = ok(analyze_components(&g, 64))?;
    ensure!(comps.count == 2, "components {}", comps.count);
    ensure!(ok(verify_series(&g, &rep))?.is_empty(), "verify");
    Ok("head (C2, id); factors [C2, C2]; tail order 4 power 1; 2 components".into())
}

fn c6_square_quotient() -> Outcome {
    let g = classics("square_quotient")?;
    let comps = ok(analyze_components(&g, 64))?;
    let full = ok(recognize_full_up_to_isomorphism(&comps.identity_component))?;
    ensure!(
        full.as_ref().map(|a| a.order()) == Some(2),
        "identity component not full over C2"
    );
    let pi0 = &comps.certificate.pi0;
    ensure!(
        pi0.order() == 2 && pi0.sigma().images() == [0, 1],
        "pi0 {:?}",
        pi0.sigma().images()
    );
    ensure!(comps.count == 2, "components {}", comps.count);
    Ok("identity component full over C2; pi0 = (C2, id); 2 components".into())
}

/// Groups of order at most 12, one per isomorphism class.
fn small_groups() -> Vec<(String, Arc<FiniteGroup>)> {
    let limits = Limits::default();
    let perm = |deg: usize, gens: Vec<Vec<u32>>| FiniteGroup::permutation(deg, &gens, &limits).unwrap();
    let dihedral = |n: u32| {
        let rot: Vec<u32> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<u32> = (0..n).map(|i| (n - i) % n).collect();
        perm(n as usize, vec![rot, refl])
    };
    let cyc = FiniteGroup::cyclic;
    let mut out: Vec<(String, FiniteGroup)> = (1..=12).map(|n| (format!("C{n}"), cyc(n))).collect();
    out.push(("C2xC2".into(), FiniteGroup::klein4()));
    out.push(("C2xC4".into(), FiniteGroup::product(&[&cyc(2), &cyc(4)])));
    out.push(("C2^3".into(), FiniteGroup::product(&[&cyc(2), &cyc(2), &cyc(2)])));
    out.push(("C3xC3".into(), FiniteGroup::product(&[&cyc(3), &cyc(3)])));
    out.push(("C2xC6".into(), FiniteGroup::product(&[&cyc(2), &cyc(6)])));
    out.push(("S3".into(), dihedral(3)));
    out.push(("D4".into(), dihedral(4)));
    out.push(("D5".into(), dihedral(5)));
    out.push(("D6".into(), dihedral(6)));
    out.push(("A4".into(), perm(4, vec![vec![1, 2, 0, 3], vec![1, 0, 3, 2]])));
    out.push(("Q8".into(), quaternion()));
    out.push(("Dic3".into(), dicyclic3()));
    out.into_iter().map(|(n, g)| (n, Arc::new(g))).collect()
}

/// Units `±1, ±i, ±j, ±k` as (negated, unit index).
fn quaternion() -> FiniteGroup {
    let elems: Vec<(bool, u8)> = (0..8).map(|i| (i >= 4, (i % 4) as u8)).collect();
    FiniteGroup::from_elements(&elems, |&(sa, a), &(sb, b)| {
        let (neg, c) = if a == 0 {
            (false, b)
        } else if b == 0 {
            (false, a)
        } else if a == b {
            (true, 0)
        } else {
            (!matches!((a, b), (1, 2) | (2, 3) | (3, 1)), 6 - a - b)
        };
        (sa ^ sb ^ neg, c)
    })
}

/// `a^k x^e` with `a^6 = 1`, `x^2 = a^3`, `x a = a^-1 x`.
fn dicyclic3() -> FiniteGroup {
    let elems: Vec<(u8, u8)> = (0..12).map(|i| ((i % 6) as u8, (i / 6) as u8)).collect();
    FiniteGroup::from_elements(&elems, |&(k1, e1), &(k2, e2)| match (e1, e2) {
        (0, _) => ((k1 + k2) % 6, e2),
        (_, 0) => ((k1 + 6 - k2) % 6, 1),
        _ => ((k1 + 6 - k2 + 3) % 6, 0),
    })
}

/// Orbit count of the induced bijection on `G / (union of kernels of powers)`.
fn expected_components(g: &FiniteGroup, sigma: &[u32]) -> (bool, usize) {
    let n = g.order();
    let mut power: Vec<u32> = (0..n as u32).collect();
    for _ in 0..n {
        power = power.iter().map(|&x| sigma[x as usize]).collect();
    }
    let nilpotent = power.iter().all(|&x| x == 0);
    let nub: Vec<u32> = (0..n as u32).filter(|&x| power[x as usize] == 0).collect();
    let coset = |x: u32| -> Vec<u32> {
        let mut c: Vec<u32> = nub.iter().map(|&k| g.mul(x, k)).collect();
        c.sort_unstable();
        c
    };
    let cosets: BTreeSet<Vec<u32>> = (0..n as u32).map(coset).collect();
    let mut seen: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut orbits = 0;
    for c in &cosets {
        if seen.contains(c) {
            continue;
        }
        orbits += 1;
        let mut cur = c.clone();
        while seen.insert(cur.clone()) {
            cur = coset(sigma[cur[0] as usize]);
        }
    }
    (nilpotent, orbits)
}

fn c7_exhaustive_small() -> Outcome {
    let limits = Limits::default();
    let groups = small_groups();
    let known_endomorphisms = [("C12", 12), ("C2^3", 512), ("C3xC3", 81), ("S3", 10)];
    let mut total = 0;
    for (name, g) in &groups {
        let endos = all_homomorphisms(g, g);
        if let Some((_, count)) = known_endomorphisms.iter().find(|(n, _)| n == name) {
            ensure!(endos.len() == *count, "{name}: {} endomorphisms", endos.len());
        }
        for hom in endos {
            let sigma = hom.images().to_vec();
            let sg = ok(FiniteSigmaGroup::new(g.clone(), sigma.clone()))?;
            let shift = GroupShift::from_sigma_group(&sg, limits).trim();
            let count = ok(analyze_components(&shift, limits.max_level))?.count;
            let (nilpotent, orbits) = expected_components(g, &sigma);
            ensure!(
                count == orbits,
                "{name} sigma {sigma:?}: {count} components, expected {orbits}"
            );
            ensure!((count == 1) == nilpotent, "{name} sigma {sigma:?}: connectedness");
            total += 1;
        }
    }
    Ok(format!("{total} finite sigma-groups over {} groups", groups.len()))
}

fn mutations_fail(g: &GroupShift, rep: &sigma_kit::DecompositionReport) -> std::result::Result<usize, String> {
    let mut mutants = Vec::new();
    let mut m = rep.clone();
    m.tail_power += 1;
    mutants.push(m);
    let mut m = rep.clone();
    m.factors.pop();
    mutants.push(m);
    let mut m = rep.clone();
    m.chain.swap(1, rep.chain.len() - 1);
    mutants.push(m);
    let mut m = rep.clone();
    m.factors[0] = FiniteGroup::cyclic(3);
    mutants.push(m);
    for (i, m) in mutants.iter().enumerate() {
        ensure!(!ok(verify_series(g, m))?.is_empty(), "mutant {i} verified");
    }
    Ok(mutants.len())
}

fn c8_two_paths() -> Outcome {
    let limits = Limits::default();
    let c4 = Arc::new(FiniteGroup::cyclic(4));
    let full = GroupShift::full(c4.clone(), limits);
    let even = ok(GroupShift::full_over(c4, &[2], limits))?;
    let kitchens = classics("kitchens")?;
    let e = |g: u32, k: u32| product_index(&[4, 2], &[g, k]);
    let g2 = ok(GroupShift::full_over(
        kitchens.alphabet().clone(),
        &[0, e(2, 0)],
        limits,
    ))?;
    let mut mutants = 0;
    for (name, g, mid) in [("full C4", &full, &even), ("kitchens", &kitchens, &g2)] {
        let a = ok(decompose(g))?;
        let b = ok(decompose_via(g, mid))?;
        ensure!(ok(series_equivalent(&a, &b, &limits))?, "{name}: paths not equivalent");
        ensure!(
            ok(verify_series(g, &b))?.is_empty(),
            "{name}: second path fails verification"
        );
        mutants += mutations_fail(g, &a)?;
    }
    Ok(format!(
        "both paths equivalent on full C4 and kitchens; {mutants} mutants rejected"
    ))
}

fn c9_classification() -> Outcome {
    let limits = Limits {
        enumeration: 4096,
        ..Limits::default()
    };
    let a5 = Arc::new(ok(FiniteGroup::permutation(5, &a5_generators(), &limits))?);
    let full = GroupShift::full(a5.clone(), limits);
    let mut kinds = BTreeSet::new();
    for sub in ok(normal_window_subshifts(&a5, 1, &limits))? {
        if ok(sub.compare(&full))? == Comparison::Equal {
            kinds.insert("full".to_string());
            continue;
        }
        match ok(classify_normal_in_benign(&a5, &sub))? {
            NormalClassification::FrobeniusKernel(0) => kinds.insert("trivial".to_string()),
            NormalClassification::FrobeniusKernel(r) => kinds.insert(format!("frobenius kernel {r}")),
            other => return Err(format!("unexpected {other:?}")),
        };
    }
    let expected: BTreeSet<String> = ["trivial", "frobenius kernel 1", "full"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    ensure!(kinds == expected, "A5 kinds {kinds:?}");
    let c2 = Arc::new(FiniteGroup::cyclic(2));
    let diagonal = classics("diagonal_c2")?;
    match ok(classify_normal_in_benign(&c2, &diagonal))? {
        NormalClassification::Recurrence { r: 1, psi, quotient } => {
            ensure!(psi.images() == [0, 1], "psi {:?}", psi.images());
            ensure!(
                ok(recognize_full_up_to_isomorphism(&ok(quotient.image())?))?.map(|a| a.order()) == Some(2),
                "image"
            );
            ensure!(ok(brute_force_surjective(&quotient, 4))?, "not surjective at depth 4");
        }
        other => return Err(format!("diagonal classified as {other:?}")),
    }
    Ok("A5 window 2: {trivial, Frobenius kernel, full}; C2 diagonal: Recurrence(1, id), onto at depth 4".into())
}

fn c10_oracle() -> Outcome {
    let limits = Limits::default();
    let mut objects = 0;
    let mut inconsistent = 0;
    for (name, g) in bundled_shifts(&limits) {
        let report = ok(oracle_check(&name, &g, 5))?;
        if report.nub_consistent == Some(false) {
            inconsistent += 1;
        }
        ensure!(report.passed, "{name}: {report:?}");
        ensure!(report.nub_consistent == Some(true), "{name}: components not certified");
        objects += 1;
    }
    ensure!(inconsistent == 0, "{inconsistent} inconsistent certificates");
    Ok(format!(
        "{objects} objects: closures to depth 5, partitions to depth 4, 0 inconsistent certificates"
    ))
}

fn c11_properties() -> Outcome {
    let limits = Limits::default();
    let mut skipped = Vec::new();
    let shifts = bundled_shifts(&limits);
    for (name, g) in &shifts {
        if !all_properties(g).map_err(|m| format!("{name}: {m}"))? {
            skipped.push(name.clone());
        }
    }
    let config = Config {
        cases: 32,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new(config);
    runner
        .run(&shift_case(), |case| {
            let g = case.build();
            all_properties(&g)
                .map(|_| ())
                .map_err(proptest::test_runner::TestCaseError::fail)
        })
        .map_err(|e| e.to_string())?;
    let mut line = format!("{} fixture objects and 32 random shifts", shifts.len());
    if !skipped.is_empty() {
        line.push_str(&format!("; higher-block check over budget for {}", skipped.join(", ")));
    }
    Ok(line)
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("strongly sigma-etale iff gcd(alpha, n) = 1", c1_strongly_etale),
        ("sigma-set components over the base", c2_sconnected3),
        ("easy_babbitt decomposition", c3_easy_babbitt),
        ("kitchens decomposition", c4_kitchens),
        ("babbitt_long decomposition", c5_babbitt_long),
        ("square_quotient components", c6_square_quotient),
        ("finite sigma-groups of order <= 12", c7_exhaustive_small),
        ("decomposition path independence", c8_two_paths),
        ("normal subshift classification", c9_classification),
        ("oracle agreement on bundled fixtures", c10_oracle),
        ("property suite", c11_properties),
    ];
    let mut failed = 0;
    for (i, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {title}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {title}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
