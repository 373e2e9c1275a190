use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sigma_kit::report::{as_shift, render_summary, render_text, to_json, DecompositionSummary};
use sigma_kit::{
    analyze, analyze_components, classify_normal_in_benign, decompose, normal_window_subshifts, oracle_check,
    parse_fixture, verify_series, Analyzable, Error, Fixture, GroupShift, Limits, NormalClassification, SeriesRecord,
};

#[derive(Parser)]
#[command(
    name = "sigma-kit",
    version,
    about = "Invariants and decompositions of group shifts of finite type"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full invariant report for every shift and finite sigma-group in a fixture.
    Analyze(Common),
    /// Component count and component group of each object, plus sigma-set counts.
    Components(Common),
    /// Subnormal series with simple full-shift factors.
    Decompose(Common),
    /// Classify normal subshifts of the full shift over a simple alphabet.
    Classify {
        #[command(flatten)]
        common: Common,
        /// Enumerate normal window subshifts over this group instead of reading shifts.
        #[arg(long)]
        alphabet: Option<String>,
        /// Window length for the enumeration.
        #[arg(long, default_value_t = 1)]
        window_len: usize,
    },
    /// Re-check a decomposition written by `decompose --json`.
    Verify {
        #[command(flatten)]
        common: Common,
        /// JSON file holding one series record or an array of them.
        report: PathBuf,
    },
    /// Compare the main algorithms with brute-force recomputation.
    Oracle {
        #[command(flatten)]
        common: Common,
        /// Depth of the comparison; defaults to 2 * window length + 4.
        #[arg(long)]
        oracle_depth: Option<usize>,
    },
}

#[derive(Args)]
struct Common {
    /// Fixture file.
    fixture: PathBuf,
    /// Restrict to one named object.
    #[arg(long)]
    object: Option<String>,
    #[arg(long)]
    json: bool,
    /// Deepest level searched for stabilization.
    #[arg(long, default_value_t = 64)]
    max_level: usize,
    /// Largest group enumerated in full by subgroup searches.
    #[arg(long)]
    enumeration: Option<usize>,
}

/// Outcome severity, ordered so the worst wins.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Ok,
    Undecided,
    Failed,
}

impl Status {
    fn of(e: &Error) -> Status {
        if e.is_undecided() {
            Status::Undecided
        } else {
            Status::Failed
        }
    }

    fn code(self) -> ExitCode {
        match self {
            Status::Ok => ExitCode::SUCCESS,
            Status::Undecided => ExitCode::from(2),
            Status::Failed => ExitCode::from(1),
        }
    }
}

struct Run {
    fixture: Fixture,
    limits: Limits,
    object: Option<String>,
    json: bool,
    status: Status,
    text: Vec<String>,
    values: Vec<Value>,
}

impl Run {
    fn open(common: &Common) -> Result<Run, String> {
        let mut limits = Limits::from_env();
        limits.max_level = common.max_level;
        if let Some(e) = common.enumeration {
            limits.enumeration = e;
        }
        let text = std::fs::read_to_string(&common.fixture)
            .map_err(|e| format!("cannot read {}: {e}", common.fixture.display()))?;
        let fixture = parse_fixture(&text, &limits).map_err(|e| format!("{}: {e}", common.fixture.display()))?;
        if let Some(name) = &common.object {
            let known = fixture.analyzable().iter().any(|(n, _)| n == name)
                || fixture.sigma_sets.iter().any(|s| &s.name == name);
            if !known {
                return Err(format!("no object named {name}"));
            }
        }
        Ok(Run {
            fixture,
            limits,
            object: common.object.clone(),
            json: common.json,
            status: Status::Ok,
            text: Vec::new(),
            values: Vec::new(),
        })
    }

    fn selected(&self, name: &str) -> bool {
        self.object.as_deref().is_none_or(|o| o == name)
    }

    fn objects(&self) -> Vec<(String, Analyzable)> {
        self.fixture
            .analyzable()
            .into_iter()
            .filter(|(n, _)| self.selected(n))
            .collect()
    }

    fn mark(&mut self, status: Status) {
        self.status = self.status.max(status);
    }

    fn error(&mut self, name: &str, e: &Error) {
        self.mark(Status::of(e));
        let key = if e.is_undecided() { "undecided" } else { "error" };
        if e.is_undecided() {
            self.text.push(format!("{name}: {e}"));
        } else {
            self.text.push(format!("{name}: error: {e}"));
        }
        self.values.push(json!({ "object": name, key: e.to_string() }));
    }

    fn finish(self) -> ExitCode {
        if self.json {
            match to_json(&self.values) {
                Ok(s) => println!("{s}"),
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(1);
                }
            }
        } else {
            for line in &self.text {
                println!("{line}");
            }
        }
        self.status.code()
    }
}

fn analyze_cmd(run: &mut Run) {
    for (name, object) in run.objects() {
        match analyze(&name, &object, &run.limits) {
            Ok(report) => {
                if report.has_undecided() {
                    run.mark(Status::Undecided);
                }
                run.text.push(render_text(&report));
                run.values
                    .push(serde_json::to_value(&report).expect("report serializes"));
            }
            Err(e) => run.error(&name, &e),
        }
    }
}

fn components_cmd(run: &mut Run) {
    for (name, object) in run.objects() {
        let result = as_shift(&object, &run.limits).and_then(|s| analyze_components(&s, run.limits.max_level));
        match result {
            Ok(c) => {
                let sigma = c.certificate.pi0.sigma().images().to_vec();
                run.text.push(format!(
                    "{name}: {} component(s); component group order {} with sigma {:?}; certified at level {}",
                    c.count,
                    c.certificate.pi0.order(),
                    sigma,
                    c.certificate.level
                ));
                run.values.push(json!({
                    "object": name,
                    "components": c.count,
                    "pi0_order": c.certificate.pi0.order(),
                    "pi0_sigma": sigma,
                    "level": c.certificate.level,
                }));
            }
            Err(e) => run.error(&name, &e),
        }
    }
    let sets: Vec<(String, usize)> = run
        .fixture
        .sigma_sets
        .iter()
        .filter(|s| run.selected(&s.name))
        .map(|s| (s.name.clone(), s.value.components))
        .collect();
    for (name, count) in sets {
        run.text.push(format!("{name}: {count} component(s) over the base"));
        run.values.push(json!({ "object": name, "components": count }));
    }
}

fn decompose_cmd(run: &mut Run) {
    for (name, object) in run.objects() {
        let result = as_shift(&object, &run.limits)
            .and_then(|s| decompose(&s).and_then(|rep| Ok((verify_series(&s, &rep)?, rep))));
        match result {
            Ok((failures, rep)) => {
                if !failures.is_empty() {
                    run.mark(Status::Failed);
                }
                let summary = DecompositionSummary::new(&rep, &failures);
                run.text.push(format!("{name}: {}", render_summary(&summary)));
                run.values
                    .push(serde_json::to_value(SeriesRecord::new(&name, &rep)).expect("record serializes"));
            }
            Err(e) => run.error(&name, &e),
        }
    }
}

fn classification_value(name: &str, c: &NormalClassification) -> (String, Value) {
    match c {
        NormalClassification::FrobeniusKernel(r) => (
            format!("{name}: kernel of the shift power {r}"),
            json!({ "object": name, "kind": "frobenius_kernel", "r": r }),
        ),
        NormalClassification::Recurrence { r, psi, .. } => (
            format!("{name}: recurrence of order {r}, psi {:?}", psi.images()),
            json!({ "object": name, "kind": "recurrence", "r": r, "psi": psi.images() }),
        ),
    }
}

fn classify_one(run: &mut Run, name: &str, shift: &GroupShift) {
    match classify_normal_in_benign(shift.alphabet(), shift) {
        Ok(c) => {
            let (line, value) = classification_value(name, &c);
            run.text.push(line);
            run.values.push(value);
        }
        Err(e) => run.error(name, &e),
    }
}

fn classify_cmd(run: &mut Run, alphabet: Option<String>, window_len: usize) -> Result<(), String> {
    let Some(group_name) = alphabet else {
        for (name, object) in run.objects() {
            match as_shift(&object, &run.limits) {
                Ok(shift) => classify_one(run, &name, &shift),
                Err(e) => run.error(&name, &e),
            }
        }
        return Ok(());
    };
    let group = run
        .fixture
        .group(&group_name)
        .ok_or(format!("no group named {group_name}"))?
        .clone();
    let subs = normal_window_subshifts(&group, window_len, &run.limits).map_err(|e| e.to_string())?;
    let full = GroupShift::full(group.clone(), run.limits);
    for (i, sub) in subs.iter().enumerate() {
        let name = format!("{group_name}/{i}");
        if sub.compare(&full).map_err(|e| e.to_string())? == sigma_kit::Comparison::Equal {
            run.text.push(format!("{name}: the whole shift"));
            run.values.push(json!({ "object": name, "kind": "full" }));
            continue;
        }
        classify_one(run, &name, sub);
    }
    Ok(())
}

fn verify_cmd(run: &mut Run, path: &PathBuf) -> Result<(), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let items = match value {
        Value::Array(items) => items,
        other => vec![other],
    };
    for item in items {
        let record = SeriesRecord::from_json(&item.to_string()).map_err(|e| format!("{}: {e}", path.display()))?;
        if !run.selected(&record.object) {
            continue;
        }
        let object = run
            .fixture
            .analyzable_named(&record.object)
            .ok_or(format!("no object named {}", record.object))?;
        let result = as_shift(&object, &run.limits)
            .and_then(|s| record.to_report(&run.limits).and_then(|rep| verify_series(&s, &rep)));
        match result {
            Ok(failures) => {
                if !failures.is_empty() {
                    run.mark(Status::Failed);
                }
                let line = if failures.is_empty() {
                    "verified".to_string()
                } else {
                    format!("FAILED ({})", failures.join(", "))
                };
                run.text.push(format!("{}: {line}", record.object));
                run.values
                    .push(json!({ "object": record.object, "failures": failures }));
            }
            Err(e) => run.error(&record.object, &e),
        }
    }
    Ok(())
}

fn oracle_cmd(run: &mut Run, depth: Option<usize>) {
    for (name, object) in run.objects() {
        let result = as_shift(&object, &run.limits)
            .and_then(|s| oracle_check(&name, &s, depth.unwrap_or(2 * s.window_len() + 4)));
        match result {
            Ok(report) => {
                if !report.passed {
                    run.mark(Status::Failed);
                }
                run.text.push(format!(
                    "{name}: {} at depth {} (closure mismatches {:?}, partition mismatches {:?}, surjective {:?}, nub consistent {:?})",
                    if report.passed { "pass" } else { "FAIL" },
                    report.depth,
                    report.closure_mismatches,
                    report.partition_mismatches,
                    report.quotient_surjective,
                    report.nub_consistent
                ));
                run.values
                    .push(serde_json::to_value(&report).expect("report serializes"));
            }
            Err(e) => run.error(&name, &e),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Analyze(c) | Command::Components(c) | Command::Decompose(c) => c,
        Command::Classify { common, .. } | Command::Verify { common, .. } | Command::Oracle { common, .. } => common,
    };
    let mut run = match Run::open(common) {
        Ok(run) => run,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let outcome = match cli.command {
        Command::Analyze(_) => {
            analyze_cmd(&mut run);
            Ok(())
        }
        Command::Components(_) => {
            components_cmd(&mut run);
            Ok(())
        }
        Command::Decompose(_) => {
            decompose_cmd(&mut run);
            Ok(())
        }
        Command::Classify {
            alphabet, window_len, ..
        } => classify_cmd(&mut run, alphabet, window_len),
        Command::Verify { report, .. } => verify_cmd(&mut run, &report),
        Command::Oracle { oracle_depth, .. } => {
            oracle_cmd(&mut run, oracle_depth);
            Ok(())
        }
    };
    if let Err(msg) = outcome {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }
    run.finish()
}
