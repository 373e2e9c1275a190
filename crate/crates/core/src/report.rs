//! Per-object invariant reports with JSON and text renderings.

use std::fmt::Write as _;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::blocks::BlockGroup;
use crate::decompose::{decompose, recognize_full_up_to_isomorphism, verify_series, DecompositionReport};
use crate::error::{Error, Result};
use crate::fixture::Analyzable;
use crate::group::{Elem, FiniteGroup};
use crate::limits::Limits;
use crate::shift::GroupShift;
use crate::sigma::FiniteSigmaGroup;
use crate::topology::{analyze_components, finite_space_sigma_components};

/// A computed value, or the reason it is missing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Field<T> {
    Value(T),
    Undecided { undecided: String },
    Failed { error: String },
}

impl<T> Field<T> {
    pub fn from_result(r: Result<T>) -> Self {
        match r {
            Ok(v) => Field::Value(v),
            Err(e) if e.is_undecided() => Field::Undecided {
                undecided: e.to_string(),
            },
            Err(e) => Field::Failed { error: e.to_string() },
        }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Field::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_undecided(&self) -> bool {
        matches!(self, Field::Undecided { .. })
    }

    fn map<U>(&self, f: impl FnOnce(&T) -> U) -> Field<U> {
        match self {
            Field::Value(v) => Field::Value(f(v)),
            Field::Undecided { undecided } => Field::Undecided {
                undecided: undecided.clone(),
            },
            Field::Failed { error } => Field::Failed { error: error.clone() },
        }
    }

    fn render(&self, f: impl FnOnce(&T) -> String) -> String {
        match self {
            Field::Value(v) => f(v),
            Field::Undecided { undecided } => format!("undecided ({undecided})"),
            Field::Failed { error } => format!("error ({error})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorSummary {
    pub order: usize,
    pub abelian: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionSummary {
    pub chain_length: usize,
    pub head_order: usize,
    pub head_sigma: Vec<u32>,
    pub factors: Vec<FactorSummary>,
    pub tail_order: usize,
    pub tail_power: usize,
    pub verified: bool,
}

impl DecompositionSummary {
    pub fn new(rep: &DecompositionReport, failures: &[String]) -> Self {
        DecompositionSummary {
            chain_length: rep.chain.len(),
            head_order: rep.head.order(),
            head_sigma: rep.head.sigma().images().to_vec(),
            factors: rep
                .factors
                .iter()
                .map(|f| FactorSummary {
                    order: f.order(),
                    abelian: f.is_abelian(),
                })
                .collect(),
            tail_order: rep.tail.order(),
            tail_power: rep.tail_power,
            verified: failures.is_empty(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ObjectReport {
    pub name: String,
    pub kind: &'static str,
    pub sigma_dimension: usize,
    pub order: usize,
    pub alphabet_order: usize,
    pub window_len: usize,
    pub limit_degree: usize,
    pub components: Field<usize>,
    pub sigma_connected: Field<bool>,
    /// Nilpotency power when some shift power kills everything.
    pub sigma_infinitesimal: Field<Option<usize>>,
    pub strongly_sigma_etale: Field<bool>,
    /// Alphabet order of a full shift isomorphic to the object.
    pub benign: Field<Option<usize>>,
    pub decomposition: Field<DecompositionSummary>,
}

impl ObjectReport {
    pub fn has_undecided(&self) -> bool {
        self.components.is_undecided()
            || self.sigma_connected.is_undecided()
            || self.sigma_infinitesimal.is_undecided()
            || self.strongly_sigma_etale.is_undecided()
            || self.benign.is_undecided()
            || self.decomposition.is_undecided()
    }

    /// Cross-field implications that must hold whenever both sides are known.
    pub fn flags_consistent(&self) -> bool {
        let mut ok = true;
        if let Field::Value(Some(_)) = self.sigma_infinitesimal {
            ok &= self.limit_degree == 1;
            ok &= self.sigma_connected.value().is_none_or(|&c| c);
        }
        if let Field::Value(true) = self.strongly_sigma_etale {
            ok &= self.limit_degree == 1;
        }
        if let (Some(&n), Some(&c)) = (self.components.value(), self.sigma_connected.value()) {
            ok &= (n == 1) == c;
        }
        if let Some(d) = self.decomposition.value() {
            ok &= d.factors.iter().map(|f| f.order).product::<usize>() == self.limit_degree;
            if let Some(&n) = self.components.value() {
                let map: Vec<usize> = d.head_sigma.iter().map(|&x| x as usize).collect();
                ok &= n == finite_space_sigma_components(&map).len();
            }
        }
        ok
    }
}

/// The shift an analyzable object stands for.
pub fn as_shift(object: &Analyzable, limits: &Limits) -> Result<GroupShift> {
    match object {
        Analyzable::Shift(s) => Ok(s.with_limits(*limits).trim()),
        Analyzable::SigmaGroup(g) => Ok(GroupShift::from_sigma_group(g, *limits).trim()),
    }
}

/// Full invariant report for one object.
pub fn analyze(name: &str, object: &Analyzable, limits: &Limits) -> Result<ObjectReport> {
    let shift = as_shift(object, limits)?;
    let ld = shift.limit_degree();
    let components = Field::from_result(analyze_components(&shift, limits.max_level).map(|c| c.count));
    let sigma_connected = components.map(|&n| n == 1);
    let sigma_infinitesimal = Field::from_result(if ld == 1 {
        shift.is_sigma_infinitesimal()
    } else {
        Ok(None)
    });
    let strongly_sigma_etale = Field::from_result(if ld == 1 {
        shift.finite_sigma_group_of().map(|g| g.is_automorphism())
    } else {
        Ok(false)
    });
    let benign = Field::from_result(recognize_full_up_to_isomorphism(&shift).map(|a| a.map(|g| g.order())));
    let decomposition = Field::from_result(
        decompose(&shift).and_then(|rep| Ok(DecompositionSummary::new(&rep, &verify_series(&shift, &rep)?))),
    );
    Ok(ObjectReport {
        name: name.to_string(),
        kind: match object {
            Analyzable::Shift(_) => "shift",
            Analyzable::SigmaGroup(_) => "sigma_group",
        },
        sigma_dimension: 0,
        order: 0,
        alphabet_order: shift.alphabet().order(),
        window_len: shift.window_len(),
        limit_degree: ld,
        components,
        sigma_connected,
        sigma_infinitesimal,
        strongly_sigma_etale,
        benign,
        decomposition,
    })
}

/// A shift written out by its alphabet table and window blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftRecord {
    pub alphabet: Vec<Vec<Elem>>,
    pub window_len: usize,
    pub window: Vec<Vec<Elem>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaGroupRecord {
    pub table: Vec<Vec<Elem>>,
    pub sigma: Vec<Elem>,
}

/// Self-contained form of a decomposition, enough to re-run verification.
/// Quotient witnesses are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub object: String,
    pub chain: Vec<ShiftRecord>,
    pub head: SigmaGroupRecord,
    pub factors: Vec<Vec<Vec<Elem>>>,
    pub tail: SigmaGroupRecord,
    pub tail_power: usize,
}

impl ShiftRecord {
    fn new(shift: &GroupShift) -> Self {
        ShiftRecord {
            alphabet: shift.alphabet().table_rows(),
            window_len: shift.window_len(),
            window: shift.window().iter().map(|b| b.to_vec()).collect(),
        }
    }

    fn build(&self, limits: &Limits) -> Result<GroupShift> {
        let alphabet = Arc::new(FiniteGroup::from_table(&self.alphabet)?);
        let window = BlockGroup::generated(&alphabet, self.window_len + 1, &self.window, limits.block_budget)?;
        Ok(GroupShift::from_window(self.window_len, window, *limits).trim())
    }
}

impl SigmaGroupRecord {
    fn new(g: &FiniteSigmaGroup) -> Self {
        SigmaGroupRecord {
            table: g.group().table_rows(),
            sigma: g.sigma().images().to_vec(),
        }
    }

    fn build(&self) -> Result<FiniteSigmaGroup> {
        FiniteSigmaGroup::new(Arc::new(FiniteGroup::from_table(&self.table)?), self.sigma.clone())
    }
}

impl SeriesRecord {
    pub fn new(object: &str, rep: &DecompositionReport) -> Self {
        SeriesRecord {
            object: object.to_string(),
            chain: rep.chain.iter().map(ShiftRecord::new).collect(),
            head: SigmaGroupRecord::new(&rep.head),
            factors: rep.factors.iter().map(|f| f.table_rows()).collect(),
            tail: SigmaGroupRecord::new(&rep.tail),
            tail_power: rep.tail_power,
        }
    }

    /// Rebuilds the report with an empty witness list.
    pub fn to_report(&self, limits: &Limits) -> Result<DecompositionReport> {
        Ok(DecompositionReport {
            chain: self.chain.iter().map(|s| s.build(limits)).collect::<Result<_>>()?,
            head: self.head.build()?,
            factors: self
                .factors
                .iter()
                .map(|t| FiniteGroup::from_table(t))
                .collect::<Result<_>>()?,
            tail: self.tail.build()?,
            tail_power: self.tail_power,
            witnesses: Vec::new(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Malformed(e.to_string()))
}

fn yes_no(b: &bool) -> String {
    if *b { "yes" } else { "no" }.to_string()
}

/// Human-readable rendering.
pub fn render_text(report: &ObjectReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} ({})", report.name, report.kind);
    let _ = writeln!(
        out,
        "  alphabet order {}, window length {}",
        report.alphabet_order, report.window_len
    );
    let _ = writeln!(out, "  limit degree: {}", report.limit_degree);
    let _ = writeln!(out, "  components: {}", report.components.render(|n| n.to_string()));
    let _ = writeln!(out, "  sigma-connected: {}", report.sigma_connected.render(yes_no));
    let _ = writeln!(
        out,
        "  sigma-infinitesimal: {}",
        report.sigma_infinitesimal.render(|p| match p {
            Some(p) => format!("yes (power {p})"),
            None => "no".to_string(),
        })
    );
    let _ = writeln!(
        out,
        "  strongly sigma-etale: {}",
        report.strongly_sigma_etale.render(yes_no)
    );
    let _ = writeln!(
        out,
        "  benign: {}",
        report.benign.render(|a| match a {
            Some(n) => format!("yes (alphabet order {n})"),
            None => "no".to_string(),
        })
    );
    let _ = writeln!(out, "  decomposition: {}", report.decomposition.render(render_summary));
    out
}

pub fn render_summary(d: &DecompositionSummary) -> String {
    let factors: Vec<String> = d.factors.iter().map(|f| format!("{}", f.order)).collect();
    format!(
        "head order {} sigma {:?}; factors [{}]; tail order {} power {}; {}",
        d.head_order,
        d.head_sigma,
        factors.join(", "),
        d.tail_order,
        d.tail_power,
        if d.verified { "verified" } else { "NOT verified" }
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::sigma::FiniteSigmaGroup;
    use std::sync::Arc;

    fn cyclic_sigma(n: usize, alpha: u32) -> Analyzable {
        let images = (0..n as u32).map(|x| (x * alpha) % n as u32).collect();
        Analyzable::SigmaGroup(FiniteSigmaGroup::new(Arc::new(FiniteGroup::cyclic(n)), images).unwrap())
    }

    #[test]
    fn etale_flags() {
        let limits = Limits::default();
        let r = analyze("s3", &cyclic_sigma(4, 3), &limits).unwrap();
        assert_eq!(r.strongly_sigma_etale, Field::Value(true));
        assert_eq!(r.components, Field::Value(3));
        assert!(r.flags_consistent());
        let r = analyze("s2", &cyclic_sigma(4, 2), &limits).unwrap();
        assert_eq!(r.strongly_sigma_etale, Field::Value(false));
        assert_eq!(r.sigma_infinitesimal, Field::Value(Some(2)));
        assert!(r.flags_consistent());
    }

    #[test]
    fn json_is_stable() {
        let limits = Limits::default();
        let a = to_json(&analyze("s", &cyclic_sigma(4, 3), &limits).unwrap()).unwrap();
        let b = to_json(&analyze("s", &cyclic_sigma(4, 3), &limits).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.find("\"name\"").unwrap() < a.find("\"limit_degree\"").unwrap());
    }

    #[test]
    fn undecided_fields_serialize_as_objects() {
        let f: Field<usize> = Field::from_result(Err(Error::Undecided { level: 3 }));
        assert!(f.is_undecided());
        assert!(to_json(&f).unwrap().contains("undecided"));
    }

    #[test]
    fn series_record_round_trip() {
        let Analyzable::SigmaGroup(g) = cyclic_sigma(4, 2) else {
            unreachable!()
        };
        let shift = GroupShift::from_sigma_group(&g, Limits::default()).trim();
        let rep = decompose(&shift).unwrap();
        let record = SeriesRecord::new("s", &rep);
        let back = SeriesRecord::from_json(&to_json(&record).unwrap()).unwrap();
        assert_eq!(back, record);
        let rebuilt = back.to_report(&Limits::default()).unwrap();
        assert!(verify_series(&shift, &rebuilt).unwrap().is_empty());
        let mut bad = back.clone();
        bad.tail_power += 1;
        assert!(!verify_series(&shift, &bad.to_report(&Limits::default()).unwrap())
            .unwrap()
            .is_empty());
    }
}
