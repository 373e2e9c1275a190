//! Line-oriented fixture files.
//!
//! ```text
//! # comment
//! [group c4]
//! kind = cyclic
//! order = 4
//!
//! [shift easy]
//! alphabet = c4
//! window_len = 1
//! generators = (1,0); (0,2)
//! ```
//!
//! Sections: `group` (kinds `cyclic`, `product`, `klein4`, `table`,
//! `permutation`), `shift`, `sigma_group` (optionally with `delta` and
//! `action`), `delta`, `sigma_set`. Elements are 0-based indices and 0 is
//! the identity.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois::{components_over_base, DeltaContext, DeltaGroup};
use crate::group::{build_group, Elem, FiniteGroup, GroupDescriptor};
use crate::limits::Limits;
use crate::shift::GroupShift;
use crate::sigma::FiniteSigmaGroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupDecl {
    Cyclic(usize),
    /// Direct product of previously named groups.
    Product(Vec<String>),
    Klein4,
    Table(Vec<Vec<Elem>>),
    Permutation {
        degree: usize,
        generators: Vec<Vec<u32>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftDecl {
    pub alphabet: String,
    pub window_len: usize,
    pub generators: Vec<Vec<Elem>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaGroupDecl {
    pub group: String,
    pub sigma: Vec<Elem>,
    pub delta: Option<String>,
    pub action: Vec<Vec<Elem>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaDecl {
    pub group: String,
    pub sigma: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaSetDecl {
    pub sigma: Vec<usize>,
    pub delta: Option<String>,
    pub action: Vec<Vec<usize>>,
}

/// A declaration with its validated value.
#[derive(Debug, Clone)]
pub struct Named<D, V> {
    pub name: String,
    pub decl: D,
    pub value: V,
}

#[derive(Debug, Clone)]
pub struct SigmaGroupValue {
    pub sigma_group: FiniteSigmaGroup,
    pub delta_group: Option<DeltaGroup>,
}

#[derive(Debug, Clone)]
pub struct SigmaSetValue {
    pub context: DeltaContext,
    pub action: Vec<Vec<usize>>,
    pub components: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Fixture {
    pub groups: Vec<Named<GroupDecl, Arc<FiniteGroup>>>,
    pub deltas: Vec<Named<DeltaDecl, DeltaContext>>,
    pub shifts: Vec<Named<ShiftDecl, GroupShift>>,
    pub sigma_groups: Vec<Named<SigmaGroupDecl, SigmaGroupValue>>,
    pub sigma_sets: Vec<Named<SigmaSetDecl, SigmaSetValue>>,
    pub notices: Vec<String>,
}

/// Something `analyze` accepts.
#[derive(Debug, Clone)]
pub enum Analyzable {
    Shift(GroupShift),
    SigmaGroup(FiniteSigmaGroup),
}

impl Fixture {
    pub fn object_count(&self) -> usize {
        self.groups.len() + self.deltas.len() + self.shifts.len() + self.sigma_groups.len() + self.sigma_sets.len()
    }

    pub fn group(&self, name: &str) -> Option<&Arc<FiniteGroup>> {
        self.groups.iter().find(|g| g.name == name).map(|g| &g.value)
    }

    pub fn shift(&self, name: &str) -> Option<&GroupShift> {
        self.shifts.iter().find(|s| s.name == name).map(|s| &s.value)
    }

    pub fn sigma_group(&self, name: &str) -> Option<&SigmaGroupValue> {
        self.sigma_groups.iter().find(|s| s.name == name).map(|s| &s.value)
    }

    pub fn sigma_set(&self, name: &str) -> Option<&SigmaSetValue> {
        self.sigma_sets.iter().find(|s| s.name == name).map(|s| &s.value)
    }

    pub fn delta(&self, name: &str) -> Option<&DeltaContext> {
        self.deltas.iter().find(|s| s.name == name).map(|s| &s.value)
    }

    /// Shifts and finite sigma-groups, shifts first, each in file order.
    pub fn analyzable(&self) -> Vec<(String, Analyzable)> {
        let mut out: Vec<(String, Analyzable)> = self
            .shifts
            .iter()
            .map(|s| (s.name.clone(), Analyzable::Shift(s.value.clone())))
            .collect();
        out.extend(
            self.sigma_groups
                .iter()
                .map(|s| (s.name.clone(), Analyzable::SigmaGroup(s.value.sigma_group.clone()))),
        );
        out
    }

    pub fn analyzable_named(&self, name: &str) -> Option<Analyzable> {
        self.analyzable().into_iter().find(|(n, _)| n == name).map(|(_, a)| a)
    }

    /// Canonical text form; parsing it gives back the same declarations.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.groups {
            let _ = writeln!(out, "[group {}]", g.name);
            match &g.decl {
                GroupDecl::Cyclic(n) => {
                    let _ = writeln!(out, "kind = cyclic\norder = {n}");
                }
                GroupDecl::Product(parts) => {
                    let _ = writeln!(out, "kind = product\nfactors = {}", parts.join(", "));
                }
                GroupDecl::Klein4 => {
                    let _ = writeln!(out, "kind = klein4");
                }
                GroupDecl::Table(rows) => {
                    let _ = writeln!(out, "kind = table\nrows = {}", tuples(rows));
                }
                GroupDecl::Permutation { degree, generators } => {
                    let _ = writeln!(
                        out,
                        "kind = permutation\ndegree = {degree}\ngenerators = {}",
                        tuples(generators)
                    );
                }
            }
            out.push('\n');
        }
        for d in &self.deltas {
            let _ = writeln!(
                out,
                "[delta {}]\ngroup = {}\nsigma = {}\n",
                d.name,
                d.decl.group,
                list(&d.decl.sigma)
            );
        }
        for s in &self.shifts {
            let _ = writeln!(
                out,
                "[shift {}]\nalphabet = {}\nwindow_len = {}\ngenerators = {}\n",
                s.name,
                s.decl.alphabet,
                s.decl.window_len,
                tuples(&s.decl.generators)
            );
        }
        for s in &self.sigma_groups {
            let _ = writeln!(
                out,
                "[sigma_group {}]\ngroup = {}\nsigma = {}",
                s.name,
                s.decl.group,
                list(&s.decl.sigma)
            );
            if let Some(d) = &s.decl.delta {
                let _ = writeln!(out, "delta = {d}\naction = {}", tuples(&s.decl.action));
            }
            out.push('\n');
        }
        for s in &self.sigma_sets {
            let _ = writeln!(out, "[sigma_set {}]\nsigma = {}", s.name, list(&s.decl.sigma));
            if let Some(d) = &s.decl.delta {
                let _ = writeln!(out, "delta = {d}\naction = {}", tuples(&s.decl.action));
            }
            out.push('\n');
        }
        out
    }
}

fn list<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn tuples<T: ToString>(rows: &[Vec<T>]) -> String {
    rows.iter()
        .map(|r| format!("({})", list(r)))
        .collect::<Vec<_>>()
        .join("; ")
}

struct Value {
    text: String,
    line: usize,
    column: usize,
}

impl Value {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn usize(&self) -> Result<usize> {
        self.text
            .trim()
            .parse()
            .map_err(|_| self.err(format!("expected a non-negative integer, found `{}`", self.text)))
    }

    fn ident(&self) -> Result<String> {
        let t = self.text.trim();
        if t.is_empty()
            || !t
                .chars()
                .all(|c| c.is_alphanumeric() || c == '_' || c == '-' || c == '.')
        {
            return Err(self.err(format!("expected a name, found `{t}`")));
        }
        Ok(t.to_string())
    }

    fn idents(&self) -> Result<Vec<String>> {
        self.text
            .split(',')
            .map(|part| {
                Value {
                    text: part.to_string(),
                    line: self.line,
                    column: self.column,
                }
                .ident()
            })
            .collect()
    }

    fn ints(&self) -> Result<Vec<u32>> {
        let t = self.text.trim();
        if t.is_empty() {
            return Ok(Vec::new());
        }
        t.split(',')
            .map(|x| {
                x.trim()
                    .parse::<u32>()
                    .map_err(|_| self.err(format!("expected an element index, found `{}`", x.trim())))
            })
            .collect()
    }

    fn tuples(&self) -> Result<Vec<Vec<u32>>> {
        let t = self.text.trim();
        if t.is_empty() {
            return Ok(Vec::new());
        }
        t.split(';')
            .map(|part| {
                let p = part.trim();
                let inner = p
                    .strip_prefix('(')
                    .and_then(|p| p.strip_suffix(')'))
                    .ok_or_else(|| self.err(format!("expected a parenthesized tuple, found `{p}`")))?;
                Value {
                    text: inner.to_string(),
                    line: self.line,
                    column: self.column,
                }
                .ints()
            })
            .collect()
    }
}

struct Section {
    kind: String,
    name: String,
    line: usize,
    entries: BTreeMap<String, Value>,
}

impl Section {
    fn get(&self, key: &str) -> Result<&Value> {
        self.entries.get(key).ok_or_else(|| Error::Parse {
            line: self.line,
            column: 1,
            message: format!("section `{}` is missing key `{key}`", self.name),
        })
    }

    fn validation(&self, message: impl Into<String>) -> Error {
        Error::Validation {
            object: self.name.clone(),
            message: message.into(),
        }
    }
}

const KINDS: [&str; 5] = ["group", "shift", "sigma_group", "delta", "sigma_set"];

fn split_sections(text: &str) -> Result<Vec<Section>> {
    let mut sections: Vec<Section> = Vec::new();
    let mut names: HashMap<String, usize> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - content.trim_start().len();
        if let Some(header) = trimmed.strip_prefix('[') {
            let header = header.strip_suffix(']').ok_or(Error::Parse {
                line,
                column: indent + 1,
                message: "unterminated section header".into(),
            })?;
            let mut parts = header.split_whitespace();
            let kind = parts.next().unwrap_or("").to_string();
            let name = parts.next().unwrap_or("").to_string();
            if !KINDS.contains(&kind.as_str()) {
                return Err(Error::Parse {
                    line,
                    column: indent + 2,
                    message: format!("unknown section kind `{kind}`"),
                });
            }
            if name.is_empty() || parts.next().is_some() {
                return Err(Error::Parse {
                    line,
                    column: indent + 2,
                    message: "section header must be `[kind name]`".into(),
                });
            }
            if let Some(prev) = names.insert(name.clone(), line) {
                return Err(Error::Parse {
                    line,
                    column: indent + 2,
                    message: format!("name `{name}` already declared on line {prev}"),
                });
            }
            sections.push(Section {
                kind,
                name,
                line,
                entries: BTreeMap::new(),
            });
            continue;
        }
        let eq = content.find('=').ok_or(Error::Parse {
            line,
            column: indent + 1,
            message: "expected `key = value`".into(),
        })?;
        let section = sections.last_mut().ok_or(Error::Parse {
            line,
            column: indent + 1,
            message: "entry outside of any section".into(),
        })?;
        let key = content[..eq].trim().to_string();
        let value_start = eq + 1 + (content[eq + 1..].len() - content[eq + 1..].trim_start().len());
        let value = Value {
            text: content[eq + 1..].trim().to_string(),
            line,
            column: value_start + 1,
        };
        if section.entries.insert(key.clone(), value).is_some() {
            return Err(Error::Parse {
                line,
                column: indent + 1,
                message: format!("duplicate key `{key}`"),
            });
        }
    }
    Ok(sections)
}

fn group_decl(s: &Section) -> Result<GroupDecl> {
    let kind = s.get("kind")?;
    Ok(match kind.ident()?.as_str() {
        "cyclic" => GroupDecl::Cyclic(s.get("order")?.usize()?),
        "product" => GroupDecl::Product(s.get("factors")?.idents()?),
        "klein4" => GroupDecl::Klein4,
        "table" => GroupDecl::Table(s.get("rows")?.tuples()?),
        "permutation" => GroupDecl::Permutation {
            degree: s.get("degree")?.usize()?,
            generators: s.get("generators")?.tuples()?,
        },
        other => return Err(kind.err(format!("unknown group kind `{other}`"))),
    })
}

fn descriptor(
    name: &str,
    decls: &HashMap<String, (GroupDecl, &Section)>,
    visiting: &mut Vec<String>,
) -> Result<GroupDescriptor> {
    let (decl, section) = decls.get(name).ok_or_else(|| Error::Validation {
        object: name.to_string(),
        message: "unknown group".into(),
    })?;
    if visiting.iter().any(|v| v == name) {
        return Err(section.validation("product refers to itself"));
    }
    visiting.push(name.to_string());
    let out = match decl {
        GroupDecl::Cyclic(n) => GroupDescriptor::Cyclic(*n),
        GroupDecl::Klein4 => GroupDescriptor::Klein4,
        GroupDecl::Table(rows) => GroupDescriptor::Table(rows.clone()),
        GroupDecl::Permutation { degree, generators } => GroupDescriptor::Permutation {
            degree: *degree,
            generators: generators.clone(),
        },
        GroupDecl::Product(parts) => {
            if parts.is_empty() {
                return Err(section.validation("product needs at least one factor"));
            }
            GroupDescriptor::Product(
                parts
                    .iter()
                    .map(|p| descriptor(p, decls, visiting))
                    .collect::<Result<_>>()?,
            )
        }
    };
    visiting.pop();
    Ok(out)
}

fn with_object<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Validation { .. } | Error::Parse { .. } => e,
        other => Error::Validation {
            object: name.to_string(),
            message: other.to_string(),
        },
    })
}

fn elem_range(s: &Section, xs: &[u32], bound: usize, what: &str) -> Result<()> {
    match xs.iter().find(|&&x| x as usize >= bound) {
        Some(x) => Err(s.validation(format!("{what} index {x} is out of range (size {bound})"))),
        None => Ok(()),
    }
}

/// Parses and validates a fixture.
pub fn parse_fixture(text: &str, limits: &Limits) -> Result<Fixture> {
    let sections = split_sections(text)?;
    let mut fixture = Fixture::default();
    let mut decls: HashMap<String, (GroupDecl, &Section)> = HashMap::new();
    for s in sections.iter().filter(|s| s.kind == "group") {
        decls.insert(s.name.clone(), (group_decl(s)?, s));
    }
    for s in sections.iter().filter(|s| s.kind == "group") {
        let desc = descriptor(&s.name, &decls, &mut Vec::new())?;
        let group = with_object(&s.name, build_group(&desc, limits))?;
        fixture.groups.push(Named {
            name: s.name.clone(),
            decl: decls[&s.name].0.clone(),
            value: Arc::new(group),
        });
    }
    let lookup_group = |fixture: &Fixture, s: &Section, name: &str| -> Result<Arc<FiniteGroup>> {
        fixture
            .group(name)
            .cloned()
            .ok_or_else(|| s.validation(format!("unknown group `{name}`")))
    };
    for s in sections.iter().filter(|s| s.kind == "delta") {
        let decl = DeltaDecl {
            group: s.get("group")?.ident()?,
            sigma: s.get("sigma")?.ints()?,
        };
        let group = lookup_group(&fixture, s, &decl.group)?;
        elem_range(s, &decl.sigma, group.order(), "sigma image")?;
        let value = with_object(&s.name, DeltaContext::new(group, decl.sigma.clone()))?;
        fixture.deltas.push(Named {
            name: s.name.clone(),
            decl,
            value,
        });
    }
    for s in sections.iter().filter(|s| s.kind == "shift") {
        let decl = ShiftDecl {
            alphabet: s.get("alphabet")?.ident()?,
            window_len: s.get("window_len")?.usize()?,
            generators: s.get("generators")?.tuples()?,
        };
        let alphabet = lookup_group(&fixture, s, &decl.alphabet)?;
        for g in &decl.generators {
            if g.len() != decl.window_len + 1 {
                return Err(s.validation(format!(
                    "generator {g:?} has length {}, expected {}",
                    g.len(),
                    decl.window_len + 1
                )));
            }
            elem_range(s, g, alphabet.order(), "generator")?;
        }
        let shift = with_object(
            &s.name,
            GroupShift::new(alphabet, decl.window_len, &decl.generators, *limits),
        )?;
        let mut distinct = decl.generators.clone();
        distinct.push(vec![0; decl.window_len + 1]);
        distinct.sort();
        distinct.dedup();
        if shift.window().size() != distinct.len() {
            fixture.notices.push(format!(
                "shift `{}`: window closed from {} generators to {} blocks",
                s.name,
                decl.generators.len(),
                shift.window().size()
            ));
        }
        fixture.shifts.push(Named {
            name: s.name.clone(),
            decl,
            value: shift,
        });
    }
    for s in sections.iter().filter(|s| s.kind == "sigma_group") {
        let decl = SigmaGroupDecl {
            group: s.get("group")?.ident()?,
            sigma: s.get("sigma")?.ints()?,
            delta: s.entries.get("delta").map(|v| v.ident()).transpose()?,
            action: s
                .entries
                .get("action")
                .map(|v| v.tuples())
                .transpose()?
                .unwrap_or_default(),
        };
        let group = lookup_group(&fixture, s, &decl.group)?;
        elem_range(s, &decl.sigma, group.order(), "sigma image")?;
        let sigma_group = with_object(&s.name, FiniteSigmaGroup::new(group.clone(), decl.sigma.clone()))?;
        let delta_group = match &decl.delta {
            Some(d) => {
                let ctx = fixture
                    .delta(d)
                    .cloned()
                    .ok_or_else(|| s.validation(format!("unknown delta `{d}`")))?;
                for row in &decl.action {
                    elem_range(s, row, group.order(), "action image")?;
                }
                Some(with_object(
                    &s.name,
                    DeltaGroup::new(ctx, group, decl.action.clone(), decl.sigma.clone()),
                )?)
            }
            None if !decl.action.is_empty() => return Err(s.validation("`action` given without `delta`")),
            None => None,
        };
        fixture.sigma_groups.push(Named {
            name: s.name.clone(),
            decl,
            value: SigmaGroupValue {
                sigma_group,
                delta_group,
            },
        });
    }
    for s in sections.iter().filter(|s| s.kind == "sigma_set") {
        let to_usize = |xs: Vec<u32>| xs.into_iter().map(|x| x as usize).collect::<Vec<usize>>();
        let decl = SigmaSetDecl {
            sigma: to_usize(s.get("sigma")?.ints()?),
            delta: s.entries.get("delta").map(|v| v.ident()).transpose()?,
            action: s
                .entries
                .get("action")
                .map(|v| v.tuples())
                .transpose()?
                .unwrap_or_default()
                .into_iter()
                .map(to_usize)
                .collect(),
        };
        let (context, action) = match &decl.delta {
            Some(d) => (
                fixture
                    .delta(d)
                    .cloned()
                    .ok_or_else(|| s.validation(format!("unknown delta `{d}`")))?,
                decl.action.clone(),
            ),
            None if !decl.action.is_empty() => return Err(s.validation("`action` given without `delta`")),
            None => (DeltaContext::trivial(), vec![(0..decl.sigma.len()).collect()]),
        };
        let components = with_object(&s.name, components_over_base(&decl.sigma, &context, &action))?;
        fixture.sigma_sets.push(Named {
            name: s.name.clone(),
            decl,
            value: SigmaSetValue {
                context,
                action,
                components,
            },
        });
    }
    Ok(fixture)
}
