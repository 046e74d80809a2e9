//! Document formats: cone, process and system literals, input documents,
//! and report serialization. Rationals are always strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cone::PolyhedralCone;
use crate::control::LinearSystem;
use crate::error::{Error, Result};
use crate::fixtures;
use crate::matrix::RationalMatrix;
use crate::process::ConvexProcess;
use crate::rational::{self, Rational};
use crate::spectrum::SpectrumReport;
use crate::subspace::Subspace;
use crate::verifier::VerificationReport;

type Rows = Vec<Vec<String>>;

/// Either generators (`rays`, `lineality`) or constraints (`ineqs`, `eqs`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeLiteral {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lineality: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ineqs: Option<Rows>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eqs: Option<Rows>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessLiteral {
    pub n: usize,
    pub graph: ConeLiteral,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemLiteral {
    #[serde(rename = "A")]
    pub a: Rows,
    #[serde(rename = "B", default)]
    pub b: Rows,
    #[serde(rename = "C", default)]
    pub c: Rows,
    #[serde(rename = "D", default)]
    pub d: Rows,
}

/// A named object is either a literal or the name of a shipped fixture.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry<T> {
    Fixture(String),
    Literal(T),
}

/// Parameters of one command; command-line flags override these.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryBlock {
    pub command: String,
    #[serde(default)]
    pub process: Option<String>,
    #[serde(default)]
    pub cone: Option<String>,
    #[serde(default)]
    pub w: Option<String>,
    #[serde(default)]
    pub q: Option<usize>,
    #[serde(default)]
    pub range: Option<[String; 2]>,
    #[serde(default)]
    pub grid: Option<usize>,
    #[serde(default)]
    pub tol: Option<String>,
    #[serde(default)]
    pub lambdas: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    #[serde(default)]
    pub processes: BTreeMap<String, Entry<ProcessLiteral>>,
    #[serde(default)]
    pub cones: BTreeMap<String, Entry<ConeLiteral>>,
    #[serde(default)]
    pub systems: BTreeMap<String, SystemLiteral>,
    #[serde(default)]
    pub queries: Vec<QueryBlock>,
}

/// 1-based line of the first occurrence of `needle` in `text`.
fn line_of(text: &str, needle: &str) -> Option<usize> {
    text.lines().position(|l| l.contains(needle)).map(|i| i + 1)
}

fn anchored(text: &str, name: &str, err: Error) -> Error {
    let msg = match err {
        Error::Parse(m) => m,
        other => other.to_string(),
    };
    match line_of(text, &format!("\"{name}\"")) {
        Some(line) => Error::Parse(format!("line {line}: {name}: {msg}")),
        None => Error::Parse(format!("{name}: {msg}")),
    }
}

fn parse_rows(rows: &[Vec<String>], width: usize, what: &str) -> Result<Vec<Vec<Rational>>> {
    rows.iter()
        .map(|r| {
            if r.len() != width {
                return Err(Error::Parse(format!("{what} entry has length {}, expected {width}", r.len())));
            }
            rational::parse_vec(r)
        })
        .collect()
}

fn format_rows(rows: &[Vec<Rational>]) -> Rows {
    rows.iter().map(|r| rational::format_vec(r)).collect()
}

impl ConeLiteral {
    pub fn to_cone(&self) -> Result<PolyhedralCone> {
        let v = self.rays.is_some() || self.lineality.is_some();
        let h = self.ineqs.is_some() || self.eqs.is_some();
        let empty = Vec::new();
        match (v, h) {
            (true, true) => Err(Error::Parse("cone literal mixes generators and constraints".into())),
            (false, true) => PolyhedralCone::from_constraints(
                self.dim,
                &parse_rows(self.ineqs.as_ref().unwrap_or(&empty), self.dim, "ineqs")?,
                &parse_rows(self.eqs.as_ref().unwrap_or(&empty), self.dim, "eqs")?,
            ),
            // no fields at all is the zero cone
            _ => PolyhedralCone::from_generators(
                self.dim,
                &parse_rows(self.rays.as_ref().unwrap_or(&empty), self.dim, "rays")?,
                &parse_rows(self.lineality.as_ref().unwrap_or(&empty), self.dim, "lineality")?,
            ),
        }
    }

    /// Canonical generator form.
    pub fn from_cone(c: &PolyhedralCone) -> Self {
        Self {
            dim: c.dim(),
            rays: Some(format_rows(c.rays())),
            lineality: Some(format_rows(&c.lineality().basis_vectors())),
            ineqs: None,
            eqs: None,
        }
    }

    /// Canonical constraint form.
    pub fn constraints_of(c: &PolyhedralCone) -> Self {
        Self {
            dim: c.dim(),
            rays: None,
            lineality: None,
            ineqs: Some(format_rows(c.inequalities())),
            eqs: Some(format_rows(&c.equations().basis_vectors())),
        }
    }
}

impl ProcessLiteral {
    pub fn to_process(&self) -> Result<ConvexProcess> {
        ConvexProcess::new(self.n, self.graph.to_cone()?)
    }

    pub fn from_process(h: &ConvexProcess) -> Self {
        Self {
            n: h.n(),
            graph: ConeLiteral::from_cone(h.graph()),
        }
    }
}

fn matrix(rows: &[Vec<String>], nrows: usize, ncols: usize, what: &str) -> Result<RationalMatrix> {
    if rows.is_empty() {
        // an omitted block is zero; with a zero dimension it is simply empty
        return Ok(RationalMatrix::zeros(nrows, ncols));
    }
    let width = rows[0].len();
    let parsed = parse_rows(rows, width, what)?;
    RationalMatrix::from_rows(width, &parsed)
}

impl SystemLiteral {
    /// Omitted `B`, `C`, `D` blocks are empty (zero inputs or outputs), with
    /// sizes inferred from the blocks that are present.
    pub fn to_system(&self) -> Result<LinearSystem> {
        let a = matrix(&self.a, 0, 0, "A")?;
        let n = a.rows();
        let m = self.b.first().map(Vec::len).or_else(|| self.d.first().map(Vec::len)).unwrap_or(0);
        let p = if self.c.is_empty() { self.d.len() } else { self.c.len() };
        let b = matrix(&self.b, n, m, "B")?;
        let c = matrix(&self.c, p, n, "C")?;
        let d = matrix(&self.d, p, m, "D")?;
        LinearSystem::new(a, b, c, d)
    }

    pub fn from_system(s: &LinearSystem) -> Self {
        Self {
            a: format_rows(&s.a.row_vecs()),
            b: format_rows(&s.b.row_vecs()),
            c: format_rows(&s.c.row_vecs()),
            d: format_rows(&s.d.row_vecs()),
        }
    }
}

/// A parsed document with every named object resolved.
#[derive(Clone, Debug, Default)]
pub struct Workspace {
    pub processes: BTreeMap<String, ConvexProcess>,
    pub cones: BTreeMap<String, PolyhedralCone>,
    pub systems: BTreeMap<String, LinearSystem>,
    pub queries: Vec<QueryBlock>,
}

impl Workspace {
    /// Parses a JSON document; every error message carries a line number.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: InputDocument = if text.trim().is_empty() {
            InputDocument::default()
        } else {
            serde_json::from_str(text)
                .map_err(|e| {
                    let full = e.to_string();
                    let msg = full.rsplit_once(" at line ").map_or(full.as_str(), |(m, _)| m);
                    Error::Parse(format!("line {}, column {}: {msg}", e.line(), e.column()))
                })?
        };
        let mut ws = Workspace {
            queries: doc.queries,
            ..Default::default()
        };
        for (name, entry) in &doc.processes {
            let h = match entry {
                Entry::Fixture(f) => fixtures::process(f).ok_or_else(|| Error::Parse(format!("unknown fixture {f:?}"))),
                Entry::Literal(lit) => lit.to_process(),
            }
            .map_err(|e| anchored(text, name, e))?;
            ws.processes.insert(name.clone(), h);
        }
        for (name, entry) in &doc.cones {
            let c = match entry {
                Entry::Fixture(f) => fixtures::cone(f).ok_or_else(|| Error::Parse(format!("unknown fixture {f:?}"))),
                Entry::Literal(lit) => lit.to_cone(),
            }
            .map_err(|e| anchored(text, name, e))?;
            ws.cones.insert(name.clone(), c);
        }
        for (name, lit) in &doc.systems {
            let s = lit.to_system().map_err(|e| anchored(text, name, e))?;
            ws.systems.insert(name.clone(), s);
        }
        Ok(ws)
    }

    /// A process by name: document entries first, then shipped fixtures.
    pub fn process(&self, name: &str) -> Result<ConvexProcess> {
        self.processes
            .get(name)
            .cloned()
            .or_else(|| fixtures::process(name))
            .ok_or_else(|| Error::Parse(format!("unknown process {name:?}")))
    }

    /// A cone by name; `<process>.K` names the cone paired with a fixture.
    pub fn cone(&self, name: &str) -> Result<PolyhedralCone> {
        self.cones
            .get(name)
            .cloned()
            .or_else(|| fixtures::cone(name))
            .ok_or_else(|| Error::Parse(format!("unknown cone {name:?}")))
    }

    /// A subspace given as a named cone that must be a subspace.
    pub fn subspace(&self, name: &str) -> Result<Subspace> {
        let c = self.cone(name)?;
        if !c.is_subspace() {
            return Err(Error::Parse(format!("cone {name:?} is not a subspace")));
        }
        Ok(c.lineality().clone())
    }

    pub fn system(&self, name: &str) -> Result<LinearSystem> {
        self.systems
            .get(name)
            .cloned()
            .ok_or_else(|| Error::Parse(format!("unknown system {name:?}")))
    }

    pub fn query(&self, command: &str) -> Option<&QueryBlock> {
        self.queries.iter().find(|q| q.command == command)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MemberDoc {
    pub lambda: String,
    pub certificate: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalDoc {
    pub lo: String,
    pub hi: String,
    pub lo_status: String,
    pub hi_status: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpectrumDoc {
    pub exact_members: Vec<MemberDoc>,
    pub intervals: Vec<IntervalDoc>,
    pub nonmembers_checked: Vec<String>,
}

impl From<&SpectrumReport> for SpectrumDoc {
    fn from(r: &SpectrumReport) -> Self {
        Self {
            exact_members: r
                .exact_members
                .iter()
                .map(|(l, x)| MemberDoc {
                    lambda: rational::format(l),
                    certificate: rational::format_vec(x),
                })
                .collect(),
            intervals: r
                .intervals
                .iter()
                .map(|i| IntervalDoc {
                    lo: rational::format(&i.lo),
                    hi: rational::format(&i.hi),
                    lo_status: i.lo_status.as_str().into(),
                    hi_status: i.hi_status.as_str().into(),
                })
                .collect(),
            nonmembers_checked: rational::format_vec(&r.nonmembers_checked),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationDoc {
    pub k_weakly_invariant: bool,
    pub k_invariance_witness: Option<Vec<String>>,
    pub h0_cap_k_is_subspace: bool,
    pub lin_k: Rows,
    pub w_star: Option<Rows>,
    pub w: Option<Rows>,
    pub containment_h0k_in_w: bool,
    pub w_in_k: bool,
    pub hypothesis_a: bool,
    pub hypothesis_b: bool,
    pub hypothesis_c: bool,
    pub hypothesis_c_failures: Vec<String>,
    pub split_not_rational: Option<String>,
    pub reference: String,
    pub conclusion: String,
    pub certificate: Option<MemberDoc>,
}

fn basis_rows(s: &Subspace) -> Rows {
    format_rows(&s.basis_vectors())
}

impl From<&VerificationReport> for VerificationDoc {
    fn from(r: &VerificationReport) -> Self {
        Self {
            k_weakly_invariant: r.k_weakly_invariant,
            k_invariance_witness: r.k_invariance_witness.as_deref().map(rational::format_vec),
            h0_cap_k_is_subspace: r.h0_cap_k_is_subspace,
            lin_k: basis_rows(&r.lin_k),
            w_star: r.w_star.as_ref().map(basis_rows),
            w: r.w.as_ref().map(basis_rows),
            containment_h0k_in_w: r.containment_h0k_in_w,
            w_in_k: r.w_in_k,
            hypothesis_a: r.hypothesis_a,
            hypothesis_b: r.hypothesis_b,
            hypothesis_c: r.hypothesis_c,
            hypothesis_c_failures: rational::format_vec(&r.hypothesis_c_failures),
            split_not_rational: r.split_not_rational.clone(),
            reference: match r.reference {
                crate::verifier::LinearReference::Hat => "hat".into(),
                crate::verifier::LinearReference::Minimal => "minimal".into(),
            },
            conclusion: r.conclusion.as_str().into(),
            certificate: r.certificate.as_ref().map(|(l, x)| MemberDoc {
                lambda: rational::format(l),
                certificate: rational::format_vec(x),
            }),
        }
    }
}

fn tuple(v: &[String]) -> String {
    format!("({})", v.join(", "))
}

fn tuples(rows: &[Vec<String>]) -> String {
    if rows.is_empty() {
        "-".into()
    } else {
        rows.iter().map(|r| tuple(r)).collect::<Vec<_>>().join(" ")
    }
}

pub fn process_text(h: &ConvexProcess) -> String {
    let g = h.graph();
    format!(
        "process n={}\n  rays: {}\n  lineality: {}\n  inequalities: {}\n  equations: {}\n",
        h.n(),
        tuples(&format_rows(g.rays())),
        tuples(&basis_rows(g.lineality())),
        tuples(&format_rows(g.inequalities())),
        tuples(&basis_rows(g.equations())),
    )
}

pub fn spectrum_text(doc: &SpectrumDoc) -> String {
    let mut out = String::new();
    if doc.intervals.is_empty() {
        out.push_str("no members on the grid\n");
    }
    for i in &doc.intervals {
        out.push_str(&format!("interval [{}, {}]  ({}, {})\n", i.lo, i.hi, i.lo_status, i.hi_status));
    }
    for m in &doc.exact_members {
        out.push_str(&format!("member {}  eigenvector {}\n", m.lambda, tuple(&m.certificate)));
    }
    out.push_str(&format!("non-members checked: {}\n", doc.nonmembers_checked.join(" ")));
    out
}

pub fn verification_text(doc: &VerificationDoc) -> String {
    let yn = |b: bool| if b { "yes" } else { "no" };
    let mut out = String::new();
    out.push_str(&format!("K weakly H-invariant: {}", yn(doc.k_weakly_invariant)));
    if let Some(w) = &doc.k_invariance_witness {
        out.push_str(&format!("  (H(x) misses K at x = {})", tuple(w)));
    }
    out.push('\n');
    out.push_str(&format!("H(0) ∩ K is a subspace: {}\n", yn(doc.h0_cap_k_is_subspace)));
    out.push_str(&format!("lin(K) = span {}\n", tuples(&doc.lin_k)));
    match &doc.w_star {
        Some(w) => out.push_str(&format!("W* = span {}\n", tuples(w))),
        None => out.push_str("W* = unavailable\n"),
    }
    if let Some(w) = &doc.w {
        out.push_str(&format!("W = span {}\n", tuples(w)));
    }
    out.push_str(&format!(
        "(a) H(0) ∩ K ⊆ W ⊆ K: {}  [H(0) ∩ K ⊆ W: {}, W ⊆ K: {}]\n",
        yn(doc.hypothesis_a),
        yn(doc.containment_h0k_in_w),
        yn(doc.w_in_k)
    ));
    out.push_str(&format!("(b) W weakly invariant ({}): {}\n", doc.reference, yn(doc.hypothesis_b)));
    out.push_str(&format!("(c) W ⊆ (L - λI)W for all λ >= 0 ({}): {}", doc.reference, yn(doc.hypothesis_c)));
    if !doc.hypothesis_c_failures.is_empty() {
        out.push_str(&format!("  [fails at λ = {}]", doc.hypothesis_c_failures.join(", ")));
    }
    out.push('\n');
    if let Some(msg) = &doc.split_not_rational {
        out.push_str(&format!("split not rational: {msg}\n"));
    }
    out.push_str(&format!("conclusion: {}\n", doc.conclusion));
    if let Some(c) = &doc.certificate {
        out.push_str(&format!("certificate: λ = {}, ξ = {}\n", c.lambda, tuple(&c.certificate)));
    }
    out
}
