//! The `.qvr` text format and deterministic structured output.
//!
//! Grammar (line oriented; a token starting with `#` begins a comment):
//!
//! ```text
//! quiver <name>
//! vertex <id> [<id> ...]
//! arrow <id> <source> <target> [deg=<int>]
//! rel <first> <second>          # the path first-then-second lies in I
//! ```
//!
//! Ids match `[A-Za-z0-9_#*.]+` so generated names such as `al.be.ze*#1` and
//! `iota_a#2` round-trip. Note the relation direction: `rel a b` puts the
//! composite a-then-b into the ideal (left-to-right composition); the
//! opposite convention is common elsewhere, so documents written for other
//! tools need their relation pairs swapped.
//!
//! Structured output is canonical JSON: objects with sorted keys, arrays in
//! canonical order, every number rendered as an exact decimal or `p/q`
//! string. Equal values produce byte-identical output.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::blossom::{Blossoming, Orbit};
use crate::construct::{IsoMapping, Permutation, RepetitionQuiver, SheetElem};
use crate::invariants::{AGTable, HochschildProfile};
use crate::matrix::{
    ActionEntry, BasisLabel, Block, ConditionReport, DualReport, SemisimpleAlgebra, UTAlgebra,
    VElement,
};
use crate::quiver::{
    Arrow, BoundQuiver, CycleSummary, PathExpr, QuiverStats, ThreadSummary, ValidationReport,
    Violation,
};
use crate::{CheckItem, CheckReport, Error, Result};

/// Output format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

/// Anything the CLI can print.
pub trait Emit {
    fn to_text(&self) -> String;
    fn to_structured(&self) -> Value;
}

/// Render a value in the requested format. Structured output is canonical
/// JSON with a trailing newline; text output is human-readable.
pub fn emit<T: Emit + ?Sized>(value: &T, format: Format) -> String {
    match format {
        Format::Text => value.to_text(),
        Format::Structured => {
            let mut text = serde_json::to_string_pretty(&value.to_structured())
                .expect("canonical JSON serializes");
            text.push('\n');
            text
        }
    }
}

/// Parse structured output back into a JSON tree.
pub fn read_structured(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn valid_id(token: &str) -> bool {
    !token.is_empty()
        && token
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '#' | '*' | '.'))
}

/// A parsed `.qvr` document: the raw text, the quiver, and the source
/// position of each vertex/arrow declaration for diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QvrDocument {
    pub raw: String,
    pub quiver: BoundQuiver,
    /// id → (line, column), 1-based, for every declared vertex and arrow.
    positions: BTreeMap<String, (usize, usize)>,
}

impl QvrDocument {
    pub fn parse(text: &str) -> Result<Self> {
        parse_document(text)
    }

    /// Source position of a declared vertex or arrow id.
    pub fn position_of(&self, id: &str) -> Option<(usize, usize)> {
        self.positions.get(id).copied()
    }
}

/// Parse a `.qvr` document, keeping only the quiver.
pub fn parse_qvr(text: &str) -> Result<BoundQuiver> {
    Ok(parse_document(text)?.quiver)
}

fn parse_document(text: &str) -> Result<QvrDocument> {
    let mut name: Option<String> = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut relations: Vec<(String, String)> = Vec::new();
    let mut degrees: BTreeMap<String, i64> = BTreeMap::new();
    let mut positions: BTreeMap<String, (usize, usize)> = BTreeMap::new();

    for (line_index, raw_line) in text.lines().enumerate() {
        let line_no = line_index + 1;
        let err = |column: usize, message: String| Error::Parse {
            line: line_no,
            column,
            message,
        };
        // Tokenize with byte columns; a token starting with '#' opens a comment.
        let mut tokens: Vec<(usize, &str)> = Vec::new();
        let mut column = 1;
        for token in raw_line.split_inclusive(char::is_whitespace) {
            let trimmed = token.trim_end();
            if !trimmed.is_empty() {
                if trimmed.starts_with('#') {
                    break;
                }
                tokens.push((column, trimmed));
            }
            column += token.len();
        }
        if tokens.is_empty() {
            continue;
        }
        let (head_col, head) = tokens[0];
        let args = &tokens[1..];
        match head {
            "quiver" => {
                let [(col, id)] = args else {
                    return Err(err(head_col, "expected: quiver <name>".into()));
                };
                if !valid_id(id) {
                    return Err(err(*col, format!("invalid name '{id}'")));
                }
                if name.is_some() {
                    return Err(err(head_col, "duplicate quiver declaration".into()));
                }
                name = Some(id.to_string());
            }
            "vertex" => {
                if args.is_empty() {
                    return Err(err(head_col, "expected: vertex <id> [<id> ...]".into()));
                }
                for (col, id) in args {
                    if !valid_id(id) {
                        return Err(err(*col, format!("invalid vertex id '{id}'")));
                    }
                    if vertices.iter().any(|v| v == id) {
                        return Err(err(*col, format!("duplicate vertex id '{id}'")));
                    }
                    positions.insert(id.to_string(), (line_no, *col));
                    vertices.push(id.to_string());
                }
            }
            "arrow" => {
                if args.len() < 3 || args.len() > 4 {
                    return Err(err(
                        head_col,
                        "expected: arrow <id> <source> <target> [deg=<int>]".into(),
                    ));
                }
                let (id_col, id) = args[0];
                if !valid_id(id) {
                    return Err(err(id_col, format!("invalid arrow id '{id}'")));
                }
                if arrows.iter().any(|a| a.id == id) || vertices.iter().any(|v| v == id) {
                    return Err(err(id_col, format!("duplicate id '{id}'")));
                }
                for (col, vertex) in &args[1..3] {
                    if !vertices.iter().any(|v| v == vertex) {
                        return Err(err(*col, format!("unknown vertex '{vertex}'")));
                    }
                }
                if let Some((col, spec)) = args.get(3) {
                    let Some(value) = spec.strip_prefix("deg=") else {
                        return Err(err(*col, format!("expected deg=<int>, got '{spec}'")));
                    };
                    let value: i64 = value
                        .parse()
                        .map_err(|_| err(*col, format!("invalid degree '{value}'")))?;
                    if value != 0 {
                        degrees.insert(id.to_string(), value);
                    }
                }
                positions.insert(id.to_string(), (line_no, id_col));
                arrows.push(Arrow::new(id, args[1].1, args[2].1));
            }
            "rel" => {
                let [(first_col, first), (second_col, second)] = args else {
                    return Err(err(head_col, "expected: rel <arrow> <arrow>".into()));
                };
                let Some(first_arrow) = arrows.iter().find(|a| a.id == *first) else {
                    return Err(err(*first_col, format!("unknown arrow '{first}'")));
                };
                let Some(second_arrow) = arrows.iter().find(|a| a.id == *second) else {
                    return Err(err(*second_col, format!("unknown arrow '{second}'")));
                };
                if first_arrow.target != second_arrow.source {
                    return Err(err(
                        *first_col,
                        format!(
                            "relation {first}·{second} is not composable: t({first}) = {} ≠ s({second}) = {}",
                            first_arrow.target, second_arrow.source
                        ),
                    ));
                }
                let pair = (first.to_string(), second.to_string());
                if relations.contains(&pair) {
                    return Err(err(
                        *first_col,
                        format!("duplicate relation {first}·{second}"),
                    ));
                }
                relations.push(pair);
            }
            other => {
                return Err(err(
                    head_col,
                    format!("unknown directive '{other}' (expected quiver/vertex/arrow/rel)"),
                ))
            }
        }
    }

    relations.sort();
    let quiver = BoundQuiver {
        name: name.unwrap_or_else(|| "unnamed".into()),
        vertices,
        arrows,
        relations,
        degrees: None,
    }
    .with_degrees(degrees);
    Ok(QvrDocument {
        raw: text.to_string(),
        quiver,
        positions,
    })
}

/// Serialize a quiver as a `.qvr` document; `parse_qvr ∘ emit_qvr` is the
/// identity on canonically sorted quivers.
pub fn emit_qvr(bq: &BoundQuiver) -> String {
    let mut out = format!("quiver {}\n", bq.name);
    for v in &bq.vertices {
        out.push_str(&format!("vertex {v}\n"));
    }
    for a in &bq.arrows {
        let deg = bq.degree_of(&a.id);
        if deg != 0 {
            out.push_str(&format!(
                "arrow {} {} {} deg={deg}\n",
                a.id, a.source, a.target
            ));
        } else {
            out.push_str(&format!("arrow {} {} {}\n", a.id, a.source, a.target));
        }
    }
    for (first, second) in &bq.relations {
        out.push_str(&format!("rel {first} {second}\n"));
    }
    out
}

fn int(value: impl std::fmt::Display) -> Value {
    Value::String(value.to_string())
}

/// Exact string form of a rational: `p` or `p/q`.
pub fn rational_string(value: &BigRational) -> String {
    if value.is_integer() {
        value.to_integer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

fn object(entries: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (key, value) in entries {
        map.insert(key.to_string(), value);
    }
    Value::Object(map)
}

impl Emit for BoundQuiver {
    fn to_text(&self) -> String {
        emit_qvr(self)
    }

    fn to_structured(&self) -> Value {
        object(vec![
            ("type", json!("bound_quiver")),
            ("name", json!(self.name)),
            ("vertices", json!(self.vertices)),
            (
                "arrows",
                Value::Array(
                    self.arrows
                        .iter()
                        .map(|a| {
                            object(vec![
                                ("id", json!(a.id)),
                                ("source", json!(a.source)),
                                ("target", json!(a.target)),
                                ("deg", int(self.degree_of(&a.id))),
                            ])
                        })
                        .collect(),
                ),
            ),
            (
                "relations",
                Value::Array(self.relations.iter().map(|(a, b)| json!([a, b])).collect()),
            ),
        ])
    }
}

impl Emit for ValidationReport {
    fn to_text(&self) -> String {
        let mut out = format!(
            "validation ({}): {}\n  vertices {}  arrows {}  d {}  connected {}\n",
            self.mode.as_str(),
            if self.pass { "pass" } else { "fail" },
            self.stats.vertices,
            self.stats.arrows,
            self.stats.d_invariant,
            self.stats.connected,
        );
        for v in &self.violations {
            out.push_str(&format!("  [{}] {}\n", v.condition, v.message));
        }
        out
    }

    fn to_structured(&self) -> Value {
        let violations: Vec<Value> = self
            .violations
            .iter()
            .map(
                |Violation {
                     condition,
                     items,
                     message,
                 }| {
                    object(vec![
                        ("condition", json!(condition)),
                        ("items", json!(items)),
                        ("message", json!(message)),
                    ])
                },
            )
            .collect();
        let QuiverStats {
            vertices,
            arrows,
            d_invariant,
            connected,
        } = &self.stats;
        object(vec![
            ("type", json!("validation_report")),
            ("mode", json!(self.mode.as_str())),
            ("pass", json!(self.pass)),
            ("violations", Value::Array(violations)),
            (
                "stats",
                object(vec![
                    ("vertices", int(vertices)),
                    ("arrows", int(arrows)),
                    ("d", int(d_invariant)),
                    ("connected", json!(connected)),
                ]),
            ),
        ])
    }
}

fn paths_json(paths: &[PathExpr]) -> Value {
    Value::Array(paths.iter().map(|p| json!(p.to_string())).collect())
}

impl Emit for ThreadSummary {
    fn to_text(&self) -> String {
        let join = |paths: &[PathExpr]| {
            paths
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        format!(
            "maximal paths: {}\ntrivial threads: {}\nantipaths: {}\noriented cycles: {}\nanticycles: {}\n",
            join(&self.maximal_paths),
            self.trivial_vertices.join(", "),
            join(&self.antipaths),
            join(&self.oriented_cycles),
            join(&self.anticycles),
        )
    }

    fn to_structured(&self) -> Value {
        object(vec![
            ("type", json!("thread_summary")),
            ("maximal_paths", paths_json(&self.maximal_paths)),
            ("trivial_vertices", json!(self.trivial_vertices)),
            ("antipaths", paths_json(&self.antipaths)),
            ("oriented_cycles", paths_json(&self.oriented_cycles)),
            ("anticycles", paths_json(&self.anticycles)),
        ])
    }
}

impl Emit for CycleSummary {
    fn to_text(&self) -> String {
        let join = |paths: &[PathExpr]| {
            paths
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        format!(
            "oriented cycles: {}\nanticycles: {}\n",
            join(&self.oriented),
            join(&self.anti)
        )
    }

    fn to_structured(&self) -> Value {
        object(vec![
            ("type", json!("cycle_summary")),
            ("oriented", paths_json(&self.oriented)),
            ("anticycles", paths_json(&self.anti)),
        ])
    }
}

impl Emit for Blossoming {
    fn to_text(&self) -> String {
        let mut out = emit_qvr(&self.blossomed);
        out.push_str(&format!("# d = {}\n", self.d()));
        for info in &self.threads {
            out.push_str(&format!(
                "# thread {}: sigma#{} {} tau#{}  phi({}) = {}  delta = {}\n",
                info.label,
                info.label,
                info.wp,
                info.label,
                info.label,
                self.phi.image(info.label),
                self.delta[info.label - 1],
            ));
        }
        out
    }

    fn to_structured(&self) -> Value {
        object(vec![
            ("type", json!("blossoming")),
            ("quiver", self.blossomed.to_structured()),
            ("d", int(self.d())),
            (
                "threads",
                Value::Array(
                    self.threads
                        .iter()
                        .map(|t| {
                            object(vec![
                                ("label", int(t.label)),
                                ("wp", json!(t.wp.to_string())),
                                ("sigma", json!(t.sigma)),
                                ("tau", json!(t.tau)),
                                ("source", json!(t.source_vertex)),
                                ("sink", json!(t.sink_vertex)),
                            ])
                        })
                        .collect(),
                ),
            ),
            (
                "phi",
                Value::Array(self.phi.images().iter().map(int).collect()),
            ),
            (
                "delta",
                Value::Array(self.delta.iter().map(|d| json!(d.to_string())).collect()),
            ),
        ])
    }
}

impl Emit for [Orbit] {
    fn to_text(&self) -> String {
        let mut out = String::new();
        for orbit in self {
            out.push_str(&format!(
                "orbit {:?}: type ({}, {})  graded ({}, {})  deltas: {}\n",
                orbit.indices,
                orbit.type_ungraded.0,
                orbit.type_ungraded.1,
                orbit.type_graded.0,
                orbit.type_graded.1,
                orbit
                    .deltas
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }
        out
    }

    fn to_structured(&self) -> Value {
        Value::Array(
            self.iter()
                .map(|orbit| {
                    object(vec![
                        (
                            "indices",
                            Value::Array(orbit.indices.iter().map(int).collect()),
                        ),
                        ("deltas", paths_json(&orbit.deltas)),
                        (
                            "type",
                            json!([
                                orbit.type_ungraded.0.to_string(),
                                orbit.type_ungraded.1.to_string()
                            ]),
                        ),
                        (
                            "type_graded",
                            json!([
                                orbit.type_graded.0.to_string(),
                                orbit.type_graded.1.to_string()
                            ]),
                        ),
                    ])
                })
                .collect(),
        )
    }
}

impl Emit for AGTable {
    fn to_text(&self) -> String {
        let mut out = String::new();
        let kind = if self.is_graded() {
            "phi_graded"
        } else {
            "phi"
        };
        for (q, l, count) in self.entries() {
            out.push_str(&format!("{kind}({q}, {l}) = {count}\n"));
        }
        if self.entries().is_empty() {
            out.push_str(&format!("{kind} is identically zero\n"));
        }
        out
    }

    fn to_structured(&self) -> Value {
        object(vec![
            ("type", json!("ag_table")),
            ("graded", json!(self.is_graded())),
            (
                "entries",
                Value::Array(
                    self.entries()
                        .iter()
                        .map(|(q, l, count)| {
                            json!([q.to_string(), l.to_string(), count.to_string()])
                        })
                        .collect(),
                ),
            ),
        ])
    }
}

impl Emit for HochschildProfile {
    fn to_text(&self) -> String {
        let dims = self
            .dims
            .iter()
            .enumerate()
            .map(|(n, d)| format!("HH^{n} = {d}"))
            .collect::<Vec<_>>()
            .join("\n");
        format!("char = {}  chi = {}\n{dims}\n", self.char_p, self.chi)
    }

    fn to_structured(&self) -> Value {
        object(vec![
            ("type", json!("hochschild_profile")),
            ("char", int(self.char_p)),
            ("chi", int(self.chi)),
            ("dims", Value::Array(self.dims.iter().map(int).collect())),
        ])
    }
}

impl Emit for CheckReport {
    fn to_text(&self) -> String {
        let mut out = String::new();
        for CheckItem { id, pass, witness } in &self.items {
            out.push_str(&format!("{} {}\n", if *pass { "pass" } else { "FAIL" }, id));
            if let Some(witness) = witness {
                out.push_str(&format!("     {witness}\n"));
            }
        }
        out.push_str(&format!(
            "{} of {} checks passed\n",
            self.items.iter().filter(|i| i.pass).count(),
            self.items.len()
        ));
        out
    }

    fn to_structured(&self) -> Value {
        object(vec![
            ("type", json!("check_report")),
            ("pass", json!(self.pass())),
            (
                "items",
                Value::Array(
                    self.items
                        .iter()
                        .map(|CheckItem { id, pass, witness }| {
                            object(vec![
                                ("id", json!(id)),
                                ("pass", json!(pass)),
                                (
                                    "witness",
                                    witness.as_ref().map_or(Value::Null, |w| json!(w)),
                                ),
                            ])
                        })
                        .collect(),
                ),
            ),
        ])
    }
}

impl Emit for RepetitionQuiver {
    fn to_text(&self) -> String {
        emit_qvr(&self.result)
    }

    fn to_structured(&self) -> Value {
        object(vec![
            ("type", json!("repetition")),
            ("base", json!(self.base.name)),
            ("k", int(self.k)),
            ("w", Value::Array(self.w.iter().map(int).collect())),
            ("quiver", self.result.to_structured()),
        ])
    }
}

impl Emit for SemisimpleAlgebra {
    fn to_text(&self) -> String {
        let mut out = format!("dim V = {}\n", self.total_dim);
        for block in &self.blocks {
            match block {
                Block::Mat { rho, vertices } => out.push_str(&format!(
                    "block M_{}: {} (vertices {})\n",
                    vertices.len(),
                    rho,
                    vertices.join(" ")
                )),
                Block::Scalar { vertex } => {
                    out.push_str(&format!("block K: e_{vertex}\n"));
                }
            }
        }
        out
    }

    fn to_structured(&self) -> Value {
        object(vec![
            ("type", json!("semisimple_algebra")),
            ("dim", int(self.total_dim)),
            (
                "blocks",
                Value::Array(
                    self.blocks
                        .iter()
                        .map(|block| match block {
                            Block::Mat { rho, vertices } => object(vec![
                                ("kind", json!("matrix")),
                                ("rho", json!(rho.to_string())),
                                ("size", int(vertices.len())),
                                ("vertices", json!(vertices)),
                            ]),
                            Block::Scalar { vertex } => {
                                object(vec![("kind", json!("scalar")), ("vertex", json!(vertex))])
                            }
                        })
                        .collect(),
                ),
            ),
        ])
    }
}

impl Emit for VElement {
    fn to_text(&self) -> String {
        if self.is_zero() {
            return "0\n".into();
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(BasisLabel { block, row, col }, coeff)| {
                format!("{}·[{block}]_{{{row},{col}}}", rational_string(coeff))
            })
            .collect();
        format!("{}\n", terms.join(" + "))
    }

    fn to_structured(&self) -> Value {
        Value::Array(
            self.coeffs
                .iter()
                .map(|(BasisLabel { block, row, col }, coeff)| {
                    json!([
                        block.to_string(),
                        row.to_string(),
                        col.to_string(),
                        coeff.numer().to_string(),
                        coeff.denom().to_string()
                    ])
                })
                .collect(),
        )
    }
}

impl Emit for UTAlgebra {
    fn to_text(&self) -> String {
        format!(
            "k = {}  dim A = {}  dim V = {}  dim A^(k) = {}\n",
            self.k, self.base_dim, self.va.total_dim, self.dim
        )
    }

    fn to_structured(&self) -> Value {
        object(vec![
            ("type", json!("upper_triangular")),
            ("k", int(self.k)),
            ("dim_a", int(self.base_dim)),
            ("dim_v", int(self.va.total_dim)),
            ("dim", int(self.dim)),
        ])
    }
}

fn actions_json(actions: &[ActionEntry]) -> Value {
    Value::Array(
        actions
            .iter()
            .map(
                |ActionEntry {
                     arrow,
                     input,
                     output,
                     coeff,
                 }| { json!([arrow, input, output, coeff.to_string()]) },
            )
            .collect(),
    )
}

impl Emit for DualReport {
    fn to_text(&self) -> String {
        let mut out = format!(
            "cokernel dim = {}\nalmost standard: {}\nquotient V/N is the standard dual: {}\nrestrictive condition: {}\n",
            self.cokernel_dim, self.almost_standard, self.quotient_is_standard_dual, self.restrictive
        );
        for (path, left, right) in &self.junction_signs {
            out.push_str(&format!("junction {path}: left {left:+} right {right:+}\n"));
        }
        out.push_str(&self.checks.to_text());
        out
    }

    fn to_structured(&self) -> Value {
        object(vec![
            ("type", json!("dual_report")),
            ("cokernel_dim", int(self.cokernel_dim)),
            ("dagger", json!(self.dagger)),
            ("almost_standard", json!(self.almost_standard)),
            (
                "quotient_is_standard_dual",
                json!(self.quotient_is_standard_dual),
            ),
            ("restrictive", json!(self.restrictive)),
            (
                "junction_signs",
                Value::Array(
                    self.junction_signs
                        .iter()
                        .map(|(path, l, r)| json!([path, l.to_string(), r.to_string()]))
                        .collect(),
                ),
            ),
            (
                "u_choice",
                Value::Array(
                    self.u_choice
                        .iter()
                        .map(|(vertex, BasisLabel { block, row, .. })| {
                            json!([vertex, block.to_string(), row.to_string()])
                        })
                        .collect(),
                ),
            ),
            ("left_actions", actions_json(&self.left_actions)),
            ("right_actions", actions_json(&self.right_actions)),
            ("checks", self.checks.to_structured()),
        ])
    }
}

impl Emit for ConditionReport {
    fn to_text(&self) -> String {
        format!(
            "max-length condition: {}\nrestrictive condition: {}\n",
            self.max_length, self.restrictive
        )
    }

    fn to_structured(&self) -> Value {
        object(vec![
            ("type", json!("conditions")),
            ("max_length", json!(self.max_length)),
            ("restrictive", json!(self.restrictive)),
        ])
    }
}

impl Emit for Permutation {
    fn to_text(&self) -> String {
        let images: Vec<String> = self.images().iter().map(usize::to_string).collect();
        format!("{}\n", images.join(","))
    }

    fn to_structured(&self) -> Value {
        Value::Array(self.images().iter().map(int).collect())
    }
}

impl Emit for Option<IsoMapping> {
    fn to_text(&self) -> String {
        match self {
            None => "not isomorphic\n".into(),
            Some(mapping) => {
                let mut out = String::from("isomorphic\n");
                for (from, to) in &mapping.vertex_map {
                    out.push_str(&format!("vertex {from} -> {to}\n"));
                }
                for (from, to) in &mapping.arrow_map {
                    out.push_str(&format!("arrow {from} -> {to}\n"));
                }
                out
            }
        }
    }

    fn to_structured(&self) -> Value {
        match self {
            None => object(vec![("type", json!("iso")), ("isomorphic", json!(false))]),
            Some(mapping) => object(vec![
                ("type", json!("iso")),
                ("isomorphic", json!(true)),
                (
                    "vertices",
                    Value::Array(
                        mapping
                            .vertex_map
                            .iter()
                            .map(|(a, b)| json!([a, b]))
                            .collect(),
                    ),
                ),
                (
                    "arrows",
                    Value::Array(
                        mapping
                            .arrow_map
                            .iter()
                            .map(|(a, b)| json!([a, b]))
                            .collect(),
                    ),
                ),
            ]),
        }
    }
}

impl Emit for [SheetElem] {
    fn to_text(&self) -> String {
        let mut out = String::new();
        for elem in self {
            out.push_str(&format!("{elem}\n"));
        }
        out
    }

    fn to_structured(&self) -> Value {
        Value::Array(self.iter().map(|e| json!(e.to_string())).collect())
    }
}
