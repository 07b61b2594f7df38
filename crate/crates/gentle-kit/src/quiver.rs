//! Bound quivers, paths, gentleness validation and thread combinatorics.
//!
//! Composition is written left to right throughout: the path `α₁⋯α_l`
//! requires `t(α_i) = s(α_{i+1})`, and a relation `(α, β)` means the length-2
//! path α-then-β lies in the ideal `I`.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::{Error, Result};

/// An arrow of a quiver. Ids are free-form strings from `[A-Za-z0-9_#*.]+`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub source: String,
    pub target: String,
}

impl Arrow {
    pub fn new(
        id: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
    ) -> Self {
        Arrow {
            id: id.into(),
            source: source.into(),
            target: target.into(),
        }
    }
}

/// A finite quiver with quadratic monomial relations and optional integer
/// arrow degrees (absent map ⇔ degree 0 everywhere).
///
/// The struct is plain data; [`validate`] checks structural well-formedness
/// and (local) gentleness. Relations are kept sorted and deduplicated by the
/// constructors, but fields are public so malformed inputs can be represented
/// and reported on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundQuiver {
    pub name: String,
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    /// `(α, β)` ∈ relations ⇔ the path α-then-β lies in `I`.
    pub relations: Vec<(String, String)>,
    pub degrees: Option<BTreeMap<String, i64>>,
}

impl BoundQuiver {
    /// Assemble a quiver, sorting relations and dropping zero degrees.
    pub fn build(
        name: impl Into<String>,
        vertices: Vec<&str>,
        arrows: Vec<(&str, &str, &str)>,
        relations: Vec<(&str, &str)>,
    ) -> Self {
        let mut relations: Vec<(String, String)> = relations
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        relations.sort();
        relations.dedup();
        BoundQuiver {
            name: name.into(),
            vertices: vertices.into_iter().map(str::to_string).collect(),
            arrows: arrows
                .into_iter()
                .map(|(id, s, t)| Arrow::new(id, s, t))
                .collect(),
            relations,
            degrees: None,
        }
    }

    /// Replace the degree map, dropping zero entries (empty map becomes `None`).
    pub fn with_degrees(mut self, degrees: BTreeMap<String, i64>) -> Self {
        let degrees: BTreeMap<String, i64> = degrees.into_iter().filter(|(_, d)| *d != 0).collect();
        self.degrees = if degrees.is_empty() {
            None
        } else {
            Some(degrees)
        };
        self
    }

    pub fn arrow(&self, id: &str) -> Option<&Arrow> {
        self.arrows.iter().find(|a| a.id == id)
    }

    pub fn degree_of(&self, arrow_id: &str) -> i64 {
        self.degrees
            .as_ref()
            .and_then(|m| m.get(arrow_id).copied())
            .unwrap_or(0)
    }

    pub fn has_relation(&self, first: &str, second: &str) -> bool {
        self.relations
            .binary_search_by(|(a, b)| (a.as_str(), b.as_str()).cmp(&(first, second)))
            .is_ok()
    }

    pub fn incoming(&self, vertex: &str) -> Vec<&Arrow> {
        self.arrows.iter().filter(|a| a.target == vertex).collect()
    }

    pub fn outgoing(&self, vertex: &str) -> Vec<&Arrow> {
        self.arrows.iter().filter(|a| a.source == vertex).collect()
    }

    pub fn din(&self, vertex: &str) -> usize {
        self.arrows.iter().filter(|a| a.target == vertex).count()
    }

    pub fn dout(&self, vertex: &str) -> usize {
        self.arrows.iter().filter(|a| a.source == vertex).count()
    }

    /// `d_A = 2|Q₀| − |Q₁|`, the number of blossom sources (= sinks).
    pub fn d_invariant(&self) -> i64 {
        2 * self.vertices.len() as i64 - self.arrows.len() as i64
    }

    /// Source vertex of a path.
    pub fn path_source(&self, p: &PathExpr) -> String {
        match p {
            PathExpr::Trivial(v) => v.clone(),
            PathExpr::Arrows(seq) => self.arrow(&seq[0]).expect("arrow exists").source.clone(),
        }
    }

    /// Target vertex of a path.
    pub fn path_target(&self, p: &PathExpr) -> String {
        match p {
            PathExpr::Trivial(v) => v.clone(),
            PathExpr::Arrows(seq) => self
                .arrow(seq.last().expect("nonempty"))
                .expect("arrow exists")
                .target
                .clone(),
        }
    }

    /// Check that `p` is composable and avoids the relations ("is a path in A").
    pub fn is_path(&self, p: &PathExpr) -> bool {
        match p {
            PathExpr::Trivial(v) => self.vertices.iter().any(|w| w == v),
            PathExpr::Arrows(seq) => {
                for id in seq {
                    if self.arrow(id).is_none() {
                        return false;
                    }
                }
                for pair in seq.windows(2) {
                    let a = self.arrow(&pair[0]).unwrap();
                    let b = self.arrow(&pair[1]).unwrap();
                    if a.target != b.source || self.has_relation(&pair[0], &pair[1]) {
                        return false;
                    }
                }
                true
            }
        }
    }
}

/// A path: either the trivial path `e_v` at a vertex or a nonempty composable
/// arrow sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathExpr {
    Trivial(String),
    Arrows(Vec<String>),
}

impl PathExpr {
    pub fn trivial(v: impl Into<String>) -> Self {
        PathExpr::Trivial(v.into())
    }

    pub fn arrows<S: Into<String>>(seq: impl IntoIterator<Item = S>) -> Self {
        PathExpr::Arrows(seq.into_iter().map(Into::into).collect())
    }

    pub fn len(&self) -> usize {
        match self {
            PathExpr::Trivial(_) => 0,
            PathExpr::Arrows(seq) => seq.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn arrow_ids(&self) -> &[String] {
        match self {
            PathExpr::Trivial(_) => &[],
            PathExpr::Arrows(seq) => seq,
        }
    }
}

impl fmt::Display for PathExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathExpr::Trivial(v) => write!(f, "e_{v}"),
            PathExpr::Arrows(seq) => write!(f, "{}", seq.join(".")),
        }
    }
}

/// Validation mode: `Gentle` additionally forbids oriented cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    LocallyGentle,
    Gentle,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::LocallyGentle => "locally gentle",
            Mode::Gentle => "gentle",
        }
    }
}

/// One violated condition with the offending vertices/arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: &'static str,
    pub items: Vec<String>,
    pub message: String,
}

/// Size and shape statistics reported alongside validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuiverStats {
    pub vertices: usize,
    pub arrows: usize,
    pub d_invariant: i64,
    pub connected: bool,
}

/// Outcome of [`validate`]; `pass` ⇔ `violations` is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub pass: bool,
    pub mode: Mode,
    pub violations: Vec<Violation>,
    pub stats: QuiverStats,
}

/// Check structural well-formedness, the degree bounds, the four
/// successor/predecessor conditions, connectivity, and (for [`Mode::Gentle`])
/// the absence of oriented cycles.
///
/// `|Q₁| = 0` is a hard input error rather than a failed report.
pub fn validate(bq: &BoundQuiver, mode: Mode) -> Result<ValidationReport> {
    if bq.arrows.is_empty() {
        return Err(Error::EmptyQuiver);
    }
    let mut violations = Vec::new();

    // Structural checks: unique ids, known endpoints, composable relations.
    let mut vertex_set = HashSet::new();
    for v in &bq.vertices {
        if !vertex_set.insert(v.as_str()) {
            violations.push(Violation {
                condition: "duplicate-vertex-id",
                items: vec![v.clone()],
                message: format!("vertex id '{v}' declared twice"),
            });
        }
    }
    let mut arrow_set = HashSet::new();
    for a in &bq.arrows {
        if !arrow_set.insert(a.id.as_str()) {
            violations.push(Violation {
                condition: "duplicate-arrow-id",
                items: vec![a.id.clone()],
                message: format!("arrow id '{}' declared twice", a.id),
            });
        }
        if vertex_set.contains(a.id.as_str()) {
            violations.push(Violation {
                condition: "arrow-vertex-id-clash",
                items: vec![a.id.clone()],
                message: format!("id '{}' used for both a vertex and an arrow", a.id),
            });
        }
        for v in [&a.source, &a.target] {
            if !vertex_set.contains(v.as_str()) {
                violations.push(Violation {
                    condition: "unknown-endpoint",
                    items: vec![a.id.clone(), v.clone()],
                    message: format!("arrow '{}' uses undeclared vertex '{v}'", a.id),
                });
            }
        }
    }
    let mut seen_relations = HashSet::new();
    for (first, second) in &bq.relations {
        if !seen_relations.insert((first.as_str(), second.as_str())) {
            violations.push(Violation {
                condition: "duplicate-relation",
                items: vec![first.clone(), second.clone()],
                message: format!("relation {first}·{second} declared twice"),
            });
            continue;
        }
        match (bq.arrow(first), bq.arrow(second)) {
            (Some(a), Some(b)) => {
                if a.target != b.source {
                    violations.push(Violation {
                        condition: "non-composable-relation",
                        items: vec![first.clone(), second.clone()],
                        message: format!(
                            "relation {first}·{second} is not composable: t({first}) = {} ≠ s({second}) = {}",
                            a.target, b.source
                        ),
                    });
                }
            }
            _ => violations.push(Violation {
                condition: "unknown-relation-arrow",
                items: vec![first.clone(), second.clone()],
                message: format!("relation {first}·{second} mentions an undeclared arrow"),
            }),
        }
    }

    let structurally_ok = violations.is_empty();

    // Degree bounds din ≤ 2, dout ≤ 2.
    for v in &bq.vertices {
        if bq.din(v) > 2 {
            violations.push(Violation {
                condition: "in-degree",
                items: vec![v.clone()],
                message: format!("vertex '{v}' has in-degree {} > 2", bq.din(v)),
            });
        }
        if bq.dout(v) > 2 {
            violations.push(Violation {
                condition: "out-degree",
                items: vec![v.clone()],
                message: format!("vertex '{v}' has out-degree {} > 2", bq.dout(v)),
            });
        }
    }

    // Per-arrow successor/predecessor uniqueness: at most one permitted and
    // one forbidden continuation on each side.
    if structurally_ok {
        for a in &bq.arrows {
            let succ = bq.outgoing(&a.target);
            let (f, p): (Vec<&Arrow>, Vec<&Arrow>) = succ
                .into_iter()
                .partition(|b| bq.has_relation(&a.id, &b.id));
            if p.len() > 1 {
                violations.push(Violation {
                    condition: "successor-permitted",
                    items: vec![a.id.clone()],
                    message: format!("arrow '{}' has {} permitted successors", a.id, p.len()),
                });
            }
            if f.len() > 1 {
                violations.push(Violation {
                    condition: "successor-forbidden",
                    items: vec![a.id.clone()],
                    message: format!("arrow '{}' has {} forbidden successors", a.id, f.len()),
                });
            }
            let pred = bq.incoming(&a.source);
            let (f, p): (Vec<&Arrow>, Vec<&Arrow>) = pred
                .into_iter()
                .partition(|b| bq.has_relation(&b.id, &a.id));
            if p.len() > 1 {
                violations.push(Violation {
                    condition: "predecessor-permitted",
                    items: vec![a.id.clone()],
                    message: format!("arrow '{}' has {} permitted predecessors", a.id, p.len()),
                });
            }
            if f.len() > 1 {
                violations.push(Violation {
                    condition: "predecessor-forbidden",
                    items: vec![a.id.clone()],
                    message: format!("arrow '{}' has {} forbidden predecessors", a.id, f.len()),
                });
            }
        }
    }

    // Connectivity of the underlying undirected graph.
    let connected = structurally_ok && is_connected(bq);
    if structurally_ok && !connected {
        violations.push(Violation {
            condition: "disconnected",
            items: vec![],
            message: "underlying undirected graph is not connected".into(),
        });
    }

    // Gentle mode: no oriented cycle may survive the relations.
    if mode == Mode::Gentle && structurally_ok {
        if let Some(cycle) = find_oriented_cycle(bq) {
            violations.push(Violation {
                condition: "oriented-cycle",
                items: cycle.clone(),
                message: format!("oriented cycle {}", cycle.join(".")),
            });
        }
    }

    Ok(ValidationReport {
        pass: violations.is_empty(),
        mode,
        violations,
        stats: QuiverStats {
            vertices: bq.vertices.len(),
            arrows: bq.arrows.len(),
            d_invariant: bq.d_invariant(),
            connected,
        },
    })
}

/// Validate and convert a failure into [`Error::NotGentle`]. Used by the
/// operations whose precondition is (local) gentleness.
pub fn require(bq: &BoundQuiver, mode: Mode) -> Result<()> {
    let report = validate(bq, mode)?;
    if report.pass {
        Ok(())
    } else {
        Err(Error::NotGentle {
            name: bq.name.clone(),
            mode: mode.as_str(),
            first_violation: report.violations[0].message.clone(),
        })
    }
}

fn is_connected(bq: &BoundQuiver) -> bool {
    if bq.vertices.is_empty() {
        return true;
    }
    let index: HashMap<&str, usize> = bq
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    let mut adjacency = vec![Vec::new(); bq.vertices.len()];
    for a in &bq.arrows {
        let s = index[a.source.as_str()];
        let t = index[a.target.as_str()];
        adjacency[s].push(t);
        adjacency[t].push(s);
    }
    let mut seen = vec![false; bq.vertices.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adjacency[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Any directed cycle in the graph on arrows whose edges are the permitted
/// compositions; works without assuming local gentleness.
fn find_oriented_cycle(bq: &BoundQuiver) -> Option<Vec<String>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Color {
        White,
        Gray,
        Black,
    }
    let n = bq.arrows.len();
    let mut color = vec![Color::White; n];
    let successors: Vec<Vec<usize>> = bq
        .arrows
        .iter()
        .map(|a| {
            bq.arrows
                .iter()
                .enumerate()
                .filter(|(_, b)| a.target == b.source && !bq.has_relation(&a.id, &b.id))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();

    fn dfs(
        v: usize,
        color: &mut [Color],
        successors: &[Vec<usize>],
        stack: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        color[v] = Color::Gray;
        stack.push(v);
        for &w in &successors[v] {
            match color[w] {
                Color::Gray => {
                    let start = stack.iter().position(|&x| x == w).unwrap();
                    return Some(stack[start..].to_vec());
                }
                Color::White => {
                    if let Some(cycle) = dfs(w, color, successors, stack) {
                        return Some(cycle);
                    }
                }
                Color::Black => {}
            }
        }
        stack.pop();
        color[v] = Color::Black;
        None
    }

    let mut stack = Vec::new();
    for v in 0..n {
        if color[v] == Color::White {
            if let Some(cycle) = dfs(v, &mut color, &successors, &mut stack) {
                return Some(cycle.into_iter().map(|i| bq.arrows[i].id.clone()).collect());
            }
        }
    }
    None
}

/// The unique arrow `β` with `s(β) = t(α)` and `αβ ∉ I`, if any.
pub fn permitted_successor<'a>(bq: &'a BoundQuiver, arrow: &str) -> Option<&'a Arrow> {
    let a = bq.arrow(arrow)?;
    bq.arrows
        .iter()
        .find(|b| b.source == a.target && !bq.has_relation(&a.id, &b.id))
}

/// The unique arrow `β` with `s(β) = t(α)` and `αβ ∈ I`, if any.
pub fn forbidden_successor<'a>(bq: &'a BoundQuiver, arrow: &str) -> Option<&'a Arrow> {
    let a = bq.arrow(arrow)?;
    bq.arrows
        .iter()
        .find(|b| b.source == a.target && bq.has_relation(&a.id, &b.id))
}

/// The unique arrow `β` with `t(β) = s(α)` and `βα ∉ I`, if any.
pub fn permitted_predecessor<'a>(bq: &'a BoundQuiver, arrow: &str) -> Option<&'a Arrow> {
    let a = bq.arrow(arrow)?;
    bq.arrows
        .iter()
        .find(|b| b.target == a.source && !bq.has_relation(&b.id, &a.id))
}

/// The unique arrow `β` with `t(β) = s(α)` and `βα ∈ I`, if any.
pub fn forbidden_predecessor<'a>(bq: &'a BoundQuiver, arrow: &str) -> Option<&'a Arrow> {
    let a = bq.arrow(arrow)?;
    bq.arrows
        .iter()
        .find(|b| b.target == a.source && bq.has_relation(&b.id, &a.id))
}

/// Concatenate two paths in `A`, or return `None` (the symbolic zero) if the
/// junction is non-composable or hits a relation. `Trivial(v)` is the
/// identity at `v`.
pub fn compose(bq: &BoundQuiver, p: &PathExpr, q: &PathExpr) -> Option<PathExpr> {
    if !bq.is_path(p) || !bq.is_path(q) {
        return None;
    }
    match (p, q) {
        (PathExpr::Trivial(v), PathExpr::Trivial(w)) => {
            (v == w).then(|| PathExpr::Trivial(v.clone()))
        }
        (PathExpr::Trivial(v), q) => (bq.path_source(q) == *v).then(|| q.clone()),
        (p, PathExpr::Trivial(w)) => (bq.path_target(p) == *w).then(|| p.clone()),
        (PathExpr::Arrows(left), PathExpr::Arrows(right)) => {
            let last = left.last().unwrap();
            let first = &right[0];
            let junction_ok = bq.arrow(last).unwrap().target == bq.arrow(first).unwrap().source
                && !bq.has_relation(last, first);
            junction_ok
                .then(|| PathExpr::Arrows(left.iter().chain(right.iter()).cloned().collect()))
        }
    }
}

/// Oriented cycles and anticycles, one per cyclic orbit, canonicalized by the
/// lexicographically minimal rotation of the arrow-id sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSummary {
    pub oriented: Vec<PathExpr>,
    pub anti: Vec<PathExpr>,
}

/// Cycles of the permitted- and forbidden-successor partial functions.
pub fn cycles(bq: &BoundQuiver) -> Result<CycleSummary> {
    require(bq, Mode::LocallyGentle)?;
    Ok(CycleSummary {
        oriented: successor_cycles(bq, false),
        anti: successor_cycles(bq, true),
    })
}

fn successor_cycles(bq: &BoundQuiver, forbidden: bool) -> Vec<PathExpr> {
    let step = |id: &str| -> Option<String> {
        let next = if forbidden {
            forbidden_successor(bq, id)
        } else {
            permitted_successor(bq, id)
        };
        next.map(|a| a.id.clone())
    };
    let mut on_cycle: BTreeSet<String> = BTreeSet::new();
    let mut out = Vec::new();
    for start in bq.arrows.iter().map(|a| a.id.clone()) {
        if on_cycle.contains(&start) {
            continue;
        }
        // Follow the successor function; a cycle through `start` returns to it
        // within |Q1| steps.
        let mut seq = vec![start.clone()];
        let mut cur = start.clone();
        let mut closed = false;
        for _ in 0..bq.arrows.len() {
            match step(&cur) {
                Some(next) if next == start => {
                    closed = true;
                    break;
                }
                Some(next) => {
                    seq.push(next.clone());
                    cur = next;
                }
                None => break,
            }
        }
        if closed {
            for id in &seq {
                on_cycle.insert(id.clone());
            }
            out.push(PathExpr::Arrows(minimal_rotation(&seq)));
        }
    }
    out.sort();
    out
}

/// Lexicographically minimal rotation of an arrow-id sequence.
pub fn minimal_rotation(seq: &[String]) -> Vec<String> {
    let mut best = seq.to_vec();
    for shift in 1..seq.len() {
        let rotated: Vec<String> = seq[shift..].iter().chain(&seq[..shift]).cloned().collect();
        if rotated < best {
            best = rotated;
        }
    }
    best
}

/// Threads of a locally gentle quiver, canonically ordered: maximal paths and
/// maximal antipaths lexicographically by arrow-id sequence, trivial-thread
/// vertices by id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreadSummary {
    /// Maximal paths `M_A` (non-trivial permitted threads).
    pub maximal_paths: Vec<PathExpr>,
    /// `T_A`: vertices whose trivial path is a permitted thread.
    pub trivial_vertices: Vec<String>,
    /// Maximal antipaths (non-trivial forbidden threads).
    pub antipaths: Vec<PathExpr>,
    pub oriented_cycles: Vec<PathExpr>,
    pub anticycles: Vec<PathExpr>,
}

/// Maximal chains of the permitted/forbidden successor functions plus the
/// trivial-thread vertex set.
pub fn threads(bq: &BoundQuiver) -> Result<ThreadSummary> {
    require(bq, Mode::LocallyGentle)?;
    let cycle_summary = cycles(bq)?;
    let mut maximal_paths = successor_chains(bq, false);
    let mut antipaths = successor_chains(bq, true);
    maximal_paths.sort();
    antipaths.sort();
    let mut trivial_vertices: Vec<String> = bq
        .vertices
        .iter()
        .filter(|v| {
            bq.din(v) <= 1
                && bq.dout(v) <= 1
                && bq.incoming(v).iter().all(|b| {
                    bq.outgoing(v)
                        .iter()
                        .all(|g| !bq.has_relation(&b.id, &g.id))
                })
        })
        .cloned()
        .collect();
    trivial_vertices.sort();
    Ok(ThreadSummary {
        maximal_paths,
        trivial_vertices,
        antipaths,
        oriented_cycles: cycle_summary.oriented,
        anticycles: cycle_summary.anti,
    })
}

fn successor_chains(bq: &BoundQuiver, forbidden: bool) -> Vec<PathExpr> {
    // Chain starts are arrows with no predecessor of the given kind; cycle
    // arrows never qualify, so cycles are excluded automatically.
    let mut chains = Vec::new();
    for a in &bq.arrows {
        let pred = if forbidden {
            forbidden_predecessor(bq, &a.id)
        } else {
            permitted_predecessor(bq, &a.id)
        };
        if pred.is_some() {
            continue;
        }
        let mut seq = vec![a.id.clone()];
        let mut cur = a.id.clone();
        loop {
            let next = if forbidden {
                forbidden_successor(bq, &cur)
            } else {
                permitted_successor(bq, &cur)
            };
            match next {
                Some(b) => {
                    seq.push(b.id.clone());
                    cur = b.id.clone();
                }
                None => break,
            }
        }
        chains.push(PathExpr::Arrows(seq));
    }
    chains
}

/// All trivial paths plus all positive-length paths avoiding `I`; the list
/// has `dim_K A` entries. Requires gentleness (cycles would make it infinite).
///
/// Trivial paths come first in vertex order, then the contiguous subpaths of
/// each maximal path in canonical order.
pub fn path_basis(bq: &BoundQuiver) -> Result<Vec<PathExpr>> {
    require(bq, Mode::Gentle)?;
    let summary = threads(bq)?;
    let mut basis: Vec<PathExpr> = bq.vertices.iter().cloned().map(PathExpr::Trivial).collect();
    for rho in &summary.maximal_paths {
        let seq = rho.arrow_ids();
        for start in 0..seq.len() {
            for end in start + 1..=seq.len() {
                basis.push(PathExpr::Arrows(seq[start..end].to_vec()));
            }
        }
    }
    Ok(basis)
}

/// Which degree to evaluate: `deg` sums arrow degrees; `degbar(ω) =
/// length(ω) − deg(ω)` is defined for antipaths and trivial paths only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeKind {
    Deg,
    DegBar,
}

/// Evaluate `deg` or `degbar` on a path.
pub fn degree(bq: &BoundQuiver, p: &PathExpr, kind: DegreeKind) -> Result<i64> {
    if !bq.is_path(p) && kind == DegreeKind::Deg {
        return Err(Error::Precondition(format!("{p} is not a path")));
    }
    let deg: i64 = p.arrow_ids().iter().map(|id| bq.degree_of(id)).sum();
    match kind {
        DegreeKind::Deg => Ok(deg),
        DegreeKind::DegBar => {
            if !p.is_empty() {
                let is_antipath = p
                    .arrow_ids()
                    .windows(2)
                    .all(|w| bq.has_relation(&w[0], &w[1]));
                let composable = p.arrow_ids().windows(2).all(|w| {
                    bq.arrow(&w[0]).map(|a| a.target.clone())
                        == bq.arrow(&w[1]).map(|a| a.source.clone())
                });
                if !is_antipath || !composable {
                    return Err(Error::Precondition(format!(
                        "degbar is only defined on antipaths and trivial paths; {p} is neither"
                    )));
                }
            }
            Ok(p.len() as i64 - deg)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{a2, ex1, kronecker};

    fn ids(paths: &[PathExpr]) -> Vec<String> {
        paths.iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn ex1_validates_gentle_with_d5() {
        let report = validate(&ex1(), Mode::Gentle).unwrap();
        assert!(report.pass, "violations: {:?}", report.violations);
        assert_eq!(report.stats.d_invariant, 5);
        assert!(report.stats.connected);
    }

    #[test]
    fn a2_validates_gentle_with_d3() {
        let report = validate(&a2(), Mode::Gentle).unwrap();
        assert!(report.pass);
        assert_eq!(report.stats.d_invariant, 3);
    }

    #[test]
    fn non_composable_relation_fails_validation() {
        let mut kr = kronecker();
        kr.relations.push(("al".into(), "al".into()));
        kr.relations.sort();
        let report = validate(&kr, Mode::Gentle).unwrap();
        assert!(!report.pass);
        assert!(report
            .violations
            .iter()
            .any(|v| v.condition == "non-composable-relation"));
    }

    #[test]
    fn empty_quiver_is_a_hard_error() {
        let bq = BoundQuiver::build("empty", vec!["a"], vec![], vec![]);
        assert!(matches!(
            validate(&bq, Mode::Gentle),
            Err(Error::EmptyQuiver)
        ));
    }

    #[test]
    fn disconnected_input_fails_with_dedicated_tag() {
        let bq = BoundQuiver::build(
            "two_islands",
            vec!["a", "b", "c", "d"],
            vec![("x", "a", "b"), ("y", "c", "d")],
            vec![],
        );
        let report = validate(&bq, Mode::Gentle).unwrap();
        assert!(!report.pass);
        assert!(report
            .violations
            .iter()
            .any(|v| v.condition == "disconnected"));
    }

    #[test]
    fn compose_ex1_relation_kills_product() {
        let quiver = ex1();
        let be = PathExpr::arrows(["be"]);
        let ga = PathExpr::arrows(["ga"]);
        assert_eq!(compose(&quiver, &be, &ga), None);
        let al = PathExpr::arrows(["al"]);
        assert_eq!(
            compose(&quiver, &al, &be),
            Some(PathExpr::arrows(["al", "be"]))
        );
    }

    #[test]
    fn compose_trivial_acts_as_identity() {
        let quiver = a2();
        let al = PathExpr::arrows(["al"]);
        assert_eq!(
            compose(&quiver, &PathExpr::trivial("a"), &al),
            Some(al.clone())
        );
        assert_eq!(
            compose(&quiver, &al, &PathExpr::trivial("b")),
            Some(al.clone())
        );
        assert_eq!(compose(&quiver, &al, &PathExpr::trivial("a")), None);
    }

    #[test]
    fn compose_is_associative_on_nonzero_triples() {
        // Exhaustive over the path basis of EX1: whenever all pairwise
        // products are nonzero, the two bracketings agree.
        let quiver = ex1();
        let basis = path_basis(&quiver).unwrap();
        for p in &basis {
            for q in &basis {
                for r in &basis {
                    let pq = compose(&quiver, p, q);
                    let qr = compose(&quiver, q, r);
                    if let (Some(pq), Some(qr)) = (pq, qr) {
                        assert_eq!(compose(&quiver, &pq, r), compose(&quiver, p, &qr));
                    }
                }
            }
        }
    }

    #[test]
    fn ex1_cycles_single_anticycle() {
        let summary = cycles(&ex1()).unwrap();
        assert!(summary.oriented.is_empty());
        assert_eq!(ids(&summary.anti), vec!["be.ga.la"]);
    }

    #[test]
    fn a2_has_no_cycles() {
        let summary = cycles(&a2()).unwrap();
        assert!(summary.oriented.is_empty());
        assert!(summary.anti.is_empty());
    }

    #[test]
    fn two_cycle_quiver_has_oriented_cycle() {
        let bq = BoundQuiver::build(
            "two_cycle",
            vec!["v", "w"],
            vec![("x", "v", "w"), ("y", "w", "v")],
            vec![],
        );
        let summary = cycles(&bq).unwrap();
        assert_eq!(ids(&summary.oriented), vec!["x.y"]);
        assert!(summary.anti.is_empty());
    }

    #[test]
    fn anticycle_counted_once_per_rotation_orbit() {
        // βγλ has three rotations; the canonical representative starts at the
        // lexicographically smallest arrow.
        let summary = cycles(&ex1()).unwrap();
        assert_eq!(summary.anti.len(), 1);
        assert_eq!(summary.anti[0], PathExpr::arrows(["be", "ga", "la"]));
    }

    #[test]
    fn ex1_threads_match_hand_computation() {
        let summary = threads(&ex1()).unwrap();
        assert_eq!(
            ids(&summary.maximal_paths),
            vec!["al.be.ze", "ga.th.ka", "la"]
        );
        assert_eq!(summary.trivial_vertices, vec!["a", "g"]);
        assert_eq!(ids(&summary.antipaths), vec!["al", "th", "ze.ka"]);
    }

    #[test]
    fn a2_threads() {
        let summary = threads(&a2()).unwrap();
        assert_eq!(ids(&summary.maximal_paths), vec!["al"]);
        assert_eq!(summary.trivial_vertices, vec!["a", "b"]);
        assert_eq!(ids(&summary.antipaths), vec!["al"]);
    }

    #[test]
    fn kronecker_threads() {
        let summary = threads(&kronecker()).unwrap();
        assert_eq!(ids(&summary.maximal_paths), vec!["al", "be"]);
        assert!(summary.trivial_vertices.is_empty());
        assert_eq!(ids(&summary.antipaths), vec!["al", "be"]);
    }

    #[test]
    fn thread_count_identity() {
        // |M_A| + |T_A| = d_A and the trivial-thread count formula.
        for bq in [ex1(), a2(), kronecker()] {
            let summary = threads(&bq).unwrap();
            let d = summary.maximal_paths.len() + summary.trivial_vertices.len();
            assert_eq!(d as i64, bq.d_invariant(), "{}", bq.name);
            let lengths: usize = summary.maximal_paths.iter().map(|p| p.len() + 1).sum();
            assert_eq!(
                summary.trivial_vertices.len(),
                2 * bq.vertices.len() - lengths,
                "{}",
                bq.name
            );
        }
    }

    #[test]
    fn path_basis_sizes() {
        assert_eq!(path_basis(&ex1()).unwrap().len(), 19);
        assert_eq!(path_basis(&a2()).unwrap().len(), 3);
        assert_eq!(path_basis(&kronecker()).unwrap().len(), 4);
    }

    /// Brute-force oracle: enumerate all composable arrow sequences avoiding
    /// `I` by depth-first extension.
    fn brute_force_paths(bq: &BoundQuiver) -> Vec<PathExpr> {
        let mut all: Vec<PathExpr> = bq.vertices.iter().cloned().map(PathExpr::Trivial).collect();
        let mut frontier: Vec<Vec<String>> = bq.arrows.iter().map(|a| vec![a.id.clone()]).collect();
        while let Some(seq) = frontier.pop() {
            all.push(PathExpr::Arrows(seq.clone()));
            let last = bq.arrow(seq.last().unwrap()).unwrap();
            for b in bq.outgoing(&last.target) {
                if !bq.has_relation(&last.id, &b.id) {
                    let mut longer = seq.clone();
                    longer.push(b.id.clone());
                    frontier.push(longer);
                }
            }
        }
        all
    }

    #[test]
    fn path_basis_agrees_with_brute_force_enumeration() {
        for bq in [ex1(), a2(), kronecker()] {
            let mut expected = brute_force_paths(&bq);
            let mut got = path_basis(&bq).unwrap();
            expected.sort();
            got.sort();
            assert_eq!(got, expected, "{}", bq.name);
        }
    }

    #[test]
    fn every_basis_path_lies_in_exactly_one_maximal_path() {
        for bq in [ex1(), a2(), kronecker()] {
            let summary = threads(&bq).unwrap();
            for p in path_basis(&bq).unwrap() {
                if p.is_empty() {
                    continue;
                }
                let hits = summary
                    .maximal_paths
                    .iter()
                    .filter(|rho| rho.arrow_ids().windows(p.len()).any(|w| w == p.arrow_ids()))
                    .count();
                assert_eq!(hits, 1, "{p} in {}", bq.name);
            }
        }
    }

    #[test]
    fn degree_and_degbar() {
        let mut graded = a2();
        graded = graded.with_degrees([("al".to_string(), 5)].into_iter().collect());
        let al = PathExpr::arrows(["al"]);
        assert_eq!(degree(&graded, &al, DegreeKind::Deg).unwrap(), 5);
        assert_eq!(degree(&graded, &al, DegreeKind::DegBar).unwrap(), -4);

        // With all degrees zero, degbar of an antipath is its length.
        let anticycle = PathExpr::arrows(["be", "ga", "la"]);
        assert_eq!(degree(&ex1(), &anticycle, DegreeKind::DegBar).unwrap(), 3);

        // degbar on a genuine (non-anti) path of positive length is an error.
        let albe = PathExpr::arrows(["al", "be"]);
        assert!(degree(&ex1(), &albe, DegreeKind::DegBar).is_err());
        assert_eq!(
            degree(&ex1(), &PathExpr::trivial("a"), DegreeKind::DegBar).unwrap(),
            0
        );
    }

    #[test]
    fn successors_on_ex1() {
        let quiver = ex1();
        assert_eq!(permitted_successor(&quiver, "al").unwrap().id, "be");
        assert_eq!(forbidden_successor(&quiver, "ze").unwrap().id, "ka");
        assert!(permitted_successor(&quiver, "ka").is_none());
    }

    #[test]
    fn successor_maps_are_injective_partial_functions() {
        for bq in [ex1(), a2(), kronecker()] {
            for forbidden in [false, true] {
                let mut images: Vec<String> = Vec::new();
                for a in &bq.arrows {
                    let next = if forbidden {
                        forbidden_successor(&bq, &a.id)
                    } else {
                        permitted_successor(&bq, &a.id)
                    };
                    if let Some(b) = next {
                        assert!(
                            !images.contains(&b.id),
                            "{}: arrow {} has two preimages",
                            bq.name,
                            b.id
                        );
                        images.push(b.id.clone());
                    }
                }
            }
        }
    }
}
