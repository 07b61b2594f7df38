//! The associated semisimple algebra `V(A)`, the algebra embedding `η_A`,
//! the upper-triangular realization of `A^(k)`, and the almost-standard-dual
//! structure of `Cok η_A`.
//!
//! `V(A)` has one full matrix block `M_{l+1}(K)` per maximal path and one
//! scalar block per trivial-thread vertex; `η_A` sends a path to the matrix
//! unit spanning its position inside its maximal path. All linear algebra is
//! exact over arbitrary-precision rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::construct::{realize_sheet_elem, repeat, sheet_basis, SheetElem};
use crate::quiver::{self, compose, path_basis, threads, BoundQuiver, Mode, PathExpr};
use crate::{CheckReport, Error, Result};

/// One factor of `V(A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    /// Full `(l+1)×(l+1)` matrix algebra attached to a maximal path; the
    /// vertex list records `a_0, …, a_l` along the path.
    Mat {
        rho: PathExpr,
        vertices: Vec<String>,
    },
    /// One-dimensional algebra attached to a trivial-thread vertex.
    Scalar { vertex: String },
}

impl Block {
    fn size(&self) -> usize {
        match self {
            Block::Mat { vertices, .. } => vertices.len(),
            Block::Scalar { .. } => 1,
        }
    }

    fn dim(&self) -> usize {
        self.size() * self.size()
    }
}

/// Basis label `(block, row, col)`; scalar blocks use `(0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisLabel {
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

/// The product of matrix blocks over maximal paths and scalar blocks over
/// trivial threads, in canonical block order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemisimpleAlgebra {
    pub blocks: Vec<Block>,
    pub total_dim: usize,
    /// position of each arrow inside its maximal path: arrow id → (block, u)
    /// meaning the arrow is `α_u` (1-based) of block `block`.
    arrow_position: BTreeMap<String, (usize, usize)>,
}

impl SemisimpleAlgebra {
    /// All basis labels, block by block, row-major; scalars contribute one.
    pub fn basis_labels(&self) -> Vec<BasisLabel> {
        let mut out = Vec::with_capacity(self.total_dim);
        for (b, block) in self.blocks.iter().enumerate() {
            let n = block.size();
            for row in 0..n {
                for col in 0..n {
                    out.push(BasisLabel { block: b, row, col });
                }
            }
        }
        out
    }

    /// Identity element: all diagonal units.
    pub fn identity(&self) -> VElement {
        let mut coeffs = BTreeMap::new();
        for (b, block) in self.blocks.iter().enumerate() {
            for u in 0..block.size() {
                coeffs.insert(
                    BasisLabel {
                        block: b,
                        row: u,
                        col: u,
                    },
                    BigRational::one(),
                );
            }
        }
        VElement { coeffs }
    }

    /// Dense coordinate index of a label.
    pub fn coordinate(&self, label: &BasisLabel) -> usize {
        let mut offset = 0;
        for block in &self.blocks[..label.block] {
            offset += block.dim();
        }
        offset + label.row * self.blocks[label.block].size() + label.col
    }
}

/// An element of `V(A)` as a sparse rational coefficient map; zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VElement {
    pub coeffs: BTreeMap<BasisLabel, BigRational>,
}

impl VElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn unit(label: BasisLabel) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(label, BigRational::one());
        VElement { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn insert(&mut self, label: BasisLabel, value: BigRational) {
        if !value.is_zero() {
            let entry = self.coeffs.entry(label).or_insert_with(BigRational::zero);
            *entry += value;
            if entry.is_zero() {
                self.coeffs.remove(&label);
            }
        }
    }

    pub fn add(&self, other: &VElement) -> VElement {
        let mut out = self.clone();
        for (label, value) in &other.coeffs {
            out.insert(*label, value.clone());
        }
        out
    }

    /// Block-wise matrix multiplication.
    pub fn mul(&self, other: &VElement, va: &SemisimpleAlgebra) -> VElement {
        let mut out = VElement::zero();
        for (l1, c1) in &self.coeffs {
            for (l2, c2) in &other.coeffs {
                if l1.block != l2.block {
                    continue;
                }
                match &va.blocks[l1.block] {
                    Block::Scalar { .. } => {
                        out.insert(*l1, c1 * c2);
                    }
                    Block::Mat { .. } => {
                        if l1.col == l2.row {
                            out.insert(
                                BasisLabel {
                                    block: l1.block,
                                    row: l1.row,
                                    col: l2.col,
                                },
                                c1 * c2,
                            );
                        }
                    }
                }
            }
        }
        out
    }
}

/// Build `V(A)` for a gentle quiver: one matrix block per maximal path in
/// canonical order, then one scalar block per trivial-thread vertex.
pub fn build_va(bq: &BoundQuiver) -> Result<SemisimpleAlgebra> {
    quiver::require(bq, Mode::Gentle)?;
    let summary = threads(bq)?;
    let mut blocks = Vec::new();
    let mut arrow_position = BTreeMap::new();
    for rho in &summary.maximal_paths {
        let ids = rho.arrow_ids();
        let mut vertices = vec![bq.arrow(&ids[0]).unwrap().source.clone()];
        for (pos, id) in ids.iter().enumerate() {
            vertices.push(bq.arrow(id).unwrap().target.clone());
            arrow_position.insert(id.clone(), (blocks.len(), pos + 1));
        }
        blocks.push(Block::Mat {
            rho: rho.clone(),
            vertices,
        });
    }
    for vertex in &summary.trivial_vertices {
        blocks.push(Block::Scalar {
            vertex: vertex.clone(),
        });
    }
    let total_dim = blocks.iter().map(Block::dim).sum();
    Ok(SemisimpleAlgebra {
        blocks,
        total_dim,
        arrow_position,
    })
}

/// `η_A` on a single path: a trivial path maps to the sum of the diagonal
/// units at every occurrence of its vertex (plus its scalar unit if the
/// vertex is a trivial thread); a positive path `α_u⋯α_v` inside the maximal
/// path `ρ` maps to the matrix unit `ρ_{u−1,v}`; paths hitting a relation map
/// to zero.
pub fn eta_with(va: &SemisimpleAlgebra, bq: &BoundQuiver, p: &PathExpr) -> Result<VElement> {
    match p {
        PathExpr::Trivial(a) => {
            if !bq.vertices.iter().any(|v| v == a) {
                return Err(Error::Precondition(format!("unknown vertex '{a}'")));
            }
            let mut out = VElement::zero();
            for (b, block) in va.blocks.iter().enumerate() {
                match block {
                    Block::Mat { vertices, .. } => {
                        for (u, vert) in vertices.iter().enumerate() {
                            if vert == a {
                                out.insert(
                                    BasisLabel {
                                        block: b,
                                        row: u,
                                        col: u,
                                    },
                                    BigRational::one(),
                                );
                            }
                        }
                    }
                    Block::Scalar { vertex } => {
                        if vertex == a {
                            out.insert(
                                BasisLabel {
                                    block: b,
                                    row: 0,
                                    col: 0,
                                },
                                BigRational::one(),
                            );
                        }
                    }
                }
            }
            Ok(out)
        }
        PathExpr::Arrows(ids) => {
            for id in ids {
                if bq.arrow(id).is_none() {
                    return Err(Error::Precondition(format!("unknown arrow '{id}'")));
                }
            }
            if !bq.is_path(p) {
                return Ok(VElement::zero());
            }
            let (block, start) = va.arrow_position[&ids[0]];
            // A relation-free path is a contiguous window of its maximal path.
            for (offset, id) in ids.iter().enumerate() {
                debug_assert_eq!(va.arrow_position[id], (block, start + offset));
            }
            Ok(VElement::unit(BasisLabel {
                block,
                row: start - 1,
                col: start - 1 + ids.len(),
            }))
        }
    }
}

/// Convenience wrapper building `V(A)` on the fly.
pub fn eta(bq: &BoundQuiver, p: &PathExpr) -> Result<VElement> {
    let va = build_va(bq)?;
    eta_with(&va, bq, p)
}

/// Verify that `η_A` is an injective algebra homomorphism:
///
/// (a) multiplicativity on every pair of basis paths (zero products
/// included); (b) `η(e_a)` splits into two distinct orthogonal idempotent
/// units, all `2|Q₀|` of them pairwise orthogonal and summing to 1;
/// (c) the images of the path basis are linearly independent over the
/// rationals (fraction-free rank check).
pub fn verify_eta(bq: &BoundQuiver) -> Result<CheckReport> {
    let va = build_va(bq)?;
    let basis = path_basis(bq)?;
    let mut report = CheckReport::new();

    let mut multiplicative = true;
    let mut witness = String::new();
    for p in &basis {
        for q in &basis {
            let lhs = eta_with(&va, bq, p)?.mul(&eta_with(&va, bq, q)?, &va);
            let rhs = match compose(bq, p, q) {
                Some(pq) => eta_with(&va, bq, &pq)?,
                None => VElement::zero(),
            };
            if lhs != rhs {
                multiplicative = false;
                witness = format!("η({p})η({q}) ≠ η({p}·{q})");
            }
        }
    }
    report.check("eta-multiplicative", multiplicative, || witness.clone());

    let mut units: Vec<BasisLabel> = Vec::new();
    let mut idempotents_ok = true;
    let mut idem_witness = String::new();
    for a in &bq.vertices {
        let image = eta_with(&va, bq, &PathExpr::trivial(a))?;
        let labels: Vec<BasisLabel> = image.coeffs.keys().copied().collect();
        let all_units =
            image.coeffs.values().all(|c| c.is_one()) && labels.iter().all(|l| l.row == l.col);
        if labels.len() != 2 || !all_units {
            idempotents_ok = false;
            idem_witness = format!("η(e_{a}) is not a sum of two diagonal units");
        }
        units.extend(labels);
    }
    let distinct = {
        let mut sorted = units.clone();
        sorted.sort();
        sorted.dedup();
        sorted.len() == units.len()
    };
    if !distinct {
        idempotents_ok = false;
        idem_witness = "idempotent units are not pairwise distinct".into();
    }
    let sum = bq.vertices.iter().try_fold(VElement::zero(), |acc, a| {
        eta_with(&va, bq, &PathExpr::trivial(a)).map(|e| acc.add(&e))
    })?;
    if sum != va.identity() {
        idempotents_ok = false;
        idem_witness = "Σ η(e_a) is not the identity of V(A)".into();
    }
    report.check("eta-idempotents", idempotents_ok, || idem_witness.clone());

    let rows: Vec<Vec<BigInt>> = basis
        .iter()
        .map(|p| {
            let image = eta_with(&va, bq, p)?;
            let mut row = vec![BigInt::zero(); va.total_dim];
            for (label, coeff) in &image.coeffs {
                debug_assert!(coeff.is_integer());
                row[va.coordinate(label)] = coeff.to_integer();
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let rank = rank_fraction_free(rows);
    report.check("eta-rank", rank == basis.len(), || {
        format!("rank {rank} ≠ dim A = {}", basis.len())
    });

    Ok(report)
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn rank_fraction_free(mut rows: Vec<Vec<BigInt>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut rank = 0;
    let mut prev_pivot = BigInt::one();
    let mut col = 0;
    while rank < rows.len() && col < cols {
        let pivot_row = (rank..rows.len()).find(|&r| !rows[r][col].is_zero());
        let Some(pivot_row) = pivot_row else {
            col += 1;
            continue;
        };
        rows.swap(rank, pivot_row);
        let pivot = rows[rank][col].clone();
        for r in rank + 1..rows.len() {
            for c in col + 1..cols {
                let val = (&pivot * &rows[r][c] - &rows[r][col] * &rows[rank][c]) / &prev_pivot;
                rows[r][c] = val;
            }
            rows[r][col] = BigInt::zero();
        }
        prev_pivot = pivot;
        rank += 1;
        col += 1;
    }
    rank
}

/// Shape summary of the upper-triangular realization of `A^(k)`: `A` on the
/// diagonal, `V(A)` above it, multiplication through `η_A`.
#[derive(Debug, Clone)]
pub struct UTAlgebra {
    pub k: usize,
    pub base: BoundQuiver,
    pub va: SemisimpleAlgebra,
    pub base_dim: usize,
    /// `k·dim A + C(k,2)·dim V(A) = k²·dim A`.
    pub dim: usize,
}

/// Assemble the triangular-algebra view.
pub fn build_ut(bq: &BoundQuiver, k: usize) -> Result<UTAlgebra> {
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let va = build_va(bq)?;
    let base_dim = path_basis(bq)?.len();
    let dim = k * base_dim + k * (k - 1) / 2 * va.total_dim;
    Ok(UTAlgebra {
        k,
        base: bq.clone(),
        va,
        base_dim,
        dim,
    })
}

/// Value of a triangular-algebra basis element or product.
#[derive(Debug, Clone, PartialEq, Eq)]
enum UTValue {
    Zero,
    Diagonal(usize, PathExpr),
    Off(usize, usize, BasisLabel),
}

/// Exhaustively verify the isomorphism `ψ: A^(k) → A^(k)_△`: the sheet basis
/// maps to paths/windows/iota chains, and `ψ(ab) = ψ(a)ψ(b)` for every pair
/// of basis elements, where the left side multiplies concrete paths in the
/// repetition quiver and the right side multiplies in the triangular algebra
/// through `η_A`. Also checks `dim A^(k) = k²·dim A`.
pub fn ut_check(bq: &BoundQuiver, k: usize) -> Result<CheckReport> {
    let ut = build_ut(bq, k)?;
    let va = &ut.va;
    let rep = if k >= 1 {
        repeat(bq, k, None)?
    } else {
        unreachable!()
    };
    let mut report = CheckReport::new();

    // Collect the full sheet basis and its realization as paths of A^(k).
    let mut elems: Vec<(SheetElem, PathExpr)> = Vec::new();
    for i in 1..=k {
        for j in i..=k {
            for elem in sheet_basis(bq, k, i, j)? {
                let path = realize_sheet_elem(bq, &elem)?;
                debug_assert!(
                    rep.result.is_path(&path),
                    "sheet element {elem} does not realize to a path"
                );
                elems.push((elem, path));
            }
        }
    }
    report.check(
        "ut-dimension",
        elems.len() == ut.dim && ut.dim == k * k * ut.base_dim,
        || {
            format!(
                "sheet basis has {} elements, triangular dimension {}, k²·dim A = {}",
                elems.len(),
                ut.dim,
                k * k * ut.base_dim
            )
        },
    );

    let lookup: BTreeMap<PathExpr, &SheetElem> =
        elems.iter().map(|(e, p)| (p.clone(), e)).collect();
    let sheets = |e: &SheetElem| -> (usize, usize) {
        match e {
            SheetElem::Diagonal { sheet, .. } => (*sheet, *sheet),
            SheetElem::Window { from, to, .. } => (*from, *to),
            SheetElem::Iota { from, to, .. } => (*from, *to),
        }
    };
    let psi = |e: &SheetElem| -> Result<UTValue> {
        Ok(match e {
            SheetElem::Diagonal { path, sheet } => UTValue::Diagonal(*sheet, path.clone()),
            SheetElem::Window {
                rho_index,
                u,
                v,
                from,
                to,
            } => UTValue::Off(
                *from,
                *to,
                BasisLabel {
                    block: *rho_index,
                    row: *u,
                    col: *v,
                },
            ),
            SheetElem::Iota { vertex, from, to } => {
                let block = va
                    .blocks
                    .iter()
                    .position(|b| matches!(b, Block::Scalar { vertex: v } if v == vertex))
                    .ok_or_else(|| {
                        Error::Precondition(format!("no scalar block for '{vertex}'"))
                    })?;
                UTValue::Off(
                    *from,
                    *to,
                    BasisLabel {
                        block,
                        row: 0,
                        col: 0,
                    },
                )
            }
        })
    };

    // Triangular product of two basis images.
    let triangular_product = |x: &UTValue, y: &UTValue| -> Result<UTValue> {
        Ok(match (x, y) {
            (UTValue::Diagonal(i, p), UTValue::Diagonal(j, q)) => {
                if i != j {
                    UTValue::Zero
                } else {
                    match compose(bq, p, q) {
                        Some(pq) => UTValue::Diagonal(*i, pq),
                        None => UTValue::Zero,
                    }
                }
            }
            (UTValue::Diagonal(h, p), UTValue::Off(i, j, label)) => {
                if h != i {
                    UTValue::Zero
                } else {
                    let product = eta_with(va, bq, p)?.mul(&VElement::unit(*label), va);
                    single_off(*i, *j, product)?
                }
            }
            (UTValue::Off(i, j, label), UTValue::Diagonal(h, q)) => {
                if j != h {
                    UTValue::Zero
                } else {
                    let product = VElement::unit(*label).mul(&eta_with(va, bq, q)?, va);
                    single_off(*i, *j, product)?
                }
            }
            (UTValue::Off(h, i, l1), UTValue::Off(i2, j, l2)) => {
                if i != i2 {
                    UTValue::Zero
                } else {
                    let product = VElement::unit(*l1).mul(&VElement::unit(*l2), va);
                    single_off(*h, *j, product)?
                }
            }
            (UTValue::Zero, _) | (_, UTValue::Zero) => UTValue::Zero,
        })
    };

    let mut pass = true;
    let mut witness = String::new();
    for (ea, pa) in &elems {
        for (eb, pb) in &elems {
            let (_, ia) = sheets(ea);
            let (ib, _) = sheets(eb);
            // Path-level product in A^(k).
            let lhs = if ia != ib {
                UTValue::Zero
            } else {
                match compose(&rep.result, pa, pb) {
                    Some(product) => {
                        let elem = lookup.get(&product).ok_or_else(|| {
                            Error::Precondition(format!(
                                "product {product} is not a sheet-basis element"
                            ))
                        })?;
                        psi(elem)?
                    }
                    None => UTValue::Zero,
                }
            };
            let rhs = triangular_product(&psi(ea)?, &psi(eb)?)?;
            if lhs != rhs {
                pass = false;
                witness = format!("ψ({ea}·{eb}) = {lhs:?} but ψ({ea})ψ({eb}) = {rhs:?}");
            }
        }
    }
    report.check("ut-psi-multiplicative", pass, || witness.clone());
    Ok(report)
}

fn single_off(i: usize, j: usize, product: VElement) -> Result<UTValue> {
    if product.is_zero() {
        return Ok(UTValue::Zero);
    }
    if product.coeffs.len() != 1 {
        return Err(Error::Precondition(
            "basis product unexpectedly has several terms".into(),
        ));
    }
    let (label, coeff) = product.coeffs.iter().next().unwrap();
    if !coeff.is_one() {
        return Err(Error::Precondition(
            "basis product has a non-unit coefficient".into(),
        ));
    }
    Ok(UTValue::Off(i, j, *label))
}

/// One nonzero entry of an arrow action on the dagger basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionEntry {
    pub arrow: String,
    /// Dagger basis element acted on, printed as the underlying path.
    pub input: String,
    /// Resulting dagger basis element.
    pub output: String,
    /// Coefficient, always ±1 for an almost standard dual.
    pub coeff: i64,
}

/// Verification result for `Cok η_A` and the quotient `V(A)/N`.
#[derive(Debug, Clone)]
pub struct DualReport {
    pub cokernel_dim: usize,
    /// Dagger basis labels: `ξ†` per positive basis path and `e_a†` per
    /// vertex, in path-basis order.
    pub dagger: Vec<String>,
    /// Per positive basis path: the signs `C` in `ξ·ξ† = C·e†` (left) and
    /// `ξ†·ξ = C·e†` (right).
    pub junction_signs: Vec<(String, i64, i64)>,
    /// Chosen representative `𝔲_a` of `e_a†` per vertex.
    pub u_choice: Vec<(String, BasisLabel)>,
    pub left_actions: Vec<ActionEntry>,
    pub right_actions: Vec<ActionEntry>,
    pub almost_standard: bool,
    /// `V(A)/N` has exactly the structure constants of the standard dual.
    pub quotient_is_standard_dual: bool,
    pub restrictive: bool,
    pub checks: CheckReport,
}

/// Index of the dagger basis: positive basis paths and one `e_a†` per vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Dagger {
    Path(PathExpr),
    Vertex(String),
}

impl std::fmt::Display for Dagger {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dagger::Path(p) => write!(f, "{p}†"),
            Dagger::Vertex(a) => write!(f, "e_{a}†"),
        }
    }
}

struct DualContext {
    va: SemisimpleAlgebra,
    /// vertex → (𝔲_a, 𝔳_a): the two diagonal units over the vertex, in
    /// canonical block order.
    idempotent_pair: BTreeMap<String, (BasisLabel, BasisLabel)>,
    /// lower-triangular unit → the positive path it represents.
    lower_to_path: BTreeMap<BasisLabel, PathExpr>,
}

impl DualContext {
    fn new(bq: &BoundQuiver) -> Result<Self> {
        let va = build_va(bq)?;
        let mut per_vertex: BTreeMap<String, Vec<BasisLabel>> = BTreeMap::new();
        let mut lower_to_path = BTreeMap::new();
        for (b, block) in va.blocks.iter().enumerate() {
            match block {
                Block::Mat { rho, vertices } => {
                    for (u, vertex) in vertices.iter().enumerate() {
                        per_vertex
                            .entry(vertex.clone())
                            .or_default()
                            .push(BasisLabel {
                                block: b,
                                row: u,
                                col: u,
                            });
                    }
                    let ids = rho.arrow_ids();
                    for u in 0..ids.len() {
                        for v in u + 1..=ids.len() {
                            lower_to_path.insert(
                                BasisLabel {
                                    block: b,
                                    row: v,
                                    col: u,
                                },
                                PathExpr::Arrows(ids[u..v].to_vec()),
                            );
                        }
                    }
                }
                Block::Scalar { vertex } => {
                    per_vertex
                        .entry(vertex.clone())
                        .or_default()
                        .push(BasisLabel {
                            block: b,
                            row: 0,
                            col: 0,
                        });
                }
            }
        }
        let mut idempotent_pair = BTreeMap::new();
        for (vertex, labels) in per_vertex {
            if labels.len() != 2 {
                return Err(Error::Precondition(format!(
                    "vertex '{vertex}' lies under {} diagonal units, expected 2",
                    labels.len()
                )));
            }
            idempotent_pair.insert(vertex, (labels[0], labels[1]));
        }
        Ok(DualContext {
            va,
            idempotent_pair,
            lower_to_path,
        })
    }

    /// Lift of a dagger basis element to `V(A)`.
    fn lift(&self, dagger: &Dagger) -> Result<BasisLabel> {
        match dagger {
            Dagger::Vertex(a) => Ok(self.idempotent_pair[a].0),
            Dagger::Path(p) => self
                .lower_to_path
                .iter()
                .find(|(_, path)| *path == p)
                .map(|(label, _)| *label)
                .ok_or_else(|| Error::Precondition(format!("no dagger lift for {p}"))),
        }
    }

    /// Reduce an element of `V(A)` modulo `η(A)` onto dagger coordinates:
    /// strictly upper units are η-images of positive paths, and
    /// `𝔲_a + 𝔳_a = η(e_a)` identifies `𝔳̄_a = −𝔲̄_a`.
    fn reduce_mod_eta(&self, element: &VElement) -> BTreeMap<Dagger, BigRational> {
        let mut out: BTreeMap<Dagger, BigRational> = BTreeMap::new();
        let mut put = |d: Dagger, c: BigRational| {
            *out.entry(d).or_insert_with(BigRational::zero) += c;
        };
        for (label, coeff) in &element.coeffs {
            if label.row < label.col {
                continue; // η-image of a positive path
            }
            if label.row > label.col {
                put(
                    Dagger::Path(self.lower_to_path[label].clone()),
                    coeff.clone(),
                );
                continue;
            }
            // Diagonal/scalar unit: ±e_a† depending on the 𝔲/𝔳 choice.
            let (vertex, sign) = self
                .idempotent_pair
                .iter()
                .find_map(|(vertex, (u, v))| {
                    if label == u {
                        Some((vertex.clone(), BigRational::one()))
                    } else if label == v {
                        Some((vertex.clone(), -BigRational::one()))
                    } else {
                        None
                    }
                })
                .expect("every diagonal unit belongs to a vertex");
            put(Dagger::Vertex(vertex), sign * coeff);
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Reduce modulo `N = (⊕_{d>0} V_d) ⊕ ⊕_a K(𝔲_a − 𝔳_a)`: strictly upper
    /// units vanish and both diagonal units over `a` map to `+e_a`.
    fn reduce_mod_n(&self, element: &VElement) -> BTreeMap<Dagger, BigRational> {
        let mut out: BTreeMap<Dagger, BigRational> = BTreeMap::new();
        for (label, coeff) in &element.coeffs {
            if label.row < label.col {
                continue;
            }
            let dagger = if label.row > label.col {
                Dagger::Path(self.lower_to_path[label].clone())
            } else {
                let vertex = self
                    .idempotent_pair
                    .iter()
                    .find_map(|(vertex, (u, v))| (label == u || label == v).then(|| vertex.clone()))
                    .expect("diagonal unit belongs to a vertex");
                Dagger::Vertex(vertex)
            };
            let entry = out.entry(dagger).or_insert_with(BigRational::zero);
            *entry += coeff.clone();
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

/// Expected action of the standard dual `DA` on its dual basis: left
/// multiplication by an arrow strips it from the tail, right multiplication
/// from the head; junctions land on `e†` with coefficient +1.
fn standard_dual_action(
    bq: &BoundQuiver,
    arrow: &str,
    dagger: &Dagger,
    left: bool,
) -> Option<(Dagger, i64)> {
    match dagger {
        Dagger::Vertex(_) => None,
        Dagger::Path(p) => {
            let ids = p.arrow_ids();
            if left {
                if ids.last().map(String::as_str) != Some(arrow) {
                    return None;
                }
                if ids.len() == 1 {
                    let a = bq.arrow(arrow).unwrap().source.clone();
                    Some((Dagger::Vertex(a), 1))
                } else {
                    Some((
                        Dagger::Path(PathExpr::Arrows(ids[..ids.len() - 1].to_vec())),
                        1,
                    ))
                }
            } else {
                if ids.first().map(String::as_str) != Some(arrow) {
                    return None;
                }
                if ids.len() == 1 {
                    let b = bq.arrow(arrow).unwrap().target.clone();
                    Some((Dagger::Vertex(b), 1))
                } else {
                    Some((Dagger::Path(PathExpr::Arrows(ids[1..].to_vec())), 1))
                }
            }
        }
    }
}

/// Compute `Cok η_A` with its dagger basis, the arrow action tables, the
/// almost-standard verification, the quotient comparison `V(A)/N ≅ DA`, and
/// the sign-consistency (restrictive) check.
pub fn cokernel_dual(bq: &BoundQuiver) -> Result<DualReport> {
    quiver::require(bq, Mode::Gentle)?;
    let ctx = DualContext::new(bq)?;
    let basis = path_basis(bq)?;
    let mut checks = CheckReport::new();

    let daggers: Vec<Dagger> = basis
        .iter()
        .map(|p| match p {
            PathExpr::Trivial(a) => Dagger::Vertex(a.clone()),
            positive => Dagger::Path(positive.clone()),
        })
        .collect();
    let cokernel_dim = daggers.len();
    checks.check(
        "cokernel-dimension",
        ctx.va.total_dim - basis.len() == cokernel_dim,
        || {
            format!(
                "dim V − dim A = {} but dagger basis has {cokernel_dim} elements",
                ctx.va.total_dim - basis.len()
            )
        },
    );

    // Arrow actions on the dagger basis, left and right, reduced mod η(A).
    let mut left_actions = Vec::new();
    let mut right_actions = Vec::new();
    let mut almost_standard = true;
    let mut coeff_witness = String::new();
    // Sign constraints for the restrictive condition: rescaling ξ† ↦ c_ξ ξ†
    // must turn every action coefficient into the standard-dual one, which
    // ties c_input = coeff · c_output across each nonzero entry.
    let mut constraints: Vec<(usize, usize, bool)> = Vec::new();
    let dagger_index: BTreeMap<&Dagger, usize> =
        daggers.iter().enumerate().map(|(i, d)| (d, i)).collect();

    for arrow in &bq.arrows {
        let image = eta_with(&ctx.va, bq, &PathExpr::arrows([arrow.id.clone()]))?;
        for dagger in &daggers {
            let lift = VElement::unit(ctx.lift(dagger)?);
            for left in [true, false] {
                let product = if left {
                    image.mul(&lift, &ctx.va)
                } else {
                    lift.mul(&image, &ctx.va)
                };
                let reduced = ctx.reduce_mod_eta(&product);
                let expected = standard_dual_action(bq, &arrow.id, dagger, left);

                // Support must match the standard dual; coefficients must be
                // ±1, and exactly +1 away from the junction.
                let entry = reduced.iter().next();
                match (&expected, entry) {
                    (None, None) => {}
                    (Some((out_dagger, _)), Some((got_dagger, coeff)))
                        if reduced.len() == 1 && got_dagger == out_dagger =>
                    {
                        let c = if coeff.is_one() {
                            1
                        } else if (-coeff.clone()).is_one() {
                            -1
                        } else {
                            almost_standard = false;
                            coeff_witness =
                                format!("{}·{dagger} has coefficient {coeff}", arrow.id);
                            0
                        };
                        let junction = matches!(out_dagger, Dagger::Vertex(_));
                        if !junction && c != 1 {
                            almost_standard = false;
                            coeff_witness =
                                format!("non-junction action {}·{dagger} has sign {c}", arrow.id);
                        }
                        if c != 0 {
                            let entry = ActionEntry {
                                arrow: arrow.id.clone(),
                                input: dagger.to_string(),
                                output: out_dagger.to_string(),
                                coeff: c,
                            };
                            if left {
                                left_actions.push(entry);
                            } else {
                                right_actions.push(entry);
                            }
                            constraints.push((
                                dagger_index[dagger],
                                dagger_index[out_dagger],
                                c < 0,
                            ));
                        }
                    }
                    _ => {
                        almost_standard = false;
                        coeff_witness = format!(
                            "action {}·{dagger} (left = {left}) has support {:?}, expected {:?}",
                            arrow.id,
                            reduced.keys().map(|d| d.to_string()).collect::<Vec<_>>(),
                            expected.as_ref().map(|(d, _)| d.to_string())
                        );
                    }
                }
            }
        }
    }

    // Vertex actions are required to match the standard dual on the nose.
    for a in &bq.vertices {
        let image = eta_with(&ctx.va, bq, &PathExpr::trivial(a))?;
        for dagger in &daggers {
            let lift = VElement::unit(ctx.lift(dagger)?);
            let (target_vertex, source_vertex) = match dagger {
                Dagger::Path(p) => (bq.path_target(p), bq.path_source(p)),
                Dagger::Vertex(v) => (v.clone(), v.clone()),
            };
            let left = ctx.reduce_mod_eta(&image.mul(&lift, &ctx.va));
            let right = ctx.reduce_mod_eta(&lift.mul(&image, &ctx.va));
            let expect = |keep: bool| -> BTreeMap<Dagger, BigRational> {
                let mut m = BTreeMap::new();
                if keep {
                    m.insert(dagger.clone(), BigRational::one());
                }
                m
            };
            if left != expect(target_vertex == *a) || right != expect(source_vertex == *a) {
                almost_standard = false;
                coeff_witness = format!("e_{a} does not act diagonally on {dagger}");
            }
        }
    }
    checks.check("almost-standard", almost_standard, || coeff_witness.clone());

    // Junction signs ξ·ξ† = ±e† and ξ†·ξ = ±e†.
    let mut junction_signs = Vec::new();
    for p in &basis {
        if p.is_empty() {
            continue;
        }
        let dagger = Dagger::Path(p.clone());
        let lift = VElement::unit(ctx.lift(&dagger)?);
        let image = eta_with(&ctx.va, bq, p)?;
        let sign_of = |reduced: BTreeMap<Dagger, BigRational>| -> i64 {
            match reduced.into_iter().next() {
                Some((Dagger::Vertex(_), c)) if c.is_one() => 1,
                Some((Dagger::Vertex(_), c)) if (-c.clone()).is_one() => -1,
                _ => 0,
            }
        };
        let left_sign = sign_of(ctx.reduce_mod_eta(&image.mul(&lift, &ctx.va)));
        let right_sign = sign_of(ctx.reduce_mod_eta(&lift.mul(&image, &ctx.va)));
        junction_signs.push((p.to_string(), left_sign, right_sign));
    }
    checks.check(
        "junction-signs",
        junction_signs.iter().all(|(_, l, r)| *l != 0 && *r != 0),
        || "a junction product missed ±e†".into(),
    );

    // V(A)/N compared against DA with exact structure constants.
    let mut quotient_ok = true;
    let mut quotient_witness = String::new();
    for arrow in &bq.arrows {
        let image = eta_with(&ctx.va, bq, &PathExpr::arrows([arrow.id.clone()]))?;
        for dagger in &daggers {
            let lift = VElement::unit(match dagger {
                Dagger::Vertex(a) => ctx.idempotent_pair[a].0,
                Dagger::Path(_) => ctx.lift(dagger)?,
            });
            for left in [true, false] {
                let product = if left {
                    image.mul(&lift, &ctx.va)
                } else {
                    lift.mul(&image, &ctx.va)
                };
                let reduced = ctx.reduce_mod_n(&product);
                let expected = standard_dual_action(bq, &arrow.id, dagger, left);
                let expected_map: BTreeMap<Dagger, BigRational> = expected
                    .into_iter()
                    .map(|(d, c)| (d, ratio_int(c)))
                    .collect();
                if reduced != expected_map {
                    quotient_ok = false;
                    quotient_witness = format!(
                        "V/N: action {}·{dagger} (left = {left}) differs from the standard dual",
                        arrow.id
                    );
                }
            }
        }
    }
    checks.check("quotient-standard-dual", quotient_ok, || {
        quotient_witness.clone()
    });

    // Restrictive condition: the constraint graph must have no cycle of
    // negative sign product.
    let restrictive = signs_consistent(daggers.len(), &constraints);

    let u_choice = ctx
        .idempotent_pair
        .iter()
        .map(|(vertex, (u, _))| (vertex.clone(), *u))
        .collect();

    Ok(DualReport {
        cokernel_dim,
        dagger: daggers.iter().map(|d| d.to_string()).collect(),
        junction_signs,
        u_choice,
        left_actions,
        right_actions,
        almost_standard: almost_standard && checks.pass(),
        quotient_is_standard_dual: quotient_ok,
        restrictive,
        checks,
    })
}

fn ratio_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Union-find with parity: returns true iff the ±1 constraints are
/// satisfiable by nonzero scalars.
fn signs_consistent(n: usize, constraints: &[(usize, usize, bool)]) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    let mut parity: Vec<bool> = vec![false; n];
    fn find(parent: &mut Vec<usize>, parity: &mut Vec<bool>, x: usize) -> (usize, bool) {
        if parent[x] == x {
            return (x, false);
        }
        let (root, p) = find(parent, parity, parent[x]);
        parent[x] = root;
        parity[x] ^= p;
        (root, parity[x])
    }
    for &(a, b, negative) in constraints {
        let (ra, pa) = find(&mut parent, &mut parity, a);
        let (rb, pb) = find(&mut parent, &mut parity, b);
        if ra == rb {
            if pa ^ pb != negative {
                return false;
            }
        } else {
            parent[ra] = rb;
            parity[ra] = pa ^ pb ^ negative;
        }
    }
    true
}

/// The two conditions gating the characterization and preservation results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConditionReport {
    /// No maximal path has a distinct parallel arrow.
    pub max_length: bool,
    /// `Cok η_A ≅ DA` as bimodules: the dagger basis can be rescaled to the
    /// standard-dual structure constants (always true in characteristic 2).
    pub restrictive: bool,
}

/// Evaluate both conditions.
pub fn check_conditions(bq: &BoundQuiver, char_p: u64) -> Result<ConditionReport> {
    quiver::require(bq, Mode::Gentle)?;
    let summary = threads(bq)?;
    let max_length = summary.maximal_paths.iter().all(|rho| {
        let s = bq.path_source(rho);
        let t = bq.path_target(rho);
        !bq.arrows
            .iter()
            .any(|a| a.source == s && a.target == t && PathExpr::arrows([a.id.clone()]) != *rho)
    });
    let restrictive = if char_p == 2 {
        true
    } else {
        cokernel_dual(bq)?.restrictive
    };
    Ok(ConditionReport {
        max_length,
        restrictive,
    })
}
