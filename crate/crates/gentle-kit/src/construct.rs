//! Constructions on gentle bound quivers: the finite gentle repetition
//! `A^(k)`, weldings, generalized Auslander-Platzeck-Reiten reflections with
//! thread transport, bound-quiver isomorphism, sheet bases of `A^(k)`, and a
//! seeded random generator for property-testing corpora.
//!
//! Naming of generated ids: sheet copies are decorated `v#i` / `a#i`; the
//! connecting arrow of thread `p` at level `i` is `a1.a2.…*#i` when `℘_p` is
//! the maximal path `a1⋯al`, and `iota_v#i` when `℘_p` is trivial at `v`.
//! With these names, `weld(a, a, id)` reproduces `repeat(a, 2)` verbatim.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::blossom::{blossom, Blossoming};
use crate::quiver::{self, threads, Arrow, BoundQuiver, Mode, PathExpr};
use crate::{Error, Result};

/// A permutation of `{1..d}`, stored as the image list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// Validate that `images` is a bijection of `{1..n}`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &im in &images {
            if im == 0 || im > n || seen[im] {
                return Err(Error::Precondition(format!(
                    "invalid permutation image list {images:?}"
                )));
            }
            seen[im] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of `p` (1-based).
    pub fn image(&self, p: usize) -> usize {
        self.images[p - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Sorted cycle lengths.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n + 1];
        let mut lengths = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut p = start;
            loop {
                seen[p] = true;
                len += 1;
                p = self.image(p);
                if p == start {
                    break;
                }
            }
            lengths.push(len);
        }
        lengths.sort();
        lengths
    }
}

/// Name of the connecting arrow for a thread with segment `wp`, without the
/// level suffix.
fn connecting_stem(wp: &PathExpr) -> String {
    match wp {
        PathExpr::Trivial(v) => format!("iota_{v}"),
        PathExpr::Arrows(seq) => format!("{}*", seq.join(".")),
    }
}

fn sheet_id(id: &str, i: usize) -> String {
    format!("{id}#{i}")
}

/// The `k`-fold gentle repetition of a quiver.
#[derive(Debug, Clone)]
pub struct RepetitionQuiver {
    pub base: BoundQuiver,
    pub k: usize,
    pub result: BoundQuiver,
    /// Degree assigned to the connecting arrows of each thread, by label.
    pub w: Vec<i64>,
}

/// Build `A^(k)`: `k` blossomed copies welded along matching blossom arrows,
/// outer blossoms stripped.
///
/// `w` overrides the degrees of the connecting arrows (one entry per thread
/// label); the default is the natural choice `−deg(℘_p)` for path threads and
/// `0` for trivial threads, which makes each welded thread degree-neutral.
pub fn repeat(bq: &BoundQuiver, k: usize, w: Option<Vec<i64>>) -> Result<RepetitionQuiver> {
    if k == 0 {
        return Err(Error::Precondition("repetition requires k ≥ 1".into()));
    }
    let blossoming = blossom(bq)?;
    let d = blossoming.d();
    if d == 0 {
        return Err(Error::Precondition(
            "no permitted thread: the quiver equals its blossoming, so it cannot be repeated"
                .into(),
        ));
    }
    let w = match w {
        Some(list) => {
            if list.len() != d {
                return Err(Error::Precondition(format!(
                    "w must have one entry per thread: expected {d}, got {}",
                    list.len()
                )));
            }
            list
        }
        None => blossoming
            .threads
            .iter()
            .map(|t| match &t.wp {
                PathExpr::Trivial(_) => 0,
                PathExpr::Arrows(seq) => -seq.iter().map(|id| bq.degree_of(id)).sum::<i64>(),
            })
            .collect(),
    };

    let result = assemble_repetition(bq, &blossoming, k, &w)?;
    Ok(RepetitionQuiver {
        base: bq.clone(),
        k,
        result,
        w,
    })
}

fn assemble_repetition(
    bq: &BoundQuiver,
    blossoming: &Blossoming,
    k: usize,
    w: &[i64],
) -> Result<BoundQuiver> {
    let blossomed = &blossoming.blossomed;
    let mut vertices = Vec::new();
    let mut arrows = Vec::new();
    let mut relations = Vec::new();
    let mut degrees: BTreeMap<String, i64> = BTreeMap::new();

    for i in 1..=k {
        for v in &bq.vertices {
            vertices.push(sheet_id(v, i));
        }
        for a in &bq.arrows {
            arrows.push(Arrow::new(
                sheet_id(&a.id, i),
                sheet_id(&a.source, i),
                sheet_id(&a.target, i),
            ));
            degrees.insert(sheet_id(&a.id, i), bq.degree_of(&a.id));
        }
        for (first, second) in &bq.relations {
            relations.push((sheet_id(first, i), sheet_id(second, i)));
        }
    }

    // Connecting arrows ϖ_p at levels 1..k−1, and the welded relations: a
    // composition through ϖ_p is a relation exactly when the corresponding
    // composition through tau#p / sigma#p was one in the blossoming.
    for info in &blossoming.threads {
        let stem = connecting_stem(&info.wp);
        let source = bq.path_target(&info.wp);
        let target = bq.path_source(&info.wp);
        for i in 1..k {
            let id = format!("{stem}#{i}");
            arrows.push(Arrow::new(
                &id,
                sheet_id(&source, i),
                sheet_id(&target, i + 1),
            ));
            degrees.insert(id.clone(), w[info.label - 1]);
            for xi in &bq.arrows {
                if blossomed.has_relation(&xi.id, &info.tau) {
                    relations.push((sheet_id(&xi.id, i), id.clone()));
                }
                if blossomed.has_relation(&info.sigma, &xi.id) {
                    relations.push((id.clone(), sheet_id(&xi.id, i + 1)));
                }
            }
            for other in &blossoming.threads {
                if i + 1 < k && blossomed.has_relation(&info.sigma, &other.tau) {
                    relations.push((
                        format!("{stem}#{i}"),
                        format!("{}#{}", connecting_stem(&other.wp), i + 1),
                    ));
                }
            }
        }
    }

    relations.sort();
    relations.dedup();
    let result = BoundQuiver {
        name: format!("{}_rep{k}", bq.name),
        vertices,
        arrows,
        relations,
        degrees: None,
    }
    .with_degrees(degrees);

    debug_assert_eq!(result.vertices.len(), k * bq.vertices.len());
    debug_assert_eq!(
        result.arrows.len(),
        k * bq.arrows.len() + (k - 1) * blossoming.d()
    );
    quiver::require(&result, Mode::LocallyGentle)?;
    Ok(result)
}

/// Weld two quivers along a permutation of thread labels: the connecting
/// arrow `ϖ_p` runs from the sink side of thread `p` of `a` to the source
/// side of thread `s(p)` of `b`.
///
/// Ids of `a` are decorated `#1`, ids of `b` are decorated `#2`.
pub fn weld(a: &BoundQuiver, b: &BoundQuiver, s: &Permutation) -> Result<BoundQuiver> {
    let ba = blossom(a)?;
    let bb = blossom(b)?;
    if ba.d() != bb.d() || ba.d() == 0 {
        return Err(Error::Precondition(format!(
            "welding requires matching positive thread counts: d = {} vs {}",
            ba.d(),
            bb.d()
        )));
    }
    if s.degree() != ba.d() {
        return Err(Error::Precondition(format!(
            "permutation degree {} does not match d = {}",
            s.degree(),
            ba.d()
        )));
    }

    let mut vertices = Vec::new();
    let mut arrows = Vec::new();
    let mut relations = Vec::new();
    let mut degrees: BTreeMap<String, i64> = BTreeMap::new();
    for (side, q) in [(1, a), (2, b)] {
        for v in &q.vertices {
            vertices.push(sheet_id(v, side));
        }
        for arrow in &q.arrows {
            arrows.push(Arrow::new(
                sheet_id(&arrow.id, side),
                sheet_id(&arrow.source, side),
                sheet_id(&arrow.target, side),
            ));
            degrees.insert(sheet_id(&arrow.id, side), q.degree_of(&arrow.id));
        }
        for (first, second) in &q.relations {
            relations.push((sheet_id(first, side), sheet_id(second, side)));
        }
    }

    for info in &ba.threads {
        let partner = &bb.threads[s.image(info.label) - 1];
        let id = format!("{}#1", connecting_stem(&info.wp));
        arrows.push(Arrow::new(
            &id,
            sheet_id(&a.path_target(&info.wp), 1),
            sheet_id(&b.path_source(&partner.wp), 2),
        ));
        for xi in &a.arrows {
            if ba.blossomed.has_relation(&xi.id, &info.tau) {
                relations.push((sheet_id(&xi.id, 1), id.clone()));
            }
        }
        for xi in &b.arrows {
            if bb.blossomed.has_relation(&partner.sigma, &xi.id) {
                relations.push((id.clone(), sheet_id(&xi.id, 2)));
            }
        }
    }

    relations.sort();
    relations.dedup();
    let result = BoundQuiver {
        name: format!("{}_weld_{}", a.name, b.name),
        vertices,
        arrows,
        relations,
        degrees: None,
    }
    .with_degrees(degrees);
    quiver::require(&result, Mode::LocallyGentle)?;
    Ok(result)
}

/// Independent construction of `A^(k)` by iterated welding, used to
/// cross-check [`repeat`]. At every step the permutation realigns the
/// canonical labels of the partial welding with the base labels.
pub fn repeat_by_welding(bq: &BoundQuiver, k: usize) -> Result<BoundQuiver> {
    if k == 0 {
        return Err(Error::Precondition("repetition requires k ≥ 1".into()));
    }
    let mut current = bq.clone();
    // labels[p − 1] = base-thread label of the current quiver's thread p.
    let mut labels: Vec<usize> = (1..=blossom(bq)?.d()).collect();
    for _ in 2..=k {
        let perm = Permutation::new(labels.clone())?;
        // Predict the first arrow of each welded chain so the new canonical
        // labels can be traced back to base labels.
        let cur_blossoming = blossom(&current)?;
        let mut first_arrow_to_label: HashMap<String, usize> = HashMap::new();
        for info in &cur_blossoming.threads {
            let first = match &info.wp {
                PathExpr::Arrows(seq) => sheet_id(&seq[0], 1),
                PathExpr::Trivial(_) => format!("{}#1", connecting_stem(&info.wp)),
            };
            first_arrow_to_label.insert(first, labels[info.label - 1]);
        }
        let next = weld(&current, bq, &perm)?;
        let next_blossoming = blossom(&next)?;
        labels = next_blossoming
            .threads
            .iter()
            .map(|info| {
                let first = &info.wp.arrow_ids()[0];
                *first_arrow_to_label
                    .get(first)
                    .expect("welded chain starts with a known arrow")
            })
            .collect();
        current = next;
    }
    Ok(current)
}

/// Check the strengthened reflection conditions at `x`: no loop, in- and
/// out-degree exactly 2, and every arrow into `x` extends backwards into a
/// relation.
pub fn check_reflection_condition(bq: &BoundQuiver, x: &str) -> Result<bool> {
    quiver::require(bq, Mode::Gentle)?;
    if !bq.vertices.iter().any(|v| v == x) {
        return Err(Error::Precondition(format!("unknown vertex '{x}'")));
    }
    let c1 = !bq.arrows.iter().any(|a| a.source == x && a.target == x);
    let c2 = bq.din(x) == 2 && bq.dout(x) == 2;
    let c3 = bq.incoming(x).iter().all(|beta| {
        bq.incoming(&beta.source)
            .iter()
            .any(|gamma| bq.has_relation(&gamma.id, &beta.id))
    });
    Ok(c1 && c2 && c3)
}

/// Generalized APR reflection at a vertex satisfying (r1) and (r2).
///
/// Arrow ids are reused; only sources, targets and relations change. The
/// output is validated and an invalid reflection (possible for vertices
/// meeting only the weak conditions) is reported as an error.
pub fn apr_reflect(bq: &BoundQuiver, x: &str) -> Result<BoundQuiver> {
    quiver::require(bq, Mode::Gentle)?;
    if !bq.vertices.iter().any(|v| v == x) {
        return Err(Error::Precondition(format!("unknown vertex '{x}'")));
    }
    if bq.arrows.iter().any(|a| a.source == x && a.target == x) {
        return Err(Error::Precondition(format!(
            "(r1) fails: loop at vertex '{x}'"
        )));
    }
    // (r2): each arrow out of x has a permitted predecessor into x.
    let mut beta_of: BTreeMap<String, String> = BTreeMap::new();
    for alpha in bq.outgoing(x) {
        let beta = bq
            .incoming(x)
            .into_iter()
            .find(|b| !bq.has_relation(&b.id, &alpha.id));
        match beta {
            Some(b) => {
                beta_of.insert(alpha.id.clone(), b.id.clone());
            }
            None => {
                return Err(Error::Precondition(format!(
                    "(r2) fails at '{x}': no arrow β with t(β) = {x} and β·{} ∉ I",
                    alpha.id
                )))
            }
        }
    }

    // Retargeting rule: an arrow λ with t(λ) = x turns around; an arrow out
    // of x is pulled back to s(β_λ); an arrow that composes into x through a
    // relation is redirected to end at x.
    let satisfies_refl1 = |lam: &Arrow| -> bool {
        bq.arrows
            .iter()
            .any(|b| b.target == x && b.source == lam.target && bq.has_relation(&lam.id, &b.id))
    };
    let arrows: Vec<Arrow> = bq
        .arrows
        .iter()
        .map(|lam| {
            let source = if lam.target == x {
                x.to_string()
            } else if lam.source == x {
                bq.arrow(&beta_of[&lam.id]).unwrap().source.clone()
            } else {
                lam.source.clone()
            };
            let target = if lam.target == x {
                lam.source.clone()
            } else if satisfies_refl1(lam) {
                x.to_string()
            } else {
                lam.target.clone()
            };
            Arrow::new(lam.id.clone(), source, target)
        })
        .collect();

    let mut relations: Vec<(String, String)> = Vec::new();
    for (lam, kap) in &bq.relations {
        let t_kap = &bq.arrow(kap).unwrap().target;
        let junction = &bq.arrow(kap).unwrap().source;
        if t_kap != x && junction != x {
            relations.push((lam.clone(), kap.clone()));
        }
    }
    for alpha in bq.outgoing(x) {
        relations.push((beta_of[&alpha.id].clone(), alpha.id.clone()));
    }
    for kap in bq.incoming(x) {
        for lam in &bq.arrows {
            let has_other_beta = bq.arrows.iter().any(|b| {
                b.id != kap.id
                    && b.target == x
                    && b.source == lam.target
                    && bq.has_relation(&lam.id, &b.id)
            });
            if has_other_beta {
                relations.push((lam.id.clone(), kap.id.clone()));
            }
        }
    }
    relations.sort();
    relations.dedup();

    let result = BoundQuiver {
        name: format!("{}_apr_{x}", bq.name),
        vertices: bq.vertices.clone(),
        arrows,
        relations,
        degrees: bq.degrees.clone(),
    };
    quiver::require(&result, Mode::Gentle)?;
    Ok(result)
}

/// Result of transporting the maximal blossomed paths through a reflection.
#[derive(Debug, Clone)]
pub struct TransportResult {
    /// The reflected blossoming `B°` (the reflection applied to `A°`).
    pub reflected_blossomed: BoundQuiver,
    /// One transported maximal path per thread label of `A`.
    pub transported: Vec<PathExpr>,
}

/// Decompose every maximal path of the blossoming over the reflection
/// alphabet at `x` and push it through the arrow substitution. The returned
/// paths are exactly the maximal paths of the reflected blossoming.
pub fn apr_transport(bq: &BoundQuiver, x: &str) -> Result<TransportResult> {
    if !check_reflection_condition(bq, x)? {
        return Err(Error::Precondition(format!(
            "vertex '{x}' does not satisfy the reflection conditions (c1)–(c3)"
        )));
    }
    let blossoming = blossom(bq)?;
    let big = &blossoming.blossomed;
    let reflected = apr_reflect(big, x)?;

    // The six distinguished arrows around x. α's are the arrows out of x,
    // β_i the arrow into x with β_i·α_i ∉ I, γ_i the relation-predecessor of
    // β_i. All live in the original quiver because din(x) = dout(x) = 2.
    let mut alphas: Vec<String> = big.outgoing(x).iter().map(|a| a.id.clone()).collect();
    alphas.sort();
    let betas: Vec<String> = alphas
        .iter()
        .map(|al| {
            big.incoming(x)
                .iter()
                .find(|b| !big.has_relation(&b.id, al))
                .expect("(c3) grants a permitted predecessor")
                .id
                .clone()
        })
        .collect();
    let gammas: Vec<String> = betas
        .iter()
        .map(|be| {
            quiver::forbidden_predecessor(big, be)
                .expect("(c3) grants a relation predecessor")
                .id
                .clone()
        })
        .collect();

    let special: BTreeSet<&String> = alphas.iter().chain(&betas).chain(&gammas).collect();
    let beta_index = |id: &str| betas.iter().position(|b| b == id);
    let gamma_index = |id: &str| gammas.iter().position(|g| g == id);
    let alpha_index = |id: &str| alphas.iter().position(|a| a == id);

    // c_x on the alphabet: arrows outside the special set are untouched;
    // β_iα_i contracts to α_i (followed by β_j when α_i = γ_j); a lone γ_i
    // expands to γ_iβ_i.
    let map_beta_alpha = |i: usize| -> Vec<String> {
        match gamma_index(&alphas[i]) {
            None => vec![alphas[i].clone()],
            Some(j) => vec![alphas[i].clone(), betas[j].clone()],
        }
    };
    let map_gamma = |i: usize| -> Vec<String> { vec![gammas[i].clone(), betas[i].clone()] };

    let mut transported = Vec::new();
    for info in &blossoming.threads {
        let mut seq = vec![info.sigma.clone()];
        seq.extend(info.wp.arrow_ids().iter().cloned());
        seq.push(info.tau.clone());

        let mut out: Vec<String> = Vec::new();
        let mut pos = 0;
        while pos < seq.len() {
            let id = &seq[pos];
            if let Some(i) = beta_index(id) {
                assert_eq!(
                    alpha_index(&seq[pos + 1]),
                    Some(i),
                    "β_{i} must be followed by α_{i} in a maximal path"
                );
                out.extend(map_beta_alpha(i));
                pos += 2;
            } else if let Some(i) = gamma_index(id) {
                out.extend(map_gamma(i));
                pos += 1;
            } else {
                assert!(
                    !special.contains(id) || alpha_index(id).is_none(),
                    "unconsumed α arrow {id}"
                );
                out.push(id.clone());
                pos += 1;
            }
        }
        let path = PathExpr::Arrows(out);
        debug_assert!(reflected.is_path(&path));
        transported.push(path);
    }

    Ok(TransportResult {
        reflected_blossomed: reflected,
        transported,
    })
}

/// A vertex- and arrow-bijection preserving sources, targets and relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoMapping {
    pub vertex_map: BTreeMap<String, String>,
    pub arrow_map: BTreeMap<String, String>,
}

/// Default node budget for the isomorphism search.
pub const ISO_BUDGET: usize = 10_000_000;

/// Find a bound-quiver isomorphism by backtracking with degree and
/// relation-signature pruning, or `None` if the quivers are not isomorphic.
pub fn iso(a: &BoundQuiver, b: &BoundQuiver) -> Result<Option<IsoMapping>> {
    iso_with_budget(a, b, ISO_BUDGET)
}

pub fn iso_with_budget(
    a: &BoundQuiver,
    b: &BoundQuiver,
    budget: usize,
) -> Result<Option<IsoMapping>> {
    if a.vertices.len() != b.vertices.len()
        || a.arrows.len() != b.arrows.len()
        || a.relations.len() != b.relations.len()
    {
        return Ok(None);
    }

    // Vertex signature: degrees plus the number of relations whose junction
    // sits at the vertex.
    let signature = |q: &BoundQuiver, v: &str| -> (usize, usize, usize) {
        let junctions = q
            .relations
            .iter()
            .filter(|(first, _)| q.arrow(first).map(|a| a.target.as_str()) == Some(v))
            .count();
        (q.din(v), q.dout(v), junctions)
    };
    let mut sig_a: Vec<_> = a.vertices.iter().map(|v| signature(a, v)).collect();
    let mut sig_b: Vec<_> = b.vertices.iter().map(|v| signature(b, v)).collect();
    {
        let mut sa = sig_a.clone();
        let mut sb = sig_b.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return Ok(None);
        }
    }
    sig_a.clear();
    sig_b.clear();

    // Order the a-vertices along a breadth-first traversal so each new vertex
    // is adjacent to an already-mapped one whenever possible.
    let order = bfs_order(a);
    let mut mapping: HashMap<String, String> = HashMap::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    let mut nodes = 0usize;

    fn bundle(q: &BoundQuiver, s: &str, t: &str) -> usize {
        q.arrows
            .iter()
            .filter(|a| a.source == s && a.target == t)
            .count()
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_vertices(
        a: &BoundQuiver,
        b: &BoundQuiver,
        order: &[String],
        depth: usize,
        mapping: &mut HashMap<String, String>,
        used: &mut BTreeSet<String>,
        nodes: &mut usize,
        budget: usize,
        signature: &dyn Fn(&BoundQuiver, &str) -> (usize, usize, usize),
    ) -> Result<Option<IsoMapping>> {
        if depth == order.len() {
            return finish_arrows(a, b, mapping, nodes, budget);
        }
        let u = &order[depth];
        let sig_u = signature(a, u);
        for w in &b.vertices {
            if used.contains(w) || signature(b, w) != sig_u {
                continue;
            }
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::SearchBudget(budget));
            }
            // Arrow-multiplicity consistency with every mapped vertex.
            let consistent = mapping.iter().all(|(u2, w2)| {
                bundle(a, u, u2) == bundle(b, w, w2) && bundle(a, u2, u) == bundle(b, w2, w)
            }) && bundle(a, u, u) == bundle(b, w, w);
            if !consistent {
                continue;
            }
            mapping.insert(u.clone(), w.clone());
            used.insert(w.clone());
            if let Some(found) = assign_vertices(
                a,
                b,
                order,
                depth + 1,
                mapping,
                used,
                nodes,
                budget,
                signature,
            )? {
                return Ok(Some(found));
            }
            mapping.remove(u);
            used.remove(w);
        }
        Ok(None)
    }

    fn finish_arrows(
        a: &BoundQuiver,
        b: &BoundQuiver,
        vertex_map: &HashMap<String, String>,
        nodes: &mut usize,
        budget: usize,
    ) -> Result<Option<IsoMapping>> {
        // Group a-arrows into parallel bundles and enumerate the per-bundle
        // bijections (bundle size ≤ 2 for locally gentle quivers).
        let mut bundles: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
        for arrow in &a.arrows {
            bundles
                .entry((arrow.source.clone(), arrow.target.clone()))
                .or_default()
                .push(arrow.id.clone());
        }
        let mut choices: Vec<(Vec<String>, Vec<String>)> = Vec::new();
        for ((s, t), ids) in &bundles {
            let targets: Vec<String> = b
                .arrows
                .iter()
                .filter(|x| x.source == vertex_map[s] && x.target == vertex_map[t])
                .map(|x| x.id.clone())
                .collect();
            if targets.len() != ids.len() {
                return Ok(None);
            }
            choices.push((ids.clone(), targets));
        }

        #[allow(clippy::too_many_arguments)]
        fn rec(
            a: &BoundQuiver,
            b: &BoundQuiver,
            vertex_map: &HashMap<String, String>,
            choices: &[(Vec<String>, Vec<String>)],
            idx: usize,
            arrow_map: &mut HashMap<String, String>,
            nodes: &mut usize,
            budget: usize,
        ) -> Result<Option<IsoMapping>> {
            if idx == choices.len() {
                let ok = a
                    .relations
                    .iter()
                    .all(|(x, y)| b.has_relation(&arrow_map[x], &arrow_map[y]));
                return Ok(ok.then(|| IsoMapping {
                    vertex_map: vertex_map
                        .iter()
                        .map(|(k, v)| (k.clone(), v.clone()))
                        .collect(),
                    arrow_map: arrow_map
                        .iter()
                        .map(|(k, v)| (k.clone(), v.clone()))
                        .collect(),
                }));
            }
            let (sources, targets) = &choices[idx];
            let mut perm: Vec<usize> = (0..targets.len()).collect();
            loop {
                *nodes += 1;
                if *nodes > budget {
                    return Err(Error::SearchBudget(budget));
                }
                for (i, &j) in perm.iter().enumerate() {
                    arrow_map.insert(sources[i].clone(), targets[j].clone());
                }
                if let Some(found) =
                    rec(a, b, vertex_map, choices, idx + 1, arrow_map, nodes, budget)?
                {
                    return Ok(Some(found));
                }
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            for s in sources {
                arrow_map.remove(s);
            }
            Ok(None)
        }

        let mut arrow_map = HashMap::new();
        rec(a, b, vertex_map, &choices, 0, &mut arrow_map, nodes, budget)
    }

    assign_vertices(
        a,
        b,
        &order,
        0,
        &mut mapping,
        &mut used,
        &mut nodes,
        budget,
        &signature,
    )
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

fn bfs_order(q: &BoundQuiver) -> Vec<String> {
    let mut order = Vec::new();
    let mut seen: BTreeSet<&String> = BTreeSet::new();
    let mut queue: std::collections::VecDeque<&String> = Default::default();
    for start in &q.vertices {
        if seen.contains(start) {
            continue;
        }
        seen.insert(start);
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v.clone());
            for a in &q.arrows {
                for next in [&a.source, &a.target] {
                    if (a.source == *v || a.target == *v) && !seen.contains(next) {
                        seen.insert(next);
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    order
}

/// A basis element of `1^[i] A^(k) 1^[j]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum SheetElem {
    /// A path of the base algebra living on one sheet.
    Diagonal { path: PathExpr, sheet: usize },
    /// `(α_{u+1}⋯α_l)^[i] ρ^[i,j] (α_1⋯α_v)^[j]` for the maximal path with
    /// the given canonical index.
    Window {
        rho_index: usize,
        u: usize,
        v: usize,
        from: usize,
        to: usize,
    },
    /// `ι_a^[i,j]` for a trivial-thread vertex `a`.
    Iota {
        vertex: String,
        from: usize,
        to: usize,
    },
}

impl std::fmt::Display for SheetElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SheetElem::Diagonal { path, sheet } => write!(f, "{path}#{sheet}"),
            SheetElem::Window {
                rho_index,
                u,
                v,
                from,
                to,
            } => write!(f, "w{rho_index}[{u},{v}]#{from}-{to}"),
            SheetElem::Iota { vertex, from, to } => write!(f, "iota_{vertex}#{from}-{to}"),
        }
    }
}

/// Basis labels of `1^[i] A^(k) 1^[j]`: empty for `i > j`, the decorated path
/// basis on the diagonal, and windows through the connecting arrows plus
/// iota chains for `i < j`.
pub fn sheet_basis(bq: &BoundQuiver, k: usize, i: usize, j: usize) -> Result<Vec<SheetElem>> {
    if i == 0 || j == 0 || i > k || j > k {
        return Err(Error::Precondition(format!(
            "sheet indices must lie in 1..={k}: got ({i}, {j})"
        )));
    }
    if i > j {
        return Ok(Vec::new());
    }
    if i == j {
        return Ok(quiver::path_basis(bq)?
            .into_iter()
            .map(|path| SheetElem::Diagonal { path, sheet: i })
            .collect());
    }
    let summary = threads(bq)?;
    let mut out = Vec::new();
    for (rho_index, rho) in summary.maximal_paths.iter().enumerate() {
        let l = rho.len();
        for u in 0..=l {
            for v in 0..=l {
                out.push(SheetElem::Window {
                    rho_index,
                    u,
                    v,
                    from: i,
                    to: j,
                });
            }
        }
    }
    for vertex in &summary.trivial_vertices {
        out.push(SheetElem::Iota {
            vertex: vertex.clone(),
            from: i,
            to: j,
        });
    }
    Ok(out)
}

/// Realize a sheet-basis element as a concrete path of `A^(k)` (arrow ids of
/// the [`repeat`] output).
pub fn realize_sheet_elem(bq: &BoundQuiver, elem: &SheetElem) -> Result<PathExpr> {
    let summary = threads(bq)?;
    Ok(match elem {
        SheetElem::Diagonal { path, sheet } => match path {
            PathExpr::Trivial(v) => PathExpr::Trivial(sheet_id(v, *sheet)),
            PathExpr::Arrows(seq) => {
                PathExpr::Arrows(seq.iter().map(|id| sheet_id(id, *sheet)).collect())
            }
        },
        SheetElem::Window {
            rho_index,
            u,
            v,
            from,
            to,
        } => {
            let rho = &summary.maximal_paths[*rho_index];
            let ids = rho.arrow_ids();
            let stem = connecting_stem(rho);
            let mut seq: Vec<String> = ids[*u..].iter().map(|id| sheet_id(id, *from)).collect();
            for level in *from..*to {
                seq.push(format!("{stem}#{level}"));
                if level + 1 < *to {
                    seq.extend(ids.iter().map(|id| sheet_id(id, level + 1)));
                }
            }
            seq.extend(ids[..*v].iter().map(|id| sheet_id(id, *to)));
            PathExpr::Arrows(seq)
        }
        SheetElem::Iota { vertex, from, to } => PathExpr::Arrows(
            (*from..*to)
                .map(|level| format!("iota_{vertex}#{level}"))
                .collect(),
        ),
    })
}

/// Deterministic random gentle quiver: `validate(·, gentle)` always passes
/// and the underlying graph is connected.
///
/// Generation proceeds by degree-bounded arrow insertion over a random
/// spanning tree, followed by per-vertex random matchings; oriented cycles
/// are rejected by retrying, and as a last resort broken by deleting one
/// cycle arrow (recorded by a `_pruned` suffix on the quiver name).
pub fn random_gentle(n_vertices: usize, n_arrows: usize, seed: u64) -> Result<BoundQuiver> {
    if n_vertices < 2 || n_arrows == 0 {
        return Err(Error::Generation(format!(
            "need at least 2 vertices and 1 arrow, got ({n_vertices}, {n_arrows})"
        )));
    }
    if n_arrows > 2 * n_vertices {
        return Err(Error::Generation(format!(
            "{n_arrows} arrows exceed the degree capacity 2·{n_vertices}"
        )));
    }
    if n_arrows + 1 < n_vertices {
        return Err(Error::Generation(format!(
            "{n_arrows} arrows cannot connect {n_vertices} vertices"
        )));
    }

    const ATTEMPTS: u64 = 64;
    let mut last = None;
    for attempt in 0..ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        );
        let Some(candidate) = generate_candidate(n_vertices, n_arrows, seed, &mut rng) else {
            continue;
        };
        if let Ok(report) = quiver::validate(&candidate, Mode::Gentle) {
            if report.pass {
                return Ok(candidate);
            }
        }
        last = Some(candidate);
    }

    // Retries exhausted: break surviving oriented cycles by deleting arrows.
    if let Some(mut candidate) = last {
        candidate.name.push_str("_pruned");
        for _ in 0..n_arrows {
            let report = quiver::validate(&candidate, Mode::Gentle)?;
            if report.pass {
                return Ok(candidate);
            }
            let Some(cycle) = report
                .violations
                .iter()
                .find(|v| v.condition == "oriented-cycle")
            else {
                break;
            };
            let victim = cycle.items[0].clone();
            candidate.arrows.retain(|a| a.id != victim);
            candidate
                .relations
                .retain(|(a, b)| *a != victim && *b != victim);
        }
        if quiver::validate(&candidate, Mode::Gentle)?.pass {
            return Ok(candidate);
        }
    }
    Err(Error::Generation(format!(
        "no gentle quiver with ({n_vertices}, {n_arrows}) found for seed {seed}"
    )))
}

fn generate_candidate(
    n_vertices: usize,
    n_arrows: usize,
    seed: u64,
    rng: &mut ChaCha8Rng,
) -> Option<BoundQuiver> {
    let vertices: Vec<String> = (1..=n_vertices).map(|i| format!("v{i}")).collect();
    let mut din = vec![0usize; n_vertices];
    let mut dout = vec![0usize; n_vertices];
    let mut arrows: Vec<(usize, usize)> = Vec::new();

    // Spanning connection first, then fill in the remaining arrows.
    let mut order: Vec<usize> = (0..n_vertices).collect();
    order.shuffle(rng);
    for idx in 1..n_vertices {
        let v = order[idx];
        let mut placed = false;
        for _ in 0..32 {
            let w = order[rng.gen_range(0..idx)];
            let (s, t) = if rng.gen_bool(0.5) { (v, w) } else { (w, v) };
            if dout[s] < 2 && din[t] < 2 {
                arrows.push((s, t));
                dout[s] += 1;
                din[t] += 1;
                placed = true;
                break;
            }
        }
        if !placed {
            return None;
        }
    }
    while arrows.len() < n_arrows {
        let mut placed = false;
        for _ in 0..64 {
            let s = rng.gen_range(0..n_vertices);
            let t = rng.gen_range(0..n_vertices);
            if s != t && dout[s] < 2 && din[t] < 2 {
                arrows.push((s, t));
                dout[s] += 1;
                din[t] += 1;
                placed = true;
                break;
            }
        }
        if !placed {
            return None;
        }
    }

    let arrow_ids: Vec<String> = arrows
        .iter()
        .enumerate()
        .map(|(i, _)| format!("a{}", i + 1))
        .collect();

    // Per-vertex matchings: pick the permitted pairs at random, everything
    // else becomes a relation.
    let mut relations: Vec<(String, String)> = Vec::new();
    for v in 0..n_vertices {
        let ins: Vec<usize> = (0..arrows.len()).filter(|&a| arrows[a].1 == v).collect();
        let outs: Vec<usize> = (0..arrows.len()).filter(|&a| arrows[a].0 == v).collect();
        match (ins.len(), outs.len()) {
            (2, 2) => {
                let flip = rng.gen_bool(0.5);
                let permitted = if flip {
                    [(ins[0], outs[0]), (ins[1], outs[1])]
                } else {
                    [(ins[0], outs[1]), (ins[1], outs[0])]
                };
                for &i in &ins {
                    for &o in &outs {
                        if !permitted.contains(&(i, o)) {
                            relations.push((arrow_ids[i].clone(), arrow_ids[o].clone()));
                        }
                    }
                }
            }
            (1, 2) => {
                let o = outs[rng.gen_range(0..2)];
                relations.push((arrow_ids[ins[0]].clone(), arrow_ids[o].clone()));
            }
            (2, 1) => {
                let i = ins[rng.gen_range(0..2)];
                relations.push((arrow_ids[i].clone(), arrow_ids[outs[0]].clone()));
            }
            (1, 1) if rng.gen_bool(0.5) => {
                relations.push((arrow_ids[ins[0]].clone(), arrow_ids[outs[0]].clone()));
            }
            _ => {}
        }
    }

    Some(BoundQuiver::build(
        format!("gen_{n_vertices}_{n_arrows}_s{seed}"),
        vertices.iter().map(String::as_str).collect(),
        arrows
            .iter()
            .zip(&arrow_ids)
            .map(|(&(s, t), id)| (id.as_str(), vertices[s].as_str(), vertices[t].as_str()))
            .collect(),
        relations
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{a2, ex1, ex2, kronecker};
    use crate::invariants::phi;
    use crate::quiver::path_basis;

    #[test]
    fn repeat_ex1_counts_and_names() {
        let rep = repeat(&ex1(), 3, None).unwrap();
        assert_eq!(rep.result.vertices.len(), 18);
        assert_eq!(rep.result.arrows.len(), 31);
        let ids: BTreeSet<String> = rep.result.arrows.iter().map(|a| a.id.clone()).collect();
        for name in [
            "al.be.ze*#1",
            "al.be.ze*#2",
            "ga.th.ka*#1",
            "la*#1",
            "la*#2",
            "iota_a#1",
            "iota_a#2",
            "iota_g#1",
            "iota_g#2",
        ] {
            assert!(ids.contains(name), "missing {name}");
        }
    }

    #[test]
    fn repeat_a2_k2_exact_shape() {
        let rep = repeat(&a2(), 2, None).unwrap().result;
        let mut vertices = rep.vertices.clone();
        vertices.sort();
        assert_eq!(vertices, vec!["a#1", "a#2", "b#1", "b#2"]);
        let mut arrows: Vec<(String, String, String)> = rep
            .arrows
            .iter()
            .map(|a| (a.id.clone(), a.source.clone(), a.target.clone()))
            .collect();
        arrows.sort();
        assert_eq!(
            arrows,
            vec![
                ("al#1".into(), "a#1".into(), "b#1".into()),
                ("al#2".into(), "a#2".into(), "b#2".into()),
                ("al*#1".into(), "b#1".into(), "a#2".into()),
                ("iota_a#1".into(), "a#1".into(), "a#2".into()),
                ("iota_b#1".into(), "b#1".into(), "b#2".into()),
            ] as Vec<(String, String, String)>
        );
        assert_eq!(
            rep.relations,
            vec![
                ("al#1".to_string(), "iota_b#1".to_string()),
                ("iota_a#1".to_string(), "al#2".to_string()),
            ]
        );
    }

    #[test]
    fn repeat_k1_is_the_base_up_to_decoration() {
        for bq in crate::fixtures::all() {
            let rep = repeat(&bq, 1, None).unwrap().result;
            assert!(iso(&rep, &bq).unwrap().is_some(), "{}", bq.name);
        }
    }

    #[test]
    fn repeat_counts_formula() {
        for bq in crate::fixtures::all() {
            for k in 1..=4 {
                let rep = repeat(&bq, k, None).unwrap().result;
                assert_eq!(rep.vertices.len(), k * bq.vertices.len());
                assert_eq!(
                    rep.arrows.len() as i64,
                    (k * bq.arrows.len()) as i64 + (k as i64 - 1) * bq.d_invariant()
                );
            }
        }
    }

    #[test]
    fn repeat_path_basis_scales_quadratically() {
        let base = path_basis(&ex1()).unwrap().len();
        for k in 1..=2 {
            let rep = repeat(&ex1(), k, None).unwrap().result;
            assert_eq!(path_basis(&rep).unwrap().len(), k * k * base);
        }
    }

    #[test]
    fn repeat_maximal_paths_have_the_two_shapes() {
        // Every maximal path of A^(k) is a full window chain of some maximal
        // path, or an iota chain of a trivial-thread vertex.
        for (bq, k) in [(ex1(), 3), (a2(), 4), (kronecker(), 2), (ex2(), 2)] {
            let rep = repeat(&bq, k, None).unwrap().result;
            let summary = threads(&bq).unwrap();
            let mut expected: BTreeSet<PathExpr> = BTreeSet::new();
            for (rho_index, rho) in summary.maximal_paths.iter().enumerate() {
                expected.insert(
                    realize_sheet_elem(
                        &bq,
                        &SheetElem::Window {
                            rho_index,
                            u: 0,
                            v: rho.len(),
                            from: 1,
                            to: k,
                        },
                    )
                    .unwrap(),
                );
            }
            for vertex in &summary.trivial_vertices {
                expected.insert(
                    realize_sheet_elem(
                        &bq,
                        &SheetElem::Iota {
                            vertex: vertex.clone(),
                            from: 1,
                            to: k,
                        },
                    )
                    .unwrap(),
                );
            }
            let got: BTreeSet<PathExpr> =
                threads(&rep).unwrap().maximal_paths.into_iter().collect();
            assert_eq!(got, expected, "{} k={k}", bq.name);
        }
    }

    #[test]
    fn weld_identity_of_equal_inputs_is_the_double_repetition() {
        for bq in crate::fixtures::all() {
            let d = blossom(&bq).unwrap().d();
            let mut welded = weld(&bq, &bq, &Permutation::identity(d)).unwrap();
            let rep = repeat(&bq, 2, None).unwrap().result;
            welded.name = rep.name.clone();
            assert_eq!(welded, rep, "{}", bq.name);
        }
    }

    #[test]
    fn weld_dimension_mismatch_is_an_error() {
        let err = weld(&a2(), &ex1(), &Permutation::identity(3)).unwrap_err();
        assert!(err.to_string().contains("d = 3 vs 5"));
    }

    #[test]
    fn weld_rejects_invalid_permutations() {
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        let d = blossom(&a2()).unwrap().d();
        let perm = Permutation::identity(d - 1);
        assert!(weld(&a2(), &a2(), &perm).is_err());
    }

    #[test]
    fn iterated_welding_reproduces_repeat() {
        for (bq, k_max) in [(ex1(), 3), (a2(), 4), (kronecker(), 3), (ex2(), 2)] {
            for k in 2..=k_max {
                let direct = repeat(&bq, k, None).unwrap().result;
                let welded = repeat_by_welding(&bq, k).unwrap();
                assert!(
                    iso(&direct, &welded).unwrap().is_some(),
                    "{} k={k}",
                    bq.name
                );
            }
        }
    }

    #[test]
    fn nontrivial_weld_permutation_changes_the_algebra() {
        // Transposing two thread labels of different content produces a
        // non-isomorphic welding with a different φ table.
        let id = Permutation::identity(5);
        let swap13 = Permutation::new(vec![3, 2, 1, 4, 5]).unwrap();
        let a = weld(&ex1(), &ex1(), &id).unwrap();
        let b = weld(&ex1(), &ex1(), &swap13).unwrap();
        assert_ne!(phi(&a).unwrap(), phi(&b).unwrap());
        assert!(iso(&a, &b).unwrap().is_none());

        // For the Kronecker quiver the swap is absorbed by relabeling the
        // parallel arrows of the second copy.
        let id = Permutation::identity(2);
        let swap = Permutation::new(vec![2, 1]).unwrap();
        let a = weld(&kronecker(), &kronecker(), &id).unwrap();
        let b = weld(&kronecker(), &kronecker(), &swap).unwrap();
        assert!(iso(&a, &b).unwrap().is_some());
    }

    #[test]
    fn apr_reflect_ex2_shape() {
        let reflected = apr_reflect(&ex2(), "x").unwrap();
        let mut arrows: Vec<(String, String, String)> = reflected
            .arrows
            .iter()
            .map(|a| (a.id.clone(), a.source.clone(), a.target.clone()))
            .collect();
        arrows.sort();
        assert_eq!(
            arrows,
            vec![
                ("b1x".into(), "x".into(), "b1".into()),
                ("b2x".into(), "x".into(), "b2".into()),
                ("g1".into(), "c1".into(), "x".into()),
                ("g2".into(), "c2".into(), "x".into()),
                ("xa1".into(), "b1".into(), "a1".into()),
                ("xa2".into(), "b2".into(), "a2".into()),
            ] as Vec<(String, String, String)>
        );
        assert_eq!(
            reflected.relations,
            vec![
                ("b1x".to_string(), "xa1".to_string()),
                ("b2x".to_string(), "xa2".to_string()),
                ("g1".to_string(), "b2x".to_string()),
                ("g2".to_string(), "b1x".to_string()),
            ]
        );
    }

    #[test]
    fn apr_reflect_preserves_phi_on_ex2() {
        let reflected = apr_reflect(&ex2(), "x").unwrap();
        assert_eq!(phi(&reflected).unwrap(), phi(&ex2()).unwrap());
    }

    #[test]
    fn apr_reflect_rejects_bad_vertices() {
        let err = apr_reflect(&ex1(), "d").unwrap_err();
        assert!(err.to_string().contains("(r2)"), "{err}");
        assert!(apr_reflect(&ex1(), "nope").is_err());
    }

    #[test]
    fn apr_reflect_preserves_phi_wherever_defined() {
        let mut reflectable = 0;
        for bq in crate::fixtures::all() {
            for v in &bq.vertices {
                let Ok(reflected) = apr_reflect(&bq, v) else {
                    continue;
                };
                reflectable += 1;
                assert_eq!(
                    phi(&reflected).unwrap(),
                    phi(&bq).unwrap(),
                    "{} reflected at {v}",
                    bq.name
                );
            }
        }
        assert!(reflectable > 0, "no (r1),(r2) vertex in the fixtures");
    }

    #[test]
    fn apr_reflect_preserves_degrees_at_strong_vertices() {
        // The in- and out-degrees of every vertex are untouched when the
        // reflection vertex satisfies the strengthened conditions.
        for bq in crate::fixtures::all() {
            for v in &bq.vertices {
                if !check_reflection_condition(&bq, v).unwrap() {
                    continue;
                }
                let reflected = apr_reflect(&bq, v).unwrap();
                for w in &bq.vertices {
                    assert_eq!(bq.din(w), reflected.din(w), "{} at {v}", bq.name);
                    assert_eq!(bq.dout(w), reflected.dout(w), "{} at {v}", bq.name);
                }
            }
        }
    }

    #[test]
    fn reflection_condition_values() {
        assert!(check_reflection_condition(&ex2(), "x").unwrap());
        assert!(!check_reflection_condition(&ex1(), "b").unwrap());
        assert!(!check_reflection_condition(&ex1(), "d").unwrap());
        assert!(!check_reflection_condition(&a2(), "a").unwrap());
    }

    #[test]
    fn apr_transport_matches_recomputed_threads() {
        let transport = apr_transport(&ex2(), "x").unwrap();
        assert_eq!(transport.transported.len() as i64, ex2().d_invariant());
        let expected: BTreeSet<PathExpr> = threads(&transport.reflected_blossomed)
            .unwrap()
            .maximal_paths
            .into_iter()
            .collect();
        let got: BTreeSet<PathExpr> = transport.transported.iter().cloned().collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn apr_transport_contracts_beta_alpha_pairs() {
        // Thread 1 of ex2 is b1x·xa1; its interior transports to the single
        // arrow xa1 because xa1 is not one of the γ's.
        let transport = apr_transport(&ex2(), "x").unwrap();
        let first = &transport.transported[0];
        assert_eq!(first.arrow_ids()[1..first.len() - 1], ["xa1".to_string()]);
    }

    #[test]
    fn apr_transport_interiors_are_the_reflected_threads() {
        let transport = apr_transport(&ex2(), "x").unwrap();
        let reflected = apr_reflect(&ex2(), "x").unwrap();
        let summary = threads(&reflected).unwrap();
        let mut interiors_nontrivial: BTreeSet<PathExpr> = BTreeSet::new();
        let mut interiors_trivial: BTreeSet<String> = BTreeSet::new();
        for path in &transport.transported {
            let ids = path.arrow_ids();
            if ids.len() == 2 {
                let sigma = transport.reflected_blossomed.arrow(&ids[0]).unwrap();
                interiors_trivial.insert(sigma.target.clone());
            } else {
                interiors_nontrivial.insert(PathExpr::Arrows(ids[1..ids.len() - 1].to_vec()));
            }
        }
        let expected_nontrivial: BTreeSet<PathExpr> = summary.maximal_paths.into_iter().collect();
        let expected_trivial: BTreeSet<String> = summary.trivial_vertices.into_iter().collect();
        assert_eq!(interiors_nontrivial, expected_nontrivial);
        assert_eq!(interiors_trivial, expected_trivial);
    }

    /// The reflected quiver's canonical thread labels, indexed by the base
    /// label whose transport they are.
    fn transport_label_map(bq: &BoundQuiver, x: &str) -> Vec<usize> {
        let transport = apr_transport(bq, x).unwrap();
        let reflected = apr_reflect(bq, x).unwrap();
        let reflected_blossoming = blossom(&reflected).unwrap();
        transport
            .transported
            .iter()
            .map(|path| {
                let ids = path.arrow_ids();
                let interior = if ids.len() == 2 {
                    let sigma = transport.reflected_blossomed.arrow(&ids[0]).unwrap();
                    PathExpr::Trivial(sigma.target.clone())
                } else {
                    PathExpr::Arrows(ids[1..ids.len() - 1].to_vec())
                };
                reflected_blossoming
                    .threads
                    .iter()
                    .find(|info| info.wp == interior)
                    .expect("transported interior is a thread")
                    .label
            })
            .collect()
    }

    #[test]
    fn welding_commutes_with_reflection() {
        // Reflect-then-weld equals weld-then-reflect at the embedded vertex,
        // with the welding permutation realigned through the transport map.
        let base = ex2();
        let reflected = apr_reflect(&base, "x").unwrap();
        let label_map = transport_label_map(&base, "x");
        let d = label_map.len();
        let mut images = vec![0usize; d];
        for (p, &q) in label_map.iter().enumerate() {
            images[q - 1] = p + 1;
        }
        let perm = Permutation::new(images).unwrap();
        let left = weld(&reflected, &base, &perm).unwrap();
        let right = {
            let welded = weld(&base, &base, &Permutation::identity(d)).unwrap();
            apr_reflect(&welded, "x#1").unwrap()
        };
        assert!(iso(&left, &right).unwrap().is_some());
    }

    #[test]
    fn iterated_reflection_matches_reflected_repetition() {
        // repeat(reflect(ex2)) is obtained from repeat(ex2) by reflecting at
        // the sheet copies of x, innermost sheet last.
        let reflected_rep = repeat(&apr_reflect(&ex2(), "x").unwrap(), 2, None)
            .unwrap()
            .result;
        let mut rep = repeat(&ex2(), 2, None).unwrap().result;
        rep = apr_reflect(&rep, "x#2").unwrap();
        rep = apr_reflect(&rep, "x#1").unwrap();
        assert!(iso(&reflected_rep, &rep).unwrap().is_some());
    }

    #[test]
    fn iso_basic_answers() {
        assert!(iso(&a2(), &kronecker()).unwrap().is_none());
        let mapping = iso(&ex1(), &ex1()).unwrap().unwrap();
        assert_eq!(mapping.vertex_map.len(), 6);
        assert_eq!(mapping.arrow_map.len(), 7);

        // Same shape, different relation sets: not isomorphic.
        let mut other = ex1();
        other.relations = vec![
            ("be".into(), "ga".into()),
            ("ga".into(), "la".into()),
            ("la".into(), "be".into()),
            ("th".into(), "ka".into()),
        ];
        other.relations.sort();
        assert!(iso(&ex1(), &other).unwrap().is_none());
    }

    #[test]
    fn iso_respects_relations_across_parallel_arrows() {
        // Two Kronecker-with-relation quivers that differ only in which
        // parallel arrow enters the relation are isomorphic by swapping.
        let a = BoundQuiver::build(
            "p1",
            vec!["a", "b", "c"],
            vec![("x", "a", "b"), ("y", "a", "b"), ("z", "b", "c")],
            vec![("x", "z")],
        );
        let b = BoundQuiver::build(
            "p2",
            vec!["a", "b", "c"],
            vec![("x", "a", "b"), ("y", "a", "b"), ("z", "b", "c")],
            vec![("y", "z")],
        );
        let mapping = iso(&a, &b).unwrap().unwrap();
        assert_eq!(mapping.arrow_map["x"], "y");
    }

    #[test]
    fn iso_budget_is_enforced() {
        match iso_with_budget(&ex1(), &ex1(), 2) {
            Err(Error::SearchBudget(2)) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn sheet_basis_counts() {
        assert_eq!(sheet_basis(&a2(), 2, 1, 2).unwrap().len(), 6);
        assert_eq!(sheet_basis(&a2(), 2, 2, 1).unwrap().len(), 0);
        let total: usize = (1..=2)
            .flat_map(|i| (1..=2).map(move |j| (i, j)))
            .map(|(i, j)| sheet_basis(&ex1(), 2, i, j).unwrap().len())
            .sum();
        assert_eq!(total, 76);
        assert!(sheet_basis(&ex1(), 2, 0, 1).is_err());
        assert!(sheet_basis(&ex1(), 2, 1, 3).is_err());
    }

    #[test]
    fn sheet_basis_realizes_to_paths() {
        let rep = repeat(&ex1(), 3, None).unwrap().result;
        for i in 1..=3 {
            for j in i..=3 {
                for elem in sheet_basis(&ex1(), 3, i, j).unwrap() {
                    let path = realize_sheet_elem(&ex1(), &elem).unwrap();
                    assert!(rep.is_path(&path), "{elem} -> {path}");
                }
            }
        }
    }

    #[test]
    fn random_gentle_is_seed_deterministic() {
        let a = random_gentle(6, 7, 42).unwrap();
        let b = random_gentle(6, 7, 42).unwrap();
        assert_eq!(a, b);
        let c = random_gentle(6, 7, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn random_gentle_always_validates() {
        for seed in 0..40 {
            let n = 3 + (seed as usize % 9);
            let m = (n - 1) + (seed as usize % (n + 2)).min(2 * n - (n - 1));
            let bq = random_gentle(n, m.min(2 * n), seed).unwrap();
            let report = quiver::validate(&bq, Mode::Gentle).unwrap();
            assert!(report.pass, "seed {seed}: {:?}", report.violations);
        }
    }

    #[test]
    fn random_gentle_rejects_infeasible_requests() {
        assert!(random_gentle(1, 1, 0).is_err());
        assert!(random_gentle(4, 0, 0).is_err());
        assert!(random_gentle(4, 9, 0).is_err());
        assert!(random_gentle(9, 4, 0).is_err());
    }
}
