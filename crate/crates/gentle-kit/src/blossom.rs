//! Blossoming: complete a locally gentle quiver so every original vertex has
//! in- and out-degree 2, then read off the thread permutation Φ and the
//! antipath segments δ_p that drive the AG invariants.
//!
//! Thread labels `p = 1..d` are assigned canonically: maximal paths first,
//! ordered lexicographically by arrow-id sequence, then trivial-thread
//! vertices by id. Blossom vertices and arrows are named `s#p`, `t#p`,
//! `sigma#p`, `tau#p`, stable across runs.

use std::collections::BTreeSet;

use crate::construct::Permutation;
use crate::quiver::{
    self, degree, threads, Arrow, BoundQuiver, DegreeKind, Mode, PathExpr, ThreadSummary,
};
use crate::{Error, Result};

/// One permitted thread with its blossom decorations: the maximal path in the
/// blossoming is `sigma#p · ℘_p · tau#p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreadInfo {
    /// 1-based canonical label.
    pub label: usize,
    /// `℘_p`: a maximal path of `A`, or the trivial path at a thread vertex.
    pub wp: PathExpr,
    pub source_vertex: String,
    pub sink_vertex: String,
    pub sigma: String,
    pub tau: String,
}

/// The blossomed bound quiver together with the pairing data: threads,
/// permutation Φ, and the maximal antipaths `Δ_p = sigma#Φ(p) · δ_p · tau#p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blossoming {
    pub original: BoundQuiver,
    pub blossomed: BoundQuiver,
    pub threads: Vec<ThreadInfo>,
    /// Φ as a permutation of `{1..d}`: the maximal antipath ending at `t_p`
    /// starts at `s_{Φ(p)}`.
    pub phi: Permutation,
    /// `δ_p`: antipath in `A` (or trivial path) obtained from `Δ_p` by
    /// stripping its blossom arrows; indexed by `p − 1`.
    pub delta: Vec<PathExpr>,
}

impl Blossoming {
    pub fn d(&self) -> usize {
        self.threads.len()
    }
}

/// An orbit of Φ acting on the δ segments.
///
/// `indices` lists the orbit in cyclic order `p, Φ(p), Φ²(p), …` starting at
/// the smallest member; `deltas` are the matching δ segments. The ungraded
/// type is `(q, l) = (|orbit|, Σ length δ)`; the graded type replaces `l` by
/// `Σ (deg ℘_p + degbar δ_p)` over the orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub indices: Vec<usize>,
    pub deltas: Vec<PathExpr>,
    pub type_ungraded: (usize, i64),
    pub type_graded: (usize, i64),
}

/// Compute the blossoming of a connected locally gentle quiver.
pub fn blossom(bq: &BoundQuiver) -> Result<Blossoming> {
    quiver::require(bq, Mode::LocallyGentle)?;
    let summary = threads(bq)?;
    let thread_infos = label_threads(&summary);
    let blossomed = complete(bq, &thread_infos)?;

    // Walk each maximal antipath backwards from tau#p to its sigma#Φ(p).
    let d = thread_infos.len();
    let mut phi_images = vec![0usize; d];
    let mut delta = Vec::with_capacity(d);
    for info in &thread_infos {
        let mut interior: Vec<String> = Vec::new();
        let mut cur = info.tau.clone();
        let start_label = loop {
            match quiver::forbidden_predecessor(&blossomed, &cur) {
                Some(prev) => {
                    if let Some(q) = sigma_label(&thread_infos, &prev.id) {
                        break q;
                    }
                    interior.push(prev.id.clone());
                    cur = prev.id.clone();
                }
                None => {
                    return Err(Error::Precondition(format!(
                        "antipath through {} does not reach a blossom source",
                        info.tau
                    )))
                }
            }
        };
        interior.reverse();
        phi_images[info.label - 1] = start_label;
        delta.push(if interior.is_empty() {
            PathExpr::Trivial(blossomed.arrow(&info.tau).unwrap().source.clone())
        } else {
            PathExpr::Arrows(interior)
        });
    }

    let phi = Permutation::new(phi_images)?;
    Ok(Blossoming {
        original: bq.clone(),
        blossomed,
        threads: thread_infos,
        phi,
        delta,
    })
}

fn sigma_label(threads: &[ThreadInfo], arrow_id: &str) -> Option<usize> {
    threads
        .iter()
        .find(|t| t.sigma == arrow_id)
        .map(|t| t.label)
}

fn label_threads(summary: &ThreadSummary) -> Vec<ThreadInfo> {
    let mut infos = Vec::new();
    let nontrivial = summary.maximal_paths.iter().cloned();
    let trivial = summary
        .trivial_vertices
        .iter()
        .map(|v| PathExpr::Trivial(v.clone()));
    for (idx, wp) in nontrivial.chain(trivial).enumerate() {
        let p = idx + 1;
        infos.push(ThreadInfo {
            label: p,
            source_vertex: format!("s#{p}"),
            sink_vertex: format!("t#{p}"),
            sigma: format!("sigma#{p}"),
            tau: format!("tau#{p}"),
            wp,
        });
    }
    infos
}

/// Add the blossom vertices/arrows and complete the relations so the result
/// is again locally gentle. The permitted pairs at each original vertex are
/// forced by the thread structure; every other composable pair at the vertex
/// goes into the ideal.
fn complete(bq: &BoundQuiver, threads: &[ThreadInfo]) -> Result<BoundQuiver> {
    let mut result = bq.clone();
    result.name = format!("{}_blossom", bq.name);
    let taken: BTreeSet<&String> = bq
        .vertices
        .iter()
        .chain(bq.arrows.iter().map(|a| &a.id))
        .collect();
    for info in threads {
        for id in [
            &info.source_vertex,
            &info.sink_vertex,
            &info.sigma,
            &info.tau,
        ] {
            if taken.contains(id) {
                return Err(Error::Precondition(format!(
                    "blossom id '{id}' collides with an existing id in '{}'",
                    bq.name
                )));
            }
        }
        result.vertices.push(info.source_vertex.clone());
        result.vertices.push(info.sink_vertex.clone());
        result.arrows.push(Arrow::new(
            info.sigma.clone(),
            info.source_vertex.clone(),
            bq.path_source(&info.wp),
        ));
        result.arrows.push(Arrow::new(
            info.tau.clone(),
            bq.path_target(&info.wp),
            info.sink_vertex.clone(),
        ));
    }

    // Permitted pairs forced by the threads: sigma#p continues into ℘_p (or
    // straight into tau#p), the last arrow of ℘_p continues into tau#p, and
    // original permitted successions persist.
    let mut permitted: BTreeSet<(String, String)> = BTreeSet::new();
    for a in &bq.arrows {
        if let Some(b) = quiver::permitted_successor(bq, &a.id) {
            permitted.insert((a.id.clone(), b.id.clone()));
        }
    }
    for info in threads {
        match &info.wp {
            PathExpr::Trivial(_) => {
                permitted.insert((info.sigma.clone(), info.tau.clone()));
            }
            PathExpr::Arrows(seq) => {
                permitted.insert((info.sigma.clone(), seq[0].clone()));
                permitted.insert((seq.last().unwrap().clone(), info.tau.clone()));
            }
        }
    }

    for v in &bq.vertices {
        let ins = result.incoming(v);
        let outs = result.outgoing(v);
        if ins.len() != 2 || outs.len() != 2 {
            return Err(Error::Precondition(format!(
                "blossoming left vertex '{v}' with degrees ({}, {})",
                ins.len(),
                outs.len()
            )));
        }
        let mut new_relations = Vec::new();
        for i in &ins {
            let row: Vec<_> = outs
                .iter()
                .filter(|o| permitted.contains(&(i.id.clone(), o.id.clone())))
                .collect();
            if row.len() != 1 {
                return Err(Error::Precondition(format!(
                    "vertex '{v}': arrow '{}' has {} permitted continuations",
                    i.id,
                    row.len()
                )));
            }
            for o in &outs {
                if !permitted.contains(&(i.id.clone(), o.id.clone())) {
                    new_relations.push((i.id.clone(), o.id.clone()));
                }
            }
        }
        result.relations.extend(new_relations);
    }
    result.relations.sort();
    result.relations.dedup();

    quiver::require(&result, Mode::LocallyGentle)?;
    Ok(result)
}

/// Orbits of Φ acting on the δ segments, in canonical order (each orbit
/// starts at its smallest label; orbits sorted by that label).
pub fn ag_structure(bq: &BoundQuiver) -> Result<Vec<Orbit>> {
    let blossoming = blossom(bq)?;
    Ok(orbits(bq, &blossoming))
}

/// Decompose Φ into orbits and attach both type computations.
pub fn orbits(bq: &BoundQuiver, blossoming: &Blossoming) -> Vec<Orbit> {
    let d = blossoming.d();
    let mut seen = vec![false; d + 1];
    let mut out = Vec::new();
    for start in 1..=d {
        if seen[start] {
            continue;
        }
        let mut indices = Vec::new();
        let mut p = start;
        loop {
            seen[p] = true;
            indices.push(p);
            p = blossoming.phi.image(p);
            if p == start {
                break;
            }
        }
        let deltas: Vec<PathExpr> = indices
            .iter()
            .map(|&p| blossoming.delta[p - 1].clone())
            .collect();
        let q = indices.len();
        let l: i64 = deltas.iter().map(|d| d.len() as i64).sum();
        let graded_l: i64 = indices
            .iter()
            .map(|&p| {
                let wp = &blossoming.threads[p - 1].wp;
                let dp = &blossoming.delta[p - 1];
                degree(bq, wp, DegreeKind::Deg).expect("℘_p is a path")
                    + degree(bq, dp, DegreeKind::DegBar).expect("δ_p is an antipath")
            })
            .sum();
        out.push(Orbit {
            indices,
            deltas,
            type_ungraded: (q, l),
            type_graded: (q, graded_l),
        });
    }
    out
}
