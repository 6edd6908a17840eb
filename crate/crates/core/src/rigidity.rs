//! Certificate-producing 2-rigidity decisions.
//!
//! A graph algebra is classified by a fixed ladder of criteria, each of
//! which attaches a machine-checkable certificate to its verdict:
//!
//! 1. edgeless graphs are a closed form: rigid for at most two vertices,
//!    non-rigid from three on;
//! 2. a graph with isolated vertices splits off an abelian summand and is
//!    rigid exactly when it is a single edge plus a single isolated vertex;
//! 3. a complete graph gives the free 2-step algebra on its vertices,
//!    which is rigid;
//! 4. a non-adjacent pair of non-isolated vertices whose incident edges
//!    miss part of the center yields an explicit cocycle that is not a
//!    coboundary, so the algebra is not rigid;
//! 5. otherwise, if permitted, vanishing of the restricted second
//!    cohomology certifies rigidity.
//!
//! Absence of a certificate is never converted into a verdict: the ladder
//! returns `Undecided` when no criterion applies.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::cohomology::{
    cocycle_not_coboundary, cohomology_report, CochainBasis, CohomologyError, CohomologyReport,
    DEFAULT_COHOMOLOGY_CAP,
};
use crate::graph::{serialize_graph6, Graph};
use crate::liealg::{graph_algebra, BasisLabel, StructureConstants};
use crate::matrix::{rat, Rat};
use num::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RigidityStatus {
    Rigid,
    NonRigid,
    Undecided,
}

impl std::fmt::Display for RigidityStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RigidityStatus::Rigid => "rigid",
            RigidityStatus::NonRigid => "non_rigid",
            RigidityStatus::Undecided => "undecided",
        })
    }
}

/// How far the classifier may go.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Combinatorial ladder, cohomology fallback when the dimension allows.
    Auto,
    /// Steps 1 to 4 only; never assembles the complex.
    CombinatorialOnly,
    /// Like `Auto`, and additionally computes the full dimension report for
    /// every algebra under the cap.
    WithCohomology,
}

/// Machine-checkable evidence for a verdict.  Every variant can be
/// re-validated from the graph alone via [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// The graph is complete on `m` vertices; its algebra is the free
    /// 2-step algebra on `m` generators.
    FreeComplete { m: u32 },
    /// The restricted second cohomology vanishes.
    CohomologyVanishes {
        #[serde(flatten)]
        report: CohomologyReport,
    },
    /// Isolated vertices split off an `l`-dimensional abelian summand; the
    /// algebra is rigid exactly when the remainder is a single edge and
    /// `l` is 1 (`is_h1_a1`).
    AbelianFactor {
        nilpotent_part: Graph,
        l: u32,
        is_h1_a1: bool,
    },
    /// Non-adjacent non-isolated vertices `i < j` whose incident edges do
    /// not span the center; `z_label` names a central basis vector outside
    /// that span, and the cochain `v_i* ^ v_j* tensor z` is a cocycle that
    /// is not a coboundary.
    TheoremDWitness { i: u32, j: u32, z_label: BasisLabel },
    /// Closed form for edgeless graphs: rigid iff `m <= 2`.
    AbelianSpecialCase { m: u32 },
}

impl Certificate {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Certificate::FreeComplete { .. } => "free_complete",
            Certificate::CohomologyVanishes { .. } => "cohomology_vanishes",
            Certificate::AbelianFactor { .. } => "abelian_factor",
            Certificate::TheoremDWitness { .. } => "theorem_d_witness",
            Certificate::AbelianSpecialCase { .. } => "abelian_special_case",
        }
    }

    /// Short human-readable witness data for table output.
    pub fn witness_summary(&self) -> String {
        match self {
            Certificate::FreeComplete { m } => format!("K{m}"),
            Certificate::CohomologyVanishes { report } => {
                format!("h2_nil_dim={}", report.h2_nil_dim)
            }
            Certificate::AbelianFactor { l, is_h1_a1, .. } => {
                format!("l={l} h1_a1={is_h1_a1}")
            }
            Certificate::TheoremDWitness { i, j, z_label } => {
                format!("i={i} j={j} z={z_label}")
            }
            Certificate::AbelianSpecialCase { m } => format!("m={m}"),
        }
    }
}

/// A status plus its certificate; the certificate is absent exactly when
/// the status is `Undecided`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RigidityVerdict {
    pub status: RigidityStatus,
    pub certificate: Option<Certificate>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("certificate presence does not match status: {0}")]
    Shape(String),
    #[error("certificate does not fit the graph: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

/// The graph induced on the non-isolated vertices, relabeled to
/// `1..=p` preserving vertex order.
fn non_isolated_induced(g: &Graph) -> Graph {
    let isolated = g.isolated_vertices();
    let kept: Vec<u32> = (1..=g.num_vertices())
        .filter(|v| !isolated.contains(v))
        .collect();
    let rank = |v: u32| kept.iter().position(|&k| k == v).unwrap() as u32 + 1;
    Graph::new(
        kept.len() as u32,
        g.edges().map(|(i, j)| (rank(i), rank(j))),
    )
    .expect("induced graph of a nonempty edge set is valid")
}

/// Search for the lexicographically smallest non-adjacent pair of
/// non-isolated vertices `i < j` whose incident edge sets miss part of the
/// center: either some edge lies outside `A_i` and `A_j`, or those edges
/// cover everything but an isolated vertex enlarges the center.  `z_label`
/// is the smallest missed edge, else the smallest isolated vertex.
pub fn theorem_d_witness(g: &Graph) -> Option<Certificate> {
    let m = g.num_vertices();
    let isolated = g.isolated_vertices();
    let all: BTreeSet<(u32, u32)> = g.edges().collect();
    for i in 1..=m {
        if isolated.contains(&i) {
            continue;
        }
        for j in (i + 1)..=m {
            if isolated.contains(&j) || g.has_edge(i, j) {
                continue;
            }
            let mut union = g.incident_edges(i).expect("vertex in range");
            union.extend(g.incident_edges(j).expect("vertex in range"));
            if union.len() < all.len() {
                let &(a, b) = all.difference(&union).next().expect("proper subset");
                return Some(Certificate::TheoremDWitness {
                    i,
                    j,
                    z_label: BasisLabel::Edge { i: a, j: b },
                });
            }
            if let Some(&v) = isolated.iter().next() {
                return Some(Certificate::TheoremDWitness {
                    i,
                    j,
                    z_label: BasisLabel::Vertex { index: v },
                });
            }
        }
    }
    None
}

fn decided(status: RigidityStatus, certificate: Certificate) -> RigidityVerdict {
    RigidityVerdict {
        status,
        certificate: Some(certificate),
    }
}

const UNDECIDED: RigidityVerdict = RigidityVerdict {
    status: RigidityStatus::Undecided,
    certificate: None,
};

/// Steps 1 to 4 of the ladder; `None` when none of them applies.
fn combinatorial_ladder(g: &Graph) -> Option<RigidityVerdict> {
    let m = g.num_vertices();
    if g.edge_count() == 0 {
        let status = if m <= 2 {
            RigidityStatus::Rigid
        } else {
            RigidityStatus::NonRigid
        };
        return Some(decided(status, Certificate::AbelianSpecialCase { m }));
    }
    let isolated = g.isolated_vertices();
    if !isolated.is_empty() {
        let l = isolated.len() as u32;
        let nilpotent_part = non_isolated_induced(g);
        let is_h1_a1 = l == 1 && nilpotent_part.num_vertices() == 2;
        let status = if is_h1_a1 {
            RigidityStatus::Rigid
        } else {
            RigidityStatus::NonRigid
        };
        return Some(decided(
            status,
            Certificate::AbelianFactor {
                nilpotent_part,
                l,
                is_h1_a1,
            },
        ));
    }
    if g.is_complete() {
        return Some(decided(RigidityStatus::Rigid, Certificate::FreeComplete { m }));
    }
    theorem_d_witness(g).map(|cert| decided(RigidityStatus::NonRigid, cert))
}

/// Run the ladder; when cohomology is computed its full report is returned
/// alongside the verdict so callers can surface the dimensions.
pub fn classify_with_report(
    g: &Graph,
    method: Method,
    cap: u32,
) -> (RigidityVerdict, Option<CohomologyReport>) {
    let n = g.num_vertices() as usize + g.edge_count();
    let under_cap = n <= cap as usize;
    let full_report = |why: &str| -> CohomologyReport {
        cohomology_report(&graph_algebra(g), cap)
            .unwrap_or_else(|e| panic!("cohomology failed on a graph algebra under the cap ({why}): {e}"))
    };
    if let Some(verdict) = combinatorial_ladder(g) {
        let report = match method {
            Method::WithCohomology if under_cap => Some(full_report("report population")),
            _ => None,
        };
        return (verdict, report);
    }
    match method {
        Method::CombinatorialOnly => (UNDECIDED, None),
        Method::Auto | Method::WithCohomology => {
            if !under_cap {
                return (UNDECIDED, None);
            }
            let report = full_report("rigidity decision");
            let verdict = if report.h2_nil_dim == 0 {
                decided(
                    RigidityStatus::Rigid,
                    Certificate::CohomologyVanishes { report },
                )
            } else {
                UNDECIDED
            };
            (verdict, Some(report))
        }
    }
}

/// Classify with the default cohomology cap.
pub fn classify_graph(g: &Graph, method: Method) -> RigidityVerdict {
    classify_graph_with_cap(g, method, DEFAULT_COHOMOLOGY_CAP)
}

pub fn classify_graph_with_cap(g: &Graph, method: Method, cap: u32) -> RigidityVerdict {
    classify_with_report(g, method, cap).0
}

/// The classification theorem as a lookup: rigid iff complete, or
/// isomorphic to one of the five exceptional graphs (two isolated
/// vertices; an edge plus an isolated vertex; the path on three vertices;
/// two disjoint edges; the 4-cycle).  Never undecided.
pub fn expected_verdict(g: &Graph) -> RigidityStatus {
    if g.is_complete() {
        return RigidityStatus::Rigid;
    }
    let m = g.num_vertices();
    if m > 4 {
        return RigidityStatus::NonRigid;
    }
    let exceptional: Vec<Graph> = match m {
        2 => vec![Graph::empty(2).unwrap()],
        3 => vec![
            Graph::new(3, vec![(1, 2)]).unwrap(),
            Graph::new(3, vec![(1, 2), (1, 3)]).unwrap(),
        ],
        4 => vec![
            Graph::new(4, vec![(1, 2), (3, 4)]).unwrap(),
            Graph::new(4, vec![(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap(),
        ],
        _ => Vec::new(),
    };
    let key = g.canonical_key().expect("at most 4 vertices");
    if exceptional
        .iter()
        .any(|e| e.canonical_key().expect("at most 4 vertices") == key)
    {
        RigidityStatus::Rigid
    } else {
        RigidityStatus::NonRigid
    }
}

/// Static lookup for the stronger 3-rigidity property: true for exactly
/// the single vertex, the single edge, and the two-point edgeless graph.
pub fn three_rigid_flag(g: &Graph) -> bool {
    let single_vertex = g.num_vertices() == 1;
    let single_edge = g.num_vertices() == 2 && g.edge_count() == 1;
    let two_points = g.num_vertices() == 2 && g.edge_count() == 0;
    single_vertex || single_edge || two_points
}

/// The cochain `v_i* ^ v_j* tensor z` named by a witness, as coordinates.
pub fn witness_cochain(
    sc: &StructureConstants,
    i: u32,
    j: u32,
    z_label: &BasisLabel,
) -> Result<Vec<Rat>, VerifyError> {
    let z = sc.label_position(z_label).ok_or_else(|| {
        VerifyError::Mismatch(format!("label {z_label} is not a basis vector"))
    })?;
    let cb = CochainBasis::new(sc.dim());
    let mut phi = vec![Rat::zero(); cb.c2_dim()];
    phi[cb.c2_position(i as usize, j as usize, z)] = rat(1);
    Ok(phi)
}

/// Re-check a verdict against its graph, independently of the classifier.
pub fn verify_certificate(g: &Graph, verdict: &RigidityVerdict) -> Result<(), VerifyError> {
    use RigidityStatus::*;
    let cert = match (&verdict.status, &verdict.certificate) {
        (Undecided, None) => return Ok(()),
        (Undecided, Some(_)) => {
            return Err(VerifyError::Shape("undecided verdict carries a certificate".into()))
        }
        (_, None) => {
            return Err(VerifyError::Shape("decided verdict without a certificate".into()))
        }
        (_, Some(cert)) => cert,
    };
    let fail = |msg: String| Err(VerifyError::Mismatch(msg));
    match cert {
        Certificate::FreeComplete { m } => {
            if verdict.status != Rigid {
                return fail("complete graphs certify rigidity".into());
            }
            if *m != g.num_vertices() || !g.is_complete() {
                return fail(format!("graph is not the complete graph on {m} vertices"));
            }
        }
        Certificate::CohomologyVanishes { report } => {
            if verdict.status != Rigid {
                return fail("vanishing cohomology certifies rigidity".into());
            }
            let n = g.num_vertices() as usize + g.edge_count();
            let recomputed = cohomology_report(&graph_algebra(g), n as u32)?;
            if &recomputed != report {
                return fail("stored dimension report does not match a recomputation".into());
            }
            if report.h2_nil_dim != 0 {
                return fail("certificate requires h2_nil_dim = 0".into());
            }
        }
        Certificate::AbelianFactor {
            nilpotent_part,
            l,
            is_h1_a1,
        } => {
            let isolated = g.isolated_vertices();
            if isolated.is_empty() || g.edge_count() == 0 {
                return fail("abelian factor requires isolated vertices and at least one edge".into());
            }
            if *l != isolated.len() as u32 {
                return fail(format!("l = {l} but the graph has {} isolated vertices", isolated.len()));
            }
            if nilpotent_part != &non_isolated_induced(g) {
                return fail("stored nilpotent part is not the induced non-isolated subgraph".into());
            }
            let h1_a1 = *l == 1 && nilpotent_part.num_vertices() == 2;
            if *is_h1_a1 != h1_a1 {
                return fail("is_h1_a1 flag is wrong for this graph".into());
            }
            let want = if h1_a1 { Rigid } else { NonRigid };
            if verdict.status != want {
                return fail("status contradicts the abelian factor criterion".into());
            }
        }
        Certificate::TheoremDWitness { i, j, z_label } => {
            if verdict.status != NonRigid {
                return fail("a witness certifies non-rigidity".into());
            }
            let m = g.num_vertices();
            if !(1..=m).contains(i) || !(1..=m).contains(j) || i >= j {
                return fail(format!("witness pair ({i}, {j}) is not an ordered vertex pair"));
            }
            if g.has_edge(*i, *j) {
                return fail(format!("witness vertices {i} and {j} are adjacent"));
            }
            let isolated = g.isolated_vertices();
            if isolated.contains(i) || isolated.contains(j) {
                return fail("witness vertices must not be isolated".into());
            }
            let mut union = g.incident_edges(*i).expect("in range");
            union.extend(g.incident_edges(*j).expect("in range"));
            match z_label {
                BasisLabel::Edge { i: a, j: b } => {
                    if !g.has_edge(*a, *b) {
                        return fail(format!("witness edge ({a}, {b}) is not in the graph"));
                    }
                    if union.contains(&(*a, *b)) {
                        return fail(format!("witness edge ({a}, {b}) touches vertex {i} or {j}"));
                    }
                }
                BasisLabel::Vertex { index } => {
                    if !isolated.contains(index) {
                        return fail(format!("witness vertex v{index} is not isolated"));
                    }
                }
            }
            let sc = graph_algebra(g);
            let phi = witness_cochain(&sc, *i, *j, z_label)?;
            if !cocycle_not_coboundary(&sc, &phi)? {
                return fail("witness cochain is a coboundary".into());
            }
        }
        Certificate::AbelianSpecialCase { m } => {
            if *m != g.num_vertices() || g.edge_count() != 0 {
                return fail(format!("graph is not the edgeless graph on {m} vertices"));
            }
            let want = if *m <= 2 { Rigid } else { NonRigid };
            if verdict.status != want {
                return fail("status contradicts the edgeless closed form".into());
            }
        }
    }
    Ok(())
}

/// JSON form of a verdict: graph6 (null above the graph6 size limit),
/// status, certificate, and the 3-rigidity flag.
pub fn verdict_json(g: &Graph, verdict: &RigidityVerdict) -> serde_json::Value {
    let graph6 = serialize_graph6(g)
        .map(serde_json::Value::String)
        .unwrap_or(serde_json::Value::Null);
    json!({
        "graph6": graph6,
        "status": verdict.status,
        "certificate": verdict.certificate,
        "three_rigid": three_rigid_flag(g),
    })
}
