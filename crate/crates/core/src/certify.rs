//! Certificate data model and the independent verifier.
//!
//! A certificate binds to a labeled graph by a canonical edge-list hash and
//! claims either a proper coloring within an evaluated bound, or a
//! forbidden-subgraph witness. The verifier re-derives every claim from
//! scratch — edge scans, an independent clique-number computation, bound
//! re-evaluation, witness re-checks, and a re-scan of every anticompleteness
//! the trace used to share palettes. It deliberately calls none of the
//! decomposition or coloring code.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::colorer::BoundFunction;
use crate::detect::{verify_broom, verify_ktt, BicliqueWitness, BroomWitness};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

pub const CERT_VERSION: u32 = 1;

/// Canonical hash of a labeled graph: sha256 over "n m" and the ascending
/// edge list.
pub fn graph_hash(g: &Graph) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("{} {}\n", g.n(), g.m()).as_bytes());
    for (u, v) in g.edges() {
        hasher.update(format!("{u} {v}\n").as_bytes());
    }
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Colored,
    NotInClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    Broom(BroomWitness),
    Biclique(BicliqueWitness),
}

/// One palette-sharing claim: the two vertex sets were given overlapping
/// colors because they are anticomplete. The verifier re-scans every claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharedClaim {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub why: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionSizes {
    pub a: usize,
    pub b: usize,
    pub z: usize,
    pub w0: usize,
    pub w_rest: usize,
    pub far: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaletteEntry {
    pub region: String,
    pub colors: usize,
}

/// One node of the decomposition trace, in root-graph vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceNode {
    pub rule: String,
    pub scope: Vec<usize>,
    pub omega: usize,
    pub colors_used: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_singles: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_last: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regions: Option<RegionSizes>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub palettes: Vec<PaletteEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub shared: Vec<SharedClaim>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub advisories: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<TraceNode>,
}

impl TraceNode {
    pub fn leaf(rule: &str, scope: Vec<usize>, omega: usize, colors_used: usize) -> Self {
        TraceNode {
            rule: rule.to_string(),
            scope,
            omega,
            colors_used,
            q_singles: None,
            q_last: None,
            regions: None,
            palettes: Vec::new(),
            shared: Vec::new(),
            advisories: Vec::new(),
            children: Vec::new(),
        }
    }
}

/// The full certificate: verdict, coloring or witness, evaluated bound, and
/// the decomposition trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifiedResult {
    pub version: u32,
    pub graph_hash: String,
    pub t: usize,
    pub mode: String,
    pub verdict: Verdict,
    pub omega: usize,
    pub bound: u64,
    pub colors: Option<Vec<u32>>,
    pub witness: Option<Witness>,
    pub trace: Option<TraceNode>,
}

impl CertifiedResult {
    pub fn colors_used(&self) -> usize {
        match &self.colors {
            Some(colors) => {
                let mut c = colors.clone();
                c.sort_unstable();
                c.dedup();
                c.len()
            }
            None => 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<CertifiedResult> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })
    }
}

/// What one failed verification check looked like.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckFailure {
    VersionUnsupported { version: u32 },
    MonochromaticEdge { u: usize, v: usize },
    ColorsMissing,
    ColorsLengthMismatch { expected: usize, got: usize },
    OmegaMismatch { claimed: usize, recomputed: usize },
    BoundMismatch { claimed: u64, recomputed: u64 },
    BoundExceeded { used: usize, bound: u64 },
    WitnessMissing,
    WitnessInvalid { detail: String },
    SharingViolation { u: usize, v: usize, why: String },
    TraceInvalid { detail: String },
}

impl std::fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CheckFailure::VersionUnsupported { version } => {
                write!(f, "unsupported certificate version {version}")
            }
            CheckFailure::MonochromaticEdge { u, v } => {
                write!(f, "edge {u}-{v} is monochromatic")
            }
            CheckFailure::ColorsMissing => write!(f, "colored verdict without a coloring"),
            CheckFailure::ColorsLengthMismatch { expected, got } => {
                write!(f, "coloring covers {got} vertices, graph has {expected}")
            }
            CheckFailure::OmegaMismatch { claimed, recomputed } => {
                write!(f, "claimed omega {claimed}, recomputed {recomputed}")
            }
            CheckFailure::BoundMismatch { claimed, recomputed } => {
                write!(f, "claimed bound {claimed}, re-evaluated {recomputed}")
            }
            CheckFailure::BoundExceeded { used, bound } => {
                write!(f, "{used} colors used, bound is {bound}")
            }
            CheckFailure::WitnessMissing => write!(f, "not-in-class verdict without witness"),
            CheckFailure::WitnessInvalid { detail } => write!(f, "witness invalid: {detail}"),
            CheckFailure::SharingViolation { u, v, why } => {
                write!(f, "shared-palette claim ({why}) broken by edge {u}-{v}")
            }
            CheckFailure::TraceInvalid { detail } => write!(f, "trace invalid: {detail}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub accepted: bool,
    pub failures: Vec<CheckFailure>,
    pub checks_run: usize,
}

/// Re-check every claim in a certificate against the graph. The only error
/// is a graph/certificate mismatch (wrong hash); everything else lands in
/// the report as a check failure.
pub fn verify(g: &Graph, cert: &CertifiedResult) -> Result<VerificationReport> {
    if cert.graph_hash != graph_hash(g) {
        return Err(Error::Input(
            "certificate was issued for a different graph (hash mismatch)".into(),
        ));
    }
    let mut failures = Vec::new();
    let mut checks = 1usize;

    if cert.version != CERT_VERSION {
        failures.push(CheckFailure::VersionUnsupported { version: cert.version });
    }
    checks += 1;

    let (omega, _) = crate::oracle::clique_number(g);
    if omega != cert.omega {
        failures.push(CheckFailure::OmegaMismatch { claimed: cert.omega, recomputed: omega });
    }
    checks += 1;

    let recomputed_bound = match cert.mode.as_str() {
        "chair" => Some(BoundFunction::chair().evaluate(omega)),
        "general" => Some(BoundFunction::general(cert.t).evaluate(omega)),
        "ktt" => Some(BoundFunction::ktt(cert.t).evaluate(omega)),
        "exact" => Some(omega as u64),
        _ => None,
    };
    match recomputed_bound {
        Some(b) => {
            if b != cert.bound {
                failures.push(CheckFailure::BoundMismatch { claimed: cert.bound, recomputed: b });
            }
        }
        None => failures
            .push(CheckFailure::TraceInvalid { detail: format!("unknown mode {:?}", cert.mode) }),
    }
    checks += 1;

    match cert.verdict {
        Verdict::Colored => {
            match &cert.colors {
                None => failures.push(CheckFailure::ColorsMissing),
                Some(colors) => {
                    if colors.len() != g.n() {
                        failures.push(CheckFailure::ColorsLengthMismatch {
                            expected: g.n(),
                            got: colors.len(),
                        });
                    } else {
                        for (u, v) in g.edges() {
                            if colors[u] == colors[v] {
                                failures.push(CheckFailure::MonochromaticEdge { u, v });
                                break;
                            }
                        }
                        let used = cert.colors_used();
                        if used as u64 > cert.bound {
                            failures.push(CheckFailure::BoundExceeded { used, bound: cert.bound });
                        }
                    }
                }
            }
            checks += 3;
            if let Some(trace) = &cert.trace {
                checks += verify_trace(g, trace, &mut failures);
            }
        }
        Verdict::NotInClass => {
            match &cert.witness {
                None => failures.push(CheckFailure::WitnessMissing),
                Some(Witness::Broom(w)) => {
                    if w.t() != cert.t {
                        failures.push(CheckFailure::WitnessInvalid {
                            detail: format!("broom has {} leaves, expected {}", w.t(), cert.t),
                        });
                    } else if !verify_broom(g, w) {
                        failures.push(CheckFailure::WitnessInvalid {
                            detail: "broom adjacency checks failed".into(),
                        });
                    }
                }
                Some(Witness::Biclique(w)) => {
                    if w.t() != cert.t {
                        failures.push(CheckFailure::WitnessInvalid {
                            detail: format!(
                                "biclique sides have {} vertices, expected {}",
                                w.t(),
                                cert.t
                            ),
                        });
                    } else if !verify_ktt(g, w) {
                        failures.push(CheckFailure::WitnessInvalid {
                            detail: "biclique adjacency checks failed".into(),
                        });
                    }
                }
            }
            checks += 1;
        }
    }

    Ok(VerificationReport { accepted: failures.is_empty(), failures, checks_run: checks })
}

/// Walk the trace and re-scan every palette-sharing claim by adjacency.
fn verify_trace(g: &Graph, node: &TraceNode, failures: &mut Vec<CheckFailure>) -> usize {
    let mut checks = 0;
    if node.scope.iter().any(|&v| v >= g.n()) {
        failures.push(CheckFailure::TraceInvalid {
            detail: format!("scope of rule {:?} has out-of-range vertices", node.rule),
        });
        return 1;
    }
    for claim in &node.shared {
        checks += 1;
        if claim.first.iter().chain(&claim.second).any(|&v| v >= g.n()) {
            failures.push(CheckFailure::TraceInvalid {
                detail: format!("sharing claim {:?} has out-of-range vertices", claim.why),
            });
            continue;
        }
        let first = VertexSet::from_iter(g.n(), claim.first.iter().copied());
        let second = VertexSet::from_iter(g.n(), claim.second.iter().copied());
        if let Some((u, v)) = g.first_edge_between(&first, &second) {
            failures.push(CheckFailure::SharingViolation { u, v, why: claim.why.clone() });
        }
    }
    for child in &node.children {
        checks += verify_trace(g, child, failures);
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle_graph;

    #[test]
    fn hash_distinguishes_graphs() {
        let a = cycle_graph(5);
        let b = crate::graph::path_graph(5);
        assert_ne!(graph_hash(&a), graph_hash(&b));
        assert_eq!(graph_hash(&a), graph_hash(&cycle_graph(5)));
    }

    #[test]
    fn json_roundtrip() {
        let cert = CertifiedResult {
            version: CERT_VERSION,
            graph_hash: "abc".into(),
            t: 2,
            mode: "chair".into(),
            verdict: Verdict::NotInClass,
            omega: 3,
            bound: 67,
            colors: None,
            witness: Some(Witness::Broom(BroomWitness {
                center: 0,
                stem: 1,
                tip: 2,
                leaves: vec![3, 4],
            })),
            trace: None,
        };
        let json = cert.to_json();
        let back = CertifiedResult::from_json(&json).unwrap();
        assert_eq!(cert, back);
    }

    #[test]
    fn verify_rejects_wrong_graph() {
        let g = cycle_graph(5);
        let cert = CertifiedResult {
            version: CERT_VERSION,
            graph_hash: "deadbeef".into(),
            t: 2,
            mode: "chair".into(),
            verdict: Verdict::Colored,
            omega: 2,
            bound: 30,
            colors: Some(vec![0, 1, 0, 1, 2]),
            witness: None,
            trace: None,
        };
        assert!(matches!(verify(&g, &cert), Err(Error::Input(_))));
    }
}
