//! Seeded graph generators for the corpus harness.
//!
//! Everything is deterministic in the seed. The line-graph, cograph, and
//! complete-multipartite families are in class by construction; the
//! rejection family deletes a witness vertex and retries until the detector
//! confirms membership; the negative-control family plants a broom.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::detect::{find_induced_ktt, find_induced_tbroom};
use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, Graph, VertexSet};

pub const DEFAULT_REJECTION_BUDGET: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    LineGraph,
    Cograph,
    CompleteMultipartite,
    Rejection,
    NegativeControl,
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        match s {
            "line_graph" | "line-graph" => Ok(Family::LineGraph),
            "cograph" => Ok(Family::Cograph),
            "complete_multipartite" | "complete-multipartite" => Ok(Family::CompleteMultipartite),
            "rejection" => Ok(Family::Rejection),
            "negative_control" | "negative-control" => Ok(Family::NegativeControl),
            other => Err(Error::Input(format!("unknown family {other:?}"))),
        }
    }
}

/// Deterministic generator request. For `LineGraph`, `n` is the root graph
/// order (the output has one vertex per root edge). `ktt` additionally
/// rejects induced K_{t,t} in the rejection family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub p: f64,
    pub seed: u64,
    pub t: usize,
    pub ktt: bool,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> GenSpec {
        GenSpec { family, n, p: 0.5, seed, t: 2, ktt: false }
    }
}

pub fn generate(spec: &GenSpec) -> Result<Graph> {
    if !(0.0..=1.0).contains(&spec.p) {
        return Err(Error::Input(format!("edge density {} outside [0,1]", spec.p)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.family {
        Family::LineGraph => Ok(line_graph(&gnp(spec.n, spec.p, &mut rng))),
        Family::Cograph => Ok(cograph(spec.n, &mut rng)),
        Family::CompleteMultipartite => Ok(random_complete_multipartite(spec.n, &mut rng)),
        Family::Rejection => {
            rejection_sample(spec.n, spec.p, spec.t, spec.ktt, DEFAULT_REJECTION_BUDGET, &mut rng)
        }
        Family::NegativeControl => negative_control(spec.n, spec.p, spec.t, &mut rng),
    }
}

/// Erdős–Rényi G(n, p) with a fixed pair order.
pub fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("random graph")
}

/// Line graph: one vertex per edge of the root, adjacent when the root
/// edges share an endpoint. Always claw-free, hence t-broom-free for t ≥ 2.
pub fn line_graph(root: &Graph) -> Graph {
    let root_edges = root.edges();
    let mut edges = Vec::new();
    for (i, &(a, b)) in root_edges.iter().enumerate() {
        for (j, &(c, d)) in root_edges.iter().enumerate().skip(i + 1) {
            if a == c || a == d || b == c || b == d {
                edges.push((i, j));
            }
        }
    }
    Graph::new(root_edges.len(), &edges).expect("line graph")
}

/// Random cograph on n vertices: recursive union/join of random halves.
/// Free of induced 4-vertex paths by construction.
pub fn cograph(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    let ids: Vec<usize> = (0..n).collect();
    build_cograph(&ids, rng, &mut edges);
    Graph::new(n, &edges).expect("cograph")
}

fn build_cograph(ids: &[usize], rng: &mut ChaCha8Rng, edges: &mut Vec<(usize, usize)>) {
    if ids.len() <= 1 {
        return;
    }
    let cut = rng.gen_range(1..ids.len());
    let (left, right) = ids.split_at(cut);
    build_cograph(left, rng, edges);
    build_cograph(right, rng, edges);
    if rng.gen_bool(0.5) {
        for &u in left {
            for &v in right {
                edges.push((u, v));
            }
        }
    }
}

/// Complete multipartite with random part sizes summing to n.
pub fn random_complete_multipartite(n: usize, rng: &mut ChaCha8Rng) -> Graph {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let size = rng.gen_range(1..=left.min(1 + n / 3));
        parts.push(size);
        left -= size;
    }
    crate::graph::complete_multipartite(&parts)
}

/// Sample G(n, p) and delete one witness vertex per retry until the
/// detector confirms the class (t-broom-free, plus K_{t,t}-free when
/// requested). The deleted vertex is the witness center (or the least
/// left-side vertex of a biclique).
pub fn rejection_sample(
    n: usize,
    p: f64,
    t: usize,
    ktt: bool,
    budget: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Graph> {
    let mut g = gnp(n, p, rng);
    for _ in 0..budget {
        if let Some(w) = find_induced_tbroom(&g, t)? {
            g = delete_vertex(&g, w.center);
            continue;
        }
        if ktt {
            if let Some(w) = find_induced_ktt(&g, t)? {
                g = delete_vertex(&g, w.left[0]);
                continue;
            }
        }
        return Ok(g);
    }
    Err(Error::Capacity(format!(
        "rejection budget of {budget} attempts exhausted; try smaller n or different density"
    )))
}

fn delete_vertex(g: &Graph, v: usize) -> Graph {
    let mut keep = g.vertex_set();
    keep.remove(v);
    induced_subgraph(g, &keep).expect("vertex deletion").0
}

/// Random graph with one exactly-planted induced t-broom on random
/// positions (all pairs inside the planted set are forced).
pub fn negative_control(n: usize, p: f64, t: usize, rng: &mut ChaCha8Rng) -> Result<Graph> {
    if n < t + 3 {
        return Err(Error::Input(format!(
            "negative control needs at least {} vertices for a {t}-broom",
            t + 3
        )));
    }
    let g = gnp(n, p, rng);
    // pick t+3 distinct positions
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..t + 3 {
        let j = rng.gen_range(i..n);
        pool.swap(i, j);
    }
    let spot = &pool[..t + 3];
    let (center, stem, tip, leaves) = (spot[0], spot[1], spot[2], &spot[3..]);
    let inside = VertexSet::from_iter(n, spot.iter().copied());
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter(|&(u, v)| !(inside.contains(u) && inside.contains(v)))
        .collect();
    edges.push((center, stem));
    edges.push((stem, tip));
    for &leaf in leaves {
        edges.push((center, leaf));
    }
    Graph::new(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detect::verify_broom;
    use crate::oracle::clique_number;

    #[test]
    fn deterministic_per_seed() {
        for family in
            [Family::LineGraph, Family::Cograph, Family::CompleteMultipartite, Family::Rejection]
        {
            let spec = GenSpec { family, n: 10, p: 0.4, seed: 99, t: 2, ktt: false };
            let a = generate(&spec).unwrap();
            let b = generate(&spec).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn line_graph_of_k4_is_octahedron() {
        let k4 = crate::graph::complete_graph(4);
        let lg = line_graph(&k4);
        assert_eq!(lg.n(), 6);
        assert_eq!(lg.m(), 12);
        assert_eq!(clique_number(&lg).0, 3);
        assert!(find_induced_tbroom(&lg, 2).unwrap().is_none());
    }

    #[test]
    fn line_graphs_are_chair_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..15 {
            let root = gnp(8, 0.5, &mut rng);
            let lg = line_graph(&root);
            assert!(find_induced_tbroom(&lg, 2).unwrap().is_none(), "root {root:?}");
        }
    }

    #[test]
    fn cographs_have_no_induced_p4() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..15 {
            let g = cograph(10, &mut rng);
            assert!(find_induced_tbroom(&g, 1).unwrap().is_none());
            assert!(find_induced_tbroom(&g, 2).unwrap().is_none());
        }
    }

    #[test]
    fn rejection_family_is_detector_clean() {
        let spec = GenSpec { family: Family::Rejection, n: 14, p: 0.5, seed: 7, t: 2, ktt: false };
        let g = generate(&spec).unwrap();
        assert!(find_induced_tbroom(&g, 2).unwrap().is_none());

        let spec = GenSpec { family: Family::Rejection, n: 14, p: 0.5, seed: 7, t: 3, ktt: true };
        let g = generate(&spec).unwrap();
        assert!(find_induced_tbroom(&g, 3).unwrap().is_none());
        assert!(find_induced_ktt(&g, 3).unwrap().is_none());
    }

    #[test]
    fn negative_control_contains_broom() {
        let spec =
            GenSpec { family: Family::NegativeControl, n: 12, p: 0.5, seed: 21, t: 2, ktt: false };
        let g = generate(&spec).unwrap();
        let w = find_induced_tbroom(&g, 2).unwrap().expect("planted chair");
        assert!(verify_broom(&g, &w));
    }

    #[test]
    fn negative_control_needs_room() {
        let spec =
            GenSpec { family: Family::NegativeControl, n: 4, p: 0.5, seed: 1, t: 2, ktt: false };
        assert!(generate(&spec).is_err());
    }
}
