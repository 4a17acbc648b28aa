//! Induced-pattern detection with verifiable witnesses.
//!
//! A t-broom is the star K_{1,t+1} with one edge subdivided once: a center
//! adjacent to t independent leaves and to a stem, the stem carrying one
//! further pendant tip. The t = 2 case is the chair. Detection is exact and
//! deterministic; every witness can be re-checked against the graph by a
//! quadratic edge scan.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// An induced t-broom: `center` adjacent to `stem` and to every leaf,
/// `stem` adjacent to `tip`, and no other pair adjacent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BroomWitness {
    pub center: usize,
    pub stem: usize,
    pub tip: usize,
    pub leaves: Vec<usize>,
}

impl BroomWitness {
    pub fn new(center: usize, stem: usize, tip: usize, leaves: &VertexSet) -> Self {
        BroomWitness { center, stem, tip, leaves: leaves.to_vec() }
    }

    pub fn t(&self) -> usize {
        self.leaves.len()
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v = vec![self.center, self.stem, self.tip];
        v.extend_from_slice(&self.leaves);
        v
    }

    /// Rewrite through an id map (new id -> old id), e.g. to lift a witness
    /// found in an induced subgraph back to the host graph.
    pub fn mapped(&self, map: &[usize]) -> BroomWitness {
        BroomWitness {
            center: map[self.center],
            stem: map[self.stem],
            tip: map[self.tip],
            leaves: self.leaves.iter().map(|&v| map[v]).collect(),
        }
    }
}

/// An induced K_{t,t}: two disjoint independent t-sets, complete to each
/// other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BicliqueWitness {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

impl BicliqueWitness {
    pub fn new(left: &VertexSet, right: &VertexSet) -> Self {
        BicliqueWitness { left: left.to_vec(), right: right.to_vec() }
    }

    pub fn t(&self) -> usize {
        self.left.len()
    }

    pub fn mapped(&self, map: &[usize]) -> BicliqueWitness {
        BicliqueWitness {
            left: self.left.iter().map(|&v| map[v]).collect(),
            right: self.right.iter().map(|&v| map[v]).collect(),
        }
    }
}

/// Check every adjacency and non-adjacency the broom shape requires.
pub fn verify_broom(g: &Graph, w: &BroomWitness) -> bool {
    let verts = w.vertices();
    if verts.iter().any(|&v| v >= g.n()) {
        return false;
    }
    let mut sorted = verts.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != verts.len() || w.leaves.is_empty() {
        return false;
    }
    for (i, &u) in verts.iter().enumerate() {
        for &v in verts.iter().skip(i + 1) {
            let required = is_broom_edge(w, u, v);
            if g.has_edge(u, v) != required {
                return false;
            }
        }
    }
    true
}

fn is_broom_edge(w: &BroomWitness, u: usize, v: usize) -> bool {
    let pair = |a: usize, b: usize| (u == a && v == b) || (u == b && v == a);
    pair(w.center, w.stem)
        || pair(w.stem, w.tip)
        || w.leaves.iter().any(|&s| pair(w.center, s))
}

/// Check the induced-K_{t,t} shape.
pub fn verify_ktt(g: &Graph, w: &BicliqueWitness) -> bool {
    if w.left.is_empty() || w.left.len() != w.right.len() {
        return false;
    }
    let all: Vec<usize> = w.left.iter().chain(&w.right).copied().collect();
    if all.iter().any(|&v| v >= g.n()) {
        return false;
    }
    let mut sorted = all.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != all.len() {
        return false;
    }
    let left = VertexSet::from_iter(g.n(), w.left.iter().copied());
    let right = VertexSet::from_iter(g.n(), w.right.iter().copied());
    g.is_independent(&left) && g.is_independent(&right) && g.is_complete_between(&left, &right)
}

/// Exact independent-set search inside `s`: the lexicographically least
/// independent set of size `k`, or None. Branch and bound with a greedy
/// clique-cover upper bound on what the remaining candidates can still
/// contribute.
pub fn find_independent_in(g: &Graph, s: &VertexSet, k: usize) -> Option<VertexSet> {
    if k == 0 {
        return Some(VertexSet::empty(g.n()));
    }
    if s.len() < k {
        return None;
    }
    let mut chosen = VertexSet::empty(g.n());
    if extend_independent(g, s.clone(), k, &mut chosen) {
        Some(chosen)
    } else {
        None
    }
}

fn extend_independent(g: &Graph, candidates: VertexSet, need: usize, chosen: &mut VertexSet) -> bool {
    if need == 0 {
        return true;
    }
    if candidates.len() < need || clique_cover_bound(g, &candidates) < need {
        return false;
    }
    let mut rest = candidates;
    while let Some(v) = rest.min() {
        rest.remove(v);
        chosen.insert(v);
        let next = rest.difference(g.neighbors(v));
        if extend_independent(g, next, need - 1, chosen) {
            return true;
        }
        chosen.remove(v);
        if rest.len() < need {
            return false;
        }
    }
    false
}

/// Number of cliques in a greedy clique cover of G[s]; an upper bound on the
/// largest independent set in s.
fn clique_cover_bound(g: &Graph, s: &VertexSet) -> usize {
    let mut rest = s.clone();
    let mut count = 0;
    while let Some(v) = rest.min() {
        // grow a clique from v inside rest
        let mut clique = VertexSet::empty(g.n());
        clique.insert(v);
        let mut common = rest.intersection(g.neighbors(v));
        while let Some(u) = common.min() {
            clique.insert(u);
            common = common.intersection(g.neighbors(u));
        }
        rest = rest.difference(&clique);
        count += 1;
    }
    count
}

/// Find an induced t-broom, returning the lexicographically least witness
/// under (center, stem, tip, leaves) vertex-id order, or None.
///
/// Enumerates the center, then the stem among its neighbors, then the tip in
/// N(stem) ∖ N[center], and finally the least independent t-set of leaves
/// among the center's remaining neighbors avoiding both stem and tip.
pub fn find_induced_tbroom(g: &Graph, t: usize) -> Result<Option<BroomWitness>> {
    if t < 1 {
        return Err(Error::Input("t-broom detection needs t >= 1".into()));
    }
    for center in g.vertices() {
        let nbrs = g.neighbors(center);
        if nbrs.len() < t + 1 {
            continue;
        }
        for stem in nbrs.iter() {
            let closed_center = g.closed_neighborhood(center);
            let tips = g.neighbors(stem).difference(&closed_center);
            for tip in tips.iter() {
                let leaf_pool = nbrs
                    .difference(&g.closed_neighborhood(stem))
                    .difference(&g.closed_neighborhood(tip));
                if let Some(leaves) = find_independent_in(g, &leaf_pool, t) {
                    let w = BroomWitness::new(center, stem, tip, &leaves);
                    debug_assert!(verify_broom(g, &w));
                    return Ok(Some(w));
                }
            }
        }
    }
    Ok(None)
}

/// Find an induced K_{t,t}: enumerate independent t-sets as the left side in
/// lexicographic order, then take the least independent t-set in their
/// common neighborhood.
pub fn find_induced_ktt(g: &Graph, t: usize) -> Result<Option<BicliqueWitness>> {
    if t < 2 {
        return Err(Error::Input("biclique detection needs t >= 2".into()));
    }
    let mut found: Option<BicliqueWitness> = None;
    enumerate_independent_sets(g, &g.vertex_set(), t, &mut VertexSet::empty(g.n()), &mut |left| {
        let mut common = g.vertex_set();
        for v in left.iter() {
            common = common.intersection(g.neighbors(v));
        }
        if let Some(right) = find_independent_in(g, &common, t) {
            found = Some(BicliqueWitness::new(left, &right));
            return true;
        }
        false
    });
    if let Some(w) = &found {
        debug_assert!(verify_ktt(g, w));
    }
    Ok(found)
}

/// Visit independent k-subsets of `pool` in lexicographic order until the
/// visitor returns true.
fn enumerate_independent_sets(
    g: &Graph,
    pool: &VertexSet,
    k: usize,
    current: &mut VertexSet,
    visit: &mut impl FnMut(&VertexSet) -> bool,
) -> bool {
    if k == 0 {
        return visit(current);
    }
    if pool.len() < k {
        return false;
    }
    let mut rest = pool.clone();
    while let Some(v) = rest.min() {
        rest.remove(v);
        current.insert(v);
        let next = rest.difference(g.neighbors(v));
        if enumerate_independent_sets(g, &next, k - 1, current, visit) {
            return true;
        }
        current.remove(v);
        if rest.len() < k {
            return false;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle_graph, Graph, VertexSet};

    pub fn chair() -> Graph {
        Graph::new(5, &[(0, 1), (1, 2), (0, 3), (0, 4)]).unwrap()
    }

    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::new(10, &edges).unwrap()
    }

    fn cube() -> Graph {
        let mut edges = Vec::new();
        for u in 0..8u32 {
            for b in 0..3 {
                let v = u ^ (1 << b);
                if v > u {
                    edges.push((u as usize, v as usize));
                }
            }
        }
        Graph::new(8, &edges).unwrap()
    }

    /// Brute-force reference: does any (t+3)-subset of vertices induce a
    /// t-broom, checked over all role assignments?
    pub fn contains_broom_brute(g: &Graph, t: usize) -> bool {
        let n = g.n();
        let mut verts: Vec<usize> = Vec::new();
        fn rec(g: &Graph, t: usize, start: usize, verts: &mut Vec<usize>) -> bool {
            if verts.len() == t + 3 {
                return broom_assignment_exists(g, verts);
            }
            for v in start..g.n() {
                verts.push(v);
                if rec(g, t, v + 1, verts) {
                    return true;
                }
                verts.pop();
            }
            false
        }
        fn broom_assignment_exists(g: &Graph, verts: &[usize]) -> bool {
            let k = verts.len();
            for (ci, &center) in verts.iter().enumerate() {
                for (si, &stem) in verts.iter().enumerate() {
                    if si == ci {
                        continue;
                    }
                    for (ti, &tip) in verts.iter().enumerate() {
                        if ti == ci || ti == si {
                            continue;
                        }
                        let leaves: Vec<usize> = (0..k)
                            .filter(|&i| i != ci && i != si && i != ti)
                            .map(|i| verts[i])
                            .collect();
                        let w = BroomWitness {
                            center,
                            stem,
                            tip,
                            leaves,
                        };
                        if verify_broom(g, &w) {
                            return true;
                        }
                    }
                }
            }
            false
        }
        let _ = n;
        rec(g, t, 0, &mut verts)
    }

    #[test]
    fn chair_detects_itself() {
        let g = chair();
        let w = find_induced_tbroom(&g, 2).unwrap().unwrap();
        assert!(verify_broom(&g, &w));
        assert_eq!(w.vertices().len(), 5);
    }

    #[test]
    fn cycle5_is_chair_free() {
        assert!(find_induced_tbroom(&cycle_graph(5), 2).unwrap().is_none());
    }

    #[test]
    fn petersen_contains_chair() {
        let g = petersen();
        let w = find_induced_tbroom(&g, 2).unwrap().expect("chair in Petersen");
        assert!(verify_broom(&g, &w));
        assert!(contains_broom_brute(&g, 2));
    }

    #[test]
    fn detector_matches_brute_force_small() {
        // all graphs on 5 vertices, plus a spread of 6-vertex graphs
        for code in 0u32..1 << 10 {
            let mut edges = Vec::new();
            let mut bit = 0;
            for u in 0..5 {
                for v in u + 1..5 {
                    if code >> bit & 1 == 1 {
                        edges.push((u, v));
                    }
                    bit += 1;
                }
            }
            let g = Graph::new(5, &edges).unwrap();
            assert_eq!(
                find_induced_tbroom(&g, 2).unwrap().is_some(),
                contains_broom_brute(&g, 2),
                "mismatch on code {code}"
            );
        }
        for code in (0u32..1 << 15).step_by(89) {
            let mut edges = Vec::new();
            let mut bit = 0;
            for u in 0..6 {
                for v in u + 1..6 {
                    if code >> bit & 1 == 1 {
                        edges.push((u, v));
                    }
                    bit += 1;
                }
            }
            let g = Graph::new(6, &edges).unwrap();
            assert_eq!(
                find_induced_tbroom(&g, 2).unwrap().is_some(),
                contains_broom_brute(&g, 2),
                "mismatch on code {code}"
            );
        }
    }

    #[test]
    fn ktt_on_complete_bipartite() {
        let g = complete_multipartite_k33();
        let w = find_induced_ktt(&g, 3).unwrap().unwrap();
        assert!(verify_ktt(&g, &w));
    }

    fn complete_multipartite_k33() -> Graph {
        let mut edges = Vec::new();
        for u in 0..3 {
            for v in 3..6 {
                edges.push((u, v));
            }
        }
        Graph::new(6, &edges).unwrap()
    }

    #[test]
    fn cycle5_has_no_k22() {
        assert!(find_induced_ktt(&cycle_graph(5), 2).unwrap().is_none());
    }

    #[test]
    fn cube_contains_induced_square() {
        let g = cube();
        let w = find_induced_ktt(&g, 2).unwrap().expect("C4 in the cube");
        assert!(verify_ktt(&g, &w));
        // brute-force cross-check over all 4-subsets
        let mut brute = false;
        for a in 0..8 {
            for b in a + 1..8 {
                for c in b + 1..8 {
                    for d in c + 1..8 {
                        for (l0, l1, r0, r1) in
                            [(a, b, c, d), (a, c, b, d), (a, d, b, c)]
                        {
                            let w = BicliqueWitness { left: vec![l0, l1], right: vec![r0, r1] };
                            brute |= verify_ktt(&g, &w);
                        }
                    }
                }
            }
        }
        assert!(brute);
    }

    #[test]
    fn independent_set_search() {
        let c5 = cycle_graph(5);
        let s = c5.vertex_set();
        assert_eq!(
            find_independent_in(&c5, &s, 2).unwrap(),
            VertexSet::from_iter(5, [0, 2])
        );
        assert!(find_independent_in(&complete_graph(4), &complete_graph(4).vertex_set(), 2).is_none());
        let p = petersen();
        let four = find_independent_in(&p, &p.vertex_set(), 4).expect("alpha(Petersen) = 4");
        assert!(p.is_independent(&four));
        assert!(find_independent_in(&p, &p.vertex_set(), 5).is_none());
    }

    #[test]
    fn verify_rejects_swapped_witness() {
        let g = chair();
        let good = BroomWitness { center: 0, stem: 1, tip: 2, leaves: vec![3, 4] };
        assert!(verify_broom(&g, &good));
        let bad = BroomWitness { center: 0, stem: 1, tip: 3, leaves: vec![2, 4] };
        assert!(!verify_broom(&g, &bad));
    }

    #[test]
    fn hereditary_consistency_spot_check() {
        let g = cycle_graph(7);
        assert!(find_induced_tbroom(&g, 2).unwrap().is_none());
        for drop in 0..7 {
            let mut s = g.vertex_set();
            s.remove(drop);
            let (sub, _) = crate::graph::induced_subgraph(&g, &s).unwrap();
            assert!(find_induced_tbroom(&sub, 2).unwrap().is_none());
        }
    }

    #[test]
    fn one_broom_is_p4() {
        let p4 = crate::graph::path_graph(4);
        let w = find_induced_tbroom(&p4, 1).unwrap().unwrap();
        assert!(verify_broom(&p4, &w));
        assert!(find_induced_tbroom(&crate::graph::path_graph(3), 1).unwrap().is_none());
    }
}
