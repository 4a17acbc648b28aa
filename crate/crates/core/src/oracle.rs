//! Exact desk-scale oracles: clique number, independence number, chromatic
//! number, and the certified Ramsey upper-bound table.
//!
//! These drive the decomposition (the recursion keys on the exact clique
//! number) and double as independent ground truth in tests. Everything here
//! is exact; the only concession to scale is a configurable vertex ceiling
//! on the chromatic solver.

use crate::error::{Error, Result};
use crate::graph::{degeneracy_order, greedy_color, palette, Coloring, Graph, VertexSet};

/// Default vertex ceiling for the exact chromatic solver, overridable via
/// the `BROOMCHI_SOLVER_CEILING` environment variable.
pub const DEFAULT_CHI_CEILING: usize = 64;

/// Exact maximum clique, by branch and bound with a greedy-coloring upper
/// bound on the candidate set.
pub fn max_clique(g: &Graph) -> VertexSet {
    let mut best = VertexSet::empty(g.n());
    if g.n() == 0 {
        return best;
    }
    let mut current = VertexSet::empty(g.n());
    expand_clique(g, g.vertex_set(), &mut current, &mut best);
    best
}

fn expand_clique(g: &Graph, candidates: VertexSet, current: &mut VertexSet, best: &mut VertexSet) {
    if current.len() > best.len() {
        *best = current.clone();
    }
    if candidates.is_empty() {
        return;
    }
    if current.len() + coloring_bound(g, &candidates) <= best.len() {
        return;
    }
    let mut rest = candidates;
    while let Some(v) = rest.min() {
        if current.len() + rest.len() <= best.len() {
            return;
        }
        rest.remove(v);
        current.insert(v);
        expand_clique(g, rest.intersection(g.neighbors(v)), current, best);
        current.remove(v);
    }
}

/// Size of a greedy proper coloring of G[s]: an upper bound on ω(G[s]).
fn coloring_bound(g: &Graph, s: &VertexSet) -> usize {
    let mut classes: Vec<VertexSet> = Vec::new();
    for v in s.iter() {
        match classes.iter_mut().find(|c| c.is_disjoint(g.neighbors(v))) {
            Some(class) => class.insert(v),
            None => {
                let mut class = VertexSet::empty(g.n());
                class.insert(v);
                classes.push(class);
            }
        }
    }
    classes.len()
}

/// Exact clique number with a witness clique.
pub fn clique_number(g: &Graph) -> (usize, VertexSet) {
    let clique = max_clique(g);
    (clique.len(), clique)
}

/// Exact independence number with a witness, via the complement.
pub fn independence_number(g: &Graph) -> (usize, VertexSet) {
    clique_number(&g.complement())
}

fn chi_ceiling() -> usize {
    std::env::var("BROOMCHI_SOLVER_CEILING")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_CHI_CEILING)
}

/// Exact chromatic number with an optimal proper coloring (colors 0..χ-1).
/// Rejects graphs above the configured ceiling so callers fall back to
/// certified-bound mode instead of hanging.
pub fn chromatic_number(g: &Graph) -> Result<(usize, Coloring)> {
    let ceiling = chi_ceiling();
    if g.n() > ceiling {
        return Err(Error::Capacity(format!(
            "exact chromatic solver limited to {ceiling} vertices (graph has {}); \
             raise BROOMCHI_SOLVER_CEILING or use certified-bound mode",
            g.n()
        )));
    }
    Ok(chromatic_number_unbounded(g))
}

/// Exact chromatic number without the ceiling: used internally where the
/// instance size is already bounded by the decomposition.
pub fn chromatic_number_unbounded(g: &Graph) -> (usize, Coloring) {
    if g.n() == 0 {
        return (0, Coloring { assignment: vec![] });
    }
    let (lower, _) = clique_number(g);
    let (order, d) = degeneracy_order(g);
    let greedy = greedy_color(g, &order, &palette(0, d + 1)).expect("degeneracy greedy");
    let upper = greedy.colors_used();
    let mut best = greedy;
    for k in lower..upper {
        if let Some(coloring) = try_k_coloring(g, k) {
            best = coloring;
            break;
        }
    }
    (best.colors_used(), best)
}

/// DSATUR-style branch and bound for a proper k-coloring.
fn try_k_coloring(g: &Graph, k: usize) -> Option<Coloring> {
    if k == 0 {
        return if g.n() == 0 { Some(Coloring { assignment: vec![] }) } else { None };
    }
    let n = g.n();
    let mut assignment: Vec<Option<u32>> = vec![None; n];
    if branch_color(g, k, &mut assignment, 0) {
        Some(Coloring { assignment: assignment.into_iter().map(|c| c.unwrap()).collect() })
    } else {
        None
    }
}

fn branch_color(g: &Graph, k: usize, assignment: &mut [Option<u32>], used: u32) -> bool {
    // most saturated uncolored vertex, ties to higher degree then lower id
    let mut pick: Option<(usize, usize, usize)> = None;
    for v in g.vertices() {
        if assignment[v].is_some() {
            continue;
        }
        let mut seen: Vec<u32> = g
            .neighbors(v)
            .iter()
            .filter_map(|u| assignment[u])
            .collect();
        seen.sort_unstable();
        seen.dedup();
        let sat = seen.len();
        let deg = g.degree(v);
        match pick {
            Some((s, d, p)) if (sat, deg, std::cmp::Reverse(v)) <= (s, d, std::cmp::Reverse(p)) => {}
            _ => pick = Some((sat, deg, v)),
        }
    }
    let Some((_, _, v)) = pick else {
        return true;
    };
    let taken: Vec<u32> = g.neighbors(v).iter().filter_map(|u| assignment[u]).collect();
    // symmetry breaking: allow at most one brand-new color
    let limit = (used + 1).min(k as u32);
    for color in 0..limit {
        if taken.contains(&color) {
            continue;
        }
        assignment[v] = Some(color);
        if branch_color(g, k, assignment, used.max(color + 1)) {
            return true;
        }
        assignment[v] = None;
    }
    false
}

/// Certified upper bounds on the Ramsey numbers R(s, k): exact where the
/// value is classically settled, binomial bound C(s+k-2, s-1) otherwise.
/// A looser entry only loosens certified color bounds, never properness.
pub struct RamseyTable;

const EXACT_R3: [(usize, u64); 7] =
    [(3, 6), (4, 9), (5, 14), (6, 18), (7, 23), (8, 28), (9, 36)];

impl RamseyTable {
    pub fn lookup(s: usize, k: usize) -> u64 {
        assert!(s >= 1 && k >= 1, "Ramsey arguments must be positive");
        let (a, b) = (s.min(k), s.max(k));
        match (a, b) {
            (1, _) => 1,
            (2, _) => b as u64,
            (3, _) => {
                if let Some(&(_, v)) = EXACT_R3.iter().find(|&&(kk, _)| kk == b) {
                    v
                } else {
                    binomial_bound(a, b)
                }
            }
            (4, 4) => 18,
            (4, 5) => 25,
            _ => binomial_bound(a, b),
        }
    }
}

fn binomial_bound(s: usize, k: usize) -> u64 {
    binomial((s + k - 2) as u64, (s - 1) as u64)
}

fn binomial(n: u64, r: u64) -> u64 {
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("binomial overflow at desk scale")
}

/// R(s, k) certified upper bound.
pub fn ramsey_upper(s: usize, k: usize) -> u64 {
    RamseyTable::lookup(s, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, complete_multipartite, cycle_graph, Graph};

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::new(10, &edges).unwrap()
    }

    #[test]
    fn clique_numbers() {
        assert_eq!(clique_number(&cycle_graph(5)).0, 2);
        assert_eq!(clique_number(&complete_multipartite(&[3, 3, 3])).0, 3);
        let p = petersen();
        // triangle-freeness, checked by scanning all edge pairs
        for (u, v) in p.edges() {
            assert!(p.neighbors(u).intersection(p.neighbors(v)).is_empty());
        }
        assert_eq!(clique_number(&p).0, 2);
        let (w, witness) = clique_number(&complete_graph(6));
        assert_eq!(w, 6);
        assert!(complete_graph(6).is_clique(&witness));
    }

    #[test]
    fn independence_numbers() {
        assert_eq!(independence_number(&complete_graph(4)).0, 1);
        assert_eq!(independence_number(&cycle_graph(5)).0, 2);
        let (alpha, witness) = independence_number(&petersen());
        assert_eq!(alpha, 4);
        assert!(petersen().is_independent(&witness));
    }

    #[test]
    fn chromatic_numbers() {
        let (chi, coloring) = chromatic_number(&cycle_graph(5)).unwrap();
        assert_eq!(chi, 3);
        assert!(coloring.check_proper(&cycle_graph(5)).is_ok());
        assert_eq!(chromatic_number(&complete_graph(7)).unwrap().0, 7);

        let p = petersen();
        let (chi, coloring) = chromatic_number(&p).unwrap();
        assert_eq!(chi, 3);
        assert!(coloring.check_proper(&p).is_ok());
        // no proper 2-coloring exists: exhaustive scan
        let mut two_colorable = false;
        'outer: for mask in 0u32..1 << 10 {
            for (u, v) in p.edges() {
                if mask >> u & 1 == mask >> v & 1 {
                    continue 'outer;
                }
            }
            two_colorable = true;
            break;
        }
        assert!(!two_colorable);
    }

    #[test]
    fn chromatic_ceiling() {
        let g = crate::graph::empty_graph(100);
        assert!(matches!(chromatic_number(&g), Err(Error::Capacity(_))));
    }

    #[test]
    fn omega_le_chi_on_random_corpus() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(1..=12);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::new(n, &edges).unwrap();
            let (w, clique) = clique_number(&g);
            assert!(g.is_clique(&clique) && clique.len() == w);
            let (chi, coloring) = chromatic_number(&g).unwrap();
            assert!(coloring.check_proper(&g).is_ok());
            assert_eq!(coloring.colors_used(), chi);
            assert!(w <= chi && chi <= n);
            assert_eq!(w, independence_number(&g.complement()).0);
        }
    }

    #[test]
    fn ramsey_exact_values() {
        assert_eq!(ramsey_upper(2, 7), 7);
        assert_eq!(ramsey_upper(3, 3), 6);
        assert_eq!(ramsey_upper(3, 4), 9);
        assert_eq!(ramsey_upper(4, 3), 9);
        assert_eq!(ramsey_upper(4, 4), 18);
        assert_eq!(ramsey_upper(1, 50), 1);
        // binomial fallback once the exact table runs out
        assert_eq!(ramsey_upper(3, 10), 55);
        assert_eq!(ramsey_upper(5, 5), 70);
    }

    #[test]
    fn ramsey_three_three_exhaustive() {
        // every 6-vertex graph has a triangle or an independent triple,
        // and C5 shows 5 vertices do not suffice
        'outer: for code in 0u32..1 << 15 {
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
            if clique_number(&g).0 >= 3 || independence_number(&g).0 >= 3 {
                continue 'outer;
            }
            panic!("graph {code} has neither a triangle nor an independent triple");
        }
        let c5 = cycle_graph(5);
        assert!(clique_number(&c5).0 < 3 && independence_number(&c5).0 < 3);
    }

    #[test]
    fn ramsey_monotone_grid() {
        for s in 1..=6 {
            for k in 1..=30 {
                assert!(ramsey_upper(s, k) <= ramsey_upper(s, k + 1), "({s},{k}) up k");
                assert!(ramsey_upper(s, k) <= ramsey_upper(s + 1, k), "({s},{k}) up s");
            }
        }
        // exact entries never exceed the binomial fallback
        for &(k, v) in &EXACT_R3 {
            assert!(v <= binomial_bound(3, k));
        }
        assert!(18 <= binomial_bound(4, 4));
        assert!(25 <= binomial_bound(4, 5));
    }
}
