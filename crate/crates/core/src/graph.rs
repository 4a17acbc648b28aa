//! Immutable bitset-backed simple graphs and the vertex-set algebra the
//! rest of the library runs on.
//!
//! Every graph is built once and never mutated; all operations are pure
//! functions, so graphs can be shared freely across threads.

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

fn words_for(n: usize) -> usize {
    n.div_ceil(WORD_BITS)
}

/// A subset of the vertex ids `0..n` of some graph, stored as a bitmap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet { n, words: vec![0; words_for(n)] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(n: usize, iter: I) -> Self {
        let mut s = Self::empty(n);
        for v in iter {
            assert!(v < n, "vertex {v} out of range 0..{n}");
            s.insert(v);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, v: usize) {
        debug_assert!(v < self.n);
        self.words[v / WORD_BITS] |= 1u64 << (v % WORD_BITS);
    }

    pub fn remove(&mut self, v: usize) {
        debug_assert!(v < self.n);
        self.words[v / WORD_BITS] &= !(1u64 << (v % WORD_BITS));
    }

    pub fn contains(&self, v: usize) -> bool {
        v < self.n && self.words[v / WORD_BITS] >> (v % WORD_BITS) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.zip_with(other, |a, b| a & !b)
    }

    /// Complement within the graph's vertex universe `0..n`.
    pub fn complement(&self) -> VertexSet {
        let mut out = VertexSet { n: self.n, words: self.words.iter().map(|w| !w).collect() };
        out.trim();
        out
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Smallest member, if any.
    pub fn min(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Ascending iterator over members.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * WORD_BITS + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn zip_with(&self, other: &VertexSet, f: impl Fn(u64, u64) -> u64) -> VertexSet {
        assert_eq!(self.n, other.n, "vertex sets over different universes");
        let mut out = VertexSet {
            n: self.n,
            words: self.words.iter().zip(&other.words).map(|(&a, &b)| f(a, b)).collect(),
        };
        out.trim();
        out
    }

    fn trim(&mut self) {
        let tail = self.n % WORD_BITS;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Immutable simple undirected graph over dense vertex ids `0..n`.
///
/// Adjacency is one bit row per vertex, so neighborhood set algebra is a
/// handful of word operations.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    rows: Vec<VertexSet>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Build a graph from an edge list. Rejects self-loops and out-of-range
    /// ids; duplicate edges collapse.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph> {
        let mut rows = vec![VertexSet::empty(n); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::InvalidVertex { id: u, n });
            }
            if v >= n {
                return Err(Error::InvalidVertex { id: v, n });
            }
            if u == v {
                return Err(Error::Input(format!("self-loop at vertex {u}")));
            }
            rows[u].insert(v);
            rows[v].insert(u);
        }
        let m = rows.iter().map(|r| r.len()).sum::<usize>() / 2;
        Ok(Graph { n, m, rows, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Graph> {
        if labels.len() != self.n {
            return Err(Error::Input(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.rows[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.rows[v]
    }

    /// N(v) ∪ {v}.
    pub fn closed_neighborhood(&self, v: usize) -> VertexSet {
        let mut s = self.rows[v].clone();
        s.insert(v);
        s
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    pub fn degree_in(&self, v: usize, s: &VertexSet) -> usize {
        self.rows[v].intersection(s).len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges as ascending (u, v) pairs with u < v.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for v in self.rows[u].iter() {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn complement(&self) -> Graph {
        let mut rows = Vec::with_capacity(self.n);
        for v in 0..self.n {
            let mut row = self.rows[v].complement();
            row.remove(v);
            rows.push(row);
        }
        let m = rows.iter().map(|r| r.len()).sum::<usize>() / 2;
        Graph { n: self.n, m, rows, labels: self.labels.clone() }
    }

    /// Neighborhood of a whole set: N(S) = (∪_{v∈S} N(v)) ∖ S.
    pub fn set_neighborhood(&self, s: &VertexSet) -> VertexSet {
        let mut acc = VertexSet::empty(self.n);
        for v in s.iter() {
            acc = acc.union(&self.rows[v]);
        }
        acc.difference(s)
    }

    /// True iff every pair (u, v) with u ∈ s, v ∈ t is an edge.
    /// Expects disjoint sets.
    pub fn is_complete_between(&self, s: &VertexSet, t: &VertexSet) -> bool {
        s.iter().all(|u| t.is_subset(&self.rows[u]))
    }

    pub fn is_anticomplete_between(&self, s: &VertexSet, t: &VertexSet) -> bool {
        s.iter().all(|u| t.is_disjoint(&self.rows[u]))
    }

    /// First edge between two sets in (min u, then min v) order, if any.
    pub fn first_edge_between(&self, s: &VertexSet, t: &VertexSet) -> Option<(usize, usize)> {
        for u in s.iter() {
            if let Some(v) = self.rows[u].intersection(t).min() {
                return Some((u, v));
            }
        }
        None
    }

    pub fn is_independent(&self, s: &VertexSet) -> bool {
        s.iter().all(|u| s.is_disjoint(&self.rows[u]))
    }

    pub fn is_clique(&self, s: &VertexSet) -> bool {
        s.iter().all(|u| {
            let mut rest = s.clone();
            rest.remove(u);
            rest.is_subset(&self.rows[u])
        })
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={}, edges={:?})", self.n, self.m, self.edges())
    }
}

/// Distance layering away from a source set: `layers[i]` holds the vertices
/// at graph distance exactly i+1 from the source, `residue` whatever is
/// unreachable.
#[derive(Clone, Debug)]
pub struct LayerDecomposition {
    pub source: VertexSet,
    pub layers: Vec<VertexSet>,
    pub residue: VertexSet,
}

impl LayerDecomposition {
    /// Union of all layers at distance ≥ k (1-based).
    pub fn at_least(&self, k: usize) -> VertexSet {
        let n = self.source.universe();
        let mut acc = VertexSet::empty(n);
        for layer in self.layers.iter().skip(k.saturating_sub(1)) {
            acc = acc.union(layer);
        }
        acc
    }
}

/// Induced subgraph on `s`, plus the map from new ids to original ids
/// (ascending, so the map is sorted).
pub fn induced_subgraph(g: &Graph, s: &VertexSet) -> Result<(Graph, Vec<usize>)> {
    if s.universe() != g.n() {
        return Err(Error::Input("vertex set for a different graph".into()));
    }
    let map = s.to_vec();
    let mut inverse = vec![usize::MAX; g.n()];
    for (new, &old) in map.iter().enumerate() {
        inverse[old] = new;
    }
    let mut edges = Vec::new();
    for (new_u, &old_u) in map.iter().enumerate() {
        for old_v in g.neighbors(old_u).intersection(s).iter() {
            if old_v > old_u {
                edges.push((new_u, inverse[old_v]));
            }
        }
    }
    let mut sub = Graph::new(map.len(), &edges)?;
    if let Some(labels) = g.labels() {
        sub = sub.with_labels(map.iter().map(|&v| labels[v].clone()).collect())?;
    }
    Ok((sub, map))
}

/// Connected components of G[S], as vertex sets of G, ordered by their
/// minimum vertex id.
pub fn components(g: &Graph, s: &VertexSet) -> Vec<VertexSet> {
    let mut remaining = s.clone();
    let mut out = Vec::new();
    while let Some(start) = remaining.min() {
        let mut comp = VertexSet::empty(g.n());
        let mut frontier = vec![start];
        comp.insert(start);
        remaining.remove(start);
        while let Some(v) = frontier.pop() {
            for u in g.neighbors(v).intersection(&remaining).iter() {
                comp.insert(u);
                remaining.remove(u);
                frontier.push(u);
            }
        }
        out.push(comp);
    }
    out
}

/// BFS layering from a nonempty source set.
pub fn distance_layers(g: &Graph, source: &VertexSet) -> Result<LayerDecomposition> {
    if source.is_empty() {
        return Err(Error::Input("distance layers from an empty set".into()));
    }
    let mut seen = source.clone();
    let mut layers = Vec::new();
    let mut frontier = source.clone();
    loop {
        let next = g.set_neighborhood(&frontier).difference(&seen);
        if next.is_empty() {
            break;
        }
        seen = seen.union(&next);
        layers.push(next.clone());
        frontier = next;
    }
    let residue = seen.complement();
    Ok(LayerDecomposition { source: source.clone(), layers, residue })
}

/// Degeneracy ordering by repeated minimum-degree removal (ties to the
/// smaller id), returned in coloring orientation: every vertex has at most
/// `d` neighbors *earlier* in the sequence, so a forward greedy pass over it
/// uses at most d+1 colors.
pub fn degeneracy_order(g: &Graph) -> (Vec<usize>, usize) {
    let n = g.n();
    let mut alive = VertexSet::full(n);
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut peel = Vec::with_capacity(n);
    let mut d = 0;
    for _ in 0..n {
        let v = alive
            .iter()
            .min_by_key(|&v| (deg[v], v))
            .expect("alive set nonempty");
        d = d.max(deg[v]);
        alive.remove(v);
        for u in g.neighbors(v).intersection(&alive).iter() {
            deg[u] -= 1;
        }
        peel.push(v);
    }
    peel.reverse();
    (peel, d)
}

/// A total vertex coloring. Color values are plain integers; they need not
/// be contiguous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    pub assignment: Vec<u32>,
}

impl Coloring {
    pub fn colors_used(&self) -> usize {
        let mut colors: Vec<u32> = self.assignment.clone();
        colors.sort_unstable();
        colors.dedup();
        colors.len()
    }

    /// Ok, or the first monochromatic edge.
    pub fn check_proper(&self, g: &Graph) -> std::result::Result<(), (usize, usize)> {
        for (u, v) in g.edges() {
            if self.assignment[u] == self.assignment[v] {
                return Err((u, v));
            }
        }
        Ok(())
    }
}

/// Greedy coloring along `order` from a fixed palette: each vertex takes the
/// first palette color unused on its already-colored neighbors.
///
/// Exhausting the palette means a degree bound promised by the caller was
/// violated; the error names the offending vertex.
pub fn greedy_color(g: &Graph, order: &[usize], palette: &[u32]) -> Result<Coloring> {
    let n = g.n();
    if order.len() != n {
        return Err(Error::Input(format!(
            "order has {} entries for {} vertices",
            order.len(),
            n
        )));
    }
    let mut seen = VertexSet::empty(n);
    for &v in order {
        if v >= n {
            return Err(Error::InvalidVertex { id: v, n });
        }
        if seen.contains(v) {
            return Err(Error::Input(format!("vertex {v} repeated in order")));
        }
        seen.insert(v);
    }
    let mut colored = VertexSet::empty(n);
    let mut assignment = vec![0u32; n];
    for &v in order {
        let taken: Vec<u32> = g
            .neighbors(v)
            .intersection(&colored)
            .iter()
            .map(|u| assignment[u])
            .collect();
        let color = palette
            .iter()
            .copied()
            .find(|c| !taken.contains(c))
            .ok_or_else(|| {
                Error::Contradiction(format!(
                    "palette of {} colors exhausted at vertex {v}",
                    palette.len()
                ))
            })?;
        assignment[v] = color;
        colored.insert(v);
    }
    Ok(Coloring { assignment })
}

/// Fresh palette `[base, base+len)`.
pub fn palette(base: u32, len: usize) -> Vec<u32> {
    (base..base + len as u32).collect()
}

// Small named constructions used across the library and its tests.

pub fn empty_graph(n: usize) -> Graph {
    Graph::new(n, &[]).expect("edgeless graph")
}

pub fn complete_graph(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::new(n, &edges).expect("complete graph")
}

pub fn path_graph(n: usize) -> Graph {
    let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    Graph::new(n, &edges).expect("path graph")
}

pub fn cycle_graph(n: usize) -> Graph {
    assert!(n >= 3);
    let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    edges.push((n - 1, 0));
    Graph::new(n, &edges).expect("cycle graph")
}

pub fn complete_multipartite(parts: &[usize]) -> Graph {
    let n: usize = parts.iter().sum();
    let mut part_of = Vec::with_capacity(n);
    for (i, &size) in parts.iter().enumerate() {
        part_of.extend(std::iter::repeat(i).take(size));
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if part_of[u] != part_of[v] {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("complete multipartite graph")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chair() -> Graph {
        // center 0, stem 1, tip 2, leaves 3 and 4
        Graph::new(5, &[(0, 1), (1, 2), (0, 3), (0, 4)]).unwrap()
    }

    #[test]
    fn induced_subgraph_of_cycle_is_path() {
        let c5 = cycle_graph(5);
        let s = VertexSet::from_iter(5, [0, 1, 2, 3]);
        let (sub, map) = induced_subgraph(&c5, &s).unwrap();
        assert_eq!(map, vec![0, 1, 2, 3]);
        assert_eq!(sub, path_graph(4));
    }

    #[test]
    fn induced_subgraph_of_complete_is_complete() {
        let k5 = complete_graph(5);
        let s = VertexSet::from_iter(5, [1, 3, 4]);
        let (sub, _) = induced_subgraph(&k5, &s).unwrap();
        assert_eq!(sub, complete_graph(3));
    }

    #[test]
    fn induced_subgraph_of_chair_is_claw() {
        let (sub, map) = induced_subgraph(&chair(), &VertexSet::from_iter(5, [0, 1, 3, 4])).unwrap();
        assert_eq!(map, vec![0, 1, 3, 4]);
        // star with center 0
        assert_eq!(sub.m(), 3);
        assert_eq!(sub.degree(0), 3);
    }

    #[test]
    fn induced_subgraph_rejects_foreign_set() {
        let g = cycle_graph(5);
        assert!(induced_subgraph(&g, &VertexSet::from_iter(6, [0, 1])).is_err());
    }

    #[test]
    fn components_cases() {
        let g = cycle_graph(5);
        assert!(components(&g, &VertexSet::empty(5)).is_empty());

        let two_triangles =
            Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let comps = components(&two_triangles, &two_triangles.vertex_set());
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.len() == 3));

        let comps = components(&g, &VertexSet::from_iter(5, [0, 2]));
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn distance_layers_cycle() {
        let g = cycle_graph(5);
        let layers = distance_layers(&g, &VertexSet::from_iter(5, [0])).unwrap();
        assert_eq!(layers.layers.len(), 2);
        assert_eq!(layers.layers[0], VertexSet::from_iter(5, [1, 4]));
        assert_eq!(layers.layers[1], VertexSet::from_iter(5, [2, 3]));
        assert!(layers.residue.is_empty());
    }

    #[test]
    fn distance_layers_complete() {
        let g = complete_graph(4);
        let layers = distance_layers(&g, &VertexSet::from_iter(4, [2])).unwrap();
        assert_eq!(layers.layers.len(), 1);
        assert_eq!(layers.layers[0].len(), 3);
    }

    #[test]
    fn distance_layers_disconnected() {
        let g = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let source = VertexSet::from_iter(6, [0, 1, 2]);
        let layers = distance_layers(&g, &source).unwrap();
        assert!(layers.layers.is_empty());
        assert_eq!(layers.residue, VertexSet::from_iter(6, [3, 4, 5]));
    }

    #[test]
    fn distance_layers_rejects_empty_source() {
        assert!(distance_layers(&cycle_graph(5), &VertexSet::empty(5)).is_err());
    }

    #[test]
    fn degeneracy_values() {
        let tree = path_graph(7);
        assert_eq!(degeneracy_order(&tree).1, 1);
        assert_eq!(degeneracy_order(&complete_graph(4)).1, 3);
        assert_eq!(degeneracy_order(&cycle_graph(5)).1, 2);
    }

    #[test]
    fn greedy_triangle_uses_three() {
        let g = complete_graph(3);
        let coloring = greedy_color(&g, &[0, 1, 2], &[1, 2, 3]).unwrap();
        assert_eq!(coloring.colors_used(), 3);
        assert!(coloring.check_proper(&g).is_ok());
    }

    #[test]
    fn greedy_cycle_in_degeneracy_order() {
        let g = cycle_graph(5);
        let (order, d) = degeneracy_order(&g);
        let coloring = greedy_color(&g, &order, &palette(0, d + 1)).unwrap();
        assert!(coloring.check_proper(&g).is_ok());
        assert!(coloring.colors_used() <= d + 1);
    }

    #[test]
    fn greedy_edgeless_single_color() {
        let g = empty_graph(10);
        let order: Vec<usize> = (0..10).collect();
        let coloring = greedy_color(&g, &order, &[1]).unwrap();
        assert!(coloring.assignment.iter().all(|&c| c == 1));
    }

    #[test]
    fn greedy_exhaustion_reports_vertex() {
        let g = complete_graph(3);
        let err = greedy_color(&g, &[0, 1, 2], &[1, 2]).unwrap_err();
        assert!(matches!(err, Error::Contradiction(_)));
    }

    #[test]
    fn set_algebra_roundtrip() {
        let a = VertexSet::from_iter(70, [0, 5, 63, 64, 69]);
        let b = VertexSet::from_iter(70, [5, 64]);
        assert_eq!(a.intersection(&b), b);
        assert_eq!(a.difference(&b).len(), 3);
        assert_eq!(a.union(&b), a);
        assert_eq!(a.complement().len(), 65);
        assert!(b.is_subset(&a));
    }
}
