//! Structural decomposition around an extremal complete multipartite
//! subgraph Q with part shape (1, ..., 1, t).
//!
//! `find_max_q` locates Q by exact search. The partition functions split
//! N(Q) into the regions A / B / Z / W the coloring recursion consumes,
//! together with the signature classes of W and the far layer N^{≥2}(Q).
//! `validate_lemmas` re-checks every structural inequality the recursion
//! relies on; each failure either yields a concrete forbidden-subgraph
//! witness or a strictly larger Q (the restart protocol), so the pipeline
//! stays total on arbitrary inputs.

use crate::detect::{find_independent_in, verify_broom, verify_ktt, BicliqueWitness, BroomWitness};
use crate::error::{Error, Result};
use crate::graph::{
    components, degeneracy_order, distance_layers, induced_subgraph, Graph, VertexSet,
};
use crate::oracle::{chromatic_number_unbounded, clique_number, ramsey_upper};

/// Induced complete q-partite subgraph with parts (1, ..., 1, t):
/// `singles` are the q-1 singleton parts in a fixed order, `last` the
/// independent part of size t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultipartiteQ {
    pub singles: Vec<usize>,
    pub last: VertexSet,
}

impl MultipartiteQ {
    pub fn q(&self) -> usize {
        self.singles.len() + 1
    }

    pub fn t(&self) -> usize {
        self.last.len()
    }

    pub fn vertex_set(&self, n: usize) -> VertexSet {
        let mut s = self.last.clone();
        for &v in &self.singles {
            assert!(v < n);
            s.insert(v);
        }
        s
    }

    /// Check the complete-multipartite shape, reporting the first failing
    /// pair.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.singles.is_empty() {
            return Err(Error::Input("Q needs at least two parts".into()));
        }
        if self.last.is_empty() {
            return Err(Error::Input("Q's last part is empty".into()));
        }
        let mut seen = self.last.clone();
        for &v in &self.singles {
            if v >= g.n() || seen.contains(v) {
                return Err(Error::Input(format!("part vertex {v} repeated or out of range")));
            }
            seen.insert(v);
        }
        if !g.is_independent(&self.last) {
            let (u, v) = g.first_edge_between(&self.last, &self.last).expect("edge");
            return Err(Error::Input(format!("last part not independent: edge {u}-{v}")));
        }
        for (i, &u) in self.singles.iter().enumerate() {
            for &v in self.singles.iter().skip(i + 1) {
                if !g.has_edge(u, v) {
                    return Err(Error::Input(format!("singles not adjacent: {u}-{v}")));
                }
            }
            for v in self.last.iter() {
                if !g.has_edge(u, v) {
                    return Err(Error::Input(format!("single {u} not adjacent to last-part {v}")));
                }
            }
        }
        Ok(())
    }
}

/// Exact search for a maximum-q multipartite Q: branch over cliques (the
/// singles) in ascending id order, keeping only branches whose common
/// neighborhood still holds an independent t-set. Returns None iff no vertex
/// has an independent t-set in its neighborhood.
pub fn find_max_q(g: &Graph, t: usize) -> Result<Option<MultipartiteQ>> {
    if t < 2 {
        return Err(Error::Input("decomposition needs t >= 2".into()));
    }
    let mut best: Option<MultipartiteQ> = None;
    let mut clique = Vec::new();
    extend_q(g, t, &mut clique, g.vertex_set(), &mut best);
    Ok(best)
}

fn extend_q(
    g: &Graph,
    t: usize,
    clique: &mut Vec<usize>,
    common: VertexSet,
    best: &mut Option<MultipartiteQ>,
) {
    let Some(tset) = find_independent_in(g, &common, t) else {
        return;
    };
    if !clique.is_empty() && best.as_ref().is_none_or(|b| clique.len() > b.singles.len()) {
        *best = Some(MultipartiteQ { singles: clique.clone(), last: tset });
    }
    let floor = clique.last().map_or(0, |&v| v + 1);
    let mut rest = common.clone();
    for v in common.iter() {
        rest.remove(v);
        if v < floor {
            continue;
        }
        if clique.len() + rest.len() + 1 <= best.as_ref().map_or(0, |b| b.singles.len()) {
            return;
        }
        clique.push(v);
        extend_q(g, t, clique, common.intersection(g.neighbors(v)), best);
        clique.pop();
    }
}

/// Grow Q by one part: the old last part is replaced by the singleton {v}
/// and the fresh independent t-set `extension` becomes the last part. This
/// is the restart step used whenever a maximality-dependent check fails.
pub fn improve_q(
    g: &Graph,
    q: &MultipartiteQ,
    v: usize,
    extension: &VertexSet,
) -> Result<MultipartiteQ> {
    if extension.len() != q.t() {
        return Err(Error::Input(format!(
            "extension has {} vertices, expected {}",
            extension.len(),
            q.t()
        )));
    }
    let mut singles = q.singles.clone();
    singles.push(v);
    let improved = MultipartiteQ { singles, last: extension.clone() };
    improved.validate(g)?;
    Ok(improved)
}

/// How membership in W_0 is decided: by small independence number of the
/// component, or by a chromatic bound (exact below the vertex cutoff,
/// degeneracy+1 above it).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum W0Mode {
    Independence,
    Chromatic { limit: u64, exact_cutoff: usize },
}

/// One component of G[W]: its vertices, whether it landed in W_0, and the
/// color budget the membership test established (component size in
/// independence mode, a chromatic bound in chromatic mode).
#[derive(Clone, Debug)]
pub struct WComponent {
    pub verts: VertexSet,
    pub in_w0: bool,
    pub color_budget: usize,
    pub budget_exact: bool,
}

/// The A/B/Z/W split of N(Q) plus everything downstream needs: signature
/// classes of W, the W_0 side, the qualifying components, and the far layer.
#[derive(Clone, Debug)]
pub struct NeighborhoodPartition {
    pub a: VertexSet,
    pub b: VertexSet,
    pub z: VertexSet,
    pub w: VertexSet,
    pub w0: VertexSet,
    /// N^{≥2}(Q), including any vertices unreachable from Q.
    pub far: VertexSet,
    /// Realized signature classes (I, W_I) over all of W, ordered by the
    /// least vertex of W_I.
    pub sig_classes: Vec<(VertexSet, VertexSet)>,
    /// Components of G[W] in min-id order.
    pub w_components: Vec<WComponent>,
    /// Connected pieces of W ∖ W_0 within one signature class: the X objects
    /// the Z-refinement quantifies over, in min-id order.
    pub x_components: Vec<VertexSet>,
    pub mode: W0Mode,
}

/// Partition with the independence-based W_0 rule (a component joins W_0
/// when it has no independent t-set).
pub fn partition_neighborhood_alpha(g: &Graph, q: &MultipartiteQ) -> NeighborhoodPartition {
    let t = q.t();
    partition_shared(g, q, W0Mode::Independence, |g, comp| {
        let has_tset = find_independent_in(g, comp, t).is_some();
        (!has_tset, comp.len(), true)
    })
}

/// Partition with the chromatic-bound W_0 rule.
pub fn partition_neighborhood_chi(
    g: &Graph,
    q: &MultipartiteQ,
    limit: u64,
    exact_cutoff: usize,
) -> NeighborhoodPartition {
    partition_shared(g, q, W0Mode::Chromatic { limit, exact_cutoff }, |g, comp| {
        let (sub, _) = induced_subgraph(g, comp).expect("component of g");
        if sub.n() <= exact_cutoff {
            let (chi, _) = chromatic_number_unbounded(&sub);
            (chi as u64 <= limit, chi, true)
        } else {
            let (_, d) = degeneracy_order(&sub);
            ((d + 1) as u64 <= limit, d + 1, false)
        }
    })
}

fn partition_shared(
    g: &Graph,
    q: &MultipartiteQ,
    mode: W0Mode,
    membership: impl Fn(&Graph, &VertexSet) -> (bool, usize, bool),
) -> NeighborhoodPartition {
    let n = g.n();
    let qset = q.vertex_set(n);
    let singles_set = VertexSet::from_iter(n, q.singles.iter().copied());
    let nq = g.set_neighborhood(&qset);

    let mut a = VertexSet::empty(n);
    let mut b = VertexSet::empty(n);
    let mut z = VertexSet::empty(n);
    let mut w = VertexSet::empty(n);
    for v in nq.iter() {
        let hits_last = q.last.intersection(g.neighbors(v)).len();
        if hits_last == q.t() {
            z.insert(v);
        } else if hits_last == 0 {
            w.insert(v);
        } else if singles_set.is_subset(g.neighbors(v)) {
            b.insert(v);
        } else {
            a.insert(v);
        }
    }

    let layers = distance_layers(g, &qset).expect("Q nonempty");
    let far = layers.at_least(2).union(&layers.residue);

    let mut sig_classes: Vec<(VertexSet, VertexSet)> = Vec::new();
    for v in w.iter() {
        let sig = singles_set.intersection(g.neighbors(v));
        match sig_classes.iter_mut().find(|(i, _)| *i == sig) {
            Some((_, class)) => class.insert(v),
            None => {
                let mut class = VertexSet::empty(n);
                class.insert(v);
                sig_classes.push((sig, class));
            }
        }
    }
    sig_classes.sort_by_key(|(_, class)| class.min());

    let mut w0 = VertexSet::empty(n);
    let mut w_components = Vec::new();
    for comp in components(g, &w) {
        let (in_w0, color_budget, budget_exact) = membership(g, &comp);
        if in_w0 {
            w0 = w0.union(&comp);
        }
        w_components.push(WComponent { verts: comp, in_w0, color_budget, budget_exact });
    }

    let mut x_components = Vec::new();
    for (_, class) in &sig_classes {
        for comp in components(g, &class.difference(&w0)) {
            x_components.push(comp);
        }
    }
    x_components.sort_by_key(|c| c.min());

    NeighborhoodPartition { a, b, z, w, w0, far, sig_classes, w_components, x_components, mode }
}

/// The coarsest partition of Z that refines every bipartition
/// (complete-to-X, rest) over the qualifying components X, plus the per-X
/// sets the palette sharing needs.
#[derive(Clone, Debug)]
pub struct ZRefinement {
    /// Blocks S_1..S_p ordered by least vertex id.
    pub blocks: Vec<VertexSet>,
    pub links: Vec<XLink>,
}

/// How one qualifying component X relates to the Z-blocks.
#[derive(Clone, Debug)]
pub struct XLink {
    /// Index into `NeighborhoodPartition::x_components`.
    pub x_index: usize,
    /// Z-vertices complete to X.
    pub z_complete: VertexSet,
    /// Block indices anticomplete to X; every other block is complete to X.
    pub anticomplete_blocks: Vec<usize>,
}

/// Build the Z-refinement. Fails with a broom witness if some Z-vertex is
/// neutral to a qualifying component, which cannot happen for t-broom-free
/// inputs.
pub fn refine_z(
    g: &Graph,
    q: &MultipartiteQ,
    part: &NeighborhoodPartition,
) -> std::result::Result<ZRefinement, Box<Violation>> {
    let n = g.n();
    let mut z_complete_per_x = Vec::with_capacity(part.x_components.len());
    for x in &part.x_components {
        let mut z_complete = VertexSet::empty(n);
        for zv in part.z.iter() {
            match attachment(g, zv, x) {
                Attachment::Complete => z_complete.insert(zv),
                Attachment::Anticomplete => {}
                Attachment::Neutral => {
                    let witness = neutral_attachment_broom(g, q, zv, x);
                    return Err(Box::new(Violation::MixedAttachment { witness }));
                }
            }
        }
        z_complete_per_x.push(z_complete);
    }

    // group Z by its membership vector over the X components
    let mut blocks: Vec<(Vec<bool>, VertexSet)> = Vec::new();
    for zv in part.z.iter() {
        let key: Vec<bool> = z_complete_per_x.iter().map(|zc| zc.contains(zv)).collect();
        match blocks.iter_mut().find(|(k, _)| *k == key) {
            Some((_, block)) => block.insert(zv),
            None => {
                let mut block = VertexSet::empty(n);
                block.insert(zv);
                blocks.push((key, block));
            }
        }
    }
    blocks.sort_by_key(|(_, b)| b.min());
    let blocks: Vec<VertexSet> = blocks.into_iter().map(|(_, b)| b).collect();

    let links = z_complete_per_x
        .into_iter()
        .enumerate()
        .map(|(x_index, z_complete)| {
            let anticomplete_blocks = blocks
                .iter()
                .enumerate()
                .filter(|(_, b)| b.is_disjoint(&z_complete))
                .map(|(k, _)| k)
                .collect();
            XLink { x_index, z_complete, anticomplete_blocks }
        })
        .collect();

    Ok(ZRefinement { blocks, links })
}

enum Attachment {
    Complete,
    Anticomplete,
    Neutral,
}

fn attachment(g: &Graph, v: usize, set: &VertexSet) -> Attachment {
    let hits = g.neighbors(v).intersection(set).len();
    if hits == set.len() {
        Attachment::Complete
    } else if hits == 0 {
        Attachment::Anticomplete
    } else {
        Attachment::Neutral
    }
}

/// For z neutral to connected X: find an edge w-w' inside X with z ~ w,
/// z !~ w'; the broom hangs the last part off z.
fn neutral_attachment_broom(g: &Graph, q: &MultipartiteQ, z: usize, x: &VertexSet) -> BroomWitness {
    let inside = g.neighbors(z).intersection(x);
    for w in inside.iter() {
        let outside = g.neighbors(w).intersection(x).difference(&inside);
        if let Some(wp) = outside.min() {
            let witness = BroomWitness::new(z, w, wp, &q.last);
            debug_assert!(verify_broom(g, &witness));
            return witness;
        }
    }
    unreachable!("neutral attachment to a connected component always has a boundary edge")
}

/// One failed structural check. Violations carrying a witness prove the
/// input lies outside the class; the two Q-extension variants feed the
/// restart protocol; `ZLevelOversized` is advisory (no witness is
/// constructible from it alone).
#[derive(Clone, Debug)]
pub enum Violation {
    /// A neighbor of Q is complete to V(Q): Q extends by (v, last part).
    QExtendableByVertex { v: usize },
    /// A vertex of B sees an independent t-set inside B: Q extends by it.
    QExtendableInB { v: usize, extension: VertexSet },
    /// Max degree inside N^{≥2}(Q) reached 3·R(t, ω).
    FarDegreeExceeded { witness: BroomWitness },
    /// |A| reached t²·ω·R(t, ω).
    ANeighborhoodOversized { witness: BroomWitness },
    /// An edge joins two different signature classes of W.
    SignatureCrossEdge { witness: BroomWitness },
    /// A Z-vertex is neutral to a qualifying W-component.
    MixedAttachment { witness: BroomWitness },
    /// Two Z-vertices that the refinement requires to be adjacent are not.
    ZLinkMissing { witness: BroomWitness },
    /// Z contains an independent t-set (biclique with the last part).
    ZIndependentSet { witness: BicliqueWitness },
    /// Too many Z-vertices avoid one single vertex of Q.
    ZSingleAvoiders { single: usize, witness: BicliqueWitness },
    /// Advisory size check on the Z-level classes.
    ZLevelOversized { level: usize, size: usize, bound: u64 },
}

impl Violation {
    /// The (v, T) pair to feed `improve_q`, when this violation is a restart
    /// trigger.
    pub fn improvement<'a>(&'a self, q: &'a MultipartiteQ) -> Option<(usize, &'a VertexSet)> {
        match self {
            Violation::QExtendableByVertex { v } => Some((*v, &q.last)),
            Violation::QExtendableInB { v, extension } => Some((*v, extension)),
            _ => None,
        }
    }

    pub fn broom(&self) -> Option<&BroomWitness> {
        match self {
            Violation::FarDegreeExceeded { witness }
            | Violation::ANeighborhoodOversized { witness }
            | Violation::SignatureCrossEdge { witness }
            | Violation::MixedAttachment { witness }
            | Violation::ZLinkMissing { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn biclique(&self) -> Option<&BicliqueWitness> {
        match self {
            Violation::ZIndependentSet { witness } | Violation::ZSingleAvoiders { witness, .. } => {
                Some(witness)
            }
            _ => None,
        }
    }

    pub fn is_advisory(&self) -> bool {
        matches!(self, Violation::ZLevelOversized { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Violation::QExtendableByVertex { .. } => "q-extendable-by-vertex",
            Violation::QExtendableInB { .. } => "q-extendable-in-b",
            Violation::FarDegreeExceeded { .. } => "far-degree-exceeded",
            Violation::ANeighborhoodOversized { .. } => "a-oversized",
            Violation::SignatureCrossEdge { .. } => "signature-cross-edge",
            Violation::MixedAttachment { .. } => "mixed-attachment",
            Violation::ZLinkMissing { .. } => "z-link-missing",
            Violation::ZIndependentSet { .. } => "z-independent-set",
            Violation::ZSingleAvoiders { .. } => "z-single-avoiders",
            Violation::ZLevelOversized { .. } => "z-level-oversized",
        }
    }
}

/// Find an independent k-set that a size threshold guarantees: the pool lies
/// inside some vertex's neighborhood, so its clique number stays below ω and
/// any pool of at least R(k, ω) vertices must contain one.
pub(crate) fn guaranteed_independent(
    g: &Graph,
    pool: &VertexSet,
    k: usize,
    context: &str,
) -> Result<VertexSet> {
    find_independent_in(g, pool, k).ok_or_else(|| {
        Error::Contradiction(format!(
            "independent {k}-set missing from a pool of {} vertices ({context})",
            pool.len()
        ))
    })
}

/// Re-check every structural inequality of the decomposition.
///
/// Maximality-dependent checks run first; if any fires, the function
/// returns immediately so the caller can restart with a larger Q before the
/// remaining checks (which assume no neighbor of Q is complete to it) run.
/// Errors signal violated internal invariants only, never class membership.
pub fn validate_lemmas(
    g: &Graph,
    t: usize,
    q: &MultipartiteQ,
    part: &NeighborhoodPartition,
) -> Result<Vec<Violation>> {
    let n = g.n();
    let (omega, _) = clique_number(g);
    let rt = ramsey_upper(t, omega);
    let qset = q.vertex_set(n);
    let mut out = Vec::new();

    // restart triggers: vertices that let Q grow
    let nq = g.set_neighborhood(&qset);
    for v in nq.iter() {
        if qset.is_subset(g.neighbors(v)) {
            out.push(Violation::QExtendableByVertex { v });
        }
    }
    for v in part.b.iter() {
        let bn = g.neighbors(v).intersection(&part.b);
        if bn.len() as u64 >= rt {
            let extension = guaranteed_independent(g, &bn, t, "dense B neighborhood")?;
            out.push(Violation::QExtendableInB { v, extension });
        }
    }
    if !out.is_empty() {
        return Ok(out);
    }

    // |A| bound
    let a_bound = (t * t) as u64 * omega as u64 * rt;
    if part.a.len() as u64 >= a_bound {
        let witness = oversized_a_broom(g, t, q, &part.a)?;
        out.push(Violation::ANeighborhoodOversized { witness });
    }

    // far-layer degree bound
    for v in part.far.iter() {
        let far_deg = g.neighbors(v).intersection(&part.far).len() as u64;
        if far_deg >= 3 * rt {
            let witness = far_degree_broom(g, t, q, part, v, rt)?;
            out.push(Violation::FarDegreeExceeded { witness });
            break;
        }
    }

    // signature classes pairwise anticomplete
    'classes: for (i, (sig_i, class_i)) in part.sig_classes.iter().enumerate() {
        for (sig_j, class_j) in part.sig_classes.iter().skip(i + 1) {
            if let Some((w1, w2)) = g.first_edge_between(class_i, class_j) {
                let (anchor, stem, tip) = match sig_i.difference(sig_j).min() {
                    Some(a) => (a, w1, w2),
                    None => {
                        (sig_j.difference(sig_i).min().expect("distinct signatures"), w2, w1)
                    }
                };
                let witness = BroomWitness::new(anchor, stem, tip, &q.last);
                debug_assert!(verify_broom(g, &witness));
                out.push(Violation::SignatureCrossEdge { witness });
                break 'classes;
            }
        }
    }

    // every Z-vertex complete or anticomplete to every qualifying component
    let mut attachment_clean = true;
    'attach: for x in &part.x_components {
        for zv in part.z.iter() {
            if matches!(attachment(g, zv, x), Attachment::Neutral) {
                let witness = neutral_attachment_broom(g, q, zv, x);
                out.push(Violation::MixedAttachment { witness });
                attachment_clean = false;
                break 'attach;
            }
        }
    }

    match part.mode {
        W0Mode::Independence => {
            // complete-to-X sets must dominate the rest of Z
            if attachment_clean {
                'links: for x in &part.x_components {
                    let z_complete = VertexSet::from_iter(
                        n,
                        part.z
                            .iter()
                            .filter(|&zv| matches!(attachment(g, zv, x), Attachment::Complete)),
                    );
                    let z_rest = part.z.difference(&z_complete);
                    for zc in z_complete.iter() {
                        let missing = z_rest.difference(g.neighbors(zc));
                        if let Some(zr) = missing.min() {
                            let leaves = guaranteed_independent(g, x, t, "qualifying component")?;
                            let anchor = q.last.min().expect("last part nonempty");
                            let witness = BroomWitness::new(zc, anchor, zr, &leaves);
                            debug_assert!(verify_broom(g, &witness));
                            out.push(Violation::ZLinkMissing { witness });
                            break 'links;
                        }
                    }
                }
            }
        }
        W0Mode::Chromatic { .. } => {
            // Z cannot hold an independent t-set
            if let Some(tset) = find_independent_in(g, &part.z, t) {
                let witness = BicliqueWitness::new(&tset, &q.last);
                debug_assert!(verify_ktt(g, &witness));
                out.push(Violation::ZIndependentSet { witness });
            }
            // per-single avoiders inside Z
            let rt1 = ramsey_upper(t - 1, omega);
            for &single in &q.singles {
                let avoiders = part.z.difference(g.neighbors(single));
                if avoiders.len() as u64 >= rt1 {
                    let small =
                        guaranteed_independent(g, &avoiders, t - 1, "single avoiders in Z")?;
                    let mut left = small.clone();
                    left.insert(single);
                    let witness = BicliqueWitness::new(&left, &q.last);
                    debug_assert!(verify_ktt(g, &witness));
                    out.push(Violation::ZSingleAvoiders { single, witness });
                }
            }
            // advisory level sizes
            let mut level_counts = vec![0usize; q.singles.len() + 1];
            for zv in part.z.iter() {
                let misses = q.singles.iter().filter(|&&s| !g.has_edge(zv, s)).count();
                level_counts[misses] += 1;
            }
            for (level, &size) in level_counts.iter().enumerate().skip(1) {
                let bound = ramsey_upper(t, level + 1);
                if size as u64 >= bound {
                    out.push(Violation::ZLevelOversized { level, size, bound });
                }
            }
        }
    }

    Ok(out)
}

/// Extract a broom from an oversized A: some label class (adjacent last-part
/// vertex, missing last-part vertex, missing single) collects R(t, ω)
/// members, and an independent t-set among them hangs off that label.
fn oversized_a_broom(g: &Graph, t: usize, q: &MultipartiteQ, a: &VertexSet) -> Result<BroomWitness> {
    let n = g.n();
    let mut classes: Vec<((usize, usize, usize), VertexSet)> = Vec::new();
    for v in a.iter() {
        let aq = q
            .last
            .intersection(g.neighbors(v))
            .min()
            .expect("A is neutral to the last part");
        let bq = q.last.difference(g.neighbors(v)).min().expect("A is neutral to the last part");
        let j = q
            .singles
            .iter()
            .copied()
            .find(|&s| !g.has_edge(v, s))
            .expect("A is not complete to the singles");
        let key = (aq, bq, j);
        match classes.iter_mut().find(|(k, _)| *k == key) {
            Some((_, class)) => class.insert(v),
            None => {
                let mut class = VertexSet::empty(n);
                class.insert(v);
                classes.push((key, class));
            }
        }
    }
    let ((aq, bq, j), class) = classes
        .into_iter()
        .max_by_key(|(k, class)| (class.len(), std::cmp::Reverse(*k)))
        .expect("oversized A is nonempty");
    let leaves = guaranteed_independent(g, &class, t, "A label class")?;
    let witness = BroomWitness::new(aq, j, bq, &leaves);
    if !verify_broom(g, &witness) {
        return Err(Error::Contradiction("A-class broom failed verification".into()));
    }
    Ok(witness)
}

/// Extract a broom from a far vertex with 3R(t, ω) far-neighbors, walking an
/// induced path back to Q and splitting the heavy neighborhood by adjacency
/// to the two preceding path vertices.
fn far_degree_broom(
    g: &Graph,
    t: usize,
    q: &MultipartiteQ,
    part: &NeighborhoodPartition,
    heavy: usize,
    rt: u64,
) -> Result<BroomWitness> {
    let n = g.n();
    let qset = q.vertex_set(n);
    let layers = distance_layers(g, &qset).expect("Q nonempty");
    let k = layers
        .layers
        .iter()
        .position(|layer| layer.contains(heavy))
        .map(|i| i + 1)
        .ok_or_else(|| Error::Contradiction("heavy far vertex unreachable from Q".into()))?;

    // induced path path[k] = heavy, ..., path[1] in N(Q), path[0] in Q
    let mut path = vec![heavy];
    for depth in (1..k).rev() {
        let prev = *path.last().expect("nonempty");
        let next = g
            .neighbors(prev)
            .intersection(&layers.layers[depth - 1])
            .min()
            .ok_or_else(|| Error::Contradiction("broken layer chain".into()))?;
        path.push(next);
    }
    let z1 = *path.last().expect("nonempty");
    let z0 = g
        .neighbors(z1)
        .intersection(&qset)
        .min()
        .ok_or_else(|| Error::Contradiction("layer-1 vertex without Q neighbor".into()))?;
    path.push(z0);
    path.reverse();

    // a neighbor and a non-neighbor of path[1] inside Q, in different parts
    let (ai, aj) = q_neighbor_split(g, q, path[1])?;

    let m = g.neighbors(heavy).intersection(&part.far);
    let m_close = m.intersection(g.neighbors(path[k - 2]));
    if k >= 3 {
        if let Some(leaves) = find_independent_in(g, &m_close, t) {
            let witness = if k == 3 {
                BroomWitness::new(path[1], ai, aj, &leaves)
            } else {
                BroomWitness::new(path[k - 2], path[k - 3], path[k - 4], &leaves)
            };
            if !verify_broom(g, &witness) {
                return Err(Error::Contradiction("far-path broom failed verification".into()));
            }
            return Ok(witness);
        }
    }
    let m_far = m.difference(g.neighbors(path[k - 2]));
    let m_off_stem = m_far.difference(g.neighbors(path[k - 1]));
    if m_off_stem.len() as u64 >= rt {
        let leaves = guaranteed_independent(g, &m_off_stem, t, "far split off the stem")?;
        let witness = BroomWitness::new(heavy, path[k - 1], path[k - 2], &leaves);
        if !verify_broom(g, &witness) {
            return Err(Error::Contradiction("far-tail broom failed verification".into()));
        }
        return Ok(witness);
    }
    let m_on_stem = m_far.intersection(g.neighbors(path[k - 1]));
    if m_on_stem.len() as u64 >= rt {
        let leaves = guaranteed_independent(g, &m_on_stem, t, "far split on the stem")?;
        let witness = if k == 2 {
            BroomWitness::new(path[1], ai, aj, &leaves)
        } else {
            BroomWitness::new(path[k - 1], path[k - 2], path[k - 3], &leaves)
        };
        if !verify_broom(g, &witness) {
            return Err(Error::Contradiction("far-stem broom failed verification".into()));
        }
        return Ok(witness);
    }
    Err(Error::Contradiction("far neighborhood of size 3R split into three small parts".into()))
}

/// A neighbor and a non-neighbor of v inside Q lying in different parts.
/// Exists whenever v touches Q but is not complete to it.
fn q_neighbor_split(g: &Graph, q: &MultipartiteQ, v: usize) -> Result<(usize, usize)> {
    let mut parts: Vec<VertexSet> =
        q.singles.iter().map(|&s| VertexSet::from_iter(g.n(), [s])).collect();
    parts.push(q.last.clone());
    for (i, part_i) in parts.iter().enumerate() {
        for (j, part_j) in parts.iter().enumerate() {
            if i == j {
                continue;
            }
            let hit = part_i.intersection(g.neighbors(v)).min();
            let miss = part_j.difference(g.neighbors(v)).min();
            if let (Some(a), Some(b)) = (hit, miss) {
                return Ok((a, b));
            }
        }
    }
    Err(Error::Contradiction(format!(
        "vertex {v} has no split pair in Q (complete or anticomplete to it)"
    )))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle_graph, empty_graph, path_graph, Graph};

    #[test]
    fn no_q_in_complete_graph() {
        assert!(find_max_q(&complete_graph(4), 2).unwrap().is_none());
    }

    #[test]
    fn diamond_reaches_three_parts() {
        // K4 minus the edge 2-3
        let g = Graph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let q = find_max_q(&g, 2).unwrap().unwrap();
        assert_eq!(q.q(), 3);
        assert_eq!(q.singles, vec![0, 1]);
        assert_eq!(q.last, VertexSet::from_iter(4, [2, 3]));
        q.validate(&g).unwrap();
        // q can never exceed omega, and omega = 3 here
        assert_eq!(clique_number(&g).0, 3);
    }

    #[test]
    fn cycle5_q_is_two_parts() {
        let g = cycle_graph(5);
        let q = find_max_q(&g, 2).unwrap().unwrap();
        assert_eq!(q.q(), 2);
        q.validate(&g).unwrap();
        // exhaustive: no edge of C5 has a common independent pair
        for (u, v) in g.edges() {
            let common = g.neighbors(u).intersection(g.neighbors(v));
            assert!(find_independent_in(&g, &common, 2).is_none());
        }
    }

    #[test]
    fn improve_grows_q() {
        // singles {0,1} joined to independent pair {2,3}; vertex 4 complete
        // to the singles with its own independent pair {5,6}
        let g = Graph::new(
            7,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (0, 4),
                (1, 4),
                (4, 5),
                (4, 6),
                (0, 5),
                (0, 6),
                (1, 5),
                (1, 6),
            ],
        )
        .unwrap();
        let q = MultipartiteQ { singles: vec![0, 1], last: VertexSet::from_iter(7, [2, 3]) };
        q.validate(&g).unwrap();
        let better = improve_q(&g, &q, 4, &VertexSet::from_iter(7, [5, 6])).unwrap();
        assert_eq!(better.q(), 4);
        better.validate(&g).unwrap();
    }

    #[test]
    fn improve_rejects_bad_extension() {
        let g = path_graph(4);
        let q = MultipartiteQ { singles: vec![1], last: VertexSet::from_iter(4, [0, 2]) };
        q.validate(&g).unwrap();
        assert!(improve_q(&g, &q, 3, &VertexSet::from_iter(4, [0, 2])).is_err());
    }

    #[test]
    fn partition_cycle5() {
        let g = cycle_graph(5);
        let q = MultipartiteQ { singles: vec![0], last: VertexSet::from_iter(5, [1, 4]) };
        q.validate(&g).unwrap();
        let part = partition_neighborhood_alpha(&g, &q);
        assert_eq!(part.a, VertexSet::from_iter(5, [2, 3]));
        assert!(part.b.is_empty());
        assert!(part.z.is_empty());
        assert!(part.w.is_empty());
        assert!(part.far.is_empty());
    }

    #[test]
    fn partition_path4() {
        // a-b-c-d with Q = ({b}, {a,c})
        let g = path_graph(4);
        let q = MultipartiteQ { singles: vec![1], last: VertexSet::from_iter(4, [0, 2]) };
        let part = partition_neighborhood_alpha(&g, &q);
        assert_eq!(part.a, VertexSet::from_iter(4, [3]));
        assert!(part.b.is_empty() && part.z.is_empty() && part.w.is_empty());
    }

    #[test]
    fn partition_star_all_empty() {
        // K_{1,2} with Q covering the whole graph
        let g = path_graph(3);
        let q = MultipartiteQ { singles: vec![1], last: VertexSet::from_iter(3, [0, 2]) };
        let part = partition_neighborhood_alpha(&g, &q);
        assert!(part.a.is_empty() && part.b.is_empty() && part.z.is_empty());
        assert!(part.w.is_empty() && part.far.is_empty());
    }

    /// Q = ({0}, {1,2}); two qualifying path components in W; two linked
    /// Z-vertices attached crosswise.
    ///
    /// The crosswise shape itself forces a chair (center z1, stem z2, tip in
    /// X2, leaves an independent pair of X1), so no chair-free graph realizes
    /// it; the refinement is a purely structural computation and is exercised
    /// on the configuration directly.
    pub(crate) fn crosswise_fixture() -> (Graph, MultipartiteQ) {
        let mut edges = vec![(0, 1), (0, 2)];
        // components X1 = 3-4-5 and X2 = 6-7-8, all adjacent to the single 0
        for v in 3..=8 {
            edges.push((0, v));
        }
        edges.extend([(3, 4), (4, 5), (6, 7), (7, 8)]);
        // z1 = 9 complete to X1, z2 = 10 complete to X2, both complete to {1,2}
        for z in [9, 10] {
            edges.push((z, 0));
            edges.push((z, 1));
            edges.push((z, 2));
        }
        edges.extend([(9, 3), (9, 4), (9, 5), (10, 6), (10, 7), (10, 8), (9, 10)]);
        let g = Graph::new(11, &edges).unwrap();
        let q = MultipartiteQ { singles: vec![0], last: VertexSet::from_iter(11, [1, 2]) };
        q.validate(&g).unwrap();
        (g, q)
    }

    #[test]
    fn refine_z_crosswise() {
        let (g, q) = crosswise_fixture();
        let part = partition_neighborhood_alpha(&g, &q);
        assert_eq!(part.z, VertexSet::from_iter(11, [9, 10]));
        assert_eq!(part.x_components.len(), 2);
        assert!(part.w0.is_empty());
        let refinement = refine_z(&g, &q, &part).unwrap();
        assert_eq!(refinement.blocks.len(), 2);
        assert_eq!(refinement.blocks[0], VertexSet::from_iter(11, [9]));
        assert_eq!(refinement.blocks[1], VertexSet::from_iter(11, [10]));
        // X1 (containing 3) is anticomplete to z2's block and vice versa
        let x1 = part.x_components.iter().position(|x| x.contains(3)).unwrap();
        let x2 = part.x_components.iter().position(|x| x.contains(6)).unwrap();
        assert_eq!(refinement.links[x1].anticomplete_blocks, vec![1]);
        assert_eq!(refinement.links[x2].anticomplete_blocks, vec![0]);
    }

    #[test]
    fn refine_z_trivial_cases() {
        let g = cycle_graph(5);
        let q = MultipartiteQ { singles: vec![0], last: VertexSet::from_iter(5, [1, 4]) };
        let part = partition_neighborhood_alpha(&g, &q);
        let refinement = refine_z(&g, &q, &part).unwrap();
        assert!(refinement.blocks.is_empty());
    }

    #[test]
    fn refine_z_single_block_complete() {
        // one Z-vertex complete to the lone qualifying component
        let mut edges = vec![(0, 1), (0, 2)];
        for v in 3..=5 {
            edges.push((0, v));
        }
        edges.extend([(3, 4), (4, 5)]);
        edges.extend([(6, 1), (6, 2), (6, 3), (6, 4), (6, 5)]);
        let g = Graph::new(7, &edges).unwrap();
        let q = MultipartiteQ { singles: vec![0], last: VertexSet::from_iter(7, [1, 2]) };
        let part = partition_neighborhood_alpha(&g, &q);
        let refinement = refine_z(&g, &q, &part).unwrap();
        assert_eq!(refinement.blocks.len(), 1);
        assert!(refinement.links[0].anticomplete_blocks.is_empty());
    }

    #[test]
    fn validate_clean_on_chair_free_graphs() {
        for g in [cycle_graph(5), path_graph(4), crate::graph::complete_multipartite(&[2, 3, 1])] {
            if let Some(q) = find_max_q(&g, 2).unwrap() {
                let part = partition_neighborhood_alpha(&g, &q);
                let violations = validate_lemmas(&g, 2, &q, &part).unwrap();
                assert!(violations.is_empty(), "{violations:?} on {g:?}");
            }
        }
    }

    #[test]
    fn validate_flags_oversized_a() {
        // hub 1 with 16 otherwise-isolated neighbors, plus Q = ({0}, {1,2})
        let mut edges = vec![(0, 1), (0, 2)];
        for v in 3..19 {
            edges.push((1, v));
        }
        let g = Graph::new(19, &edges).unwrap();
        let q = find_max_q(&g, 2).unwrap().unwrap();
        assert_eq!(q.q(), 2);
        let part = partition_neighborhood_alpha(&g, &q);
        let violations = validate_lemmas(&g, 2, &q, &part).unwrap();
        let oversized = violations
            .iter()
            .find(|v| matches!(v, Violation::ANeighborhoodOversized { .. }))
            .expect("oversized A violation");
        assert!(verify_broom(&g, oversized.broom().unwrap()));
    }

    #[test]
    fn validate_extracts_far_degree_broom() {
        // Q = ({0}, {1,2}); 3 in N(Q) via 1; 4 at distance 2 with six
        // independent far neighbors
        let mut edges = vec![(0, 1), (0, 2), (3, 1), (3, 4)];
        for v in 5..11 {
            edges.push((4, v));
        }
        let g = Graph::new(11, &edges).unwrap();
        let q = MultipartiteQ { singles: vec![0], last: VertexSet::from_iter(11, [1, 2]) };
        q.validate(&g).unwrap();
        let part = partition_neighborhood_alpha(&g, &q);
        assert!(part.far.contains(4));
        let violations = validate_lemmas(&g, 2, &q, &part).unwrap();
        let far = violations
            .iter()
            .find(|v| matches!(v, Violation::FarDegreeExceeded { .. }))
            .expect("far degree violation");
        assert!(verify_broom(&g, far.broom().unwrap()));
    }

    #[test]
    fn validate_flags_dense_b_as_restart() {
        // Q = ({0}, {1,2}) deliberately non-maximum: vertex 3 sits in B with
        // four independent B-neighbors, enough to rebuild a larger Q
        let mut edges = vec![(0, 1), (0, 2)];
        for v in 3..=7 {
            edges.push((v, 0));
            edges.push((v, 1));
        }
        edges.extend([(3, 4), (3, 5), (3, 6), (3, 7)]);
        let g = Graph::new(8, &edges).unwrap();
        let q = MultipartiteQ { singles: vec![0], last: VertexSet::from_iter(8, [1, 2]) };
        q.validate(&g).unwrap();
        let part = partition_neighborhood_alpha(&g, &q);
        assert_eq!(part.b, VertexSet::from_iter(8, [3, 4, 5, 6, 7]));
        assert_eq!(clique_number(&g).0, 4);
        let violations = validate_lemmas(&g, 2, &q, &part).unwrap();
        let (v, ext) = violations
            .iter()
            .find_map(|viol| viol.improvement(&q).map(|(v, e)| (v, e.clone())))
            .expect("restart trigger");
        let improved = improve_q(&g, &q, v, &ext).unwrap();
        assert_eq!(improved.q(), q.q() + 1);
    }

    #[test]
    fn empty_graph_has_no_q() {
        assert!(find_max_q(&empty_graph(5), 2).unwrap().is_none());
    }
}
