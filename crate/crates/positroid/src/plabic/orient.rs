//! Perfect orientations, the matroids of a plabic graph, face weights of
//! directed networks and their inverse, and plabic boundary measurements.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::ops::ControlFlow;

use num_traits::One;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{PlabicGraph, PlabicNetwork};
use crate::embedding::{Dart, Embedding, HalfEdge};
use crate::error::{Error, Result};
use crate::exactmath::{fmt_rational, Matroid, PluckerVector, Rational, Subset};
use crate::network::measure;
use crate::network::PlanarDirectedNetwork;
use crate::network::{is_perfect, vertex_color};
use crate::positroid::Color;

/// A direction for every edge: `forward[e]` means end 0 → end 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PerfectOrientation {
    forward: Vec<Option<bool>>,
}

impl PerfectOrientation {
    pub fn is_forward(&self, e: usize) -> bool {
        self.forward[e].expect("edge has a direction")
    }

    pub fn tail(&self, g: &PlabicGraph, e: usize) -> usize {
        g.embedding().ends(e)[if self.is_forward(e) { 0 } else { 1 }]
    }

    pub fn head(&self, g: &PlabicGraph, e: usize) -> usize {
        g.embedding().ends(e)[if self.is_forward(e) { 1 } else { 0 }]
    }

    /// Whether the half-edge `h` points away from its vertex.
    pub fn is_out(&self, h: HalfEdge) -> bool {
        self.is_forward(h.edge) == (h.end == 0)
    }

    /// `I_O`: boundary labels whose edge points into the disk.
    pub fn source_set(&self, g: &PlabicGraph) -> Subset {
        (1..=g.n()).filter(|&i| g.embedding().rotation(i - 1).iter().all(|&h| self.is_out(h))).collect()
    }

    /// Checks the one-out (black) / one-in (white) rule at every internal vertex.
    pub fn check(&self, g: &PlabicGraph) -> Result<()> {
        let emb = g.embedding();
        for e in emb.edges() {
            if self.forward.get(e).copied().flatten().is_none() {
                return Err(Error::validation(format!("edge {e} has no direction")));
            }
        }
        for v in emb.internal_vertices() {
            let outs = emb.rotation(v).iter().filter(|&&h| self.is_out(h)).count();
            let special = match g.color(v) {
                Color::Black => outs,
                Color::White => emb.degree(v) - outs,
            };
            if special != 1 {
                return Err(Error::validation(format!("vertex {v} violates the perfect orientation rule")));
            }
        }
        Ok(())
    }
}

/// Edges in breadth-first order from the boundary, then the rest.
fn edge_order(emb: &Embedding) -> Vec<usize> {
    let mut seen_v = vec![false; emb.vertex_slots()];
    let mut seen_e = vec![false; emb.edge_slots()];
    let mut order = Vec::new();
    let mut starts: Vec<usize> = (0..emb.n()).collect();
    starts.extend(emb.internal_vertices());
    for s in starts {
        if seen_v[s] {
            continue;
        }
        seen_v[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &h in emb.rotation(v) {
                if !std::mem::replace(&mut seen_e[h.edge], true) {
                    order.push(h.edge);
                }
                let w = emb.across(h);
                if !std::mem::replace(&mut seen_v[w], true) {
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

struct OrientSearch<'a> {
    g: &'a PlabicGraph,
    order: Vec<usize>,
    forward: Vec<Option<bool>>,
    special: Vec<usize>,
    remaining: Vec<usize>,
}

impl OrientSearch<'_> {
    fn new(g: &PlabicGraph) -> OrientSearch<'_> {
        let emb = g.embedding();
        let remaining = (0..emb.vertex_slots()).map(|v| if emb.has_vertex(v) { emb.degree(v) } else { 0 }).collect();
        OrientSearch {
            g,
            order: edge_order(emb),
            forward: vec![None; emb.edge_slots()],
            special: vec![0; emb.vertex_slots()],
            remaining,
        }
    }

    fn is_special(&self, v: usize, out: bool) -> bool {
        match self.g.color(v) {
            Color::Black => out,
            Color::White => !out,
        }
    }

    /// Half-edge effects `(vertex, is_out)` of directing `e`.
    fn effects(&self, e: usize, fwd: bool) -> [(usize, bool); 2] {
        let [a, b] = self.g.embedding().ends(e);
        [(a, fwd), (b, !fwd)]
    }

    fn run<F: FnMut(&PerfectOrientation) -> ControlFlow<()>>(&mut self, idx: usize, visit: &mut F) -> ControlFlow<()> {
        if idx == self.order.len() {
            if self.g.embedding().internal_vertices().all(|v| self.special[v] == 1) {
                return visit(&PerfectOrientation { forward: self.forward.clone() });
            }
            return ControlFlow::Continue(());
        }
        let e = self.order[idx];
        for fwd in [true, false] {
            let eff = self.effects(e, fwd);
            for &(v, out) in &eff {
                self.remaining[v] -= 1;
                if self.g.is_internal(v) && self.is_special(v, out) {
                    self.special[v] += 1;
                }
            }
            let ok = eff.iter().all(|&(v, _)| {
                !self.g.is_internal(v) || (self.special[v] <= 1 && self.special[v] + self.remaining[v] >= 1)
            });
            let flow = if ok {
                self.forward[e] = Some(fwd);
                self.run(idx + 1, visit)
            } else {
                ControlFlow::Continue(())
            };
            for &(v, out) in &eff {
                self.remaining[v] += 1;
                if self.g.is_internal(v) && self.is_special(v, out) {
                    self.special[v] -= 1;
                }
            }
            self.forward[e] = None;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

fn search<F: FnMut(&PerfectOrientation) -> ControlFlow<()>>(g: &PlabicGraph, mut visit: F) {
    let emb = g.embedding();
    if emb.internal_vertices().any(|v| emb.degree(v) == 0) {
        return;
    }
    let _ = OrientSearch::new(g).run(0, &mut visit);
}

/// All perfect orientations, by backtracking over edges with per-vertex
/// degree constraints.
pub fn perfect_orientations(g: &PlabicGraph) -> Vec<PerfectOrientation> {
    let mut out = Vec::new();
    search(g, |o| {
        out.push(o.clone());
        ControlFlow::Continue(())
    });
    out
}

/// The first perfect orientation found, if any.
pub fn first_perfect_orientation(g: &PlabicGraph) -> Option<PerfectOrientation> {
    let mut out = None;
    search(g, |o| {
        out = Some(o.clone());
        ControlFlow::Break(())
    });
    out
}

fn not_orientable() -> Error {
    Error::precondition("the plabic graph has no perfect orientation")
}

/// `M_G`: source sets of all perfect orientations.
pub fn matroid(g: &PlabicGraph) -> Result<Matroid> {
    let mut bases = BTreeSet::new();
    search(g, |o| {
        bases.insert(o.source_set(g));
        ControlFlow::Continue(())
    });
    let k = bases.first().ok_or_else(not_orientable)?.len();
    Matroid::new(k, g.n(), bases)
}

/// The path matroid of a fixed orientation: `J` is a base when the sources
/// in `I_O ∖ J` can be joined to the sinks in `J ∖ I_O` by vertex-disjoint
/// directed paths.
pub fn path_matroid(g: &PlabicGraph, o: &PerfectOrientation) -> Result<Matroid> {
    o.check(g)?;
    let emb = g.embedding();
    let i_o = o.source_set(g);
    let k = i_o.len();
    let mut adj = vec![Vec::new(); emb.vertex_slots()];
    for e in emb.edges() {
        adj[o.tail(g, e)].push(o.head(g, e));
    }
    let bases = crate::exactmath::k_subsets(g.n(), k)
        .into_iter()
        .filter(|j| {
            let from: Vec<usize> = i_o.iter().filter(|x| !j.contains(x)).map(|x| x - 1).collect();
            let to: Vec<usize> = j.iter().filter(|x| !i_o.contains(x)).map(|x| x - 1).collect();
            disjoint_paths(&adj, &from, &to) == from.len()
        })
        .collect::<Vec<_>>();
    Matroid::new(k, g.n(), bases)
}

/// Maximum number of vertex-disjoint directed paths from `from` to `to`.
fn disjoint_paths(adj: &[Vec<usize>], from: &[usize], to: &[usize]) -> usize {
    // Split each vertex v into 2v (in) and 2v+1 (out) joined by a unit arc.
    let nv = adj.len();
    let (s, t) = (2 * nv, 2 * nv + 1);
    let mut cap: BTreeMap<(usize, usize), i32> = BTreeMap::new();
    let mut nbrs = vec![BTreeSet::new(); 2 * nv + 2];
    let mut arc = |a: usize, b: usize, cap: &mut BTreeMap<(usize, usize), i32>| {
        *cap.entry((a, b)).or_insert(0) += 1;
        cap.entry((b, a)).or_insert(0);
        nbrs[a].insert(b);
        nbrs[b].insert(a);
    };
    for (v, outs) in adj.iter().enumerate() {
        arc(2 * v, 2 * v + 1, &mut cap);
        for &w in outs {
            arc(2 * v + 1, 2 * w, &mut cap);
        }
    }
    for &v in from {
        arc(s, 2 * v, &mut cap);
    }
    for &v in to {
        arc(2 * v + 1, t, &mut cap);
    }
    let mut flow = 0;
    loop {
        let mut prev = vec![usize::MAX; 2 * nv + 2];
        prev[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in &nbrs[u] {
                if prev[w] == usize::MAX && cap[&(u, w)] > 0 {
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if prev[t] == usize::MAX {
            return flow;
        }
        let mut w = t;
        while w != s {
            let u = prev[w];
            *cap.get_mut(&(u, w)).expect("arc") -= 1;
            *cap.get_mut(&(w, u)).expect("arc") += 1;
            w = u;
        }
        flow += 1;
    }
}

/// Vertices and adjacency of the bipartite refinement: a vertex of the
/// opposite color is inserted in every unicolored edge, boundary vertices
/// count as white. Returns `(adjacency, is_boundary)`.
fn bipartite_refinement(g: &PlabicGraph) -> (Vec<Vec<usize>>, Vec<bool>) {
    let emb = g.embedding();
    let mut adj = vec![Vec::new(); emb.vertex_slots()];
    let mut boundary: Vec<bool> = (0..emb.vertex_slots()).map(|v| v < g.n()).collect();
    let color = |v: usize| if g.is_internal(v) { g.color(v) } else { Color::White };
    for e in emb.edges() {
        let [a, b] = emb.ends(e);
        if color(a) != color(b) {
            adj[a].push(b);
            adj[b].push(a);
        } else {
            let m = adj.len();
            adj.push(vec![a, b]);
            boundary.push(false);
            adj[a].push(m);
            adj[b].push(m);
        }
    }
    for (v, live) in (0..emb.vertex_slots()).map(|v| (v, emb.has_vertex(v))) {
        if !live {
            boundary[v] = true; // dead slots take no part in matchings
        }
    }
    (adj, boundary)
}

fn search_matchings(
    adj: &[Vec<usize>],
    boundary: &[bool],
    matched: &mut Vec<bool>,
    v: usize,
    visit: &mut dyn FnMut(&[bool]),
) {
    let Some(v) = (v..adj.len()).find(|&u| !boundary[u] && !matched[u]) else {
        visit(matched);
        return;
    };
    matched[v] = true;
    for idx in 0..adj[v].len() {
        let w = adj[v][idx];
        if !matched[w] {
            matched[w] = true;
            search_matchings(adj, boundary, matched, v + 1, visit);
            matched[w] = false;
        }
    }
    matched[v] = false;
}

/// Number of partial matchings (every internal vertex matched once) of the
/// bipartite refinement.
pub fn count_partial_matchings(g: &PlabicGraph) -> usize {
    let (adj, boundary) = bipartite_refinement(g);
    let mut matched = vec![false; adj.len()];
    let mut count = 0;
    search_matchings(&adj, &boundary, &mut matched, 0, &mut |_| count += 1);
    count
}

/// `{I_M}` over partial matchings `M` of the bipartite refinement, where
/// `I_M` lists the boundary vertices covered by `M`. Boundary vertices are
/// white, so a covered boundary vertex is the head of a black-to-white edge
/// and `I_M` is the sink set of the corresponding perfect orientation; this
/// matroid therefore consists of the complements of the bases of `M_G`.
pub fn matching_matroid(g: &PlabicGraph) -> Result<Matroid> {
    let (adj, boundary) = bipartite_refinement(g);
    let mut matched = vec![false; adj.len()];
    let mut bases = BTreeSet::new();
    let n = g.n();
    search_matchings(&adj, &boundary, &mut matched, 0, &mut |m| {
        bases.insert((1..=n).filter(|&i| m[i - 1]).collect::<Subset>());
    });
    let k = bases.first().ok_or_else(not_orientable)?.len();
    Matroid::new(k, n, bases)
}

/// Face weight contribution of a dart of a directed network: `x_e` when the
/// dart runs against the edge (edge clockwise around the face on the left),
/// `x_e^{-1}` otherwise.
fn dart_exponent(d: Dart) -> i32 {
    if d.forward {
        -1
    } else {
        1
    }
}

fn pow(x: &Rational, s: i32) -> Rational {
    if s > 0 {
        x.clone()
    } else {
        x.recip()
    }
}

/// Face weights of a perfect directed network: `y_f` is the product of
/// `x_e` over edges oriented clockwise around `f` and `x_e^{-1}` over
/// counterclockwise ones. Vertex colors come from the orientation.
pub fn face_weights(net: &PlanarDirectedNetwork) -> Result<PlabicNetwork> {
    if !is_perfect(net) {
        return Err(Error::precondition("face weights need a perfect network (one out-edge or one in-edge at every internal vertex, boundary degree 1)"));
    }
    let emb = net.embedding().clone();
    let mut colors = vec![None; emb.vertex_slots()];
    for v in emb.internal_vertices() {
        colors[v] = Some(if vertex_color(net, v) == Some(1) { Color::Black } else { Color::White });
    }
    let graph = PlabicGraph { emb, colors };
    let faces = graph.faces()?;
    let weights = faces
        .iter()
        .map(|f| {
            f.real_darts()
                .fold(Rational::one(), |acc, (e, fwd)| acc * pow(net.weight(e), dart_exponent(Dart::real(e, fwd))))
        })
        .collect();
    Ok(PlabicNetwork::from_parts_unchecked(graph, weights))
}

/// The directed network of `g` under orientation `o` with edge weights `x`
/// (indexed by edge id). Edge ends are relabelled so end 0 is the tail.
pub fn to_directed(g: &PlabicGraph, o: &PerfectOrientation, x: &[Rational]) -> Result<PlanarDirectedNetwork> {
    o.check(g)?;
    let mut emb = g.embedding().clone();
    for e in g.embedding().edges() {
        if o.is_forward(e) {
            continue;
        }
        let [a, b] = emb.ends(e);
        let (h0, h1) = (HalfEdge::new(e, 0), HalfEdge::new(e, 1));
        if a == b {
            let rot: Vec<HalfEdge> =
                emb.rotation(a).iter().map(|&h| if h.edge == e { h.opposite() } else { h }).collect();
            emb.set_rotation(a, rot);
        } else {
            emb.replace_half_edge(a, h0, h1);
            emb.replace_half_edge(b, h1, h0);
            emb.set_end(h0, b);
            emb.set_end(h1, a);
        }
    }
    let weights = (0..emb.edge_slots()).map(|e| emb.has_edge(e).then(|| x[e].clone())).collect();
    let sources = (1..=g.n()).map(|i| o.source_set(g).contains(&i)).collect();
    PlanarDirectedNetwork::from_parts(emb, weights, sources)
}

/// Edge weights on `o` whose face weights are those of `n`: edges of a
/// breadth-first spanning forest grown from the boundary (lowest label
/// first, rotation order) get weight 1, the remaining edges are solved face
/// by face.
pub fn edge_weights_from_faces(n: &PlabicNetwork, o: &PerfectOrientation) -> Result<PlanarDirectedNetwork> {
    edge_weights_impl(n, o, None)
}

/// As [`edge_weights_from_faces`] with the forest grown in a random order
/// determined by `seed`.
pub fn edge_weights_from_faces_seeded(
    n: &PlabicNetwork,
    o: &PerfectOrientation,
    seed: u64,
) -> Result<PlanarDirectedNetwork> {
    edge_weights_impl(n, o, Some(seed))
}

fn edge_weights_impl(n: &PlabicNetwork, o: &PerfectOrientation, seed: Option<u64>) -> Result<PlanarDirectedNetwork> {
    let g = n.graph();
    let prod: Rational = n.weights().iter().product();
    if !prod.is_one() {
        return Err(Error::precondition(format!("face weights multiply to {} instead of 1", fmt_rational(&prod))));
    }
    o.check(g)?;
    let emb = g.embedding();
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut in_tree = vec![false; emb.edge_slots()];
    let mut seen = vec![false; emb.vertex_slots()];
    let mut roots: Vec<usize> = (0..g.n()).collect();
    if let Some(r) = rng.as_mut() {
        roots.shuffle(r);
    }
    let mut queue: VecDeque<usize> = roots.iter().copied().collect();
    for &b in &roots {
        seen[b] = true;
    }
    while let Some(v) = queue.pop_front() {
        let mut rot = emb.rotation(v).to_vec();
        if let Some(r) = rng.as_mut() {
            rot.shuffle(r);
        }
        for h in rot {
            let w = emb.across(h);
            if !seen[w] {
                seen[w] = true;
                in_tree[h.edge] = true;
                queue.push_back(w);
            }
        }
    }
    let faces = g.faces()?;
    let mut x: Vec<Rational> = vec![Rational::one(); emb.edge_slots()];
    // Per face: the known part of the weight and the unknown edges with exponents.
    let mut known: Vec<Rational> = vec![Rational::one(); faces.len()];
    let mut unknown: Vec<BTreeMap<usize, i32>> = vec![BTreeMap::new(); faces.len()];
    let mut faces_of: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (f, face) in faces.iter().enumerate() {
        for (e, fwd) in face.real_darts() {
            if in_tree[e] {
                continue;
            }
            // direction relative to the orientation: a dart agreeing with o is "forward"
            let along = fwd == o.is_forward(e);
            *unknown[f].entry(e).or_insert(0) += dart_exponent(Dart::real(e, along));
            faces_of.entry(e).or_default().push(f);
        }
        unknown[f].retain(|_, s| *s != 0);
    }
    let mut solved = vec![false; emb.edge_slots()];
    let mut queue: VecDeque<usize> = (0..faces.len()).filter(|&f| unknown[f].len() == 1).collect();
    while let Some(f) = queue.pop_front() {
        if unknown[f].len() != 1 {
            continue;
        }
        let (&e, &s) = unknown[f].iter().next().expect("one unknown");
        let xe = pow(&(n.weight(f) / &known[f]), s);
        solved[e] = true;
        for &h in &faces_of[&e] {
            if let Some(sh) = unknown[h].remove(&e) {
                known[h] *= pow(&xe, sh);
                if unknown[h].len() == 1 {
                    queue.push_back(h);
                }
            }
        }
        x[e] = xe;
    }
    if let Some(f) = (0..faces.len()).find(|&f| !unknown[f].is_empty()) {
        return Err(Error::internal(format!("face {f} left with unsolved edge weights")));
    }
    if let Some(f) = (0..faces.len()).find(|&f| &known[f] != n.weight(f)) {
        return Err(Error::internal(format!("face {f} weight not reproduced")));
    }
    let _ = solved;
    to_directed(g, o, &x)
}

/// Boundary measurement of a plabic network: edge weights are rebuilt on
/// the first perfect orientation found and the directed network measured.
pub fn measure_plabic(n: &PlabicNetwork) -> Result<PluckerVector> {
    let o = first_perfect_orientation(n.graph()).ok_or_else(not_orientable)?;
    measure_plabic_with(n, &o)
}

/// Boundary measurement using a given perfect orientation.
pub fn measure_plabic_with(n: &PlabicNetwork, o: &PerfectOrientation) -> Result<PluckerVector> {
    let net = edge_weights_from_faces(n, o)?;
    measure(&net.compact())
}

#[cfg(test)]
mod tests {
    use super::super::tests_support::*;
    use super::*;
    use crate::exactmath::{matroid_of, q, qf};
    use crate::network::{boundary_measurement_matrix, gauge_transform};

    fn complement(m: &Matroid) -> BTreeSet<Subset> {
        m.bases().iter().map(|b| (1..=m.n()).filter(|x| !b.contains(x)).collect()).collect()
    }

    #[test]
    fn small_cases() {
        // a dipole floating next to a chord
        let mut g = PlabicGraph::new(2);
        g.add_edge(0, 1);
        let b = g.add_vertex(Color::Black);
        let w = g.add_vertex(Color::White);
        g.add_edge(b, w);
        assert_eq!(perfect_orientations(&g).len(), 2);
        let mut s = PlabicGraph::new(1);
        let v = s.add_vertex(Color::Black);
        s.add_edge(0, v);
        s.add_vertex(Color::White);
        assert!(perfect_orientations(&s).is_empty());
        assert!(matroid(&s).is_err());
        // leaves: single base = white leaf positions
        let l = leaves(5, &[2, 5]);
        let m = matroid(&l).unwrap();
        assert_eq!(m.bases().iter().collect::<Vec<_>>(), vec![&vec![2, 5]]);
    }

    #[test]
    fn bigon_matroids() {
        let g = bigon();
        let os = perfect_orientations(&g);
        assert_eq!(os.len(), 3);
        let m = matroid(&g).unwrap();
        assert_eq!(m.bases().iter().cloned().collect::<Vec<_>>(), vec![vec![1], vec![2]]);
        for o in &os {
            assert_eq!(path_matroid(&g, o).unwrap(), m);
        }
        assert_eq!(count_partial_matchings(&g), os.len());
        assert_eq!(matching_matroid(&g).unwrap().bases(), &complement(&m));
    }

    #[test]
    fn face_weight_round_trip() {
        let g = bigon();
        let net = PlabicNetwork::new(g.clone(), vec![q(3), qf(1, 6), q(2)]).unwrap();
        for o in perfect_orientations(&g) {
            let d = edge_weights_from_faces(&net, &o).unwrap();
            let back = face_weights(&d).unwrap();
            assert_eq!(back.weights(), net.weights());
            for seed in 0..4 {
                let d2 = edge_weights_from_faces_seeded(&net, &o, seed).unwrap();
                assert_eq!(face_weights(&d2).unwrap().weights(), net.weights());
                assert!(measure(&d2).unwrap().projectively_equal(&measure(&d).unwrap()));
            }
            // gauge invariance
            let internal: Vec<usize> = d.embedding().internal_vertices().collect();
            let t = internal.iter().enumerate().map(|(i, &v)| (v, q(i as i64 + 2))).collect();
            let dg = gauge_transform(&d, &t).unwrap();
            assert_eq!(face_weights(&dg).unwrap().weights(), net.weights());
        }
        let unit = PlabicNetwork::unit(g.clone()).unwrap();
        let o = first_perfect_orientation(&g).unwrap();
        let d = edge_weights_from_faces(&unit, &o).unwrap();
        assert!(d.edges().all(|e| d.weight(e).is_one()));
        let p = measure_plabic(&net).unwrap();
        assert_eq!(matroid_of(&boundary_measurement_matrix(&d).unwrap()).unwrap(), matroid(&g).unwrap());
        assert!(p.is_nonnegative());
    }
}
