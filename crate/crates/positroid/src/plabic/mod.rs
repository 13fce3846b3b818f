//! Plabic graphs and networks: faces and face weights, perfect orientations
//! and matroids, moves and reductions, trips and reducedness, conversions
//! from Le-diagrams and decorated permutations, and removable edges.

mod convert;
#[cfg(test)]
mod cross_tests;
mod moves;
mod orient;
mod random;
mod reduce;
mod trips;

pub use convert::{from_decorated_permutation, from_le_diagram, from_le_tableau};
pub(crate) use moves::generalized_squares;
pub use moves::{apply_move, apply_reduction, is_square, move_sites, reduction_sites, Move, Reduction};
pub use orient::{
    count_partial_matchings, edge_weights_from_faces, edge_weights_from_faces_seeded, face_weights,
    first_perfect_orientation, matching_matroid, matroid, measure_plabic, measure_plabic_with, path_matroid,
    perfect_orientations, to_directed, PerfectOrientation,
};
pub use random::{add_gadget, random_face_weights, random_move, random_network_of, random_reduced_network, Gadget};
pub(crate) use reduce::square_steps;
pub use reduce::{
    apply_step, compact_trace, normalize, reduce, reduce_graph, replay, ReduceResult, Step, SEARCH_BUDGET,
};
pub use trips::{
    delete_edge, is_reduced, removable_edges, trips, ReducedCheck, RemovableEdge, Trip, TripDecomposition, Violation,
};

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::embedding::{Dart, Embedding, Faces, HalfEdge};
use crate::error::{Error, Result};
use crate::exactmath::{content_lines, fmt_rational, parse_rational, Rational};
use crate::positroid::Color;

/// A plabic graph: an embedded undirected graph in a disk whose boundary
/// vertices `b_1..b_n` (vertex ids `0..n`) each carry one edge, and whose
/// internal vertices are black or white.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlabicGraph {
    emb: Embedding,
    colors: Vec<Option<Color>>,
}

impl PlabicGraph {
    /// `n` boundary vertices and nothing else (not yet valid).
    pub fn new(n: usize) -> Self {
        PlabicGraph { emb: Embedding::new(n), colors: vec![None; n] }
    }

    pub fn n(&self) -> usize {
        self.emb.n()
    }

    pub fn embedding(&self) -> &Embedding {
        &self.emb
    }

    pub(crate) fn embedding_mut(&mut self) -> &mut Embedding {
        &mut self.emb
    }

    /// Color of an internal vertex.
    pub fn color(&self, v: usize) -> Color {
        self.colors[v].expect("internal vertex has a color")
    }

    pub fn is_internal(&self, v: usize) -> bool {
        !self.emb.is_boundary(v)
    }

    pub(crate) fn set_color(&mut self, v: usize, c: Color) {
        self.colors[v] = Some(c);
    }

    pub fn add_vertex(&mut self, c: Color) -> usize {
        let v = self.emb.add_vertex();
        self.colors.push(Some(c));
        v
    }

    pub(crate) fn remove_vertex(&mut self, v: usize) {
        self.emb.remove_vertex(v);
        self.colors[v] = None;
    }

    /// Adds an edge between `a` and `b`, inserting its ends at the given
    /// rotation positions.
    pub fn add_edge_at(&mut self, a: usize, a_pos: usize, b: usize, b_pos: usize) -> usize {
        let e = self.emb.add_edge_raw(a, b);
        self.emb.insert_half_edge(a, a_pos, HalfEdge::new(e, 0));
        let b_pos = if a == b && b_pos > a_pos { b_pos + 1 } else { b_pos };
        self.emb.insert_half_edge(b, b_pos, HalfEdge::new(e, 1));
        e
    }

    /// Adds an edge appending both ends to the rotations.
    pub fn add_edge(&mut self, a: usize, b: usize) -> usize {
        let (pa, pb) = (self.emb.degree(a), self.emb.degree(b));
        self.add_edge_at(a, pa, b, pb)
    }

    /// Neighbour of boundary vertex `b_i` (`i` 1-based).
    pub fn boundary_neighbour(&self, i: usize) -> Option<usize> {
        self.emb.rotation(i - 1).first().map(|&h| self.emb.across(h))
    }

    /// Checks the embedding, boundary degrees, colors and planarity.
    pub fn validate(&self) -> Result<()> {
        self.emb.validate()?;
        for b in 0..self.n() {
            if self.emb.degree(b) != 1 {
                return Err(Error::validation(format!(
                    "boundary vertex {} has degree {} (must be 1)",
                    b + 1,
                    self.emb.degree(b)
                )));
            }
        }
        for v in self.emb.internal_vertices() {
            if self.colors.get(v).copied().flatten().is_none() {
                return Err(Error::validation(format!("internal vertex {v} has no color")));
            }
        }
        self.emb.faces()?;
        Ok(())
    }

    /// `Σ col(v)(deg(v) − 2)` over internal vertices.
    pub fn color_sum(&self) -> i64 {
        self.emb.internal_vertices().map(|v| self.color(v).sign() as i64 * (self.emb.degree(v) as i64 - 2)).sum()
    }

    /// The `k` of the type `(k, n)`, from `Σ col(v)(deg(v) − 2) = 2k − n`.
    pub fn k(&self) -> Result<usize> {
        let twice = self.color_sum() + self.n() as i64;
        if twice < 0 || twice % 2 != 0 || twice / 2 > self.n() as i64 {
            return Err(Error::validation(format!(
                "color sum {} gives no valid type for n = {}",
                self.color_sum(),
                self.n()
            )));
        }
        Ok((twice / 2) as usize)
    }

    pub fn faces(&self) -> Result<Faces> {
        self.emb.faces()
    }

    pub fn num_faces(&self) -> Result<usize> {
        Ok(self.faces()?.len())
    }

    /// Renumbers vertices and edges densely.
    pub fn compact(&self) -> PlabicGraph {
        let (emb, vmap, _) = self.emb.compact();
        let mut colors = vec![None; emb.vertex_slots()];
        for (old, new) in vmap.iter().enumerate() {
            if let Some(new) = new {
                colors[*new] = self.colors[old];
            }
        }
        PlabicGraph { emb, colors }
    }

    /// Parses the text format.
    ///
    /// ```text
    /// n 2
    /// vertex 1 boundary 0
    /// vertex 2 boundary 1
    /// vertex 3 white 0 1
    /// edge 0 1 3
    /// edge 1 3 2
    /// ```
    ///
    /// Vertex ids `1..=n` are the boundary vertices; internal vertices are
    /// `black` or `white`. Each vertex lists its incident edge ids clockwise;
    /// a loop appears twice, end 0 first.
    pub fn parse(text: &str) -> Result<Self> {
        Ok(parse_records(text)?.0)
    }

    /// Canonical text form (after compaction).
    pub fn to_text(&self) -> String {
        let g = self.compact();
        let mut s = format!("n {}\n", g.n());
        for v in g.emb.vertices() {
            let kind = match g.colors[v] {
                None => "boundary",
                Some(Color::Black) => "black",
                Some(Color::White) => "white",
            };
            let _ = write!(s, "vertex {} {kind}", v + 1);
            for h in g.emb.rotation(v) {
                let _ = write!(s, " {}", h.edge);
            }
            s.push('\n');
        }
        for e in g.emb.edges() {
            let [a, b] = g.emb.ends(e);
            let _ = writeln!(s, "edge {e} {} {}", a + 1, b + 1);
        }
        s
    }

    /// Graphviz description: boundary vertices as boxes, internal vertices
    /// filled black or white.
    pub fn to_dot(&self) -> String {
        let g = self.compact();
        let mut s = String::from("graph plabic {\n  node [shape=circle, label=\"\", width=0.2];\n");
        for v in g.emb.vertices() {
            let attrs = match g.colors[v] {
                None => format!("shape=box, label=\"b{}\"", v + 1),
                Some(Color::Black) => "style=filled, fillcolor=black".to_string(),
                Some(Color::White) => "style=filled, fillcolor=white".to_string(),
            };
            let _ = writeln!(s, "  v{v} [{attrs}];");
        }
        for e in g.emb.edges() {
            let [a, b] = g.emb.ends(e);
            let _ = writeln!(s, "  v{a} -- v{b} [label=\"{e}\"];");
        }
        s.push_str("}\n");
        s
    }

    /// A string identifying the graph up to renaming internal vertices and
    /// edges: vertices are numbered in breadth-first order from the
    /// boundary following rotations.
    pub fn canonical_key(&self) -> String {
        let emb = &self.emb;
        let mut label: HashMap<usize, usize> = HashMap::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for b in 0..self.n() {
            label.insert(b, b);
            order.push(b);
            queue.push_back(b);
        }
        while let Some(v) = queue.pop_front() {
            for &h in emb.rotation(v) {
                let w = emb.across(h);
                if let std::collections::hash_map::Entry::Vacant(en) = label.entry(w) {
                    en.insert(order.len());
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        let mut s = String::new();
        for &v in &order {
            let c = match self.colors[v] {
                None => 'b',
                Some(Color::Black) => 'B',
                Some(Color::White) => 'W',
            };
            let _ = write!(s, "{c}[");
            // rotation of neighbour labels, started at the minimal rotation
            // for internal vertices so the key ignores the starting point
            let nb: Vec<usize> = emb.rotation(v).iter().map(|&h| label[&emb.across(h)]).collect();
            let rot = if self.is_internal(v) { min_rotation(&nb) } else { nb };
            for x in rot {
                let _ = write!(s, "{x},");
            }
            s.push(']');
        }
        s
    }
}

/// The lexicographically smallest cyclic rotation.
fn min_rotation(v: &[usize]) -> Vec<usize> {
    (0..v.len().max(1))
        .map(|s| v.iter().cycle().skip(s).take(v.len()).copied().collect::<Vec<_>>())
        .min()
        .unwrap_or_default()
}

/// A vertex record: line, id, color (`None` on the boundary), rotation.
type VertexRecord = (usize, usize, Option<Color>, Vec<usize>);

/// A face weight record: line, face id, weight.
type FaceRecord = (usize, usize, Rational);

fn parse_records(text: &str) -> Result<(PlabicGraph, Vec<FaceRecord>)> {
    let mut n = None;
    let mut vertex_recs: Vec<VertexRecord> = Vec::new();
    let mut edge_recs: Vec<(usize, usize, usize, usize)> = Vec::new();
    let mut face_recs: Vec<FaceRecord> = Vec::new();
    for (ln, line) in content_lines(text) {
        let toks: Vec<&str> = line.split_whitespace().collect();
        let int = |t: &str| t.parse::<usize>().map_err(|_| Error::parse(ln, format!("expected an integer, got {t:?}")));
        match toks[0] {
            "n" if toks.len() == 2 => n = Some(int(toks[1])?),
            "vertex" if toks.len() >= 3 => {
                let c = match toks[2] {
                    "boundary" => None,
                    "black" => Some(Color::Black),
                    "white" => Some(Color::White),
                    other => return Err(Error::parse(ln, format!("unknown vertex kind {other:?}"))),
                };
                let rot = toks[3..].iter().map(|t| int(t)).collect::<Result<Vec<_>>>()?;
                vertex_recs.push((ln, int(toks[1])?, c, rot));
            }
            "edge" if toks.len() == 4 => edge_recs.push((ln, int(toks[1])?, int(toks[2])?, int(toks[3])?)),
            "face" if toks.len() == 3 => {
                let w = parse_rational(toks[2]).map_err(|e| Error::parse(ln, e.to_string()))?;
                face_recs.push((ln, int(toks[1])?, w));
            }
            _ => return Err(Error::parse(ln, format!("malformed record {line:?}"))),
        }
    }
    let n = n.ok_or_else(|| Error::parse(1, "missing \"n\" header"))?;
    let mut g = PlabicGraph::new(n);
    let mut vmap: BTreeMap<usize, usize> = (1..=n).map(|i| (i, i - 1)).collect();
    for (ln, id, c, _) in &vertex_recs {
        let boundary = (1..=n).contains(id);
        if boundary != c.is_none() {
            return Err(Error::parse(*ln, format!("vertex {id}: ids 1..{n} are exactly the boundary vertices")));
        }
        if let Some(c) = c {
            if vmap.contains_key(id) {
                return Err(Error::parse(*ln, format!("duplicate vertex {id}")));
            }
            let v = g.add_vertex(*c);
            vmap.insert(*id, v);
        }
    }
    let mut emap: BTreeMap<usize, usize> = BTreeMap::new();
    for (ln, id, a, b) in &edge_recs {
        let (Some(&av), Some(&bv)) = (vmap.get(a), vmap.get(b)) else {
            return Err(Error::parse(*ln, format!("edge {id} references an unknown vertex")));
        };
        if emap.insert(*id, g.emb.add_edge_raw(av, bv)).is_some() {
            return Err(Error::parse(*ln, format!("duplicate edge {id}")));
        }
    }
    let mut seen = vec![false; g.emb.vertex_slots()];
    for (ln, id, _, rot) in &vertex_recs {
        let v = vmap[id];
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::parse(*ln, format!("duplicate vertex {id}")));
        }
        let mut hs = Vec::with_capacity(rot.len());
        let mut loop_seen: BTreeMap<usize, u8> = BTreeMap::new();
        for fid in rot {
            let e = *emap.get(fid).ok_or_else(|| Error::parse(*ln, format!("unknown edge {fid}")))?;
            let [a, b] = g.emb.ends(e);
            let end = if a == b {
                let c = loop_seen.entry(e).or_insert(0);
                *c += 1;
                if *c > 2 {
                    return Err(Error::parse(*ln, format!("loop {fid} listed more than twice")));
                }
                *c - 1
            } else if a == v {
                0
            } else if b == v {
                1
            } else {
                return Err(Error::parse(*ln, format!("edge {fid} is not incident to vertex {id}")));
            };
            hs.push(HalfEdge::new(e, end));
        }
        g.emb.set_rotation(v, hs);
    }
    g.validate()?;
    Ok((g, face_recs))
}

/// A plabic graph with positive face weights whose product is 1. Weights
/// are indexed by the canonical face order (smallest incident edge id).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlabicNetwork {
    graph: PlabicGraph,
    weights: Vec<Rational>,
}

impl PlabicNetwork {
    pub fn new(graph: PlabicGraph, weights: Vec<Rational>) -> Result<Self> {
        graph.validate()?;
        let f = graph.num_faces()?;
        if weights.len() != f {
            return Err(Error::validation(format!("{} face weights given for {f} faces", weights.len())));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::validation(format!("face weight {} is not positive", fmt_rational(w))));
        }
        let prod: Rational = weights.iter().product();
        if !prod.is_one() {
            return Err(Error::validation(format!("face weights multiply to {} instead of 1", fmt_rational(&prod))));
        }
        Ok(PlabicNetwork { graph, weights })
    }

    /// All face weights equal to 1.
    pub fn unit(graph: PlabicGraph) -> Result<Self> {
        let f = graph.num_faces()?;
        PlabicNetwork::new(graph, vec![Rational::one(); f])
    }

    pub fn graph(&self) -> &PlabicGraph {
        &self.graph
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, f: usize) -> &Rational {
        &self.weights[f]
    }

    pub(crate) fn from_parts_unchecked(graph: PlabicGraph, weights: Vec<Rational>) -> Self {
        PlabicNetwork { graph, weights }
    }

    /// Renumbers densely; face weights follow their faces.
    pub fn compact(&self) -> PlabicNetwork {
        let (emb, _, emap) = self.graph.emb.compact();
        let g = self.graph.compact();
        debug_assert_eq!(&emb, g.embedding());
        let old = self.graph.faces().expect("valid network");
        let new = g.faces().expect("valid network");
        let mut weights = vec![Rational::one(); new.len()];
        for (f, face) in old.iter().enumerate() {
            if let Some((e, fwd)) = face.real_darts().next() {
                let d = Dart::real(emap[e].expect("live edge"), fwd);
                weights[new.left_of(d).expect("dart in a face")] = self.weights[f].clone();
            } else {
                weights[0] = self.weights[f].clone();
            }
        }
        PlabicNetwork { graph: g, weights }
    }

    /// Text form: the graph followed by `face <id> <weight>` records.
    pub fn to_text(&self) -> String {
        let c = self.compact();
        let mut s = c.graph.to_text();
        for (f, w) in c.weights.iter().enumerate() {
            let _ = writeln!(s, "face {f} {}", fmt_rational(w));
        }
        s
    }

    /// Parses a graph with an optional face-weight block (missing weights
    /// default to 1).
    pub fn parse(text: &str) -> Result<Self> {
        let (g, recs) = parse_records(text)?;
        let f = g.num_faces()?;
        let mut weights = vec![Rational::one(); f];
        for (ln, id, w) in recs {
            if id >= f {
                return Err(Error::parse(ln, format!("face {id} does not exist (graph has {f} faces)")));
            }
            weights[id] = w;
        }
        PlabicNetwork::new(g, weights)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlabicDoc {
    pub n: usize,
    pub vertices: Vec<PlabicVertexDoc>,
    pub edges: Vec<[usize; 3]>,
    pub face_weights: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlabicVertexDoc {
    pub id: usize,
    pub kind: String,
    pub rotation: Vec<usize>,
}

impl PlabicNetwork {
    /// Structured form used by `--json` output.
    pub fn to_doc(&self) -> PlabicDoc {
        let c = self.compact();
        let g = &c.graph;
        PlabicDoc {
            n: g.n(),
            vertices: g
                .emb
                .vertices()
                .map(|v| PlabicVertexDoc {
                    id: v + 1,
                    kind: match g.colors[v] {
                        None => "boundary".into(),
                        Some(Color::Black) => "black".into(),
                        Some(Color::White) => "white".into(),
                    },
                    rotation: g.emb.rotation(v).iter().map(|h| h.edge).collect(),
                })
                .collect(),
            edges: g.emb.edges().map(|e| [e, g.emb.ends(e)[0] + 1, g.emb.ends(e)[1] + 1]).collect(),
            face_weights: c.weights.iter().map(fmt_rational).collect(),
        }
    }
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::*;

    /// Boundary leaves: white at the listed labels, black elsewhere.
    pub(crate) fn leaves(n: usize, white: &[usize]) -> PlabicGraph {
        let mut g = PlabicGraph::new(n);
        for i in 1..=n {
            let c = if white.contains(&i) { Color::White } else { Color::Black };
            let v = g.add_vertex(c);
            g.add_edge(i - 1, v);
        }
        g
    }

    /// Two boundary vertices joined through a pair of parallel edges between
    /// a white and a black trivalent vertex.
    pub(crate) fn bigon() -> PlabicGraph {
        let mut g = PlabicGraph::new(2);
        let w = g.add_vertex(Color::White);
        let b = g.add_vertex(Color::Black);
        let e0 = g.emb.add_edge_raw(0, w);
        let p1 = g.emb.add_edge_raw(w, b);
        let p2 = g.emb.add_edge_raw(w, b);
        let e3 = g.emb.add_edge_raw(b, 1);
        g.emb.set_rotation(0, vec![HalfEdge::new(e0, 0)]);
        g.emb.set_rotation(1, vec![HalfEdge::new(e3, 1)]);
        g.emb.set_rotation(w, vec![HalfEdge::new(e0, 1), HalfEdge::new(p1, 0), HalfEdge::new(p2, 0)]);
        g.emb.set_rotation(b, vec![HalfEdge::new(e3, 0), HalfEdge::new(p2, 1), HalfEdge::new(p1, 1)]);
        g
    }
}

#[cfg(test)]
mod tests {
    use super::tests_support::*;
    use super::*;
    use crate::exactmath::q;

    #[test]
    fn text_round_trip() {
        let g = bigon();
        g.validate().unwrap();
        let text = g.to_text();
        assert_eq!(PlabicGraph::parse(&text).unwrap().to_text(), text);
        let net = PlabicNetwork::new(g.clone(), vec![q(2), crate::exactmath::qf(1, 2), q(1)]).unwrap();
        let t = net.to_text();
        assert_eq!(PlabicNetwork::parse(&t).unwrap(), net.compact());
        assert!(PlabicNetwork::new(g, vec![q(2), q(1), q(1)]).is_err());
        assert!(g_parse_err("n 1\nvertex 1 boundary\n"));
    }

    fn g_parse_err(s: &str) -> bool {
        PlabicGraph::parse(s).is_err()
    }

    #[test]
    fn faces_and_type() {
        let g = bigon();
        assert_eq!(g.num_faces().unwrap(), 3);
        assert_eq!(g.k().unwrap(), 1);
        let l = leaves(4, &[2, 3]);
        assert_eq!(l.num_faces().unwrap(), 1);
        assert_eq!(l.k().unwrap(), 2);
        let mut chord = PlabicGraph::new(2);
        chord.add_edge(0, 1);
        assert_eq!(chord.num_faces().unwrap(), 2);
        assert_eq!(chord.k().unwrap(), 1);
    }

    #[test]
    fn canonical_key_ignores_ids() {
        let g = bigon();
        let mut h = PlabicGraph::parse(&g.to_text()).unwrap();
        assert_eq!(g.canonical_key(), h.canonical_key());
        let v = h.add_vertex(Color::Black);
        let _ = v;
        h.remove_vertex(v);
        assert_eq!(g.canonical_key(), h.canonical_key());
        assert_ne!(g.canonical_key(), leaves(2, &[1]).canonical_key());
        assert!(g.to_dot().contains("v2 -- v3"));
    }
}
