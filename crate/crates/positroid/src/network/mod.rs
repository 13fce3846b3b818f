//! Planar directed networks in a disk: validation, text format, boundary
//! measurements, winding indices, gauge transformations, perfection and
//! orientation switches.

mod examples;
mod measure;
mod random;
mod transform;
mod winding;

pub use examples::two_vertex_cycle;
pub use measure::{
    boundary_measurement, boundary_measurement_matrix, boundary_measurements_in, measure, signed_bijection_minor,
    MeasureRing, Series,
};
pub(crate) use random::random_weight;
pub use random::{random_network, RandomNetworkParams};
pub use transform::{color_sum, gauge_transform, is_perfect, perfect_and_trivalent, switch_orientation, vertex_color};
pub use winding::{walk_series, winding_index, winding_index_with_order, Walk};

use std::collections::BTreeMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::embedding::{Embedding, HalfEdge};
use crate::error::{Error, Result};
use crate::exactmath::{content_lines, fmt_rational, parse_rational, Rational};

/// A planar directed network with positive rational edge weights.
///
/// Edge end 0 is the tail and end 1 the head. Boundary vertex `b_i` is
/// vertex `i − 1` of the embedding and carries a source/sink flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarDirectedNetwork {
    emb: Embedding,
    weights: Vec<Option<Rational>>,
    sources: Vec<bool>,
}

impl PlanarDirectedNetwork {
    /// Network with `n` isolated boundary vertices; `sources` lists the
    /// 1-based labels flagged as sources.
    pub fn new(n: usize, sources: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(Error::validation("a network needs at least one boundary vertex"));
        }
        let mut flags = vec![false; n];
        for &s in sources {
            if s == 0 || s > n {
                return Err(Error::validation(format!("source label {s} outside [1,{n}]")));
            }
            flags[s - 1] = true;
        }
        Ok(PlanarDirectedNetwork { emb: Embedding::new(n), weights: Vec::new(), sources: flags })
    }

    /// Assembles a network from an embedding and per-slot weights, then validates it.
    pub fn from_parts(emb: Embedding, weights: Vec<Option<Rational>>, sources: Vec<bool>) -> Result<Self> {
        let net = PlanarDirectedNetwork { emb, weights, sources };
        net.validate()?;
        Ok(net)
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

    /// Number of sources (the `k` of the network).
    pub fn k(&self) -> usize {
        self.sources.iter().filter(|&&s| s).count()
    }

    /// Sorted 1-based labels of the boundary sources.
    pub fn source_set(&self) -> Vec<usize> {
        (1..=self.n()).filter(|&i| self.sources[i - 1]).collect()
    }

    pub fn is_source(&self, label: usize) -> bool {
        self.sources[label - 1]
    }

    pub(crate) fn set_source_flag(&mut self, label: usize, src: bool) {
        self.sources[label - 1] = src;
    }

    pub fn weight(&self, e: usize) -> &Rational {
        self.weights[e].as_ref().expect("live edge")
    }

    pub fn set_weight(&mut self, e: usize, w: Rational) {
        self.weights[e] = Some(w);
    }

    pub fn tail(&self, e: usize) -> usize {
        self.emb.ends(e)[0]
    }

    pub fn head(&self, e: usize) -> usize {
        self.emb.ends(e)[1]
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.emb.edges()
    }

    /// Out-edges of `v` in rotation order.
    pub fn out_edges(&self, v: usize) -> Vec<usize> {
        self.emb.rotation(v).iter().filter(|h| h.end == 0).map(|h| h.edge).collect()
    }

    /// In-edges of `v` in rotation order.
    pub fn in_edges(&self, v: usize) -> Vec<usize> {
        self.emb.rotation(v).iter().filter(|h| h.end == 1).map(|h| h.edge).collect()
    }

    /// Adds an internal vertex.
    pub fn add_vertex(&mut self) -> usize {
        self.emb.add_vertex()
    }

    /// Adds an edge `tail → head`, appending its ends to both rotations.
    /// Use [`Self::add_edge_at`] to control positions.
    pub fn add_edge(&mut self, tail: usize, head: usize, w: Rational) -> usize {
        let e = self.emb.add_edge_raw(tail, head);
        let dt = self.emb.degree(tail);
        self.emb.insert_half_edge(tail, dt, HalfEdge::new(e, 0));
        let dh = self.emb.degree(head);
        self.emb.insert_half_edge(head, dh, HalfEdge::new(e, 1));
        self.push_weight(e, w);
        e
    }

    /// Adds an edge with explicit rotation positions for its tail and head ends.
    pub fn add_edge_at(&mut self, tail: usize, tail_pos: usize, head: usize, head_pos: usize, w: Rational) -> usize {
        let e = self.emb.add_edge_raw(tail, head);
        self.emb.insert_half_edge(tail, tail_pos, HalfEdge::new(e, 0));
        self.emb.insert_half_edge(head, head_pos, HalfEdge::new(e, 1));
        self.push_weight(e, w);
        e
    }

    pub(crate) fn push_weight(&mut self, e: usize, w: Rational) {
        if self.weights.len() <= e {
            self.weights.resize(e + 1, None);
        }
        self.weights[e] = Some(w);
    }

    pub(crate) fn remove_edge(&mut self, e: usize) {
        self.emb.remove_edge(e);
        self.weights[e] = None;
    }

    /// Overwrites a rotation; callers are responsible for consistency.
    pub fn set_rotation(&mut self, v: usize, rot: Vec<HalfEdge>) {
        self.emb.set_rotation(v, rot);
    }

    /// Checks the embedding, planarity, weights and boundary flags.
    pub fn validate(&self) -> Result<()> {
        self.emb.validate()?;
        if self.sources.len() != self.n() {
            return Err(Error::validation("one source/sink flag per boundary vertex is required"));
        }
        for e in self.emb.edges() {
            match self.weights.get(e).and_then(|w| w.as_ref()) {
                None => return Err(Error::validation(format!("edge {e} has no weight"))),
                Some(w) if !w.is_positive() => {
                    return Err(Error::validation(format!("edge {e} has nonpositive weight {}", fmt_rational(w))))
                }
                _ => {}
            }
        }
        for i in 0..self.n() {
            let (ins, outs) = (self.in_edges(i).len(), self.out_edges(i).len());
            if self.sources[i] && ins > 0 {
                return Err(Error::validation(format!("boundary source b{} has an incoming edge", i + 1)));
            }
            if !self.sources[i] && outs > 0 {
                return Err(Error::validation(format!("boundary sink b{} has an outgoing edge", i + 1)));
            }
        }
        self.emb.faces()?;
        Ok(())
    }

    /// Renumbers vertices and edges densely.
    pub fn compact(&self) -> PlanarDirectedNetwork {
        let (emb, _, emap) = self.emb.compact();
        let mut weights = vec![None; emb.edge_slots()];
        for (old, new) in emap.iter().enumerate() {
            if let Some(new) = new {
                weights[*new] = self.weights[old].clone();
            }
        }
        PlanarDirectedNetwork { emb, weights, sources: self.sources.clone() }
    }

    /// Parses the text format.
    ///
    /// ```text
    /// n 2
    /// sources 1
    /// vertex 1 boundary 0
    /// vertex 2 boundary 0
    /// vertex 3 internal 0 0
    /// edge 0 1 2 5/3
    /// ```
    ///
    /// Vertex ids `1..=n` are the boundary vertices `b_1..b_n`; other ids are
    /// internal. A vertex record lists its incident edge ids in clockwise
    /// order; a loop appears twice, tail end first.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut sources: Vec<usize> = Vec::new();
        let mut vertex_recs: Vec<(usize, usize, bool, Vec<usize>)> = Vec::new();
        let mut edge_recs: Vec<(usize, usize, usize, usize, Rational)> = Vec::new();
        for (ln, line) in content_lines(text) {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let int =
                |t: &str| t.parse::<usize>().map_err(|_| Error::parse(ln, format!("expected an integer, got {t:?}")));
            match toks[0] {
                "n" => {
                    if toks.len() != 2 {
                        return Err(Error::parse(ln, "expected \"n <count>\""));
                    }
                    n = Some(int(toks[1])?);
                }
                "sources" => {
                    for t in &toks[1..] {
                        sources.push(int(t)?);
                    }
                }
                "vertex" => {
                    if toks.len() < 3 {
                        return Err(Error::parse(ln, "expected \"vertex <id> boundary|internal <edges...>\""));
                    }
                    let id = int(toks[1])?;
                    let boundary = match toks[2] {
                        "boundary" => true,
                        "internal" => false,
                        other => return Err(Error::parse(ln, format!("unknown vertex kind {other:?}"))),
                    };
                    let rot = toks[3..].iter().map(|t| int(t)).collect::<Result<Vec<_>>>()?;
                    vertex_recs.push((ln, id, boundary, rot));
                }
                "edge" => {
                    if toks.len() != 5 {
                        return Err(Error::parse(ln, "expected \"edge <id> <tail> <head> <weight>\""));
                    }
                    let w = parse_rational(toks[4]).map_err(|e| Error::parse(ln, e.to_string()))?;
                    edge_recs.push((ln, int(toks[1])?, int(toks[2])?, int(toks[3])?, w));
                }
                other => return Err(Error::parse(ln, format!("unknown record {other:?}"))),
            }
        }
        let n = n.ok_or_else(|| Error::parse(1, "missing \"n\" header"))?;
        let mut net = PlanarDirectedNetwork::new(n, &sources)?;
        let mut vmap: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 1..=n {
            vmap.insert(i, i - 1);
        }
        for (ln, id, boundary, _) in &vertex_recs {
            if *boundary != (*id >= 1 && *id <= n) {
                return Err(Error::parse(*ln, format!("vertex {id}: boundary vertices are exactly ids 1..{n}")));
            }
            if !boundary {
                if vmap.contains_key(id) {
                    return Err(Error::parse(*ln, format!("duplicate vertex {id}")));
                }
                let v = net.emb.add_vertex();
                vmap.insert(*id, v);
            }
        }
        let mut emap: BTreeMap<usize, usize> = BTreeMap::new();
        for (ln, id, t, h, w) in &edge_recs {
            let (Some(&tv), Some(&hv)) = (vmap.get(t), vmap.get(h)) else {
                return Err(Error::parse(*ln, format!("edge {id} references an unknown vertex")));
            };
            if emap.contains_key(id) {
                return Err(Error::parse(*ln, format!("duplicate edge {id}")));
            }
            let e = net.emb.add_edge_raw(tv, hv);
            net.push_weight(e, w.clone());
            emap.insert(*id, e);
        }
        let mut seen_vertex = vec![false; net.emb.vertex_slots()];
        for (ln, id, _, rot) in &vertex_recs {
            let v = vmap[id];
            if std::mem::replace(&mut seen_vertex[v], true) {
                return Err(Error::parse(*ln, format!("duplicate vertex {id}")));
            }
            let mut hs = Vec::with_capacity(rot.len());
            let mut loop_seen: BTreeMap<usize, u8> = BTreeMap::new();
            for fid in rot {
                let e = *emap.get(fid).ok_or_else(|| Error::parse(*ln, format!("unknown edge {fid}")))?;
                let [a, b] = net.emb.ends(e);
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
            net.emb.set_rotation(v, hs);
        }
        net.validate()?;
        Ok(net)
    }

    /// Canonical text form (after compaction).
    pub fn to_text(&self) -> String {
        let net = self.compact();
        let n = net.n();
        let ext = |v: usize| v + 1;
        let mut s = format!("n {n}\n");
        let src: Vec<String> = net.source_set().iter().map(|x| x.to_string()).collect();
        s.push_str(format!("sources {}", src.join(" ")).trim_end());
        s.push('\n');
        for v in net.emb.vertices() {
            let kind = if v < n { "boundary" } else { "internal" };
            let rot: Vec<String> = net.emb.rotation(v).iter().map(|h| h.edge.to_string()).collect();
            let mut line = format!("vertex {} {kind}", ext(v));
            if !rot.is_empty() {
                line.push(' ');
                line.push_str(&rot.join(" "));
            }
            s.push_str(&line);
            s.push('\n');
        }
        for e in net.emb.edges() {
            s.push_str(&format!(
                "edge {e} {} {} {}\n",
                ext(net.tail(e)),
                ext(net.head(e)),
                fmt_rational(net.weight(e))
            ));
        }
        s
    }

    /// Structured form used by `--json` output.
    pub fn to_doc(&self) -> NetworkDoc {
        let net = self.compact();
        NetworkDoc {
            n: net.n(),
            sources: net.source_set(),
            vertices: net
                .emb
                .vertices()
                .map(|v| VertexDoc {
                    id: v + 1,
                    boundary: v < net.n(),
                    rotation: net.emb.rotation(v).iter().map(|h| h.edge).collect(),
                })
                .collect(),
            edges: net
                .emb
                .edges()
                .map(|e| EdgeDoc {
                    id: e,
                    tail: net.tail(e) + 1,
                    head: net.head(e) + 1,
                    weight: fmt_rational(net.weight(e)),
                })
                .collect(),
        }
    }

    /// True iff every edge weight equals one.
    pub fn has_unit_weights(&self) -> bool {
        self.edges().all(|e| *self.weight(e) == Rational::from_integer(1.into()))
    }

    /// Weighted out-adjacency per vertex slot.
    pub(crate) fn out_adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.emb.vertex_slots()];
        for e in self.edges() {
            adj[self.tail(e)].push((e, self.head(e)));
        }
        adj
    }

    /// Whether the network has no directed cycles.
    pub fn is_acyclic(&self) -> bool {
        let adj = self.out_adjacency();
        let mut indeg = vec![0usize; adj.len()];
        for e in self.edges() {
            indeg[self.head(e)] += 1;
        }
        let mut stack: Vec<usize> = self.emb.vertices().filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &(_, u) in &adj[v] {
                indeg[u] -= 1;
                if indeg[u] == 0 {
                    stack.push(u);
                }
            }
        }
        seen == self.emb.vertices().count()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NetworkDoc {
    pub n: usize,
    pub sources: Vec<usize>,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: usize,
    pub boundary: bool,
    pub rotation: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: usize,
    pub tail: usize,
    pub head: usize,
    pub weight: String,
}

#[cfg(test)]
pub(crate) mod tests_support {
    use super::*;
    use crate::embedding::HalfEdge as H;
    use crate::exactmath::q;

    /// A path b1 → a → b → c → b2 with a counterclockwise loop at `a` and
    /// clockwise loops at `b` and `c`, plus the walk taking each loop once.
    pub(crate) fn loops_network() -> (PlanarDirectedNetwork, winding::Walk) {
        let mut net = PlanarDirectedNetwork::new(2, &[1]).unwrap();
        let a = net.add_vertex();
        let b = net.add_vertex();
        let c = net.add_vertex();
        let e0 = net.add_edge(0, a, q(1));
        let e1 = net.add_edge(a, b, q(1));
        let e2 = net.add_edge(b, c, q(1));
        let e3 = net.add_edge(c, 1, q(1));
        let la = net.embedding_mut().add_edge_raw(a, a);
        net.push_weight(la, q(1));
        let lb = net.embedding_mut().add_edge_raw(b, b);
        net.push_weight(lb, q(1));
        let lc = net.embedding_mut().add_edge_raw(c, c);
        net.push_weight(lc, q(1));
        net.set_rotation(a, vec![H::new(e0, 1), H::new(la, 1), H::new(la, 0), H::new(e1, 0)]);
        net.set_rotation(b, vec![H::new(e1, 1), H::new(lb, 0), H::new(lb, 1), H::new(e2, 0)]);
        net.set_rotation(c, vec![H::new(e2, 1), H::new(lc, 0), H::new(lc, 1), H::new(e3, 0)]);
        net.validate().unwrap();
        (net, winding::Walk::new(vec![e0, la, e1, lb, e2, lc, e3]))
    }
}
