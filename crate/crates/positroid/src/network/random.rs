//! Random planar directed networks, grown face by face so the embedding
//! stays planar by construction.

use rand::Rng;

use super::PlanarDirectedNetwork;
use crate::embedding::{EdgeRef, HalfEdge};
use crate::exactmath::{qf, Rational};

/// Shape parameters for [`random_network`].
#[derive(Clone, Debug)]
pub struct RandomNetworkParams {
    /// Number of boundary vertices.
    pub n: usize,
    /// Number of sources; drawn uniformly from `0..=n` when `None`.
    pub k: Option<usize>,
    /// Maximum number of internal vertices.
    pub internal: usize,
    /// Number of edge insertion attempts.
    pub edges: usize,
    /// Weights are `p/q` with `p ∈ [1, max_num]` and `q ∈ [1, max_den]`.
    pub max_num: i64,
    pub max_den: i64,
    /// Upper bound on internal vertex degrees.
    pub max_degree: Option<usize>,
    /// Orient every edge consistently with a random vertex order, so the
    /// network has no directed cycles.
    pub acyclic: bool,
}

impl Default for RandomNetworkParams {
    fn default() -> Self {
        RandomNetworkParams {
            n: 4,
            k: None,
            internal: 5,
            edges: 10,
            max_num: 5,
            max_den: 3,
            max_degree: None,
            acyclic: false,
        }
    }
}

/// A corner of a face: a vertex and the rotation index at which a new
/// half-edge lands inside that face.
#[derive(Clone, Copy, Debug)]
struct Corner {
    v: usize,
    pos: usize,
}

pub(crate) fn random_weight<R: Rng>(rng: &mut R, max_num: i64, max_den: i64) -> Rational {
    qf(rng.gen_range(1..=max_num.max(1)), rng.gen_range(1..=max_den.max(1)))
}

fn face_corners(net: &PlanarDirectedNetwork, face: usize) -> Vec<Corner> {
    let emb = net.embedding();
    let faces = emb.faces().expect("generator keeps the embedding valid");
    let n = emb.n();
    faces
        .get(face)
        .darts
        .iter()
        .map(|d| match d.edge {
            EdgeRef::Arc(i) => {
                // Interior faces traverse arcs backwards, arriving at b_i
                // just before its first real half-edge.
                debug_assert!(!d.forward);
                Corner { v: i % n, pos: 0 }
            }
            EdgeRef::Real(e) => {
                let h = HalfEdge::new(e, if d.forward { 1 } else { 0 });
                let v = emb.vertex_at(h);
                Corner { v, pos: emb.position(h) + 1 }
            }
        })
        .collect()
}

/// Grows a random network: each step either joins two corners of a random
/// face by a new edge or hangs a new internal vertex off one corner. Edge
/// directions are random except at boundary vertices, which respect their
/// source/sink flags. Directed cycles are allowed unless `acyclic` is set.
pub fn random_network<R: Rng>(rng: &mut R, p: &RandomNetworkParams) -> PlanarDirectedNetwork {
    let n = p.n.max(1);
    let k = p.k.unwrap_or_else(|| rng.gen_range(0..=n)).min(n);
    let mut labels: Vec<usize> = (1..=n).collect();
    for i in (1..labels.len()).rev() {
        labels.swap(i, rng.gen_range(0..=i));
    }
    let mut sources: Vec<usize> = labels[..k].to_vec();
    sources.sort_unstable();
    let mut net = PlanarDirectedNetwork::new(n, &sources).expect("valid source labels");
    let mut internal = 0;
    // Rank used by acyclic networks: edges point from lower to higher rank.
    let mut rank: Vec<f64> = (0..n).map(|_| 0.0).collect();
    let full =
        |net: &PlanarDirectedNetwork, v: usize| v >= n && p.max_degree.is_some_and(|m| net.embedding().degree(v) >= m);
    for _ in 0..p.edges {
        let nfaces = net.embedding().faces().expect("valid").len();
        let face = rng.gen_range(0..nfaces);
        let corners = face_corners(&net, face);
        let add_vertex = internal < p.internal && (internal == 0 || rng.gen_bool(0.35));
        if add_vertex {
            let c = corners[rng.gen_range(0..corners.len())];
            if full(&net, c.v) {
                continue;
            }
            let w = net.add_vertex();
            internal += 1;
            let weight = random_weight(rng, p.max_num, p.max_den);
            let out = direction_from(&net, c.v, rng);
            rank.push(if out { rank[c.v] + rng.gen_range(0.1..1.0) } else { rank[c.v] - rng.gen_range(0.1..1.0) });
            if out {
                net.add_edge_at(c.v, c.pos, w, 0, weight);
            } else {
                net.add_edge_at(w, 0, c.v, c.pos, weight);
            }
        } else {
            let a = corners[rng.gen_range(0..corners.len())];
            let b = corners[rng.gen_range(0..corners.len())];
            if a.v == b.v || full(&net, a.v) || full(&net, b.v) {
                continue;
            }
            let (mut ab, mut ba) = (can_direct(&net, a.v, b.v), can_direct(&net, b.v, a.v));
            if p.acyclic {
                let (ra, rb) = (effective_rank(&net, &rank, a.v), effective_rank(&net, &rank, b.v));
                ab &= ra < rb;
                ba &= rb < ra;
            }
            let forward = match (ab, ba) {
                (true, true) => rng.gen_bool(0.5),
                (true, false) => true,
                (false, true) => false,
                (false, false) => continue,
            };
            let (t, h) = if forward { (a, b) } else { (b, a) };
            let weight = random_weight(rng, p.max_num, p.max_den);
            net.add_edge_at(t.v, t.pos, h.v, h.pos, weight);
        }
    }
    debug_assert!(net.validate().is_ok());
    net
}

/// Rank for acyclic generation: boundary sources come first and sinks last.
fn effective_rank(net: &PlanarDirectedNetwork, rank: &[f64], v: usize) -> f64 {
    if v < net.n() {
        if net.is_source(v + 1) {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    } else {
        rank[v]
    }
}

/// Whether an edge `a → b` respects boundary flags.
fn can_direct(net: &PlanarDirectedNetwork, a: usize, b: usize) -> bool {
    let n = net.n();
    let tail_ok = a >= n || net.is_source(a + 1);
    let head_ok = b >= n || !net.is_source(b + 1);
    tail_ok && head_ok
}

/// Direction for an edge from `v` to a fresh internal vertex: `true` means
/// out of `v`.
fn direction_from<R: Rng>(net: &PlanarDirectedNetwork, v: usize, rng: &mut R) -> bool {
    if v < net.n() {
        net.is_source(v + 1)
    } else {
        rng.gen_bool(0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_networks_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let params = RandomNetworkParams { n: rng.gen_range(1..=6), internal: 8, edges: 16, ..Default::default() };
            let net = random_network(&mut rng, &params);
            net.validate().unwrap();
            assert!(net.embedding().num_internal_vertices() <= 8);
        }
    }

    #[test]
    fn degree_bound_and_acyclicity() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let params =
                RandomNetworkParams { n: 5, internal: 8, edges: 20, max_degree: Some(3), ..Default::default() };
            let net = random_network(&mut rng, &params);
            assert!(net.embedding().internal_vertices().all(|v| net.embedding().degree(v) <= 3));
            let params = RandomNetworkParams { n: 5, internal: 8, edges: 20, acyclic: true, ..Default::default() };
            let net = random_network(&mut rng, &params);
            assert!(net.is_acyclic());
        }
    }
}
