//! Measurement-preserving transformations: gauge changes, reduction to a
//! perfect trivalent network, and orientation switches.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed};

use super::PlanarDirectedNetwork;
use crate::embedding::HalfEdge;
use crate::error::{Error, Result};
use crate::exactmath::{fmt_rational, q, Rational};

/// Rescales `x_e ↦ x_e t_u / t_v` for every edge `e = (u → v)`. Vertices
/// missing from `t` (and all boundary vertices) use `t = 1`.
pub fn gauge_transform(net: &PlanarDirectedNetwork, t: &BTreeMap<usize, Rational>) -> Result<PlanarDirectedNetwork> {
    for (&v, tv) in t {
        if !net.embedding().has_vertex(v) || net.embedding().is_boundary(v) {
            return Err(Error::precondition(format!("gauge parameter given for non-internal vertex {v}")));
        }
        if !tv.is_positive() {
            return Err(Error::precondition(format!(
                "gauge parameter at vertex {v} is {} (must be positive)",
                fmt_rational(tv)
            )));
        }
    }
    let one = Rational::one();
    let mut out = net.clone();
    for e in net.edges() {
        let tu = t.get(&net.tail(e)).unwrap_or(&one);
        let tv = t.get(&net.head(e)).unwrap_or(&one);
        out.set_weight(e, net.weight(e) * tu / tv);
    }
    Ok(out)
}

/// Color of an internal vertex: `+1` with exactly one outgoing edge, `−1`
/// with exactly one incoming edge. Degree-2 vertices with one edge each way
/// report `+1`; vertices fitting neither rule report `None`.
pub fn vertex_color(net: &PlanarDirectedNetwork, v: usize) -> Option<i32> {
    let outs = net.out_edges(v).len();
    let ins = net.in_edges(v).len();
    if outs == 1 {
        Some(1)
    } else if ins == 1 {
        Some(-1)
    } else {
        None
    }
}

/// Whether every internal vertex has exactly one outgoing or exactly one
/// incoming edge and every boundary vertex has degree one.
pub fn is_perfect(net: &PlanarDirectedNetwork) -> bool {
    let emb = net.embedding();
    (0..net.n()).all(|b| emb.degree(b) == 1) && emb.internal_vertices().all(|v| vertex_color(net, v).is_some())
}

/// `Σ col(v)(deg(v) − 2)` over internal vertices of a perfect network.
pub fn color_sum(net: &PlanarDirectedNetwork) -> Result<i64> {
    let emb = net.embedding();
    let mut s = 0i64;
    for v in emb.internal_vertices() {
        let c = vertex_color(net, v).ok_or_else(|| Error::precondition(format!("vertex {v} has no color")))?;
        s += c as i64 * (emb.degree(v) as i64 - 2);
    }
    Ok(s)
}

/// Removes internal vertices without incoming or without outgoing edges,
/// and smooths out vertices with one incoming and one outgoing edge, until
/// neither applies.
fn prune_and_smooth(net: &mut PlanarDirectedNetwork) {
    loop {
        let mut changed = false;
        let verts: Vec<usize> = net.embedding().internal_vertices().collect();
        for v in verts {
            if !net.embedding().has_vertex(v) {
                continue;
            }
            let (ins, outs) = (net.in_edges(v), net.out_edges(v));
            if ins.is_empty() || outs.is_empty() {
                for e in ins.iter().chain(outs.iter()) {
                    if net.embedding().has_edge(*e) {
                        net.remove_edge(*e);
                    }
                }
                net.embedding_mut().remove_vertex(v);
                changed = true;
            } else if ins.len() == 1 && outs.len() == 1 {
                let (a, b) = (ins[0], outs[0]);
                if a == b {
                    net.remove_edge(a);
                } else {
                    let w = net.head(b);
                    let wa = net.weight(a) * net.weight(b);
                    let pos = net.embedding().position(HalfEdge::new(b, 1));
                    net.remove_edge(b);
                    let emb = net.embedding_mut();
                    emb.set_rotation(v, Vec::new());
                    emb.set_end(HalfEdge::new(a, 1), w);
                    emb.insert_half_edge(w, pos, HalfEdge::new(a, 1));
                    net.set_weight(a, wa);
                }
                net.embedding_mut().remove_vertex(v);
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

/// Gives every boundary vertex degree one by inserting a new internal
/// vertex next to it.
fn isolate_boundary(net: &mut PlanarDirectedNetwork) {
    for b in 0..net.n() {
        let deg = net.embedding().degree(b);
        if deg == 1 {
            continue;
        }
        let src = net.is_source(b + 1);
        let old = net.embedding().rotation(b).to_vec();
        let bp = net.add_vertex();
        let f = net.embedding_mut().add_edge_raw(if src { b } else { bp }, if src { bp } else { b });
        net.push_weight(f, q(1));
        let f_at_b = HalfEdge::new(f, if src { 0 } else { 1 });
        let f_at_bp = f_at_b.opposite();
        let mut rot = vec![f_at_bp];
        if deg == 0 {
            // An isolated boundary vertex gets a lollipop: its neighbour
            // carries a loop so it is neither a source nor a sink.
            let l = net.embedding_mut().add_edge_raw(bp, bp);
            net.push_weight(l, q(1));
            rot.push(HalfEdge::new(l, 0));
            rot.push(HalfEdge::new(l, 1));
        } else {
            for &h in &old {
                net.embedding_mut().set_end(h, bp);
                rot.push(h);
            }
        }
        net.set_rotation(bp, rot);
        net.set_rotation(b, vec![f_at_b]);
    }
}

/// Splits off pairs of cyclically adjacent edge ends with the same direction
/// at vertices of degree above three.
fn split_same_direction(net: &mut PlanarDirectedNetwork) {
    let mut work: Vec<usize> = net.embedding().internal_vertices().collect();
    while let Some(v) = work.pop() {
        let rot = net.embedding().rotation(v).to_vec();
        let d = rot.len();
        if d <= 3 {
            continue;
        }
        let Some(i) = (0..d).find(|&i| rot[i].end == rot[(i + 1) % d].end) else {
            continue;
        };
        let (h1, h2) = (rot[i], rot[(i + 1) % d]);
        let incoming = h1.end == 1;
        let vp = net.add_vertex();
        let f = net.embedding_mut().add_edge_raw(if incoming { vp } else { v }, if incoming { v } else { vp });
        net.push_weight(f, q(1));
        let f_at_v = HalfEdge::new(f, if incoming { 1 } else { 0 });
        net.embedding_mut().set_end(h1, vp);
        net.embedding_mut().set_end(h2, vp);
        net.set_rotation(vp, vec![f_at_v.opposite(), h1, h2]);
        let mut new_rot: Vec<HalfEdge> = Vec::with_capacity(d - 1);
        for (j, &h) in rot.iter().enumerate() {
            if j == i {
                new_rot.push(f_at_v);
            } else if j != (i + 1) % d {
                new_rot.push(h);
            }
        }
        net.set_rotation(v, new_rot);
        work.push(v);
    }
}

/// Replaces every vertex of degree at least four (necessarily with
/// alternating edge directions) by a clockwise cycle of unit-weight edges,
/// doubling the weights of the incoming edges.
fn blow_up(net: &mut PlanarDirectedNetwork) {
    let verts: Vec<usize> = net.embedding().internal_vertices().collect();
    for v in verts {
        let rot = net.embedding().rotation(v).to_vec();
        let d = rot.len();
        if d <= 3 {
            continue;
        }
        let cyc: Vec<usize> = (0..d).map(|_| net.add_vertex()).collect();
        let arcs: Vec<usize> = (0..d)
            .map(|i| {
                let e = net.embedding_mut().add_edge_raw(cyc[i], cyc[(i + 1) % d]);
                net.push_weight(e, q(1));
                e
            })
            .collect();
        for (i, &h) in rot.iter().enumerate() {
            net.embedding_mut().set_end(h, cyc[i]);
            if h.end == 1 {
                let w = net.weight(h.edge) * q(2);
                net.set_weight(h.edge, w);
            }
            let out = HalfEdge::new(arcs[i], 0);
            let inc = HalfEdge::new(arcs[(i + d - 1) % d], 1);
            net.set_rotation(cyc[i], vec![h, out, inc]);
        }
        net.set_rotation(v, Vec::new());
        net.embedding_mut().remove_vertex(v);
    }
}

/// Transforms a network into a perfect network with trivalent internal
/// vertices and the same boundary measurements.
pub fn perfect_and_trivalent(net: &PlanarDirectedNetwork) -> Result<PlanarDirectedNetwork> {
    net.validate()?;
    let mut out = net.clone();
    prune_and_smooth(&mut out);
    isolate_boundary(&mut out);
    split_same_direction(&mut out);
    blow_up(&mut out);
    let out = out.compact();
    out.validate()?;
    if !is_perfect(&out) || out.embedding().internal_vertices().any(|v| out.embedding().degree(v) != 3) {
        return Err(Error::internal("perfection did not produce a perfect trivalent network"));
    }
    let expected = 2 * out.k() as i64 - out.n() as i64;
    if color_sum(&out)? != expected {
        return Err(Error::internal("color identity fails after perfection"));
    }
    Ok(out)
}

/// Reverses the edges in `h` and inverts their weights. The network must be
/// perfect and the switch must keep every internal vertex color; boundary
/// vertices on switched edges change between source and sink.
pub fn switch_orientation(net: &PlanarDirectedNetwork, h: &[usize]) -> Result<PlanarDirectedNetwork> {
    if !is_perfect(net) {
        return Err(Error::precondition("orientation switches require a perfect network"));
    }
    let set: BTreeSet<usize> = h.iter().copied().collect();
    for &e in &set {
        if !net.embedding().has_edge(e) {
            return Err(Error::precondition(format!("edge {e} does not exist")));
        }
    }
    let mut out = net.clone();
    for &e in &set {
        let [a, b] = net.embedding().ends(e);
        let emb = out.embedding_mut();
        let (h0, h1) = (HalfEdge::new(e, 0), HalfEdge::new(e, 1));
        let tmp = HalfEdge::new(e, 2);
        emb.replace_half_edge(a, h0, tmp);
        emb.replace_half_edge(b, h1, h0);
        emb.replace_half_edge(a, tmp, h1);
        emb.set_end(h0, b);
        emb.set_end(h1, a);
        let w = net.weight(e).recip();
        out.set_weight(e, w);
    }
    for v in net.embedding().internal_vertices() {
        let d = net.embedding().degree(v);
        if d != 2 && vertex_color(net, v) != vertex_color(&out, v) {
            return Err(Error::precondition(format!("switching changes the color of vertex {v}")));
        }
    }
    for b in 0..net.n() {
        let touches = net.embedding().rotation(b).iter().any(|x| set.contains(&x.edge));
        if touches {
            let s = net.is_source(b + 1);
            out.set_source_flag(b + 1, !s);
        }
    }
    out.validate()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{maximal_minor, qf};
    use crate::network::measure::{boundary_measurement, boundary_measurement_matrix, measure};
    use crate::network::random::{random_network, RandomNetworkParams};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn switch_example(x: Rational, y: Rational) -> (PlanarDirectedNetwork, Vec<usize>) {
        let mut net = PlanarDirectedNetwork::new(2, &[1]).unwrap();
        let v1 = net.add_vertex();
        let v2 = net.add_vertex();
        let e0 = net.add_edge(0, v1, q(1));
        let ex = net.embedding_mut().add_edge_raw(v1, v2);
        net.push_weight(ex, x);
        let ey = net.embedding_mut().add_edge_raw(v1, v2);
        net.push_weight(ey, y);
        let e3 = net.add_edge(v2, 1, q(1));
        net.set_rotation(v1, vec![HalfEdge::new(e0, 1), HalfEdge::new(ex, 0), HalfEdge::new(ey, 0)]);
        net.set_rotation(v2, vec![HalfEdge::new(e3, 0), HalfEdge::new(ey, 1), HalfEdge::new(ex, 1)]);
        net.validate().unwrap();
        (net, vec![e0, ey, e3])
    }

    #[test]
    fn switch_example_matrices() {
        let (net, h) = switch_example(q(1), q(2));
        assert_eq!(boundary_measurement_matrix(&net).unwrap().to_rows(), vec![vec![q(1), q(3)]]);
        let sw = switch_orientation(&net, &h).unwrap();
        assert_eq!(sw.source_set(), vec![2]);
        assert_eq!(boundary_measurement_matrix(&sw).unwrap().to_rows(), vec![vec![qf(1, 3), q(1)]]);
        assert!(measure(&net).unwrap().projectively_equal(&measure(&sw).unwrap()));
    }

    #[test]
    fn switch_rejects_color_change() {
        let (net, h) = switch_example(q(1), q(2));
        assert!(switch_orientation(&net, &h[..2]).is_err());
    }

    #[test]
    fn gauge_identity_and_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let net =
                random_network(&mut rng, &RandomNetworkParams { n: 4, internal: 5, edges: 10, ..Default::default() });
            assert_eq!(gauge_transform(&net, &BTreeMap::new()).unwrap(), net);
            let t: BTreeMap<usize, Rational> = net
                .embedding()
                .internal_vertices()
                .map(|v| (v, qf(rng.gen_range(1..7), rng.gen_range(1..5))))
                .collect();
            let g = gauge_transform(&net, &t).unwrap();
            assert_eq!(measure(&net).unwrap(), measure(&g).unwrap());
        }
        let net = random_network(&mut rng, &RandomNetworkParams::default());
        let v = net.embedding().internal_vertices().next().unwrap();
        assert!(gauge_transform(&net, &BTreeMap::from([(v, q(0))])).is_err());
        assert!(gauge_transform(&net, &BTreeMap::from([(0, q(2))])).is_err());
    }

    #[test]
    fn perfection_preserves_measurements() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for round in 0..60 {
            // Odd rounds allow high degrees but no directed cycles.
            let params = if round % 2 == 0 {
                RandomNetworkParams { n: 5, internal: 6, edges: 13, max_degree: Some(3), ..Default::default() }
            } else {
                RandomNetworkParams { n: 5, internal: 6, edges: 13, acyclic: true, ..Default::default() }
            };
            let net = random_network(&mut rng, &params);
            let p = perfect_and_trivalent(&net).unwrap();
            assert!(is_perfect(&p));
            assert_eq!(boundary_measurement_matrix(&net).unwrap(), boundary_measurement_matrix(&p).unwrap());
        }
    }

    #[test]
    fn blow_up_changes_touching_walk_signs() {
        // b1 → v → b2 with an excursion v → u → v leaving and re-entering
        // v through cyclically adjacent ends. Cycle erasure flips the sign
        // of the excursion, while the blown-up cycle turns it into a simple
        // path, so the measurement moves from 1/2 to 3/2.
        let text = "n 2\nsources 1\nvertex 1 boundary 0\nvertex 2 boundary 3\n\
            vertex 3 internal 0 1 2 3\nvertex 4 internal 2 1\n\
            edge 0 1 3 1\nedge 1 3 4 1\nedge 2 4 3 1\nedge 3 3 2 1\n";
        let net = PlanarDirectedNetwork::parse(text).unwrap();
        assert_eq!(boundary_measurement(&net, 1, 2).unwrap(), qf(1, 2));
        let p = perfect_and_trivalent(&net).unwrap();
        assert_eq!(boundary_measurement(&p, 1, 2).unwrap(), qf(3, 2));
    }

    #[test]
    fn perfect_trivalent_input_is_unchanged() {
        let (net, _) = switch_example(q(1), q(2));
        assert_eq!(perfect_and_trivalent(&net).unwrap(), net.compact());
    }

    #[test]
    fn degree_four_alternating_blow_up() {
        // b1 → v, b3 → v, v → b2, v → b4: alternating ends at v.
        let mut net = PlanarDirectedNetwork::new(4, &[1, 3]).unwrap();
        let v = net.add_vertex();
        let e1 = net.add_edge(0, v, q(2));
        let e2 = net.add_edge(v, 1, q(3));
        let e3 = net.add_edge(2, v, q(5));
        let e4 = net.add_edge(v, 3, q(7));
        let hs = [HalfEdge::new(e1, 1), HalfEdge::new(e2, 0), HalfEdge::new(e3, 1), HalfEdge::new(e4, 0)];
        net.set_rotation(v, hs.to_vec());
        net.validate().unwrap();
        let p = perfect_and_trivalent(&net).unwrap();
        assert_eq!(p.embedding().num_internal_vertices(), 4);
        let mut ws: Vec<Rational> = p.edges().map(|e| p.weight(e).clone()).collect();
        ws.sort();
        assert_eq!(ws, vec![q(1), q(1), q(1), q(1), q(3), q(4), q(7), q(10)]);
        assert_eq!(measure(&net).unwrap(), measure(&p).unwrap());
    }

    /// All simple directed paths from source `b_i` to a sink.
    fn simple_paths(net: &PlanarDirectedNetwork, i: usize) -> Vec<(Vec<usize>, usize)> {
        let adj = net.out_adjacency();
        let mut out = Vec::new();
        let mut stack = vec![(i - 1, vec![], vec![i - 1])];
        while let Some((v, es, vs)) = stack.pop() {
            for &(e, u) in &adj[v] {
                if vs.contains(&u) {
                    continue;
                }
                let mut es2: Vec<usize> = es.clone();
                es2.push(e);
                if u < net.n() {
                    out.push((es2, u + 1));
                } else {
                    let mut vs2 = vs.clone();
                    vs2.push(u);
                    stack.push((u, es2, vs2));
                }
            }
        }
        out
    }

    #[test]
    fn switching_a_path_relations() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut checked = 0;
        while checked < 25 {
            let net =
                random_network(&mut rng, &RandomNetworkParams { n: 4, internal: 5, edges: 11, ..Default::default() });
            let net = perfect_and_trivalent(&net).unwrap();
            let src = net.source_set();
            let Some(&i0) = src.first() else { continue };
            let paths = simple_paths(&net, i0);
            if paths.is_empty() {
                continue;
            }
            let (path, j0) = paths[rng.gen_range(0..paths.len())].clone();
            let sw = switch_orientation(&net, &path).unwrap();
            let m = |i, j| boundary_measurement(&net, i, j).unwrap();
            let mp = |i, j| boundary_measurement(&sw, i, j).unwrap();
            let a = boundary_measurement_matrix(&net).unwrap();
            let m00 = m(i0, j0);
            assert!(m00 > q(0));
            assert_eq!(mp(j0, i0), m00.recip());
            let n = net.n();
            let sinks: Vec<usize> = (1..=n).filter(|j| !src.contains(j)).collect();
            for &j in sinks.iter().filter(|&&j| j != j0) {
                assert_eq!(mp(j0, j), m(i0, j) / &m00);
            }
            for &i in src.iter().filter(|&&i| i != i0) {
                assert_eq!(mp(i, i0), m(i, j0) / &m00);
                for &j in sinks.iter().filter(|&&j| j != j0) {
                    let mut set: Vec<usize> = src.iter().copied().filter(|&s| s != i0 && s != i).collect();
                    set.push(j0);
                    set.push(j);
                    set.sort_unstable();
                    assert_eq!(mp(i, j), maximal_minor(&a, &set).unwrap() / &m00);
                }
            }
            assert!(measure(&net).unwrap().projectively_equal(&measure(&sw).unwrap()));
            checked += 1;
        }
    }

    #[test]
    fn color_identity_on_perfect_networks() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for _ in 0..30 {
            let net =
                random_network(&mut rng, &RandomNetworkParams { n: 5, internal: 5, edges: 12, ..Default::default() });
            let p = perfect_and_trivalent(&net).unwrap();
            assert_eq!(color_sum(&p).unwrap(), 2 * p.k() as i64 - p.n() as i64);
        }
    }
}
