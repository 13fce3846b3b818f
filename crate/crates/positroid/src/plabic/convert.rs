//! Plabic graphs from Le-diagrams, Le-tableaux and decorated permutations.

use num_traits::One;

use super::orient::face_weights;
use super::{PlabicGraph, PlabicNetwork};
use crate::embedding::HalfEdge;
use crate::error::Result;
use crate::exactmath::Rational;
use crate::lediagram::{gamma_network, LeDiagram, LeTableau};
use crate::network::PlanarDirectedNetwork;
use crate::positroid::{le_from_perm, DecoratedPermutation};

/// The Γ-network of `T` made perfect: every box vertex with two incoming
/// (up, right) and two outgoing (down, left) edges is split into a black
/// vertex keeping the incoming pair and a white vertex keeping the outgoing
/// pair, joined by an edge of weight 1; isolated boundary sources get a
/// white leaf and isolated sinks a black leaf.
pub(crate) fn perfect_gamma_network(t: &LeTableau) -> PlanarDirectedNetwork {
    let mut net = gamma_network(t);
    let internal: Vec<usize> = net.embedding().internal_vertices().collect();
    for v in internal {
        let rot = net.embedding().rotation(v).to_vec();
        if rot.len() != 4 {
            continue;
        }
        // rotation is [up (in), right (in), down (out), left (out)]
        let b = net.add_vertex();
        let e = net.embedding_mut().add_edge_raw(v, b);
        net.push_weight(e, Rational::one());
        let emb = net.embedding_mut();
        emb.set_rotation(v, vec![rot[0], rot[1], HalfEdge::new(e, 0)]);
        emb.set_rotation(b, vec![HalfEdge::new(e, 1), rot[2], rot[3]]);
        emb.set_end(rot[2], b);
        emb.set_end(rot[3], b);
    }
    for i in 1..=net.n() {
        if net.embedding().degree(i - 1) == 0 {
            let leaf = net.add_vertex();
            if net.is_source(i) {
                net.add_edge(i - 1, leaf, Rational::one());
            } else {
                net.add_edge(leaf, i - 1, Rational::one());
            }
        }
    }
    debug_assert!(net.validate().is_ok());
    net
}

/// The plabic network of a Le-tableau, with face weights computed from the
/// edge weights of its perfect Γ-network.
pub fn from_le_tableau(t: &LeTableau) -> Result<PlabicNetwork> {
    face_weights(&perfect_gamma_network(t))
}

/// The plabic graph of a Le-diagram.
pub fn from_le_diagram(d: &LeDiagram) -> Result<PlabicGraph> {
    Ok(from_le_tableau(&d.unit_tableau())?.graph().clone())
}

/// A reduced plabic graph with decorated trip permutation `p`, built from
/// the Le-diagram of `p`.
pub fn from_decorated_permutation(p: &DecoratedPermutation) -> Result<PlabicGraph> {
    from_le_diagram(&le_from_perm(p)?)
}
