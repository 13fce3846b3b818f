//! Random plabic networks and non-reduced gadgets for randomized checks.

use rand::seq::SliceRandom;
use rand::Rng;

use super::moves::{self, apply_move, generalized_squares, move_sites, Move};
use super::reduce::{normalize, square_steps};
use super::{from_decorated_permutation, is_reduced, PlabicGraph, PlabicNetwork};
use crate::embedding::HalfEdge;
use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::network::random_weight;
use crate::positroid::{Color, DecoratedPermutation};

/// Positive face weights `p/q` with `p ≤ 7`, `q ≤ 4` and product 1.
pub fn random_face_weights<R: Rng>(g: &PlabicGraph, rng: &mut R) -> Result<PlabicNetwork> {
    let f = g.num_faces()?;
    let mut w: Vec<Rational> = (0..f - 1).map(|_| random_weight(rng, 7, 4)).collect();
    let prod: Rational = w.iter().product();
    w.push(prod.recip());
    PlabicNetwork::new(g.clone(), w)
}

fn random_color<R: Rng>(rng: &mut R) -> Color {
    if rng.gen_bool(0.5) {
        Color::Black
    } else {
        Color::White
    }
}

/// A random move that preserves the network up to gauge: a square move
/// (with the uncontractions and contractions around it), an uncontraction,
/// a vertex insertion, a contraction or a degree-2 vertex removal.
pub fn random_move<R: Rng>(net: &PlabicNetwork, rng: &mut R) -> Result<PlabicNetwork> {
    let g = net.graph();
    let squares = generalized_squares(g);
    if !squares.is_empty() && rng.gen_bool(0.5) {
        let f = *squares.choose(rng).expect("nonempty");
        return Ok(square_steps(net, f)?.0);
    }
    let emb = g.embedding();
    let mut options = move_sites(g);
    let edges: Vec<usize> = emb.edges().collect();
    if let Some(&e) = edges.choose(rng) {
        options.push(Move::InsertVertex { edge: e, color: random_color(rng) });
    }
    let big: Vec<usize> = emb.internal_vertices().filter(|&v| emb.degree(v) >= 3).collect();
    if let Some(&v) = big.choose(rng) {
        let d = emb.degree(v);
        options.push(Move::Uncontract { vertex: v, start: rng.gen_range(0..d), len: rng.gen_range(1..d) });
    }
    match options.choose(rng) {
        Some(m) => apply_move(net, m),
        None => Ok(net.clone()),
    }
}

/// A reduced network of a uniformly random decorated permutation of size
/// `n`, contracted, with random face weights and `scramble` random moves.
pub fn random_reduced_network<R: Rng>(n: usize, scramble: usize, rng: &mut R) -> Result<PlabicNetwork> {
    let perms = DecoratedPermutation::all(n);
    let p = perms.choose(rng).ok_or_else(|| Error::validation("n must be positive"))?;
    random_network_of(p, scramble, rng)
}

/// A reduced network with decorated trip permutation `p`, contracted, with
/// random face weights and `scramble` random moves.
pub fn random_network_of<R: Rng>(p: &DecoratedPermutation, scramble: usize, rng: &mut R) -> Result<PlabicNetwork> {
    let g = from_decorated_permutation(p)?;
    let (unit, _) = normalize(&PlabicNetwork::unit(g)?, &mut Vec::new())?;
    let mut net = random_face_weights(unit.graph(), rng)?;
    for _ in 0..scramble {
        net = random_move(&net, rng)?;
    }
    Ok(net)
}

/// Gadgets that make a graph non-reduced, each creating one reduction site.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Gadget {
    /// Two new trivalent vertices of different colors on an edge, joined by
    /// a second edge.
    Bigon,
    /// A new degree-1 vertex attached to an internal vertex of the other color.
    Leaf,
    /// A floating edge between a black and a white vertex.
    Dipole,
    /// An empty loop at an internal vertex.
    Loop,
}

impl Gadget {
    pub const ALL: [Gadget; 4] = [Gadget::Bigon, Gadget::Leaf, Gadget::Dipole, Gadget::Loop];
}

/// `g` with gadget `kind` added at a random place, or `None` when the graph
/// has no suitable site. A leaf is only added where it makes the graph
/// non-reduced.
pub fn add_gadget<R: Rng>(g: &PlabicGraph, kind: Gadget, rng: &mut R) -> Option<PlabicGraph> {
    let mut h = g.clone();
    let emb = g.embedding();
    match kind {
        Gadget::Bigon => {
            let edges: Vec<usize> = emb.edges().filter(|&e| !emb.is_loop(e)).collect();
            let &e = edges.choose(rng)?;
            let c = random_color(rng);
            let (a, e2) = moves::insert_vertex(&mut h, e, c).ok()?;
            let (b, _) = moves::insert_vertex(&mut h, e2, c.opposite()).ok()?;
            let pa = h.embedding().position(HalfEdge::new(e2, 0));
            let pb = h.embedding().position(HalfEdge::new(e2, 1));
            h.add_edge_at(a, pa + 1, b, pb);
        }
        Gadget::Leaf => {
            // a chain of same-colored vertices ending in a leaf contracts
            // together with the new leaf into a lollipop, so sites are
            // tried until the result is genuinely not reduced
            let mut sites: Vec<(usize, usize)> = emb
                .internal_vertices()
                .filter(|&v| emb.degree(v) >= 2)
                .flat_map(|v| (0..=emb.degree(v)).map(move |p| (v, p)))
                .collect();
            sites.shuffle(rng);
            return sites.into_iter().find_map(|(w, p)| {
                let mut h = g.clone();
                let v = h.add_vertex(g.color(w).opposite());
                h.add_edge_at(w, p, v, 0);
                let check = is_reduced(&h).ok()?;
                (!check.is_reduced()).then_some(h)
            });
        }
        Gadget::Dipole => {
            let u = h.add_vertex(Color::Black);
            let v = h.add_vertex(Color::White);
            h.add_edge(u, v);
        }
        Gadget::Loop => {
            let vs: Vec<usize> = emb.internal_vertices().filter(|&v| emb.degree(v) >= 1).collect();
            let &w = vs.choose(rng)?;
            let p = rng.gen_range(0..=emb.degree(w));
            let hemb = h.embedding_mut();
            let l = hemb.add_edge_raw(w, w);
            hemb.insert_half_edge(w, p, HalfEdge::new(l, 0));
            hemb.insert_half_edge(w, p + 1, HalfEdge::new(l, 1));
        }
    }
    h.validate().ok()?;
    Some(h)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::super::{apply_reduction, first_perfect_orientation, measure_plabic, reduction_sites, trips, Reduction};
    use super::*;

    #[test]
    fn scrambled_networks_keep_measurement_and_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 3..=5 {
            let net = random_reduced_network(n, 0, &mut rng).unwrap();
            let target = measure_plabic(&net).unwrap();
            let perm = trips(net.graph()).decorated();
            let mut cur = net;
            for _ in 0..10 {
                cur = random_move(&cur, &mut rng).unwrap();
                assert!(measure_plabic(&cur).unwrap().projectively_equal(&target));
                assert_eq!(trips(cur.graph()).decorated(), perm);
            }
            assert!(is_reduced(cur.graph()).unwrap().is_reduced());
        }
    }

    #[test]
    fn gadgets_create_matching_reductions() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut tested = [0; 4];
        for _ in 0..10 {
            let net = random_reduced_network(4, 3, &mut rng).unwrap();
            let before = reduction_sites(net.graph()).len();
            for (idx, kind) in Gadget::ALL.into_iter().enumerate() {
                let Some(h) = (0..10)
                    .filter_map(|_| add_gadget(net.graph(), kind, &mut rng))
                    .find(|h| first_perfect_orientation(h).is_some())
                else {
                    continue;
                };
                assert!(!is_reduced(&h).unwrap().is_reduced(), "{kind:?}");
                let sites = reduction_sites(&h);
                assert!(sites.len() > before, "{kind:?}");
                let wanted = sites.iter().any(|r| {
                    matches!(
                        (kind, r),
                        (Gadget::Bigon, Reduction::ParallelEdges { .. })
                            | (Gadget::Leaf, Reduction::Leaf { .. })
                            | (Gadget::Dipole, Reduction::Dipole { .. })
                            | (Gadget::Loop, Reduction::EmptyLoop { .. })
                    )
                });
                assert!(wanted, "{kind:?}: {sites:?}");
                let hn = random_face_weights(&h, &mut rng).unwrap();
                let target = measure_plabic(&hn).unwrap();
                tested[idx] += 1;
                for r in sites {
                    let out = apply_reduction(&hn, &r).unwrap();
                    assert!(measure_plabic(&out).unwrap().projectively_equal(&target), "{r}");
                }
            }
        }
        assert!(tested.iter().all(|&t| t >= 3), "{tested:?}");
    }
}
