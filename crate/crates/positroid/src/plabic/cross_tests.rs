//! Checks of plabic graphs against Le-diagrams, decorated permutations and
//! Γ-network measurements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::exactmath::{matroid_of, q, Rational};
use crate::lediagram::{all_le_diagrams, meas_d, LeTableau};
use crate::network::boundary_measurement_matrix;
use crate::network::random_weight;
use crate::positroid::{perm_from_le, rank, DecoratedPermutation};

fn random_tableau(d: &crate::lediagram::LeDiagram, rng: &mut ChaCha8Rng) -> LeTableau {
    let values: Vec<Rational> = (0..d.size()).map(|_| random_weight(rng, 9, 5)).collect();
    LeTableau::from_diagram(d, &values).unwrap()
}

fn random_face_weights(g: &PlabicGraph, rng: &mut ChaCha8Rng) -> PlabicNetwork {
    let f = g.num_faces().unwrap();
    let mut w: Vec<Rational> = (0..f - 1).map(|_| random_weight(rng, 7, 4)).collect();
    let prod: Rational = w.iter().product();
    w.push(prod.recip());
    PlabicNetwork::new(g.clone(), w).unwrap()
}

#[test]
fn le_graphs_match_permutation_dimension_and_measurement() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=5 {
        for k in 0..=n {
            for d in all_le_diagrams(k, n) {
                let g = from_le_diagram(&d).unwrap();
                let td = trips(&g);
                assert_eq!(td.decorated(), Some(perm_from_le(&d)), "{}", d.to_text());
                assert!(is_reduced(&g).unwrap().is_reduced(), "{}", d.to_text());
                assert_eq!(g.num_faces().unwrap() - 1, d.size());
                assert_eq!(g.k().unwrap(), k);
                let t = random_tableau(&d, &mut rng);
                let net = from_le_tableau(&t).unwrap();
                let expected = meas_d(&t).unwrap();
                assert!(measure_plabic(&net).unwrap().projectively_equal(&expected), "{}", d.to_text());
                if n <= 4 {
                    assert_eq!(matroid(&g).unwrap(), expected.support());
                }
            }
        }
    }
}

#[test]
fn permutation_round_trip() {
    for n in 1..=5 {
        for p in DecoratedPermutation::all(n) {
            let g = from_decorated_permutation(&p).unwrap();
            assert_eq!(trips(&g).decorated(), Some(p.clone()));
            assert_eq!(g.num_faces().unwrap() - 1, rank(&p));
        }
    }
}

#[test]
fn orientation_independence_and_matroids() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for d in all_le_diagrams(2, 4).into_iter().chain(all_le_diagrams(2, 5)).filter(|d| d.size() >= 3) {
        let g = from_le_diagram(&d).unwrap();
        let net = random_face_weights(&g, &mut rng);
        let os = perfect_orientations(&g);
        let m = matroid(&g).unwrap();
        let first = measure_plabic_with(&net, &os[0]).unwrap();
        assert_eq!(first.support(), m);
        assert!(first.is_nonnegative());
        for o in &os {
            assert!(measure_plabic_with(&net, o).unwrap().projectively_equal(&first));
            assert_eq!(path_matroid(&g, o).unwrap(), m);
            let a = boundary_measurement_matrix(&edge_weights_from_faces(&net, o).unwrap()).unwrap();
            assert_eq!(matroid_of(&a).unwrap(), m);
        }
        assert_eq!(count_partial_matchings(&g), os.len());
        let comp: std::collections::BTreeSet<Vec<usize>> =
            m.bases().iter().map(|b| (1..=m.n()).filter(|x| !b.contains(x)).collect()).collect();
        assert_eq!(matching_matroid(&g).unwrap().bases(), &comp);
    }
}

fn top_cell(k: usize, n: usize) -> PlabicGraph {
    from_decorated_permutation(&DecoratedPermutation::top(k, n).unwrap()).unwrap()
}

/// The top cell graph with contractions applied, so squares are visible.
fn normalized_top_cell(k: usize, n: usize) -> PlabicGraph {
    let (net, _) = normalize(&PlabicNetwork::unit(top_cell(k, n)).unwrap(), &mut Vec::new()).unwrap();
    net.graph().clone()
}

/// Uncontracts the vertices of square `f` until trivalent and returns the
/// network with the index of the now strict square.
fn strict_square(net: &PlabicNetwork, f: usize) -> (PlabicNetwork, usize) {
    let (_, steps) = super::reduce::square_steps(net, f).unwrap();
    let pre: Vec<Step> =
        steps.iter().take_while(|s| matches!(s, Step::Move(Move::Uncontract { .. }))).cloned().collect();
    let Step::Move(Move::Square { face }) = steps[pre.len()] else { panic!("square step expected") };
    (replay(net, &pre).unwrap(), face)
}

#[test]
fn square_move_preserves_measurement_and_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut tested = 0;
    for (k, n) in [(2, 4), (2, 5), (3, 6)] {
        let g = normalized_top_cell(k, n);
        let perm = trips(&g).decorated();
        for _ in 0..4 {
            let net = random_face_weights(&g, &mut rng);
            let before = measure_plabic(&net).unwrap();
            for f in super::moves::generalized_squares(&g) {
                let (prepared, face) = strict_square(&net, f);
                assert!(is_square(prepared.graph(), face));
                let m = Move::Square { face };
                let after = apply_move(&prepared, &m).unwrap();
                assert!(measure_plabic(&after).unwrap().projectively_equal(&before), "square at {face} in ({k},{n})");
                assert_eq!(trips(after.graph()).decorated(), perm);
                assert!(is_reduced(after.graph()).unwrap().is_reduced());
                assert_eq!(after.weight(face), &prepared.weight(face).recip());
                assert_eq!(apply_move(&after, &m).unwrap(), prepared);
                let (full, _) = super::reduce::square_steps(&net, f).unwrap();
                assert!(measure_plabic(&full).unwrap().projectively_equal(&before));
                tested += 1;
            }
        }
    }
    assert!(tested >= 12, "only {tested} squares tested");
}

#[test]
fn square_move_unit_weights() {
    let g = normalized_top_cell(2, 4);
    let net = PlabicNetwork::unit(g.clone()).unwrap();
    let f = super::moves::generalized_squares(&g)[0];
    let (prepared, face) = strict_square(&net, f);
    let after = apply_move(&prepared, &Move::Square { face }).unwrap();
    let mut w: Vec<Rational> = after.weights().to_vec();
    w.sort();
    let half = crate::exactmath::qf(1, 2);
    assert_eq!(w, vec![half.clone(), half, q(1), q(2), q(2)]);
}

#[test]
fn parallel_reduction_preserves_measurement() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = super::tests_support::bigon();
    for _ in 0..5 {
        let net = random_face_weights(&g, &mut rng);
        let r = apply_reduction(&net, &Reduction::ParallelEdges { first: 1, second: 2 }).unwrap();
        assert_eq!(r.graph().num_faces().unwrap(), 2);
        assert!(measure_plabic(&r).unwrap().projectively_equal(&measure_plabic(&net).unwrap()));
    }
    let unit = PlabicNetwork::unit(g).unwrap();
    let r = apply_reduction(&unit, &Reduction::ParallelEdges { first: 1, second: 2 }).unwrap();
    let mut w = r.weights().to_vec();
    w.sort();
    assert_eq!(w, vec![crate::exactmath::qf(1, 2), q(2)]);
}

#[test]
fn random_moves_preserve_measurement() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (k, n) in [(2, 4), (2, 5), (3, 5), (3, 6)] {
        let mut net = random_face_weights(&normalized_top_cell(k, n), &mut rng);
        let target = measure_plabic(&net).unwrap();
        let perm = trips(net.graph()).decorated();
        for _ in 0..12 {
            let g = net.graph().clone();
            let mut options: Vec<Move> = move_sites(&g);
            let edges: Vec<usize> = g.embedding().edges().collect();
            let e = edges[rng.gen_range(0..edges.len())];
            let c = if rng.gen_bool(0.5) { crate::positroid::Color::Black } else { crate::positroid::Color::White };
            options.push(Move::InsertVertex { edge: e, color: c });
            let vs: Vec<usize> = g.embedding().internal_vertices().filter(|&v| g.embedding().degree(v) >= 3).collect();
            if !vs.is_empty() {
                let v = vs[rng.gen_range(0..vs.len())];
                let d = g.embedding().degree(v);
                options.push(Move::Uncontract { vertex: v, start: rng.gen_range(0..d), len: rng.gen_range(1..d) });
            }
            let m = &options[rng.gen_range(0..options.len())];
            net = apply_move(&net, m).unwrap();
            assert!(measure_plabic(&net).unwrap().projectively_equal(&target), "after {m}");
            assert_eq!(trips(net.graph()).decorated(), perm, "after {m}");
            let prod: Rational = net.weights().iter().product();
            assert_eq!(prod, q(1));
        }
    }
}

/// `g` with a parallel copy of edge `e` next to it.
fn with_parallel_edge(g: &PlabicGraph, e: usize) -> PlabicGraph {
    let mut h = g.clone();
    let emb = g.embedding();
    let [a, b] = emb.ends(e);
    let pa = emb.position(crate::embedding::HalfEdge::new(e, 0));
    let pb = emb.position(crate::embedding::HalfEdge::new(e, 1));
    h.add_edge_at(a, pa + 1, b, pb);
    h.validate().unwrap();
    h
}

#[test]
fn reduce_bigon_to_chord() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let net = random_face_weights(&super::tests_support::bigon(), &mut rng);
    let r = reduce(&net).unwrap();
    assert_eq!(r.network.graph().embedding().internal_vertices().count(), 0);
    assert_eq!(trips(r.network.graph()).perm, vec![2, 1]);
    assert!(measure_plabic(&r.network).unwrap().projectively_equal(&measure_plabic(&net).unwrap()));
    assert_eq!(replay(&net, &r.trace).unwrap(), r.network);
    assert_eq!(r.singletons, 0);
}

#[test]
fn reduce_keeps_reduced_contracted_graphs() {
    for (k, n) in [(1, 3), (2, 4), (2, 5), (3, 6)] {
        let net = PlabicNetwork::unit(normalized_top_cell(k, n)).unwrap();
        let r = reduce(&net).unwrap();
        assert!(r.trace.is_empty());
        assert_eq!(r.network, net);
    }
}

#[test]
fn reduce_removes_added_parallel_edges() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for (k, n) in [(2, 4), (2, 5), (3, 6)] {
        let mut g = normalized_top_cell(k, n);
        for _ in 0..6 {
            let sites: Vec<usize> = super::moves::generalized_squares(&g);
            let f = sites[rng.gen_range(0..sites.len())];
            let (next, _) = super::reduce::square_steps(&PlabicNetwork::unit(g.clone()).unwrap(), f).unwrap();
            g = next.graph().clone();
        }
        let perm = trips(&g).decorated().unwrap();
        let internal: Vec<usize> = g
            .embedding()
            .edges()
            .filter(|&e| {
                let [a, b] = g.embedding().ends(e);
                g.is_internal(a) && g.is_internal(b)
            })
            .collect();
        let e = internal[rng.gen_range(0..internal.len())];
        let h = with_parallel_edge(&g, e);
        assert!(!is_reduced(&h).unwrap().is_reduced());
        let net = random_face_weights(&h, &mut rng);
        let target = measure_plabic(&net).unwrap();
        let r = reduce(&net).unwrap();
        assert!(is_reduced(r.network.graph()).unwrap().is_reduced());
        assert_eq!(trips(r.network.graph()).decorated(), Some(perm));
        assert!(measure_plabic(&r.network).unwrap().projectively_equal(&target));
        assert_eq!(replay(&net, &r.trace).unwrap(), r.network);
        assert_eq!(r.network.graph().num_faces().unwrap(), g.num_faces().unwrap());
    }
}

#[test]
fn removable_edges_give_covered_cells() {
    for n in 2..=5 {
        for k in 1..n {
            for d in all_le_diagrams(k, n) {
                let (net, _) =
                    normalize(&PlabicNetwork::unit(from_le_diagram(&d).unwrap()).unwrap(), &mut Vec::new()).unwrap();
                let g = net.graph();
                let perm = trips(g).decorated().unwrap();
                let covers = crate::positroid::covers(&perm);
                let found = removable_edges(g).unwrap();
                for r in found {
                    assert!(covers.contains(&r.covered), "{}", d.to_text());
                    let h = delete_edge(g, r.edge).unwrap();
                    assert!(is_reduced(&h).unwrap().is_reduced());
                    assert_eq!(trips(&h).decorated(), Some(r.covered.clone()));
                    assert_eq!(h.num_faces().unwrap(), g.num_faces().unwrap() - 1);
                }
            }
        }
    }
}

#[test]
fn top_cells_have_removable_edges() {
    for (k, n) in [(2, 4), (2, 5), (3, 6)] {
        let g = normalized_top_cell(k, n);
        let found = removable_edges(&g).unwrap();
        assert!(!found.is_empty());
        for r in &found {
            assert_eq!(rank(&r.covered), k * (n - k) - 1);
        }
    }
}
