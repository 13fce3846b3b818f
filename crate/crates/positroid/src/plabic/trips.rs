//! Trips (turn right at black vertices, left at white ones), the decorated
//! trip permutation, the reducedness criterion and removable edges.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::reduce::contract_all;
use super::PlabicGraph;
use crate::embedding::HalfEdge;
use crate::error::{Error, Result};
use crate::positroid::{is_simple_crossing, uncross, Color, DecoratedPermutation};

/// A one-way trip from `b_start` to `b_end`, as the half-edges it leaves by.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trip {
    pub start: usize,
    pub end: usize,
    pub steps: Vec<HalfEdge>,
}

/// All trips of a plabic graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripDecomposition {
    /// One-way trips, the `i`-th starting at `b_{i+1}`.
    pub trips: Vec<Trip>,
    /// Closed trips avoiding the boundary.
    pub round_trips: Vec<Vec<HalfEdge>>,
    /// `π(i)`: the endpoint of the trip from `b_i`.
    pub perm: Vec<usize>,
    /// Fixed-point colors read from boundary leaves (`None` when a fixed
    /// point has no boundary leaf, even after contraction).
    pub fixed_colors: Vec<Option<Color>>,
}

impl TripDecomposition {
    /// The decorated trip permutation, when every fixed point is colored.
    pub fn decorated(&self) -> Option<DecoratedPermutation> {
        DecoratedPermutation::new(self.perm.clone(), self.fixed_colors.clone()).ok()
    }
}

/// The half-edge a trip leaves by after arriving through `arrive`.
fn next_step(g: &PlabicGraph, arrive: HalfEdge) -> HalfEdge {
    let emb = g.embedding();
    let v = emb.vertex_at(arrive);
    let rot = emb.rotation(v);
    let d = rot.len();
    let p = emb.position(arrive);
    match g.color(v) {
        Color::Black => rot[(p + d - 1) % d],
        Color::White => rot[(p + 1) % d],
    }
}

fn leaf_color(g: &PlabicGraph, i: usize) -> Option<Color> {
    let emb = g.embedding();
    let w = g.boundary_neighbour(i)?;
    (g.is_internal(w) && emb.degree(w) == 1).then(|| g.color(w))
}

fn trace(g: &PlabicGraph) -> (Vec<Trip>, Vec<Vec<HalfEdge>>) {
    let emb = g.embedding();
    let mut used: BTreeSet<HalfEdge> = BTreeSet::new();
    let mut trips = Vec::new();
    for i in 1..=g.n() {
        let mut h = emb.rotation(i - 1)[0];
        let mut steps = Vec::new();
        loop {
            used.insert(h);
            steps.push(h);
            let arrive = h.opposite();
            let w = emb.vertex_at(arrive);
            if !g.is_internal(w) {
                trips.push(Trip { start: i, end: w + 1, steps });
                break;
            }
            h = next_step(g, arrive);
        }
    }
    let mut round = Vec::new();
    for e in emb.edges() {
        for end in 0..2u8 {
            let h0 = HalfEdge::new(e, end);
            if used.contains(&h0) || !g.is_internal(emb.vertex_at(h0)) {
                continue;
            }
            let mut cycle = Vec::new();
            let mut h = h0;
            loop {
                used.insert(h);
                cycle.push(h);
                h = next_step(g, h.opposite());
                if h == h0 {
                    break;
                }
            }
            round.push(cycle);
        }
    }
    (trips, round)
}

/// All trips and the decorated trip permutation. Fixed points take the
/// color of the boundary leaf at `b_i`; when there is none the graph is
/// first contracted (unicolored edges, degree-2 vertices) and read again.
pub fn trips(g: &PlabicGraph) -> TripDecomposition {
    let (trips, round_trips) = trace(g);
    let perm: Vec<usize> = trips.iter().map(|t| t.end).collect();
    let mut fixed_colors: Vec<Option<Color>> =
        (1..=g.n()).map(|i| if perm[i - 1] == i { leaf_color(g, i) } else { None }).collect();
    let missing: Vec<usize> = (1..=g.n()).filter(|&i| perm[i - 1] == i && fixed_colors[i - 1].is_none()).collect();
    if !missing.is_empty() {
        let mut h = g.clone();
        contract_all(&mut h);
        for i in missing {
            fixed_colors[i - 1] = leaf_color(&h, i);
        }
    }
    TripDecomposition { trips, round_trips, perm, fixed_colors }
}

/// Why a graph is not reduced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// An internal leaf whose neighbour has the opposite color (a leaf
    /// reduction applies after contraction).
    ReducibleLeaf { vertex: usize },
    /// A closed trip.
    RoundTrip { steps: Vec<HalfEdge> },
    /// A trip traversing a bicolored edge in both directions.
    SelfIntersection { trip: usize, edge: usize },
    /// Two trips traversing the bicolored edges `first` and `second` in the
    /// same order.
    BadDoubleCrossing { trips: (usize, usize), edges: (usize, usize) },
    /// A fixed point whose boundary vertex is not attached to a leaf.
    FixedPointWithoutLeaf { label: usize },
    /// A component not connected to the boundary (removable by dipole,
    /// singleton and leaf reductions).
    FloatingComponent { vertices: Vec<usize> },
}

/// Outcome of the reducedness test, with the contracted graph it was
/// decided on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedCheck {
    pub violation: Option<Violation>,
    pub contracted: PlabicGraph,
}

impl ReducedCheck {
    pub fn is_reduced(&self) -> bool {
        self.violation.is_none()
    }
}

/// Whether `g` is reduced. The graph is first contracted by moves only
/// (unicolored edges, degree-2 vertices); an internal leaf left over then
/// admits a leaf reduction. Otherwise: no round trips, no trip crossing a
/// bicolored edge twice, no two trips crossing two bicolored edges in the
/// same order, and every fixed point at a boundary leaf. Components not
/// connected to the boundary are reported before any contraction.
pub fn is_reduced(g: &PlabicGraph) -> Result<ReducedCheck> {
    g.validate()?;
    if let Some(c) = g.embedding().floating_components().into_iter().next() {
        return Ok(ReducedCheck {
            violation: Some(Violation::FloatingComponent { vertices: c }),
            contracted: g.clone(),
        });
    }
    let mut h = g.clone();
    contract_all(&mut h);
    let violation = find_violation(&h);
    Ok(ReducedCheck { violation, contracted: h })
}

fn find_violation(h: &PlabicGraph) -> Option<Violation> {
    let emb = h.embedding();
    for v in emb.internal_vertices() {
        if emb.degree(v) == 1 && h.is_internal(emb.across(emb.rotation(v)[0])) {
            return Some(Violation::ReducibleLeaf { vertex: v });
        }
    }
    let (trips, round) = trace(h);
    if let Some(steps) = round.into_iter().next() {
        return Some(Violation::RoundTrip { steps });
    }
    let essential = |e: usize| {
        let [a, b] = emb.ends(e);
        h.is_internal(a) && h.is_internal(b) && h.color(a) != h.color(b)
    };
    // per essential edge: (trip, step index) of its two traversals
    let mut passes: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (t, trip) in trips.iter().enumerate() {
        for (s, step) in trip.steps.iter().enumerate() {
            if essential(step.edge) {
                passes.entry(step.edge).or_default().push((t, s));
            }
        }
    }
    for (&e, p) in &passes {
        if p.len() == 2 && p[0].0 == p[1].0 {
            return Some(Violation::SelfIntersection { trip: trips[p[0].0].start, edge: e });
        }
    }
    // per pair of trips: (edge, step in the first trip, step in the second)
    type Crossings = Vec<(usize, usize, usize)>;
    let mut by_pair: BTreeMap<(usize, usize), Crossings> = BTreeMap::new();
    for (&e, p) in &passes {
        if p.len() == 2 {
            let (a, b) = if p[0].0 < p[1].0 { (p[0], p[1]) } else { (p[1], p[0]) };
            by_pair.entry((a.0, b.0)).or_default().push((e, a.1, b.1));
        }
    }
    for (&(ta, tb), list) in &by_pair {
        for x in 0..list.len() {
            for y in x + 1..list.len() {
                let (e1, a1, b1) = list[x];
                let (e2, a2, b2) = list[y];
                if (a1 < a2) == (b1 < b2) {
                    let (first, second) = if a1 < a2 { (e1, e2) } else { (e2, e1) };
                    return Some(Violation::BadDoubleCrossing {
                        trips: (trips[ta].start, trips[tb].start),
                        edges: (first, second),
                    });
                }
            }
        }
    }
    for t in &trips {
        if t.end == t.start && leaf_color(h, t.start).is_none() {
            return Some(Violation::FixedPointWithoutLeaf { label: t.start });
        }
    }
    None
}

/// A removable edge: its two trips form a simple crossing, and deleting it
/// gives the graph of the covered cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemovableEdge {
    pub edge: usize,
    pub covered: DecoratedPermutation,
}

/// Edges of a reduced contracted graph whose two trips `T_i`, `T_j` form a
/// simple crossing `(i, j)` of the trip permutation, each with the
/// permutation obtained by replacing that crossing with an alignment.
pub fn removable_edges(g: &PlabicGraph) -> Result<Vec<RemovableEdge>> {
    let check = is_reduced(g)?;
    if let Some(v) = check.violation {
        return Err(Error::precondition(format!("the graph is not reduced: {v:?}")));
    }
    let emb = g.embedding();
    let contracted = emb.edges().all(|e| {
        let [a, b] = emb.ends(e);
        !(g.is_internal(a) && g.is_internal(b) && g.color(a) == g.color(b))
    }) && emb.internal_vertices().all(|v| emb.degree(v) != 2);
    if !contracted {
        return Err(Error::precondition("the graph must be contracted (no unicolored edges, no degree-2 vertices)"));
    }
    let td = trips(g);
    let perm = td.decorated().ok_or_else(|| Error::internal("reduced graph with an uncolored fixed point"))?;
    let mut by_edge: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for t in &td.trips {
        for s in &t.steps {
            by_edge.entry(s.edge).or_default().push(t.start);
        }
    }
    let mut out = Vec::new();
    for e in emb.edges() {
        let [a, b] = emb.ends(e);
        if !g.is_internal(a) || !g.is_internal(b) {
            continue;
        }
        let Some(ts) = by_edge.get(&e) else { continue };
        if ts.len() != 2 || ts[0] == ts[1] {
            continue;
        }
        let (i, j) = (ts[0], ts[1]);
        for (x, y) in [(i, j), (j, i)] {
            if is_simple_crossing(&perm, x, y) {
                out.push(RemovableEdge { edge: e, covered: uncross(&perm, x, y) });
                break;
            }
        }
    }
    Ok(out)
}

/// `g` without edge `e` (endpoints are kept).
pub fn delete_edge(g: &PlabicGraph, e: usize) -> Result<PlabicGraph> {
    if !g.embedding().has_edge(e) {
        return Err(Error::precondition(format!("edge {e} does not exist")));
    }
    let mut h = g.clone();
    h.embedding_mut().remove_edge(e);
    h.validate()?;
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::super::tests_support::*;
    use super::*;

    #[test]
    fn leaf_trips() {
        let g = leaves(3, &[2]);
        let td = trips(&g);
        assert_eq!(td.perm, vec![1, 2, 3]);
        assert_eq!(td.fixed_colors, vec![Some(Color::Black), Some(Color::White), Some(Color::Black)]);
        assert!(is_reduced(&g).unwrap().is_reduced());
    }

    #[test]
    fn bigon_not_reduced() {
        let g = bigon();
        let c = is_reduced(&g).unwrap();
        assert!(matches!(c.violation, Some(Violation::BadDoubleCrossing { .. })), "{:?}", c.violation);
        let td = trips(&g);
        // the trips bounce back through the bigon; the reduced chord has (2, 1)
        assert_eq!(td.perm, vec![1, 2]);
        assert_eq!(td.fixed_colors, vec![None, None]);
        assert!(td.round_trips.is_empty());
    }

    #[test]
    fn loop_not_reduced() {
        let mut g = PlabicGraph::new(2);
        let v = g.add_vertex(Color::Black);
        g.add_edge(0, v);
        let l = g.embedding_mut().add_edge_raw(v, v);
        g.embedding_mut().insert_half_edge(v, 1, HalfEdge::new(l, 0));
        g.embedding_mut().insert_half_edge(v, 2, HalfEdge::new(l, 1));
        g.add_edge(v, 1);
        g.validate().unwrap();
        assert!(!is_reduced(&g).unwrap().is_reduced());
        let td = trips(&g);
        assert_eq!(td.round_trips.len(), 1);
    }
}
