//! Normalization and reduction of plabic networks, with a replayable trace.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::moves::{self, apply_move, apply_reduction, generalized_squares, Move, Reduction};
use super::{PlabicGraph, PlabicNetwork};
use crate::embedding::Dart;
use crate::error::{Error, Result};

/// One step of a reduction trace.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step {
    Move(Move),
    Reduction(Reduction),
}

impl std::fmt::Display for Step {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Step::Move(m) => write!(f, "move {m}"),
            Step::Reduction(r) => write!(f, "reduce {r}"),
        }
    }
}

impl std::str::FromStr for Step {
    type Err = Error;

    /// Parses `"move <move>"`, `"reduce <reduction>"` or a bare move or
    /// reduction.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("move ") {
            return Ok(Step::Move(rest.parse()?));
        }
        if let Some(rest) = s.strip_prefix("reduce ") {
            return Ok(Step::Reduction(rest.parse()?));
        }
        s.parse::<Move>().map(Step::Move).or_else(|_| s.parse::<Reduction>().map(Step::Reduction))
    }
}

impl Step {
    /// The step with every vertex id replaced by `f(id)`.
    pub fn map_vertices(&self, f: impl Fn(usize) -> usize) -> Step {
        match self {
            Step::Move(m) => Step::Move(m.map_vertices(f)),
            Step::Reduction(r) => Step::Reduction(r.map_vertices(f)),
        }
    }

    /// The step with vertex ids replaced by `fv(id)` and edge ids by `fe(id)`.
    pub fn map_ids(&self, fv: impl Fn(usize) -> usize, fe: impl Fn(usize) -> usize) -> Step {
        match self {
            Step::Move(m) => Step::Move(m.map_ids(fv, fe)),
            Step::Reduction(r) => Step::Reduction(r.map_ids(fv, fe)),
        }
    }
}

/// Rewrites a trace recorded from `start` so that every step refers to the
/// ids of the compacted graph it applies to. Replaying the result while
/// compacting after each step, as a file-based workflow does, reproduces
/// the original sequence. Compaction keeps the relative order of vertex
/// and edge ids, so face ids are unchanged.
pub fn compact_trace(start: &PlabicNetwork, trace: &[Step]) -> Result<Vec<Step>> {
    let mut cur = start.clone();
    let mut out = Vec::with_capacity(trace.len());
    for s in trace {
        let (_, vmap, emap) = cur.graph().embedding().compact();
        let bad = std::cell::Cell::new(false);
        let look = |map: &[Option<usize>], id: usize| {
            map.get(id).copied().flatten().unwrap_or_else(|| {
                bad.set(true);
                id
            })
        };
        let mapped = s.map_ids(|v| look(&vmap, v), |e| look(&emap, e));
        if bad.get() {
            return Err(Error::internal(format!("step {s} refers to a removed id")));
        }
        out.push(mapped);
        cur = apply_step(&cur, s)?;
    }
    Ok(out)
}

/// Output of [`reduce`].
#[derive(Clone, Debug)]
pub struct ReduceResult {
    pub network: PlabicNetwork,
    pub singletons: usize,
    pub trace: Vec<Step>,
}

/// Maximum number of graphs explored by the square-move search.
pub const SEARCH_BUDGET: usize = 20_000;

/// The next contraction move: a degree-2 vertex removal, else a unicolored
/// edge contraction.
fn next_contraction(g: &PlabicGraph) -> Option<Move> {
    let emb = g.embedding();
    for v in emb.internal_vertices() {
        let rot = emb.rotation(v);
        if rot.len() == 2 && rot[0].edge != rot[1].edge {
            return Some(Move::RemoveVertex { vertex: v });
        }
    }
    for e in emb.edges() {
        let [a, b] = emb.ends(e);
        if a != b && g.is_internal(a) && g.is_internal(b) && g.color(a) == g.color(b) {
            return Some(Move::Contract { edge: e });
        }
    }
    None
}

/// Removes degree-2 vertices and contracts unicolored edges until none remain.
pub(crate) fn contract_all(g: &mut PlabicGraph) {
    while let Some(m) = next_contraction(g) {
        match m {
            Move::RemoveVertex { vertex } => moves::remove_vertex(g, vertex).map(|_| ()),
            Move::Contract { edge } => moves::contract(g, edge).map(|_| ()),
            _ => unreachable!("only contractions are produced"),
        }
        .expect("site was checked");
    }
}

/// Moves that make a vertex trivalent while keeping the two half-edges at
/// rotation positions `p` and `p + 1` on it.
fn trivalent_at(g: &PlabicGraph, v: usize, p: usize) -> Option<Move> {
    let d = g.embedding().degree(v);
    (d > 3).then(|| Move::Uncontract { vertex: v, start: (p + 2) % d, len: d - 2 })
}

/// A bigon between internal vertices of different colors, with the
/// uncontractions that make both endpoints trivalent.
fn parallel_site(g: &PlabicGraph) -> Option<(Vec<Move>, Reduction)> {
    let faces = g.faces().ok()?;
    let emb = g.embedding();
    for face in faces.iter() {
        if face.darts.len() != 2 {
            continue;
        }
        let (Some(e1), Some(e2)) = (face.darts[0].real_edge(), face.darts[1].real_edge()) else { continue };
        if e1 == e2 {
            continue;
        }
        let [u, w] = emb.ends(e1);
        if u == w || !g.is_internal(u) || !g.is_internal(w) || g.color(u) == g.color(w) {
            continue;
        }
        let third_edges = |v: usize| emb.rotation(v).iter().filter(|h| h.edge != e1 && h.edge != e2).count();
        if third_edges(u) == 0 || third_edges(w) == 0 {
            continue;
        }
        let mut pre = Vec::new();
        for v in [u, w] {
            let rot = emb.rotation(v);
            let d = rot.len();
            let p = (0..d)
                .find(|&i| {
                    let (a, b) = (rot[i].edge, rot[(i + 1) % d].edge);
                    (a == e1 && b == e2) || (a == e2 && b == e1)
                })
                .expect("bigon edges are adjacent");
            pre.extend(trivalent_at(g, v, p));
        }
        return Some((pre, Reduction::ParallelEdges { first: e1.min(e2), second: e1.max(e2) }));
    }
    None
}

/// The first applicable simplification step (reductions other than the
/// parallel-edge one, then contractions, then a parallel-edge reduction
/// with its preparatory uncontractions).
fn next_simplification(g: &PlabicGraph) -> Option<Vec<Step>> {
    let emb = g.embedding();
    for v in emb.internal_vertices() {
        if emb.degree(v) == 0 {
            return Some(vec![Step::Reduction(Reduction::Singleton { vertex: v })]);
        }
    }
    for v in emb.internal_vertices() {
        let rot = emb.rotation(v);
        if rot.len() == 1 {
            let w = emb.across(rot[0]);
            if g.is_internal(w) && emb.degree(w) == 1 && g.color(w) != g.color(v) {
                return Some(vec![Step::Reduction(Reduction::Dipole { edge: rot[0].edge })]);
            }
        }
    }
    if let Some(m) = next_contraction(g) {
        return Some(vec![Step::Move(m)]);
    }
    for v in emb.internal_vertices() {
        let rot = emb.rotation(v);
        if rot.len() == 1 {
            let w = emb.across(rot[0]);
            if g.is_internal(w) && g.color(w) != g.color(v) && emb.degree(w) >= 3 {
                return Some(vec![Step::Reduction(Reduction::Leaf { vertex: v })]);
            }
        }
    }
    if let Ok(faces) = g.faces() {
        for face in faces.iter() {
            if let [d] = face.darts[..] {
                if let Some(l) = d.real_edge() {
                    if emb.is_loop(l) && emb.degree(emb.ends(l)[0]) > 2 {
                        return Some(vec![Step::Reduction(Reduction::EmptyLoop { edge: l })]);
                    }
                }
            }
        }
    }
    parallel_site(g).map(|(pre, r)| pre.into_iter().map(Step::Move).chain([Step::Reduction(r)]).collect())
}

/// Applies one step.
pub fn apply_step(n: &PlabicNetwork, s: &Step) -> Result<PlabicNetwork> {
    match s {
        Step::Move(m) => apply_move(n, m),
        Step::Reduction(r) => apply_reduction(n, r),
    }
}

/// Replays a trace.
pub fn replay(n: &PlabicNetwork, trace: &[Step]) -> Result<PlabicNetwork> {
    trace.iter().try_fold(n.clone(), |acc, s| apply_step(&acc, s))
}

/// Applies simplification steps until none applies. Returns the number of
/// singletons removed.
pub fn normalize(n: &PlabicNetwork, trace: &mut Vec<Step>) -> Result<(PlabicNetwork, usize)> {
    let mut cur = n.clone();
    let mut singletons = 0;
    while let Some(steps) = next_simplification(cur.graph()) {
        for s in steps {
            if matches!(s, Step::Reduction(Reduction::Singleton { .. })) {
                singletons += 1;
            }
            cur = apply_step(&cur, &s)?;
            trace.push(s);
        }
    }
    Ok((cur, singletons))
}

/// Square moves at a face, preceded by the uncontractions that make its
/// vertices trivalent, followed by contractions.
pub(crate) fn square_steps(n: &PlabicNetwork, f: usize) -> Result<(PlabicNetwork, Vec<Step>)> {
    let mut steps = Vec::new();
    let mut cur = n.clone();
    let faces = cur.graph().faces()?;
    let darts: Vec<Dart> = faces.get(f).darts.clone();
    for &d in &darts {
        let g = cur.graph();
        let e = d.real_edge().expect("square darts are real");
        let v = g.embedding().ends(e)[if d.forward { 0 } else { 1 }];
        // the corner of the square at v lies between the arriving dart's
        // edge and this dart's edge, which are adjacent in the rotation
        let rot = g.embedding().rotation(v);
        let dd = rot.len();
        let here = g.embedding().position(crate::embedding::HalfEdge::new(e, if d.forward { 0 } else { 1 }));
        let p = (here + dd - 1) % dd;
        if let Some(m) = trivalent_at(g, v, p) {
            cur = apply_move(&cur, &m)?;
            steps.push(Step::Move(m));
        }
    }
    let faces = cur.graph().faces()?;
    let face = faces.left_of(darts[0]).ok_or_else(|| Error::internal("square face lost"))?;
    let m = Move::Square { face };
    cur = apply_move(&cur, &m)?;
    steps.push(Step::Move(m));
    while let Some(m) = next_contraction(cur.graph()) {
        cur = apply_move(&cur, &m)?;
        steps.push(Step::Move(m));
    }
    Ok((cur, steps))
}

fn violated(g: &PlabicGraph) -> bool {
    super::trips::is_reduced(g).map(|c| !c.is_reduced()).unwrap_or(true)
}

/// Reduces a network: simplifications (singleton, dipole, leaf, empty loop
/// and parallel-edge reductions, contractions) are applied greedily; when
/// none applies and the graph is not reduced, a breadth-first search over
/// square moves finds a graph where one does.
pub fn reduce(n: &PlabicNetwork) -> Result<ReduceResult> {
    let mut trace = Vec::new();
    let mut singletons = 0;
    let mut cur = n.clone();
    loop {
        let (next, s) = normalize(&cur, &mut trace)?;
        cur = next;
        singletons += s;
        if !violated(cur.graph()) {
            return Ok(ReduceResult { network: cur, singletons, trace });
        }
        let (found, path) = search_reducible(&cur)?;
        cur = found;
        trace.extend(path);
    }
}

fn search_reducible(start: &PlabicNetwork) -> Result<(PlabicNetwork, Vec<Step>)> {
    let mut seen: HashSet<String> = HashSet::from([start.graph().canonical_key()]);
    let mut queue: VecDeque<(PlabicNetwork, Vec<Step>)> = VecDeque::from([(start.clone(), Vec::new())]);
    while let Some((net, path)) = queue.pop_front() {
        for f in generalized_squares(net.graph()) {
            let (next, steps) = square_steps(&net, f)?;
            if !seen.insert(next.graph().canonical_key()) {
                continue;
            }
            let mut p = path.clone();
            p.extend(steps);
            if next_simplification(next.graph()).is_some() {
                return Ok((next, p));
            }
            if seen.len() > SEARCH_BUDGET {
                return Err(Error::internal(format!("no reduction found within {SEARCH_BUDGET} square-move states")));
            }
            queue.push_back((next, p));
        }
    }
    Err(Error::internal("graph is not reduced but no square-move sequence leads to a reduction"))
}

/// [`reduce`] on a graph with unit face weights.
pub fn reduce_graph(g: &PlabicGraph) -> Result<(PlabicGraph, usize, Vec<Step>)> {
    let r = reduce(&PlabicNetwork::unit(g.clone())?)?;
    Ok((r.network.graph().clone(), r.singletons, r.trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::positroid::Color;

    #[test]
    fn steps_round_trip_through_text() {
        let steps = [
            Step::Move(Move::Square { face: 3 }),
            Step::Move(Move::Contract { edge: 0 }),
            Step::Move(Move::Uncontract { vertex: 7, start: 1, len: 2 }),
            Step::Move(Move::RemoveVertex { vertex: 4 }),
            Step::Move(Move::InsertVertex { edge: 2, color: Color::White }),
            Step::Reduction(Reduction::ParallelEdges { first: 1, second: 5 }),
            Step::Reduction(Reduction::Leaf { vertex: 9 }),
            Step::Reduction(Reduction::Dipole { edge: 6 }),
            Step::Reduction(Reduction::Singleton { vertex: 8 }),
            Step::Reduction(Reduction::EmptyLoop { edge: 11 }),
        ];
        for s in steps {
            assert_eq!(s.to_string().parse::<Step>().unwrap(), s);
            let bare = match &s {
                Step::Move(m) => m.to_string(),
                Step::Reduction(r) => r.to_string(),
            };
            assert_eq!(bare.parse::<Step>().unwrap(), s);
        }
        for bad in ["square", "square face=x", "square edge=1", "flip face=1", "insert-vertex edge=1 color=red"] {
            assert!(bad.parse::<Step>().is_err(), "{bad}");
        }
    }

    #[test]
    fn compacted_trace_replays_on_compacted_graphs() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        for _ in 0..8 {
            let net = super::super::random_reduced_network(4, 2, &mut rng).unwrap();
            let Some(h) = super::super::add_gadget(net.graph(), super::super::Gadget::Bigon, &mut rng) else {
                continue;
            };
            let start = PlabicNetwork::unit(h).unwrap().compact();
            let r = reduce(&start).unwrap();
            let mut cur = start.clone();
            for s in compact_trace(&start, &r.trace).unwrap() {
                cur = apply_step(&cur, &s).unwrap().compact();
            }
            assert_eq!(cur.to_text(), r.network.to_text());
            checked += 1;
        }
        assert!(checked >= 4);
    }

    #[test]
    fn reduce_graph_reports_singletons() {
        let mut g = PlabicGraph::new(2);
        g.add_edge(0, 1);
        g.add_vertex(Color::Black);
        let (h, singletons, trace) = reduce_graph(&g).unwrap();
        assert_eq!(singletons, 1);
        assert_eq!(trace.len(), 1);
        assert_eq!(h.embedding().internal_vertices().count(), 0);
    }
}
