//! Moves (square move, unicolored contraction, middle vertex removal and
//! their inverses) and reductions (parallel edges, leaves, dipoles) with
//! their face-weight transforms.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{PlabicGraph, PlabicNetwork};
use crate::embedding::{Dart, Faces, HalfEdge};
use crate::error::{Error, Result};
use crate::exactmath::Rational;
use crate::positroid::Color;

/// A move, addressed by stable vertex and edge ids or a canonical face index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    /// Square move at a face bounded by four trivalent vertices of
    /// alternating colors.
    Square { face: usize },
    /// Contraction of an edge joining two internal vertices of one color.
    Contract { edge: usize },
    /// Splits the `len` half-edges starting at rotation position `start`
    /// of `vertex` onto a new vertex of the same color joined to it.
    Uncontract { vertex: usize, start: usize, len: usize },
    /// Removal of an internal vertex of degree 2.
    RemoveVertex { vertex: usize },
    /// Insertion of a vertex of the given color in the middle of an edge.
    InsertVertex { edge: usize, color: Color },
}

/// A reduction, applied in one direction only.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reduction {
    /// Two trivalent vertices of different colors joined by two parallel
    /// edges bounding a face: both are removed and the remaining edges glued.
    ParallelEdges { first: usize, second: usize },
    /// A leaf whose neighbour has the opposite color and degree at least 3.
    Leaf { vertex: usize },
    /// An isolated edge between vertices of different colors.
    Dipole { edge: usize },
    /// An isolated vertex (counted as a removed singleton).
    Singleton { vertex: usize },
    /// A loop bounding an empty face is replaced by a leaf of the opposite
    /// color; the loop face weight moves to the face outside the loop.
    EmptyLoop { edge: usize },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Square { face } => write!(f, "square face={face}"),
            Move::Contract { edge } => write!(f, "contract edge={edge}"),
            Move::Uncontract { vertex, start, len } => write!(f, "uncontract vertex={vertex} start={start} len={len}"),
            Move::RemoveVertex { vertex } => write!(f, "remove-vertex vertex={vertex}"),
            Move::InsertVertex { edge, color } => {
                write!(f, "insert-vertex edge={edge} color={}", if *color == Color::Black { "black" } else { "white" })
            }
        }
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reduction::ParallelEdges { first, second } => write!(f, "parallel edges={first},{second}"),
            Reduction::Leaf { vertex } => write!(f, "leaf vertex={vertex}"),
            Reduction::Dipole { edge } => write!(f, "dipole edge={edge}"),
            Reduction::Singleton { vertex } => write!(f, "singleton vertex={vertex}"),
            Reduction::EmptyLoop { edge } => write!(f, "empty-loop edge={edge}"),
        }
    }
}

/// `key=value` fields of a site description after its keyword.
fn site_fields<'a>(text: &'a str, keyword: &str, keys: &[&str]) -> Result<Vec<&'a str>> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() != keys.len() + 1 {
        return Err(Error::validation(format!("{keyword:?} takes {} fields: {}", keys.len(), keys.join(", "))));
    }
    toks[1..]
        .iter()
        .zip(keys)
        .map(|(t, k)| {
            t.strip_prefix(k)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| Error::validation(format!("expected {k}=..., got {t:?}")))
        })
        .collect()
}

fn site_int(v: &str) -> Result<usize> {
    v.parse().map_err(|_| Error::validation(format!("expected a nonnegative integer, got {v:?}")))
}

impl std::str::FromStr for Move {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) form, e.g. `"square face=3"`.
    fn from_str(s: &str) -> Result<Self> {
        let keyword = s.split_whitespace().next().unwrap_or("");
        Ok(match keyword {
            "square" => Move::Square { face: site_int(site_fields(s, keyword, &["face"])?[0])? },
            "contract" => Move::Contract { edge: site_int(site_fields(s, keyword, &["edge"])?[0])? },
            "uncontract" => {
                let f = site_fields(s, keyword, &["vertex", "start", "len"])?;
                Move::Uncontract { vertex: site_int(f[0])?, start: site_int(f[1])?, len: site_int(f[2])? }
            }
            "remove-vertex" => Move::RemoveVertex { vertex: site_int(site_fields(s, keyword, &["vertex"])?[0])? },
            "insert-vertex" => {
                let f = site_fields(s, keyword, &["edge", "color"])?;
                let color = match f[1] {
                    "black" => Color::Black,
                    "white" => Color::White,
                    c => return Err(Error::validation(format!("unknown color {c:?}"))),
                };
                Move::InsertVertex { edge: site_int(f[0])?, color }
            }
            _ => return Err(Error::validation(format!("unknown move {keyword:?}"))),
        })
    }
}

impl std::str::FromStr for Reduction {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) form, e.g. `"parallel edges=1,2"`.
    fn from_str(s: &str) -> Result<Self> {
        let keyword = s.split_whitespace().next().unwrap_or("");
        Ok(match keyword {
            "parallel" => {
                let f = site_fields(s, keyword, &["edges"])?;
                let (a, b) = f[0].split_once(',').ok_or_else(|| Error::validation("expected edges=a,b"))?;
                Reduction::ParallelEdges { first: site_int(a)?, second: site_int(b)? }
            }
            "leaf" => Reduction::Leaf { vertex: site_int(site_fields(s, keyword, &["vertex"])?[0])? },
            "dipole" => Reduction::Dipole { edge: site_int(site_fields(s, keyword, &["edge"])?[0])? },
            "singleton" => Reduction::Singleton { vertex: site_int(site_fields(s, keyword, &["vertex"])?[0])? },
            "empty-loop" => Reduction::EmptyLoop { edge: site_int(site_fields(s, keyword, &["edge"])?[0])? },
            _ => return Err(Error::validation(format!("unknown reduction {keyword:?}"))),
        })
    }
}

impl Move {
    /// The move with every vertex id replaced by `f(id)`.
    pub fn map_vertices(&self, f: impl Fn(usize) -> usize) -> Move {
        self.map_ids(f, |e| e)
    }

    /// The move with vertex ids replaced by `fv(id)` and edge ids by `fe(id)`.
    pub fn map_ids(&self, fv: impl Fn(usize) -> usize, fe: impl Fn(usize) -> usize) -> Move {
        match *self {
            Move::Square { face } => Move::Square { face },
            Move::Contract { edge } => Move::Contract { edge: fe(edge) },
            Move::Uncontract { vertex, start, len } => Move::Uncontract { vertex: fv(vertex), start, len },
            Move::RemoveVertex { vertex } => Move::RemoveVertex { vertex: fv(vertex) },
            Move::InsertVertex { edge, color } => Move::InsertVertex { edge: fe(edge), color },
        }
    }
}

impl Reduction {
    /// The reduction with every vertex id replaced by `f(id)`.
    pub fn map_vertices(&self, f: impl Fn(usize) -> usize) -> Reduction {
        self.map_ids(f, |e| e)
    }

    /// The reduction with vertex ids replaced by `fv(id)` and edge ids by
    /// `fe(id)`.
    pub fn map_ids(&self, fv: impl Fn(usize) -> usize, fe: impl Fn(usize) -> usize) -> Reduction {
        match *self {
            Reduction::ParallelEdges { first, second } => {
                Reduction::ParallelEdges { first: fe(first), second: fe(second) }
            }
            Reduction::Leaf { vertex } => Reduction::Leaf { vertex: fv(vertex) },
            Reduction::Dipole { edge } => Reduction::Dipole { edge: fe(edge) },
            Reduction::Singleton { vertex } => Reduction::Singleton { vertex: fv(vertex) },
            Reduction::EmptyLoop { edge } => Reduction::EmptyLoop { edge: fe(edge) },
        }
    }
}

fn not_applicable(what: impl Into<String>) -> Error {
    Error::precondition(what.into())
}

fn tail_of(g: &PlabicGraph, d: Dart) -> usize {
    let e = d.real_edge().expect("real dart");
    g.embedding().ends(e)[if d.forward { 0 } else { 1 }]
}

/// Weights of `new` from those of `old`: each old face passes its weight to
/// the new face on the same side of one of its surviving edges. Faces with
/// no surviving edge are absorbed into the face left of `absorb`. Returns
/// the weights, the new faces and the old-to-new face map.
fn transfer(
    old: &PlabicNetwork,
    new: &PlabicGraph,
    absorb: Option<Dart>,
) -> Result<(Vec<Rational>, Faces, Vec<usize>)> {
    let old_faces = old.graph().faces()?;
    let new_faces = new.faces()?;
    let mut w = vec![Rational::one(); new_faces.len()];
    let sink = absorb.and_then(|d| new_faces.left_of(d));
    let mut map = Vec::with_capacity(old_faces.len());
    for (f, face) in old_faces.iter().enumerate() {
        let target = face
            .real_darts()
            .filter(|&(e, _)| new.embedding().has_edge(e))
            .find_map(|(e, fwd)| new_faces.left_of(Dart::real(e, fwd)))
            .or(sink)
            .ok_or_else(|| Error::internal(format!("face {f} has no image after the rewrite")))?;
        w[target] *= old.weight(f);
        map.push(target);
    }
    Ok((w, new_faces, map))
}

fn finish(g: PlabicGraph, w: Vec<Rational>) -> Result<PlabicNetwork> {
    PlabicNetwork::new(g, w)
}

/// Contracts edge `e = (u, v)` into `u`: the rotation of `v`, read from the
/// half-edge after `e`, replaces `e` in the rotation of `u`.
pub(crate) fn contract(g: &mut PlabicGraph, e: usize) -> Result<usize> {
    let emb = g.embedding();
    if !emb.has_edge(e) {
        return Err(not_applicable(format!("edge {e} does not exist")));
    }
    let [u, v] = emb.ends(e);
    if u == v || !g.is_internal(u) || !g.is_internal(v) || g.color(u) != g.color(v) {
        return Err(not_applicable(format!("edge {e} does not join two distinct internal vertices of one color")));
    }
    let (hu, hv) = (HalfEdge::new(e, 0), HalfEdge::new(e, 1));
    let rot_v = emb.rotation(v).to_vec();
    let pv = emb.position(hv);
    let moved: Vec<HalfEdge> = (1..rot_v.len()).map(|i| rot_v[(pv + i) % rot_v.len()]).collect();
    let mut rot_u = emb.rotation(u).to_vec();
    let pu = emb.position(hu);
    rot_u.splice(pu..=pu, moved.iter().copied());
    let emb = g.embedding_mut();
    emb.set_rotation(u, rot_u);
    emb.set_rotation(v, Vec::new());
    for &h in &moved {
        emb.set_end(h, u);
    }
    emb.remove_edge(e);
    g.remove_vertex(v);
    Ok(u)
}

/// Moves a cyclic block of the rotation of `v` onto a new vertex of the
/// same color; returns `(new vertex, new edge)`.
pub(crate) fn uncontract(g: &mut PlabicGraph, v: usize, start: usize, len: usize) -> Result<(usize, usize)> {
    if !g.embedding().has_vertex(v) || !g.is_internal(v) {
        return Err(not_applicable(format!("vertex {v} is not an internal vertex")));
    }
    let rot = g.embedding().rotation(v).to_vec();
    let d = rot.len();
    if (d > 0 && start >= d) || len > d {
        return Err(not_applicable(format!("block start {start} length {len} does not fit a vertex of degree {d}")));
    }
    let block: Vec<HalfEdge> = (0..len).map(|i| rot[(start + i) % d]).collect();
    let rest: Vec<HalfEdge> = (len..d).map(|i| rot[(start + i) % d]).collect();
    let c = g.color(v);
    let w = g.add_vertex(c);
    let emb = g.embedding_mut();
    let e = emb.add_edge_raw(v, w);
    let mut rv = rest;
    rv.push(HalfEdge::new(e, 0));
    let mut rw = block.clone();
    rw.push(HalfEdge::new(e, 1));
    emb.set_rotation(v, rv);
    emb.set_rotation(w, rw);
    for h in block {
        emb.set_end(h, w);
    }
    Ok((w, e))
}

/// Removes a degree-2 internal vertex, keeping its first edge.
pub(crate) fn remove_vertex(g: &mut PlabicGraph, v: usize) -> Result<usize> {
    if !g.embedding().has_vertex(v) || !g.is_internal(v) || g.embedding().degree(v) != 2 {
        return Err(not_applicable(format!("vertex {v} is not an internal vertex of degree 2")));
    }
    let rot = g.embedding().rotation(v).to_vec();
    let (h1, h2) = (rot[0], rot[1]);
    if h1.edge == h2.edge {
        return Err(not_applicable(format!("vertex {v} carries only a loop")));
    }
    let far = h2.opposite();
    let x = g.embedding().vertex_at(far);
    let emb = g.embedding_mut();
    emb.set_rotation(v, Vec::new());
    emb.replace_half_edge(x, far, h1);
    emb.set_end(h1, x);
    emb.remove_edge(h2.edge);
    g.remove_vertex(v);
    Ok(h1.edge)
}

/// Splits edge `e` with a new vertex; returns `(vertex, new edge)`.
pub(crate) fn insert_vertex(g: &mut PlabicGraph, e: usize, c: Color) -> Result<(usize, usize)> {
    if !g.embedding().has_edge(e) {
        return Err(not_applicable(format!("edge {e} does not exist")));
    }
    let b = g.embedding().ends(e)[1];
    let w = g.add_vertex(c);
    let emb = g.embedding_mut();
    let e2 = emb.add_edge_raw(w, b);
    emb.replace_half_edge(b, HalfEdge::new(e, 1), HalfEdge::new(e2, 1));
    emb.set_end(HalfEdge::new(e, 1), w);
    emb.set_rotation(w, vec![HalfEdge::new(e, 1), HalfEdge::new(e2, 0)]);
    Ok((w, e2))
}

/// The four vertices of a square move site, with the darts of the face.
fn square_site(g: &PlabicGraph, faces: &Faces, f: usize, strict: bool) -> Result<Vec<Dart>> {
    if f >= faces.len() {
        return Err(not_applicable(format!("face {f} does not exist")));
    }
    let darts = &faces.get(f).darts;
    if darts.len() != 4 || darts.iter().any(|d| d.real_edge().is_none()) {
        return Err(not_applicable(format!("face {f} is not a square")));
    }
    let verts: Vec<usize> = darts.iter().map(|&d| tail_of(g, d)).collect();
    if verts.iter().collect::<BTreeSet<_>>().len() != 4 || verts.iter().any(|&v| !g.is_internal(v)) {
        return Err(not_applicable(format!("face {f} is not bounded by four distinct internal vertices")));
    }
    if strict && verts.iter().any(|&v| g.embedding().degree(v) != 3) {
        return Err(not_applicable(format!("face {f} has a vertex that is not trivalent")));
    }
    for i in 0..4 {
        if g.color(verts[i]) == g.color(verts[(i + 1) % 4]) {
            return Err(not_applicable(format!("colors around face {f} do not alternate")));
        }
    }
    Ok(darts.clone())
}

/// Whether the square move applies at face `f` (four trivalent vertices of
/// alternating colors).
pub fn is_square(g: &PlabicGraph, f: usize) -> bool {
    g.faces().map(|faces| square_site(g, &faces, f, true).is_ok()).unwrap_or(false)
}

/// Square faces whose vertices alternate in color but may have degree
/// above 3 (made trivalent by uncontraction before the move).
pub(crate) fn generalized_squares(g: &PlabicGraph) -> Vec<usize> {
    let Ok(faces) = g.faces() else { return Vec::new() };
    (0..faces.len()).filter(|&f| square_site(g, &faces, f, false).is_ok()).collect()
}

fn square_move(n: &PlabicNetwork, f: usize) -> Result<PlabicNetwork> {
    let g = n.graph();
    let faces = g.faces()?;
    let darts = square_site(g, &faces, f, true)?;
    let mut out = g.clone();
    for &d in &darts {
        let v = tail_of(g, d);
        out.set_color(v, g.color(v).opposite());
    }
    let y0 = n.weight(f).clone();
    let one = Rational::one();
    let shrink = (&one + y0.recip()).recip();
    let grow = &one + &y0;
    let mut w = n.weights().to_vec();
    w[f] = y0.recip();
    for &d in &darts {
        let across = faces.left_of(d.reversed()).expect("square edges are internal");
        // f lies to the right of the white-to-black traversal when the dart starts at a black vertex
        let factor = if g.color(tail_of(g, d)) == Color::Black { &shrink } else { &grow };
        w[across] *= factor;
    }
    finish(out, w)
}

/// Half-edges `(at first, at second)` of two parallel edges bounding a
/// face of two darts, and that face.
fn bigon_site(g: &PlabicGraph, faces: &Faces, e1: usize, e2: usize) -> Result<usize> {
    let emb = g.embedding();
    if e1 == e2 || !emb.has_edge(e1) || !emb.has_edge(e2) {
        return Err(not_applicable("two distinct live edges are required"));
    }
    for fwd in [true, false] {
        if let Some(f) = faces.left_of(Dart::real(e1, fwd)) {
            let darts = &faces.get(f).darts;
            if darts.len() == 2 && darts.iter().any(|d| d.real_edge() == Some(e2)) {
                return Ok(f);
            }
        }
    }
    Err(not_applicable(format!("edges {e1} and {e2} do not bound a face together")))
}

fn parallel_reduction(n: &PlabicNetwork, e1: usize, e2: usize) -> Result<PlabicNetwork> {
    let g = n.graph();
    let faces = g.faces()?;
    let f0 = bigon_site(g, &faces, e1, e2)?;
    let emb = g.embedding();
    let [u, w] = emb.ends(e1);
    let ends2 = emb.ends(e2);
    if u == w || !(ends2 == [u, w] || ends2 == [w, u]) {
        return Err(not_applicable("the edges are not parallel"));
    }
    if !g.is_internal(u) || !g.is_internal(w) || g.color(u) == g.color(w) {
        return Err(not_applicable("the edges must join internal vertices of different colors"));
    }
    if emb.degree(u) != 3 || emb.degree(w) != 3 {
        return Err(not_applicable("both vertices must be trivalent"));
    }
    let third = |v: usize| *emb.rotation(v).iter().find(|h| h.edge != e1 && h.edge != e2).expect("third edge");
    let (ha, hb) = (third(u), third(w));
    if ha.edge == hb.edge {
        return Err(not_applicable("the two vertices form an isolated component"));
    }
    let y0 = n.weight(f0).clone();
    let one = Rational::one();
    let shrink = (&one + y0.recip()).recip();
    let grow = &one + &y0;
    // faces beside the bigon, classified by the side of the white-to-black traversal
    let beside: Vec<(usize, Rational)> = faces
        .get(f0)
        .darts
        .iter()
        .map(|&d| {
            let across = faces.left_of(d.reversed()).expect("bigon edges are internal");
            let factor = if g.color(tail_of(g, d)) == Color::Black { shrink.clone() } else { grow.clone() };
            (across, factor)
        })
        .collect();
    let mut out = g.clone();
    let far = hb.opposite();
    let y = emb.vertex_at(far);
    {
        let m = out.embedding_mut();
        m.set_rotation(u, Vec::new());
        m.set_rotation(w, Vec::new());
        m.remove_edge(e1);
        m.remove_edge(e2);
        m.replace_half_edge(y, far, ha);
        m.set_end(ha, y);
        m.remove_edge(hb.edge);
    }
    out.remove_vertex(u);
    out.remove_vertex(w);
    let mut tmp = n.clone();
    tmp.weights[f0] = Rational::one();
    let (mut wts, _, map) = transfer(&tmp, &out, Some(Dart::real(ha.edge, true)))?;
    for (f, factor) in beside {
        wts[map[f]] *= factor;
    }
    finish(out, wts)
}

/// Removes floating components that contain cycles (their faces cannot be
/// represented); returns the removed edges.
fn drop_cyclic_floating(g: &mut PlabicGraph) -> Vec<usize> {
    let mut dropped = Vec::new();
    for comp in g.embedding().floating_components() {
        let vs: BTreeSet<usize> = comp.iter().copied().collect();
        let edges: Vec<usize> = g.embedding().edges().filter(|&e| vs.contains(&g.embedding().ends(e)[0])).collect();
        if edges.len() + 1 == comp.len() {
            continue;
        }
        for &e in &edges {
            g.embedding_mut().remove_edge(e);
        }
        for &v in &comp {
            g.remove_vertex(v);
        }
        dropped.extend(edges);
    }
    dropped
}

fn leaf_reduction(n: &PlabicNetwork, u: usize) -> Result<PlabicNetwork> {
    let g = n.graph();
    let emb = g.embedding();
    if !emb.has_vertex(u) || !g.is_internal(u) || emb.degree(u) != 1 {
        return Err(not_applicable(format!("vertex {u} is not an internal leaf")));
    }
    let hu = emb.rotation(u)[0];
    let v = emb.across(hu);
    if !g.is_internal(v) || g.color(v) == g.color(u) || emb.degree(v) < 3 {
        return Err(not_applicable(format!(
            "the neighbour of leaf {u} must be internal, of the opposite color and of degree at least 3"
        )));
    }
    let cu = g.color(u);
    let others: Vec<HalfEdge> = emb.rotation(v).iter().copied().filter(|h| h.edge != hu.edge).collect();
    let mut out = g.clone();
    out.embedding_mut().set_rotation(u, Vec::new());
    out.embedding_mut().remove_edge(hu.edge);
    out.remove_vertex(u);
    out.embedding_mut().set_rotation(v, Vec::new());
    for &h in &others {
        let x = out.add_vertex(cu);
        out.embedding_mut().set_rotation(x, vec![h]);
        out.embedding_mut().set_end(h, x);
    }
    out.remove_vertex(v);
    let dropped: BTreeSet<usize> = drop_cyclic_floating(&mut out).into_iter().collect();
    // the merged face lies left of any surviving dart arriving at a new leaf
    let sink = others
        .iter()
        .find(|h| !dropped.contains(&h.edge))
        .map(|h| Dart::real(h.edge, h.end == 1))
        .ok_or_else(|| Error::internal("leaf reduction left no attached edge"))?;
    let (w, _, _) = transfer(n, &out, Some(sink))?;
    finish(out, w)
}

fn dipole_reduction(n: &PlabicNetwork, e: usize) -> Result<PlabicNetwork> {
    let g = n.graph();
    let emb = g.embedding();
    if !emb.has_edge(e) {
        return Err(not_applicable(format!("edge {e} does not exist")));
    }
    let [a, b] = emb.ends(e);
    if a == b
        || !g.is_internal(a)
        || !g.is_internal(b)
        || emb.degree(a) != 1
        || emb.degree(b) != 1
        || g.color(a) == g.color(b)
    {
        return Err(not_applicable(format!("edge {e} is not an isolated dipole")));
    }
    let mut out = g.clone();
    out.embedding_mut().remove_edge(e);
    out.remove_vertex(a);
    out.remove_vertex(b);
    finish(out, n.weights().to_vec())
}

fn singleton_reduction(n: &PlabicNetwork, v: usize) -> Result<PlabicNetwork> {
    let g = n.graph();
    if !g.embedding().has_vertex(v) || !g.is_internal(v) || g.embedding().degree(v) != 0 {
        return Err(not_applicable(format!("vertex {v} is not an isolated internal vertex")));
    }
    let mut out = g.clone();
    out.remove_vertex(v);
    finish(out, n.weights().to_vec())
}

fn empty_loop_reduction(n: &PlabicNetwork, l: usize) -> Result<PlabicNetwork> {
    let g = n.graph();
    let emb = g.embedding();
    if !emb.has_edge(l) || !emb.is_loop(l) {
        return Err(not_applicable(format!("edge {l} is not a loop")));
    }
    let v = emb.ends(l)[0];
    let faces = g.faces()?;
    let inner = [true, false]
        .into_iter()
        .filter_map(|fwd| faces.left_of(Dart::real(l, fwd)))
        .find(|&f| faces.get(f).darts.len() == 1)
        .ok_or_else(|| not_applicable(format!("loop {l} does not bound an empty face")))?;
    if emb.degree(v) == 2 {
        return Err(not_applicable(format!("loop {l} forms an isolated component")));
    }
    let rot = emb.rotation(v).to_vec();
    let d = rot.len();
    // the two ends are cyclically adjacent; the leaf goes in their place
    let p = (0..d).find(|&i| rot[i].edge == l && rot[(i + 1) % d].edge == l).expect("adjacent loop ends");
    let mut out = g.clone();
    let c = g.color(v).opposite();
    out.embedding_mut().remove_edge(l);
    let pos = if p + 1 == d { 0 } else { p };
    let x = out.add_vertex(c);
    let e = out.add_edge_at(v, pos.min(out.embedding().degree(v)), x, 0);
    let outer = faces
        .left_of(Dart::real(l, true))
        .filter(|&f| f != inner)
        .or_else(|| faces.left_of(Dart::real(l, false)))
        .expect("outer face");
    let mut tmp = n.clone();
    tmp.weights[inner] = Rational::one();
    let (mut w, _, map) = transfer(&tmp, &out, Some(Dart::real(e, true)))?;
    w[map[outer]] *= n.weight(inner);
    finish(out, w)
}

/// Applies a move, returning the rewritten network.
pub fn apply_move(n: &PlabicNetwork, m: &Move) -> Result<PlabicNetwork> {
    let mut g = n.graph().clone();
    match *m {
        Move::Square { face } => return square_move(n, face),
        Move::Contract { edge } => {
            contract(&mut g, edge)?;
        }
        Move::Uncontract { vertex, start, len } => {
            uncontract(&mut g, vertex, start, len)?;
        }
        Move::RemoveVertex { vertex } => {
            remove_vertex(&mut g, vertex)?;
        }
        Move::InsertVertex { edge, color } => {
            insert_vertex(&mut g, edge, color)?;
        }
    }
    let (w, _, _) = transfer(n, &g, None)?;
    finish(g, w)
}

/// Applies a reduction, returning the rewritten network.
pub fn apply_reduction(n: &PlabicNetwork, r: &Reduction) -> Result<PlabicNetwork> {
    match *r {
        Reduction::ParallelEdges { first, second } => parallel_reduction(n, first, second),
        Reduction::Leaf { vertex } => leaf_reduction(n, vertex),
        Reduction::Dipole { edge } => dipole_reduction(n, edge),
        Reduction::Singleton { vertex } => singleton_reduction(n, vertex),
        Reduction::EmptyLoop { edge } => empty_loop_reduction(n, edge),
    }
}

/// Applicable square moves, contractions and degree-2 removals.
pub fn move_sites(g: &PlabicGraph) -> Vec<Move> {
    let emb = g.embedding();
    let mut out = Vec::new();
    if let Ok(faces) = g.faces() {
        out.extend(
            (0..faces.len()).filter(|&f| square_site(g, &faces, f, true).is_ok()).map(|face| Move::Square { face }),
        );
    }
    for e in emb.edges() {
        let [a, b] = emb.ends(e);
        if a != b && g.is_internal(a) && g.is_internal(b) && g.color(a) == g.color(b) {
            out.push(Move::Contract { edge: e });
        }
    }
    for v in emb.internal_vertices() {
        let rot = emb.rotation(v);
        if rot.len() == 2 && rot[0].edge != rot[1].edge {
            out.push(Move::RemoveVertex { vertex: v });
        }
    }
    out
}

/// Applicable reductions.
pub fn reduction_sites(g: &PlabicGraph) -> Vec<Reduction> {
    let emb = g.embedding();
    let mut out = Vec::new();
    let Ok(faces) = g.faces() else { return out };
    for f in faces.iter() {
        if f.darts.len() == 2 {
            let (Some(e1), Some(e2)) = (f.darts[0].real_edge(), f.darts[1].real_edge()) else { continue };
            let probe = PlabicNetwork::unit(g.clone()).ok();
            if e1 != e2 && probe.map(|p| parallel_reduction(&p, e1, e2).is_ok()).unwrap_or(false) {
                out.push(Reduction::ParallelEdges { first: e1.min(e2), second: e1.max(e2) });
            }
        }
        if f.darts.len() == 1 {
            if let Some(l) = f.darts[0].real_edge() {
                if emb.is_loop(l) && emb.degree(emb.ends(l)[0]) > 2 {
                    out.push(Reduction::EmptyLoop { edge: l });
                }
            }
        }
    }
    for v in emb.internal_vertices() {
        let rot = emb.rotation(v);
        match rot.len() {
            0 => out.push(Reduction::Singleton { vertex: v }),
            1 => {
                let w = emb.across(rot[0]);
                if g.is_internal(w) && g.color(w) != g.color(v) {
                    if emb.degree(w) >= 3 {
                        out.push(Reduction::Leaf { vertex: v });
                    } else if emb.degree(w) == 1 && v < w {
                        out.push(Reduction::Dipole { edge: rot[0].edge });
                    }
                }
            }
            _ => {}
        }
    }
    out.sort_by_key(|r| format!("{r}"));
    out.dedup();
    out
}
