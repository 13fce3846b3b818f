//! Planar embeddings of graphs in a disk, given by rotation systems.
//!
//! Vertices `0..n` are the boundary vertices `b_1..b_n` in clockwise order.
//! Each edge has two ends (`end 0`, `end 1`); a directed network reads end 0
//! as the tail. The rotation at a vertex lists its incident half-edges in
//! clockwise order; at a boundary vertex the list starts right after the
//! boundary arc towards `b_{i+1}` and ends right before the arc from `b_{i−1}`.
//! Removed vertices and edges leave `None` slots so ids stay stable.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One end of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfEdge {
    pub edge: usize,
    pub end: u8,
}

impl HalfEdge {
    pub fn new(edge: usize, end: u8) -> Self {
        HalfEdge { edge, end }
    }

    pub fn opposite(self) -> Self {
        HalfEdge { edge: self.edge, end: 1 - self.end }
    }
}

/// A real edge or one of the `n` virtual boundary arcs `b_i → b_{i+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeRef {
    Real(usize),
    Arc(usize),
}

/// A directed traversal of an edge. For real edges `forward` means end 0 to end 1;
/// for arcs it means clockwise along the boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub edge: EdgeRef,
    pub forward: bool,
}

impl Dart {
    pub fn real(edge: usize, forward: bool) -> Self {
        Dart { edge: EdgeRef::Real(edge), forward }
    }

    pub fn reversed(self) -> Self {
        Dart { edge: self.edge, forward: !self.forward }
    }

    pub fn real_edge(self) -> Option<usize> {
        match self.edge {
            EdgeRef::Real(e) => Some(e),
            EdgeRef::Arc(_) => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct AugHalf {
    edge: EdgeRef,
    end: u8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    n: usize,
    verts: Vec<Option<Vec<HalfEdge>>>,
    edges: Vec<Option<[usize; 2]>>,
}

impl Embedding {
    /// Embedding with `n` boundary vertices and nothing else.
    pub fn new(n: usize) -> Self {
        Embedding { n, verts: vec![Some(Vec::new()); n], edges: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        v < self.n
    }

    pub fn vertex_slots(&self) -> usize {
        self.verts.len()
    }

    pub fn edge_slots(&self) -> usize {
        self.edges.len()
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.verts.get(v).is_some_and(|x| x.is_some())
    }

    pub fn has_edge(&self, e: usize) -> bool {
        self.edges.get(e).is_some_and(|x| x.is_some())
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.verts.iter().enumerate().filter(|(_, v)| v.is_some()).map(|(i, _)| i)
    }

    pub fn internal_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices().filter(move |&v| v >= self.n)
    }

    pub fn edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().enumerate().filter(|(_, e)| e.is_some()).map(|(i, _)| i)
    }

    pub fn num_internal_vertices(&self) -> usize {
        self.internal_vertices().count()
    }

    pub fn num_edges(&self) -> usize {
        self.edges().count()
    }

    /// Endpoints `[end0, end1]`.
    pub fn ends(&self, e: usize) -> [usize; 2] {
        self.edges[e].expect("live edge")
    }

    pub fn vertex_at(&self, h: HalfEdge) -> usize {
        self.ends(h.edge)[h.end as usize]
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let [a, b] = self.ends(e);
        a == b
    }

    pub fn rotation(&self, v: usize) -> &[HalfEdge] {
        self.verts[v].as_deref().expect("live vertex")
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation(v).len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.verts.push(Some(Vec::new()));
        self.verts.len() - 1
    }

    /// Adds an edge without touching rotations; callers place its ends.
    pub fn add_edge_raw(&mut self, a: usize, b: usize) -> usize {
        self.edges.push(Some([a, b]));
        self.edges.len() - 1
    }

    pub fn set_rotation(&mut self, v: usize, rot: Vec<HalfEdge>) {
        self.verts[v] = Some(rot);
    }

    /// Position of a half-edge in the rotation of its vertex.
    pub fn position(&self, h: HalfEdge) -> usize {
        let v = self.vertex_at(h);
        self.rotation(v).iter().position(|&x| x == h).expect("half-edge present in rotation")
    }

    pub fn insert_half_edge(&mut self, v: usize, pos: usize, h: HalfEdge) {
        self.verts[v].as_mut().expect("live vertex").insert(pos, h);
    }

    /// Replaces a half-edge in a rotation in place.
    pub fn replace_half_edge(&mut self, v: usize, old: HalfEdge, new: HalfEdge) {
        let rot = self.verts[v].as_mut().expect("live vertex");
        let p = rot.iter().position(|&x| x == old).expect("half-edge present");
        rot[p] = new;
    }

    /// Re-points one end of an edge to vertex `v` (rotation entries must be
    /// fixed up by the caller).
    pub fn set_end(&mut self, h: HalfEdge, v: usize) {
        self.edges[h.edge].as_mut().expect("live edge")[h.end as usize] = v;
    }

    /// Removes an edge and its rotation entries.
    pub fn remove_edge(&mut self, e: usize) {
        let [a, b] = self.ends(e);
        for v in [a, b] {
            if let Some(rot) = self.verts[v].as_mut() {
                rot.retain(|h| h.edge != e);
            }
        }
        self.edges[e] = None;
    }

    /// Removes an internal vertex with no incident edges.
    pub fn remove_vertex(&mut self, v: usize) {
        assert!(v >= self.n, "boundary vertices cannot be removed");
        assert!(self.rotation(v).is_empty(), "vertex still has edges");
        self.verts[v] = None;
    }

    /// Other endpoint of `e` seen from half-edge `h`.
    pub fn across(&self, h: HalfEdge) -> usize {
        self.vertex_at(h.opposite())
    }

    /// Neighbouring vertices of `v` (with multiplicity, in rotation order).
    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        self.rotation(v).iter().map(|&h| self.across(h)).collect()
    }

    /// Checks that rotations and edge endpoints agree.
    pub fn validate(&self) -> Result<()> {
        let mut seen: HashMap<HalfEdge, usize> = HashMap::new();
        for v in self.vertices() {
            for &h in self.rotation(v) {
                if !self.has_edge(h.edge) || h.end > 1 {
                    return Err(Error::validation(format!("vertex {v} lists a missing edge {}", h.edge)));
                }
                if self.vertex_at(h) != v {
                    return Err(Error::validation(format!("edge {} end {} is not at vertex {v}", h.edge, h.end)));
                }
                if seen.insert(h, v).is_some() {
                    return Err(Error::validation(format!("edge {} end {} listed twice", h.edge, h.end)));
                }
            }
        }
        for e in self.edges() {
            for end in 0..2u8 {
                let h = HalfEdge::new(e, end);
                if !seen.contains_key(&h) {
                    return Err(Error::validation(format!("edge {e} end {end} missing from rotation")));
                }
                if !self.has_vertex(self.vertex_at(h)) {
                    return Err(Error::validation(format!("edge {e} attached to a missing vertex")));
                }
            }
        }
        Ok(())
    }

    /// Connected components (vertex lists) that contain no boundary vertex.
    pub fn floating_components(&self) -> Vec<Vec<usize>> {
        let mut comp: HashMap<usize, usize> = HashMap::new();
        let mut out = Vec::new();
        for start in self.vertices() {
            if comp.contains_key(&start) {
                continue;
            }
            let id = out.len();
            let mut members = Vec::new();
            let mut queue = VecDeque::from([start]);
            comp.insert(start, id);
            let mut touches_boundary = false;
            while let Some(v) = queue.pop_front() {
                members.push(v);
                touches_boundary |= self.is_boundary(v);
                for w in self.neighbours(v) {
                    if let std::collections::hash_map::Entry::Vacant(en) = comp.entry(w) {
                        en.insert(id);
                        queue.push_back(w);
                    }
                }
            }
            out.push(if touches_boundary { Vec::new() } else { members });
        }
        out.into_iter().filter(|m| !m.is_empty()).collect()
    }

    /// Renumbers live vertices and edges densely, keeping their relative order.
    /// Returns the new embedding with the vertex and edge maps (old id → new id).
    pub fn compact(&self) -> (Embedding, Vec<Option<usize>>, Vec<Option<usize>>) {
        let mut vmap = vec![None; self.verts.len()];
        for (next, v) in self.vertices().enumerate() {
            vmap[v] = Some(next);
        }
        let mut emap = vec![None; self.edges.len()];
        for (next, e) in self.edges().enumerate() {
            emap[e] = Some(next);
        }
        let verts = self
            .vertices()
            .map(|v| Some(self.rotation(v).iter().map(|h| HalfEdge::new(emap[h.edge].unwrap(), h.end)).collect()))
            .collect();
        let edges = self
            .edges()
            .map(|e| {
                let [a, b] = self.ends(e);
                Some([vmap[a].unwrap(), vmap[b].unwrap()])
            })
            .collect();
        (Embedding { n: self.n, verts, edges }, vmap, emap)
    }

    fn augmented_rotation(&self, v: usize) -> Vec<AugHalf> {
        let mut rot: Vec<AugHalf> =
            self.rotation(v).iter().map(|h| AugHalf { edge: EdgeRef::Real(h.edge), end: h.end }).collect();
        if self.is_boundary(v) {
            let n = self.n;
            rot.insert(0, AugHalf { edge: EdgeRef::Arc(v), end: 0 });
            rot.push(AugHalf { edge: EdgeRef::Arc((v + n - 1) % n), end: 1 });
        }
        rot
    }

    /// Traces all faces of the disk. Floating components must be trees;
    /// their dart orbits bound no face and are dropped.
    pub fn faces(&self) -> Result<Faces> {
        self.validate()?;
        let floating = self.floating_components();
        let mut floating_vertices = BTreeSet::new();
        for comp in &floating {
            let vs: BTreeSet<usize> = comp.iter().copied().collect();
            let ecount = self.edges().filter(|&e| vs.contains(&self.ends(e)[0])).count();
            if ecount + 1 != comp.len() {
                return Err(Error::validation(
                    "a component not connected to the boundary contains a cycle; faces are undefined",
                ));
            }
            floating_vertices.extend(vs);
        }

        let mut pos: HashMap<AugHalf, (usize, usize)> = HashMap::new();
        let mut rots: HashMap<usize, Vec<AugHalf>> = HashMap::new();
        for v in self.vertices() {
            let r = self.augmented_rotation(v);
            for (i, &h) in r.iter().enumerate() {
                pos.insert(h, (v, i));
            }
            rots.insert(v, r);
        }
        let next = |d: Dart| -> Dart {
            let arrive = AugHalf { edge: d.edge, end: if d.forward { 1 } else { 0 } };
            let (v, i) = pos[&arrive];
            let r = &rots[&v];
            let h = r[(i + 1) % r.len()];
            Dart { edge: h.edge, forward: h.end == 0 }
        };

        let mut all_darts = Vec::new();
        for i in 0..self.n {
            all_darts.push(Dart { edge: EdgeRef::Arc(i), forward: true });
            all_darts.push(Dart { edge: EdgeRef::Arc(i), forward: false });
        }
        for e in self.edges() {
            if floating_vertices.contains(&self.ends(e)[0]) {
                continue;
            }
            all_darts.push(Dart::real(e, true));
            all_darts.push(Dart::real(e, false));
        }
        let mut orbit_of: HashMap<Dart, usize> = HashMap::new();
        let mut orbits: Vec<Vec<Dart>> = Vec::new();
        for &d0 in &all_darts {
            if orbit_of.contains_key(&d0) {
                continue;
            }
            let id = orbits.len();
            let mut orbit = Vec::new();
            let mut d = d0;
            loop {
                orbit_of.insert(d, id);
                orbit.push(d);
                d = next(d);
                if d == d0 {
                    break;
                }
            }
            orbits.push(orbit);
        }
        let exterior = if self.n > 0 { Some(orbit_of[&Dart { edge: EdgeRef::Arc(0), forward: true }]) } else { None };

        // Sort by smallest real edge, ties broken by the full edge and arc
        // sets so the order does not depend on edge directions.
        type FaceKey = (usize, Vec<usize>, Vec<usize>);
        let mut disk: Vec<(FaceKey, Vec<Dart>)> = orbits
            .into_iter()
            .enumerate()
            .filter(|(i, _)| Some(*i) != exterior)
            .map(|(_, o)| {
                let real: BTreeSet<usize> = o.iter().filter_map(|d| d.real_edge()).collect();
                let arcs: BTreeSet<usize> = o
                    .iter()
                    .filter_map(|d| match d.edge {
                        EdgeRef::Arc(a) => Some(a),
                        EdgeRef::Real(_) => None,
                    })
                    .collect();
                let min = real.first().copied().unwrap_or(usize::MAX);
                ((min, real.into_iter().collect(), arcs.into_iter().collect()), o)
            })
            .collect();
        disk.sort_by(|(a, _), (b, _)| a.cmp(b));
        let mut face_of = HashMap::new();
        let faces: Vec<Face> = disk
            .into_iter()
            .enumerate()
            .map(|(i, (_, darts))| {
                for &d in &darts {
                    face_of.insert(d, i);
                }
                let touches_boundary = darts.iter().any(|d| matches!(d.edge, EdgeRef::Arc(_)));
                Face { darts, touches_boundary }
            })
            .collect();
        if self.n == 0 && !faces.is_empty() {
            return Err(Error::validation("embeddings without boundary vertices are not supported"));
        }
        let faces = Faces { faces, face_of, floating: floating.len() };
        let v_int = self.num_internal_vertices() as i64;
        let e = self.num_edges() as i64;
        let f = faces.len().max(1) as i64;
        if v_int - e + f != 1 + faces.floating as i64 {
            return Err(Error::validation(format!(
                "rotation system is not planar: |V|-|E|+|F| = {} but expected {}",
                v_int - e + f,
                1 + faces.floating
            )));
        }
        Ok(faces)
    }
}

/// A face of the disk, traced counterclockwise (face on the left of every dart).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub darts: Vec<Dart>,
    pub touches_boundary: bool,
}

impl Face {
    pub fn real_darts(&self) -> impl Iterator<Item = (usize, bool)> + '_ {
        self.darts.iter().filter_map(|d| d.real_edge().map(|e| (e, d.forward)))
    }
}

/// Faces of the disk in canonical order (by smallest incident real edge id).
#[derive(Clone, Debug)]
pub struct Faces {
    faces: Vec<Face>,
    face_of: HashMap<Dart, usize>,
    floating: usize,
}

impl Faces {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn get(&self, i: usize) -> &Face {
        &self.faces[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Face> {
        self.faces.iter()
    }

    /// Number of components not attached to the boundary.
    pub fn floating_components(&self) -> usize {
        self.floating
    }

    /// Face to the left of a dart (`None` for darts of floating components
    /// and for the exterior side of boundary arcs).
    pub fn left_of(&self, d: Dart) -> Option<usize> {
        self.face_of.get(&d).copied()
    }

    /// Whether a directed simple closed curve through the given real darts is
    /// counterclockwise. The face on the left of the curve's first dart is
    /// explored without crossing the curve; reaching the boundary means the
    /// left side is the outside, so the curve is clockwise.
    pub fn cycle_is_counterclockwise(&self, cycle: &[Dart]) -> bool {
        let blocked: BTreeSet<usize> = cycle.iter().filter_map(|d| d.real_edge()).collect();
        let start = self.left_of(cycle[0]).expect("cycle dart lies in a face");
        let mut seen = vec![false; self.faces.len()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            for &d in &self.faces[f].darts {
                match d.edge {
                    EdgeRef::Arc(_) => return false,
                    EdgeRef::Real(e) if !blocked.contains(&e) => {
                        if let Some(g) = self.left_of(d.reversed()) {
                            if !seen[g] {
                                seen[g] = true;
                                queue.push_back(g);
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }
}
