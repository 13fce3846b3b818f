//! Winding indices of walks by cycle erasure, and the winding-signed walk
//! series used to cross-check measurements.

use std::collections::HashMap;

use rand::Rng;

use super::measure::Series;
use super::PlanarDirectedNetwork;
use crate::embedding::{Dart, Faces};
use crate::error::{Error, Result};
use crate::exactmath::Rational;

/// A directed walk given by consecutive edges. It is closed when it ends
/// where it starts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Walk {
    pub edges: Vec<usize>,
}

impl Walk {
    pub fn new(edges: Vec<usize>) -> Self {
        Walk { edges }
    }

    /// Vertex sequence `v_0 .. v_m`, checking consecutive incidence.
    pub fn vertices(&self, net: &PlanarDirectedNetwork) -> Result<Vec<usize>> {
        let Some(&first) = self.edges.first() else {
            return Err(Error::validation("a walk needs at least one edge"));
        };
        let mut vs = vec![net.tail(first)];
        for &e in &self.edges {
            if !net.embedding().has_edge(e) {
                return Err(Error::validation(format!("walk uses missing edge {e}")));
            }
            if net.tail(e) != *vs.last().expect("nonempty") {
                return Err(Error::validation(format!("edge {e} does not continue the walk")));
            }
            vs.push(net.head(e));
        }
        Ok(vs)
    }

    pub fn is_closed(&self, net: &PlanarDirectedNetwork) -> bool {
        self.vertices(net).map(|vs| vs[0] == vs[vs.len() - 1]).unwrap_or(false)
    }
}

/// Orientation oracle for simple cycles, memoized on the cycle's edge set.
struct CycleClassifier<'a> {
    faces: &'a Faces,
    memo: HashMap<Vec<usize>, i64>,
}

impl<'a> CycleClassifier<'a> {
    fn sign(&mut self, edges: &[usize]) -> i64 {
        let mut key = edges.to_vec();
        key.sort_unstable();
        if let Some(&s) = self.memo.get(&key) {
            return s;
        }
        let darts: Vec<Dart> = edges.iter().map(|&e| Dart::real(e, true)).collect();
        let s = if self.faces.cycle_is_counterclockwise(&darts) { 1 } else { -1 };
        self.memo.insert(key, s);
        s
    }
}

/// Winding index by repeatedly erasing the first cycle to close.
pub fn winding_index(net: &PlanarDirectedNetwork, walk: &Walk) -> Result<i64> {
    let faces = net.embedding().faces()?;
    let vs = walk.vertices(net)?;
    let mut cls = CycleClassifier { faces: &faces, memo: HashMap::new() };
    Ok(chronological_wind(&vs, &walk.edges, &mut cls))
}

fn chronological_wind(vs: &[usize], edges: &[usize], cls: &mut CycleClassifier<'_>) -> i64 {
    let mut stack_v = vec![vs[0]];
    let mut stack_e: Vec<usize> = Vec::new();
    let mut wind = 0;
    for (i, &e) in edges.iter().enumerate() {
        let v = vs[i + 1];
        stack_e.push(e);
        if let Some(p) = stack_v.iter().position(|&x| x == v) {
            let cycle: Vec<usize> = stack_e.drain(p..).collect();
            stack_v.truncate(p + 1);
            wind += cls.sign(&cycle);
        } else {
            stack_v.push(v);
        }
    }
    wind
}

/// Winding index with cycles erased in a random admissible order: at every
/// step any segment `v_a .. v_b` with `v_a = v_b` and `v_a .. v_{b−1}`
/// distinct may be erased. For a closed walk the final simple cycle counts.
pub fn winding_index_with_order<R: Rng>(net: &PlanarDirectedNetwork, walk: &Walk, rng: &mut R) -> Result<i64> {
    let faces = net.embedding().faces()?;
    let mut vs = walk.vertices(net)?;
    let mut es = walk.edges.clone();
    let closed = vs[0] == vs[vs.len() - 1];
    let mut cls = CycleClassifier { faces: &faces, memo: HashMap::new() };
    let mut wind = 0;
    loop {
        let mut candidates = Vec::new();
        for a in 0..vs.len() {
            let mut seen = std::collections::HashSet::new();
            seen.insert(vs[a]);
            for b in a + 1..vs.len() {
                if vs[b] == vs[a] {
                    if !(closed && a == 0 && b == vs.len() - 1) {
                        candidates.push((a, b));
                    }
                    break;
                }
                if !seen.insert(vs[b]) {
                    break;
                }
            }
        }
        if candidates.is_empty() {
            break;
        }
        let (a, b) = candidates[rng.gen_range(0..candidates.len())];
        let cycle: Vec<usize> = es.drain(a..b).collect();
        vs.drain(a + 1..=b);
        wind += cls.sign(&cycle);
        if es.is_empty() {
            return Ok(wind);
        }
    }
    if closed && !es.is_empty() {
        wind += cls.sign(&es);
    }
    Ok(wind)
}

/// The walk series `Σ_P (−1)^{wind(P)} x_P t^{|P|}` over walks from `b_i` to
/// `b_j` with at most `order` edges.
pub fn walk_series(net: &PlanarDirectedNetwork, i: usize, j: usize, order: usize) -> Result<Series> {
    let n = net.n();
    if i == 0 || i > n || !net.is_source(i) || j == 0 || j > n || net.is_source(j) {
        return Err(Error::precondition(format!("({i},{j}) is not a source/sink pair")));
    }
    let faces = net.embedding().faces()?;
    let mut cls = CycleClassifier { faces: &faces, memo: HashMap::new() };
    let adj = net.out_adjacency();
    let mut out = Series::zero(order);
    let mut st = WalkState { stack_v: vec![i - 1], stack_e: Vec::new(), wind: 0 };
    let one = Rational::from_integer(1.into());
    walk_dfs(net, &adj, &mut cls, &mut st, j - 1, one, 0, order, &mut out);
    Ok(out)
}

struct WalkState {
    stack_v: Vec<usize>,
    stack_e: Vec<usize>,
    wind: i64,
}

#[allow(clippy::too_many_arguments)]
fn walk_dfs(
    net: &PlanarDirectedNetwork,
    adj: &[Vec<(usize, usize)>],
    cls: &mut CycleClassifier<'_>,
    st: &mut WalkState,
    target: usize,
    weight: Rational,
    len: usize,
    order: usize,
    out: &mut Series,
) {
    if len == order {
        return;
    }
    let cur = *st.stack_v.last().expect("nonempty");
    for &(e, u) in &adj[cur] {
        let w = &weight * net.weight(e);
        if u == target {
            let c = if st.wind % 2 == 0 { w } else { -w };
            out.add_assign_monomial(&c, len + 1);
            continue;
        }
        if u < net.n() {
            continue;
        }
        // Push e, erase a cycle if one closes, recurse, then restore.
        let saved_v = st.stack_v.clone();
        let saved_e = st.stack_e.clone();
        let saved_w = st.wind;
        st.stack_e.push(e);
        if let Some(p) = st.stack_v.iter().position(|&x| x == u) {
            let cycle: Vec<usize> = st.stack_e.drain(p..).collect();
            st.stack_v.truncate(p + 1);
            st.wind += cls.sign(&cycle);
        } else {
            st.stack_v.push(u);
        }
        walk_dfs(net, adj, cls, st, target, w, len + 1, order, out);
        st.stack_v = saved_v;
        st.stack_e = saved_e;
        st.wind = saved_w;
    }
}
