//! Small fixed networks used by checks and documentation.

use super::PlanarDirectedNetwork;
use crate::embedding::HalfEdge;
use crate::exactmath::Rational;

/// The two-vertex cyclic network with one source `b1` and one sink `b2`:
/// `b1 → u (x)`, `u → v (y)`, `v → u (z)`, `v → b2 (t)`. Its boundary
/// measurement is `M_12 = x y t / (1 + y z)`.
pub fn two_vertex_cycle(x: Rational, y: Rational, z: Rational, t: Rational) -> PlanarDirectedNetwork {
    let mut net = PlanarDirectedNetwork::new(2, &[1]).expect("valid boundary");
    let u = net.add_vertex();
    let v = net.add_vertex();
    let ex = net.add_edge(0, u, x);
    let ey = net.add_edge(u, v, y);
    let ez = net.add_edge(v, u, z);
    let et = net.add_edge(v, 1, t);
    net.set_rotation(u, vec![HalfEdge::new(ex, 1), HalfEdge::new(ey, 0), HalfEdge::new(ez, 1)]);
    net.set_rotation(v, vec![HalfEdge::new(ey, 1), HalfEdge::new(et, 0), HalfEdge::new(ez, 0)]);
    debug_assert!(net.validate().is_ok());
    net
}
