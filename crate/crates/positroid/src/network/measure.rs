//! Boundary measurements via nested cycle-avoiding path sums.
//!
//! For a vertex `v` outside a forbidden set `S`, `W_S(v)` is the signed sum
//! over closed walks at `v` avoiding `S`. Splitting a closed walk at its
//! returns to `v` and loop-erasing each excursion gives
//!
//! `W_S(v) = (1 + Σ_C x_C Π_l W_{S ∪ {v,u_1..u_{l-1}}}(u_l))^{-1}`
//!
//! over simple cycles `C = (v,u_1,..,u_r,v)` in `G \ S`, and
//! `M_ij = Σ_P x_P Π_t W_{v_0..v_{t-1}}(v_t)` over self-avoiding paths.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::PlanarDirectedNetwork;
use crate::error::{Error, Result};
use crate::exactmath::{check_subset, plucker_vector, PluckerVector, Rational, RationalMatrix};

/// Commutative ring in which measurements are evaluated.
pub trait MeasureRing: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    /// Multiplicative inverse; only called on elements `1 + (positive sum)`.
    fn inv(&self) -> Self;
}

impl MeasureRing for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// Power series in `t` with rational coefficients, truncated after `t^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The monomial `c t^d` (zero when `d` exceeds the order).
    pub fn monomial(c: Rational, d: usize, order: usize) -> Self {
        let mut s = Series::zero(order);
        if d <= order {
            s.coeffs[d] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> &Rational {
        &self.coeffs[d]
    }

    pub fn add_assign_monomial(&mut self, c: &Rational, d: usize) {
        if d <= self.order() {
            self.coeffs[d] += c;
        }
    }
}

impl MeasureRing for Series {
    fn zero_like(&self) -> Self {
        Series::zero(self.order())
    }
    fn one_like(&self) -> Self {
        Series::constant(Rational::one(), self.order())
    }
    fn add(&self, other: &Self) -> Self {
        Series { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }
    fn mul(&self, other: &Self) -> Self {
        let m = self.order();
        let mut out = Series::zero(m);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(m + 1 - i).enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }
    fn inv(&self) -> Self {
        let m = self.order();
        let c0 = self.coeffs[0].recip();
        let mut out = Series::zero(m);
        out.coeffs[0] = c0.clone();
        for d in 1..=m {
            let mut acc = Rational::zero();
            for i in 1..=d {
                acc += &self.coeffs[i] * &out.coeffs[d - i];
            }
            out.coeffs[d] = -(acc * &c0);
        }
        out
    }
}

struct Evaluator<'a, R: MeasureRing> {
    adj: Vec<Vec<(usize, usize)>>,
    weights: &'a [Option<R>],
    boundary: usize,
    one: R,
    memo: HashMap<(u128, usize), R>,
}

impl<'a, R: MeasureRing> Evaluator<'a, R> {
    fn x(&self, e: usize) -> &R {
        self.weights[e].as_ref().expect("weight for live edge")
    }

    /// `W_S(v)` for `v ∉ S`.
    fn w(&mut self, s: u128, v: usize) -> R {
        if let Some(r) = self.memo.get(&(s, v)) {
            return r.clone();
        }
        let mut total = self.one.zero_like();
        let one = self.one.clone();
        self.cycles_from(v, s | bit(v), v, one, &mut total);
        let r = self.one.add(&total).inv();
        self.memo.insert((s, v), r.clone());
        r
    }

    fn cycles_from(&mut self, root: usize, mask: u128, cur: usize, acc: R, total: &mut R) {
        for idx in 0..self.adj[cur].len() {
            let (e, u) = self.adj[cur][idx];
            let step = acc.mul(self.x(e));
            if u == root {
                *total = total.add(&step);
            } else if mask & bit(u) == 0 {
                let wu = self.w(mask, u);
                self.cycles_from(root, mask | bit(u), u, step.mul(&wu), total);
            }
        }
    }

    /// Adds the contributions of all self-avoiding paths from `cur` into `out`
    /// (indexed by boundary vertex).
    fn paths_from(&mut self, mask: u128, cur: usize, acc: R, out: &mut [R]) {
        for idx in 0..self.adj[cur].len() {
            let (e, u) = self.adj[cur][idx];
            if mask & bit(u) != 0 {
                continue;
            }
            let wu = self.w(mask, u);
            let step = acc.mul(self.x(e)).mul(&wu);
            if u < self.boundary {
                out[u] = out[u].add(&step);
            } else {
                self.paths_from(mask | bit(u), u, step, out);
            }
        }
    }
}

fn bit(v: usize) -> u128 {
    1u128 << v
}

/// Measurements `M_ij` evaluated in the ring `R`, one row per source (in
/// increasing label order) and one column per boundary vertex. Entries for
/// source columns are zero. `weights[e]` gives `x_e` for every live edge.
pub fn boundary_measurements_in<R: MeasureRing>(
    net: &PlanarDirectedNetwork,
    weights: &[Option<R>],
    one: R,
) -> Result<Vec<Vec<R>>> {
    let emb = net.embedding();
    if emb.vertex_slots() > 128 {
        return Err(Error::precondition("measurement supports at most 128 vertex slots; compact the network first"));
    }
    let mut adj = vec![Vec::new(); emb.vertex_slots()];
    for e in emb.edges() {
        let [t, h] = emb.ends(e);
        adj[t].push((e, h));
    }
    let n = net.n();
    let mut ev = Evaluator { adj, weights, boundary: n, one: one.clone(), memo: HashMap::new() };
    let mut rows = Vec::new();
    for i in net.source_set() {
        let b = i - 1;
        let mut out = vec![one.zero_like(); n];
        let w0 = ev.w(0, b);
        ev.paths_from(bit(b), b, w0, &mut out);
        rows.push(out);
    }
    Ok(rows)
}

fn rational_measurements(net: &PlanarDirectedNetwork) -> Result<Vec<Vec<Rational>>> {
    let weights: Vec<Option<Rational>> =
        (0..net.embedding().edge_slots()).map(|e| net.embedding().has_edge(e).then(|| net.weight(e).clone())).collect();
    boundary_measurements_in(net, &weights, Rational::one())
}

/// The boundary measurement `M_ij` from source `b_i` to sink `b_j`.
pub fn boundary_measurement(net: &PlanarDirectedNetwork, i: usize, j: usize) -> Result<Rational> {
    let n = net.n();
    if i == 0 || i > n || !net.is_source(i) {
        return Err(Error::precondition(format!("b{i} is not a boundary source")));
    }
    if j == 0 || j > n || net.is_source(j) {
        return Err(Error::precondition(format!("b{j} is not a boundary sink")));
    }
    let r = net.source_set().iter().position(|&s| s == i).expect("source");
    Ok(rational_measurements(net)?.swap_remove(r).swap_remove(j - 1))
}

/// Sign `(−1)^s` with `s` the number of sources strictly between `a` and `b`.
pub(crate) fn between_sign(sources: &[usize], a: usize, b: usize) -> bool {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    sources.iter().filter(|&&s| s > lo && s < hi).count() % 2 == 1
}

/// Assembles `A(N)` from measurements in any ring: identity on source
/// columns and `(−1)^s M_ij` elsewhere.
pub(crate) fn assemble_matrix<R: MeasureRing>(
    sources: &[usize],
    n: usize,
    rows: Vec<Vec<R>>,
    one: &R,
    neg: impl Fn(&R) -> R,
) -> Vec<Vec<R>> {
    rows.into_iter()
        .enumerate()
        .map(|(r, mut row)| {
            let ir = sources[r];
            for j in 1..=n {
                if sources.contains(&j) {
                    row[j - 1] = if j == ir { one.clone() } else { one.zero_like() };
                } else if between_sign(sources, ir, j) {
                    row[j - 1] = neg(&row[j - 1]);
                }
            }
            row
        })
        .collect()
}

/// The boundary measurement matrix `A(N)`.
pub fn boundary_measurement_matrix(net: &PlanarDirectedNetwork) -> Result<RationalMatrix> {
    let sources = net.source_set();
    let rows = rational_measurements(net)?;
    if sources.is_empty() {
        return Ok(RationalMatrix::zeros(0, net.n()));
    }
    RationalMatrix::from_rows(assemble_matrix(&sources, net.n(), rows, &Rational::one(), |x| -x))
}

/// The Plücker vector of `A(N)`.
pub fn measure(net: &PlanarDirectedNetwork) -> Result<PluckerVector> {
    plucker_vector(&boundary_measurement_matrix(net)?)
}

/// `Δ_J` through the signed sum over bijections `π: I∖J → J∖I` of
/// `(−1)^{crossings(π)} Π M_{i,π(i)}`.
pub fn signed_bijection_minor(net: &PlanarDirectedNetwork, j: &[usize]) -> Result<Rational> {
    let src = net.source_set();
    check_subset(j, src.len(), net.n())?;
    let k_set: Vec<usize> = src.iter().copied().filter(|i| !j.contains(i)).collect();
    let l_set: Vec<usize> = j.iter().copied().filter(|i| !src.contains(i)).collect();
    let rows = rational_measurements(net)?;
    let m = |i: usize, l: usize| {
        let r = src.iter().position(|&s| s == i).expect("source");
        rows[r][l - 1].clone()
    };
    let mut total = Rational::zero();
    let mut perm: Vec<usize> = (0..l_set.len()).collect();
    loop {
        let targets: Vec<usize> = perm.iter().map(|&p| l_set[p]).collect();
        let mut term = Rational::one();
        for (a, &i) in k_set.iter().enumerate() {
            term *= m(i, targets[a]);
        }
        if !term.is_zero() {
            let mut xing = 0;
            for a in 0..k_set.len() {
                for b in a + 1..k_set.len() {
                    if chords_cross(k_set[a], targets[a], k_set[b], targets[b]) {
                        xing += 1;
                    }
                }
            }
            if xing % 2 == 1 {
                total -= term;
            } else {
                total += term;
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(total)
}

/// Whether chords `{a,b}` and `{c,d}` with four distinct endpoints cross.
pub(crate) fn chords_cross(a: usize, b: usize, c: usize, d: usize) -> bool {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let inside = |x: usize| x > lo && x < hi;
    inside(c) != inside(d)
}

/// Advances to the next permutation in lexicographic order.
pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exactmath::{k_subsets, maximal_minor, q, qf};
    use crate::network::random::{random_network, RandomNetworkParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn cyclic_example(x: i64, y: i64, z: i64, t: i64) -> PlanarDirectedNetwork {
        crate::network::two_vertex_cycle(q(x), q(y), q(z), q(t))
    }

    #[test]
    fn cyclic_example_values() {
        assert_eq!(boundary_measurement(&cyclic_example(1, 1, 1, 1), 1, 2).unwrap(), qf(1, 2));
        assert_eq!(boundary_measurement(&cyclic_example(2, 3, 5, 7), 1, 2).unwrap(), qf(21, 8));
    }

    #[test]
    fn edgeless_network_matrix() {
        let net = PlanarDirectedNetwork::new(2, &[1]).unwrap();
        assert_eq!(boundary_measurement_matrix(&net).unwrap(), RationalMatrix::from_i64(&[&[1, 0]]));
        let net = PlanarDirectedNetwork::new(4, &[1, 2]).unwrap();
        let p = measure(&net).unwrap();
        for s in k_subsets(4, 2) {
            assert_eq!(p.get(&s), if s == vec![1, 2] { q(1) } else { q(0) });
        }
    }

    #[test]
    fn measurement_errors() {
        let net = cyclic_example(1, 1, 1, 1);
        assert!(boundary_measurement(&net, 2, 1).is_err());
        assert!(boundary_measurement(&net, 1, 3).is_err());
    }

    #[test]
    fn four_point_matrix_shape() {
        // b1 top, b2 right, b3 bottom, b4 left; a square of internal
        // vertices routes b1 and b3 to b2 and b4.
        let text = "n 4\nsources 1 3\n\
            vertex 1 boundary 0\nvertex 2 boundary 6\nvertex 3 boundary 1\nvertex 4 boundary 7\n\
            vertex 5 internal 0 2 3\nvertex 6 internal 1 5 4\n\
            vertex 7 internal 2 6 4\nvertex 8 internal 3 5 7\n\
            edge 0 1 5 1\nedge 1 3 6 1\nedge 2 5 7 2\nedge 3 5 8 5\nedge 4 6 7 3\nedge 5 6 8 7\nedge 6 7 2 1\nedge 7 8 4 1\n";
        let net = PlanarDirectedNetwork::parse(text).unwrap();
        let a = boundary_measurement_matrix(&net).unwrap();
        assert_eq!(a, RationalMatrix::from_i64(&[&[1, 2, 0, -5], &[0, 3, 1, 7]]));
        assert_eq!(measure(&net).unwrap().get(&[2, 4]), q(29));
        assert_eq!(signed_bijection_minor(&net, &[2, 4]).unwrap(), q(29));
    }

    #[test]
    fn series_inverse() {
        let s = Series { coeffs: vec![q(1), q(2), q(0), q(3)] };
        let p = s.mul(&s.inv());
        assert_eq!(p, Series::constant(q(1), 3));
    }

    #[test]
    fn random_networks_are_tnn_and_match_bijection_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let net =
                random_network(&mut rng, &RandomNetworkParams { n: 4, internal: 4, edges: 9, ..Default::default() });
            let a = boundary_measurement_matrix(&net).unwrap();
            let src = net.source_set();
            for j in k_subsets(net.n(), net.k()) {
                let d = maximal_minor(&a, &j).unwrap();
                assert!(d >= q(0), "negative minor {j:?}");
                assert_eq!(d, signed_bijection_minor(&net, &j).unwrap());
                if j == src {
                    assert_eq!(d, q(1));
                }
            }
        }
    }
}
