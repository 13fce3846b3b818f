//! Le-diagrams and Le-tableaux, their Γ-networks, the parametrization
//! `T ↦ Meas(N_T)` and its inverse on totally nonnegative matrices.
//!
//! Boxes are indexed `(i, j)` with rows `1..=k` from the top and columns
//! `1..=n−k` from the left. The boundary vertices `b_1, …, b_n` sit on the
//! steps of the lattice path from the upper-right corner to the lower-left
//! corner; vertical steps are sources.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::embedding::HalfEdge;
use crate::error::{Error, Result};
use crate::exactmath::{
    echelon_form, fmt_rational, lambda_to_subset, negative_minor, parse_rational, Partition, PluckerVector, Rational,
    RationalMatrix,
};
use crate::network::{gauge_transform, measure, random_weight, PlanarDirectedNetwork};

/// A 0/1 filling of a Young diagram with the Le-property.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LeDiagram {
    shape: Partition,
    fill: Vec<Vec<bool>>,
}

/// A nonnegative rational filling whose support is a Le-diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeTableau {
    shape: Partition,
    #[serde(with = "entries_serde")]
    entries: Vec<Vec<Rational>>,
}

mod entries_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(fmt_rational).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        rows.iter().map(|r| r.iter().map(|x| parse_rational(x).map_err(serde::de::Error::custom)).collect()).collect()
    }
}

fn check_fill_shape<T>(shape: &Partition, fill: &[Vec<T>]) -> Result<()> {
    let parts = shape.parts();
    if fill.len() != parts.len() || fill.iter().zip(parts).any(|(row, &p)| row.len() != p) {
        return Err(Error::validation(format!("fill does not match shape {shape}")));
    }
    Ok(())
}

/// Whether the filling has the Le-property: a 0 with a 1 above it in its
/// column has only 0s to its left.
pub fn is_le_diagram(shape: &Partition, fill: &[Vec<bool>]) -> Result<bool> {
    check_fill_shape(shape, fill)?;
    for (i, row) in fill.iter().enumerate() {
        for (j, &b) in row.iter().enumerate() {
            if b {
                continue;
            }
            let blocked = (0..i).any(|r| fill[r][j]);
            if blocked && row[..j].iter().any(|&x| x) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl LeDiagram {
    pub fn new(shape: Partition, fill: Vec<Vec<bool>>) -> Result<Self> {
        if !is_le_diagram(&shape, &fill)? {
            return Err(Error::validation("filling violates the Le-property"));
        }
        Ok(LeDiagram { shape, fill })
    }

    /// The all-zero diagram of a shape.
    pub fn zero(shape: Partition) -> Self {
        let fill = shape.parts().iter().map(|&p| vec![false; p]).collect();
        LeDiagram { shape, fill }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn k(&self) -> usize {
        self.shape.k()
    }

    pub fn n(&self) -> usize {
        self.shape.n()
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.fill
    }

    /// Entry of box `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.fill[i - 1][j - 1]
    }

    /// Number of 1s.
    pub fn size(&self) -> usize {
        self.fill.iter().flatten().filter(|&&b| b).count()
    }

    /// Tableau with every 1 replaced by `1`.
    pub fn unit_tableau(&self) -> LeTableau {
        let entries = self
            .fill
            .iter()
            .map(|r| r.iter().map(|&b| if b { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        LeTableau { shape: self.shape.clone(), entries }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (shape, rows) = parse_le_text(text)?;
        let fill = rows
            .into_iter()
            .map(|(line, r)| {
                r.iter()
                    .map(|t| match *t {
                        "0" => Ok(false),
                        "1" => Ok(true),
                        _ => Err(Error::parse(line, format!("expected 0 or 1, found {t:?}"))),
                    })
                    .collect::<Result<Vec<bool>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        LeDiagram::new(shape, fill)
    }

    pub fn to_text(&self) -> String {
        le_text(
            &self.shape,
            self.fill.iter().map(|r| r.iter().map(|&b| if b { "1".into() } else { "0".into() }).collect()),
        )
    }
}

impl fmt::Display for LeDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl LeTableau {
    pub fn new(shape: Partition, entries: Vec<Vec<Rational>>) -> Result<Self> {
        check_fill_shape(&shape, &entries)?;
        if entries.iter().flatten().any(|x| x.is_negative()) {
            return Err(Error::validation("tableau entries must be nonnegative"));
        }
        let t = LeTableau { shape, entries };
        if !is_le_diagram(&t.shape, &t.support_fill())? {
            return Err(Error::validation("support violates the Le-property"));
        }
        Ok(t)
    }

    /// A tableau supported on `d` with the given positive values, listed
    /// row by row over the 1s of `d`.
    pub fn from_diagram(d: &LeDiagram, values: &[Rational]) -> Result<Self> {
        if values.len() != d.size() {
            return Err(Error::validation(format!("expected {} values, got {}", d.size(), values.len())));
        }
        if values.iter().any(|v| !v.is_positive()) {
            return Err(Error::validation("tableau values must be positive"));
        }
        let mut it = values.iter();
        let entries = d
            .fill
            .iter()
            .map(|r| {
                r.iter().map(|&b| if b { it.next().cloned().unwrap_or_default() } else { Rational::zero() }).collect()
            })
            .collect();
        Ok(LeTableau { shape: d.shape.clone(), entries })
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn k(&self) -> usize {
        self.shape.k()
    }

    pub fn n(&self) -> usize {
        self.shape.n()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    /// Entry of box `(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i - 1][j - 1]
    }

    fn support_fill(&self) -> Vec<Vec<bool>> {
        self.entries.iter().map(|r| r.iter().map(|x| !x.is_zero()).collect()).collect()
    }

    /// The Le-diagram of nonzero boxes.
    pub fn diagram(&self) -> LeDiagram {
        LeDiagram { shape: self.shape.clone(), fill: self.support_fill() }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (shape, rows) = parse_le_text(text)?;
        let entries = rows
            .into_iter()
            .map(|(line, r)| {
                r.iter()
                    .map(|t| parse_rational(t).map_err(|e| Error::parse(line, e.to_string())))
                    .collect::<Result<Vec<Rational>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        LeTableau::new(shape, entries)
    }

    pub fn to_text(&self) -> String {
        le_text(&self.shape, self.entries.iter().map(|r| r.iter().map(fmt_rational).collect()))
    }
}

impl fmt::Display for LeTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

type RawRows<'a> = Vec<(usize, Vec<&'a str>)>;

/// Text format: `k n`, then the k parts (omitted when k = 0), then one line
/// per nonzero row.
fn parse_le_text(text: &str) -> Result<(Partition, RawRows<'_>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header \"k n\""))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::parse(hl, format!("bad integer {t:?}"))))
        .collect::<Result<_>>()?;
    let [k, n] = nums[..] else {
        return Err(Error::parse(hl, "header must be \"k n\""));
    };
    let parts: Vec<usize> = if k == 0 {
        Vec::new()
    } else {
        let (sl, s) = lines.next().ok_or_else(|| Error::parse(hl + 1, "missing shape line"))?;
        s.split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse(sl, format!("bad part {t:?}"))))
            .collect::<Result<_>>()?
    };
    let shape = Partition::new(k, n, &parts)?;
    let rows: RawRows<'_> = lines.map(|(i, l)| (i, l.split_whitespace().collect())).collect();
    let nonzero = shape.nonzero_parts().len();
    if rows.len() != nonzero {
        return Err(Error::validation(format!("expected {nonzero} rows, found {}", rows.len())));
    }
    let mut full: RawRows<'_> = rows;
    full.resize(k, (0, Vec::new()));
    Ok((shape, full))
}

fn le_text(shape: &Partition, rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut s = format!("{} {}\n", shape.k(), shape.n());
    if shape.k() > 0 {
        let parts: Vec<String> = shape.parts().iter().map(|p| p.to_string()).collect();
        s.push_str(&parts.join(" "));
        s.push('\n');
    }
    for r in rows.filter(|r| !r.is_empty()) {
        s.push_str(&r.join(" "));
        s.push('\n');
    }
    s
}

/// Label of the horizontal step under column `c` (1-based).
pub fn column_sink(shape: &Partition, c: usize) -> usize {
    shape.n() - shape.k() - c + shape.column_len(c) + 1
}

/// Label of the vertical step at the end of row `r` (1-based).
pub fn row_source(shape: &Partition, r: usize) -> usize {
    lambda_to_subset(shape)[r - 1]
}

/// The Γ-network `N_T`: one internal vertex per nonzero box, hooks running
/// right to the row's source and down to the column's sink, edges pointing
/// left and down, the horizontal edge entering box `(i, j)` weighted
/// `T(i, j)` and vertical edges weighted 1.
pub fn gamma_network(t: &LeTableau) -> PlanarDirectedNetwork {
    let shape = &t.shape;
    let (k, n) = (shape.k(), shape.n());
    let sources = lambda_to_subset(shape);
    let mut net = PlanarDirectedNetwork::new(n, &sources).expect("I(λ) is a valid source set");
    let mut vid: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for i in 1..=k {
        for j in 1..=shape.parts()[i - 1] {
            if !t.get(i, j).is_zero() {
                vid.insert((i, j), net.add_vertex());
            }
        }
    }
    // Half-edges at each box vertex, by direction.
    #[derive(Default, Clone)]
    struct Ports {
        up: Option<HalfEdge>,
        right: Option<HalfEdge>,
        down: Option<HalfEdge>,
        left: Option<HalfEdge>,
    }
    let mut ports: BTreeMap<usize, Ports> = vid.values().map(|&v| (v, Ports::default())).collect();
    for i in 1..=k {
        let row: Vec<usize> = (1..=shape.parts()[i - 1]).rev().filter(|&j| vid.contains_key(&(i, j))).collect();
        let mut prev = row_source(shape, i) - 1;
        for &j in &row {
            let v = vid[&(i, j)];
            let e = net.add_edge(prev, v, t.get(i, j).clone());
            if let Some(p) = ports.get_mut(&prev) {
                p.left = Some(HalfEdge::new(e, 0));
            }
            ports.get_mut(&v).expect("box vertex").right = Some(HalfEdge::new(e, 1));
            prev = v;
        }
    }
    for j in 1..=(n - k) {
        let col: Vec<usize> = (1..=shape.column_len(j)).filter(|&i| vid.contains_key(&(i, j))).collect();
        let verts: Vec<usize> = col.iter().map(|&i| vid[&(i, j)]).collect();
        for (a, &v) in verts.iter().enumerate() {
            let head = verts.get(a + 1).copied().unwrap_or(column_sink(shape, j) - 1);
            let e = net.add_edge(v, head, Rational::one());
            ports.get_mut(&v).expect("box vertex").down = Some(HalfEdge::new(e, 0));
            if let Some(p) = ports.get_mut(&head) {
                p.up = Some(HalfEdge::new(e, 1));
            }
        }
    }
    for (&v, p) in &ports {
        let rot: Vec<HalfEdge> = [p.up, p.right, p.down, p.left].into_iter().flatten().collect();
        net.set_rotation(v, rot);
    }
    debug_assert!(net.validate().is_ok());
    net
}

/// `Meas_D(T) = Meas(N_T)`.
pub fn meas_d(t: &LeTableau) -> Result<PluckerVector> {
    measure(&gamma_network(t))
}

/// The unique gauge on a Γ-network that makes every vertical edge weight 1.
/// At each internal vertex the vertical out-edge is the first out-edge
/// clockwise after the in-edges.
pub fn gamma_gauge(net: &PlanarDirectedNetwork) -> Result<BTreeMap<usize, Rational>> {
    let emb = net.embedding();
    let mut down: BTreeMap<usize, usize> = BTreeMap::new();
    for v in emb.internal_vertices() {
        let rot = emb.rotation(v);
        let m = rot.len();
        let pick = (0..m).find(|&p| rot[p].end == 0 && rot[(p + m - 1) % m].end == 1);
        match pick {
            Some(p) => down.insert(v, rot[p].edge),
            None => return Err(Error::validation(format!("vertex {} is not a Γ-network vertex", v + 1))),
        };
    }
    let mut t: BTreeMap<usize, Rational> = BTreeMap::new();
    fn resolve(
        v: usize,
        net: &PlanarDirectedNetwork,
        down: &BTreeMap<usize, usize>,
        t: &mut BTreeMap<usize, Rational>,
        depth: usize,
    ) -> Result<Rational> {
        if v < net.n() {
            return Ok(Rational::one());
        }
        if let Some(x) = t.get(&v) {
            return Ok(x.clone());
        }
        if depth > down.len() {
            return Err(Error::validation("vertical edges form a cycle"));
        }
        let e = down[&v];
        let below = resolve(net.head(e), net, down, t, depth + 1)?;
        let val = below / net.weight(e);
        t.insert(v, val.clone());
        Ok(val)
    }
    for &v in down.keys() {
        resolve(v, net, &down, &mut t, 0)?;
    }
    Ok(t)
}

/// Normalizes a Γ-network so that all vertical edges have weight 1.
pub fn gamma_normalize(net: &PlanarDirectedNetwork) -> Result<PlanarDirectedNetwork> {
    gauge_transform(net, &gamma_gauge(net)?)
}

/// Recovers the Le-tableau `T` with `A(N_T)` equal to the echelon form of a
/// totally nonnegative matrix of full row rank.
pub fn invert_measurement(a: &RationalMatrix) -> Result<LeTableau> {
    if a.rank() < a.rows() {
        return Err(Error::precondition(format!("matrix has rank {} < {}", a.rank(), a.rows())));
    }
    if let Some((j, v)) = negative_minor(a) {
        return Err(Error::precondition(format!(
            "matrix is not totally nonnegative: minor {j:?} = {}",
            fmt_rational(&v)
        )));
    }
    let (echelon, pivots) = echelon_form(a)?;
    let (k, n) = (a.rows(), a.cols());
    let shape = crate::exactmath::subset_to_lambda(&pivots, n)?;
    let rows = invert_rec(echelon.to_rows(), n)?;
    debug_assert_eq!(rows.len(), k);
    LeTableau::new(shape, rows)
}

/// One step of the inverse procedure on an echelon matrix given by rows.
/// Returns the tableau rows, left-justified, for the shape of its pivots.
// columns index several rows at once
#[allow(clippy::needless_range_loop)]
fn invert_rec(a: Vec<Vec<Rational>>, n: usize) -> Result<Vec<Vec<Rational>>> {
    let k = a.len();
    if k == 0 || k == n {
        return Ok(vec![Vec::new(); k]);
    }
    let is_unit_col = |c: usize, r: usize| (0..k).all(|i| if i == r { a[i][c].is_one() } else { a[i][c].is_zero() });
    let d = (0..k).take_while(|&c| is_unit_col(c, c)).count();
    // Column d+1 (index d) holds ((−1)^{d−1} x_1, …, −x_{d−1}, x_d, 0, …).
    let x: Vec<Rational> =
        (0..d).map(|i| if (d - 1 - i) % 2 == 0 { a[i][d].clone() } else { -a[i][d].clone() }).collect();
    if x.iter().any(|xi| xi.is_negative()) {
        return Err(Error::internal("negative column coefficient on a totally nonnegative input"));
    }
    let first_nonzero = x.iter().position(|xi| !xi.is_zero());
    let blocked: Vec<usize> = match first_nonzero {
        Some(f) => (f + 1..d).filter(|&r| x[r].is_zero()).collect(),
        None => Vec::new(),
    };
    if !blocked.is_empty() {
        for &r in &blocked {
            if (0..n).any(|c| c != r && !a[r][c].is_zero()) {
                return Err(Error::internal("blocked row has extra nonzero entries"));
            }
        }
        let keep_rows: Vec<usize> = (0..k).filter(|r| !blocked.contains(r)).collect();
        let keep_cols: Vec<usize> = (0..n).filter(|c| !blocked.contains(c)).collect();
        let reduced: Vec<Vec<Rational>> = keep_rows
            .iter()
            .map(|&i| {
                let flip = blocked.iter().filter(|&&r| r > i).count() % 2 == 1 && i < d;
                keep_cols.iter().map(|&c| if flip && c >= d { -a[i][c].clone() } else { a[i][c].clone() }).collect()
            })
            .collect();
        let sub = invert_rec(reduced, n - blocked.len())?;
        let width = n - k;
        let mut out = Vec::with_capacity(k);
        let mut it = sub.into_iter();
        for r in 0..k {
            if blocked.contains(&r) {
                out.push(vec![Rational::zero(); width]);
            } else {
                out.push(it.next().expect("row count"));
            }
        }
        return Ok(out);
    }
    let s = first_nonzero.unwrap_or(d);
    let mut c: Vec<Vec<Rational>> = vec![Vec::with_capacity(n - 1); k];
    for (i, row) in c.iter_mut().enumerate() {
        row.extend((0..d).map(|col| a[i][col].clone()));
        for j in d + 1..n {
            let v = if i < s || i >= d {
                a[i][j].clone()
            } else if i + 1 < d {
                &a[i][j] / &x[i] + &a[i + 1][j] / &x[i + 1]
            } else {
                &a[i][j] / &x[i]
            };
            row.push(v);
        }
    }
    let mut sub = invert_rec(c, n - 1)?;
    for (i, row) in sub.iter_mut().enumerate().take(d) {
        row.push(x[i].clone());
    }
    Ok(sub)
}

/// All Le-diagrams of a shape, built by choosing the last column and
/// recursing on the shape with blocked rows and that column removed.
pub fn enumerate_le_diagrams(shape: &Partition) -> Vec<LeDiagram> {
    enum_fills(shape.parts()).into_iter().map(|fill| LeDiagram { shape: shape.clone(), fill }).collect()
}

fn enum_fills(parts: &[usize]) -> Vec<Vec<Vec<bool>>> {
    let width = parts.first().copied().unwrap_or(0);
    if width == 0 {
        return vec![vec![Vec::new(); parts.len()]];
    }
    let d = parts.iter().take_while(|&&p| p == width).count();
    let mut out = Vec::new();
    for mask in 0u32..(1 << d) {
        let col: Vec<bool> = (0..d).map(|i| mask >> i & 1 == 1).collect();
        let first = col.iter().position(|&b| b);
        let blocked: Vec<usize> = match first {
            Some(f) => (f + 1..d).filter(|&r| !col[r]).collect(),
            None => Vec::new(),
        };
        let sub_parts: Vec<usize> = (0..parts.len())
            .filter(|r| !blocked.contains(r))
            .map(|r| if r < d { parts[r] - 1 } else { parts[r] })
            .collect();
        for sub in enum_fills(&sub_parts) {
            let mut it = sub.into_iter();
            let fill: Vec<Vec<bool>> = (0..parts.len())
                .map(|r| {
                    if blocked.contains(&r) {
                        vec![false; parts[r]]
                    } else {
                        let mut row = it.next().expect("row count");
                        if r < d {
                            row.push(col[r]);
                        }
                        row
                    }
                })
                .collect();
            out.push(fill);
        }
    }
    out
}

/// `Σ_D q^{|D|}` over Le-diagrams of a shape, as a coefficient list.
pub fn le_diagram_polynomial(shape: &Partition) -> Vec<BigUint> {
    fn rec(parts: &[usize], memo: &mut BTreeMap<Vec<usize>, Vec<BigUint>>) -> Vec<BigUint> {
        let width = parts.first().copied().unwrap_or(0);
        if width == 0 {
            return vec![BigUint::one()];
        }
        if let Some(v) = memo.get(parts) {
            return v.clone();
        }
        let d = parts.iter().take_while(|&&p| p == width).count();
        let mut acc: Vec<BigUint> = Vec::new();
        for mask in 0u32..(1 << d) {
            let ones = mask.count_ones() as usize;
            let first = (0..d).find(|&i| mask >> i & 1 == 1);
            let blocked: Vec<usize> = match first {
                Some(f) => (f + 1..d).filter(|&r| mask >> r & 1 == 0).collect(),
                None => Vec::new(),
            };
            let sub: Vec<usize> = (0..parts.len())
                .filter(|r| !blocked.contains(r))
                .map(|r| if r < d { parts[r] - 1 } else { parts[r] })
                .collect();
            let p = rec(&sub, memo);
            if acc.len() < p.len() + ones {
                acc.resize(p.len() + ones, BigUint::zero());
            }
            for (e, c) in p.iter().enumerate() {
                acc[e + ones] += c;
            }
        }
        memo.insert(parts.to_vec(), acc.clone());
        acc
    }
    rec(shape.parts(), &mut BTreeMap::new())
}

/// All Le-diagrams in the `k × (n−k)` rectangle.
pub fn all_le_diagrams(k: usize, n: usize) -> Vec<LeDiagram> {
    Partition::all_in_box(k, n).iter().flat_map(enumerate_le_diagrams).collect()
}

/// A random Le-tableau in the `k × (n−k)` box: a uniform shape, a uniform
/// Le-diagram of that shape and entries `p/q` with `p ≤ 9`, `q ≤ 4`.
pub fn random_le_tableau<R: Rng>(rng: &mut R, k: usize, n: usize) -> LeTableau {
    let shapes = Partition::all_in_box(k, n);
    let sh = &shapes[rng.gen_range(0..shapes.len())];
    let ds = enumerate_le_diagrams(sh);
    let d = &ds[rng.gen_range(0..ds.len())];
    let vals: Vec<Rational> = (0..d.size()).map(|_| random_weight(rng, 9, 4)).collect();
    LeTableau::from_diagram(d, &vals).expect("one value per box")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::{is_tnn, matroid_of, plucker_vector, q, qf, Matroid};
    use crate::network::{boundary_measurement_matrix, PlanarDirectedNetwork};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn shape(k: usize, n: usize, parts: &[usize]) -> Partition {
        Partition::new(k, n, parts).unwrap()
    }

    fn fig_diagram() -> LeDiagram {
        // Shape (5,5,2,1): dots at (1,3),(1,5),(2,1),(2,2),(2,3),(2,5).
        let sh = shape(4, 9, &[5, 5, 2, 1]);
        let mut fill: Vec<Vec<bool>> = sh.parts().iter().map(|&p| vec![false; p]).collect();
        for (i, j) in [(1, 3), (1, 5), (2, 1), (2, 2), (2, 3), (2, 5)] {
            fill[i - 1][j - 1] = true;
        }
        LeDiagram::new(sh, fill).unwrap()
    }

    /// Sum of path weights over all directed paths, for acyclic networks.
    fn path_sum(net: &PlanarDirectedNetwork, v: usize, target: usize) -> Rational {
        if v == target {
            return Rational::one();
        }
        net.out_edges(v).into_iter().map(|e| net.weight(e) * path_sum(net, net.head(e), target)).sum()
    }

    fn random_tableau(rng: &mut ChaCha8Rng, k: usize, n: usize) -> LeTableau {
        random_le_tableau(rng, k, n)
    }

    #[test]
    fn le_property_examples() {
        let sh = shape(2, 4, &[2, 2]);
        assert!(is_le_diagram(&sh, &[vec![false; 2], vec![false; 2]]).unwrap());
        assert!(!is_le_diagram(&sh, &[vec![false, true], vec![true, false]]).unwrap());
        assert!(is_le_diagram(&sh, &[vec![true, false], vec![false, true]]).unwrap());
        assert!(is_le_diagram(&sh, &[vec![true]]).is_err());
        let d = fig_diagram();
        assert_eq!(d.size(), 6);
    }

    #[test]
    fn text_roundtrip() {
        let d = fig_diagram();
        assert_eq!(LeDiagram::parse(&d.to_text()).unwrap(), d);
        let t = LeTableau::from_diagram(&d, &[q(1), qf(2, 3), q(3), q(4), q(5), qf(1, 7)]).unwrap();
        assert_eq!(LeTableau::parse(&t.to_text()).unwrap(), t);
        let e = LeTableau::new(Partition::empty(0, 3), vec![]).unwrap();
        assert_eq!(e.to_text(), "0 3\n");
        assert_eq!(LeTableau::parse("0 3\n").unwrap(), e);
        assert!(LeDiagram::parse("2 4\n2 2\n0 1\n1 0\n").is_err());
    }

    #[test]
    fn single_box_network() {
        let t = LeTableau::new(shape(1, 2, &[1]), vec![vec![q(5)]]).unwrap();
        let net = gamma_network(&t);
        assert_eq!(boundary_measurement_matrix(&net).unwrap(), RationalMatrix::from_i64(&[&[1, 5]]));
        let p = meas_d(&t).unwrap();
        assert_eq!((p.get(&[1]), p.get(&[2])), (q(1), q(5)));
        let empty = gamma_network(&LeTableau::new(Partition::empty(1, 2), vec![vec![]]).unwrap());
        assert_eq!(empty.embedding().num_edges(), 0);
        assert_eq!(empty.source_set(), vec![2]);
    }

    #[test]
    fn boundary_labels_follow_the_lattice_path() {
        // Thirteen steps with vertical steps at 3,5,6,8,10,13.
        let sh = crate::exactmath::subset_to_lambda(&[3, 5, 6, 8, 10, 13], 13).unwrap();
        let ones = LeDiagram::zero(sh.clone());
        let net = gamma_network(&ones.unit_tableau());
        assert_eq!(net.source_set(), vec![3, 5, 6, 8, 10, 13]);
        let sinks: Vec<usize> = (1..=sh.n() - sh.k()).map(|c| column_sink(&sh, c)).collect();
        let mut all: Vec<usize> = sinks.into_iter().chain(lambda_to_subset(&sh)).collect();
        all.sort_unstable();
        assert_eq!(all, (1..=13).collect::<Vec<_>>());
    }

    #[test]
    fn measurements_match_path_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let t = random_tableau(&mut rng, 3, 7);
            let net = gamma_network(&t);
            net.validate().unwrap();
            assert!(net.is_acyclic());
            let a = boundary_measurement_matrix(&net).unwrap();
            let src = net.source_set();
            for (r, &i) in src.iter().enumerate() {
                for j in 1..=net.n() {
                    if src.contains(&j) {
                        continue;
                    }
                    let m = path_sum(&net, i - 1, j - 1);
                    let s = src.iter().filter(|&&x| x > i.min(j) && x < i.max(j)).count();
                    let expected = if s % 2 == 0 { m } else { -m };
                    assert_eq!(a.get(r, j - 1), &expected);
                }
            }
        }
    }

    #[test]
    fn zero_tableau_gives_a_point() {
        for sh in Partition::all_in_box(2, 5) {
            let p = meas_d(&LeDiagram::zero(sh.clone()).unit_tableau()).unwrap();
            assert_eq!(p.support(), Matroid::new(2, 5, [lambda_to_subset(&sh)]).unwrap());
        }
    }

    #[test]
    fn matroid_depends_only_on_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for sh in Partition::all_in_box(2, 5) {
            for d in enumerate_le_diagrams(&sh) {
                let m0 = meas_d(&d.unit_tableau()).unwrap().support();
                for _ in 0..3 {
                    let vals: Vec<Rational> =
                        (0..d.size()).map(|_| qf(rng.gen_range(1..=7), rng.gen_range(1..=5))).collect();
                    let t = LeTableau::from_diagram(&d, &vals).unwrap();
                    let p = meas_d(&t).unwrap();
                    assert_eq!(p.support(), m0);
                    assert!(p.is_nonnegative());
                    assert_eq!(p.get(&lambda_to_subset(&sh)), q(1));
                }
            }
        }
    }

    #[test]
    fn gamma_gauge_restores_unit_verticals() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let t = random_tableau(&mut rng, 3, 6);
            let net = gamma_network(&t);
            let gauge: BTreeMap<usize, Rational> = net
                .embedding()
                .internal_vertices()
                .map(|v| (v, qf(rng.gen_range(1..=6), rng.gen_range(1..=6))))
                .collect();
            let moved = gauge_transform(&net, &gauge).unwrap();
            assert_eq!(gamma_normalize(&moved).unwrap(), net);
        }
    }

    #[test]
    fn inverse_examples() {
        let t = invert_measurement(&RationalMatrix::from_i64(&[&[1, 0, 0, 0], &[0, 1, 0, 0]])).unwrap();
        assert_eq!(t, LeTableau::new(shape(2, 4, &[2, 2]), vec![vec![q(0); 2], vec![q(0); 2]]).unwrap());
        let t = invert_measurement(&RationalMatrix::from_i64(&[&[1, 7]])).unwrap();
        assert_eq!(t.rows(), &[vec![q(7)]]);
        let scaled = RationalMatrix::from_i64(&[&[2, 6]]);
        assert_eq!(invert_measurement(&scaled).unwrap().rows(), &[vec![q(3)]]);
        let bad = RationalMatrix::from_i64(&[&[1, 0], &[0, -1]]);
        assert!(matches!(invert_measurement(&bad), Err(Error::Precondition(_))));
        let deficient = RationalMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        assert!(matches!(invert_measurement(&deficient), Err(Error::Precondition(_))));
    }

    #[test]
    fn inverse_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..80 {
            let (k, n) = [(1, 4), (2, 5), (3, 6), (3, 7), (2, 6)][rng.gen_range(0..5)];
            let t = random_tableau(&mut rng, k, n);
            let a = boundary_measurement_matrix(&gamma_network(&t)).unwrap();
            assert!(is_tnn(&a));
            assert_eq!(invert_measurement(&a).unwrap(), t);
        }
    }

    #[test]
    fn inverse_of_a_generic_tnn_matrix() {
        // Vandermonde rows give a point of the top cell.
        let a = RationalMatrix::from_i64(&[&[1, 1, 1, 1], &[1, 2, 3, 4]]);
        let t = invert_measurement(&a).unwrap();
        assert_eq!(t.diagram().size(), 4);
        let back = boundary_measurement_matrix(&gamma_network(&t)).unwrap();
        assert!(plucker_vector(&back).unwrap().projectively_equal(&plucker_vector(&a).unwrap()));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for k in 0..=4 {
            for n in k..=k + 4 {
                for sh in Partition::all_in_box(k, n) {
                    if sh.size() > 12 {
                        continue;
                    }
                    let fast = enumerate_le_diagrams(&sh);
                    let cells: Vec<(usize, usize)> =
                        (1..=k).flat_map(|i| (1..=sh.parts()[i - 1]).map(move |j| (i, j))).collect();
                    let mut brute = Vec::new();
                    for mask in 0u32..(1 << cells.len()) {
                        let mut fill: Vec<Vec<bool>> = sh.parts().iter().map(|&p| vec![false; p]).collect();
                        for (b, &(i, j)) in cells.iter().enumerate() {
                            fill[i - 1][j - 1] = mask >> b & 1 == 1;
                        }
                        if is_le_diagram(&sh, &fill).unwrap() {
                            brute.push(LeDiagram { shape: sh.clone(), fill });
                        }
                    }
                    let mut f = fast.clone();
                    f.sort();
                    brute.sort();
                    assert_eq!(f, brute, "shape {sh}");
                    let poly = le_diagram_polynomial(&sh);
                    for (e, c) in poly.iter().enumerate() {
                        assert_eq!(&BigUint::from(fast.iter().filter(|d| d.size() == e).count()), c);
                    }
                }
            }
        }
        assert_eq!(le_diagram_polynomial(&shape(1, 2, &[1])), vec![BigUint::one(), BigUint::one()]);
    }

    #[test]
    fn distinct_diagrams_give_distinct_cells() {
        let ds = all_le_diagrams(2, 5);
        let mut seen = std::collections::BTreeSet::new();
        for d in &ds {
            let m = matroid_of(&boundary_measurement_matrix(&gamma_network(&d.unit_tableau())).unwrap()).unwrap();
            assert!(seen.insert(m.bases().clone()));
        }
        assert_eq!(seen.len(), 131);
    }
}
