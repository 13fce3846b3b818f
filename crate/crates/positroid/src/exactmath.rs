//! Exact rational linear algebra, Plücker coordinates, matroids and the
//! partition/subset dictionary.
//!
//! Subsets of `[n]` are sorted `Vec<usize>` with 1-based elements.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A sorted list of distinct 1-based indices.
pub type Subset = Vec<usize>;

/// Integer as a rational.
pub fn q(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `num/den` as a rational. Panics on a zero denominator.
pub fn qf(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::validation(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let num: BigInt = a.trim().parse().map_err(|_| bad())?;
            let den: BigInt = b.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(Error::validation(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(num, den))
        }
        None => {
            let num: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(num))
        }
    }
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Rationals serialize as their canonical text form.
pub mod rational_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// All k-subsets of `[n]` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Subset> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - (k - 1 - i) {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Checks that `s` is a sorted k-subset of `[n]`.
pub fn check_subset(s: &[usize], k: usize, n: usize) -> Result<()> {
    if s.len() != k {
        return Err(Error::validation(format!("expected a {k}-subset, got {} elements", s.len())));
    }
    for w in s.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::validation(format!("subset {s:?} is not strictly increasing")));
        }
    }
    if s.iter().any(|&x| x == 0 || x > n) {
        return Err(Error::validation(format!("subset {s:?} not contained in [1,{n}]")));
    }
    Ok(())
}

/// Sorts an index sequence, returning the sorted list and the sign of the
/// sorting permutation, or `None` when an index repeats.
pub fn sort_with_sign(seq: &[usize]) -> Option<(Subset, i32)> {
    let mut v = seq.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Rank of `i` in the cyclically shifted order `s <_s s+1 <_s ... <_s s-1` on `[n]`.
pub fn shifted_rank(i: usize, shift: usize, n: usize) -> usize {
    (i + n - shift) % n
}

/// Elements of `s` listed in increasing `<_shift` order.
pub fn sort_shifted(s: &[usize], shift: usize, n: usize) -> Vec<usize> {
    let mut v = s.to_vec();
    v.sort_by_key(|&i| shifted_rank(i, shift, n));
    v
}

/// Determinant of a square matrix by fraction-free (Bareiss) elimination.
/// Rows are first scaled to integers, and the scaling is divided out at the end.
pub fn determinant(rows: &[Vec<Rational>]) -> Rational {
    let m = rows.len();
    if m == 0 {
        return Rational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(m);
    for row in rows {
        assert_eq!(row.len(), m, "determinant of a non-square matrix");
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        scale *= &l;
        a.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for c in 0..m {
        if a[c][c].is_zero() {
            match (c + 1..m).find(|&r| !a[r][c].is_zero()) {
                Some(r) => {
                    a.swap(c, r);
                    sign = -sign;
                }
                None => return Rational::zero(),
            }
        }
        for r in c + 1..m {
            for j in c + 1..m {
                let v = &a[r][j] * &a[c][c] - &a[r][c] * &a[c][j];
                a[r][j] = v / &prev;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[c][c].clone();
    }
    let d = Rational::new(a[m - 1][m - 1].clone(), scale);
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// k×n matrix of rationals, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    #[serde(with = "matrix_entries")]
    data: Vec<Rational>,
}

mod matrix_entries {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(fmt_rational).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect()
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMatrix[")?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(fmt_rational).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    /// `Id_k` padded with zero columns to width `n`.
    pub fn identity_padded(k: usize, n: usize) -> Self {
        let mut m = Self::zeros(k, n);
        for i in 0..k.min(n) {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::validation("rows of unequal length"));
        }
        Ok(RationalMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Builds from integer entries; convenient in tests and examples.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).expect("rectangular input")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    /// Square submatrix on the given 1-based columns.
    fn column_submatrix(&self, cols: &[usize]) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| cols.iter().map(|&c| self.get(r, c - 1).clone()).collect()).collect()
    }

    /// Reduced row echelon form and the 0-based pivot columns.
    pub fn rref(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            for j in 0..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.get(i, c).is_zero() {
                    let f = m.get(i, c).clone();
                    for j in 0..m.cols {
                        let v = m.get(i, j) - &f * m.get(r, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Parses the text format: a `k n` header then k rows of n rationals.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty matrix file"))?;
        let (k, n) = parse_pair(&header, ln)?;
        let mut rows = Vec::with_capacity(k);
        for _ in 0..k {
            let (ln, line) = lines.next().ok_or_else(|| Error::parse(ln + 1, "missing matrix row"))?;
            let row: Vec<Rational> = line
                .split_whitespace()
                .map(|t| parse_rational(t).map_err(|e| Error::parse(ln, e.to_string())))
                .collect::<Result<_>>()?;
            if row.len() != n {
                return Err(Error::parse(ln, format!("expected {n} entries, found {}", row.len())));
            }
            rows.push(row);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln, "trailing content after matrix"));
        }
        if k > n {
            return Err(Error::validation(format!("k = {k} exceeds n = {n}")));
        }
        if k == 0 {
            return Ok(RationalMatrix::zeros(0, n));
        }
        Self::from_rows(rows)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(fmt_rational).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, String)> + '_ {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            None
        } else {
            Some((i + 1, l.to_string()))
        }
    })
}

pub(crate) fn parse_usizes(line: &str, ln: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| Error::parse(ln, format!("expected a nonnegative integer, got {t:?}"))))
        .collect()
}

pub(crate) fn parse_pair(line: &str, ln: usize) -> Result<(usize, usize)> {
    let v = parse_usizes(line, ln)?;
    if v.len() != 2 {
        return Err(Error::parse(ln, "expected header \"k n\""));
    }
    Ok((v[0], v[1]))
}

/// Δ_J(A) for a sorted 1-based k-subset J.
pub fn maximal_minor(a: &RationalMatrix, j: &[usize]) -> Result<Rational> {
    check_subset(j, a.rows(), a.cols())?;
    Ok(determinant(&a.column_submatrix(j)))
}

/// Echelon form with pivot columns equal to the identity, and the 1-based pivot set.
pub fn echelon_form(a: &RationalMatrix) -> Result<(RationalMatrix, Subset)> {
    let (m, piv) = a.rref();
    if piv.len() != a.rows() {
        return Err(Error::precondition(format!("matrix has rank {} < {}", piv.len(), a.rows())));
    }
    Ok((m, piv.into_iter().map(|c| c + 1).collect()))
}

/// Plücker coordinates of a point of `Gr(k,n)`, indexed by sorted k-subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PluckerVector {
    k: usize,
    n: usize,
    coords: BTreeMap<Subset, Rational>,
}

impl PluckerVector {
    /// Builds from a map of coordinates; missing subsets are zero.
    pub fn from_map(k: usize, n: usize, mut coords: BTreeMap<Subset, Rational>) -> Result<Self> {
        for s in coords.keys() {
            check_subset(s, k, n)?;
        }
        for s in k_subsets(n, k) {
            coords.entry(s).or_insert_with(Rational::zero);
        }
        if coords.values().all(|v| v.is_zero()) {
            return Err(Error::precondition("all Plücker coordinates vanish"));
        }
        Ok(PluckerVector { k, n, coords })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coordinate at a sorted subset (zero when absent).
    pub fn get(&self, s: &[usize]) -> Rational {
        self.coords.get(s).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coordinate for an ordered index sequence, with the sign of its sorting permutation.
    pub fn get_signed(&self, seq: &[usize]) -> Rational {
        match sort_with_sign(seq) {
            None => Rational::zero(),
            Some((s, sign)) => {
                let v = self.get(&s);
                if sign < 0 {
                    -v
                } else {
                    v
                }
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Subset, &Rational)> {
        self.coords.iter()
    }

    /// Rescales so that the first nonzero coordinate in lex order is 1.
    pub fn normalized(&self) -> PluckerVector {
        let lead = self.coords.values().find(|v| !v.is_zero()).cloned().expect("nonzero vector");
        let coords = self.coords.iter().map(|(s, v)| (s.clone(), v / &lead)).collect();
        PluckerVector { k: self.k, n: self.n, coords }
    }

    /// True iff the two vectors differ by a nonzero scalar.
    pub fn projectively_equal(&self, other: &PluckerVector) -> bool {
        self.k == other.k && self.n == other.n && self.normalized() == other.normalized()
    }

    /// Support of the vector as a matroid.
    pub fn support(&self) -> Matroid {
        let bases = self.coords.iter().filter(|(_, v)| !v.is_zero()).map(|(s, _)| s.clone()).collect();
        Matroid { k: self.k, n: self.n, bases }
    }

    /// True iff every coordinate is nonnegative (after fixing the global sign
    /// so that the first nonzero coordinate is positive).
    pub fn is_nonnegative(&self) -> bool {
        self.normalized().coords.values().all(|v| !v.is_negative())
    }

    /// Checks one Grassmann–Plücker relation for ordered sequences `i`, `j` of length k.
    pub fn satisfies_relation(&self, i: &[usize], j: &[usize]) -> bool {
        let k = self.k;
        assert!(i.len() == k && j.len() == k && k > 0);
        let lhs = self.get_signed(i) * self.get_signed(j);
        let mut rhs = Rational::zero();
        for s in 0..k {
            let mut a = i.to_vec();
            a[0] = j[s];
            let mut b = j.to_vec();
            b[s] = i[0];
            rhs += self.get_signed(&a) * self.get_signed(&b);
        }
        lhs == rhs
    }

    /// Checks all Grassmann–Plücker relations for index tuples in `[n]`.
    /// Exponential in k; intended for n ≤ 6.
    pub fn satisfies_all_relations(&self) -> bool {
        let k = self.k;
        if k == 0 {
            return true;
        }
        let n = self.n;
        let total = n.pow(2 * k as u32);
        let mut buf = vec![0usize; 2 * k];
        for code in 0..total {
            let mut c = code;
            for x in buf.iter_mut() {
                *x = c % n + 1;
                c /= n;
            }
            if !self.satisfies_relation(&buf[..k], &buf[k..]) {
                return false;
            }
        }
        true
    }

    /// Text form: `k n` header, then one `subset : value` line per coordinate.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.k, self.n);
        for (sub, v) in &self.coords {
            let idx: Vec<String> = sub.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("{} : {}\n", idx.join(" "), fmt_rational(v)));
        }
        s
    }
}

/// All maximal minors of a full-rank matrix.
pub fn plucker_vector(a: &RationalMatrix) -> Result<PluckerVector> {
    let (k, n) = (a.rows(), a.cols());
    if a.rank() != k {
        return Err(Error::precondition(format!("matrix has rank {} < {k}", a.rank())));
    }
    let mut coords = BTreeMap::new();
    for s in k_subsets(n, k) {
        let v = determinant(&a.column_submatrix(&s));
        coords.insert(s, v);
    }
    PluckerVector::from_map(k, n, coords)
}

/// True iff `a` has full row rank and all maximal minors are ≥ 0.
pub fn is_tnn(a: &RationalMatrix) -> bool {
    negative_minor(a).is_none() && a.rank() == a.rows()
}

/// First maximal minor (in lex order) that is negative, if any.
pub fn negative_minor(a: &RationalMatrix) -> Option<(Subset, Rational)> {
    k_subsets(a.cols(), a.rows()).into_iter().find_map(|s| {
        let v = determinant(&a.column_submatrix(&s));
        if v.is_negative() {
            Some((s, v))
        } else {
            None
        }
    })
}

/// A collection of k-subsets of `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Matroid {
    k: usize,
    n: usize,
    bases: BTreeSet<Subset>,
}

impl Matroid {
    pub fn new(k: usize, n: usize, bases: impl IntoIterator<Item = Subset>) -> Result<Self> {
        let bases: BTreeSet<Subset> = bases.into_iter().collect();
        if bases.is_empty() {
            return Err(Error::validation("a matroid needs at least one base"));
        }
        for b in &bases {
            check_subset(b, k, n)?;
        }
        Ok(Matroid { k, n, bases })
    }

    /// The uniform matroid of all k-subsets.
    pub fn uniform(k: usize, n: usize) -> Self {
        Matroid { k, n, bases: k_subsets(n, k).into_iter().collect() }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bases(&self) -> &BTreeSet<Subset> {
        &self.bases
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.bases.contains(s)
    }

    pub fn is_subset_of(&self, other: &Matroid) -> bool {
        self.k == other.k && self.n == other.n && self.bases.is_subset(&other.bases)
    }

    /// Lexicographically minimal base in the shifted order `<_shift`, as a sorted subset.
    pub fn lex_min_base(&self, shift: usize) -> Subset {
        let mut best: Option<(Vec<usize>, &Subset)> = None;
        for b in &self.bases {
            let key: Vec<usize> =
                sort_shifted(b, shift, self.n).iter().map(|&i| shifted_rank(i, shift, self.n)).collect();
            if best.as_ref().is_none_or(|(bk, _)| key < *bk) {
                best = Some((key, b));
            }
        }
        best.expect("nonempty matroid").1.clone()
    }

    /// Basis exchange axiom.
    pub fn verify_exchange_axiom(&self) -> bool {
        for a in &self.bases {
            for b in &self.bases {
                for &i in a {
                    let ok = b.iter().any(|&j| {
                        let mut c: Vec<usize> = a.iter().copied().filter(|&x| x != i).collect();
                        if c.contains(&j) {
                            return false;
                        }
                        c.push(j);
                        c.sort_unstable();
                        self.bases.contains(&c)
                    });
                    if !ok {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Text format: `k n` then one base per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty matroid file"))?;
        let (k, n) = parse_pair(&header, ln)?;
        let mut bases = Vec::new();
        for (ln, line) in lines {
            let mut b = parse_usizes(&line, ln)?;
            b.sort_unstable();
            check_subset(&b, k, n).map_err(|e| Error::parse(ln, e.to_string()))?;
            bases.push(b);
        }
        if k == 0 && bases.is_empty() {
            bases.push(vec![]);
        }
        Matroid::new(k, n, bases)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.k, self.n);
        for b in &self.bases {
            let v: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            s.push_str(&v.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Matroid of nonvanishing maximal minors.
pub fn matroid_of(a: &RationalMatrix) -> Result<Matroid> {
    Ok(plucker_vector(a)?.support())
}

/// A partition inside the `k × (n−k)` rectangle, stored with exactly k parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    k: usize,
    n: usize,
    parts: Vec<usize>,
}

impl Partition {
    /// Validates `λ ⊆ (n−k)^k`; missing trailing parts are zero.
    pub fn new(k: usize, n: usize, parts: &[usize]) -> Result<Self> {
        if k > n {
            return Err(Error::validation(format!("k = {k} exceeds n = {n}")));
        }
        let trimmed: Vec<usize> = {
            let mut p = parts.to_vec();
            while p.last() == Some(&0) {
                p.pop();
            }
            p
        };
        if trimmed.len() > k {
            return Err(Error::validation(format!("partition {parts:?} has more than {k} rows")));
        }
        if trimmed.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::validation(format!("parts {parts:?} are not weakly decreasing")));
        }
        if trimmed.first().is_some_and(|&p| p > n - k) {
            return Err(Error::validation(format!("partition {parts:?} exceeds the {k}x{} rectangle", n - k)));
        }
        let mut p = trimmed;
        p.resize(k, 0);
        Ok(Partition { k, n, parts: p })
    }

    pub fn empty(k: usize, n: usize) -> Self {
        Partition { k, n, parts: vec![0; k] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The k parts, zero padded.
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Nonzero parts.
    pub fn nonzero_parts(&self) -> &[usize] {
        let len = self.parts.iter().take_while(|&&p| p > 0).count();
        &self.parts[..len]
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Length of column `j` (1-based).
    pub fn column_len(&self, j: usize) -> usize {
        self.parts.iter().filter(|&&p| p >= j).count()
    }

    pub fn contains_box(&self, i: usize, j: usize) -> bool {
        i >= 1 && i <= self.k && j >= 1 && j <= self.parts[i - 1]
    }

    /// Young-diagram containment.
    pub fn is_contained_in(&self, other: &Partition) -> bool {
        self.k == other.k && self.n == other.n && self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b)
    }

    /// All partitions in the `k × (n−k)` rectangle.
    pub fn all_in_box(k: usize, n: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(k: usize, n: usize, maxp: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if cur.len() == k {
                out.push(Partition { k, n, parts: cur.clone() });
                return;
            }
            for p in (0..=maxp).rev() {
                cur.push(p);
                rec(k, n, p, cur, out);
                cur.pop();
            }
        }
        if k <= n {
            rec(k, n, n - k, &mut cur, &mut out);
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.nonzero_parts().iter().map(|p| p.to_string()).collect();
        write!(f, "({})", v.join(","))
    }
}

/// `I(λ)`: the labels of vertical steps, `i_j = n − k + j − λ_j`.
pub fn lambda_to_subset(lambda: &Partition) -> Subset {
    let (k, n) = (lambda.k, lambda.n);
    (1..=k).map(|j| n - k + j - lambda.parts[j - 1]).collect()
}

/// Inverse of [`lambda_to_subset`]: `λ_j = |[i_j, n] \ I|`.
pub fn subset_to_lambda(s: &[usize], n: usize) -> Result<Partition> {
    let k = s.len();
    check_subset(s, k, n)?;
    let parts: Vec<usize> = s.iter().map(|&ij| (ij..=n).filter(|x| !s.contains(x)).count()).collect();
    Partition::new(k, n, &parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cofactor expansion along the first row.
    fn cofactor_det(m: &[Vec<Rational>]) -> Rational {
        let n = m.len();
        if n == 0 {
            return Rational::one();
        }
        let mut acc = Rational::zero();
        for c in 0..n {
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
                .collect();
            let t = &m[0][c] * cofactor_det(&minor);
            if c % 2 == 0 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        acc
    }

    fn lcg_matrix(seed: u64, k: usize, n: usize) -> RationalMatrix {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 33) % 13) as i64 - 6
        };
        let rows = (0..k).map(|_| (0..n).map(|_| qf(next(), (next().abs() % 4) + 1)).collect()).collect();
        RationalMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn identity_minor() {
        let a = RationalMatrix::identity_padded(2, 2);
        assert_eq!(maximal_minor(&a, &[1, 2]).unwrap(), q(1));
    }

    #[test]
    fn two_path_minor_expansion() {
        let a = RationalMatrix::from_i64(&[&[1, 2, 0, -5], &[0, 3, 1, 7]]);
        assert_eq!(maximal_minor(&a, &[2, 4]).unwrap(), q(29));
    }

    #[test]
    fn bareiss_matches_cofactor() {
        for seed in 0..20 {
            let a = lcg_matrix(seed, 3, 5);
            for s in k_subsets(5, 3) {
                let sub = a.column_submatrix(&s);
                assert_eq!(determinant(&sub), cofactor_det(&sub), "seed {seed} subset {s:?}");
            }
        }
    }

    #[test]
    fn wrong_subset_size_rejected() {
        let a = RationalMatrix::identity_padded(2, 4);
        assert!(maximal_minor(&a, &[1]).is_err());
        assert!(maximal_minor(&a, &[2, 1]).is_err());
    }

    #[test]
    fn echelon_examples() {
        let a = RationalMatrix::identity_padded(3, 3);
        let (e, p) = echelon_form(&a).unwrap();
        assert_eq!(e, a);
        assert_eq!(p, vec![1, 2, 3]);
        let b = RationalMatrix::from_i64(&[&[0, 1, 2], &[0, 0, 3]]);
        let (e, p) = echelon_form(&b).unwrap();
        assert_eq!(p, vec![2, 3]);
        assert_eq!(e, RationalMatrix::from_i64(&[&[0, 1, 0], &[0, 0, 1]]));
        let c = RationalMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert!(echelon_form(&c).is_err());
    }

    #[test]
    fn echelon_preserves_point_and_pivots_are_lex_min() {
        for seed in 100..120 {
            let a = lcg_matrix(seed, 3, 5);
            if a.rank() < 3 {
                continue;
            }
            let (e, piv) = echelon_form(&a).unwrap();
            let pa = plucker_vector(&a).unwrap();
            let pe = plucker_vector(&e).unwrap();
            assert!(pa.projectively_equal(&pe));
            assert_eq!(pa.support(), pe.support());
            assert_eq!(pa.support().lex_min_base(1), piv);
        }
    }

    #[test]
    fn padded_identity_plucker() {
        let p = plucker_vector(&RationalMatrix::identity_padded(2, 4)).unwrap();
        for (s, v) in p.iter() {
            assert_eq!(*v, if *s == vec![1, 2] { q(1) } else { q(0) });
        }
    }

    #[test]
    fn vandermonde_is_positive() {
        let xs = [qf(1, 2), q(1), q(2), qf(7, 2), q(5)];
        let rows: Vec<Vec<Rational>> =
            (0..3).map(|p| xs.iter().map(|x| num_traits::pow(x.clone(), p)).collect()).collect();
        let a = RationalMatrix::from_rows(rows).unwrap();
        let p = plucker_vector(&a).unwrap();
        assert!(p.iter().all(|(_, v)| v.is_positive()));
        assert!(is_tnn(&a));
    }

    #[test]
    fn relations_hold_brute_force() {
        for seed in 200..206 {
            let a = lcg_matrix(seed, 2, 5);
            if a.rank() == 2 {
                assert!(plucker_vector(&a).unwrap().satisfies_all_relations());
            }
        }
        let a = lcg_matrix(7, 3, 5);
        if a.rank() == 3 {
            assert!(plucker_vector(&a).unwrap().satisfies_all_relations());
        }
    }

    #[test]
    fn matroid_examples() {
        let m = matroid_of(&RationalMatrix::identity_padded(2, 2)).unwrap();
        assert_eq!(m.bases().len(), 1);
        let g = RationalMatrix::from_i64(&[&[1, 1, 1, 1], &[1, 2, 3, 4]]);
        assert_eq!(matroid_of(&g).unwrap(), Matroid::uniform(2, 4));
        // columns 1 and 3 parallel: only Δ_13 vanishes
        let h = RationalMatrix::from_i64(&[&[1, 0, 2, 1], &[1, 1, 2, 3]]);
        let mh = matroid_of(&h).unwrap();
        for s in k_subsets(4, 2) {
            assert_eq!(mh.contains(&s), !maximal_minor(&h, &s).unwrap().is_zero());
        }
        assert!(!mh.contains(&[1, 3]));
    }

    #[test]
    fn tnn_examples() {
        assert!(!is_tnn(&RationalMatrix::from_i64(&[&[1, 0], &[0, -1]])));
        assert!(!is_tnn(&RationalMatrix::from_i64(&[&[1, 1], &[1, 1]])));
    }

    #[test]
    fn lex_min_examples() {
        let m = Matroid::uniform(2, 4);
        assert_eq!(m.lex_min_base(1), vec![1, 2]);
        let m = Matroid::new(2, 4, vec![vec![1, 4], vec![1, 2], vec![1, 3], vec![2, 4], vec![3, 4]]).unwrap();
        // brute force under <_i
        for shift in 1..=4 {
            let order: Vec<usize> = (0..4).map(|t| (shift - 1 + t) % 4 + 1).collect();
            let pos = |x: usize| order.iter().position(|&y| y == x).unwrap();
            let best = m
                .bases()
                .iter()
                .min_by_key(|b| {
                    let mut v: Vec<usize> = b.iter().map(|&x| pos(x)).collect();
                    v.sort();
                    v
                })
                .unwrap();
            assert_eq!(&m.lex_min_base(shift), best);
        }
        assert_eq!(m.lex_min_base(2), vec![2, 4]);
        assert_eq!(m.lex_min_base(4), vec![1, 4]);
    }

    #[test]
    fn lambda_subset_examples() {
        let l = Partition::new(4, 10, &[4, 4, 2, 1]).unwrap();
        assert_eq!(lambda_to_subset(&l), vec![3, 4, 7, 9]);
        assert_eq!(subset_to_lambda(&[3, 4, 7, 9], 10).unwrap(), l);
        assert_eq!(lambda_to_subset(&Partition::empty(3, 7)), vec![5, 6, 7]);
        for l in Partition::all_in_box(3, 6) {
            assert_eq!(subset_to_lambda(&lambda_to_subset(&l), 6).unwrap(), l);
        }
        assert_eq!(Partition::all_in_box(3, 6).len(), 20);
        assert!(Partition::new(2, 4, &[3]).is_err());
    }

    #[test]
    fn exchange_examples() {
        assert!(Matroid::new(2, 4, vec![vec![1, 2]]).unwrap().verify_exchange_axiom());
        assert!(!Matroid::new(2, 4, vec![vec![1, 2], vec![3, 4]]).unwrap().verify_exchange_axiom());
        for seed in 300..310 {
            let a = lcg_matrix(seed, 2, 4);
            if a.rank() == 2 {
                assert!(matroid_of(&a).unwrap().verify_exchange_axiom());
            }
        }
    }

    #[test]
    fn signed_coordinates() {
        let a = RationalMatrix::from_i64(&[&[1, 0, 3], &[0, 1, 5]]);
        let p = plucker_vector(&a).unwrap();
        assert_eq!(p.get_signed(&[2, 1]), -p.get(&[1, 2]));
        assert_eq!(p.get_signed(&[2, 2]), q(0));
    }

    #[test]
    fn matrix_text_roundtrip() {
        let a = RationalMatrix::from_rows(vec![vec![q(1), qf(-3, 4)], vec![q(0), q(2)]]).unwrap();
        let t = a.to_text();
        assert_eq!(RationalMatrix::parse(&t).unwrap(), a);
        assert!(RationalMatrix::parse("2 2\n1 0\n").is_err());
        assert!(RationalMatrix::parse("1 2\n1 x\n").is_err());
    }

    /// Column deletion with sign twists carries minors of `A` (with `A_[k] = Id`)
    /// to all minors of the k×(n−k) block: with `b_ij = (−1)^{i−1} a_{k+1−i, k+j}`,
    /// `Δ_{I,J}(B) = Δ_{([k] \ (k+1−I)) ∪ (J+k)}(A)`.
    #[test]
    fn phi_map_preserves_minors() {
        for seed in 400..405 {
            let (k, n) = (3, 6);
            let mut a = lcg_matrix(seed, k, n);
            for r in 0..k {
                for c in 0..k {
                    a.set(r, c, if r == c { q(1) } else { q(0) });
                }
            }
            let m = n - k;
            let b: Vec<Vec<Rational>> = (1..=k)
                .map(|i| {
                    (1..=m)
                        .map(|j| {
                            let v = a.get(k - i, k + j - 1).clone();
                            if (i - 1) % 2 == 1 {
                                -v
                            } else {
                                v
                            }
                        })
                        .collect()
                })
                .collect();
            let pa = plucker_vector(&a).unwrap();
            for rs in 0..=k {
                for isub in k_subsets(k, rs) {
                    for jsub in k_subsets(m, rs) {
                        let minor: Vec<Vec<Rational>> =
                            isub.iter().map(|&i| jsub.iter().map(|&j| b[i - 1][j - 1].clone()).collect()).collect();
                        let rows_a: Vec<usize> = isub.iter().map(|&i| k + 1 - i).collect();
                        let mut big: Vec<usize> = (1..=k).filter(|x| !rows_a.contains(x)).collect();
                        big.extend(jsub.iter().map(|&j| k + j));
                        assert_eq!(determinant(&minor), pa.get(&big), "I={isub:?} J={jsub:?}");
                    }
                }
            }
        }
    }
}
