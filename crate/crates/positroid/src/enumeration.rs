//! Cell counts: Eulerian numbers, `N_{kn}`, the rank generating polynomials
//! `N_{kn}(q)`, the totals `N_n`, and Bruhat-interval counts.
//!
//! Eulerian numbers follow `A_{0,0} = 1` and `A_{k,0} = 0` for `k ≥ 1`, the
//! boundary values that make `N_{kn} = Σ_r C(n,r) A_{k,n−r}` give
//! `N_{0,n} = 1`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::Partition;
use crate::lediagram::{le_diagram_polynomial, LeDiagram};
use crate::positroid::{bruhat_leq_grassmannian, next_permutation, DecoratedPermutation};

/// Largest `n` accepted by the factorial enumerations.
pub const MAX_FACTORIAL_N: usize = 9;

fn binomial(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    (0..r).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

fn eulerian_table(n: usize) -> Vec<Vec<BigUint>> {
    // row m holds A_{0,m}, …, A_{m,m}
    let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for m in 1..=n {
        let prev = &rows[m - 1];
        let at = |k: usize| prev.get(k).cloned().unwrap_or_default();
        let row =
            (0..=m)
                .map(|k| {
                    if k == 0 {
                        BigUint::zero()
                    } else {
                        at(k) * BigUint::from(k) + at(k - 1) * BigUint::from(m - k + 1)
                    }
                })
                .collect();
        rows.push(row);
    }
    rows
}

/// `A_{k,n}`: permutations of `[n]` with `k − 1` descents.
pub fn eulerian(k: usize, n: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    eulerian_table(n)[n][k].clone()
}

/// `N_{kn} = Σ_r C(n,r) A_{k,n−r}`, the number of cells of `Gr_{kn}^tnn`.
pub fn count_cells(k: usize, n: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let table = eulerian_table(n);
    (0..=n)
        .map(|r| {
            let m = n - r;
            binomial(n, r) * table[m].get(k).cloned().unwrap_or_default()
        })
        .sum()
}

/// `N_{kn}(q) = Σ_D q^{|D|}` over Le-diagrams in the `k × (n−k)` box, as
/// coefficients of `q^0, q^1, …`.
pub fn cell_poly(k: usize, n: usize) -> Vec<BigUint> {
    if k > n {
        return vec![BigUint::zero()];
    }
    let mut acc: Vec<BigUint> = vec![BigUint::zero(); k * (n - k) + 1];
    for lam in Partition::all_in_box(k, n) {
        for (e, c) in le_diagram_polynomial(&lam).into_iter().enumerate() {
            acc[e] += c;
        }
    }
    acc
}

/// `N_n` from `N_n = n·N_{n−1} + 1`, `N_0 = 1`.
pub fn total_cells(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, m| acc * BigUint::from(m) + BigUint::one())
}

/// Laurent polynomials in `q` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Laurent(BTreeMap<i64, BigInt>);

impl Laurent {
    fn monomial(c: BigInt, e: i64) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(e, c);
        }
        Laurent(m)
    }

    fn one() -> Self {
        Laurent::monomial(BigInt::one(), 0)
    }

    /// `[m]_q = (1 − q^m)/(1 − q)`, also for `m ≤ 0`.
    fn q_integer(m: i64) -> Self {
        let mut out = Laurent::default();
        if m > 0 {
            for e in 0..m {
                out.add_term(e, BigInt::one());
            }
        } else {
            for e in m..0 {
                out.add_term(e, -BigInt::one());
            }
        }
        out
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        let slot = self.0.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&e);
        }
    }

    fn add(&mut self, other: &Laurent, sign: i32) {
        for (&e, c) in &other.0 {
            self.add_term(e, if sign < 0 { -c.clone() } else { c.clone() });
        }
    }

    fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::default();
        for (&a, x) in &self.0 {
            for (&b, y) in &other.0 {
                out.add_term(a + b, x * y);
            }
        }
        out
    }

    fn pow(&self, e: usize) -> Laurent {
        (0..e).fold(Laurent::one(), |acc, _| acc.mul(self))
    }
}

/// Closed formula for `N_{kn}(q)`:
/// `Σ_{i=0}^{k−1} C(n,i) q^{−(k−i)²} ([i−k]^i [k−i+1]^{n−i} − [i−k+1]^i [k−i]^{n−i})`,
/// with `N_{0n}(q) = 1`. Returns `None` if the sum is not a polynomial.
pub fn williams_poly(k: usize, n: usize) -> Option<Vec<BigUint>> {
    if k > n {
        return None;
    }
    if k == 0 {
        return Some(vec![BigUint::one()]);
    }
    let ki = k as i64;
    let mut total = Laurent::default();
    for i in 0..k {
        let ii = i as i64;
        let lead = Laurent::monomial(BigInt::from(binomial(n, i)), -(ki - ii) * (ki - ii));
        let a = Laurent::q_integer(ii - ki).pow(i).mul(&Laurent::q_integer(ki - ii + 1).pow(n - i));
        let b = Laurent::q_integer(ii - ki + 1).pow(i).mul(&Laurent::q_integer(ki - ii).pow(n - i));
        let mut diff = a;
        diff.add(&b, -1);
        total.add(&lead.mul(&diff), 1);
    }
    let deg = total.0.keys().next_back().copied().unwrap_or(0);
    if total.0.keys().next().is_some_and(|&e| e < 0) {
        return None;
    }
    (0..=deg).map(|e| total.0.get(&e).cloned().unwrap_or_default().to_biguint()).collect()
}

/// Counts of decorated permutations of size `n` by type, by direct
/// enumeration.
pub fn count_decorated_permutations(n: usize) -> Result<Vec<BigUint>> {
    guard(n)?;
    let mut counts = vec![BigUint::zero(); n + 1];
    for p in DecoratedPermutation::all(n) {
        counts[p.k()] += 1u32;
    }
    Ok(counts)
}

/// `N_{kn}` as the number of Le-diagrams in the `k × (n−k)` box.
pub fn count_le_diagrams(k: usize, n: usize) -> BigUint {
    cell_poly(k, n).into_iter().sum()
}

fn guard(n: usize) -> Result<()> {
    if n > MAX_FACTORIAL_N {
        return Err(Error::validation(format!(
            "n = {n} is too large for factorial enumeration (limit {MAX_FACTORIAL_N})"
        )));
    }
    Ok(())
}

/// `|{u ∈ S_n : u ≤ w_λ}|` by brute force over `S_n`.
pub fn bruhat_interval_count(lambda: &Partition) -> Result<BigUint> {
    let n = lambda.n();
    guard(n)?;
    let mut u: Vec<usize> = (1..=n).collect();
    let mut count = BigUint::zero();
    loop {
        if bruhat_leq_grassmannian(&u, lambda)? {
            count += 1u32;
        }
        if !next_permutation(&mut u) {
            break;
        }
    }
    Ok(count)
}

/// The staircase shape `(n, n−1, …, 1)` inside the `n × n` box.
pub fn staircase(n: usize) -> Partition {
    let parts: Vec<usize> = (1..=n).rev().collect();
    Partition::new(n, 2 * n, &parts).expect("staircase fits its box")
}

/// Le-diagrams of the staircase `(n, n−1, …, 1)` with 0 in every corner box.
pub fn staircase_check(n: usize) -> Result<BigUint> {
    guard(n)?;
    let parts: Vec<usize> = (1..=n).rev().collect();
    let pending = vec![true; n];
    Ok(count_zero_corners(&parts, &pending, &mut BTreeMap::new()))
}

/// Counts Le fillings of `parts` whose rows flagged `pending` have a 0 in
/// their last box, peeling the last column as in the Le-diagram enumeration.
fn count_zero_corners(
    parts: &[usize],
    pending: &[bool],
    memo: &mut BTreeMap<(Vec<usize>, Vec<bool>), BigUint>,
) -> BigUint {
    let width = parts.first().copied().unwrap_or(0);
    if width == 0 {
        return BigUint::one();
    }
    let key = (parts.to_vec(), pending.to_vec());
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let d = parts.iter().take_while(|&&p| p == width).count();
    let mut total = BigUint::zero();
    for mask in 0u32..(1 << d) {
        if (0..d).any(|r| pending[r] && mask >> r & 1 == 1) {
            continue;
        }
        let first = (0..d).find(|&r| mask >> r & 1 == 1);
        let blocked = |r: usize| first.is_some_and(|f| r > f && r < d && mask >> r & 1 == 0);
        let keep: Vec<usize> = (0..parts.len()).filter(|&r| !blocked(r)).collect();
        let sub_parts: Vec<usize> = keep.iter().map(|&r| if r < d { parts[r] - 1 } else { parts[r] }).collect();
        let sub_pending: Vec<bool> = keep.iter().map(|&r| r >= d && pending[r]).collect();
        total += count_zero_corners(&sub_parts, &sub_pending, memo);
    }
    memo.insert(key, total.clone());
    total
}

/// The permutation attached to a corner-free staircase diagram: the product
/// over columns `c` of the cycles `(n+1−c, a_1, a_2, …)` where
/// `a_1 > a_2 > …` are the rows of the 1s in column `c`.
pub fn staircase_permutation(d: &LeDiagram) -> Result<Vec<usize>> {
    let n = d.k();
    if d.shape() != &staircase(n) {
        return Err(Error::validation("diagram does not have staircase shape"));
    }
    let mut w: Vec<usize> = (1..=n).collect();
    for c in (1..=n).rev() {
        let top = n + 1 - c;
        if d.get(top, c) {
            return Err(Error::validation(format!("corner box ({top}, {c}) holds a 1")));
        }
        let mut cycle = vec![top];
        cycle.extend((1..top).rev().filter(|&r| d.get(r, c)));
        // w ← cycle ∘ w
        let mut map: Vec<usize> = (1..=n).collect();
        for (a, &x) in cycle.iter().enumerate() {
            map[x - 1] = cycle[(a + 1) % cycle.len()];
        }
        w = w.iter().map(|&x| map[x - 1]).collect();
    }
    Ok(w)
}

/// `N_{kn}` for `0 ≤ k ≤ n ≤ max_n`, each row computed three ways.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountTable {
    /// `rows[n][k] = N_{kn}` from the Eulerian formula.
    pub formula: Vec<Vec<BigUint>>,
    /// Direct decorated-permutation counts, present when `n ≤ 9`.
    pub decorated: Vec<Option<Vec<BigUint>>>,
    /// Le-diagram counts.
    pub le: Vec<Vec<BigUint>>,
    /// `N_{kn}(q)` coefficient lists, filled when requested.
    pub polys: Option<Vec<Vec<Vec<BigUint>>>>,
}

impl CountTable {
    pub fn compute(max_n: usize, with_polys: bool) -> Self {
        let formula = (0..=max_n).map(|n| (0..=n).map(|k| count_cells(k, n)).collect()).collect();
        let decorated = (0..=max_n).map(|n| count_decorated_permutations(n).ok()).collect();
        let polys: Vec<Vec<Vec<BigUint>>> = (0..=max_n).map(|n| (0..=n).map(|k| cell_poly(k, n)).collect()).collect();
        let le = polys.iter().map(|row| row.iter().map(|p| p.iter().sum()).collect()).collect();
        CountTable { formula, decorated, le, polys: with_polys.then_some(polys) }
    }

    /// Rows on which all available methods agree.
    pub fn consistent(&self) -> bool {
        self.formula
            .iter()
            .zip(&self.le)
            .zip(&self.decorated)
            .all(|((f, l), d)| f == l && d.as_ref().is_none_or(|d| d == f))
    }

    /// One line per `n`: the counts `N_{0n} … N_{nn}` separated by spaces.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for row in &self.formula {
            let v: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            let _ = writeln!(s, "{}", v.join(" "));
        }
        s
    }

    /// `k,n,count` lines, or `k,n,c0;c1;…` when polynomials are present.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        match &self.polys {
            Some(polys) => {
                s.push_str("k,n,coefficients\n");
                for (n, row) in polys.iter().enumerate() {
                    for (k, p) in row.iter().enumerate() {
                        let v: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                        let _ = writeln!(s, "{k},{n},{}", v.join(";"));
                    }
                }
            }
            None => {
                s.push_str("k,n,count\n");
                for (n, row) in self.formula.iter().enumerate() {
                    for (k, c) in row.iter().enumerate() {
                        let _ = writeln!(s, "{k},{n},{c}");
                    }
                }
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lediagram::enumerate_le_diagrams;
    use crate::positroid::rank;
    use std::collections::BTreeSet;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    fn factorial(n: usize) -> BigUint {
        (1..=n).map(BigUint::from).product()
    }

    fn descents_oracle(n: usize) -> Vec<u64> {
        let mut counts = vec![0u64; n + 1];
        let mut p: Vec<usize> = (1..=n).collect();
        loop {
            let des = p.windows(2).filter(|w| w[0] > w[1]).count();
            counts[des + 1] += 1;
            if !next_permutation(&mut p) {
                break;
            }
        }
        counts
    }

    #[test]
    fn eulerian_numbers() {
        assert_eq!(eulerian(0, 0), BigUint::one());
        for n in 1..=8 {
            assert_eq!(eulerian(0, n), BigUint::zero());
            assert_eq!(eulerian(1, n), BigUint::one());
            assert_eq!((0..=n).map(|k| eulerian(k, n)).sum::<BigUint>(), factorial(n));
        }
        for n in 1..=7 {
            let oracle = descents_oracle(n);
            for (k, &o) in oracle.iter().enumerate().take(n + 1) {
                assert_eq!(eulerian(k, n), BigUint::from(o), "A_{k},{n}");
            }
        }
    }

    #[test]
    fn cell_count_table() {
        let table: [&[u64]; 7] = [
            &[1],
            &[1, 1],
            &[1, 3, 1],
            &[1, 7, 7, 1],
            &[1, 15, 33, 15, 1],
            &[1, 31, 131, 131, 31, 1],
            &[1, 63, 473, 883, 473, 63, 1],
        ];
        for (n, row) in table.iter().enumerate() {
            let computed: Vec<BigUint> = (0..=n).map(|k| count_cells(k, n)).collect();
            assert_eq!(computed, big(row));
        }
        let t = CountTable::compute(7, false);
        assert!(t.consistent());
        assert!(t.decorated.iter().all(Option::is_some));
        assert_eq!(t.to_text().lines().nth(4), Some("1 15 33 15 1"));
    }

    #[test]
    fn totals() {
        assert_eq!(total_cells(0), BigUint::from(1u32));
        assert_eq!(total_cells(1), BigUint::from(2u32));
        assert_eq!(total_cells(2), BigUint::from(5u32));
        assert_eq!(total_cells(3), BigUint::from(16u32));
        for n in 0..=9 {
            assert_eq!((0..=n).map(|k| count_cells(k, n)).sum::<BigUint>(), total_cells(n));
        }
    }

    #[test]
    fn cell_polynomials() {
        assert_eq!(cell_poly(1, 2), big(&[2, 1]));
        for n in 0..=6 {
            for k in 0..=n {
                let p = cell_poly(k, n);
                assert_eq!(p.len() - 1, k * (n - k));
                assert!(!p.last().unwrap().is_zero());
                assert_eq!(p.iter().sum::<BigUint>(), count_cells(k, n));
                assert_eq!(williams_poly(k, n), Some(p.clone()), "({k},{n})");
            }
        }
        for n in 0..=5 {
            let mut by_rank = vec![vec![BigUint::zero(); n * n + 1]; n + 1];
            for p in DecoratedPermutation::all(n) {
                by_rank[p.k()][rank(&p)] += 1u32;
            }
            for (k, mut r) in by_rank.into_iter().enumerate() {
                r.truncate(k * (n - k) + 1);
                assert_eq!(r, cell_poly(k, n));
            }
        }
    }

    #[test]
    fn bruhat_interval_counts() {
        for lam in Partition::all_in_box(2, 5) {
            let le = enumerate_le_diagrams(&lam).len();
            assert_eq!(bruhat_interval_count(&lam).unwrap(), BigUint::from(le), "shape {lam}");
        }
        assert_eq!(bruhat_interval_count(&Partition::empty(3, 7)).unwrap(), BigUint::one());
        assert!(bruhat_interval_count(&Partition::empty(5, 10)).is_err());
    }

    #[test]
    fn staircase_counts() {
        assert_eq!(staircase_check(3).unwrap(), BigUint::from(6u32));
        for n in 0..=9 {
            assert_eq!(staircase_check(n).unwrap(), factorial(n));
        }
        assert!(staircase_check(10).is_err());
        for n in 1..=4 {
            let corner_free: Vec<LeDiagram> = enumerate_le_diagrams(&staircase(n))
                .into_iter()
                .filter(|d| (1..=n).all(|i| !d.get(i, n + 1 - i)))
                .collect();
            assert_eq!(BigUint::from(corner_free.len()), staircase_check(n).unwrap());
            let images: BTreeSet<Vec<usize>> = corner_free.iter().map(|d| staircase_permutation(d).unwrap()).collect();
            assert_eq!(images.len(), corner_free.len(), "cycle products are distinct for n = {n}");
        }
    }

    #[test]
    fn csv_output() {
        let t = CountTable::compute(2, false);
        assert_eq!(t.to_csv(), "k,n,count\n0,0,1\n0,1,1\n1,1,1\n0,2,1\n1,2,3\n2,2,1\n");
        let t = CountTable::compute(2, true);
        assert!(t.to_csv().contains("1,2,2;1\n"));
    }
}
