//! Decorated permutations, Grassmann necklaces, chord combinatorics and the
//! circular Bruhat order, plus the bijections with Le-diagrams through
//! Bruhat intervals below Grassmannian permutations.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{check_subset, lambda_to_subset, subset_to_lambda, Matroid, Partition, Subset};
use crate::lediagram::LeDiagram;

/// Color of a fixed point: black is a counterclockwise loop, white a
/// clockwise loop.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    Black,
    White,
}

impl Color {
    /// `+1` for black, `−1` for white.
    pub fn sign(self) -> i32 {
        match self {
            Color::Black => 1,
            Color::White => -1,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Color::Black => Color::White,
            Color::White => Color::Black,
        }
    }
}

/// A permutation of `[n]` whose fixed points carry a color.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DecoratedPermutation {
    perm: Vec<usize>,
    colors: Vec<Option<Color>>,
}

/// `x ∈ [a, b]^cyc`: the clockwise run `a, a+1, …, b` modulo `n`.
pub fn in_cyclic_interval(a: usize, b: usize, x: usize) -> bool {
    if a <= b {
        a <= x && x <= b
    } else {
        x >= a || x <= b
    }
}

impl DecoratedPermutation {
    /// `perm` is one-line notation with values in `1..=n`; `colors[i]` must
    /// be set exactly when `i + 1` is a fixed point.
    pub fn new(perm: Vec<usize>, colors: Vec<Option<Color>>) -> Result<Self> {
        let n = perm.len();
        if colors.len() != n {
            return Err(Error::validation("color list length differs from the permutation"));
        }
        let mut seen = vec![false; n + 1];
        for &v in &perm {
            if v == 0 || v > n || seen[v] {
                return Err(Error::validation(format!("{perm:?} is not a permutation of 1..{n}")));
            }
            seen[v] = true;
        }
        for (i, (&v, c)) in perm.iter().zip(&colors).enumerate() {
            if (v == i + 1) != c.is_some() {
                return Err(Error::validation(format!("position {} must be colored iff it is a fixed point", i + 1)));
            }
        }
        Ok(DecoratedPermutation { perm, colors })
    }

    /// Builds from one-line notation, coloring fixed points in `white` white
    /// and all other fixed points black.
    pub fn with_white(perm: Vec<usize>, white: &[usize]) -> Result<Self> {
        let colors = perm
            .iter()
            .enumerate()
            .map(|(i, &v)| (v == i + 1).then(|| if white.contains(&(i + 1)) { Color::White } else { Color::Black }))
            .collect();
        DecoratedPermutation::new(perm, colors)
    }

    /// `π_top: i ↦ i + k (mod n)`; fixed points are black for `k = 0` and
    /// white for `k = n`.
    pub fn top(k: usize, n: usize) -> Result<Self> {
        if k > n {
            return Err(Error::validation(format!("k = {k} exceeds n = {n}")));
        }
        let perm: Vec<usize> = (1..=n).map(|i| (i - 1 + k) % n + 1).collect();
        let white: Vec<usize> = if k == n { (1..=n).collect() } else { Vec::new() };
        DecoratedPermutation::with_white(perm, &white)
    }

    /// The identity with white fixed points on `s` and black elsewhere.
    pub fn bottom(s: &[usize], n: usize) -> Result<Self> {
        check_subset(s, s.len(), n)?;
        DecoratedPermutation::with_white((1..=n).collect(), s)
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// Number of anti-exceedances.
    pub fn k(&self) -> usize {
        self.anti_exceedances(1).len()
    }

    pub fn one_line(&self) -> &[usize] {
        &self.perm
    }

    /// `π(i)`, 1-based.
    pub fn image(&self, i: usize) -> usize {
        self.perm[i - 1]
    }

    /// `π^{-1}(i)`, 1-based.
    pub fn preimage(&self, i: usize) -> usize {
        self.perm.iter().position(|&v| v == i).expect("permutation") + 1
    }

    pub fn color(&self, i: usize) -> Option<Color> {
        self.colors[i - 1]
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        self.perm[i - 1] == i
    }

    /// Shifted anti-exceedance set `I_r`: indices `i` with `i <_r π^{-1}(i)`
    /// together with white fixed points, sorted increasingly.
    pub fn anti_exceedances(&self, r: usize) -> Subset {
        let n = self.n();
        let rank = |x: usize| (x + n - r) % n;
        (1..=n)
            .filter(|&i| {
                let p = self.preimage(i);
                if p == i {
                    self.color(i) == Some(Color::White)
                } else {
                    rank(i) < rank(p)
                }
            })
            .collect()
    }

    /// All decorated permutations of size `n`.
    pub fn all(n: usize) -> Vec<DecoratedPermutation> {
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (1..=n).collect();
        loop {
            let fixed: Vec<usize> = (1..=n).filter(|&i| perm[i - 1] == i).collect();
            for mask in 0u32..(1 << fixed.len()) {
                let white: Vec<usize> =
                    fixed.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &i)| i).collect();
                out.push(DecoratedPermutation::with_white(perm.clone(), &white).expect("valid"));
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        out
    }

    /// All decorated permutations of type `(k, n)`.
    pub fn all_of_type(k: usize, n: usize) -> Vec<DecoratedPermutation> {
        DecoratedPermutation::all(n).into_iter().filter(|p| p.k() == k).collect()
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for DecoratedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .perm
            .iter()
            .zip(&self.colors)
            .map(|(v, c)| match c {
                Some(Color::Black) => format!("{v}B"),
                Some(Color::White) => format!("{v}W"),
                None => v.to_string(),
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for DecoratedPermutation {
    type Err = Error;

    /// One-line notation with `B`/`W` suffixes on fixed points, e.g.
    /// `"3 1 5 4B 2 6W"`. An unmarked fixed point is an error.
    fn from_str(s: &str) -> Result<Self> {
        let mut perm = Vec::new();
        let mut colors = Vec::new();
        for tok in s.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let (num, col) = match tok.chars().last() {
                Some('B' | 'b') => (&tok[..tok.len() - 1], Some(Color::Black)),
                Some('W' | 'w') => (&tok[..tok.len() - 1], Some(Color::White)),
                _ => (tok, None),
            };
            perm.push(num.parse::<usize>().map_err(|_| Error::parse(1, format!("bad entry {tok:?}")))?);
            colors.push(col);
        }
        DecoratedPermutation::new(perm, colors)
    }
}

/// Lexicographic successor of a permutation in place; `false` at the last.
pub fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// A cyclic sequence `I_1, …, I_n` of k-subsets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GrassmannNecklace {
    n: usize,
    k: usize,
    sets: Vec<Subset>,
}

impl GrassmannNecklace {
    /// Validates the necklace rule: `I_{i+1} = I_i` if `i ∉ I_i`, and
    /// `I_{i+1} = (I_i ∖ {i}) ∪ {j}` otherwise.
    pub fn new(n: usize, sets: Vec<Subset>) -> Result<Self> {
        if sets.len() != n {
            return Err(Error::validation(format!("necklace needs {n} subsets, got {}", sets.len())));
        }
        let k = sets.first().map_or(0, Vec::len);
        for s in &sets {
            check_subset(s, k, n)?;
        }
        for i in 1..=n {
            let cur = &sets[i - 1];
            let next = &sets[i % n];
            let ok = if cur.contains(&i) {
                let rest: Vec<usize> = cur.iter().copied().filter(|&x| x != i).collect();
                rest.iter().all(|x| next.contains(x))
            } else {
                cur == next
            };
            if !ok {
                return Err(Error::validation(format!(
                    "I_{} = {cur:?} and I_{} = {next:?} break the necklace rule",
                    i,
                    i % n + 1
                )));
            }
        }
        Ok(GrassmannNecklace { n, k, sets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `I_i`, 1-based.
    pub fn get(&self, i: usize) -> &Subset {
        &self.sets[i - 1]
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    /// Text format: `n` lines of k integers (an empty line when k = 0),
    /// preceded by a header line `k n`.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.k, self.n);
        for set in &self.sets {
            let v: Vec<String> = set.iter().map(|x| x.to_string()).collect();
            s.push_str(&v.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim_start().starts_with('#'));
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header \"k n\""))?;
        let nums: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse(hl + 1, format!("bad integer {t:?}"))))
            .collect::<Result<_>>()?;
        let [k, n] = nums[..] else {
            return Err(Error::parse(hl + 1, "header must be \"k n\""));
        };
        let mut sets = Vec::with_capacity(n);
        for (ln, l) in lines.take(n) {
            let mut s: Vec<usize> = l
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::parse(ln + 1, format!("bad integer {t:?}"))))
                .collect::<Result<_>>()?;
            s.sort_unstable();
            sets.push(s);
        }
        while k == 0 && sets.len() < n {
            sets.push(Vec::new());
        }
        let neck = GrassmannNecklace::new(n, sets)?;
        if neck.k != k {
            return Err(Error::validation(format!("header says k = {k}, subsets have size {}", neck.k)));
        }
        Ok(neck)
    }
}

/// `I_r = ` the shifted anti-exceedance set for every `r`.
pub fn necklace_from_perm(p: &DecoratedPermutation) -> GrassmannNecklace {
    let n = p.n();
    let sets = (1..=n).map(|r| p.anti_exceedances(r)).collect();
    GrassmannNecklace { n, k: p.k(), sets }
}

/// Inverse of [`necklace_from_perm`].
pub fn perm_from_necklace(neck: &GrassmannNecklace) -> DecoratedPermutation {
    let n = neck.n;
    let mut perm = vec![0; n];
    let mut colors = vec![None; n];
    for i in 1..=n {
        let cur = &neck.sets[i - 1];
        let next = &neck.sets[i % n];
        match next.iter().find(|x| !cur.contains(x)) {
            Some(&j) => perm[i - 1] = j,
            None => {
                perm[i - 1] = i;
                colors[i - 1] = Some(if cur.contains(&i) { Color::White } else { Color::Black });
            }
        }
    }
    DecoratedPermutation::new(perm, colors).expect("a valid necklace yields a decorated permutation")
}

/// `I_i = ` the lexicographically minimal base under `<_i`.
pub fn necklace_from_matroid(m: &Matroid) -> Result<GrassmannNecklace> {
    if !m.verify_exchange_axiom() {
        return Err(Error::precondition("bases fail the exchange axiom"));
    }
    let sets = (1..=m.n()).map(|i| m.lex_min_base(i)).collect();
    GrassmannNecklace::new(m.n(), sets)
}

/// Mutual position of two chords (or loops).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChordRelation {
    Crossing,
    Alignment,
    Misalignment,
    Other,
}

/// Classification of an unordered pair together with the ordered pair
/// `(i, j)` realizing it and whether it is simple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordPairClass {
    pub relation: ChordRelation,
    pub simple: bool,
    pub oriented: (usize, usize),
}

/// `(i, j)` is a crossing: `π(j) ∈ [i, π(i)]` and `j ∈ [π(i), i]`.
pub fn is_crossing(p: &DecoratedPermutation, i: usize, j: usize) -> bool {
    let (pi, pj) = (p.image(i), p.image(j));
    i != j && pi != i && pj != j && in_cyclic_interval(i, pi, pj) && in_cyclic_interval(pi, i, j)
}

/// `(i, j)` is an alignment: `π(i) ∈ [i, π(j)]` and `j ∈ [π(j), i]`, a loop
/// at `i` must be black and a loop at `j` white.
pub fn is_alignment(p: &DecoratedPermutation, i: usize, j: usize) -> bool {
    let (pi, pj) = (p.image(i), p.image(j));
    if i == j || (pi == i && p.color(i) != Some(Color::Black)) || (pj == j && p.color(j) != Some(Color::White)) {
        return false;
    }
    in_cyclic_interval(i, pj, pi) && in_cyclic_interval(pj, i, j)
}

/// No other chord `l ↦ π(l)` runs from `[j, i]` to `[from, to]`.
fn no_chord_between(p: &DecoratedPermutation, i: usize, j: usize, from: usize, to: usize) -> bool {
    (1..=p.n())
        .filter(|&l| l != i && l != j)
        .all(|l| !(in_cyclic_interval(j, i, l) && in_cyclic_interval(from, to, p.image(l))))
}

pub fn is_simple_crossing(p: &DecoratedPermutation, i: usize, j: usize) -> bool {
    is_crossing(p, i, j) && no_chord_between(p, i, j, p.image(j), p.image(i))
}

pub fn is_simple_alignment(p: &DecoratedPermutation, i: usize, j: usize) -> bool {
    is_alignment(p, i, j) && no_chord_between(p, i, j, p.image(i), p.image(j))
}

pub fn classify_pair(p: &DecoratedPermutation, i: usize, j: usize) -> Result<ChordPairClass> {
    let n = p.n();
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::validation(format!("need two distinct indices in 1..={n}, got {i} and {j}")));
    }
    for (a, b) in [(i, j), (j, i)] {
        if is_crossing(p, a, b) {
            return Ok(ChordPairClass {
                relation: ChordRelation::Crossing,
                simple: is_simple_crossing(p, a, b),
                oriented: (a, b),
            });
        }
        if is_alignment(p, a, b) {
            return Ok(ChordPairClass {
                relation: ChordRelation::Alignment,
                simple: is_simple_alignment(p, a, b),
                oriented: (a, b),
            });
        }
    }
    let (pi, pj) = (p.image(i), p.image(j));
    let distinct = BTreeSet::from([i, j, pi, pj]).len() == 4;
    let relation = if distinct { ChordRelation::Misalignment } else { ChordRelation::Other };
    Ok(ChordPairClass { relation, simple: false, oriented: (i, j) })
}

/// `A(π)`: the number of pairs forming an alignment.
pub fn alignment_number(p: &DecoratedPermutation) -> usize {
    let n = p.n();
    (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).filter(|&(i, j)| is_alignment(p, i, j)).count()
}

/// `k(n−k) − A(π)`, the dimension of the cell.
pub fn rank(p: &DecoratedPermutation) -> usize {
    let (k, n) = (p.k(), p.n());
    k * (n - k) - alignment_number(p)
}

/// `r_ab = |I_a ∩ [a, b]^cyc|`.
pub fn r_ab(neck: &GrassmannNecklace, a: usize, b: usize) -> usize {
    neck.get(a).iter().filter(|&&x| in_cyclic_interval(a, b, x)).count()
}

/// Circular Bruhat order: `π ≤ σ` iff `r_ab(π) ≤ r_ab(σ)` for all `a, b`.
pub fn circular_leq(p: &DecoratedPermutation, s: &DecoratedPermutation) -> Result<bool> {
    if p.n() != s.n() || p.k() != s.k() {
        return Err(Error::validation(format!("types differ: ({}, {}) vs ({}, {})", p.k(), p.n(), s.k(), s.n())));
    }
    let (np, ns) = (necklace_from_perm(p), necklace_from_perm(s));
    let n = p.n();
    Ok((1..=n).all(|a| (1..=n).all(|b| r_ab(&np, a, b) <= r_ab(&ns, a, b))))
}

/// Replaces the crossing `(i, j)` by the alignment `i ↦ σ(j)`, `j ↦ σ(i)`;
/// a new fixed point at `i` is black and one at `j` is white.
pub fn uncross(s: &DecoratedPermutation, i: usize, j: usize) -> DecoratedPermutation {
    let mut perm = s.perm.clone();
    let mut colors = s.colors.clone();
    perm[i - 1] = s.image(j);
    perm[j - 1] = s.image(i);
    colors[i - 1] = (perm[i - 1] == i).then_some(Color::Black);
    colors[j - 1] = (perm[j - 1] == j).then_some(Color::White);
    DecoratedPermutation::new(perm, colors).expect("swapping two images keeps a permutation")
}

/// Elements covered by `σ`: replace a simple crossing `(i, j)` by the
/// alignment `i ↦ σ(j)`, `j ↦ σ(i)`; a new fixed point at `i` is black and
/// one at `j` is white.
pub fn covers(s: &DecoratedPermutation) -> Vec<DecoratedPermutation> {
    let n = s.n();
    let mut out = BTreeSet::new();
    for i in 1..=n {
        for j in 1..=n {
            if !is_simple_crossing(s, i, j) {
                continue;
            }
            out.insert(uncross(s, i, j));
        }
    }
    out.into_iter().collect()
}

/// Number of inversions.
pub fn length(w: &[usize]) -> usize {
    (0..w.len()).map(|a| (a + 1..w.len()).filter(|&b| w[a] > w[b]).count()).sum()
}

pub fn inverse(w: &[usize]) -> Vec<usize> {
    let mut v = vec![0; w.len()];
    for (i, &x) in w.iter().enumerate() {
        v[x - 1] = i + 1;
    }
    v
}

/// `w_λ = (ĩ_k, …, ĩ_1, j̃_{n−k}, …, j̃_1)` with `x̃ = n + 1 − x`.
pub fn w_lambda(lambda: &Partition) -> Vec<usize> {
    let n = lambda.n();
    let i = lambda_to_subset(lambda);
    let j: Vec<usize> = (1..=n).filter(|x| !i.contains(x)).collect();
    i.iter().rev().chain(j.iter().rev()).map(|&x| n + 1 - x).collect()
}

/// `u ≤ w_λ` iff `u_m ≤ w_m` for `m ≤ k` and `u_m ≥ w_m` for `m > k`.
pub fn bruhat_leq_grassmannian(u: &[usize], lambda: &Partition) -> Result<bool> {
    check_perm(u, lambda.n())?;
    let w = w_lambda(lambda);
    let k = lambda.k();
    Ok((0..u.len()).all(|m| if m < k { u[m] <= w[m] } else { u[m] >= w[m] }))
}

fn check_perm(u: &[usize], n: usize) -> Result<()> {
    let mut sorted = u.to_vec();
    sorted.sort_unstable();
    if sorted != (1..=n).collect::<Vec<_>>() {
        return Err(Error::validation(format!("{u:?} is not a permutation of 1..{n}")));
    }
    Ok(())
}

/// Boxes of λ in row-major order with their wiring-diagram heights: the
/// crossing at box `(i, j)` swaps positions `k + j − i` and `k + j − i + 1`.
fn wiring_boxes(lambda: &Partition) -> Vec<((usize, usize), usize)> {
    let k = lambda.k();
    (1..=k).flat_map(|i| (1..=lambda.parts()[i - 1]).map(move |j| ((i, j), k + j - i))).collect()
}

/// The pipe dream of `D`: the wiring diagram of `w_λ` with the crossing at
/// every 1-box replaced by an uncrossing. `u(i)` is the right end of the wire
/// starting at `i`.
pub fn u_from_le(d: &LeDiagram) -> Vec<usize> {
    let n = d.n();
    let mut pos: Vec<usize> = (1..=n).collect();
    for ((i, j), m) in wiring_boxes(d.shape()) {
        if !d.get(i, j) {
            pos.swap(m - 1, m);
        }
    }
    inverse(&pos)
}

/// The unique Le-diagram `D` of shape λ with `u_D = u`: scanning crossings in
/// order, keep a crossing exactly when it shortens what remains to be built.
pub fn le_from_u(u: &[usize], lambda: &Partition) -> Result<LeDiagram> {
    if !bruhat_leq_grassmannian(u, lambda)? {
        return Err(Error::precondition(format!("{u:?} is not below w_λ = {:?}", w_lambda(lambda))));
    }
    let mut rest = inverse(u);
    let mut fill: Vec<Vec<bool>> = lambda.parts().iter().map(|&p| vec![true; p]).collect();
    for ((i, j), m) in wiring_boxes(lambda) {
        let swapped: Vec<usize> = rest
            .iter()
            .map(|&x| {
                if x == m {
                    m + 1
                } else if x == m + 1 {
                    m
                } else {
                    x
                }
            })
            .collect();
        if length(&swapped) < length(&rest) {
            rest = swapped;
            fill[i - 1][j - 1] = false;
        }
    }
    if rest.iter().enumerate().any(|(a, &x)| x != a + 1) {
        return Err(Error::internal("distinguished subword did not reach the identity"));
    }
    LeDiagram::new(lambda.clone(), fill)
}

/// `π^{-1}(i_r) = ũ_{k+1−r}` and `π^{-1}(j_r) = ũ_{n+1−r}`, fixed points
/// white on `I(λ)` and black off it.
pub fn perm_from_u(u: &[usize], lambda: &Partition) -> Result<DecoratedPermutation> {
    let (k, n) = (lambda.k(), lambda.n());
    check_perm(u, n)?;
    let i = lambda_to_subset(lambda);
    let j: Vec<usize> = (1..=n).filter(|x| !i.contains(x)).collect();
    let mut pre = vec![0; n];
    for r in 1..=k {
        pre[i[r - 1] - 1] = n + 1 - u[k - r];
    }
    for r in 1..=n - k {
        pre[j[r - 1] - 1] = n + 1 - u[n - r];
    }
    DecoratedPermutation::with_white(inverse(&pre), &i)
}

/// Inverse of [`perm_from_u`]: the shape from the anti-exceedance set and
/// `u` read off the formula.
pub fn u_from_perm(p: &DecoratedPermutation) -> Result<(Partition, Vec<usize>)> {
    let n = p.n();
    let i = p.anti_exceedances(1);
    let k = i.len();
    let lambda = subset_to_lambda(&i, n)?;
    let j: Vec<usize> = (1..=n).filter(|x| !i.contains(x)).collect();
    let mut u = vec![0; n];
    for r in 1..=k {
        u[k - r] = n + 1 - p.preimage(i[r - 1]);
    }
    for r in 1..=n - k {
        u[n - r] = n + 1 - p.preimage(j[r - 1]);
    }
    Ok((lambda, u))
}

pub fn perm_from_le(d: &LeDiagram) -> DecoratedPermutation {
    perm_from_u(&u_from_le(d), d.shape()).expect("u_D is a permutation")
}

pub fn le_from_perm(p: &DecoratedPermutation) -> Result<LeDiagram> {
    let (lambda, u) = u_from_perm(p)?;
    le_from_u(&u, &lambda)
}
