//! The invariant suite behind `positroid selfcheck` and the acceptance test.
//!
//! Every check is exact. Randomized checks draw from a ChaCha8 generator
//! seeded by [`Config::seed`], so a run is reproducible.

use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::enumeration::{bruhat_interval_count, cell_poly, staircase_check, CountTable};
use crate::error::{Error, Result};
use crate::exactmath::{k_subsets, maximal_minor, q, qf, Partition, Rational};
use crate::lediagram::{
    all_le_diagrams, enumerate_le_diagrams, gamma_network, invert_measurement, meas_d, random_le_tableau,
};
use crate::network::{
    boundary_measurement, boundary_measurement_matrix, boundary_measurements_in, random_network, two_vertex_cycle,
    walk_series, RandomNetworkParams, Series,
};
use crate::plabic::{
    add_gadget, apply_move, apply_reduction, first_perfect_orientation, from_decorated_permutation, from_le_diagram,
    matroid, measure_plabic, measure_plabic_with, move_sites, perfect_orientations, random_face_weights,
    random_network_of, random_reduced_network, reduction_sites, trips, Gadget, Move, PlabicNetwork, Reduction,
};
use crate::positroid::{
    alignment_number, circular_leq, covers, le_from_perm, necklace_from_matroid, necklace_from_perm, perm_from_le,
    perm_from_necklace, perm_from_u, rank, u_from_le, DecoratedPermutation,
};

/// `N_{kn}` for `0 ≤ k ≤ n ≤ 6`.
pub const CELL_COUNTS: [&[u64]; 7] = [
    &[1],
    &[1, 1],
    &[1, 3, 1],
    &[1, 7, 7, 1],
    &[1, 15, 33, 15, 1],
    &[1, 31, 131, 131, 31, 1],
    &[1, 63, 473, 883, 473, 63, 1],
];

/// Sizes and sample counts of the suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Config {
    /// Largest `n` of the count table.
    pub count_n: usize,
    /// Random Le-tableaux for the inverse round trip.
    pub inverse_samples: usize,
    /// Random networks for nonnegativity, and their largest `n`.
    pub network_samples: usize,
    pub network_max_n: usize,
    /// Random plabic networks for move invariance and orientation
    /// independence, and their largest `n`.
    pub move_samples: usize,
    pub orientation_samples: usize,
    pub plabic_max_n: usize,
    /// Largest `n` of the exhaustive bijection check.
    pub bijection_n: usize,
    /// Random cyclic networks and truncation order of the series check.
    pub series_samples: usize,
    pub series_order: usize,
    pub seed: u64,
}

impl Config {
    /// The sizes of the acceptance criteria.
    pub fn acceptance() -> Self {
        Config {
            count_n: 6,
            inverse_samples: 300,
            network_samples: 200,
            network_max_n: 6,
            move_samples: 100,
            orientation_samples: 50,
            plabic_max_n: 6,
            bijection_n: 5,
            series_samples: 20,
            series_order: 12,
            seed: 2006,
        }
    }

    /// The acceptance sizes with every boundary size capped at `n`.
    pub fn with_n(n: usize) -> Result<Self> {
        if !(3..=6).contains(&n) {
            return Err(Error::validation(format!("selfcheck size must be in 3..=6, got {n}")));
        }
        let mut c = Config::acceptance();
        c.count_n = n;
        c.network_max_n = n;
        // graphs with fewer than four boundary vertices have no squares
        c.plabic_max_n = n.max(4);
        c.bijection_n = n.min(5);
        Ok(c)
    }
}

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    /// Wall-clock limit in seconds, when the check has one.
    pub limit: Option<f64>,
}

impl CheckResult {
    /// `PASS`/`FAIL`, id, name, time and detail on one line.
    pub fn line(&self) -> String {
        let limit = self.limit.map(|l| format!(" (limit {l:.0}s)")).unwrap_or_default();
        format!(
            "{} [{:>2}] {:<28} {:>7.2}s{}  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            limit,
            self.detail
        )
    }
}

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Names, time limits and bodies of the checks, in order.
pub const CHECKS: [(&str, Option<f64>); 11] = [
    ("enumeration table", Some(10.0)),
    ("inverse round trip", Some(60.0)),
    ("cyclic measurement", None),
    ("nonnegativity", None),
    ("move invariance", None),
    ("orientation independence", None),
    ("bijection web", None),
    ("matroid coherence", None),
    ("poset structure", Some(120.0)),
    ("formal series", None),
    ("bruhat equinumerosity", None),
];

/// Runs check `id` (1-based).
pub fn run_one(id: usize, cfg: &Config) -> Result<CheckResult> {
    let (name, limit) = *CHECKS.get(id.wrapping_sub(1)).ok_or_else(|| Error::validation(format!("no check {id}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(id as u64));
    let start = Instant::now();
    let outcome = match id {
        1 => enumeration_table(cfg),
        2 => inverse_round_trip(cfg, &mut rng),
        3 => cyclic_measurement(),
        4 => nonnegativity(cfg, &mut rng),
        5 => move_invariance(cfg, &mut rng),
        6 => orientation_independence(cfg, &mut rng),
        7 => bijection_web(cfg),
        8 => matroid_coherence(),
        9 => poset_structure(),
        10 => formal_series(cfg, &mut rng),
        _ => bruhat_equinumerosity(),
    };
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(l) = limit {
        if seconds >= l {
            passed = false;
            detail = format!("{detail}; exceeded the time limit");
        }
    }
    Ok(CheckResult { id, name: name.to_string(), passed, detail, seconds, limit })
}

/// Runs every check.
pub fn run(cfg: &Config) -> Vec<CheckResult> {
    (1..=CHECKS.len()).map(|id| run_one(id, cfg).expect("ids are in range")).collect()
}

fn enumeration_table(cfg: &Config) -> Outcome {
    let t = CountTable::compute(cfg.count_n, false);
    for (n, row) in t.formula.iter().enumerate() {
        let dec = t.decorated[n].as_ref().ok_or_else(|| format!("no decorated-permutation count for n = {n}"))?;
        ensure(row == &t.le[n] && row == dec, || format!("methods disagree at n = {n}"))?;
        if let Some(expected) = CELL_COUNTS.get(n) {
            let expected: Vec<BigUint> = expected.iter().map(|&x| BigUint::from(x)).collect();
            ensure(row == &expected, || format!("row n = {n} is {row:?}"))?;
        }
    }
    Ok(format!("rows n = 0..={} agree three ways", cfg.count_n))
}

fn inverse_round_trip(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let mut nonzero = 0;
    for _ in 0..cfg.inverse_samples {
        let k = rng.gen_range(1..=3);
        let n = k + rng.gen_range(1..=4);
        let t = random_le_tableau(rng, k, n);
        let a = lib(boundary_measurement_matrix(&gamma_network(&t)))?;
        let back = lib(invert_measurement(&a))?;
        ensure(back == t, || format!("round trip failed for\n{}", t.to_text()))?;
        nonzero += usize::from(t.diagram().size() > 0);
    }
    Ok(format!("{} tableaux ({nonzero} nonempty)", cfg.inverse_samples))
}

fn cyclic_measurement() -> Outcome {
    let unit = lib(boundary_measurement(&two_vertex_cycle(q(1), q(1), q(1), q(1)), 1, 2))?;
    let weighted = lib(boundary_measurement(&two_vertex_cycle(q(2), q(3), q(5), q(7)), 1, 2))?;
    ensure(unit == qf(1, 2), || format!("unit weights give {unit}"))?;
    ensure(weighted == qf(21, 8), || format!("weights (2,3,5,7) give {weighted}"))?;
    Ok("M_12 = 1/2 and 21/8".to_string())
}

fn nonnegativity(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let mut cyclic = 0;
    let mut minors = 0;
    for s in 0..cfg.network_samples {
        let n = rng.gen_range(2..=cfg.network_max_n);
        let internal = rng.gen_range(2..=12);
        let params = RandomNetworkParams { n, internal, edges: 3 * internal + n, ..Default::default() };
        let net = random_network(rng, &params);
        cyclic += usize::from(!net.is_acyclic());
        let a = lib(boundary_measurement_matrix(&net))?;
        let src = net.source_set();
        for j in k_subsets(n, net.k()) {
            let d = lib(maximal_minor(&a, &j))?;
            ensure(d >= q(0), || format!("sample {s}: minor {j:?} = {d}"))?;
            ensure(j != src || d == q(1), || format!("sample {s}: Δ_I = {d}"))?;
            minors += 1;
        }
    }
    ensure(cyclic * 4 >= cfg.network_samples, || format!("only {cyclic} networks have directed cycles"))?;
    Ok(format!("{} networks ({cyclic} with cycles), {minors} minors", cfg.network_samples))
}

fn same_point(a: &PlabicNetwork, b: &PlabicNetwork) -> std::result::Result<bool, String> {
    Ok(lib(measure_plabic(a))?.projectively_equal(&lib(measure_plabic(b))?))
}

fn move_invariance(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    // M1, M2, M3, R1, R2, R3
    let mut counts = [0usize; 6];
    for s in 0..cfg.move_samples {
        // every other sample is a top cell of Gr(k, n) with 2 ≤ k ≤ n − 2,
        // which always has square faces
        let net = if s % 2 == 0 {
            let n = rng.gen_range(3..=cfg.plabic_max_n);
            lib(random_reduced_network(n, 4, rng))?
        } else {
            let n = rng.gen_range(4..=cfg.plabic_max_n.max(4));
            let k = rng.gen_range(2..=n - 2);
            lib(random_network_of(&lib(DecoratedPermutation::top(k, n))?, 4, rng))?
        };
        let mut sites = move_sites(net.graph());
        let emb = net.graph().embedding();
        let edges: Vec<usize> = emb.edges().collect();
        let e = edges[rng.gen_range(0..edges.len())];
        sites.push(Move::InsertVertex { edge: e, color: crate::positroid::Color::Black });
        if let Some(v) = emb.internal_vertices().find(|&v| emb.degree(v) >= 3) {
            sites.push(Move::Uncontract { vertex: v, start: 0, len: 2 });
        }
        for m in &sites {
            let after = lib(apply_move(&net, m))?;
            ensure(same_point(&net, &after)?, || format!("sample {s}: {m} changes the measurement"))?;
            counts[match m {
                Move::Square { .. } => 0,
                Move::Contract { .. } | Move::Uncontract { .. } => 1,
                _ => 2,
            }] += 1;
        }
        for f in crate::plabic::generalized_squares(net.graph()) {
            let (_, steps) = lib(crate::plabic::square_steps(&net, f))?;
            let mut cur = net.clone();
            for st in steps {
                let next = lib(crate::plabic::replay(&cur, std::slice::from_ref(&st)))?;
                ensure(same_point(&cur, &next)?, || format!("sample {s}: {st} changes the measurement"))?;
                if matches!(st, crate::plabic::Step::Move(Move::Square { .. })) {
                    counts[0] += 1;
                }
                cur = next;
            }
        }
        for kind in [Gadget::Bigon, Gadget::Leaf, Gadget::Dipole] {
            let Some(h) = (0..10)
                .filter_map(|_| add_gadget(net.graph(), kind, rng))
                .find(|h| first_perfect_orientation(h).is_some())
            else {
                continue;
            };
            let hn = lib(random_face_weights(&h, rng))?;
            for r in reduction_sites(&h) {
                let slot = match r {
                    Reduction::ParallelEdges { .. } => 3,
                    Reduction::Leaf { .. } => 4,
                    Reduction::Dipole { .. } => 5,
                    _ => continue,
                };
                let out = lib(apply_reduction(&hn, &r))?;
                ensure(same_point(&hn, &out)?, || format!("sample {s}: {r} changes the measurement"))?;
                counts[slot] += 1;
            }
        }
    }
    ensure(counts.iter().all(|&c| c > 0), || format!("some move or reduction was never applied: {counts:?}"))?;
    Ok(format!(
        "{} networks; M1 {} M2 {} M3 {} R1 {} R2 {} R3 {}",
        cfg.move_samples, counts[0], counts[1], counts[2], counts[3], counts[4], counts[5]
    ))
}

fn orientation_independence(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let mut total = 0;
    let mut multi = 0;
    for s in 0..cfg.orientation_samples {
        let n = rng.gen_range(3..=cfg.plabic_max_n);
        let net = lib(random_reduced_network(n, 3, rng))?;
        let os = perfect_orientations(net.graph());
        ensure(!os.is_empty(), || format!("sample {s}: no perfect orientation"))?;
        let first = lib(measure_plabic_with(&net, &os[0]))?;
        for o in &os[1..] {
            let p = lib(measure_plabic_with(&net, o))?;
            ensure(p.projectively_equal(&first), || format!("sample {s}: orientations disagree"))?;
        }
        total += os.len();
        multi += usize::from(os.len() > 1);
    }
    Ok(format!("{} networks ({multi} with several orientations), {total} orientations", cfg.orientation_samples))
}

fn bijection_web(cfg: &Config) -> Outcome {
    let mut count = 0;
    for n in 1..=cfg.bijection_n {
        for p in DecoratedPermutation::all(n) {
            let neck = necklace_from_perm(&p);
            ensure(perm_from_necklace(&neck) == p, || format!("necklace round trip fails for {p}"))?;
            let d = lib(le_from_perm(&p))?;
            ensure(perm_from_le(&d) == p, || format!("Le round trip fails for {p}"))?;
            ensure(lib(perm_from_u(&u_from_le(&d), d.shape()))? == p, || format!("u_D formula fails for {p}"))?;
            let via_le = trips(&lib(from_le_diagram(&d))?).decorated();
            ensure(via_le.as_ref() == Some(&p), || format!("trips of the Le graph fail for {p}"))?;
            let via_graph = trips(&lib(from_decorated_permutation(&p))?).decorated();
            ensure(via_graph.as_ref() == Some(&p), || format!("graph round trip fails for {p}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} decorated permutations, n ≤ {}", cfg.bijection_n))
}

fn matroid_coherence() -> Outcome {
    let mut count = 0;
    for k in 0..=2 {
        for n in k.max(1)..=k + 3 {
            for d in all_le_diagrams(k, n) {
                let m1 = lib(meas_d(&d.unit_tableau()))?.support();
                let m2 = lib(matroid(&lib(from_le_diagram(&d))?))?;
                ensure(m1 == m2, || format!("matroids differ for\n{}", d.to_text()))?;
                let neck = necklace_from_perm(&perm_from_le(&d));
                for i in 1..=n {
                    ensure(&m1.lex_min_base(i) == neck.get(i), || format!("I_{i} differs for\n{}", d.to_text()))?;
                }
                ensure(lib(necklace_from_matroid(&m1))? == neck, || "necklace mismatch".to_string())?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} Le-diagrams in the 2 × 3 box"))
}

fn poset_structure() -> Outcome {
    for (k, n) in [(1, 4), (2, 4), (1, 5), (2, 5)] {
        let all = DecoratedPermutation::all_of_type(k, n);
        let top = k * (n - k);
        let mut gen = vec![BigUint::from(0u32); top + 1];
        for s in &all {
            let r = rank(s);
            ensure(r == top - alignment_number(s), || format!("rank of {s}"))?;
            gen[r] += 1u32;
            let below: Vec<&DecoratedPermutation> =
                all.iter().filter(|p| *p != s && circular_leq(p, s).unwrap_or(false)).collect();
            let mut reduction: Vec<DecoratedPermutation> = below
                .iter()
                .filter(|p| !below.iter().any(|x| x != *p && circular_leq(p, x).unwrap_or(false)))
                .map(|p| (*p).clone())
                .collect();
            reduction.sort();
            let mut cs = covers(s);
            cs.sort();
            ensure(cs == reduction, || format!("covers of {s} differ from the transitive reduction"))?;
            for c in &cs {
                ensure(rank(c) + 1 == r, || format!("cover {c} ⋖ {s} skips a rank"))?;
            }
            ensure(r > 0 || below.is_empty(), || format!("{s} has rank 0 but is not minimal"))?;
            ensure(r == 0 || !cs.is_empty(), || format!("{s} has positive rank but no covers"))?;
        }
        ensure(gen == cell_poly(k, n), || format!("rank generating function of ({k},{n}) is {gen:?}"))?;
    }
    Ok("(1,4) (2,4) (1,5) (2,5) graded, covers = transitive reduction".to_string())
}

fn formal_series(cfg: &Config, rng: &mut ChaCha8Rng) -> Outcome {
    let order = cfg.series_order;
    let mut done = 0;
    let mut pairs = 0;
    let mut attempts = 0;
    while done < cfg.series_samples {
        attempts += 1;
        ensure(attempts < 100 * cfg.series_samples.max(1), || "could not generate cyclic networks".to_string())?;
        let params = RandomNetworkParams { n: 4, internal: 5, edges: 14, ..Default::default() };
        let net = random_network(rng, &params);
        if net.is_acyclic() || net.k() == 0 || net.k() == net.n() {
            continue;
        }
        let weights: Vec<Option<Series>> =
            net.edges().map(|e| Some(Series::monomial(net.weight(e).clone(), 1, order))).collect();
        let rows =
            lib(boundary_measurements_in(&net, &weights, Series::constant(Rational::from_integer(1.into()), order)))?;
        let src = net.source_set();
        for (r, &i) in src.iter().enumerate() {
            for j in (1..=net.n()).filter(|j| !src.contains(j)) {
                let ws = lib(walk_series(&net, i, j, order))?;
                ensure(rows[r][j - 1] == ws, || format!("series of M_{i}{j} differ"))?;
                pairs += 1;
            }
        }
        done += 1;
    }
    Ok(format!("{done} cyclic networks, {pairs} pairs, order {order}"))
}

fn bruhat_equinumerosity() -> Outcome {
    let mut shapes = 0;
    for lam in Partition::all_in_box(2, 5) {
        let brute = lib(bruhat_interval_count(&lam))?;
        let le = BigUint::from(enumerate_le_diagrams(&lam).len());
        ensure(brute == le, || format!("shape {lam}: {brute} vs {le}"))?;
        shapes += 1;
    }
    let st = lib(staircase_check(3))?;
    ensure(st == BigUint::from(6u32), || format!("staircase_check(3) = {st}"))?;
    Ok(format!("{shapes} shapes; staircase_check(3) = 6"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let mut cfg = Config::with_n(4).unwrap();
        cfg.inverse_samples = 20;
        cfg.network_samples = 20;
        cfg.move_samples = 10;
        cfg.orientation_samples = 5;
        cfg.series_samples = 3;
        cfg.series_order = 8;
        for id in [1, 2, 3, 4, 5, 6, 7, 10, 11] {
            let r = run_one(id, &cfg).unwrap();
            assert!(r.passed, "{}", r.line());
        }
    }

    #[test]
    fn sizes_are_validated() {
        assert!(Config::with_n(2).is_err());
        assert!(Config::with_n(7).is_err());
        assert!(run_one(12, &Config::acceptance()).is_err());
        assert!(run_one(0, &Config::acceptance()).is_err());
    }
}
