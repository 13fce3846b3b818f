//! Acceptance suite: runs the eleven criteria at full size and prints one
//! PASS/FAIL line per criterion. All comparisons are exact; the only
//! tolerances are the wall-clock limits pinned below.

use std::process::ExitCode;

use positroid::exactmath::{q, qf};
use positroid::network::{boundary_measurement, two_vertex_cycle};
use positroid::selfcheck::{run_one, Config, CELL_COUNTS, CHECKS};

/// Wall-clock limits in seconds, by criterion.
const LIMITS: [(usize, f64); 3] = [(1, 10.0), (2, 60.0), (9, 120.0)];

/// Minimum sample counts, by criterion.
const MIN_SAMPLES: [(usize, usize); 5] = [(2, 300), (4, 200), (5, 100), (6, 50), (10, 20)];

fn pinned_constants() -> Result<(), String> {
    let table: [&[u64]; 7] = [
        &[1],
        &[1, 1],
        &[1, 3, 1],
        &[1, 7, 7, 1],
        &[1, 15, 33, 15, 1],
        &[1, 31, 131, 131, 31, 1],
        &[1, 63, 473, 883, 473, 63, 1],
    ];
    if CELL_COUNTS != table {
        return Err("library count table differs from the pinned table".into());
    }
    let unit = boundary_measurement(&two_vertex_cycle(q(1), q(1), q(1), q(1)), 1, 2).map_err(|e| e.to_string())?;
    let weighted = boundary_measurement(&two_vertex_cycle(q(2), q(3), q(5), q(7)), 1, 2).map_err(|e| e.to_string())?;
    // x y t / (1 + y z) at (2, 3, 5, 7) is 42/16
    if unit != qf(1, 2) || weighted != qf(21, 8) {
        return Err(format!("cyclic measurement gave {unit} and {weighted}"));
    }
    Ok(())
}

fn config_is_pinned(cfg: &Config) -> Result<(), String> {
    for (id, limit) in LIMITS {
        if CHECKS[id - 1].1 != Some(limit) {
            return Err(format!("criterion {id} limit is {:?}, expected {limit}", CHECKS[id - 1].1));
        }
    }
    let sizes = [
        (2, cfg.inverse_samples),
        (4, cfg.network_samples),
        (5, cfg.move_samples),
        (6, cfg.orientation_samples),
        (10, cfg.series_samples),
    ];
    for ((id, got), (_, min)) in sizes.into_iter().zip(MIN_SAMPLES) {
        if got < min {
            return Err(format!("criterion {id} uses {got} samples, at least {min} required"));
        }
    }
    if cfg.count_n != 6 || cfg.bijection_n != 5 || cfg.network_max_n != 6 || cfg.series_order != 12 {
        return Err("sizes differ from the acceptance sizes".into());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cfg = Config::acceptance();
    let mut failed = 0;
    for (what, r) in [("pinned constants", pinned_constants()), ("pinned sizes", config_is_pinned(&cfg))] {
        match r {
            Ok(()) => println!("PASS [ 0] {what}"),
            Err(e) => {
                println!("FAIL [ 0] {what}  {e}");
                failed += 1;
            }
        }
    }
    for id in 1..=CHECKS.len() {
        let r = run_one(id, &cfg).expect("criterion ids are in range");
        println!("{}", r.line());
        failed += usize::from(!r.passed);
    }
    println!("{} of {} criteria passed", CHECKS.len() + 2 - failed, CHECKS.len() + 2);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
