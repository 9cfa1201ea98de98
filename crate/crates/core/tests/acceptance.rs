//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use skrecoup_core::combinatorics::{enumerate_partitions, factorial, sk_dim, sk_dimension, weyl_dimension};
use skrecoup_core::experiments::{
    cmd_recoupling_unitarity, cmd_scan_recoupling, cmd_skew_union_fuzz, cmd_spectrum_estimation, cmd_ssa_scan,
    cmd_thm1_certificate, dimension_ratio, SpectrumEstimationParams,
};
use skrecoup_core::intertwiner::{bend_and_compare, kronecker_coefficient, teleportation_contraction};
use skrecoup_core::quantumstates::{spectra_tuple, DensityMatrix};
use skrecoup_core::recoupling::recoupling_tensor;
use skrecoup_core::schurweyl::{hs_norm_via_schurweyl, TripartiteLabels};
use skrecoup_core::tensorlinalg::RealMatrix;
use skrecoup_core::Result;

const SEED: u64 = 0x5eed;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { passed, detail })
}

fn dimension_identities() -> Result<Outcome> {
    for k in 1..=8 {
        let sum: BigUint = enumerate_partitions(k, k)
            .iter()
            .map(|l| {
                let d = sk_dimension(l).exact;
                &d * &d
            })
            .sum();
        if sum != factorial(k) {
            return outcome(false, format!("Σ dim² = {sum} ≠ {k}!"));
        }
    }
    for k in 1..=6 {
        for d in 1..=3usize {
            let sum: BigUint = enumerate_partitions(k, d)
                .iter()
                .map(|l| sk_dimension(l).exact * weyl_dimension(l, d))
                .sum();
            if sum != BigUint::from(d).pow(k as u32) {
                return outcome(false, format!("k={k}, d={d}: Σ dim·dimV = {sum}"));
            }
        }
    }
    outcome(true, "both sums exact for every k and d".into())
}

fn recoupling_sum_rule() -> Result<Outcome> {
    let (mut sum_rule, mut unitarity, mut quads) = (0.0f64, 0.0f64, 0);
    for k in 1..=5 {
        let r = cmd_recoupling_unitarity(k, 3)?;
        quads += r.records.len();
        sum_rule = sum_rule.max(r.gate("sum_rule").map_or(f64::NAN, |g| g.value));
        unitarity = unitarity.max(r.gate("unitarity").map_or(f64::NAN, |g| g.value));
    }
    outcome(
        sum_rule <= 1e-8 && unitarity <= 1e-8,
        format!("{quads} quadruples, sum-rule error {sum_rule:.2e}, unitarity residual {unitarity:.2e}"),
    )
}

fn column_swap() -> Result<Outcome> {
    let (mut swap, mut swap_ag, mut tuples) = (0.0f64, 0.0f64, 0);
    for k in 1..=4 {
        let r = cmd_scan_recoupling(k, k)?;
        tuples += r.records.len();
        swap = swap.max(r.gate("swap_residual").map_or(f64::NAN, |g| g.value));
        swap_ag = swap_ag.max(r.gate("swap_ag_residual").map_or(f64::NAN, |g| g.value));
    }
    outcome(
        swap <= 1e-8 && swap_ag <= 1e-8,
        format!("{tuples} tuples, residuals {swap:.2e} and {swap_ag:.2e}"),
    )
}

fn cross_route() -> Result<Outcome> {
    let dims = [2, 2, 2];
    let rows = [2, 2, 2, 4, 4, 8];
    let (mut worst_diff, mut worst_sandwich, mut count) = (0.0f64, f64::NEG_INFINITY, 0);
    for k in 1..=3 {
        let labels = TripartiteLabels {
            sets: std::array::from_fn(|i| enumerate_partitions(k, rows[i])),
        };
        for six in labels.tuples() {
            let sw = hs_norm_via_schurweyl(&six, dims, k)?;
            let hs = recoupling_tensor(&six)?.hs;
            worst_diff = worst_diff.max((sw.hs - hs).abs());
            worst_sandwich = worst_sandwich.max(sw.op_norm - hs);
            count += 1;
        }
    }
    outcome(
        worst_diff <= 1e-8 && worst_sandwich <= 1e-8,
        format!("{count} tuples, max |Δhs| {worst_diff:.2e}, max op − hs {worst_sandwich:.2e}"),
    )
}

fn spectrum_estimation() -> Result<Outcome> {
    let rho = DensityMatrix::diagonal(&[0.9, 0.1])?;
    let r = cmd_spectrum_estimation(&rho, &SpectrumEstimationParams::default())?;
    let tail = r.gate("tail_at_k_max").expect("tail gate");
    let rate = r.gate("rate_increments_non_increasing").expect("rate gate");
    outcome(
        tail.passed && rate.passed,
        format!(
            "tail {:.3e} (≤ 1e-3: {}), largest increment rise {:.3e} (≤ 0: {})",
            tail.value, tail.passed, rate.value, rate.passed
        ),
    )
}

fn certificate_chain() -> Result<Outcome> {
    let rho = DensityMatrix::maximally_mixed(vec![2, 2, 2])?;
    let r = cmd_thm1_certificate(&rho, 4, 1.0)?;
    let chain = r.gate("chain").expect("chain gate");
    outcome(
        chain.passed && r.passed(),
        format!(
            "Σ hs {:.6}, t_P {:.6}, t_Q {:.6}, |overlap| {:.6}, {} tuples",
            r.summary["sum_hs"], r.summary["t_p"], r.summary["t_q"], r.summary["overlap_abs"], r.summary["tuple_count"]
        ),
    )
}

fn entropy_gates() -> Result<Outcome> {
    let r = cmd_ssa_scan(1000, SEED)?;
    outcome(
        r.passed(),
        format!(
            "min ssa gap {:.3e}, min weak-monotonicity gap {:.3e}, GHZ gap {:.12}",
            r.summary["min_ssa_gap"].as_f64().unwrap_or(f64::NAN),
            r.summary["min_weak_mono_gap"].as_f64().unwrap_or(f64::NAN),
            r.summary["ghz_ssa_gap"].as_f64().unwrap_or(f64::NAN)
        ),
    )
}

fn dimension_ratio_limit() -> Result<Outcome> {
    let ghz = DensityMatrix::ghz(3)?;
    let (g, _) = dimension_ratio(&spectra_tuple(&ghz)?, 2000)?;
    outcome((g - 1.0).abs() <= 0.05, format!("g(2000) = {g:.6}"))
}

fn graphical_identities() -> Result<Outcome> {
    let mut teleport = 0.0f64;
    for k in 1..=5 {
        for l in enumerate_partitions(k, k) {
            let d = sk_dim(&l);
            let expected = RealMatrix::identity(d).scale(1.0 / d as f64);
            teleport = teleport.max(teleportation_contraction(&l).max_abs_diff(&expected));
        }
    }
    let (mut gram, mut triples) = (0.0f64, 0);
    for k in 1..=3 {
        let parts = enumerate_partitions(k, k);
        for a in &parts {
            for b in &parts {
                for l in &parts {
                    if kronecker_coefficient(a, b, l)? > 0 {
                        gram = gram.max(bend_and_compare(a, b, l)?.gram_residual);
                        triples += 1;
                    }
                }
            }
        }
    }
    outcome(
        teleport <= 1e-10 && gram <= 1e-8,
        format!("teleportation residual {teleport:.2e}, Gram residual {gram:.2e} over {triples} triples"),
    )
}

fn skew_union() -> Result<Outcome> {
    let r = cmd_skew_union_fuzz(10_000, SEED)?;
    outcome(
        r.passed(),
        format!(
            "{} violations, min slack {:.3e}",
            r.summary["violations"],
            r.summary["min_slack"].as_f64().unwrap_or(f64::NAN)
        ),
    )
}

fn main() -> ExitCode {
    type Criterion = (&'static str, u64, fn() -> Result<Outcome>);
    let criteria: [Criterion; 10] = [
        ("dimension identities", 1, dimension_identities),
        ("recoupling unitarity sum rule", 600, recoupling_sum_rule),
        ("column-swap symmetry", 300, column_swap),
        ("cross-route oracle", 600, cross_route),
        ("spectrum estimation", 5, spectrum_estimation),
        ("certificate chain", 1800, certificate_chain),
        ("entropy gates", 10, entropy_gates),
        ("dimension-ratio limit", 1, dimension_ratio_limit),
        ("graphical-calculus identities", 60, graphical_identities),
        ("skew-union fuzz", 30, skew_union),
    ];
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*budget);
        let (passed, detail) = match result {
            Ok(o) => (o.passed && in_time, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failures += 1;
        }
        println!(
            "criterion {:>2} {:<31} {}  [{:.2}s / {}s] {}",
            i + 1,
            name,
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget,
            detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
