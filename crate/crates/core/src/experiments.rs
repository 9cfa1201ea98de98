//! Desk-scale experiments composed from the other modules, each producing an
//! [`ExperimentReport`] with per-item records and declared gates.

use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::combinatorics::{enumerate_partitions, l1_distance, ln_sk_dimension, round_spectrum, Partition};
use crate::error::{Error, Result};
use crate::quantumstates::{
    random_unitary, sample_hs_random_with, spectra_tuple, ssa_gap, weak_mono_gap, DensityMatrix, SpectraTuple,
};
use crate::recoupling::{
    associativity_count, column_swap_check, column_swap_check_ag, full_recoupling_unitary, recoupling_tensor, SixLabels,
};
use crate::schurweyl::{overlap_trace, ProjectedTraceTable, TripartiteLabels};
use crate::tensorlinalg::ComplexMatrix;

pub const SCHEMA_VERSION: u32 = 1;

/// Slack allowed on computed-number inequalities.
pub const INEQUALITY_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GateKind {
    /// An identity or inequality that holds exactly at finite `k`, checked with numerical slack.
    Exact,
    /// A numerical target with a declared tolerance.
    Tolerance,
    /// A trend indicator; reported but never decides the outcome.
    Diagnostic,
}

#[derive(Clone, Debug, Serialize)]
pub struct Gate {
    pub name: String,
    pub kind: GateKind,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Gate {
    pub fn at_most(name: &str, kind: GateKind, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            kind,
            passed: value <= threshold,
            value,
            threshold,
            detail: format!("{value:.6e} <= {threshold:.6e}"),
        }
    }

    pub fn at_least(name: &str, kind: GateKind, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            kind,
            passed: value >= threshold,
            value,
            threshold,
            detail: format!("{value:.6e} >= {threshold:.6e}"),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment: String,
    pub parameters: Value,
    pub records: Vec<Value>,
    pub summary: Map<String, Value>,
    pub gates: Vec<Gate>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl ExperimentReport {
    pub fn new(experiment: &str, parameters: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            experiment: experiment.into(),
            parameters,
            records: Vec::new(),
            summary: Map::new(),
            gates: Vec::new(),
        }
    }

    /// True when every non-diagnostic gate passes.
    pub fn passed(&self) -> bool {
        self.gates
            .iter()
            .filter(|g| g.kind != GateKind::Diagnostic)
            .all(|g| g.passed)
    }

    pub fn gate(&self, name: &str) -> Option<&Gate> {
        self.gates.iter().find(|g| g.name == name)
    }

    fn summary_record(&self) -> Value {
        json!({
            "type": "summary",
            "schema_version": self.schema_version,
            "experiment": self.experiment,
            "parameters": self.parameters,
            "summary": self.summary,
            "gates": self.gates,
            "passed": self.passed(),
        })
    }

    /// One JSON object per record, then the summary record.
    pub fn write_json_lines(&self, mut w: impl Write) -> Result<()> {
        let io = |e: std::io::Error| Error::InvalidArgument(format!("write failed: {e}"));
        for r in &self.records {
            let mut line = Map::new();
            line.insert("type".into(), json!("record"));
            line.insert("experiment".into(), json!(self.experiment));
            match r {
                Value::Object(m) => line.extend(m.clone()),
                other => {
                    line.insert("value".into(), other.clone());
                }
            }
            writeln!(w, "{}", Value::Object(line)).map_err(io)?;
        }
        writeln!(w, "{}", self.summary_record()).map_err(io)
    }

    /// Records as CSV rows; nested values are written as JSON text.
    pub fn write_csv(&self, w: impl Write) -> Result<()> {
        let csv_err = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
        let mut columns: Vec<String> = Vec::new();
        for r in &self.records {
            if let Value::Object(m) = r {
                for key in m.keys() {
                    if !columns.contains(key) {
                        columns.push(key.clone());
                    }
                }
            }
        }
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&columns).map_err(csv_err)?;
        for r in &self.records {
            let row: Vec<String> = columns
                .iter()
                .map(|c| match r.get(c) {
                    None | Some(Value::Null) => String::new(),
                    Some(Value::String(s)) => s.clone(),
                    Some(v) => v.to_string(),
                })
                .collect();
            out.write_record(&row).map_err(csv_err)?;
        }
        out.flush()
            .map_err(|e| Error::InvalidArgument(format!("write failed: {e}")))
    }

    pub fn write(&self, format: OutputFormat, w: impl Write) -> Result<()> {
        match format {
            OutputFormat::Json => self.write_json_lines(w),
            OutputFormat::Csv => self.write_csv(w),
        }
    }

    pub fn to_json_lines(&self) -> String {
        let mut buf = Vec::new();
        self.write_json_lines(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8")
    }
}

/// Independent generator for item `i` of a seeded scan.
pub fn item_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

fn labels_json(six: &SixLabels) -> Value {
    json!(six.iter().map(|p| p.rows().to_vec()).collect::<Vec<_>>())
}

fn tripartite_dims(rho: &DensityMatrix) -> Result<[usize; 3]> {
    rho.dims()
        .try_into()
        .map_err(|_| Error::Shape(format!("expected a tripartite state, got dims {:?}", rho.dims())))
}

/// Certifies `Σ_{δ-ball} hs ≥ |tr(P̃_δ Q̃_δ ρ^{⊗k})| ≥ tr(P̃_δ ρ^{⊗k}) − √(1 − tr(Q̃_δ ρ^{⊗k}))`.
pub fn cmd_thm1_certificate(rho: &DensityMatrix, k: usize, delta: f64) -> Result<ExperimentReport> {
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::InvalidArgument(format!("δ = {delta} must be non-negative")));
    }
    let dims = tripartite_dims(rho)?;
    let spectra = spectra_tuple(rho)?;
    let labels = TripartiteLabels::ball(&spectra, dims, k, delta)?;
    let traces = overlap_trace(&labels, rho, k)?;
    let tuples = labels.tuples();
    let norms: Vec<f64> = tuples
        .par_iter()
        .map(|six| recoupling_tensor(six).map(|t| t.hs))
        .collect::<Result<_>>()?;

    let mut report = ExperimentReport::new("thm1-certificate", json!({ "dims": dims, "k": k, "delta": delta }));
    for (six, hs) in tuples.iter().zip(&norms) {
        report.records.push(json!({ "labels": labels_json(six), "hs": hs }));
    }
    let sum_hs: f64 = norms.iter().sum();
    let overlap = traces.overlap.norm();
    let lower = traces.t_p - (1.0 - traces.t_q).max(0.0).sqrt();
    let s = &mut report.summary;
    s.insert("t_p".into(), json!(traces.t_p));
    s.insert("t_q".into(), json!(traces.t_q));
    s.insert("overlap_re".into(), json!(traces.overlap.re));
    s.insert("overlap_im".into(), json!(traces.overlap.im));
    s.insert("overlap_abs".into(), json!(overlap));
    s.insert("sum_hs".into(), json!(sum_hs));
    s.insert("lower_bound".into(), json!(lower));
    s.insert("tuple_count".into(), json!(tuples.len()));
    s.insert(
        "nonzero_tuple_count".into(),
        json!(norms.iter().filter(|&&x| x > 1e-12).count()),
    );
    s.insert(
        "ball_sizes".into(),
        json!(labels.sets.iter().map(Vec::len).collect::<Vec<_>>()),
    );
    report.gates.push(Gate::at_least(
        "sum_hs_bounds_overlap",
        GateKind::Exact,
        sum_hs - overlap,
        -INEQUALITY_SLACK,
    ));
    report.gates.push(Gate::at_least(
        "overlap_bounds_skew_union",
        GateKind::Exact,
        overlap - lower,
        -INEQUALITY_SLACK,
    ));
    report.gates.push(
        Gate::at_least("chain", GateKind::Exact, sum_hs - lower, -INEQUALITY_SLACK)
            .with_detail(format!("Σ hs = {sum_hs:.6e} vs t_P − √(1 − t_Q) = {lower:.6e}")),
    );
    Ok(report)
}

/// Projector onto the span of the first `rank` columns of a Haar unitary.
fn random_projector<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    let u = random_unitary(n, rng);
    ComplexMatrix::from_fn(n, n, |i, j| (0..rank).map(|c| u[(i, c)] * u[(j, c)].conj()).sum())
}

/// `(|tr(PQσ)|, tr(Pσ) − √tr((1−Q)σ))`.
pub fn skew_union_sides(p: &ComplexMatrix, q: &ComplexMatrix, sigma: &ComplexMatrix) -> (f64, f64) {
    let n = p.rows();
    let lhs = (&(p * q) * sigma).trace().norm();
    let qbar = &ComplexMatrix::identity(n) - q;
    let rhs = (p * sigma).trace().re - (&qbar * sigma).trace().re.max(0.0).sqrt();
    (lhs, rhs)
}

pub fn cmd_skew_union_fuzz(n: usize, seed: u64) -> Result<ExperimentReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let items: Vec<Value> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = item_rng(seed, i);
            let dim = rng.random_range(1..=16usize);
            let rank_p = rng.random_range(0..=dim);
            let rank_q = rng.random_range(0..=dim);
            let p = random_projector(dim, rank_p, &mut rng);
            let q = random_projector(dim, rank_q, &mut rng);
            let sigma = sample_hs_random_with(&[dim], &mut rng)?;
            let (lhs, rhs) = skew_union_sides(&p, &q, sigma.matrix());
            Ok(json!({
                "item": i, "dim": dim, "rank_p": rank_p, "rank_q": rank_q,
                "lhs": lhs, "rhs": rhs, "slack": lhs - rhs,
            }))
        })
        .collect::<Result<_>>()?;
    let slacks: Vec<f64> = items.iter().map(|r| r["slack"].as_f64().unwrap_or(f64::NAN)).collect();
    let violations = slacks.iter().filter(|&&s| s.is_nan() || s < -INEQUALITY_SLACK).count();
    let min_slack = slacks.iter().copied().fold(f64::INFINITY, f64::min);
    let mut report = ExperimentReport::new("skew-union-fuzz", json!({ "n": n, "seed": seed }));
    report.records = items;
    report.summary.insert("violations".into(), json!(violations));
    report.summary.insert("min_slack".into(), json!(min_slack));
    report
        .gates
        .push(Gate::at_most("violations", GateKind::Exact, violations as f64, 0.0));
    Ok(report)
}

/// Parameters of [`cmd_spectrum_estimation`].
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumEstimationParams {
    pub k_max: usize,
    pub delta: f64,
    pub tail_threshold: f64,
    pub rate_window: usize,
}

impl Default for SpectrumEstimationParams {
    fn default() -> Self {
        Self {
            k_max: 30,
            delta: 0.3,
            tail_threshold: 1e-3,
            rate_window: 10,
        }
    }
}

/// `f(k) = ln tr(P_{λ_k} ρ^{⊗k}) + k‖λ̄_k − r‖₁²/2` along `λ_k = round(x, k)`.
#[derive(Clone, Debug, Serialize)]
pub struct RateSeries {
    pub direction: Vec<f64>,
    pub ks: Vec<usize>,
    pub values: Vec<f64>,
    pub increments: Vec<f64>,
    /// Largest `Δf(k+1) − Δf(k)`; non-positive when increments never increase.
    pub max_increment_rise: f64,
    /// Least-squares slope of `f` against `ln k`.
    pub log_slope: f64,
}

fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

pub fn cmd_spectrum_estimation(rho: &DensityMatrix, params: &SpectrumEstimationParams) -> Result<ExperimentReport> {
    if rho.dims().len() != 1 {
        return Err(Error::Shape(format!(
            "expected a single-system state, got dims {:?}",
            rho.dims()
        )));
    }
    let d = rho.dim();
    let k_max = params.k_max;
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    let r = rho.spectrum()?;
    let tables: Vec<Vec<(Partition, f64)>> = (1..=k_max)
        .into_par_iter()
        .map(|k| ProjectedTraceTable::new(&r, k)?.all())
        .collect::<Result<_>>()?;

    let poly_exponent = (d * (d + 1)) as i32;
    let mut report = ExperimentReport::new("spectrum-estimation", json!({ "spectrum": r, "params": params }));
    let mut tails = Vec::with_capacity(k_max);
    for (k, rows) in (1..=k_max).zip(&tables) {
        let mut tail = 0.0;
        for (lambda, trace) in rows {
            let dist = l1_distance(&lambda.normalize(d), &r);
            let rate = (-(k as f64) * dist * dist / 2.0).exp();
            if dist > params.delta + 1e-12 {
                tail += trace;
            }
            report.records.push(json!({
                "k": k,
                "lambda": lambda.rows(),
                "trace": trace,
                "l1_distance": dist,
                "rate_bound": rate,
                "poly_bound": rate * ((k + 1) as f64).powi(poly_exponent),
            }));
        }
        tails.push(tail);
    }
    // smallest k₀ from which the tail never increases
    let mut k0 = k_max;
    while k0 > 1 && tails[k0 - 2] >= tails[k0 - 1] {
        k0 -= 1;
    }

    let window = params.rate_window.min(k_max);
    let first = k_max + 1 - window;
    let mut series = Vec::new();
    for dir in enumerate_partitions(k_max, d) {
        let x = dir.normalize(d);
        let mut ks = Vec::new();
        let mut values = Vec::new();
        for k in first..=k_max {
            let lk = round_spectrum(&x, k)?;
            let trace = tables[k - 1]
                .iter()
                .find(|(l, _)| *l == lk)
                .map(|(_, t)| *t)
                .unwrap_or(0.0);
            let dist = l1_distance(&lk.normalize(d), &r);
            ks.push(k);
            values.push(trace.ln() + k as f64 * dist * dist / 2.0);
        }
        let increments: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
        let max_increment_rise = increments
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::NEG_INFINITY, f64::max);
        let lnk: Vec<f64> = ks.iter().map(|&k| (k as f64).ln()).collect();
        let log_slope = least_squares_slope(&lnk, &values);
        series.push(RateSeries {
            direction: x,
            ks,
            values,
            increments,
            max_increment_rise,
            log_slope,
        });
    }
    let worst_rise = series
        .iter()
        .map(|s| s.max_increment_rise)
        .fold(f64::NEG_INFINITY, f64::max);
    let max_slope = series.iter().map(|s| s.log_slope).fold(f64::NEG_INFINITY, f64::max);

    let tail_final = *tails.last().expect("k_max ≥ 1");
    let s = &mut report.summary;
    s.insert("tails".into(), json!(tails));
    s.insert("tail_at_k_max".into(), json!(tail_final));
    s.insert("k0".into(), json!(k0));
    s.insert("rate_series".into(), serde_json::to_value(&series)?);
    s.insert("max_log_slope".into(), json!(max_slope));
    report.gates.push(Gate::at_most(
        "tail_at_k_max",
        GateKind::Tolerance,
        tail_final,
        params.tail_threshold,
    ));
    report.gates.push(
        Gate::at_most(
            "rate_increments_non_increasing",
            GateKind::Tolerance,
            worst_rise,
            INEQUALITY_SLACK,
        )
        .with_detail(format!(
            "largest rise of consecutive increments over the last {window} k: {worst_rise:.6e}"
        )),
    );
    report.gates.push(Gate::at_most(
        "rate_log_slope",
        GateKind::Diagnostic,
        max_slope,
        f64::from(poly_exponent),
    ));
    Ok(report)
}

/// `(1/k) log₂(dim[μ]dim[ν]/(dim[β]dim[λ]))` for diagrams rounded from the spectra.
pub fn dimension_ratio(spectra: &SpectraTuple, k: usize) -> Result<(f64, [Partition; 4])> {
    let mu = round_spectrum(&spectra.r_ab, k)?;
    let nu = round_spectrum(&spectra.r_bc, k)?;
    let beta = round_spectrum(&spectra.r_b, k)?;
    let lambda = round_spectrum(&spectra.r_abc, k)?;
    let ln = ln_sk_dimension(&mu) + ln_sk_dimension(&nu) - ln_sk_dimension(&beta) - ln_sk_dimension(&lambda);
    Ok((ln / (k as f64 * std::f64::consts::LN_2), [mu, nu, beta, lambda]))
}

pub fn cmd_dimension_ratio(rho: &DensityMatrix, ks: &[usize]) -> Result<ExperimentReport> {
    let [a, b, c] = tripartite_dims(rho)?;
    let spectra = spectra_tuple(rho)?;
    let gap = ssa_gap(rho)?;
    let constant = 4.0 * (a * b + b * c + b + a * b * c) as f64;
    let mut report = ExperimentReport::new("dimension-ratio", json!({ "dims": [a, b, c], "ks": ks }));
    let mut errors = Vec::new();
    let mut worst_ratio = 0.0f64;
    for &k in ks {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be positive".into()));
        }
        let (g, [mu, nu, beta, lambda]) = dimension_ratio(&spectra, k)?;
        let err = (g - gap).abs();
        let bound = constant * (k as f64).log2().max(1.0) / k as f64;
        worst_ratio = worst_ratio.max(err / bound);
        errors.push(err);
        report.records.push(json!({
            "k": k, "g": g, "ssa_gap": gap, "error": err, "bound": bound,
            "mu": mu.rows(), "nu": nu.rows(), "beta": beta.rows(), "lambda": lambda.rows(),
        }));
    }
    let decreasing = errors.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    report.summary.insert("ssa_gap".into(), json!(gap));
    report.summary.insert("constant".into(), json!(constant));
    report.gates.push(
        Gate::at_most("error_within_bound", GateKind::Tolerance, worst_ratio, 1.0)
            .with_detail(format!("largest |g(k) − gap| / (C log₂(k)/k) = {worst_ratio:.6e}")),
    );
    report.gates.push(Gate {
        name: "error_decreasing".into(),
        kind: GateKind::Diagnostic,
        passed: decreasing,
        value: errors.last().copied().unwrap_or(0.0),
        threshold: 0.0,
        detail: "error non-increasing along the k grid".into(),
    });
    Ok(report)
}

/// Diagrams rounded from each of the six spectra, in the order `(α, β, γ, μ, ν, λ)`.
pub fn round_tuple(spectra: &SpectraTuple, k: usize) -> Result<SixLabels> {
    let r = spectra.as_array();
    let v: Vec<Partition> = r.iter().map(|x| round_spectrum(x, k)).collect::<Result<_>>()?;
    Ok(v.try_into().expect("six spectra"))
}

pub fn cmd_converse_probe(spectra: &SpectraTuple, ks: &[usize], samples: usize, seed: u64) -> Result<ExperimentReport> {
    spectra.validate()?;
    let dims = [spectra.r_a.len(), spectra.r_b.len(), spectra.r_c.len()];
    let mut report = ExperimentReport::new(
        "converse-probe",
        json!({ "spectra": spectra, "ks": ks, "samples": samples, "seed": seed }),
    );
    let mut norms = Vec::new();
    for &k in ks {
        let six = round_tuple(spectra, k)?;
        let hs = recoupling_tensor(&six)?.hs;
        let labels = TripartiteLabels::single(&six);
        let surrogates: Vec<f64> = (0..samples as u64)
            .into_par_iter()
            .map(|i| {
                let rho = sample_hs_random_with(&dims, &mut item_rng(seed ^ k as u64, i))?;
                let t = overlap_trace(&labels, &rho, k)?;
                Ok((t.t_p.max(0.0) * t.t_q.max(0.0)).sqrt())
            })
            .collect::<Result<_>>()?;
        let (best, surrogate) =
            surrogates.iter().copied().enumerate().fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, x)| if x > acc.1 { (i, x) } else { acc },
            );
        norms.push(hs);
        report.records.push(json!({
            "k": k, "labels": labels_json(&six), "hs": hs,
            "surrogate": if samples > 0 { json!(surrogate) } else { Value::Null },
            "best_sample": if samples > 0 { json!(best) } else { Value::Null },
        }));
    }
    let decreasing = norms.windows(2).all(|w| w[1] < w[0]);
    report.summary.insert("hs_sequence".into(), json!(norms));
    report.gates.push(Gate {
        name: "hs_strictly_decreasing".into(),
        kind: GateKind::Diagnostic,
        passed: decreasing,
        value: norms.last().copied().unwrap_or(0.0),
        threshold: 0.0,
        detail: "trend indicator for the converse direction".into(),
    });
    Ok(report)
}

pub fn cmd_ssa_scan(n: usize, seed: u64) -> Result<ExperimentReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let gaps: Vec<(f64, f64)> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let rho = sample_hs_random_with(&[2, 2, 2], &mut item_rng(seed, i))?;
            Ok((ssa_gap(&rho)?, weak_mono_gap(&rho)?))
        })
        .collect::<Result<_>>()?;
    let ghz = DensityMatrix::ghz(3)?;
    let ghz_gap = ssa_gap(&ghz)?;
    let mut report = ExperimentReport::new("ssa-scan", json!({ "n": n, "seed": seed }));
    for (i, (s, w)) in gaps.iter().enumerate() {
        report
            .records
            .push(json!({ "item": i, "ssa_gap": s, "weak_mono_gap": w }));
    }
    report
        .records
        .push(json!({ "item": "ghz", "ssa_gap": ghz_gap, "weak_mono_gap": weak_mono_gap(&ghz)? }));
    let min_ssa = gaps.iter().map(|g| g.0).fold(f64::INFINITY, f64::min);
    let min_wm = gaps.iter().map(|g| g.1).fold(f64::INFINITY, f64::min);
    report.summary.insert("min_ssa_gap".into(), json!(min_ssa));
    report.summary.insert("min_weak_mono_gap".into(), json!(min_wm));
    report.summary.insert("ghz_ssa_gap".into(), json!(ghz_gap));
    report.gates.push(Gate::at_least(
        "min_ssa_gap",
        GateKind::Exact,
        min_ssa,
        -INEQUALITY_SLACK,
    ));
    report.gates.push(Gate::at_least(
        "min_weak_mono_gap",
        GateKind::Exact,
        min_wm,
        -INEQUALITY_SLACK,
    ));
    report.gates.push(Gate::at_most(
        "ghz_gap",
        GateKind::Tolerance,
        (ghz_gap - 1.0).abs(),
        1e-9,
    ));
    Ok(report)
}

/// Norms and both column-swap residuals for every six-tuple of partitions of
/// `k` with at most `max_rows` rows.
pub fn cmd_scan_recoupling(k: usize, max_rows: usize) -> Result<ExperimentReport> {
    let parts = enumerate_partitions(k, max_rows);
    let labels = TripartiteLabels {
        sets: std::array::from_fn(|_| parts.clone()),
    };
    let tuples = labels.tuples();
    let rows: Vec<(f64, f64, f64)> = tuples
        .par_iter()
        .map(|six| {
            let hs = recoupling_tensor(six)?.hs;
            let swap = column_swap_check(six)?.residual();
            let swap_ag = column_swap_check_ag(six)?.residual();
            Ok((hs, swap, swap_ag))
        })
        .collect::<Result<_>>()?;
    let mut report = ExperimentReport::new("scan-recoupling", json!({ "k": k, "max_rows": max_rows }));
    for (six, (hs, a, b)) in tuples.iter().zip(&rows) {
        report.records.push(json!({
            "labels": labels_json(six), "hs": hs, "swap_residual": a, "swap_ag_residual": b,
        }));
    }
    let worst = |f: fn(&(f64, f64, f64)) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let (wa, wb) = (worst(|r| r.1), worst(|r| r.2));
    report.summary.insert("tuples".into(), json!(tuples.len()));
    report
        .gates
        .push(Gate::at_most("swap_residual", GateKind::Tolerance, wa, 1e-8));
    report
        .gates
        .push(Gate::at_most("swap_ag_residual", GateKind::Tolerance, wb, 1e-8));
    Ok(report)
}

/// Sum rule and unitarity of the full recoupling matrix for every
/// `(α, β, γ, λ)` with at most `max_rows` rows; `μ` and `ν` are unrestricted.
pub fn cmd_recoupling_unitarity(k: usize, max_rows: usize) -> Result<ExperimentReport> {
    let parts = enumerate_partitions(k, max_rows);
    let mut quads = Vec::new();
    for a in &parts {
        for b in &parts {
            for g in &parts {
                for l in &parts {
                    quads.push([a.clone(), b.clone(), g.clone(), l.clone()]);
                }
            }
        }
    }
    let rows: Vec<(usize, f64, f64)> = quads
        .par_iter()
        .map(|[a, b, g, l]| {
            let count = associativity_count(a, b, g, l)?;
            let u = full_recoupling_unitary(a, b, g, l)?;
            let mut sum = 0.0;
            for mu in enumerate_partitions(k, k) {
                for nu in enumerate_partitions(k, k) {
                    let hs = recoupling_tensor(&[a.clone(), b.clone(), g.clone(), mu.clone(), nu, l.clone()])?.hs;
                    sum += hs * hs;
                }
            }
            let residual = if count == 0 { 0.0 } else { u.unitarity_residual() };
            Ok((count, (sum - count as f64).abs(), residual))
        })
        .collect::<Result<_>>()?;
    let mut report = ExperimentReport::new("recoupling-unitarity", json!({ "k": k, "max_rows": max_rows }));
    for (q, (count, sum_err, unit)) in quads.iter().zip(&rows) {
        report.records.push(json!({
            "labels": q.iter().map(|p| p.rows().to_vec()).collect::<Vec<_>>(),
            "associativity_count": count, "sum_rule_error": sum_err, "unitarity_residual": unit,
        }));
    }
    let worst_sum = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let worst_unit = rows.iter().map(|r| r.2).fold(0.0, f64::max);
    report
        .gates
        .push(Gate::at_most("sum_rule", GateKind::Tolerance, worst_sum, 1e-8));
    report
        .gates
        .push(Gate::at_most("unitarity", GateKind::Tolerance, worst_unit, 1e-8));
    Ok(report)
}

/// Echoes the validation residuals of a state.
pub fn cmd_validate_state(rho: &DensityMatrix) -> Result<ExperimentReport> {
    let m = rho.matrix();
    let spectrum = rho.spectrum()?;
    let trace: Complex64 = m.trace();
    let mut report = ExperimentReport::new("validate-state", json!({ "dims": rho.dims() }));
    let s = &mut report.summary;
    s.insert("hermiticity_residual".into(), json!(m.hermiticity_residual()));
    s.insert("trace_residual".into(), json!((trace - 1.0).norm()));
    s.insert(
        "min_eigenvalue".into(),
        json!(crate::tensorlinalg::hermitian_eigenvalues(m)?.last()),
    );
    s.insert("spectrum".into(), json!(spectrum));
    if rho.dims().len() == 3 {
        s.insert("spectra".into(), serde_json::to_value(spectra_tuple(rho)?)?);
        s.insert("ssa_gap".into(), json!(ssa_gap(rho)?));
        s.insert("weak_mono_gap".into(), json!(weak_mono_gap(rho)?));
    }
    Ok(report)
}
