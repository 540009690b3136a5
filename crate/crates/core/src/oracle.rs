//! Brute-force reference values computed directly from truncated Fock
//! coefficients, and the reconciliation of those values against the
//! closed forms in [`state`](crate::state), [`wigner`](crate::wigner) and
//! [`stats`](crate::stats).
//!
//! Nothing here touches the Laguerre-product norms or the four-term Wigner
//! expression: moments are plain sums over `|c|²`, and the Wigner function
//! is the contraction of the coefficient tensor with single-mode
//! `|m⟩⟨n|` kernels.

use std::f64::consts::FRAC_2_PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_fn::{laguerre_sequence, log_factorial};
use crate::state::{fock_synthesize, pa_norm, synthesize_at, FockTensor, StateParams, MAX_CUTOFF};
use crate::stats::{self, MomentSet, Variant};
use crate::wigner::{PhasePoint, WignerEvaluator};

/// Imaginary residue allowed in the oracle contraction.
pub const ORACLE_IMAG_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_SEED: u64 = 0x5eed_9a6e;

/// Starting cutoff for an oracle run; synthesis doubles it as needed.
pub fn initial_cutoff(params: &StateParams) -> usize {
    ((params.r + params.s + params.t + 8) as usize).max(16)
}

/// Tail mass the oracle settles for. Wigner values are linear in the
/// amplitudes, so this keeps truncation near `1e-12` in absolute terms.
pub const ORACLE_TAIL: f64 = 1e-24;

/// Cutoff growth step once the synthesis contract is met.
const CUTOFF_STEP: usize = 8;

/// The tensor every oracle quantity is computed from: synthesized at
/// [`initial_cutoff`], then grown until the tail mass is below
/// [`ORACLE_TAIL`] or the cutoff reaches [`MAX_CUTOFF`].
pub fn oracle_tensor(params: &StateParams) -> Result<FockTensor> {
    let mut t = fock_synthesize(params, initial_cutoff(params))?;
    while t.tail_mass > ORACLE_TAIL && t.cutoff < MAX_CUTOFF {
        t = synthesize_at(params, (t.cutoff + CUTOFF_STEP).min(MAX_CUTOFF))?;
    }
    Ok(t)
}

/// `⟨n_i⟩`, `⟨n_i(n_i−1)⟩` and `⟨n1 n2 n3⟩` as sums over `|c|²`.
pub fn oracle_moments(tensor: &FockTensor) -> MomentSet {
    let mut mean = [0.0; 3];
    let mut second = [0.0; 3];
    let mut triple = 0.0;
    for (a, b, c, v) in tensor.iter() {
        let p = v.norm_sqr();
        if p == 0.0 {
            continue;
        }
        for (i, n) in [a, b, c].into_iter().enumerate() {
            let n = n as f64;
            mean[i] += n * p;
            second[i] += n * (n - 1.0) * p;
        }
        triple += (a * b * c) as f64 * p;
    }
    MomentSet::from_raw(mean, second, triple, Variant::Corrected)
}

/// Wigner transform of `|m⟩⟨n|` at `beta`:
/// `(2/π)(−1)^n √(n!/m!) (2β*)^{m−n} e^{−2|β|²} L_n^{m−n}(4|β|²)` for `m ≥ n`,
/// and the conjugate of the swapped call otherwise.
pub fn wigner_kernel(m: usize, n: usize, beta: Complex64) -> Complex64 {
    if m < n {
        return wigner_kernel(n, m, beta).conj();
    }
    let k = m - n;
    let lag = laguerre_sequence(n + 1, k as u32, 4.0 * beta.norm_sqr())[n];
    kernel_prefactor(m, n, beta) * lag
}

fn kernel_prefactor(m: usize, n: usize, beta: Complex64) -> Complex64 {
    let k = m - n;
    let mag = beta.norm();
    if mag == 0.0 && k > 0 {
        return Complex64::new(0.0, 0.0);
    }
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut log_mag = 0.5 * (log_factorial(n as u32) - log_factorial(m as u32)) - 2.0 * mag * mag;
    let mut phase = Complex64::new(1.0, 0.0);
    if k > 0 {
        log_mag += k as f64 * (2.0 * mag).ln();
        phase = (beta.conj() / mag).powi(k as i32);
    }
    phase * (FRAC_2_PI * sign * log_mag.exp())
}

/// Row-major `d × d` kernel matrix `K[m * d + n] = W[|m⟩⟨n|](beta)`.
pub fn kernel_matrix(d: usize, beta: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); d * d];
    let x = 4.0 * beta.norm_sqr();
    for k in 0..d {
        let lags = laguerre_sequence(d - k, k as u32, x);
        for (n, lag) in lags.into_iter().enumerate() {
            let m = n + k;
            let v = kernel_prefactor(m, n, beta) * lag;
            out[m * d + n] = v;
            out[n * d + m] = v.conj();
        }
    }
    out
}

/// `Σ c_{abc} c*_{a'b'c'} K1[a,a'] K2[b,b'] K3[c,c']`, one mode at a time.
pub fn contract(tensor: &FockTensor, kernels: [&[Complex64]; 3]) -> Complex64 {
    let d = tensor.cutoff;
    let zero = Complex64::new(0.0, 0.0);
    let [k1, k2, k3] = kernels;
    assert!(
        kernels.iter().all(|k| k.len() == d * d),
        "kernel size must match cutoff"
    );

    // mode 3
    let mut z1 = vec![zero; d * d * d];
    for ab in 0..d * d {
        let row = &tensor.coeffs[ab * d..(ab + 1) * d];
        let out = &mut z1[ab * d..(ab + 1) * d];
        for (c, &v) in row.iter().enumerate() {
            if v == zero {
                continue;
            }
            for (o, &k) in out.iter_mut().zip(&k3[c * d..(c + 1) * d]) {
                *o += v * k;
            }
        }
    }
    // mode 2
    let mut z2 = vec![zero; d * d * d];
    for a in 0..d {
        for b in 0..d {
            let src = &z1[(a * d + b) * d..(a * d + b + 1) * d];
            for bp in 0..d {
                let k = k2[b * d + bp];
                if k == zero {
                    continue;
                }
                let dst = &mut z2[(a * d + bp) * d..(a * d + bp + 1) * d];
                for (o, &s) in dst.iter_mut().zip(src) {
                    *o += k * s;
                }
            }
        }
    }
    // mode 1, folded into the final inner product
    let mut total = zero;
    for ap in 0..d {
        let target = &tensor.coeffs[ap * d * d..(ap + 1) * d * d];
        let mut acc = zero;
        for a in 0..d {
            let k = k1[a * d + ap];
            if k == zero {
                continue;
            }
            let src = &z2[a * d * d..(a + 1) * d * d];
            let dot: Complex64 = src.iter().zip(target).map(|(&s, &c)| s * c.conj()).sum();
            acc += k * dot;
        }
        total += acc;
    }
    total
}

pub fn oracle_wigner(tensor: &FockTensor, point: &PhasePoint) -> Result<f64> {
    point.validate()?;
    let d = tensor.cutoff;
    let [e, g, dl] = point.coords();
    let (k1, k2, k3) = (
        kernel_matrix(d, e),
        kernel_matrix(d, g),
        kernel_matrix(d, dl),
    );
    let w = contract(tensor, [&k1, &k2, &k3]);
    if w.im.abs() > ORACLE_IMAG_TOLERANCE * (1.0 + w.re.abs()) {
        return Err(Error::NonRealResult {
            re: w.re,
            im: w.im,
            cell: None,
        });
    }
    Ok(w.re)
}

/// Fixed-seed sample of phase-space points in a box of half-width
/// `|α| + 1.5` per real coordinate.
pub fn sample_points(params: &StateParams, count: usize, seed: u64) -> Vec<PhasePoint> {
    let half = params.alpha.norm() + 1.5;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut z = || Complex64::new(rng.gen_range(-half..=half), rng.gen_range(-half..=half));
            PhasePoint::new(z(), z(), z())
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative agreement threshold for scalar quantities.
    pub rel: f64,
    /// Absolute floor under which a difference always counts as agreement.
    pub abs_floor: f64,
    /// Absolute threshold for Wigner values.
    pub wigner_abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rel: 1e-9,
            abs_floor: 1e-12,
            wigner_abs: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Norm,
    Mean,
    Second,
    Q,
    Triple,
    G3,
    Wigner,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Quantity::Norm,
        Quantity::Mean,
        Quantity::Second,
        Quantity::Q,
        Quantity::Triple,
        Quantity::G3,
        Quantity::Wigner,
    ];

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.trim().to_ascii_lowercase().as_str() {
            "norm" => Quantity::Norm,
            "mean" | "mean_n" => Quantity::Mean,
            "second" => Quantity::Second,
            "q" | "mandel" => Quantity::Q,
            "triple" => Quantity::Triple,
            "g3" => Quantity::G3,
            "wigner" => Quantity::Wigner,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationConfig {
    pub tolerances: Tolerances,
    pub wigner_points: usize,
    pub seed: u64,
    pub quantities: Vec<Quantity>,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self {
            tolerances: Tolerances::default(),
            wigner_points: 200,
            seed: DEFAULT_SEED,
            quantities: Quantity::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Agree,
    PaperTypoSuspected,
    Fail,
    /// Both routes agree the quantity does not exist here (degenerate
    /// state, zero mean photon number).
    Undefined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub quantity: String,
    pub params: StateParams,
    pub analytic: Option<f64>,
    pub oracle: Option<f64>,
    pub abs_err: Option<f64>,
    pub rel_err: Option<f64>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl DiscrepancyReport {
    fn compare(
        quantity: String,
        params: &StateParams,
        analytic: Result<f64>,
        oracle: Option<f64>,
        tol: &Tolerances,
        paper_variant: bool,
    ) -> Self {
        let mut report = Self {
            quantity,
            params: *params,
            analytic: None,
            oracle,
            abs_err: None,
            rel_err: None,
            verdict: Verdict::Fail,
            note: None,
            seed: None,
        };
        match (analytic, oracle) {
            (Ok(a), Some(o)) => {
                let abs = (a - o).abs();
                let rel = abs / o.abs().max(a.abs()).max(f64::MIN_POSITIVE);
                report.analytic = Some(a);
                report.abs_err = Some(abs);
                report.rel_err = Some(rel);
                report.verdict = if rel <= tol.rel || abs <= tol.abs_floor {
                    Verdict::Agree
                } else if paper_variant {
                    Verdict::PaperTypoSuspected
                } else {
                    Verdict::Fail
                };
            }
            (Err(e), None) => {
                report.verdict = Verdict::Undefined;
                report.note = Some(error_marker(&e).to_string());
            }
            (Ok(a), None) => {
                report.analytic = Some(a);
                report.note = Some("oracle value undefined".into());
            }
            (Err(e), Some(_)) => {
                report.note = Some(format!("{}: {e}", error_marker(&e)));
            }
        }
        report
    }
}

fn error_marker(e: &Error) -> &'static str {
    match e {
        Error::DegenerateState { .. } => "DegenerateState",
        Error::UndefinedQ { .. } => "UndefinedQ",
        Error::UndefinedG3 { .. } => "UndefinedG3",
        Error::CutoffExceeded { .. } => "CutoffExceeded",
        Error::NonRealResult { .. } => "NonRealResult",
        _ => "Error",
    }
}

/// Runs every requested comparison for one parameter set. Problems are
/// recorded in the reports rather than returned. Reports are sorted by
/// quantity name.
pub fn validate(params: &StateParams, config: &ValidationConfig) -> Vec<DiscrepancyReport> {
    let tol = &config.tolerances;
    let wants = |q| config.quantities.contains(&q);
    let marker = |quantity: &str, e: &Error, verdict| DiscrepancyReport {
        quantity: quantity.to_string(),
        params: *params,
        analytic: None,
        oracle: None,
        abs_err: None,
        rel_err: None,
        verdict,
        note: Some(format!("{}: {e}", error_marker(e))),
        seed: None,
    };

    if let Err(e) = params.validate() {
        return vec![marker("params", &e, Verdict::Fail)];
    }
    let norm = match pa_norm(params) {
        Ok(n) => n,
        Err(e @ Error::DegenerateState { .. }) => {
            return vec![marker("norm", &e, Verdict::Undefined)]
        }
        Err(e) => return vec![marker("norm", &e, Verdict::Fail)],
    };
    let tensor = match oracle_tensor(params) {
        Ok(t) => t,
        Err(e) => return vec![marker("oracle", &e, Verdict::Fail)],
    };
    let om = oracle_moments(&tensor);
    let mut reports = Vec::new();

    if wants(Quantity::Norm) {
        reports.push(DiscrepancyReport::compare(
            "norm".into(),
            params,
            Ok(norm),
            Some(tensor.raw_norm_sq),
            tol,
            false,
        ));
    }
    for mode in 1..=3 {
        let i = mode - 1;
        if wants(Quantity::Mean) {
            let a = stats::mean_photon(params, mode);
            reports.push(DiscrepancyReport::compare(
                format!("mean_n[{mode}]"),
                params,
                a,
                Some(om.mean_n[i]),
                tol,
                false,
            ));
        }
        if wants(Quantity::Second) {
            let a = stats::second_moment(params, mode);
            reports.push(DiscrepancyReport::compare(
                format!("second[{mode}]"),
                params,
                a,
                Some(om.second[i]),
                tol,
                false,
            ));
        }
        if wants(Quantity::Q) {
            let a = stats::mandel_q(params, mode);
            reports.push(DiscrepancyReport::compare(
                format!("Q[{mode}]"),
                params,
                a,
                om.mandel_q[i],
                tol,
                false,
            ));
            let a = stats::mandel_q_ratio_form(params, mode);
            reports.push(DiscrepancyReport::compare(
                format!("Q_paper[{mode}]"),
                params,
                a,
                om.mandel_q[i],
                tol,
                true,
            ));
        }
    }
    if wants(Quantity::Triple) {
        for (name, variant) in [
            ("triple", Variant::Corrected),
            ("triple_paper", Variant::Paper),
        ] {
            let a = stats::triple_moment(params, variant);
            let paper = variant == Variant::Paper;
            reports.push(DiscrepancyReport::compare(
                name.into(),
                params,
                a,
                Some(om.triple),
                tol,
                paper,
            ));
        }
    }
    if wants(Quantity::G3) {
        for (name, variant) in [("g3", Variant::Corrected), ("g3_paper", Variant::Paper)] {
            let a = stats::g3(params, variant);
            let paper = variant == Variant::Paper;
            reports.push(DiscrepancyReport::compare(
                name.into(),
                params,
                a,
                om.g3,
                tol,
                paper,
            ));
        }
    }
    if wants(Quantity::Wigner) && config.wigner_points > 0 {
        reports.push(compare_wigner(params, &tensor, config));
    }
    reports.sort_by(|a, b| a.quantity.cmp(&b.quantity));
    reports
}

/// Worst-case Wigner disagreement over the sampled points.
fn compare_wigner(
    params: &StateParams,
    tensor: &FockTensor,
    config: &ValidationConfig,
) -> DiscrepancyReport {
    let points = sample_points(params, config.wigner_points, config.seed);
    let eval = WignerEvaluator::new(params);
    let pairs: Vec<Result<(f64, f64)>> = points
        .par_iter()
        .map(|pt| {
            let a = eval.as_ref().map_err(Clone::clone)?.eval(pt)?;
            let o = oracle_wigner(tensor, pt)?;
            Ok((a, o))
        })
        .collect();
    let mut report = DiscrepancyReport {
        quantity: "wigner".into(),
        params: *params,
        analytic: None,
        oracle: None,
        abs_err: None,
        rel_err: None,
        verdict: Verdict::Agree,
        note: Some(format!("{} points", points.len())),
        seed: Some(config.seed),
    };
    let mut worst = -1.0;
    for pair in pairs {
        match pair {
            Ok((a, o)) => {
                let abs = (a - o).abs();
                if abs > worst {
                    worst = abs;
                    report.analytic = Some(a);
                    report.oracle = Some(o);
                    report.abs_err = Some(abs);
                    report.rel_err = Some(abs / a.abs().max(o.abs()).max(f64::MIN_POSITIVE));
                }
            }
            Err(e) => {
                report.verdict = Verdict::Fail;
                report.note = Some(format!("{}: {e}", error_marker(&e)));
                return report;
            }
        }
    }
    if worst > config.tolerances.wigner_abs {
        report.verdict = Verdict::Fail;
    }
    report
}

/// `0` all agree, `2` only paper-variant disagreements, `1` any failure.
pub fn exit_code(reports: &[DiscrepancyReport]) -> i32 {
    if reports.iter().any(|r| r.verdict == Verdict::Fail) {
        1
    } else if reports
        .iter()
        .any(|r| r.verdict == Verdict::PaperTypoSuspected)
    {
        2
    } else {
        0
    }
}

/// JSON lines, one report per line.
pub fn to_jsonl(reports: &[DiscrepancyReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&serde_json::to_string(r).expect("report serializes"));
        out.push('\n');
    }
    out
}
