//! Photon statistics from ratios of shifted squared norms.
//!
//! Writing `N(r,s,t)` for [`pa_norm`](crate::state::pa_norm), every
//! anti-normally ordered moment is a norm ratio:
//! `⟨a_i a_i†⟩ = N(+1_i)/N`, `⟨a_i² a_i†²⟩ = N(+2_i)/N`, and products of
//! distinct modes shift several indices at once. Normal-ordered moments
//! follow from `n = a a† − 1`.
//!
//! The triple moment and `g3` come in two variants: `Corrected` is the
//! full expansion of `Π_i (a_i a_i† − 1)`; `Paper` keeps the four-norm
//! expression and the squared-norm prefactor as published. The oracle
//! decides between them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::{fmt_f64, fmt_opt};
use crate::state::{norm_with_excitations, StateParams};

/// Means at or below this leave `Q` and `g3` undefined.
pub const MEAN_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Paper,
    Corrected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhotonStatistics {
    SubPoissonian,
    Poissonian,
    SuperPoissonian,
}

impl PhotonStatistics {
    pub fn classify(q: f64) -> Self {
        if q < 0.0 {
            Self::SubPoissonian
        } else if q > 0.0 {
            Self::SuperPoissonian
        } else {
            Self::Poissonian
        }
    }
}

/// Anti-bunching criterion for the three-mode correlation: `g3 < 1`.
pub fn is_antibunched(g3: f64) -> bool {
    g3 < 1.0
}

/// Norm ratios for one parameter set, with the base norm computed once.
struct Norms {
    params: StateParams,
    base: f64,
}

impl Norms {
    fn new(params: &StateParams) -> Result<Self> {
        params.validate()?;
        let base = norm_with_excitations(params.alpha, params.phi, params.excitations())?;
        Ok(Self {
            params: *params,
            base,
        })
    }

    /// `N(r+d1, s+d2, t+d3) / N(r, s, t)`
    fn ratio(&self, shift: [u32; 3]) -> Result<f64> {
        let exc = self.params.excitations();
        let shifted = [exc[0] + shift[0], exc[1] + shift[1], exc[2] + shift[2]];
        Ok(norm_with_excitations(self.params.alpha, self.params.phi, shifted)? / self.base)
    }

    fn single(&self, mode: usize, by: u32) -> Result<f64> {
        let mut shift = [0; 3];
        shift[mode] = by;
        self.ratio(shift)
    }
}

fn mode_index(mode: usize) -> Result<usize> {
    if (1..=3).contains(&mode) {
        Ok(mode - 1)
    } else {
        Err(Error::InvalidParams(format!("mode {mode} not in 1..=3")))
    }
}

/// `⟨a_i† a_i⟩` for `mode` in 1..=3.
pub fn mean_photon(params: &StateParams, mode: usize) -> Result<f64> {
    let i = mode_index(mode)?;
    Norms::new(params)?.single(i, 1).map(|r| r - 1.0)
}

/// `⟨a_i†² a_i²⟩ = (N(+2) − 4N(+1))/N + 2`.
pub fn second_moment(params: &StateParams, mode: usize) -> Result<f64> {
    let i = mode_index(mode)?;
    let n = Norms::new(params)?;
    Ok(n.single(i, 2)? - 4.0 * n.single(i, 1)? + 2.0)
}

/// Mandel `Q = ⟨a†²a²⟩/⟨n⟩ − ⟨n⟩`.
pub fn mandel_q(params: &StateParams, mode: usize) -> Result<f64> {
    let i = mode_index(mode)?;
    let n = Norms::new(params)?;
    let one = n.single(i, 1)?;
    let mean = one - 1.0;
    if mean <= MEAN_THRESHOLD {
        return Err(Error::UndefinedQ { mode, mean });
    }
    let second = n.single(i, 2)? - 4.0 * one + 2.0;
    Ok(second / mean - mean)
}

/// Mandel `Q` in the published ratio-of-norm-differences form
/// `(N(+2) − 4N(+1) + 2N)/(N(+1) − N) − N(+1)/N + 1`.
pub fn mandel_q_ratio_form(params: &StateParams, mode: usize) -> Result<f64> {
    let i = mode_index(mode)?;
    let n = Norms::new(params)?;
    let base = n.base;
    let n1 = n.single(i, 1)? * base;
    let n2 = n.single(i, 2)? * base;
    let mean = n1 / base - 1.0;
    if mean <= MEAN_THRESHOLD {
        return Err(Error::UndefinedQ { mode, mean });
    }
    Ok((n2 - 4.0 * n1 + 2.0 * base) / (n1 - base) - n1 / base + 1.0)
}

/// `⟨n1 n2 n3⟩`.
pub fn triple_moment(params: &StateParams, variant: Variant) -> Result<f64> {
    triple_from(&Norms::new(params)?, variant)
}

fn triple_from(n: &Norms, variant: Variant) -> Result<f64> {
    let singles = n.ratio([1, 0, 0])? + n.ratio([0, 1, 0])? + n.ratio([0, 0, 1])?;
    let all = n.ratio([1, 1, 1])?;
    Ok(match variant {
        Variant::Paper => all - singles + 1.0,
        Variant::Corrected => {
            let doubles = n.ratio([1, 1, 0])? + n.ratio([1, 0, 1])? + n.ratio([0, 1, 1])?;
            all - doubles + singles - 1.0
        }
    })
}

/// Three-mode correlation `g3_123(0)`.
///
/// `Corrected` is `⟨n1n2n3⟩/(⟨n1⟩⟨n2⟩⟨n3⟩)`. `Paper` evaluates
/// `N² (N(+1,+1,+1) − N(+1,0,0) − N(0,+1,0) − N(0,0,+1) + N) / Π_i(N(+1_i) − N) − 1`
/// exactly as published.
pub fn g3(params: &StateParams, variant: Variant) -> Result<f64> {
    let n = Norms::new(params)?;
    let means = [
        n.single(0, 1)? - 1.0,
        n.single(1, 1)? - 1.0,
        n.single(2, 1)? - 1.0,
    ];
    if means.iter().any(|&m| m <= MEAN_THRESHOLD) {
        return Err(Error::UndefinedG3 { means });
    }
    Ok(match variant {
        Variant::Corrected => triple_from(&n, Variant::Corrected)? / means.iter().product::<f64>(),
        Variant::Paper => {
            let base = n.base;
            let numer = (n.ratio([1, 1, 1])?
                - n.ratio([1, 0, 0])?
                - n.ratio([0, 1, 0])?
                - n.ratio([0, 0, 1])?
                + 1.0)
                * base;
            let denom: f64 = means.iter().map(|m| m * base).product();
            base * base * numer / denom - 1.0
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub mean_n: [f64; 3],
    pub second: [f64; 3],
    /// `None` where the mode's mean is below [`MEAN_THRESHOLD`].
    pub mandel_q: [Option<f64>; 3],
    pub triple: f64,
    pub g3: Option<f64>,
    pub variant: Variant,
}

impl MomentSet {
    /// Composes `Q` and `g3` from raw moments.
    pub fn from_raw(mean_n: [f64; 3], second: [f64; 3], triple: f64, variant: Variant) -> Self {
        let mandel_q = std::array::from_fn(|i| {
            (mean_n[i] > MEAN_THRESHOLD).then(|| second[i] / mean_n[i] - mean_n[i])
        });
        let g3 = mean_n
            .iter()
            .all(|&m| m > MEAN_THRESHOLD)
            .then(|| triple / mean_n.iter().product::<f64>());
        Self {
            mean_n,
            second,
            mandel_q,
            triple,
            g3,
            variant,
        }
    }
}

/// Every closed-form moment for `params`. With `Variant::Paper` the `Q`
/// values use the ratio form and the triple moment and `g3` use the
/// published expressions.
pub fn moments(params: &StateParams, variant: Variant) -> Result<MomentSet> {
    let n = Norms::new(params)?;
    let mut mean_n = [0.0; 3];
    let mut second = [0.0; 3];
    for i in 0..3 {
        let one = n.single(i, 1)?;
        mean_n[i] = one - 1.0;
        second[i] = n.single(i, 2)? - 4.0 * one + 2.0;
    }
    let triple = triple_from(&n, variant)?;
    let mut set = MomentSet::from_raw(mean_n, second, triple, Variant::Corrected);
    set.variant = variant;
    if variant == Variant::Paper {
        for i in 0..3 {
            set.mandel_q[i] = mandel_q_ratio_form(params, i + 1).ok();
        }
        set.g3 = g3(params, Variant::Paper).ok();
    }
    Ok(set)
}

/// One line of a scan file. `mode` is `None` for joint (three-mode) rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub alpha_sq: f64,
    pub phi: f64,
    pub r: u32,
    pub s: u32,
    pub t: u32,
    pub mode: Option<usize>,
    pub mean_n: Option<f64>,
    pub second: Option<f64>,
    #[serde(rename = "Q_paper")]
    pub q_paper: Option<f64>,
    #[serde(rename = "Q")]
    pub q: Option<f64>,
    pub triple: Option<f64>,
    pub triple_paper: Option<f64>,
    pub g3: Option<f64>,
    pub g3_paper: Option<f64>,
    pub status: String,
}

pub const SCAN_HEADER: &str =
    "alpha_sq,phi,r,s,t,mode,mean_n,second,Q_paper,Q,triple,triple_paper,g3,g3_paper,status";

impl ScanRow {
    fn empty(
        alpha_sq: f64,
        phi: f64,
        [r, s, t]: [u32; 3],
        mode: Option<usize>,
        status: &str,
    ) -> Self {
        Self {
            alpha_sq,
            phi,
            r,
            s,
            t,
            mode,
            mean_n: None,
            second: None,
            q_paper: None,
            q: None,
            triple: None,
            triple_paper: None,
            g3: None,
            g3_paper: None,
            status: status.to_string(),
        }
    }

    pub fn to_csv_line(&self) -> String {
        let fields = [
            fmt_f64(self.alpha_sq),
            fmt_f64(self.phi),
            self.r.to_string(),
            self.s.to_string(),
            self.t.to_string(),
            self.mode.map(|m| m.to_string()).unwrap_or_default(),
            fmt_opt(self.mean_n),
            fmt_opt(self.second),
            fmt_opt(self.q_paper),
            fmt_opt(self.q),
            fmt_opt(self.triple),
            fmt_opt(self.triple_paper),
            fmt_opt(self.g3),
            fmt_opt(self.g3_paper),
            self.status.clone(),
        ];
        fields.join(",")
    }
}

/// Rows for one `(|α|², tuple)` point: one per entry of `modes` (1-based),
/// or a single joint row when `modes` is empty. Per-mode rows carry
/// `mean_n`, `second` and both `Q`; joint rows leave them empty. Both row
/// kinds carry the triple moment and `g3`.
pub fn scan_point(alpha_sq: f64, phi: f64, exc: [u32; 3], modes: &[usize]) -> Result<Vec<ScanRow>> {
    let params = StateParams::from_alpha_sq(alpha_sq, phi, exc[0], exc[1], exc[2])?;
    let labels: Vec<Option<usize>> = if modes.is_empty() {
        vec![None]
    } else {
        modes.iter().map(|&m| Some(m)).collect()
    };
    for &m in modes {
        if !(1..=3).contains(&m) {
            return Err(Error::InvalidParams(format!("mode {m} outside 1..=3")));
        }
    }
    let (corr, paper) = match (
        moments(&params, Variant::Corrected),
        moments(&params, Variant::Paper),
    ) {
        (Ok(c), Ok(p)) => (c, p),
        (Err(Error::DegenerateState { .. }), _) | (_, Err(Error::DegenerateState { .. })) => {
            return Ok(labels
                .into_iter()
                .map(|m| ScanRow::empty(alpha_sq, phi, exc, m, "degenerate"))
                .collect());
        }
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    Ok(labels
        .into_iter()
        .map(|mode| {
            let mut row = ScanRow::empty(alpha_sq, phi, exc, mode, "ok");
            row.triple = Some(corr.triple);
            row.triple_paper = Some(paper.triple);
            row.g3 = corr.g3;
            row.g3_paper = paper.g3;
            match mode {
                Some(m) => {
                    let i = m - 1;
                    row.mean_n = Some(corr.mean_n[i]);
                    row.second = Some(corr.second[i]);
                    row.q = corr.mandel_q[i];
                    row.q_paper = paper.mandel_q[i];
                    if row.q.is_none() {
                        row.status = "undefined_q".into();
                    }
                }
                None => {
                    if row.g3.is_none() {
                        row.status = "undefined_g3".into();
                    }
                }
            }
            row
        })
        .collect())
}

/// Every tuple crossed with every `|α|²`, tuples outermost. Points are
/// evaluated in parallel; row order is fixed.
pub fn scan(
    tuples: &[[u32; 3]],
    alpha_sq: &[f64],
    phi: f64,
    modes: &[usize],
) -> Result<Vec<ScanRow>> {
    let jobs: Vec<([u32; 3], f64)> = tuples
        .iter()
        .flat_map(|&e| alpha_sq.iter().map(move |&a| (e, a)))
        .collect();
    let chunks: Vec<Result<Vec<ScanRow>>> = jobs
        .par_iter()
        .map(|&(e, a)| scan_point(a, phi, e, modes))
        .collect();
    let mut rows = Vec::new();
    for c in chunks {
        rows.extend(c?);
    }
    Ok(rows)
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv_line());
        out.push('\n');
    }
    out
}

pub fn scan_json(rows: &[ScanRow]) -> String {
    serde_json::to_string(rows).expect("rows serialize")
}
