//! Parameters, normalization constants and the truncated Fock expansion of
//! the three-mode photon-added GHZ entangled coherent state
//!
//! ```text
//! |psi> ∝ a1†^r a2†^s a3†^t ( |α,α,α> + e^{iφ} |−α,−α,−α> ).
//! ```
//!
//! [`pa_norm`] returns the squared norm of the unnormalized vector; the
//! physical state carries the factor `pa_norm^{-1/2}`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_fn::{laguerre, log_factorial};

pub const MAX_EXCITATION: u32 = 16;
pub const MAX_ALPHA: f64 = 6.0;
pub const MODES: usize = 3;

/// Squared norms at or below this are treated as a zero vector.
pub const DEGENERATE_NORM: f64 = 1e-280;
/// Threshold on `1 + κ^N cos φ` for the plain GHZ state.
pub const DEGENERATE_GHZ: f64 = 1e-14;

pub const MAX_CUTOFF: usize = 128;
pub const TAIL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateParams {
    pub alpha: Complex64,
    pub phi: f64,
    pub r: u32,
    pub s: u32,
    pub t: u32,
}

impl StateParams {
    pub fn new(alpha: Complex64, phi: f64, r: u32, s: u32, t: u32) -> Result<Self> {
        let p = Self {
            alpha,
            phi,
            r,
            s,
            t,
        };
        p.validate()?;
        Ok(p)
    }

    /// Real amplitude shorthand.
    pub fn real(alpha: f64, phi: f64, r: u32, s: u32, t: u32) -> Result<Self> {
        Self::new(Complex64::new(alpha, 0.0), phi, r, s, t)
    }

    /// Parameterized by `|α|²` with a real, non-negative amplitude.
    pub fn from_alpha_sq(alpha_sq: f64, phi: f64, r: u32, s: u32, t: u32) -> Result<Self> {
        if alpha_sq.is_nan() || alpha_sq < 0.0 {
            return Err(Error::InvalidParams(format!(
                "|alpha|^2 = {alpha_sq} must be non-negative"
            )));
        }
        Self::real(alpha_sq.sqrt(), phi, r, s, t)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.alpha.re.is_finite() || !self.alpha.im.is_finite() || self.alpha.norm() > MAX_ALPHA
        {
            return Err(Error::InvalidParams(format!(
                "|alpha| = {} outside [0, {MAX_ALPHA}]",
                self.alpha.norm()
            )));
        }
        if !(0.0..TAU).contains(&self.phi) {
            return Err(Error::InvalidParams(format!(
                "phi = {} outside [0, 2pi)",
                self.phi
            )));
        }
        for (name, v) in [("r", self.r), ("s", self.s), ("t", self.t)] {
            if v > MAX_EXCITATION {
                return Err(Error::InvalidParams(format!(
                    "{name} = {v} exceeds {MAX_EXCITATION}"
                )));
            }
        }
        Ok(())
    }

    pub const fn modes(&self) -> usize {
        MODES
    }

    pub fn excitations(&self) -> [u32; 3] {
        [self.r, self.s, self.t]
    }

    pub fn with_excitations(&self, [r, s, t]: [u32; 3]) -> Self {
        Self { r, s, t, ..*self }
    }

    pub fn alpha_sq(&self) -> f64 {
        self.alpha.norm_sqr()
    }
}

/// `⟨α|−α⟩ = exp(−2|α|²)`.
pub fn kappa(alpha: Complex64) -> f64 {
    (-2.0 * alpha.norm_sqr()).exp()
}

/// Normalization factor `{2[1 + κ^N cos φ]}^{-1/2}` of the N-mode GHZ
/// entangled coherent state.
pub fn ghz_norm(alpha: Complex64, phi: f64, n_modes: u32) -> Result<f64> {
    if n_modes == 0 {
        return Err(Error::InvalidParams("mode count must be at least 1".into()));
    }
    let bracket = 1.0 + kappa(alpha).powi(n_modes as i32) * phi.cos();
    if bracket <= DEGENERATE_GHZ {
        return Err(Error::DegenerateState {
            value: 2.0 * bracket,
        });
    }
    Ok((2.0 * bracket).powf(-0.5))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// Overlap with the opposite branch: `L_m(|α|²) κ`.
    Plus,
    /// Same-branch weight: `L_m(−|α|²)`.
    Minus,
}

pub fn p_factor(alpha: Complex64, m: u32, branch: Branch) -> f64 {
    let a2 = alpha.norm_sqr();
    match branch {
        Branch::Minus => laguerre(m, 0, -a2),
        Branch::Plus => laguerre(m, 0, a2) * kappa(alpha),
    }
}

/// Squared norm for arbitrary excitation numbers, bypassing the parameter
/// caps. Used for the shifted norms that moment formulas need.
pub fn norm_with_excitations(alpha: Complex64, phi: f64, exc: [u32; 3]) -> Result<f64> {
    let log_fact: f64 = exc.iter().map(|&m| log_factorial(m)).sum();
    let same: f64 = exc
        .iter()
        .map(|&m| p_factor(alpha, m, Branch::Minus))
        .product();
    let cross: f64 = exc
        .iter()
        .map(|&m| p_factor(alpha, m, Branch::Plus))
        .product();
    let value = 2.0 * log_fact.exp() * (same + cross * phi.cos());
    if value <= DEGENERATE_NORM {
        return Err(Error::DegenerateState { value });
    }
    Ok(value)
}

/// Squared norm of `a1†^r a2†^s a3†^t (|α,α,α⟩ + e^{iφ}|−α,−α,−α⟩)`.
pub fn pa_norm(params: &StateParams) -> Result<f64> {
    norm_with_excitations(params.alpha, params.phi, params.excitations())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    /// `t = 0`
    TwoMode,
    /// `s = t = 0`
    OneMode,
    /// `r = s = t = 0`
    ZeroMode,
}

/// The specialized closed forms for vanishing excitation indices. These are
/// written out independently of [`pa_norm`] so the two can be compared.
pub fn reduced_norm(params: &StateParams, reduction: Reduction) -> Result<f64> {
    let StateParams { r, s, t, .. } = *params;
    let invalid = |requested, needs| Error::InvalidReduction {
        requested,
        needs,
        r,
        s,
        t,
    };
    let x = params.alpha_sq();
    let k3 = kappa(params.alpha).powi(3);
    let c = params.phi.cos();
    let value = match reduction {
        Reduction::TwoMode => {
            if t != 0 {
                return Err(invalid("two_mode", "t = 0"));
            }
            let fact = log_factorial(r) + log_factorial(s);
            2.0 * fact.exp()
                * (laguerre(r, 0, -x) * laguerre(s, 0, -x)
                    + k3 * laguerre(r, 0, x) * laguerre(s, 0, x) * c)
        }
        Reduction::OneMode => {
            if s != 0 || t != 0 {
                return Err(invalid("one_mode", "s = t = 0"));
            }
            2.0 * log_factorial(r).exp() * (laguerre(r, 0, -x) + k3 * laguerre(r, 0, x) * c)
        }
        Reduction::ZeroMode => {
            if r != 0 || s != 0 || t != 0 {
                return Err(invalid("zero_mode", "r = s = t = 0"));
            }
            return ghz_norm(params.alpha, params.phi, 3).map(|n| n.powi(-2));
        }
    };
    if value <= DEGENERATE_NORM {
        return Err(Error::DegenerateState { value });
    }
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReducedNorms {
    pub two_mode: Option<f64>,
    pub one_mode: Option<f64>,
    pub zero_mode: Option<f64>,
}

/// Every reduction that applies to `params`; inapplicable or degenerate
/// ones are `None`.
pub fn reduced_norms(params: &StateParams) -> ReducedNorms {
    ReducedNorms {
        two_mode: reduced_norm(params, Reduction::TwoMode).ok(),
        one_mode: reduced_norm(params, Reduction::OneMode).ok(),
        zero_mode: reduced_norm(params, Reduction::ZeroMode).ok(),
    }
}

/// Truncated three-mode Fock coefficients `c[n1][n2][n3]`, row-major,
/// normalized to unit norm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockTensor {
    pub cutoff: usize,
    pub params: StateParams,
    pub coeffs: Vec<Complex64>,
    /// Fraction of the mass on the two outermost shells, an estimate of
    /// what the truncation dropped.
    pub tail_mass: f64,
    /// `Σ|c|²` before normalization.
    pub raw_norm_sq: f64,
}

impl FockTensor {
    #[inline]
    pub fn index(&self, n1: usize, n2: usize, n3: usize) -> usize {
        (n1 * self.cutoff + n2) * self.cutoff + n3
    }

    #[inline]
    pub fn get(&self, n1: usize, n2: usize, n3: usize) -> Complex64 {
        self.coeffs[self.index(n1, n2, n3)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Iterate `(n1, n2, n3, c)` in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, usize, Complex64)> + '_ {
        let d = self.cutoff;
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (i / (d * d), (i / d) % d, i % d, c))
    }

    /// Builds a tensor from explicit coefficients, normalizing them.
    pub fn from_coeffs(params: StateParams, cutoff: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != cutoff * cutoff * cutoff || cutoff < 2 {
            return Err(Error::InvalidCutoff { cutoff, minimum: 2 });
        }
        let raw: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if raw <= DEGENERATE_NORM {
            return Err(Error::DegenerateState { value: raw });
        }
        let scale = raw.sqrt().recip();
        let mut tensor = Self {
            cutoff,
            params,
            coeffs: coeffs.into_iter().map(|c| c * scale).collect(),
            tail_mass: 0.0,
            raw_norm_sq: raw,
        };
        tensor.tail_mass = tensor.outer_shell_mass();
        Ok(tensor)
    }

    fn outer_shell_mass(&self) -> f64 {
        let d = self.cutoff;
        let edge = d.saturating_sub(2);
        self.iter()
            .filter(|&(a, b, c, _)| a.max(b).max(c) >= edge)
            .map(|(_, _, _, c)| c.norm_sqr())
            .sum()
    }

    /// Flat little-endian layout: `u32` cutoff, r, s, t; `f64` phi, re(α),
    /// im(α); then `cutoff³` pairs of `f64` (re, im), row-major.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(40 + 16 * self.coeffs.len());
        for v in [
            self.cutoff as u32,
            self.params.r,
            self.params.s,
            self.params.t,
        ] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for v in [self.params.phi, self.params.alpha.re, self.params.alpha.im] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for c in &self.coeffs {
            out.extend_from_slice(&c.re.to_le_bytes());
            out.extend_from_slice(&c.im.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidParams(format!("malformed Fock tensor bytes: {msg}"));
        if bytes.len() < 40 {
            return Err(bad("short header"));
        }
        let u = |i: usize| u32::from_le_bytes(bytes[4 * i..4 * i + 4].try_into().unwrap());
        let f = |off: usize| f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
        let cutoff = u(0) as usize;
        let (r, s, t) = (u(1), u(2), u(3));
        let (phi, re, im) = (f(16), f(24), f(32));
        let n = cutoff * cutoff * cutoff;
        if bytes.len() != 40 + 16 * n {
            return Err(bad("length does not match cutoff"));
        }
        let coeffs = (0..n)
            .map(|i| Complex64::new(f(40 + 16 * i), f(48 + 16 * i)))
            .collect::<Vec<_>>();
        let params = StateParams::new(Complex64::new(re, im), phi, r, s, t)?;
        let mut tensor = Self {
            cutoff,
            params,
            coeffs,
            tail_mass: 0.0,
            raw_norm_sq: 1.0,
        };
        tensor.raw_norm_sq = tensor.norm_sqr();
        tensor.tail_mass = tensor.outer_shell_mass();
        Ok(tensor)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("Fock tensor serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidParams(format!("malformed Fock tensor JSON: {e}")))
    }
}

/// Fock amplitudes of `a†^m |β⟩` for `n < cutoff`:
/// `e^{−|β|²/2} β^{n−m} √(n!) / (n−m)!`, zero below `m`.
pub(crate) fn photon_added_amplitudes(beta: Complex64, m: u32, cutoff: usize) -> Vec<Complex64> {
    let m = m as usize;
    let mag = beta.norm();
    let unit = if mag > 0.0 {
        beta / mag
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut out = vec![Complex64::new(0.0, 0.0); cutoff];
    for (n, slot) in out.iter_mut().enumerate().skip(m) {
        let l = n - m;
        if mag == 0.0 && l > 0 {
            break;
        }
        let log_mag = 0.5 * log_factorial(n as u32) - log_factorial(l as u32) - 0.5 * mag * mag
            + if l > 0 { l as f64 * mag.ln() } else { 0.0 };
        *slot = unit.powi(l as i32) * log_mag.exp();
    }
    out
}

/// Synthesizes the normalized Fock tensor, doubling the cutoff (up to
/// [`MAX_CUTOFF`]) until the outer-shell mass drops below 1e-12.
pub fn fock_synthesize(params: &StateParams, cutoff: usize) -> Result<FockTensor> {
    fock_synthesize_with_limit(params, cutoff, MAX_CUTOFF)
}

/// [`fock_synthesize`] with a lower ceiling on the cutoff.
pub fn fock_synthesize_with_limit(
    params: &StateParams,
    cutoff: usize,
    limit: usize,
) -> Result<FockTensor> {
    let limit = limit.min(MAX_CUTOFF);
    let minimum = (params.r + params.s + params.t + 8) as usize;
    if cutoff < minimum {
        return Err(Error::InvalidCutoff { cutoff, minimum });
    }
    if cutoff > limit {
        return Err(Error::CutoffExceeded {
            cutoff,
            tail_mass: f64::NAN,
        });
    }
    let mut d = cutoff;
    loop {
        let tensor = synthesize_at(params, d)?;
        if tensor.tail_mass < TAIL_TOLERANCE {
            return Ok(tensor);
        }
        if d == limit {
            return Err(Error::CutoffExceeded {
                cutoff: d,
                tail_mass: tensor.tail_mass,
            });
        }
        d = (2 * d).min(limit);
    }
}

/// Synthesis at a fixed cutoff, without the tail check.
pub fn synthesize_at(params: &StateParams, cutoff: usize) -> Result<FockTensor> {
    let exc = params.excitations();
    let plus: Vec<Vec<Complex64>> = exc
        .iter()
        .map(|&m| photon_added_amplitudes(params.alpha, m, cutoff))
        .collect();
    // a†^m|−α⟩ differs from a†^m|α⟩ by (−1)^{n−m}
    let minus: Vec<Vec<Complex64>> = plus
        .iter()
        .zip(exc)
        .map(|(v, m)| {
            v.iter()
                .enumerate()
                .map(|(n, &c)| {
                    if (n + m as usize).is_multiple_of(2) {
                        c
                    } else {
                        -c
                    }
                })
                .collect()
        })
        .collect();
    let phase = Complex64::from_polar(1.0, params.phi);
    let mut coeffs = Vec::with_capacity(cutoff * cutoff * cutoff);
    for n1 in 0..cutoff {
        for n2 in 0..cutoff {
            let p12 = plus[0][n1] * plus[1][n2];
            let m12 = phase * minus[0][n1] * minus[1][n2];
            for n3 in 0..cutoff {
                coeffs.push(p12 * plus[2][n3] + m12 * minus[2][n3]);
            }
        }
    }
    FockTensor::from_coeffs(*params, cutoff, coeffs)
}
