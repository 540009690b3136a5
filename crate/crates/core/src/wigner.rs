//! Closed-form Wigner function of the three-mode photon-added GHZ state.
//!
//! The density operator splits into four branch pairs `a†|β⟩⟨β'|a` with
//! `β, β' ∈ {α, −α}`. Each pair factorizes over modes, and the single-mode
//! Wigner transform of `a†^m |β⟩⟨β'| a^m` is
//!
//! ```text
//! (2/π) (−1)^m m! ⟨β'|β⟩ exp(−2(η−β)(η*−β'*)) L_m((2η*−β'*)(2η−β)).
//! ```
//!
//! The diagonal pairs (terms 1, 2) have a real Laguerre argument; the
//! interference pairs (terms 3, 4) need the complex one. The whole
//! function carries `1/pa_norm` and integrates to one over all six real
//! phase-space dimensions.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_2_PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::special_fn::{factorial, laguerre, laguerre_complex};
use crate::state::{pa_norm, StateParams};

/// Coordinates are bounded by this in magnitude.
pub const MAX_COORDINATE: f64 = 12.0;
/// Allowed `|Im W| / (1 + |Re W|)` before the result is rejected.
pub const IMAG_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub eta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
}

impl PhasePoint {
    pub fn new(eta: Complex64, gamma: Complex64, delta: Complex64) -> Self {
        Self { eta, gamma, delta }
    }

    pub fn origin() -> Self {
        let z = Complex64::new(0.0, 0.0);
        Self::new(z, z, z)
    }

    pub fn coords(&self) -> [Complex64; 3] {
        [self.eta, self.gamma, self.delta]
    }

    pub fn from_coords([eta, gamma, delta]: [Complex64; 3]) -> Self {
        Self { eta, gamma, delta }
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.eta, -self.gamma, -self.delta)
    }

    pub fn validate(&self) -> Result<()> {
        for z in self.coords() {
            if !z.re.is_finite() || !z.im.is_finite() || z.norm() > MAX_COORDINATE {
                return Err(Error::InvalidPoint(format!(
                    "coordinate {z} not finite or beyond {MAX_COORDINATE}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Term {
    /// `|α⟩⟨α|`
    One,
    /// `|−α⟩⟨−α|`
    Two,
    /// `e^{iφ} |−α⟩⟨α|`
    Three,
    /// `e^{−iφ} |α⟩⟨−α|`
    Four,
}

impl Term {
    pub const ALL: [Term; 4] = [Term::One, Term::Two, Term::Three, Term::Four];

    pub fn from_index(which: u8) -> Option<Self> {
        match which {
            1 => Some(Term::One),
            2 => Some(Term::Two),
            3 => Some(Term::Three),
            4 => Some(Term::Four),
            _ => None,
        }
    }

    /// Ket and bra amplitudes `(β, β')`.
    pub fn branches(self, alpha: Complex64) -> (Complex64, Complex64) {
        match self {
            Term::One => (alpha, alpha),
            Term::Two => (-alpha, -alpha),
            Term::Three => (-alpha, alpha),
            Term::Four => (alpha, -alpha),
        }
    }

    pub fn phase(self, phi: f64) -> Complex64 {
        match self {
            Term::One | Term::Two => Complex64::new(1.0, 0.0),
            Term::Three => Complex64::from_polar(1.0, phi),
            Term::Four => Complex64::from_polar(1.0, -phi),
        }
    }
}

/// Single-mode Wigner transform of `a†^m |β⟩⟨β'| a^m` at `eta`.
pub fn mode_factor(m: u32, beta: Complex64, beta_bra: Complex64, eta: Complex64) -> Complex64 {
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let overlap_exp = -0.5 * beta.norm_sqr() - 0.5 * beta_bra.norm_sqr() + beta_bra.conj() * beta;
    let gauss_exp = -2.0 * (eta - beta) * (eta.conj() - beta_bra.conj());
    let lag_arg = (2.0 * eta.conj() - beta_bra.conj()) * (2.0 * eta - beta);
    (overlap_exp + gauss_exp).exp()
        * laguerre_complex(m, 0, lag_arg)
        * (FRAC_2_PI * sign * factorial(m))
}

/// Real fast path of [`mode_factor`] for `β = β'`.
fn diagonal_mode_factor(m: u32, beta: Complex64, eta: Complex64) -> f64 {
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    FRAC_2_PI
        * sign
        * factorial(m)
        * (-2.0 * (eta - beta).norm_sqr()).exp()
        * laguerre(m, 0, (2.0 * eta - beta).norm_sqr())
}

/// Pointwise evaluator with the normalization resolved once.
#[derive(Debug, Clone, Copy)]
pub struct WignerEvaluator {
    params: StateParams,
    inv_norm: f64,
}

impl WignerEvaluator {
    pub fn new(params: &StateParams) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            params: *params,
            inv_norm: pa_norm(params)?.recip(),
        })
    }

    pub fn params(&self) -> &StateParams {
        &self.params
    }

    pub fn term(&self, which: Term, point: &PhasePoint) -> Complex64 {
        let exc = self.params.excitations();
        let coords = point.coords();
        let (beta, beta_bra) = which.branches(self.params.alpha);
        let product = match which {
            Term::One | Term::Two => Complex64::new(
                exc.iter()
                    .zip(coords)
                    .map(|(&m, z)| diagonal_mode_factor(m, beta, z))
                    .product(),
                0.0,
            ),
            Term::Three | Term::Four => exc
                .iter()
                .zip(coords)
                .map(|(&m, z)| mode_factor(m, beta, beta_bra, z))
                .product(),
        };
        which.phase(self.params.phi) * product * self.inv_norm
    }

    /// Sum of the four terms before the imaginary part is discarded.
    pub fn complex_value(&self, point: &PhasePoint) -> Complex64 {
        Term::ALL.iter().map(|&w| self.term(w, point)).sum()
    }

    pub fn eval(&self, point: &PhasePoint) -> Result<f64> {
        point.validate()?;
        let w = self.complex_value(point);
        check_real(w, None)
    }
}

fn check_real(w: Complex64, cell: Option<(usize, usize)>) -> Result<f64> {
    if w.im.abs() > IMAG_TOLERANCE * (1.0 + w.re.abs()) {
        return Err(Error::NonRealResult {
            re: w.re,
            im: w.im,
            cell,
        });
    }
    Ok(w.re)
}

/// One of the four closed-form terms, including the `1/pa_norm` prefactor
/// and the branch phase. `which` is 1..=4.
pub fn wigner_term(which: u8, params: &StateParams, point: &PhasePoint) -> Result<Complex64> {
    let term = Term::from_index(which)
        .ok_or_else(|| Error::InvalidParams(format!("term index {which} not in 1..=4")))?;
    point.validate()?;
    Ok(WignerEvaluator::new(params)?.term(term, point))
}

pub fn wigner(params: &StateParams, point: &PhasePoint) -> Result<f64> {
    WignerEvaluator::new(params)?.eval(point)
}

/// Wigner function of the plain GHZ state (no photons added), written
/// without Laguerre factors.
pub fn ghz_wigner(alpha: Complex64, phi: f64, point: &PhasePoint) -> Result<f64> {
    point.validate()?;
    let norm = 2.0 * (1.0 + (-6.0 * alpha.norm_sqr()).exp() * phi.cos());
    if norm <= crate::state::DEGENERATE_NORM {
        return Err(Error::DegenerateState { value: norm });
    }
    let pref = FRAC_2_PI.powi(3) / norm;
    let coords = point.coords();
    let plus: f64 = coords
        .iter()
        .map(|&z| (-2.0 * (z - alpha).norm_sqr()).exp())
        .product();
    let minus: f64 = coords
        .iter()
        .map(|&z| (-2.0 * (z + alpha).norm_sqr()).exp())
        .product();
    // |−α⟩⟨α| per mode: κ exp(−2(η+α)(η*−α*)) = exp(−2|η|² + 2(ηα* − η*α))
    let cross: Complex64 = coords
        .iter()
        .map(|&z| (-2.0 * z.norm_sqr() + 2.0 * (z * alpha.conj() - z.conj() * alpha)).exp())
        .product();
    let interference = 2.0 * (Complex64::from_polar(1.0, phi) * cross).re;
    Ok(pref * (plus + minus + interference))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Mode1,
    Mode2,
    Mode3,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::Mode1 => 0,
            Axis::Mode2 => 1,
            Axis::Mode3 => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Axis::Mode1 => "mode1",
            Axis::Mode2 => "mode2",
            Axis::Mode3 => "mode3",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "mode1" | "1" | "eta" => Some(Axis::Mode1),
            "mode2" | "2" | "gamma" => Some(Axis::Mode2),
            "mode3" | "3" | "delta" => Some(Axis::Mode3),
            _ => None,
        }
    }
}

/// A 2-D slice request: the `axis` coordinate sweeps `(x + iy)/√2` over the
/// ranges, the other two coordinates are pinned (in mode order).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axis: Axis,
    pub pinned: [Complex64; 2],
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    /// The η-plane with γ = δ = 1 used by the figure panels.
    pub fn figure_default(n: usize) -> Self {
        Self {
            axis: Axis::Mode1,
            pinned: [Complex64::new(1.0, 0.0); 2],
            x_range: (-3.0, 3.0),
            y_range: (-3.0, 3.0),
            nx: n,
            ny: n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("nx", self.nx), ("ny", self.ny)] {
            if !(2..=4096).contains(&n) {
                return Err(Error::InvalidGrid(format!(
                    "{name} = {n} outside [2, 4096]"
                )));
            }
        }
        for (a, b) in [self.x_range, self.y_range] {
            if !a.is_finite() || !b.is_finite() || a > b {
                return Err(Error::InvalidGrid(format!(
                    "range [{a}, {b}] must be finite and ascending"
                )));
            }
        }
        Ok(())
    }

    pub fn x(&self, i: usize) -> f64 {
        lerp(self.x_range, i, self.nx)
    }

    pub fn y(&self, j: usize) -> f64 {
        lerp(self.y_range, j, self.ny)
    }

    pub fn point(&self, i: usize, j: usize) -> PhasePoint {
        let moving = Complex64::new(self.x(i), self.y(j)) * FRAC_1_SQRT_2;
        let mut coords = [Complex64::new(0.0, 0.0); 3];
        let mut pinned = self.pinned.iter();
        for (k, c) in coords.iter_mut().enumerate() {
            *c = if k == self.axis.index() {
                moving
            } else {
                *pinned.next().unwrap()
            };
        }
        PhasePoint::from_coords(coords)
    }
}

fn lerp((a, b): (f64, f64), i: usize, n: usize) -> f64 {
    if i + 1 == n {
        b
    } else {
        a + (b - a) * i as f64 / (n - 1) as f64
    }
}

/// Row-major `nx × ny` samples; `values[i * ny + j]` is at `(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerGrid {
    pub spec: GridSpec,
    pub params: StateParams,
    pub values: Vec<f64>,
    /// Largest discarded imaginary part.
    pub max_imag: f64,
}

impl WignerGrid {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.spec.ny + j]
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn negative_fraction(&self) -> f64 {
        self.values.iter().filter(|&&v| v < 0.0).count() as f64 / self.values.len() as f64
    }

    /// Minimum and its `(x, y)`; ties resolve to the lowest `i`, then `j`.
    pub fn min(&self) -> GridMin {
        let mut best = 0;
        for (k, &v) in self.values.iter().enumerate() {
            if v < self.values[best] {
                best = k;
            }
        }
        let (i, j) = (best / self.spec.ny, best % self.spec.ny);
        GridMin {
            value: self.values[best],
            x: self.spec.x(i),
            y: self.spec.y(j),
            i,
            j,
        }
    }

    pub fn to_csv(&self) -> String {
        let p = &self.params;
        let mut out = String::with_capacity(64 * self.values.len());
        out.push_str("# params: r,s,t,phi,re_alpha,im_alpha,axis,pinned1_re,pinned1_im,pinned2_re,pinned2_im\n");
        out.push_str(&format!(
            "# {},{},{},{},{},{},{},{},{},{},{}\n",
            p.r,
            p.s,
            p.t,
            fmt_f64(p.phi),
            fmt_f64(p.alpha.re),
            fmt_f64(p.alpha.im),
            self.spec.axis.name(),
            fmt_f64(self.spec.pinned[0].re),
            fmt_f64(self.spec.pinned[0].im),
            fmt_f64(self.spec.pinned[1].re),
            fmt_f64(self.spec.pinned[1].im),
        ));
        out.push_str("x,y,w\n");
        for i in 0..self.spec.nx {
            let x = fmt_f64(self.spec.x(i));
            for j in 0..self.spec.ny {
                out.push_str(&format!(
                    "{x},{},{}\n",
                    fmt_f64(self.spec.y(j)),
                    fmt_f64(self.get(i, j))
                ));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("grid serializes")
    }

    /// Parses the `x,y,w` rows of [`to_csv`](Self::to_csv) output.
    pub fn parse_csv_rows(text: &str) -> Result<Vec<(f64, f64, f64)>> {
        let bad = |line: &str| Error::InvalidGrid(format!("malformed CSV row: {line}"));
        text.lines()
            .filter(|l| !l.starts_with('#') && *l != "x,y,w" && !l.is_empty())
            .map(|line| {
                let mut it = line.split(',').map(|f| f.parse::<f64>());
                match (it.next(), it.next(), it.next(), it.next()) {
                    (Some(Ok(x)), Some(Ok(y)), Some(Ok(w)), None) => Ok((x, y, w)),
                    _ => Err(bad(line)),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMin {
    pub value: f64,
    pub x: f64,
    pub y: f64,
    pub i: usize,
    pub j: usize,
}

/// Evaluates the grid on the current rayon pool. Every cell is computed by
/// the same scalar routine, so output does not depend on the worker count.
pub fn wigner_grid(params: &StateParams, spec: &GridSpec) -> Result<WignerGrid> {
    spec.validate()?;
    // |(x+iy)/√2| peaks at a corner
    for (i, j) in [
        (0, 0),
        (0, spec.ny - 1),
        (spec.nx - 1, 0),
        (spec.nx - 1, spec.ny - 1),
    ] {
        spec.point(i, j).validate()?;
    }
    let eval = WignerEvaluator::new(params)?;
    let mut cells = vec![Complex64::new(0.0, 0.0); spec.nx * spec.ny];
    cells
        .par_chunks_mut(spec.ny)
        .enumerate()
        .for_each(|(i, row)| {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = eval.complex_value(&spec.point(i, j));
            }
        });
    let mut values = Vec::with_capacity(cells.len());
    let mut max_imag: f64 = 0.0;
    for (k, w) in cells.into_iter().enumerate() {
        values.push(check_real(w, Some((k / spec.ny, k % spec.ny)))?);
        max_imag = max_imag.max(w.im.abs());
    }
    Ok(WignerGrid {
        spec: *spec,
        params: *params,
        values,
        max_imag,
    })
}

pub fn wigner_min(params: &StateParams, spec: &GridSpec) -> Result<GridMin> {
    Ok(wigner_grid(params, spec)?.min())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_points() -> Vec<PhasePoint> {
        vec![
            PhasePoint::origin(),
            PhasePoint::new(c(0.3, -0.2), c(1.0, 0.0), c(1.0, 0.0)),
            PhasePoint::new(c(-0.7, 0.4), c(0.1, 0.9), c(-0.5, -0.5)),
            PhasePoint::new(c(1.2, 0.6), c(-0.3, 0.2), c(0.0, 1.1)),
        ]
    }

    #[test]
    fn vacuum_and_fock_anchors() {
        let cube = FRAC_2_PI.powi(3);
        let p = StateParams::real(0.0, 0.0, 0, 0, 0).unwrap();
        assert!((wigner(&p, &PhasePoint::origin()).unwrap() - cube).abs() < 1e-15);
        let t1 = wigner_term(1, &p, &PhasePoint::origin()).unwrap();
        assert!((t1.re - cube / 4.0).abs() < 1e-15);
        let p = StateParams::real(0.0, 0.0, 1, 0, 0).unwrap();
        assert!((wigner(&p, &PhasePoint::origin()).unwrap() + cube).abs() < 1e-15);
    }

    #[test]
    fn interference_terms_are_conjugate() {
        for &(r, s, t) in &[(0, 0, 0), (1, 2, 1), (3, 0, 2)] {
            for &phi in &[0.0, 1.3, PI] {
                let p = StateParams::new(c(0.6, 0.25), phi, r, s, t).unwrap();
                for pt in sample_points() {
                    let w3 = wigner_term(3, &p, &pt).unwrap();
                    let w4 = wigner_term(4, &p, &pt).unwrap();
                    assert!((w3 - w4.conj()).norm() <= 1e-12 * (1.0 + w3.norm()));
                }
            }
        }
    }

    #[test]
    fn mirror_symmetry_of_diagonal_terms() {
        let p = StateParams::new(c(0.8, -0.3), 0.0, 2, 1, 3).unwrap();
        let q = StateParams {
            alpha: -p.alpha,
            ..p
        };
        for pt in sample_points() {
            let w2 = wigner_term(2, &p, &pt).unwrap();
            assert!((w2 - wigner_term(1, &q, &pt).unwrap()).norm() < 1e-14);
            assert!((w2 - wigner_term(1, &p, &pt.neg()).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn reduces_to_ghz_at_zero_excitation() {
        for &a in &[0.0, 0.3, 1.1] {
            for &phi in &[0.0, 0.7, PI] {
                if a == 0.0 && phi == PI {
                    continue;
                }
                let p = StateParams::new(c(a, 0.2 * a), phi, 0, 0, 0).unwrap();
                for pt in sample_points() {
                    let w = wigner(&p, &pt).unwrap();
                    let g = ghz_wigner(p.alpha, phi, &pt).unwrap();
                    assert!((w - g).abs() < 1e-14, "{w} vs {g}");
                }
            }
        }
    }

    #[test]
    fn invalid_inputs() {
        let p = StateParams::real(0.3, 0.0, 0, 0, 0).unwrap();
        let far = PhasePoint::new(c(13.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        assert!(matches!(wigner(&p, &far), Err(Error::InvalidPoint(_))));
        assert!(wigner_term(5, &p, &PhasePoint::origin()).is_err());
        let mut spec = GridSpec::figure_default(2);
        spec.nx = 1;
        assert!(matches!(wigner_grid(&p, &spec), Err(Error::InvalidGrid(_))));
        let odd_vac = StateParams::real(0.0, PI, 0, 0, 0).unwrap();
        assert!(matches!(
            wigner(&odd_vac, &PhasePoint::origin()),
            Err(Error::DegenerateState { .. })
        ));
    }

    #[test]
    fn small_grid_is_pointwise() {
        let p = StateParams::real(0.3, 0.0, 1, 2, 1).unwrap();
        let spec = GridSpec {
            nx: 2,
            ny: 2,
            ..GridSpec::figure_default(2)
        };
        let g = wigner_grid(&p, &spec).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(g.get(i, j), wigner(&p, &spec.point(i, j)).unwrap());
            }
        }
        let pt = spec.point(0, 1);
        assert_eq!(pt.eta, c(-3.0, 3.0) * FRAC_1_SQRT_2);
        assert_eq!(pt.gamma, c(1.0, 0.0));
    }

    #[test]
    fn grid_min_ties_and_location() {
        let p = StateParams::real(0.0, 0.0, 1, 0, 0).unwrap();
        let spec = GridSpec {
            axis: Axis::Mode1,
            pinned: [c(0.0, 0.0); 2],
            x_range: (-2.0, 2.0),
            y_range: (-2.0, 2.0),
            nx: 41,
            ny: 41,
        };
        let m = wigner_min(&p, &spec).unwrap();
        assert!((m.value + FRAC_2_PI.powi(3)).abs() < 1e-14);
        assert_eq!((m.x, m.y), (0.0, 0.0));

        let vac = StateParams::real(0.0, 0.0, 0, 0, 0).unwrap();
        let m = wigner_min(&vac, &spec).unwrap();
        assert!(m.value > 0.0);
        // four symmetric corners; the first in row-major order wins
        assert_eq!((m.i, m.j), (0, 0));
    }

    #[test]
    fn csv_round_trip() {
        let p = StateParams::real(0.3, PI, 1, 1, 0).unwrap();
        let spec = GridSpec {
            nx: 5,
            ny: 4,
            ..GridSpec::figure_default(5)
        };
        let g = wigner_grid(&p, &spec).unwrap();
        let csv = g.to_csv();
        assert!(csv.starts_with("# params: r,s,t,phi"));
        let rows = WignerGrid::parse_csv_rows(&csv).unwrap();
        assert_eq!(rows.len(), 20);
        for (k, (x, y, w)) in rows.into_iter().enumerate() {
            let (i, j) = (k / 4, k % 4);
            assert_eq!(x, spec.x(i));
            assert_eq!(y, spec.y(j));
            assert_eq!(w, g.get(i, j));
        }
        let back: WignerGrid = serde_json::from_str(&g.to_json()).unwrap();
        assert_eq!(back, g);
    }
}
