//! Generalized Laguerre polynomials and factorial-scale helpers.
//!
//! Every closed form in this crate reduces to products of `L_m^k` at either a
//! real argument (norms, diagonal Wigner terms) or a complex argument (the
//! interference terms of the Wigner function). Both are evaluated with the
//! three-term recurrence in the degree; the explicit alternating sum loses all
//! significant digits for moderate `m`.

use num_complex::Complex64;

/// Largest degree any call site in the crate is allowed to request.
pub const MAX_DEGREE: u32 = 64;

/// Degree, order and argument of a generalized Laguerre polynomial `L_m^k(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaguerreArgs {
    pub m: u32,
    pub k: u32,
    pub x: f64,
}

impl LaguerreArgs {
    pub fn new(m: u32, k: u32, x: f64) -> Self {
        Self { m, k, x }
    }

    pub fn eval(&self) -> f64 {
        laguerre(self.m, self.k, self.x)
    }
}

/// `L_m^k(x)` via `(n+1) L_{n+1} = (2n+1+k-x) L_n - (n+k) L_{n-1}`.
pub fn laguerre(m: u32, k: u32, x: f64) -> f64 {
    let k = k as f64;
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = 1.0 + k - x;
    for n in 1..m {
        let n = n as f64;
        let next = ((2.0 * n + 1.0 + k - x) * cur - (n + k) * prev) / (n + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Complex-argument variant of [`laguerre`], same recurrence.
pub fn laguerre_complex(m: u32, k: u32, z: Complex64) -> Complex64 {
    let k = k as f64;
    let mut prev = Complex64::new(1.0, 0.0);
    if m == 0 {
        return prev;
    }
    let mut cur = Complex64::new(1.0 + k, 0.0) - z;
    for n in 1..m {
        let n = n as f64;
        let next =
            ((Complex64::new(2.0 * n + 1.0 + k, 0.0) - z) * cur - prev * (n + k)) / (n + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// All of `L_0^k(x), ..., L_{len-1}^k(x)` in one pass.
pub fn laguerre_sequence(len: usize, k: u32, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    if len == 0 {
        return out;
    }
    let kf = k as f64;
    out.push(1.0);
    if len == 1 {
        return out;
    }
    out.push(1.0 + kf - x);
    for n in 1..len - 1 {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 + kf - x) * out[n] - (nf + kf) * out[n - 1]) / (nf + 1.0);
        out.push(next);
    }
    out
}

const FACTORIALS: [u64; 21] = {
    let mut table = [1u64; 21];
    let mut i = 1;
    while i < 21 {
        table[i] = table[i - 1] * i as u64;
        i += 1;
    }
    table
};

/// `ln(n!)`. Exact table up to 20, Stirling series with four correction
/// terms beyond (truncation error below 1e-17 for n > 20).
pub fn log_factorial(n: u32) -> f64 {
    if (n as usize) < FACTORIALS.len() {
        return (FACTORIALS[n as usize] as f64).ln();
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + series
}

/// `n!` as a float, exact for n <= 20.
pub fn factorial(n: u32) -> f64 {
    if (n as usize) < FACTORIALS.len() {
        FACTORIALS[n as usize] as f64
    } else {
        log_factorial(n).exp()
    }
}
