//! The bump weight ω₀, the oscillatory integral `J(γ, u)` and the singular
//! integral constant κ.
//!
//! `max ω₀ = e^{-16}`, so κ is of order `10^{-32}`. Everything is computed
//! with the normalized weight `ω̃₀ = e^{16} ω₀` and rescaled at the end:
//! `J = e^{-16} J̃`, `κ = e^{-64} κ̃`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::compensated::{CompensatedComplex, CompensatedSum};
use crate::expsum::ComplexValue;

pub const SUPPORT: (f64, f64) = (0.25, 0.75);

/// `e^{-16}`: ratio between ω₀ and its normalized form.
pub fn weight_scale() -> f64 {
    (-16f64).exp()
}

/// `ω₀(t) = exp(1/((t - 1/2)² - 1/16))` on `(1/4, 3/4)`, zero elsewhere.
pub fn omega0(t: f64) -> f64 {
    let s = (t - 0.5) * (t - 0.5) - 0.0625;
    if s < 0.0 {
        (1.0 / s).exp()
    } else {
        0.0
    }
}

/// `e^{16} ω₀(t)`, with maximum 1 at `t = 1/2`.
pub fn omega0_normalized(t: f64) -> f64 {
    let s = (t - 0.5) * (t - 0.5) - 0.0625;
    if s < 0.0 {
        (1.0 / s + 16.0).exp()
    } else {
        0.0
    }
}

const GL_ORDER: usize = 16;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut rule = Vec::with_capacity(n);
        for i in 1..=n {
            let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        rule
    })
}

/// `e(t)` with the integer part of `t` removed first.
fn e_real(t: f64) -> Complex64 {
    let f = t - t.floor();
    let a = 2.0 * PI * f;
    Complex64::new(a.cos(), a.sin())
}

/// Composite Gauss–Legendre rule with `panels` equal panels on `[a, b]`.
fn composite<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, panels: usize) -> Complex64 {
    let h = (b - a) / panels as f64;
    let rule = gauss_legendre();
    let mut acc = CompensatedComplex::new();
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * h;
        for &(x, w) in rule {
            acc.add(f(mid + 0.5 * h * x) * (0.5 * h * w));
        }
    }
    acc.value()
}

/// `∫ w(x) e(γx² + ux) dx` over the support of `w`, for a weight supported in
/// `(1/4, 3/4)`. Returns the value and the difference between the last two
/// refinements.
pub fn j_integral_for<W: Fn(f64) -> f64>(w: &W, gamma: f64, u: f64) -> (ComplexValue, f64) {
    let (a, b) = SUPPORT;
    let f = |x: f64| e_real(gamma * x * x + u * x) * w(x);
    // The phase derivative is at most 2π(1.5|γ| + |u|); start with about one
    // oscillation per panel and refine by halving.
    let mut panels = ((0.5 * (1.5 * gamma.abs() + u.abs())).ceil() as usize).max(8);
    let mut prev = composite(&f, a, b, panels);
    loop {
        panels *= 2;
        let next = composite(&f, a, b, panels);
        let diff = (next - prev).norm();
        if diff < 1e-14 || panels > 1 << 26 {
            return (next, diff);
        }
        prev = next;
    }
}

/// `J̃(γ, u) = ∫ ω̃₀(x) e(γx² + ux) dx`.
pub fn j_normalized(gamma: f64, u: f64) -> ComplexValue {
    j_integral_for(&omega0_normalized, gamma, u).0
}

/// `J(γ, u) = ∫ ω₀(x) e(γx² + ux) dx`.
pub fn j_integral(gamma: f64, u: f64) -> ComplexValue {
    j_normalized(gamma, u) * weight_scale()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KappaMethod {
    Oscillatory,
    Surface,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaEstimate {
    /// κ on the true scale (order `10^{-32}`).
    pub value: f64,
    /// κ̃ = `e^{64}` κ.
    pub normalized: f64,
    pub method: KappaMethod,
    /// Estimated absolute error of `normalized`.
    pub error_estimate: f64,
}

impl KappaEstimate {
    fn from_normalized(normalized: f64, error_estimate: f64, method: KappaMethod) -> Self {
        KappaEstimate {
            value: normalized * (-64f64).exp(),
            normalized,
            method,
            error_estimate,
        }
    }

    pub fn relative_error(&self) -> f64 {
        self.error_estimate / self.normalized.abs()
    }
}

/// Upper limit for the γ integration; never reached in practice because `J`
/// decays faster than any power of `γ`.
pub const GAMMA_MAX: f64 = 1e6;

/// `∫ e(-γ) J_w(γ, 0)⁴ dγ` over the real line, using `J(-γ) = conj J(γ)`.
/// The range is doubled until a doubling segment changes the result by less
/// than `10^{-13}` relative and the mass of `|J|⁴` on it is as small.
pub fn kappa_oscillatory_for<W: Fn(f64) -> f64>(w: &W) -> (f64, f64) {
    const PANEL: f64 = 0.25;
    let integrand = |g: f64| {
        let j = j_integral_for(w, g, 0.0).0;
        let j2 = j * j;
        (e_real(-g) * j2 * j2, (j2 * j2).norm())
    };
    let segment = |lo: f64, hi: f64| {
        let panels = ((hi - lo) / PANEL).ceil() as usize;
        let h = (hi - lo) / panels as f64;
        let mut val = CompensatedSum::new();
        let mut mass = CompensatedSum::new();
        for k in 0..panels {
            let mid = lo + (k as f64 + 0.5) * h;
            for &(x, wt) in gauss_legendre() {
                let (z, m) = integrand(mid + 0.5 * h * x);
                val.add(2.0 * z.re * 0.5 * h * wt);
                mass.add(2.0 * m * 0.5 * h * wt);
            }
        }
        (val.value(), mass.value())
    };
    let mut hi = 4.0;
    let (mut total, _) = segment(0.0, hi);
    loop {
        let (inc, mass) = segment(hi, 2.0 * hi);
        total += inc;
        hi *= 2.0;
        let tol = 1e-13 * total.abs();
        if (inc.abs() < tol && mass < tol) || hi >= GAMMA_MAX {
            return (total, inc.abs() + mass);
        }
    }
}

/// κ via the oscillatory γ-integral of `J(γ, 0)⁴`.
pub fn kappa_oscillatory() -> KappaEstimate {
    let (v, err) = kappa_oscillatory_for(&omega0_normalized);
    KappaEstimate::from_normalized(v, err, KappaMethod::Oscillatory)
}

/// Midpoint rule with `n` cells per axis for the surface form
/// `∫ w(x₁)w(x₂)w(x₃) w(x₄)/(2x₄) dx₁dx₂dx₃`, `x₄ = √(1 - x₁² - x₂² - x₃²)`.
pub fn kappa_surface_grid<W: Fn(f64) -> f64>(w: &W, n: usize) -> f64 {
    let (a, b) = SUPPORT;
    let h = (b - a) / n as f64;
    let nodes: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let x = a + (i as f64 + 0.5) * h;
            (x * x, w(x))
        })
        .collect();
    let mut acc = CompensatedSum::new();
    for &(s1, w1) in &nodes {
        if w1 == 0.0 {
            continue;
        }
        for &(s2, w2) in &nodes {
            let w12 = w1 * w2;
            if w12 == 0.0 {
                continue;
            }
            let mut row = 0.0;
            for &(s3, w3) in &nodes {
                let r = 1.0 - s1 - s2 - s3;
                if r > 0.0625 && r < 0.5625 {
                    let x4 = r.sqrt();
                    row += w3 * w(x4) / (2.0 * x4);
                }
            }
            acc.add(w12 * row);
        }
    }
    acc.value() * h * h * h
}

/// The integrand is smooth and flat to all orders at the edge of its support,
/// so the midpoint rule converges faster than any power of `1/n`.
pub fn kappa_surface_for<W: Fn(f64) -> f64>(w: &W) -> (f64, f64) {
    let coarse = kappa_surface_grid(w, 96);
    let fine = kappa_surface_grid(w, 192);
    (fine, (fine - coarse).abs())
}

/// κ via the three-dimensional surface integral.
pub fn kappa_surface() -> KappaEstimate {
    let (v, err) = kappa_surface_for(&omega0_normalized);
    KappaEstimate::from_normalized(v, err, KappaMethod::Surface)
}

/// κ̃, computed once per process.
pub fn kappa_normalized() -> f64 {
    static KAPPA: OnceLock<f64> = OnceLock::new();
    *KAPPA.get_or_init(|| kappa_surface().normalized)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent quadratures of the same integrals.
    const INT_OMEGA0: f64 = 1.19404656098713e-8;
    const INT_OMEGA0_NORMALIZED: f64 = 0.106104297075640;
    const KAPPA_NORMALIZED: f64 = 6.146438478199232e-4;

    #[test]
    fn omega_examples() {
        assert!((omega0(0.5) - 1.1253517471925911e-7).abs() < 1e-20);
        assert_eq!(omega0(0.25), 0.0);
        assert_eq!(omega0(0.75), 0.0);
        assert_eq!(omega0(0.1), 0.0);
        assert!((omega0(0.3) / 4.98910939279501e-20 - 1.0).abs() < 1e-12);
        assert!((omega0_normalized(0.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let s: f64 = gauss_legendre().iter().map(|&(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn j_at_origin_is_integral_of_weight() {
        let j = j_integral(0.0, 0.0);
        assert!(j.im.abs() < 1e-20);
        assert!((j.re - INT_OMEGA0).abs() < 1e-12);
        assert!((j_normalized(0.0, 0.0).re - INT_OMEGA0_NORMALIZED).abs() < 1e-13);
    }

    #[test]
    fn j_conjugate_symmetry_and_triangle_bound() {
        for &(g, u) in &[(1.0, 0.0), (3.7, -2.0), (120.0, 15.0), (-40.0, 3.0)] {
            let a = j_normalized(g, u);
            let b = j_normalized(-g, -u);
            assert!((a - b.conj()).norm() < 1e-13);
            assert!(a.norm() <= INT_OMEGA0_NORMALIZED + 1e-13);
        }
    }

    #[test]
    fn kappa_surface_value() {
        let k = kappa_surface();
        assert!(k.value > 0.0);
        assert!((k.normalized / KAPPA_NORMALIZED - 1.0).abs() < 1e-9);
        assert!(k.relative_error() < 1e-4);
    }

    #[test]
    fn kappa_oscillatory_value() {
        let k = kappa_oscillatory();
        assert!(k.value > 0.0);
        assert!((k.normalized / KAPPA_NORMALIZED - 1.0).abs() < 1e-6, "{k:?}");
    }

    #[test]
    fn kappa_scales_with_fourth_power() {
        let c = 1.7;
        let scaled = |t: f64| c * omega0_normalized(t);
        let (base, _) = kappa_surface_for(&omega0_normalized);
        let (k, _) = kappa_surface_for(&scaled);
        assert!((k / (c.powi(4) * base) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn surface_integrand_vanishes_off_support() {
        let narrow = |t: f64| if (0.25..0.3).contains(&t) { omega0_normalized(t) } else { 0.0 };
        // Four coordinates below 0.3 have squares summing to less than 1.
        assert_eq!(kappa_surface_grid(&narrow, 64), 0.0);
    }
}
