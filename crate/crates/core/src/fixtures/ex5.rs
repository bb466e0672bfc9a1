//! The generating function of the sin² example and its pinned `φ`.
//!
//! `φ(s) = A·sin³(πs)·cos(πs − π/4)·(a + (1 + cos 2π(s − 0.9))⁴)` is a
//! trigonometric polynomial of degree 6 in `e^{2πis}`. The constant `a`
//! removes the mean, so `∫₀¹φ = 0`; `A` scales `max|φ|` to `0.9/(2π)`.
//! The last factor concentrates the positive lobe near `s = 0.9 − 1`, which
//! keeps the negative lobe on `(3/4, 1)` under `s·sin²(π/s)`.
//!
//! Everything the engine needs (`φ`, `φ′`, `Φ = ∫₀^yφ`) is evaluated from
//! the Fourier coefficients, so the jet is exact up to rounding. The value
//! `∫₀^y s·sin²(π/s) ds` is tabulated once by quadrature.

use crate::error::Result;
use crate::expr::{Jet2, ScalarField};
use crate::linalg::Vec2;
use std::f64::consts::{FRAC_PI_4, PI, TAU};
use std::sync::OnceLock;

pub const PHI_MEAN_SHIFT: f64 = 0.03686868120796642;
pub const PHI_SCALE: f64 = 0.32906115274639575;
const HARMONICS: usize = 6;
const DFT_POINTS: usize = 64;

/// `φ` before the scale `A` is applied.
fn phi_unscaled(s: f64) -> f64 {
    let bump = (1.0 + (TAU * (s - 0.9)).cos()).powi(4);
    (PI * s).sin().powi(3) * (PI * s - FRAC_PI_4).cos() * (PHI_MEAN_SHIFT + bump)
}

/// Closed-form reference for `φ`, used to cross-check the Fourier form.
pub fn phi_direct(s: f64) -> f64 {
    PHI_SCALE * phi_unscaled(s)
}

/// `φ(s) = Σ c_k cos 2πks + d_k sin 2πks`, `k = 1..6`.
#[derive(Debug, Clone)]
pub struct Phi {
    pub cos: [f64; HARMONICS],
    pub sin: [f64; HARMONICS],
    /// Constant Fourier term; zero up to rounding by the choice of `a`.
    pub mean: f64,
}

impl Phi {
    fn compute() -> Phi {
        let samples: Vec<f64> = (0..DFT_POINTS).map(|j| phi_direct(j as f64 / DFT_POINTS as f64)).collect();
        let mut cos = [0.0; HARMONICS];
        let mut sin = [0.0; HARMONICS];
        for k in 1..=HARMONICS {
            let (mut c, mut d) = (0.0, 0.0);
            for (j, v) in samples.iter().enumerate() {
                let arg = TAU * (k * j) as f64 / DFT_POINTS as f64;
                c += v * arg.cos();
                d += v * arg.sin();
            }
            cos[k - 1] = 2.0 * c / DFT_POINTS as f64;
            sin[k - 1] = 2.0 * d / DFT_POINTS as f64;
        }
        let mean = samples.iter().sum::<f64>() / DFT_POINTS as f64;
        Phi { cos, sin, mean }
    }

    pub fn get() -> &'static Phi {
        static PHI: OnceLock<Phi> = OnceLock::new();
        PHI.get_or_init(Phi::compute)
    }

    /// `Σ_k c_k·a(w_k s) + d_k·b(w_k s)` with `w_k = 2πk`.
    fn series(&self, s: f64, a: impl Fn(f64, f64, f64) -> f64, b: impl Fn(f64, f64, f64) -> f64) -> f64 {
        let mut total = 0.0;
        for k in 0..HARMONICS {
            let w = TAU * (k + 1) as f64;
            let (sn, cs) = (w * s).sin_cos();
            total += self.cos[k] * a(w, sn, cs) + self.sin[k] * b(w, sn, cs);
        }
        total
    }

    pub fn value(&self, s: f64) -> f64 {
        self.series(s, |_, _, cs| cs, |_, sn, _| sn)
    }

    pub fn derivative(&self, s: f64) -> f64 {
        self.series(s, |w, sn, _| -w * sn, |w, _, cs| w * cs)
    }

    /// `Φ(y) = ∫₀^y φ`.
    pub fn integral(&self, y: f64) -> f64 {
        self.series(y, |w, sn, _| sn / w, |w, _, cs| (1.0 - cs) / w)
    }
}

/// Unit intervals of `u = 1/s` tabulated for the oscillatory part of `W`.
const W_TAIL_INTERVALS: usize = 4096;
const W_SIMPSON_STEPS: usize = 1024;

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, steps: usize) -> f64 {
    let h = (b - a) / steps as f64;
    let mut acc = f(a) + f(b);
    for i in 1..steps {
        acc += f(a + h * i as f64) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

fn oscillatory(u: f64) -> f64 {
    (TAU * u).cos() / (2.0 * u * u * u)
}

/// `suffix[n − 1] = ∫_n^∞ cos(2πu)/(2u³) du` for `n = 1..=4096`; the part
/// beyond 4097 is below 1e−15 and dropped.
fn tail_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut suffix = vec![0.0; W_TAIL_INTERVALS + 1];
        for n in (1..=W_TAIL_INTERVALS).rev() {
            let piece = simpson(oscillatory, n as f64, n as f64 + 1.0, W_SIMPSON_STEPS);
            suffix[n - 1] = suffix[n] + piece;
        }
        suffix
    })
}

/// `W(y) = ∫₀^y s·sin²(π/s) ds = y²/4 − ∫_{1/y}^∞ cos(2πu)/(2u³) du`.
pub fn w_integral(y: f64) -> f64 {
    if y <= 0.0 {
        return 0.0;
    }
    let y = y.min(1.0);
    let u0 = 1.0 / y;
    let table = tail_table();
    let n0 = u0.ceil();
    let tail = if n0 as usize > W_TAIL_INTERVALS { 0.0 } else { table[n0 as usize - 1] };
    let head = if n0 > u0 { simpson(oscillatory, u0, n0, W_SIMPSON_STEPS) } else { 0.0 };
    0.25 * y * y - head - tail
}

/// `g(x, y) = W(y) + sin²(πx)·Φ(y)` on `0 < y < 1`, constant below and above.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sin2Field;

impl ScalarField for Sin2Field {
    fn jet(&self, p: Vec2) -> Result<Jet2> {
        let (x, y) = (p.x, p.y);
        if y <= 0.0 {
            return Ok(Jet2::constant(0.0));
        }
        if y >= 1.0 {
            return Ok(Jet2::constant(w_integral(1.0)));
        }
        let phi = Phi::get();
        let (f, df, big) = (phi.value(y), phi.derivative(y), phi.integral(y));
        let sx = (PI * x).sin();
        let s2 = sx * sx;
        let (sin2x, cos2x) = (TAU * x).sin_cos();
        let (su, cu) = (PI / y).sin_cos();
        let d1 = PI * sin2x * big;
        let d2 = y * su * su + f * s2;
        let d11 = 2.0 * PI * PI * cos2x * big;
        let d12 = PI * sin2x * f;
        let d22 = su * su - (PI / y) * (2.0 * su * cu) + df * s2;
        Ok(Jet2::from_parts(w_integral(y) + s2 * big, d1, d2, d11, d12, d22))
    }

    fn describe(&self) -> String {
        "∫₀^y s·sin²(π/s) + φ(s)·sin²(πx) ds".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        simpson(f, a, b, 20_000)
    }

    #[test]
    fn fourier_form_reproduces_the_formula() {
        let phi = Phi::get();
        assert!(phi.mean.abs() < 1e-15);
        for k in 0..=1000 {
            let s = k as f64 / 1000.0;
            assert!((phi.value(s) - phi_direct(s)).abs() < 1e-14, "s = {s}");
        }
    }

    #[test]
    fn derivative_and_integral_are_consistent() {
        let phi = Phi::get();
        for &s in &[0.1, 0.37, 0.75, 0.93] {
            let h = 1e-6;
            let fd = (phi.value(s + h) - phi.value(s - h)) / (2.0 * h);
            assert!((phi.derivative(s) - fd).abs() < 1e-8);
            let q = quad(|t| phi.value(t), 0.0, s);
            assert!((phi.integral(s) - q).abs() < 1e-12);
        }
        assert!(phi.integral(1.0).abs() < 1e-15);
    }

    #[test]
    fn w_matches_direct_quadrature_away_from_zero() {
        let f = |s: f64| s * (PI / s).sin().powi(2);
        let base = w_integral(0.5);
        for &y in &[0.6, 0.8, 1.0] {
            let q = quad(f, 0.5, y);
            assert!((w_integral(y) - base - q).abs() < 1e-10, "y = {y}: {} vs {}", w_integral(y) - base, q);
        }
    }

    #[test]
    fn flat_regions() {
        let g = Sin2Field;
        assert_eq!(g.jet(Vec2::new(0.3, -0.2)).unwrap(), Jet2::constant(0.0));
        let top = g.jet(Vec2::new(0.3, 1.5)).unwrap();
        assert_eq!(top.grad, [0.0, 0.0]);
        // Derivatives vanish continuously at y = 1.
        let near = g.jet(Vec2::new(0.3, 1.0 - 1e-7)).unwrap();
        assert!(near.grad[0].abs() < 1e-12 && near.grad[1].abs() < 1e-12);
    }
}
