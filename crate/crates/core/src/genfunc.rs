//! Area-preserving maps and isotopies defined implicitly by a generating
//! function `g` with `∂²₁₂g ≤ c < 1`:
//!
//! ```text
//! f_t(x, y) = (X, Y)  ⇔  X − x = t·∂₂g(X, y),   Y − y = −t·∂₁g(X, y)
//! ```
//!
//! Fixed points of every `f_t` (`t > 0`) are exactly the critical points of `g`.

use crate::error::{Error, Result};
use crate::expr::{Jet2, ScalarField};
use crate::linalg::{Mat2, Rect, Vec2};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

pub const DEFAULT_SOLVER_TOL: f64 = 1e-12;
pub const DEFAULT_SOLVER_MAX_ITER: usize = 200;

/// Side of the grid used to spot-check the twist bound.
pub const TWIST_CHECK_GRID: usize = 64;

/// `|det hess| ≤` this is classified [`MorseType::Degenerate`].
pub const DEGENERATE_DET: f64 = 1e-8;

/// Gradient norm accepted as a critical point.
pub const CRITICAL_RESIDUAL: f64 = 1e-9;

/// The isotopy `(f_t)` generated by `t·g`.
#[derive(Clone)]
pub struct GenIsotopy {
    g: Arc<dyn ScalarField>,
    twist_bound_c: f64,
    solver_tol: f64,
    solver_max_iter: usize,
}

impl std::fmt::Debug for GenIsotopy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GenIsotopy")
            .field("g", &self.g.describe())
            .field("twist_bound_c", &self.twist_bound_c)
            .field("solver_tol", &self.solver_tol)
            .field("solver_max_iter", &self.solver_max_iter)
            .finish()
    }
}

/// Outcome of the implicit solve for `X`.
#[derive(Debug, Clone)]
pub struct Solve {
    pub x_new: f64,
    /// Jet of `g` at `(X, y)`.
    pub jet: Jet2,
    /// Residuals `|X_k − x − t·∂₂g(X_k, y)|`, one per evaluated iterate.
    pub residuals: Vec<f64>,
    /// True when plain fixed-point iteration stalled and the bracketed
    /// Newton fallback produced the answer.
    pub used_fallback: bool,
}

impl GenIsotopy {
    /// Builds the isotopy after checking `∂²₁₂g ≤ c` on a
    /// [`TWIST_CHECK_GRID`]² grid over `region`.
    pub fn new(g: Arc<dyn ScalarField>, twist_bound_c: f64, region: Rect) -> Result<Self> {
        if !(twist_bound_c < 1.0) {
            return Err(Error::InvalidArgument(format!("twist bound must be < 1, got {twist_bound_c}")));
        }
        if !region.is_valid() {
            return Err(Error::InvalidArgument("twist-check region is empty".into()));
        }
        let n = TWIST_CHECK_GRID;
        for i in 0..n {
            for j in 0..n {
                let p = Vec2::new(
                    region.x_min + region.width() * i as f64 / (n - 1) as f64,
                    region.y_min + region.height() * j as f64 / (n - 1) as f64,
                );
                let d12 = g.jet(p)?.d12();
                if !(d12 <= twist_bound_c) {
                    return Err(Error::TwistBoundViolated { at: p, value: d12, bound: twist_bound_c });
                }
            }
        }
        Ok(GenIsotopy { g, twist_bound_c, solver_tol: DEFAULT_SOLVER_TOL, solver_max_iter: DEFAULT_SOLVER_MAX_ITER })
    }

    pub fn with_solver(mut self, tol: f64, max_iter: usize) -> Self {
        self.solver_tol = tol;
        self.solver_max_iter = max_iter.max(1);
        self
    }

    pub fn g(&self) -> &Arc<dyn ScalarField> {
        &self.g
    }

    pub fn twist_bound(&self) -> f64 {
        self.twist_bound_c
    }

    pub fn solver_tol(&self) -> f64 {
        self.solver_tol
    }

    fn check_t(t: f64) -> Result<()> {
        if (0.0..=1.0).contains(&t) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("t must lie in [0, 1], got {t}")))
        }
    }

    /// Solves `X = x + t·∂₂g(X, y)`.
    ///
    /// Plain fixed-point iteration from `X₀ = x`; if the residual grows after
    /// the second iterate the solve switches to Newton on the increasing
    /// function `X − t·∂₂g(X, y)`, bracketed by the twist bound.
    pub fn solve(&self, t: f64, z: Vec2) -> Result<Solve> {
        Self::check_t(t)?;
        let (x, y) = (z.x, z.y);
        let mut xk = x;
        let mut jet = self.g.jet(Vec2::new(xk, y))?;
        let mut residuals = Vec::new();
        for k in 0..self.solver_max_iter {
            let next = x + t * jet.grad[1];
            let r = (next - xk).abs();
            residuals.push(r);
            if r <= self.solver_tol {
                return Ok(Solve { x_new: xk, jet, residuals, used_fallback: false });
            }
            if !r.is_finite() || (k >= 2 && r > residuals[k - 1]) {
                break;
            }
            xk = next;
            jet = self.g.jet(Vec2::new(xk, y))?;
        }
        self.solve_bracketed(t, z, residuals)
    }

    fn solve_bracketed(&self, t: f64, z: Vec2, mut residuals: Vec<f64>) -> Result<Solve> {
        let (x, y) = (z.x, z.y);
        let diverged = |residuals: &Vec<f64>| Error::SolverDiverged {
            iterations: residuals.len(),
            residual: residuals.last().copied().unwrap_or(f64::NAN),
        };
        let h = |xx: f64| -> Result<(f64, f64, Jet2)> {
            let j = self.g.jet(Vec2::new(xx, y))?;
            Ok((xx - x - t * j.grad[1], 1.0 - t * j.d12(), j))
        };
        let slope_floor = 1.0 - t * self.twist_bound_c.max(0.0);
        let (h0, _, _) = h(x)?;
        // h' ≥ 1 − t·c, so the root lies within |h(x)|/(1 − t·c) of x.
        let reach = h0.abs() / slope_floor * (1.0 + 1e-9) + self.solver_tol;
        let (mut lo, mut hi) = if h0 <= 0.0 { (x, x + reach) } else { (x - reach, x) };
        let (hlo, _, _) = h(lo)?;
        let (hhi, _, _) = h(hi)?;
        if !(hlo <= 0.0 && hhi >= 0.0) {
            return Err(diverged(&residuals));
        }
        let mut xk = 0.5 * (lo + hi);
        for _ in 0..self.solver_max_iter {
            let (hk, dk, jet) = h(xk)?;
            let r = hk.abs();
            residuals.push(r);
            if r <= self.solver_tol {
                return Ok(Solve { x_new: xk, jet, residuals, used_fallback: true });
            }
            if hk < 0.0 {
                lo = xk;
            } else {
                hi = xk;
            }
            let newton = xk - hk / dk;
            xk = if dk > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if hi - lo <= f64::EPSILON * xk.abs().max(1.0) {
                let (hk, _, jet) = h(xk)?;
                if hk.abs() <= self.solver_tol {
                    residuals.push(hk.abs());
                    return Ok(Solve { x_new: xk, jet, residuals, used_fallback: true });
                }
                break;
            }
        }
        Err(diverged(&residuals))
    }

    /// `f_t(z)`.
    pub fn gf_apply(&self, t: f64, z: Vec2) -> Result<Vec2> {
        if t == 0.0 {
            return Ok(z);
        }
        let s = self.solve(t, z)?;
        Ok(Vec2::new(s.x_new, z.y - t * s.jet.grad[0]))
    }

    /// Closed-form Jacobian of `f_t` at `z`.
    pub fn gf_jacobian(&self, t: f64, z: Vec2) -> Result<Mat2> {
        if t == 0.0 {
            return Ok(Mat2::IDENTITY);
        }
        let s = self.solve(t, z)?;
        Ok(jacobian_from_hessian(t, &s.jet))
    }

    /// Two-phase isotopy `I′`: horizontal from `z` to `(X, y)` for
    /// `t ≤ 1/2`, then vertical to `(X, Y) = f₁(z)`.
    pub fn gf_alt_apply(&self, t: f64, z: Vec2) -> Result<Vec2> {
        Self::check_t(t)?;
        if t == 0.0 {
            return Ok(z);
        }
        let fz = self.gf_apply(1.0, z)?;
        Ok(alt_point(t, z, fz))
    }

    /// Jacobian of the two-phase isotopy at `z`.
    pub fn gf_alt_jacobian(&self, t: f64, z: Vec2) -> Result<Mat2> {
        Self::check_t(t)?;
        let j = self.gf_jacobian(1.0, z)?;
        Ok(alt_jacobian(t, &j))
    }

    /// Critical points of `g` inside `region` (see [`find_critical_points`]).
    pub fn find_critical_points(&self, region: Rect, grid_n: usize) -> Result<Vec<CriticalPoint>> {
        find_critical_points(self.g.as_ref(), region, grid_n)
    }
}

/// Point of the two-phase path at time `t`, given `z` and `f₁(z)`.
pub fn alt_point(t: f64, z: Vec2, fz: Vec2) -> Vec2 {
    if t >= 1.0 {
        fz
    } else if t < 0.5 {
        Vec2::new(z.x + 2.0 * t * (fz.x - z.x), z.y)
    } else {
        Vec2::new(fz.x, z.y + (2.0 * t - 1.0) * (fz.y - z.y))
    }
}

/// Jacobian of the two-phase path at time `t` in terms of the Jacobian of `f₁`.
pub fn alt_jacobian(t: f64, j: &Mat2) -> Mat2 {
    if t <= 0.5 {
        let s = 2.0 * t;
        Mat2::new(1.0 + s * (j.a - 1.0), s * j.b, 0.0, 1.0)
    } else {
        let s = 2.0 * t - 1.0;
        Mat2::new(j.a, j.b, s * j.c, 1.0 + s * (j.d - 1.0))
    }
}

/// `(1/(1−t g₁₂))·[[1, t g₂₂], [−t g₁₁, −t² g₁₁ g₂₂ + (1 − t g₁₂)²]]`,
/// with second derivatives taken at `(X, y)`.
pub fn jacobian_from_hessian(t: f64, jet: &Jet2) -> Mat2 {
    let p = t * jet.hess[0][0];
    let s = t * jet.hess[0][1];
    let q = t * jet.hess[1][1];
    let k = 1.0 / (1.0 - s);
    Mat2::new(k, k * q, -k * p, k * (-p * q + (1.0 - s) * (1.0 - s)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MorseType {
    Min,
    Max,
    Saddle,
    Degenerate,
}

impl MorseType {
    pub fn from_hessian(h: &Mat2) -> Self {
        let det = h.det();
        if det.abs() <= DEGENERATE_DET {
            MorseType::Degenerate
        } else if det < 0.0 {
            MorseType::Saddle
        } else if h.trace() > 0.0 {
            MorseType::Min
        } else {
            MorseType::Max
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub location: Vec2,
    pub gradient_residual: f64,
    pub hessian: Mat2,
    pub morse_type: MorseType,
}

const NEWTON_MAX_ITER: usize = 200;

fn hessian_of(j: &Jet2) -> Mat2 {
    Mat2::from_rows(j.hess)
}

/// Newton on `∇g` with a vanishing Levenberg–Marquardt shift so that
/// singular Hessians still give a least-squares step. Iterates until the
/// step stalls, not merely until the residual is small, so degenerate
/// critical points (linear convergence) are still located tightly.
fn newton_critical(g: &dyn ScalarField, seed: Vec2, max_step: f64) -> Option<(Vec2, Jet2)> {
    let mut p = seed;
    let mut best: Option<(Vec2, Jet2, f64)> = None;
    for _ in 0..NEWTON_MAX_ITER {
        let jet = g.jet(p).ok()?;
        let grad = Vec2::new(jet.grad[0], jet.grad[1]);
        let res = grad.norm();
        if best.as_ref().is_none_or(|b| res < b.2) {
            best = Some((p, jet, res));
        }
        if res == 0.0 {
            break;
        }
        let h = hessian_of(&jet);
        // Normal equations (HᵀH + μI) s = −Hᵀ∇g.
        let hth = Mat2::new(h.a * h.a + h.c * h.c, h.a * h.b + h.c * h.d, h.a * h.b + h.c * h.d, h.b * h.b + h.d * h.d);
        let mu = 1e-14 * hth.max_abs().max(1e-300);
        let shifted = Mat2::new(hth.a + mu, hth.b, hth.c, hth.d + mu);
        let rhs = Vec2::new(-(h.a * grad.x + h.c * grad.y), -(h.b * grad.x + h.d * grad.y));
        let Some(inv) = shifted.inverse() else { break };
        let mut step = inv.apply(rhs);
        if !step.is_finite() {
            break;
        }
        let len = step.norm();
        if len > max_step {
            step = step.scale(max_step / len);
        }
        p += step;
        if len <= 1e-14 * p.norm().max(1.0) {
            break;
        }
    }
    let (p, jet, res) = best?;
    (res <= CRITICAL_RESIDUAL).then_some((p, jet))
}

/// Critical points of `g` in `region`, by Newton refinement of grid seeds.
///
/// Seeds are the centers of cells where each gradient component takes both
/// signs (or vanishes) at the corners, plus grid nodes where `|∇g|` is a
/// local minimum; the latter catch critical points where a component
/// touches zero without changing sign. Results are deduplicated at 1e−6
/// and sorted by `(y, x)`. Completeness is only relative to the grid.
pub fn find_critical_points(g: &dyn ScalarField, region: Rect, grid_n: usize) -> Result<Vec<CriticalPoint>> {
    if grid_n < 8 {
        return Err(Error::InvalidArgument(format!("grid_n must be at least 8, got {grid_n}")));
    }
    if !region.is_valid() {
        return Err(Error::InvalidArgument("search region is empty".into()));
    }
    let n = grid_n;
    let dx = region.width() / n as f64;
    let dy = region.height() / n as f64;
    let node = |i: usize, j: usize| Vec2::new(region.x_min + dx * i as f64, region.y_min + dy * j as f64);
    let mut grads = vec![None; (n + 1) * (n + 1)];
    for i in 0..=n {
        for j in 0..=n {
            grads[i * (n + 1) + j] = g.gradient(node(i, j)).ok();
        }
    }
    let at = |i: usize, j: usize| grads[i * (n + 1) + j];

    let mut seeds = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let corners = [at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)];
            if corners.iter().any(Option::is_none) {
                continue;
            }
            let corners: Vec<Vec2> = corners.into_iter().flatten().collect();
            let spans = |f: fn(&Vec2) -> f64| {
                let lo = corners.iter().map(f).fold(f64::INFINITY, f64::min);
                let hi = corners.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
                lo <= 0.0 && hi >= 0.0
            };
            if spans(|v| v.x) && spans(|v| v.y) {
                seeds.push(Vec2::new(region.x_min + dx * (i as f64 + 0.5), region.y_min + dy * (j as f64 + 0.5)));
            }
        }
    }
    for i in 1..n {
        for j in 1..n {
            let Some(c) = at(i, j) else { continue };
            let m = c.norm();
            let is_min =
                (i - 1..=i + 1).all(|a| (j - 1..=j + 1).all(|b| (a == i && b == j) || at(a, b).is_some_and(|v| m < v.norm())));
            if is_min {
                seeds.push(node(i, j));
            }
        }
    }

    let max_step = 4.0 * dx.max(dy);
    let mut found: Vec<CriticalPoint> = Vec::new();
    for seed in seeds {
        let Some((p, jet)) = newton_critical(g, seed, max_step) else { continue };
        if !region.contains(p) {
            continue;
        }
        let residual = Vec2::new(jet.grad[0], jet.grad[1]).norm();
        if let Some(dup) = found.iter_mut().find(|c| (c.location - p).norm() < 1e-6) {
            if residual < dup.gradient_residual {
                dup.location = p;
                dup.gradient_residual = residual;
                dup.hessian = hessian_of(&jet);
                dup.morse_type = MorseType::from_hessian(&dup.hessian);
            }
            continue;
        }
        let hessian = hessian_of(&jet);
        found.push(CriticalPoint {
            location: p,
            gradient_residual: residual,
            hessian,
            morse_type: MorseType::from_hessian(&hessian),
        });
    }
    found.sort_by(|a, b| a.location.y.total_cmp(&b.location.y).then(a.location.x.total_cmp(&b.location.x)));
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn iso(src: &str, c: f64) -> GenIsotopy {
        let g: Arc<dyn ScalarField> = Arc::new(parse_expr(src).unwrap());
        GenIsotopy::new(g, c, Rect::new(-2.0, 2.0, -2.0, 2.0)).unwrap()
    }

    #[test]
    fn zero_function_is_identity() {
        let i = iso("0", 0.0);
        for t in [0.0, 0.3, 1.0] {
            assert_eq!(i.gf_apply(t, Vec2::new(3.0, -2.0)).unwrap(), Vec2::new(3.0, -2.0));
            assert_eq!(i.gf_jacobian(t, Vec2::new(3.0, -2.0)).unwrap(), Mat2::IDENTITY);
        }
    }

    #[test]
    fn shear_from_half_square() {
        let i = iso("y^2/2", 0.0);
        let z = i.gf_apply(1.0, Vec2::new(0.25, 0.75)).unwrap();
        assert!((z - Vec2::new(1.0, 0.75)).norm() < 1e-12);
    }

    #[test]
    fn quadratic_figure_map() {
        let i = iso("x^2+y^2", 0.0);
        let z = i.gf_apply(1.0, Vec2::new(1.0, 0.0)).unwrap();
        assert!((z - Vec2::new(1.0, -2.0)).norm() < 1e-12);
    }

    #[test]
    fn half_quadratic_jacobian() {
        let i = iso("(x^2+y^2)/2", 0.0);
        for z in [Vec2::new(0.3, -0.7), Vec2::new(1.5, 0.2)] {
            let j = i.gf_jacobian(1.0, z).unwrap();
            assert!(j.sub(&Mat2::new(1.0, 1.0, -1.0, 0.0)).max_abs() < 1e-15);
            assert!((j.det() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn alternate_isotopy_phases() {
        let i = iso("(x^2+y^2)/2", 0.0);
        let z = Vec2::new(1.0, 0.0);
        assert_eq!(i.gf_alt_apply(0.0, z).unwrap(), z);
        assert!((i.gf_alt_apply(0.5, z).unwrap() - Vec2::new(1.0, 0.0)).norm() < 1e-15);
        assert!((i.gf_alt_apply(1.0, z).unwrap() - Vec2::new(1.0, -1.0)).norm() < 1e-15);
        let s = iso("y^2/2", 0.0);
        let p = s.gf_alt_apply(0.25, Vec2::new(0.0, 1.0)).unwrap();
        assert!((p - Vec2::new(0.5, 1.0)).norm() < 1e-15);
        assert_eq!(s.gf_alt_apply(1.0, Vec2::new(0.0, 1.0)).unwrap(), s.gf_apply(1.0, Vec2::new(0.0, 1.0)).unwrap());
    }

    #[test]
    fn twist_bound_is_enforced() {
        let g: Arc<dyn ScalarField> = Arc::new(parse_expr("x*y").unwrap());
        let err = GenIsotopy::new(g.clone(), 0.5, Rect::new(-1.0, 1.0, -1.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::TwistBoundViolated { .. }));
        assert!(GenIsotopy::new(g, 1.0, Rect::new(-1.0, 1.0, -1.0, 1.0)).is_err());
    }

    #[test]
    fn strongly_negative_twist_uses_fallback() {
        // ∂²₁₂g = −3: plain iteration X ← x − 3tX oscillates and grows.
        let i = iso("-3*x*y", -3.0);
        let s = i.solve(1.0, Vec2::new(1.0, 1.0)).unwrap();
        assert!(s.used_fallback);
        assert!((s.x_new - 0.25).abs() < 1e-12);
        let z = i.gf_apply(1.0, Vec2::new(1.0, 1.0)).unwrap();
        // Y = y + 3X·... : ∂₁g = −3y, Y = y + 3t·y = 4
        assert!((z - Vec2::new(0.25, 4.0)).norm() < 1e-12);
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let i = iso("x^2/3 + 0.4*x*y - y^3/5 + sin(x)/4", 0.9);
        let z = Vec2::new(0.3, -0.4);
        let h = 1e-6;
        for t in [0.25, 1.0] {
            let j = i.gf_jacobian(t, z).unwrap();
            let fx =
                (i.gf_apply(t, z + Vec2::new(h, 0.0)).unwrap() - i.gf_apply(t, z - Vec2::new(h, 0.0)).unwrap()).scale(0.5 / h);
            let fy =
                (i.gf_apply(t, z + Vec2::new(0.0, h)).unwrap() - i.gf_apply(t, z - Vec2::new(0.0, h)).unwrap()).scale(0.5 / h);
            assert!((j.a - fx.x).abs() < 1e-7 && (j.c - fx.y).abs() < 1e-7);
            assert!((j.b - fy.x).abs() < 1e-7 && (j.d - fy.y).abs() < 1e-7);
        }
    }

    #[test]
    fn critical_points_of_quadratics() {
        let r = Rect::new(-1.0, 1.0, -1.0, 1.0);
        let min = find_critical_points(&parse_expr("x^2+y^2").unwrap(), r, 16).unwrap();
        assert_eq!(min.len(), 1);
        assert!(min[0].location.norm() < 1e-12);
        assert_eq!(min[0].morse_type, MorseType::Min);
        let saddle = find_critical_points(&parse_expr("x^2-y^2").unwrap(), r, 16).unwrap();
        assert_eq!(saddle.len(), 1);
        assert_eq!(saddle[0].morse_type, MorseType::Saddle);
        let max = find_critical_points(&parse_expr("-(x-0.3)^2-2*(y+0.1)^2").unwrap(), r, 8).unwrap();
        assert_eq!(max[0].morse_type, MorseType::Max);
        assert!((max[0].location - Vec2::new(0.3, -0.1)).norm() < 1e-12);
        assert!(find_critical_points(&parse_expr("x").unwrap(), r, 4).is_err());
        assert!(find_critical_points(&parse_expr("x").unwrap(), r, 8).unwrap().is_empty());
    }

    #[test]
    fn several_critical_points_are_deduplicated() {
        // cos(πx)cos(πy) on [−1.2, 1.2]²: critical points at integer and half-integer lattices.
        let g = parse_expr("cos(pi*x)*cos(pi*y)").unwrap();
        let pts = find_critical_points(&g, Rect::new(-1.2, 1.2, -1.2, 1.2), 24).unwrap();
        // (i, j) with i, j ∈ {−1, 0, 1} plus (±1/2, ±1/2)
        assert_eq!(pts.len(), 13);
        for w in pts.windows(2) {
            assert!((w[0].location - w[1].location).norm() > 1e-6);
        }
        let saddles = pts.iter().filter(|c| c.morse_type == MorseType::Saddle).count();
        assert_eq!(saddles, 4);
    }
}
