use std::ops::{Add, Mul, Neg, Sub};

/// Second-order jet of a scalar function of two variables: value, gradient
/// and (symmetric) Hessian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub grad: [f64; 2],
    pub hess: [[f64; 2]; 2],
}

impl Jet2 {
    pub fn constant(v: f64) -> Self {
        Jet2 { value: v, grad: [0.0; 2], hess: [[0.0; 2]; 2] }
    }

    pub fn var_x(x: f64) -> Self {
        Jet2 { value: x, grad: [1.0, 0.0], hess: [[0.0; 2]; 2] }
    }

    pub fn var_y(y: f64) -> Self {
        Jet2 { value: y, grad: [0.0, 1.0], hess: [[0.0; 2]; 2] }
    }

    /// Builds a jet from explicit partial derivatives.
    pub fn from_parts(value: f64, d1: f64, d2: f64, d11: f64, d12: f64, d22: f64) -> Self {
        Jet2 { value, grad: [d1, d2], hess: [[d11, d12], [d12, d22]] }
    }

    pub fn d12(&self) -> f64 {
        self.hess[0][1]
    }

    /// Applies a scalar function `f` with `f(u) = f0`, `f'(u) = f1`, `f''(u) = f2`.
    fn chain(&self, f0: f64, f1: f64, f2: f64) -> Jet2 {
        let g = self.grad;
        let h = self.hess;
        let off = f2 * g[0] * g[1] + f1 * h[0][1];
        Jet2 {
            value: f0,
            grad: [f1 * g[0], f1 * g[1]],
            hess: [[f2 * g[0] * g[0] + f1 * h[0][0], off], [off, f2 * g[1] * g[1] + f1 * h[1][1]]],
        }
    }

    pub fn recip(&self) -> Jet2 {
        let u = self.value;
        let r = 1.0 / u;
        self.chain(r, -r * r, 2.0 * r * r * r)
    }

    pub fn powi(&self, n: i32) -> Jet2 {
        let u = self.value;
        match n {
            0 => Jet2::constant(1.0),
            1 => *self,
            _ => {
                let nf = n as f64;
                self.chain(u.powi(n), nf * u.powi(n - 1), nf * (nf - 1.0) * u.powi(n - 2))
            }
        }
    }

    pub fn sin(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Jet2 {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn exp(&self) -> Jet2 {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    pub fn ln(&self) -> Jet2 {
        let u = self.value;
        self.chain(u.ln(), 1.0 / u, -1.0 / (u * u))
    }

    pub fn sqrt(&self) -> Jet2 {
        let r = self.value.sqrt();
        self.chain(r, 0.5 / r, -0.25 / (r * self.value))
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            value: self.value + o.value,
            grad: [self.grad[0] + o.grad[0], self.grad[1] + o.grad[1]],
            hess: [
                [self.hess[0][0] + o.hess[0][0], self.hess[0][1] + o.hess[0][1]],
                [self.hess[1][0] + o.hess[1][0], self.hess[1][1] + o.hess[1][1]],
            ],
        }
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 {
            value: -self.value,
            grad: [-self.grad[0], -self.grad[1]],
            hess: [[-self.hess[0][0], -self.hess[0][1]], [-self.hess[1][0], -self.hess[1][1]]],
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        self + (-o)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        let (a, b) = (self, o);
        let off = a.value * b.hess[0][1] + a.grad[0] * b.grad[1] + a.grad[1] * b.grad[0] + a.hess[0][1] * b.value;
        Jet2 {
            value: a.value * b.value,
            grad: [a.value * b.grad[0] + a.grad[0] * b.value, a.value * b.grad[1] + a.grad[1] * b.value],
            hess: [
                [a.value * b.hess[0][0] + 2.0 * a.grad[0] * b.grad[0] + a.hess[0][0] * b.value, off],
                [off, a.value * b.hess[1][1] + 2.0 * a.grad[1] * b.grad[1] + a.hess[1][1] * b.value],
            ],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_rule_is_symmetric() {
        let x = Jet2::var_x(1.5);
        let y = Jet2::var_y(-0.5);
        let p = (x * y).sin() * x.exp();
        assert_eq!(p.hess[0][1], p.hess[1][0]);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let x = Jet2::var_x(1.3) + Jet2::var_y(0.2);
        let a = x.powi(3);
        let b = x * x * x;
        assert!((a.value - b.value).abs() < 1e-14);
        assert!((a.hess[0][1] - b.hess[0][1]).abs() < 1e-13);
        let r = x.powi(-1);
        let q = x.recip();
        assert!((r.hess[1][1] - q.hess[1][1]).abs() < 1e-13);
    }
}
