//! Scalar expressions in `x` and `y` with exact second-order derivatives.
//!
//! Grammar (lowest to highest precedence):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' ['-'] INTEGER)?
//! primary := NUMBER | 'x' | 'y' | 'pi' | '(' expr ')'
//!          | FUNC '(' expr ')'             FUNC in sin cos exp log sqrt abs
//!          | ('min' | 'max') '(' expr ',' expr ')'
//!          | 'select' '(' expr CMP expr ',' expr ',' expr ')'   CMP in < <= > >=
//! ```
//!
//! Comparisons are only legal as the condition of `select`.

mod jet;
mod parse;

pub use jet::Jet2;
pub use parse::parse_expr;

use crate::error::Result;
use crate::linalg::Vec2;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func2 {
    Min,
    Max,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Pi,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
    Call2(Func2, Box<Expr>, Box<Expr>),
    /// `select(lhs cmp rhs, then, otherwise)`.
    Select {
        lhs: Box<Expr>,
        cmp: Cmp,
        rhs: Box<Expr>,
        then: Box<Expr>,
        otherwise: Box<Expr>,
    },
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }
}

impl Func2 {
    pub fn name(self) -> &'static str {
        match self {
            Func2::Min => "min",
            Func2::Max => "max",
        }
    }
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
        }
    }

    fn holds(self, a: f64, b: f64) -> bool {
        match self {
            Cmp::Lt => a < b,
            Cmp::Le => a <= b,
            Cmp::Gt => a > b,
            Cmp::Ge => a >= b,
        }
    }
}

impl Expr {
    pub fn num(v: f64) -> Expr {
        Expr::Num(v)
    }

    pub fn x() -> Expr {
        Expr::Var(Var::X)
    }

    pub fn y() -> Expr {
        Expr::Var(Var::Y)
    }

    pub fn binary(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn pow(base: Expr, n: i32) -> Expr {
        Expr::Pow(Box::new(base), n)
    }

    /// Evaluates value, gradient and Hessian at `(x, y)`.
    ///
    /// `select`, `min`, `max` and `abs` differentiate the branch they pick;
    /// on an exact tie the first branch wins (`abs` treats 0 as nonnegative).
    pub fn eval_jet2(&self, x: f64, y: f64) -> Result<Jet2> {
        let at = (x, y);
        match self {
            Expr::Num(v) => Ok(Jet2::constant(*v)),
            Expr::Pi => Ok(Jet2::constant(std::f64::consts::PI)),
            Expr::Var(Var::X) => Ok(Jet2::var_x(x)),
            Expr::Var(Var::Y) => Ok(Jet2::var_y(y)),
            Expr::Neg(e) => Ok(-e.eval_jet2(x, y)?),
            Expr::Binary(op, l, r) => {
                let a = l.eval_jet2(x, y)?;
                let b = r.eval_jet2(x, y)?;
                match op {
                    BinOp::Add => Ok(a + b),
                    BinOp::Sub => Ok(a - b),
                    BinOp::Mul => Ok(a * b),
                    BinOp::Div => {
                        if b.value == 0.0 {
                            return Err(self.domain_error(at));
                        }
                        Ok(a * b.recip())
                    }
                }
            }
            Expr::Pow(base, n) => {
                let u = base.eval_jet2(x, y)?;
                if *n < 0 && u.value == 0.0 {
                    return Err(self.domain_error(at));
                }
                Ok(u.powi(*n))
            }
            Expr::Call(f, arg) => {
                let u = arg.eval_jet2(x, y)?;
                match f {
                    Func::Sin => Ok(u.sin()),
                    Func::Cos => Ok(u.cos()),
                    Func::Exp => Ok(u.exp()),
                    Func::Log => {
                        if u.value <= 0.0 {
                            return Err(self.domain_error(at));
                        }
                        Ok(u.ln())
                    }
                    Func::Sqrt => {
                        if u.value <= 0.0 {
                            return Err(self.domain_error(at));
                        }
                        Ok(u.sqrt())
                    }
                    Func::Abs => Ok(if u.value >= 0.0 { u } else { -u }),
                }
            }
            Expr::Call2(f, l, r) => {
                let a = l.eval_jet2(x, y)?;
                let b = r.eval_jet2(x, y)?;
                let take_first = match f {
                    Func2::Min => a.value <= b.value,
                    Func2::Max => a.value >= b.value,
                };
                Ok(if take_first { a } else { b })
            }
            Expr::Select { lhs, cmp, rhs, then, otherwise } => {
                let a = lhs.eval_jet2(x, y)?.value;
                let b = rhs.eval_jet2(x, y)?.value;
                if a == b || cmp.holds(a, b) {
                    then.eval_jet2(x, y)
                } else {
                    otherwise.eval_jet2(x, y)
                }
            }
        }
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        Ok(self.eval_jet2(x, y)?.value)
    }

    fn domain_error(&self, at: (f64, f64)) -> crate::error::Error {
        crate::error::Error::Domain { expr: self.to_string(), x: at.0, y: at.1 }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Var(Var::X) => f.write_str("x"),
            Expr::Var(Var::Y) => f.write_str("y"),
            Expr::Pi => f.write_str("pi"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                write_child(f, e, e.precedence() < 3)
            }
            Expr::Binary(op, l, r) => {
                let p = self.precedence();
                write_child(f, l, l.precedence() < p)?;
                let sym = match op {
                    BinOp::Add => " + ",
                    BinOp::Sub => " - ",
                    BinOp::Mul => " * ",
                    BinOp::Div => " / ",
                };
                f.write_str(sym)?;
                write_child(f, r, r.precedence() <= p)
            }
            Expr::Pow(base, n) => {
                write_child(f, base, base.precedence() < 5)?;
                write!(f, "^{n}")
            }
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
            Expr::Call2(func, a, b) => write!(f, "{}({a}, {b})", func.name()),
            Expr::Select { lhs, cmp, rhs, then, otherwise } => {
                write!(f, "select({lhs} {} {rhs}, {then}, {otherwise})", cmp.symbol())
            }
        }
    }
}

/// A twice-differentiable function of the plane, evaluated as a jet.
pub trait ScalarField: Send + Sync {
    fn jet(&self, p: Vec2) -> Result<Jet2>;

    /// Human-readable formula, echoed in reports.
    fn describe(&self) -> String;

    fn gradient(&self, p: Vec2) -> Result<Vec2> {
        let j = self.jet(p)?;
        Ok(Vec2::new(j.grad[0], j.grad[1]))
    }
}

impl ScalarField for Expr {
    fn jet(&self, p: Vec2) -> Result<Jet2> {
        self.eval_jet2(p.x, p.y)
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn fd_grad(e: &Expr, x: f64, y: f64, h: f64) -> [f64; 2] {
        let f = |a: f64, b: f64| e.eval(a, b).unwrap();
        [(f(x + h, y) - f(x - h, y)) / (2.0 * h), (f(x, y + h) - f(x, y - h)) / (2.0 * h)]
    }

    #[test]
    fn polynomial_jet() {
        let e = parse_expr("x^2+y^2").unwrap();
        let j = e.eval_jet2(1.0, 2.0).unwrap();
        assert_eq!(j.value, 5.0);
        assert_eq!(j.grad, [2.0, 4.0]);
        assert_eq!(j.hess, [[2.0, 0.0], [0.0, 2.0]]);
    }

    #[test]
    fn bilinear_mixed_partial() {
        let j = parse_expr("x*y").unwrap().eval_jet2(3.0, 5.0).unwrap();
        assert_eq!(j.hess[0][1], 1.0);
        assert_eq!(j.hess[1][0], 1.0);
    }

    #[test]
    fn oscillating_term_matches_finite_differences() {
        let e = parse_expr("y*sin(pi/y)^2").unwrap();
        for x in [-1.0, 0.0, 0.37] {
            let j = e.eval_jet2(x, 0.5).unwrap();
            assert!(j.value.abs() < 1e-15);
            let fd = fd_grad(&e, x, 0.5, 1e-6);
            assert!((j.grad[0] - fd[0]).abs() < 1e-6);
            assert!((j.grad[1] - fd[1]).abs() < 1e-6);
        }
    }

    #[test]
    fn transcendental_second_derivatives() {
        // d²/dx² exp(sin x) = exp(sin x)(cos² x − sin x)
        let e = parse_expr("exp(sin(x)) + log(y) * sqrt(y)").unwrap();
        let (x, y) = (0.7f64, 2.5f64);
        let j = e.eval_jet2(x, y).unwrap();
        let expect_xx = (x.sin()).exp() * (x.cos().powi(2) - x.sin());
        assert!((j.hess[0][0] - expect_xx).abs() < 1e-14);
        // d²/dy² (ln y · √y) = −ln(y)/(4 y^{3/2})
        let expect_yy = -y.ln() / (4.0 * y.powf(1.5));
        assert!((j.hess[1][1] - expect_yy).abs() < 1e-14);
        assert_eq!(j.hess[0][1], 0.0);
    }

    #[test]
    fn domain_errors_name_the_subexpression() {
        let e = parse_expr("x + log(y)").unwrap();
        match e.eval_jet2(1.0, -1.0) {
            Err(Error::Domain { expr, y, .. }) => {
                assert_eq!(expr, "log(y)");
                assert_eq!(y, -1.0);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr("1/x").unwrap().eval_jet2(0.0, 1.0), Err(Error::Domain { .. })));
        assert!(matches!(parse_expr("x^-2").unwrap().eval_jet2(0.0, 1.0), Err(Error::Domain { .. })));
    }

    #[test]
    fn select_ties_take_first_branch() {
        let e = parse_expr("select(x < 0, x^2, 3*x)").unwrap();
        // x = 0 is on the boundary: the first branch, x², is differentiated.
        let j = e.eval_jet2(0.0, 0.0).unwrap();
        assert_eq!(j.grad[0], 0.0);
        assert_eq!(j.hess[0][0], 2.0);
        let j = e.eval_jet2(1.0, 0.0).unwrap();
        assert_eq!(j.grad[0], 3.0);
        let m = parse_expr("min(x, y)").unwrap().eval_jet2(2.0, 2.0).unwrap();
        assert_eq!(m.grad, [1.0, 0.0]);
    }

    #[test]
    fn display_reparses_to_same_tree() {
        for src in [
            "x^2+y^2",
            "x-(1/y)",
            "-x^2",
            "(-x)^2",
            "a",
            "x-(y-1)",
            "x/(y*2)",
            "--x",
            "(x^2)^3",
            "select(x <= y, min(x, 2), max(y, -pi))",
            "y*sin(pi/y)^2 + 1e-10*x^-3",
        ] {
            let Ok(e) = parse_expr(src) else { continue };
            let printed = e.to_string();
            assert_eq!(parse_expr(&printed).unwrap(), e, "{src} -> {printed}");
        }
    }
}
