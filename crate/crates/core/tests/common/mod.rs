//! Random families shared by the property suites.
#![allow(dead_code)]

use proptest::prelude::*;
use std::sync::Arc;
use torsionlab::expr::{parse_expr, ScalarField};
use torsionlab::genfunc::GenIsotopy;
use torsionlab::Rect;

/// `Σ c_ij x^i y^j` over `i + j ≤ 4`, as expression text.
pub fn polynomial_text(coeffs: &[f64]) -> String {
    let mut terms = Vec::new();
    let mut k = 0;
    for total in 0..=4 {
        for i in 0..=total {
            let j = total - i;
            terms.push(format!("({})*x^{i}*y^{j}", coeffs[k]));
            k += 1;
        }
    }
    terms.join(" + ")
}

pub const POLY_TERMS: usize = 15;

/// `p(x) + q(y) + c·xy + e·sin x·sin y` with `p, q` of degree 2..4 and
/// `|c| + |e| < 0.9`, so `∂²₁₂g < 0.9` everywhere.
#[derive(Debug, Clone)]
pub struct GenCoeffs {
    pub p: [f64; 3],
    pub q: [f64; 3],
    pub c: f64,
    pub e: f64,
}

impl GenCoeffs {
    pub fn text(&self) -> String {
        format!(
            "({})*x^2 + ({})*x^3 + ({})*x^4 + ({})*y^2 + ({})*y^3 + ({})*y^4 + ({})*x*y + ({})*sin(x)*sin(y)",
            self.p[0], self.p[1], self.p[2], self.q[0], self.q[1], self.q[2], self.c, self.e
        )
    }

    pub fn field(&self) -> Arc<dyn ScalarField> {
        Arc::new(parse_expr(&self.text()).expect("generated text parses"))
    }

    pub fn isotopy(&self) -> GenIsotopy {
        GenIsotopy::new(self.field(), 0.9, Rect::new(-2.0, 2.0, -2.0, 2.0)).expect("twist bound holds by construction")
    }
}

pub fn gen_coeffs() -> impl Strategy<Value = GenCoeffs> {
    (prop::array::uniform3(-0.5..0.5f64), prop::array::uniform3(-0.5..0.5f64), -0.45..0.45f64, -0.4..0.4f64)
        .prop_map(|(p, q, c, e)| GenCoeffs { p, q, c, e })
}

/// Same family, drawn from a seeded generator.
pub fn sample_coeffs(rng: &mut impl rand::Rng) -> GenCoeffs {
    let mut arr = || [rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
    let (p, q) = (arr(), arr());
    GenCoeffs { p, q, c: rng.gen_range(-0.45..0.45), e: rng.gen_range(-0.4..0.4) }
}
