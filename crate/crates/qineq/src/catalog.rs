//! A small catalog of well-behaved test functions: polynomials with positive
//! coefficients, scaled exponentials, and shifted identities. Everything in
//! the catalog is positive, increasing, and convex on [0, inf), so randomly
//! drawn instances satisfy the hypotheses of every registered inequality.

use std::fmt;

use rand::Rng;

use crate::expr::EvalResult;
use crate::qcore::RealFn;

#[derive(Debug, Clone, PartialEq)]
pub enum CatalogFn {
    /// c0 + c1 x + ... with all coefficients > 0.
    Poly(Vec<f64>),
    /// exp(alpha x) with alpha > 0.
    ExpScaled(f64),
    /// x + c with c > 0.
    AffinePlus(f64),
}

impl RealFn for CatalogFn {
    fn eval(&self, x: f64) -> EvalResult {
        Ok(match self {
            CatalogFn::Poly(coeffs) => coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c),
            CatalogFn::ExpScaled(alpha) => (alpha * x).exp(),
            CatalogFn::AffinePlus(c) => x + c,
        })
    }
}

impl fmt::Display for CatalogFn {
    /// Prints in the expression-language syntax with shortest-round-trip
    /// numbers, so the text re-parses to the same function.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogFn::Poly(coeffs) => {
                for (i, c) in coeffs.iter().enumerate() {
                    if i > 0 {
                        write!(out, " + ")?;
                    }
                    match i {
                        0 => write!(out, "{c}")?,
                        1 => write!(out, "{c} * x")?,
                        _ => write!(out, "{c} * x ^ {i}")?,
                    }
                }
                Ok(())
            }
            CatalogFn::ExpScaled(alpha) => write!(out, "exp({alpha} * x)"),
            CatalogFn::AffinePlus(c) => write!(out, "x + {c}"),
        }
    }
}

impl CatalogFn {
    pub fn constant(c: f64) -> CatalogFn {
        CatalogFn::Poly(vec![c])
    }

    pub fn random(rng: &mut impl Rng) -> CatalogFn {
        match rng.gen_range(0..3) {
            0 => {
                let degree = rng.gen_range(0..=3usize);
                let coeffs = (0..=degree).map(|_| rng.gen_range(0.1..2.0)).collect();
                CatalogFn::Poly(coeffs)
            }
            1 => CatalogFn::ExpScaled(rng.gen_range(0.1..1.2)),
            _ => CatalogFn::AffinePlus(rng.gen_range(0.1..3.0)),
        }
    }
}
