//! Exact univariate algebra over the index `n`: dense polynomials, reduced
//! rational functions and a small expression language for reading them.

mod expr;
mod poly;
mod rational;

pub use expr::{parse_expr, Expr, ExprValue};
pub use poly::Poly;
pub use rational::RatFun;

use crate::{QPoly, QRatFun, Rat, Result};

pub fn poly_eval(p: &QPoly, x: &Rat) -> Rat {
    p.eval(x)
}

pub fn poly_fit(points: &[(Rat, Rat)]) -> Result<QPoly> {
    QPoly::fit(points)
}

pub fn ratfun_eval(r: &QRatFun, x: &Rat) -> Result<Rat> {
    r.eval(x)
}

/// Equality by cross multiplication, independent of normal form.
pub fn ratfun_equal(a: &QRatFun, b: &QRatFun) -> bool {
    a.num() * b.den() == b.num() * a.den()
}

/// Parses a rational function of `n`, e.g. `"(n^2 + 3/2*n + 1) / (2*n + 1)"`.
pub fn parse_ratfun(text: &str) -> Result<QRatFun> {
    parse_expr(text)?.to_ratfun("n")
}
