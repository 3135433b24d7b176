//! Finite- versus infinite-dimensional classification of the generalized
//! oscillator algebra attached to a symmetric three-term recurrence
//!
//! ```text
//! x Ψ_n(x) = b_n Ψ_{n+1}(x) + b_{n-1} Ψ_{n-1}(x),   Ψ_0 = 1,   b_{-1} = 0
//! ```
//!
//! The algebra is generated by the ladder operators `A`, `A†`, the number
//! operator `N` and the identity, closed under commutators. Everything here
//! is driven by the squared coefficients `b_n²`, which stay rational for all
//! the classical families, so the core works over exact rationals.
//!
//! The numeric building blocks ([`Poly`], [`RatFun`], [`TruncOp`],
//! [`DiffTable`]) are generic over a [`Scalar`]; the aliases below pin the
//! instantiations the rest of the crate uses.

pub mod classifier;
pub mod coeffseq;
mod error;
pub mod families;
pub mod linalg;
pub mod matrixreal;
pub mod moments;
pub mod multiboson;
pub mod ratfun;
pub mod scalar;
pub mod shiftalg;

pub use classifier::{Classification, DiffTable, Verdict, Witness};
pub use coeffseq::{CoeffSeq, FamilyId};
pub use error::{Error, Result};
pub use matrixreal::TruncOp;
pub use ratfun::{Expr, Poly, RatFun};
pub use scalar::Scalar;
pub use shiftalg::{LieBasis, ShiftOp};

/// Exact rational number with arbitrary-precision numerator and denominator.
pub type Rat = num_rational::BigRational;

/// Dense polynomial in the index `n` with exact coefficients.
pub type QPoly = Poly<Rat>;

/// Reduced rational function in `n` with exact coefficients.
pub type QRatFun = RatFun<Rat>;

/// Weighted-shift operator with exact rational-function coefficients.
pub type QShiftOp = ShiftOp<Rat>;

/// Truncated Fock-space matrix in the rational gauge.
pub type ExactOp = TruncOp<Rat>;

/// Truncated Fock-space matrix in the original (square-root) basis.
pub type FloatOp = TruncOp<f64>;
