//! Exact toolkit for rank-one Weyl discriminants, their character expansions,
//! and the splitting calculus of finite covers built from `PSL_2` over finite rings.
//!
//! Exponents follow the doubling convention: `y_j` stands for `e^{i theta_j / 2}`
//! and `t` for `e^{l / 2}`, so every stored exponent is an integer.

pub mod arithfields;
pub mod covers;
pub mod discriminant;
pub mod exactpoly;
pub mod groups;
pub mod lengthsim;
pub mod weylchar;

mod error;

pub use error::{Error, Result};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};

pub use exactpoly::{CharSymbol, Coefficient, FormalCharSum, LaurentPoly};

/// Integer Laurent polynomials, the default carrier for characters.
pub type IntPoly = LaurentPoly<BigInt>;
/// Laurent polynomials with machine-word coefficients.
pub type SmallPoly = LaurentPoly<i64>;
/// Laurent polynomials over the rationals.
pub type RatPoly = LaurentPoly<BigRational>;
/// Laurent polynomials with floating point coefficients.
pub type F64Poly = LaurentPoly<f64>;
/// Formal character sums with integer Laurent coefficients.
pub type IntCharSum = FormalCharSum<BigInt>;
/// Exact rationals used by the splitting calculus.
pub type Rational = Ratio<i128>;

/// Version tag written into every machine-readable report.
pub const SCHEMA_VERSION: u32 = 1;
