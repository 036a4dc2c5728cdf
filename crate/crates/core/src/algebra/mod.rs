//! Exact arithmetic: rationals, Gaussian rationals, polynomials, rational
//! functions in `t1, t2`, truncated series and closed-form expansion.

pub mod field;
pub mod gauss;
pub mod parse;
pub mod poly1;
pub mod poly2;
pub mod qexpr;
pub mod ratfunc;
pub mod rational;
pub mod series;

pub use field::{char_poly, char_poly_squarefree, Field, Matrix};
pub use gauss::GaussRational;
pub use poly1::Poly1;
pub use poly2::Poly2;
pub use qexpr::{expand_q_closed_form, QExpr};
pub use ratfunc::RatFunc2;
pub use rational::Rational;
pub use series::{Orders, TruncSeries};
