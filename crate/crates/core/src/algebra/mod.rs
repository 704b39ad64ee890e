//! Exact arithmetic: polynomials, rational functions and quadratic covers.

pub mod gcd;
pub mod linalg;
pub mod poly;
pub mod quad;
pub mod ratfun;

pub use gcd::gcd;
pub use poly::{int, rat, MPoly, Rational};
pub use quad::{CoeffRing, QuadCoverRing, QuadElem};
pub use ratfun::RatFun;
