//! Exact Laurent polynomials, subtraction-free rational functions, gradings.

pub mod grading;
pub mod laurent;
pub mod posrat;
pub mod ratfn;
pub mod vars;

pub use grading::{degree_of, limit_t_zero, Grading};
pub use laurent::{Coeff, LaurentPoly, Monomial, Poly, QPoly};
pub use posrat::PosRatFunc;
pub use ratfn::RatFn;
pub use vars::{VarSet, Vars};
