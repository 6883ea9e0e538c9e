//! Exact integer commutative algebra: sparse polynomials over ℤ, Gröbner
//! bases over the integers, symmetric polynomial families and integer
//! lattice routines used by the spectral sequence engine.

pub mod error;
pub mod groebner;
pub mod linalg;
mod parse;
pub mod poly;
pub mod symcomb;

pub use error::{GroebnerError, PolyError};
pub use groebner::{
    buchberger, groebner, ideal_equal, ideal_intersect, is_groebner, normal_form, reduce_basis, standard_monomials,
    track_reduction, Completion, DegreeBound, GroebnerBasis, ReductionTrace,
};
pub use linalg::{IntegerMatrix, Lattice, QuotientShape};
pub use poly::{MonomialOrder, Polynomial, PowerProduct, Ring, Term, VarContext};
