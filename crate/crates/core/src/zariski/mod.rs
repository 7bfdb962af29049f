//! Zariski-closed sets: expressions, canonical forms over finitely
//! generated abelian groups, restriction to subgroups and discreteness
//! cover certificates for finite groups.

mod canonical;
mod cover;
mod expr;
mod restrict;

pub use canonical::{
    atom_set, canonicalize, closure_finite_set, first_uncovered, normalize, CanonicalClosed,
    FiniteClosure,
};
pub(crate) use canonical::solution_to_closed;
pub use cover::{
    search_min_cover, verify_discreteness_cover, CoverCertificate, CoverError, CoverFailure,
    CoverSearch, CoverVerdict, MAX_CANDIDATES,
};
pub use expr::{parse_expr, ClosedSetExpr, ExprError};
pub use restrict::{
    linear_atom, reflection_check, restrict, translate_expr, ReflectionReport, ENUMERATION_LIMIT,
};
