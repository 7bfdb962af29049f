//! One-variable word equations: syntax, evaluation and abelian solving.

mod coords;
mod equation;
mod linear;
mod syntax;

pub use coords::SubgroupCoordinates;
pub use equation::{evaluate, solve_bruteforce, ElementaryEquation, EquationError};
pub use linear::{abelian_reduce, solve_linear, LinearCongruence, SolutionSet};
pub use syntax::{parse_equation, print_equation, ParseError, ParseErrorKind};

use crate::group::FgAbelianGroup;

/// Solution set of an equation over a finitely generated abelian group.
pub fn solve_abelian(
    g: &FgAbelianGroup,
    eq: &ElementaryEquation<crate::group::AbelianElement>,
) -> SolutionSet<crate::group::AbelianElement> {
    solve_linear(g, &abelian_reduce(g, eq))
}
