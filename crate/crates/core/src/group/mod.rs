//! Concrete group representations and subgroup machinery.
//!
//! Three representations are provided: [`FiniteGroup`] (validated Cayley
//! table), [`FgAbelianGroup`] (finitely generated abelian groups in
//! invariant-factor form) and [`DirectSumGroup`] (finitely supported
//! tuples). All of them implement [`Group`], so the equation and closure
//! engines can be written once.

mod abelian;
pub mod catalog;
mod direct_sum;
mod finite;
mod product_lemma;
pub mod spec;
mod subgroup;

use std::fmt::Debug;
use std::hash::Hash;

pub use abelian::{AbelianElement, Coset, FgAbelianGroup, TorsionKernel};
pub use direct_sum::{
    summand_intersection, AbelianIso, DirectSumGroup, Factor, FactorValue, IndexKind, SupportMap,
};
pub use finite::FiniteGroup;
pub use product_lemma::{
    involutive_automorphisms, product_lemma_construct, ProductLemmaConstruction,
    ProductLemmaReport, ProductView,
};
pub use subgroup::{
    all_subgroups, center, centralizer, derived_subgroup, index, is_normal, is_super_normal,
    subgroup_generated, subgroup_generated_finite, SubgroupHandle,
    SuperNormalMethod, SuperNormalVerdict,
};

/// Errors raised while building or querying groups.
#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("table is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("invalid invariant factors: {0}")]
    InvalidInvariants(String),
    #[error("element does not belong to the group: {0}")]
    ShapeMismatch(String),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("automorphism is not an involution")]
    NotInvolution,
    #[error("invalid factor: {0}")]
    InvalidFactor(String),
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("group too large: {0}")]
    TooLarge(String),
}

/// Selector for [`Group::arithmetic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupOp {
    Compose,
    Invert,
    Identity,
}

/// A group whose elements can be compared, hashed and ordered.
pub trait Group {
    type Elem: Clone + Eq + Ord + Hash + Debug;

    fn identity(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Shape check: does `a` encode an element of this group instance?
    fn is_element(&self, a: &Self::Elem) -> bool;

    fn pow(&self, a: &Self::Elem, exp: i64) -> Self::Elem {
        let base = if exp < 0 { self.inv(a) } else { a.clone() };
        let mut acc = self.identity();
        for _ in 0..exp.unsigned_abs() {
            acc = self.op(&acc, &base);
        }
        acc
    }

    /// Checked arithmetic entry point. `h` is ignored for `Invert` and
    /// both operands are ignored for `Identity`.
    fn arithmetic(
        &self,
        op: GroupOp,
        g: &Self::Elem,
        h: &Self::Elem,
    ) -> Result<Self::Elem, GroupError> {
        let check = |e: &Self::Elem| {
            if self.is_element(e) {
                Ok(())
            } else {
                Err(GroupError::ShapeMismatch(format!("{e:?}")))
            }
        };
        match op {
            GroupOp::Compose => {
                check(g)?;
                check(h)?;
                Ok(self.op(g, h))
            }
            GroupOp::Invert => {
                check(g)?;
                Ok(self.inv(g))
            }
            GroupOp::Identity => Ok(self.identity()),
        }
    }
}

/// Groups whose elements can be listed.
pub trait Enumerable: Group {
    /// All elements, each exactly once, in a stable order.
    fn elements(&self) -> Vec<Self::Elem>;

    fn order(&self) -> usize {
        self.elements().len()
    }
}

/// Textual element syntax used by the equation parser and the reports.
pub trait ElementSyntax: Group {
    fn parse_element(&self, token: &str) -> Option<Self::Elem>;
    fn format_element(&self, e: &Self::Elem) -> String;
    /// JSON rendering used by reports. Defaults to the formatted string.
    fn element_json(&self, e: &Self::Elem) -> serde_json::Value {
        serde_json::Value::String(self.format_element(e))
    }
}

/// Splits a token into top-level comma separated parts, respecting
/// parentheses, brackets and braces.
pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}
