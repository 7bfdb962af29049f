use serde_json::{json, Value};

use super::{canonicalize, normalize, solution_to_closed, CanonicalClosed, ClosedSetExpr};
use crate::group::{AbelianElement, Enumerable, FgAbelianGroup};
use crate::word::{
    abelian_reduce, print_equation, solve_linear, ElementaryEquation, LinearCongruence,
    SubgroupCoordinates,
};

/// `X ∩ H` in the coordinates of `H`.
///
/// `c + G[k] = {x : kx = kc}`, and for `x = embed(y)` this reads
/// `k·y = project(kc)`, which is empty when `kc ∉ H`.
pub fn restrict(g: &FgAbelianGroup, x: &CanonicalClosed, h: &SubgroupCoordinates) -> CanonicalClosed {
    let p = h.presentation();
    let mut out = Vec::new();
    for c in x.cosets() {
        let k = c.kernel.k() as i64;
        let Some(b) = h.project(&g.scale(k, &c.representative)) else {
            continue;
        };
        let closed = solution_to_closed(p, solve_linear(p, &LinearCongruence { k, b }));
        out.extend(closed.cosets().iter().cloned());
    }
    canonicalize(p, out)
}

/// `k·x = b` written as an elementary equation: `x 0 x … 0 x = b`
/// (`x^-1` for negative `k`, `x 0 x^-1 = b` for `k = 0`).
pub fn linear_atom(h: &FgAbelianGroup, k: i64, b: AbelianElement) -> ElementaryEquation<AbelianElement> {
    let (len, sign) = match k {
        0 => (2, 0),
        k if k > 0 => (k as usize, 1),
        k => (k.unsigned_abs() as usize, -1),
    };
    let signs = if sign == 0 { vec![1, -1] } else { vec![sign; len] };
    let mut coeffs = vec![h.zero(); len - 1];
    coeffs.push(b);
    ElementaryEquation::new(coeffs, signs).expect("well-formed")
}

/// Rewrites an expression over `G` into one over `H` denoting `H ∩ expr`,
/// atom by atom. Atoms with no solution in `H` become `Empty`.
pub fn translate_expr(
    g: &FgAbelianGroup,
    expr: &ClosedSetExpr<AbelianElement>,
    h: &SubgroupCoordinates,
) -> ClosedSetExpr<AbelianElement> {
    match expr {
        ClosedSetExpr::Empty => ClosedSetExpr::Empty,
        ClosedSetExpr::Full => ClosedSetExpr::Full,
        ClosedSetExpr::Union(c) => ClosedSetExpr::Union(c.iter().map(|e| translate_expr(g, e, h)).collect()),
        ClosedSetExpr::Intersection(c) => {
            ClosedSetExpr::Intersection(c.iter().map(|e| translate_expr(g, e, h)).collect())
        }
        ClosedSetExpr::Atom(a) => {
            let LinearCongruence { k, b } = abelian_reduce(g, a);
            match h.project(&b) {
                Some(b) => ClosedSetExpr::Atom(linear_atom(h.presentation(), k, b)),
                None => ClosedSetExpr::Empty,
            }
        }
    }
}

/// Both sides of the reflection equality for `H = ⟨gens⟩`.
#[derive(Debug, Clone)]
pub struct ReflectionReport {
    /// Closure of `H ∩ A` computed inside `H`, in `H`-coordinates.
    pub lhs: CanonicalClosed,
    /// `H ∩ Cl(A)`, restricted from the ambient group.
    pub rhs: CanonicalClosed,
    pub equal: bool,
    /// The atoms of `H ∩ A` as equations over `H`.
    pub witnesses: Vec<String>,
    /// Agreement of both sides with `A` by enumerating `H`, when small.
    pub enumeration_agrees: Option<bool>,
    pub presentation: FgAbelianGroup,
    pub h_order: Option<u128>,
}

impl ReflectionReport {
    pub fn to_json(&self) -> Value {
        let p = &self.presentation;
        json!({
            "lhs_canonical": self.lhs.to_json(p),
            "rhs_canonical": self.rhs.to_json(p),
            "equal": self.equal,
            "witnesses": self.witnesses,
            "enumeration_agrees": self.enumeration_agrees,
            "subgroup": {
                "rank": p.rank(),
                "invariants": p.invariants(),
                "order": self.h_order.map(|o| o.to_string()),
            },
        })
    }
}

/// Largest `H` cross-checked by enumeration.
pub const ENUMERATION_LIMIT: u128 = 4096;

pub fn reflection_check(
    g: &FgAbelianGroup,
    gens: &[AbelianElement],
    a: &ClosedSetExpr<AbelianElement>,
) -> ReflectionReport {
    let h = SubgroupCoordinates::new(g, gens);
    let p = h.presentation().clone();
    let rhs = restrict(g, &normalize(g, a), &h);
    let translated = translate_expr(g, a, &h);
    let lhs = normalize(&p, &translated);
    let witnesses = translated
        .atoms()
        .into_iter()
        .map(|e| print_equation(e, &p))
        .collect();
    let h_order = p.order();
    let enumeration_agrees = h_order.filter(|&n| n <= ENUMERATION_LIMIT).map(|_| {
        p.elements().iter().all(|y| {
            let inside = a.member(g, &h.embed(y));
            lhs.member(&p, y) == inside && rhs.member(&p, y) == inside
        })
    });
    ReflectionReport {
        equal: lhs == rhs,
        lhs,
        rhs,
        witnesses,
        enumeration_agrees,
        presentation: p,
        h_order,
    }
}
