use num_integer::Integer;

use super::ElementaryEquation;
use crate::group::{AbelianElement, Coset, FgAbelianGroup};

/// `k·x = b` in additive notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinearCongruence {
    pub k: i64,
    pub b: AbelianElement,
}

/// Solution set of an equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolutionSet<E> {
    Empty,
    All,
    /// A coset of the torsion kernel `G[k]`.
    Coset(Coset),
    Explicit(Vec<E>),
}

/// Collapses the word: `k = Σε(i)`, `b = a(n) − Σ_{i<n} a(i)`.
pub fn abelian_reduce(g: &FgAbelianGroup, eq: &ElementaryEquation<AbelianElement>) -> LinearCongruence {
    let k = eq.signs().iter().map(|&s| s as i64).sum();
    let mut b = eq.rhs().clone();
    for a in &eq.coeffs()[..eq.n()] {
        b = g.sub(&b, a);
    }
    LinearCongruence { k, b }
}

/// Exact solution set of `k·x = b`, coordinate by coordinate.
pub fn solve_linear(g: &FgAbelianGroup, c: &LinearCongruence) -> SolutionSet<AbelianElement> {
    let k = c.k;
    let mut x = Vec::with_capacity(g.dim());
    for (i, &b) in c.b.coords.iter().enumerate() {
        match g.modulus(i) {
            0 => {
                if k == 0 {
                    if b != 0 {
                        return SolutionSet::Empty;
                    }
                    x.push(0);
                } else {
                    if b % k != 0 {
                        return SolutionSet::Empty;
                    }
                    x.push(b / k);
                }
            }
            m => {
                let m = m as i64;
                let kr = k.rem_euclid(m);
                let d = kr.gcd(&m);
                let b = b.rem_euclid(m);
                if b % d != 0 {
                    return SolutionSet::Empty;
                }
                let md = m / d;
                // (k/d)·x ≡ b/d (mod m/d) with k/d a unit mod m/d.
                let inv = if md == 1 {
                    0
                } else {
                    let e = (kr / d).extended_gcd(&md);
                    e.x.rem_euclid(md)
                };
                x.push(((b / d) as i128 * inv as i128).rem_euclid(md as i128) as i64);
            }
        }
    }
    let kernel = g.torsion_kernel(k);
    if kernel == g.full_kernel() {
        return SolutionSet::All;
    }
    SolutionSet::Coset(g.coset(AbelianElement::new(x), kernel))
}

impl SolutionSet<AbelianElement> {
    /// Lists the solutions of a finite group.
    pub fn materialize(&self, g: &FgAbelianGroup) -> Vec<AbelianElement> {
        match self {
            SolutionSet::Empty => vec![],
            SolutionSet::All => g.enumerate().expect("finite group"),
            SolutionSet::Coset(c) => g
                .enumerate()
                .expect("finite group")
                .into_iter()
                .filter(|x| g.coset_contains(c, x))
                .collect(),
            SolutionSet::Explicit(v) => v.clone(),
        }
    }

    pub fn contains(&self, g: &FgAbelianGroup, x: &AbelianElement) -> bool {
        match self {
            SolutionSet::Empty => false,
            SolutionSet::All => true,
            SolutionSet::Coset(c) => g.coset_contains(c, x),
            SolutionSet::Explicit(v) => v.contains(x),
        }
    }
}
