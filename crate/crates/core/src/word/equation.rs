use crate::group::{Enumerable, Group};

/// `x^{ε(0)} a(0) x^{ε(1)} a(1) … a(n-1) x^{ε(n)} = a(n)`.
///
/// `coeffs` has length `n+1`; the last entry is the right-hand side.
/// `signs` has length `n+1` with entries in `{-1, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementaryEquation<E> {
    coeffs: Vec<E>,
    signs: Vec<i8>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EquationError {
    #[error("{coeffs} coefficients but {signs} signs")]
    LengthMismatch { coeffs: usize, signs: usize },
    #[error("an equation needs at least one x-term")]
    Empty,
    #[error("sign {0} is not -1 or 1")]
    BadSign(i8),
}

impl<E: Clone> ElementaryEquation<E> {
    pub fn new(coeffs: Vec<E>, signs: Vec<i8>) -> Result<Self, EquationError> {
        if coeffs.len() != signs.len() {
            return Err(EquationError::LengthMismatch {
                coeffs: coeffs.len(),
                signs: signs.len(),
            });
        }
        if coeffs.is_empty() {
            return Err(EquationError::Empty);
        }
        if let Some(&s) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(EquationError::BadSign(s));
        }
        Ok(ElementaryEquation { coeffs, signs })
    }

    /// `x = g`.
    pub fn singleton(g: E) -> Self {
        ElementaryEquation {
            coeffs: vec![g],
            signs: vec![1],
        }
    }

    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn rhs(&self) -> &E {
        &self.coeffs[self.n()]
    }

    /// `S_n(a, ε) = {a(0), …, a(n)}`, sorted and deduplicated.
    pub fn support(&self) -> Vec<E>
    where
        E: Ord,
    {
        let mut s = self.coeffs.clone();
        s.sort();
        s.dedup();
        s
    }

    pub fn map<F, T>(&self, f: F) -> ElementaryEquation<T>
    where
        F: FnMut(&E) -> T,
    {
        ElementaryEquation {
            coeffs: self.coeffs.iter().map(f).collect(),
            signs: self.signs.clone(),
        }
    }
}

/// Left-to-right evaluation of the word at `x`.
pub fn evaluate<G: Group>(g: &G, eq: &ElementaryEquation<G::Elem>, x: &G::Elem) -> bool {
    let xi = g.inv(x);
    let n = eq.n();
    let mut acc = g.identity();
    for i in 0..=n {
        acc = g.op(&acc, if eq.signs[i] == 1 { x } else { &xi });
        if i < n {
            acc = g.op(&acc, &eq.coeffs[i]);
        }
    }
    acc == eq.coeffs[n]
}

/// `{x ∈ G : evaluate(eq, x)}` by enumeration, in element order.
pub fn solve_bruteforce<G: Enumerable>(g: &G, eq: &ElementaryEquation<G::Elem>) -> Vec<G::Elem> {
    g.elements()
        .into_iter()
        .filter(|x| evaluate(g, eq, x))
        .collect()
}
