use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{split_top_level, ElementSyntax, Enumerable, FiniteGroup, Group, GroupError};

/// `ℤ^rank ⊕ ℤ/m₁ ⊕ … ⊕ ℤ/m_s` with `m₁ | m₂ | … | m_s`, every `mᵢ ≥ 2`.
///
/// Elements are coordinate vectors: `rank` free coordinates followed by one
/// coordinate per invariant factor, the latter reduced into `[0, mᵢ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FgAbelianGroup {
    rank: usize,
    invariants: Vec<u64>,
}

/// An element of an [`FgAbelianGroup`] in additive notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AbelianElement {
    pub coords: Vec<i64>,
}

impl AbelianElement {
    pub fn new(coords: Vec<i64>) -> Self {
        AbelianElement { coords }
    }
}

impl fmt::Display for AbelianElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            write!(f, "{}", self.coords[0])
        } else {
            let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

/// The torsion kernel `G[k] = {x : kx = 0}`, stored by a normalized `k`.
///
/// Normalization makes the descriptor canonical: two values are equal iff
/// the subgroups are equal. `k = 0` is only used for the whole group of a
/// group with positive rank; for finite groups the whole group is `G[exp]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TorsionKernel(u64);

impl TorsionKernel {
    pub fn k(self) -> u64 {
        self.0
    }
}

/// A coset `representative + G[k]` with the representative reduced modulo
/// the kernel.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Coset {
    pub kernel: TorsionKernel,
    pub representative: AbelianElement,
}

impl FgAbelianGroup {
    pub fn new(rank: usize, invariants: Vec<u64>) -> Result<Self, GroupError> {
        if let Some(m) = invariants.iter().find(|&&m| m < 2) {
            return Err(GroupError::InvalidInvariants(format!(
                "invariant factor {m} is below 2"
            )));
        }
        for w in invariants.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(GroupError::InvalidInvariants(format!(
                    "{} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(FgAbelianGroup { rank, invariants })
    }

    /// `ℤ/n` (the trivial group for `n = 1`).
    pub fn cyclic(n: u64) -> Result<Self, GroupError> {
        match n {
            0 => Ok(FgAbelianGroup { rank: 1, invariants: vec![] }),
            1 => Ok(FgAbelianGroup { rank: 0, invariants: vec![] }),
            _ => Self::new(0, vec![n]),
        }
    }

    pub fn integers(rank: usize) -> Self {
        FgAbelianGroup { rank, invariants: vec![] }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    /// Number of coordinates of an element.
    pub fn dim(&self) -> usize {
        self.rank + self.invariants.len()
    }

    /// Modulus of coordinate `i`, `0` for a free coordinate.
    pub fn modulus(&self, i: usize) -> u64 {
        if i < self.rank {
            0
        } else {
            self.invariants[i - self.rank]
        }
    }

    pub fn moduli(&self) -> Vec<u64> {
        (0..self.dim()).map(|i| self.modulus(i)).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// Order, `None` when infinite or beyond `u128`.
    pub fn order(&self) -> Option<u128> {
        if self.rank > 0 {
            return None;
        }
        self.invariants
            .iter()
            .try_fold(1u128, |acc, &m| acc.checked_mul(m as u128))
    }

    /// Largest invariant factor (1 for a torsion-free or trivial group).
    pub fn exponent(&self) -> u64 {
        self.invariants.last().copied().unwrap_or(1)
    }

    pub fn zero(&self) -> AbelianElement {
        AbelianElement::new(vec![0; self.dim()])
    }

    pub fn basis(&self, i: usize) -> AbelianElement {
        let mut c = vec![0; self.dim()];
        c[i] = 1;
        self.reduce(c)
    }

    pub fn reduce(&self, mut coords: Vec<i64>) -> AbelianElement {
        for (i, c) in coords.iter_mut().enumerate().skip(self.rank) {
            *c = c.rem_euclid(self.invariants[i - self.rank] as i64);
        }
        AbelianElement::new(coords)
    }

    pub fn element(&self, coords: Vec<i64>) -> Result<AbelianElement, GroupError> {
        if coords.len() != self.dim() {
            return Err(GroupError::ShapeMismatch(format!(
                "{} coordinates for a group of dimension {}",
                coords.len(),
                self.dim()
            )));
        }
        Ok(self.reduce(coords))
    }

    pub fn add(&self, a: &AbelianElement, b: &AbelianElement) -> AbelianElement {
        self.reduce(a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &AbelianElement, b: &AbelianElement) -> AbelianElement {
        self.reduce(a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &AbelianElement) -> AbelianElement {
        self.reduce(a.coords.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, k: i64, a: &AbelianElement) -> AbelianElement {
        let coords = a
            .coords
            .iter()
            .enumerate()
            .map(|(i, &x)| match self.modulus(i) {
                0 => k * x,
                m => ((k as i128 * x as i128).rem_euclid(m as i128)) as i64,
            })
            .collect();
        AbelianElement::new(coords)
    }

    /// Order of an element, `None` when it has infinite order.
    pub fn element_order(&self, a: &AbelianElement) -> Option<u64> {
        let mut ord = 1u64;
        for (i, &x) in a.coords.iter().enumerate() {
            match self.modulus(i) {
                0 if x != 0 => return None,
                0 => {}
                m => ord = ord.lcm(&(m / (x as u64).gcd(&m))),
            }
        }
        Some(ord)
    }

    /// All elements of a finite group in lexicographic coordinate order.
    pub fn enumerate(&self) -> Result<Vec<AbelianElement>, GroupError> {
        let order = self
            .order()
            .ok_or_else(|| GroupError::TooLarge("group is infinite".into()))?;
        if order > 1 << 22 {
            return Err(GroupError::TooLarge(format!("order {order}")));
        }
        let mut out = Vec::with_capacity(order as usize);
        let mut cur = vec![0i64; self.dim()];
        loop {
            out.push(AbelianElement::new(cur.clone()));
            let mut i = self.dim();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.invariants[i] as i64 {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// Cayley-table copy of a finite group, labelled with the element syntax.
    pub fn to_finite_group(&self) -> Result<FiniteGroup, GroupError> {
        let elems = self.enumerate()?;
        let n = elems.len();
        if n > 4096 {
            return Err(GroupError::TooLarge(format!("order {n}")));
        }
        let index: std::collections::HashMap<&AbelianElement, usize> =
            elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut table = Vec::with_capacity(n * n);
        for a in &elems {
            for b in &elems {
                table.push(index[&self.add(a, b)]);
            }
        }
        let labels = elems.iter().map(|e| self.format_element(e)).collect();
        FiniteGroup::from_flat(n, table, Some(labels))
    }

    // ---- torsion kernels ------------------------------------------------

    /// Canonical descriptor of `G[k]`.
    pub fn torsion_kernel(&self, k: i64) -> TorsionKernel {
        let k = k.unsigned_abs();
        if self.invariants.is_empty() {
            return TorsionKernel(if self.rank > 0 && k == 0 { 0 } else { 1 });
        }
        let e = self.exponent();
        if k == 0 {
            TorsionKernel(if self.rank > 0 { 0 } else { e })
        } else {
            TorsionKernel(k.gcd(&e))
        }
    }

    /// The whole group as a torsion kernel.
    pub fn full_kernel(&self) -> TorsionKernel {
        self.torsion_kernel(0)
    }

    pub fn trivial_kernel(&self) -> TorsionKernel {
        self.torsion_kernel(1)
    }

    /// Per-coordinate step of the kernel: the kernel is the product of the
    /// subgroups `step·ℤ/m` (torsion) and `step·ℤ` with step 0 or 1 (free).
    pub fn kernel_steps(&self, kernel: TorsionKernel) -> Vec<u64> {
        let k = kernel.0;
        (0..self.dim())
            .map(|i| match self.modulus(i) {
                0 => u64::from(k == 0),
                m => m / k.gcd(&m),
            })
            .collect()
    }

    pub fn kernel_step(&self, kernel: TorsionKernel, i: usize) -> u64 {
        match self.modulus(i) {
            0 => u64::from(kernel.0 == 0),
            m => m / kernel.0.gcd(&m),
        }
    }

    /// `|G[k]|`, `None` when infinite.
    pub fn kernel_order(&self, kernel: TorsionKernel) -> Option<u128> {
        if kernel.0 == 0 && self.rank > 0 {
            return None;
        }
        Some(
            self.invariants
                .iter()
                .map(|&m| kernel.0.gcd(&m) as u128)
                .product(),
        )
    }

    /// `G[a] ⊆ G[b]`.
    pub fn kernel_le(&self, a: TorsionKernel, b: TorsionKernel) -> bool {
        b.0 == 0 || (a.0 != 0 && b.0.is_multiple_of(a.0))
    }

    /// `G[a] ∩ G[b] = G[gcd(a, b)]`.
    pub fn kernel_meet(&self, a: TorsionKernel, b: TorsionKernel) -> TorsionKernel {
        self.torsion_kernel(a.0.gcd(&b.0) as i64)
    }

    /// Every distinct torsion kernel, largest first.
    pub fn all_kernels(&self) -> Vec<TorsionKernel> {
        let e = self.exponent();
        let mut ks: Vec<TorsionKernel> = (1..=e)
            .filter(|d| e.is_multiple_of(*d))
            .map(|d| self.torsion_kernel(d as i64))
            .collect();
        if self.rank > 0 {
            ks.push(self.full_kernel());
        }
        ks.sort_by(|a, b| {
            self.kernel_order(*b)
                .map_or(u128::MAX, |o| o)
                .cmp(&self.kernel_order(*a).map_or(u128::MAX, |o| o))
                .then(a.cmp(b))
        });
        ks.dedup();
        ks
    }

    // ---- cosets ---------------------------------------------------------

    pub fn coset(&self, representative: AbelianElement, kernel: TorsionKernel) -> Coset {
        let coords = representative
            .coords
            .iter()
            .enumerate()
            .map(|(i, &c)| match self.kernel_step(kernel, i) {
                0 => c,
                s => c.rem_euclid(s as i64),
            })
            .collect();
        Coset {
            kernel,
            representative: AbelianElement::new(coords),
        }
    }

    pub fn coset_contains(&self, c: &Coset, x: &AbelianElement) -> bool {
        c.representative
            .coords
            .iter()
            .zip(&x.coords)
            .enumerate()
            .all(|(i, (&r, &v))| match self.kernel_step(c.kernel, i) {
                0 => r == v,
                s => (v - r).rem_euclid(s as i64) == 0,
            })
    }

    /// `a ⊆ b` for two cosets.
    pub fn coset_subset(&self, a: &Coset, b: &Coset) -> bool {
        self.kernel_le(a.kernel, b.kernel) && self.coset_contains(b, &a.representative)
    }

    /// Intersection of two cosets, per coordinate by the Chinese remainder
    /// theorem. The result, when nonempty, is a coset of the meet kernel.
    pub fn coset_intersection(&self, a: &Coset, b: &Coset) -> Option<Coset> {
        let kernel = self.kernel_meet(a.kernel, b.kernel);
        let mut coords = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let (sa, sb) = (self.kernel_step(a.kernel, i), self.kernel_step(b.kernel, i));
            let (ra, rb) = (a.representative.coords[i], b.representative.coords[i]);
            let v = match (sa, sb) {
                (0, 0) => {
                    if ra != rb {
                        return None;
                    }
                    ra
                }
                (0, s) => {
                    if (ra - rb).rem_euclid(s as i64) != 0 {
                        return None;
                    }
                    ra
                }
                (s, 0) => {
                    if (rb - ra).rem_euclid(s as i64) != 0 {
                        return None;
                    }
                    rb
                }
                (sa, sb) => crt(ra, sa as i64, rb, sb as i64)?.0,
            };
            coords.push(v);
        }
        let c = self.coset(AbelianElement::new(coords), kernel);
        debug_assert!(self.coset_contains(a, &c.representative));
        debug_assert!(self.coset_contains(b, &c.representative));
        Some(c)
    }

    /// Iterates a transversal `{t}` of `outer / inner` (with `inner ⊆ outer`,
    /// `outer` finite or `inner` of finite index in it) in lexicographic
    /// odometer order. Each `t` is a kernel element of `outer`.
    pub fn transversal(
        &self,
        outer: TorsionKernel,
        inner: TorsionKernel,
    ) -> impl Iterator<Item = AbelianElement> + '_ {
        debug_assert!(self.kernel_le(inner, outer));
        // Coordinate i ranges over multiples of the outer step below the
        // inner step.
        let spec: Vec<(u64, u64)> = (0..self.dim())
            .map(|i| {
                let so = self.kernel_step(outer, i);
                let si = self.kernel_step(inner, i);
                match (so, si) {
                    (0, _) | (_, 0) if so == si => (0, 1),
                    (1, 0) => panic!("transversal of infinite index requested"),
                    _ => (so, si / so),
                }
            })
            .collect();
        let mut cur = vec![0u64; self.dim()];
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let item = AbelianElement::new(
                cur.iter()
                    .zip(&spec)
                    .map(|(&c, &(step, _))| (c * step) as i64)
                    .collect(),
            );
            let mut i = cur.len();
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < spec[i].1 {
                    break;
                }
                cur[i] = 0;
            }
            Some(item)
        })
    }
}

/// Returns `(x, lcm)` with `x ≡ a (mod m)`, `x ≡ b (mod n)`, `0 ≤ x < lcm`.
pub(crate) fn crt(a: i64, m: i64, b: i64, n: i64) -> Option<(i64, i64)> {
    let g = m.extended_gcd(&n);
    let diff = b - a;
    if diff % g.gcd != 0 {
        return None;
    }
    let l = m / g.gcd * n;
    let t = ((diff / g.gcd) as i128 * g.x as i128).rem_euclid((n / g.gcd) as i128) as i64;
    let x = (a as i128 + m as i128 * t as i128).rem_euclid(l as i128) as i64;
    Some((x, l))
}

impl Group for FgAbelianGroup {
    type Elem = AbelianElement;

    fn identity(&self) -> AbelianElement {
        self.zero()
    }

    fn op(&self, a: &AbelianElement, b: &AbelianElement) -> AbelianElement {
        self.add(a, b)
    }

    fn inv(&self, a: &AbelianElement) -> AbelianElement {
        self.neg(a)
    }

    fn is_element(&self, a: &AbelianElement) -> bool {
        a.coords.len() == self.dim()
            && a.coords
                .iter()
                .enumerate()
                .skip(self.rank)
                .all(|(i, &c)| c >= 0 && (c as u64) < self.modulus(i))
    }

    fn pow(&self, a: &AbelianElement, exp: i64) -> AbelianElement {
        self.scale(exp, a)
    }
}

impl Enumerable for FgAbelianGroup {
    /// Panics on infinite groups; guard with [`FgAbelianGroup::is_finite`].
    fn elements(&self) -> Vec<AbelianElement> {
        self.enumerate().expect("finite abelian group")
    }
}

impl ElementSyntax for FgAbelianGroup {
    /// Accepts an integer (one-coordinate groups), a tuple `(a,b,…)`, `e`
    /// for zero, or `e<i>` for the i-th basis vector.
    fn parse_element(&self, token: &str) -> Option<AbelianElement> {
        let token = token.trim();
        if token == "e" {
            return Some(self.zero());
        }
        if let Some(i) = token.strip_prefix('e').and_then(|s| s.parse::<usize>().ok()) {
            return (i < self.dim()).then(|| self.basis(i));
        }
        let coords: Vec<i64> = if let Some(inner) =
            token.strip_prefix('(').and_then(|s| s.strip_suffix(')'))
        {
            if inner.trim().is_empty() {
                vec![]
            } else {
                split_top_level(inner, ',')
                    .iter()
                    .map(|p| p.trim().parse::<i64>())
                    .collect::<Result<_, _>>()
                    .ok()?
            }
        } else {
            vec![token.parse::<i64>().ok()?]
        };
        self.element(coords).ok()
    }

    fn format_element(&self, e: &AbelianElement) -> String {
        e.to_string()
    }

    fn element_json(&self, e: &AbelianElement) -> serde_json::Value {
        if e.coords.len() == 1 {
            serde_json::json!(e.coords[0])
        } else {
            serde_json::json!(e.coords)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisibility_chain_validated() {
        assert!(FgAbelianGroup::new(0, vec![2, 4, 8]).is_ok());
        assert!(FgAbelianGroup::new(0, vec![2, 3]).is_err());
        assert!(FgAbelianGroup::new(1, vec![1]).is_err());
    }

    #[test]
    fn invert_in_z12() {
        let g = FgAbelianGroup::cyclic(12).unwrap();
        let five = g.parse_element("5").unwrap();
        assert_eq!(g.inv(&five), AbelianElement::new(vec![7]));
    }

    #[test]
    fn kernel_normalization_is_canonical() {
        let g = FgAbelianGroup::cyclic(12).unwrap();
        assert_eq!(g.torsion_kernel(0), g.torsion_kernel(12));
        assert_eq!(g.torsion_kernel(5), g.torsion_kernel(1));
        assert_eq!(g.torsion_kernel(8), g.torsion_kernel(4));
        let z = FgAbelianGroup::integers(1);
        assert_eq!(z.torsion_kernel(7), z.trivial_kernel());
        assert_ne!(z.full_kernel(), z.trivial_kernel());
    }

    #[test]
    fn kernel_orders_in_z8() {
        let g = FgAbelianGroup::cyclic(8).unwrap();
        let orders: Vec<_> = g.all_kernels().iter().map(|&k| g.kernel_order(k)).collect();
        assert_eq!(orders, vec![Some(8), Some(4), Some(2), Some(1)]);
        assert!(g.kernel_le(g.torsion_kernel(2), g.torsion_kernel(4)));
        assert!(!g.kernel_le(g.torsion_kernel(4), g.torsion_kernel(2)));
    }

    #[test]
    fn coset_intersection_by_crt() {
        let g = FgAbelianGroup::cyclic(12).unwrap();
        let a = g.coset(g.parse_element("3").unwrap(), g.torsion_kernel(2));
        let b = g.coset(g.parse_element("2").unwrap(), g.torsion_kernel(3));
        // {3,9} ∩ {2,6,10} = ∅
        assert_eq!(g.coset_intersection(&a, &b), None);
        let c = g.coset(g.parse_element("1").unwrap(), g.torsion_kernel(4));
        // {3,9} ∩ {1,4,7,10} = ∅ ; {1,4,7,10} ∩ {1,7} = {1,7}
        assert_eq!(g.coset_intersection(&a, &c), None);
        let d = g.coset(g.parse_element("7").unwrap(), g.torsion_kernel(2));
        let meet = g.coset_intersection(&c, &d).unwrap();
        assert_eq!(meet, d);
    }

    #[test]
    fn transversal_sizes() {
        let g = FgAbelianGroup::new(0, vec![4, 4]).unwrap();
        let t: Vec<_> = g.transversal(g.full_kernel(), g.torsion_kernel(2)).collect();
        assert_eq!(t.len(), 4);
        let t: Vec<_> = g.transversal(g.torsion_kernel(2), g.trivial_kernel()).collect();
        assert_eq!(t.len(), 4);
        assert!(t.iter().all(|x| x.coords.iter().all(|c| c % 2 == 0)));
    }

    #[test]
    fn element_syntax() {
        let g = FgAbelianGroup::new(1, vec![3]).unwrap();
        assert_eq!(g.parse_element("(-2,4)").unwrap().coords, vec![-2, 1]);
        assert_eq!(g.parse_element("e1").unwrap().coords, vec![0, 1]);
        assert_eq!(g.parse_element("5"), None);
        assert_eq!(g.format_element(&g.parse_element("(1, 2)").unwrap()), "(1,2)");
    }

    #[test]
    fn enumerate_is_lexicographic() {
        let g = FgAbelianGroup::new(0, vec![2, 4]).unwrap();
        let all = g.enumerate().unwrap();
        assert_eq!(all.len(), 8);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn crt_basic() {
        assert_eq!(crt(5, 6, 3, 8), Some((11, 24)));
        assert_eq!(crt(1, 4, 2, 6), None);
    }
}
