use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{
    split_top_level, subgroup_generated, AbelianElement, ElementSyntax, Enumerable,
    FgAbelianGroup, FiniteGroup, Group, GroupError, SubgroupHandle,
};
use crate::snf::{self, smith_normal_form};

/// A summand of a direct sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    Finite(FiniteGroup),
    Abelian(FgAbelianGroup),
}

/// The value of one coordinate of a direct-sum element.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FactorValue {
    Finite(usize),
    Abelian(AbelianElement),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexKind {
    /// Indices `0..n`.
    Finite(usize),
    /// Indices `0, 1, 2, …`.
    Naturals,
}

/// A finitely supported element: index ↦ non-identity coordinate value,
/// sorted by index. Identity coordinates are never stored, so equality is
/// structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SupportMap(pub BTreeMap<usize, FactorValue>);

impl SupportMap {
    pub fn support(&self) -> BTreeSet<usize> {
        self.0.keys().copied().collect()
    }
}

/// `⊕_{i∈I} G_i`. Factors are listed once per index for a finite index set;
/// for the index set ℕ the list is repeated cyclically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectSumGroup {
    index: IndexKind,
    factors: Vec<Factor>,
}

impl Factor {
    fn identity(&self) -> FactorValue {
        match self {
            Factor::Finite(g) => FactorValue::Finite(g.identity()),
            Factor::Abelian(g) => FactorValue::Abelian(g.zero()),
        }
    }

    fn op(&self, a: &FactorValue, b: &FactorValue) -> FactorValue {
        match (self, a, b) {
            (Factor::Finite(g), FactorValue::Finite(x), FactorValue::Finite(y)) => {
                FactorValue::Finite(g.mul(*x, *y))
            }
            (Factor::Abelian(g), FactorValue::Abelian(x), FactorValue::Abelian(y)) => {
                FactorValue::Abelian(g.add(x, y))
            }
            _ => panic!("factor value does not match factor"),
        }
    }

    fn inv(&self, a: &FactorValue) -> FactorValue {
        match (self, a) {
            (Factor::Finite(g), FactorValue::Finite(x)) => FactorValue::Finite(g.inv(x)),
            (Factor::Abelian(g), FactorValue::Abelian(x)) => FactorValue::Abelian(g.neg(x)),
            _ => panic!("factor value does not match factor"),
        }
    }

    fn is_value(&self, a: &FactorValue) -> bool {
        match (self, a) {
            (Factor::Finite(g), FactorValue::Finite(x)) => g.is_element(x),
            (Factor::Abelian(g), FactorValue::Abelian(x)) => g.is_element(x),
            _ => false,
        }
    }

    fn parse(&self, s: &str) -> Option<FactorValue> {
        match self {
            Factor::Finite(g) => g.parse_element(s).map(FactorValue::Finite),
            Factor::Abelian(g) => g.parse_element(s).map(FactorValue::Abelian),
        }
    }

    fn format(&self, a: &FactorValue) -> String {
        match (self, a) {
            (Factor::Finite(g), FactorValue::Finite(x)) => g.format_element(x),
            (Factor::Abelian(g), FactorValue::Abelian(x)) => g.format_element(x),
            _ => panic!("factor value does not match factor"),
        }
    }

    fn json(&self, a: &FactorValue) -> serde_json::Value {
        match (self, a) {
            (Factor::Finite(g), FactorValue::Finite(x)) => g.element_json(x),
            (Factor::Abelian(g), FactorValue::Abelian(x)) => g.element_json(x),
            _ => panic!("factor value does not match factor"),
        }
    }

    /// A distinguished generator-like element used by the `e<i>` syntax.
    fn unit(&self) -> Option<FactorValue> {
        match self {
            Factor::Finite(g) if g.order() > 1 => {
                Some(FactorValue::Finite((0..g.order()).find(|&x| x != g.identity())?))
            }
            Factor::Abelian(g) if g.dim() > 0 => Some(FactorValue::Abelian(g.basis(0))),
            _ => None,
        }
    }

    fn order(&self) -> Option<u128> {
        match self {
            Factor::Finite(g) => Some(g.order() as u128),
            Factor::Abelian(g) => g.order(),
        }
    }

    fn elements(&self) -> Vec<FactorValue> {
        match self {
            Factor::Finite(g) => g.elements().into_iter().map(FactorValue::Finite).collect(),
            Factor::Abelian(g) => g.elements().into_iter().map(FactorValue::Abelian).collect(),
        }
    }
}

impl DirectSumGroup {
    pub fn new(factors: Vec<Factor>, index: IndexKind) -> Result<Self, GroupError> {
        if factors.is_empty() {
            return Err(GroupError::InvalidFactor("no factors given".into()));
        }
        if let IndexKind::Finite(n) = index {
            if factors.len() != n && factors.len() != 1 {
                return Err(GroupError::InvalidFactor(format!(
                    "{} factors for an index set of size {n}",
                    factors.len()
                )));
            }
        }
        Ok(DirectSumGroup { index, factors })
    }

    /// `⊕_{i<n} F` or `⊕_{i∈ℕ} F` for a single repeated factor.
    pub fn power(factor: Factor, index: IndexKind) -> Result<Self, GroupError> {
        Self::new(vec![factor], index)
    }

    /// `⊕_{i<n} G_i`, which contains every element supported below `n`.
    pub fn truncated(&self, n: usize) -> Result<Self, GroupError> {
        if let IndexKind::Finite(m) = self.index {
            if n > m {
                return Err(GroupError::InvalidFactor(format!("cannot extend {m} factors to {n}")));
            }
        }
        let n = n.max(1);
        Self::new((0..n).map(|i| self.factor(i).clone()).collect(), IndexKind::Finite(n))
    }

    pub fn index_kind(&self) -> IndexKind {
        self.index
    }

    pub fn factor(&self, i: usize) -> &Factor {
        &self.factors[i % self.factors.len()]
    }

    pub fn in_index(&self, i: usize) -> bool {
        match self.index {
            IndexKind::Finite(n) => i < n,
            IndexKind::Naturals => true,
        }
    }

    /// Order when every factor is finite and the index set is finite.
    pub fn order(&self) -> Option<u128> {
        match self.index {
            IndexKind::Naturals => None,
            IndexKind::Finite(n) => (0..n).try_fold(1u128, |acc, i| {
                acc.checked_mul(self.factor(i).order()?)
            }),
        }
    }

    /// Builds an element from index/value pairs, dropping identity values.
    pub fn element(
        &self,
        entries: impl IntoIterator<Item = (usize, FactorValue)>,
    ) -> Result<SupportMap, GroupError> {
        let mut map = BTreeMap::new();
        for (i, v) in entries {
            if !self.in_index(i) || !self.factor(i).is_value(&v) {
                return Err(GroupError::ShapeMismatch(format!("index {i}")));
            }
            if v != self.factor(i).identity() {
                map.insert(i, v);
            }
        }
        Ok(SupportMap(map))
    }

    /// The canonical copy of `G_i` is the set of elements supported on `{i}`.
    pub fn in_summand(&self, x: &SupportMap, j: &BTreeSet<usize>) -> bool {
        x.0.keys().all(|i| j.contains(i))
    }

    /// Lists the elements of a finite direct sum in lexicographic order of
    /// the coordinate tuple.
    pub fn enumerate(&self) -> Result<Vec<SupportMap>, GroupError> {
        let IndexKind::Finite(n) = self.index else {
            return Err(GroupError::TooLarge("unbounded index set".into()));
        };
        match self.order() {
            Some(o) if o <= 1 << 20 => {}
            other => return Err(GroupError::TooLarge(format!("order {other:?}"))),
        }
        let per: Vec<Vec<FactorValue>> = (0..n).map(|i| self.factor(i).elements()).collect();
        let mut out = Vec::new();
        let mut cur = vec![0usize; n];
        loop {
            let entries = (0..n).map(|i| (i, per[i][cur[i]].clone()));
            out.push(self.element(entries)?);
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < per[i].len() {
                    break;
                }
                cur[i] = 0;
            }
        }
    }
}

impl Group for DirectSumGroup {
    type Elem = SupportMap;

    fn identity(&self) -> SupportMap {
        SupportMap::default()
    }

    fn op(&self, a: &SupportMap, b: &SupportMap) -> SupportMap {
        let mut out = a.0.clone();
        for (i, v) in &b.0 {
            let f = self.factor(*i);
            let r = match out.get(i) {
                Some(u) => f.op(u, v),
                None => v.clone(),
            };
            if r == f.identity() {
                out.remove(i);
            } else {
                out.insert(*i, r);
            }
        }
        SupportMap(out)
    }

    fn inv(&self, a: &SupportMap) -> SupportMap {
        SupportMap(
            a.0.iter()
                .map(|(i, v)| (*i, self.factor(*i).inv(v)))
                .collect(),
        )
    }

    fn is_element(&self, a: &SupportMap) -> bool {
        a.0.iter().all(|(i, v)| {
            self.in_index(*i) && self.factor(*i).is_value(v) && *v != self.factor(*i).identity()
        })
    }
}

impl Enumerable for DirectSumGroup {
    /// Panics unless the sum is finite and small; see [`DirectSumGroup::enumerate`].
    fn elements(&self) -> Vec<SupportMap> {
        self.enumerate().expect("finite direct sum")
    }
}

impl ElementSyntax for DirectSumGroup {
    /// `{i:v, j:w}` with factor-level values, `{}` or `e` for the identity,
    /// `e<i>` for the distinguished unit of factor `i`.
    fn parse_element(&self, token: &str) -> Option<SupportMap> {
        let token = token.trim();
        if token == "e" {
            return Some(self.identity());
        }
        if let Some(i) = token.strip_prefix('e').and_then(|s| s.parse::<usize>().ok()) {
            if !self.in_index(i) {
                return None;
            }
            return self.element([(i, self.factor(i).unit()?)]).ok();
        }
        let inner = token.strip_prefix('{')?.strip_suffix('}')?;
        if inner.trim().is_empty() {
            return Some(self.identity());
        }
        let mut entries = Vec::new();
        let mut seen = BTreeSet::new();
        for part in split_top_level(inner, ',') {
            let (k, v) = part.split_once(':')?;
            let i: usize = k.trim().parse().ok()?;
            if !self.in_index(i) || !seen.insert(i) {
                return None;
            }
            entries.push((i, self.factor(i).parse(v.trim())?));
        }
        self.element(entries).ok()
    }

    fn format_element(&self, e: &SupportMap) -> String {
        let parts: Vec<String> = e
            .0
            .iter()
            .map(|(i, v)| format!("{i}:{}", self.factor(*i).format(v)))
            .collect();
        format!("{{{}}}", parts.join(","))
    }

    fn element_json(&self, e: &SupportMap) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = e
            .0
            .iter()
            .map(|(i, v)| (i.to_string(), self.factor(*i).json(v)))
            .collect();
        serde_json::Value::Object(map)
    }
}

impl fmt::Display for SupportMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// `H_J = H ∩ G_J` where `G_J = ⊕_{i∈J} G_i`, by closing the generators
/// and keeping the elements supported in `J`. The result inherits the
/// stabilization flag of the closure.
pub fn summand_intersection(
    g: &DirectSumGroup,
    gens: &[SupportMap],
    j: &BTreeSet<usize>,
    fuel: usize,
) -> SubgroupHandle<SupportMap> {
    let h = subgroup_generated(g, gens, fuel);
    let elements: Vec<SupportMap> = h
        .elements()
        .iter()
        .filter(|x| g.in_summand(x, j))
        .cloned()
        .collect();
    SubgroupHandle::from_parts(elements.clone(), Some(elements), h.stabilized(), h.stages())
}

/// Isomorphism between a finite-index direct sum of finitely generated
/// abelian factors and its invariant-factor form.
#[derive(Debug, Clone)]
pub struct AbelianIso {
    source: DirectSumGroup,
    n: usize,
    offsets: Vec<usize>,
    moduli: Vec<u64>,
    target: FgAbelianGroup,
    /// `None` when the concatenated coordinates are already in
    /// invariant-factor order.
    change: Option<BasisChange>,
}

#[derive(Debug, Clone)]
struct BasisChange {
    /// Rows of `U` kept in the target, in target order.
    forward: Vec<Vec<i64>>,
    /// Columns of `U⁻¹` for the kept rows, as rows indexed by source
    /// coordinate.
    backward: Vec<Vec<i64>>,
}

impl AbelianIso {
    pub fn new(g: &DirectSumGroup) -> Result<Self, GroupError> {
        let IndexKind::Finite(n) = g.index_kind() else {
            return Err(GroupError::InvalidFactor(
                "unbounded direct sum has no invariant-factor form; truncate it first".into(),
            ));
        };
        let mut offsets = Vec::with_capacity(n);
        let mut moduli = Vec::new();
        for i in 0..n {
            let Factor::Abelian(a) = g.factor(i) else {
                return Err(GroupError::NotAbelian);
            };
            offsets.push(moduli.len());
            moduli.extend(a.moduli());
        }
        let free = moduli.iter().filter(|&&m| m == 0).count();
        let torsion: Vec<u64> = moduli.iter().copied().filter(|&m| m != 0).collect();
        let in_order = moduli[..free].iter().all(|&m| m == 0)
            && torsion.windows(2).all(|w| w[1] % w[0] == 0);
        if in_order {
            let target = FgAbelianGroup::new(free, torsion)?;
            return Ok(AbelianIso {
                source: g.clone(),
                n,
                offsets,
                moduli,
                target,
                change: None,
            });
        }
        let t = moduli.len();
        let d0: Vec<Vec<i64>> = (0..t)
            .map(|i| (0..t).map(|j| if i == j { moduli[i] as i64 } else { 0 }).collect())
            .collect();
        let s = smith_normal_form(&snf::from_i64(&d0), t, t);
        let diag: Vec<BigInt> = s.diag.clone();
        let mut free_rows = Vec::new();
        let mut tors_rows = Vec::new();
        for (i, d) in diag.iter().enumerate() {
            if d.is_zero() {
                free_rows.push(i);
            } else if *d > BigInt::from(1) {
                tors_rows.push(i);
            }
        }
        let invariants: Vec<u64> = tors_rows.iter().map(|&i| snf::to_i64(&diag[i]) as u64).collect();
        let target = FgAbelianGroup::new(free_rows.len(), invariants)?;
        let rows: Vec<usize> = free_rows.into_iter().chain(tors_rows).collect();
        let forward = rows
            .iter()
            .map(|&r| s.u[r].iter().map(snf::to_i64).collect())
            .collect();
        let backward = (0..t)
            .map(|c| rows.iter().map(|&r| snf::to_i64(&s.u_inv[c][r])).collect())
            .collect();
        Ok(AbelianIso {
            source: g.clone(),
            n,
            offsets,
            moduli,
            target,
            change: Some(BasisChange { forward, backward }),
        })
    }

    pub fn target(&self) -> &FgAbelianGroup {
        &self.target
    }

    pub fn source(&self) -> &DirectSumGroup {
        &self.source
    }

    fn raw_coords(&self, x: &SupportMap) -> Vec<i64> {
        let mut raw = vec![0i64; self.moduli.len()];
        for (i, v) in &x.0 {
            if let FactorValue::Abelian(a) = v {
                raw[self.offsets[*i]..self.offsets[*i] + a.coords.len()]
                    .copy_from_slice(&a.coords);
            }
        }
        raw
    }

    pub fn forward(&self, x: &SupportMap) -> AbelianElement {
        let raw = self.raw_coords(x);
        match &self.change {
            None => self.target.reduce(raw),
            Some(c) => self.target.reduce(
                c.forward
                    .iter()
                    .map(|row| {
                        let s: i128 = row
                            .iter()
                            .zip(&raw)
                            .map(|(&u, &v)| u as i128 * v as i128)
                            .sum();
                        s as i64
                    })
                    .collect(),
            ),
        }
    }

    pub fn backward(&self, y: &AbelianElement) -> SupportMap {
        let raw: Vec<i64> = match &self.change {
            None => y.coords.clone(),
            Some(c) => c
                .backward
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let s: i128 = row
                        .iter()
                        .zip(&y.coords)
                        .map(|(&u, &v)| u as i128 * v as i128)
                        .sum();
                    match self.moduli[i] {
                        0 => s as i64,
                        m => s.rem_euclid(m as i128) as i64,
                    }
                })
                .collect(),
        };
        let entries = (0..self.n).map(|i| {
            let Factor::Abelian(a) = self.source.factor(i) else {
                unreachable!()
            };
            let lo = self.offsets[i];
            (i, FactorValue::Abelian(a.reduce(raw[lo..lo + a.dim()].to_vec())))
        });
        self.source.element(entries).expect("coordinates are in range")
    }
}
