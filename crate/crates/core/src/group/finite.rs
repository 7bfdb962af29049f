use std::collections::HashMap;

use super::{split_top_level, ElementSyntax, Enumerable, Group, GroupError};

/// A finite group given by a validated Cayley table.
///
/// Elements are indices `0..order`. `table[a * order + b]` is the index of
/// `a * b`. Construction checks the Latin-square property and associativity,
/// so every downstream oracle can rely on a genuine group law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverse: Vec<usize>,
    labels: Option<Vec<String>>,
    label_index: HashMap<String, usize>,
}

impl FiniteGroup {
    /// Validates a raw Cayley table and derives identity and inverses.
    pub fn from_table(
        table: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        let order = table.len();
        if order == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        let mut flat = Vec::with_capacity(order * order);
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::InvalidTable(format!(
                    "row {i} has length {} (expected {order})",
                    row.len()
                )));
            }
            for &v in row {
                if v >= order {
                    return Err(GroupError::InvalidTable(format!(
                        "entry {v} out of range in row {i}"
                    )));
                }
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat(order, flat, labels)
    }

    pub(crate) fn from_flat(
        order: usize,
        table: Vec<usize>,
        labels: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        // Latin square: every row and column is a permutation.
        let mut seen = vec![usize::MAX; order];
        for i in 0..order {
            for j in 0..order {
                let v = table[i * order + j];
                if seen[v] == i {
                    return Err(GroupError::InvalidTable(format!("row {i} repeats {v}")));
                }
                seen[v] = i;
            }
        }
        seen.iter_mut().for_each(|s| *s = usize::MAX);
        for j in 0..order {
            for i in 0..order {
                let v = table[i * order + j];
                if seen[v] == j {
                    return Err(GroupError::InvalidTable(format!("column {j} repeats {v}")));
                }
                seen[v] = j;
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|j| table[e * order + j] == j && table[j * order + e] == j))
            .ok_or_else(|| GroupError::InvalidTable("no two-sided identity".into()))?;
        let mut inverse = vec![0; order];
        for (a, slot) in inverse.iter_mut().enumerate() {
            // Latin rows guarantee a unique right inverse.
            let b = (0..order)
                .find(|&b| table[a * order + b] == identity)
                .expect("latin square has an identity in every row");
            if table[b * order + a] != identity {
                return Err(GroupError::InvalidTable(format!(
                    "element {a} has no two-sided inverse"
                )));
            }
            *slot = b;
        }
        for a in 0..order {
            for b in 0..order {
                let ab = table[a * order + b];
                for c in 0..order {
                    let bc = table[b * order + c];
                    if table[ab * order + c] != table[a * order + bc] {
                        return Err(GroupError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let mut label_index = HashMap::new();
        if let Some(labels) = &labels {
            if labels.len() != order {
                return Err(GroupError::InvalidLabel(format!(
                    "{} labels for a group of order {order}",
                    labels.len()
                )));
            }
            for (i, l) in labels.iter().enumerate() {
                validate_label(l)?;
                if l == "e" && i != identity {
                    return Err(GroupError::InvalidLabel(
                        "label \"e\" is reserved for the identity".into(),
                    ));
                }
                if label_index.insert(l.clone(), i).is_some() {
                    return Err(GroupError::InvalidLabel(format!("duplicate label {l:?}")));
                }
            }
        }
        Ok(FiniteGroup {
            order,
            table,
            identity,
            inverse,
            labels,
            label_index,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity_index(&self) -> usize {
        self.identity
    }

    pub fn inverse_table(&self) -> &[usize] {
        &self.inverse
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Replaces the labels, keeping the table.
    pub fn with_labels(self, labels: Vec<String>) -> Result<Self, GroupError> {
        Self::from_flat(self.order, self.table, Some(labels))
    }

    /// Induced group on a subset closed under the law. Elements are
    /// renumbered in the order given.
    pub fn restrict_to(&self, elements: &[usize]) -> Result<Self, GroupError> {
        let mut pos = vec![usize::MAX; self.order];
        for (i, &e) in elements.iter().enumerate() {
            pos[e] = i;
        }
        let n = elements.len();
        let mut table = Vec::with_capacity(n * n);
        for &a in elements {
            for &b in elements {
                let p = pos[self.mul(a, b)];
                if p == usize::MAX {
                    return Err(GroupError::NotSubgroup("subset not closed".into()));
                }
                table.push(p);
            }
        }
        let labels = elements.iter().map(|&e| self.label(e)).collect();
        Self::from_flat(n, table, Some(labels))
    }

    // ---- builders -------------------------------------------------------

    /// ℤ/n with labels `0..n-1`.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::InvalidTable("cyclic group of order 0".into()));
        }
        let table = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::from_flat(n, table, Some(labels))
    }

    /// Dihedral group of order `2n`; element `s^b r^i` has index `b*n + i`
    /// and label `r{i}` / `sr{i}` (`e`, `r`, `s`, `sr` for small exponents).
    pub fn dihedral(n: usize) -> Result<Self, GroupError> {
        if n < 1 {
            return Err(GroupError::InvalidTable("dihedral group needs n >= 1".into()));
        }
        let order = 2 * n;
        let mut table = Vec::with_capacity(order * order);
        for a in 0..order {
            let (b, i) = (a / n, a % n);
            for c_idx in 0..order {
                let (c, j) = (c_idx / n, c_idx % n);
                // s^b r^i s^c r^j = s^{b+c} r^{(-1)^c i + j}
                let rot = if c == 0 { (i + j) % n } else { (n - i + j) % n };
                table.push(((b + c) % 2) * n + rot);
            }
        }
        let labels = (0..order)
            .map(|a| {
                let (b, i) = (a / n, a % n);
                let r = match i {
                    0 => String::new(),
                    1 => "r".to_string(),
                    _ => format!("r{i}"),
                };
                match (b, i) {
                    (0, 0) => "e".to_string(),
                    (0, _) => r,
                    _ => format!("s{r}"),
                }
            })
            .collect();
        Self::from_flat(order, table, Some(labels))
    }

    /// Symmetric group on `{1,…,n}` for `n ≤ 5`, labelled in cycle
    /// notation. The product `g·h` applies `h` first.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n == 0 || n > 5 {
            return Err(GroupError::TooLarge(format!("symmetric({n}) needs 1 <= n <= 5")));
        }
        let perms = permutations(n);
        Self::from_permutations(&perms)
    }

    /// Alternating group on `{1,…,n}` for `n ≤ 5`.
    pub fn alternating(n: usize) -> Result<Self, GroupError> {
        if n == 0 || n > 5 {
            return Err(GroupError::TooLarge(format!("alternating({n}) needs 1 <= n <= 5")));
        }
        let perms: Vec<_> = permutations(n).into_iter().filter(|p| is_even(p)).collect();
        Self::from_permutations(&perms)
    }

    fn from_permutations(perms: &[Vec<usize>]) -> Result<Self, GroupError> {
        let index: HashMap<&[usize], usize> =
            perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let order = perms.len();
        let mut table = Vec::with_capacity(order * order);
        for g in perms {
            for h in perms {
                let gh: Vec<usize> = h.iter().map(|&x| g[x]).collect();
                let idx = *index
                    .get(gh.as_slice())
                    .ok_or_else(|| GroupError::InvalidTable("permutations not closed".into()))?;
                table.push(idx);
            }
        }
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        Self::from_flat(order, table, Some(labels))
    }

    /// The quaternion group Q8 with labels `1,-1,i,-i,j,-j,k,-k`.
    pub fn quaternion() -> Result<Self, GroupError> {
        // Encode ±unit as (sign, unit) with unit in {1,i,j,k} = 0..4.
        // Unit products: (u*v) = sign * w.
        const UNIT: [[(i8, usize); 4]; 4] = [
            [(1, 0), (1, 1), (1, 2), (1, 3)],
            [(1, 1), (-1, 0), (1, 3), (-1, 2)],
            [(1, 2), (-1, 3), (-1, 0), (1, 1)],
            [(1, 3), (1, 2), (-1, 1), (-1, 0)],
        ];
        let decode = |a: usize| (if a.is_multiple_of(2) { 1i8 } else { -1 }, a / 2);
        let mut table = Vec::with_capacity(64);
        for a in 0..8 {
            for b in 0..8 {
                let (sa, ua) = decode(a);
                let (sb, ub) = decode(b);
                let (s, w) = UNIT[ua][ub];
                let sign = sa * sb * s;
                table.push(w * 2 + usize::from(sign < 0));
            }
        }
        let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::from_flat(8, table, Some(labels))
    }

    /// Direct product `a × b`; the pair `(x, y)` has index `x*|b| + y` and
    /// label `(x,y)`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<Self, GroupError> {
        let (na, nb) = (a.order, b.order);
        let order = na * nb;
        if order > 4096 {
            return Err(GroupError::TooLarge(format!("product of order {order}")));
        }
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                let (x1, x2) = (x / nb, x % nb);
                let (y1, y2) = (y / nb, y % nb);
                table.push(a.mul(x1, y1) * nb + b.mul(x2, y2));
            }
        }
        let labels = (0..order)
            .map(|x| format!("({},{})", a.label(x / nb), b.label(x % nb)))
            .collect();
        Self::from_flat(order, table, Some(labels))
    }

    /// `N ⋊ ⟨f⟩` for an abelian `N` and an involutive automorphism `f`
    /// (given as the image table `f[n]`). The element `(n, b)` has index
    /// `b*|N| + n`; the law is `(n,b)(n',b') = (n·f^b(n'), b⊕b')`.
    pub fn semidirect_involution(n: &FiniteGroup, f: &[usize]) -> Result<Self, GroupError> {
        if !n.is_abelian() {
            return Err(GroupError::NotAbelian);
        }
        check_automorphism(n, f)?;
        if (0..n.order).any(|x| f[f[x]] != x) {
            return Err(GroupError::NotInvolution);
        }
        let m = n.order;
        let order = 2 * m;
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            let (b, nx) = (x / m, x % m);
            for y in 0..order {
                let (c, ny) = (y / m, y % m);
                let twisted = if b == 1 { f[ny] } else { ny };
                table.push(((b + c) % 2) * m + n.mul(nx, twisted));
            }
        }
        let labels = (0..order)
            .map(|x| {
                if x < m {
                    n.label(x)
                } else {
                    format!("{}f", n.label(x - m))
                }
            })
            .collect();
        Self::from_flat(order, table, Some(labels))
    }
}

/// Checks that `f` is a bijective homomorphism of `g`.
pub(crate) fn check_automorphism(g: &FiniteGroup, f: &[usize]) -> Result<(), GroupError> {
    let n = g.order;
    if f.len() != n {
        return Err(GroupError::NotAutomorphism(format!(
            "map has {} entries, group has {n} elements",
            f.len()
        )));
    }
    let mut hit = vec![false; n];
    for &y in f {
        if y >= n || std::mem::replace(&mut hit[y], true) {
            return Err(GroupError::NotAutomorphism("not a bijection".into()));
        }
    }
    for a in 0..n {
        for b in 0..n {
            if f[g.mul(a, b)] != g.mul(f[a], f[b]) {
                return Err(GroupError::NotAutomorphism(format!(
                    "f({a}*{b}) != f({a})*f({b})"
                )));
            }
        }
    }
    Ok(())
}

fn validate_label(l: &str) -> Result<(), GroupError> {
    let bad = l.is_empty()
        || l.chars().any(|c| c.is_whitespace() || c == '=')
        || matches!(l, "x" | "x^-1" | "x^1");
    let mut depth = 0i32;
    for c in l.chars() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            break;
        }
    }
    if bad || depth != 0 {
        return Err(GroupError::InvalidLabel(format!("{l:?}")));
    }
    Ok(())
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn is_even(p: &[usize]) -> bool {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            out.push_str(&(x + 1).to_string());
            x = p[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        "e".to_string()
    } else {
        out
    }
}

impl Group for FiniteGroup {
    type Elem = usize;

    fn identity(&self) -> usize {
        self.identity
    }

    fn op(&self, a: &usize, b: &usize) -> usize {
        self.mul(*a, *b)
    }

    fn inv(&self, a: &usize) -> usize {
        self.inverse[*a]
    }

    fn is_element(&self, a: &usize) -> bool {
        *a < self.order
    }
}

impl Enumerable for FiniteGroup {
    fn elements(&self) -> Vec<usize> {
        (0..self.order).collect()
    }

    fn order(&self) -> usize {
        self.order
    }
}

impl ElementSyntax for FiniteGroup {
    fn parse_element(&self, token: &str) -> Option<usize> {
        if let Some(&i) = self.label_index.get(token) {
            return Some(i);
        }
        if token == "e" {
            return Some(self.identity);
        }
        if self.labels.is_none() {
            return token.parse::<usize>().ok().filter(|&i| i < self.order);
        }
        // Tolerate whitespace inside tuple labels such as "(r, e)".
        if token.starts_with('(') {
            let compact: String = split_top_level(&token[1..token.len().saturating_sub(1)], ',')
                .iter()
                .map(|p| p.trim())
                .collect::<Vec<_>>()
                .join(",");
            return self.label_index.get(&format!("({compact})")).copied();
        }
        None
    }

    fn format_element(&self, e: &usize) -> String {
        self.label(*e)
    }
}
