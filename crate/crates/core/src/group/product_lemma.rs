use serde::Serialize;

use super::{subgroup_generated, FiniteGroup, Group, GroupError, SubgroupHandle};

/// `G' × G'` for a finite `G'`, computed coordinatewise without building a
/// Cayley table of the product.
#[derive(Debug, Clone)]
pub struct ProductView {
    factor: FiniteGroup,
}

impl ProductView {
    pub fn new(factor: FiniteGroup) -> Self {
        ProductView { factor }
    }

    pub fn factor(&self) -> &FiniteGroup {
        &self.factor
    }
}

impl Group for ProductView {
    type Elem = (usize, usize);

    fn identity(&self) -> (usize, usize) {
        let e = self.factor.identity_index();
        (e, e)
    }

    fn op(&self, a: &(usize, usize), b: &(usize, usize)) -> (usize, usize) {
        (self.factor.mul(a.0, b.0), self.factor.mul(a.1, b.1))
    }

    fn inv(&self, a: &(usize, usize)) -> (usize, usize) {
        let inv = self.factor.inverse_table();
        (inv[a.0], inv[a.1])
    }

    fn is_element(&self, a: &(usize, usize)) -> bool {
        a.0 < self.factor.order() && a.1 < self.factor.order()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductLemmaReport {
    pub n_order: usize,
    pub h_order: usize,
    pub gstar_order: usize,
    pub index: usize,
    pub index_is_two: bool,
    pub projection_injective: bool,
    pub projection_onto_n: bool,
    pub projection_homomorphism: bool,
    pub passes: bool,
}

#[derive(Debug, Clone)]
pub struct ProductLemmaConstruction {
    /// `N = N1 × N2`.
    pub n: FiniteGroup,
    /// `G' = N ⋊ ⟨f⟩`; `(n, b)` has index `b·|N| + n`.
    pub gprime: FiniteGroup,
    pub view: ProductView,
    /// `H = ⟨(f,f), N×{1}⟩ ≤ G' × G'`.
    pub h: SubgroupHandle<(usize, usize)>,
    /// `G* = H ∩ (G' × {1})`.
    pub gstar: Vec<(usize, usize)>,
    pub report: ProductLemmaReport,
}

pub fn product_lemma_construct(
    n1: &FiniteGroup,
    n2: &FiniteGroup,
    f: &[usize],
) -> Result<ProductLemmaConstruction, GroupError> {
    let n = FiniteGroup::direct_product(n1, n2)?;
    let gprime = FiniteGroup::semidirect_involution(&n, f)?;
    let m = n.order();
    let e = gprime.identity_index();
    let view = ProductView::new(gprime.clone());
    let f_elem = m + n.identity_index();
    let mut gens = vec![(f_elem, f_elem)];
    gens.extend((0..m).map(|x| (x, e)));
    let h = subgroup_generated(&view, &gens, 4 * m + 4);
    let gstar: Vec<(usize, usize)> = h.elements().iter().copied().filter(|p| p.1 == e).collect();

    let image: Vec<usize> = gstar.iter().map(|p| p.0).collect();
    let mut sorted = image.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let projection_injective = sorted.len() == image.len();
    let projection_onto_n = sorted == (0..m).collect::<Vec<_>>();
    let projection_homomorphism = gstar.iter().all(|a| {
        gstar
            .iter()
            .all(|b| view.op(a, b).0 == gprime.mul(a.0, b.0))
    });
    let index = if gstar.is_empty() { 0 } else { h.order() / gstar.len() };
    let index_is_two = !gstar.is_empty() && h.order() == 2 * gstar.len();
    let report = ProductLemmaReport {
        n_order: m,
        h_order: h.order(),
        gstar_order: gstar.len(),
        index,
        index_is_two,
        projection_injective,
        projection_onto_n,
        projection_homomorphism,
        passes: h.stabilized()
            && index_is_two
            && projection_injective
            && projection_onto_n
            && projection_homomorphism,
    };
    Ok(ProductLemmaConstruction {
        n,
        gprime,
        view,
        h,
        gstar,
        report,
    })
}

/// Every automorphism `f` of `g` with `f∘f = id`, as image tables, in
/// lexicographic order of the generator images.
pub fn involutive_automorphisms(g: &FiniteGroup) -> Vec<Vec<usize>> {
    // Greedy generating set: repeatedly take the first element outside the
    // subgroup generated so far.
    let mut gens: Vec<usize> = Vec::new();
    let mut span = super::subgroup_generated_finite(g, &[]);
    while span.order() < g.order() {
        let x = (0..g.order()).find(|x| !span.contains(x)).expect("proper subgroup");
        gens.push(x);
        span = super::subgroup_generated_finite(g, &gens);
    }
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let o = g.element_order(s);
            (0..g.order()).filter(|&y| g.element_order(y) == o).collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&c, v)| v[c]).collect();
        if let Some(map) = extend_homomorphism(g, &gens, &images) {
            if (0..g.order()).all(|x| map[map[x]] == x) {
                out.push(map);
            }
        }
        let mut i = gens.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < candidates[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

fn extend_homomorphism(g: &FiniteGroup, gens: &[usize], images: &[usize]) -> Option<Vec<usize>> {
    let n = g.order();
    let mut map = vec![usize::MAX; n];
    let e = g.identity_index();
    map[e] = e;
    let mut queue = vec![e];
    while let Some(a) = queue.pop() {
        for (&s, &t) in gens.iter().zip(images) {
            let b = g.mul(a, s);
            let fb = g.mul(map[a], t);
            if map[b] == usize::MAX {
                map[b] = fb;
                queue.push(b);
            } else if map[b] != fb {
                return None;
            }
        }
    }
    super::finite::check_automorphism(g, &map).ok()?;
    Some(map)
}
