use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::group::{AbelianElement, FgAbelianGroup};
use crate::snf::{self, smith_normal_form, Snf};

/// Invariant-factor coordinates for `H = ⟨gens⟩ ≤ G`.
///
/// With `t` generators, `H ≅ ℤ^t / R` where `R` is the lattice of integer
/// relations among the generators. A Smith form `P·R·Q = D` gives the
/// coordinates `y = P·λ` of the element `Σ λ_l gens_l`.
#[derive(Debug, Clone)]
pub struct SubgroupCoordinates {
    ambient: FgAbelianGroup,
    generators: Vec<AbelianElement>,
    presentation: FgAbelianGroup,
    /// Row of `P` behind each presentation coordinate.
    rows: Vec<usize>,
    /// Modulus per presentation coordinate (0 for free).
    moduli: Vec<BigInt>,
    p: snf::Matrix,
    embed_images: Vec<AbelianElement>,
    /// Smith form of `[gens | diag(m)]`, used to solve membership.
    membership: Snf,
}

impl SubgroupCoordinates {
    pub fn new(g: &FgAbelianGroup, gens: &[AbelianElement]) -> Self {
        let d = g.dim();
        let r = g.rank();
        let s = g.invariants().len();
        let t = gens.len();
        let mut b = vec![vec![BigInt::zero(); t + s]; d];
        for (l, x) in gens.iter().enumerate() {
            for i in 0..d {
                b[i][l] = BigInt::from(x.coords[i]);
            }
        }
        for (q, &m) in g.invariants().iter().enumerate() {
            b[r + q][t + q] = BigInt::from(m);
        }
        let membership = smith_normal_form(&b, d, t + s);

        // Kernel of [gens | diag(m)] is spanned by the last columns of V;
        // their first t entries are the relations among the generators.
        let kernel_cols: Vec<usize> = (membership.rank..t + s).collect();
        let relations: snf::Matrix = (0..t)
            .map(|l| kernel_cols.iter().map(|&j| membership.v[l][j].clone()).collect())
            .collect();
        let rel = smith_normal_form(&relations, t, kernel_cols.len());

        let diag_at = |i: usize| -> BigInt {
            if i < rel.rank {
                rel.diag[i].clone()
            } else {
                BigInt::zero()
            }
        };
        let free_rows: Vec<usize> = (0..t).filter(|&i| diag_at(i).is_zero()).collect();
        let tors_rows: Vec<usize> = (0..t).filter(|&i| diag_at(i) > BigInt::one()).collect();
        let invariants: Vec<u64> = tors_rows
            .iter()
            .map(|&i| snf::to_i64(&diag_at(i)) as u64)
            .collect();
        let presentation =
            FgAbelianGroup::new(free_rows.len(), invariants).expect("Smith form gives a chain");
        let rows: Vec<usize> = free_rows.iter().chain(&tors_rows).copied().collect();
        let moduli: Vec<BigInt> = rows.iter().map(|&i| diag_at(i)).collect();

        let mut p = rel.u.clone();
        let mut p_inv = rel.u_inv.clone();
        let image = |p_inv: &snf::Matrix, row: usize| -> AbelianElement {
            let lambda: Vec<BigInt> = (0..t).map(|l| p_inv[l][row].clone()).collect();
            combine(g, gens, &lambda)
        };
        // Each row may be negated freely. Free coordinates are oriented so
        // that the first nonzero entry of the image is positive, torsion
        // coordinates so that the image is the lexicographically smaller one.
        for &row in free_rows.iter().chain(&tors_rows) {
            let img = image(&p_inv, row);
            let flip = if diag_at(row).is_zero() {
                img.coords.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0)
            } else {
                g.neg(&img) < img
            };
            if flip {
                for x in p[row].iter_mut() {
                    *x = -&*x;
                }
                for line in p_inv.iter_mut() {
                    line[row] = -&line[row];
                }
            }
        }
        let embed_images = rows.iter().map(|&row| image(&p_inv, row)).collect();
        SubgroupCoordinates {
            ambient: g.clone(),
            generators: gens.to_vec(),
            presentation,
            rows,
            moduli,
            p,
            embed_images,
            membership,
        }
    }

    pub fn ambient(&self) -> &FgAbelianGroup {
        &self.ambient
    }

    pub fn generators(&self) -> &[AbelianElement] {
        &self.generators
    }

    pub fn presentation(&self) -> &FgAbelianGroup {
        &self.presentation
    }

    /// Image of the `q`-th presentation basis vector.
    pub fn embed_basis(&self, q: usize) -> &AbelianElement {
        &self.embed_images[q]
    }

    pub fn embed(&self, y: &AbelianElement) -> AbelianElement {
        let mut acc = self.ambient.zero();
        for (c, img) in y.coords.iter().zip(&self.embed_images) {
            acc = self.ambient.add(&acc, &self.ambient.scale(*c, img));
        }
        acc
    }

    /// Inverse of [`Self::embed`] on its image; `None` off the subgroup.
    pub fn project(&self, x: &AbelianElement) -> Option<AbelianElement> {
        let m = &self.membership;
        let t = self.generators.len();
        let xb: Vec<BigInt> = x.coords.iter().map(|&c| BigInt::from(c)).collect();
        let w = snf::mul_vec(&m.u, &xb);
        let mut z = vec![BigInt::zero(); m.cols];
        for (i, wi) in w.iter().enumerate() {
            if i < m.rank {
                let (q, r) = wi.div_rem(&m.diag[i]);
                if !r.is_zero() {
                    return None;
                }
                z[i] = q;
            } else if !wi.is_zero() {
                return None;
            }
        }
        let full = snf::mul_vec(&m.v, &z);
        let lambda = &full[..t];
        let y: Vec<i64> = self
            .rows
            .iter()
            .zip(&self.moduli)
            .map(|(&row, modulus)| {
                let v: BigInt = self.p[row]
                    .iter()
                    .zip(lambda)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum();
                if modulus.is_zero() {
                    snf::to_i64(&v)
                } else {
                    let r = v.mod_floor(modulus);
                    debug_assert!(!r.is_negative());
                    snf::to_i64(&r)
                }
            })
            .collect();
        Some(AbelianElement::new(y))
    }

    pub fn contains(&self, x: &AbelianElement) -> bool {
        self.project(x).is_some()
    }
}

fn combine(g: &FgAbelianGroup, gens: &[AbelianElement], lambda: &[BigInt]) -> AbelianElement {
    let coords = (0..g.dim())
        .map(|i| {
            let v: BigInt = gens
                .iter()
                .zip(lambda)
                .map(|(x, l)| l * BigInt::from(x.coords[i]))
                .sum();
            match g.modulus(i) {
                0 => snf::to_i64(&v),
                m => snf::to_i64(&v.mod_floor(&BigInt::from(m))),
            }
        })
        .collect();
    AbelianElement::new(coords)
}
