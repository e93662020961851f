//! E_r pages of the column-filtration spectral sequence, computed
//! directly from the filtration:
//!
//!   Z_r^{s,q} = { x in F^s cap Tot^{s+q} : D x in F^{s+r} }
//!   E_r^{s,q} = Z_r^{s,q} / ( Z_{r-1}^{s+1,q-1} + D Z_{r-1}^{s-r+1,q+r-2} )
//!
//! with F^t = F^0 for t < 0. This route never touches the exact couple;
//! the couple module recomputes the same pages independently and the two
//! are cross-checked in tests.

use std::collections::BTreeMap;

use super::bicomplex::Bicomplex;
use super::matrix::{Mat, RowBasis};

/// Dimension grid of one page.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Page {
    pub r: usize,
    dims: BTreeMap<(usize, usize), usize>,
}

impl Page {
    pub fn dim(&self, m: usize, n: usize) -> usize {
        self.dims.get(&(m, n)).copied().unwrap_or(0)
    }

    pub fn grid(&self, width: usize, height: usize) -> Vec<Vec<usize>> {
        (0..width)
            .map(|m| (0..height).map(|n| self.dim(m, n)).collect())
            .collect()
    }

    /// Sum over the antidiagonal m + n = k.
    pub fn diagonal_sum(&self, k: usize) -> usize {
        self.dims
            .iter()
            .filter(|((m, n), _)| m + n == k)
            .map(|(_, &d)| d)
            .sum()
    }
}

/// Basis of Z_r^{s, k-s} in Tot^k coordinates.
pub(super) fn z_basis(b: &Bicomplex, r: usize, s: i64, k: i64) -> Vec<Vec<u64>> {
    if k < 0 {
        return Vec::new();
    }
    let k = k as usize;
    let tot = b.tot_dim(k);
    let s_clamped = s.max(0) as usize;
    let f_off = b.filtration_offset(k, s_clamped);
    let sub_dim = tot - f_off;
    if sub_dim == 0 {
        return Vec::new();
    }
    // Condition rows: components of D x in columns below s + r must die.
    let d = b.total_matrix(k);
    let bar = b.filtration_offset(k + 1, (s + r as i64).max(0) as usize);
    let mut cond = Mat::zeros(bar, sub_dim, b.modulus());
    for i in 0..bar {
        for j in 0..sub_dim {
            cond.set(i, j, d.get(i, f_off + j));
        }
    }
    cond.kernel_basis()
        .into_iter()
        .map(|x| {
            let mut full = vec![0u64; tot];
            full[f_off..].copy_from_slice(&x);
            full
        })
        .collect()
}

/// The page E_r. r = 0 is the cell grid itself.
pub fn page(b: &Bicomplex, r: usize) -> Page {
    let mut dims = BTreeMap::new();
    if r == 0 {
        for m in 0..b.width() {
            for n in 0..b.height() {
                if b.dim(m, n) > 0 {
                    dims.insert((m, n), b.dim(m, n));
                }
            }
        }
        return Page { r, dims };
    }
    for m in 0..b.width() {
        for n in 0..b.height() {
            if b.dim(m, n) == 0 {
                continue;
            }
            let k = (m + n) as i64;
            let s = m as i64;
            let num_vecs = z_basis(b, r, s, k);
            let tot = b.tot_dim(k as usize);
            let num = RowBasis::from_vectors(tot, b.modulus(), num_vecs);
            let mut den = RowBasis::from_vectors(
                tot,
                b.modulus(),
                z_basis(b, r - 1, s + 1, k),
            );
            if k > 0 {
                let dmat = b.total_matrix(k as usize - 1);
                for y in z_basis(b, r - 1, s - r as i64 + 1, k - 1) {
                    den.insert(dmat.apply(&y));
                }
            }
            debug_assert!(den.basis_rows().iter().all(|v| num.contains(v)));
            let d = num.dim() - den.dim();
            if d > 0 {
                dims.insert((m, n), d);
            }
        }
    }
    Page { r, dims }
}

/// The stable page: all differentials out of the grid have left.
pub fn infinity_page(b: &Bicomplex) -> Page {
    page(b, b.width() + b.height() + 1)
}
