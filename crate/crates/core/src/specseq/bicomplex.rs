//! First-quadrant bicomplexes of finite-dimensional Z/m vector spaces.
//!
//! Cells sit at (m, n) with 0 <= m < width (column) and 0 <= n < height
//! (row). `d0` is the vertical differential (m, n) -> (m, n+1) and `d1`
//! the horizontal one (m, n) -> (m+1, n). The stored maps must satisfy
//! d0^2 = 0, d1^2 = 0 and the anticommutation d0 d1 + d1 d0 = 0, so the
//! total differential is plainly D = d0 + d1 (any sign convention is the
//! builder's business and must already be baked into the entries).
//!
//! Total-complex coordinates in degree k list the cells with m + n = k
//! by increasing column m, so the column filtration F^s (columns >= s)
//! is a suffix block of coordinates.

use std::collections::HashMap;

use crate::error::{Error, Result};

use super::field;
use super::matrix::Mat;

#[derive(Debug, Clone)]
pub struct Bicomplex {
    width: usize,
    height: usize,
    modulus: u64,
    dims: Vec<Vec<usize>>,
    d0: HashMap<(usize, usize), Mat>,
    d1: HashMap<(usize, usize), Mat>,
}

/// One structural violation found by `validate`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub cell: (usize, usize),
    pub rule: String,
}

impl Bicomplex {
    pub fn new(width: usize, height: usize, modulus: u64, dims: Vec<Vec<usize>>) -> Result<Self> {
        field::check_modulus(modulus)?;
        if dims.len() != width || dims.iter().any(|col| col.len() != height) {
            return Err(Error::InvalidInput(format!(
                "dimension grid must be {width} x {height}"
            )));
        }
        Ok(Bicomplex { width, height, modulus, dims, d0: HashMap::new(), d1: HashMap::new() })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self, m: usize, n: usize) -> usize {
        if m < self.width && n < self.height {
            self.dims[m][n]
        } else {
            0
        }
    }

    pub fn set_d0(&mut self, m: usize, n: usize, map: Mat) -> Result<()> {
        self.check_map("d0", m, n, m, n + 1, &map)?;
        self.d0.insert((m, n), map);
        Ok(())
    }

    pub fn set_d1(&mut self, m: usize, n: usize, map: Mat) -> Result<()> {
        self.check_map("d1", m, n, m + 1, n, &map)?;
        self.d1.insert((m, n), map);
        Ok(())
    }

    fn check_map(
        &self,
        what: &str,
        m: usize,
        n: usize,
        tm: usize,
        tn: usize,
        map: &Mat,
    ) -> Result<()> {
        if map.modulus() != self.modulus {
            return Err(Error::InvalidInput(format!("{what} modulus mismatch at ({m},{n})")));
        }
        if map.cols() != self.dim(m, n) || map.rows() != self.dim(tm, tn) {
            return Err(Error::InvalidInput(format!(
                "{what} at ({m},{n}) must be {} x {}, got {} x {}",
                self.dim(tm, tn),
                self.dim(m, n),
                map.rows(),
                map.cols()
            )));
        }
        Ok(())
    }

    /// The vertical map out of (m, n); zero if unset or out of range.
    pub fn d0(&self, m: usize, n: usize) -> Mat {
        self.d0
            .get(&(m, n))
            .cloned()
            .unwrap_or_else(|| Mat::zeros(self.dim(m, n + 1), self.dim(m, n), self.modulus))
    }

    /// The horizontal map out of (m, n); zero if unset or out of range.
    pub fn d1(&self, m: usize, n: usize) -> Mat {
        self.d1
            .get(&(m, n))
            .cloned()
            .unwrap_or_else(|| Mat::zeros(self.dim(m + 1, n), self.dim(m, n), self.modulus))
    }

    /// Check the three differential identities; empty report means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for m in 0..self.width {
            for n in 0..self.height {
                if !self.d0(m, n + 1).mul(&self.d0(m, n)).is_zero() {
                    out.push(Violation { cell: (m, n), rule: "d0 . d0 != 0".into() });
                }
                if !self.d1(m + 1, n).mul(&self.d1(m, n)).is_zero() {
                    out.push(Violation { cell: (m, n), rule: "d1 . d1 != 0".into() });
                }
                let a = self.d0(m + 1, n).mul(&self.d1(m, n));
                let b = self.d1(m, n + 1).mul(&self.d0(m, n));
                if !a.add(&b).is_zero() {
                    out.push(Violation {
                        cell: (m, n),
                        rule: "d0 d1 + d1 d0 != 0".into(),
                    });
                }
            }
        }
        out
    }

    /// Highest total degree carrying a cell.
    pub fn top_degree(&self) -> usize {
        (self.width + self.height).saturating_sub(2)
    }

    /// Cells of total degree k in coordinate order: (m, n, offset, dim).
    pub fn cells_in_degree(&self, k: usize) -> Vec<(usize, usize, usize, usize)> {
        let mut out = Vec::new();
        let mut off = 0;
        for m in 0..self.width {
            if k < m {
                break;
            }
            let n = k - m;
            if n >= self.height {
                continue;
            }
            let d = self.dims[m][n];
            out.push((m, n, off, d));
            off += d;
        }
        out
    }

    pub fn tot_dim(&self, k: usize) -> usize {
        self.cells_in_degree(k).iter().map(|&(_, _, _, d)| d).sum()
    }

    /// Offset of the block of columns >= s inside Tot^k, i.e. the start
    /// of the filtration subspace F^s.
    pub fn filtration_offset(&self, k: usize, s: usize) -> usize {
        self.cells_in_degree(k)
            .iter()
            .filter(|&&(m, _, _, _)| m < s)
            .map(|&(_, _, _, d)| d)
            .sum()
    }

    /// Matrix of the total differential D = d0 + d1 : Tot^k -> Tot^{k+1}.
    pub fn total_matrix(&self, k: usize) -> Mat {
        let src = self.cells_in_degree(k);
        let tgt = self.cells_in_degree(k + 1);
        let sdim: usize = src.iter().map(|&(_, _, _, d)| d).sum();
        let tdim: usize = tgt.iter().map(|&(_, _, _, d)| d).sum();
        let mut out = Mat::zeros(tdim, sdim, self.modulus);
        let toff: HashMap<(usize, usize), usize> =
            tgt.iter().map(|&(m, n, o, _)| ((m, n), o)).collect();
        for &(m, n, so, sd) in src.iter() {
            if sd == 0 {
                continue;
            }
            for (map, tm, tn) in [(self.d0(m, n), m, n + 1), (self.d1(m, n), m + 1, n)] {
                let Some(&to) = toff.get(&(tm, tn)) else { continue };
                for i in 0..map.rows() {
                    for j in 0..map.cols() {
                        out.set(to + i, so + j, map.get(i, j));
                    }
                }
            }
        }
        out
    }

    /// Dimensions of the total-complex cohomology, degree by degree.
    pub fn total_homology(&self) -> Vec<usize> {
        let top = self.top_degree();
        let mut ranks = Vec::new();
        for k in 0..=top {
            ranks.push(self.total_matrix(k).rank());
        }
        let mut out = Vec::new();
        for k in 0..=top {
            let below = if k == 0 { 0 } else { ranks[k - 1] };
            out.push(self.tot_dim(k) - ranks[k] - below);
        }
        out
    }

    /// Embed a cell vector into Tot^{m+n} coordinates.
    pub fn embed_cell(&self, m: usize, n: usize, v: &[u64]) -> Vec<u64> {
        let k = m + n;
        let mut out = vec![0u64; self.tot_dim(k)];
        for &(cm, cn, off, d) in self.cells_in_degree(k).iter() {
            if (cm, cn) == (m, n) {
                assert_eq!(v.len(), d);
                out[off..off + d].copy_from_slice(v);
            }
        }
        out
    }

    /// Extract the (m, n) cell component of a Tot^{m+n} vector.
    pub fn cell_component(&self, m: usize, n: usize, tot: &[u64]) -> Vec<u64> {
        let k = m + n;
        for &(cm, cn, off, d) in self.cells_in_degree(k).iter() {
            if (cm, cn) == (m, n) {
                return tot[off..off + d].to_vec();
            }
        }
        Vec::new()
    }
}

/// The four-cell staircase used as a golden example throughout the
/// spectral-sequence tests: one-dimensional cells at (0,1), (1,1),
/// (1,0), (2,0); identity d1 on the top and bottom rows; identity d0
/// from (1,0) up to (1,1). Its total cohomology vanishes, E_2 has two
/// one-dimensional survivors joined by a nonzero d_2, and E_3 = 0.
pub fn witness(modulus: u64) -> Bicomplex {
    let mut dims = vec![vec![0usize; 2]; 3];
    dims[0][1] = 1;
    dims[1][1] = 1;
    dims[1][0] = 1;
    dims[2][0] = 1;
    let mut b = Bicomplex::new(3, 2, modulus, dims).unwrap();
    let one = Mat::from_rows(vec![vec![1]], 1, modulus);
    b.set_d1(0, 1, one.clone()).unwrap();
    b.set_d1(1, 0, one.clone()).unwrap();
    b.set_d0(1, 0, one).unwrap();
    b
}
