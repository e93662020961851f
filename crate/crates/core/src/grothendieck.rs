//! Character-level oracles, independent of the Ext recursion engine.
//!
//! Everything here is Grothendieck-group bookkeeping: Clebsch-Gordan
//! good-filtration factors, decomposition rows [Delta(lambda) : L(mu)],
//! their unitriangular inverses, Euler forms, and Delta-filtration
//! multiplicities of tilting modules. These serve as ground truth the
//! Ext engine's alternating sums are tested against.
//!
//! Background facts adopted as axioms of this module (documented external
//! inputs, not derived here):
//! - Steinberg tensor product theorem: L(p*c + j) = L(c)^[1] (x) L(j) for
//!   j restricted; iterating gives dim L by p-adic digits.
//! - Delta(pa + p-1) = Delta(a)^[1] (x) St, and likewise for tilting
//!   modules, T(pa + p-1) = T(a)^[1] (x) St.

use std::collections::BTreeMap;
use std::sync::Arc;

use dashmap::DashMap;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::weights::{bar, decompose, weight, weyl_dimension, Weight, WeightContext};

/// Signed row in the Grothendieck group, keyed by highest weight.
pub type Row = BTreeMap<Weight, i64>;

/// Ordered factor list (weight, multiplicity), weights strictly decreasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorList(pub Vec<(Weight, u64)>);

impl FactorList {
    /// Total dimension, counting each factor as a Weyl/induced module.
    pub fn total_weyl_dimension(&self) -> Weight {
        self.0
            .iter()
            .map(|(w, m)| weyl_dimension(w) * m)
            .sum()
    }
}

/// Nabla-factors of Delta(a) (x) Nabla(b), top weight first.
///
/// Valid when b >= a-1; the factors are a+b, a+b-2, ..., b-a, with a
/// final -1 dropped (zero module). Callers wanting the Weyl-filtration
/// variant (b <= a+1) swap and dualize.
pub fn good_filtration_factors(a: &Weight, b: &Weight) -> Result<FactorList> {
    if b < &(a - 1) {
        return Err(Error::InvalidInput(format!(
            "Delta({a}) (x) Nabla({b}) has no good filtration (need b >= a-1)"
        )));
    }
    let mut out = Vec::new();
    let mut w = a + b;
    let low = b - a;
    while w >= low && w >= Weight::zero() {
        out.push((w.clone(), 1));
        w -= 2;
    }
    Ok(FactorList(out))
}

/// Memoized character tables for a fixed characteristic.
///
/// Concurrent lookups race benignly: both compute the same row and the
/// insert is idempotent.
pub struct Characters {
    ctx: WeightContext,
    weyl_rows: DashMap<Weight, Arc<Row>>,
    simple_rows: DashMap<Weight, Arc<Row>>,
    simple_dims: DashMap<Weight, Weight>,
}

impl Characters {
    pub fn new(ctx: WeightContext) -> Self {
        Characters {
            ctx,
            weyl_rows: DashMap::new(),
            simple_rows: DashMap::new(),
            simple_dims: DashMap::new(),
        }
    }

    pub fn ctx(&self) -> &WeightContext {
        &self.ctx
    }

    /// Decomposition row [Delta(lambda)] = sum [L(mu)].
    ///
    /// Recursion: the short exact sequence splitting Delta(pa+i) into
    /// Delta(a)^[1] (x) L(i) and Delta(a-1)^[1] (x) L(bar i) in the
    /// Grothendieck group, with the Steinberg factorization of simples
    /// turning each twisted product into honest simples.
    pub fn weyl_in_simples(&self, lambda: &Weight) -> Result<Arc<Row>> {
        if let Some(row) = self.weyl_rows.get(lambda) {
            return Ok(row.clone());
        }
        let p = self.ctx.p();
        let d = decompose(lambda, &self.ctx)?;
        let mut row = Row::new();
        if lambda < &weight(p) {
            row.insert(lambda.clone(), 1);
        } else if d.is_steinberg(&self.ctx) {
            // Delta(pa + p-1) = Delta(a)^[1] (x) St.
            for (mu, m) in self.weyl_in_simples(&d.a)?.iter() {
                *row.entry(mu * p + (p - 1)).or_insert(0) += m;
            }
        } else {
            let ibar = bar(d.i, &self.ctx)?;
            for (mu, m) in self.weyl_in_simples(&d.a)?.iter() {
                *row.entry(mu * p + d.i).or_insert(0) += m;
            }
            let a1 = &d.a - 1;
            if a1 >= Weight::zero() {
                for (mu, m) in self.weyl_in_simples(&a1)?.iter() {
                    *row.entry(mu * p + ibar).or_insert(0) += m;
                }
            }
        }
        debug_assert!(row.values().all(|&m| m == 1), "SL2 decomposition rows are multiplicity-free");
        let row = Arc::new(row);
        self.weyl_rows.insert(lambda.clone(), row.clone());
        Ok(row)
    }

    /// Inverse decomposition row: [L(lambda)] = sum entries[mu] * [Delta(mu)].
    pub fn simple_in_weyls(&self, lambda: &Weight) -> Result<Arc<Row>> {
        if let Some(row) = self.simple_rows.get(lambda) {
            return Ok(row.clone());
        }
        let direct = self.weyl_in_simples(lambda)?;
        let mut row = Row::new();
        row.insert(lambda.clone(), 1);
        for (mu, m) in direct.iter() {
            if mu == lambda {
                continue;
            }
            let sub = self.simple_in_weyls(mu)?;
            for (nu, c) in sub.iter() {
                let e = row.entry(nu.clone()).or_insert(0);
                *e -= m * c;
                if *e == 0 {
                    row.remove(nu);
                }
            }
        }
        let row = Arc::new(row);
        self.simple_rows.insert(lambda.clone(), row.clone());
        Ok(row)
    }

    /// dim L(lambda) via the Steinberg factorization of p-adic digits.
    pub fn simple_dimension(&self, lambda: &Weight) -> Result<Weight> {
        if let Some(d) = self.simple_dims.get(lambda) {
            return Ok(d.clone());
        }
        let p = self.ctx.p();
        let dim = if lambda < &weight(p) {
            lambda + 1
        } else {
            let d = decompose(lambda, &self.ctx)?;
            self.simple_dimension(&d.a)? * (d.i + 1)
        };
        self.simple_dims.insert(lambda.clone(), dim.clone());
        Ok(dim)
    }

    /// dim T(lambda) from the tilting tensor recursion.
    pub fn tilting_dimension(&self, lambda: &Weight) -> Result<Weight> {
        let p = self.ctx.p();
        if lambda < &weight(p) {
            return Ok(lambda + 1);
        }
        let d = decompose(lambda, &self.ctx)?;
        if d.is_steinberg(&self.ctx) {
            // T(pa + p-1) = T(a)^[1] (x) St.
            Ok(self.tilting_dimension(&d.a)? * p)
        } else {
            // T(pa + i) = T(a-1)^[1] (x) T(p+i), dim T(p+i) = dim Q(bar i) = 2p.
            Ok(self.tilting_dimension(&(&d.a - 1))? * (2 * p))
        }
    }

    /// Delta-filtration multiplicities of T(lambda), top weight first.
    pub fn tilting_weyl_multiplicities(&self, lambda: &Weight) -> Result<FactorList> {
        let p = self.ctx.p();
        let mut acc: BTreeMap<Weight, u64> = BTreeMap::new();
        if lambda < &weight(p) {
            acc.insert(lambda.clone(), 1);
        } else {
            let d = decompose(lambda, &self.ctx)?;
            if d.is_steinberg(&self.ctx) {
                for (c, m) in self.tilting_weyl_multiplicities(&d.a)?.0 {
                    *acc.entry(c * p + (p - 1)).or_insert(0) += m;
                }
            } else {
                // Each Delta(c) factor of T(a-1) spawns the two factors of
                // Delta(c)^[1] (x) T(p+i): Delta(p(c+1)+i) and Delta(pc+bar i).
                let ibar = bar(d.i, &self.ctx)?;
                for (c, m) in self.tilting_weyl_multiplicities(&(&d.a - 1))?.0 {
                    *acc.entry((&c + 1) * p + d.i).or_insert(0) += m;
                    *acc.entry(c * p + ibar).or_insert(0) += m;
                }
            }
        }
        let list: Vec<_> = acc.into_iter().rev().collect();
        Ok(FactorList(list))
    }
}

/// Euler form of Delta(lambda) against Delta(mu).
///
/// Delta and Nabla share characters, so the form is the delta pairing of
/// the quasi-hereditary structure. The Ext engine's alternating sums must
/// reproduce this value.
pub fn euler_weyl_weyl(lambda: &Weight, mu: &Weight) -> i64 {
    i64::from(lambda == mu)
}

/// Euler form of Delta(lambda) against L(mu): the inverse-decomposition
/// entry [L(mu) : Delta(lambda)] in the Grothendieck group.
pub fn euler_weyl_simple(chars: &Characters, lambda: &Weight, mu: &Weight) -> Result<i64> {
    Ok(chars.simple_in_weyls(mu)?.get(lambda).copied().unwrap_or(0))
}
