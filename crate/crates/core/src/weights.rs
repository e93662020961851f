//! Weight arithmetic for SL2.
//!
//! Dominant weights of SL2 are identified with the natural numbers. Every
//! weight splits as `lambda = p*a + i` with `0 <= i <= p-1`; the residues
//! `i <= p-2` are regular and `i = p-1` is the Steinberg residue. On the
//! regular residues the bar involution is `bar(i) = p - 2 - i`.
//!
//! Weights are arbitrary-precision integers throughout; all quotients of
//! the p-adic split stay exact no matter how large the input is.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use crate::error::{Error, Result};

/// A dominant SL2 weight (a nonnegative integer, arbitrary precision).
pub type Weight = BigInt;

/// Convenience constructor for small weights.
pub fn weight(n: u64) -> Weight {
    BigInt::from(n)
}

/// The characteristic of the base field.
///
/// `p` is a prime, or the sentinel `0` which is accepted only by the
/// characteristic-zero classical layer of the quantum module. All SL2
/// block logic rejects the sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightContext {
    p: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl WeightContext {
    /// A context for a prime characteristic `p >= 2`.
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("characteristic {p} is not prime")));
        }
        Ok(WeightContext { p })
    }

    /// The characteristic-zero sentinel, for the quantum classical layer only.
    pub fn characteristic_zero() -> Self {
        WeightContext { p: 0 }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_char_zero(&self) -> bool {
        self.p == 0
    }

    fn require_positive(&self) -> Result<()> {
        if self.p == 0 {
            return Err(Error::InvalidInput(
                "operation requires a positive characteristic".into(),
            ));
        }
        Ok(())
    }
}

/// The p-adic split `lambda = p*a + i` of a weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PDecomp {
    pub lambda: Weight,
    /// Quotient of the split (the "twist" part).
    pub a: Weight,
    /// Remainder, `0 <= i <= p-1`.
    pub i: u64,
}

impl PDecomp {
    /// True when the remainder is the Steinberg residue `p-1`.
    pub fn is_steinberg(&self, ctx: &WeightContext) -> bool {
        self.i == ctx.p() - 1
    }
}

/// Split `lambda = p*a + i` with `0 <= i <= p-1`.
pub fn decompose(lambda: &Weight, ctx: &WeightContext) -> Result<PDecomp> {
    ctx.require_positive()?;
    if lambda.is_negative() {
        return Err(Error::InvalidInput(format!("negative weight {lambda}")));
    }
    let (a, r) = lambda.div_rem(&BigInt::from(ctx.p()));
    let i = r.to_u64().expect("remainder below p fits in u64");
    Ok(PDecomp { lambda: lambda.clone(), a, i })
}

/// A regular residue together with its bar partner `bar(i) = p-2-i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BarredResidue {
    pub i: u64,
    pub bar: u64,
}

/// The bar involution on regular residues.
///
/// Rejects the Steinberg residue `p-1`, which has no bar partner.
pub fn bar(i: u64, ctx: &WeightContext) -> Result<u64> {
    ctx.require_positive()?;
    if i > ctx.p() - 2 {
        return Err(Error::InvalidInput(format!(
            "residue {i} is not regular for p = {}",
            ctx.p()
        )));
    }
    Ok(ctx.p() - 2 - i)
}

pub fn barred_residue(i: u64, ctx: &WeightContext) -> Result<BarredResidue> {
    Ok(BarredResidue { i, bar: bar(i, ctx)? })
}

/// Same-block test for two dominant weights.
///
/// For regular weights `lambda = pa+i`, `mu = pb+j` the weights are linked
/// exactly when `a-b` is even and `i = j`, or `a-b` is odd and `j = bar(i)`.
/// Two Steinberg weights `pa+p-1`, `pb+p-1` are linked exactly when `a` and
/// `b` are; a regular and a Steinberg weight never are.
pub fn linked(lambda: &Weight, mu: &Weight, ctx: &WeightContext) -> Result<bool> {
    let l = decompose(lambda, ctx)?;
    let m = decompose(mu, ctx)?;
    match (l.is_steinberg(ctx), m.is_steinberg(ctx)) {
        (true, true) => linked(&l.a, &m.a, ctx),
        (false, false) => {
            let diff_even = (&l.a - &m.a).is_even();
            if diff_even {
                Ok(l.i == m.i)
            } else {
                Ok(m.i == bar(l.i, ctx)?)
            }
        }
        _ => Ok(false),
    }
}

/// dim Delta(lambda) = dim Nabla(lambda) = lambda + 1 (Weyl's character formula).
pub fn weyl_dimension(lambda: &Weight) -> Weight {
    lambda + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u64) -> WeightContext {
        WeightContext::new(p).unwrap()
    }

    #[test]
    fn decompose_splits_with_remainder() {
        let d = decompose(&weight(7), &ctx(3)).unwrap();
        assert_eq!(d.a, weight(2));
        assert_eq!(d.i, 1);

        let d = decompose(&weight(4), &ctx(5)).unwrap();
        assert_eq!(d.a, weight(0));
        assert_eq!(d.i, 4);
        assert!(d.is_steinberg(&ctx(5)));

        let d = decompose(&weight(0), &ctx(5)).unwrap();
        assert_eq!(d.a, weight(0));
        assert_eq!(d.i, 0);
    }

    #[test]
    fn bar_definition_and_involution() {
        assert_eq!(bar(1, &ctx(5)).unwrap(), 2);
        assert_eq!(bar(bar(2, &ctx(7)).unwrap(), &ctx(7)).unwrap(), 2);
        // p = 2 has a single regular residue, fixed by bar.
        assert_eq!(bar(0, &ctx(2)).unwrap(), 0);
        assert!(bar(4, &ctx(5)).is_err());
    }

    #[test]
    fn linked_examples() {
        // 1 = (0,1), 3 = (1,0): odd difference, j = bar(i).
        assert!(linked(&weight(1), &weight(3), &ctx(3)).unwrap());
        assert!(!linked(&weight(0), &weight(1), &ctx(3)).unwrap());
        // Steinberg weights recurse on the quotients: 5 = 3*1+2, 11 = 3*3+2.
        assert!(linked(&weight(5), &weight(11), &ctx(3)).unwrap());
    }

    #[test]
    fn weyl_dimensions() {
        assert_eq!(weyl_dimension(&weight(0)), weight(1));
        assert_eq!(weyl_dimension(&weight(6)), weight(7));
        assert_eq!(weyl_dimension(&weight(4)), weight(5));
    }

    #[test]
    fn rejects_non_prime() {
        assert!(WeightContext::new(6).is_err());
        assert!(WeightContext::new(0).is_err());
        assert!(WeightContext::new(1).is_err());
    }
}
