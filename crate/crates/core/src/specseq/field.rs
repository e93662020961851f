//! Arithmetic in the prime field Z/m for a machine-word modulus.
//!
//! Moduli are required to be odd primes below 2^31 so products fit in a
//! u64 without overflow; the default working modulus elsewhere is 32003.

use crate::error::{Error, Result};

pub fn check_modulus(m: u64) -> Result<()> {
    if m < 2 || m >= 1 << 31 {
        return Err(Error::InvalidInput(format!("modulus {m} out of range")));
    }
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            return Err(Error::InvalidInput(format!("modulus {m} is not prime")));
        }
        d += 1;
    }
    Ok(())
}

#[inline]
pub fn add(a: u64, b: u64, m: u64) -> u64 {
    (a + b) % m
}

#[inline]
pub fn sub(a: u64, b: u64, m: u64) -> u64 {
    (a + m - b % m) % m
}

#[inline]
pub fn mul(a: u64, b: u64, m: u64) -> u64 {
    a % m * (b % m) % m
}

#[inline]
pub fn neg(a: u64, m: u64) -> u64 {
    (m - a % m) % m
}

pub fn pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, m);
        }
        base = mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse by Fermat's little theorem; the modulus is prime.
pub fn inv(a: u64, m: u64) -> u64 {
    debug_assert!(a % m != 0, "inverse of zero mod {m}");
    pow(a, m - 2, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_validation() {
        assert!(check_modulus(32003).is_ok());
        assert!(check_modulus(2).is_ok());
        assert!(check_modulus(32001).is_err()); // 3 * 10667
        assert!(check_modulus(1).is_err());
        assert!(check_modulus(1 << 32).is_err());
    }

    #[test]
    fn inverses() {
        let m = 32003;
        for a in 1..200 {
            assert_eq!(mul(a, inv(a, m), m), 1);
        }
    }
}
