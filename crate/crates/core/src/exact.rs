//! Exact rational helpers shared by the formula modules.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `1` when the condition holds, else `0`.
pub fn ind(cond: bool) -> Q {
    if cond {
        Q::one()
    } else {
        Q::zero()
    }
}

/// `q^k` for any integer `k`.
pub fn qpow(q: u64, k: i64) -> Q {
    let base = BigInt::from(q);
    let p = num_traits::pow(base, k.unsigned_abs() as usize);
    if k >= 0 {
        Q::from_integer(p)
    } else {
        Q::new(BigInt::one(), p)
    }
}

pub fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

pub fn ceil_div(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

/// Integer part of `r` if `r` is an integer.
pub fn as_integer(r: &Q) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

/// Non-negative integer part of `r`, if it has one.
pub fn as_natural(r: &Q) -> Option<BigUint> {
    let n = as_integer(r)?;
    if n.is_negative() {
        None
    } else {
        n.to_biguint()
    }
}

/// Renders as `"n/d"`, with `d = 1` kept explicit.
pub fn render(r: &Q) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"n/d"` or a bare integer.
pub fn parse(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            (!d.is_zero()).then(|| Q::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}
