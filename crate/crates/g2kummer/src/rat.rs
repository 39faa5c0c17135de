//! Exact rational scalars and their JSON wire form.
//!
//! Everything group-theoretic in this crate runs on `Rat` so that fixed-point
//! congruences, Gram constraints and wall conditions are decided exactly.
//! Floating point only enters the Gibbons-Hawking numerics and the spectral
//! model (`ale`, `fueter`).

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

pub type Rat = Ratio<i64>;

/// Shorthand constructor; panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Ratio::new(num, den)
}

pub fn int(n: i64) -> Rat {
    Ratio::from_integer(n)
}

/// Canonicalise into the half-open unit interval `[0, 1)`.
pub fn frac_mod1(x: Rat) -> Rat {
    let f = x.fract();
    if f < Rat::default() {
        f + int(1)
    } else {
        f
    }
}

pub fn is_integer(x: Rat) -> bool {
    x.is_integer()
}

fn isqrt_u64(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.saturating_mul(x) > n {
        x -= 1;
    }
    while (x + 1).saturating_mul(x + 1) <= n {
        x += 1;
    }
    x
}

/// Exact square root when `x` is a perfect rational square.
pub fn rat_sqrt(x: Rat) -> Option<Rat> {
    if x < Rat::default() {
        return None;
    }
    let n = *x.numer() as u64;
    let d = *x.denom() as u64;
    let sn = isqrt_u64(n);
    let sd = isqrt_u64(d);
    if sn * sn == n && sd * sd == d {
        Some(rat(sn as i64, sd as i64))
    } else {
        None
    }
}

pub fn to_f64(x: Rat) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Wire form for rationals: `{"num": .., "den": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Q {
    pub num: i64,
    pub den: i64,
}

impl From<Rat> for Q {
    fn from(r: Rat) -> Q {
        Q {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

impl From<Q> for Rat {
    fn from(q: Q) -> Rat {
        rat(q.num, q.den)
    }
}

impl Q {
    pub fn to_rat(self) -> Rat {
        self.into()
    }
}

pub fn qvec(v: &[Rat]) -> Vec<Q> {
    v.iter().map(|&r| r.into()).collect()
}

pub fn rvec(v: &[Q]) -> Vec<Rat> {
    v.iter().map(|&q| q.into()).collect()
}
