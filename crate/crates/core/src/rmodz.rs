//! Exact rationals and their residues modulo 1.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, Integer, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

pub fn format_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A rational residue in [0, 1).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RmodZ {
    num: BigInt,
    den: BigInt,
}

impl RmodZ {
    pub fn zero() -> Self {
        RmodZ { num: BigInt::zero(), den: BigInt::one() }
    }

    pub fn from_q(x: &Q) -> Self {
        let den = x.denom().clone();
        let num = x.numer().mod_floor(&den);
        RmodZ { num, den }
    }

    pub fn new(n: i64, d: i64) -> Self {
        Self::from_q(&qr(n, d))
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn to_q(&self) -> Q {
        Q::new(self.num.clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn times(&self, k: &BigInt) -> Self {
        Self::from_q(&(self.to_q() * Q::from_integer(k.clone())))
    }
}

impl Add for RmodZ {
    type Output = RmodZ;
    fn add(self, o: RmodZ) -> RmodZ {
        RmodZ::from_q(&(self.to_q() + o.to_q()))
    }
}

impl Sub for RmodZ {
    type Output = RmodZ;
    fn sub(self, o: RmodZ) -> RmodZ {
        RmodZ::from_q(&(self.to_q() - o.to_q()))
    }
}

impl Neg for RmodZ {
    type Output = RmodZ;
    fn neg(self) -> RmodZ {
        RmodZ::from_q(&-self.to_q())
    }
}

impl Mul<i64> for RmodZ {
    type Output = RmodZ;
    fn mul(self, k: i64) -> RmodZ {
        self.times(&BigInt::from(k))
    }
}

impl fmt::Display for RmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for RmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RmodZ({}/{})", self.num, self.den)
    }
}

/// Integer part check used where a rational must be an integer.
pub fn to_integer(x: &Q) -> Result<BigInt> {
    if x.is_integer() {
        Ok(x.to_integer())
    } else {
        Err(Error::NotIntegral)
    }
}

pub fn sign(neg: bool) -> Q {
    if neg {
        -Q::one()
    } else {
        Q::one()
    }
}

/// `Σ_k (−1)^k x_k`.
pub fn parity_sum<I: IntoIterator<Item = Q>>(xs: I) -> Q {
    xs.into_iter()
        .enumerate()
        .fold(Q::zero(), |acc, (k, x)| if k % 2 == 0 { acc + x } else { acc - x })
}
