//! Exact coefficient fields: the rationals and prime fields `Z/p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficient field of a polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    /// Prime field `Z/p`, rejecting composite or out-of-range moduli.
    pub fn prime(p: u64) -> Result<Field> {
        if p < 2 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> Coeff {
        self.from_i64(0)
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        match *self {
            Field::Rationals => Coeff::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Coeff::Fp(n.rem_euclid(p as i64) as u64, p),
        }
    }

    /// Maps a rational number into the field; fails when the denominator vanishes mod p.
    pub fn from_rational(&self, q: &BigRational) -> Result<Coeff> {
        match *self {
            Field::Rationals => Ok(Coeff::Q(q.clone())),
            Field::Prime(p) => {
                let big_p = BigInt::from(p);
                let num = q.numer().mod_floor(&big_p).to_u64().unwrap();
                let den = q.denom().mod_floor(&big_p).to_u64().unwrap();
                if den == 0 {
                    return Err(Error::InvalidField(format!(
                        "denominator of {q} vanishes modulo {p}"
                    )));
                }
                Ok(Coeff::Fp(mul_mod(num, inv_mod(den, p), p), p))
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            Field::Rationals => 0,
            Field::Prime(p) => p,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "QQ"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime: a^(p-2)
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// A field element. Prime-field elements carry their modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Q(BigRational),
    Fp(u64, u64),
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_zero(),
            Coeff::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_one(),
            Coeff::Fp(v, _) => *v == 1,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Coeff::Q(_) => Field::Rationals,
            Coeff::Fp(_, p) => Field::Prime(*p),
        }
    }

    pub fn zero_like(&self) -> Coeff {
        self.field().zero()
    }

    pub fn one_like(&self) -> Coeff {
        self.field().one()
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Coeff {
        match self {
            Coeff::Q(q) => {
                assert!(!q.is_zero(), "inverse of zero");
                Coeff::Q(q.recip())
            }
            Coeff::Fp(v, p) => {
                assert!(*v != 0, "inverse of zero");
                Coeff::Fp(inv_mod(*v, *p), *p)
            }
        }
    }

    pub fn div(&self, other: &Coeff) -> Coeff {
        self * &other.inv()
    }

    /// Sign used when printing: true for negative rationals. Prime-field
    /// elements print as their least nonnegative residue.
    pub fn is_negative(&self) -> bool {
        match self {
            Coeff::Q(q) => q.is_negative(),
            Coeff::Fp(..) => false,
        }
    }

    pub fn add_assign_ref(&mut self, other: &Coeff) {
        match (self, other) {
            (Coeff::Q(a), Coeff::Q(b)) => *a += b,
            (Coeff::Fp(a, p), Coeff::Fp(b, q)) => {
                debug_assert_eq!(p, q);
                let s = *a + *b;
                *a = if s >= *p { s - *p } else { s };
            }
            _ => panic!("coefficient field mismatch"),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Q(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Coeff::Fp(v, _) => write!(f, "{v}"),
        }
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, rhs: &Coeff) -> Coeff {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, rhs: &Coeff) -> Coeff {
        self + &(-rhs)
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Q(q) => Coeff::Q(-q),
            Coeff::Fp(v, p) => Coeff::Fp(if *v == 0 { 0 } else { *p - *v }, *p),
        }
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Q(a), Coeff::Q(b)) => Coeff::Q(a * b),
            (Coeff::Fp(a, p), Coeff::Fp(b, q)) => {
                debug_assert_eq!(p, q);
                Coeff::Fp(mul_mod(*a, *b, *p), *p)
            }
            _ => panic!("coefficient field mismatch"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_construction() {
        assert!(Field::prime(7).is_ok());
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(2).is_ok());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!(&a + &b, f.from_i64(1));
        assert_eq!(&a * &b, f.from_i64(1));
        assert_eq!(&a * &a.inv(), f.one());
        assert_eq!(-&a, f.from_i64(4));
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f.from_rational(&half).unwrap(), f.from_i64(4));
        let seventh = BigRational::new(1.into(), 7.into());
        assert!(f.from_rational(&seventh).is_err());
    }

    #[test]
    fn rational_display_lowest_terms() {
        let q = Field::Rationals;
        let c = q
            .from_rational(&BigRational::new(6.into(), (-4).into()))
            .unwrap();
        assert_eq!(c.to_string(), "-3/2");
    }
}
