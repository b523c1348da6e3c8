//! Exact scalar arithmetic over the coefficient field: the rationals or a
//! prime field `F_p`.
//!
//! Every scalar operation is exact. Rationals are arbitrary-precision and kept
//! in reduced form; prime-field elements are canonical representatives in
//! `0..p`. There is no floating-point path anywhere.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// The coefficient field: `Q` or `F_p` for a prime `p`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime modulus {0} too large (must fit in 32 bits)")]
    ModulusTooLarge(u64),
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
    #[error("cannot parse field {0:?} (expected \"Q\" or \"Fp\" with p prime)")]
    BadField(String),
    #[error("scalar belongs to a different field")]
    FieldMismatch,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    /// Builds an `F_p` spec, validating primality and size.
    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if p >= (1 << 32) {
            return Err(FieldError::ModulusTooLarge(p));
        }
        Ok(FieldSpec::Prime(p))
    }

    /// 0 for the rationals, `p` for `F_p`.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    /// Parses "Q" or "F<p>", e.g. "F5".
    pub fn parse(s: &str) -> Result<Self, FieldError> {
        let t = s.trim();
        if t == "Q" || t == "q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(rest) = t.strip_prefix('F').or_else(|| t.strip_prefix('f')) {
            if let Ok(p) = rest.parse::<u64>() {
                return FieldSpec::prime(p);
            }
        }
        Err(FieldError::BadField(s.to_string()))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime(_) => Scalar::Mod(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::one()),
            FieldSpec::Prime(_) => Scalar::Mod(1),
        }
    }

    pub fn from_integer(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => Scalar::Mod((n.rem_euclid(*p as i64)) as u64),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(n.clone())),
            FieldSpec::Prime(p) => {
                let p_big = BigInt::from(*p);
                let mut r = n % &p_big;
                if r.is_negative() {
                    r += &p_big;
                }
                let digits = r.to_u64_digits().1;
                Scalar::Mod(if digits.is_empty() { 0 } else { digits[0] })
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (FieldSpec::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar/field kind mismatch"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            (FieldSpec::Prime(p), Scalar::Mod(x)) => Scalar::Mod(if *x == 0 { 0 } else { p - x }),
            _ => panic!("scalar/field kind mismatch"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (FieldSpec::Prime(p), Scalar::Mod(x), Scalar::Mod(y)) => {
                Scalar::Mod(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            _ => panic!("scalar/field kind mismatch"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        match (self, a) {
            (FieldSpec::Rationals, Scalar::Rat(x)) => Scalar::Rat(x.recip()).pipe_ok(),
            (FieldSpec::Prime(p), Scalar::Mod(x)) => {
                // Fermat: x^(p-2) mod p.
                let mut result = 1u128;
                let mut base = *x as u128;
                let mut e = p - 2;
                let m = *p as u128;
                while e > 0 {
                    if e & 1 == 1 {
                        result = result * base % m;
                    }
                    base = base * base % m;
                    e >>= 1;
                }
                Ok(Scalar::Mod(result as u64))
            }
            _ => panic!("scalar/field kind mismatch"),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// `(-1)^n`.
    pub fn sign(&self, n: usize) -> Scalar {
        if n % 2 == 0 {
            self.one()
        } else {
            self.neg(&self.one())
        }
    }

    /// Binomial coefficient `C(n, k)` as a field element, computed exactly
    /// over the integers first.
    pub fn binomial(&self, n: u64, k: u64) -> Scalar {
        if k > n {
            return self.zero();
        }
        let mut acc = BigInt::one();
        for i in 0..k.min(n - k) {
            acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        self.from_bigint(&acc)
    }

    /// Parses a decimal integer or "a/b" fraction.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, FieldError> {
        let t = s.trim();
        let bad = || FieldError::BadScalar(s.to_string());
        let parse_int = |u: &str| u.parse::<BigInt>().map_err(|_| bad());
        if let Some((num, den)) = t.split_once('/') {
            let num = parse_int(num.trim())?;
            let den = parse_int(den.trim())?;
            if den.is_zero() {
                return Err(FieldError::BadScalar(s.to_string()));
            }
            match self {
                FieldSpec::Rationals => Ok(Scalar::Rat(BigRational::new(num, den))),
                FieldSpec::Prime(_) => {
                    let d = self.from_bigint(&den);
                    if d.is_zero() {
                        return Err(FieldError::DivisionByZero);
                    }
                    self.div(&self.from_bigint(&num), &d)
                }
            }
        } else {
            Ok(self.from_bigint(&parse_int(t)?))
        }
    }

    /// Canonical string form, inverse to `parse_scalar`.
    pub fn format_scalar(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rat(x) => {
                if x.denom().is_one() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Mod(x) => x.to_string(),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// An exact field element. Which variant is valid depends on the ambient
/// [`FieldSpec`]; all arithmetic goes through the spec.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Mod(u64),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Mod(x) => *x == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_one(),
            Scalar::Mod(x) => *x == 1,
        }
    }
}

trait PipeOk: Sized {
    fn pipe_ok<E>(self) -> Result<Self, E> {
        Ok(self)
    }
}
impl PipeOk for Scalar {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_in_f5() {
        let f = FieldSpec::prime(5).unwrap();
        assert_eq!(f.inv(&Scalar::Mod(2)).unwrap(), Scalar::Mod(3));
        assert!(f
            .mul(&Scalar::Mod(2), &f.inv(&Scalar::Mod(2)).unwrap())
            .is_one());
    }

    #[test]
    fn rational_addition_is_exact() {
        let q = FieldSpec::Rationals;
        let half = q.parse_scalar("1/2").unwrap();
        let third = q.parse_scalar("1/3").unwrap();
        let sum = q.add(&half, &third);
        assert_eq!(q.format_scalar(&sum), "5/6");
    }

    #[test]
    fn negation_in_characteristic_two() {
        let f = FieldSpec::prime(2).unwrap();
        assert_eq!(f.neg(&Scalar::Mod(1)), Scalar::Mod(1));
    }

    #[test]
    fn inverse_of_zero_fails() {
        let q = FieldSpec::Rationals;
        assert_eq!(q.inv(&q.zero()), Err(FieldError::DivisionByZero));
        let f = FieldSpec::prime(7).unwrap();
        assert_eq!(f.inv(&f.zero()), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn field_axioms_on_small_samples() {
        for field in [FieldSpec::Rationals, FieldSpec::prime(3).unwrap()] {
            let elems: Vec<Scalar> = (-3..4).map(|n| field.from_integer(n)).collect();
            for a in &elems {
                for b in &elems {
                    assert_eq!(field.add(a, b), field.add(b, a));
                    assert_eq!(field.mul(a, b), field.mul(b, a));
                    assert!(field.add(a, &field.neg(a)).is_zero());
                    if !b.is_zero() {
                        let q = field.div(a, b).unwrap();
                        assert_eq!(field.mul(&q, b), *a);
                    }
                    for c in &elems {
                        let lhs = field.mul(a, &field.add(b, c));
                        let rhs = field.add(&field.mul(a, b), &field.mul(a, c));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn scalar_parsing_round_trips() {
        let q = FieldSpec::Rationals;
        for s in ["0", "-7", "22/7", "-3/5"] {
            let v = q.parse_scalar(s).unwrap();
            assert_eq!(q.format_scalar(&v), s);
        }
        let f = FieldSpec::prime(5).unwrap();
        assert_eq!(f.parse_scalar("7").unwrap(), Scalar::Mod(2));
        assert_eq!(f.parse_scalar("-1").unwrap(), Scalar::Mod(4));
        assert_eq!(f.parse_scalar("1/2").unwrap(), Scalar::Mod(3));
        assert!(f.parse_scalar("1/0").is_err());
        assert!(f.parse_scalar("x").is_err());
    }

    #[test]
    fn field_parsing() {
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Rationals);
        assert_eq!(FieldSpec::parse("F13").unwrap(), FieldSpec::Prime(13));
        assert!(FieldSpec::parse("F4").is_err());
        assert!(FieldSpec::parse("R").is_err());
    }

    #[test]
    fn binomials_reduce_mod_p() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert!(f2.binomial(2, 1).is_zero());
        let f3 = FieldSpec::prime(3).unwrap();
        assert_eq!(f3.binomial(4, 2), Scalar::Mod(0));
        let q = FieldSpec::Rationals;
        assert_eq!(q.format_scalar(&q.binomial(10, 5)), "252");
    }
}
