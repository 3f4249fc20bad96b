//! Exact coefficient arithmetic: arbitrary-precision rationals or GF(p), p > 3 prime.
//!
//! Every scalar knows its field; mixing fields in one operation is a programming
//! error and panics. Rationals are kept in lowest terms with positive denominator,
//! GF(p) values are kept reduced to `0..p`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

use crate::error::{Error, Result};

/// Largest admissible prime modulus. Keeps the trial-division primality check
/// cheap and products inside u128.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Rational,
    /// GF(p) for a prime p with 3 < p <= MAX_PRIME.
    Prime(u64),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl Field {
    /// Validates the modulus: prime, greater than 3, at most [`MAX_PRIME`].
    pub fn prime(p: u64) -> Result<Field> {
        if p > MAX_PRIME {
            return Err(Error::InvalidPrime {
                p,
                reason: "modulus too large",
            });
        }
        if p <= 3 {
            return Err(Error::InvalidPrime {
                p,
                reason: "modulus must exceed 3",
            });
        }
        if !is_prime(p) {
            return Err(Error::InvalidPrime {
                p,
                reason: "modulus is not prime",
            });
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Mod {
                value: n.rem_euclid(p as i64) as u64,
                prime: p,
            },
        }
    }

    /// num/den with both parts i64; den must be nonzero.
    pub fn ratio(self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::Invalid("zero denominator".into()));
        }
        Ok(&self.from_i64(num) / &self.from_i64(den))
    }

    /// Parses `"n"` or `"n/d"` with arbitrary-precision integer parts.
    pub fn parse(self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = |msg: &str| Error::Invalid(format!("cannot parse scalar `{s}`: {msg}"));
        let (ns, ds) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = ns.parse().map_err(|_| bad("bad numerator"))?;
        let den: BigInt = ds.parse().map_err(|_| bad("bad denominator"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        match self {
            Field::Rational => Ok(Scalar::Rat(BigRational::new(num, den))),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let reduce = |x: &BigInt| -> u64 {
                    let r = ((x % &pb) + &pb) % &pb;
                    // r is in 0..p, which fits u64
                    r.to_string().parse().unwrap()
                };
                let n = reduce(&num);
                let d = reduce(&den);
                if d == 0 {
                    return Err(bad("denominator vanishes modulo p"));
                }
                Ok(&Scalar::Mod { value: n, prime: p } / &Scalar::Mod { value: d, prime: p })
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { value: u64, prime: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rational,
            Scalar::Mod { prime, .. } => Field::Prime(*prime),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse. Panics on zero; elimination code only ever
    /// inverts pivots it has checked to be nonzero.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => {
                assert!(!r.is_zero(), "inverse of zero scalar");
                Scalar::Rat(r.recip())
            }
            Scalar::Mod { value, prime } => {
                assert!(*value != 0, "inverse of zero scalar");
                Scalar::Mod {
                    value: mod_inv(*value, *prime),
                    prime: *prime,
                }
            }
        }
    }
}

/// Extended Euclid; `a` must be nonzero mod `p`.
fn mod_inv(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1, "modulus not coprime to operand");
    t0.rem_euclid(p as i128) as u64
}

fn check_same_prime(p: u64, q: u64) {
    assert_eq!(p, q, "scalars from different fields: GF({p}) vs GF({q})");
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { value: a, prime: p }, Scalar::Mod { value: b, prime: q }) => {
                check_same_prime(*p, *q);
                Scalar::Mod {
                    value: (a + b) % p,
                    prime: *p,
                }
            }
            _ => panic!("scalars from different fields"),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { value: a, prime: p }, Scalar::Mod { value: b, prime: q }) => {
                check_same_prime(*p, *q);
                Scalar::Mod {
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    prime: *p,
                }
            }
            _ => panic!("scalars from different fields"),
        }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { value, prime } => Scalar::Mod {
                value: (prime - value) % prime,
                prime: *prime,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_reduced_with_positive_denominator() {
        let f = Field::Rational;
        let x = f.ratio(4, -6).unwrap();
        match &x {
            Scalar::Rat(r) => {
                assert_eq!(r.numer().to_string(), "-2");
                assert_eq!(r.denom().to_string(), "3");
            }
            _ => unreachable!(),
        }
        assert_eq!(x.to_string(), "-2/3");
    }

    #[test]
    fn field_ops_are_exact() {
        let f = Field::Rational;
        let a = f.ratio(3, 7).unwrap();
        let b = f.ratio(7, 3).unwrap();
        assert!((&a * &b).is_one());
        assert!((&a - &a).is_zero());
        let third = f.ratio(1, 3).unwrap();
        let sum = &(&third + &third) + &third;
        assert!(sum.is_one());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!((&a * &b).to_string(), "1");
        assert_eq!((&a + &b).to_string(), "1");
        assert_eq!((-&a).to_string(), "4");
        assert!((&a * &a.inv()).is_one());
        // -7/3 mod 7 = 0
        assert!(f.parse("-7/3").unwrap().is_zero());
    }

    #[test]
    fn modulus_validation() {
        assert!(Field::prime(5).is_ok());
        assert!(Field::prime(2).is_err());
        assert!(Field::prime(3).is_err());
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(u64::MAX).is_err());
    }

    #[test]
    fn parse_accepts_integers_and_fractions() {
        let f = Field::Rational;
        assert_eq!(f.parse("-3").unwrap(), f.from_i64(-3));
        assert_eq!(f.parse("3/5").unwrap(), f.ratio(3, 5).unwrap());
        assert_eq!(f.parse(" 10/4 ").unwrap(), f.ratio(5, 2).unwrap());
        assert!(f.parse("1/0").is_err());
        assert!(f.parse("a/b").is_err());
        // big values survive round-trip
        let big = f.parse("123456789012345678901234567890/11").unwrap();
        assert_eq!(big.to_string(), "123456789012345678901234567890/11");
    }

    #[test]
    #[should_panic(expected = "different fields")]
    fn mixing_fields_panics() {
        let _ = &Field::Rational.one() + &Field::prime(5).unwrap().one();
    }
}
