//! Exact arithmetic in the cyclotomic field Q(zeta_p) for an odd prime p.
//!
//! Values are stored on the power basis `zeta^0, ..., zeta^(p-2)` with the
//! relation `1 + zeta + ... + zeta^(p-1) = 0` always applied, so equality of
//! values is coefficient equality. Coefficients are arbitrary-precision
//! rationals; no floating point enters the pipeline.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// An element of Q(zeta_p), canonically reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNumber {
    prime: u64,
    /// Coordinates in the basis zeta^0..zeta^(p-2); always length p-1.
    coeffs: Vec<BigRational>,
}

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl CycNumber {
    /// The zero of Q(zeta_p).
    pub fn zero(p: u64) -> Self {
        assert!(is_odd_prime(p), "p must be an odd prime");
        CycNumber {
            prime: p,
            coeffs: vec![BigRational::zero(); (p - 1) as usize],
        }
    }

    /// The rational number `r` viewed inside Q(zeta_p).
    pub fn from_rational(p: u64, r: BigRational) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = r;
        z
    }

    /// The integer `n` viewed inside Q(zeta_p).
    pub fn from_integer(p: u64, n: i64) -> Self {
        Self::from_rational(p, BigRational::from_integer(BigInt::from(n)))
    }

    /// zeta_p^k, reduced to the canonical basis.
    pub fn root_of_unity(p: u64, k: i64) -> Result<Self, Error> {
        if !is_odd_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        let k = k.rem_euclid(p as i64) as u64;
        let mut z = Self::zero(p);
        if k < p - 1 {
            z.coeffs[k as usize] = BigRational::one();
        } else {
            // zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2))
            for c in z.coeffs.iter_mut() {
                *c = -BigRational::one();
            }
        }
        Ok(z)
    }

    /// Builds `sum_k counts[k] * zeta^k` from integer weights on exponents
    /// `0..p-1`. This is the accumulator the brute-force character sums use.
    pub fn from_root_counts(p: u64, counts: &[i64]) -> Self {
        assert_eq!(counts.len(), p as usize);
        let mut z = Self::zero(p);
        let top = counts[(p - 1) as usize];
        for k in 0..(p - 1) as usize {
            z.coeffs[k] = BigRational::from_integer(BigInt::from(counts[k] - top));
        }
        z
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn check_same_prime(&self, other: &Self) -> Result<(), Error> {
        if self.prime != other.prime {
            Err(Error::PrimeMismatch(self.prime, other.prime))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, Error> {
        self.check_same_prime(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycNumber {
            prime: self.prime,
            coeffs,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, Error> {
        self.check_same_prime(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycNumber {
            prime: self.prime,
            coeffs,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, Error> {
        self.check_same_prime(other)?;
        let p = self.prime as usize;
        // Convolve exponents mod p, then fold zeta^(p-1) back into the basis.
        let mut acc = vec![BigRational::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j) % p;
                acc[k] += a * b;
            }
        }
        let top = acc.pop().expect("p >= 3");
        let coeffs = acc.into_iter().map(|c| c - &top).collect();
        Ok(CycNumber {
            prime: self.prime,
            coeffs,
        })
    }

    /// Complex conjugation zeta -> zeta^(-1); an involution fixing Q.
    pub fn conjugate(&self) -> Self {
        let p = self.prime as usize;
        let mut acc = vec![BigRational::zero(); p];
        for (k, c) in self.coeffs.iter().enumerate() {
            acc[(p - k) % p] += c;
        }
        let top = acc.pop().expect("p >= 3");
        let coeffs = acc.into_iter().map(|c| c - &top).collect();
        CycNumber {
            prime: self.prime,
            coeffs,
        }
    }

    /// Multiply by an exact rational scalar.
    pub fn scale(&self, r: &BigRational) -> Self {
        CycNumber {
            prime: self.prime,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// `self^k` for a small non-negative exponent.
    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::from_integer(self.prime, 1);
        for _ in 0..k {
            out = out.checked_mul(self).expect("same prime");
        }
        out
    }

    /// The rational value, when every non-constant coordinate vanishes.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// `|self|^2 = self * conj(self)`, handy for norm checks.
    pub fn norm_squared(&self) -> Self {
        self.checked_mul(&self.conjugate()).expect("same prime")
    }

    /// Serialization per the wire format: p-1 strings "num/den" in lowest
    /// terms with positive denominator, constant coordinate first.
    pub fn to_string_coeffs(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect()
    }

    /// Human-readable cyclotomic literal, e.g. "1 + 2*z" or "0".
    pub fn to_literal(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let coeff = if mag.is_one() && k > 0 {
                String::new()
            } else if mag.denom().is_one() {
                format!("{}", mag.numer())
            } else {
                format!("{}", mag)
            };
            let var = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{}", k),
            };
            let body = match (coeff.is_empty(), var.is_empty()) {
                (true, _) => var.clone(),
                (_, true) => coeff.clone(),
                _ => format!("{}*{}", coeff, var),
            };
            if parts.is_empty() {
                parts.push(if c.is_negative() {
                    format!("-{}", body)
                } else {
                    body
                });
            } else if c.is_negative() {
                parts.push(format!("- {}", body));
            } else {
                parts.push(format!("+ {}", body));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" ")
        }
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc(p={}; {})", self.prime, self.to_literal())
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_literal())
    }
}

impl Add for &CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &CycNumber) -> CycNumber {
        self.checked_add(rhs).expect("prime mismatch")
    }
}

impl Sub for &CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &CycNumber) -> CycNumber {
        self.checked_sub(rhs).expect("prime mismatch")
    }
}

impl Mul for &CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &CycNumber) -> CycNumber {
        self.checked_mul(rhs).expect("prime mismatch")
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber {
            prime: self.prime,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn roots_of_unity_reduce() {
        let one = CycNumber::root_of_unity(3, 0).unwrap();
        assert_eq!(one, CycNumber::from_integer(3, 1));
        // zeta^p = 1
        assert_eq!(CycNumber::root_of_unity(3, 3).unwrap(), one);
        // zeta^2 = -1 - zeta by the minimal relation
        let z2 = CycNumber::root_of_unity(3, 2).unwrap();
        assert_eq!(z2.coeffs(), &[rat(-1), rat(-1)]);
        // negative exponents wrap
        assert_eq!(CycNumber::root_of_unity(3, -1).unwrap(), z2);
    }

    #[test]
    fn rejects_non_prime() {
        assert!(CycNumber::root_of_unity(4, 1).is_err());
        assert!(CycNumber::root_of_unity(2, 1).is_err());
        assert!(CycNumber::root_of_unity(9, 1).is_err());
    }

    #[test]
    fn arithmetic_basics() {
        let z = CycNumber::root_of_unity(3, 1).unwrap();
        let z2 = CycNumber::root_of_unity(3, 2).unwrap();
        // zeta * zeta^2 = zeta^3 = 1
        assert_eq!(&z * &z2, CycNumber::from_integer(3, 1));
        // zeta + zeta^2 = -1
        assert_eq!(&z + &z2, CycNumber::from_integer(3, -1));
        // additive identity
        let a = &z - &z2;
        assert_eq!(a.checked_add(&CycNumber::zero(3)).unwrap(), a);
    }

    #[test]
    fn prime_mismatch_is_an_error() {
        let a = CycNumber::root_of_unity(3, 1).unwrap();
        let b = CycNumber::root_of_unity(5, 1).unwrap();
        assert!(a.checked_add(&b).is_err());
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn conjugation() {
        let one = CycNumber::from_integer(5, 1);
        assert_eq!(one.conjugate(), one);
        let z = CycNumber::root_of_unity(5, 1).unwrap();
        assert_eq!(z.conjugate(), CycNumber::root_of_unity(5, 4).unwrap());
        // conj(zeta - zeta^2) = zeta^2 - zeta for p = 3
        let z3 = CycNumber::root_of_unity(3, 1).unwrap();
        let z32 = CycNumber::root_of_unity(3, 2).unwrap();
        assert_eq!((&z3 - &z32).conjugate(), &z32 - &z3);
    }

    #[test]
    fn as_rational() {
        assert_eq!(
            CycNumber::from_integer(3, 1).as_rational(),
            Some(rat(1))
        );
        assert_eq!(CycNumber::root_of_unity(3, 1).unwrap().as_rational(), None);
        // 1 + zeta + zeta^2 = 0
        let z = CycNumber::root_of_unity(3, 1).unwrap();
        let z2 = CycNumber::root_of_unity(3, 2).unwrap();
        let s = (&z + &z2).checked_add(&CycNumber::from_integer(3, 1)).unwrap();
        assert_eq!(s.as_rational(), Some(rat(0)));
        assert!(s.is_zero());
    }

    #[test]
    fn root_counts_accumulator() {
        // 2*1 + 1*zeta + 3*zeta^2 reduced against the all-ones relation
        let v = CycNumber::from_root_counts(3, &[2, 1, 3]);
        assert_eq!(v.coeffs(), &[rat(-1), rat(-2)]);
        let direct = CycNumber::from_integer(3, 2)
            .checked_add(&CycNumber::root_of_unity(3, 1).unwrap())
            .unwrap()
            .checked_add(
                &CycNumber::root_of_unity(3, 2).unwrap().scale(&rat(3)),
            )
            .unwrap();
        assert_eq!(v, direct);
    }

    #[test]
    fn serialization_strings() {
        let z = CycNumber::root_of_unity(3, 1).unwrap();
        let half = z.scale(&BigRational::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(half.to_string_coeffs(), vec!["0/1", "1/2"]);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_cyc(p: u64) -> impl Strategy<Value = CycNumber> {
            proptest::collection::vec(-5i64..6, (p - 1) as usize).prop_map(move |v| {
                let mut z = CycNumber::zero(p);
                for (k, n) in v.into_iter().enumerate() {
                    z.coeffs[k] = rat(n);
                }
                z
            })
        }

        proptest! {
            #[test]
            fn conj_is_an_involution(a in arb_cyc(7)) {
                prop_assert_eq!(a.conjugate().conjugate(), a);
            }

            #[test]
            fn norm_is_conj_fixed(a in arb_cyc(5)) {
                let n = a.norm_squared();
                prop_assert_eq!(n.conjugate(), n);
            }

            #[test]
            fn roots_multiply_exponents(i in 0i64..14, j in 0i64..14) {
                let a = CycNumber::root_of_unity(7, i).unwrap();
                let b = CycNumber::root_of_unity(7, j).unwrap();
                prop_assert_eq!(&a * &b, CycNumber::root_of_unity(7, i + j).unwrap());
            }

            #[test]
            fn ring_axioms(a in arb_cyc(5), b in arb_cyc(5), c in arb_cyc(5)) {
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&a + &b, &b + &a);
                prop_assert_eq!(&a * &b, &b * &a);
            }
        }
    }
}
