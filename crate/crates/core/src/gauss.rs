//! Exact Gaussian rationals: numbers a + b*i with arbitrary-precision
//! rational parts, plus square and n-th root existence tests.
//!
//! Root existence is decided inside Q(i) itself. Square roots come from the
//! norm equation directly; general n-th roots go through factorization in
//! the Gaussian integers, where an element is an n-th power exactly when
//! every prime exponent is divisible by n and the leftover unit i^s
//! satisfies gcd(n, 4) | s.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Self {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_imaginary(&self) -> bool {
        self.re.is_zero() && !self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// re^2 + im^2.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("inverse of zero".into()));
        }
        let n = self.norm();
        Ok(Self {
            re: &self.re / &n,
            im: -&self.im / &n,
        })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Exact square root in Q(i), when one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let q = rational_sqrt(&self.norm())?;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let x_sq = (&self.re + &q) * &half;
        if x_sq.is_zero() {
            // purely negative real number: sqrt is i * sqrt(-re)
            let y = rational_sqrt(&(-self.re.clone()))?;
            return Some(Self {
                re: BigRational::zero(),
                im: y,
            });
        }
        let x = rational_sqrt(&x_sq)?;
        let y = &self.im / (&x + &x);
        let candidate = Self { re: x, im: y };
        (&candidate * &candidate == *self).then_some(candidate)
    }

    /// Whether x^n = self is solvable in Q(i). Decided through Gaussian
    /// integer factorization; n = 0 only solves self = 1.
    pub fn has_nth_root(&self, n: u32) -> Result<bool> {
        if n == 0 {
            return Ok(self.is_one());
        }
        if n == 1 || self.is_zero() || self.is_one() {
            return Ok(true);
        }
        // clear denominators: self = z / l with z Gaussian integer, l > 0
        let l = num_integer::Integer::lcm(self.re.denom(), self.im.denom());
        let z = (
            (&self.re * BigRational::from_integer(l.clone())).to_integer(),
            (&self.im * BigRational::from_integer(l.clone())).to_integer(),
        );
        let (unit_num, factors_num) = factor_gauss_int(&z)?;
        let (unit_den, factors_den) = factor_gauss_int(&(l, BigInt::zero()))?;
        let mut exps = factors_num;
        for (p, e) in factors_den {
            *exps.entry(p).or_insert(0) -= e;
        }
        if exps.values().any(|&e| e.rem_euclid(n as i64) != 0) {
            return Ok(false);
        }
        let s = (unit_num - unit_den).rem_euclid(4);
        Ok(s % gcd_u32(n, 4) as i64 == 0)
    }
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

/// Exact square root of a nonnegative rational, when it is a perfect square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    (&num * &num == *r.numer() && &den * &den == *r.denom())
        .then(|| BigRational::new(num, den))
}

type GaussInt = (BigInt, BigInt);

fn gi_norm(z: &GaussInt) -> BigInt {
    &z.0 * &z.0 + &z.1 * &z.1
}

fn gi_mul(a: &GaussInt, b: &GaussInt) -> GaussInt {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

/// Exact division in Z[i], when the quotient is integral.
fn gi_div_exact(z: &GaussInt, w: &GaussInt) -> Option<GaussInt> {
    let n = gi_norm(w);
    let prod = gi_mul(z, &(w.0.clone(), -w.1.clone()));
    if (&prod.0 % &n).is_zero() && (&prod.1 % &n).is_zero() {
        Some((prod.0 / &n, prod.1 / &n))
    } else {
        None
    }
}

/// Factors a nonzero Gaussian integer as i^s times canonical primes.
///
/// Canonical primes: 1+i over 2; for split rational primes p = a^2 + b^2
/// with a > b > 0 the pair a+bi and a-bi; inert rational primes p = 3 mod 4
/// as themselves. Returns (s, exponent map keyed by (a, b)).
type GaussFactorMap = std::collections::BTreeMap<(BigInt, BigInt), i64>;

fn factor_gauss_int(z: &GaussInt) -> Result<(i64, GaussFactorMap)> {
    if z.0.is_zero() && z.1.is_zero() {
        return Err(Error::DivisionByZero("factorization of zero".into()));
    }
    let mut z = z.clone();
    let mut factors = GaussFactorMap::new();
    let norm = gi_norm(&z);
    if norm > BigInt::from(u64::MAX) {
        return Err(Error::SizeLimit(format!(
            "Gaussian norm {norm} is too large for trial-division factorization"
        )));
    }
    let mut n: u64 = norm.try_into().expect("bounded above");
    let mut p: u64 = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            divide_out_prime(&mut z, &mut factors, &mut n, p)?;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        let p = n;
        divide_out_prime(&mut z, &mut factors, &mut n, p)?;
    }
    // the cofactor is now a unit i^s
    let s = match (z.0.sign(), z.1.sign()) {
        (num_bigint::Sign::Plus, num_bigint::Sign::NoSign) => 0,
        (num_bigint::Sign::NoSign, num_bigint::Sign::Plus) => 1,
        (num_bigint::Sign::Minus, num_bigint::Sign::NoSign) => 2,
        (num_bigint::Sign::NoSign, num_bigint::Sign::Minus) => 3,
        _ => {
            return Err(Error::Internal(format!(
                "cofactor {}+{}i after factorization is not a unit",
                z.0, z.1
            )))
        }
    };
    Ok((s, factors))
}

fn divide_out_prime(
    z: &mut GaussInt,
    factors: &mut GaussFactorMap,
    n: &mut u64,
    p: u64,
) -> Result<()> {
    let candidates: Vec<GaussInt> = if p == 2 {
        vec![(BigInt::one(), BigInt::one())]
    } else if p % 4 == 1 {
        let (a, b) = two_square_decomposition(p).ok_or_else(|| {
            Error::Internal(format!("prime {p} = 1 mod 4 without a two-square split"))
        })?;
        vec![
            (BigInt::from(a), BigInt::from(b)),
            (BigInt::from(a), -BigInt::from(b)),
        ]
    } else {
        vec![(BigInt::from(p), BigInt::zero())]
    };
    for pi in candidates {
        while let Some(q) = gi_div_exact(z, &pi) {
            *z = q;
            *factors
                .entry((pi.0.clone(), pi.1.clone()))
                .or_insert(0) += 1;
            let np: u64 = gi_norm(&pi).try_into().expect("small prime norm");
            *n /= np;
        }
    }
    Ok(())
}

/// Writes p = a^2 + b^2 with a > b > 0, for p = 1 mod 4.
fn two_square_decomposition(p: u64) -> Option<(u64, u64)> {
    let mut a = 1u64;
    while a * a <= p {
        let rest = p - a * a;
        let b = isqrt_u64(rest);
        if b > 0 && a * a + b * b == p {
            let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
            return Some((hi, lo));
        }
        a += 1;
    }
    None
}

fn isqrt_u64(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u64 + 1;
    while x * x > n {
        x -= 1;
    }
    x
}

impl Add for &GaussRational {
    type Output = GaussRational;
    fn add(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussRational {
    type Output = GaussRational;
    fn sub(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussRational {
    type Output = GaussRational;
    fn mul(self, rhs: &GaussRational) -> GaussRational {
        GaussRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &GaussRational {
    type Output = GaussRational;
    fn div(self, rhs: &GaussRational) -> GaussRational {
        assert!(!rhs.is_zero(), "division by zero Gaussian rational");
        let n = rhs.norm();
        let c = rhs.conj();
        let p = self * &c;
        GaussRational {
            re: p.re / n.clone(),
            im: p.im / n,
        }
    }
}

impl Neg for &GaussRational {
    type Output = GaussRational;
    fn neg(self) -> GaussRational {
        GaussRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

/// Canonical text form, chosen to round-trip through the expression parser:
/// "3/2", "2i", "-i", "3*i/4", "(1/2+3*i/4)".
impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn imag_part(im: &BigRational) -> String {
            let num = im.numer();
            let den = im.denom();
            if den.is_one() {
                if num.is_one() {
                    "i".into()
                } else if (-num).is_one() {
                    "-i".into()
                } else {
                    format!("{num}i")
                }
            } else if num.abs().is_one() {
                format!("{}i/{den}", if num.is_negative() { "-" } else { "" })
            } else {
                format!("{num}*i/{den}")
            }
        }
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}", imag_part(&self.im))
        } else {
            let im_str = imag_part(&self.im.abs());
            let sign = if self.im.is_negative() { "-" } else { "+" };
            write!(f, "({}{sign}{im_str})", self.re)
        }
    }
}

impl Serialize for GaussRational {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Positive integer from a decimal string, for the parser.
pub(crate) fn biguint_from_decimal(s: &str) -> Option<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(re: i64, im: i64) -> GaussRational {
        GaussRational::new(
            BigRational::from_integer(BigInt::from(re)),
            BigRational::from_integer(BigInt::from(im)),
        )
    }

    #[test]
    fn field_arithmetic() {
        let a = g(1, 2);
        let b = g(3, -1);
        assert_eq!(&a * &b, g(5, 5));
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(&a + &(-&a), GaussRational::zero());
        assert_eq!(&a * &a.inverse().unwrap(), GaussRational::one());
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(g(-4, 0).sqrt(), Some(g(0, 2)));
        assert_eq!(g(0, 2).sqrt(), Some(g(1, 1)));
        assert_eq!(g(9, 0).sqrt(), Some(g(3, 0)));
        assert_eq!(g(2, 0).sqrt(), None);
        assert_eq!(g(0, 1).sqrt(), None);
        assert_eq!(g(3, 4).sqrt(), Some(g(2, 1)));
        let quarter = GaussRational::from_ratio(1, 4);
        assert_eq!(quarter.sqrt(), Some(GaussRational::from_ratio(1, 2)));
    }

    #[test]
    fn nth_root_existence() {
        // -1 = i^2
        assert!(g(-1, 0).has_nth_root(2).unwrap());
        // but -1 has no 4th root in Q(i)
        assert!(!g(-1, 0).has_nth_root(4).unwrap());
        // i has no square root
        assert!(!g(0, 1).has_nth_root(2).unwrap());
        // i = i^1 and i = (-i)^3
        assert!(g(0, 1).has_nth_root(3).unwrap());
        assert!(g(4, 0).has_nth_root(2).unwrap());
        assert!(!g(4, 0).has_nth_root(3).unwrap());
        // the fourth powers of norm-2 elements are all -4, never 4
        assert!(!g(4, 0).has_nth_root(4).unwrap());
        assert!(g(-4, 0).has_nth_root(4).unwrap(), "-4 = (1+i)^4");
        assert!(g(16, 0).has_nth_root(4).unwrap());
        assert!(g(8, 0).has_nth_root(3).unwrap());
        assert!(!g(8, 0).has_nth_root(4).unwrap());
    }

    #[test]
    fn nth_root_oracle_on_small_powers() {
        // every h-th power must report an h-th root
        for h in 2..=6u32 {
            for re in -3i64..=3 {
                for im in -3i64..=3 {
                    let base = g(re, im);
                    if base.is_zero() {
                        continue;
                    }
                    let c = base.pow(h);
                    assert!(
                        c.has_nth_root(h).unwrap(),
                        "({re}+{im}i)^{h} lost its root"
                    );
                }
            }
        }
    }

    #[test]
    fn display_round_trip_shapes() {
        assert_eq!(g(3, 0).to_string(), "3");
        assert_eq!(g(0, 2).to_string(), "2i");
        assert_eq!(g(0, -1).to_string(), "-i");
        assert_eq!(g(1, -2).to_string(), "(1-2i)");
        assert_eq!(GaussRational::from_ratio(3, 2).to_string(), "3/2");
        let weird = GaussRational::new(
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(-3), BigInt::from(4)),
        );
        assert_eq!(weird.to_string(), "(1/2-3*i/4)");
    }

    #[test]
    fn two_square_splits() {
        assert_eq!(two_square_decomposition(5), Some((2, 1)));
        assert_eq!(two_square_decomposition(13), Some((3, 2)));
        assert_eq!(two_square_decomposition(97), Some((9, 4)));
    }
}
