//! Exact rational functions over the Gaussian rationals, the conjugation
//! that fixes variables, and quadratic extensions y^2 = Phi.
//!
//! No multivariate gcd normalization is attempted: equality is decided by
//! cross-multiplication. When numerator and denominator share a single
//! variable the fraction is reduced by the univariate Euclidean gcd, and the
//! denominator is always normalized to leading coefficient one.
//!
//! The text grammar accepts `+ - * / ^ ( )`, integer literals, the
//! imaginary unit `i` (also glued to a literal, as in `2i`), and variables
//! `t`, `t1` (both the first variable), `t2`, `t3`, ...

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::{biguint_from_decimal, GaussRational};
use crate::poly::{
    dense_divrem, dense_gcd, dense_is_zero, dense_monic_sqrt, MultiPoly,
};

#[derive(Debug, Clone)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero(
                "rational function with zero denominator".into(),
            ));
        }
        if num.is_zero() {
            return Ok(Self {
                num: MultiPoly::zero(),
                den: MultiPoly::one(),
            });
        }
        let mut num = num;
        let mut den = den;
        // constants share no factor with anything
        let skip_gcd = num.is_constant() || den.is_constant();
        let common = match (num.single_variable(), den.single_variable()) {
            _ if skip_gcd => None,
            (Some(a), Some(b)) => match (a, b) {
                (None, None) => None,
                (Some(v), None) | (None, Some(v)) => Some(v),
                (Some(v), Some(w)) if v == w => Some(v),
                _ => None,
            },
            _ => None,
        };
        if let Some(v) = common {
            let a = num.to_dense(v).expect("checked single variable");
            let b = den.to_dense(v).expect("checked single variable");
            let g = dense_gcd(&a, &b);
            if g.len() > 1 {
                let (qa, ra) = dense_divrem(&a, &g);
                let (qb, rb) = dense_divrem(&b, &g);
                debug_assert!(dense_is_zero(&ra) && dense_is_zero(&rb));
                num = MultiPoly::from_dense(v, &qa);
                den = MultiPoly::from_dense(v, &qb);
            }
        }
        let lead = den.leading_coefficient();
        if !lead.is_one() {
            let inv = lead.inverse().expect("denominator is nonzero");
            num = num.scalar_mul(&inv);
            den = den.scalar_mul(&inv);
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        Self::new(p, MultiPoly::one()).expect("unit denominator")
    }

    pub fn zero() -> Self {
        Self::from_poly(MultiPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(MultiPoly::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        Self::from_poly(MultiPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(MultiPoly::from_int(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::constant(GaussRational::from_ratio(num, den))
    }

    pub fn var(index: usize) -> Self {
        Self::from_poly(MultiPoly::var(index))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn as_constant(&self) -> Option<GaussRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn divide(&self, rhs: &RatFunc) -> Result<RatFunc> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero(
                "division by the zero rational function".into(),
            ));
        }
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn inverse(&self) -> Result<RatFunc> {
        RatFunc::one().divide(self)
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        RatFunc::new(self.num.pow(e), self.den.pow(e)).expect("nonzero denominator power")
    }

    pub fn scalar_mul(&self, c: &GaussRational) -> RatFunc {
        RatFunc::new(self.num.scalar_mul(c), self.den.clone()).expect("denominator unchanged")
    }

    /// Conjugates every coefficient, fixing the variables. A ring involution.
    pub fn conj(&self) -> RatFunc {
        // the denominator's leading coefficient is one, so the invariants
        // survive conjugation untouched
        RatFunc {
            num: self.num.conj(),
            den: self.den.conj(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    pub fn is_imaginary(&self) -> bool {
        !self.is_zero() && self.conj() == -self
    }

    pub fn eval(&self, point: &[GaussRational]) -> Result<GaussRational> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero(
                "evaluation point hits the denominator".into(),
            ));
        }
        Ok(&self.num.eval(point)? / &d)
    }

    /// Exact square test inside Q(i)(t), for constants and univariate
    /// functions: num * den must have even prime multiplicities (tested by
    /// an exact monic square root) and a leading coefficient that is a
    /// square in Q(i). Dense multivariate input is not decidable here.
    pub fn is_square(&self) -> Result<bool> {
        if self.is_zero() {
            return Ok(true);
        }
        if let Some(c) = self.as_constant() {
            return Ok(c.sqrt().is_some());
        }
        let p = &self.num * &self.den;
        let v = match p.single_variable() {
            Some(Some(v)) => v,
            Some(None) => return Ok(p.as_constant().expect("constant").sqrt().is_some()),
            None => {
                return Err(Error::UnsupportedShape(
                    "square testing of dense multivariate functions is not supported".into(),
                ))
            }
        };
        let dense = p.to_dense(v).expect("single variable");
        if !(dense.len() - 1).is_multiple_of(2) {
            return Ok(false);
        }
        let lead = dense.last().expect("nonzero").clone();
        if lead.sqrt().is_none() {
            return Ok(false);
        }
        let mut monic = dense;
        crate::poly::dense_make_monic(&mut monic);
        Ok(dense_monic_sqrt(&monic).is_some())
    }
}

/// Semantic equality by exact cross-multiplication.
impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RatFunc {}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone())
                .expect("nonzero denominator");
        }
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .expect("nonzero denominator")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Serialize for RatFunc {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("RatFunc", 2)?;
        s.serialize_field("num", &self.num.to_string())?;
        s.serialize_field("den", &self.den.to_string())?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Pair { num: String, den: String },
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => parse_ratfunc(&s).map_err(D::Error::custom),
            Repr::Pair { num, den } => {
                let n = parse_ratfunc(&num).map_err(D::Error::custom)?;
                let d = parse_ratfunc(&den).map_err(D::Error::custom)?;
                n.divide(&d).map_err(D::Error::custom)
            }
        }
    }
}

impl<'de> Deserialize<'de> for GaussRational {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_constant(&s).map_err(D::Error::custom)
    }
}

/// (C + y D)^n in the extension y^2 = Phi, returned as the pair
/// (even part, odd part). Computed by the binomial expansion split by the
/// parity of the power of y; the recurrence
/// (Ev', Od') = (C Ev + Phi D Od, D Ev + C Od) is kept to the tests as an
/// independent route.
pub fn quad_pow(c: &RatFunc, d: &RatFunc, phi: &RatFunc, n: u32) -> (RatFunc, RatFunc) {
    let n_us = n as usize;
    // everything is summed over the common denominator
    // (den c * den d)^n * (den phi)^(n/2), with one normalization per part
    let pow_table = |p: &MultiPoly, top: usize| -> Vec<MultiPoly> {
        let mut out = Vec::with_capacity(top + 1);
        out.push(MultiPoly::one());
        for k in 1..=top {
            out.push(&out[k - 1] * p);
        }
        out
    };
    let cn = pow_table(c.num(), n_us);
    let cd = pow_table(c.den(), n_us);
    let dn = pow_table(d.num(), n_us);
    let dd = pow_table(d.den(), n_us);
    let pn = pow_table(phi.num(), n_us / 2);
    let pd = pow_table(phi.den(), n_us / 2);

    let mut ev_num = MultiPoly::zero();
    let mut od_num = MultiPoly::zero();
    let mut binom = BigInt::one();
    for k in 0..=n_us {
        // binom = n choose k
        let coeff = GaussRational::new(
            BigRational::from_integer(binom.clone()),
            BigRational::zero(),
        );
        let term = &(&(&cn[n_us - k] * &dn[k]) * &pn[k / 2]).scalar_mul(&coeff)
            * &(&(&cd[k] * &dd[n_us - k]) * &pd[n_us / 2 - k / 2]);
        if k % 2 == 0 {
            ev_num = &ev_num + &term;
        } else {
            od_num = &od_num + &term;
        }
        binom = binom * BigInt::from((n_us - k) as u64)
            / BigInt::from((k + 1) as u64).max(BigInt::one());
    }
    let denominator = &(&cd[n_us] * &dd[n_us]) * &pd[n_us / 2];
    (
        RatFunc::new(ev_num, denominator.clone()).expect("nonzero denominator"),
        RatFunc::new(od_num, denominator).expect("nonzero denominator"),
    )
}

/// An element a + b*y of the quadratic extension y^2 = Phi.
#[derive(Debug, Clone, Serialize)]
pub struct QuadExtElement {
    pub a: RatFunc,
    pub b: RatFunc,
    pub modulus: RatFunc,
}

impl QuadExtElement {
    pub fn new(a: RatFunc, b: RatFunc, modulus: RatFunc) -> Self {
        Self { a, b, modulus }
    }

    fn require_same_modulus(&self, other: &QuadExtElement) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::DomainMismatch(
                "quadratic extension elements over different moduli".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &QuadExtElement) -> Result<QuadExtElement> {
        self.require_same_modulus(other)?;
        Ok(QuadExtElement::new(
            &self.a + &other.a,
            &self.b + &other.b,
            self.modulus.clone(),
        ))
    }

    pub fn sub(&self, other: &QuadExtElement) -> Result<QuadExtElement> {
        self.require_same_modulus(other)?;
        Ok(QuadExtElement::new(
            &self.a - &other.a,
            &self.b - &other.b,
            self.modulus.clone(),
        ))
    }

    /// (a + by)(c + dy) = (ac + bd Phi) + (ad + bc) y.
    pub fn mul(&self, other: &QuadExtElement) -> Result<QuadExtElement> {
        self.require_same_modulus(other)?;
        Ok(QuadExtElement::new(
            &(&self.a * &other.a) + &(&(&self.b * &other.b) * &self.modulus),
            &(&self.a * &other.b) + &(&self.b * &other.a),
            self.modulus.clone(),
        ))
    }

    pub fn pow(&self, n: u32) -> QuadExtElement {
        let (ev, od) = quad_pow(&self.a, &self.b, &self.modulus, n);
        QuadExtElement::new(ev, od, self.modulus.clone())
    }

    /// The coefficient conjugation, with y fixed.
    pub fn conj_coefficients(&self) -> QuadExtElement {
        QuadExtElement::new(self.a.conj(), self.b.conj(), self.modulus.clone())
    }

    /// The extension involution y -> -y.
    pub fn galois(&self) -> QuadExtElement {
        QuadExtElement::new(self.a.clone(), -&self.b, self.modulus.clone())
    }

    /// a^2 - Phi b^2.
    pub fn norm(&self) -> RatFunc {
        &self.a.pow(2) - &(&self.b.pow(2) * &self.modulus)
    }
}

impl PartialEq for QuadExtElement {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.a == other.a && self.b == other.b
    }
}

impl fmt::Display for QuadExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})*y", self.a, self.b)
    }
}

// ---------------------------------------------------------------------------
// parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigUint),
    Imag(BigUint),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(input: &str) -> Result<Vec<Tok>> {
    let bytes = input.as_bytes();
    let mut toks = Vec::new();
    let mut pos = 0usize;
    while pos < bytes.len() {
        let b = bytes[pos];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => pos += 1,
            b'+' => {
                toks.push(Tok::Plus);
                pos += 1;
            }
            b'-' => {
                toks.push(Tok::Minus);
                pos += 1;
            }
            b'*' => {
                toks.push(Tok::Star);
                pos += 1;
            }
            b'/' => {
                toks.push(Tok::Slash);
                pos += 1;
            }
            b'^' => {
                toks.push(Tok::Caret);
                pos += 1;
            }
            b'(' => {
                toks.push(Tok::LParen);
                pos += 1;
            }
            b')' => {
                toks.push(Tok::RParen);
                pos += 1;
            }
            b'0'..=b'9' => {
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let digits = &input[start..pos];
                let value = biguint_from_decimal(digits)
                    .ok_or_else(|| Error::Parse(format!("bad integer literal {digits}")))?;
                if pos < bytes.len() && bytes[pos] == b'i' {
                    pos += 1;
                    toks.push(Tok::Imag(value));
                } else {
                    toks.push(Tok::Num(value));
                }
            }
            b'i' => {
                toks.push(Tok::Imag(BigUint::one()));
                pos += 1;
            }
            b't' => {
                let start = pos;
                pos += 1;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let index = if pos == start + 1 {
                    0
                } else {
                    let n: usize = input[start + 1..pos]
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable {}", &input[start..pos])))?;
                    if n == 0 {
                        return Err(Error::Parse("variable indices start at t1".into()));
                    }
                    n - 1
                };
                toks.push(Tok::Var(index));
            }
            _ => {
                return Err(Error::Parse(format!(
                    "unexpected character {:?} at offset {pos}",
                    b as char
                )))
            }
        }
    }
    Ok(toks)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = acc.divide(&rhs)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let e: u32 = n
                        .try_into()
                        .ok()
                        .filter(|&e| e <= 1 << 16)
                        .ok_or_else(|| Error::Parse("exponent is beyond 2^16".into()))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(Error::Parse("exponent must be an integer literal".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.bump() {
            Some(Tok::Num(n)) => Ok(RatFunc::constant(GaussRational::new(
                BigRational::from_integer(BigInt::from(n)),
                BigRational::zero(),
            ))),
            Some(Tok::Imag(n)) => Ok(RatFunc::constant(GaussRational::new(
                BigRational::zero(),
                BigRational::from_integer(BigInt::from(n)),
            ))),
            Some(Tok::Var(v)) => Ok(RatFunc::var(v)),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(Error::Parse("missing closing parenthesis".into())),
                }
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses an expression in the text grammar into a rational function.
pub fn parse_ratfunc(input: &str) -> Result<RatFunc> {
    let toks = lex(input)?;
    let mut p = Parser {
        toks: &toks,
        pos: 0,
    };
    let out = p.expr()?;
    if p.pos != toks.len() {
        return Err(Error::Parse(format!(
            "trailing tokens starting at {:?}",
            toks[p.pos]
        )));
    }
    Ok(out)
}

/// Parses a constant expression (no variables allowed).
pub fn parse_constant(input: &str) -> Result<GaussRational> {
    parse_ratfunc(input)?
        .as_constant()
        .ok_or_else(|| Error::Parse(format!("{input:?} is not a constant")))
}
