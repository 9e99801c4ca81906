//! Sparse multivariate polynomials over the Gaussian rationals.
//!
//! Terms live in a BTreeMap keyed by exponent vectors under the graded
//! lexicographic order; zero coefficients are never stored and exponent
//! vectors carry no trailing zeros, so structural equality is semantic
//! equality. Variable indices are global: index 0 prints as `t`, index k
//! as `t{k+1}`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::gauss::GaussRational;

/// Exponent vector without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Self(exps)
    }

    pub fn one() -> Self {
        Self(Vec::new())
    }

    pub fn var(index: usize) -> Self {
        let mut exps = vec![0; index + 1];
        exps[index] = 1;
        Self(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.is_empty()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let len = self.0.len().max(other.0.len());
        let mut exps = vec![0u32; len];
        for (i, &e) in self.0.iter().enumerate() {
            exps[i] += e;
        }
        for (i, &e) in other.0.iter().enumerate() {
            exps[i] += e;
        }
        Monomial::new(exps)
    }
}

/// Graded lexicographic: total degree first, then exponent vectors
/// lexicographically with missing entries read as zero.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| {
                let len = self.0.len().max(other.0.len());
                for i in 0..len {
                    let a = self.0.get(i).copied().unwrap_or(0);
                    let b = other.0.get(i).copied().unwrap_or(0);
                    match a.cmp(&b) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Monomial, GaussRational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussRational::one())
    }

    pub fn constant(c: GaussRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Self { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(GaussRational::from_int(n))
    }

    /// The variable with the given global index.
    pub fn var(index: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(index), GaussRational::one());
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_constant)
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<GaussRational> {
        if self.terms.is_empty() {
            return Some(GaussRational::zero());
        }
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            if m.is_constant() {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Leading coefficient in the graded lexicographic order.
    pub fn leading_coefficient(&self) -> GaussRational {
        self.terms
            .iter()
            .next_back()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(GaussRational::zero)
    }

    fn insert(&mut self, m: Monomial, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scalar_mul(&self, c: &GaussRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    /// Conjugates every coefficient, fixing the variables.
    pub fn conj(&self) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.conj()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, point: &[GaussRational]) -> Result<GaussRational> {
        let mut acc = GaussRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let x = point.get(i).ok_or_else(|| {
                    Error::Input(format!(
                        "evaluation point has no coordinate for variable index {i}"
                    ))
                })?;
                term = &term * &x.pow(e);
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// None when more than one variable occurs; Some(None) for constants;
    /// Some(Some(v)) when exactly the variable v occurs.
    pub fn single_variable(&self) -> Option<Option<usize>> {
        let mut var = None;
        for m in self.terms.keys() {
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    match var {
                        None => var = Some(i),
                        Some(v) if v == i => {}
                        Some(_) => return None,
                    }
                }
            }
        }
        Some(var)
    }

    /// Dense coefficient vector (ascending degree) in the variable `v`.
    /// The polynomial must involve no other variable.
    pub fn to_dense(&self, v: usize) -> Option<Vec<GaussRational>> {
        match self.single_variable() {
            Some(None) => {}
            Some(Some(w)) if w == v => {}
            _ => return None,
        }
        let deg = self.total_degree() as usize;
        let mut out = vec![GaussRational::zero(); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exponents().get(v).copied().unwrap_or(0) as usize;
            out[e] = c.clone();
        }
        Some(out)
    }

    pub fn from_dense(v: usize, coeffs: &[GaussRational]) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut exps = vec![0u32; v + 1];
                exps[v] = e as u32;
                out.insert(Monomial::new(exps), c.clone());
            }
        }
        out
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(m.clone(), -c);
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.insert(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

fn variable_name(index: usize) -> String {
    if index == 0 {
        "t".into()
    } else {
        format!("t{}", index + 1)
    }
}

/// Terms print in descending graded lexicographic order; real coefficients
/// carry their sign into the separator, complex ones stay parenthesized.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (m, c)) in self.terms.iter().rev().enumerate() {
            let (sep, coeff) = if c.is_real() && c.re.is_negative() {
                (
                    if pos == 0 { "-" } else { " - " },
                    GaussRational::new(-c.re.clone(), BigRational::zero()),
                )
            } else if c.is_imaginary() && c.im.is_negative() {
                (
                    if pos == 0 { "-" } else { " - " },
                    GaussRational::new(BigRational::zero(), -c.im.clone()),
                )
            } else {
                (if pos == 0 { "" } else { " + " }, c.clone())
            };
            write!(f, "{sep}")?;
            let mut wrote_coeff = false;
            if m.is_constant() || !coeff.is_one() {
                let s = coeff.to_string();
                // fractional real coefficients need explicit precedence in
                // front of a monomial: 3/2*t parses as (3/2)*t already
                write!(f, "{s}")?;
                wrote_coeff = true;
            }
            let mut first_var = true;
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote_coeff || !first_var {
                    write!(f, "*")?;
                }
                first_var = false;
                wrote_coeff = true;
                write!(f, "{}", variable_name(i))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
            let _ = first_var;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// dense univariate helpers over the coefficient field

pub(crate) fn dense_trim(c: &mut Vec<GaussRational>) {
    while c.last().is_some_and(GaussRational::is_zero) {
        c.pop();
    }
}

pub(crate) fn dense_is_zero(c: &[GaussRational]) -> bool {
    c.is_empty()
}

/// Euclidean division of dense univariate polynomials, remainder returned.
pub(crate) fn dense_divrem(
    a: &[GaussRational],
    b: &[GaussRational],
) -> (Vec<GaussRational>, Vec<GaussRational>) {
    assert!(!dense_is_zero(b), "division by the zero polynomial");
    let mut rem = a.to_vec();
    dense_trim(&mut rem);
    let db = b.len() - 1;
    let lead = &b[db];
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![GaussRational::zero(); rem.len() - db];
    while rem.len() > db {
        let dr = rem.len() - 1;
        let factor = &rem[dr] / lead;
        quot[dr - db] = factor.clone();
        for i in 0..=db {
            let delta = &factor * &b[i];
            rem[dr - db + i] = &rem[dr - db + i] - &delta;
        }
        dense_trim(&mut rem);
        if rem.len() <= db {
            break;
        }
    }
    dense_trim(&mut quot);
    (quot, rem)
}

/// Monic gcd through a primitive pseudo-remainder sequence over the
/// Gaussian integers: denominators are cleared once, every remainder is
/// stripped to its content, and only the final result is scaled monic.
/// Plain rational Euclid is exact too, but its coefficients explode.
pub(crate) fn dense_gcd(a: &[GaussRational], b: &[GaussRational]) -> Vec<GaussRational> {
    let mut pa = to_primitive_gauss_int(a);
    let mut pb = to_primitive_gauss_int(b);
    if pa.is_empty() {
        std::mem::swap(&mut pa, &mut pb);
    }
    while !pb.is_empty() {
        let mut r = gi_pseudo_rem(&pa, &pb);
        gi_make_primitive(&mut r);
        pa = pb;
        pb = r;
    }
    // scale the primitive gcd monic over the rationals
    let Some(lead) = pa.last().cloned() else {
        return Vec::new();
    };
    let lead = GaussRational::new(
        BigRational::from_integer(lead.0),
        BigRational::from_integer(lead.1),
    );
    pa.iter()
        .map(|(re, im)| {
            let c = GaussRational::new(
                BigRational::from_integer(re.clone()),
                BigRational::from_integer(im.clone()),
            );
            &c / &lead
        })
        .collect()
}

type GaussInt = (num_bigint::BigInt, num_bigint::BigInt);

fn gi_is_zero(z: &GaussInt) -> bool {
    z.0.is_zero() && z.1.is_zero()
}

fn gi_mul(a: &GaussInt, b: &GaussInt) -> GaussInt {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

fn gi_sub(a: &GaussInt, b: &GaussInt) -> GaussInt {
    (&a.0 - &b.0, &a.1 - &b.1)
}

/// Rounded division in Z[i]: the quotient minimizing the remainder norm.
fn gi_round_div(a: &GaussInt, b: &GaussInt) -> GaussInt {
    use num_integer::Integer;
    let n = &b.0 * &b.0 + &b.1 * &b.1;
    let num = gi_mul(a, &(b.0.clone(), -b.1.clone()));
    let round = |x: num_bigint::BigInt| -> num_bigint::BigInt {
        let two = num_bigint::BigInt::from(2);
        (x * &two + &n).div_floor(&(&n * &two))
    };
    (round(num.0), round(num.1))
}

/// Euclidean gcd in Z[i], up to a unit.
fn gi_gcd(a: &GaussInt, b: &GaussInt) -> GaussInt {
    let mut a = a.clone();
    let mut b = b.clone();
    while !gi_is_zero(&b) {
        let q = gi_round_div(&a, &b);
        let r = gi_sub(&a, &gi_mul(&q, &b));
        a = b;
        b = r;
    }
    a
}

/// Exact division by a common divisor of every coefficient.
fn gi_div_exact(a: &GaussInt, b: &GaussInt) -> GaussInt {
    let n = &b.0 * &b.0 + &b.1 * &b.1;
    let num = gi_mul(a, &(b.0.clone(), -b.1.clone()));
    debug_assert!((&num.0 % &n).is_zero() && (&num.1 % &n).is_zero());
    (num.0 / &n, num.1 / &n)
}

/// Clears denominators and strips content, producing a primitive integer
/// polynomial (empty = zero), ascending degree.
fn to_primitive_gauss_int(p: &[GaussRational]) -> Vec<GaussInt> {
    use num_integer::Integer;
    let mut p = p.to_vec();
    dense_trim(&mut p);
    if p.is_empty() {
        return Vec::new();
    }
    let mut l = num_bigint::BigInt::from(1);
    for c in &p {
        l = l.lcm(c.re.denom());
        l = l.lcm(c.im.denom());
    }
    let lr = BigRational::from_integer(l);
    let mut out: Vec<GaussInt> = p
        .iter()
        .map(|c| ((&c.re * &lr).to_integer(), (&c.im * &lr).to_integer()))
        .collect();
    gi_make_primitive(&mut out);
    out
}

fn gi_make_primitive(p: &mut Vec<GaussInt>) {
    while p.last().is_some_and(gi_is_zero) {
        p.pop();
    }
    let Some(first) = p.iter().find(|c| !gi_is_zero(c)) else {
        p.clear();
        return;
    };
    let mut content = first.clone();
    for c in p.iter() {
        if (&content.0 * &content.0 + &content.1 * &content.1).is_one() {
            break;
        }
        content = gi_gcd(&content, c);
    }
    if !gi_is_zero(&content) {
        for c in p.iter_mut() {
            *c = gi_div_exact(c, &content);
        }
    }
}

/// Integer pseudo-remainder: eliminates the top term of `a` against `b`
/// by cross-multiplying with the leading coefficient of `b`.
fn gi_pseudo_rem(a: &[GaussInt], b: &[GaussInt]) -> Vec<GaussInt> {
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r = a.to_vec();
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = gi_mul(c, &lb);
        }
        for i in 0..=db {
            let t = gi_mul(&lr, &b[i]);
            r[dr - db + i] = gi_sub(&r[dr - db + i], &t);
        }
        while r.last().is_some_and(gi_is_zero) {
            r.pop();
        }
        if r.len() <= db {
            break;
        }
    }
    r
}

pub(crate) fn dense_make_monic(c: &mut [GaussRational]) {
    if let Some(lead) = c.last().cloned() {
        if !lead.is_one() {
            for x in c.iter_mut() {
                *x = &*x / &lead;
            }
        }
    }
}

/// Exact monic square root of a monic dense polynomial, when one exists.
pub(crate) fn dense_monic_sqrt(p: &[GaussRational]) -> Option<Vec<GaussRational>> {
    if p.is_empty() {
        return Some(Vec::new());
    }
    let deg = p.len() - 1;
    if !deg.is_multiple_of(2) {
        return None;
    }
    debug_assert!(p.last().unwrap().is_one());
    let half = deg / 2;
    let mut root = vec![GaussRational::zero(); half + 1];
    root[half] = GaussRational::one();
    // determine coefficients from the top: the coefficient of degree
    // deg - k in root^2 involves root[half - k] linearly with factor 2
    let two = GaussRational::from_int(2);
    for k in 1..=half {
        // sum over pairs (i, j) with i + j = deg - k, both already known
        let mut acc = GaussRational::zero();
        for i in (half - k + 1)..=half {
            let j = deg - k - i;
            if j > half || j <= half - k {
                continue;
            }
            acc = &acc + &(&root[i] * &root[j]);
        }
        let target = &p[deg - k] - &acc;
        root[half - k] = &target / &two;
    }
    // verify the remaining low-order coefficients exactly
    let mut square = vec![GaussRational::zero(); deg + 1];
    for i in 0..=half {
        for j in 0..=half {
            square[i + j] = &square[i + j] + &(&root[i] * &root[j]);
        }
    }
    (square == p).then_some(root)
}
