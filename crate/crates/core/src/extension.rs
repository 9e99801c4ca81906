//! Construction of the four basic real cyclic function-field extensions,
//! the prime-power irreducibility criterion, fibre products, and the
//! decomposition of an arbitrary (n, m) into basic factors.
//!
//! Every builder verifies its defining identities exactly before returning:
//!
//! * dihedral-like: 4 phi^n = psi^2 + F^2;
//! * twisted: A^2 + B^2 = 4 Phi^(N/2 - 1), with Phi not a square;
//! * esoteric: C^2 - Phi D^2 = 1, the norm identity Ev^2 - Phi Od^2 = 1,
//!   beta = -Phi Od / (2 (Ev + 1)), beta^2 (1 + Ev) = Phi (Ev - 1) / 4, and
//!   the power equation (y/2 - beta) = (y/2 + beta)(C + y D)^N in the
//!   extension y^2 = Phi.
//!
//! A failed identity is an internal error: the identities are consequences
//! of the construction, not input conditions.
//!
//! Galois and conjugation actions on the generators involve roots of unity
//! that do not live in the coefficient field, so they are recorded as
//! symbolic labels; every identity verified here is free of them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::GaussRational;
use crate::involution::{classify_cyclic_involution, crt_combine, CoarseSplit};
use crate::matrix::gcd_i128;
use crate::ratfunc::{quad_pow, QuadExtElement, RatFunc};
use crate::semidirect::BasicCase;

/// A rational function in formally factored form: a constant in Q(i) times
/// a product of distinct symbolic primes with nonzero integer exponents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactoredRatFunc {
    #[serde(default = "GaussRational::one")]
    pub constant: GaussRational,
    pub factors: Vec<(String, i64)>,
}

impl FactoredRatFunc {
    pub fn new(constant: GaussRational, factors: Vec<(String, i64)>) -> Result<Self> {
        if constant.is_zero() {
            return Err(Error::Input("factored function with zero constant".into()));
        }
        for (i, (label, e)) in factors.iter().enumerate() {
            if *e == 0 {
                return Err(Error::Input(format!("factor {label} has exponent zero")));
            }
            if factors[..i].iter().any(|(l, _)| l == label) {
                return Err(Error::Input(format!("duplicate prime label {label}")));
            }
        }
        Ok(Self { constant, factors })
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.constant.clone(), self.factors.clone()).map(|_| ())
    }

    /// Squareness by exponent parity: every prime exponent even and the
    /// constant a square in Q(i).
    pub fn is_square(&self) -> Result<bool> {
        self.validate()?;
        Ok(self.factors.iter().all(|&(_, e)| e % 2 == 0) && self.constant.sqrt().is_some())
    }
}

/// Verdict of the n-th power criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PowerVerdict {
    Irreducible,
    Reducible { h: i64 },
    /// A bare constant: divisibility of exponents says nothing, and root
    /// existence in an abstract extension field is not decidable here.
    IndeterminateConstant,
}

/// Irreducibility status attached to a standard-case record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Irreducibility {
    Irreducible,
    Reducible { h: i64 },
    IndeterminateConstant,
    Unknown,
}

impl From<PowerVerdict> for Irreducibility {
    fn from(v: PowerVerdict) -> Self {
        match v {
            PowerVerdict::Irreducible => Irreducibility::Irreducible,
            PowerVerdict::Reducible { h } => Irreducibility::Reducible { h },
            PowerVerdict::IndeterminateConstant => Irreducibility::IndeterminateConstant,
        }
    }
}

/// z^n - f is reducible exactly when f = a^h for some divisor h >= 2 of n.
/// In factored form this happens for the largest h >= 2 dividing n, dividing
/// every prime exponent, and admitting an h-th root of the constant in Q(i).
pub fn check_power_criterion(f: &FactoredRatFunc, n: i64) -> Result<PowerVerdict> {
    if n < 2 {
        return Err(Error::Input(format!("criterion needs n >= 2, got {n}")));
    }
    if n > 1_000_000 {
        return Err(Error::SizeLimit(format!(
            "the divisor scan is limited to n <= 10^6, got {n}"
        )));
    }
    f.validate()?;
    if f.factors.is_empty() {
        return Ok(PowerVerdict::IndeterminateConstant);
    }
    let mut g = 0i128;
    for &(_, e) in &f.factors {
        g = gcd_i128(g, e as i128);
    }
    let g = g as i64;
    let mut h = n;
    while h >= 2 {
        if n % h == 0 && g % h == 0 && f.constant.has_nth_root(h as u32)? {
            return Ok(PowerVerdict::Reducible { h });
        }
        h -= 1;
    }
    Ok(PowerVerdict::Irreducible)
}

/// Symbolic relations and group actions attached to a built extension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionLabels {
    pub relations: String,
    pub galois: String,
    pub conjugation: String,
}

/// The totally real case z^n = f with f real.
#[derive(Debug, Clone, Serialize)]
pub struct StandardData {
    pub n: i64,
    pub f: RatFunc,
    pub irreducibility: Irreducibility,
    pub labels: ActionLabels,
}

/// The Galois case: z w = phi, z^n + w^n = F, with 4 phi^n = psi^2 + F^2
/// and f = (F + i psi)/2 the defining n-th power.
#[derive(Debug, Clone, Serialize)]
pub struct DihedralLikeData {
    pub n: i64,
    pub big_f: RatFunc,
    pub phi: RatFunc,
    pub psi: RatFunc,
    pub f: RatFunc,
    /// psi = 0 makes f real and the cover possibly reducible.
    pub degenerate: bool,
    pub labels: ActionLabels,
}

/// The twisted case over n = 2N, 8 | n: data A, B, Phi with
/// A^2 + B^2 = 4 Phi^(N/2-1); F = A phi and psi = B phi live in the
/// quadratic extension phi^2 = Phi.
#[derive(Debug, Clone, Serialize)]
pub struct TwistedData {
    pub n: i64,
    pub half_n: i64,
    pub a: RatFunc,
    pub b: RatFunc,
    pub phi_cap: RatFunc,
    pub phi_square: SquareStatus,
    pub big_f: QuadExtElement,
    pub psi: QuadExtElement,
    pub labels: ActionLabels,
}

/// The esoteric case over n = 2N, 8 | n, built from a non-real theta.
#[derive(Debug, Clone, Serialize)]
pub struct EsotericData {
    pub n: i64,
    pub half_n: i64,
    pub theta: RatFunc,
    pub phi: RatFunc,
    pub c: RatFunc,
    pub d: RatFunc,
    pub ev: RatFunc,
    pub od: RatFunc,
    pub beta: RatFunc,
    pub psi: RatFunc,
    /// f = y/2 + beta, the N-th power of the real generator.
    pub f: QuadExtElement,
    pub phi_square: SquareStatus,
    pub checks: EsotericChecks,
    pub labels: ActionLabels,
}

/// Identity checks performed by the esoteric builder; a returned record
/// always has all of them true.
#[derive(Debug, Clone, Serialize)]
pub struct EsotericChecks {
    pub c_d_imaginary: bool,
    pub unit_norm: bool,
    pub power_norm: bool,
    pub beta_real: bool,
    pub beta_square_relation: bool,
    pub power_equation: bool,
}

/// Whether "not a square" could be decided exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SquareStatus {
    NotSquare,
    Unverified,
}

fn square_status(phi: &RatFunc, what: &str) -> Result<SquareStatus> {
    match phi.is_square() {
        Ok(true) => Err(Error::NotAFieldExtension(format!(
            "{what} is a square, so the quadratic extension collapses"
        ))),
        Ok(false) => Ok(SquareStatus::NotSquare),
        Err(Error::UnsupportedShape(_)) => Ok(SquareStatus::Unverified),
        Err(e) => Err(e),
    }
}

fn require_degree(n: i64) -> Result<()> {
    if n < 2 {
        return Err(Error::Input(format!("extension degree must be >= 2, got {n}")));
    }
    if n > 4096 {
        return Err(Error::SizeLimit(format!(
            "extension degree {n} is out of desk range"
        )));
    }
    Ok(())
}

/// Reads a monomial c * prod(var^e) off as a formally factored function,
/// treating the variables as distinct primes.
fn monomial_factored(f: &RatFunc) -> Option<FactoredRatFunc> {
    if f.num().term_count() != 1 || f.den().term_count() != 1 {
        return None;
    }
    let (num_mono, num_coeff) = f.num().terms().next().map(|(m, c)| (m.clone(), c.clone()))?;
    let (den_mono, den_coeff) = f.den().terms().next().map(|(m, c)| (m.clone(), c.clone()))?;
    let len = num_mono.exponents().len().max(den_mono.exponents().len());
    let mut factors = Vec::new();
    for v in 0..len {
        let e = num_mono.exponents().get(v).copied().unwrap_or(0) as i64
            - den_mono.exponents().get(v).copied().unwrap_or(0) as i64;
        if e != 0 {
            let name = if v == 0 {
                "t".to_string()
            } else {
                format!("t{}", v + 1)
            };
            factors.push((name, e));
        }
    }
    FactoredRatFunc::new(&num_coeff / &den_coeff, factors).ok()
}

/// Builds the standard (totally real) extension z^n = f.
pub fn build_standard(
    n: i64,
    f: RatFunc,
    factored: Option<&FactoredRatFunc>,
) -> Result<StandardData> {
    require_degree(n)?;
    if !f.is_real() {
        return Err(Error::NotReal(
            "the standard case needs a real defining function".into(),
        ));
    }
    let irreducibility = match factored {
        Some(fac) => check_power_criterion(fac, n)?.into(),
        None => match monomial_factored(&f) {
            Some(fac) => check_power_criterion(&fac, n)?.into(),
            None => Irreducibility::Unknown,
        },
    };
    Ok(StandardData {
        n,
        f,
        irreducibility,
        labels: ActionLabels {
            relations: format!("z^{n} = f"),
            galois: "g(z) = zeta*z".into(),
            conjugation: "tau(z) = z".into(),
        },
    })
}

/// Builds a dihedral-like extension from two free real functions.
///
/// For odd n = 2m+1: phi = (p^2 + q^2)/4, F = phi^m p, psi = phi^m q.
/// For even n = 2m+2: lambda = 8p / (q^2 - 4p^2), phi = 1 + lambda p,
/// F = 2 phi^m, psi = lambda q phi^m.
pub fn build_dihedral_like(n: i64, p: RatFunc, q: RatFunc) -> Result<DihedralLikeData> {
    require_degree(n)?;
    if !p.is_real() || !q.is_real() {
        return Err(Error::NotReal(
            "the dihedral-like parametrization needs real functions".into(),
        ));
    }
    let quarter = RatFunc::from_ratio(1, 4);
    let (phi, big_f, psi) = if n % 2 == 1 {
        let m = ((n - 1) / 2) as u32;
        if p.is_zero() && q.is_zero() {
            return Err(Error::DegenerateParameter(
                "p = q = 0 gives the zero function".into(),
            ));
        }
        let phi = &(&p.pow(2) + &q.pow(2)) * &quarter;
        let phim = phi.pow(m);
        (phi.clone(), &phim * &p, &phim * &q)
    } else {
        let m = ((n - 2) / 2) as u32;
        let denom = &q.pow(2) - &p.pow(2).scalar_mul(&GaussRational::from_int(4));
        if denom.is_zero() {
            return Err(Error::DegenerateParameter(
                "q^2 - 4 p^2 vanishes, the conic parameter has a pole".into(),
            ));
        }
        let lambda = p.scalar_mul(&GaussRational::from_int(8)).divide(&denom)?;
        let phi = &RatFunc::one() + &(&lambda * &p);
        let phim = phi.pow(m);
        let big_f = phim.scalar_mul(&GaussRational::from_int(2));
        let psi = &(&lambda * &q) * &phim;
        (phi, big_f, psi)
    };
    // the defining identity 4 phi^n = psi^2 + F^2
    let lhs = phi.pow(n as u32).scalar_mul(&GaussRational::from_int(4));
    let rhs = &psi.pow(2) + &big_f.pow(2);
    if lhs != rhs {
        return Err(Error::Internal(
            "4 phi^n = psi^2 + F^2 failed for constructed data".into(),
        ));
    }
    let half_i = RatFunc::constant(&GaussRational::i() * &GaussRational::from_ratio(1, 2));
    let f = &big_f.scalar_mul(&GaussRational::from_ratio(1, 2)) + &(&half_i * &psi);
    let degenerate = psi.is_zero();
    Ok(DihedralLikeData {
        n,
        big_f,
        phi,
        psi,
        f,
        degenerate,
        labels: ActionLabels {
            relations: format!("z*w = phi, z^{n} + w^{n} = F, w = tau(z)"),
            galois: "g(z) = zeta*z, g(w) = zeta^-1*w".into(),
            conjugation: "tau(z) = w".into(),
        },
    })
}

/// Builds a twisted extension (8 | n, N = n/2) from two free real
/// functions: Phi = (p^2 + q^2)/4 and A = Phi^j p, B = Phi^j q where
/// N/2 - 1 = 2j + 1.
pub fn build_twisted(n: i64, p: RatFunc, q: RatFunc) -> Result<TwistedData> {
    require_degree(n)?;
    if n % 8 != 0 {
        return Err(Error::Input(format!(
            "the twisted case needs 8 | n, got {n}"
        )));
    }
    if !p.is_real() || !q.is_real() {
        return Err(Error::NotReal(
            "the twisted parametrization needs real functions".into(),
        ));
    }
    if p.is_zero() && q.is_zero() {
        return Err(Error::DegenerateParameter("p = q = 0".into()));
    }
    let half_n = n / 2;
    let exponent = half_n / 2 - 1;
    if exponent % 2 != 1 {
        return Err(Error::Internal(format!(
            "N/2 - 1 = {exponent} should be odd when 8 | n"
        )));
    }
    let j = ((exponent - 1) / 2) as u32;
    let phi_cap = (&p.pow(2) + &q.pow(2)).scalar_mul(&GaussRational::from_ratio(1, 4));
    let phij = phi_cap.pow(j);
    let a = &phij * &p;
    let b = &phij * &q;
    let lhs = &a.pow(2) + &b.pow(2);
    let rhs = phi_cap
        .pow(exponent as u32)
        .scalar_mul(&GaussRational::from_int(4));
    if lhs != rhs {
        return Err(Error::Internal(
            "A^2 + B^2 = 4 Phi^(N/2-1) failed for constructed data".into(),
        ));
    }
    let phi_square = square_status(&phi_cap, "Phi = (p^2+q^2)/4")?;
    let big_f = QuadExtElement::new(RatFunc::zero(), a.clone(), phi_cap.clone());
    let psi = QuadExtElement::new(RatFunc::zero(), b.clone(), phi_cap.clone());
    Ok(TwistedData {
        n,
        half_n,
        a,
        b,
        phi_cap,
        phi_square,
        big_f,
        psi,
        labels: ActionLabels {
            relations: format!(
                "z*w = phi, z^{half_n} + w^{half_n} = F, phi^2 = Phi, F = A*phi, psi = B*phi"
            ),
            galois: "g(z) = zeta*z, g(w) = -zeta^-1*w".into(),
            conjugation: "tau(z) = w".into(),
        },
    })
}

/// Builds an esoteric extension (8 | n, N = n/2) from one non-real theta:
/// Phi = theta conj(theta), D = -2/(theta - conj(theta)),
/// C = -(theta + conj(theta))/(theta - conj(theta)), then beta from the
/// power expansion of (C + y D)^N.
pub fn build_esoteric(n: i64, theta: RatFunc) -> Result<EsotericData> {
    require_degree(n)?;
    if n % 8 != 0 {
        return Err(Error::Input(format!(
            "the esoteric case needs 8 | n, got {n}"
        )));
    }
    let tau_theta = theta.conj();
    let diff = &theta - &tau_theta;
    if diff.is_zero() {
        return Err(Error::DegenerateTheta(
            "theta is real, the conic parametrization degenerates".into(),
        ));
    }
    let phi = &theta * &tau_theta;
    if !phi.is_real() {
        return Err(Error::Internal("theta conj(theta) is not real".into()));
    }
    let phi_square = square_status(&phi, "Phi = theta conj(theta)")?;

    let d = RatFunc::from_int(-2).divide(&diff)?;
    let c = (-&(&theta + &tau_theta)).divide(&diff)?;
    let c_d_imaginary = c.is_imaginary() && d.is_imaginary();
    if !c_d_imaginary {
        return Err(Error::Internal("C or D failed to be imaginary".into()));
    }
    let unit_norm = &c.pow(2) - &(&d.pow(2) * &phi) == RatFunc::one();
    if !unit_norm {
        return Err(Error::Internal("C^2 - Phi D^2 = 1 failed".into()));
    }

    let half_n = n / 2;
    let (ev, od) = quad_pow(&c, &d, &phi, half_n as u32);
    let power_norm = &ev.pow(2) - &(&od.pow(2) * &phi) == RatFunc::one();
    if !power_norm {
        return Err(Error::Internal("Ev^2 - Phi Od^2 = 1 failed".into()));
    }

    let ev_plus_one = &ev + &RatFunc::one();
    if ev_plus_one.is_zero() {
        return Err(Error::BetaPole("Ev = -1, beta has no value".into()));
    }
    let beta = (-&(&phi * &od).scalar_mul(&GaussRational::from_ratio(1, 2))).divide(&ev_plus_one)?;
    let beta_real = beta.is_real();
    if !beta_real {
        return Err(Error::Internal("beta failed to be real".into()));
    }
    // beta^2 (1 + Ev) = Phi (Ev - 1)/4, a consequence of the norm identity
    let lhs = &beta.pow(2) * &ev_plus_one;
    let rhs = (&(&ev - &RatFunc::one()) * &phi).scalar_mul(&GaussRational::from_ratio(1, 4));
    let beta_square_relation = lhs == rhs;
    if !beta_square_relation {
        return Err(Error::Internal(
            "beta^2 (1 + Ev) = Phi (Ev - 1)/4 failed".into(),
        ));
    }

    let half = RatFunc::from_ratio(1, 2);
    let f = QuadExtElement::new(beta.clone(), half.clone(), phi.clone());
    let target = QuadExtElement::new(-&beta, half, phi.clone());
    let power = QuadExtElement::new(ev.clone(), od.clone(), phi.clone());
    let power_equation = f.mul(&power)? == target;
    if !power_equation {
        return Err(Error::Internal(
            "(y/2 - beta) = (y/2 + beta)(C + y D)^N failed".into(),
        ));
    }

    let psi = &phi.scalar_mul(&GaussRational::from_ratio(1, 4)) - &beta.pow(2);
    Ok(EsotericData {
        n,
        half_n,
        theta,
        phi,
        c,
        d,
        ev,
        od,
        beta,
        psi,
        f,
        phi_square,
        checks: EsotericChecks {
            c_d_imaginary,
            unit_norm,
            power_norm,
            beta_real,
            beta_square_relation,
            power_equation,
        },
        labels: ActionLabels {
            relations: format!("W^{half_n} = y/2 + beta, y^2 = Phi, u = W*(C + y*D)"),
            galois: "g(W) = zeta*u, g(u) = zeta*W, g(y) = -y".into(),
            conjugation: "tau(W) = W, tau(u) = -u, tau(y) = y".into(),
        },
    })
}

/// One of the four basic extensions, as built.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "case", rename_all = "kebab-case")]
pub enum ExtensionData {
    Standard(StandardData),
    DihedralLike(DihedralLikeData),
    Twisted(TwistedData),
    Esoteric(EsotericData),
}

impl ExtensionData {
    pub fn degree(&self) -> i64 {
        match self {
            ExtensionData::Standard(d) => d.n,
            ExtensionData::DihedralLike(d) => d.n,
            ExtensionData::Twisted(d) => d.n,
            ExtensionData::Esoteric(d) => d.n,
        }
    }

    /// The conjugation residue m mod the degree.
    pub fn m_residue(&self) -> i64 {
        match self {
            ExtensionData::Standard(d) => (d.n - 1) % d.n,
            ExtensionData::DihedralLike(d) => 1 % d.n,
            ExtensionData::Twisted(d) => 1 + d.n / 2,
            ExtensionData::Esoteric(d) => d.n / 2 - 1,
        }
    }
}

/// The compositum of two coprime-degree extensions.
#[derive(Debug, Clone, Serialize)]
pub struct FibreProduct {
    pub degree: i64,
    pub m: i64,
    /// Defining function f^m phi^n of the product generator z*x, available
    /// when both sides are standard.
    pub combined_standard: Option<RatFunc>,
    pub generator_label: String,
    pub left: Box<ExtensionData>,
    pub right: Box<ExtensionData>,
}

pub fn fibre_product(left: &ExtensionData, right: &ExtensionData) -> Result<FibreProduct> {
    let n = left.degree();
    let m = right.degree();
    if gcd_i128(n as i128, m as i128) != 1 {
        return Err(Error::NotCoprime(format!(
            "degrees {n} and {m} share a factor"
        )));
    }
    let degree = n * m;
    let combined_m = crt_combine(&[(left.m_residue(), n), (right.m_residue(), m)]);
    let combined_standard = match (left, right) {
        (ExtensionData::Standard(a), ExtensionData::Standard(b)) => {
            Some(&a.f.pow(m as u32) * &b.f.pow(n as u32))
        }
        _ => None,
    };
    Ok(FibreProduct {
        degree,
        m: combined_m,
        combined_standard,
        generator_label: "z*x".into(),
        left: Box::new(left.clone()),
        right: Box::new(right.clone()),
    })
}

/// The free-parameter signature of a basic-case builder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamSignature {
    /// One real function (with an optional factored form).
    OneRealFunction,
    /// Two real functions.
    TwoRealFunctions,
    /// One non-real function whose norm is not a square.
    OneNonRealFunction,
}

impl ParamSignature {
    fn for_case(case: BasicCase) -> Self {
        match case {
            BasicCase::Standard => ParamSignature::OneRealFunction,
            BasicCase::DihedralLike | BasicCase::Twisted => ParamSignature::TwoRealFunctions,
            BasicCase::Esoteric => ParamSignature::OneNonRealFunction,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BasicFactor {
    pub modulus: i64,
    pub case: BasicCase,
    pub params: ParamSignature,
}

/// Splits (n, m) into at most two coprime basic factors, each tagged with
/// its builder's free-parameter signature.
pub fn decompose_to_basic(n: i64, m: i64) -> Result<Vec<BasicFactor>> {
    let class = classify_cyclic_involution(n, m)?;
    let raw = match class.coarse {
        CoarseSplit::Split { n_plus, n_minus } => vec![
            (n_plus, BasicCase::DihedralLike),
            (n_minus, BasicCase::Standard),
        ],
        CoarseSplit::EsotericFactor { n_plus, n_twisted } => vec![
            (n_plus, BasicCase::DihedralLike),
            (n_twisted, BasicCase::Esoteric),
        ],
        CoarseSplit::TwistedFactor { n_minus, n_twisted } => vec![
            (n_minus, BasicCase::Standard),
            (n_twisted, BasicCase::Twisted),
        ],
    };
    Ok(raw
        .into_iter()
        .filter(|&(f, _)| f > 1)
        .map(|(modulus, case)| BasicFactor {
            modulus,
            case,
            params: ParamSignature::for_case(case),
        })
        .collect())
}
