//! Branch-divisor and character-class building data for cyclic covers,
//! over an abstract finitely generated abelian class group.
//!
//! The carry coefficients `eps^i_{j,h} = ([ji] + [hi] - [(j+h)i]) / n` in
//! {0, 1} drive everything: the recursive character classes satisfy
//! `L_{j+1} = L_j + L - sum_i eps^i_{j,1} D_i`, and telescoping gives
//! `n L_j = sum_i [ji] D_i` whenever `n L = sum_i i D_i` holds, so that
//! postcondition is enforced as a hard internal check.
//!
//! Reality of the datum under an involution tau of the class group demands
//! tau(D_i) = D_{[-mi]} on both presence flags and classes, the
//! connectedness condition on h = gcd(n, present indices), and the torsion
//! obstruction eta = tau(L_1) - L_mu, mu = [-m], which is n-torsion
//! whenever divisor reality holds and is killed by a correcting n-torsion
//! class lambda with tau(lambda) - mu lambda = eta.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::abelian::{FinAbGroup, GroupElement, GroupHom};
use crate::error::{Error, Result};
use crate::matrix::{gcd_i128, lcm_i128};

/// A finitely generated abelian group Z^free + sum Z/t_i standing in for a
/// divisor class group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicModel {
    pub free_rank: usize,
    #[serde(rename = "torsion")]
    pub torsion_orders: Vec<i64>,
}

/// An element of a [`PicModel`]: free coordinates followed by torsion
/// residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PicElement {
    pub free: Vec<i64>,
    pub torsion: Vec<i64>,
}

impl PicModel {
    /// Desk-scale model: at most 64 coordinates, torsion orders up to 2^20.
    /// Together with the coordinate and action bounds this keeps every
    /// class computation inside i64.
    pub fn new(free_rank: usize, torsion_orders: Vec<i64>) -> Result<Self> {
        if let Some(&t) = torsion_orders.iter().find(|&&t| !(2..=1 << 20).contains(&t)) {
            return Err(Error::Input(format!(
                "torsion order {t} is outside 2..=2^20"
            )));
        }
        if free_rank + torsion_orders.len() > 64 {
            return Err(Error::SizeLimit(
                "class group models are limited to 64 coordinates".into(),
            ));
        }
        Ok(Self {
            free_rank,
            torsion_orders,
        })
    }

    pub fn dim(&self) -> usize {
        self.free_rank + self.torsion_orders.len()
    }

    pub fn zero(&self) -> PicElement {
        PicElement {
            free: vec![0; self.free_rank],
            torsion: vec![0; self.torsion_orders.len()],
        }
    }

    /// Builds an element from concatenated coordinates, reducing torsion.
    /// Free coordinates are capped at 2^40 in magnitude.
    pub fn element(&self, coords: &[i64]) -> Result<PicElement> {
        if coords.len() != self.dim() {
            return Err(Error::Input(format!(
                "class with {} coordinates in a model of dimension {}",
                coords.len(),
                self.dim()
            )));
        }
        if coords[..self.free_rank]
            .iter()
            .any(|&c| c.abs() > 1 << 40)
        {
            return Err(Error::Input(
                "free coordinates are limited to 2^40 in magnitude".into(),
            ));
        }
        Ok(PicElement {
            free: coords[..self.free_rank].to_vec(),
            torsion: coords[self.free_rank..]
                .iter()
                .zip(&self.torsion_orders)
                .map(|(&c, &t)| c.rem_euclid(t))
                .collect(),
        })
    }

    pub fn is_zero(&self, x: &PicElement) -> bool {
        x.free.iter().all(|&c| c == 0) && x.torsion.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &PicElement, b: &PicElement) -> PicElement {
        PicElement {
            free: a.free.iter().zip(&b.free).map(|(&x, &y)| x + y).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&b.torsion)
                .zip(&self.torsion_orders)
                .map(|((&x, &y), &t)| (x + y).rem_euclid(t))
                .collect(),
        }
    }

    pub fn neg(&self, a: &PicElement) -> PicElement {
        PicElement {
            free: a.free.iter().map(|&x| -x).collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&self.torsion_orders)
                .map(|(&x, &t)| (-x).rem_euclid(t))
                .collect(),
        }
    }

    pub fn sub(&self, a: &PicElement, b: &PicElement) -> PicElement {
        self.add(a, &self.neg(b))
    }

    pub fn scalar_mul(&self, k: i64, a: &PicElement) -> PicElement {
        PicElement {
            free: a
                .free
                .iter()
                .map(|&x| {
                    i64::try_from(k as i128 * x as i128).expect("class coordinate overflow")
                })
                .collect(),
            torsion: a
                .torsion
                .iter()
                .zip(&self.torsion_orders)
                .map(|(&x, &t)| ((k as i128 * x as i128).rem_euclid(t as i128)) as i64)
                .collect(),
        }
    }

    /// Like [`element`](Self::element) but without the input magnitude cap,
    /// for coordinates produced by model arithmetic.
    fn reduce(&self, coords: &[i64]) -> PicElement {
        PicElement {
            free: coords[..self.free_rank].to_vec(),
            torsion: coords[self.free_rank..]
                .iter()
                .zip(&self.torsion_orders)
                .map(|(&c, &t)| c.rem_euclid(t))
                .collect(),
        }
    }

    /// Order of an element: None when the free part is nonzero.
    pub fn element_order(&self, a: &PicElement) -> Option<i64> {
        if a.free.iter().any(|&c| c != 0) {
            return None;
        }
        let mut order = 1i128;
        for (&c, &t) in a.torsion.iter().zip(&self.torsion_orders) {
            order = lcm_i128(order, t as i128 / gcd_i128(t as i128, c as i128));
        }
        Some(order as i64)
    }

    /// All elements killed by n (free part zero), lexicographically.
    pub fn n_torsion(&self, n: i64) -> Result<Vec<PicElement>> {
        if n < 1 {
            return Err(Error::Input(format!("torsion bound {n} is below 1")));
        }
        let mut per_coord: Vec<Vec<i64>> = Vec::new();
        let mut count: i128 = 1;
        for &t in &self.torsion_orders {
            let g = gcd_i128(t as i128, n as i128) as i64;
            per_coord.push((0..g).map(|j| j * (t / g)).collect());
            count *= g as i128;
            if count > (1 << 20) {
                return Err(Error::SizeLimit(format!(
                    "n-torsion of size {count}+ exceeds the enumeration limit"
                )));
            }
        }
        let mut out = Vec::with_capacity(count as usize);
        let mut idx = vec![0usize; per_coord.len()];
        loop {
            out.push(PicElement {
                free: vec![0; self.free_rank],
                torsion: idx.iter().zip(&per_coord).map(|(&i, v)| v[i]).collect(),
            });
            let mut i = per_coord.len();
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < per_coord[i].len() {
                    break;
                }
                idx[i] = 0;
            }
        }
    }

    fn coords(&self, a: &PicElement) -> Vec<i64> {
        let mut out = a.free.clone();
        out.extend_from_slice(&a.torsion);
        out
    }
}

impl fmt::Display for PicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.free.iter().chain(self.torsion.iter()).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Concatenated coordinate array, free part first.
impl Serialize for PicElement {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.free.iter().chain(self.torsion.iter()))
    }
}

/// An involutive integer-matrix action on a [`PicModel`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TauAction {
    pub matrix: Vec<Vec<i64>>,
}

impl TauAction {
    pub fn identity(model: &PicModel) -> Self {
        let d = model.dim();
        Self {
            matrix: (0..d)
                .map(|i| (0..d).map(|j| i64::from(i == j)).collect())
                .collect(),
        }
    }

    /// Validates shape, entry bounds, well-definedness on torsion, and
    /// tau^2 = id.
    pub fn validate(&self, model: &PicModel) -> Result<()> {
        let d = model.dim();
        if self.matrix.len() != d || self.matrix.iter().any(|r| r.len() != d) {
            return Err(Error::Input(format!(
                "action matrix is not {d}x{d} for this model"
            )));
        }
        if self
            .matrix
            .iter()
            .flatten()
            .any(|&e| e.abs() > 1 << 20)
        {
            return Err(Error::Input(
                "action entries are limited to 2^20 in magnitude".into(),
            ));
        }
        for (j, &t) in model.torsion_orders.iter().enumerate() {
            let col = model.free_rank + j;
            for (i, row) in self.matrix.iter().enumerate() {
                let entry = row[col] as i128 * t as i128;
                let ok = if i < model.free_rank {
                    entry == 0
                } else {
                    entry % model.torsion_orders[i - model.free_rank] as i128 == 0
                };
                if !ok {
                    return Err(Error::Input(format!(
                        "action is not well defined on the torsion generator {j}"
                    )));
                }
            }
        }
        for j in 0..d {
            let mut basis = vec![0i64; d];
            basis[j] = 1;
            let e = model.element(&basis)?;
            if self.apply(model, &self.apply(model, &e)) != e {
                return Err(Error::Input(
                    "the action does not square to the identity".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn apply(&self, model: &PicModel, x: &PicElement) -> PicElement {
        let coords = model.coords(x);
        let raw: Vec<i64> = self
            .matrix
            .iter()
            .map(|row| {
                let acc: i128 = row
                    .iter()
                    .zip(&coords)
                    .map(|(&a, &c)| a as i128 * c as i128)
                    .sum();
                i64::try_from(acc).expect("class coordinate overflow")
            })
            .collect();
        model.reduce(&raw)
    }
}

/// The carry bit of residue addition: with `[r]` the representative of r
/// in {0..n-1}, `eps = ([ji] + [hi] - [(j+h)i]) / n`.
pub fn epsilon(n: i64, i: i64, j: i64, h: i64) -> i64 {
    assert!(n >= 2, "epsilon needs a modulus n >= 2");
    let r1 = (j as i128 * i as i128).rem_euclid(n as i128);
    let r2 = (h as i128 * i as i128).rem_euclid(n as i128);
    let r3 = ((j as i128 + h as i128) * i as i128).rem_euclid(n as i128);
    let num = r1 + r2 - r3;
    debug_assert_eq!(num.rem_euclid(n as i128), 0);
    let eps = num / n as i128;
    debug_assert!(eps == 0 || eps == 1);
    eps as i64
}

/// One branch divisor slot: an absent divisor has a zero class and a false
/// flag; presence with a zero class is meaningful for torsion models.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivisorEntry {
    pub present: bool,
    pub class: PicElement,
}

/// Building data for a cyclic cover of degree n with conjugation residue m:
/// branch classes D_1..D_{n-1}, a class L with n L = sum_i i D_i, and an
/// involutive action tau on the model.
#[derive(Debug, Clone, Serialize)]
pub struct CyclicBuildingData {
    pub n: i64,
    pub m: i64,
    pub pic: PicModel,
    pub l: PicElement,
    /// Slot i-1 holds D_i.
    pub divisors: Vec<DivisorEntry>,
    pub tau: TauAction,
}

impl CyclicBuildingData {
    pub fn new(
        n: i64,
        m: i64,
        pic: PicModel,
        l: PicElement,
        divisors: Vec<DivisorEntry>,
        tau: TauAction,
    ) -> Result<Self> {
        if !(2..=4096).contains(&n) {
            return Err(Error::Input(format!(
                "cover degree must lie in 2..=4096, got {n}"
            )));
        }
        let m = m.rem_euclid(n);
        if (m as i128 * m as i128 - 1).rem_euclid(n as i128) != 0 {
            return Err(Error::NotAnInvolution(format!("{m}^2 is not 1 modulo {n}")));
        }
        if divisors.len() != (n - 1) as usize {
            return Err(Error::Input(format!(
                "expected {} divisor slots, got {}",
                n - 1,
                divisors.len()
            )));
        }
        tau.validate(&pic)?;
        for (idx, entry) in divisors.iter().enumerate() {
            if entry.class.free.len() != pic.free_rank
                || entry.class.torsion.len() != pic.torsion_orders.len()
            {
                return Err(Error::Input(format!(
                    "divisor {} has the wrong dimension",
                    idx + 1
                )));
            }
            if !entry.present && !pic.is_zero(&entry.class) {
                return Err(Error::Input(format!(
                    "divisor {} is absent but carries a nonzero class",
                    idx + 1
                )));
            }
        }
        let data = Self {
            n,
            m,
            pic,
            l,
            divisors,
            tau,
        };
        if !data.pic.is_zero(&data.fundamental_defect()) {
            return Err(Error::Input(
                "the relation n L = sum_i i D_i fails in the model".into(),
            ));
        }
        Ok(data)
    }

    /// n L - sum_i i D_i, which must vanish.
    fn fundamental_defect(&self) -> PicElement {
        let mut acc = self.pic.scalar_mul(self.n, &self.l);
        for (idx, entry) in self.divisors.iter().enumerate() {
            let i = (idx + 1) as i64;
            acc = self
                .pic
                .sub(&acc, &self.pic.scalar_mul(i, &entry.class));
        }
        acc
    }

    fn divisor_class(&self, i: i64) -> &PicElement {
        &self.divisors[(i - 1) as usize].class
    }
}

/// The classes L_0..L_{n-1} built by the carry recursion, with the
/// telescoped relation `n L_j = sum_i [ji] D_i` checked for every j.
pub fn lchi_all(bd: &CyclicBuildingData) -> Result<Vec<PicElement>> {
    let n = bd.n;
    let mut out = Vec::with_capacity(n as usize);
    out.push(bd.pic.zero());
    if n >= 2 {
        out.push(bd.l.clone());
    }
    for j in 1..n - 1 {
        let mut next = bd.pic.add(&out[j as usize], &bd.l);
        for i in 1..n {
            if epsilon(n, i, j, 1) == 1 {
                next = bd.pic.sub(&next, bd.divisor_class(i));
            }
        }
        out.push(next);
    }
    for (j, lj) in out.iter().enumerate() {
        let mut rhs = bd.pic.zero();
        for i in 1..n {
            let coeff = (j as i64 * i).rem_euclid(n);
            rhs = bd.pic.add(&rhs, &bd.pic.scalar_mul(coeff, bd.divisor_class(i)));
        }
        if bd.pic.scalar_mul(n, lj) != rhs {
            return Err(Error::Internal(format!(
                "n L_{j} = sum_i [ji] D_i failed; the carry recursion is broken"
            )));
        }
    }
    Ok(out)
}

/// Connectedness data: h = gcd of n and the present indices, and the order
/// of the residual class L' = (n/h) L - sum_i (i/h) D_i.
#[derive(Debug, Clone, Serialize)]
pub struct ConnectednessReport {
    pub h: i64,
    /// None encodes infinite order.
    pub order_of_l_prime: Option<i64>,
    pub degenerate_trivial: bool,
    pub verdict: bool,
}

/// Checks the connectedness condition: either h = 1, or L' has order
/// exactly h. With no divisor present h = n and the condition asks L to
/// have order exactly n; the completely trivial datum is flagged.
pub fn verify_connectedness(bd: &CyclicBuildingData) -> ConnectednessReport {
    let mut h = bd.n as i128;
    for (idx, entry) in bd.divisors.iter().enumerate() {
        if entry.present {
            h = gcd_i128(h, (idx + 1) as i128);
        }
    }
    let h = h as i64;
    let mut l_prime = bd.pic.scalar_mul(bd.n / h, &bd.l);
    for (idx, entry) in bd.divisors.iter().enumerate() {
        let i = (idx + 1) as i64;
        if entry.present {
            l_prime = bd.pic.sub(&l_prime, &bd.pic.scalar_mul(i / h, &entry.class));
        }
    }
    let order = bd.pic.element_order(&l_prime);
    let none_present = bd.divisors.iter().all(|e| !e.present);
    let degenerate_trivial = none_present && bd.pic.is_zero(&bd.l);
    let verdict = h == 1 || order == Some(h);
    ConnectednessReport {
        h,
        order_of_l_prime: order,
        degenerate_trivial,
        verdict,
    }
}

/// Divisor-level reality: presence flags and classes must match across
/// i -> [-m i] under tau.
#[derive(Debug, Clone, Serialize)]
pub struct DivisorRealityReport {
    pub pass: bool,
    pub failing_indices: Vec<i64>,
}

/// Outcome of the full reality verification.
#[derive(Debug, Clone, Serialize)]
pub struct RealityReport {
    pub divisor_reality: DivisorRealityReport,
    pub connectedness: ConnectednessReport,
    pub mu: i64,
    pub eta: PicElement,
    pub eta_is_n_torsion: bool,
    pub lambda_solutions: Vec<PicElement>,
    pub verdict: bool,
}

/// Verifies that building data is real with respect to its involution: the
/// divisor permutation i -> [-m i] is respected, the cover is connected,
/// and the torsion obstruction eta = tau(L_1) - L_mu is solvable as
/// eta = tau(lambda) - mu lambda with lambda n-torsion.
///
/// Divisor reality forces eta to be n-torsion; a non-torsion eta alongside
/// passing divisor reality is therefore an internal error.
pub fn verify_real_building_data(bd: &CyclicBuildingData) -> Result<RealityReport> {
    let n = bd.n;
    let mu = (-bd.m).rem_euclid(n);
    let mut failing = Vec::new();
    for i in 1..n {
        let partner = (-bd.m * i).rem_euclid(n);
        debug_assert!(partner >= 1);
        let entry = &bd.divisors[(i - 1) as usize];
        let other = &bd.divisors[(partner - 1) as usize];
        let class_matches = bd.tau.apply(&bd.pic, &entry.class) == other.class;
        if entry.present != other.present || !class_matches {
            failing.push(i);
        }
    }
    let divisor_reality = DivisorRealityReport {
        pass: failing.is_empty(),
        failing_indices: failing,
    };

    let connectedness = verify_connectedness(bd);

    let lchi = lchi_all(bd)?;
    let eta = bd.pic.sub(&bd.tau.apply(&bd.pic, &lchi[1]), &lchi[mu as usize]);
    let eta_is_n_torsion = bd.pic.is_zero(&bd.pic.scalar_mul(n, &eta));
    if divisor_reality.pass && !eta_is_n_torsion {
        return Err(Error::Internal(
            "divisor reality holds but eta = tau(L_1) - L_mu is not n-torsion".into(),
        ));
    }

    let mut lambda_solutions = Vec::new();
    if eta_is_n_torsion {
        for lam in bd.pic.n_torsion(n)? {
            let lhs = bd
                .pic
                .sub(&bd.tau.apply(&bd.pic, &lam), &bd.pic.scalar_mul(mu, &lam));
            if lhs == eta {
                lambda_solutions.push(lam);
            }
        }
    }
    let eta_zero = bd.pic.is_zero(&eta);
    let verdict = divisor_reality.pass
        && connectedness.verdict
        && (eta_zero || !lambda_solutions.is_empty());
    Ok(RealityReport {
        divisor_reality,
        connectedness,
        mu,
        eta,
        eta_is_n_torsion,
        lambda_solutions,
        verdict,
    })
}

/// Exhaustive check of the two structural identities of the carries for a
/// given (n, m): equivariance under j -> [-mj] paired with i -> [-mi], and
/// the cocycle identity in (j, h, k). Both are theorems; a counterexample
/// is an internal error.
#[derive(Debug, Clone, Serialize)]
pub struct EpsilonIdentityReport {
    pub n: i64,
    pub m: i64,
    pub equivariance_triples: u64,
    pub cocycle_quadruples: u64,
    pub pass: bool,
}

pub fn epsilon_identities(n: i64, m: i64) -> Result<EpsilonIdentityReport> {
    let equivariance_triples = epsilon_equivariance(n, m)?;
    let cocycle_quadruples = epsilon_cocycle(n)?;
    Ok(EpsilonIdentityReport {
        n,
        m: m.rem_euclid(n),
        equivariance_triples,
        cocycle_quadruples,
        pass: true,
    })
}

/// Multiplication table mod n, flattened.
fn residue_table(n: i64) -> Vec<i64> {
    let nn = n as usize;
    let mut table = vec![0i64; nn * nn];
    for a in 0..nn {
        for b in 0..nn {
            table[a * nn + b] = ((a * b) % nn) as i64;
        }
    }
    table
}

/// Exhaustively checks eps^i_{[-mj],[-mh]} = eps^{[-mi]}_{j,h} over all
/// triples; returns the number of triples checked.
pub fn epsilon_equivariance(n: i64, m: i64) -> Result<u64> {
    if n < 2 {
        return Err(Error::Input(format!("modulus must be >= 2, got {n}")));
    }
    let m = m.rem_euclid(n);
    if (m as i128 * m as i128 - 1).rem_euclid(n as i128) != 0 {
        return Err(Error::NotAnInvolution(format!("{m}^2 is not 1 modulo {n}")));
    }
    let nn = n as usize;
    let table = residue_table(n);
    let eps = |i: usize, j: usize, h: usize| -> i64 {
        (table[j * nn + i] + table[h * nn + i] - table[((j + h) % nn) * nn + i]) / n
    };
    let neg_m = |x: usize| -> usize { ((-m * x as i64).rem_euclid(n)) as usize };
    let mut triples = 0u64;
    for i in 0..nn {
        let mi = neg_m(i);
        for j in 0..nn {
            let mj = neg_m(j);
            for h in 0..nn {
                let mh = neg_m(h);
                if eps(i, mj, mh) != eps(mi, j, h) {
                    return Err(Error::Internal(format!(
                        "equivariance fails at n={n}, m={m}, (i,j,h)=({i},{j},{h})"
                    )));
                }
                triples += 1;
            }
        }
    }
    Ok(triples)
}

/// Exhaustively checks the carry cocycle identity
/// eps^i_{j,h} + eps^i_{j+h,k} = eps^i_{h,k} + eps^i_{j,h+k} over all
/// quadruples; returns the number checked. Independent of m.
pub fn epsilon_cocycle(n: i64) -> Result<u64> {
    if n < 2 {
        return Err(Error::Input(format!("modulus must be >= 2, got {n}")));
    }
    let nn = n as usize;
    let table = residue_table(n);
    let eps = |i: usize, j: usize, h: usize| -> i64 {
        (table[j * nn + i] + table[h * nn + i] - table[((j + h) % nn) * nn + i]) / n
    };
    let mut quadruples = 0u64;
    for i in 0..nn {
        for j in 0..nn {
            for h in 0..nn {
                let e_jh = eps(i, j, h);
                for k in 0..nn {
                    let lhs = e_jh + eps(i, (j + h) % nn, k);
                    let rhs = eps(i, h, k) + eps(i, j, (h + k) % nn);
                    if lhs != rhs {
                        return Err(Error::Internal(format!(
                            "cocycle fails at n={n}, (i,j,h,k)=({i},{j},{h},{k})"
                        )));
                    }
                    quadruples += 1;
                }
            }
        }
    }
    Ok(quadruples)
}

/// The carry coefficient for a general finite abelian group: characters are
/// identified with group elements through the invariant-factor pairing
/// <x, y> = sum_i x_i y_i / d_i, and for a fixed g of order n_g the value
/// chi(g) lies in Z/n_g, where the usual carry formula applies.
pub fn epsilon_abelian(
    g: &FinAbGroup,
    base: &GroupElement,
    chi: &GroupElement,
    xi: &GroupElement,
) -> Result<i64> {
    if base.is_zero() {
        return Err(Error::UndefinedBranch(
            "the carry coefficient is indexed by nonzero group elements".into(),
        ));
    }
    let n_g = g.element_order(base)?;
    let chi_sum = g.add(chi, xi);
    let a = pair_value(g, chi, base, n_g)?;
    let b = pair_value(g, xi, base, n_g)?;
    let c = pair_value(g, &chi_sum, base, n_g)?;
    let num = a + b - c;
    debug_assert_eq!(num.rem_euclid(n_g), 0);
    Ok(num / n_g)
}

/// `chi(g)` in Z/n_g under the invariant-factor pairing.
fn pair_value(g: &FinAbGroup, chi: &GroupElement, base: &GroupElement, n_g: i64) -> Result<i64> {
    let exponent = g.exponent() as i128;
    if exponent == 1 {
        return Ok(0);
    }
    let mut val: i128 = 0;
    for ((&c, &x), &d) in chi
        .coords()
        .iter()
        .zip(base.coords())
        .zip(g.invariant_factors())
    {
        val += c as i128 * x as i128 * (exponent / d as i128);
    }
    val = val.rem_euclid(exponent);
    let scaled = val * n_g as i128;
    if scaled % exponent != 0 {
        return Err(Error::Internal(
            "the pairing value does not lie in the expected torsion line".into(),
        ));
    }
    Ok(((scaled / exponent).rem_euclid(n_g as i128)) as i64)
}

/// Building data for a general abelian cover: classes D_g for nonzero g and
/// a full family L_chi indexed by the character group (identified with G).
#[derive(Debug, Clone)]
pub struct AbelianBuildingData {
    pub group: FinAbGroup,
    pub involution: GroupHom,
    pub pic: PicModel,
    /// Keyed by nonzero group elements; missing keys are absent divisors.
    pub divisors: BTreeMap<GroupElement, DivisorEntry>,
    /// Keyed by all group elements; the zero character must map to zero.
    pub l_family: BTreeMap<GroupElement, PicElement>,
    pub tau: TauAction,
}

/// Per-character reality discrepancy: eta_chi = tau(L_chi) - L_{-chi o M}.
#[derive(Debug, Clone, Serialize)]
pub struct CharacterDiscrepancy {
    pub chi: GroupElement,
    pub eta: PicElement,
    pub eta_is_exponent_torsion: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AbelianDataReport {
    /// (chi, xi) pairs violating L_{chi+xi} = L_chi + L_xi - sum eps D_g,
    /// at most 10 kept.
    pub relation_failures: Vec<(GroupElement, GroupElement)>,
    pub relation_pairs_checked: u64,
    pub divisor_reality_failures: Vec<GroupElement>,
    pub character_discrepancies: Vec<CharacterDiscrepancy>,
    pub verdict: bool,
}

/// Verifies the multiplicative relations and the reality constraints of an
/// abelian datum. Characters are folded through chi -> -chi o M using the
/// adjoint of M under the invariant-factor pairing.
pub fn abelian_building_data_verify(data: &AbelianBuildingData) -> Result<AbelianDataReport> {
    let g = &data.group;
    if data.involution.source() != g || data.involution.target() != g {
        return Err(Error::Input("M is not an endomorphism of G".into()));
    }
    if !data.involution.is_involutive() {
        return Err(Error::NotAnInvolution("M^2 is not the identity".into()));
    }
    data.tau.validate(&data.pic)?;
    // the relation scan walks |G|^2 character pairs against |G| divisors
    if g.order() > 512 {
        return Err(Error::SizeLimit(format!(
            "abelian data verification walks |G|^3 tuples; |G| = {} is out of range",
            g.order()
        )));
    }
    let zero_l = data
        .l_family
        .get(&g.zero())
        .ok_or_else(|| Error::Input("the family is missing L_0".into()))?;
    if !data.pic.is_zero(zero_l) {
        return Err(Error::Input("L_0 must be the zero class".into()));
    }
    for x in g.elements() {
        if !data.l_family.contains_key(&x) {
            return Err(Error::Input(format!("the family is missing L_{x}")));
        }
        if x.is_zero() {
            continue;
        }
        if let Some(entry) = data.divisors.get(&x) {
            if !entry.present && !data.pic.is_zero(&entry.class) {
                return Err(Error::Input(format!(
                    "divisor at {x} is absent but carries a nonzero class"
                )));
            }
        }
    }

    let divisor_class = |x: &GroupElement| -> PicElement {
        data.divisors
            .get(x)
            .map(|e| e.class.clone())
            .unwrap_or_else(|| data.pic.zero())
    };
    let divisor_present = |x: &GroupElement| -> bool {
        data.divisors.get(x).map(|e| e.present).unwrap_or(false)
    };

    // fundamental relations over all character pairs
    let mut relation_failures = Vec::new();
    let mut relation_pairs_checked = 0u64;
    let elements: Vec<GroupElement> = g.elements().collect();
    for chi in &elements {
        for xi in &elements {
            let sum = g.add(chi, xi);
            let mut rhs = data.pic.add(&data.l_family[chi], &data.l_family[xi]);
            for base in &elements {
                if base.is_zero() {
                    continue;
                }
                let eps = epsilon_abelian(g, base, chi, xi)?;
                if eps == 1 {
                    rhs = data.pic.sub(&rhs, &divisor_class(base));
                }
            }
            relation_pairs_checked += 1;
            if data.l_family[&sum] != rhs && relation_failures.len() < 10 {
                relation_failures.push((chi.clone(), xi.clone()));
            }
        }
    }

    // divisor reality: tau(D_g) = D_{-M(g)}
    let mut divisor_reality_failures = Vec::new();
    for x in &elements {
        if x.is_zero() {
            continue;
        }
        let partner = g.neg(&data.involution.apply(x)?);
        let ok = divisor_present(x) == divisor_present(&partner)
            && data.tau.apply(&data.pic, &divisor_class(x)) == divisor_class(&partner);
        if !ok {
            divisor_reality_failures.push(x.clone());
        }
    }

    // per-character discrepancies against chi -> -chi o M
    let dual_m = dual_hom(g, &data.involution)?;
    let exponent = g.exponent();
    let mut character_discrepancies = Vec::new();
    for chi in &elements {
        let folded = g.neg(&dual_m.apply(chi)?);
        let eta = data.pic.sub(
            &data.tau.apply(&data.pic, &data.l_family[chi]),
            &data.l_family[&folded],
        );
        let eta_is_exponent_torsion = data
            .pic
            .is_zero(&data.pic.scalar_mul(exponent, &eta));
        if !data.pic.is_zero(&eta) || !eta_is_exponent_torsion {
            character_discrepancies.push(CharacterDiscrepancy {
                chi: chi.clone(),
                eta,
                eta_is_exponent_torsion,
            });
        }
    }

    let verdict = relation_failures.is_empty()
        && divisor_reality_failures.is_empty()
        && character_discrepancies
            .iter()
            .all(|d| d.eta_is_exponent_torsion);
    Ok(AbelianDataReport {
        relation_failures,
        relation_pairs_checked,
        divisor_reality_failures,
        character_discrepancies,
        verdict,
    })
}

/// The adjoint of an endomorphism under the pairing
/// <x, y> = sum_i x_i y_i / d_i: entries transpose with the weight d_j/d_i,
/// which stays integral for well-formed matrices.
pub fn dual_hom(g: &FinAbGroup, m: &GroupHom) -> Result<GroupHom> {
    let r = g.rank();
    let d = g.invariant_factors();
    let mut matrix = vec![vec![0i64; r]; r];
    for (j, row) in matrix.iter_mut().enumerate() {
        for (i, entry) in row.iter_mut().enumerate() {
            let num = m.matrix()[i][j] as i128 * d[j] as i128;
            if num % d[i] as i128 != 0 {
                return Err(Error::Internal(
                    "adjoint weights are not integral for a well-formed matrix".into(),
                ));
            }
            *entry = (num / d[i] as i128) as i64;
        }
    }
    GroupHom::new(g.clone(), g.clone(), matrix)
}
