//! Semidirect products G x| Z/2 defined by an involution on a finite
//! abelian group, with presentation checking and the typing of the four
//! basic cyclic cases.
//!
//! Writing elements as (g, eps) with the nontrivial coset generated by tau,
//! multiplication is (g, eps) (h, delta) = (g + M^eps h, eps + delta), which
//! encodes tau g tau = M(g) and tau^2 = 1. The formula defines a group
//! exactly when M is an involutive automorphism.

use serde::{Deserialize, Serialize};

use crate::abelian::{FinAbGroup, GroupElement, GroupHom};
use crate::error::{Error, Result};
use crate::involution::{classify_cyclic_involution, CoarseSplit};

/// A finite abelian group together with an involutive automorphism,
/// presenting the extension generated by the group and one order-2 element
/// acting by the automorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemidirectGroup {
    base: FinAbGroup,
    conjugation: GroupHom,
}

/// An element (g, eps): eps = 0 lies in the base, eps = 1 in the coset of
/// the order-2 generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SemidirectElement {
    pub g: GroupElement,
    pub eps: u8,
}

impl SemidirectGroup {
    pub fn new(base: FinAbGroup, conjugation: GroupHom) -> Result<Self> {
        if conjugation.source() != &base || conjugation.target() != &base {
            return Err(Error::DomainMismatch(
                "conjugation must be an endomorphism of the base".into(),
            ));
        }
        if !conjugation.is_involutive() {
            return Err(Error::NotAnInvolution(
                "conjugation does not square to the identity".into(),
            ));
        }
        Ok(Self { base, conjugation })
    }

    /// The cyclic case Z/n with conjugation by multiplication by m.
    pub fn cyclic(n: i64, m: i64) -> Result<Self> {
        let base = FinAbGroup::cyclic(n)?;
        let conj = GroupHom::scalar(&base, m);
        Self::new(base, conj)
    }

    pub fn base(&self) -> &FinAbGroup {
        &self.base
    }

    pub fn conjugation(&self) -> &GroupHom {
        &self.conjugation
    }

    pub fn order(&self) -> i128 {
        2 * self.base.order()
    }

    pub fn element(&self, g: GroupElement, eps: u8) -> Result<SemidirectElement> {
        if !self.base.contains(&g) {
            return Err(Error::DomainMismatch(format!(
                "{g} does not live in the base group"
            )));
        }
        if eps > 1 {
            return Err(Error::Input(format!("coset bit must be 0 or 1, got {eps}")));
        }
        Ok(SemidirectElement { g, eps })
    }

    pub fn identity(&self) -> SemidirectElement {
        SemidirectElement {
            g: self.base.zero(),
            eps: 0,
        }
    }

    /// (g, eps) (h, delta) = (g + M^eps h, eps + delta mod 2).
    pub fn multiply(
        &self,
        a: &SemidirectElement,
        b: &SemidirectElement,
    ) -> Result<SemidirectElement> {
        if !self.base.contains(&a.g) || !self.base.contains(&b.g) {
            return Err(Error::DomainMismatch(
                "elements do not live in this semidirect product".into(),
            ));
        }
        let acted = if a.eps == 1 {
            self.conjugation.apply(&b.g)?
        } else {
            b.g.clone()
        };
        Ok(SemidirectElement {
            g: self.base.add(&a.g, &acted),
            eps: (a.eps + b.eps) % 2,
        })
    }

    pub fn inverse(&self, a: &SemidirectElement) -> Result<SemidirectElement> {
        let neg = self.base.neg(&a.g);
        let g = if a.eps == 1 {
            self.conjugation.apply(&neg)?
        } else {
            neg
        };
        Ok(SemidirectElement { g, eps: a.eps })
    }

    pub fn element_order(&self, a: &SemidirectElement) -> Result<i64> {
        if a.eps == 0 {
            return self.base.element_order(&a.g);
        }
        // (g, 1)^2 = (g + Mg, 0)
        let sq = self.multiply(a, a)?;
        Ok(2 * self.base.element_order(&sq.g)?)
    }

    pub fn elements(&self) -> Result<Vec<SemidirectElement>> {
        self.base.ensure_enumerable()?;
        let mut out = Vec::with_capacity(self.order() as usize);
        for eps in 0..2u8 {
            for g in self.base.elements() {
                out.push(SemidirectElement { g, eps });
            }
        }
        Ok(out)
    }
}

/// A presentation check for the extension defined by a raw endomorphism,
/// which need not be involutive. Failures are entries of the report, not
/// errors.
#[derive(Debug, Clone, Serialize)]
pub struct PresentationReport {
    pub m_is_well_formed: bool,
    pub m_is_automorphism: bool,
    pub m_squares_to_identity: bool,
    /// Elements x with M(M(x)) != x, at most 5 kept.
    pub involution_witnesses: Vec<GroupElement>,
    /// Nonzero kernel elements of M, at most 5 kept.
    pub kernel_witnesses: Vec<GroupElement>,
    pub order_doubles: bool,
    pub exhaustive: bool,
    pub pass: bool,
}

/// Checks exhaustively (for |G| <= 2^12) that the multiplication formula
/// defines a group of order 2|G| in which the order-2 generator conjugates
/// by M: equivalently, that M is an automorphism squaring to the identity.
pub fn verify_presentation(base: &FinAbGroup, m: &GroupHom) -> PresentationReport {
    let well_formed = m.source() == base && m.target() == base;
    let mut involution_witnesses = Vec::new();
    let mut kernel_witnesses = Vec::new();
    let mut exhaustive = false;
    let mut m_is_automorphism = well_formed;
    let mut m_squares_to_identity = well_formed && m.is_involutive();
    if well_formed && base.order() <= (1 << 12) {
        exhaustive = true;
        for x in base.elements() {
            let mx = m.apply(&x).expect("element of the base");
            let mmx = m.apply(&mx).expect("element of the base");
            if mmx != x && involution_witnesses.len() < 5 {
                involution_witnesses.push(x.clone());
            }
            if mmx != x {
                m_squares_to_identity = false;
            }
            if !x.is_zero() && mx.is_zero() {
                m_is_automorphism = false;
                if kernel_witnesses.len() < 5 {
                    kernel_witnesses.push(x);
                }
            }
        }
    } else if well_formed {
        // matrix-level check only
        m_is_automorphism = m_squares_to_identity;
    }
    let pass = well_formed && m_is_automorphism && m_squares_to_identity;
    PresentationReport {
        m_is_well_formed: well_formed,
        m_is_automorphism,
        m_squares_to_identity,
        involution_witnesses,
        kernel_witnesses,
        order_doubles: true,
        exhaustive,
        pass,
    }
}

/// One of the four pure cyclic cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasicCase {
    /// m = -1: the extension is the dihedral group D_n.
    Standard,
    /// m = +1: the extension is the direct product G x Z/2.
    DihedralLike,
    /// 8 | n and m = 1 + n/2.
    Twisted,
    /// 8 | n and m = -1 + n/2.
    Esoteric,
}

/// Case typing of the pair (n, m): one of the four pure cases, or a
/// two-factor mixture over coprime moduli.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BasicCaseType {
    Standard,
    DihedralLike,
    Twisted,
    Esoteric,
    Mixed { factors: Vec<(i64, BasicCase)> },
}

/// Types the semidirect structure of (Z/n, m). Pure cases are recognized
/// first (for n <= 2 the standard and dihedral-like cases coincide and
/// standard is reported); everything else splits into exactly two coprime
/// factors.
pub fn basic_case_type(n: i64, m: i64) -> Result<BasicCaseType> {
    let class = classify_cyclic_involution(n, m)?;
    let m = class.m;
    if (m + 1).rem_euclid(n) == 0 {
        return Ok(BasicCaseType::Standard);
    }
    if (m - 1).rem_euclid(n) == 0 {
        return Ok(BasicCaseType::DihedralLike);
    }
    if n % 8 == 0 && m == 1 + n / 2 {
        return Ok(BasicCaseType::Twisted);
    }
    if n % 8 == 0 && m == n / 2 - 1 {
        return Ok(BasicCaseType::Esoteric);
    }
    let factors = match class.coarse {
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
    let factors: Vec<(i64, BasicCase)> = factors.into_iter().filter(|&(f, _)| f > 1).collect();
    debug_assert!(factors.len() == 2, "pure cases were recognized above");
    Ok(BasicCaseType::Mixed { factors })
}

/// The index-2 subgroup generated by the square of the cyclic generator and
/// the order-2 element: for a cyclic base Z/n with n even this is
/// Z/(n/2) x| Z/2 with the conjugation residue reduced mod n/2.
pub fn even_subgroup(grp: &SemidirectGroup) -> Result<SemidirectGroup> {
    if grp.base.rank() > 1 {
        return Err(Error::DomainMismatch(format!(
            "even subgroup requires a cyclic base, got {}",
            grp.base
        )));
    }
    let n = grp.base.invariant_factors().first().copied().unwrap_or(1);
    if n % 2 != 0 {
        return Err(Error::NoEvenSubgroup(format!(
            "the base Z/{n} has odd order, squares generate everything"
        )));
    }
    let m = if grp.base.rank() == 1 {
        grp.conjugation.matrix()[0][0]
    } else {
        0
    };
    SemidirectGroup::cyclic(n / 2, m.rem_euclid((n / 2).max(1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn multiplication_in_the_base() {
        let grp = SemidirectGroup::cyclic(8, 3).unwrap();
        let g = grp.base().element(&[5]).unwrap();
        let h = grp.base().element(&[4]).unwrap();
        let a = grp.element(g, 0).unwrap();
        let b = grp.element(h, 0).unwrap();
        let p = grp.multiply(&a, &b).unwrap();
        assert_eq!(p.g, grp.base().element(&[1]).unwrap());
        assert_eq!(p.eps, 0);
    }

    #[test]
    fn conjugation_by_tau() {
        // tau * g * tau = g^m on Z/8 with m = 3
        let grp = SemidirectGroup::cyclic(8, 3).unwrap();
        let tau = grp.element(grp.base().zero(), 1).unwrap();
        let g = grp.element(grp.base().element(&[1]).unwrap(), 0).unwrap();
        let p = grp
            .multiply(&grp.multiply(&tau, &g).unwrap(), &tau)
            .unwrap();
        assert_eq!(p.g, grp.base().element(&[3]).unwrap());
        assert_eq!(p.eps, 0);
    }

    #[test]
    fn reflection_product_in_dihedral_case() {
        // (g, 1)(g', 1) = (g - g', 0) when m = -1
        let grp = SemidirectGroup::cyclic(7, -1).unwrap();
        let a = grp.element(grp.base().element(&[5]).unwrap(), 1).unwrap();
        let b = grp.element(grp.base().element(&[2]).unwrap(), 1).unwrap();
        let p = grp.multiply(&a, &b).unwrap();
        assert_eq!(p.g, grp.base().element(&[3]).unwrap());
        assert_eq!(p.eps, 0);
    }

    #[test]
    fn associativity_exhaustive_on_small_bases() {
        for (n, m) in [(8i64, 3i64), (5, 4), (12, 5), (4, 1)] {
            let grp = SemidirectGroup::cyclic(n, m).unwrap();
            let elems = grp.elements().unwrap();
            for a in &elems {
                for b in &elems {
                    let ab = grp.multiply(a, b).unwrap();
                    for c in &elems {
                        let bc = grp.multiply(b, c).unwrap();
                        assert_eq!(
                            grp.multiply(&ab, c).unwrap(),
                            grp.multiply(a, &bc).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn associativity_on_random_triples_for_a_large_base() {
        let grp = SemidirectGroup::cyclic(512, 255).unwrap();
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..500 {
            let pick = |s: &mut dyn FnMut() -> u64| {
                let g = grp
                    .base()
                    .element(&[(s() % 512) as i64])
                    .unwrap();
                grp.element(g, (s() % 2) as u8).unwrap()
            };
            let a = pick(&mut next);
            let b = pick(&mut next);
            let c = pick(&mut next);
            let ab_c = grp.multiply(&grp.multiply(&a, &b).unwrap(), &c).unwrap();
            let a_bc = grp.multiply(&a, &grp.multiply(&b, &c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc);
        }
    }

    #[test]
    fn presentation_of_dihedral_d5() {
        let base = FinAbGroup::cyclic(5).unwrap();
        let report = verify_presentation(&base, &GroupHom::scalar(&base, -1));
        assert!(report.pass);
        // order census must match D_5: identity, four rotations of order 5,
        // five reflections of order 2
        let grp = SemidirectGroup::cyclic(5, -1).unwrap();
        let mut census: BTreeMap<i64, usize> = BTreeMap::new();
        for e in grp.elements().unwrap() {
            *census.entry(grp.element_order(&e).unwrap()).or_insert(0) += 1;
        }
        assert_eq!(census, BTreeMap::from([(1, 1), (2, 5), (5, 4)]));
    }

    #[test]
    fn presentation_passes_for_twisted_case() {
        let base = FinAbGroup::cyclic(8).unwrap();
        assert!(verify_presentation(&base, &GroupHom::scalar(&base, 3)).pass);
    }

    #[test]
    fn presentation_fails_for_non_automorphism() {
        let base = FinAbGroup::cyclic(4).unwrap();
        let report = verify_presentation(&base, &GroupHom::scalar(&base, 2));
        assert!(!report.pass);
        assert!(!report.m_is_automorphism);
        assert!(!report.kernel_witnesses.is_empty());
    }

    #[test]
    fn case_typing_examples() {
        assert_eq!(basic_case_type(5, 4).unwrap(), BasicCaseType::Standard);
        assert_eq!(basic_case_type(8, 5).unwrap(), BasicCaseType::Twisted);
        assert_eq!(basic_case_type(8, 3).unwrap(), BasicCaseType::Esoteric);
        assert_eq!(
            basic_case_type(12, 5).unwrap(),
            BasicCaseType::Mixed {
                factors: vec![(4, BasicCase::DihedralLike), (3, BasicCase::Standard)]
            }
        );
        assert_eq!(basic_case_type(2, 1).unwrap(), BasicCaseType::Standard);
        assert_eq!(basic_case_type(6, 1).unwrap(), BasicCaseType::DihedralLike);
    }

    #[test]
    fn case_typing_recombines() {
        // recombining a mixed answer reproduces (n, m)
        for n in 1..=64i64 {
            for m in crate::involution::enumerate_cyclic_involutions(n).unwrap() {
                match basic_case_type(n, m).unwrap() {
                    BasicCaseType::Mixed { factors } => {
                        assert_eq!(factors.len(), 2);
                        let parts: Vec<(i64, i64)> = factors
                            .iter()
                            .map(|&(f, case)| {
                                let r = match case {
                                    BasicCase::Standard => f - 1,
                                    BasicCase::DihedralLike => 1,
                                    BasicCase::Twisted => 1 + f / 2,
                                    BasicCase::Esoteric => f / 2 - 1,
                                };
                                (r, f)
                            })
                            .collect();
                        assert_eq!(factors[0].0 * factors[1].0, n);
                        assert_eq!(crate::involution::crt_combine(&parts), m);
                    }
                    BasicCaseType::Standard => assert_eq!((m + 1) % n, 0),
                    BasicCaseType::DihedralLike => assert_eq!((m - 1).rem_euclid(n), 0),
                    BasicCaseType::Twisted => assert_eq!(m, 1 + n / 2),
                    BasicCaseType::Esoteric => assert_eq!(m, n / 2 - 1),
                }
            }
        }
    }

    #[test]
    fn tau_is_normal_exactly_in_the_dihedral_like_case() {
        // conjugates of (0, 1) stay in the coset subgroup {0} x Z/2 exactly
        // when m = 1
        for n in 2..=24i64 {
            for m in crate::involution::enumerate_cyclic_involutions(n).unwrap() {
                let grp = SemidirectGroup::cyclic(n, m).unwrap();
                let tau = grp.element(grp.base().zero(), 1).unwrap();
                let mut normal = true;
                for g in grp.base().elements() {
                    let a = grp.element(g, 0).unwrap();
                    let inv = grp.inverse(&a).unwrap();
                    let conj = grp
                        .multiply(&grp.multiply(&a, &tau).unwrap(), &inv)
                        .unwrap();
                    if !conj.g.is_zero() {
                        normal = false;
                        break;
                    }
                }
                assert_eq!(normal, m == 1 % n, "n={n}, m={m}");
            }
        }
    }

    #[test]
    fn even_subgroup_examples() {
        let grp = SemidirectGroup::cyclic(8, 5).unwrap();
        let even = even_subgroup(&grp).unwrap();
        assert_eq!(even.base(), &FinAbGroup::cyclic(4).unwrap());
        assert_eq!(even.conjugation(), &GroupHom::scalar(even.base(), 1));
        assert_eq!(basic_case_type(4, 1).unwrap(), BasicCaseType::DihedralLike);

        let grp = SemidirectGroup::cyclic(8, 3).unwrap();
        let even = even_subgroup(&grp).unwrap();
        assert_eq!(even.conjugation(), &GroupHom::scalar(even.base(), 3));
        assert_eq!(basic_case_type(4, 3).unwrap(), BasicCaseType::Standard);

        let grp = SemidirectGroup::cyclic(4, 1).unwrap();
        let even = even_subgroup(&grp).unwrap();
        assert_eq!(even.base(), &FinAbGroup::cyclic(2).unwrap());
        assert_eq!(even.order(), 4);

        let odd = SemidirectGroup::cyclic(5, 4).unwrap();
        assert!(matches!(
            even_subgroup(&odd),
            Err(Error::NoEvenSubgroup(_))
        ));
    }
}
