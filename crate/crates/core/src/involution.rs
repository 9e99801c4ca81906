//! Classification and enumeration of involutive automorphisms of finite
//! abelian groups.
//!
//! For a cyclic group Z/n, a residue m with m^2 = 1 mod n splits n as
//! n1 * n2 * 2^k (pairwise coprime, k = 0 or k >= 3) with m congruent to 1
//! mod n1, to -1 mod n2, and to +-1 + 2^(k-1) mod 2^k. Coarsening the 2-adic
//! factor into one of the odd parts leaves a two-factor splitting n = N1 * N2
//! in which m is (1, -1), (1, -1 + N2/2) or (-1, 1 + N2/2).
//!
//! For a general finite abelian group G, an involution M is analyzed through
//! its eigenspaces G+ = Ker(M - 1) and G- = Ker(M + 1): their intersection U
//! coincides with the 2-torsion of either eigenspace, the quotient V of G by
//! W = G+ + G- is an elementary 2-group on which M induces the identity, and
//! the involutions with prescribed exact eigenspaces are parametrized by a
//! subset of Hom(V, U).

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::abelian::{factorize, quotient, FinAbGroup, GroupElement, GroupHom, Subgroup};
use crate::error::{Error, Result};
use crate::matrix::ext_gcd;

/// The two-factor coarsening of a cyclic involution class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoarseSplit {
    /// m is (1 mod n_plus, -1 mod n_minus).
    Split { n_plus: i64, n_minus: i64 },
    /// m is (1 mod n_plus, -1 + n_twisted/2 mod n_twisted), 8 | n_twisted.
    EsotericFactor { n_plus: i64, n_twisted: i64 },
    /// m is (-1 mod n_minus, 1 + n_twisted/2 mod n_twisted), 8 | n_twisted.
    TwistedFactor { n_minus: i64, n_twisted: i64 },
}

impl CoarseSplit {
    /// The pair (N1, N2) of coprime factors.
    pub fn factors(&self) -> (i64, i64) {
        match *self {
            CoarseSplit::Split { n_plus, n_minus } => (n_plus, n_minus),
            CoarseSplit::EsotericFactor { n_plus, n_twisted } => (n_plus, n_twisted),
            CoarseSplit::TwistedFactor { n_minus, n_twisted } => (n_minus, n_twisted),
        }
    }

    /// The residues of m on the two factors.
    pub fn residues(&self) -> (i64, i64) {
        match *self {
            CoarseSplit::Split { n_plus, n_minus } => (1 % n_plus, (n_minus - 1) % n_minus),
            CoarseSplit::EsotericFactor { n_plus, n_twisted } => (1 % n_plus, n_twisted / 2 - 1),
            CoarseSplit::TwistedFactor { n_minus, n_twisted } => {
                ((n_minus - 1) % n_minus, n_twisted / 2 + 1)
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CoarseSplit::Split { n_minus: 1, .. } => "pure_plus",
            CoarseSplit::Split { n_plus: 1, .. } => "pure_minus",
            CoarseSplit::Split { .. } => "split",
            CoarseSplit::EsotericFactor { n_plus: 1, .. } => "esoteric",
            CoarseSplit::EsotericFactor { .. } => "split_esoteric",
            CoarseSplit::TwistedFactor { n_minus: 1, .. } => "twisted",
            CoarseSplit::TwistedFactor { .. } => "split_twisted",
        }
    }
}

impl Serialize for CoarseSplit {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let case = match self {
            CoarseSplit::Split { .. } => 4u8,
            CoarseSplit::EsotericFactor { .. } => 5,
            CoarseSplit::TwistedFactor { .. } => 6,
        };
        let (n1, n2) = self.factors();
        let mut s = serializer.serialize_struct("CoarseSplit", 4)?;
        s.serialize_field("case", &case)?;
        s.serialize_field("n1", &n1)?;
        s.serialize_field("n2", &n2)?;
        s.serialize_field("label", self.label())?;
        s.end()
    }
}

/// Full classification of an involution m on Z/n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CyclicInvolutionClass {
    pub n: i64,
    pub m: i64,
    /// Product of the prime powers on which m acts as +1.
    pub n1: i64,
    /// Product of the prime powers on which m acts as -1.
    pub n2: i64,
    /// 2-adic exponent of the twisted part (0 or >= 3).
    pub k: u32,
    /// Sign s with m = s + 2^(k-1) mod 2^k, when k >= 3.
    pub sign_two_adic: Option<i8>,
    pub coarse: CoarseSplit,
}

/// Chinese remainder combination over pairwise coprime moduli.
pub fn crt_combine(parts: &[(i64, i64)]) -> i64 {
    let mut x = 0i128;
    let mut modulus = 1i128;
    for &(r, m) in parts {
        let m = m as i128;
        let r = (r as i128).rem_euclid(m);
        let (g, inv, _) = ext_gcd(modulus % m, m);
        debug_assert_eq!(g, 1, "moduli must be coprime");
        let t = ((r - x).rem_euclid(m) * inv.rem_euclid(m)).rem_euclid(m);
        x += modulus * t;
        modulus *= m;
        x = x.rem_euclid(modulus);
    }
    x as i64
}

/// All residues m mod n with m^2 = 1, sorted ascending. Brute force,
/// intended for n up to about 10^6.
pub fn enumerate_cyclic_involutions(n: i64) -> Result<Vec<i64>> {
    if n < 1 {
        return Err(Error::Input(format!("modulus {n} is below 1")));
    }
    if n > 1_000_000 {
        return Err(Error::SizeLimit(format!(
            "brute-force involution enumeration is limited to n <= 10^6, got {n}"
        )));
    }
    Ok((0..n)
        .filter(|&m| (m as i128 * m as i128 - 1).rem_euclid(n as i128) == 0)
        .collect())
}

/// Decomposes an involution m on Z/n into its +1 / -1 / 2-adic parts and the
/// coarse two-factor splitting.
pub fn classify_cyclic_involution(n: i64, m: i64) -> Result<CyclicInvolutionClass> {
    if n < 1 {
        return Err(Error::Input(format!("modulus {n} is below 1")));
    }
    // trial-division factorization keeps this a desk-scale operation
    if n > 1_000_000_000_000 {
        return Err(Error::SizeLimit(format!(
            "classification factorizes n; {n} is beyond 10^12"
        )));
    }
    let m = m.rem_euclid(n);
    if (m as i128 * m as i128 - 1).rem_euclid(n as i128) != 0 {
        return Err(Error::NotAnInvolution(format!("{m}^2 is not 1 modulo {n}")));
    }
    let mut n1 = 1i64;
    let mut n2 = 1i64;
    let mut k = 0u32;
    let mut sign_two_adic: Option<i8> = None;
    for (p, e) in factorize(n) {
        let q = p.pow(e);
        let r = m.rem_euclid(q);
        if r == 1 % q {
            n1 *= q;
        } else if r == q - 1 {
            n2 *= q;
        } else if p == 2 && e >= 3 && r == q / 2 + 1 {
            k = e;
            sign_two_adic = Some(1);
        } else if p == 2 && e >= 3 && r == q / 2 - 1 {
            k = e;
            sign_two_adic = Some(-1);
        } else {
            return Err(Error::Internal(format!(
                "square root {r} of 1 modulo {q} matches no branch"
            )));
        }
    }
    let coarse = match sign_two_adic {
        None => CoarseSplit::Split {
            n_plus: n1,
            n_minus: n2,
        },
        Some(1) => CoarseSplit::TwistedFactor {
            n_minus: n2,
            n_twisted: n1 << k,
        },
        Some(_) => CoarseSplit::EsotericFactor {
            n_plus: n1,
            n_twisted: n2 << k,
        },
    };
    let class = CyclicInvolutionClass {
        n,
        m,
        n1,
        n2,
        k,
        sign_two_adic,
        coarse,
    };
    // recombination is a theorem about the construction; check it
    let fine = class.recombine_fine();
    if fine != m {
        return Err(Error::Internal(format!(
            "fine recombination produced {fine}, expected {m}"
        )));
    }
    let coarse_m = class.recombine_coarse();
    if coarse_m != m {
        return Err(Error::Internal(format!(
            "coarse recombination produced {coarse_m}, expected {m}"
        )));
    }
    Ok(class)
}

impl CyclicInvolutionClass {
    /// Recombines (1 mod n1, -1 mod n2, sign + 2^(k-1) mod 2^k) by the
    /// Chinese remainder theorem.
    pub fn recombine_fine(&self) -> i64 {
        let mut parts = vec![(1 % self.n1, self.n1), ((self.n2 - 1) % self.n2, self.n2)];
        if self.k > 0 {
            let q = 1i64 << self.k;
            let s = i64::from(self.sign_two_adic.unwrap_or(1));
            parts.push(((s + q / 2).rem_euclid(q), q));
        }
        crt_combine(&parts)
    }

    /// Recombines the coarse two-factor description.
    pub fn recombine_coarse(&self) -> i64 {
        let (f1, f2) = self.coarse.factors();
        let (r1, r2) = self.coarse.residues();
        crt_combine(&[(r1, f1), (r2, f2)])
    }
}

/// The eigenspace data attached to an involution M on a finite abelian
/// group: the fixed and negated subgroups, their intersection U, their sum
/// W, the elementary 2-group V = G/W, and the displacement F = M - 1.
#[derive(Debug, Clone, Serialize)]
pub struct InvolutionAnalysis {
    pub group: FinAbGroup,
    pub m: GroupHom,
    pub g_plus: Subgroup,
    pub g_minus: Subgroup,
    pub u: Subgroup,
    pub w: Subgroup,
    pub v: FinAbGroup,
    pub f: GroupHom,
    /// Number of involutions whose (+1)-eigenspace contains g_plus and whose
    /// (-1)-eigenspace contains g_minus: the size of Hom(V, U).
    pub compatible_count: i128,
}

fn require_involution(g: &FinAbGroup, m: &GroupHom) -> Result<()> {
    if m.source() != g || m.target() != g {
        return Err(Error::DomainMismatch(
            "the map is not an endomorphism of the given group".into(),
        ));
    }
    if !m.is_involutive() {
        return Err(Error::NotAnInvolution(
            "the map does not square to the identity".into(),
        ));
    }
    Ok(())
}

/// Eigenspace analysis of an involution, with every structural claim
/// verified by enumeration.
pub fn analyze_involution(g: &FinAbGroup, m: &GroupHom) -> Result<InvolutionAnalysis> {
    require_involution(g, m)?;
    g.ensure_enumerable()?;

    let mut plus_elems = Vec::new();
    let mut minus_elems = Vec::new();
    for x in g.elements() {
        let mx = m.apply(&x)?;
        if mx == x {
            plus_elems.push(x.clone());
        }
        if mx == g.neg(&x) {
            minus_elems.push(x);
        }
    }
    let g_plus = Subgroup::from_generators(g, &plus_elems)?;
    let g_minus = Subgroup::from_generators(g, &minus_elems)?;
    let u = g_plus.intersection(&g_minus)?;
    let w = g_plus.sum(&g_minus)?;

    if u != g_plus.n_torsion(2)? || u != g_minus.n_torsion(2)? {
        return Err(Error::Internal(
            "the eigenspace intersection differs from the 2-torsion of an eigenspace".into(),
        ));
    }
    if w.order() * u.order() != g_plus.order() * g_minus.order() {
        return Err(Error::Internal("|W| |U| differs from |G+| |G-|".into()));
    }

    let q = quotient(g, &w)?;
    let v = q.group.clone();
    if v.invariant_factors().iter().any(|&d| d != 2) {
        return Err(Error::Internal(
            "the quotient by W is not an elementary 2-group".into(),
        ));
    }
    for i in 0..v.rank() {
        let pre = q.preimage_of_generator(i);
        let image = q.project(g, &m.apply(pre)?);
        let mut expected = vec![0i64; v.rank()];
        expected[i] = 1;
        if image.coords() != expected {
            return Err(Error::Internal(
                "the induced action on G/W is not the identity".into(),
            ));
        }
    }

    let f = m.pointwise_add(&GroupHom::scalar(g, -1))?;
    for x in g_plus.generators() {
        if !f.apply(&x)?.is_zero() {
            return Err(Error::Internal(
                "the displacement does not vanish on the fixed subgroup".into(),
            ));
        }
    }
    for x in g_minus.generators() {
        if f.apply(&x)? != g.scalar_mul(-2, &x) {
            return Err(Error::Internal(
                "the displacement is not -2x on the negated subgroup".into(),
            ));
        }
    }

    let compatible_count = u.order().pow(v.rank() as u32);
    Ok(InvolutionAnalysis {
        group: g.clone(),
        m: m.clone(),
        g_plus,
        g_minus,
        u,
        w,
        v,
        f,
        compatible_count,
    })
}

/// Splits an odd-order group into the direct sum of the two eigenspaces of
/// an involution, via the projections x -> (x + Mx)/2 and x -> (x - Mx)/2
/// (division by 2 meaning multiplication by its inverse modulo the
/// exponent).
pub fn split_odd_primary(g: &FinAbGroup, m: &GroupHom) -> Result<(Subgroup, Subgroup)> {
    if g.order() % 2 == 0 {
        return Err(Error::WrongParity(format!(
            "group of even order {} cannot be split by halving",
            g.order()
        )));
    }
    require_involution(g, m)?;
    let e = g.exponent();
    let inv2 = if e == 1 {
        0
    } else {
        let (gcd, x, _) = ext_gcd(2, e as i128);
        debug_assert_eq!(gcd, 1);
        x.rem_euclid(e as i128) as i64
    };
    let mut plus_gens = Vec::new();
    let mut minus_gens = Vec::new();
    for j in 0..g.rank() {
        let mut coords = vec![0i64; g.rank()];
        coords[j] = 1;
        let ej = g.element(&coords)?;
        let mej = m.apply(&ej)?;
        plus_gens.push(g.scalar_mul(inv2, &g.add(&ej, &mej)));
        minus_gens.push(g.scalar_mul(inv2, &g.sub(&ej, &mej)));
    }
    let g_plus = Subgroup::from_generators(g, &plus_gens)?;
    let g_minus = Subgroup::from_generators(g, &minus_gens)?;
    if g_plus.order() * g_minus.order() != g.order()
        || !g_plus.intersection(&g_minus)?.is_trivial()
    {
        return Err(Error::Internal(
            "halving projections did not produce a direct sum".into(),
        ));
    }
    Ok((g_plus, g_minus))
}

/// All involutions M of `g` whose (+1)-eigenspace is exactly `g_plus` and
/// whose (-1)-eigenspace is exactly `g_minus`.
///
/// The displacement on W = g_plus + g_minus is forced (it sends x+ + x- to
/// -2x-); it is extended to G by lifting coset representatives of V = G/W
/// and correcting each lift into the negated subgroup, and the remaining
/// freedom is exactly a homomorphism V -> U. Candidates whose eigenspaces
/// come out strictly larger than requested are filtered away. The result is
/// sorted by matrix.
pub fn enumerate_compatible_involutions(
    g: &FinAbGroup,
    g_plus: &Subgroup,
    g_minus: &Subgroup,
) -> Result<Vec<GroupHom>> {
    if g_plus.ambient() != g || g_minus.ambient() != g {
        return Err(Error::DomainMismatch(
            "eigenspace data must be subgroups of the given group".into(),
        ));
    }
    g.ensure_enumerable()?;

    let u = g_plus.intersection(g_minus)?;
    if u != g_plus.n_torsion(2)? {
        return Err(Error::IncompatibleEigenspaces {
            condition: "II",
            detail: "the intersection is not the 2-torsion of the (+1)-subgroup".into(),
        });
    }
    if u != g_minus.n_torsion(2)? {
        return Err(Error::IncompatibleEigenspaces {
            condition: "II",
            detail: "the intersection is not the 2-torsion of the (-1)-subgroup".into(),
        });
    }
    let w = g_plus.sum(g_minus)?;
    let q = quotient(g, &w)?;
    if q.group.invariant_factors().iter().any(|&d| d != 2) {
        return Err(Error::IncompatibleEigenspaces {
            condition: "III",
            detail: format!("G/W is {} rather than an elementary 2-group", q.group),
        });
    }

    let s = q.group.rank();
    let u_elems = u.elements()?;
    let plus_elems = g_plus.elements()?;

    let candidates = (u_elems.len() as i128).pow(s as u32);
    if candidates.saturating_mul(g.order()) > (1 << 24) {
        return Err(Error::SizeLimit(format!(
            "{candidates} candidate extensions over a group of order {} is out of desk range",
            g.order()
        )));
    }

    // decompose an element of W into eigenspace parts, first summand in
    // lexicographic order
    let eigen_split = |x: &GroupElement| -> Result<(GroupElement, GroupElement)> {
        for xp in &plus_elems {
            let xm = g.sub(x, xp);
            if g_minus.contains(&xm) {
                return Ok((xp.clone(), xm));
            }
        }
        Err(Error::Internal(format!(
            "{x} lies in W but admits no eigenspace decomposition"
        )))
    };

    // coset representatives and the corrected lifts of their doubles:
    // 2 rep = x+ + x-, so c = -x- satisfies 2c = -2x-, the forced value
    let reps: Vec<GroupElement> = (0..s).map(|i| q.preimage_of_generator(i).clone()).collect();
    let mut base_correction = Vec::with_capacity(s);
    for rep in &reps {
        let doubled = g.scalar_mul(2, rep);
        let (_, xm) = eigen_split(&doubled)?;
        base_correction.push(g.neg(&xm));
    }

    // value of the displacement on each ambient generator, before the
    // Hom(V, U) twist
    let rank = g.rank();
    let mut gen_base = Vec::with_capacity(rank);
    let mut gen_eps = Vec::with_capacity(rank);
    for j in 0..rank {
        let mut coords = vec![0i64; rank];
        coords[j] = 1;
        let ej = g.element(&coords)?;
        let eps = q.project(g, &ej);
        let mut wj = ej.clone();
        for (i, rep) in reps.iter().enumerate() {
            if eps.coords()[i] != 0 {
                wj = g.sub(&wj, rep);
            }
        }
        if !w.contains(&wj) {
            return Err(Error::Internal(
                "generator minus its coset representatives escapes W".into(),
            ));
        }
        let (_, xm) = eigen_split(&wj)?;
        let mut base = g.scalar_mul(-2, &xm);
        for (i, c) in base_correction.iter().enumerate() {
            if eps.coords()[i] != 0 {
                base = g.add(&base, c);
            }
        }
        gen_base.push(base);
        gen_eps.push(eps);
    }

    let mut out = Vec::new();
    let mut pick = vec![0usize; s];
    loop {
        // assemble M = 1 + F for this choice of Hom(V, U)
        let mut matrix = vec![vec![0i64; rank]; rank];
        for j in 0..rank {
            let mut fx = gen_base[j].clone();
            for (i, &choice) in pick.iter().enumerate() {
                if gen_eps[j].coords()[i] != 0 {
                    fx = g.add(&fx, &u_elems[choice]);
                }
            }
            let mut coords = vec![0i64; rank];
            coords[j] = 1;
            let mj = g.add(&g.element(&coords)?, &fx);
            for (i, row) in matrix.iter_mut().enumerate() {
                row[j] = mj.coords()[i];
            }
        }
        let m = GroupHom::new(g.clone(), g.clone(), matrix)
            .map_err(|e| Error::Internal(format!("constructed extension is not a map: {e}")))?;
        if !m.is_involutive() {
            return Err(Error::Internal(
                "constructed extension does not square to the identity".into(),
            ));
        }
        let mut fixed = Vec::new();
        let mut negated = Vec::new();
        for x in g.elements() {
            let mx = m.apply(&x)?;
            if mx == x {
                fixed.push(x.clone());
            }
            if mx == g.neg(&x) {
                negated.push(x);
            }
        }
        if Subgroup::from_generators(g, &fixed)? == *g_plus
            && Subgroup::from_generators(g, &negated)? == *g_minus
        {
            out.push(m);
        }

        // advance the mixed-radix counter over Hom(V, U)
        let mut i = s;
        loop {
            if i == 0 {
                out.sort_by(|a, b| a.matrix().cmp(b.matrix()));
                out.dedup();
                return Ok(out);
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < u_elems.len() {
                break;
            }
            pick[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_cyclic_involutions(2).unwrap(), vec![1]);
        assert_eq!(enumerate_cyclic_involutions(8).unwrap(), vec![1, 3, 5, 7]);
        assert_eq!(enumerate_cyclic_involutions(12).unwrap(), vec![1, 5, 7, 11]);
        assert_eq!(enumerate_cyclic_involutions(1).unwrap(), vec![0]);
    }

    #[test]
    fn classify_examples() {
        let c = classify_cyclic_involution(12, 5).unwrap();
        assert_eq!((c.n1, c.n2, c.k), (4, 3, 0));
        assert_eq!(
            c.coarse,
            CoarseSplit::Split {
                n_plus: 4,
                n_minus: 3
            }
        );
        assert_eq!(c.coarse.label(), "split");

        let c = classify_cyclic_involution(8, 3).unwrap();
        assert_eq!((c.n1, c.n2, c.k), (1, 1, 3));
        assert_eq!(c.sign_two_adic, Some(-1));
        assert_eq!(
            c.coarse,
            CoarseSplit::EsotericFactor {
                n_plus: 1,
                n_twisted: 8
            }
        );
        assert_eq!(c.coarse.label(), "esoteric");

        for n in [1, 2, 7, 8, 24] {
            let c = classify_cyclic_involution(n, 1).unwrap();
            assert_eq!((c.n1, c.n2, c.k), (n, 1, 0));
            assert_eq!(c.coarse.label(), "pure_plus");
        }

        let c = classify_cyclic_involution(15, 4).unwrap();
        assert_eq!((c.n1, c.n2, c.k), (3, 5, 0));

        let c = classify_cyclic_involution(8, 5).unwrap();
        assert_eq!(c.sign_two_adic, Some(1));
        assert_eq!(c.coarse.label(), "twisted");
    }

    #[test]
    fn classify_rejects_non_involutions() {
        assert!(matches!(
            classify_cyclic_involution(12, 2),
            Err(Error::NotAnInvolution(_))
        ));
    }

    #[test]
    fn classification_recombines_for_small_moduli() {
        for n in 1..=64 {
            for m in enumerate_cyclic_involutions(n).unwrap() {
                let c = classify_cyclic_involution(n, m).unwrap();
                assert_eq!(c.recombine_fine(), m, "fine recombination at n={n}, m={m}");
                assert_eq!(c.recombine_coarse(), m, "coarse recombination");
            }
        }
    }

    fn hom(g: &FinAbGroup, rows: &[&[i64]]) -> GroupHom {
        GroupHom::new(
            g.clone(),
            g.clone(),
            rows.iter().map(|r| r.to_vec()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn analyze_identity_on_z4() {
        let g = FinAbGroup::cyclic(4).unwrap();
        let a = analyze_involution(&g, &GroupHom::identity(&g)).unwrap();
        assert_eq!(a.g_plus, Subgroup::full(&g));
        assert_eq!(a.g_minus.order(), 2);
        assert!(a.g_minus.contains(&g.element(&[2]).unwrap()));
        assert_eq!(a.u.order(), 2);
        assert_eq!(a.w, Subgroup::full(&g));
        assert!(a.v.is_trivial());
        assert_eq!(a.compatible_count, 1);
    }

    #[test]
    fn analyze_swap_on_z4_squared() {
        let g = FinAbGroup::new(vec![4, 4]).unwrap();
        let swap = hom(&g, &[&[0, 1], &[1, 0]]);
        let a = analyze_involution(&g, &swap).unwrap();
        let diag = Subgroup::from_generators(&g, &[g.element(&[1, 1]).unwrap()]).unwrap();
        let anti = Subgroup::from_generators(&g, &[g.element(&[1, 3]).unwrap()]).unwrap();
        assert_eq!(a.g_plus, diag);
        assert_eq!(a.g_minus, anti);
        assert_eq!(a.g_plus.isomorphism_type(), FinAbGroup::cyclic(4).unwrap());
        assert_eq!(a.u.order(), 2);
        assert!(a.u.contains(&g.element(&[2, 2]).unwrap()));
        assert_eq!(a.w.order(), 8);
        assert_eq!(a.v, FinAbGroup::cyclic(2).unwrap());
    }

    #[test]
    fn analyze_negation_on_z3() {
        let g = FinAbGroup::cyclic(3).unwrap();
        let a = analyze_involution(&g, &GroupHom::scalar(&g, -1)).unwrap();
        assert!(a.g_plus.is_trivial());
        assert_eq!(a.g_minus, Subgroup::full(&g));
        assert!(a.u.is_trivial());
        assert!(a.v.is_trivial());
        assert_eq!(a.compatible_count, 1);
    }

    #[test]
    fn analyze_rejects_non_involutions() {
        let g = FinAbGroup::cyclic(4).unwrap();
        assert!(matches!(
            analyze_involution(&g, &GroupHom::scalar(&g, 2)),
            Err(Error::NotAnInvolution(_))
        ));
    }

    #[test]
    fn split_odd_examples() {
        let z9 = FinAbGroup::cyclic(9).unwrap();
        let (p, m) = split_odd_primary(&z9, &GroupHom::identity(&z9)).unwrap();
        assert_eq!(p, Subgroup::full(&z9));
        assert!(m.is_trivial());

        let g = FinAbGroup::new(vec![3, 3]).unwrap();
        let swap = hom(&g, &[&[0, 1], &[1, 0]]);
        let (p, m) = split_odd_primary(&g, &swap).unwrap();
        assert_eq!(
            p,
            Subgroup::from_generators(&g, &[g.element(&[1, 1]).unwrap()]).unwrap()
        );
        assert_eq!(
            m,
            Subgroup::from_generators(&g, &[g.element(&[1, 2]).unwrap()]).unwrap()
        );

        let z5 = FinAbGroup::cyclic(5).unwrap();
        let (p, m) = split_odd_primary(&z5, &GroupHom::scalar(&z5, -1)).unwrap();
        assert!(p.is_trivial());
        assert_eq!(m, Subgroup::full(&z5));
    }

    #[test]
    fn split_gives_a_direct_sum_for_small_odd_groups() {
        // negation, identity and a mixing map on each group
        for factors in [vec![9], vec![3, 3], vec![15], vec![25], vec![3, 9]] {
            let g = FinAbGroup::new(factors).unwrap();
            let mut maps = vec![GroupHom::identity(&g), GroupHom::scalar(&g, -1)];
            if g.rank() == 2 && g.invariant_factors()[0] == g.invariant_factors()[1] {
                maps.push(hom(&g, &[&[0, 1], &[1, 0]]));
            }
            for m in maps {
                let (p, q) = split_odd_primary(&g, &m).unwrap();
                assert_eq!(p.order() * q.order(), g.order());
                assert!(p.intersection(&q).unwrap().is_trivial());
                // the parts really are the eigenspaces
                for x in p.generators() {
                    assert_eq!(m.apply(&x).unwrap(), x);
                }
                for x in q.generators() {
                    assert_eq!(m.apply(&x).unwrap(), g.neg(&x));
                }
            }
        }
    }

    #[test]
    fn split_rejects_even_order() {
        let g = FinAbGroup::cyclic(6).unwrap();
        assert!(matches!(
            split_odd_primary(&g, &GroupHom::identity(&g)),
            Err(Error::WrongParity(_))
        ));
    }

    #[test]
    fn compatible_involutions_on_klein_group() {
        let g = FinAbGroup::new(vec![2, 2]).unwrap();
        let line = Subgroup::from_generators(&g, &[g.element(&[1, 0]).unwrap()]).unwrap();
        let ms = enumerate_compatible_involutions(&g, &line, &line).unwrap();
        assert_eq!(ms.len(), 1);
        let m = &ms[0];
        assert_eq!(
            m.apply(&g.element(&[1, 0]).unwrap()).unwrap(),
            g.element(&[1, 0]).unwrap()
        );
        assert_eq!(
            m.apply(&g.element(&[0, 1]).unwrap()).unwrap(),
            g.element(&[1, 1]).unwrap()
        );
    }

    #[test]
    fn compatible_involutions_on_z4() {
        let g = FinAbGroup::cyclic(4).unwrap();
        let full = Subgroup::full(&g);
        let half = Subgroup::from_generators(&g, &[g.element(&[2]).unwrap()]).unwrap();
        let ms = enumerate_compatible_involutions(&g, &full, &half).unwrap();
        assert_eq!(ms.len(), 1);
        assert!(ms[0].is_identity());
    }

    #[test]
    fn compatible_involutions_on_z3() {
        let g = FinAbGroup::cyclic(3).unwrap();
        let ms =
            enumerate_compatible_involutions(&g, &Subgroup::trivial(&g), &Subgroup::full(&g))
                .unwrap();
        assert_eq!(ms.len(), 1);
        assert_eq!(ms[0], GroupHom::scalar(&g, -1));
    }

    #[test]
    fn compatible_involutions_rejects_bad_data() {
        let g = FinAbGroup::new(vec![2, 2]).unwrap();
        let a = Subgroup::from_generators(&g, &[g.element(&[1, 0]).unwrap()]).unwrap();
        let b = Subgroup::from_generators(&g, &[g.element(&[0, 1]).unwrap()]).unwrap();
        assert!(matches!(
            enumerate_compatible_involutions(&g, &a, &b),
            Err(Error::IncompatibleEigenspaces {
                condition: "II",
                ..
            })
        ));
    }
}
