//! Finite abelian groups in invariant-factor normal form, together with
//! elements, homomorphisms, subgroups and torsion computations.
//!
//! A group is stored as the ordered list of its invariant factors
//! d1 | d2 | ... | dr (each >= 2, empty list for the trivial group), so that
//! equality of groups is literal equality of the factor lists. Elements are
//! coordinate vectors reduced modulo the factors; homomorphisms are integer
//! matrices acting on generator coordinates, validated at construction.
//!
//! Operations that enumerate group elements refuse groups of order above
//! [`ENUMERATION_LIMIT`].

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    gcd_i128, hnf_rows, in_lattice, lcm_i128, snf, solve_in_lattice, triangular_det, Mat,
};

/// Hard cap on the order of any group handled by enumeration-backed
/// operations.
pub const ENUMERATION_LIMIT: i128 = 1 << 20;

/// A finite abelian group, kept in invariant-factor normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinAbGroup {
    invariant_factors: Vec<i64>,
}

/// An element of a [`FinAbGroup`], as a coordinate vector with
/// `0 <= coords[i] < d_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    coords: Vec<i64>,
}

impl GroupElement {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn lift(&self) -> Vec<i128> {
        self.coords.iter().map(|&c| c as i128).collect()
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FinAbGroup {
    /// Builds a group from invariant factors, validating the divisibility
    /// chain d1 | d2 | ... and that every factor is at least 2. Factors are
    /// capped at 2^31 and the order at 2^62, keeping all later coordinate
    /// arithmetic inside i128 headroom.
    pub fn new(invariant_factors: Vec<i64>) -> Result<Self> {
        for w in invariant_factors.windows(2) {
            if w[1] % w[0] != 0 {
                return Err(Error::InvalidGroup(format!(
                    "invariant factors must form a divisibility chain: {} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        if let Some(&d) = invariant_factors.iter().find(|&&d| !(2..=1 << 31).contains(&d)) {
            return Err(Error::InvalidGroup(format!(
                "invariant factor {d} is outside 2..=2^31"
            )));
        }
        let mut order = 1i128;
        for &d in &invariant_factors {
            order = order
                .checked_mul(d as i128)
                .filter(|&o| o <= 1 << 62)
                .ok_or_else(|| {
                    Error::SizeLimit("group order exceeds 2^62".into())
                })?;
        }
        Ok(Self { invariant_factors })
    }

    pub fn trivial() -> Self {
        Self {
            invariant_factors: Vec::new(),
        }
    }

    /// The cyclic group Z/n (trivial for n = 1).
    pub fn cyclic(n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidGroup(format!("cyclic order {n} is below 1")));
        }
        if n == 1 {
            Ok(Self::trivial())
        } else {
            Self::new(vec![n])
        }
    }

    /// Direct product of cyclic groups of the given orders, renormalized
    /// into invariant-factor form via the Smith normal form of the diagonal
    /// relation matrix.
    pub fn product_of_cyclic(orders: &[i64]) -> Result<Self> {
        if let Some(&n) = orders.iter().find(|&&n| n < 1) {
            return Err(Error::InvalidGroup(format!("cyclic order {n} is below 1")));
        }
        let r = orders.len();
        let relations: Vec<Vec<i64>> = (0..r)
            .map(|i| (0..r).map(|j| if i == j { orders[i] } else { 0 }).collect())
            .collect();
        Self::from_relation_matrix(r, &relations)
    }

    /// Normalizes a generator/relation presentation: `rank` generators with
    /// the given relation rows. The quotient must be finite.
    pub fn from_relation_matrix(rank: usize, relations: &[Vec<i64>]) -> Result<Self> {
        for row in relations {
            if row.len() != rank {
                return Err(Error::InvalidGroup(format!(
                    "relation row of length {} for rank {rank}",
                    row.len()
                )));
            }
        }
        let mat: Mat = relations
            .iter()
            .map(|r| r.iter().map(|&x| x as i128).collect())
            .collect();
        let decomposition = snf(&mat);
        let mut diag = decomposition.diag;
        diag.resize(rank, 0);
        if diag.contains(&0) {
            return Err(Error::InvalidGroup(
                "relation matrix presents an infinite group".into(),
            ));
        }
        let factors: Vec<i64> = diag
            .iter()
            .take(rank)
            .filter(|&&d| d > 1)
            .map(|&d| d as i64)
            .collect();
        Self::new(factors)
    }

    pub fn invariant_factors(&self) -> &[i64] {
        &self.invariant_factors
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn order(&self) -> i128 {
        self.invariant_factors.iter().map(|&d| d as i128).product()
    }

    /// Least common multiple of element orders (1 for the trivial group).
    pub fn exponent(&self) -> i64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![0; self.rank()],
        }
    }

    /// Reduces an arbitrary integer coordinate vector into the group.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::DomainMismatch(format!(
                "coordinate vector of length {} in a group of rank {}",
                coords.len(),
                self.rank()
            )));
        }
        Ok(self.reduce_i128(&coords.iter().map(|&c| c as i128).collect::<Vec<_>>()))
    }

    fn reduce_i128(&self, coords: &[i128]) -> GroupElement {
        GroupElement {
            coords: coords
                .iter()
                .zip(&self.invariant_factors)
                .map(|(&c, &d)| c.rem_euclid(d as i128) as i64)
                .collect(),
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.coords.len() == self.rank()
            && x.coords
                .iter()
                .zip(&self.invariant_factors)
                .all(|(&c, &d)| 0 <= c && c < d)
    }

    fn check_member(&self, x: &GroupElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::DomainMismatch(format!(
                "element {x} does not live in {self}"
            )))
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        debug_assert!(self.contains(a) && self.contains(b));
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.invariant_factors)
                .map(|((&x, &y), &d)| (x + y).rem_euclid(d))
                .collect(),
        }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&self.invariant_factors)
                .map(|(&x, &d)| (-x).rem_euclid(d))
                .collect(),
        }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn scalar_mul(&self, k: i64, a: &GroupElement) -> GroupElement {
        self.reduce_i128(
            &a.coords
                .iter()
                .map(|&x| x as i128 * k as i128)
                .collect::<Vec<_>>(),
        )
    }

    /// Refuses enumeration for groups of order above [`ENUMERATION_LIMIT`].
    pub fn ensure_enumerable(&self) -> Result<()> {
        let order = self.order();
        if order > ENUMERATION_LIMIT {
            Err(Error::SizeLimit(format!(
                "group of order {order} exceeds the enumeration limit {ENUMERATION_LIMIT}"
            )))
        } else {
            Ok(())
        }
    }

    /// All elements in lexicographic coordinate order. Check
    /// [`ensure_enumerable`](Self::ensure_enumerable) first.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let rank = self.rank();
        let mut current = vec![0i64; rank];
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = GroupElement {
                coords: current.clone(),
            };
            // mixed-radix increment, most significant coordinate first
            let mut i = rank;
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                current[i] += 1;
                if current[i] < self.invariant_factors[i] {
                    break;
                }
                current[i] = 0;
            }
            Some(out)
        })
    }

    /// Least k >= 1 with k*x = 0; equals lcm over coordinates of
    /// d_i / gcd(d_i, x_i).
    pub fn element_order(&self, x: &GroupElement) -> Result<i64> {
        self.check_member(x)?;
        let mut order = 1i128;
        for (&c, &d) in x.coords.iter().zip(&self.invariant_factors) {
            order = lcm_i128(order, d as i128 / gcd_i128(d as i128, c as i128));
        }
        Ok(order as i64)
    }

    /// All x with n*x = 0, in lexicographic order. The count is the product
    /// of gcd(d_i, n) over the coordinates.
    pub fn n_torsion(&self, n: i64) -> Result<Vec<GroupElement>> {
        if n < 1 {
            return Err(Error::Input(format!("torsion bound {n} is below 1")));
        }
        let mut per_coord: Vec<Vec<i64>> = Vec::with_capacity(self.rank());
        let mut count = 1i128;
        for &d in &self.invariant_factors {
            let g = gcd_i128(d as i128, n as i128) as i64;
            let step = d / g;
            per_coord.push((0..g).map(|j| j * step).collect());
            count *= g as i128;
            if count > ENUMERATION_LIMIT {
                return Err(Error::SizeLimit(format!(
                    "n-torsion of size {count}+ exceeds the enumeration limit"
                )));
            }
        }
        let mut out = Vec::with_capacity(count as usize);
        let mut idx = vec![0usize; self.rank()];
        loop {
            out.push(GroupElement {
                coords: idx.iter().zip(&per_coord).map(|(&i, v)| v[i]).collect(),
            });
            let mut i = self.rank();
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

    /// Primary decomposition: for each prime p dividing the order, the list
    /// of prime-power cyclic orders of the p-part, ascending.
    pub fn primary_decompose(&self) -> BTreeMap<i64, Vec<i64>> {
        let mut out: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
        for &d in &self.invariant_factors {
            for (p, e) in factorize(d) {
                out.entry(p).or_default().push(p.pow(e));
            }
        }
        for powers in out.values_mut() {
            powers.sort_unstable();
        }
        out
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        for (i, d) in self.invariant_factors.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "Z/{d}")?;
        }
        Ok(())
    }
}

/// Trial-division factorization, ascending primes.
pub fn factorize(mut n: i64) -> Vec<(i64, u32)> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut p = 2i64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0u32;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// A homomorphism between finite abelian groups, given by an integer matrix
/// on generator coordinates (target rank x source rank). Well-formedness,
/// i.e. that each column is killed by the order of its source generator,
/// is validated at construction, and entries are reduced modulo the target
/// factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupHom {
    source: FinAbGroup,
    target: FinAbGroup,
    matrix: Vec<Vec<i64>>,
}

impl GroupHom {
    pub fn new(source: FinAbGroup, target: FinAbGroup, matrix: Vec<Vec<i64>>) -> Result<Self> {
        let (tr, sr) = (target.rank(), source.rank());
        if matrix.len() != tr || matrix.iter().any(|row| row.len() != sr) {
            return Err(Error::InvalidGroup(format!(
                "matrix of shape {}x{} for a homomorphism needing {tr}x{sr}",
                matrix.len(),
                matrix.first().map_or(0, |r| r.len()),
            )));
        }
        let reduced: Vec<Vec<i64>> = matrix
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let d = target.invariant_factors[i];
                row.iter().map(|&x| x.rem_euclid(d)).collect()
            })
            .collect();
        for (j, &dj) in source.invariant_factors.iter().enumerate() {
            for (i, &di) in target.invariant_factors.iter().enumerate() {
                let di = di as i128;
                if (reduced[i][j] as i128 * dj as i128) % di != 0 {
                    return Err(Error::InvalidGroup(format!(
                        "column {j} scaled by the source order {dj} is nonzero in the target"
                    )));
                }
            }
        }
        Ok(Self {
            source,
            target,
            matrix: reduced,
        })
    }

    pub fn identity(g: &FinAbGroup) -> Self {
        let r = g.rank();
        let matrix = (0..r)
            .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
            .collect();
        Self::new(g.clone(), g.clone(), matrix).expect("identity is well formed")
    }

    /// The map x -> k*x on g.
    pub fn scalar(g: &FinAbGroup, k: i64) -> Self {
        let r = g.rank();
        let matrix = (0..r)
            .map(|i| (0..r).map(|j| if i == j { k } else { 0 }).collect())
            .collect();
        Self::new(g.clone(), g.clone(), matrix).expect("scalar maps are well formed")
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement> {
        self.source.check_member(x)?;
        let coords: Vec<i128> = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&x.coords)
                    .map(|(&a, &c)| a as i128 * c as i128)
                    .sum()
            })
            .collect();
        Ok(self.target.reduce_i128(&coords))
    }

    /// other after self (self's target must be other's source).
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.target != other.source {
            return Err(Error::DomainMismatch(
                "composition of homomorphisms with mismatched middle group".into(),
            ));
        }
        let sr = self.source.rank();
        let tr = other.target.rank();
        let mut matrix = vec![vec![0i64; sr]; tr];
        for (i, row) in matrix.iter_mut().enumerate() {
            let di = other.target.invariant_factors[i] as i128;
            for (j, entry) in row.iter_mut().enumerate() {
                let mut acc = 0i128;
                for k in 0..self.target.rank() {
                    acc += other.matrix[i][k] as i128 * self.matrix[k][j] as i128;
                }
                *entry = acc.rem_euclid(di) as i64;
            }
        }
        GroupHom::new(self.source.clone(), other.target.clone(), matrix)
    }

    pub fn is_identity(&self) -> bool {
        self.is_endomorphism() && *self == GroupHom::identity(&self.source)
    }

    /// Whether the map squares to the identity.
    pub fn is_involutive(&self) -> bool {
        self.is_endomorphism()
            && self
                .then(self)
                .map(|sq| sq.is_identity())
                .unwrap_or(false)
    }

    /// Pointwise sum of two homomorphisms with equal source and target.
    pub fn pointwise_add(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::DomainMismatch(
                "sum of homomorphisms with different domains".into(),
            ));
        }
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(r1, r2)| r1.iter().zip(r2).map(|(&a, &b)| a + b).collect())
            .collect();
        GroupHom::new(self.source.clone(), self.target.clone(), matrix)
    }

    /// Kernel and image as canonical subgroups. The kernel is found by
    /// enumerating the source, so the source order is capped.
    pub fn kernel_image(&self) -> Result<(Subgroup, Subgroup)> {
        self.source.ensure_enumerable()?;
        let mut kernel_gens = Vec::new();
        for x in self.source.elements() {
            if self.apply(&x)?.is_zero() {
                kernel_gens.push(x);
            }
        }
        let kernel = Subgroup::from_generators(&self.source, &kernel_gens)?;
        let image_gens: Vec<GroupElement> = (0..self.source.rank())
            .map(|j| {
                self.target.reduce_i128(
                    &self
                        .matrix
                        .iter()
                        .map(|row| row[j] as i128)
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        let image = Subgroup::from_generators(&self.target, &image_gens)?;
        Ok((kernel, image))
    }
}

impl Serialize for GroupHom {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("GroupHom", 1)?;
        s.serialize_field("matrix", &self.matrix)?;
        s.end()
    }
}

/// A subgroup of a finite abelian group, stored as the Hermite normal form
/// of the lattice spanned by its generators together with the relation
/// lattice of the ambient group. The HNF basis is canonical, so equality of
/// subgroups is decidable by comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    ambient: FinAbGroup,
    basis: Mat,
}

impl Subgroup {
    pub fn from_generators(ambient: &FinAbGroup, gens: &[GroupElement]) -> Result<Self> {
        let r = ambient.rank();
        let mut rows: Vec<Vec<i128>> = Vec::with_capacity(gens.len() + r);
        for g in gens {
            ambient.check_member(g)?;
            rows.push(g.lift());
        }
        for (i, &d) in ambient.invariant_factors.iter().enumerate() {
            let mut row = vec![0i128; r];
            row[i] = d as i128;
            rows.push(row);
        }
        Ok(Self {
            ambient: ambient.clone(),
            basis: hnf_rows(&rows, r),
        })
    }

    pub fn trivial(ambient: &FinAbGroup) -> Self {
        Self::from_generators(ambient, &[]).expect("trivial subgroup")
    }

    pub fn full(ambient: &FinAbGroup) -> Self {
        let gens: Vec<GroupElement> = (0..ambient.rank())
            .map(|i| {
                let mut coords = vec![0i64; ambient.rank()];
                coords[i] = 1;
                GroupElement { coords }
            })
            .collect();
        Self::from_generators(ambient, &gens).expect("full subgroup")
    }

    pub fn ambient(&self) -> &FinAbGroup {
        &self.ambient
    }

    pub fn order(&self) -> i128 {
        if self.ambient.rank() == 0 {
            return 1;
        }
        self.ambient.order() / triangular_det(&self.basis)
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.ambient.contains(x) && in_lattice(&self.basis, &x.lift())
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.ambient == other.ambient
            && self
                .basis
                .iter()
                .all(|row| in_lattice(&other.basis, row))
    }

    /// Canonical generating set: the nonzero reductions of the HNF basis
    /// rows, sorted.
    pub fn generators(&self) -> Vec<GroupElement> {
        let mut gens: Vec<GroupElement> = self
            .basis
            .iter()
            .map(|row| self.ambient.reduce_i128(row))
            .filter(|g| !g.is_zero())
            .collect();
        gens.sort();
        gens.dedup();
        gens
    }

    /// Subgroup generated by the union.
    pub fn sum(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.ambient != other.ambient {
            return Err(Error::DomainMismatch(
                "sum of subgroups of different groups".into(),
            ));
        }
        let rows: Vec<Vec<i128>> = self
            .basis
            .iter()
            .chain(other.basis.iter())
            .cloned()
            .collect();
        Ok(Subgroup {
            ambient: self.ambient.clone(),
            basis: hnf_rows(&rows, self.ambient.rank()),
        })
    }

    /// Every element, by closure from the generators. Capped.
    pub fn elements(&self) -> Result<Vec<GroupElement>> {
        let order = self.order();
        if order > ENUMERATION_LIMIT {
            return Err(Error::SizeLimit(format!(
                "subgroup of order {order} exceeds the enumeration limit"
            )));
        }
        let gens = self.generators();
        let mut seen: HashSet<GroupElement> = HashSet::with_capacity(order as usize);
        let zero = self.ambient.zero();
        seen.insert(zero.clone());
        let mut frontier = vec![zero];
        while let Some(e) = frontier.pop() {
            for g in &gens {
                let next = self.ambient.add(&e, g);
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        let mut out: Vec<GroupElement> = seen.into_iter().collect();
        out.sort();
        debug_assert_eq!(out.len() as i128, order);
        Ok(out)
    }

    /// Intersection, computed by filtering the smaller side. Capped.
    pub fn intersection(&self, other: &Subgroup) -> Result<Subgroup> {
        if self.ambient != other.ambient {
            return Err(Error::DomainMismatch(
                "intersection of subgroups of different groups".into(),
            ));
        }
        let (small, big) = if self.order() <= other.order() {
            (self, other)
        } else {
            (other, self)
        };
        let members: Vec<GroupElement> = small
            .elements()?
            .into_iter()
            .filter(|x| big.contains(x))
            .collect();
        Subgroup::from_generators(&self.ambient, &members)
    }

    /// The subgroup of elements killed by n.
    pub fn n_torsion(&self, n: i64) -> Result<Subgroup> {
        let members: Vec<GroupElement> = self
            .elements()?
            .into_iter()
            .filter(|x| self.ambient.scalar_mul(n, x).is_zero())
            .collect();
        Subgroup::from_generators(&self.ambient, &members)
    }

    /// Abstract isomorphism type of the subgroup.
    pub fn isomorphism_type(&self) -> FinAbGroup {
        let r = self.ambient.rank();
        if r == 0 {
            return FinAbGroup::trivial();
        }
        // Express the ambient relation lattice in the coordinates of this
        // subgroup's basis; the Smith form of that matrix presents the
        // subgroup.
        let mut rows: Vec<Vec<i128>> = Vec::with_capacity(r);
        for (i, &d) in self.ambient.invariant_factors.iter().enumerate() {
            let mut rel = vec![0i128; r];
            rel[i] = d as i128;
            let coeffs = solve_in_lattice(&self.basis, &rel)
                .expect("relation lattice lies inside every subgroup lattice");
            rows.push(coeffs);
        }
        let diag = snf(&rows).diag;
        let factors: Vec<i64> = diag.iter().filter(|&&d| d > 1).map(|&d| d as i64).collect();
        FinAbGroup::new(factors).expect("smith form yields a divisibility chain")
    }
}

impl Serialize for Subgroup {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.generators())
    }
}

/// A finite quotient G/W with its projection map and chosen preimages of the
/// quotient generators.
pub struct Quotient {
    pub group: FinAbGroup,
    proj_rows: Mat,
    moduli: Vec<i128>,
    preimages: Vec<GroupElement>,
}

impl Quotient {
    pub fn project(&self, g: &FinAbGroup, x: &GroupElement) -> GroupElement {
        debug_assert!(g.contains(x));
        let lifted = x.lift();
        let coords: Vec<i64> = self
            .proj_rows
            .iter()
            .zip(&self.moduli)
            .map(|(row, &m)| {
                let v: i128 = row.iter().zip(&lifted).map(|(&a, &b)| a * b).sum();
                v.rem_euclid(m) as i64
            })
            .collect();
        GroupElement { coords }
    }

    /// A fixed preimage of the i-th quotient generator.
    pub fn preimage_of_generator(&self, i: usize) -> &GroupElement {
        &self.preimages[i]
    }
}

/// Quotient of a group by a subgroup, with an explicit projection.
pub fn quotient(g: &FinAbGroup, w: &Subgroup) -> Result<Quotient> {
    if *g != w.ambient {
        return Err(Error::DomainMismatch(
            "quotient by a subgroup of a different group".into(),
        ));
    }
    let r = g.rank();
    // Relations of the quotient are the columns of the subgroup's lattice
    // basis (transposed into column convention for the Smith reduction).
    let cols: Mat = (0..r)
        .map(|i| (0..r).map(|j| w.basis[j][i]).collect())
        .collect();
    let decomposition = snf(&cols);
    let mut proj_rows: Mat = Vec::new();
    let mut moduli: Vec<i128> = Vec::new();
    let mut preimages: Vec<GroupElement> = Vec::new();
    for (i, &d) in decomposition.diag.iter().enumerate() {
        assert!(d > 0, "subgroup lattice has full rank");
        if d > 1 {
            proj_rows.push(decomposition.u[i].clone());
            moduli.push(d);
            let col: Vec<i128> = (0..r).map(|row| decomposition.u_inv[row][i]).collect();
            preimages.push(g.reduce_i128(&col));
        }
    }
    let factors: Vec<i64> = moduli.iter().map(|&d| d as i64).collect();
    Ok(Quotient {
        group: FinAbGroup::new(factors)?,
        proj_rows,
        moduli,
        preimages,
    })
}
