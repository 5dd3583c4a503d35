//! Finite pinned actions on root data and what they induce: coinvariant
//! lattices, orbits of simple roots, and the averaging map to invariant
//! rational cocharacters.

use std::collections::{BTreeMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::abelian::{quotient_group, FgAbelianGroup, IntMatrix, QMatrix, QuotientElement, QuotientPresentation};
use crate::error::{Error, Result};
use crate::lattice::{self, QVector, Vector};
use crate::rootdatum::BasedRootDatum;

const MAX_GROUP_ORDER: usize = 10_000;

/// A pinned automorphism: a unimodular map of the cocharacter lattice that
/// permutes the simple coroots, with the contragredient permuting the simple
/// roots the same way.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagramAutomorphism {
    pub lattice_map: IntMatrix,
    pub root_permutation: Vec<usize>,
    pub order: usize,
}

impl DiagramAutomorphism {
    pub fn identity(rank: usize, semisimple_rank: usize) -> Self {
        Self {
            lattice_map: IntMatrix::identity(rank),
            root_permutation: (0..semisimple_rank).collect(),
            order: 1,
        }
    }

    /// Computes the order; fails if the map is not unimodular or the order
    /// exceeds the group bound.
    pub fn new(lattice_map: IntMatrix, root_permutation: Vec<usize>) -> Result<Self> {
        if !lattice_map.is_unimodular() {
            return Err(Error::InvalidAutomorphism("lattice map is not unimodular".into()));
        }
        let n = lattice_map.rows();
        let mut power = lattice_map.clone();
        let mut order = 1;
        while !power.is_identity() {
            power = power.mul(&lattice_map)?;
            order += 1;
            if order > MAX_GROUP_ORDER {
                return Err(Error::InvalidAutomorphism(format!(
                    "lattice map has infinite or excessive order on Z^{n}"
                )));
            }
        }
        Ok(Self {
            lattice_map,
            root_permutation,
            order,
        })
    }

    pub fn compose(&self, other: &DiagramAutomorphism) -> Result<DiagramAutomorphism> {
        let map = self.lattice_map.mul(&other.lattice_map)?;
        let perm = other
            .root_permutation
            .iter()
            .map(|&i| self.root_permutation[i])
            .collect();
        DiagramAutomorphism::new(map, perm)
    }

    /// Action on characters: the inverse transpose.
    pub fn contragredient(&self) -> IntMatrix {
        self.lattice_map
            .inverse_unimodular()
            .expect("unimodular by construction")
            .transpose()
    }

    pub fn act(&self, v: &[BigInt]) -> Result<Vector> {
        self.lattice_map.mul_vec(v)
    }

    /// Checks the pinning conditions against a based datum.
    pub fn validate_against(&self, d: &BasedRootDatum) -> Result<()> {
        let n = d.semisimple_rank();
        if self.lattice_map.rows() != d.rank || self.lattice_map.cols() != d.rank {
            return Err(Error::InvalidAutomorphism(format!(
                "lattice map is {}x{}, datum rank is {}",
                self.lattice_map.rows(),
                self.lattice_map.cols(),
                d.rank
            )));
        }
        if self.root_permutation.len() != n {
            return Err(Error::InvalidAutomorphism(format!(
                "root permutation has length {}, expected {n}",
                self.root_permutation.len()
            )));
        }
        let mut seen = vec![false; n];
        for &p in &self.root_permutation {
            if p >= n || seen[p] {
                return Err(Error::InvalidAutomorphism("root permutation is not a bijection".into()));
            }
            seen[p] = true;
        }
        let dual = self.contragredient();
        for i in 0..n {
            let j = self.root_permutation[i];
            if self.lattice_map.mul_vec(&d.simple_coroots[i])? != d.simple_coroots[j] {
                return Err(Error::InvalidAutomorphism(format!(
                    "does not preserve the pinning: coroot {i} is not sent to coroot {j}"
                )));
            }
            if dual.mul_vec(&d.simple_roots[i])? != d.simple_roots[j] {
                return Err(Error::InvalidAutomorphism(format!(
                    "does not preserve the pinning: root {i} is not sent to root {j}"
                )));
            }
        }
        Ok(())
    }
}

/// A based root datum with a finite group of pinned automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedRootDatum {
    pub base: BasedRootDatum,
    pub generators: Vec<DiagramAutomorphism>,
    /// The generated group, identity first, in breadth-first order.
    pub group_elements: Vec<DiagramAutomorphism>,
}

impl TwistedRootDatum {
    pub fn new(base: BasedRootDatum, generators: Vec<DiagramAutomorphism>) -> Result<Self> {
        base.ensure_valid()?;
        for g in &generators {
            g.validate_against(&base)?;
        }
        let id = DiagramAutomorphism::identity(base.rank, base.semisimple_rank());
        let mut seen: HashSet<IntMatrix> = HashSet::from([id.lattice_map.clone()]);
        let mut elements = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = g.compose(&x)?;
                if seen.insert(y.lattice_map.clone()) {
                    elements.push(y.clone());
                    queue.push_back(y);
                    if elements.len() > MAX_GROUP_ORDER {
                        return Err(Error::BoundExceeded {
                            what: "automorphism group",
                            bound: MAX_GROUP_ORDER,
                        });
                    }
                }
            }
        }
        Ok(Self {
            base,
            generators,
            group_elements: elements,
        })
    }

    /// The datum with trivial action.
    pub fn split(base: BasedRootDatum) -> Result<Self> {
        Self::new(base, Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.base.rank
    }

    pub fn group_order(&self) -> usize {
        self.group_elements.len()
    }

    pub fn is_split(&self) -> bool {
        self.group_elements.len() == 1
    }

    /// `(1/|I|) sum_g g.v`.
    pub fn average(&self, v: &[BigInt]) -> Result<QVector> {
        let mut sum = lattice::zero(self.rank());
        for g in &self.group_elements {
            sum = lattice::add(&sum, &g.act(v)?);
        }
        let k = BigRational::from_integer(BigInt::from(self.group_order()));
        Ok(lattice::to_q(&sum).iter().map(|x| x / &k).collect())
    }
}

/// `X_*(T)_I` with its class map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoinvariantLattice {
    pub presentation: QuotientPresentation,
    /// Rank of the invariant sublattice, computed independently over Q.
    pub invariant_rank: usize,
}

impl CoinvariantLattice {
    pub fn class_of(&self, v: &[BigInt]) -> Result<QuotientElement> {
        self.presentation.class_of(v)
    }

    pub fn lift(&self, c: &QuotientElement) -> Result<Vector> {
        self.presentation.lift(c)
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.presentation.quotient
    }

    pub fn free_rank(&self) -> usize {
        self.presentation.free_rank()
    }

    pub fn zero(&self) -> QuotientElement {
        self.presentation.zero()
    }

    /// Class with the given free coordinates and zero torsion part.
    pub fn free_class(&self, free: &[i64]) -> Result<QuotientElement> {
        self.presentation.element(
            lattice::vector(free),
            lattice::zero(self.presentation.invariant_factors().len()),
        )
    }
}

fn relation_columns(t: &TwistedRootDatum) -> Vec<Vector> {
    let n = t.rank();
    let mut cols = Vec::new();
    for g in &t.generators {
        for j in 0..n {
            let e = lattice::unit(n, j);
            let ge = g.act(&e).expect("square map");
            let c = lattice::sub(&e, &ge);
            if !lattice::is_zero(&c) {
                cols.push(c);
            }
        }
    }
    cols
}

/// The relation sublattice `(1 - g) X_*(T)` as a matrix of columns.
pub fn relation_matrix(t: &TwistedRootDatum) -> IntMatrix {
    IntMatrix::from_columns(t.rank(), &relation_columns(t)).expect("columns have the lattice rank")
}

pub fn coinvariants(t: &TwistedRootDatum) -> Result<CoinvariantLattice> {
    let n = t.rank();
    let presentation = quotient_group(n, &relation_matrix(t))?;
    // Invariant rank: nullity of the stacked (g - 1).
    let mut stacked = Vec::new();
    for g in &t.generators {
        for i in 0..n {
            let mut row = g.lattice_map.row(i);
            row[i] -= BigInt::one();
            stacked.push(row);
        }
    }
    let rank = if stacked.is_empty() {
        0
    } else {
        IntMatrix::from_rows(stacked.len(), n, &stacked)?.rank()
    };
    Ok(CoinvariantLattice {
        presentation,
        invariant_rank: n - rank,
    })
}

/// Kind of a simple-root orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrbitType {
    /// Roots in the orbit are pairwise orthogonal.
    Orthogonal,
    /// Some pair in the orbit is joined in the Dynkin diagram (an A2 pair).
    AdjacentPair,
}

impl OrbitType {
    pub fn label(self) -> &'static str {
        match self {
            OrbitType::Orthogonal => "orthogonal",
            OrbitType::AdjacentPair => "adjacent-pair",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeRootData {
    /// Orbits of simple-root indices, sorted, ordered by smallest member.
    pub orbits: Vec<Vec<usize>>,
    pub orbit_types: Vec<OrbitType>,
    /// Orbit averages of the simple roots (rational characters).
    pub averaged_simple_roots: Vec<QVector>,
}

impl RelativeRootData {
    pub fn orbit_of(&self, simple: usize) -> Option<usize> {
        self.orbits.iter().position(|o| o.contains(&simple))
    }

    pub fn has_adjacent_pair(&self) -> bool {
        self.orbit_types.contains(&OrbitType::AdjacentPair)
    }
}

pub fn relative_simple_roots(t: &TwistedRootDatum) -> RelativeRootData {
    let n = t.base.semisimple_rank();
    let mut orbit_id: Vec<Option<usize>> = vec![None; n];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if orbit_id[i].is_some() {
            continue;
        }
        let mut orbit: Vec<usize> = t
            .group_elements
            .iter()
            .map(|g| g.root_permutation[i])
            .collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &j in &orbit {
            orbit_id[j] = Some(orbits.len());
        }
        orbits.push(orbit);
    }
    let cartan = t.base.cartan_matrix();
    let orbit_types = orbits
        .iter()
        .map(|o| {
            let adjacent = o
                .iter()
                .any(|&i| o.iter().any(|&j| i != j && !cartan[i][j].is_zero()));
            if adjacent {
                OrbitType::AdjacentPair
            } else {
                OrbitType::Orthogonal
            }
        })
        .collect();
    let averaged_simple_roots = orbits
        .iter()
        .map(|o| {
            let sum = o.iter().fold(lattice::zero(t.rank()), |acc, &i| {
                lattice::add(&acc, &t.base.simple_roots[i])
            });
            let k = BigRational::from_integer(BigInt::from(o.len()));
            lattice::to_q(&sum).iter().map(|x| x / &k).collect()
        })
        .collect();
    RelativeRootData {
        orbits,
        orbit_types,
        averaged_simple_roots,
    }
}

/// The average of any lift of `class`: an invariant rational cocharacter.
pub fn average_map(t: &TwistedRootDatum, lat: &CoinvariantLattice, class: &QuotientElement) -> Result<QVector> {
    let lift = lat.lift(class)?;
    t.average(&lift)
}

/// `pi_1(G)_I = X_*(T) / (Z Phi^vee + (1 - I) X_*(T))`.
pub fn kottwitz_presentation(t: &TwistedRootDatum) -> Result<QuotientPresentation> {
    let mut cols = t.base.simple_coroots.clone();
    cols.extend(relation_columns(t));
    quotient_group(t.rank(), &IntMatrix::from_columns(t.rank(), &cols)?)
}

pub fn kottwitz_components(t: &TwistedRootDatum) -> Result<FgAbelianGroup> {
    Ok(kottwitz_presentation(t)?.quotient)
}

/// The sequence `(Z Phi^vee)_I -> X_*(T)_I -> pi_1(G)_I -> 0` with the
/// checks that make it exact on the left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSequenceReport {
    /// `(Z Phi^vee)_I`, presented from the permutation action on coroots.
    pub coroot_coinvariants: FgAbelianGroup,
    /// Images of one simple coroot per orbit.
    pub orbit_classes: Vec<QuotientElement>,
    pub injective: bool,
    /// Cokernel of the first map, computed in coinvariant coordinates.
    pub cokernel: FgAbelianGroup,
    /// `pi_1(G)_I`, computed from the induced action on `pi_1(G)`.
    pub pi1_coinvariants: FgAbelianGroup,
}

impl ExactSequenceReport {
    pub fn is_exact(&self) -> bool {
        self.injective
            && self.coroot_coinvariants.is_torsion_free()
            && self.coroot_coinvariants.free_rank == self.orbit_classes.len()
            && self.cokernel == self.pi1_coinvariants
    }
}

/// `pi_1(G)_I` computed by inducing the action on the Smith coordinates of
/// `pi_1(G)` and taking coinvariants there.
pub fn pi1_coinvariants_via_action(t: &TwistedRootDatum) -> Result<FgAbelianGroup> {
    let n = t.rank();
    let coroots = IntMatrix::from_columns(n, &t.base.simple_coroots)?;
    let pi1 = quotient_group(n, &coroots)?;
    let u = &pi1.smith.u;
    let u_inv = u.inverse_unimodular().expect("unimodular");
    // In y = U v coordinates pi_1 = Z^n / diag(d); the action is U g U^-1.
    let mut cols: Vec<Vector> = Vec::new();
    for (i, d) in pi1.smith.diagonal().iter().enumerate() {
        cols.push(lattice::scale(d, &lattice::unit(n, i)));
    }
    for g in &t.generators {
        let conj = u.mul(&g.lattice_map)?.mul(&u_inv)?;
        for j in 0..n {
            let e = lattice::unit(n, j);
            let c = lattice::sub(&e, &conj.mul_vec(&e)?);
            if !lattice::is_zero(&c) {
                cols.push(c);
            }
        }
    }
    Ok(quotient_group(n, &IntMatrix::from_columns(n, &cols)?)?.quotient)
}

pub fn coroot_coinvariants_exact_sequence(t: &TwistedRootDatum) -> Result<ExactSequenceReport> {
    let lat = coinvariants(t)?;
    let rel = relative_simple_roots(t);
    let n = t.rank();
    let s = t.base.semisimple_rank();

    // (Z Phi^vee)_I from the permutation action on the simple coroot basis.
    let mut perm_cols = Vec::new();
    for g in &t.generators {
        for i in 0..s {
            let mut c = lattice::unit(s, i);
            c[g.root_permutation[i]] -= BigInt::one();
            if !lattice::is_zero(&c) {
                perm_cols.push(c);
            }
        }
    }
    let coroot_coinvariants = quotient_group(s, &IntMatrix::from_columns(s, &perm_cols)?)?.quotient;

    let orbit_lifts: Vec<Vector> = rel
        .orbits
        .iter()
        .map(|o| t.base.simple_coroots[o[0]].clone())
        .collect();
    let orbit_classes = orbit_lifts
        .iter()
        .map(|v| lat.class_of(v))
        .collect::<Result<Vec<_>>>()?;

    // Injective iff the orbit coroots stay independent modulo the relations.
    let rels = relation_columns(t);
    let rel_rank = IntMatrix::from_columns(n, &rels)?.rank();
    let mut combined = orbit_lifts.clone();
    combined.extend(rels);
    let combined_rank = IntMatrix::from_columns(n, &combined)?.rank();
    let injective = combined_rank == rel_rank + orbit_lifts.len();

    // Cokernel in coinvariant coordinates: Z^(f+t) modulo torsion orders and
    // the orbit classes.
    let f = lat.free_rank();
    let tors = lat.presentation.invariant_factors().to_vec();
    let m = f + tors.len();
    let mut cols: Vec<Vector> = Vec::new();
    for (k, d) in tors.iter().enumerate() {
        cols.push(lattice::scale(d, &lattice::unit(m, f + k)));
    }
    for c in &orbit_classes {
        let mut v = c.free.clone();
        v.extend(c.torsion.iter().cloned());
        cols.push(v);
    }
    let cokernel = quotient_group(m, &IntMatrix::from_columns(m, &cols)?)?.quotient;

    Ok(ExactSequenceReport {
        coroot_coinvariants,
        orbit_classes,
        injective,
        cokernel,
        pi1_coinvariants: pi1_coinvariants_via_action(t)?,
    })
}

/// `<a_1(bar omega^vee_O), beta>` for an adjoint base datum, where `O` is an
/// orbit of simple roots and `beta` a simple root.
pub fn fundamental_coweight_pairing(
    t: &TwistedRootDatum,
    orbit: usize,
    beta: usize,
) -> Result<BigRational> {
    let coweights = t.base.fundamental_coweights()?;
    let rel = relative_simple_roots(t);
    let o = rel
        .orbits
        .get(orbit)
        .ok_or_else(|| Error::MalformedInput(format!("no orbit {orbit}")))?;
    if beta >= t.base.semisimple_rank() {
        return Err(Error::MalformedInput(format!("no simple root {beta}")));
    }
    let lat = coinvariants(t)?;
    let class = lat.class_of(&coweights[o[0]])?;
    let avg = average_map(t, &lat, &class)?;
    Ok(lattice::qdot(&avg, &t.base.simple_roots[beta]))
}

/// Whether the rational vector is fixed by every group element.
pub fn is_invariant(t: &TwistedRootDatum, v: &[BigRational]) -> bool {
    t.generators.iter().all(|g| {
        let m = QMatrix::from_int(&g.lattice_map);
        m.mul_vec(v) == v
    })
}

/// Orbit sizes keyed by orbit index; handy in reports.
pub fn orbit_sizes(rel: &RelativeRootData) -> BTreeMap<usize, usize> {
    rel.orbits.iter().enumerate().map(|(i, o)| (i, o.len())).collect()
}

/// Sum over the I-orbit of a simple root, as a character.
pub fn orbit_root_sum(t: &TwistedRootDatum, orbit: &[usize]) -> Vector {
    orbit.iter().fold(lattice::zero(t.rank()), |acc, &i| {
        lattice::add(&acc, &t.base.simple_roots[i])
    })
}

#[cfg(test)]
pub(crate) fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
pub(crate) fn qzero() -> BigRational {
    BigRational::zero()
}
