//! Based root data on `Z^rank`, paired with the dual `Z^rank` by the dot
//! product. Simple roots live in the character lattice, simple coroots in the
//! cocharacter lattice; the ordered list of simple roots is the pinning.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::abelian::{quotient_group, FgAbelianGroup, IntMatrix, QMatrix};
use crate::error::{Error, Result};
use crate::lattice::{self, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedRootDatum {
    pub name: String,
    pub rank: usize,
    pub simple_roots: Vec<Vector>,
    pub simple_coroots: Vec<Vector>,
    /// Optional map from `Z^rank` into a display lattice (e.g. `Z^3` sum-zero
    /// coordinates for type A2), given as a matrix whose columns are images
    /// of the basis vectors.
    pub display_embedding: Option<IntMatrix>,
}

/// The first root datum axiom that fails, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Axiom {
    Shape(String),
    Diagonal { index: usize, value: BigInt },
    OffDiagonalSign { i: usize, j: usize },
    ZeroPattern { i: usize, j: usize },
    SimpleRootsDependent,
    SimpleCorootsDependent,
    NotFiniteType,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::Shape(msg) => write!(f, "shape: {msg}"),
            Axiom::Diagonal { index, value } => {
                write!(f, "diagonal: <coroot_{index}, root_{index}> = {value}, expected 2")
            }
            Axiom::OffDiagonalSign { i, j } => {
                write!(f, "off-diagonal Cartan entry ({i},{j}) is positive")
            }
            Axiom::ZeroPattern { i, j } => {
                write!(f, "Cartan entries ({i},{j}) and ({j},{i}) are not simultaneously zero")
            }
            Axiom::SimpleRootsDependent => write!(f, "simple roots are linearly dependent"),
            Axiom::SimpleCorootsDependent => write!(f, "simple coroots are linearly dependent"),
            Axiom::NotFiniteType => write!(f, "reflection closure is infinite (not finite type)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    pub violation: Option<Axiom>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// A root together with its coroot and its coordinates in the simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub root: Vector,
    pub coroot: Vector,
    pub coefficients: Vector,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        self.coefficients.iter().all(|c| !c.is_negative())
    }

    /// Indices of simple roots with nonzero coefficient.
    pub fn support(&self) -> BTreeSet<usize> {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    /// Positive roots first (in discovery order), then their negatives.
    pub roots: Vec<Root>,
}

impl RootSystem {
    pub fn positive(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.is_positive())
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

/// `2 rho` and the positive roots needed to produce `2 rho_M` for Levi
/// subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoData {
    pub two_rho: Vector,
    positive_roots: Vec<Root>,
    rank: usize,
}

impl RhoData {
    /// `2 rho_M` for the Levi generated by the given simple roots.
    pub fn two_rho_levi(&self, subset: &BTreeSet<usize>) -> Vector {
        self.positive_roots
            .iter()
            .filter(|r| r.support().is_subset(subset))
            .fold(lattice::zero(self.rank), |acc, r| lattice::add(&acc, &r.root))
    }
}

impl BasedRootDatum {
    pub fn new(
        name: impl Into<String>,
        rank: usize,
        simple_roots: Vec<Vector>,
        simple_coroots: Vec<Vector>,
    ) -> Self {
        Self {
            name: name.into(),
            rank,
            simple_roots,
            simple_coroots,
            display_embedding: None,
        }
    }

    pub fn from_i64(name: &str, rank: usize, roots: &[Vec<i64>], coroots: &[Vec<i64>]) -> Self {
        Self::new(
            name,
            rank,
            roots.iter().map(|r| lattice::vector(r)).collect(),
            coroots.iter().map(|r| lattice::vector(r)).collect(),
        )
    }

    pub fn torus(rank: usize) -> Self {
        Self::new(format!("torus-rank-{rank}"), rank, Vec::new(), Vec::new())
    }

    pub fn with_embedding(mut self, embedding: IntMatrix) -> Self {
        self.display_embedding = Some(embedding);
        self
    }

    /// Number of simple roots (semisimple rank).
    pub fn semisimple_rank(&self) -> usize {
        self.simple_roots.len()
    }

    /// `A[i][j] = <coroot_i, root_j>`.
    pub fn cartan_matrix(&self) -> Vec<Vec<BigInt>> {
        self.simple_coroots
            .iter()
            .map(|c| self.simple_roots.iter().map(|r| lattice::dot(c, r)).collect())
            .collect()
    }

    pub fn validate(&self) -> ValidityReport {
        ValidityReport {
            violation: self.first_violation(),
        }
    }

    #[allow(clippy::needless_range_loop)]
    fn first_violation(&self) -> Option<Axiom> {
        let n = self.simple_roots.len();
        if self.simple_coroots.len() != n {
            return Some(Axiom::Shape(format!(
                "{} simple roots but {} simple coroots",
                n,
                self.simple_coroots.len()
            )));
        }
        for (kind, vs) in [("root", &self.simple_roots), ("coroot", &self.simple_coroots)] {
            if let Some((i, v)) = vs.iter().enumerate().find(|(_, v)| v.len() != self.rank) {
                return Some(Axiom::Shape(format!(
                    "simple {kind} {i} has {} coordinates, rank is {}",
                    v.len(),
                    self.rank
                )));
            }
        }
        if let Some(e) = &self.display_embedding {
            if e.cols() != self.rank {
                return Some(Axiom::Shape("display embedding has wrong width".into()));
            }
        }
        let a = self.cartan_matrix();
        for (i, row) in a.iter().enumerate() {
            if row[i] != BigInt::from(2) {
                return Some(Axiom::Diagonal {
                    index: i,
                    value: row[i].clone(),
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if a[i][j].is_positive() {
                    return Some(Axiom::OffDiagonalSign { i, j });
                }
                if a[i][j].is_zero() != a[j][i].is_zero() {
                    return Some(Axiom::ZeroPattern { i, j });
                }
            }
        }
        if n > 0 {
            let roots = IntMatrix::from_columns(self.rank, &self.simple_roots).ok()?;
            if roots.rank() < n {
                return Some(Axiom::SimpleRootsDependent);
            }
            let coroots = IntMatrix::from_columns(self.rank, &self.simple_coroots).ok()?;
            if coroots.rank() < n {
                return Some(Axiom::SimpleCorootsDependent);
            }
        }
        if self.closure().is_err() {
            return Some(Axiom::NotFiniteType);
        }
        None
    }

    /// Errors with the first violated axiom.
    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate().violation {
            None => Ok(()),
            Some(ax) => Err(Error::InvalidDatum(format!("{}: {}", self.name, ax))),
        }
    }

    /// Swaps roots and coroots.
    pub fn dualize(&self) -> BasedRootDatum {
        BasedRootDatum {
            name: dual_name(&self.name),
            rank: self.rank,
            simple_roots: self.simple_coroots.clone(),
            simple_coroots: self.simple_roots.clone(),
            display_embedding: None,
        }
    }

    /// Reflection of the cocharacter lattice in simple root `i`:
    /// `x -> x - <x, alpha_i> alpha_i^vee`.
    pub fn simple_reflection(&self, i: usize) -> IntMatrix {
        let mut m = IntMatrix::identity(self.rank);
        for r in 0..self.rank {
            for c in 0..self.rank {
                m[(r, c)] -= &self.simple_coroots[i][r] * &self.simple_roots[i][c];
            }
        }
        m
    }

    /// Reflection closure of the simple (root, coroot) pairs. Fails once the
    /// number of roots exceeds what any finite root system of this rank has.
    fn closure(&self) -> Result<Vec<(Vector, Vector)>> {
        let n = self.simple_roots.len();
        let bound = 2 * n * n + 240;
        let mut seen: HashMap<Vector, Vector> = HashMap::new();
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let pair = (self.simple_roots[i].clone(), self.simple_coroots[i].clone());
            if seen.insert(pair.0.clone(), pair.1.clone()).is_none() {
                order.push(pair.clone());
                queue.push_back(pair);
            }
        }
        while let Some((root, coroot)) = queue.pop_front() {
            for i in 0..n {
                let a = &self.simple_roots[i];
                let av = &self.simple_coroots[i];
                let r2 = lattice::sub(&root, &lattice::scale(&lattice::dot(av, &root), a));
                let c2 = lattice::sub(&coroot, &lattice::scale(&lattice::dot(&coroot, a), av));
                if let Some(existing) = seen.get(&r2) {
                    if *existing != c2 {
                        return Err(Error::InvalidDatum("root with two distinct coroots".into()));
                    }
                    continue;
                }
                seen.insert(r2.clone(), c2.clone());
                order.push((r2.clone(), c2.clone()));
                queue.push_back((r2, c2));
                if seen.len() > bound {
                    return Err(Error::InvalidDatum("reflection closure is infinite".into()));
                }
            }
        }
        Ok(order)
    }

    /// All roots, positive ones first.
    pub fn full_root_system(&self) -> Result<RootSystem> {
        self.ensure_valid()?;
        let pairs = self.closure()?;
        let n = self.simple_roots.len();
        if n == 0 {
            return Ok(RootSystem { roots: Vec::new() });
        }
        let basis = QMatrix::from_int(&IntMatrix::from_columns(self.rank, &self.simple_roots)?);
        let mut roots: Vec<Root> = pairs
            .into_iter()
            .map(|(root, coroot)| {
                let coeffs = basis
                    .solve(&lattice::to_q(&root))
                    .and_then(|c| lattice::to_integral(&c))
                    .expect("roots lie in the integral span of simple roots");
                Root {
                    root,
                    coroot,
                    coefficients: coeffs,
                }
            })
            .collect();
        roots.sort_by_key(|r| !r.is_positive());
        Ok(RootSystem { roots })
    }

    /// `X_*(T) / Z Phi^vee`.
    pub fn fundamental_group(&self) -> Result<FgAbelianGroup> {
        self.ensure_valid()?;
        let coroots = IntMatrix::from_columns(self.rank, &self.simple_coroots)?;
        Ok(quotient_group(self.rank, &coroots)?.quotient)
    }

    pub fn rho_data(&self) -> Result<RhoData> {
        let system = self.full_root_system()?;
        let positive_roots: Vec<Root> = system.positive().cloned().collect();
        let two_rho = positive_roots
            .iter()
            .fold(lattice::zero(self.rank), |acc, r| lattice::add(&acc, &r.root));
        Ok(RhoData {
            two_rho,
            positive_roots,
            rank: self.rank,
        })
    }

    /// Simple roots form a basis of the character lattice.
    pub fn is_adjoint(&self) -> bool {
        self.simple_roots.len() == self.rank
            && IntMatrix::from_columns(self.rank, &self.simple_roots)
                .map(|m| m.is_unimodular())
                .unwrap_or(false)
    }

    /// Simple coroots form a basis of the cocharacter lattice.
    pub fn is_simply_connected(&self) -> bool {
        self.simple_coroots.len() == self.rank
            && IntMatrix::from_columns(self.rank, &self.simple_coroots)
                .map(|m| m.is_unimodular())
                .unwrap_or(false)
    }

    /// Fundamental coweights when the datum is adjoint: the dual basis to the
    /// simple roots.
    pub fn fundamental_coweights(&self) -> Result<Vec<Vector>> {
        if !self.is_adjoint() {
            return Err(Error::NotAdjoint);
        }
        // Rows of the inverse of the column matrix of roots pair to deltas.
        let roots = IntMatrix::from_columns(self.rank, &self.simple_roots)?;
        let inv = roots.inverse_unimodular().ok_or(Error::NotAdjoint)?;
        Ok(inv.to_rows())
    }

    /// Image of a cocharacter in the display lattice, or the vector itself.
    pub fn display(&self, v: &[BigInt]) -> Vector {
        match &self.display_embedding {
            Some(e) => e.mul_vec(v).unwrap_or_else(|_| v.to_vec()),
            None => v.to_vec(),
        }
    }
}

fn dual_name(name: &str) -> String {
    match name.strip_suffix("^vee") {
        Some(base) => base.to_string(),
        None => format!("{name}^vee"),
    }
}
