//! Characteristic-zero characters: Freudenthal multiplicities, restriction
//! to coinvariants, highest-weight extraction, branching to the fixed-point
//! group and tensor products.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::abelian::QuotientElement;
use crate::dual::{CoefficientProfile, FoldedDatum};
use crate::error::{Error, Result};
use crate::galois::{coinvariants, TwistedRootDatum};
use crate::lattice::{self, Vector};
use crate::rootdatum::BasedRootDatum;

/// Where the weights of a multiset live.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SupportLattice {
    /// `X_*(T)`, the characters of the dual torus.
    Absolute,
    /// `X_*(T)_I`.
    Coinvariant,
    /// The character lattice of a folded datum (free part of `X_*(T)_I`).
    Folded,
}

/// Finitely supported weights with positive multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightMultiset<W: Ord> {
    pub support_lattice: SupportLattice,
    entries: BTreeMap<W, u64>,
}

impl<W: Ord + Clone> WeightMultiset<W> {
    pub fn new(support_lattice: SupportLattice) -> Self {
        Self {
            support_lattice,
            entries: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, w: W, m: u64) {
        if m > 0 {
            *self.entries.entry(w).or_insert(0) += m;
        }
    }

    pub fn get(&self, w: &W) -> u64 {
        self.entries.get(w).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&W, &u64)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_dimension(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Pushforward of multiplicities along `f`.
    pub fn map<V: Ord + Clone>(&self, support_lattice: SupportLattice, mut f: impl FnMut(&W) -> Result<V>) -> Result<WeightMultiset<V>> {
        let mut out = WeightMultiset::new(support_lattice);
        for (w, &m) in &self.entries {
            out.insert(f(w)?, m);
        }
        Ok(out)
    }
}

pub fn total_dimension<W: Ord + Clone>(w: &WeightMultiset<W>) -> u64 {
    w.total_dimension()
}

/// Irreducible summands and what could not be accounted for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionResult<W: Ord> {
    pub summands: BTreeMap<W, u64>,
    pub residual: WeightMultiset<W>,
}

impl<W: Ord + Clone> DecompositionResult<W> {
    pub fn is_complete(&self) -> bool {
        self.residual.is_empty()
    }
}

fn to_i64(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| {
            x.to_i64()
                .ok_or_else(|| Error::MalformedInput(format!("weight entry {x} is too large")))
        })
        .collect()
}

fn from_i64(v: &[i64]) -> Vector {
    lattice::vector(v)
}

fn dot64(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Root data of a group in machine integers, for character computations.
/// Weights are characters, paired with coroots.
#[derive(Clone, Debug)]
pub struct CharacterEngine {
    rank: usize,
    simple_roots: Vec<Vec<i64>>,
    simple_coroots: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    positive_coroots: Vec<Vec<i64>>,
    two_rho: Vec<i64>,
    two_rho_vee: Vec<i64>,
}

impl CharacterEngine {
    pub fn new(d: &BasedRootDatum) -> Result<Self> {
        let system = d.full_root_system()?;
        let mut positive_roots = Vec::new();
        let mut positive_coroots = Vec::new();
        for r in system.positive() {
            positive_roots.push(to_i64(&r.root)?);
            positive_coroots.push(to_i64(&r.coroot)?);
        }
        let mut two_rho = vec![0; d.rank];
        let mut two_rho_vee = vec![0; d.rank];
        for (r, c) in positive_roots.iter().zip(&positive_coroots) {
            for k in 0..d.rank {
                two_rho[k] += r[k];
                two_rho_vee[k] += c[k];
            }
        }
        Ok(Self {
            rank: d.rank,
            simple_roots: d.simple_roots.iter().map(|r| to_i64(r)).collect::<Result<_>>()?,
            simple_coroots: d.simple_coroots.iter().map(|r| to_i64(r)).collect::<Result<_>>()?,
            positive_roots,
            positive_coroots,
            two_rho,
            two_rho_vee,
        })
    }

    /// `sum_{beta > 0} <beta^vee, x> <beta^vee, y>`: Weyl-invariant and
    /// positive definite on the span of the roots.
    fn form(&self, x: &[i64], y: &[i64]) -> i128 {
        self.positive_coroots
            .iter()
            .map(|c| i128::from(dot64(c, x)) * i128::from(dot64(c, y)))
            .sum()
    }

    pub fn is_dominant(&self, w: &[i64]) -> bool {
        self.simple_coroots.iter().all(|c| dot64(c, w) >= 0)
    }

    /// `<w, 2 rho^vee>`: strictly increases along simple roots.
    pub fn height(&self, w: &[i64]) -> i64 {
        dot64(w, &self.two_rho_vee)
    }

    /// Dominant conjugate and the total number of simple roots added.
    fn dominant_with_shift(&self, w: &[i64]) -> (Vec<i64>, Vec<i64>) {
        let mut x = w.to_vec();
        let mut shift = vec![0i64; self.simple_roots.len()];
        loop {
            let Some(i) = self.simple_coroots.iter().position(|c| dot64(c, &x) < 0) else {
                return (x, shift);
            };
            let p = dot64(&self.simple_coroots[i], &x);
            for (xk, rk) in x.iter_mut().zip(&self.simple_roots[i]) {
                *xk -= p * rk;
            }
            shift[i] -= p;
        }
    }

    /// Freudenthal's recursion; weights are generated by lowering from the
    /// highest weight and kept while their dominant conjugate stays below it.
    pub fn character(&self, lambda: &[i64]) -> Result<Vec<(Vec<i64>, u64)>> {
        if !self.is_dominant(lambda) {
            return Err(Error::NotDominant(format!("{lambda:?}")));
        }
        let s = self.simple_roots.len();
        let mut order: Vec<Vec<i64>> = vec![lambda.to_vec()];
        let mut depth_of: HashMap<Vec<i64>, Vec<i64>> = HashMap::from([(lambda.to_vec(), vec![0; s])]);
        let mut queue = VecDeque::from([lambda.to_vec()]);
        while let Some(mu) = queue.pop_front() {
            let k = depth_of[&mu].clone();
            for i in 0..s {
                let nu: Vec<i64> = (0..self.rank).map(|j| mu[j] - self.simple_roots[i][j]).collect();
                if depth_of.contains_key(&nu) {
                    continue;
                }
                let mut knu = k.clone();
                knu[i] += 1;
                let (_, shift) = self.dominant_with_shift(&nu);
                // lambda - dom(nu) = sum (knu - shift) alpha.
                if knu.iter().zip(&shift).all(|(a, b)| a - b >= 0) {
                    depth_of.insert(nu.clone(), knu);
                    order.push(nu.clone());
                    queue.push_back(nu);
                }
            }
        }
        // Breadth-first order is by depth, so every mu + k beta comes first.
        let lr: Vec<i64> = lambda.to_vec();
        let norm = |x: &[i64]| -> i128 {
            // B(x + rho, x + rho) up to a constant: B(x, x) + B(x, 2 rho).
            self.form(x, x) + self.form(x, &self.two_rho)
        };
        let top = norm(&lr);
        let mut mult: HashMap<Vec<i64>, u64> = HashMap::new();
        mult.insert(lr.clone(), 1);
        for mu in order.iter().skip(1) {
            let mut num: i128 = 0;
            for beta in &self.positive_roots {
                let mut j = 1;
                loop {
                    let nu: Vec<i64> = (0..self.rank).map(|t| mu[t] + j * beta[t]).collect();
                    let Some(&m) = mult.get(&nu) else { break };
                    num += i128::from(m) * self.form(&nu, beta);
                    j += 1;
                }
            }
            num *= 2;
            let den = top - norm(mu);
            if den <= 0 || num % den != 0 {
                return Err(Error::InvariantViolation(format!(
                    "Freudenthal recursion failed at {mu:?}"
                )));
            }
            let m = num / den;
            if m < 0 {
                return Err(Error::InvariantViolation(format!("negative multiplicity at {mu:?}")));
            }
            if m > 0 {
                mult.insert(mu.clone(), m as u64);
            }
        }
        Ok(order
            .into_iter()
            .filter_map(|w| mult.get(&w).map(|&m| (w, m)))
            .collect())
    }
}

/// Character of the irreducible representation with highest weight `lambda`
/// of the group whose characters are the character lattice of `d`.
pub fn irreducible_character(d: &BasedRootDatum, lambda: &[BigInt]) -> Result<WeightMultiset<Vector>> {
    if lambda.len() != d.rank {
        return Err(Error::DimensionMismatch {
            expected: d.rank,
            found: lambda.len(),
        });
    }
    let engine = CharacterEngine::new(d)?;
    character_with(&engine, lambda, SupportLattice::Absolute)
}

fn character_with(engine: &CharacterEngine, lambda: &[BigInt], tag: SupportLattice) -> Result<WeightMultiset<Vector>> {
    let mut out = WeightMultiset::new(tag);
    for (w, m) in engine.character(&to_i64(lambda)?)? {
        out.insert(from_i64(&w), m);
    }
    Ok(out)
}

/// Pushforward along `X_*(T) -> X_*(T)_I`.
pub fn restrict_to_coinvariants(t: &TwistedRootDatum, w: &WeightMultiset<Vector>) -> Result<WeightMultiset<QuotientElement>> {
    let lat = coinvariants(t)?;
    w.map(SupportLattice::Coinvariant, |v| lat.class_of(v))
}

/// Iterated extraction of the highest dominant weight.
pub fn decompose(d: &BasedRootDatum, w: &WeightMultiset<Vector>) -> Result<DecompositionResult<Vector>> {
    let engine = CharacterEngine::new(d)?;
    decompose_with(&engine, w)
}

fn decompose_with(engine: &CharacterEngine, w: &WeightMultiset<Vector>) -> Result<DecompositionResult<Vector>> {
    let mut residual: BTreeMap<Vec<i64>, i128> = BTreeMap::new();
    for (v, &m) in w.iter() {
        residual.insert(to_i64(v)?, i128::from(m));
    }
    let mut summands = BTreeMap::new();
    loop {
        let top = residual
            .iter()
            .filter(|(v, &m)| m != 0 && engine.is_dominant(v))
            .max_by_key(|(v, _)| (engine.height(v), (*v).clone()))
            .map(|(v, &m)| (v.clone(), m));
        let Some((lambda, m)) = top else { break };
        if m < 0 {
            break;
        }
        for (v, k) in engine.character(&lambda)? {
            *residual.entry(v).or_insert(0) -= m * i128::from(k);
        }
        residual.retain(|_, x| *x != 0);
        summands.insert(from_i64(&lambda), m as u64);
    }
    let mut left = WeightMultiset::new(w.support_lattice);
    let mut bad = 0usize;
    for (v, m) in residual {
        if m > 0 {
            left.insert(from_i64(&v), m as u64);
        }
        bad += 1;
    }
    if bad > 0 {
        return Err(Error::ResidualNonEmpty(bad));
    }
    Ok(DecompositionResult {
        summands,
        residual: left,
    })
}

/// Restriction of an irreducible of `G^vee` to the fixed group, and its
/// decomposition when the folded datum is available.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branching {
    pub highest_weight: Vector,
    pub restricted: WeightMultiset<QuotientElement>,
    pub decomposition: std::result::Result<DecompositionResult<QuotientElement>, Error>,
}

/// Splits a coinvariant character by torsion coset and decomposes each
/// piece over the folded datum.
pub fn decompose_coinvariant(
    folded: &FoldedDatum,
    w: &WeightMultiset<QuotientElement>,
) -> Result<DecompositionResult<QuotientElement>> {
    let engine = CharacterEngine::new(&folded.datum)?;
    let mut by_torsion: BTreeMap<Vector, WeightMultiset<Vector>> = BTreeMap::new();
    for (c, &m) in w.iter() {
        by_torsion
            .entry(c.torsion.clone())
            .or_insert_with(|| WeightMultiset::new(SupportLattice::Folded))
            .insert(c.free.clone(), m);
    }
    let mut summands = BTreeMap::new();
    for (torsion, piece) in by_torsion {
        let result = decompose_with(&engine, &piece)?;
        for (hw, m) in result.summands {
            summands.insert(
                QuotientElement {
                    free: hw,
                    torsion: torsion.clone(),
                },
                m,
            );
        }
    }
    Ok(DecompositionResult {
        summands,
        residual: WeightMultiset::new(SupportLattice::Coinvariant),
    })
}

/// Character of a folded irreducible, placed in the coinvariant lattice with
/// the given torsion part.
pub fn folded_character(folded: &FoldedDatum, hw: &QuotientElement) -> Result<WeightMultiset<QuotientElement>> {
    let chi = irreducible_character(&folded.datum, &hw.free)?;
    chi.map(SupportLattice::Coinvariant, |v| {
        Ok(QuotientElement {
            free: v.clone(),
            torsion: hw.torsion.clone(),
        })
    })
}

pub fn branch_to_fixed_group(
    t: &TwistedRootDatum,
    folded: Option<&FoldedDatum>,
    lambda: &[BigInt],
    profile: CoefficientProfile,
) -> Result<Branching> {
    let dual = t.base.dualize();
    let chi = irreducible_character(&dual, lambda)?;
    let restricted = restrict_to_coinvariants(t, &chi)?;
    if restricted.total_dimension() != chi.total_dimension() {
        return Err(Error::InvariantViolation("restriction changed the dimension".into()));
    }
    let decomposition = match (profile, folded) {
        (CoefficientProfile::Char0, Some(fd)) => {
            let result = decompose_coinvariant(fd, &restricted)?;
            let mut rebuilt = WeightMultiset::new(SupportLattice::Coinvariant);
            for (hw, &m) in &result.summands {
                for (v, &k) in folded_character(fd, hw)?.iter() {
                    rebuilt.insert(v.clone(), m * k);
                }
            }
            if rebuilt != restricted {
                return Err(Error::InvariantViolation(
                    "branching does not reconstruct the restricted character".into(),
                ));
            }
            let lat = coinvariants(t)?;
            let bar = lat.class_of(lambda)?;
            if result.summands.get(&bar).copied().unwrap_or(0) == 0 {
                return Err(Error::InvariantViolation(format!(
                    "the projected weight {bar} is not a summand"
                )));
            }
            Ok(result)
        }
        (CoefficientProfile::Char0, None) => Err(Error::UnsupportedDecomposition(
            "no verified folded Cartan data for this datum".into(),
        )),
        (p, _) => Err(Error::UnsupportedDecomposition(format!(
            "irreducible decomposition is only available in characteristic zero, not {p}"
        ))),
    };
    Ok(Branching {
        highest_weight: lambda.to_vec(),
        restricted,
        decomposition,
    })
}

/// Product of characters.
pub fn character_product(a: &WeightMultiset<Vector>, b: &WeightMultiset<Vector>) -> WeightMultiset<Vector> {
    let mut out = WeightMultiset::new(a.support_lattice);
    for (x, &m) in a.iter() {
        for (y, &k) in b.iter() {
            out.insert(lattice::add(x, y), m * k);
        }
    }
    out
}

pub fn decompose_tensor(d: &BasedRootDatum, lambda: &[BigInt], mu: &[BigInt]) -> Result<DecompositionResult<Vector>> {
    let engine = CharacterEngine::new(d)?;
    let a = character_with(&engine, lambda, SupportLattice::Folded)?;
    let b = character_with(&engine, mu, SupportLattice::Folded)?;
    let product = character_product(&a, &b);
    let result = decompose_with(&engine, &product)?;
    let dims: u64 = result
        .summands
        .iter()
        .map(|(hw, &m)| Ok(m * character_with(&engine, hw, SupportLattice::Folded)?.total_dimension()))
        .sum::<Result<u64>>()?;
    if dims != a.total_dimension() * b.total_dimension() {
        return Err(Error::InvariantViolation("tensor product dimensions do not multiply".into()));
    }
    Ok(result)
}

/// Multiplicity of the weight `nu` in the irreducible of highest weight `mu`.
pub fn weight_rank(d: &BasedRootDatum, mu: &[BigInt], nu: &[BigInt]) -> Result<u64> {
    Ok(irreducible_character(d, mu)?.get(&nu.to_vec()))
}

/// Folded version of [`weight_rank`] on coinvariant classes.
pub fn weight_rank_folded(
    folded: &FoldedDatum,
    mu: &QuotientElement,
    nu: &QuotientElement,
    profile: CoefficientProfile,
) -> Result<u64> {
    if !profile.is_char0() {
        return Err(Error::UnsupportedDecomposition(format!(
            "weight ranks are computed from characteristic-zero characters, not {profile}"
        )));
    }
    if mu.torsion != nu.torsion {
        return Ok(0);
    }
    weight_rank(&folded.datum, &mu.free, &nu.free)
}
