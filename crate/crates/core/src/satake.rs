//! Schubert combinatorics of the twisted affine Grassmannian: stratum
//! dimensions, closure posets, connected components, semi-infinite and
//! convolution cells, and the `corr` shift for Levi subgroups.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::abelian::QuotientElement;
use crate::coweights::{CoweightSpace, OrderCertificate};
use crate::error::{Error, Result};
use crate::lattice;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchubertStratum {
    pub label: QuotientElement,
    pub dim: BigInt,
    /// Class in `pi_1(G)_I`.
    pub component: QuotientElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchubertPoset {
    /// Sorted by dimension, then label.
    pub strata: Vec<SchubertStratum>,
    /// `(i, j, c)`: `strata[i] < strata[j]` certified by `c`.
    pub order: Vec<(usize, usize, OrderCertificate)>,
    /// Covering relations `(lower, upper)`.
    pub covers: Vec<(usize, usize)>,
}

impl SchubertPoset {
    pub fn labels(&self) -> Vec<QuotientElement> {
        self.strata.iter().map(|s| s.label.clone()).collect()
    }

    pub fn less(&self, i: usize, j: usize) -> bool {
        self.order.iter().any(|(a, b, _)| *a == i && *b == j)
    }
}

/// Which strata a poset covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PosetRange {
    /// Everything in the closure of one stratum.
    Below(QuotientElement),
    /// All dominant classes up to a `<., 2rho>` bound.
    Height(BigInt),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MvCell {
    pub mu: QuotientElement,
    pub lambda: QuotientElement,
    pub nonempty: bool,
    /// `<mu + lambda, rho>` when nonempty.
    pub dim: Option<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvCell {
    pub mu: QuotientElement,
    pub mu_prime: QuotientElement,
    pub lambda: QuotientElement,
    pub lambda_prime: QuotientElement,
    pub nonempty: bool,
    /// `<mu + mu' + lambda + lambda', rho>` when nonempty.
    pub dim: Option<BigInt>,
}

fn require_dominant(space: &CoweightSpace, c: &QuotientElement) -> Result<()> {
    if space.is_dominant_class(c)?.is_none() {
        return Err(Error::NotDominant(c.to_string()));
    }
    Ok(())
}

/// `x / 2`, which must be exact.
fn half(x: &BigInt, what: &str) -> Result<BigInt> {
    let (q, r) = x.div_rem(&BigInt::from(2));
    if !r.is_zero() {
        return Err(Error::InvariantViolation(format!("{what}: {x}/2 is not an integer")));
    }
    Ok(q)
}

pub fn stratum(space: &CoweightSpace, lambda: &QuotientElement) -> Result<SchubertStratum> {
    require_dominant(space, lambda)?;
    let dim = space.height(lambda)?;
    if dim.is_negative() {
        return Err(Error::InvariantViolation(format!("negative dimension for {lambda}")));
    }
    Ok(SchubertStratum {
        label: lambda.clone(),
        dim,
        component: space.component_of(lambda)?,
    })
}

/// Dominant classes `mu <= lambda`, found by subtracting orbit coroots.
pub fn dominant_below(space: &CoweightSpace, lambda: &QuotientElement) -> Result<Vec<QuotientElement>> {
    require_dominant(space, lambda)?;
    let classes = space.orbit_coroot_classes()?;
    let steps: Vec<BigInt> = classes
        .iter()
        .map(|c| space.height(c))
        .collect::<Result<_>>()?;
    if steps.iter().any(|s| !s.is_positive()) {
        return Err(Error::InvariantViolation("orbit coroot of non-positive height".into()));
    }
    let top = space.height(lambda)?;
    let p = &space.lattice.presentation;
    let mut out = BTreeSet::new();
    let mut coeffs = vec![BigInt::zero(); classes.len()];
    loop {
        let used: BigInt = coeffs.iter().zip(&steps).map(|(c, s)| c * s).sum();
        if used <= top {
            let mut mu = lambda.clone();
            for (c, a) in coeffs.iter().zip(&classes) {
                mu = p.sub(&mu, &p.scale(c, a)?)?;
            }
            if space.is_dominant_class(&mu)?.is_some() {
                out.insert(mu);
            }
        }
        // Odometer over coefficient vectors with total height within `top`.
        let mut k = 0;
        loop {
            if k == coeffs.len() {
                let mut v: Vec<QuotientElement> = out.into_iter().collect();
                v.sort_by_cached_key(|c| (space.height(c).unwrap_or_default(), c.clone()));
                return Ok(v);
            }
            coeffs[k] += 1;
            let used: BigInt = coeffs.iter().zip(&steps).map(|(c, s)| c * s).sum();
            if used <= top {
                break;
            }
            coeffs[k] = BigInt::zero();
            k += 1;
        }
    }
}

pub fn closure_poset(space: &CoweightSpace, range: &PosetRange) -> Result<SchubertPoset> {
    let labels = match range {
        PosetRange::Below(lambda) => dominant_below(space, lambda)?,
        PosetRange::Height(h) => space.bounded_dominant(h)?,
    };
    let strata = labels
        .iter()
        .map(|l| stratum(space, l))
        .collect::<Result<Vec<_>>>()?;
    let n = strata.len();
    let mut less = vec![vec![false; n]; n];
    let mut order = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if let Some(cert) = space.leq(&strata[i].label, &strata[j].label)? {
                if strata[i].dim >= strata[j].dim {
                    return Err(Error::InvariantViolation(format!(
                        "{} < {} without a drop in dimension",
                        strata[i].label, strata[j].label
                    )));
                }
                if strata[i].component != strata[j].component {
                    return Err(Error::InvariantViolation(format!(
                        "{} < {} across components",
                        strata[i].label, strata[j].label
                    )));
                }
                less[i][j] = true;
                order.push((i, j, cert));
            }
        }
    }
    let mut covers = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if less[i][j] && !(0..n).any(|k| less[i][k] && less[k][j]) {
                covers.push((i, j));
            }
        }
    }
    Ok(SchubertPoset {
        strata,
        order,
        covers,
    })
}

pub fn component_of(space: &CoweightSpace, c: &QuotientElement) -> Result<QuotientElement> {
    space.component_of(c)
}

/// `Gr^lambda ∩ S_mu`.
pub fn mv_cell(space: &CoweightSpace, mu: &QuotientElement, lambda: &QuotientElement) -> Result<MvCell> {
    require_dominant(space, lambda)?;
    let (rep, _) = space.dominant_representative(mu)?;
    let nonempty = space.leq(&rep.class, lambda)?.is_some();
    let dim = if nonempty {
        let total = space.height(mu)? + space.height(lambda)?;
        Some(half(&total, "MV cell dimension")?)
    } else {
        None
    };
    Ok(MvCell {
        mu: mu.clone(),
        lambda: lambda.clone(),
        nonempty,
        dim,
    })
}

/// The convolution analogue, in the twisted labeling of the convolution
/// Grassmannian.
pub fn conv_cell(
    space: &CoweightSpace,
    mu: &QuotientElement,
    mu_prime: &QuotientElement,
    lambda: &QuotientElement,
    lambda_prime: &QuotientElement,
) -> Result<ConvCell> {
    require_dominant(space, lambda)?;
    require_dominant(space, lambda_prime)?;
    let (nu, _) = space.dominant_representative(mu)?;
    let (nu_prime, _) = space.dominant_representative(mu_prime)?;
    let nonempty = space.leq(&nu.class, lambda)?.is_some() && space.leq(&nu_prime.class, lambda_prime)?.is_some();
    let dim = if nonempty {
        let total = space.height(mu)? + space.height(mu_prime)? + space.height(lambda)? + space.height(lambda_prime)?;
        Some(half(&total, "convolution cell dimension")?)
    } else {
        None
    };
    Ok(ConvCell {
        mu: mu.clone(),
        mu_prime: mu_prime.clone(),
        lambda: lambda.clone(),
        lambda_prime: lambda_prime.clone(),
        nonempty,
        dim,
    })
}

/// `<lambda, 2rho - 2rho_M>` for the Levi generated by `levi`, a set of
/// simple-root indices that must be a union of orbits.
pub fn corr(space: &CoweightSpace, levi: &BTreeSet<usize>, class: &QuotientElement) -> Result<BigInt> {
    let s = space.twisted.base.semisimple_rank();
    if let Some(&i) = levi.iter().find(|&&i| i >= s) {
        return Err(Error::MalformedLevi(format!("no simple root {i}")));
    }
    for orbit in &space.relative.orbits {
        let inside = orbit.iter().filter(|i| levi.contains(i)).count();
        if inside != 0 && inside != orbit.len() {
            return Err(Error::MalformedLevi(format!(
                "{levi:?} splits the orbit {orbit:?}"
            )));
        }
    }
    let rho = space.twisted.base.rho_data()?;
    let shift = lattice::sub(&rho.two_rho, &rho.two_rho_levi(levi));
    Ok(lattice::dot(&space.lift(class)?, &shift))
}

/// Parity of `<lambda, 2rho>` over bounded dominant classes in one
/// component; `None` if the bound contains none.
pub fn parity_check(space: &CoweightSpace, component: &QuotientElement, height_bound: &BigInt) -> Result<Option<u8>> {
    let mut parity: Option<(u8, QuotientElement)> = None;
    for c in space.bounded_dominant(height_bound)? {
        if space.component_of(&c)? != *component {
            continue;
        }
        let p = if space.height(&c)?.is_even() { 0 } else { 1 };
        match &parity {
            None => parity = Some((p, c)),
            Some((q, first)) if *q != p => {
                return Err(Error::InvariantViolation(format!(
                    "parity of <.,2rho> differs between {first} and {c} in component {component}"
                )))
            }
            Some(_) => {}
        }
    }
    Ok(parity.map(|(p, _)| p))
}

/// Components met by the bounded dominant cone, each with its parity.
pub fn parities(space: &CoweightSpace, height_bound: &BigInt) -> Result<Vec<(QuotientElement, u8)>> {
    let comps: BTreeSet<QuotientElement> = space
        .bounded_dominant(height_bound)?
        .iter()
        .map(|c| space.component_of(c))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for comp in comps {
        if let Some(p) = parity_check(space, &comp, height_bound)? {
            out.push((comp, p));
        }
    }
    Ok(out)
}
