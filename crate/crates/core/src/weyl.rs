//! Absolute and relative Weyl groups and the Iwahori-Weyl group
//! `W_0 ⋉ X_*(T)_I`.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::abelian::{IntMatrix, QMatrix, QuotientElement};
use crate::error::{Error, Result};
use crate::galois::{coinvariants, relative_simple_roots, CoinvariantLattice, TwistedRootDatum};
use crate::lattice::{self, QVector, Vector};
use crate::rootdatum::BasedRootDatum;

pub const DEFAULT_WEYL_BOUND: usize = 1_000_000;

/// A Weyl group element acting on `X_*(T)`, with a reduced word when known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub matrix: IntMatrix,
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn identity(rank: usize) -> Self {
        Self {
            matrix: IntMatrix::identity(rank),
            word: Vec::new(),
        }
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn act(&self, v: &[BigInt]) -> Vector {
        self.matrix.mul_vec(v).expect("matching rank")
    }

    /// `self * other`, words concatenated (not necessarily reduced).
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let mut word = self.word.clone();
        word.extend(&other.word);
        WeylElement {
            matrix: self.matrix.mul(&other.matrix).expect("matching rank"),
            word,
        }
    }

    pub fn inverse(&self) -> WeylElement {
        WeylElement {
            matrix: self.matrix.inverse_unimodular().expect("Weyl elements are unimodular"),
            word: self.word.iter().rev().copied().collect(),
        }
    }
}

fn closure(
    rank: usize,
    generators: &[(IntMatrix, Vec<usize>)],
    bound: usize,
    what: &'static str,
) -> Result<Vec<WeylElement>> {
    let id = WeylElement::identity(rank);
    let mut seen: HashMap<IntMatrix, usize> = HashMap::from([(id.matrix.clone(), 0)]);
    let mut elements = vec![id];
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        for (g, gword) in generators {
            let x = &elements[k];
            let m = g.mul(&x.matrix)?;
            if seen.contains_key(&m) {
                continue;
            }
            if elements.len() >= bound {
                return Err(Error::BoundExceeded { what, bound });
            }
            let mut word = gword.clone();
            word.extend(&x.word);
            seen.insert(m.clone(), elements.len());
            elements.push(WeylElement { matrix: m, word });
            queue.push_back(elements.len() - 1);
        }
    }
    Ok(elements)
}

/// All of `W_abs` in breadth-first (length) order; words are reduced.
pub fn enumerate_absolute_weyl(d: &BasedRootDatum, bound: usize) -> Result<Vec<WeylElement>> {
    d.ensure_valid()?;
    let gens: Vec<(IntMatrix, Vec<usize>)> = (0..d.semisimple_rank())
        .map(|i| (d.simple_reflection(i), vec![i]))
        .collect();
    closure(d.rank, &gens, bound, "absolute Weyl group")
}

/// `W_abs^I`: elements commuting with every generator of the action.
pub fn fixed_weyl_subgroup(t: &TwistedRootDatum, bound: usize) -> Result<Vec<WeylElement>> {
    let all = enumerate_absolute_weyl(&t.base, bound)?;
    let mut out = Vec::new();
    for w in all {
        let mut fixed = true;
        for g in &t.generators {
            if w.matrix.mul(&g.lattice_map)? != g.lattice_map.mul(&w.matrix)? {
                fixed = false;
                break;
            }
        }
        if fixed {
            out.push(w);
        }
    }
    Ok(out)
}

/// Longest element of the parabolic subgroup generated by `subset`.
pub fn parabolic_longest(d: &BasedRootDatum, subset: &[usize], bound: usize) -> Result<WeylElement> {
    let gens: Vec<(IntMatrix, Vec<usize>)> = subset
        .iter()
        .map(|&i| (d.simple_reflection(i), vec![i]))
        .collect();
    let elements = closure(d.rank, &gens, bound, "parabolic subgroup")?;
    Ok(elements.into_iter().last().expect("closure contains the identity"))
}

/// `W_0`, generated by one parabolic longest element per orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeWeylGroup {
    pub generators: Vec<WeylElement>,
    pub elements: Vec<WeylElement>,
    pub coinvariants: CoinvariantLattice,
    index: HashMap<IntMatrix, usize>,
    /// Induced action of each element on the free part of `X_*(T)_I`.
    free_actions: Vec<IntMatrix>,
}

impl RelativeWeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, matrix: &IntMatrix) -> Option<usize> {
        self.index.get(matrix).copied()
    }

    /// `w . c` for the element with the given index.
    pub fn act_on_class(&self, w: usize, c: &QuotientElement) -> Result<QuotientElement> {
        let lift = self.coinvariants.lift(c)?;
        self.coinvariants.class_of(&self.elements[w].act(&lift))
    }

    pub fn free_action(&self, w: usize) -> &IntMatrix {
        &self.free_actions[w]
    }

    /// Checks that every generator preserves `(1 - g) X_*(T)`, so the action
    /// on coinvariants is well defined.
    pub fn check_descends(&self) -> Result<()> {
        let rel = &self.coinvariants.presentation.relations;
        for w in &self.generators {
            for col in rel.columns() {
                let image = w.act(&col);
                if !self.coinvariants.class_of(&image)?.is_zero() {
                    return Err(Error::InvariantViolation(
                        "relative reflection does not preserve the relation lattice".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

pub fn relative_weyl(t: &TwistedRootDatum, bound: usize) -> Result<RelativeWeylGroup> {
    let rel = relative_simple_roots(t);
    let mut generators = Vec::new();
    for orbit in &rel.orbits {
        let w = parabolic_longest(&t.base, orbit, bound)?;
        for g in &t.generators {
            if w.matrix.mul(&g.lattice_map)? != g.lattice_map.mul(&w.matrix)? {
                return Err(Error::InvariantViolation(
                    "orbit longest element does not commute with the action".into(),
                ));
            }
        }
        generators.push(w);
    }
    let gens: Vec<(IntMatrix, Vec<usize>)> = generators
        .iter()
        .map(|w| (w.matrix.clone(), w.word.clone()))
        .collect();
    let elements = closure(t.rank(), &gens, bound, "relative Weyl group")?;
    let lat = coinvariants(t)?;
    let index = elements
        .iter()
        .enumerate()
        .map(|(k, w)| (w.matrix.clone(), k))
        .collect();
    let f = lat.free_rank();
    let mut free_actions = Vec::with_capacity(elements.len());
    for w in &elements {
        let mut cols = Vec::with_capacity(f);
        for k in 0..f {
            let mut free = lattice::zero(f);
            free[k] = BigInt::from(1);
            let c = lat.presentation.element(free, lattice::zero(lat.presentation.invariant_factors().len()))?;
            let image = lat.class_of(&w.act(&lat.lift(&c)?))?;
            cols.push(image.free);
        }
        free_actions.push(IntMatrix::from_columns(f, &cols)?);
    }
    let group = RelativeWeylGroup {
        generators,
        elements,
        coinvariants: lat,
        index,
        free_actions,
    };
    group.check_descends()?;
    Ok(group)
}

/// `(w, lambda)` with `w` an index into the relative Weyl group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IwahoriWeylElement {
    pub finite_part: usize,
    pub translation: QuotientElement,
}

/// The Iwahori-Weyl group of a twisted datum.
#[derive(Clone, Debug)]
pub struct IwahoriWeyl {
    pub weyl: RelativeWeylGroup,
    inverses: Vec<usize>,
}

impl IwahoriWeyl {
    pub fn new(weyl: RelativeWeylGroup) -> Result<Self> {
        let mut inverses = Vec::with_capacity(weyl.order());
        for w in &weyl.elements {
            let inv = w.inverse();
            inverses.push(weyl.index_of(&inv.matrix).ok_or_else(|| {
                Error::InvariantViolation("relative Weyl group not closed under inverses".into())
            })?);
        }
        Ok(Self { weyl, inverses })
    }

    pub fn from_twisted(t: &TwistedRootDatum) -> Result<Self> {
        Self::new(relative_weyl(t, DEFAULT_WEYL_BOUND)?)
    }

    pub fn identity(&self) -> IwahoriWeylElement {
        IwahoriWeylElement {
            finite_part: 0,
            translation: self.weyl.coinvariants.zero(),
        }
    }

    pub fn element(&self, finite_part: usize, translation: QuotientElement) -> Result<IwahoriWeylElement> {
        let x = IwahoriWeylElement {
            finite_part,
            translation,
        };
        self.check(&x)?;
        Ok(x)
    }

    pub fn translation(&self, lambda: QuotientElement) -> Result<IwahoriWeylElement> {
        self.element(0, lambda)
    }

    fn check(&self, x: &IwahoriWeylElement) -> Result<()> {
        if x.finite_part >= self.weyl.order() {
            return Err(Error::MismatchedAmbient(format!(
                "finite part {} outside a group of order {}",
                x.finite_part,
                self.weyl.order()
            )));
        }
        let p = &self.weyl.coinvariants.presentation;
        if x.translation.free.len() != p.free_rank()
            || x.translation.torsion.len() != p.invariant_factors().len()
        {
            return Err(Error::MismatchedAmbient("translation has the wrong shape".into()));
        }
        Ok(())
    }

    /// `(w1, l1)(w2, l2) = (w1 w2, w2^-1 l1 + l2)`.
    pub fn multiply(&self, x: &IwahoriWeylElement, y: &IwahoriWeylElement) -> Result<IwahoriWeylElement> {
        self.check(x)?;
        self.check(y)?;
        let w1 = &self.weyl.elements[x.finite_part];
        let w2 = &self.weyl.elements[y.finite_part];
        let product = w1.matrix.mul(&w2.matrix)?;
        let finite_part = self
            .weyl
            .index_of(&product)
            .ok_or_else(|| Error::InvariantViolation("relative Weyl group not closed".into()))?;
        let moved = self
            .weyl
            .act_on_class(self.inverses[y.finite_part], &x.translation)?;
        let translation = self.weyl.coinvariants.presentation.add(&moved, &y.translation)?;
        Ok(IwahoriWeylElement {
            finite_part,
            translation,
        })
    }

    pub fn inverse(&self, x: &IwahoriWeylElement) -> Result<IwahoriWeylElement> {
        self.check(x)?;
        // (w, l)^-1 = (w^-1, -w l).
        let moved = self.weyl.act_on_class(x.finite_part, &x.translation)?;
        Ok(IwahoriWeylElement {
            finite_part: self.inverses[x.finite_part],
            translation: self.weyl.coinvariants.presentation.neg(&moved)?,
        })
    }

    /// Right action on the rational apartment `Q ⊗ X_*(T)_I`:
    /// `p . (w, l) = w^-1 p - l`. Translations act by `-l`.
    pub fn affine_action(&self, x: &IwahoriWeylElement, point: &[BigRational]) -> Result<QVector> {
        self.check(x)?;
        let f = self.weyl.coinvariants.free_rank();
        if point.len() != f {
            return Err(Error::DimensionMismatch {
                expected: f,
                found: point.len(),
            });
        }
        let winv = QMatrix::from_int(self.weyl.free_action(self.inverses[x.finite_part]));
        let moved = winv.mul_vec(point);
        Ok(lattice::qsub(&moved, &lattice::to_q(&x.translation.free)))
    }
}
