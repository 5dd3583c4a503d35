//! Dominance on `X_*(T)` and `X_*(T)_I`: dominant classes, the order given
//! by orbit coroots, representatives of `W_0`-orbits and the projection of
//! dominant cones.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::abelian::{quotient_group, smith_normal_form, IntMatrix, QMatrix, QuotientElement, QuotientPresentation, SmithDecomposition};
use crate::error::{Error, Result};
use crate::galois::{coinvariants, kottwitz_presentation, relation_matrix, relative_simple_roots, CoinvariantLattice, RelativeRootData, TwistedRootDatum};
use crate::lattice::{self, Vector};
use crate::weyl::{relative_weyl, RelativeWeylGroup, DEFAULT_WEYL_BOUND};

/// Half-width of the box used for directions with zero pairing against all
/// roots (central cocharacters), which no height bound constrains.
pub const DEFAULT_CENTRAL_RADIUS: i64 = 2;

const MAX_CANDIDATES: usize = 5_000_000;

/// A dominant class with its pairings, one per orbit, against the simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominantClass {
    pub class: QuotientElement,
    pub certificate: Vec<BigRational>,
}

/// Nonnegative coefficients of `mu - lambda` on the orbit coroot classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderCertificate {
    pub coefficients: Vec<BigInt>,
}

/// Result of projecting bounded absolute dominant cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominantImage {
    pub height_bound: BigInt,
    /// Dominant classes of height at most the bound.
    pub cone: Vec<QuotientElement>,
    /// Those reached from a dominant cocharacter, with one such cocharacter.
    pub image: Vec<(QuotientElement, Vector)>,
}

impl DominantImage {
    pub fn image_classes(&self) -> Vec<QuotientElement> {
        self.image.iter().map(|(c, _)| c.clone()).collect()
    }

    pub fn missing(&self) -> Vec<QuotientElement> {
        let hit: BTreeSet<&QuotientElement> = self.image.iter().map(|(c, _)| c).collect();
        self.cone.iter().filter(|c| !hit.contains(c)).cloned().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectivityReport {
    /// `X_*(T) -> X_*(T_ad)` is surjective, i.e. the center is a torus.
    pub center_is_torus: bool,
    pub surjective_observed: bool,
    pub height_bound: BigInt,
    pub missing: Vec<QuotientElement>,
}

/// Integer solver reusing one Smith decomposition.
#[derive(Clone, Debug)]
struct Solver {
    smith: SmithDecomposition,
    cols: usize,
}

impl Solver {
    fn new(a: &IntMatrix) -> Self {
        Self {
            smith: smith_normal_form(a),
            cols: a.cols(),
        }
    }

    fn solve(&self, b: &[BigInt]) -> Option<Vector> {
        let y = self.smith.u.mul_vec(b).ok()?;
        let diag = self.smith.diagonal();
        let mut z = lattice::zero(self.cols);
        for (i, yi) in y.iter().enumerate() {
            if i < diag.len() {
                let (q, r) = yi.div_rem(&diag[i]);
                if !r.is_zero() {
                    return None;
                }
                z[i] = q;
            } else if !yi.is_zero() {
                return None;
            }
        }
        self.smith.v.mul_vec(&z).ok()
    }
}

/// Everything needed to reason about coweights of one twisted datum.
#[derive(Clone, Debug)]
pub struct CoweightSpace {
    pub twisted: TwistedRootDatum,
    pub lattice: CoinvariantLattice,
    pub relative: RelativeRootData,
    pub weyl: RelativeWeylGroup,
    pub two_rho: Vector,
    /// `pi_1(G)_I`.
    pub components: QuotientPresentation,
    pub central_radius: i64,
    /// `sum_g g^T alpha_O`: pairing a cocharacter with it gives `|I|` times
    /// the pairing of its average with the orbit's simple roots.
    orbit_functionals: Vec<Vector>,
    orbit_coroots: Vec<Vector>,
    order_solver: Solver,
    /// Solves `S^T R y = b` for preimage searches.
    preimage_solver: Option<Solver>,
    /// `w^T 2rho` for each element of `W_0`.
    twisted_rhos: Vec<Vector>,
}

impl CoweightSpace {
    pub fn new(t: &TwistedRootDatum) -> Result<Self> {
        let lattice = coinvariants(t)?;
        let relative = relative_simple_roots(t);
        let weyl = relative_weyl(t, DEFAULT_WEYL_BOUND)?;
        let two_rho = t.base.rho_data()?.two_rho;
        let components = kottwitz_presentation(t)?;
        let n = t.rank();

        let orbit_functionals = relative
            .orbits
            .iter()
            .map(|o| {
                let alpha = &t.base.simple_roots[o[0]];
                t.group_elements.iter().fold(lattice::zero(n), |acc, g| {
                    let v = g.lattice_map.transpose().mul_vec(alpha).expect("square");
                    lattice::add(&acc, &v)
                })
            })
            .collect();
        let orbit_coroots: Vec<Vector> = relative
            .orbits
            .iter()
            .map(|o| t.base.simple_coroots[o[0]].clone())
            .collect();

        let relations = relation_matrix(t);
        let mut order_cols = orbit_coroots.clone();
        order_cols.extend(relations.columns());
        let order_matrix = IntMatrix::from_columns(n, &order_cols)?;
        if order_matrix.rank() != orbit_coroots.len() + relations.rank() {
            return Err(Error::InvariantViolation(
                "orbit coroot classes are linearly dependent in the coinvariants".into(),
            ));
        }
        let order_solver = Solver::new(&order_matrix);

        let preimage_solver = if relations.cols() == 0 {
            None
        } else {
            let st = IntMatrix::from_rows(t.base.semisimple_rank(), n, &t.base.simple_roots)?;
            Some(Solver::new(&st.mul(&relations)?))
        };

        let twisted_rhos = weyl
            .elements
            .iter()
            .map(|w| w.matrix.transpose().mul_vec(&two_rho).expect("square"))
            .collect();

        for g in &t.generators {
            if g.contragredient().mul_vec(&two_rho)? != two_rho {
                return Err(Error::InvariantViolation("2rho is not invariant".into()));
            }
        }

        Ok(Self {
            twisted: t.clone(),
            lattice,
            relative,
            weyl,
            two_rho,
            components,
            central_radius: DEFAULT_CENTRAL_RADIUS,
            orbit_functionals,
            orbit_coroots,
            order_solver,
            preimage_solver,
            twisted_rhos,
        })
    }

    pub fn with_central_radius(mut self, radius: i64) -> Self {
        self.central_radius = radius;
        self
    }

    fn order_of_group(&self) -> BigInt {
        BigInt::from(self.twisted.group_order())
    }

    pub fn lift(&self, c: &QuotientElement) -> Result<Vector> {
        self.lattice.lift(c)
    }

    pub fn class_of(&self, v: &[BigInt]) -> Result<QuotientElement> {
        self.lattice.class_of(v)
    }

    /// `<lambda, 2 rho>`, evaluated on a lift.
    pub fn height(&self, c: &QuotientElement) -> Result<BigInt> {
        Ok(lattice::dot(&self.lift(c)?, &self.two_rho))
    }

    /// `<a(c), alpha_O>` for each orbit `O`.
    pub fn pairings(&self, c: &QuotientElement) -> Result<Vec<BigRational>> {
        let lift = self.lift(c)?;
        Ok(self.pairings_of_lift(&lift))
    }

    fn pairings_of_lift(&self, lift: &[BigInt]) -> Vec<BigRational> {
        let k = self.order_of_group();
        self.orbit_functionals
            .iter()
            .map(|f| BigRational::new(lattice::dot(lift, f), k.clone()))
            .collect()
    }

    pub fn is_dominant_class(&self, c: &QuotientElement) -> Result<Option<DominantClass>> {
        let certificate = self.pairings(c)?;
        if certificate.iter().any(|p| p.is_negative()) {
            return Ok(None);
        }
        Ok(Some(DominantClass {
            class: c.clone(),
            certificate,
        }))
    }

    /// The unique dominant class in the `W_0`-orbit of `c`, and the index of
    /// one Weyl element carrying `c` to it.
    pub fn dominant_representative(&self, c: &QuotientElement) -> Result<(DominantClass, usize)> {
        let mut found: Option<(DominantClass, usize)> = None;
        for w in 0..self.weyl.order() {
            let image = self.weyl.act_on_class(w, c)?;
            if let Some(d) = self.is_dominant_class(&image)? {
                match &found {
                    None => found = Some((d, w)),
                    Some((prev, _)) if prev.class != d.class => {
                        return Err(Error::InvariantViolation(format!(
                            "orbit of {c} contains two dominant classes {} and {}",
                            prev.class, d.class
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        found.ok_or_else(|| Error::InvariantViolation(format!("orbit of {c} has no dominant class")))
    }

    /// The `W_0`-orbit of `c`.
    pub fn orbit(&self, c: &QuotientElement) -> Result<BTreeSet<QuotientElement>> {
        (0..self.weyl.order())
            .map(|w| self.weyl.act_on_class(w, c))
            .collect()
    }

    /// `lambda <= mu` with its certificate.
    pub fn leq(&self, lambda: &QuotientElement, mu: &QuotientElement) -> Result<Option<OrderCertificate>> {
        let diff = lattice::sub(&self.lift(mu)?, &self.lift(lambda)?);
        let Some(sol) = self.order_solver.solve(&diff) else {
            return Ok(None);
        };
        let coefficients: Vec<BigInt> = sol[..self.orbit_coroots.len()].to_vec();
        if coefficients.iter().any(|c| c.is_negative()) {
            return Ok(None);
        }
        Ok(Some(OrderCertificate { coefficients }))
    }

    /// Checks a certificate independently of how it was found.
    pub fn check_certificate(
        &self,
        lambda: &QuotientElement,
        mu: &QuotientElement,
        cert: &OrderCertificate,
    ) -> Result<bool> {
        if cert.coefficients.iter().any(|c| c.is_negative()) {
            return Ok(false);
        }
        let mut v = self.lift(lambda)?;
        for (c, a) in cert.coefficients.iter().zip(&self.orbit_coroots) {
            v = lattice::add(&v, &lattice::scale(c, a));
        }
        Ok(self.class_of(&v)? == *mu)
    }

    /// Class of `alpha^vee_O` for each orbit.
    pub fn orbit_coroot_classes(&self) -> Result<Vec<QuotientElement>> {
        self.orbit_coroots.iter().map(|v| self.class_of(v)).collect()
    }

    pub fn orbit_coroot_lifts(&self) -> &[Vector] {
        &self.orbit_coroots
    }

    pub fn is_dominant_cocharacter(&self, lambda: &[BigInt]) -> bool {
        self.twisted
            .base
            .simple_roots
            .iter()
            .all(|a| !lattice::dot(lambda, a).is_negative())
    }

    pub fn project_dominant(&self, lambda: &[BigInt]) -> Result<DominantClass> {
        if lambda.len() != self.twisted.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.twisted.rank(),
                found: lambda.len(),
            });
        }
        if !self.is_dominant_cocharacter(lambda) {
            return Err(Error::NotDominant(lattice::fmt_vector(lambda)));
        }
        let class = self.class_of(lambda)?;
        self.is_dominant_class(&class)?.ok_or_else(|| {
            Error::InvariantViolation(format!("dominant cocharacter projects to non-dominant {class}"))
        })
    }

    /// Connected component of the class: its image in `pi_1(G)_I`.
    pub fn component_of(&self, c: &QuotientElement) -> Result<QuotientElement> {
        self.components.class_of(&self.lift(c)?)
    }

    fn torsion_tuples(&self) -> Vec<Vector> {
        let mut out: Vec<Vector> = vec![Vec::new()];
        for d in self.lattice.presentation.invariant_factors() {
            let mut next = Vec::new();
            for prefix in &out {
                let mut x = BigInt::zero();
                while &x < d {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    next.push(v);
                    x += 1;
                }
            }
            out = next;
        }
        out
    }

    /// Classes whose orbit pairings lie in `[lo, hi]` (scaled by `|I|`) and
    /// whose central coordinates lie in the central box.
    fn candidates(&self, lo: &BigInt, hi: &BigInt) -> Result<Vec<QuotientElement>> {
        self.candidates_where(lo, hi, |_, _| true)
    }

    /// As `candidates`, keeping only free parts `x` for which `keep(x, M x)`
    /// holds, where `M x` are the scaled orbit pairings.
    #[allow(clippy::needless_range_loop)]
    fn candidates_where(
        &self,
        lo: &BigInt,
        hi: &BigInt,
        keep: impl Fn(&[BigInt], &[BigInt]) -> bool,
    ) -> Result<Vec<QuotientElement>> {
        let f = self.lattice.free_rank();
        let k = self.orbit_functionals.len();
        let m = self.pairing_matrix()?;
        let smith = smith_normal_form(&m);
        let diag = smith.diagonal();
        let r = diag.len();
        // y_j = (U t)_j / d_j for t = M x, with t in [lo, hi]^k.
        let mut ranges: Vec<(BigInt, BigInt)> = Vec::with_capacity(f);
        for j in 0..f {
            if j < r {
                let (mut a, mut b) = (BigInt::zero(), BigInt::zero());
                for o in 0..k {
                    let u = &smith.u[(j, o)];
                    let (x, y) = (u * lo, u * hi);
                    a += x.clone().min(y.clone());
                    b += x.max(y);
                }
                ranges.push((a.div_floor(&diag[j]), b.div_ceil(&diag[j])));
            } else {
                let rad = BigInt::from(self.central_radius);
                ranges.push((-rad.clone(), rad));
            }
        }
        let mut count = BigInt::one();
        for (a, b) in &ranges {
            count *= b - a + 1;
        }
        count *= self.torsion_tuples().len();
        if count > BigInt::from(MAX_CANDIDATES) {
            return Err(Error::BoundExceeded {
                what: "coweight candidates",
                bound: MAX_CANDIDATES,
            });
        }
        let torsion = self.torsion_tuples();
        let mut out = Vec::new();
        let mut y: Vec<BigInt> = ranges.iter().map(|(a, _)| a.clone()).collect();
        loop {
            let x = smith.v.mul_vec(&y)?;
            if keep(&x, &m.mul_vec(&x)?) {
                for t in &torsion {
                    out.push(self.lattice.presentation.element(x.clone(), t.clone())?);
                }
            }
            let mut j = 0;
            loop {
                if j == f {
                    return Ok(out);
                }
                y[j] += 1;
                if y[j] <= ranges[j].1 {
                    break;
                }
                y[j] = ranges[j].0.clone();
                j += 1;
            }
        }
    }

    /// Scaled orbit pairings of the free basis classes, one row per orbit.
    fn pairing_matrix(&self) -> Result<IntMatrix> {
        let f = self.lattice.free_rank();
        let mut m = IntMatrix::zeros(self.orbit_functionals.len(), f);
        let tors_zero = lattice::zero(self.lattice.presentation.invariant_factors().len());
        for j in 0..f {
            let e = self
                .lattice
                .presentation
                .element(lattice::unit(f, j), tors_zero.clone())?;
            let lift = self.lift(&e)?;
            for (o, func) in self.orbit_functionals.iter().enumerate() {
                m[(o, j)] = lattice::dot(&lift, func);
            }
        }
        Ok(m)
    }

    /// Free parts of dominant classes with height at most the bound, found by
    /// walking the pairings `t = M x` over the simplex `t >= 0, w.t <= bound`
    /// where `h = w M`. `None` when the height is not such a positive
    /// combination of the pairings.
    fn dominant_free_parts(&self, height_bound: &BigInt) -> Result<Option<Vec<Vector>>> {
        let m = self.pairing_matrix()?;
        let (k, f) = (m.rows(), m.cols());
        let smith = smith_normal_form(&m);
        let diag = smith.diagonal();
        if diag.len() < k {
            return Ok(None);
        }
        let h = lattice::to_q(&self.height_functional()?);
        let Some(w) = QMatrix::from_int(&m.transpose()).solve(&h) else {
            return Ok(None);
        };
        if w.iter().any(|x| !x.is_positive()) {
            return Ok(None);
        }
        let pairings = simplex_points(&w, &BigRational::from_integer(height_bound.clone()));
        let rad = self.central_radius;
        let mut out = Vec::new();
        for t in pairings {
            let ut = smith.u.mul_vec(&t)?;
            let mut y = Vec::with_capacity(f);
            for j in 0..k {
                if !(&ut[j] % &diag[j]).is_zero() {
                    break;
                }
                y.push(&ut[j] / &diag[j]);
            }
            if y.len() < k {
                continue;
            }
            let mut central = vec![-rad; f - k];
            loop {
                let mut full = y.clone();
                full.extend(central.iter().map(|&c| BigInt::from(c)));
                out.push(smith.v.mul_vec(&full)?);
                let Some(j) = central.iter().position(|&c| c < rad) else {
                    break;
                };
                central[j] += 1;
                for c in &mut central[..j] {
                    *c = -rad;
                }
            }
        }
        Ok(Some(out))
    }

    /// `<., 2rho>` on the free coordinates; it vanishes on torsion.
    fn height_functional(&self) -> Result<Vector> {
        let f = self.lattice.free_rank();
        let tors_zero = lattice::zero(self.lattice.presentation.invariant_factors().len());
        (0..f)
            .map(|j| {
                let e = self.lattice.presentation.element(lattice::unit(f, j), tors_zero.clone())?;
                self.height(&e)
            })
            .collect()
    }

    /// Dominant classes with `<lambda, 2rho> <= height_bound`, sorted by
    /// height and then by class.
    pub fn bounded_dominant(&self, height_bound: &BigInt) -> Result<Vec<QuotientElement>> {
        let hi = height_bound * self.order_of_group();
        let heights = self.height_functional()?;
        let mut found: Vec<(BigInt, QuotientElement)> = Vec::new();
        let keep = |x: &[BigInt], pairings: &[BigInt]| {
            pairings.iter().all(|p| !p.is_negative()) && &lattice::dot(x, &heights) <= height_bound
        };
        let candidates = match self.dominant_free_parts(height_bound)? {
            Some(xs) => {
                let torsion = self.torsion_tuples();
                let mut out = Vec::with_capacity(xs.len() * torsion.len());
                for x in xs {
                    for t in &torsion {
                        out.push(self.lattice.presentation.element(x.clone(), t.clone())?);
                    }
                }
                out
            }
            None => self.candidates_where(&BigInt::zero(), &hi, keep)?,
        };
        for c in candidates {
            let lift = self.lift(&c)?;
            let h = lattice::dot(&lift, &self.two_rho);
            if &h <= height_bound && self.pairings_of_lift(&lift).iter().all(|p| !p.is_negative()) {
                found.push((h, c));
            }
        }
        found.sort();
        found.dedup();
        Ok(found.into_iter().map(|(_, c)| c).collect())
    }

    /// The `W_0`-stable ball: classes whose orbit stays within the height
    /// bound.
    pub fn ball(&self, height_bound: &BigInt) -> Result<BTreeSet<QuotientElement>> {
        let hi = height_bound * self.order_of_group();
        let mut out = BTreeSet::new();
        for c in self.candidates(&-hi.clone(), &hi)? {
            let lift = self.lift(&c)?;
            if self
                .twisted_rhos
                .iter()
                .all(|r| &lattice::dot(&lift, r) <= height_bound)
            {
                out.insert(c);
            }
        }
        Ok(out)
    }

    /// Checks that every `W_0`-orbit in the ball meets the dominant cone
    /// exactly once. Returns the number of orbits.
    pub fn check_orbit_representatives(&self, height_bound: &BigInt) -> Result<usize> {
        let ball = self.ball(height_bound)?;
        let dominant = self.bounded_dominant(height_bound)?;
        let mut owner: BTreeMap<QuotientElement, QuotientElement> = BTreeMap::new();
        for d in &dominant {
            for x in self.orbit(d)? {
                if !ball.contains(&x) {
                    return Err(Error::InvariantViolation(format!(
                        "orbit of dominant {d} leaves the ball at {x}"
                    )));
                }
                if let Some(prev) = owner.insert(x.clone(), d.clone()) {
                    if prev != *d {
                        return Err(Error::InvariantViolation(format!(
                            "{x} lies in the orbits of both {prev} and {d}"
                        )));
                    }
                }
            }
        }
        if let Some(x) = ball.iter().find(|x| !owner.contains_key(*x)) {
            return Err(Error::InvariantViolation(format!(
                "{x} lies in the ball but in no orbit of a bounded dominant class"
            )));
        }
        for x in &ball {
            let (rep, _) = self.dominant_representative(x)?;
            if owner[x] != rep.class {
                return Err(Error::InvariantViolation(format!(
                    "representative of {x} disagrees with the orbit scan"
                )));
            }
        }
        Ok(dominant.len())
    }

    /// A dominant cocharacter in the class, if one exists.
    ///
    /// A dominant lift has pairings `q_i >= 0` with `sum_{i in O} q_i =
    /// |O| p_O`; each such pattern is tested by solving for a lift.
    pub fn dominant_preimage(&self, c: &QuotientElement) -> Result<Option<Vector>> {
        let base = &self.twisted.base;
        let lift = self.lift(c)?;
        let pairings = self.pairings_of_lift(&lift);
        let mut per_orbit: Vec<Vec<Vec<BigInt>>> = Vec::new();
        for (o, p) in self.relative.orbits.iter().zip(&pairings) {
            let total = p * BigRational::from_integer(BigInt::from(o.len()));
            if !total.is_integer() || total.is_negative() {
                return Ok(None);
            }
            per_orbit.push(compositions(&total.to_integer(), o.len()));
        }
        let current: Vec<BigInt> = base
            .simple_roots
            .iter()
            .map(|a| lattice::dot(&lift, a))
            .collect();
        let mut choice = vec![0usize; per_orbit.len()];
        loop {
            let mut q = vec![BigInt::zero(); base.semisimple_rank()];
            for (k, o) in self.relative.orbits.iter().enumerate() {
                for (slot, &i) in o.iter().enumerate() {
                    q[i] = per_orbit[k][choice[k]][slot].clone();
                }
            }
            let rhs = lattice::sub(&q, &current);
            match &self.preimage_solver {
                None => {
                    if lattice::is_zero(&rhs) {
                        return Ok(Some(lift));
                    }
                }
                Some(solver) => {
                    if let Some(y) = solver.solve(&rhs) {
                        let r = relation_matrix(&self.twisted).mul_vec(&y)?;
                        return Ok(Some(lattice::add(&lift, &r)));
                    }
                }
            }
            let mut k = 0;
            loop {
                if k == choice.len() {
                    return Ok(None);
                }
                choice[k] += 1;
                if choice[k] < per_orbit[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    /// Image of the dominant cone of `X_*(T)` in the bounded dominant cone of
    /// `X_*(T)_I`.
    pub fn dominant_image_monoid(&self, height_bound: &BigInt) -> Result<DominantImage> {
        let cone = self.bounded_dominant(height_bound)?;
        let mut image = Vec::new();
        for c in &cone {
            if let Some(v) = self.dominant_preimage(c)? {
                let projected = self.project_dominant(&v)?;
                if projected.class != *c {
                    return Err(Error::InvariantViolation(format!(
                        "preimage of {c} projects to {}",
                        projected.class
                    )));
                }
                image.push((c.clone(), v));
            }
        }
        Ok(DominantImage {
            height_bound: height_bound.clone(),
            cone,
            image,
        })
    }

    /// `X_*(T) -> Hom(Z Phi, Z)` is onto.
    pub fn center_is_torus(&self) -> Result<bool> {
        let base = &self.twisted.base;
        let s = base.semisimple_rank();
        if s == 0 {
            return Ok(true);
        }
        let st = IntMatrix::from_rows(s, base.rank, &base.simple_roots)?;
        let smith = smith_normal_form(&st);
        let diag = smith.diagonal();
        Ok(diag.len() == s && diag.iter().all(|d| d.is_one()))
    }

    pub fn surjectivity_conditions(&self, height_bound: &BigInt) -> Result<SurjectivityReport> {
        let image = self.dominant_image_monoid(height_bound)?;
        let missing = image.missing();
        Ok(SurjectivityReport {
            center_is_torus: self.center_is_torus()?,
            surjective_observed: missing.is_empty(),
            height_bound: height_bound.clone(),
            missing,
        })
    }
}

/// Ordered tuples of `parts` nonnegative integers summing to `total`.
fn compositions(total: &BigInt, parts: usize) -> Vec<Vec<BigInt>> {
    if parts == 1 {
        return vec![vec![total.clone()]];
    }
    let mut out = Vec::new();
    let mut first = BigInt::zero();
    while &first <= total {
        for mut rest in compositions(&(total - &first), parts - 1) {
            rest.insert(0, first.clone());
            out.push(rest);
        }
        first += 1;
    }
    out
}

/// `X_*(T) / (Z Phi^vee + (1 - I) X_*(T))` is also the quotient of the
/// coinvariants by the orbit coroot classes; used as a cross-check.
/// Nonnegative integer points `t` with `w.t <= bound`, for positive `w`.
fn simplex_points(w: &[BigRational], bound: &BigRational) -> Vec<Vector> {
    let k = w.len();
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut points = Vec::new();
    let mut t = vec![BigInt::zero(); k];
    let mut spent = vec![BigRational::zero(); k + 1];
    let mut o = 0;
    // Depth-first with t[o] increasing while the budget allows.
    loop {
        if o == k {
            points.push(t.clone());
            o -= 1;
        } else {
            spent[o + 1] = &spent[o] + &w[o] * BigRational::from_integer(t[o].clone());
            if spent[o + 1] <= *bound {
                o += 1;
                if o < k {
                    t[o] = BigInt::zero();
                }
                continue;
            }
            if o == 0 {
                return points;
            }
            o -= 1;
        }
        t[o] += 1;
    }
}

pub fn components_via_orbit_classes(space: &CoweightSpace) -> Result<crate::abelian::FgAbelianGroup> {
    let n = space.twisted.rank();
    let mut cols = space.orbit_coroots.clone();
    cols.extend(relation_matrix(&space.twisted).columns());
    Ok(quotient_group(n, &IntMatrix::from_columns(n, &cols)?)?.quotient)
}
