//! Dual data: the transported action on the Langlands dual, the fixed-point
//! group `(G^vee)^I` in characteristic zero, rank-one classification and the
//! adjoint quotient.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::abelian::{quotient_group, same_lattice, kernel_basis, FgAbelianGroup, IntMatrix};
use crate::error::{Error, Result};
use crate::galois::{coinvariants, relation_matrix, relative_simple_roots, CoinvariantLattice, DiagramAutomorphism, OrbitType, TwistedRootDatum};
use crate::lattice::{self, Vector};
use crate::presets::{orbit_folding, FoldedCartan};
use crate::rootdatum::BasedRootDatum;
use crate::weyl::{enumerate_absolute_weyl, fixed_weyl_subgroup, relative_weyl, DEFAULT_WEYL_BOUND};

/// Same permutations, contragredient lattice maps, dualized base.
pub fn dual_twisted(t: &TwistedRootDatum) -> Result<TwistedRootDatum> {
    let base = t.base.dualize();
    let gens = t
        .generators
        .iter()
        .map(|g| DiagramAutomorphism::new(g.contragredient(), g.root_permutation.clone()))
        .collect::<Result<Vec<_>>>()?;
    TwistedRootDatum::new(base, gens)
}

/// Coefficients for the dual group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoefficientProfile {
    Char0,
    /// `Z_ell`.
    Zl(u64),
    /// `F_ell`.
    Fl(u64),
}

impl CoefficientProfile {
    pub fn ell(self) -> Option<u64> {
        match self {
            CoefficientProfile::Char0 => None,
            CoefficientProfile::Zl(p) | CoefficientProfile::Fl(p) => Some(p),
        }
    }

    pub fn is_char0(self) -> bool {
        self == CoefficientProfile::Char0
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl FromStr for CoefficientProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "char0" {
            return Ok(CoefficientProfile::Char0);
        }
        let bad = || Error::MalformedInput(format!("coefficient profile {s:?}: expected char0, Zl:<p> or Fl:<p>"));
        let (kind, p) = s.split_once(':').ok_or_else(bad)?;
        let p: u64 = p.parse().map_err(|_| bad())?;
        if !is_prime(p) {
            return Err(Error::MalformedInput(format!("{p} is not prime")));
        }
        match kind {
            "Zl" => Ok(CoefficientProfile::Zl(p)),
            "Fl" => Ok(CoefficientProfile::Fl(p)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for CoefficientProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientProfile::Char0 => write!(f, "char0"),
            CoefficientProfile::Zl(p) => write!(f, "Zl:{p}"),
            CoefficientProfile::Fl(p) => write!(f, "Fl:{p}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

impl TriState {
    pub fn label(self) -> &'static str {
        match self {
            TriState::Yes => "yes",
            TriState::No => "no",
            TriState::Unknown => "unknown",
        }
    }
}

/// A folded datum checked against the twisted datum it came from.
///
/// `datum` lives on the free part of `X_*(T)_I`, read as the character
/// lattice of the fixed torus: its simple roots are the folded roots and its
/// simple coroots the folded coroots as functionals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldedDatum {
    pub type_label: String,
    pub group_label: String,
    pub datum: BasedRootDatum,
    pub weyl_order: usize,
}

fn proportional_positive(a: &[BigInt], b: &[BigInt]) -> bool {
    // a = c * b for some rational c > 0.
    let Some(k) = b.iter().position(|x| !x.is_zero()) else {
        return false;
    };
    if a[k].is_zero() || a[k].is_negative() != b[k].is_negative() {
        return false;
    }
    a.iter().zip(b).all(|(x, y)| x * &b[k] == y * &a[k])
}

fn group_label(d: &BasedRootDatum, type_label: &str) -> String {
    let s = d.semisimple_rank();
    if s == 0 {
        return format!("torus of rank {}", d.rank);
    }
    if d.rank == 1 && s == 1 {
        return if d.simple_roots[0][0].abs() == BigInt::from(2) {
            "SL2".to_string()
        } else {
            "PGL2".to_string()
        };
    }
    let form = if d.is_simply_connected() {
        "simply connected"
    } else if d.is_adjoint() {
        "adjoint"
    } else {
        "isogeny form"
    };
    if d.rank > s {
        format!("{type_label} {form} with central torus of rank {}", d.rank - s)
    } else {
        format!("{type_label} {form}")
    }
}

/// Converts folding data to free coordinates of `X_*(T)_I` and checks it
/// against the Weyl oracle and the dominant cone.
pub fn folded_datum(t: &TwistedRootDatum, folded: &FoldedCartan) -> Result<FoldedDatum> {
    let lat = coinvariants(t)?;
    let rel = relative_simple_roots(t);
    let k = rel.orbits.len();
    let invalid = |m: String| Error::InvalidDatum(format!("folded Cartan data: {m}"));
    if folded.simple_roots.len() != k || folded.simple_coroots.len() != k {
        return Err(invalid(format!(
            "expected {k} simple roots and coroots, one per orbit"
        )));
    }
    let n = t.rank();
    let f = lat.free_rank();
    let tors = lattice::zero(lat.presentation.invariant_factors().len());
    let basis_lifts: Vec<Vector> = (0..f)
        .map(|j| lat.lift(&lat.presentation.element(lattice::unit(f, j), tors.clone())?))
        .collect::<Result<_>>()?;

    let mut roots = Vec::with_capacity(k);
    let mut coroots = Vec::with_capacity(k);
    for (o, orbit) in rel.orbits.iter().enumerate() {
        let r = &folded.simple_roots[o];
        let c = &folded.simple_coroots[o];
        if r.len() != n || c.len() != n {
            return Err(invalid(format!("entry {o} has the wrong length")));
        }
        for g in &t.generators {
            if &g.contragredient().mul_vec(c)? != c {
                return Err(invalid(format!("coroot {o} is not an invariant character")));
            }
        }
        let root_class = lat.class_of(r)?.free;
        let orbit_class = lat.class_of(&t.base.simple_coroots[orbit[0]])?.free;
        if !proportional_positive(&root_class, &orbit_class) {
            return Err(invalid(format!(
                "root {o} is not a positive multiple of the orbit coroot class"
            )));
        }
        let orbit_sum = orbit.iter().fold(lattice::zero(n), |acc, &i| {
            lattice::add(&acc, &t.base.simple_roots[i])
        });
        if !proportional_positive(c, &orbit_sum) {
            return Err(invalid(format!(
                "coroot {o} is not a positive multiple of the orbit root sum"
            )));
        }
        roots.push(root_class);
        coroots.push(basis_lifts.iter().map(|l| lattice::dot(l, c)).collect::<Vector>());
    }
    let datum = BasedRootDatum::new(format!("({})^I", t.base.name), f, roots, coroots);
    let report = datum.validate();
    if let Some(v) = report.violation {
        return Err(invalid(format!("not a root datum: {v}")));
    }
    let weyl_order = enumerate_absolute_weyl(&datum, DEFAULT_WEYL_BOUND)?.len();
    let oracle = fixed_weyl_subgroup(t, DEFAULT_WEYL_BOUND)?.len();
    if weyl_order != oracle {
        return Err(invalid(format!(
            "Weyl group of order {weyl_order}, but the fixed Weyl subgroup has order {oracle}"
        )));
    }
    Ok(FoldedDatum {
        group_label: group_label(&datum, &folded.type_label),
        type_label: folded.type_label.clone(),
        datum,
        weyl_order,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedGroupFlags {
    pub smooth_over_z_ell: TriState,
    pub quasi_reductive_nonreductive_at_2: bool,
    pub connected_char0: TriState,
}

/// `(G^vee)^I` as far as the combinatorics determines it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldedGroupDescriptor {
    pub profile: CoefficientProfile,
    /// Characters of the fixed torus: `X_*(T)_I`.
    pub fixed_torus_characters: CoinvariantLattice,
    pub descended_weyl_order: usize,
    pub folded: Option<FoldedDatum>,
    pub flags: FixedGroupFlags,
}

/// Descriptor for the fixed points of `t_dual`, the dual of a twisted datum
/// `t`; `folding` is expressed in the conventions of `t`.
pub fn fixed_group_descriptor(
    t_dual: &TwistedRootDatum,
    folding: Option<&FoldedCartan>,
    profile: CoefficientProfile,
) -> Result<FoldedGroupDescriptor> {
    let t = dual_twisted(t_dual)?;
    let lat = coinvariants(&t)?;
    let rel = relative_simple_roots(&t);
    let weyl = relative_weyl(&t, DEFAULT_WEYL_BOUND)?;
    let adjacent = rel.has_adjacent_pair();
    let ell = profile.ell();
    let order = t.group_order() as u64;

    let quasi = ell == Some(2) && adjacent;
    let smooth = match ell {
        None => TriState::Yes,
        Some(p) if !order.is_multiple_of(p) => TriState::Yes,
        Some(_) if quasi => TriState::No,
        Some(_) => TriState::Unknown,
    };
    let connected = if lat.group().is_torsion_free() {
        TriState::Yes
    } else {
        TriState::Unknown
    };
    let folded = match folding {
        Some(fc) if !quasi => Some(folded_datum(&t, fc)?),
        _ => None,
    };
    if let Some(fd) = &folded {
        if fd.weyl_order != weyl.order() {
            return Err(Error::InvariantViolation(format!(
                "folded Weyl order {} differs from descended Weyl order {}",
                fd.weyl_order,
                weyl.order()
            )));
        }
    }
    Ok(FoldedGroupDescriptor {
        profile,
        fixed_torus_characters: lat,
        descended_weyl_order: weyl.order(),
        folded,
        flags: FixedGroupFlags {
            smooth_over_z_ell: smooth,
            quasi_reductive_nonreductive_at_2: quasi,
            connected_char0: connected,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RankOneKind {
    /// Orbits of pairwise orthogonal roots.
    A,
    /// An orbit containing an adjacent pair.
    B,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneCase {
    pub case: RankOneKind,
    pub char0_fixed_group: String,
    pub char2_flag: bool,
}

pub fn classify_rank_one(t: &TwistedRootDatum) -> Result<RankOneCase> {
    let rel = relative_simple_roots(t);
    if rel.orbits.len() != 1 {
        return Err(Error::RelativeRankNotOne(rel.orbits.len()));
    }
    let case = match rel.orbit_types[0] {
        OrbitType::Orthogonal => RankOneKind::A,
        OrbitType::AdjacentPair => RankOneKind::B,
    };
    let fd = folded_datum(t, &orbit_folding(t, "A1"))?;
    Ok(RankOneCase {
        case,
        char0_fixed_group: fd.group_label,
        char2_flag: case == RankOneKind::B,
    })
}

/// `X_*(T) -> X_*(T_ad)` and what it does on coinvariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointQuotient {
    pub adjoint: TwistedRootDatum,
    /// `x -> (<x, alpha_j>)_j`.
    pub map: IntMatrix,
    /// Columns spanning the kernel `K` (central cocharacters).
    pub kernel: IntMatrix,
    pub cokernel: FgAbelianGroup,
    /// Cokernel of `X_*(T)_I -> X_*(T_ad)_I`.
    pub coinvariant_cokernel: FgAbelianGroup,
    /// `K_I -> X_*(T)_I -> X_*(T_ad)_I` is exact in the middle.
    pub middle_exact: bool,
    pub is_isomorphism: bool,
}

pub fn adjoint_quotient(t: &TwistedRootDatum) -> Result<AdjointQuotient> {
    let base = &t.base;
    let s = base.semisimple_rank();
    let n = base.rank;
    let cartan: Vec<Vector> = base.cartan_matrix();
    let units: Vec<Vector> = (0..s).map(|i| lattice::unit(s, i)).collect();
    let name = if base.is_adjoint() {
        base.name.clone()
    } else {
        format!("{}_ad", base.name)
    };
    let ad_base = BasedRootDatum::new(name, s, units, cartan);
    let gens = t
        .generators
        .iter()
        .map(|g| {
            let mut m = IntMatrix::zeros(s, s);
            for (i, &p) in g.root_permutation.iter().enumerate() {
                m[(p, i)] = 1.into();
            }
            DiagramAutomorphism::new(m, g.root_permutation.clone())
        })
        .collect::<Result<Vec<_>>>()?;
    let adjoint = TwistedRootDatum::new(ad_base, gens)?;

    let map = IntMatrix::from_rows(s, n, &base.simple_roots)?;
    for (g, gad) in t.generators.iter().zip(&adjoint.generators) {
        if map.mul(&g.lattice_map)? != gad.lattice_map.mul(&map)? {
            return Err(Error::InvariantViolation("adjoint map is not equivariant".into()));
        }
    }
    let kernel = kernel_basis(&map);
    let cokernel = quotient_group(s, &map)?.quotient;

    let r = relation_matrix(t);
    let r_ad = relation_matrix(&adjoint);
    let coinvariant_cokernel = quotient_group(s, &map.hstack(&r_ad)?)?.quotient;

    // f^-1(R_ad) = K + R: the kernel of [f | -R_ad], projected to X_*(T).
    let neg_r_ad = IntMatrix::from_columns(
        s,
        &r_ad.columns().iter().map(|c| lattice::neg(c)).collect::<Vec<_>>(),
    )?;
    let joint = kernel_basis(&map.hstack(&neg_r_ad)?);
    let preimage: Vec<Vector> = joint.columns().iter().map(|c| c[..n].to_vec()).collect();
    let mut k_plus_r = kernel.columns();
    k_plus_r.extend(r.columns());
    let middle_exact = same_lattice(n, &preimage, &k_plus_r)?;

    Ok(AdjointQuotient {
        is_isomorphism: map.is_square() && map.is_unimodular(),
        adjoint,
        map,
        kernel,
        cokernel,
        coinvariant_cokernel,
        middle_exact,
    })
}

/// Folded pairing `<root, coroot>` as a rational, for reports.
pub fn folded_cartan_entries(fd: &FoldedDatum) -> Vec<Vec<BigRational>> {
    fd.datum
        .cartan_matrix()
        .into_iter()
        .map(|row| row.into_iter().map(BigRational::from_integer).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coweights::CoweightSpace;
    use crate::presets;

    fn preset(key: &str) -> presets::Preset {
        presets::lookup(key).unwrap()
    }

    fn descriptor(key: &str, profile: CoefficientProfile) -> FoldedGroupDescriptor {
        let p = preset(key);
        let dual = dual_twisted(&p.twisted).unwrap();
        fixed_group_descriptor(&dual, p.folded.as_ref(), profile).unwrap()
    }

    #[test]
    fn dual_is_an_involution() {
        for key in presets::STANDARD_KEYS {
            let t = preset(key).twisted;
            let dd = dual_twisted(&dual_twisted(&t).unwrap()).unwrap();
            assert_eq!(dd.base.simple_roots, t.base.simple_roots, "{key}");
            assert_eq!(dd.base.simple_coroots, t.base.simple_coroots, "{key}");
            assert_eq!(dd.group_elements, t.group_elements, "{key}");
        }
    }

    #[test]
    fn dual_of_pgl2_is_sl2() {
        let d = dual_twisted(&preset("PGL2").twisted).unwrap();
        assert_eq!(d.base.simple_roots, preset("SL2").twisted.base.simple_roots);
        assert_eq!(d.base.simple_coroots, preset("SL2").twisted.base.simple_coroots);
    }

    #[test]
    fn profiles_parse() {
        assert_eq!("char0".parse::<CoefficientProfile>().unwrap(), CoefficientProfile::Char0);
        assert_eq!("Zl:3".parse::<CoefficientProfile>().unwrap(), CoefficientProfile::Zl(3));
        assert_eq!("Fl:2".parse::<CoefficientProfile>().unwrap(), CoefficientProfile::Fl(2));
        assert!("Fl:4".parse::<CoefficientProfile>().is_err());
        assert!("Ql:5".parse::<CoefficientProfile>().is_err());
    }

    #[test]
    fn fixed_groups() {
        let swap = descriptor("SL2xSL2-swap", CoefficientProfile::Char0);
        let fd = swap.folded.unwrap();
        assert_eq!(fd.group_label, "SL2");
        assert_eq!(swap.fixed_torus_characters.free_rank(), 1);
        assert_eq!(swap.descended_weyl_order, 2);

        let su3 = descriptor("SU3", CoefficientProfile::Char0);
        assert_eq!(su3.folded.unwrap().group_label, "PGL2");
        assert!(!su3.flags.quasi_reductive_nonreductive_at_2);

        let su3_2 = descriptor("SU3", CoefficientProfile::Fl(2));
        assert!(su3_2.flags.quasi_reductive_nonreductive_at_2);
        assert!(su3_2.folded.is_none());
        assert_eq!(su3_2.flags.smooth_over_z_ell, TriState::No);

        let su3_3 = descriptor("SU3", CoefficientProfile::Zl(3));
        assert_eq!(su3_3.flags.smooth_over_z_ell, TriState::Yes);
        let su4_2 = descriptor("SU4", CoefficientProfile::Zl(2));
        assert!(!su4_2.flags.quasi_reductive_nonreductive_at_2);
        assert_eq!(su4_2.flags.smooth_over_z_ell, TriState::Unknown);
    }

    #[test]
    fn torus_matches_coinvariants() {
        for key in presets::STANDARD_KEYS {
            let p = preset(key);
            let d = descriptor(key, CoefficientProfile::Char0);
            let lat = coinvariants(&p.twisted).unwrap();
            assert_eq!(d.fixed_torus_characters.group(), lat.group(), "{key}");
            assert_eq!(d.fixed_torus_characters.presentation, lat.presentation, "{key}");
        }
    }

    #[test]
    fn folded_weyl_orders() {
        for (key, n) in [("SU3", 2), ("SU4", 8), ("Spin8-triality", 12), ("SU(5)", 8), ("G2", 12)] {
            let d = descriptor(key, CoefficientProfile::Char0);
            assert_eq!(d.folded.unwrap().weyl_order, n, "{key}");
        }
    }

    #[test]
    fn wrong_folding_is_rejected() {
        let p = preset("SU3");
        let mut bad = p.folded.clone().unwrap();
        bad.simple_coroots[0] = lattice::neg(&bad.simple_coroots[0]);
        assert!(matches!(folded_datum(&p.twisted, &bad), Err(Error::InvalidDatum(_))));
        let mut bad = p.folded.unwrap();
        bad.simple_roots.clear();
        assert!(matches!(folded_datum(&p.twisted, &bad), Err(Error::InvalidDatum(_))));
    }

    #[test]
    fn rank_one() {
        let swap = classify_rank_one(&preset("SL2xSL2-swap").twisted).unwrap();
        assert_eq!((swap.case, swap.char0_fixed_group.as_str(), swap.char2_flag), (RankOneKind::A, "SL2", false));
        let pgl2 = classify_rank_one(&preset("PGL2").twisted).unwrap();
        assert_eq!((pgl2.case, pgl2.char0_fixed_group.as_str()), (RankOneKind::A, "SL2"));
        let su3 = classify_rank_one(&preset("SU3").twisted).unwrap();
        assert_eq!((su3.case, su3.char0_fixed_group.as_str(), su3.char2_flag), (RankOneKind::B, "PGL2", true));
        assert_eq!(
            classify_rank_one(&preset("SU4").twisted),
            Err(Error::RelativeRankNotOne(2))
        );
    }

    #[test]
    fn adjoint_quotients() {
        let sl2 = adjoint_quotient(&preset("SL2").twisted).unwrap();
        assert_eq!(sl2.map, IntMatrix::from_i64_rows(&[vec![2]]));
        assert_eq!(sl2.cokernel.invariant_factors, lattice::vector(&[2]));
        assert!(sl2.middle_exact);

        let su3 = adjoint_quotient(&preset("SU3").twisted).unwrap();
        assert_eq!(su3.adjoint.base.simple_coroots, preset("PSU3").twisted.base.simple_coroots);
        assert_eq!(su3.cokernel.invariant_factors, lattice::vector(&[3]));
        assert!(su3.middle_exact);

        let pgl3 = adjoint_quotient(&preset("PGL3").twisted).unwrap();
        assert!(pgl3.is_isomorphism);

        for key in presets::STANDARD_KEYS {
            let aq = adjoint_quotient(&preset(key).twisted).unwrap();
            assert!(aq.middle_exact, "{key}");
            let space = CoweightSpace::new(&aq.adjoint).unwrap();
            assert!(space.components.quotient.free_rank == 0, "{key}");
            assert!(space.center_is_torus().unwrap(), "{key}");
        }
    }
}
