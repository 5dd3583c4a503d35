//! Named twisted root data.
//!
//! Keys: `SL2`, `PGL2`, `SL3`, `PGL3`, `Sp4`, `G2`, `SL2xSL2-swap`, `SU3`,
//! `PSU3`, `SU4`, `PSU4`, `SU(N)` for `N >= 3`, `Spin8-triality` and
//! `torus-rank-N`.

use crate::abelian::IntMatrix;
use crate::error::{Error, Result};
use crate::galois::{relative_simple_roots, DiagramAutomorphism, OrbitType, TwistedRootDatum};
use crate::lattice::{self, Vector};
use crate::rootdatum::BasedRootDatum;

/// Cartan data of the char-0 fixed-point group of the dual, in the lattice
/// conventions of the twisted datum: simple roots are cocharacters whose
/// classes in `X_*(T)_I` are the folded roots, simple coroots are invariant
/// characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldedCartan {
    pub type_label: String,
    pub simple_roots: Vec<Vector>,
    pub simple_coroots: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preset {
    pub key: String,
    pub description: String,
    pub twisted: TwistedRootDatum,
    pub folded: Option<FoldedCartan>,
}

/// Keys iterated by the verification suites.
pub const STANDARD_KEYS: &[&str] = &[
    "SL2",
    "PGL2",
    "SL3",
    "PGL3",
    "Sp4",
    "G2",
    "SL2xSL2-swap",
    "SU3",
    "PSU3",
    "SU4",
    "PSU4",
    "SU(5)",
    "Spin8-triality",
    "torus-rank-1",
    "torus-rank-2",
];

pub fn all() -> Vec<Preset> {
    STANDARD_KEYS
        .iter()
        .map(|k| lookup(k).expect("standard presets are valid"))
        .collect()
}

fn cartan_a(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match (i as i64 - j as i64).abs() {
                    0 => 2,
                    1 => -1,
                    _ => 0,
                })
                .collect()
        })
        .collect()
}

fn units(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn transpose(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

/// Simply connected: coroots are the standard basis, roots the Cartan columns.
fn simply_connected(name: &str, cartan: &[Vec<i64>]) -> BasedRootDatum {
    let n = cartan.len();
    BasedRootDatum::from_i64(name, n, &transpose(cartan), &units(n))
}

/// Adjoint: roots are the standard basis, coroots the Cartan rows.
fn adjoint(name: &str, cartan: &[Vec<i64>]) -> BasedRootDatum {
    let n = cartan.len();
    BasedRootDatum::from_i64(name, n, &units(n), cartan)
}

/// `e_i -> eps_i - eps_(i+1)` into `Z^(n+1)`.
fn sum_zero_embedding(n: usize) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..=n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    if r == c {
                        1
                    } else if r == c + 1 {
                        -1
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    IntMatrix::from_i64_rows(&rows)
}

fn permutation_automorphism(perm: &[usize]) -> Result<DiagramAutomorphism> {
    let n = perm.len();
    let mut m = IntMatrix::zeros(n, n);
    for (i, &p) in perm.iter().enumerate() {
        m[(p, i)] = 1.into();
    }
    DiagramAutomorphism::new(m, perm.to_vec())
}

/// Folding data read off from the orbits: the root of an orbit is the class
/// of its first simple coroot; its coroot is the orbit sum of simple roots,
/// doubled when the orbit contains an adjacent pair.
pub fn orbit_folding(t: &TwistedRootDatum, type_label: &str) -> FoldedCartan {
    let rel = relative_simple_roots(t);
    let mut simple_roots = Vec::new();
    let mut simple_coroots = Vec::new();
    for (orbit, kind) in rel.orbits.iter().zip(&rel.orbit_types) {
        simple_roots.push(t.base.simple_coroots[orbit[0]].clone());
        let sum = orbit.iter().fold(lattice::zero(t.rank()), |acc, &i| {
            lattice::add(&acc, &t.base.simple_roots[i])
        });
        simple_coroots.push(match kind {
            OrbitType::Orthogonal => sum,
            OrbitType::AdjacentPair => lattice::scale(&2.into(), &sum),
        });
    }
    FoldedCartan {
        type_label: type_label.to_string(),
        simple_roots,
        simple_coroots,
    }
}

fn build(
    key: &str,
    description: &str,
    base: BasedRootDatum,
    perms: &[Vec<usize>],
    folded_type: &str,
) -> Result<Preset> {
    let gens = perms
        .iter()
        .map(|p| permutation_automorphism(p))
        .collect::<Result<Vec<_>>>()?;
    let twisted = TwistedRootDatum::new(base, gens)?;
    let folded = Some(orbit_folding(&twisted, folded_type));
    Ok(Preset {
        key: key.to_string(),
        description: description.to_string(),
        twisted,
        folded,
    })
}

fn flip(n: usize) -> Vec<usize> {
    (0..n).map(|i| n - 1 - i).collect()
}

fn parse_parenthesized(key: &str, prefix: &str) -> Option<usize> {
    key.strip_prefix(prefix)?.strip_suffix(')')?.parse().ok()
}

pub fn lookup(key: &str) -> Result<Preset> {
    let unknown = || Error::UnknownPreset(key.to_string());
    match key {
        "SL2" => build(
            key,
            "split SL2",
            BasedRootDatum::from_i64("SL2", 1, &[vec![2]], &[vec![1]]).with_embedding(sum_zero_embedding(1)),
            &[],
            "A1",
        ),
        "PGL2" => build(
            key,
            "split PGL2",
            BasedRootDatum::from_i64("PGL2", 1, &[vec![1]], &[vec![2]]),
            &[],
            "A1",
        ),
        "SL3" => build(
            key,
            "split SL3",
            simply_connected("SL3", &cartan_a(2)).with_embedding(sum_zero_embedding(2)),
            &[],
            "A2",
        ),
        "PGL3" => build(key, "split PGL3", adjoint("PGL3", &cartan_a(2)), &[], "A2"),
        "Sp4" => build(
            key,
            "split Sp4",
            BasedRootDatum::from_i64("Sp4", 2, &[vec![2, -1], vec![-2, 2]], &units(2)),
            &[],
            "B2",
        ),
        "G2" => build(
            key,
            "split G2",
            BasedRootDatum::from_i64("G2", 2, &[vec![2, -1], vec![-3, 2]], &units(2)),
            &[],
            "G2",
        ),
        "SL2xSL2-swap" => build(
            key,
            "PGL2 x PGL2 with the factors swapped (Weil restriction along a ramified quadratic extension)",
            BasedRootDatum::from_i64("PGL2xPGL2", 2, &units(2), &[vec![2, 0], vec![0, 2]]),
            &[vec![1, 0]],
            "A1",
        ),
        "SU3" => build(
            key,
            "ramified SU3: SL3 with the diagram flip",
            simply_connected("SL3", &cartan_a(2)).with_embedding(sum_zero_embedding(2)),
            &[flip(2)],
            "A1",
        ),
        "PSU3" => build(
            key,
            "ramified PU3: PGL3 with the diagram flip",
            adjoint("PGL3", &cartan_a(2)),
            &[flip(2)],
            "A1",
        ),
        "PSU4" => build(
            key,
            "ramified PU4: PGL4 with the diagram flip",
            adjoint("PGL4", &cartan_a(3)),
            &[flip(3)],
            "C2",
        ),
        "Spin8-triality" => {
            let mut cartan = cartan_a(4);
            // D4: node 1 is joined to 0, 2 and 3.
            cartan[2][3] = 0;
            cartan[3][2] = 0;
            cartan[1][3] = -1;
            cartan[3][1] = -1;
            build(
                key,
                "Spin8 with the triality automorphism",
                simply_connected("Spin8", &cartan),
                &[vec![2, 1, 3, 0]],
                "G2",
            )
        }
        "SU4" => su(4, key),
        _ => {
            if let Some(n) = key.strip_prefix("torus-rank-").and_then(|s| s.parse::<usize>().ok()) {
                if n == 0 || n > 8 {
                    return Err(unknown());
                }
                return build(key, &format!("split torus of rank {n}"), BasedRootDatum::torus(n), &[], "T");
            }
            if let Some(n) = parse_parenthesized(key, "SU(") {
                if !(3..=12).contains(&n) {
                    return Err(unknown());
                }
                return su(n, key);
            }
            Err(unknown())
        }
    }
}

fn su(n: usize, key: &str) -> Result<Preset> {
    let folded = if n % 2 == 1 {
        format!("B{}", n / 2)
    } else {
        format!("C{}", n / 2)
    };
    build(
        key,
        &format!("ramified SU{n}: SL{n} with the diagram flip"),
        simply_connected(&format!("SL{n}"), &cartan_a(n - 1)).with_embedding(sum_zero_embedding(n - 1)),
        &[flip(n - 1)],
        &folded,
    )
}
