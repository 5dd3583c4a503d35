//! Library results against brute-force oracles written from scratch here.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use twisted_satake::abelian::same_lattice;
use twisted_satake::coweights::CoweightSpace;
use twisted_satake::galois::{coinvariants, kottwitz_components, relation_matrix, TwistedRootDatum};
use twisted_satake::lattice::{self, vector, Vector};
use twisted_satake::presets::{self, STANDARD_KEYS};
use twisted_satake::rep::{decompose_tensor, irreducible_character};
use twisted_satake::rootdatum::BasedRootDatum;
use twisted_satake::weyl::{enumerate_absolute_weyl, fixed_weyl_subgroup, DEFAULT_WEYL_BOUND};

type Laurent = BTreeMap<Vec<i64>, i64>;

fn small(v: &[BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().unwrap()).collect()
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Weyl group on characters as (matrix, sign), closed under simple reflections.
fn weyl_on_characters(d: &BasedRootDatum) -> Vec<(Vec<Vec<i64>>, i64)> {
    let n = d.rank;
    let roots: Vec<Vec<i64>> = d.simple_roots.iter().map(|r| small(r)).collect();
    let coroots: Vec<Vec<i64>> = d.simple_coroots.iter().map(|r| small(r)).collect();
    let reflect = |m: &Vec<Vec<i64>>, i: usize| -> Vec<Vec<i64>> {
        // s_i after m, acting on columns: x -> x - <c_i, x> a_i.
        let mut out = m.clone();
        for col in 0..n {
            let x: Vec<i64> = (0..n).map(|r| m[r][col]).collect();
            let p = dot(&coroots[i], &x);
            for r in 0..n {
                out[r][col] = x[r] - p * roots[i][r];
            }
        }
        out
    };
    let id: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut seen: BTreeMap<Vec<Vec<i64>>, i64> = BTreeMap::from([(id.clone(), 1)]);
    let mut frontier = vec![id];
    while let Some(m) = frontier.pop() {
        let sign = seen[&m];
        for i in 0..roots.len() {
            let next = reflect(&m, i);
            if !seen.contains_key(&next) {
                seen.insert(next.clone(), -sign);
                frontier.push(next);
            }
        }
    }
    seen.into_iter().collect()
}

fn apply(m: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    m.iter().map(|row| dot(row, x)).collect()
}

fn alternant(w: &[(Vec<Vec<i64>>, i64)], mu: &[i64]) -> Laurent {
    let mut out = Laurent::new();
    for (m, s) in w {
        *out.entry(apply(m, mu)).or_insert(0) += s;
    }
    out.retain(|_, c| *c != 0);
    out
}

fn multiply(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (x, p) in a {
        for (y, q) in b {
            let z: Vec<i64> = x.iter().zip(y).map(|(u, v)| u + v).collect();
            *out.entry(z).or_insert(0) += p * q;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn two_rho(d: &BasedRootDatum) -> Vec<i64> {
    small(&d.rho_data().unwrap().two_rho)
}

fn two_rho_vee(d: &BasedRootDatum) -> Vec<i64> {
    let sys = d.full_root_system().unwrap();
    sys.positive().fold(vec![0; d.rank], |acc, r| {
        acc.iter().zip(small(&r.coroot)).map(|(a, b)| a + b).collect()
    })
}

/// Dominant weights in a box, with `<lambda, 2rho^vee>` at most `h`.
fn dominant_weights(d: &BasedRootDatum, radius: i64, h: i64) -> Vec<Vec<i64>> {
    let coroots: Vec<Vec<i64>> = d.simple_coroots.iter().map(|r| small(r)).collect();
    let tv = two_rho_vee(d);
    let mut out = Vec::new();
    let mut x = vec![-radius; d.rank];
    loop {
        if coroots.iter().all(|c| dot(c, &x) >= 0) && dot(&x, &tv) <= h {
            out.push(x.clone());
        }
        let mut k = 0;
        loop {
            if k == d.rank {
                return out;
            }
            x[k] += 1;
            if x[k] <= radius {
                break;
            }
            x[k] = -radius;
            k += 1;
        }
    }
}

fn rank_two_data() -> Vec<BasedRootDatum> {
    let mut out = Vec::new();
    for key in STANDARD_KEYS {
        let d = presets::lookup(key).unwrap().twisted.base;
        if d.rank <= 2 {
            out.push(d.dualize());
            out.push(d);
        }
    }
    out
}

#[test]
fn freudenthal_matches_weyl_character_formula() {
    let mut checked = 0;
    for d in rank_two_data() {
        let w = weyl_on_characters(&d);
        let delta = two_rho(&d);
        let a_delta = alternant(&w, &delta);
        for lambda in dominant_weights(&d, 6, 20) {
            let chi = irreducible_character(&d, &vector(&lambda)).unwrap();
            // chi evaluated at 2x, so that rho becomes integral.
            let doubled: Laurent = chi
                .iter()
                .map(|(v, &m)| (small(v).iter().map(|x| 2 * x).collect(), m as i64))
                .collect();
            let lhs = multiply(&doubled, &a_delta);
            let top: Vec<i64> = lambda.iter().zip(&delta).map(|(l, r)| 2 * l + r).collect();
            assert_eq!(lhs, alternant(&w, &top), "{} at {lambda:?}", d.name);

            for (m, _) in &w {
                for (v, &k) in chi.iter() {
                    assert_eq!(chi.get(&vector(&apply(m, &small(v)))), k, "{} not W-invariant", d.name);
                }
            }
            checked += 1;
        }
    }
    assert!(checked > 100, "{checked}");
}

#[test]
fn tensor_products_match_character_products() {
    let sl2 = presets::lookup("SL2").unwrap().twisted.base;
    for a in 0..6i64 {
        for b in 0..6i64 {
            let r = decompose_tensor(&sl2, &vector(&[a]), &vector(&[b])).unwrap();
            // Clebsch-Gordan: V(a) x V(b) = sum of V(a + b - 2k), 0 <= k <= min(a, b).
            let expected: BTreeMap<Vector, u64> =
                (0..=a.min(b)).map(|k| (vector(&[a + b - 2 * k]), 1)).collect();
            assert_eq!(r.summands, expected, "{a} x {b}");
        }
    }
}

fn minors_gcd(m: &[Vec<BigInt>], k: usize) -> BigInt {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut g = BigInt::zero();
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<BigInt>> = rs
                .iter()
                .map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect())
                .collect();
            g = g.gcd(&det(sub));
        }
    }
    g
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Laplace expansion; sizes here are at most 4.
fn det(m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * det(minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

/// Invariant factors > 1 and free rank of `Z^n / columns`, by determinantal divisors.
fn structure(n: usize, columns: &[Vector]) -> (Vec<BigInt>, usize) {
    let m: Vec<Vec<BigInt>> = (0..n).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();
    let mut prev = BigInt::from(1);
    let mut factors = Vec::new();
    let mut rank = 0;
    for k in 1..=n.min(columns.len()) {
        let dk = minors_gcd(&m, k);
        if dk.is_zero() {
            break;
        }
        rank = k;
        let f = &dk / &prev;
        if f > BigInt::from(1) {
            factors.push(f);
        }
        prev = dk;
    }
    (factors, n - rank)
}

fn kottwitz_columns(t: &TwistedRootDatum) -> Vec<Vector> {
    let mut cols = t.base.simple_coroots.clone();
    cols.extend(relation_matrix(t).columns());
    cols
}

#[test]
fn smith_forms_match_determinantal_divisors() {
    for key in STANDARD_KEYS {
        let t = presets::lookup(key).unwrap().twisted;
        let n = t.rank();
        let pi1 = kottwitz_components(&t).unwrap();
        let (factors, free) = structure(n, &kottwitz_columns(&t));
        assert_eq!(pi1.invariant_factors, factors, "{key}");
        assert_eq!(pi1.free_rank, free, "{key}");

        let lat = coinvariants(&t).unwrap();
        let (factors, free) = structure(n, &relation_matrix(&t).columns());
        assert_eq!(lat.group().invariant_factors, factors, "{key}");
        assert_eq!(lat.free_rank(), free, "{key}");
    }
}

#[test]
fn coset_counts_on_boxes() {
    // For a finite quotient Z^n / L of exponent e, the box [0, e)^n meets every coset.
    for key in STANDARD_KEYS {
        let t = presets::lookup(key).unwrap().twisted;
        let space = CoweightSpace::new(&t).unwrap();
        let Some(order) = space.components.quotient.order() else {
            continue;
        };
        let e = space
            .components
            .quotient
            .invariant_factors
            .last()
            .cloned()
            .unwrap_or_else(|| BigInt::from(1))
            .to_i64()
            .unwrap();
        let n = t.rank();
        let mut classes = BTreeSet::new();
        let mut x = vec![0i64; n];
        loop {
            classes.insert(space.components.class_of(&vector(&x)).unwrap());
            let mut k = 0;
            while k < n {
                x[k] += 1;
                if x[k] < e {
                    break;
                }
                x[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        assert_eq!(BigInt::from(classes.len()), order, "{key}");
    }
}

#[test]
fn weyl_orders() {
    let expected = [
        ("SL2", 2, 2),
        ("PGL2", 2, 2),
        ("SL3", 6, 6),
        ("Sp4", 8, 8),
        ("G2", 12, 12),
        ("SL2xSL2-swap", 4, 2),
        ("SU3", 6, 2),
        ("SU4", 24, 8),
        ("SU(5)", 120, 8),
        ("Spin8-triality", 192, 12),
        ("torus-rank-2", 1, 1),
    ];
    for (key, abs, fixed) in expected {
        let t = presets::lookup(key).unwrap().twisted;
        assert_eq!(enumerate_absolute_weyl(&t.base, DEFAULT_WEYL_BOUND).unwrap().len(), abs, "{key}");
        assert_eq!(fixed_weyl_subgroup(&t, DEFAULT_WEYL_BOUND).unwrap().len(), fixed, "{key}");
        assert_eq!(weyl_on_characters(&t.base).len(), abs, "{key}");
    }
}

/// SU3 in sum-zero coordinates `(a, b, c)`: the coroot basis has
/// `x = a`, `y = -c`.
fn su3_coroot_coords(a: i64, c: i64) -> Vector {
    vector(&[a, -c])
}

#[test]
fn su3_image_by_brute_force() {
    let space = CoweightSpace::new(&presets::lookup("SU3").unwrap().twisted).unwrap();
    let mut brute = BTreeSet::new();
    for a in -12..=12i64 {
        for b in -12..=12i64 {
            let c = -a - b;
            // <(a,b,c), 2rho> with 2rho = (2, 0, -2).
            if a >= b && b >= c && 2 * a - 2 * c <= 12 {
                brute.insert(a - c);
            }
        }
    }
    let img = space.dominant_image_monoid(&BigInt::from(12)).unwrap();
    let lib: BTreeSet<i64> = img
        .image_classes()
        .iter()
        .map(|c| c.free[0].to_i64().unwrap())
        .collect();
    assert_eq!(lib, brute);
    assert_eq!(lib, BTreeSet::from([0, 2, 3, 4, 5, 6]));
    let lat = &space.lattice;
    assert_eq!(lat.class_of(&su3_coroot_coords(1, -1)).unwrap().free, vector(&[2]));
}

#[test]
fn dominance_order_against_sum_zero_oracle() {
    // Split SL3 lifts are in coroot coordinates, where mu <= lambda means
    // lambda - mu has nonnegative entries.
    let space = CoweightSpace::new(&presets::lookup("SL3").unwrap().twisted).unwrap();
    let dominant = space.bounded_dominant(&BigInt::from(16)).unwrap();
    for l in &dominant {
        for m in &dominant {
            let ll = space.lift(l).unwrap();
            let ml = space.lift(m).unwrap();
            let d = lattice::sub(&ll, &ml);
            let oracle = d.iter().all(|v| *v >= BigInt::zero());
            assert_eq!(space.leq(m, l).unwrap().is_some(), oracle, "{m} <= {l}");
        }
    }
}

#[test]
fn relation_matrix_columns_are_differences() {
    let t = presets::lookup("SU4").unwrap().twisted;
    let r = relation_matrix(&t);
    let g = &t.generators[0].lattice_map;
    let n = t.rank();
    let expected: Vec<Vector> = (0..n)
        .map(|j| lattice::sub(&lattice::unit(n, j), &g.mul_vec(&lattice::unit(n, j)).unwrap()))
        .filter(|c| !lattice::is_zero(c))
        .collect();
    let same = same_lattice(n, &r.columns(), &expected).unwrap();
    assert!(same);
}
