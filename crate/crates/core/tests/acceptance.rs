//! One line per acceptance criterion. Exits nonzero when any line is FAIL.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use twisted_satake::abelian::QuotientElement;
use twisted_satake::coweights::CoweightSpace;
use twisted_satake::dual::{
    classify_rank_one, dual_twisted, fixed_group_descriptor, folded_datum, CoefficientProfile, FoldedDatum, RankOneKind,
};
use twisted_satake::galois::{
    coroot_coinvariants_exact_sequence, fundamental_coweight_pairing, kottwitz_components, kottwitz_presentation, relation_matrix,
    relative_simple_roots, TwistedRootDatum,
};
use twisted_satake::lattice::{self, Vector};
use twisted_satake::presets::{self, Preset};
use twisted_satake::rep::{branch_to_fixed_group, folded_character, irreducible_character};
use twisted_satake::satake::{conv_cell, mv_cell, stratum};
use twisted_satake::weyl::fixed_weyl_subgroup;

type Outcome = Result<String, String>;

/// Name, check and time limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, u64);

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

fn space(p: &Preset) -> Result<CoweightSpace, String> {
    CoweightSpace::new(&p.twisted).map_err(|e| format!("{}: {e}", p.key))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T>(key: &str, r: twisted_satake::Result<T>) -> Result<T, String> {
    r.map_err(|err| format!("{key}: {err}"))
}

/// `2 rho` summed from the positive roots.
fn two_rho(t: &TwistedRootDatum) -> Result<Vector, String> {
    let roots = e("roots", t.base.full_root_system())?;
    Ok(roots.positive().fold(lattice::zero(t.rank()), |acc, r| lattice::add(&acc, &r.root)))
}

fn criterion_1() -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = twisted_satake::cli::run(
        ["twisted-satake", "dominant-image", "SU3", "--bound", "10", "--format", "json"],
        &mut out,
        &mut err,
    );
    ensure(code == 0, || format!("exit {code}: {}", String::from_utf8_lossy(&err)))?;
    let v: Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;
    let image: Vec<i64> = v["image"]
        .as_array()
        .ok_or("no image")?
        .iter()
        .map(|x| x["class"].as_str().unwrap_or("").parse::<i64>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;

    // (a, b, c) with a + b + c = 0 has coroot coordinates (a, -c).
    let p = e("SU3", presets::lookup("SU3"))?;
    let s = space(&p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let a: i64 = rng.gen_range(-50..=50);
        let b: i64 = rng.gen_range(-50..=50);
        let c = -a - b;
        let class = e("SU3", s.class_of(&lattice::vector(&[a, -c])))?;
        ensure(class.free == lattice::vector(&[a - c]) && class.torsion.is_empty(), || {
            format!("({a},{b},{c}) maps to {class}, expected a - c = {}", a - c)
        })?;
    }

    let expected = vec![0, 2, 4, 6, 8, 10];
    let shown = |xs: &[i64]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
    ensure(image == expected, || {
        format!(
            "image {{{}}}, expected {{{}}}; a - c agreed on 100 random elements",
            shown(&image),
            shown(&expected)
        )
    })?;
    Ok(format!("image {{{}}}", shown(&image)))
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    for p in presets::all() {
        let t = &p.twisted;
        let report = e(&p.key, coroot_coinvariants_exact_sequence(t))?;
        ensure(report.is_exact(), || format!("{}: sequence not exact", p.key))?;
        let pres = e(&p.key, kottwitz_presentation(t))?;
        let smith = e(&p.key, kottwitz_components(t))?;
        ensure(smith == report.cokernel, || {
            format!("{}: X_*(T)/(coroots + relations) = {smith}, cokernel {}", p.key, report.cokernel)
        })?;
        // Brute force: classes of the box [0, e)^n fill out the torsion.
        let exponent = smith.invariant_factors.iter().max().cloned().unwrap_or_else(BigInt::one);
        let e_usize: usize = exponent.try_into().map_err(|_| "exponent too large".to_string())?;
        let n = t.rank();
        let mut torsion_parts = BTreeSet::new();
        let mut frees = BTreeSet::new();
        let mut idx = vec![0usize; n];
        loop {
            let v: Vector = idx.iter().map(|&i| BigInt::from(i)).collect();
            let c = e(&p.key, pres.class_of(&v))?;
            torsion_parts.insert(c.torsion.clone());
            frees.insert(c.free.clone());
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < e_usize {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
        let torsion_order: BigInt = smith.invariant_factors.iter().product();
        ensure(BigInt::from(torsion_parts.len()) == torsion_order, || {
            format!("{}: {} torsion cosets reached, SNF says {torsion_order}", p.key, torsion_parts.len())
        })?;
        if smith.free_rank == 0 {
            ensure(frees.len() == 1, || format!("{}: free part in a finite group", p.key))?;
        }
        checked += 1;
    }
    Ok(format!("{checked} presets"))
}

fn criterion_3() -> Outcome {
    let mut classes = 0;
    let mut keys = Vec::new();
    for p in presets::all() {
        if relative_simple_roots(&p.twisted).orbits.len() > 2 {
            continue;
        }
        let s = space(&p)?;
        let h = big(12);
        for c in e(&p.key, s.ball(&h))? {
            let mut dominant = 0;
            for x in e(&p.key, s.orbit(&c))? {
                if e(&p.key, s.is_dominant_class(&x))?.is_some() {
                    dominant += 1;
                }
            }
            ensure(dominant == 1, || format!("{}: orbit of {c} meets the cone {dominant} times", p.key))?;
            classes += 1;
        }
        e(&p.key, s.check_orbit_representatives(&h))?;
        keys.push(p.key);
    }
    Ok(format!("{classes} classes over {}", keys.join(" ")))
}

fn criterion_4() -> Outcome {
    let h = big(12);
    let mut adjoint = Vec::new();
    for p in presets::all() {
        let is_adjoint = p.twisted.base.is_adjoint() && p.twisted.base.semisimple_rank() > 0;
        if !(is_adjoint || p.key == "PSU3" || p.key == "SU3") {
            continue;
        }
        let s = space(&p)?;
        let img = e(&p.key, s.dominant_image_monoid(&h))?;
        let missing = img.missing();
        if p.key == "SU3" {
            ensure(!missing.is_empty(), || "SU3 projection is surjective".into())?;
        } else {
            ensure(missing.is_empty(), || format!("{}: {} classes missed", p.key, missing.len()))?;
            // Witnesses really are dominant and land on their class.
            for (c, w) in &img.image {
                ensure(s.is_dominant_cocharacter(w) && e(&p.key, s.class_of(w))? == *c, || {
                    format!("{}: bad witness for {c}", p.key)
                })?;
            }
            adjoint.push(p.key);
        }
    }
    Ok(format!("surjective on {}; SU3 not", adjoint.join(" ")))
}

fn criterion_5() -> Outcome {
    let mut pairs = 0;
    for p in presets::all() {
        let t = &p.twisted;
        if !t.base.is_adjoint() || t.base.semisimple_rank() == 0 {
            continue;
        }
        let rel = relative_simple_roots(t);
        for (o, orbit) in rel.orbits.iter().enumerate() {
            for beta in 0..t.base.semisimple_rank() {
                let got = e(&p.key, fundamental_coweight_pairing(t, o, beta))?;
                let want = if orbit.contains(&beta) {
                    BigRational::new(BigInt::one(), BigInt::from(orbit.len()))
                } else {
                    BigRational::zero()
                };
                ensure(got == want, || format!("{}: orbit {o}, root {beta}: {got} vs {want}", p.key))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairings"))
}

fn criterion_6() -> Outcome {
    let h = big(12);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cells = 0;
    for p in presets::all() {
        let s = space(&p)?;
        let t = &p.twisted;
        let rho2 = two_rho(t)?;
        let relations = relation_matrix(t).columns();
        let dominant = e(&p.key, s.bounded_dominant(&h))?;
        for lambda in &dominant {
            let lift = e(&p.key, s.lift(lambda))?;
            let mut other = lift.clone();
            for col in &relations {
                other = lattice::add(&other, &lattice::scale(&big(rng.gen_range(-3..=3)), col));
            }
            let dim = e(&p.key, stratum(&s, lambda))?.dim;
            ensure(lattice::dot(&lift, &rho2) == dim && lattice::dot(&other, &rho2) == dim, || {
                format!("{}: stratum {lambda} has dim {dim} but lifts pair differently", p.key)
            })?;
        }
        // Every MV cell with both labels in the height 12 ball.
        let ball: Vec<QuotientElement> = e(&p.key, s.ball(&h))?.into_iter().collect();
        let mut cell_dims = BTreeMap::new();
        for mu in &ball {
            let mu_height = lattice::dot(&e(&p.key, s.lift(mu))?, &rho2);
            for lambda in &dominant {
                let cell = e(&p.key, mv_cell(&s, mu, lambda))?;
                if let Some(d) = &cell.dim {
                    let total = &mu_height + lattice::dot(&e(&p.key, s.lift(lambda))?, &rho2);
                    ensure(d * 2 == total && d >= &BigInt::zero(), || {
                        format!("{}: MV({mu}, {lambda}) dim {d}, 2 dim should be {total}", p.key)
                    })?;
                }
                cell_dims.insert((mu.clone(), lambda.clone()), cell.dim);
                cells += 1;
            }
        }
        // Convolution on random pairs, mostly of nonempty cells.
        let keys: Vec<_> = cell_dims.keys().cloned().collect();
        let nonempty: Vec<_> = cell_dims.iter().filter(|(_, d)| d.is_some()).map(|(k, _)| k.clone()).collect();
        for i in 0..200 {
            let pool = if i % 4 == 0 { &keys } else { &nonempty };
            let (Some(a), Some(b)) = (pool.choose(&mut rng), pool.choose(&mut rng)) else {
                break;
            };
            let conv = e(&p.key, conv_cell(&s, &a.0, &b.0, &a.1, &b.1))?;
            let expected = match (&cell_dims[a], &cell_dims[b]) {
                (Some(x), Some(y)) => Some(x + y),
                _ => None,
            };
            ensure(conv.dim == expected, || format!("{}: convolution dimension is not additive", p.key))?;
        }
    }
    Ok(format!("{cells} MV cells"))
}

fn criterion_7() -> Outcome {
    let expect = [
        ("SL2xSL2-swap", RankOneKind::A, "SL2"),
        ("PGL2", RankOneKind::A, "SL2"),
        ("SU3", RankOneKind::B, "PGL2"),
    ];
    for (key, kind, group) in expect {
        let p = e(key, presets::lookup(key))?;
        let case = e(key, classify_rank_one(&p.twisted))?;
        ensure(case.case == kind && case.char0_fixed_group == group, || {
            format!("{key}: {:?} {} expected {kind:?} {group}", case.case, case.char0_fixed_group)
        })?;
    }
    let mut flagged = Vec::new();
    for p in presets::all() {
        let t = &p.twisted;
        let cartan = t.base.cartan_matrix();
        let adjacent = relative_simple_roots(t)
            .orbits
            .iter()
            .any(|o| o.iter().any(|&i| o.iter().any(|&j| i != j && !cartan[i][j].is_zero())));
        let dual = e(&p.key, dual_twisted(t))?;
        let d = e(&p.key, fixed_group_descriptor(&dual, p.folded.as_ref(), CoefficientProfile::Zl(2)))?;
        ensure(d.flags.quasi_reductive_nonreductive_at_2 == adjacent, || {
            format!("{}: flag {} but adjacent pair {adjacent}", p.key, d.flags.quasi_reductive_nonreductive_at_2)
        })?;
        if adjacent {
            flagged.push(p.key);
        }
    }
    Ok(format!("flag raised on {}", flagged.join(" ")))
}

fn criterion_8() -> Outcome {
    let mut rows = Vec::new();
    for p in presets::all() {
        let Some(fc) = &p.folded else { continue };
        let fd = e(&p.key, folded_datum(&p.twisted, fc))?;
        let fixed = e(&p.key, fixed_weyl_subgroup(&p.twisted, 100_000))?.len();
        ensure(fd.weyl_order == fixed, || format!("{}: folded {} vs |W^I| {fixed}", p.key, fd.weyl_order))?;
        rows.push((p.key, fixed));
    }
    for (key, order) in [("SU3", 2), ("SU4", 8), ("Spin8-triality", 12)] {
        ensure(rows.iter().any(|(k, n)| *k == key && *n == order), || format!("{key}: |W^I| is not {order}"))?;
    }
    Ok(rows.iter().map(|(k, n)| format!("{k}:{n}")).collect::<Vec<_>>().join(" "))
}

fn branch_dims(p: &Preset, fd: &FoldedDatum, lambda: &[BigInt]) -> Result<Vec<(QuotientElement, u64, u64)>, String> {
    let b = e(&p.key, branch_to_fixed_group(&p.twisted, Some(fd), lambda, CoefficientProfile::Char0))?;
    let dec = b.decomposition.map_err(|err| format!("{}: {err}", p.key))?;
    ensure(dec.residual.is_empty(), || format!("{}: nonzero residual", p.key))?;
    let chi = e(&p.key, irreducible_character(&p.twisted.base.dualize(), lambda))?;
    let mut total = 0;
    let mut out = Vec::new();
    for (hw, &m) in &dec.summands {
        let dim = e(&p.key, folded_character(fd, hw))?.total_dimension();
        total += m * dim;
        out.push((hw.clone(), m, dim));
    }
    ensure(total == chi.total_dimension(), || {
        format!("{}: summands have dimension {total}, V has {}", p.key, chi.total_dimension())
    })?;
    Ok(out)
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut weights = 0;
    for p in presets::all() {
        let Some(fc) = &p.folded else { continue };
        let fd = e(&p.key, folded_datum(&p.twisted, fc))?;
        let split = e(&p.key, TwistedRootDatum::split(p.twisted.base.clone()))?;
        let s = e(&p.key, CoweightSpace::new(&split))?.with_central_radius(1);
        let dominant = e(&p.key, s.bounded_dominant(&big(16)))?;
        for c in dominant.choose_multiple(&mut rng, 20) {
            let lambda = e(&p.key, s.lift(c))?;
            branch_dims(&p, &fd, &lambda)?;
            weights += 1;
        }
    }

    let swap = e("swap", presets::lookup("SL2xSL2-swap"))?;
    let fd = e("swap", folded_datum(&swap.twisted, swap.folded.as_ref().ok_or("no folding")?))?;
    let got: Vec<(Vector, u64)> = branch_dims(&swap, &fd, &lattice::vector(&[1, 1]))?
        .into_iter()
        .map(|(hw, m, _)| (hw.free, m))
        .collect();
    ensure(got == vec![(lattice::vector(&[0]), 1), (lattice::vector(&[2]), 1)], || {
        format!("SL2xSL2-swap V(1,1) gave {got:?}")
    })?;

    // The standard representation of SL3 is a representation of the dual of
    // the adjoint unitary form.
    let psu3 = e("PSU3", presets::lookup("PSU3"))?;
    let fd = e("PSU3", folded_datum(&psu3.twisted, psu3.folded.as_ref().ok_or("no folding")?))?;
    let got = branch_dims(&psu3, &fd, &lattice::vector(&[1, 0]))?;
    ensure(got.len() == 1 && got[0].1 == 1 && got[0].2 == 3 && fd.group_label == "PGL2", || {
        format!("PSU3 V(omega_1) gave {got:?} over {}", fd.group_label)
    })?;
    Ok(format!("{weights} random weights; swap V(1,1) = V(2) + V(0); V(omega_1) stays irreducible of dim 3"))
}

fn criterion_10() -> Outcome {
    let mut components = 0;
    for p in presets::all() {
        let s = space(&p)?;
        let mut parity: BTreeMap<QuotientElement, (bool, QuotientElement)> = BTreeMap::new();
        for c in e(&p.key, s.bounded_dominant(&big(20)))? {
            let comp = e(&p.key, s.component_of(&c))?;
            let even = (e(&p.key, s.height(&c))? % 2u32).is_zero();
            match parity.get(&comp) {
                Some((q, first)) => {
                    ensure(*q == even, || format!("{}: {first} and {c} differ in parity in component {comp}", p.key))?
                }
                None => {
                    parity.insert(comp, (even, c));
                }
            }
        }
        components += parity.len();
    }
    Ok(format!("{components} components"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 SU3 dominant image", criterion_1, 1),
        ("2 exactness and components", criterion_2, 5),
        ("3 orbit representatives", criterion_3, 10),
        ("4 projection surjectivity", criterion_4, 2),
        ("5 fundamental coweight pairings", criterion_5, 1),
        ("6 stratum and cell dimensions", criterion_6, 5),
        ("7 rank one classification", criterion_7, 1),
        ("8 folded Weyl orders", criterion_8, 5),
        ("9 branching", criterion_9, 10),
        ("10 parity", criterion_10, 2),
    ];
    let mut failed = 0;
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > Duration::from_secs(limit) => {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit}s"))
            }
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS {name} ({elapsed:.2?}): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name} ({elapsed:.2?}): {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
