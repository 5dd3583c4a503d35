//! Property suites behind `twisted-satake verify`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use super::report::{self, Report};
use super::CliError;
use crate::abelian::QuotientElement;
use crate::coweights::{components_via_orbit_classes, CoweightSpace};
use crate::dual::{dual_twisted, fixed_group_descriptor, folded_datum, CoefficientProfile};
use crate::error::{Error, Result};
use crate::galois::{coroot_coinvariants_exact_sequence, kottwitz_components, kottwitz_presentation, TwistedRootDatum};
use crate::presets::{self, Preset};
use crate::rep::branch_to_fixed_group;
use crate::satake::parities;
use crate::weyl::{fixed_weyl_subgroup, DEFAULT_WEYL_BOUND};
use crate::{input, lattice};

pub const SUITES: &[&str] = &["exactness", "orbits", "parity", "weyl-oracle", "branching"];

/// Number of dominant weights pushed through the branching suite.
const BRANCHING_SAMPLES: usize = 12;

#[derive(Clone, Debug)]
struct Check {
    suite: &'static str,
    name: String,
    passed: bool,
    detail: String,
}

struct Recorder {
    suite: &'static str,
    checks: Vec<Check>,
}

impl Recorder {
    fn pass(&mut self, name: &str, detail: impl Into<String>) {
        self.push(name, true, detail.into());
    }

    fn fail(&mut self, name: &str, detail: impl Into<String>) {
        self.push(name, false, detail.into());
    }

    fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.push(name, ok, detail.into());
    }

    /// Records an error as a failure; `Ok` results are left to the caller.
    fn attempt<T>(&mut self, name: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(x) => Some(x),
            Err(e) => {
                self.fail(name, e.to_string());
                None
            }
        }
    }

    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check {
            suite: self.suite,
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

pub(super) fn run(
    file: Option<&Path>,
    args: &[String],
    height: BigInt,
    profile: CoefficientProfile,
) -> std::result::Result<Report, CliError> {
    let mut args = args.to_vec();
    let source = match file {
        Some(p) => p.display().to_string(),
        None => {
            if args.is_empty() {
                return Err(CliError::Usage("expected a preset name or --file PATH".into()));
            }
            args.remove(0)
        }
    };
    let suite = parse_suite(&args)?;
    let loaded = match file {
        Some(p) => input::load_file(p),
        None => presets::lookup(&source),
    };
    let mut datum = Recorder {
        suite: "datum",
        checks: Vec::new(),
    };
    let preset = match loaded {
        Ok(p) => {
            datum.pass("diagram-automorphism", "every generator preserves the pinning");
            Some(p)
        }
        Err(e @ (Error::InvalidAutomorphism(_) | Error::InvalidDatum(_))) => {
            let name = if matches!(e, Error::InvalidAutomorphism(_)) {
                "diagram-automorphism"
            } else {
                "root-datum"
            };
            datum.fail(name, e.to_string());
            None
        }
        Err(e) => return Err(e.into()),
    };
    let key = preset.as_ref().map(|p| p.key.clone()).unwrap_or(source);
    Ok(finish(&key, &suite, preset.as_ref(), datum.checks, &height, profile))
}

/// `verify` on a datum that has already been loaded and validated.
pub(super) fn run_loaded(
    preset: &Preset,
    args: &[String],
    height: BigInt,
    profile: CoefficientProfile,
) -> std::result::Result<Report, CliError> {
    let suite = parse_suite(args)?;
    let mut datum = Recorder {
        suite: "datum",
        checks: Vec::new(),
    };
    match preset.twisted.generators.iter().try_for_each(|g| g.validate_against(&preset.twisted.base)) {
        Ok(()) => datum.pass("diagram-automorphism", "every generator preserves the pinning"),
        Err(e) => datum.fail("diagram-automorphism", e.to_string()),
    }
    Ok(finish(&preset.key, &suite, Some(preset), datum.checks, &height, profile))
}

fn parse_suite(args: &[String]) -> std::result::Result<String, CliError> {
    let suite = match args {
        [] => "all".to_string(),
        [s] => s.clone(),
        _ => return Err(CliError::Usage("expected at most one suite name".into())),
    };
    if suite != "all" && !SUITES.contains(&suite.as_str()) {
        return Err(CliError::Usage(format!(
            "unknown suite `{suite}`; expected all or one of {}",
            SUITES.join(", ")
        )));
    }
    Ok(suite)
}

fn finish(
    key: &str,
    suite: &str,
    preset: Option<&Preset>,
    mut checks: Vec<Check>,
    height: &BigInt,
    profile: CoefficientProfile,
) -> Report {
    if let Some(p) = preset {
        let selected: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
        for s in selected {
            checks.extend(run_suite(s, p, height, profile));
        }
    }

    let failures = checks.iter().filter(|c| !c.passed).count();
    let mut fields = Map::new();
    fields.insert("suite".into(), json!(suite));
    fields.insert("coefficients".into(), json!(profile.to_string()));
    fields.insert("height_bound".into(), report::int(height));
    fields.insert(
        "checks".into(),
        Value::Array(
            checks
                .iter()
                .map(|c| json!({"suite": c.suite, "name": c.name, "passed": c.passed, "detail": c.detail}))
                .collect(),
        ),
    );
    fields.insert("failures".into(), json!(failures));
    fields.insert("passed".into(), json!(failures == 0));

    let mut table = String::new();
    for c in &checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(table, "{mark} {}/{}: {}", c.suite, c.name, c.detail);
    }
    let _ = writeln!(
        table,
        "{}: {} checks, {failures} failed",
        if failures == 0 { "passed" } else { "failed" },
        checks.len()
    );
    let mut r = Report::new("verify", key, fields, table);
    r.status = if failures == 0 { 0 } else { 3 };
    r
}

fn run_suite(suite: &str, p: &Preset, height: &BigInt, profile: CoefficientProfile) -> Vec<Check> {
    let name: &'static str = SUITES.iter().find(|s| **s == suite).copied().unwrap_or("unknown");
    let mut rec = Recorder {
        suite: name,
        checks: Vec::new(),
    };
    match suite {
        "exactness" => exactness(&mut rec, &p.twisted),
        "orbits" => orbits(&mut rec, &p.twisted, height),
        "parity" => parity(&mut rec, &p.twisted, height),
        "weyl-oracle" => weyl_oracle(&mut rec, p, profile),
        "branching" => branching(&mut rec, p, height, profile),
        _ => rec.fail("suite", format!("unknown suite {suite}")),
    }
    rec.checks
}

fn exactness(rec: &mut Recorder, t: &TwistedRootDatum) {
    let Some(report) = rec.attempt("sequence", coroot_coinvariants_exact_sequence(t)) else {
        return;
    };
    rec.check(
        "injective",
        report.injective,
        format!("(Z Phi^vee)_I = {} on orbit classes", report.coroot_coinvariants),
    );
    rec.check(
        "cokernel",
        report.cokernel == report.pi1_coinvariants,
        format!("cokernel {} vs pi1(G)_I {}", report.cokernel, report.pi1_coinvariants),
    );
    rec.check("exact", report.is_exact(), format!("cokernel {}", report.cokernel));
    if let Some(k) = rec.attempt("kottwitz", kottwitz_components(t)) {
        rec.check(
            "kottwitz",
            k == report.cokernel,
            format!("X_*(T) / (coroots + relations) = {k}"),
        );
    }
    let Some(space) = rec.attempt("space", CoweightSpace::new(t)) else {
        return;
    };
    if let Some(g) = rec.attempt("orbit-classes", components_via_orbit_classes(&space)) {
        rec.check("orbit-classes", g == report.cokernel, format!("X_*(T)_I / orbit coroots = {g}"));
    }
    // Count the cosets reached from the unit vectors when the group is finite.
    if let Some(order) = report.cokernel.order() {
        match coset_count(t) {
            Ok(n) => rec.check(
                "coset-count",
                BigInt::from(n) == order,
                format!("{n} cosets reached, order {order}"),
            ),
            Err(e) => rec.fail("coset-count", e.to_string()),
        }
    }
}

fn coset_count(t: &TwistedRootDatum) -> Result<usize> {
    let pres = kottwitz_presentation(t)?;
    let gens: Vec<QuotientElement> = (0..t.rank())
        .map(|i| pres.class_of(&lattice::unit(t.rank(), i)))
        .collect::<Result<_>>()?;
    let mut seen: BTreeSet<QuotientElement> = BTreeSet::from([pres.zero()]);
    let mut frontier = vec![pres.zero()];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = pres.add(&x, g)?;
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    Ok(seen.len())
}

fn orbits(rec: &mut Recorder, t: &TwistedRootDatum, height: &BigInt) {
    let Some(space) = rec.attempt("space", CoweightSpace::new(t)) else {
        return;
    };
    let types: Vec<String> = space
        .relative
        .orbits
        .iter()
        .zip(&space.relative.orbit_types)
        .map(|(o, ty)| format!("{o:?} {}", ty.label()))
        .collect();
    rec.pass("orbit-types", if types.is_empty() { "no simple roots".into() } else { types.join(", ") });
    match space.weyl.check_descends() {
        Ok(()) => rec.pass("descends", format!("W_0 of order {} acts on X_*(T)_I", space.weyl.order())),
        Err(e) => rec.fail("descends", e.to_string()),
    }
    if let Some(n) = rec.attempt("representatives", space.check_orbit_representatives(height)) {
        rec.pass(
            "representatives",
            format!("{n} dominant classes represent every orbit up to height {height}"),
        );
    }
}

fn parity(rec: &mut Recorder, t: &TwistedRootDatum, height: &BigInt) {
    let Some(space) = rec.attempt("space", CoweightSpace::new(t)) else {
        return;
    };
    if let Some(ps) = rec.attempt("constant", parities(&space, height)) {
        let text: Vec<String> = ps
            .iter()
            .map(|(c, p)| format!("{}: {p}", report::class_label(c)))
            .collect();
        rec.pass("constant", format!("component parities {}", text.join(", ")));
        let zero_ok = ps
            .iter()
            .find(|(c, _)| *c == space.components.zero())
            .is_none_or(|(_, p)| *p == 0);
        rec.check("identity-component", zero_ok, "parity 0 on the identity component");
    }
}

fn weyl_oracle(rec: &mut Recorder, p: &Preset, profile: CoefficientProfile) {
    let t = &p.twisted;
    let Some(fixed) = rec.attempt("fixed", fixed_weyl_subgroup(t, DEFAULT_WEYL_BOUND)) else {
        return;
    };
    let Some(space) = rec.attempt("space", CoweightSpace::new(t)) else {
        return;
    };
    rec.check(
        "relative-order",
        fixed.len() == space.weyl.order(),
        format!("|W^I| = {} by enumeration, W_0 from orbit generators {}", fixed.len(), space.weyl.order()),
    );
    match &p.folded {
        Some(f) => {
            if let Some(fd) = rec.attempt("folded", folded_datum(t, f)) {
                rec.check(
                    "folded-order",
                    fd.weyl_order == fixed.len(),
                    format!("{} ({}) has Weyl order {}", fd.group_label, fd.type_label, fd.weyl_order),
                );
            }
        }
        None => rec.pass("folded-order", "no folded data"),
    }
    let desc = dual_twisted(t).and_then(|d| fixed_group_descriptor(&d, p.folded.as_ref(), profile));
    if let Some(d) = rec.attempt("descriptor", desc) {
        rec.check(
            "descriptor",
            d.descended_weyl_order == fixed.len(),
            format!(
                "descended Weyl order {}, quasi-reductive flag {}",
                d.descended_weyl_order, d.flags.quasi_reductive_nonreductive_at_2
            ),
        );
    }
}

fn branching(rec: &mut Recorder, p: &Preset, height: &BigInt, profile: CoefficientProfile) {
    let t = &p.twisted;
    let Some(fold) = &p.folded else {
        rec.pass("skipped", "no folded data");
        return;
    };
    if !profile.is_char0() {
        rec.pass("skipped", format!("decomposition is characteristic zero only, not {profile}"));
        return;
    }
    let Some(fd) = rec.attempt("folded", folded_datum(t, fold)) else {
        return;
    };
    // Dominant weights of the dual group are dominant cocharacters of the split form.
    let split = TwistedRootDatum::split(t.base.clone()).and_then(|s| CoweightSpace::new(&s));
    let Some(split) = rec.attempt("weights", split) else {
        return;
    };
    let split = split.with_central_radius(1);
    let Some(classes) = rec.attempt("weights", split.bounded_dominant(height)) else {
        return;
    };
    let mut weights = Vec::new();
    for c in classes {
        let Some(lift) = rec.attempt("weights", split.lift(&c)) else {
            return;
        };
        let Some(h) = rec.attempt("weights", split.height(&c)) else {
            return;
        };
        weights.push((h, lift));
    }
    weights.sort();
    let mut total = 0u64;
    for (_, lambda) in weights.iter().take(BRANCHING_SAMPLES) {
        let name = format!("V({})", report::vector_label(lambda));
        let Some(b) = rec.attempt(&name, branch_to_fixed_group(t, Some(&fd), lambda, profile)) else {
            continue;
        };
        match b.decomposition {
            Ok(result) => {
                let dims = result.summands.len();
                total += b.restricted.total_dimension();
                rec.check(
                    &name,
                    result.is_complete(),
                    format!("dimension {} into {dims} summands", b.restricted.total_dimension()),
                );
            }
            Err(e) => rec.fail(&name, e.to_string()),
        }
    }
    rec.pass("conservation", format!("{total} dimensions restricted and reconstructed"));
}
