//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 input validation error, 3 a
//! failed property check.

mod report;
mod verify;

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::abelian::{quotient_group, IntMatrix, QuotientElement};
use crate::coweights::CoweightSpace;
use crate::dual::{classify_rank_one, dual_twisted, fixed_group_descriptor, folded_datum, CoefficientProfile, FoldedDatum};
use crate::error::Error;
use crate::galois::{coinvariants, kottwitz_components, relative_simple_roots, CoinvariantLattice};
use crate::presets::{self, Preset};
use crate::rep::{branch_to_fixed_group, decompose_tensor};
use crate::satake::{closure_poset, conv_cell, corr, mv_cell, PosetRange};
use crate::{input, lattice};

pub use report::{Report, SCHEMA_VERSION};

#[derive(Parser, Debug)]
#[command(name = "twisted-satake", version, about = "Combinatorics of twisted affine Grassmannians and their dual groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Summary of a datum: orbits, coinvariants, components, Weyl group, fixed dual group.
    Describe(Common),
    /// Schubert strata up to the bound, or below a class: `schubert SU3 [CLASS]`.
    Schubert(Common),
    /// Semi-infinite intersection: `mv SU3 MU LAMBDA`.
    Mv(Common),
    /// Convolution intersection: `conv SU3 MU MU' LAMBDA LAMBDA'`.
    Conv(Common),
    /// Restriction of a dual-group irreducible to the fixed group: `branch SU3 WEIGHT`.
    Branch(Common),
    /// Tensor product over the folded dual group: `tensor SL2 LAMBDA MU`.
    Tensor(Common),
    /// Image of bounded absolute dominant cones in the coinvariants.
    DominantImage(Common),
    /// `<lambda, 2rho - 2rho_M>`: `corr SU3 --levi 0,1 [CLASS]`.
    Corr {
        #[command(flatten)]
        common: Common,
        /// Simple-root indices of the Levi, comma separated; empty for the torus.
        #[arg(long, default_value = "")]
        levi: String,
    },
    /// Property suites: exactness, orbits, parity, weyl-oracle, branching or all.
    Verify(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Read the datum from a JSON file instead of a preset.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
    /// Bound N on <lambda, rho>, i.e. height <lambda, 2rho> at most 2N.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    bound: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// char0, Zl:<p> or Fl:<p>.
    #[arg(long, default_value = "char0")]
    coeff: CoefficientProfile,
    /// Preset name (unless --file is given) followed by the command's arguments.
    /// Classes are written `a,b` or `a,b|t` with torsion coordinates after the bar.
    args: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Dot,
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    fn status(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Lib(Error::InvariantViolation(_) | Error::ResidualNonEmpty(_)) => 3,
            CliError::Lib(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) => format!("usage error: {m}"),
            CliError::Lib(e) => format!("error: {e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs the command line `args` (including the program name) and returns the
/// exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(mark_negatives(args)) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if status == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return status;
        }
    };
    let format = cli.command.common().format;
    match dispatch(cli.command, None) {
        Ok(report) => {
            let text = match format {
                Format::Json => {
                    serde_json::to_string_pretty(&report.json).expect("serializable") + "\n"
                }
                Format::Table => report.table.clone(),
                Format::Dot => match &report.dot {
                    Some(d) => d.clone(),
                    None => {
                        let _ = writeln!(err, "usage error: --format dot is only available for schubert");
                        return 1;
                    }
                },
            };
            let _ = write!(out, "{text}");
            report.status
        }
        Err(e) => {
            let _ = writeln!(err, "{}", e.message());
            if let CliError::Usage(_) = e {
                let _ = writeln!(err, "run `twisted-satake help` for usage");
            }
            e.status()
        }
    }
}

/// A failed [`run_loaded`] call, with the exit status the command line
/// would have returned.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandError {
    pub status: i32,
    pub message: String,
}

/// Runs a subcommand on an already loaded datum. `argv` starts with the
/// subcommand name and omits the preset name, e.g. `["mv", "-1", "1"]`;
/// options such as `--bound` are accepted as on the command line.
pub fn run_loaded(preset: &Preset, argv: &[String]) -> std::result::Result<Report, CommandError> {
    let full = std::iter::once("twisted-satake".to_string()).chain(argv.iter().cloned());
    let cli = Cli::try_parse_from(mark_negatives(full)).map_err(|e| CommandError {
        status: if e.use_stderr() { 1 } else { 0 },
        message: e.render().to_string(),
    })?;
    dispatch(cli.command, Some(preset)).map_err(|e| CommandError {
        status: e.status(),
        message: e.message(),
    })
}

// Negative classes such as `-1,0` would otherwise be read as flags.
fn mark_negatives<I, T>(args: I) -> impl Iterator<Item = OsString>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    args.into_iter().map(|a| {
        let a: OsString = a.into();
        match a.to_str() {
            Some(s) if looks_negative(s) => OsString::from(format!("{NEGATIVE_MARK}{s}")),
            _ => a,
        }
    })
}

const NEGATIVE_MARK: char = '\u{E000}';

fn looks_negative(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next() == Some('-') && chars.next().is_some_and(|c| c.is_ascii_digit())
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Describe(c)
            | Command::Schubert(c)
            | Command::Mv(c)
            | Command::Conv(c)
            | Command::Branch(c)
            | Command::Tensor(c)
            | Command::DominantImage(c)
            | Command::Verify(c) => c,
            Command::Corr { common, .. } => common,
        }
    }
}

/// Loaded datum plus the remaining positional arguments.
struct Context {
    preset: Preset,
    args: Vec<String>,
    height: BigInt,
    profile: CoefficientProfile,
}

fn load(common: &Common, loaded: Option<&Preset>) -> CliResult<Context> {
    let mut args: Vec<String> = common.args.iter().map(|a| a.trim_start_matches(NEGATIVE_MARK).to_string()).collect();
    let preset = match (loaded, &common.file) {
        (Some(p), None) => p.clone(),
        (Some(_), Some(_)) => return Err(CliError::Usage("--file cannot be combined with a loaded datum".into())),
        (None, Some(path)) => input::load_file(path)?,
        (None, None) => {
            if args.is_empty() {
                return Err(CliError::Usage("expected a preset name or --file PATH".into()));
            }
            presets::lookup(&args.remove(0))?
        }
    };
    Ok(Context {
        preset,
        args,
        height: BigInt::from(common.bound) * 2,
        profile: common.coeff,
    })
}

fn expect_args(ctx: &Context, names: &[&str], optional: usize) -> CliResult<()> {
    let n = ctx.args.len();
    if n + optional < names.len() || n > names.len() {
        return Err(CliError::Usage(format!(
            "expected arguments {}, found {n}",
            names.join(" ")
        )));
    }
    Ok(())
}

fn parse_ints(s: &str) -> CliResult<Vec<BigInt>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<BigInt>()
                .map_err(|_| CliError::Usage(format!("`{x}` is not an integer in `{s}`")))
        })
        .collect()
}

/// `a,b|t` on the coinvariant lattice; `0` is the zero class.
fn parse_class(lat: &CoinvariantLattice, s: &str) -> CliResult<QuotientElement> {
    if s.trim() == "0" && (lat.free_rank() != 1 || !lat.group().invariant_factors.is_empty()) {
        return Ok(lat.zero());
    }
    let (free, torsion) = match s.split_once('|') {
        Some((f, t)) => (parse_ints(f)?, parse_ints(t)?),
        None => (parse_ints(s)?, Vec::new()),
    };
    let ntor = lat.group().invariant_factors.len();
    let torsion = if torsion.is_empty() && ntor > 0 {
        lattice::zero(ntor)
    } else {
        torsion
    };
    lat.presentation.element(free, torsion).map_err(|e| match e {
        Error::DimensionMismatch { expected, found } => CliError::Usage(format!(
            "class `{s}`: expected {expected} coordinates, found {found}"
        )),
        e => CliError::Lib(e),
    })
}

fn parse_weight(rank: usize, s: &str) -> CliResult<Vec<BigInt>> {
    let v = parse_ints(s)?;
    if v.len() != rank {
        return Err(CliError::Usage(format!(
            "weight `{s}`: expected {rank} coordinates, found {}",
            v.len()
        )));
    }
    Ok(v)
}

fn dispatch(command: Command, loaded: Option<&Preset>) -> CliResult<Report> {
    if let Command::Verify(c) = &command {
        let args: Vec<String> = c.args.iter().map(|a| a.trim_start_matches(NEGATIVE_MARK).to_string()).collect();
        let height = BigInt::from(c.bound) * 2;
        return match (loaded, &c.file) {
            (Some(p), None) => verify::run_loaded(p, &args, height, c.coeff),
            (Some(_), Some(_)) => Err(CliError::Usage("--file cannot be combined with a loaded datum".into())),
            (None, file) => verify::run(file.as_deref(), &args, height, c.coeff),
        };
    }
    let ctx = load(command.common(), loaded)?;
    match &command {
        Command::Describe(_) => describe(&ctx),
        Command::Schubert(_) => schubert(&ctx),
        Command::Mv(_) => mv(&ctx),
        Command::Conv(_) => conv(&ctx),
        Command::Branch(_) => branch(&ctx),
        Command::Tensor(_) => tensor(&ctx),
        Command::DominantImage(_) => dominant_image(&ctx),
        Command::Corr { levi, .. } => corr_cmd(&ctx, levi),
        Command::Verify(_) => unreachable!(),
    }
}

fn space(ctx: &Context) -> CliResult<CoweightSpace> {
    Ok(CoweightSpace::new(&ctx.preset.twisted)?)
}

fn checked_folded(ctx: &Context) -> CliResult<Option<FoldedDatum>> {
    match &ctx.preset.folded {
        Some(f) => Ok(Some(folded_datum(&ctx.preset.twisted, f)?)),
        None => Ok(None),
    }
}

fn describe(ctx: &Context) -> CliResult<Report> {
    expect_args(ctx, &[], 0)?;
    let t = &ctx.preset.twisted;
    let d = &t.base;
    let rel = relative_simple_roots(t);
    let lat = coinvariants(t)?;
    let coroots = IntMatrix::from_columns(d.rank, &d.simple_coroots)?;
    let pi1 = quotient_group(d.rank, &coroots)?.quotient;
    let pi1_i = kottwitz_components(t)?;
    let s = CoweightSpace::new(t)?;
    let desc = fixed_group_descriptor(&dual_twisted(t)?, ctx.preset.folded.as_ref(), ctx.profile)?;
    let rank_one = if rel.orbits.len() == 1 {
        Some(classify_rank_one(t)?)
    } else {
        None
    };

    let orbits: Vec<Value> = rel
        .orbits
        .iter()
        .zip(&rel.orbit_types)
        .zip(&rel.averaged_simple_roots)
        .map(|((o, ty), avg)| {
            json!({
                "simple_roots": o,
                "type": ty.label(),
                "averaged_root": Value::Array(avg.iter().map(report::rational).collect()),
            })
        })
        .collect();
    let flags = &desc.flags;
    let folded = desc.folded.as_ref().map(|f| {
        json!({
            "type": f.type_label,
            "group": f.group_label,
            "weyl_order": f.weyl_order,
            "simple_roots": report::matrix(&f.datum.simple_roots),
            "simple_coroots": report::matrix(&f.datum.simple_coroots),
        })
    });
    let mut fields = Map::new();
    fields.insert("description".into(), json!(ctx.preset.description));
    fields.insert(
        "base".into(),
        json!({
            "name": d.name,
            "rank": d.rank,
            "semisimple_rank": d.semisimple_rank(),
            "simple_roots": report::matrix(&d.simple_roots),
            "simple_coroots": report::matrix(&d.simple_coroots),
        }),
    );
    fields.insert("inertia_order".into(), json!(t.group_order()));
    fields.insert("orbits".into(), Value::Array(orbits));
    fields.insert("coinvariants".into(), json!(lat.group().to_string()));
    fields.insert("pi1".into(), json!(pi1.to_string()));
    fields.insert("pi1_coinvariants".into(), json!(pi1_i.to_string()));
    fields.insert("relative_weyl_order".into(), json!(s.weyl.order()));
    fields.insert(
        "fixed_dual_group".into(),
        json!({
            "coefficients": ctx.profile.to_string(),
            "torus_characters": lat.group().to_string(),
            "weyl_order": desc.descended_weyl_order,
            "folded": folded,
            "smooth": flags.smooth_over_z_ell.label(),
            "quasi_reductive_nonreductive_at_2": flags.quasi_reductive_nonreductive_at_2,
            "connected_char0": flags.connected_char0.label(),
        }),
    );
    fields.insert(
        "rank_one".into(),
        match &rank_one {
            Some(r) => json!({
                "case": format!("{:?}", r.case),
                "char0_fixed_group": r.char0_fixed_group,
                "char2_flag": r.char2_flag,
            }),
            None => Value::Null,
        },
    );

    let mut table = String::new();
    let _ = writeln!(table, "datum             {} ({})", ctx.preset.key, ctx.preset.description);
    let _ = writeln!(table, "rank              {} (semisimple {})", d.rank, d.semisimple_rank());
    let _ = writeln!(table, "inertia order     {}", t.group_order());
    for (o, ty) in rel.orbits.iter().zip(&rel.orbit_types) {
        let _ = writeln!(table, "orbit             {o:?} {}", ty.label());
    }
    let _ = writeln!(table, "X_*(T)_I          {}", lat.group());
    let _ = writeln!(table, "pi1(G)            {pi1}");
    let _ = writeln!(table, "pi1(G)_I          {pi1_i}");
    let _ = writeln!(table, "W_0 order         {}", s.weyl.order());
    let _ = writeln!(table, "coefficients      {}", ctx.profile);
    match &desc.folded {
        Some(f) => {
            let _ = writeln!(table, "fixed dual group  {} ({}), Weyl order {}", f.group_label, f.type_label, f.weyl_order);
        }
        None => {
            let _ = writeln!(table, "fixed dual group  no folded datum");
        }
    }
    let _ = writeln!(table, "smooth            {}", flags.smooth_over_z_ell.label());
    let _ = writeln!(
        table,
        "quasi-reductive non-reductive at 2  {}",
        flags.quasi_reductive_nonreductive_at_2
    );
    let _ = writeln!(table, "connected (char 0)  {}", flags.connected_char0.label());
    if let Some(r) = &rank_one {
        let _ = writeln!(table, "rank one          case {:?}, {}", r.case, r.char0_fixed_group);
    }
    Ok(Report::new("describe", &ctx.preset.key, fields, table))
}

fn schubert(ctx: &Context) -> CliResult<Report> {
    expect_args(ctx, &["[CLASS]"], 1)?;
    let s = space(ctx)?;
    let range = match ctx.args.first() {
        Some(a) => PosetRange::Below(parse_class(&s.lattice, a)?),
        None => PosetRange::Height(ctx.height.clone()),
    };
    let poset = closure_poset(&s, &range)?;
    let nodes: Vec<Value> = poset
        .strata
        .iter()
        .map(|st| {
            json!({
                "label": report::class_label(&st.label),
                "dim": report::int(&st.dim),
                "component": report::class_label(&st.component),
            })
        })
        .collect();
    let edges: Vec<Value> = poset
        .covers
        .iter()
        .map(|&(a, b)| {
            json!({
                "from": report::class_label(&poset.strata[a].label),
                "to": report::class_label(&poset.strata[b].label),
            })
        })
        .collect();
    let mut fields = Map::new();
    match &range {
        PosetRange::Below(c) => fields.insert("below".into(), report::class(c)),
        PosetRange::Height(h) => fields.insert("height_bound".into(), report::int(h)),
    };
    fields.insert("nodes".into(), Value::Array(nodes));
    fields.insert("edges".into(), Value::Array(edges));

    let rows: Vec<Vec<String>> = poset
        .strata
        .iter()
        .map(|st| {
            vec![
                report::class_label(&st.label),
                st.dim.to_string(),
                report::class_label(&st.component),
            ]
        })
        .collect();
    let mut table = report::table(&["label", "dim", "component"], &rows);
    for &(a, b) in &poset.covers {
        let _ = writeln!(
            table,
            "{} < {}",
            report::class_label(&poset.strata[a].label),
            report::class_label(&poset.strata[b].label)
        );
    }

    let mut dot = String::from("digraph schubert {\n  rankdir=BT;\n");
    for (i, st) in poset.strata.iter().enumerate() {
        let _ = writeln!(
            dot,
            "  n{i} [label=\"{}\\ndim {}\\ncomponent {}\"];",
            report::dot_escape(&report::class_label(&st.label)),
            st.dim,
            report::dot_escape(&report::class_label(&st.component))
        );
    }
    for &(a, b) in &poset.covers {
        let _ = writeln!(dot, "  n{a} -> n{b};");
    }
    dot.push_str("}\n");

    let mut r = Report::new("schubert", &ctx.preset.key, fields, table);
    r.dot = Some(dot);
    Ok(r)
}

fn optional_dim(d: &Option<BigInt>) -> Value {
    d.as_ref().map(report::int).unwrap_or(Value::Null)
}

fn mv(ctx: &Context) -> CliResult<Report> {
    expect_args(ctx, &["MU", "LAMBDA"], 0)?;
    let s = space(ctx)?;
    let mu = parse_class(&s.lattice, &ctx.args[0])?;
    let lambda = parse_class(&s.lattice, &ctx.args[1])?;
    let cell = mv_cell(&s, &mu, &lambda)?;
    let mut fields = Map::new();
    fields.insert("mu".into(), report::class(&mu));
    fields.insert("lambda".into(), report::class(&lambda));
    fields.insert("nonempty".into(), json!(cell.nonempty));
    fields.insert("dim".into(), optional_dim(&cell.dim));
    let table = match &cell.dim {
        Some(d) => format!("Gr^{} meets S_{}: nonempty, dim {d}\n", report::class_label(&lambda), report::class_label(&mu)),
        None => format!("Gr^{} meets S_{}: empty\n", report::class_label(&lambda), report::class_label(&mu)),
    };
    Ok(Report::new("mv", &ctx.preset.key, fields, table))
}

fn conv(ctx: &Context) -> CliResult<Report> {
    expect_args(ctx, &["MU", "MU'", "LAMBDA", "LAMBDA'"], 0)?;
    let s = space(ctx)?;
    let c: Vec<QuotientElement> = ctx
        .args
        .iter()
        .map(|a| parse_class(&s.lattice, a))
        .collect::<CliResult<_>>()?;
    let cell = conv_cell(&s, &c[0], &c[1], &c[2], &c[3])?;
    let mut fields = Map::new();
    for (name, x) in ["mu", "mu_prime", "lambda", "lambda_prime"].iter().zip(&c) {
        fields.insert((*name).into(), report::class(x));
    }
    fields.insert("nonempty".into(), json!(cell.nonempty));
    fields.insert("dim".into(), optional_dim(&cell.dim));
    let labels: Vec<String> = c.iter().map(report::class_label).collect();
    let table = match &cell.dim {
        Some(d) => format!("({}) in ({}): nonempty, dim {d}\n", labels[..2].join("; "), labels[2..].join("; ")),
        None => format!("({}) in ({}): empty\n", labels[..2].join("; "), labels[2..].join("; ")),
    };
    Ok(Report::new("conv", &ctx.preset.key, fields, table))
}

fn summand_list(s: &CoweightSpace, summands: &[(QuotientElement, u64)]) -> CliResult<Vec<(QuotientElement, u64)>> {
    let mut keyed = Vec::new();
    for (c, m) in summands {
        keyed.push((s.height(c)?, c.clone(), *m));
    }
    keyed.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| b.1.cmp(&a.1)));
    Ok(keyed.into_iter().map(|(_, c, m)| (c, m)).collect())
}

fn summand_text(list: &[(QuotientElement, u64)]) -> String {
    if list.is_empty() {
        return "0".into();
    }
    list.iter()
        .map(|(c, m)| {
            let v = format!("V({})", report::class_label(c));
            if *m == 1 {
                v
            } else {
                format!("{m} {v}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn summand_json(list: &[(QuotientElement, u64)]) -> Value {
    Value::Array(
        list.iter()
            .map(|(c, m)| json!({"highest_weight": report::class_label(c), "multiplicity": m}))
            .collect(),
    )
}

fn branch(ctx: &Context) -> CliResult<Report> {
    expect_args(ctx, &["WEIGHT"], 0)?;
    let t = &ctx.preset.twisted;
    let s = space(ctx)?;
    let lambda = parse_weight(t.rank(), &ctx.args[0])?;
    let fd = checked_folded(ctx)?;
    let b = branch_to_fixed_group(t, fd.as_ref(), &lambda, ctx.profile)?;

    let restricted: Vec<Value> = b
        .restricted
        .iter()
        .map(|(c, m)| json!({"weight": report::class_label(c), "multiplicity": m}))
        .collect();
    let mut fields = Map::new();
    fields.insert("highest_weight".into(), report::ints(&lambda));
    fields.insert("coefficients".into(), json!(ctx.profile.to_string()));
    fields.insert("dimension".into(), json!(b.restricted.total_dimension()));
    fields.insert("restricted".into(), Value::Array(restricted));
    let mut table = String::new();
    let _ = writeln!(table, "V({}) of the dual group, dimension {}", report::vector_label(&lambda), b.restricted.total_dimension());
    let weights: Vec<String> = b
        .restricted
        .iter()
        .map(|(c, m)| format!("{}:{m}", report::class_label(c)))
        .collect();
    let _ = writeln!(table, "restricted weights  {}", weights.join(" "));
    let status = match &b.decomposition {
        Ok(result) => {
            let list = summand_list(&s, &result.summands.iter().map(|(c, m)| (c.clone(), *m)).collect::<Vec<_>>())?;
            fields.insert("summands".into(), summand_json(&list));
            let _ = writeln!(table, "fixed group         {}", summand_text(&list));
            0
        }
        Err(e) => {
            fields.insert("summands".into(), Value::Null);
            fields.insert("error".into(), json!(e.to_string()));
            let _ = writeln!(table, "fixed group         {e}");
            CliError::Lib(e.clone()).status()
        }
    };
    let mut r = Report::new("branch", &ctx.preset.key, fields, table);
    r.status = status;
    Ok(r)
}

fn tensor(ctx: &Context) -> CliResult<Report> {
    expect_args(ctx, &["LAMBDA", "MU"], 0)?;
    if !ctx.profile.is_char0() {
        return Err(Error::UnsupportedDecomposition(format!(
            "tensor products are decomposed in characteristic zero only, not {}",
            ctx.profile
        ))
        .into());
    }
    let s = space(ctx)?;
    let fd = checked_folded(ctx)?.ok_or_else(|| {
        Error::UnsupportedDecomposition("no verified folded Cartan data for this datum".into())
    })?;
    let lambda = parse_class(&s.lattice, &ctx.args[0])?;
    let mu = parse_class(&s.lattice, &ctx.args[1])?;
    let torsion = s.lattice.presentation.add(&lambda, &mu)?.torsion;
    let result = decompose_tensor(&fd.datum, &lambda.free, &mu.free)?;
    let summands: Vec<(QuotientElement, u64)> = result
        .summands
        .iter()
        .map(|(v, m)| {
            (
                QuotientElement {
                    free: v.clone(),
                    torsion: torsion.clone(),
                },
                *m,
            )
        })
        .collect();
    let list = summand_list(&s, &summands)?;
    let mut fields = Map::new();
    fields.insert("group".into(), json!(fd.group_label));
    fields.insert("lambda".into(), report::class(&lambda));
    fields.insert("mu".into(), report::class(&mu));
    fields.insert("summands".into(), summand_json(&list));
    let table = summand_text(&list) + "\n";
    Ok(Report::new("tensor", &ctx.preset.key, fields, table))
}

fn dominant_image(ctx: &Context) -> CliResult<Report> {
    expect_args(ctx, &[], 0)?;
    let s = space(ctx)?;
    let img = s.dominant_image_monoid(&ctx.height)?;
    let missing = img.missing();
    let mut fields = Map::new();
    fields.insert("height_bound".into(), report::int(&img.height_bound));
    fields.insert("cone".into(), Value::Array(img.cone.iter().map(report::class).collect()));
    fields.insert(
        "image".into(),
        Value::Array(
            img.image
                .iter()
                .map(|(c, w)| json!({"class": report::class_label(c), "witness": report::ints(w)}))
                .collect(),
        ),
    );
    fields.insert("missing".into(), Value::Array(missing.iter().map(report::class).collect()));
    fields.insert("surjective".into(), json!(missing.is_empty()));
    let join = |v: Vec<String>| if v.is_empty() { "none".to_string() } else { v.join(" ") };
    let mut table = String::new();
    let _ = writeln!(table, "height bound  {}", img.height_bound);
    let _ = writeln!(table, "image         {}", join(img.image.iter().map(|(c, _)| report::class_label(c)).collect()));
    let _ = writeln!(table, "missing       {}", join(missing.iter().map(report::class_label).collect()));
    Ok(Report::new("dominant-image", &ctx.preset.key, fields, table))
}

fn corr_cmd(ctx: &Context, levi: &str) -> CliResult<Report> {
    expect_args(ctx, &["[CLASS]"], 1)?;
    let s = space(ctx)?;
    let subset: BTreeSet<usize> = if levi.trim().is_empty() {
        BTreeSet::new()
    } else {
        levi.split(',')
            .map(|x| {
                x.trim()
                    .parse::<usize>()
                    .map_err(|_| CliError::Usage(format!("--levi: `{x}` is not a simple-root index")))
            })
            .collect::<CliResult<_>>()?
    };
    let classes = match ctx.args.first() {
        Some(a) => vec![parse_class(&s.lattice, a)?],
        None => s.bounded_dominant(&ctx.height)?,
    };
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for c in &classes {
        let v = corr(&s, &subset, c)?;
        rows.push(vec![report::class_label(c), v.to_string()]);
        values.push(json!({"class": report::class_label(c), "corr": report::int(&v)}));
    }
    let mut fields = Map::new();
    fields.insert("levi".into(), json!(subset));
    fields.insert("values".into(), Value::Array(values));
    let table = report::table(&["class", "corr"], &rows);
    Ok(Report::new("corr", &ctx.preset.key, fields, table))
}
