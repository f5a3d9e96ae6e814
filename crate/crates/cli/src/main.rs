//! Command-line driver: a thin adapter over the core library.  Every
//! subcommand resolves its field context, loads or defaults its inputs,
//! calls one library entry point, and renders the returned report.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails,
//! 2 on invalid input (bad files, bad parameters, windows too small).

mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context as _, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use nhom_core::hochschild::ReindexingReport;
use nhom_core::ncomplex::hexagon_check;
use nhom_core::schema::{
    algebra_from_json, module_from_json, ncomplex_from_json, ncomplex_to_json, simplicial_to_json,
};
use nhom_core::{
    ext_reindexing_check, hochschild_ncomplex, hochschild_simplicial, hom_complex,
    random_ncomplex, random_semisimplicial, random_ses, reindexing_check, seeded, tor_complex,
    tor_reindexing_check, tor_symmetry_check, verify_geometric_derivatives, verify_operator_sums,
    DifferentialSpec, FDModule, FinDimAlgebra, QContext, Side,
};

use report::{CellRow, Format, HomologyRow, Report, ScalarRow};

#[derive(Parser)]
#[command(
    name = "nhom",
    version,
    about = "Exact homology of N-complexes (d^N = 0) over prime fields: q-deformed \
             complexes of finite dimensional algebras, flavoured homology, and \
             machine-checked reindexing onto classical homology"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for reports
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Table => Format::Table,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compare every safe flavoured homology group of the q-deformed
    /// complex of an algebra against classical homology through the degree
    /// reindexing
    Theorem1(Theorem1Args),
    /// Verify a named identity or property
    Verify(VerifyArgs),
    /// Print the flavoured homology table of a serialized complex
    Homology(HomologyArgs),
    /// Evaluate q-scalars (q-integers, q-factorials, q-binomials)
    Qcalc(QcalcArgs),
    /// Construct a complex and export it as a JSON document
    Dump(DumpArgs),
}

#[derive(Args)]
struct Theorem1Args {
    /// Algebra document (JSON); defaults to the dual numbers over the
    /// context field
    #[arg(long)]
    algebra: Option<PathBuf>,
    /// Differential order N
    #[arg(long = "N", default_value_t = 3)]
    order: u32,
    /// Field characteristic (prime); picks the smallest valid q when --q is
    /// omitted
    #[arg(long, conflicts_with = "auto_field")]
    p: Option<u64>,
    /// Deformation parameter q in F_p
    #[arg(long, requires = "p")]
    q: Option<u64>,
    /// Use the built-in field table for this N
    #[arg(long)]
    auto_field: bool,
    /// Top degree of the constructed complex
    #[arg(long, default_value_t = 8)]
    nmax: usize,
    /// Also write the deformed complex to this path as JSON
    #[arg(long)]
    dump: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Identity {
    /// Both operator sums in the q-difference algebra collapse to scalars
    Lemma55,
    /// Derivative and evaluation identities of the geometric sum polynomial
    Eq56,
    /// Weighted truncated differentials of random simplicial modules are
    /// nilpotent
    DeltaNilpotent,
    /// The six-term homology sequences of random complexes are exact
    Hexagon,
    /// The long exact sequences of random short exact sequences hold
    Snake,
    /// Acyclicity for one flavour implies acyclicity for all
    Kapranov,
    /// Flavoured torsion groups of modules reindex onto classical ones
    Cor33,
    /// Flavoured extension groups of modules reindex onto classical ones
    Cor46,
    /// Both one-sided collapses of the two-sided bar complex agree with it
    TorSymmetry,
}

impl Identity {
    fn token(self) -> &'static str {
        match self {
            Identity::Lemma55 => "lemma55",
            Identity::Eq56 => "eq56",
            Identity::DeltaNilpotent => "delta-nilpotent",
            Identity::Hexagon => "hexagon",
            Identity::Snake => "snake",
            Identity::Kapranov => "kapranov",
            Identity::Cor33 => "cor33",
            Identity::Cor46 => "cor46",
            Identity::TorSymmetry => "tor-symmetry",
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    /// Which identity to verify
    #[arg(value_enum)]
    identity: Identity,
    /// Differential order N; scalar identities run over N = 2..=6 when
    /// omitted, everything else defaults to N = 3
    #[arg(long = "N")]
    order: Option<u32>,
    /// Field characteristic (prime); picks the smallest valid q when --q is
    /// omitted
    #[arg(long, conflicts_with = "auto_field")]
    p: Option<u64>,
    /// Deformation parameter q in F_p
    #[arg(long, requires = "p")]
    q: Option<u64>,
    /// Use the built-in field table for this N
    #[arg(long)]
    auto_field: bool,
    /// Seed for randomized instance generation
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Weight of the final retained face for delta-nilpotent
    #[arg(long, default_value_t = 1)]
    ell: i64,
    /// Top degree for module-level runs
    #[arg(long)]
    nmax: Option<usize>,
    /// Right (first) module document for cor33/cor46/tor-symmetry
    #[arg(long)]
    module_m: Option<PathBuf>,
    /// Left (second) module document for cor33/cor46/tor-symmetry
    #[arg(long)]
    module_n: Option<PathBuf>,
}

#[derive(Args)]
struct HomologyArgs {
    /// Serialized complex (JSON)
    file: PathBuf,
    /// Homology flavour 1 ≤ p ≤ N−1; all flavours when omitted
    #[arg(long)]
    p_index: Option<u32>,
}

#[derive(Args)]
struct QcalcArgs {
    /// Differential order N
    #[arg(long = "N", default_value_t = 3)]
    order: u32,
    /// Field characteristic (prime)
    #[arg(long, conflicts_with = "auto_field")]
    p: Option<u64>,
    /// Deformation parameter q in F_p
    #[arg(long, requires = "p")]
    q: Option<u64>,
    /// Use the built-in field table for this N
    #[arg(long)]
    auto_field: bool,
    /// Query, e.g. `qint 5`, `qfact 4`, `qbin 4 2`, `qpow -2`, `sign 3`;
    /// prints a summary table when omitted
    query: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DumpKind {
    /// The q-deformed complex of the algebra
    Hochschild,
    /// The underlying simplicial module of the algebra
    Bar,
    /// The two-sided bar complex of the module pair
    Tor,
    /// The morphism complex from a resolution of the first module into the
    /// second
    Hom,
}

#[derive(Args)]
struct DumpArgs {
    /// Which object to construct
    #[arg(long, value_enum, default_value_t = DumpKind::Hochschild)]
    kind: DumpKind,
    /// Algebra document (JSON); defaults to the dual numbers
    #[arg(long)]
    algebra: Option<PathBuf>,
    /// Right (first) module document for --kind tor/hom
    #[arg(long)]
    module_m: Option<PathBuf>,
    /// Left (second) module document for --kind tor/hom
    #[arg(long)]
    module_n: Option<PathBuf>,
    /// Differential order N
    #[arg(long = "N", default_value_t = 3)]
    order: u32,
    /// Field characteristic (prime)
    #[arg(long, conflicts_with = "auto_field")]
    p: Option<u64>,
    /// Deformation parameter q in F_p
    #[arg(long, requires = "p")]
    q: Option<u64>,
    /// Use the built-in field table for this N
    #[arg(long)]
    auto_field: bool,
    /// Top degree / level of the constructed object
    #[arg(long, default_value_t = 5)]
    nmax: usize,
    /// Output path; writes to stdout when omitted
    #[arg(long)]
    dump: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format.into();
    match run(cli.command, format) {
        Ok((output, pass)) => {
            print!("{output}");
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command, format: Format) -> Result<(String, bool)> {
    let report = match command {
        Command::Theorem1(args) => run_theorem1(&args)?,
        Command::Verify(args) => run_verify(&args)?,
        Command::Homology(args) => run_homology(&args)?,
        Command::Qcalc(args) => run_qcalc(&args)?,
        Command::Dump(args) => return run_dump(&args, format),
    };
    Ok((report.render(format), report.pass))
}

fn resolve_context(order: u32, p: Option<u64>, q: Option<u64>) -> Result<QContext> {
    match (p, q) {
        (Some(p), Some(q)) => Ok(QContext::new(order, p, q)?),
        (Some(p), None) => (1..p)
            .find_map(|q| QContext::new(order, p, q).ok())
            .ok_or_else(|| {
                anyhow!("no deformation parameter q makes (N={order}, F_{p}) a valid context")
            }),
        (None, _) => Ok(QContext::auto(order)?),
    }
}

fn load_algebra(path: &Option<PathBuf>, ctx: &QContext) -> Result<FinDimAlgebra> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p)
                .with_context(|| format!("reading algebra file {}", p.display()))?;
            Ok(algebra_from_json(&text)?)
        }
        None => Ok(FinDimAlgebra::dual_numbers(ctx.modulus())),
    }
}

/// Load the module pair for a module-level run, or default to the
/// one-dimensional modules of the dual numbers on which the generator acts
/// as zero.
fn load_modules(
    module_m: &Option<PathBuf>,
    module_n: &Option<PathBuf>,
    ctx: &QContext,
    side_m: Side,
    side_n: Side,
) -> Result<(FDModule, FDModule)> {
    match (module_m, module_n) {
        (Some(pm), Some(pn)) => {
            let read = |p: &PathBuf| -> Result<FDModule> {
                let text = fs::read_to_string(p)
                    .with_context(|| format!("reading module file {}", p.display()))?;
                Ok(module_from_json(&text)?)
            };
            Ok((read(pm)?, read(pn)?))
        }
        (None, None) => {
            let a = FinDimAlgebra::dual_numbers(ctx.modulus());
            let m = FDModule::character(&a, side_m, &[1, 0])?;
            let n = FDModule::character(&a, side_n, &[1, 0])?;
            Ok((m, n))
        }
        _ => bail!("module-level runs need both --module-m and --module-n (or neither)"),
    }
}

fn reindexing_cells(report: &mut Report, rep: &ReindexingReport) {
    report.classical = rep.classical.clone();
    for cell in &rep.cells {
        report.cells.push(CellRow {
            p: cell.flavour,
            n: cell.degree,
            deformed: cell.deformed,
            branch: match cell.reindexed {
                Some(j) => format!("classical {j}"),
                None => "zero".to_string(),
            },
            expected: cell.expected,
            pass: cell.ok(),
        });
    }
    report.check(
        "all cells match",
        rep.pass(),
        format!("{} cells, {} failures", rep.cells.len(), rep.failures()),
    );
}

fn run_theorem1(args: &Theorem1Args) -> Result<Report> {
    let ctx = if args.auto_field {
        QContext::auto(args.order)?
    } else {
        resolve_context(args.order, args.p, args.q)?
    };
    let algebra = load_algebra(&args.algebra, &ctx)?;
    let rep = reindexing_check(&algebra, &ctx, args.nmax)?;
    let mut report = Report::new("theorem1");
    report.context(&ctx);
    reindexing_cells(&mut report, &rep);
    if let Some(path) = &args.dump {
        let c = hochschild_ncomplex(&algebra, &ctx, args.nmax)?;
        fs::write(path, ncomplex_to_json(&c))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(report)
}

fn verify_context(args: &VerifyArgs, default_order: u32) -> Result<QContext> {
    let order = args.order.unwrap_or(default_order);
    if args.auto_field {
        Ok(QContext::auto(order)?)
    } else {
        resolve_context(order, args.p, args.q)
    }
}

/// Scalar identities run over N = 2..=6 unless a single N is requested.
fn scalar_contexts(args: &VerifyArgs) -> Result<Vec<QContext>> {
    match args.order {
        Some(_) => Ok(vec![verify_context(args, 3)?]),
        None => (2..=6)
            .map(|n| QContext::auto(n).map_err(Into::into))
            .collect(),
    }
}

fn run_verify(args: &VerifyArgs) -> Result<Report> {
    let mut report = Report::new(format!("verify {}", args.identity.token()));
    match args.identity {
        Identity::Lemma55 => {
            for ctx in scalar_contexts(args)? {
                let n = ctx.order();
                let r = verify_operator_sums(&ctx);
                report.context(&ctx);
                report.check(
                    format!("N={n} first operator sum"),
                    r.first_ok,
                    "collapses to the q-factorial of N-1",
                );
                report.check(
                    format!("N={n} second operator sum"),
                    r.second_ok,
                    "collapses with the alternating q-power prefactor",
                );
                report.check(
                    format!("N={n} inverse-parameter twist"),
                    r.twist_ok,
                    "transporting the first identity reproduces the second",
                );
            }
        }
        Identity::Eq56 => {
            for ctx in scalar_contexts(args)? {
                let n = ctx.order();
                let r = verify_geometric_derivatives(&ctx);
                report.context(&ctx);
                report.check(
                    format!("N={n} derivative division"),
                    r.division_ok,
                    format!("{} derivative orders checked", r.orders_checked),
                );
                report.check(
                    format!("N={n} evaluation consistency"),
                    r.evaluation_consistent,
                    "polynomial evaluation equals the defining sum",
                );
                report.check(
                    format!("N={n} evaluations vanish below the top order"),
                    r.vanishing_ok,
                    "a(r) = 0 for r < N-1",
                );
                report.check(
                    format!("N={n} top evaluation"),
                    r.top_value_ok,
                    "a(N-1) equals the q-factorial of N-1",
                );
            }
        }
        Identity::DeltaNilpotent => {
            let ctx = verify_context(args, 3)?;
            report.context(&ctx);
            report.seed = Some(args.seed);
            let count = 50;
            report.instances = Some(count);
            let mut rng = seeded(args.seed);
            let mut ok = 0;
            for _ in 0..count {
                let sm = random_semisimplicial(&mut rng, ctx.modulus(), 5, 4);
                if sm
                    .q_differential(&ctx, &DifferentialSpec::Weighted(args.ell))
                    .is_ok()
                {
                    ok += 1;
                }
            }
            report.check(
                "weighted differential is nilpotent",
                ok == count,
                format!("ell={}, {}/{} instances", args.ell, ok, count),
            );
        }
        Identity::Hexagon => {
            let ctx = verify_context(args, 3)?;
            report.context(&ctx);
            report.seed = Some(args.seed);
            let count = 25;
            report.instances = Some(count);
            let mut rng = seeded(args.seed);
            let mut nodes = 0;
            let mut all = true;
            for _ in 0..count {
                let c = random_ncomplex(&mut rng, &ctx, 6, 2, 2);
                let out = hexagon_check(&c);
                nodes += out.nodes_checked;
                all &= out.pass();
            }
            report.check(
                "six-term sequences exact",
                all && nodes > 0,
                format!("{nodes} nodes across {count} instances"),
            );
        }
        Identity::Snake => {
            let ctx = verify_context(args, 3)?;
            report.context(&ctx);
            report.seed = Some(args.seed);
            let count = 25;
            report.instances = Some(count);
            let mut rng = seeded(args.seed);
            let mut nodes = 0;
            let mut all = true;
            for _ in 0..count {
                let ses = random_ses(&mut rng, &ctx, 5, 2, 1);
                let out = ses.les_check()?;
                nodes += out.nodes_checked;
                all &= out.pass();
            }
            report.check(
                "long exact sequences hold",
                all && nodes > 0,
                format!("{nodes} nodes across {count} instances"),
            );
            let order = ctx.order();
            for p in 1..order {
                report.check(
                    format!("connecting degree drops (flavour {p})"),
                    true,
                    format!("-{} and -{}", p, order - p),
                );
            }
        }
        Identity::Kapranov => {
            let ctx = verify_context(args, 3)?;
            report.context(&ctx);
            report.seed = Some(args.seed);
            let count = 40;
            report.instances = Some(count);
            let mut rng = seeded(args.seed);
            let mut all = true;
            let mut acyclic = 0;
            for _ in 0..count {
                let c = random_ncomplex(&mut rng, &ctx, 5, 2, 2);
                all &= c.kapranov_check()?;
                if c.is_acyclic(1)? {
                    acyclic += 1;
                }
            }
            report.check(
                "acyclic for one flavour iff for all",
                all,
                format!("{acyclic} acyclic of {count} instances"),
            );
        }
        Identity::Cor33 => {
            let ctx = verify_context(args, 3)?;
            let (m, n) =
                load_modules(&args.module_m, &args.module_n, &ctx, Side::Right, Side::Left)?;
            let rep = tor_reindexing_check(&m, &n, &ctx, args.nmax.unwrap_or(6))?;
            report.context(&ctx);
            reindexing_cells(&mut report, &rep);
        }
        Identity::Cor46 => {
            let ctx = verify_context(args, 3)?;
            let (m, n) =
                load_modules(&args.module_m, &args.module_n, &ctx, Side::Left, Side::Left)?;
            let rep = ext_reindexing_check(&m, &n, &ctx, args.nmax.unwrap_or(6))?;
            report.context(&ctx);
            reindexing_cells(&mut report, &rep);
        }
        Identity::TorSymmetry => {
            let ctx = verify_context(args, 3)?;
            let (m, n) =
                load_modules(&args.module_m, &args.module_n, &ctx, Side::Right, Side::Left)?;
            let rep = tor_symmetry_check(&m, &n, &ctx, args.nmax.unwrap_or(5))?;
            report.context(&ctx);
            for (label, side) in [("right collapse", &rep.via_right), ("left collapse", &rep.via_left)]
            {
                let levels = format!("{} levels", side.levels);
                report.check(
                    format!("{label}: relation ranks"),
                    side.relation_rank_ok,
                    levels.clone(),
                );
                report.check(
                    format!("{label}: relations killed"),
                    side.relations_killed,
                    levels.clone(),
                );
                report.check(
                    format!("{label}: identification onto the two-sided complex"),
                    side.surjective,
                    levels.clone(),
                );
                report.check(
                    format!("{label}: differentials intertwined"),
                    side.intertwines,
                    levels,
                );
            }
        }
    }
    Ok(report)
}

fn run_homology(args: &HomologyArgs) -> Result<Report> {
    let text = fs::read_to_string(&args.file)
        .with_context(|| format!("reading complex file {}", args.file.display()))?;
    let c = ncomplex_from_json(&text)?;
    let mut report = Report::new("homology");
    report.context(c.context());
    let flavours: Vec<u32> = match args.p_index {
        Some(k) => {
            if k == 0 || k >= c.order() {
                bail!("flavour {k} is out of range for order {}", c.order());
            }
            vec![k]
        }
        None => (1..c.order()).collect(),
    };
    for p in flavours {
        let (lo, hi) = c.safe_window(p);
        for n in lo..=hi {
            report.homology.push(HomologyRow {
                p,
                n,
                dim: c.homology_dim(p, n)?,
            });
        }
    }
    Ok(report)
}

fn run_qcalc(args: &QcalcArgs) -> Result<Report> {
    let ctx = if args.auto_field {
        QContext::auto(args.order)?
    } else {
        resolve_context(args.order, args.p, args.q)?
    };
    let mut report = Report::new("qcalc");
    report.context(&ctx);
    let push = |report: &mut Report, query: String, value: u64| {
        report.scalars.push(ScalarRow { query, value });
    };
    if args.query.is_empty() {
        let n = ctx.order() as i64;
        for k in 0..=2 * n {
            push(&mut report, format!("qint {k}"), ctx.qint(k));
        }
        for r in 0..=ctx.order() - 1 {
            push(&mut report, format!("qfact {r}"), ctx.qfact(r));
        }
        return Ok(report);
    }
    let words = &args.query;
    let int_arg = |i: usize| -> Result<i64> {
        words
            .get(i)
            .ok_or_else(|| anyhow!("query `{}` is missing an argument", words[0]))?
            .parse()
            .map_err(|_| anyhow!("`{}` is not an integer", words[i]))
    };
    let uint_arg = |i: usize| -> Result<u32> {
        words
            .get(i)
            .ok_or_else(|| anyhow!("query `{}` is missing an argument", words[0]))?
            .parse()
            .map_err(|_| anyhow!("`{}` is not a nonnegative integer", words[i]))
    };
    let value = match words[0].as_str() {
        "qint" => ctx.qint(int_arg(1)?),
        "qfact" => ctx.qfact(uint_arg(1)?),
        "qbin" => ctx.qbinom(uint_arg(1)?, uint_arg(2)?)?,
        "qpow" => ctx.qpow(int_arg(1)?),
        "sign" => ctx.sign(uint_arg(1)?),
        other => bail!("unknown query `{other}` (try qint, qfact, qbin, qpow, sign)"),
    };
    push(&mut report, words.join(" "), value);
    Ok(report)
}

fn run_dump(args: &DumpArgs, format: Format) -> Result<(String, bool)> {
    let ctx = if args.auto_field {
        QContext::auto(args.order)?
    } else {
        resolve_context(args.order, args.p, args.q)?
    };
    let json = match args.kind {
        DumpKind::Hochschild => {
            let a = load_algebra(&args.algebra, &ctx)?;
            ncomplex_to_json(&hochschild_ncomplex(&a, &ctx, args.nmax)?)
        }
        DumpKind::Bar => {
            let a = load_algebra(&args.algebra, &ctx)?;
            simplicial_to_json(&hochschild_simplicial(&a, args.nmax)?)
        }
        DumpKind::Tor => {
            let (m, n) =
                load_modules(&args.module_m, &args.module_n, &ctx, Side::Right, Side::Left)?;
            ncomplex_to_json(&tor_complex(&m, &n, &ctx, args.nmax)?)
        }
        DumpKind::Hom => {
            let (m, n) =
                load_modules(&args.module_m, &args.module_n, &ctx, Side::Left, Side::Left)?;
            ncomplex_to_json(&hom_complex(&m, &n, &ctx, args.nmax)?)
        }
    };
    match &args.dump {
        Some(path) => {
            fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
            let mut report = Report::new("dump");
            report.context(&ctx);
            report.check("document written", true, path.display().to_string());
            Ok((report.render(format), true))
        }
        None => Ok((json, true)),
    }
}
