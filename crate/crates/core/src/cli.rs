//! Command-line surface.
//!
//! Subcommands: `count`, `table`, `asymptotic`, `verify`, `bijection`,
//! `waring`, `diagonal`, `check-digraph`. Counts print as decimal strings;
//! structured results print as JSON. Errors go to stderr as
//! `error[<Code>]: <message>` with a nonzero exit code.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::closed_forms;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::group::{Group, GroupElement};
use crate::oracle;
use crate::restriction::{
    build_carlitz, build_mullen, build_window_sum, build_window_product_ne_one, ClassSpec,
    Condition2Outcome, RestrictionDigraph,
};
use crate::spectral;
use crate::subset_waring::{self, WaringOutcome};
use crate::tables::{self, TablePreset};
use crate::transfer;

#[derive(Parser)]
#[command(
    name = "abelicomp",
    version,
    about = "Exact and asymptotic counting of restricted compositions over finite abelian groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for enumeration-heavy subcommands (verify, bijection).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Enumeration state budget; the ABELICOMP_BUDGET environment variable
    /// overrides the built-in default, this flag overrides both.
    #[arg(long, global = true)]
    budget: Option<u128>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact count of m-part compositions of a target.
    Count(CountArgs),
    /// Byte-stable reproduction of a pinned reference table.
    Table(TableArgs),
    /// Growth constants (A, B) from closed forms or spectral data.
    Asymptotic(AsymptoticArgs),
    /// Diff transfer counts against the brute-force oracle.
    Verify(VerifyArgs),
    /// Prefix-sum bijection and target-independence reports.
    Bijection(BijectionArgs),
    /// Waring number over GF(p^n).
    Waring(WaringArgs),
    /// Number of solutions of a diagonal equation over GF(p^n).
    Diagonal(DiagonalArgs),
    /// Validate a digraph JSON file and report its structure.
    CheckDigraph(CheckDigraphArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClassKind {
    Mullen,
    Carlitz,
    CarlitzWeak,
    WindowSum,
    ProductNeOne,
    Custom,
}

#[derive(Args)]
struct ClassArgs {
    /// Composition class.
    #[arg(long, value_enum)]
    class: ClassKind,
    /// Window parameter d of the class.
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Cyclic moduli of the group, e.g. `5` or `2,3`.
    #[arg(long, value_delimiter = ',')]
    moduli: Vec<u64>,
    /// `p,n` of GF(p^n); used by the product class.
    #[arg(long, value_delimiter = ',')]
    field: Vec<u64>,
    /// Allow zero parts where the class has a weak variant.
    #[arg(long)]
    weak: bool,
    /// Require the first d parts nonzero (weak no-repeat class).
    #[arg(long)]
    first_d_nonzero: bool,
    /// Digraph JSON file for `--class custom`.
    #[arg(long)]
    digraph: Option<PathBuf>,
}

impl ClassArgs {
    fn group(&self) -> Result<Group> {
        if self.moduli.is_empty() {
            return Err(Error::Parse("missing --moduli".into()));
        }
        Group::new(&self.moduli)
    }

    fn field_spec(&self) -> Result<FieldSpec> {
        match self.field.as_slice() {
            [p] => FieldSpec::new(*p, 1, None),
            [p, n] => FieldSpec::new(*p, *n as usize, None),
            _ => Err(Error::Parse("expected --field p or --field p,n".into())),
        }
    }

    fn build(&self) -> Result<RestrictionDigraph> {
        match self.class {
            ClassKind::Mullen => build_mullen(&self.group()?, self.d),
            ClassKind::Carlitz => build_carlitz(&self.group()?, self.d, false, false),
            ClassKind::CarlitzWeak => {
                build_carlitz(&self.group()?, self.d, true, self.first_d_nonzero)
            }
            ClassKind::WindowSum => build_window_sum(&self.group()?, self.d, self.weak),
            ClassKind::ProductNeOne => {
                let f = self.field_spec()?;
                build_window_product_ne_one(&f, self.d)
            }
            ClassKind::Custom => {
                let path = self
                    .digraph
                    .as_ref()
                    .ok_or_else(|| Error::Parse("--class custom needs --digraph".into()))?;
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
                let value: serde_json::Value = serde_json::from_str(&text)
                    .map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
                RestrictionDigraph::from_json(&value)
            }
        }
    }
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    class: ClassArgs,
    /// Number of parts.
    #[arg(long)]
    m: usize,
    /// Target sum, coordinates comma-separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    s: Vec<u64>,
    /// Emit the full count vector over all targets as JSON.
    #[arg(long)]
    all_s: bool,
}

#[derive(Args)]
struct TableArgs {
    /// table1 | table2 | table3 | table4
    #[arg(long)]
    preset: String,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct AsymptoticArgs {
    #[command(flatten)]
    class: ClassArgs,
    /// Residue b of m modulo the span.
    #[arg(long, default_value_t = 0)]
    b: usize,
    #[arg(long, value_enum, default_value_t = ConstantSource::Closed)]
    source: ConstantSource,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConstantSource {
    Closed,
    Spectral,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    class: ClassArgs,
    /// Check every m from 0 up to this bound.
    #[arg(long)]
    max_m: usize,
}

#[derive(Args)]
struct BijectionArgs {
    /// Window parameter d.
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, value_delimiter = ',')]
    moduli: Vec<u64>,
    /// Number of parts.
    #[arg(long)]
    m: usize,
}

#[derive(Args)]
struct WaringArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Power in the Waring question.
    #[arg(long)]
    k: u64,
    #[arg(long, default_value_t = 64)]
    max_m: usize,
}

#[derive(Args)]
struct DiagonalArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Nonzero coefficients, comma-separated; coordinates of one element
    /// joined by `:` for extension fields (e.g. `1:0,0:1`).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    coeffs: Vec<String>,
    /// Exponents, comma-separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    exps: Vec<u64>,
    /// Right-hand side, same element syntax as --coeffs.
    #[arg(long)]
    a: String,
}

#[derive(Args)]
struct CheckDigraphArgs {
    file: PathBuf,
    /// Walk-length bound of the aperiodicity-condition search.
    #[arg(long, default_value_t = 4)]
    l_max: usize,
}

fn parse_element(group: &Group, text: &str) -> Result<GroupElement> {
    let coords: Vec<u64> = text
        .split(':')
        .map(|c| {
            c.parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad coordinate {c:?}")))
        })
        .collect::<Result<_>>()?;
    group.element_from(&coords)
}

fn budget_of(cli_budget: Option<u128>) -> u128 {
    cli_budget
        .or_else(|| {
            std::env::var("ABELICOMP_BUDGET")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(oracle::DEFAULT_BUDGET)
}

fn run_count(args: &CountArgs) -> Result<()> {
    let digraph = args.class.build()?;
    let group = digraph.group();
    if args.all_s {
        let all = transfer::count_all(&digraph, args.m)?;
        println!("{}", all.to_json());
        return Ok(());
    }
    if args.s.is_empty() {
        return Err(Error::Parse("missing --s (or pass --all-s)".into()));
    }
    let s = group.element_from(&args.s)?;
    println!("{}", transfer::count(&digraph, args.m, &s)?);
    Ok(())
}

fn run_table(args: &TableArgs) -> Result<()> {
    let preset: TablePreset = args.preset.parse()?;
    match args.format {
        OutputFormat::Csv => print!("{}", tables::render_csv(preset)?),
        OutputFormat::Json => println!("{}", tables::render_json(preset)?),
    }
    Ok(())
}

fn closed_constants(args: &AsymptoticArgs) -> Result<closed_forms::AsymptoticEstimate> {
    let c = &args.class;
    let d = c.d as u64;
    match c.class {
        ClassKind::Mullen => {
            let order = c.group()?.order() as u64;
            closed_forms::theorem3_constants(order, d, args.b)
        }
        ClassKind::Carlitz => {
            let order = c.group()?.order() as u64;
            closed_forms::corollary2_constants(2, order, d, args.b)
        }
        ClassKind::CarlitzWeak => {
            let order = c.group()?.order() as u64;
            let item = if c.first_d_nonzero { 3 } else { 1 };
            closed_forms::corollary2_constants(item, order, d, args.b)
        }
        ClassKind::WindowSum => {
            if !c.weak {
                return Err(Error::Unsupported(
                    "no closed form for the nonzero-parts window-sum class; use --source spectral"
                        .into(),
                ));
            }
            let order = c.group()?.order() as u64;
            closed_forms::corollary2_constants(4, order, d, args.b)
        }
        ClassKind::ProductNeOne => {
            let q = c.field_spec()?.order() as u64;
            closed_forms::corollary2_constants(5, q, d, args.b)
        }
        ClassKind::Custom => Err(Error::Unsupported(
            "custom digraphs have no closed form; use --source spectral".into(),
        )),
    }
}

fn run_asymptotic(args: &AsymptoticArgs) -> Result<()> {
    match args.source {
        ConstantSource::Closed => {
            let est = closed_constants(args)?;
            println!("{}", serde_json::to_string(&est).unwrap());
        }
        ConstantSource::Spectral => {
            let digraph = args.class.build()?;
            if digraph.recurrent().len() < 2 || !digraph.is_strongly_connected() {
                return Err(Error::HypothesisViolated(
                    "recurrent digraph must be strongly connected with at least two vertices"
                        .into(),
                ));
            }
            if digraph.cycle_gcd() != 1 {
                return Err(Error::HypothesisViolated(format!(
                    "cycle gcd is {}, not 1",
                    digraph.cycle_gcd()
                )));
            }
            let perron =
                spectral::perron::<f64>(&digraph, spectral::DEFAULT_TOL, spectral::DEFAULT_MAX_ITER)?;
            let est = spectral::asymptotic_constants(&digraph, args.b, &perron)?;
            // constants may depend on the residue; surface that
            for other_b in 0..digraph.span() {
                if other_b == args.b {
                    continue;
                }
                if let Ok(other) = spectral::asymptotic_constants(&digraph, other_b, &perron) {
                    let a0 = est.a.to_f64();
                    let a1 = other.a.to_f64();
                    if (a0 - a1).abs() > 1e-9 * a0.abs().max(1.0) {
                        eprintln!(
                            "warning: constants differ across residues (A[b={}] = {a0}, A[b={other_b}] = {a1})",
                            args.b
                        );
                    }
                }
            }
            let mut value = serde_json::to_value(&est).unwrap();
            value["perron"] = json!({
                "rho": perron.rho,
                "iterations": perron.iterations,
                "residual": perron.residual,
            });
            println!("{value}");
        }
    }
    Ok(())
}

fn run_verify(args: &VerifyArgs, budget: u128, jobs: usize) -> Result<i32> {
    let digraph = args.class.build()?;
    let group = digraph.group().clone();
    let spec = digraph
        .class()
        .cloned()
        .ok_or_else(|| Error::Unsupported("verify needs a built-in class".into()))?;
    let mut mismatches = 0usize;
    for m in 0..=args.max_m {
        let exact = transfer::count_all(&digraph, m)?;
        let brute = oracle::brute_count_all(&group, &spec, m, budget, jobs)?;
        let mut ok = true;
        for idx in 0..group.order() {
            if exact.coeff_at(idx) != brute.coeff_at(idx) {
                ok = false;
                mismatches += 1;
                println!(
                    "m={m} s={} transfer={} oracle={} MISMATCH",
                    group.element_of(idx)?,
                    exact.coeff_at(idx),
                    brute.coeff_at(idx)
                );
            }
        }
        if ok {
            println!("m={m} OK ({} targets)", group.order());
        }
    }
    if mismatches > 0 {
        println!("{mismatches} mismatches");
        return Ok(1);
    }
    println!("all counts match");
    Ok(0)
}

fn run_bijection(args: &BijectionArgs, budget: u128) -> Result<()> {
    if args.moduli.is_empty() {
        return Err(Error::Parse("missing --moduli".into()));
    }
    let group = Group::new(&args.moduli)?;
    let prop5 = crate::bijections::check_bijection_prop5(&group, args.d, args.m, budget)?;
    let indep =
        crate::bijections::check_s_independence(&group, &ClassSpec::mullen(args.d), args.m)?;
    println!(
        "{}",
        json!({
            "prefix_sum_bijection": prop5,
            "target_independence": indep,
        })
    );
    Ok(())
}

fn run_waring(args: &WaringArgs) -> Result<()> {
    let field = FieldSpec::new(args.p, args.n, None)?;
    let outcome = subset_waring::waring_number(&field, args.k, args.max_m)?;
    let value = match outcome {
        WaringOutcome::Reached(m) => json!({"p": args.p, "n": args.n, "k": args.k, "waring": m}),
        WaringOutcome::NotReached(max) => {
            json!({"p": args.p, "n": args.n, "k": args.k, "not_reached": max})
        }
    };
    println!("{value}");
    Ok(())
}

fn run_diagonal(args: &DiagonalArgs) -> Result<()> {
    let field = FieldSpec::new(args.p, args.n, None)?;
    let group = field.additive_group();
    let coeffs: Vec<GroupElement> = args
        .coeffs
        .iter()
        .map(|t| parse_element(group, t))
        .collect::<Result<_>>()?;
    let target = parse_element(group, &args.a)?;
    let count = subset_waring::diagonal_count(&field, &coeffs, &args.exps, &target)?;
    println!("{count}");
    Ok(())
}

fn run_check_digraph(args: &CheckDigraphArgs) -> Result<()> {
    let text = std::fs::read_to_string(&args.file)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", args.file.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
    let digraph = RestrictionDigraph::from_json(&value)?;
    let condition2 = match digraph.check_condition2(args.l_max) {
        Condition2Outcome::Witness(ws) => json!({
            "witness": ws.iter().map(|w| json!({
                "coord": w.coord,
                "from": w.from,
                "to": w.to,
                "walk_len": w.walk_len,
                "sums": w.sums,
                "walk_count": w.walk_count,
            })).collect::<Vec<_>>()
        }),
        Condition2Outcome::Unknown => json!("unknown"),
    };
    let terminal_counts: serde_json::Map<String, serde_json::Value> = (0..digraph.span())
        .map(|b| {
            (
                b.to_string(),
                json!(digraph.terminal_arcs(b).map_or(0, |t| t.len())),
            )
        })
        .collect();
    println!(
        "{}",
        json!({
            "valid": true,
            "moduli": digraph.group().moduli(),
            "span": digraph.span(),
            "recurrent_count": digraph.recurrent().len(),
            "start_arcs": digraph.start_arcs().len(),
            "terminal_arcs": terminal_counts,
            "strongly_connected": digraph.is_strongly_connected(),
            "has_two_vertices": digraph.recurrent().len() >= 2,
            "cycle_gcd": digraph.cycle_gcd(),
            "condition2": condition2,
        })
    );
    Ok(())
}

/// Entry point; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let budget = budget_of(cli.budget);
    let result: Result<i32> = match &cli.command {
        Command::Count(args) => run_count(args).map(|()| 0),
        Command::Table(args) => run_table(args).map(|()| 0),
        Command::Asymptotic(args) => run_asymptotic(args).map(|()| 0),
        Command::Verify(args) => run_verify(args, budget, cli.jobs.max(1)),
        Command::Bijection(args) => run_bijection(args, budget).map(|()| 0),
        Command::Waring(args) => run_waring(args).map(|()| 0),
        Command::Diagonal(args) => run_diagonal(args).map(|()| 0),
        Command::CheckDigraph(args) => run_check_digraph(args).map(|()| 0),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            1
        }
    }
}
