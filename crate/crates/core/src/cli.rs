//! Command-line front end. Every subcommand produces one JSON document
//! (schema `v1`, all numeric results as strings) or an aligned table.
//!
//! Exit codes: 0 success, 1 a check failed, 2 invalid input,
//! 3 unsupported input, 4 inconclusive within budget.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::dowling::{build_family, count_atoms, DowlingError, FamilyPoset, FamilySpec};
use crate::poset::FinitePoset;
use crate::reflection::{parameter_grid, verify_theorem, CosetParams, ReflectionError, VerifyReport};
use crate::series::{mobius_q_dd0, mobius_q_dde, SeriesError};
use crate::shellability::{
    admits_rao, check_recursive_atom_ordering, lex_atom_order, RaoOutcome, ShellError, DEFAULT_SHELL_BUDGET,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "eigenlattice", version, about = "Dowling-lattice families, eigenspace posets and Möbius computations")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Step budget for searches.
    #[arg(long, env = "EIGENLATTICE_BUDGET", default_value_t = DEFAULT_SHELL_BUDGET, global = true)]
    pub budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a family Q_n(r,d,k,J) and report its size, length and Möbius number.
    Dowling {
        #[command(flatten)]
        family: FamilyArgs,
        /// Include the full poset (elements and cover relations).
        #[arg(long)]
        poset: bool,
    },
    /// Verify the eigenspace poset of a reflection coset against its predicted family.
    Eigen(EigenArgs),
    /// Möbius numbers from exponential generating functions.
    #[command(subcommand)]
    Series(SeriesCommand),
    /// Check a recursive atom ordering and print its certificate.
    ShellCheck {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = Ordering::Lex)]
        ordering: Ordering,
    },
    /// Reduced homology of the order complex of a family.
    Homology {
        #[command(flatten)]
        family: FamilyArgs,
        /// Use the proper part (bounds removed).
        #[arg(long)]
        proper: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Forbidden zero-block sizes, comma separated.
    #[arg(long = "J", visible_alias = "j", value_delimiter = ',')]
    pub forbidden: Vec<usize>,
}

impl FamilyArgs {
    fn spec(&self) -> Result<FamilySpec, DowlingError> {
        FamilySpec::new(self.n, self.r, self.d, self.k, self.forbidden.iter().copied())
    }
}

#[derive(Debug, Clone, Args)]
pub struct EigenArgs {
    /// Run the whole parameter grid instead of one coset.
    #[arg(long, conflicts_with_all = ["r", "p", "n"])]
    pub grid: bool,
    #[arg(long, required_unless_present = "grid")]
    pub r: Option<u64>,
    #[arg(long, required_unless_present = "grid")]
    pub p: Option<u64>,
    #[arg(long, required_unless_present = "grid")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub e: u64,
    #[arg(long, default_value_t = 1)]
    pub m: u64,
    /// Exponent c of ζ = exp(2πi·c/m).
    #[arg(long)]
    pub zeta_exp: Option<u64>,
    /// Use a non-diagonal coset representative (1, 2 or 3).
    #[arg(long)]
    pub exceptional: Option<u8>,
    #[arg(long, default_value_t = 3)]
    pub rmax: u64,
    #[arg(long, default_value_t = 2)]
    pub nmin: usize,
    #[arg(long, default_value_t = 4)]
    pub nmax: usize,
    #[arg(long, default_value_t = 4)]
    pub mmax: u64,
}

#[derive(Debug, Subcommand)]
pub enum SeriesCommand {
    /// μ(Q_{dn+e}(dr,d,d)) for n = 0..=T.
    MuDde {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        e: usize,
        #[arg(long = "T", visible_alias = "t", default_value_t = 6)]
        t: usize,
    },
    /// μ(Q_{dn}(dr,d,d,{0})) for n = 0..=T.
    MuDd0 {
        #[arg(long)]
        r: u64,
        #[arg(long)]
        d: usize,
        #[arg(long = "T", visible_alias = "t", default_value_t = 6)]
        t: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ordering {
    Lex,
    Search,
}

/// A finished command: the report and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub code: i32,
    pub value: Value,
}

impl Report {
    fn ok(value: Value) -> Self {
        Self { code: EXIT_OK, value }
    }

    fn error(code: i32, command: &str, message: impl ToString) -> Self {
        Self {
            code,
            value: json!({ "schema": "v1", "command": command, "error": message.to_string() }),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.value).expect("report serialises");
                s.push('\n');
                s
            }
            Format::Table => table(&self.value),
        }
    }
}

fn table(v: &Value) -> String {
    let Value::Object(map) = v else { return format!("{v}\n") };
    let width = map.keys().map(|k| k.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, val) in map {
        let shown = match val {
            Value::String(s) => s.clone(),
            Value::Array(a) if a.len() > 12 => format!("[{} entries]", a.len()),
            Value::Object(o) if o.len() > 12 => format!("{{{} fields}}", o.len()),
            other => other.to_string(),
        };
        out.push_str(&format!("{k:<width$}  {shown}\n"));
    }
    out
}

fn dowling_code(e: &DowlingError) -> i32 {
    match e {
        DowlingError::InvalidSpec(_) | DowlingError::NotAPartition(_) | DowlingError::ParseKey(_) => EXIT_INVALID,
        DowlingError::NotInFamily(_) => EXIT_FAILED,
    }
}

fn reflection_code(e: &ReflectionError) -> i32 {
    match e {
        ReflectionError::InvalidParams(_) | ReflectionError::IncompatibleModulus(..) => EXIT_INVALID,
        ReflectionError::ExceptionalCosetUnsupported => EXIT_UNSUPPORTED,
        ReflectionError::ColouringViolation(_) | ReflectionError::NoUniqueMax => EXIT_FAILED,
    }
}

fn series_code(e: &SeriesError) -> i32 {
    match e {
        SeriesError::InvalidParams(_) | SeriesError::HypothesisViolated(_) => EXIT_INVALID,
        SeriesError::BadConstantTerm { .. } | SeriesError::NonIntegerMu { .. } => EXIT_FAILED,
    }
}

fn shell_code(e: &ShellError) -> i32 {
    match e {
        ShellError::NotBounded | ShellError::NotAFamilyPoset => EXIT_UNSUPPORTED,
        ShellError::InvalidOrdering => EXIT_INVALID,
    }
}

fn strings<T: ToString>(xs: impl IntoIterator<Item = T>) -> Vec<String> {
    xs.into_iter().map(|x| x.to_string()).collect()
}

/// An independent prediction of `μ(0̂, 1̂)` for the families that have one.
pub fn closed_form_mobius(spec: &FamilySpec) -> Option<(&'static str, BigInt)> {
    let n = spec.n as i64;
    let r = i64::from(spec.r);
    let sign = if n % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
    if spec.d == 1 && spec.k == 1 {
        if spec.forbidden.is_empty() {
            let prod: BigInt = (1..n).map(|j| BigInt::from(j * r + 1)).product();
            return Some(("product", sign * prod));
        }
        if spec.forbidden.iter().eq([1].iter()) && r >= 2 && n >= 2 {
            let prod: BigInt = (1..=n - 2).map(|j| BigInt::from(j * r + 1)).product();
            return Some(("restricted-product", sign * prod * BigInt::from((n - 1) * (r - 1))));
        }
        return None;
    }
    let d = spec.d;
    if spec.k != d || !(spec.r as usize).is_multiple_of(d) {
        return None;
    }
    let (q, e) = (spec.n / d, spec.n % d);
    let base = u64::from(spec.r) / d as u64;
    if spec.forbidden.is_empty() {
        let mu = mobius_q_dde(base, d, e, q).ok()?;
        return Some(("series", mu[q].clone()));
    }
    if e == 0 && spec.forbidden.iter().eq([0].iter()) {
        let mu = mobius_q_dd0(base, d, q).ok()?;
        return Some(("series-restricted", mu[q].clone()));
    }
    None
}

fn bounded_mobius(p: &FinitePoset) -> Option<i64> {
    p.mobius_bounded().ok()
}

fn family(args: &FamilyArgs, command: &str) -> Result<FamilyPoset, Report> {
    let spec = args.spec().map_err(|e| Report::error(dowling_code(&e), command, e))?;
    build_family(&spec).map_err(|e| Report::error(dowling_code(&e), command, e))
}

fn run_dowling(args: &FamilyArgs, with_poset: bool) -> Report {
    let f = match family(args, "dowling") {
        Ok(f) => f,
        Err(r) => return r,
    };
    let spec = f.spec().clone();
    let p = f.poset();
    let mu = bounded_mobius(p);
    let atoms = match count_atoms(&spec) {
        Ok(a) => a,
        Err(e) => return Report::error(dowling_code(&e), "dowling", e),
    };
    let closed = closed_form_mobius(&spec);
    let mut code = EXIT_OK;
    let check = closed.map(|(name, value)| {
        let matches = mu.is_some_and(|m| BigInt::from(m) == value);
        if !matches {
            code = EXIT_FAILED;
        }
        json!({ "formula": name, "value": value.to_string(), "matches": matches })
    });
    let mut v = json!({
        "schema": "v1",
        "command": "dowling",
        "family": spec.to_string(),
        "size": p.len().to_string(),
        "length": p.length().map(|l| l.to_string()),
        "ranked": p.rank_function().is_some(),
        "lattice": p.is_lattice(),
        "artificial_bottom": f.artificial_bottom().is_some(),
        "mobius": mu.map(|m| m.to_string()),
        "atoms": p.atoms().len().to_string(),
        "maximal_block_elements": atoms.to_string(),
        "closed_form": check,
    });
    if with_poset {
        v["poset"] = serde_json::to_value(p.to_json()).expect("poset serialises");
    }
    Report { code, value: v }
}

fn report_json(r: &VerifyReport) -> Value {
    json!({
        "r": r.params.r.to_string(),
        "p": r.params.p.to_string(),
        "n": r.params.n.to_string(),
        "e": r.params.e.to_string(),
        "m": r.params.m.to_string(),
        "zeta_exp": r.params.zeta_exp.to_string(),
        "case": r.case,
        "target": r.target,
        "lhs_size": r.lhs_size.to_string(),
        "rhs_size": r.rhs_size.to_string(),
        "tau_bijective": r.tau_bijective,
        "order_preserved": r.order_preserved,
        "iso": r.iso,
        "mobius": r.mobius.to_string(),
        "pass": r.passed(),
    })
}

fn run_eigen(args: &EigenArgs) -> Report {
    if args.grid {
        let grid = parameter_grid(args.rmax, args.nmin, args.nmax, args.mmax);
        let mut results = Vec::with_capacity(grid.len());
        let mut failed = 0usize;
        for params in &grid {
            match verify_theorem(params) {
                Ok(r) => {
                    failed += usize::from(!r.passed());
                    results.push(report_json(&r));
                }
                Err(e) => return Report::error(reflection_code(&e), "eigen", e),
            }
        }
        let code = if failed == 0 { EXIT_OK } else { EXIT_FAILED };
        return Report {
            code,
            value: json!({
                "schema": "v1",
                "command": "eigen-grid",
                "total": grid.len().to_string(),
                "passed": (grid.len() - failed).to_string(),
                "failed": failed.to_string(),
                "results": results,
            }),
        };
    }
    let (Some(r), Some(p), Some(n)) = (args.r, args.p, args.n) else {
        return Report::error(EXIT_INVALID, "eigen", "--r, --p and --n are required");
    };
    let params = CosetParams::new(r, p, n, args.e, args.m).and_then(|c| match args.zeta_exp {
        Some(z) => c.with_zeta_exp(z),
        None => Ok(c),
    });
    let params = match params {
        Ok(c) => match args.exceptional {
            Some(i) => c.exceptional(i),
            None => c,
        },
        Err(e) => return Report::error(reflection_code(&e), "eigen", e),
    };
    match verify_theorem(&params) {
        Ok(rep) => {
            let mut v = report_json(&rep);
            v["schema"] = json!("v1");
            v["command"] = json!("eigen");
            Report { code: if rep.passed() { EXIT_OK } else { EXIT_FAILED }, value: v }
        }
        Err(e) => Report::error(reflection_code(&e), "eigen", e),
    }
}

fn run_series(cmd: &SeriesCommand) -> Report {
    let (name, res, params) = match *cmd {
        SeriesCommand::MuDde { r, d, e, t } => (
            "series mu-dde",
            mobius_q_dde(r, d, e, t),
            json!({ "r": r.to_string(), "d": d.to_string(), "e": e.to_string(), "T": t.to_string() }),
        ),
        SeriesCommand::MuDd0 { r, d, t } => (
            "series mu-dd0",
            mobius_q_dd0(r, d, t),
            json!({ "r": r.to_string(), "d": d.to_string(), "T": t.to_string() }),
        ),
    };
    match res {
        Ok(mu) => Report::ok(json!({ "schema": "v1", "command": name, "params": params, "mu": strings(mu) })),
        Err(e) => Report::error(series_code(&e), name, e),
    }
}

fn run_shell(args: &FamilyArgs, ordering: Ordering, budget: u64) -> Report {
    let f = match family(args, "shell-check") {
        Ok(f) => f,
        Err(r) => return r,
    };
    let p = f.poset();
    let outcome = match ordering {
        Ordering::Lex => lex_atom_order(&f).and_then(|ord| check_recursive_atom_ordering(p, &ord, budget)),
        Ordering::Search => admits_rao(p, budget),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => return Report::error(shell_code(&e), "shell-check", e),
    };
    let mut v = json!({
        "schema": "v1",
        "command": "shell-check",
        "family": f.spec().to_string(),
        "ordering": match ordering { Ordering::Lex => "lex", Ordering::Search => "search" },
        "budget": budget.to_string(),
    });
    let code = match outcome {
        RaoOutcome::Certified(c) => {
            v["outcome"] = json!("certified");
            v["verified"] = json!(c.verify(p));
            v["certificate"] = serde_json::to_value(&c).expect("certificate serialises");
            EXIT_OK
        }
        RaoOutcome::Failed(viol) => {
            v["outcome"] = json!("failed");
            v["violation"] = serde_json::to_value(&viol).expect("violation serialises");
            EXIT_FAILED
        }
        RaoOutcome::Inconclusive => {
            v["outcome"] = json!("inconclusive");
            EXIT_INCONCLUSIVE
        }
    };
    Report { code, value: v }
}

fn run_homology(args: &FamilyArgs, proper: bool) -> Report {
    let f = match family(args, "homology") {
        Ok(f) => f,
        Err(r) => return r,
    };
    let p = f.poset();
    let target = if proper {
        match p.proper_part() {
            Ok(q) => q,
            Err(e) => return Report::error(EXIT_UNSUPPORTED, "homology", e),
        }
    } else {
        p.clone()
    };
    let betti = target.order_complex().homology_ranks();
    let mut ranks = vec![betti.minus_one];
    ranks.extend(&betti.ranks);
    Report::ok(json!({
        "schema": "v1",
        "command": "homology",
        "family": f.spec().to_string(),
        "proper": proper,
        "vertices": target.len().to_string(),
        "betti_from_degree": "-1",
        "betti": strings(ranks),
        "euler_characteristic": betti.reduced_euler_characteristic().to_string(),
        "mobius": bounded_mobius(p).map(|m| m.to_string()),
    }))
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Report {
    match &cli.command {
        Command::Dowling { family, poset } => run_dowling(family, *poset),
        Command::Eigen(args) => run_eigen(args),
        Command::Series(cmd) => run_series(cmd),
        Command::ShellCheck { family, ordering } => run_shell(family, *ordering, cli.budget),
        Command::Homology { family, proper } => run_homology(family, *proper),
    }
}

/// Parses `args`, runs the command, writes the output and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let report = execute(&cli);
    let text = report.render(cli.format);
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_INVALID;
            }
        }
        None => print!("{text}"),
    }
    report.code
}
