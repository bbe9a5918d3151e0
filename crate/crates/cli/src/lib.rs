//! Command-line front end for `covdepth`.
//!
//! Every command builds a document in memory and renders it as plain text,
//! JSON or CSV. Exact values are written as `"num/den"` strings next to a
//! rounded decimal expansion.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use covdepth::asymptotics::{self, GapReport};
use covdepth::codes::{dual, extended_reed_solomon, hamming_code, simplex_code};
use covdepth::coverage::{self, expectation_budgeted, Route};
use covdepth::decimal::{format_rational, to_decimal};
use covdepth::search::{self, SearchMode, DEFAULT_BUDGET};
use covdepth::{verify, FieldSpec, LinearCode, Matrix, Rational};

/// Field sizes on the horizontal axis of the simplex-versus-bound figure.
pub const FIGURE1_Q: [u64; 13] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23];
/// Dimensions plotted in the simplex-versus-bound figure.
pub const FIGURE1_K: [u32; 5] = [3, 4, 5, 6, 7];
/// Minimum decimal digits in figure output.
pub const FIGURE1_MIN_DIGITS: usize = 20;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_INVARIANT: i32 = 3;

#[derive(Parser, Debug, Clone)]
#[command(name = "covdepth", version, about = "Expected coverage depth of linear codes")]
pub struct RunConfig {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Field order, e.g. `8`, `2^3` or `q=9`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Decimal digits after the point.
    #[arg(long, global = true, default_value_t = covdepth::decimal::DEFAULT_DIGITS)]
    pub digits: usize,
    /// Worker threads; 0 uses all cores.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Cap on enumeration size (candidates or search nodes).
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Enumerate information sets of the code.
    Exact,
    /// Enumerate independent sets of the dual code.
    Dual,
    /// Pick `exact` or `dual` by the redundancy heuristic.
    Auto,
    /// Closed form (simplex, Hamming, MDS).
    Formula,
    /// Monte Carlo estimate.
    Mc,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Dual => "dual",
            Method::Auto => "auto",
            Method::Formula => "formula",
            Method::Mc => "mc",
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Projective,
    Full,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// Simplex gap over a grid of q at fixed k.
    Simplex,
    /// Hamming gap over a grid of q at fixed r.
    Hamming,
    /// Limit of the simplex gap as k grows, over a grid of q.
    Series,
    /// MDS bound ratio at fixed rate over a grid of n.
    MdsRate,
    /// Binary Hamming ratio bound over a grid of r.
    BinaryHamming,
}

#[derive(Args, Debug, Clone)]
pub struct CodeArgs {
    /// `simplex`, `hamming`, `rs`, `dual-of:<code>` or `file:<path>`.
    #[arg(long)]
    pub code: String,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub r: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Expected number of draws for one code.
    Expect {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// MDS lower bound n (H_n - H_{n-k}).
    Bound {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
    },
    /// Exhaustive search for the minimum expectation.
    Search {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Projective)]
        mode: ModeArg,
    },
    /// Monte Carlo estimate of the expectation.
    Simulate {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also compute the exact value and the z-score.
        #[arg(long)]
        exact: bool,
    },
    /// Gap and ratio tables against the MDS bound.
    Asymptotics {
        #[arg(long, value_enum, default_value_t = FamilyArg::Simplex)]
        family: FamilyArg,
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        r: Option<u32>,
        /// Field sizes: `lo..hi` (prime powers in range) or a comma list.
        #[arg(long, default_value = "2..64")]
        q_grid: String,
        /// Code lengths for `mds-rate`.
        #[arg(long, default_value = "10,100,1000")]
        n_grid: String,
        /// Redundancies for `binary-hamming`.
        #[arg(long, default_value = "2..12")]
        r_grid: String,
        #[arg(long, default_value_t = 0.5)]
        rate: f64,
        /// Truncation tolerance for `series`.
        #[arg(long, default_value_t = 1e-15)]
        tol: f64,
    },
    /// Simplex expectation and MDS bound for k = 3..7 over the plotted q.
    Figure1,
    /// Run the invariant fixture suite.
    Verify,
}

/// A failed command with its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: msg.into(),
        }
    }

    fn invariant(msg: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INVARIANT,
            message: msg.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<covdepth::Error> for CliError {
    fn from(e: covdepth::Error) -> Self {
        let code = match e {
            covdepth::Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Rendered command output with the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

/// Parses `args`, runs the command and writes its output. Returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&config) {
        Ok(out) => {
            if let Err(e) = emit(&config.global, &out.text) {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

fn emit(global: &GlobalOpts, text: &str) -> std::io::Result<()> {
    match &global.out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

/// Runs a parsed command and renders its document.
pub fn execute(config: &RunConfig) -> CliResult<Output> {
    let g = &config.global;
    let ok = |text: String| Ok(Output { text, code: EXIT_OK });
    match &config.command {
        Command::Expect {
            code,
            method,
            trials,
            seed,
        } => ok(cmd_expect(g, code, *method, *trials, *seed)?),
        Command::Bound { n, k } => ok(cmd_bound(g, *n, *k)?),
        Command::Search { k, n, mode } => ok(cmd_search(g, *k, *n, *mode)?),
        Command::Simulate {
            code,
            trials,
            seed,
            exact,
        } => ok(cmd_simulate(g, code, *trials, *seed, *exact)?),
        Command::Asymptotics {
            family,
            k,
            r,
            q_grid,
            n_grid,
            r_grid,
            rate,
            tol,
        } => ok(cmd_asymptotics(
            g, *family, *k, *r, q_grid, n_grid, r_grid, *rate, *tol,
        )?),
        Command::Figure1 => ok(cmd_figure1(g)?),
        Command::Verify => cmd_verify(g),
    }
}

fn field_opt(g: &GlobalOpts) -> CliResult<Option<FieldSpec>> {
    g.field
        .as_deref()
        .map(|s| FieldSpec::parse(s).map_err(CliError::from))
        .transpose()
}

fn require_field(g: &GlobalOpts) -> CliResult<FieldSpec> {
    field_opt(g)?.ok_or_else(|| CliError::usage("--field is required"))
}

/// What a code spec named, for closed-form lookup and labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CodeKind {
    Simplex { k: usize },
    Hamming { r: usize },
    ReedSolomon,
    Dual(Box<CodeKind>),
    File(PathBuf),
}

impl CodeKind {
    fn name(&self) -> String {
        match self {
            CodeKind::Simplex { .. } => "simplex".into(),
            CodeKind::Hamming { .. } => "hamming".into(),
            CodeKind::ReedSolomon => "rs".into(),
            CodeKind::Dual(inner) => format!("dual-of:{}", inner.name()),
            CodeKind::File(p) => format!("file:{}", p.display()),
        }
    }
}

/// Builds the code named by `spec`.
pub fn resolve_code(
    spec: &str,
    args: &CodeArgs,
    field: Option<&FieldSpec>,
) -> CliResult<(LinearCode, CodeKind)> {
    let need_field = || field.cloned().ok_or_else(|| CliError::usage("--field is required"));
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| CliError::usage(format!("code `{spec}` needs --{flag}")))
    };
    if let Some(inner) = spec.strip_prefix("dual-of:") {
        let (code, kind) = resolve_code(inner, args, field)?;
        return Ok((dual(&code), CodeKind::Dual(Box::new(kind))));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {path}: {e}")))?;
        let m = Matrix::parse_text(&text)?;
        if let Some(f) = field {
            if f.q() != m.field().q() {
                return Err(CliError::usage(format!(
                    "--field {} disagrees with q = {} in {path}",
                    f.q(),
                    m.field().q()
                )));
            }
        }
        return Ok((LinearCode::new(m)?, CodeKind::File(path.into())));
    }
    match spec {
        "simplex" => {
            let k = need(args.k, "k")?;
            Ok((simplex_code(&need_field()?, k)?, CodeKind::Simplex { k }))
        }
        "hamming" => {
            let r = need(args.r, "r")?;
            Ok((hamming_code(&need_field()?, r)?, CodeKind::Hamming { r }))
        }
        "rs" => {
            let (n, k) = (need(args.n, "n")?, need(args.k, "k")?);
            Ok((extended_reed_solomon(&need_field()?, n, k)?, CodeKind::ReedSolomon))
        }
        other => Err(CliError::usage(format!(
            "unknown code `{other}`; expected simplex, hamming, rs, dual-of:<code> or file:<path>"
        ))),
    }
}

/// Closed form for codes that have one.
fn closed_form(code: &LinearCode, kind: &CodeKind) -> CliResult<Rational> {
    let field = code.field();
    match kind {
        CodeKind::Simplex { k } => Ok(coverage::expectation_simplex(field, *k)?),
        CodeKind::Hamming { r } => Ok(coverage::expectation_hamming(field, *r)?),
        CodeKind::Dual(inner) => match inner.as_ref() {
            CodeKind::Simplex { k } => Ok(coverage::expectation_hamming(field, *k)?),
            CodeKind::Hamming { r } => Ok(coverage::expectation_simplex(field, *r)?),
            CodeKind::ReedSolomon => mds(code),
            _ => Err(no_formula(kind)),
        },
        CodeKind::ReedSolomon => mds(code),
        CodeKind::File(_) => Err(no_formula(kind)),
    }
}

fn mds(code: &LinearCode) -> CliResult<Rational> {
    Ok(coverage::mds_bound(code.n() as u64, code.k() as u64)?)
}

fn no_formula(kind: &CodeKind) -> CliError {
    CliError::usage(format!("no closed form for `{}`; use --method exact", kind.name()))
}

fn label(code: &LinearCode, kind: &CodeKind) -> String {
    format!("{} [{},{}]_{}", kind.name(), code.n(), code.k(), code.field().q())
}

fn exact_pair(r: &Rational, digits: usize) -> (String, String) {
    (format_rational(r), to_decimal(r, digits))
}

fn show(r: &Rational, digits: usize) -> String {
    format!("{} ({})", format_rational(r), to_decimal(r, digits))
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn csv_line(fields: &[String]) -> String {
    let escaped: Vec<String> = fields
        .iter()
        .map(|f| {
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            }
        })
        .collect();
    escaped.join(",") + "\n"
}

fn render_plain_rows(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in rows {
        let _ = writeln!(s, "{k:<width$}  {v}");
    }
    s
}

/// Ordered key/value document rendered in any of the three formats.
struct Record(Vec<(&'static str, Value)>);

impl Record {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let map: serde_json::Map<String, Value> =
                    self.0.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
                to_json(&Value::Object(map))
            }
            Format::Csv => {
                let keys: Vec<String> = self.0.iter().map(|(k, _)| k.to_string()).collect();
                let vals: Vec<String> = self.0.iter().map(|(_, v)| plain_value(v)).collect();
                csv_line(&keys) + &csv_line(&vals)
            }
            Format::Plain => {
                let rows: Vec<(&str, String)> =
                    self.0.iter().map(|(k, v)| (*k, plain_value(v))).collect();
                render_plain_rows(&rows)
            }
        }
    }
}

fn plain_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn cmd_expect(
    g: &GlobalOpts,
    args: &CodeArgs,
    method: Method,
    trials: u64,
    seed: u64,
) -> CliResult<String> {
    let field = field_opt(g)?;
    let (code, kind) = resolve_code(&args.code, args, field.as_ref())?;
    let (n, k, q) = (code.n(), code.k(), code.field().q());
    if k == 0 {
        return Err(CliError::usage("the zero code has no expectation"));
    }
    let bound = coverage::mds_bound(n as u64, k as u64)?;
    let d = g.digits;

    if method == Method::Mc {
        if trials == 0 {
            return Err(CliError::usage("--trials must be >= 1"));
        }
        let est = coverage::expectation_monte_carlo(&code, trials, seed, g.jobs)?;
        if g.format == Format::Plain {
            return Ok(render_plain_rows(&[
                ("code", label(&code, &kind)),
                ("method", "mc".into()),
                ("mean", format!("{} +/- {}", est.mean, est.std_error)),
                ("trials", format!("{trials} (seed {seed})")),
                ("draws", format!("{}..{}", est.min_draws, est.max_draws)),
                ("bound", show(&bound, d)),
            ]));
        }
        let (br, bd) = exact_pair(&bound, d);
        return Ok(Record(vec![
            ("n", json!(n)),
            ("k", json!(k)),
            ("q", json!(q)),
            ("code", json!(kind.name())),
            ("method", json!("mc")),
            ("mean", json!(est.mean)),
            ("std_error", json!(est.std_error)),
            ("trials", json!(est.trials)),
            ("seed", json!(est.seed)),
            ("min_draws", json!(est.min_draws)),
            ("max_draws", json!(est.max_draws)),
            ("bound_rational", json!(br)),
            ("bound_decimal", json!(bd)),
        ])
        .render(g.format));
    }

    let value = match method {
        Method::Formula => closed_form(&code, &kind)?,
        Method::Exact => expectation_budgeted(&code, Route::Primal, g.budget)?,
        Method::Dual => expectation_budgeted(&code, Route::Dual, g.budget)?,
        Method::Auto => expectation_budgeted(&code, Route::Auto, g.budget)?,
        Method::Mc => unreachable!(),
    };
    let gap = &value - &bound;
    if gap < Rational::from_integer(0.into()) {
        return Err(CliError::invariant(format!(
            "value {} is below the MDS bound {}",
            format_rational(&value),
            format_rational(&bound)
        )));
    }
    let meets = gap == Rational::from_integer(0.into());

    if g.format == Format::Plain {
        let flag = if meets {
            "meets MDS bound"
        } else {
            "above MDS bound"
        };
        let mut s = render_plain_rows(&[
            ("code", label(&code, &kind)),
            ("method", method.name().into()),
            ("value", show(&value, d)),
            ("bound", show(&bound, d)),
            ("gap", show(&gap, d)),
        ]);
        s.push_str(flag);
        s.push('\n');
        return Ok(s);
    }
    let (vr, vd) = exact_pair(&value, d);
    let (br, bd) = exact_pair(&bound, d);
    let (gr, gd) = exact_pair(&gap, d);
    Ok(Record(vec![
        ("n", json!(n)),
        ("k", json!(k)),
        ("q", json!(q)),
        ("code", json!(kind.name())),
        ("method", json!(method.name())),
        ("value_rational", json!(vr)),
        ("value_decimal", json!(vd)),
        ("bound_rational", json!(br)),
        ("bound_decimal", json!(bd)),
        ("gap_rational", json!(gr)),
        ("gap_decimal", json!(gd)),
        ("meets_mds_bound", json!(meets)),
    ])
    .render(g.format))
}

pub fn cmd_bound(g: &GlobalOpts, n: u64, k: u64) -> CliResult<String> {
    let bound = coverage::mds_bound(n, k)?;
    if g.format == Format::Plain {
        return Ok(format!("{}\n", show(&bound, g.digits)));
    }
    let (br, bd) = exact_pair(&bound, g.digits);
    Ok(Record(vec![
        ("n", json!(n)),
        ("k", json!(k)),
        ("bound_rational", json!(br)),
        ("bound_decimal", json!(bd)),
    ])
    .render(g.format))
}

#[derive(Serialize)]
struct CandidateDoc {
    /// 1-based projective point indices (projective mode).
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<Vec<usize>>,
    /// Generator columns as element encodings.
    columns: Vec<Vec<u32>>,
}

#[derive(Serialize)]
struct SearchDoc {
    n: usize,
    k: usize,
    q: u32,
    mode: SearchMode,
    raw_candidates: u64,
    candidates_examined: u64,
    minimum: String,
    minimum_decimal: String,
    runner_up: Option<String>,
    runner_up_decimal: Option<String>,
    mds_bound: String,
    meets_mds_bound: bool,
    optimal_candidates: Vec<CandidateDoc>,
}

pub fn cmd_search(g: &GlobalOpts, k: usize, n: usize, mode: ModeArg) -> CliResult<String> {
    let field = require_field(g)?;
    let mode = match mode {
        ModeArg::Projective => SearchMode::Projective,
        ModeArg::Full => SearchMode::Full,
    };
    let report = search::optimal_coverage(&field, k, n, mode, g.budget, g.jobs)?;
    let bound = coverage::mds_bound(n as u64, k as u64)?;
    if report.minimum < bound {
        return Err(CliError::invariant("search minimum below the MDS bound"));
    }
    let space = search::SearchSpace::new(&field, k, n, mode, g.budget)?;
    let candidates: Vec<CandidateDoc> = report
        .optimal_candidates
        .iter()
        .map(|c| {
            let gen = space.generator(c);
            CandidateDoc {
                points: (mode == SearchMode::Projective)
                    .then(|| c.columns.iter().map(|i| i + 1).collect()),
                columns: gen
                    .columns()
                    .iter()
                    .map(|col| col.iter().map(|e| e.value()).collect())
                    .collect(),
            }
        })
        .collect();
    let d = g.digits;
    let doc = SearchDoc {
        n,
        k,
        q: field.q(),
        mode,
        raw_candidates: report.raw_candidates,
        candidates_examined: report.candidates_examined,
        minimum: format_rational(&report.minimum),
        minimum_decimal: to_decimal(&report.minimum, d),
        runner_up: report.runner_up.as_ref().map(format_rational),
        runner_up_decimal: report.runner_up.as_ref().map(|r| to_decimal(r, d)),
        mds_bound: format_rational(&bound),
        meets_mds_bound: report.minimum == bound,
        optimal_candidates: candidates,
    };
    match g.format {
        Format::Json => Ok(to_json(&doc)),
        Format::Csv => {
            let mut s = csv_line(&[
                "n".into(),
                "k".into(),
                "q".into(),
                "mode".into(),
                "minimum".into(),
                "runner_up".into(),
                "points".into(),
                "columns".into(),
            ]);
            for c in &doc.optimal_candidates {
                s += &csv_line(&[
                    n.to_string(),
                    k.to_string(),
                    field.q().to_string(),
                    mode_name(mode).into(),
                    doc.minimum.clone(),
                    doc.runner_up.clone().unwrap_or_default(),
                    join_points(c),
                    join_columns(c),
                ]);
            }
            Ok(s)
        }
        Format::Plain => {
            let mut s = render_plain_rows(&[
                ("search", format!("[{n},{k}]_{} ({})", field.q(), mode_name(mode))),
                (
                    "candidates",
                    format!(
                        "{} raw, {} spanning",
                        doc.raw_candidates, doc.candidates_examined
                    ),
                ),
                ("minimum", show(&report.minimum, d)),
                (
                    "runner-up",
                    report
                        .runner_up
                        .as_ref()
                        .map(|r| show(r, d))
                        .unwrap_or_else(|| "none".into()),
                ),
                ("mds bound", show(&bound, d)),
                ("optimal", doc.optimal_candidates.len().to_string()),
            ]);
            for c in &doc.optimal_candidates {
                let _ = writeln!(s, "  {}", plain_candidate(c));
            }
            let _ = writeln!(s, "wall time   {:.3} s", report.wall_time.as_secs_f64());
            Ok(s)
        }
    }
}

fn mode_name(mode: SearchMode) -> &'static str {
    match mode {
        SearchMode::Projective => "projective",
        SearchMode::Full => "full",
    }
}

fn join_points(c: &CandidateDoc) -> String {
    c.points
        .as_ref()
        .map(|p| p.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" "))
        .unwrap_or_default()
}

fn join_columns(c: &CandidateDoc) -> String {
    c.columns
        .iter()
        .map(|col| col.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(":"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn plain_candidate(c: &CandidateDoc) -> String {
    match &c.points {
        Some(_) => format!("points {}  columns {}", join_points(c), join_columns(c)),
        None => format!("columns {}", join_columns(c)),
    }
}

pub fn cmd_simulate(
    g: &GlobalOpts,
    args: &CodeArgs,
    trials: u64,
    seed: u64,
    with_exact: bool,
) -> CliResult<String> {
    if trials == 0 {
        return Err(CliError::usage("--trials must be >= 1"));
    }
    let field = field_opt(g)?;
    let (code, kind) = resolve_code(&args.code, args, field.as_ref())?;
    let est = coverage::expectation_monte_carlo(&code, trials, seed, g.jobs)?;
    let exact = if with_exact {
        Some(expectation_budgeted(&code, Route::Auto, g.budget)?)
    } else {
        None
    };
    let z = exact
        .as_ref()
        .and_then(|e| est.z_score(covdepth::decimal::to_f64(e)));
    let d = g.digits;
    if g.format == Format::Plain {
        let mut rows = vec![
            ("code", label(&code, &kind)),
            ("trials", format!("{trials} (seed {seed})")),
            ("mean", est.mean.to_string()),
            ("std error", est.std_error.to_string()),
            ("draws", format!("{}..{}", est.min_draws, est.max_draws)),
        ];
        if let Some(e) = &exact {
            rows.push(("exact", show(e, d)));
            rows.push(("z", z.map(|z| format!("{z:.4}")).unwrap_or_default()));
        }
        return Ok(render_plain_rows(&rows));
    }
    let mut fields = vec![
        ("n", json!(code.n())),
        ("k", json!(code.k())),
        ("q", json!(code.field().q())),
        ("code", json!(kind.name())),
        ("trials", json!(est.trials)),
        ("seed", json!(est.seed)),
        ("mean", json!(est.mean)),
        ("std_error", json!(est.std_error)),
        ("min_draws", json!(est.min_draws)),
        ("max_draws", json!(est.max_draws)),
    ];
    if let Some(e) = &exact {
        let (er, ed) = exact_pair(e, d);
        fields.push(("exact_rational", json!(er)));
        fields.push(("exact_decimal", json!(ed)));
        fields.push(("z_score", json!(z)));
    }
    Ok(Record(fields).render(g.format))
}

/// Column-oriented table rendered as aligned text, CSV or a JSON array.
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let arr: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        Value::Object(
                            self.columns
                                .iter()
                                .zip(row)
                                .map(|(c, v)| (c.to_string(), v.clone()))
                                .collect(),
                        )
                    })
                    .collect();
                to_json(&arr)
            }
            Format::Csv | Format::Plain => {
                let mut s = csv_line(&self.columns.iter().map(|c| c.to_string()).collect::<Vec<_>>());
                for row in &self.rows {
                    s += &csv_line(&row.iter().map(plain_value).collect::<Vec<_>>());
                }
                s
            }
        }
    }
}

/// Parses `lo..hi` (inclusive) or a comma-separated list.
fn parse_grid(s: &str) -> CliResult<Vec<u64>> {
    let bad = || CliError::usage(format!("bad grid `{s}`"));
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u64 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| bad()))
        .collect()
}

fn parse_q_grid(s: &str) -> CliResult<Vec<u64>> {
    if let Some((lo, hi)) = s.split_once("..") {
        let ends = parse_grid(&format!("{lo}..{hi}"))?;
        let (lo, hi) = (ends[0], *ends.last().unwrap());
        return Ok(asymptotics::prime_powers_in(lo, hi));
    }
    let qs = parse_grid(s)?;
    for &q in &qs {
        if covdepth::gf::prime_power(q).is_none() {
            return Err(CliError::usage(format!("{q} is not a prime power")));
        }
    }
    Ok(qs)
}

fn gap_table(reports: &[GapReport], digits: usize) -> Table {
    let opt = |v: Option<f64>| v.map_or(Value::Null, |x| json!(x));
    Table {
        columns: vec![
            "q",
            "k_or_r",
            "n",
            "exact",
            "bound",
            "gap",
            "ratio",
            "predicted_term",
            "gap_over_predicted",
        ],
        rows: reports
            .iter()
            .map(|r| {
                vec![
                    json!(r.q),
                    json!(r.param),
                    json!(r.n),
                    json!(to_decimal(&r.exact, digits)),
                    json!(to_decimal(&r.bound, digits)),
                    json!(to_decimal(&r.gap, digits)),
                    json!(r.ratio),
                    opt(r.predicted_term),
                    opt(r.scaled_gap()),
                ]
            })
            .collect(),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_asymptotics(
    g: &GlobalOpts,
    family: FamilyArg,
    k: Option<u32>,
    r: Option<u32>,
    q_grid: &str,
    n_grid: &str,
    r_grid: &str,
    rate: f64,
    tol: f64,
) -> CliResult<String> {
    let d = g.digits;
    let table = match family {
        FamilyArg::Simplex => {
            let k = k.ok_or_else(|| CliError::usage("--k is required for simplex"))?;
            gap_table(&asymptotics::simplex_grid(k, &parse_q_grid(q_grid)?)?, d)
        }
        FamilyArg::Hamming => {
            let r = r.ok_or_else(|| CliError::usage("--r is required for hamming"))?;
            gap_table(&asymptotics::hamming_grid(r, &parse_q_grid(q_grid)?)?, d)
        }
        FamilyArg::Series => {
            let mut rows = Vec::new();
            for q in parse_q_grid(q_grid)? {
                let s = asymptotics::simplex_gap_series_limit(q, tol)?;
                rows.push(vec![
                    json!(q),
                    json!(s.terms),
                    json!(to_decimal(&s.partial_sum, d)),
                    json!(s.value),
                ]);
            }
            Table {
                columns: vec!["q", "terms", "partial_sum", "limit"],
                rows,
            }
        }
        FamilyArg::MdsRate => {
            let limit = asymptotics::mds_rate_limit(rate)?;
            let mut rows = Vec::new();
            for n in parse_grid(n_grid)? {
                let ratio = asymptotics::mds_rate_ratio(n, rate)?;
                rows.push(vec![
                    json!(n),
                    json!((n as f64 * rate).floor() as u64),
                    json!(ratio),
                    json!(limit),
                    json!((ratio - limit).abs()),
                ]);
            }
            Table {
                columns: vec!["n", "k", "ratio", "limit", "abs_diff"],
                rows,
            }
        }
        FamilyArg::BinaryHamming => {
            let mut rows = Vec::new();
            for r in parse_grid(r_grid)? {
                let b = asymptotics::binary_hamming_ratio_bound(r as u32)?;
                rows.push(vec![
                    json!(r),
                    json!(b.ratio_bound),
                    json!(b.difference_coefficient),
                    b.exact_ratio.map_or(Value::Null, |x| json!(x)),
                    b.exact_gap
                        .as_ref()
                        .map_or(Value::Null, |x| json!(to_decimal(x, d))),
                ]);
            }
            Table {
                columns: vec!["r", "ratio_bound", "difference_coefficient", "exact_ratio", "exact_gap"],
                rows,
            }
        }
    };
    Ok(table.render(g.format))
}

/// Rows `(k, q, simplex value, bound value)` of the simplex-versus-bound figure.
pub fn figure1_rows() -> Vec<(u32, u64, Rational, Rational)> {
    let mut rows = Vec::new();
    for k in FIGURE1_K {
        for q in FIGURE1_Q {
            let n = covdepth::coverage::formulas::projective_length(q, k);
            let n = u64::try_from(n).expect("figure lengths fit in u64");
            let simplex = covdepth::coverage::formulas::simplex::<Rational>(q, k);
            let bound = covdepth::coverage::formulas::mds_bound::<Rational>(n, k as u64);
            rows.push((k, q, simplex, bound));
        }
    }
    rows
}

pub fn cmd_figure1(g: &GlobalOpts) -> CliResult<String> {
    let d = g.digits.max(FIGURE1_MIN_DIGITS);
    let table = Table {
        columns: vec!["k", "q", "simplex_value", "bound_value"],
        rows: figure1_rows()
            .into_iter()
            .map(|(k, q, s, b)| {
                vec![
                    json!(k),
                    json!(q),
                    json!(to_decimal(&s, d)),
                    json!(to_decimal(&b, d)),
                ]
            })
            .collect(),
    };
    Ok(table.render(g.format))
}

pub fn cmd_verify(g: &GlobalOpts) -> CliResult<Output> {
    let report = verify::run_fixtures(g.jobs);
    let text = match g.format {
        Format::Json => {
            let arr: Vec<Value> = report
                .checks
                .iter()
                .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
                .collect();
            to_json(&arr)
        }
        Format::Csv => {
            let mut s = csv_line(&["name".into(), "passed".into(), "detail".into()]);
            for c in &report.checks {
                s += &csv_line(&[c.name.into(), c.passed.to_string(), c.detail.clone()]);
            }
            s
        }
        Format::Plain => {
            let mut s = String::new();
            for c in &report.checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(s, "{status} {} ({}, {} ms)", c.name, c.detail, c.millis);
            }
            s
        }
    };
    let code = if report.all_passed() {
        EXIT_OK
    } else {
        EXIT_INVARIANT
    };
    Ok(Output { text, code })
}
