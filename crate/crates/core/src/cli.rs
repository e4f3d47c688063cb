//! `fusion-rank` command-line front end.
//!
//! Exit status: 0 success or agreement, 1 verified disagreement, 2 usage or
//! input error, 3 a computation precondition failed.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::closed_form::{closed_rank, closed_value, verify_cell, RankReport};
use crate::fusion::{builtin_g2_level1, load_fusion, FusionData, Label};
use crate::graph_oracle::{count_noleaf_subgraphs, moebius_ladder, SimpleGraph};
use crate::rank_engine::{fig_b_graph_with_leg, rank_bruteforce, DualGraph, RankEngine, RankError};
use crate::verlinde_numeric::{calibrate_exponent, format_dd, verlinde_trig_rank};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

/// Inclusive range written `a..b`; a bare `a` means `a..a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub start: u32,
    pub end: u32,
}

impl Span {
    pub fn values(self) -> impl Iterator<Item = u32> {
        self.start..=self.end
    }

    pub fn is_empty(self) -> bool {
        self.start > self.end
    }
}

impl FromStr for Span {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("bad range bound {t:?}: {e}"));
        match s.split_once("..") {
            Some((a, b)) => Ok(Span { start: parse(a)?, end: parse(b.trim_start_matches('='))? }),
            None => {
                let v = parse(s)?;
                Ok(Span { start: v, end: v })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Clutch,
    Tails,
    Graph,
    VerlindeNumeric,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Clutch => "clutch",
            Method::Tails => "tails",
            Method::Graph => "graph",
            Method::VerlindeNumeric => "verlinde-numeric",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fusion-rank", version, about = "Exact conformal-blocks ranks for fusion rings")]
pub struct Config {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true, env = "FUSION_RANK_JOBS")]
    pub jobs: Option<usize>,
    /// Fusion ring: `builtin:g2l1` or a JSON file.
    #[arg(long, global = true, default_value = "builtin:g2l1")]
    pub fusion: String,
    /// Write results here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank for one (g, n) by a chosen method.
    Rank(RankArgs),
    /// Check the three rank expressions agree over a (g, n) grid.
    Verify(VerifyArgs),
    /// Rank of a dual graph read from JSON.
    GraphRank(GraphRankArgs),
    /// Count no-leaf edge-subgraphs of a Möbius ladder.
    Moebius(MoebiusArgs),
    /// Emit the closed-form rank table.
    Table(TableArgs),
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[arg(long, short = 'g', alias = "g")]
    pub genus: Option<u32>,
    #[arg(long, short = 'n', alias = "n")]
    pub npoints: Option<u32>,
    #[arg(long, value_enum, default_value_t = Method::Closed)]
    pub method: Method,
    /// Dual-graph JSON for `--method graph`.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Label on every marked point for `clutch` and `tails`.
    #[arg(long, default_value = "mu")]
    pub leg: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "g", alias = "genus")]
    pub g: Span,
    #[arg(long = "n", alias = "npoints")]
    pub n: Span,
    /// Allow genus 0 and 1, outside the theorem's range.
    #[arg(long)]
    pub allow_extension: bool,
}

#[derive(Debug, Args)]
pub struct GraphRankArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Also run the brute-force oracle and compare.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct MoebiusArgs {
    #[arg(long)]
    pub k: Option<u32>,
    /// Compare against the closed-form rank at genus k + 1.
    #[arg(long)]
    pub check: bool,
    /// Count this graph instead of the ladder.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long = "g", alias = "genus")]
    pub g: Span,
    #[arg(long = "n", alias = "npoints")]
    pub n: Span,
}

/// Result of one invocation: exit status plus captured streams.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure { code, message: message.into() }
}

fn usage(message: impl Into<String>) -> Failure {
    fail(EXIT_USAGE, message)
}

/// Body plus an exit status that may be nonzero even with output.
struct Emitted {
    code: i32,
    body: String,
    note: String,
}

impl Emitted {
    fn ok(body: String) -> Self {
        Emitted { code: EXIT_OK, body, note: String::new() }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match Config::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome { code, stdout: text, stderr: String::new() }
            };
        }
    };
    execute(&config)
}

pub fn execute(config: &Config) -> Outcome {
    let result = match config.jobs {
        Some(0) => Err(usage("--jobs must be at least 1")),
        jobs => {
            let mut builder = rayon::ThreadPoolBuilder::new();
            if let Some(j) = jobs {
                builder = builder.num_threads(j);
            }
            match builder.build() {
                Ok(pool) => pool.install(|| dispatch(config)),
                Err(e) => Err(usage(format!("cannot start worker pool: {e}"))),
            }
        }
    };
    match result {
        Ok(emitted) => {
            let mut outcome = Outcome { code: emitted.code, stdout: String::new(), stderr: emitted.note };
            match &config.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &emitted.body) {
                        outcome.code = EXIT_USAGE;
                        outcome.stderr.push_str(&format!("error: cannot write {}: {e}\n", path.display()));
                    }
                }
                None => outcome.stdout = emitted.body,
            }
            outcome
        }
        Err(f) => Outcome { code: f.code, stdout: String::new(), stderr: format!("error: {}\n", f.message) },
    }
}

fn dispatch(config: &Config) -> Result<Emitted, Failure> {
    match &config.command {
        Command::Rank(a) => cmd_rank(config, a),
        Command::Verify(a) => cmd_verify(config, a),
        Command::GraphRank(a) => cmd_graph_rank(config, a),
        Command::Moebius(a) => cmd_moebius(config, a),
        Command::Table(a) => cmd_table(config, a),
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn load_ring(source: &str) -> Result<FusionData, Failure> {
    match source {
        "builtin:g2l1" => Ok(builtin_g2_level1()),
        s if s.starts_with("builtin:") => Err(usage(format!("unknown builtin ring {s:?}; available: builtin:g2l1"))),
        path => load_fusion(&read_file(Path::new(path))?).map_err(|e| usage(format!("{path}: {e}"))),
    }
}

fn load_dual_graph(path: &Path) -> Result<DualGraph, Failure> {
    let graph = DualGraph::from_json(&read_file(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    graph.check().map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(graph)
}

fn engine(ring: &FusionData) -> Result<RankEngine<'_>, Failure> {
    RankEngine::new(ring).map_err(|e| usage(e.to_string()))
}

fn rank_error(e: RankError) -> Failure {
    match e {
        RankError::UnknownLabel(_) | RankError::InvalidRing(_) | RankError::Parse { .. } => usage(e.to_string()),
        _ => fail(EXIT_PRECONDITION, e.to_string()),
    }
}

fn json_line(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string(value).expect("json output serializes");
    s.push('\n');
    s
}

fn cmd_rank(config: &Config, args: &RankArgs) -> Result<Emitted, Failure> {
    let need = |v: Option<u32>, flag: &str| v.ok_or_else(|| usage(format!("--method {} needs {flag}", args.method.name())));
    let method = args.method.name();

    if args.method == Method::Graph {
        let path = args.graph.as_ref().ok_or_else(|| usage("--method graph needs --graph <file>"))?;
        let ring = load_ring(&config.fusion)?;
        let graph = load_dual_graph(path)?;
        let rank = engine(&ring)?.rank_graph(&graph).map_err(rank_error)?;
        let body = match config.format {
            Format::Text => format!("{rank}\n"),
            Format::Json => json_line(&json!({"method": method, "rank": rank.to_string()})),
            Format::Csv => format!("method,rank\n{method},{rank}\n"),
        };
        return Ok(Emitted::ok(body));
    }

    let g = need(args.genus, "--genus")?;
    let n = need(args.npoints, "--npoints")?;
    let simple = |rank: String| match config.format {
        Format::Text => format!("{rank}\n"),
        Format::Json => json_line(&json!({"g": g, "n": n, "method": method, "rank": rank})),
        Format::Csv => format!("g,n,method,rank\n{g},{n},{method},{rank}\n"),
    };

    let body = match args.method {
        Method::Closed => {
            let value = closed_value(g, n);
            let rank = value.to_integer().map_err(|e| fail(EXIT_PRECONDITION, e.to_string()))?;
            match config.format {
                Format::Json => json_line(&json!({
                    "g": g, "n": n, "method": method, "rank": rank.to_string(), "value": value,
                })),
                _ => simple(rank.to_string()),
            }
        }
        Method::Clutch => {
            let ring = load_ring(&config.fusion)?;
            let weights = vec![Label::new(args.leg.clone()); n as usize];
            let rank = engine(&ring)?.rank_smooth(g, &weights).map_err(rank_error)?;
            simple(rank.to_string())
        }
        Method::Tails => {
            let ring = load_ring(&config.fusion)?;
            let graph = fig_b_graph_with_leg(g, n as usize, &Label::new(args.leg.clone())).map_err(rank_error)?;
            let rank = engine(&ring)?.rank_graph(&graph).map_err(rank_error)?;
            simple(rank.to_string())
        }
        Method::VerlindeNumeric => {
            if g < 1 || n != 0 {
                return Err(fail(
                    EXIT_PRECONDITION,
                    format!("verlinde-numeric needs genus >= 1 and no marked points, got (g, n) = ({g}, {n})"),
                ));
            }
            let variant = calibrate_exponent().map_err(|e| fail(EXIT_PRECONDITION, e.to_string()))?;
            let v = verlinde_trig_rank(g, 1, variant).map_err(|e| fail(EXIT_PRECONDITION, e.to_string()))?;
            let nearest = v
                .nearest
                .as_ref()
                .ok_or_else(|| fail(EXIT_PRECONDITION, "Verlinde sum is not finite"))?
                .to_string();
            match config.format {
                Format::Text if v.residual < 1e-6 => format!("{nearest} (residual < 1e-6)\n"),
                Format::Text => format!("{nearest} (residual {:e})\n", v.residual),
                Format::Json => json_line(&json!({
                    "g": g, "n": n, "method": method,
                    "variant": variant.name(),
                    "value": format_dd(v.value),
                    "nearest": nearest,
                    "residual": format!("{:e}", v.residual),
                })),
                Format::Csv => format!(
                    "g,n,method,variant,value,nearest,residual\n{g},{n},{method},{},{},{nearest},{:e}\n",
                    variant.name(),
                    format_dd(v.value),
                    v.residual
                ),
            }
        }
        Method::Graph => unreachable!("handled above"),
    };
    Ok(Emitted::ok(body))
}

fn grid(g: Span, n: Span) -> Result<Vec<(u32, u32)>, Failure> {
    if g.is_empty() || n.is_empty() {
        return Err(usage("empty range: ranges are a..b with a <= b"));
    }
    Ok(g.values().flat_map(|gi| n.values().map(move |ni| (gi, ni))).collect())
}

fn cmd_verify(config: &Config, args: &VerifyArgs) -> Result<Emitted, Failure> {
    if !args.allow_extension && args.g.start < 2 {
        return Err(usage("genus range must start at 2 or more; pass --allow-extension for g = 0, 1"));
    }
    let cells = grid(args.g, args.n)?;
    let reports: Vec<RankReport> = cells
        .par_iter()
        .map(|&(g, n)| verify_cell(g, n))
        .collect::<Result<_, _>>()
        .map_err(|e| fail(EXIT_DISAGREE, format!("closed form failed: {e}")))?;

    let mut body = String::new();
    match config.format {
        Format::Text => {
            body.push_str("g n sum_clutch closed sum_tails agree\n");
            for r in &reports {
                let _ = writeln!(body, "{} {} {} {} {} {}", r.g, r.n, r.sum_clutch, r.closed, r.sum_tails, r.agree);
            }
        }
        Format::Csv => {
            body.push_str(RankReport::CSV_HEADER);
            body.push('\n');
            for r in &reports {
                body.push_str(&r.csv_row());
                body.push('\n');
            }
        }
        Format::Json => body = json_line(&reports),
    }

    let (code, note) = match reports.iter().find(|r| !r.agree) {
        Some(r) => (
            EXIT_DISAGREE,
            format!(
                "disagreement at g={}, n={}: sum_clutch={} closed={} sum_tails={}\n",
                r.g, r.n, r.sum_clutch, r.closed, r.sum_tails
            ),
        ),
        None => (EXIT_OK, String::new()),
    };
    Ok(Emitted { code, body, note })
}

fn cmd_graph_rank(config: &Config, args: &GraphRankArgs) -> Result<Emitted, Failure> {
    let ring = load_ring(&config.fusion)?;
    let graph = load_dual_graph(&args.graph)?;
    let rank = engine(&ring)?.rank_graph(&graph).map_err(rank_error)?;
    if !args.oracle {
        let body = match config.format {
            Format::Text => format!("{rank}\n"),
            Format::Json => json_line(&json!({"rank": rank.to_string()})),
            Format::Csv => format!("rank\n{rank}\n"),
        };
        return Ok(Emitted::ok(body));
    }
    let oracle = rank_bruteforce(&ring, &graph).map_err(rank_error)?;
    let agree = oracle == rank;
    let body = match config.format {
        Format::Text => format!("{rank} {oracle} {}\n", if agree { "OK" } else { "MISMATCH" }),
        Format::Json => json_line(&json!({"rank": rank.to_string(), "oracle": oracle.to_string(), "agree": agree})),
        Format::Csv => format!("rank,oracle,agree\n{rank},{oracle},{agree}\n"),
    };
    let code = if agree { EXIT_OK } else { EXIT_DISAGREE };
    Ok(Emitted { code, body, note: String::new() })
}

fn cmd_moebius(config: &Config, args: &MoebiusArgs) -> Result<Emitted, Failure> {
    if let Some(k) = args.k {
        if !(2..=8).contains(&k) {
            return Err(usage(format!("--k must lie in 2..=8, got {k}")));
        }
    }
    let graph = match (&args.graph, args.k) {
        (Some(path), _) => SimpleGraph::from_json(&read_file(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?,
        (None, Some(k)) => moebius_ladder(k).map_err(|e| usage(e.to_string()))?,
        (None, None) => return Err(usage("moebius needs --k or --graph")),
    };
    let count = count_noleaf_subgraphs(&graph).map_err(|e| fail(EXIT_PRECONDITION, e.to_string()))?;

    if !args.check {
        let body = match config.format {
            Format::Text => format!("{count}\n"),
            Format::Json => json_line(&json!({"k": args.k, "count": count.to_string()})),
            Format::Csv => format!("k,count\n{},{count}\n", args.k.map(|k| k.to_string()).unwrap_or_default()),
        };
        return Ok(Emitted::ok(body));
    }
    let k = args.k.ok_or_else(|| usage("--check needs --k"))?;
    let closed = closed_rank(k + 1, 0).map_err(|e| fail(EXIT_PRECONDITION, e.to_string()))?;
    let agree = BigInt::from(count.clone()) == closed;
    let body = match config.format {
        Format::Text => format!("{count} {closed} {}\n", if agree { "OK" } else { "MISMATCH" }),
        Format::Json => json_line(&json!({
            "k": k, "count": count.to_string(), "closed": closed.to_string(), "agree": agree,
        })),
        Format::Csv => format!("k,count,closed,agree\n{k},{count},{closed},{agree}\n"),
    };
    let code = if agree { EXIT_OK } else { EXIT_DISAGREE };
    Ok(Emitted { code, body, note: String::new() })
}

#[derive(Serialize)]
struct TableRow {
    g: u32,
    n: u32,
    rank: String,
}

fn cmd_table(config: &Config, args: &TableArgs) -> Result<Emitted, Failure> {
    let cells = grid(args.g, args.n)?;
    let rows: Vec<TableRow> = cells
        .par_iter()
        .map(|&(g, n)| closed_rank(g, n).map(|r| TableRow { g, n, rank: r.to_string() }))
        .collect::<Result<_, _>>()
        .map_err(|e| fail(EXIT_PRECONDITION, e.to_string()))?;
    let body = match config.format {
        Format::Json => json_line(&rows),
        Format::Csv | Format::Text => {
            let sep = if config.format == Format::Csv { "," } else { " " };
            let mut body = format!("g{sep}n{sep}rank\n");
            for r in &rows {
                let _ = writeln!(body, "{}{sep}{}{sep}{}", r.g, r.n, r.rank);
            }
            body
        }
    };
    Ok(Emitted::ok(body))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_parsing() {
        assert_eq!("2..10".parse::<Span>().unwrap(), Span { start: 2, end: 10 });
        assert_eq!("3".parse::<Span>().unwrap(), Span { start: 3, end: 3 });
        assert_eq!("1..=4".parse::<Span>().unwrap(), Span { start: 1, end: 4 });
        assert!("a..2".parse::<Span>().is_err());
        assert!("3..1".parse::<Span>().unwrap().is_empty());
    }

    #[test]
    fn bad_flag_is_usage_error() {
        let out = run(["fusion-rank", "rank", "--method", "nope"]);
        assert_eq!(out.code, EXIT_USAGE);
    }
}
