//! Command implementations for the `tango` binary. Each command renders its
//! output into a string and reports an exit code, so the whole surface is
//! testable without spawning processes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint, Sign};
use serde::Serialize;

use tango_core::bundlecalc::{self, StabilityReport};
use tango_core::cert::{self, CertFailure};
use tango_core::orbitdim::{self, OrbitReport};
use tango_core::sl2rep;
use tango_core::{seqdsl, RankStrategy, SubspaceGenerators};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tango", version, about = "SL(2)-invariant Tango bundles: subspaces, certificates, orbits, Chern classes")]
pub struct Cli {
    /// Worker threads for orbit-dim and scan (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Subspace file ("n m" header, then m rows)
    #[arg(long)]
    pub subspace: Option<PathBuf>,
    /// Use the invariant subspace W constructed for this n
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct Weights {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub alpha: i64,
    #[arg(long)]
    pub gamma: i64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the invariant subspace W ⊆ ∧²SⁿU avoiding the Grassmannian
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check the lowering-operator certificate that W has no decomposables
    Certify {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        json: bool,
    },
    /// Search P(W) over finite fields for decomposable bivectors
    Scan {
        #[arg(long)]
        subspace: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Dimension of the PGL orbit of a subspace of ∧²V
    OrbitDim {
        #[arg(long)]
        subspace: PathBuf,
        /// Force fraction-free elimination instead of multi-modular rank
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decompose ∧²SⁿU into irreducible sl₂-components
    Decompose {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Chern classes of the weighted Tango bundle F_{alpha,gamma}
    Chern(Weights),
    /// Stability of F_{alpha,gamma}
    Stability(Weights),
    /// Evaluate a sequence script
    Eval {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

/// Rendered standard output plus exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            code: EXIT_OK,
        }
    }

    fn negative(stdout: String) -> Self {
        Outcome {
            stdout,
            code: EXIT_NEGATIVE,
        }
    }
}

/// A usage or input error; always exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

type CmdResult = Result<Outcome, UsageError>;

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// Subspace files

/// Parse the "n m" header and `m` rows of `C(n+1, 2)` integers. Blank lines
/// are skipped; errors carry 1-based line numbers.
pub fn parse_subspace(text: &str) -> Result<SubspaceGenerators, UsageError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| usage("line 1: missing \"n m\" header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let parse_usize = |s: &str| s.parse::<usize>().ok();
    let (n, m) = match fields.as_slice() {
        [a, b] => match (parse_usize(a), parse_usize(b)) {
            (Some(n), Some(m)) => (n, m),
            _ => return Err(usage(format!("line {hline}: header must be two nonnegative integers \"n m\""))),
        },
        _ => return Err(usage(format!("line {hline}: header must be \"n m\", found {header:?}"))),
    };
    if n < 1 {
        return Err(usage(format!("line {hline}: n must be at least 1")));
    }
    let width = (n + 1) * n / 2;
    if m > width {
        return Err(usage(format!(
            "line {hline}: m = {m} exceeds dim ∧²V = {width}"
        )));
    }
    let mut rows = Vec::with_capacity(m);
    for (lineno, line) in lines.by_ref() {
        if rows.len() == m {
            return Err(usage(format!(
                "line {lineno}: expected {m} rows, found more"
            )));
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<BigInt>()
                    .map_err(|_| usage(format!("line {lineno}: {tok:?} is not an integer")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != width {
            return Err(usage(format!(
                "line {lineno}: expected {width} integers, found {}",
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != m {
        return Err(usage(format!(
            "line {}: expected {m} rows, found {}",
            text.lines().count() + 1,
            rows.len()
        )));
    }
    SubspaceGenerators::new(n, rows).map_err(|e| usage(format!("invalid subspace: {e}")))
}

pub fn format_subspace(w: &SubspaceGenerators) -> String {
    let mut out = format!("{} {}\n", w.n, w.m);
    for row in &w.rows {
        let cells: Vec<String> = row.iter().map(BigInt::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_subspace(path: &Path) -> Result<SubspaceGenerators, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_subspace(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn construct(n: usize) -> Result<SubspaceGenerators, UsageError> {
    if n < 3 {
        return Err(usage(format!("--n must be at least 3, got {n}")));
    }
    sl2rep::construct_tango_subspace(n).map_err(|e| usage(e.to_string()))
}

// ---------------------------------------------------------------------------
// Commands

pub fn execute(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Construct { n, out, format } => cmd_construct(*n, out.as_deref(), *format),
        Command::Certify { source, json } => cmd_certify(source, *json),
        Command::Scan {
            subspace,
            primes,
            json,
        } => cmd_scan(&read_subspace(subspace)?, primes, *json),
        Command::OrbitDim {
            subspace,
            exact,
            json,
        } => cmd_orbit_dim(&read_subspace(subspace)?, *exact, *json),
        Command::Decompose { n, json } => cmd_decompose(*n, *json),
        Command::Chern(w) => cmd_chern(w),
        Command::Stability(w) => cmd_stability(w),
        Command::Eval { file, json } => cmd_eval(file, *json),
    }
}

fn cmd_construct(n: usize, out: Option<&Path>, format: Format) -> CmdResult {
    let w = construct(n)?;
    let body = match format {
        Format::Text => format_subspace(&w),
        Format::Json => to_json(&w),
    };
    match out {
        Some(path) => {
            std::fs::write(path, &body)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            Ok(Outcome::ok(format!(
                "wrote {} generators of W for n = {n} to {}\n",
                w.m,
                path.display()
            )))
        }
        None => Ok(Outcome::ok(body)),
    }
}

#[derive(Serialize)]
struct CertifyJson<'a> {
    n: usize,
    valid: bool,
    certificate: Option<&'a cert::Certificate>,
    failure: Option<String>,
}

fn cmd_certify(source: &Source, json: bool) -> CmdResult {
    let w = match (&source.subspace, source.n) {
        (Some(path), _) => read_subspace(path)?,
        (None, Some(n)) => construct(n)?,
        (None, None) => return Err(usage("one of --subspace or --n is required")),
    };
    let n = w.n;
    let result = cert::certify_no_decomposables(&w, n);
    if json {
        let (certificate, failure) = match &result {
            Ok(c) => (Some(c), None),
            Err(f) => (None, Some(f.to_string())),
        };
        let body = to_json(&CertifyJson {
            n,
            valid: result.is_ok(),
            certificate,
            failure,
        });
        return Ok(if result.is_ok() {
            Outcome::ok(body)
        } else {
            Outcome::negative(body)
        });
    }
    match result {
        Ok(c) => {
            let mut s = format!("certificate for n = {n}, m = {}: VALID\n", w.m);
            s.push_str("  lowering invariance: ok\n");
            let _ = writeln!(s, "  v_{{{},{}}} not in W: ok", n - 1, n);
            let _ = writeln!(
                s,
                "  chase coefficients ({} pairs, all nonzero):",
                c.checks.chase_coefficients.len()
            );
            for cc in &c.checks.chase_coefficients {
                let _ = writeln!(s, "    v_{{{},{}}}: {}", cc.i, cc.j, cc.coefficient);
            }
            Ok(Outcome::ok(s))
        }
        Err(CertFailure::WrongDegree { expected, got }) => Err(usage(format!(
            "subspace degree mismatch: expected {expected}, got {got}"
        ))),
        Err(f) => Ok(Outcome::negative(format!(
            "certificate for n = {n}, m = {}: FAILED\n  {f}\n",
            w.m
        ))),
    }
}

fn cmd_scan(w: &SubspaceGenerators, primes: &[u64], json: bool) -> CmdResult {
    let result = cert::scan_decomposables_modp(w, primes).map_err(|e| usage(e.to_string()))?;
    let body = if json {
        to_json(&result)
    } else {
        let mut s = String::new();
        for (p, count) in result.primes.iter().zip(&result.points_checked) {
            let hits = result.found.iter().filter(|f| f.prime == *p).count();
            let _ = writeln!(s, "F_{p}: {count} points checked, {hits} decomposable");
        }
        for f in &result.found {
            let coords: Vec<String> = f.point.iter().map(u64::to_string).collect();
            let _ = writeln!(
                s,
                "  F_{}: ({}) lifts to a rational decomposable: {}",
                f.prime,
                coords.join(", "),
                if f.lifts_to_decomposable { "yes" } else { "no" }
            );
        }
        s.push_str(if result.is_clean() {
            "no decomposable bivector found\n"
        } else {
            "decomposable bivectors found\n"
        });
        s
    };
    Ok(if result.is_clean() {
        Outcome::ok(body)
    } else {
        Outcome::negative(body)
    })
}

pub fn orbit_report(w: &SubspaceGenerators, exact: bool) -> Result<OrbitReport, UsageError> {
    let strategy = if exact {
        RankStrategy::Exact
    } else {
        RankStrategy::Auto
    };
    orbitdim::orbit_dimension_with(w, strategy).map_err(|e| usage(e.to_string()))
}

fn cmd_orbit_dim(w: &SubspaceGenerators, exact: bool, json: bool) -> CmdResult {
    let r = orbit_report(w, exact)?;
    if json {
        return Ok(Outcome::ok(to_json(&r)));
    }
    Ok(Outcome::ok(format!(
        "n = {}\nm = {}\naffine_rank = {}\norbit_dim = {}\nstabilizer_dim = {}\nrank_method = {}\n",
        r.n, r.m, r.affine_rank, r.orbit_dim, r.stabilizer_dim, r.rank_method
    )))
}

fn cmd_decompose(n: usize, json: bool) -> CmdResult {
    if n < 1 {
        return Err(usage("--n must be at least 1"));
    }
    let action = sl2rep::wedge2_symn(n).map_err(|e| usage(e.to_string()))?;
    let comps = sl2rep::decompose_irreducibles(&action).map_err(|e| usage(e.to_string()))?;
    if json {
        return Ok(Outcome::ok(to_json(&comps)));
    }
    let names: Vec<String> = comps
        .iter()
        .map(|c| format!("S^{}U", c.highest_weight))
        .collect();
    let mut s = format!("wedge^2 S^{n}U = {}\n", names.join(" + "));
    for c in &comps {
        let _ = writeln!(
            s,
            "  S^{}U  dim {}  highest weight vector {}",
            c.highest_weight,
            c.dim(),
            format_combination(n, &c.highest_weight_vector)
        );
    }
    Ok(Outcome::ok(s))
}

/// `v_{0,3} - 3 v_{1,2}` style rendering of a vector in the `v_{i,j}` basis.
fn format_combination(n: usize, v: &[BigInt]) -> String {
    let mut s = String::new();
    let terms = tango_core::wedge::pairs(n + 1)
        .into_iter()
        .zip(v)
        .filter(|(_, x)| x.sign() != Sign::NoSign);
    for ((i, j), x) in terms {
        let mag = x.magnitude();
        let sign = if x.sign() == Sign::Minus { "-" } else { "+" };
        if s.is_empty() {
            if sign == "-" {
                s.push('-');
            }
        } else {
            let _ = write!(s, " {sign} ");
        }
        if *mag != BigUint::from(1u8) {
            let _ = write!(s, "{mag} ");
        }
        let _ = write!(s, "v_{{{i},{j}}}");
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

#[derive(Serialize)]
struct ChernJson {
    n: usize,
    alpha: i64,
    gamma: i64,
    chern: Vec<i128>,
}

fn cmd_chern(w: &Weights) -> CmdResult {
    let c = bundlecalc::chern_weighted_tango(w.n, w.alpha, w.gamma)
        .map_err(|e| usage(e.to_string()))?;
    if w.json {
        return Ok(Outcome::ok(to_json(&ChernJson {
            n: w.n,
            alpha: w.alpha,
            gamma: w.gamma,
            chern: c,
        })));
    }
    let cells: Vec<String> = c.iter().map(i128::to_string).collect();
    Ok(Outcome::ok(format!("c = ({})\n", cells.join(", "))))
}

pub fn format_stability(r: &StabilityReport) -> String {
    let mut s = if r.stable {
        "STABLE (gamma > 2(n-1)alpha)\n".to_string()
    } else {
        "UNSTABLE (gamma <= 2(n-1)alpha)\n".to_string()
    };
    let _ = writeln!(
        s,
        "n = {}, alpha = {}, gamma = {}, 2(n-1)alpha = {}",
        r.n,
        r.alpha,
        r.gamma,
        r.threshold()
    );
    let header = ["q", "q((2n-q-1)alpha-gamma)", "max twist in wedge^q V(-q gamma)"];
    let rows: Vec<[String; 3]> = r
        .witnesses
        .iter()
        .map(|w| [w.q.to_string(), w.formula.to_string(), w.max_twist.to_string()])
        .collect();
    let widths: Vec<usize> = (0..3)
        .map(|c| {
            rows.iter()
                .map(|row| row[c].len())
                .chain([header[c].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let _ = writeln!(
        s,
        "  {:>w0$}  {:>w1$}  {:>w2$}",
        header[0],
        header[1],
        header[2],
        w0 = widths[0],
        w1 = widths[1],
        w2 = widths[2]
    );
    for row in &rows {
        let _ = writeln!(
            s,
            "  {:>w0$}  {:>w1$}  {:>w2$}",
            row[0],
            row[1],
            row[2],
            w0 = widths[0],
            w1 = widths[1],
            w2 = widths[2]
        );
    }
    let _ = writeln!(s, "h0(F) = {}", r.h0);
    s
}

fn cmd_stability(w: &Weights) -> CmdResult {
    let r = bundlecalc::is_stable(w.n, w.alpha, w.gamma).map_err(|e| usage(e.to_string()))?;
    let body = if w.json {
        to_json(&r)
    } else {
        format_stability(&r)
    };
    Ok(if r.stable {
        Outcome::ok(body)
    } else {
        Outcome::negative(body)
    })
}

fn cmd_eval(file: &Path, json: bool) -> CmdResult {
    let text = std::fs::read_to_string(file)
        .map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let results = seqdsl::run(&text).map_err(|d| usage(format!("{}:{d}", file.display())))?;
    Ok(Outcome::ok(if json {
        let mut s = seqdsl::render_json(&results);
        s.push('\n');
        s
    } else {
        seqdsl::render_text(&results)
    }))
}
