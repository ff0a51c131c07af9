use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use conelinks::angles::{BaseFamily, RationalAngle};
use conelinks::classifier::{classify_all, summary_counts, LinkRecord, SummaryCounts};
use conelinks::cloud::{
    angle_at, clustered_cloud, decay_holds, find_wide_triangle, greedy_net, packing_cap,
    shrink_guarantees, shrink_sequence, shrink_step, uniform_cloud,
};
use conelinks::covers::dessin_of;
use conelinks::geometry::{build_surface, distance_csv, estimate_distances, export_obj, export_off};
use conelinks::narrow::{bound_b, m_n_with_bits, RealAngle, DEFAULT_MAX_BITS};
use conelinks::table::{diff_against_golden, format_table, to_csv};

/// Classification and verification toolkit for the cone-surface links of
/// integral singular vertices, with the explicit narrow-point count bounds.
#[derive(Parser)]
#[command(name = "conelinks", version, max_term_width = 100)]
struct RunConfig {
    /// Cap on worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Write output to this file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate and classify all singular-vertex links.
    Classify(ClassifyArgs),
    /// Check the computed classification against the embedded reference table.
    Verify(VerifyArgs),
    /// Emit the bipartite map of one link's covering as Graphviz DOT.
    Dessin(DessinArgs),
    /// Export one link's cone surface as a mesh (OFF/OBJ) or distance matrix (CSV).
    Surface(SurfaceArgs),
    /// Print the packing threshold m_n and the explicit count bound B(n, eps).
    Bounds(BoundsArgs),
    /// Run the point-cloud lemma constructions on a sample cloud.
    NarrowDemo(NarrowDemoArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BaseFilter {
    S4,
    D6,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClassifyFormat {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SurfaceFormat {
    Off,
    Obj,
    Csv,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Restrict to links realized over one base orbifold.
    #[arg(long, value_enum, default_value = "all")]
    base: BaseFilter,

    /// Restrict to links with exactly this many cone points.
    #[arg(long)]
    n: Option<usize>,

    #[arg(long, value_enum, default_value = "table")]
    format: ClassifyFormat,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check only the summary counts (32/5/30/3 and 17/12/1), not per-row data.
    #[arg(long)]
    counts_only: bool,

    /// Self-test fault injector: flip the double flag on this row before
    /// diffing, to demonstrate mismatch reporting and the exit code.
    #[arg(long, value_name = "ROW")]
    perturb_row: Option<usize>,
}

#[derive(Args)]
struct DessinArgs {
    /// Table row (1..=32) whose first covering realization is drawn.
    #[arg(long)]
    row: usize,
}

#[derive(Args)]
struct SurfaceArgs {
    /// Table row (1..=32) whose first covering realization is built.
    #[arg(long)]
    row: usize,

    #[arg(long, value_enum, default_value = "off")]
    format: SurfaceFormat,

    /// Mesh subdivision level (1..=8).
    #[arg(long, default_value_t = 3)]
    refinement: usize,
}

#[derive(Args)]
struct BoundsArgs {
    /// Ambient dimension n >= 2.
    #[arg(long, default_value_t = 3)]
    n: usize,

    /// Narrowness angle: exact "Ppi/Q" (e.g. 5pi/6, pi/2) or decimal radians.
    #[arg(long)]
    epsilon: Option<String>,

    /// Print the n = 3 closed-form agreement table over eps = k*pi/24.
    #[arg(long)]
    epsilon_grid: bool,

    /// Working-precision cap in bits for the certified floor.
    #[arg(long, default_value_t = DEFAULT_MAX_BITS)]
    precision: u64,
}

#[derive(Args)]
struct NarrowDemoArgs {
    /// Ambient dimension of the cloud.
    #[arg(long, default_value_t = 2)]
    dim: usize,

    /// Number of random points (ignored with --clustered).
    #[arg(long, default_value_t = 60)]
    count: usize,

    /// RNG seed; required unless --clustered is given.
    #[arg(long)]
    seed: Option<u64>,

    /// Shrink parameter as an exact fraction P/Q in (0, 1).
    #[arg(long, default_value = "1/3")]
    alpha: String,

    /// Wide-triangle angle: exact "Ppi/Q" or decimal radians, in (0, pi).
    #[arg(long, default_value = "pi/2")]
    eps: String,

    /// Use the deterministic nested-cluster cloud with this many levels.
    #[arg(long, value_name = "LEVELS")]
    clustered: Option<usize>,
}

struct Outcome {
    text: String,
    code: u8,
}

enum Fail {
    Config(String),
    Precision(String),
}

type CliResult = Result<Outcome, Fail>;

fn config<T>(msg: impl Into<String>) -> Result<T, Fail> {
    Err(Fail::Config(msg.into()))
}

/// Parse "Ppi/Q" exactly (P, Q optional integers) or fall back to decimal
/// radians.
fn parse_angle(s: &str) -> Result<RealAngle, Fail> {
    let t = s.trim();
    if let Some((pre, post)) = t.split_once("pi") {
        let p: i64 = if pre.is_empty() {
            1
        } else {
            match pre.parse() {
                Ok(v) => v,
                Err(_) => return config(format!("bad angle {t:?}: expected Ppi/Q or a decimal")),
            }
        };
        let q: i64 = if post.is_empty() {
            1
        } else {
            let Some(den) = post.strip_prefix('/') else {
                return config(format!("bad angle {t:?}: expected Ppi/Q or a decimal"));
            };
            match den.parse() {
                Ok(0) | Err(_) => {
                    return config(format!("bad angle {t:?}: expected Ppi/Q or a decimal"))
                }
                Ok(v) => v,
            }
        };
        return Ok(RealAngle::Exact(RationalAngle::new(p, q)));
    }
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(RealAngle::Radians(v)),
        _ => config(format!("bad angle {t:?}: expected Ppi/Q or a decimal")),
    }
}

fn parse_fraction(s: &str) -> Result<Ratio<i64>, Fail> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((p, q)) => match (p.trim().parse::<i64>(), q.trim().parse::<i64>()) {
            (Ok(p), Ok(q)) if q != 0 => Some(Ratio::new(p, q)),
            _ => None,
        },
        None => t.parse::<i64>().ok().map(Ratio::from_integer),
    };
    match parsed {
        Some(r) => Ok(r),
        None => config(format!("bad fraction {t:?}: expected P/Q")),
    }
}

fn angle_pretty(a: RealAngle) -> String {
    match a {
        RealAngle::Exact(r) => format!("{} ({:.6} rad)", r.pretty(), r.to_f64()),
        RealAngle::Radians(x) => format!("{x:.6} rad"),
    }
}

fn find_row(records: &[LinkRecord], row: usize) -> Result<&LinkRecord, Fail> {
    match records.iter().find(|r| r.table_index == row) {
        Some(r) => Ok(r),
        None => config(format!("no table row {row}; rows are 1..=32")),
    }
}

fn run_classify(a: &ClassifyArgs) -> CliResult {
    let records = classify_all().records;
    let filtered: Vec<LinkRecord> = records
        .into_iter()
        .filter(|r| match a.base {
            BaseFilter::All => true,
            BaseFilter::S4 => r.bases.contains(&BaseFamily::S4),
            BaseFilter::D6 => r.bases.contains(&BaseFamily::D6),
        })
        .filter(|r| a.n.map_or(true, |n| r.n() == n))
        .collect();
    let text = match a.format {
        ClassifyFormat::Table => format_table(&filtered),
        ClassifyFormat::Csv => to_csv(&filtered),
        ClassifyFormat::Json => {
            let mut s = serde_json::to_string_pretty(&filtered).expect("records serialize");
            s.push('\n');
            s
        }
    };
    Ok(Outcome { text, code: 0 })
}

fn run_verify(a: &VerifyArgs) -> CliResult {
    let mut records = classify_all().records;
    if let Some(row) = a.perturb_row {
        if !records.iter().any(|r| r.table_index == row) {
            return config(format!("no table row {row}; rows are 1..=32"));
        }
        for r in &mut records {
            if r.table_index == row {
                r.is_double = !r.is_double;
            }
        }
    }
    if a.counts_only {
        let want = SummaryCounts {
            total: 32,
            d6_realized: 5,
            s4_realized: 30,
            both: 3,
            s4_by_n: [17, 12, 1],
        };
        let got = summary_counts(&records);
        if got == want {
            return Ok(Outcome {
                text: "counts ok: 32 links; 5 over d6, 30 over s4, 3 over both; \
                       s4 cone points 3/4/5 = 17/12/1\n"
                    .into(),
                code: 0,
            });
        }
        return Ok(Outcome {
            text: format!("count mismatch:\n  expected {want:?}\n  computed {got:?}\n"),
            code: 1,
        });
    }
    let diff = diff_against_golden(&records);
    if diff.is_empty() {
        return Ok(Outcome {
            text: "all 32 rows match the reference table\n".into(),
            code: 0,
        });
    }
    let mut text = String::new();
    for line in &diff {
        let _ = writeln!(text, "{line}");
    }
    let _ = writeln!(text, "{} difference(s) against the reference table", diff.len());
    Ok(Outcome { text, code: 1 })
}

fn run_dessin(a: &DessinArgs) -> CliResult {
    let records = classify_all().records;
    let rec = find_row(&records, a.row)?;
    let mut text = dessin_of(&rec.realizations[0].cover).to_dot();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    Ok(Outcome { text, code: 0 })
}

fn run_surface(a: &SurfaceArgs) -> CliResult {
    if !(1..=8).contains(&a.refinement) {
        return config("refinement must lie in 1..=8");
    }
    let records = classify_all().records;
    let rec = find_row(&records, a.row)?;
    let real = &rec.realizations[0];
    let surface = build_surface(&real.cover, real.base);
    let text = match a.format {
        SurfaceFormat::Off => export_off(&surface, a.refinement),
        SurfaceFormat::Obj => export_obj(&surface, a.refinement),
        SurfaceFormat::Csv => distance_csv(&estimate_distances(&surface, a.refinement)),
    };
    Ok(Outcome { text, code: 0 })
}

/// delta = (pi - eps)/2, exact when eps is an exact multiple of pi.
fn half_complement(eps: RealAngle) -> RealAngle {
    match eps {
        RealAngle::Exact(r) => {
            RealAngle::Exact(RationalAngle::new(r.den() - r.num(), 2 * r.den()))
        }
        RealAngle::Radians(x) => RealAngle::Radians((std::f64::consts::PI - x) / 2.0),
    }
}

fn run_bounds(a: &BoundsArgs) -> CliResult {
    if a.n < 2 {
        return config("n must be at least 2");
    }
    if a.precision < 64 {
        return config("precision must be at least 64 bits");
    }
    if a.epsilon_grid {
        if a.epsilon.is_some() {
            return config("choose either --epsilon or --epsilon-grid, not both");
        }
        if a.n != 3 {
            return config("--epsilon-grid checks the n = 3 closed form; use --n 3");
        }
        return run_grid(a.precision);
    }
    let Some(raw) = &a.epsilon else {
        return config("one of --epsilon or --epsilon-grid is required");
    };
    let eps = parse_angle(raw)?;
    let e = eps.to_f64();
    if !(e > 0.0 && e < std::f64::consts::PI) {
        return config("epsilon must lie in (0, pi)");
    }
    let delta = half_complement(eps);
    let m = m_n_with_bits(delta, a.n, a.precision)
        .map_err(|err| Fail::Precision(err.to_string()))?;
    let report = bound_b(a.n, eps).map_err(|err| Fail::Precision(err.to_string()))?;
    assert_eq!(report.m, m, "threshold mismatch between evaluation paths");
    let mut text = String::new();
    let _ = writeln!(text, "n = {}", a.n);
    let _ = writeln!(text, "eps = {}", angle_pretty(eps));
    let _ = writeln!(text, "delta = (pi - eps)/2 = {}", angle_pretty(delta));
    let _ = writeln!(text, "m_{}(delta) = {}", a.n, m);
    let _ = writeln!(text, "B(n, eps) = 2*(2*25^n)^(m-2) = {}", report.value);
    let _ = writeln!(text, "decimal digits: {}", report.decimal_digits);
    Ok(Outcome { text, code: 0 })
}

/// Agreement table: certified m_3 against the closed form
/// floor(2/(1 - cos(delta/2))) + 2 on the grid eps = k*pi/24.
fn run_grid(precision: u64) -> CliResult {
    let mut text = String::new();
    let _ = writeln!(text, "{:>3}  {:>8}  {:>8}  {:>9}  {:>11}  match", "k", "eps", "delta", "certified", "closed-form");
    let mut mismatches = 0usize;
    for k in 1..=23i64 {
        let eps = RationalAngle::new(k, 24);
        let delta = RationalAngle::new(24 - k, 48);
        let m = m_n_with_bits(RealAngle::Exact(delta), 3, precision)
            .map_err(|err| Fail::Precision(err.to_string()))?;
        let d = delta.to_f64();
        let closed = (2.0 / (1.0 - (d / 2.0).cos())).floor() as u64 + 2;
        let ok = m == closed;
        if !ok {
            mismatches += 1;
        }
        let _ = writeln!(
            text,
            "{:>3}  {:>8}  {:>8}  {:>9}  {:>11}  {}",
            k,
            eps.pretty(),
            delta.pretty(),
            m,
            closed,
            if ok { "yes" } else { "NO" }
        );
    }
    if mismatches == 0 {
        let _ = writeln!(text, "all 23 rows agree");
        Ok(Outcome { text, code: 0 })
    } else {
        let _ = writeln!(text, "{mismatches} row(s) disagree");
        Ok(Outcome { text, code: 1 })
    }
}

fn run_narrow_demo(a: &NarrowDemoArgs) -> CliResult {
    if a.dim == 0 {
        return config("dim must be at least 1");
    }
    let alpha = parse_fraction(&a.alpha)?;
    if !(alpha > Ratio::new(0, 1) && alpha < Ratio::new(1, 1)) {
        return config("alpha must lie in (0, 1)");
    }
    let eps = parse_angle(&a.eps)?.to_f64();
    if !(eps > 0.0 && eps < std::f64::consts::PI) {
        return config("eps must lie in (0, pi)");
    }
    let cloud = match a.clustered {
        Some(0) => return config("clustered levels must be at least 1"),
        Some(levels) => clustered_cloud(a.dim, levels, Ratio::new(1, 13)),
        None => {
            let Some(seed) = a.seed else {
                return config("--seed is required for the random cloud (or use --clustered)");
            };
            if a.count < 4 {
                return config("count must be at least 4");
            }
            uniform_cloud(a.dim, a.count, seed)
        }
    };
    let mut t = String::new();
    let _ = writeln!(t, "cloud: {} points in R^{}", cloud.len(), cloud.dim());
    let d = cloud.diameter();
    let _ = writeln!(t, "diameter d = {d:.6}");
    let af = *alpha.numer() as f64 / *alpha.denom() as f64;
    let r = af * d / 4.0;
    let net = greedy_net(&cloud, r);
    let cap = packing_cap(cloud.dim(), alpha);
    let _ = writeln!(
        t,
        "greedy net at r = alpha*d/4 = {:.6}: {} centers (packing cap {})",
        r,
        net.len(),
        cap
    );
    let (x, sp) = shrink_step(&cloud, alpha).expect("cloud has at least two points");
    let g = shrink_guarantees(&cloud, &x, &sp, alpha);
    let _ = writeln!(
        t,
        "shrink step: x = {:?}, |S'| = {}, guarantees [x far, S' small, S' large] = {:?}",
        x,
        sp.len(),
        g
    );
    let seq = shrink_sequence(&cloud, alpha, 12);
    let _ = writeln!(
        t,
        "shrink sequence (m = 12): length {}, gap decay alpha-controlled: {}",
        seq.len(),
        decay_holds(&seq, alpha)
    );
    match find_wide_triangle(&cloud, eps) {
        Some([x, y, z]) => {
            let _ = writeln!(t, "wide triangle at eps = {eps:.6}:");
            let _ = writeln!(t, "  x = {x:?}");
            let _ = writeln!(t, "  y = {y:?}");
            let _ = writeln!(t, "  z = {z:?}");
            let _ = writeln!(t, "  angle at y = {:.6}", angle_at(&y, &x, &z));
        }
        None => {
            let _ = writeln!(t, "no wide triangle at eps = {eps:.6} (cloud may be eps-narrow)");
        }
    }
    Ok(Outcome { text: t, code: 0 })
}

fn main() -> ExitCode {
    let cfg = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cfg.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = conelinks::set_global_jobs(jobs) {
            eprintln!("error: cannot configure {jobs} worker(s): {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cfg.command {
        Command::Classify(a) => run_classify(a),
        Command::Verify(a) => run_verify(a),
        Command::Dessin(a) => run_dessin(a),
        Command::Surface(a) => run_surface(a),
        Command::Bounds(a) => run_bounds(a),
        Command::NarrowDemo(a) => run_narrow_demo(a),
    };
    match result {
        Ok(out) => {
            if let Some(path) = &cfg.output {
                if let Err(e) = fs::write(path, out.text.as_bytes()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(Fail::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Fail::Precision(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
