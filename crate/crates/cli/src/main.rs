use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use sdcode::constructions::{
    self, alpha_ij_check, certify_distance, evaluate_plan, mds_status, AlphaMode, Char2Curve, DistanceMode, MdsStatus,
    MulticosetVariant, Plan, PlanError, MDS_MINOR_LIMIT,
};
use sdcode::curve::{AsForm, Curve, CurveFamily};
use sdcode::gf::{Elem, Field};
use sdcode::lincode::io::{self as codeio, CodeFile, CodeMeta};
use sdcode::lincode::{DistanceCertificate, LinearCode};
use sdcode::repro::{self, EntryKind, ReproOptions};

const EXIT_INADMISSIBLE: u8 = 2;
const EXIT_VERIFICATION: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "sdcode", version, about = "Self-dual codes from algebraic curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a code from a plan and verify it is self-dual.
    Construct(ConstructArgs),
    /// Check a code given as JSON or as matrix text.
    Verify(VerifyArgs),
    /// Rebuild registered published codes and compare.
    Reproduce(ReproduceArgs),
    /// Print the grid of lengths and field sizes with constructed MDS self-dual codes.
    Table(TableArgs),
    /// List the affine rational points of a curve.
    Points(PointsArgs),
    /// Check the coset-difference identities used by the multicoset plans.
    Alpha(AlphaArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Thm6,
    Multicoset,
    Elliptic2,
    Elliptic2Cor,
    Hyper2,
    Prop2q0,
    Kummer,
    KummerGcdFree,
    Hermitian,
    HalfHermitian,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Square,
    Q1mod4,
}

#[derive(Clone, Copy, ValueEnum)]
enum DistanceArg {
    Auto,
    Exact,
    Bz,
    Bound,
    None,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long, value_enum)]
    family: Option<Family>,
    /// Plan as JSON: inline, a file path, or `-` for stdin.
    #[arg(long, conflicts_with = "family")]
    plan: Option<String>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    q0: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    case: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    ell: Option<u32>,
    #[arg(long)]
    include_zero: bool,
    #[arg(long)]
    punctured: bool,
    #[arg(long, value_enum, default_value = "square")]
    variant: Variant,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    plan: PlanArgs,
    /// Minimum-distance certification.
    #[arg(long, value_enum, default_value = "auto")]
    distance: DistanceArg,
    /// Check every minor of the redundancy block (up to a limit).
    #[arg(long)]
    mds: bool,
    /// Seconds per distance computation (default: AGCODE_BUDGET_SECS or 900).
    #[arg(long)]
    budget: Option<u64>,
    /// Write the code JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Code JSON or matrix text; `-` for stdin.
    input: String,
    /// Field order when the input is matrix text.
    #[arg(long)]
    q: Option<u64>,
    /// The input is the redundancy block A of [I | A].
    #[arg(long)]
    systematic: bool,
    /// Scale the JSON generator by its `meta.twist` vector before checking.
    #[arg(long)]
    apply_twist: bool,
    #[arg(long)]
    self_dual: bool,
    #[arg(long, value_enum, num_args = 0..=1, default_missing_value = "auto")]
    distance: Option<DistanceArg>,
    #[arg(long)]
    mds: bool,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Registry id; omit with --all.
    id: Option<String>,
    #[arg(long)]
    all: bool,
    /// Skip entries marked slow.
    #[arg(long)]
    skip_slow: bool,
    #[arg(long)]
    list: bool,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Csv,
    Markdown,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, default_value = "mds-grid")]
    which: String,
    #[arg(long, value_delimiter = ',')]
    q_list: Option<Vec<u64>>,
    #[arg(long, value_delimiter = ',')]
    n_list: Option<Vec<u64>>,
    #[arg(long, value_enum, default_value = "text")]
    format: TableFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveArg {
    Elliptic2,
    Elliptic2Cor,
    Hyper2,
    Kummer,
    Hermitian,
    HalfHermitian,
}

#[derive(Args)]
struct PointsArgs {
    #[arg(long, value_enum)]
    curve: CurveArg,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    q0: Option<u32>,
    /// Exponent for y^2 = x^t.
    #[arg(long)]
    t: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlphaModeArg {
    Plus,
    Minus,
}

#[derive(Args)]
struct AlphaArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    r: u32,
    #[arg(long, value_enum)]
    mode: AlphaModeArg,
}

/// A failure carrying its exit code.
struct Exit(u8, anyhow::Error);

impl From<anyhow::Error> for Exit {
    fn from(e: anyhow::Error) -> Self {
        Exit(EXIT_USAGE, e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Reproduce(a) => reproduce(a),
        Command::Table(a) => table(a).map_err(Exit::from),
        Command::Points(a) => points(a).map_err(Exit::from),
        Command::Alpha(a) => alpha(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Exit(code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn budget(flag: Option<u64>) -> Duration {
    let secs = flag
        .or_else(|| std::env::var("AGCODE_BUDGET_SECS").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(900);
    Duration::from_secs(secs)
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn need<T>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| anyhow!("--{name} is required for this family"))
}

fn plan_from_args(a: &PlanArgs) -> Result<Plan> {
    if let Some(src) = &a.plan {
        let text = if src.trim_start().starts_with('{') {
            src.clone()
        } else {
            read_input(src)?
        };
        return serde_json::from_str(&text).context("parsing plan JSON");
    }
    let family = a
        .family
        .ok_or_else(|| anyhow!("either --family or --plan is required"))?;
    let char2 = |curve| -> Result<Plan> {
        Ok(Plan::Char2 {
            q: need(a.q, "q")?,
            curve,
            n: need(a.n, "n")?,
        })
    };
    Ok(match family {
        Family::Thm6 => Plan::Thm6 {
            q: need(a.q, "q")?,
            n: need(a.n, "n")?,
        },
        Family::Multicoset => {
            if a.r.is_none() && a.n.is_none() {
                bail!("--r or --n is required for multicoset");
            }
            Plan::Multicoset {
                q: need(a.q, "q")?,
                r: a.r,
                n: a.n,
                case: a.case,
                t: need(a.t, "t")?,
                include_zero: a.include_zero,
                variant: match a.variant {
                    Variant::Square => MulticosetVariant::Square,
                    Variant::Q1mod4 => MulticosetVariant::Q1mod4,
                },
            }
        }
        Family::Elliptic2 => char2(Char2Curve::Elliptic2)?,
        Family::Elliptic2Cor => char2(Char2Curve::Elliptic2Cor)?,
        Family::Hyper2 => char2(Char2Curve::Hyper2)?,
        Family::Prop2q0 => Plan::Prop2q0 { q: need(a.q, "q")? },
        Family::Kummer => Plan::Kummer {
            q: need(a.q, "q")?,
            t: need(a.t, "t")?,
            n: need(a.n, "n")?,
        },
        Family::KummerGcdFree => Plan::KummerGcdFree {
            q: need(a.q, "q")?,
            n: need(a.n, "n")?,
        },
        Family::Hermitian => Plan::Hermitian {
            q0: need(a.q0, "q0")?,
            case: need(a.case, "case")?,
            n: a.n,
            r: a.r,
            t: a.t,
            k: a.k,
            ell: a.ell,
            include_zero: a.include_zero,
        },
        Family::HalfHermitian => Plan::HalfHermitian {
            q0: need(a.q0, "q0")?,
            punctured: a.punctured,
        },
    })
}

#[derive(Serialize)]
struct DistanceJson {
    method: String,
    d_low: usize,
    d_up: usize,
    exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<String>>,
}

fn distance_json(f: &Field, cert: &DistanceCertificate) -> DistanceJson {
    DistanceJson {
        method: format!("{:?}", cert.method),
        d_low: cert.d_low,
        d_up: cert.d_up,
        exact: cert.is_exact(),
        witness: cert.witness.as_ref().map(|w| w.iter().map(|&x| f.format(x)).collect()),
    }
}

fn mode_of(d: DistanceArg) -> Option<DistanceMode> {
    match d {
        DistanceArg::Auto => Some(DistanceMode::Auto),
        DistanceArg::Exact => Some(DistanceMode::Exact),
        DistanceArg::Bz => Some(DistanceMode::Bz),
        DistanceArg::Bound => Some(DistanceMode::Bound),
        DistanceArg::None => None,
    }
}

fn mds_json(status: MdsStatus) -> Value {
    serde_json::to_value(status).unwrap_or(Value::Null)
}

fn construct(a: ConstructArgs) -> Result<u8, Exit> {
    let plan = plan_from_args(&a.plan)?;
    let start = Instant::now();
    let built = match evaluate_plan(&plan) {
        Ok(b) => b,
        Err(e) => {
            let code = if matches!(e, PlanError::Inadmissible(_)) || e.is_admissibility() {
                EXIT_INADMISSIBLE
            } else {
                EXIT_VERIFICATION
            };
            return Err(Exit(code, anyhow!(e)));
        }
    };
    let construct_secs = start.elapsed().as_secs_f64();
    let f = built.field().clone();
    let designed = built.report.promised.d_bound;
    let mut certification = serde_json::Map::new();
    let mut failed = false;
    let start = Instant::now();
    if let Some(mode) = mode_of(a.distance) {
        let cert = certify_distance(&built.code, Some(designed), mode, Some(budget(a.budget)))
            .map_err(|e| Exit(EXIT_VERIFICATION, anyhow!(e)))?;
        if cert.d_low < designed.min(cert.d_up) {
            failed = true;
        }
        if !cert.is_exact() && mode != DistanceMode::Bound {
            eprintln!(
                "warning: distance not certified exactly ({} <= d <= {})",
                cert.d_low, cert.d_up
            );
        }
        certification.insert("distance".into(), json!(distance_json(&f, &cert)));
        certification.insert(
            "meets_designed_bound".into(),
            json!(cert.d_low >= designed || cert.d_up >= designed && cert.is_exact()),
        );
        let nk = built.code.n() - built.code.k();
        let class = match cert.exact() {
            Some(d) if d == nk + 1 => "mds",
            Some(d) if d == nk => "almost_mds",
            Some(_) => "other",
            None => "unknown",
        };
        certification.insert("class".into(), json!(class));
    }
    let distance_secs = start.elapsed().as_secs_f64();
    let start = Instant::now();
    if a.mds {
        let status = mds_status(&built.code, built.report.mds_by_structure, MDS_MINOR_LIMIT);
        if matches!(status, MdsStatus::Certified { mds: false }) && built.report.promised.mds {
            failed = true;
        }
        certification.insert("mds".into(), mds_json(status));
    }
    let mds_secs = start.elapsed().as_secs_f64();
    let twist: Vec<String> = built.twist.iter().map(|&x| f.format(x)).collect();
    let file = CodeFile::from_code(
        &built.code,
        CodeMeta {
            construction: Some(plan.to_string()),
            twist: Some(twist),
            provenance: None,
        },
    );
    let doc = json!({
        "code": file,
        "report": built.report,
        "certification": certification,
        "timing": {
            "construct_secs": construct_secs,
            "distance_secs": distance_secs,
            "mds_secs": mds_secs,
        },
    });
    let text = serde_json::to_string_pretty(&doc).map_err(|e| Exit(EXIT_USAGE, e.into()))?;
    match &a.out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|e| Exit(EXIT_USAGE, e.into()))?,
        None => println!("{text}"),
    }
    Ok(if failed { EXIT_VERIFICATION } else { 0 })
}

fn load_code(a: &VerifyArgs) -> Result<LinearCode> {
    let text = read_input(&a.input)?;
    if text.trim_start().starts_with('{') {
        let doc: Value = serde_json::from_str(&text).context("parsing code JSON")?;
        let inner = doc.get("code").cloned().unwrap_or(doc);
        let file: CodeFile = serde_json::from_value(inner).context("reading code JSON")?;
        let code = file.to_code()?;
        return Ok(match file.twist_vector(code.field())? {
            Some(t) if a.apply_twist => code.twist(&t)?,
            _ => code,
        });
    }
    let q = a.q.ok_or_else(|| anyhow!("--q is required for matrix text"))?;
    let f = Field::of_order(q)?;
    let rows = codeio::parse_matrix_text(&f, &text)?;
    let n = rows.first().map_or(0, Vec::len);
    if a.systematic {
        Ok(repro::systematic_from_redundancy(&f, &rows)?)
    } else {
        Ok(LinearCode::from_spanning(&f, n, rows)?)
    }
}

fn verify(a: VerifyArgs) -> Result<u8, Exit> {
    let code = load_code(&a)?;
    let f = code.field().clone();
    let mut out = serde_json::Map::new();
    out.insert("n".into(), json!(code.n()));
    out.insert("k".into(), json!(code.k()));
    let all = !a.self_dual && a.distance.is_none() && !a.mds;
    let mut failed = false;
    if a.self_dual || all {
        let so = code.is_self_orthogonal();
        let sd = code.is_self_dual();
        failed |= !sd;
        out.insert("self_orthogonal".into(), json!(so));
        out.insert("self_dual".into(), json!(sd));
    }
    if let Some(mode) = a.distance.or(all.then_some(DistanceArg::Auto)).and_then(mode_of) {
        let cert = certify_distance(&code, None, mode, Some(budget(a.budget)))
            .map_err(|e| Exit(EXIT_VERIFICATION, e.into()))?;
        if !cert.is_exact() {
            eprintln!(
                "warning: distance not certified exactly ({} <= d <= {})",
                cert.d_low, cert.d_up
            );
        }
        out.insert("distance".into(), json!(distance_json(&f, &cert)));
    }
    if a.mds || all {
        out.insert(
            "mds".into(),
            mds_json(mds_status(
                &code,
                false,
                if a.mds { u128::MAX } else { MDS_MINOR_LIMIT },
            )),
        );
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&Value::Object(out)).unwrap_or_default()
    );
    Ok(if failed { EXIT_VERIFICATION } else { 0 })
}

fn reproduce(a: ReproduceArgs) -> Result<u8, Exit> {
    let entries = repro::registry();
    if a.list {
        for e in &entries {
            println!(
                "{:<36} {:<10} {}",
                e.id,
                format!("{:?}", e.kind).to_lowercase(),
                e.title
            );
        }
        return Ok(0);
    }
    let selected: Vec<_> = match (&a.id, a.all) {
        (Some(id), false) => {
            let e = repro::find(id).ok_or_else(|| Exit(EXIT_USAGE, anyhow!("unknown registry id {id}")))?;
            vec![e]
        }
        (None, true) => entries
            .into_iter()
            .filter(|e| !(a.skip_slow && e.kind == EntryKind::Slow))
            .collect(),
        _ => return Err(Exit(EXIT_USAGE, anyhow!("give one registry id or --all"))),
    };
    let opts = ReproOptions {
        budget: budget(a.budget),
    };
    let mut reports = Vec::new();
    for e in &selected {
        let r = repro::run_entry(e, &opts);
        if !a.json {
            let status = match r.pass {
                Some(true) => "PASS",
                Some(false) => "FAIL",
                None => "EXCLUDED",
            };
            println!("{status:<8} {:<36} {} ({:.1}s)", r.id, r.title, r.seconds);
            for c in &r.checks {
                if r.pass == Some(false) || selected.len() == 1 {
                    let mark = if c.pass { "ok" } else { "MISMATCH" };
                    println!("    {mark:<8} {}: {}", c.name, c.detail);
                }
            }
        }
        reports.push(r);
    }
    let failed = reports.iter().filter(|r| r.pass == Some(false)).count();
    let passed = reports.iter().filter(|r| r.pass == Some(true)).count();
    let excluded = reports.iter().filter(|r| r.pass.is_none()).count();
    if a.json {
        let doc = json!({ "entries": reports, "passed": passed, "failed": failed, "excluded": excluded });
        println!("{}", serde_json::to_string_pretty(&doc).unwrap_or_default());
    } else if reports.len() > 1 {
        println!("{passed} passed, {failed} failed, {excluded} excluded");
    }
    Ok(if failed > 0 { EXIT_VERIFICATION } else { 0 })
}

const GRID_Q: [u64; 20] = [
    11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47, 49, 53, 61, 73, 81,
];
const GRID_N: [u64; 30] = [
    2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30, 32, 34, 36, 38, 40, 42, 44, 46, 48, 50, 52, 62, 72, 0, 0,
];

fn table(a: TableArgs) -> Result<u8> {
    if a.which != "mds-grid" {
        bail!("unknown table {}", a.which);
    }
    let qs = a.q_list.unwrap_or_else(|| GRID_Q.to_vec());
    let ns = a
        .n_list
        .unwrap_or_else(|| GRID_N.iter().copied().filter(|&n| n > 0).collect());
    let grid: Vec<Vec<String>> = ns
        .iter()
        .map(|&n| qs.iter().map(|&q| constructions::grid_cell(n, q).mark).collect())
        .collect();
    let header: Vec<String> = std::iter::once("n/q".to_string())
        .chain(qs.iter().map(u64::to_string))
        .collect();
    let rows: Vec<Vec<String>> = ns
        .iter()
        .zip(&grid)
        .map(|(n, r)| std::iter::once(n.to_string()).chain(r.iter().cloned()).collect())
        .collect();
    match a.format {
        TableFormat::Csv => {
            println!("{}", header.join(","));
            for r in rows {
                println!("{}", r.join(","));
            }
        }
        TableFormat::Markdown => {
            println!("| {} |", header.join(" | "));
            println!("|{}", "---|".repeat(header.len()));
            for r in rows {
                println!("| {} |", r.join(" | "));
            }
        }
        TableFormat::Text => {
            let fmt = |r: &[String]| r.iter().map(|c| format!("{c:>4}")).collect::<String>();
            println!("{}", fmt(&header));
            for r in rows {
                println!("{}", fmt(&r));
            }
        }
    }
    Ok(0)
}

fn points(a: PointsArgs) -> Result<u8> {
    let (q, family) = match a.curve {
        CurveArg::Elliptic2 | CurveArg::Elliptic2Cor | CurveArg::Hyper2 => {
            let form = match a.curve {
                CurveArg::Elliptic2 => AsForm::Cubic {
                    b: Elem::ONE,
                    c: Elem::ZERO,
                },
                CurveArg::Elliptic2Cor => AsForm::Cubic {
                    b: Elem::ZERO,
                    c: Elem::ZERO,
                },
                _ => AsForm::Quintic,
            };
            (need(a.q, "q")?, CurveFamily::ArtinSchreier2(form))
        }
        CurveArg::Kummer => (need(a.q, "q")?, CurveFamily::Kummer { t: need(a.t, "t")? }),
        CurveArg::Hermitian => {
            let q0 = need(a.q0, "q0")?;
            (q0 as u64 * q0 as u64, CurveFamily::Hermitian { q0 })
        }
        CurveArg::HalfHermitian => {
            let q0 = need(a.q0, "q0")?;
            (q0 as u64 * q0 as u64, CurveFamily::HalfHermitian { q0 })
        }
    };
    let f = Field::of_order(q)?;
    let c = Curve::new(&f, family)?;
    let pts = c.enumerate_points();
    print!("{}", c.dump_points(&pts));
    eprintln!("{} affine points, genus {}", pts.len(), c.genus());
    Ok(0)
}

fn alpha(a: AlphaArgs) -> Result<u8, Exit> {
    let mode = match a.mode {
        AlphaModeArg::Plus => AlphaMode::Plus,
        AlphaModeArg::Minus => AlphaMode::Minus,
    };
    let report = alpha_ij_check(a.q, a.r, mode).map_err(|e| Exit(EXIT_INADMISSIBLE, e.into()))?;
    println!("{}", serde_json::to_string_pretty(&report).unwrap_or_default());
    Ok(if report.all_hold() { 0 } else { EXIT_VERIFICATION })
}
