//! Command-line front end. Exit codes: 0 success, 1 input or usage error,
//! 2 when the genericity verdict is undetermined.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{Algebra, AnyAlgebra};
use crate::classify::{analyze, conjecture_scan, num_json, num_text, report_json, report_text, third_eigenvalue, AlgebraReport, ScanStrategy, CONVENTION};
use crate::families::{construct_from_spectrum, make_family, FamilyOptions, FamilyParams, FAMILY_NAMES};
use crate::io::{parse_algebra, serialize_algebra};
use crate::ode::{emit_phase_portrait, phase_analysis, FieldKind, PortraitOptions};
use crate::scalar::{f64_to_rational, format_rational, parse_rational_literal, rational, Rational, Tolerance};
use crate::solver::{GenericityStatus, SolverConfig, DEFAULT_SEED};

#[derive(Parser, Debug)]
#[command(name = "idemgeo", version, about = "Idempotents, Peirce spectra and configuration types of small commutative algebras")]
pub struct Cli {
    /// Scalar mode override for the input algebra.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Comparison tolerance in float mode.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Riccati,
    Squaring,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Full report: idempotents, nilpotents, genericity, type, indices, syzygies.
    Analyze(InputArgs),
    /// Build a 2D algebra with the given nontrivial Peirce eigenvalues.
    Construct {
        /// Two or three eigenvalues; a missing third one is completed from the syzygy.
        #[arg(required = true, num_args = 2..=3, allow_negative_numbers = true)]
        lambdas: Vec<String>,
    },
    /// Configuration type, charges, indices and singular-point structure.
    Classify(InputArgs),
    /// Count idempotents on planes of a 3D algebra.
    Conjecture {
        #[command(flatten)]
        input: InputArgs,
        /// Random planes scanned in addition to the planes through idempotent triples.
        #[arg(long, default_value_t = 10_000)]
        planes: usize,
    },
    /// Phase portrait of x' = x^2 - x or x' = x^2 as SVG and CSV.
    Portrait {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = FieldArg::Riccati)]
        field: FieldArg,
        /// xmin,xmax,ymin,ymax
        #[arg(long, default_value = "-2,2,-2,2", allow_hyphen_values = true)]
        window: String,
        #[arg(long, default_value_t = 12)]
        density: usize,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 3000)]
        steps: usize,
        /// SVG path (defaults to --out, then portrait.svg).
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Optional CSV path with columns t,x1,x2,seed_id.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// List the built-in families.
    Families,
}

#[derive(Args, Debug, Clone, Default)]
pub struct InputArgs {
    /// Algebra document (JSON or square-map DSL); `-` reads stdin.
    pub input: Option<PathBuf>,
    /// Built-in family instead of a file.
    #[arg(long, conflicts_with = "input")]
    pub family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<String>,
    #[arg(long)]
    pub tau_squared: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Bilinear form for the spin family, rows separated by `;`.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Newton starts for the numeric solver.
    #[arg(long)]
    pub starts: Option<usize>,
}

/// Exit code plus a user-facing message.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn input_error(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

/// Parses `args` (program name first) and runs, writing to the given streams.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

/// Runs with the process arguments and standard streams.
pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let mut cfg = SolverConfig::default().with_seed(cli.seed);
    if let Some(t) = cli.tol {
        if !(t > 0.0) {
            return Err(input_error("--tol must be positive"));
        }
        cfg.tol = Tolerance::new(t);
    }
    match &cli.command {
        Command::Analyze(input) => {
            let alg = load(cli, input, &mut cfg)?;
            let report = analyze(&alg, &cfg);
            let body = match cli.format {
                Format::Json => pretty(&report_json(&report)),
                Format::Text => report_text(&report),
            };
            emit(cli, stdout, &body)?;
            Ok(status_code(&report))
        }
        Command::Classify(input) => {
            let alg = load(cli, input, &mut cfg)?;
            let report = analyze(&alg, &cfg);
            let body = classify_output(cli.format, &alg, &report);
            emit(cli, stdout, &body)?;
            Ok(status_code(&report))
        }
        Command::Construct { lambdas } => construct(cli, lambdas, stdout, stderr),
        Command::Conjecture { input, planes } => {
            let alg = load(cli, input, &mut cfg)?;
            if alg.dim() != 3 {
                return Err(input_error(format!("conjecture needs a three-dimensional algebra, got dimension {}", alg.dim())));
            }
            let report = analyze(&alg, &cfg);
            let strategy = ScanStrategy { random_planes: *planes, seed: cli.seed, tol: 1e-9 };
            let scan = conjecture_scan(&report.real_points(), &strategy).map_err(|e| input_error(e.to_string()))?;
            let body = match cli.format {
                Format::Json => pretty(&json!({
                    "label": report.label,
                    "verdict": report.verdict.status,
                    "real_idempotents": report.real_points().len(),
                    "strategy": strategy,
                    "scan": scan,
                })),
                Format::Text => {
                    let mut t = format!(
                        "algebra {}: {} ({} real idempotents)\nplanes through triples: {} ({} collinear triples skipped)\nrandom planes: {}\nmax idempotents on a plane: {}\nviolations of the 2^k bound: {}\n",
                        report.label.as_deref().unwrap_or("(unnamed)"),
                        report.verdict.status,
                        scan.points,
                        scan.triple_planes,
                        scan.degenerate_triples,
                        scan.random_planes,
                        scan.max_count,
                        scan.violations.len()
                    );
                    if let Some(w) = &scan.witness {
                        t.push_str(&format!("witness plane: base {:?}, members {:?}\n", w.plane.base, w.members));
                    }
                    t
                }
            };
            emit(cli, stdout, &body)?;
            Ok(status_code(&report))
        }
        Command::Portrait { input, field, window, density, dt, steps, svg, csv } => {
            let alg = load(cli, input, &mut cfg)?;
            if alg.dim() != 2 {
                return Err(input_error(format!("portrait needs a two-dimensional algebra, got dimension {}", alg.dim())));
            }
            let w: Vec<f64> = window.split(',').map(|s| s.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| input_error("--window must be xmin,xmax,ymin,ymax"))?;
            let window: [f64; 4] = w.try_into().map_err(|_| input_error("--window must have four numbers"))?;
            let opts = PortraitOptions {
                kind: match field {
                    FieldArg::Riccati => FieldKind::Riccati,
                    FieldArg::Squaring => FieldKind::Squaring,
                },
                window,
                density: *density,
                dt: *dt,
                steps: *steps,
            };
            let svg_path = svg.clone().or_else(|| cli.out.clone()).unwrap_or_else(|| PathBuf::from("portrait.svg"));
            let summary = emit_phase_portrait(&alg, &opts, &cfg, Some(&svg_path), csv.as_deref()).map_err(|e| input_error(e.to_string()))?;
            let body = match cli.format {
                Format::Json => pretty(&serde_json::to_value(&summary).expect("serializable")),
                Format::Text => {
                    let labels: Vec<String> = summary.singular_points.iter().map(|c| format!("({:.6}, {:.6}) {:?}", c.point[0], c.point[1], c.label)).collect();
                    let structure = summary.phase.as_ref().map_or("n/a".to_string(), |p| format!("{:?} {:?}", p.berlinskii.shape, p.berlinskii.structural_label));
                    format!(
                        "{:?} field: {} trajectories, {} idempotent rays\nsingular points: {}\nstructure: {structure}\nwrote: {}\n",
                        summary.kind,
                        summary.trajectories,
                        summary.rays,
                        if labels.is_empty() { "none".into() } else { labels.join("; ") },
                        summary.files.join(", ")
                    )
                }
            };
            stdout.write_all(body.as_bytes()).map_err(|e| input_error(e.to_string()))?;
            Ok(0)
        }
        Command::Families => {
            let body = match cli.format {
                Format::Json => pretty(&Value::Array(FAMILY_NAMES.iter().map(|(n, d)| json!({"name": n, "description": d})).collect())),
                Format::Text => FAMILY_NAMES.iter().map(|(n, d)| format!("{n:<10} {d}\n")).collect(),
            };
            emit(cli, stdout, &body)?;
            Ok(0)
        }
    }
}

fn status_code(report: &AlgebraReport) -> i32 {
    if report.verdict.status == GenericityStatus::Undetermined { 2 } else { 0 }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn emit(cli: &Cli, stdout: &mut dyn Write, body: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, body).map_err(|e| input_error(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(body.as_bytes()).map_err(|e| input_error(e.to_string())),
    }
}

fn load(cli: &Cli, input: &InputArgs, cfg: &mut SolverConfig) -> Result<AnyAlgebra, Failure> {
    if let Some(s) = input.starts {
        cfg.starts = Some(s);
    }
    let alg = match (&input.input, &input.family) {
        (Some(path), None) => {
            let text = if path.as_os_str() == "-" {
                let mut s = String::new();
                std::io::stdin().read_to_string(&mut s).map_err(|e| input_error(format!("cannot read stdin: {e}")))?;
                s
            } else {
                std::fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?
            };
            parse_algebra(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))?
        }
        (None, Some(name)) => {
            let opts = FamilyOptions { tau: input.tau.clone(), tau_squared: input.tau_squared.clone(), n: input.n, b: input.b.clone() };
            let params = FamilyParams::from_name(name, &opts).map_err(|e| input_error(e.to_string()))?;
            make_family(&params).map_err(|e| input_error(e.to_string()))?.algebra
        }
        (None, None) => return Err(input_error("give an input file or --family")),
        (Some(_), Some(_)) => return Err(input_error("give either an input file or --family, not both")),
    };
    Ok(match cli.mode {
        None => alg,
        Some(ModeArg::Float) => alg.into_float(),
        Some(ModeArg::Exact) => match alg {
            AnyAlgebra::Exact(a) => AnyAlgebra::Exact(a),
            AnyAlgebra::Float(a) => {
                let label = a.label().map(str::to_string);
                let n = a.dim();
                let mut conv = Vec::with_capacity(n * n * n);
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            conv.push(f64_to_rational(*a.gamma(i, j, k)).ok_or_else(|| input_error("non-finite structure constant"))?);
                        }
                    }
                }
                let exact = Algebra::from_fn(n, |i, j, k| conv[(i * n + j) * n + k].clone()).map_err(|e| input_error(e.to_string()))?;
                let exact = match label {
                    Some(l) => exact.with_label(l),
                    None => exact,
                };
                AnyAlgebra::Exact(exact)
            }
        },
    })
}

fn construct(cli: &Cli, lambdas: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let parsed: Vec<Rational> = lambdas
        .iter()
        .map(|s| parse_rational_literal(s.trim()).map(|(q, _)| q).ok_or_else(|| input_error(format!("'{s}' is not a number"))))
        .collect::<Result<_, _>>()?;
    let half = rational(1, 2);
    if let Some(i) = parsed.iter().position(|l| *l == half) {
        return Err(input_error(format!("lambda_{} = 1/2 is excluded: 1/2 in a Peirce spectrum means the algebra is not generic", i + 1)));
    }
    let l3 = match parsed.get(2) {
        Some(l) => l.clone(),
        None => third_eigenvalue(&parsed[0], &parsed[1]).map_err(|e| input_error(e.to_string()))?,
    };
    let spectrum = [parsed[0].clone(), parsed[1].clone(), l3];
    let c = construct_from_spectrum(&spectrum, 0.0).map_err(|e| input_error(e.to_string()))?;
    let label = format!("spectrum({}, {}, {})", format_rational(&spectrum[0]), format_rational(&spectrum[1]), format_rational(&spectrum[2]));
    let alg: AnyAlgebra = c.algebra.clone().with_label(label).into();
    let alg = if cli.mode == Some(ModeArg::Float) { alg.into_float() } else { alg };
    let third: Vec<String> = c.third.iter().map(format_rational).collect();
    let k = c.pairing[2];
    let _ = writeln!(
        stderr,
        "verified: c3 = ({}) in the basis (c1, c2) is idempotent with spectrum {{1, {}}}",
        third.join(", "),
        format_rational(&spectrum[k])
    );
    let body = match cli.format {
        Format::Json => serialize_algebra(&alg),
        Format::Text => {
            let spec: Vec<String> = spectrum.iter().map(format_rational).collect();
            format!("spectrum: ({})\nthird idempotent: ({})\n{}", spec.join(", "), third.join(", "), serialize_algebra(&alg))
        }
    };
    emit(cli, stdout, &body)?;
    Ok(0)
}

fn classify_output(format: Format, alg: &AnyAlgebra, report: &AlgebraReport) -> String {
    let phase = phase_analysis(alg, report).ok();
    match format {
        Format::Json => pretty(&json!({
            "label": report.label,
            "verdict": report.verdict.status,
            "type": report.config_type,
            "type_geometric": report.config_type_geometric,
            "type_convention": CONVENTION,
            "type_note": report.type_note,
            "charges": report.charges.as_ref().map(|c| c.iter().map(num_json).collect::<Vec<_>>()),
            "indices": report.indices,
            "index_at_infinity": report.index_at_infinity,
            "index_sum": report.index_sum,
            "phase": phase,
        })),
        Format::Text => {
            let mut out = format!("algebra {}: {}\n", report.label.as_deref().unwrap_or("(unnamed)"), report.verdict.status);
            out.push_str(&format!("type: {}\n", report.config_type));
            match &report.type_note {
                Some(n) => out.push_str(&format!("no type: {n}\n")),
                None => {
                    let ch: Vec<String> = report.charges.iter().flatten().map(num_text).collect();
                    out.push_str(&format!("charges (a0..a3): ({})\n", ch.join(", ")));
                    out.push_str(&format!(
                        "index at infinity: {}; four-point index sum: {}\n",
                        report.index_at_infinity.unwrap_or_default(),
                        report.index_sum.unwrap_or_default()
                    ));
                }
            }
            if let Some(p) = &phase {
                for (i, c) in p.classes.iter().enumerate() {
                    out.push_str(&format!("  c{i} ({:.6}, {:.6}): {:?}\n", c.point[0], c.point[1], c.label));
                }
                out.push_str(&format!("structure: {:?}, {:?}\n", p.berlinskii.shape, p.berlinskii.structural_label));
            }
            out.push_str(&format!("convention: {CONVENTION}\n"));
            out
        }
    }
}
