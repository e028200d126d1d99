use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::Ratio;

use glmy::complex::ChainComplex;
use glmy::digraph::Digraph;
use glmy::error::Error;
use glmy::path::{count_regular, path_label, ElementaryPath, DEFAULT_MAX_REGULAR_PATHS};
use glmy::qsim::{complexity_report, run_phase_estimation, PhaseEstimationConfig, QubitEncoding};
use glmy::spectral::{betti_numbers, HomologyReport};
use glmy::RationalMatrix;

#[derive(Parser)]
#[command(
    name = "glmy",
    version,
    about = "Path homology of acyclic digraphs: exact Betti numbers and a simulated quantum estimator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact homology report: Betti numbers, dimensions, kernels.
    Analyze(AnalyzeArgs),
    /// Simulated phase-estimation Betti estimator at one degree.
    Qsim(QsimArgs),
    /// Path-register encodings as bitstrings.
    Encode(EncodeArgs),
    /// Cross-check the embedded pipeline against the classical one.
    OracleCheck(OracleCheckArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input file, or `-` for stdin. Edge-list text or JSON.
    #[arg(long, default_value = "-")]
    input: String,
    /// Cap the computed degree (default: the maximal allowed path length).
    #[arg(long)]
    max_dim: Option<usize>,
    /// Include exact boundary, norm and Laplacian matrices in the report.
    #[arg(long)]
    emit_matrices: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Size cap on any single regular-path enumeration.
    #[arg(long, default_value_t = DEFAULT_MAX_REGULAR_PATHS)]
    max_regular_paths: u64,
}

#[derive(Args)]
struct QsimArgs {
    #[arg(long, default_value = "-")]
    input: String,
    /// Homology degree to estimate.
    #[arg(long)]
    degree: usize,
    /// Number of phase-estimation shots.
    #[arg(long, default_value_t = 10_000)]
    shots: u64,
    /// `exact`, or the number of phase bits to quantize to.
    #[arg(long, default_value = "exact", value_parser = parse_phase_bits)]
    phase_bits: PhaseBits,
    /// Seed of the deterministic sampling stream.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also compute the exact Betti number and report agreement.
    #[arg(long)]
    verify: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_MAX_REGULAR_PATHS)]
    max_regular_paths: u64,
}

#[derive(Clone, Copy)]
struct PhaseBits(Option<u32>);

fn parse_phase_bits(s: &str) -> Result<PhaseBits, String> {
    if s.eq_ignore_ascii_case("exact") {
        return Ok(PhaseBits(None));
    }
    match s.parse::<u32>() {
        Ok(t) if t >= 1 => Ok(PhaseBits(Some(t))),
        _ => Err("expected `exact` or a positive bit count".into()),
    }
}

#[derive(Args)]
struct EncodeArgs {
    /// Optional digraph input; provides n, the default width d, and label
    /// resolution for the paths.
    #[arg(long)]
    input: Option<String>,
    /// Vertex count when no input digraph is given; paths are then 0-based
    /// indices.
    #[arg(long)]
    n: Option<usize>,
    /// Maximal encodable path length (register width parameter).
    #[arg(long)]
    d: Option<usize>,
    /// Path as comma-separated vertex labels; repeatable.
    #[arg(long = "path", required = true)]
    paths: Vec<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct OracleCheckArgs {
    #[arg(long, default_value = "-")]
    input: String,
    #[arg(long)]
    max_dim: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_MAX_REGULAR_PATHS)]
    max_regular_paths: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Qsim(args) => cmd_qsim(args),
        Command::Encode(args) => cmd_encode(args),
        Command::OracleCheck(args) => cmd_oracle_check(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &str) -> Result<String, Error> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Inconsistent(format!("cannot read stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path)
            .map_err(|e| Error::Inconsistent(format!("cannot read `{path}`: {e}")))?;
    }
    Ok(text)
}

fn load_digraph(path: &str) -> Result<Digraph, Error> {
    Digraph::parse(&read_input(path)?)
}

fn zeta_strings(g: &Digraph, report: &HomologyReport) -> (Vec<f64>, Vec<String>) {
    let n = g.vertex_count();
    let mut floats = Vec::new();
    let mut exacts = Vec::new();
    for d in &report.degrees {
        let lambda = count_regular(n, d.degree);
        let exact = Ratio::new(BigInt::from(d.gamma_dim), BigInt::from(lambda.clone()));
        floats.push(d.gamma_dim as f64 / lambda.to_string().parse::<f64>().unwrap_or(f64::NAN));
        exacts.push(exact.to_string());
    }
    (floats, exacts)
}

fn matrix_json(m: &RationalMatrix) -> serde_json::Value {
    let rows: Vec<Vec<String>> = (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect())
        .collect();
    serde_json::json!(rows)
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<u8, Error> {
    let g = load_digraph(&args.input)?;
    let complex = ChainComplex::build_up_to(&g, args.max_dim)?;
    let report = betti_numbers(&complex)?;
    let (zeta, zeta_exact) = zeta_strings(&g, &report);

    match args.format {
        Format::Json => {
            let mut json = report.to_json();
            let obj = json.as_object_mut().unwrap();
            obj.insert(
                "graph".into(),
                serde_json::json!({
                    "vertices": g.vertex_count(),
                    "edges": g.edge_count(),
                    "labels": g.labels(),
                    "duplicate_edges_collapsed": g.duplicate_edges(),
                    "max_path_length": g.max_allowed_path_length(),
                }),
            );
            obj.insert("zeta".into(), serde_json::json!(zeta));
            obj.insert("zeta_exact".into(), serde_json::json!(zeta_exact));
            if args.emit_matrices {
                let per_degree: Vec<serde_json::Value> = report
                    .degrees
                    .iter()
                    .map(|d| {
                        let k = d.degree;
                        let gamma = complex.gamma(k).expect("degree in range");
                        let allowed: Vec<String> = gamma
                            .allowed()
                            .paths()
                            .iter()
                            .map(|p| path_label(&g, p))
                            .collect();
                        let completion: Vec<serde_json::Value> =
                            gamma.completion().iter().map(|c| c.to_json()).collect();
                        serde_json::json!({
                            "k": k,
                            "gamma_dim": d.gamma_dim,
                            "allowed": allowed,
                            "completion": completion,
                            "boundary": matrix_json(&complex.boundary_gamma(k)),
                            "norm": matrix_json(gamma.norm()),
                            "laplacian": matrix_json(&complex.laplacian_gamma(k)),
                        })
                    })
                    .collect();
                obj.insert("complex".into(), serde_json::json!(per_degree));
            }
            println!("{}", serde_json::to_string_pretty(&json).unwrap());
        }
        Format::Text => {
            println!(
                "digraph: {} vertices, {} edges",
                g.vertex_count(),
                g.edge_count()
            );
            if g.duplicate_edges() > 0 {
                println!("warning: {} duplicate edge(s) collapsed", g.duplicate_edges());
            }
            println!("max allowed path length: {}", g.max_allowed_path_length());
            println!("{:<3} {:>7} {:>7}  zeta", "k", "gamma", "betti");
            for (d, (zf, ze)) in report.degrees.iter().zip(zeta.iter().zip(&zeta_exact)) {
                println!("{:<3} {:>7} {:>7}  {} ({:.6})", d.degree, d.gamma_dim, d.betti, ze, zf);
            }
            println!("euler characteristic: {}", report.euler);
            if args.emit_matrices {
                for d in &report.degrees {
                    println!("-- degree {} laplacian --", d.degree);
                    println!("{:?}", complex.laplacian_gamma(d.degree));
                }
            }
        }
    }
    Ok(0)
}

fn cmd_qsim(args: QsimArgs) -> Result<u8, Error> {
    let g = load_digraph(&args.input)?;
    let complex = ChainComplex::build_up_to(&g, None)?;
    let cfg = PhaseEstimationConfig {
        degree: args.degree,
        shots: args.shots,
        phase_bits: args.phase_bits.0,
        seed: args.seed,
        rescale: true,
    };
    let report = run_phase_estimation(&complex, &cfg, args.max_regular_paths)?;
    let complexity = complexity_report(&complex, args.degree)?;

    let exact = if args.verify {
        Some(betti_numbers(&complex)?.betti()[args.degree])
    } else {
        None
    };

    match args.format {
        Format::Json => {
            let mut json = report.to_json();
            let obj = json.as_object_mut().unwrap();
            obj.insert("complexity".into(), complexity.to_json());
            if let Some(exact) = exact {
                obj.insert("exact_betti".into(), serde_json::json!(exact));
                obj.insert(
                    "agree".into(),
                    serde_json::json!(exact == report.betti_hat),
                );
            }
            println!("{}", serde_json::to_string_pretty(&json).unwrap());
        }
        Format::Text => {
            println!(
                "degree {}: gamma_dim = {}, lambda_dim = {}, qubits = {}",
                report.degree, report.gamma_dim, report.lambda_dim, report.qubits
            );
            println!(
                "zero mass = {:.9}, shots = {}, seed = {}",
                report.zero_mass, report.shots, report.seed
            );
            println!(
                "c_hat = {:.6}, betti_hat = {}, zeta = {:.6}",
                report.c_hat, report.betti_hat, report.zeta
            );
            println!(
                "grover steps ~ {}, amplitude steps ~ {}",
                complexity.grover_steps, complexity.amplitude_steps
            );
            if let Some(exact) = exact {
                println!(
                    "exact betti = {exact} ({})",
                    if exact == report.betti_hat { "agree" } else { "DISAGREE" }
                );
            }
        }
    }
    Ok(0)
}

fn cmd_encode(args: EncodeArgs) -> Result<u8, Error> {
    let graph = match &args.input {
        Some(path) => Some(load_digraph(path)?),
        None => None,
    };
    let (n, default_d) = match &graph {
        Some(g) => (g.vertex_count(), g.max_allowed_path_length()),
        None => {
            let n = args.n.ok_or_else(|| {
                Error::Inconsistent("encode needs --input or --n".into())
            })?;
            (n, n.saturating_sub(1))
        }
    };
    let d = args.d.unwrap_or(default_d);
    let enc = QubitEncoding::new(n, d);

    let mut lines = Vec::new();
    for spec in &args.paths {
        let tokens: Vec<&str> = spec.split(',').map(str::trim).collect();
        let indices: Vec<u32> = match &graph {
            Some(g) => tokens
                .iter()
                .map(|t| {
                    g.labels()
                        .iter()
                        .position(|l| l == t)
                        .map(|i| i as u32)
                        .ok_or_else(|| Error::UnknownVertex {
                            label: (*t).to_string(),
                        })
                })
                .collect::<Result<_, _>>()?,
            None => tokens
                .iter()
                .map(|t| {
                    t.parse::<u32>().map_err(|_| Error::Parse {
                        line: 1,
                        column: 1,
                        message: format!("`{t}` is not a vertex index"),
                    })
                })
                .collect::<Result<_, _>>()?,
        };
        let path = ElementaryPath::new(indices)?;
        let encoded = enc.encode(&path)?;
        let display = match &graph {
            Some(g) => path_label(g, &path),
            None => path
                .vertices()
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(","),
        };
        lines.push((display, encoded));
    }

    match args.format {
        Format::Json => {
            let rows: Vec<serde_json::Value> = lines
                .iter()
                .map(|(display, e)| {
                    serde_json::json!({
                        "path": display,
                        "registers": e.register_strings(),
                        "bits": e.bitstring(),
                    })
                })
                .collect();
            let json = serde_json::json!({
                "n": n,
                "d": d,
                "bits_per_register": enc.bits_per_register(),
                "qubits": enc.total_qubits(),
                "paths": rows,
            });
            println!("{}", serde_json::to_string_pretty(&json).unwrap());
        }
        Format::Text => {
            for (display, e) in &lines {
                println!(
                    "{display}  {}  {}",
                    e.register_strings().join(" "),
                    e.bitstring()
                );
            }
        }
    }
    Ok(0)
}

fn cmd_oracle_check(args: OracleCheckArgs) -> Result<u8, Error> {
    let g = load_digraph(&args.input)?;
    let complex = ChainComplex::build_up_to(&g, args.max_dim)?;
    let embedded = betti_numbers(&complex)?.betti();
    let omega = glmy::oracle::betti_omega(&g);

    let mut rows = Vec::new();
    let mut all_agree = true;
    for (k, &b) in embedded.iter().enumerate() {
        let o = omega.get(k).copied().unwrap_or(0);
        let agree = b == o;
        all_agree &= agree;
        rows.push((k, b, o, agree));
    }

    match args.format {
        Format::Json => {
            let degrees: Vec<serde_json::Value> = rows
                .iter()
                .map(|&(k, b, o, agree)| {
                    serde_json::json!({
                        "k": k,
                        "betti_embedded": b,
                        "betti_omega": o,
                        "agree": agree,
                    })
                })
                .collect();
            let json = serde_json::json!({ "degrees": degrees, "all_agree": all_agree });
            println!("{}", serde_json::to_string_pretty(&json).unwrap());
        }
        Format::Text => {
            println!("{:<3} {:>9} {:>7}  agree", "k", "embedded", "omega");
            for &(k, b, o, agree) in &rows {
                println!(
                    "{:<3} {:>9} {:>7}  {}",
                    k,
                    b,
                    o,
                    if agree { "yes" } else { "NO" }
                );
            }
            println!(
                "{}",
                if all_agree {
                    "all degrees agree"
                } else {
                    "DISAGREEMENT FOUND"
                }
            );
        }
    }
    Ok(if all_agree { 0 } else { 1 })
}
