//! Command-line front end. [`dispatch`] returns the process exit code:
//! 0 on success, 1 when a verification check fails, 2 on argument, domain
//! or I/O errors.

pub mod report;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use cavityqed::coulomb::{kernel_e, KernelMatrix, Separation, Sign};
use cavityqed::dicke::{coupling_grid, ground_state, mean_field, spectrum_scan, DickeParams};
use cavityqed::radiation::{kernel_d, kernel_d_spectral_extrapolated};
use cavityqed::specfun::{xi, Tolerance};
use cavityqed::verify::{run_suite, ExactKernels, Suite, VerifyConfig};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use report::{emit_report, num, Format, ReportDocument};

#[derive(Debug, Parser)]
#[command(name = "cavityqed", version, about = "Planar-cavity interaction kernels, identity checks and Dicke sweeps")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    format: OutputFormat,
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for randomized sample grids
    #[arg(long, default_value_t = 42, global = true)]
    seed: u64,
    /// Absolute tolerance for quadratures and lattice sums
    #[arg(long, default_value_t = 1e-13, global = true)]
    tol_abs: f64,
    /// Relative tolerance for quadratures and lattice sums
    #[arg(long, default_value_t = 1e-12, global = true)]
    tol_rel: f64,
    /// Panel budget of adaptive quadratures
    #[arg(long, default_value_t = 20_000, global = true)]
    max_subdivisions: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Json => Format::Json,
            OutputFormat::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inverse-cube lattice sum ξ(u, v) in units of the cavity length
    Xi {
        /// Axial offset u = z/L
        #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
        u: f64,
        /// Transverse distance v = ρ/L
        #[arg(long, default_value_t = 0.0)]
        v: f64,
    },
    /// Dimensionless 3×3 interaction kernel
    Kernel(KernelArgs),
    /// Run the identity suite
    Verify {
        #[arg(value_enum, default_value_t = SuiteArg::All)]
        target: SuiteArg,
    },
    /// Dicke-model ground state, coupling sweep or mean-field solution
    Dicke(DickeArgs),
}

#[derive(Debug, Args)]
struct KernelArgs {
    /// Kernel family: image Coulomb (E) or quadratic gauge term (D)
    #[arg(long, value_enum, default_value_t = Family::E)]
    family: Family,
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    sign: SignArg,
    /// Axial offset u = z/L
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    u: f64,
    /// Transverse distance v = ρ/L
    #[arg(long, default_value_t = 0.5)]
    v: f64,
    /// Azimuth of the transverse separation
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi: f64,
    /// Evaluate D(+) from the regulated mode sum instead of the summed form
    #[arg(long)]
    spectral: bool,
    /// Regulator ε of the spectral form; results are extrapolated over ε, ε/2, ε/4
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    #[value(name = "E", alias = "e")]
    E,
    #[value(name = "D", alias = "d")]
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    All,
    Bessel,
    Cancellation,
    Modesum,
    Lipschitz,
    Green,
    Aniso,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::All => Suite::All,
            SuiteArg::Bessel => Suite::Bessel,
            SuiteArg::Cancellation => Suite::Cancellation,
            SuiteArg::Modesum => Suite::ModeSum,
            SuiteArg::Lipschitz => Suite::Lipschitz,
            SuiteArg::Green => Suite::Green,
            SuiteArg::Aniso => Suite::Aniso,
        }
    }
}

#[derive(Debug, Args)]
struct DickeArgs {
    #[arg(value_enum)]
    target: DickeTarget,
    /// Atomic transition frequency ω_A
    #[arg(long, default_value_t = 1.0)]
    omega_a: f64,
    /// Cavity frequency ω_C
    #[arg(long, default_value_t = 1.0)]
    omega_c: f64,
    /// Collective coupling y (ground, meanfield)
    #[arg(long, default_value_t = 0.5)]
    y: f64,
    /// First coupling of the sweep
    #[arg(long, default_value_t = 0.0)]
    y_min: f64,
    /// Last coupling of the sweep
    #[arg(long, default_value_t = 3.0)]
    y_max: f64,
    /// Number of sweep points, endpoints included
    #[arg(long, default_value_t = 31)]
    steps: usize,
    /// Number of two-level atoms N
    #[arg(long, default_value_t = 8)]
    n_atoms: u32,
    /// Highest boson number kept
    #[arg(long, default_value_t = 60)]
    cutoff: u32,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DickeTarget {
    Ground,
    Scan,
    Meanfield,
}

enum Failure {
    Domain(String),
    Io(String),
}

impl From<cavityqed::Error> for Failure {
    fn from(e: cavityqed::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<report::ReportError> for Failure {
    fn from(e: report::ReportError) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            2
        }
        Err(Failure::Io(m)) => {
            eprintln!("I/O error: {m}");
            2
        }
    }
}

fn run(cli: &Cli) -> Result<i32, Failure> {
    let g = &cli.global;
    let tol = Tolerance::new(g.tol_abs, g.tol_rel, g.max_subdivisions)?;
    let format = Format::from(g.format);
    let (bytes, code) = match &cli.command {
        Command::Xi { u, v } => {
            let x = xi(*u, *v, &tol)?;
            let out = match format {
                Format::Json => json_bytes(&json!({ "u": u, "v": v, "xi": x })),
                Format::Csv => csv_bytes(&["u", "v", "xi"], &[vec![num(*u), num(*v), num(x)]])?,
            };
            (out, 0)
        }
        Command::Kernel(k) => (kernel(k, &tol, format)?, 0),
        Command::Verify { target } => {
            let config = VerifyConfig {
                seed: g.seed,
                ..VerifyConfig::default()
            };
            let suite = run_suite((*target).into(), &config, &tol, &ExactKernels);
            for w in &suite.warnings {
                eprintln!("warning: {w}");
            }
            let doc = ReportDocument::from_suite(&suite);
            (emit_report(&doc, format)?, if suite.all_pass { 0 } else { 1 })
        }
        Command::Dicke(d) => (dicke(d, format)?, 0),
    };
    write_output(g.output.as_ref(), &bytes)?;
    Ok(code)
}

fn kernel(k: &KernelArgs, tol: &Tolerance, format: Format) -> Result<Vec<u8>, Failure> {
    let sep = Separation::new(k.u, k.v, k.phi)?;
    let sign = match k.sign {
        SignArg::Plus => Sign::Plus,
        SignArg::Minus => Sign::Minus,
    };
    if k.spectral && (k.family != Family::D || sign != Sign::Plus) {
        return Err(Failure::Domain("--spectral is available for --family D --sign plus only".into()));
    }
    let KernelMatrix { m, .. } = match (k.family, k.spectral) {
        (Family::E, _) => kernel_e(sign, &sep, tol)?,
        (Family::D, false) => kernel_d(sign, &sep, tol)?,
        (Family::D, true) => kernel_d_spectral_extrapolated(&sep, k.eps, tol)?,
    };
    let family = match k.family {
        Family::E => "E",
        Family::D => "D",
    };
    let sign_name = match sign {
        Sign::Plus => "plus",
        Sign::Minus => "minus",
    };
    let rows: Vec<[f64; 3]> = (0..3).map(|i| [m[(i, 0)], m[(i, 1)], m[(i, 2)]]).collect();
    Ok(match format {
        Format::Json => json_bytes(&json!({
            "family": family,
            "sign": sign_name,
            "u": k.u,
            "v": k.v,
            "phi": k.phi,
            "spectral": k.spectral,
            "matrix": rows,
        })),
        Format::Csv => {
            let mut header = vec!["family", "sign", "u", "v", "phi", "spectral"];
            header.extend(["xx", "xy", "xz", "yx", "yy", "yz", "zx", "zy", "zz"]);
            let mut row = vec![
                family.to_string(),
                sign_name.to_string(),
                num(k.u),
                num(k.v),
                num(k.phi),
                k.spectral.to_string(),
            ];
            row.extend(rows.iter().flatten().map(|&x| num(x)));
            csv_bytes(&header, &[row])?
        }
    })
}

fn dicke(d: &DickeArgs, format: Format) -> Result<Vec<u8>, Failure> {
    let p = DickeParams::new(d.omega_a, d.omega_c, d.y, d.n_atoms, d.cutoff)?;
    let params = [num(p.omega_a), num(p.omega_c), d.n_atoms.to_string(), d.cutoff.to_string()];
    let params_header = ["omega_a", "omega_c", "n_atoms", "cutoff"];
    Ok(match d.target {
        DickeTarget::Ground => {
            let r = ground_state(&p)?;
            match format {
                Format::Json => json_bytes(&json!({ "params": p, "ground_state": r })),
                Format::Csv => {
                    let mut header = params_header.to_vec();
                    header.extend(["y", "energy", "photon_number", "sz_expect", "parity", "cutoff_converged"]);
                    let mut row = params.to_vec();
                    row.extend([
                        num(p.y),
                        num(r.energy),
                        num(r.photon_number),
                        num(r.sz_expect),
                        num(r.parity),
                        r.cutoff_converged.to_string(),
                    ]);
                    csv_bytes(&header, &[row])?
                }
            }
        }
        DickeTarget::Scan => {
            let grid = coupling_grid(d.y_min, d.y_max, d.steps)?;
            let rows = spectrum_scan(&p, &grid)?;
            match format {
                Format::Json => json_bytes(&json!({ "params": p, "scan": rows })),
                Format::Csv => {
                    let mut header = params_header.to_vec();
                    header.extend(["y", "energy", "photon_number", "gap", "parity"]);
                    let table: Vec<Vec<String>> = rows
                        .iter()
                        .map(|r| {
                            let mut row = params.to_vec();
                            row.extend([num(r.y), num(r.energy), num(r.photon_number), num(r.gap), num(r.parity)]);
                            row
                        })
                        .collect();
                    csv_bytes(&header, &table)?
                }
            }
        }
        DickeTarget::Meanfield => {
            let r = mean_field(&p)?;
            match format {
                Format::Json => json_bytes(&json!({ "params": p, "mean_field": r })),
                Format::Csv => {
                    let header = ["omega_a", "omega_c", "y", "y_c", "order_parameter_sq_per_atom", "energy_per_atom", "theta"];
                    let row = vec![
                        num(p.omega_a),
                        num(p.omega_c),
                        num(p.y),
                        num(r.y_c),
                        num(r.order_parameter_sq_per_atom),
                        num(r.energy_per_atom),
                        num(r.theta),
                    ];
                    csv_bytes(&header, &[row])?
                }
            }
        }
    })
}

fn json_bytes(v: &serde_json::Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("JSON values always serialize");
    out.push(b'\n');
    out
}

fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>, Failure> {
    let io = |e: csv::Error| Failure::Io(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.into_inner().map_err(|e| Failure::Io(e.to_string()))
}

fn write_output(path: Option<&PathBuf>, bytes: &[u8]) -> Result<(), Failure> {
    let res = match path {
        Some(p) => fs::write(p, bytes).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| e.to_string())
        }
    };
    res.map_err(Failure::Io)
}
