//! `qidcert`: certificates, tables and samples for the counterexample family.
//!
//! Exit codes: 0 success, 1 a check failed (or an I/O error), 2 invalid input.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qid_core::defaults;
use qid_core::model::{abs_f1, f1_cf, ln_f1_closed, q_density};
use qid_core::quadrature::evaluate_h;
use qid_core::sampling::{cf_distance_report, sample_p1};
use qid_core::spectral::{gm, spectral_density_g1a, CertificateOptions};
use qid_core::verification::full_certificate;
use qid_core::{Exec, ModelParams, QidError, QuadratureConfig};

#[derive(Parser)]
#[command(name = "qidcert", version, about = "Certify the quasi-infinitely divisible counterexample family")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check and write a JSON certificate.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Certificate path.
        #[arg(long, default_value = "certificate.json")]
        out: PathBuf,
        /// Seed used by the sampler checks.
        #[arg(long, default_value_t = defaults::SEED)]
        seed: u64,
        /// Control run: clamp the negative part of the spectral density.
        #[arg(long)]
        tamper_density: bool,
    },
    /// Tabulate one function of the construction to CSV.
    Tabulate {
        /// Function to tabulate.
        #[arg(value_enum, required_unless_present = "function")]
        name: Option<Function>,
        /// Same as the positional name.
        #[arg(long, value_enum, conflicts_with = "name")]
        function: Option<Function>,
        #[command(flatten)]
        common: Common,
        /// Grid as start:end:step.
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
        /// CSV path; defaults to `<name>.csv`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw samples of the principal density.
    Sample {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = defaults::SAMPLE_COUNT)]
        count: usize,
        #[arg(long, default_value_t = defaults::SEED)]
        seed: u64,
        #[arg(long, default_value = "samples.csv")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// Order of the phase polynomial.
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Mixing weight; defaults to half the admissible maximum.
    #[arg(long)]
    delta: Option<f64>,
    /// Absolute quadrature tolerance.
    #[arg(long, default_value_t = defaults::ABS_TOL)]
    tol: f64,
}

impl Common {
    fn resolve(&self) -> Result<(ModelParams, QuadratureConfig), QidError> {
        let params = match self.delta {
            Some(d) => ModelParams::new(self.n, d)?,
            None => ModelParams::with_default_delta(self.n)?,
        };
        let cfg = QuadratureConfig::default().with_abs_tol(self.tol);
        cfg.validate()?;
        Ok((params, cfg))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Function {
    Q,
    H,
    P1,
    F1,
    #[value(name = "abs_f1")]
    AbsF1,
    Gm,
    #[value(name = "density_G1a")]
    DensityG1a,
    #[value(name = "ln_f1")]
    LnF1,
}

impl Function {
    fn is_complex(self) -> bool {
        matches!(self, Function::F1 | Function::LnF1)
    }

    fn default_range(self) -> (f64, f64, f64) {
        match self {
            Function::F1 | Function::AbsF1 | Function::LnF1 => defaults::TABULATE_T_RANGE,
            _ => defaults::TABULATE_X_RANGE,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Function::Q => "q",
            Function::H => "h",
            Function::P1 => "p1",
            Function::F1 => "f1",
            Function::AbsF1 => "abs_f1",
            Function::Gm => "gm",
            Function::DensityG1a => "density_G1a",
            Function::LnF1 => "ln_f1",
        }
    }
}

/// Failure classes mapped to exit codes.
enum Failure {
    Invalid(String),
    Runtime(String),
}

impl From<QidError> for Failure {
    fn from(e: QidError) -> Self {
        match e {
            QidError::UnsupportedN(_) | QidError::InadmissibleDelta { .. } | QidError::InvalidConfig(_) => {
                Failure::Invalid(e.to_string())
            }
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

/// Writes through a sibling temporary file and a rename.
fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name =
        path.file_name().ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "output path has no file name"))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}

fn parse_range(s: &str) -> Result<(f64, f64, f64), Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || Failure::Invalid(format!("range must be start:end:step with start < end and step > 0, got {s}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let v: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
    if !(v[0] < v[1]) || !(v[2] > 0.0) || v.iter().any(|x| !x.is_finite()) {
        return Err(bad());
    }
    Ok((v[0], v[1], v[2]))
}

fn verify(common: &Common, out: &Path, seed: u64, tamper: bool) -> Result<bool, Failure> {
    let (params, cfg) = common.resolve()?;
    let opts = CertificateOptions { exec: Exec::available(), tamper, seed };
    let cert = full_certificate(&params, &cfg, &opts);
    write_atomic(out, &cert.to_json())?;
    for c in &cert.checks {
        println!(
            "{} {:<40} violation {:>11.3e}  tolerance {:>9.2e}",
            if c.pass { "pass" } else { "FAIL" },
            c.name,
            c.max_violation,
            c.tolerance
        );
    }
    println!(
        "{} checks, {} failed; certificate written to {}",
        cert.checks.len(),
        cert.failures().count(),
        out.display()
    );
    Ok(cert.all_pass)
}

fn tabulate(f: Function, common: &Common, range: Option<&str>, out: Option<&Path>) -> Result<bool, Failure> {
    let (params, cfg) = common.resolve()?;
    let range = match range {
        Some(r) => parse_range(r)?,
        None => f.default_range(),
    };
    let xs = defaults::grid(range);
    let head = match f {
        Function::F1 | Function::AbsF1 | Function::LnF1 => "t",
        _ => "x",
    };
    let mut csv = if f.is_complex() { format!("{head},re,im\n") } else { format!("{head},value\n") };
    for &x in &xs {
        match f {
            Function::F1 | Function::LnF1 => {
                let v = if let Function::F1 = f { f1_cf(&params, x) } else { ln_f1_closed(&params, x) };
                let _ = writeln!(csv, "{x:.16e},{:.16e},{:.16e}", v.re, v.im);
            }
            _ => {
                let v = match f {
                    Function::Q => q_density(x),
                    Function::H => evaluate_h(&params, x, &cfg)?.value,
                    Function::P1 => {
                        let h = evaluate_h(&params, x, &cfg)?.value;
                        (q_density(x) + params.delta() * h) / (1.0 + params.delta())
                    }
                    Function::AbsF1 => abs_f1(&params, x),
                    Function::Gm => gm(params.delta(), x, &cfg)?,
                    _ => spectral_density_g1a(&params, x, &cfg)?,
                };
                let _ = writeln!(csv, "{x:.16e},{v:.16e}");
            }
        }
    }
    let path = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(format!("{}.csv", f.name())));
    write_atomic(&path, &csv)?;
    println!("{} rows of {} written to {}", xs.len(), f.name(), path.display());
    Ok(true)
}

fn sample(common: &Common, count: usize, seed: u64, out: &Path) -> Result<bool, Failure> {
    let (params, cfg) = common.resolve()?;
    if count == 0 {
        return Err(Failure::Invalid("--count must be at least 1".into()));
    }
    let batch = sample_p1(&params, count, seed, &cfg)?;
    write_atomic(out, &batch.to_csv())?;
    let oracle = 1.0 / params.envelope().p1_envelope;
    println!(
        "acceptance rate {:.4} (envelope oracle {:.4}, {} proposals)",
        batch.acceptance_rate, oracle, batch.proposals_used
    );
    let report = cf_distance_report(&batch, |t| f1_cf(&params, t), &defaults::CF_PROBES)?;
    for (t, d) in &report.per_probe {
        println!("  |empirical - f1| at t = {t}: {d:.3e}");
    }
    println!(
        "cf distance {:.3e} vs radius {:.3e}: {}",
        report.max_diff,
        report.radius,
        if report.pass { "pass" } else { "FAIL" }
    );
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify { common, out, seed, tamper_density } => verify(common, out, *seed, *tamper_density),
        Command::Tabulate { name, function, common, range, out } => {
            let f = name.or(*function).expect("clap enforces a function");
            tabulate(f, common, range.as_deref(), out.as_deref())
        }
        Command::Sample { common, count, seed, out } => sample(common, *count, *seed, out),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
