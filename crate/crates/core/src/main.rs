//! Batch CLI: JSON in, machine-readable certificates and pass/fail reports
//! out.
//!
//! Exit codes: 0 success/pass, 1 inequality violated (report still written),
//! 2 numerical failure, 3 invalid input. All randomness derives from a single
//! root seed through labeled substreams, so a report is reproducible
//! byte-for-byte from its resolved config.

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use std::path::PathBuf;

use nu2::calculus::{ms1_lower, verify_power, verify_semigroup, HankelSequence, SemigroupSample};
use nu2::factor::verify_main;
use nu2::gamma::{gamma_lower, SearchParams};
use nu2::group::{fourier_cb_norm, make_group, q_norm, GroupFunction};
use nu2::json::{CoeffsJson, FamilyJson, GroupJson, MatrixJson, VectorJson};
use nu2::num::{spectral_norm, ComplexMatrix, GaussianStream};
use nu2::schur::{nu2 as nu2_norm, Nu2Certificate, SchurKernel};
use nu2::sdp::SdpError;

const EXIT_PASS: i32 = 0;
const EXIT_VIOLATED: i32 = 1;
const EXIT_NUMERICAL: i32 = 2;
const EXIT_INVALID: i32 = 3;

#[derive(Parser)]
#[command(name = "nu2", version, about = "Certified ν₂ norms, γ-boundedness estimates, and factorization-theorem verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certified ν₂ norm of a kernel given as a complex matrix.
    Nu2 {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Include the extracted factorization vectors in the report.
        #[arg(long)]
        factorize: bool,
    },
    /// γ-boundedness lower bound for an operator family.
    Gamma {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        n_terms: usize,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 200)]
        iters: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify ν₂(Θ_{x,x*}) ≤ γ(A)γ(B)‖x‖‖x*‖ for explicit families.
    Theta {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        xstar: PathBuf,
        #[arg(long)]
        gamma_a: f64,
        #[arg(long)]
        gamma_b: f64,
        #[arg(long, default_value_t = 1e-7)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Q-norm and completely bounded Fourier multiplier norm on a finite group.
    Group {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        f: PathBuf,
        #[arg(long, default_value_t = 1e-7)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// ν₂ of the N×N Hankel truncation of a sequence.
    Hankel {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-7)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Semigroup-sample instance of the factorization inequality.
    Semigroup {
        #[arg(long)]
        generator: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        xstar: PathBuf,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 1e-7)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Power-operator instance: m(n) = ⟨Tⁿx, x*⟩.
    Power {
        #[arg(long)]
        t: PathBuf,
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        xstar: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 1e-7)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Batch of random factorization-theorem instances from one seed.
    VerifySuite {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct Envelope<C: Serialize, R: Serialize> {
    tool_version: &'static str,
    config: C,
    report: R,
}

#[derive(Serialize)]
struct CertificateJson {
    value: f64,
    dual_lower: f64,
    gap: f64,
    residual: f64,
    #[serde(rename = "K")]
    k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    a1: Option<Vec<VectorJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a2: Option<Vec<VectorJson>>,
}

impl CertificateJson {
    fn new(cert: &Nu2Certificate, factorize: bool) -> Self {
        Self {
            value: cert.value,
            dual_lower: cert.dual_lower,
            gap: cert.value - cert.dual_lower,
            residual: cert.reconstruction_residual,
            k: cert.k,
            a1: factorize.then(|| cert.a1.iter().map(|v| VectorJson::from_vector(v)).collect()),
            a2: factorize.then(|| cert.a2.iter().map(|v| VectorJson::from_vector(v)).collect()),
        }
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(Failure::Invalid(msg)) => {
            eprintln!("invalid input: {msg}");
            EXIT_INVALID
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            EXIT_NUMERICAL
        }
    }
}

enum Failure {
    Invalid(String),
    Numerical(String),
}

impl From<nu2::json::JsonError> for Failure {
    fn from(e: nu2::json::JsonError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<SdpError> for Failure {
    fn from(e: SdpError) -> Self {
        match e {
            SdpError::InvalidEps(_) => Failure::Invalid(e.to_string()),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn emit<C: Serialize, R: Serialize>(out: &Option<PathBuf>, config: C, report: R) -> Result<(), Failure> {
    let envelope = Envelope { tool_version: env!("CARGO_PKG_VERSION"), config, report };
    let text = serde_json::to_string_pretty(&envelope).expect("report serialization");
    match out {
        Some(path) => std::fs::write(path, text.as_bytes())
            .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32, Failure> {
    match cmd {
        Command::Nu2 { input, eps, out, factorize } => {
            let matrix: MatrixJson = read_json(&input)?;
            let kernel = SchurKernel::new(matrix.to_matrix()?);
            let cert = nu2_norm(&kernel, eps)?;

            #[derive(Serialize)]
            struct Config {
                command: &'static str,
                input: String,
                eps: f64,
                factorize: bool,
            }
            emit(
                &out,
                Config {
                    command: "nu2",
                    input: input.display().to_string(),
                    eps,
                    factorize,
                },
                CertificateJson::new(&cert, factorize),
            )?;
            Ok(EXIT_PASS)
        }
        Command::Gamma { input, seed, n_terms, restarts, iters, out } => {
            let fam: FamilyJson = read_json(&input)?;
            let family = fam.to_family()?;
            let mut stream = GaussianStream::new(seed).substream_named("gamma", 0);
            let est = gamma_lower(&family, SearchParams { n_terms, restarts, iters }, &mut stream);

            #[derive(Serialize)]
            struct Config {
                command: &'static str,
                input: String,
                seed: u64,
                n_terms: usize,
                restarts: usize,
                iters: usize,
            }
            #[derive(Serialize)]
            struct Report {
                lower: f64,
                std_err: f64,
                #[serde(skip_serializing_if = "Option::is_none")]
                exact: Option<f64>,
                assignments: Vec<usize>,
            }
            emit(
                &out,
                Config {
                    command: "gamma",
                    input: input.display().to_string(),
                    seed,
                    n_terms,
                    restarts,
                    iters,
                },
                Report {
                    lower: est.lower,
                    std_err: est.std_err,
                    exact: est.exact,
                    assignments: est.witness.assignments,
                },
            )?;
            Ok(EXIT_PASS)
        }
        Command::Theta { a, b, x, xstar, gamma_a, gamma_b, eps, out } => {
            let fa: FamilyJson = read_json(&a)?;
            let fb: FamilyJson = read_json(&b)?;
            let xv: VectorJson = read_json(&x)?;
            let xs: VectorJson = read_json(&xstar)?;
            let report = verify_main(
                &fa.to_family()?,
                &fb.to_family()?,
                &xv.to_vector()?,
                &xs.to_vector()?,
                gamma_a,
                gamma_b,
                eps,
            )?;

            #[derive(Serialize)]
            struct Config {
                command: &'static str,
                a: String,
                b: String,
                x: String,
                xstar: String,
                gamma_a: f64,
                gamma_b: f64,
                eps: f64,
            }
            #[derive(Serialize)]
            struct Report {
                nu2: f64,
                bound: f64,
                pass: bool,
                gap: f64,
            }
            let pass = report.pass;
            emit(
                &out,
                Config {
                    command: "theta",
                    a: a.display().to_string(),
                    b: b.display().to_string(),
                    x: x.display().to_string(),
                    xstar: xstar.display().to_string(),
                    gamma_a,
                    gamma_b,
                    eps,
                },
                Report {
                    nu2: report.nu2,
                    bound: report.bound,
                    pass,
                    gap: report.bound - report.nu2,
                },
            )?;
            Ok(if pass { EXIT_PASS } else { EXIT_VIOLATED })
        }
        Command::Group { group, f, eps, out } => {
            let gj: GroupJson = read_json(&group)?;
            let g = make_group(&gj.to_spec()?).map_err(|e| Failure::Invalid(e.to_string()))?;
            let fj: CoeffsJson = read_json(&f)?;
            let values = fj.to_vector()?;
            if values.len() != g.order {
                return Err(Failure::Invalid(format!(
                    "function has {} values for a group of order {}",
                    values.len(),
                    g.order
                )));
            }
            let func = GroupFunction { values };
            let qn = q_norm(&g, &func);
            let cert = fourier_cb_norm(&g, &func, eps)?;

            #[derive(Serialize)]
            struct Config {
                command: &'static str,
                group: String,
                f: String,
                eps: f64,
            }
            #[derive(Serialize)]
            struct Report {
                order: usize,
                q_norm: f64,
                cb_multiplier_norm: CertificateJson,
            }
            emit(
                &out,
                Config {
                    command: "group",
                    group: group.display().to_string(),
                    f: f.display().to_string(),
                    eps,
                },
                Report { order: g.order, q_norm: qn, cb_multiplier_norm: CertificateJson::new(&cert, false) },
            )?;
            Ok(EXIT_PASS)
        }
        Command::Hankel { input, n, eps, out } => {
            let cj: CoeffsJson = read_json(&input)?;
            let seq = HankelSequence::new(cj.to_vector()?, n)
                .map_err(|e| Failure::Invalid(e.to_string()))?;
            let cert = ms1_lower(&seq, eps)?;

            #[derive(Serialize)]
            struct Config {
                command: &'static str,
                input: String,
                n: usize,
                eps: f64,
            }
            emit(
                &out,
                Config { command: "hankel", input: input.display().to_string(), n, eps },
                CertificateJson::new(&cert, false),
            )?;
            Ok(EXIT_PASS)
        }
        Command::Semigroup { generator, delta, n, x, xstar, gamma, eps, out } => {
            let gj: MatrixJson = read_json(&generator)?;
            let gen = gj.to_matrix()?;
            if !gen.is_square() {
                return Err(Failure::Invalid("generator must be square".into()));
            }
            if delta <= 0.0 || n == 0 {
                return Err(Failure::Invalid("need delta > 0 and N ≥ 1".into()));
            }
            let sg = SemigroupSample::new(gen, delta, n)
                .map_err(|e| Failure::Numerical(e.to_string()))?;
            let xv: VectorJson = read_json(&x)?;
            let xs: VectorJson = read_json(&xstar)?;
            let report = verify_semigroup(&sg, &xv.to_vector()?, &xs.to_vector()?, gamma, eps)?;

            #[derive(Serialize)]
            struct Config {
                command: &'static str,
                generator: String,
                delta: f64,
                #[serde(rename = "N")]
                n: usize,
                x: String,
                xstar: String,
                gamma: f64,
                eps: f64,
            }
            #[derive(Serialize)]
            struct Report {
                nu2: f64,
                bound: f64,
                pass: bool,
            }
            let pass = report.pass;
            emit(
                &out,
                Config {
                    command: "semigroup",
                    generator: generator.display().to_string(),
                    delta,
                    n,
                    x: x.display().to_string(),
                    xstar: xstar.display().to_string(),
                    gamma,
                    eps,
                },
                Report { nu2: report.value, bound: report.bound, pass },
            )?;
            Ok(if pass { EXIT_PASS } else { EXIT_VIOLATED })
        }
        Command::Power { t, x, xstar, n, gamma, eps, out } => {
            let tj: MatrixJson = read_json(&t)?;
            let tm = tj.to_matrix()?;
            if !tm.is_square() {
                return Err(Failure::Invalid("operator must be square".into()));
            }
            if n == 0 {
                return Err(Failure::Invalid("need N ≥ 1".into()));
            }
            let xv: VectorJson = read_json(&x)?;
            let xs: VectorJson = read_json(&xstar)?;
            let report = verify_power(&tm, &xv.to_vector()?, &xs.to_vector()?, n, gamma, eps)?;

            #[derive(Serialize)]
            struct Config {
                command: &'static str,
                t: String,
                x: String,
                xstar: String,
                #[serde(rename = "N")]
                n: usize,
                gamma: f64,
                eps: f64,
            }
            #[derive(Serialize)]
            struct Report {
                nu2: f64,
                bound: f64,
                pass: bool,
            }
            let pass = report.pass;
            emit(
                &out,
                Config {
                    command: "power",
                    t: t.display().to_string(),
                    x: x.display().to_string(),
                    xstar: xstar.display().to_string(),
                    n,
                    gamma,
                    eps,
                },
                Report { nu2: report.value, bound: report.bound, pass },
            )?;
            Ok(if pass { EXIT_PASS } else { EXIT_VIOLATED })
        }
        Command::VerifySuite { config, seed, out } => run_suite(config, seed, out),
    }
}

#[derive(Debug, Clone, serde::Deserialize, Serialize)]
struct SuiteConfig {
    trials: usize,
    dim: usize,
    truncation: usize,
    eps: f64,
    #[serde(default = "default_radius")]
    contraction_radius: f64,
}

fn default_radius() -> f64 {
    0.95
}

/// Random Hilbert-space instances of the factorization theorem: contraction
/// orbits with exact γ = sup_n ‖Tⁿ‖.
fn run_suite(config: PathBuf, seed: u64, out: Option<PathBuf>) -> Result<i32, Failure> {
    let cfg: SuiteConfig = read_json(&config)?;
    if cfg.trials == 0 || cfg.dim == 0 || cfg.truncation == 0 {
        return Err(Failure::Invalid("trials, dim and truncation must be ≥ 1".into()));
    }
    if !(cfg.eps > 0.0) || cfg.contraction_radius <= 0.0 || cfg.contraction_radius > 1.0 {
        return Err(Failure::Invalid("need eps > 0 and contraction_radius in (0,1]".into()));
    }

    #[derive(Serialize)]
    struct Instance {
        index: usize,
        nu2: f64,
        bound: f64,
        pass: bool,
    }
    #[derive(Serialize)]
    struct Report {
        seed: u64,
        trials: usize,
        passed: usize,
        all_pass: bool,
        instances: Vec<Instance>,
    }

    let root = GaussianStream::new(seed);
    let mut instances = Vec::with_capacity(cfg.trials);
    let mut all_pass = true;
    for index in 0..cfg.trials {
        let mut stream = root.substream_named("verify-suite", index as u64);
        let raw = ComplexMatrix::from_fn(cfg.dim, cfg.dim, |_, _| stream.next_complex());
        let t = raw.scale(Complex64::new(
            cfg.contraction_radius / spectral_norm(&raw).max(1e-12),
            0.0,
        ));
        let family = nu2::factor::orbit_family(&t, cfg.truncation);
        let gamma = family.ops.iter().map(spectral_norm).fold(0.0, f64::max);
        let x = stream.draw(cfg.dim);
        let xstar = stream.draw(cfg.dim);
        let report = verify_main(&family, &family, &x, &xstar, gamma, gamma, cfg.eps)?;
        all_pass &= report.pass;
        instances.push(Instance { index, nu2: report.nu2, bound: report.bound, pass: report.pass });
    }

    #[derive(Serialize)]
    struct Config2 {
        command: &'static str,
        config: String,
        seed: u64,
        resolved: SuiteConfig,
    }
    let passed = instances.iter().filter(|i| i.pass).count();
    emit(
        &out,
        Config2 { command: "verify-suite", config: config.display().to_string(), seed, resolved: cfg.clone() },
        Report { seed, trials: cfg.trials, passed, all_pass, instances },
    )?;
    Ok(if all_pass { EXIT_PASS } else { EXIT_VIOLATED })
}
