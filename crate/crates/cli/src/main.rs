//! rrange: restricted numerical ranges and their quantum-information
//! applications from the command line.
//!
//! Exit codes: 0 ok; 2 parse error; 3 dimension mismatch; 4 guard violation;
//! 5 no certificate where one was required.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use restricted_range::apps;
use restricted_range::channel::{choi, ChoiMatrix, QuantumChannel};
use restricted_range::eig::eigh;
use restricted_range::io::{
    planar_to_csv, planar_to_json, KRangeJson, KrausJson, MatrixJson, PnrJson, ProductStateJson,
    VerdictJson,
};
use restricted_range::matrix::{ComplexMatrix, DensityMatrix, HermitianMatrix};
use restricted_range::range::{minkowski_power, numerical_range, PlanarSet};
use restricted_range::seesaw::{
    k_entangled_range, pnr_cloud, pnr_hermitian, separable_range, SeesawConfig,
};
use restricted_range::{families, RangeError, TensorSpace, Tolerances};

#[derive(Parser)]
#[command(name = "rrange", version, about = "Restricted numerical range toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Output format for set-valued results.
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    /// RNG seed; default runs are reproducible.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Angular resolution for boundary sampling.
    #[arg(long, default_value_t = 720)]
    resolution: usize,
    /// Haar restarts per optimizer edge.
    #[arg(long, default_value_t = 50)]
    restarts: usize,
}

#[derive(Args, Clone)]
struct MatrixInput {
    /// Matrix JSON file {"order", "re", "im", "dims"?}.
    #[arg(long, conflicts_with = "family")]
    input: Option<PathBuf>,
    /// Analytic family name: xts, yts, dfam, ud, vfam, u1qubit, rho-alpha.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    alpha1: Option<f64>,
    #[arg(long)]
    alpha2: Option<f64>,
    #[arg(long)]
    alpha3: Option<f64>,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    psi: Option<f64>,
    #[arg(long)]
    x1: Option<f64>,
    #[arg(long)]
    x2: Option<f64>,
    #[arg(long)]
    x3: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Numerical range boundary of a matrix or family member.
    Range {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        matrix: MatrixInput,
    },
    /// Product numerical range: interval with witnesses for Hermitian input,
    /// sampled cloud otherwise.
    Pnr {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        matrix: MatrixInput,
        /// Haar product samples for the non-Hermitian cloud.
        #[arg(long, default_value_t = 20000)]
        samples: usize,
    },
    /// Separable numerical range (convex hull of the product cloud).
    SepRange {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        matrix: MatrixInput,
        #[arg(long, default_value_t = 20000)]
        samples: usize,
    },
    /// Numerical range restricted to k-entangled states.
    KRange {
        #[command(flatten)]
        common: CommonOpts,
        #[command(flatten)]
        matrix: MatrixInput,
        #[arg(long)]
        k: usize,
    },
    /// n-fold Minkowski power of the numerical range of diag(1, e^{i phi}).
    MinkowskiPower {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        phi: f64,
        #[arg(long)]
        n: usize,
    },
    /// Hilbert-Schmidt ensemble of two-qubit states: eigenvalue and
    /// product-edge histograms with the analytic smallest-eigenvalue density.
    HsEnsemble {
        #[command(flatten)]
        common: CommonOpts,
        /// Number of sampled density matrices.
        #[arg(long, default_value_t = 100000)]
        n: usize,
        #[arg(long, default_value_t = 64)]
        bins: usize,
        /// Haar restarts per edge (the deterministic start menu is always on).
        #[arg(long, default_value_t = 4)]
        edge_restarts: usize,
    },
    /// Local distinguishability of two gates, or of the diagonal family
    /// V(phi, psi); emits the discrimination vector when one exists.
    Discriminate {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, requires = "psi")]
        phi: Option<f64>,
        #[arg(long, requires = "phi")]
        psi: Option<f64>,
        #[arg(long, requires = "u2", conflicts_with = "phi")]
        u1: Option<PathBuf>,
        #[arg(long, requires = "u1", conflicts_with = "psi")]
        u2: Option<PathBuf>,
    },
    /// Minimum output entropy of a qubit channel (bits).
    Moe {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, conflicts_with_all = ["choi", "wh"])]
        kraus: Option<PathBuf>,
        #[arg(long, conflicts_with = "wh")]
        choi: Option<PathBuf>,
        /// Werner-Holevo channel parameter in [-1, 1/3].
        #[arg(long)]
        wh: Option<f64>,
    },
    /// k-positivity verdict for a map given by its Choi matrix or Kraus list.
    Positivity {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long, conflicts_with = "kraus")]
        choi: Option<PathBuf>,
        #[arg(long)]
        kraus: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// n-copy distillability probe for a bipartite density matrix.
    Distill {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        rho: PathBuf,
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Upper bound on local fidelity against a diagonal state (LP).
    FidelityLp {
        #[command(flatten)]
        common: CommonOpts,
        /// JSON file with {"p": [[...]], "lambda": [...]}.
        #[arg(long)]
        p: PathBuf,
    },
    /// Choi matrix of a channel given as a Kraus list.
    Choi {
        #[command(flatten)]
        common: CommonOpts,
        #[arg(long)]
        kraus: PathBuf,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("RR_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                RangeError::Parse(_) => 2u8,
                RangeError::DimensionMismatch(_)
                | RangeError::NotHermitian { .. }
                | RangeError::NotUnitary { .. }
                | RangeError::InvalidState(_) => 3,
                RangeError::GuardExceeded(_) | RangeError::InvalidParameter(_) => 4,
                RangeError::NotDistinguishable => 5,
                RangeError::BracketFailed(_) | RangeError::SolverFailure(_) => 1,
            })
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, RangeError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| RangeError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| RangeError::Parse(format!("{}: {e}", path.display())))
}

fn write_output(common: &CommonOpts, text: &str) -> Result<(), RangeError> {
    match &common.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| RangeError::Parse(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.write_all(b"\n"))
                .map_err(|e| RangeError::Parse(format!("stdout: {e}")))
        }
    }
}

fn emit_set(common: &CommonOpts, set: &PlanarSet) -> Result<(), RangeError> {
    let text = match common.format {
        OutputFormat::Csv => planar_to_csv(set),
        OutputFormat::Json => serde_json::to_string_pretty(&planar_to_json(set))
            .map_err(|e| RangeError::Parse(e.to_string()))?,
    };
    write_output(common, text.trim_end())
}

fn emit_json<T: serde::Serialize>(common: &CommonOpts, value: &T) -> Result<(), RangeError> {
    let text =
        serde_json::to_string_pretty(value).map_err(|e| RangeError::Parse(e.to_string()))?;
    write_output(common, &text)
}

fn require(name: &str, v: Option<f64>) -> Result<f64, RangeError> {
    v.ok_or_else(|| RangeError::InvalidParameter(format!("missing family parameter --{name}")))
}

fn load_matrix(m: &MatrixInput) -> Result<ComplexMatrix, RangeError> {
    if let Some(path) = &m.input {
        let json: MatrixJson = read_json(path)?;
        return json.into_matrix();
    }
    let family = m
        .family
        .as_deref()
        .ok_or_else(|| RangeError::InvalidParameter("need --input or --family".into()))?;
    match family {
        "xts" => Ok(families::x_ts(require("t", m.t)?, require("s", m.s)?)?.into_matrix()),
        "yts" => Ok(families::y_ts(
            require("a", m.a)?,
            require("b", m.b)?,
            require("c", m.c)?,
            require("d", m.d)?,
            require("t", m.t)?,
            require("s", m.s)?,
        )?
        .into_matrix()),
        "dfam" => {
            let a = Complex64::new(require("a", m.a)?, 0.0);
            let b = Complex64::new(require("b", m.b)?, 0.0);
            Ok(families::d_family(a, b, require("x", m.x)?).into_matrix())
        }
        "ud" => families::canonical_ud([
            require("alpha1", m.alpha1)?,
            m.alpha2.unwrap_or(0.0),
            m.alpha3.unwrap_or(0.0),
        ]),
        "vfam" => families::v_family(require("phi", m.phi)?, require("psi", m.psi)?),
        "u1qubit" => Ok(families::u_phase(require("phi", m.phi)?)),
        "rho-alpha" => Ok(families::rho_alpha(
            require("alpha1", m.alpha1)?,
            [
                require("x1", m.x1)?,
                require("x2", m.x2)?,
                require("x3", m.x3)?,
            ],
        )?
        .matrix()
        .clone()),
        other => Err(RangeError::InvalidParameter(format!(
            "unknown family '{other}'"
        ))),
    }
}

fn as_hermitian(m: &ComplexMatrix) -> Option<HermitianMatrix> {
    if m.hermiticity_deviation() <= Tolerances::DEFAULT.hermiticity {
        HermitianMatrix::new(m.clone()).ok()
    } else {
        None
    }
}

fn cfg_from(common: &CommonOpts) -> SeesawConfig {
    SeesawConfig {
        restarts: common.restarts.max(1),
        seed: common.seed,
        ..SeesawConfig::default()
    }
}

fn run(cli: Cli) -> Result<ExitCode, RangeError> {
    match cli.command {
        Command::Range { common, matrix } => {
            let m = load_matrix(&matrix)?;
            let set = numerical_range(&m, common.resolution)?;
            emit_set(&common, &set)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Pnr {
            common,
            matrix,
            samples,
        } => {
            let m = load_matrix(&matrix)?;
            let cfg = cfg_from(&common);
            match as_hermitian(&m) {
                Some(h) => {
                    let pnr = pnr_hermitian(&h, &cfg)?;
                    emit_json(&common, &PnrJson::from_result(&pnr))?;
                }
                None => {
                    let set = pnr_cloud(&m, samples, common.resolution, &cfg)?;
                    emit_set(&common, &set)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::SepRange {
            common,
            matrix,
            samples,
        } => {
            let m = load_matrix(&matrix)?;
            let cfg = cfg_from(&common);
            let set = separable_range(&m, samples, common.resolution, &cfg)?;
            emit_set(&common, &set)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::KRange { common, matrix, k } => {
            let m = load_matrix(&matrix)?;
            let h = as_hermitian(&m).ok_or(RangeError::NotHermitian {
                deviation: m.hermiticity_deviation(),
                tolerance: Tolerances::DEFAULT.hermiticity,
            })?;
            let cfg = cfg_from(&common);
            let kr = k_entangled_range(&h, k, &cfg)?;
            emit_json(&common, &KRangeJson::from_result(&kr))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::MinkowskiPower { common, phi, n } => {
            if n == 0 {
                return Err(RangeError::InvalidParameter("n must be at least 1".into()));
            }
            let u = families::u_phase(phi);
            let base = numerical_range(&u, common.resolution)?;
            let set = minkowski_power(&base, n);
            emit_set(&common, &set)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::HsEnsemble {
            common,
            n,
            bins,
            edge_restarts,
        } => {
            run_hs_ensemble(&common, n, bins, edge_restarts)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Discriminate {
            common,
            phi,
            psi,
            u1,
            u2,
        } => run_discriminate(&common, phi, psi, u1, u2),
        Command::Moe {
            common,
            kraus,
            choi: choi_path,
            wh,
        } => {
            let ch = load_channel(kraus.as_ref(), choi_path.as_ref(), wh)?;
            let cfg = cfg_from(&common);
            let moe = apps::moe_qubit(&ch, &cfg)?;
            let d = choi(&ch)?;
            let pnr = pnr_hermitian(&d.unnormalized(), &cfg)?;
            emit_json(
                &common,
                &serde_json::json!({
                    "moe_bits": moe,
                    "lambda_min_product": pnr.lo,
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Positivity {
            common,
            choi: choi_path,
            kraus,
            k,
        } => {
            let d = match (choi_path, kraus) {
                (Some(path), _) => {
                    let json: MatrixJson = read_json(&path)?;
                    let m = json.into_matrix()?;
                    let space = m.space().cloned().ok_or_else(|| {
                        RangeError::DimensionMismatch(
                            "Choi matrix JSON needs dims [out, in]".into(),
                        )
                    })?;
                    if !space.is_bipartite() {
                        return Err(RangeError::DimensionMismatch(
                            "Choi matrix needs a bipartite dims field".into(),
                        ));
                    }
                    let h = HermitianMatrix::new(m)?;
                    ChoiMatrix::new(h, space.dims()[0], space.dims()[1])?
                }
                (None, Some(path)) => {
                    let json: KrausJson = read_json(&path)?;
                    let ch = channel_from_json(json)?;
                    choi(&ch)?
                }
                (None, None) => {
                    return Err(RangeError::InvalidParameter(
                        "need --choi or --kraus".into(),
                    ))
                }
            };
            let cfg = cfg_from(&common);
            let verdict = apps::is_k_positive(&d, k, &cfg)?;
            emit_json(&common, &VerdictJson::from_verdict(&verdict))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Distill { common, rho, n } => {
            let json: MatrixJson = read_json(&rho)?;
            let m = json.into_matrix()?;
            if m.space().map_or(true, |s| !s.is_bipartite()) {
                return Err(RangeError::DimensionMismatch(
                    "density matrix JSON needs bipartite dims".into(),
                ));
            }
            let h = HermitianMatrix::new(m)?;
            let rho = DensityMatrix::new(h)?;
            let cfg = cfg_from(&common);
            let verdict = apps::n_copy_distillable_probe(&rho, n, &cfg)?;
            emit_json(&common, &VerdictJson::from_verdict(&verdict))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::FidelityLp { common, p } => {
            #[derive(serde::Deserialize)]
            struct FidelityInput {
                p: Vec<Vec<f64>>,
                lambda: Vec<f64>,
            }
            let input: FidelityInput = read_json(&p)?;
            let bound = apps::diagonal_fidelity_lp(&input.p, &input.lambda)?;
            emit_json(&common, &serde_json::json!({ "bound": bound }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Choi { common, kraus } => {
            let json: KrausJson = read_json(&kraus)?;
            let ch = channel_from_json(json)?;
            let d = choi(&ch)?;
            emit_json(&common, &MatrixJson::from_matrix(d.matrix().matrix()))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn channel_from_json(json: KrausJson) -> Result<QuantumChannel, RangeError> {
    let kraus: Result<Vec<ComplexMatrix>, RangeError> =
        json.kraus.into_iter().map(|m| m.into_matrix()).collect();
    QuantumChannel::new(kraus?)
}

fn load_channel(
    kraus: Option<&PathBuf>,
    choi_path: Option<&PathBuf>,
    wh: Option<f64>,
) -> Result<QuantumChannel, RangeError> {
    match (kraus, choi_path, wh) {
        (Some(path), _, _) => channel_from_json(read_json(path)?),
        (None, Some(path), _) => {
            let json: MatrixJson = read_json(path)?;
            let m = json.into_matrix()?;
            let space = m.space().cloned().ok_or_else(|| {
                RangeError::DimensionMismatch("Choi matrix JSON needs dims [out, in]".into())
            })?;
            let h = HermitianMatrix::new(m)?;
            let d = ChoiMatrix::new(h, space.dims()[0], space.dims()[1])?;
            QuantumChannel::from_choi(&d)
        }
        (None, None, Some(p)) => QuantumChannel::werner_holevo(p),
        (None, None, None) => Err(RangeError::InvalidParameter(
            "need --kraus, --choi or --wh".into(),
        )),
    }
}

fn run_discriminate(
    common: &CommonOpts,
    phi: Option<f64>,
    psi: Option<f64>,
    u1: Option<PathBuf>,
    u2: Option<PathBuf>,
) -> Result<ExitCode, RangeError> {
    match (phi, psi, u1, u2) {
        (Some(phi), Some(psi), None, None) => {
            if !apps::v_is_distinguishable(phi, psi) {
                let payload = serde_json::json!({
                    "status": "not-distinguishable",
                    "phi": phi,
                    "psi": psi,
                });
                emit_json(common, &payload)?;
                return Ok(ExitCode::from(5));
            }
            let state = apps::discrimination_vector(phi, psi)?;
            let v = families::v_family(phi, psi)?;
            let residual = v.expectation(state.flatten().amplitudes()).norm();
            let payload = serde_json::json!({
                "status": "distinguishable",
                "phi": phi,
                "psi": psi,
                "residual": residual,
                "vector": ProductStateJson::from_state(&state),
            });
            emit_json(common, &payload)?;
            Ok(ExitCode::SUCCESS)
        }
        (None, None, Some(p1), Some(p2)) => {
            let m1: MatrixJson = read_json(&p1)?;
            let m2: MatrixJson = read_json(&p2)?;
            let mut u1 = m1.into_matrix()?;
            let u2m = m2.into_matrix()?;
            if u1.space().is_none() {
                if let Some(sp) = u2m.space() {
                    u1 = u1.with_space(sp.clone())?;
                }
            }
            let cfg = cfg_from(common);
            let verdict = apps::locally_distinguishable(&u1, &u2m, &cfg)?;
            emit_json(common, &VerdictJson::from_verdict(&verdict))?;
            if verdict.is_violated() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(5))
            }
        }
        _ => Err(RangeError::InvalidParameter(
            "need either --phi/--psi or --u1/--u2".into(),
        )),
    }
}

fn run_hs_ensemble(
    common: &CommonOpts,
    samples: usize,
    bins: usize,
    edge_restarts: usize,
) -> Result<(), RangeError> {
    use rayon::prelude::*;
    if samples == 0 || bins == 0 {
        return Err(RangeError::InvalidParameter(
            "samples and bins must be positive".into(),
        ));
    }
    let sp = TensorSpace::bipartite(2, 2);
    let cfg = SeesawConfig {
        restarts: edge_restarts.max(1),
        seed: common.seed,
        ..SeesawConfig::default()
    };
    let results: Vec<([f64; 4], f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = restricted_range::random::substream(common.seed, 90_000_000 + i as u64);
            let rho = restricted_range::random::hs_density(4, &mut rng);
            let h = rho
                .hermitian()
                .clone()
                .with_space(sp.clone())
                .expect("4 = 2*2");
            let eig = eigh(&h);
            let pnr = pnr_hermitian(&h, &cfg).expect("bracketed edges");
            (
                [eig.values[0], eig.values[1], eig.values[2], eig.values[3]],
                pnr.lo,
                pnr.hi,
            )
        })
        .collect();

    // histogram over [0, 1]
    let bin_of = |v: f64| -> usize {
        let b = (v.clamp(0.0, 1.0) * bins as f64) as usize;
        b.min(bins - 1)
    };
    let mut counts = vec![[0u64; 6]; bins];
    let mut mean_l1 = 0.0;
    let mut interlacing_violations = 0usize;
    for (l, lo, hi) in &results {
        for (k, v) in l.iter().enumerate() {
            counts[bin_of(*v)][k] += 1;
        }
        counts[bin_of(*lo)][4] += 1;
        counts[bin_of(*hi)][5] += 1;
        mean_l1 += l[0];
        let slack = Tolerances::DEFAULT.interlacing_slack;
        if *lo < l[0] - slack || *lo > l[1] + slack || *hi < l[2] - slack || *hi > l[3] + slack {
            interlacing_violations += 1;
        }
    }
    mean_l1 /= samples as f64;

    // sup-norm distance of the empirical lambda_1 distribution to 1-(1-4x)^15
    let mut l1: Vec<f64> = results.iter().map(|(l, _, _)| l[0]).collect();
    l1.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut ks: f64 = 0.0;
    for (i, v) in l1.iter().enumerate() {
        let f = 1.0 - (1.0 - 4.0 * v.clamp(0.0, 0.25)).powi(15);
        let lo_emp = i as f64 / samples as f64;
        let hi_emp = (i + 1) as f64 / samples as f64;
        ks = ks.max((f - lo_emp).abs()).max((f - hi_emp).abs());
    }

    let mut csv = String::from(
        "bin_lo,bin_hi,count_lambda1,count_lambda2,count_lambda3,count_lambda4,count_pnr_lo,count_pnr_hi,p_lambda1_analytic\n",
    );
    for (b, row) in counts.iter().enumerate() {
        let lo = b as f64 / bins as f64;
        let hi = (b + 1) as f64 / bins as f64;
        let mid = 0.5 * (lo + hi);
        let p1 = if mid <= 0.25 {
            60.0 * (1.0 - 4.0 * mid).powi(14)
        } else {
            0.0
        };
        csv.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            restricted_range::io::fmt_f64(lo),
            restricted_range::io::fmt_f64(hi),
            row[0],
            row[1],
            row[2],
            row[3],
            row[4],
            row[5],
            restricted_range::io::fmt_f64(p1)
        ));
    }
    match &common.output {
        Some(path) => std::fs::write(path, &csv)
            .map_err(|e| RangeError::Parse(format!("{}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    let summary = serde_json::json!({
        "samples": samples,
        "mean_lambda1": mean_l1,
        "ks_distance_lambda1": ks,
        "interlacing_violations": interlacing_violations,
    });
    println!("{}", serde_json::to_string(&summary).unwrap());
    Ok(())
}
