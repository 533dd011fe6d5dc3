//! `ncdist`: nonclassicality measures for Gaussian states from the command
//! line.
//!
//! Subcommands: `classify`, `measure`, `sweep`, `optimize`,
//! `oracle-compare`. Data goes to stdout (or `--out`), diagnostics to
//! stderr. Exit codes: 0 success, 1 tolerance failure or numerical error,
//! 2 malformed input or usage, 3 invalid state, 4 Fock truncation too
//! small.

mod fmt;
mod grid;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use ncdist_core::error::Error as CoreError;
use ncdist_core::io::{parse_state_json, ParsedState};
use ncdist_core::measures::{self, BoundKind};
use ncdist_core::states::{classify, cov_to_params, CorrelationMatrix, OneModeParams, StateClass};
use ncdist_core::{fock, noise, optimizer, sqrt_map, tol};

use fmt::{bool_str, sig12, sig12_json};

#[derive(Parser)]
#[command(name = "ncdist", version, about = "Nonclassicality measures for Gaussian quantum states")]
struct Cli {
    /// Optional JSON config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a state and print its symplectic spectrum.
    Classify {
        #[arg(long)]
        input: PathBuf,
        /// Predicate tolerance (default 1e-9).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Measure report: pairwise fidelity/overlap, or the single-state
    /// sup-based measures, with trace-distance bounds.
    Measure {
        #[arg(long)]
        input: PathBuf,
        /// Second state for pairwise measures.
        #[arg(long)]
        second: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Which::All)]
        which: Which,
    },
    /// Noise sweep over a (d, m, g) grid; CSV by default.
    Sweep {
        /// Grid as `d=start:end:count,m=start:end:count,g=start:end:count`
        /// (`g` accepts `inf` for the zero-noise row).
        #[arg(long)]
        grid: String,
        #[arg(long, value_enum)]
        format: Option<OutFormat>,
    },
    /// Numerical supremum of a measure over classical states.
    Optimize {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = OptMeasure::Fidelity)]
        measure: OptMeasure,
        /// Objective evaluation cap.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare closed forms against the Fock-basis oracle.
    OracleCompare {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        second: Option<PathBuf>,
        /// Fock truncation dimension.
        #[arg(long)]
        trunc: Option<usize>,
        /// Maximum allowed |analytic - oracle|.
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    All,
    Fidelity,
    Holevo,
    Chi,
    Phi,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OptMeasure {
    Fidelity,
    Overlap,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

/// File-level configuration; flags take precedence, defaults fill the rest.
#[derive(Debug, Default, Deserialize)]
struct FileConfig {
    #[serde(default)]
    tol: Option<f64>,
    #[serde(default)]
    trunc: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    budget: Option<usize>,
    #[serde(default)]
    format: Option<String>,
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match &e {
            CoreError::Malformed(_)
            | CoreError::InvalidParams(_)
            | CoreError::DimensionMismatch { .. }
            | CoreError::NotSquare { .. }
            | CoreError::OddDimension { .. }
            | CoreError::NotSymmetric { .. } => 2,
            CoreError::InvalidState { .. } | CoreError::NotPositiveDefinite => 3,
            CoreError::TruncationTooSmall { .. } => 4,
            _ => 1,
        };
        CliError::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("ncdist: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn debug_log(msg: &str) {
    if std::env::var("NCDIST_LOG").as_deref() == Ok("debug") {
        eprintln!("ncdist[debug]: {msg}");
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let file_cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::new(2, format!("config {}: {e}", path.display())))?;
            serde_json::from_str::<FileConfig>(&text)
                .map_err(|e| CliError::new(2, format!("config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    debug_log(&format!("config file values: {file_cfg:?}"));

    let (output, code) = match cli.command {
        Command::Classify { input, tol: tol_flag } => {
            let tol = tol_flag.or(file_cfg.tol).unwrap_or(tol::PREDICATE);
            cmd_classify(&input, tol)?
        }
        Command::Measure {
            input,
            second,
            which,
        } => cmd_measure(&input, second.as_deref(), which)?,
        Command::Sweep { grid, format } => {
            let format = format.unwrap_or(match file_cfg.format.as_deref() {
                Some("json") => OutFormat::Json,
                _ => OutFormat::Csv,
            });
            cmd_sweep(&grid, format)?
        }
        Command::Optimize {
            input,
            measure,
            budget,
            seed,
        } => {
            let budget = budget.or(file_cfg.budget).unwrap_or(4000);
            let seed = seed.or(file_cfg.seed).unwrap_or(0);
            cmd_optimize(&input, measure, budget, seed)?
        }
        Command::OracleCompare {
            input,
            second,
            trunc,
            tol: tol_flag,
        } => {
            let trunc = trunc.or(file_cfg.trunc).unwrap_or(80);
            let tol = tol_flag.or(file_cfg.tol).unwrap_or(1e-4);
            cmd_oracle_compare(&input, second.as_deref(), trunc, tol)?
        }
    };

    match &cli.out {
        Some(path) => std::fs::write(path, output.as_bytes())
            .map_err(|e| CliError::new(1, format!("writing {}: {e}", path.display())))?,
        None => print!("{output}"),
    }
    Ok(code)
}

fn read_state(path: &Path) -> Result<ParsedState, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(2, format!("{}: {e}", path.display())))?;
    Ok(parse_state_json(&text)?)
}

/// One-mode parameters from a parsed state (derived from the matrix when
/// needed).
fn one_mode_of(state: &ParsedState) -> Result<OneModeParams, CliError> {
    if let Some(p) = state.params {
        return Ok(p);
    }
    if state.cov.modes() != 1 {
        return Err(CliError::new(2, "a one-mode state is required here"));
    }
    Ok(cov_to_params(&state.cov)?)
}

fn cmd_classify(input: &Path, tol: f64) -> Result<(String, u8), CliError> {
    let state = read_state(input)?;
    let class = classify(&state.cov, tol);
    let spectrum = state.cov.symplectic_spectrum().unwrap_or_default();

    let mut out = String::new();
    out.push_str("{\"class\":\"");
    out.push_str(class.as_str());
    out.push_str("\",\"symplectic_spectrum\":[");
    out.push_str(
        &spectrum
            .iter()
            .map(|&d| sig12(d))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push(']');
    if class != StateClass::Invalid && state.cov.modes() == 1 {
        // a loose --tol can accept states the strict parameter recovery
        // rejects; the parameters are then simply omitted
        if let Ok(p) = cov_to_params(&state.cov) {
            out.push_str(&format!(
                ",\"d\":{},\"m\":{},\"theta\":{}",
                sig12(p.d()),
                sig12(p.m()),
                sig12(p.theta())
            ));
        }
    }
    out.push_str("}\n");
    let code = if class == StateClass::Invalid { 3 } else { 0 };
    Ok((out, code))
}

fn cmd_measure(input: &Path, second: Option<&Path>, which: Which) -> Result<(String, u8), CliError> {
    let first = read_state(input)?;
    let mut out = String::from("{");
    match second {
        Some(path) => {
            let second = read_state(path)?;
            let mut parts: Vec<String> = Vec::new();
            match which {
                Which::All => {
                    let r = measures::report_pair(&first.cov, &second.cov)?;
                    parts.push(format!("\"fidelity\":{}", sig12(r.fidelity.unwrap())));
                    parts.push(format!("\"holevo\":{}", sig12(r.holevo_overlap.unwrap())));
                    parts.push(bounds_entry("delta_bounds_fidelity", r.delta_bounds_fidelity));
                    parts.push(bounds_entry("delta_bounds_overlap", r.delta_bounds_overlap));
                }
                Which::Fidelity => {
                    let f = measures::fidelity(&first.cov, &second.cov)?;
                    parts.push(format!("\"fidelity\":{}", sig12(f)));
                    parts.push(bounds_entry(
                        "delta_bounds_fidelity",
                        measures::delta_bounds(f, BoundKind::Fidelity)?,
                    ));
                }
                Which::Holevo => {
                    let h = measures::holevo_overlap(&first.cov, &second.cov)?;
                    parts.push(format!("\"holevo\":{}", sig12(h)));
                    parts.push(bounds_entry(
                        "delta_bounds_overlap",
                        measures::delta_bounds(h, BoundKind::Overlap)?,
                    ));
                }
                Which::Chi | Which::Phi => {
                    return Err(CliError::new(
                        2,
                        "chi/phi are single-state measures; drop --second",
                    ));
                }
            }
            out.push_str(&parts.join(","));
        }
        None => {
            let p = one_mode_of(&first)?;
            let mut parts: Vec<String> = Vec::new();
            match which {
                Which::All => {
                    let r = measures::report_single(&p)?;
                    parts.push(format!("\"chi\":{}", sig12(r.chi.unwrap())));
                    parts.push(format!("\"phi\":{}", sig12(r.phi_measure.unwrap())));
                    parts.push(bounds_entry("delta_bounds_fidelity", r.delta_bounds_fidelity));
                    parts.push(bounds_entry("delta_bounds_overlap", r.delta_bounds_overlap));
                }
                Which::Chi => {
                    let chi = measures::chi_one_mode(&p);
                    parts.push(format!("\"chi\":{}", sig12(chi)));
                    parts.push(bounds_entry(
                        "delta_bounds_overlap",
                        measures::delta_bounds(chi, BoundKind::Overlap)?,
                    ));
                }
                Which::Phi => {
                    let phi = measures::phi_measure_one_mode(&p);
                    parts.push(format!("\"phi\":{}", sig12(phi)));
                    parts.push(bounds_entry(
                        "delta_bounds_fidelity",
                        measures::delta_bounds(phi, BoundKind::Fidelity)?,
                    ));
                }
                Which::Fidelity | Which::Holevo => {
                    return Err(CliError::new(
                        2,
                        "fidelity/holevo need two states; pass --second",
                    ));
                }
            }
            out.push_str(&parts.join(","));
        }
    }
    out.push_str("}\n");
    Ok((out, 0))
}

fn bounds_entry(key: &str, (lo, hi): (f64, f64)) -> String {
    format!("\"{key}\":[{},{}]", sig12(lo), sig12(hi))
}

fn cmd_sweep(grid: &str, format: OutFormat) -> Result<(String, u8), CliError> {
    let spec = grid::parse(grid).map_err(|e| CliError::new(2, e))?;
    let mut rows: Vec<[f64; 12]> = Vec::new();
    for &d in &spec.d {
        for &m in &spec.m {
            let before = OneModeParams::new(d, m, 0.0)?;
            let chi_before = measures::chi_one_mode(&before);
            let phi_before = measures::phi_measure_one_mode(&before);
            for &g in &spec.g {
                let after = noise::noise_one_mode(&before, g)?;
                let chi_after = measures::chi_one_mode(&after);
                let phi_after = measures::phi_measure_one_mode(&after);
                let classical_after = after.is_classical();
                let (lhs, rhs) = noise::chi_inequality_sides(&before, g)?;
                rows.push([
                    d,
                    m,
                    g,
                    after.d(),
                    after.m(),
                    if classical_after { 1.0 } else { 0.0 },
                    chi_before,
                    chi_after,
                    phi_before,
                    phi_after,
                    lhs,
                    rhs,
                ]);
            }
        }
    }

    const COLUMNS: [&str; 12] = [
        "d",
        "m",
        "g",
        "gamma_d",
        "gamma_m",
        "classical_after",
        "chi_before",
        "chi_after",
        "phi_before",
        "phi_after",
        "chi_ineq_lhs",
        "chi_ineq_rhs",
    ];

    let mut out = String::new();
    match format {
        OutFormat::Csv => {
            out.push_str(&COLUMNS.join(","));
            out.push('\n');
            for row in &rows {
                let mut cells: Vec<String> = Vec::with_capacity(12);
                for (i, &value) in row.iter().enumerate() {
                    if i == 5 {
                        cells.push(bool_str(value != 0.0).to_string());
                    } else {
                        cells.push(sig12(value));
                    }
                }
                out.push_str(&cells.join(","));
                out.push('\n');
            }
        }
        OutFormat::Json => {
            out.push('[');
            for (k, row) in rows.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push('{');
                let mut cells: Vec<String> = Vec::with_capacity(12);
                for (i, &value) in row.iter().enumerate() {
                    if i == 5 {
                        cells.push(format!("\"{}\":{}", COLUMNS[i], bool_str(value != 0.0)));
                    } else {
                        cells.push(format!("\"{}\":{}", COLUMNS[i], sig12_json(value)));
                    }
                }
                out.push_str(&cells.join(","));
                out.push('}');
            }
            out.push_str("]\n");
        }
    }
    Ok((out, 0))
}

fn cmd_optimize(
    input: &Path,
    measure: OptMeasure,
    budget: usize,
    seed: u64,
) -> Result<(String, u8), CliError> {
    let state = read_state(input)?;
    let p = one_mode_of(&state)?;
    let target: CorrelationMatrix = p.to_cov();
    let (name, sup, branch) = match measure {
        OptMeasure::Fidelity => (
            "fidelity",
            optimizer::sup_fidelity_classical(&target, budget, seed)?,
            measures::phi_measure_one_mode(&p),
        ),
        OptMeasure::Overlap => (
            "overlap",
            optimizer::sup_overlap_classical(&target, budget, seed)?,
            measures::chi_one_mode(&p),
        ),
    };
    let exceeds = sup.value > branch + 1e-9;
    let out = format!(
        "{{\"measure\":\"{name}\",\"value\":{},\"argmax\":{{\"d\":{},\"m\":{},\"theta\":{}}},\"iterations\":{},\"converged\":{},\"analytic_branch\":{},\"exceeds_branch\":{}}}\n",
        sig12(sup.value),
        sig12(sup.argmax.d()),
        sig12(sup.argmax.m()),
        sig12(sup.argmax.theta()),
        sup.iterations,
        bool_str(sup.converged),
        sig12(branch),
        bool_str(exceeds),
    );
    Ok((out, 0))
}

fn diff_entry(key: &str, analytic: f64, oracle: f64) -> (String, f64) {
    let diff = (analytic - oracle).abs();
    (
        format!(
            "\"{key}\":{{\"analytic\":{},\"oracle\":{},\"abs_diff\":{}}}",
            sig12(analytic),
            sig12(oracle),
            sig12(diff)
        ),
        diff,
    )
}

fn cmd_oracle_compare(
    input: &Path,
    second: Option<&Path>,
    trunc: usize,
    tol: f64,
) -> Result<(String, u8), CliError> {
    let first = one_mode_of(&read_state(input)?)?;
    let r1 = fock::build_one_mode(&first, trunc)?;
    let a1 = first.to_cov();

    let mut parts: Vec<String> = vec![format!("\"trunc\":{trunc},\"tolerance\":{}", sig12(tol))];
    let mut worst = 0.0_f64;

    match second {
        Some(path) => {
            let second = one_mode_of(&read_state(path)?)?;
            let r2 = fock::build_one_mode(&second, trunc)?;
            let a2 = second.to_cov();

            let (entry, diff) = diff_entry(
                "fidelity",
                measures::fidelity_one_mode(&a1, &a2)?,
                fock::oracle_fidelity(&r1, &r2)?,
            );
            parts.push(entry);
            worst = worst.max(diff);

            let (entry, diff) = diff_entry(
                "overlap",
                measures::holevo_overlap(&a1, &a2)?,
                fock::oracle_overlap(&r1, &r2)?,
            );
            parts.push(entry);
            worst = worst.max(diff);

            let (entry, diff) = diff_entry(
                "tr_sqrt_first",
                sqrt_map::det_phi(&a1)?.powf(0.25),
                fock::tr_sqrt(&r1),
            );
            parts.push(entry);
            worst = worst.max(diff);

            let (entry, diff) = diff_entry(
                "tr_sqrt_second",
                sqrt_map::det_phi(&a2)?.powf(0.25),
                fock::tr_sqrt(&r2),
            );
            parts.push(entry);
            worst = worst.max(diff);
        }
        None => {
            let (entry, diff) = diff_entry(
                "tr_sqrt",
                sqrt_map::det_phi(&a1)?.powf(0.25),
                fock::tr_sqrt(&r1),
            );
            parts.push(entry);
            worst = worst.max(diff);
        }
    }
    parts.push(format!("\"max_abs_diff\":{}", sig12(worst)));
    let out = format!("{{{}}}\n", parts.join(","));
    Ok((out, if worst > tol { 1 } else { 0 }))
}
