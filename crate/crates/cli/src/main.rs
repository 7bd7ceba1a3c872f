//! Command line front end.
//!
//! Subcommands: `visibility` (contrast curve over the configured time grid),
//! `intensity` (screen intensity over the grid at the configured fringe
//! phase), `fringe` (intensity over one fringe period at a fixed time),
//! `revivals` (collapse floor, revival times, period), and `oracle-check`
//! (cross-validation of the weighted series against the state-vector
//! route).
//!
//! Exit codes: 0 success; 2 configuration or scenario errors; 3 truncation
//! cap or state-grid overflow; 4 symmetry violations; 5 route disagreement;
//! 1 file I/O failures. All numeric output uses the shortest decimal that
//! round-trips the underlying f64, and repeated runs produce byte-identical
//! files regardless of thread count.

mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fdint::series::intensity_from_sum;
use fdint::{
    detect_revivals, fringe_scan, visibility, visibility_allow_asymmetric, CoherentScenario,
    DiagonalHamiltonian, Error, FockState2, TruncationPolicy,
};

use config::ScenarioConfig;

/// Largest accepted split between the two evaluation routes.
const AGREEMENT_TOLERANCE: f64 = 1e-8;

#[derive(Parser)]
#[command(name = "fdint", version, about = "Interference scans for deformed two-mode fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Contrast curve V(t) over the configured time grid
    Visibility {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override the configured truncation epsilon
        #[arg(long)]
        epsilon: Option<f64>,
        /// Evaluate an asymmetric profile anyway; the contrast is complex
        #[arg(long)]
        allow_asymmetric: bool,
    },
    /// Screen intensity I(t) at the configured fringe phase
    Intensity {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Intensity over one fringe period at a fixed time
    Fringe {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Evaluation time
        #[arg(long, default_value_t = 0.0)]
        t: f64,
        /// Fringe-phase samples per period
        #[arg(long, default_value_t = 4096)]
        points: usize,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Collapse floor, revival times, and estimated period
    Revivals {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Contrast level above which a local maximum counts as a revival
        #[arg(long, default_value_t = fdint::analysis::REVIVAL_THRESHOLD)]
        threshold: f64,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Cross-validate the series route against the state-vector route
    OracleCheck {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Corrupt the series-route Hamiltonian with a mode-asymmetric
        /// diagonal shift; the check must then fail with exit code 5
        #[arg(long, hide = true)]
        inject_phase_fault: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn io(context: &Path, e: std::io::Error) -> Self {
        Self { code: 1, message: format!("{}: {e}", context.display()) }
    }

    fn engine(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } | Error::TailTooLarge { .. } => 3,
            Error::NotSymmetric => 4,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

struct Prepared {
    h: DiagonalHamiltonian,
    scenario: CoherentScenario,
    policy: TruncationPolicy,
    order: usize,
}

/// Shared front half of every subcommand: parse, choose the truncation
/// order, validate the profile far enough for both the series lattice and
/// any state grid of `min_n_max`, and assemble the scenario.
fn prepare(cfg: &ScenarioConfig, epsilon: Option<f64>, min_n_max: usize) -> Result<Prepared, Failure> {
    let spec = cfg.spec().map_err(Failure::config)?;
    let times = cfg.times().map_err(Failure::config)?;
    let policy = cfg.policy(epsilon);
    let order = fdint::truncation_order(cfg.scenario.alpha_sq, &policy).map_err(Failure::engine)?;
    let n_max = (order + 1).max(min_n_max);
    let deformation = spec.validated(n_max).map_err(Failure::engine)?;
    let h = DiagonalHamiltonian::for_deformation(deformation);
    let scenario = cfg.coherent(times);
    scenario.validate().map_err(Failure::engine)?;
    Ok(Prepared { h, scenario, policy, order })
}

fn load(path: &Path) -> Result<ScenarioConfig, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    ScenarioConfig::parse(&text, path).map_err(Failure::config)
}

fn create_out(path: &Path) -> Result<std::io::BufWriter<std::fs::File>, Failure> {
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| Failure::io(path, e))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Visibility { config, out, epsilon, allow_asymmetric } => {
            let cfg = load(&config)?;
            let p = prepare(&cfg, epsilon, 0)?;
            let curve = if allow_asymmetric {
                visibility_allow_asymmetric(&p.h, &p.scenario, &p.policy)
            } else {
                visibility(&p.h, &p.scenario, &p.policy)
            }
            .map_err(Failure::engine)?;
            let mut w = create_out(&out)?;
            let write = |w: &mut dyn Write| -> std::io::Result<()> {
                writeln!(w, "t,v_re,v_im,v_abs,v_arg,trunc_bound")?;
                for pt in &curve.points {
                    writeln!(
                        w,
                        "{},{},{},{},{},{}",
                        pt.t, pt.v.re, pt.v.im, pt.v_abs, pt.v_arg, pt.truncation_bound
                    )?;
                }
                w.flush()
            };
            write(&mut w).map_err(|e| Failure::io(&out, e))?;
            if !curve.symmetric_regime {
                println!("asymmetric profile: contrast written as a complex quantity");
            }
            println!(
                "wrote {} points at order {} to {}",
                curve.points.len(),
                curve.order,
                out.display()
            );
            Ok(())
        }

        Command::Intensity { config, out, epsilon } => {
            let cfg = load(&config)?;
            let p = prepare(&cfg, epsilon, 0)?;
            // Intensity is a real observable for any profile; no symmetry
            // gate applies.
            let curve =
                visibility_allow_asymmetric(&p.h, &p.scenario, &p.policy).map_err(Failure::engine)?;
            let delta = cfg.scenario.fringe_phase;
            let mut w = create_out(&out)?;
            let write = |w: &mut dyn Write| -> std::io::Result<()> {
                writeln!(w, "t,delta,intensity")?;
                for pt in &curve.points {
                    let i = intensity_from_sum(cfg.scenario.alpha_sq, pt.v, delta);
                    writeln!(w, "{},{},{}", pt.t, delta, i)?;
                }
                w.flush()
            };
            write(&mut w).map_err(|e| Failure::io(&out, e))?;
            println!(
                "wrote {} points at order {} to {}",
                curve.points.len(),
                p.order,
                out.display()
            );
            Ok(())
        }

        Command::Fringe { config, out, t, points, epsilon } => {
            if points < 8 {
                return Err(Failure::config(format!(
                    "a fringe scan needs at least 8 points, got {points}"
                )));
            }
            if !t.is_finite() {
                return Err(Failure::config(format!("evaluation time {t} must be finite")));
            }
            let cfg = load(&config)?;
            let p = prepare(&cfg, epsilon, 0)?;
            let mut scenario = p.scenario.clone();
            scenario.times = vec![t];
            let curve =
                visibility_allow_asymmetric(&p.h, &scenario, &p.policy).map_err(Failure::engine)?;
            let s = curve.points[0].v;
            let scan = fringe_scan(
                |delta| intensity_from_sum(cfg.scenario.alpha_sq, s, delta),
                points,
            )
            .map_err(Failure::engine)?;
            let mut w = create_out(&out)?;
            let write = |w: &mut dyn Write| -> std::io::Result<()> {
                writeln!(w, "delta,intensity")?;
                for (d, i) in scan.delta_grid.iter().zip(&scan.i_values) {
                    writeln!(w, "{},{}", d, i)?;
                }
                w.flush()
            };
            write(&mut w).map_err(|e| Failure::io(&out, e))?;
            println!(
                "t = {t}: v_op = {}, i_max = {}, i_min = {}",
                scan.v_op, scan.i_max, scan.i_min
            );
            Ok(())
        }

        Command::Revivals { config, out, threshold, epsilon } => {
            let cfg = load(&config)?;
            let p = prepare(&cfg, epsilon, 0)?;
            let curve = visibility(&p.h, &p.scenario, &p.policy).map_err(Failure::engine)?;
            let report = detect_revivals(&curve, threshold);
            let mut w = create_out(&out)?;
            let write = |w: &mut dyn Write| -> std::io::Result<()> {
                writeln!(w, "revival_time")?;
                for t in &report.revival_times {
                    writeln!(w, "{}", t)?;
                }
                writeln!(w, "collapse_floor,period,time_independent")?;
                let period = report.estimated_period.map(|x| x.to_string()).unwrap_or_default();
                writeln!(w, "{},{},{}", report.collapse_floor, period, report.time_independent)?;
                w.flush()
            };
            write(&mut w).map_err(|e| Failure::io(&out, e))?;
            println!(
                "{} revivals, collapse floor {}, timing uncertainty {}",
                report.revival_times.len(),
                report.collapse_floor,
                report.timing_uncertainty
            );
            Ok(())
        }

        Command::OracleCheck { config, epsilon, inject_phase_fault } => {
            let cfg = load(&config)?;
            let (alpha, beta) =
                fdint::oracle::scenario_amplitudes(cfg.scenario.alpha_sq, cfg.scenario.phi);
            let state = FockState2::coherent_auto(alpha, beta).map_err(Failure::engine)?;
            let p = prepare(&cfg, epsilon, state.n_max())?;
            let h_series = if inject_phase_fault {
                p.h.clone().with_diagonal_shift(|na, _| na as f64)
            } else {
                p.h.clone()
            };
            let curve =
                visibility_allow_asymmetric(&h_series, &p.scenario, &p.policy).map_err(Failure::engine)?;
            let delta = cfg.scenario.fringe_phase;
            let spatial = delta + cfg.scenario.phi;
            let mut worst_i = 0.0_f64;
            let mut worst_v = 0.0_f64;
            let mut first_bad: Option<f64> = None;
            for pt in &curve.points {
                let evolved = state.evolved(&p.h, pt.t).map_err(Failure::engine)?;
                let i_series = intensity_from_sum(cfg.scenario.alpha_sq, pt.v, delta);
                let i_oracle = evolved.intensity(spatial);
                let v_oracle = evolved.visibility().map_err(Failure::engine)?;
                let di = (i_series - i_oracle).abs();
                let dv = (pt.v_abs - v_oracle).abs();
                if (di > AGREEMENT_TOLERANCE || dv > AGREEMENT_TOLERANCE) && first_bad.is_none() {
                    first_bad = Some(pt.t);
                }
                worst_i = worst_i.max(di);
                worst_v = worst_v.max(dv);
            }
            if let Some(t) = first_bad {
                return Err(Failure {
                    code: 5,
                    message: format!(
                        "routes disagree beyond {AGREEMENT_TOLERANCE:e} starting at t = {t}: worst intensity split {worst_i:e}, worst contrast split {worst_v:e}"
                    ),
                });
            }
            println!(
                "checked {} times: worst intensity split {:e}, worst contrast split {:e}, within {:e}",
                curve.points.len(),
                worst_i,
                worst_v,
                AGREEMENT_TOLERANCE
            );
            Ok(())
        }
    }
}
