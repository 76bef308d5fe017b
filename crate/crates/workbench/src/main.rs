use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qpforce::analysis::{capture_experiment, fractal_scan, lyapunov_curve, CurveChoice};
use qpforce::cohomology::{critical_b, critical_b_bisect, extremum, mu_residual, solve_bold_mu};
use qpforce::curves::CurveKind;
use qpforce::{MapParams, SystemKind, TrigPoly, Variant};
use qpforce_workbench::config::{parse_omega, parse_pairs};
use qpforce_workbench::export::{echo_params, export_curves, write_atomic};
use qpforce_workbench::manifest::{now_timestamp, RunManifest, MANIFEST_NAME};
use qpforce_workbench::{check_suite, fmt17, run_sweep, CheckHooks, Level, SweepConfig, WbError, WbResult};

/// Quasiperiodically forced piecewise-linear maps: critical amplitudes,
/// bounding curves and their diagnostics.
#[derive(Parser)]
#[command(name = "qpforce", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct System {
    /// pitchfork-super, pitchfork-sub, saddle-node, period-doubling or smooth-pd
    #[arg(long)]
    system: String,
    #[arg(long, allow_hyphen_values = true)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// `golden` or a number
    #[arg(long, default_value = "golden")]
    omega: String,
    /// Forcing as `cos:c0,c1,...;sin:s1,...`; defaults to 1 + cos θ
    #[arg(long)]
    g: Option<String>,
}

#[derive(Args, Clone)]
struct Amplitude {
    #[arg(long, allow_hyphen_values = true, conflicts_with = "b_rel")]
    b: Option<f64>,
    /// Multiple of b*
    #[arg(long)]
    b_rel: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Fourier coefficients of the repelling curve and its residual
    Solve {
        #[command(flatten)]
        sys: System,
        #[command(flatten)]
        amp: Amplitude,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
    },
    /// Critical forcing amplitude b*
    CriticalB {
        #[command(flatten)]
        sys: System,
        /// Also run the bisection oracle
        #[arg(long)]
        bisect: bool,
    },
    /// Sample curves to CSV with a manifest
    Curves {
        #[command(flatten)]
        sys: System,
        #[command(flatten)]
        amp: Amplitude,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        /// Comma-separated: phi_n, phi_image, mu, lambda_n, psi_n, envelope, envelope_up
        #[arg(long, default_value = "phi_n,mu")]
        which: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lyapunov exponent along a curve
    Lyapunov {
        #[command(flatten)]
        sys: System,
        #[command(flatten)]
        amp: Amplitude,
        /// repelling or attracting
        #[arg(long, default_value = "attracting")]
        curve: String,
        #[arg(long, default_value_t = 1_000_000)]
        steps: usize,
        #[arg(long, default_value_t = 1000)]
        burn_in: usize,
        #[arg(long, default_value_t = 0.1)]
        theta: f64,
    },
    /// Lipschitz estimates of the converged bounding curve on an interval
    FractalScan {
        #[command(flatten)]
        sys: System,
        /// Comma-separated multiples of b*
        #[arg(long)]
        b_rel_list: String,
        /// `lo,hi` in radians
        #[arg(long, default_value = "0,6.283185307179586")]
        interval: String,
        #[arg(long, default_value_t = 80)]
        n_converge: usize,
        #[arg(long, default_value_t = 1 << 16)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fraction of random initial points captured by a flat piece
    Capture {
        #[command(flatten)]
        sys: System,
        #[command(flatten)]
        amp: Amplitude,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 10_000)]
        max_iters: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Grid of diagnostics over (a, b)
    Sweep {
        /// File of `key = value` lines
        #[arg(long)]
        config: Option<PathBuf>,
        /// `key=value`, applied after the file; repeatable
        #[arg(long = "set")]
        sets: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Invariant batteries of every module
    Check {
        #[arg(long, default_value = "quick")]
        level: String,
        #[arg(long, hide = true, default_value_t = 0.0, allow_hyphen_values = true)]
        breakpoint_shift: f64,
    },
}

fn params(sys: &System, b: f64) -> WbResult<MapParams> {
    let kind: SystemKind = sys.system.parse()?;
    let g = match &sys.g {
        Some(s) => s.parse::<TrigPoly>()?,
        None => TrigPoly::default_forcing(),
    };
    Ok(MapParams::new(kind, sys.a, b, sys.delta, parse_omega(&sys.omega)?, g)?)
}

fn with_amplitude(sys: &System, amp: &Amplitude) -> WbResult<MapParams> {
    let p = params(sys, 0.0)?;
    match (amp.b, amp.b_rel) {
        (Some(b), None) => Ok(p.with_b(b)?),
        (None, Some(r)) => Ok(p.with_b(r * critical_b(&p)?.b_star)?),
        _ => Err(WbError::Invalid("exactly one of --b and --b-rel is required".into())),
    }
}

fn floats(key: &str, s: &str) -> WbResult<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| WbError::Invalid(format!("{key}: cannot parse {x:?}")))
        })
        .collect()
}

fn run(cmd: Cmd) -> WbResult<bool> {
    match cmd {
        Cmd::Solve { sys, amp, grid } => {
            let p = with_amplitude(&sys, &amp)?;
            let variants: &[Variant] = if p.kind() == SystemKind::PitchforkSub {
                &[Variant::Main, Variant::Hat]
            } else {
                &[Variant::Main]
            };
            for &v in variants {
                let sol = solve_bold_mu(&p, v)?;
                let ex = extremum(&sol, 1e-13);
                println!("variant = {v:?}");
                println!("shape = {}", sol.shape);
                println!("affine_b0 = {}", fmt17(sol.affine_b0));
                println!("affine_const = {}", fmt17(sol.affine_const));
                println!("shape_min = {} at {}", fmt17(ex.val_min), fmt17(ex.theta_min));
                println!("shape_max = {} at {}", fmt17(ex.val_max), fmt17(ex.theta_max));
                println!("residual = {:.3e}", mu_residual(&sol, p.b(), p.g(), grid)?);
            }
        }
        Cmd::CriticalB { sys, bisect } => {
            let p = params(&sys, 0.0)?;
            let c = critical_b(&p)?;
            println!("b_star = {}", fmt17(c.b_star));
            println!("theta_star = {}", fmt17(c.theta_star));
            println!("collision_theta = {}", fmt17(c.collision_theta));
            println!("colliding = {:?}", c.colliding);
            println!("method = {:?}", c.method);
            if bisect {
                let o = critical_b_bisect(&p, 1e-14)?;
                println!("b_star_bisect = {}", fmt17(o.b_star));
            }
        }
        Cmd::Curves {
            sys,
            amp,
            n,
            grid,
            which,
            out,
        } => {
            let p = with_amplitude(&sys, &amp)?;
            let kinds = which
                .split(',')
                .map(|s| s.parse::<CurveKind>())
                .collect::<Result<Vec<_>, _>>()?;
            let man = export_curves(&p, n, grid, &kinds, &out, now_timestamp())?;
            for (f, crc) in &man.files {
                println!("{} {crc:08x}", out.join(f).display());
            }
        }
        Cmd::Lyapunov {
            sys,
            amp,
            curve,
            steps,
            burn_in,
            theta,
        } => {
            let p = with_amplitude(&sys, &amp)?;
            let which = match curve.as_str() {
                "repelling" => CurveChoice::Repelling,
                "attracting" => CurveChoice::Attracting,
                other => return Err(WbError::Invalid(format!("unknown curve {other:?}"))),
            };
            let r = lyapunov_curve(&p, which, steps, burn_in, theta)?;
            println!("value = {}", fmt17(r.value));
            println!("flat_fraction = {}", fmt17(r.flat_fraction));
            println!("orbit_length = {}", r.orbit_length);
        }
        Cmd::FractalScan {
            sys,
            b_rel_list,
            interval,
            n_converge,
            grid,
            out,
        } => {
            let p = params(&sys, 0.0)?;
            let bs = critical_b(&p)?.b_star;
            let bl: Vec<f64> = floats("b-rel-list", &b_rel_list)?.iter().map(|r| r * bs).collect();
            let iv = floats("interval", &interval)?;
            if iv.len() != 2 {
                return Err(WbError::Invalid("interval must be lo,hi".into()));
            }
            let scan = fractal_scan(&p, &bl, (iv[0], iv[1]), n_converge, grid)?;
            let mut csv = String::from("b,b_over_b_star,n_used,converged,lipschitz,sup_norm\n");
            for e in &scan.entries {
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt17(e.b),
                    fmt17(e.b / bs),
                    e.n_used,
                    e.converged,
                    fmt17(e.l_estimate),
                    fmt17(e.sup_norm)
                ));
            }
            print!("{csv}");
            println!(
                "# monotonicity violations {}, region violations {}",
                scan.monotonicity_violations, scan.region_violations
            );
            if let Some(dir) = out {
                let mut man = RunManifest::new(now_timestamp());
                echo_params(&mut man, &p);
                man.param("b_rel_list", b_rel_list)
                    .param("interval", interval)
                    .param("n_converge", n_converge.to_string())
                    .param("grid", grid.to_string());
                write_atomic(&dir.join("fractal.csv"), csv.as_bytes())?;
                man.files.push(("fractal.csv".into(), crc32fast::hash(csv.as_bytes())));
                write_atomic(&dir.join(MANIFEST_NAME), man.render().as_bytes())?;
            }
        }
        Cmd::Capture {
            sys,
            amp,
            trials,
            max_iters,
            seed,
        } => {
            let p = with_amplitude(&sys, &amp)?;
            let s = capture_experiment(&p, trials, max_iters, seed)?;
            println!("captured = {} / {}", s.captured, s.trials);
            println!("fraction = {}", s.fraction());
            for (k, c) in &s.iteration_histogram {
                println!("step {k} = {c}");
            }
        }
        Cmd::Sweep { config, sets, out } => {
            let mut pairs = match &config {
                Some(f) => parse_pairs(&std::fs::read_to_string(f)?)?,
                None => Vec::new(),
            };
            for s in &sets {
                let (k, v) = s
                    .split_once('=')
                    .ok_or_else(|| WbError::Invalid(format!("--set expects key=value, got {s:?}")))?;
                pairs.push((k.trim().into(), v.trim().into()));
            }
            if let Some(o) = out {
                pairs.push(("out".into(), o.display().to_string()));
            }
            let cfg = SweepConfig::from_pairs(&pairs)?;
            let res = run_sweep(&cfg, now_timestamp())?;
            print!("{}", res.csv);
        }
        Cmd::Check {
            level,
            breakpoint_shift,
        } => {
            let level: Level = level.parse().map_err(WbError::Invalid)?;
            let rep = check_suite(level, CheckHooks { breakpoint_shift });
            print!("{}", rep.render());
            return Ok(rep.pass());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("{}: {e}", e.status());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
