//! Scenario execution: simulation, lifting, limit systems, Lyapunov
//! analysis, figure datasets, convergence studies, and the deterministic /
//! stochastic excursion comparison.

use crate::manifest::{ensure_dir, RunManifest};
use crate::scenario::{DriverSpec, Scenario, SystemSpec};
use crate::CliError;
use roughstab::dynamics::{
    limit_drift, ode_simulate_with, rough_euler_simulate_with, sde_simulate_with, DynamicsError,
    SdeMode, SimOptions, Trajectory, TrajectoryMeta, VectorFieldSystem,
};
use roughstab::lyapunov::{check_asir, check_uasas_condition, ScalarFunction, StabilityReport};
use roughstab::paths::{lift_piecewise_linear, SampledPath};
use roughstab::rng::par_map_seeds;
use roughstab::signals::{constant_rate_path, wong_zakai_wiener, OscillatoryNoise, RateMatrix, WienerConfig};
use std::f64::consts::PI;
use std::path::Path;
use std::time::Instant;

/// Finite-index oscillatory runs must resolve the η² oscillation with at
/// least 50 steps per period.
pub fn oscillatory_step(eta: u32, cap: f64) -> f64 {
    cap.min(2.0 * PI / (50.0 * (eta as f64).powi(2)))
}

fn sim_options(s: &Scenario) -> SimOptions {
    SimOptions {
        state_bound: s.state_bound,
    }
}

fn output_times(s: &Scenario) -> Vec<f64> {
    let cells = (s.horizon / s.step).ceil().max(1.0) as usize;
    (0..=cells)
        .map(|k| s.horizon * k as f64 / cells as f64)
        .collect()
}

fn rk4_step<F>(rhs: &F, t: f64, h: f64, x: &mut [f64])
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    let n = x.len();
    let k1 = rhs(t, x);
    let mut tmp = vec![0.0; n];
    for i in 0..n {
        tmp[i] = x[i] + 0.5 * h * k1[i];
    }
    let k2 = rhs(t + 0.5 * h, &tmp);
    for i in 0..n {
        tmp[i] = x[i] + 0.5 * h * k2[i];
    }
    let k3 = rhs(t + 0.5 * h, &tmp);
    for i in 0..n {
        tmp[i] = x[i] + h * k3[i];
    }
    let k4 = rhs(t + h, &tmp);
    for i in 0..n {
        x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

/// RK4 solve recorded exactly on `times_out`, taking `sub` equal inner steps
/// per output cell, so different runs share their sample grid by
/// construction.
fn rk4_on_grid<F>(
    rhs: F,
    x0: &[f64],
    times_out: &[f64],
    sub: usize,
    opts: &SimOptions,
    integrator: &str,
) -> Result<Trajectory, DynamicsError>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    let mut x = x0.to_vec();
    let mut states = Vec::with_capacity(times_out.len());
    states.push(x.clone());
    for k in 0..times_out.len() - 1 {
        let h = (times_out[k + 1] - times_out[k]) / sub as f64;
        for q in 0..sub {
            let t = times_out[k] + q as f64 * h;
            rk4_step(&rhs, t, h, &mut x);
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(DynamicsError::NumericalFailure {
                time: times_out[k + 1],
            });
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > opts.state_bound {
            return Err(DynamicsError::BlowUp {
                time: times_out[k + 1],
                norm,
                bound: opts.state_bound,
            });
        }
        states.push(x.clone());
    }
    Ok(Trajectory {
        times: times_out.to_vec(),
        states,
        meta: TrajectoryMeta {
            integrator: integrator.into(),
            step: (times_out[1] - times_out[0]) / sub as f64,
            seed: None,
        },
    })
}

fn classical_rhs<'a>(
    g: &'a VectorFieldSystem,
    u_dot: impl Fn(f64) -> Vec<f64> + 'a,
) -> impl Fn(f64, &[f64]) -> Vec<f64> + 'a {
    move |t: f64, x: &[f64]| {
        let du = u_dot(t);
        let mut out = vec![0.0; x.len()];
        for (j, w) in du.iter().enumerate() {
            if *w != 0.0 {
                let gj = g.eval(j, x);
                for i in 0..out.len() {
                    out[i] += gj[i] * w;
                }
            }
        }
        out
    }
}

/// Finite-η oscillatory trajectory on the scenario output grid.
fn oscillatory_trajectory(
    s: &Scenario,
    g: &VectorFieldSystem,
    b1: f64,
    b2: f64,
    eta: u32,
) -> Result<Trajectory, CliError> {
    let noise = OscillatoryNoise::new(b1, b2, eta).map_err(|e| CliError::Config(e.to_string()))?;
    let times = output_times(s);
    let out_step = times[1] - times[0];
    let sub = (out_step / oscillatory_step(eta, out_step)).ceil() as usize;
    let mut traj = rk4_on_grid(
        classical_rhs(g, |t| noise.derivative(t)),
        &s.x0,
        &times,
        sub.max(1),
        &sim_options(s),
        "rk4-oscillatory",
    )?;
    traj.meta.seed = None;
    Ok(traj)
}

/// Wong-Zakai driven trajectory: piecewise-constant input rates per Wiener
/// cell, RK4 within cells, recorded at the Wiener grid.
fn wiener_trajectory(
    s: &Scenario,
    g: &VectorFieldSystem,
    seed: u64,
    cells: usize,
) -> Result<Trajectory, CliError> {
    let cfg = WienerConfig::new(g.channels(), s.horizon, cells, seed)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let path = wong_zakai_wiener(&cfg).map_err(|e| CliError::Config(e.to_string()))?;
    let opts = sim_options(s);
    let mut x = s.x0.clone();
    let mut states = Vec::with_capacity(path.len());
    states.push(x.clone());
    for k in 0..path.len() - 1 {
        let dt = path.times()[k + 1] - path.times()[k];
        let rates: Vec<f64> = (0..path.dim())
            .map(|j| (path.value(k + 1)[j] - path.value(k)[j]) / dt)
            .collect();
        let rhs = |_t: f64, y: &[f64]| {
            let mut out = vec![0.0; y.len()];
            for (j, w) in rates.iter().enumerate() {
                let gj = g.eval(j, y);
                for i in 0..out.len() {
                    out[i] += gj[i] * w;
                }
            }
            out
        };
        let sub = (dt / s.step).ceil().max(1.0) as usize;
        let h = dt / sub as f64;
        for q in 0..sub {
            rk4_step(&rhs, path.times()[k] + q as f64 * h, h, &mut x);
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(DynamicsError::NumericalFailure {
                time: path.times()[k + 1],
            }
            .into());
        }
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > opts.state_bound {
            return Err(DynamicsError::BlowUp {
                time: path.times()[k + 1],
                norm,
                bound: opts.state_bound,
            }
            .into());
        }
        states.push(x.clone());
    }
    Ok(Trajectory {
        times: path.times().to_vec(),
        states,
        meta: TrajectoryMeta {
            integrator: "rk4-wong-zakai".into(),
            step: s.horizon / cells as f64,
            seed: Some(seed),
        },
    })
}

/// Limit trajectory: rough Euler along the constant-rate path of Γ.
fn limit_trajectory(
    s: &Scenario,
    g: &VectorFieldSystem,
    gamma: &RateMatrix,
) -> Result<Trajectory, CliError> {
    let driver = constant_rate_path(gamma, output_times(s))
        .map_err(|e| CliError::Config(e.to_string()))?;
    Ok(rough_euler_simulate_with(g, &driver, &s.x0, &sim_options(s))?)
}

fn gamma_for_driver(s: &Scenario, g: &VectorFieldSystem) -> RateMatrix {
    match &s.driver {
        DriverSpec::Oscillatory { b1, b2, .. } | DriverSpec::OscillatoryLimit { b1, b2 } => {
            RateMatrix::oscillatory(*b1, *b2)
        }
        DriverSpec::Wiener { .. } => RateMatrix::wiener(g.channels()),
        DriverSpec::None => RateMatrix::zero(g.channels()),
    }
}

fn scenario_trajectory(s: &Scenario, g: &VectorFieldSystem) -> Result<Trajectory, CliError> {
    match &s.driver {
        DriverSpec::Oscillatory { b1, b2, eta } => oscillatory_trajectory(s, g, *b1, *b2, *eta),
        DriverSpec::OscillatoryLimit { b1, b2 } => {
            limit_trajectory(s, g, &RateMatrix::oscillatory(*b1, *b2))
        }
        DriverSpec::Wiener { seed, cells } => wiener_trajectory(s, g, *seed, *cells),
        DriverSpec::None => {
            let drift = g.field(0);
            Ok(ode_simulate_with(
                &*drift,
                &s.x0,
                s.horizon,
                s.step,
                &sim_options(s),
            )?)
        }
    }
}

fn candidate(s: &Scenario) -> Option<ScalarFunction> {
    s.lyapunov.as_deref().map(|_| ScalarFunction::quadratic())
}

fn lyapunov_outputs(
    s: &Scenario,
    g: &VectorFieldSystem,
    v: &ScalarFunction,
    manifest: &mut RunManifest,
) -> Result<StabilityReport, CliError> {
    let gamma = gamma_for_driver(s, g);
    let drift = limit_drift(g, &gamma);
    let report = check_asir(v, &*drift, g.state_dim(), &s.grid)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let mut buf = Vec::new();
    report.write_csv(&mut buf)?;
    manifest.emit("report.csv", &buf)?;
    println!("{}", report.verdict_line());

    let grid_points = s
        .grid
        .points(g.state_dim())
        .map_err(|e| CliError::Config(e.to_string()))?;
    let uasas = check_uasas_condition(v, g, &grid_points)
        .map_err(|e| CliError::Config(e.to_string()))?;
    match &uasas.witness {
        None => println!("uasas-condition: holds on the grid"),
        Some(w) => println!(
            "uasas-condition: fails (L_g{} v = {:.6e} at {:?})",
            w.channel, w.value, w.point
        ),
    }
    Ok(report)
}

fn v_trajectory_csv(v: &ScalarFunction, traj: &Trajectory) -> String {
    let mut out = String::from("t,x1\n");
    for (t, x) in traj.times.iter().zip(&traj.states) {
        out.push_str(&format!("{t},{}\n", v.eval(x)));
    }
    out
}

/// `simulate`: trajectory CSV, optional candidate-value CSV and stability
/// report, plus the manifest.
pub fn simulate(s: &Scenario) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    ensure_dir(&s.out)?;
    let g = s.system.build()?;
    let mut manifest = RunManifest::new("simulate", s.echo(), s.out.clone());
    if let DriverSpec::Wiener { seed, .. } = &s.driver {
        manifest.seeds.push(*seed);
    }
    let traj = scenario_trajectory(s, &g)?;
    manifest.emit("trajectory.csv", traj.to_csv_string().as_bytes())?;
    if let Some(v) = candidate(s) {
        manifest.emit("lyapunov_v.csv", v_trajectory_csv(&v, &traj).as_bytes())?;
        lyapunov_outputs(s, &g, &v, &mut manifest)?;
    }
    manifest.wallclock_ms = start.elapsed().as_millis();
    manifest.write()?;
    Ok(manifest)
}

fn lift_csv(lifted: &roughstab::paths::GridRoughPath) -> String {
    let d = lifted.dim();
    let mut out = String::from("t");
    for i in 1..=d {
        out.push_str(&format!(",l1_{i}"));
    }
    for i in 1..=d {
        for j in 1..=d {
            out.push_str(&format!(",l2_{i}{j}"));
        }
    }
    out.push('\n');
    for k in 0..lifted.cells() {
        let cell = lifted.cell(k);
        out.push_str(&format!("{}", lifted.times()[k]));
        for v in cell.level1() {
            out.push_str(&format!(",{v}"));
        }
        for v in cell.level2() {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

/// `lift`: level-2 lift of an input CSV signal, or of the scenario driver
/// sampled on the output grid.
pub fn lift(s: &Scenario, input: Option<&Path>) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    ensure_dir(&s.out)?;
    let mut manifest = RunManifest::new("lift", s.echo(), s.out.clone());
    let signal = match input {
        Some(path) => {
            let file = std::fs::File::open(path)
                .map_err(|e| CliError::Config(format!("cannot open {}: {e}", path.display())))?;
            SampledPath::read_csv(std::io::BufReader::new(file))
                .map_err(|e| CliError::Config(e.to_string()))?
        }
        None => match &s.driver {
            DriverSpec::Oscillatory { b1, b2, eta } => {
                let noise = OscillatoryNoise::new(*b1, *b2, *eta)
                    .map_err(|e| CliError::Config(e.to_string()))?;
                let cells = (s.horizon / oscillatory_step(*eta, s.step)).ceil() as usize;
                noise
                    .sample(s.horizon, cells)
                    .map_err(|e| CliError::Config(e.to_string()))?
            }
            DriverSpec::Wiener { seed, cells } => {
                let g = s.system.build()?;
                let cfg = WienerConfig::new(g.channels(), s.horizon, *cells, *seed)
                    .map_err(|e| CliError::Config(e.to_string()))?;
                wong_zakai_wiener(&cfg).map_err(|e| CliError::Config(e.to_string()))?
            }
            other => {
                return Err(CliError::Config(format!(
                    "driver `{}` has no sampled signal to lift; pass --input",
                    other.describe()
                )));
            }
        },
    };
    let lifted = lift_piecewise_linear(&signal).map_err(|e| CliError::Config(e.to_string()))?;
    manifest.emit("signal.csv", signal.to_csv_string().as_bytes())?;
    manifest.emit("lift.csv", lift_csv(&lifted).as_bytes())?;
    // composite consistency over the halves, printed for quick inspection
    let n = lifted.cells();
    let defect = roughstab::tensor::chen_defect(
        &lifted.increment(0, n / 2).map_err(|e| CliError::Config(e.to_string()))?,
        &lifted.increment(n / 2, n).map_err(|e| CliError::Config(e.to_string()))?,
        &lifted.increment(0, n).map_err(|e| CliError::Config(e.to_string()))?,
    )
    .map_err(|e| CliError::Config(e.to_string()))?;
    println!("lift: {n} cells, half-split chen defect = {defect:.3e}");
    manifest.wallclock_ms = start.elapsed().as_millis();
    manifest.write()?;
    Ok(manifest)
}

fn gamma_csv(gamma: &RateMatrix) -> String {
    let d = gamma.dim();
    let mut out = String::from("t");
    for j in 0..d {
        out.push_str(&format!(",c{j}"));
    }
    out.push('\n');
    for k in 0..d {
        out.push_str(&format!("{k}"));
        for j in 0..d {
            out.push_str(&format!(",{}", gamma.at(k, j)));
        }
        out.push('\n');
    }
    out
}

/// `limit`: the driver's rate matrix and the limit-system trajectory.
pub fn limit(s: &Scenario) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    ensure_dir(&s.out)?;
    let g = s.system.build()?;
    let mut manifest = RunManifest::new("limit", s.echo(), s.out.clone());
    let gamma = gamma_for_driver(s, &g);
    manifest.emit("gamma.csv", gamma_csv(&gamma).as_bytes())?;
    let traj = limit_trajectory(s, &g, &gamma)?;
    manifest.emit("trajectory_limit.csv", traj.to_csv_string().as_bytes())?;
    manifest.wallclock_ms = start.elapsed().as_millis();
    manifest.write()?;
    Ok(manifest)
}

/// `lyapunov`: stability report for the scenario's limit system plus the
/// zero-Lie-derivative check.
pub fn lyapunov_analysis(s: &Scenario) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    ensure_dir(&s.out)?;
    let g = s.system.build()?;
    let mut manifest = RunManifest::new("lyapunov", s.echo(), s.out.clone());
    let v = candidate(s).unwrap_or_else(ScalarFunction::quadratic);
    lyapunov_outputs(s, &g, &v, &mut manifest)?;
    manifest.wallclock_ms = start.elapsed().as_millis();
    manifest.write()?;
    Ok(manifest)
}

/// `figures`: the three case-study datasets plus a gnuplot script.
pub fn figures(s: &Scenario) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    ensure_dir(&s.out)?;
    let mut fig = Scenario {
        system: SystemSpec::Motivational2d,
        x0: if s.system == SystemSpec::Motivational2d {
            s.x0.clone()
        } else {
            vec![1.0, 1.0]
        },
        ..s.clone()
    };
    let g = fig.system.build()?;
    let mut manifest = RunManifest::new("figures", fig.echo(), fig.out.clone());

    // sample path under Wiener noise
    let wiener_seed = match s.driver {
        DriverSpec::Wiener { seed, .. } => seed,
        _ => 1,
    };
    manifest.seeds.push(wiener_seed);
    let traj = wiener_trajectory(&fig, &g, wiener_seed, 10_000)?;
    manifest.emit("fig1_wiener_sample.csv", traj.to_csv_string().as_bytes())?;

    // finite-index sweep plus the limit curve
    let (b1, b2) = fig.driver.oscillatory_amplitudes().unwrap_or((3.0, 4.0));
    for &eta in &fig.etas {
        let traj = oscillatory_trajectory(&fig, &g, b1, b2, eta)?;
        manifest.emit(
            &format!("fig2_eta_{eta}.csv"),
            traj.to_csv_string().as_bytes(),
        )?;
    }
    let limit = limit_trajectory(&fig, &g, &RateMatrix::oscillatory(b1, b2))?;
    manifest.emit("fig2_limit.csv", limit.to_csv_string().as_bytes())?;

    // candidate value along the limit system
    fig.driver = DriverSpec::OscillatoryLimit { b1, b2 };
    let v = ScalarFunction::quadratic();
    manifest.emit(
        "fig3_lyapunov_v.csv",
        v_trajectory_csv(&v, &limit).as_bytes(),
    )?;

    let mut gp = String::new();
    gp.push_str("set datafile separator ','\n");
    gp.push_str("set key autotitle columnhead\n");
    gp.push_str("set term pngcairo size 900,600\n");
    gp.push_str("set output 'fig1_wiener_sample.png'\n");
    gp.push_str("plot 'fig1_wiener_sample.csv' using 1:2 with lines title 'x1', \\\n");
    gp.push_str("     'fig1_wiener_sample.csv' using 1:3 with lines title 'x2'\n");
    gp.push_str("set output 'fig2_eta_sweep.png'\n");
    let mut parts = Vec::new();
    for &eta in &fig.etas {
        parts.push(format!(
            "'fig2_eta_{eta}.csv' using 1:2 with lines title 'eta={eta}'"
        ));
    }
    parts.push("'fig2_limit.csv' using 1:2 with lines lw 2 title 'limit'".to_string());
    gp.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
    gp.push_str("set output 'fig3_lyapunov_v.png'\n");
    gp.push_str("plot 'fig3_lyapunov_v.csv' using 1:2 with lines title 'v(x_t)'\n");
    manifest.emit("plot.gp", gp.as_bytes())?;

    manifest.wallclock_ms = start.elapsed().as_millis();
    manifest.write()?;
    Ok(manifest)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub eta: u32,
    pub sup_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceOutcome {
    pub rows: Vec<ConvergenceRow>,
    /// Strict decrease across the table; vacuously true for a single row.
    pub monotone: bool,
}

/// `converge`: sup-norm gap between finite-index and limit trajectories at
/// the shared output times, one row per index. A table that is not strictly
/// decreasing is still written and returned; the command-line front end
/// turns it into exit code 4.
pub fn converge(s: &Scenario) -> Result<(ConvergenceOutcome, RunManifest), CliError> {
    let start = Instant::now();
    ensure_dir(&s.out)?;
    let g = s.system.build()?;
    let (b1, b2) = s.driver.oscillatory_amplitudes().ok_or_else(|| {
        CliError::Config(format!(
            "converge needs an oscillatory driver, got `{}`",
            s.driver.describe()
        ))
    })?;
    let mut manifest = RunManifest::new("converge", s.echo(), s.out.clone());
    let limit = limit_trajectory(s, &g, &RateMatrix::oscillatory(b1, b2))?;
    let mut rows = Vec::new();
    for &eta in &s.etas {
        let traj = oscillatory_trajectory(s, &g, b1, b2, eta)?;
        rows.push(ConvergenceRow {
            eta,
            sup_gap: traj.sup_gap(&limit),
        });
    }
    let mut csv = String::from("t,eta,gap\n");
    for (k, row) in rows.iter().enumerate() {
        csv.push_str(&format!("{k},{},{}\n", row.eta, row.sup_gap));
        println!("converge: eta = {:>6}  sup gap = {}", row.eta, row.sup_gap);
    }
    manifest.emit("table.csv", csv.as_bytes())?;
    manifest.wallclock_ms = start.elapsed().as_millis();
    manifest.write()?;
    let monotone = rows.len() < 2 || rows.windows(2).all(|w| w[1].sup_gap < w[0].sup_gap);
    if !monotone {
        println!("converge: FAILURE — gap column is not strictly decreasing");
    }
    Ok((ConvergenceOutcome { rows, monotone }, manifest))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareSummary {
    /// (eta, max excursion) of the deterministic runs from the origin.
    pub deterministic: Vec<(u32, f64)>,
    /// (step, median max excursion, blow-ups) of the Stratonovich ensembles.
    pub stochastic: Vec<(f64, f64, usize)>,
}

/// `compare`: deterministic finite-index excursions from the origin against
/// Stratonovich ensembles of the same system, at the scenario step and at
/// half that step. Per-seed blow-ups are counted, not fatal.
pub fn compare(s: &Scenario) -> Result<(CompareSummary, RunManifest), CliError> {
    let start = Instant::now();
    if s.system != SystemSpec::Example1d {
        return Err(CliError::Config(
            "compare is defined for `system = example-1d`".into(),
        ));
    }
    ensure_dir(&s.out)?;
    let g = s.system.build()?;
    let (b1, b2) = s.driver.oscillatory_amplitudes().unwrap_or((1.0, 1.0));
    let mut manifest = RunManifest::new("compare", s.echo(), s.out.clone());
    manifest.seeds = s.seeds.clone();

    let origin = Scenario {
        x0: vec![0.0; g.state_dim()],
        ..s.clone()
    };
    let mut deterministic = Vec::new();
    for &eta in &s.etas {
        let traj = oscillatory_trajectory(&origin, &g, b1, b2, eta)?;
        let excursion = traj
            .states
            .iter()
            .flat_map(|row| row.iter().map(|v| v.abs()))
            .fold(0.0, f64::max);
        deterministic.push((eta, excursion));
        println!("compare: deterministic eta = {eta:>6}  max excursion = {excursion}");
    }

    let opts = sim_options(s);
    let mut stochastic = Vec::new();
    for step in [s.step, s.step / 2.0] {
        let runs = par_map_seeds(&s.seeds, |seed| {
            match sde_simulate_with(
                &g,
                SdeMode::Stratonovich,
                &origin.x0,
                s.horizon,
                step,
                seed,
                &opts,
            ) {
                Ok(traj) => (
                    traj.states
                        .iter()
                        .flat_map(|row| row.iter().map(|v| v.abs()))
                        .fold(0.0, f64::max),
                    false,
                ),
                // a path that left the box certainly excursed past the bound
                Err(_) => (opts.state_bound, true),
            }
        });
        let blowups = runs.iter().filter(|(_, b)| *b).count();
        let mut excursions: Vec<f64> = runs.iter().map(|(e, _)| *e).collect();
        excursions.sort_by(|a, b| a.partial_cmp(b).expect("excursions are finite"));
        let median = excursions[excursions.len() / 2];
        println!(
            "compare: stochastic h = {step}  median max excursion = {median}  blow-ups = {blowups}/{}",
            s.seeds.len()
        );
        stochastic.push((step, median, blowups));
    }

    let mut csv = String::from("t,kind,param,excursion\n");
    let mut row = 0usize;
    for (eta, e) in &deterministic {
        csv.push_str(&format!("{row},0,{eta},{e}\n"));
        row += 1;
    }
    for (step, median, _) in &stochastic {
        csv.push_str(&format!("{row},1,{step},{median}\n"));
        row += 1;
    }
    manifest.emit("compare.csv", csv.as_bytes())?;
    manifest.wallclock_ms = start.elapsed().as_millis();
    manifest.write()?;
    Ok((
        CompareSummary {
            deterministic,
            stochastic,
        },
        manifest,
    ))
}
