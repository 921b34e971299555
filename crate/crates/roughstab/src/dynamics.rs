//! Vector-field systems and integrators.
//!
//! A system is the tuple g = (g₀, g₁, ..., g_m) of vector fields on ℝⁿ;
//! channel 0 multiplies time. The level-2 rough Euler scheme advances, per
//! cell of the driving grid rough path U,
//!
//! ```text
//! x ← x + Σ_j g_j(x) ΔU¹[j] + Σ_{j,k} (∂g_j/∂x)(x) g_k(x) ΔU²[k,j]
//! ```
//!
//! with left-point vector-field evaluation. Driven by a constant-rate path
//! (level 2 = Γ·h per cell) this update is algebraically the explicit Euler
//! scheme for the limit drift g₀ + Σ Γ[k,j] (∂g_j/∂x) g_k.
//!
//! Reference integrators: fixed-step RK4 for ODEs, Euler-Maruyama for Itô
//! SDEs, the midpoint-corrected Heun scheme for Stratonovich SDEs. All
//! integrators are fixed-step and abort on leaving a configurable bounding
//! box instead of silently producing NaNs.

use crate::paths::GridRoughPath;
use crate::rng::GaussianStream;
use crate::signals::RateMatrix;
use std::io::Write;
use std::sync::Arc;
use thiserror::Error;

/// A vector field ℝⁿ → ℝⁿ.
pub type Field = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
/// A matrix field ℝⁿ → ℝⁿˣⁿ, row-major.
pub type MatrixField = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Default bounding box |x|₂ ≤ 1e6; leaving it aborts the run.
pub const DEFAULT_STATE_BOUND: f64 = 1e6;

/// Default relative step for finite-difference Jacobians.
pub const DEFAULT_FD_SCALE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error("system needs at least the drift field g0")]
    NoFields,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("driver has {got} channels, system expects {expected}")]
    ChannelMismatch { expected: usize, got: usize },
    #[error("step and horizon must be positive, got h = {step}, T = {horizon}")]
    InvalidStep { step: f64, horizon: f64 },
    #[error("state left the bounding box (|x| = {norm:.3e} > {bound:.3e}) at t = {time}")]
    BlowUp { time: f64, norm: f64, bound: f64 },
    #[error("non-finite state at t = {time}")]
    NumericalFailure { time: f64 },
}

/// The tuple g = (g₀, g₁, ..., g_m) with optional analytic Jacobians;
/// missing Jacobians fall back to central differences.
#[derive(Clone)]
pub struct VectorFieldSystem {
    state_dim: usize,
    fields: Vec<Field>,
    jacobians: Vec<Option<MatrixField>>,
    fd_scale: f64,
}

impl VectorFieldSystem {
    pub fn new(state_dim: usize, fields: Vec<Field>) -> Result<Self, DynamicsError> {
        if fields.is_empty() {
            return Err(DynamicsError::NoFields);
        }
        let jacobians = vec![None; fields.len()];
        Ok(Self {
            state_dim,
            fields,
            jacobians,
            fd_scale: DEFAULT_FD_SCALE,
        })
    }

    /// Bilinear system g_j(x) = A_j x with analytic Jacobians; `matrices[j]`
    /// is row-major n×n.
    pub fn linear(state_dim: usize, matrices: Vec<Vec<f64>>) -> Result<Self, DynamicsError> {
        if matrices.is_empty() {
            return Err(DynamicsError::NoFields);
        }
        for m in &matrices {
            if m.len() != state_dim * state_dim {
                return Err(DynamicsError::DimensionMismatch {
                    expected: state_dim * state_dim,
                    got: m.len(),
                });
            }
        }
        let mut fields: Vec<Field> = Vec::with_capacity(matrices.len());
        let mut jacobians: Vec<Option<MatrixField>> = Vec::with_capacity(matrices.len());
        for m in matrices {
            let m = Arc::new(m);
            let mf = Arc::clone(&m);
            fields.push(Arc::new(move |x: &[f64]| matvec(&mf, x)));
            let mj = Arc::clone(&m);
            jacobians.push(Some(Arc::new(move |_: &[f64]| (*mj).clone())));
        }
        Ok(Self {
            state_dim,
            fields,
            jacobians,
            fd_scale: DEFAULT_FD_SCALE,
        })
    }

    pub fn with_jacobian(mut self, channel: usize, jac: MatrixField) -> Self {
        self.jacobians[channel] = Some(jac);
        self
    }

    pub fn with_fd_scale(mut self, scale: f64) -> Self {
        self.fd_scale = scale;
        self
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    /// Number of input channels m (time channel excluded).
    pub fn channels(&self) -> usize {
        self.fields.len() - 1
    }

    pub fn eval(&self, channel: usize, x: &[f64]) -> Vec<f64> {
        (self.fields[channel])(x)
    }

    pub fn field(&self, channel: usize) -> Field {
        Arc::clone(&self.fields[channel])
    }

    pub fn has_analytic_jacobian(&self, channel: usize) -> bool {
        self.jacobians[channel].is_some()
    }

    /// Jacobian of g_channel at x, analytic if provided, otherwise central
    /// finite differences.
    pub fn jacobian(&self, channel: usize, x: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        match &self.jacobians[channel] {
            Some(j) => Ok(j(x)),
            None => jacobian_fd(self.fields[channel].as_ref(), x, self.fd_scale),
        }
    }
}

/// Central-difference Jacobian with step `scale · max(1, |x|)`, row-major.
pub fn jacobian_fd<F>(field: &F, x: &[f64], scale: f64) -> Result<Vec<f64>, DynamicsError>
where
    F: Fn(&[f64]) -> Vec<f64> + ?Sized,
{
    let n_in = x.len();
    let h = scale * euclid(x).max(1.0);
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    let probe = field(x);
    let n_out = probe.len();
    let mut jac = vec![0.0; n_out * n_in];
    for l in 0..n_in {
        xp[l] = x[l] + h;
        xm[l] = x[l] - h;
        let fp = field(&xp);
        let fm = field(&xm);
        for i in 0..n_out {
            let d = (fp[i] - fm[i]) / (2.0 * h);
            if !d.is_finite() {
                return Err(DynamicsError::NumericalFailure { time: f64::NAN });
            }
            jac[i * n_in + l] = d;
        }
        xp[l] = x[l];
        xm[l] = x[l];
    }
    Ok(jac)
}

/// Simulation controls shared by the integrators.
#[derive(Debug, Clone, Copy)]
pub struct SimOptions {
    /// Hard abort once |x|₂ exceeds this bound (global-solution surrogate).
    pub state_bound: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            state_bound: DEFAULT_STATE_BOUND,
        }
    }
}

/// A sampled trajectory plus the metadata that reproduces it.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub meta: TrajectoryMeta,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryMeta {
    pub integrator: String,
    pub step: f64,
    pub seed: Option<u64>,
}

impl Trajectory {
    pub fn endpoint(&self) -> &[f64] {
        self.states.last().expect("trajectory has at least x0")
    }

    pub fn dim(&self) -> usize {
        self.states[0].len()
    }

    /// Max over shared indices of the entrywise gap to another trajectory
    /// sampled on the same grid.
    pub fn sup_gap(&self, other: &Trajectory) -> f64 {
        self.states
            .iter()
            .zip(&other.states)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }

    /// Trajectory CSV: `# integrator=`, `# h=`, `# seed=` comment lines,
    /// then the `t,x1,...,xn` schema.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "# integrator={}", self.meta.integrator)?;
        writeln!(w, "# h={}", self.meta.step)?;
        if let Some(seed) = self.meta.seed {
            writeln!(w, "# seed={seed}")?;
        }
        write!(w, "t")?;
        for i in 1..=self.dim() {
            write!(w, ",x{i}")?;
        }
        writeln!(w)?;
        for (t, row) in self.times.iter().zip(&self.states) {
            write!(w, "{t}")?;
            for v in row {
                write!(w, ",{v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }
}

fn check_state(x: &[f64], time: f64, opts: &SimOptions) -> Result<(), DynamicsError> {
    if x.iter().any(|v| !v.is_finite()) {
        return Err(DynamicsError::NumericalFailure { time });
    }
    let norm = euclid(x);
    if norm > opts.state_bound {
        return Err(DynamicsError::BlowUp {
            time,
            norm,
            bound: opts.state_bound,
        });
    }
    Ok(())
}

/// Level-2 rough Euler scheme along a grid rough path; states are returned
/// at every cell boundary.
pub fn rough_euler_simulate(
    g: &VectorFieldSystem,
    driver: &GridRoughPath,
    x0: &[f64],
) -> Result<Trajectory, DynamicsError> {
    rough_euler_simulate_with(g, driver, x0, &SimOptions::default())
}

pub fn rough_euler_simulate_with(
    g: &VectorFieldSystem,
    driver: &GridRoughPath,
    x0: &[f64],
    opts: &SimOptions,
) -> Result<Trajectory, DynamicsError> {
    if driver.dim() != g.channels() + 1 {
        return Err(DynamicsError::ChannelMismatch {
            expected: g.channels() + 1,
            got: driver.dim(),
        });
    }
    if x0.len() != g.state_dim() {
        return Err(DynamicsError::DimensionMismatch {
            expected: g.state_dim(),
            got: x0.len(),
        });
    }
    let n = g.state_dim();
    let d = g.channels() + 1;
    let mut x = x0.to_vec();
    check_state(&x, driver.times()[0], opts)?;
    let mut states = Vec::with_capacity(driver.cells() + 1);
    states.push(x.clone());
    for cell_idx in 0..driver.cells() {
        let cell = driver.cell(cell_idx);
        let vals: Vec<Vec<f64>> = (0..d).map(|j| g.eval(j, &x)).collect();
        let mut dx = vec![0.0; n];
        for j in 0..d {
            let du = cell.level1()[j];
            if du != 0.0 {
                for i in 0..n {
                    dx[i] += vals[j][i] * du;
                }
            }
        }
        for j in 0..d {
            // the Jacobian of g_j is only needed where column j of the
            // level-2 increment is populated
            if (0..d).all(|k| cell.level2_at(k, j) == 0.0) {
                continue;
            }
            let jac = g.jacobian(j, &x)?;
            for k in 0..d {
                let coeff = cell.level2_at(k, j);
                if coeff == 0.0 {
                    continue;
                }
                for i in 0..n {
                    let mut acc = 0.0;
                    for l in 0..n {
                        acc += jac[i * n + l] * vals[k][l];
                    }
                    dx[i] += acc * coeff;
                }
            }
        }
        for i in 0..n {
            x[i] += dx[i];
        }
        check_state(&x, driver.times()[cell_idx + 1], opts)?;
        states.push(x.clone());
    }
    Ok(Trajectory {
        times: driver.times().to_vec(),
        states,
        meta: TrajectoryMeta {
            integrator: "rough-euler".into(),
            step: driver.times()[1] - driver.times()[0],
            seed: None,
        },
    })
}

/// Limit drift of the system along a constant-rate limit path:
/// x ↦ g₀(x) + Σ_{j,k} Γ[k,j] (∂g_j/∂x)(x) g_k(x).
///
/// For the oscillatory rates this reduces to
/// g₀ + (b₁b₂/2)[(∂g₂/∂x)g₁ − (∂g₁/∂x)g₂]; for the Wiener rates it is the
/// Stratonovich-to-Itô corrected drift.
pub fn limit_drift(g: &VectorFieldSystem, gamma: &RateMatrix) -> Field {
    let g = g.clone();
    let gamma = gamma.clone();
    Arc::new(move |x: &[f64]| {
        let n = g.state_dim();
        let d = g.channels() + 1;
        let mut out = g.eval(0, x);
        debug_assert_eq!(gamma.dim(), d);
        for j in 0..d {
            if (0..d).all(|k| gamma.at(k, j) == 0.0) {
                continue;
            }
            let jac = g.jacobian(j, x).expect("jacobian evaluation failed");
            for k in 0..d {
                let coeff = gamma.at(k, j);
                if coeff == 0.0 {
                    continue;
                }
                let gk = g.eval(k, x);
                for i in 0..n {
                    let mut acc = 0.0;
                    for l in 0..n {
                        acc += jac[i * n + l] * gk[l];
                    }
                    out[i] += acc * coeff;
                }
            }
        }
        out
    })
}

/// The Itô drift of the Stratonovich system driven by standard Wiener noise:
/// f(x) = g₀(x) + ½ Σ_j (∂g_j/∂x)(x) g_j(x). Identical to `limit_drift`
/// with the Wiener rate matrix.
pub fn stratonovich_to_ito_drift(g: &VectorFieldSystem) -> Field {
    limit_drift(g, &RateMatrix::wiener(g.channels()))
}

fn plan_steps(horizon: f64, step: f64) -> Result<(usize, f64), DynamicsError> {
    if !(step > 0.0) || !(horizon > 0.0) {
        return Err(DynamicsError::InvalidStep {
            step,
            horizon,
        });
    }
    // round the count so the horizon is an integer number of equal cells
    let n = (horizon / step).ceil().max(1.0) as usize;
    Ok((n, horizon / n as f64))
}

/// Classical fixed-step RK4 solve of ẋ = drift(x).
pub fn ode_simulate<F>(
    drift: &F,
    x0: &[f64],
    horizon: f64,
    step: f64,
) -> Result<Trajectory, DynamicsError>
where
    F: Fn(&[f64]) -> Vec<f64> + ?Sized,
{
    ode_simulate_with(drift, x0, horizon, step, &SimOptions::default())
}

pub fn ode_simulate_with<F>(
    drift: &F,
    x0: &[f64],
    horizon: f64,
    step: f64,
    opts: &SimOptions,
) -> Result<Trajectory, DynamicsError>
where
    F: Fn(&[f64]) -> Vec<f64> + ?Sized,
{
    driven_simulate_impl(
        |_t, x| drift(x),
        x0,
        horizon,
        step,
        opts,
        "rk4",
        None,
    )
}

/// Step-halving endpoint error estimate for the RK4 solve.
pub fn ode_step_halving_error<F>(
    drift: &F,
    x0: &[f64],
    horizon: f64,
    step: f64,
) -> Result<f64, DynamicsError>
where
    F: Fn(&[f64]) -> Vec<f64> + ?Sized,
{
    let coarse = ode_simulate(drift, x0, horizon, step)?;
    let fine = ode_simulate(drift, x0, horizon, step / 2.0)?;
    Ok(coarse
        .endpoint()
        .iter()
        .zip(fine.endpoint())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// RK4 solve of the time-dependent classical form ẋ = Σ_j g_j(x) u̇[j](t),
/// used for finite-η drivers where u̇ is available analytically.
pub fn driven_simulate<U>(
    g: &VectorFieldSystem,
    u_dot: U,
    x0: &[f64],
    horizon: f64,
    step: f64,
    opts: &SimOptions,
) -> Result<Trajectory, DynamicsError>
where
    U: Fn(f64) -> Vec<f64>,
{
    let d = g.channels() + 1;
    let rhs = |t: f64, x: &[f64]| -> Vec<f64> {
        let du = u_dot(t);
        debug_assert_eq!(du.len(), d);
        let mut out = vec![0.0; x.len()];
        for (j, w) in du.iter().enumerate().take(d) {
            if *w != 0.0 {
                let gj = g.eval(j, x);
                for i in 0..out.len() {
                    out[i] += gj[i] * w;
                }
            }
        }
        out
    };
    driven_simulate_impl(rhs, x0, horizon, step, opts, "rk4-driven", None)
}

fn driven_simulate_impl<F>(
    rhs: F,
    x0: &[f64],
    horizon: f64,
    step: f64,
    opts: &SimOptions,
    integrator: &str,
    seed: Option<u64>,
) -> Result<Trajectory, DynamicsError>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    let (steps, h) = plan_steps(horizon, step)?;
    let n = x0.len();
    let mut x = x0.to_vec();
    check_state(&x, 0.0, opts)?;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(x.clone());
    let mut scratch = vec![0.0; n];
    for k in 0..steps {
        let t = k as f64 * h;
        let k1 = rhs(t, &x);
        for i in 0..n {
            scratch[i] = x[i] + 0.5 * h * k1[i];
        }
        let k2 = rhs(t + 0.5 * h, &scratch);
        for i in 0..n {
            scratch[i] = x[i] + 0.5 * h * k2[i];
        }
        let k3 = rhs(t + 0.5 * h, &scratch);
        for i in 0..n {
            scratch[i] = x[i] + h * k3[i];
        }
        let k4 = rhs(t + h, &scratch);
        for i in 0..n {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t_next = (k + 1) as f64 * h;
        check_state(&x, t_next, opts)?;
        times.push(t_next);
        states.push(x.clone());
    }
    Ok(Trajectory {
        times,
        states,
        meta: TrajectoryMeta {
            integrator: integrator.into(),
            step: h,
            seed,
        },
    })
}

/// Stochastic integral convention for `sde_simulate`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdeMode {
    /// Euler-Maruyama on dx = g₀ dt + Σ g_j dw[j], reading g₀ as the Itô
    /// drift.
    Ito,
    /// Midpoint-corrected Heun scheme on the Stratonovich form
    /// dx = g₀ dt + Σ g_j ∘ dw[j].
    Stratonovich,
}

/// Fixed-step SDE solve, deterministic per seed. Channel j draws from its
/// own splitmix64 stream keyed by (seed, j).
pub fn sde_simulate(
    g: &VectorFieldSystem,
    mode: SdeMode,
    x0: &[f64],
    horizon: f64,
    step: f64,
    seed: u64,
) -> Result<Trajectory, DynamicsError> {
    sde_simulate_with(g, mode, x0, horizon, step, seed, &SimOptions::default())
}

pub fn sde_simulate_with(
    g: &VectorFieldSystem,
    mode: SdeMode,
    x0: &[f64],
    horizon: f64,
    step: f64,
    seed: u64,
    opts: &SimOptions,
) -> Result<Trajectory, DynamicsError> {
    if x0.len() != g.state_dim() {
        return Err(DynamicsError::DimensionMismatch {
            expected: g.state_dim(),
            got: x0.len(),
        });
    }
    let (steps, h) = plan_steps(horizon, step)?;
    let n = g.state_dim();
    let m = g.channels();
    let sqrt_h = h.sqrt();
    let mut streams: Vec<GaussianStream> = (1..=m)
        .map(|j| GaussianStream::new(seed, j as u64))
        .collect();
    let mut x = x0.to_vec();
    check_state(&x, 0.0, opts)?;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(x.clone());
    let mut dw = vec![0.0; m];
    for k in 0..steps {
        for (j, s) in streams.iter_mut().enumerate() {
            dw[j] = sqrt_h * s.next();
        }
        match mode {
            SdeMode::Ito => {
                let drift = g.eval(0, &x);
                let mut dx: Vec<f64> = drift.iter().map(|v| v * h).collect();
                for j in 1..=m {
                    let gj = g.eval(j, &x);
                    for i in 0..n {
                        dx[i] += gj[i] * dw[j - 1];
                    }
                }
                for i in 0..n {
                    x[i] += dx[i];
                }
            }
            SdeMode::Stratonovich => {
                // predictor
                let drift = g.eval(0, &x);
                let mut pred = x.clone();
                for i in 0..n {
                    pred[i] += drift[i] * h;
                }
                for j in 1..=m {
                    let gj = g.eval(j, &x);
                    for i in 0..n {
                        pred[i] += gj[i] * dw[j - 1];
                    }
                }
                // corrector averages field evaluations at both ends
                let drift_p = g.eval(0, &pred);
                let mut dx: Vec<f64> = (0..n)
                    .map(|i| 0.5 * (drift[i] + drift_p[i]) * h)
                    .collect();
                for j in 1..=m {
                    let gj = g.eval(j, &x);
                    let gjp = g.eval(j, &pred);
                    for i in 0..n {
                        dx[i] += 0.5 * (gj[i] + gjp[i]) * dw[j - 1];
                    }
                }
                for i in 0..n {
                    x[i] += dx[i];
                }
            }
        }
        let t_next = (k + 1) as f64 * h;
        check_state(&x, t_next, opts)?;
        times.push(t_next);
        states.push(x.clone());
    }
    Ok(Trajectory {
        times,
        states,
        meta: TrajectoryMeta {
            integrator: match mode {
                SdeMode::Ito => "euler-maruyama".into(),
                SdeMode::Stratonovich => "stratonovich-heun".into(),
            },
            step: h,
            seed: Some(seed),
        },
    })
}

fn matvec(m: &[f64], x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        let mut acc = 0.0;
        for l in 0..n {
            acc += m[i * n + l] * x[l];
        }
        out[i] = acc;
    }
    out
}

fn euclid(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}
