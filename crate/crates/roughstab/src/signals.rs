//! Driving-signal generators and their exact level-2 lifts.
//!
//! Channel 0 of every driver is reserved for time (u[0](τ) = τ), so the
//! deterministic and stochastic drivers share one indexing convention with
//! the rate matrices.
//!
//! The oscillatory driver
//!
//! ```text
//! u(τ) = ( τ,  b₁(cos(η²τ) − 1)/η,  b₂ sin(η²τ)/η )
//! ```
//!
//! has amplitudes shrinking like 1/η while its level-2 cross integral
//! between the two oscillating channels converges to a constant rate
//! (b₁b₂/2)(t−s) — the Lévy area that survives the limit. Its lift is
//! computed from closed-form antiderivatives of sin/cos products rather than
//! quadrature, because the level-2 integrand oscillates at frequency η² and
//! would dominate any quadrature error budget.

use crate::paths::{lift_piecewise_linear, GridRoughPath, PathError, SampledPath};
use crate::rng::GaussianStream;
use crate::tensor::LevelTwoElement;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("frequency index eta must be at least 1")]
    ZeroEta,
    #[error("invalid interval: t = {t} precedes s = {s}")]
    InvalidInterval { s: f64, t: f64 },
    #[error("channel {channel} outside 0..{channels}")]
    ChannelRange { channel: usize, channels: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Tensor(#[from] crate::tensor::TensorError),
}

/// The oscillatory deterministic driver ũᴰ(η).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatoryNoise {
    pub b1: f64,
    pub b2: f64,
    pub eta: u32,
}

impl OscillatoryNoise {
    pub fn new(b1: f64, b2: f64, eta: u32) -> Result<Self, SignalError> {
        if eta == 0 {
            return Err(SignalError::ZeroEta);
        }
        Ok(Self { b1, b2, eta })
    }

    /// Signal value (t, b₁(cos(η²t)−1)/η, b₂ sin(η²t)/η).
    pub fn value(&self, t: f64) -> Vec<f64> {
        let eta = self.eta as f64;
        let theta = eta * eta * t;
        vec![
            t,
            self.b1 * (theta.cos() - 1.0) / eta,
            self.b2 * theta.sin() / eta,
        ]
    }

    /// Time derivative (1, −b₁η sin(η²t), b₂η cos(η²t)), used by the
    /// classical finite-η simulations.
    pub fn derivative(&self, t: f64) -> Vec<f64> {
        let eta = self.eta as f64;
        let theta = eta * eta * t;
        vec![1.0, -self.b1 * eta * theta.sin(), self.b2 * eta * theta.cos()]
    }

    /// Exact level-2 lift over [s, t] from closed-form antiderivatives.
    pub fn lift_exact(&self, s: f64, t: f64) -> Result<LevelTwoElement, SignalError> {
        if t < s {
            return Err(SignalError::InvalidInterval { s, t });
        }
        let eta = self.eta as f64;
        let (b1, b2) = (self.b1, self.b2);
        let w = eta * eta;
        let (cs, ss) = ((w * s).cos(), (w * s).sin());
        let (ct, st) = ((w * t).cos(), (w * t).sin());
        let d0 = t - s;
        let du1 = b1 * (ct - cs) / eta;
        let du2 = b2 * (st - ss) / eta;
        // primitive integrals over [s, t]
        let int_cos = (st - ss) / w;
        let int_sin = (cs - ct) / w;
        let double = ((2.0 * w * t).sin() - (2.0 * w * s).sin()) / (4.0 * w);
        let int_cos2 = d0 / 2.0 + double;
        let int_sin2 = d0 / 2.0 - double;
        let int_t_sin = -d0 * ct / w + (st - ss) / (w * w);
        let int_t_cos = d0 * st / w + (ct - cs) / (w * w);

        let level1 = vec![d0, du1, du2];
        let mut level2 = vec![0.0; 9];
        // diagonal entries are exact squares: ∫ (u_j − u_j(s)) du_j = Δ²/2
        level2[0] = d0 * d0 / 2.0;
        level2[4] = du1 * du1 / 2.0;
        level2[8] = du2 * du2 / 2.0;
        level2[1] = -b1 * eta * int_t_sin; // [0,1]: ∫ (τ−s) du₁
        level2[2] = b2 * eta * int_t_cos; // [0,2]: ∫ (τ−s) du₂
        level2[3] = (b1 / eta) * (int_cos - cs * d0); // [1,0]: ∫ (u₁−u₁(s)) dτ
        level2[6] = (b2 / eta) * (int_sin - ss * d0); // [2,0]
        level2[5] = b1 * b2 * (int_cos2 - cs * int_cos); // [1,2]
        level2[7] = -b1 * b2 * (int_sin2 - ss * int_sin); // [2,1]
        Ok(LevelTwoElement::new(level1, level2)?)
    }

    /// Uniform sampling of the signal on [0, horizon], `cells + 1` points.
    pub fn sample(&self, horizon: f64, cells: usize) -> Result<SampledPath, SignalError> {
        if cells == 0 || horizon <= 0.0 {
            return Err(SignalError::InvalidConfig(format!(
                "need horizon > 0 and cells >= 1, got horizon {horizon}, cells {cells}"
            )));
        }
        let times: Vec<f64> = (0..=cells)
            .map(|k| horizon * k as f64 / cells as f64)
            .collect();
        let values = times.iter().map(|&t| self.value(t)).collect();
        Ok(SampledPath::new(times, values)?)
    }

    /// Limit rate matrix of this driver's level-2 path.
    pub fn rate_matrix(&self) -> RateMatrix {
        RateMatrix::oscillatory(self.b1, self.b2)
    }
}

/// The η→∞ limit of the oscillatory lifts over [s, t]:
///
/// ```text
/// ( 1, (t−s, 0, 0), level2 )   with
/// level2[1,2] = (b₁b₂/2)(t−s) = −level2[2,1],
/// level2[0,0] = (t−s)²/2,      all other entries zero.
/// ```
///
/// The time⊗time entry is kept at its exact value (it is (t−s)²/2 for every
/// finite η and so also in the limit); it is what makes these elements
/// compose multiplicatively under the Chen product. Its *rate* per unit
/// time is still zero, which is why it never contributes to limit drifts.
pub fn limit_rough_path_oscillatory(
    b1: f64,
    b2: f64,
    s: f64,
    t: f64,
) -> Result<LevelTwoElement, SignalError> {
    if t < s {
        return Err(SignalError::InvalidInterval { s, t });
    }
    let d0 = t - s;
    let rate = b1 * b2 / 2.0;
    let level1 = vec![d0, 0.0, 0.0];
    let mut level2 = vec![0.0; 9];
    level2[0] = d0 * d0 / 2.0;
    level2[5] = rate * d0;
    level2[7] = -rate * d0;
    Ok(LevelTwoElement::new(level1, level2)?)
}

/// Configuration of a piecewise-linear approximate Wiener process. `cells`
/// doubles as the approximation index (N = η).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WienerConfig {
    /// Number of independent Wiener channels m (time channel excluded).
    pub channels: usize,
    /// Horizon T in seconds.
    pub horizon: f64,
    pub cells: usize,
    pub seed: u64,
}

impl WienerConfig {
    pub fn new(channels: usize, horizon: f64, cells: usize, seed: u64) -> Result<Self, SignalError> {
        if channels == 0 {
            return Err(SignalError::InvalidConfig("need at least one channel".into()));
        }
        if !(horizon > 0.0) {
            return Err(SignalError::InvalidConfig(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        if cells == 0 {
            return Err(SignalError::InvalidConfig("need at least one cell".into()));
        }
        Ok(Self {
            channels,
            horizon,
            cells,
            seed,
        })
    }
}

/// Draws discrete Wiener samples with independent Gaussian increments of
/// variance equal to the cell width, per channel, on the uniform grid, and
/// returns the sampled process (channel 0 carries time). The piecewise-
/// linear interpolation between these samples is the Wong-Zakai
/// approximation; `lift_piecewise_linear` provides its exact lift.
///
/// Each channel draws from its own splitmix64 stream, so the draws for
/// channel j do not depend on how many channels precede it.
pub fn wong_zakai_wiener(cfg: &WienerConfig) -> Result<SampledPath, SignalError> {
    let t_end = cfg.horizon;
    let n = cfg.cells;
    let m = cfg.channels;
    let dt = t_end / n as f64;
    let sqrt_dt = dt.sqrt();
    let mut values = vec![vec![0.0; m + 1]; n + 1];
    let mut times = vec![0.0; n + 1];
    for (k, t) in times.iter_mut().enumerate() {
        *t = t_end * k as f64 / n as f64;
        values[k][0] = *t;
    }
    for j in 1..=m {
        let mut stream = GaussianStream::new(cfg.seed, j as u64);
        let mut w = 0.0;
        for k in 1..=n {
            w += sqrt_dt * stream.next();
            values[k][j] = w;
        }
    }
    Ok(SampledPath::new(times, values)?)
}

/// Rate matrix Γ of a limit level-2 path: Γ[k,j] is the coefficient of
/// (t−s) in U²_{s,t}[k,j]. Index 0 is the time channel; its row and column
/// vanish at this order (dt⊗dt is order (t−s)²).
#[derive(Debug, Clone, PartialEq)]
pub struct RateMatrix {
    channels: usize,
    entries: Vec<f64>,
}

impl RateMatrix {
    /// Zero rates for m input channels.
    pub fn zero(channels: usize) -> Self {
        let d = channels + 1;
        Self {
            channels,
            entries: vec![0.0; d * d],
        }
    }

    /// Wiener limit rates: Γ[j,j] = 1/2 for j = 1..m, everything else zero.
    pub fn wiener(channels: usize) -> Self {
        let mut g = Self::zero(channels);
        let d = channels + 1;
        for j in 1..=channels {
            g.entries[j * d + j] = 0.5;
        }
        g
    }

    /// Oscillatory limit rates: Γ[1,2] = b₁b₂/2 = −Γ[2,1].
    pub fn oscillatory(b1: f64, b2: f64) -> Self {
        let mut g = Self::zero(2);
        let rate = b1 * b2 / 2.0;
        let d = g.dim();
        g.entries[d + 2] = rate; // [1,2]
        g.entries[2 * d + 1] = -rate; // [2,1]
        g
    }

    /// Number of input channels m; the matrix is (m+1)×(m+1).
    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn dim(&self) -> usize {
        self.channels + 1
    }

    pub fn at(&self, k: usize, j: usize) -> f64 {
        self.entries[k * self.dim() + j]
    }
}

/// Grid path with constant level-1 and level-2 rates: per cell of width h,
/// level 1 is (h, 0, ..., 0) and level 2 is Γ·h. This carries exactly the
/// drift-relevant content of a limit rough path; driving the rough Euler
/// scheme with it reproduces the explicit Euler scheme on the limit drift
/// step by step.
pub fn constant_rate_path(gamma: &RateMatrix, times: Vec<f64>) -> Result<GridRoughPath, SignalError> {
    if times.len() < 2 {
        return Err(SignalError::InvalidConfig(
            "constant-rate path needs at least two partition points".into(),
        ));
    }
    let d = gamma.dim();
    let mut increments = Vec::with_capacity(times.len() - 1);
    for k in 0..times.len() - 1 {
        let h = times[k + 1] - times[k];
        let mut level1 = vec![0.0; d];
        level1[0] = h;
        let mut level2 = vec![0.0; d * d];
        for r in 0..d {
            for c in 0..d {
                level2[r * d + c] = gamma.at(r, c) * h;
            }
        }
        increments.push(LevelTwoElement::new(level1, level2)?);
    }
    Ok(GridRoughPath::new(times, increments)?)
}

/// Lévy-area (antisymmetric) part of the whole-interval lift of a sampled
/// piecewise-linear signal: ½(L²[j,k] − L²[k,j]).
pub fn antisymmetric_area(signal: &SampledPath, j: usize, k: usize) -> Result<f64, SignalError> {
    let channels = signal.dim();
    for c in [j, k] {
        if c >= channels {
            return Err(SignalError::ChannelRange {
                channel: c,
                channels,
            });
        }
    }
    let lifted = lift_piecewise_linear(signal)?;
    let whole = lifted.increment(0, lifted.cells())?;
    Ok((whole.level2_at(j, k) - whole.level2_at(k, j)) / 2.0)
}
