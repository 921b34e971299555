//! Rough Lyapunov analysis.
//!
//! Lie derivatives of a scalar candidate v along vector fields, the
//! diffusion generator of Wiener-driven systems, the zero-Lie-derivative
//! condition that characterizes uniform almost sure asymptotic stability,
//! and grid-certified stability verdicts for limit systems.
//!
//! Verdicts are certified on a finite log-radial grid, not proved
//! symbolically; strict verdicts are therefore labeled "up to tested
//! radius". Sign checks use a fixed tolerance that separates rounding noise
//! from genuine indefiniteness at desk scale.

use crate::dynamics::VectorFieldSystem;
use crate::rng::GaussianStream;
use std::fmt;
use std::io::Write;
use std::sync::Arc;
use thiserror::Error;

/// Sign tolerance for pointwise checks on the grid.
pub const SIGN_TOL: f64 = 1e-9;
/// A fitted decay coefficient below this is treated as zero.
pub const MIN_DECAY: f64 = 1e-6;
/// Residual allowed for the equilibrium check at the origin.
pub const EQUILIBRIUM_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum LyapunovError {
    #[error("point lies outside the candidate's domain")]
    OutsideDomain,
    #[error("grid is empty")]
    EmptyGrid,
    #[error("grid specification invalid: {0}")]
    InvalidGrid(String),
    #[error(transparent)]
    Dynamics(#[from] crate::dynamics::DynamicsError),
}

/// Evaluation domain of a candidate function; must contain the origin.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    All,
    Ball { radius: f64 },
    Box { half_widths: Vec<f64> },
}

impl Domain {
    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Domain::All => true,
            Domain::Ball { radius } => euclid(x) <= *radius,
            Domain::Box { half_widths } => x
                .iter()
                .zip(half_widths)
                .all(|(xi, w)| xi.abs() <= *w),
        }
    }
}

/// A scalar candidate v: ℝⁿ → ℝ with gradient access, analytic when
/// provided and central finite differences otherwise.
#[derive(Clone)]
pub struct ScalarFunction {
    f: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    gradient: Option<Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>>,
    domain: Domain,
    fd_scale: f64,
}

impl ScalarFunction {
    pub fn new(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            f: Arc::new(f),
            gradient: None,
            domain: Domain::All,
            fd_scale: 1e-6,
        }
    }

    pub fn with_gradient(
        mut self,
        grad: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.gradient = Some(Arc::new(grad));
        self
    }

    pub fn with_domain(mut self, domain: Domain) -> Self {
        self.domain = domain;
        self
    }

    /// The quadratic candidate v(x) = xᵀx with its analytic gradient.
    pub fn quadratic() -> Self {
        Self::new(|x: &[f64]| x.iter().map(|v| v * v).sum::<f64>())
            .with_gradient(|x: &[f64]| x.iter().map(|v| 2.0 * v).collect())
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    pub fn grad(&self, x: &[f64]) -> Vec<f64> {
        match &self.gradient {
            Some(g) => g(x),
            None => {
                let h = self.fd_scale * euclid(x).max(1.0);
                let mut out = vec![0.0; x.len()];
                let mut xp = x.to_vec();
                let mut xm = x.to_vec();
                for i in 0..x.len() {
                    xp[i] = x[i] + h;
                    xm[i] = x[i] - h;
                    out[i] = ((self.f)(&xp) - (self.f)(&xm)) / (2.0 * h);
                    xp[i] = x[i];
                    xm[i] = x[i];
                }
                out
            }
        }
    }

    fn check_domain(&self, x: &[f64]) -> Result<(), LyapunovError> {
        if self.domain.contains(x) {
            Ok(())
        } else {
            Err(LyapunovError::OutsideDomain)
        }
    }
}

/// Lie derivative (L_g v)(x) = ∇v(x) · g(x).
pub fn lie_derivative<G>(v: &ScalarFunction, g: &G, x: &[f64]) -> Result<f64, LyapunovError>
where
    G: Fn(&[f64]) -> Vec<f64> + ?Sized,
{
    v.check_domain(x)?;
    let grad = v.grad(x);
    let gx = g(x);
    Ok(dot(&grad, &gx))
}

/// Outer central-difference step for nested differentiation. Differencing a
/// quantity that itself carries O(eps/h) rounding noise needs a step near
/// eps^(1/4), much wider than the first-order optimum.
const NESTED_FD_SCALE: f64 = 1e-4;

/// Second Lie derivative (L_gk L_gj v)(x) = ∇(L_gj v)(x) · g_k(x). The inner
/// gradient uses the candidate's analytic gradient when available; the outer
/// gradient is by central differences either way.
pub fn second_lie_derivative<GJ, GK>(
    v: &ScalarFunction,
    gj: &GJ,
    gk: &GK,
    x: &[f64],
) -> Result<f64, LyapunovError>
where
    GJ: Fn(&[f64]) -> Vec<f64> + ?Sized,
    GK: Fn(&[f64]) -> Vec<f64> + ?Sized,
{
    v.check_domain(x)?;
    let h = NESTED_FD_SCALE * euclid(x).max(1.0);
    let inner = |y: &[f64]| dot(&v.grad(y), &gj(y));
    let mut grad_inner = vec![0.0; x.len()];
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    for i in 0..x.len() {
        xp[i] = x[i] + h;
        xm[i] = x[i] - h;
        grad_inner[i] = (inner(&xp) - inner(&xm)) / (2.0 * h);
        xp[i] = x[i];
        xm[i] = x[i];
    }
    Ok(dot(&grad_inner, &gk(x)))
}

/// Derivative of v along a limit drift: (DV)(x) = ∇v(x) · drift(x).
pub fn dv_along_limit<D>(v: &ScalarFunction, drift: &D, x: &[f64]) -> Result<f64, LyapunovError>
where
    D: Fn(&[f64]) -> Vec<f64> + ?Sized,
{
    lie_derivative(v, drift, x)
}

/// Generator of v along the Wiener-driven (Stratonovich) system:
///
/// ```text
/// (Lv)(x) = (L_g0 v)(x) + ½ Σ_{j=1..m} (L_gj L_gj v)(x)
/// ```
///
/// The ½ factor is the diagonal Wiener level-2 rate; the Monte Carlo
/// generator estimate in the acceptance suite pins this convention.
pub fn stochastic_generator(
    v: &ScalarFunction,
    g: &VectorFieldSystem,
    x: &[f64],
) -> Result<f64, LyapunovError> {
    let mut acc = lie_derivative(v, &|y: &[f64]| g.eval(0, y), x)?;
    for j in 1..=g.channels() {
        let gj = |y: &[f64]| g.eval(j, y);
        acc += 0.5 * second_lie_derivative(v, &gj, &gj, x)?;
    }
    Ok(acc)
}

/// Outcome of the zero-Lie-derivative check.
#[derive(Debug, Clone, PartialEq)]
pub struct UasasCheck {
    pub holds: bool,
    /// First violating (channel, point, value), if any.
    pub witness: Option<UasasWitness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UasasWitness {
    pub channel: usize,
    pub point: Vec<f64>,
    pub value: f64,
}

/// Checks (L_gj v)(x) = 0 for every input channel j at every grid point.
/// This is the algebraic hallmark of uniform almost sure asymptotic
/// stability under Wiener noise: only when it holds does the stochastic
/// system's v-derivative reduce to a deterministic rate.
pub fn check_uasas_condition(
    v: &ScalarFunction,
    g: &VectorFieldSystem,
    grid: &[Vec<f64>],
) -> Result<UasasCheck, LyapunovError> {
    if grid.is_empty() {
        return Err(LyapunovError::EmptyGrid);
    }
    for x in grid {
        for j in 1..=g.channels() {
            let value = lie_derivative(v, &|y: &[f64]| g.eval(j, y), x)?;
            if value.abs() > SIGN_TOL {
                return Ok(UasasCheck {
                    holds: false,
                    witness: Some(UasasWitness {
                        channel: j,
                        point: x.clone(),
                        value,
                    }),
                });
            }
        }
    }
    Ok(UasasCheck {
        holds: true,
        witness: None,
    })
}

/// Log-radial grid specification: `directions` rays, `shells` radii spaced
/// geometrically in [r_min, r_max]. Points within `local_radius` form the
/// local tier.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub directions: usize,
    pub shells: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub local_radius: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            directions: 24,
            shells: 40,
            r_min: 1e-3,
            r_max: 10.0,
            local_radius: 1.0,
        }
    }
}

impl GridSpec {
    /// Punctured grid points in dimension `dim`. One dimension uses the two
    /// rays, two dimensions uses equally spaced angles (so the coordinate
    /// axes appear exactly when `directions` is a multiple of 4), and higher
    /// dimensions draw a fixed set of seeded directions.
    pub fn points(&self, dim: usize) -> Result<Vec<Vec<f64>>, LyapunovError> {
        if dim == 0 || self.shells == 0 || self.directions == 0 {
            return Err(LyapunovError::InvalidGrid(
                "need dim, shells, directions >= 1".into(),
            ));
        }
        if !(self.r_min > 0.0) || self.r_max < self.r_min {
            return Err(LyapunovError::InvalidGrid(format!(
                "need 0 < r_min <= r_max, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        let dirs: Vec<Vec<f64>> = match dim {
            1 => vec![vec![1.0], vec![-1.0]],
            2 => (0..self.directions)
                .map(|k| {
                    let th = 2.0 * std::f64::consts::PI * k as f64 / self.directions as f64;
                    // snap the ~1e-16 trig residue so axis rays are exact
                    let snap = |c: f64| if c.abs() < 1e-15 { 0.0 } else { c };
                    vec![snap(th.cos()), snap(th.sin())]
                })
                .collect(),
            _ => {
                let mut stream = GaussianStream::new(0x6c79_6170, 0);
                (0..self.directions)
                    .map(|_| {
                        loop {
                            let d: Vec<f64> = (0..dim).map(|_| stream.next()).collect();
                            let n = euclid(&d);
                            if n > 1e-6 {
                                return d.iter().map(|v| v / n).collect();
                            }
                        }
                    })
                    .collect()
            }
        };
        let ratio = if self.shells == 1 {
            1.0
        } else {
            (self.r_max / self.r_min).powf(1.0 / (self.shells - 1) as f64)
        };
        let mut pts = Vec::with_capacity(dirs.len() * self.shells);
        for s in 0..self.shells {
            let r = self.r_min * ratio.powi(s as i32);
            for d in &dirs {
                pts.push(d.iter().map(|v| v * r).collect());
            }
        }
        Ok(pts)
    }
}

/// Stability tier of the certified verdict, ordered by strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    NotCertified,
    StableInRoughness,
    LocallyAsir,
    GloballyAsir,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NotCertified => write!(f, "not-certified"),
            Verdict::StableInRoughness => write!(f, "stable-in-roughness"),
            Verdict::LocallyAsir => write!(f, "locally-ASiR"),
            Verdict::GloballyAsir => write!(f, "globally-ASiR (up to tested radius)"),
        }
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSample {
    pub point: Vec<f64>,
    pub dv: f64,
    pub violation: bool,
}

/// Outcome of the grid-certified stability analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub verdict: Verdict,
    pub samples: Vec<GridSample>,
    /// Max of DV over the punctured grid.
    pub worst_value: f64,
    /// Min of −DV/|x|² over the grid (the decay-rate surrogate).
    pub margin: f64,
    /// Least-squares constant fit of −DV/|x|² over the grid.
    pub fitted_c: f64,
    /// Fitted quadratic sandwich (min, max) of v/|x|² on the grid.
    pub sandwich: (f64, f64),
    pub tested_radius: f64,
    pub reason: Option<String>,
}

impl StabilityReport {
    pub fn verdict_line(&self) -> String {
        match &self.reason {
            Some(r) => format!("verdict: {} ({r})", self.verdict),
            None => format!(
                "verdict: {} [worst DV = {:.6e}, margin = {:.6e}, radius = {}]",
                self.verdict, self.worst_value, self.margin, self.tested_radius
            ),
        }
    }

    /// Report CSV: synthetic strictly increasing index column first so the
    /// file round-trips through the sampled-path reader, then the point
    /// coordinates, the DV value, and the violation flag.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "# verdict={}", self.verdict)?;
        if let Some(r) = &self.reason {
            writeln!(w, "# reason={r}")?;
        }
        let dim = self.samples.first().map_or(0, |s| s.point.len());
        write!(w, "t")?;
        for i in 1..=dim {
            write!(w, ",x{i}")?;
        }
        writeln!(w, ",dv,violation")?;
        for (k, s) in self.samples.iter().enumerate() {
            write!(w, "{k}")?;
            for c in &s.point {
                write!(w, ",{c}")?;
            }
            writeln!(w, ",{},{}", s.dv, if s.violation { 1 } else { 0 })?;
        }
        Ok(())
    }
}

/// Grid-certified stability analysis of a limit drift with candidate v.
///
/// The origin must be an equilibrium of the drift (within
/// [`EQUILIBRIUM_TOL`]); a nonzero drift at the origin is the finite-η
/// phenomenon where the origin is not an equilibrium at all, and yields
/// `not-certified` with the residual recorded. On the punctured grid the
/// verdict tiers are:
///
/// - `stable-in-roughness` if DV ≤ tol everywhere;
/// - `locally-ASiR` if additionally −DV/|x|² stays ≥ [`MIN_DECAY`] on the
///   shells within `local_radius`;
/// - `globally-ASiR (up to tested radius)` if the decay bound holds on the
///   whole grid.
pub fn check_asir<D>(
    v: &ScalarFunction,
    drift: &D,
    dim: usize,
    grid: &GridSpec,
) -> Result<StabilityReport, LyapunovError>
where
    D: Fn(&[f64]) -> Vec<f64> + ?Sized,
{
    let origin = vec![0.0; dim];
    if !v.domain.contains(&origin) {
        return Err(LyapunovError::InvalidGrid(
            "candidate domain must contain the origin".into(),
        ));
    }
    let points = grid.points(dim)?;
    let not_certified = |reason: String, samples: Vec<GridSample>| StabilityReport {
        verdict: Verdict::NotCertified,
        worst_value: samples.iter().map(|s| s.dv).fold(f64::NEG_INFINITY, f64::max),
        margin: f64::NEG_INFINITY,
        fitted_c: 0.0,
        sandwich: (0.0, 0.0),
        tested_radius: grid.r_max,
        samples,
        reason: Some(reason),
    };

    let drift0 = drift(&origin);
    let residual = euclid(&drift0);
    if residual > EQUILIBRIUM_TOL {
        return Ok(not_certified(
            format!("origin is not an equilibrium: |drift(0)| = {residual:.3e}"),
            Vec::new(),
        ));
    }
    let v0 = v.eval(&origin);
    if v0.abs() > SIGN_TOL {
        return Ok(not_certified(
            format!("candidate is not zero at the origin: v(0) = {v0:.3e}"),
            Vec::new(),
        ));
    }

    let mut samples = Vec::with_capacity(points.len());
    let mut worst = f64::NEG_INFINITY;
    let mut sandwich = (f64::INFINITY, f64::NEG_INFINITY);
    let mut margin_local = f64::INFINITY;
    let mut margin_global = f64::INFINITY;
    let mut ratio_sum = 0.0;
    let mut any_violation = false;
    for x in &points {
        let dv = dv_along_limit(v, drift, x)?;
        let r2 = x.iter().map(|c| c * c).sum::<f64>();
        let vr = v.eval(x) / r2;
        sandwich.0 = sandwich.0.min(vr);
        sandwich.1 = sandwich.1.max(vr);
        let ratio = -dv / r2;
        ratio_sum += ratio;
        margin_global = margin_global.min(ratio);
        if r2.sqrt() <= grid.local_radius * (1.0 + 1e-12) {
            margin_local = margin_local.min(ratio);
        }
        let violation = dv > SIGN_TOL;
        any_violation |= violation;
        worst = worst.max(dv);
        samples.push(GridSample {
            point: x.clone(),
            dv,
            violation,
        });
    }
    let fitted_c = ratio_sum / points.len() as f64;

    if sandwich.0 <= SIGN_TOL {
        let mut report = not_certified(
            format!(
                "candidate is not positive definite on the grid: min v/|x|^2 = {:.3e}",
                sandwich.0
            ),
            samples,
        );
        report.sandwich = sandwich;
        return Ok(report);
    }

    let verdict = if any_violation {
        Verdict::NotCertified
    } else if margin_local >= MIN_DECAY && margin_global >= MIN_DECAY {
        Verdict::GloballyAsir
    } else if margin_local >= MIN_DECAY {
        Verdict::LocallyAsir
    } else {
        Verdict::StableInRoughness
    };
    Ok(StabilityReport {
        verdict,
        samples,
        worst_value: worst,
        margin: margin_global,
        fitted_c,
        sandwich,
        tested_radius: grid.r_max,
        reason: if any_violation {
            Some("DV is positive somewhere on the grid".into())
        } else {
            None
        },
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn euclid(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::limit_drift;
    use crate::signals::RateMatrix;
    use crate::systems::{example_1d, motivational_2d};

    fn quadratic() -> ScalarFunction {
        ScalarFunction::quadratic()
    }

    #[test]
    fn lie_derivative_hand_values() {
        let v = quadratic();
        // g(x) = A1 x with A1 = [0 0; 1 0]: L_g v = 2 x1 x2
        let g1 = |x: &[f64]| vec![0.0, x[0]];
        assert!((lie_derivative(&v, &g1, &[1.0, 1.0]).unwrap() - 2.0).abs() < 1e-12);

        // rotation field: skew-symmetric, derivative vanishes
        let rot = |x: &[f64]| vec![-x[1], x[0]];
        for p in [[1.0, 0.5], [-2.0, 3.0], [0.1, -0.4]] {
            assert!(lie_derivative(&v, &rot, &p).unwrap().abs() < 1e-12);
        }

        let zero = |_: &[f64]| vec![0.0, 0.0];
        assert_eq!(lie_derivative(&v, &zero, &[3.0, -1.0]).unwrap(), 0.0);
    }

    #[test]
    fn lie_derivative_respects_domain() {
        let v = quadratic().with_domain(Domain::Ball { radius: 1.0 });
        let g = |x: &[f64]| vec![x[0], x[1]];
        assert!(matches!(
            lie_derivative(&v, &g, &[2.0, 0.0]),
            Err(LyapunovError::OutsideDomain)
        ));
    }

    #[test]
    fn second_lie_derivative_hand_values() {
        let v = quadratic();
        // g1(x) = A1 x: L_g1 v = 2 x1 x2, then grad·g1 = (2x2, 2x1)·(0, x1) = 2x1²
        let g1 = |x: &[f64]| vec![0.0, x[0]];
        let got = second_lie_derivative(&v, &g1, &g1, &[1.0, 0.0]).unwrap();
        assert!((got - 2.0).abs() < 1e-6, "got {got}");

        // g2(x) = A2 x with A2 = [0 1; -4 0]: L_g2 L_g2 v = -6x2² + 24x1²
        let g2 = |x: &[f64]| vec![x[1], -4.0 * x[0]];
        let got = second_lie_derivative(&v, &g2, &g2, &[1.0, 1.0]).unwrap();
        assert!((got - 18.0).abs() < 1e-5, "got {got}");

        let zero = |_: &[f64]| vec![0.0, 0.0];
        assert_eq!(
            second_lie_derivative(&v, &g2, &zero, &[1.0, 1.0]).unwrap(),
            0.0
        );
    }

    #[test]
    fn dv_along_limit_quadratic_forms() {
        let v = quadratic();
        let decay = |x: &[f64]| vec![-x[0], -5.0 * x[1]];
        let got = dv_along_limit(&v, &decay, &[1.0, 1.0]).unwrap();
        assert!((got + 12.0).abs() < 1e-12); // -2x1² - 10x2²

        // boundary case diag(-6, 0): zero along the x2-axis
        let boundary = |x: &[f64]| vec![-6.0 * x[0], 0.0];
        assert!((dv_along_limit(&v, &boundary, &[1.0, 0.0]).unwrap() + 12.0).abs() < 1e-12);
        assert_eq!(dv_along_limit(&v, &boundary, &[0.0, 2.0]).unwrap(), 0.0);

        let zero = |_: &[f64]| vec![0.0, 0.0];
        assert_eq!(dv_along_limit(&v, &zero, &[1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn generator_matches_hand_computation() {
        // (-14x1² + 2x2²) + ½(2x1²) + ½(-6x2² + 24x1²) = -x1² - x2²
        let v = quadratic();
        let g = motivational_2d();
        for p in [[1.0, 1.0], [0.5, -0.25], [-2.0, 3.0]] {
            let want = -(p[0] * p[0] + p[1] * p[1]);
            let got = stochastic_generator(&v, &g, &p).unwrap();
            assert!((got - want).abs() < 1e-5, "at {p:?}: {got} vs {want}");
        }
    }

    #[test]
    fn generator_without_diffusion_reduces_to_drift_term() {
        use crate::dynamics::{Field, VectorFieldSystem};
        use std::sync::Arc;
        let fields: Vec<Field> = vec![
            Arc::new(|x: &[f64]| vec![-x[0]]),
            Arc::new(|_: &[f64]| vec![0.0]),
        ];
        let g = VectorFieldSystem::new(1, fields).unwrap();
        let v = quadratic();
        let got = stochastic_generator(&v, &g, &[2.0]).unwrap();
        assert!((got + 8.0).abs() < 1e-9); // L_g0 v = 2x·(-x) = -2x²
    }

    #[test]
    fn generator_is_rate_weighted_second_order_sum() {
        // independent route: L_g0 v + Σ Γ[k,j] L_gk L_gj v with Wiener rates
        let v = quadratic();
        let g = motivational_2d();
        let gamma = RateMatrix::wiener(g.channels());
        for p in [[1.0, 1.0], [0.3, -0.8]] {
            let direct = stochastic_generator(&v, &g, &p).unwrap();
            let mut indirect = lie_derivative(&v, &|y: &[f64]| g.eval(0, y), &p).unwrap();
            for j in 0..=g.channels() {
                for k in 0..=g.channels() {
                    let c = gamma.at(k, j);
                    if c != 0.0 {
                        let gj = |y: &[f64]| g.eval(j, y);
                        let gk = |y: &[f64]| g.eval(k, y);
                        indirect += c * second_lie_derivative(&v, &gj, &gk, &p).unwrap();
                    }
                }
            }
            assert!((direct - indirect).abs() < 1e-12);
        }
    }

    #[test]
    fn uasas_condition_cases() {
        let v = quadratic();
        let g = motivational_2d();
        let grid = vec![vec![1.0, 1.0], vec![0.5, -0.5]];
        let out = check_uasas_condition(&v, &g, &grid).unwrap();
        assert!(!out.holds);
        let w = out.witness.unwrap();
        assert_eq!(w.channel, 1);
        assert_eq!(w.point, vec![1.0, 1.0]);
        assert!((w.value - 2.0).abs() < 1e-12); // L_g1 v = 2 x1 x2

        // rotation diffusion: condition holds
        use crate::dynamics::{Field, VectorFieldSystem};
        use std::sync::Arc;
        let fields: Vec<Field> = vec![
            Arc::new(|x: &[f64]| vec![-x[0], -x[1]]),
            Arc::new(|x: &[f64]| vec![-x[1], x[0]]),
        ];
        let rot = VectorFieldSystem::new(2, fields).unwrap();
        let out = check_uasas_condition(&v, &rot, &grid).unwrap();
        assert!(out.holds && out.witness.is_none());

        assert!(matches!(
            check_uasas_condition(&v, &g, &[]),
            Err(LyapunovError::EmptyGrid)
        ));
    }

    #[test]
    fn asir_verdict_tiers() {
        let v = quadratic();
        let grid = GridSpec::default();

        let decay = |x: &[f64]| vec![-x[0], -5.0 * x[1]];
        let report = check_asir(&v, &decay, 2, &grid).unwrap();
        assert_eq!(report.verdict, Verdict::GloballyAsir);
        assert!(report.margin >= 2.0 - 1e-9);
        assert!(report.worst_value <= 0.0);

        // boundary: semidefinite only
        let boundary = |x: &[f64]| vec![-6.0 * x[0], 0.0];
        let report = check_asir(&v, &boundary, 2, &grid).unwrap();
        assert_eq!(report.verdict, Verdict::StableInRoughness);

        // unstable scalar drift
        let unstable = |x: &[f64]| vec![x[0]];
        let report = check_asir(&v, &unstable, 1, &grid).unwrap();
        assert_eq!(report.verdict, Verdict::NotCertified);
        assert!(report.samples.iter().any(|s| s.violation));
    }

    #[test]
    fn asir_requires_equilibrium_at_origin() {
        let v = quadratic();
        let shifted = |x: &[f64]| vec![-x[0] + 0.1];
        let report = check_asir(&v, &shifted, 1, &GridSpec::default()).unwrap();
        assert_eq!(report.verdict, Verdict::NotCertified);
        assert!(report.reason.unwrap().contains("not an equilibrium"));
    }

    #[test]
    fn asir_scale_covariance() {
        // doubling v doubles every DV value and changes no verdict
        let v = quadratic();
        let v2 = ScalarFunction::new(|x: &[f64]| 2.0 * x.iter().map(|c| c * c).sum::<f64>())
            .with_gradient(|x: &[f64]| x.iter().map(|c| 4.0 * c).collect());
        let drift = |x: &[f64]| vec![-x[0], -5.0 * x[1]];
        let grid = GridSpec {
            directions: 8,
            shells: 10,
            ..GridSpec::default()
        };
        let a = check_asir(&v, &drift, 2, &grid).unwrap();
        let b = check_asir(&v2, &drift, 2, &grid).unwrap();
        assert_eq!(a.verdict, b.verdict);
        for (sa, sb) in a.samples.iter().zip(&b.samples) {
            assert!((2.0 * sa.dv - sb.dv).abs() < 1e-9 * sb.dv.abs().max(1.0));
        }
    }

    #[test]
    fn asir_verdicts_on_motivational_limits() {
        let v = quadratic();
        let g = motivational_2d();
        let grid = GridSpec::default();

        let report = check_asir(&v, &*limit_drift(&g, &RateMatrix::oscillatory(3.0, 4.0)), 2, &grid)
            .unwrap();
        assert_eq!(report.verdict, Verdict::GloballyAsir);

        // b1 b2 = 2 and 14: strict verdicts refused
        for (b1, b2) in [(1.0, 2.0), (2.0, 7.0)] {
            let report =
                check_asir(&v, &*limit_drift(&g, &RateMatrix::oscillatory(b1, b2)), 2, &grid)
                    .unwrap();
            assert_eq!(report.verdict, Verdict::StableInRoughness, "b1b2={}", b1 * b2);
        }
    }

    #[test]
    fn asir_1d_limit_of_example_system() {
        let v = quadratic();
        let g = example_1d();
        let drift = limit_drift(&g, &RateMatrix::oscillatory(1.0, 1.0));
        let report = check_asir(&v, &*drift, 1, &GridSpec::default()).unwrap();
        assert_eq!(report.verdict, Verdict::GloballyAsir);
    }

    #[test]
    fn report_csv_round_trips_through_sampled_path_reader() {
        let v = quadratic();
        let drift = |x: &[f64]| vec![-x[0], -5.0 * x[1]];
        let grid = GridSpec {
            directions: 4,
            shells: 3,
            ..GridSpec::default()
        };
        let report = check_asir(&v, &drift, 2, &grid).unwrap();
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let parsed = crate::paths::SampledPath::read_csv_str(&text).unwrap();
        assert_eq!(parsed.len(), report.samples.len());
        assert_eq!(parsed.dim(), 4); // x1, x2, dv, violation
    }

    #[test]
    fn grid_contains_exact_axes_in_2d() {
        let grid = GridSpec::default().points(2).unwrap();
        assert!(grid
            .iter()
            .any(|p| p[0] == 0.0 && p[1] > 0.0));
        assert_eq!(grid.len(), 24 * 40);
    }
}
