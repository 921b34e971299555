//! Built-in case-study systems.

use crate::dynamics::{Field, MatrixField, VectorFieldSystem};
use std::sync::Arc;

/// The 2-D bilinear system
///
/// ```text
/// g₀(x) = [-7 0; 0 1] x,   g₁(x) = [0 0; 1 0] x,   g₂(x) = [0 1; -4 0] x.
/// ```
///
/// Its origin is unstable under g₀ alone; the two input channels stabilize
/// it, either through Wiener noise (Itô drift diag(-9, -1)) or through the
/// oscillatory driver with b₁b₂ ∈ (2, 14) (limit drift
/// ½ diag(-14 + b₁b₂, 2 − b₁b₂)).
pub fn motivational_2d() -> VectorFieldSystem {
    VectorFieldSystem::linear(
        2,
        vec![
            vec![-7.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 1.0, -4.0, 0.0],
        ],
    )
    .expect("motivational system matrices are well-formed")
}

/// The scalar system g₀ = 0, g₁(x) = 1, g₂(x) = −x². With the oscillatory
/// driver at b₁ = b₂ = 1 its limit system is ẋ = −x, while the same system
/// under Wiener noise keeps an additive diffusion term and its origin is
/// not even an equilibrium.
pub fn example_1d() -> VectorFieldSystem {
    let fields: Vec<Field> = vec![
        Arc::new(|_: &[f64]| vec![0.0]),
        Arc::new(|_: &[f64]| vec![1.0]),
        Arc::new(|x: &[f64]| vec![-x[0] * x[0]]),
    ];
    let jac0: MatrixField = Arc::new(|_: &[f64]| vec![0.0]);
    let jac1: MatrixField = Arc::new(|_: &[f64]| vec![0.0]);
    let jac2: MatrixField = Arc::new(|x: &[f64]| vec![-2.0 * x[0]]);
    VectorFieldSystem::new(1, fields)
        .expect("fields are non-empty")
        .with_jacobian(0, jac0)
        .with_jacobian(1, jac1)
        .with_jacobian(2, jac2)
}
