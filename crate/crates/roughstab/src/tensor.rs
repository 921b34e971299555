//! The truncated tensor algebra T²(ℝⁿ) = ℝ ⊕ ℝⁿ ⊕ (ℝⁿ ⊗ ℝⁿ).
//!
//! An element holds a scalar level 0, a vector level 1 and a matrix level 2.
//! The product truncates at level 2:
//!
//! ```text
//! (A ⊗ B)ᵏ = Σ_{l=0..k} Aˡ ⊗ Bᵏ⁻ˡ,   k = 0, 1, 2
//! ```
//!
//! Rough-path increments are elements with level 0 equal to one, and
//! increments over adjacent intervals compose by this product (Chen's
//! relation X_{s,τ} ⊗ X_{τ,t} = X_{s,t}).

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TensorError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("levels do not match dimension {dim}: level1 length {level1}, level2 length {level2}")]
    MalformedLevels {
        dim: usize,
        level1: usize,
        level2: usize,
    },
}

/// An element of T²(ℝⁿ). Level 2 is stored dense row-major; dimensions here
/// are tiny, so no sparse structure is warranted. Level 0 is stored rather
/// than implied so malformed data stays detectable.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelTwoElement {
    dim: usize,
    level0: f64,
    level1: Vec<f64>,
    level2: Vec<f64>,
}

impl LevelTwoElement {
    /// The neutral element (1, 0, 0) of the product.
    pub fn identity(dim: usize) -> Result<Self, TensorError> {
        if dim == 0 {
            return Err(TensorError::ZeroDimension);
        }
        Ok(Self {
            dim,
            level0: 1.0,
            level1: vec![0.0; dim],
            level2: vec![0.0; dim * dim],
        })
    }

    /// A multiplicative increment: level 0 is fixed to one.
    pub fn new(level1: Vec<f64>, level2: Vec<f64>) -> Result<Self, TensorError> {
        Self::from_parts(1.0, level1, level2)
    }

    pub fn from_parts(level0: f64, level1: Vec<f64>, level2: Vec<f64>) -> Result<Self, TensorError> {
        let dim = level1.len();
        if dim == 0 {
            return Err(TensorError::ZeroDimension);
        }
        if level2.len() != dim * dim {
            return Err(TensorError::MalformedLevels {
                dim,
                level1: level1.len(),
                level2: level2.len(),
            });
        }
        Ok(Self {
            dim,
            level0,
            level1,
            level2,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn level0(&self) -> f64 {
        self.level0
    }

    pub fn level1(&self) -> &[f64] {
        &self.level1
    }

    /// Row-major level-2 entries.
    pub fn level2(&self) -> &[f64] {
        &self.level2
    }

    pub fn level2_at(&self, i: usize, j: usize) -> f64 {
        self.level2[i * self.dim + j]
    }

    /// The truncated tensor product (A ⊗ B)ᵏ = Σ_{l≤k} Aˡ ⊗ Bᵏ⁻ˡ.
    pub fn product(&self, other: &Self) -> Result<Self, TensorError> {
        if self.dim != other.dim {
            return Err(TensorError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let level0 = self.level0 * other.level0;
        let mut level1 = vec![0.0; n];
        for i in 0..n {
            level1[i] = self.level0 * other.level1[i] + self.level1[i] * other.level0;
        }
        let mut level2 = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                level2[i * n + j] = self.level0 * other.level2[i * n + j]
                    + self.level1[i] * other.level1[j]
                    + self.level2[i * n + j] * other.level0;
            }
        }
        Ok(Self {
            dim: n,
            level0,
            level1,
            level2,
        })
    }

    /// Entrywise max-norm of the difference over levels 1 and 2. This is the
    /// one norm used throughout the crate; any norm is equivalent at these
    /// dimensions.
    pub fn max_norm_gap(&self, other: &Self) -> Result<f64, TensorError> {
        Ok(self.level1_gap(other)?.max(self.level2_gap(other)?))
    }

    /// Max-norm of the level-1 difference.
    pub fn level1_gap(&self, other: &Self) -> Result<f64, TensorError> {
        self.check_dim(other)?;
        Ok(self
            .level1
            .iter()
            .zip(&other.level1)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Max-norm of the level-2 difference.
    pub fn level2_gap(&self, other: &Self) -> Result<f64, TensorError> {
        self.check_dim(other)?;
        Ok(self
            .level2
            .iter()
            .zip(&other.level2)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
    }

    fn check_dim(&self, other: &Self) -> Result<(), TensorError> {
        if self.dim != other.dim {
            return Err(TensorError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }
}

/// Max-norm of X_{s,τ} ⊗ X_{τ,t} − X_{s,t} over levels 1 and 2; zero exactly
/// when Chen's relation holds on the triple.
pub fn chen_defect(
    x_st: &LevelTwoElement,
    x_tu: &LevelTwoElement,
    x_su: &LevelTwoElement,
) -> Result<f64, TensorError> {
    x_st.product(x_tu)?.max_norm_gap(x_su)
}
