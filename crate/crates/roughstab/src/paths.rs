//! Sampled paths and rough paths on time partitions.
//!
//! A [`SampledPath`] is a vector-valued signal on a strictly increasing time
//! grid. A [`GridRoughPath`] stores one level-2 increment per grid cell;
//! increments over wider intervals are recovered by Chen products, so the
//! stored representation is increment-native rather than absolute.
//!
//! p-variation and the level-2 path distance restrict their suprema to
//! subdivisions through the stored sample points (dynamic programming over
//! the grid, O(N²)). Both are therefore lower bounds for the continuous-time
//! suprema; for piecewise-linear paths at p = 1 the grid value is exact at
//! segment breakpoints.

use crate::tensor::{LevelTwoElement, TensorError};
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PathError {
    #[error("path needs at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("times must be strictly increasing (violated at index {index})")]
    NonIncreasingTimes { index: usize },
    #[error("times and values lengths differ: {times} vs {values}")]
    LengthMismatch { times: usize, values: usize },
    #[error("sample dimension changes at index {index}")]
    RaggedValues { index: usize },
    #[error("cell range [{from}, {to}] outside 0..={cells}")]
    CellRange { from: usize, to: usize, cells: usize },
    #[error("invalid exponent: need {requirement}, got {got}")]
    InvalidExponent { requirement: &'static str, got: f64 },
    #[error("rough paths must share the same partition and dimension")]
    PartitionMismatch,
    #[error("csv line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// A signal sampled on a strictly increasing time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPath {
    times: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl SampledPath {
    pub fn new(times: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self, PathError> {
        if times.is_empty() {
            return Err(PathError::TooFewSamples { needed: 1, got: 0 });
        }
        if times.len() != values.len() {
            return Err(PathError::LengthMismatch {
                times: times.len(),
                values: values.len(),
            });
        }
        for k in 1..times.len() {
            if !(times[k] > times[k - 1]) {
                return Err(PathError::NonIncreasingTimes { index: k });
            }
        }
        let dim = values[0].len();
        if dim == 0 {
            return Err(PathError::RaggedValues { index: 0 });
        }
        for (k, v) in values.iter().enumerate() {
            if v.len() != dim {
                return Err(PathError::RaggedValues { index: k });
            }
        }
        Ok(Self { times, values })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.values[0].len()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn value(&self, k: usize) -> &[f64] {
        &self.values[k]
    }

    /// Reads the `t,x1,...,xn` schema. Lines starting with `#` and blank
    /// lines are skipped; the first remaining line must be a header whose
    /// first field is `t`.
    pub fn read_csv<R: BufRead>(reader: R) -> Result<Self, PathError> {
        let mut times = Vec::new();
        let mut values = Vec::new();
        let mut columns = None;
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
            match columns {
                None => {
                    if fields.first() != Some(&"t") || fields.len() < 2 {
                        return Err(PathError::Csv {
                            line: lineno,
                            message: format!("expected header `t,x1,...`, got `{trimmed}`"),
                        });
                    }
                    columns = Some(fields.len());
                }
                Some(cols) => {
                    if fields.len() != cols {
                        return Err(PathError::Csv {
                            line: lineno,
                            message: format!("expected {cols} fields, got {}", fields.len()),
                        });
                    }
                    let mut row = Vec::with_capacity(cols);
                    for f in &fields {
                        row.push(f.parse::<f64>().map_err(|e| PathError::Csv {
                            line: lineno,
                            message: format!("bad number `{f}`: {e}"),
                        })?);
                    }
                    times.push(row[0]);
                    values.push(row[1..].to_vec());
                }
            }
        }
        if columns.is_none() {
            return Err(PathError::Csv {
                line: 0,
                message: "missing header".into(),
            });
        }
        Self::new(times, values)
    }

    pub fn read_csv_str(text: &str) -> Result<Self, PathError> {
        Self::read_csv(text.as_bytes())
    }

    /// Writes the `t,x1,...,xn` schema. Values print in Rust's shortest
    /// round-trip form, so re-reading reproduces the exact bits.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<(), PathError> {
        write!(w, "t")?;
        for i in 1..=self.dim() {
            write!(w, ",x{i}")?;
        }
        writeln!(w)?;
        for (t, row) in self.times.iter().zip(&self.values) {
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

/// A level-2 rough path sampled on a partition, stored as consecutive cell
/// increments; `increments[k]` represents the increment over
/// `[times[k], times[k+1]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridRoughPath {
    times: Vec<f64>,
    increments: Vec<LevelTwoElement>,
}

impl GridRoughPath {
    pub fn new(times: Vec<f64>, increments: Vec<LevelTwoElement>) -> Result<Self, PathError> {
        if times.len() < 2 {
            return Err(PathError::TooFewSamples {
                needed: 2,
                got: times.len(),
            });
        }
        if increments.len() + 1 != times.len() {
            return Err(PathError::LengthMismatch {
                times: times.len(),
                values: increments.len(),
            });
        }
        for k in 1..times.len() {
            if !(times[k] > times[k - 1]) {
                return Err(PathError::NonIncreasingTimes { index: k });
            }
        }
        let dim = increments[0].dim();
        for (k, inc) in increments.iter().enumerate() {
            if inc.dim() != dim {
                return Err(PathError::RaggedValues { index: k });
            }
        }
        Ok(Self { times, increments })
    }

    pub fn dim(&self) -> usize {
        self.increments[0].dim()
    }

    /// Number of cells N; the path has N + 1 partition points.
    pub fn cells(&self) -> usize {
        self.increments.len()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn cell(&self, k: usize) -> &LevelTwoElement {
        &self.increments[k]
    }

    /// Chen product of cells `from..to`; the empty product (`from == to`) is
    /// the identity element.
    pub fn increment(&self, from: usize, to: usize) -> Result<LevelTwoElement, PathError> {
        if from > to || to > self.cells() {
            return Err(PathError::CellRange {
                from,
                to,
                cells: self.cells(),
            });
        }
        let mut acc = LevelTwoElement::identity(self.dim())?;
        for k in from..to {
            acc = acc.product(&self.increments[k])?;
        }
        Ok(acc)
    }
}

/// Exact level-2 lift of a piecewise-linear signal: per cell with increment
/// Δ, level 1 is Δ and level 2 is Δ⊗Δ/2 (the running increment along a
/// straight segment is proportional to Δ, so the iterated integral is
/// exact). Wider increments follow by Chen products.
pub fn lift_piecewise_linear(signal: &SampledPath) -> Result<GridRoughPath, PathError> {
    if signal.len() < 2 {
        return Err(PathError::TooFewSamples {
            needed: 2,
            got: signal.len(),
        });
    }
    let n = signal.dim();
    let mut increments = Vec::with_capacity(signal.len() - 1);
    for k in 0..signal.len() - 1 {
        let a = signal.value(k);
        let b = signal.value(k + 1);
        let delta: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
        let mut level2 = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                level2[i * n + j] = delta[i] * delta[j] / 2.0;
            }
        }
        increments.push(LevelTwoElement::new(delta, level2)?);
    }
    GridRoughPath::new(signal.times().to_vec(), increments)
}

/// p-variation of the sampled signal: the supremum over subdivisions through
/// sample points of Σ |x_{t_k,t_{k+1}}|ᵖ, to the power 1/p, by dynamic
/// programming over the grid. Increment size is Euclidean.
pub fn p_variation(signal: &SampledPath, p: f64) -> Result<f64, PathError> {
    if !(p >= 1.0) {
        return Err(PathError::InvalidExponent {
            requirement: "p >= 1",
            got: p,
        });
    }
    let n = signal.len();
    if n < 2 {
        return Ok(0.0);
    }
    // Extra points never decrease the sum, so the optimum runs from the
    // first sample to the last.
    let mut best = vec![0.0f64; n];
    for j in 1..n {
        let mut b = f64::NEG_INFINITY;
        for i in 0..j {
            let d = euclid_gap(signal.value(i), signal.value(j));
            let cand = best[i] + d.powf(p);
            if cand > b {
                b = cand;
            }
        }
        best[j] = b;
    }
    Ok(best[n - 1].powf(1.0 / p))
}

/// Grid-restricted rough-path distance for p in [2, 3):
///
/// ```text
/// d_p(X, Y) = max_{i=1,2} [ sup_D Σ_k ‖Xⁱ − Yⁱ‖^(p/i) ]^(1/p)
/// ```
///
/// with the supremum over subdivisions through the shared partition points
/// and entrywise max-norm on both levels (the matrix norm for i = 2 is a
/// choice; any norm is equivalent at these dimensions). Like `p_variation`,
/// this is a lower bound for the continuous-time distance.
pub fn dp_distance(x: &GridRoughPath, y: &GridRoughPath, p: f64) -> Result<f64, PathError> {
    if !(2.0..3.0).contains(&p) {
        return Err(PathError::InvalidExponent {
            requirement: "p in [2, 3)",
            got: p,
        });
    }
    if x.cells() != y.cells() || x.dim() != y.dim() || x.times() != y.times() {
        return Err(PathError::PartitionMismatch);
    }
    let n = x.cells();
    // Gap norms for every grid interval, per level, by forward composition.
    let mut gap1 = vec![0.0f64; (n + 1) * (n + 1)];
    let mut gap2 = vec![0.0f64; (n + 1) * (n + 1)];
    for i in 0..n {
        let mut accx = LevelTwoElement::identity(x.dim())?;
        let mut accy = accx.clone();
        for j in i + 1..=n {
            accx = accx.product(x.cell(j - 1))?;
            accy = accy.product(y.cell(j - 1))?;
            gap1[i * (n + 1) + j] = accx.level1_gap(&accy)?;
            gap2[i * (n + 1) + j] = accx.level2_gap(&accy)?;
        }
    }
    let sup_sum = |gaps: &[f64], exponent: f64| -> f64 {
        let mut best = vec![0.0f64; n + 1];
        for j in 1..=n {
            let mut b = f64::NEG_INFINITY;
            for i in 0..j {
                let cand = best[i] + gaps[i * (n + 1) + j].powf(exponent);
                if cand > b {
                    b = cand;
                }
            }
            best[j] = b;
        }
        best[n]
    };
    let d1 = sup_sum(&gap1, p).powf(1.0 / p);
    let d2 = sup_sum(&gap2, p / 2.0).powf(1.0 / p);
    Ok(d1.max(d2))
}

fn euclid_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (y - x) * (y - x))
        .sum::<f64>()
        .sqrt()
}
