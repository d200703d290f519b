//! Uniform periodic position grids and the sampled-function containers built
//! on them.
//!
//! A [`GridSpec`] fixes `n` equispaced positions `x_i = x_min + i*dx` together
//! with the Planck parameter `hbar`. The induced momentum grid
//! `p_k = 2*pi*hbar*k/(n*dx)`, `k in [-n/2, n/2)`, is stored in monotone order
//! (fftshift convention) so that position and momentum arrays are
//! index-aligned everywhere in the crate. The pairing satisfies
//! `n * dx * dp = 2*pi*hbar` exactly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// Discretization contract: sample count, position window and Planck constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    n: usize,
    x_min: f64,
    x_max: f64,
    hbar: f64,
}

impl<'de> Deserialize<'de> for GridSpec {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            x_min: f64,
            x_max: f64,
            hbar: f64,
        }
        let raw = Raw::deserialize(deserializer)?;
        GridSpec::new(raw.n, raw.x_min, raw.x_max, raw.hbar).map_err(serde::de::Error::custom)
    }
}

impl GridSpec {
    /// `n` must be a power of two, at least 8; the window must be nonempty and
    /// `hbar` positive.
    pub fn new(n: usize, x_min: f64, x_max: f64, hbar: f64) -> Result<Self> {
        if !n.is_power_of_two() || n < 8 {
            return Err(CoreError::InvalidGrid(format!(
                "n = {n} is not a power of two >= 8"
            )));
        }
        if !x_min.is_finite() || !x_max.is_finite() || x_max <= x_min {
            return Err(CoreError::InvalidGrid(format!(
                "position window [{x_min}, {x_max}) is empty or non-finite"
            )));
        }
        if !hbar.is_finite() || hbar <= 0.0 {
            return Err(CoreError::InvalidGrid(format!("hbar = {hbar} must be positive")));
        }
        Ok(Self { n, x_min, x_max, hbar })
    }

    /// Centered grid `[-l/2, l/2)`.
    pub fn centered(n: usize, half_width: f64, hbar: f64) -> Result<Self> {
        Self::new(n, -half_width, half_width, hbar)
    }

    /// Centered grid with `dx = dp = sqrt(2*pi*hbar/n)`, required by the
    /// symplectic-rotation checks where index permutations realize `J`.
    pub fn square(n: usize, hbar: f64) -> Result<Self> {
        if !n.is_power_of_two() || n < 8 {
            return Err(CoreError::InvalidGrid(format!(
                "n = {n} is not a power of two >= 8"
            )));
        }
        let dx = (2.0 * std::f64::consts::PI * hbar / n as f64).sqrt();
        let half = 0.5 * n as f64 * dx;
        Self::new(n, -half, half, hbar)
    }

    /// Default desk-scale grid: n = 256 on [-16, 16) with hbar = 1.
    pub fn default_desk() -> Self {
        Self::new(256, -16.0, 16.0, 1.0).expect("default grid is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }
    pub fn dp(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.hbar / (self.n as f64 * self.dx())
    }
    /// Position of sample `i`.
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }
    /// Momentum of sample `k` (monotone order, `k - n/2` wavenumber).
    pub fn p(&self, k: usize) -> f64 {
        (k as f64 - self.n as f64 / 2.0) * self.dp()
    }
    pub fn xs(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }
    pub fn ps(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.p(k)).collect()
    }
    pub fn is_square(&self) -> bool {
        (self.dx() - self.dp()).abs() <= 1e-12 * self.dx().abs()
    }
    pub fn is_centered(&self) -> bool {
        (self.x_min + self.x_max).abs() <= 1e-12 * (self.x_max - self.x_min)
    }

    /// The dual grid: momenta of `self` reinterpreted as positions. Centered
    /// by construction since the momentum grid always is.
    pub fn dual(&self) -> GridSpec {
        let half = 0.5 * self.n as f64 * self.dp();
        GridSpec { n: self.n, x_min: -half, x_max: half, hbar: self.hbar }
    }

    /// Companion grid for metalinear dilation by `l > 0` (`dx' = dx/l`), so
    /// that `l * x'_i = x_i` and `p'_k = l * p_k` hold index-to-index.
    pub fn companion(&self, l: f64) -> Result<GridSpec> {
        if l == 0.0 || !l.is_finite() {
            return Err(CoreError::ZeroScale);
        }
        let scale = l.abs();
        GridSpec::new(self.n, self.x_min / scale, self.x_max / scale, self.hbar)
    }

    /// Index of the grid point closest to position `x`.
    pub fn nearest_x_index(&self, x: f64) -> usize {
        let raw = ((x - self.x_min) / self.dx()).round() as i64;
        raw.rem_euclid(self.n as i64) as usize
    }
    /// Index of the grid point closest to momentum `p`.
    pub fn nearest_p_index(&self, p: f64) -> usize {
        let raw = (p / self.dp()).round() as i64 + self.n as i64 / 2;
        raw.rem_euclid(self.n as i64) as usize
    }
}

/// A point of phase space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(x: f64, p: f64) -> Result<Self> {
        if !x.is_finite() || !p.is_finite() {
            return Err(CoreError::InvalidGrid(format!("non-finite phase point ({x}, {p})")));
        }
        Ok(Self { x, p })
    }

    /// Standard symplectic form `sigma(z, z') = p x' - p' x`.
    pub fn symplectic_form(&self, other: &PhasePoint) -> f64 {
        self.p * other.x - other.p * self.x
    }
}

/// Complex samples of a wavefunction on a [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    grid: GridSpec,
    samples: Vec<Complex64>,
}

impl Signal {
    pub fn new(grid: GridSpec, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.n() {
            return Err(CoreError::InvalidGrid(format!(
                "sample count {} does not match grid n = {}",
                samples.len(),
                grid.n()
            )));
        }
        if let Some(bad) = samples.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(CoreError::NonFinite(bad));
        }
        Ok(Self { grid, samples })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let samples = (0..grid.n()).map(|i| f(grid.x(i))).collect();
        Self::new(grid, samples)
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, samples: vec![Complex64::new(0.0, 0.0); grid.n()] }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }
    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }
    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }
    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    /// `sqrt((psi|psi))` with the dx-weighted inner product.
    pub fn norm(&self) -> f64 {
        (self.grid.dx() * self.samples.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Signal {
        Signal {
            grid: self.grid,
            samples: self.samples.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Signal) -> Result<Signal> {
        if self.grid != other.grid {
            return Err(CoreError::GridMismatch);
        }
        Ok(Signal {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

/// Complex samples of a function of `(x, p)`; entry `(i, k)` is `f(x_i, p_k)`,
/// stored row-major in `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceField {
    grid: GridSpec,
    samples: Vec<Complex64>,
}

impl PhaseSpaceField {
    pub fn new(grid: GridSpec, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.n() * grid.n() {
            return Err(CoreError::InvalidGrid(format!(
                "field has {} entries, expected {}",
                samples.len(),
                grid.n() * grid.n()
            )));
        }
        if let Some(bad) = samples.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(CoreError::NonFinite(bad));
        }
        Ok(Self { grid, samples })
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let n = grid.n();
        let mut samples = Vec::with_capacity(n * n);
        for i in 0..n {
            for k in 0..n {
                samples.push(f(grid.x(i), grid.p(k)));
            }
        }
        Self::new(grid, samples)
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, samples: vec![Complex64::new(0.0, 0.0); grid.n() * grid.n()] }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }
    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }
    pub fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.samples
    }

    #[inline]
    pub fn at(&self, i: usize, k: usize) -> Complex64 {
        self.samples[i * self.grid.n() + k]
    }
    #[inline]
    pub fn at_mut(&mut self, i: usize, k: usize) -> &mut Complex64 {
        let n = self.grid.n();
        &mut self.samples[i * n + k]
    }

    /// Row `i` (fixed position, varying momentum).
    pub fn row(&self, i: usize) -> &[Complex64] {
        let n = self.grid.n();
        &self.samples[i * n..(i + 1) * n]
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn hadamard(&self, other: &PhaseSpaceField) -> Result<PhaseSpaceField> {
        if self.grid != other.grid {
            return Err(CoreError::GridMismatch);
        }
        Ok(PhaseSpaceField {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn add(&self, other: &PhaseSpaceField) -> Result<PhaseSpaceField> {
        if self.grid != other.grid {
            return Err(CoreError::GridMismatch);
        }
        Ok(PhaseSpaceField {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &PhaseSpaceField) -> Result<PhaseSpaceField> {
        if self.grid != other.grid {
            return Err(CoreError::GridMismatch);
        }
        Ok(PhaseSpaceField {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: Complex64) -> PhaseSpaceField {
        PhaseSpaceField {
            grid: self.grid,
            samples: self.samples.iter().map(|v| v * c).collect(),
        }
    }
}
