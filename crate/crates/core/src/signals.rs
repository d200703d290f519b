//! Standard test-signal families: Gaussian wave packets, Hermite functions,
//! linear chirps and the two-Gaussian interference probe, plus an analytic
//! description type for signals that must be resampled in closed form
//! (dilation covariance checks).

use num_complex::Complex64;

use crate::error::{CoreError, Result};
use crate::grid::{GridSpec, Signal};

/// Normalized Gaussian wave packet centered at `(x0, p0)` with width
/// parameter `w` (variance `w * hbar / 2` in position).
pub fn gaussian(grid: &GridSpec, x0: f64, p0: f64, w: f64) -> Result<Signal> {
    if !(w > 0.0) {
        return Err(CoreError::InvalidGrid(format!("gaussian width {w} must be positive")));
    }
    let hbar = grid.hbar();
    let psi = Signal::from_fn(*grid, |x| {
        let amp = (-(x - x0).powi(2) / (2.0 * w * hbar)).exp();
        Complex64::from_polar(amp, p0 * x / hbar)
    })?;
    let n = psi.norm();
    Ok(psi.scale(Complex64::new(1.0 / n, 0.0)))
}

/// Hermite function value `h_n(x)` for Planck constant `hbar`
/// (eigenfunction of `(p^2 + x^2)/2` with eigenvalue `hbar (n + 1/2)`).
pub fn hermite_value(hbar: f64, order: u32, x: f64) -> f64 {
    let xi = x / hbar.sqrt();
    let h0 = (std::f64::consts::PI * hbar).powf(-0.25) * (-xi * xi / 2.0).exp();
    if order == 0 {
        return h0;
    }
    let mut prev = h0;
    let mut cur = (2.0f64).sqrt() * xi * h0;
    for m in 1..order {
        let next = (2.0 / (m as f64 + 1.0)).sqrt() * xi * cur
            - (m as f64 / (m as f64 + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Sampled Hermite function of the given order.
pub fn hermite(grid: &GridSpec, order: u32) -> Result<Signal> {
    let hbar = grid.hbar();
    Signal::from_fn(*grid, |x| Complex64::new(hermite_value(hbar, order, x), 0.0))
}

/// Normalized Gaussian-windowed linear chirp:
/// `exp(-x^2/(2 w hbar)) exp(i (p0 x + rate x^2 / 2)/hbar)`.
pub fn chirp(grid: &GridSpec, p0: f64, rate: f64, w: f64) -> Result<Signal> {
    let hbar = grid.hbar();
    let psi = Signal::from_fn(*grid, |x| {
        let amp = (-x * x / (2.0 * w * hbar)).exp();
        Complex64::from_polar(amp, (p0 * x + 0.5 * rate * x * x) / hbar)
    })?;
    let n = psi.norm();
    Ok(psi.scale(Complex64::new(1.0 / n, 0.0)))
}

/// Normalized superposition of two unit-width Gaussians at `x = +-sep`, the
/// standard interference ("ghost frequency") probe.
pub fn two_gaussian(grid: &GridSpec, sep: f64) -> Result<Signal> {
    let hbar = grid.hbar();
    let psi = Signal::from_fn(*grid, |x| {
        let a = (-(x - sep).powi(2) / (2.0 * hbar)).exp();
        let b = (-(x + sep).powi(2) / (2.0 * hbar)).exp();
        Complex64::new(a + b, 0.0)
    })?;
    let n = psi.norm();
    Ok(psi.scale(Complex64::new(1.0 / n, 0.0)))
}

/// A signal with a closed-form expression, so it can be sampled exactly on
/// any grid (required by the metalinear dilations, which change the grid).
#[derive(Debug, Clone)]
pub enum AnalyticSignal {
    /// `amplitude * exp(-gamma (x - center)^2 / (2 hbar)) * exp(i momentum x / hbar)`
    /// with `Re gamma > 0`; complex `center` and `gamma` cover chirped and
    /// displaced packets.
    Gaussian {
        amplitude: Complex64,
        center: Complex64,
        gamma: Complex64,
        momentum: f64,
    },
    /// `coeff * h_order(x)`, order at most 8.
    Hermite { order: u32, coeff: Complex64 },
    /// Finite linear combination.
    Sum(Vec<AnalyticSignal>),
}

impl AnalyticSignal {
    /// Unit-amplitude real Gaussian at phase-space location `(x0, p0)`.
    pub fn packet(x0: f64, p0: f64, width: f64) -> Self {
        AnalyticSignal::Gaussian {
            amplitude: Complex64::new(1.0, 0.0),
            center: Complex64::new(x0, 0.0),
            gamma: Complex64::new(1.0 / width, 0.0),
            momentum: p0,
        }
    }

    pub fn eval(&self, hbar: f64, x: f64) -> Complex64 {
        match self {
            AnalyticSignal::Gaussian { amplitude, center, gamma, momentum } => {
                let d = Complex64::new(x, 0.0) - center;
                let arg = -gamma * d * d / (2.0 * hbar)
                    + Complex64::new(0.0, momentum * x / hbar);
                amplitude * arg.exp()
            }
            AnalyticSignal::Hermite { order, coeff } => {
                coeff * hermite_value(hbar, *order, x)
            }
            AnalyticSignal::Sum(parts) => parts.iter().map(|s| s.eval(hbar, x)).sum(),
        }
    }

    /// Sample on a grid; exact pointwise evaluation, no interpolation.
    pub fn sample(&self, grid: &GridSpec) -> Result<Signal> {
        if let AnalyticSignal::Hermite { order, .. } = self {
            if *order > 8 {
                return Err(CoreError::SymbolRender(format!(
                    "analytic Hermite order {order} exceeds 8"
                )));
            }
        }
        Signal::from_fn(*grid, |x| self.eval(grid.hbar(), x))
    }

    /// Sample `x -> self(l * x)` on a grid.
    pub fn sample_dilated(&self, grid: &GridSpec, l: f64) -> Result<Signal> {
        Signal::from_fn(*grid, |x| self.eval(grid.hbar(), l * x))
    }
}
