//! Shared helpers for the integration and acceptance suites.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use phaseq_core::fft;
use phaseq_core::fourier::l2_inner;
use phaseq_core::grid::{GridSpec, Signal};
use phaseq_core::quantize::{spectral_multiplier, OperatorMatrix};
use phaseq_core::signals::gaussian;

/// Smooth order-16 super-Gaussian window, 1 on the bulk, rolling off beyond
/// `frac` of the half-width.
pub fn super_gaussian(v: f64, half_width: f64, frac: f64) -> f64 {
    (-(v / (frac * half_width)).powi(16)).exp()
}

/// Windowed momentum values `p * w(p)` for taper fraction `frac`.
pub fn windowed_momentum(grid: &GridSpec, frac: f64) -> Vec<Complex64> {
    let pmax = grid.p(grid.n() - 1).abs().max(grid.p(0).abs());
    grid.ps()
        .iter()
        .map(|&p| Complex64::new(p * super_gaussian(p, pmax, frac), 0.0))
        .collect()
}

/// The spectral operator multiplying by the windowed momentum.
pub fn windowed_momentum_operator(grid: &GridSpec, frac: f64) -> OperatorMatrix {
    spectral_multiplier(grid, &windowed_momentum(grid, frac)).expect("lengths match")
}

/// Project a signal onto the momentum band `|p| <= frac * p_max`.
pub fn band_project(grid: &GridSpec, v: &Signal, frac: f64) -> Signal {
    let pmax = grid.p(grid.n() - 1).abs().max(grid.p(0).abs());
    let mut spec = fft::pos_to_mom(grid, v.samples());
    for (k, c) in spec.iter_mut().enumerate() {
        if grid.p(k).abs() > frac * pmax {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    let back = fft::mom_to_pos(grid, &spec);
    let inv_n = 1.0 / grid.n() as f64;
    Signal::new(
        *grid,
        back.into_iter().map(|c| c * inv_n).collect(),
    )
    .expect("projection is finite")
}

/// Random Gaussian packet with hbar-scaled center spread.
pub fn random_packet(rng: &mut ChaCha8Rng, grid: &GridSpec) -> Signal {
    let s = grid.hbar().sqrt();
    let x0 = rng.gen_range(-1.0..1.0) * s;
    let p0 = rng.gen_range(-1.0..1.0) * s;
    let w = rng.gen_range(0.8..1.3);
    gaussian(grid, x0, p0, w).expect("valid packet")
}

/// `max_psi |(A - B) psi| / |B psi|` over a fixed corpus of localized states.
pub fn apply_residual(
    grid: &GridSpec,
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    rng: &mut ChaCha8Rng,
    trials: usize,
) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let psi = random_packet(rng, grid);
        let da = a.apply(&psi).expect("apply");
        let db = b.apply(&psi).expect("apply");
        let num = signal_norm_of_diff(&da, &db);
        let den = db.norm();
        worst = worst.max(num / den);
    }
    worst
}

/// Like [`apply_residual`] but the difference is band-projected first.
pub fn band_projected_apply_residual(
    grid: &GridSpec,
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    rng: &mut ChaCha8Rng,
    trials: usize,
    frac: f64,
) -> f64 {
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let psi = random_packet(rng, grid);
        let da = a.apply(&psi).expect("apply");
        let db = b.apply(&psi).expect("apply");
        let diff = Signal::new(
            *grid,
            da.samples()
                .iter()
                .zip(db.samples())
                .map(|(x, y)| x - y)
                .collect(),
        )
        .expect("finite");
        let projected = band_project(grid, &diff, frac);
        worst = worst.max(projected.norm() / db.norm());
    }
    worst
}

pub fn signal_norm_of_diff(a: &Signal, b: &Signal) -> f64 {
    let g = a.grid();
    (g.dx()
        * a.samples()
            .iter()
            .zip(b.samples())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>())
    .sqrt()
}

/// Weak-form relative residual `|(A psi | phi) - reference| / |reference|`.
pub fn weak_residual(
    a: &OperatorMatrix,
    psi: &Signal,
    phi: &Signal,
    reference: Complex64,
) -> f64 {
    let lhs = l2_inner(&a.apply(psi).expect("apply"), phi).expect("inner");
    (lhs - reference).norm() / reference.norm()
}
