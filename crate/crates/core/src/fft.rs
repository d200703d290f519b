//! Shared FFT plumbing: cached rustfft plans and the phase-corrected
//! transforms between the position and momentum samplings of a [`GridSpec`].
//!
//! All higher modules express their sums through three primitives:
//!
//! * `pos_to_mom`:  `out[k] = sum_j exp(-i p_k x_j / hbar) v[j]`
//! * `mom_to_pos`:  `out[j] = sum_k exp(+i p_k x_j / hbar) v[k]`
//! * `pos_to_mom_plus`: `out[k] = sum_j exp(+i p_k x_j / hbar) v[j]`
//!
//! Plans are cached per length behind a mutex, so the primitives are safe to
//! call from multiple threads.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use once_cell::sync::Lazy;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::grid::GridSpec;

static PLANS: Lazy<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn plan(len: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    let mut map = PLANS.lock().expect("fft plan cache poisoned");
    map.entry((len, forward))
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            let dir = if forward { FftDirection::Forward } else { FftDirection::Inverse };
            planner.plan_fft(len, dir)
        })
        .clone()
}

/// In-place forward DFT: `out[m] = sum_j v[j] exp(-2 pi i m j / len)`.
pub fn fft_forward(v: &mut [Complex64]) {
    plan(v.len(), true).process(v);
}

/// In-place unnormalized inverse DFT: `out[j] = sum_m v[m] exp(+2 pi i m j / len)`.
pub fn fft_inverse_unnormalized(v: &mut [Complex64]) {
    plan(v.len(), false).process(v);
}

/// `out[k] = sum_j exp(-i p_k x_j / hbar) v[j]`.
pub fn pos_to_mom(grid: &GridSpec, v: &[Complex64]) -> Vec<Complex64> {
    let n = grid.n();
    debug_assert_eq!(v.len(), n);
    let mut buf = v.to_vec();
    fft_forward(&mut buf);
    let scale = grid.x_min() / grid.hbar();
    (0..n)
        .map(|k| {
            let phase = Complex64::from_polar(1.0, -grid.p(k) * scale);
            phase * buf[(k + n / 2) % n]
        })
        .collect()
}

/// `out[j] = sum_k exp(+i p_k x_j / hbar) v[k]` where `v` is indexed by the
/// monotone momentum grid.
pub fn mom_to_pos(grid: &GridSpec, v: &[Complex64]) -> Vec<Complex64> {
    let n = grid.n();
    debug_assert_eq!(v.len(), n);
    let scale = grid.x_min() / grid.hbar();
    let mut buf: Vec<Complex64> = (0..n)
        .map(|m| {
            let k = (m + n / 2) % n;
            v[k] * Complex64::from_polar(1.0, grid.p(k) * scale)
        })
        .collect();
    fft_inverse_unnormalized(&mut buf);
    buf
}

/// `out[k] = sum_j exp(+i p_k x_j / hbar) v[j]` (conjugate-kernel analysis,
/// used by the inverse Fourier transform).
pub fn pos_to_mom_plus(grid: &GridSpec, v: &[Complex64]) -> Vec<Complex64> {
    let n = grid.n();
    debug_assert_eq!(v.len(), n);
    let mut buf = v.to_vec();
    fft_inverse_unnormalized(&mut buf);
    let scale = grid.x_min() / grid.hbar();
    (0..n)
        .map(|k| {
            let phase = Complex64::from_polar(1.0, grid.p(k) * scale);
            phase * buf[(k + n / 2) % n]
        })
        .collect()
}

/// Trigonometric upsampling by an integer factor `s` via zero padding in the
/// DFT domain (Nyquist bin split evenly). Exact on the original samples:
/// `out[s*j] == v[j]`.
pub fn upsample(v: &[Complex64], s: usize) -> Vec<Complex64> {
    let n = v.len();
    if s == 1 {
        return v.to_vec();
    }
    let mut spec = v.to_vec();
    fft_forward(&mut spec);
    let mut padded = vec![Complex64::new(0.0, 0.0); s * n];
    padded[..n / 2].copy_from_slice(&spec[..n / 2]);
    for m in n / 2 + 1..n {
        padded[s * n - n + m] = spec[m];
    }
    padded[n / 2] = 0.5 * spec[n / 2];
    padded[s * n - n / 2] = 0.5 * spec[n / 2];
    fft_inverse_unnormalized(&mut padded);
    let inv = 1.0 / n as f64;
    padded.iter_mut().for_each(|c| *c *= inv);
    padded
}
