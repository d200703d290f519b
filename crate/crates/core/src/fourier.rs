//! The hbar-scaled unitary Fourier transform, its inverse, the metaplectic
//! modified Fourier transform, the symplectic Fourier transform on
//! phase-space fields, and the two quadrature inner products.
//!
//! Conventions: `F psi(p) = (2 pi hbar)^{-1/2} Integral exp(-i p x / hbar) psi(x) dx`,
//! discretized with the plain Riemann weight `dx`. The output lives on the
//! dual grid (momenta reinterpreted as positions). With a centered position
//! window the double dual is the original grid and `F^4 = id` holds exactly.

use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{CoreError, Result};
use crate::fft;
use crate::grid::{PhaseSpaceField, Signal};

/// `F psi` sampled on the dual grid.
pub fn fourier(psi: &Signal) -> Signal {
    let g = psi.grid();
    let scale = g.dx() / (2.0 * PI * g.hbar()).sqrt();
    let mut out = fft::pos_to_mom(g, psi.samples());
    out.iter_mut().for_each(|c| *c *= scale);
    Signal::new(g.dual(), out).expect("forward transform preserves finiteness")
}

/// `F^{-1} phi` for `phi` sampled on a momentum grid; exact inverse of
/// [`fourier`] on centered grids.
pub fn inverse_fourier(phi: &Signal) -> Signal {
    let g = phi.grid();
    let scale = g.dx() / (2.0 * PI * g.hbar()).sqrt();
    let mut out = fft::pos_to_mom_plus(g, phi.samples());
    out.iter_mut().for_each(|c| *c *= scale);
    Signal::new(g.dual(), out).expect("inverse transform preserves finiteness")
}

/// The metaplectic representative `F = exp(-i pi/4) * fourier` (one degree of
/// freedom), satisfying `F^8 = id` and projecting onto the rotation `J`.
pub fn modified_fourier(psi: &Signal) -> Signal {
    fourier(psi).scale(Complex64::from_polar(1.0, -FRAC_PI_4))
}

/// Inverse of [`modified_fourier`].
pub fn inverse_modified_fourier(phi: &Signal) -> Signal {
    inverse_fourier(phi).scale(Complex64::from_polar(1.0, FRAC_PI_4))
}

/// Symplectic Fourier transform
/// `F_sigma a(z) = (2 pi hbar)^{-1} Integral exp(-i (p x' - p' x)/hbar) a(z') dz'`,
/// discretized with weight `dx*dp`. Involutive: `F_sigma(F_sigma a) = a`, and
/// unitary for the phase-space inner product.
pub fn symplectic_fourier(a: &PhaseSpaceField) -> PhaseSpaceField {
    let g = *a.grid();
    let n = g.n();
    // b[i', i] = sum_k' exp(+i p_k' x_i / hbar) a[i', k']
    let mut b = vec![Complex64::new(0.0, 0.0); n * n];
    for ip in 0..n {
        let row = fft::mom_to_pos(&g, a.row(ip));
        b[ip * n..(ip + 1) * n].copy_from_slice(&row);
    }
    // out[i, k] = (1/n) sum_i' exp(-i p_k x_i' / hbar) b[i', i]
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    let inv_n = 1.0 / n as f64;
    let mut col = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        for ip in 0..n {
            col[ip] = b[ip * n + i];
        }
        let tr = fft::pos_to_mom(&g, &col);
        for k in 0..n {
            out[i * n + k] = tr[k] * inv_n;
        }
    }
    PhaseSpaceField::new(g, out).expect("symplectic transform preserves finiteness")
}

/// `(psi | phi) = dx * sum_i psi_i * conj(phi_i)`.
pub fn l2_inner(psi: &Signal, phi: &Signal) -> Result<Complex64> {
    if psi.grid() != phi.grid() {
        return Err(CoreError::GridMismatch);
    }
    let s: Complex64 = psi
        .samples()
        .iter()
        .zip(phi.samples())
        .map(|(a, b)| a * b.conj())
        .sum();
    Ok(s * psi.grid().dx())
}

/// `((f | g)) = dx * dp * sum f * conj(g)` on phase-space fields.
pub fn phase_space_inner(f: &PhaseSpaceField, g: &PhaseSpaceField) -> Result<Complex64> {
    if f.grid() != g.grid() {
        return Err(CoreError::GridMismatch);
    }
    let s: Complex64 = f
        .samples()
        .iter()
        .zip(g.samples())
        .map(|(a, b)| a * b.conj())
        .sum();
    Ok(s * f.grid().dx() * f.grid().dp())
}

/// Distributional pairing `<f, g> = dx * dp * sum f * g` (no conjugation).
pub fn phase_space_pairing(f: &PhaseSpaceField, g: &PhaseSpaceField) -> Result<Complex64> {
    if f.grid() != g.grid() {
        return Err(CoreError::GridMismatch);
    }
    let s: Complex64 = f.samples().iter().zip(g.samples()).map(|(a, b)| a * b).sum();
    Ok(s * f.grid().dx() * f.grid().dp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::signals::gaussian;

    fn default_grid() -> GridSpec {
        GridSpec::new(256, -16.0, 16.0, 1.0).unwrap()
    }

    #[test]
    fn gaussian_is_fourier_invariant() {
        let g = default_grid();
        let psi = gaussian(&g, 0.0, 0.0, 1.0).unwrap();
        let f = fourier(&psi);
        // e^{-x^2/2 hbar} maps to e^{-p^2/2 hbar} under this convention; the
        // normalized Gaussian therefore reproduces itself on the dual grid.
        let d = g.dual();
        let expect = gaussian(&d, 0.0, 0.0, 1.0).unwrap();
        let err = f
            .samples()
            .iter()
            .zip(expect.samples())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "err = {err}");
    }

    #[test]
    fn fourier_is_unitary() {
        let g = default_grid();
        let psi = gaussian(&g, 1.2, -0.7, 1.3).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        assert!((fourier(&psi).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn four_transforms_equal_identity() {
        let g = default_grid();
        let psi = gaussian(&g, 0.9, 0.4, 0.8).unwrap();
        let mut cur = psi.clone();
        for _ in 0..4 {
            cur = fourier(&cur);
        }
        let err = cur
            .samples()
            .iter()
            .zip(psi.samples())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "err = {err}");
    }

    #[test]
    fn double_transform_is_parity() {
        let g = default_grid();
        let psi = gaussian(&g, 1.5, 0.5, 1.0).unwrap();
        let f2 = fourier(&fourier(&psi));
        let n = g.n();
        let err = (0..n)
            .map(|i| (f2.samples()[i] - psi.samples()[(n - i) % n]).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "err = {err}");
    }

    #[test]
    fn roundtrip_is_exact() {
        let g = default_grid();
        let psi = gaussian(&g, -0.4, 1.1, 1.2).unwrap();
        let back = inverse_fourier(&fourier(&psi));
        let err = back
            .samples()
            .iter()
            .zip(psi.samples())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-12, "err = {err}");
    }

    #[test]
    fn roundtrip_is_exact_on_arbitrary_unit_signals() {
        // the inversion is a lattice identity: no smoothness or decay needed
        use rand::{Rng, SeedableRng};
        let g = default_grid();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4242);
        for _ in 0..5 {
            let raw: Vec<Complex64> = (0..g.n())
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let psi = Signal::new(g, raw).unwrap();
            let psi = psi.scale(Complex64::new(1.0 / psi.norm(), 0.0));
            let back = inverse_fourier(&fourier(&psi));
            let err = back
                .samples()
                .iter()
                .zip(psi.samples())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err <= 1e-12, "err = {err}");
        }
    }

    #[test]
    fn inverse_is_linear() {
        let g = default_grid();
        let a = gaussian(&g, 0.2, 0.3, 1.0).unwrap();
        let b = gaussian(&g, -0.5, -0.8, 1.4).unwrap();
        let ca = Complex64::new(0.3, -1.2);
        let cb = Complex64::new(-0.7, 0.25);
        let lhs = inverse_fourier(&a.scale(ca).add(&b.scale(cb)).unwrap());
        let rhs = inverse_fourier(&a).scale(ca).add(&inverse_fourier(&b).scale(cb)).unwrap();
        let err = lhs
            .samples()
            .iter()
            .zip(rhs.samples())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12);
    }

    #[test]
    fn modified_fourier_phase_and_period() {
        let g = default_grid();
        let psi = gaussian(&g, 0.0, 0.0, 1.0).unwrap();
        let f = fourier(&psi);
        let fm = modified_fourier(&psi);
        let w = Complex64::from_polar(1.0, -FRAC_PI_4);
        for (a, b) in fm.samples().iter().zip(f.samples()) {
            if b.norm() > 1e-12 {
                assert!((a / b - w).norm() < 1e-12);
            }
        }
        assert!((fm.norm() - 1.0).abs() < 1e-12);
        let mut cur = psi.clone();
        for _ in 0..8 {
            cur = modified_fourier(&cur);
        }
        let err = cur
            .samples()
            .iter()
            .zip(psi.samples())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10);
    }

    #[test]
    fn symplectic_fourier_is_involutive() {
        let g = default_grid();
        let a = PhaseSpaceField::from_fn(g, |x, p| {
            Complex64::new((-0.5 * (x * x + p * p)).exp(), 0.0)
        })
        .unwrap();
        let twice = symplectic_fourier(&symplectic_fourier(&a));
        let err = twice
            .samples()
            .iter()
            .zip(a.samples())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        assert!(err <= 1e-10, "err = {err}");
    }

    #[test]
    fn symplectic_fourier_of_delta_is_chirp() {
        let g = GridSpec::new(64, -8.0, 8.0, 1.0).unwrap();
        let n = g.n();
        let (i1, k1) = (n / 2 + 9, n / 2 + 5);
        let weight = 2.0 * PI * g.hbar() / (g.dx() * g.dp());
        let mut d = PhaseSpaceField::zeros(g);
        *d.at_mut(i1, k1) = Complex64::new(weight, 0.0);
        let f = symplectic_fourier(&d);
        let (x1, p1) = (g.x(i1), g.p(k1));
        // spot-check the defining sum at several grid points
        for &(i, k) in &[(3usize, 60usize), (40, 10), (32, 32), (11, 47), (59, 2)] {
            let sigma = g.p(k) * x1 - p1 * g.x(i);
            let expect = Complex64::from_polar(1.0, -sigma / g.hbar());
            assert!((f.at(i, k) - expect).norm() < 1e-10);
        }
    }

    #[test]
    fn symplectic_fourier_preserves_real_even_fields() {
        let g = GridSpec::new(64, -8.0, 8.0, 1.0).unwrap();
        let a = PhaseSpaceField::from_fn(g, |x, p| {
            Complex64::new((-0.3 * x * x - 0.4 * p * p).exp() * (1.0 + 0.2 * (x * p).cos()), 0.0)
        })
        .unwrap();
        let f = symplectic_fourier(&a);
        let max_im = f.samples().iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        assert!(max_im < 1e-10, "max_im = {max_im}");
    }

    #[test]
    fn parseval_for_symplectic_fourier() {
        let g = GridSpec::new(128, -12.0, 12.0, 1.0).unwrap();
        let f = PhaseSpaceField::from_fn(g, |x, p| {
            Complex64::new((-0.4 * (x - 0.5).powi(2) - 0.3 * p * p).exp(), 0.1 * (x + p))
        })
        .unwrap();
        let h = PhaseSpaceField::from_fn(g, |x, p| {
            Complex64::new((-0.5 * x * x - 0.6 * (p + 0.3).powi(2)).exp(), -0.2 * x)
        })
        .unwrap();
        let lhs = phase_space_inner(&symplectic_fourier(&f), &symplectic_fourier(&h)).unwrap();
        let rhs = phase_space_inner(&f, &h).unwrap();
        assert!((lhs - rhs).norm() / rhs.norm() < 1e-10);
    }

    #[test]
    fn inner_products_reject_grid_mismatch() {
        let g1 = default_grid();
        let g2 = GridSpec::new(128, -16.0, 16.0, 1.0).unwrap();
        let a = gaussian(&g1, 0.0, 0.0, 1.0).unwrap();
        let b = gaussian(&g2, 0.0, 0.0, 1.0).unwrap();
        assert!(matches!(l2_inner(&a, &b), Err(CoreError::GridMismatch)));
    }

    #[test]
    fn hermite_orthogonality() {
        let g = default_grid();
        let h0 = crate::signals::hermite(&g, 0).unwrap();
        let h1 = crate::signals::hermite(&g, 1).unwrap();
        let ip = l2_inner(&h0, &h1).unwrap();
        assert!(ip.norm() < 1e-10);
        assert!((l2_inner(&h0, &h0).unwrap().re - 1.0).abs() < 1e-10);
    }

    #[test]
    fn inner_product_hermitian_symmetry() {
        let g = default_grid();
        let a = gaussian(&g, 0.4, -0.6, 1.1).unwrap();
        let b = gaussian(&g, -0.2, 0.9, 0.9).unwrap();
        let ab = l2_inner(&a, &b).unwrap();
        let ba = l2_inner(&b, &a).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-14);
    }
}
