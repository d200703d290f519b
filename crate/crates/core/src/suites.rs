//! Named verification suites behind the `verify` command: each runs a family
//! of identities on a configured grid with a seeded generator and returns the
//! residual records. Two runs with the same configuration produce identical
//! reports.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::f64::consts::PI;

use crate::covariance::{
    check_fourier_bj_covariance, check_fourier_op_covariance, check_fourier_wigner_covariance,
    check_metalinear_covariance, check_weyl_uniqueness_witness, GaussianSymbol,
    MetalinearElement,
};
use crate::error::{CoreError, Result};
use crate::fourier::{fourier, l2_inner, phase_space_inner};
use crate::grid::{GridSpec, PhasePoint, PhaseSpaceField, Signal};
use crate::quantize::{
    bj_to_weyl_symbol, build_op_bj, build_op_tau, heisenberg_matrix, weak_matrix_element,
    HeisenbergParams, SymbolSpec,
};
use crate::report::{ResidualRecord, SuiteReport};
use crate::signals::{gaussian, hermite, two_gaussian, AnalyticSignal};
use crate::wigner::{
    born_jordan_distribution, cross_wigner, simpson_phase_integral, tau_wigner,
    theta_multiplier, TauParameter,
};

/// Configuration for a suite run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub grid: GridSpec,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_seed() -> u64 {
    0x0b9d_2026
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { grid: GridSpec::default_desk(), seed: default_seed() }
    }
}

/// The suites exposed on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    Moyal,
    Marginals,
    Covariance,
    Adjoints,
    BjOracle,
    Noninvert,
    All,
}

impl SuiteKind {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "moyal" => Self::Moyal,
            "marginals" => Self::Marginals,
            "covariance" => Self::Covariance,
            "adjoints" => Self::Adjoints,
            "bj-oracle" => Self::BjOracle,
            "noninvert" => Self::Noninvert,
            "all" => Self::All,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Moyal => "moyal",
            Self::Marginals => "marginals",
            Self::Covariance => "covariance",
            Self::Adjoints => "adjoints",
            Self::BjOracle => "bj-oracle",
            Self::Noninvert => "noninvert",
            Self::All => "all",
        }
    }
}

/// Random Gaussian packet with centers scaled to the grid's hbar.
fn random_packet(rng: &mut ChaCha8Rng, grid: &GridSpec) -> Result<Signal> {
    let s = grid.hbar().sqrt();
    let x0 = rng.gen_range(-1.0..1.0) * s;
    let p0 = rng.gen_range(-1.0..1.0) * s;
    let w = rng.gen_range(0.8..1.3);
    gaussian(grid, x0, p0, w)
}

/// Run one suite (or all of them) and wrap the records in a report.
pub fn run_suite(kind: SuiteKind, config: &SuiteConfig) -> Result<SuiteReport> {
    let records = match kind {
        SuiteKind::Moyal => moyal_suite(config)?,
        SuiteKind::Marginals => marginals_suite(config)?,
        SuiteKind::Covariance => covariance_suite(config)?,
        SuiteKind::Adjoints => adjoints_suite(config)?,
        SuiteKind::BjOracle => bj_oracle_suite(config)?,
        SuiteKind::Noninvert => noninvert_suite(config)?,
        SuiteKind::All => {
            let mut all = moyal_suite(config)?;
            all.extend(marginals_suite(config)?);
            all.extend(covariance_suite(config)?);
            all.extend(adjoints_suite(config)?);
            all.extend(bj_oracle_suite(config)?);
            all.extend(noninvert_suite(config)?);
            all
        }
    };
    Ok(SuiteReport::new(kind.name(), config.seed, config.grid, records))
}

/// Moyal identity on random Gaussian quadruples.
pub fn moyal_suite(config: &SuiteConfig) -> Result<Vec<ResidualRecord>> {
    let g = config.grid;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut records = Vec::new();
    for t in [0.0, 0.3, 0.5, 1.0] {
        let tau = TauParameter::new(t)?;
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let a = random_packet(&mut rng, &g)?;
            let b = random_packet(&mut rng, &g)?;
            let c = random_packet(&mut rng, &g)?;
            let d = random_packet(&mut rng, &g)?;
            let lhs = phase_space_inner(&tau_wigner(&a, &b, tau)?, &tau_wigner(&c, &d, tau)?)?;
            let rhs = l2_inner(&a, &c)? * l2_inner(&b, &d)?.conj() / (2.0 * PI * g.hbar());
            worst = worst.max((lhs - rhs).norm() / rhs.norm());
        }
        records.push(ResidualRecord::bounded(
            "moyal-identity",
            Some(t),
            json!({"quadruples": 20}),
            worst,
            1e-8,
        ));
    }
    Ok(records)
}

fn marginal_residuals(
    g: &GridSpec,
    w: &PhaseSpaceField,
    psi: &Signal,
    fpsi: &Signal,
) -> (f64, f64) {
    let n = g.n();
    let mut err_p = 0.0;
    for i in 0..n {
        let m: Complex64 = w.row(i).iter().sum::<Complex64>() * g.dp();
        err_p += (m - psi.samples()[i].norm_sqr()).norm() * g.dx();
    }
    let mut err_x = 0.0;
    for k in 0..n {
        let m: Complex64 = (0..n).map(|i| w.at(i, k)).sum::<Complex64>() * g.dx();
        err_x += (m - fpsi.samples()[k].norm_sqr()).norm() * g.dp();
    }
    (err_p, err_x)
}

/// Marginal laws for Gaussian and Hermite states across the tau family and
/// the Born-Jordan distribution.
pub fn marginals_suite(config: &SuiteConfig) -> Result<Vec<ResidualRecord>> {
    let g = config.grid;
    let mut records = Vec::new();
    let mut states: Vec<(String, Signal)> =
        vec![("gaussian".into(), gaussian(&g, 0.8, -0.5, 1.1)?)];
    for order in 0..=3u32 {
        states.push((format!("hermite-{order}"), hermite(&g, order)?));
    }
    for (name, psi) in &states {
        let fpsi = fourier(psi);
        for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let w = tau_wigner(psi, psi, TauParameter::new(t)?)?;
            let (ep, ex) = marginal_residuals(&g, &w, psi, &fpsi);
            records.push(ResidualRecord::bounded(
                "marginals-tau",
                Some(t),
                json!({"state": name}),
                ep.max(ex),
                1e-6,
            ));
        }
        let q = born_jordan_distribution(psi, psi)?;
        let (ep, ex) = marginal_residuals(&g, &q, psi, &fpsi);
        records.push(ResidualRecord::bounded(
            "marginals-born-jordan",
            None,
            json!({"state": name}),
            ep.max(ex),
            1e-6,
        ));
    }
    Ok(records)
}

/// Symplectic covariance family: Fourier/Wigner, Fourier/operator,
/// Born-Jordan under F, metalinear two-grid checks and the uniqueness
/// witness. Runs on its own square grid with the configured size and hbar.
pub fn covariance_suite(config: &SuiteConfig) -> Result<Vec<ResidualRecord>> {
    let base = config.grid;
    let gsq = GridSpec::square(base.n(), base.hbar())?;
    let mut records = Vec::new();
    let psi = AnalyticSignal::packet(0.5, -0.3, 1.1);
    let phi = AnalyticSignal::packet(-0.4, 0.2, 0.9);
    for t in [0.0, 0.3, 0.5] {
        records.push(check_fourier_wigner_covariance(
            &psi,
            &phi,
            TauParameter::new(t)?,
            &gsq,
        )?);
    }
    let sym = GaussianSymbol {
        x0: 1.0,
        p0: 0.8,
        sigma_x: base.hbar().sqrt(),
        sigma_p: base.hbar().sqrt(),
    };
    let field = sym.render(&gsq);
    for t in [0.0, 0.5, 1.0] {
        records.push(check_fourier_op_covariance(&field, TauParameter::new(t)?, &gsq)?);
    }
    records.push(check_fourier_bj_covariance(&field, &gsq)?);

    let sym2 = GaussianSymbol { x0: 0.3, p0: -0.4, sigma_x: 1.0, sigma_p: 1.0 };
    for (l, mu) in [(-1.0, 1u8), (2.0, 0), (0.5, 0)] {
        let elem = MetalinearElement::new(l, mu)?;
        records.extend(check_metalinear_covariance(
            &elem,
            &psi,
            &phi,
            TauParameter::new(0.3)?,
            &sym2,
            &base,
        )?);
    }
    for t in [0.5, 0.0, 1.0] {
        records.push(check_weyl_uniqueness_witness(TauParameter::new(t)?, &gsq)?);
    }
    Ok(records)
}

/// Adjoint and commutation laws at the operator-matrix level.
pub fn adjoints_suite(config: &SuiteConfig) -> Result<Vec<ResidualRecord>> {
    let g = config.grid;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0xad01);
    let mut records = Vec::new();
    let n = g.n() as i64;

    // T_tau(z0)^dag = T_{1-tau}(-z0)
    let mut worst: f64 = 0.0;
    for _ in 0..6 {
        let ix = rng.gen_range(-n / 4..n / 4);
        let ik = rng.gen_range(-n / 4..n / 4);
        let z0 = PhasePoint::new(ix as f64 * g.dx(), ik as f64 * g.dp())?;
        let minus = PhasePoint::new(-z0.x, -z0.p)?;
        for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let tau = TauParameter::new(t)?;
            let t1 = heisenberg_matrix(&g, &HeisenbergParams { z0, tau })?;
            let t2 =
                heisenberg_matrix(&g, &HeisenbergParams { z0: minus, tau: tau.reflected() })?;
            worst = worst.max(t1.adjoint().frobenius_distance(&t2)?);
        }
    }
    records.push(ResidualRecord::bounded(
        "heisenberg-adjoint",
        None,
        json!({"pairs": 6}),
        worst,
        1e-10,
    ));

    // commutation relation as matrices
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let z0 = PhasePoint::new(
            rng.gen_range(-n / 4..n / 4) as f64 * g.dx(),
            rng.gen_range(-n / 4..n / 4) as f64 * g.dp(),
        )?;
        let z1 = PhasePoint::new(
            rng.gen_range(-n / 4..n / 4) as f64 * g.dx(),
            rng.gen_range(-n / 4..n / 4) as f64 * g.dp(),
        )?;
        for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let tau = TauParameter::new(t)?;
            let ta = heisenberg_matrix(&g, &HeisenbergParams { z0, tau })?;
            let tb = heisenberg_matrix(&g, &HeisenbergParams { z0: z1, tau })?;
            let lhs = ta.compose(&tb)?;
            let phase = Complex64::from_polar(1.0, z0.symplectic_form(&z1) / g.hbar());
            let rhs = tb.compose(&ta)?.scale(phase);
            worst = worst.max(lhs.frobenius_distance(&rhs)?);
        }
    }
    records.push(ResidualRecord::bounded(
        "heisenberg-commutation",
        None,
        json!({"pairs": 10}),
        worst,
        1e-10,
    ));

    // Op_tau(a)^dag = Op_{1-tau}(conj a) for a complex Gaussian symbol
    let field = PhaseSpaceField::from_fn(g, |x, p| {
        let s = g.hbar();
        Complex64::new(
            (-0.5 * ((x - s).powi(2) + (p + 0.5 * s).powi(2)) / s).exp(),
            0.3 * (-0.25 * (x * x + p * p) / s).exp(),
        )
    })?;
    let conj_field = PhaseSpaceField::new(g, field.samples().iter().map(|c| c.conj()).collect())?;
    let mut worst: f64 = 0.0;
    for t in [0.0, 0.3, 0.5, 1.0] {
        let tau = TauParameter::new(t)?;
        let a = build_op_tau(&SymbolSpec::GridSymbol { field: field.clone() }, tau, &g)?.matrix;
        let b = build_op_tau(
            &SymbolSpec::GridSymbol { field: conj_field.clone() },
            tau.reflected(),
            &g,
        )?
        .matrix;
        worst = worst.max(a.adjoint().frobenius_distance(&b)?);
    }
    records.push(ResidualRecord::bounded(
        "op-tau-adjoint",
        None,
        json!({"symbol": "complex-gaussian"}),
        worst,
        1e-6,
    ));

    // real symbol -> Born-Jordan self-adjoint
    let real_field =
        PhaseSpaceField::new(g, field.samples().iter().map(|c| Complex64::new(c.re, 0.0)).collect())?;
    let bj = build_op_bj(&SymbolSpec::GridSymbol { field: real_field }, &g)?.matrix;
    records.push(ResidualRecord::bounded(
        "born-jordan-hermitian",
        None,
        json!({"symbol": "real-gaussian"}),
        bj.adjoint().frobenius_distance(&bj)?,
        1e-8,
    ));
    Ok(records)
}

/// The Theta quadrature oracle and the Simpson-of-operators cross-check,
/// plus the weak-form dual route.
pub fn bj_oracle_suite(config: &SuiteConfig) -> Result<Vec<ResidualRecord>> {
    let g = config.grid;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x0b01);
    let mut records = Vec::new();

    // closed-form sinc versus high-resolution composite Simpson, full grid
    let theta = theta_multiplier(&g);
    let mut worst: f64 = 0.0;
    for i in 0..g.n() {
        for k in 0..g.n() {
            let u = g.x(i) * g.p(k) / (2.0 * g.hbar());
            worst = worst.max((theta.field().at(i, k).re - simpson_phase_integral(u, 65536)).abs());
        }
    }
    records.push(ResidualRecord::bounded(
        "theta-simpson-full-grid",
        None,
        json!({"intervals": 65536}),
        worst,
        1e-10,
    ));

    // 129-node Simpson on the subgrid it resolves (|u| <= 0.7)
    let mut worst: f64 = 0.0;
    for i in 0..g.n() {
        for k in 0..g.n() {
            let u = g.x(i) * g.p(k) / (2.0 * g.hbar());
            if u.abs() <= 0.7 {
                worst =
                    worst.max((theta.field().at(i, k).re - simpson_phase_integral(u, 128)).abs());
            }
        }
    }
    records.push(ResidualRecord::bounded(
        "theta-simpson-129-node-resolved-subgrid",
        None,
        json!({"intervals": 128, "max_abs_u": 0.7}),
        worst,
        1e-10,
    ));

    // build_op_bj vs 65-node Simpson quadrature of build_op_tau
    let s = g.hbar().sqrt();
    let field = PhaseSpaceField::from_fn(g, |x, p| {
        Complex64::new((-0.5 * (x * x + p * p) / (s * s)).exp(), 0.0)
    })?;
    let sym = SymbolSpec::GridSymbol { field: field.clone() };
    let bj = build_op_bj(&sym, &g)?.matrix;
    let m = 64u32;
    let mut acc = crate::quantize::OperatorMatrix::zeros(g);
    for j in 0..=m {
        let w = if j == 0 || j == m {
            1.0
        } else if j % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let tau = TauParameter::new(j as f64 / m as f64)?;
        let step = build_op_tau(&sym, tau, &g)?.matrix;
        acc = acc.add(&step.scale(Complex64::new(w, 0.0)))?;
    }
    let quad = acc.scale(Complex64::new(1.0 / (3.0 * m as f64), 0.0));
    records.push(ResidualRecord::bounded(
        "born-jordan-vs-simpson-of-operators",
        None,
        json!({"nodes": 65, "symbol": "gaussian"}),
        quad.frobenius_distance(&bj)?,
        1e-6,
    ));

    // weak-form dual route on random pairs
    for t in [0.0, 0.3, 0.5, 1.0] {
        let tau = TauParameter::new(t)?;
        let built = build_op_tau(&sym, tau, &g)?.matrix;
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let u = random_packet(&mut rng, &g)?;
            let v = random_packet(&mut rng, &g)?;
            let lhs = l2_inner(&built.apply(&u)?, &v)?;
            let rhs = weak_matrix_element(&field, &u, &v, tau)?;
            worst = worst.max((lhs - rhs).norm() / rhs.norm());
        }
        records.push(ResidualRecord::bounded(
            "weak-form-dual-route",
            Some(t),
            json!({"pairs": 10, "symbol": "gaussian"}),
            worst,
            1e-6,
        ));
    }
    Ok(records)
}

/// The non-invertibility demonstration and the interference-suppression
/// figure.
pub fn noninvert_suite(config: &SuiteConfig) -> Result<Vec<ResidualRecord>> {
    let g = config.grid;
    let mut records = Vec::new();
    // grid point with p1 x1 = 2 pi hbar: indices (n/16, n/16) off-center work
    // for the default n = 256 (16 * 16 = 256 = n)
    let steps = (g.n() as f64).sqrt().round();
    let z1 = PhasePoint::new(steps * g.dx(), steps * g.dp())?;
    let product_check = (z1.x * z1.p - 2.0 * PI * g.hbar()).abs();
    records.push(ResidualRecord::bounded(
        "plane-wave-on-theta-zero-set",
        None,
        json!({"x1": z1.x, "p1": z1.p}),
        product_check,
        1e-9,
    ));

    let sym = SymbolSpec::PlaneWave { z1 };
    let weyl = build_op_tau(&sym, TauParameter::weyl(), &g)?.matrix;
    let bj = build_op_bj(&sym, &g)?.matrix;
    let perm_norm = (g.n() as f64).sqrt() / g.dx();
    records.push(ResidualRecord::bounded(
        "weyl-image-is-unitary-shift",
        None,
        json!({"frobenius": weyl.frobenius_norm()}),
        (weyl.frobenius_norm() - perm_norm).abs() / perm_norm,
        1e-10,
    ));
    records.push(ResidualRecord::bounded(
        "born-jordan-image-vanishes",
        None,
        json!({}),
        bj.frobenius_norm() / weyl.frobenius_norm(),
        1e-8,
    ));
    let aw = bj_to_weyl_symbol(&sym.render(&g)?);
    records.push(ResidualRecord::bounded(
        "weyl-symbol-of-vanishing-bj",
        None,
        json!({}),
        aw.max_abs(),
        1e-8,
    ));

    // interference suppression figure on the two-Gaussian signal
    let psi = two_gaussian(&g, 4.0)?;
    let w = cross_wigner(&psi, &psi)?;
    let q = born_jordan_distribution(&psi, &psi)?;
    let mut peak_w: f64 = 0.0;
    let mut peak_q: f64 = 0.0;
    for i in 0..g.n() {
        if g.x(i).abs() < 1.0 {
            for k in 0..g.n() {
                peak_w = peak_w.max(w.at(i, k).norm());
                peak_q = peak_q.max(q.at(i, k).norm());
            }
        }
    }
    let ratio = peak_q / peak_w;
    records.push(ResidualRecord::bounded(
        "interference-peak-ratio",
        None,
        json!({"peak_wigner": peak_w, "peak_born_jordan": peak_q}),
        ratio,
        1.0,
    ));
    Ok(records)
}

/// Convenience: fail with a config error when the suite name is unknown.
pub fn parse_suite(name: &str) -> Result<SuiteKind> {
    SuiteKind::parse(name).ok_or_else(|| {
        CoreError::InvalidGrid(format!(
            "unknown suite '{name}' (expected moyal|marginals|covariance|adjoints|bj-oracle|noninvert|all)"
        ))
    })
}
