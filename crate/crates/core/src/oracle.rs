//! Brute-force verifiers that stay independent of the sparse contraction
//! used by [`crate::witness`].

use crate::basis::{
    build_gellmann, gm_index, max_abs_diff, schwinger_ops, spin_gellmann_decomposition,
    appendix_identity_checks, m8_alternate_check, GellMannLabel, HermitianBasis, SpinConvention,
};
use crate::linalg::top_singular_value;
use crate::states::{
    acstark_state, bloch_length_closed, default_photon_outcomes, maximally_entangled,
    pdc_weight, product_state, szsz_state, PdcEnsemble, PureBipartiteState,
};
use crate::witness::{
    bloch_vector, correlation_tensor, epsilon, schmidt_coefficients, spin_tensor, t_max,
    tensor_norm, tensor_prefactor, CorrelationTensor, Side,
};
use crate::{CMatrix, CVector, Complex64, Error, RMatrix, RVector, Result};
use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;
use std::f64::consts::FRAC_PI_2;

/// Dense reconstruction is `d⁴` entries; beyond this it is not an oracle anymore.
pub const MAX_DENSE_DIM: usize = 12;

pub const EXACT_TOL: f64 = 1e-12;
pub const NUMERIC_TOL: f64 = 1e-10;
pub const CLOSED_FORM_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct OracleReport {
    pub check_name: String,
    pub max_abs_error: f64,
    pub search_gap: Option<f64>,
    pub passed: bool,
    pub samples: usize,
}

impl OracleReport {
    pub fn new(name: impl Into<String>, max_abs_error: f64, tol: f64, samples: usize) -> Self {
        Self {
            check_name: name.into(),
            max_abs_error,
            search_gap: None,
            passed: max_abs_error < tol,
            samples,
        }
    }
}

fn kron_sparse_into(
    out: &mut CMatrix,
    a: &crate::basis::SparseMatrix,
    b: &crate::basis::SparseMatrix,
    weight: f64,
) {
    let d = a.dim();
    for &(p, q, x) in a.entries() {
        for &(r, s, y) in b.entries() {
            out[(p * d + r, q * d + s)] += x * y * weight;
        }
    }
}

fn check_dense_dim(d: usize) -> Result<()> {
    if d > MAX_DENSE_DIM {
        return Err(Error::ScaleLimit(format!(
            "dense reconstruction needs d <= {MAX_DENSE_DIM}, got {d}"
        )));
    }
    Ok(())
}

/// Reassembles `ρ` from the full tensor (including local parts).
pub fn reconstruct_density(t: &CorrelationTensor) -> Result<CMatrix> {
    let d = t.d;
    check_dense_dim(d)?;
    let basis = build_gellmann(d)?;
    let mut rho = CMatrix::zeros(d * d, d * d);
    let m0 = basis.element(0);
    let df = d as f64 - 1.0;
    kron_sparse_into(&mut rho, m0, m0, 1.0);
    for (i, mi) in basis.generators().iter().enumerate() {
        for (j, mj) in basis.generators().iter().enumerate() {
            let w = t.t[(i, j)];
            if w != 0.0 {
                kron_sparse_into(&mut rho, mi, mj, w);
            }
        }
        kron_sparse_into(&mut rho, mi, m0, df * t.local_a[i]);
        kron_sparse_into(&mut rho, m0, mi, df * t.local_b[i]);
    }
    rho *= Complex64::from(df / (2.0 * d as f64));
    Ok(rho)
}

pub fn pure_density(state: &PureBipartiteState) -> CMatrix {
    let v = state.to_vector();
    &v * v.adjoint()
}

/// `max |ρ_reconstructed - |ψ><ψ||` together with the reconstruction's trace.
pub fn roundtrip_error(state: &PureBipartiteState) -> Result<(f64, f64)> {
    let t = correlation_tensor(state)?;
    let rho = reconstruct_density(&t)?;
    let trace: Complex64 = rho.diagonal().iter().sum();
    Ok((max_abs_diff(&rho, &pure_density(state)), trace.re))
}

/// `T_ij` from `<ψ| M_i ⊗ M_j |ψ>` with dense Kronecker products.
pub fn brute_force_tensor(state: &PureBipartiteState) -> Result<RMatrix> {
    let d = state.dim();
    check_dense_dim(d)?;
    let basis = build_gellmann(d)?;
    let psi = state.to_vector();
    let f = tensor_prefactor(d);
    let ng = d * d - 1;
    let dense: Vec<CMatrix> = (1..=ng).map(|i| basis.dense(i)).collect();
    Ok(RMatrix::from_fn(ng, ng, |i, j| {
        let op = dense[i].kronecker(&dense[j]);
        f * (psi.adjoint() * op * &psi)[(0, 0)].re
    }))
}

pub fn random_unit_vector(dim: usize, rng: &mut impl Rng) -> CVector {
    let v = CVector::from_fn(dim, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let norm = v.norm();
    v / Complex64::from(norm)
}

pub fn random_product(n: usize, rng: &mut impl Rng) -> PureBipartiteState {
    let u = random_unit_vector(n + 1, rng);
    let v = random_unit_vector(n + 1, rng);
    product_state(&u, &v).expect("unit vectors of equal length")
}

/// Random pure state with Schmidt rank at least two: a Gaussian coefficient
/// matrix whose second Schmidt value is floored at a fifth of the first.
pub fn random_entangled(n: usize, rng: &mut impl Rng) -> PureBipartiteState {
    let d = n + 1;
    let mut raw = CMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    // keep the two largest Schmidt values well separated from zero
    let svd = raw.clone().svd(true, true);
    let (u, vt) = (svd.u.unwrap(), svd.v_t.unwrap());
    let mut s = svd.singular_values.map(Complex64::from);
    let top = s[0].re;
    if s.len() > 1 && s[1].re < 0.2 * top {
        s[1] = Complex64::from(0.2 * top);
    }
    raw = &u * CMatrix::from_diagonal(&s) * &vt;
    crate::states::from_coefficients(n, raw).expect("nonzero Gaussian matrix")
}

fn local_expectations(basis: &HermitianBasis, u: &CVector) -> RVector {
    let gens = basis.generators();
    RVector::from_fn(gens.len(), |i, _| {
        gens[i]
            .entries()
            .iter()
            .map(|&(p, q, a)| (u[p].conj() * a * u[q]).re)
            .sum()
    })
}

fn weighted_operator(basis: &HermitianBasis, weights: &RVector) -> CMatrix {
    let d = basis.dim();
    let mut h = CMatrix::zeros(d, d);
    for (op, &w) in basis.generators().iter().zip(weights.iter()) {
        for &(p, q, a) in op.entries() {
            h[(p, q)] += a * w;
        }
    }
    h
}

fn top_eigenvector(h: CMatrix) -> CVector {
    let eig = SymmetricEigen::new(h);
    let (idx, _) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    eig.eigenvectors.column(idx).into_owned()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct OverlapSearch {
    pub best: f64,
    pub t_max: f64,
    pub gap: f64,
    pub bound_respected: bool,
    pub iterations: usize,
}

const RESTART_EVERY: usize = 20;

/// Lower bound on `max (T, T^prod)` over pure product states: singular-vector
/// and random starts, each followed by alternating exact maximization.
pub fn product_overlap_search(t: &CorrelationTensor, iterations: usize, seed: u64) -> Result<OverlapSearch> {
    if iterations == 0 {
        return Err(Error::InvalidArgument("iterations must be >= 1".into()));
    }
    let basis = build_gellmann(t.d)?;
    let f = tensor_prefactor(t.d);
    let tm = t_max(t)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let overlap = |r: &RVector, s: &RVector| f * r.dot(&(&t.t * s));
    let mut best = f64::NEG_INFINITY;
    let mut v = CVector::zeros(t.d);

    // the first start follows the top right singular vector; alternating
    // ascent alone can settle where both local states are anti-aligned
    let svd = t.t.clone().svd(false, true);
    let top = (0..svd.singular_values.len())
        .max_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]))
        .unwrap_or(0);
    let right: RVector = svd.v_t.as_ref().expect("v_t requested").row(top).transpose();

    for step in 0..iterations {
        if step % RESTART_EVERY == 0 {
            v = if step == 0 {
                // the singular vector's sign is arbitrary; keep whichever side ascends further
                [right.clone(), -&right]
                    .into_iter()
                    .map(|w| {
                        let v = top_eigenvector(weighted_operator(&basis, &w));
                        let s = local_expectations(&basis, &v);
                        let u = top_eigenvector(weighted_operator(&basis, &(&t.t * &s)));
                        (overlap(&local_expectations(&basis, &u), &s), v)
                    })
                    .max_by(|a, b| a.0.total_cmp(&b.0))
                    .map(|(_, v)| v)
                    .expect("two candidates")
            } else {
                random_unit_vector(t.d, &mut rng)
            };
            let u = random_unit_vector(t.d, &mut rng);
            let start = overlap(&local_expectations(&basis, &u), &local_expectations(&basis, &v));
            best = best.max(start);
        }
        let s = local_expectations(&basis, &v);
        let u = top_eigenvector(weighted_operator(&basis, &(&t.t * &s)));
        let r = local_expectations(&basis, &u);
        v = top_eigenvector(weighted_operator(&basis, &(t.t.transpose() * &r)));
        let s = local_expectations(&basis, &v);
        best = best.max(overlap(&r, &s));
    }
    Ok(OverlapSearch {
        best,
        t_max: tm,
        gap: tm - best,
        bound_respected: best <= tm + 1e-8,
        iterations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceFamily {
    SzszN1,
    SzszN2,
    SpinElements,
    BlochClosed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ReferenceValues {
    pub t_norm: Option<f64>,
    pub t_max: Option<f64>,
    pub spin_xx: Option<f64>,
    pub spin_yz: Option<f64>,
    pub bloch_sq: Option<f64>,
}

/// Reference closed forms, written out term by term.
pub fn reference_closed_forms(family: ReferenceFamily, n: usize, tau: f64) -> Result<ReferenceValues> {
    let unsupported = || Error::UnsupportedReference(format!("{family:?} with N = {n}"));
    let cos = |m: f64| (m * tau).cos();
    match family {
        ReferenceFamily::SzszN1 => {
            if n != 1 {
                return Err(unsupported());
            }
            Ok(ReferenceValues {
                t_norm: Some(1.0 + 2.0 * (2.0 * tau).sin().powi(2)),
                t_max: Some(1.0),
                ..Default::default()
            })
        }
        ReferenceFamily::SzszN2 => {
            if n != 2 {
                return Err(unsupported());
            }
            let c = 53.0 + 48.0 * cos(4.0) + 24.0 * cos(8.0) + 3.0 * cos(16.0);
            Ok(ReferenceValues {
                t_norm: Some(2.0 - c / 128.0),
                t_max: Some(0.5 + (c / 2.0).sqrt() / 16.0),
                ..Default::default()
            })
        }
        ReferenceFamily::SpinElements => {
            if n == 0 {
                return Err(unsupported());
            }
            let c = cos(2.0);
            Ok(ReferenceValues {
                spin_xx: Some(c.powi(2 * n as i32 - 2)),
                spin_yz: Some(c.powi(n as i32 - 1) * (2.0 * tau).sin()),
                ..Default::default()
            })
        }
        ReferenceFamily::BlochClosed => {
            let bloch = match n {
                1 => cos(2.0).powi(2),
                2 => 1.0 / 16.0 + 0.75 * cos(2.0).powi(4) + 3.0 / 16.0 * cos(4.0).powi(4),
                3 => {
                    1.0 / 12.0 + 5.0 / 8.0 * cos(2.0).powi(6) + 0.25 * cos(4.0).powi(6)
                        + cos(6.0).powi(6) / 24.0
                }
                4 => {
                    47.0 / 512.0
                        + 35.0 / 64.0 * cos(2.0).powi(8)
                        + 35.0 / 128.0 * cos(4.0).powi(8)
                        + 5.0 / 64.0 * cos(6.0).powi(8)
                        + 5.0 / 512.0 * cos(8.0).powi(8)
                }
                _ => return Err(unsupported()),
            };
            Ok(ReferenceValues {
                bloch_sq: Some(bloch),
                ..Default::default()
            })
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PdcAverage {
    pub k: f64,
    pub series: f64,
    pub closed: f64,
    pub difference: f64,
    pub weight_sum: f64,
}

/// Identifier of the post-selected `N`-pair state; the vacuum term is a
/// product state and contributes `1`.
pub fn pdc_component_epsilon(n: usize) -> f64 {
    if n == 0 {
        1.0
    } else {
        n as f64 + 2.0
    }
}

pub fn pdc_epsilon_closed(k: f64) -> f64 {
    (15.0 * (2.0 * k).cosh() + 6.0 * (4.0 * k).cosh() + (6.0 * k).cosh() - 6.0)
        / (16.0 * k.cosh().powi(4))
}

/// Truncated `Σ p_N ε⁽ᴺ⁾` next to the closed-form average.
pub fn pdc_epsilon_average(k: f64, n_trunc: usize) -> Result<PdcAverage> {
    let ens = PdcEnsemble::new(k, n_trunc, PdcEnsemble::DEFAULT_TAIL_BOUND)?;
    let series: f64 = ens
        .weights
        .iter()
        .enumerate()
        .map(|(n, p)| p * pdc_component_epsilon(n))
        .sum();
    let closed = pdc_epsilon_closed(k);
    debug_assert!((ens.weights[2] - pdc_weight(2, k)).abs() < 1e-15);
    Ok(PdcAverage {
        k,
        series,
        closed,
        difference: (series - closed).abs(),
        weight_sum: ens.total(),
    })
}

/// Schmidt rank above `1e-10` exceeds one.
pub fn pure_entanglement_oracle(state: &PureBipartiteState) -> bool {
    schmidt_coefficients(state)
        .iter()
        .filter(|&&s| s > 1e-10)
        .count()
        > 1
}

fn tau_grid(points: usize) -> impl Iterator<Item = f64> {
    (0..points).map(move |j| j as f64 * FRAC_PI_2 / points as f64)
}

fn random_hermitian(d: usize, rng: &mut impl Rng) -> CMatrix {
    let a = CMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    (&a + a.adjoint()) * Complex64::from(0.5)
}

/// Construction properties of the Gell-Mann basis and the spin
/// decomposition for one dimension.
pub fn check_basis(d: usize) -> Result<Vec<OracleReport>> {
    let basis = build_gellmann(d)?;
    let n = basis.len();
    let mut herm = 0.0f64;
    let mut traceless = 0.0f64;
    for i in 0..n {
        let m = basis.dense(i);
        herm = herm.max(max_abs_diff(&m, &m.adjoint()));
        if i > 0 {
            traceless = traceless.max(basis.element(i).trace().norm());
        }
    }
    let mut ortho = 0.0f64;
    for i in 1..n {
        for j in 1..n {
            let want = if i == j { 2.0 } else { 0.0 };
            ortho = ortho.max((basis.element(i).trace_product(basis.element(j)) - want).norm());
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ d as u64);
    let trials = 20;
    let mut complete = 0.0f64;
    for _ in 0..trials {
        let h = random_hermitian(d, &mut rng);
        let mut rebuilt = CMatrix::zeros(d, d);
        for i in 0..n {
            let m = basis.dense(i);
            let coeff = (&h * &m).trace() / (&m * &m).trace();
            rebuilt += m * coeff;
        }
        complete = complete.max(max_abs_diff(&rebuilt, &h));
    }

    let mut index_err = 0.0f64;
    for k in 1..d {
        let sym = gm_index(d, GellMannLabel::Symmetric { row: k - 1, col: k })?;
        let anti = gm_index(d, GellMannLabel::Antisymmetric { row: k - 1, col: k })?;
        let diag = gm_index(d, GellMannLabel::Diagonal { level: k })?;
        let formula_sym = (2 * d * (k - 1) + k + 2 - k * k) / 2;
        let formula_anti = d * (d - 1) / 2 + k * (k - 1) / 2 + 1;
        let formula_diag = d * (d - 1) + k;
        let label_ok = basis.index_of(GellMannLabel::Symmetric { row: k - 1, col: k }) == Some(sym)
            && basis.index_of(GellMannLabel::Antisymmetric { row: k - 1, col: k }) == Some(anti)
            && basis.index_of(GellMannLabel::Diagonal { level: k }) == Some(diag);
        if sym != formula_sym || anti != formula_anti || diag != formula_diag || !label_ok {
            index_err = 1.0;
        }
    }

    let parts = spin_gellmann_decomposition(d)?.assemble(&basis);
    let spin = schwinger_ops(d, SpinConvention::SpinJ)?;
    let spin_err = parts
        .iter()
        .zip(spin.components())
        .map(|(a, b)| max_abs_diff(a, b))
        .fold(0.0, f64::max);

    Ok(vec![
        OracleReport::new(format!("basis/hermitian d={d}"), herm, EXACT_TOL, n),
        OracleReport::new(format!("basis/traceless d={d}"), traceless, EXACT_TOL, n - 1),
        OracleReport::new(format!("basis/orthogonality d={d}"), ortho, EXACT_TOL, (n - 1) * (n - 1)),
        OracleReport::new(format!("basis/completeness d={d}"), complete, NUMERIC_TOL, trials),
        OracleReport::new(format!("basis/index_formulas d={d}"), index_err, 0.5, d - 1),
        OracleReport::new(format!("basis/spin_decomposition d={d}"), spin_err, EXACT_TOL, 3),
    ])
}

pub fn check_appendix() -> Vec<OracleReport> {
    let error_report = |e: Error| OracleReport {
        check_name: format!("appendix/error: {e}"),
        max_abs_error: f64::INFINITY,
        search_gap: None,
        passed: false,
        samples: 0,
    };
    let mut out: Vec<OracleReport> = match appendix_identity_checks() {
        Ok(report) => report
            .checks
            .into_iter()
            .map(|c| OracleReport::new(format!("appendix/{}", c.matrix), c.max_abs_error, EXACT_TOL, 1))
            .collect(),
        Err(e) => vec![error_report(e)],
    };
    out.push(match m8_alternate_check() {
        Ok(c) => OracleReport::new(format!("appendix/{}", c.matrix), c.max_abs_error, EXACT_TOL, 1),
        Err(e) => error_report(e),
    });
    out
}

/// Reference closed forms against the computed identifiers.
pub fn check_closed_forms() -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    for (family, n) in [(ReferenceFamily::SzszN1, 1), (ReferenceFamily::SzszN2, 2)] {
        let mut err = 0.0f64;
        let grid: Vec<f64> = tau_grid(128).collect();
        for &tau in &grid {
            let t = correlation_tensor(&szsz_state(n, tau)?)?;
            let r = reference_closed_forms(family, n, tau)?;
            err = err.max((tensor_norm(&t) - r.t_norm.unwrap()).abs());
            err = err.max((t_max(&t)? - r.t_max.unwrap()).abs());
        }
        out.push(OracleReport::new(format!("closed_forms/szsz N={n}"), err, CLOSED_FORM_TOL, grid.len()));
    }

    let mut expansion = 0.0f64;
    let mut general = 0.0f64;
    let mut samples = 0;
    for n in 1..=8 {
        for tau in tau_grid(64) {
            let t = correlation_tensor(&szsz_state(n, tau)?)?;
            let len = bloch_vector(&t, Side::A).1;
            general = general.max((len - bloch_length_closed(n, tau)?).abs());
            if n <= 4 {
                let r = reference_closed_forms(ReferenceFamily::BlochClosed, n, tau)?;
                expansion = expansion.max((len - r.bloch_sq.unwrap()).abs());
            }
            samples += 1;
        }
    }
    out.push(OracleReport::new("closed_forms/bloch_expansion N=1..4", expansion, CLOSED_FORM_TOL, 4 * 64));
    out.push(OracleReport::new("closed_forms/bloch_catalan N=1..8", general, CLOSED_FORM_TOL, samples));

    let mut spin_err = 0.0f64;
    let mut samples = 0;
    for n in 1..=10 {
        for tau in tau_grid(64) {
            let st = spin_tensor(&szsz_state(n, tau)?)?;
            let r = reference_closed_forms(ReferenceFamily::SpinElements, n, tau)?;
            let (xx, yz) = (r.spin_xx.unwrap(), r.spin_yz.unwrap());
            for i in 0..3 {
                for j in 0..3 {
                    let want = match (i, j) {
                        (0, 0) => xx,
                        (1, 2) | (2, 1) => yz,
                        _ => 0.0,
                    };
                    spin_err = spin_err.max((st[(i, j)] - want).abs());
                }
            }
            samples += 1;
        }
    }
    out.push(OracleReport::new("closed_forms/spin_elements N=1..10", spin_err, CLOSED_FORM_TOL, samples));

    let mut eps_err = 0.0f64;
    for n in 1..=10 {
        let c = epsilon(&correlation_tensor(&maximally_entangled(n)?)?)?;
        eps_err = eps_err.max((c.epsilon - (n as f64 + 2.0)).abs());
    }
    out.push(OracleReport::new("closed_forms/maxent epsilon=N+2", eps_err, CLOSED_FORM_TOL, 10));

    let mut pdc_err = 0.0f64;
    for j in 0..30 {
        let k = 0.05 + j as f64 * (1.45 / 29.0);
        pdc_err = pdc_err.max(pdc_epsilon_average(k, 200)?.difference);
    }
    out.push(OracleReport::new("closed_forms/pdc_average", pdc_err, 1e-8, 30));
    Ok(out)
}

fn family_states(max_n: usize) -> Result<Vec<(String, PureBipartiteState)>> {
    let mut states = Vec::new();
    for n in 1..=max_n {
        states.push((format!("maxent N={n}"), maximally_entangled(n)?));
        for &tau in &[0.0, 0.3, 0.9] {
            states.push((format!("szsz N={n} tau={tau}"), szsz_state(n, tau)?));
        }
        let (nc, nd) = default_photon_outcomes(n);
        for &t in &[0.0, 0.2, 2.5 / n as f64] {
            states.push((format!("acstark N={n} t={t}"), acstark_state(n, t, nc, nd)?.state));
        }
    }
    Ok(states)
}

/// Density round-trip over the state families plus the product-overlap bound
/// and criterion soundness on random states.
pub fn check_roundtrip(seed: u64) -> Result<Vec<OracleReport>> {
    let mut out = Vec::new();
    let states = family_states(6)?;
    let mut err = 0.0f64;
    let mut trace_err = 0.0f64;
    for (_, s) in &states {
        let (e, tr) = roundtrip_error(s)?;
        err = err.max(e);
        trace_err = trace_err.max((tr - 1.0).abs());
    }
    out.push(OracleReport::new("roundtrip/density N<=6", err, NUMERIC_TOL, states.len()));
    out.push(OracleReport::new("roundtrip/unit_trace N<=6", trace_err, NUMERIC_TOL, states.len()));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut excess = f64::NEG_INFINITY;
    let mut worst_gap = 0.0f64;
    let mut unsound = 0.0;
    let count = 50;
    for i in 0..count {
        let n = 1 + i % 3;
        let s = if i % 2 == 0 {
            random_entangled(n, &mut rng)
        } else {
            random_product(n, &mut rng)
        };
        let t = correlation_tensor(&s)?;
        let search = product_overlap_search(&t, 60, seed.wrapping_add(i as u64))?;
        excess = excess.max(search.best - search.t_max);
        worst_gap = worst_gap.max(search.gap);
        if epsilon(&t)?.entangled_by_eps && !pure_entanglement_oracle(&s) {
            unsound = 1.0;
        }
    }
    let mut bound = OracleReport::new("oracle/product_overlap_bound", excess.max(0.0), 1e-8, count);
    bound.search_gap = Some(worst_gap);
    out.push(bound);
    out.push(OracleReport::new("oracle/criterion_soundness", unsound, 0.5, count));
    Ok(out)
}

/// Brute-force `T` agrees with the sparse contraction.
pub fn check_contraction(max_n: usize) -> Result<OracleReport> {
    let states = family_states(max_n)?;
    let mut err = 0.0f64;
    for (_, s) in &states {
        let fast = correlation_tensor(s)?;
        let slow = brute_force_tensor(s)?;
        err = err.max((&fast.t - slow).abs().max());
    }
    Ok(OracleReport::new(format!("oracle/contraction N<={max_n}"), err, NUMERIC_TOL, states.len()))
}

/// Largest singular value through both numerical routes.
pub fn check_singular_routes(t: &CorrelationTensor) -> f64 {
    let a = top_singular_value(&t.t);
    let b = crate::linalg::lanczos_top_singular_value(&t.t);
    (a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn roundtrip_examples() {
        let (e, tr) = roundtrip_error(&maximally_entangled(2).unwrap()).unwrap();
        assert!(e < 1e-10);
        assert_abs_diff_eq!(tr, 1.0, epsilon = 1e-12);
        let (e, _) = roundtrip_error(&szsz_state(1, 0.3).unwrap()).unwrap();
        assert!(e < 1e-12);
        let big = maximally_entangled(12).unwrap();
        let t = correlation_tensor(&big).unwrap();
        assert!(matches!(reconstruct_density(&t), Err(Error::ScaleLimit(_))));
    }

    #[test]
    fn contraction_matches_brute_force() {
        let rep = check_contraction(3).unwrap();
        assert!(rep.passed, "{rep:?}");
    }

    #[test]
    fn search_on_product_and_bell() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_product(2, &mut rng);
        let t = correlation_tensor(&p).unwrap();
        let s = product_overlap_search(&t, 200, 1).unwrap();
        assert_abs_diff_eq!(s.best, 1.0, epsilon = 1e-8);
        assert!(s.gap.abs() < 1e-8);

        let t = correlation_tensor(&maximally_entangled(1).unwrap()).unwrap();
        let s = product_overlap_search(&t, 10_000, 9).unwrap();
        assert!((s.best - 1.0).abs() < 1e-3);
        assert!(s.bound_respected);
        assert!(product_overlap_search(&t, 0, 9).is_err());
    }

    #[test]
    fn search_closes_the_gap_on_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for i in 0..40 {
            let p = random_product(1 + i % 4, &mut rng);
            let s = product_overlap_search(&correlation_tensor(&p).unwrap(), 20, i as u64).unwrap();
            assert!(s.gap.abs() < 1e-9, "i={i} gap={}", s.gap);
        }
    }

    #[test]
    fn search_is_deterministic() {
        let t = correlation_tensor(&szsz_state(3, 0.4).unwrap()).unwrap();
        let a = product_overlap_search(&t, 100, 5).unwrap();
        let b = product_overlap_search(&t, 100, 5).unwrap();
        assert_eq!(a.best, b.best);
    }

    #[test]
    fn reference_examples() {
        let r = reference_closed_forms(ReferenceFamily::SzszN2, 2, 0.0).unwrap();
        assert_abs_diff_eq!(r.t_norm.unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.t_max.unwrap(), 1.0, epsilon = 1e-15);
        let r = reference_closed_forms(ReferenceFamily::SzszN1, 1, FRAC_PI_4).unwrap();
        assert_abs_diff_eq!(r.t_norm.unwrap(), 3.0, epsilon = 1e-15);
        let r = reference_closed_forms(ReferenceFamily::SpinElements, 5, 0.2).unwrap();
        assert_abs_diff_eq!(r.spin_xx.unwrap(), 0.4f64.cos().powi(8), epsilon = 1e-15);
        assert!(matches!(
            reference_closed_forms(ReferenceFamily::SzszN1, 3, 0.1),
            Err(Error::UnsupportedReference(_))
        ));
        assert!(reference_closed_forms(ReferenceFamily::BlochClosed, 5, 0.1).is_err());
    }

    #[test]
    fn pdc_average_examples() {
        let a = pdc_epsilon_average(1e-6, 200).unwrap();
        assert_abs_diff_eq!(a.series, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(a.closed, 1.0, epsilon = 1e-9);
        let a = pdc_epsilon_average(0.5, 200).unwrap();
        assert!(a.difference < 1e-8);
        let mut prev = 1.0;
        for j in 0..30 {
            let k = 0.05 + j as f64 * 0.05;
            let e = pdc_epsilon_closed(k);
            assert!(e > prev);
            prev = e;
        }
        assert!(matches!(pdc_epsilon_average(1.5, 20), Err(Error::Truncation { .. })));
    }

    #[test]
    fn schmidt_oracle_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(!pure_entanglement_oracle(&random_product(3, &mut rng)));
        assert!(pure_entanglement_oracle(&szsz_state(3, 0.2).unwrap()));
        assert!(pure_entanglement_oracle(&maximally_entangled(4).unwrap()));
    }

    #[test]
    fn suites_pass() {
        for r in check_basis(4).unwrap() {
            assert!(r.passed, "{r:?}");
        }
        let appendix = check_appendix();
        assert_eq!(appendix.len(), 9);
        let failed: Vec<&str> =
            appendix.iter().filter(|r| !r.passed).map(|r| r.check_name.as_str()).collect();
        assert_eq!(failed, vec!["appendix/M_8"]);
        for r in check_closed_forms().unwrap() {
            assert!(r.passed, "{r:?}");
        }
    }
}
