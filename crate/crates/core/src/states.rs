//! Pure two-component states in the `|k)_A |l)_B` basis, stored as the
//! `(N+1) × (N+1)` coefficient matrix `c_kl`.

use crate::combinatorics::{binomial, catalan};
use crate::{CMatrix, CVector, Complex64, Error, Result};
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

const NORM_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct PureBipartiteState {
    n: usize,
    coeff: CMatrix,
    raw_norm: f64,
}

impl PureBipartiteState {
    /// Bosons per component.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Logical dimension `N + 1`.
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    pub fn coeff(&self) -> &CMatrix {
        &self.coeff
    }

    /// Frobenius norm of the matrix the state was built from.
    pub fn raw_norm(&self) -> f64 {
        self.raw_norm
    }

    /// Row-major state vector over `|k)_A ⊗ |l)_B`.
    pub fn to_vector(&self) -> CVector {
        let d = self.dim();
        CVector::from_fn(d * d, |i, _| self.coeff[(i / d, i % d)])
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeff.iter().map(|c| c.norm_sqr()).sum()
    }

    #[cfg(test)]
    pub(crate) fn raw_for_tests(n: usize, coeff: CMatrix) -> Self {
        Self {
            n,
            coeff,
            raw_norm: 1.0,
        }
    }
}

/// Normalizes a raw coefficient matrix into a state.
pub fn from_coefficients(n: usize, raw: CMatrix) -> Result<PureBipartiteState> {
    let d = n + 1;
    if n == 0 {
        return Err(Error::InvalidDimension { d });
    }
    if raw.nrows() != d || raw.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            rows: raw.nrows(),
            cols: raw.ncols(),
        });
    }
    let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::DegenerateState);
    }
    Ok(PureBipartiteState {
        n,
        coeff: raw / Complex64::from(norm),
        raw_norm: norm,
    })
}

/// `|u)_A ⊗ |v)_B` for two single-component amplitude vectors.
pub fn product_state(u: &CVector, v: &CVector) -> Result<PureBipartiteState> {
    if u.len() != v.len() || u.len() < 2 {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            rows: u.len(),
            cols: v.len(),
        });
    }
    from_coefficients(u.len() - 1, u * v.transpose())
}

pub fn maximally_entangled(n: usize) -> Result<PureBipartiteState> {
    from_coefficients(n, CMatrix::identity(n + 1, n + 1))
}

/// `√C(N,k) α^{N-k} β^k`, `k = 0..=N`.
pub fn spin_coherent(n: usize, alpha: Complex64, beta: Complex64) -> Result<CVector> {
    let norm_sq = alpha.norm_sqr() + beta.norm_sqr();
    if (norm_sq - 1.0).abs() > NORM_TOL {
        return Err(Error::Normalization { norm_sq });
    }
    Ok(CVector::from_fn(n + 1, |k, _| {
        alpha.powu((n - k) as u32) * beta.powu(k as u32) * binomial(n as u64, k as u64).sqrt()
    }))
}

/// Two `S^x`-polarized coherent states after `exp(-i τ S_1^z S_2^z)`.
///
/// `τ` is reduced modulo `π/2`.
pub fn szsz_state(n: usize, tau: f64) -> Result<PureBipartiteState> {
    if n == 0 {
        return Err(Error::InvalidDimension { d: 1 });
    }
    let tau = tau.rem_euclid(FRAC_PI_2);
    let d = n + 1;
    let amp: Vec<f64> = (0..d)
        .map(|k| binomial(n as u64, k as u64).sqrt())
        .collect();
    let scale = 0.5f64.powi(n as i32);
    let spin = |k: usize| n as f64 - 2.0 * k as f64;
    let raw = CMatrix::from_fn(d, d, |k, l| {
        Complex64::from_polar(scale * amp[k] * amp[l], -spin(k) * spin(l) * tau)
    });
    from_coefficients(n, raw)
}

#[derive(Clone, Debug)]
pub struct AcStarkOutcome {
    pub n: usize,
    pub t: f64,
    pub n_c: u32,
    pub n_d: u32,
    pub state: PureBipartiteState,
    /// `Σ |A(k1,k2)|²` of the unnormalized projected state.
    pub norm_weight: f64,
}

/// Unnormalized post-measurement amplitudes `A_{n_c,n_d}(k1, k2)`.
pub fn acstark_amplitudes(n: usize, t: f64, n_c: u32, n_d: u32) -> CMatrix {
    let d = n + 1;
    let scale = 0.5f64.powi(n as i32);
    let amp: Vec<f64> = (0..d)
        .map(|k| binomial(n as u64, k as u64).sqrt())
        .collect();
    CMatrix::from_fn(d, d, |k1, k2| {
        let xi = 2.0 * t * (k1 as f64 + k2 as f64 - n as f64) + FRAC_PI_4;
        let sign = if k2 % 2 == 0 { 1.0 } else { -1.0 };
        Complex64::from(
            scale * amp[k1] * amp[k2] * sign * xi.sin().powi(n_c as i32) * xi.cos().powi(n_d as i32),
        )
    })
}

/// State of the two condensates after ac Stark coupling to light and
/// detection of `(n_c, n_d)` photons.
pub fn acstark_state(n: usize, t: f64, n_c: u32, n_d: u32) -> Result<AcStarkOutcome> {
    if n == 0 {
        return Err(Error::InvalidDimension { d: 1 });
    }
    let raw = acstark_amplitudes(n, t, n_c, n_d);
    let norm_weight: f64 = raw.iter().map(|c| c.norm_sqr()).sum();
    // an underflowed or vanishing projection cannot be normalized meaningfully
    if norm_weight < 1e-300 {
        return Err(Error::DegenerateOutcome);
    }
    let state = from_coefficients(n, raw).map_err(|_| Error::DegenerateOutcome)?;
    Ok(AcStarkOutcome {
        n,
        t,
        n_c,
        n_d,
        state,
        norm_weight,
    })
}

/// `(⌊N/2⌋, N - ⌊N/2⌋)`, the photon counts for `|α|² = N`.
pub fn default_photon_outcomes(n: usize) -> (u32, u32) {
    let n_c = (n / 2) as u32;
    (n_c, n as u32 - n_c)
}

/// Post-selection probability of the `N`-pair maximally entangled component.
pub fn pdc_weight(n: usize, k: f64) -> f64 {
    let th = k.tanh();
    (n as f64 + 1.0) * th.powi(2 * n as i32) / k.cosh().powi(4)
}

#[derive(Clone, Debug, Serialize)]
pub struct PdcEnsemble {
    pub k: f64,
    pub n_trunc: usize,
    pub weights: Vec<f64>,
}

impl PdcEnsemble {
    pub const DEFAULT_TAIL_BOUND: f64 = 1e-8;

    pub fn new(k: f64, n_trunc: usize, tail_bound: f64) -> Result<Self> {
        if k.is_nan() || k <= 0.0 {
            return Err(Error::InvalidArgument(format!("squeezing K must be > 0, got {k}")));
        }
        let weights: Vec<f64> = (0..=n_trunc).map(|n| pdc_weight(n, k)).collect();
        let ens = Self { k, n_trunc, weights };
        let tail = ens.tail();
        if tail > tail_bound {
            return Err(Error::Truncation {
                tail,
                bound: tail_bound,
            });
        }
        Ok(ens)
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Missing probability `1 - Σ p_N`, evaluated in closed form so it is
    /// not swamped by rounding in the partial sum.
    pub fn tail(&self) -> f64 {
        // Σ_{N>M} (N+1) x^N = x^{M+1} ((M+2) - (M+1) x) / (1-x)², times sech⁴K = (1-x)²
        let x = self.k.tanh().powi(2);
        let m = self.n_trunc as f64;
        x.powi(self.n_trunc as i32 + 1) * ((m + 2.0) - (m + 1.0) * x)
    }
}

/// Closed-form squared local Bloch length of [`szsz_state`], built from
/// Catalan-number coefficients.
pub fn bloch_length_closed(n: usize, tau: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidDimension { d: 1 });
    }
    let nn = n as f64;
    let cat = catalan(n as u32)? as f64;
    let four_n = 4f64.powi(n as i32);
    let b0 = (nn + 1.0).powi(2) * cat / (four_n * nn) - 1.0 / nn;
    let mut total = b0;
    let mut ratio = 1.0;
    for l in 1..=n {
        if l >= 2 {
            ratio *= (nn - l as f64 + 1.0) / (nn + l as f64);
        }
        let b = 2.0 * cat * (nn + 1.0) * ratio / four_n;
        total += b * (2.0 * l as f64 * tau).cos().powi(2 * n as i32);
    }
    Ok(total)
}
