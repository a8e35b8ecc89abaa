//! Correlation tensors and the entanglement identifiers derived from them.
//!
//! For a state with coefficient matrix `C`,
//! `<M_i ⊗ M_j> = Tr((C† M_i C) M_jᵀ)`; with `M_i = Σ a_pq E_pq` this is
//! `Σ a_pq b_rs conj(c_pr) c_qs`, so each entry costs only the product of
//! the sparsities and the `d² × d²` density matrix is never formed.

use crate::basis::{build_gellmann, schwinger_ops, HermitianBasis, SpinConvention};
use crate::linalg::top_singular_value;
use crate::states::PureBipartiteState;
use crate::{CMatrix, Complex64, Error, RMatrix, RVector, Result};
use nalgebra::Matrix3;
use serde::Serialize;

const NORM_TOL: f64 = 1e-10;
const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct CorrelationTensor {
    pub d: usize,
    /// `T_ij`, `i, j = 1 … d²-1`.
    pub t: RMatrix,
    /// `T_i0`.
    pub local_a: RVector,
    /// `T_0j`.
    pub local_b: RVector,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

fn check_normalized(state: &PureBipartiteState) -> Result<()> {
    let norm_sq = state.norm_sq();
    if (norm_sq - 1.0).abs() > NORM_TOL {
        return Err(Error::Normalization { norm_sq });
    }
    Ok(())
}

/// `d / (2(d-1))`.
pub fn tensor_prefactor(d: usize) -> f64 {
    d as f64 / (2.0 * (d as f64 - 1.0))
}

pub fn correlation_tensor(state: &PureBipartiteState) -> Result<CorrelationTensor> {
    let basis = build_gellmann(state.dim())?;
    correlation_tensor_in(state, &basis)
}

/// Correlation tensor with respect to an arbitrary (e.g. reordered) basis.
pub fn correlation_tensor_in(
    state: &PureBipartiteState,
    basis: &HermitianBasis,
) -> Result<CorrelationTensor> {
    check_normalized(state)?;
    let d = state.dim();
    if basis.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            rows: basis.dim(),
            cols: basis.dim(),
        });
    }
    let c = state.coeff();
    let f = tensor_prefactor(d);
    let m0 = basis.identity_scale();
    let gens = basis.generators();
    let ng = gens.len();

    let mut t = RMatrix::zeros(ng, ng);
    let mut local_a = RVector::zeros(ng);
    let mut local_b = RVector::zeros(ng);

    // X(r, s) = Σ_pq a_pq conj(c_pr) c_qs, i.e. C† M C
    let mut x = CMatrix::zeros(d, d);
    let contract = |x: &CMatrix, j: usize| -> f64 {
        gens[j]
            .entries()
            .iter()
            .map(|&(r, s, b)| (b * x[(r, s)]).re)
            .sum()
    };

    for (i, op) in gens.iter().enumerate() {
        x.fill(Complex64::new(0.0, 0.0));
        for &(p, q, a) in op.entries() {
            for r in 0..d {
                let left = a * c[(p, r)].conj();
                for s in 0..d {
                    x[(r, s)] += left * c[(q, s)];
                }
            }
        }
        for j in 0..ng {
            t[(i, j)] = f * contract(&x, j);
        }
        local_a[i] = f * m0 * (0..d).map(|r| x[(r, r)].re).sum::<f64>();
    }

    let gram = c.adjoint() * c;
    for j in 0..ng {
        local_b[j] = f * m0 * contract(&gram, j);
    }

    Ok(CorrelationTensor {
        d,
        t,
        local_a,
        local_b,
    })
}

/// `𝒯 = Σ_{i,j≥1} T_ij²`.
pub fn tensor_norm(t: &CorrelationTensor) -> f64 {
    t.t.iter().map(|x| x * x).sum()
}

/// Largest singular value of `T_ij`.
pub fn t_max(t: &CorrelationTensor) -> Result<f64> {
    let s = top_singular_value(&t.t);
    if s < DEGENERATE_TOL {
        return Err(Error::DegenerateTensor);
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Criterion {
    pub t_norm: f64,
    pub t_max: f64,
    pub epsilon: f64,
    pub entangled_by_norm: bool,
    pub entangled_by_eps: bool,
}

/// Margin above 1 required before a norm or ratio counts as a detection.
pub const DETECTION_MARGIN: f64 = 1e-9;

pub fn epsilon(t: &CorrelationTensor) -> Result<Criterion> {
    let t_norm = tensor_norm(t);
    let t_max = t_max(t)?;
    let epsilon = t_norm / t_max;
    Ok(Criterion {
        t_norm,
        t_max,
        epsilon,
        entangled_by_norm: t_norm > 1.0 + DETECTION_MARGIN,
        entangled_by_eps: epsilon > 1.0 + DETECTION_MARGIN,
    })
}

/// Local Bloch vector `a_i = (d-1) T_i0` (or `T_0i`) and its squared length.
pub fn bloch_vector(t: &CorrelationTensor, side: Side) -> (RVector, f64) {
    let local = match side {
        Side::A => &t.local_a,
        Side::B => &t.local_b,
    };
    let a = local * (t.d as f64 - 1.0);
    let len = a.norm_squared();
    (a, len)
}

/// Schmidt coefficients `σ_k` of the state (singular values of `C`).
pub fn schmidt_coefficients(state: &PureBipartiteState) -> Vec<f64> {
    let mut s: Vec<f64> = state.coeff().clone().singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Entanglement entropy in bits, `-Σ σ² log₂ σ²`.
pub fn von_neumann_entropy(state: &PureBipartiteState) -> f64 {
    schmidt_coefficients(state)
        .into_iter()
        .map(|s| s * s)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// `T'_ij = <S^i ⊗ S^j> / N²` with Schwinger operators.
pub fn spin_tensor(state: &PureBipartiteState) -> Result<Matrix3<f64>> {
    check_normalized(state)?;
    let d = state.dim();
    let n = state.n() as f64;
    let ops = schwinger_ops(d, SpinConvention::Schwinger)?;
    let c = state.coeff();
    let comps = ops.components();
    let mut out = Matrix3::zeros();
    for (i, si) in comps.iter().enumerate() {
        let x = c.adjoint() * *si * c;
        for (j, sj) in comps.iter().enumerate() {
            // Tr(X Sjᵀ) = Σ X_rs Sj_rs
            let v: Complex64 = x.iter().zip(sj.iter()).map(|(a, b)| a * b).sum();
            out[(i, j)] = v.re / (n * n);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpinCriterion {
    pub t_norm: f64,
    pub t_max: f64,
    pub epsilon: f64,
}

pub fn spin_criterion(t: &Matrix3<f64>) -> Result<SpinCriterion> {
    let t_norm = t.iter().map(|x| x * x).sum::<f64>();
    let t_max = t.singular_values().max();
    if t_max < DEGENERATE_TOL {
        return Err(Error::DegenerateTensor);
    }
    Ok(SpinCriterion {
        t_norm,
        t_max,
        epsilon: t_norm / t_max,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CriterionReport {
    pub t_norm: f64,
    pub t_max: f64,
    pub epsilon: f64,
    pub entangled_by_norm: bool,
    pub entangled_by_eps: bool,
    pub bloch_len_a: f64,
    pub bloch_len_b: f64,
    pub entropy: f64,
    pub spin_t_norm: f64,
    pub spin_t_max: f64,
    /// Absent when the spin tensor vanishes.
    pub spin_epsilon: Option<f64>,
}

impl CriterionReport {
    pub fn evaluate(state: &PureBipartiteState) -> Result<Self> {
        let basis = build_gellmann(state.dim())?;
        Self::evaluate_in(state, &basis)
    }

    pub fn evaluate_in(state: &PureBipartiteState, basis: &HermitianBasis) -> Result<Self> {
        let tensor = correlation_tensor_in(state, basis)?;
        let crit = epsilon(&tensor)?;
        let spin = spin_tensor(state)?;
        let spin_t_norm = spin.iter().map(|x| x * x).sum::<f64>();
        let (spin_t_max, spin_epsilon) = match spin_criterion(&spin) {
            Ok(s) => (s.t_max, Some(s.epsilon)),
            Err(Error::DegenerateTensor) => (spin.singular_values().max(), None),
            Err(e) => return Err(e),
        };
        Ok(Self {
            t_norm: crit.t_norm,
            t_max: crit.t_max,
            epsilon: crit.epsilon,
            entangled_by_norm: crit.entangled_by_norm,
            entangled_by_eps: crit.entangled_by_eps,
            bloch_len_a: bloch_vector(&tensor, Side::A).1,
            bloch_len_b: bloch_vector(&tensor, Side::B).1,
            entropy: von_neumann_entropy(state),
            spin_t_norm,
            spin_t_max,
            spin_epsilon,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{maximally_entangled, product_state, spin_coherent, szsz_state};
    use crate::CVector;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    #[test]
    fn n1_szsz_tensor_elements() {
        for &tau in &[0.0, 0.2, FRAC_PI_4, 1.3] {
            let t = correlation_tensor(&szsz_state(1, tau).unwrap()).unwrap();
            let s = (2.0 * tau).sin();
            for i in 0..3 {
                for j in 0..3 {
                    let want = match (i, j) {
                        (0, 0) => 1.0,
                        (1, 2) | (2, 1) => s,
                        _ => 0.0,
                    };
                    assert_abs_diff_eq!(t.t[(i, j)], want, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn maximally_entangled_identifiers() {
        for n in 1..=6 {
            let t = correlation_tensor(&maximally_entangled(n).unwrap()).unwrap();
            let c = epsilon(&t).unwrap();
            let nn = n as f64;
            assert_abs_diff_eq!(c.epsilon, nn + 2.0, epsilon = 1e-10);
            // the d/(2(d-1)) prefactor gives T_ij = ±δ_ij / N
            assert_abs_diff_eq!(c.t_max, 1.0 / nn, epsilon = 1e-12);
            assert_abs_diff_eq!(c.t_norm, (nn + 2.0) / nn, epsilon = 1e-12);
            assert_abs_diff_eq!(bloch_vector(&t, Side::A).1, 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(bloch_vector(&t, Side::B).1, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn product_states_saturate() {
        let u = CVector::from_vec(vec![
            Complex64::new(0.3, 0.1),
            Complex64::new(-0.5, 0.2),
            Complex64::new(0.4, -0.6),
        ]);
        let v = CVector::from_vec(vec![
            Complex64::new(0.0, 1.0),
            Complex64::new(0.7, 0.0),
            Complex64::new(0.1, 0.1),
        ]);
        let (u, v) = (&u / Complex64::from(u.norm()), &v / Complex64::from(v.norm()));
        let s = product_state(&u, &v).unwrap();
        let t = correlation_tensor(&s).unwrap();
        let c = epsilon(&t).unwrap();
        assert_abs_diff_eq!(c.t_max, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.t_norm, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.epsilon, 1.0, epsilon = 1e-12);
        let sv = t.t.clone().singular_values();
        assert_eq!(sv.iter().filter(|&&x| x > 1e-10).count(), 1);
        assert_abs_diff_eq!(bloch_vector(&t, Side::A).1, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(bloch_vector(&t, Side::B).1, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(von_neumann_entropy(&s), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn tensor_norm_closed_forms() {
        for j in 0..32 {
            let tau = j as f64 * std::f64::consts::FRAC_PI_2 / 32.0;
            let t1 = correlation_tensor(&szsz_state(1, tau).unwrap()).unwrap();
            assert_abs_diff_eq!(tensor_norm(&t1), 1.0 + 2.0 * (2.0 * tau).sin().powi(2), epsilon = 1e-12);

            let c = 53.0
                + 48.0 * (4.0 * tau).cos()
                + 24.0 * (8.0 * tau).cos()
                + 3.0 * (16.0 * tau).cos();
            let t2 = correlation_tensor(&szsz_state(2, tau).unwrap()).unwrap();
            assert_abs_diff_eq!(tensor_norm(&t2), 2.0 - c / 128.0, epsilon = 1e-12);
            assert_abs_diff_eq!(t_max(&t2).unwrap(), 0.5 + (c / 2.0).sqrt() / 16.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn n2_quarter_period_values() {
        let t = correlation_tensor(&szsz_state(2, FRAC_PI_4).unwrap()).unwrap();
        let c = epsilon(&t).unwrap();
        assert_abs_diff_eq!(c.t_norm, 1.75, epsilon = 1e-12);
        assert_abs_diff_eq!(c.t_max, 0.75, epsilon = 1e-12);
        assert_abs_diff_eq!(c.epsilon, 7.0 / 3.0, epsilon = 1e-12);
        let t1 = correlation_tensor(&szsz_state(1, FRAC_PI_4).unwrap()).unwrap();
        assert_abs_diff_eq!(epsilon(&t1).unwrap().epsilon, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_tensor() {
        let t = CorrelationTensor {
            d: 2,
            t: RMatrix::zeros(3, 3),
            local_a: RVector::zeros(3),
            local_b: RVector::zeros(3),
        };
        assert_eq!(tensor_norm(&t), 0.0);
        assert!(matches!(t_max(&t), Err(Error::DegenerateTensor)));
        assert!(matches!(epsilon(&t), Err(Error::DegenerateTensor)));
    }

    #[test]
    fn entropy_examples() {
        for n in 1..=6 {
            let s = maximally_entangled(n).unwrap();
            assert_abs_diff_eq!(von_neumann_entropy(&s), ((n + 1) as f64).log2(), epsilon = 1e-10);
        }
        assert_abs_diff_eq!(
            von_neumann_entropy(&szsz_state(1, FRAC_PI_4).unwrap()),
            1.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn rejects_unnormalized() {
        let bad = PureBipartiteState::raw_for_tests(1, CMatrix::identity(2, 2));
        assert!(matches!(correlation_tensor(&bad), Err(Error::Normalization { .. })));
        assert!(matches!(spin_tensor(&bad), Err(Error::Normalization { .. })));
    }

    #[test]
    fn spin_tensor_elements_szsz() {
        for n in 1..=6 {
            for &tau in &[0.0, 0.1, 0.37, 1.0] {
                let t = spin_tensor(&szsz_state(n, tau).unwrap()).unwrap();
                let c = (2.0 * tau).cos();
                let s = (2.0 * tau).sin();
                let xx = c.powi(2 * n as i32 - 2);
                let yz = c.powi(n as i32 - 1) * s;
                for i in 0..3 {
                    for j in 0..3 {
                        let want = match (i, j) {
                            (0, 0) => xx,
                            (1, 2) | (2, 1) => yz,
                            _ => 0.0,
                        };
                        assert_abs_diff_eq!(t[(i, j)], want, epsilon = 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn spin_criterion_at_zero_and_degenerate() {
        for n in 1..=5 {
            let sc = spin_criterion(&spin_tensor(&szsz_state(n, 0.0).unwrap()).unwrap()).unwrap();
            assert_abs_diff_eq!(sc.t_norm, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(sc.t_max, 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(sc.epsilon, 1.0, epsilon = 1e-12);
        }
        assert!(matches!(
            spin_criterion(&Matrix3::zeros()),
            Err(Error::DegenerateTensor)
        ));
        let r = CriterionReport::evaluate(&szsz_state(3, FRAC_PI_4).unwrap()).unwrap();
        assert!(r.spin_epsilon.is_none());
    }

    #[test]
    fn report_is_consistent() {
        let h = Complex64::from(FRAC_1_SQRT_2);
        let v = spin_coherent(3, h, h).unwrap();
        let r = CriterionReport::evaluate(&product_state(&v, &v).unwrap()).unwrap();
        assert_abs_diff_eq!(r.epsilon * r.t_max, r.t_norm, epsilon = 1e-12);
        assert!(!r.entangled_by_eps);
        let r = CriterionReport::evaluate(&szsz_state(3, 0.4).unwrap()).unwrap();
        assert!(r.entangled_by_eps && r.entangled_by_norm);
        assert!(r.entropy <= 2.0 + 1e-12);
        assert_abs_diff_eq!(r.bloch_len_a, r.bloch_len_b, epsilon = 1e-12);
    }
}
