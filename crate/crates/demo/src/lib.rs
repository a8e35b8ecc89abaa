//! Browser bindings: three curves computed on demand for the static page in
//! `www/`. Each returns a flat array of `stride`-sized records.

use boson_witness::oracle::pdc_epsilon_average;
use boson_witness::states::{acstark_state, default_photon_outcomes, szsz_state};
use boson_witness::witness::CriterionReport;
use boson_witness::Result;
use wasm_bindgen::prelude::*;

/// Record layout for the state curves: `param, t_norm, t_max, epsilon, spin_epsilon`
/// (a degenerate spin tensor gives `NaN`).
pub const CURVE_STRIDE: usize = 5;
/// Record layout for the squeezed vacuum curve: `k, series, closed`.
pub const PDC_STRIDE: usize = 3;

const MAX_N: usize = 20;
const MAX_STEPS: usize = 2000;

fn check_inputs(n: usize, steps: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(boson_witness::Error::InvalidArgument(format!("N must be in 1..={MAX_N}")));
    }
    if steps == 0 || steps > MAX_STEPS {
        return Err(boson_witness::Error::InvalidArgument(format!("steps must be in 1..={MAX_STEPS}")));
    }
    Ok(())
}

fn push_report(out: &mut Vec<f64>, param: f64, r: &CriterionReport) {
    out.extend([param, r.t_norm, r.t_max, r.epsilon, r.spin_epsilon.unwrap_or(f64::NAN)]);
}

pub fn szsz_points(n: usize, steps: usize) -> Result<Vec<f64>> {
    check_inputs(n, steps)?;
    let mut out = Vec::with_capacity(steps * CURVE_STRIDE);
    for i in 0..steps {
        let tau = std::f64::consts::FRAC_PI_2 * i as f64 / steps as f64;
        push_report(&mut out, tau, &CriterionReport::evaluate(&szsz_state(n, tau)?)?);
    }
    Ok(out)
}

pub fn acstark_points(n: usize, steps: usize) -> Result<Vec<f64>> {
    check_inputs(n, steps)?;
    let (nc, nd) = default_photon_outcomes(n);
    let mut out = Vec::with_capacity(steps * CURVE_STRIDE);
    for i in 0..steps {
        let t = std::f64::consts::FRAC_PI_2 * i as f64 / steps as f64;
        let outcome = acstark_state(n, t, nc, nd)?;
        push_report(&mut out, t, &CriterionReport::evaluate(&outcome.state)?);
    }
    Ok(out)
}

pub fn pdc_points(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    check_inputs(1, steps)?;
    if !(lo > 0.0 && hi >= lo) {
        return Err(boson_witness::Error::InvalidArgument("need 0 < lo <= hi".into()));
    }
    let h = if steps > 1 { (hi - lo) / (steps - 1) as f64 } else { 0.0 };
    let mut out = Vec::with_capacity(steps * PDC_STRIDE);
    for i in 0..steps {
        let avg = pdc_epsilon_average(lo + i as f64 * h, 200)?;
        out.extend([avg.k, avg.series, avg.closed]);
    }
    Ok(out)
}

fn to_js<T>(r: Result<T>) -> std::result::Result<T, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

/// `τ` over `[0, π/2)` for the S^zS^z-evolved spin coherent pair.
#[wasm_bindgen]
pub fn szsz_curve(n: usize, steps: usize) -> std::result::Result<Vec<f64>, JsError> {
    to_js(szsz_points(n, steps))
}

/// `t` over `[0, π/2)` for the ac Stark state at the default photon outcome.
#[wasm_bindgen]
pub fn acstark_curve(n: usize, steps: usize) -> std::result::Result<Vec<f64>, JsError> {
    to_js(acstark_points(n, steps))
}

/// Averaged identifier of the squeezed vacuum on an inclusive `K` grid.
#[wasm_bindgen]
pub fn pdc_curve(lo: f64, hi: f64, steps: usize) -> std::result::Result<Vec<f64>, JsError> {
    to_js(pdc_points(lo, hi, steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn szsz_curve_shape() {
        let v = szsz_points(1, 8).unwrap();
        assert_eq!(v.len(), 8 * CURVE_STRIDE);
        for rec in v.chunks(CURVE_STRIDE) {
            let want = 1.0 + 2.0 * (2.0 * rec[0]).sin().powi(2);
            assert!((rec[1] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_spin_tensor_is_nan() {
        let v = szsz_points(2, 4).unwrap();
        assert!(v[2 * CURVE_STRIDE + 4].is_nan());
    }

    #[test]
    fn acstark_and_pdc() {
        let v = acstark_points(3, 6).unwrap();
        assert!(v.chunks(CURVE_STRIDE).skip(1).all(|r| r[3] > 1.0));
        let p = pdc_points(0.1, 1.5, 5).unwrap();
        assert!((p[p.len() - 3] - 1.5).abs() < 1e-15);
        assert!(p.chunks(PDC_STRIDE).all(|r| (r[1] - r[2]).abs() < 1e-8 && r[1] > 1.0));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(szsz_points(0, 4).is_err());
        assert!(szsz_points(21, 4).is_err());
        assert!(acstark_points(3, 0).is_err());
        assert!(pdc_points(0.0, 1.0, 3).is_err());
    }
}
