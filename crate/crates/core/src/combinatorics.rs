use crate::{Error, Result};
use statrs::function::gamma::ln_gamma;

const EXACT_BINOMIAL_LIMIT: u64 = 60;

/// `C(n, k)` as a float: exact integer arithmetic up to `n = 60`, log-gamma above.
pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    if n <= EXACT_BINOMIAL_LIMIT {
        let k = k.min(n - k);
        let mut acc: u128 = 1;
        for i in 0..k {
            // stays integral at every step
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        acc as f64
    } else {
        let (n, k) = (n as f64, k as f64);
        (ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)).exp()
    }
}

/// Catalan number `C(2n, n) / (n + 1)`, exact.
pub fn catalan(n: u32) -> Result<u64> {
    let mut acc: u128 = 1;
    for i in 0..n as u128 {
        // C_{i+1} = C_i · 2(2i+1) / (i+2)
        acc = acc
            .checked_mul(2 * (2 * i + 1))
            .ok_or_else(|| Error::Range(format!("Cat({n})")))?
            / (i + 2);
    }
    u64::try_from(acc).map_err(|_| Error::Range(format!("Cat({n}) exceeds u64")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0).unwrap(), 1);
        assert_eq!(catalan(3).unwrap(), 5);
        assert_eq!(catalan(4).unwrap(), 14);
        assert_eq!(catalan(30).unwrap(), 3_814_986_502_092_304);
        assert!(catalan(40).is_err());
    }

    #[test]
    fn catalan_matches_central_binomial() {
        for n in 0..=30u32 {
            let c = binomial(2 * n as u64, n as u64) / (n as f64 + 1.0);
            assert_eq!(catalan(n).unwrap() as f64, c.round(), "n={n}");
        }
    }

    #[test]
    fn binomial_exact_and_lgamma_agree() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(40, 20), 137_846_528_820.0);
        assert_eq!(binomial(3, 5), 0.0);
        // Pascal's rule across the switch-over
        for k in 1..61 {
            let lhs = binomial(61, k);
            let rhs = binomial(60, k - 1) + binomial(60, k);
            assert!(((lhs - rhs) / rhs).abs() < 1e-12, "k={k}");
        }
    }
}
