use crate::error::{FlrError, Result};
use crate::regression::RegimeParams;

/// Quantities of the two-point construction `B_0 = 0`,
/// `B_1 = sum_{nu < j <= 2 nu} j^-beta phi_j` with `theta_j = j^-alpha`,
/// `x_j = j^-gamma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBoundReport {
    pub n: usize,
    /// Integer part of `n^{1/(alpha + 2 beta - 1)}`.
    pub nu: usize,
    /// `T(B_0) = int B_0 x`, identically zero.
    pub t_b0: f64,
    /// `T(B_1) = sum_{nu < j <= 2 nu} j^-(beta + gamma)`.
    pub t_b1: f64,
    /// Variance of `Xi_i = int B_1 X_i`: `sum_{nu < j <= 2 nu} j^-(alpha + 2 beta)`.
    pub v_n: f64,
    pub n_v_n: f64,
    /// `E_1 d(P_0, P_1) = (1 - 2 V_n / sigma^2)^{-n/2}`.
    pub chi_sq_mean: f64,
    /// `T(B_1) n^{(beta + gamma - 1)/(alpha + 2 beta - 1)}`.
    pub scaling_check: f64,
}

/// Largest integer `v` with `v^exponent <= n`, robust to roundoff in `powf`.
fn integer_root(n: usize, exponent: f64) -> usize {
    let nf = n as f64;
    let mut v = nf.powf(1.0 / exponent).floor() as usize;
    let fits = |v: usize| (v as f64).powf(exponent) <= nf * (1.0 + 1e-12);
    while fits(v + 1) {
        v += 1;
    }
    while v > 0 && !fits(v) {
        v -= 1;
    }
    v
}

pub fn lower_bound_construct(regime: &RegimeParams, n: usize, sigma: f64) -> Result<LowerBoundReport> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(FlrError::invalid(format!("sigma = {sigma} must be positive")));
    }
    if n == 0 {
        return Err(FlrError::invalid("sample size must be positive"));
    }
    let (alpha, beta, gamma) = (regime.alpha, regime.beta, regime.gamma);
    let denom = alpha + 2.0 * beta - 1.0;
    if denom.is_nan() || denom <= 0.0 {
        return Err(FlrError::invalid("alpha + 2 beta - 1 must be positive"));
    }
    let nu = integer_root(n, denom);
    let band = (nu + 1)..=(2 * nu);
    let t_b1: f64 = band.clone().map(|j| (j as f64).powf(-(beta + gamma))).sum();
    let v_n: f64 = band.map(|j| (j as f64).powf(-(alpha + 2.0 * beta))).sum();
    let sigma_sq = sigma * sigma;
    let ratio = 2.0 * v_n / sigma_sq;
    if ratio >= 1.0 {
        return Err(FlrError::DivergentDistance {
            two_v: 2.0 * v_n,
            sigma_sq,
        });
    }
    let chi_sq_mean = (-(n as f64) / 2.0 * (-ratio).ln_1p()).exp();
    Ok(LowerBoundReport {
        n,
        nu,
        t_b0: 0.0,
        t_b1,
        v_n,
        n_v_n: n as f64 * v_n,
        chi_sq_mean,
        scaling_check: t_b1 * (n as f64).powf((beta + gamma - 1.0) / denom),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_roots_are_exact_at_perfect_powers() {
        assert_eq!(integer_root(100_000, 5.0), 10);
        assert_eq!(integer_root(99_999, 5.0), 9);
        assert_eq!(integer_root(10_000, 5.0), 6);
        assert_eq!(integer_root(1, 5.0), 1);
        assert_eq!(integer_root(1_000_000, 3.0), 100);
    }

    /// Frozen from a direct summation in extended precision:
    /// n = 1e5, alpha = beta = 2, gamma = 1 gives nu = 10,
    /// V_n = sum_{11..=20} j^-6, T(B_1) = sum_{11..=20} j^-3.
    #[test]
    fn frozen_values_at_1e5() {
        let r = lower_bound_construct(&RegimeParams::new(2.0, 2.0, 1.0), 100_000, 1.0).unwrap();
        assert_eq!(r.nu, 10);
        assert!((r.v_n - 1.494_465_799_259_249_6e-6).abs() < 1e-18);
        assert!((r.n_v_n - 0.149_446_579_925_925).abs() < 1e-12);
        assert!((r.t_b1 - 3.335_856_284_243_706_6e-3).abs() < 1e-15);
        assert!((r.chi_sq_mean - 1.161_191_697_569_041_5).abs() < 1e-9);
        assert_eq!(r.t_b0, 0.0);
        assert!(r.chi_sq_mean >= 1.0);
    }

    #[test]
    fn chi_squared_mean_stabilizes() {
        let reg = RegimeParams::new(2.0, 2.0, 1.0);
        let a = lower_bound_construct(&reg, 10_000, 1.0).unwrap().chi_sq_mean;
        let b = lower_bound_construct(&reg, 100_000, 1.0).unwrap().chi_sq_mean;
        assert!(((a - b) / a).abs() < 0.05);
    }

    #[test]
    fn scaling_check_stays_bounded() {
        // T(B_1) n^{2/5} oscillates with the integer part of n^{1/5} but
        // stays inside a fixed band.
        let reg = RegimeParams::new(2.0, 2.0, 1.0);
        for n in [1_000, 10_000, 30_000, 100_000, 300_000, 1_000_000] {
            let s = lower_bound_construct(&reg, n, 1.0).unwrap().scaling_check;
            assert!((0.3..0.5).contains(&s), "n={n} scaling {s}");
        }
    }

    #[test]
    fn divergent_when_noise_too_small() {
        let reg = RegimeParams::new(2.0, 2.0, 1.0);
        assert!(matches!(
            lower_bound_construct(&reg, 10, 0.01),
            Err(FlrError::DivergentDistance { .. })
        ));
        assert!(lower_bound_construct(&reg, 10, 0.0).is_err());
    }
}
