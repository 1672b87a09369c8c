//! Covariance operators on a grid and their spectral decomposition.
//!
//! An integral operator with kernel `K` acts on grid functions through the
//! quadrature weights `W`, i.e. as the matrix `K W`. Its eigenpairs are found
//! from the symmetric matrix `W^{1/2} K W^{1/2}`; eigenvectors `v` map back to
//! eigenfunctions `W^{-1/2} v`, which are then orthonormal under quadrature.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{FlrError, Result};
use crate::funcgrid::{cosine_basis, inner_product, quad, Grid, GridFunction};

/// Relative spacing below which consecutive eigenvalues count as tied.
pub const TIE_TOLERANCE: f64 = 1e-10;

/// Kernel of a covariance operator sampled on a grid.
#[derive(Debug, Clone)]
pub struct CovOperator {
    grid: Grid,
    kernel: DMatrix<f64>,
    sample_count: Option<usize>,
}

impl CovOperator {
    pub fn new(grid: &Grid, kernel: DMatrix<f64>) -> Result<Self> {
        let p = grid.point_count();
        if kernel.nrows() != p || kernel.ncols() != p {
            return Err(FlrError::invalid(format!(
                "kernel is {}x{}, grid has {p} points",
                kernel.nrows(),
                kernel.ncols()
            )));
        }
        if kernel.iter().any(|v| !v.is_finite()) {
            return Err(FlrError::invalid("kernel has non-finite entries"));
        }
        let scale = kernel.amax().max(f64::MIN_POSITIVE);
        for r in 0..p {
            for c in (r + 1)..p {
                if (kernel[(r, c)] - kernel[(c, r)]).abs() > 1e-10 * scale {
                    return Err(FlrError::invalid(format!(
                        "kernel is not symmetric at ({r}, {c})"
                    )));
                }
            }
        }
        Ok(CovOperator {
            grid: grid.clone(),
            kernel,
            sample_count: None,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn kernel(&self) -> &DMatrix<f64> {
        &self.kernel
    }

    /// Number of curves the operator was estimated from, if empirical.
    pub fn sample_count(&self) -> Option<usize> {
        self.sample_count
    }

    /// Hilbert-Schmidt norm `(int int K^2)^{1/2}` by product quadrature.
    pub fn hs_norm(&self) -> f64 {
        weighted_frobenius(&self.grid, &self.kernel)
    }

    /// The symmetric matrix `W^{1/2} K W^{1/2}`.
    fn weighted(&self) -> DMatrix<f64> {
        let d: Vec<f64> = self.grid.weights().iter().map(|w| w.sqrt()).collect();
        let p = d.len();
        DMatrix::from_fn(p, p, |r, c| {
            let avg = 0.5 * (self.kernel[(r, c)] + self.kernel[(c, r)]);
            d[r] * avg * d[c]
        })
    }
}

fn weighted_frobenius(grid: &Grid, m: &DMatrix<f64>) -> f64 {
    let w = grid.weights();
    let mut acc = 0.0;
    for c in 0..m.ncols() {
        for r in 0..m.nrows() {
            acc += w[r] * w[c] * m[(r, c)] * m[(r, c)];
        }
    }
    acc.sqrt()
}

/// Rows of `samples` as an `n x P` matrix, after checking they share a grid.
pub(crate) fn sample_matrix(samples: &[GridFunction]) -> Result<(Grid, DMatrix<f64>)> {
    let first = samples
        .first()
        .ok_or_else(|| FlrError::invalid("at least one sample curve is required"))?;
    let grid = first.grid().clone();
    for s in samples {
        grid.check(s.grid())?;
    }
    let p = grid.point_count();
    let m = DMatrix::from_fn(samples.len(), p, |i, q| samples[i].values()[q]);
    Ok((grid, m))
}

/// Column means of an `n x P` matrix.
pub(crate) fn column_means(x: &DMatrix<f64>) -> Vec<f64> {
    let n = x.nrows() as f64;
    x.column_iter().map(|c| c.sum() / n).collect()
}

pub(crate) fn covariance_from_matrix(grid: &Grid, x: &DMatrix<f64>) -> CovOperator {
    let n = x.nrows();
    let mean = column_means(x);
    let mut centered = x.clone();
    for (q, mut col) in centered.column_iter_mut().enumerate() {
        col.add_scalar_mut(-mean[q]);
    }
    let mut kernel = centered.tr_mul(&centered);
    kernel /= n as f64;
    // tr_mul is symmetric up to roundoff; make it exact.
    let p = kernel.nrows();
    for r in 0..p {
        for c in (r + 1)..p {
            let v = 0.5 * (kernel[(r, c)] + kernel[(c, r)]);
            kernel[(r, c)] = v;
            kernel[(c, r)] = v;
        }
    }
    CovOperator {
        grid: grid.clone(),
        kernel,
        sample_count: Some(n),
    }
}

/// `K(u, v) = n^{-1} sum_i (X_i(u) - Xbar(u)) (X_i(v) - Xbar(v))`.
pub fn empirical_covariance(samples: &[GridFunction]) -> Result<CovOperator> {
    let (grid, x) = sample_matrix(samples)?;
    Ok(covariance_from_matrix(&grid, &x))
}

/// `K(u, v) = sum_{j <= J} theta_j phi_j(u) phi_j(v)` in the cosine basis.
pub fn population_covariance(theta: &[f64], grid: &Grid, terms: usize) -> Result<CovOperator> {
    if let Some(j) = theta.iter().position(|t| !t.is_finite() || *t < 0.0) {
        return Err(FlrError::invalid(format!(
            "eigenvalue theta_{} = {} must be finite and nonnegative",
            j + 1,
            theta[j]
        )));
    }
    let p = grid.point_count();
    let mut kernel = DMatrix::zeros(p, p);
    for (k, &th) in theta.iter().take(terms).enumerate() {
        if th == 0.0 {
            continue;
        }
        let phi = nalgebra::DVector::from_vec(cosine_basis(k + 1, grid).into_values());
        kernel.ger(th, &phi, &phi, 1.0);
    }
    Ok(CovOperator {
        grid: grid.clone(),
        kernel,
        sample_count: None,
    })
}

/// Descending eigenvalues with quadrature-orthonormal eigenfunctions.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    grid: Grid,
    eigenvalues: Vec<f64>,
    eigenfunctions: Vec<GridFunction>,
}

impl EigenSystem {
    pub fn new(grid: &Grid, eigenvalues: Vec<f64>, eigenfunctions: Vec<GridFunction>) -> Result<Self> {
        if eigenvalues.len() != eigenfunctions.len() {
            return Err(FlrError::invalid(
                "eigenvalue and eigenfunction counts differ",
            ));
        }
        if eigenvalues.windows(2).any(|w| w[0] < w[1]) {
            return Err(FlrError::invalid("eigenvalues must be nonincreasing"));
        }
        for f in &eigenfunctions {
            grid.check(f.grid())?;
        }
        Ok(EigenSystem {
            grid: grid.clone(),
            eigenvalues,
            eigenfunctions,
        })
    }

    /// Exact spectrum of a cosine-basis population covariance: `(theta_j, phi_j)`.
    pub fn cosine_population(theta: &[f64], grid: &Grid) -> Result<Self> {
        let funcs = (1..=theta.len()).map(|j| cosine_basis(j, grid)).collect();
        Self::new(grid, theta.to_vec(), funcs)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenfunctions(&self) -> &[GridFunction] {
        &self.eigenfunctions
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Flips the sign of eigenfunction `j` (zero-based).
    pub fn flip(&mut self, j: usize) {
        self.eigenfunctions[j] = self.eigenfunctions[j].scale(-1.0);
    }

    /// Kernel `sum_j theta_j phi_j(u) phi_j(v)` over the stored components.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let p = self.grid.point_count();
        let mut k = DMatrix::zeros(p, p);
        for (th, f) in self.eigenvalues.iter().zip(&self.eigenfunctions) {
            let v = nalgebra::DVector::from_column_slice(f.values());
            k.ger(*th, &v, &v, 1.0);
        }
        k
    }
}

/// Solves the quadrature-weighted eigenproblem of `op`, keeping at most
/// `max_components` pairs (and never more than the sample count for an
/// empirical operator).
pub fn eigendecompose(op: &CovOperator, max_components: usize) -> Result<EigenSystem> {
    let grid = &op.grid;
    let p = grid.point_count();
    let m = op.weighted();
    let scale = m.norm();
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 200 * p).ok_or(
        FlrError::NumericFailure { residual: scale },
    )?;

    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let cap = op.sample_count.map_or(p, |n| n.min(p));
    let r = max_components.min(cap);
    let inv_sqrt_w: Vec<f64> = grid.weights().iter().map(|w| 1.0 / w.sqrt()).collect();

    let mut eigenvalues = Vec::with_capacity(r);
    let mut eigenfunctions = Vec::with_capacity(r);
    let mut residual_sq = 0.0;
    for &k in order.iter().take(r) {
        let lambda = eig.eigenvalues[k];
        let v = eig.eigenvectors.column(k);
        let mv = &m * v;
        residual_sq += (mv - v * lambda).norm_squared();
        eigenvalues.push(lambda.max(0.0));
        eigenfunctions.push(GridFunction::from_parts(
            grid,
            v.iter().zip(&inv_sqrt_w).map(|(a, b)| a * b).collect(),
        ));
    }
    let residual = residual_sq.sqrt();
    if !residual.is_finite() || residual > 1e-8 * scale.max(1.0) {
        return Err(FlrError::NumericFailure { residual });
    }

    if let Some(&top) = eigenvalues.first() {
        for (j, w) in eigenvalues.windows(2).enumerate() {
            let floor = TIE_TOLERANCE * top;
            if w[1] > floor && w[0] - w[1] < floor {
                log::warn!(
                    "eigenvalues {} and {} are tied within {:e}; eigenfunctions are not individually identifiable",
                    j + 1,
                    j + 2,
                    floor
                );
            }
        }
    }

    Ok(EigenSystem {
        grid: grid.clone(),
        eigenvalues,
        eigenfunctions,
    })
}

/// Flips each eigenfunction whose inner product with the matching reference
/// function is negative. Components beyond the reference list are untouched.
pub fn sign_align(sys: &EigenSystem, reference: &[GridFunction]) -> Result<EigenSystem> {
    let mut out = sys.clone();
    for (j, r) in reference.iter().enumerate().take(sys.len()) {
        if inner_product(&sys.eigenfunctions[j], r)? < 0.0 {
            out.flip(j);
        }
    }
    Ok(out)
}

/// Eigen-perturbation diagnostics for an estimated operator.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbationReport {
    /// Hilbert-Schmidt norm of the kernel difference.
    pub delta_norm: f64,
    /// `max_{j <= J} |theta_hat_j - theta_j|`.
    pub eigenvalue_gaps: f64,
    /// `delta_j ||phi_hat_j - phi_j||` for `j = 1..=J`, after sign alignment.
    pub aligned_eigenfunction_errors: Vec<f64>,
}

impl PerturbationReport {
    /// Whether `sup_j |theta_hat_j - theta_j| <= ||Delta||` holds up to `slack`.
    pub fn eigenvalue_bound_holds(&self, slack: f64) -> bool {
        self.eigenvalue_gaps <= self.delta_norm + slack
    }

    /// Whether `sup_j delta_j ||phi_hat_j - phi_j|| <= sqrt(8) ||Delta||` holds up to `slack`.
    pub fn eigenfunction_bound_holds(&self, slack: f64) -> bool {
        let worst = self
            .aligned_eigenfunction_errors
            .iter()
            .copied()
            .fold(0.0, f64::max);
        worst <= 8f64.sqrt() * self.delta_norm + slack
    }
}

/// Compares an estimated spectrum with the true one for `j = 1..=j_check`.
///
/// `truth` needs `j_check + 1` eigenvalues to form the spacings `delta_j`;
/// a missing `theta_{J+1}` is taken as zero.
pub fn perturbation_report(
    khat: &CovOperator,
    ktrue: &CovOperator,
    sys_hat: &EigenSystem,
    truth: &EigenSystem,
    j_check: usize,
) -> Result<PerturbationReport> {
    khat.grid.check(&ktrue.grid)?;
    khat.grid.check(&sys_hat.grid)?;
    khat.grid.check(&truth.grid)?;
    if j_check > sys_hat.len() || j_check > truth.len() {
        return Err(FlrError::invalid(format!(
            "J_check = {j_check} exceeds available components ({} estimated, {} true)",
            sys_hat.len(),
            truth.len()
        )));
    }
    let diff = &khat.kernel - &ktrue.kernel;
    let delta_norm = weighted_frobenius(&khat.grid, &diff);

    let eigenvalue_gaps = (0..j_check)
        .map(|j| (sys_hat.eigenvalues[j] - truth.eigenvalues[j]).abs())
        .fold(0.0, f64::max);

    let aligned = sign_align(sys_hat, &truth.eigenfunctions[..j_check])?;
    let theta = |j: usize| truth.eigenvalues.get(j).copied().unwrap_or(0.0);
    let mut spacing = f64::INFINITY;
    let mut errors = Vec::with_capacity(j_check);
    for j in 0..j_check {
        spacing = spacing.min(theta(j) - theta(j + 1));
        let d = &aligned.eigenfunctions[j] - &truth.eigenfunctions[j];
        let dist = quad(&khat.grid, d.values(), d.values()).sqrt();
        errors.push(spacing * dist);
    }
    Ok(PerturbationReport {
        delta_norm,
        eigenvalue_gaps,
        aligned_eigenfunction_errors: errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcgrid::make_uniform_grid;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn grid(p: usize) -> Grid {
        make_uniform_grid(p).unwrap()
    }

    fn study_theta(terms: usize) -> Vec<f64> {
        (1..=terms).map(|j| 4.0 / (j * j) as f64).collect()
    }

    fn gaussian_curves(g: &Grid, theta: &[f64], n: usize, seed: u64) -> Vec<GridFunction> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let basis: Vec<_> = (1..=theta.len()).map(|j| cosine_basis(j, g)).collect();
        (0..n)
            .map(|_| {
                let mut v = vec![0.0; g.point_count()];
                for (th, phi) in theta.iter().zip(&basis) {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    let z = z * th.sqrt();
                    for (o, p) in v.iter_mut().zip(phi.values()) {
                        *o += z * p;
                    }
                }
                GridFunction::new(g, v).unwrap()
            })
            .collect()
    }

    fn assert_orthonormal(sys: &EigenSystem, tol: f64) {
        for (a, fa) in sys.eigenfunctions().iter().enumerate() {
            for (b, fb) in sys.eigenfunctions().iter().enumerate() {
                let ip = inner_product(fa, fb).unwrap();
                let t = if a == b { 1.0 } else { 0.0 };
                assert!((ip - t).abs() <= tol, "({a},{b}) -> {ip}");
            }
        }
    }

    #[test]
    fn single_sample_has_zero_kernel() {
        let g = grid(11);
        let k = empirical_covariance(&[cosine_basis(2, &g)]).unwrap();
        assert!(k.kernel().iter().all(|&v| v.abs() < 1e-15));
    }

    #[test]
    fn antipodal_pair_gives_rank_one_kernel() {
        let g = grid(21);
        let phi = cosine_basis(1, &g);
        let k = empirical_covariance(&[phi.clone(), phi.scale(-1.0)]).unwrap();
        for r in 0..21 {
            for c in 0..21 {
                let want = phi.values()[r] * phi.values()[c];
                assert!((k.kernel()[(r, c)] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn empty_and_mismatched_samples_rejected() {
        assert!(matches!(
            empirical_covariance(&[]),
            Err(FlrError::InvalidArgument(_))
        ));
        let a = GridFunction::zeros(&grid(5));
        let b = GridFunction::zeros(&grid(6));
        assert!(matches!(
            empirical_covariance(&[a, b]),
            Err(FlrError::GridMismatch { .. })
        ));
    }

    // With n = 5000 the standard error of K(0,0) alone is
    // sqrt(2/n) K(0,0) ~ 0.26, so a max-entry bound has to sit a few of those
    // above zero. Calibrated on seed 7 (observed 0.38) and frozen.
    const MAX_ENTRY_TOL: f64 = 1.05;

    #[test]
    fn empirical_covariance_converges_to_population() {
        let g = grid(101);
        let theta = study_theta(50);
        let samples = gaussian_curves(&g, &theta, 5000, 7);
        let khat = empirical_covariance(&samples).unwrap();
        let k = population_covariance(&theta, &g, 50).unwrap();
        let err = (khat.kernel() - k.kernel()).amax();
        assert!(err < MAX_ENTRY_TOL, "max-entry error {err}");
    }

    #[test]
    fn population_kernel_values() {
        let g = grid(201);
        let mut theta = vec![0.0; 10];
        theta[0] = 1.0;
        let k = population_covariance(&theta, &g, 10).unwrap();
        let phi = cosine_basis(1, &g);
        assert!((k.kernel()[(3, 50)] - phi.values()[3] * phi.values()[50]).abs() < 1e-14);

        let theta = study_theta(50);
        let k = population_covariance(&theta, &g, 50).unwrap();
        let oracle: f64 = theta.iter().map(|t| 2.0 * t).sum();
        assert!((k.kernel()[(0, 0)] - oracle).abs() < 1e-10);
        // Untruncated value 8 zeta(2); the tail beyond J = 50 is 8/50 roughly.
        assert!((k.kernel()[(0, 0)] - 13.159).abs() < 0.17);

        let k0 = population_covariance(&[0.0; 5], &g, 5).unwrap();
        assert!(k0.kernel().iter().all(|&v| v == 0.0));
        assert!(population_covariance(&[1.0, -0.1], &g, 2).is_err());
    }

    #[test]
    fn rank_one_operator() {
        let g = grid(201);
        let k = population_covariance(&[1.0], &g, 1).unwrap();
        let sys = eigendecompose(&k, 3).unwrap();
        assert!((sys.eigenvalues()[0] - 1.0).abs() < 1e-3);
        let phi = cosine_basis(1, &g);
        let ip = inner_product(&sys.eigenfunctions()[0], &phi).unwrap();
        assert!((ip.abs() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn population_eigenvalues_recovered() {
        let g = grid(201);
        let theta = study_theta(50);
        let sys = eigendecompose(&population_covariance(&theta, &g, 50).unwrap(), 10).unwrap();
        for (j, want) in [4.0, 1.0, 4.0 / 9.0, 0.25, 4.0 / 25.0].iter().enumerate() {
            let got = sys.eigenvalues()[j];
            assert!(((got - want) / want).abs() < 0.01, "j={} {got}", j + 1);
        }
        assert_orthonormal(&sys, 1e-8);
    }

    #[test]
    fn centered_three_samples_have_rank_two() {
        let g = grid(51);
        let samples = gaussian_curves(&g, &study_theta(20), 3, 3);
        let sys = eigendecompose(&empirical_covariance(&samples).unwrap(), 51).unwrap();
        assert!(sys.len() <= 3);
        let positive = sys.eigenvalues().iter().filter(|&&v| v > 1e-10).count();
        assert!(positive <= 2);
    }

    #[test]
    fn full_reconstruction() {
        let g = grid(41);
        let samples = gaussian_curves(&g, &study_theta(30), 80, 11);
        let k = empirical_covariance(&samples).unwrap();
        let sys = eigendecompose(&k, 41).unwrap();
        assert_orthonormal(&sys, 1e-8);
        let err = (sys.reconstruct() - k.kernel()).amax();
        assert!(err < 1e-6, "{err}");
    }

    #[test]
    fn sign_alignment() {
        let g = grid(101);
        let theta = study_theta(10);
        let sys = eigendecompose(&population_covariance(&theta, &g, 10).unwrap(), 5).unwrap();
        let same = sign_align(&sys, sys.eigenfunctions()).unwrap();
        assert_eq!(same.eigenfunctions(), sys.eigenfunctions());

        let mut flipped = EigenSystem::cosine_population(&theta[..3], &g).unwrap();
        flipped.flip(0);
        let basis: Vec<_> = (1..=3).map(|j| cosine_basis(j, &g)).collect();
        let aligned = sign_align(&flipped, &basis).unwrap();
        assert_eq!(aligned.eigenfunctions()[0], basis[0]);
        assert_eq!(aligned.eigenvalues(), flipped.eigenvalues());

        let zero_ref = vec![GridFunction::zeros(&g)];
        let kept = sign_align(&flipped, &zero_ref).unwrap();
        assert_eq!(kept.eigenfunctions()[0], flipped.eigenfunctions()[0]);
    }

    #[test]
    fn perturbation_of_identical_operators_is_zero() {
        let g = grid(101);
        let theta = study_theta(50);
        let k = population_covariance(&theta, &g, 50).unwrap();
        let truth = EigenSystem::cosine_population(&theta, &g).unwrap();
        let sys = eigendecompose(&k, 10).unwrap();
        let rep = perturbation_report(&k, &k, &sys, &truth, 5).unwrap();
        assert_eq!(rep.delta_norm, 0.0);
        assert!(rep.eigenvalue_gaps < 1e-10);
        assert!(rep.aligned_eigenfunction_errors.iter().all(|&e| e < 1e-8));
    }

    #[test]
    fn rank_one_shift_moves_leading_eigenvalue() {
        let g = grid(101);
        let theta = study_theta(50);
        let k = population_covariance(&theta, &g, 50).unwrap();
        let phi = nalgebra::DVector::from_vec(cosine_basis(1, &g).into_values());
        let mut shifted = k.kernel().clone();
        shifted.ger(0.1, &phi, &phi, 1.0);
        let khat = CovOperator::new(&g, shifted).unwrap();
        let truth = EigenSystem::cosine_population(&theta, &g).unwrap();
        let sys = eigendecompose(&khat, 10).unwrap();
        let rep = perturbation_report(&khat, &k, &sys, &truth, 5).unwrap();
        assert!((rep.delta_norm - 0.1).abs() < 1e-10);
        assert!((rep.eigenvalue_gaps - 0.1).abs() < 1e-8);
        assert!(rep.eigenvalue_bound_holds(1e-6));
        assert!(rep.eigenfunction_bound_holds(1e-6));
    }

    #[test]
    fn perturbation_bounds_hold_for_gaussian_replicates() {
        let g = grid(101);
        let theta = study_theta(50);
        let k = population_covariance(&theta, &g, 50).unwrap();
        let truth = EigenSystem::cosine_population(&theta, &g).unwrap();
        for seed in 0..5 {
            let samples = gaussian_curves(&g, &theta, 100, 100 + seed);
            let khat = empirical_covariance(&samples).unwrap();
            let sys = eigendecompose(&khat, 10).unwrap();
            let rep = perturbation_report(&khat, &k, &sys, &truth, 5).unwrap();
            assert!(rep.eigenvalue_bound_holds(1e-6), "{rep:?}");
            assert!(rep.eigenfunction_bound_holds(1e-6), "{rep:?}");
        }
    }

    #[test]
    fn j_check_beyond_components_rejected() {
        let g = grid(31);
        let theta = study_theta(5);
        let k = population_covariance(&theta, &g, 5).unwrap();
        let truth = EigenSystem::cosine_population(&theta, &g).unwrap();
        let sys = eigendecompose(&k, 3).unwrap();
        assert!(matches!(
            perturbation_report(&k, &k, &sys, &truth, 4),
            Err(FlrError::InvalidArgument(_))
        ));
    }

    #[test]
    fn asymmetric_kernel_rejected() {
        let g = grid(3);
        let mut m = DMatrix::identity(3, 3);
        m[(0, 1)] = 0.5;
        assert!(CovOperator::new(&g, m).is_err());
    }
}
