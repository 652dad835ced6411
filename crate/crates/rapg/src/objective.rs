//! Composite objective oracles F = f + h, the two sparse-PCA instances,
//! finite-difference gradient verification, and empirical convexity probes
//! for the pulled-back nonsmooth term.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::geometry::{ManifoldKind, ManifoldPoint, TangentVector};

/// Smooth part of a composite objective, with its geodesic smoothness and
/// strong-convexity constants attached.
pub trait SmoothOracle: Send + Sync {
    fn value(&self, x: &ManifoldPoint) -> f64;
    fn riem_grad(&self, x: &ManifoldPoint) -> TangentVector;
    /// Geodesic smoothness constant L.
    fn smoothness(&self) -> f64;
    /// Geodesic strong-convexity constant mu >= 0.
    fn strong_convexity(&self) -> f64;
}

/// Nonsmooth part. The per-coordinate Euclidean subdifferential interval is
/// what the prox residual needs; for lambda * l1 it is [-lambda, lambda] at
/// zero entries and the single point {lambda * sign} elsewhere.
pub trait NonsmoothOracle: Send + Sync {
    fn value(&self, x: &ManifoldPoint) -> f64;
    /// Retraction-convexity constant rho.
    fn rho(&self) -> f64;
    /// Minimal-norm Euclidean subgradient selection (0 at zero entries).
    fn euclid_subgrad(&self, coords: &DMatrix<f64>) -> DMatrix<f64>;
    /// Per-coordinate subdifferential box (lo, hi).
    fn subgrad_box(&self, coords: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>);
}

#[derive(Clone)]
pub struct CompositeObjective {
    pub manifold: ManifoldKind,
    pub f: Arc<dyn SmoothOracle>,
    pub h: Arc<dyn NonsmoothOracle>,
}

impl CompositeObjective {
    pub fn new(manifold: ManifoldKind, f: Arc<dyn SmoothOracle>, h: Arc<dyn NonsmoothOracle>) -> Self {
        Self { manifold, f, h }
    }

    pub fn value(&self, x: &ManifoldPoint) -> f64 {
        self.f.value(x) + self.h.value(x)
    }
}

/// lambda * sum |x_i|, over all entries for matrix-shaped points.
#[derive(Clone, Debug)]
pub struct L1Norm {
    pub lambda: f64,
    pub rho: f64,
}

impl L1Norm {
    pub fn new(lambda: f64, rho: f64) -> Self {
        Self { lambda, rho }
    }

    /// The identically-zero nonsmooth term.
    pub fn zero() -> Self {
        Self { lambda: 0.0, rho: 0.0 }
    }
}

pub fn h_l1_value(lambda: f64, coords: &DMatrix<f64>) -> f64 {
    lambda * coords.iter().map(|v| v.abs()).sum::<f64>()
}

impl NonsmoothOracle for L1Norm {
    fn value(&self, x: &ManifoldPoint) -> f64 {
        h_l1_value(self.lambda, x.coords())
    }

    fn rho(&self) -> f64 {
        self.rho
    }

    fn euclid_subgrad(&self, coords: &DMatrix<f64>) -> DMatrix<f64> {
        coords.map(|v| {
            if v > 0.0 {
                self.lambda
            } else if v < 0.0 {
                -self.lambda
            } else {
                0.0
            }
        })
    }

    fn subgrad_box(&self, coords: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
        let lo = coords.map(|v| {
            if v > 0.0 {
                self.lambda
            } else {
                -self.lambda
            }
        });
        let hi = coords.map(|v| {
            if v < 0.0 {
                -self.lambda
            } else {
                self.lambda
            }
        });
        (lo, hi)
    }
}

/// Sphere sparse-PCA smooth part f1(x) = -x' A'A x, the penalized variant of
/// the single-component ScoTLASS model.
pub struct SpcaSphereInstance {
    a: DMatrix<f64>,
    gram: DMatrix<f64>,
    pub lambda: f64,
    l: f64,
    mu: f64,
}

impl SpcaSphereInstance {
    pub fn new(a: DMatrix<f64>, lambda: f64) -> Result<Self> {
        if a.nrows() >= a.ncols() {
            return Err(Error::InvalidInput(format!(
                "data matrix must have m < n, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        let gram = a.transpose() * &a;
        Ok(Self { a, gram, lambda, l: 1.0, mu: 0.0 })
    }

    pub fn manifold(&self) -> ManifoldKind {
        ManifoldKind::Sphere { n: self.a.ncols() }
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// Attach the smoothness constants estimated by the harness.
    pub fn with_constants(mut self, l: f64, mu: f64) -> Self {
        self.l = l;
        self.mu = mu;
        self
    }

    pub fn f1_value(&self, x: &ManifoldPoint) -> f64 {
        let ax = &self.a * x.coords().column(0);
        -ax.norm_squared()
    }

    pub fn f1_grad(&self, x: &ManifoldPoint) -> TangentVector {
        let ax = &self.a * x.coords().column(0);
        let egrad = self.a.transpose() * ax * (-2.0);
        let amb = DMatrix::from_column_slice(egrad.len(), 1, egrad.as_slice());
        x.project_tangent(&amb).expect("shape matches")
    }

    pub fn objective(&self, rho: f64) -> CompositeObjective
    where
        Self: Sized,
    {
        let f = Arc::new(SpcaSphereInstance {
            a: self.a.clone(),
            gram: self.gram.clone(),
            lambda: self.lambda,
            l: self.l,
            mu: self.mu,
        });
        CompositeObjective::new(self.manifold(), f, Arc::new(L1Norm::new(self.lambda, rho)))
    }
}

impl SmoothOracle for SpcaSphereInstance {
    fn value(&self, x: &ManifoldPoint) -> f64 {
        self.f1_value(x)
    }

    fn riem_grad(&self, x: &ManifoldPoint) -> TangentVector {
        self.f1_grad(x)
    }

    fn smoothness(&self) -> f64 {
        self.l
    }

    fn strong_convexity(&self) -> f64 {
        self.mu
    }
}

/// Oblique sparse-PCA smooth part f2(X) = ||X' A'A X - D^2||_F^2, which seeks
/// weakly correlated low-dimensional representations.
pub struct SpcaObliqueInstance {
    a: DMatrix<f64>,
    /// Squares of the dominant singular values, nonincreasing.
    d2: DVector<f64>,
    pub lambda: f64,
    l: f64,
    mu: f64,
}

impl SpcaObliqueInstance {
    pub fn new(a: DMatrix<f64>, d2: DVector<f64>, lambda: f64) -> Result<Self> {
        if a.nrows() >= a.ncols() {
            return Err(Error::InvalidInput(format!(
                "data matrix must have m < n, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        for i in 0..d2.len() {
            if d2[i] < 0.0 || (i + 1 < d2.len() && d2[i] < d2[i + 1]) {
                return Err(Error::InvalidInput(
                    "d2 must be nonnegative and nonincreasing".into(),
                ));
            }
        }
        Ok(Self { a, d2, lambda, l: 1.0, mu: 0.0 })
    }

    pub fn manifold(&self) -> ManifoldKind {
        ManifoldKind::Oblique { n: self.a.ncols(), p: self.d2.len() }
    }

    pub fn d2(&self) -> &DVector<f64> {
        &self.d2
    }

    pub fn with_constants(mut self, l: f64, mu: f64) -> Self {
        self.l = l;
        self.mu = mu;
        self
    }

    fn residual(&self, x: &ManifoldPoint) -> DMatrix<f64> {
        let ax = &self.a * x.coords();
        let mut g = ax.transpose() * &ax;
        for i in 0..self.d2.len() {
            g[(i, i)] -= self.d2[i];
        }
        g
    }

    pub fn f2_value(&self, x: &ManifoldPoint) -> f64 {
        self.residual(x).norm_squared()
    }

    pub fn f2_grad(&self, x: &ManifoldPoint) -> TangentVector {
        // Euclidean gradient 4 A'A X (X'A'AX - D^2), verified by finite
        // differences; projected columnwise.
        let g = self.residual(x);
        let ax = &self.a * x.coords();
        let egrad = self.a.transpose() * (ax * g) * 4.0;
        x.project_tangent(&egrad).expect("shape matches")
    }

    pub fn objective(&self, rho: f64) -> CompositeObjective {
        let f = Arc::new(SpcaObliqueInstance {
            a: self.a.clone(),
            d2: self.d2.clone(),
            lambda: self.lambda,
            l: self.l,
            mu: self.mu,
        });
        CompositeObjective::new(self.manifold(), f, Arc::new(L1Norm::new(self.lambda, rho)))
    }
}

impl SmoothOracle for SpcaObliqueInstance {
    fn value(&self, x: &ManifoldPoint) -> f64 {
        self.f2_value(x)
    }

    fn riem_grad(&self, x: &ManifoldPoint) -> TangentVector {
        self.f2_grad(x)
    }

    fn smoothness(&self) -> f64 {
        self.l
    }

    fn strong_convexity(&self) -> f64 {
        self.mu
    }
}

/// Half squared geodesic distance to a target point. Geodesically strongly
/// convex on balls around the target; the standard convex test objective.
pub struct SquaredDistance {
    pub target: ManifoldPoint,
    l: f64,
    mu: f64,
}

impl SquaredDistance {
    pub fn new(target: ManifoldPoint, l: f64, mu: f64) -> Self {
        Self { target, l, mu }
    }
}

impl SmoothOracle for SquaredDistance {
    fn value(&self, x: &ManifoldPoint) -> f64 {
        let d = x.dist(&self.target).expect("target within domain");
        0.5 * d * d
    }

    fn riem_grad(&self, x: &ManifoldPoint) -> TangentVector {
        x.log(&self.target).expect("target within domain").scale(-1.0)
    }

    fn smoothness(&self) -> f64 {
        self.l
    }

    fn strong_convexity(&self) -> f64 {
        self.mu
    }
}

/// Euclidean least squares 1/2 ||A x - b||^2 for the flat-space lasso toy.
pub struct LeastSquares {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    l: f64,
    mu: f64,
}

impl LeastSquares {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>) -> Self {
        // Exact extreme singular values give the tight constants.
        let svd = a.clone().svd(false, false);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        Self { a, b, l: smax * smax, mu: smin * smin }
    }
}

impl SmoothOracle for LeastSquares {
    fn value(&self, x: &ManifoldPoint) -> f64 {
        (&self.a * x.coords().column(0) - &self.b).norm_squared() * 0.5
    }

    fn riem_grad(&self, x: &ManifoldPoint) -> TangentVector {
        let r = &self.a * x.coords().column(0) - &self.b;
        let g = self.a.transpose() * r;
        let amb = DMatrix::from_column_slice(g.len(), 1, g.as_slice());
        x.project_tangent(&amb).expect("shape matches")
    }

    fn smoothness(&self) -> f64 {
        self.l
    }

    fn strong_convexity(&self) -> f64 {
        self.mu
    }
}

/// Directional finite-difference check of a Riemannian gradient along random
/// geodesics. Returns the worst relative error over the sampled directions.
pub fn grad_check<R: Rng + ?Sized>(
    f: &dyn SmoothOracle,
    x: &ManifoldPoint,
    directions: usize,
    step: f64,
    rng: &mut R,
) -> f64 {
    let grad = f.riem_grad(x);
    let mut worst: f64 = 0.0;
    for _ in 0..directions {
        let v = crate::geometry::random_tangent(x, rng);
        let v = v.scale(1.0 / v.norm());
        let plus = f.value(&x.exp(&v.scale(step)));
        let minus = f.value(&x.exp(&v.scale(-step)));
        let fd = (plus - minus) / (2.0 * step);
        let an = grad.inner(&v);
        worst = worst.max((fd - an).abs() / (1.0 + an.abs()));
    }
    worst
}

/// Report from the sampling-based retraction-convexity probe.
#[derive(Clone, Debug)]
pub struct ConvexityReport {
    /// Largest violation of segment convexity of h(Exp_x(eta)) + rho/2 |eta|^2.
    pub max_violation: f64,
    pub violations: usize,
    pub samples: usize,
    /// Smallest rho with zero violations over the drawn samples.
    pub rho_hat: f64,
}

/// Samples pairs in the tangent ball and checks convexity of the pulled-back
/// nonsmooth term along segments. Report-only; never fails.
///
/// For each sampled triple the violation of h-tilde is affine in rho, so the
/// empirically minimal rho comes out of the same sweep.
pub fn check_retraction_convexity(
    h: &dyn NonsmoothOracle,
    x: &ManifoldPoint,
    radius: f64,
    rho: f64,
    n_samples: usize,
    seed: u64,
) -> ConvexityReport {
    use rand::SeedableRng;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let radii = 16;
    let segment = 9;

    let mut max_violation: f64 = 0.0;
    let mut violations = 0;
    let mut samples = 0;
    let mut rho_hat: f64 = 0.0;
    for _ in 0..n_samples {
        let d1 = crate::geometry::random_tangent(x, &mut rng);
        let d1 = d1.scale(1.0 / d1.norm());
        let d2 = crate::geometry::random_tangent(x, &mut rng);
        let d2 = d2.scale(1.0 / d2.norm());
        for ri in 1..=radii {
            let r = radius * ri as f64 / radii as f64;
            let eta = d1.scale(r);
            let omega = d2.scale(r);
            let h_eta = h.value(&x.exp(&eta));
            let h_omega = h.value(&x.exp(&omega));
            let n_eta = eta.norm() * eta.norm();
            let n_omega = omega.norm() * omega.norm();
            for si in 1..=segment {
                let t = si as f64 / (segment + 1) as f64;
                let mid = eta.scale(1.0 - t).axpy(t, &omega);
                samples += 1;
                // Convexity defect split into the h part and the quadratic
                // part: violation(rho) = a + rho * b with b <= 0.
                let a = h.value(&x.exp(&mid)) - (1.0 - t) * h_eta - t * h_omega;
                let b = 0.5 * (mid.norm() * mid.norm() - (1.0 - t) * n_eta - t * n_omega);
                let viol = a + rho * b;
                let tol = 1e-9 * (1.0 + h_eta.abs() + h_omega.abs());
                if viol > tol {
                    violations += 1;
                    max_violation = max_violation.max(viol);
                }
                if a > tol && b < -1e-15 {
                    rho_hat = rho_hat.max(a / (-b));
                }
            }
        }
    }
    ConvexityReport {
        max_violation,
        violations,
        samples,
        rho_hat,
    }
}

/// Checks strict midpoint concavity of the l1 norm along the geodesic
/// between two same-orthant sphere points: h(gamma(1/2)) > (h(x) + h(y))/2.
pub fn midpoint_concavity_check(lambda: f64, x: &ManifoldPoint, y: &ManifoldPoint) -> Result<bool> {
    if !matches!(x.kind(), ManifoldKind::Sphere { .. }) || x.kind() != y.kind() {
        return Err(Error::InvalidInput("sphere points required".into()));
    }
    if x.coords() == y.coords() {
        return Err(Error::NotSameOrthant);
    }
    for (a, b) in x.coords().iter().zip(y.coords().iter()) {
        if a * b < 0.0 {
            return Err(Error::NotSameOrthant);
        }
    }
    let sum = x.coords() + y.coords();
    let norm = sum.norm();
    if norm == 0.0 {
        return Err(Error::NotSameOrthant);
    }
    let mid = sum / norm;
    let h_mid = h_l1_value(lambda, &mid);
    let avg = 0.5 * (h_l1_value(lambda, x.coords()) + h_l1_value(lambda, y.coords()));
    Ok(h_mid > avg)
}

/// Random point in the interior of the positive orthant of a sphere; handy
/// for the concavity sweeps.
pub fn random_orthant_point<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ManifoldPoint {
    let v = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal).abs() + 1e-3);
    ManifoldPoint::sphere(v.normalize()).expect("positive vector")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::random_point;
    use rand::SeedableRng;

    fn eye(n: usize) -> DMatrix<f64> {
        DMatrix::identity(n, n)
    }

    #[test]
    fn f1_unit_eigenvector_value() {
        // A = I (2x2 is rejected for m >= n, so embed in 2x3 with padding).
        let mut a = DMatrix::zeros(2, 3);
        a[(0, 0)] = 1.0;
        a[(1, 1)] = 1.0;
        let inst = SpcaSphereInstance::new(a, 1.0).unwrap();
        let x = ManifoldPoint::sphere(DVector::from_vec(vec![1.0, 0.0, 0.0])).unwrap();
        assert_eq!(inst.f1_value(&x), -1.0);
    }

    #[test]
    fn f1_grad_vanishes_at_eigenvector() {
        let mut rng = ChaCha20Rng::seed_from_u64(20);
        let a = DMatrix::from_fn(3, 8, |_, _| rng.sample::<f64, _>(StandardNormal));
        let inst = SpcaSphereInstance::new(a.clone(), 0.1).unwrap();
        let svd = a.svd(false, true);
        let vt = svd.v_t.unwrap();
        let x = ManifoldPoint::sphere(vt.row(0).transpose()).unwrap();
        assert!(inst.f1_grad(&x).norm() < 1e-10);
    }

    #[test]
    fn f1_grad_matches_finite_differences() {
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        let a = DMatrix::from_fn(4, 9, |_, _| rng.sample::<f64, _>(StandardNormal));
        let inst = SpcaSphereInstance::new(a, 1.0).unwrap();
        let x = random_point(inst.manifold(), &mut rng);
        let err = grad_check(&inst, &x, 10, 1e-6, &mut rng);
        assert!(err < 1e-5, "grad check error {err}");
    }

    #[test]
    fn f2_zero_at_singular_basis() {
        let mut rng = ChaCha20Rng::seed_from_u64(22);
        let a = DMatrix::from_fn(4, 9, |_, _| rng.sample::<f64, _>(StandardNormal));
        let svd = a.clone().svd(false, true);
        let vt = svd.v_t.unwrap();
        let p = 2;
        let d2 = DVector::from_fn(p, |i, _| {
            let s = svd.singular_values[i];
            s * s
        });
        let inst = SpcaObliqueInstance::new(a, d2, 1.0).unwrap();
        let x0 = DMatrix::from_fn(9, p, |r, c| vt[(c, r)]);
        let x0 = ManifoldPoint::new(inst.manifold(), x0).unwrap();
        assert!(inst.f2_value(&x0) < 1e-20);
        assert!(inst.f2_grad(&x0).norm() < 1e-9);
    }

    #[test]
    fn f2_with_zero_d2_is_plain_norm() {
        let mut rng = ChaCha20Rng::seed_from_u64(23);
        let a = DMatrix::from_fn(3, 7, |_, _| rng.sample::<f64, _>(StandardNormal));
        let inst = SpcaObliqueInstance::new(a.clone(), DVector::zeros(2), 1.0).unwrap();
        let x = random_point(inst.manifold(), &mut rng);
        let ax = &a * x.coords();
        let expect = (ax.transpose() * ax).norm_squared();
        assert!((inst.f2_value(&x) - expect).abs() < 1e-12 * (1.0 + expect));
    }

    #[test]
    fn f2_grad_matches_finite_differences() {
        let mut rng = ChaCha20Rng::seed_from_u64(24);
        let a = DMatrix::from_fn(4, 8, |_, _| rng.sample::<f64, _>(StandardNormal));
        let svd = a.clone().svd(false, false);
        let d2 = DVector::from_fn(3, |i, _| {
            let s = svd.singular_values[i];
            s * s
        });
        let inst = SpcaObliqueInstance::new(a, d2, 1.0).unwrap();
        let x = random_point(inst.manifold(), &mut rng);
        let err = grad_check(&inst, &x, 10, 1e-6, &mut rng);
        assert!(err < 1e-5, "grad check error {err}");
    }

    #[test]
    fn l1_values() {
        let x = ManifoldPoint::sphere(DVector::from_vec(vec![1.0, 0.0])).unwrap();
        assert_eq!(h_l1_value(1.0, x.coords()), 1.0);
        let s = 1.0 / 2.0_f64.sqrt();
        let x = ManifoldPoint::sphere(DVector::from_vec(vec![s, s])).unwrap();
        assert!((h_l1_value(2.0, x.coords()) - 2.0 * 2.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn l1_dominates_l2_on_sphere() {
        let mut rng = ChaCha20Rng::seed_from_u64(25);
        for _ in 0..200 {
            let x = random_point(ManifoldKind::Sphere { n: 7 }, &mut rng);
            assert!(h_l1_value(1.0, x.coords()) >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn l1_subgrad_box() {
        let h = L1Norm::new(2.0, 0.0);
        let coords = DMatrix::from_column_slice(3, 1, &[0.5, 0.0, -1.0]);
        let g = h.euclid_subgrad(&coords);
        assert_eq!(g.as_slice(), &[2.0, 0.0, -2.0]);
        let (lo, hi) = h.subgrad_box(&coords);
        assert_eq!(lo.as_slice(), &[2.0, -2.0, -2.0]);
        assert_eq!(hi.as_slice(), &[2.0, 2.0, -2.0]);
    }

    #[test]
    fn zero_h_is_convex_for_any_rho() {
        let mut rng = ChaCha20Rng::seed_from_u64(26);
        let x = random_point(ManifoldKind::Sphere { n: 4 }, &mut rng);
        let h = L1Norm::zero();
        let report = check_retraction_convexity(&h, &x, 0.3, 0.0, 16, 99);
        assert_eq!(report.violations, 0);
        assert_eq!(report.rho_hat, 0.0);
    }

    #[test]
    fn l1_violates_plain_convexity_inside_orthant() {
        let mut rng = ChaCha20Rng::seed_from_u64(27);
        let x = random_orthant_point(4, &mut rng);
        let h = L1Norm::new(1.0, 0.0);
        let report = check_retraction_convexity(&h, &x, 0.2, 0.0, 64, 7);
        assert!(report.violations > 0, "expected orthant-interior violations");
        assert!(report.rho_hat > 0.0);
    }

    #[test]
    fn l1_passes_probe_at_experiment_settings() {
        // lambda = 1e-4, rho = 0.002, radius 0.1: empirical evidence only.
        let mut rng = ChaCha20Rng::seed_from_u64(28);
        let x = random_point(ManifoldKind::Sphere { n: 3 }, &mut rng);
        let h = L1Norm::new(1e-4, 0.002);
        let report = check_retraction_convexity(&h, &x, 0.1, 0.002, 64, 11);
        assert_eq!(
            report.violations, 0,
            "max violation {}",
            report.max_violation
        );
    }

    #[test]
    fn midpoint_concavity_boundary_case() {
        let x = ManifoldPoint::sphere(DVector::from_vec(vec![1.0, 0.0])).unwrap();
        let y = ManifoldPoint::sphere(DVector::from_vec(vec![0.0, 1.0])).unwrap();
        // h(mid) = lambda * sqrt(2) > lambda = average.
        assert!(midpoint_concavity_check(3.0, &x, &y).unwrap());
    }

    #[test]
    fn midpoint_concavity_random_sweep() {
        let mut rng = ChaCha20Rng::seed_from_u64(29);
        for _ in 0..1000 {
            let x = random_orthant_point(5, &mut rng);
            let y = random_orthant_point(5, &mut rng);
            if x.coords() == y.coords() {
                continue;
            }
            assert!(midpoint_concavity_check(1.0, &x, &y).unwrap());
        }
    }

    #[test]
    fn midpoint_concavity_rejects_bad_pairs() {
        let x = ManifoldPoint::sphere(DVector::from_vec(vec![1.0, 0.0])).unwrap();
        assert!(matches!(
            midpoint_concavity_check(1.0, &x, &x),
            Err(Error::NotSameOrthant)
        ));
        let y = ManifoldPoint::sphere(DVector::from_vec(vec![-1.0, 0.0])).unwrap();
        assert!(matches!(
            midpoint_concavity_check(1.0, &x, &y),
            Err(Error::NotSameOrthant)
        ));
    }

    #[test]
    fn least_squares_constants_from_svd() {
        let a = eye(3) * 2.0;
        let ls = LeastSquares::new(a, DVector::zeros(3));
        assert!((ls.smoothness() - 4.0).abs() < 1e-12);
        assert!((ls.strong_convexity() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn f1_two_sided_smoothness_bound() {
        // |f(y) - f(x) - <grad f(x), log_x y>| <= L/2 d(x,y)^2 with
        // L = 5 lambda_max(Hess), sampled around the leading singular
        // direction.
        let mut rng = ChaCha20Rng::seed_from_u64(31);
        let a = DMatrix::from_fn(5, 25, |_, _| rng.sample::<f64, _>(StandardNormal));
        let inst = SpcaSphereInstance::new(a.clone(), 0.0).unwrap();
        let svd = a.svd(false, true);
        let vt = svd.v_t.unwrap();
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&i, &j| svd.singular_values[j].partial_cmp(&svd.singular_values[i]).unwrap());
        let smax = svd.singular_values[order[0]];
        let l = 5.0 * 2.0 * smax * smax;
        let base = ManifoldPoint::sphere(vt.row(order[0]).transpose()).unwrap();
        for _ in 0..200 {
            let x = {
                let off = crate::geometry::random_tangent(&base, &mut rng);
                base.exp(&off.scale(rng.gen_range(0.0..0.5) / off.norm()))
            };
            let y = {
                let off = crate::geometry::random_tangent(&x, &mut rng);
                x.exp(&off.scale(rng.gen_range(0.0..0.5) / off.norm()))
            };
            let d = x.dist(&y).unwrap();
            let lin = inst.f1_grad(&x).inner(&x.log(&y).unwrap());
            let defect = (inst.f1_value(&y) - inst.f1_value(&x) - lin).abs();
            assert!(
                defect <= 0.5 * l * d * d + 1e-12,
                "smoothness defect {defect} vs bound {}",
                0.5 * l * d * d
            );
        }
    }

    #[test]
    fn squared_distance_gradient_is_negative_log() {
        let mut rng = ChaCha20Rng::seed_from_u64(30);
        let target = random_point(ManifoldKind::Sphere { n: 3 }, &mut rng);
        let f = SquaredDistance::new(target.clone(), 1.0, 0.5);
        let x = random_point(ManifoldKind::Sphere { n: 3 }, &mut rng);
        if x.dist(&target).is_err() {
            return;
        }
        let err = grad_check(&f, &x, 10, 1e-6, &mut rng);
        assert!(err < 1e-5, "grad check error {err}");
    }
}
