//! Exact geometry for the unit sphere, the oblique manifold OB(p,n) as a
//! product of spheres, and flat Euclidean space.
//!
//! Points and tangent vectors are stored as n-by-p matrices in ambient
//! coordinates (p = 1 for the sphere and Euclidean space). All sphere
//! formulas act columnwise, which makes the oblique manifold a free
//! generalization.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Unit-norm drift allowed when validating a point.
pub const POINT_TOL: f64 = 1e-12;
/// Tangency drift allowed when validating a tangent vector.
pub const TANGENT_TOL: f64 = 1e-10;
/// log/transport fail when <x, y> <= -1 + ANTIPODAL_TOL.
pub const ANTIPODAL_TOL: f64 = 1e-8;
/// Below this angle the sin(t)/t and cos(t) series forms are used.
const SMALL_ANGLE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ManifoldKind {
    /// Unit sphere S^{n-1} embedded in R^n; requires n >= 2.
    Sphere { n: usize },
    /// Oblique manifold OB(p,n): n-by-p matrices with unit-norm columns.
    Oblique { n: usize, p: usize },
    /// Flat R^n.
    Euclidean { n: usize },
}

impl ManifoldKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ManifoldKind::Sphere { n } if n < 2 => {
                Err(Error::DomainError(format!("sphere needs n >= 2, got {n}")))
            }
            ManifoldKind::Oblique { n, p } if n < 2 || p < 1 => Err(Error::DomainError(format!(
                "oblique needs n >= 2, p >= 1, got n={n}, p={p}"
            ))),
            ManifoldKind::Euclidean { n } if n < 1 => {
                Err(Error::DomainError("euclidean needs n >= 1".into()))
            }
            _ => Ok(()),
        }
    }

    /// Ambient storage shape (rows, columns).
    pub fn shape(&self) -> (usize, usize) {
        match *self {
            ManifoldKind::Sphere { n } => (n, 1),
            ManifoldKind::Oblique { n, p } => (n, p),
            ManifoldKind::Euclidean { n } => (n, 1),
        }
    }

    /// Total number of ambient coordinates n*p.
    pub fn ambient_dim(&self) -> usize {
        let (n, p) = self.shape();
        n * p
    }

    /// Intrinsic dimension of the manifold.
    pub fn tangent_dim(&self) -> usize {
        match *self {
            ManifoldKind::Sphere { n } => n - 1,
            ManifoldKind::Oblique { n, p } => p * (n - 1),
            ManifoldKind::Euclidean { n } => n,
        }
    }

    fn is_flat(&self) -> bool {
        matches!(self, ManifoldKind::Euclidean { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldPoint {
    kind: ManifoldKind,
    coords: DMatrix<f64>,
}

impl ManifoldPoint {
    pub fn new(kind: ManifoldKind, coords: DMatrix<f64>) -> Result<Self> {
        kind.validate()?;
        let shape = kind.shape();
        if coords.shape() != shape {
            return Err(Error::ShapeMismatch {
                expected: shape,
                got: coords.shape(),
            });
        }
        if !kind.is_flat() {
            for j in 0..coords.ncols() {
                let norm = coords.column(j).norm();
                if (norm - 1.0).abs() > POINT_TOL {
                    return Err(Error::InvalidPoint(format!(
                        "column {j} has norm {norm}, expected 1"
                    )));
                }
            }
        }
        Ok(Self { kind, coords })
    }

    pub fn sphere(v: DVector<f64>) -> Result<Self> {
        let n = v.len();
        Self::new(ManifoldKind::Sphere { n }, DMatrix::from_column_slice(n, 1, v.as_slice()))
    }

    pub fn euclidean(v: DVector<f64>) -> Self {
        let n = v.len();
        Self {
            kind: ManifoldKind::Euclidean { n },
            coords: DMatrix::from_column_slice(n, 1, v.as_slice()),
        }
    }

    /// Normalizes the columns of `coords` and wraps them as a point.
    pub fn project_onto(kind: ManifoldKind, mut coords: DMatrix<f64>) -> Result<Self> {
        kind.validate()?;
        let shape = kind.shape();
        if coords.shape() != shape {
            return Err(Error::ShapeMismatch {
                expected: shape,
                got: coords.shape(),
            });
        }
        if !kind.is_flat() {
            for j in 0..coords.ncols() {
                let norm = coords.column(j).norm();
                if norm == 0.0 {
                    return Err(Error::InvalidPoint(format!("column {j} is zero")));
                }
                coords.column_mut(j).scale_mut(1.0 / norm);
            }
        }
        Ok(Self { kind, coords })
    }

    pub fn kind(&self) -> ManifoldKind {
        self.kind
    }

    pub fn coords(&self) -> &DMatrix<f64> {
        &self.coords
    }

    /// Orthogonal projection of an ambient array onto the tangent space.
    pub fn project_tangent(&self, ambient: &DMatrix<f64>) -> Result<TangentVector> {
        if ambient.shape() != self.coords.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.coords.shape(),
                got: ambient.shape(),
            });
        }
        let mut vec = ambient.clone();
        if !self.kind.is_flat() {
            for j in 0..vec.ncols() {
                let d = self.coords.column(j).dot(&vec.column(j));
                let x = self.coords.column(j).clone_owned();
                vec.column_mut(j).axpy(-d, &x, 1.0);
            }
        }
        Ok(TangentVector {
            base: self.clone(),
            vec,
        })
    }

    pub fn zero_tangent(&self) -> TangentVector {
        let (n, p) = self.kind.shape();
        TangentVector {
            base: self.clone(),
            vec: DMatrix::zeros(n, p),
        }
    }

    /// Exponential map: the point reached at time 1 along the geodesic with
    /// initial velocity `eta`. Sphere columns are renormalized afterwards to
    /// bound floating-point drift.
    pub fn exp(&self, eta: &TangentVector) -> ManifoldPoint {
        debug_assert_eq!(eta.base.coords, self.coords, "tangent anchored elsewhere");
        if self.kind.is_flat() {
            return ManifoldPoint {
                kind: self.kind,
                coords: &self.coords + &eta.vec,
            };
        }
        let mut out = self.coords.clone();
        for j in 0..out.ncols() {
            let v = eta.vec.column(j);
            let t = v.norm();
            let (cos_t, sinc_t) = if t < SMALL_ANGLE {
                (1.0 - t * t / 2.0, 1.0 - t * t / 6.0)
            } else {
                (t.cos(), t.sin() / t)
            };
            let mut col = out.column_mut(j);
            col.scale_mut(cos_t);
            col.axpy(sinc_t, &v.clone_owned(), 1.0);
            let norm = col.norm();
            col.scale_mut(1.0 / norm);
        }
        ManifoldPoint {
            kind: self.kind,
            coords: out,
        }
    }

    /// Logarithm map, the inverse of `exp`. Fails when some column pair is
    /// antipodal and the geodesic is not unique.
    pub fn log(&self, other: &ManifoldPoint) -> Result<TangentVector> {
        if self.kind != other.kind {
            return Err(Error::ManifoldMismatch);
        }
        if self.kind.is_flat() {
            return Ok(TangentVector {
                base: self.clone(),
                vec: &other.coords - &self.coords,
            });
        }
        let mut vec = other.coords.clone();
        for j in 0..vec.ncols() {
            let x = self.coords.column(j);
            let c = x.dot(&vec.column(j)).clamp(-1.0, 1.0);
            if c + 1.0 <= ANTIPODAL_TOL {
                return Err(Error::AntipodalPoints);
            }
            let xc = x.clone_owned();
            let mut col = vec.column_mut(j);
            col.axpy(-c, &xc, 1.0);
            let un = col.norm();
            let theta = stable_angle(c, un);
            let factor = if theta < SMALL_ANGLE || un == 0.0 {
                1.0 + theta * theta / 6.0
            } else {
                theta / un
            };
            col.scale_mut(factor);
        }
        Ok(TangentVector {
            base: self.clone(),
            vec,
        })
    }

    /// Parallel transport of `v` from the tangent space at `self` to the
    /// tangent space at `other` along the unique connecting geodesic.
    pub fn transport(&self, other: &ManifoldPoint, v: &TangentVector) -> Result<TangentVector> {
        debug_assert_eq!(v.base.coords, self.coords, "tangent anchored elsewhere");
        if self.kind != other.kind {
            return Err(Error::ManifoldMismatch);
        }
        if self.kind.is_flat() {
            return Ok(TangentVector {
                base: other.clone(),
                vec: v.vec.clone(),
            });
        }
        let direction = self.log(other)?;
        let mut out = v.vec.clone();
        for j in 0..out.ncols() {
            let u = direction.vec.column(j);
            let d = u.norm();
            if d < SMALL_ANGLE {
                // Transport over a vanishing geodesic is re-projection.
                let y = other.coords.column(j).clone_owned();
                let dot = y.dot(&out.column(j));
                out.column_mut(j).axpy(-dot, &y, 1.0);
                continue;
            }
            let e = u / d;
            let a = e.dot(&out.column(j));
            let x = self.coords.column(j).clone_owned();
            let mut col = out.column_mut(j);
            col.axpy(a * (d.cos() - 1.0), &e, 1.0);
            col.axpy(-a * d.sin(), &x, 1.0);
        }
        Ok(TangentVector {
            base: other.clone(),
            vec: out,
        })
    }

    /// Geodesic distance. For the oblique manifold this is the product
    /// metric: the root of the sum of the squared columnwise angles.
    pub fn dist(&self, other: &ManifoldPoint) -> Result<f64> {
        if self.kind != other.kind {
            return Err(Error::ManifoldMismatch);
        }
        if self.kind.is_flat() {
            return Ok((&other.coords - &self.coords).norm());
        }
        let mut sum = 0.0;
        for j in 0..self.coords.ncols() {
            let x = self.coords.column(j);
            let y = other.coords.column(j);
            let c = x.dot(&y).clamp(-1.0, 1.0);
            if c + 1.0 <= ANTIPODAL_TOL {
                return Err(Error::AntipodalPoints);
            }
            let un = (y - x * c).norm();
            let theta = stable_angle(c, un);
            sum += theta * theta;
        }
        Ok(sum.sqrt())
    }

    /// Orthonormal basis of the tangent space, returned as ambient-shaped
    /// matrices. Used by the grid oracle and the Hessian estimator.
    pub fn tangent_basis(&self) -> Vec<DMatrix<f64>> {
        let (n, p) = self.kind.shape();
        let mut basis = Vec::with_capacity(self.kind.tangent_dim());
        if self.kind.is_flat() {
            for i in 0..n {
                let mut m = DMatrix::zeros(n, p);
                m[(i, 0)] = 1.0;
                basis.push(m);
            }
            return basis;
        }
        for j in 0..p {
            // Householder reflector taking e1 to the column, so its images of
            // e2..en form an orthonormal basis of the orthogonal complement.
            let x = self.coords.column(j).clone_owned();
            let mut w = x.clone();
            let sign = if x[0] >= 0.0 { 1.0 } else { -1.0 };
            w[0] += sign;
            let wn = w.norm();
            w /= wn;
            for i in 1..n {
                let mut col = DVector::zeros(n);
                col[i] = 1.0;
                col.axpy(-2.0 * w[i], &w, 1.0);
                let mut m = DMatrix::zeros(n, p);
                m.set_column(j, &col);
                basis.push(m);
            }
        }
        basis
    }
}

/// Stable geodesic angle from the cosine `c` and the sine `un = ||y - c x||`.
fn stable_angle(c: f64, un: f64) -> f64 {
    if c.abs() < 0.99 {
        c.acos()
    } else if c > 0.0 {
        un.min(1.0).asin()
    } else {
        std::f64::consts::PI - un.min(1.0).asin()
    }
}

#[derive(Clone, Debug)]
pub struct TangentVector {
    base: ManifoldPoint,
    vec: DMatrix<f64>,
}

impl TangentVector {
    /// Internal constructor for vectors already known to be tangent.
    pub(crate) fn new_unchecked(base: ManifoldPoint, vec: DMatrix<f64>) -> Self {
        debug_assert_eq!(vec.shape(), base.coords.shape());
        Self { base, vec }
    }

    pub fn new(base: ManifoldPoint, vec: DMatrix<f64>) -> Result<Self> {
        if vec.shape() != base.coords.shape() {
            return Err(Error::ShapeMismatch {
                expected: base.coords.shape(),
                got: vec.shape(),
            });
        }
        if !base.kind.is_flat() {
            for j in 0..vec.ncols() {
                let d = base.coords.column(j).dot(&vec.column(j));
                if d.abs() > TANGENT_TOL {
                    return Err(Error::InvalidTangent(format!(
                        "column {j} has normal component {d}"
                    )));
                }
            }
        }
        Ok(Self { base, vec })
    }

    pub fn base(&self) -> &ManifoldPoint {
        &self.base
    }

    pub fn vec(&self) -> &DMatrix<f64> {
        &self.vec
    }

    pub fn norm(&self) -> f64 {
        self.vec.norm()
    }

    pub fn inner(&self, other: &TangentVector) -> f64 {
        debug_assert_eq!(self.base.coords, other.base.coords, "different anchors");
        self.vec.dot(&other.vec)
    }

    pub fn scale(&self, s: f64) -> TangentVector {
        TangentVector {
            base: self.base.clone(),
            vec: &self.vec * s,
        }
    }

    /// self + s * other, anchored at the shared base point.
    pub fn axpy(&self, s: f64, other: &TangentVector) -> TangentVector {
        debug_assert_eq!(self.base.coords, other.base.coords, "different anchors");
        let mut vec = self.vec.clone();
        vec.zip_apply(&other.vec, |a, b| *a += s * b);
        TangentVector {
            base: self.base.clone(),
            vec,
        }
    }
}

/// Differential of the exponential map: D Exp_x(eta)[v], anchored at
/// Exp_x(eta). On the sphere the radial component rotates with the geodesic
/// and the orthogonal component scales by sin(t)/t (the Jacobi field of
/// curvature one).
pub fn d_exp(x: &ManifoldPoint, eta: &TangentVector, v: &TangentVector) -> TangentVector {
    debug_assert_eq!(eta.base.coords, x.coords, "eta anchored elsewhere");
    debug_assert_eq!(v.base.coords, x.coords, "v anchored elsewhere");
    let y = x.exp(eta);
    if x.kind.is_flat() {
        return TangentVector {
            base: y,
            vec: v.vec.clone(),
        };
    }
    let mut out = v.vec.clone();
    for j in 0..out.ncols() {
        let e = eta.vec.column(j);
        let t = e.norm();
        if t < SMALL_ANGLE {
            let yc = y.coords.column(j).clone_owned();
            let dot = yc.dot(&out.column(j));
            out.column_mut(j).axpy(-dot, &yc, 1.0);
            continue;
        }
        let u = e / t;
        let a = u.dot(&out.column(j));
        let xc = x.coords.column(j).clone_owned();
        let sinc = t.sin() / t;
        let mut col = out.column_mut(j);
        // col = a*(cos t * u - sin t * x) + sinc * (v - a*u)
        col.axpy(-a, &u, 1.0);
        col.scale_mut(sinc);
        col.axpy(a * t.cos(), &u, 1.0);
        col.axpy(-a * t.sin(), &xc, 1.0);
    }
    TangentVector { base: y, vec: out }
}

/// Adjoint of `d_exp`: maps tangent vectors at Exp_x(eta) back to tangent
/// vectors at x, satisfying <D v, w> = <v, D# w>.
pub fn d_exp_adjoint(x: &ManifoldPoint, eta: &TangentVector, g: &TangentVector) -> TangentVector {
    debug_assert_eq!(eta.base.coords, x.coords, "eta anchored elsewhere");
    if x.kind.is_flat() {
        return TangentVector {
            base: x.clone(),
            vec: g.vec.clone(),
        };
    }
    let mut out = g.vec.clone();
    for j in 0..out.ncols() {
        let e = eta.vec.column(j);
        let t = e.norm();
        let xc = x.coords.column(j).clone_owned();
        if t < SMALL_ANGLE {
            let dot = xc.dot(&out.column(j));
            out.column_mut(j).axpy(-dot, &xc, 1.0);
            continue;
        }
        let u = e / t;
        // Transported radial direction at the far end of the geodesic.
        let ey = &u * t.cos() - &xc * t.sin();
        let b = ey.dot(&out.column(j));
        let sinc = t.sin() / t;
        let mut col = out.column_mut(j);
        col.axpy(-b, &ey, 1.0);
        col.scale_mut(sinc);
        col.axpy(b, &u, 1.0);
    }
    TangentVector {
        base: x.clone(),
        vec: out,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CurvatureProfile {
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub diameter: f64,
    pub zeta: f64,
    pub delta: f64,
}

/// Curvature-distortion constants: eigenvalue bounds of the Hessian of the
/// half squared distance on a domain of diameter `d` whose sectional
/// curvature lies in [kappa_min, kappa_max].
pub fn curvature_constants(kappa_min: f64, kappa_max: f64, d: f64) -> Result<CurvatureProfile> {
    if kappa_min > kappa_max {
        return Err(Error::DomainError("kappa_min > kappa_max".into()));
    }
    if d <= 0.0 {
        return Err(Error::DomainError("diameter must be positive".into()));
    }
    if kappa_max > 0.0 && d >= std::f64::consts::PI / kappa_max.sqrt() {
        return Err(Error::DomainError(format!(
            "diameter {d} >= pi/sqrt(kappa_max) = {}",
            std::f64::consts::PI / kappa_max.sqrt()
        )));
    }
    let zeta = if kappa_min < 0.0 {
        let s = (-kappa_min).sqrt() * d;
        s / s.tanh()
    } else {
        1.0
    };
    let delta = if kappa_max <= 0.0 {
        1.0
    } else {
        let s = kappa_max.sqrt() * d;
        s / s.tan()
    };
    Ok(CurvatureProfile {
        kappa_min,
        kappa_max,
        diameter: d,
        zeta,
        delta,
    })
}

/// Sectional curvature of the plane spanned by an orthonormal pair of
/// tangent vectors on the oblique manifold, via the product formula
/// sum_i (|u_i|^2 |v_i|^2 - <u_i, v_i>^2). Always lies in [0, 1].
pub fn sectional_curvature_oblique(u: &TangentVector, v: &TangentVector) -> Result<f64> {
    if !matches!(u.base.kind, ManifoldKind::Oblique { .. } | ManifoldKind::Sphere { .. }) {
        return Err(Error::DomainError("sectional curvature needs a sphere product".into()));
    }
    if u.base.coords != v.base.coords {
        return Err(Error::ManifoldMismatch);
    }
    let tol = 1e-8;
    if (u.norm() - 1.0).abs() > tol || (v.norm() - 1.0).abs() > tol || u.inner(v).abs() > tol {
        return Err(Error::NotOrthonormal);
    }
    let mut sec = 0.0;
    for j in 0..u.vec.ncols() {
        let uj = u.vec.column(j);
        let vj = v.vec.column(j);
        let cross = uj.dot(&vj);
        sec += uj.norm_squared() * vj.norm_squared() - cross * cross;
    }
    Ok(sec.clamp(0.0, 1.0))
}

/// Uniform random point, for tests and probes.
pub fn random_point<R: Rng + ?Sized>(kind: ManifoldKind, rng: &mut R) -> ManifoldPoint {
    let (n, p) = kind.shape();
    let coords = DMatrix::from_fn(n, p, |_, _| rng.sample::<f64, _>(StandardNormal));
    ManifoldPoint::project_onto(kind, coords).expect("gaussian column is zero")
}

/// Random tangent vector with entries projected from a standard gaussian.
pub fn random_tangent<R: Rng + ?Sized>(x: &ManifoldPoint, rng: &mut R) -> TangentVector {
    let (n, p) = x.kind.shape();
    let ambient = DMatrix::from_fn(n, p, |_, _| rng.sample::<f64, _>(StandardNormal));
    x.project_tangent(&ambient).expect("shape is correct")
}
