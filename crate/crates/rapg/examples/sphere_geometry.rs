//! Tour of the exact sphere geometry: exponential and logarithm maps,
//! parallel transport, geodesic distance, and the curvature-distortion
//! constants.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rapg::geometry::{
    curvature_constants, random_point, random_tangent, ManifoldKind, ManifoldPoint,
    sectional_curvature_oblique,
};

fn main() -> rapg::Result<()> {
    let mut rng = ChaCha20Rng::seed_from_u64(7);

    // Quarter great circle: exp moves e1 to e2, log inverts it.
    let e1 = ManifoldPoint::sphere(DVector::from_vec(vec![1.0, 0.0, 0.0]))?;
    let e2 = ManifoldPoint::sphere(DVector::from_vec(vec![0.0, 1.0, 0.0]))?;
    let eta = e1.log(&e2)?;
    println!("log_e1(e2) = {:?}  (norm {:.6})", eta.vec().as_slice(), eta.norm());
    let back = e1.exp(&eta);
    println!("exp round trip error: {:.2e}", back.dist(&e2)?);

    // Transport preserves inner products.
    let x = random_point(ManifoldKind::Sphere { n: 5 }, &mut rng);
    let y = random_point(ManifoldKind::Sphere { n: 5 }, &mut rng);
    let v = random_tangent(&x, &mut rng);
    let w = random_tangent(&x, &mut rng);
    let tv = x.transport(&y, &v)?;
    let tw = x.transport(&y, &w)?;
    println!(
        "transport isometry defect: {:.2e}",
        (tv.inner(&tw) - v.inner(&w)).abs()
    );

    // Curvature constants of the distortion bounds.
    let flat = curvature_constants(0.0, 0.0, 1.0)?;
    println!("flat space: zeta = {}, delta = {}", flat.zeta, flat.delta);
    let hyper = curvature_constants(-1.0, 0.0, 1.0)?;
    println!("kappa_min = -1, D = 1: zeta = {:.10} (= coth 1)", hyper.zeta);
    let sphere = curvature_constants(0.0, 1.0, std::f64::consts::PI / 3.0)?;
    println!("kappa_max = 1, D = pi/3: delta = {:.10}", sphere.delta);

    // Sectional curvature of the oblique manifold stays in [0, 1].
    let kind = ManifoldKind::Oblique { n: 4, p: 3 };
    let p = random_point(kind, &mut rng);
    let a = random_tangent(&p, &mut rng);
    let a = a.scale(1.0 / a.norm());
    let b = random_tangent(&p, &mut rng);
    let b = b.axpy(-b.inner(&a), &a);
    let b = b.scale(1.0 / b.norm());
    println!("oblique sectional curvature sample: {:.6}", sectional_curvature_oblique(&a, &b)?);
    Ok(())
}
