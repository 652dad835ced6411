//! Finite-difference verification of the Riemannian gradients of both
//! sparse-PCA smooth parts along random geodesics.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rapg::geometry::random_point;
use rapg::objective::{grad_check, SpcaObliqueInstance, SpcaSphereInstance};

fn main() -> rapg::Result<()> {
    let mut rng = ChaCha20Rng::seed_from_u64(42);

    let a = DMatrix::from_fn(6, 30, |_, _| rng.sample::<f64, _>(StandardNormal));
    let sphere = SpcaSphereInstance::new(a.clone(), 0.5)?;
    let x = random_point(sphere.manifold(), &mut rng);
    let err = grad_check(&sphere, &x, 10, 1e-6, &mut rng);
    println!("sphere model gradient vs finite differences: {err:.3e}");

    let svd = a.clone().svd(false, false);
    let d2 = DVector::from_fn(3, |i, _| {
        let s = svd.singular_values[i];
        s * s
    });
    let oblique = SpcaObliqueInstance::new(a, d2, 0.5)?;
    let x = random_point(oblique.manifold(), &mut rng);
    let err = grad_check(&oblique, &x, 10, 1e-6, &mut rng);
    println!("oblique model gradient vs finite differences: {err:.3e}");
    Ok(())
}
