//! Empirical convexity structure of the l1 norm on the sphere: strict
//! midpoint concavity inside an orthant and the sampling probe that finds
//! the weak-retraction-convexity modulus.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rapg::geometry::{random_point, ManifoldKind};
use rapg::objective::{check_retraction_convexity, midpoint_concavity_check, random_orthant_point, L1Norm};

fn main() -> rapg::Result<()> {
    let mut rng = ChaCha20Rng::seed_from_u64(12);

    // Midpoint concavity on same-orthant pairs.
    let mut all_concave = true;
    for _ in 0..1000 {
        let x = random_orthant_point(5, &mut rng);
        let y = random_orthant_point(5, &mut rng);
        if x.coords() == y.coords() {
            continue;
        }
        all_concave &= midpoint_concavity_check(1.0, &x, &y)?;
    }
    println!("strict midpoint concavity on 1000 same-orthant pairs: {all_concave}");

    // Plain convexity of the pullback fails inside an orthant...
    let x = random_orthant_point(4, &mut rng);
    let h = L1Norm::new(1.0, 0.0);
    let report = check_retraction_convexity(&h, &x, 0.2, 0.0, 64, 3);
    println!(
        "rho = 0 probe: {} violations / {} samples, empirical rho_hat = {:.4e}",
        report.violations, report.samples, report.rho_hat
    );

    // ... and the experiment setting (lambda = 1e-4, rho = 0.002) passes.
    let x = random_point(ManifoldKind::Sphere { n: 3 }, &mut rng);
    let h = L1Norm::new(1e-4, 0.002);
    let report = check_retraction_convexity(&h, &x, 0.1, 0.002, 64, 4);
    println!(
        "experiment setting probe: {} violations, max violation {:.3e}",
        report.violations, report.max_violation
    );
    Ok(())
}
