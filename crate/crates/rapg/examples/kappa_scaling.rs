//! Desk-scale condition-number study: fits the tail slope of the objective
//! gap for both methods across a spectral-gap sweep and prints the log-log
//! exponents (about 0.5 accelerated, about 1.0 baseline).

use rapg::bench::kappa_study;

fn main() -> rapg::Result<()> {
    // Small instance so the sweep finishes quickly; the full study uses
    // m = 20, n = 1000, lambda = 1e-4 and 20 points.
    let study = kappa_study(10, 100, 1e-4, 6, 1, 10_000, None)?;
    for p in &study.points {
        println!(
            "c = {:.3}: kappa = {:>10.2}, 1/(1-e^s) rapg = {:>10.2}, rpg = {:>12.2}",
            p.c,
            p.kappa,
            p.rapg.map(|f| f.transformed).unwrap_or(f64::NAN),
            p.rpg.map(|f| f.transformed).unwrap_or(f64::NAN)
        );
    }
    println!(
        "log-log exponent of 1/(1-e^s) vs kappa: rapg {:.3}, rpg {:.3}",
        study.rapg_exponent, study.rpg_exponent
    );
    Ok(())
}
