//! The adaptive-restart safeguard on the oblique sparse-PCA model with a
//! deliberately tight smoothness estimate: the plain accelerated method
//! destabilizes while the safeguarded one keeps its reference sequence
//! monotone.

use rapg::bench::{build_problem, ExperimentConfig, LMode, Model};
use rapg::prox::ProxConfig;
use rapg::restart::{ar_rapg_run, SafeguardConfig};
use rapg::solvers::{run, Algo, Termination, TerminationRule};

fn main() -> rapg::Result<()> {
    let mut cfg = ExperimentConfig::new(Model::SpcaOblique);
    cfg.m = 20;
    cfg.n = 200;
    cfg.p = 4;
    cfg.lambda = 1.0;
    cfg.l_mode = LMode::OnePointTwoD2;
    cfg.max_iters = 4_000;
    let problem = build_problem(&cfg, 11)?;
    let prox_cfg = ProxConfig::default_for(&problem.obj.manifold);
    let term = Termination {
        max_iters: cfg.max_iters,
        rule: TerminationRule::SearchDirection { tol: 1e-10 },
        f_ref: None,
    };

    let rpg = run(Algo::Rpg, problem.x0.clone(), &problem.params, &problem.obj, &prox_cfg, &term)?;
    let rapg = run(Algo::Rapg, problem.x0.clone(), &problem.params, &problem.obj, &prox_cfg, &term)?;
    let sg = SafeguardConfig::defaults(problem.params.l);
    let ar = ar_rapg_run(
        problem.x0.clone(),
        &problem.params,
        &sg,
        &problem.obj,
        &prox_cfg,
        &term.with_f_ref(Some(rpg.summary.final_f)),
    )?;

    for rec in [&rpg, &rapg, &ar] {
        let rises = rec
            .rows
            .windows(2)
            .filter(|w| w[1].f > w[0].f + 1e-10 * (1.0 + w[0].f.abs()))
            .count();
        println!(
            "{:>8}: iters {:>5}  final F {:.9}  F-rises {:>4}  restarts {}  stop {}",
            rec.summary.algo,
            rec.summary.iters,
            rec.summary.final_f,
            rises,
            rec.summary.restarts,
            rec.summary.termination.name()
        );
    }
    println!(
        "safeguarded reference stationarity |eta| = {:.3e}",
        ar.summary.final_safeguard_eta.unwrap_or(f64::NAN)
    );
    Ok(())
}
