//! Head-to-head of the accelerated method and the baseline on a sphere
//! sparse-PCA instance with Hessian-derived constants.

use rapg::bench::{build_problem, ExperimentConfig, LMode, Model};
use rapg::prox::ProxConfig;
use rapg::solvers::{run, Algo, Termination, TerminationRule};

fn main() -> rapg::Result<()> {
    let mut cfg = ExperimentConfig::new(Model::SpcaSphere);
    cfg.m = 10;
    cfg.n = 100;
    cfg.lambda = 1e-4;
    cfg.c = 0.5;
    cfg.l_mode = LMode::FiveHess;
    let problem = build_problem(&cfg, 3)?;
    let reference = problem.reference.as_ref().expect("computed for 5hess");
    println!(
        "instance: L = {:.3}, mu = {:.3}, F* = {:.10}",
        problem.params.l, problem.params.mu, reference.f_star
    );

    let prox_cfg = ProxConfig::default_for(&problem.obj.manifold);
    let term = Termination {
        max_iters: 10_000,
        rule: TerminationRule::SearchDirection { tol: 1e-10 },
        f_ref: None,
    };
    let rpg = run(Algo::Rpg, problem.x0.clone(), &problem.params, &problem.obj, &prox_cfg, &term)?;
    let rapg = run(
        Algo::Rapg,
        problem.x0.clone(),
        &problem.params,
        &problem.obj,
        &prox_cfg,
        &term.with_f_ref(Some(rpg.summary.final_f)),
    )?;
    for rec in [&rpg, &rapg] {
        println!(
            "{:>5}: {:>6} iterations to F = {:.12} (gap {:.3e}, stop: {})",
            rec.summary.algo,
            rec.summary.iters,
            rec.summary.final_f,
            rec.summary.final_f - reference.f_star,
            rec.summary.termination.name()
        );
    }
    Ok(())
}
