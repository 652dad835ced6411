//! Adaptive-restart driver: the accelerated iteration interleaved with a
//! periodic safeguard that compares progress against a line-searched
//! proximal step from a reference point, escalates the Lipschitz estimate
//! when the line search exhausts, and restarts the momentum when the
//! accelerated iterate has fallen behind.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::geometry::{ManifoldPoint, TangentVector};
use crate::objective::CompositeObjective;
use crate::prox::{self, ProxConfig, ProxProblem};
use crate::solvers::{
    rapg_step, validate_params, RapgParams, RunRecord, RunSummary, SolverState, Termination,
    TerminationReason, TerminationRule, TraceRow,
};

/// Safeguard knobs. Defaults follow the experiment settings:
/// sigma = 1e-4, iota = 0.5, tau_l = 1.1, n_ls = 3, n0 = 5, n_max = 10,
/// n_min = 2.
#[derive(Clone, Copy, Debug)]
pub struct SafeguardConfig {
    pub n0: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub l_init: f64,
    /// Lipschitz enlarger (the safeguard's tau, distinct from the schedule
    /// interpolation scalar).
    pub tau_l: f64,
    /// Sufficient-decrease coefficient of the line search.
    pub sigma: f64,
    /// Step shrink factor of the line search.
    pub iota: f64,
    /// Maximum number of line-search backtracks.
    pub n_ls: usize,
}

impl SafeguardConfig {
    pub fn defaults(l_init: f64) -> Self {
        Self {
            n0: 5,
            n_min: 2,
            n_max: 10,
            l_init,
            tau_l: 1.1,
            sigma: 1e-4,
            iota: 0.5,
            n_ls: 3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_min == 0 {
            return Err(Error::InvalidParams("n_min must be a positive integer".into()));
        }
        if self.n_min > self.n0 || self.n0 > self.n_max {
            return Err(Error::InvalidParams(format!(
                "need n_min <= n0 <= n_max, got {} <= {} <= {}",
                self.n_min, self.n0, self.n_max
            )));
        }
        if !(self.l_init > 0.0) {
            return Err(Error::InvalidParams("l_init must be positive".into()));
        }
        if !(self.tau_l > 1.0) {
            return Err(Error::InvalidParams("tau_l must exceed 1".into()));
        }
        if !(self.sigma > 0.0 && self.sigma < 1.0) {
            return Err(Error::InvalidParams("sigma must lie in (0,1)".into()));
        }
        if !(self.iota > 0.0 && self.iota < 1.0) {
            return Err(Error::InvalidParams("iota must lie in (0,1)".into()));
        }
        if self.n_ls == 0 {
            return Err(Error::InvalidParams("n_ls must be positive".into()));
        }
        Ok(())
    }
}

/// Reference point, check interval, and Lipschitz estimate carried between
/// safeguard invocations.
#[derive(Clone, Debug)]
pub struct SafeguardState {
    pub x_tilde: ManifoldPoint,
    pub n_i: usize,
    pub l_est: f64,
    /// Iteration index of the next check.
    pub next_check_k: usize,
    /// Number of safeguard invocations so far.
    pub i: usize,
}

#[derive(Clone, Debug)]
pub struct SafeguardOutcome {
    pub triggered: bool,
    pub new_x: ManifoldPoint,
    pub new_z: ManifoldPoint,
    pub new_a: f64,
    pub n_next: usize,
    pub l_next: f64,
    pub x_tilde_next: ManifoldPoint,
    pub ls_iters: usize,
    pub alpha: f64,
    /// F at the accepted line-search point.
    pub accepted_f: f64,
    /// Norm of the proximal direction at the reference point.
    pub eta_norm: f64,
    pub f_evals: u64,
    pub prox_solves: u64,
}

#[derive(Clone, Debug)]
pub struct LineSearchResult {
    pub alpha: f64,
    pub iters: usize,
    pub accepted_f: f64,
    pub exhausted: bool,
    pub f_evals: u64,
}

/// Backtracking search for the largest alpha in {1, iota, iota^2, ...}
/// (at most n_ls shrinks) with
/// F(Exp(alpha eta)) <= F(x_tilde) - sigma alpha |eta|^2.
pub fn line_search(
    x_tilde: &ManifoldPoint,
    eta: &TangentVector,
    cfg: &SafeguardConfig,
    obj: &CompositeObjective,
    f_tilde: f64,
) -> LineSearchResult {
    let eta_sq = eta.norm() * eta.norm();
    let mut alpha = 1.0;
    let mut iters = 0usize;
    let mut f_evals = 0u64;
    let mut accepted_f = obj.value(&x_tilde.exp(&eta.scale(alpha)));
    f_evals += 1;
    while accepted_f > f_tilde - cfg.sigma * alpha * eta_sq && iters < cfg.n_ls {
        alpha *= cfg.iota;
        iters += 1;
        accepted_f = obj.value(&x_tilde.exp(&eta.scale(alpha)));
        f_evals += 1;
    }
    LineSearchResult {
        alpha,
        iters,
        accepted_f,
        exhausted: iters == cfg.n_ls,
        f_evals,
    }
}

/// Hard cap on Lipschitz escalation, as a multiple of the initial estimate.
const L_CAP_FACTOR: f64 = 1e12;

/// One safeguard invocation: proximal step at the reference point,
/// backtracking line search with Lipschitz escalation on exhaustion, the
/// trigger test against F(x_k), and the restart / interval update.
#[allow(clippy::too_many_arguments)]
pub fn safeguard(
    sg: &SafeguardState,
    x_k: &ManifoldPoint,
    z_k: &ManifoldPoint,
    a_k: f64,
    f_xk: f64,
    cfg: &SafeguardConfig,
    params: &RapgParams,
    obj: &CompositeObjective,
    prox_cfg: &ProxConfig,
) -> Result<SafeguardOutcome> {
    cfg.validate()?;
    let cap = L_CAP_FACTOR * cfg.l_init;
    let mut l_est = sg.l_est;
    let f_tilde = obj.value(&sg.x_tilde);
    let mut f_evals = 1u64;
    let mut prox_solves = 0u64;

    // Prox at the reference point, re-solved after each L escalation. Once
    // the requested decrease sigma |eta|^2 falls below the f64 resolution of
    // F the condition is no longer measurable; a step that does not
    // measurably increase F is then accepted as stationary-scale instead of
    // escalating forever.
    let mut noise_accept = false;
    let (eta, ls) = loop {
        let eff = params.with_l(l_est);
        let grad = obj.f.riem_grad(&sg.x_tilde);
        let pp = ProxProblem::new(&sg.x_tilde, &grad, eff.theta_l(), obj.h.as_ref())?;
        let sol = prox::solve(&pp, prox_cfg, None)?;
        prox_solves += 1;
        let ls = line_search(&sg.x_tilde, &sol.eta, cfg, obj, f_tilde);
        f_evals += ls.f_evals;
        if !ls.exhausted {
            break (sol.eta, ls);
        }
        let noise_floor = 16.0 * f64::EPSILON * (1.0 + f_tilde.abs());
        if cfg.sigma * sol.eta.norm() * sol.eta.norm() <= noise_floor
            && ls.accepted_f <= f_tilde + noise_floor
        {
            noise_accept = true;
            break (sol.eta, ls);
        }
        l_est *= cfg.tau_l;
        if l_est > cap {
            return Err(Error::LEscalationDiverged { l: l_est, cap });
        }
    };

    // Accepted sufficient decrease (or a stationary reference point).
    debug_assert!(
        noise_accept
            || ls.accepted_f <= f_tilde - cfg.sigma * ls.alpha * eta.norm() * eta.norm() + 1e-9,
        "line search accepted without sufficient decrease"
    );

    let triggered = ls.accepted_f < f_xk;
    let outcome = if triggered {
        if sg.n_i != cfg.n_max {
            l_est *= cfg.tau_l;
            if l_est > cap {
                return Err(Error::LEscalationDiverged { l: l_est, cap });
            }
        }
        let new_x = sg.x_tilde.exp(&eta.scale(ls.alpha));
        SafeguardOutcome {
            triggered: true,
            new_z: new_x.clone(),
            x_tilde_next: new_x.clone(),
            new_x,
            new_a: params.a0,
            n_next: (sg.n_i - 1).max(cfg.n_min),
            l_next: l_est,
            ls_iters: ls.iters,
            alpha: ls.alpha,
            accepted_f: ls.accepted_f,
            eta_norm: eta.norm(),
            f_evals,
            prox_solves,
        }
    } else {
        SafeguardOutcome {
            triggered: false,
            new_x: x_k.clone(),
            new_z: z_k.clone(),
            new_a: a_k,
            n_next: (sg.n_i + 1).min(cfg.n_max),
            l_next: l_est,
            x_tilde_next: x_k.clone(),
            ls_iters: ls.iters,
            alpha: ls.alpha,
            accepted_f: ls.accepted_f,
            eta_norm: eta.norm(),
            f_evals,
            prox_solves,
        }
    };
    // Reference descent: F(x_tilde_next) <= F(Exp(alpha eta)) <= F(x_tilde).
    debug_assert!(ls.accepted_f <= f_tilde + 1e-9 * (1.0 + f_tilde.abs()));
    debug_assert!(
        obj.value(&outcome.x_tilde_next) <= ls.accepted_f + 1e-9 * (1.0 + ls.accepted_f.abs())
    );
    Ok(outcome)
}

/// Full adaptive-restart run: accelerated steps with the safeguard invoked
/// every N_i iterations, reported in the standard trace format.
pub fn ar_rapg_run(
    x0: ManifoldPoint,
    params: &RapgParams,
    cfg: &SafeguardConfig,
    obj: &CompositeObjective,
    prox_cfg: &ProxConfig,
    term: &Termination,
) -> Result<RunRecord> {
    cfg.validate()?;
    let start = Instant::now();
    let ambient = obj.manifold.ambient_dim();
    let mut eff = params.with_l(cfg.l_init);
    validate_params(&eff, None)?;
    let origin = x0.clone();
    let mut observed_diameter = 0.0f64;
    let mut state = SolverState::initial(x0.clone(), &eff, obj);
    let mut sg = SafeguardState {
        x_tilde: x0,
        n_i: cfg.n0,
        l_est: cfg.l_init,
        next_check_k: cfg.n0,
        i: 0,
    };
    let mut rows: Vec<TraceRow> = Vec::new();
    let mut prox_solves = 0u64;
    let mut f_evals = 1u64;
    let mut safeguard_f_evals = 0u64;
    let mut safeguard_prox_solves = 0u64;
    let mut restarts = 0u64;
    let mut termination = TerminationReason::MaxIters;
    let mut final_eta_norm = f64::NAN;

    loop {
        if state.k >= term.max_iters {
            break;
        }
        let mut invoked = false;
        let mut restarted = false;
        if state.k == sg.next_check_k {
            let outcome = safeguard(
                &sg, &state.x, &state.z, state.a_k, state.f_x, cfg, &eff, obj, prox_cfg,
            )?;
            invoked = true;
            safeguard_f_evals += outcome.f_evals;
            safeguard_prox_solves += outcome.prox_solves;
            if outcome.triggered {
                restarted = true;
                restarts += 1;
                state.x = outcome.new_x.clone();
                state.z = outcome.new_z.clone();
                state.a_k = outcome.new_a;
                state.f_x = outcome.accepted_f;
                state.last_eta = None;
            }
            sg.l_est = outcome.l_next;
            eff = params.with_l(sg.l_est);
            sg.x_tilde = outcome.x_tilde_next;
            sg.n_i = outcome.n_next;
            sg.next_check_k = state.k + outcome.n_next;
            sg.i += 1;
        }

        let f_before = state.f_x;
        let (next, sched, sol) = match rapg_step(&state, &eff, obj, prox_cfg) {
            Ok(v) => v,
            Err(Error::AntipodalPoints) => {
                termination = TerminationReason::DomainViolation;
                break;
            }
            Err(e) => return Err(e),
        };
        prox_solves += 1;
        f_evals += 1;
        let eta_norm = sol.eta.norm();
        final_eta_norm = eta_norm;
        rows.push(TraceRow {
            k: state.k,
            f: f_before,
            eta_norm,
            a_k: sched.a_k,
            beta: sched.beta,
            gamma: sched.gamma,
            tau: sched.tau,
            l_est: sg.l_est,
            restart: restarted,
            safeguard: invoked,
            prox_solves,
            prox_residual: sol.residual,
            wall_ns: start.elapsed().as_nanos(),
        });
        if term.fires(sg.l_est, eff.theta, eta_norm, ambient) {
            termination = match term.rule {
                TerminationRule::SearchDirection { .. } => TerminationReason::SearchDirection,
                TerminationRule::ProxResidual { .. } => TerminationReason::ProxResidual,
            };
            break;
        }
        state = next;
        if let Ok(d) = state.x.dist(&origin) {
            observed_diameter = observed_diameter.max(d);
        }
        if let Some(f_ref) = term.f_ref {
            if state.f_x < f_ref {
                termination = TerminationReason::ReferenceReached;
                break;
            }
        }
    }

    // Stationarity surrogate at the final reference point.
    let final_safeguard_eta = {
        let grad = obj.f.riem_grad(&sg.x_tilde);
        let eff_final = params.with_l(sg.l_est);
        let pp = ProxProblem::new(&sg.x_tilde, &grad, eff_final.theta_l(), obj.h.as_ref())?;
        let sol = prox::solve(&pp, prox_cfg, None)?;
        safeguard_prox_solves += 1;
        Some(sol.eta.norm())
    };

    let final_sparsity = crate::solvers::sparsity(&state.x);
    Ok(RunRecord {
        rows,
        summary: RunSummary {
            algo: "ar-rapg".to_string(),
            seed: 0,
            iters: state.k,
            final_f: state.f_x,
            final_sparsity,
            termination,
            prox_solves,
            f_evals,
            safeguard_f_evals,
            safeguard_prox_solves,
            restarts,
            monotone_violations: 0,
            l_final: sg.l_est,
            final_eta_norm,
            observed_diameter,
            final_safeguard_eta,
            wall_ns: start.elapsed().as_nanos(),
        },
        final_x: state.x,
    })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{random_point, random_tangent, ManifoldKind};
    use crate::objective::{CompositeObjective, L1Norm, SmoothOracle, SquaredDistance};
    use crate::solvers::{run, Algo};
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;
    use std::sync::Arc;

    fn toy(
        rng: &mut ChaCha20Rng,
        l: f64,
    ) -> (CompositeObjective, ManifoldPoint, ManifoldPoint, RapgParams) {
        let kind = ManifoldKind::Sphere { n: 3 };
        let target = random_point(kind, rng);
        let x0 = {
            let off = random_tangent(&target, rng);
            target.exp(&off.scale(0.4 / off.norm()))
        };
        let f = SquaredDistance::new(target.clone(), l, 0.8);
        let obj = CompositeObjective::new(kind, Arc::new(f), Arc::new(L1Norm::zero()));
        let params = RapgParams::experiment_defaults(l, 0.8, 0.0);
        (obj, x0, target, params)
    }

    #[test]
    fn line_search_accepts_immediately_for_zero_direction() {
        let mut rng = ChaCha20Rng::seed_from_u64(70);
        let (obj, x0, _, _) = toy(&mut rng, 2.0);
        let cfg = SafeguardConfig::defaults(2.0);
        let f0 = obj.value(&x0);
        let res = line_search(&x0, &x0.zero_tangent(), &cfg, &obj, f0);
        assert_eq!(res.iters, 0);
        assert_eq!(res.alpha, 1.0);
        assert!(!res.exhausted);
    }

    #[test]
    fn line_search_full_step_on_strong_descent() {
        let mut rng = ChaCha20Rng::seed_from_u64(71);
        let (obj, x0, target, _) = toy(&mut rng, 2.0);
        let cfg = SafeguardConfig::defaults(2.0);
        let f0 = obj.value(&x0);
        // Step straight toward the minimizer.
        let eta = x0.log(&target).unwrap().scale(0.5);
        let res = line_search(&x0, &eta, &cfg, &obj, f0);
        assert_eq!(res.iters, 0);
        assert_eq!(res.alpha, 1.0);
        assert!(res.accepted_f < f0);
    }

    #[test]
    fn line_search_shrinks_on_adversarial_objective() {
        // 1-D profile constructed so only alpha = iota^2 = 0.25 passes.
        struct Bump {
            target: ManifoldPoint,
        }
        impl SmoothOracle for Bump {
            fn value(&self, x: &ManifoldPoint) -> f64 {
                let d = x.dist(&self.target).unwrap();
                // Grows away from target except very close to it.
                if d < 0.11 {
                    d * d
                } else {
                    d * d + 10.0
                }
            }
            fn riem_grad(&self, x: &ManifoldPoint) -> TangentVector {
                x.log(&self.target).unwrap().scale(-2.0)
            }
            fn smoothness(&self) -> f64 {
                2.0
            }
            fn strong_convexity(&self) -> f64 {
                0.0
            }
        }
        let mut rng = ChaCha20Rng::seed_from_u64(72);
        let kind = ManifoldKind::Sphere { n: 3 };
        let target = random_point(kind, &mut rng);
        let x0 = {
            let off = random_tangent(&target, &mut rng);
            target.exp(&off.scale(0.1 / off.norm()))
        };
        let obj = CompositeObjective::new(kind, Arc::new(Bump { target: target.clone() }), Arc::new(L1Norm::zero()));
        let cfg = SafeguardConfig::defaults(2.0);
        let f0 = obj.value(&x0);
        // Direction overshoots past the well unless shrunk twice.
        let eta = x0.log(&target).unwrap().scale(4.0);
        let res = line_search(&x0, &eta, &cfg, &obj, f0);
        assert_eq!(res.iters, 2, "alpha path {}", res.alpha);
        assert!((res.alpha - 0.25).abs() < 1e-15);
    }

    #[test]
    fn safeguard_trigger_respects_interval_bounds() {
        let mut rng = ChaCha20Rng::seed_from_u64(73);
        let (obj, x0, target, params) = toy(&mut rng, 2.0);
        let cfg = SafeguardConfig::defaults(2.0);
        let prox_cfg = ProxConfig::default_for(&obj.manifold);
        // Make the accelerated iterate artificially bad so the safeguard
        // fires: x_k far from the minimizer, reference point close.
        let x_tilde = {
            let off = random_tangent(&target, &mut rng);
            target.exp(&off.scale(0.05 / off.norm()))
        };
        let sg = SafeguardState {
            x_tilde,
            n_i: cfg.n_max,
            l_est: cfg.l_init,
            next_check_k: 0,
            i: 0,
        };
        let f_xk = obj.value(&x0);
        let out = safeguard(&sg, &x0, &x0, 5.0, f_xk, &cfg, &params, &obj, &prox_cfg).unwrap();
        assert!(out.triggered);
        // Trigger with N_i = N_max: L unchanged, A reset, N decremented.
        assert_eq!(out.l_next, cfg.l_init);
        assert_eq!(out.new_a, params.a0);
        assert_eq!(out.n_next, cfg.n_max - 1);
        assert!((out.new_z.coords() - out.new_x.coords()).norm() == 0.0);
        // Reference moves to the new iterate.
        assert_eq!(out.x_tilde_next.coords(), out.new_x.coords());
    }

    #[test]
    fn safeguard_no_trigger_grows_interval_to_cap() {
        let mut rng = ChaCha20Rng::seed_from_u64(74);
        let (obj, _, target, params) = toy(&mut rng, 2.0);
        let cfg = SafeguardConfig::defaults(2.0);
        let prox_cfg = ProxConfig::default_for(&obj.manifold);
        // Accelerated iterate essentially optimal; reference point worse.
        let x_k = {
            let off = random_tangent(&target, &mut rng);
            target.exp(&off.scale(1e-8 / off.norm()))
        };
        let x_tilde = {
            let off = random_tangent(&target, &mut rng);
            target.exp(&off.scale(0.3 / off.norm()))
        };
        let f_xk = obj.value(&x_k);
        for n_i in [cfg.n_max, 5] {
            let sg = SafeguardState {
                x_tilde: x_tilde.clone(),
                n_i,
                l_est: cfg.l_init,
                next_check_k: 0,
                i: 0,
            };
            let out =
                safeguard(&sg, &x_k, &x_k, 7.0, f_xk, &cfg, &params, &obj, &prox_cfg).unwrap();
            assert!(!out.triggered);
            assert_eq!(out.n_next, (n_i + 1).min(cfg.n_max));
            assert_eq!(out.new_a, 7.0);
            // No restart: iterates pass through unchanged, reference becomes x_k.
            assert_eq!(out.new_x.coords(), x_k.coords());
            assert_eq!(out.x_tilde_next.coords(), x_k.coords());
        }
    }

    #[test]
    fn untriggered_run_equals_plain_rapg() {
        let mut rng = ChaCha20Rng::seed_from_u64(75);
        let (obj, x0, _, params) = toy(&mut rng, 2.0);
        let prox_cfg = ProxConfig::default_for(&obj.manifold);
        let cfg = SafeguardConfig::defaults(params.l);
        let term = Termination {
            max_iters: 60,
            rule: TerminationRule::SearchDirection { tol: 1e-30 },
            f_ref: None,
        };
        let plain = run(Algo::Rapg, x0.clone(), &params, &obj, &prox_cfg, &term).unwrap();
        let ar = ar_rapg_run(x0, &params, &cfg, &obj, &prox_cfg, &term).unwrap();
        assert_eq!(ar.summary.restarts, 0, "well-conditioned toy never triggers");
        assert!(
            (plain.summary.final_f - ar.summary.final_f).abs()
                <= 1e-12 * (1.0 + plain.summary.final_f.abs()),
            "plain {} vs safeguarded {}",
            plain.summary.final_f,
            ar.summary.final_f
        );
        let d = plain.final_x.dist(&ar.final_x).unwrap();
        assert!(d < 1e-10, "iterate sequences diverged by {d}");
    }

    #[test]
    fn underestimated_l_escalates_and_still_converges() {
        let mut rng = ChaCha20Rng::seed_from_u64(76);
        let (obj, x0, _, _) = toy(&mut rng, 2.0);
        let prox_cfg = ProxConfig::default_for(&obj.manifold);
        // Initial estimate 100x too small; the convex-rate schedule (mu = 0)
        // stays admissible at every estimate.
        let params = RapgParams::experiment_defaults(2.0, 0.0, 0.0);
        let cfg = SafeguardConfig::defaults(params.l / 100.0);
        let small = params.with_l(cfg.l_init);
        let term = Termination {
            max_iters: 3000,
            rule: TerminationRule::SearchDirection { tol: 1e-10 },
            f_ref: None,
        };
        let ar = ar_rapg_run(x0.clone(), &small, &cfg, &obj, &prox_cfg, &term).unwrap();
        let reference = run(Algo::Rpg, x0, &params, &obj, &prox_cfg, &term).unwrap();
        assert!(
            ar.summary.final_f <= reference.summary.final_f + 1e-6,
            "ar {} vs rpg {}",
            ar.summary.final_f,
            reference.summary.final_f
        );
        assert!(ar.summary.l_final > cfg.l_init, "no escalation happened");
    }

    #[test]
    fn reference_sequence_is_monotone() {
        let mut rng = ChaCha20Rng::seed_from_u64(77);
        let (obj, x0, _, params) = toy(&mut rng, 2.0);
        let prox_cfg = ProxConfig::default_for(&obj.manifold);
        let cfg = SafeguardConfig::defaults(params.l);
        let term = Termination {
            max_iters: 500,
            rule: TerminationRule::SearchDirection { tol: 1e-14 },
            f_ref: None,
        };
        let rec = ar_rapg_run(x0, &params, &cfg, &obj, &prox_cfg, &term).unwrap();
        // Safeguard-step rows bound the reference values; the trace F at
        // safeguarded rows after a restart must never increase.
        let mut last_restart_f = f64::INFINITY;
        for row in rec.rows.iter().filter(|r| r.restart) {
            assert!(row.f <= last_restart_f + 1e-9);
            last_restart_f = row.f;
        }
        assert!(rec.summary.final_safeguard_eta.unwrap() < 1e-4);
    }

    #[test]
    fn l_escalation_hard_cap_errors() {
        // A gradient oracle that points away from every descent direction
        // makes the line search fail at any estimate, which must end in the
        // hard-cap error instead of an infinite escalation loop.
        struct WrongWay {
            target: ManifoldPoint,
        }
        impl SmoothOracle for WrongWay {
            fn value(&self, x: &ManifoldPoint) -> f64 {
                let d = x.dist(&self.target).unwrap();
                d * d
            }
            fn riem_grad(&self, x: &ManifoldPoint) -> TangentVector {
                // Deliberately the ascent direction.
                x.log(&self.target).unwrap().scale(2.0)
            }
            fn smoothness(&self) -> f64 {
                2.0
            }
            fn strong_convexity(&self) -> f64 {
                0.0
            }
        }
        let mut rng = ChaCha20Rng::seed_from_u64(78);
        let kind = ManifoldKind::Sphere { n: 3 };
        let target = random_point(kind, &mut rng);
        let x0 = {
            let off = random_tangent(&target, &mut rng);
            target.exp(&off.scale(0.5 / off.norm()))
        };
        let obj = CompositeObjective::new(
            kind,
            Arc::new(WrongWay { target }),
            Arc::new(L1Norm::zero()),
        );
        let params = RapgParams::experiment_defaults(1.0, 0.0, 0.0);
        let mut cfg = SafeguardConfig::defaults(1e-3);
        cfg.tau_l = 8.0;
        let prox_cfg = ProxConfig::default_for(&kind);
        let sg = SafeguardState {
            x_tilde: x0.clone(),
            n_i: 5,
            l_est: cfg.l_init,
            next_check_k: 0,
            i: 0,
        };
        let f0 = obj.value(&x0);
        let result = safeguard(&sg, &x0, &x0, 1.0, f0, &cfg, &params, &obj, &prox_cfg);
        assert!(matches!(result, Err(Error::LEscalationDiverged { .. })));
    }
}
