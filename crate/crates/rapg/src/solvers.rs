//! The accelerated proximal gradient iteration (RAPG), its schedule of
//! scalar parameters, the non-accelerated proximal gradient baseline (RPG),
//! parameter admissibility checks, and the potential-function diagnostics
//! used by the convergence tests.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::geometry::{ManifoldPoint, TangentVector};
use crate::objective::CompositeObjective;
use crate::prox::{self, ProxConfig, ProxProblem, ProxSolution};

/// Constant tuple of algorithm parameters with the admissibility invariants
/// of the Require line.
#[derive(Clone, Copy, Debug)]
pub struct RapgParams {
    /// Geodesic smoothness constant of f.
    pub l: f64,
    /// Geodesic strong-convexity constant of f (0 for merely convex).
    pub mu: f64,
    /// Retraction-convexity constant of h.
    pub rho: f64,
    /// Curvature constant, upper Hessian bound of half squared distance.
    pub zeta: f64,
    /// Curvature constant, lower Hessian bound of half squared distance.
    pub delta: f64,
    /// Momentum-correction constant, xi >= zeta.
    pub xi: f64,
    /// Step-size safety factor, theta >= 1.
    pub theta: f64,
    /// Initial value of the growth sequence A.
    pub a0: f64,
}

impl RapgParams {
    /// The experiment default: xi = 1, A0 = 0.001,
    /// theta = max((rho + (mu - rho) xi)/L, 1).
    pub fn experiment_defaults(l: f64, mu: f64, rho: f64) -> Self {
        let xi = 1.0;
        let theta = ((rho + (mu - rho) * xi) / l).max(1.0);
        Self {
            l,
            mu,
            rho,
            zeta: 1.0,
            delta: 1.0,
            xi,
            theta,
            a0: 0.001,
        }
    }

    /// Same parameters with a replaced smoothness estimate, used by the
    /// adaptive-restart driver when it escalates L.
    pub fn with_l(&self, l: f64) -> Self {
        Self { l, ..*self }
    }

    pub fn theta_l(&self) -> f64 {
        self.theta * self.l
    }

    /// q = (mu - rho) / (theta L - rho), the rate ratio of the schedule.
    fn q(&self) -> f64 {
        (self.mu - self.rho) / (self.theta_l() - self.rho)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConditionCase {
    /// zeta = delta = xi = 1 (flat space, no correction).
    CaseI,
    /// zeta = delta = 1 and xi > 1.
    CaseII,
    /// zeta > delta (curved domain) with xi large enough for the chosen
    /// lambda.
    CaseIII,
    /// No sufficient condition applies; the potential decrease is not
    /// certified.
    NotCertified,
}

/// Outcome of the admissibility check, including which sufficient condition
/// for the potential decrease applies.
#[derive(Clone, Copy, Debug)]
pub struct ConditionReport {
    pub applicable_condition: ConditionCase,
    pub theta_lower: f64,
    pub a1_lower: f64,
    pub lambda_used: f64,
    pub satisfied: bool,
    /// theta sits exactly on the strict Require bound (accepted, flagged).
    pub theta_at_boundary: bool,
}

/// Checks every Require-line inequality, then evaluates the sufficient
/// conditions for the potential decrease with the caller-chosen lambda in
/// (1, 4) for the curved case (default 2, the conservative choice).
pub fn validate_params(p: &RapgParams, lambda: Option<f64>) -> Result<ConditionReport> {
    let lambda = lambda.unwrap_or(2.0);
    if !(p.l > p.mu) {
        return Err(Error::InvalidParams(format!("L > mu violated: L={}, mu={}", p.l, p.mu)));
    }
    if !(p.mu >= p.rho) {
        return Err(Error::InvalidParams(format!(
            "mu >= rho violated: mu={}, rho={}",
            p.mu, p.rho
        )));
    }
    if !(p.mu >= 0.0) {
        return Err(Error::InvalidParams(format!("mu >= 0 violated: mu={}", p.mu)));
    }
    if !(p.zeta >= 1.0) {
        return Err(Error::InvalidParams(format!("zeta >= 1 violated: zeta={}", p.zeta)));
    }
    if !(p.delta <= 1.0) {
        return Err(Error::InvalidParams(format!("delta <= 1 violated: delta={}", p.delta)));
    }
    if !(p.xi >= p.zeta) {
        return Err(Error::InvalidParams(format!(
            "xi >= zeta violated: xi={}, zeta={}",
            p.xi, p.zeta
        )));
    }
    if !(p.theta >= 1.0) {
        return Err(Error::InvalidParams(format!("theta >= 1 violated: theta={}", p.theta)));
    }
    let theta_req = (p.rho + (p.mu - p.rho) * p.xi) / p.l;
    let theta_at_boundary = p.theta == theta_req;
    if p.theta < theta_req {
        return Err(Error::InvalidParams(format!(
            "theta > (rho + (mu - rho) xi)/L violated: theta={}, bound={}",
            p.theta, theta_req
        )));
    }
    let q = p.q();
    if !(p.xi - q > 0.0) {
        return Err(Error::InvalidParams(format!(
            "degenerate A-update: xi - (mu - rho)/(theta L - rho) = {}",
            p.xi - q
        )));
    }
    let denom = 1.0 - (p.mu - p.rho) * p.xi / (p.theta_l() - p.rho);
    if p.xi > 1.0 {
        if !(denom > 0.0) {
            return Err(Error::InvalidParams(
                "1 - (mu - rho) xi / (theta L - rho) must be positive for xi > 1".into(),
            ));
        }
        let a0_bound = p.xi * (p.xi - 1.0) / denom;
        if !(p.a0 > a0_bound) {
            return Err(Error::InvalidParams(format!(
                "A0 > xi(xi-1)/(1 - (mu-rho) xi/(theta L - rho)) violated: A0={}, bound={}",
                p.a0, a0_bound
            )));
        }
    } else if !(p.a0 > 0.0) {
        return Err(Error::InvalidParams(format!("A0 > 0 violated: A0={}", p.a0)));
    }

    let a1 = next_schedule(p, p.a0).a_next;
    let w = p.theta_l() - p.rho;
    let report = if p.zeta == p.delta {
        if p.xi == 1.0 {
            ConditionReport {
                applicable_condition: ConditionCase::CaseI,
                theta_lower: theta_req.max(1.0),
                a1_lower: 0.0,
                lambda_used: lambda,
                satisfied: true,
                theta_at_boundary,
            }
        } else {
            let theta1 = (4.0 * p.xi - 1.0).powi(2) * (p.mu - p.rho) / (9.0 * p.xi * p.l) + p.rho / p.l;
            let n1 = 9.0 - (4.0 * p.xi - 1.0).powi(2) * (p.mu - p.rho) / (w * p.xi);
            let a1_lower = if n1 > 0.0 {
                (4.0 * p.xi - 1.0).powi(2) / n1
            } else {
                f64::INFINITY
            };
            ConditionReport {
                applicable_condition: ConditionCase::CaseII,
                theta_lower: theta1.max(1.0),
                a1_lower,
                lambda_used: lambda,
                satisfied: p.theta >= theta1.max(1.0) && n1 > 0.0 && a1 >= a1_lower,
                theta_at_boundary,
            }
        }
    } else {
        if !(1.0 < lambda && lambda < 4.0) {
            return Err(Error::InvalidParams(format!("lambda must lie in (1, 4), got {lambda}")));
        }
        let xi_needed = p.zeta + (p.zeta - p.delta) / (lambda - 1.0);
        if p.xi >= xi_needed {
            let fl = 4.0 / lambda;
            let theta2 =
                (fl * p.xi - 1.0).powi(2) * (p.mu - p.rho) / ((fl - 1.0).powi(2) * p.l * p.xi)
                    + p.rho / p.l;
            let n2 = (fl - 1.0).powi(2) - (fl * p.xi - 1.0).powi(2) * (p.mu - p.rho) / (w * p.xi);
            let a1_lower = if n2 > 0.0 {
                (fl * p.xi - 1.0).powi(2) / n2
            } else {
                f64::INFINITY
            };
            ConditionReport {
                applicable_condition: ConditionCase::CaseIII,
                theta_lower: theta2.max(1.0),
                a1_lower,
                lambda_used: lambda,
                satisfied: p.theta >= theta2.max(1.0) && n2 > 0.0 && a1 >= a1_lower,
                theta_at_boundary,
            }
        } else {
            ConditionReport {
                applicable_condition: ConditionCase::NotCertified,
                theta_lower: theta_req.max(1.0),
                a1_lower: f64::INFINITY,
                lambda_used: lambda,
                satisfied: false,
                theta_at_boundary,
            }
        }
    };
    Ok(report)
}

/// One iteration's derived scalars.
#[derive(Clone, Copy, Debug)]
pub struct ScheduleStep {
    pub a_k: f64,
    pub a_next: f64,
    pub beta: f64,
    pub gamma: f64,
    pub tau: f64,
    pub g_next: f64,
    pub e_next: f64,
    pub p_cur: f64,
    pub p_next: f64,
}

/// Advances the growth sequence and derives the momentum scalars.
pub fn next_schedule(p: &RapgParams, a_k: f64) -> ScheduleStep {
    let w = p.theta_l() - p.rho;
    let d = p.mu - p.rho;
    let q = d / w;
    let xi = p.xi;
    // sqrt(xi^2 + 4 xi^2 A + 4 q xi A^2), factored to survive huge A.
    let sqrt_disc = if a_k > 1e100 {
        a_k * (4.0 * q * xi + 4.0 * xi * xi / a_k + (xi / a_k) * (xi / a_k)).sqrt()
    } else {
        (xi * xi + 4.0 * xi * xi * a_k + 4.0 * q * xi * a_k * a_k).sqrt()
    };
    let a_next = (xi + 2.0 * xi * a_k + sqrt_disc) / (2.0 * (xi - q));
    let p_cur = xi * w + d * a_k;
    let p_next = xi * w + d * a_next;
    let beta = p_cur / p_next;
    let gamma = w * (a_next - a_k) / p_next;
    let tau = beta * a_next / (gamma * a_k + beta * a_next);
    let g_next = 1.0 + d * a_next / (w * xi);
    let e_next = a_next.sqrt() - xi * g_next.sqrt();
    ScheduleStep {
        a_k,
        a_next,
        beta,
        gamma,
        tau,
        g_next,
        e_next,
        p_cur,
        p_next,
    }
}

/// Relative residual of the larger-root identity
/// A+/xi = w (A+ - A)^2 / (xi w + d A+), evaluated in overflow-safe order.
pub fn larger_root_residual(p: &RapgParams, step: &ScheduleStep) -> f64 {
    let w = p.theta_l() - p.rho;
    let lhs = step.a_next / p.xi;
    let da = step.a_next - step.a_k;
    let rhs = w * da * (da / step.p_next);
    ((lhs - rhs) / lhs).abs()
}

/// Whether the curvature-correction inequality
/// 4 (xi - zeta) E_{k+1} - (xi - delta)(sqrt A_{k+1} - sqrt G_{k+1}) >= 0
/// holds for this step. Under any certified condition it holds for all k.
pub fn check_d11(p: &RapgParams, step: &ScheduleStep) -> bool {
    let h = 4.0 * (p.xi - p.zeta) * step.e_next
        - (p.xi - p.delta) * (step.a_next.sqrt() - step.g_next.sqrt());
    h >= 0.0
}

#[derive(Clone, Debug)]
pub struct GrowthReport {
    /// min over k of A_k - (sqrt(A0) + k/2)^2.
    pub min_sublinear_margin: f64,
    /// min over k of ln A_k - ln(A0 / (1 - sqrt(q/xi))^k), when mu > rho.
    pub min_geometric_log_margin: Option<f64>,
    pub ok: bool,
}

/// Verifies the growth lower bounds of the A-sequence along a trace.
pub fn growth_check(p: &RapgParams, a_trace: &[f64]) -> GrowthReport {
    let mut min_sub = f64::INFINITY;
    for (k, a) in a_trace.iter().enumerate() {
        let bound = (p.a0.sqrt() + k as f64 / 2.0).powi(2);
        min_sub = min_sub.min(a - bound);
    }
    let geo = if p.mu > p.rho {
        let rate = 1.0 - (p.q() / p.xi).sqrt();
        let mut min_geo = f64::INFINITY;
        for (k, a) in a_trace.iter().enumerate() {
            let bound_log = p.a0.ln() - k as f64 * rate.ln();
            min_geo = min_geo.min(a.ln() - bound_log);
        }
        Some(min_geo)
    } else {
        None
    };
    let ok = min_sub >= -1e-12 && geo.is_none_or(|g| g >= -1e-12);
    GrowthReport {
        min_sublinear_margin: min_sub,
        min_geometric_log_margin: geo,
        ok,
    }
}

/// The iterate triple plus bookkeeping carried between steps.
#[derive(Clone, Debug)]
pub struct SolverState {
    pub x: ManifoldPoint,
    pub y: ManifoldPoint,
    pub z: ManifoldPoint,
    pub k: usize,
    pub a_k: f64,
    pub f_x: f64,
    pub last_eta: Option<TangentVector>,
}

impl SolverState {
    pub fn initial(x0: ManifoldPoint, params: &RapgParams, obj: &CompositeObjective) -> Self {
        let f_x = obj.value(&x0);
        Self {
            y: x0.clone(),
            z: x0.clone(),
            x: x0,
            k: 0,
            a_k: params.a0,
            f_x,
            last_eta: None,
        }
    }
}

/// One accelerated step: interpolate y between x and z, solve the proximal
/// subproblem at y, step to the new x, and update the momentum point z by
/// parallel transport.
pub fn rapg_step(
    state: &SolverState,
    params: &RapgParams,
    obj: &CompositeObjective,
    prox_cfg: &ProxConfig,
) -> Result<(SolverState, ScheduleStep, ProxSolution)> {
    let sched = next_schedule(params, state.a_k);
    let to_z = state.x.log(&state.z)?;
    let y = state.x.exp(&to_z.scale(sched.tau));
    let grad = obj.f.riem_grad(&y);
    let pp = ProxProblem::new(&y, &grad, params.theta_l(), obj.h.as_ref())?;
    let sol = prox::solve(&pp, prox_cfg, state.last_eta.as_ref())?;
    let x_next = y.exp(&sol.eta);
    let v = y.log(&state.z)?.scale(sched.beta).axpy(sched.gamma, &sol.eta);
    let carried = v.axpy(-1.0, &sol.eta);
    let z_next = x_next.exp(&y.transport(&x_next, &carried)?);
    let f_x = obj.value(&x_next);
    Ok((
        SolverState {
            x: x_next,
            y,
            z: z_next,
            k: state.k + 1,
            a_k: sched.a_next,
            f_x,
            last_eta: Some(sol.eta.clone()),
        },
        sched,
        sol,
    ))
}

/// One baseline step: proximal subproblem at the current iterate, no
/// momentum. Monotone when theta L dominates the true smoothness constant.
pub fn rpg_step(
    state: &SolverState,
    params: &RapgParams,
    obj: &CompositeObjective,
    prox_cfg: &ProxConfig,
) -> Result<(SolverState, ProxSolution)> {
    let grad = obj.f.riem_grad(&state.x);
    let pp = ProxProblem::new(&state.x, &grad, params.theta_l(), obj.h.as_ref())?;
    let sol = prox::solve(&pp, prox_cfg, state.last_eta.as_ref())?;
    let x_next = state.x.exp(&sol.eta);
    let f_x = obj.value(&x_next);
    Ok((
        SolverState {
            y: state.x.clone(),
            z: x_next.clone(),
            x: x_next,
            k: state.k + 1,
            a_k: state.a_k,
            f_x,
            last_eta: Some(sol.eta.clone()),
        },
        sol,
    ))
}

/// The potential function
/// Phi_k = A_k (F(x_k) - F*) + P_k/2 (|log_x z - log_x x*|^2
///         + (xi - 1) |log_x z|^2).
pub fn potential(
    state: &SolverState,
    x_star: &ManifoldPoint,
    f_star: f64,
    params: &RapgParams,
) -> Result<f64> {
    let w = params.theta_l() - params.rho;
    let p_k = params.xi * w + (params.mu - params.rho) * state.a_k;
    let to_z = state.x.log(&state.z)?;
    let to_star = state.x.log(x_star)?;
    let diff = to_z.axpy(-1.0, &to_star);
    let mut value = state.a_k * (state.f_x - f_star) + 0.5 * p_k * diff.norm() * diff.norm();
    if params.xi != 1.0 {
        value += 0.5 * p_k * (params.xi - 1.0) * to_z.norm() * to_z.norm();
    }
    Ok(value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Rpg,
    Rapg,
}

impl Algo {
    pub fn name(&self) -> &'static str {
        match self {
            Algo::Rpg => "rpg",
            Algo::Rapg => "rapg",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TerminationReason {
    /// (L |eta|)^2 dropped under tol * n * p.
    SearchDirection,
    /// theta L |eta| dropped under the requested threshold.
    ProxResidual,
    MaxIters,
    /// Objective fell below the supplied reference minimum.
    ReferenceReached,
    /// Iterates left the domain where geodesics are unique (the bounded
    /// uniquely-convex domain assumption failed); the trace up to that point
    /// is preserved.
    DomainViolation,
}

impl TerminationReason {
    pub fn name(&self) -> &'static str {
        match self {
            TerminationReason::SearchDirection => "search-direction",
            TerminationReason::ProxResidual => "prox-residual",
            TerminationReason::MaxIters => "max-iters",
            TerminationReason::ReferenceReached => "reference-reached",
            TerminationReason::DomainViolation => "domain-violation",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum TerminationRule {
    /// (L |eta|)^2 < tol * n * p; the experiment default with tol = 1e-10.
    SearchDirection { tol: f64 },
    /// theta L |eta| <= threshold; the tight reference-minimum criterion.
    ProxResidual { threshold: f64 },
}

#[derive(Clone, Copy, Debug)]
pub struct Termination {
    pub max_iters: usize,
    pub rule: TerminationRule,
    /// Stop once F(x) drops below this value (accelerated methods only,
    /// supplied by the harness from the baseline minimum).
    pub f_ref: Option<f64>,
}

impl Termination {
    pub fn standard() -> Self {
        Self {
            max_iters: 10_000,
            rule: TerminationRule::SearchDirection { tol: 1e-10 },
            f_ref: None,
        }
    }

    pub fn with_f_ref(mut self, f_ref: Option<f64>) -> Self {
        self.f_ref = f_ref;
        self
    }

    pub(crate) fn fires(&self, l_est: f64, theta: f64, eta_norm: f64, ambient_dim: usize) -> bool {
        match self.rule {
            TerminationRule::SearchDirection { tol } => {
                (l_est * eta_norm).powi(2) < tol * ambient_dim as f64
            }
            TerminationRule::ProxResidual { threshold } => theta * l_est * eta_norm <= threshold,
        }
    }
}

/// One per-iteration row of the run trace.
#[derive(Clone, Debug)]
pub struct TraceRow {
    pub k: usize,
    pub f: f64,
    pub eta_norm: f64,
    pub a_k: f64,
    pub beta: f64,
    pub gamma: f64,
    pub tau: f64,
    pub l_est: f64,
    pub restart: bool,
    pub safeguard: bool,
    pub prox_solves: u64,
    pub prox_residual: f64,
    pub wall_ns: u128,
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub algo: String,
    pub seed: u64,
    pub iters: usize,
    pub final_f: f64,
    pub final_sparsity: f64,
    pub termination: TerminationReason,
    pub prox_solves: u64,
    pub f_evals: u64,
    pub safeguard_f_evals: u64,
    pub safeguard_prox_solves: u64,
    pub restarts: u64,
    pub monotone_violations: u64,
    pub l_final: f64,
    pub final_eta_norm: f64,
    /// Largest geodesic distance from the initial iterate observed along
    /// the run; a reporting-only lower bound for the domain diameter.
    pub observed_diameter: f64,
    /// Norm of the proximal direction at the final reference point of the
    /// adaptive-restart driver; the computable stationarity surrogate.
    pub final_safeguard_eta: Option<f64>,
    pub wall_ns: u128,
}

#[derive(Clone, Debug)]
pub struct RunRecord {
    pub rows: Vec<TraceRow>,
    pub summary: RunSummary,
    pub final_x: ManifoldPoint,
}

/// Fraction of coordinates with magnitude below 1e-6.
pub fn sparsity(x: &ManifoldPoint) -> f64 {
    let n = x.coords().len();
    let zeros = x.coords().iter().filter(|v| v.abs() < 1e-6).count();
    zeros as f64 / n as f64
}

/// Observation hook invoked once per iteration before the state advances.
pub struct StepSnapshot<'a> {
    pub k: usize,
    pub state: &'a SolverState,
    pub schedule: Option<&'a ScheduleStep>,
    pub prox: &'a ProxSolution,
}

pub trait RunObserver {
    fn on_step(&mut self, _snap: &StepSnapshot<'_>) {}
}

pub struct NoopObserver;

impl RunObserver for NoopObserver {}

/// Full run of RPG or RAPG with the standard trace.
pub fn run(
    algo: Algo,
    x0: ManifoldPoint,
    params: &RapgParams,
    obj: &CompositeObjective,
    prox_cfg: &ProxConfig,
    term: &Termination,
) -> Result<RunRecord> {
    run_observed(algo, x0, params, obj, prox_cfg, term, &mut NoopObserver)
}

pub fn run_observed(
    algo: Algo,
    x0: ManifoldPoint,
    params: &RapgParams,
    obj: &CompositeObjective,
    prox_cfg: &ProxConfig,
    term: &Termination,
    observer: &mut dyn RunObserver,
) -> Result<RunRecord> {
    validate_params(params, None)?;
    let start = Instant::now();
    let ambient = obj.manifold.ambient_dim();
    let origin = x0.clone();
    let mut observed_diameter = 0.0f64;
    let mut state = SolverState::initial(x0, params, obj);
    let mut rows = Vec::new();
    let mut prox_solves = 0u64;
    let mut f_evals = 1u64;
    let mut monotone_violations = 0u64;
    let mut termination = TerminationReason::MaxIters;
    let mut final_eta_norm = f64::NAN;

    loop {
        if state.k >= term.max_iters {
            break;
        }
        let f_before = state.f_x;
        let step_result = match algo {
            Algo::Rapg => rapg_step(&state, params, obj, prox_cfg)
                .map(|(next, sched, sol)| (next, Some(sched), sol)),
            Algo::Rpg => {
                rpg_step(&state, params, obj, prox_cfg).map(|(next, sol)| (next, None, sol))
            }
        };
        let (next, sched, sol) = match step_result {
            Ok(v) => v,
            Err(Error::AntipodalPoints) => {
                termination = TerminationReason::DomainViolation;
                break;
            }
            Err(e) => return Err(e),
        };
        prox_solves += 1;
        f_evals += 1;
        observer.on_step(&StepSnapshot {
            k: state.k,
            state: &state,
            schedule: sched.as_ref(),
            prox: &sol,
        });
        let eta_norm = sol.eta.norm();
        final_eta_norm = eta_norm;
        rows.push(TraceRow {
            k: state.k,
            f: f_before,
            eta_norm,
            a_k: sched.map_or(0.0, |s| s.a_k),
            beta: sched.map_or(0.0, |s| s.beta),
            gamma: sched.map_or(0.0, |s| s.gamma),
            tau: sched.map_or(0.0, |s| s.tau),
            l_est: params.l,
            restart: false,
            safeguard: false,
            prox_solves,
            prox_residual: sol.residual,
            wall_ns: start.elapsed().as_nanos(),
        });
        if term.fires(params.l, params.theta, eta_norm, ambient) {
            termination = match term.rule {
                TerminationRule::SearchDirection { .. } => TerminationReason::SearchDirection,
                TerminationRule::ProxResidual { .. } => TerminationReason::ProxResidual,
            };
            break;
        }
        if algo == Algo::Rpg && next.f_x > f_before + 1e-12 * (1.0 + f_before.abs()) {
            // Signals an underestimated L; logged, not fatal.
            monotone_violations += 1;
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

    let final_sparsity = sparsity(&state.x);
    Ok(RunRecord {
        rows,
        summary: RunSummary {
            algo: algo.name().to_string(),
            seed: 0,
            iters: state.k,
            final_f: state.f_x,
            final_sparsity,
            termination,
            prox_solves,
            f_evals,
            safeguard_f_evals: 0,
            safeguard_prox_solves: 0,
            restarts: 0,
            monotone_violations,
            l_final: params.l,
            final_eta_norm,
            observed_diameter,
            final_safeguard_eta: None,
            wall_ns: start.elapsed().as_nanos(),
        },
        final_x: state.x,
    })
}
