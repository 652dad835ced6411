//! Experiment orchestration: model assembly from a flat configuration,
//! parallel (algorithm x seed) runs with CSV artifacts, the
//! condition-number scaling study, and the multi-seed comparison grid.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::bench::csvio;
use crate::bench::data::{
    gen_spca_oblique_data, gen_spca_sphere_data, hessian_eigen_bounds, init_point_oblique,
    init_point_sphere,
};
use crate::bench::reference::{reference_minimum, ReferenceMinimum};
use crate::bench::slope::{fit_slope, least_squares_line, SlopeFit};
use crate::error::{Error, Result};
use crate::geometry::ManifoldPoint;
use crate::objective::{CompositeObjective, L1Norm, LeastSquares, SpcaObliqueInstance, SpcaSphereInstance};
use crate::prox::ProxConfig;
use crate::restart::{ar_rapg_run, SafeguardConfig};
use crate::solvers::{run, Algo, RapgParams, RunRecord, Termination, TerminationRule};

pub const WORKERS_ENV: &str = "RAPG_BENCH_WORKERS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    SpcaSphere,
    SpcaOblique,
    EuclideanLasso,
    SphereQuadratic,
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::SpcaSphere => "spca-sphere",
            Model::SpcaOblique => "spca-oblique",
            Model::EuclideanLasso => "euclidean-lasso",
            Model::SphereQuadratic => "sphere-quadratic",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "spca-sphere" => Ok(Model::SpcaSphere),
            "spca-oblique" => Ok(Model::SpcaOblique),
            "euclidean-lasso" => Ok(Model::EuclideanLasso),
            "sphere-quadratic" => Ok(Model::SphereQuadratic),
            other => Err(Error::InvalidInput(format!("unknown model '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LMode {
    /// L = 5 lambda_max(Hess f(x*)), mu = lambda_min; sphere models.
    FiveHess,
    /// L = 2 |D^2|_F^2; oblique model.
    TwoD2,
    /// L = 1.2 |D^2|_F^2; the deliberately tight estimate.
    OnePointTwoD2,
    Manual(f64),
}

impl LMode {
    pub fn name(&self) -> String {
        match self {
            LMode::FiveHess => "5hess".into(),
            LMode::TwoD2 => "2d2".into(),
            LMode::OnePointTwoD2 => "1.2d2".into(),
            LMode::Manual(l) => format!("manual:{l}"),
        }
    }

    pub fn parse(s: &str, manual_l: Option<f64>) -> Result<Self> {
        match s {
            "5hess" => Ok(LMode::FiveHess),
            "2d2" => Ok(LMode::TwoD2),
            "1.2d2" => Ok(LMode::OnePointTwoD2),
            "manual" => manual_l.map(LMode::Manual).ok_or_else(|| {
                Error::InvalidInput("--L-mode manual requires --L <value>".into())
            }),
            other => Err(Error::InvalidInput(format!("unknown L mode '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AlgoChoice {
    Rpg,
    Rapg,
    ArRapg,
}

impl AlgoChoice {
    pub fn name(&self) -> &'static str {
        match self {
            AlgoChoice::Rpg => "rpg",
            AlgoChoice::Rapg => "rapg",
            AlgoChoice::ArRapg => "ar-rapg",
        }
    }

    pub fn parse_list(s: &str) -> Result<Vec<AlgoChoice>> {
        let mut out = Vec::new();
        for part in s.split(',').filter(|p| !p.is_empty()) {
            out.push(match part {
                "rpg" => AlgoChoice::Rpg,
                "rapg" => AlgoChoice::Rapg,
                "ar-rapg" | "arrapg" => AlgoChoice::ArRapg,
                other => {
                    return Err(Error::InvalidInput(format!("unknown algorithm '{other}'")))
                }
            });
        }
        if out.is_empty() {
            return Err(Error::InvalidInput("empty algorithm list".into()));
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub model: Model,
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub lambda: f64,
    pub c: f64,
    pub seed: u64,
    pub algos: Vec<AlgoChoice>,
    pub l_mode: LMode,
    pub mu_override: Option<f64>,
    pub rho_override: Option<f64>,
    pub xi: f64,
    pub theta_override: Option<f64>,
    pub a0: f64,
    pub out_dir: PathBuf,
    /// Number of averaged seeds (seed, seed+1, ...).
    pub seeds: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(model: Model) -> Self {
        Self {
            model,
            m: 20,
            n: 200,
            p: 4,
            lambda: 1.0,
            c: 0.5,
            seed: 1,
            algos: vec![AlgoChoice::Rpg, AlgoChoice::Rapg, AlgoChoice::ArRapg],
            l_mode: match model {
                Model::SpcaOblique => LMode::TwoD2,
                Model::SpcaSphere | Model::SphereQuadratic => LMode::FiveHess,
                Model::EuclideanLasso => LMode::Manual(0.0),
            },
            mu_override: None,
            rho_override: None,
            xi: 1.0,
            theta_override: None,
            a0: 0.001,
            out_dir: PathBuf::from("rapg-out"),
            seeds: 1,
            max_iters: 10_000,
            tol: 1e-10,
            timing: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.model {
            Model::SpcaSphere | Model::SpcaOblique => {
                if self.m >= self.n {
                    return Err(Error::InvalidInput(format!(
                        "SPCA models need m < n, got m={}, n={}",
                        self.m, self.n
                    )));
                }
                if !(self.lambda > 0.0) {
                    return Err(Error::InvalidInput("SPCA models need lambda > 0".into()));
                }
            }
            _ => {}
        }
        if self.seeds == 0 {
            return Err(Error::InvalidInput("seeds must be at least 1".into()));
        }
        Ok(())
    }

    /// Flat key=value serialization; the inverse of `from_key_values`.
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        out.push_str("# rapg experiment config (key=value)\n");
        out.push_str(&format!("model={}\n", self.model.name()));
        out.push_str(&format!("m={}\n", self.m));
        out.push_str(&format!("n={}\n", self.n));
        out.push_str(&format!("p={}\n", self.p));
        out.push_str(&format!("lambda={}\n", self.lambda));
        out.push_str(&format!("c={}\n", self.c));
        out.push_str(&format!("seed={}\n", self.seed));
        let algos: Vec<&str> = self.algos.iter().map(|a| a.name()).collect();
        out.push_str(&format!("algos={}\n", algos.join(",")));
        out.push_str(&format!("l_mode={}\n", self.l_mode.name()));
        if let Some(mu) = self.mu_override {
            out.push_str(&format!("mu={mu}\n"));
        }
        if let Some(rho) = self.rho_override {
            out.push_str(&format!("rho={rho}\n"));
        }
        out.push_str(&format!("xi={}\n", self.xi));
        if let Some(theta) = self.theta_override {
            out.push_str(&format!("theta={theta}\n"));
        }
        out.push_str(&format!("a0={}\n", self.a0));
        out.push_str(&format!("out={}\n", self.out_dir.display()));
        out.push_str(&format!("seeds={}\n", self.seeds));
        out.push_str(&format!("max_iters={}\n", self.max_iters));
        out.push_str(&format!("tol={}\n", self.tol));
        out.push_str(&format!("timing={}\n", self.timing));
        out.push_str(&format!("data_noise_std={}\n", crate::bench::data::DATA_NOISE_STD));
        out.push_str(&format!(
            "init_perturbation_std={}\n",
            crate::bench::data::INIT_PERTURBATION_STD
        ));
        out
    }

    pub fn from_key_values(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::new(Model::SpcaSphere);
        let mut manual_l = None;
        let mut l_mode_name: Option<String> = None;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidInput(format!("bad config line '{line}'")))?;
            let value = value.trim();
            match key.trim() {
                "model" => cfg.model = Model::parse(value)?,
                "m" => cfg.m = parse_num(key, value)?,
                "n" => cfg.n = parse_num(key, value)?,
                "p" => cfg.p = parse_num(key, value)?,
                "lambda" => cfg.lambda = parse_num(key, value)?,
                "c" => cfg.c = parse_num(key, value)?,
                "seed" => cfg.seed = parse_num(key, value)?,
                "algos" => cfg.algos = AlgoChoice::parse_list(value)?,
                "l_mode" => l_mode_name = Some(value.to_string()),
                "l" => manual_l = Some(parse_num(key, value)?),
                "mu" => cfg.mu_override = Some(parse_num(key, value)?),
                "rho" => cfg.rho_override = Some(parse_num(key, value)?),
                "xi" => cfg.xi = parse_num(key, value)?,
                "theta" => cfg.theta_override = Some(parse_num(key, value)?),
                "a0" => cfg.a0 = parse_num(key, value)?,
                "out" => cfg.out_dir = PathBuf::from(value),
                "seeds" => cfg.seeds = parse_num(key, value)?,
                "max_iters" => cfg.max_iters = parse_num(key, value)?,
                "tol" => cfg.tol = parse_num(key, value)?,
                "timing" => {
                    cfg.timing = value
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("bad bool '{value}'")))?
                }
                "data_noise_std" | "init_perturbation_std" => {}
                other => return Err(Error::InvalidInput(format!("unknown config key '{other}'"))),
            }
        }
        if let Some(name) = l_mode_name {
            if let Some(rest) = name.strip_prefix("manual:") {
                manual_l = Some(parse_num("l", rest)?);
                cfg.l_mode = LMode::Manual(manual_l.unwrap());
            } else {
                cfg.l_mode = LMode::parse(&name, manual_l)?;
            }
        } else {
            cfg.l_mode = ExperimentConfig::new(cfg.model).l_mode;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad value for {key}: '{value}'")))
}

/// A fully assembled problem instance for one seed.
pub struct Problem {
    pub obj: CompositeObjective,
    pub x0: ManifoldPoint,
    pub params: RapgParams,
    pub reference: Option<ReferenceMinimum>,
    /// mu was clamped up to rho to keep the schedule admissible.
    pub mu_clamped: bool,
}

fn apply_overrides(cfg: &ExperimentConfig, mut params: RapgParams) -> RapgParams {
    params.xi = cfg.xi;
    params.a0 = cfg.a0;
    if let Some(theta) = cfg.theta_override {
        params.theta = theta;
    }
    params
}

/// Builds the objective, initial point, and solver parameters for one seed.
pub fn build_problem(cfg: &ExperimentConfig, seed: u64) -> Result<Problem> {
    cfg.validate()?;
    match cfg.model {
        Model::SpcaSphere | Model::SphereQuadratic => {
            let lambda = if cfg.model == Model::SphereQuadratic {
                0.0
            } else {
                cfg.lambda
            };
            let rho = cfg.rho_override.unwrap_or(if lambda > 0.0 { 0.002 } else { 0.0 });
            let (a, _) = gen_spca_sphere_data(cfg.m, cfg.n, cfg.c, seed)?;
            let x0 = init_point_sphere(&a, seed);
            let svd = a.clone().svd(false, false);
            let smax = svd.singular_values.max();
            let inst = SpcaSphereInstance::new(a, lambda)?;
            match cfg.l_mode {
                LMode::Manual(l) => {
                    let mu = cfg.mu_override.unwrap_or(rho.max(0.0));
                    let inst = inst.with_constants(l, mu);
                    let obj = inst.objective(rho);
                    let params = apply_overrides(cfg, RapgParams::experiment_defaults(l, mu, rho));
                    Ok(Problem { obj, x0, params, reference: None, mu_clamped: false })
                }
                LMode::FiveHess => {
                    // Bootstrap with a safe overestimate, locate the
                    // minimizer, then read the constants off the Hessian.
                    let l_boot = 10.0 * smax * smax;
                    let mu_boot = rho.max(0.0);
                    let boot_inst = SpcaSphereInstance::new(inst.data().clone(), lambda)?
                        .with_constants(l_boot, mu_boot);
                    let boot_obj = boot_inst.objective(rho);
                    let boot_params =
                        apply_overrides(cfg, RapgParams::experiment_defaults(l_boot, mu_boot, rho));
                    let budget = cfg.max_iters.max(10_000);
                    let reference = reference_minimum(&x0, &boot_params, &boot_obj, budget)?;
                    let (lo, hi) = hessian_eigen_bounds(&boot_inst, &reference.x_star, 1e-5);
                    let l = 5.0 * hi;
                    let mut mu = cfg.mu_override.unwrap_or(lo);
                    let mu_clamped = mu < rho;
                    if mu_clamped {
                        mu = rho.max(0.0);
                    }
                    let inst = inst.with_constants(l, mu);
                    let obj = inst.objective(rho);
                    let params = apply_overrides(cfg, RapgParams::experiment_defaults(l, mu, rho));
                    Ok(Problem { obj, x0, params, reference: Some(reference), mu_clamped })
                }
                _ => Err(Error::InvalidInput(
                    "sphere models accept --L-mode 5hess or manual".into(),
                )),
            }
        }
        Model::SpcaOblique => {
            let (a, s2) = gen_spca_oblique_data(cfg.m, cfg.n, seed)?;
            if cfg.p == 0 || cfg.p > cfg.m {
                return Err(Error::InvalidInput(format!(
                    "need 1 <= p <= m, got p={}, m={}",
                    cfg.p, cfg.m
                )));
            }
            let d2 = DVector::from_fn(cfg.p, |i, _| s2[i]);
            let d2_fro_sq: f64 = d2.iter().map(|v| v * v).sum();
            let l = match cfg.l_mode {
                LMode::TwoD2 => 2.0 * d2_fro_sq,
                LMode::OnePointTwoD2 => 1.2 * d2_fro_sq,
                LMode::Manual(l) => l,
                LMode::FiveHess => {
                    return Err(Error::InvalidInput(
                        "the oblique model accepts --L-mode 2d2, 1.2d2, or manual".into(),
                    ))
                }
            };
            let mu = cfg.mu_override.unwrap_or(1.0);
            let rho = cfg.rho_override.unwrap_or(0.5);
            let x0 = init_point_oblique(&a, cfg.p);
            let inst = SpcaObliqueInstance::new(a, d2, cfg.lambda)?.with_constants(l, mu);
            let obj = inst.objective(rho);
            let params = apply_overrides(cfg, RapgParams::experiment_defaults(l, mu, rho));
            Ok(Problem { obj, x0, params, reference: None, mu_clamped: false })
        }
        Model::EuclideanLasso => {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let n = cfg.n;
            let scale = 1.0 / (n as f64).sqrt();
            let a = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal) * scale);
            let mut x_true = DVector::zeros(n);
            for i in 0..(n / 10).max(1) {
                x_true[i * 10 % n] = rng.sample::<f64, _>(StandardNormal);
            }
            let b = &a * &x_true
                + DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal) * 0.01);
            let ls = LeastSquares::new(a, b);
            let (l, mu) = match cfg.l_mode {
                LMode::Manual(l) if l > 0.0 => (l, cfg.mu_override.unwrap_or(0.0)),
                _ => {
                    use crate::objective::SmoothOracle;
                    (ls.smoothness(), cfg.mu_override.unwrap_or(ls.strong_convexity()))
                }
            };
            let rho = cfg.rho_override.unwrap_or(0.0);
            let kind = crate::geometry::ManifoldKind::Euclidean { n };
            let obj = CompositeObjective::new(
                kind,
                std::sync::Arc::new(ls),
                std::sync::Arc::new(L1Norm::new(cfg.lambda, rho)),
            );
            let x0 = ManifoldPoint::euclidean(DVector::zeros(n));
            let params = apply_overrides(cfg, RapgParams::experiment_defaults(l, mu, rho));
            Ok(Problem { obj, x0, params, reference: None, mu_clamped: false })
        }
    }
}

/// Worker count: the environment variable, else available parallelism.
pub fn worker_count(tasks: usize) -> usize {
    let configured = std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|v| *v > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|v| v.get())
                .unwrap_or(1)
        });
    configured.min(tasks.max(1))
}

/// Runs `jobs` closures on a small worker pool, preserving output order.
pub fn run_parallel<T: Send, F>(jobs: Vec<F>) -> Vec<Result<T>>
where
    F: FnOnce() -> Result<T> + Send,
{
    let n = jobs.len();
    let workers = worker_count(n);
    let cursor = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<T>>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let jobs: Vec<Mutex<Option<F>>> = jobs.into_iter().map(|j| Mutex::new(Some(j))).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = cursor.fetch_add(1, Ordering::SeqCst);
                if idx >= n {
                    break;
                }
                let job = jobs[idx].lock().unwrap().take().expect("job taken once");
                let out = job();
                *slots[idx].lock().unwrap() = Some(out);
            });
        }
    });
    slots
        .into_iter()
        .map(|slot| slot.into_inner().unwrap().expect("worker filled slot"))
        .collect()
}

/// All runs of one seed, in the order they were produced.
pub struct SeedRuns {
    pub seed: u64,
    pub runs: Vec<RunRecord>,
    pub f_star: Option<f64>,
    pub mu_clamped: bool,
    pub kappa: f64,
}

/// Runs the configured algorithms for one seed. The baseline runs first so
/// its minimum can serve as the reference stop for the accelerated methods.
pub fn run_seed(cfg: &ExperimentConfig, seed: u64) -> Result<SeedRuns> {
    let problem = build_problem(cfg, seed)?;
    let prox_cfg = ProxConfig::default_for(&problem.obj.manifold);
    let base_term = Termination {
        max_iters: cfg.max_iters,
        rule: TerminationRule::SearchDirection { tol: cfg.tol },
        f_ref: None,
    };
    let mut runs = Vec::new();
    let mut f_ref = None;
    let mut ordered = cfg.algos.clone();
    ordered.sort(); // rpg first, then rapg, then ar-rapg
    for algo in ordered {
        let mut rec = match algo {
            AlgoChoice::Rpg => run(
                Algo::Rpg,
                problem.x0.clone(),
                &problem.params,
                &problem.obj,
                &prox_cfg,
                &base_term,
            )?,
            AlgoChoice::Rapg => run(
                Algo::Rapg,
                problem.x0.clone(),
                &problem.params,
                &problem.obj,
                &prox_cfg,
                &base_term.with_f_ref(f_ref),
            )?,
            AlgoChoice::ArRapg => {
                let sg = SafeguardConfig::defaults(problem.params.l);
                ar_rapg_run(
                    problem.x0.clone(),
                    &problem.params,
                    &sg,
                    &problem.obj,
                    &prox_cfg,
                    &base_term.with_f_ref(f_ref),
                )?
            }
        };
        rec.summary.seed = seed;
        if algo == AlgoChoice::Rpg {
            f_ref = Some(rec.summary.final_f);
        }
        runs.push(rec);
    }
    let w = problem.params.theta_l() - problem.params.rho;
    let kappa = w * problem.params.xi / (problem.params.mu - problem.params.rho);
    Ok(SeedRuns {
        seed,
        runs,
        f_star: problem.reference.as_ref().map(|r| r.f_star),
        mu_clamped: problem.mu_clamped,
        kappa,
    })
}

/// Full experiment: every (algorithm, seed) run with one trace CSV each, a
/// joint summary CSV, plot-data series, and the echoed configuration.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<SeedRuns>> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.out_dir)?;
    std::fs::write(cfg.out_dir.join("config.txt"), cfg.to_key_values())?;

    let jobs: Vec<_> = (0..cfg.seeds)
        .map(|i| {
            let cfg = cfg.clone();
            let seed = cfg.seed + i as u64;
            move || run_seed(&cfg, seed)
        })
        .collect();
    let mut all: Vec<SeedRuns> = Vec::with_capacity(jobs.len());
    for outcome in run_parallel(jobs) {
        all.push(outcome?);
    }

    // Join barrier passed: write per-run artifacts and the summary.
    let mut summaries = Vec::new();
    for seed_runs in &all {
        let f_best = seed_runs.f_star.unwrap_or_else(|| {
            seed_runs
                .runs
                .iter()
                .map(|r| r.summary.final_f)
                .fold(f64::INFINITY, f64::min)
        });
        for rec in &seed_runs.runs {
            let tag = format!("{}_seed{}", rec.summary.algo, seed_runs.seed);
            csvio::write_trace_csv(rec, &cfg.out_dir.join(format!("trace_{tag}.csv")), cfg.timing)?;
            let fgap: Vec<(f64, f64)> = rec
                .rows
                .iter()
                .map(|r| (r.k as f64, r.f - f_best))
                .collect();
            csvio::write_series_csv("k", "f_gap", &fgap, &cfg.out_dir.join(format!("plot_fgap_{tag}.csv")))?;
            let eta: Vec<(f64, f64)> = rec.rows.iter().map(|r| (r.k as f64, r.eta_norm)).collect();
            csvio::write_series_csv("k", "eta_norm", &eta, &cfg.out_dir.join(format!("plot_eta_{tag}.csv")))?;
            summaries.push(rec.summary.clone());
        }
    }
    let summary_refs: Vec<_> = summaries.iter().collect();
    csvio::write_summary_csv(&summary_refs, &cfg.out_dir.join("summary.csv"), cfg.timing)?;

    // Averaging mode: per-algorithm means over the seeds.
    if cfg.seeds > 1 {
        let mut text = String::from("# schema: rapg-means v1\nalgo,mean_iters,mean_wall_ns,mean_sparsity\n");
        let mut by_algo: BTreeMap<String, Vec<&crate::solvers::RunSummary>> = BTreeMap::new();
        for s in &summaries {
            by_algo.entry(s.algo.clone()).or_default().push(s);
        }
        for (algo, group) in by_algo {
            let n = group.len() as f64;
            let iters = group.iter().map(|s| s.iters as f64).sum::<f64>() / n;
            let wall = if cfg.timing {
                group.iter().map(|s| s.wall_ns as f64).sum::<f64>() / n
            } else {
                0.0
            };
            let sp = group.iter().map(|s| s.final_sparsity).sum::<f64>() / n;
            text.push_str(&format!("{algo},{iters:.3},{wall:.0},{sp:.6}\n"));
        }
        std::fs::write(cfg.out_dir.join("means.csv"), text)?;
    }
    Ok(all)
}

/// Log-spaced grid used by the condition-number sweep.
pub fn log_space(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (ll, lh) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (ll + (lh - ll) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

#[derive(Clone, Debug)]
pub struct KappaPoint {
    pub c: f64,
    pub kappa: f64,
    pub f_star: f64,
    pub rapg: Option<SlopeFit>,
    pub rpg: Option<SlopeFit>,
}

#[derive(Clone, Debug)]
pub struct KappaStudy {
    pub points: Vec<KappaPoint>,
    /// Fitted exponent of 1/(1 - e^s) against kappa, per algorithm.
    pub rapg_exponent: f64,
    pub rpg_exponent: f64,
}

/// The condition-number scaling study: a log-spaced gap sweep on the sphere
/// model, slope fits of both methods against the tight reference, and the
/// log-log regression of 1/(1 - e^s) against kappa.
pub fn kappa_study(
    m: usize,
    n: usize,
    lambda: f64,
    points: usize,
    seed: u64,
    max_iters: usize,
    out_dir: Option<&Path>,
) -> Result<KappaStudy> {
    let cs = log_space(0.01, 1.0, points);
    let jobs: Vec<_> = cs
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            move || -> Result<KappaPoint> {
                let mut cfg = ExperimentConfig::new(Model::SpcaSphere);
                cfg.m = m;
                cfg.n = n;
                cfg.lambda = lambda;
                cfg.c = c;
                cfg.l_mode = LMode::FiveHess;
                cfg.max_iters = max_iters;
                let seed_i = seed + i as u64;
                let problem = build_problem(&cfg, seed_i)?;
                let reference = problem.reference.as_ref().expect("5hess computes it");
                let prox_cfg = ProxConfig::default_for(&problem.obj.manifold);
                let term = Termination {
                    max_iters,
                    rule: TerminationRule::SearchDirection { tol: 1e-10 },
                    f_ref: None,
                };
                let rpg = run(
                    Algo::Rpg,
                    problem.x0.clone(),
                    &problem.params,
                    &problem.obj,
                    &prox_cfg,
                    &term,
                )?;
                let rapg = run(
                    Algo::Rapg,
                    problem.x0.clone(),
                    &problem.params,
                    &problem.obj,
                    &prox_cfg,
                    &term.with_f_ref(Some(rpg.summary.final_f)),
                )?;
                let (rpg_fit, rapg_fit) = if reference.converged {
                    (
                        fit_slope(&rpg.rows, reference.f_star, &problem.params).ok(),
                        fit_slope(&rapg.rows, reference.f_star, &problem.params).ok(),
                    )
                } else {
                    (None, None)
                };
                let w = problem.params.theta_l() - problem.params.rho;
                let kappa = w * problem.params.xi / (problem.params.mu - problem.params.rho);
                Ok(KappaPoint {
                    c,
                    kappa,
                    f_star: reference.f_star,
                    rapg: rapg_fit,
                    rpg: rpg_fit,
                })
            }
        })
        .collect();

    let mut out_points = Vec::with_capacity(points);
    for outcome in run_parallel(jobs) {
        out_points.push(outcome?);
    }

    let fit_exponent = |sel: &dyn Fn(&KappaPoint) -> Option<SlopeFit>| -> f64 {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for p in &out_points {
            if let Some(fit) = sel(p) {
                if fit.transformed.is_finite() && fit.transformed > 0.0 {
                    xs.push(p.kappa.ln());
                    ys.push(fit.transformed.ln());
                }
            }
        }
        if xs.len() < 3 {
            return f64::NAN;
        }
        least_squares_line(&xs, &ys).0
    };
    let rapg_exponent = fit_exponent(&|p| p.rapg);
    let rpg_exponent = fit_exponent(&|p| p.rpg);

    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        let series =
            |sel: &dyn Fn(&KappaPoint) -> Option<SlopeFit>| -> Vec<(f64, f64)> {
                out_points
                    .iter()
                    .filter_map(|p| sel(p).map(|f| (p.kappa, f.transformed)))
                    .collect()
            };
        csvio::write_series_csv(
            "kappa",
            "inv_one_minus_exp_s",
            &series(&|p| p.rapg),
            &dir.join("kappa_rapg.csv"),
        )?;
        csvio::write_series_csv(
            "kappa",
            "inv_one_minus_exp_s",
            &series(&|p| p.rpg),
            &dir.join("kappa_rpg.csv"),
        )?;
        std::fs::write(
            dir.join("kappa_fit.txt"),
            format!(
                "rapg_loglog_exponent={rapg_exponent}\nrpg_loglog_exponent={rpg_exponent}\n"
            ),
        )?;
    }
    Ok(KappaStudy {
        points: out_points,
        rapg_exponent,
        rpg_exponent,
    })
}

#[derive(Clone, Debug)]
pub struct CompareCell {
    pub n: usize,
    pub mean_iters: BTreeMap<&'static str, f64>,
    pub mean_wall_ns: BTreeMap<&'static str, f64>,
    pub mean_sparsity: BTreeMap<&'static str, f64>,
}

/// Multi-seed averaged comparison of the three methods on the oblique model
/// over a grid of problem sizes.
#[allow(clippy::too_many_arguments)]
pub fn compare_study(
    m: usize,
    p: usize,
    lambda: f64,
    ns: &[usize],
    seeds: usize,
    seed0: u64,
    max_iters: usize,
    out_dir: Option<&Path>,
) -> Result<Vec<CompareCell>> {
    let mut cells = Vec::new();
    for &n in ns {
        let mut cfg = ExperimentConfig::new(Model::SpcaOblique);
        cfg.m = m;
        cfg.n = n;
        cfg.p = p;
        cfg.lambda = lambda;
        cfg.seed = seed0;
        cfg.seeds = seeds;
        cfg.max_iters = max_iters;
        let jobs: Vec<_> = (0..seeds)
            .map(|i| {
                let cfg = cfg.clone();
                let seed = seed0 + i as u64;
                move || run_seed(&cfg, seed)
            })
            .collect();
        let mut sums: BTreeMap<&'static str, (f64, f64, f64, f64)> = BTreeMap::new();
        for outcome in run_parallel(jobs) {
            let seed_runs = outcome?;
            for rec in &seed_runs.runs {
                let key: &'static str = match rec.summary.algo.as_str() {
                    "rpg" => "rpg",
                    "rapg" => "rapg",
                    _ => "ar-rapg",
                };
                let entry = sums.entry(key).or_insert((0.0, 0.0, 0.0, 0.0));
                entry.0 += rec.summary.iters as f64;
                entry.1 += rec.summary.wall_ns as f64;
                entry.2 += rec.summary.final_sparsity;
                entry.3 += 1.0;
            }
        }
        let mut cell = CompareCell {
            n,
            mean_iters: BTreeMap::new(),
            mean_wall_ns: BTreeMap::new(),
            mean_sparsity: BTreeMap::new(),
        };
        for (k, (it, w, sp, cnt)) in sums {
            cell.mean_iters.insert(k, it / cnt);
            cell.mean_wall_ns.insert(k, w / cnt);
            cell.mean_sparsity.insert(k, sp / cnt);
        }
        cells.push(cell);
    }
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        let mut text = String::from(
            "# schema: rapg-compare v1\nn,algo,mean_iters,mean_wall_ns,mean_sparsity\n",
        );
        for cell in &cells {
            for (algo, iters) in &cell.mean_iters {
                text.push_str(&format!(
                    "{},{},{:.3},{:.0},{:.6}\n",
                    cell.n, algo, iters, cell.mean_wall_ns[algo], cell.mean_sparsity[algo]
                ));
            }
        }
        std::fs::write(dir.join("compare.csv"), text)?;
    }
    Ok(cells)
}
