//! Benchmark CLI: data generation, solver runs, the condition-number scaling
//! study, and multi-seed method comparison. Thin argument handling over the
//! library; run with no arguments for usage.

use std::path::PathBuf;
use std::process::ExitCode;

use rapg::bench::{
    compare_study, gen_spca_oblique_data, gen_spca_sphere_data, kappa_study, run_experiment,
    AlgoChoice, ExperimentConfig, LMode, Model,
};
use rapg::error::{Error, Result};

const USAGE: &str = "\
rapg-bench <subcommand> [flags]

Subcommands:
  gen      generate a data matrix and write it as CSV
  run      run the configured algorithms and write traces + summary
  slope    condition-number scaling study (log-log slope per method)
  compare  multi-seed averaged comparison over a grid of n

Common flags:
  --model <spca-sphere|spca-oblique|euclidean-lasso|sphere-quadratic>
  --m <int>  --n <int>  --p <int>
  --lambda <float>      l1 weight
  --c <float>           spectral-gap knob of the sphere model
  --seed <int>          base seed
  --seeds <int>         number of averaged seeds (run/compare)
  --algos <list>        comma list of rpg,rapg,ar-rapg
  --L-mode <5hess|2d2|1.2d2|manual>
  --L <float>           manual smoothness constant
  --mu <float> --rho <float> --xi <float> --theta <float> --a0 <float>
  --max-iters <int>     default 10000
  --tol <float>         default 1e-10
  --out <dir>           output directory
  --config <file>       key=value config file (flags override)
  --no-timing           zero out wall-clock columns (byte-stable output)

slope flags:   --points <int> (default 20)
compare flags: --n-list <comma ints> (default 32,64,128,256)

Environment:
  RAPG_BENCH_WORKERS    worker thread count (default: available cores)
";

struct Args {
    positional: Vec<String>,
    flags: Vec<(String, Option<String>)>,
}

impl Args {
    fn parse(argv: &[String]) -> Result<Self> {
        let mut positional = Vec::new();
        let mut flags = Vec::new();
        let mut it = argv.iter().peekable();
        while let Some(arg) = it.next() {
            if let Some(name) = arg.strip_prefix("--") {
                let takes_value = !matches!(name, "no-timing");
                let value = if takes_value {
                    Some(
                        it.next()
                            .ok_or_else(|| {
                                Error::InvalidInput(format!("flag --{name} needs a value"))
                            })?
                            .clone(),
                    )
                } else {
                    None
                };
                flags.push((name.to_string(), value));
            } else {
                positional.push(arg.clone());
            }
        }
        Ok(Self { positional, flags })
    }

    fn get(&self, name: &str) -> Option<&str> {
        self.flags
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .and_then(|(_, v)| v.as_deref())
    }

    fn has(&self, name: &str) -> bool {
        self.flags.iter().any(|(n, _)| n == name)
    }

    fn num<T: std::str::FromStr>(&self, name: &str) -> Result<Option<T>> {
        match self.get(name) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::InvalidInput(format!("bad value for --{name}: '{v}'"))),
        }
    }
}

fn config_from_args(args: &Args) -> Result<ExperimentConfig> {
    let mut cfg = match args.get("config") {
        Some(path) => ExperimentConfig::from_key_values(&std::fs::read_to_string(path)?)?,
        None => {
            let model = Model::parse(args.get("model").unwrap_or("spca-sphere"))?;
            ExperimentConfig::new(model)
        }
    };
    if let Some(model) = args.get("model") {
        cfg.model = Model::parse(model)?;
    }
    if let Some(v) = args.num("m")? {
        cfg.m = v;
    }
    if let Some(v) = args.num("n")? {
        cfg.n = v;
    }
    if let Some(v) = args.num("p")? {
        cfg.p = v;
    }
    if let Some(v) = args.num("lambda")? {
        cfg.lambda = v;
    }
    if let Some(v) = args.num("c")? {
        cfg.c = v;
    }
    if let Some(v) = args.num("seed")? {
        cfg.seed = v;
    }
    if let Some(v) = args.num("seeds")? {
        cfg.seeds = v;
    }
    if let Some(list) = args.get("algos") {
        cfg.algos = AlgoChoice::parse_list(list)?;
    }
    if let Some(mode) = args.get("L-mode") {
        cfg.l_mode = LMode::parse(mode, args.num("L")?)?;
    } else if let Some(l) = args.num("L")? {
        cfg.l_mode = LMode::Manual(l);
    }
    if let Some(v) = args.num("mu")? {
        cfg.mu_override = Some(v);
    }
    if let Some(v) = args.num("rho")? {
        cfg.rho_override = Some(v);
    }
    if let Some(v) = args.num("xi")? {
        cfg.xi = v;
    }
    if let Some(v) = args.num("theta")? {
        cfg.theta_override = Some(v);
    }
    if let Some(v) = args.num("a0")? {
        cfg.a0 = v;
    }
    if let Some(v) = args.num("max-iters")? {
        cfg.max_iters = v;
    }
    if let Some(v) = args.num("tol")? {
        cfg.tol = v;
    }
    if let Some(out) = args.get("out") {
        cfg.out_dir = PathBuf::from(out);
    }
    if args.has("no-timing") {
        cfg.timing = false;
    }
    Ok(cfg)
}

fn matrix_csv(m: &nalgebra::DMatrix<f64>) -> String {
    let mut out = String::from("# schema: rapg-matrix v1\n");
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| format!("{:.17e}", m[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn cmd_gen(cfg: &ExperimentConfig) -> Result<()> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    std::fs::write(cfg.out_dir.join("config.txt"), cfg.to_key_values())?;
    match cfg.model {
        Model::SpcaOblique => {
            let (a, s2) = gen_spca_oblique_data(cfg.m, cfg.n, cfg.seed)?;
            std::fs::write(cfg.out_dir.join("data_a.csv"), matrix_csv(&a))?;
            let rows: Vec<(f64, f64)> =
                s2.iter().enumerate().map(|(i, v)| (i as f64, *v)).collect();
            rapg::bench::csvio::write_series_csv(
                "index",
                "sigma_squared",
                &rows,
                &cfg.out_dir.join("data_sigma2.csv"),
            )?;
        }
        Model::SpcaSphere | Model::SphereQuadratic => {
            let (a, v) = gen_spca_sphere_data(cfg.m, cfg.n, cfg.c, cfg.seed)?;
            std::fs::write(cfg.out_dir.join("data_a.csv"), matrix_csv(&a))?;
            std::fs::write(cfg.out_dir.join("data_v.csv"), matrix_csv(&v))?;
        }
        Model::EuclideanLasso => {
            return Err(Error::InvalidInput(
                "gen supports the data-matrix models; the lasso toy is built inside run".into(),
            ));
        }
    }
    println!("wrote data for model {} to {}", cfg.model.name(), cfg.out_dir.display());
    Ok(())
}

fn cmd_run(cfg: &ExperimentConfig) -> Result<()> {
    let all = run_experiment(cfg)?;
    for seed_runs in &all {
        for rec in &seed_runs.runs {
            println!(
                "{:>8} seed {:>4}: iters {:>6}  F {:.9e}  sparsity {:.3}  stop {}",
                rec.summary.algo,
                rec.summary.seed,
                rec.summary.iters,
                rec.summary.final_f,
                rec.summary.final_sparsity,
                rec.summary.termination.name()
            );
        }
    }
    println!("artifacts in {}", cfg.out_dir.display());
    Ok(())
}

fn cmd_slope(args: &Args, cfg: &ExperimentConfig) -> Result<()> {
    let points = args.num("points")?.unwrap_or(20usize);
    let study = kappa_study(
        cfg.m,
        cfg.n,
        cfg.lambda,
        points,
        cfg.seed,
        cfg.max_iters,
        Some(cfg.out_dir.as_path()),
    )?;
    for p in &study.points {
        println!(
            "c {:.4}  kappa {:>12.2}  rapg 1/(1-e^s) {:>12.3}  rpg {:>14.3}",
            p.c,
            p.kappa,
            p.rapg.map(|f| f.transformed).unwrap_or(f64::NAN),
            p.rpg.map(|f| f.transformed).unwrap_or(f64::NAN),
        );
    }
    println!(
        "log-log exponents: rapg {:.3} (sqrt scaling = 0.5), rpg {:.3} (linear scaling = 1.0)",
        study.rapg_exponent, study.rpg_exponent
    );
    println!("series in {}", cfg.out_dir.display());
    Ok(())
}

fn cmd_compare(args: &Args, cfg: &ExperimentConfig) -> Result<()> {
    let ns: Vec<usize> = match args.get("n-list") {
        Some(list) => list
            .split(',')
            .map(|s| {
                s.parse()
                    .map_err(|_| Error::InvalidInput(format!("bad n '{s}'")))
            })
            .collect::<Result<_>>()?,
        None => vec![32, 64, 128, 256],
    };
    let cells = compare_study(
        cfg.m,
        cfg.p,
        cfg.lambda,
        &ns,
        cfg.seeds.max(1),
        cfg.seed,
        cfg.max_iters,
        Some(cfg.out_dir.as_path()),
    )?;
    for cell in &cells {
        for (algo, iters) in &cell.mean_iters {
            println!(
                "n {:>5}  {:>8}: mean iters {:>10.1}  mean sparsity {:.3}",
                cell.n, algo, iters, cell.mean_sparsity[algo]
            );
        }
    }
    println!("table in {}", cfg.out_dir.display());
    Ok(())
}

fn real_main() -> Result<()> {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    if argv.is_empty() {
        print!("{USAGE}");
        return Ok(());
    }
    let args = Args::parse(&argv)?;
    let sub = args
        .positional
        .first()
        .ok_or_else(|| Error::InvalidInput("missing subcommand".into()))?
        .clone();
    let cfg = config_from_args(&args)?;
    match sub.as_str() {
        "gen" => cmd_gen(&cfg),
        "run" => cmd_run(&cfg),
        "slope" => cmd_slope(&args, &cfg),
        "compare" => cmd_compare(&args, &cfg),
        other => Err(Error::InvalidInput(format!(
            "unknown subcommand '{other}'; run without arguments for usage"
        ))),
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rapg-bench: {e}");
            ExitCode::FAILURE
        }
    }
}
