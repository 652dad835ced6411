//! Experiment harness: data generation, reference minima, slope fitting,
//! experiment orchestration, and CSV emission.

pub mod csvio;
pub mod data;
pub mod experiment;
pub mod reference;
pub mod slope;

pub use data::{
    gen_spca_oblique_data, gen_spca_sphere_data, hessian_eigen_bounds, init_point_oblique,
    init_point_sphere,
};
pub use experiment::{
    build_problem, compare_study, kappa_study, log_space, run_experiment, run_seed, AlgoChoice,
    CompareCell, ExperimentConfig, KappaPoint, KappaStudy, LMode, Model, Problem, SeedRuns,
};
pub use reference::{reference_minimum, ReferenceMinimum, REFERENCE_RESIDUAL};
pub use slope::{fit_slope, least_squares_line, SlopeFit};
