use anisoperim::solver::Executor;
use rayon::prelude::*;

/// Runs solver jobs on the rayon thread pool.
#[derive(Debug, Clone, Copy, Default)]
pub struct RayonExecutor;

impl Executor for RayonExecutor {
    fn map(&self, n: usize, job: &(dyn Fn(usize) -> Vec<f64> + Sync)) -> Vec<Vec<f64>> {
        (0..n).into_par_iter().map(job).collect()
    }
}
