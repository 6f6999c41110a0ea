use camcov_core::optimizer::{Executor, Score};
use rayon::prelude::*;

/// Scores a population on a rayon thread pool. Results come back in
/// population order, so runs stay reproducible.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rayon;

impl Executor for Rayon {
    fn map(&self, population: &[Vec<f64>], score: &(dyn Fn(&[f64]) -> Score + Sync)) -> Vec<Score> {
        population.par_iter().map(|g| score(g)).collect()
    }
}
