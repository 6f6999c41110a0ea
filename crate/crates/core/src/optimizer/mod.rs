//! Camera deployment search: the elitist recombine-with-best genetic
//! algorithm, a classical generational baseline, and greedy one-at-a-time
//! placement.
//!
//! Random draws come from a ChaCha8 stream seeded with [`IgaParams::seed`]
//! and are consumed in a fixed order: the initial population gene by gene,
//! then per iteration and per chromosome the fragment length, the fragment
//! start, and one draw per non-replaced gene (plus one more for each gene
//! that mutates). Fitness evaluation consumes no randomness, so it may run
//! in parallel without changing results.

mod encoding;
mod fitness;
mod heuristic;
mod iga;
mod sga;

use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use encoding::{decode, encode, Chromosome, DofSpec, GeneBound, GENE_NAMES};
pub use fitness::{check_placement, fitness, CameraModel, DeploymentFitness, Executor, Fitness, Score, Sequential};
pub use heuristic::{heuristic_place, HeuristicStep};
pub use iga::iga_optimize;
pub use sga::sga_optimize;

use crate::geometry::{GeometryError, Pose6};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OptimizeError {
    #[error("invalid optimizer parameters: {0}")]
    InvalidParams(&'static str),
    #[error("invalid bounds for gene {gene}")]
    InvalidBounds { gene: usize },
    #[error("gene {gene} value {value} is outside its bounds")]
    OutOfBounds { gene: usize, value: f64 },
    #[error("expected {expected} poses, found {found}")]
    PoseCount { expected: usize, found: usize },
    #[error("expected {expected} genes, found {found}")]
    GeneCount { expected: usize, found: usize },
    #[error("no initial population with nonzero fitness after {attempts} attempts")]
    Infeasible { attempts: usize },
    #[error(transparent)]
    Geometry(GeometryError),
}

/// Genetic algorithm settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IgaParams {
    /// Population size M.
    pub population: usize,
    /// Recombination fragment length bounds (genes).
    pub recombination_min: usize,
    pub recombination_max: usize,
    /// Per-gene mutation probability.
    pub mutation_probability: f64,
    /// Iteration budget.
    pub iterations: usize,
    /// Stop early after this many iterations without improvement.
    pub stall_iterations: Option<usize>,
    /// Keep the best chromosome unchanged in slot 0 of every new population
    /// (otherwise it is tracked outside the population).
    pub insert_elite: bool,
    /// When nonzero, redraw the initial population up to this many times
    /// until one chromosome has nonzero fitness, failing with
    /// [`OptimizeError::Infeasible`] otherwise.
    pub feasibility_attempts: usize,
    pub seed: u64,
}

impl Default for IgaParams {
    fn default() -> Self {
        IgaParams {
            population: 20,
            recombination_min: 11,
            recombination_max: 19,
            mutation_probability: 0.2,
            iterations: 400,
            stall_iterations: None,
            insert_elite: false,
            feasibility_attempts: 0,
            seed: 0,
        }
    }
}

impl IgaParams {
    pub fn validate(&self, gene_count: usize) -> Result<(), OptimizeError> {
        if self.population < 2 {
            return Err(OptimizeError::InvalidParams("population must be at least 2"));
        }
        if gene_count == 0 {
            return Err(OptimizeError::InvalidParams("chromosome has no active genes"));
        }
        if !(1 <= self.recombination_min && self.recombination_min <= self.recombination_max && self.recombination_max <= gene_count) {
            return Err(OptimizeError::InvalidParams("recombination lengths must satisfy 1 <= min <= max <= chromosome length"));
        }
        if !(0.0..=1.0).contains(&self.mutation_probability) {
            return Err(OptimizeError::InvalidParams("mutation probability must lie in [0, 1]"));
        }
        if self.stall_iterations == Some(0) {
            return Err(OptimizeError::InvalidParams("stall window must be positive"));
        }
        Ok(())
    }

    /// Fragment bounds rescaled from an `n`-camera chromosome to a
    /// single-camera one of `gene_count` genes.
    pub fn per_camera(&self, n: usize, gene_count: usize) -> IgaParams {
        let n = n.max(1) as f64;
        let scale = |v: usize| ((v as f64 / n) + 0.5) as usize;
        let lo = scale(self.recombination_min).clamp(1, gene_count.max(1));
        let hi = scale(self.recombination_max).clamp(lo, gene_count.max(1));
        IgaParams { recombination_min: lo, recombination_max: hi, ..*self }
    }
}

/// Best-so-far state after one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iteration: usize,
    pub best_fitness: f64,
    pub recognized_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best_genes: Vec<f64>,
    pub best: Score,
    pub poses: Vec<Pose6>,
    /// One record for the initial population, then one per iteration.
    pub trace: Vec<TraceRecord>,
}

fn random_genes(dof: &DofSpec, rng: &mut ChaCha8Rng) -> Vec<f64> {
    dof.gene_ranges().map(|(lo, hi)| rng.random_range(lo..hi)).collect()
}

/// Draws the initial population, retrying per `feasibility_attempts`.
fn initial_population<F: Fitness + ?Sized>(
    params: &IgaParams,
    dof: &DofSpec,
    fitness: &F,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<Vec<f64>>, Vec<Score>), OptimizeError> {
    let mut attempts = 0;
    loop {
        let pop: Vec<Vec<f64>> = (0..params.population).map(|_| random_genes(dof, rng)).collect();
        let scores = fitness.score_population(&pop);
        attempts += 1;
        if params.feasibility_attempts == 0 || scores.iter().any(|s| s.fitness > 0.0) {
            return Ok((pop, scores));
        }
        if attempts >= params.feasibility_attempts {
            return Err(OptimizeError::Infeasible { attempts });
        }
    }
}

/// Index of the first chromosome with the largest fitness.
fn argmax(scores: &[Score]) -> usize {
    let mut best = 0;
    for (i, s) in scores.iter().enumerate() {
        if s.fitness > scores[best].fitness {
            best = i;
        }
    }
    best
}

fn finish(dof: &DofSpec, best_genes: Vec<f64>, best: Score, trace: Vec<TraceRecord>) -> Result<OptimizationResult, OptimizeError> {
    let poses = decode(&best_genes, dof)?;
    Ok(OptimizationResult { best_genes, best, poses, trace })
}
