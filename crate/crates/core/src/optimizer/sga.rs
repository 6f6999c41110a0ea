use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{argmax, finish, initial_population, DofSpec, Fitness, IgaParams, OptimizationResult, OptimizeError, Score, TraceRecord};

/// Classical generational baseline: fitness-proportional selection,
/// one-point crossover of every selected pair, per-gene uniform mutation,
/// no elitism.
///
/// The trace records the best fitness of each generation and may decrease.
/// The result is the best chromosome of the final generation. Fragment
/// bounds in `params` are ignored.
pub fn sga_optimize<F: Fitness + ?Sized>(
    params: &IgaParams,
    dof: &DofSpec,
    fitness: &F,
) -> Result<OptimizationResult, OptimizeError> {
    let len = dof.gene_count();
    IgaParams { recombination_min: 1, recombination_max: len.max(1), ..*params }.validate(len)?;
    let ranges: Vec<(f64, f64)> = dof.gene_ranges().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let (mut pop, mut scores) = initial_population(params, dof, fitness, &mut rng)?;
    let record = |iteration: usize, s: Score| TraceRecord { iteration, best_fitness: s.fitness, recognized_ratio: s.recognized_ratio };
    let mut trace = Vec::with_capacity(params.iterations + 1);
    trace.push(record(0, scores[argmax(&scores)]));

    for iteration in 1..=params.iterations {
        let total: f64 = scores.iter().map(|s| s.fitness).sum();
        let select = |rng: &mut ChaCha8Rng| -> usize {
            if total <= 0.0 {
                return rng.random_range(0..pop.len());
            }
            let mut r = rng.random_range(0.0..total);
            for (i, s) in scores.iter().enumerate() {
                r -= s.fitness;
                if r < 0.0 {
                    return i;
                }
            }
            pop.len() - 1
        };
        let mut next: Vec<Vec<f64>> = Vec::with_capacity(pop.len());
        while next.len() < pop.len() {
            let a = select(&mut rng);
            let b = select(&mut rng);
            let cut = if len > 1 { rng.random_range(1..len) } else { 0 };
            let mut c1 = pop[a].clone();
            let mut c2 = pop[b].clone();
            c1[cut..].copy_from_slice(&pop[b][cut..]);
            c2[cut..].copy_from_slice(&pop[a][cut..]);
            for child in [c1, c2] {
                if next.len() < pop.len() {
                    next.push(child);
                }
            }
        }
        for child in next.iter_mut() {
            for (g, &(lo, hi)) in ranges.iter().enumerate() {
                if rng.random_bool(params.mutation_probability) {
                    child[g] = rng.random_range(lo..hi);
                }
            }
        }
        pop = next;
        scores = fitness.score_population(&pop);
        trace.push(record(iteration, scores[argmax(&scores)]));
    }
    let b = argmax(&scores);
    finish(dof, pop[b].clone(), scores[b], trace)
}
