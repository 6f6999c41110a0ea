use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{argmax, finish, initial_population, DofSpec, Fitness, IgaParams, OptimizationResult, OptimizeError, Score, TraceRecord};

/// Elitist genetic search: every chromosome recombines with the best one
/// found so far, then mutates.
///
/// Recombination copies a fragment of random length in
/// `recombination_min..=recombination_max`, starting at a random gene, from
/// whichever of the pair is fitter into the other. Genes outside the
/// fragment are resampled uniformly within their bounds with probability
/// `mutation_probability`. The trace holds `iterations + 1` best-so-far
/// records (fewer on stall), so it never decreases.
pub fn iga_optimize<F: Fitness + ?Sized>(
    params: &IgaParams,
    dof: &DofSpec,
    fitness: &F,
) -> Result<OptimizationResult, OptimizeError> {
    let len = dof.gene_count();
    params.validate(len)?;
    let ranges: Vec<(f64, f64)> = dof.gene_ranges().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    let (mut pop, mut scores) = initial_population(params, dof, fitness, &mut rng)?;
    let b = argmax(&scores);
    let mut best_genes = pop[b].clone();
    let mut best: Score = scores[b];
    let mut trace = Vec::with_capacity(params.iterations + 1);
    trace.push(TraceRecord { iteration: 0, best_fitness: best.fitness, recognized_ratio: best.recognized_ratio });

    let mut stall = 0usize;
    for iteration in 1..=params.iterations {
        let mut next: Vec<Vec<f64>> = Vec::with_capacity(pop.len());
        for (genes, score) in pop.iter().zip(&scores) {
            let frag = rng.random_range(params.recombination_min..=params.recombination_max);
            let start = rng.random_range(0..len);
            // The fitter of the pair donates the fragment.
            let (mut child, donor) =
                if score.fitness > best.fitness { (best_genes.clone(), genes) } else { (genes.clone(), &best_genes) };
            let in_fragment = |g: usize| (g + len - start) % len < frag;
            for (g, &(lo, hi)) in ranges.iter().enumerate() {
                if in_fragment(g) {
                    child[g] = donor[g];
                } else if rng.random_bool(params.mutation_probability) {
                    child[g] = rng.random_range(lo..hi);
                }
            }
            next.push(child);
        }
        if params.insert_elite {
            next[0] = best_genes.clone();
        }
        pop = next;
        scores = fitness.score_population(&pop);

        let b = argmax(&scores);
        if scores[b].fitness > best.fitness {
            best = scores[b];
            best_genes = pop[b].clone();
            stall = 0;
        } else {
            stall += 1;
        }
        trace.push(TraceRecord { iteration, best_fitness: best.fitness, recognized_ratio: best.recognized_ratio });
        if params.stall_iterations.is_some_and(|w| stall >= w) {
            break;
        }
    }
    finish(dof, best_genes, best, trace)
}
