use alloc::vec::Vec;

use super::{iga_optimize, CameraModel, DeploymentFitness, DofSpec, Executor, GeneBound, IgaParams, OptimizeError};
use crate::geometry::Pose6;
use crate::objective::EvalConfig;
use crate::scene::Scene;

/// State after placing the first `cameras` cameras.
#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicStep {
    pub cameras: usize,
    pub fitness: f64,
    pub recognized_ratio: f64,
    pub poses: Vec<Pose6>,
}

/// Greedy deployment: cameras are added one at a time, each optimized by a
/// single-camera genetic search with the earlier ones held fixed.
///
/// Fragment bounds in `params` refer to a `max_cameras` chromosome and are
/// rescaled to one camera. Step `n` (1-based) uses seed `params.seed + n`.
/// Under full fusion the recognized area never drops from one step to the
/// next, since the previous deployment plus any camera covers at least as
/// much.
pub fn heuristic_place<E: Executor + Sync + Clone>(
    max_cameras: usize,
    params: &IgaParams,
    template: [GeneBound; 6],
    model: CameraModel,
    scene: &Scene,
    config: EvalConfig,
    executor: E,
) -> Result<Vec<HeuristicStep>, OptimizeError> {
    let dof = DofSpec::new(alloc::vec![template])?;
    let step_params = params.per_camera(max_cameras, dof.gene_count());
    let mut poses: Vec<Pose6> = Vec::with_capacity(max_cameras);
    let mut steps = Vec::with_capacity(max_cameras);
    for n in 1..=max_cameras {
        let frozen = poses.iter().map(|p| model.at(*p)).collect();
        let f = DeploymentFitness::new(scene, &dof, model, config).with_executor(executor.clone()).with_frozen(frozen);
        let p = IgaParams { seed: params.seed.wrapping_add(n as u64), ..step_params };
        let res = iga_optimize(&p, &dof, &f)?;
        poses.extend(res.poses);
        steps.push(HeuristicStep { cameras: n, fitness: res.best.fitness, recognized_ratio: res.best.recognized_ratio, poses: poses.clone() });
    }
    Ok(steps)
}
