use alloc::vec::Vec;

use super::encoding::{decode, Chromosome, DofSpec};
use crate::camera::{Camera, CameraIntrinsics, Frustum};
use crate::coverage::CoverageTable;
use crate::geometry::Pose6;
use crate::objective::{evaluate_table, recognized_area, EvalConfig};
use crate::scene::Scene;

/// Fitness of one chromosome together with the recognized ratio it implies.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Score {
    /// Recognized area (m²).
    pub fitness: f64,
    pub recognized_ratio: f64,
}

pub trait Fitness {
    fn score(&self, genes: &[f64]) -> Score;

    /// Scores a whole population. Implementations may evaluate in parallel
    /// but must return scores in population order.
    fn score_population(&self, population: &[Vec<f64>]) -> Vec<Score> {
        population.iter().map(|g| self.score(g)).collect()
    }
}

/// Strategy for scoring a population.
pub trait Executor {
    fn map(&self, population: &[Vec<f64>], score: &(dyn Fn(&[f64]) -> Score + Sync)) -> Vec<Score>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map(&self, population: &[Vec<f64>], score: &(dyn Fn(&[f64]) -> Score + Sync)) -> Vec<Score> {
        population.iter().map(|g| score(g)).collect()
    }
}

/// Shared lens model of every camera in a deployment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraModel {
    pub intrinsics: CameraIntrinsics,
    pub frustum: Frustum,
}

impl CameraModel {
    pub fn new(intrinsics: CameraIntrinsics, delta: f64) -> Result<CameraModel, crate::camera::CameraError> {
        Ok(CameraModel { intrinsics, frustum: Frustum::from_intrinsics(&intrinsics, delta)? })
    }

    pub fn at(&self, pose: Pose6) -> Camera {
        Camera::with_frustum(self.intrinsics, self.frustum, pose)
    }
}

/// Whether a camera may sit at `pose`: outside every forbidden region and
/// every obstacle volume.
pub fn check_placement(pose: &Pose6, scene: &Scene) -> bool {
    let p = pose.position;
    !scene.forbidden_regions().iter().any(|r| r.contains(p)) && !scene.inside_any_obstacle(p)
}

/// Recognized area of the deployment a chromosome encodes. Deployments with
/// a camera in a forbidden place score zero.
pub struct DeploymentFitness<'a, E = Sequential> {
    pub scene: &'a Scene,
    pub dof: &'a DofSpec,
    pub model: CameraModel,
    pub config: EvalConfig,
    /// Cameras already placed, evaluated together with the decoded ones.
    frozen: Vec<Camera>,
    frozen_table: CoverageTable,
    pub executor: E,
}

impl<'a> DeploymentFitness<'a, Sequential> {
    pub fn new(scene: &'a Scene, dof: &'a DofSpec, model: CameraModel, config: EvalConfig) -> Self {
        let frozen_table = CoverageTable::compute(&[], scene);
        DeploymentFitness { scene, dof, model, config, frozen: Vec::new(), frozen_table, executor: Sequential }
    }
}

impl<'a, E> DeploymentFitness<'a, E> {
    pub fn with_executor<E2>(self, executor: E2) -> DeploymentFitness<'a, E2> {
        let DeploymentFitness { scene, dof, model, config, frozen, frozen_table, .. } = self;
        DeploymentFitness { scene, dof, model, config, frozen, frozen_table, executor }
    }

    /// Fixes cameras that take part in every evaluation. Their coverage is
    /// computed once here.
    pub fn with_frozen(mut self, frozen: Vec<Camera>) -> Self {
        self.frozen_table = CoverageTable::compute(&frozen, self.scene);
        self.frozen = frozen;
        self
    }

    pub fn frozen(&self) -> &[Camera] {
        &self.frozen
    }

    /// Every camera of the deployment, frozen ones first, or `None` if the
    /// genes do not decode or a placement is forbidden.
    pub fn cameras(&self, genes: &[f64]) -> Option<Vec<Camera>> {
        let poses = decode(genes, self.dof).ok()?;
        if !poses.iter().all(|p| check_placement(p, self.scene)) {
            return None;
        }
        let mut cams = self.frozen.clone();
        cams.extend(poses.into_iter().map(|p| self.model.at(p)));
        Some(cams)
    }

    fn evaluate(&self, genes: &[f64]) -> Score {
        let Some(cams) = self.cameras(genes) else {
            return Score::default();
        };
        let mesh = self.scene.object();
        let table = self.frozen_table.join(&CoverageTable::compute(&cams[self.frozen.len()..], self.scene));
        let pieces = evaluate_table(&table, mesh, &self.config);
        let count = pieces.iter().filter(|p| p.recognized).count();
        let ratio = if pieces.is_empty() { 0.0 } else { count as f64 / pieces.len() as f64 };
        Score { fitness: recognized_area(&pieces, mesh), recognized_ratio: ratio }
    }
}

impl<E: Executor + Sync> Fitness for DeploymentFitness<'_, E> {
    fn score(&self, genes: &[f64]) -> Score {
        self.evaluate(genes)
    }

    fn score_population(&self, population: &[Vec<f64>]) -> Vec<Score> {
        self.executor.map(population, &|g| self.evaluate(g))
    }
}

/// Recognized area of the deployment encoded by `ch`.
pub fn fitness<F: Fitness + ?Sized>(ch: &Chromosome, f: &F) -> f64 {
    f.score(&ch.genes).fitness
}
