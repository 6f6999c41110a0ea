//! The `evaluate`, `optimize` and `heuristic` commands.

use std::path::{Path, PathBuf};

use camcov_core::geometry::Pose6;
use camcov_core::objective::{report, CoverageReport};
use camcov_core::optimizer::{
    check_placement, heuristic_place, iga_optimize, sga_optimize, DeploymentFitness, HeuristicStep, OptimizationResult,
};
use camcov_core::scene::Scene;

use crate::config::{Algorithm, RunConfig};
use crate::error::{CliError, Result};
use crate::parallel::Rayon;
use crate::{mesh_io, output, ply, poses};

pub const REPORT_FILE: &str = "report.json";
pub const MESH_FILE: &str = "coverage.ply";
pub const POSES_FILE: &str = "poses.toml";
pub const TRACE_FILE: &str = "trace.csv";
pub const HEURISTIC_FILE: &str = "heuristic.csv";

pub fn load_scene(cfg: &RunConfig) -> Result<Scene> {
    mesh_io::load_scene(&cfg.object, &cfg.obstacles, cfg.scale, cfg.sigma, cfg.forbidden.clone())
}

fn write(dir: &Path, name: &str, contents: &[u8]) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(path)
}

/// Writes the JSON report and colored mesh of a deployment.
fn write_coverage(dir: &Path, scene: &Scene, rep: &CoverageReport, cameras: usize, best: Option<f64>) -> Result<()> {
    write(dir, REPORT_FILE, output::report_json(rep, scene.object(), cameras, best).as_bytes())?;
    let mut mesh = Vec::new();
    ply::write_ply(&mut mesh, scene.object(), &rep.pieces, rep.thold).expect("writing to memory");
    write(dir, MESH_FILE, &mesh)?;
    Ok(())
}

/// Coverage of the deployment in `poses_path`.
pub fn evaluate(cfg: &RunConfig, poses_path: &Path, out_dir: &Path) -> Result<CoverageReport> {
    let poses = poses::read_poses(poses_path)?;
    if let Some(n) = cfg.cameras {
        if n != poses.len() {
            return Err(CliError::Invalid(format!("{}: {} poses, but the config deploys {n} cameras", poses_path.display(), poses.len())));
        }
    }
    let scene = load_scene(cfg)?;
    for (i, p) in poses.iter().enumerate() {
        if !check_placement(p, &scene) {
            log::warn!("camera {} sits in a forbidden region or obstacle", i + 1);
        }
    }
    let cams: Vec<_> = poses.iter().map(|p| cfg.model.at(*p)).collect();
    let rep = report(&cams, &scene, &cfg.eval);
    write_coverage(out_dir, &scene, &rep, cams.len(), None)?;
    Ok(rep)
}

fn finish_deployment(cfg: &RunConfig, scene: &Scene, poses: &[Pose6], out_dir: &Path, best: f64) -> Result<()> {
    write(out_dir, POSES_FILE, poses::format_poses(poses).as_bytes())?;
    let cams: Vec<_> = poses.iter().map(|p| cfg.model.at(*p)).collect();
    write_coverage(out_dir, scene, &report(&cams, scene, &cfg.eval), cams.len(), Some(best))
}

/// Optimizes the configured number of cameras.
pub fn optimize(cfg: &RunConfig, out_dir: &Path) -> Result<OptimizationResult> {
    let n = cfg.deployment_size()?;
    let dof = cfg.dof(n)?;
    let scene = load_scene(cfg)?;
    let fit = DeploymentFitness::new(&scene, &dof, cfg.model, cfg.eval).with_executor(Rayon);
    let res = match cfg.algorithm {
        Algorithm::Iga => iga_optimize(&cfg.params, &dof, &fit)?,
        Algorithm::Sga => sga_optimize(&cfg.params, &dof, &fit)?,
    };
    log::info!("best recognized area {} m² (ratio {})", res.best.fitness, res.best.recognized_ratio);
    write(out_dir, TRACE_FILE, output::trace_csv(&res.trace).as_bytes())?;
    finish_deployment(cfg, &scene, &res.poses, out_dir, res.best.fitness)?;
    Ok(res)
}

/// Greedy placement of 1..=`max_cameras` cameras.
pub fn heuristic(cfg: &RunConfig, max_cameras: usize, out_dir: &Path) -> Result<Vec<HeuristicStep>> {
    if max_cameras == 0 {
        return Err(CliError::Invalid("--max-cameras must be at least 1".into()));
    }
    let scene = load_scene(cfg)?;
    let steps = heuristic_place(max_cameras, &cfg.params, cfg.template, cfg.model, &scene, cfg.eval, Rayon)?;
    write(out_dir, HEURISTIC_FILE, output::heuristic_csv(&steps).as_bytes())?;
    let last = steps.last().expect("at least one step");
    finish_deployment(cfg, &scene, &last.poses, out_dir, last.fitness)?;
    Ok(steps)
}
