//! Run configuration, read from TOML.
//!
//! World geometry is in meters and radians. Lens intrinsics stay in
//! millimeters and pixels; the core converts at the camera boundary. Mesh and
//! output paths are resolved relative to the config file's directory.

use std::path::{Path, PathBuf};

use camcov_core::camera::{derive_fov_angles, CameraIntrinsics, FovAngles, Frustum};
use camcov_core::math::Vec3;
use camcov_core::objective::{EvalConfig, FusionMethod};
use camcov_core::optimizer::{CameraModel, DofSpec, GeneBound, IgaParams};
use camcov_core::scene::ForbiddenRegion;
use serde::Deserialize;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub seed: u64,
    /// Recognition threshold on fused strength.
    pub thold: f64,
    /// Refinement bound on piece area (m²).
    pub sigma: f64,
    /// Permissible circle of confusion (pixels).
    pub delta: f64,
    #[serde(default)]
    pub fusion: Fusion,
    pub camera: CameraSection,
    pub scene: SceneSection,
    pub dof: DofSection,
    #[serde(default)]
    pub optimizer: OptimizerSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Fusion {
    #[default]
    Full,
    Csbm,
    Rabm,
}

impl From<Fusion> for FusionMethod {
    fn from(f: Fusion) -> Self {
        match f {
            Fusion::Full => FusionMethod::Full,
            Fusion::Csbm => FusionMethod::Csbm,
            Fusion::Rabm => FusionMethod::Rabm,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CameraSection {
    /// Focal length (mm).
    pub f: f64,
    /// Pixel pitch (mm/pixel).
    pub s_u: f64,
    pub s_v: f64,
    /// Principal point (pixels).
    pub o_u: f64,
    pub o_v: f64,
    /// Sensor size (pixels).
    pub w: f64,
    pub h: f64,
    /// Aperture diameter (mm).
    pub d_a: f64,
    /// Focus distance (mm).
    pub d_s: f64,
    /// Optional explicit half-angles (rad); checked against the intrinsics.
    pub fov: Option<FovSection>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FovSection {
    pub left: f64,
    pub right: f64,
    pub top: f64,
    pub bottom: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSection {
    /// STL or OBJ file with the object to cover.
    pub object: PathBuf,
    #[serde(default)]
    pub obstacles: Vec<PathBuf>,
    /// Multiplier applied to mesh coordinates, e.g. 0.001 for files in mm.
    #[serde(default = "one")]
    pub scale: f64,
    #[serde(default)]
    pub forbidden: Vec<Forbidden>,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum Forbidden {
    Box { min: [f64; 3], max: [f64; 3] },
    Cylinder { center: [f64; 2], radius: f64, z_min: f64, z_max: f64 },
}

/// A gene is either a `[min, max]` range or a fixed number.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Fixed(f64),
    Range([f64; 2]),
}

impl From<Bound> for GeneBound {
    fn from(b: Bound) -> Self {
        match b {
            Bound::Fixed(v) => GeneBound::Fixed(v),
            Bound::Range([min, max]) => GeneBound::Free { min, max },
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DofSection {
    pub x: Bound,
    pub y: Bound,
    pub z: Bound,
    pub alpha: Bound,
    pub beta: Bound,
    pub gamma: Bound,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    #[default]
    Iga,
    Sga,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerSection {
    pub algorithm: Algorithm,
    /// Cameras in the deployment; also the pose count `evaluate` expects.
    pub cameras: Option<usize>,
    pub population: usize,
    pub recombination_min: usize,
    pub recombination_max: usize,
    pub mutation_probability: f64,
    pub iterations: usize,
    pub stall_iterations: Option<usize>,
    pub insert_elite: bool,
    pub feasibility_attempts: usize,
    /// Worker threads for fitness evaluation; 0 uses every core.
    pub threads: usize,
}

impl Default for OptimizerSection {
    fn default() -> Self {
        let p = IgaParams::default();
        OptimizerSection {
            algorithm: Algorithm::Iga,
            cameras: None,
            population: p.population,
            recombination_min: p.recombination_min,
            recombination_max: p.recombination_max,
            mutation_probability: p.mutation_probability,
            iterations: p.iterations,
            stall_iterations: None,
            insert_elite: false,
            feasibility_attempts: 10,
            threads: 0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub dir: PathBuf,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection { dir: PathBuf::from("out") }
    }
}

/// Validated configuration with resolved paths and core types.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub source: PathBuf,
    pub seed: u64,
    pub sigma: f64,
    pub eval: EvalConfig,
    pub model: CameraModel,
    pub object: PathBuf,
    pub obstacles: Vec<PathBuf>,
    pub scale: f64,
    pub forbidden: Vec<ForbiddenRegion>,
    pub template: [GeneBound; 6],
    pub algorithm: Algorithm,
    pub cameras: Option<usize>,
    pub params: IgaParams,
    pub threads: usize,
    pub out_dir: PathBuf,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        RunConfig::parse(&text, path)
    }

    /// Parses and validates `text`; relative paths resolve against the
    /// directory of `source`.
    pub fn parse(text: &str, source: &Path) -> Result<RunConfig> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::config(source, e.to_string()))?;
        RunConfig::from_raw(raw, source)
    }

    pub fn from_raw(raw: RawConfig, source: &Path) -> Result<RunConfig> {
        let bad = |msg: String| CliError::config(source, msg);
        let base = source.parent().unwrap_or(Path::new("."));
        let resolve = |p: &Path| if p.is_absolute() { p.to_path_buf() } else { base.join(p) };

        if !(raw.thold > 0.0 && raw.thold.is_finite()) {
            return Err(bad(format!("thold must be positive, got {}", raw.thold)));
        }
        if !(raw.sigma > 0.0 && raw.sigma.is_finite()) {
            return Err(bad(format!("sigma must be positive, got {}", raw.sigma)));
        }
        if !(raw.scene.scale > 0.0 && raw.scene.scale.is_finite()) {
            return Err(bad(format!("scene.scale must be positive, got {}", raw.scene.scale)));
        }

        let c = &raw.camera;
        let intrinsics = CameraIntrinsics { f: c.f, s_u: c.s_u, s_v: c.s_v, o_u: c.o_u, o_v: c.o_v, w: c.w, h: c.h, d_a: c.d_a, d_s: c.d_s };
        let frustum = match c.fov {
            None => Frustum::from_intrinsics(&intrinsics, raw.delta),
            Some(fov) => {
                let given = FovAngles { left: fov.left, right: fov.right, top: fov.top, bottom: fov.bottom };
                let diff = given.max_abs_diff(&derive_fov_angles(&intrinsics));
                if diff > 1e-6 {
                    log::warn!("camera.fov differs from the angles implied by the intrinsics by {diff:.3e} rad");
                }
                Frustum::with_angles(&intrinsics, raw.delta, given)
            }
        }
        .map_err(|e| bad(e.to_string()))?;
        let model = CameraModel { intrinsics, frustum };

        let forbidden = raw
            .scene
            .forbidden
            .iter()
            .map(|f| match *f {
                Forbidden::Box { min, max } => {
                    if (0..3).any(|i| !(min[i] <= max[i])) {
                        return Err(bad(format!("forbidden box has min {min:?} above max {max:?}")));
                    }
                    Ok(ForbiddenRegion::Box { min: Vec3::from_array(min), max: Vec3::from_array(max) })
                }
                Forbidden::Cylinder { center, radius, z_min, z_max } => {
                    if !(radius > 0.0) || !(z_min <= z_max) {
                        return Err(bad("forbidden cylinder needs radius > 0 and z_min <= z_max".into()));
                    }
                    Ok(ForbiddenRegion::Cylinder { center_x: center[0], center_y: center[1], radius, z_min, z_max })
                }
            })
            .collect::<Result<Vec<_>>>()?;

        let d = &raw.dof;
        let template: [GeneBound; 6] = [d.x, d.y, d.z, d.alpha, d.beta, d.gamma].map(GeneBound::from);
        let per_camera = DofSpec::new(vec![template]).map_err(|e| bad(format!("dof: {e}")))?;

        let o = &raw.optimizer;
        let params = IgaParams {
            population: o.population,
            recombination_min: o.recombination_min,
            recombination_max: o.recombination_max,
            mutation_probability: o.mutation_probability,
            iterations: o.iterations,
            stall_iterations: o.stall_iterations,
            insert_elite: o.insert_elite,
            feasibility_attempts: o.feasibility_attempts,
            seed: raw.seed,
        };
        // Fragment bounds refer to the full chromosome, known only once the
        // camera count is.
        let genes = match o.cameras {
            Some(n) if n > 0 => per_camera.gene_count() * n,
            _ => usize::MAX,
        };
        params.validate(genes).map_err(|e| bad(format!("optimizer: {e}")))?;

        let object = resolve(&raw.scene.object);
        let obstacles: Vec<PathBuf> = raw.scene.obstacles.iter().map(|p| resolve(p)).collect();
        for p in std::iter::once(&object).chain(&obstacles) {
            if !p.is_file() {
                return Err(bad(format!("mesh file {} does not exist", p.display())));
            }
        }

        Ok(RunConfig {
            source: source.to_path_buf(),
            seed: raw.seed,
            sigma: raw.sigma,
            eval: EvalConfig { thold: raw.thold, fusion: raw.fusion.into() },
            model,
            object,
            obstacles,
            scale: raw.scene.scale,
            forbidden,
            template,
            algorithm: o.algorithm,
            cameras: o.cameras,
            params,
            threads: o.threads,
            out_dir: resolve(&raw.output.dir),
        })
    }

    /// Chromosome layout for `n` cameras sharing the configured bounds.
    pub fn dof(&self, n: usize) -> Result<DofSpec> {
        DofSpec::uniform(self.template, n).map_err(|e| CliError::config(&self.source, format!("dof: {e}")))
    }

    /// Camera count for `optimize`.
    pub fn deployment_size(&self) -> Result<usize> {
        match self.cameras {
            Some(n) if n > 0 => Ok(n),
            _ => Err(CliError::config(&self.source, "optimizer.cameras must be set to at least 1")),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> RunConfig {
        self.seed = seed;
        self.params.seed = seed;
        self
    }
}
