//! Camera pose lists as TOML: one `[[camera]]` table per camera with
//! `x`, `y`, `z` (m) and `alpha`, `beta`, `gamma` (yaw, pitch, roll; rad).

use std::path::Path;

use camcov_core::geometry::Pose6;
use camcov_core::math::Vec3;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoseRecord {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PoseFile {
    #[serde(default)]
    camera: Vec<PoseRecord>,
}

impl From<&Pose6> for PoseRecord {
    fn from(p: &Pose6) -> Self {
        let [x, y, z, alpha, beta, gamma] = p.to_array();
        PoseRecord { x, y, z, alpha, beta, gamma }
    }
}

pub fn parse_poses(text: &str, source: &Path) -> Result<Vec<Pose6>> {
    let file: PoseFile = toml::from_str(text).map_err(|e| CliError::config(source, e.to_string()))?;
    file.camera
        .iter()
        .enumerate()
        .map(|(i, r)| {
            Pose6::new(Vec3::new(r.x, r.y, r.z), r.alpha, r.beta, r.gamma)
                .map_err(|e| CliError::config(source, format!("camera {}: {e}", i + 1)))
        })
        .collect()
}

pub fn read_poses(path: &Path) -> Result<Vec<Pose6>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_poses(&text, path)
}

pub fn format_poses(poses: &[Pose6]) -> String {
    let file = PoseFile { camera: poses.iter().map(PoseRecord::from).collect() };
    toml::to_string(&file).expect("pose records always serialize")
}
