//! Recognition, the recognized-area objective and network-level metrics.

use alloc::vec::Vec;

use crate::camera::Camera;
use crate::coverage::CoverageTable;
use crate::fusion::{self, PrincipalMethod};
use crate::geometry::Mesh;
use crate::scene::Scene;

/// How per-piece fused strength is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FusionMethod {
    /// Maximum over the full pairwise matrix.
    #[default]
    Full,
    /// Principal camera per piece by effective strength.
    Csbm,
    /// One principal camera by solo recognized area.
    Rabm,
}

impl FusionMethod {
    pub fn name(self) -> &'static str {
        match self {
            FusionMethod::Full => "full",
            FusionMethod::Csbm => "csbm",
            FusionMethod::Rabm => "rabm",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    /// Recognition threshold on fused strength.
    pub thold: f64,
    pub fusion: FusionMethod,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { thold: 1.0, fusion: FusionMethod::Full }
    }
}

/// Inclusive threshold test.
#[inline]
pub fn recognized(strength: f64, thold: f64) -> bool {
    strength >= thold
}

/// Fused coverage of one piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PieceCoverage {
    pub strength: f64,
    pub recognized: bool,
    /// Designated observer: the simplified-method principal, or for full
    /// fusion the camera with the largest effective strength.
    pub principal: Option<usize>,
    /// Resolution (pixel/mm) of the principal camera, 0 if it does not cover
    /// the piece.
    pub resolution: f64,
}

/// Per-piece fused coverage for all pieces of `mesh` from a precomputed table.
pub fn evaluate_table(table: &CoverageTable, mesh: &Mesh, config: &EvalConfig) -> Vec<PieceCoverage> {
    let global = match config.fusion {
        FusionMethod::Rabm => fusion::rabm_principal_from_table(table, mesh, config.thold),
        _ => Vec::new(),
    };
    (0..table.piece_count())
        .map(|k| {
            let decs = table.piece(k);
            let (strength, principal) = match config.fusion {
                FusionMethod::Full => {
                    let principal = fusion::csbm_principal(decs).first().copied();
                    (fusion::full_fused_strength(decs), principal)
                }
                FusionMethod::Csbm => {
                    let prin = fusion::csbm_principal(decs);
                    let a = fusion::simplified_fused_strength(PrincipalMethod::CoverageStrength, &prin, decs);
                    (a.strength, a.principal)
                }
                FusionMethod::Rabm => {
                    let a = fusion::simplified_fused_strength(PrincipalMethod::RecognizedArea, &global, decs);
                    (a.strength, a.principal)
                }
            };
            let resolution = principal.map(|i| decs[i].resolution).unwrap_or(0.0);
            PieceCoverage { strength, recognized: recognized(strength, config.thold), principal, resolution }
        })
        .collect()
}

/// Total relevance (area) of the recognized pieces.
pub fn recognized_area(pieces: &[PieceCoverage], mesh: &Mesh) -> f64 {
    pieces.iter().zip(mesh.iter()).filter(|(c, _)| c.recognized).map(|(_, p)| p.relevance()).sum()
}

/// Recognized area of `scene`'s object under `cameras`.
pub fn objective(cameras: &[Camera], scene: &Scene, config: &EvalConfig) -> f64 {
    let table = CoverageTable::compute(cameras, scene);
    recognized_area(&evaluate_table(&table, scene.object(), config), scene.object())
}

/// Network-level coverage summary.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub fusion: FusionMethod,
    pub thold: f64,
    pub pieces: Vec<PieceCoverage>,
    pub recognized_count: usize,
    pub recognized_ratio: f64,
    /// m²
    pub recognized_area: f64,
    /// m²
    pub total_area: f64,
    /// Mean fused strength over all pieces.
    pub average_coverage_strength: f64,
    /// Mean fused strength over recognized pieces only (0 if none).
    pub average_coverage_strength_recognized: f64,
    /// Mean principal-camera resolution over all pieces (pixel/mm).
    pub average_resolution: f64,
}

impl CoverageReport {
    pub fn from_pieces(pieces: Vec<PieceCoverage>, mesh: &Mesh, config: &EvalConfig) -> CoverageReport {
        let k = pieces.len();
        let recognized_count = pieces.iter().filter(|p| p.recognized).count();
        let mean = |sum: f64, n: usize| if n == 0 { 0.0 } else { sum / n as f64 };
        let strength_sum: f64 = pieces.iter().map(|p| p.strength).sum();
        let recognized_strength_sum: f64 = pieces.iter().filter(|p| p.recognized).map(|p| p.strength).sum();
        let resolution_sum: f64 = pieces.iter().map(|p| p.resolution).sum();
        CoverageReport {
            fusion: config.fusion,
            thold: config.thold,
            recognized_count,
            recognized_ratio: mean(recognized_count as f64, k),
            recognized_area: recognized_area(&pieces, mesh),
            total_area: mesh.total_area(),
            average_coverage_strength: mean(strength_sum, k),
            average_coverage_strength_recognized: mean(recognized_strength_sum, recognized_count),
            average_resolution: mean(resolution_sum, k),
            pieces,
        }
    }
}

pub fn report(cameras: &[Camera], scene: &Scene, config: &EvalConfig) -> CoverageReport {
    let table = CoverageTable::compute(cameras, scene);
    CoverageReport::from_pieces(evaluate_table(&table, scene.object(), config), scene.object(), config)
}
