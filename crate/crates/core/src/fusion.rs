//! Pairwise fusion of effective coverage strengths, the per-piece fused
//! matrix and its maximum, and the two simplified principal/auxiliary
//! schemes.
//!
//! Two cameras are fused on the piece plane: the first camera contributes its
//! full strength along its own fusion direction and the second contributes
//! only the part of its strength orthogonal to that direction. A second
//! camera from the same or the opposite in-plane direction adds nothing; one
//! at 90° adds the most.

use alloc::vec::Vec;

use crate::camera::Camera;
use crate::coverage::{radial_coverage_vector, CoverageDecomposition, CoverageError, CoverageTable};
use crate::geometry::{project_onto_plane, DirectionalPoint, Mesh};
use crate::math;
use crate::scene::Scene;

/// Fused strength of a piece seen by camera `i` first and camera `j` second.
///
/// When either fusion vector is zero this is the larger of the two strengths.
/// Otherwise the second camera's strength vector along its fusion direction
/// is projected onto the plane normal to the first camera's fusion vector and
/// added to the first camera's strength vector. The two summands are
/// orthogonal, so the norm is evaluated as `hypot(s_i, |projection|)`.
pub fn pairwise_fused_strength(dec_i: &CoverageDecomposition, dec_j: &CoverageDecomposition) -> f64 {
    if dec_i.fusion_is_zero() || dec_j.fusion_is_zero() {
        return dec_i.cs_norm.max(dec_j.cs_norm);
    }
    let dir_j = dec_j.cf / dec_j.cf.norm();
    let ortho = project_onto_plane(dec_i.cf, dir_j * dec_j.cs_norm).map(|v| v.norm()).unwrap_or(0.0);
    math::hypot(dec_i.cs_norm, ortho)
}

/// All ordered pairwise fused strengths of one piece.
#[derive(Debug, Clone, PartialEq)]
pub struct FusedMatrix {
    pub piece_id: usize,
    n: usize,
    values: Vec<f64>,
}

impl FusedMatrix {
    pub fn from_decompositions(piece_id: usize, decs: &[CoverageDecomposition]) -> FusedMatrix {
        let n = decs.len();
        let mut values = Vec::with_capacity(n * n);
        for di in decs {
            for dj in decs {
                values.push(pairwise_fused_strength(di, dj));
            }
        }
        FusedMatrix { piece_id, n, values }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    /// Largest entry; 0 for an empty matrix.
    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

fn decompositions(piece: &DirectionalPoint, cameras: &[Camera], scene: &Scene) -> Result<Vec<CoverageDecomposition>, CoverageError> {
    cameras.iter().map(|c| radial_coverage_vector(piece, c, scene)).collect()
}

pub fn fused_matrix(piece: &DirectionalPoint, cameras: &[Camera], scene: &Scene) -> Result<FusedMatrix, CoverageError> {
    Ok(FusedMatrix::from_decompositions(piece.id, &decompositions(piece, cameras, scene)?))
}

/// Fused strength of a piece under the whole network: the matrix maximum.
pub fn fused_strength(piece: &DirectionalPoint, cameras: &[Camera], scene: &Scene) -> Result<f64, CoverageError> {
    Ok(full_fused_strength(&decompositions(piece, cameras, scene)?))
}

/// Matrix maximum without materializing the matrix.
pub fn full_fused_strength(decs: &[CoverageDecomposition]) -> f64 {
    let mut best: f64 = 0.0;
    for di in decs {
        for dj in decs {
            best = best.max(pairwise_fused_strength(di, dj));
        }
    }
    best
}

/// How the principal camera of a piece is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrincipalMethod {
    /// Per piece, the camera with the largest effective strength.
    CoverageStrength,
    /// One camera for all pieces: the one with the largest solo recognized
    /// area.
    RecognizedArea,
}

/// Principal/auxiliary choice for one piece and the resulting strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalAssignment {
    pub method: PrincipalMethod,
    /// `None` when no camera qualifies (every strength zero under CSBM).
    pub principal: Option<usize>,
    pub auxiliary: Option<usize>,
    /// Simplified fused strength, `Cs(principal, auxiliary)`.
    pub strength: f64,
}

/// Cameras tied for the largest effective strength on this piece, ascending.
/// Empty when every strength is zero.
pub fn csbm_principal(decs: &[CoverageDecomposition]) -> Vec<usize> {
    let best = decs.iter().map(|d| d.cs_norm).fold(0.0, f64::max);
    if !(best > 0.0) {
        return Vec::new();
    }
    (0..decs.len()).filter(|&i| decs[i].cs_norm == best).collect()
}

/// Solo recognized area of every camera: the area of pieces whose own
/// effective strength reaches `thold`.
pub fn solo_recognized_areas(table: &CoverageTable, mesh: &Mesh, thold: f64) -> Vec<f64> {
    let mut areas = alloc::vec![0.0; table.camera_count()];
    for (k, piece) in mesh.iter().enumerate() {
        for (i, d) in table.piece(k).iter().enumerate() {
            if d.cs_norm >= thold {
                areas[i] += piece.relevance();
            }
        }
    }
    areas
}

/// Cameras tied for the largest solo recognized area, ascending.
pub fn rabm_principal_from_table(table: &CoverageTable, mesh: &Mesh, thold: f64) -> Vec<usize> {
    let areas = solo_recognized_areas(table, mesh, thold);
    let best = areas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (0..areas.len()).filter(|&i| areas[i] == best).collect()
}

pub fn rabm_principal(cameras: &[Camera], scene: &Scene, thold: f64) -> Vec<usize> {
    let table = CoverageTable::compute(cameras, scene);
    rabm_principal_from_table(&table, scene.object(), thold)
}

/// Camera `j` maximizing `Cs(principal, j)`, `j` ranging over every camera
/// including the principal. Lowest index on ties.
pub fn auxiliary_camera(principal: usize, decs: &[CoverageDecomposition]) -> (usize, f64) {
    let p = &decs[principal];
    let mut best = (principal, pairwise_fused_strength(p, p));
    for (j, d) in decs.iter().enumerate() {
        let v = pairwise_fused_strength(p, d);
        if v > best.1 || (v == best.1 && j < best.0) {
            best = (j, v);
        }
    }
    best
}

/// Evaluates every candidate principal and keeps the largest resulting
/// strength, reporting the lowest principal index that attains it.
pub fn simplified_fused_strength(
    method: PrincipalMethod,
    principals: &[usize],
    decs: &[CoverageDecomposition],
) -> PrincipalAssignment {
    let mut out = PrincipalAssignment { method, principal: None, auxiliary: None, strength: 0.0 };
    for &i in principals {
        let (j, v) = auxiliary_camera(i, decs);
        if out.principal.is_none() || v > out.strength {
            out = PrincipalAssignment { method, principal: Some(i), auxiliary: Some(j), strength: v };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::Vec3;
    use alloc::vec;

    /// Synthetic decomposition on a piece with normal +Z: strength `s`,
    /// in-plane direction at angle `phi`, elevation 45°.
    pub(crate) fn synthetic(s: f64, phi: f64) -> CoverageDecomposition {
        if s == 0.0 {
            return CoverageDecomposition::default();
        }
        let dir = Vec3::new(math::cos(phi), math::sin(phi), 0.0);
        let cf = dir * s; // |cf| = |cs| at 45 degrees
        let cs = Vec3::new(0.0, 0.0, -s);
        CoverageDecomposition { cv: cf + cs, cf, cs, cs_norm: s, elevation: core::f64::consts::FRAC_PI_4, resolution: s * 2f64.sqrt() }
    }

    fn dead_on(s: f64) -> CoverageDecomposition {
        let cs = Vec3::new(0.0, 0.0, -s);
        CoverageDecomposition { cv: cs, cf: Vec3::ZERO, cs, cs_norm: s, elevation: 0.0, resolution: s }
    }

    #[test]
    fn table_pattern() {
        let deg = core::f64::consts::PI / 180.0;
        let a = synthetic(2.0, 0.0);
        assert!((pairwise_fused_strength(&a, &a) - 2.0).abs() < 1e-12);
        assert!((pairwise_fused_strength(&a, &synthetic(2.0, 90.0 * deg)) - 8f64.sqrt()).abs() < 1e-12);
        assert!((pairwise_fused_strength(&a, &synthetic(2.0, 45.0 * deg)) - 6f64.sqrt()).abs() < 1e-12);
        assert!((pairwise_fused_strength(&a, &synthetic(2.0, 180.0 * deg)) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn zero_fusion_vector_uses_max_rule() {
        assert_eq!(pairwise_fused_strength(&dead_on(1.0), &synthetic(0.5, 0.3)), 1.0);
        assert_eq!(pairwise_fused_strength(&synthetic(0.5, 0.3), &dead_on(1.0)), 1.0);
        assert_eq!(pairwise_fused_strength(&synthetic(0.7, 0.3), &CoverageDecomposition::default()), 0.7);
    }

    #[test]
    fn order_matters_for_unequal_strengths() {
        let a = synthetic(2.0, 0.0);
        let b = synthetic(1.0, core::f64::consts::FRAC_PI_2);
        assert!((pairwise_fused_strength(&a, &b) - 5f64.sqrt()).abs() < 1e-12);
        assert!((pairwise_fused_strength(&b, &a) - 5f64.sqrt()).abs() < 1e-12);
        let c = synthetic(1.0, core::f64::consts::FRAC_PI_4);
        // hypot(2, sin 45) vs hypot(1, 2 sin 45)
        assert!((pairwise_fused_strength(&a, &c) - 4.5f64.sqrt()).abs() < 1e-12);
        assert!((pairwise_fused_strength(&c, &a) - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn matrix_diagonal_and_max() {
        let decs = vec![synthetic(0.4, 0.1), synthetic(1.3, 2.0), dead_on(0.9)];
        let m = FusedMatrix::from_decompositions(7, &decs);
        assert_eq!(m.size(), 3);
        for (i, d) in decs.iter().enumerate() {
            assert!((m.get(i, i) - d.cs_norm).abs() < 1e-12);
        }
        let brute = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| pairwise_fused_strength(&decs[i], &decs[j]))
            .fold(0.0, f64::max);
        assert_eq!(m.max(), brute);
        assert_eq!(full_fused_strength(&decs), brute);
        assert_eq!(FusedMatrix::from_decompositions(1, &decs[..1]).max(), decs[0].cs_norm);
    }

    #[test]
    fn csbm_selection() {
        let decs = vec![dead_on(0.2), dead_on(0.9), dead_on(0.5)];
        assert_eq!(csbm_principal(&decs), vec![1]);
        let tied = vec![synthetic(0.7, 0.0), synthetic(0.7, 1.0)];
        assert_eq!(csbm_principal(&tied), vec![0, 1]);
        assert!(csbm_principal(&[CoverageDecomposition::default(); 3]).is_empty());
        let a = simplified_fused_strength(PrincipalMethod::CoverageStrength, &[], &decs);
        assert_eq!((a.principal, a.strength), (None, 0.0));
    }

    #[test]
    fn tied_principals_keep_the_best_value() {
        // Cameras 1 and 2 tie at 0.7 and both pair best with camera 0.
        let decs = vec![synthetic(0.5, core::f64::consts::FRAC_PI_2), synthetic(0.7, 0.0), synthetic(0.7, 0.0)];
        let prin = csbm_principal(&decs);
        let a = simplified_fused_strength(PrincipalMethod::CoverageStrength, &prin, &decs);
        assert_eq!(a.principal, Some(1));
        assert_eq!(a.auxiliary, Some(0));
        assert!((a.strength - (0.49f64 + 0.25).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn auxiliary_choice() {
        let one = vec![synthetic(1.0, 0.0)];
        assert_eq!(auxiliary_camera(0, &one).0, 0);
        let two = vec![synthetic(1.0, 0.0), synthetic(1.0, 1.0)];
        assert_eq!(auxiliary_camera(0, &two).0, 1);
        let three = vec![synthetic(1.0, 0.0), synthetic(1.0, 0.5), synthetic(1.0, core::f64::consts::FRAC_PI_2)];
        assert_eq!(auxiliary_camera(0, &three).0, 2);
        // occluded principal falls back to the strongest camera
        let occluded = vec![CoverageDecomposition::default(), synthetic(0.3, 0.0), synthetic(0.8, 2.0)];
        assert_eq!(auxiliary_camera(0, &occluded), (2, 0.8));
    }
}
