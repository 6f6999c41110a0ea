//! Per-(camera, piece) coverage: the FOV, focus and occlusion gates, the
//! resolution criterion, and the radial coverage vector split into its
//! in-plane fusion component and its effective component along the normal.

use alloc::vec::Vec;

use crate::camera::{self, Camera};
use crate::geometry::{project_onto_plane, DirectionalPoint};
use crate::math::{self, Vec3, FRAC_PI_2};
use crate::scene::{Scene, TriangleSource};

/// Distance (m) under which segment endpoints and shared mesh edges are
/// treated as touching rather than crossing.
pub const CONTACT_TOLERANCE: f64 = 1e-9;

const BARYCENTRIC_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoverageError {
    #[error("camera optical center coincides with the center of piece {0}")]
    CoincidentCamera(usize),
}

/// Coverage of one piece by one camera, all vectors in the world frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoverageDecomposition {
    /// Radial coverage vector, pointing from the camera toward the piece.
    pub cv: Vec3,
    /// Fusion vector: `cv` projected onto the piece plane.
    pub cf: Vec3,
    /// Effective radial coverage vector: `cv - cf`, parallel to the normal.
    pub cs: Vec3,
    /// Effective coverage strength, `cos(elevation) * |cv|`.
    pub cs_norm: f64,
    /// Angle between the front normal and the ray to the camera, in `[0, pi]`.
    pub elevation: f64,
    /// Resolution criterion (pixel/mm) when every gate passes, else 0.
    pub resolution: f64,
}

impl CoverageDecomposition {
    /// Whether the fusion vector counts as zero, relative to `|cv|`.
    pub fn fusion_is_zero(&self) -> bool {
        self.cf.norm() <= 1e-12 * self.cv.norm().max(1.0)
    }

    pub fn is_covering(&self) -> bool {
        self.cs_norm > 0.0
    }
}

/// Elevation angle between the piece's front normal and the direction to the
/// camera.
pub fn elevation_angle(piece: &DirectionalPoint, cam_position: Vec3) -> Result<f64, CoverageError> {
    Ok(math::acos(elevation_cosine(piece, cam_position)?))
}

fn elevation_cosine(piece: &DirectionalPoint, cam_position: Vec3) -> Result<f64, CoverageError> {
    let to_cam = cam_position - piece.center;
    let dist = to_cam.norm();
    if !(dist > 0.0) {
        return Err(CoverageError::CoincidentCamera(piece.id));
    }
    Ok((piece.normal.dot(to_cam) / dist).clamp(-1.0, 1.0))
}

/// Parameter `t ∈ (0, 1)` at which the open segment `a→b` crosses the closed
/// triangle, ignoring contacts within [`CONTACT_TOLERANCE`] of either
/// endpoint. Segments lying in the triangle's plane never count.
pub fn segment_hit_parameter(a: Vec3, b: Vec3, tri: &[Vec3; 3]) -> Option<f64> {
    let d = b - a;
    let e1 = tri[1] - tri[0];
    let e2 = tri[2] - tri[0];
    let p = d.cross(e2);
    let det = e1.dot(p);
    let scale = d.norm() * e1.norm() * e2.norm();
    if !(det.abs() > 1e-14 * scale) {
        return None;
    }
    let inv = 1.0 / det;
    let s = a - tri[0];
    let u = s.dot(p) * inv;
    if u < -BARYCENTRIC_SLACK || u > 1.0 + BARYCENTRIC_SLACK {
        return None;
    }
    let q = s.cross(e1);
    let v = d.dot(q) * inv;
    if v < -BARYCENTRIC_SLACK || u + v > 1.0 + BARYCENTRIC_SLACK {
        return None;
    }
    let t = e2.dot(q) * inv;
    let len = d.norm();
    if t * len > CONTACT_TOLERANCE && (1.0 - t) * len > CONTACT_TOLERANCE {
        Some(t)
    } else {
        None
    }
}

/// Whether the open segment `a→b` crosses the closed triangle. Touching at
/// either endpoint does not count.
pub fn segment_intersects_triangle(a: Vec3, b: Vec3, tri: &[Vec3; 3]) -> bool {
    segment_hit_parameter(a, b, tri).is_some()
}

fn distance_to_segment(p: Vec3, a: Vec3, b: Vec3) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    let t = if len2 > 0.0 { ((p - a).dot(ab) / len2).clamp(0.0, 1.0) } else { 0.0 };
    (p - (a + ab * t)).norm()
}

fn near_piece_boundary(p: Vec3, piece: &DirectionalPoint) -> bool {
    let v = &piece.vertices;
    (0..3).any(|i| distance_to_segment(p, v[i], v[(i + 1) % 3]) <= CONTACT_TOLERANCE)
}

/// Whether any object or obstacle triangle other than `piece` blocks one of
/// the segments from `eye` to the piece's vertices.
fn vertex_rays_blocked(piece: &DirectionalPoint, eye: Vec3, scene: &Scene) -> bool {
    let own = piece.id.wrapping_sub(1);
    piece.vertices.iter().any(|&vertex| {
        scene.any_triangle_near_segment(eye, vertex, |tri| {
            if tri.source == TriangleSource::Object(own) {
                return false;
            }
            match segment_hit_parameter(eye, vertex, &tri.vertices) {
                Some(t) => !near_piece_boundary(eye + (vertex - eye) * t, piece),
                None => false,
            }
        })
    })
}

/// Occlusion criterion: 0 if the camera sees the back of the piece or a vertex
/// ray is blocked, else 1. `piece` must belong to `scene`'s object mesh.
pub fn occlusion_criterion(piece: &DirectionalPoint, camera: &Camera, scene: &Scene) -> u8 {
    match elevation_cosine(piece, camera.position()) {
        Ok(c) if is_front_facing(c) => u8::from(!vertex_rays_blocked(piece, camera.position(), scene)),
        _ => 0,
    }
}

#[inline]
fn is_front_facing(cos_elevation: f64) -> bool {
    // zeta >= pi/2 <=> cos <= 0, except that acos may round a tiny positive
    // cosine to exactly pi/2
    cos_elevation > 0.0 && math::acos(cos_elevation) < FRAC_PI_2
}

/// Radial coverage vector of `piece` under `camera` and its decomposition.
/// Gates are evaluated FOV, focus, occlusion; any failing gate yields zero
/// vectors.
pub fn radial_coverage_vector(
    piece: &DirectionalPoint,
    camera: &Camera,
    scene: &Scene,
) -> Result<CoverageDecomposition, CoverageError> {
    let cos_elev = elevation_cosine(piece, camera.position())?;
    let elevation = math::acos(cos_elev);
    let gated = CoverageDecomposition { elevation, ..Default::default() };

    let local = camera.to_camera_frame(piece.center);
    if !camera::in_fov(local, &camera.frustum) || !camera::is_focused(local.z, &camera.frustum) {
        return Ok(gated);
    }
    if !is_front_facing(cos_elev) || vertex_rays_blocked(piece, camera.position(), scene) {
        return Ok(gated);
    }
    let resolution = camera::resolution_unchecked(local.z, &camera.intrinsics);
    let ray = piece.center - camera.position();
    let cv = ray * (resolution / ray.norm());
    // unit normal, so the projection cannot fail
    let cf = project_onto_plane(piece.normal, cv).unwrap_or(Vec3::ZERO);
    let cs = cv - cf;
    Ok(CoverageDecomposition { cv, cf, cs, cs_norm: cos_elev * cv.norm(), elevation, resolution })
}

/// Decompositions for every (piece, camera) pair, stored piece-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageTable {
    cameras: usize,
    pieces: usize,
    entries: Vec<CoverageDecomposition>,
}

impl CoverageTable {
    /// Pieces whose center coincides with a camera are treated as uncovered
    /// by that camera.
    pub fn compute(cameras: &[Camera], scene: &Scene) -> CoverageTable {
        let mut entries = Vec::with_capacity(cameras.len() * scene.object().len());
        for piece in scene.object().iter() {
            for cam in cameras {
                entries.push(radial_coverage_vector(piece, cam, scene).unwrap_or_default());
            }
        }
        CoverageTable { cameras: cameras.len(), pieces: scene.object().len(), entries }
    }

    /// Builds a table from `pieces` rows of `cameras` entries each.
    pub fn from_entries(pieces: usize, cameras: usize, entries: Vec<CoverageDecomposition>) -> CoverageTable {
        assert_eq!(entries.len(), pieces * cameras, "coverage table shape mismatch");
        CoverageTable { cameras, pieces, entries }
    }

    /// Table over the cameras of `self` followed by those of `other`; both
    /// must cover the same pieces.
    pub fn join(&self, other: &CoverageTable) -> CoverageTable {
        assert_eq!(self.pieces, other.pieces, "joined tables must share pieces");
        let cameras = self.cameras + other.cameras;
        let mut entries = Vec::with_capacity(self.pieces * cameras);
        for k in 0..self.pieces {
            entries.extend_from_slice(self.piece(k));
            entries.extend_from_slice(other.piece(k));
        }
        CoverageTable { cameras, pieces: self.pieces, entries }
    }

    pub fn camera_count(&self) -> usize {
        self.cameras
    }

    pub fn piece_count(&self) -> usize {
        self.pieces
    }

    /// Decompositions of piece `k` (0-based) under every camera.
    pub fn piece(&self, k: usize) -> &[CoverageDecomposition] {
        &self.entries[k * self.cameras..(k + 1) * self.cameras]
    }
}
