//! Coordinate frames, rotations, plane projection, and refinement of raw
//! triangles into directional points.
//!
//! World geometry is in meters. A pose's orientation is (yaw, pitch, roll)
//! and maps world vectors into the local frame through
//! `R = R_roll · R_pitch · R_yaw · B`, where `B` swaps the world Y/Z axes so
//! that an unrotated frame looks along world +Y.

use alloc::vec::Vec;

use crate::math::{self, Mat3, Vec3, FRAC_PI_2, PI};

/// Triangles with an area at or below this value (m²) are degenerate.
pub const MIN_TRIANGLE_AREA: f64 = 1e-12;

const UNIT_NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("projection plane normal is the zero vector")]
    ZeroNormal,
    #[error("normal vector has norm {0}, expected 1")]
    NonUnitNormal(f64),
    #[error("{angle} = {value} rad is outside [-pi/2, pi/2]")]
    AngleOutOfRange { angle: &'static str, value: f64 },
    #[error("non-finite pose component")]
    NonFinite,
    #[error("triangle {index} is degenerate (area {area:e} m²)")]
    DegenerateTriangle { index: usize, area: f64 },
    #[error("refinement threshold must be positive, got {0}")]
    InvalidSigma(f64),
}

/// Yaw, pitch and roll in radians.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Orientation {
    /// In `[-pi, pi)`.
    pub yaw: f64,
    /// In `[-pi/2, pi/2]`.
    pub pitch: f64,
    /// In `[-pi/2, pi/2]`.
    pub roll: f64,
}

impl Orientation {
    /// Wraps yaw into `[-pi, pi)`; pitch and roll outside `[-pi/2, pi/2]`
    /// are rejected rather than wrapped.
    pub fn new(yaw: f64, pitch: f64, roll: f64) -> Result<Self, GeometryError> {
        if !(yaw.is_finite() && pitch.is_finite() && roll.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if !(-FRAC_PI_2..=FRAC_PI_2).contains(&pitch) {
            return Err(GeometryError::AngleOutOfRange { angle: "pitch", value: pitch });
        }
        if !(-FRAC_PI_2..=FRAC_PI_2).contains(&roll) {
            return Err(GeometryError::AngleOutOfRange { angle: "roll", value: roll });
        }
        Ok(Orientation { yaw: wrap_angle(yaw), pitch, roll })
    }
}

/// Wraps an angle into `[-pi, pi)`.
pub fn wrap_angle(a: f64) -> f64 {
    if (-PI..PI).contains(&a) {
        return a;
    }
    let two_pi = 2.0 * PI;
    let w = a - two_pi * math::floor((a + PI) / two_pi);
    if w >= PI {
        w - two_pi
    } else if w < -PI {
        w + two_pi
    } else {
        w
    }
}

/// Position (m) plus orientation of a local frame in the world frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Pose6 {
    pub position: Vec3,
    pub orientation: Orientation,
}

impl Pose6 {
    pub fn new(position: Vec3, yaw: f64, pitch: f64, roll: f64) -> Result<Self, GeometryError> {
        if !position.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        Ok(Pose6 { position, orientation: Orientation::new(yaw, pitch, roll)? })
    }

    /// `[x, y, z, yaw, pitch, roll]`.
    pub fn to_array(&self) -> [f64; 6] {
        let o = &self.orientation;
        [self.position.x, self.position.y, self.position.z, o.yaw, o.pitch, o.roll]
    }

    pub fn from_array(a: [f64; 6]) -> Result<Self, GeometryError> {
        Pose6::new(Vec3::new(a[0], a[1], a[2]), a[3], a[4], a[5])
    }

    pub fn rotation(&self) -> Mat3 {
        rotation_matrix(self.orientation)
    }
}

/// Fixed permutation applied before yaw, pitch and roll.
pub const BASE_ROTATION: Mat3 = Mat3::new([[1.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]]);

/// World-to-local rotation for the given orientation.
pub fn rotation_matrix(o: Orientation) -> Mat3 {
    let (sa, ca) = (math::sin(o.yaw), math::cos(o.yaw));
    let (sb, cb) = (math::sin(o.pitch), math::cos(o.pitch));
    let (sg, cg) = (math::sin(o.roll), math::cos(o.roll));
    let yaw = Mat3::new([[ca, 0.0, sa], [0.0, 1.0, 0.0], [-sa, 0.0, ca]]);
    let pitch = Mat3::new([[1.0, 0.0, 0.0], [0.0, cb, -sb], [0.0, sb, cb]]);
    let roll = Mat3::new([[cg, -sg, 0.0], [sg, cg, 0.0], [0.0, 0.0, 1.0]]);
    roll * pitch * yaw * BASE_ROTATION
}

/// `R (s - position)`.
pub fn world_to_local(point: Vec3, pose: &Pose6) -> Vec3 {
    pose.rotation() * (point - pose.position)
}

/// Inverse of [`world_to_local`]: `Rᵀ s + position`.
pub fn local_to_world(point: Vec3, pose: &Pose6) -> Vec3 {
    pose.rotation().transpose() * point + pose.position
}

/// Projection of `v` onto the plane with normal `normal`.
pub fn project_onto_plane(normal: Vec3, v: Vec3) -> Result<Vec3, GeometryError> {
    let nn = normal.norm_squared();
    if !(nn > 0.0) {
        return Err(GeometryError::ZeroNormal);
    }
    Ok(v - normal * (normal.dot(v) / nn))
}

/// Unit normal `(sin ρ cos η, sin ρ sin η, cos ρ)`.
pub fn normal_from_orientation(rho: f64, eta: f64) -> Vec3 {
    let sr = math::sin(rho);
    Vec3::new(sr * math::cos(eta), sr * math::sin(eta), math::cos(rho))
}

/// Inverse of [`normal_from_orientation`]; `ρ ∈ [0, π]`, `η ∈ [-π, π)` and
/// `η = 0` at the poles.
pub fn orientation_from_normal(n: Vec3) -> Result<(f64, f64), GeometryError> {
    let norm = n.norm();
    if !((norm - 1.0).abs() <= UNIT_NORM_TOLERANCE) {
        return Err(GeometryError::NonUnitNormal(norm));
    }
    let planar = math::hypot(n.x, n.y);
    let rho = math::atan2(planar, n.z);
    let eta = if planar == 0.0 { 0.0 } else { wrap_angle(math::atan2(n.y, n.x)) };
    Ok((rho, eta))
}

pub fn triangle_area(v: &[Vec3; 3]) -> f64 {
    0.5 * (v[1] - v[0]).cross(v[2] - v[0]).norm()
}

pub fn centroid(v: &[Vec3; 3]) -> Vec3 {
    (v[0] + v[1] + v[2]) / 3.0
}

/// One refined triangle piece: centroid, front-face orientation, vertices
/// and relevance weight (its area).
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionalPoint {
    /// 1-based piece index.
    pub id: usize,
    pub center: Vec3,
    pub rho: f64,
    pub eta: f64,
    /// In-plane rotation of the piece frame. Nothing downstream reads it; it
    /// is always 0.
    pub mu: f64,
    /// Unit front-face normal, evaluated from `(rho, eta)`.
    pub normal: Vec3,
    /// Counter-clockwise seen from the front face.
    pub vertices: [Vec3; 3],
    pub area: f64,
}

impl DirectionalPoint {
    fn from_triangle(id: usize, vertices: [Vec3; 3], area: f64) -> Self {
        let raw = (vertices[1] - vertices[0]).cross(vertices[2] - vertices[0]);
        // Callers only pass triangles that passed the degeneracy check.
        let unit = raw.normalized().unwrap_or(Vec3::Z);
        let (rho, eta) = orientation_from_normal(unit).unwrap_or((0.0, 0.0));
        DirectionalPoint {
            id,
            center: centroid(&vertices),
            rho,
            eta,
            mu: 0.0,
            normal: normal_from_orientation(rho, eta),
            vertices,
            area,
        }
    }

    /// Relevance weight of the piece.
    pub fn relevance(&self) -> f64 {
        self.area
    }
}

/// An ordered set of directional points with ids `1..=K`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Mesh {
    pieces: Vec<DirectionalPoint>,
    total_area: f64,
}

impl Mesh {
    pub fn pieces(&self) -> &[DirectionalPoint] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn total_area(&self) -> f64 {
        self.total_area
    }

    pub fn iter(&self) -> core::slice::Iter<'_, DirectionalPoint> {
        self.pieces.iter()
    }
}

/// Splits every triangle by recursive 1-to-4 midpoint subdivision until each
/// piece has area at most `sigma`.
///
/// Children of `(a, b, c)` with edge midpoints `ab, bc, ca` are emitted
/// depth-first in the order `(a, ab, ca)`, `(ab, b, bc)`, `(ca, bc, c)`,
/// `(ab, bc, ca)`. A piece's area is its parent's area divided by `4^depth`,
/// so the total is conserved and the `sigma` bound holds exactly.
pub fn refine_mesh(triangles: &[[Vec3; 3]], sigma: f64) -> Result<Mesh, GeometryError> {
    if !(sigma > 0.0) {
        return Err(GeometryError::InvalidSigma(sigma));
    }
    let mut pieces = Vec::with_capacity(triangles.len());
    for (index, tri) in triangles.iter().enumerate() {
        let area = triangle_area(tri);
        if !(area > MIN_TRIANGLE_AREA) || !area.is_finite() {
            return Err(GeometryError::DegenerateTriangle { index, area });
        }
        let mut depth = 0u32;
        let mut child_area = area;
        while child_area > sigma {
            child_area *= 0.25;
            depth += 1;
        }
        subdivide(*tri, depth, child_area, &mut pieces);
    }
    let total_area = pieces.iter().map(|p| p.area).sum();
    Ok(Mesh { pieces, total_area })
}

fn subdivide(v: [Vec3; 3], depth: u32, leaf_area: f64, out: &mut Vec<DirectionalPoint>) {
    if depth == 0 {
        let id = out.len() + 1;
        out.push(DirectionalPoint::from_triangle(id, v, leaf_area));
        return;
    }
    let [a, b, c] = v;
    let ab = (a + b) * 0.5;
    let bc = (b + c) * 0.5;
    let ca = (c + a) * 0.5;
    for child in [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]] {
        subdivide(child, depth - 1, leaf_area, out);
    }
}
