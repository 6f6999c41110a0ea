//! Pinhole intrinsics, the derived view frustum, and the per-point FOV, focus
//! and resolution predicates.
//!
//! Intrinsics and camera-frame coordinates are in millimeters and pixels.
//! World positions are in meters; [`Camera::to_camera_frame`] is the only
//! place where meters become millimeters.

use crate::geometry::Pose6;
use crate::math::{self, Mat3, Vec3, FRAC_PI_2};

/// Millimeters per meter.
pub const MM_PER_M: f64 = 1000.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CameraError {
    #[error("intrinsic parameter {name} = {value} is invalid: {reason}")]
    InvalidIntrinsic { name: &'static str, value: f64, reason: &'static str },
    #[error("circle of confusion must be positive, got {0}")]
    InvalidDelta(f64),
    #[error("FOV angle {name} = {value} rad is outside [0, pi/2)")]
    InvalidFovAngle { name: &'static str, value: f64 },
    #[error("depth {0} mm is not in front of the camera")]
    NonPositiveDepth(f64),
}

/// Pinhole intrinsic parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraIntrinsics {
    /// Focal length (mm).
    pub f: f64,
    /// Horizontal pixel size (mm/pixel).
    pub s_u: f64,
    /// Vertical pixel size (mm/pixel).
    pub s_v: f64,
    /// Principal point (pixel).
    pub o_u: f64,
    pub o_v: f64,
    /// Image size (pixel).
    pub w: f64,
    pub h: f64,
    /// Effective aperture diameter (mm).
    pub d_a: f64,
    /// Focusing distance (mm).
    pub d_s: f64,
}

impl CameraIntrinsics {
    pub fn validate(&self) -> Result<(), CameraError> {
        let positive = [
            ("f", self.f),
            ("s_u", self.s_u),
            ("s_v", self.s_v),
            ("o_u", self.o_u),
            ("o_v", self.o_v),
            ("w", self.w),
            ("h", self.h),
            ("d_a", self.d_a),
            ("d_s", self.d_s),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(CameraError::InvalidIntrinsic { name, value, reason: "must be positive and finite" });
            }
        }
        if !(self.d_s > self.f) {
            return Err(CameraError::InvalidIntrinsic {
                name: "d_s",
                value: self.d_s,
                reason: "focusing distance must exceed the focal length",
            });
        }
        if !(self.o_u < self.w) {
            return Err(CameraError::InvalidIntrinsic { name: "o_u", value: self.o_u, reason: "must lie inside the image width" });
        }
        if !(self.o_v < self.h) {
            return Err(CameraError::InvalidIntrinsic { name: "o_v", value: self.o_v, reason: "must lie inside the image height" });
        }
        Ok(())
    }

    pub fn min_pixel(&self) -> f64 {
        self.s_u.min(self.s_v)
    }

    pub fn max_pixel(&self) -> f64 {
        self.s_u.max(self.s_v)
    }

    fn fov_tangents(&self) -> [f64; 4] {
        [
            self.o_u * self.s_u / self.f,
            (self.w - self.o_u) * self.s_u / self.f,
            self.o_v * self.s_v / self.f,
            (self.h - self.o_v) * self.s_v / self.f,
        ]
    }
}

/// FOV half-angles `(left, right, top, bottom)` from the principal point and
/// sensor extents.
pub fn derive_fov_angles(intr: &CameraIntrinsics) -> FovAngles {
    let [l, r, t, b] = intr.fov_tangents();
    FovAngles { left: math::atan(l), right: math::atan(r), top: math::atan(t), bottom: math::atan(b) }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FovAngles {
    pub left: f64,
    pub right: f64,
    pub top: f64,
    pub bottom: f64,
}

impl FovAngles {
    /// Largest absolute difference between corresponding angles.
    pub fn max_abs_diff(&self, o: &FovAngles) -> f64 {
        (self.left - o.left)
            .abs()
            .max((self.right - o.right).abs())
            .max((self.top - o.top).abs())
            .max((self.bottom - o.bottom).abs())
    }
}

/// Near and far limits (mm) of the in-focus band for a circle of confusion
/// of `delta` pixels. The far limit is `+inf` once the lens is focused at or
/// beyond its hyperfocal distance.
pub fn depth_of_field(intr: &CameraIntrinsics, delta: f64) -> Result<(f64, f64), CameraError> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(CameraError::InvalidDelta(delta));
    }
    let num = intr.d_a * intr.d_s * intr.f;
    let blur = delta * intr.min_pixel() * (intr.d_s - intr.f);
    let near = num / (intr.d_a * intr.f + blur);
    let far_den = intr.d_a * intr.f - blur;
    let far = if far_den > 0.0 { num / far_den } else { f64::INFINITY };
    Ok((near, far))
}

/// Resolution (pixel/mm) at depth `z_local` (mm) along the optical axis.
pub fn resolution_criterion(z_local: f64, intr: &CameraIntrinsics) -> Result<f64, CameraError> {
    if !(z_local > 0.0) {
        return Err(CameraError::NonPositiveDepth(z_local));
    }
    Ok(resolution_unchecked(z_local, intr))
}

#[inline]
pub(crate) fn resolution_unchecked(z_local: f64, intr: &CameraIntrinsics) -> f64 {
    intr.f * intr.d_s / ((intr.d_s - intr.f) * z_local * intr.max_pixel())
}

/// FOV pyramid cut by the depth-of-field band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frustum {
    angles: FovAngles,
    tangents: [f64; 4],
    /// Near limit (mm).
    pub d_n: f64,
    /// Far limit (mm), possibly `+inf`.
    pub d_f: f64,
    /// Circle of confusion (pixel).
    pub delta: f64,
}

impl Frustum {
    pub fn from_intrinsics(intr: &CameraIntrinsics, delta: f64) -> Result<Self, CameraError> {
        intr.validate()?;
        let (d_n, d_f) = depth_of_field(intr, delta)?;
        Ok(Frustum { angles: derive_fov_angles(intr), tangents: intr.fov_tangents(), d_n, d_f, delta })
    }

    /// Frustum with explicitly supplied FOV angles instead of derived ones.
    pub fn with_angles(intr: &CameraIntrinsics, delta: f64, angles: FovAngles) -> Result<Self, CameraError> {
        intr.validate()?;
        let named = [("phi_l", angles.left), ("phi_r", angles.right), ("phi_t", angles.top), ("phi_b", angles.bottom)];
        for (name, value) in named {
            if !(0.0..FRAC_PI_2).contains(&value) {
                return Err(CameraError::InvalidFovAngle { name, value });
            }
        }
        let (d_n, d_f) = depth_of_field(intr, delta)?;
        let tangents = [
            libm::tan(angles.left),
            libm::tan(angles.right),
            libm::tan(angles.top),
            libm::tan(angles.bottom),
        ];
        Ok(Frustum { angles, tangents, d_n, d_f, delta })
    }

    pub fn angles(&self) -> FovAngles {
        self.angles
    }
}

/// FOV test in the camera frame. Boundaries are inclusive; `z = 0` is outside.
pub fn in_fov(p: Vec3, frustum: &Frustum) -> bool {
    if !(p.z > 0.0) {
        return false;
    }
    let [tl, tr, tt, tb] = frustum.tangents;
    let u = p.x / p.z;
    let v = p.y / p.z;
    -tl <= u && u <= tr && -tt <= v && v <= tb
}

/// Inclusive depth-of-field test.
pub fn is_focused(z_local: f64, frustum: &Frustum) -> bool {
    frustum.d_n <= z_local && z_local <= frustum.d_f
}

/// A posed camera.
#[derive(Debug, Clone, PartialEq)]
pub struct Camera {
    pub intrinsics: CameraIntrinsics,
    pub frustum: Frustum,
    pose: Pose6,
    rotation: Mat3,
}

impl Camera {
    pub fn new(intrinsics: CameraIntrinsics, pose: Pose6, delta: f64) -> Result<Self, CameraError> {
        let frustum = Frustum::from_intrinsics(&intrinsics, delta)?;
        Ok(Camera::with_frustum(intrinsics, frustum, pose))
    }

    pub fn with_frustum(intrinsics: CameraIntrinsics, frustum: Frustum, pose: Pose6) -> Self {
        Camera { intrinsics, frustum, rotation: pose.rotation(), pose }
    }

    pub fn pose(&self) -> &Pose6 {
        &self.pose
    }

    /// Optical center in world coordinates (m).
    pub fn position(&self) -> Vec3 {
        self.pose.position
    }

    /// The same camera moved to `pose`.
    pub fn moved_to(&self, pose: Pose6) -> Camera {
        Camera::with_frustum(self.intrinsics, self.frustum, pose)
    }

    /// World point (m) to camera-frame coordinates (mm).
    pub fn to_camera_frame(&self, world: Vec3) -> Vec3 {
        (self.rotation * (world - self.pose.position)) * MM_PER_M
    }
}
