#![allow(dead_code)]

use std::path::Path;

use camcov_core::camera::{Camera, CameraIntrinsics};
use camcov_core::geometry::{refine_mesh, Mesh, Pose6};
use camcov_core::math::Vec3;
use camcov_core::scene::Scene;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const INTRINSICS: &str = "[camera]
f = 5.0
s_u = 0.0053
s_v = 0.0053
o_u = 800.0
o_v = 600.0
w = 1600.0
h = 1200.0
d_a = 5.0
d_s = 1200.0
";

/// Config text for `object` with the given extra top-level keys and
/// sections appended.
pub fn config_text(object: &Path, sigma: f64, optimizer: &str) -> String {
    format!(
        "seed = 5
thold = 1.0
sigma = {sigma}
delta = 5.0

{INTRINSICS}
[scene]
object = {object:?}

[dof]
x = [-0.6, 0.6]
y = [-0.6, 0.6]
z = 0.7
alpha = [-3.141592653589793, 3.141592653589793]
beta = [0.0, 1.5]
gamma = 0.0

[optimizer]
{optimizer}
"
    )
}

pub fn cube_triangles(origin: Vec3, size: f64) -> Vec<[Vec3; 3]> {
    let v = |x: f64, y: f64, z: f64| origin + Vec3::new(x, y, z) * size;
    let c = [
        v(0.0, 0.0, 0.0),
        v(1.0, 0.0, 0.0),
        v(1.0, 1.0, 0.0),
        v(0.0, 1.0, 0.0),
        v(0.0, 0.0, 1.0),
        v(1.0, 0.0, 1.0),
        v(1.0, 1.0, 1.0),
        v(0.0, 1.0, 1.0),
    ];
    let quads = [[0, 3, 2, 1], [4, 5, 6, 7], [0, 1, 5, 4], [2, 3, 7, 6], [1, 2, 6, 5], [3, 0, 4, 7]];
    quads.iter().flat_map(|q| [[c[q[0]], c[q[1]], c[q[2]]], [c[q[0]], c[q[2]], c[q[3]]]]).collect()
}

pub fn plate_obj(side: f64) -> String {
    let h = side / 2.0;
    format!("v {0} {0} 0\nv {1} {0} 0\nv {1} {1} 0\nv {0} {1} 0\nf 1 2 3\nf 1 3 4\n", -h, h)
}

pub fn intrinsics() -> CameraIntrinsics {
    CameraIntrinsics { f: 5.0, s_u: 0.0053, s_v: 0.0053, o_u: 800.0, o_v: 600.0, w: 1600.0, h: 1200.0, d_a: 5.0, d_s: 1200.0 }
}

/// Pose at `pos` whose optical axis points at `target`, with roll `roll`.
pub fn aim_rolled(pos: Vec3, target: Vec3, roll: f64) -> Pose6 {
    let d = target - pos;
    let pitch = (-d.z).atan2(d.x.hypot(d.y));
    let yaw = (-d.x).atan2(d.y);
    Pose6::new(pos, yaw, pitch, roll).unwrap()
}

pub fn camera(pos: Vec3, target: Vec3) -> Camera {
    Camera::new(intrinsics(), aim_rolled(pos, target, 0.0), 5.0).unwrap()
}

pub fn unit_dir(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Up to `max_pieces` small random triangles scattered around the origin.
pub fn random_mesh(rng: &mut ChaCha8Rng, max_pieces: usize) -> Mesh {
    let k = rng.random_range(1..=max_pieces);
    let tris: Vec<[Vec3; 3]> = (0..k)
        .map(|_| {
            let c = Vec3::new(rng.random_range(-0.15..0.15), rng.random_range(-0.15..0.15), rng.random_range(-0.05..0.05));
            let a = unit_dir(rng) * 0.02;
            let b = unit_dir(rng) * 0.02;
            let e = unit_dir(rng) * 0.02;
            [c + a, c + b, c + e]
        })
        .filter(|t| camcov_core::geometry::triangle_area(t) > 1e-8)
        .collect();
    if tris.is_empty() {
        return random_mesh(rng, max_pieces);
    }
    refine_mesh(&tris, 1.0).unwrap()
}

/// Up to `max_cameras` cameras 0.55–0.8 m from the origin, aimed near it.
pub fn random_cameras(rng: &mut ChaCha8Rng, max_cameras: usize) -> Vec<Camera> {
    let n = rng.random_range(1..=max_cameras);
    (0..n)
        .map(|_| {
            let mut dir = unit_dir(rng);
            dir.z = dir.z.abs() * 0.8 + 0.1;
            let dir = dir.normalized().unwrap();
            let pos = dir * rng.random_range(0.55..0.8);
            let target = Vec3::new(rng.random_range(-0.05..0.05), rng.random_range(-0.05..0.05), 0.0);
            camera(pos, target)
        })
        .collect()
}

pub fn random_scene(seed: u64, max_cameras: usize, max_pieces: usize) -> (Scene, Vec<Camera>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mesh = random_mesh(&mut rng, max_pieces);
    let cams = random_cameras(&mut rng, max_cameras);
    (Scene::from_object(mesh), cams)
}

