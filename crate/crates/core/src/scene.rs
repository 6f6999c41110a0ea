//! The object to cover, surrounding obstacles, and camera placement
//! exclusion zones, with a shared acceleration structure for segment tests.

use alloc::vec::Vec;

use crate::bvh::{Aabb, Bvh};
use crate::geometry::Mesh;
use crate::math::Vec3;

/// Which mesh a scene triangle came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleSource {
    /// Piece index (0-based) in the object mesh.
    Object(usize),
    /// Obstacle mesh index, then triangle index in that mesh.
    Obstacle(usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneTriangle {
    pub vertices: [Vec3; 3],
    pub source: TriangleSource,
}

/// Closed volume in which no camera may be placed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ForbiddenRegion {
    /// Axis-aligned box, `min <= p <= max` componentwise.
    Box { min: Vec3, max: Vec3 },
    /// Vertical cylinder around `(center_x, center_y)` spanning
    /// `z_min..=z_max`.
    Cylinder { center_x: f64, center_y: f64, radius: f64, z_min: f64, z_max: f64 },
}

impl ForbiddenRegion {
    /// Boundary points count as inside.
    pub fn contains(&self, p: Vec3) -> bool {
        match *self {
            ForbiddenRegion::Box { min, max } => {
                min.x <= p.x && p.x <= max.x && min.y <= p.y && p.y <= max.y && min.z <= p.z && p.z <= max.z
            }
            ForbiddenRegion::Cylinder { center_x, center_y, radius, z_min, z_max } => {
                let dx = p.x - center_x;
                let dy = p.y - center_y;
                z_min <= p.z && p.z <= z_max && dx * dx + dy * dy <= radius * radius
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct Scene {
    object: Mesh,
    obstacles: Vec<Mesh>,
    forbidden: Vec<ForbiddenRegion>,
    triangles: Vec<SceneTriangle>,
    bvh: Bvh,
}

impl Scene {
    pub fn new(object: Mesh, obstacles: Vec<Mesh>, forbidden: Vec<ForbiddenRegion>) -> Scene {
        let mut triangles: Vec<SceneTriangle> = object
            .iter()
            .enumerate()
            .map(|(k, p)| SceneTriangle { vertices: p.vertices, source: TriangleSource::Object(k) })
            .collect();
        for (m, mesh) in obstacles.iter().enumerate() {
            triangles.extend(mesh.iter().enumerate().map(|(t, p)| SceneTriangle {
                vertices: p.vertices,
                source: TriangleSource::Obstacle(m, t),
            }));
        }
        let boxes: Vec<Aabb> = triangles.iter().map(|t| Aabb::of_triangle(&t.vertices)).collect();
        let bvh = Bvh::build(&boxes);
        Scene { object, obstacles, forbidden, triangles, bvh }
    }

    /// A scene with only the object to cover.
    pub fn from_object(object: Mesh) -> Scene {
        Scene::new(object, Vec::new(), Vec::new())
    }

    pub fn object(&self) -> &Mesh {
        &self.object
    }

    pub fn obstacles(&self) -> &[Mesh] {
        &self.obstacles
    }

    pub fn forbidden_regions(&self) -> &[ForbiddenRegion] {
        &self.forbidden
    }

    pub fn triangles(&self) -> &[SceneTriangle] {
        &self.triangles
    }

    /// Bounding box of every triangle in the scene.
    pub fn bounds(&self) -> Aabb {
        self.bvh.bounds()
    }

    /// Calls `visit` with every scene triangle whose bounding box the segment
    /// `[a, b]` touches, stopping at the first `true`.
    pub fn any_triangle_near_segment(&self, a: Vec3, b: Vec3, mut visit: impl FnMut(&SceneTriangle) -> bool) -> bool {
        self.bvh.any_on_segment(a, b, |i| visit(&self.triangles[i]))
    }

    /// Parity ray test against obstacle mesh `index`, treated as a closed
    /// surface.
    pub fn inside_obstacle(&self, index: usize, p: Vec3) -> bool {
        // Skewed direction so rays rarely graze edges of axis-aligned meshes.
        const DIR: Vec3 = Vec3::new(0.311_672_9, 0.585_022_1, 0.748_730_4);
        let reach = self.bounds().diagonal() * 2.0 + 1.0;
        let b = p + DIR * reach;
        let mut crossings = 0usize;
        self.bvh.any_on_segment(p, b, |i| {
            let tri = &self.triangles[i];
            if tri.source_obstacle() == Some(index) && crate::coverage::segment_hit_parameter(p, b, &tri.vertices).is_some() {
                crossings += 1;
            }
            false
        });
        crossings % 2 == 1
    }

    pub fn inside_any_obstacle(&self, p: Vec3) -> bool {
        (0..self.obstacles.len()).any(|m| self.inside_obstacle(m, p))
    }
}

impl SceneTriangle {
    fn source_obstacle(&self) -> Option<usize> {
        match self.source {
            TriangleSource::Obstacle(m, _) => Some(m),
            TriangleSource::Object(_) => None,
        }
    }
}
