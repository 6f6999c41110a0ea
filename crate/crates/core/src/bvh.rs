//! Axis-aligned bounding volume hierarchy over scene triangles, queried with
//! line segments.

use alloc::vec::Vec;

use crate::math::Vec3;

const LEAF_SIZE: usize = 4;
const PAD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub const EMPTY: Aabb = Aabb {
        min: Vec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY),
        max: Vec3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
    };

    pub fn of_triangle(v: &[Vec3; 3]) -> Aabb {
        Aabb { min: v[0].min(v[1]).min(v[2]), max: v[0].max(v[1]).max(v[2]) }
    }

    pub fn grow(&self, o: &Aabb) -> Aabb {
        Aabb { min: self.min.min(o.min), max: self.max.max(o.max) }
    }

    pub fn grow_point(&self, p: Vec3) -> Aabb {
        Aabb { min: self.min.min(p), max: self.max.max(p) }
    }

    pub fn diagonal(&self) -> f64 {
        if self.min.x > self.max.x {
            0.0
        } else {
            (self.max - self.min).norm()
        }
    }

    /// Slab test of the segment `a + t (b - a)`, `t ∈ [0, 1]`, against the
    /// box padded by 1 nm.
    fn hit_by_segment(&self, a: Vec3, inv_dir: Vec3) -> bool {
        let mut t0: f64 = 0.0;
        let mut t1: f64 = 1.0;
        for axis in 0..3 {
            let o = a.axis(axis);
            let inv = inv_dir.axis(axis);
            let lo = self.min.axis(axis) - PAD;
            let hi = self.max.axis(axis) + PAD;
            if inv.is_infinite() {
                // segment parallel to this slab
                if o < lo || o > hi {
                    return false;
                }
                continue;
            }
            let (mut near, mut far) = ((lo - o) * inv, (hi - o) * inv);
            if near > far {
                core::mem::swap(&mut near, &mut far);
            }
            t0 = t0.max(near);
            t1 = t1.min(far);
            if t0 > t1 {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone)]
struct Node {
    bounds: Aabb,
    /// Leaf: first index into `order`. Interior: index of the left child
    /// (the right child follows the left subtree).
    start: u32,
    /// Leaf: primitive count. Interior: 0, with `right` set.
    count: u32,
    right: u32,
}

#[derive(Debug, Clone, Default)]
pub struct Bvh {
    nodes: Vec<Node>,
    order: Vec<u32>,
}

impl Bvh {
    /// Builds a hierarchy over `boxes` by median splits along the widest
    /// centroid extent.
    pub fn build(boxes: &[Aabb]) -> Bvh {
        let mut bvh = Bvh { nodes: Vec::new(), order: (0..boxes.len() as u32).collect() };
        if !boxes.is_empty() {
            let centroids: Vec<Vec3> = boxes.iter().map(|b| (b.min + b.max) * 0.5).collect();
            bvh.build_node(boxes, &centroids, 0, boxes.len());
        }
        bvh
    }

    fn build_node(&mut self, boxes: &[Aabb], centroids: &[Vec3], lo: usize, hi: usize) -> u32 {
        let idx = self.nodes.len() as u32;
        let slice = &self.order[lo..hi];
        let bounds = slice.iter().fold(Aabb::EMPTY, |acc, &i| acc.grow(&boxes[i as usize]));
        self.nodes.push(Node { bounds, start: lo as u32, count: (hi - lo) as u32, right: 0 });
        if hi - lo <= LEAF_SIZE {
            return idx;
        }
        let cb = slice.iter().fold(Aabb::EMPTY, |acc, &i| acc.grow_point(centroids[i as usize]));
        let extent = cb.max - cb.min;
        let axis = if extent.x >= extent.y && extent.x >= extent.z {
            0
        } else if extent.y >= extent.z {
            1
        } else {
            2
        };
        let mid = lo + (hi - lo) / 2;
        self.order[lo..hi].sort_by(|&a, &b| {
            let ca = centroids[a as usize].axis(axis);
            let cb = centroids[b as usize].axis(axis);
            ca.total_cmp(&cb).then(a.cmp(&b))
        });
        let left = self.build_node(boxes, centroids, lo, mid);
        let right = self.build_node(boxes, centroids, mid, hi);
        let node = &mut self.nodes[idx as usize];
        node.count = 0;
        node.start = left;
        node.right = right;
        idx
    }

    /// Calls `visit` for every primitive whose box the segment `[a, b]`
    /// touches until `visit` returns `true`. Returns whether it did.
    pub fn any_on_segment(&self, a: Vec3, b: Vec3, mut visit: impl FnMut(usize) -> bool) -> bool {
        if self.nodes.is_empty() {
            return false;
        }
        let d = b - a;
        let inv = Vec3::new(1.0 / d.x, 1.0 / d.y, 1.0 / d.z);
        let mut stack: Vec<u32> = Vec::with_capacity(64);
        stack.push(0);
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n as usize];
            if !node.bounds.hit_by_segment(a, inv) {
                continue;
            }
            if node.count > 0 {
                let s = node.start as usize;
                for &prim in &self.order[s..s + node.count as usize] {
                    if visit(prim as usize) {
                        return true;
                    }
                }
            } else {
                stack.push(node.right);
                stack.push(node.start);
            }
        }
        false
    }

    pub fn bounds(&self) -> Aabb {
        self.nodes.first().map(|n| n.bounds).unwrap_or(Aabb::EMPTY)
    }
}
