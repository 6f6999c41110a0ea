//! Coverage analysis and placement optimization for camera networks
//! observing a triangulated object.
//!
//! Poses and geometry are in meters and radians in a right-handed world
//! frame with +Z up. Lens parameters are in millimeters and pixels.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bvh;
pub mod camera;
pub mod coverage;
pub mod fusion;
pub mod geometry;
pub mod math;
pub mod objective;
pub mod optimizer;
pub mod scene;
