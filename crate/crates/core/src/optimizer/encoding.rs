//! Chromosome layout: per camera `x, y, z, yaw, pitch, roll`, with fixed
//! degrees of freedom left out of the gene string.

use alloc::vec::Vec;

use super::OptimizeError;
use crate::geometry::Pose6;
use crate::math::{FRAC_PI_2, PI};

/// Per-camera degree-of-freedom names, in gene order.
pub const GENE_NAMES: [&str; 6] = ["x", "y", "z", "alpha", "beta", "gamma"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneBound {
    /// Optimized within `[min, max]`.
    Free { min: f64, max: f64 },
    /// Held at a constant and not encoded.
    Fixed(f64),
}

impl GeneBound {
    pub fn contains(&self, v: f64) -> bool {
        match *self {
            GeneBound::Free { min, max } => min <= v && v <= max,
            GeneBound::Fixed(c) => v == c,
        }
    }

    fn range(&self) -> (f64, f64) {
        match *self {
            GeneBound::Free { min, max } => (min, max),
            GeneBound::Fixed(c) => (c, c),
        }
    }
}

/// Bounds and active mask for every camera's six degrees of freedom.
#[derive(Debug, Clone, PartialEq)]
pub struct DofSpec {
    cameras: Vec<[GeneBound; 6]>,
    /// `(6 * camera + dof, min, max)` for every active gene, in gene order.
    active: Vec<(usize, f64, f64)>,
}

impl DofSpec {
    pub fn new(cameras: Vec<[GeneBound; 6]>) -> Result<DofSpec, OptimizeError> {
        let mut active = Vec::new();
        for (c, bounds) in cameras.iter().enumerate() {
            for (d, b) in bounds.iter().enumerate() {
                let gene = 6 * c + d;
                let (lo, hi) = b.range();
                let (dom_lo, dom_hi) = match d {
                    3 => (-PI, PI),
                    4 | 5 => (-FRAC_PI_2, FRAC_PI_2),
                    _ => (f64::NEG_INFINITY, f64::INFINITY),
                };
                if !(lo.is_finite() && hi.is_finite()) || lo < dom_lo || hi > dom_hi {
                    return Err(OptimizeError::InvalidBounds { gene });
                }
                if let GeneBound::Free { min, max } = *b {
                    if !(min < max) {
                        return Err(OptimizeError::InvalidBounds { gene });
                    }
                    active.push((gene, min, max));
                }
            }
        }
        Ok(DofSpec { cameras, active })
    }

    /// The same bounds for each of `n` cameras.
    pub fn uniform(template: [GeneBound; 6], n: usize) -> Result<DofSpec, OptimizeError> {
        DofSpec::new(alloc::vec![template; n])
    }

    pub fn camera_count(&self) -> usize {
        self.cameras.len()
    }

    /// Chromosome length.
    pub fn gene_count(&self) -> usize {
        self.active.len()
    }

    pub fn camera_bounds(&self, camera: usize) -> &[GeneBound; 6] {
        &self.cameras[camera]
    }

    /// `(min, max)` of active gene `g`.
    pub fn gene_range(&self, g: usize) -> (f64, f64) {
        let (_, lo, hi) = self.active[g];
        (lo, hi)
    }

    pub fn gene_ranges(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.active.iter().map(|&(_, lo, hi)| (lo, hi))
    }
}

/// An encoded deployment.
#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome {
    pub genes: Vec<f64>,
    pub fitness: Option<f64>,
}

impl Chromosome {
    pub fn new(genes: Vec<f64>) -> Chromosome {
        Chromosome { genes, fitness: None }
    }
}

pub fn encode(poses: &[Pose6], dof: &DofSpec) -> Result<Chromosome, OptimizeError> {
    if poses.len() != dof.camera_count() {
        return Err(OptimizeError::PoseCount { expected: dof.camera_count(), found: poses.len() });
    }
    let mut genes = Vec::with_capacity(dof.gene_count());
    for (c, pose) in poses.iter().enumerate() {
        let values = pose.to_array();
        for (d, b) in dof.camera_bounds(c).iter().enumerate() {
            let v = values[d];
            if !b.contains(v) {
                return Err(OptimizeError::OutOfBounds { gene: 6 * c + d, value: v });
            }
            if matches!(b, GeneBound::Free { .. }) {
                genes.push(v);
            }
        }
    }
    Ok(Chromosome::new(genes))
}

pub fn decode(genes: &[f64], dof: &DofSpec) -> Result<Vec<Pose6>, OptimizeError> {
    if genes.len() != dof.gene_count() {
        return Err(OptimizeError::GeneCount { expected: dof.gene_count(), found: genes.len() });
    }
    let mut it = genes.iter();
    (0..dof.camera_count())
        .map(|c| {
            let mut values = [0.0; 6];
            for (d, b) in dof.camera_bounds(c).iter().enumerate() {
                values[d] = match *b {
                    GeneBound::Fixed(v) => v,
                    // length checked above
                    GeneBound::Free { .. } => *it.next().unwrap_or(&0.0),
                };
            }
            Pose6::from_array(values).map_err(OptimizeError::Geometry)
        })
        .collect()
}
