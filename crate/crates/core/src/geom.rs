//! Flat point storage and small vector helpers.
//!
//! Everything in the crate is dimension-generic at runtime, so points are
//! kept as `&[f64]` slices into a flat row-major buffer rather than as a
//! fixed-size vector type.

use crate::error::{Error, Result};

/// A list of `d`-dimensional points stored row-major in one allocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Points {
    dim: usize,
    coords: Vec<f64>,
}

impl Points {
    pub fn new(dim: usize) -> Self {
        Self { dim, coords: Vec::new() }
    }

    pub fn with_capacity(dim: usize, n: usize) -> Self {
        Self { dim, coords: Vec::with_capacity(dim * n) }
    }

    /// Wraps an existing flat buffer; its length must be a multiple of `dim`.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("point dimension must be positive".into()));
        }
        if coords.len() % dim != 0 {
            return Err(Error::Config(format!(
                "flat buffer length {} is not a multiple of dim {}",
                coords.len(),
                dim
            )));
        }
        Ok(Self { dim, coords })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn push(&mut self, p: &[f64]) {
        debug_assert_eq!(p.len(), self.dim);
        self.coords.extend_from_slice(p);
    }

    pub fn extend(&mut self, other: &Points) {
        debug_assert_eq!(other.dim, self.dim);
        self.coords.extend_from_slice(&other.coords);
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_flat(self) -> Vec<f64> {
        self.coords
    }
}

#[inline]
pub fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0.0;
    for i in 0..a.len() {
        let d = a[i] - b[i];
        s += d * d;
    }
    s
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist_sq(a, b).sqrt()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Axis-aligned cube in world coordinates; the adapter between an arbitrary
/// bounding frame and the unit-cube frame the layout stage works in.
///
/// World point `x = origin + side * u` for `u ∈ [0,1]^d`. Radial densities
/// carry length units, so pulling one into the unit frame divides the values
/// by `side` (the Lipschitz constant is unchanged).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundingCube {
    pub origin: Vec<f64>,
    pub side: f64,
}

impl BoundingCube {
    pub fn new(origin: Vec<f64>, side: f64) -> Result<Self> {
        if !(side > 0.0) {
            return Err(Error::Config(format!("bounding cube side must be positive, got {side}")));
        }
        Ok(Self { origin, side })
    }

    pub fn unit(dim: usize) -> Self {
        Self { origin: vec![0.0; dim], side: 1.0 }
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn to_unit(&self, world: &[f64]) -> Vec<f64> {
        world
            .iter()
            .zip(&self.origin)
            .map(|(x, o)| (x - o) / self.side)
            .collect()
    }

    pub fn from_unit(&self, unit: &[f64]) -> Vec<f64> {
        unit.iter()
            .zip(&self.origin)
            .map(|(u, o)| o + self.side * u)
            .collect()
    }
}
