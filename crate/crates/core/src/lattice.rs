//! Discrete last-passage percolation on `{1..n}^d`.
//!
//! Sites are addressed by zero-based coordinates internally; site `(i, j)`
//! here is `(i + 1, j + 1)` in one-based lattice notation. Storage is
//! row-major with the first coordinate slowest.

use rand::Rng;

use crate::distributions::WeightDistribution;
use crate::error::{Error, Result};
use crate::stats::MonotonePath;

/// Largest side accepted by [`brute_force_passage`].
pub const BRUTE_FORCE_MAX_SIDE: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeGrid {
    dims: usize,
    side: usize,
    weights: Vec<f64>,
}

impl LatticeGrid {
    pub fn new(dims: usize, side: usize, weights: Vec<f64>) -> Result<Self> {
        if !(2..=3).contains(&dims) {
            return Err(Error::Unsupported {
                dims,
                operation: "LatticeGrid",
            });
        }
        if side < 1 {
            return Err(Error::Empty("lattice side"));
        }
        let expected = side.pow(dims as u32);
        if weights.len() != expected {
            return Err(Error::Invalid(format!(
                "{} weights for a {dims}-dimensional grid of side {side} (need {expected})",
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0)) {
            return Err(Error::Invalid(format!("negative or NaN weight {w}")));
        }
        Ok(Self { dims, side, weights })
    }

    /// Two-dimensional grid from rows (rows index the first coordinate).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Invalid("rows must form a square".into()));
        }
        Self::new(2, n, rows.concat())
    }

    /// i.i.d. weights from `dist`; overflowing draws are clamped (see
    /// [`WeightDistribution::sample_weights_clamped`]) and counted.
    pub fn random<R: Rng + ?Sized>(dims: usize, side: usize, dist: &WeightDistribution, rng: &mut R) -> Result<(Self, usize)> {
        let count = side.checked_pow(dims as u32).ok_or(Error::TooLarge {
            size: side,
            limit: usize::MAX,
        })?;
        let (weights, clamped) = dist.sample_weights_clamped(count, rng);
        Ok((Self::new(dims, side, weights)?, clamped))
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn index(&self, site: &[usize]) -> usize {
        site.iter().fold(0, |acc, &c| acc * self.side + c)
    }

    pub fn site(&self, mut index: usize) -> Vec<usize> {
        let mut s = vec![0; self.dims];
        for c in s.iter_mut().rev() {
            *c = index % self.side;
            index /= self.side;
        }
        s
    }

    pub fn weight(&self, site: &[usize]) -> f64 {
        self.weights[self.index(site)]
    }

    pub fn set_weight(&mut self, site: &[usize], w: f64) {
        assert!(w >= 0.0, "weights are nonnegative");
        let i = self.index(site);
        self.weights[i] = w;
    }

    fn stride(&self, axis: usize) -> usize {
        self.side.pow((self.dims - 1 - axis) as u32)
    }
}

/// Passage times `T(v)` for every site and the step each optimum arrived by.
#[derive(Debug, Clone, PartialEq)]
pub struct PassageField {
    dims: usize,
    side: usize,
    values: Vec<f64>,
    /// Axis of the last step into each site; `None` at the origin.
    predecessor: Vec<Option<u8>>,
}

impl PassageField {
    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, site: &[usize]) -> f64 {
        self.values[self.index(site)]
    }

    pub fn predecessor_axis(&self, site: &[usize]) -> Option<usize> {
        self.predecessor[self.index(site)].map(usize::from)
    }

    pub fn corner(&self) -> f64 {
        *self.values.last().expect("grid is nonempty")
    }

    fn index(&self, site: &[usize]) -> usize {
        site.iter().fold(0, |acc, &c| acc * self.side + c)
    }

    fn stride(&self, axis: usize) -> usize {
        self.side.pow((self.dims - 1 - axis) as u32)
    }
}

/// Single-pass DP: `T(v) = X(v) + max` over the axis predecessors of `v`.
///
/// On exact ties the predecessor along the highest axis wins, so that
/// backtracking from the corner front-loads first-axis steps.
pub fn passage_field(grid: &LatticeGrid) -> PassageField {
    let (dims, side) = (grid.dims, grid.side);
    let strides: Vec<usize> = (0..dims).map(|a| grid.stride(a)).collect();
    let mut values = vec![0.0; grid.weights.len()];
    let mut predecessor = vec![None; grid.weights.len()];
    for idx in 0..values.len() {
        let mut best: Option<(f64, u8)> = None;
        for axis in (0..dims).rev() {
            if (idx / strides[axis]) % side == 0 {
                continue;
            }
            let v = values[idx - strides[axis]];
            if best.is_none_or(|(b, _)| v > b) {
                best = Some((v, axis as u8));
            }
        }
        let (prev, axis) = match best {
            Some((v, a)) => (v, Some(a)),
            None => (0.0, None),
        };
        values[idx] = grid.weights[idx] + prev;
        predecessor[idx] = axis;
    }
    PassageField {
        dims,
        side,
        values,
        predecessor,
    }
}

/// `T^(n)`: the maximal weight of a directed corner-to-corner path.
pub fn passage_time(grid: &LatticeGrid) -> f64 {
    passage_field(grid).corner()
}

/// `T^(n) / a_(n^d)`.
pub fn rescaled_passage(grid: &LatticeGrid, dist: &WeightDistribution) -> Result<f64> {
    let sites = grid.weights.len() as u64;
    Ok(passage_time(grid) / dist.scale_constant(sites)?)
}

/// A directed lattice path from the origin, one unit step at a time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePath {
    dims: usize,
    sites: Vec<Vec<usize>>,
}

impl LatticePath {
    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn sites(&self) -> &[Vec<usize>] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// Sum of the grid weights along the path, accumulated from the origin.
    pub fn weight(&self, grid: &LatticeGrid) -> f64 {
        self.sites.iter().fold(0.0, |acc, s| acc + grid.weight(s))
    }
}

/// The optimal path to the far corner.
pub fn optimal_path(field: &PassageField) -> LatticePath {
    optimal_path_to(field, &vec![field.side - 1; field.dims])
}

/// The optimal path from the origin to `target`, by backtracking predecessors.
pub fn optimal_path_to(field: &PassageField, target: &[usize]) -> LatticePath {
    let mut site = target.to_vec();
    let mut sites = vec![site.clone()];
    while let Some(axis) = field.predecessor_axis(&site) {
        site[axis] -= 1;
        sites.push(site.clone());
    }
    sites.reverse();
    LatticePath {
        dims: field.dims,
        sites,
    }
}

/// Predecessor map of the optimal paths from the origin to every site.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicTree {
    dims: usize,
    side: usize,
    parent: Vec<Option<usize>>,
}

impl GeodesicTree {
    /// Parent of the site with flat index `index`; `None` for the root.
    pub fn parent(&self, index: usize) -> Option<usize> {
        self.parent[index]
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn site(&self, mut index: usize) -> Vec<usize> {
        let mut s = vec![0; self.dims];
        for c in s.iter_mut().rev() {
            *c = index % self.side;
            index /= self.side;
        }
        s
    }

    /// `(child, parent)` site pairs in flat-index order.
    pub fn edges(&self) -> impl Iterator<Item = (Vec<usize>, Vec<usize>)> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|p| (self.site(c), self.site(p))))
    }
}

pub fn geodesic_tree(field: &PassageField) -> GeodesicTree {
    let parent = field
        .predecessor
        .iter()
        .enumerate()
        .map(|(i, p)| p.map(|axis| i - field.stride(axis as usize)))
        .collect();
    GeodesicTree {
        dims: field.dims,
        side: field.side,
        parent,
    }
}

/// Exhaustive maximum over all directed paths (two-dimensional, side at most 8).
pub fn brute_force_passage(grid: &LatticeGrid) -> Result<f64> {
    if grid.dims != 2 {
        return Err(Error::Unsupported {
            dims: grid.dims,
            operation: "brute_force_passage",
        });
    }
    if grid.side > BRUTE_FORCE_MAX_SIDE {
        return Err(Error::TooLarge {
            size: grid.side,
            limit: BRUTE_FORCE_MAX_SIDE,
        });
    }
    fn walk(grid: &LatticeGrid, i: usize, j: usize, acc: f64, best: &mut f64) {
        let acc = acc + grid.weights[i * grid.side + j];
        let last = grid.side - 1;
        if i == last && j == last {
            *best = best.max(acc);
            return;
        }
        if i < last {
            walk(grid, i + 1, j, acc, best);
        }
        if j < last {
            walk(grid, i, j + 1, acc, best);
        }
    }
    let mut best = f64::NEG_INFINITY;
    walk(grid, 0, 0, 0.0, &mut best);
    Ok(best)
}

/// Scales lattice sites by `1/n` into the unit cube (site `c` maps to `(c+1)/n`).
pub fn path_to_unit_cube(path: &LatticePath, n: usize) -> Result<MonotonePath> {
    let coords = path
        .sites
        .iter()
        .flat_map(|s| s.iter().map(|&c| (c + 1) as f64 / n as f64))
        .collect();
    MonotonePath::from_flat(path.dims, coords)
}

/// Last-passage time over a `rows x cols` rectangle of row-major weights.
pub fn passage_time_rect(rows: usize, cols: usize, weights: &[f64]) -> f64 {
    assert_eq!(weights.len(), rows * cols);
    let mut row = vec![f64::NEG_INFINITY; cols];
    for i in 0..rows {
        let mut left = f64::NEG_INFINITY;
        for j in 0..cols {
            let up = row[j];
            let prev = if i == 0 && j == 0 { 0.0 } else { up.max(left) };
            left = weights[i * cols + j] + prev;
            row[j] = left;
        }
    }
    row[cols - 1]
}
