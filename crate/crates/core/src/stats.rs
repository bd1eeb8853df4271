//! Statistical utilities shared by the models and the acceptance checks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};

/// Random stream used for every replicate.
pub type Stream = ChaCha8Rng;

/// Default segment length used to densify paths for [`hausdorff_distance`].
pub const HAUSDORFF_STEP: f64 = 1e-3;

/// Counter-based stream splitting.
///
/// The master seed keys a ChaCha8 generator and the replicate index selects
/// one of its 2^64 streams. Stream 0 is reserved for direct use of the master
/// seed, so replicate `i` reads stream `i + 1`.
pub fn split_stream(master_seed: u64, replicate_index: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replicate_index.wrapping_add(1));
    rng
}

/// A sample of real values, kept sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalSample {
    values: Vec<f64>,
}

impl EmpiricalSample {
    /// Sorts `values`. NaNs are rejected.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Invalid("sample contains NaN".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Right-continuous ECDF, `#{v <= x} / len`.
    pub fn ecdf(&self, x: f64) -> f64 {
        self.values.partition_point(|&v| v <= x) as f64 / self.values.len() as f64
    }

    /// Empirical `P(sample > x)`.
    pub fn survival(&self, x: f64) -> f64 {
        1.0 - self.ecdf(x)
    }

    /// Lower empirical quantile (order statistic `ceil(p * len)`).
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if self.values.is_empty() {
            return Err(Error::Empty("sample"));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(domain("p", p, "[0, 1]"));
        }
        let n = self.values.len();
        let rank = ((p * n as f64).ceil() as usize).clamp(1, n);
        Ok(self.values[rank - 1])
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn median(&self) -> Result<f64> {
        if self.values.is_empty() {
            return Err(Error::Empty("sample"));
        }
        let n = self.values.len();
        Ok(if n % 2 == 1 {
            self.values[n / 2]
        } else {
            0.5 * (self.values[n / 2 - 1] + self.values[n / 2])
        })
    }
}

/// Two-sample Kolmogorov–Smirnov statistic: sup-distance between the ECDFs.
pub fn ks_two_sample(a: &EmpiricalSample, b: &EmpiricalSample) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Empty("KS sample"));
    }
    let (xa, xb) = (a.values(), b.values());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        // step past every copy of the smaller value so ties jump together
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Convenience wrapper taking raw value vectors.
pub fn ks_statistic(a: Vec<f64>, b: Vec<f64>) -> Result<f64> {
    ks_two_sample(&EmpiricalSample::new(a)?, &EmpiricalSample::new(b)?)
}

/// Mean of `|x|^beta`.
pub fn empirical_moment(sample: &[f64], beta: f64) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::Empty("moment sample"));
    }
    if !(beta > 0.0) {
        return Err(domain("beta", beta, "beta > 0"));
    }
    Ok(sample.iter().map(|x| x.abs().powf(beta)).sum::<f64>() / sample.len() as f64)
}

/// An ordered vertex list in `[0,1]^d`, coordinatewise nondecreasing.
///
/// Optimal lattice paths, closures of continuum chains and greedy paths are
/// all represented this way.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonePath {
    dims: usize,
    coords: Vec<f64>,
}

impl MonotonePath {
    pub fn new(dims: usize, vertices: &[Vec<f64>]) -> Result<Self> {
        let mut coords = Vec::with_capacity(dims * vertices.len());
        for v in vertices {
            if v.len() != dims {
                return Err(Error::DimensionMismatch(dims, v.len()));
            }
            coords.extend_from_slice(v);
        }
        Self::from_flat(dims, coords)
    }

    /// Builds a path from row-major coordinates (`dims` values per vertex).
    pub fn from_flat(dims: usize, coords: Vec<f64>) -> Result<Self> {
        if dims == 0 || coords.len() % dims != 0 {
            return Err(Error::Invalid(format!(
                "{} coordinates do not form {}-dimensional vertices",
                coords.len(),
                dims
            )));
        }
        if let Some(&c) = coords.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(domain("coordinate", c, "[0, 1]"));
        }
        let path = Self { dims, coords };
        for i in 1..path.len() {
            let (a, b) = (path.vertex(i - 1), path.vertex(i));
            if a.iter().zip(b).any(|(x, y)| x > y) {
                return Err(Error::Invalid(format!("vertex {i} is not above vertex {}", i - 1)));
            }
        }
        Ok(path)
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dims
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dims..(i + 1) * self.dims]
    }

    pub fn vertices(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dims)
    }

    /// Points along every segment, spaced at most `h` apart, vertices included.
    pub fn densify(&self, h: f64) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        let mut prev: Option<&[f64]> = None;
        for v in self.vertices() {
            if let Some(p) = prev {
                let len = euclid(p, v);
                let pieces = (len / h).ceil().max(1.0) as usize;
                for s in 1..pieces {
                    let t = s as f64 / pieces as f64;
                    out.push(p.iter().zip(v).map(|(a, b)| a + t * (b - a)).collect());
                }
            }
            out.push(v.to_vec());
            prev = Some(v);
        }
        out
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn point_segment_distance(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab2: f64 = a.iter().zip(b).map(|(x, y)| (y - x) * (y - x)).sum();
    if ab2 == 0.0 {
        return euclid(p, a);
    }
    let t = a
        .iter()
        .zip(b)
        .zip(p)
        .map(|((x, y), z)| (z - x) * (y - x))
        .sum::<f64>()
        / ab2;
    let t = t.clamp(0.0, 1.0);
    let proj: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect();
    euclid(p, &proj)
}

fn distance_to_path(p: &[f64], path: &MonotonePath) -> f64 {
    if path.len() == 1 {
        return euclid(p, path.vertex(0));
    }
    (1..path.len())
        .map(|i| point_segment_distance(p, path.vertex(i - 1), path.vertex(i)))
        .fold(f64::INFINITY, f64::min)
}

/// `sup_{x in from} inf_{y in to} |x - y|` over the polygonal curves.
pub fn directed_hausdorff(from: &MonotonePath, to: &MonotonePath, h: f64) -> Result<f64> {
    if from.is_empty() || to.is_empty() {
        return Err(Error::Empty("path"));
    }
    if from.dims() != to.dims() {
        return Err(Error::DimensionMismatch(from.dims(), to.dims()));
    }
    if !(h > 0.0) {
        return Err(domain("h", h, "h > 0"));
    }
    Ok(from
        .densify(h)
        .iter()
        .map(|p| distance_to_path(p, to))
        .fold(0.0, f64::max))
}

/// Hausdorff distance between two polygonal paths, in the summed form
/// `sup_P1 inf_P2 |x-y| + sup_P2 inf_P1 |x-y|`.
///
/// This is at most twice the more common max-of-directed-distances convention.
/// The sup side is evaluated on points spaced `h` apart and the inf side
/// exactly against segments, so the result is within `h` of the true value.
pub fn hausdorff_distance_with_step(p: &MonotonePath, q: &MonotonePath, h: f64) -> Result<f64> {
    Ok(directed_hausdorff(p, q, h)? + directed_hausdorff(q, p, h)?)
}

/// [`hausdorff_distance_with_step`] at the default step [`HAUSDORFF_STEP`].
pub fn hausdorff_distance(p: &MonotonePath, q: &MonotonePath) -> Result<f64> {
    hausdorff_distance_with_step(p, q, HAUSDORFF_STEP)
}
