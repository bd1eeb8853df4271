//! The `alpha = 0` greedy path and its multifractal measure.
//!
//! When weights are slowly varying, the heaviest point always beats every
//! lighter combination, so the optimal path is built greedily: pick a
//! uniform point, then recurse in the lower-left and upper-right boxes it
//! cuts out. In two dimensions the path is the graph of a homeomorphism `G`
//! of `[0,1]`, which is the distribution function of a random measure `mu`.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distributions::WeightDistribution;
use crate::error::{domain, Error, Result};
use crate::stats::MonotonePath;

/// A greedy path resolved down to boxes of L-infinity diameter `eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyPath {
    eps: f64,
    path: MonotonePath,
}

impl GreedyPath {
    /// Wraps explicit vertices, e.g. a synthetic path with a known measure.
    ///
    /// Vertices must run from the origin to the all-ones corner, strictly
    /// increasing in every coordinate.
    pub fn from_vertices(dims: usize, vertices: &[Vec<f64>], eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(domain("eps", eps, "0 < eps < 1"));
        }
        let path = MonotonePath::new(dims, vertices)?;
        if path.len() < 2 {
            return Err(Error::Invalid("a greedy path needs both corners".into()));
        }
        if path.vertex(0).iter().any(|&c| c != 0.0) || path.vertex(path.len() - 1).iter().any(|&c| c != 1.0) {
            return Err(Error::Invalid("a greedy path must join the corners of the cube".into()));
        }
        for i in 1..path.len() {
            if path.vertex(i - 1).iter().zip(path.vertex(i)).any(|(a, b)| a >= b) {
                return Err(Error::Invalid(format!("vertex {i} does not strictly exceed vertex {}", i - 1)));
            }
        }
        Ok(Self { eps, path })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn dims(&self) -> usize {
        self.path.dims()
    }

    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        self.path.vertex(i)
    }

    pub fn path(&self) -> &MonotonePath {
        &self.path
    }
}

/// Draws a greedy path in `[0,1]^d`.
///
/// Every box of the recursion owns a generator keyed by its position in the
/// tree, so the same `rng` state produces nested paths as `eps` shrinks:
/// the vertices at a coarse `eps` are a subset of those at a finer one.
pub fn greedy_path<R: Rng + ?Sized>(eps: f64, dims: usize, rng: &mut R) -> Result<GreedyPath> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(domain("eps", eps, "0 < eps < 1"));
    }
    if dims < 2 {
        return Err(Error::Unsupported {
            dims,
            operation: "greedy_path",
        });
    }
    let root = rng.next_u64();
    let mut coords = vec![0.0; dims];
    expand(root, &vec![0.0; dims], &vec![1.0; dims], eps, &mut coords);
    coords.extend(std::iter::repeat_n(1.0, dims));
    Ok(GreedyPath {
        eps,
        path: MonotonePath::from_flat(dims, coords)?,
    })
}

fn expand(key: u64, lo: &[f64], hi: &[f64], eps: f64, out: &mut Vec<f64>) {
    let diameter = lo.iter().zip(hi).map(|(a, b)| b - a).fold(0.0, f64::max);
    if diameter < eps {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    let point: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| a + (b - a) * open_unit(&mut rng)).collect();
    let (left, right) = (rng.next_u64(), rng.next_u64());
    // a box thinner than one ulp cannot hold a strictly interior point
    if point.iter().zip(lo).zip(hi).any(|((p, a), b)| p <= a || p >= b) {
        return;
    }
    expand(left, lo, &point, eps, out);
    out.extend_from_slice(&point);
    expand(right, &point, hi, eps, out);
}

fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Indices (ascending) kept by the sequential filter: a point survives when
/// it is comparable with every point kept before it.
pub fn greedy_from_points(points: &[Vec<f64>]) -> Result<Vec<usize>> {
    let mut kept: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if let Some(first) = points.first() {
            if p.len() != first.len() {
                return Err(Error::DimensionMismatch(first.len(), p.len()));
            }
        }
        let ok = kept.iter().all(|&j| {
            let q = &points[j];
            q.iter().zip(p).all(|(a, b)| a <= b) || q.iter().zip(p).all(|(a, b)| a >= b)
        });
        if ok {
            kept.push(i);
        }
    }
    Ok(kept)
}

fn interpolate(path: &MonotonePath, axis: usize, t: f64) -> f64 {
    let other = 1 - axis;
    let n = path.len();
    // first vertex whose coordinate exceeds t
    let (mut lo, mut hi) = (0usize, n);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if path.vertex(mid)[axis] <= t {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if lo == 0 {
        return path.vertex(0)[other];
    }
    if lo == n {
        return path.vertex(n - 1)[other];
    }
    let (a, b) = (path.vertex(lo - 1), path.vertex(lo));
    let s = (t - a[axis]) / (b[axis] - a[axis]);
    a[other] + s * (b[other] - a[other])
}

fn require_plane(path: &GreedyPath, operation: &'static str) -> Result<()> {
    if path.dims() != 2 {
        return Err(Error::Unsupported {
            dims: path.dims(),
            operation,
        });
    }
    Ok(())
}

/// `G(x)`: the height of the path above `x`, linear between vertices.
pub fn measure_cdf(path: &GreedyPath, x: f64) -> Result<f64> {
    require_plane(path, "measure_cdf")?;
    if !(0.0..=1.0).contains(&x) {
        return Err(domain("x", x, "[0, 1]"));
    }
    Ok(interpolate(&path.path, 0, x))
}

/// `G^(-1)(y)`: where the path reaches height `y`.
pub fn measure_inverse(path: &GreedyPath, y: f64) -> Result<f64> {
    require_plane(path, "measure_inverse")?;
    if !(0.0..=1.0).contains(&y) {
        return Err(domain("y", y, "[0, 1]"));
    }
    Ok(interpolate(&path.path, 1, y))
}

/// `beta(q) = 2/(q+1) - 1`, the root of `m(q, .) = 1`.
pub fn beta_exponent(q: f64) -> Result<f64> {
    if !(q > -1.0) {
        return Err(domain("q", q, "q > -1"));
    }
    Ok(2.0 / (q + 1.0) - 1.0)
}

/// `m(q, theta) = E[V'^q V^theta + (1-V')^q (1-V)^theta] = 2/((1+q)(1+theta))`.
pub fn moment_function(q: f64, theta: f64) -> Result<f64> {
    if !(q > -1.0) {
        return Err(domain("q", q, "q > -1"));
    }
    if !(theta > -1.0) {
        return Err(domain("theta", theta, "theta > -1"));
    }
    Ok(2.0 / ((1.0 + q) * (1.0 + theta)))
}

/// Lower end of the support of the spectrum, `3 - 2 sqrt 2`.
pub const SPECTRUM_MIN: f64 = 3.0 - 2.0 * std::f64::consts::SQRT_2;
/// Upper end of the support of the spectrum, `3 + 2 sqrt 2`.
pub const SPECTRUM_MAX: f64 = 3.0 + 2.0 * std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumStatus {
    /// `a` lies in the support; the level set has dimension `f(a)`.
    Interior,
    /// The level set is almost surely empty.
    Empty,
}

impl SpectrumStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Interior => "interior",
            Self::Empty => "empty",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    pub a: f64,
    pub f: f64,
    pub status: SpectrumStatus,
}

/// `f(a) = sqrt(8a) - a - 1`, clipped at zero outside its support.
pub fn spectrum(a: f64) -> Result<SpectrumPoint> {
    if !(a >= 0.0) {
        return Err(domain("a", a, "a >= 0"));
    }
    let interior = (SPECTRUM_MIN..=SPECTRUM_MAX).contains(&a);
    let f = if interior { ((8.0 * a).sqrt() - a - 1.0).max(0.0) } else { 0.0 };
    Ok(SpectrumPoint {
        a,
        f,
        status: if interior { SpectrumStatus::Interior } else { SpectrumStatus::Empty },
    })
}

/// Upper end of the search interval used by [`legendre_check`].
pub const LEGENDRE_Q_MAX: f64 = 50.0;

/// `inf_q { a q + beta(q) }` over `(-1, LEGENDRE_Q_MAX]` by golden-section
/// search. Returns the infimum and the minimising `q`.
pub fn legendre_check(a: f64) -> Result<(f64, f64)> {
    if !(a > 0.0) {
        return Err(domain("a", a, "a > 0"));
    }
    let g = |q: f64| a * q + 2.0 / (q + 1.0) - 1.0;
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (-1.0 + 1e-12, LEGENDRE_Q_MAX);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut g1, mut g2) = (g(x1), g(x2));
    while hi - lo > 1e-11 {
        if g1 <= g2 {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - ratio * (hi - lo);
            g1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + ratio * (hi - lo);
            g2 = g(x2);
        }
    }
    let q = (lo + hi) / 2.0;
    Ok((g(q), q))
}

/// `E chi^2` for `chi = V'^q V^b + (1-V')^q (1-V)^b` with independent uniforms:
/// `2/((1+2q)(1+2b)) + 2 B(q+1,q+1) B(b+1,b+1)`.
pub fn chi_second_moment(q: f64, beta: f64) -> Result<f64> {
    if !(q > -0.5) {
        return Err(domain("q", q, "q > -1/2"));
    }
    if !(beta > -0.5) {
        return Err(domain("beta", beta, "beta > -1/2"));
    }
    use statrs::function::gamma::ln_gamma;
    let sym_beta = |s: f64| (2.0 * ln_gamma(s + 1.0) - ln_gamma(2.0 * s + 2.0)).exp();
    Ok(2.0 / ((1.0 + 2.0 * q) * (1.0 + 2.0 * beta)) + 2.0 * sym_beta(q) * sym_beta(beta))
}

/// Coarse local exponents `ln mu(B_r(x)) / ln(2r)` on `points` evenly
/// spaced centres in `[r, 1 - r]`, returned as `(x, exponent)` pairs.
///
/// The ball `B_r(x)` has length `2r`, so Lebesgue measure gives exactly one.
/// The path must resolve the scale: `eps <= r/16`.
pub fn coarse_local_dimensions(path: &GreedyPath, r: f64, points: usize) -> Result<Vec<(f64, f64)>> {
    require_plane(path, "coarse_local_dimensions")?;
    if !(r > 0.0 && r < 0.25) {
        return Err(domain("r", r, "0 < r < 1/4"));
    }
    if path.eps() > r / 16.0 {
        return Err(domain("r", r, "at least 16 eps"));
    }
    if points == 0 {
        return Err(domain("points", 0.0, "at least one point"));
    }
    let scale = (2.0 * r).ln();
    Ok((0..points)
        .map(|j| {
            let x = r + (1.0 - 2.0 * r) * (j as f64 + 0.5) / points as f64;
            let mass = interpolate(&path.path, 0, x + r) - interpolate(&path.path, 0, x - r);
            (x, (mass.ln() / scale).max(0.0))
        })
        .collect())
}

/// Monte Carlo frequency that the `r`-th largest of `n^2` draws exceeds the
/// sum of all smaller ones. Returns the estimate and its standard error.
///
/// Only slowly varying laws are accepted. Draws are handled as logarithms, so
/// nothing overflows.
pub fn dominance_probability<R: Rng + ?Sized>(
    dist: &WeightDistribution,
    n: usize,
    r: usize,
    reps: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    if !dist.is_slowly_varying() {
        return Err(Error::Invalid("dominance probability needs a slowly varying law".into()));
    }
    if n < 1 || r < 1 || reps < 1 {
        return Err(Error::Invalid("n, r and reps must be positive".into()));
    }
    let count = n * n;
    if r > count {
        return Err(domain("r", r as f64, "at most n^2"));
    }
    let mut hits = 0usize;
    for _ in 0..reps {
        let mut logs = dist.sample_log_weights(count, rng);
        logs.sort_by(|a, b| b.total_cmp(a));
        let pivot = logs[r - 1];
        let rest = &logs[r..];
        let dominated = match rest.first() {
            None => true,
            Some(&top) => {
                let s: f64 = rest.iter().map(|l| (l - top).exp()).sum();
                pivot > top + s.ln()
            }
        };
        hits += dominated as usize;
    }
    let p = hits as f64 / reps as f64;
    Ok((p, (p * (1.0 - p) / reps as f64).sqrt()))
}
