//! Directed percolation through independent alpha-stable Levy processes.
//!
//! `L(n, t)` is the supremum over `0 = t_0 <= ... <= t_n = t` of
//! `sum_i S^i(t_i) - S^i(t_{i-1})`. The processes are simulated by jump
//! decomposition: a compound Poisson part with every jump above `delta`, and
//! a Gaussian per time step standing in for the small jumps.

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::error::{domain, Error, Result};
use crate::exec::map_indexed;
use crate::lattice::passage_time_rect;
use crate::stats::{split_stream, EmpiricalSample};

/// Expected jumps per unit time used by [`StableSpec::with_default_delta`].
pub const DEFAULT_JUMP_RATE: f64 = 100.0;

/// Time steps per unit interval used when none is given.
pub const DEFAULT_STEPS_PER_UNIT: usize = 50;

/// Jump measure `c+ x^(-alpha-1) dx` on `x > 0` and `c- |x|^(-alpha-1) dx`
/// on `x < 0`, simulated exactly above `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StableSpec {
    pub alpha: f64,
    pub c_plus: f64,
    pub c_minus: f64,
    pub delta: f64,
}

impl StableSpec {
    pub fn new(alpha: f64, c_plus: f64, c_minus: f64, delta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(domain("alpha", alpha, "0 < alpha < 2"));
        }
        if !(c_plus > 0.0 && c_plus.is_finite()) {
            return Err(domain("c_plus", c_plus, "c_plus > 0"));
        }
        if !(c_minus >= 0.0 && c_minus.is_finite()) {
            return Err(domain("c_minus", c_minus, "c_minus >= 0"));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(domain("delta", delta, "delta > 0"));
        }
        Ok(Self {
            alpha,
            c_plus,
            c_minus,
            delta,
        })
    }

    /// `delta` chosen so that `jump_rate` jumps are expected per unit time.
    pub fn with_jump_rate(alpha: f64, c_plus: f64, c_minus: f64, jump_rate: f64) -> Result<Self> {
        if !(jump_rate > 0.0) {
            return Err(domain("jump rate", jump_rate, "positive"));
        }
        Self::new(alpha, c_plus, c_minus, 1.0)?;
        let delta = ((c_plus + c_minus) / (alpha * jump_rate)).powf(1.0 / alpha);
        Self::new(alpha, c_plus, c_minus, delta)
    }

    pub fn with_default_delta(alpha: f64, c_plus: f64, c_minus: f64) -> Result<Self> {
        Self::with_jump_rate(alpha, c_plus, c_minus, DEFAULT_JUMP_RATE)
    }

    /// Expected positive jumps above `x` per unit time, `(c+/alpha) x^(-alpha)`.
    pub fn positive_tail_rate(&self, x: f64) -> f64 {
        self.c_plus / self.alpha * x.powf(-self.alpha)
    }

    /// Expected jumps of either sign above `delta` per unit time.
    pub fn jump_rate(&self) -> f64 {
        (self.c_plus + self.c_minus) / self.alpha * self.delta.powf(-self.alpha)
    }

    /// `int_{|x| < delta} x^2 nu(dx) = (c+ + c-) delta^(2-alpha) / (2-alpha)`.
    pub fn small_jump_variance(&self) -> f64 {
        (self.c_plus + self.c_minus) * self.delta.powf(2.0 - self.alpha) / (2.0 - self.alpha)
    }

    /// Mean per unit time of the simulated process, excluding the large jumps.
    ///
    /// For `alpha < 1` the small jumps are summed without compensation, which
    /// gives a mean of `(c+ - c-) delta^(1-alpha)/(1-alpha)`. For `alpha > 1`
    /// every jump is compensated, so the large jumps carry a drift of
    /// `-(c+ - c-) delta^(1-alpha)/(alpha-1)`. At `alpha = 1` the jumps in
    /// `[delta, 1]` are compensated.
    pub fn small_jump_drift(&self) -> f64 {
        let (a, skew) = (self.alpha, self.c_plus - self.c_minus);
        if a < 1.0 {
            skew * self.delta.powf(1.0 - a) / (1.0 - a)
        } else if a > 1.0 {
            -skew * self.delta.powf(1.0 - a) / (a - 1.0)
        } else {
            -skew * (1.0 / self.delta).ln()
        }
    }

    /// `(alpha / c+)^(1/alpha) n^(-2/alpha)`.
    pub fn rescaling(&self, n: usize) -> f64 {
        (self.alpha / self.c_plus).powf(1.0 / self.alpha) * (n as f64).powf(-2.0 / self.alpha)
    }
}

/// A jump above `delta`; `time` is absolute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub time: f64,
    pub size: f64,
}

/// Increments of `n` processes over `units` unit intervals, `m` steps each.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessGrid {
    n: usize,
    units: usize,
    m: usize,
    increments: Vec<f64>,
    jumps: Vec<Vec<Jump>>,
}

impl ProcessGrid {
    /// A grid from explicit increments (row-major, one row per process).
    pub fn from_increments(n: usize, units: usize, m: usize, increments: Vec<f64>) -> Result<Self> {
        if n < 1 || units < 1 || m < 1 {
            return Err(Error::Invalid("n, units and m must be positive".into()));
        }
        if increments.len() != n * units * m {
            return Err(Error::DimensionMismatch(n * units * m, increments.len()));
        }
        Ok(Self {
            n,
            units,
            m,
            increments,
            jumps: vec![Vec::new(); n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn units(&self) -> usize {
        self.units
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn steps(&self) -> usize {
        self.units * self.m
    }

    pub fn increments(&self) -> &[f64] {
        &self.increments
    }

    /// Increments of process `i`.
    pub fn row(&self, i: usize) -> &[f64] {
        let s = self.steps();
        &self.increments[i * s..(i + 1) * s]
    }

    /// Recorded jumps of process `i`, in time order.
    pub fn jumps(&self, i: usize) -> &[Jump] {
        &self.jumps[i]
    }

    /// The same realisation with `factor` consecutive steps merged.
    pub fn coarsen(&self, factor: usize) -> Result<Self> {
        if factor == 0 || self.m % factor != 0 {
            return Err(domain("factor", factor as f64, "a divisor of m"));
        }
        let increments = self.increments.chunks_exact(factor).map(|c| c.iter().sum()).collect();
        Ok(Self {
            n: self.n,
            units: self.units,
            m: self.m / factor,
            increments,
            jumps: self.jumps.clone(),
        })
    }
}

/// `n` processes on `[0, n]` with `m` steps per unit time.
pub fn simulate_processes<R: Rng + ?Sized>(spec: &StableSpec, n: usize, m: usize, rng: &mut R) -> Result<ProcessGrid> {
    simulate_processes_over(spec, n, n, m, rng)
}

/// `n` processes on `[0, units]` with `m` steps per unit time.
///
/// Each (process, unit interval) pair reads its own stream, so processes are
/// generated in parallel with results independent of the thread count.
pub fn simulate_processes_over<R: Rng + ?Sized>(
    spec: &StableSpec,
    n: usize,
    units: usize,
    m: usize,
    rng: &mut R,
) -> Result<ProcessGrid> {
    if n < 1 || units < 1 || m < 1 {
        return Err(Error::Invalid("n, units and m must be positive".into()));
    }
    let spec = StableSpec::new(spec.alpha, spec.c_plus, spec.c_minus, spec.delta)?;
    let key = rng.next_u64();
    let poisson = Poisson::new(spec.jump_rate())
        .map_err(|e| Error::Invalid(format!("jump rate {}: {e}", spec.jump_rate())))?;
    let dt = 1.0 / m as f64;
    let mean = spec.small_jump_drift() * dt;
    let sd = (spec.small_jump_variance() * dt).sqrt();
    let p_plus = spec.c_plus / (spec.c_plus + spec.c_minus);
    let rows: Vec<(Vec<f64>, Vec<Jump>)> = map_indexed(n, |i| {
        let mut inc = Vec::with_capacity(units * m);
        let mut jumps = Vec::new();
        for u in 0..units {
            let mut s = split_stream(key, (i * units + u) as u64);
            let count = poisson.sample(&mut s) as usize;
            let start = jumps.len();
            for _ in 0..count {
                let time = u as f64 + s.random::<f64>();
                let size = spec.delta * (1.0 - s.random::<f64>()).powf(-1.0 / spec.alpha);
                let size = if s.random::<f64>() < p_plus { size } else { -size };
                jumps.push(Jump { time, size });
            }
            let base = inc.len();
            for _ in 0..m {
                let z: f64 = StandardNormal.sample(&mut s);
                inc.push(mean + sd * z);
            }
            for j in &jumps[start..] {
                let step = (((j.time - u as f64) * m as f64) as usize).min(m - 1);
                inc[base + step] += j.size;
            }
        }
        jumps.sort_by(|a, b| a.time.total_cmp(&b.time));
        (inc, jumps)
    });
    let mut increments = Vec::with_capacity(n * units * m);
    let mut jumps = Vec::with_capacity(n);
    for (inc, js) in rows {
        increments.extend(inc);
        jumps.push(js);
    }
    Ok(ProcessGrid {
        n,
        units,
        m,
        increments,
        jumps,
    })
}

/// Discretised `L(n, t)`: the supremum over partitions on the step grid.
///
/// `V(i, j)` is the best total over partitions of `[0, j]` among the first
/// `i` processes, so `V(i, j) = max(V(i-1, j), V(i, j-1) + dS^i_j)` with
/// `V(i, 0) = 0`. Finer grids can only increase the value.
pub fn directed_l(grid: &ProcessGrid) -> f64 {
    let steps = grid.steps();
    let mut v = vec![0.0f64; steps + 1];
    for i in 0..grid.n {
        let row = grid.row(i);
        for j in 1..=steps {
            let right = v[j - 1] + row[j - 1];
            v[j] = if i == 0 { right } else { v[j].max(right) };
        }
    }
    v[steps]
}

/// `(alpha / c+)^(1/alpha) n^(-2/alpha) L(n, t)`.
pub fn rescaled_l(grid: &ProcessGrid, spec: &StableSpec) -> f64 {
    spec.rescaling(grid.n) * directed_l(grid)
}

/// A lower bound for [`directed_l`] from the `top_k` largest positive jumps.
///
/// The partition that collects the most top-jump weight is found by the same
/// recursion as `L`; the bound is the true increment total along that
/// partition, summed in the order the recursion would add it.
pub fn lower_bound(grid: &ProcessGrid, top_k: usize) -> f64 {
    let (n, m, steps) = (grid.n, grid.m, grid.steps());
    let mut top: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in &grid.jumps[i] {
            if j.size > 0.0 {
                let u = j.time.floor();
                let step = (u as usize * m + (((j.time - u) * m as f64) as usize).min(m - 1)).min(steps - 1);
                top.push((j.size, i, step));
            }
        }
    }
    top.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    top.truncate(top_k);
    let mut w = vec![0.0f64; n * steps];
    for &(size, i, step) in &top {
        w[i * steps + step] += size;
    }
    // came_right[i][j]: V(i, j) was reached by a step of process i
    let mut came_right = vec![false; n * (steps + 1)];
    let mut v = vec![0.0f64; steps + 1];
    for i in 0..n {
        for j in 1..=steps {
            let right = v[j - 1] + w[i * steps + j - 1];
            if i == 0 || right > v[j] {
                v[j] = right;
                came_right[i * (steps + 1) + j] = true;
            }
        }
    }
    // ends[i] = t_{i+1}, the step at which process i hands over
    let mut ends = vec![0usize; n];
    let (mut i, mut j) = (n - 1, steps);
    loop {
        if j > 0 && came_right[i * (steps + 1) + j] {
            j -= 1;
        } else if i > 0 {
            ends[i - 1] = j;
            i -= 1;
        } else {
            break;
        }
    }
    ends[n - 1] = steps;
    let mut acc = 0.0;
    let mut start = 0;
    for (i, &end) in ends.iter().enumerate() {
        for &d in &grid.row(i)[start..end] {
            acc += d;
        }
        start = end;
    }
    acc
}

/// `X(i, j) = sup_{j-1 <= s <= t <= j} S^i_t - S^i_s` on the step grid,
/// as an `n x units` row-major array.
pub fn range_sup_weights(grid: &ProcessGrid) -> Vec<f64> {
    let mut out = Vec::with_capacity(grid.n * grid.units);
    for i in 0..grid.n {
        for block in grid.row(i).chunks_exact(grid.m) {
            let (mut s, mut low, mut best) = (0.0f64, 0.0f64, 0.0f64);
            for &d in block {
                s += d;
                best = best.max(s - low);
                low = low.min(s);
            }
            out.push(best);
        }
    }
    out
}

/// Lattice last-passage time of the range-sup weights: an upper bound for
/// [`directed_l`] up to rounding.
pub fn upper_bound(grid: &ProcessGrid) -> f64 {
    passage_time_rect(grid.n, grid.units, &range_sup_weights(grid))
}

/// `(x, x^alpha P(sample > x))` for each `x`.
pub fn tail_estimate(samples: &[f64], alpha: f64, x_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if samples.is_empty() {
        return Err(Error::Empty("samples"));
    }
    if !(alpha > 0.0) {
        return Err(domain("alpha", alpha, "alpha > 0"));
    }
    let sample = EmpiricalSample::new(samples.to_vec())?;
    Ok(x_grid
        .iter()
        .map(|&x| (x, x.max(0.0).powf(alpha) * sample.survival(x)))
        .collect())
}
