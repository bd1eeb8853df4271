//! The continuous last-passage model.
//!
//! Two equivalent constructions are provided. [`sample_continuum`] places the
//! `k` largest limiting weights at i.i.d. uniform locations in the unit cube;
//! [`sample_prm`] draws a Poisson random measure with intensity
//! `dx dy alpha z^(-alpha-1) dz` above a threshold `z_min` in a box, which
//! carries the whole field `T(x, y)`.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::chains::{chain_value_sorted, max_weight_chain, ChainResult, WeightedPointSet};
use crate::distributions::{positive_exp1, LimitWeightSequence};
use crate::error::{domain, Error, Result};

/// Expected number of retained points per unit area used when no budget is given.
pub const DEFAULT_POINT_BUDGET: f64 = 5e4;

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumSample {
    alpha: f64,
    weights: LimitWeightSequence,
    set: WeightedPointSet,
}

impl ContinuumSample {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn points(&self) -> &WeightedPointSet {
        &self.set
    }

    pub fn weights(&self) -> &LimitWeightSequence {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

/// `k` uniform locations in `[0,1]^d` carrying `M_1 > ... > M_k`.
///
/// For each point the exponential increment is drawn before its location,
/// so a larger `k` on the same stream extends a smaller one.
pub fn sample_continuum<R: Rng + ?Sized>(k: usize, alpha: f64, dims: usize, rng: &mut R) -> Result<ContinuumSample> {
    if k < 1 {
        return Err(domain("k", k as f64, "k >= 1"));
    }
    if dims < 2 {
        return Err(Error::Unsupported {
            dims,
            operation: "sample_continuum",
        });
    }
    if !(alpha > 0.0 && alpha < dims as f64) {
        return Err(domain("alpha", alpha, "0 < alpha < d"));
    }
    let mut exps = Vec::with_capacity(k);
    let mut coords = Vec::with_capacity(k * dims);
    for _ in 0..k {
        exps.push(positive_exp1(rng));
        for _ in 0..dims {
            coords.push(rng.random::<f64>());
        }
    }
    let weights = LimitWeightSequence::from_exponentials(alpha, &exps)?;
    let set = WeightedPointSet::from_flat(dims, coords, weights.weights().to_vec())?;
    Ok(ContinuumSample { alpha, weights, set })
}

/// `T_k`, the best chain through the `k` heaviest points.
pub fn truncated_t(sample: &ContinuumSample) -> (f64, ChainResult) {
    let chain = max_weight_chain(&sample.set);
    (chain.total, chain)
}

/// `T_k` for every `k` in `ks` from one sample (each `k` at most its length).
pub fn truncated_t_ladder(sample: &ContinuumSample, ks: &[usize]) -> Vec<f64> {
    ks.iter().map(|&k| max_weight_chain(&sample.set.prefix(k)).total).collect()
}

/// A point of the Poisson random measure: location `(x, y)`, weight `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrmPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// One realisation of the measure restricted to `[0,cx] x [0,cy] x [z_min, inf)`.
///
/// Points are stored sorted by `(x, y)`; `y_rank` holds their dense ranks in `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrmSample {
    box_x: f64,
    box_y: f64,
    z_min: f64,
    alpha: f64,
    points: Vec<PrmPoint>,
    y_rank: Vec<usize>,
    max_rank: usize,
}

impl PrmSample {
    fn from_points(box_x: f64, box_y: f64, z_min: f64, alpha: f64, mut points: Vec<PrmPoint>) -> Self {
        points.sort_unstable_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        let ys: Vec<f64> = points.iter().map(|p| p.y).collect();
        let mut order: Vec<usize> = (0..ys.len()).collect();
        order.sort_unstable_by(|&a, &b| ys[a].total_cmp(&ys[b]).then(a.cmp(&b)));
        let mut y_rank = vec![0; ys.len()];
        let mut r = 0;
        for (pos, &i) in order.iter().enumerate() {
            if pos == 0 || ys[order[pos - 1]] != ys[i] {
                r += 1;
            }
            y_rank[i] = r;
        }
        Self {
            box_x,
            box_y,
            z_min,
            alpha,
            points,
            y_rank,
            max_rank: r,
        }
    }

    pub fn box_size(&self) -> (f64, f64) {
        (self.box_x, self.box_y)
    }

    pub fn z_min(&self) -> f64 {
        self.z_min
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn points(&self) -> &[PrmPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The same realisation with every point below `z_min` removed.
    pub fn thinned(&self, z_min: f64) -> Result<Self> {
        if z_min < self.z_min {
            return Err(domain("z_min", z_min, "at least the sampled threshold"));
        }
        let kept = self.points.iter().copied().filter(|p| p.z >= z_min).collect();
        Ok(Self::from_points(self.box_x, self.box_y, z_min, self.alpha, kept))
    }

    /// Largest single weight dominated by `(x, y)`.
    pub fn max_dominated(&self, x: f64, y: f64) -> f64 {
        self.points
            .iter()
            .filter(|p| p.x <= x && p.y <= y)
            .map(|p| p.z)
            .fold(0.0, f64::max)
    }

    fn value_at(&self, qx: f64, qy: f64) -> f64 {
        let end = self.points.partition_point(|p| p.x <= qx);
        let (mut ranks, mut ws) = (Vec::new(), Vec::new());
        for (p, &r) in self.points[..end].iter().zip(&self.y_rank) {
            if p.y <= qy {
                ranks.push(r);
                ws.push(p.z);
            }
        }
        chain_value_sorted(&ranks, &ws, self.max_rank)
    }

    fn check_query(&self, x: f64, y: f64) -> Result<()> {
        if !(0.0..=self.box_x).contains(&x) {
            return Err(domain("query x", x, "inside the sampled box"));
        }
        if !(0.0..=self.box_y).contains(&y) {
            return Err(domain("query y", y, "inside the sampled box"));
        }
        Ok(())
    }
}

/// Threshold whose expected retained count per unit area is `budget`.
pub fn z_min_for_budget(budget: f64, alpha: f64) -> Result<f64> {
    if !(budget > 0.0) {
        return Err(domain("budget", budget, "budget > 0"));
    }
    if !(alpha > 0.0) {
        return Err(domain("alpha", alpha, "alpha > 0"));
    }
    Ok(budget.powf(-1.0 / alpha))
}

/// Poisson random measure on `[0,cx] x [0,cy]` above `z_min`.
///
/// The count is Poisson with mean `cx cy z_min^(-alpha)`; each point is
/// uniform in the box with weight `z_min U^(-1/alpha)`.
pub fn sample_prm<R: Rng + ?Sized>(box_size: (f64, f64), z_min: f64, alpha: f64, rng: &mut R) -> Result<PrmSample> {
    let (cx, cy) = box_size;
    if !(cx > 0.0 && cx.is_finite()) {
        return Err(domain("box x", cx, "positive"));
    }
    if !(cy > 0.0 && cy.is_finite()) {
        return Err(domain("box y", cy, "positive"));
    }
    if !(z_min > 0.0) {
        return Err(domain("z_min", z_min, "z_min > 0"));
    }
    if !(alpha > 0.0 && alpha < 2.0) {
        return Err(domain("alpha", alpha, "0 < alpha < 2"));
    }
    let mean = cx * cy * z_min.powf(-alpha);
    let count = if mean > 0.0 {
        let poisson = Poisson::new(mean).map_err(|e| Error::Invalid(format!("Poisson mean {mean}: {e}")))?;
        poisson.sample(rng) as usize
    } else {
        0
    };
    let points = (0..count)
        .map(|_| {
            let x = rng.random::<f64>() * cx;
            let y = rng.random::<f64>() * cy;
            let u = 1.0 - rng.random::<f64>();
            PrmPoint {
                x,
                y,
                z: z_min * u.powf(-1.0 / alpha),
            }
        })
        .collect();
    Ok(PrmSample::from_points(cx, cy, z_min, alpha, points))
}

/// `T(x, y)` at each query, all from the one realisation.
pub fn field_at(prm: &PrmSample, queries: &[(f64, f64)]) -> Result<Vec<f64>> {
    queries
        .iter()
        .map(|&(x, y)| {
            prm.check_query(x, y)?;
            Ok(prm.value_at(x, y))
        })
        .collect()
}

/// `Theta(u, v) = exp(-(u+v)/alpha) T(e^u, e^v)`.
pub fn theta_at(prm: &PrmSample, queries: &[(f64, f64)]) -> Result<Vec<f64>> {
    queries
        .iter()
        .map(|&(u, v)| {
            let (x, y) = (u.exp(), v.exp());
            prm.check_query(x, y)?;
            Ok((-(u + v) / prm.alpha).exp() * prm.value_at(x, y))
        })
        .collect()
}

/// Coupled values of the heavy-tailed Airy process `H_u = T(e^u, e^-u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AiryTrace {
    pub tau: f64,
    pub u_grid: Vec<f64>,
    pub values: Vec<f64>,
}

/// One realisation of `H` on `u_grid`, from a measure on `[0, e^tau]^2`.
pub fn airy_trace<R: Rng + ?Sized>(tau: f64, u_grid: &[f64], z_min: f64, alpha: f64, rng: &mut R) -> Result<AiryTrace> {
    let prm = airy_measure(tau, u_grid, z_min, alpha, rng)?;
    Ok(AiryTrace {
        tau,
        u_grid: u_grid.to_vec(),
        values: airy_values(&prm, u_grid)?,
    })
}

/// The measure behind [`airy_trace`], exposed for diagnostics.
pub fn airy_measure<R: Rng + ?Sized>(tau: f64, u_grid: &[f64], z_min: f64, alpha: f64, rng: &mut R) -> Result<PrmSample> {
    if !(tau >= 0.0 && tau.is_finite()) {
        return Err(domain("tau", tau, "tau >= 0"));
    }
    if let Some(&u) = u_grid.iter().find(|u| !(u.abs() <= tau)) {
        return Err(domain("u", u, "[-tau, tau]"));
    }
    let side = tau.exp();
    sample_prm((side, side), z_min, alpha, rng)
}

/// `H_u` for each `u` on an already sampled measure.
pub fn airy_values(prm: &PrmSample, u_grid: &[f64]) -> Result<Vec<f64>> {
    // e^u e^-u can overshoot the box edge by an ulp at u = +-tau
    let (bx, by) = prm.box_size();
    let queries: Vec<(f64, f64)> = u_grid.iter().map(|u| (u.exp().min(bx), (-u).exp().min(by))).collect();
    field_at(prm, &queries)
}
