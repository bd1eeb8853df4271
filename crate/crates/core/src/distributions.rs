//! Weight distributions and the limiting ordered-weight sequence.

use rand::Rng;
use rand_distr::Exp1;
use statrs::function::gamma::ln_gamma;

use crate::error::{domain, Error, Result};

/// Site-weight law `F`, sampled by inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightDistribution {
    /// `1 - F(x) = x^(-alpha)` for `x >= 1`.
    Pareto { alpha: f64 },
    /// `1 - F(x) = exp(-x / mean)`.
    Exponential { mean: f64 },
    /// `1 - F(x) = 1 / ln x` for `x >= e`; a slowly varying (`alpha = 0`) tail.
    SlowlyVaryingLog,
}

impl WeightDistribution {
    pub fn pareto(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(domain("alpha", alpha, "alpha > 0"));
        }
        Ok(Self::Pareto { alpha })
    }

    pub fn exponential(mean: f64) -> Result<Self> {
        if !(mean > 0.0 && mean.is_finite()) {
            return Err(domain("mean", mean, "mean > 0"));
        }
        Ok(Self::Exponential { mean })
    }

    pub fn is_slowly_varying(&self) -> bool {
        matches!(self, Self::SlowlyVaryingLog)
    }

    /// `quantile(0)`.
    pub fn minimum(&self) -> f64 {
        match self {
            Self::Pareto { .. } => 1.0,
            Self::Exponential { .. } => 0.0,
            Self::SlowlyVaryingLog => std::f64::consts::E,
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Self::Pareto { alpha } if x >= 1.0 => -(-alpha * x.ln()).exp_m1(),
            Self::Exponential { mean } if x >= 0.0 => -(-x / mean).exp_m1(),
            Self::SlowlyVaryingLog if x >= std::f64::consts::E => 1.0 - 1.0 / x.ln(),
            _ => 0.0,
        }
    }

    /// `F^(-1)(u)` for `u` in `[0, 1)`. May return `+inf` where the closed
    /// form overflows (slowly varying family, `u > 1 - 1/709`).
    pub fn quantile(&self, u: f64) -> Result<f64> {
        check_unit(u)?;
        Ok(self.quantile_unchecked(u))
    }

    fn quantile_unchecked(&self, u: f64) -> f64 {
        match *self {
            Self::Pareto { alpha } => (-(-u).ln_1p() / alpha).exp(),
            Self::Exponential { mean } => -mean * (-u).ln_1p(),
            Self::SlowlyVaryingLog => (1.0 / (1.0 - u)).exp(),
        }
    }

    /// `ln F^(-1)(u)`, finite for every `u < 1`.
    pub fn log_quantile(&self, u: f64) -> Result<f64> {
        check_unit(u)?;
        Ok(match *self {
            Self::Pareto { alpha } => -(-u).ln_1p() / alpha,
            Self::Exponential { mean } => (-mean * (-u).ln_1p()).ln(),
            Self::SlowlyVaryingLog => 1.0 / (1.0 - u),
        })
    }

    /// `a_N = F^(-1)(1 - 1/N)`, the scale of the largest of `N` draws.
    pub fn scale_constant(&self, n: u64) -> Result<f64> {
        if n < 1 {
            return Err(domain("N", 0.0, "N >= 1"));
        }
        if n == 1 {
            return Ok(self.minimum());
        }
        Ok(match *self {
            // exact form avoids the rounding of 1 - 1/N
            Self::Pareto { alpha } => (n as f64).powf(1.0 / alpha),
            Self::Exponential { mean } => mean * (n as f64).ln(),
            Self::SlowlyVaryingLog => (n as f64).exp(),
        })
    }

    /// `count` i.i.d. draws `quantile(U)`. Overflowing draws are clamped to
    /// `f64::MAX`; the second value counts them.
    pub fn sample_weights_clamped<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> (Vec<f64>, usize) {
        let mut clamped = 0;
        let values = (0..count)
            .map(|_| {
                let x = self.quantile_unchecked(rng.random::<f64>());
                if x.is_finite() {
                    x
                } else {
                    clamped += 1;
                    f64::MAX
                }
            })
            .collect();
        (values, clamped)
    }

    pub fn sample_weights<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<f64> {
        self.sample_weights_clamped(count, rng).0
    }

    /// `count` draws of `ln X`, for laws whose samples overflow.
    pub fn sample_log_weights<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<f64> {
        (0..count)
            .map(|_| self.log_quantile(rng.random::<f64>()).expect("u in [0,1)"))
            .collect()
    }
}

fn check_unit(u: f64) -> Result<()> {
    if (0.0..1.0).contains(&u) {
        Ok(())
    } else {
        Err(domain("u", u, "[0, 1)"))
    }
}

/// Limiting order statistics `M_i = (W_1 + ... + W_i)^(-1/alpha)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitWeightSequence {
    alpha: f64,
    weights: Vec<f64>,
    cumulative: Vec<f64>,
}

impl LimitWeightSequence {
    /// Builds the sequence from given positive exponential draws `W_i`.
    pub fn from_exponentials(alpha: f64, exponentials: &[f64]) -> Result<Self> {
        check_alpha(alpha)?;
        if let Some(&w) = exponentials.iter().find(|w| !(**w > 0.0)) {
            return Err(domain("W", w, "W > 0"));
        }
        let mut acc = 0.0;
        let cumulative: Vec<f64> = exponentials
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        let weights = cumulative.iter().map(|s| s.powf(-1.0 / alpha)).collect();
        Ok(Self {
            alpha,
            weights,
            cumulative,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `M_1 > M_2 > ...`
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `W_1 + ... + W_i`, equal to `M_i^(-alpha)`.
    pub fn cumulative_exponentials(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(domain("alpha", alpha, "alpha > 0"))
    }
}

/// Draws `k` exponentials and returns the first `k` limiting weights.
///
/// The exponentials are consumed in order, so a longer draw from the same
/// stream extends a shorter one.
pub fn limit_weight_sequence<R: Rng + ?Sized>(k: usize, alpha: f64, rng: &mut R) -> Result<LimitWeightSequence> {
    check_alpha(alpha)?;
    if k < 1 {
        return Err(domain("k", k as f64, "k >= 1"));
    }
    let w: Vec<f64> = (0..k).map(|_| positive_exp1(rng)).collect();
    LimitWeightSequence::from_exponentials(alpha, &w)
}

/// One Exp(1) draw, redrawn in the (measure-zero) event it is exactly zero.
pub(crate) fn positive_exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let w: f64 = rng.sample(Exp1);
        if w > 0.0 {
            return w;
        }
    }
}

/// `E M_r = Gamma(r - 1/alpha) / Gamma(r)`, evaluated in log space.
pub fn expected_order_weight(r: usize, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let (r, inv) = (r as f64, 1.0 / alpha);
    if r <= inv {
        return Err(Error::Diverges { r, bound: inv });
    }
    Ok((ln_gamma(r - inv) - ln_gamma(r)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::{split_stream, EmpiricalSample};

    #[test]
    fn quantile_examples() {
        let p1 = WeightDistribution::pareto(1.0).unwrap();
        assert_eq!(p1.quantile(0.5).unwrap(), 2.0);
        assert_eq!(p1.quantile(0.0).unwrap(), 1.0);
        assert_eq!(WeightDistribution::exponential(1.0).unwrap().quantile(0.0).unwrap(), 0.0);
        let sv = WeightDistribution::SlowlyVaryingLog;
        assert_eq!(sv.quantile(0.0).unwrap(), std::f64::consts::E);
        let q = sv.quantile(0.9).unwrap();
        assert!((q - 22026.465794806718).abs() / q < 1e-12, "{q}");
    }

    #[test]
    fn quantile_domain() {
        let p = WeightDistribution::pareto(1.0).unwrap();
        assert!(matches!(p.quantile(1.0), Err(Error::Domain { .. })));
        assert!(matches!(p.quantile(-0.1), Err(Error::Domain { .. })));
        assert!(WeightDistribution::pareto(0.0).is_err());
        assert!(WeightDistribution::exponential(-1.0).is_err());
    }

    #[test]
    fn inversion_round_trip() {
        let families = [
            WeightDistribution::pareto(0.7).unwrap(),
            WeightDistribution::pareto(1.5).unwrap(),
            WeightDistribution::exponential(2.0).unwrap(),
            WeightDistribution::SlowlyVaryingLog,
        ];
        for f in families {
            for i in 0..99 {
                let u = i as f64 / 100.0;
                let back = f.cdf(f.quantile(u).unwrap());
                assert!((back - u).abs() < 1e-12, "{f:?} u={u} back={back}");
            }
        }
    }

    #[test]
    fn quantile_monotone() {
        for f in [WeightDistribution::pareto(1.2).unwrap(), WeightDistribution::SlowlyVaryingLog] {
            let mut prev = 0.0;
            for i in 0..1000 {
                let q = f.quantile(i as f64 / 1000.0).unwrap();
                assert!(q >= prev && q >= 0.0);
                prev = q;
            }
        }
    }

    #[test]
    fn scale_constants() {
        assert_eq!(WeightDistribution::pareto(2.0).unwrap().scale_constant(16).unwrap(), 4.0);
        assert_eq!(WeightDistribution::pareto(2.0).unwrap().scale_constant(1).unwrap(), 1.0);
        let p = WeightDistribution::pareto(0.8).unwrap();
        let n: u64 = 1000;
        assert!((p.scale_constant(n).unwrap() - (n as f64).powf(1.25)).abs() < 1e-9);
        // agrees with the generic quantile(1 - 1/N)
        let q = p.quantile(1.0 - 1.0 / n as f64).unwrap();
        assert!((p.scale_constant(n).unwrap() - q).abs() / q < 1e-9);
        assert!(p.scale_constant(0).is_err());
    }

    #[test]
    fn sampling_contracts() {
        let p = WeightDistribution::pareto(1.0).unwrap();
        assert!(p.sample_weights(0, &mut split_stream(1, 0)).is_empty());
        let a = p.sample_weights(100, &mut split_stream(1, 0));
        let b = p.sample_weights(100, &mut split_stream(1, 0));
        assert_eq!(a, b);
    }

    #[test]
    fn pareto_tail_fraction() {
        let p = WeightDistribution::pareto(1.0).unwrap();
        let n = 1_000_000;
        let x = p.sample_weights(n, &mut split_stream(2, 0));
        let frac = x.iter().filter(|&&v| v > 10.0).count() as f64 / n as f64;
        let se = (0.1 * 0.9 / n as f64).sqrt();
        assert!((frac - 0.1).abs() < 3.0 * se, "{frac}");
    }

    #[test]
    fn slowly_varying_overflow_is_clamped() {
        let (x, clamped) = WeightDistribution::SlowlyVaryingLog.sample_weights_clamped(100_000, &mut split_stream(3, 0));
        assert!(clamped > 0);
        assert!(x.iter().all(|v| v.is_finite()));
        assert_eq!(x.iter().filter(|&&v| v == f64::MAX).count(), clamped);
    }

    #[test]
    fn injected_exponentials() {
        let s = LimitWeightSequence::from_exponentials(1.0, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(s.weights(), &[1.0, 0.5, 1.0 / 3.0]);
        assert!(LimitWeightSequence::from_exponentials(0.0, &[1.0]).is_err());
    }

    #[test]
    fn limit_sequence_invariants() {
        let s = limit_weight_sequence(500, 1.3, &mut split_stream(4, 0)).unwrap();
        assert!(s.weights().windows(2).all(|w| w[0] > w[1]));
        assert!(s.cumulative_exponentials().windows(2).all(|w| w[0] < w[1]));
        for (m, c) in s.weights().iter().zip(s.cumulative_exponentials()) {
            assert!((m.powf(-1.3) - c).abs() / c < 1e-12);
        }
        assert!(limit_weight_sequence(5, -1.0, &mut split_stream(4, 0)).is_err());
    }

    #[test]
    fn limit_sequence_prefix_property() {
        let short = limit_weight_sequence(50, 1.0, &mut split_stream(5, 0)).unwrap();
        let long = limit_weight_sequence(100, 1.0, &mut split_stream(5, 0)).unwrap();
        assert_eq!(short.weights(), &long.weights()[..50]);
    }

    #[test]
    fn increments_are_exponential() {
        let mut rng = split_stream(6, 0);
        let mut inc = Vec::new();
        while inc.len() < 100_000 {
            let s = limit_weight_sequence(10, 1.5, &mut rng).unwrap();
            let w = s.weights();
            let mut prev = 0.0;
            for m in w {
                let c = m.powf(-1.5);
                inc.push(c - prev);
                prev = c;
            }
        }
        let e = EmpiricalSample::new(inc).unwrap();
        let n = e.len() as f64;
        let d = e
            .values()
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = -(-x).exp_m1();
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max);
        assert!(d < 0.01, "{d}");
    }

    #[test]
    fn expected_order_weight_examples() {
        assert!((expected_order_weight(2, 1.0).unwrap() - 1.0).abs() < 1e-14);
        let v = expected_order_weight(1, 1.5).unwrap();
        assert!((v - 2.678938534707747).abs() < 1e-9, "{v}");
        assert!(matches!(expected_order_weight(1, 1.0), Err(Error::Diverges { .. })));
        // large r stays finite in log space
        assert!(expected_order_weight(1_000_000, 1.0).unwrap() > 0.0);
    }

    #[test]
    fn gamma_ratio_bounds() {
        // (x-1)^a <= G(x+a)/G(x) <= (x+a)^a for a <= -1, i.e. alpha <= 1
        for x in [1.5f64, 2.0, 5.0, 10.0, 50.0] {
            for i in 0..=10 {
                let alpha = 0.51 + i as f64 * 0.049;
                let a = -1.0 / alpha;
                if x + a <= 0.0 {
                    continue;
                }
                let ratio = (ln_gamma(x + a) - ln_gamma(x)).exp();
                assert!((x - 1.0).powf(a) <= ratio * (1.0 + 1e-12), "x={x} a={a}");
                assert!(ratio <= (x + a).powf(a) * (1.0 + 1e-12), "x={x} a={a}");
            }
        }
    }

    #[test]
    fn gamma_ratio_bounds_reverse_above_minus_one() {
        // for -1 < a < 0 (alpha > 1) the same two powers bound the ratio the other way round
        for x in [1.5f64, 2.0, 5.0, 10.0, 50.0] {
            for i in 1..=18 {
                let alpha = 1.0 + i as f64 * 0.05;
                let a = -1.0 / alpha;
                let ratio = (ln_gamma(x + a) - ln_gamma(x)).exp();
                assert!((x + a).powf(a) <= ratio * (1.0 + 1e-12), "x={x} a={a}");
                assert!(ratio <= (x - 1.0).powf(a) * (1.0 + 1e-12), "x={x} a={a}");
                assert!((x - 1.0).powf(a) > ratio, "x={x} a={a}");
            }
        }
    }

    #[test]
    fn mean_of_third_weight() {
        let (alpha, r) = (1.5, 3);
        let n = 1_000_000;
        let mut rng = split_stream(7, 0);
        let mean = (0..n)
            .map(|_| limit_weight_sequence(r, alpha, &mut rng).unwrap().weights()[r - 1])
            .sum::<f64>()
            / n as f64;
        let exact = expected_order_weight(r, alpha).unwrap();
        assert!((mean - exact).abs() / exact < 0.01, "{mean} vs {exact}");
    }
}
