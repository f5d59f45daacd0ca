//! Oracles and test statistics.
//!
//! The oracles here use only the scalar laws in `dist` and quadrature; they
//! share no code with the simulators they are used to check.

use std::f64::consts::PI;

use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::beta::beta_reg;

use crate::dist::{FrechetLaw, OvershootLaw};
use crate::error::{check, Error, Result};
use crate::quad::{gauss_legendre, integrate, power_left, power_right};
use crate::rng::{open01, stream, task_id};

const ABS_TOL: f64 = 1e-12;

/// P(δ_h < u) for the overshoot of level h.
fn overshoot_below(law: &OvershootLaw, h: f64, u: f64) -> f64 {
    if h <= 0.0 {
        1.0
    } else {
        law.cdf(u / h)
    }
}

/// ∫_0^a βx^{β−1} P(δ_{a−x} < c−a) dx + (c^β − a^β): the hitting exponent
/// of (a, c) for the stationary range family started with density βx^{β−1}.
fn hitting_exponent(law: &OvershootLaw, a: f64, c: f64) -> f64 {
    let beta = law.beta();
    let tail = c.powf(beta) - a.powf(beta);
    if a == 0.0 {
        return tail;
    }
    let u = c - a;
    let f = |x: f64| beta * x.powf(beta - 1.0) * overshoot_below(law, a - x, u);
    let mid = 0.5 * a;
    let left = integrate(power_left(f, 0.0, mid, beta), 0.0, 1.0, ABS_TOL, 1e-13).value;
    let right = integrate(power_right(f, mid, a, 1.0 - beta), 0.0, 1.0, ABS_TOL, 1e-13).value;
    left + right + tail
}

/// |LHS − RHS| of the shift identity for the hitting exponent of (b, c)
/// and of (b + r, c + r).
pub fn shift_identity_residual(beta: f64, b: f64, c: f64, r: f64) -> Result<f64> {
    check(b > 0.0 && c > b, "c", c, "0 < b < c")?;
    check(r >= 0.0, "r", r, "r >= 0")?;
    let law = OvershootLaw::unit(beta)?;
    let lhs = hitting_exponent(&law, b, c);
    let rhs = hitting_exponent(&law, b + r, c + r);
    Ok((lhs - rhs).abs())
}

/// Intervals (t_i, t_i') with thresholds λ_i for the limiting joint law of
/// hitting-based Fréchet vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct JointHitSpec {
    beta: f64,
    intervals: Vec<(f64, f64)>,
    lambdas: Vec<f64>,
}

impl JointHitSpec {
    pub fn new(beta: f64, intervals: Vec<(f64, f64)>, lambdas: Vec<f64>) -> Result<Self> {
        check(beta > 0.0 && beta < 1.0, "beta", beta, "0 < beta < 1")?;
        if intervals.is_empty() || intervals.len() != lambdas.len() {
            return Err(Error::Config("need one lambda per interval".into()));
        }
        for (i, &(a, b)) in intervals.iter().enumerate() {
            if !(a >= 0.0 && b > a && b.is_finite()) {
                return Err(Error::Interval {
                    left: a,
                    right: b,
                    reason: "requires 0 <= left < right < inf",
                });
            }
            if i > 0 && a < intervals[i - 1].1 {
                return Err(Error::Interval {
                    left: a,
                    right: b,
                    reason: "intervals must be sorted and disjoint",
                });
            }
        }
        for &l in &lambdas {
            check(l > 0.0, "lambda", l, "lambda > 0")?;
        }
        Ok(Self {
            beta,
            intervals,
            lambdas,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue {
    pub probability: f64,
    pub exponent: f64,
    /// MC standard error of the exponent (0 when computed by quadrature alone)
    pub exponent_se: f64,
}

impl OracleValue {
    fn exact(exponent: f64) -> Self {
        Self {
            probability: (-exponent).exp(),
            exponent,
            exponent_se: 0.0,
        }
    }
}

/// exp{−E ∫_0^∞ ⋁_i λ_i^{−α} 1((R_β + x) ∩ (t_i, t_i') ≠ ∅) βx^{β−1} dx}.
///
/// One interval is done by quadrature alone. Otherwise the outer integral is
/// Gauss–Legendre on pieces between endpoints (with power substitutions at
/// 0 and below each left endpoint) and the inner expectation is MC, using
/// the same overshoot uniforms at every node.
pub fn joint_cdf_oracle(spec: &JointHitSpec, alpha: f64, mc_replicates: usize, seed: u64) -> Result<OracleValue> {
    check(alpha > 0.0, "alpha", alpha, "alpha > 0")?;
    let law = OvershootLaw::unit(spec.beta)?;
    let weights: Vec<f64> = spec.lambdas.iter().map(|l| l.powf(-alpha)).collect();
    if spec.intervals.len() == 1 {
        let (a, b) = spec.intervals[0];
        return Ok(OracleValue::exact(weights[0] * hitting_exponent(&law, a, b)));
    }
    check(mc_replicates >= 2, "replicates", mc_replicates as f64, "replicates >= 2")?;
    let (nodes, node_weights) = outer_rule(spec);
    let m = spec.intervals.len();
    let per_rep: Vec<f64> = (0..mc_replicates)
        .map(|r| {
            let mut rng = stream(seed, task_id(0x5e, r as u64));
            let u: Vec<f64> = (0..m).map(|_| open01(&mut rng)).collect();
            nodes
                .iter()
                .zip(&node_weights)
                .map(|(&x, &w)| w * walk_value(&law, &spec.intervals, &weights, &u, x))
                .sum()
        })
        .collect();
    let n = per_rep.len() as f64;
    let mean = per_rep.iter().sum::<f64>() / n;
    let var = per_rep.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(OracleValue {
        probability: (-mean).exp(),
        exponent: mean,
        exponent_se: (var / n).sqrt(),
    })
}

/// Max of the weights of the intervals hit by R_β + x, with the overshoot
/// at interval i drawn from uniform u[i].
fn walk_value(law: &OvershootLaw, intervals: &[(f64, f64)], weights: &[f64], u: &[f64], x: f64) -> f64 {
    let mut p = x;
    let mut best: f64 = 0.0;
    for (i, &(a, b)) in intervals.iter().enumerate() {
        if p >= b {
            continue;
        }
        if p < a {
            p = a + (a - p) * law.quantile(u[i]);
        }
        if p < b {
            best = best.max(weights[i]);
        }
    }
    best
}

/// Quadrature nodes for ∫_0^{t_m'} g(x) βx^{β−1} dx, density folded into the weights.
fn outer_rule(spec: &JointHitSpec) -> (Vec<f64>, Vec<f64>) {
    let beta = spec.beta;
    let (gl_x, gl_w) = gauss_legendre(24);
    let mut ends: Vec<f64> = vec![0.0];
    for &(a, b) in &spec.intervals {
        ends.push(a);
        ends.push(b);
    }
    ends.sort_by(f64::total_cmp);
    ends.dedup();
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    let density = |x: f64| beta * x.powf(beta - 1.0);
    for w in ends.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mid = 0.5 * (lo + hi);
        let left_power = if lo == 0.0 { beta } else { 1.0 };
        let right_power = if spec.intervals.iter().any(|iv| iv.0 == hi) { 1.0 - beta } else { 1.0 };
        // s ∈ [0,1] ↦ x, with Jacobian, for each half
        for (half, p, from_left) in [((lo, mid), left_power, true), ((mid, hi), right_power, false)] {
            let width = half.1 - half.0;
            for (&z, &gw) in gl_x.iter().zip(&gl_w) {
                let s = 0.5 * (z + 1.0);
                let t = s.powf(1.0 / p);
                let x = if from_left { half.0 + width * t } else { half.1 - width * t };
                let jac = width * t / (p * s);
                nodes.push(x);
                weights.push(0.5 * gw * jac * density(x));
            }
        }
    }
    (nodes, weights)
}

/// P(Y(t_1) ≤ λ_1, …, Y(t_m) ≤ λ_m) for the extremal process with
/// marginals F_{α,σ}^t: the product over increments of
/// F(min_{i ≥ k} λ_i)^{t_k − t_{k−1}}.
pub fn extremal_fdd(alpha: f64, sigma: f64, times: &[f64], lambdas: &[f64]) -> Result<f64> {
    Ok((-extremal_exponent(alpha, sigma, times, lambdas)?).exp())
}

pub fn extremal_exponent(alpha: f64, sigma: f64, times: &[f64], lambdas: &[f64]) -> Result<f64> {
    let law = FrechetLaw::new(alpha, sigma)?;
    if times.is_empty() || times.len() != lambdas.len() {
        return Err(Error::Config("need one lambda per time".into()));
    }
    check(times[0] >= 0.0, "t", times[0], "t >= 0")?;
    for w in times.windows(2) {
        check(w[1] > w[0], "t", w[1], "times increasing")?;
    }
    let mut total = 0.0;
    let mut prev = 0.0;
    for k in 0..times.len() {
        let lam = lambdas[k..].iter().copied().fold(f64::INFINITY, f64::min);
        total += (times[k] - prev) * law.exponent(lam);
        prev = times[k];
    }
    Ok(total)
}

/// Joint CDF of Z_{α,β}(t) = Z_α(t^β).
pub fn z_oracle(alpha: f64, beta: f64, times: &[f64], lambdas: &[f64]) -> Result<f64> {
    let tb: Vec<f64> = times.iter().map(|t| t.powf(beta)).collect();
    extremal_fdd(alpha, 1.0, &tb, lambdas)
}

/// Hitting exponent for nested intervals (0, t_i]: R_β + x meets (0, t_i]
/// iff x < t_i, so the exponent is Σ_k (t_k^β − t_{k−1}^β)·max_{i≥k} λ_i^{−α}.
pub fn nested_hitting_exponent(alpha: f64, beta: f64, times: &[f64], lambdas: &[f64]) -> f64 {
    let mut total = 0.0;
    let mut prev = 0.0;
    for k in 0..times.len() {
        let w = lambdas[k..].iter().map(|l| l.powf(-alpha)).fold(0.0, f64::max);
        total += (times[k].powf(beta) - prev) * w;
        prev = times[k].powf(beta);
    }
    total
}

/// Two-sided KS distance between the empirical CDF of `samples` and `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    assert!(!samples.is_empty(), "KS needs samples");
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let mut j = i;
        while j + 1 < xs.len() && xs[j + 1] == xs[i] {
            j += 1;
        }
        let f = cdf(xs[i]);
        d = d.max(f - i as f64 / n).max((j + 1) as f64 / n - f);
        i = j + 1;
    }
    d
}

/// Two-sample KS distance.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] == x {
            i += 1;
        }
        while j < xb.len() && xb[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Empirical p-quantile of sorted data (order statistic ⌈Np⌉).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let k = ((p * n as f64).ceil() as usize).clamp(1, n);
    sorted[k - 1]
}

/// Standard error of the empirical p-quantile from the order statistics at
/// Np ± √(Np(1−p)).
pub fn quantile_se(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len() as f64;
    let spread = (n * p * (1.0 - p)).sqrt();
    let lo = ((n * p - spread).floor() as usize).clamp(1, sorted.len());
    let hi = ((n * p + spread).ceil() as usize).clamp(1, sorted.len());
    0.5 * (sorted[hi - 1] - sorted[lo - 1])
}

/// Fréchet scale MLE with known α: σ^α = N / Σ x^{−α}.
pub fn frechet_scale_mle(samples: &[f64], alpha: f64) -> f64 {
    let s: f64 = samples.iter().map(|x| x.powf(-alpha)).sum();
    (samples.len() as f64 / s).powf(1.0 / alpha)
}

/// Empirical joint CDF P(X_1 ≤ λ_1, …, X_m ≤ λ_m).
pub fn empirical_joint_cdf(samples: &[Vec<f64>], lambdas: &[f64]) -> f64 {
    let hits = samples
        .iter()
        .filter(|v| v.iter().zip(lambdas).all(|(x, l)| x <= l))
        .count();
    hits as f64 / samples.len() as f64
}

/// (∫_0^∞ x^{−α} sin x dx)^{−1} by quadrature: the first half period with
/// a power substitution, then whole periods, then the asymptotic tail.
pub fn tail_constant_quadrature(alpha: f64) -> Result<f64> {
    check(alpha > 0.0 && alpha < 2.0, "alpha", alpha, "0 < alpha < 2")?;
    let f = move |x: f64| x.powf(-alpha) * x.sin();
    let mut total = integrate(power_left(f, 0.0, PI, 2.0 - alpha), 0.0, 1.0, 1e-15, 1e-14).value;
    let periods = 400;
    for k in 1..periods {
        let a = k as f64 * PI;
        total += integrate(f, a, a + PI, 1e-16, 1e-14).value;
    }
    // ∫_A^∞ x^{−α} sin x dx with A = Kπ: cos A·Σ_j (−1)^j (α)_{2j} A^{−α−2j}
    let a = periods as f64 * PI;
    let sign = if periods % 2 == 0 { 1.0 } else { -1.0 };
    let mut term = a.powf(-alpha);
    let mut tail = 0.0;
    for j in 0..6 {
        tail += term;
        let k = 2.0 * j as f64;
        term *= -(alpha + k) * (alpha + k + 1.0) / (a * a);
    }
    Ok(1.0 / (total + sign * tail))
}

/// P(δ_h ≤ u) from δ_1/(1+δ_1) ~ Beta(β, 1−β).
pub fn overshoot_cdf_beta(beta: f64, h: f64, u: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if h <= 0.0 {
        return 1.0;
    }
    let v = u / h;
    beta_reg(beta, 1.0 - beta, v / (1.0 + v))
}

/// ∫_0^∞ of the unit-level overshoot density, by quadrature with the
/// substitutions y = s^{1/β} on (0, 1] and y = s^{−1/(1−β)} on [1, ∞).
pub fn overshoot_pdf_mass(beta: f64) -> Result<f64> {
    let law = OvershootLaw::unit(beta)?;
    let pdf = |y: f64| law.pdf(y).unwrap_or(0.0);
    let head = integrate(power_left(pdf, 0.0, 1.0, beta), 0.0, 1.0, 1e-14, 1e-14).value;
    let p = 1.0 - beta;
    let tail = integrate(
        |s: f64| {
            if s <= 0.0 {
                return 0.0;
            }
            let y = s.powf(-1.0 / p);
            pdf(y) * y / (p * s)
        },
        0.0,
        1.0,
        1e-14,
        1e-14,
    )
    .value;
    Ok(head + tail)
}

/// Two-sided normal critical value at family-wise level `level` over `m`
/// simultaneous comparisons.
pub fn bonferroni_z(level: f64, m: usize) -> f64 {
    Normal::standard().inverse_cdf(1.0 - level / (2.0 * m as f64))
}

/// Quantile comparison for H-self-similarity: for each p, the z-score of
/// Q_B(p) − c^H Q_A(p) with order-statistic standard errors, where A is a
/// sample at scale 1 and B at scale c. Returns (p, z) pairs.
pub fn selfsim_quantile_z(a: &[f64], b: &[f64], c: f64, h: f64, probs: &[f64]) -> Vec<(f64, f64)> {
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(f64::total_cmp);
    sb.sort_by(f64::total_cmp);
    let ch = c.powf(h);
    probs
        .iter()
        .map(|&p| {
            let diff = quantile_sorted(&sb, p) - ch * quantile_sorted(&sa, p);
            let se = (quantile_se(&sb, p).powi(2) + ch * ch * quantile_se(&sa, p).powi(2)).sqrt();
            (p, diff.abs() / se)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::tail_constant;

    #[test]
    fn shift_residual_small() {
        assert!(shift_identity_residual(0.5, 1.0, 2.0, 0.7).unwrap() < 1e-9);
        assert_eq!(shift_identity_residual(0.5, 1.0, 2.0, 0.0).unwrap(), 0.0);
        assert!(shift_identity_residual(0.5, 2.0, 1.0, 0.7).is_err());
    }

    #[test]
    fn single_interval_half_closed_form() {
        // β = 1/2: P(δ_h < u) = (2/π)arctan√(u/h)
        let spec = JointHitSpec::new(0.5, vec![(1.0, 2.0)], vec![1.0]).unwrap();
        let v = joint_cdf_oracle(&spec, 1.0, 0, 0).unwrap();
        let g = |x: f64| 0.5 * x.powf(-0.5) * 2.0 / PI * (1.0 / (1.0 - x)).sqrt().atan();
        let reference = integrate(power_left(g, 0.0, 1.0, 0.5), 0.0, 1.0, 1e-13, 1e-13).value + 2f64.sqrt() - 1.0;
        assert!((v.exponent - reference).abs() < 1e-9, "{} vs {}", v.exponent, reference);
        let spec0 = JointHitSpec::new(0.3, vec![(0.0, 2.0)], vec![1.5]).unwrap();
        let v0 = joint_cdf_oracle(&spec0, 1.2, 0, 0).unwrap();
        assert!((v0.exponent - 2f64.powf(0.3) * 1.5f64.powf(-1.2)).abs() < 1e-14);
    }

    #[test]
    fn mc_branch_agrees_with_closed_form() {
        for &(beta, a, b) in &[(0.5, 1.0, 2.0), (0.3, 0.4, 0.9), (0.75, 0.2, 1.5)] {
            let single = JointHitSpec::new(beta, vec![(a, b)], vec![1.0]).unwrap();
            let exact = joint_cdf_oracle(&single, 1.0, 0, 0).unwrap();
            // a far interval with negligible weight forces the MC branch
            let padded = JointHitSpec::new(beta, vec![(a, b), (b + 1.0, b + 2.0)], vec![1.0, 1e12]).unwrap();
            let mc = joint_cdf_oracle(&padded, 1.0, 4000, 7).unwrap();
            let z = (mc.exponent - exact.exponent).abs() / mc.exponent_se;
            assert!(z < 3.0, "beta={beta}: {} vs {} (se {})", mc.exponent, exact.exponent, mc.exponent_se);
        }
    }

    #[test]
    fn extremal_two_time_example() {
        let p = z_oracle(1.0, 0.5, &[0.5, 1.0], &[1.0, 2.0]).unwrap();
        let e = 0.5f64.sqrt() + (1.0 - 0.5f64.sqrt()) * 0.5;
        assert!((p - (-e).exp()).abs() < 1e-15);
        assert!((p - 0.4259).abs() < 1e-4);
        let one = extremal_fdd(1.3, 1.0, &[0.7], &[2.0]).unwrap();
        let two = extremal_fdd(1.3, 1.0, &[0.2, 0.7], &[1e300, 2.0]).unwrap();
        assert_eq!(one, two);
    }

    #[test]
    fn nested_exponent_equals_extremal() {
        let ts = [0.25, 0.5, 2.0];
        let ls = [0.5, 2.0, 1.0];
        let a = nested_hitting_exponent(1.0, 0.5, &ts, &ls);
        let tb: Vec<f64> = ts.iter().map(|t: &f64| t.sqrt()).collect();
        let b = extremal_exponent(1.0, 1.0, &tb, &ls).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn ks_edge_cases() {
        let d = ks_statistic(&[0.0, 0.0, 0.0], |x| 1.0 / (1.0 + (-x).exp()));
        assert!((d - 0.5).abs() < 1e-15);
        let xs: Vec<f64> = (1..=100).map(|i| i as f64 / 101.0).collect();
        let base = ks_statistic(&xs, |x| x);
        let mut more = xs.clone();
        more.push(0.5);
        assert!(ks_statistic(&more, |x| x) >= base - 1.0 / 100.0);
        assert_eq!(ks_two_sample(&xs, &xs), 0.0);
    }

    #[test]
    fn tail_constant_agrees_with_quadrature() {
        for &a in &[0.3, 0.8, 1.0, 1.2, 1.5, 1.9] {
            let q = tail_constant_quadrature(a).unwrap();
            let c = tail_constant(a).unwrap();
            assert!((q - c).abs() < 1e-8 * c, "alpha={a}: {q} vs {c}");
        }
    }

    #[test]
    fn overshoot_oracles() {
        for &beta in &[0.2, 0.5, 0.8] {
            assert!((overshoot_pdf_mass(beta).unwrap() - 1.0).abs() < 1e-9, "beta={beta}");
        }
        let u = 1.7f64;
        assert!((overshoot_cdf_beta(0.5, 1.0, u) - 2.0 / PI * u.sqrt().atan()).abs() < 1e-13);
        assert!((bonferroni_z(0.0027, 1) - 3.0).abs() < 1e-3);
    }

    #[test]
    fn quantile_helpers() {
        let xs: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(quantile_sorted(&xs, 0.5), 500.0);
        assert!(quantile_se(&xs, 0.5) > 10.0);
        let s = [2.0; 10];
        assert!((frechet_scale_mle(&s, 1.5) - 2.0).abs() < 1e-14);
    }
}
