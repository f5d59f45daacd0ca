//! The null-recurrent "jump then descend" chain on {0, 1, 2, …}.
//!
//! From 0 the chain jumps to J ~ p_{0,·}; from i ≥ 1 it moves to i − 1. The
//! return time to 0 is φ = J + 1, the invariant measure with π_0 = 1 is
//! π_i = P(J ≥ i), and a path started at i ≥ 1 first reaches 0 at step i.

use rand::Rng;

use crate::error::{check, Error, Result};
use crate::interval::IntervalUnion;
use crate::rng::open01;
use crate::special::{hurwitz_zeta, power_sum};

const TABLE_LEN: usize = 4096;
/// Jumps are saturated here; far beyond any horizon we simulate.
pub const JUMP_CAP: u64 = 1_000_000_000_000_000_000;

/// Zipf law p_j = (j+1)^{−s}/ζ(s), s > 1.
#[derive(Debug, Clone)]
pub struct ZipfJump {
    s: f64,
    zeta: f64,
    /// tail[k] = P(J ≥ k)
    tail: Vec<f64>,
}

impl ZipfJump {
    pub fn new(s: f64) -> Result<Self> {
        check(s > 1.0, "s", s, "s > 1")?;
        let zeta = hurwitz_zeta(s, 1.0);
        let mut tail = Vec::with_capacity(TABLE_LEN + 1);
        tail.push(1.0);
        for k in 1..=TABLE_LEN {
            tail.push(hurwitz_zeta(s, k as f64 + 1.0) / zeta);
        }
        Ok(Self { s, zeta, tail })
    }

    pub fn exponent(&self) -> f64 {
        self.s
    }

    fn pmf(&self, j: u64) -> f64 {
        (j as f64 + 1.0).powf(-self.s) / self.zeta
    }

    fn tail(&self, k: u64) -> f64 {
        if (k as usize) <= TABLE_LEN {
            self.tail[k as usize]
        } else {
            hurwitz_zeta(self.s, k as f64 + 1.0) / self.zeta
        }
    }

    /// Σ_{i=1}^n P(J ≥ i) = Σ_{j<n} j p_j + n P(J ≥ n).
    fn tail_sum(&self, n: u64) -> f64 {
        let head = (power_sum(self.s - 1.0, n) - power_sum(self.s, n)) / self.zeta;
        head + n as f64 * self.tail(n)
    }

    /// Smallest j with P(J ≥ j+1) < u.
    fn inverse(&self, u: f64) -> u64 {
        if u > self.tail[TABLE_LEN] {
            // first index whose tail drops below u
            let m = self.tail.partition_point(|&g| g >= u);
            return (m - 1) as u64;
        }
        let mut lo = TABLE_LEN as u64;
        // asymptotic guess from P(J ≥ k) ≈ k^{1−s}/((s−1)ζ(s))
        let guess = (u * (self.s - 1.0) * self.zeta).powf(-1.0 / (self.s - 1.0));
        let mut hi = if guess.is_finite() && guess < JUMP_CAP as f64 {
            (guess as u64).max(lo + 1)
        } else {
            JUMP_CAP
        };
        while self.tail(hi) >= u {
            if hi >= JUMP_CAP {
                return JUMP_CAP - 1;
            }
            lo = hi;
            hi = hi.saturating_mul(2).min(JUMP_CAP);
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if self.tail(mid) < u {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi - 1
    }
}

/// Finite-support law given by its probability vector.
#[derive(Debug, Clone)]
pub struct FiniteJump {
    pmf: Vec<f64>,
    tail: Vec<f64>,
}

impl FiniteJump {
    pub fn new(pmf: Vec<f64>) -> Result<Self> {
        if pmf.is_empty() || pmf.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::Config("jump pmf must be nonempty and nonnegative".into()));
        }
        let total: f64 = pmf.iter().sum();
        check((total - 1.0).abs() < 1e-12, "sum p", total, "pmf sums to 1")?;
        let mut tail = vec![0.0; pmf.len() + 1];
        for j in (0..pmf.len()).rev() {
            tail[j] = tail[j + 1] + pmf[j];
        }
        tail[0] = 1.0;
        Ok(Self { pmf, tail })
    }

    fn tail(&self, k: u64) -> f64 {
        self.tail.get(k as usize).copied().unwrap_or(0.0)
    }

    fn inverse(&self, u: f64) -> u64 {
        let m = self.tail.partition_point(|&g| g >= u);
        (m - 1) as u64
    }
}

#[derive(Debug, Clone)]
pub enum JumpLaw {
    Zipf(ZipfJump),
    Finite(FiniteJump),
}

impl JumpLaw {
    pub fn pmf(&self, j: u64) -> f64 {
        match self {
            JumpLaw::Zipf(z) => z.pmf(j),
            JumpLaw::Finite(f) => f.pmf.get(j as usize).copied().unwrap_or(0.0),
        }
    }

    /// P(J ≥ k)
    pub fn tail(&self, k: u64) -> f64 {
        match self {
            JumpLaw::Zipf(z) => z.tail(k),
            JumpLaw::Finite(f) => f.tail(k),
        }
    }

    fn tail_sum(&self, n: u64) -> f64 {
        match self {
            JumpLaw::Zipf(z) => z.tail_sum(n),
            JumpLaw::Finite(f) => (1..=n.min(f.pmf.len() as u64)).map(|i| f.tail(i)).sum(),
        }
    }

    /// Inverse-CDF draw: the J with P(J ≥ J+1) < u ≤ P(J ≥ J).
    pub fn inverse(&self, u: f64) -> u64 {
        match self {
            JumpLaw::Zipf(z) => z.inverse(u),
            JumpLaw::Finite(f) => f.inverse(u),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.inverse(open01(rng))
    }

    /// Draw conditioned on J ≤ m: u uniform on (P(J ≥ m+1), 1].
    pub fn sample_at_most<R: Rng + ?Sized>(&self, m: u64, rng: &mut R) -> u64 {
        let low = self.tail(m + 1);
        self.inverse(low + (1.0 - low) * (1.0 - open01(rng)).max(f64::MIN_POSITIVE))
    }
}

/// The chain, identified by its jump law out of 0.
#[derive(Debug, Clone)]
pub struct ChainModel {
    beta: f64,
    jump: JumpLaw,
}

impl ChainModel {
    /// Default family p_{0,j} = (j+1)^{−(2−β)}/ζ(2−β), with P(J ≥ k) ∈ RV_{β−1}.
    pub fn zipf(beta: f64) -> Result<Self> {
        check(beta > 0.0 && beta < 1.0, "beta", beta, "0 < beta < 1")?;
        Ok(Self {
            beta,
            jump: JumpLaw::Zipf(ZipfJump::new(2.0 - beta)?),
        })
    }

    /// Arbitrary finite jump law; `beta` is kept only as a label.
    pub fn with_pmf(beta: f64, pmf: Vec<f64>) -> Result<Self> {
        Ok(Self {
            beta,
            jump: JumpLaw::Finite(FiniteJump::new(pmf)?),
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn jump(&self) -> &JumpLaw {
        &self.jump
    }

    pub fn p0(&self, j: u64) -> f64 {
        self.jump.pmf(j)
    }

    pub fn invariant_measure(&self, i: u64) -> f64 {
        if i == 0 {
            1.0
        } else {
            self.jump.tail(i)
        }
    }

    /// P_0(φ ≥ k) = P(J ≥ k − 1).
    pub fn return_tail(&self, k: u64) -> f64 {
        self.jump.tail(k.saturating_sub(1))
    }

    /// w_n = 1 + Σ_{i=1}^n π_i.
    pub fn wandering_rate(&self, n: u64) -> f64 {
        1.0 + self.jump.tail_sum(n)
    }

    /// b_n^α = Σ_{i=1}^n π_i + P_0(φ ≤ n).
    pub fn bn_alpha(&self, n: u64) -> f64 {
        self.jump.tail_sum(n) + 1.0 - self.jump.tail(n)
    }

    pub fn bn(&self, n: u64, alpha: f64) -> f64 {
        self.bn_alpha(n).powf(1.0 / alpha)
    }
}

/// Path of the chain over steps 0..=n, stored by its visits to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainPath {
    n: u64,
    start: u64,
    /// steps at which the state is 0, increasing, all ≤ n
    visits: Vec<u64>,
    /// jump taken at each visit
    jumps: Vec<u64>,
}

impl ChainPath {
    /// Runs the chain from `start` for n steps.
    pub fn simulate<R: Rng + ?Sized>(model: &ChainModel, start: u64, n: u64, rng: &mut R) -> Self {
        Self::run(model, start, n, None, rng)
    }

    fn run<R: Rng + ?Sized>(model: &ChainModel, start: u64, n: u64, first_jump_max: Option<u64>, rng: &mut R) -> Self {
        let mut visits = Vec::new();
        let mut jumps = Vec::new();
        let mut t = start;
        let mut cap = first_jump_max;
        while t <= n {
            let j = match cap.take() {
                Some(m) if t == 0 => model.jump.sample_at_most(m, rng),
                _ => model.jump.sample(rng),
            };
            visits.push(t);
            jumps.push(j);
            t = t.saturating_add(j).saturating_add(1);
        }
        Self { n, start, visits, jumps }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn zero_visits(&self) -> &[u64] {
        &self.visits
    }

    pub fn visits_zero_at(&self, k: u64) -> bool {
        self.visits.binary_search(&k).is_ok()
    }

    /// State at step k ≤ n.
    pub fn state(&self, k: u64) -> u64 {
        let idx = self.visits.partition_point(|&v| v <= k);
        if idx == 0 {
            return self.start - k;
        }
        let v = self.visits[idx - 1];
        if v == k {
            0
        } else {
            self.jumps[idx - 1] - (k - v - 1)
        }
    }

    /// The states at steps 0..=n.
    pub fn states(&self) -> Vec<u64> {
        (0..=self.n).map(|k| self.state(k)).collect()
    }

    /// 1 if the path visits 0 at some step k ≥ 1 with k/n ∈ B.
    pub fn hits(&self, b: &IntervalUnion) -> bool {
        self.hits_at_scale(self.n, b)
    }

    /// As `hits`, with visit times scaled by an explicit n.
    pub fn hits_at_scale(&self, n: u64, b: &IntervalUnion) -> bool {
        let n = n as f64;
        b.iter().any(|iv| {
            let lo = self.visits.partition_point(|&v| (v as f64) / n <= iv.left);
            self.visits[lo..]
                .iter()
                .take_while(|&&v| (v as f64) / n <= iv.right)
                .any(|&v| v >= 1 && iv.contains(v as f64 / n))
        })
    }
}

/// Sampler for η_n: start i ∈ {1..n} with weight π_i, or 0 with weight
/// P_0(φ ≤ n) followed by a first jump conditioned on J ≤ n − 1.
#[derive(Debug, Clone)]
pub struct EtaSampler {
    model: ChainModel,
    n: u64,
    /// cumulative start weights for states 0..=n
    cum: Vec<f64>,
}

impl EtaSampler {
    pub fn new(model: &ChainModel, n: u64) -> Result<Self> {
        check(n >= 1, "n", n as f64, "n >= 1")?;
        let mut cum = Vec::with_capacity(n as usize + 1);
        let mut acc = 1.0 - model.jump.tail(n);
        cum.push(acc);
        for i in 1..=n {
            acc += model.invariant_measure(i);
            cum.push(acc);
        }
        Ok(Self {
            model: model.clone(),
            n,
            cum,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn model(&self) -> &ChainModel {
        &self.model
    }

    /// Total mass b_n^α of the start weights.
    pub fn total(&self) -> f64 {
        self.cum[self.n as usize]
    }

    pub fn start_probability(&self, i: u64) -> f64 {
        let w = if i == 0 {
            self.cum[0]
        } else {
            self.cum[i as usize] - self.cum[i as usize - 1]
        };
        w / self.total()
    }

    pub fn sample_start<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u = open01(rng) * self.total();
        (self.cum.partition_point(|&c| c < u) as u64).min(self.n)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ChainPath {
        let start = self.sample_start(rng);
        ChainPath::run(&self.model, start, self.n, Some(self.n - 1), rng)
    }
}

pub fn sample_eta_n<R: Rng + ?Sized>(model: &ChainModel, n: u64, rng: &mut R) -> Result<ChainPath> {
    Ok(EtaSampler::new(model, n)?.sample(rng))
}

/// Renewal sequence S_k = Y_1 + … + Y_k with P(Y > y) ∈ RV_{−γ}, viewed at
/// scale θ. Y = J + 1 with J from the default chain family at parameter
/// 1 − γ, so that P(Y > y) = P(J ≥ y) ~ c·y^{−γ}.
#[derive(Debug, Clone)]
pub struct RenewalRange {
    gamma: f64,
    theta: f64,
    jump: JumpLaw,
}

impl RenewalRange {
    pub fn new(gamma: f64, theta: f64) -> Result<Self> {
        check(gamma > 0.0 && gamma < 1.0, "gamma", gamma, "0 < gamma < 1")?;
        check(theta > 0.0 && theta.is_finite(), "theta", theta, "theta > 0")?;
        Ok(Self {
            gamma,
            theta,
            jump: JumpLaw::Zipf(ZipfJump::new(1.0 + gamma)?),
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Whether {S_k/θ} enters each interval of q.
    pub fn hits<R: Rng + ?Sized>(&self, q: &IntervalUnion, rng: &mut R) -> Vec<bool> {
        let mut s: u64 = 0;
        q.iter()
            .map(|iv| {
                while (s as f64) / self.theta <= iv.left {
                    s = s.saturating_add(self.jump.sample(rng) + 1);
                }
                iv.contains(s as f64 / self.theta)
            })
            .collect()
    }
}

pub fn renewal_range_hits<R: Rng + ?Sized>(gamma: f64, theta: f64, q: &IntervalUnion, rng: &mut R) -> Result<Vec<bool>> {
    Ok(RenewalRange::new(gamma, theta)?.hits(q, rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn zipf_half_values() {
        let m = ChainModel::zipf(0.5).unwrap();
        let z15 = 2.612_375_348_685_488;
        assert_eq!(m.invariant_measure(0), 1.0);
        assert!((m.invariant_measure(1) - (1.0 - 1.0 / z15)).abs() < 1e-13);
        assert!((m.return_tail(2) - (1.0 - 1.0 / z15)).abs() < 1e-13);
        assert_eq!(m.return_tail(1), 1.0);
        assert!((m.wandering_rate(1) - 1.0 - m.invariant_measure(1)).abs() < 1e-14);
        assert!((m.bn_alpha(1) - m.invariant_measure(1) - m.p0(0)).abs() < 1e-14);
    }

    #[test]
    fn balance_and_normalization() {
        for &beta in &[0.2, 0.5, 0.7] {
            let m = ChainModel::zipf(beta).unwrap();
            let mut partial = 0.0;
            for i in 0..=1000u64 {
                let lhs = m.invariant_measure(i);
                let rhs = m.jump().tail(i + 1) + m.p0(i);
                assert!((lhs - rhs).abs() < 1e-12, "beta={beta} i={i}");
                partial += m.p0(i);
            }
            assert!((partial + m.jump().tail(1001) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn wandering_rate_matches_direct_sum() {
        let m = ChainModel::zipf(0.6).unwrap();
        for &n in &[1u64, 10, 64, 65, 500, 5000] {
            let direct: f64 = 1.0 + (1..=n).map(|i| m.invariant_measure(i)).sum::<f64>();
            assert!((m.wandering_rate(n) - direct).abs() < 1e-10 * direct, "n={n}");
            let gap = m.wandering_rate(n) - m.bn_alpha(n);
            assert!((gap - m.return_tail(n + 1)).abs() < 1e-12);
        }
    }

    #[test]
    fn inverse_matches_table_and_tail() {
        let m = ChainModel::zipf(0.5).unwrap();
        let law = m.jump();
        for &j in &[0u64, 1, 5, 4095, 4096, 4097, 50_000, 10_000_000] {
            let hi = law.tail(j);
            let lo = law.tail(j + 1);
            let u = 0.5 * (hi + lo);
            assert_eq!(law.inverse(u), j, "j={j}");
            assert_eq!(law.inverse(hi), j);
        }
    }

    #[test]
    fn conditioned_jump_stays_below() {
        let m = ChainModel::zipf(0.7).unwrap();
        let mut rng = stream(9, 0);
        for _ in 0..10_000 {
            assert!(m.jump().sample_at_most(3, &mut rng) <= 3);
        }
    }

    #[test]
    fn path_descends_deterministically() {
        let m = ChainModel::zipf(0.5).unwrap();
        let mut rng = stream(4, 0);
        for _ in 0..200 {
            let p = ChainPath::simulate(&m, 7, 300, &mut rng);
            let s = p.states();
            assert_eq!(s.len(), 301);
            assert_eq!(s[0], 7);
            for w in s.windows(2) {
                if w[0] > 0 {
                    assert_eq!(w[1], w[0] - 1);
                }
            }
        }
    }

    #[test]
    fn eta_paths_visit_zero() {
        let m = ChainModel::zipf(0.5).unwrap();
        let eta = EtaSampler::new(&m, 20).unwrap();
        assert!((eta.total() - m.bn_alpha(20)).abs() < 1e-12);
        let mut rng = stream(5, 0);
        for _ in 0..2000 {
            let p = eta.sample(&mut rng);
            assert!(p.zero_visits().iter().any(|&v| (1..=20).contains(&v)));
        }
    }

    #[test]
    fn hits_window() {
        let p = ChainPath {
            n: 10,
            start: 2,
            visits: vec![2, 9],
            jumps: vec![6, 40],
        };
        assert!(p.hits(&IntervalUnion::open(0.1, 0.3).unwrap()));
        assert!(!p.hits(&IntervalUnion::open(0.3, 0.85).unwrap()));
        assert!(!p.hits(&IntervalUnion::empty()));
        assert_eq!(p.state(3), 6);
        assert_eq!(p.state(8), 1);
    }
}
