//! The long-memory SαS sequence X_k = f∘T^k under the chain's Lévy measure,
//! sampled from its series representation
//!
//!   X_k = b_n C_α^{1/α} Σ_j ε_j Γ_j^{−1/α} 1{path_j visits 0 at step k},
//!
//! with path_j ~ η_n i.i.d., ε_j Rademacher and Γ_j Poisson arrivals.

use rand::Rng;

use crate::dist::{tail_constant, FrechetLaw};
use crate::error::{check, Error, Result};
use crate::interval::IntervalUnion;
use crate::markov::{ChainModel, ChainPath, EtaSampler};
use crate::rng::{exp1, replicate};
use crate::supmeasure::WSimulator;
use crate::verify::{empirical_joint_cdf, ks_statistic};

/// Series parameters for horizon n.
#[derive(Debug, Clone)]
pub struct SeriesConfig {
    alpha: f64,
    eta: EtaSampler,
    terms: usize,
    tol: f64,
    bn: f64,
    prefactor: f64,
}

impl SeriesConfig {
    /// Truncates the series after J terms, the smallest J with
    /// b_n^{−α}·J^{1−2/α}·α/(2−α) ≤ tol², a bound on the second moment of
    /// the neglected tail of X_k/(b_n C_α^{1/α}).
    pub fn new(model: &ChainModel, alpha: f64, n: u64, tol: f64) -> Result<Self> {
        check(alpha > 0.0 && alpha < 2.0, "alpha", alpha, "0 < alpha < 2")?;
        check(n >= 1, "n", n as f64, "n >= 1")?;
        check(tol > 0.0, "tol", tol, "tol > 0")?;
        let bn_alpha = model.bn_alpha(n);
        let j = (tol * tol * bn_alpha * (2.0 - alpha) / alpha).powf(-alpha / (2.0 - alpha));
        let terms = if j.is_finite() { j.ceil().max(1.0) as usize } else { usize::MAX };
        Self::with_terms(model, alpha, n, terms, tol)
    }

    pub fn with_terms(model: &ChainModel, alpha: f64, n: u64, terms: usize, tol: f64) -> Result<Self> {
        check(alpha > 0.0 && alpha < 2.0, "alpha", alpha, "0 < alpha < 2")?;
        check(terms >= 1, "J", terms as f64, "J >= 1")?;
        let eta = EtaSampler::new(model, n)?;
        let bn = eta.total().powf(1.0 / alpha);
        Ok(Self {
            alpha,
            eta,
            terms,
            tol,
            bn,
            prefactor: bn * tail_constant(alpha)?.powf(1.0 / alpha),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> u64 {
        self.eta.n()
    }

    pub fn terms(&self) -> usize {
        self.terms
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn bn(&self) -> f64 {
        self.bn
    }

    pub fn eta(&self) -> &EtaSampler {
        &self.eta
    }
}

/// (X_1, …, X_n). Terms are added in arrival order.
pub fn simulate_sas<R: Rng + ?Sized>(cfg: &SeriesConfig, rng: &mut R) -> Vec<f64> {
    let n = cfg.n() as usize;
    let mut x = vec![0.0; n];
    let mut arrival = 0.0;
    for _ in 0..cfg.terms {
        arrival += exp1(rng);
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let coef = sign * cfg.prefactor * arrival.powf(-1.0 / cfg.alpha);
        let path = cfg.eta.sample(rng);
        for &v in path.zero_visits() {
            if v >= 1 {
                x[v as usize - 1] += coef;
            }
        }
    }
    x
}

/// |X_1|, …, |X_n| as the partial-maxima sup measure B ↦ max_{k/n ∈ B} |X_k|.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxFunctional {
    values: Vec<f64>,
}

impl MaxFunctional {
    pub fn new(xs: &[f64]) -> Self {
        Self {
            values: xs.iter().map(|x| x.abs()).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

pub fn partial_max_measure(m: &MaxFunctional, b: &IntervalUnion) -> f64 {
    let n = m.n() as f64;
    m.values
        .iter()
        .enumerate()
        .filter(|(k, _)| b.contains((k + 1) as f64 / n))
        .map(|(_, &v)| v)
        .fold(0.0, f64::max)
}

/// m_n(B; path) ∈ {0, 1}.
pub fn path_sup_measure(path: &ChainPath, n: u64, b: &IntervalUnion) -> u8 {
    path.hits_at_scale(n, b) as u8
}

/// Sampler for b_n^{−1} Y^{(n)} on intervals (t_i, t_i'].
#[derive(Debug, Clone)]
pub struct YnSampler {
    alpha: f64,
    eta: EtaSampler,
    queries: Vec<IntervalUnion>,
}

impl YnSampler {
    pub fn new(model: &ChainModel, alpha: f64, n: u64, intervals: &[(f64, f64)]) -> Result<Self> {
        check(alpha > 0.0, "alpha", alpha, "alpha > 0")?;
        let queries = intervals
            .iter()
            .map(|&(a, b)| IntervalUnion::left_open(a, b))
            .collect::<Result<Vec<_>>>()?;
        for (q, &(a, b)) in queries.iter().zip(intervals) {
            if b > 1.0 {
                return Err(Error::OutsideWindow {
                    left: a,
                    right: b,
                    window: 1.0,
                });
            }
            if !(1..=n).any(|k| q.contains(k as f64 / n as f64)) {
                return Err(Error::Interval {
                    left: a,
                    right: b,
                    reason: "interval contains no grid point k/n",
                });
            }
        }
        Ok(Self {
            alpha,
            eta: EtaSampler::new(model, n)?,
            queries,
        })
    }

    /// V_i = ⋁_j Γ_j^{−1/α} m_n(path_j, (t_i, t_i']). Coefficients are 0/1,
    /// so once Γ_j^{−1/α} is below every running max nothing can change.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let n = self.eta.n();
        let mut v = vec![0.0; self.queries.len()];
        let mut arrival = 0.0;
        loop {
            arrival += exp1(rng);
            let weight = arrival.powf(-1.0 / self.alpha);
            let floor = v.iter().copied().fold(f64::INFINITY, f64::min);
            if weight < floor {
                return v;
            }
            let path = self.eta.sample(rng);
            for (vi, q) in v.iter_mut().zip(&self.queries) {
                if *vi < weight && path.hits_at_scale(n, q) {
                    *vi = weight;
                }
            }
        }
    }
}

pub fn simulate_yn<R: Rng + ?Sized>(
    model: &ChainModel,
    alpha: f64,
    n: u64,
    intervals: &[(f64, f64)],
    rng: &mut R,
) -> Result<Vec<f64>> {
    Ok(YnSampler::new(model, alpha, n, intervals)?.sample(rng))
}

/// Settings for the partial-maxima convergence experiment.
#[derive(Debug, Clone)]
pub struct ConvergenceConfig {
    pub alpha: f64,
    pub beta: f64,
    pub n_list: Vec<u64>,
    pub reps: usize,
    pub tol: f64,
    /// Also compare the joint law on (0, 1/2] × (1/2, 1] against W runs.
    pub joint: bool,
    /// Allow β ≤ 1/2, outside the range where convergence is known.
    pub exploratory: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: u64,
    pub bn: f64,
    pub terms: usize,
    /// KS of b_n^{−1} max_{k≤n}|X_k| against Fréchet(α, C_α^{1/α})
    pub ks_marginal: f64,
    /// max over a 3×3 grid of |empirical − W-based| joint CDF
    pub joint_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub exploratory: bool,
    pub rows: Vec<ConvergenceRow>,
}

const HALVES: [(f64, f64); 2] = [(0.0, 0.5), (0.5, 1.0)];

pub fn convergence_experiment(cfg: &ConvergenceConfig, seed: u64) -> Result<ConvergenceReport> {
    let (alpha, beta) = (cfg.alpha, cfg.beta);
    check(beta > 0.0 && beta < 1.0, "beta", beta, "0 < beta < 1")?;
    if !cfg.exploratory {
        check(beta > 0.5, "beta", beta, "1/2 < beta < 1 (hypothesis of the convergence theorem)")?;
    }
    check(cfg.reps >= 1, "reps", cfg.reps as f64, "reps >= 1")?;
    let model = ChainModel::zipf(beta)?;
    let scale = tail_constant(alpha)?.powf(1.0 / alpha);
    let limit = FrechetLaw::new(alpha, scale)?;
    let grid = if cfg.joint { Some(joint_grid(alpha, beta, scale, cfg.reps, seed)?) } else { None };
    let queries: Vec<IntervalUnion> = HALVES
        .iter()
        .map(|&(a, b)| IntervalUnion::left_open(a, b))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(cfg.n_list.len());
    for &n in &cfg.n_list {
        let series = SeriesConfig::new(&model, alpha, n, cfg.tol)?;
        let bn = series.bn();
        // streams depend on the replicate only, so all n share randomness
        let samples: Vec<Vec<f64>> = replicate(seed, 0x5a5, cfg.reps, |rng| {
            let m = MaxFunctional::new(&simulate_sas(&series, rng));
            queries.iter().map(|q| partial_max_measure(&m, q) / bn).collect()
        });
        let maxima: Vec<f64> = samples.iter().map(|s| s[0].max(s[1])).collect();
        let ks_marginal = ks_statistic(&maxima, |x| limit.cdf(x));
        let joint_gap = grid.as_ref().map(|g| {
            g.iter()
                .map(|(l, p)| (empirical_joint_cdf(&samples, l) - p).abs())
                .fold(0.0, f64::max)
        });
        rows.push(ConvergenceRow {
            n,
            bn,
            terms: series.terms(),
            ks_marginal,
            joint_gap,
        });
    }
    Ok(ConvergenceReport {
        exploratory: beta <= 0.5,
        rows,
    })
}

/// Probe points and W-based joint CDF values for C_α^{1/α}(W(0,1/2], W(1/2,1]).
fn joint_grid(alpha: f64, beta: f64, scale: f64, reps: usize, seed: u64) -> Result<Vec<([f64; 2], f64)>> {
    let sim = WSimulator::new(alpha, beta, 1.0)?;
    let queries: Vec<IntervalUnion> = HALVES
        .iter()
        .map(|&(a, b)| IntervalUnion::left_open(a, b))
        .collect::<Result<_>>()?;
    let runs = 4 * reps;
    let w: Vec<Vec<f64>> = replicate(seed, 0x5a6, runs, |rng| {
        sim.sample(&queries, rng)
            .expect("queries lie in the window")
            .into_iter()
            .map(|x| scale * x)
            .collect()
    });
    let marginal = FrechetLaw::new(alpha, scale * 0.5f64.powf(beta / alpha))?;
    let levels: Vec<f64> = [0.25, 0.5, 0.75].iter().map(|&p| marginal.quantile(p)).collect();
    let mut grid = Vec::new();
    for &l1 in &levels {
        for &l2 in &levels {
            let l = [l1, l2];
            grid.push((l, empirical_joint_cdf(&w, &l)));
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn partial_max_examples() {
        let m = MaxFunctional::new(&[1.0, -5.0, 2.0, 3.0]);
        assert_eq!(partial_max_measure(&m, &IntervalUnion::left_open(0.0, 1.0).unwrap()), 5.0);
        assert_eq!(partial_max_measure(&m, &IntervalUnion::open(0.6, 0.9).unwrap()), 2.0);
        assert_eq!(partial_max_measure(&m, &IntervalUnion::empty()), 0.0);
    }

    #[test]
    fn series_zeros_follow_visits() {
        let model = ChainModel::zipf(0.6).unwrap();
        let cfg = SeriesConfig::with_terms(&model, 1.2, 50, 1, 1.0).unwrap();
        let mut rng = stream(3, 0);
        for _ in 0..100 {
            let x = simulate_sas(&cfg, &mut rng);
            assert!(x.iter().all(|v| v.is_finite()));
        }
        // one term: nonzero exactly on the visit set of its path
        let mut a = stream(11, 0);
        let mut b = stream(11, 0);
        let x = simulate_sas(&cfg, &mut a);
        exp1(&mut b);
        let _: bool = b.random();
        let path = cfg.eta().sample(&mut b);
        for k in 1..=50u64 {
            assert_eq!(x[k as usize - 1] != 0.0, path.visits_zero_at(k), "k={k}");
        }
    }

    #[test]
    fn terms_grow_as_tolerance_shrinks() {
        let model = ChainModel::zipf(0.7).unwrap();
        let a = SeriesConfig::new(&model, 1.2, 1024, 1e-2).unwrap();
        let b = SeriesConfig::new(&model, 1.2, 1024, 1e-3).unwrap();
        assert!(b.terms() > a.terms());
        let bound = |c: &SeriesConfig| (c.terms() as f64).powf(1.0 - 2.0 / 1.2) * 1.2 / 0.8 / model.bn_alpha(1024);
        assert!(bound(&a) <= 1e-4 * (1.0 + 1e-9));
    }

    #[test]
    fn yn_unit_interval_is_always_hit() {
        let model = ChainModel::zipf(0.6).unwrap();
        let s = YnSampler::new(&model, 1.2, 100, &[(0.0, 1.0), (0.2, 0.3)]).unwrap();
        let mut rng = stream(8, 0);
        for _ in 0..500 {
            let v = s.sample(&mut rng);
            assert!(v[0] >= v[1]);
            assert!(v[1] > 0.0);
        }
        assert!(YnSampler::new(&model, 1.2, 4, &[(0.3, 0.45)]).is_err());
    }

    #[test]
    fn path_measure_examples() {
        let model = ChainModel::with_pmf(0.5, vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let path = ChainPath::simulate(&model, 2, 10, &mut stream(0, 0));
        assert_eq!(path.zero_visits(), &[2]);
        assert_eq!(path_sup_measure(&path, 10, &IntervalUnion::open(0.1, 0.3).unwrap()), 1);
        assert_eq!(path_sup_measure(&path, 10, &IntervalUnion::open(0.5, 0.9).unwrap()), 0);
        assert_eq!(path_sup_measure(&path, 10, &IntervalUnion::empty()), 0);
    }

    #[test]
    fn beta_gate() {
        let cfg = ConvergenceConfig {
            alpha: 1.2,
            beta: 0.4,
            n_list: vec![64],
            reps: 10,
            tol: 1e-2,
            joint: false,
            exploratory: false,
        };
        assert!(convergence_experiment(&cfg, 1).is_err());
        let report = convergence_experiment(&ConvergenceConfig { exploratory: true, ..cfg }, 1).unwrap();
        assert!(report.exploratory);
    }
}
