//! One function per subcommand. Each validates its parameters through the
//! library constructors before doing any sampling, so domain violations
//! surface as `Error` (exit code 2) rather than as failed checks.

use clap::{Args, Subcommand};
use serde::Serialize;

use supsim::dist::{tail_constant, FrechetLaw, OvershootLaw};
use supsim::markov::{ChainModel, EtaSampler, RenewalRange};
use supsim::range::{hit_prob_closed_form, probe_hits};
use supsim::rng::replicate;
use supsim::sas::{convergence_experiment, ConvergenceConfig, YnSampler};
use supsim::supmeasure::{
    max_increment_shift_sample, simulate_z, simulate_z_gamma, GammaProcessParams, WSimulator,
};
use supsim::verify::{
    bonferroni_z, empirical_joint_cdf, frechet_scale_mle, joint_cdf_oracle, ks_statistic, ks_two_sample,
    overshoot_cdf_beta, overshoot_pdf_mass, selfsim_quantile_z, shift_identity_residual, z_oracle, JointHitSpec,
};
use supsim::{Error, IntervalUnion, Result};

use crate::report::{Outcome, Row};

const DECILES: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Fréchet sampler, max-stability and scale fit
    FrechetCheck(FrechetCheck),
    /// Overshoot density mass, CDF against the Beta representation, sampler KS
    OvershootCheck(OvershootCheck),
    /// Shift invariance of the hitting exponent
    ShiftIdentity(ShiftIdentity),
    /// Range hitting frequencies against the closed form, and scale invariance
    HitProb(HitProb),
    /// Fréchet scale of W((0,t])
    WMarginal(WMarginal),
    /// Joint law of W on two intervals against the quadrature oracle
    WJoint(WJoint),
    /// W(A) and W(A + r) have the same law
    WStationarity(WStationarity),
    /// Quantile test of W(cA) = c^H W(A) in law, H = beta/alpha
    WSelfsim(WSelfsim),
    /// Marginal law of Z(t)
    ZMarginal(ZMarginal),
    /// Two-time law of Z against the time-changed extremal process
    ZJoint(ZJoint),
    /// Gap-weighted process: self-similarity and the max-increment identity
    ZGamma(ZGamma),
    /// Invariant measure, wandering rate and normalizer of the chain
    ChainStats(ChainStats),
    /// Start-state law of the path measure eta_n
    EtaSample(EtaSample),
    /// Chain-driven Fréchet vectors against their limit
    YnConverge(YnConverge),
    /// Renewal range against the stable range
    RenewalRange(RenewalRangeArgs),
    /// Partial maxima of the SaS sequence against the Fréchet limit
    SasConverge(SasConverge),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::FrechetCheck(_) => "frechet-check",
            Command::OvershootCheck(_) => "overshoot-check",
            Command::ShiftIdentity(_) => "shift-identity",
            Command::HitProb(_) => "hit-prob",
            Command::WMarginal(_) => "w-marginal",
            Command::WJoint(_) => "w-joint",
            Command::WStationarity(_) => "w-stationarity",
            Command::WSelfsim(_) => "w-selfsim",
            Command::ZMarginal(_) => "z-marginal",
            Command::ZJoint(_) => "z-joint",
            Command::ZGamma(_) => "z-gamma",
            Command::ChainStats(_) => "chain-stats",
            Command::EtaSample(_) => "eta-sample",
            Command::YnConverge(_) => "yn-converge",
            Command::RenewalRange(_) => "renewal-range",
            Command::SasConverge(_) => "sas-converge",
        }
    }

    pub fn run(&self, seed: u64) -> Result<Outcome> {
        match self {
            Command::FrechetCheck(a) => a.run(seed),
            Command::OvershootCheck(a) => a.run(seed),
            Command::ShiftIdentity(a) => a.run(),
            Command::HitProb(a) => a.run(seed),
            Command::WMarginal(a) => a.run(seed),
            Command::WJoint(a) => a.run(seed),
            Command::WStationarity(a) => a.run(seed),
            Command::WSelfsim(a) => a.run(seed),
            Command::ZMarginal(a) => a.run(seed),
            Command::ZJoint(a) => a.run(seed),
            Command::ZGamma(a) => a.run(seed),
            Command::ChainStats(a) => a.run(),
            Command::EtaSample(a) => a.run(seed),
            Command::YnConverge(a) => a.run(seed),
            Command::RenewalRange(a) => a.run(seed),
            Command::SasConverge(a) => a.run(seed),
        }
    }
}

fn positive_reps(reps: usize) -> Result<()> {
    if reps < 2 {
        return Err(Error::Domain {
            name: "reps",
            value: reps as f64,
            constraint: "reps >= 2",
        });
    }
    Ok(())
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FrechetCheck {
    #[arg(long, default_value_t = 1.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// number of copies in the max-stability check
    #[arg(long, default_value_t = 4)]
    pub k: u32,
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
}

impl FrechetCheck {
    fn run(&self, seed: u64) -> Result<Outcome> {
        let law = FrechetLaw::new(self.alpha, self.sigma)?;
        positive_reps(self.reps)?;
        let k = self.k.max(1);
        let xs = replicate(seed, 1, self.reps, |r| law.sample(r));
        let maxima = replicate(seed, 2, self.reps, |r| (0..k).map(|_| law.sample(r)).fold(0.0, f64::max));
        let ks = ks_statistic(&xs, |x| law.cdf(x));
        let ks_max = ks_statistic(&maxima, |x| law.max_of(k).cdf(x));
        let fit = (frechet_scale_mle(&xs, self.alpha) / self.sigma - 1.0).abs();
        let rows = vec![
            Row::below("single", "ks", ks, 0.01),
            Row::below(format!("max_of={k}"), "ks", ks_max, 0.01),
            Row::below("single", "scale_rel_error", fit, 0.02),
        ];
        Ok(Outcome::new("frechet-check", self, ks.max(ks_max), 0.01, rows))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OvershootCheck {
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
}

impl OvershootCheck {
    fn run(&self, seed: u64) -> Result<Outcome> {
        let law = OvershootLaw::unit(self.beta)?;
        positive_reps(self.reps)?;
        let beta = self.beta;
        let mut rows = Vec::new();
        let mass = overshoot_pdf_mass(beta)?;
        rows.push(Row::below("unit", "pdf_mass_error", (mass - 1.0).abs(), 1e-8));
        let mut cdf_err: f64 = 0.0;
        for &u in &[1e-6, 1e-3, 0.1, 0.5, 1.0, 2.5, 40.0, 1e4, 1e8] {
            let e = (law.cdf(u) - overshoot_cdf_beta(beta, 1.0, u)).abs();
            rows.push(Row::info(format!("u={u}"), "cdf_error", e));
            cdf_err = cdf_err.max(e);
        }
        rows.push(Row::below("all", "max_cdf_error", cdf_err, 1e-8));
        if beta == 0.5 {
            rows.push(Row::below("u=1", "half_point_error", (law.cdf(1.0) - 0.5).abs(), 1e-8));
        }
        let xs = replicate(seed, 1, self.reps, |r| law.sample(r));
        let ks = ks_statistic(&xs, |u| overshoot_cdf_beta(beta, 1.0, u));
        rows.push(Row::below("sampler", "ks", ks, 0.01));
        Ok(Outcome::new("overshoot-check", self, ks, 0.01, rows))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ShiftIdentity {
    /// single beta (default: 0.2, 0.35, 0.5, 0.65, 0.8)
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
}

impl ShiftIdentity {
    fn run(&self) -> Result<Outcome> {
        let betas = match self.beta {
            Some(b) => vec![b],
            None => vec![0.2, 0.35, 0.5, 0.65, 0.8],
        };
        let points = match (self.b, self.c, self.r) {
            (Some(b), Some(c), Some(r)) => vec![(b, c, r)],
            (None, None, None) => vec![(1.0, 2.0, 0.7), (0.5, 3.0, 1.5), (2.0, 2.5, 0.3)],
            _ => return Err(Error::Config("give all of --b, --c, --r or none".into())),
        };
        let mut rows = Vec::new();
        let mut worst: f64 = 0.0;
        for &beta in &betas {
            for &(b, c, r) in &points {
                let res = shift_identity_residual(beta, b, c, r)?;
                worst = worst.max(res);
                rows.push(Row::below(format!("beta={beta};b={b};c={c};r={r}"), "residual", res, 1e-6));
            }
        }
        Ok(Outcome::new("shift-identity", self, worst, 1e-6, rows))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HitProb {
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
    /// scale factor for the invariance check
    #[arg(long, default_value_t = 2.5)]
    pub scale: f64,
}

impl HitProb {
    fn run(&self, seed: u64) -> Result<Outcome> {
        positive_reps(self.reps)?;
        if !(self.scale > 0.0) {
            return Err(Error::Domain {
                name: "scale",
                value: self.scale,
                constraint: "scale > 0",
            });
        }
        let shapes = [(0.0, 1.0, 2.0), (0.5, 1.0, 1.5), (0.2, 0.3, 3.0), (0.0, 0.5, 0.6)];
        let mut rows = Vec::new();
        let mut worst: f64 = 0.0;
        let mut worst_z: f64 = 0.0;
        let mut tag = 0u16;
        for &beta in &[0.3, 0.5, 0.7] {
            for &(x, a, b) in &shapes {
                let point = format!("beta={beta};x={x};a={a};b={b}");
                let freq = |x: f64, a: f64, b: f64, tag: u16| -> Result<f64> {
                    let q = IntervalUnion::open(a, b)?;
                    let hits = replicate(seed, tag, self.reps, |r| probe_hits(beta, x, &q, r).map(|h| h[0]));
                    let n = hits.into_iter().collect::<Result<Vec<_>>>()?.into_iter().filter(|&h| h).count();
                    Ok(n as f64 / self.reps as f64)
                };
                tag += 1;
                let p = freq(x, a, b, tag)?;
                let exact = hit_prob_closed_form(beta, x, a, b)?;
                tag += 1;
                let c = self.scale;
                let ps = freq(c * x, c * a, c * b, tag)?;
                let n = self.reps as f64;
                let se = ((p * (1.0 - p) + ps * (1.0 - ps)) / n).sqrt();
                let z = if se > 0.0 { (p - ps).abs() / se } else if p == ps { 0.0 } else { f64::INFINITY };
                worst = worst.max((p - exact).abs());
                worst_z = worst_z.max(z);
                rows.push(Row::info(point.clone(), "closed_form", exact));
                rows.push(Row::below(point.clone(), "abs_error", (p - exact).abs(), 0.01));
                rows.push(Row::below(point, "scale_z", z, 3.0));
            }
        }
        rows.push(Row::info("all", "max_scale_z", worst_z));
        Ok(Outcome::new("hit-prob", self, worst, 0.01, rows))
    }
}

fn w_samples(sim: &WSimulator, queries: &[IntervalUnion], seed: u64, tag: u16, reps: usize) -> Result<Vec<Vec<f64>>> {
    replicate(seed, tag, reps, |r| sim.sample(queries, r)).into_iter().collect()
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WMarginal {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
}

impl WMarginal {
    fn run(&self, seed: u64) -> Result<Outcome> {
        positive_reps(self.reps)?;
        let points = match (self.alpha, self.beta, self.t) {
            (Some(a), Some(b), Some(t)) => vec![(a, b, t)],
            (None, None, None) => vec![(1.0, 0.5, 1.0), (1.5, 0.6, 0.7), (0.8, 0.3, 2.0)],
            _ => return Err(Error::Config("give all of --alpha, --beta, --t or none".into())),
        };
        let sims = points
            .iter()
            .map(|&(a, b, t)| Ok((WSimulator::new(a, b, t)?, IntervalUnion::left_open(0.0, t)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut rows = Vec::new();
        let mut worst: f64 = 0.0;
        for (i, (&(alpha, beta, t), (sim, q))) in points.iter().zip(&sims).enumerate() {
            let xs: Vec<f64> = w_samples(sim, std::slice::from_ref(q), seed, i as u16, self.reps)?
                .into_iter()
                .map(|v| v[0])
                .collect();
            let fitted = frechet_scale_mle(&xs, alpha);
            let target = t.powf(beta / alpha);
            let err = (fitted / target - 1.0).abs();
            worst = worst.max(err);
            let point = format!("alpha={alpha};beta={beta};t={t}");
            rows.push(Row::info(point.clone(), "fitted_scale", fitted));
            rows.push(Row::info(point.clone(), "target_scale", target));
            rows.push(Row::below(point, "scale_rel_error", err, 0.02));
        }
        Ok(Outcome::new("w-marginal", self, worst, 0.02, rows))
    }
}

/// Probe grid from the 25/50/75% quantiles of each marginal.
fn quantile_grid(scales: &[f64; 2], alpha: f64) -> Result<Vec<[f64; 2]>> {
    let q = |s: f64| -> Result<Vec<f64>> {
        let law = FrechetLaw::new(alpha, s)?;
        Ok([0.25, 0.5, 0.75].iter().map(|&p| law.quantile(p)).collect())
    };
    let (q1, q2) = (q(scales[0])?, q(scales[1])?);
    Ok(q1.iter().flat_map(|&a| q2.iter().map(move |&b| [a, b])).collect())
}

/// Marginal Fréchet scale of the hitting-based vector on (a, b), with the
/// window started at 0.
fn interval_scale(beta: f64, alpha: f64, a: f64, b: f64) -> Result<f64> {
    let spec = JointHitSpec::new(beta, vec![(a, b)], vec![1.0])?;
    Ok(joint_cdf_oracle(&spec, alpha, 0, 0)?.exponent.powf(1.0 / alpha))
}

fn oracle_grid(beta: f64, alpha: f64, intervals: &[(f64, f64); 2], reps: usize, seed: u64) -> Result<Vec<([f64; 2], f64)>> {
    let scales = [
        interval_scale(beta, alpha, intervals[0].0, intervals[0].1)?,
        interval_scale(beta, alpha, intervals[1].0, intervals[1].1)?,
    ];
    quantile_grid(&scales, alpha)?
        .into_iter()
        .map(|l| {
            let spec = JointHitSpec::new(beta, intervals.to_vec(), l.to_vec())?;
            Ok((l, joint_cdf_oracle(&spec, alpha, reps, seed)?.probability))
        })
        .collect()
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WJoint {
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
    /// MC replicates inside the quadrature oracle
    #[arg(long, default_value_t = 4000)]
    pub oracle_reps: usize,
}

impl WJoint {
    fn run(&self, seed: u64) -> Result<Outcome> {
        positive_reps(self.reps)?;
        positive_reps(self.oracle_reps)?;
        let intervals = [(0.2, 0.5), (0.7, 1.0)];
        let sim = WSimulator::new(self.alpha, self.beta, 1.0)?;
        let queries = [IntervalUnion::open(0.2, 0.5)?, IntervalUnion::open(0.7, 1.0)?];
        let grid = oracle_grid(self.beta, self.alpha, &intervals, self.oracle_reps, seed)?;
        let samples = w_samples(&sim, &queries, seed, 1, self.reps)?;
        let mut rows = Vec::new();
        let mut worst: f64 = 0.0;
        for (l, p) in &grid {
            let emp = empirical_joint_cdf(&samples, l);
            let point = format!("lambda1={};lambda2={}", l[0], l[1]);
            rows.push(Row::info(point.clone(), "oracle", *p));
            rows.push(Row::below(point, "abs_error", (emp - p).abs(), 0.01));
            worst = worst.max((emp - p).abs());
        }
        Ok(Outcome::new("w-joint", self, worst, 0.01, rows))
    }
}

/// Test query (0.2, 0.5) ∪ (0.7, 1.0).
fn two_piece_query() -> Result<IntervalUnion> {
    IntervalUnion::from_pairs(&[(0.2, 0.5), (0.7, 1.0)])
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WStationarity {
    #[arg(long, default_value_t = 1.2)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.6)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.5)]
    pub shift: f64,
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
}

impl WStationarity {
    fn run(&self, seed: u64) -> Result<Outcome> {
        positive_reps(self.reps)?;
        let a = two_piece_query()?;
        let shifted = a.translate(self.shift)?;
        let base_sim = WSimulator::new(self.alpha, self.beta, a.sup())?;
        let shift_sim = WSimulator::new(self.alpha, self.beta, shifted.sup())?;
        let x: Vec<f64> = w_samples(&base_sim, &[a], seed, 1, self.reps)?.into_iter().map(|v| v[0]).collect();
        let y: Vec<f64> = w_samples(&shift_sim, &[shifted], seed, 2, self.reps)?.into_iter().map(|v| v[0]).collect();
        let ks = ks_two_sample(&x, &y);
        let rows = vec![Row::below(format!("shift={}", self.shift), "ks_two_sample", ks, 0.01)];
        Ok(Outcome::new("w-stationarity", self, ks, 0.01, rows))
    }
}

fn selfsim_rows(a: &[f64], b: &[f64], c: f64, h: f64, rows: &mut Vec<Row>) -> f64 {
    let zs = selfsim_quantile_z(a, b, c, h, &DECILES);
    let mut worst: f64 = 0.0;
    for (p, z) in zs {
        rows.push(Row::below(format!("p={p}"), "quantile_z", z, 3.0));
        worst = worst.max(z);
    }
    worst
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WSelfsim {
    #[arg(long, default_value_t = 1.2)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.6)]
    pub beta: f64,
    #[arg(long, default_value_t = 2.5)]
    pub c: f64,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
}

impl WSelfsim {
    fn run(&self, seed: u64) -> Result<Outcome> {
        positive_reps(self.reps)?;
        let a = two_piece_query()?;
        let scaled = a.scale(self.c)?;
        let sim_a = WSimulator::new(self.alpha, self.beta, a.sup())?;
        let sim_c = WSimulator::new(self.alpha, self.beta, scaled.sup())?;
        let x: Vec<f64> = w_samples(&sim_a, &[a], seed, 1, self.reps)?.into_iter().map(|v| v[0]).collect();
        let y: Vec<f64> = w_samples(&sim_c, &[scaled], seed, 2, self.reps)?.into_iter().map(|v| v[0]).collect();
        let h = self.beta / self.alpha;
        let mut rows = vec![Row::info("all", "H", h)];
        let worst = selfsim_rows(&x, &y, self.c, h, &mut rows);
        Ok(Outcome::new("w-selfsim", self, worst, 3.0, rows))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ZMarginal {
    #[arg(long, default_value_t = 1.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.6)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.7)]
    pub t: f64,
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
}

impl ZMarginal {
    fn run(&self, seed: u64) -> Result<Outcome> {
        positive_reps(self.reps)?;
        let law = FrechetLaw::new(self.alpha, self.t.powf(self.beta / self.alpha))?;
        WSimulator::new(self.alpha, self.beta, self.t)?;
        let ts = [self.t];
        let xs: Vec<f64> = replicate(seed, 1, self.reps, |r| simulate_z(self.alpha, self.beta, &ts, r))
            .into_iter()
            .map(|v| v.map(|v| v[0]))
            .collect::<Result<_>>()?;
        let ks = ks_statistic(&xs, |x| law.cdf(x));
        let rows = vec![
            Row::info(format!("t={}", self.t), "target_scale", law.sigma()),
            Row::below(format!("t={}", self.t), "ks", ks, 0.01),
        ];
        Ok(Outcome::new("z-marginal", self, ks, 0.01, rows))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ZJoint {
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
}

impl ZJoint {
    fn run(&self, seed: u64) -> Result<Outcome> {
        positive_reps(self.reps)?;
        if !(self.s > 0.0 && self.t > self.s) {
            return Err(Error::Domain {
                name: "t",
                value: self.t,
                constraint: "0 < s < t",
            });
        }
        WSimulator::new(self.alpha, self.beta, self.t)?;
        let ts = [self.s, self.t];
        let samples: Vec<Vec<f64>> = replicate(seed, 1, self.reps, |r| simulate_z(self.alpha, self.beta, &ts, r))
            .into_iter()
            .collect::<Result<_>>()?;
        let mut rows = Vec::new();
        let mut worst: f64 = 0.0;
        for l in [[1.0, 2.0], [0.5, 1.0], [2.0, 1.5]] {
            let exact = z_oracle(self.alpha, self.beta, &ts, &l)?;
            let emp = empirical_joint_cdf(&samples, &l);
            let point = format!("lambda1={};lambda2={}", l[0], l[1]);
            rows.push(Row::info(point.clone(), "oracle", exact));
            rows.push(Row::below(point, "abs_error", (emp - exact).abs(), 0.01));
            worst = worst.max((emp - exact).abs());
        }
        Ok(Outcome::new("z-joint", self, worst, 0.01, rows))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ZGamma {
    #[arg(long, default_value_t = 1.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.2)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.5)]
    pub t: f64,
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    /// shift in the max-increment identity
    #[arg(long, default_value_t = 0.3)]
    pub r: f64,
    /// gap resolution of the range paths (default: 1e-4 times the time)
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
}

impl ZGamma {
    fn run(&self, seed: u64) -> Result<Outcome> {
        let mut params = GammaProcessParams::new(self.alpha, self.beta, self.gamma)?;
        positive_reps(self.reps)?;
        if let Some(eps) = self.eps {
            params = params.with_eps(eps)?;
        }
        if !(self.t > 0.0 && self.c > 0.0) {
            return Err(Error::Config("requires t > 0 and c > 0".into()));
        }
        let sample = |ts: [f64; 1], p: GammaProcessParams, tag: u16, reps: usize| -> Result<Vec<f64>> {
            replicate(seed, tag, reps, |r| simulate_z_gamma(&p, &ts, r).map(|v| v[0]))
                .into_iter()
                .collect()
        };
        // with an explicit eps the scaled copy uses c·eps, keeping the scaling exact
        let scaled_params = match self.eps {
            Some(eps) => params.with_eps(self.c * eps)?,
            None => params,
        };
        let x = sample([self.t], params, 1, self.reps)?;
        let y = sample([self.c * self.t], scaled_params, 2, self.reps)?;
        let h = params.hurst();
        let mut rows = vec![Row::info("all", "H", h)];
        let worst = selfsim_rows(&x, &y, self.c, h, &mut rows);

        let ts = [self.t, self.c * self.t];
        let mismatches = replicate(seed, 3, self.reps, |r| {
            max_increment_shift_sample(self.alpha, self.beta, self.r, &ts, r)
                .map(|s| (s.head_or_shifted() != s.joined) as usize)
        })
        .into_iter()
        .sum::<Result<usize>>()?;
        rows.push(Row::below(format!("r={}", self.r), "max_increment_mismatches", mismatches as f64, 0.0));

        // coarse-vs-fine gap resolution, reported only
        let small = (self.reps / 5).max(2);
        let fine_eps = params.eps.unwrap_or(1e-4 * self.t);
        let fine = sample([self.t], params.with_eps(fine_eps)?, 4, small)?;
        let coarse = sample([self.t], params.with_eps(100.0 * fine_eps)?, 5, small)?;
        rows.push(Row::info(format!("eps={fine_eps}:vs:{}", 100.0 * fine_eps), "ks_two_sample", ks_two_sample(&fine, &coarse)));
        Ok(Outcome::new("z-gamma", self, worst, 3.0, rows))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChainStats {
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    /// balance equations are checked for states 0..=balance_max
    #[arg(long, default_value_t = 1000)]
    pub balance_max: u64,
}

impl ChainStats {
    fn run(&self) -> Result<Outcome> {
        let model = ChainModel::zipf(self.beta)?;
        if self.n < 1 {
            return Err(Error::Domain {
                name: "n",
                value: 0.0,
                constraint: "n >= 1",
            });
        }
        let mut rows = Vec::new();
        let mut balance: f64 = 0.0;
        for i in 0..=self.balance_max {
            let e = (model.invariant_measure(i) - model.jump().tail(i + 1) - model.p0(i)).abs();
            balance = balance.max(e);
        }
        rows.push(Row::below(format!("i<={}", self.balance_max), "balance_error", balance, 1e-12));
        let mass: f64 = (0..=self.balance_max).map(|j| model.p0(j)).sum::<f64>() + model.jump().tail(self.balance_max + 1);
        rows.push(Row::below("all", "pmf_mass_error", (mass - 1.0).abs(), 1e-12));
        let mut k = 10u64;
        while k <= self.n {
            let point = format!("n={k}");
            rows.push(Row::info(point.clone(), "w_n", model.wandering_rate(k)));
            rows.push(Row::info(point.clone(), "bn_alpha", model.bn_alpha(k)));
            rows.push(Row::info(point.clone(), "w_n/n^beta", model.wandering_rate(k) / (k as f64).powf(self.beta)));
            rows.push(Row::info(point, "return_tail*k^(1-beta)", model.return_tail(k) * (k as f64).powf(1.0 - self.beta)));
            k *= 10;
        }
        let ratio = (model.bn_alpha(self.n) / model.wandering_rate(self.n) - 1.0).abs();
        rows.push(Row::below(format!("n={}", self.n), "bn_alpha/w_n-1", ratio, 0.01));
        Ok(Outcome::new("chain-stats", self, balance, 1e-12, rows))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EtaSample {
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[arg(long, default_value_t = 50)]
    pub n: u64,
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
}

impl EtaSample {
    fn run(&self, seed: u64) -> Result<Outcome> {
        let model = ChainModel::zipf(self.beta)?;
        positive_reps(self.reps)?;
        let eta = EtaSampler::new(&model, self.n)?;
        let n = self.n;
        let draws = replicate(seed, 1, self.reps, |r| {
            let p = eta.sample(r);
            (p.start(), p.zero_visits().iter().any(|&v| (1..=n).contains(&v)))
        });
        let misses = draws.iter().filter(|d| !d.1).count();
        let mut counts = vec![0usize; n as usize + 1];
        for (s, _) in &draws {
            counts[*s as usize] += 1;
        }
        let reps = self.reps as f64;
        // 3-sigma family-wise level shared across the n+1 cells
        let crit = bonferroni_z(0.0027, counts.len());
        let mut rows = vec![Row::below("all", "paths_missing_zero", misses as f64, 0.0)];
        let mut worst: f64 = 0.0;
        for (i, &c) in counts.iter().enumerate() {
            let p = eta.start_probability(i as u64);
            let z = (c as f64 / reps - p).abs() / (p * (1.0 - p) / reps).sqrt();
            worst = worst.max(z);
            rows.push(Row::info(format!("start={i}"), "z", z));
        }
        rows.push(Row::below("all", "max_z", worst, crit));
        Ok(Outcome::new("eta-sample", self, worst, crit, rows))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct YnConverge {
    #[arg(long, default_value_t = 1.2)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.6)]
    pub beta: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [100u64, 1000, 10000])]
    pub n_list: Vec<u64>,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    #[arg(long, default_value_t = 4000)]
    pub oracle_reps: usize,
}

impl YnConverge {
    fn run(&self, seed: u64) -> Result<Outcome> {
        let model = ChainModel::zipf(self.beta)?;
        positive_reps(self.reps)?;
        positive_reps(self.oracle_reps)?;
        let intervals = [(0.1, 0.4), (0.6, 1.0)];
        let samplers = self
            .n_list
            .iter()
            .map(|&n| YnSampler::new(&model, self.alpha, n, &intervals))
            .collect::<Result<Vec<_>>>()?;
        let grid = oracle_grid(self.beta, self.alpha, &intervals, self.oracle_reps, seed)?;
        let mut rows = Vec::new();
        for (l, p) in &grid {
            rows.push(Row::info(format!("lambda1={};lambda2={}", l[0], l[1]), "oracle", *p));
        }
        let mut gaps = Vec::new();
        for (s, &n) in samplers.iter().zip(&self.n_list) {
            // same streams for every n
            let samples = replicate(seed, 1, self.reps, |r| s.sample(r));
            let gap = grid
                .iter()
                .map(|(l, p)| (empirical_joint_cdf(&samples, l) - p).abs())
                .fold(0.0, f64::max);
            rows.push(Row::info(format!("n={n}"), "max_cdf_gap", gap));
            gaps.push(gap);
        }
        let last = gaps.last().copied().unwrap_or(f64::NAN);
        rows.push(Row::flag("all", "gap_decreasing", strictly_decreasing(&gaps)));
        rows.push(Row::below("largest_n", "max_cdf_gap", last, 0.05));
        Ok(Outcome::new("yn-converge", self, last, 0.05, rows))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RenewalRangeArgs {
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [100.0, 10000.0])]
    pub theta_list: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 2.0)]
    pub b: f64,
    #[arg(long, default_value_t = 100_000)]
    pub reps: usize,
}

impl RenewalRangeArgs {
    fn run(&self, seed: u64) -> Result<Outcome> {
        positive_reps(self.reps)?;
        let walks = self
            .theta_list
            .iter()
            .map(|&th| RenewalRange::new(self.gamma, th))
            .collect::<Result<Vec<_>>>()?;
        let q = IntervalUnion::open(self.a, self.b)?;
        // limit set: range of a gamma-stable subordinator
        let exact = hit_prob_closed_form(1.0 - self.gamma, 0.0, self.a, self.b)?;
        let mut rows = vec![Row::info("limit", "hit_probability", exact)];
        let mut gaps = Vec::new();
        for (w, &th) in walks.iter().zip(&self.theta_list) {
            let hits = replicate(seed, 1, self.reps, |r| w.hits(&q, r)[0]);
            let freq = hits.iter().filter(|&&h| h).count() as f64 / self.reps as f64;
            rows.push(Row::info(format!("theta={th}"), "hit_frequency", freq));
            gaps.push((freq - exact).abs());
            rows.push(Row::info(format!("theta={th}"), "abs_gap", (freq - exact).abs()));
        }
        let last = gaps.last().copied().unwrap_or(f64::NAN);
        rows.push(Row::flag("all", "gap_decreasing", strictly_decreasing(&gaps)));
        rows.push(Row::below("largest_theta", "abs_gap", last, 0.02));
        Ok(Outcome::new("renewal-range", self, last, 0.02, rows))
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SasConverge {
    #[arg(long, default_value_t = 1.2)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.7)]
    pub beta: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [1024u64, 4096, 16384])]
    pub n_list: Vec<u64>,
    #[arg(long, default_value_t = 2000)]
    pub reps: usize,
    /// root-mean-square bound on the truncated series tail, in limit units
    #[arg(long, default_value_t = 3e-3)]
    pub tol: f64,
    /// also compare the joint law on (0,1/2] x (1/2,1] against W runs
    #[arg(long)]
    pub joint: bool,
    /// run with beta <= 1/2, where convergence is not established
    #[arg(long)]
    pub exploratory: bool,
}

impl SasConverge {
    fn run(&self, seed: u64) -> Result<Outcome> {
        tail_constant(self.alpha)?;
        positive_reps(self.reps)?;
        let cfg = ConvergenceConfig {
            alpha: self.alpha,
            beta: self.beta,
            n_list: self.n_list.clone(),
            reps: self.reps,
            tol: self.tol,
            joint: self.joint,
            exploratory: self.exploratory,
        };
        let report = convergence_experiment(&cfg, seed)?;
        let mut rows = Vec::new();
        if report.exploratory {
            rows.push(Row::info("exploratory", "beta_at_most_half", 1.0));
        }
        for r in &report.rows {
            let point = format!("n={}", r.n);
            rows.push(Row::info(point.clone(), "bn", r.bn));
            rows.push(Row::info(point.clone(), "terms", r.terms as f64));
            rows.push(Row::info(point.clone(), "ks", r.ks_marginal));
            if let Some(g) = r.joint_gap {
                rows.push(Row::info(point, "joint_gap", g));
            }
        }
        let ks: Vec<f64> = report.rows.iter().map(|r| r.ks_marginal).collect();
        let last = ks.last().copied().unwrap_or(f64::NAN);
        rows.push(Row::flag("all", "ks_decreasing", strictly_decreasing(&ks)));
        if self.joint {
            let gaps: Vec<f64> = report.rows.iter().filter_map(|r| r.joint_gap).collect();
            rows.push(Row::flag("all", "joint_gap_decreasing", strictly_decreasing(&gaps)));
        }
        rows.push(Row::below("largest_n", "ks", last, 0.1));
        Ok(Outcome::new("sas-converge", self, last, 0.1, rows))
    }
}
