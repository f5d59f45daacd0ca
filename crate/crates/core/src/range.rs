//! The range R_β of the standard (1−β)-stable subordinator L_{1−β}.
//!
//! Two representations:
//! * [`RangeProbe`] answers hitting queries exactly by walking overshoots
//!   left to right (strong Markov property at passage times).
//! * [`RangePath`] is an eps-truncated path (jumps ≥ eps kept, smaller
//!   jumps replaced by their mean drift), needed for gap functionals.
//!
//! Lévy measure: ν(ds) = ((1−β)/Γ(β)) s^{−(2−β)} ds, the unique measure
//! with Laplace exponent θ^{1−β}.

use rand::Rng;
use statrs::function::gamma::gamma;

use crate::dist::OvershootLaw;
use crate::error::{check, Error, Result};
use crate::interval::IntervalUnion;
use crate::rng::{exp1, open01};

/// Exact lazy hitting engine for R_β + x.
#[derive(Debug, Clone)]
pub struct RangeProbe {
    law: OvershootLaw,
    current_point: f64,
    frontier: f64,
}

impl RangeProbe {
    /// Probe for R_β + x (x ≥ 0); x itself is a point of the set.
    pub fn new(beta: f64, x: f64) -> Result<Self> {
        check(x >= 0.0 && x.is_finite(), "x", x, "shift x >= 0")?;
        Ok(Self {
            law: OvershootLaw::unit(beta)?,
            current_point: x,
            frontier: 0.0,
        })
    }

    pub(crate) fn with_law(law: &OvershootLaw, x: f64) -> Self {
        Self {
            law: law.at_level(1.0),
            current_point: x,
            frontier: 0.0,
        }
    }

    pub fn beta(&self) -> f64 {
        self.law.beta()
    }

    /// Last point of the set the walk has revealed.
    pub fn current_point(&self) -> f64 {
        self.current_point
    }

    /// Joint hitting indicators for the intervals of `q`, which must lie to
    /// the right of everything queried before on this probe.
    pub fn hits<R: Rng + ?Sized>(&mut self, q: &IntervalUnion, rng: &mut R) -> Result<Vec<bool>> {
        if let Some(first) = q.intervals().first() {
            if first.left < self.frontier {
                return Err(Error::Interval {
                    left: first.left,
                    right: first.right,
                    reason: "probe already advanced past this interval",
                });
            }
        }
        Ok(q
            .iter()
            .map(|iv| self.hit_one(iv.left, iv.right, rng))
            .collect())
    }

    #[inline]
    pub(crate) fn hit_one<R: Rng + ?Sized>(&mut self, a: f64, b: f64, rng: &mut R) -> bool {
        self.frontier = b;
        let p = self.current_point;
        if p >= b {
            return false;
        }
        if p >= a {
            // p ∈ (a, b), or p = a where points accumulate to the right.
            return true;
        }
        let next = a + (a - p) * self.law.sample(rng);
        self.current_point = next;
        next < b
    }
}

/// Exact joint sample of the hitting indicators of R_β + x for each interval.
pub fn probe_hits<R: Rng + ?Sized>(
    beta: f64,
    x: f64,
    q: &IntervalUnion,
    rng: &mut R,
) -> Result<Vec<bool>> {
    RangeProbe::new(beta, x)?.hits(q, rng)
}

/// P((R_β + x) ∩ (a, b) ≠ ∅).
pub fn hit_prob_closed_form(beta: f64, x: f64, a: f64, b: f64) -> Result<f64> {
    check(a >= 0.0 && b > a, "b", b, "0 <= a < b")?;
    let law = OvershootLaw::unit(beta)?;
    Ok(hit_prob_with(&law, x, a, b))
}

pub(crate) fn hit_prob_with(law: &OvershootLaw, x: f64, a: f64, b: f64) -> f64 {
    if x >= b {
        0.0
    } else if x >= a {
        1.0
    } else {
        law.at_level(a - x).cdf(b - a)
    }
}

/// Rate ν([eps, ∞)) = eps^{−(1−β)}/Γ(β) of retained jumps per unit operational time.
pub fn jump_rate(beta: f64, eps: f64) -> f64 {
    eps.powf(beta - 1.0) / gamma(beta)
}

/// Mean drift ∫_0^eps s ν(ds) = ((1−β)/Γ(β))·eps^β/β standing in for the removed small jumps.
pub fn small_jump_drift(beta: f64, eps: f64) -> f64 {
    (1.0 - beta) / gamma(beta) * eps.powf(beta) / beta
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    /// Position just before the jump.
    pub location: f64,
    pub size: f64,
}

/// eps-truncated subordinator path. The range is [0, end] minus the open
/// jump intervals (location, location + size).
#[derive(Debug, Clone)]
pub struct RangePath {
    beta: f64,
    horizon: f64,
    eps: f64,
    jumps: Vec<Jump>,
    /// Operational times of the jumps (empty for hand-built paths).
    jump_times: Vec<f64>,
    drift_rate: f64,
    end: f64,
}

impl RangePath {
    /// Path assembled from explicit jumps; used for hand-checked cases.
    pub fn from_jumps(beta: f64, eps: f64, jumps: Vec<Jump>, end: f64) -> Result<Self> {
        check(beta > 0.0 && beta < 1.0, "beta", beta, "0 < beta < 1")?;
        check(eps > 0.0, "eps", eps, "eps > 0")?;
        let mut reach = 0.0;
        for j in &jumps {
            check(j.size >= eps, "jump size", j.size, "size >= eps")?;
            check(j.location >= reach, "jump location", j.location, "jumps ordered and non-overlapping")?;
            reach = j.location + j.size;
        }
        check(end >= reach, "end", end, "end at or beyond the last jump")?;
        Ok(Self {
            beta,
            horizon: end,
            eps,
            jumps,
            jump_times: Vec::new(),
            drift_rate: small_jump_drift(beta, eps),
            end,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    pub fn jump_times(&self) -> &[f64] {
        &self.jump_times
    }

    pub fn drift_rate(&self) -> f64 {
        self.drift_rate
    }

    /// Final position, ≥ horizon. A point of the range.
    pub fn end(&self) -> f64 {
        self.end
    }

    /// Index of the last jump with location ≤ y, if any.
    fn jump_at_or_before(&self, y: f64) -> Option<usize> {
        let idx = self.jumps.partition_point(|j| j.location <= y);
        idx.checked_sub(1)
    }

    /// Does range + x meet the open interval (a, b)? Requires b ≤ x + end
    /// or a < x + end.
    pub fn hits(&self, x: f64, a: f64, b: f64) -> bool {
        if b <= x {
            return false;
        }
        if a < x {
            return true;
        }
        debug_assert!(a < x + self.end, "query beyond simulated horizon");
        let y = a - x;
        match self.jump_at_or_before(y) {
            Some(k) => {
                let j = self.jumps[k];
                let gap_end = j.location + j.size;
                !(y < gap_end && b - x <= gap_end)
            }
            None => true,
        }
    }

    pub fn hits_union(&self, x: f64, q: &IntervalUnion) -> Vec<bool> {
        q.iter().map(|iv| self.hits(x, iv.left, iv.right)).collect()
    }

    /// j_{s,t}(range + x): the longest gap whose left end lies in (s, t);
    /// 0 when s ≥ t or no gap starts there.
    pub fn longest_gap(&self, s: f64, t: f64, x: f64) -> f64 {
        if s >= t {
            return 0.0;
        }
        let lo = self.jumps.partition_point(|j| j.location + x <= s);
        let hi = self.jumps.partition_point(|j| j.location + x < t);
        self.jumps[lo..hi.max(lo)]
            .iter()
            .map(|j| j.size)
            .fold(0.0, f64::max)
    }
}

/// Simulates L_{1−β} with jumps ≥ eps until its position exceeds `horizon`.
pub fn sample_path<R: Rng + ?Sized>(beta: f64, horizon: f64, eps: f64, rng: &mut R) -> Result<RangePath> {
    check(beta > 0.0 && beta < 1.0, "beta", beta, "0 < beta < 1")?;
    check(horizon > 0.0 && horizon.is_finite(), "horizon", horizon, "horizon > 0")?;
    check(eps > 0.0, "eps", eps, "eps > 0")?;
    Ok(sample_path_unchecked(beta, horizon, eps, rng))
}

pub(crate) fn sample_path_unchecked<R: Rng + ?Sized>(beta: f64, horizon: f64, eps: f64, rng: &mut R) -> RangePath {
    let rate = jump_rate(beta, eps);
    let drift = small_jump_drift(beta, eps);
    let tail_exp = -1.0 / (1.0 - beta);
    let mut jumps = Vec::new();
    let mut jump_times = Vec::new();
    let mut pos = 0.0;
    let mut time = 0.0;
    let end = loop {
        let dt = exp1(rng) / rate;
        time += dt;
        let before = pos + drift * dt;
        if before >= horizon {
            break before;
        }
        let size = eps * open01(rng).powf(tail_exp);
        jumps.push(Jump {
            location: before,
            size,
        });
        jump_times.push(time);
        pos = before + size;
        if pos >= horizon {
            break pos;
        }
    };
    RangePath {
        beta,
        horizon,
        eps,
        jumps,
        jump_times,
        drift_rate: drift,
        end,
    }
}

/// j_{s,t}(range(path) + x).
pub fn longest_gap(path: &RangePath, s: f64, t: f64, x: f64) -> f64 {
    path.longest_gap(s, t, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn hand_path() -> RangePath {
        let jumps = vec![
            Jump {
                location: 0.0,
                size: 0.5,
            },
            Jump {
                location: 0.5,
                size: 1.5,
            },
        ];
        RangePath::from_jumps(0.5, 1e-3, jumps, 2.2).unwrap()
    }

    #[test]
    fn gap_functional_by_hand() {
        let p = hand_path();
        assert_eq!(longest_gap(&p, 0.5, 0.5, 0.0), 0.0);
        assert_eq!(longest_gap(&p, 0.0, 1.0, 0.0), 1.5);
        assert_eq!(longest_gap(&p, 0.0, 0.4, 0.0), 0.0);
        // gap (0,0.5) starts at 0, which is not in the open window (0, t)
        assert_eq!(longest_gap(&p, 0.0, 0.5, 0.0), 0.0);
        // shifted copy
        assert_eq!(longest_gap(&p, 1.0, 2.0, 1.0), 1.5);
        assert_eq!(longest_gap(&p, 0.5, 1.4, 1.0), 0.5);
    }

    #[test]
    fn path_hitting_by_hand() {
        let p = hand_path();
        assert!(!p.hits(0.0, 0.1, 0.4));
        assert!(p.hits(0.0, 0.1, 0.6));
        assert!(!p.hits(0.0, 0.6, 1.9));
        assert!(p.hits(0.0, 1.9, 2.1));
        assert!(!p.hits(3.0, 1.0, 2.0));
        assert!(p.hits(1.5, 1.0, 2.0));
    }

    #[test]
    fn probe_trivial_cases() {
        let q = IntervalUnion::from_pairs(&[(1.0, 2.0)]).unwrap();
        let mut rng = stream(3, 0);
        for _ in 0..100 {
            assert_eq!(probe_hits(0.5, 1.5, &q, &mut rng).unwrap(), vec![true]);
            assert_eq!(probe_hits(0.5, 5.0, &q, &mut rng).unwrap(), vec![false]);
        }
    }

    #[test]
    fn probe_refuses_to_revisit() {
        let mut rng = stream(3, 1);
        let mut probe = RangeProbe::new(0.5, 0.0).unwrap();
        probe.hits(&IntervalUnion::open(2.0, 3.0).unwrap(), &mut rng).unwrap();
        let before = probe.current_point();
        assert!(probe.hits(&IntervalUnion::open(1.0, 1.5).unwrap(), &mut rng).is_err());
        probe.hits(&IntervalUnion::open(4.0, 5.0).unwrap(), &mut rng).unwrap();
        assert!(probe.current_point() >= before);
    }

    #[test]
    fn closed_form_cases() {
        assert!((hit_prob_closed_form(0.5, 0.0, 1.0, 2.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((hit_prob_closed_form(0.5, 0.0, 2.0, 4.0).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(hit_prob_closed_form(0.3, 3.0, 1.0, 2.0).unwrap(), 0.0);
        assert_eq!(hit_prob_closed_form(0.3, 1.0, 1.0, 2.0).unwrap(), 1.0);
        assert_eq!(hit_prob_closed_form(0.3, 1.5, 1.0, 2.0).unwrap(), 1.0);
        assert!(hit_prob_closed_form(0.3, 0.0, 2.0, 1.0).is_err());
        // depends on (a, b) only through b/a
        let p1 = hit_prob_closed_form(0.35, 0.0, 1.3, 2.9).unwrap();
        let p2 = hit_prob_closed_form(0.35, 0.0, 13.0, 29.0).unwrap();
        assert!((p1 - p2).abs() < 1e-12);
    }

    #[test]
    fn path_is_increasing_and_covers_horizon() {
        let mut rng = stream(5, 0);
        let p = sample_path(0.4, 3.0, 1e-3, &mut rng).unwrap();
        assert!(p.end() >= 3.0);
        let mut last = -1.0;
        for j in p.jumps() {
            assert!(j.location > last);
            assert!(j.size >= 1e-3);
            last = j.location + j.size;
        }
        let expected = (1.0 - 0.4) / gamma(0.4) * 1e-3f64.powf(0.4) / 0.4;
        assert!((p.drift_rate() - expected).abs() < 1e-15);
        assert!(sample_path(0.4, 0.0, 1e-3, &mut rng).is_err());
        assert!(sample_path(0.4, 1.0, 0.0, &mut rng).is_err());
    }
}
