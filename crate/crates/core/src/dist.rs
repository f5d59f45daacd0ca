//! Scalar laws: Fréchet, the stable tail constant, and the overshoot of a
//! level by the (1−β)-stable subordinator.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;
use statrs::function::gamma::gamma;

use crate::error::{check, Result};
use crate::quad::{gk15, integrate};
use crate::rng::open01;

/// Fréchet law F(x) = exp(−σ^α x^{−α}) on (0, ∞).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrechetLaw {
    alpha: f64,
    sigma: f64,
}

impl FrechetLaw {
    pub fn new(alpha: f64, sigma: f64) -> Result<Self> {
        check(alpha > 0.0 && alpha.is_finite(), "alpha", alpha, "alpha > 0")?;
        check(sigma > 0.0 && sigma.is_finite(), "sigma", sigma, "sigma > 0")?;
        Ok(Self { alpha, sigma })
    }

    /// Standard law with unit scale.
    pub fn standard(alpha: f64) -> Result<Self> {
        Self::new(alpha, 1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        (-(self.sigma / x).powf(self.alpha)).exp()
    }

    /// −ln F(x) = σ^α x^{−α}; the exponent measure of (x, ∞).
    pub fn exponent(&self, x: f64) -> f64 {
        (self.sigma / x).powf(self.alpha)
    }

    pub fn quantile(&self, p: f64) -> f64 {
        self.sigma * (-p.ln()).powf(-1.0 / self.alpha)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(open01(rng))
    }

    /// Law of the maximum of `n` independent copies: F^n = F_{α, n^{1/α}σ}.
    pub fn max_of(&self, n: u32) -> Self {
        Self {
            alpha: self.alpha,
            sigma: self.sigma * (n as f64).powf(1.0 / self.alpha),
        }
    }

    /// Law of c·X for c > 0.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            alpha: self.alpha,
            sigma: self.sigma * c,
        }
    }
}

/// Tail constant C_α = (∫_0^∞ x^{−α} sin x dx)^{−1} of an α-stable law.
///
/// Evaluated as (2/π)·(x / sin x)/Γ(2−α) with x = π(1−α)/2, which is the
/// closed form (1−α)/(Γ(2−α)cos(πα/2)) with the removable singularity at
/// α = 1 cancelled analytically.
pub fn tail_constant(alpha: f64) -> Result<f64> {
    check(alpha > 0.0 && alpha < 2.0, "alpha", alpha, "0 < alpha < 2")?;
    let x = 0.5 * PI * (1.0 - alpha);
    let x_over_sin = if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 6.0 + 7.0 * x2 * x2 / 360.0
    } else {
        x / x.sin()
    };
    Ok(2.0 / PI * x_over_sin / gamma(2.0 - alpha))
}

const TABLE_NODES: usize = 2048;

/// Cumulative tables for one β.
///
/// The unit-level overshoot CDF splits at u = 1 into two finite-range
/// integrals with smooth integrands:
///   P(δ_1 ≤ u)  = (c/β)     ∫_0^{u^β}     dv / (1 + v^{1/β}),      u ≤ 1
///   P(δ_1 > u)  = (c/(1−β)) ∫_0^{u^{β−1}} dw / (1 + w^{1/(1−β)}),  u ≥ 1
/// with c = sin(π(1−β))/π. Each branch is tabulated on 2048 nodes of [0, 1].
#[derive(Debug)]
struct OvershootTable {
    beta: f64,
    lower: Branch,
    upper: Branch,
}

#[derive(Debug)]
struct Branch {
    /// prefactor c/β (lower) or c/(1−β) (upper)
    scale: f64,
    /// exponent 1/β (lower) or 1/(1−β) (upper)
    power: f64,
    cum: Vec<f64>,
}

impl Branch {
    fn new(scale: f64, power: f64) -> Self {
        let h = 1.0 / (TABLE_NODES - 1) as f64;
        let mut cum = Vec::with_capacity(TABLE_NODES);
        cum.push(0.0);
        let mut acc = 0.0;
        for k in 0..TABLE_NODES - 1 {
            let a = k as f64 * h;
            let piece = integrate(|v| scale / (1.0 + v.powf(power)), a, a + h, 1e-17, 1e-15);
            acc += piece.value;
            cum.push(acc);
        }
        Self { scale, power, cum }
    }

    #[inline]
    fn density(&self, v: f64) -> f64 {
        self.scale / (1.0 + v.powf(self.power))
    }

    fn total(&self) -> f64 {
        self.cum[TABLE_NODES - 1]
    }

    /// Exact cumulative value at v ∈ [0, 1]: table node plus one Kronrod panel.
    fn value(&self, v: f64) -> f64 {
        let v = v.clamp(0.0, 1.0);
        let h = 1.0 / (TABLE_NODES - 1) as f64;
        let k = ((v / h) as usize).min(TABLE_NODES - 2);
        let a = k as f64 * h;
        if v == a {
            return self.cum[k];
        }
        self.cum[k] + gk15(&|x| self.density(x), a, v).0
    }

    /// Inverse of the cumulative function via the cubic Hermite interpolant
    /// built from node values and exact node derivatives.
    fn inverse(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if y >= self.total() {
            return 1.0;
        }
        let k = match self.cum.binary_search_by(|c| c.total_cmp(&y)) {
            Ok(i) => return i as f64 / (TABLE_NODES - 1) as f64,
            Err(i) => i - 1,
        };
        let h = 1.0 / (TABLE_NODES - 1) as f64;
        let a = k as f64 * h;
        let (y0, y1) = (self.cum[k], self.cum[k + 1]);
        let (m0, m1) = (self.density(a) * h, self.density(a + h) * h);
        let hermite = |t: f64| {
            let t2 = t * t;
            let t3 = t2 * t;
            (2.0 * t3 - 3.0 * t2 + 1.0) * y0
                + (t3 - 2.0 * t2 + t) * m0
                + (-2.0 * t3 + 3.0 * t2) * y1
                + (t3 - t2) * m1
        };
        // Bisection on the interpolant; it is increasing on the cell.
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        let mut t = ((y - y0) / (y1 - y0)).clamp(0.0, 1.0);
        for _ in 0..60 {
            if hermite(t) < y {
                lo = t;
            } else {
                hi = t;
            }
            if hi - lo < 1e-13 {
                break;
            }
            t = 0.5 * (lo + hi);
        }
        a + h * 0.5 * (lo + hi)
    }
}

impl OvershootTable {
    fn new(beta: f64) -> Self {
        let c = (PI * (1.0 - beta)).sin() / PI;
        Self {
            beta,
            lower: Branch::new(c / beta, 1.0 / beta),
            upper: Branch::new(c / (1.0 - beta), 1.0 / (1.0 - beta)),
        }
    }

    fn cdf_unit(&self, u: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else if u <= 1.0 {
            self.lower.value(u.powf(self.beta))
        } else {
            1.0 - self.upper.value(u.powf(self.beta - 1.0))
        }
    }

    fn survival_unit(&self, u: f64) -> f64 {
        if u <= 0.0 {
            1.0
        } else if u <= 1.0 {
            1.0 - self.lower.value(u.powf(self.beta))
        } else {
            self.upper.value(u.powf(self.beta - 1.0))
        }
    }

    fn quantile_unit(&self, p: f64) -> f64 {
        let split = self.lower.total();
        if p < split {
            self.lower.inverse(p).powf(1.0 / self.beta)
        } else {
            let w = self.upper.inverse(1.0 - p);
            if w <= 0.0 {
                f64::INFINITY
            } else {
                w.powf(-1.0 / (1.0 - self.beta))
            }
        }
    }
}

fn table_for(beta: f64) -> Arc<OvershootTable> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<OvershootTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("overshoot table cache poisoned");
    guard
        .entry(beta.to_bits())
        .or_insert_with(|| Arc::new(OvershootTable::new(beta)))
        .clone()
}

/// Law of the overshoot δ_h of level h by the (1−β)-stable subordinator,
/// density f_h(y) = sin(π(1−β))/π · h^{1−β} (y+h)^{−1} y^{β−1}.
///
/// δ_h has the law of h·δ_1; all evaluation goes through the unit level.
#[derive(Debug, Clone)]
pub struct OvershootLaw {
    beta: f64,
    h: f64,
    table: Arc<OvershootTable>,
}

impl OvershootLaw {
    pub fn new(beta: f64, h: f64) -> Result<Self> {
        check(beta > 0.0 && beta < 1.0, "beta", beta, "0 < beta < 1")?;
        check(h >= 0.0 && h.is_finite(), "h", h, "h >= 0")?;
        Ok(Self {
            beta,
            h,
            table: table_for(beta),
        })
    }

    pub fn unit(beta: f64) -> Result<Self> {
        Self::new(beta, 1.0)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn level(&self) -> f64 {
        self.h
    }

    /// Same β at another level; shares the tables.
    pub fn at_level(&self, h: f64) -> Self {
        Self {
            beta: self.beta,
            h,
            table: self.table.clone(),
        }
    }

    pub fn pdf(&self, y: f64) -> Result<f64> {
        check(y > 0.0, "y", y, "y > 0")?;
        check(self.h > 0.0, "h", self.h, "h > 0")?;
        let c = (PI * (1.0 - self.beta)).sin() / PI;
        Ok(c * self.h.powf(1.0 - self.beta) / (y + self.h) * y.powf(self.beta - 1.0))
    }

    /// P(δ_h ≤ u). At level 0 the overshoot is 0 (the range contains its
    /// starting point).
    pub fn cdf(&self, u: f64) -> f64 {
        if self.h == 0.0 {
            return if u >= 0.0 { 1.0 } else { 0.0 };
        }
        self.table.cdf_unit(u / self.h)
    }

    /// P(δ_h > u), computed without cancellation in the far tail.
    pub fn survival(&self, u: f64) -> f64 {
        if self.h == 0.0 {
            return if u >= 0.0 { 0.0 } else { 1.0 };
        }
        self.table.survival_unit(u / self.h)
    }

    pub fn quantile(&self, p: f64) -> f64 {
        self.h * self.table.quantile_unit(p)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.quantile(open01(rng))
    }
}
