//! Sup measures on [0, ∞) and the three Fréchet processes built from the
//! Poisson representation Ŵ(A) = ⋁_i U_i·1((R^{(i)} + V_i) ∩ A ≠ ∅).
//!
//! Points are generated in decreasing U (increasing Poisson arrivals Γ_j).
//! Only points with V ≤ T can touch a query inside (0, T], so the location
//! law is restricted to (0, T] with density βy^{β−1}/T^β and the arrival
//! rate carries the mass T^β: U_j = (Γ_j/T^β)^{−1/α}.

use rand::Rng;
use rand_distr::{Beta, Distribution, Poisson};

use crate::dist::OvershootLaw;
use crate::error::{check, Error, Result};
use crate::interval::{Interval, IntervalUnion};
use crate::range::{sample_path_unchecked, RangeProbe};
use crate::rng::{exp1, open01};

/// Piecewise-constant upper semicontinuous function on a grid: one value
/// per open cell (g_k, g_{k+1}) and one per node g_k. Zero off the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Vec<f64>,
    cells: Vec<f64>,
    nodes: Vec<f64>,
}

impl GridFunction {
    /// Node values are raised to the max of the adjacent cells, which is the
    /// u.s.c. regularization.
    pub fn new(grid: Vec<f64>, cells: Vec<f64>, nodes: Vec<f64>) -> Result<Self> {
        if grid.len() < 2 || cells.len() + 1 != grid.len() || nodes.len() != grid.len() {
            return Err(Error::Config("grid needs n+1 nodes, n cells and n+1 node values".into()));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) || grid[0] < 0.0 {
            return Err(Error::Config("grid must be strictly increasing in [0, inf)".into()));
        }
        if cells.iter().chain(&nodes).any(|v| !(*v >= 0.0)) {
            return Err(Error::Config("values must be nonnegative".into()));
        }
        let mut nodes = nodes;
        let n = cells.len();
        for k in 0..=n {
            let left = if k > 0 { cells[k - 1] } else { 0.0 };
            let right = if k < n { cells[k] } else { 0.0 };
            nodes[k] = nodes[k].max(left).max(right);
        }
        Ok(Self { grid, cells, nodes })
    }

    /// Cell values only (nodes take the u.s.c. envelope).
    pub fn from_cells(grid: Vec<f64>, cells: Vec<f64>) -> Result<Self> {
        let nodes = vec![0.0; grid.len()];
        Self::new(grid, cells, nodes)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn eval(&self, t: f64) -> f64 {
        let g = &self.grid;
        if t < g[0] || t > g[g.len() - 1] {
            return 0.0;
        }
        match g.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(k) => self.nodes[k],
            Err(k) => self.cells[k - 1],
        }
    }

    fn sup_over(&self, a: f64, b: f64) -> f64 {
        let mut best: f64 = 0.0;
        for (k, &v) in self.cells.iter().enumerate() {
            if self.grid[k] < b && self.grid[k + 1] > a {
                best = best.max(v);
            }
        }
        for (k, &v) in self.nodes.iter().enumerate() {
            if a < self.grid[k] && self.grid[k] < b {
                best = best.max(v);
            }
        }
        best
    }
}

/// i-check f(G) = sup_{t∈G} f(t), with i-check f(∅) = 0.
pub fn sup_integral(f: &GridFunction, g: &IntervalUnion) -> f64 {
    g.iter()
        .map(|iv| {
            let s = f.sup_over(iv.left, iv.right);
            if iv.right_closed {
                s.max(f.eval(iv.right))
            } else {
                s
            }
        })
        .fold(0.0, f64::max)
}

/// Sup measure represented by its sup derivative on a grid; a testing
/// vehicle for the sup-measure algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSupMeasure {
    density: GridFunction,
}

impl GridSupMeasure {
    /// The sup integral of `f`.
    pub fn from_function(f: GridFunction) -> Self {
        Self { density: f }
    }

    pub fn zero(grid: Vec<f64>) -> Result<Self> {
        let n = grid.len();
        Ok(Self::from_function(GridFunction::new(grid, vec![0.0; n - 1], vec![0.0; n])?))
    }

    pub fn measure(&self, g: &IntervalUnion) -> f64 {
        sup_integral(&self.density, g)
    }
}

/// d-check m(t) = inf over grid-open sets G ∋ t of m(G). The smallest such
/// set is the cell containing t, or the two cells around a node.
pub fn sup_derivative(m: &GridSupMeasure, t: f64) -> f64 {
    let g = m.density.grid();
    let last = g.len() - 1;
    if t < g[0] || t > g[last] {
        return 0.0;
    }
    let (a, b) = match g.binary_search_by(|x| x.total_cmp(&t)) {
        Ok(k) => (
            if k == 0 { f64::NEG_INFINITY } else { g[k - 1] },
            if k == last { f64::INFINITY } else { g[k + 1] },
        ),
        Err(k) => (g[k - 1], g[k]),
    };
    m.density.sup_over(a, b)
}

/// One Poisson point of the representation, with its hitting pattern on the
/// elementary pieces of the queries.
#[derive(Debug, Clone)]
pub struct PoissonPoint {
    pub arrival: f64,
    pub weight: f64,
    pub location: f64,
}

/// A realized (truncated) Poisson family together with the values it
/// assigns to each query.
#[derive(Debug, Clone)]
pub struct PoissonSupMeasure {
    pub alpha: f64,
    pub beta: f64,
    pub window: f64,
    pub points: Vec<PoissonPoint>,
    pub values: Vec<f64>,
    /// True when generation ended by the exact stopping rule, false when it
    /// ended at a point budget or the weight floor.
    pub exact: bool,
}

/// Elementary pieces of a family of queries: the cells between consecutive
/// endpoints that lie inside at least one query interval.
struct Atoms {
    pieces: Vec<(f64, f64)>,
    /// piece indices per query
    members: Vec<Vec<usize>>,
}

impl Atoms {
    fn new(queries: &[IntervalUnion]) -> Self {
        let mut ends: Vec<f64> = queries
            .iter()
            .flat_map(|q| q.iter().flat_map(|iv| [iv.left, iv.right]))
            .collect();
        ends.sort_by(f64::total_cmp);
        ends.dedup();
        let mut pieces = Vec::new();
        let mut members = vec![Vec::new(); queries.len()];
        for w in ends.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            let owners: Vec<usize> = queries
                .iter()
                .enumerate()
                .filter(|(_, q)| q.iter().any(|iv| iv.left < mid && mid < iv.right))
                .map(|(i, _)| i)
                .collect();
            if !owners.is_empty() {
                let idx = pieces.len();
                pieces.push((w[0], w[1]));
                for i in owners {
                    members[i].push(idx);
                }
            }
        }
        Self { pieces, members }
    }
}

/// Sampler for joint values of Ŵ_{α,β} on finitely many queries.
#[derive(Debug, Clone)]
pub struct WSimulator {
    alpha: f64,
    beta: f64,
    window: f64,
    u_min: f64,
    law: OvershootLaw,
}

impl WSimulator {
    pub fn new(alpha: f64, beta: f64, window: f64) -> Result<Self> {
        check(alpha > 0.0, "alpha", alpha, "alpha > 0")?;
        check(window > 0.0 && window.is_finite(), "T", window, "0 < T < inf")?;
        Ok(Self {
            alpha,
            beta,
            window,
            u_min: 1e-9,
            law: OvershootLaw::unit(beta)?,
        })
    }

    /// Weight floor below which generation stops even if some query is
    /// still unhit.
    pub fn with_u_min(mut self, u_min: f64) -> Self {
        self.u_min = u_min;
        self
    }

    fn check_queries(&self, queries: &[IntervalUnion]) -> Result<()> {
        for q in queries {
            if let Some(last) = q.intervals().last() {
                if last.right > self.window {
                    return Err(Error::OutsideWindow {
                        left: last.left,
                        right: last.right,
                        window: self.window,
                    });
                }
            }
        }
        Ok(())
    }

    /// One joint sample with the exact stopping rule.
    pub fn sample<R: Rng + ?Sized>(&self, queries: &[IntervalUnion], rng: &mut R) -> Result<Vec<f64>> {
        Ok(self.realize(queries, None, rng)?.values)
    }

    /// Generates exactly `n_points` points, ignoring the stopping rule.
    pub fn sample_fixed<R: Rng + ?Sized>(
        &self,
        queries: &[IntervalUnion],
        n_points: usize,
        rng: &mut R,
    ) -> Result<Vec<f64>> {
        Ok(self.realize(queries, Some(n_points), rng)?.values)
    }

    /// Full realization. With `budget = None` the exact stopping rule
    /// applies: stop once the next weight cannot exceed the smallest running
    /// maximum over the nonempty queries.
    pub fn realize<R: Rng + ?Sized>(
        &self,
        queries: &[IntervalUnion],
        budget: Option<usize>,
        rng: &mut R,
    ) -> Result<PoissonSupMeasure> {
        self.check_queries(queries)?;
        let atoms = Atoms::new(queries);
        let active: Vec<usize> = (0..queries.len()).filter(|&i| !queries[i].is_empty()).collect();
        let mut values = vec![0.0; queries.len()];
        let mut points = Vec::new();
        let mut atom_hit = vec![false; atoms.pieces.len()];
        let mass = self.window.powf(self.beta);
        let mut arrival = 0.0;
        let mut exact = true;
        if active.is_empty() {
            return Ok(self.finish(points, values, exact));
        }
        loop {
            arrival += exp1(rng);
            let weight = (arrival / mass).powf(-1.0 / self.alpha);
            match budget {
                Some(n) if points.len() >= n => {
                    exact = false;
                    break;
                }
                Some(_) => {}
                None => {
                    let floor = active.iter().map(|&i| values[i]).fold(f64::INFINITY, f64::min);
                    if weight <= floor {
                        break;
                    }
                    if weight < self.u_min {
                        exact = false;
                        break;
                    }
                }
            }
            let location = self.window * open01(rng).powf(1.0 / self.beta);
            let mut probe = RangeProbe::with_law(&self.law, location);
            for (k, &(a, b)) in atoms.pieces.iter().enumerate() {
                atom_hit[k] = probe.hit_one(a, b, rng);
            }
            for &i in &active {
                if weight > values[i] && atoms.members[i].iter().any(|&k| atom_hit[k]) {
                    values[i] = weight;
                }
            }
            points.push(PoissonPoint {
                arrival,
                weight,
                location,
            });
        }
        Ok(self.finish(points, values, exact))
    }

    fn finish(&self, points: Vec<PoissonPoint>, values: Vec<f64>, exact: bool) -> PoissonSupMeasure {
        PoissonSupMeasure {
            alpha: self.alpha,
            beta: self.beta,
            window: self.window,
            points,
            values,
            exact,
        }
    }
}

/// Joint sample of (Ŵ_{α,β}(A_1), …, Ŵ_{α,β}(A_m)); all queries must lie in (0, T].
pub fn simulate_w<R: Rng + ?Sized>(
    alpha: f64,
    beta: f64,
    window: f64,
    queries: &[IntervalUnion],
    rng: &mut R,
) -> Result<Vec<f64>> {
    WSimulator::new(alpha, beta, window)?.sample(queries, rng)
}

fn check_times(ts: &[f64]) -> Result<f64> {
    if ts.is_empty() {
        return Err(Error::Config("at least one time is required".into()));
    }
    for w in ts.windows(2) {
        check(w[1] >= w[0], "t", w[1], "times ordered")?;
    }
    check(ts[0] > 0.0, "t", ts[0], "t > 0")?;
    Ok(ts[ts.len() - 1])
}

/// Joint sample of Z_{α,β}(t_i) = Ŵ_{α,β}((0, t_i]).
pub fn simulate_z<R: Rng + ?Sized>(alpha: f64, beta: f64, ts: &[f64], rng: &mut R) -> Result<Vec<f64>> {
    let t_max = check_times(ts)?;
    let queries = ts
        .iter()
        .map(|&t| IntervalUnion::left_open(0.0, t))
        .collect::<Result<Vec<_>>>()?;
    simulate_w(alpha, beta, t_max, &queries, rng)
}

/// Coupled values of W on (0, t_i], (r, r+t_i], (0, r] and (0, r+t_i].
#[derive(Debug, Clone, PartialEq)]
pub struct MaxIncrementSample {
    pub base: Vec<f64>,
    pub shifted: Vec<f64>,
    pub head: f64,
    pub joined: Vec<f64>,
}

impl MaxIncrementSample {
    /// W((0, r]) ∨ W((r, r+t_i]), which should equal `joined` pathwise.
    pub fn head_or_shifted(&self) -> Vec<f64> {
        self.shifted.iter().map(|&s| s.max(self.head)).collect()
    }
}

pub fn max_increment_shift_sample<R: Rng + ?Sized>(
    alpha: f64,
    beta: f64,
    r: f64,
    ts: &[f64],
    rng: &mut R,
) -> Result<MaxIncrementSample> {
    check(r >= 0.0 && r.is_finite(), "r", r, "r >= 0")?;
    let t_max = check_times(ts)?;
    let k = ts.len();
    let mut queries = Vec::with_capacity(3 * k + 1);
    for &t in ts {
        queries.push(IntervalUnion::left_open(0.0, t)?);
    }
    for &t in ts {
        queries.push(IntervalUnion::left_open(r, r + t)?);
    }
    for &t in ts {
        queries.push(IntervalUnion::left_open(0.0, r + t)?);
    }
    queries.push(if r > 0.0 {
        IntervalUnion::left_open(0.0, r)?
    } else {
        IntervalUnion::empty()
    });
    let v = simulate_w(alpha, beta, r + t_max, &queries, rng)?;
    Ok(MaxIncrementSample {
        base: v[..k].to_vec(),
        shifted: v[k..2 * k].to_vec(),
        joined: v[2 * k..3 * k].to_vec(),
        head: v[3 * k],
    })
}

/// Parameters of the gap-weighted process Z_{α,β,γ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaProcessParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Gap resolution for the truncated range paths; `None` picks
    /// 1e-4 × the smallest requested time.
    pub eps: Option<f64>,
}

impl GammaProcessParams {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        check(alpha > 0.0 && alpha < 2.0, "alpha", alpha, "0 < alpha < 2")?;
        check(beta > 0.0 && beta < 1.0, "beta", beta, "0 < beta < 1")?;
        check(
            gamma > 0.0 && gamma < (1.0 - beta) / alpha,
            "gamma",
            gamma,
            "0 < gamma < (1 - beta)/alpha",
        )?;
        Ok(Self {
            alpha,
            beta,
            gamma,
            eps: None,
        })
    }

    pub fn with_eps(mut self, eps: f64) -> Result<Self> {
        check(eps > 0.0, "eps", eps, "eps > 0")?;
        self.eps = Some(eps);
        Ok(self)
    }

    /// Self-similarity exponent H = γ + β/α.
    pub fn hurst(&self) -> f64 {
        self.gamma + self.beta / self.alpha
    }
}

/// Joint sample of Z_{α,β,γ}(t_i) = ⋁_j U_j·[1((R^{(j)}+V_j) ∩ (0,t_i] ≠ ∅)·j_{0,t_i}(R^{(j)}+V_j)]^γ.
///
/// Points are taken in decreasing U with full eps-truncated paths while
/// U·t_max^γ exceeds the smallest running maximum m. Gaps that end before
/// t_max are at most t_max long, so beyond that point only the gap
/// straddling t_max can matter. For the remaining points (U < u*) the pair
/// (start a of that gap relative to V, its length ℓ) has intensity
/// a^{−β}/Γ(1−β) da · ν(dℓ), and the points with U·ℓ^γ > m form a finite
/// Poisson family that is sampled directly.
pub fn simulate_z_gamma<R: Rng + ?Sized>(p: &GammaProcessParams, ts: &[f64], rng: &mut R) -> Result<Vec<f64>> {
    let (alpha, beta, gamma) = (p.alpha, p.beta, p.gamma);
    GammaProcessParams::new(alpha, beta, gamma)?;
    let t_max = check_times(ts)?;
    let eps = p.eps.unwrap_or(1e-4 * ts[0]);
    let u_floor = 1e-9;
    let mass = t_max.powf(beta);
    let bound = t_max.powf(gamma);
    let mut values = vec![0.0; ts.len()];
    let mut arrival = 0.0;
    let u_star = loop {
        arrival += exp1(rng);
        let weight = (arrival / mass).powf(-1.0 / alpha);
        let location = t_max * open01(rng).powf(1.0 / beta);
        let path = sample_path_unchecked(beta, t_max - location, eps, rng);
        for (v, &t) in values.iter_mut().zip(ts) {
            if location <= t {
                let gap = path.longest_gap(0.0, t, location);
                *v = f64::max(*v, weight * gap.powf(gamma));
            }
        }
        let m = values.iter().copied().fold(f64::INFINITY, f64::min);
        if m > 0.0 && weight * bound <= m {
            break Some(weight);
        }
        if weight < u_floor {
            break None;
        }
    };
    let Some(u_star) = u_star else {
        return Ok(values);
    };
    let m = values.iter().copied().fold(f64::INFINITY, f64::min);
    let p_exp = (1.0 - beta) / gamma - alpha;
    let lambda = beta * t_max * alpha * m.powf(-(1.0 - beta) / gamma) * u_star.powf(p_exp) / p_exp;
    let count = if lambda > 0.0 {
        Poisson::new(lambda).expect("positive Poisson mean").sample(rng) as u64
    } else {
        0
    };
    let location_law = Beta::new(beta, 2.0 - beta).expect("valid beta parameters");
    for _ in 0..count {
        let weight = u_star * open01(rng).powf(1.0 / p_exp);
        let location = t_max * location_law.sample(rng);
        let start = location + (t_max - location) * open01(rng).powf(1.0 / (1.0 - beta));
        let min_len = (m / weight).powf(1.0 / gamma);
        let len = min_len * open01(rng).powf(-1.0 / (1.0 - beta));
        let contribution = weight * len.powf(gamma);
        for (v, &t) in values.iter_mut().zip(ts) {
            if start < t {
                *v = f64::max(*v, contribution);
            }
        }
    }
    Ok(values)
}

/// Convenience: the interval (0, t] as a query.
pub fn initial_segment(t: f64) -> Result<IntervalUnion> {
    IntervalUnion::new(vec![Interval::left_open(0.0, t)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn two_plateaus() -> GridFunction {
        // 2 on [0,1], 0 on (1,2), 5 on [2,3]
        GridFunction::from_cells(vec![0.0, 1.0, 2.0, 3.0], vec![2.0, 0.0, 5.0]).unwrap()
    }

    #[test]
    fn sup_integral_cases() {
        let f = two_plateaus();
        assert_eq!(sup_integral(&f, &IntervalUnion::open(0.5, 2.5).unwrap()), 5.0);
        assert_eq!(sup_integral(&f, &IntervalUnion::open(0.5, 1.5).unwrap()), 2.0);
        assert_eq!(sup_integral(&f, &IntervalUnion::open(1.2, 1.8).unwrap()), 0.0);
        assert_eq!(sup_integral(&f, &IntervalUnion::empty()), 0.0);
        let c = GridFunction::from_cells(vec![0.0, 0.5, 4.0], vec![1.5, 1.5]).unwrap();
        assert_eq!(sup_integral(&c, &IntervalUnion::open(3.0, 3.5).unwrap()), 1.5);
    }

    #[test]
    fn derivative_inverts_integral_for_usc() {
        let f = two_plateaus();
        let m = GridSupMeasure::from_function(f.clone());
        for &t in &[0.0, 0.3, 1.0, 1.5, 2.0, 2.7, 3.0, 3.5] {
            assert_eq!(sup_derivative(&m, t), f.eval(t), "t={t}");
        }
        let zero = GridSupMeasure::zero(vec![0.0, 1.0, 2.0]).unwrap();
        assert_eq!(sup_derivative(&zero, 1.0), 0.0);
    }

    #[test]
    fn atom_at_a_node() {
        let f = GridFunction::new(vec![0.0, 0.5, 1.0, 1.5, 2.0], vec![0.0; 4], vec![0.0, 0.0, 3.0, 0.0, 0.0]).unwrap();
        let m = GridSupMeasure::from_function(f);
        assert_eq!(sup_derivative(&m, 1.0), 3.0);
        assert_eq!(sup_derivative(&m, 0.9), 0.0);
        assert_eq!(sup_derivative(&m, 1.2), 0.0);
        assert_eq!(m.measure(&IntervalUnion::open(0.9, 1.1).unwrap()), 3.0);
        assert_eq!(m.measure(&IntervalUnion::open(1.0, 1.5).unwrap()), 0.0);
    }

    #[test]
    fn w_of_empty_query_is_zero() {
        let mut rng = stream(1, 0);
        let q = vec![IntervalUnion::empty(), IntervalUnion::open(0.2, 0.4).unwrap()];
        let v = simulate_w(1.0, 0.5, 1.0, &q, &mut rng).unwrap();
        assert_eq!(v[0], 0.0);
        assert!(v[1] > 0.0);
    }

    #[test]
    fn query_outside_window_is_rejected() {
        let mut rng = stream(1, 0);
        let q = vec![IntervalUnion::open(0.2, 1.4).unwrap()];
        assert!(matches!(
            simulate_w(1.0, 0.5, 1.0, &q, &mut rng),
            Err(Error::OutsideWindow { .. })
        ));
    }

    #[test]
    fn gamma_constraint() {
        assert!(GammaProcessParams::new(1.0, 0.5, 0.6).is_err());
        assert!(GammaProcessParams::new(1.0, 0.5, 0.5).is_err());
        let p = GammaProcessParams::new(1.5, 0.5, 0.2).unwrap();
        assert!((p.hurst() - (0.2 + 0.5 / 1.5)).abs() < 1e-15);
    }

    #[test]
    fn z_paths_are_nondecreasing() {
        let mut rng = stream(2, 0);
        let ts = [0.1, 0.3, 0.5, 1.0];
        let p = GammaProcessParams::new(1.5, 0.5, 0.2).unwrap();
        for _ in 0..200 {
            let z = simulate_z(1.2, 0.6, &ts, &mut rng).unwrap();
            assert!(z.windows(2).all(|w| w[0] <= w[1]));
            let zg = simulate_z_gamma(&p, &ts, &mut rng).unwrap();
            assert!(zg.windows(2).all(|w| w[0] <= w[1]), "{zg:?}");
            assert!(zg[0] > 0.0);
        }
    }

    #[test]
    fn max_increment_identity_and_zero_shift() {
        let mut rng = stream(3, 0);
        for _ in 0..200 {
            let s = max_increment_shift_sample(1.0, 0.5, 0.3, &[0.5, 1.0], &mut rng).unwrap();
            assert_eq!(s.head_or_shifted(), s.joined);
            let s0 = max_increment_shift_sample(1.0, 0.5, 0.0, &[0.5, 1.0], &mut rng).unwrap();
            assert_eq!(s0.base, s0.shifted);
        }
    }
}
