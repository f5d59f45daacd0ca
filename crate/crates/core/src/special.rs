//! Hurwitz zeta and power sums via Euler–Maclaurin summation.

// B_{2j} / (2j)! for j = 1..=10.
const BERNOULLI_OVER_FACTORIAL: [f64; 10] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
    43_867.0 / 798.0 / 6_402_373_705_728_000.0,
    -174_611.0 / 330.0 / 2_432_902_008_176_640_000.0,
];

/// Hurwitz zeta ζ(s, a) = Σ_{k≥0} (a+k)^{-s}, analytically continued to
/// s < 1 (s ≠ 1), for a > 0.
pub fn hurwitz_zeta(s: f64, a: f64) -> f64 {
    debug_assert!(a > 0.0 && s != 1.0);
    let shift = if a < 20.0 { (20.0 - a).ceil() as usize } else { 0 };
    let mut head = 0.0;
    for k in 0..shift {
        head += (a + k as f64).powf(-s);
    }
    let x = a + shift as f64;
    let xs = x.powf(-s);
    let mut sum = x * xs / (s - 1.0) + 0.5 * xs;
    // rising factorial s(s+1)...(s+2j-2) times x^{-s-2j+1}
    let mut rising = s;
    let mut xpow = xs / x;
    let inv_x2 = 1.0 / (x * x);
    for (j, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let term = c * rising * xpow;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        let m = 2.0 * j as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        xpow *= inv_x2;
    }
    head + sum
}

/// Σ_{m=1}^{n} m^{-σ} for σ ≠ 1.
pub fn power_sum(sigma: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    if n <= 64 {
        return (1..=n).map(|m| (m as f64).powf(-sigma)).sum();
    }
    hurwitz_zeta(sigma, 1.0) - hurwitz_zeta(sigma, n as f64 + 1.0)
}
