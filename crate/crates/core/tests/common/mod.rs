//! Reference computations that do not share code paths with the crate.
#![allow(dead_code)]

use relaylink::Complex;

/// Composite Simpson's rule with `n` (even) panels.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Average BPSK bit error probability over Rayleigh fading with mean per-bit SNR `gbar`.
pub fn rayleigh_bpsk_ber(gbar: f64) -> f64 {
    0.5 * (1.0 - (gbar / (1.0 + gbar)).sqrt())
}

/// Gamma(k, scale) density written out directly.
pub fn gamma_density(k: usize, scale: f64, x: f64) -> f64 {
    let fact: f64 = (1..k).map(|i| i as f64).product();
    x.powi(k as i32 - 1) * (-x / scale).exp() / (scale.powi(k as i32) * fact)
}

/// Index of the point closest to `target`, first index on ties.
pub fn nearest_index(points: &[Complex], target: Complex) -> usize {
    let d: Vec<f64> = points.iter().map(|p| (target - p).norm_sqr()).collect();
    let min = d.iter().cloned().fold(f64::INFINITY, f64::min);
    d.iter().position(|&x| x == min).unwrap()
}

/// All `m^k` index tuples.
pub fn all_tuples(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..m).map(move |i| {
                    let mut w = v.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
    }
    out
}

/// Plain Box–Muller standard normal from a `u64` source, independent of the crate's sampler.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn uniform(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64 + 0.5) / (1u64 << 53) as f64
    }

    pub fn complex_gaussian(&mut self, variance: f64) -> Complex {
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-variance * u1.ln()).sqrt();
        let th = 2.0 * std::f64::consts::PI * u2;
        Complex::new(r * th.cos(), r * th.sin())
    }
}
