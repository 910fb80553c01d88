//! Rayleigh fading and AWGN generation.
//!
//! All randomness in the crate flows through [`RngState`], a ChaCha8 generator
//! addressed by `(seed, stream)`. Distinct streams are independent sequences,
//! so Monte Carlo trial `k` can use stream `k` without depending on any other
//! trial having run first.
//!
//! A complex Gaussian `CN(0, v)` has `E[|x|^2] = v`, with independent real and
//! imaginary parts of variance `v / 2` each.

use ndarray::{Array1, Array2};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{Complex, Error, Result};

/// A reproducible random source identified by a master seed and a stream.
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl RngState {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self {
            seed,
            stream,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// One `CN(0, variance)` sample. `variance` must be nonnegative.
    pub fn complex_gaussian(&mut self, variance: f64) -> Complex {
        let sd = (variance / 2.0).sqrt();
        let re: f64 = self.inner.sample(StandardNormal);
        let im: f64 = self.inner.sample(StandardNormal);
        Complex::new(sd * re, sd * im)
    }

    /// Uniform random bits, one per `u8` (0 or 1).
    pub fn bits(&mut self, n: usize) -> Vec<u8> {
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let word = self.inner.next_u64();
            let take = (n - out.len()).min(64);
            out.extend((0..take).map(|k| ((word >> k) & 1) as u8));
        }
        out
    }

    /// Uniform index in `0..n`. `n` must be positive.
    pub fn index(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }
}

impl RngCore for RngState {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// One draw of both hops: source→relay matrix and relay→destination gains.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// `r × t`; row `i` is the channel from every source antenna to relay `i`.
    pub h_sr: Array2<Complex>,
    /// Length `r`; relay `i` to destination.
    pub g_rd: Array1<Complex>,
    pub beta1: f64,
    pub beta2: f64,
}

impl ChannelRealization {
    pub fn relays(&self) -> usize {
        self.h_sr.nrows()
    }

    pub fn antennas(&self) -> usize {
        self.h_sr.ncols()
    }
}

fn check_variance(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be a finite nonnegative variance, got {v}"
        )))
    }
}

/// Draw i.i.d. `CN(0, beta1)` first-hop gains and `CN(0, beta2)` second-hop gains.
///
/// Entries of `h_sr` are drawn row by row, followed by `g_rd`.
pub fn draw_channel(
    rng: &mut RngState,
    r: usize,
    t: usize,
    beta1: f64,
    beta2: f64,
) -> Result<ChannelRealization> {
    if r == 0 || t == 0 {
        return Err(Error::InvalidDimension(format!(
            "channel needs at least one relay and one antenna, got r={r}, t={t}"
        )));
    }
    check_variance("beta1", beta1)?;
    check_variance("beta2", beta2)?;
    let h_sr = Array2::from_shape_simple_fn((r, t), || rng.complex_gaussian(beta1));
    let g_rd = Array1::from_shape_simple_fn(r, || rng.complex_gaussian(beta2));
    Ok(ChannelRealization {
        h_sr,
        g_rd,
        beta1,
        beta2,
    })
}

/// `n` i.i.d. `CN(0, variance)` noise samples.
pub fn draw_awgn(rng: &mut RngState, variance: f64, n: usize) -> Result<Vec<Complex>> {
    check_variance("noise variance", variance)?;
    Ok((0..n).map(|_| rng.complex_gaussian(variance)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_variance_gives_zero_gains() {
        let mut rng = RngState::new(3, 0);
        let ch = draw_channel(&mut rng, 3, 2, 0.0, 0.0).unwrap();
        assert!(ch.h_sr.iter().all(|h| *h == Complex::new(0.0, 0.0)));
        assert!(ch.g_rd.iter().all(|g| *g == Complex::new(0.0, 0.0)));
    }

    #[test]
    fn same_seed_and_stream_reproduce() {
        let a = draw_channel(&mut RngState::new(42, 9), 4, 4, 1.0, 2.0).unwrap();
        let b = draw_channel(&mut RngState::new(42, 9), 4, 4, 1.0, 2.0).unwrap();
        assert_eq!(a, b);
        let c = draw_channel(&mut RngState::new(42, 10), 4, 4, 1.0, 2.0).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_bad_dimensions_and_variances() {
        let mut rng = RngState::new(0, 0);
        assert!(matches!(
            draw_channel(&mut rng, 0, 2, 1.0, 1.0),
            Err(Error::InvalidDimension(_))
        ));
        assert!(matches!(
            draw_channel(&mut rng, 2, 0, 1.0, 1.0),
            Err(Error::InvalidDimension(_))
        ));
        assert!(matches!(
            draw_channel(&mut rng, 2, 2, -1.0, 1.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            draw_awgn(&mut rng, -0.5, 4),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn awgn_edge_cases() {
        let mut rng = RngState::new(1, 1);
        assert!(draw_awgn(&mut rng, 0.0, 5)
            .unwrap()
            .iter()
            .all(|e| e.norm_sqr() == 0.0));
        assert!(draw_awgn(&mut rng, 1.0, 0).unwrap().is_empty());
    }

    #[test]
    fn channel_power_converges_to_beta() {
        let mut rng = RngState::new(2024, 0);
        let n = 100_000;
        let mut acc = 0.0;
        for _ in 0..n {
            let ch = draw_channel(&mut rng, 1, 1, 1.0, 1.0).unwrap();
            acc += ch.h_sr[[0, 0]].norm_sqr();
        }
        let mean = acc / n as f64;
        assert!((mean - 1.0).abs() < 0.02, "mean |h|^2 = {mean}");
    }

    #[test]
    fn awgn_sample_variance() {
        let mut rng = RngState::new(77, 3);
        let n = 100_000;
        let e = draw_awgn(&mut rng, 2.0, n).unwrap();
        let var = e.iter().map(|x| x.norm_sqr()).sum::<f64>() / n as f64;
        assert!((var - 2.0).abs() < 0.05, "variance = {var}");
    }

    #[test]
    fn bits_are_binary_and_balanced() {
        let mut rng = RngState::new(5, 5);
        let b = rng.bits(100_003);
        assert_eq!(b.len(), 100_003);
        assert!(b.iter().all(|&x| x <= 1));
        let ones = b.iter().filter(|&&x| x == 1).count() as f64 / b.len() as f64;
        assert!((ones - 0.5).abs() < 0.01);
    }
}
