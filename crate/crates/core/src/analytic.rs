//! Per-hop SNR statistics and exact M-PSK bit error rate.
//!
//! SNRs here are per bit. After OSTBC combining at a relay the first-hop SNR is
//! `c·ρ·Σ_j |h_j|²` with `c = L / (t·K·log2 M)`, a Gamma(t, c·β1·ρ) variable.
//! The second hop is SISO: `ρ·|g|² / log2 M`, exponential with mean
//! `ρ·β2 / log2 M`.
//!
//! The BER integrates the conditional density of the received phase (symbol
//! SNR `γ·log2 M`) over each angular decision region, weights each region by
//! the Gray-label bit errors it causes, and averages over the SNR density.

use std::f64::consts::PI;

use crate::modem::Constellation;
use crate::ostbc::{rate_constant_c, CodeSpec};
use crate::quadrature::Quadrature;
use crate::{Error, Result};

/// Absolute tolerance on inner (phase) integrals.
pub const INNER_TOL: f64 = 1e-10;
/// Absolute tolerance on outer (SNR) integrals.
pub const OUTER_TOL: f64 = 1e-9;
/// SNR tail mass discarded when truncating outer integrals.
pub const TAIL_MASS: f64 = 1e-12;

/// Distribution of the per-bit SNR at one hop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HopStatistics {
    /// Gamma(antennas, scale) with `scale = c·β1·ρ`.
    FirstHop { antennas: usize, scale: f64 },
    /// Exponential with mean `gamma_bar = ρ·β2 / log2 M`.
    SecondHop { gamma_bar: f64 },
}

impl HopStatistics {
    /// First hop for code `spec`, constellation order `order`, variance `beta1`
    /// and linear transmit SNR `rho`.
    pub fn first_hop(spec: CodeSpec, order: usize, beta1: f64, rho: f64) -> Self {
        Self::FirstHop {
            antennas: spec.antennas(),
            scale: rate_constant_c(spec, order) * beta1 * rho,
        }
    }

    pub fn second_hop(order: usize, beta2: f64, rho: f64) -> Self {
        Self::SecondHop {
            gamma_bar: rho * beta2 / order.trailing_zeros() as f64,
        }
    }

    /// Shape and scale of the equivalent Gamma law.
    fn shape_scale(&self) -> (usize, f64) {
        match *self {
            Self::FirstHop { antennas, scale } => (antennas, scale),
            Self::SecondHop { gamma_bar } => (1, gamma_bar),
        }
    }

    pub fn mean(&self) -> f64 {
        let (k, scale) = self.shape_scale();
        k as f64 * scale
    }

    /// `E[exp(−s·γ)]`
    pub fn mgf(&self, s: f64) -> f64 {
        let (k, scale) = self.shape_scale();
        (1.0 + scale * s).powi(-(k as i32))
    }

    pub fn pdf(&self, gamma: f64) -> Result<f64> {
        let (k, scale) = self.shape_scale();
        if scale.is_nan() || scale <= 0.0 {
            return Err(Error::DegenerateDistribution(format!(
                "SNR scale {scale} is a point mass, not a density"
            )));
        }
        if gamma < 0.0 {
            return Ok(0.0);
        }
        if k == 1 {
            return Ok((-gamma / scale).exp() / scale);
        }
        if gamma == 0.0 {
            return Ok(0.0);
        }
        let log_fact: f64 = (1..k).map(|i| (i as f64).ln()).sum();
        let log_pdf =
            (k as f64 - 1.0) * gamma.ln() - gamma / scale - k as f64 * scale.ln() - log_fact;
        Ok(log_pdf.exp())
    }

    /// Smallest `x` with `P(γ > x) ≤ mass`.
    pub fn tail_point(&self, mass: f64) -> f64 {
        let (k, scale) = self.shape_scale();
        // P(γ > y·scale) = e^{−y} Σ_{i<k} y^i / i!, decreasing in y.
        let upper = |y: f64| {
            let mut term = 1.0;
            let mut sum = 1.0;
            for i in 1..k {
                term *= y / i as f64;
                sum += term;
            }
            (-y).exp() * sum
        };
        let mut hi = 1.0;
        while upper(hi) > mass {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if upper(mid) > mass {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-12 * hi {
                break;
            }
        }
        hi * scale
    }

    fn is_point_mass_at_zero(&self) -> bool {
        self.shape_scale().1 == 0.0
    }
}

/// Density of the received phase (relative to the transmitted point) given a
/// per-bit SNR `gamma` and constellation order `order`.
pub fn phase_pdf(theta: f64, gamma: f64, order: usize) -> f64 {
    let g = gamma * order.trailing_zeros() as f64;
    let c = theta.cos();
    let s = theta.sin();
    let root = g.sqrt();
    let uniform = (-g).exp();
    let coherent = (4.0 * PI * g).sqrt() * c * (-g * s * s).exp() * 0.5 * libm::erfc(-root * c);
    // The sum is nonnegative; clamp roundoff from the two cancelling terms.
    ((uniform + coherent) / (2.0 * PI)).max(0.0)
}

fn check_region(theta_l: f64, theta_u: f64) -> Result<()> {
    if -PI <= theta_l && theta_l < theta_u && theta_u <= PI {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "decision region [{theta_l}, {theta_u}] must satisfy -π ≤ θl < θu ≤ π"
        )))
    }
}

fn phase_mass(theta_l: f64, theta_u: f64, gamma: f64, order: usize) -> Result<f64> {
    if gamma == 0.0 {
        return Ok((theta_u - theta_l) / (2.0 * PI));
    }
    // The density concentrates around θ = 0 with width ~ 1/√γ.
    let width = 1.0 / (gamma * order.trailing_zeros() as f64).sqrt();
    let mut points = vec![theta_l, theta_u];
    for k in 0..8 {
        let x = width * 4f64.powi(k);
        points.extend([x, -x].into_iter().filter(|&x| theta_l < x && x < theta_u));
    }
    if theta_l < 0.0 && 0.0 < theta_u {
        points.push(0.0);
    }
    points.sort_by(f64::total_cmp);
    Ok(Quadrature::with_abs_tol(INNER_TOL)
        .try_integrate_pieces(|th| Ok(phase_pdf(th, gamma, order)), &points)?
        .value)
}

/// Average of `cond(γ)` over the SNR law of `stat`.
fn average_over_snr<F>(stat: &HopStatistics, mut cond: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if stat.is_point_mass_at_zero() {
        return cond(0.0);
    }
    // Conditional error probabilities fall off on an O(1) scale in γ while
    // the SNR law may spread over thousands, so break the range
    // geometrically from 1/16 upward.
    let upper = stat.tail_point(TAIL_MASS);
    let mut points = vec![0.0];
    let mut x = 0.0625;
    while x < upper {
        points.push(x);
        x *= 2.0;
    }
    points.push(upper);
    Ok(Quadrature::with_abs_tol(OUTER_TOL)
        .try_integrate_pieces(|g| Ok(stat.pdf(g)? * cond(g)?), &points)?
        .value)
}

/// Probability that the received phase falls in `[theta_l, theta_u]`,
/// averaged over the SNR law of `stat`.
pub fn region_probability(
    stat: &HopStatistics,
    theta_l: f64,
    theta_u: f64,
    order: usize,
) -> Result<f64> {
    check_region(theta_l, theta_u)?;
    average_over_snr(stat, |g| phase_mass(theta_l, theta_u, g, order))
}

/// Angular pieces, inside `[−π, π]`, of the decision region centered `offset`
/// points counter-clockwise from the transmitted one.
pub fn decision_region(offset: usize, order: usize) -> Vec<(f64, f64)> {
    let m = order as f64;
    let lo = (2.0 * offset as f64 - 1.0) * PI / m;
    let hi = (2.0 * offset as f64 + 1.0) * PI / m;
    if hi <= PI {
        vec![(lo, hi)]
    } else if lo >= PI {
        vec![(lo - 2.0 * PI, hi - 2.0 * PI)]
    } else {
        vec![(lo, PI), (-PI, hi - 2.0 * PI)]
    }
}

/// Bit errors, averaged over transmitted symbols, caused by a decision
/// `offset` ring positions away. Requires a PSK constellation.
pub fn error_weights(c: &Constellation) -> Result<Vec<f64>> {
    if !c.kind().is_psk() {
        return Err(Error::InvalidParameter(format!(
            "exact phase-region BER is defined for PSK only, not {}",
            c.kind()
        )));
    }
    let m = c.order();
    let labels = c.labels();
    Ok((0..m)
        .map(|offset| {
            let total: u32 = (0..m)
                .map(|pos| (labels[pos] ^ labels[(pos + offset) % m]).count_ones())
                .sum();
            total as f64 / m as f64
        })
        .collect())
}

/// Exact average BER of Gray-labeled M-PSK over one hop.
pub fn ber_mpsk_hop(stat: &HopStatistics, c: &Constellation) -> Result<f64> {
    let order = c.order();
    let weights = error_weights(c)?;
    let pieces: Vec<(f64, (f64, f64))> = weights
        .iter()
        .enumerate()
        .filter(|(_, &w)| w > 0.0)
        .flat_map(|(offset, &w)| {
            decision_region(offset, order)
                .into_iter()
                .map(move |region| (w, region))
        })
        .collect();
    let bit_errors = average_over_snr(stat, |g| {
        pieces.iter().try_fold(0.0, |acc, &(w, (lo, hi))| {
            Ok(acc + w * phase_mass(lo, hi, g, order)?)
        })
    })?;
    Ok(bit_errors / c.bits_per_symbol() as f64)
}

/// End-to-end BER of two cascaded binary symmetric hops.
pub fn e2e_ber(p1: f64, p2: f64) -> f64 {
    // p1 + p2 − 2·p1·p2, arranged to be exactly symmetric and exactly ½
    // when either hop is saturated.
    let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
    hi + lo * (1.0 - 2.0 * hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modem::Modulation;

    fn rayleigh_bpsk(gbar: f64) -> f64 {
        0.5 * (1.0 - (gbar / (1.0 + gbar)).sqrt())
    }

    #[test]
    fn mgf_examples() {
        let a = HopStatistics::FirstHop {
            antennas: 3,
            scale: 2.0,
        };
        let b = HopStatistics::SecondHop { gamma_bar: 5.0 };
        assert_eq!(a.mgf(0.0), 1.0);
        assert_eq!(b.mgf(0.0), 1.0);
        let one = HopStatistics::FirstHop {
            antennas: 1,
            scale: 1.0,
        };
        assert_eq!(one.mgf(1.0), 0.5);
        assert!((b.mgf(0.2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn pdf_examples() {
        let s = HopStatistics::FirstHop {
            antennas: 1,
            scale: 2.0,
        };
        assert_eq!(s.pdf(0.0).unwrap(), 0.5);
        let z = HopStatistics::FirstHop {
            antennas: 2,
            scale: 0.0,
        };
        assert!(matches!(z.pdf(1.0), Err(Error::DegenerateDistribution(_))));
        assert!(matches!(
            HopStatistics::SecondHop { gamma_bar: 0.0 }.pdf(0.0),
            Err(Error::DegenerateDistribution(_))
        ));
    }

    #[test]
    fn hop_constructors() {
        let f = HopStatistics::first_hop(CodeSpec::ALAMOUTI, 4, 1.0, 100.0);
        assert_eq!(
            f,
            HopStatistics::FirstHop {
                antennas: 2,
                scale: 25.0
            }
        );
        assert_eq!(f.mean(), 50.0);
        let s = HopStatistics::second_hop(16, 2.0, 10.0);
        assert_eq!(s, HopStatistics::SecondHop { gamma_bar: 5.0 });
    }

    #[test]
    fn tail_point_meets_mass() {
        for k in [1, 2, 4] {
            let st = HopStatistics::FirstHop {
                antennas: k,
                scale: 3.0,
            };
            let x = st.tail_point(1e-12);
            let y = x / 3.0;
            let mut term = 1.0;
            let mut sum = 1.0;
            for i in 1..k {
                term *= y / i as f64;
                sum += term;
            }
            let tail = (-y).exp() * sum;
            assert!(tail <= 1e-12 && tail > 0.9e-12, "k={k}: {tail}");
        }
    }

    #[test]
    fn phase_pdf_shape() {
        for th in [-3.0, -1.0, 0.0, 0.4, 2.0] {
            assert!((phase_pdf(th, 0.0, 4) - 1.0 / (2.0 * PI)).abs() < 1e-15);
            for g in [0.1, 1.0, 10.0] {
                assert_eq!(phase_pdf(th, g, 8), phase_pdf(-th, g, 8));
                assert!(phase_pdf(th, g, 8) >= 0.0);
            }
        }
    }

    #[test]
    fn regions_tile_the_circle() {
        for m in [2usize, 4, 8] {
            let width: f64 = (0..m)
                .flat_map(|j| decision_region(j, m))
                .map(|(lo, hi)| {
                    assert!(-PI <= lo && lo < hi && hi <= PI);
                    hi - lo
                })
                .sum();
            assert!((width - 2.0 * PI).abs() < 1e-12);
        }
    }

    #[test]
    fn region_validation() {
        let st = HopStatistics::SecondHop { gamma_bar: 1.0 };
        assert!(region_probability(&st, 1.0, 0.5, 4).is_err());
        assert!(region_probability(&st, -4.0, 0.5, 4).is_err());
    }

    #[test]
    fn high_snr_keeps_low_gamma_mass() {
        let c = Modulation::Bpsk.constellation();
        for gbar in [1e3, 1e5] {
            let st = HopStatistics::FirstHop { antennas: 1, scale: gbar };
            let ber = ber_mpsk_hop(&st, &c).unwrap();
            let exact = rayleigh_bpsk(gbar);
            assert!((ber - exact).abs() < 1e-3 * exact, "{gbar}: {ber} vs {exact}");
        }
    }

    #[test]
    fn qam_has_no_phase_analysis() {
        let st = HopStatistics::SecondHop { gamma_bar: 1.0 };
        assert!(ber_mpsk_hop(&st, &Modulation::Qam16.constellation()).is_err());
    }

    #[test]
    fn error_weights_for_gray_psk() {
        let w = error_weights(&Modulation::Qpsk.constellation()).unwrap();
        assert_eq!(w, vec![0.0, 1.0, 2.0, 1.0]);
        let w = error_weights(&Modulation::Bpsk.constellation()).unwrap();
        assert_eq!(w, vec![0.0, 1.0]);
    }

    #[test]
    fn bpsk_matches_closed_form() {
        let c = Modulation::Bpsk.constellation();
        for gbar in [0.1, 1.0, 10.0] {
            let st = HopStatistics::FirstHop {
                antennas: 1,
                scale: gbar,
            };
            let ber = ber_mpsk_hop(&st, &c).unwrap();
            assert!((ber - rayleigh_bpsk(gbar)).abs() < 1e-6, "{gbar}: {ber}");
        }
    }

    #[test]
    fn bpsk_ber_equals_half_plane_region() {
        let c = Modulation::Bpsk.constellation();
        let st = HopStatistics::FirstHop {
            antennas: 2,
            scale: 1.7,
        };
        let ber = ber_mpsk_hop(&st, &c).unwrap();
        let p = region_probability(&st, PI / 2.0, PI, 2).unwrap()
            + region_probability(&st, -PI, -PI / 2.0, 2).unwrap();
        assert!((ber - p).abs() < 1e-8);
    }

    #[test]
    fn zero_snr_is_coin_flip() {
        let st = HopStatistics::FirstHop {
            antennas: 2,
            scale: 0.0,
        };
        for kind in [Modulation::Bpsk, Modulation::Qpsk, Modulation::Psk8] {
            let ber = ber_mpsk_hop(&st, &kind.constellation()).unwrap();
            assert!((ber - 0.5).abs() < 1e-12, "{kind}: {ber}");
        }
    }

    #[test]
    fn ber_strictly_decreasing_in_scale() {
        let c = Modulation::Qpsk.constellation();
        let mut prev = 1.0;
        for i in 0..10 {
            let st = HopStatistics::FirstHop {
                antennas: 2,
                scale: 0.2 * 2f64.powi(i),
            };
            let ber = ber_mpsk_hop(&st, &c).unwrap();
            assert!(ber < prev, "scale index {i}");
            prev = ber;
        }
    }

    #[test]
    fn qpsk_per_bit_equals_bpsk() {
        let q = Modulation::Qpsk.constellation();
        for gbar in [0.3, 3.0, 30.0] {
            let st = HopStatistics::SecondHop { gamma_bar: gbar };
            let ber = ber_mpsk_hop(&st, &q).unwrap();
            assert!((ber - rayleigh_bpsk(gbar)).abs() < 1e-5, "{gbar}");
        }
    }

    #[test]
    fn cascade() {
        assert_eq!(e2e_ber(0.0, 0.13), 0.13);
        assert_eq!(e2e_ber(0.5, 0.2), 0.5);
        assert_eq!(e2e_ber(0.1, 0.3), e2e_ber(0.3, 0.1));
    }
}
