//! Monte Carlo BER engine for the two-hop decode-and-forward link.
//!
//! One trial is one OSTBC block: `K` symbols leave the source, every relay
//! receives them through its own channel row, the selected relay decodes and
//! re-modulates its (possibly wrong) decisions, and the destination decodes
//! the SISO retransmission. Total transmit power is 1, so the noise variance
//! at every receiver is `1/ρ`.
//!
//! Trial `k` draws from RNG stream `k` of the master seed, so outcomes do not
//! depend on evaluation order or thread count. Trials run in fixed batches;
//! the early stop is applied in trial-index order, which makes the result a
//! pure function of the configuration.

use ndarray::Array1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{ber_mpsk_hop, e2e_ber, HopStatistics};
use crate::channel::{draw_awgn, draw_channel, RngState};
use crate::modem::{demodulate_ml, modulate, Constellation, Modulation};
use crate::ostbc::{combine, encode, CodeSpec};
use crate::relayselect::{relay_metrics, select_best, FirstHopMetric, SelectionRule};
use crate::{Complex, Error, Result};

const BATCH: u64 = 4096;

/// Two-sided 95% standard normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

fn default_beta() -> f64 {
    1.0
}

fn default_rule() -> SelectionRule {
    SelectionRule::Rule1
}

fn default_max_errors() -> u64 {
    200
}

/// A complete experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    /// Source transmit antennas: 1, 2 or 4.
    pub t: usize,
    /// Number of relays.
    pub r: usize,
    pub modulation: Modulation,
    #[serde(default = "default_rule")]
    pub rule: SelectionRule,
    #[serde(default)]
    pub metric: FirstHopMetric,
    /// Transmit SNR `ρ = P/σ²` in dB, strictly increasing.
    pub snr_db: Vec<f64>,
    #[serde(default = "default_beta")]
    pub beta1: f64,
    #[serde(default = "default_beta")]
    pub beta2: f64,
    /// Maximum blocks per SNR point.
    pub trials: u64,
    /// Stop a point once this many end-to-end bit errors are seen; 0 disables.
    #[serde(default = "default_max_errors")]
    pub max_errors: u64,
    pub seed: u64,
}

impl SimConfig {
    /// Defaults for everything but the physical setup and the grid.
    pub fn new(t: usize, r: usize, modulation: Modulation, snr_db: Vec<f64>) -> Self {
        Self {
            t,
            r,
            modulation,
            rule: default_rule(),
            metric: FirstHopMetric::default(),
            snr_db,
            beta1: default_beta(),
            beta2: default_beta(),
            trials: 10_000,
            max_errors: default_max_errors(),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, msg: String| Err(Error::InvalidConfig(format!("{field}: {msg}")));
        if let Err(e) = CodeSpec::for_antennas(self.t) {
            return bad("t", e.to_string());
        }
        if self.r == 0 {
            return bad("r", "at least one relay is required".into());
        }
        if self.snr_db.is_empty() {
            return bad("snr_db", "grid is empty".into());
        }
        if self.snr_db.iter().any(|x| !x.is_finite()) {
            return bad("snr_db", "values must be finite".into());
        }
        if self.snr_db.windows(2).any(|w| w[1] <= w[0]) {
            return bad("snr_db", "grid must be strictly increasing".into());
        }
        for (name, v) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(name, format!("must be a finite nonnegative variance, got {v}"));
            }
        }
        if self.trials == 0 {
            return bad("trials", "must be at least 1".into());
        }
        Ok(())
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Simulated,
    Analytic,
}

impl Source {
    pub fn name(self) -> &'static str {
        match self {
            Self::Simulated => "simulated",
            Self::Analytic => "analytic",
        }
    }
}

/// BER at one SNR with its 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerPoint {
    pub snr_db: f64,
    pub ber: f64,
    pub bit_errors: u64,
    pub bits: u64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub source: Source,
}

impl BerPoint {
    /// Point estimate `errors/bits` with a Wilson score interval.
    pub fn simulated(snr_db: f64, bit_errors: u64, bits: u64) -> Result<Self> {
        if bits == 0 {
            return Err(Error::InvalidConfig("no bits were simulated".into()));
        }
        let (lo, hi) = wilson_interval(bit_errors, bits);
        let ber = bit_errors as f64 / bits as f64;
        Ok(Self {
            snr_db,
            ber,
            bit_errors,
            bits,
            ci_low: lo.min(ber),
            ci_high: hi.max(ber),
            source: Source::Simulated,
        })
    }

    pub fn analytic(snr_db: f64, ber: f64) -> Self {
        Self {
            snr_db,
            ber,
            bit_errors: 0,
            bits: 0,
            ci_low: ber,
            ci_high: ber,
            source: Source::Analytic,
        }
    }

    pub fn overlaps(&self, other: &BerPoint) -> bool {
        self.ci_low <= other.ci_high && other.ci_low <= self.ci_high
    }

    pub fn contains(&self, ber: f64) -> bool {
        self.ci_low <= ber && ber <= self.ci_high
    }

    pub fn ci_half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }
}

/// 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Bit-error counts of one block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    /// Errors in the selected relay's decisions.
    pub first_hop_bit_errors: u64,
    /// Errors at the destination.
    pub e2e_bit_errors: u64,
    pub bits: u64,
    pub selected_relay: usize,
}

/// Accumulated counts over a set of trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Tally {
    pub trials: u64,
    pub bits: u64,
    pub first_hop_bit_errors: u64,
    pub e2e_bit_errors: u64,
}

impl Tally {
    pub fn add(&mut self, o: &TrialOutcome) {
        self.trials += 1;
        self.bits += o.bits;
        self.first_hop_bit_errors += o.first_hop_bit_errors;
        self.e2e_bit_errors += o.e2e_bit_errors;
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.trials += other.trials;
        self.bits += other.bits;
        self.first_hop_bit_errors += other.first_hop_bit_errors;
        self.e2e_bit_errors += other.e2e_bit_errors;
        self
    }

    pub fn e2e_point(&self, snr_db: f64) -> Result<BerPoint> {
        BerPoint::simulated(snr_db, self.e2e_bit_errors, self.bits)
    }

    pub fn first_hop_point(&self, snr_db: f64) -> Result<BerPoint> {
        BerPoint::simulated(snr_db, self.first_hop_bit_errors, self.bits)
    }
}

/// Simulated points, plus an analytic overlay for single-relay PSK links.
#[derive(Debug, Clone, PartialEq)]
pub struct BerCurve {
    pub config: SimConfig,
    pub simulated: Vec<BerPoint>,
    pub analytic: Vec<BerPoint>,
}

/// A validated configuration with its code and constellation resolved.
#[derive(Debug, Clone)]
pub struct Simulator {
    cfg: SimConfig,
    code: CodeSpec,
    constellation: Constellation,
}

impl Simulator {
    pub fn new(cfg: SimConfig) -> Result<Self> {
        cfg.validate()?;
        let code = CodeSpec::for_antennas(cfg.t)?;
        let constellation = cfg.modulation.constellation();
        Ok(Self {
            cfg,
            code,
            constellation,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn bits_per_block(&self) -> usize {
        self.code.symbols() * self.constellation.bits_per_symbol()
    }

    /// Simulate block `trial_index` at linear transmit SNR `rho`.
    pub fn run_trial(&self, rho: f64, trial_index: u64) -> TrialOutcome {
        let cfg = &self.cfg;
        let c = &self.constellation;
        let k = self.code.symbols();
        let noise_var = 1.0 / rho;
        let mut rng = RngState::new(cfg.seed, trial_index);

        let ch = draw_channel(&mut rng, cfg.r, cfg.t, cfg.beta1, cfg.beta2)
            .expect("validated configuration");
        let bits = rng.bits(self.bits_per_block());
        let symbols = modulate(&bits, c).expect("whole number of symbols");
        let x = encode(&symbols, self.code).expect("K symbols");

        // Every relay hears the block; draw all noise so the stream layout is
        // the same whichever relay ends up selected.
        let received: Vec<Array1<Complex>> = ch
            .h_sr
            .rows()
            .into_iter()
            .map(|alpha| {
                let noise = draw_awgn(&mut rng, noise_var, self.code.block_len())
                    .expect("positive variance");
                alpha.dot(&x) + Array1::from(noise)
            })
            .collect();
        let random_pick = rng.index(cfg.r);

        let selected = match cfg.rule {
            SelectionRule::Random => random_pick,
            rule => {
                let metrics = relay_metrics(&ch, rule, cfg.metric).expect("nonempty rows");
                select_best(&metrics.h_metric).expect("at least one relay")
            }
        };

        let combined = combine(received[selected].view(), ch.h_sr.row(selected), self.code)
            .expect("dimensions follow the code");
        let mut relay_bits = Vec::with_capacity(bits.len());
        for stat in &combined.statistics {
            c.push_label_bits(demodulate_ml(*stat, combined.gain, c), &mut relay_bits);
        }

        let forwarded = modulate(&relay_bits, c).expect("whole number of symbols");
        let g = ch.g_rd[selected];
        let dest_noise = draw_awgn(&mut rng, noise_var, k).expect("positive variance");
        let mut dest_bits = Vec::with_capacity(bits.len());
        for (s, e) in forwarded.iter().zip(&dest_noise) {
            let y = g * s + e;
            let label = demodulate_ml(g.conj() * y, g.norm_sqr(), c);
            c.push_label_bits(label, &mut dest_bits);
        }

        let errors = |decided: &[u8]| bits.iter().zip(decided).filter(|(a, b)| a != b).count() as u64;
        TrialOutcome {
            first_hop_bit_errors: errors(&relay_bits),
            e2e_bit_errors: errors(&dest_bits),
            bits: bits.len() as u64,
            selected_relay: selected,
        }
    }

    /// Accumulate trials `0, 1, …` until `trials` blocks have run or the
    /// end-to-end error count reaches `max_errors`.
    pub fn estimate(&self, rho: f64) -> Tally {
        let mut tally = Tally::default();
        let mut start = 0;
        while start < self.cfg.trials {
            let end = (start + BATCH).min(self.cfg.trials);
            let outcomes: Vec<TrialOutcome> = (start..end)
                .into_par_iter()
                .map(|i| self.run_trial(rho, i))
                .collect();
            for o in &outcomes {
                tally.add(o);
                if self.cfg.max_errors > 0 && tally.e2e_bit_errors >= self.cfg.max_errors {
                    return tally;
                }
            }
            start = end;
        }
        tally
    }

    /// End-to-end BER at `snr_db`.
    pub fn estimate_ber(&self, snr_db: f64) -> Result<BerPoint> {
        self.estimate(db_to_linear(snr_db)).e2e_point(snr_db)
    }

    /// Per-hop analytic BERs cascaded, for PSK links with a single relay.
    pub fn analytic_point(&self, snr_db: f64) -> Result<Option<BerPoint>> {
        if !self.cfg.modulation.is_psk() || self.cfg.r != 1 {
            return Ok(None);
        }
        let rho = db_to_linear(snr_db);
        let m = self.constellation.order();
        let p1 = ber_mpsk_hop(
            &HopStatistics::first_hop(self.code, m, self.cfg.beta1, rho),
            &self.constellation,
        )?;
        let p2 = ber_mpsk_hop(
            &HopStatistics::second_hop(m, self.cfg.beta2, rho),
            &self.constellation,
        )?;
        Ok(Some(BerPoint::analytic(snr_db, e2e_ber(p1, p2))))
    }

    pub fn sweep(&self) -> Result<BerCurve> {
        let mut simulated = Vec::with_capacity(self.cfg.snr_db.len());
        let mut analytic = Vec::new();
        for &snr in &self.cfg.snr_db {
            simulated.push(self.estimate_ber(snr)?);
            if let Some(p) = self.analytic_point(snr)? {
                analytic.push(p);
            }
        }
        Ok(BerCurve {
            config: self.cfg.clone(),
            simulated,
            analytic,
        })
    }
}

/// End-to-end BER point of `cfg` at linear SNR `rho`.
pub fn estimate_ber(cfg: &SimConfig, rho: f64) -> Result<BerPoint> {
    let sim = Simulator::new(cfg.clone())?;
    sim.estimate(rho).e2e_point(10.0 * rho.log10())
}

/// Run every point of `cfg.snr_db`.
pub fn sweep(cfg: &SimConfig) -> Result<BerCurve> {
    Simulator::new(cfg.clone())?.sweep()
}
