//! Gray-labeled constellations and nearest-neighbor ML demapping.
//!
//! Labels are `log2(M)`-bit integers, most significant bit first in the bit
//! stream. The fixed tables are:
//!
//! - PSK: ring position `m` sits at angle `2πm/M + φ` and carries the reflected
//!   Gray code `m ^ (m >> 1)`. `φ = π/4` for QPSK and `0` otherwise, so BPSK is
//!   `0 → +1, 1 → −1` and QPSK `00 → (1+j)/√2`.
//! - 16-QAM: the first two bits pick the in-phase level and the last two the
//!   quadrature level, each through `00 → −3, 01 → −1, 11 → +1, 10 → +3`,
//!   scaled by `1/√10`. Point index equals the label.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Complex, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Modulation {
    #[serde(rename = "BPSK")]
    Bpsk,
    #[serde(rename = "QPSK")]
    Qpsk,
    #[serde(rename = "8PSK", alias = "PSK8")]
    Psk8,
    #[serde(rename = "16QAM", alias = "QAM16")]
    Qam16,
}

impl Modulation {
    pub const ALL: [Modulation; 4] = [Self::Bpsk, Self::Qpsk, Self::Psk8, Self::Qam16];

    pub fn order(self) -> usize {
        match self {
            Self::Bpsk => 2,
            Self::Qpsk => 4,
            Self::Psk8 => 8,
            Self::Qam16 => 16,
        }
    }

    pub fn bits_per_symbol(self) -> usize {
        self.order().trailing_zeros() as usize
    }

    pub fn is_psk(self) -> bool {
        !matches!(self, Self::Qam16)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Bpsk => "BPSK",
            Self::Qpsk => "QPSK",
            Self::Psk8 => "8PSK",
            Self::Qam16 => "16QAM",
        }
    }

    pub fn constellation(self) -> Constellation {
        Constellation::new(self)
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "BPSK" => Ok(Self::Bpsk),
            "QPSK" => Ok(Self::Qpsk),
            "8PSK" | "PSK8" => Ok(Self::Psk8),
            "16QAM" | "QAM16" => Ok(Self::Qam16),
            _ => Err(Error::InvalidParameter(format!("unknown modulation '{s}'"))),
        }
    }
}

const QAM_AXIS: [f64; 4] = [-3.0, -1.0, 3.0, 1.0];

/// A unit-average-energy alphabet with its bit labeling.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    kind: Modulation,
    points: Vec<Complex>,
    labels: Vec<u32>,
    index_of_label: Vec<usize>,
}

impl Constellation {
    pub fn new(kind: Modulation) -> Self {
        let m = kind.order();
        let (points, labels): (Vec<Complex>, Vec<u32>) = match kind {
            Modulation::Qam16 => {
                let scale = 1.0 / 10f64.sqrt();
                (0..m as u32)
                    .map(|label| {
                        let i = QAM_AXIS[(label >> 2) as usize];
                        let q = QAM_AXIS[(label & 3) as usize];
                        (Complex::new(i, q) * scale, label)
                    })
                    .unzip()
            }
            _ => {
                let offset = if kind == Modulation::Qpsk { PI / 4.0 } else { 0.0 };
                (0..m)
                    .map(|pos| {
                        let angle = 2.0 * PI * pos as f64 / m as f64 + offset;
                        (Complex::from_polar(1.0, angle), (pos ^ (pos >> 1)) as u32)
                    })
                    .unzip()
            }
        };
        let mut index_of_label = vec![0; m];
        for (idx, &label) in labels.iter().enumerate() {
            index_of_label[label as usize] = idx;
        }
        Self {
            kind,
            points,
            labels,
            index_of_label,
        }
    }

    pub fn kind(&self) -> Modulation {
        self.kind
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.kind.bits_per_symbol()
    }

    /// Points in table order (ring order for PSK).
    pub fn points(&self) -> &[Complex] {
        &self.points
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn point_for_label(&self, label: u32) -> Complex {
        self.points[self.index_of_label[label as usize]]
    }

    /// Pack `bits_per_symbol` bits (MSB first) into a label.
    pub fn label_from_bits(&self, bits: &[u8]) -> u32 {
        bits.iter().fold(0u32, |acc, &b| (acc << 1) | u32::from(b & 1))
    }

    /// Append the bits of `label`, MSB first.
    pub fn push_label_bits(&self, label: u32, out: &mut Vec<u8>) {
        let k = self.bits_per_symbol();
        out.extend((0..k).rev().map(|i| ((label >> i) & 1) as u8));
    }
}

/// Map a bit stream onto constellation points, `log2(M)` bits per symbol.
pub fn modulate(bits: &[u8], c: &Constellation) -> Result<Vec<Complex>> {
    let k = c.bits_per_symbol();
    if !bits.len().is_multiple_of(k) {
        return Err(Error::Framing {
            bits: bits.len(),
            bits_per_symbol: k,
        });
    }
    Ok(bits
        .chunks_exact(k)
        .map(|group| c.point_for_label(c.label_from_bits(group)))
        .collect())
}

/// Label of `argmin_p |stat − gain·p|²`, ties resolved to the lowest point index.
pub fn demodulate_ml(stat: Complex, gain: f64, c: &Constellation) -> u32 {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (idx, p) in c.points.iter().enumerate() {
        let d = (stat - p * gain).norm_sqr();
        if d < best_d {
            best_d = d;
            best = idx;
        }
    }
    c.labels[best]
}
