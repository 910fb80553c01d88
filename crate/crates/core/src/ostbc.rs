//! Orthogonal space-time block codes for 1, 2 and 4 transmit antennas.
//!
//! Codewords are `t × L` matrices: row `j` is antenna `j`, column `l` is symbol
//! period `l`. With total transmit power `P = 1` every entry is scaled by
//! `sqrt(L / (t·K))`, which puts average power `1/t` on each antenna for
//! unit-energy symbols (the rate-3/4 design leaves one slot per antenna empty,
//! hence the `L/K` factor).
//!
//! Templates before scaling:
//!
//! ```text
//! t = 1:  [ s1 ]
//!
//! t = 2:  [ s1  -s2* ]
//!         [ s2   s1* ]
//!
//! t = 4:  [ s1  -s2*  -s3*   0   ]
//!         [ s2   s1*   0    -s3* ]
//!         [ s3   0     s1*   s2* ]
//!         [ 0    s3   -s2    s1  ]
//! ```
//!
//! [`combine`] undoes the scaling, so with zero noise statistic `k` equals
//! `Σ_j |h_j|² · s_k` and the residual noise is `CN(0, gain·σ²·t·K/L)`.

use ndarray::{Array2, ArrayView1};

use crate::{Complex, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    /// 0.0 marks an empty slot.
    sign: f64,
    symbol: usize,
    conj: bool,
}

const fn e(sign: f64, symbol: usize, conj: bool) -> Entry {
    Entry { sign, symbol, conj }
}

const ZERO: Entry = e(0.0, 0, false);

const SISO: [[Entry; 1]; 1] = [[e(1.0, 0, false)]];

const ALAMOUTI: [[Entry; 2]; 2] = [
    [e(1.0, 0, false), e(-1.0, 1, true)],
    [e(1.0, 1, false), e(1.0, 0, true)],
];

const RATE_3_4: [[Entry; 4]; 4] = [
    [e(1.0, 0, false), e(-1.0, 1, true), e(-1.0, 2, true), ZERO],
    [e(1.0, 1, false), e(1.0, 0, true), ZERO, e(-1.0, 2, true)],
    [e(1.0, 2, false), ZERO, e(1.0, 0, true), e(1.0, 1, true)],
    [ZERO, e(1.0, 2, false), e(-1.0, 1, false), e(1.0, 0, false)],
];

/// Shape of a supported orthogonal design.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeSpec {
    antennas: usize,
    block_len: usize,
    symbols: usize,
}

impl CodeSpec {
    pub const SISO: Self = Self::new_unchecked(1, 1, 1);
    pub const ALAMOUTI: Self = Self::new_unchecked(2, 2, 2);
    pub const RATE_3_4: Self = Self::new_unchecked(4, 4, 3);

    const fn new_unchecked(antennas: usize, block_len: usize, symbols: usize) -> Self {
        Self {
            antennas,
            block_len,
            symbols,
        }
    }

    /// The design used for `t` transmit antennas.
    pub fn for_antennas(t: usize) -> Result<Self> {
        match t {
            1 => Ok(Self::SISO),
            2 => Ok(Self::ALAMOUTI),
            4 => Ok(Self::RATE_3_4),
            _ => Err(Error::InvalidDimension(format!(
                "no orthogonal design for t={t}; supported antenna counts are 1, 2, 4"
            ))),
        }
    }

    /// `t`
    pub fn antennas(&self) -> usize {
        self.antennas
    }

    /// `L`, symbol periods per block.
    pub fn block_len(&self) -> usize {
        self.block_len
    }

    /// `K`, complex symbols per block.
    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn rate(&self) -> f64 {
        self.symbols as f64 / self.block_len as f64
    }

    /// Entry scaling for unit total transmit power.
    pub fn amplitude(&self) -> f64 {
        (self.block_len as f64 / (self.antennas * self.symbols) as f64).sqrt()
    }

    fn entry(&self, antenna: usize, period: usize) -> Entry {
        match self.antennas {
            1 => SISO[antenna][period],
            2 => ALAMOUTI[antenna][period],
            _ => RATE_3_4[antenna][period],
        }
    }
}

/// The scaled `t × L` codeword carrying `symbols`.
pub fn encode(symbols: &[Complex], spec: CodeSpec) -> Result<Array2<Complex>> {
    if symbols.len() != spec.symbols {
        return Err(Error::InvalidDimension(format!(
            "code with K={} got {} symbols",
            spec.symbols,
            symbols.len()
        )));
    }
    let amp = spec.amplitude();
    Ok(Array2::from_shape_fn(
        (spec.antennas, spec.block_len),
        |(j, l)| {
            let entry = spec.entry(j, l);
            let s = symbols[entry.symbol];
            let s = if entry.conj { s.conj() } else { s };
            s * (entry.sign * amp)
        },
    ))
}

/// Per-symbol decision statistics from one relay's received block.
#[derive(Debug, Clone, PartialEq)]
pub struct Combined {
    pub statistics: Vec<Complex>,
    /// `Σ_j |h_j|²`
    pub gain: f64,
}

/// Matched-filter combining of a received block `y` (length `L`) seen through
/// channel row `alpha` (length `t`).
///
/// Each period is linear in the real and imaginary parts of every symbol. The
/// statistic for symbol `k` projects `y` onto the real-inner-product columns
/// of those parts, which are mutually orthogonal for the designs above.
pub fn combine(y: ArrayView1<Complex>, alpha: ArrayView1<Complex>, spec: CodeSpec) -> Result<Combined> {
    if y.len() != spec.block_len || alpha.len() != spec.antennas {
        return Err(Error::InvalidDimension(format!(
            "combine expects y of length {} and alpha of length {}, got {} and {}",
            spec.block_len,
            spec.antennas,
            y.len(),
            alpha.len()
        )));
    }
    let k = spec.symbols;
    // re_part[k] accumulates Re(F_k^H y), im_part[k] accumulates Re(G_k^H y),
    // where y_l = Σ_k (F_lk·x_k + G_lk·z_k) for s_k = x_k + j·z_k.
    let mut re_part = vec![0.0; k];
    let mut im_part = vec![0.0; k];
    for l in 0..spec.block_len {
        let mut plain = [Complex::new(0.0, 0.0); 3];
        let mut conj = [Complex::new(0.0, 0.0); 3];
        for (j, h) in alpha.iter().enumerate() {
            let entry = spec.entry(j, l);
            if entry.sign == 0.0 {
                continue;
            }
            if entry.conj {
                conj[entry.symbol] += h * entry.sign;
            } else {
                plain[entry.symbol] += h * entry.sign;
            }
        }
        for s in 0..k {
            let f = plain[s] + conj[s];
            let g = Complex::i() * (plain[s] - conj[s]);
            re_part[s] += (f.conj() * y[l]).re;
            im_part[s] += (g.conj() * y[l]).re;
        }
    }
    let inv_amp = 1.0 / spec.amplitude();
    let gain = alpha.iter().map(|h| h.norm_sqr()).sum();
    let statistics = re_part
        .into_iter()
        .zip(im_part)
        .map(|(re, im)| Complex::new(re, im) * inv_amp)
        .collect();
    Ok(Combined { statistics, gain })
}

/// `c = L / (t·K·log2 M)`, the per-bit SNR factor of the first hop.
pub fn rate_constant_c(spec: CodeSpec, order: usize) -> f64 {
    let bits = order.trailing_zeros() as f64;
    spec.block_len as f64 / (spec.antennas as f64 * spec.symbols as f64 * bits)
}
