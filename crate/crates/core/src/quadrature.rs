//! Globally adaptive Gauss–Kronrod (7/15) integration on finite intervals.
//!
//! The subinterval with the largest error estimate is bisected until the
//! summed estimate meets the tolerance, in the manner of QUADPACK's QAG.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5] and the center node.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Quadrature {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol: 0.0,
            max_intervals: 4000,
        }
    }

    pub fn integrate<F>(&self, f: F, a: f64, b: f64) -> Result<Estimate>
    where
        F: FnMut(f64) -> f64,
    {
        self.try_integrate(wrap_infallible(f), a, b)
    }

    /// Like [`integrate`](Self::integrate) for an integrand that can itself fail.
    pub fn try_integrate<F>(&self, mut f: F, a: f64, b: f64) -> Result<Estimate>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        if a == b {
            return Ok(Estimate {
                value: 0.0,
                error: 0.0,
            });
        }
        let first = Segment::new(&mut f, a, b)?;
        let mut value = first.value;
        let mut error = first.error;
        let mut heap = BinaryHeap::from([first]);
        while error > self.tolerance(value) {
            if heap.len() >= self.max_intervals {
                return Err(Error::NumericalFailure {
                    achieved: error,
                    requested: self.tolerance(value),
                });
            }
            let worst = heap.pop().expect("heap is never empty");
            let mid = 0.5 * (worst.a + worst.b);
            if mid == worst.a || mid == worst.b {
                // Interval collapsed to adjacent floats; no further refinement possible.
                return Err(Error::NumericalFailure {
                    achieved: error,
                    requested: self.tolerance(value),
                });
            }
            let left = Segment::new(&mut f, worst.a, mid)?;
            let right = Segment::new(&mut f, mid, worst.b)?;
            value += left.value + right.value - worst.value;
            error += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);
        }
        // Resum to shed the drift of incremental updates.
        let (value, error) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        Ok(Estimate { value, error })
    }

    /// Integrates over consecutive `points`, each piece receiving an equal
    /// share of the absolute tolerance. Breakpoints let the integrator see
    /// features far narrower than the whole range.
    pub fn try_integrate_pieces<F>(&self, mut f: F, points: &[f64]) -> Result<Estimate>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let pieces = points.len().saturating_sub(1).max(1);
        let share = Self {
            abs_tol: self.abs_tol / pieces as f64,
            ..*self
        };
        points.windows(2).try_fold(
            Estimate {
                value: 0.0,
                error: 0.0,
            },
            |acc, w| {
                let est = share.try_integrate(&mut f, w[0], w[1])?;
                Ok(Estimate {
                    value: acc.value + est.value,
                    error: acc.error + est.error,
                })
            },
        )
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

fn wrap_infallible<F: FnMut(f64) -> f64>(mut f: F) -> impl FnMut(f64) -> Result<f64> {
    move |x| Ok(f(x))
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl Segment {
    fn new<F>(f: &mut F, a: f64, b: f64) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        let center = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let fc = f(center)?;
        let mut kronrod = fc * WGK[7];
        let mut gauss = fc * WG[3];
        let mut abs_k = kronrod.abs();
        let mut fv = [(0.0, 0.0); 7];
        for (j, node) in XGK[..7].iter().enumerate() {
            let dx = half * node;
            let f1 = f(center - dx)?;
            let f2 = f(center + dx)?;
            kronrod += WGK[j] * (f1 + f2);
            abs_k += WGK[j] * (f1.abs() + f2.abs());
            if j % 2 == 1 {
                gauss += WG[j / 2] * (f1 + f2);
            }
            fv[j] = (f1, f2);
        }
        let mean = 0.5 * kronrod;
        let mut asc = WGK[7] * (fc - mean).abs();
        for (j, (f1, f2)) in fv.iter().enumerate() {
            asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
        }
        let value = kronrod * half;
        let abs_k = abs_k * half.abs();
        let asc = asc * half.abs();
        let mut error = ((kronrod - gauss) * half).abs();
        if asc != 0.0 && error != 0.0 {
            error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
        }
        if abs_k > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            error = error.max(50.0 * f64::EPSILON * abs_k);
        }
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::NumericalFailure {
                achieved: f64::INFINITY,
                requested: 0.0,
            });
        }
        Ok(Self { a, b, value, error })
    }
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}
