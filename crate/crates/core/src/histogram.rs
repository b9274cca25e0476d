//! Global histogram equalization.
//!
//! The transfer function pins the darkest occupied level to 0 and spreads the
//! cumulative distribution linearly up to `max_level`:
//!
//! ```text
//! lut[i] = ceil((cdf[i] - cdf_min) / (1 - cdf_min) * max_level)
//! ```
//!
//! where `cdf_min` is the smallest nonzero cumulative value. Rounding up
//! keeps every level above the darkest one off zero, so `cdf_min` is the
//! same when the output is equalized again and the operation is idempotent.
//! A uniform histogram gives exact integers, hence the identity table.
//! [`equalize`] evaluates the table in integer arithmetic from the
//! cumulative counts.

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Per-level pixel counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: Vec<u64>,
}

impl Histogram {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Running totals of `counts`.
    pub fn cumulative_counts(&self) -> Vec<u64> {
        self.counts
            .iter()
            .scan(0u64, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect()
    }
}

/// Normalized histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct Pdf {
    probs: Vec<f64>,
}

impl Pdf {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Cumulative distribution over gray levels.
#[derive(Debug, Clone, PartialEq)]
pub struct Cdf {
    cum: Vec<f64>,
}

impl Cdf {
    pub fn from_values(cum: Vec<f64>) -> Self {
        Self { cum }
    }

    /// Cdf computed directly from cumulative counts, one division per level.
    pub fn from_histogram(hist: &Histogram) -> Result<Self> {
        let n = hist.total();
        if n == 0 {
            return Err(Error::EmptyImage);
        }
        let cum = hist
            .cumulative_counts()
            .into_iter()
            .map(|c| c as f64 / n as f64)
            .collect();
        Ok(Self { cum })
    }

    pub fn values(&self) -> &[f64] {
        &self.cum
    }
}

/// Level-to-level lookup table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferFunction {
    lut: Vec<u8>,
}

impl TransferFunction {
    pub fn identity(levels: usize) -> Self {
        Self {
            lut: (0..levels).map(|i| i as u8).collect(),
        }
    }

    pub fn lut(&self) -> &[u8] {
        &self.lut
    }

    pub fn map(&self, level: u8) -> u8 {
        self.lut[level as usize]
    }

    pub fn apply(&self, img: &GrayImage) -> GrayImage {
        img.with_pixels(img.pixels().iter().map(|&p| self.map(p)).collect())
    }

    /// Exact form of [`build_transfer`], computed from integer cumulative counts.
    pub fn from_histogram(hist: &Histogram, max_level: u8) -> Result<Self> {
        let cum = hist.cumulative_counts();
        let n = hist.total();
        if n == 0 {
            return Err(Error::EmptyImage);
        }
        let cum_min = cum.iter().copied().find(|&c| c > 0).unwrap_or(n);
        if cum_min == n {
            return Ok(Self::identity(cum.len()));
        }
        let span = (n - cum_min) as u128;
        let max = max_level as u128;
        let lut = cum
            .iter()
            .map(|&c| {
                let above = c.saturating_sub(cum_min) as u128;
                (above * max).div_ceil(span) as u8
            })
            .collect();
        Ok(Self { lut })
    }

    /// Literal min-max rescale `y' = cdf(x) * (max{x} - min{x}) + min{x}`,
    /// rounded half-up. Maps into the occupied input range instead of
    /// stretching to `[0, max_level]`.
    pub fn min_max_from_histogram(hist: &Histogram) -> Result<Self> {
        let n = hist.total();
        if n == 0 {
            return Err(Error::EmptyImage);
        }
        let counts = hist.counts();
        let lo = counts.iter().position(|&c| c > 0).unwrap_or(0) as u128;
        let hi = counts.iter().rposition(|&c| c > 0).unwrap_or(0) as u128;
        let n = n as u128;
        let lut = hist
            .cumulative_counts()
            .into_iter()
            .map(|c| {
                let scaled = c as u128 * (hi - lo);
                (lo + (2 * scaled + n) / (2 * n)) as u8
            })
            .collect();
        Ok(Self { lut })
    }
}

/// Output scaling applied after the cumulative mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EqualizeMode {
    /// Darkest occupied level to 0, brightest to `max_level`.
    #[default]
    Stretch,
    /// Rescale back into the occupied input range `[min{x}, max{x}]`.
    MinMax,
}

pub fn compute_histogram(img: &GrayImage) -> Histogram {
    let mut counts = vec![0u64; img.levels()];
    for &p in img.pixels() {
        counts[p as usize] += 1;
    }
    Histogram { counts }
}

/// `probs[i] = counts[i] / n`.
pub fn compute_pdf(hist: &Histogram, n: u64) -> Result<Pdf> {
    if n == 0 {
        return Err(Error::EmptyImage);
    }
    let probs = hist
        .counts()
        .iter()
        .map(|&c| c as f64 / n as f64)
        .collect();
    Ok(Pdf { probs })
}

pub fn compute_cdf(pdf: &Pdf) -> Cdf {
    let cum = pdf
        .probs
        .iter()
        .scan(0.0, |acc, &p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    Cdf { cum }
}

/// Builds the stretching transfer table from a floating-point cdf.
///
/// Values within `1e-9` of an integer are taken as that integer before
/// rounding up, so float noise in the cdf cannot bump a level. Use
/// [`TransferFunction::from_histogram`] when the counts are available.
pub fn build_transfer(cdf: &Cdf, max_level: u8) -> TransferFunction {
    let cum_min = cdf.cum.iter().copied().find(|&c| c > 0.0).unwrap_or(1.0);
    if 1.0 - cum_min <= 1e-12 {
        return TransferFunction::identity(cdf.cum.len());
    }
    let max = max_level as f64;
    let lut = cdf
        .cum
        .iter()
        .map(|&c| {
            let x = ((c - cum_min) / (1.0 - cum_min) * max).clamp(0.0, max);
            (x - 1e-9).ceil().clamp(0.0, max) as u8
        })
        .collect();
    TransferFunction { lut }
}

/// Equalizes `img` with its own transfer function. A constant image is returned unchanged.
pub fn equalize(img: &GrayImage) -> GrayImage {
    equalize_with(img, EqualizeMode::Stretch)
}

pub fn equalize_with(img: &GrayImage, mode: EqualizeMode) -> GrayImage {
    let hist = compute_histogram(img);
    // A valid GrayImage always has at least one pixel.
    let transfer = match mode {
        EqualizeMode::Stretch => TransferFunction::from_histogram(&hist, img.max_level()),
        EqualizeMode::MinMax => TransferFunction::min_max_from_histogram(&hist),
    }
    .expect("non-empty image");
    transfer.apply(img)
}
