//! Synthetic test images with known ground truth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// The 5x5 neighborhood used as the worked median-filter example.
pub const FIG2_GRID: [u8; 25] = [
    123, 125, 126, 130, 140, //
    122, 124, 126, 127, 135, //
    118, 120, 150, 125, 134, //
    119, 115, 119, 123, 133, //
    111, 116, 110, 120, 130,
];

pub fn fig2_grid() -> GrayImage {
    GrayImage::new(5, 5, 255, FIG2_GRID.to_vec()).expect("static grid is valid")
}

/// Left half at `low`, right half at `high`. Ground truth is 0 on the left, 1 on the right.
pub fn two_region(
    width: usize,
    height: usize,
    low: u8,
    high: u8,
    max_level: u8,
) -> Result<(GrayImage, Vec<usize>)> {
    if width < 2 {
        return Err(Error::InvalidImage("two-region image needs width >= 2".into()));
    }
    let split = width / 2;
    let img = GrayImage::from_fn(width, height, max_level, |_, c| if c < split { low } else { high })?;
    let truth = (0..width * height).map(|i| usize::from(i % width >= split)).collect();
    Ok((img, truth))
}

/// Horizontal ramp from 0 at the left edge to `max_level` at the right.
pub fn gradient(width: usize, height: usize, max_level: u8) -> Result<GrayImage> {
    let span = (width - 1).max(1);
    GrayImage::from_fn(width, height, max_level, |_, c| {
        ((2 * c * max_level as usize + span) / (2 * span)) as u8
    })
}

/// Every level `0..=max_level` occurs exactly `copies` times.
pub fn uniform_levels(max_level: u8, copies: usize) -> Result<GrayImage> {
    let levels = max_level as usize + 1;
    GrayImage::from_fn(levels, copies, max_level, |r, c| ((c + r * 7) % levels) as u8)
}

/// Independent uniform levels in `[0, max_level]`.
pub fn random_image(width: usize, height: usize, max_level: u8, seed: u64) -> Result<GrayImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GrayImage::from_fn(width, height, max_level, |_, _| rng.gen_range(0..=max_level))
}

/// Replaces each pixel, with probability `fraction`, by 0 or `max_level` (even odds).
pub fn salt_and_pepper(img: &GrayImage, fraction: f64, seed: u64) -> Result<GrayImage> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidConfig(format!(
            "noise fraction must be in [0, 1], got {fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max = img.max_level();
    let px = img
        .pixels()
        .iter()
        .map(|&p| {
            if rng.gen_bool(fraction) {
                if rng.gen_bool(0.5) {
                    max
                } else {
                    0
                }
            } else {
                p
            }
        })
        .collect();
    Ok(img.with_pixels(px))
}
