//! Equalize, denoise, then cluster gray levels with fuzzy c-means.

use std::time::{Duration, Instant};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::fcm::{self, FcmConfig, FeatureSet};
use crate::histogram::{equalize_with, EqualizeMode};
use crate::image::GrayImage;
use crate::median::{median_filter, WindowSpec};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PipelineConfig {
    pub window: WindowSpec,
    pub fcm: FcmConfig,
    pub equalize_mode: EqualizeMode,
    pub skip_equalize: bool,
    pub skip_median: bool,
}

/// One cluster index per pixel, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<usize>,
}

impl LabelMap {
    /// Pixel count per label, for labels `0..clusters`.
    pub fn counts(&self, clusters: usize) -> Vec<usize> {
        let mut counts = vec![0; clusters];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }
}

/// Wall time spent in each stage. Skipped stages record zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StageTimings {
    pub equalize: Duration,
    pub median: Duration,
    pub fcm: Duration,
    pub total: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationResult {
    pub labels: LabelMap,
    /// Membership of every pixel in cluster `k`, scaled to `[0, max_level]`.
    pub membership_maps: Vec<GrayImage>,
    /// Cluster centers as gray levels.
    pub centers: Vec<f64>,
    pub equalized: GrayImage,
    pub denoised: GrayImage,
    pub timings: StageTimings,
    pub fcm_iterations: usize,
    pub converged: bool,
    pub objective_trace: Vec<f64>,
}

/// Each pixel's gray level as a one-dimensional feature.
pub fn gray_features(img: &GrayImage) -> FeatureSet {
    let values: Vec<f64> = img.pixels().iter().map(|&p| p as f64).collect();
    FeatureSet::from_scalars(&values).expect("a valid image has at least one pixel")
}

pub fn segment(img: &GrayImage, cfg: &PipelineConfig) -> Result<SegmentationResult> {
    let start = Instant::now();
    let mut timings = StageTimings::default();

    let equalized = if cfg.skip_equalize {
        img.clone()
    } else {
        let t = Instant::now();
        let out = equalize_with(img, cfg.equalize_mode);
        timings.equalize = t.elapsed();
        out
    };

    let denoised = if cfg.skip_median {
        equalized.clone()
    } else {
        let t = Instant::now();
        let out = median_filter(&equalized, cfg.window);
        timings.median = t.elapsed();
        out
    };

    let levels = denoised.distinct_levels();
    if levels < cfg.fcm.clusters {
        return Err(Error::TooFewLevels {
            levels,
            clusters: cfg.fcm.clusters,
        });
    }

    let t = Instant::now();
    let state = fcm::fcm_cluster(&gray_features(&denoised), &cfg.fcm)?;
    let labels = LabelMap {
        width: img.width(),
        height: img.height(),
        labels: fcm::defuzzify(&state.memberships),
    };
    timings.fcm = t.elapsed();

    let max = img.max_level() as f64;
    let membership_maps = (0..state.memberships.clusters())
        .map(|k| {
            let px = state
                .memberships
                .column(k)
                .map(|u| (u * max + 0.5).floor().clamp(0.0, max) as u8)
                .collect();
            img.with_pixels(px)
        })
        .collect();
    timings.total = start.elapsed();

    Ok(SegmentationResult {
        labels,
        membership_maps,
        centers: state.centers.as_slice().to_vec(),
        equalized,
        denoised,
        timings,
        fcm_iterations: state.iterations,
        converged: state.converged,
        objective_trace: state.objective_trace,
    })
}

/// Evenly spaced gray levels per label: `k -> round(k * max_level / max(c - 1, 1))`.
pub fn labels_to_image(labels: &LabelMap, clusters: usize, max_level: u8) -> Result<GrayImage> {
    if clusters == 0 {
        return Err(Error::InvalidConfig("cluster count must be at least 1".into()));
    }
    if let Some(&bad) = labels.labels.iter().find(|&&l| l >= clusters) {
        return Err(Error::InvalidConfig(format!(
            "label {bad} out of range for {clusters} clusters"
        )));
    }
    let span = (clusters - 1).max(1);
    let max = max_level as usize;
    let px = labels
        .labels
        .iter()
        .map(|&k| ((2 * k * max + span) / (2 * span)) as u8)
        .collect();
    GrayImage::new(labels.width, labels.height, max_level, px)
}

/// Fraction of pixels whose label matches `truth`, maximized over relabelings
/// of the predicted clusters.
pub fn label_accuracy(predicted: &[usize], truth: &[usize], clusters: usize) -> f64 {
    assert_eq!(predicted.len(), truth.len(), "label sequences differ in length");
    if predicted.is_empty() {
        return 1.0;
    }
    // confusion[p][t]
    let mut confusion = vec![vec![0usize; clusters]; clusters];
    for (&p, &t) in predicted.iter().zip(truth) {
        confusion[p][t] += 1;
    }
    let best = (0..clusters)
        .permutations(clusters)
        .map(|perm| perm.iter().enumerate().map(|(p, &t)| confusion[p][t]).sum::<usize>())
        .max()
        .unwrap_or(0);
    best as f64 / predicted.len() as f64
}
