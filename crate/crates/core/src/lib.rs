//! Grayscale image segmentation by histogram equalization, median filtering
//! and fuzzy c-means clustering.
//!
//! ```
//! use segpipe_core::{segment, synth, PipelineConfig};
//!
//! let (img, _truth) = synth::two_region(32, 16, 60, 190, 255).unwrap();
//! let result = segment(&img, &PipelineConfig::default()).unwrap();
//! assert_eq!(result.labels.labels.len(), 32 * 16);
//! ```

pub mod error;
pub mod fcm;
pub mod histogram;
pub mod image;
pub mod median;
pub mod pipeline;
pub mod synth;

pub use error::{Error, ParseError, Result};
pub use fcm::{
    defuzzify, fcm_cluster, fcm_cluster_from, init_memberships, objective, update_centers,
    update_memberships, Centers, FcmConfig, FcmState, FeatureSet, MembershipMatrix,
};
pub use histogram::{
    build_transfer, compute_cdf, compute_histogram, compute_pdf, equalize, equalize_with, Cdf,
    EqualizeMode, Histogram, Pdf, TransferFunction,
};
pub use image::{load_netpbm, save_pgm, GrayImage};
pub use median::{median_filter, window_median, WindowSpec};
pub use pipeline::{
    gray_features, label_accuracy, labels_to_image, segment, LabelMap, PipelineConfig,
    SegmentationResult, StageTimings,
};
