//! Fuzzy c-means clustering over d-dimensional feature vectors.
//!
//! Minimizes
//!
//! ```text
//! J(U, C) = sum_i sum_j u_ij^m * |x_i - c_j|^2,   sum_j u_ij = 1
//! ```
//!
//! by alternating the two stationarity conditions of `J`: centers are the
//! `u^m`-weighted means of the points, and memberships are
//!
//! ```text
//! u_ij = 1 / sum_k (|x_i - c_j|^2 / |x_i - c_k|^2)^(1 / (m - 1))
//! ```
//!
//! Each half-step can only lower `J`, so the recorded objective trace is
//! non-increasing. Iteration starts from seeded random memberships and stops
//! once no membership moves by `tolerance` or more.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// `n` points of dimension `dim`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSet {
    dim: usize,
    data: Vec<f64>,
}

impl FeatureSet {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig("feature dimension must be at least 1".into()));
        }
        if data.is_empty() || !data.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch(format!(
                "{} values do not form a non-empty set of {dim}-dimensional points",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("features must be finite".into()));
        }
        Ok(Self { dim, data })
    }

    /// One-dimensional features.
    pub fn from_scalars(values: &[f64]) -> Result<Self> {
        Self::new(1, values.to_vec())
    }

    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch("points differ in dimension".into()));
        }
        Self::new(dim, points.concat())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }
}

/// Cluster centers, one `dim`-vector per cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct Centers {
    dim: usize,
    data: Vec<f64>,
}

impl Centers {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || data.is_empty() || !data.len().is_multiple_of(dim) {
            return Err(Error::DimensionMismatch(format!(
                "{} values do not form {dim}-dimensional centers",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn center(&self, k: usize) -> &[f64] {
        &self.data[k * self.dim..(k + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// `n x c` matrix of membership degrees; row `i` is point `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct MembershipMatrix {
    clusters: usize,
    data: Vec<f64>,
}

impl MembershipMatrix {
    /// Validates that entries lie in `[0, 1]` and rows sum to 1 within `1e-9`.
    pub fn new(clusters: usize, data: Vec<f64>) -> Result<Self> {
        if clusters == 0 || data.is_empty() || !data.len().is_multiple_of(clusters) {
            return Err(Error::DimensionMismatch(format!(
                "{} entries do not form rows of {clusters} memberships",
                data.len()
            )));
        }
        let m = Self { clusters, data };
        for (i, row) in m.rows().enumerate() {
            if row.iter().any(|u| !(0.0..=1.0).contains(u)) {
                return Err(Error::InvalidConfig(format!("row {i} has an entry outside [0, 1]")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidConfig(format!("row {i} sums to {sum}, not 1")));
            }
        }
        Ok(m)
    }

    pub fn points(&self) -> usize {
        self.data.len() / self.clusters
    }

    pub fn clusters(&self) -> usize {
        self.clusters
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.clusters + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.clusters..(i + 1) * self.clusters]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.clusters)
    }

    /// Column `j`, i.e. the membership of every point in cluster `j`.
    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows().map(move |r| r[j])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FcmConfig {
    pub clusters: usize,
    /// Fuzzifier `m`, strictly greater than 1.
    pub fuzzifier: f64,
    /// Stop once the largest membership change falls below this.
    pub tolerance: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for FcmConfig {
    fn default() -> Self {
        Self {
            clusters: 2,
            fuzzifier: 2.0,
            tolerance: 1e-5,
            max_iters: 300,
            seed: 0,
        }
    }
}

impl FcmConfig {
    /// Checks the configuration against a data set of `n` points.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.clusters == 0 {
            return Err(Error::InvalidConfig("cluster count must be at least 1".into()));
        }
        if self.clusters > n {
            return Err(Error::InvalidConfig(format!(
                "{} clusters requested for {n} points",
                self.clusters
            )));
        }
        if !(self.fuzzifier > 1.0 && self.fuzzifier.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "fuzzifier must be a finite value > 1, got {}",
                self.fuzzifier
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FcmState {
    pub centers: Centers,
    pub memberships: MembershipMatrix,
    /// `J` after each completed iteration.
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn check_dims(x: &FeatureSet, centers: &Centers) -> Result<()> {
    if x.dim() != centers.dim() {
        return Err(Error::DimensionMismatch(format!(
            "points have dimension {} but centers have {}",
            x.dim(),
            centers.dim()
        )));
    }
    Ok(())
}

/// `J = sum_ij u_ij^m |x_i - c_j|^2`.
pub fn objective(x: &FeatureSet, u: &MembershipMatrix, centers: &Centers, m: f64) -> Result<f64> {
    check_dims(x, centers)?;
    if u.points() != x.len() || u.clusters() != centers.len() {
        return Err(Error::DimensionMismatch(format!(
            "membership matrix is {}x{}, expected {}x{}",
            u.points(),
            u.clusters(),
            x.len(),
            centers.len()
        )));
    }
    let mut j = 0.0;
    for (p, row) in x.points().zip(u.rows()) {
        for (c, &uij) in centers.iter().zip(row) {
            j += uij.powf(m) * squared_distance(p, c);
        }
    }
    Ok(j)
}

/// `c_k = sum_i u_ik^m x_i / sum_i u_ik^m`.
pub fn update_centers(x: &FeatureSet, u: &MembershipMatrix, m: f64) -> Result<Centers> {
    if u.points() != x.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} membership rows for {} points",
            u.points(),
            x.len()
        )));
    }
    let (c, dim) = (u.clusters(), x.dim());
    let mut sums = vec![0.0; c * dim];
    let mut weights = vec![0.0; c];
    for (p, row) in x.points().zip(u.rows()) {
        for (k, &uik) in row.iter().enumerate() {
            let w = uik.powf(m);
            weights[k] += w;
            for (s, v) in sums[k * dim..(k + 1) * dim].iter_mut().zip(p) {
                *s += w * v;
            }
        }
    }
    for (k, &w) in weights.iter().enumerate() {
        if w.is_nan() || w <= 0.0 {
            return Err(Error::DegenerateCluster { cluster: k });
        }
        for s in &mut sums[k * dim..(k + 1) * dim] {
            *s /= w;
        }
    }
    Centers::new(dim, sums)
}

/// Inverse-distance memberships for fixed centers.
///
/// A point lying exactly on one or more centers gets crisp membership split
/// equally over those centers.
pub fn update_memberships(x: &FeatureSet, centers: &Centers, m: f64) -> Result<MembershipMatrix> {
    check_dims(x, centers)?;
    let c = centers.len();
    let exponent = 1.0 / (m - 1.0);
    let mut data = Vec::with_capacity(x.len() * c);
    let mut d2 = vec![0.0; c];
    for p in x.points() {
        for (d, center) in d2.iter_mut().zip(centers.iter()) {
            *d = squared_distance(p, center);
        }
        let coincident = d2.iter().filter(|&&d| d == 0.0).count();
        if coincident > 0 {
            let share = 1.0 / coincident as f64;
            data.extend(d2.iter().map(|&d| if d == 0.0 { share } else { 0.0 }));
            continue;
        }
        // Scale by the nearest distance so every ratio is in (0, 1].
        let nearest = d2.iter().copied().fold(f64::INFINITY, f64::min);
        let start = data.len();
        data.extend(d2.iter().map(|&d| (nearest / d).powf(exponent)));
        let total: f64 = data[start..].iter().sum();
        for u in &mut data[start..] {
            *u /= total;
        }
    }
    Ok(MembershipMatrix { clusters: c, data })
}

/// Seeded random memberships: uniform draws in `(0, 1]`, normalized per row.
pub fn init_memberships(n: usize, c: usize, seed: u64) -> MembershipMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(n * c);
    for _ in 0..n {
        let start = data.len();
        data.extend((0..c).map(|_| 1.0 - rng.gen::<f64>()));
        let total: f64 = data[start..].iter().sum();
        for u in &mut data[start..] {
            *u /= total;
        }
    }
    MembershipMatrix { clusters: c, data }
}

/// Runs fuzzy c-means from seeded random memberships.
pub fn fcm_cluster(x: &FeatureSet, cfg: &FcmConfig) -> Result<FcmState> {
    cfg.validate(x.len())?;
    let init = init_memberships(x.len(), cfg.clusters, cfg.seed);
    fcm_cluster_from(x, cfg, init)
}

/// Runs fuzzy c-means from the given initial memberships; `cfg.seed` is unused.
pub fn fcm_cluster_from(x: &FeatureSet, cfg: &FcmConfig, init: MembershipMatrix) -> Result<FcmState> {
    cfg.validate(x.len())?;
    if init.points() != x.len() || init.clusters() != cfg.clusters {
        return Err(Error::DimensionMismatch(format!(
            "initial memberships are {}x{}, expected {}x{}",
            init.points(),
            init.clusters(),
            x.len(),
            cfg.clusters
        )));
    }
    let m = cfg.fuzzifier;
    let mut memberships = init;
    let mut trace = Vec::new();
    let mut centers;
    let mut iterations = 0;
    loop {
        iterations += 1;
        centers = update_centers(x, &memberships, m)?;
        let next = update_memberships(x, &centers, m)?;
        trace.push(objective(x, &next, &centers, m)?);
        let delta = next.max_abs_diff(&memberships);
        memberships = next;
        if delta < cfg.tolerance {
            return Ok(FcmState {
                centers,
                memberships,
                objective_trace: trace,
                iterations,
                converged: true,
            });
        }
        if iterations >= cfg.max_iters {
            return Ok(FcmState {
                centers,
                memberships,
                objective_trace: trace,
                iterations,
                converged: false,
            });
        }
    }
}

/// Hard labels by per-row argmax; ties go to the lowest cluster index.
pub fn defuzzify(u: &MembershipMatrix) -> Vec<usize> {
    u.rows()
        .map(|row| {
            row.iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (j, &v)| {
                    if v > best.1 {
                        (j, v)
                    } else {
                        best
                    }
                })
                .0
        })
        .collect()
}
