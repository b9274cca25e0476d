//! Reference fuzzy c-means fixed point in double-double (~106-bit) arithmetic.
//!
//! Iterates the center map `C -> C'` directly, evaluating memberships with the
//! textbook ratio form. Only fuzzifiers in {1.5, 2, 3} are supported so every
//! power reduces to products and square roots.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    pub fn from(v: f64) -> Self {
        Dd { hi: v, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        // two Newton-style correction steps on the quotient
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::from(q2)));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from(q3))
    }

    pub fn sqrt(self) -> Dd {
        if self.hi <= 0.0 {
            return Dd::ZERO;
        }
        let x = self.hi.sqrt();
        let xd = Dd::from(x);
        // x + (a - x^2) / (2x)
        let r = self.sub(xd.mul(xd));
        xd.add(Dd::from(r.hi / (2.0 * x)))
    }

    pub fn is_zero(self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            self.neg()
        } else {
            self
        }
    }
}

fn pow_ratio(r: Dd, m: f64) -> Dd {
    // r^(1 / (m - 1))
    if m == 2.0 {
        r
    } else if m == 1.5 {
        r.mul(r)
    } else if m == 3.0 {
        r.sqrt()
    } else {
        panic!("oracle supports m in {{1.5, 2, 3}}, got {m}")
    }
}

fn pow_m(u: Dd, m: f64) -> Dd {
    if m == 2.0 {
        u.mul(u)
    } else if m == 1.5 {
        u.mul(u.sqrt())
    } else if m == 3.0 {
        u.mul(u).mul(u)
    } else {
        panic!("oracle supports m in {{1.5, 2, 3}}, got {m}")
    }
}

pub struct FixedPoint {
    pub centers: Vec<Vec<f64>>,
    pub memberships: Vec<Vec<f64>>,
    pub iterations: usize,
    pub residual: f64,
}

fn memberships(points: &[Vec<Dd>], centers: &[Vec<Dd>], m: f64) -> Vec<Vec<Dd>> {
    points
        .iter()
        .map(|p| {
            let d: Vec<Dd> = centers
                .iter()
                .map(|c| {
                    p.iter()
                        .zip(c)
                        .fold(Dd::ZERO, |acc, (&a, &b)| {
                            let diff = a.sub(b);
                            acc.add(diff.mul(diff))
                        })
                })
                .collect();
            let zeros = d.iter().filter(|v| v.is_zero()).count();
            if zeros > 0 {
                let share = Dd::ONE.div(Dd::from(zeros as f64));
                return d.iter().map(|v| if v.is_zero() { share } else { Dd::ZERO }).collect();
            }
            (0..d.len())
                .map(|j| {
                    let denom = d
                        .iter()
                        .fold(Dd::ZERO, |acc, &dk| acc.add(pow_ratio(d[j].div(dk), m)));
                    Dd::ONE.div(denom)
                })
                .collect()
        })
        .collect()
}

/// Iterates the center map from `init` until centers move by less than
/// `1e-24` (relative to scale 1) or `max_iters` passes.
pub fn fixed_point(points: &[Vec<f64>], m: f64, init: &[Vec<f64>], max_iters: usize) -> FixedPoint {
    let pts: Vec<Vec<Dd>> = points.iter().map(|p| p.iter().map(|&v| Dd::from(v)).collect()).collect();
    let mut centers: Vec<Vec<Dd>> = init.iter().map(|c| c.iter().map(|&v| Dd::from(v)).collect()).collect();
    let dim = points[0].len();
    let mut iterations = 0;
    let mut residual = f64::INFINITY;
    while iterations < max_iters {
        iterations += 1;
        let u = memberships(&pts, &centers, m);
        let mut next = Vec::with_capacity(centers.len());
        for j in 0..centers.len() {
            let mut num = vec![Dd::ZERO; dim];
            let mut den = Dd::ZERO;
            for (p, row) in pts.iter().zip(&u) {
                let w = pow_m(row[j], m);
                den = den.add(w);
                for (acc, &v) in num.iter_mut().zip(p) {
                    *acc = acc.add(w.mul(v));
                }
            }
            next.push(num.into_iter().map(|v| v.div(den)).collect::<Vec<_>>());
        }
        residual = centers
            .iter()
            .zip(&next)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| x.sub(*y).abs().to_f64()))
            .fold(0.0, f64::max);
        centers = next;
        if residual < 1e-24 {
            break;
        }
    }
    let u = memberships(&pts, &centers, m);
    FixedPoint {
        centers: centers.iter().map(|c| c.iter().map(|v| v.to_f64()).collect()).collect(),
        memberships: u.iter().map(|r| r.iter().map(|v| v.to_f64()).collect()).collect(),
        iterations,
        residual,
    }
}

/// Small clustered instance: `c` blobs of radius 1 around well-separated
/// anchors. Returns points, the blob anchors (oracle start), and `m`.
pub struct TinyInstance {
    pub points: Vec<Vec<f64>>,
    pub clusters: usize,
    pub fuzzifier: f64,
    pub anchors: Vec<Vec<f64>>,
}

pub fn tiny_instance(seed: u64) -> TinyInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = rng.gen_range(1..=2);
    let clusters = rng.gen_range(2..=3);
    let n = rng.gen_range(clusters * 2..=8);
    let fuzzifier = [1.5, 2.0, 3.0][rng.gen_range(0..3)];
    let anchors: Vec<Vec<f64>> = (0..clusters)
        .map(|k| {
            (0..dim)
                .map(|d| if d == 0 { 12.0 * k as f64 } else { rng.gen_range(-3.0..3.0) })
                .collect()
        })
        .collect();
    let points = (0..n)
        .map(|i| {
            let a = &anchors[i % clusters];
            a.iter().map(|&v| v + rng.gen_range(-1.0..1.0)).collect()
        })
        .collect();
    TinyInstance {
        points,
        clusters,
        fuzzifier,
        anchors,
    }
}

/// Permutation `perm` with `perm[j]` = index in `b` matched to center `a[j]`,
/// chosen to minimize the largest center distance.
pub fn match_centers(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<usize> {
    fn permutations(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(k - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }
    let dist = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    permutations(a.len())
        .into_iter()
        .min_by(|p, q| {
            let cost = |perm: &Vec<usize>| {
                perm.iter()
                    .enumerate()
                    .map(|(j, &k)| dist(&a[j], &b[k]))
                    .fold(0.0, f64::max)
            };
            cost(p).total_cmp(&cost(q))
        })
        .unwrap()
}
