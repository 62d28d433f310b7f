//! Planar geometry and point processes.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("DomainError: {0}")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn sub(self, other: Point2) -> Point2 {
        Point2::new(self.x - other.x, self.y - other.y)
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NodeKind {
    #[serde(rename = "BS")]
    Bs,
    #[serde(rename = "U")]
    User,
    #[serde(rename = "IRS")]
    Irs,
}

/// A disk observation window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point2,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Point2, radius: f64) -> Self {
        Disk { center, radius }
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.dist(self.center) <= self.radius
    }

    pub fn area(&self) -> f64 {
        PI * self.radius * self.radius
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    pub kind: NodeKind,
    pub points: Vec<Point2>,
    pub window: Disk,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Indices of points with planar distance at most `r` from `x`.
    pub fn within(&self, x: Point2, r: f64) -> Vec<usize> {
        self.points.iter().enumerate().filter(|(_, p)| p.dist(x) <= r).map(|(i, _)| i).collect()
    }
}

/// Inverse CDF of Poisson(mean) at `u` ∈ [0, 1).
///
/// Monotone in `mean` for fixed `u`, so one uniform drives a family of
/// counts that grows with the density (nested processes).
pub fn poisson_quantile(mean: f64, u: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let ln_mean = mean.ln();
    let cap = (mean + 40.0 * mean.sqrt() + 100.0) as usize;
    let mut log_pmf = -mean;
    let mut cdf = log_pmf.exp();
    let mut k = 0usize;
    while cdf <= u && k < cap {
        k += 1;
        log_pmf += ln_mean - (k as f64).ln();
        cdf += log_pmf.exp();
    }
    k
}

/// A point uniformly distributed on the disk.
pub fn uniform_in_disk<R: Rng + ?Sized>(window: Disk, rng: &mut R) -> Point2 {
    let rho = window.radius * rng.gen::<f64>().sqrt();
    let phi = 2.0 * PI * rng.gen::<f64>();
    Point2::new(window.center.x + rho * phi.cos(), window.center.y + rho * phi.sin())
}

/// Homogeneous PPP of intensity `lambda` on the disk `C(center, radius)`.
///
/// The first uniform of the stream fixes the count, the rest place the points
/// in order. Two calls on equal streams with `lambda_1 <= lambda_2` therefore
/// return nested sets: the first is a prefix of the second.
pub fn sample_ppp<R: Rng + ?Sized>(kind: NodeKind, lambda: f64, center: Point2, radius: f64, rng: &mut R) -> PointSet {
    let window = Disk::new(center, radius);
    let u: f64 = rng.gen();
    let n = poisson_quantile(lambda * window.area(), u);
    let points = (0..n)
        .map(|_| {
            let p = uniform_in_disk(window, rng);
            // rounding in sin/cos can push a point one ulp past the rim
            let d = p.dist(center);
            if d <= radius {
                p
            } else {
                let s = radius / d;
                Point2::new(center.x + (p.x - center.x) * s, center.y + (p.y - center.y) * s)
            }
        })
        .collect();
    PointSet { kind, points, window }
}

/// Distance between two nodes at planar positions `a`, `b` and vertical offset `h`.
pub fn link_distance(h: f64, a: Point2, b: Point2) -> f64 {
    h.hypot(a.dist(b))
}

fn lens_domain(b: f64, r: f64) -> Result<(), GeometryError> {
    if b > 0.0 && b < r && r.is_finite() {
        Ok(())
    } else {
        Err(GeometryError::Domain(format!("need 0 < b < r, got b={b}, r={r}")))
    }
}

/// Lens-area expression A(b, r) used as the symbol S of the interference lower bound.
///
/// This is the form the bounds use. It is not the geometric area of the two-disk
/// intersection; compare [`lens_area_exact`] and [`lens_area_numeric`].
pub fn lens_area_formula(b: f64, r: f64) -> Result<f64, GeometryError> {
    lens_domain(b, r)?;
    let a = (b / (2.0 * r)).asin();
    Ok((2.0 * r * r / PI - b * b / PI) * a - (r * r / 2.0) * (4.0 * a).sin()
        + (b * b / 2.0) * (1.0 - (PI - 2.0 * a).sin()))
}

/// Area of C(0, b) ∩ C(r·u, r) for a unit vector u, by the circle-circle formula.
pub fn lens_area_exact(b: f64, r: f64) -> Result<f64, GeometryError> {
    lens_domain(b, r)?;
    // centers at distance r, radii b and r
    let d = r;
    let a1 = ((d * d + b * b - r * r) / (2.0 * d * b)).clamp(-1.0, 1.0).acos();
    let a2 = ((d * d + r * r - b * b) / (2.0 * d * r)).clamp(-1.0, 1.0).acos();
    let k = (-d + b + r) * (d + b - r) * (d - b + r) * (d + b + r);
    Ok(b * b * a1 + r * r * a2 - 0.5 * k.max(0.0).sqrt())
}

/// A Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub std_err: f64,
}

/// Hit-or-miss estimate of the area of C(0, b) ∩ C((r, 0), r).
///
/// Samples are uniform on the small disk, so the estimate never exceeds πb².
pub fn lens_area_numeric<R: Rng + ?Sized>(b: f64, r: f64, samples: usize, rng: &mut R) -> Result<Estimate, GeometryError> {
    lens_domain(b, r)?;
    if samples == 0 {
        return Err(GeometryError::Domain("samples must be positive".into()));
    }
    let small = Disk::new(Point2::ORIGIN, b);
    let big = Disk::new(Point2::new(r, 0.0), r);
    let hits = (0..samples).filter(|_| big.contains(uniform_in_disk(small, rng))).count();
    let n = samples as f64;
    let frac = hits as f64 / n;
    Ok(Estimate { value: small.area() * frac, std_err: small.area() * (frac * (1.0 - frac) / n).sqrt() })
}

/// Outcome of [`campbell_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CampbellReport {
    /// Mean over trials of Σ f(x).
    pub empirical: f64,
    /// λ∫f over the window.
    pub expected: f64,
    pub relative_error: f64,
}

/// ∫ f over a disk: Gauss-Legendre in the radius, trapezoid (spectral for periodic integrands) in the angle.
pub fn integrate_disk(f: &dyn Fn(Point2) -> f64, window: Disk) -> f64 {
    const N_PHI: usize = 256;
    let (nodes, weights) = gauss_legendre_64();
    let r = window.radius;
    let mut total = 0.0;
    for k in 0..N_PHI {
        let phi = 2.0 * PI * k as f64 / N_PHI as f64;
        let (s, c) = phi.sin_cos();
        let mut ring = 0.0;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            let rho = 0.5 * r * (x + 1.0);
            ring += w * rho * f(Point2::new(window.center.x + rho * c, window.center.y + rho * s));
        }
        total += ring * 0.5 * r;
    }
    total * 2.0 * PI / N_PHI as f64
}

/// 64-point Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
fn gauss_legendre_64() -> (Vec<f64>, Vec<f64>) {
    let n = 64usize;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Compares the empirical mean of Σ_{x∈Φ} f(x) with λ∫f for a PPP on `window`.
pub fn campbell_check<R: Rng + ?Sized>(
    lambda: f64,
    f: &dyn Fn(Point2) -> f64,
    window: Disk,
    trials: usize,
    rng: &mut R,
) -> CampbellReport {
    let expected = lambda * integrate_disk(f, window);
    let mut acc = 0.0;
    for _ in 0..trials {
        let set = sample_ppp(NodeKind::User, lambda, window.center, window.radius, rng);
        acc += set.points.iter().map(|&p| f(p)).sum::<f64>();
    }
    let empirical = if trials == 0 { 0.0 } else { acc / trials as f64 };
    let relative_error = if expected == 0.0 && empirical == 0.0 {
        0.0
    } else {
        (empirical - expected).abs() / expected.abs()
    };
    CampbellReport { empirical, expected, relative_error }
}
