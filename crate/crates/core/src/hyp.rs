//! Upper half-plane geometry at curvature −1.
//!
//! Isometries are real 2×2 matrices of determinant 1, identified with their
//! negatives (PSL(2,ℝ)). All comparisons are therefore up to a global sign.
//! Matrix entries grow like e^{d/2} with displacement, so every product is
//! renormalized to determinant 1 to control drift.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HypError {
    #[error("element is not hyperbolic: |trace| = {trace:.12} <= 2")]
    NotHyperbolic { trace: f64 },
    #[error("near-parabolic element: discriminant {disc:.3e} below guard")]
    NearParabolic { disc: f64 },
    #[error("matrix determinant {det:.12} too far from 1")]
    BadDeterminant { det: f64 },
}

/// Point of the upper half-plane (y > 0).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Self {
        debug_assert!(y > 0.0, "half-plane point needs y > 0");
        HPoint { x, y }
    }

    /// The base point i.
    pub fn i() -> Self {
        HPoint { x: 0.0, y: 1.0 }
    }
}

/// cosh d = 1 + |p−q|² / (2 p_y q_y).
pub fn dist(p: HPoint, q: HPoint) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    let c = 1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y);
    // guard against cosh argument dipping below 1 by roundoff
    c.max(1.0).acosh()
}

/// Orientation-preserving isometry of the half-plane, det = 1, sign-ambiguous.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    /// Row-major [[a, b], [c, d]].
    pub m: [[f64; 2]; 2],
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry { m: [[1.0, 0.0], [0.0, 1.0]] }
    }

    pub fn new(m: [[f64; 2]; 2]) -> Result<Self, HypError> {
        let iso = Isometry { m };
        let det = iso.det();
        if (det - 1.0).abs() > 1e-9 {
            return Err(HypError::BadDeterminant { det });
        }
        Ok(iso.renormalized())
    }

    /// Determinant via Kahan's compensated product difference. The naive
    /// ad − bc loses all precision once entries reach ~1e8 (both products
    /// huge, difference 1); the fma form stays relatively accurate, which
    /// keeps renormalization safe for long products.
    pub fn det(&self) -> f64 {
        let [[a, b], [c, d]] = self.m;
        let w = b * c;
        let e = b.mul_add(c, -w);
        let f = a.mul_add(d, -w);
        f - e
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    /// Rescales to determinant exactly 1 (entries drift after long products).
    pub fn renormalized(&self) -> Self {
        let det = self.det();
        let s = 1.0 / det.sqrt();
        Isometry {
            m: [
                [self.m[0][0] * s, self.m[0][1] * s],
                [self.m[1][0] * s, self.m[1][1] * s],
            ],
        }
    }

    pub fn mul(&self, rhs: &Isometry) -> Isometry {
        let a = &self.m;
        let b = &rhs.m;
        Isometry {
            m: [
                [
                    a[0][0] * b[0][0] + a[0][1] * b[1][0],
                    a[0][0] * b[0][1] + a[0][1] * b[1][1],
                ],
                [
                    a[1][0] * b[0][0] + a[1][1] * b[1][0],
                    a[1][0] * b[0][1] + a[1][1] * b[1][1],
                ],
            ],
        }
        .renormalized()
    }

    pub fn inverse(&self) -> Isometry {
        let [[a, b], [c, d]] = self.m;
        Isometry { m: [[d, -b], [-c, a]] }
    }

    pub fn pow(&self, k: usize) -> Isometry {
        let mut out = Isometry::identity();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Möbius action on the half-plane.
    pub fn apply(&self, p: HPoint) -> HPoint {
        let [[a, b], [c, d]] = self.m;
        // (a z + b) / (c z + d) for z = x + iy
        let nr = a * p.x + b;
        let ni = a * p.y;
        let dr = c * p.x + d;
        let di = c * p.y;
        let den = dr * dr + di * di;
        HPoint {
            x: (nr * dr + ni * di) / den,
            y: (ni * dr - nr * di) / den,
        }
    }

    /// Max entry distance to ±identity.
    pub fn dist_to_pm_identity(&self) -> f64 {
        let id = Isometry::identity();
        let mut plus: f64 = 0.0;
        let mut minus: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                plus = plus.max((self.m[r][c] - id.m[r][c]).abs());
                minus = minus.max((self.m[r][c] + id.m[r][c]).abs());
            }
        }
        plus.min(minus)
    }

    /// Max entry distance up to sign.
    pub fn dist_up_to_sign(&self, other: &Isometry) -> f64 {
        let mut plus: f64 = 0.0;
        let mut minus: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                plus = plus.max((self.m[r][c] - other.m[r][c]).abs());
                minus = minus.max((self.m[r][c] + other.m[r][c]).abs());
            }
        }
        plus.min(minus)
    }

    /// Entry distance up to sign, relative to the entry scale. Entries grow
    /// like e^{d/2}, so identities hold to a fixed *relative* precision.
    pub fn rel_dist_up_to_sign(&self, other: &Isometry) -> f64 {
        let scale = self
            .m
            .iter()
            .chain(other.m.iter())
            .flatten()
            .fold(1.0f64, |acc, v| acc.max(v.abs()));
        self.dist_up_to_sign(other) / scale
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > 2.0 + TRACE_GUARD
    }

    /// ℓ(γ) = 2 arccosh(|tr γ| / 2); rejects non-hyperbolic input.
    pub fn translation_length(&self) -> Result<f64, HypError> {
        let t = self.trace().abs();
        if t <= 2.0 + TRACE_GUARD {
            return Err(HypError::NotHyperbolic { trace: t });
        }
        Ok(2.0 * (t / 2.0).acosh())
    }

    /// Invariant geodesic of a hyperbolic element.
    pub fn axis(&self) -> Result<Axis, HypError> {
        let t = self.trace().abs();
        let disc = self.trace() * self.trace() - 4.0;
        if t <= 2.0 + TRACE_GUARD || disc < 1e-12 {
            return Err(HypError::NearParabolic { disc });
        }
        let [[a, b], [c, d]] = self.m;
        if c.abs() < VERTICAL_GUARD {
            // one fixed point at infinity, the other at b / (d - a)
            if (d - a).abs() < VERTICAL_GUARD {
                // diagonal matrix: axis is the imaginary half-line
                return Ok(Axis::Vertical { x: 0.0 });
            }
            return Ok(Axis::Vertical { x: b / (d - a) });
        }
        let s = disc.sqrt();
        let f1 = ((a - d) - s) / (2.0 * c);
        let f2 = ((a - d) + s) / (2.0 * c);
        let (lo, hi) = if f1 < f2 { (f1, f2) } else { (f2, f1) };
        Ok(Axis::Circle {
            center: 0.5 * (lo + hi),
            radius: 0.5 * (hi - lo),
        })
    }
}

const TRACE_GUARD: f64 = 1e-9;
const VERTICAL_GUARD: f64 = 1e-10;

/// Geodesic of the half-plane: a semicircle with real center, or a vertical
/// line.
#[derive(Clone, Copy, Debug)]
pub enum Axis {
    Circle { center: f64, radius: f64 },
    Vertical { x: f64 },
}

impl Axis {
    /// Geodesic through two distinct points.
    pub fn through(p: HPoint, q: HPoint) -> Axis {
        if (p.x - q.x).abs() < 1e-12 {
            return Axis::Vertical { x: 0.5 * (p.x + q.x) };
        }
        // |p - c|^2 = |q - c|^2 with c real
        let c = (p.x * p.x + p.y * p.y - q.x * q.x - q.y * q.y) / (2.0 * (p.x - q.x));
        let r = ((p.x - c) * (p.x - c) + p.y * p.y).sqrt();
        Axis::Circle { center: c, radius: r }
    }

    /// Orthogonal projection of `p` onto the geodesic together with
    /// dist(p, axis). Uses the conformal map sending the axis to the
    /// imaginary half-line, where sinh(dist) = |x|/y and the foot is i|z|.
    pub fn project(&self, p: HPoint) -> (HPoint, f64) {
        match *self {
            Axis::Vertical { x } => {
                let z = HPoint::new(p.x - x, p.y);
                let (foot, r) = project_to_imaginary_axis(z);
                (HPoint::new(foot.x + x, foot.y), r)
            }
            Axis::Circle { center, radius } => {
                // T(z) = (z - u) / (w - z) maps feet u, w to 0, inf
                let u = center - radius;
                let w = center + radius;
                let t = Isometry {
                    m: [[1.0, -u], [-1.0, w]],
                }
                .renormalized();
                let z = t.apply(p);
                let (foot, r) = project_to_imaginary_axis(z);
                (t.inverse().apply(foot), r)
            }
        }
    }

    /// Signed coordinate of point `p`'s projection along the axis (arbitrary
    /// but consistent origin and direction); used to order points on an axis.
    pub fn coordinate(&self, p: HPoint) -> f64 {
        match *self {
            Axis::Vertical { x } => {
                let _ = x;
                let (foot, _) = self.project(p);
                foot.y.ln()
            }
            Axis::Circle { center, radius } => {
                let u = center - radius;
                let w = center + radius;
                let t = Isometry {
                    m: [[1.0, -u], [-1.0, w]],
                }
                .renormalized();
                let z = t.apply(p);
                (z.x * z.x + z.y * z.y).sqrt().ln()
            }
        }
    }
}

fn project_to_imaginary_axis(z: HPoint) -> (HPoint, f64) {
    let norm = (z.x * z.x + z.y * z.y).sqrt();
    let foot = HPoint::new(0.0, norm);
    let r = (z.x.abs() / z.y).asinh();
    (foot, r)
}

/// Rotation about i by tangent angle φ.
pub fn rotation_about_i(phi: f64) -> Isometry {
    let c = (phi / 2.0).cos();
    let s = (phi / 2.0).sin();
    Isometry { m: [[c, s], [-s, c]] }
}

/// Translation of length `l` along the imaginary half-line.
pub fn boost(l: f64) -> Isometry {
    let e = (l / 2.0).exp();
    Isometry { m: [[e, 0.0], [0.0, 1.0 / e]] }
}

/// Point at hyperbolic distance `d` from i in tangent direction `phi`
/// (φ = 0 points up the imaginary axis).
pub fn point_at(d: f64, phi: f64) -> HPoint {
    rotation_about_i(phi).apply(HPoint::new(0.0, d.exp()))
}

/// Orthogonal projection of `p` onto the axis of the hyperbolic isometry
/// `g`, returning the foot and r = dist(p, axis(g)).
pub fn axis_project(g: &Isometry, p: HPoint) -> Result<(HPoint, f64), HypError> {
    let axis = g.axis()?;
    Ok(axis.project(p))
}
