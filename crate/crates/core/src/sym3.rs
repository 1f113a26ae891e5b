//! Symmetric trace-free 3×3 matrices.
//!
//! A [`TraceFreeSym3`] stores the five independent entries of a symmetric
//! matrix whose trace vanishes; the `(3,3)` entry is always `-m11 - m22`, so
//! trace-freeness holds exactly rather than to a tolerance.
//!
//! The pointwise inequalities used by the enstrophy estimates are exposed as
//! *gap* functions that are non-negative whenever the inequality holds:
//!
//! | function | inequality |
//! |---|---|
//! | [`TraceFreeSym3::det_bound_gap`] | `-4 det M <= (2/9)√6 |M|³` |
//! | [`TraceFreeSym3::lambda2_bound_gap`] | `-det M <= ½ |M|² λ₂⁺` |
//! | [`TraceFreeSym3::extremal_eigen_bounds`] | `λ₃ >= |M|/√6`, `λ₁ <= -|M|/√6` |

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];
pub type Mat3 = [[f64; 3]; 3];

/// Below this Frobenius norm the matrix is treated as zero and `r` is undefined.
pub const ZERO_NORM: f64 = 1e-300;

/// Allowed deviation of `|v|` from one for direction vectors.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// Relative eigenvalue gap below which a pair is split again by deflation.
const PAIR_SPLIT: f64 = 1e-3;

/// `(2/9)√6`, the sharp constant of the determinant bound.
pub fn det_bound_constant() -> f64 {
    2.0 / 9.0 * 6f64.sqrt()
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TraceFreeSym3 {
    m11: f64,
    m22: f64,
    m12: f64,
    m13: f64,
    m23: f64,
}

/// Ordered eigenvalues `λ₁ <= λ₂ <= λ₃` of a trace-free symmetric matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenTriple {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    /// `max(λ₂, 0)`
    pub lambda2_plus: f64,
    /// `-λ₁/λ₃`, `None` for the zero matrix.
    pub r: Option<f64>,
}

impl EigenTriple {
    pub fn as_array(&self) -> [f64; 3] {
        [self.lambda1, self.lambda2, self.lambda3]
    }

    fn zero() -> Self {
        EigenTriple {
            lambda1: 0.0,
            lambda2: 0.0,
            lambda3: 0.0,
            lambda2_plus: 0.0,
            r: None,
        }
    }
}

impl TraceFreeSym3 {
    pub const ZERO: TraceFreeSym3 = TraceFreeSym3 {
        m11: 0.0,
        m22: 0.0,
        m12: 0.0,
        m13: 0.0,
        m23: 0.0,
    };

    pub fn new(m11: f64, m22: f64, m12: f64, m13: f64, m23: f64) -> Self {
        TraceFreeSym3 {
            m11,
            m22,
            m12,
            m13,
            m23,
        }
    }

    /// Diagonal matrix; the three entries must sum to zero (to `1e-12` of their size).
    pub fn diag(d1: f64, d2: f64, d3: f64) -> Result<Self> {
        let scale = d1.abs().max(d2.abs()).max(d3.abs());
        if !(d1 + d2 + d3).is_finite() || (d1 + d2 + d3).abs() > 1e-12 * scale {
            return Err(Error::invalid(format!(
                "diagonal ({d1}, {d2}, {d3}) is not trace free"
            )));
        }
        Ok(Self::new(d1, d2, 0.0, 0.0, 0.0))
    }

    /// The symmetric trace-free part of an arbitrary 3×3 matrix.
    pub fn deviatoric_part(a: &Mat3) -> Self {
        let tr3 = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
        Self::new(
            a[0][0] - tr3,
            a[1][1] - tr3,
            0.5 * (a[0][1] + a[1][0]),
            0.5 * (a[0][2] + a[2][0]),
            0.5 * (a[1][2] + a[2][1]),
        )
    }

    /// Independent entries in storage order `(m11, m22, m12, m13, m23)`.
    pub fn entries(&self) -> [f64; 5] {
        [self.m11, self.m22, self.m12, self.m13, self.m23]
    }

    pub fn from_entries(e: [f64; 5]) -> Self {
        Self::new(e[0], e[1], e[2], e[3], e[4])
    }

    pub fn m11(&self) -> f64 {
        self.m11
    }
    pub fn m22(&self) -> f64 {
        self.m22
    }
    pub fn m33(&self) -> f64 {
        -self.m11 - self.m22
    }
    pub fn m12(&self) -> f64 {
        self.m12
    }
    pub fn m13(&self) -> f64 {
        self.m13
    }
    pub fn m23(&self) -> f64 {
        self.m23
    }

    pub fn to_matrix(&self) -> Mat3 {
        [
            [self.m11, self.m12, self.m13],
            [self.m12, self.m22, self.m23],
            [self.m13, self.m23, self.m33()],
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|x| x.is_finite())
    }

    /// Squared Frobenius norm `|M|² = tr(M²)`.
    pub fn norm_sq(&self) -> f64 {
        let m33 = self.m33();
        self.m11 * self.m11
            + self.m22 * self.m22
            + m33 * m33
            + 2.0 * (self.m12 * self.m12 + self.m13 * self.m13 + self.m23 * self.m23)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn det(&self) -> f64 {
        let (a, b, c) = (self.m11, self.m22, self.m33());
        let (d, e, f) = (self.m12, self.m13, self.m23);
        a * (b * c - f * f) - d * (d * c - f * e) + e * (d * f - b * e)
    }

    /// `tr(M³)`, evaluated directly from the entries.
    pub fn tr_cubed(&self) -> f64 {
        let m = self.to_matrix();
        let sq = mat_mul(&m, &m);
        let mut tr = 0.0;
        for i in 0..3 {
            for k in 0..3 {
                tr += sq[i][k] * m[k][i];
            }
        }
        tr
    }

    /// Frobenius inner product `M : N`.
    pub fn dot(&self, other: &TraceFreeSym3) -> f64 {
        self.m11 * other.m11
            + self.m22 * other.m22
            + self.m33() * other.m33()
            + 2.0 * (self.m12 * other.m12 + self.m13 * other.m13 + self.m23 * other.m23)
    }

    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        let m = self.to_matrix();
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    /// `M v` for a unit vector `v`; `|Mv| >= |λ₂|` for every such `v`.
    pub fn apply_to_vector(&self, v: &Vec3) -> Result<Vec3> {
        check_unit(v)?;
        Ok(self.mul_vec(v))
    }

    /// `R M Rᵀ`.
    pub fn rotated(&self, rot: &Mat3) -> Self {
        let m = self.to_matrix();
        let rm = mat_mul(rot, &m);
        let rt = transpose(rot);
        Self::deviatoric_part(&mat_mul(&rm, &rt))
    }

    /// Sorted eigenvalues by the trigonometric closed form.
    pub fn eigenvalues(&self) -> Result<EigenTriple> {
        if !self.is_finite() {
            return Err(Error::invalid("non-finite matrix entry"));
        }
        Ok(self.eigen_unchecked())
    }

    pub(crate) fn eigen_unchecked(&self) -> EigenTriple {
        let norm_sq = self.norm_sq();
        let norm = norm_sq.sqrt();
        if !(norm >= ZERO_NORM) {
            return EigenTriple::zero();
        }
        // For trace-free M: p = |M|/√6 and the eigenvalues are 2p cos(φ + 2πk/3)
        // with cos(3φ) = det(M) / (2p³).
        let p = norm / 6f64.sqrt();
        let c = (self.det() / (2.0 * p * p * p)).clamp(-1.0, 1.0);
        let phi = c.acos() / 3.0;
        let mut lambda3 = 2.0 * p * phi.cos();
        let mut lambda1 = 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
        let mut lambda2 = -lambda1 - lambda3;
        // The angle loses half its digits on a nearly repeated pair; the
        // isolated eigenvalue stays accurate, so split the pair again from
        // the 2×2 block orthogonal to its eigenvector.
        if lambda3 - lambda2 < PAIR_SPLIT * norm {
            if let Some((a, b)) = self.split_pair(lambda1) {
                (lambda2, lambda3) = (a, b);
            }
        } else if lambda2 - lambda1 < PAIR_SPLIT * norm {
            if let Some((a, b)) = self.split_pair(lambda3) {
                (lambda1, lambda2) = (a, b);
            }
        }
        EigenTriple {
            lambda1,
            lambda2,
            lambda3,
            lambda2_plus: lambda2.max(0.0),
            r: Some(-lambda1 / lambda3),
        }
    }

    /// The other two eigenvalues, ascending, given an isolated one.
    fn split_pair(&self, isolated: f64) -> Option<(f64, f64)> {
        let v = self.eigenvector(isolated)?;
        // any unit vector not parallel to v, then complete the frame
        let k = (0..3).min_by(|&i, &j| v[i].abs().total_cmp(&v[j].abs()))?;
        let mut w = [0.0; 3];
        w[k] = 1.0;
        let e1 = cross(&v, &w);
        let e1 = e1.map(|x| x / norm3(&e1));
        let e2 = cross(&v, &e1);
        let (m1, m2) = (self.mul_vec(&e1), self.mul_vec(&e2));
        let a = dot3(&e1, &m1);
        let c = dot3(&e2, &m2);
        let b = 0.5 * (dot3(&e1, &m2) + dot3(&e2, &m1));
        let mid = 0.5 * (a + c);
        let half = (0.5 * (a - c)).hypot(b);
        Some((mid - half, mid + half))
    }

    /// Unit eigenvector for a simple eigenvalue `lambda`; `None` when the
    /// eigenvalue is (numerically) repeated.
    pub fn eigenvector(&self, lambda: f64) -> Option<Vec3> {
        let mut m = self.to_matrix();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] -= lambda;
        }
        let pairs = [(0, 1), (0, 2), (1, 2)];
        let best = pairs
            .iter()
            .map(|&(i, j)| cross(&m[i], &m[j]))
            .max_by(|a, b| norm3(a).total_cmp(&norm3(b)))?;
        let len = norm3(&best);
        if !(len > 1e-12 * self.norm_sq().max(ZERO_NORM)) {
            return None;
        }
        Some([best[0] / len, best[1] / len, best[2] / len])
    }

    /// `(2/9)√6 |M|³ + 4 det M`, non-negative for every trace-free symmetric `M`.
    pub fn det_bound_gap(&self) -> f64 {
        let n = self.norm();
        det_bound_constant() * n * n * n + 4.0 * self.det()
    }

    /// `½ |M|² λ₂⁺ + det M`, non-negative for every trace-free symmetric `M`.
    pub fn lambda2_bound_gap(&self) -> f64 {
        let e = self.eigen_unchecked();
        0.5 * self.norm_sq() * e.lambda2_plus + self.det()
    }

    /// `(λ₃ - |M|/√6, -λ₁ - |M|/√6)`.
    pub fn extremal_eigen_bounds(&self) -> (f64, f64) {
        let e = self.eigen_unchecked();
        let b = self.norm() / 6f64.sqrt();
        (e.lambda3 - b, -e.lambda1 - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_entries(self.entries().map(|x| x * s))
    }
}

impl Add for TraceFreeSym3 {
    type Output = TraceFreeSym3;
    fn add(self, rhs: Self) -> Self {
        let (a, b) = (self.entries(), rhs.entries());
        Self::from_entries(std::array::from_fn(|i| a[i] + b[i]))
    }
}

impl Sub for TraceFreeSym3 {
    type Output = TraceFreeSym3;
    fn sub(self, rhs: Self) -> Self {
        let (a, b) = (self.entries(), rhs.entries());
        Self::from_entries(std::array::from_fn(|i| a[i] - b[i]))
    }
}

impl Neg for TraceFreeSym3 {
    type Output = TraceFreeSym3;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul<TraceFreeSym3> for f64 {
    type Output = TraceFreeSym3;
    fn mul(self, rhs: TraceFreeSym3) -> TraceFreeSym3 {
        rhs.scale(self)
    }
}

pub(crate) fn check_unit(v: &Vec3) -> Result<()> {
    let len = norm3(v);
    if !((len - 1.0).abs() <= UNIT_TOLERANCE) {
        return Err(Error::invalid(format!("direction vector has length {len}")));
    }
    Ok(())
}

pub fn norm3(v: &Vec3) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    c
}

pub fn transpose(a: &Mat3) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

/// Antisymmetric matrix of a vorticity vector,
/// `A = ½ [[0, ω₃, -ω₂], [-ω₃, 0, ω₁], [ω₂, -ω₁, 0]]`, so that `A ω = 0`
/// and `A_ij = ½(∂ᵢuⱼ - ∂ⱼuᵢ)`.
pub fn antisym_matrix(w: &Vec3) -> Mat3 {
    [
        [0.0, 0.5 * w[2], -0.5 * w[1]],
        [-0.5 * w[2], 0.0, 0.5 * w[0]],
        [0.5 * w[1], -0.5 * w[0], 0.0],
    ]
}

/// Rotation matrix from a (not necessarily normalized) quaternion.
pub fn rotation_from_quaternion(q: [f64; 4]) -> Mat3 {
    let n = (q.iter().map(|x| x * x).sum::<f64>()).sqrt();
    let [w, x, y, z] = q.map(|c| c / n);
    [
        [
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
        ],
        [
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
        ],
        [
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        ],
    ]
}
