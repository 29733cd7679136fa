//! Points in ℝ^N, symmetry axes and linear isometries.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{abs, sqrt};

pub fn distance(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        s += (x - y) * (x - y);
    }
    sqrt(s)
}

pub fn norm(a: &[f64]) -> f64 {
    crate::math::norm(a)
}

pub fn axpy(alpha: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(a, b)| alpha * a + b).collect()
}

pub fn scale(alpha: f64, x: &[f64]) -> Vec<f64> {
    x.iter().map(|a| alpha * a).collect()
}

/// A line `origin + z·direction` with unit `direction`.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub origin: Vec<f64>,
    pub direction: Vec<f64>,
}

impl Axis {
    /// The line through `points` if they are collinear to relative tolerance
    /// `1e-12`. Coincident points give the first coordinate axis through them.
    pub fn through(points: &[&[f64]]) -> Option<Axis> {
        let first = points.first()?;
        let n = first.len();
        let far = points
            .iter()
            .map(|p| (distance(p, first), *p))
            .fold((0.0, *first), |acc, x| if x.0 > acc.0 { x } else { acc });
        let origin = first.to_vec();
        if far.0 == 0.0 {
            let mut direction = vec![0.0; n];
            direction[0] = 1.0;
            return Some(Axis { origin, direction });
        }
        let direction: Vec<f64> = far.1.iter().zip(first.iter()).map(|(a, b)| (a - b) / far.0).collect();
        let axis = Axis { origin, direction };
        let extent = points.iter().map(|p| norm(p)).fold(far.0, f64::max);
        for p in points {
            if axis.offset(p) > 1e-12 * extent {
                return None;
            }
        }
        Some(axis)
    }

    pub fn coordinate(&self, p: &[f64]) -> f64 {
        p.iter().zip(&self.origin).zip(&self.direction).map(|((x, o), d)| (x - o) * d).sum()
    }

    /// Distance from `p` to the line.
    pub fn offset(&self, p: &[f64]) -> f64 {
        let z = self.coordinate(p);
        let foot = self.point(z);
        distance(p, &foot)
    }

    pub fn point(&self, z: f64) -> Vec<f64> {
        axpy(z, &self.direction, &self.origin)
    }
}

/// `x ↦ M x + b` with orthogonal `M`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    n: usize,
    matrix: Vec<f64>,
    shift: Vec<f64>,
}

impl Isometry {
    pub fn identity(n: usize) -> Self {
        let mut matrix = vec![0.0; n * n];
        for i in 0..n {
            matrix[i * n + i] = 1.0;
        }
        Self { n, matrix, shift: vec![0.0; n] }
    }

    pub fn translation(shift: &[f64]) -> Self {
        let mut iso = Self::identity(shift.len());
        iso.shift = shift.to_vec();
        iso
    }

    /// Orthogonal part from the Gram–Schmidt orthonormalisation of the rows
    /// of `rows` (row-major `n×n`), with determinant forced to `+1`.
    pub fn rotation_from(rows: &[f64], n: usize) -> Result<Self> {
        if rows.len() != n * n {
            return Err(Error::InvalidParameter { name: "rows", value: rows.len() as f64, reason: "expected n*n entries" });
        }
        let mut q: Vec<Vec<f64>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = rows[i * n..(i + 1) * n].to_vec();
            for _ in 0..2 {
                for u in &q {
                    let d = crate::math::dot(&v, u);
                    for (a, b) in v.iter_mut().zip(u) {
                        *a -= d * b;
                    }
                }
            }
            let len = norm(&v);
            if !(len > 1e-10) {
                return Err(Error::InvalidParameter { name: "rows", value: len, reason: "rows are linearly dependent" });
            }
            q.push(v.into_iter().map(|a| a / len).collect());
        }
        let mut matrix: Vec<f64> = q.into_iter().flatten().collect();
        if determinant(&matrix, n) < 0.0 {
            for a in &mut matrix[..n] {
                *a = -*a;
            }
        }
        Ok(Self { n, matrix, shift: vec![0.0; n] })
    }

    pub fn then_translate(mut self, shift: &[f64]) -> Self {
        self.shift = self.shift.iter().zip(shift).map(|(a, b)| a + b).collect();
        self
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn linear(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n).map(|i| (0..n).map(|j| self.matrix[i * n + j] * x[j]).sum()).collect()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.linear(x);
        for (a, b) in y.iter_mut().zip(&self.shift) {
            *a += b;
        }
        y
    }

    /// `max |MᵀM − I|`, zero for an exact isometry.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let s: f64 = (0..n).map(|k| self.matrix[k * n + i] * self.matrix[k * n + j]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max(abs(s - target));
            }
        }
        worst
    }
}

fn determinant(m: &[f64], n: usize) -> f64 {
    let mut a = m.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let pivot = (c..n).max_by(|&i, &j| abs(a[i * n + c]).total_cmp(&abs(a[j * n + c]))).unwrap_or(c);
        if a[pivot * n + c] == 0.0 {
            return 0.0;
        }
        if pivot != c {
            for k in 0..n {
                a.swap(pivot * n + k, c * n + k);
            }
            det = -det;
        }
        det *= a[c * n + c];
        for r in c + 1..n {
            let factor = a[r * n + c] / a[c * n + c];
            for k in c..n {
                a[r * n + k] -= factor * a[c * n + k];
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collinear_points_share_an_axis() {
        let a = [1.0, 1.0, 0.0];
        let b = [2.0, 2.0, 0.0];
        let c = [-1.0, -1.0, 0.0];
        let axis = Axis::through(&[&a, &b, &c]).unwrap();
        assert!(((axis.coordinate(&b) - axis.coordinate(&a)).abs() - 2f64.sqrt()).abs() < 1e-14);
        assert!(axis.offset(&c) < 1e-14);
    }

    #[test]
    fn off_axis_point_is_detected() {
        let a = [0.0, 0.0, 0.0];
        let b = [1.0, 0.0, 0.0];
        let c = [0.5, 1e-3, 0.0];
        assert!(Axis::through(&[&a, &b, &c]).is_none());
    }

    #[test]
    fn rotation_is_orthogonal_and_proper() {
        let rows = [1.0, 2.0, 0.5, -0.3, 1.0, 2.0, 0.7, 0.1, 1.0];
        let rot = Isometry::rotation_from(&rows, 3).unwrap();
        assert!(rot.orthogonality_defect() < 1e-14);
        assert!(determinant(&rot.matrix, 3) > 0.0);
        let x = [1.0, -2.0, 3.0];
        assert!((norm(&rot.apply(&x)) - norm(&x)).abs() < 1e-13);
    }
}
