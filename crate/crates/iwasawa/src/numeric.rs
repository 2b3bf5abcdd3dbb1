//! Floating-point kernel shared by the metric solvers: a scalar abstraction
//! over f64 and double-double, forward-mode dual numbers for exact analytic
//! gradients, and small dense matrix routines (LU, Cholesky, Jacobi
//! eigenvalues, matrix exponential).

use crate::dd::Dd;
use crate::scalar::{rat_to_f64, Rat};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Real:
    Copy
    + PartialOrd
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const PRECISION_BITS: u32;
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(x: f64) -> Self;
    fn to_f64(self) -> f64;
    fn from_rat(r: &Rat) -> Self;
    fn abs(self) -> Self;
    fn sqrt(self) -> Self;
    /// Machine epsilon scale of the representation.
    fn eps() -> Self;
    fn is_finite(self) -> bool;
}

impl Real for f64 {
    const PRECISION_BITS: u32 = 53;
    fn zero() -> f64 {
        0.0
    }
    fn one() -> f64 {
        1.0
    }
    fn from_f64(x: f64) -> f64 {
        x
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn from_rat(r: &Rat) -> f64 {
        rat_to_f64(r)
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn sqrt(self) -> f64 {
        f64::sqrt(self)
    }
    fn eps() -> f64 {
        f64::EPSILON
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Real for Dd {
    const PRECISION_BITS: u32 = 106;
    fn zero() -> Dd {
        Dd::ZERO
    }
    fn one() -> Dd {
        Dd::ONE
    }
    fn from_f64(x: f64) -> Dd {
        Dd::from_f64(x)
    }
    fn to_f64(self) -> f64 {
        Dd::to_f64(self)
    }
    fn from_rat(r: &Rat) -> Dd {
        Dd::from_rat(r)
    }
    fn abs(self) -> Dd {
        Dd::abs(self)
    }
    fn sqrt(self) -> Dd {
        Dd::sqrt(self)
    }
    fn eps() -> Dd {
        Dd::from_f64(2f64.powi(-104))
    }
    fn is_finite(self) -> bool {
        Dd::is_finite(self)
    }
}

/// Forward-mode dual number carrying one directional derivative.
#[derive(Clone, Copy, Debug)]
pub struct Dual<R: Real> {
    pub v: R,
    pub d: R,
}

impl<R: Real> Dual<R> {
    pub fn constant(v: R) -> Self {
        Dual { v, d: R::zero() }
    }
    pub fn seeded(v: R) -> Self {
        Dual { v, d: R::one() }
    }
}

impl<R: Real> Add for Dual<R> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual {
            v: self.v + o.v,
            d: self.d + o.d,
        }
    }
}
impl<R: Real> Sub for Dual<R> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual {
            v: self.v - o.v,
            d: self.d - o.d,
        }
    }
}
impl<R: Real> Mul for Dual<R> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Dual {
            v: self.v * o.v,
            d: self.d * o.v + self.v * o.d,
        }
    }
}
impl<R: Real> Div for Dual<R> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let v = self.v / o.v;
        Dual {
            v,
            d: (self.d - v * o.d) / o.v,
        }
    }
}
impl<R: Real> Neg for Dual<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual {
            v: -self.v,
            d: -self.d,
        }
    }
}
impl<R: Real> PartialEq for Dual<R> {
    fn eq(&self, o: &Self) -> bool {
        self.v == o.v
    }
}
impl<R: Real> PartialOrd for Dual<R> {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        self.v.partial_cmp(&o.v)
    }
}

impl<R: Real> Real for Dual<R> {
    const PRECISION_BITS: u32 = R::PRECISION_BITS;
    fn zero() -> Self {
        Dual::constant(R::zero())
    }
    fn one() -> Self {
        Dual::constant(R::one())
    }
    fn from_f64(x: f64) -> Self {
        Dual::constant(R::from_f64(x))
    }
    fn to_f64(self) -> f64 {
        self.v.to_f64()
    }
    fn from_rat(r: &Rat) -> Self {
        Dual::constant(R::from_rat(r))
    }
    fn abs(self) -> Self {
        if self.v < R::zero() {
            -self
        } else {
            self
        }
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        Dual {
            v: s,
            d: self.d / (R::from_f64(2.0) * s),
        }
    }
    fn eps() -> Self {
        Dual::constant(R::eps())
    }
    fn is_finite(self) -> bool {
        self.v.is_finite() && self.d.is_finite()
    }
}

/// Small dense matrix over a floating scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct NMat<R: Real> {
    pub n_rows: usize,
    pub n_cols: usize,
    pub data: Vec<R>,
}

impl<R: Real> NMat<R> {
    pub fn zero(r: usize, c: usize) -> Self {
        NMat {
            n_rows: r,
            n_cols: c,
            data: vec![R::zero(); r * c],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = NMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, R::one());
        }
        m
    }

    pub fn from_fn(r: usize, c: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                data.push(f(i, j));
            }
        }
        NMat {
            n_rows: r,
            n_cols: c,
            data,
        }
    }

    pub fn from_rat_mat(m: &crate::linalg::Mat<Rat>) -> Self {
        NMat::from_fn(m.rows(), m.cols(), |i, j| R::from_rat(m.at(i, j)))
    }

    pub fn convert<S: Real>(&self) -> NMat<S> {
        // Via f64; exact for f64 → Dd promotion.
        NMat::from_fn(self.n_rows, self.n_cols, |i, j| {
            S::from_f64(self.at(i, j).to_f64())
        })
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> R {
        self.data[r * self.n_cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: R) {
        self.data[r * self.n_cols + c] = v;
    }

    pub fn transpose(&self) -> Self {
        NMat::from_fn(self.n_cols, self.n_rows, |i, j| self.at(j, i))
    }

    pub fn add(&self, o: &Self) -> Self {
        NMat::from_fn(self.n_rows, self.n_cols, |i, j| self.at(i, j) + o.at(i, j))
    }

    pub fn sub(&self, o: &Self) -> Self {
        NMat::from_fn(self.n_rows, self.n_cols, |i, j| self.at(i, j) - o.at(i, j))
    }

    pub fn scale(&self, s: R) -> Self {
        NMat::from_fn(self.n_rows, self.n_cols, |i, j| self.at(i, j) * s)
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.n_cols, o.n_rows);
        let mut out = NMat::zero(self.n_rows, o.n_cols);
        for i in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self.at(i, k);
                for j in 0..o.n_cols {
                    out.set(i, j, out.at(i, j) + a * o.at(k, j));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[R]) -> Vec<R> {
        (0..self.n_rows)
            .map(|i| {
                let mut acc = R::zero();
                for j in 0..self.n_cols {
                    acc = acc + self.at(i, j) * v[j];
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> R {
        let mut t = R::zero();
        for i in 0..self.n_rows {
            t = t + self.at(i, i);
        }
        t
    }

    pub fn frob_sq(&self) -> R {
        let mut t = R::zero();
        for v in &self.data {
            t = t + *v * *v;
        }
        t
    }

    pub fn max_abs(&self) -> R {
        let mut m = R::zero();
        for v in &self.data {
            let a = v.abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    /// LU determinant with partial pivoting; None when numerically singular.
    pub fn det(&self) -> Option<R> {
        assert_eq!(self.n_rows, self.n_cols);
        let n = self.n_rows;
        let mut m = self.clone();
        let mut det = R::one();
        for col in 0..n {
            let mut piv = col;
            for r in col + 1..n {
                if m.at(r, col).abs() > m.at(piv, col).abs() {
                    piv = r;
                }
            }
            if m.at(piv, col).abs().to_f64() == 0.0 {
                return None;
            }
            if piv != col {
                det = -det;
                for c in 0..n {
                    let (a, b) = (m.at(col, c), m.at(piv, c));
                    m.set(col, c, b);
                    m.set(piv, c, a);
                }
            }
            let d = m.at(col, col);
            det = det * d;
            for r in col + 1..n {
                let f = m.at(r, col) / d;
                for c in col..n {
                    m.set(r, c, m.at(r, c) - f * m.at(col, c));
                }
            }
        }
        Some(det)
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.n_rows, self.n_cols);
        let n = self.n_rows;
        let mut m = self.clone();
        let mut inv = NMat::identity(n);
        for col in 0..n {
            let mut piv = col;
            for r in col + 1..n {
                if m.at(r, col).abs() > m.at(piv, col).abs() {
                    piv = r;
                }
            }
            if m.at(piv, col).abs().to_f64() == 0.0 {
                return None;
            }
            if piv != col {
                for c in 0..n {
                    let (a, b) = (m.at(col, c), m.at(piv, c));
                    m.set(col, c, b);
                    m.set(piv, c, a);
                    let (a, b) = (inv.at(col, c), inv.at(piv, c));
                    inv.set(col, c, b);
                    inv.set(piv, c, a);
                }
            }
            let d = m.at(col, col);
            for c in 0..n {
                m.set(col, c, m.at(col, c) / d);
                inv.set(col, c, inv.at(col, c) / d);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = m.at(r, col);
                if f.abs().to_f64() == 0.0 {
                    continue;
                }
                for c in 0..n {
                    m.set(r, c, m.at(r, c) - f * m.at(col, c));
                    inv.set(r, c, inv.at(r, c) - f * inv.at(col, c));
                }
            }
        }
        Some(inv)
    }

    /// Cholesky factor L (lower) with `A = L·Lᵀ`; None if not SPD.
    pub fn cholesky(&self) -> Option<Self> {
        assert_eq!(self.n_rows, self.n_cols);
        let n = self.n_rows;
        let mut l = NMat::zero(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = self.at(i, j);
                for k in 0..j {
                    s = s - l.at(i, k) * l.at(j, k);
                }
                if i == j {
                    if !(s > R::zero()) {
                        return None;
                    }
                    l.set(i, j, s.sqrt());
                } else {
                    l.set(i, j, s / l.at(j, j));
                }
            }
        }
        Some(l)
    }

    /// Eigenvalues (ascending) of a symmetric matrix by cyclic Jacobi; when
    /// `want_vectors` the second component has eigenvectors as columns.
    pub fn jacobi_eigh(&self, want_vectors: bool) -> (Vec<R>, Option<NMat<R>>) {
        assert_eq!(self.n_rows, self.n_cols);
        let n = self.n_rows;
        let mut a = self.clone();
        let mut v = if want_vectors {
            Some(NMat::identity(n))
        } else {
            None
        };
        let half = R::from_f64(0.5);
        for _sweep in 0..100 {
            let mut off = R::zero();
            for p in 0..n {
                for q in p + 1..n {
                    off = off + a.at(p, q) * a.at(p, q);
                }
            }
            let scale = a.frob_sq() + R::from_f64(1e-300);
            if off.to_f64() <= (R::eps() * R::eps() * scale).to_f64() {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a.at(p, q);
                    if apq.abs().to_f64() == 0.0 {
                        continue;
                    }
                    let theta = (a.at(q, q) - a.at(p, p)) / (R::from_f64(2.0) * apq);
                    let t = {
                        let sign = if theta < R::zero() { -R::one() } else { R::one() };
                        sign / (theta.abs() + (theta * theta + R::one()).sqrt())
                    };
                    let c = R::one() / (t * t + R::one()).sqrt();
                    let s = t * c;
                    let tau = s / (R::one() + c);
                    let app = a.at(p, p);
                    let aqq = a.at(q, q);
                    a.set(p, p, app - t * apq);
                    a.set(q, q, aqq + t * apq);
                    a.set(p, q, R::zero());
                    a.set(q, p, R::zero());
                    for r in 0..n {
                        if r != p && r != q {
                            let arp = a.at(r, p);
                            let arq = a.at(r, q);
                            a.set(r, p, arp - s * (arq + tau * arp));
                            a.set(p, r, a.at(r, p));
                            a.set(r, q, arq + s * (arp - tau * arq));
                            a.set(q, r, a.at(r, q));
                        }
                    }
                    if let Some(vm) = v.as_mut() {
                        for r in 0..n {
                            let vrp = vm.at(r, p);
                            let vrq = vm.at(r, q);
                            vm.set(r, p, vrp - s * (vrq + tau * vrp));
                            vm.set(r, q, vrq + s * (vrp - tau * vrq));
                        }
                    }
                    let _ = half;
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a.at(i, i).partial_cmp(&a.at(j, j)).unwrap());
        let vals: Vec<R> = order.iter().map(|&i| a.at(i, i)).collect();
        let vecs = v.map(|vm| NMat::from_fn(n, n, |r, c| vm.at(r, order[c])));
        (vals, vecs)
    }

    /// Matrix exponential by scaling-and-squaring with an adaptive Taylor tail.
    pub fn expm(&self) -> Self {
        assert_eq!(self.n_rows, self.n_cols);
        let n = self.n_rows;
        let norm = self.max_abs().to_f64() * n as f64;
        let s = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as i32
        } else {
            0
        };
        let scaled = self.scale(R::from_f64(0.5f64.powi(s)));
        let mut result = NMat::identity(n);
        let mut term = NMat::identity(n);
        for k in 1..200 {
            term = term.mul(&scaled).scale(R::one() / R::from_f64(k as f64));
            result = result.add(&term);
            if term.max_abs().to_f64() <= R::eps().to_f64() {
                break;
            }
        }
        for _ in 0..s {
            result = result.mul(&result);
        }
        result
    }
}

/// n-th root of a positive scalar by Newton iteration (no transcendentals).
pub fn nth_root<R: Real>(x: R, n: u32) -> R {
    assert!(x > R::zero(), "nth_root needs a positive argument");
    if n == 1 {
        return x;
    }
    let mut y = R::from_f64(x.to_f64().powf(1.0 / n as f64));
    let nn = R::from_f64(n as f64);
    for _ in 0..6 {
        // y ← y - (yⁿ - x) / (n·yⁿ⁻¹)
        let mut p = R::one();
        for _ in 0..n - 1 {
            p = p * y;
        }
        let f = p * y - x;
        y = y - f / (nn * p);
    }
    y
}

#[cfg(test)]
mod tests {
    use super::*;

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn inverse_and_det() {
        let m: NMat<f64> = NMat::from_fn(2, 2, |i, j| [[2.0, 1.0], [1.0, 3.0]][i][j]);
        approx(m.det().unwrap(), 5.0, 1e-12);
        let inv = m.inverse().unwrap();
        let id = m.mul(&inv);
        approx(id.at(0, 0), 1.0, 1e-12);
        approx(id.at(0, 1), 0.0, 1e-12);
    }

    #[test]
    fn cholesky_and_eigs() {
        let m: NMat<f64> = NMat::from_fn(2, 2, |i, j| [[4.0, 2.0], [2.0, 3.0]][i][j]);
        let l = m.cholesky().unwrap();
        let back = l.mul(&l.transpose());
        approx(back.at(0, 1), 2.0, 1e-12);
        let (vals, vecs) = m.jacobi_eigh(true);
        // Eigenvalues of [[4,2],[2,3]]: (7 ± √17)/2.
        approx(vals[0], (7.0 - 17f64.sqrt()) / 2.0, 1e-12);
        approx(vals[1], (7.0 + 17f64.sqrt()) / 2.0, 1e-12);
        let v = vecs.unwrap();
        // A v = λ v for the first column.
        let av = m.mul_vec(&[v.at(0, 0), v.at(1, 0)]);
        approx(av[0], vals[0] * v.at(0, 0), 1e-10);
        // Non-SPD rejected.
        let bad: NMat<f64> = NMat::from_fn(2, 2, |i, j| [[1.0, 2.0], [2.0, 1.0]][i][j]);
        assert!(bad.cholesky().is_none());
    }

    #[test]
    fn expm_rotation() {
        // exp of [[0, -θ], [θ, 0]] is a rotation by θ.
        let theta = 0.7f64;
        let m: NMat<f64> = NMat::from_fn(2, 2, |i, j| [[0.0, -theta], [theta, 0.0]][i][j]);
        let e = m.expm();
        approx(e.at(0, 0), theta.cos(), 1e-12);
        approx(e.at(1, 0), theta.sin(), 1e-12);
    }

    #[test]
    fn dual_derivatives() {
        // d/dx (x² + 3x) at x = 2 is 7; with a sqrt: d/dx sqrt(x) = 1/(2√x).
        let x: Dual<f64> = Dual::seeded(2.0);
        let y = x * x + Dual::constant(3.0) * x;
        approx(y.d, 7.0, 1e-12);
        let s = x.sqrt();
        approx(s.d, 1.0 / (2.0 * 2f64.sqrt()), 1e-12);
        // Through division and abs.
        let q = Dual::constant(1.0) / x;
        approx(q.d, -0.25, 1e-12);
    }

    #[test]
    fn dd_matrix_roundtrip() {
        let m: NMat<Dd> = NMat::from_fn(2, 2, |i, j| {
            Dd::from_f64([[4.0, 2.0], [2.0, 3.0]][i][j])
        });
        let l = m.cholesky().unwrap();
        let back = l.mul(&l.transpose());
        let err = back.sub(&m).max_abs();
        assert!(err.to_f64() < 1e-30);
    }

    #[test]
    fn nth_root_newton() {
        approx(nth_root(8.0f64, 3), 2.0, 1e-12);
        let r = nth_root(Dd::from_f64(16.0), 4);
        assert!((r - Dd::from_f64(2.0)).abs().to_f64() < 1e-30);
    }
}
