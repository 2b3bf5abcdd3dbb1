//! Exact dense linear algebra over an arbitrary field.
//!
//! Everything here is fraction-free in spirit but implemented directly over
//! the field (Gaussian elimination with exact pivots). Matrices are small
//! (dim ≤ a few dozen), so clarity wins over asymptotics.

use crate::scalar::Field;
use std::fmt;

/// Dense row-major matrix over a field.
#[derive(Clone, PartialEq)]
pub struct Mat<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format!("{}", self.at(r, c))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<F: Field> Mat<F> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(cols: Vec<Vec<F>>) -> Self {
        let c = cols.len();
        let r = if c == 0 { 0 } else { cols[0].len() };
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        Mat::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<F> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    pub fn col(&self, c: usize) -> Vec<F> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|c| self.col(c)).collect()
    }

    pub fn transpose(&self) -> Mat<F> {
        Mat::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn add(&self, o: &Mat<F>) -> Mat<F> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| {
            self.at(r, c).clone() + o.at(r, c).clone()
        })
    }

    pub fn sub(&self, o: &Mat<F>) -> Mat<F> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat::from_fn(self.rows, self.cols, |r, c| {
            self.at(r, c).clone() - o.at(r, c).clone()
        })
    }

    pub fn scale(&self, s: &F) -> Mat<F> {
        Mat::from_fn(self.rows, self.cols, |r, c| self.at(r, c).clone() * s.clone())
    }

    pub fn neg(&self) -> Mat<F> {
        Mat::from_fn(self.rows, self.cols, |r, c| -self.at(r, c).clone())
    }

    pub fn mul(&self, o: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, o.rows, "matmul shape");
        let mut out: Mat<F> = Mat::zero(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let v = out.at(r, c).clone() + a.clone() * o.at(k, c).clone();
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "matvec shape");
        (0..self.rows)
            .map(|r| {
                let mut acc = F::zero();
                for c in 0..self.cols {
                    if !self.at(r, c).is_zero() && !v[c].is_zero() {
                        acc = acc + self.at(r, c).clone() * v[c].clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// Commutator `AB - BA`.
    pub fn commutator(&self, o: &Mat<F>) -> Mat<F> {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn trace(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let mut t = F::zero();
        for i in 0..self.rows {
            t = t + self.at(i, i).clone();
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn hstack(&self, o: &Mat<F>) -> Mat<F> {
        assert_eq!(self.rows, o.rows);
        Mat::from_fn(self.rows, self.cols + o.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                o.at(r, c - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, o: &Mat<F>) -> Mat<F> {
        assert_eq!(self.cols, o.cols);
        Mat::from_fn(self.rows + o.rows, self.cols, |r, c| {
            if r < self.rows {
                self.at(r, c).clone()
            } else {
                o.at(r - self.rows, c).clone()
            }
        })
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Mat<F>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    let a = m.at(row, c).clone();
                    let b = m.at(p, c).clone();
                    m.set(row, c, b);
                    m.set(p, c, a);
                }
            }
            let inv = F::one() / m.at(row, col).clone();
            for c in col..m.cols {
                let v = m.at(row, c).clone() * inv.clone();
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).is_zero() {
                    let f = m.at(r, col).clone();
                    for c in col..m.cols {
                        let v = m.at(r, c).clone() - f.clone() * m.at(row, c).clone();
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the null space, returned as columns.
    pub fn kernel(&self) -> Mat<F> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &fc in &free {
            let mut v = vec![F::zero(); self.cols];
            v[fc] = F::one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -r.at(prow, fc).clone();
            }
            basis.push(v);
        }
        if basis.is_empty() {
            return Mat::zero(self.cols, 0);
        }
        Mat::from_cols(basis)
    }

    /// One solution of `self * x = b`, if consistent.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(self.rows, b.len());
        let aug = self.hstack(&Mat::from_cols(vec![b.to_vec()]));
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = vec![F::zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = r.at(prow, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat<F>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| r.at(i, n + j).clone()))
    }

    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = m.rows;
        let mut det = F::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.at(r, col).is_zero()) else {
                return F::zero();
            };
            if p != col {
                det = -det;
                for c in 0..n {
                    let a = m.at(col, c).clone();
                    let b = m.at(p, c).clone();
                    m.set(col, c, b);
                    m.set(p, c, a);
                }
            }
            let piv = m.at(col, col).clone();
            det = det * piv.clone();
            let inv = F::one() / piv;
            for r in col + 1..n {
                if !m.at(r, col).is_zero() {
                    let f = m.at(r, col).clone() * inv.clone();
                    for c in col..n {
                        let v = m.at(r, c).clone() - f.clone() * m.at(col, c).clone();
                        m.set(r, c, v);
                    }
                }
            }
        }
        det
    }

    /// Characteristic polynomial coefficients, ascending, monic of degree n.
    /// Faddeev–LeVerrier; exact over any field of characteristic zero.
    pub fn charpoly(&self) -> Vec<F> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut coeffs = vec![F::zero(); n + 1];
        coeffs[n] = F::one();
        let mut m = Mat::identity(n);
        for k in 1..=n {
            m = self.mul(&m);
            let c = -(m.trace() / F::from_int(k as i64));
            coeffs[n - k] = c.clone();
            for i in 0..n {
                let v = m.at(i, i).clone() + c.clone();
                m.set(i, i, v);
            }
        }
        coeffs
    }

    /// Flatten to a single vector, row-major.
    pub fn flatten(&self) -> Vec<F> {
        self.data.clone()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Mat<G> {
        Mat::from_fn(self.rows, self.cols, |r, c| f(self.at(r, c)))
    }
}

/// Span of a set of vectors in a fixed ambient dimension, stored in reduced
/// column echelon form so equal spans compare byte-equal.
#[derive(Clone, PartialEq)]
pub struct Span<F: Field> {
    ambient: usize,
    /// Columns form the canonical basis of the span.
    basis: Mat<F>,
}

impl<F: Field> fmt::Debug for Span<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Span(dim {} in {}): {:?}", self.dim(), self.ambient, self.basis)
    }
}

impl<F: Field> Span<F> {
    pub fn new(ambient: usize, vectors: Vec<Vec<F>>) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient), "wrong vector length");
        if vectors.is_empty() {
            return Span {
                ambient,
                basis: Mat::zero(ambient, 0),
            };
        }
        let rows = Mat::from_rows(vectors);
        let (r, pivots) = rows.rref();
        if pivots.is_empty() {
            return Span {
                ambient,
                basis: Mat::zero(ambient, 0),
            };
        }
        let basis_rows: Vec<Vec<F>> = (0..pivots.len()).map(|i| r.row(i)).collect();
        Span {
            ambient,
            basis: Mat::from_rows(basis_rows).transpose(),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Span::new(ambient, vec![])
    }

    pub fn full(ambient: usize) -> Self {
        Span::new(
            ambient,
            (0..ambient)
                .map(|i| {
                    let mut v = vec![F::zero(); ambient];
                    v[i] = F::one();
                    v
                })
                .collect(),
        )
    }

    pub fn from_cols(ambient: usize, m: &Mat<F>) -> Self {
        assert_eq!(m.rows(), ambient);
        Span::new(ambient, m.columns())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Canonical basis vectors (columns of the echelon basis matrix).
    pub fn basis_vectors(&self) -> Vec<Vec<F>> {
        self.basis.columns()
    }

    pub fn basis_matrix(&self) -> &Mat<F> {
        &self.basis
    }

    pub fn contains_vec(&self, v: &[F]) -> bool {
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        self.basis.solve(v).is_some()
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the span.
    pub fn coords_of(&self, v: &[F]) -> Option<Vec<F>> {
        self.basis.solve(v)
    }

    pub fn contains(&self, other: &Span<F>) -> bool {
        other.basis_vectors().iter().all(|v| self.contains_vec(v))
    }

    pub fn sum(&self, other: &Span<F>) -> Span<F> {
        assert_eq!(self.ambient, other.ambient);
        let mut vs = self.basis_vectors();
        vs.extend(other.basis_vectors());
        Span::new(self.ambient, vs)
    }

    pub fn intersect(&self, other: &Span<F>) -> Span<F> {
        assert_eq!(self.ambient, other.ambient);
        if self.is_zero() || other.is_zero() {
            return Span::zero(self.ambient);
        }
        // x = A u = B w  ⇔  [A | -B] (u, w)ᵀ = 0.
        let combined = self.basis.hstack(&other.basis.neg());
        let ker = combined.kernel();
        let mut vecs = Vec::new();
        for k in 0..ker.cols() {
            let u: Vec<F> = (0..self.dim()).map(|i| ker.at(i, k).clone()).collect();
            vecs.push(self.basis.mul_vec(&u));
        }
        Span::new(self.ambient, vecs)
    }

    /// Completes this span to the full ambient space with standard basis
    /// vectors, returning only the added complement vectors.
    pub fn complement(&self) -> Vec<Vec<F>> {
        let mut current = self.clone();
        let mut added = Vec::new();
        for i in 0..self.ambient {
            if current.dim() == self.ambient {
                break;
            }
            let mut e = vec![F::zero(); self.ambient];
            e[i] = F::one();
            if !current.contains_vec(&e) {
                added.push(e.clone());
                current = current.sum(&Span::new(self.ambient, vec![e]));
            }
        }
        added
    }

    /// Rows annihilating this span: K with K·basis = 0, rank = codim.
    pub fn left_annihilator(&self) -> Mat<F> {
        self.basis.transpose().kernel().transpose()
    }
}

pub type Subspace = Span<crate::scalar::Rat>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int, Rat};
    use num_traits::Zero;

    fn m(rows: Vec<Vec<i64>>) -> Mat<Rat> {
        Mat::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(rat_int).collect())
                .collect(),
        )
    }

    #[test]
    fn rref_rank_kernel() {
        let a = m(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 1, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.cols(), 1);
        let v = k.col(0);
        assert!(a.mul_vec(&v).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(vec![vec![2, 1], vec![1, 1]]);
        let x = a.solve(&[rat_int(3), rat_int(2)]).unwrap();
        assert_eq!(x, vec![rat_int(1), rat_int(1)]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Mat::identity(2));
        assert_eq!(a.det(), rat_int(1));
    }

    #[test]
    fn charpoly_2x2() {
        let a = m(vec![vec![2, 1], vec![0, 3]]);
        // (x-2)(x-3) = x² - 5x + 6
        assert_eq!(a.charpoly(), vec![rat_int(6), rat_int(-5), rat_int(1)]);
    }

    #[test]
    fn span_canonical_equality() {
        let s1 = Span::new(3, vec![
            vec![rat_int(1), rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(1), rat_int(1)],
        ]);
        let s2 = Span::new(3, vec![
            vec![rat_int(1), rat_int(1), rat_int(2)],
            vec![rat_int(2), rat_int(1), rat_int(3)],
            vec![rat_int(3), rat_int(2), rat_int(5)],
        ]);
        assert_eq!(s1, s2);
        assert_eq!(s1.dim(), 2);
        assert!(s1.contains_vec(&[rat_int(2), rat_int(2), rat_int(4)]));
        assert!(!s1.contains_vec(&[rat_int(1), rat_int(0), rat_int(0)]));
    }

    #[test]
    fn span_intersection_and_complement() {
        let s1 = Span::new(3, vec![
            vec![rat_int(1), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat_int(0)],
        ]);
        let s2 = Span::new(3, vec![
            vec![rat_int(0), rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(1)],
        ]);
        let i = s1.intersect(&s2);
        assert_eq!(i.dim(), 1);
        assert!(i.contains_vec(&[rat_int(0), rat_int(1), rat_int(0)]));
        let comp = s1.complement();
        assert_eq!(comp.len(), 1);
        let ann = s1.left_annihilator();
        assert_eq!(ann.rows(), 1);
        assert!(ann.mul(&s1.basis_matrix().clone()).is_zero());
    }

    #[test]
    fn gauss_rational_matrices() {
        use crate::scalar::GaussRat;
        let i = GaussRat::i();
        let a = Mat::from_rows(vec![
            vec![GaussRat::from_rat(rat_int(0)), i.clone()],
            vec![-i.clone(), GaussRat::from_rat(rat_int(0))],
        ]);
        // eigenvalues ±1: x² - 1
        let cp = a.charpoly();
        assert_eq!(cp[0], GaussRat::from_rat(rat_int(-1)));
        assert_eq!(cp[1], GaussRat::from_rat(rat_int(0)));
        assert!(a.inverse().is_some());
        let _ = rat(1, 2);
    }
}
