//! Complexified Lie algebras over the Gaussian rationals.
//!
//! `complexify` keeps the real structure constants and enlarges the scalar
//! field to ℚ(i); the standard conjugation σ (entrywise on coordinates, fixing
//! the real points) is the real-form datum.

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{Mat, Span};
use crate::scalar::{GaussRat, Rat};
use num_traits::Zero;

pub type CSpan = Span<GaussRat>;

/// Lie algebra over ℚ(i) given by structure constants.
#[derive(Clone, PartialEq, Debug)]
pub struct ComplexAlgebra {
    basis_names: Vec<String>,
    table: Vec<GaussRat>,
}

impl ComplexAlgebra {
    pub fn from_table(basis_names: Vec<String>, c: Vec<Vec<Vec<GaussRat>>>) -> Result<Self> {
        let n = basis_names.len();
        if c.len() != n || c.iter().any(|p| p.len() != n || p.iter().any(|q| q.len() != n)) {
            return Err(Error::Format(format!(
                "complex structure table must have shape {n}^3"
            )));
        }
        let mut table = Vec::with_capacity(n * n * n);
        for plane in &c {
            for row in plane {
                table.extend(row.iter().cloned());
            }
        }
        Ok(ComplexAlgebra { basis_names, table })
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &GaussRat {
        &self.table[(i * self.dim() + j) * self.dim() + k]
    }

    pub fn bracket(&self, x: &[GaussRat], y: &[GaussRat]) -> Vec<GaussRat> {
        let n = self.dim();
        assert_eq!(x.len(), n);
        assert_eq!(y.len(), n);
        let mut out = vec![GaussRat::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let f = x[i].clone() * y[j].clone();
                for k in 0..n {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        out[k] = out[k].clone() + f.clone() * c.clone();
                    }
                }
            }
        }
        out
    }

    pub fn ad(&self, x: &[GaussRat]) -> Mat<GaussRat> {
        let n = self.dim();
        Mat::from_fn(n, n, |i, j| {
            let mut e = vec![GaussRat::zero(); n];
            e[j] = GaussRat::from_rat(Rat::from_integer(1.into()));
            self.bracket(x, &e)[i].clone()
        })
    }

    /// Killing form matrix on the basis.
    pub fn killing_matrix(&self) -> Mat<GaussRat> {
        let n = self.dim();
        let ads: Vec<Mat<GaussRat>> = (0..n)
            .map(|i| {
                let mut e = vec![GaussRat::zero(); n];
                e[i] = GaussRat::from_rat(Rat::from_integer(1.into()));
                self.ad(&e)
            })
            .collect();
        Mat::from_fn(n, n, |i, j| ads[i].mul(&ads[j]).trace())
    }

    /// Antisymmetry and Jacobi over ℚ(i).
    pub fn check_valid(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    if !(self.c(i, j, k).clone() + self.c(j, i, k).clone()).is_zero() {
                        return Err(Error::Validation(format!(
                            "complex antisymmetry fails at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        let unit = |i: usize| {
            let mut e = vec![GaussRat::zero(); n];
            e[i] = GaussRat::from_rat(Rat::from_integer(1.into()));
            e
        };
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut s = self.bracket(&self.bracket(&unit(i), &unit(j)), &unit(k));
                    let t2 = self.bracket(&self.bracket(&unit(j), &unit(k)), &unit(i));
                    let t3 = self.bracket(&self.bracket(&unit(k), &unit(i)), &unit(j));
                    for l in 0..n {
                        s[l] = s[l].clone() + t2[l].clone() + t3[l].clone();
                    }
                    if s.iter().any(|v| !v.is_zero()) {
                        return Err(Error::Validation(format!(
                            "complex Jacobi fails at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Structure constants of a bracket-closed complex subspace.
    pub fn restrict_to(&self, s: &CSpan, name_prefix: &str) -> Result<ComplexAlgebra> {
        let d = s.dim();
        let basis = s.basis_vectors();
        let names = (1..=d).map(|i| format!("{name_prefix}{i}")).collect();
        let mut c = vec![vec![vec![GaussRat::zero(); d]; d]; d];
        for i in 0..d {
            for j in 0..d {
                let br = self.bracket(&basis[i], &basis[j]);
                let coords = s.coords_of(&br).ok_or_else(|| {
                    Error::Validation(format!(
                        "complex subspace not closed under bracket at ({i},{j})"
                    ))
                })?;
                c[i][j] = coords;
            }
        }
        ComplexAlgebra::from_table(names, c)
    }

    /// The conjugation σ fixing the real form: entrywise conjugation of
    /// coordinates in this basis.
    pub fn conjugate_vec(v: &[GaussRat]) -> Vec<GaussRat> {
        v.iter().map(GaussRat::conj).collect()
    }
}

/// Complexification: same names and structure constants over ℚ(i).
pub fn complexify(l: &LieAlgebra) -> ComplexAlgebra {
    let n = l.dim();
    let mut table = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                table.push(GaussRat::from_rat(l.c(i, j, k).clone()));
            }
        }
    }
    ComplexAlgebra {
        basis_names: l.basis_names().to_vec(),
        table,
    }
}

/// Embed a real vector into the complexification.
pub fn real_vec(v: &[Rat]) -> Vec<GaussRat> {
    v.iter().map(|x| GaussRat::from_rat(x.clone())).collect()
}

/// Embed a real matrix over ℚ into ℚ(i).
pub fn real_mat(m: &Mat<Rat>) -> Mat<GaussRat> {
    m.map(|x| GaussRat::from_rat(x.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::test_algebras::{heisenberg, sl2};
    use crate::scalar::rat_int;

    #[test]
    fn complexify_preserves_structure() {
        for l in [sl2(), heisenberg(), LieAlgebra::abelian(1)] {
            let lc = complexify(&l);
            lc.check_valid().unwrap();
            assert_eq!(lc.dim(), l.dim());
            for i in 0..l.dim() {
                for j in 0..l.dim() {
                    for k in 0..l.dim() {
                        assert_eq!(lc.c(i, j, k).re, *l.c(i, j, k));
                        assert!(lc.c(i, j, k).im.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn conjugation_fixes_real_points() {
        let v = vec![
            GaussRat::from_rat(rat_int(2)),
            GaussRat::new(rat_int(0), rat_int(3)),
        ];
        let c = ComplexAlgebra::conjugate_vec(&v);
        assert_eq!(c[0], v[0]);
        assert_eq!(c[1], GaussRat::new(rat_int(0), rat_int(-3)));
    }

    #[test]
    fn killing_of_sl2_complex() {
        let lc = complexify(&sl2());
        let b = lc.killing_matrix();
        assert_eq!(b.at(0, 0), &GaussRat::from_rat(rat_int(8)));
    }
}
