//! Derivation algebras and the distinguished derivations of nilpotent algebras:
//! the pre-Einstein derivation and a maximal split torus of `Der(n)`.

use crate::algebra::{rational_eigenvalues_semisimple, LieAlgebra, MatSpan};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::Rat;
use num_traits::Zero;

/// A matrix Lie algebra of derivations of a fixed ambient Lie algebra.
#[derive(Clone, Debug)]
pub struct DerivationSpace {
    pub ambient_dim: usize,
    /// Echelon-canonical basis (as flattened vectors) reshaped into matrices.
    pub basis: Vec<Mat<Rat>>,
}

impl DerivationSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn span(&self) -> MatSpan {
        MatSpan::new(&self.basis)
    }

    pub fn contains(&self, d: &Mat<Rat>) -> bool {
        if self.basis.is_empty() {
            return d.is_zero();
        }
        self.span().contains(d)
    }

    /// Every basis commutator lies back in the span.
    pub fn is_bracket_closed(&self) -> bool {
        let span = self.span();
        for (i, a) in self.basis.iter().enumerate() {
            for b in &self.basis[i + 1..] {
                if !span.contains(&a.commutator(b)) {
                    return false;
                }
            }
        }
        true
    }

    /// Linear combination from coefficients in the basis order.
    pub fn combine(&self, coeffs: &[Rat]) -> Mat<Rat> {
        assert_eq!(coeffs.len(), self.basis.len());
        let n = self.ambient_dim;
        let mut out = Mat::zero(n, n);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                out = out.add(&b.scale(c));
            }
        }
        out
    }
}

/// Exact basis of `Der(L)`: the solution space of the Leibniz linear system.
pub fn derivation_algebra(l: &LieAlgebra) -> Result<DerivationSpace> {
    let n = l.dim();
    let unknowns = n * n; // d[r][c] flattened r*n + c
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                let mut row = vec![Rat::zero(); unknowns];
                // D[e_i,e_j]_k  = Σ_l d[k][l] c(i,j,l)
                for lidx in 0..n {
                    let c = l.c(i, j, lidx);
                    if !c.is_zero() {
                        row[k * n + lidx] = row[k * n + lidx].clone() + c.clone();
                    }
                }
                // -[D e_i, e_j]_k = -Σ_r d[r][i] c(r,j,k)
                for r in 0..n {
                    let c = l.c(r, j, k);
                    if !c.is_zero() {
                        row[r * n + i] = row[r * n + i].clone() - c.clone();
                    }
                }
                // -[e_i, D e_j]_k = -Σ_s d[s][j] c(i,s,k)
                for s in 0..n {
                    let c = l.c(i, s, k);
                    if !c.is_zero() {
                        row[s * n + j] = row[s * n + j].clone() - c.clone();
                    }
                }
                if row.iter().any(|v| !v.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let basis = if rows.is_empty() {
        // Leibniz is vacuous (abelian): all matrices are derivations.
        (0..unknowns)
            .map(|p| {
                Mat::from_fn(n, n, |r, c| {
                    if r * n + c == p {
                        Rat::from_integer(1.into())
                    } else {
                        Rat::zero()
                    }
                })
            })
            .collect()
    } else {
        let ker = Mat::from_rows(rows).kernel();
        (0..ker.cols())
            .map(|j| {
                let v = ker.col(j);
                Mat::from_fn(n, n, |r, c| v[r * n + c].clone())
            })
            .collect()
    };
    let space = DerivationSpace {
        ambient_dim: n,
        basis,
    };
    if !space.is_bracket_closed() {
        return Err(Error::Internal(
            "derivation space is not closed under commutator".into(),
        ));
    }
    Ok(space)
}

/// Span of the inner derivations `ad(e_i)`.
pub fn inner_derivations(l: &LieAlgebra) -> DerivationSpace {
    DerivationSpace {
        ambient_dim: l.dim(),
        basis: (0..l.dim()).map(|i| l.ad_basis(i)).collect(),
    }
}

/// `true` iff the Leibniz rule holds exactly on all basis pairs.
pub fn is_derivation(l: &LieAlgebra, d: &Mat<Rat>) -> Result<bool> {
    l.is_derivation(d)
}

/// A single exact derivation together with its verified spectrum.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub matrix: Mat<Rat>,
    /// (eigenvalue, eigenspace dimension); sums to the ambient dimension.
    pub eigenvalues: Vec<(Rat, usize)>,
}

/// Split torus inside `Der(N)` found by greedy extension: derivations diagonal
/// in the input basis, extended by commuting basis derivations that are
/// semisimple with rational eigenvalues.
///
/// The returned flag records that maximality is relative to this search.
pub fn maximal_split_torus_in_der(n_alg: &LieAlgebra) -> Result<(DerivationSpace, bool)> {
    if !n_alg.is_nilpotent() {
        return Err(Error::Unsupported(
            "maximal_split_torus_in_der expects a nilpotent algebra".into(),
        ));
    }
    let der = derivation_algebra(n_alg)?;
    Ok((split_torus_of_space(&der)?, true))
}

fn split_torus_of_space(der: &DerivationSpace) -> Result<DerivationSpace> {
    let n = der.ambient_dim;
    let k = der.dim();
    // Diagonal derivations: impose off-diagonal entries of Σ α_i D_i to vanish.
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for r in 0..n {
        for c in 0..n {
            if r == c {
                continue;
            }
            let row: Vec<Rat> = der.basis.iter().map(|d| d.at(r, c).clone()).collect();
            if row.iter().any(|v| !v.is_zero()) {
                rows.push(row);
            }
        }
    }
    let mut torus: Vec<Mat<Rat>> = if rows.is_empty() {
        der.basis.clone()
    } else {
        let ker = Mat::from_rows(rows).kernel();
        (0..ker.cols()).map(|j| der.combine(&ker.col(j))).collect()
    };
    // Greedy extension by commuting rational-semisimple basis derivations.
    let _ = k;
    loop {
        let mut extended = false;
        for cand in &der.basis {
            let span = MatSpan::new(&torus);
            if !torus.is_empty() && span.contains(cand) {
                continue;
            }
            if torus.iter().any(|t| !t.commutator(cand).is_zero()) {
                continue;
            }
            if rational_eigenvalues_semisimple(cand)?.is_none() {
                continue;
            }
            torus.push(cand.clone());
            extended = true;
        }
        if !extended {
            break;
        }
    }
    // Canonicalize through the coefficient space.
    let space = DerivationSpace {
        ambient_dim: n,
        basis: torus,
    };
    Ok(space)
}

/// The pre-Einstein derivation of a nilpotent algebra: the unique `φ` in a
/// maximal split torus of `Der(N)` with `tr(φψ) = tr(ψ)` for every derivation
/// `ψ`. The trace identity, semisimplicity, and rationality of the spectrum
/// are all verified exactly before returning.
pub fn pre_einstein_derivation(n_alg: &LieAlgebra) -> Result<Derivation> {
    if !n_alg.is_nilpotent() {
        return Err(Error::Unsupported(
            "pre_einstein_derivation expects a nilpotent algebra".into(),
        ));
    }
    let der = derivation_algebra(n_alg)?;
    let torus = split_torus_of_space(&der)?;
    if torus.dim() == 0 && der.dim() > 0 {
        return Err(Error::Internal(
            "empty torus in Der(N) for a nilpotent algebra".into(),
        ));
    }
    // Solve tr(φ ψ_i) = tr(ψ_i) for φ = Σ x_j T_j.
    let g = Mat::from_fn(der.dim(), torus.dim(), |i, j| {
        torus.basis[j].mul(&der.basis[i]).trace()
    });
    let rhs: Vec<Rat> = der.basis.iter().map(|d| d.trace()).collect();
    if g.kernel().cols() > 0 {
        return Err(Error::Internal(
            "degenerate trace form on the split torus of Der(N)".into(),
        ));
    }
    let x = g.solve(&rhs).ok_or_else(|| {
        Error::Internal("inconsistent trace system for the pre-Einstein derivation".into())
    })?;
    let phi = torus.combine(&x);
    for psi in &der.basis {
        if phi.mul(psi).trace() != psi.trace() {
            return Err(Error::Internal(
                "pre-Einstein trace identity failed exact re-verification".into(),
            ));
        }
    }
    let eigenvalues = rational_eigenvalues_semisimple(&phi)?.ok_or_else(|| {
        Error::Internal("pre-Einstein derivation is not rationally semisimple".into(),
        )
    })?;
    Ok(Derivation {
        matrix: phi,
        eigenvalues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::test_algebras::{heisenberg, iwasawa_sl2};
    use crate::scalar::{rat, rat_int};

    #[test]
    fn derivation_dimensions() {
        assert_eq!(derivation_algebra(&LieAlgebra::abelian(3)).unwrap().dim(), 9);
        assert_eq!(derivation_algebra(&heisenberg()).unwrap().dim(), 6);
        assert_eq!(derivation_algebra(&iwasawa_sl2()).unwrap().dim(), 2);
    }

    #[test]
    fn inner_derivations_are_derivations() {
        for l in [heisenberg(), iwasawa_sl2()] {
            let der = derivation_algebra(&l).unwrap();
            for d in &inner_derivations(&l).basis {
                assert!(der.contains(d) || d.is_zero());
            }
            assert!(der.is_bracket_closed());
        }
    }

    #[test]
    fn pre_einstein_heisenberg() {
        let phi = pre_einstein_derivation(&heisenberg()).unwrap();
        let expected = Mat::from_rows(vec![
            vec![rat(2, 3), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat(2, 3), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat(4, 3)],
        ]);
        assert_eq!(phi.matrix, expected);
        // Eigenvalues positive rationals.
        assert!(phi
            .eigenvalues
            .iter()
            .all(|(v, _)| v > &rat_int(0)));
        // Trace identity against all six basis derivations, exact.
        let der = derivation_algebra(&heisenberg()).unwrap();
        assert_eq!(der.dim(), 6);
        for psi in &der.basis {
            assert_eq!(phi.matrix.mul(psi).trace(), psi.trace());
        }
    }

    #[test]
    fn pre_einstein_abelian_is_identity() {
        for n in [1usize, 3] {
            let phi = pre_einstein_derivation(&LieAlgebra::abelian(n)).unwrap();
            assert_eq!(phi.matrix, Mat::identity(n));
        }
    }

    #[test]
    fn split_torus_examples() {
        let (t, maximal) = maximal_split_torus_in_der(&heisenberg()).unwrap();
        assert_eq!(t.dim(), 2);
        assert!(maximal);
        let (t, _) = maximal_split_torus_in_der(&LieAlgebra::abelian(3)).unwrap();
        assert_eq!(t.dim(), 3);
        // Contains the pre-Einstein derivation (here the identity).
        assert!(t.contains(&Mat::identity(3)));
    }

    #[test]
    fn torus_contains_pre_einstein() {
        let h = heisenberg();
        let (t, _) = maximal_split_torus_in_der(&h).unwrap();
        let phi = pre_einstein_derivation(&h).unwrap();
        assert!(t.contains(&phi.matrix));
    }
}
