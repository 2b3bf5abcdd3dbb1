//! Finite-dimensional real Lie algebras as exact rational structure constants.

use crate::error::{Error, Result};
use crate::linalg::{Mat, Subspace};
use crate::poly::{rational_roots, Poly};
use crate::scalar::Rat;
use num_traits::{One, Signed, Zero};

/// A real Lie algebra on a named basis with `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Clone, PartialEq, Debug)]
pub struct LieAlgebra {
    basis_names: Vec<String>,
    /// Flattened structure table, index `(i * dim + j) * dim + k`.
    table: Vec<Rat>,
}

/// Outcome of checking antisymmetry and the Jacobi identity.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub antisymmetry_violations: Vec<(usize, usize, usize)>,
    pub jacobi_violations: Vec<(usize, usize, usize)>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.antisymmetry_violations.is_empty() && self.jacobi_violations.is_empty()
    }
}

/// Certificate attached to a computed nilradical.
#[derive(Clone, Debug)]
pub struct NilradicalCertificate {
    pub is_ideal: bool,
    pub is_nilpotent: bool,
    pub contains_derived_algebra: bool,
    pub complement_acts_semisimply: bool,
}

impl NilradicalCertificate {
    pub fn valid(&self) -> bool {
        self.is_ideal
            && self.is_nilpotent
            && self.contains_derived_algebra
            && self.complement_acts_semisimply
    }
}

impl LieAlgebra {
    /// Build from a full structure table `c[i][j][k]`; shape is checked,
    /// antisymmetry/Jacobi are not (see [`LieAlgebra::validate`]).
    pub fn from_table(basis_names: Vec<String>, c: Vec<Vec<Vec<Rat>>>) -> Result<Self> {
        let n = basis_names.len();
        if c.len() != n || c.iter().any(|p| p.len() != n || p.iter().any(|q| q.len() != n)) {
            return Err(Error::Format(format!(
                "structure table must have shape {n}^3"
            )));
        }
        let mut table = Vec::with_capacity(n * n * n);
        for plane in &c {
            for row in plane {
                table.extend(row.iter().cloned());
            }
        }
        Ok(LieAlgebra { basis_names, table })
    }

    /// Build from a sparse list of brackets `[left, right] = Σ result`, with
    /// antisymmetric completion. Duplicate or conflicting pairs are format
    /// errors.
    pub fn from_brackets(
        basis_names: Vec<String>,
        brackets: &[(usize, usize, Vec<(usize, Rat)>)],
    ) -> Result<Self> {
        let n = basis_names.len();
        let mut table = vec![Rat::zero(); n * n * n];
        let mut seen = std::collections::HashSet::new();
        for (i, j, result) in brackets {
            let (i, j) = (*i, *j);
            if i >= n || j >= n {
                return Err(Error::Format("bracket index out of range".into()));
            }
            if i == j && result.iter().any(|(_, v)| !v.is_zero()) {
                return Err(Error::Format(format!(
                    "nonzero self-bracket [{0},{0}]",
                    basis_names[i]
                )));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::Format(format!(
                    "bracket [{},{}] specified twice (antisymmetric completion is implicit)",
                    basis_names[i], basis_names[j]
                )));
            }
            for (k, v) in result {
                if *k >= n {
                    return Err(Error::Format("bracket result index out of range".into()));
                }
                table[(i * n + j) * n + k] = v.clone();
                table[(j * n + i) * n + k] = -v.clone();
            }
        }
        Ok(LieAlgebra { basis_names, table })
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            basis_names: (1..=dim).map(|i| format!("e{i}")).collect(),
            table: vec![Rat::zero(); dim * dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn name_index(&self, name: &str) -> Option<usize> {
        self.basis_names.iter().position(|n| n == name)
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.table[(i * self.dim() + j) * self.dim() + k]
    }

    /// Checks antisymmetry and the Jacobi identity exactly on all basis triples.
    pub fn validate(&self) -> ValidationReport {
        let n = self.dim();
        let mut report = ValidationReport::default();
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    if self.c(i, j, k).clone() + self.c(j, i, k).clone() != Rat::zero() {
                        report.antisymmetry_violations.push((i, j, k));
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let ei = basis_vec(n, i);
                    let ej = basis_vec(n, j);
                    let ek = basis_vec(n, k);
                    let mut sum = self.bracket(&self.bracket(&ei, &ej), &ek);
                    let t2 = self.bracket(&self.bracket(&ej, &ek), &ei);
                    let t3 = self.bracket(&self.bracket(&ek, &ei), &ej);
                    for l in 0..n {
                        sum[l] = sum[l].clone() + t2[l].clone() + t3[l].clone();
                    }
                    if sum.iter().any(|v| !v.is_zero()) {
                        report.jacobi_violations.push((i, j, k));
                    }
                }
            }
        }
        report
    }

    pub fn check_valid(&self) -> Result<()> {
        let r = self.validate();
        if r.ok() {
            Ok(())
        } else {
            Err(Error::Validation(format!(
                "antisymmetry violations at {:?}, Jacobi violations at {:?}",
                r.antisymmetry_violations, r.jacobi_violations
            )))
        }
    }

    /// Bilinear extension of the structure constants.
    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let n = self.dim();
        assert_eq!(x.len(), n, "bracket: left operand has wrong length");
        assert_eq!(y.len(), n, "bracket: right operand has wrong length");
        let mut out = vec![Rat::zero(); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let f = &x[i] * &y[j];
                for k in 0..n {
                    let c = self.c(i, j, k);
                    if !c.is_zero() {
                        out[k] = out[k].clone() + &f * c;
                    }
                }
            }
        }
        out
    }

    pub fn bracket_checked(&self, x: &[Rat], y: &[Rat]) -> Result<Vec<Rat>> {
        if x.len() != self.dim() || y.len() != self.dim() {
            return Err(Error::Dimension(format!(
                "bracket operands must have length {}, got {} and {}",
                self.dim(),
                x.len(),
                y.len()
            )));
        }
        Ok(self.bracket(x, y))
    }

    /// Matrix of `ad(x): y ↦ [x, y]` in the algebra basis.
    pub fn ad(&self, x: &[Rat]) -> Mat<Rat> {
        let n = self.dim();
        let mut m = Mat::zero(n, n);
        for j in 0..n {
            let col = self.bracket(x, &basis_vec(n, j));
            for i in 0..n {
                m.set(i, j, col[i].clone());
            }
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> Mat<Rat> {
        self.ad(&basis_vec(self.dim(), i))
    }

    /// Killing form `B(x, y) = tr(ad x ∘ ad y)`.
    pub fn killing_form(&self) -> SymmetricForm {
        let n = self.dim();
        let ads: Vec<Mat<Rat>> = (0..n).map(|i| self.ad_basis(i)).collect();
        let mut b = Mat::zero(n, n);
        for i in 0..n {
            for j in i..n {
                let mut t = Rat::zero();
                for r in 0..n {
                    for s in 0..n {
                        let a = ads[i].at(r, s);
                        if a.is_zero() {
                            continue;
                        }
                        t = t + a * ads[j].at(s, r);
                    }
                }
                b.set(i, j, t.clone());
                b.set(j, i, t);
            }
        }
        SymmetricForm { matrix: b }
    }

    /// Span of `[A, B]`.
    pub fn bracket_span(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut vecs = Vec::new();
        for x in a.basis_vectors() {
            for y in b.basis_vectors() {
                vecs.push(self.bracket(&x, &y));
            }
        }
        Subspace::new(self.dim(), vecs)
    }

    pub fn full_space(&self) -> Subspace {
        Subspace::full(self.dim())
    }

    /// Derived series `L ⊇ [L,L] ⊇ [[L,L],[L,L]] ⊇ …` until stable.
    pub fn derived_series(&self) -> Vec<Subspace> {
        let mut series = vec![self.full_space()];
        loop {
            let last = series.last().unwrap();
            let next = self.bracket_span(last, last);
            if &next == last {
                break;
            }
            let stop = next.is_zero();
            series.push(next);
            if stop {
                break;
            }
        }
        series
    }

    /// Lower central series `L ⊇ [L,L] ⊇ [L,[L,L]] ⊇ …` until stable.
    pub fn lower_central_series(&self) -> Vec<Subspace> {
        let full = self.full_space();
        let mut series = vec![full.clone()];
        loop {
            let last = series.last().unwrap();
            let next = self.bracket_span(&full, last);
            if &next == last {
                break;
            }
            let stop = next.is_zero();
            series.push(next);
            if stop {
                break;
            }
        }
        series
    }

    pub fn is_solvable(&self) -> bool {
        self.derived_series().last().unwrap().is_zero() || self.dim() == 0
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().unwrap().is_zero() || self.dim() == 0
    }

    pub fn is_abelian(&self) -> bool {
        self.table.iter().all(|v| v.is_zero())
    }

    pub fn center(&self) -> Subspace {
        self.centralizer(&self.full_space())
    }

    /// `Z_L(S) = {x : [x, s] = 0 for all s ∈ S}`.
    pub fn centralizer(&self, s: &Subspace) -> Subspace {
        let n = self.dim();
        if s.is_zero() {
            return self.full_space();
        }
        // [x, s_j] = -ad(s_j) x, so stack the ad matrices.
        let mut stacked: Option<Mat<Rat>> = None;
        for v in s.basis_vectors() {
            let m = self.ad(&v);
            stacked = Some(match stacked {
                None => m,
                Some(prev) => prev.vstack(&m),
            });
        }
        Subspace::from_cols(n, &stacked.unwrap().kernel())
    }

    /// `N_L(S) = {x : [x, S] ⊆ S}`.
    pub fn normalizer(&self, s: &Subspace) -> Subspace {
        let n = self.dim();
        if s.is_zero() || s.dim() == n {
            return self.full_space();
        }
        let ann = s.left_annihilator(); // rows kill S
        let mut stacked: Option<Mat<Rat>> = None;
        for v in s.basis_vectors() {
            let m = ann.mul(&self.ad(&v));
            stacked = Some(match stacked {
                None => m,
                Some(prev) => prev.vstack(&m),
            });
        }
        Subspace::from_cols(n, &stacked.unwrap().kernel())
    }

    pub fn is_subalgebra(&self, s: &Subspace) -> bool {
        self.bracket_span(s, s).dim() == self.bracket_span(s, s).intersect(s).dim()
    }

    pub fn is_ideal(&self, s: &Subspace) -> bool {
        let br = self.bracket_span(&self.full_space(), s);
        s.contains(&br)
    }

    /// Structure constants of a bracket-closed subspace in its canonical basis.
    pub fn restrict_to(&self, s: &Subspace, name_prefix: &str) -> Result<LieAlgebra> {
        let d = s.dim();
        let basis = s.basis_vectors();
        let names = (1..=d).map(|i| format!("{name_prefix}{i}")).collect();
        let mut c = vec![vec![vec![Rat::zero(); d]; d]; d];
        for i in 0..d {
            for j in 0..d {
                let br = self.bracket(&basis[i], &basis[j]);
                let coords = s.coords_of(&br).ok_or_else(|| {
                    Error::Validation(format!(
                        "subspace not closed under bracket at basis pair ({i},{j})"
                    ))
                })?;
                c[i][j] = coords;
            }
        }
        LieAlgebra::from_table(names, c)
    }

    /// Leibniz check: `D[x,y] = [Dx,y] + [x,Dy]` exactly on basis pairs.
    pub fn is_derivation(&self, d: &Mat<Rat>) -> Result<bool> {
        let n = self.dim();
        if d.rows() != n || d.cols() != n {
            return Err(Error::Dimension(format!(
                "derivation candidate must be {n}x{n}, got {}x{}",
                d.rows(),
                d.cols()
            )));
        }
        for i in 0..n {
            for j in i + 1..n {
                let ei = basis_vec(n, i);
                let ej = basis_vec(n, j);
                let lhs = d.mul_vec(&self.bracket(&ei, &ej));
                let r1 = self.bracket(&d.col(i), &ej);
                let r2 = self.bracket(&ei, &d.col(j));
                for k in 0..n {
                    if lhs[k].clone() - r1[k].clone() - r2[k].clone() != Rat::zero() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Nilradical of a solvable algebra, with a verification certificate.
    ///
    /// Restricted algorithm: start from `[L, L]`, extend by center vectors and
    /// standard basis vectors whose ad is nilpotent, then certify the result
    /// (nilpotent ideal containing `[L,L]`, complement acting semisimply).
    /// Inputs that defeat the search fail loudly with the broken check named.
    pub fn nilradical(&self) -> Result<(Subspace, NilradicalCertificate)> {
        if !self.is_solvable() {
            return Err(Error::Unsupported(
                "nilradical: input is not solvable".into(),
            ));
        }
        let n = self.dim();
        if self.is_nilpotent() {
            let cert = NilradicalCertificate {
                is_ideal: true,
                is_nilpotent: true,
                contains_derived_algebra: true,
                complement_acts_semisimply: true,
            };
            return Ok((self.full_space(), cert));
        }
        let full = self.full_space();
        let mut nil = self.bracket_span(&full, &full);
        loop {
            let mut extended = false;
            let mut candidates: Vec<Vec<Rat>> = self.center().basis_vectors();
            candidates.extend((0..n).map(|i| basis_vec(n, i)));
            for v in candidates {
                if nil.contains_vec(&v) {
                    continue;
                }
                if is_nilpotent_matrix(&self.ad(&v)) {
                    nil = nil.sum(&Subspace::new(n, vec![v]));
                    extended = true;
                }
            }
            if !extended {
                break;
            }
        }

        let derived = self.bracket_span(&full, &full);
        let cert = NilradicalCertificate {
            is_ideal: self.is_ideal(&nil),
            is_nilpotent: {
                let sub = self.restrict_to(&nil, "n")?;
                sub.is_nilpotent()
            },
            contains_derived_algebra: nil.contains(&derived),
            complement_acts_semisimply: nil.complement().iter().all(|v| {
                is_semisimple_matrix(&self.ad(v)).unwrap_or(false)
            }),
        };
        if !cert.valid() {
            return Err(Error::Unsupported(format!(
                "nilradical verification failed: {cert:?}"
            )));
        }
        Ok((nil, cert))
    }

    /// Semidirect product `m ⋉ L` for a commutator-closed space of derivations.
    ///
    /// Basis order is the `m` generators followed by the basis of `L`;
    /// `[(D,x), (D',x')] = ([D,D'], Dx' - D'x + [x,x'])`.
    pub fn semidirect_product(derivations: &[Mat<Rat>], l: &LieAlgebra) -> Result<LieAlgebra> {
        let k = derivations.len();
        let n = l.dim();
        for (idx, d) in derivations.iter().enumerate() {
            if !l.is_derivation(d)? {
                return Err(Error::Validation(format!(
                    "semidirect product: generator {idx} is not a derivation"
                )));
            }
        }
        let flat = MatSpan::new(derivations);
        if flat.dim() != k {
            return Err(Error::Validation(
                "semidirect product: derivation generators are linearly dependent".into(),
            ));
        }
        // Structure constants of m itself.
        let mut m_struct = vec![vec![vec![Rat::zero(); k]; k]; k];
        for i in 0..k {
            for j in 0..k {
                let comm = derivations[i].commutator(&derivations[j]);
                let coords = flat.coords(&comm).ok_or_else(|| {
                    Error::Validation(format!(
                        "semidirect product: [D{i}, D{j}] is outside the span of the generators"
                    ))
                })?;
                m_struct[i][j] = coords;
            }
        }
        let dim = k + n;
        let mut names: Vec<String> = (1..=k).map(|i| format!("D{i}")).collect();
        for name in l.basis_names() {
            let mut candidate = name.clone();
            while names.contains(&candidate) {
                candidate.push('\'');
            }
            names.push(candidate);
        }
        let mut c = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
        for i in 0..k {
            for j in 0..k {
                for t in 0..k {
                    c[i][j][t] = m_struct[i][j][t].clone();
                }
            }
        }
        for i in 0..k {
            for j in 0..n {
                let col = derivations[i].col(j);
                for t in 0..n {
                    c[i][k + j][k + t] = col[t].clone();
                    c[k + j][i][k + t] = -col[t].clone();
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for t in 0..n {
                    c[k + i][k + j][k + t] = l.c(i, j, t).clone();
                }
            }
        }
        let alg = LieAlgebra::from_table(names, c)?;
        alg.check_valid()
            .map_err(|e| Error::Internal(format!("semidirect product failed Jacobi: {e}")))?;
        Ok(alg)
    }
}

/// Span of matrices viewed as flat vectors; used for coordinates in spaces of
/// derivations.
pub struct MatSpan {
    mats: Mat<Rat>,
    shape: (usize, usize),
}

impl MatSpan {
    pub fn new(mats: &[Mat<Rat>]) -> Self {
        let shape = if mats.is_empty() {
            (0, 0)
        } else {
            (mats[0].rows(), mats[0].cols())
        };
        let cols: Vec<Vec<Rat>> = mats.iter().map(|m| m.flatten()).collect();
        MatSpan {
            mats: Mat::from_cols(cols),
            shape,
        }
    }

    pub fn dim(&self) -> usize {
        self.mats.rank()
    }

    pub fn coords(&self, m: &Mat<Rat>) -> Option<Vec<Rat>> {
        assert_eq!((m.rows(), m.cols()), self.shape);
        self.mats.solve(&m.flatten())
    }

    pub fn contains(&self, m: &Mat<Rat>) -> bool {
        m.is_zero() || self.coords(m).is_some()
    }
}

/// Symmetric bilinear form on the basis of a Lie algebra.
#[derive(Clone, PartialEq, Debug)]
pub struct SymmetricForm {
    pub matrix: Mat<Rat>,
}

impl SymmetricForm {
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn eval(&self, x: &[Rat], y: &[Rat]) -> Rat {
        let mx = self.matrix.mul_vec(y);
        let mut acc = Rat::zero();
        for i in 0..x.len() {
            acc = acc + &x[i] * &mx[i];
        }
        acc
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrix == self.matrix.transpose()
    }

    /// `B([x,y],z) + B(y,[x,z]) = 0` exactly on all basis triples.
    pub fn is_ad_invariant(&self, l: &LieAlgebra) -> bool {
        let n = l.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let ei = basis_vec(n, i);
                    let ej = basis_vec(n, j);
                    let ek = basis_vec(n, k);
                    let lhs = self.eval(&l.bracket(&ei, &ej), &ek);
                    let rhs = self.eval(&ej, &l.bracket(&ei, &ek));
                    if lhs + rhs != Rat::zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Pull back to a subspace basis: `Bᵀ M B`.
    pub fn restrict(&self, s: &Subspace) -> SymmetricForm {
        let b = s.basis_matrix();
        SymmetricForm {
            matrix: b.transpose().mul(&self.matrix).mul(b),
        }
    }

    /// Radical `{x : B(x, ·) = 0}`.
    pub fn radical(&self) -> Subspace {
        Subspace::from_cols(self.dim(), &self.matrix.kernel())
    }

    /// Signature `(positive, negative, zero)` by exact congruence diagonalization.
    pub fn signature(&self) -> (usize, usize, usize) {
        let n = self.dim();
        let mut m = self.matrix.clone();
        let (mut pos, mut neg, mut zero) = (0usize, 0usize, 0usize);
        let mut i = 0;
        while i < n {
            if m.at(i, i).is_zero() {
                // Find a nonzero diagonal entry below to swap in, else create one.
                if let Some(j) = (i + 1..n).find(|&j| !m.at(j, j).is_zero()) {
                    swap_sym(&mut m, i, j);
                } else if let Some((j, k)) = find_offdiag(&m, i) {
                    // m[j][k] ≠ 0 with zero diagonal: add row/col k to j.
                    add_sym(&mut m, j, k, &Rat::one());
                    if j != i {
                        swap_sym(&mut m, i, j);
                    }
                } else {
                    zero += n - i;
                    break;
                }
            }
            let d = m.at(i, i).clone();
            if d.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            for j in i + 1..n {
                if !m.at(j, i).is_zero() {
                    let f = -(m.at(j, i).clone() / d.clone());
                    add_sym(&mut m, j, i, &f);
                }
            }
            i += 1;
        }
        (pos, neg, zero)
    }

    /// Negative semidefinite test: signature has no positive directions.
    pub fn is_negative_semidefinite(&self) -> bool {
        self.signature().0 == 0
    }
}

fn swap_sym(m: &mut Mat<Rat>, a: usize, b: usize) {
    let n = m.rows();
    for c in 0..n {
        let (x, y) = (m.at(a, c).clone(), m.at(b, c).clone());
        m.set(a, c, y);
        m.set(b, c, x);
    }
    for r in 0..n {
        let (x, y) = (m.at(r, a).clone(), m.at(r, b).clone());
        m.set(r, a, y);
        m.set(r, b, x);
    }
}

fn add_sym(m: &mut Mat<Rat>, dst: usize, src: usize, f: &Rat) {
    let n = m.rows();
    for c in 0..n {
        let v = m.at(dst, c).clone() + f.clone() * m.at(src, c).clone();
        m.set(dst, c, v);
    }
    for r in 0..n {
        let v = m.at(r, dst).clone() + f.clone() * m.at(r, src).clone();
        m.set(r, dst, v);
    }
}

fn find_offdiag(m: &Mat<Rat>, from: usize) -> Option<(usize, usize)> {
    let n = m.rows();
    for j in from..n {
        for k in j + 1..n {
            if !m.at(j, k).is_zero() {
                return Some((j, k));
            }
        }
    }
    None
}

pub fn basis_vec(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = Rat::one();
    v
}

pub fn is_nilpotent_matrix(m: &Mat<Rat>) -> bool {
    let n = m.rows();
    let mut p = m.clone();
    let mut k = 1;
    while k < n {
        if p.is_zero() {
            return true;
        }
        p = p.mul(&p);
        k *= 2;
    }
    p.is_zero()
}

/// Semisimple over ℂ ⇔ the squarefree part of the characteristic polynomial
/// annihilates the matrix.
pub fn is_semisimple_matrix(m: &Mat<Rat>) -> Result<bool> {
    let radical = Poly::new(m.charpoly()).squarefree_part();
    Ok(eval_poly_matrix(&radical, m).is_zero())
}

/// Diagonalizable over ℚ with the eigenvalues returned (value, eigenspace dim).
pub fn rational_eigenvalues_semisimple(m: &Mat<Rat>) -> Result<Option<Vec<(Rat, usize)>>> {
    let n = m.rows();
    let roots = rational_roots(&Poly::new(m.charpoly()))?;
    let mut total = 0usize;
    let mut out = Vec::new();
    for (val, _) in &roots {
        let shifted = m.sub(&Mat::identity(n).scale(val));
        let dim = n - shifted.rank();
        if dim > 0 {
            out.push((val.clone(), dim));
            total += dim;
        }
    }
    if total == n {
        Ok(Some(out))
    } else {
        Ok(None)
    }
}

pub fn eval_poly_matrix(p: &Poly<Rat>, m: &Mat<Rat>) -> Mat<Rat> {
    let n = m.rows();
    let mut acc = Mat::zero(n, n);
    for c in p.coeffs.iter().rev() {
        acc = m.mul(&acc);
        for i in 0..n {
            let v = acc.at(i, i).clone() + c.clone();
            acc.set(i, i, v);
        }
    }
    acc
}

#[cfg(test)]
pub mod test_algebras {
    use super::*;
    use crate::scalar::rat_int;

    /// Heisenberg h₃ with [X,Y] = Z.
    pub fn heisenberg() -> LieAlgebra {
        LieAlgebra::from_brackets(
            vec!["X".into(), "Y".into(), "Z".into()],
            &[(0, 1, vec![(2, rat_int(1))])],
        )
        .unwrap()
    }

    /// sl(2,ℝ) with H, E, F: [H,E]=2E, [H,F]=-2F, [E,F]=H.
    pub fn sl2() -> LieAlgebra {
        LieAlgebra::from_brackets(
            vec!["H".into(), "E".into(), "F".into()],
            &[
                (0, 1, vec![(1, rat_int(2))]),
                (0, 2, vec![(2, rat_int(-2))]),
                (1, 2, vec![(0, rat_int(1))]),
            ],
        )
        .unwrap()
    }

    /// Iwasawa subalgebra of sl(2,ℝ): [A,X] = X.
    pub fn iwasawa_sl2() -> LieAlgebra {
        LieAlgebra::from_brackets(
            vec!["A".into(), "X".into()],
            &[(0, 1, vec![(1, rat_int(1))])],
        )
        .unwrap()
    }

    /// ℝ ⋉ ℝⁿ with the ℝ factor acting by the identity.
    pub fn hyperbolic(n: usize) -> LieAlgebra {
        let mut names = vec!["A".to_string()];
        names.extend((1..=n).map(|i| format!("e{i}")));
        let brackets: Vec<(usize, usize, Vec<(usize, Rat)>)> =
            (1..=n).map(|i| (0, i, vec![(i, Rat::one())])).collect();
        LieAlgebra::from_brackets(names, &brackets).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::test_algebras::*;
    use super::*;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn validate_good_and_broken() {
        assert!(LieAlgebra::abelian(2).validate().ok());
        assert!(heisenberg().validate().ok());
        assert!(sl2().validate().ok());
        // Broken antisymmetry: c[X][Y][Z] = c[Y][X][Z] = 1.
        let mut c = vec![vec![vec![Rat::zero(); 3]; 3]; 3];
        c[0][1][2] = rat_int(1);
        c[1][0][2] = rat_int(1);
        let bad = LieAlgebra::from_table(vec!["X".into(), "Y".into(), "Z".into()], c).unwrap();
        let report = bad.validate();
        assert!(!report.ok());
        assert!(report.antisymmetry_violations.contains(&(0, 1, 2)));
    }

    #[test]
    fn format_errors() {
        // Double specification.
        let err = LieAlgebra::from_brackets(
            vec!["X".into(), "Y".into()],
            &[
                (0, 1, vec![(0, rat_int(1))]),
                (1, 0, vec![(0, rat_int(-1))]),
            ],
        );
        assert!(matches!(err, Err(Error::Format(_))));
        // Wrong shape.
        let err = LieAlgebra::from_table(vec!["X".into()], vec![]);
        assert!(matches!(err, Err(Error::Format(_))));
    }

    #[test]
    fn bracket_defining_relations() {
        let h = heisenberg();
        let x = basis_vec(3, 0);
        let y = basis_vec(3, 1);
        assert_eq!(h.bracket(&x, &y), basis_vec(3, 2));
        assert_eq!(h.bracket(&x, &x), vec![Rat::zero(); 3]);
        let s = sl2();
        let e = basis_vec(3, 1);
        let f = basis_vec(3, 2);
        assert_eq!(s.bracket(&e, &f), basis_vec(3, 0));
        assert!(s
            .bracket_checked(&[rat_int(1)], &basis_vec(3, 0))
            .is_err());
    }

    #[test]
    fn killing_forms() {
        assert!(LieAlgebra::abelian(3).killing_form().matrix.is_zero());
        assert!(heisenberg().killing_form().matrix.is_zero());
        let b = sl2().killing_form();
        assert_eq!(b.eval(&basis_vec(3, 0), &basis_vec(3, 0)), rat_int(8));
        assert!(b.is_ad_invariant(&sl2()));
        assert!(b.is_symmetric());
        // Signature of sl(2,R): (2, 1) — split form.
        assert_eq!(b.signature(), (2, 1, 0));
    }

    #[test]
    fn series_examples() {
        let h = heisenberg();
        let lcs = h.lower_central_series();
        assert_eq!(
            lcs.iter().map(|s| s.dim()).collect::<Vec<_>>(),
            vec![3, 1, 0]
        );
        assert!(h.is_nilpotent());

        let s = sl2();
        let ds = s.derived_series();
        assert_eq!(ds.iter().map(|s| s.dim()).collect::<Vec<_>>(), vec![3]);
        assert!(!s.is_solvable());

        let iw = iwasawa_sl2();
        let ds = iw.derived_series();
        assert_eq!(ds.iter().map(|s| s.dim()).collect::<Vec<_>>(), vec![2, 1, 0]);
        assert!(iw.is_solvable());
        assert!(!iw.is_nilpotent());
    }

    #[test]
    fn centralizers_and_normalizers() {
        let h = heisenberg();
        let center = h.center();
        assert_eq!(center.dim(), 1);
        assert!(center.contains_vec(&basis_vec(3, 2)));
        // Normalizer of span(X) in h₃ is span(X, Z).
        let sx = Subspace::new(3, vec![basis_vec(3, 0)]);
        let nx = h.normalizer(&sx);
        assert_eq!(nx.dim(), 2);
        assert!(nx.contains_vec(&basis_vec(3, 2)));
    }

    #[test]
    fn nilradical_examples() {
        let (n, cert) = heisenberg().nilradical().unwrap();
        assert_eq!(n.dim(), 3);
        assert!(cert.valid());

        let (n, _) = hyperbolic(3).nilradical().unwrap();
        assert_eq!(n.dim(), 3);
        assert!(!n.contains_vec(&basis_vec(4, 0)));

        let (n, _) = iwasawa_sl2().nilradical().unwrap();
        assert_eq!(n.dim(), 1);

        assert!(sl2().nilradical().is_err());
    }

    #[test]
    fn nilradical_needs_central_extension() {
        // ℝ ⋉ ℝ² acting by diag(1, 0): nilradical is ℝ², strictly larger
        // than [L, L] = span(e1).
        let l = LieAlgebra::from_brackets(
            vec!["A".into(), "e1".into(), "e2".into()],
            &[(0, 1, vec![(1, rat_int(1))])],
        )
        .unwrap();
        let (n, _) = l.nilradical().unwrap();
        assert_eq!(n.dim(), 2);
        assert!(n.contains_vec(&basis_vec(3, 2)));
        assert!(n.contains_vec(&basis_vec(3, 1)));
    }

    #[test]
    fn semidirect_products() {
        // so(2) acting on ℝ²: Euclidean algebra e(2).
        let rot = Mat::from_rows(vec![
            vec![rat_int(0), rat_int(-1)],
            vec![rat_int(1), rat_int(0)],
        ]);
        let e2 = LieAlgebra::semidirect_product(&[rot], &LieAlgebra::abelian(2)).unwrap();
        assert_eq!(e2.dim(), 3);
        assert!(e2.validate().ok());
        assert!(e2.is_solvable());

        // Zero action reproduces the direct sum.
        let l = LieAlgebra::semidirect_product(&[], &heisenberg()).unwrap();
        assert_eq!(l.dim(), 3);

        // Identity is not a derivation of h₃.
        let id = Mat::identity(3);
        assert!(LieAlgebra::semidirect_product(&[id], &heisenberg()).is_err());
    }

    #[test]
    fn derivation_checks() {
        let h = heisenberg();
        assert!(!h.is_derivation(&Mat::identity(3)).unwrap());
        let d = Mat::from_rows(vec![
            vec![rat_int(1), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(2)],
        ]);
        assert!(h.is_derivation(&d).unwrap());
        // Inner derivations.
        for i in 0..3 {
            assert!(h.is_derivation(&h.ad_basis(i)).unwrap());
        }
        let _ = rat(1, 2);
    }

    #[test]
    fn semisimple_and_nilpotent_matrix_tests() {
        let nilp = Mat::from_rows(vec![
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(0)],
        ]);
        assert!(is_nilpotent_matrix(&nilp));
        assert!(!is_semisimple_matrix(&nilp).unwrap());
        let diag = Mat::from_rows(vec![
            vec![rat_int(3), rat_int(0)],
            vec![rat_int(0), rat_int(-1)],
        ]);
        assert!(is_semisimple_matrix(&diag).unwrap());
        let eigs = rational_eigenvalues_semisimple(&diag).unwrap().unwrap();
        assert_eq!(eigs.len(), 2);
        // Rotation matrix: semisimple but no rational eigenvalues.
        let rot = Mat::from_rows(vec![
            vec![rat_int(0), rat_int(-1)],
            vec![rat_int(1), rat_int(0)],
        ]);
        assert!(is_semisimple_matrix(&rot).unwrap());
        assert!(rational_eigenvalues_semisimple(&rot).unwrap().is_none());
    }
}
