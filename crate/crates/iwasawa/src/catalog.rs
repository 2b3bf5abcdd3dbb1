//! Ground-truth constructors: classical real simple Lie algebras realized as
//! exact rational matrix algebras, with their Iwasawa decompositions and
//! published Satake diagrams.
//!
//! Every family is realized with a restricted-root-adapted bilinear form (the
//! antidiagonal "quasi-split" arrangement), so that the split torus `a` is
//! the diagonal part of `g` and the nilpotent part `n` is the strictly upper
//! triangular part. All entry invariants are verified exactly at build time.

use crate::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{Mat, Subspace};
use crate::satake::{expected_satake, SatakeDiagram};
use crate::scalar::{rat_int, Rat};
use num_traits::{One, Zero};

/// Complex matrix `re + i·im` with exact rational parts.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    pub re: Mat<Rat>,
    pub im: Mat<Rat>,
}

impl CMat {
    pub fn zero(n: usize) -> Self {
        CMat {
            re: Mat::zero(n, n),
            im: Mat::zero(n, n),
        }
    }

    pub fn size(&self) -> usize {
        self.re.rows()
    }

    pub fn mul(&self, o: &CMat) -> CMat {
        CMat {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn sub(&self, o: &CMat) -> CMat {
        CMat {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn commutator(&self, o: &CMat) -> CMat {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn flatten(&self) -> Vec<Rat> {
        let mut v = self.re.flatten();
        v.extend(self.im.flatten());
        v
    }

    pub fn from_flat(n: usize, v: &[Rat]) -> CMat {
        assert_eq!(v.len(), 2 * n * n);
        CMat {
            re: Mat::from_fn(n, n, |r, c| v[r * n + c].clone()),
            im: Mat::from_fn(n, n, |r, c| v[n * n + r * n + c].clone()),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    /// sl(n, ℝ)
    Sl,
    /// su(p, q)
    Su,
    /// so(p, q)
    So,
    /// sp(2n, ℝ)
    Sp,
}

/// A classical real form with its Iwasawa data. All subspaces are in the
/// coordinates of `g`'s basis.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub label: String,
    pub g: LieAlgebra,
    pub matrices: Vec<CMat>,
    pub matrix_size: usize,
    pub k: Subspace,
    pub a: Subspace,
    pub n: Subspace,
    pub m: Subspace,
    /// `s = a ⊕ n`.
    pub iwasawa: Subspace,
}

type Cond = Box<dyn Fn(&CMat) -> Vec<Rat>>;

fn real_part_vanishes_im(_n: usize) -> Cond {
    Box::new(|m: &CMat| m.im.flatten())
}

fn traceless() -> Cond {
    Box::new(|m: &CMat| vec![m.re.trace(), m.im.trace()])
}

/// `M† F + F M = 0` for a real symmetric form F (complex case).
fn hermitian_form_cond(f: Mat<Rat>) -> Cond {
    Box::new(move |m: &CMat| {
        let re = m.re.transpose().mul(&f).add(&f.mul(&m.re));
        let im = f.mul(&m.im).sub(&m.im.transpose().mul(&f));
        let mut v = re.flatten();
        v.extend(im.flatten());
        v
    })
}

/// `Xᵀ F + F X = 0` on the real part only (so / sp families).
fn bilinear_form_cond(f: Mat<Rat>) -> Cond {
    Box::new(move |m: &CMat| m.re.transpose().mul(&f).add(&f.mul(&m.re)).flatten())
}

/// Anti-hermitian: `M† = -M`, the compact part under θ(M) = -M†.
fn antihermitian_cond() -> Cond {
    Box::new(|m: &CMat| {
        let mut v = m.re.add(&m.re.transpose()).flatten();
        v.extend(m.im.sub(&m.im.transpose()).flatten());
        v
    })
}

/// Real diagonal: off-diagonal of the real part and the whole imaginary part.
fn real_diagonal_cond() -> Cond {
    Box::new(|m: &CMat| {
        let n = m.size();
        let mut v = Vec::new();
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    v.push(m.re.at(r, c).clone());
                }
            }
        }
        v.extend(m.im.flatten());
        v
    })
}

/// Strictly upper triangular: everything on or below the diagonal vanishes.
fn strict_upper_cond() -> Cond {
    Box::new(|m: &CMat| {
        let n = m.size();
        let mut v = Vec::new();
        for r in 0..n {
            for c in 0..=r {
                v.push(m.re.at(r, c).clone());
                v.push(m.im.at(r, c).clone());
            }
        }
        v
    })
}

fn commutes_with(y: CMat) -> Cond {
    Box::new(move |m: &CMat| m.commutator(&y).flatten())
}

/// Solution space of a set of linear conditions on N×N complex matrices.
fn matrix_solution_space(n: usize, conds: &[Cond]) -> Vec<CMat> {
    let unknowns = 2 * n * n;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    // Apply each condition to the elementary matrices to extract its rows.
    let mut cols: Vec<Vec<Rat>> = Vec::new();
    for p in 0..unknowns {
        let mut flat = vec![Rat::zero(); unknowns];
        flat[p] = Rat::one();
        let e = CMat::from_flat(n, &flat);
        let mut out = Vec::new();
        for cond in conds {
            out.extend(cond(&e));
        }
        cols.push(out);
    }
    let nrows = cols[0].len();
    for r in 0..nrows {
        let row: Vec<Rat> = cols.iter().map(|c| c[r].clone()).collect();
        if row.iter().any(|v| !v.is_zero()) {
            rows.push(row);
        }
    }
    let ker = if rows.is_empty() {
        Mat::identity(unknowns)
    } else {
        Mat::from_rows(rows).kernel()
    };
    (0..ker.cols())
        .map(|j| CMat::from_flat(n, &ker.col(j)))
        .collect()
}

/// Subspace of `g` (in basis coordinates) cut out by extra linear conditions.
fn subspace_by_conditions(basis: &[CMat], conds: &[Cond]) -> Subspace {
    let dim = basis.len();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let cols: Vec<Vec<Rat>> = basis
        .iter()
        .map(|b| {
            let mut out = Vec::new();
            for cond in conds {
                out.extend(cond(b));
            }
            out
        })
        .collect();
    let nrows = cols[0].len();
    for r in 0..nrows {
        let row: Vec<Rat> = cols.iter().map(|c| c[r].clone()).collect();
        if row.iter().any(|v| !v.is_zero()) {
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Subspace::full(dim);
    }
    Subspace::from_cols(dim, &Mat::from_rows(rows).kernel())
}

/// Quasi-split symmetric form of signature (p, q): antidiagonal 1s pairing the
/// first and last q coordinates, identity on the middle block.
fn quasi_split_form(p: usize, q: usize) -> Mat<Rat> {
    let n = p + q;
    let mut f = Mat::zero(n, n);
    for i in 0..q {
        f.set(i, n - 1 - i, Rat::one());
        f.set(n - 1 - i, i, Rat::one());
    }
    for j in q..n - q {
        f.set(j, j, Rat::one());
    }
    f
}

/// Split-adapted symplectic form on ℝ^{2n}: antidiagonal +1 (top half), -1.
fn split_symplectic_form(n2: usize) -> Mat<Rat> {
    let mut f = Mat::zero(n2, n2);
    for i in 0..n2 / 2 {
        f.set(i, n2 - 1 - i, Rat::one());
    }
    for i in n2 / 2..n2 {
        f.set(i, n2 - 1 - i, -Rat::one());
    }
    f
}

pub fn family_label(family: Family, p: usize, q: usize) -> String {
    match family {
        Family::Sl => format!("sl({p},R)"),
        Family::Su => format!("su({p},{q})"),
        Family::So => format!("so({p},{q})"),
        Family::Sp => format!("sp({p},R)"),
    }
}

/// Expected dimension of the family, used for the range check and verified
/// against the computed basis.
fn expected_dim(family: Family, p: usize, q: usize) -> usize {
    match family {
        Family::Sl => p * p - 1,
        Family::Su => {
            let n = p + q;
            n * n - 1
        }
        Family::So => {
            let n = p + q;
            n * (n - 1) / 2
        }
        Family::Sp => p / 2 * (p + 1),
    }
}

/// Build a classical entry. For `Sl` and `Sp`, `p` is the matrix size and `q`
/// is ignored; for `Su`/`So`, the signature is `(p, q)` with `p ≥ q ≥ 1`.
pub fn build_classical(family: Family, p: usize, q: usize) -> Result<CatalogEntry> {
    let (n, valid) = match family {
        Family::Sl => (p, p >= 2),
        Family::Su | Family::So => (p + q, p >= q && q >= 1 && p + q >= 2 && p >= 2),
        Family::Sp => (p, p >= 2 && p % 2 == 0),
    };
    if !valid {
        return Err(Error::Unsupported(format!(
            "unsupported parameters for {}",
            family_label(family, p, q)
        )));
    }
    let dim_expected = expected_dim(family, p, q);
    if dim_expected > 50 {
        return Err(Error::Unsupported(format!(
            "dim {} exceeds the catalog bound of 50",
            dim_expected
        )));
    }

    let conds: Vec<Cond> = match family {
        Family::Sl => vec![real_part_vanishes_im(n), traceless()],
        Family::Su => vec![hermitian_form_cond(quasi_split_form(p, q)), traceless()],
        Family::So => vec![
            real_part_vanishes_im(n),
            bilinear_form_cond(quasi_split_form(p, q)),
        ],
        Family::Sp => vec![
            real_part_vanishes_im(n),
            bilinear_form_cond(split_symplectic_form(n)),
        ],
    };
    let matrices = matrix_solution_space(n, &conds);
    if matrices.len() != dim_expected {
        return Err(Error::Internal(format!(
            "{}: computed dim {} ≠ expected {}",
            family_label(family, p, q),
            matrices.len(),
            dim_expected
        )));
    }
    let dim = matrices.len();

    // Structure constants in the computed basis.
    let flat_basis = Mat::from_cols(matrices.iter().map(CMat::flatten).collect());
    let mut table = vec![vec![vec![Rat::zero(); dim]; dim]; dim];
    for i in 0..dim {
        for j in i + 1..dim {
            let comm = matrices[i].commutator(&matrices[j]);
            let coords = flat_basis.solve(&comm.flatten()).ok_or_else(|| {
                Error::Internal("commutator left the matrix algebra".into())
            })?;
            for t in 0..dim {
                table[i][j][t] = coords[t].clone();
                table[j][i][t] = -coords[t].clone();
            }
        }
    }
    let names = (1..=dim).map(|i| format!("g{i}")).collect();
    let g = LieAlgebra::from_table(names, table)?;
    g.check_valid()?;

    let k = subspace_by_conditions(&matrices, &[antihermitian_cond()]);
    let a = subspace_by_conditions(&matrices, &[real_diagonal_cond()]);
    let n_sub = subspace_by_conditions(&matrices, &[strict_upper_cond()]);
    let mut m_conds: Vec<Cond> = vec![antihermitian_cond()];
    for v in a.basis_vectors() {
        let mut mat = CMat::zero(n);
        for (c, b) in v.iter().zip(&matrices) {
            if !c.is_zero() {
                mat = mat.sub(&CMat {
                    re: b.re.scale(&-c.clone()),
                    im: b.im.scale(&-c.clone()),
                });
            }
        }
        m_conds.push(commutes_with(mat));
    }
    let m = subspace_by_conditions(&matrices, &m_conds);
    let iwasawa = a.sum(&n_sub);

    let entry = CatalogEntry {
        label: family_label(family, p, q),
        g,
        matrices,
        matrix_size: n,
        k,
        a,
        n: n_sub,
        m,
        iwasawa,
    };
    entry.verify()?;
    Ok(entry)
}

impl CatalogEntry {
    /// Exact verification of all entry invariants.
    pub fn verify(&self) -> Result<()> {
        let dim = self.g.dim();
        let fail = |msg: String| Err(Error::Internal(format!("{}: {}", self.label, msg)));
        if self.k.dim() + self.a.dim() + self.n.dim() != dim
            || self.k.sum(&self.a).sum(&self.n).dim() != dim
        {
            return fail("g ≠ k ⊕ a ⊕ n".into());
        }
        // a abelian.
        if !self.g.bracket_span(&self.a, &self.a).is_zero() {
            return fail("[a,a] ≠ 0".into());
        }
        // s is a subalgebra and n is its nilradical.
        let (s_alg, a_in_s, n_in_s) = self.iwasawa_algebra()?;
        let (nilrad, _) = s_alg.nilradical()?;
        if nilrad != n_in_s {
            return fail("n is not the nilradical of a ⊕ n".into());
        }
        let _ = a_in_s;
        // m centralizes a and sits in k.
        if !self.k.contains(&self.m) {
            return fail("m ⊄ k".into());
        }
        if !self.g.bracket_span(&self.m, &self.a).is_zero() {
            return fail("[m,a] ≠ 0".into());
        }
        // Killing form: nondegenerate with Cartan-decomposition signature.
        let b = self.g.killing_form();
        let (pos, neg, zero) = b.signature();
        if zero != 0 || pos != self.a.dim() + self.n.dim() || neg != self.k.dim() {
            return fail(format!(
                "Killing signature ({pos},{neg},{zero}) does not match (dim s, dim k, 0)"
            ));
        }
        Ok(())
    }

    /// Standalone copy of `s = a ⊕ n` with its own basis, together with the
    /// images of `a` and `n` in the new coordinates.
    pub fn iwasawa_algebra(&self) -> Result<(LieAlgebra, Subspace, Subspace)> {
        let s_alg = self.g.restrict_to(&self.iwasawa, "s")?;
        let d = self.iwasawa.dim();
        let a_coords: Vec<Vec<Rat>> = self
            .a
            .basis_vectors()
            .into_iter()
            .map(|v| {
                self.iwasawa
                    .coords_of(&v)
                    .expect("a lies inside the Iwasawa subalgebra")
            })
            .collect();
        let n_coords: Vec<Vec<Rat>> = self
            .n
            .basis_vectors()
            .into_iter()
            .map(|v| {
                self.iwasawa
                    .coords_of(&v)
                    .expect("n lies inside the Iwasawa subalgebra")
            })
            .collect();
        Ok((
            s_alg,
            Subspace::new(d, a_coords),
            Subspace::new(d, n_coords),
        ))
    }

    /// The published Satake diagram for this entry's label.
    pub fn expected_satake(&self) -> Result<SatakeDiagram> {
        expected_satake(&self.label)
    }

    /// Dimension of `Z_k(a)`, the independent ground truth for Lemma-1 checks.
    pub fn m_dim(&self) -> usize {
        self.m.dim()
    }
}

/// The seven catalog labels used throughout the tests (all of dim ≤ 24,
/// except su(3,1) at dim 15 which is; all within the acceptance set).
pub fn default_labels() -> Vec<&'static str> {
    vec![
        "sl(2,R)",
        "sl(3,R)",
        "su(2,1)",
        "su(3,1)",
        "so(3,1)",
        "so(4,1)",
        "sp(4,R)",
    ]
}

/// Build an entry from its label, e.g. `"su(2,1)"`.
pub fn entry(label: &str) -> Result<CatalogEntry> {
    let parse = || -> Option<(Family, usize, usize)> {
        let open = label.find('(')?;
        let close = label.find(')')?;
        let fam = &label[..open];
        let args: Vec<&str> = label[open + 1..close].split(',').collect();
        match (fam, args.as_slice()) {
            ("sl", [n, "R"]) => Some((Family::Sl, n.parse().ok()?, 0)),
            ("sp", [n, "R"]) => Some((Family::Sp, n.parse().ok()?, 0)),
            ("su", [p, q]) => Some((Family::Su, p.parse().ok()?, q.parse().ok()?)),
            ("so", [p, q]) => Some((Family::So, p.parse().ok()?, q.parse().ok()?)),
            _ => None,
        }
    };
    let (family, p, q) =
        parse().ok_or_else(|| Error::Format(format!("unrecognized catalog label '{label}'")))?;
    build_classical(family, p, q)
}

/// Heisenberg algebra h₃ with `[X,Y] = Z`.
pub fn heisenberg() -> LieAlgebra {
    LieAlgebra::from_brackets(
        vec!["X".into(), "Y".into(), "Z".into()],
        &[(0, 1, vec![(2, rat_int(1))])],
    )
    .expect("h3 is well-formed")
}

/// `ℝ ⋉ ℝⁿ` with the ℝ factor acting by the identity: the Iwasawa subalgebra
/// of so(n+1, 1) and the Lie algebra of real hyperbolic (n+1)-space.
pub fn hyperbolic(n: usize) -> LieAlgebra {
    let mut names = vec!["A".to_string()];
    names.extend((1..=n).map(|i| format!("e{i}")));
    let brackets: Vec<(usize, usize, Vec<(usize, Rat)>)> =
        (1..=n).map(|i| (0, i, vec![(i, Rat::one())])).collect();
    LieAlgebra::from_brackets(names, &brackets).expect("hyperbolic algebra is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_entry() {
        let e = entry("sl(2,R)").unwrap();
        assert_eq!(e.g.dim(), 3);
        assert_eq!(e.k.dim(), 1);
        assert_eq!(e.a.dim(), 1);
        assert_eq!(e.n.dim(), 1);
        assert_eq!(e.m_dim(), 0);
        let (s, a, n) = e.iwasawa_algebra().unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.is_solvable() && !s.is_nilpotent());
        assert_eq!(a.dim(), 1);
        assert_eq!(n.dim(), 1);
    }

    #[test]
    fn su21_entry() {
        let e = entry("su(2,1)").unwrap();
        assert_eq!(e.g.dim(), 8);
        assert_eq!(e.k.dim(), 4);
        assert_eq!(e.a.dim(), 1);
        assert_eq!(e.n.dim(), 3);
        assert_eq!(e.m_dim(), 1);
        // Centralizer of a in g has dim 2 = a ⊕ m.
        let zg = e.g.centralizer(&e.a);
        assert_eq!(zg.dim(), 2);
        // The nilradical of s is h₃ (3-dimensional, 2-step).
        let (s, _, n_in_s) = e.iwasawa_algebra().unwrap();
        let nil = s.restrict_to(&n_in_s, "n").unwrap();
        assert_eq!(nil.dim(), 3);
        let lcs: Vec<usize> = nil.lower_central_series().iter().map(|x| x.dim()).collect();
        assert_eq!(lcs, vec![3, 1, 0]);
    }

    #[test]
    fn sl3_entry() {
        let e = entry("sl(3,R)").unwrap();
        assert_eq!(e.g.dim(), 8);
        assert_eq!(e.k.dim(), 3);
        assert_eq!(e.a.dim(), 2);
        assert_eq!(e.n.dim(), 3);
        assert_eq!(e.m_dim(), 0);
        let zg = e.g.centralizer(&e.a);
        assert_eq!(zg.dim(), 2);
    }

    #[test]
    fn so_entries() {
        let e = entry("so(3,1)").unwrap();
        assert_eq!(e.g.dim(), 6);
        assert_eq!((e.k.dim(), e.a.dim(), e.n.dim(), e.m_dim()), (3, 1, 2, 1));
        let e = entry("so(4,1)").unwrap();
        assert_eq!(e.g.dim(), 10);
        assert_eq!((e.k.dim(), e.a.dim(), e.n.dim(), e.m_dim()), (6, 1, 3, 3));
        // Iwasawa of so(4,1) is ℝ ⋉ ℝ³: abelian nilradical, identity action.
        let (s, _, n_in_s) = e.iwasawa_algebra().unwrap();
        assert_eq!(s.dim(), 4);
        let nil = s.restrict_to(&n_in_s, "n").unwrap();
        assert!(nil.is_abelian());
    }

    #[test]
    fn su31_and_sp4_entries() {
        let e = entry("su(3,1)").unwrap();
        assert_eq!(e.g.dim(), 15);
        assert_eq!((e.k.dim(), e.a.dim(), e.n.dim(), e.m_dim()), (9, 1, 5, 4));
        let e = entry("sp(4,R)").unwrap();
        assert_eq!(e.g.dim(), 10);
        assert_eq!((e.k.dim(), e.a.dim(), e.n.dim(), e.m_dim()), (4, 2, 4, 0));
    }

    #[test]
    fn ad_m_restricts_to_derivations_of_s() {
        // Lemma-1 statement cross-check: ad_g(m)|_s are derivations of s.
        for label in ["su(2,1)", "so(3,1)"] {
            let e = entry(label).unwrap();
            let (s_alg, _, _) = e.iwasawa_algebra().unwrap();
            for mv in e.m.basis_vectors() {
                let ad = e.g.ad(&mv);
                // Restrict ad(m) to s in s-coordinates.
                let sb = e.iwasawa.basis_matrix();
                let d = s_alg.dim();
                let mut restricted = Mat::zero(d, d);
                for (j, col) in e.iwasawa.basis_vectors().iter().enumerate() {
                    let img = ad.mul_vec(col);
                    let coords = e.iwasawa.coords_of(&img).expect("m normalizes s");
                    for i in 0..d {
                        restricted.set(i, j, coords[i].clone());
                    }
                }
                let _ = sb;
                assert!(s_alg.is_derivation(&restricted).unwrap());
            }
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(build_classical(Family::Sl, 1, 0).is_err());
        assert!(build_classical(Family::Su, 1, 2).is_err()); // needs p ≥ q
        assert!(build_classical(Family::Sp, 3, 0).is_err()); // odd size
        assert!(build_classical(Family::Sl, 30, 0).is_err()); // dim bound
        assert!(entry("xyz(2)").is_err());
    }

    #[test]
    fn elementary_builders() {
        assert!(heisenberg().is_nilpotent());
        let h = hyperbolic(3);
        assert_eq!(h.dim(), 4);
        assert!(h.is_solvable() && !h.is_nilpotent());
    }
}
