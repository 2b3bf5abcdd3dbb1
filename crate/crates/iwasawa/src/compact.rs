//! Recovery of the compact subalgebra `m = Z_k(a)` from an Iwasawa subalgebra:
//! the skew derivations of a converged Einstein metric, rationalized and
//! certified compact, and the exact semidirect product `g₀ = m ⋉ s`.

use crate::algebra::{is_semisimple_matrix, LieAlgebra, MatSpan};
use crate::deriv::{derivation_algebra, DerivationSpace};
use crate::einstein::{einstein_solve, MetricResult, SolveParams};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::numeric::NMat;
use crate::poly::{sturm_count, sturm_real_root_count, Poly};
use crate::scalar::{Rat, rat};
use num_traits::{One, Signed, Zero};

/// Compactness evidence for a space of derivations.
#[derive(Clone, Debug)]
pub struct CompactCertificate {
    /// Killing form of the span (as an abstract algebra) is negative definite
    /// on its derived subalgebra.
    pub killing_negdef_on_derived: bool,
    /// Killing radical equals the center.
    pub radical_is_center: bool,
    /// Every basis element is semisimple with purely imaginary spectrum.
    pub spectra_imaginary: bool,
    /// The basis was recovered exactly from the numeric kernel.
    pub rationalized: bool,
}

impl CompactCertificate {
    pub fn valid(&self) -> bool {
        self.killing_negdef_on_derived && self.radical_is_center && self.spectra_imaginary
    }
}

/// Outcome of the skew-derivation computation.
#[derive(Clone, Debug)]
pub struct SkewDerivations {
    /// Exact rationalized space (present when rationalization succeeded).
    pub space: Option<DerivationSpace>,
    /// Coefficients of the numeric kernel in the exact `Der(s)` basis.
    pub numeric_coefficients: Vec<Vec<f64>>,
    pub dim: usize,
    pub rationalized: bool,
}

/// Continued-fraction rationalization with a denominator bound.
pub fn rationalize_f64(x: f64, max_den: u64, tol: f64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    let target = x;
    let (mut p0, mut q0, mut p1, mut q1) = (1i128, 0i128, 0i128, 1i128);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > 9e17 {
            return None;
        }
        let ai = a as i128;
        let (p2, q2) = (ai * p0 + p1, ai * q0 + q1);
        if q2.unsigned_abs() > max_den as u128 {
            return None;
        }
        let approx = p2 as f64 / q2 as f64;
        if (approx - target).abs() <= tol * target.abs().max(1.0) {
            return Some(rat(p2 as i64, q2 as i64));
        }
        let frac = v - a;
        if frac.abs() < 1e-15 {
            return None;
        }
        (p1, q1, p0, q0) = (p0, q0, p2, q2);
        v = 1.0 / frac;
    }
    None
}

/// Derivations of `s` that are skew with respect to the numeric metric `g`:
/// the kernel of `D ↦ gD + Dᵀg` intersected with the exact `Der(s)` span,
/// then rationalized by continued fractions and re-verified exactly.
pub fn skew_derivations(s: &LieAlgebra, g: &NMat<f64>) -> Result<SkewDerivations> {
    let der = derivation_algebra(s)?;
    let n = s.dim();
    let _k = der.dim();
    if k == 0 {
        return Ok(SkewDerivations {
            space: Some(DerivationSpace {
                ambient_dim: n,
                basis: vec![],
            }),
            numeric_coefficients: vec![],
            dim: 0,
            rationalized: true,
        });
    }
    // Columns: vec(g·D_i + D_iᵀ·g).
    let cols: Vec<Vec<f64>> = der
        .basis
        .iter()
        .map(|d| {
            let df: NMat<f64> = NMat::from_rat_mat(d);
            let m = g.mul(&df).add(&df.transpose().mul(g));
            m.data
        })
        .collect();
    // Normal matrix and its small-eigenvalue space.
    let gram = NMat::from_fn(k, k, |i, j| {
        cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum::<f64>()
    });
    let (vals, vecs) = gram.jacobi_eigh(true);
    let vecs = vecs.expect("eigenvectors requested");
    let vmax = vals.iter().fold(0.0f64, |a, &b| a.max(b.abs())).max(1e-30);
    let kernel_idx: Vec<usize> = (0..k).filter(|&i| vals[i].abs() <= vmax * 1e-10).collect();
    let dim = kernel_idx.len();
    if dim == 0 {
        return Ok(SkewDerivations {
            space: Some(DerivationSpace {
                ambient_dim: n,
                basis: vec![],
            }),
            numeric_coefficients: vec![],
            dim: 0,
            rationalized: true,
        });
    }
    // Canonicalize the numeric kernel by row-reduction with magnitude pivots.
    let mut rows: Vec<Vec<f64>> = kernel_idx
        .iter()
        .map(|&i| (0..k).map(|r| vecs.at(r, i)).collect())
        .collect();
    numeric_rref(&mut rows);
    let numeric_coefficients = rows.clone();

    // Rationalize coefficients and re-verify exactly.
    let mut exact: Vec<Mat<Rat>> = Vec::new();
    let mut ok = true;
    'outer: for row in &rows {
        let mut coeffs = Vec::with_capacity(k);
        for &x in row {
            match rationalize_f64(x, 1_000_000, 1e-7) {
                Some(r) => coeffs.push(r),
                None => {
                    ok = false;
                    break 'outer;
                }
            }
        }
        exact.push(der.combine(&coeffs));
    }
    if ok {
        let space = DerivationSpace {
            ambient_dim: n,
            basis: exact,
        };
        // Combinations of exact derivations are derivations; closure under
        // commutator is the exact re-verification.
        if space.is_bracket_closed() {
            return Ok(SkewDerivations {
                space: Some(space),
                numeric_coefficients,
                dim,
                rationalized: true,
            });
        }
    }
    Ok(SkewDerivations {
        space: None,
        numeric_coefficients,
        dim,
        rationalized: false,
    })
}

fn numeric_rref(rows: &mut Vec<Vec<f64>>) {
    if rows.is_empty() {
        return;
    }
    let cols = rows[0].len();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let (piv, best) = (r..rows.len())
            .map(|i| (i, rows[i][c].abs()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if best < 1e-8 {
            continue;
        }
        rows.swap(r, piv);
        let d = rows[r][c];
        for x in rows[r].iter_mut() {
            *x /= d;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c].abs() > 0.0 {
                let f = rows[i][c];
                for j in 0..cols {
                    let upd = rows[r][j];
                    rows[i][j] -= f * upd;
                }
            }
        }
        r += 1;
    }
}

/// Exact compactness evidence for a commutator-closed space of derivations.
pub fn compactness_certificate(h: &DerivationSpace) -> Result<CompactCertificate> {
    if !h.is_bracket_closed() {
        return Err(Error::Validation(
            "compactness certificate: space is not commutator-closed".into(),
        ));
    }
    if h.dim() == 0 {
        return Ok(CompactCertificate {
            killing_negdef_on_derived: true,
            radical_is_center: true,
            spectra_imaginary: true,
            rationalized: true,
        });
    }
    // Abstract Lie structure on the span.
    let span = MatSpan::new(&h.basis);
    let k = h.dim();
    let mut table = vec![vec![vec![Rat::zero(); k]; k]; k];
    for i in 0..k {
        for j in 0..k {
            let comm = h.basis[i].commutator(&h.basis[j]);
            let coords = span
                .coords(&comm)
                .ok_or_else(|| Error::Internal("closure check passed but coords failed".into()))?;
            table[i][j] = coords;
        }
    }
    let names = (1..=k).map(|i| format!("h{i}")).collect();
    let alg = LieAlgebra::from_table(names, table)?;
    alg.check_valid()?;
    let killing = alg.killing_form();
    let derived = alg.bracket_span(&alg.full_space(), &alg.full_space());
    let restricted = killing.restrict(&derived);
    let (pos, neg, zero) = restricted.signature();
    let killing_negdef_on_derived = pos == 0 && zero == 0 && neg == derived.dim();
    let radical_is_center = killing.radical() == alg.center();
    let spectra_imaginary = h
        .basis
        .iter()
        .map(has_imaginary_semisimple_spectrum)
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);
    Ok(CompactCertificate {
        killing_negdef_on_derived,
        radical_is_center,
        spectra_imaginary,
        rationalized: true,
    })
}

/// Semisimple with purely imaginary eigenvalues, decided exactly: the
/// squarefree characteristic radical annihilates the matrix, and after
/// stripping zero roots the remaining factor is even with all real roots of
/// `q(y) = p(√y)` nonpositive (counted by Sturm chains).
fn has_imaginary_semisimple_spectrum(d: &Mat<Rat>) -> Result<bool> {
    if !is_semisimple_matrix(d)? {
        return Ok(false);
    }
    let p = Poly::new(d.charpoly());
    let mut work = p.clone();
    while !work.coeffs.is_empty() && work.coeffs[0].is_zero() {
        work = Poly::new(work.coeffs[1..].to_vec());
    }
    if work.degree() == 0 {
        return Ok(true); // nilpotent semisimple = zero matrix
    }
    if work
        .coeffs
        .iter()
        .enumerate()
        .any(|(i, c)| i % 2 == 1 && !c.is_zero())
    {
        return Ok(false); // odd terms ⇒ a root with nonzero real part
    }
    let q = Poly::new(work.coeffs.iter().step_by(2).cloned().collect());
    let q = q.squarefree_part();
    // All roots of q real and negative ⇔ eigenvalues ±i√(-y) purely imaginary.
    let real_roots = sturm_real_root_count(&q);
    if real_roots != q.degree() {
        return Ok(false);
    }
    // No roots in (0, ∞): Cauchy bound.
    let lead = q.lead();
    let mut bound = Rat::one();
    for c in &q.coeffs {
        let a = (c / &lead).abs();
        if a > bound {
            bound = a;
        }
    }
    bound = bound + Rat::one();
    Ok(sturm_count(&q, &Rat::zero(), &bound) == 0)
}

/// Result of the full Lemma-1 recovery.
#[derive(Clone, Debug)]
pub struct CompactRecovery {
    pub space: DerivationSpace,
    pub certificate: CompactCertificate,
    /// Dimensions found per seed (the conjugacy proxy requires them equal).
    pub seed_dims: Vec<usize>,
    pub metric: MetricResult,
    /// How the exact basis was obtained: "continued-fraction" when the
    /// numeric kernel rationalized directly, "rational-form conjugate" when a
    /// conjugate representative was taken as the skew space of an exact SPD
    /// form of the same dimension.
    pub route: String,
}

/// Exact skew space `{D ∈ Der(s) : G₀D + DᵀG₀ = 0}` for a rational form G₀.
fn exact_skew_space(der: &DerivationSpace, g0: &Mat<Rat>) -> DerivationSpace {
    let n = der.ambient_dim;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let skews: Vec<Mat<Rat>> = der
        .basis
        .iter()
        .map(|d| g0.mul(d).add(&d.transpose().mul(g0)))
        .collect();
    for r in 0..n {
        for c in 0..n {
            let row: Vec<Rat> = skews.iter().map(|m| m.at(r, c).clone()).collect();
            if row.iter().any(|v| !v.is_zero()) {
                rows.push(row);
            }
        }
    }
    let basis = if rows.is_empty() {
        der.basis.clone()
    } else {
        let ker = Mat::from_rows(rows).kernel();
        (0..ker.cols()).map(|j| der.combine(&ker.col(j))).collect()
    };
    DerivationSpace {
        ambient_dim: n,
        basis,
    }
}

fn is_spd_exact(m: &Mat<Rat>) -> bool {
    if m != &m.transpose() {
        return false;
    }
    // Leading principal minors all positive.
    for k in 1..=m.rows() {
        let sub = Mat::from_fn(k, k, |i, j| m.at(i, j).clone());
        if !sub.det().is_positive() {
            return false;
        }
    }
    true
}

/// Candidate exact SPD forms to realize a conjugate representative of the
/// maximal compact subalgebra: the identity in the input basis, then
/// rationalizations of the converged metric (diagonal, then full).
fn rational_form_candidates(g: &NMat<f64>) -> Vec<Mat<Rat>> {
    let n = g.n_rows;
    let mut out = vec![Mat::identity(n)];
    let diag: Option<Vec<Rat>> = (0..n)
        .map(|i| rationalize_f64(g.at(i, i), 1000, 1e-6))
        .collect();
    if let Some(d) = diag {
        let m = Mat::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { Rat::zero() });
        if is_spd_exact(&m) && !out.contains(&m) {
            out.push(m);
        }
    }
    let full: Option<Vec<Rat>> = g
        .data
        .iter()
        .map(|&x| rationalize_f64(x, 1_000_000, 1e-6))
        .collect();
    if let Some(f) = full {
        let m = Mat::from_fn(n, n, |i, j| f[i * n + j].clone());
        if is_spd_exact(&m) && !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

/// Maximal compact subalgebra of `Der(s)` through the Einstein metric route:
/// solve for the metric from each seed and intersect `Der(s)` with its
/// isometry skew condition. Equality of the dimension across seeds is the
/// maximality evidence.
///
/// The exact output basis comes from continued-fraction rationalization of
/// the numeric kernel when that verifies; otherwise a conjugate
/// representative is returned: the exact skew space of a rational SPD form
/// whose dimension matches the numeric one (all maximal compact subalgebras
/// are conjugate, and matching the maximal dimension certifies maximality).
pub fn maximal_compact_derivations(
    s: &LieAlgebra,
    seeds: &[u64],
    params: &SolveParams,
) -> Result<CompactRecovery> {
    if seeds.is_empty() {
        return Err(Error::Unsupported("at least one seed is required".into()));
    }
    let mut first: Option<(SkewDerivations, MetricResult)> = None;
    let mut seed_dims = Vec::new();
    for &seed in seeds {
        let metric = einstein_solve(s, seed, params)?;
        if !metric.converged {
            return Err(Error::NonConvergence(format!(
                "Einstein solver did not converge for seed {seed}: residual {:.3e}",
                metric.residual
            )));
        }
        let g = NMat::from_fn(s.dim(), s.dim(), |i, j| metric.metric[i][j]);
        let skew = skew_derivations(s, &g)?;
        seed_dims.push(skew.dim);
        if first.is_none() {
            first = Some((skew, metric));
        }
    }
    if seed_dims.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::Internal(format!(
            "maximal compact dimension differs across seeds: {seed_dims:?}"
        )));
    }
    let (skew, metric) = first.expect("at least one seed ran");
    let target_dim = skew.dim;

    // Route 1: the numeric kernel rationalized directly.
    if let Some(space) = skew.space.clone() {
        let mut certificate = compactness_certificate(&space)?;
        certificate.rationalized = true;
        if certificate.valid() {
            return Ok(CompactRecovery {
                space,
                certificate,
                seed_dims,
                metric,
                route: "continued-fraction".into(),
            });
        }
    }

    // Route 2: conjugate representative via an exact SPD form.
    let der = derivation_algebra(s)?;
    let g = NMat::from_fn(s.dim(), s.dim(), |i, j| metric.metric[i][j]);
    for g0 in rational_form_candidates(&g) {
        let space = exact_skew_space(&der, &g0);
        if space.dim() != target_dim {
            continue;
        }
        let mut certificate = compactness_certificate(&space)?;
        certificate.rationalized = true;
        if certificate.valid() {
            return Ok(CompactRecovery {
                space,
                certificate,
                seed_dims,
                metric,
                route: "rational-form conjugate".into(),
            });
        }
    }
    Err(Error::Unsupported(format!(
        "could not realize an exact maximal compact subalgebra of dimension {target_dim}; \
         numeric kernel did not rationalize and no rational SPD form matched"
    )))
}

/// `g₀ = m ⋉ s` with exact structure constants (Jacobi re-validated inside).
pub fn build_g_geq0(s: &LieAlgebra, m: &DerivationSpace) -> Result<LieAlgebra> {
    LieAlgebra::semidirect_product(&m.basis, s)
}

/// The image of `ad_g(m)` restricted to `s`, as exact derivations of the
/// standalone Iwasawa algebra; ground truth for Lemma-1 cross-checks.
pub fn catalog_m_action(entry: &crate::catalog::CatalogEntry) -> Result<DerivationSpace> {
    let (s_alg, _, _) = entry.iwasawa_algebra()?;
    let d = s_alg.dim();
    let mut basis = Vec::new();
    for mv in entry.m.basis_vectors() {
        let ad = entry.g.ad(&mv);
        let mut restricted = Mat::zero(d, d);
        for (j, col) in entry.iwasawa.basis_vectors().iter().enumerate() {
            let img = ad.mul_vec(col);
            let coords = entry
                .iwasawa
                .coords_of(&img)
                .ok_or_else(|| Error::Internal("m does not normalize s".into()))?;
            for i in 0..d {
                restricted.set(i, j, coords[i].clone());
            }
        }
        if !s_alg.is_derivation(&restricted)? {
            return Err(Error::Internal("ad(m)|s is not a derivation of s".into()));
        }
        basis.push(restricted);
    }
    Ok(DerivationSpace {
        ambient_dim: d,
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::test_algebras::iwasawa_sl2;
    use crate::catalog::{self, hyperbolic};
    use crate::scalar::rat_int;

    #[test]
    fn rationalize_small_fractions() {
        assert_eq!(rationalize_f64(0.5, 100, 1e-9), Some(rat(1, 2)));
        assert_eq!(rationalize_f64(-2.0 / 3.0, 100, 1e-9), Some(rat(-2, 3)));
        assert_eq!(rationalize_f64(0.0, 100, 1e-9), Some(rat_int(0)));
        // √2 has no small-denominator representation at this tolerance.
        assert_eq!(rationalize_f64(2f64.sqrt(), 1_000_000, 1e-12), None);
    }

    #[test]
    fn certificate_examples() {
        // so(2) span: valid.
        let rot = Mat::from_rows(vec![
            vec![rat_int(0), rat_int(-1)],
            vec![rat_int(1), rat_int(0)],
        ]);
        let h = DerivationSpace {
            ambient_dim: 2,
            basis: vec![rot],
        };
        let cert = compactness_certificate(&h).unwrap();
        assert!(cert.valid());

        // A single nilpotent derivation: invalid (non-semisimple).
        let nil = Mat::from_rows(vec![
            vec![rat_int(0), rat_int(1)],
            vec![rat_int(0), rat_int(0)],
        ]);
        let h = DerivationSpace {
            ambient_dim: 2,
            basis: vec![nil],
        };
        assert!(!compactness_certificate(&h).unwrap().valid());

        // diag(1,1,2) on h₃: invalid (real nonzero spectrum).
        let d = Mat::from_rows(vec![
            vec![rat_int(1), rat_int(0), rat_int(0)],
            vec![rat_int(0), rat_int(1), rat_int(0)],
            vec![rat_int(0), rat_int(0), rat_int(2)],
        ]);
        let h = DerivationSpace {
            ambient_dim: 3,
            basis: vec![d],
        };
        assert!(!compactness_certificate(&h).unwrap().valid());

        // so(3): valid nonabelian case.
        let so3: Vec<Mat<Rat>> = (0..3)
            .map(|k| {
                let mut m = Mat::zero(3, 3);
                let (i, j) = [(1, 2), (2, 0), (0, 1)][k];
                m.set(i, j, rat_int(-1));
                m.set(j, i, rat_int(1));
                m
            })
            .collect();
        let h = DerivationSpace {
            ambient_dim: 3,
            basis: so3,
        };
        let cert = compactness_certificate(&h).unwrap();
        assert!(cert.valid());
    }

    #[test]
    fn skew_derivations_split_case() {
        // Iwasawa of sl(2,R): m = 0.
        let l = iwasawa_sl2();
        let res = einstein_solve(&l, 1, &SolveParams::default()).unwrap();
        let g = NMat::from_fn(2, 2, |i, j| res.metric[i][j]);
        let skew = skew_derivations(&l, &g).unwrap();
        assert_eq!(skew.dim, 0);
        assert!(skew.rationalized);
    }

    #[test]
    fn skew_derivations_hyperbolic() {
        // ℝ⋉ℝⁿ: skew derivations of the converged metric form so(n). The
        // numeric dimension is exact; direct rationalization may or may not
        // apply depending on where the seed landed in the automorphism orbit.
        for n in 2..=3usize {
            let l = hyperbolic(n);
            let res = einstein_solve(&l, 2, &SolveParams::default()).unwrap();
            let g = NMat::from_fn(n + 1, n + 1, |i, j| res.metric[i][j]);
            let skew = skew_derivations(&l, &g).unwrap();
            assert_eq!(skew.dim, n * (n - 1) / 2, "n = {n}");
        }
    }

    #[test]
    fn recovery_hyperbolic_exact() {
        let l = hyperbolic(2);
        let rec = maximal_compact_derivations(&l, &[1, 2], &SolveParams::default()).unwrap();
        assert_eq!(rec.space.dim(), 1);
        assert!(rec.certificate.valid());
        // so(3,1) case: m ⋉ s has dim 4 and validates.
        let g0 = build_g_geq0(&l, &rec.space).unwrap();
        assert_eq!(g0.dim(), 4);
        assert!(g0.validate().ok());
    }

    #[test]
    fn recovery_matches_catalog_su21() {
        let entry = catalog::entry("su(2,1)").unwrap();
        let (s, _, _) = entry.iwasawa_algebra().unwrap();
        let rec =
            maximal_compact_derivations(&s, &[1, 2], &SolveParams::default()).unwrap();
        assert_eq!(rec.space.dim(), entry.m_dim());
        assert!(rec.certificate.valid(), "route {}: {:?}", rec.route, rec.certificate);
        assert_eq!(rec.seed_dims, vec![1, 1]);
        // g₀ = m ⋉ s has dim 5 and validates.
        let g0 = build_g_geq0(&s, &rec.space).unwrap();
        assert_eq!(g0.dim(), 5);
        assert!(g0.validate().ok());
    }

    #[test]
    fn build_g0_trivial_m() {
        let l = iwasawa_sl2();
        let empty = DerivationSpace {
            ambient_dim: 2,
            basis: vec![],
        };
        let g0 = build_g_geq0(&l, &empty).unwrap();
        assert_eq!(g0.dim(), 2);
    }

    #[test]
    fn catalog_m_action_derives() {
        for label in ["su(2,1)", "so(4,1)"] {
            let entry = catalog::entry(label).unwrap();
            let act = catalog_m_action(&entry).unwrap();
            assert_eq!(act.dim(), entry.m_dim());
            assert!(act.is_bracket_closed());
            let cert = compactness_certificate(&act).unwrap();
            assert!(cert.valid(), "{label}: {cert:?}");
        }
    }
}
