//! Restricted-root decompositions, split torus recovery, Cartan subalgebras,
//! complex root systems over ℚ(i), and the Cartan matrix from the Borel
//! Killing form.

use crate::algebra::{rational_eigenvalues_semisimple, LieAlgebra};
use crate::complex::{complexify, real_vec, ComplexAlgebra, CSpan};
use crate::dynkin::{classify_cartan_matrix, CartanMatrixData};
use crate::error::{Error, Result};
use crate::linalg::{Mat, Span, Subspace};
use crate::poly::{rational_roots, Poly};
use crate::scalar::{rat_sqrt, Field, GaussRat, Rat};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Restricted-root decomposition of an algebra under an exact split torus.
#[derive(Clone, Debug)]
pub struct RestrictedRootDatum {
    pub torus: Subspace,
    /// Nonzero root functionals as values on the torus basis.
    pub roots: Vec<Vec<Rat>>,
    pub spaces: Vec<Subspace>,
    /// Centralizer of the torus (the zero-functional space).
    pub zero_space: Subspace,
    /// Indices into `roots` that are positive in the lexicographic order.
    pub positives: Vec<usize>,
}

impl RestrictedRootDatum {
    /// Σ dim g_λ + dim g₀ must equal the ambient dimension.
    pub fn dims_complete(&self, ambient: usize) -> bool {
        self.spaces.iter().map(Span::dim).sum::<usize>() + self.zero_space.dim() == ambient
    }

    /// `[g_λ, g_μ] ⊆ g_{λ+μ}` exactly on all pairs present (with `g_0` the
    /// zero space and absent targets meaning the bracket must vanish).
    pub fn grading_holds(&self, l: &LieAlgebra) -> bool {
        let lookup = |f: &Vec<Rat>| -> Option<&Subspace> {
            if f.iter().all(|x| x.is_zero()) {
                return Some(&self.zero_space);
            }
            self.roots
                .iter()
                .position(|r| r == f)
                .map(|i| &self.spaces[i])
        };
        let mut items: Vec<(Vec<Rat>, &Subspace)> = vec![(
            vec![Rat::zero(); self.torus.dim()],
            &self.zero_space,
        )];
        for (r, s) in self.roots.iter().zip(&self.spaces) {
            items.push((r.clone(), s));
        }
        for (f1, s1) in &items {
            for (f2, s2) in &items {
                let sum: Vec<Rat> = f1.iter().zip(f2).map(|(x, y)| x + y).collect();
                let br = l.bracket_span(s1, s2);
                if br.is_zero() {
                    continue;
                }
                match lookup(&sum) {
                    Some(target) => {
                        if !target.contains(&br) {
                            return false;
                        }
                    }
                    None => return false,
                }
            }
        }
        true
    }
}

/// All eigenvalue candidates of a rational matrix inside ℚ(i): its rational
/// eigenvalues plus purely imaginary pairs ±bi read off the even part of the
/// characteristic polynomial. Inputs whose spectrum needs a larger extension
/// are rejected.
fn gaussian_spectrum_candidates(m: &Mat<Rat>) -> Result<Vec<GaussRat>> {
    let p = Poly::new(m.charpoly());
    let mut work = p.clone();
    let mut out: Vec<GaussRat> = Vec::new();
    for (root, mult) in rational_roots(&p)? {
        out.push(GaussRat::from_rat(root.clone()));
        for _ in 0..mult {
            let lin = Poly::new(vec![-root.clone(), Rat::one()]);
            work = work.div_rem(&lin).0;
        }
    }
    if work.degree() == 0 {
        return Ok(out);
    }
    // Remainder must be even: r(x) = q(x²) with q splitting over ℚ with
    // negative roots that are exact squares.
    if work.coeffs.iter().enumerate().any(|(i, c)| i % 2 == 1 && !c.is_zero()) {
        return Err(Error::Unsupported(format!(
            "spectrum outside ℚ(i): characteristic factor {:?} is not even",
            work.coeffs
        )));
    }
    let q = Poly::new(work.coeffs.iter().step_by(2).cloned().collect());
    let qroots = rational_roots(&q)?;
    let found: usize = qroots.iter().map(|(_, m)| m).sum();
    if found != q.degree() {
        return Err(Error::Unsupported(format!(
            "spectrum outside ℚ(i): characteristic polynomial has an irrational factor of degree {}",
            2 * (q.degree() - found)
        )));
    }
    for (y, _) in qroots {
        if y.is_positive() {
            // x² = y with y > 0: real irrational pair unless y is a square,
            // in which case rational_roots above would have caught it.
            return Err(Error::Unsupported(
                "spectrum outside ℚ(i): real non-rational eigenvalue pair".into(),
            ));
        }
        let b = rat_sqrt(&(-y)).ok_or_else(|| {
            Error::Unsupported(
                "spectrum outside ℚ(i): imaginary eigenvalue with irrational b".into(),
            )
        })?;
        out.push(GaussRat::new(Rat::zero(), b.clone()));
        out.push(GaussRat::new(Rat::zero(), -b));
    }
    Ok(out)
}

/// Split an ambient space into joint eigenspaces of commuting operators given
/// candidate eigenvalue lists; fails loudly if any operator is not semisimple
/// on a piece (dimension sums are checked exactly).
fn joint_eigenspaces<F: Field>(
    ambient: usize,
    ops: &[(Mat<F>, Vec<F>)],
) -> Result<Vec<(Vec<F>, Span<F>)>> {
    let mut pieces: Vec<(Vec<F>, Span<F>)> = vec![(vec![], Span::full(ambient))];
    for (m, candidates) in ops {
        // Global eigenspaces once per candidate.
        let mut eigenspaces: Vec<(F, Span<F>)> = Vec::new();
        for lam in candidates {
            if eigenspaces.iter().any(|(l, _)| l == lam) {
                continue;
            }
            let shifted = m.sub(&Mat::identity(ambient).scale(lam));
            let ker = Span::from_cols(ambient, &shifted.kernel());
            if ker.dim() > 0 {
                eigenspaces.push((lam.clone(), ker));
            }
        }
        let mut next = Vec::new();
        for (tuple, w) in &pieces {
            let mut covered = 0;
            for (lam, es) in &eigenspaces {
                let inter = w.intersect(es);
                if inter.dim() > 0 {
                    covered += inter.dim();
                    let mut t = tuple.clone();
                    t.push(lam.clone());
                    next.push((t, inter));
                }
            }
            if covered != w.dim() {
                return Err(Error::Unsupported(format!(
                    "operator is not semisimple with the expected eigenvalues: \
                     covered {covered} of {} dimensions",
                    w.dim()
                )));
            }
        }
        pieces = next;
    }
    Ok(pieces)
}

/// Abelian, ad-semisimple complement to the nilradical of an Iwasawa-type
/// algebra, found by the generalized-nullspace descent for Cartan subalgebras
/// and verified exactly.
pub fn split_torus_of_iwasawa(s: &LieAlgebra) -> Result<Subspace> {
    if !s.is_solvable() {
        return Err(Error::Unsupported(
            "split torus: input is not solvable".into(),
        ));
    }
    let dim = s.dim();
    let (nil, _) = s.nilradical()?;
    if nil.dim() == dim {
        // Nilpotent algebra: the torus is trivial.
        return Ok(Subspace::zero(dim));
    }
    // Descend through generalized null spaces until the subalgebra is nilpotent.
    let mut current = s.full_space();
    loop {
        let sub = s.restrict_to(&current, "k")?;
        if sub.is_nilpotent() {
            break;
        }
        let d = sub.dim();
        let mut candidates: Vec<Vec<Rat>> = (0..d)
            .map(|i| crate::algebra::basis_vec(d, i))
            .collect();
        for i in 0..d {
            for j in i + 1..d {
                let mut v = crate::algebra::basis_vec(d, i);
                v[j] = Rat::one();
                candidates.push(v.clone());
                v[j] = -Rat::one();
                candidates.push(v);
            }
        }
        let x = candidates
            .into_iter()
            .find(|x| !crate::algebra::is_nilpotent_matrix(&sub.ad(x)))
            .ok_or_else(|| {
                Error::Unsupported(
                    "split torus: no non-nilpotent element found among basis combinations".into(),
                )
            })?;
        // Generalized null space of ad(x).
        let mut p = sub.ad(&x);
        for _ in 0..d.ilog2() + 1 {
            p = p.mul(&p);
        }
        let null = Span::from_cols(d, &p.kernel());
        if null.dim() == d {
            return Err(Error::Internal(
                "split torus: generalized null space did not shrink".into(),
            ));
        }
        // Map back to ambient coordinates.
        let vecs: Vec<Vec<Rat>> = null
            .basis_vectors()
            .iter()
            .map(|v| {
                let mut out = vec![Rat::zero(); dim];
                for (c, b) in v.iter().zip(current.basis_vectors()) {
                    for i in 0..dim {
                        out[i] = out[i].clone() + c * &b[i];
                    }
                }
                out
            })
            .collect();
        current = Subspace::new(dim, vecs);
    }
    // Verify: abelian complement to the nilradical acting rationally semisimply.
    if !s.bracket_span(&current, &current).is_zero() {
        return Err(Error::Unsupported(
            "split torus: descent produced a non-abelian Cartan subalgebra".into(),
        ));
    }
    if current.dim() + nil.dim() != dim || current.intersect(&nil).dim() != 0 {
        return Err(Error::Unsupported(
            "split torus: Cartan subalgebra is not a complement to the nilradical".into(),
        ));
    }
    for v in current.basis_vectors() {
        let ad = s.ad(&v);
        if rational_eigenvalues_semisimple(&ad)?.is_none() {
            let cp = ad.charpoly();
            return Err(Error::Unsupported(format!(
                "split torus: ad of a torus element is not rationally semisimple; \
                 characteristic polynomial coefficients {:?}",
                cp.iter().map(|c| c.to_string()).collect::<Vec<_>>()
            )));
        }
    }
    Ok(current)
}

/// Simultaneous eigenspace decomposition of `l` under an abelian,
/// ad-semisimple subspace with rational eigenvalues.
pub fn restricted_root_decomposition(
    l: &LieAlgebra,
    a: &Subspace,
) -> Result<RestrictedRootDatum> {
    if !l.bracket_span(a, a).is_zero() {
        return Err(Error::Unsupported(
            "restricted roots: the torus is not abelian".into(),
        ));
    }
    let dim = l.dim();
    let mut ops = Vec::new();
    for v in a.basis_vectors() {
        let m = l.ad(&v);
        let candidates: Vec<Rat> = rational_roots(&Poly::new(m.charpoly()))?
            .into_iter()
            .map(|(r, _)| r)
            .collect();
        ops.push((m, candidates));
    }
    let pieces = joint_eigenspaces(dim, &ops)?;
    let mut datum = RestrictedRootDatum {
        torus: a.clone(),
        roots: vec![],
        spaces: vec![],
        zero_space: Subspace::zero(dim),
        positives: vec![],
    };
    for (tuple, space) in pieces {
        if tuple.iter().all(|x| x.is_zero()) {
            datum.zero_space = space;
        } else {
            datum.roots.push(tuple);
            datum.spaces.push(space);
        }
    }
    if !datum.dims_complete(dim) {
        return Err(Error::Internal(
            "restricted root spaces do not fill the algebra".into(),
        ));
    }
    datum.positives = (0..datum.roots.len())
        .filter(|&i| lex_positive_rat(&datum.roots[i]))
        .collect();
    Ok(datum)
}

fn lex_positive_rat(v: &[Rat]) -> bool {
    for x in v {
        if !x.is_zero() {
            return x.is_positive();
        }
    }
    false
}

/// Maximal abelian subalgebra `t` of `m`, grown until `Z_m(t) = t`; returns
/// `(h, t)` with `h = a ⊕ t` (as a span) and `t` separately.
pub fn cartan_subalgebra(
    g: &LieAlgebra,
    m: &Subspace,
    a: &Subspace,
) -> Result<(Subspace, Subspace)> {
    let dim = g.dim();
    let mut t = Subspace::zero(dim);
    loop {
        let z = if t.is_zero() {
            m.clone()
        } else {
            g.centralizer(&t).intersect(m)
        };
        if z.dim() == t.dim() {
            break;
        }
        let next = z
            .basis_vectors()
            .into_iter()
            .find(|v| !t.contains_vec(v))
            .ok_or_else(|| Error::Internal("centralizer grew without new vectors".into()))?;
        t = t.sum(&Subspace::new(dim, vec![next]));
    }
    if !g.bracket_span(&t, &t).is_zero() {
        return Err(Error::Internal(
            "greedy torus in m is not abelian".into(),
        ));
    }
    Ok((a.sum(&t), t))
}

/// A root of the complexification as a functional on `h = a ⊕ t`: real
/// rational values on the `a` basis and purely imaginary values `i·b` on the
/// `t` basis.
#[derive(Clone, Debug, PartialEq)]
pub struct RootFunctional {
    pub a_part: Vec<Rat>,
    pub t_part: Vec<Rat>,
}

impl RootFunctional {
    /// Restriction ρ to the split torus.
    pub fn rho(&self) -> &[Rat] {
        &self.a_part
    }

    pub fn is_zero(&self) -> bool {
        self.a_part.iter().all(Zero::is_zero) && self.t_part.iter().all(Zero::is_zero)
    }

    pub fn negate(&self) -> RootFunctional {
        RootFunctional {
            a_part: self.a_part.iter().map(|x| -x.clone()).collect(),
            t_part: self.t_part.iter().map(|x| -x.clone()).collect(),
        }
    }

    pub fn add(&self, o: &RootFunctional) -> RootFunctional {
        RootFunctional {
            a_part: self.a_part.iter().zip(&o.a_part).map(|(x, y)| x + y).collect(),
            t_part: self.t_part.iter().zip(&o.t_part).map(|(x, y)| x + y).collect(),
        }
    }

    /// Values on the h basis as Gaussian rationals (a-part first).
    pub fn h_values(&self) -> Vec<GaussRat> {
        let mut v: Vec<GaussRat> = self
            .a_part
            .iter()
            .map(|x| GaussRat::from_rat(x.clone()))
            .collect();
        v.extend(
            self.t_part
                .iter()
                .map(|x| GaussRat::new(Rat::zero(), x.clone())),
        );
        v
    }
}

/// Positivity convention for complex roots.
#[derive(Clone, Debug, Default)]
pub enum RootOrdering {
    /// Lexicographic, a-coordinates ranked before t-coordinates. Enforces
    /// ρ(α) > 0 ⇒ α > 0 by construction.
    #[default]
    LexAFirst,
    /// Explicit linear functional (weights on the a-then-t coordinates); must
    /// vanish nowhere on the root set.
    Linear(Vec<Rat>),
}

impl RootOrdering {
    fn is_positive(&self, r: &RootFunctional) -> Result<bool> {
        match self {
            RootOrdering::LexAFirst => {
                for x in r.a_part.iter().chain(&r.t_part) {
                    if !x.is_zero() {
                        return Ok(x.is_positive());
                    }
                }
                Err(Error::Internal("zero functional is not a root".into()))
            }
            RootOrdering::Linear(w) => {
                let mut acc = Rat::zero();
                for (wi, xi) in w.iter().zip(r.a_part.iter().chain(&r.t_part)) {
                    acc = acc + wi * xi;
                }
                if acc.is_zero() {
                    return Err(Error::Unsupported(format!(
                        "degenerate ordering: functional vanishes on root {:?}|{:?}",
                        r.a_part.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                        r.t_part.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                    )));
                }
                Ok(acc.is_positive())
            }
        }
    }
}

/// Root system of the complexification with respect to `h = a ⊕ t`.
#[derive(Clone, Debug)]
pub struct ComplexRootDatum {
    pub algebra: ComplexAlgebra,
    /// h basis vectors in the algebra's coordinates: a vectors then t vectors.
    pub h_basis: Vec<Vec<GaussRat>>,
    pub a_dim: usize,
    pub t_dim: usize,
    pub cartan: CSpan,
    /// All roots, closed under negation; `spaces[i]` is present for roots
    /// whose root space lies in the decomposed algebra.
    pub roots: Vec<RootFunctional>,
    pub spaces: Vec<Option<CSpan>>,
    pub positives: Vec<usize>,
    pub simples: Vec<usize>,
}

impl ComplexRootDatum {
    pub fn simple_roots(&self) -> Vec<&RootFunctional> {
        self.simples.iter().map(|&i| &self.roots[i]).collect()
    }

    /// Span of h and all positive root spaces: the Borel subalgebra.
    pub fn borel_span(&self) -> CSpan {
        let n = self.algebra.dim();
        let mut vecs = self.h_basis.clone();
        for &i in &self.positives {
            if let Some(s) = &self.spaces[i] {
                vecs.extend(s.basis_vectors());
            }
        }
        Span::new(n, vecs)
    }
}

/// Decompose the complexification of `g0` under the Cartan subalgebra spanned
/// by `a` (split part) and `t` (compact part), with all eigenvalues required
/// to lie in ℚ(i).
pub fn complex_root_decomposition(
    g0: &LieAlgebra,
    a: &Subspace,
    t: &Subspace,
    ordering: &RootOrdering,
) -> Result<ComplexRootDatum> {
    let dim = g0.dim();
    let gc = complexify(g0);
    let a_vecs = a.basis_vectors();
    let t_vecs = t.basis_vectors();
    // Commutation of h.
    let h_span_real = a.sum(t);
    if !g0.bracket_span(&h_span_real, &h_span_real).is_zero() {
        return Err(Error::Unsupported(
            "complex roots: h = a ⊕ t is not abelian".into(),
        ));
    }

    let mut ops: Vec<(Mat<GaussRat>, Vec<GaussRat>)> = Vec::new();
    for v in a_vecs.iter().chain(t_vecs.iter()) {
        let m_real = g0.ad(v);
        let candidates = gaussian_spectrum_candidates(&m_real)?;
        ops.push((crate::complex::real_mat(&m_real), candidates));
    }
    let pieces = joint_eigenspaces(dim, &ops)?;

    let a_dim = a.dim();
    let t_dim = t.dim();
    let h_basis: Vec<Vec<GaussRat>> = a_vecs
        .iter()
        .chain(t_vecs.iter())
        .map(|v| real_vec(v))
        .collect();
    let cartan = Span::new(dim, h_basis.clone());

    let mut roots: Vec<RootFunctional> = Vec::new();
    let mut spaces: Vec<Option<CSpan>> = Vec::new();
    let mut zero_space: Option<CSpan> = None;
    for (tuple, space) in pieces {
        // Split the eigenvalue tuple into real a-values and imaginary t-values.
        let mut a_part = Vec::with_capacity(a_dim);
        let mut t_part = Vec::with_capacity(t_dim);
        for (idx, val) in tuple.iter().enumerate() {
            if idx < a_dim {
                if !val.im.is_zero() {
                    return Err(Error::Unsupported(
                        "complex roots: non-real eigenvalue for a split torus element".into(),
                    ));
                }
                a_part.push(val.re.clone());
            } else {
                if !val.re.is_zero() {
                    return Err(Error::Unsupported(
                        "complex roots: eigenvalue of a compact torus element is not purely imaginary"
                            .into(),
                    ));
                }
                t_part.push(val.im.clone());
            }
        }
        let f = RootFunctional { a_part, t_part };
        if f.is_zero() {
            zero_space = Some(space);
        } else {
            if space.dim() != 1 {
                return Err(Error::Unsupported(format!(
                    "complex root space for {:?}|{:?} has dimension {}; h is not a Cartan subalgebra",
                    f.a_part.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    f.t_part.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    space.dim()
                )));
            }
            roots.push(f);
            spaces.push(Some(space));
        }
    }
    let zero_space = zero_space.unwrap_or_else(|| Span::new(dim, vec![]));
    if zero_space != cartan {
        return Err(Error::Unsupported(format!(
            "centralizer of h has dimension {}, expected {}; h is not a Cartan subalgebra",
            zero_space.dim(),
            cartan.dim()
        )));
    }

    // Close the root set under negation (spaces of missing negatives are not
    // inside the decomposed algebra).
    let present = roots.clone();
    for r in &present {
        let neg = r.negate();
        if !roots.contains(&neg) {
            roots.push(neg);
            spaces.push(None);
        }
    }

    let mut positives = Vec::new();
    for (i, r) in roots.iter().enumerate() {
        if ordering.is_positive(r)? {
            positives.push(i);
        }
    }
    // Ordering postcondition: ρ(α) > 0 ⇒ α > 0.
    for (i, r) in roots.iter().enumerate() {
        if lex_positive_rat(&r.a_part) && !positives.contains(&i) {
            return Err(Error::Unsupported(
                "ordering violates the positivity extension ρ(α) > 0 ⇒ α > 0".into(),
            ));
        }
    }

    // Simple roots: positive roots which are not sums of two positive roots.
    let mut simples = Vec::new();
    for &i in &positives {
        let target = &roots[i];
        let mut decomposable = false;
        'outer: for &j in &positives {
            for &k in &positives {
                if roots[j].add(&roots[k]) == *target {
                    decomposable = true;
                    break 'outer;
                }
            }
        }
        if !decomposable {
            simples.push(i);
        }
    }

    Ok(ComplexRootDatum {
        algebra: gc,
        h_basis,
        a_dim,
        t_dim,
        cartan,
        roots,
        spaces,
        positives,
        simples,
    })
}

/// Restrict a bilinear form given on the algebra basis to a list of vectors.
pub fn restrict_form(b: &Mat<GaussRat>, vecs: &[Vec<GaussRat>]) -> Mat<GaussRat> {
    let k = vecs.len();
    Mat::from_fn(k, k, |i, j| {
        let mut acc = GaussRat::zero();
        let bv = b.mul_vec(&vecs[j]);
        for (x, y) in vecs[i].iter().zip(&bv) {
            acc = acc + x.clone() * y.clone();
        }
        acc
    })
}

/// Cartan matrix of the simple roots with respect to a nondegenerate form on
/// h: `A[i][j] = 2⟨α_i, α_j⟩ / ⟨α_j, α_j⟩` via duality. Entries must be real
/// integers and the classification must be of finite type.
pub fn cartan_matrix(
    datum: &ComplexRootDatum,
    form_on_h: &Mat<GaussRat>,
) -> Result<CartanMatrixData> {
    let simples = datum.simple_roots();
    let r = simples.len();
    // Dual vectors t_α: B t_α = α.
    let mut duals = Vec::with_capacity(r);
    for s in &simples {
        let alpha = s.h_values();
        let t = form_on_h.solve(&alpha).ok_or_else(|| {
            Error::Unsupported("Cartan form is degenerate on the coroot span".into())
        })?;
        duals.push(t);
    }
    let pair = |i: usize, j: usize| -> GaussRat {
        // ⟨α_i, α_j⟩ = α_i(t_{α_j})
        let alpha = simples[i].h_values();
        let mut acc = GaussRat::zero();
        for (x, y) in alpha.iter().zip(&duals[j]) {
            acc = acc + x.clone() * y.clone();
        }
        acc
    };
    let mut matrix = vec![vec![0i64; r]; r];
    for i in 0..r {
        for j in 0..r {
            let num = GaussRat::from_rat(Rat::from_integer(2.into())) * pair(i, j);
            let den = pair(j, j);
            if den.is_zero() {
                return Err(Error::Unsupported(format!(
                    "⟨α,α⟩ = 0 for simple root {j}"
                )));
            }
            let v = num / den;
            if !v.im.is_zero() || !v.re.denom().is_one() {
                return Err(Error::Internal(format!(
                    "non-integer Cartan entry {v} at ({i},{j})"
                )));
            }
            matrix[i][j] = v.re.numer().to_i64().ok_or_else(|| {
                Error::Internal("Cartan entry overflows i64".into())
            })?;
        }
    }
    classify_cartan_matrix(&matrix)
}

/// Report for the Borel Killing relation `B_b|ₕ = ½ · B_g|ₕ` (equivalently
/// `B_g = 2 B_b` on h).
#[derive(Clone, Debug)]
pub struct BorelKillingReport {
    pub holds: bool,
    pub violations: Vec<(usize, usize, String, String)>,
}

/// Verify the factor-2 relation between the Killing forms of the full complex
/// algebra and of its Borel subalgebra, restricted to the Cartan subalgebra.
pub fn borel_killing_relation_check(
    gc: &ComplexAlgebra,
    borel: &CSpan,
    h_vecs: &[Vec<GaussRat>],
) -> Result<BorelKillingReport> {
    let b_full = restrict_form(&gc.killing_matrix(), h_vecs);
    let b_b = borel_killing_on_h(gc, borel, h_vecs)?;
    let mut violations = Vec::new();
    for i in 0..h_vecs.len() {
        for j in 0..h_vecs.len() {
            let lhs = b_full.at(i, j).clone();
            let rhs = GaussRat::from_rat(Rat::from_integer(2.into())) * b_b.at(i, j).clone();
            if lhs != rhs {
                violations.push((i, j, lhs.to_string(), rhs.to_string()));
            }
        }
    }
    Ok(BorelKillingReport {
        holds: violations.is_empty(),
        violations,
    })
}

/// Killing form of the Borel subalgebra restricted to h (in h-vector order).
pub fn borel_killing_on_h(
    gc: &ComplexAlgebra,
    borel: &CSpan,
    h_vecs: &[Vec<GaussRat>],
) -> Result<Mat<GaussRat>> {
    let b_alg = gc.restrict_to(borel, "b")?;
    let kb = b_alg.killing_matrix();
    let h_in_b: Vec<Vec<GaussRat>> = h_vecs
        .iter()
        .map(|v| {
            borel
                .coords_of(v)
                .ok_or_else(|| Error::Internal("h does not lie in the Borel".into()))
        })
        .collect::<Result<_>>()?;
    Ok(restrict_form(&kb, &h_in_b))
}

/// The Cartan-matrix form in reconstruction mode, where the full algebra is
/// unavailable: twice the Borel Killing form on h stands in for `B_g|ₕ`.
pub fn cartan_form_from_borel(
    gc: &ComplexAlgebra,
    borel: &CSpan,
    h_vecs: &[Vec<GaussRat>],
) -> Result<Mat<GaussRat>> {
    Ok(borel_killing_on_h(gc, borel, h_vecs)?
        .scale(&GaussRat::from_rat(Rat::from_integer(2.into()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::test_algebras::{iwasawa_sl2, sl2};
    use crate::catalog;
    use crate::scalar::{rat, rat_int};

    #[test]
    fn split_torus_examples() {
        let t = split_torus_of_iwasawa(&catalog::hyperbolic(2)).unwrap();
        assert_eq!(t.dim(), 1);
        let t = split_torus_of_iwasawa(&iwasawa_sl2()).unwrap();
        assert_eq!(t.dim(), 1);
        // Nilpotent input: trivial torus.
        let t = split_torus_of_iwasawa(&catalog::heisenberg()).unwrap();
        assert_eq!(t.dim(), 0);
    }

    #[test]
    fn split_torus_catalog() {
        let (s, a_expected, _) = catalog::entry("sl(3,R)")
            .unwrap()
            .iwasawa_algebra()
            .unwrap();
        let t = split_torus_of_iwasawa(&s).unwrap();
        assert_eq!(t.dim(), 2);
        assert_eq!(t, a_expected);
        let (s, a_expected, _) = catalog::entry("su(2,1)")
            .unwrap()
            .iwasawa_algebra()
            .unwrap();
        let t = split_torus_of_iwasawa(&s).unwrap();
        assert_eq!(t.dim(), 1);
        assert_eq!(t, a_expected);
    }

    #[test]
    fn restricted_roots_sl2() {
        let l = sl2();
        let a = Subspace::new(3, vec![crate::algebra::basis_vec(3, 0)]);
        let d = restricted_root_decomposition(&l, &a).unwrap();
        assert_eq!(d.roots.len(), 2);
        let mut vals: Vec<Rat> = d.roots.iter().map(|r| r[0].clone()).collect();
        vals.sort();
        assert_eq!(vals, vec![rat_int(-2), rat_int(2)]);
        assert!(d.spaces.iter().all(|s| s.dim() == 1));
        assert_eq!(d.zero_space.dim(), 1);
        assert_eq!(d.positives.len(), 1);
        assert!(d.grading_holds(&l));
    }

    #[test]
    fn restricted_roots_su21() {
        let e = catalog::entry("su(2,1)").unwrap();
        let d = restricted_root_decomposition(&e.g, &e.a).unwrap();
        // Σ = {±λ, ±2λ} with dims 2, 2, 1, 1; g₀ has dim 2.
        assert_eq!(d.roots.len(), 4);
        let mut dims: Vec<usize> = d.spaces.iter().map(|s| s.dim()).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 1, 2, 2]);
        assert_eq!(d.zero_space.dim(), 2);
        assert!(d.dims_complete(8));
        assert!(d.grading_holds(&e.g));
    }

    #[test]
    fn restricted_roots_abelian() {
        let l = LieAlgebra::abelian(2);
        let a = l.full_space();
        let d = restricted_root_decomposition(&l, &a).unwrap();
        assert!(d.roots.is_empty());
        assert_eq!(d.zero_space.dim(), 2);
    }

    #[test]
    fn cartan_subalgebra_cases() {
        // m = 0: h = a.
        let l = iwasawa_sl2();
        let a = split_torus_of_iwasawa(&l).unwrap();
        let (h, t) = cartan_subalgebra(&l, &Subspace::zero(2), &a).unwrap();
        assert_eq!(t.dim(), 0);
        assert_eq!(h, a);
    }

    #[test]
    fn complex_roots_sl2() {
        let l = sl2();
        let a = Subspace::new(3, vec![crate::algebra::basis_vec(3, 0)]);
        let d =
            complex_root_decomposition(&l, &a, &Subspace::zero(3), &RootOrdering::LexAFirst)
                .unwrap();
        assert_eq!(d.roots.len(), 2);
        assert_eq!(d.positives.len(), 1);
        assert_eq!(d.simples.len(), 1);
        let cm = cartan_matrix(&d, &restrict_form(&d.algebra.killing_matrix(), &d.h_basis))
            .unwrap();
        assert_eq!(cm.dynkin_type, "A1");
    }

    #[test]
    fn complex_roots_sl3_and_killing_relation() {
        let e = catalog::entry("sl(3,R)").unwrap();
        let d = complex_root_decomposition(
            &e.g,
            &e.a,
            &Subspace::zero(8),
            &RootOrdering::LexAFirst,
        )
        .unwrap();
        assert_eq!(d.roots.len(), 6);
        assert_eq!(d.simples.len(), 2);
        let b_h = restrict_form(&d.algebra.killing_matrix(), &d.h_basis);
        let cm = cartan_matrix(&d, &b_h).unwrap();
        assert_eq!(cm.dynkin_type, "A2");
        assert_eq!(cm.matrix[0][0], 2);
        // Borel Killing relation, exact.
        let report =
            borel_killing_relation_check(&d.algebra, &d.borel_span(), &d.h_basis).unwrap();
        assert!(report.holds, "violations: {:?}", report.violations);
        // Reconstruction-mode form gives the same Cartan matrix.
        let form2 = cartan_form_from_borel(&d.algebra, &d.borel_span(), &d.h_basis).unwrap();
        let cm2 = cartan_matrix(&d, &form2).unwrap();
        assert_eq!(cm2.dynkin_type, "A2");
    }

    #[test]
    fn borel_killing_sl2_values() {
        // B_g(H,H) = 8 and B_b(H,H) = 4: the factor-2 relation.
        let l = sl2();
        let a = Subspace::new(3, vec![crate::algebra::basis_vec(3, 0)]);
        let d =
            complex_root_decomposition(&l, &a, &Subspace::zero(3), &RootOrdering::LexAFirst)
                .unwrap();
        let bg = restrict_form(&d.algebra.killing_matrix(), &d.h_basis);
        assert_eq!(bg.at(0, 0), &GaussRat::from_rat(rat_int(8)));
        let bb = borel_killing_on_h(&d.algebra, &d.borel_span(), &d.h_basis).unwrap();
        assert_eq!(bb.at(0, 0), &GaussRat::from_rat(rat_int(4)));
        let report =
            borel_killing_relation_check(&d.algebra, &d.borel_span(), &d.h_basis).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn gaussian_spectrum_of_rotation() {
        let rot = Mat::from_rows(vec![
            vec![rat_int(0), rat_int(-2)],
            vec![rat_int(2), rat_int(0)],
        ]);
        let cands = gaussian_spectrum_candidates(&rot).unwrap();
        assert!(cands.contains(&GaussRat::new(rat_int(0), rat_int(2))));
        assert!(cands.contains(&GaussRat::new(rat_int(0), rat_int(-2))));
        // Irrational rotation: rejected.
        let bad = Mat::from_rows(vec![
            vec![rat_int(0), rat_int(-2)],
            vec![rat_int(1), rat_int(0)],
        ]);
        assert!(gaussian_spectrum_candidates(&bad).is_err());
        let _ = rat(1, 2);
    }

    #[test]
    fn degenerate_linear_ordering_rejected() {
        let l = sl2();
        let a = Subspace::new(3, vec![crate::algebra::basis_vec(3, 0)]);
        let ord = RootOrdering::Linear(vec![Rat::zero()]);
        assert!(complex_root_decomposition(&l, &a, &Subspace::zero(3), &ord).is_err());
    }
}
