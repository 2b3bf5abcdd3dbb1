//! Univariate polynomials over an exact field, with rational root extraction
//! and Sturm counting over the rationals.

use crate::error::{Error, Result};
use crate::scalar::{Field, Int, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Polynomial with ascending coefficients; no trailing zeros.
#[derive(Clone, PartialEq, Debug)]
pub struct Poly<F: Field> {
    pub coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        if self.coeffs.is_empty() {
            0
        } else {
            self.coeffs.len() - 1
        }
    }

    pub fn lead(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn add(&self, o: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = vec![F::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = out[i].clone() + c.clone();
        }
        for (i, c) in o.coeffs.iter().enumerate() {
            out[i] = out[i].clone() + c.clone();
        }
        Poly::new(out)
    }

    pub fn neg(&self) -> Poly<F> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn sub(&self, o: &Poly<F>) -> Poly<F> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly<F>) -> Poly<F> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }

    /// Euclidean division: (quotient, remainder).
    pub fn div_rem(&self, d: &Poly<F>) -> (Poly<F>, Poly<F>) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut quo = vec![F::zero(); self.coeffs.len().saturating_sub(d.coeffs.len() - 1)];
        let dl = d.lead();
        while !rem.is_zero() && rem.degree() >= d.degree() && !(rem.degree() == 0 && d.degree() == 0 && false) {
            if rem.coeffs.len() < d.coeffs.len() {
                break;
            }
            let shift = rem.coeffs.len() - d.coeffs.len();
            let f = rem.lead() / dl.clone();
            quo[shift] = f.clone();
            let mut sub = vec![F::zero(); shift];
            sub.extend(d.coeffs.iter().map(|c| c.clone() * f.clone()));
            rem = rem.sub(&Poly::new(sub));
            if rem.coeffs.len() >= shift + d.coeffs.len() {
                // lead must have cancelled; defensive truncation not needed with exact arithmetic
                rem.coeffs.truncate(shift + d.coeffs.len() - 1);
                rem = Poly::new(rem.coeffs);
            }
        }
        (Poly::new(quo), rem)
    }

    pub fn derivative(&self) -> Poly<F> {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.clone() * F::from_int((i + 1) as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Poly<F> {
        if self.is_zero() {
            return Poly::zero();
        }
        let l = self.lead();
        Poly::new(self.coeffs.iter().map(|c| c.clone() / l.clone()).collect())
    }

    pub fn gcd(&self, o: &Poly<F>) -> Poly<F> {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn squarefree_part(&self) -> Poly<F> {
        if self.degree() == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.monic();
        }
        self.div_rem(&g).0.monic()
    }
}

fn divisors_within_bound(n: &Int) -> Result<Vec<Int>> {
    let mut n = n.abs();
    if n.is_zero() {
        return Err(Error::Internal("divisors of zero requested".into()));
    }
    let mut primes: Vec<(Int, u32)> = Vec::new();
    let push = |p: Int, primes: &mut Vec<(Int, u32)>| {
        if let Some(e) = primes.iter_mut().find(|(q, _)| *q == p) {
            e.1 += 1;
        } else {
            primes.push((p, 1));
        }
    };
    let mut d = BigInt::from(2u32);
    let bound = BigInt::from(1_000_000u64);
    while &d * &d <= n && d <= bound {
        while (&n % &d).is_zero() {
            n = &n / &d;
            push(d.clone(), &mut primes);
        }
        d += 1;
    }
    if !n.is_one() {
        // Residual factor: prime, or a semiprime of large primes. Including it
        // as a single candidate keeps candidate enumeration sound for primes;
        // a composite residual may hide divisors, which downstream dimension
        // checks report loudly as unsupported input.
        push(n.clone(), &mut primes);
    }
    let mut divs = vec![Int::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &divs {
            let mut pk = Int::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk = &pk * &p;
            }
        }
        next.sort();
        next.dedup();
        divs = next;
    }
    Ok(divs)
}

/// All rational roots of a rational polynomial, with multiplicities.
pub fn rational_roots(p: &Poly<Rat>) -> Result<Vec<(Rat, usize)>> {
    if p.is_zero() {
        return Err(Error::Internal("roots of the zero polynomial".into()));
    }
    let mut work = p.clone();
    let mut roots: Vec<(Rat, usize)> = Vec::new();
    // Strip x = 0 roots first.
    let mut zero_mult = 0;
    while !work.coeffs.is_empty() && work.coeffs[0].is_zero() {
        work = Poly::new(work.coeffs[1..].to_vec());
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rat::zero(), zero_mult));
    }
    if work.degree() == 0 {
        return Ok(roots);
    }
    // Clear denominators to a primitive integer polynomial.
    let mut den = Int::one();
    for c in &work.coeffs {
        den = den.lcm(c.denom());
    }
    let ints: Vec<Int> = work
        .coeffs
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    let a0 = ints[0].clone();
    let an = ints.last().unwrap().clone();
    let nums = divisors_within_bound(&a0)?;
    let dens = divisors_within_bound(&an)?;
    let mut candidates: Vec<Rat> = Vec::new();
    for nu in &nums {
        for de in &dens {
            let c = Rat::new(nu.clone(), de.clone());
            if !candidates.contains(&c) {
                candidates.push(c.clone());
                candidates.push(-c);
            }
        }
    }
    for cand in candidates {
        let mut mult = 0;
        while work.degree() >= 1 && work.eval(&cand).is_zero() {
            let lin = Poly::new(vec![-cand.clone(), Rat::one()]);
            work = work.div_rem(&lin).0;
            mult += 1;
        }
        if mult > 0 {
            roots.push((cand, mult));
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(roots)
}

/// True when the polynomial splits into linear factors over the rationals.
pub fn splits_over_q(p: &Poly<Rat>) -> Result<bool> {
    let roots = rational_roots(p)?;
    let total: usize = roots.iter().map(|(_, m)| m).sum();
    Ok(total == p.degree())
}

fn sign_changes(seq: &[Rat]) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .filter(|v| !v.is_zero())
        .map(|v| if v.is_positive() { 1 } else { -1 })
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Sturm chain of a squarefree rational polynomial.
fn sturm_chain(p: &Poly<Rat>) -> Vec<Poly<Rat>> {
    let mut chain = vec![p.clone(), p.derivative()];
    while !chain.last().unwrap().is_zero() {
        let n = chain.len();
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        chain.push(r.neg());
    }
    chain.pop();
    chain
}

/// Number of distinct real roots of a squarefree rational polynomial in (a, b].
pub fn sturm_count(p: &Poly<Rat>, a: &Rat, b: &Rat) -> usize {
    let chain = sturm_chain(p);
    let va: Vec<Rat> = chain.iter().map(|q| q.eval(a)).collect();
    let vb: Vec<Rat> = chain.iter().map(|q| q.eval(b)).collect();
    sign_changes(&va) - sign_changes(&vb)
}

/// Total number of distinct real roots of a squarefree rational polynomial.
pub fn sturm_real_root_count(p: &Poly<Rat>) -> usize {
    if p.degree() == 0 {
        return 0;
    }
    // Cauchy bound: all roots in |x| ≤ 1 + max |a_i / a_n|.
    let lead = p.lead();
    let mut bound = Rat::one();
    for c in &p.coeffs {
        let q = (c / &lead).abs();
        if q > bound {
            bound = q;
        }
    }
    bound = bound + Rat::one();
    sturm_count(p, &(-bound.clone()), &bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn p(coeffs: Vec<i64>) -> Poly<Rat> {
        Poly::new(coeffs.into_iter().map(rat_int).collect())
    }

    #[test]
    fn division_exact() {
        // (x² - 1) / (x - 1) = x + 1
        let (q, r) = p(vec![-1, 0, 1]).div_rem(&p(vec![-1, 1]));
        assert_eq!(q, p(vec![1, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn gcd_and_squarefree() {
        // (x-1)²(x+2)
        let f = p(vec![-1, 1]).mul(&p(vec![-1, 1])).mul(&p(vec![2, 1]));
        let sf = f.squarefree_part();
        assert_eq!(sf, p(vec![-1, 1]).mul(&p(vec![2, 1])).monic());
    }

    #[test]
    fn roots_with_multiplicity() {
        // x(x - 2/3)²(x + 5)
        let f = Poly::new(vec![rat_int(0), rat_int(1)])
            .mul(&Poly::new(vec![rat(-2, 3), rat_int(1)]))
            .mul(&Poly::new(vec![rat(-2, 3), rat_int(1)]))
            .mul(&p(vec![5, 1]));
        let roots = rational_roots(&f).unwrap();
        assert_eq!(
            roots,
            vec![
                (rat_int(-5), 1),
                (rat_int(0), 1),
                (rat(2, 3), 2),
            ]
        );
        assert!(splits_over_q(&f).unwrap());
        assert!(!splits_over_q(&p(vec![-2, 0, 1])).unwrap()); // x² - 2
    }

    #[test]
    fn sturm_counts() {
        // x² - 2 has two real roots, none rational
        assert_eq!(sturm_real_root_count(&p(vec![-2, 0, 1])), 2);
        // x² + 1 has none
        assert_eq!(sturm_real_root_count(&p(vec![1, 0, 1])), 0);
        // x³ - x: roots -1, 0, 1; two of them in (0-, 1]... count over (-2, 0]
        assert_eq!(sturm_count(&p(vec![0, -1, 0, 1]), &rat_int(-2), &rat_int(0)), 2);
    }
}
