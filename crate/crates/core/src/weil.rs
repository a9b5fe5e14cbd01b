//! Exact certification that the operator eigenvalues are sums of two
//! complex-conjugate `q`-Weil numbers: integer characteristic polynomials
//! from the integer-similar tridiagonal form, squarefree parts by primitive
//! pseudo-remainder sequences, and root counting by Sturm chains over the
//! rationals. The criterion: every root real, and every root `λ` with
//! `λ² ≤ 4q`.

use crate::error::{ArithError, Result};
use crate::operators::OperatorMatrix;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense integer polynomial, coefficients low-to-high, leading nonzero
/// (the zero polynomial is the empty vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    pub coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn from_i64(cs: &[i64]) -> Self {
        IntPolynomial {
            coeffs: trim(cs.iter().map(|&c| BigInt::from(c)).collect()),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map_or(false, |c| c.is_one())
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect();
        IntPolynomial {
            coeffs: trim(coeffs),
        }
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0f64;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + bigint_f64(c);
        }
        acc
    }
}

fn bigint_f64(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(f64::INFINITY)
}

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

fn content(p: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = num_integer::Integer::gcd(&g, c);
    }
    if g.is_zero() {
        BigInt::one()
    } else {
        g
    }
}

fn primitive(p: Vec<BigInt>) -> Vec<BigInt> {
    let p = trim(p);
    if p.is_empty() {
        return p;
    }
    let c = content(&p);
    p.into_iter().map(|x| x / &c).collect()
}

/// Pseudo-remainder of `a` by `b`, scaled by a positive multiplier: returns
/// `rem(m·a, b)` with `m = |lc(b)|^{deg a − deg b + 1}`.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r: Vec<BigInt> = a.to_vec();
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    let delta = a.len().saturating_sub(b.len()) as u32 + 1;
    let m = lb.abs().pow(delta);
    for x in r.iter_mut() {
        *x *= &m;
    }
    while r.len() >= b.len() {
        let lr = r.last().unwrap().clone();
        if lr.is_zero() {
            r.pop();
            continue;
        }
        let shift = r.len() - b.len();
        let coef = &lr / &lb; // exact by the pseudo-scaling
        debug_assert!((&coef * &lb) == lr);
        for i in 0..=db {
            let t = &b[i] * &coef;
            r[shift + i] -= t;
        }
        r = trim(r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Sturm chain of the squarefree-intended `p`: `p, p′, −rem, …` with each
/// element reduced to its primitive part (positive scaling only).
fn sturm_chain(p: &IntPolynomial) -> Vec<Vec<BigInt>> {
    let mut chain = Vec::new();
    let p0 = primitive(p.coeffs.clone());
    let p1 = primitive(p.derivative().coeffs);
    chain.push(p0);
    if p1.is_empty() {
        return chain;
    }
    chain.push(p1);
    loop {
        let a = &chain[chain.len() - 2];
        let b = &chain[chain.len() - 1];
        if b.len() <= 1 {
            break;
        }
        let mut r = pseudo_rem(a, b);
        if r.is_empty() {
            break;
        }
        for x in r.iter_mut() {
            *x = -x.clone();
        }
        chain.push(primitive(r));
    }
    chain
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Endpoint<'a> {
    NegInf,
    PosInf,
    At(&'a BigRational),
}

fn sign_at(p: &[BigInt], e: Endpoint) -> i8 {
    if p.is_empty() {
        return 0;
    }
    match e {
        Endpoint::PosInf => bigsign(p.last().unwrap()),
        Endpoint::NegInf => {
            let s = bigsign(p.last().unwrap());
            if (p.len() - 1) % 2 == 1 {
                -s
            } else {
                s
            }
        }
        Endpoint::At(x) => {
            let mut acc = BigRational::zero();
            for c in p.iter().rev() {
                acc = acc * x + BigRational::from_integer(c.clone());
            }
            if acc.is_zero() {
                0
            } else if acc.is_positive() {
                1
            } else {
                -1
            }
        }
    }
}

fn bigsign(n: &BigInt) -> i8 {
    if n.is_zero() {
        0
    } else if n.is_positive() {
        1
    } else {
        -1
    }
}

fn variations(chain: &[Vec<BigInt>], e: Endpoint) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in chain {
        let s = sign_at(p, e);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Squarefree part `p / gcd(p, p′)` (primitive, sign of leading coefficient
/// preserved from `p`).
pub fn squarefree_part(p: &IntPolynomial) -> IntPolynomial {
    if p.coeffs.len() <= 1 {
        return p.clone();
    }
    // primitive PRS for the gcd
    let mut a = primitive(p.coeffs.clone());
    let mut b = primitive(p.derivative().coeffs);
    while !b.is_empty() {
        let r = if a.len() >= b.len() {
            pseudo_rem(&a, &b)
        } else {
            a.clone()
        };
        a = b;
        b = primitive(r);
    }
    let mut g = a; // gcd up to sign: normalize leading coefficient positive
    if g.last().map_or(false, |c| c.is_negative()) {
        for c in g.iter_mut() {
            *c = -c.clone();
        }
    }
    if g.len() <= 1 {
        return IntPolynomial {
            coeffs: primitive(p.coeffs.clone()),
        };
    }
    // exact division over Q; quotient is integral by Gauss's lemma
    let q = rational_div_exact(&p.coeffs, &g);
    IntPolynomial { coeffs: primitive(q) }
}

fn rational_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r: Vec<BigRational> = a
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let lb = BigRational::from_integer(b.last().unwrap().clone());
    let mut q = alloc::vec![BigRational::zero(); a.len() - b.len() + 1];
    while r.len() >= b.len() {
        let lr = r.last().unwrap().clone();
        if lr.is_zero() {
            r.pop();
            continue;
        }
        let shift = r.len() - b.len();
        let coef = &lr / &lb;
        q[shift] = coef.clone();
        for (i, bc) in b.iter().enumerate() {
            let t = BigRational::from_integer(bc.clone()) * &coef;
            r[shift + i] -= t;
        }
        while r.last().map_or(false, |c| c.is_zero()) {
            r.pop();
        }
    }
    q.into_iter()
        .map(|c| {
            debug_assert!(c.is_integer());
            c.to_integer()
        })
        .collect()
}

/// Number of distinct real roots of squarefree `p` in the half-open
/// interval `(lo, hi]`; `None` endpoints mean `∓∞`.
pub fn sturm_count(
    p: &IntPolynomial,
    lo: Option<&BigRational>,
    hi: Option<&BigRational>,
) -> usize {
    if p.coeffs.len() <= 1 {
        return 0;
    }
    let chain = sturm_chain(p);
    let va = variations(
        &chain,
        lo.map_or(Endpoint::NegInf, Endpoint::At),
    );
    let vb = variations(
        &chain,
        hi.map_or(Endpoint::PosInf, Endpoint::At),
    );
    va.saturating_sub(vb)
}

/// Exact characteristic polynomial of the integer-similar form of a
/// tridiagonal operator matrix: diagonal `d_i` (must be integral),
/// sub-diagonal the exact integers `sub[i] = off[i]²`, super-diagonal 1.
pub fn char_poly_exact(a: &OperatorMatrix) -> Result<IntPolynomial> {
    let n = a.n();
    let mut d = Vec::with_capacity(n);
    for &x in &a.diag {
        let r = libm::round(x);
        if libm::fabs(x - r) > 1e-9 {
            return Err(ArithError::NonIntegerSpec);
        }
        d.push(BigInt::from(r as i64));
    }
    for (i, &s) in a.sub.iter().enumerate() {
        if libm::fabs(a.off[i] * a.off[i] - s as f64) > 1e-6 {
            return Err(ArithError::NonIntegerSpec);
        }
    }
    // p_k(x) = (x − d_k)·p_{k−1}(x) − sub_{k−1}·p_{k−2}(x)
    let mut p_prev = alloc::vec![BigInt::one()]; // p_0 = 1
    let mut p = alloc::vec![-d[0].clone(), BigInt::one()];
    for k in 1..n {
        let mut next = alloc::vec![BigInt::zero(); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= &d[k] * c;
        }
        let s = BigInt::from(a.sub[k - 1]);
        for (i, c) in p_prev.iter().enumerate() {
            next[i] -= &s * c;
        }
        p_prev = p;
        p = next;
    }
    Ok(IntPolynomial { coeffs: trim(p) })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeilCertificate {
    pub pass: bool,
    /// every root of the squarefree part is real
    pub totally_real: bool,
    /// every root `λ` satisfies `λ² ≤ 4q`
    pub bound_ok: bool,
    pub distinct_real_roots: usize,
}

/// Certify that every root of monic `p` is a sum of two complex-conjugate
/// `q`-Weil numbers: totally real, and `λ² ≤ 4q` for each root `λ`. The
/// bound is checked exactly through `r(y) = A(y)² − y·B(y)²` where
/// `p(x) = A(x²) + x·B(x²)`, whose roots are exactly the `λ²`.
pub fn certify_weil(p: &IntPolynomial, q: i64) -> Result<WeilCertificate> {
    if !p.is_monic() {
        return Err(ArithError::NonIntegerSpec);
    }
    let s = squarefree_part(p);
    let real_count = sturm_count(&s, None, None);
    let totally_real = real_count == s.degree();

    // even/odd split
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (i, c) in p.coeffs.iter().enumerate() {
        if i % 2 == 0 {
            a.push(c.clone());
        } else {
            b.push(c.clone());
        }
    }
    let a = IntPolynomial { coeffs: trim(a) };
    let b = IntPolynomial { coeffs: trim(b) };
    // r(y) = A(y)² − y·B(y)²
    let aa = mul_int(&a.coeffs, &a.coeffs);
    let bb = mul_int(&b.coeffs, &b.coeffs);
    let mut r = aa;
    for (i, c) in bb.iter().enumerate() {
        while r.len() <= i + 1 {
            r.push(BigInt::zero());
        }
        r[i + 1] -= c;
    }
    let r = IntPolynomial { coeffs: trim(r) };
    let rs = squarefree_part(&r);
    let total = sturm_count(&rs, None, None);
    let lo = BigRational::new(BigInt::from(-1), BigInt::from(2));
    let hi = BigRational::from_integer(BigInt::from(4 * q));
    let in_box = sturm_count(&rs, Some(&lo), Some(&hi));
    // a root at y = 0 sits inside (−1/2, 4q]; complex roots of r are not
    // counted on either side, so equality here pins every real root of r
    // into [0, 4q]
    let all_real_r = total == rs.degree();
    let bound_ok = all_real_r && in_box == total;
    Ok(WeilCertificate {
        pass: totally_real && bound_ok,
        totally_real,
        bound_ok,
        distinct_real_roots: real_count,
    })
}

fn mul_int(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = alloc::vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::eigenvalues_tridiagonal;
    use alloc::vec;

    fn family(q: i64, n: usize, corner_diag: i64, first_sub: i64, last_sub: i64) -> OperatorMatrix {
        let mut diag = vec![0.0; n];
        diag[0] = corner_diag as f64;
        let mut sub = vec![q; n.saturating_sub(1)];
        if n >= 2 {
            sub[0] = first_sub;
            let l = sub.len() - 1;
            sub[l] = last_sub;
        }
        let off = sub.iter().map(|&s| libm::sqrt(s as f64)).collect();
        OperatorMatrix { q, diag, off, sub }
    }

    #[test]
    fn char_poly_small_cases() {
        let m = family(3, 2, 0, 3, 3);
        let p = char_poly_exact(&m).unwrap();
        assert_eq!(p, IntPolynomial::from_i64(&[-3, 0, 1])); // x² − q
        let m1 = OperatorMatrix {
            q: 3,
            diag: vec![2.0],
            off: vec![],
            sub: vec![],
        };
        assert_eq!(
            char_poly_exact(&m1).unwrap(),
            IntPolynomial::from_i64(&[-2, 1])
        );
        // non-integral diagonal rejected
        let bad = OperatorMatrix {
            q: 3,
            diag: vec![0.5],
            off: vec![],
            sub: vec![],
        };
        assert!(matches!(char_poly_exact(&bad), Err(ArithError::NonIntegerSpec)));
    }

    #[test]
    fn sturm_count_examples() {
        let p = IntPolynomial::from_i64(&[-3, 0, 1]); // x² − 3
        let lo = BigRational::from_integer(BigInt::from(-2));
        let hi = BigRational::from_integer(BigInt::from(2));
        assert_eq!(sturm_count(&p, Some(&lo), Some(&hi)), 2);
        let p = IntPolynomial::from_i64(&[1, 0, 1]); // x² + 1
        assert_eq!(sturm_count(&p, None, None), 0);
        // n = 50 family: all real
        let m = family(3, 50, 2, 2, 3);
        let p = char_poly_exact(&m).unwrap();
        assert_eq!(sturm_count(&squarefree_part(&p), None, None), 50);
    }

    #[test]
    fn squarefree_matches_roots() {
        // (x−1)²(x+2) → squarefree (x−1)(x+2)
        let p = IntPolynomial {
            coeffs: mul_int(
                &mul_int(
                    &[BigInt::from(-1), BigInt::from(1)],
                    &[BigInt::from(-1), BigInt::from(1)],
                ),
                &[BigInt::from(2), BigInt::from(1)],
            ),
        };
        let s = squarefree_part(&p);
        assert_eq!(s, IntPolynomial::from_i64(&[-2, 1, 1]));
    }

    #[test]
    fn certify_examples() {
        // x − 2 at q = 3: 2 = √3ζ + √3ζ̄
        let c = certify_weil(&IntPolynomial::from_i64(&[-2, 1]), 3).unwrap();
        assert!(c.pass);
        // x² − q
        let c = certify_weil(&IntPolynomial::from_i64(&[-3, 0, 1]), 3).unwrap();
        assert!(c.pass);
        // negative control: x − 3 at q = 1 violates the bound
        let c = certify_weil(&IntPolynomial::from_i64(&[-3, 1]), 1).unwrap();
        assert!(!c.pass);
        assert!(c.totally_real && !c.bound_ok);
        // non-monic rejected
        assert!(certify_weil(&IntPolynomial::from_i64(&[1, 2]), 3).is_err());
    }

    #[test]
    fn certification_sweep_small() {
        for q in [2i64, 3, 5] {
            for n in [1usize, 2, 5, 12] {
                for (cd, fs, ls) in [(0, q, q), (2, q - 1, q), (-2, q - 1, q), (0, q, q + 1), (1, q, q)] {
                    if n == 1 && fs != q {
                        continue;
                    }
                    let m = family(q, n, cd, fs, ls);
                    let p = char_poly_exact(&m).unwrap();
                    let c = certify_weil(&p, q).unwrap();
                    assert!(c.pass, "q={q} n={n} corner={cd} sub=({fs},{ls})");
                }
            }
        }
    }

    #[test]
    fn char_poly_roots_match_solver() {
        let m = family(3, 20, 2, 2, 3);
        let p = char_poly_exact(&m).unwrap();
        let rep = eigenvalues_tridiagonal(&m);
        let s = squarefree_part(&p);
        for &lam in &rep.eigenvalues {
            // each solver eigenvalue isolates exactly one exact root
            let lo = BigRational::from_float(lam - 1e-8).unwrap();
            let hi = BigRational::from_float(lam + 1e-8).unwrap();
            assert_eq!(sturm_count(&s, Some(&lo), Some(&hi)), 1, "λ={lam}");
        }
    }

    #[test]
    fn y_substitution_identity() {
        // r(λ²) ≈ 0 for numeric eigenvalues λ
        let m = family(3, 8, 2, 2, 3);
        let p = char_poly_exact(&m).unwrap();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (i, c) in p.coeffs.iter().enumerate() {
            if i % 2 == 0 {
                a.push(c.clone());
            } else {
                b.push(c.clone());
            }
        }
        let aa = mul_int(&a, &a);
        let bb = mul_int(&b, &b);
        let mut r = aa;
        for (i, c) in bb.iter().enumerate() {
            while r.len() <= i + 1 {
                r.push(BigInt::zero());
            }
            r[i + 1] -= c;
        }
        let r = IntPolynomial { coeffs: trim(r) };
        let rep = eigenvalues_tridiagonal(&m);
        let scale = rep
            .eigenvalues
            .iter()
            .map(|&l| libm::fabs(r.eval_f64(l * l)))
            .fold(0.0f64, f64::max);
        // scale-adjusted: coefficients are large, compare against the
        // polynomial's magnitude near the spectrum
        let mag = r.eval_f64(4.0 * 3.0 + 1.0).abs().max(1.0);
        assert!(scale / mag < 1e-6, "residual {scale} vs magnitude {mag}");
    }
}
