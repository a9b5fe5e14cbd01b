//! Symbolic model of the commutative algebra generated by the `t_x`: exact
//! cyclotomic coefficients in `Q(ζ_p)`, the evaluation morphisms `β₁` and
//! `β_ψ`, and the kernel/CRT identities behind their product description.

use crate::error::{ArithError, Result};
use crate::operators::{build_matrix, RepSpec};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// An element of `Q(ζ_p)`, stored on the basis `ζ⁰, …, ζ^{p−2}` with
/// `ζ^{p−1} = −(1 + ζ + … + ζ^{p−2})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cyclo {
    pub p: i64,
    pub coords: Vec<BigRational>,
}

impl Cyclo {
    pub fn zero(p: i64) -> Self {
        Cyclo {
            p,
            coords: alloc::vec![BigRational::zero(); (p - 1) as usize],
        }
    }

    pub fn from_rational(p: i64, r: BigRational) -> Self {
        let mut c = Cyclo::zero(p);
        c.coords[0] = r;
        c
    }

    pub fn from_integer(p: i64, n: i64) -> Self {
        Cyclo::from_rational(p, rat(n))
    }

    pub fn one(p: i64) -> Self {
        Cyclo::from_integer(p, 1)
    }

    /// `ζ_p^k`, exponent taken mod p.
    pub fn zeta_pow(p: i64, k: i64) -> Self {
        let k = k.rem_euclid(p) as usize;
        let mut c = Cyclo::zero(p);
        if k < (p - 1) as usize {
            c.coords[k] = BigRational::one();
        } else {
            // ζ^{p−1} = −Σ_{i<p−1} ζ^i
            for x in c.coords.iter_mut() {
                *x = -BigRational::one();
            }
        }
        c
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        Cyclo {
            p: self.p,
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Cyclo {
            p: self.p,
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let n = (self.p - 1) as usize;
        let mut raw = alloc::vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if !b.is_zero() {
                    raw[i + j] += a * b;
                }
            }
        }
        let mut out = Cyclo::zero(self.p);
        for (k, v) in raw.into_iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            let k = (k as i64).rem_euclid(self.p) as usize;
            if k < n {
                out.coords[k] += v;
            } else {
                for x in out.coords.iter_mut() {
                    *x -= &v;
                }
            }
        }
        out
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Cyclo {
            p: self.p,
            coords: self.coords.iter().map(|a| a * r).collect(),
        }
    }

    /// Inverse in `Q(ζ_p)` via the extended Euclid algorithm against the
    /// cyclotomic polynomial `Φ_p = 1 + X + … + X^{p−1}`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(ArithError::NonUnit);
        }
        let phi: Vec<BigRational> = (0..self.p).map(|_| BigRational::one()).collect();
        let me = self.coords.clone();
        let (_, _, inv) = poly_ext_gcd(&phi, &me);
        // gcd is a nonzero constant g: inv·me ≡ g mod Φ; normalize
        let g = poly_mod(&poly_mul(&inv, &me), &phi);
        debug_assert!(g.iter().skip(1).all(|c| c.is_zero()) && !g[0].is_zero());
        let scale = g[0].recip();
        let coords = poly_mod(&inv, &phi)
            .into_iter()
            .map(|c| c * &scale)
            .collect::<Vec<_>>();
        let mut out = Cyclo::zero(self.p);
        for (i, c) in coords.into_iter().enumerate() {
            out.coords[i] = c;
        }
        Ok(out)
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = 2.0 * core::f64::consts::PI * k as f64 / self.p as f64;
            let num = bigint_to_f64(c.numer());
            let den = bigint_to_f64(c.denom());
            acc += Complex64::new(libm::cos(t), libm::sin(t)) * (num / den);
        }
        acc
    }
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    n.to_f64().unwrap_or(f64::INFINITY)
}

// dense rational polynomial helpers (low degree, p ≤ 7)

fn poly_trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.len() > 1 && v.last().map_or(false, |c| c.is_zero()) {
        v.pop();
    }
    v
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = alloc::vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    poly_trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = alloc::vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    poly_trim(out)
}

fn poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = poly_trim(b.to_vec());
    let mut r = poly_trim(a.to_vec());
    let mut q = alloc::vec![BigRational::zero(); a.len().max(1)];
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let coef = r.last().unwrap() / &lead;
        q[shift] += &coef;
        let mut sub = alloc::vec![BigRational::zero(); shift];
        sub.push(coef);
        r = poly_sub(&r, &poly_mul(&sub, &b));
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
    }
    (poly_trim(q), r)
}

fn poly_mod(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
    let mut r = poly_divmod(a, m).1;
    r.resize(m.len() - 1, BigRational::zero());
    r
}

/// Extended Euclid: returns `(g, s, t)` with `s·a + t·b = g`.
fn poly_ext_gcd(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = poly_trim(a.to_vec());
    let mut r1 = poly_trim(b.to_vec());
    let mut s0 = alloc::vec![BigRational::one()];
    let mut s1 = alloc::vec![BigRational::zero()];
    let mut t0 = alloc::vec![BigRational::zero()];
    let mut t1 = alloc::vec![BigRational::one()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        let t = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    (r0, s0, t0)
}

/// `ψ ∈ κ^∨`: `ψ(x) = ζ_p^{ux}`; trivial iff `u ≡ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplicativeCharacter {
    pub p: i64,
    pub u: i64,
}

impl MultiplicativeCharacter {
    pub fn is_trivial(&self) -> bool {
        self.u.rem_euclid(self.p) == 0
    }

    pub fn eval(&self, x: i64) -> Cyclo {
        Cyclo::zeta_pow(self.p, self.u * x)
    }
}

/// A formal commutative polynomial in the variables `t_0, …, t_{p−1}` with
/// coefficients in `Q(ζ_p)`; the monomial key is the exponent vector.
#[derive(Debug, Clone, PartialEq)]
pub struct TPolynomial {
    pub p: i64,
    pub terms: BTreeMap<Vec<u32>, Cyclo>,
}

impl TPolynomial {
    pub fn zero(p: i64) -> Self {
        TPolynomial {
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: i64, c: Cyclo) -> Self {
        let mut out = TPolynomial::zero(p);
        if !c.is_zero() {
            out.terms.insert(alloc::vec![0; p as usize], c);
        }
        out
    }

    /// The generator `t_x`.
    pub fn var(p: i64, x: i64) -> Self {
        let mut key = alloc::vec![0u32; p as usize];
        key[x.rem_euclid(p) as usize] = 1;
        let mut out = TPolynomial::zero(p);
        out.terms.insert(key, Cyclo::one(p));
        out
    }

    fn insert(&mut self, key: Vec<u32>, c: Cyclo) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                *existing = existing.add(&c);
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(k.clone(), c.neg());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = TPolynomial::zero(self.p);
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let key: Vec<u32> = k1.iter().zip(k2).map(|(a, b)| a + b).collect();
                out.insert(key, c1.mul(c2));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ_{x∈κ} t_x`.
    pub fn sum_of_vars(p: i64) -> Self {
        let mut out = TPolynomial::zero(p);
        for x in 0..p {
            out = out.add(&TPolynomial::var(p, x));
        }
        out
    }
}

/// A Laurent polynomial in `z` with coefficients in `Q(ζ_p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPolynomial {
    pub p: i64,
    pub coeffs: BTreeMap<i64, Cyclo>,
}

impl LaurentPolynomial {
    pub fn zero(p: i64) -> Self {
        LaurentPolynomial {
            p,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(p: i64, k: i64, c: Cyclo) -> Self {
        let mut out = LaurentPolynomial::zero(p);
        if !c.is_zero() {
            out.coeffs.insert(k, c);
        }
        out
    }

    pub fn constant(p: i64, c: Cyclo) -> Self {
        LaurentPolynomial::monomial(p, 0, c)
    }

    fn insert(&mut self, k: i64, c: Cyclo) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&k) {
            Some(existing) => {
                *existing = existing.add(&c);
                if existing.is_zero() {
                    self.coeffs.remove(&k);
                }
            }
            None => {
                self.coeffs.insert(k, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.coeffs {
            out.insert(k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, c) in &other.coeffs {
            out.insert(k, c.neg());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPolynomial::zero(self.p);
        for (&k1, c1) in &self.coeffs {
            for (&k2, c2) in &other.coeffs {
                out.insert(k1 + k2, c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &Cyclo) -> Self {
        let mut out = LaurentPolynomial::zero(self.p);
        for (&k, v) in &self.coeffs {
            out.insert(k, v.mul(c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|&k| k == 0)
    }

    /// Evaluate at an exact cyclotomic point `z₀` (must be a unit).
    pub fn eval_cyclo(&self, z0: &Cyclo) -> Result<Cyclo> {
        let z0_inv = z0.inverse()?;
        let mut acc = Cyclo::zero(self.p);
        for (&k, c) in &self.coeffs {
            let mut zp = Cyclo::one(self.p);
            let base = if k < 0 { &z0_inv } else { z0 };
            for _ in 0..k.unsigned_abs() {
                zp = zp.mul(base);
            }
            acc = acc.add(&c.mul(&zp));
        }
        Ok(acc)
    }

    /// Evaluate at a complex point.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&k, c) in &self.coeffs {
            acc += c.to_complex() * cpow(z, k);
        }
        acc
    }
}

fn cpow(z: Complex64, k: i64) -> Complex64 {
    let base = if k < 0 { 1.0 / z } else { z };
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..k.unsigned_abs() {
        acc *= base;
    }
    acc
}

/// `β₁`: substitute `t_x ↦ z` for every `x`.
pub fn beta_1(poly: &TPolynomial) -> LaurentPolynomial {
    let mut out = LaurentPolynomial::zero(poly.p);
    for (key, c) in &poly.terms {
        let deg: u32 = key.iter().sum();
        out.insert(deg as i64, c.clone());
    }
    out
}

/// `β_ψ`: substitute `t_x ↦ ψ(x)z⁻¹ + z`, exactly.
pub fn beta_psi(poly: &TPolynomial, psi: &MultiplicativeCharacter) -> Result<LaurentPolynomial> {
    if psi.is_trivial() {
        return Err(ArithError::TrivialCharacter);
    }
    let p = poly.p;
    let mut out = LaurentPolynomial::zero(p);
    for (key, c) in &poly.terms {
        let mut term = LaurentPolynomial::constant(p, c.clone());
        for (x, &e) in key.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let factor = LaurentPolynomial::monomial(p, 1, Cyclo::one(p))
                .add(&LaurentPolynomial::monomial(p, -1, psi.eval(x as i64)));
            for _ in 0..e {
                term = term.mul(&factor);
            }
        }
        out = out.add(&term);
    }
    Ok(out)
}

/// `β_ψ((Σ_y t_y)(t_0 − t_x)) = q(1 − ψ(x))`, exactly: the image is the
/// constant Laurent polynomial.
pub fn kernel_identity_witness(
    psi: &MultiplicativeCharacter,
    x: i64,
) -> Result<(LaurentPolynomial, Cyclo)> {
    let p = psi.p;
    let poly = TPolynomial::sum_of_vars(p)
        .mul(&TPolynomial::var(p, 0).sub(&TPolynomial::var(p, x)));
    let image = beta_psi(&poly, psi)?;
    let expected = Cyclo::from_integer(p, p)
        .mul(&Cyclo::one(p).sub(&psi.eval(x)));
    Ok((image, expected))
}

/// The pairwise-coprimality step: for `ψ₁ ≠ ψ₂` there is `x` with
/// `q(ψ₁(x) − ψ₂(x))` a nonzero constant, hence a unit in `C[z,z⁻¹]`.
pub fn crt_witness(
    psi1: &MultiplicativeCharacter,
    psi2: &MultiplicativeCharacter,
) -> Option<(i64, Cyclo)> {
    let p = psi1.p;
    for x in 0..p {
        let diff = psi1.eval(x).sub(&psi2.eval(x));
        if !diff.is_zero() {
            return Some((x, Cyclo::from_integer(p, p).mul(&diff)));
        }
    }
    None
}

/// Surjectivity witness: express `z` and `z⁻¹` as cyclotomic-rational
/// combinations of `β_ψ(t_0) = z⁻¹+z` and `β_ψ(t_x) = ψ(x)z⁻¹+z` for any `x`
/// with `ψ(x) ≠ 1`. Returns `(z, z⁻¹)` as computed from the combination.
pub fn surjectivity_witness(
    psi: &MultiplicativeCharacter,
    x: i64,
) -> Result<(LaurentPolynomial, LaurentPolynomial)> {
    let p = psi.p;
    let psix = psi.eval(x);
    let denom = psix.sub(&Cyclo::one(p));
    if denom.is_zero() {
        return Err(ArithError::TrivialCharacter);
    }
    let b0 = beta_psi(&TPolynomial::var(p, 0), psi)?;
    let bx = beta_psi(&TPolynomial::var(p, x), psi)?;
    let inv = denom.inverse()?;
    // ψ(x)·(z⁻¹+z) − (ψ(x)z⁻¹+z) = (ψ(x)−1)·z
    let z = b0.scale(&psix).sub(&bx).scale(&inv);
    // (ψ(x)z⁻¹+z) − (z⁻¹+z) = (ψ(x)−1)·z⁻¹
    let z_inv = bx.sub(&b0).scale(&inv);
    Ok((z, z_inv))
}

/// Evaluate `P` with every variable sent to the same dense matrix.
fn eval_at_matrix(poly: &TPolynomial, a: &[Vec<f64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let mut acc = alloc::vec![alloc::vec![Complex64::new(0.0, 0.0); n]; n];
    for (key, c) in &poly.terms {
        let deg: u32 = key.iter().sum();
        let mut term = identity_matrix(n);
        for _ in 0..deg {
            term = mat_mul_real(&term, a);
        }
        let cc = c.to_complex();
        for i in 0..n {
            for j in 0..n {
                acc[i][j] += term[i][j] * cc;
            }
        }
    }
    acc
}

fn identity_matrix(n: usize) -> Vec<Vec<Complex64>> {
    let mut m = alloc::vec![alloc::vec![Complex64::new(0.0, 0.0); n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

fn mat_mul_real(a: &[Vec<Complex64>], b: &[Vec<f64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    let mut out = alloc::vec![alloc::vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// Cross-check the morphisms against the operator matrices: for a
/// non-special spec all `t_x` act by the same matrix, so `P` acts as the
/// one-variable collapse `β₁(P)` evaluated there; for a special spec
/// (`v_c = 0`, `χ(ϖ) = ±1`) the exact scalars `ψ(x)χ(ϖ) + χ(ϖ)⁻¹` with
/// `ψ` of index `2c` must reproduce `β_ψ(P)` at `z = χ(ϖ)`.
pub fn consistency_with_representations(poly: &TPolynomial, spec: &RepSpec) -> Result<bool> {
    let p = poly.p;
    if spec.q() != p {
        return Err(ArithError::SpecMismatch);
    }
    match spec {
        RepSpec::Split {
            v_c: 0,
            c_unit,
            conductor: 0,
            chi_pi,
            ..
        } => {
            // special rep: exact scalar evaluation
            if chi_pi.im != 0.0 || libm::fabs(chi_pi.re.abs() - 1.0) > 0.0 {
                return Err(ArithError::SpecMismatch);
            }
            let chi = if chi_pi.re > 0.0 { 1i64 } else { -1 };
            let psi = MultiplicativeCharacter { p, u: 2 * c_unit };
            let chi_c = Cyclo::from_integer(p, chi);
            let scalar = |x: i64| -> Cyclo {
                // ψ(x)χ(ϖ) + χ⁻¹(ϖ), with χ(ϖ) = ±1 its own inverse
                psi.eval(x).mul(&chi_c).add(&chi_c)
            };
            let mut acc = Cyclo::zero(p);
            for (key, c) in &poly.terms {
                let mut term = c.clone();
                for (x, &e) in key.iter().enumerate() {
                    for _ in 0..e {
                        term = term.mul(&scalar(x as i64));
                    }
                }
                acc = acc.add(&term);
            }
            let image = beta_psi(poly, &psi)?.eval_cyclo(&chi_c)?;
            Ok(acc == image)
        }
        _ => {
            let m = build_matrix(spec, 8)?;
            let dense = m.to_dense();
            let lhs = eval_at_matrix(poly, &dense);
            // β₁(P) as a one-variable polynomial, evaluated at the matrix
            let collapse = beta_1(poly);
            let mut rhs = alloc::vec![
                alloc::vec![Complex64::new(0.0, 0.0); dense.len()];
                dense.len()
            ];
            for (&k, c) in &collapse.coeffs {
                debug_assert!(k >= 0);
                let mut term = identity_matrix(dense.len());
                for _ in 0..k {
                    term = mat_mul_real(&term, &dense);
                }
                let cc = c.to_complex();
                for i in 0..dense.len() {
                    for j in 0..dense.len() {
                        rhs[i][j] += term[i][j] * cc;
                    }
                }
            }
            let mut ok = true;
            for i in 0..dense.len() {
                for j in 0..dense.len() {
                    if (lhs[i][j] - rhs[i][j]).norm_sqr() > 1e-18 {
                        ok = false;
                    }
                }
            }
            Ok(ok)
        }
    }
}
