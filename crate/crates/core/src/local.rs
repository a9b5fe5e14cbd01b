//! Truncated arithmetic in `F = Q_p` and its dual-number extension
//! `F_e = F[e]/(e^2)`, for an odd prime `p`.
//!
//! An element is stored as `ϖ^v · u` with `u` a unit residue mod `p^N`, where
//! `N` is a fixed global absolute precision.  There is no lazy precision
//! tracking: a result whose valuation reaches `N` has fewer than one
//! significant digit left and raises [`ArithError::PrecisionExhausted`];
//! full cancellation in a sum yields the canonical zero (the result is zero at
//! the stated precision).  Sums that cancel into the top quarter of the digit
//! range are also treated as zero: those digits may have been consumed by
//! earlier projective rescaling, so choose `N` with headroom above the
//! valuations the computation genuinely produces.

use crate::error::{ArithError, Result};
use num_complex::Complex64;

/// The ambient truncated ring: odd prime `p`, absolute precision `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalRing {
    p: i64,
    n: u32,
    pn: i64,
}

fn is_prime(p: i64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl LocalRing {
    /// A ring for the odd prime `p` at absolute precision `n` digits.
    ///
    /// Panics if `p` is not an odd prime, `n == 0`, or `p^n` overflows `i64`.
    pub fn new(p: i64, n: u32) -> Self {
        assert!(is_prime(p) && p % 2 == 1, "p must be an odd prime");
        assert!(n >= 1, "precision must be at least 1");
        let mut pn: i64 = 1;
        for _ in 0..n {
            pn = pn.checked_mul(p).expect("p^n overflows i64");
        }
        LocalRing { p, n, pn }
    }

    pub fn prime(&self) -> i64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.n
    }

    /// `p^k` for `0 <= k <= n`.
    pub fn pow(&self, k: u32) -> i64 {
        debug_assert!(k <= self.n);
        let mut r = 1i64;
        for _ in 0..k {
            r *= self.p;
        }
        r
    }

    pub fn zero(&self) -> LocalElement {
        LocalElement {
            ring: *self,
            repr: Repr::Zero,
        }
    }

    pub fn one(&self) -> LocalElement {
        LocalElement {
            ring: *self,
            repr: Repr::Unit { val: 0, u: 1 },
        }
    }

    /// `ϖ^k` as an element.
    pub fn uniformizer_pow(&self, k: i32) -> LocalElement {
        LocalElement::from_unit_val(*self, 1, k).expect("uniformizer power in range")
    }

    /// Embed an integer, stripping its `p`-part.
    pub fn from_integer(&self, x: i64) -> LocalElement {
        if x == 0 {
            return self.zero();
        }
        let neg = x < 0;
        let mut a = (x as i128).unsigned_abs();
        let mut v: i32 = 0;
        while a % self.p as u128 == 0 {
            a /= self.p as u128;
            v += 1;
        }
        let mut u = (a % self.pn as u128) as i64;
        if neg {
            u = (self.pn - u) % self.pn;
        }
        // x may be a multiple of p^n times a unit we cannot see; that would
        // need |x| >= p^n which from_integer callers never produce.
        LocalElement::from_unit_val(*self, u, v).expect("integer embeds at this precision")
    }

    /// Embed the fraction `a/b`, `b` nonzero.
    pub fn from_ratio(&self, a: i64, b: i64) -> LocalElement {
        assert!(b != 0);
        let num = self.from_integer(a);
        let den = self.from_integer(b);
        num.checked_div(&den).expect("ratio embeds at this precision")
    }

    pub fn dual(&self, body: LocalElement, tangent: LocalElement) -> DualElement {
        DualElement { body, tangent }
    }

    pub fn dual_from_integers(&self, body: i64, tangent: i64) -> DualElement {
        DualElement {
            body: self.from_integer(body),
            tangent: self.from_integer(tangent),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Repr {
    Zero,
    Unit { val: i32, u: i64 },
}

/// `ϖ^v · u` with `u` a unit residue, or the canonical zero.
#[derive(Debug, Clone, Copy)]
pub struct LocalElement {
    ring: LocalRing,
    repr: Repr,
}

fn mod_pow_inv(u: i64, modulus: i64) -> i64 {
    // extended Euclid; modulus is a prime power, u coprime to it
    let (mut r0, mut r1) = (modulus as i128, u as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert!(r0 == 1, "inverse of non-coprime residue");
    (((t0 % modulus as i128) + modulus as i128) % modulus as i128) as i64
}

impl LocalElement {
    /// Build `ϖ^val · u` from a residue `u` mod `p^n`; `u` may carry extra
    /// `p`-powers, which are folded into the valuation.
    pub fn from_unit_val(ring: LocalRing, u: i64, val: i32) -> Result<Self> {
        let mut u = u.rem_euclid(ring.pn);
        if u == 0 {
            return Ok(ring.zero());
        }
        let mut val = val;
        while u % ring.p == 0 {
            u /= ring.p;
            val += 1;
        }
        if val >= ring.n as i32 {
            return Err(ArithError::PrecisionExhausted);
        }
        Ok(LocalElement {
            ring,
            repr: Repr::Unit { val, u },
        })
    }

    pub fn ring(&self) -> LocalRing {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// Valuation; `None` for the canonical zero.
    pub fn valuation(&self) -> Option<i32> {
        match self.repr {
            Repr::Zero => None,
            Repr::Unit { val, .. } => Some(val),
        }
    }

    /// Valuation with `i32::MAX` standing in for zero, handy in comparisons.
    pub fn val_or_max(&self) -> i32 {
        self.valuation().unwrap_or(i32::MAX)
    }

    pub fn unit_part(&self) -> Option<i64> {
        match self.repr {
            Repr::Zero => None,
            Repr::Unit { u, .. } => Some(u),
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.repr, Repr::Unit { val: 0, .. })
    }

    /// Integral at the working precision: zero or valuation `>= 0`.
    pub fn is_integral(&self) -> bool {
        match self.repr {
            Repr::Zero => true,
            Repr::Unit { val, .. } => val >= 0,
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(ArithError::RingMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let (v1, u1) = match self.repr {
            Repr::Zero => return Ok(*other),
            Repr::Unit { val, u } => (val, u),
        };
        let (v2, u2) = match other.repr {
            Repr::Zero => return Ok(*self),
            Repr::Unit { val, u } => (val, u),
        };
        let vmin = v1.min(v2);
        let pn = self.ring.pn as i128;
        let sh1 = self.ring.pow((v1 - vmin) as u32) as i128;
        let sh2 = self.ring.pow((v2 - vmin) as u32) as i128;
        let s = ((u1 as i128 * sh1 + u2 as i128 * sh2) % pn) as i64;
        // a sum reaches deep valuation only through cancellation; the top few
        // residue digits may already have been consumed by projective
        // rescaling (shifting a folded unit back down cannot restore them),
        // so a result inside the guard band below the precision floor has no
        // trusted digit left and is zero at the stated precision
        let floor = (self.ring.n - self.ring.n / 4) as i32;
        match Self::from_unit_val(self.ring, s, vmin) {
            Err(ArithError::PrecisionExhausted) => Ok(self.ring.zero()),
            Ok(x) if x.val_or_max() >= floor => Ok(self.ring.zero()),
            other => other,
        }
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        match self.repr {
            Repr::Zero => *self,
            Repr::Unit { val, u } => LocalElement {
                ring: self.ring,
                repr: Repr::Unit {
                    val,
                    u: self.ring.pn - u,
                },
            },
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let (v1, u1) = match self.repr {
            Repr::Zero => return Ok(self.ring.zero()),
            Repr::Unit { val, u } => (val, u),
        };
        let (v2, u2) = match other.repr {
            Repr::Zero => return Ok(self.ring.zero()),
            Repr::Unit { val, u } => (val, u),
        };
        let val = v1 + v2;
        if val >= self.ring.n as i32 {
            return Err(ArithError::PrecisionExhausted);
        }
        let u = ((u1 as i128 * u2 as i128) % self.ring.pn as i128) as i64;
        Ok(LocalElement {
            ring: self.ring,
            repr: Repr::Unit { val, u },
        })
    }

    pub fn checked_inv(&self) -> Result<Self> {
        match self.repr {
            Repr::Zero => Err(ArithError::NonUnit),
            Repr::Unit { val, u } => {
                if -val >= self.ring.n as i32 {
                    return Err(ArithError::PrecisionExhausted);
                }
                Ok(LocalElement {
                    ring: self.ring,
                    repr: Repr::Unit {
                        val: -val,
                        u: mod_pow_inv(u, self.ring.pn),
                    },
                })
            }
        }
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.checked_inv()?)
    }

    /// Multiply by `ϖ^k`.
    pub fn shift_val(&self, k: i32) -> Result<Self> {
        match self.repr {
            Repr::Zero => Ok(*self),
            Repr::Unit { val, u } => {
                let val = val + k;
                if val >= self.ring.n as i32 {
                    return Err(ArithError::PrecisionExhausted);
                }
                Ok(LocalElement {
                    ring: self.ring,
                    repr: Repr::Unit { val, u },
                })
            }
        }
    }

    /// Unit residue of `x/ϖ^v(x)` mod `p^k`.
    pub fn unit_mod(&self, k: u32) -> Option<i64> {
        self.unit_part().map(|u| u % self.ring.pow(k.min(self.ring.n)))
    }
}

impl PartialEq for LocalElement {
    fn eq(&self, other: &Self) -> bool {
        if self.ring != other.ring {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Zero, Repr::Zero) => true,
            (Repr::Unit { val: v1, u: u1 }, Repr::Unit { val: v2, u: u2 }) => {
                if v1 != v2 {
                    return false;
                }
                // compare up to the digits determined at absolute precision n
                let digits = if *v1 >= 0 {
                    self.ring.n - (*v1 as u32).min(self.ring.n)
                } else {
                    self.ring.n
                };
                let m = self.ring.pow(digits);
                u1 % m == u2 % m
            }
            _ => false,
        }
    }
}

impl Eq for LocalElement {}

/// `a + εb` in `F_e`, with `ε² = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualElement {
    pub body: LocalElement,
    pub tangent: LocalElement,
}

impl DualElement {
    pub fn from_body(body: LocalElement) -> Self {
        let tangent = body.ring().zero();
        DualElement { body, tangent }
    }

    pub fn ring(&self) -> LocalRing {
        self.body.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero() && self.tangent.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.body.is_unit()
    }

    pub fn is_integral(&self) -> bool {
        self.body.is_integral() && self.tangent.is_integral()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        Ok(DualElement {
            body: self.body.checked_add(&other.body)?,
            tangent: self.tangent.checked_add(&other.tangent)?,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        DualElement {
            body: self.body.neg(),
            tangent: self.tangent.neg(),
        }
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let body = self.body.checked_mul(&other.body)?;
        let t1 = self.body.checked_mul(&other.tangent)?;
        let t2 = self.tangent.checked_mul(&other.body)?;
        Ok(DualElement {
            body,
            tangent: t1.checked_add(&t2)?,
        })
    }

    /// `(a+εb)⁻¹ = a⁻¹ − εa⁻²b`; requires the body to be invertible in `F`.
    pub fn checked_inv(&self) -> Result<Self> {
        let ainv = self.body.checked_inv()?;
        let t = ainv
            .checked_mul(&ainv)?
            .checked_mul(&self.tangent)?
            .neg();
        Ok(DualElement {
            body: ainv,
            tangent: t,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.checked_inv()?)
    }

    /// Multiply by `ϖ^k`.
    pub fn shift_val(&self, k: i32) -> Result<Self> {
        Ok(DualElement {
            body: self.body.shift_val(k)?,
            tangent: self.tangent.shift_val(k)?,
        })
    }
}

/// The additive character `ψ₀: F → U(1)` whose kernel lattice is exactly `O`,
/// realized as `x ↦ exp(2πi · frac(x))` on ϖ-adic expansions.
#[derive(Debug, Clone, Copy)]
pub struct AdditiveCharacter {
    ring: LocalRing,
}

impl AdditiveCharacter {
    pub fn new(ring: LocalRing) -> Self {
        AdditiveCharacter { ring }
    }

    pub fn eval(&self, x: &LocalElement) -> Result<Complex64> {
        if x.ring() != self.ring {
            return Err(ArithError::RingMismatch);
        }
        match x.valuation() {
            None => Ok(Complex64::new(1.0, 0.0)),
            Some(v) if v >= 0 => Ok(Complex64::new(1.0, 0.0)),
            Some(v) => {
                let k = (-v) as u32;
                if k > self.ring.n {
                    return Err(ArithError::PrecisionExhausted);
                }
                let pk = self.ring.pow(k);
                let t = x.unit_part().unwrap() % pk;
                let angle = 2.0 * core::f64::consts::PI * (t as f64) / (pk as f64);
                Ok(Complex64::new(libm::cos(angle), libm::sin(angle)))
            }
        }
    }
}
