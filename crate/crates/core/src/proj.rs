//! Elements of `G = PGL2(F)` and `G_e = PGL2(F_e)`: group operations modulo
//! scalars, membership in the maximal compacts `K`, `K_e`, the semidirect
//! splitting `G_e = (1+e·g) ⋊ G`, and the Iwasawa normal form used for points
//! `u_b t_{ϖ^r} K` of the fibers.

use crate::error::{ArithError, Result};
use crate::local::{DualElement, LocalElement, LocalRing};
use alloc::vec::Vec;

/// A 2×2 matrix over `F_e` taken modulo scalars.  Matrices over `F` are the
/// special case with all tangents zero.  The stored representative is scaled
/// so the minimum body-valuation over the entries is 0.
#[derive(Debug, Clone, Copy)]
pub struct ProjMatrix {
    ring: LocalRing,
    // row-major: e[0][0], e[0][1]; e[1][0], e[1][1]
    e: [[DualElement; 2]; 2],
}

impl ProjMatrix {
    pub fn from_dual_entries(ring: LocalRing, e: [[DualElement; 2]; 2]) -> Result<Self> {
        let m = ProjMatrix { ring, e };
        m.normalize()
    }

    pub fn from_local_entries(ring: LocalRing, e: [[LocalElement; 2]; 2]) -> Result<Self> {
        let d = |x: LocalElement| DualElement::from_body(x);
        Self::from_dual_entries(ring, [[d(e[0][0]), d(e[0][1])], [d(e[1][0]), d(e[1][1])]])
    }

    pub fn identity(ring: LocalRing) -> Self {
        Self::from_local_entries(ring, [[ring.one(), ring.zero()], [ring.zero(), ring.one()]])
            .expect("identity is normalizable")
    }

    /// The Weyl reflection `[[0,1],[1,0]]`.
    pub fn w(ring: LocalRing) -> Self {
        Self::from_local_entries(ring, [[ring.zero(), ring.one()], [ring.one(), ring.zero()]])
            .expect("w is normalizable")
    }

    /// Upper transvection `u_b = [[1,b],[0,1]]` over `F_e`.
    pub fn u(b: DualElement) -> Self {
        let ring = b.ring();
        let one = DualElement::from_body(ring.one());
        let zero = DualElement::from_body(ring.zero());
        Self::from_dual_entries(ring, [[one, b], [zero, one]]).expect("u_b is normalizable")
    }

    pub fn u_local(b: LocalElement) -> Self {
        Self::u(DualElement::from_body(b))
    }

    /// `u_{εz}` for `z` over `F`.
    pub fn u_eps(z: LocalElement) -> Self {
        let ring = z.ring();
        Self::u(ring.dual(ring.zero(), z))
    }

    /// Diagonal torus element `t_s = diag(s, 1)`.
    pub fn t(s: DualElement) -> Result<Self> {
        let ring = s.ring();
        let one = DualElement::from_body(ring.one());
        let zero = DualElement::from_body(ring.zero());
        Self::from_dual_entries(ring, [[s, zero], [zero, one]])
    }

    pub fn t_local(s: LocalElement) -> Result<Self> {
        Self::t(DualElement::from_body(s))
    }

    /// `t_{ϖ^r}`.
    pub fn t_pow(ring: LocalRing, r: i32) -> Result<Self> {
        Self::t_local(ring.uniformizer_pow(r))
    }

    /// `g_x = diag(ϖ + εx, 1)` for a chosen lift `x ∈ O` of an element of κ.
    pub fn gx(x: &LocalElement) -> Result<Self> {
        let ring = x.ring();
        Self::t(ring.dual(ring.uniformizer_pow(1), *x))
    }

    /// `g_{x,y} = diag(ϖ + εx, ϖ + εy)`.
    pub fn gxy(x: &LocalElement, y: &LocalElement) -> Result<Self> {
        let ring = x.ring();
        let zero = DualElement::from_body(ring.zero());
        let a = ring.dual(ring.uniformizer_pow(1), *x);
        let d = ring.dual(ring.uniformizer_pow(1), *y);
        Self::from_dual_entries(ring, [[a, zero], [zero, d]])
    }

    /// `h_{x,y} = [[−ϖ(x+y) − εxy, ϖ], [ϖ, ε]]`.
    pub fn hxy(x: &LocalElement, y: &LocalElement) -> Result<Self> {
        let ring = x.ring();
        let pi = ring.uniformizer_pow(1);
        let s = x.checked_add(y)?;
        let prod = x.checked_mul(y)?;
        let a = ring.dual(pi.checked_mul(&s)?.neg(), prod.neg());
        let b = DualElement::from_body(pi);
        let d = ring.dual(ring.zero(), ring.one());
        Self::from_dual_entries(ring, [[a, b], [b, d]])
    }

    pub fn ring(&self) -> LocalRing {
        self.ring
    }

    pub fn entry(&self, i: usize, j: usize) -> DualElement {
        self.e[i][j]
    }

    pub fn body(&self, i: usize, j: usize) -> LocalElement {
        self.e[i][j].body
    }

    pub fn is_over_f(&self) -> bool {
        self.e.iter().flatten().all(|x| x.tangent.is_zero())
    }

    fn normalize(self) -> Result<Self> {
        let mut vmin = i32::MAX;
        for row in &self.e {
            for x in row {
                if let Some(v) = x.body.valuation() {
                    vmin = vmin.min(v);
                }
            }
        }
        if vmin == i32::MAX {
            // all bodies zero: not invertible in F_e
            return Err(ArithError::NonUnit);
        }
        if vmin == 0 {
            return Ok(self);
        }
        let mut e = self.e;
        for row in &mut e {
            for x in row.iter_mut() {
                *x = x.shift_val(-vmin)?;
            }
        }
        Ok(ProjMatrix { ring: self.ring, e })
    }

    pub fn det(&self) -> Result<DualElement> {
        let ad = self.e[0][0].checked_mul(&self.e[1][1])?;
        let bc = self.e[0][1].checked_mul(&self.e[1][0])?;
        ad.checked_sub(&bc)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ring != other.ring {
            return Err(ArithError::RingMismatch);
        }
        let mut e = self.e;
        for i in 0..2 {
            for j in 0..2 {
                let t1 = self.e[i][0].checked_mul(&other.e[0][j])?;
                let t2 = self.e[i][1].checked_mul(&other.e[1][j])?;
                e[i][j] = t1.checked_add(&t2)?;
            }
        }
        Self::from_dual_entries(self.ring, e)
    }

    /// Inverse modulo scalars: the adjugate `[[d,−b],[−c,a]]`.
    pub fn inverse(&self) -> Result<Self> {
        let e = [
            [self.e[1][1], self.e[0][1].neg()],
            [self.e[1][0].neg(), self.e[0][0]],
        ];
        Self::from_dual_entries(self.ring, e)
    }

    /// The transpose anti-involution θ.
    pub fn transpose_theta(&self) -> Self {
        let e = [[self.e[0][0], self.e[1][0]], [self.e[0][1], self.e[1][1]]];
        // transposition permutes entries, normalization is unaffected
        ProjMatrix { ring: self.ring, e }
    }

    /// Equality modulo unit scalars of `F_e`, by cross-products of the
    /// normalized representatives.
    pub fn eq_mod_scalars(&self, other: &Self) -> Result<bool> {
        if self.ring != other.ring {
            return Err(ArithError::RingMismatch);
        }
        let a: Vec<DualElement> = self.e.iter().flatten().copied().collect();
        let b: Vec<DualElement> = other.e.iter().flatten().copied().collect();
        // proportionality: a_i b_j = a_j b_i for all pairs; both sides are
        // normalized so the scalar is automatically a unit
        for i in 0..4 {
            for j in (i + 1)..4 {
                let lhs = a[i].checked_mul(&b[j])?;
                let rhs = a[j].checked_mul(&b[i])?;
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The splitting `g = (1+εX)·h` modulo scalars: `h` is the body matrix and
    /// `X` the trace-normalized `T·h⁻¹` (the trace moves into the scalar;
    /// needs `p` odd for `1/2`).
    pub fn semidirect_decompose(&self) -> Result<(LieElement, ProjMatrix)> {
        let ring = self.ring;
        let b = [
            [self.e[0][0].body, self.e[0][1].body],
            [self.e[1][0].body, self.e[1][1].body],
        ];
        let t = [
            [self.e[0][0].tangent, self.e[0][1].tangent],
            [self.e[1][0].tangent, self.e[1][1].tangent],
        ];
        let det = b[0][0]
            .checked_mul(&b[1][1])?
            .checked_sub(&b[0][1].checked_mul(&b[1][0])?)?;
        if det.is_zero() {
            return Err(ArithError::NonUnit);
        }
        // X = T·B⁻¹ computed as (T·adj B)/det: all additions happen before
        // the division, so cancellation acts on exact products — dividing
        // first would sum truncated expansions and can leave spurious
        // near-floor digits that later poison deeper computations
        let adj = [[b[1][1], b[0][1].neg()], [b[1][0].neg(), b[0][0]]];
        let mut m = [[ring.zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let t1 = t[i][0].checked_mul(&adj[0][j])?;
                let t2 = t[i][1].checked_mul(&adj[1][j])?;
                m[i][j] = t1.checked_add(&t2)?;
            }
        }
        // subtract (tr/2)·1 while still exact; the (2,2) entry is then
        // exactly −(1,1)
        let tr = m[0][0].checked_add(&m[1][1])?;
        let half_tr = tr.checked_div(&ring.from_integer(2))?;
        m[0][0] = m[0][0].checked_sub(&half_tr)?;
        m[1][1] = m[0][0].neg();
        let mut x = [[ring.zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                x[i][j] = m[i][j].checked_div(&det)?;
            }
        }
        let h = ProjMatrix::from_local_entries(ring, b)?;
        Ok((LieElement::new(x)?, h))
    }

    /// Membership in `K = PGL2(O)` for a matrix over `F` (zero tangents):
    /// some scalar multiple is integral with unit determinant, equivalently
    /// `v(det) = 2·min v(entries)`.
    pub fn in_k(&self) -> Result<bool> {
        debug_assert!(self.is_over_f());
        // normalized: min body valuation is 0
        let det = self.det()?;
        Ok(det.body.valuation() == Some(0))
    }

    /// Membership in `K_e = PGL2(O_e)`: body in `K` and the splitting's `X`
    /// integral.
    pub fn in_k_eps(&self) -> Result<bool> {
        let bodies = [
            [self.e[0][0].body, self.e[0][1].body],
            [self.e[1][0].body, self.e[1][1].body],
        ];
        let body = match ProjMatrix::from_local_entries(self.ring, bodies) {
            Ok(m) => m,
            Err(ArithError::NonUnit) => return Ok(false),
            Err(e) => return Err(e),
        };
        if !body.in_k()? {
            return Ok(false);
        }
        let (x, _) = self.semidirect_decompose()?;
        Ok(x.is_integral())
    }

    /// `g⁻¹ m g` for `g` over `F`; scalar-independent since the adjugate's
    /// determinant factor cancels against `1/det`.
    pub fn apply_adjoint(&self, m: &LieElement) -> Result<LieElement> {
        debug_assert!(self.is_over_f());
        let b = [
            [self.e[0][0].body, self.e[0][1].body],
            [self.e[1][0].body, self.e[1][1].body],
        ];
        let det = b[0][0]
            .checked_mul(&b[1][1])?
            .checked_sub(&b[0][1].checked_mul(&b[1][0])?)?;
        if det.is_zero() {
            return Err(ArithError::NonUnit);
        }
        let inv = [
            [b[1][1].checked_div(&det)?, b[0][1].checked_div(&det)?.neg()],
            [b[1][0].checked_div(&det)?.neg(), b[0][0].checked_div(&det)?],
        ];
        let mm = m.entries();
        let mut tmp = [[self.ring.zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let t1 = inv[i][0].checked_mul(&mm[0][j])?;
                let t2 = inv[i][1].checked_mul(&mm[1][j])?;
                tmp[i][j] = t1.checked_add(&t2)?;
            }
        }
        let mut out = [[self.ring.zero(); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let t1 = tmp[i][0].checked_mul(&b[0][j])?;
                let t2 = tmp[i][1].checked_mul(&b[1][j])?;
                out[i][j] = t1.checked_add(&t2)?;
            }
        }
        // conjugation preserves the zero trace; forcing it avoids spurious
        // digit loss from cancellation in the independent diagonal sums
        out[1][1] = out[0][0].neg();
        LieElement::new(out)
    }

    /// Iwasawa normal form of `gK` for `g` over `F`: coordinates `(b, r)` with
    /// `gK = u_b t_{ϖ^r} K`.
    pub fn iwasawa(&self) -> Result<(LocalElement, i32)> {
        debug_assert!(self.is_over_f());
        let mut a = self.e[0][0].body;
        let mut b = self.e[0][1].body;
        let mut c = self.e[1][0].body;
        let mut d = self.e[1][1].body;
        if c.val_or_max() < d.val_or_max() {
            // column swap (right-multiply by w ∈ K)
            core::mem::swap(&mut a, &mut b);
            core::mem::swap(&mut c, &mut d);
        }
        if !c.is_zero() {
            // c1 ← c1 − (c/d)·c2, an integral column operation in K
            let lam = c.checked_div(&d)?.neg();
            a = a.checked_add(&lam.checked_mul(&b)?)?;
            // c + lam·d = 0 exactly
        }
        if a.is_zero() {
            // the determinant forbids this in exact arithmetic
            return Err(ArithError::PrecisionExhausted);
        }
        let r = a.checked_div(&d)?.valuation().expect("nonzero ratio");
        let bcoord = b.checked_div(&d)?;
        Ok((bcoord, r))
    }

    /// The point `u_b t_{ϖ^r} = [[ϖ^r, b],[0,1]]` of `G/K`.
    pub fn point(b: &LocalElement, r: i32) -> Result<Self> {
        let ring = b.ring();
        Self::from_local_entries(
            ring,
            [[ring.uniformizer_pow(r), *b], [ring.zero(), ring.one()]],
        )
    }
}

/// A traceless 2×2 matrix over `F` (an element of 𝔰𝔩₂).
#[derive(Debug, Clone, Copy)]
pub struct LieElement {
    e: [[LocalElement; 2]; 2],
}

impl LieElement {
    pub fn new(e: [[LocalElement; 2]; 2]) -> Result<Self> {
        let tr = e[0][0].checked_add(&e[1][1])?;
        if !tr.is_zero() {
            return Err(ArithError::RingMismatch);
        }
        Ok(LieElement { e })
    }

    /// `m_c = diag(c, −c)` (split regular semisimple).
    pub fn split(c: &LocalElement) -> Self {
        let ring = c.ring();
        LieElement {
            e: [[*c, ring.zero()], [ring.zero(), c.neg()]],
        }
    }

    /// `m_d = [[0,d],[1,0]]` (nonsplit when `d` is not a square).
    pub fn nonsplit(d: &LocalElement) -> Self {
        let ring = d.ring();
        LieElement {
            e: [[ring.zero(), *d], [ring.one(), ring.zero()]],
        }
    }

    /// `m = [[0,1],[0,0]]` (regular nilpotent).
    pub fn nilpotent(ring: LocalRing) -> Self {
        LieElement {
            e: [[ring.zero(), ring.one()], [ring.zero(), ring.zero()]],
        }
    }

    pub fn entries(&self) -> [[LocalElement; 2]; 2] {
        self.e
    }

    pub fn entry(&self, i: usize, j: usize) -> LocalElement {
        self.e[i][j]
    }

    pub fn is_integral(&self) -> bool {
        self.e.iter().flatten().all(|x| x.is_integral())
    }

    /// Multiply all entries by `ϖ^k`.
    pub fn shift_val(&self, k: i32) -> Result<Self> {
        let mut e = self.e;
        for row in &mut e {
            for x in row.iter_mut() {
                *x = x.shift_val(k)?;
            }
        }
        Ok(LieElement { e })
    }

    pub fn det(&self) -> Result<LocalElement> {
        self.e[0][0]
            .checked_mul(&self.e[1][1])?
            .checked_sub(&self.e[0][1].checked_mul(&self.e[1][0])?)
    }

    /// `tr(m·X)`; both arguments traceless so this is
    /// `2·m₁₁X₁₁ + m₁₂X₂₁ + m₂₁X₁₂`.
    pub fn trace_pairing(&self, x: &LieElement) -> Result<LocalElement> {
        let two = self.e[0][0].ring().from_integer(2);
        let t1 = two.checked_mul(&self.e[0][0])?.checked_mul(&x.e[0][0])?;
        let t2 = self.e[0][1].checked_mul(&x.e[1][0])?;
        let t3 = self.e[1][0].checked_mul(&x.e[0][1])?;
        t1.checked_add(&t2)?.checked_add(&t3)
    }
}

impl LocalElement {
    pub fn into_dual(self) -> DualElement {
        DualElement::from_body(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::LocalRing;

    fn r() -> LocalRing {
        LocalRing::new(3, 8)
    }

    #[test]
    fn w_squared_is_identity() {
        let ring = r();
        let w = ProjMatrix::w(ring);
        let ww = w.mul(&w).unwrap();
        assert!(ww.eq_mod_scalars(&ProjMatrix::identity(ring)).unwrap());
    }

    #[test]
    fn theta_transvection_and_antihomomorphism() {
        let ring = r();
        let ux = ProjMatrix::u_local(ring.from_integer(2));
        let th = ux.transpose_theta();
        assert!(th.body(0, 1).is_zero());
        assert_eq!(th.body(1, 0), ring.from_integer(2));
        // θ(gh) = θ(h)θ(g)
        let g = ProjMatrix::w(ring);
        let lhs = g.mul(&ux).unwrap().transpose_theta();
        let rhs = ux.transpose_theta().mul(&g.transpose_theta()).unwrap();
        assert!(lhs.eq_mod_scalars(&rhs).unwrap());
    }

    #[test]
    fn gx_w_gy_equals_gxy_w() {
        let ring = r();
        for x in 0..3 {
            for y in 0..3 {
                let xl = ring.from_integer(x);
                let yl = ring.from_integer(y);
                let gx = ProjMatrix::gx(&xl).unwrap();
                let gy = ProjMatrix::gx(&yl).unwrap();
                let w = ProjMatrix::w(ring);
                let lhs = gx.mul(&w).unwrap().mul(&gy).unwrap();
                let rhs = ProjMatrix::gxy(&xl, &yl).unwrap().mul(&w).unwrap();
                assert!(lhs.eq_mod_scalars(&rhs).unwrap());
            }
        }
    }

    #[test]
    fn semidirect_round_trip() {
        let ring = r();
        // X = [[1, 2],[5, -1]] traceless, h = w·u_2
        let x = LieElement::new([
            [ring.from_integer(1), ring.from_integer(2)],
            [ring.from_integer(5), ring.from_integer(-1)],
        ])
        .unwrap();
        let h = ProjMatrix::w(ring)
            .mul(&ProjMatrix::u_local(ring.from_integer(2)))
            .unwrap();
        // (1+εX)·h
        let one_eps_x = ProjMatrix::from_dual_entries(
            ring,
            [
                [
                    ring.dual(ring.one(), x.entry(0, 0)),
                    ring.dual(ring.zero(), x.entry(0, 1)),
                ],
                [
                    ring.dual(ring.zero(), x.entry(1, 0)),
                    ring.dual(ring.one(), x.entry(1, 1)),
                ],
            ],
        )
        .unwrap();
        let g = one_eps_x.mul(&h).unwrap();
        let (x2, h2) = g.semidirect_decompose().unwrap();
        assert!(h2.eq_mod_scalars(&h).unwrap());
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(x2.entry(i, j), x.entry(i, j));
            }
        }
    }

    #[test]
    fn gx_decomposes_to_diagonal_lie_part() {
        let ring = r();
        let x = ring.from_integer(2);
        let g = ProjMatrix::gx(&x).unwrap();
        let (lie, h) = g.semidirect_decompose().unwrap();
        assert!(h
            .eq_mod_scalars(&ProjMatrix::t_pow(ring, 1).unwrap())
            .unwrap());
        // X = diag(x/2ϖ, −x/2ϖ)
        let expect = x
            .checked_div(&ring.from_integer(2))
            .unwrap()
            .shift_val(-1)
            .unwrap();
        assert_eq!(lie.entry(0, 0), expect);
        assert_eq!(lie.entry(1, 1), expect.neg());
        assert!(lie.entry(0, 1).is_zero());
        assert!(lie.entry(1, 0).is_zero());
    }

    #[test]
    fn membership_examples() {
        let ring = r();
        assert!(ProjMatrix::identity(ring).in_k().unwrap());
        assert!(ProjMatrix::identity(ring).in_k_eps().unwrap());
        let tpi = ProjMatrix::t_pow(ring, 1).unwrap();
        assert!(!tpi.in_k().unwrap());
        assert!(!tpi.in_k_eps().unwrap());
        // u_ε with integral tangent is in K_ε
        let ueps = ProjMatrix::u_eps(ring.one());
        assert!(ueps.in_k_eps().unwrap());
        // u_{εϖ⁻¹} is not
        let bad = ProjMatrix::u_eps(ring.uniformizer_pow(-1));
        assert!(!bad.in_k_eps().unwrap());
    }

    #[test]
    fn k_membership_scale_invariance() {
        let ring = r();
        // ϖ·identity normalizes back to the identity
        let m = ProjMatrix::from_local_entries(
            ring,
            [
                [ring.uniformizer_pow(1), ring.zero()],
                [ring.zero(), ring.uniformizer_pow(1)],
            ],
        )
        .unwrap();
        assert!(m.in_k().unwrap());
        assert!(m.eq_mod_scalars(&ProjMatrix::identity(ring)).unwrap());
    }

    #[test]
    fn adjoint_examples() {
        let ring = r();
        let c = ring.one();
        let mc = LieElement::split(&c);
        // torus conjugation fixes the diagonal m_c
        let t = ProjMatrix::t_pow(ring, 1).unwrap();
        let out = t.apply_adjoint(&mc).unwrap();
        assert_eq!(out.entry(0, 0), mc.entry(0, 0));
        assert!(out.entry(0, 1).is_zero());
        // u_b keeps the nilpotent's (1,2) entry equal to 1
        let m = LieElement::nilpotent(ring);
        let ub = ProjMatrix::u_local(ring.from_integer(2));
        let out = ub.apply_adjoint(&m).unwrap();
        assert_eq!(out.entry(0, 1), ring.one());
        assert!(out.entry(1, 0).is_zero());
    }

    #[test]
    fn iwasawa_round_trip() {
        let ring = r();
        let samples = [
            (ring.from_integer(5), -2),
            (ring.zero(), 3),
            (ring.from_ratio(1, 3), 1),
            (ring.from_integer(1), 0),
        ];
        for (b, rr) in samples {
            let p = ProjMatrix::point(&b, rr).unwrap();
            // scramble by a K element
            let k = ProjMatrix::w(ring)
                .mul(&ProjMatrix::u_local(ring.from_integer(7)))
                .unwrap();
            let g = p.mul(&k).unwrap();
            let (b2, r2) = g.iwasawa().unwrap();
            assert_eq!(r2, rr);
            // coset equality: u_b t K = u_b' t K iff v(b−b') ≥ r
            let diff = b.checked_sub(&b2).unwrap();
            assert!(diff.is_zero() || diff.valuation().unwrap() >= rr);
        }
    }

    #[test]
    fn theta_symmetry_of_named_elements() {
        let ring = r();
        let x = ring.from_integer(1);
        let y = ring.from_integer(2);
        for m in [
            ProjMatrix::gx(&x).unwrap(),
            ProjMatrix::gxy(&x, &y).unwrap(),
            ProjMatrix::hxy(&x, &y).unwrap(),
        ] {
            assert!(m.eq_mod_scalars(&m.transpose_theta()).unwrap());
        }
    }
}
