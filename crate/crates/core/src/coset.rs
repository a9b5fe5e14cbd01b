//! Coset machinery: representative families for `K_e/(K_e)⁻_{g_x}`, the named
//! double cosets and their classification, and the affine Springer fibers with
//! orbit canonicalization.
//!
//! Conventions (for `L` compact open, `h` in the ambient group):
//! `L_h = L ∩ h⁻¹Lh` (test `h k h⁻¹ ∈ L`) and `L⁻_h = L ∩ hLh⁻¹` (test
//! `h⁻¹ k h ∈ L`); then `L h L = ⊔ k h L` over `k ∈ L/L⁻_h`.

use crate::error::{ArithError, Result};
use crate::local::{LocalElement, LocalRing};
use crate::proj::{LieElement, ProjMatrix};
use alloc::vec;
use alloc::vec::Vec;

/// Tags for the standard representatives of `K_e/(K_e)⁻_{g_x}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepTag {
    /// `u_{z0 + ε z1}`, `z0, z1` mod ϖ.
    U { z0: i64, z1: i64 },
    /// `w·u_{εz}`, `z` mod ϖ.
    WUeps { z: i64 },
}

/// The `q²+q` left-coset representatives of `K_e g_x K_e / K_e`.
pub struct CosetRepFamily {
    pub reps: Vec<(RepTag, ProjMatrix)>,
}

/// `u_y` for `y = z0 + εz1` with `z0, z1 ∈ [0,p)`, then `w·u_{εz}`, `z ∈ [0,p)`.
/// The same set also represents `O_e/(ϖ+εx)O_e` in the `u` part, for any `x`.
pub fn rep_family(ring: LocalRing) -> CosetRepFamily {
    let p = ring.prime();
    let mut reps = Vec::with_capacity((p * p + p) as usize);
    for z0 in 0..p {
        for z1 in 0..p {
            let y = ring.dual(ring.from_integer(z0), ring.from_integer(z1));
            reps.push((RepTag::U { z0, z1 }, ProjMatrix::u(y)));
        }
    }
    let w = ProjMatrix::w(ring);
    for z in 0..p {
        let m = w.mul(&ProjMatrix::u_eps(ring.from_integer(z))).expect("w·u_εz");
        reps.push((RepTag::WUeps { z }, m));
    }
    CosetRepFamily { reps }
}

/// Is `k ∈ (K_e)⁻_{g_x}`, i.e. `g_x⁻¹ k g_x ∈ K_e`?
pub fn in_kminus_gx(k: &ProjMatrix, x: &LocalElement) -> Result<bool> {
    let gx = ProjMatrix::gx(x)?;
    gx.inverse()?.mul(k)?.mul(&gx)?.in_k_eps()
}

/// Is `k ∈ (K_e)_{g_x}`, i.e. `g_x k g_x⁻¹ ∈ K_e`?
pub fn in_kplus_gx(k: &ProjMatrix, x: &LocalElement) -> Result<bool> {
    let gx = ProjMatrix::gx(x)?;
    gx.mul(k)?.mul(&gx.inverse()?)?.in_k_eps()
}

impl CosetRepFamily {
    /// Exact pairwise-inequivalence check: `rᵢ⁻¹rⱼ ∉ (K_e)⁻_{g_x}` for `i≠j`.
    pub fn pairwise_inequivalent(&self, x: &LocalElement) -> Result<bool> {
        for i in 0..self.reps.len() {
            let inv = self.reps[i].1.inverse()?;
            for j in 0..self.reps.len() {
                if i == j {
                    continue;
                }
                if in_kminus_gx(&inv.mul(&self.reps[j].1)?, x)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// The three named double cosets appearing in a product `K_e g_x K_e g_y K_e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DoubleCosetName {
    /// `K_e g_x g_y K_e`.
    GxGy,
    /// `K_e g_{x,y} K_e`.
    Gxy,
    /// `K_e h_{x,y} K_e`.
    Hxy,
}

/// Left-coset representatives of `K_e (g_x g_y) K_e / K_e`: `u_t` over
/// `t ∈ O_e/μO_e` and `w·u_s` over `s` in the maximal ideal of `O_e/μO_e`,
/// where `μ = (ϖ+εx)(ϖ+εy)`; `q⁴ + q³` in total.
pub fn gxgy_left_reps(ring: LocalRing) -> Vec<ProjMatrix> {
    let p = ring.prime();
    let p2 = p * p;
    let mut out = Vec::with_capacity((p2 * p2 + p * p2) as usize);
    for t0 in 0..p2 {
        for t1 in 0..p2 {
            let t = ring.dual(ring.from_integer(t0), ring.from_integer(t1));
            out.push(ProjMatrix::u(t));
        }
    }
    let w = ProjMatrix::w(ring);
    for s0 in 0..p {
        for s1 in 0..p2 {
            let s = ring.dual(ring.from_integer(s0 * p), ring.from_integer(s1));
            out.push(w.mul(&ProjMatrix::u(s)).expect("w·u_s"));
        }
    }
    out
}

/// Left-coset representatives of `K_e g_{x,y} K_e / K_e` for `x ≠ y` in κ:
/// the `q²+q` constant matrices `[v_P | v_Q]` over ordered pairs of distinct
/// points of `P¹(κ)`.  For `x = y` the element is scalar and the single
/// representative is the identity.
pub fn gxy_left_reps(ring: LocalRing, x: i64, y: i64) -> Vec<ProjMatrix> {
    let p = ring.prime();
    if (x - y).rem_euclid(p) == 0 {
        return vec![ProjMatrix::identity(ring)];
    }
    // P¹(κ): (j, 1) for j in [0,p) and (1, 0)
    let mut pts = Vec::with_capacity(p as usize + 1);
    for j in 0..p {
        pts.push((j, 1));
    }
    pts.push((1, 0));
    let mut out = Vec::with_capacity((p * p + p) as usize);
    for &(a, c) in &pts {
        for &(b, d) in &pts {
            if (a * d - b * c).rem_euclid(p) == 0 {
                continue; // same point
            }
            out.push(
                ProjMatrix::from_local_entries(
                    ring,
                    [
                        [ring.from_integer(a), ring.from_integer(b)],
                        [ring.from_integer(c), ring.from_integer(d)],
                    ],
                )
                .expect("unit-determinant constant matrix"),
            );
        }
    }
    out
}

/// Left-coset representatives of `K_e h_{x,x} K_e / K_e`, found by breadth
/// first search on `K_e/(K_e)⁻_{h_{x,x}}` from a generating set of `K_e`.
/// The count comes out as `q² − 1` (forced by convolution-mass conservation).
pub fn hxx_left_reps(ring: LocalRing, x: i64) -> Result<Vec<ProjMatrix>> {
    let p = ring.prime();
    let xl = ring.from_integer(x);
    let h = ProjMatrix::hxy(&xl, &xl)?;
    let hinv = h.inverse()?;
    let same_coset = |a: &ProjMatrix, b: &ProjMatrix| -> Result<bool> {
        // a(K_e)⁻_h = b(K_e)⁻_h  ⟺  h⁻¹ a⁻¹ b h ∈ K_e
        hinv.mul(&a.inverse()?)?.mul(b)?.mul(&h)?.in_k_eps()
    };
    // generators of K_e modulo any open subgroup: elementary transvections
    // over Z + εZ (1 and ε generate additively), w, and enough torus units
    let mut gens: Vec<ProjMatrix> = Vec::new();
    let u1 = ProjMatrix::u_local(ring.one());
    let ue = ProjMatrix::u_eps(ring.one());
    gens.push(u1);
    gens.push(ue);
    gens.push(u1.transpose_theta());
    gens.push(ue.transpose_theta());
    gens.push(ProjMatrix::w(ring));
    for r in 2..p {
        gens.push(ProjMatrix::t_local(ring.from_integer(r))?);
    }
    gens.push(ProjMatrix::t_local(ring.from_integer(1 + p))?);
    gens.push(ProjMatrix::t(ring.dual(ring.one(), ring.one()))?);
    let mut found: Vec<ProjMatrix> = vec![ProjMatrix::identity(ring)];
    let mut frontier: Vec<ProjMatrix> = found.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for g in &gens {
                let cand = g.mul(f)?;
                let mut fresh = true;
                for old in &found {
                    if same_coset(old, &cand)? {
                        fresh = false;
                        break;
                    }
                }
                if fresh {
                    found.push(cand);
                    next.push(cand);
                }
            }
        }
        frontier = next;
    }
    Ok(found)
}

/// Does `v` lie in `K_e d K_e = ⊔ k d K_e` over the given left-coset reps `k`?
pub fn in_double_coset(v: &ProjMatrix, d: &ProjMatrix, reps: &[ProjMatrix]) -> Result<bool> {
    let dinv = d.inverse()?;
    for k in reps {
        if dinv.mul(&k.inverse()?)?.mul(v)?.in_k_eps()? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Precomputed classification data for a fixed pair `(x, y)` in κ.
pub struct CosetClassifier {
    ring: LocalRing,
    x: i64,
    y: i64,
    gxgy: ProjMatrix,
    gxgy_reps: Vec<ProjMatrix>,
    gxy: ProjMatrix,
    gxy_reps: Vec<ProjMatrix>,
    /// present only when `x = y` (otherwise `h_{x,y}` names the same coset)
    hxy: Option<(ProjMatrix, Vec<ProjMatrix>)>,
}

impl CosetClassifier {
    pub fn new(ring: LocalRing, x: i64, y: i64) -> Result<Self> {
        let p = ring.prime();
        let xl = ring.from_integer(x);
        let yl = ring.from_integer(y);
        let gx = ProjMatrix::gx(&xl)?;
        let gy = ProjMatrix::gx(&yl)?;
        let same = (x - y).rem_euclid(p) == 0;
        let hxy = if same {
            let h = ProjMatrix::hxy(&xl, &yl)?;
            Some((h, hxx_left_reps(ring, x)?))
        } else {
            None
        };
        Ok(CosetClassifier {
            ring,
            x,
            y,
            gxgy: gx.mul(&gy)?,
            gxgy_reps: gxgy_left_reps(ring),
            gxy: ProjMatrix::gxy(&xl, &yl)?,
            gxy_reps: gxy_left_reps(ring, x, y),
            hxy,
        })
    }

    pub fn ring(&self) -> LocalRing {
        self.ring
    }

    pub fn x(&self) -> i64 {
        self.x
    }

    pub fn y(&self) -> i64 {
        self.y
    }

    /// The defining element of the named double coset.
    pub fn coset_matrix(&self, name: DoubleCosetName) -> &ProjMatrix {
        match name {
            DoubleCosetName::GxGy => &self.gxgy,
            DoubleCosetName::Gxy => &self.gxy,
            DoubleCosetName::Hxy => match &self.hxy {
                Some((h, _)) => h,
                None => &self.gxy,
            },
        }
    }

    /// Representatives `k` with `K_e d K_e = ⊔ k d K_e`.
    pub fn left_coset_reps(&self, name: DoubleCosetName) -> &[ProjMatrix] {
        match name {
            DoubleCosetName::GxGy => &self.gxgy_reps,
            DoubleCosetName::Gxy => &self.gxy_reps,
            DoubleCosetName::Hxy => match &self.hxy {
                Some((_, reps)) => reps,
                None => &self.gxy_reps,
            },
        }
    }

    pub fn left_coset_count(&self, name: DoubleCosetName) -> usize {
        match name {
            DoubleCosetName::GxGy => self.gxgy_reps.len(),
            DoubleCosetName::Gxy => self.gxy_reps.len(),
            DoubleCosetName::Hxy => match &self.hxy {
                Some((_, reps)) => reps.len(),
                None => self.gxy_reps.len(),
            },
        }
    }

    /// Which named double coset contains `g_x · ℓ · g_y`?
    pub fn classify_product_coset(&self, l: &ProjMatrix) -> Result<DoubleCosetName> {
        let gx = ProjMatrix::gx(&self.ring.from_integer(self.x))?;
        let gy = ProjMatrix::gx(&self.ring.from_integer(self.y))?;
        let v = gx.mul(l)?.mul(&gy)?;
        self.classify(&v)
    }

    /// Which named double coset contains `v`?
    pub fn classify(&self, v: &ProjMatrix) -> Result<DoubleCosetName> {
        if in_double_coset(v, &self.gxgy, &self.gxgy_reps)? {
            return Ok(DoubleCosetName::GxGy);
        }
        if in_double_coset(v, &self.gxy, &self.gxy_reps)? {
            return Ok(DoubleCosetName::Gxy);
        }
        if let Some((h, reps)) = &self.hxy {
            if in_double_coset(v, h, reps)? {
                return Ok(DoubleCosetName::Hxy);
            }
        }
        Err(ArithError::Unclassified)
    }
}

/// `K_e g_{x,y} K_e = K_e h_{x,y} K_e` iff `x ≠ y`, decided by the finite
/// criterion over κ: a matrix `a ∈ GL₂(κ)` with `a₂₁ = a₁₁x`, `a₂₂ = a₁₂y`
/// and `det(a) ≠ 0` exists iff `x ≠ y`.
pub fn gxy_hxy_equal(p: i64, x: i64, y: i64) -> bool {
    for a11 in 0..p {
        for a12 in 0..p {
            let a21 = (a11 * x).rem_euclid(p);
            let a22 = (a12 * y).rem_euclid(p);
            if (a11 * a22 - a12 * a21).rem_euclid(p) != 0 {
                return true;
            }
        }
    }
    false
}

/// The three conjugacy cases of regular `m` with integral determinant.
#[derive(Debug, Clone, Copy)]
pub enum FiberCase {
    /// `m_c = diag(c, −c)`, `v(c) ≥ 0`.
    Split { c: LocalElement },
    /// `m_d = [[0,d],[1,0]]`, `d` a non-square with `v(d) ≥ 0`.
    Nonsplit { d: LocalElement },
    /// `m = [[0,1],[0,0]]`.
    Nilpotent { ring: LocalRing },
}

impl FiberCase {
    pub fn ring(&self) -> LocalRing {
        match self {
            FiberCase::Split { c } => c.ring(),
            FiberCase::Nonsplit { d } => d.ring(),
            FiberCase::Nilpotent { ring } => *ring,
        }
    }

    pub fn m(&self) -> LieElement {
        match self {
            FiberCase::Split { c } => LieElement::split(c),
            FiberCase::Nonsplit { d } => LieElement::nonsplit(d),
            FiberCase::Nilpotent { ring } => LieElement::nilpotent(*ring),
        }
    }

    /// Is `g` in the centralizer `Z_G(m)` (as a subgroup of `PGL₂`)?
    pub fn in_centralizer(&self, g: &ProjMatrix) -> Result<bool> {
        match self {
            FiberCase::Split { .. } => Ok(g.body(0, 1).is_zero() && g.body(1, 0).is_zero()),
            FiberCase::Nonsplit { d } => {
                // shape [[t, ds],[s, t]] up to scalar; relations are homogeneous
                let t_eq = g.body(0, 0) == g.body(1, 1);
                let ds = d.checked_mul(&g.body(1, 0))?;
                Ok(t_eq && g.body(0, 1) == ds)
            }
            FiberCase::Nilpotent { .. } => {
                Ok(g.body(1, 0).is_zero() && g.body(0, 0) == g.body(1, 1))
            }
        }
    }
}

/// A point `u_b t_{ϖ^r} K` of the fiber `A_m`.
#[derive(Debug, Clone, Copy)]
pub struct SpringerPoint {
    pub case: FiberCase,
    pub b: LocalElement,
    pub r: i32,
}

/// The result of moving a fiber point to its `Z_G(m)`-orbit representative.
#[derive(Debug, Clone, Copy)]
pub struct CanonicalOrbit {
    /// Representative index: split `u_{ϖ^{−r'}}K` with `r' ≥ 0`; nonsplit
    /// `t_{ϖ^{r'}}K` with `0 ≤ r' ≤ ⌊v(d)/2⌋`; nilpotent `t_{ϖ^{−r'}}K`,
    /// `r' ≥ 0`.
    pub rep_index: i32,
    /// `z ∈ Z_G(m)` with `z · rep = point` (as cosets).
    pub witness: ProjMatrix,
    /// Nonsplit only: whether the reflection `t_{ϖ^{v(d)−r}}K = w t_{d⁻¹}·t_{ϖ^r}K`
    /// was used.
    pub reflected: bool,
}

impl SpringerPoint {
    pub fn new(case: FiberCase, b: LocalElement, r: i32) -> Self {
        SpringerPoint { case, b, r }
    }

    /// The matrix `u_b t_{ϖ^r}` of the point.
    pub fn matrix(&self) -> Result<ProjMatrix> {
        ProjMatrix::point(&self.b, self.r)
    }

    /// The closed-form membership constraint of the fiber lemma for this case.
    pub fn in_fiber_closed_form(&self) -> bool {
        match &self.case {
            FiberCase::Split { c } => {
                let vc = c.valuation().expect("c nonzero");
                self.b.val_or_max() as i64 >= self.r as i64 - vc as i64
            }
            FiberCase::Nonsplit { d } => {
                let vd = d.valuation().expect("d nonzero");
                self.r >= 0
                    && self.r <= vd
                    && 2i64 * self.b.val_or_max().min(i32::MAX / 2) as i64 >= self.r as i64
            }
            FiberCase::Nilpotent { .. } => self.r <= 0,
        }
    }

    /// The matrix representative of the orbit with the given index.
    pub fn orbit_rep_matrix(case: &FiberCase, rep_index: i32) -> Result<ProjMatrix> {
        let ring = case.ring();
        match case {
            FiberCase::Split { .. } => {
                Ok(ProjMatrix::u_local(ring.uniformizer_pow(-rep_index)))
            }
            FiberCase::Nonsplit { .. } => ProjMatrix::t_pow(ring, rep_index),
            FiberCase::Nilpotent { .. } => ProjMatrix::t_pow(ring, -rep_index),
        }
    }

    /// Move the point to its orbit representative, with an exact witness.
    pub fn orbit_canonicalize(&self) -> Result<CanonicalOrbit> {
        if !self.in_fiber_closed_form() {
            return Err(ArithError::NotInFiber);
        }
        let ring = self.case.ring();
        match &self.case {
            FiberCase::Split { .. } => {
                let vb = self.b.val_or_max();
                if vb >= self.r {
                    // u_b t_{ϖ^r} K = t_{ϖ^r} K, which is the r' = 0 orbit
                    Ok(CanonicalOrbit {
                        rep_index: 0,
                        witness: ProjMatrix::t_pow(ring, self.r)?,
                        reflected: false,
                    })
                } else {
                    // z = t_{ϖ^j b}, j = r − v(b): z·u_{ϖ^{−j}}K = u_b t_{ϖ^r}K
                    let j = self.r - vb;
                    let s = self.b.shift_val(j)?;
                    Ok(CanonicalOrbit {
                        rep_index: j,
                        witness: ProjMatrix::t_local(s)?,
                        reflected: false,
                    })
                }
            }
            FiberCase::Nonsplit { d } => {
                let vd = d.valuation().expect("d nonzero");
                let vd2 = vd / 2;
                // stage 1: eliminate b
                let (r1, z1) = if self.b.val_or_max() >= self.r {
                    // u_b t_{ϖ^r} K = t_{ϖ^r} K already
                    (self.r, ProjMatrix::identity(ring))
                } else {
                    let vb = self.b.valuation().expect("b nonzero here");
                    let r0 = (2 * vb).min(vd);
                    let sh = self.r - r0;
                    let bs = self.b.shift_val(sh)?;
                    let ds = d.shift_val(sh)?;
                    let ss = ring.uniformizer_pow(sh);
                    let z1 = ProjMatrix::from_local_entries(ring, [[bs, ds], [ss, bs]])?;
                    (r0 - self.r, z1)
                };
                // stage 2: reflect into [0, ⌊v(d)/2⌋] if needed
                if r1 > vd2 {
                    let wt = ProjMatrix::w(ring)
                        .mul(&ProjMatrix::t_local(d.checked_inv()?)?)?;
                    Ok(CanonicalOrbit {
                        rep_index: vd - r1,
                        witness: z1.mul(&wt)?,
                        reflected: true,
                    })
                } else {
                    Ok(CanonicalOrbit {
                        rep_index: r1,
                        witness: z1,
                        reflected: false,
                    })
                }
            }
            FiberCase::Nilpotent { .. } => Ok(CanonicalOrbit {
                rep_index: -self.r,
                witness: ProjMatrix::u_local(self.b),
                reflected: false,
            }),
        }
    }
}

/// Membership `gK ∈ A_m`: integrality of `g⁻¹ m g`.
pub fn springer_membership(g: &ProjMatrix, m: &LieElement) -> Result<bool> {
    Ok(g.apply_adjoint(m)?.is_integral())
}

/// Do `g₁K = g₂K` in `G/K`?
pub fn same_coset(g1: &ProjMatrix, g2: &ProjMatrix) -> Result<bool> {
    g1.inverse()?.mul(g2)?.in_k()
}

/// The nonsplit orbit invariant: the smallest `ℓ ≥ 0` with
/// `ϖ^{−ℓ−1}·g⁻¹ m_d g ∉ 𝔤_O`, i.e. the minimum entry valuation of `g⁻¹ m_d g`.
pub fn nonsplit_depth_invariant(g: &ProjMatrix, d: &LocalElement) -> Result<i32> {
    let adj = g.apply_adjoint(&LieElement::nonsplit(d))?;
    if !adj.is_integral() {
        return Err(ArithError::NotInFiber);
    }
    let mut vmin = i32::MAX;
    for i in 0..2 {
        for j in 0..2 {
            vmin = vmin.min(adj.entry(i, j).val_or_max());
        }
    }
    debug_assert!(vmin < i32::MAX, "conjugate of m_d is nonzero");
    Ok(vmin)
}

/// Samples the asserted stabilizer subgroup of the orbit representative and
/// (where the stabilizer is proper) a boundary element just outside it,
/// confirming fix / non-fix of the representative coset.
pub fn stabilizer_conductor_check(case: &FiberCase, r: i32) -> Result<bool> {
    let ring = case.ring();
    let rep = SpringerPoint::orbit_rep_matrix(case, r)?;
    let fixes = |z: &ProjMatrix| -> Result<bool> { same_coset(&z.mul(&rep)?, &rep) };
    match case {
        FiberCase::Split { .. } => {
            // stabilizer T_(r)
            let mut stab: Vec<ProjMatrix> = Vec::new();
            if r == 0 {
                for u in 1..ring.prime() {
                    stab.push(ProjMatrix::t_local(ring.from_integer(u))?);
                }
            } else {
                for u in 0..3 {
                    let s = ring
                        .one()
                        .checked_add(&ring.from_integer(u).shift_val(r)?)?;
                    stab.push(ProjMatrix::t_local(s)?);
                }
            }
            for z in &stab {
                if !fixes(z)? {
                    return Ok(false);
                }
            }
            // boundary: T_(r−1) ∖ T_(r) moves the representative
            let boundary = if r == 0 {
                ProjMatrix::t_pow(ring, 1)?
            } else {
                ProjMatrix::t_local(ring.one().checked_add(&ring.uniformizer_pow(r - 1))?)?
            };
            Ok(!fixes(&boundary)?)
        }
        FiberCase::Nonsplit { d } => {
            let vd = d.valuation().expect("d nonzero");
            let vd2 = vd / 2;
            let z_of_s = |s: LocalElement| -> Result<ProjMatrix> {
                ProjMatrix::from_local_entries(
                    ring,
                    [[ring.one(), d.checked_mul(&s)?], [s, ring.one()]],
                )
            };
            // stabilizer Z_G(m_d)_(⌊v(d)/2⌋−r): elements with v(s) ≥ −r,
            // plus everything when v(d) is even and r = ⌊v(d)/2⌋
            for u in 1..3 {
                let s = ring.from_integer(u).shift_val(-r)?;
                if !fixes(&z_of_s(s)?)? {
                    return Ok(false);
                }
            }
            if vd % 2 == 0 && r == vd2 {
                // full stabilizer: even the torsion-like element fixes it
                let wt = ProjMatrix::w(ring).mul(&ProjMatrix::t_local(d.checked_inv()?)?)?;
                return fixes(&wt);
            }
            // boundary: v(s) = −r−1 moves the representative
            let s = ring.uniformizer_pow(-r - 1);
            Ok(!fixes(&z_of_s(s)?)?)
        }
        FiberCase::Nilpotent { .. } => {
            // stabilizer U_(−r)
            for u in 1..3 {
                let s = ring.from_integer(u).shift_val(-r)?;
                if !fixes(&ProjMatrix::u_local(s))? {
                    return Ok(false);
                }
            }
            let s = ring.uniformizer_pow(-r - 1);
            Ok(!fixes(&ProjMatrix::u_local(s))?)
        }
    }
}
