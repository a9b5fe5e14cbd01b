//! Convolution structure constants of the elements `T_x = q⁻¹·ch_{K_e g_x K_e}`
//! by exact pair counting, and the resulting products `T_x ⋆ T_y`.

use crate::coset::DoubleCosetName;
use crate::error::Result;
use crate::local::{LocalElement, LocalRing};
use crate::proj::ProjMatrix;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;

/// The probe element `k` at which `(ch ⋆ ch)(g_x k g_y)` is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeK {
    One,
    W,
    WUeps,
}

impl ProbeK {
    pub fn matrix(&self, ring: LocalRing) -> ProjMatrix {
        match self {
            ProbeK::One => ProjMatrix::identity(ring),
            ProbeK::W => ProjMatrix::w(ring),
            ProbeK::WUeps => ProjMatrix::w(ring)
                .mul(&ProjMatrix::u_eps(ring.one()))
                .expect("w·u_ε"),
        }
    }
}

/// `(ch_{K_e g_x K_e} ⋆ ch_{K_e g_y K_e})(g_x k g_y)`: the number of pairs
/// `(a, b)`, `a` over `K_e/(K_e)⁻_{g_x}` and `b` over `(K_e)_{g_y}\K_e`, with
/// `(g_y b g_y⁻¹)·k⁻¹·(g_x⁻¹ a g_x) ∈ K_e`.
///
/// The `a`-family is `{u_{z₁}} ∪ {w·u_{εz₁}}` and the `b`-family its image
/// under the transpose θ.
pub fn structure_count(x: &LocalElement, y: &LocalElement, k: ProbeK) -> Result<u64> {
    let ring = x.ring();
    let p = ring.prime();
    let gx = ProjMatrix::gx(x)?;
    let gy = ProjMatrix::gx(y)?;
    let gx_inv = gx.inverse()?;
    let gy_inv = gy.inverse()?;
    let kinv = k.matrix(ring).inverse()?;

    let mut a_fam: Vec<ProjMatrix> = Vec::new();
    let w = ProjMatrix::w(ring);
    for z0 in 0..p {
        for z1 in 0..p {
            let z = ring.dual(ring.from_integer(z0), ring.from_integer(z1));
            a_fam.push(ProjMatrix::u(z));
        }
    }
    for z in 0..p {
        a_fam.push(w.mul(&ProjMatrix::u_eps(ring.from_integer(z)))?);
    }
    let b_fam: Vec<ProjMatrix> = a_fam.iter().map(|m| m.transpose_theta()).collect();

    // precompute the conjugated factors
    let right: Vec<ProjMatrix> = a_fam
        .iter()
        .map(|a| gx_inv.mul(a)?.mul(&gx))
        .collect::<Result<_>>()?;
    let left: Vec<ProjMatrix> = b_fam
        .iter()
        .map(|b| gy.mul(b)?.mul(&gy_inv))
        .collect::<Result<_>>()?;

    let mut count = 0u64;
    for l in &left {
        let lk = l.mul(&kinv)?;
        for r in &right {
            if lk.mul(r)?.in_k_eps()? {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// A finite rational combination of named double cosets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeckeElement {
    pub coeffs: BTreeMap<DoubleCosetName, BigRational>,
}

impl HeckeElement {
    pub fn coeff(&self, name: DoubleCosetName) -> BigRational {
        self.coeffs
            .get(&name)
            .cloned()
            .unwrap_or_else(|| BigRational::from_integer(BigInt::from(0)))
    }
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `T_x ⋆ T_y = q⁻²·Σ_k n_k·ch_{coset(k)}`, assembled from the exact counts.
/// When `x ≠ y` in κ the `h_{x,y}` coset coincides with the `g_{x,y}` one and
/// the product is supported on two names only.
pub fn convolve_t(x: &LocalElement, y: &LocalElement) -> Result<HeckeElement> {
    let ring = x.ring();
    let q = ring.prime();
    let q2 = q * q;
    let same = kappa_equal(x, y);
    let n1 = structure_count(x, y, ProbeK::One)?;
    let nw = structure_count(x, y, ProbeK::W)?;
    let mut coeffs = BTreeMap::new();
    coeffs.insert(DoubleCosetName::GxGy, ratio(n1 as i64, q2));
    coeffs.insert(DoubleCosetName::Gxy, ratio(nw as i64, q2));
    if same {
        let nwu = structure_count(x, y, ProbeK::WUeps)?;
        coeffs.insert(DoubleCosetName::Hxy, ratio(nwu as i64, q2));
    }
    Ok(HeckeElement { coeffs })
}

/// Do the lifts `x`, `y` reduce to the same element of κ?
pub fn kappa_equal(x: &LocalElement, y: &LocalElement) -> bool {
    match x.checked_sub(y) {
        Ok(d) => d.is_zero() || d.valuation().unwrap_or(0) >= 1,
        Err(_) => false,
    }
}
