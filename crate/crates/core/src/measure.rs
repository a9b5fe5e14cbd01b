//! The infinite-dimensional nilpotent case through its finite truncations:
//! closed-form spectral measures of the truncated operators at the cyclic
//! vector `e₀`, exact moments by capped-walk counting, and the semicircle
//! limit with Catalan-number moments.

use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// A finite positive measure given by its atoms.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    /// `(location, weight)`, weights positive
    pub atoms: Vec<(f64, f64)>,
}

impl DiscreteMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|&(_, w)| w).sum()
    }

    /// `∫ f dμ` for a polynomial `f` given by its coefficients, low-to-high.
    pub fn integrate_poly(&self, coeffs: &[f64]) -> f64 {
        self.atoms
            .iter()
            .map(|&(x, w)| {
                let mut acc = 0.0;
                for c in coeffs.iter().rev() {
                    acc = acc * x + c;
                }
                acc * w
            })
            .sum()
    }

    pub fn max_atom_location(&self) -> f64 {
        self.atoms
            .iter()
            .map(|&(x, _)| libm::fabs(x))
            .fold(0.0, f64::max)
    }
}

/// Spectral measure of the `n×n` pure tridiagonal operator (off-diagonal
/// `a`) at `e₀`: atoms `2(1 − cos²(πk/(n+1)))/(n+1)` at `2a·cos(πk/(n+1))`.
pub fn truncated_measure(n: usize, a: f64) -> DiscreteMeasure {
    let atoms = (1..=n)
        .map(|k| {
            let c = libm::cos(core::f64::consts::PI * k as f64 / (n + 1) as f64);
            (2.0 * a * c, 2.0 * (1.0 - c * c) / (n + 1) as f64)
        })
        .collect();
    DiscreteMeasure { atoms }
}

/// Exact `⟨T_nᵏ e₀, e₀⟩` for the truncated operator with off-diagonal `√q`:
/// `q^{k/2}` times the number of nonnegative walks of length `k` from 0 to 0
/// capped at height `n−1`. Zero for odd `k`; for `n > k/2` the cap is
/// inactive and the count is the Catalan number `C_{k/2}`.
pub fn moment_exact(n: usize, k: usize, q: i64) -> BigInt {
    if k % 2 == 1 {
        return BigInt::zero();
    }
    let mut state = alloc::vec![BigInt::zero(); n];
    state[0] = BigInt::one();
    for _ in 0..k {
        let mut next = alloc::vec![BigInt::zero(); n];
        for h in 0..n {
            if state[h].is_zero() {
                continue;
            }
            if h + 1 < n {
                next[h + 1] += &state[h];
            }
            if h >= 1 {
                next[h - 1] += &state[h];
            }
        }
        state = next;
    }
    let count = state[0].clone();
    count * BigInt::from(q).pow((k / 2) as u32)
}

/// Catalan number `C_m`, exactly.
pub fn catalan(m: usize) -> BigInt {
    // C_{m+1} = C_m · 2(2m+1)/(m+2)
    let mut c = BigInt::one();
    for i in 0..m {
        c = c * BigInt::from(2 * (2 * i + 1)) / BigInt::from(i + 2);
    }
    c
}

/// `∫ xᵏ dμ_sc` for the semicircle of scale `a`: `C_{k/2}·a^k` for even
/// `k`, 0 for odd. Returned as the exact integer Catalan coefficient with
/// the caller applying the `a^k` scale.
pub fn semicircle_moment_coefficient(k: usize) -> BigInt {
    if k % 2 == 1 {
        BigInt::zero()
    } else {
        catalan(k / 2)
    }
}

/// `|∫f dμ_n − ∫f dμ_semicircle|` for each truncation size, with the
/// semicircle scale `a = √q`.
pub fn weak_convergence_report(n_list: &[usize], coeffs: &[f64], q: i64) -> Vec<(usize, f64)> {
    let a = libm::sqrt(q as f64);
    let mut limit = 0.0f64;
    for (k, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let coef = bigint_f64(&semicircle_moment_coefficient(k));
        limit += c * coef * libm::pow(a, k as f64);
    }
    n_list
        .iter()
        .map(|&n| {
            let mu = truncated_measure(n, a);
            (n, libm::fabs(mu.integrate_poly(coeffs) - limit))
        })
        .collect()
}

fn bigint_f64(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(f64::INFINITY)
}

/// `e₀` is cyclic for the `n×n` truncation: the Krylov matrix
/// `[e₀, Te₀, …, T^{n−1}e₀]` of the integer-similar form (sub-diagonal `q`,
/// super-diagonal 1) has nonzero exact determinant.
pub fn krylov_cyclic(n: usize, q: i64) -> bool {
    // columns of the Krylov matrix
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    let mut v = alloc::vec![BigInt::zero(); n];
    v[0] = BigInt::one();
    cols.push(v.clone());
    for _ in 1..n {
        let mut next = alloc::vec![BigInt::zero(); n];
        for i in 0..n {
            if v[i].is_zero() {
                continue;
            }
            // integer-similar T: T[i+1][i] = q, T[i−1][i] = 1
            if i + 1 < n {
                next[i + 1] += &v[i] * BigInt::from(q);
            }
            if i >= 1 {
                next[i - 1] += &v[i];
            }
        }
        cols.push(next.clone());
        v = next;
    }
    !bareiss_det(&mut cols).is_zero()
}

/// Fraction-free Gaussian elimination; consumes the column-major matrix.
fn bareiss_det(cols: &mut [Vec<BigInt>]) -> BigInt {
    let n = cols.len();
    let mut sign = 1i64;
    let mut prev = BigInt::one();
    for k in 0..n {
        // pivot
        if cols[k][k].is_zero() {
            let swap = (k + 1..n).find(|&j| !cols[j][k].is_zero());
            match swap {
                Some(j) => {
                    cols.swap(k, j);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        let pivot = cols[k][k].clone();
        for j in k + 1..n {
            for i in k + 1..n {
                let t = (&cols[j][i] * &pivot - &cols[j][k] * &cols[k][i]) / &prev;
                cols[j][i] = t;
            }
            cols[j][k] = BigInt::zero();
        }
        prev = pivot;
    }
    let d = cols[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn small_measures() {
        let mu = truncated_measure(1, 1.0);
        assert_eq!(mu.atoms.len(), 1);
        assert!(libm::fabs(mu.atoms[0].0) < 1e-12);
        assert!(libm::fabs(mu.atoms[0].1 - 1.0) < 1e-12);

        // n=2: atoms at ±a, weights ½
        let a = 1.7;
        let mu = truncated_measure(2, a);
        assert!(libm::fabs(libm::fabs(mu.atoms[0].0) - a) < 1e-12);
        assert!(libm::fabs(mu.atoms[0].1 - 0.5) < 1e-12);
        assert!(libm::fabs(mu.atoms[1].1 - 0.5) < 1e-12);
    }

    #[test]
    fn weights_sum_to_one() {
        for n in [1usize, 2, 10, 100, 10_000] {
            let mu = truncated_measure(n, libm::sqrt(3.0));
            assert!(libm::fabs(mu.total_mass() - 1.0) < 1e-10, "n={n}");
            assert!(mu.atoms.iter().all(|&(_, w)| w > 0.0));
        }
    }

    #[test]
    fn exact_moments_catalan() {
        for q in [3i64, 5] {
            for k in (0..=20).step_by(2) {
                let want = catalan(k / 2) * BigInt::from(q).pow((k / 2) as u32);
                // cap inactive for n > k/2, and independent of n there
                for n in [k / 2 + 1, k / 2 + 2, k + 5] {
                    assert_eq!(moment_exact(n, k, q), want, "q={q} k={k} n={n}");
                }
            }
            for k in (1..=19).step_by(2) {
                assert!(moment_exact(10, k, q).is_zero());
            }
        }
        assert_eq!(catalan(2), BigInt::from(2));
        assert_eq!(catalan(3), BigInt::from(5));
        assert_eq!(catalan(10), BigInt::from(16796));
    }

    #[test]
    fn moments_match_measure_integration() {
        let q = 3i64;
        let a = libm::sqrt(q as f64);
        for n in [3usize, 10, 50] {
            for k in (0..=10).step_by(2) {
                let exact = bigint_f64(&moment_exact(n, k, q));
                let mut coeffs = vec![0.0; k + 1];
                coeffs[k] = 1.0;
                let byint = truncated_measure(n, a).integrate_poly(&coeffs);
                let scale = exact.abs().max(1.0);
                assert!(
                    libm::fabs(exact - byint) / scale < 1e-9,
                    "n={n} k={k}: {exact} vs {byint}"
                );
            }
        }
    }

    #[test]
    fn measure_matches_matrix_powers() {
        // ⟨f(T_n)e₀, e₀⟩ by dense matrix power vs measure integration, for
        // seeded integer polynomials of degree ≤ 6
        let q = 3i64;
        let a = libm::sqrt(q as f64);
        let mut seed = 0x13198a2e03707344u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            ((seed >> 32) % 9) as f64 - 4.0
        };
        for n in [5usize, 40, 200] {
            let mu = truncated_measure(n, a);
            for _ in 0..4 {
                let coeffs: Vec<f64> = (0..=6).map(|_| next()).collect();
                // matrix-vector powers
                let mut v = vec![0.0f64; n];
                v[0] = 1.0;
                let mut acc = coeffs[0];
                for c in coeffs.iter().skip(1) {
                    let mut w = vec![0.0f64; n];
                    for i in 0..n {
                        if i + 1 < n {
                            w[i + 1] += a * v[i];
                        }
                        if i >= 1 {
                            w[i - 1] += a * v[i];
                        }
                    }
                    v = w;
                    acc += c * v[0];
                }
                let byint = mu.integrate_poly(&coeffs);
                assert!(libm::fabs(acc - byint) < 1e-9 * acc.abs().max(1.0), "n={n}");
            }
        }
    }

    #[test]
    fn convergence_and_support() {
        let q = 3i64;
        // f = x²: error vanishes for n ≥ 2
        let rep = weak_convergence_report(&[2, 5, 50], &[0.0, 0.0, 1.0], q);
        for (n, err) in rep {
            assert!(err < 1e-9, "n={n} err={err}");
        }
        // f = x⁸: exact for n > 4
        let rep = weak_convergence_report(&[5, 64, 4096], &[0.0; 8].iter().copied().chain([1.0]).collect::<Vec<_>>(), q);
        for (_, err) in rep {
            assert!(err < 1e-3 * 14.0 * libm::pow(q as f64, 4.0));
        }
        // support of the limit: 2√q within 1e-3 at n = 4096
        let mu = truncated_measure(4096, libm::sqrt(q as f64));
        assert!(libm::fabs(mu.max_atom_location() - 2.0 * libm::sqrt(q as f64)) < 1e-3);
    }

    #[test]
    fn krylov_cyclicity() {
        for q in [3i64, 5] {
            for n in [1usize, 2, 5, 20, 60] {
                assert!(krylov_cyclic(n, q), "q={q} n={n}");
            }
        }
    }
}
