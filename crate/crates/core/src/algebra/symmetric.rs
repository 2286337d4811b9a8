//! Elementary symmetric polynomials and Newton's identities.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{AlgebraError, Coefficient, Polynomial, Ring};

/// `σ_0, …, σ_n` of the given variables, read off from `Π (1 + z_i T)`.
/// `σ_k` for `k > n` is zero and not included.
pub fn elementary_symmetric(ring: &Arc<Ring>, vars: &[&str]) -> Result<Vec<Polynomial>, AlgebraError> {
    let mut sigma = vec![Polynomial::one(ring)];
    for name in vars {
        let z = Polynomial::var(ring, name)?;
        let mut next = sigma.clone();
        next.push(Polynomial::zero(ring));
        for k in 1..next.len() {
            next[k] = &next[k] + &(&sigma[k - 1] * &z);
        }
        sigma = next;
    }
    Ok(sigma)
}

/// Power sum `Σ z_i^k`.
pub fn power_sum(ring: &Arc<Ring>, vars: &[&str], k: u32) -> Result<Polynomial, AlgebraError> {
    let mut out = Polynomial::zero(ring);
    for name in vars {
        out = &out + &Polynomial::var(ring, name)?.pow(k);
    }
    Ok(out)
}

/// Elementary symmetric functions `e_0..e_n` from power sums `p_1..p_n`
/// (`power_sums[0]` is `p_1`) via `k·e_k = Σ_{i=1}^{k} (−1)^{i−1} e_{k−i} p_i`.
pub fn elementary_from_power_sums(ring: &Arc<Ring>, power_sums: &[Polynomial]) -> Vec<Polynomial> {
    let mut e = vec![Polynomial::one(ring)];
    for k in 1..=power_sums.len() {
        let mut acc = Polynomial::zero(ring);
        for i in 1..=k {
            let term = &e[k - i] * &power_sums[i - 1];
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        let inv_k = Coefficient::from_rational(BigRational::new(BigInt::from(1), BigInt::from(k)));
        e.push(acc.scale(&inv_k));
    }
    e
}
