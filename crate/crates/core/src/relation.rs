//! The abstract rings `C[x1,x2,y1,y2,w]` and `C[x1,x2,y1,y2,w,z1..zr]` and
//! the relation polynomials both sides of the correspondence are compared in.

use std::sync::Arc;

use crate::algebra::symmetric::elementary_symmetric;
use crate::algebra::{Polynomial, Ring};

pub const GENERATORS: [&str; 5] = ["x1", "x2", "y1", "y2", "w"];

pub fn z_names(r: u32) -> Vec<String> {
    (1..=r).map(|i| format!("z{i}")).collect()
}

/// Generators `x1, x2, y1, y2, w`, then `z1..zr` when flavored.
pub fn relation_ring(r: u32, flavored: bool) -> Arc<Ring> {
    let mut names: Vec<String> = GENERATORS.iter().map(|s| s.to_string()).collect();
    if flavored {
        names.extend(z_names(r));
    }
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Ring::with_names(&refs, &[], None).expect("valid names")
}

fn var(ring: &Arc<Ring>, name: &str) -> Polynomial {
    Polynomial::var(ring, name).expect("generator in ring")
}

/// `w² − 4·x2·y2`.
pub fn discriminant(ring: &Arc<Ring>) -> Polynomial {
    &var(ring, "w").pow(2) - &(&var(ring, "x2") * &var(ring, "y2")).scale_int(4)
}

/// `x1²·y2 + x2·y1² + w·x1·y1`.
pub fn cubic(ring: &Arc<Ring>) -> Polynomial {
    let (x1, x2, y1, y2, w) = (var(ring, "x1"), var(ring, "x2"), var(ring, "y1"), var(ring, "y2"), var(ring, "w"));
    &(&(&x1.pow(2) * &y2) + &(&x2 * &y1.pow(2))) + &(&(&w * &x1) * &y1)
}

/// `(w² − 4x2y2)^e − (x1²y2 + x2y1² + wx1y1)`; the relation uses `e = r`.
pub fn starlet(ring: &Arc<Ring>, exponent: u32) -> Polynomial {
    &discriminant(ring).pow(exponent) - &cubic(ring)
}

/// `σ_0..σ_r` of `z1..zr`.
pub fn sigmas(ring: &Arc<Ring>, r: u32) -> Vec<Polynomial> {
    let names = z_names(r);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    elementary_symmetric(ring, &refs).expect("z variables in ring")
}

/// `Σ_{m+n=2k} (−1)^{mn} σ_m σ_n` with `σ_j = 0` for `j > r`.
pub fn sigma_pair_sum(sigma: &[Polynomial], k: usize) -> Polynomial {
    let ring = sigma[0].ring();
    let mut out = Polynomial::zero(ring);
    for m in 0..=2 * k {
        let n = 2 * k - m;
        if m >= sigma.len() || n >= sigma.len() {
            continue;
        }
        let term = &sigma[m] * &sigma[n];
        out = if (m * n) % 2 == 1 { &out - &term } else { &out + &term };
    }
    out
}

/// `Σ_{k=0}^{kmax} S_k · D^{e−k}` where `S_k` is the σ pair sum of weight `2k`.
fn sigma_series(ring: &Arc<Ring>, r: u32, kmax: u32, e: u32) -> Polynomial {
    let sigma = sigmas(ring, r);
    let d = discriminant(ring);
    let mut out = Polynomial::zero(ring);
    for k in 0..=kmax {
        out = &out + &(&sigma_pair_sum(&sigma, k as usize) * &d.pow(e - k));
    }
    out
}

/// The flavored relation
/// `x1²y2 + x2y1² + wx1y1 − Σ_{m+n even} (−1)^{mn} σ_m σ_n D^{r−(m+n)/2}`.
pub fn flavored_relation(ring: &Arc<Ring>, r: u32) -> Polynomial {
    &cubic(ring) - &sigma_series(ring, r, r, r)
}

/// `Σ_{m+n even, m+n<2r} (−1)^{mn} σ_m σ_n D^{r−1−(m+n)/2}`, the flavored `det B`.
pub fn flavored_det_b(ring: &Arc<Ring>, r: u32) -> Polynomial {
    sigma_series(ring, r, r - 1, r - 1)
}

/// Grading weights on the relation ring: `deg x1 = deg y1 = 2r−1`, every other
/// generator (and each `z_i`) of degree 2.
pub fn grading(ring: &Ring, r: u32) -> Vec<i64> {
    ring.vars()
        .iter()
        .map(|v| if v.name == "x1" || v.name == "y1" { 2 * r as i64 - 1 } else { 2 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unflavored_limit() {
        // With all z set to zero only σ_0 survives.
        let r = 3;
        let ring = relation_ring(r, true);
        let zero: Vec<(String, Polynomial)> = z_names(r).into_iter().map(|z| (z, Polynomial::zero(&ring))).collect();
        let zero: Vec<(&str, Polynomial)> = zero.iter().map(|(n, p)| (n.as_str(), p.clone())).collect();
        let rel = flavored_relation(&ring, r).substitute_poly(&ring, &zero).unwrap();
        assert_eq!(rel, -starlet(&ring, r));
    }

    #[test]
    fn first_pair_sum() {
        let ring = relation_ring(2, true);
        let s = sigma_pair_sum(&sigmas(&ring, 2), 1);
        assert_eq!(s.to_string(), "-z1^2 - z2^2");
    }
}
