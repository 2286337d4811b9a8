//! Monopole-formula Hilbert series for `GL(2)` and `GL(3)` with `r` adjoint
//! loops and `m` fundamental framings, by lattice enumeration.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::series::{closed_form_equal, series_equal, ClosedForm, SeriesComparison, TruncatedSeries};

/// Largest cap accepted by the enumerator (the coweight box has `(2D+1)^n` points).
pub const MAX_ENUMERATION_CAP: usize = 200;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonopoleError {
    #[error("unsupported rank {0} (expected 2 or 3)")]
    UnsupportedRank(usize),
    #[error("loops and framing must be at least 1")]
    BadMultiplicity,
    #[error("coweight {0:?} is not dominant")]
    NotDominant(Vec<i64>),
    #[error("coweight {got:?} has length {}, expected {expected}", got.len())]
    WrongLength { got: Vec<i64>, expected: usize },
    #[error("cap {cap} exceeds the enumeration bound {MAX_ENUMERATION_CAP}")]
    CapTooLarge { cap: usize },
}

/// Gauge group `GL(rank)` with matter `gl(rank)^⊕loops ⊕ (C^rank)^⊕framing`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GaugeSpec {
    pub rank: usize,
    pub loops: u32,
    pub framing: u32,
}

impl GaugeSpec {
    pub fn new(rank: usize, loops: u32, framing: u32) -> Result<Self, MonopoleError> {
        if !(2..=3).contains(&rank) {
            return Err(MonopoleError::UnsupportedRank(rank));
        }
        if loops == 0 || framing == 0 {
            return Err(MonopoleError::BadMultiplicity);
        }
        Ok(Self { rank, loops, framing })
    }

    /// Nonzero weights of the matter representation with multiplicities:
    /// `framing` copies of each `e_i` and `loops` copies of each root `e_i - e_j`.
    /// The `rank·loops` zero weights contribute nothing to the degree.
    pub fn weights(&self) -> Vec<(Vec<i64>, u32)> {
        let n = self.rank;
        let mut out = Vec::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            out.push((e, self.framing));
        }
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    e[j] = -1;
                    out.push((e, self.loops));
                }
            }
        }
        out
    }
}

fn is_dominant(lambda: &[i64]) -> bool {
    lambda.windows(2).all(|w| w[0] >= w[1])
}

/// Monopole dimension `Σ_χ |⟨χ,λ⟩| − 2 Σ_{α>0} |⟨α,λ⟩|`.
pub fn monopole_degree(lambda: &[i64], spec: &GaugeSpec) -> Result<u64, MonopoleError> {
    if lambda.len() != spec.rank {
        return Err(MonopoleError::WrongLength { got: lambda.to_vec(), expected: spec.rank });
    }
    if !is_dominant(lambda) {
        return Err(MonopoleError::NotDominant(lambda.to_vec()));
    }
    Ok(degree_unchecked(lambda, spec))
}

fn degree_unchecked(lambda: &[i64], spec: &GaugeSpec) -> u64 {
    // Each root pair ±(e_i − e_j) appears `loops` times per sign; the positive
    // roots are subtracted twice.
    let m = spec.framing as i64;
    let r = spec.loops as i64;
    let mut deg: i64 = lambda.iter().map(|n| m * n.abs()).sum();
    for i in 0..lambda.len() {
        for j in i + 1..lambda.len() {
            deg += (2 * r - 2) * (lambda[i] - lambda[j]).abs();
        }
    }
    deg as u64
}

/// Block sizes of the stabilizer Levi `Π GL(k_j)` of a dominant coweight.
pub fn stabilizer_blocks(lambda: &[i64]) -> Vec<usize> {
    let mut blocks = Vec::new();
    let mut i = 0;
    while i < lambda.len() {
        let j = (i..lambda.len()).find(|&j| lambda[j] != lambda[i]).unwrap_or(lambda.len());
        blocks.push(j - i);
        i = j;
    }
    blocks
}

/// `P(t; λ) = Π_j Π_{i=1}^{k_j} (1-t^{2i})^{-1}`.
pub fn classical_factor(lambda: &[i64]) -> Result<ClosedForm, MonopoleError> {
    if !is_dominant(lambda) {
        return Err(MonopoleError::NotDominant(lambda.to_vec()));
    }
    Ok(classical_from_blocks(&stabilizer_blocks(lambda)))
}

fn classical_from_blocks(blocks: &[usize]) -> ClosedForm {
    let dens: Vec<u32> = blocks.iter().flat_map(|&k| (1..=k as u32).map(|i| 2 * i)).collect();
    ClosedForm::inverse_binomials(&dens).expect("positive factors")
}

/// Visits every dominant coweight in the box `|n_i| ≤ cap` with `n_1` fixed.
fn for_each_dominant(n1: i64, rank: usize, cap: i64, f: &mut impl FnMut(&[i64])) {
    let mut lambda = vec![n1; rank];
    fn rec(lambda: &mut Vec<i64>, pos: usize, cap: i64, f: &mut impl FnMut(&[i64])) {
        if pos == lambda.len() {
            f(lambda);
            return;
        }
        let hi = lambda[pos - 1];
        for v in -cap..=hi {
            lambda[pos] = v;
            rec(lambda, pos + 1, cap, f);
        }
    }
    rec(&mut lambda, 1, cap, f);
}

/// `Σ t^{Δ(λ)} P(t; λ)` over dominant coweights accepted by `filter`,
/// truncated at `cap`. Every contributing coweight has `|n_i| ≤ cap` because
/// `Δ(λ) ≥ framing · Σ|n_i|`, so the box enumeration is complete.
pub fn enumerate_filtered<F>(spec: &GaugeSpec, cap: usize, filter: F) -> Result<TruncatedSeries, MonopoleError>
where
    F: Fn(&[i64]) -> bool + Sync,
{
    if cap > MAX_ENUMERATION_CAP {
        return Err(MonopoleError::CapTooLarge { cap });
    }
    let c = cap as i64;
    // Tally coweights by (stabilizer shape, degree); the classical factor
    // depends only on the shape.
    let counts: BTreeMap<(Vec<usize>, usize), u64> = (-c..=c)
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<(Vec<usize>, usize), u64>, n1| {
            for_each_dominant(n1, spec.rank, c, &mut |lambda| {
                if !filter(lambda) {
                    return;
                }
                let deg = degree_unchecked(lambda, spec) as usize;
                if deg <= cap {
                    *acc.entry((stabilizer_blocks(lambda), deg)).or_insert(0) += 1;
                }
            });
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    let mut by_shape: BTreeMap<Vec<usize>, TruncatedSeries> = BTreeMap::new();
    for ((shape, deg), n) in counts {
        let s = by_shape.entry(shape).or_insert_with(|| TruncatedSeries::zero(cap));
        let mut coeffs = s.coeffs().to_vec();
        coeffs[deg] += BigInt::from(n);
        *s = TruncatedSeries::from_coeffs(cap, coeffs);
    }
    let mut total = TruncatedSeries::zero(cap);
    for (shape, lattice) in by_shape {
        let factor = classical_from_blocks(&shape).expand(cap);
        total.add_assign(&lattice.try_mul(&factor).expect("equal caps")).expect("equal caps");
    }
    Ok(total)
}

/// Truncated monopole-formula Hilbert series.
pub fn truncated_hilbert(spec: &GaugeSpec, cap: usize) -> Result<TruncatedSeries, MonopoleError> {
    enumerate_filtered(spec, cap, |_| true)
}

/// `(1 - t^{4r}) / ((1-t^2)^3 (1-t^{2r-1})^2)`.
pub fn closed_form_gl2(r: u32) -> ClosedForm {
    let r = r as usize;
    let k = (2 * r - 1) as u32;
    ClosedForm::from_sparse(&[(0, 1), (4 * r, -1)], &[2, 2, 2, k, k]).expect("positive factors")
}

/// `(1-t^{4r})(1 + t^{4r-2} + 2t^{4r-1} + t^{4r} + t^{8r-2})` over
/// `(1-t^2)(1-t^3)^2(1-t^4)(1-t^{4r-3})^2(1-t^{4r-2})`.
pub fn closed_form_gl3(r: u32) -> ClosedForm {
    let r = r as usize;
    let (a, b) = ((4 * r - 3) as u32, (4 * r - 2) as u32);
    let first = ClosedForm::from_sparse(&[(0, 1), (4 * r, -1)], &[]).expect("no factors");
    let second = ClosedForm::from_sparse(
        &[(0, 1), (4 * r - 2, 1), (4 * r - 1, 2), (4 * r, 1), (8 * r - 2, 1)],
        &[2, 3, 3, 4, a, a, b],
    )
    .expect("positive factors");
    first.mul(&second)
}

/// One summand of the sign-pattern splitting of the monopole sum.
pub struct Region {
    pub label: &'static str,
    pub contains: fn(&[i64]) -> bool,
    /// Contribution of the region including its classical factor.
    pub summand: ClosedForm,
}

fn cf(num: &[(usize, i64)], den: &[u32]) -> ClosedForm {
    ClosedForm::from_sparse(num, den).expect("positive factors")
}

/// The two-plus-three splitting for `GL(2)`, `framing = 1`.
pub fn regions_gl2(r: u32) -> Vec<Region> {
    let k = 2 * r as usize - 1;
    let kk = k as u32;
    vec![
        Region { label: "n1 = n2 >= 0", contains: |l| l[0] == l[1] && l[1] >= 0, summand: cf(&[(0, 1)], &[2, 2, 4]) },
        Region { label: "n1 = n2 < 0", contains: |l| l[0] == l[1] && l[1] < 0, summand: cf(&[(2, 1)], &[2, 2, 4]) },
        Region {
            label: "n1 > n2 >= 0",
            contains: |l| l[0] > l[1] && l[1] >= 0,
            summand: cf(&[(k, 1)], &[2, 2, 2, kk]),
        },
        Region { label: "0 >= n1 > n2", contains: |l| 0 >= l[0] && l[0] > l[1], summand: cf(&[(k, 1)], &[2, 2, 2, kk]) },
        Region { label: "n1 > 0 > n2", contains: |l| l[0] > 0 && 0 > l[1], summand: cf(&[(2 * k, 1)], &[2, 2, kk, kk]) },
    ]
}

/// The two-plus-three-plus-three-plus-five splitting for `GL(3)`, `framing = 1`.
pub fn regions_gl3(r: u32) -> Vec<Region> {
    let r = r as usize;
    let (a, b) = (4 * r - 3, 4 * r - 2);
    let (aa, bb) = (a as u32, b as u32);
    let p3 = classical_from_blocks(&[3]);
    let p2 = classical_from_blocks(&[2, 1]);
    let p1 = classical_from_blocks(&[1, 1, 1]);
    let reg = |label, contains, p: &ClosedForm, lattice: ClosedForm| Region { label, contains, summand: p.mul(&lattice) };
    vec![
        reg("n1 = n2 = n3 >= 0", |l| l[0] == l[2] && l[0] >= 0, &p3, cf(&[(0, 1)], &[3])),
        reg("n1 = n2 = n3 < 0", |l| l[0] == l[2] && l[0] < 0, &p3, cf(&[(3, 1)], &[3])),
        reg("n1 = n2 > n3 >= 0", |l| l[0] == l[1] && l[1] > l[2] && l[2] >= 0, &p2, cf(&[(b, 1)], &[3, bb])),
        reg("0 >= n1 = n2 > n3", |l| l[0] == l[1] && l[1] > l[2] && 0 >= l[0], &p2, cf(&[(a, 1)], &[3, aa])),
        reg("n1 = n2 > 0 > n3", |l| l[0] == l[1] && l[1] > 0 && 0 > l[2], &p2, cf(&[(a + b, 1)], &[aa, bb])),
        reg("n1 > n2 = n3 >= 0", |l| l[0] > l[1] && l[1] == l[2] && l[2] >= 0, &p2, cf(&[(a, 1)], &[3, aa])),
        reg("0 >= n1 > n2 = n3", |l| l[0] > l[1] && l[1] == l[2] && 0 >= l[0], &p2, cf(&[(b, 1)], &[3, bb])),
        reg("n1 > 0 > n2 = n3", |l| l[0] > 0 && 0 > l[1] && l[1] == l[2], &p2, cf(&[(a + b, 1)], &[aa, bb])),
        reg("n1 > n2 > n3 >= 0", |l| l[0] > l[1] && l[1] > l[2] && l[2] >= 0, &p1, cf(&[(a + b, 1)], &[3, aa, bb])),
        reg("0 >= n1 > n2 > n3", |l| 0 >= l[0] && l[0] > l[1] && l[1] > l[2], &p1, cf(&[(a + b, 1)], &[3, aa, bb])),
        reg("n1 > n2 > 0 > n3", |l| l[0] > l[1] && l[1] > 0 && 0 > l[2], &p1, cf(&[(2 * a + b, 1)], &[aa, aa, bb])),
        reg("n1 > 0 > n2 > n3", |l| l[0] > 0 && 0 > l[1] && l[1] > l[2], &p1, cf(&[(2 * a + b, 1)], &[aa, aa, bb])),
        reg("n1 > 0 = n2 > n3", |l| l[0] > 0 && l[1] == 0 && 0 > l[2], &p1, cf(&[(2 * a, 1)], &[aa, aa])),
    ]
}

/// Hilbert series of the Slodowy slice compared against the rank-3, `r = 3`
/// closed form: `(1-t^8)(1-t^12) / ((1-t^2)^3 (1-t^4)^5)`.
pub fn slodowy_reference() -> ClosedForm {
    ClosedForm::from_sparse(&[(0, 1), (8, -1)], &[2, 2, 2, 4, 4, 4, 4, 4])
        .expect("valid factors")
        .mul(&ClosedForm::from_sparse(&[(0, 1), (12, -1)], &[]).expect("valid factors"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionCheck {
    pub label: &'static str,
    pub summand: String,
    pub enumeration: SeriesComparison,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionReport {
    pub regions: Vec<RegionCheck>,
    /// Every dominant coweight in the box lies in exactly one region.
    pub partition: bool,
    /// The summands add up to the closed form exactly.
    pub sum_matches_closed_form: bool,
}

impl RegionReport {
    pub fn all_pass(&self) -> bool {
        self.partition && self.sum_matches_closed_form && self.regions.iter().all(|r| r.enumeration.is_equal())
    }
}

/// Cross-checks the region splitting for `framing = 1`: each summand against
/// the enumeration restricted to its region, and the summands' exact sum
/// against the stated closed form.
pub fn check_regions(rank: usize, r: u32, cap: usize) -> Result<RegionReport, MonopoleError> {
    let spec = GaugeSpec::new(rank, r, 1)?;
    let (regions, total) = match rank {
        2 => (regions_gl2(r), closed_form_gl2(r)),
        _ => (regions_gl3(r), closed_form_gl3(r)),
    };
    let mut checks = Vec::new();
    for reg in &regions {
        let enumerated = enumerate_filtered(&spec, cap, reg.contains)?;
        checks.push(RegionCheck {
            label: reg.label,
            summand: reg.summand.to_string(),
            enumeration: series_equal(&enumerated, &reg.summand.expand(cap)).expect("equal caps"),
        });
    }
    let c = cap as i64;
    let partition = (-c..=c).into_par_iter().all(|n1| {
        let mut ok = true;
        for_each_dominant(n1, rank, c, &mut |l| {
            ok &= regions.iter().filter(|reg| (reg.contains)(l)).count() == 1;
        });
        ok
    });
    let sum = ClosedForm::sum(&regions.iter().map(|r| r.summand.clone()).collect::<Vec<_>>());
    Ok(RegionReport { regions: checks, partition, sum_matches_closed_form: closed_form_equal(&sum, &total) })
}
