//! Suite configuration and the check scheduler.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::Value;
use thiserror::Error;

use multiloop_core::check::{all, Outcome};
use multiloop_core::coulomb::{self, EtaleChart, HananyRescaling, NegativeControl, SignFlip, Sl2Element};
use multiloop_core::monopole::{
    check_regions, closed_form_gl2, closed_form_gl3, slodowy_reference, truncated_hilbert, GaugeSpec, MAX_ENUMERATION_CAP,
};
use multiloop_core::relation;
use multiloop_core::series::{ci_diagnostic, series_equal, CiDiagnostic, ClosedForm, SeriesComparison};
use multiloop_core::slice::{check_structure, flavored_slice_relation, slice_relation, SliceContext};

use crate::golden;
use crate::report::{CheckReport, Format};

/// Largest `r` the suite accepts.
pub const MAX_R: u32 = 8;
/// Degree bound for the Slodowy-slice comparison.
pub const SLODOWY_BOUND: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Hilbert,
    Regions,
    Ci,
    Slodowy,
    Structure,
    Trace,
    SliceFlavor,
    Starlet,
    Redundancy,
    Poifo,
    Jacobi,
    Grading,
    Hanany,
    Sl2,
    Flavor,
    Sigma,
    Controls,
}

impl Check {
    pub const ALL: [Check; 17] = [
        Check::Hilbert,
        Check::Regions,
        Check::Ci,
        Check::Slodowy,
        Check::Structure,
        Check::Trace,
        Check::SliceFlavor,
        Check::Starlet,
        Check::Redundancy,
        Check::Poifo,
        Check::Jacobi,
        Check::Grading,
        Check::Hanany,
        Check::Sl2,
        Check::Flavor,
        Check::Sigma,
        Check::Controls,
    ];
    pub const SLICE: [Check; 3] = [Check::Structure, Check::Trace, Check::SliceFlavor];
    pub const COULOMB: [Check; 10] = [
        Check::Starlet,
        Check::Redundancy,
        Check::Poifo,
        Check::Jacobi,
        Check::Grading,
        Check::Hanany,
        Check::Sl2,
        Check::Flavor,
        Check::Sigma,
        Check::Controls,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Hilbert => "hilbert",
            Check::Regions => "regions",
            Check::Ci => "ci",
            Check::Slodowy => "slodowy",
            Check::Structure => "structure",
            Check::Trace => "trace",
            Check::SliceFlavor => "slice_flavor",
            Check::Starlet => "starlet",
            Check::Redundancy => "redundancy",
            Check::Poifo => "poifo",
            Check::Jacobi => "jacobi",
            Check::Grading => "grading",
            Check::Hanany => "hanany",
            Check::Sl2 => "sl2",
            Check::Flavor => "flavor",
            Check::Sigma => "sigma",
            Check::Controls => "controls",
        }
    }

    /// Checks that only run when the suite is flavored.
    pub fn is_flavored(self) -> bool {
        matches!(self, Check::SliceFlavor | Check::Flavor)
    }
}

impl FromStr for Check {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| SuiteError::UnknownCheck(s.to_string()))
    }
}

/// Parses a comma-separated check list.
pub fn parse_checks(s: &str) -> Result<BTreeSet<Check>, SuiteError> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(Check::from_str).collect()
}

pub fn parse_control(s: &str) -> Result<NegativeControl, SuiteError> {
    NegativeControl::all().into_iter().find(|c| c.name() == s).ok_or_else(|| SuiteError::UnknownControl(s.to_string()))
}

pub fn parse_rescaling(s: &str) -> Result<HananyRescaling, SuiteError> {
    match s {
        "stated" => Ok(HananyRescaling::Stated),
        "derived" => Ok(HananyRescaling::Derived),
        other => Err(SuiteError::BadValue { key: "hanany_rescaling".into(), value: other.into() }),
    }
}

/// `"3"` or `"2..4"` (inclusive).
pub fn parse_range(s: &str) -> Result<(u32, u32), SuiteError> {
    let bad = || SuiteError::BadValue { key: "r".into(), value: s.into() };
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let r = s.trim().parse().map_err(|_| bad())?;
            (r, r)
        }
    };
    Ok((lo, hi))
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("invalid r range {0}..{1} (need 1 <= r_min <= r_max <= {MAX_R})")]
    InvalidRange(u32, u32),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("unknown negative control `{0}`")]
    UnknownControl(String),
    #[error("invalid value `{value}` for `{key}`")]
    BadValue { key: String, value: String },
    #[error("unsupported gauge rank {0} (expected 2 or 3)")]
    UnsupportedRank(usize),
    #[error("truncation {0} exceeds the enumeration cap {MAX_ENUMERATION_CAP}")]
    TruncationTooLarge(usize),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub r_min: u32,
    pub r_max: u32,
    /// Gauge ranks for the Hilbert-series checks.
    pub ranks: Vec<usize>,
    pub flavored: bool,
    pub truncate: usize,
    pub checks: BTreeSet<Check>,
    pub format: Format,
    pub golden_dir: Option<PathBuf>,
    pub bless: bool,
    pub timings: bool,
    pub hanany: HananyRescaling,
    /// Corruption injected into the affected checks.
    pub inject: Option<NegativeControl>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            r_min: 2,
            r_max: 3,
            ranks: vec![2, 3],
            flavored: true,
            truncate: multiloop_core::series::DEFAULT_CAP,
            checks: Check::ALL.into_iter().collect(),
            format: Format::Text,
            golden_dir: None,
            bless: false,
            timings: false,
            hanany: HananyRescaling::Derived,
            inject: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), SuiteError> {
        if self.r_min < 1 || self.r_min > self.r_max || self.r_max > MAX_R {
            return Err(SuiteError::InvalidRange(self.r_min, self.r_max));
        }
        if let Some(&rank) = self.ranks.iter().find(|&&k| k != 2 && k != 3) {
            return Err(SuiteError::UnsupportedRank(rank));
        }
        if self.truncate > MAX_ENUMERATION_CAP {
            return Err(SuiteError::TruncationTooLarge(self.truncate));
        }
        Ok(())
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), SuiteError> {
        let bad = || SuiteError::BadValue { key: key.into(), value: value.into() };
        let parse_bool = |v: &str| match v {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            _ => Err(bad()),
        };
        match key {
            "r" => (self.r_min, self.r_max) = parse_range(value)?,
            "r_min" => self.r_min = value.parse().map_err(|_| bad())?,
            "r_max" => self.r_max = value.parse().map_err(|_| bad())?,
            "ranks" => {
                self.ranks = value.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
            }
            "flavored" => self.flavored = parse_bool(value)?,
            "truncate" => self.truncate = value.parse().map_err(|_| bad())?,
            "checks" => self.checks = parse_checks(value)?,
            "format" => self.format = value.parse().map_err(|_| bad())?,
            "golden_dir" => self.golden_dir = Some(PathBuf::from(value)),
            "bless" => self.bless = parse_bool(value)?,
            "timings" => self.timings = parse_bool(value)?,
            "hanany_rescaling" => self.hanany = parse_rescaling(value)?,
            "inject" => self.inject = Some(parse_control(value)?),
            _ => return Err(SuiteError::BadValue { key: "key".into(), value: key.into() }),
        }
        Ok(())
    }
}

type Params = BTreeMap<String, Value>;

struct Job {
    check: Check,
    params: Params,
    run: Box<dyn Fn() -> CheckReport + Send + Sync>,
}

fn params(pairs: &[(&str, Value)]) -> Params {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Sort key: check name, then parameters with numbers padded so that they
/// compare numerically.
fn sort_key(job: &Job) -> (&'static str, Vec<(String, String)>) {
    let p = job
        .params
        .iter()
        .map(|(k, v)| {
            let text = match v {
                Value::Number(n) => format!("{:>12}", n),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            (k.clone(), text)
        })
        .collect();
    (job.check.name(), p)
}

fn report(check: Check, params: &Params, result: Result<Outcome, String>) -> CheckReport {
    match result {
        Ok(o) => CheckReport::from_outcome(check.name(), params.clone(), o),
        Err(e) => CheckReport::error(check.name(), params.clone(), e),
    }
}

fn closed_form(rank: usize, r: u32) -> ClosedForm {
    if rank == 2 {
        closed_form_gl2(r)
    } else {
        closed_form_gl3(r)
    }
}

fn hilbert_check(rank: usize, r: u32, cap: usize) -> Result<Outcome, String> {
    let spec = GaugeSpec::new(rank, r, 1).map_err(|e| e.to_string())?;
    let s = truncated_hilbert(&spec, cap).map_err(|e| e.to_string())?;
    let cf = closed_form(rank, r);
    let cmp = series_equal(&s, &cf.expand(cap)).map_err(|e| e.to_string())?;
    let out = match cmp {
        SeriesComparison::Equal => Outcome::pass(),
        SeriesComparison::Mismatch { degree, left, right } => {
            Outcome::fail(format!("degree {degree}: enumeration {left}, closed form {right}"))
        }
    };
    Ok(out.with("closed_form", cf.to_string()))
}

fn regions_check(rank: usize, r: u32, cap: usize) -> Result<Outcome, String> {
    let rep = check_regions(rank, r, cap).map_err(|e| e.to_string())?;
    let mut out = Outcome::expect(rep.partition, || "regions do not partition the dominant coweights".into())
        .require(rep.sum_matches_closed_form, || "summands do not add up to the closed form".into());
    for reg in &rep.regions {
        if let SeriesComparison::Mismatch { degree, left, right } = &reg.enumeration {
            out = out.and(Outcome::fail(format!("region {}: degree {degree}: enumeration {left}, summand {right}", reg.label)));
        }
    }
    Ok(out.with("regions", rep.regions.len()))
}

fn ci_check(rank: usize, r: u32) -> Outcome {
    let diag = ci_diagnostic(&closed_form(rank, r));
    let ok = match (&diag, rank) {
        (CiDiagnostic::CompleteIntersectionShape { numerator_factors, .. }, 2) => numerator_factors == &[4 * r],
        (CiDiagnostic::Obstruction { .. }, 3) => true,
        _ => false,
    };
    let value = serde_json::to_value(&diag).expect("diagnostic serializes");
    Outcome::expect(ok, || format!("unexpected diagnostic {value}")).with("diagnostic", value)
}

fn slodowy_check() -> Outcome {
    let cmp = series_equal(&closed_form_gl3(3).expand(SLODOWY_BOUND), &slodowy_reference().expand(SLODOWY_BOUND))
        .expect("equal caps");
    match cmp {
        SeriesComparison::Mismatch { degree, left, right } => Outcome::pass()
            .with("first_mismatch_degree", degree)
            .with("coulomb", left)
            .with("slodowy", right),
        SeriesComparison::Equal => Outcome::fail(format!("series agree through degree {SLODOWY_BOUND}")),
    }
}

fn slice_trace(r: u32) -> Result<Outcome, String> {
    let ctx = SliceContext::new(r).map_err(|e| e.to_string())?;
    let rel = slice_relation(&ctx).map_err(|e| e.to_string())?;
    let ring = relation::relation_ring(r, false);
    let expected = -relation::starlet(&ring, r);
    let diff = &rel.relation - &expected;
    Ok(rel.outcome.require(diff.is_zero(), || format!("slice relation + Coulomb relation = {diff}")))
}

fn slice_flavor(r: u32) -> Result<Outcome, String> {
    let ctx = SliceContext::new(r).map_err(|e| e.to_string())?;
    let rel = flavored_slice_relation(&ctx).map_err(|e| e.to_string())?;
    let ring = relation::relation_ring(r, true);
    let diff = &rel.relation - &relation::flavored_relation(&ring, r);
    Ok(rel.outcome.require(diff.is_zero(), || format!("slice relation − flavored relation = {diff}")))
}

fn controls_check(r: u32, flavored: bool) -> Result<Outcome, String> {
    let mut charts = vec![EtaleChart::new(r, false).map_err(|e| e.to_string())?];
    if flavored && r >= 2 {
        charts.push(EtaleChart::new(r, true).map_err(|e| e.to_string())?);
    }
    let mut out = Outcome::pass();
    let mut caught = Vec::new();
    for chart in &charts {
        let controls: Vec<NegativeControl> = if chart.is_flavored() {
            SignFlip::ALL.iter().map(|&f| NegativeControl::Flip(f)).collect()
        } else {
            NegativeControl::all()
        };
        for control in controls {
            let label = format!("{}{}", if chart.is_flavored() { "flavored_" } else { "" }, control.name());
            let o = coulomb::run_negative_control(chart, control).map_err(|e| e.to_string())?;
            if o.passed || o.witness.is_none() {
                out = out.and(Outcome::fail(format!("negative control {label} was not detected")));
            } else {
                caught.push(Value::from(label));
            }
        }
    }
    Ok(out.with("caught", Value::Array(caught)))
}

fn map_err<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn coulomb_job(check: Check, r: u32, config: &SuiteConfig) -> Option<Job> {
    let inject = config.inject;
    let flavored = config.flavored;
    let hanany = config.hanany;
    let mut p = params(&[("r", Value::from(r))]);
    let injected_here = match (check, inject) {
        (Check::Starlet, Some(NegativeControl::Flip(_) | NegativeControl::ExponentUp | NegativeControl::ExponentDown)) => inject,
        (Check::Flavor, Some(NegativeControl::Flip(_))) => inject,
        (Check::Redundancy, Some(NegativeControl::PrintedRedundancySign)) => inject,
        _ => None,
    };
    if let Some(c) = injected_here {
        p.insert("mutation".into(), Value::from(c.name()));
    }
    if check == Check::Hanany {
        p.insert("rescaling".into(), Value::from(hanany.name()));
    }
    if check == Check::Flavor && r < 2 {
        return Some(Job {
            check,
            params: p.clone(),
            run: Box::new(move || CheckReport::skipped(check.name(), p.clone(), "flavored constructions need r >= 2")),
        });
    }
    let job_params = p.clone();
    let run = move || -> CheckReport {
        let result: Result<Outcome, String> = (|| {
            let plain = || map_err(EtaleChart::new(r, false));
            Ok(match check {
                Check::Starlet => match injected_here {
                    Some(c) => map_err(coulomb::run_negative_control(&plain()?, c))?,
                    None => map_err(coulomb::check_relation_starlet(&plain()?))?
                        .and(coulomb::check_regularity(&plain()?, &coulomb::build_generators(&plain()?))),
                },
                Check::Redundancy => match injected_here {
                    Some(_) => coulomb::check_redundancy_with_sign(&plain()?, -1),
                    None => coulomb::check_redundancy(&plain()?),
                },
                Check::Poifo => map_err(coulomb::check_poifo(&plain()?))?,
                Check::Jacobi => map_err(coulomb::check_jacobi(&plain()?))?,
                Check::Grading => map_err(coulomb::check_sl2_grading(&plain()?))?,
                Check::Hanany => map_err(coulomb::check_hanany_form(r, hanany))?,
                Check::Sl2 => {
                    let elements: &[Sl2Element] =
                        if r <= 3 { &Sl2Element::ALL } else { &[Sl2Element::Identity, Sl2Element::Rotation] };
                    let mut outs = Vec::new();
                    for &e in elements {
                        let mut o = map_err(coulomb::check_sl2_action_invariance(r, e))?;
                        o.derived.clear();
                        outs.push(o);
                    }
                    let names: Vec<Value> = elements.iter().map(|e| Value::from(e.name())).collect();
                    all(outs).with("elements", Value::Array(names))
                }
                Check::Flavor => {
                    let chart = map_err(EtaleChart::new(r, true))?;
                    match injected_here {
                        Some(c) => map_err(coulomb::run_negative_control(&chart, c))?,
                        None => map_err(coulomb::check_relation_flavored(&chart))?,
                    }
                }
                Check::Sigma => {
                    let mut outs = Vec::new();
                    for k in 0..=r {
                        outs.push(map_err(coulomb::check_sigma_parity(r, k))?);
                    }
                    all(outs.into_iter().map(|mut o| {
                        o.derived.clear();
                        o
                    }))
                    .with("k_max", r)
                }
                Check::Controls => controls_check(r, flavored)?,
                _ => unreachable!("not a Coulomb check"),
            })
        })();
        report(check, &p, result)
    };
    Some(Job { check, params: job_params, run: Box::new(run) })
}

fn jobs(config: &SuiteConfig) -> Vec<Job> {
    let mut jobs = Vec::new();
    let cap = config.truncate;
    let rs = config.r_min..=config.r_max;
    for &check in &config.checks {
        if check.is_flavored() && !config.flavored {
            continue;
        }
        match check {
            Check::Hilbert | Check::Regions | Check::Ci => {
                for &rank in &config.ranks {
                    for r in rs.clone() {
                        let mut p = params(&[("rank", Value::from(rank)), ("r", Value::from(r))]);
                        if check != Check::Ci {
                            p.insert("truncate".into(), Value::from(cap));
                        }
                        let job_params = p.clone();
                        let run = move || {
                            let result = match check {
                                Check::Hilbert => hilbert_check(rank, r, cap),
                                Check::Regions => regions_check(rank, r, cap),
                                _ => Ok(ci_check(rank, r)),
                            };
                            report(check, &p, result)
                        };
                        jobs.push(Job { check, params: job_params, run: Box::new(run) });
                    }
                }
            }
            Check::Slodowy => {
                if config.ranks.contains(&3) && rs.contains(&3) {
                    let p = params(&[("r", Value::from(3)), ("bound", Value::from(SLODOWY_BOUND))]);
                    let job_params = p.clone();
                    jobs.push(Job {
                        check,
                        params: job_params,
                        run: Box::new(move || report(check, &p, Ok(slodowy_check()))),
                    });
                }
            }
            Check::Structure | Check::Trace | Check::SliceFlavor => {
                for r in rs.clone() {
                    let p = params(&[("r", Value::from(r))]);
                    let job_params = p.clone();
                    let run = move || {
                        if r < 2 {
                            return CheckReport::skipped(check.name(), p.clone(), "slice constructions need r >= 2");
                        }
                        let result = match check {
                            Check::Structure => {
                                SliceContext::new(r).map_err(|e| e.to_string()).and_then(|ctx| map_err(check_structure(&ctx)))
                            }
                            Check::Trace => slice_trace(r),
                            _ => slice_flavor(r),
                        };
                        report(check, &p, result)
                    };
                    jobs.push(Job { check, params: job_params, run: Box::new(run) });
                }
            }
            _ => {
                for r in rs.clone() {
                    jobs.extend(coulomb_job(check, r, config));
                }
            }
        }
    }
    jobs.sort_by_cached_key(sort_key);
    jobs
}

/// Runs the selected checks concurrently; reports come back ordered by check
/// name, then parameters. Golden files are enforced (or blessed) when a
/// golden directory is configured.
pub fn run_suite(config: &SuiteConfig) -> Result<Vec<CheckReport>, SuiteError> {
    config.validate()?;
    let jobs = jobs(config);
    let mut reports: Vec<CheckReport> = jobs
        .par_iter()
        .map(|job| {
            let start = Instant::now();
            let mut rep = (job.run)();
            debug_assert_eq!(rep.params, job.params);
            rep.wall_ms = Some(start.elapsed().as_millis() as u64);
            rep
        })
        .collect();
    if let Some(dir) = &config.golden_dir {
        golden::apply(&mut reports, dir, config.bless)?;
    }
    Ok(reports)
}
