//! Contact orders of zero-set branches, orders of contact between level
//! branches, and the integrability threshold they determine.
//!
//! Local branches at a singularity `tau` are sampled on one side of `tau2`:
//! `zeta2 = tau2 * exp(i h)` for log-spaced `h`, with every slice solved in
//! double-double so that vanishing rates down to `1e-24` can be fitted.

use crate::dd::DdComplex;
use crate::error::{Result, RifError};
use crate::poly2::Var;
use crate::rif::{Rif, SingularPoint};
use crate::roots::{assign, roots_dd_iters};
use nalgebra::{Matrix3, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Smallest admissible value in a double-precision fit.
pub const DOUBLE_FLOOR: f64 = 1e-12;
/// Smallest admissible value in a double-double fit.
pub const EXTENDED_FLOOR: f64 = 1e-24;
/// Largest admissible value in any fit.
pub const CEILING: f64 = 1e-2;
pub const MIN_SAMPLES: usize = 12;
const GUARD: f64 = 0.15;
const MIN_R2: f64 = 0.999;
/// A root belongs to a branch through `tau` if it lies this close to `tau1`
/// at the smallest offset.
const ANCHOR_RADIUS: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Any,
    Even,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Precision {
    Double,
    Extended,
}

impl Precision {
    fn floor(self) -> f64 {
        match self {
            Precision::Double => DOUBLE_FLOOR,
            Precision::Extended => EXTENDED_FLOOR,
        }
    }
}

/// An integer power law `v ~ h^order` fitted on a log-log window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderFit {
    pub order: u32,
    pub slope_raw: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
    pub precision_mode: Precision,
}

/// [`fit_order_with`] in double precision.
pub fn fit_order(samples: &[(f64, f64)], parity: Parity) -> Result<OrderFit> {
    fit_order_with(samples, parity, Precision::Double)
}

/// Fit `log v = order * log h + c + d h` for samples `(h, v)`.
///
/// Only samples with `v` between the precision floor and `1e-2` take part.
/// Runs of `k` consecutive such samples are tried for `k` from all of them
/// down to 12, smallest `h` first; the first run whose fit has
/// `r^2 >= 0.999` and a slope within 0.15 of an admissible integer wins.
///
/// # Errors
/// [`RifError::InsufficientSamples`] for fewer than 12 samples or less than
/// two decades of `h`; [`RifError::NoisyData`] when no window qualifies.
pub fn fit_order_with(samples: &[(f64, f64)], parity: Parity, precision: Precision) -> Result<OrderFit> {
    let hs = samples.iter().map(|s| s.0).filter(|&h| h > 0.0);
    let (lo, hi) = hs.fold((f64::INFINITY, 0.0f64), |(a, b), h| (a.min(h), b.max(h)));
    if samples.len() < MIN_SAMPLES {
        return Err(RifError::InsufficientSamples {
            found: samples.len(),
            needed: MIN_SAMPLES,
        });
    }
    let ratio = hi / lo;
    if ratio.is_nan() || ratio < 100.0 {
        return Err(RifError::InsufficientSamples {
            found: samples.len(),
            needed: MIN_SAMPLES,
        });
    }
    let floor = precision.floor();
    let mut valid: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(h, v)| *h > 0.0 && v.is_finite() && *v >= floor && *v <= CEILING)
        .map(|&(h, v)| (h.ln(), v.ln()))
        .collect();
    valid.sort_by(|a, b| a.0.total_cmp(&b.0));
    if valid.len() < MIN_SAMPLES {
        return Err(RifError::NoisyData {
            detail: format!(
                "{} samples with v in [{floor:e}, {CEILING:e}], need {MIN_SAMPLES}",
                valid.len()
            ),
        });
    }
    let mut best: Option<(f64, f64)> = None;
    for k in (MIN_SAMPLES..=valid.len()).rev() {
        for start in 0..=valid.len() - k {
            let w = &valid[start..start + k];
            let (slope, r2) = regress(w);
            let order = round_order(slope, parity);
            if best.is_none_or(|b| r2 > b.1) {
                best = Some((slope, r2));
            }
            if r2 >= MIN_R2 && (slope - order as f64).abs() <= GUARD && order >= 1 {
                return Ok(OrderFit {
                    order,
                    slope_raw: slope,
                    r_squared: r2,
                    window: (w[0].0.exp(), w[k - 1].0.exp()),
                    precision_mode: precision,
                });
            }
        }
    }
    let (slope, r2) = best.unwrap_or((f64::NAN, f64::NAN));
    Err(RifError::NoisyData {
        detail: format!("best window slope {slope:.3}, r^2 {r2:.5}"),
    })
}

fn round_order(slope: f64, parity: Parity) -> u32 {
    if !slope.is_finite() || slope < 0.5 {
        return 0;
    }
    match parity {
        Parity::Any => slope.round() as u32,
        Parity::Even => 2 * ((slope / 2.0).round() as u32),
    }
}

/// Least squares for `y = k x + c + d e^x` (with `x = log h`), returning
/// `k` and `r^2`. The `d h` term absorbs the first analytic correction to a
/// pure power law.
fn regress(pts: &[(f64, f64)]) -> (f64, f64) {
    let mut ata = Matrix3::<f64>::zeros();
    let mut atb = Vector3::<f64>::zeros();
    for &(x, y) in pts {
        let row = Vector3::new(x, 1.0, x.exp());
        ata += row * row.transpose();
        atb += row * y;
    }
    let sol = match ata.lu().solve(&atb) {
        Some(s) => s,
        None => return (f64::NAN, 0.0),
    };
    let n = pts.len() as f64;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let sres: f64 = pts
        .iter()
        .map(|&(x, y)| (y - sol[0] * x - sol[1] - sol[2] * x.exp()).powi(2))
        .sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - sres / syy };
    (sol[0], r2)
}

/// Offsets `h` used for local sampling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalGrid {
    pub h_max: f64,
    pub h_min: f64,
    pub per_decade: usize,
}

impl Default for LocalGrid {
    fn default() -> Self {
        LocalGrid {
            h_max: 10f64.powf(-0.5),
            h_min: 1e-5,
            per_decade: 10,
        }
    }
}

impl LocalGrid {
    /// A grid with twice the sampling density.
    pub fn refined(self) -> Self {
        LocalGrid {
            per_decade: self.per_decade * 2,
            ..self
        }
    }

    /// Offsets in increasing order.
    pub fn offsets(&self) -> Vec<f64> {
        let decades = (self.h_max / self.h_min).log10();
        let n = (decades * self.per_decade as f64).round() as usize;
        (0..=n)
            .map(|k| self.h_min * 10f64.powf(decades * k as f64 / n as f64))
            .collect()
    }
}

/// What a family of local branches solves for.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LocalKind {
    /// Zeros of `ptilde`.
    ZeroSet,
    /// Solutions of `f = lambda`.
    Level { lambda: Complex64 },
}

/// Branches `z1 = psi(zeta2)` through `tau`, sampled at `zeta2 = tau2 e^{ih}`.
///
/// `values[b][k]` is branch `b` at offset `hs[k]`. Zero-set branches are
/// ranked by `1 - |psi|` and level branches by angle, both of which are
/// stable as `h` decreases.
#[derive(Clone, Debug)]
pub struct LocalBranches {
    pub kind: LocalKind,
    pub tau: (Complex64, Complex64),
    pub hs: Vec<f64>,
    pub values: Vec<Vec<DdComplex>>,
}

impl LocalBranches {
    pub fn count(&self) -> usize {
        self.values.len()
    }

    /// `(h, 1 - |psi_b|)` samples of branch `b`.
    pub fn depth_samples(&self, b: usize) -> Vec<(f64, f64)> {
        self.hs
            .iter()
            .zip(&self.values[b])
            .map(|(&h, z)| (h, z.one_minus_modulus().to_f64()))
            .collect()
    }
}

fn trimmed(c: Vec<DdComplex>) -> Vec<DdComplex> {
    let mut c = c;
    let cmax = c.iter().map(|z| z.to_c64().norm()).fold(0.0, f64::max);
    while c.len() > 1 && c[c.len() - 1].to_c64().norm() <= 1e-28 * cmax {
        c.pop();
    }
    c
}

fn slice_coeffs(f: &Rif, kind: LocalKind, z2: DdComplex) -> Vec<DdComplex> {
    match kind {
        LocalKind::ZeroSet => f.ptilde().slice_dd(Var::Z2, z2),
        LocalKind::Level { lambda } => f.level_slice_dd(DdComplex::from(lambda), z2),
    }
}

/// Whether the slice at `tau2` collapses relative to nearby slices, which
/// signals a component `{z2 = tau2}`.
pub fn has_vertical_component(f: &Rif, kind: LocalKind, tau2: Complex64) -> bool {
    let t2 = DdComplex::from(tau2).normalize();
    let size = |z2: DdComplex| {
        slice_coeffs(f, kind, z2)
            .iter()
            .map(|c| c.to_c64().norm())
            .fold(0.0, f64::max)
    };
    let mut nb: Vec<f64> = [-2e-2, -1e-2, 1e-2, 2e-2]
        .iter()
        .map(|&h| size(t2 * DdComplex::unit(h)))
        .collect();
    nb.sort_by(f64::total_cmp);
    let median = 0.5 * (nb[1] + nb[2]);
    size(t2) < 1e-10 * median
}

/// Sample every branch of the given kind through `tau`.
pub fn local_branches(f: &Rif, kind: LocalKind, tau: (Complex64, Complex64), grid: &LocalGrid) -> Result<LocalBranches> {
    let t1 = DdComplex::from(tau.0).normalize();
    let t2 = DdComplex::from(tau.1).normalize();
    let offsets = grid.offsets();
    let mut hs = Vec::new();
    let mut values: Vec<Vec<DdComplex>> = Vec::new();
    let mut slopes: Vec<DdComplex> = Vec::new();
    for &h in &offsets {
        let z2 = t2 * DdComplex::unit(h);
        let c = trimmed(slice_coeffs(f, kind, z2));
        if c.len() <= 1 {
            break;
        }
        let roots = roots_dd_iters(&c, 60)?;
        let dz2 = z2 - t2;
        if hs.is_empty() {
            for z in roots {
                if (z - t1).norm().to_f64() < ANCHOR_RADIUS {
                    slopes.push((z - t1) / dz2);
                    values.push(vec![z]);
                }
            }
            if values.is_empty() {
                break;
            }
        } else {
            let cost: Vec<Vec<f64>> = slopes
                .iter()
                .map(|q| {
                    let pred = t1 + *q * dz2;
                    roots.iter().map(|z| (*z - pred).norm().to_f64()).collect()
                })
                .collect();
            let pick = assign(&cost);
            if pick.iter().any(|p| p.is_none()) {
                break;
            }
            for (b, p) in pick.iter().enumerate() {
                let z = roots[p.expect("checked above")];
                slopes[b] = (z - t1) / dz2;
                values[b].push(z);
            }
        }
        hs.push(h);
    }
    rank(kind, t1, &mut values);
    Ok(LocalBranches {
        kind,
        tau,
        hs,
        values,
    })
}

/// Reorder branch values at each offset so labels follow depth (zero set)
/// or angle relative to `tau1` (level sets).
fn rank(kind: LocalKind, t1: DdComplex, values: &mut [Vec<DdComplex>]) {
    let nb = values.len();
    if nb < 2 {
        return;
    }
    let len = values[0].len();
    let t1c = t1.to_c64();
    for k in 0..len {
        let mut col: Vec<DdComplex> = (0..nb).map(|b| values[b][k]).collect();
        match kind {
            LocalKind::ZeroSet => col.sort_by(|a, b| {
                b.one_minus_modulus()
                    .to_f64()
                    .total_cmp(&a.one_minus_modulus().to_f64())
            }),
            LocalKind::Level { .. } => {
                col.sort_by(|a, b| (a.to_c64() / t1c).arg().total_cmp(&(b.to_c64() / t1c).arg()))
            }
        }
        for (b, z) in col.into_iter().enumerate() {
            values[b][k] = z;
        }
    }
}

/// Even contact order of zero-set branch `b` from `1 - |psi(zeta2)|`.
pub fn branch_contact_order(branches: &LocalBranches, b: usize) -> Result<OrderFit> {
    fit_order_with(&branches.depth_samples(b), Parity::Even, Precision::Extended)
}

/// Order of contact of branch `i` of `a` and branch `j` of `b`, from
/// `|psi_a(zeta2) - psi_b(zeta2)|` on their common offsets.
///
/// # Errors
/// [`RifError::NoisyData`] when the branches coincide.
pub fn order_of_contact(a: &LocalBranches, i: usize, b: &LocalBranches, j: usize) -> Result<OrderFit> {
    let n = a.hs.len().min(b.hs.len());
    let samples: Vec<(f64, f64)> = (0..n)
        .map(|k| (a.hs[k], (a.values[i][k] - b.values[j][k]).norm().to_f64()))
        .collect();
    fit_order_with(&samples, Parity::Any, Precision::Extended)
}

/// Orders of contact between all branch pairs of two level families.
pub fn contact_matrix(a: &LocalBranches, b: &LocalBranches) -> Vec<Vec<Result<u32>>> {
    (0..a.count())
        .map(|i| {
            (0..b.count())
                .map(|j| order_of_contact(a, i, b, j).map(|f| f.order))
                .collect()
        })
        .collect()
}

/// Default probe values `exp(i (2 pi k / count + 0.37))`, rotated away from
/// the nontangential values and their negatives.
pub fn default_probes(count: usize, avoid: &[Complex64]) -> Vec<Complex64> {
    let mut offset = 0.37;
    loop {
        let probes: Vec<Complex64> = (0..count)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / count as f64 + offset))
            .collect();
        let close = probes.iter().any(|p| {
            avoid
                .iter()
                .any(|a| (p - a).norm() < 0.1 || (p + a).norm() < 0.1)
        });
        if !close || offset > 2.0 * PI {
            return probes;
        }
        offset += 0.2;
    }
}

/// Maximum order of contact found for one probe pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbePair {
    pub lambda: Complex64,
    pub mu: Complex64,
    pub max_contact: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContactReport {
    pub tau: [Complex64; 2],
    pub k_tau: u32,
    pub k1: u32,
    pub k2: u32,
    /// Contact orders of the zero-set branches `z1 = psi(z2)`.
    pub per_branch: Vec<u32>,
    /// Contact orders of the zero-set branches `z2 = psi(z1)`.
    pub per_branch_transposed: Vec<u32>,
    pub pairs: Vec<ProbePair>,
    /// Most frequent maximal order of contact over the probe pairs.
    pub majority: Option<u32>,
    /// Whether `majority` equals `k_tau`.
    pub cross_check: bool,
    /// Probe present in every disagreeing pair, if there is one.
    pub exceptional_candidate: Option<Complex64>,
    /// Probes that cannot be excused by a single exceptional value.
    pub implicated: usize,
}

/// Contact orders of all zero-set branches at `tau` in the `z1` chart.
pub fn zero_branch_orders(f: &Rif, tau: (Complex64, Complex64), grid: &LocalGrid) -> Result<Vec<u32>> {
    let z = local_branches(f, LocalKind::ZeroSet, tau, grid)?;
    (0..z.count())
        .map(|b| branch_contact_order(&z, b).map(|fit| fit.order))
        .collect()
}

/// Contact orders at `tau` in both charts, cross-checked against orders of
/// contact of level branches at the probe values.
///
/// # Errors
/// [`RifError::EcoViolation`] if the two charts disagree and
/// [`RifError::CrossCheckFailure`] if no order of contact holds a majority
/// among the probe pairs.
pub fn contact_order_at(f: &Rif, sp: &SingularPoint, probes: &[Complex64], grid: &LocalGrid) -> Result<ContactReport> {
    let tau = sp.tau();
    let per_branch = zero_branch_orders(f, tau, grid)?;
    let per_branch_transposed = zero_branch_orders(&f.transpose(), (tau.1, tau.0), grid)?;
    let k1 = per_branch.iter().copied().max().unwrap_or(0);
    let k2 = per_branch_transposed.iter().copied().max().unwrap_or(0);
    if k1 != k2 {
        return Err(RifError::EcoViolation { k1, k2 });
    }

    let families: Vec<Option<LocalBranches>> = probes
        .iter()
        .map(|&lambda| {
            local_branches(f, LocalKind::Level { lambda }, tau, grid)
                .ok()
                .filter(|b| b.count() > 0)
        })
        .collect();
    let mut pairs = Vec::new();
    for a in 0..probes.len() {
        for b in (a + 1)..probes.len() {
            let max_contact = match (&families[a], &families[b]) {
                (Some(x), Some(y)) => contact_matrix(x, y)
                    .into_iter()
                    .flatten()
                    .collect::<Result<Vec<u32>>>()
                    .ok()
                    .and_then(|v| v.into_iter().max()),
                _ => None,
            };
            pairs.push(ProbePair {
                lambda: probes[a],
                mu: probes[b],
                max_contact,
            });
        }
    }
    let majority = majority_value(&pairs)?;
    let failing: Vec<&ProbePair> = pairs.iter().filter(|p| p.max_contact != Some(k1)).collect();
    let (exceptional_candidate, implicated) = if failing.is_empty() {
        (None, 0)
    } else {
        let common = probes.iter().copied().find(|&q| failing.iter().all(|p| p.lambda == q || p.mu == q));
        match common {
            Some(q) => (Some(q), 1),
            None => {
                let mut seen: Vec<Complex64> = Vec::new();
                for p in &failing {
                    for q in [p.lambda, p.mu] {
                        if !seen.contains(&q) {
                            seen.push(q);
                        }
                    }
                }
                (None, seen.len())
            }
        }
    };
    Ok(ContactReport {
        tau: [tau.0, tau.1],
        k_tau: k1,
        k1,
        k2,
        per_branch,
        per_branch_transposed,
        pairs,
        majority,
        cross_check: majority == Some(k1),
        exceptional_candidate,
        implicated,
    })
}

fn majority_value(pairs: &[ProbePair]) -> Result<Option<u32>> {
    if pairs.is_empty() {
        return Ok(None);
    }
    let mut counts: Vec<(Option<u32>, usize)> = Vec::new();
    for p in pairs {
        match counts.iter_mut().find(|c| c.0 == p.max_contact) {
            Some(c) => c.1 += 1,
            None => counts.push((p.max_contact, 1)),
        }
    }
    counts.sort_by_key(|c| std::cmp::Reverse(c.1));
    if counts.len() > 1 && counts[0].1 == counts[1].1 {
        return Err(RifError::CrossCheckFailure);
    }
    Ok(counts[0].0)
}

/// Largest contact order over all singularities, `None` when there are
/// none.
pub fn global_contact_order(f: &Rif, sing: &[SingularPoint], grid: &LocalGrid) -> Result<Option<u32>> {
    let mut best: Option<u32> = None;
    for sp in sing {
        let k = zero_branch_orders(f, sp.tau(), grid)?
            .into_iter()
            .max()
            .unwrap_or(0);
        best = Some(best.map_or(k, |b| b.max(k)));
    }
    Ok(best)
}

/// `p* = 1 + 1/K`: the partial derivatives of the RIF lie in `L^p` exactly
/// for `p < p*`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LpThreshold {
    pub contact_order: Option<u32>,
    /// `None` stands for infinity.
    pub p_star: Option<f64>,
}

impl LpThreshold {
    pub fn integrable(&self, p: f64) -> bool {
        self.p_star.is_none_or(|s| p < s)
    }
}

pub fn lp_threshold(k: Option<u32>) -> LpThreshold {
    LpThreshold {
        contact_order: k,
        p_star: k.filter(|&k| k > 0).map(|k| 1.0 + 1.0 / k as f64),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BijectionReport {
    pub zero_orders: Vec<u32>,
    pub lambda_branches: usize,
    pub mu_branches: usize,
    /// `(zero branch, lambda branch, mu branch, order of contact)`.
    pub matching: Vec<(usize, usize, usize, u32)>,
    pub failing: Vec<usize>,
    pub holds: bool,
}

/// Check that both level sets have at least as many branches at `tau` as
/// the zero set, and that branch pairs can be matched to zero branches with
/// order of contact at least the zero branch's contact order.
pub fn branch_bijection_check(
    f: &Rif,
    tau: (Complex64, Complex64),
    lambda: Complex64,
    mu: Complex64,
    grid: &LocalGrid,
) -> Result<BijectionReport> {
    let zero = zero_branch_orders(f, tau, grid)?;
    let a = local_branches(f, LocalKind::Level { lambda }, tau, grid)?;
    let b = local_branches(f, LocalKind::Level { lambda: mu }, tau, grid)?;
    let kappa: Vec<Vec<u32>> = contact_matrix(&a, &b)
        .into_iter()
        .map(|row| row.into_iter().map(|k| k.unwrap_or(0)).collect())
        .collect();
    let mut order: Vec<usize> = (0..zero.len()).collect();
    order.sort_by(|&x, &y| zero[y].cmp(&zero[x]));
    let (mut used_a, mut used_b) = (vec![false; a.count()], vec![false; b.count()]);
    let mut matching = Vec::new();
    let mut failing = Vec::new();
    for l in order {
        let mut best: Option<(usize, usize, u32)> = None;
        for i in 0..a.count() {
            for j in 0..b.count() {
                if used_a[i] || used_b[j] || kappa[i][j] < zero[l] {
                    continue;
                }
                if best.is_none_or(|bst| kappa[i][j] < bst.2) {
                    best = Some((i, j, kappa[i][j]));
                }
            }
        }
        match best {
            Some((i, j, k)) => {
                used_a[i] = true;
                used_b[j] = true;
                matching.push((l, i, j, k));
            }
            None => failing.push(l),
        }
    }
    let holds = a.count() >= zero.len() && b.count() >= zero.len() && failing.is_empty();
    Ok(BijectionReport {
        zero_orders: zero,
        lambda_branches: a.count(),
        mu_branches: b.count(),
        matching,
        failing,
        holds,
    })
}

/// `|psi(zeta2) - tau1|` for a branch, exposed for diagnostics.
pub fn distance_to_tau(branches: &LocalBranches, b: usize) -> Vec<(f64, f64)> {
    let t1 = DdComplex::from(branches.tau.0);
    branches
        .hs
        .iter()
        .zip(&branches.values[b])
        .map(|(&h, z)| (h, (*z - t1).norm().to_f64()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::catalog;
    use proptest::prelude::*;

    fn synth(k: i32, c: f64) -> Vec<(f64, f64)> {
        (0..40)
            .map(|i| {
                let h = 10f64.powf(-0.5 - i as f64 * 0.1);
                (h, c * h.powi(k))
            })
            .collect()
    }

    #[test]
    fn exact_square_law() {
        let fit = fit_order(&synth(2, 1.0), Parity::Any).unwrap();
        assert_eq!(fit.order, 2);
        assert!((fit.slope_raw - 2.0).abs() < 1e-9);
    }

    /// Samples of `c * h^k` with values log-spaced in `[1e-20, 1e-3]`.
    fn synth_values(k: i32, c: f64) -> Vec<(f64, f64)> {
        (0..40)
            .map(|i| {
                let v = 10f64.powf(-3.0 - i as f64 * 17.0 / 39.0);
                let h = (v / c).powf(1.0 / k as f64);
                (h, c * h.powi(k))
            })
            .collect()
    }

    proptest! {
        #[test]
        fn synthetic_power_laws(k in 1i32..=8, e in -3i32..=3) {
            let fit = fit_order_with(&synth_values(k, 10f64.powi(e)), Parity::Any, Precision::Extended).unwrap();
            prop_assert_eq!(fit.order, k as u32);
        }
    }

    #[test]
    fn too_few_samples() {
        let s: Vec<(f64, f64)> = synth(2, 1.0).into_iter().take(5).collect();
        assert!(matches!(fit_order(&s, Parity::Any), Err(RifError::InsufficientSamples { .. })));
    }

    #[test]
    fn zero_values_are_noisy() {
        let s: Vec<(f64, f64)> = synth(2, 1.0).into_iter().map(|(h, _)| (h, 0.0)).collect();
        assert!(matches!(fit_order(&s, Parity::Any), Err(RifError::NoisyData { .. })));
    }

    #[test]
    fn even_rounding() {
        let s: Vec<(f64, f64)> = synth(2, 1.0);
        assert_eq!(fit_order(&s, Parity::Even).unwrap().order, 2);
        let odd = synth(3, 1.0);
        assert!(fit_order(&odd, Parity::Even).is_err());
    }

    #[test]
    fn faveform_zero_branch() {
        let f = catalog("faveform").unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(zero_branch_orders(&f, (one, one), &LocalGrid::default()).unwrap(), vec![2]);
    }

    #[test]
    fn faveform_levels_touch_to_order_two() {
        let f = catalog("faveform").unwrap();
        let one = Complex64::new(1.0, 0.0);
        let g = LocalGrid::default();
        let a = local_branches(&f, LocalKind::Level { lambda: Complex64::from_polar(1.0, 0.9) }, (one, one), &g).unwrap();
        let b = local_branches(&f, LocalKind::Level { lambda: Complex64::from_polar(1.0, -2.1) }, (one, one), &g).unwrap();
        assert_eq!((a.count(), b.count()), (1, 1));
        assert_eq!(order_of_contact(&a, 0, &b, 0).unwrap().order, 2);
        assert!(matches!(order_of_contact(&a, 0, &a, 0), Err(RifError::NoisyData { .. })));
    }

    #[test]
    fn faveform_vertical_value_curve() {
        let f = catalog("faveform").unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert!(has_vertical_component(&f, LocalKind::Level { lambda: one }, one));
        assert!(!has_vertical_component(&f, LocalKind::Level { lambda: -one }, one));
    }

    #[test]
    fn thresholds() {
        assert_eq!(lp_threshold(Some(2)).p_star, Some(1.5));
        assert_eq!(lp_threshold(Some(4)).p_star, Some(1.25));
        assert_eq!(lp_threshold(Some(8)).p_star, Some(1.125));
        let none = lp_threshold(None);
        assert!(none.p_star.is_none() && none.integrable(1e6));
        assert!(lp_threshold(Some(2)).integrable(1.49));
        assert!(!lp_threshold(Some(2)).integrable(1.5));
    }
}
