//! Unimodular level curves on the torus and portraits built from them.
//!
//! For `zeta2 = e^{i theta}` away from singular angles every root of the
//! level slice in `z1` is unimodular and simple, so the curve is a union of
//! graphs `theta1 = psi(theta2)`. The circle of `theta2` is cut at the
//! singular angles and each arc is tracked separately. Components are the
//! connected pieces of the curve with its singular points removed: arcs are
//! joined across a cut only where they avoid the singular point.

use crate::contact::{has_vertical_component, local_branches, LocalGrid, LocalKind};
use crate::dd::DdComplex;
use crate::error::{Result, RifError};
use crate::poly2::Var;
use crate::rif::{Rif, SingularPoint};
use crate::roots::{assign, roots_dd_iters, roots_univariate, track_roots, Branch, BranchKind, Track, TrackOptions, DEFAULT_TOL};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;

/// Samples added between the uniform grid and a cut on each side.
const CUT_REFINE: usize = 12;

/// A traced level curve `{phi = lambda}` on the torus.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LevelCurve {
    pub lambda: Complex64,
    /// Branches `z1 = psi(e^{i theta2})`; `thetas` are unwrapped so they
    /// increase continuously along each branch.
    pub branches: Vec<Branch>,
    /// Angle `theta2` of a line component `{z2 = e^{i theta2}}`.
    pub has_vertical: Option<f64>,
    /// Component id given to the line component.
    pub vertical_component: Option<usize>,
    /// Indices of the singularities whose nontangential value is `lambda`.
    pub value_for: Vec<usize>,
    pub exceptional: bool,
    pub grid: usize,
    /// Double-double samples behind `branches`, used for residual checks.
    #[serde(skip)]
    precise: Vec<Vec<DdComplex>>,
}

impl LevelCurve {
    pub fn flag(&self) -> &'static str {
        if !self.value_for.is_empty() {
            "value"
        } else if self.exceptional {
            "exceptional"
        } else {
            "generic"
        }
    }

    /// All samples as angle pairs in `(-pi, pi]^2` with branch index.
    pub fn points(&self) -> Vec<(f64, f64, usize)> {
        let mut out = Vec::new();
        for (b, br) in self.branches.iter().enumerate() {
            for (t, z) in br.thetas.iter().zip(&br.values) {
                out.push((z.arg(), wrap(*t), b));
            }
        }
        out
    }

    /// Largest relative residual `|num - lambda p| / (|ptilde| + |p|)` over
    /// the samples, with `z1` projected onto the circle. Uses the
    /// double-double samples when present.
    pub fn max_residual(&self, f: &Rif) -> f64 {
        let num = f.numerator();
        let lam = DdComplex::from(self.lambda);
        let mut worst: f64 = 0.0;
        for (b, br) in self.branches.iter().enumerate() {
            for (k, (t, z)) in br.thetas.iter().zip(&br.values).enumerate() {
                let z1 = match self.precise.get(b) {
                    Some(v) => v[k],
                    None => DdComplex::from(*z),
                }
                .normalize();
                let z2 = DdComplex::unit(*t);
                let pv = f.p().eval_dd(z1, z2);
                let r = (num.eval_dd(z1, z2) - lam * pv).norm().to_f64();
                let s = f.ptilde().eval_dd(z1, z2).norm().to_f64() + pv.norm().to_f64();
                worst = worst.max(r / s.max(f64::MIN_POSITIVE));
            }
        }
        worst
    }

    /// Largest backward error `|num - lambda p| / (|num|_abs + |p|_abs)`,
    /// where `|q|_abs` evaluates `q` with absolute coefficients.
    pub fn max_backward_error(&self, f: &Rif) -> f64 {
        let num = f.numerator();
        let lam = DdComplex::from(self.lambda);
        let mut worst: f64 = 0.0;
        for (b, br) in self.branches.iter().enumerate() {
            for (k, (t, z)) in br.thetas.iter().zip(&br.values).enumerate() {
                let z1 = match self.precise.get(b) {
                    Some(v) => v[k],
                    None => DdComplex::from(*z),
                }
                .normalize();
                let z2 = DdComplex::unit(*t);
                let r = (num.eval_dd(z1, z2) - lam * f.p().eval_dd(z1, z2)).norm().to_f64();
                let (a1, a2) = (z1.to_c64(), z2.to_c64());
                worst = worst.max(r / (num.eval_abs(a1, a2) + f.p().eval_abs(a1, a2)));
            }
        }
        worst
    }

    /// Largest `||z1| - 1|` over the samples.
    pub fn max_modulus_defect(&self) -> f64 {
        self.branches
            .iter()
            .flat_map(|b| b.values.iter())
            .map(|z| (z.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Smallest angular distance from the samples to `tau`.
    pub fn distance_to(&self, tau: (Complex64, Complex64)) -> f64 {
        let mut best = f64::INFINITY;
        for br in &self.branches {
            for (t, z) in br.thetas.iter().zip(&br.values) {
                let d1 = (z / tau.0).arg().abs();
                let d2 = (Complex64::from_polar(1.0, *t) / tau.1).arg().abs();
                best = best.min(d1.hypot(d2));
            }
        }
        if let Some(t2) = self.has_vertical {
            best = best.min((Complex64::from_polar(1.0, t2) / tau.1).arg().abs());
        }
        best
    }

    /// Largest second divided difference of `theta1(theta2)` over interior
    /// samples farther than `margin` from every cut.
    pub fn smoothness(&self, cuts: &[f64], margin: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for br in &self.branches {
            let n = br.thetas.len();
            for k in 1..n.saturating_sub(1) {
                let t = &br.thetas[k - 1..=k + 1];
                if cuts.iter().any(|&c| angle_gap(t[1], c) < margin) {
                    continue;
                }
                let y0 = 0.0;
                let y1 = (br.values[k] / br.values[k - 1]).arg();
                let y2 = y1 + (br.values[k + 1] / br.values[k]).arg();
                let d1 = (y1 - y0) / (t[1] - t[0]);
                let d2 = (y2 - y1) / (t[2] - t[1]);
                worst = worst.max((2.0 * (d2 - d1) / (t[2] - t[0])).abs());
            }
        }
        worst
    }
}

/// Whether the smoothness measure stays bounded from `coarse` to a grid of
/// twice the density: smooth curves keep it roughly constant while corners
/// double it. Values under `1e-6` are rounding noise.
pub fn smoothness_stable(coarse: f64, fine: f64) -> bool {
    fine <= 1.5 * coarse || fine < 1e-6
}

/// Double the grid from `start` until the smoothness measure of the curve
/// at `lambda` is stable under one more doubling. Returns the coarser grid
/// of the first stable pair, or `None` if `max_grid` is reached first.
pub fn smoothness_converges(
    f: &Rif,
    lambda: Complex64,
    sing: &[SingularPoint],
    start: usize,
    max_grid: usize,
) -> Result<Option<usize>> {
    let mut cuts = singular_angles(sing);
    if cuts.is_empty() {
        cuts.push(PI);
    }
    let margin = 0.05;
    let mut grid = start;
    let mut coarse = trace_level(f, lambda, grid, sing)?.smoothness(&cuts, margin);
    while 2 * grid <= max_grid {
        let fine = trace_level(f, lambda, 2 * grid, sing)?.smoothness(&cuts, margin);
        if smoothness_stable(coarse, fine) {
            return Ok(Some(grid));
        }
        grid *= 2;
        coarse = fine;
    }
    Ok(None)
}

/// A connected piece of a level curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub id: usize,
    pub branches: Vec<usize>,
    pub vertical: bool,
    /// Singularities lying on the component.
    pub singularities: Vec<usize>,
}

/// Group the branches of `c` by component id and collect the singularities
/// each component passes through.
pub fn components(c: &LevelCurve, sing: &[SingularPoint]) -> Vec<Component> {
    let mut out: Vec<Component> = Vec::new();
    for (b, br) in c.branches.iter().enumerate() {
        let idx = match out.iter().position(|k| k.id == br.component_id) {
            Some(i) => i,
            None => {
                out.push(Component {
                    id: br.component_id,
                    branches: Vec::new(),
                    vertical: false,
                    singularities: Vec::new(),
                });
                out.len() - 1
            }
        };
        out[idx].branches.push(b);
        for &a in &br.anchors {
            if !out[idx].singularities.contains(&a) {
                out[idx].singularities.push(a);
            }
        }
    }
    if let (Some(t2), Some(id)) = (c.has_vertical, c.vertical_component) {
        let z2 = Complex64::from_polar(1.0, t2);
        let singularities = sing
            .iter()
            .enumerate()
            .filter(|(_, s)| (s.tau[1] - z2).norm() < 1e-6)
            .map(|(i, _)| i)
            .collect();
        out.push(Component {
            id,
            branches: Vec::new(),
            vertical: true,
            singularities,
        });
    }
    for k in &mut out {
        k.singularities.sort_unstable();
    }
    out.sort_by_key(|k| k.id);
    out
}

fn wrap(t: f64) -> f64 {
    let mut x = (t + PI).rem_euclid(2.0 * PI) - PI;
    if x <= -PI {
        x += 2.0 * PI;
    }
    x
}

fn angle_gap(a: f64, b: f64) -> f64 {
    (Complex64::from_polar(1.0, a - b)).arg().abs()
}

fn level_roots(f: &Rif, lambda: DdComplex, z2: DdComplex) -> Result<Vec<DdComplex>> {
    let mut c = f.level_slice_dd(lambda, z2);
    let cmax = c.iter().map(|z| z.to_c64().norm()).fold(0.0, f64::max);
    if cmax == 0.0 {
        return Err(RifError::DegenerateLevel);
    }
    while c.len() > 1 && c[c.len() - 1].to_c64().norm() <= 1e-14 * cmax {
        c.pop();
    }
    if c.len() <= 1 {
        return Ok(Vec::new());
    }
    roots_dd_iters(&c, 20)
}

/// Sample grid on the open arc `(a, b)`: uniform midpoints plus geometric
/// refinement towards both ends down to offset `rho`.
fn arc_grid(a: f64, b: f64, grid: usize, rho: f64) -> Vec<f64> {
    let spacing = 2.0 * PI / grid as f64;
    let mut ts: Vec<f64> = Vec::new();
    let k0 = ((a + PI) / spacing - 0.5).floor() as i64 - 1;
    let k1 = ((b + PI) / spacing - 0.5).ceil() as i64 + 1;
    for k in k0..=k1 {
        let t = -PI + (k as f64 + 0.5) * spacing;
        if t > a + rho && t < b - rho {
            ts.push(t);
        }
    }
    let reach = spacing.min(0.5 * (b - a));
    if reach > rho {
        for j in 0..CUT_REFINE {
            let off = rho * (reach / rho).powf(j as f64 / CUT_REFINE as f64);
            ts.push(a + off);
            ts.push(b - off);
        }
    }
    ts.sort_by(f64::total_cmp);
    ts.dedup_by(|x, y| (*x - *y).abs() < 1e-15);
    ts
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = i;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (x, y) = (find(parent, a), find(parent, b));
    if x != y {
        parent[x.max(y)] = x.min(y);
    }
}

fn nearest_matching(from: &[DdComplex], to: &[DdComplex]) -> Vec<Option<usize>> {
    let cost: Vec<Vec<f64>> = from
        .iter()
        .map(|a| to.iter().map(|b| (*a - *b).norm().to_f64()).collect())
        .collect();
    assign(&cost)
}

/// Angles `arg tau2` of the singularities, merged when closer than `1e-9`.
pub fn singular_angles(sing: &[SingularPoint]) -> Vec<f64> {
    let mut cuts: Vec<f64> = sing.iter().map(|s| s.tau[1].arg()).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|x, y| angle_gap(*x, *y) < 1e-9);
    cuts
}

/// Trace `{phi = lambda}` on the torus with `grid` uniform samples in
/// `theta2`.
///
/// # Errors
/// [`RifError::DegenerateLevel`] if the level polynomial vanishes
/// identically, [`RifError::InvalidInput`] for `grid < 64` or a
/// non-unimodular `lambda`, and tracking errors.
pub fn trace_level(f: &Rif, lambda: Complex64, grid: usize, sing: &[SingularPoint]) -> Result<LevelCurve> {
    if grid < 64 {
        return Err(RifError::InvalidInput("grid must be at least 64".into()));
    }
    if (lambda.norm() - 1.0).abs() > 1e-12 {
        return Err(RifError::InvalidInput("lambda must be unimodular".into()));
    }
    if f.level_poly(lambda).is_zero() {
        return Err(RifError::DegenerateLevel);
    }
    let lam = DdComplex::from(lambda / lambda.norm());
    let spacing = 2.0 * PI / grid as f64;
    let rho = spacing * 1e-3;
    let mut cuts = singular_angles(sing);
    if cuts.is_empty() {
        cuts.push(PI);
    }
    let opts = TrackOptions {
        match_jump: Some(f64::INFINITY),
        ..TrackOptions::default()
    };
    let oracle = |t: f64| level_roots(f, lam, DdComplex::unit(t));

    let nc = cuts.len();
    let cut_at = |k: usize| if k < nc { cuts[k] } else { cuts[k - nc] + 2.0 * PI };
    let mut segments: Vec<Track> = Vec::new();
    let mut arc_segments: Vec<Vec<usize>> = Vec::with_capacity(nc);
    for k in 0..nc {
        let ts = arc_grid(cut_at(k), cut_at(k + 1), grid, rho);
        let tracks = track_roots(oracle, &ts, &opts)?;
        let mut ids = Vec::new();
        for t in tracks {
            ids.push(segments.len());
            segments.push(t);
        }
        arc_segments.push(ids);
    }

    // Ends that reach a singular point stay open; the rest continue across
    // the cut to the nearest start on the other side.
    let anchor_tol = (1e3 * rho).min(0.05);
    let at_singularity = |theta: f64, z: DdComplex| {
        let z2 = Complex64::from_polar(1.0, theta);
        sing.iter()
            .any(|sp| (z2 - sp.tau[1]).norm() < 2.0 * rho && (z.to_c64() - sp.tau[0]).norm() < anchor_tol)
    };
    let mut parent: Vec<usize> = (0..segments.len()).collect();
    for k in 0..nc {
        let next = (k + 1) % nc;
        let s = cut_at(k + 1);
        let ends: Vec<(usize, DdComplex)> = arc_segments[k]
            .iter()
            .filter_map(|&i| {
                let t = &segments[i];
                let (th, z) = (*t.thetas.last()?, *t.values.last()?);
                ((s - th).abs() < 2.0 * rho && !at_singularity(th, z)).then_some((i, z))
            })
            .collect();
        let shift = if next == 0 { 2.0 * PI } else { 0.0 };
        let starts: Vec<(usize, DdComplex)> = arc_segments[next]
            .iter()
            .filter_map(|&i| {
                let t = &segments[i];
                let (th, z) = (t.thetas[0], t.values[0]);
                ((th + shift - s).abs() < 2.0 * rho && !at_singularity(th, z)).then_some((i, z))
            })
            .collect();
        let from: Vec<DdComplex> = ends.iter().map(|e| e.1).collect();
        let to: Vec<DdComplex> = starts.iter().map(|e| e.1).collect();
        for (e, m) in nearest_matching(&from, &to).into_iter().enumerate() {
            if let Some(m) = m {
                if (from[e] - to[m]).norm().to_f64() < anchor_tol {
                    union(&mut parent, ends[e].0, starts[m].0);
                }
            }
        }
    }

    let mut comp_ids: Vec<usize> = Vec::new();
    let mut branches = Vec::with_capacity(segments.len());
    for (i, seg) in segments.iter().enumerate() {
        let root = find(&mut parent, i);
        let cid = match comp_ids.iter().position(|&r| r == root) {
            Some(c) => c,
            None => {
                comp_ids.push(root);
                comp_ids.len() - 1
            }
        };
        let t: &Track = seg;
        let mut anchors = Vec::new();
        for (si, sp) in sing.iter().enumerate() {
            for (theta, z) in [
                (t.thetas[0], t.values[0]),
                (*t.thetas.last().expect("non-empty"), *t.values.last().expect("non-empty")),
            ] {
                let z2 = Complex64::from_polar(1.0, theta);
                if (z2 - sp.tau[1]).norm() < 2.0 * rho && (z.to_c64() - sp.tau[0]).norm() < anchor_tol && !anchors.contains(&si) {
                    anchors.push(si);
                }
            }
        }
        branches.push(Branch {
            thetas: t.thetas.clone(),
            values: t.values.iter().map(|v| v.to_c64()).collect(),
            kind: BranchKind::Level { lambda },
            component_id: cid,
            anchors,
        });
    }

    let mut has_vertical = None;
    for sp in sing {
        if has_vertical_component(f, LocalKind::Level { lambda }, sp.tau[1]) {
            has_vertical = Some(sp.tau[1].arg());
            break;
        }
    }
    let vertical_component = has_vertical.map(|_| comp_ids.len());
    let value_for = sing
        .iter()
        .enumerate()
        .filter(|(_, s)| (s.lambda0 - lambda).norm() < 1e-9)
        .map(|(i, _)| i)
        .collect();
    Ok(LevelCurve {
        lambda,
        branches,
        has_vertical,
        vertical_component,
        value_for,
        exceptional: false,
        grid,
        precise: segments.into_iter().map(|t| t.values).collect(),
    })
}

/// Horn-region fit for one level branch through a singularity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HornReport {
    /// Limit of `x1 / x2` at the singularity, with `x_j = tan((theta_j -
    /// arg tau_j) / 2)` the half-plane coordinates of the branch.
    pub linear_coeff: f64,
    /// Slope of `x1 / x2` against `x2`.
    pub curvature: f64,
    pub pinch_ok: bool,
}

/// Fit `x1 / x2 = a + b x2` on the local branches of the level set at
/// `lambda` through `sp`; a nonzero finite `a` puts the branch inside a
/// horn region.
///
/// # Errors
/// [`RifError::InvalidInput`] when `lambda` is the nontangential value at
/// `sp`, [`RifError::InsufficientSamples`] for short branches.
pub fn horn_check(f: &Rif, sp: &SingularPoint, lambda: Complex64, grid: &LocalGrid) -> Result<Vec<HornReport>> {
    if (lambda - sp.lambda0).norm() < 1e-8 {
        return Err(RifError::InvalidInput(
            "horn check needs a level value other than the nontangential value".into(),
        ));
    }
    let tau = sp.tau();
    let lb = local_branches(f, LocalKind::Level { lambda }, tau, grid)?;
    let mut out = Vec::new();
    for b in 0..lb.count() {
        let pts: Vec<(f64, f64)> = lb
            .hs
            .iter()
            .zip(&lb.values[b])
            .filter(|(h, _)| **h <= 1e-2)
            .map(|(&h, z)| {
                let x2 = (h / 2.0).tan();
                let x1 = ((z.to_c64() / tau.0).arg() / 2.0).tan();
                (x2, x1 / x2)
            })
            .collect();
        if pts.len() < crate::contact::MIN_SAMPLES {
            return Err(RifError::InsufficientSamples {
                found: pts.len(),
                needed: crate::contact::MIN_SAMPLES,
            });
        }
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let slope = sxy / sxx;
        let a = my - slope * mx;
        let resid = pts
            .iter()
            .map(|p| (p.1 - a - slope * p.0).abs() / p.0.powi(2).max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        let pinch_ok = a.abs() > 1e-6 && a.abs() < 1e6 && resid.is_finite() && resid < 1e6;
        out.push(HornReport {
            linear_coeff: a,
            curvature: slope,
            pinch_ok,
        });
    }
    Ok(out)
}

/// Check `|b'(zeta)| = sum_j (1 - |alpha_j|^2) / |zeta - alpha_j|^2` for the
/// one-variable slice `b = phi(., zeta2)` at `probes` points of the circle.
///
/// Returns the largest relative deviation; a constant slice gives `0`.
pub fn blaschke_identity_check(f: &Rif, zeta2: Complex64, probes: usize) -> Result<f64> {
    let num = f.numerator().slice(Var::Z2, zeta2);
    let den = f.p().slice(Var::Z2, zeta2);
    let nt = num.trimmed(1e-14 * num.norm_inf());
    if nt.degree().unwrap_or(0) == 0 {
        return Ok(0.0);
    }
    let alphas = roots_univariate(&nt.coeffs, DEFAULT_TOL)?.roots;
    let (dn, dd) = (nt.derivative(), den.derivative());
    let mut worst: f64 = 0.0;
    for k in 0..probes {
        let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / probes as f64 + 0.1);
        let lhs = (z * (dn.eval(z) / nt.eval(z) - dd.eval(z) / den.eval(z))).norm();
        let rhs: f64 = alphas
            .iter()
            .map(|a| (1.0 - a.norm_sqr()) / (z - a).norm_sqr())
            .sum();
        worst = worst.max((lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

/// Level curves of one RIF together with its singularities.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Portrait {
    pub rif_id: String,
    pub grid: usize,
    pub curves: Vec<LevelCurve>,
    pub singular_points: Vec<SingularPoint>,
}

/// `levels` values `exp(i pi (2k + 1) / levels)`.
pub fn level_grid(levels: usize) -> Vec<Complex64> {
    (0..levels)
        .map(|k| Complex64::from_polar(1.0, PI * (2 * k + 1) as f64 / levels as f64))
        .collect()
}

/// The grid [`level_grid`] extended by the nontangential values of `sing`.
pub fn portrait_levels(levels: usize, sing: &[SingularPoint]) -> Vec<Complex64> {
    let mut out = level_grid(levels);
    out.extend(sing.iter().map(|s| s.lambda0));
    out
}

/// Trace every distinct value in `lambdas`, ordered by `arg lambda`, and
/// flag value curves. `exceptional` marks a curve identified elsewhere as
/// exceptional.
pub fn portrait(
    rif_id: &str,
    f: &Rif,
    sing: &[SingularPoint],
    lambdas: &[Complex64],
    grid: usize,
    exceptional: Option<Complex64>,
) -> Result<Portrait> {
    let mut all: Vec<Complex64> = Vec::new();
    for &l in lambdas {
        let l = l / l.norm();
        if !all.iter().any(|m| (m - l).norm() < 1e-9) {
            all.push(l);
        }
    }
    all.sort_by(|a, b| a.arg().total_cmp(&b.arg()));
    let mut curves = all
        .par_iter()
        .map(|&l| trace_level(f, l, grid, sing))
        .collect::<Result<Vec<_>>>()?;
    if let Some(e) = exceptional {
        for c in &mut curves {
            c.exceptional = (c.lambda - e).norm() < 1e-9;
        }
    }
    Ok(Portrait {
        rif_id: rif_id.to_string(),
        grid,
        curves,
        singular_points: sing.to_vec(),
    })
}

impl Portrait {
    /// CSV with columns
    /// `lambda_re,lambda_im,flag,theta1,theta2,branch_id,component_id`.
    /// Branch ids are unique across the portrait; component ids are local to
    /// each curve.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("lambda_re,lambda_im,flag,theta1,theta2,branch_id,component_id\n");
        let mut next_branch = 0;
        for c in &self.curves {
            let flag = c.flag();
            for br in &c.branches {
                for (t, z) in br.thetas.iter().zip(&br.values) {
                    let _ = writeln!(
                        s,
                        "{:.12e},{:.12e},{},{:.12e},{:.12e},{},{}",
                        c.lambda.re,
                        c.lambda.im,
                        flag,
                        z.arg(),
                        wrap(*t),
                        next_branch,
                        br.component_id
                    );
                }
                next_branch += 1;
            }
            if let (Some(t2), Some(cid)) = (c.has_vertical, c.vertical_component) {
                for k in 0..c.grid {
                    let t1 = -PI + (k as f64 + 0.5) * 2.0 * PI / c.grid as f64;
                    let _ = writeln!(
                        s,
                        "{:.12e},{:.12e},{},{:.12e},{:.12e},{},{}",
                        c.lambda.re, c.lambda.im, flag, t1, wrap(t2), next_branch, cid
                    );
                }
                next_branch += 1;
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::catalog;
    use crate::rif::singularities;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn faveform_antidiagonal() {
        let f = catalog("faveform").unwrap();
        let sing = singularities(&f).unwrap();
        let c = trace_level(&f, -one(), 256, &sing).unwrap();
        assert!(c.has_vertical.is_none());
        for (t1, t2, _) in c.points() {
            assert!(angle_gap(t1, -t2) < 1e-9, "{t1} {t2}");
        }
        assert_eq!(components(&c, &sing).len(), 1);
        let r = c.max_residual(&f);
        assert!(r < 1e-8, "{r} {}", c.max_modulus_defect());
    }

    #[test]
    fn faveform_value_curve_is_the_axes() {
        let f = catalog("faveform").unwrap();
        let sing = singularities(&f).unwrap();
        let c = trace_level(&f, one(), 256, &sing).unwrap();
        assert!(c.has_vertical.is_some());
        assert_eq!(c.value_for, vec![0]);
        for (t1, _, _) in c.points() {
            assert!(t1.abs() < 1e-9);
        }
    }

    #[test]
    fn amy_value_curve() {
        let f = catalog("amy").unwrap();
        let sing = singularities(&f).unwrap();
        let c = trace_level(&f, one(), 256, &sing).unwrap();
        for (t1, t2, _) in c.points() {
            assert!(t1.abs() < 1e-8 || angle_gap(t1, -t2) < 1e-8, "{t1} {t2}");
        }
    }

    #[test]
    fn blaschke_identity_on_faveform() {
        let f = catalog("faveform").unwrap();
        let d = blaschke_identity_check(&f, Complex64::new(0.0, 1.0), 100).unwrap();
        assert!(d < 1e-9, "{d}");
    }

    #[test]
    fn horn_of_the_antidiagonal() {
        let f = catalog("faveform").unwrap();
        let sp = &singularities(&f).unwrap()[0];
        let h = horn_check(&f, sp, -one(), &LocalGrid::default()).unwrap();
        assert_eq!(h.len(), 1);
        assert!((h[0].linear_coeff + 1.0).abs() < 1e-6);
        assert!(h[0].pinch_ok);
        assert!(horn_check(&f, sp, one(), &LocalGrid::default()).is_err());
    }

    #[test]
    fn grid_below_minimum_is_rejected() {
        let f = catalog("faveform").unwrap();
        assert!(trace_level(&f, one(), 32, &[]).is_err());
    }

    #[test]
    fn glued_value_curve_has_two_components() {
        let f = catalog("glued-fave").unwrap();
        let sing = singularities(&f).unwrap();
        let c = trace_level(&f, sing[0].lambda0, 512, &sing).unwrap();
        let comps = components(&c, &sing);
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|k| k.singularities == vec![0]));
    }

    #[test]
    fn exceptional_minus_one_has_three_components() {
        let f = catalog("exceptional").unwrap();
        let sing = singularities(&f).unwrap();
        let c = trace_level(&f, -one(), 512, &sing).unwrap();
        let comps = components(&c, &sing);
        assert_eq!(comps.len(), 3);
        assert_eq!(comps.iter().filter(|k| k.singularities.is_empty()).count(), 1);
    }

    #[test]
    fn faveform_portrait_stays_in_two_quadrants() {
        let f = catalog("faveform").unwrap();
        let sing = singularities(&f).unwrap();
        let p = portrait("faveform", &f, &sing, &level_grid(16), 1024, None).unwrap();
        assert_eq!(p.curves.len(), 16);
        for c in &p.curves {
            assert!(c.distance_to(sing[0].tau()) < 1e-4);
            for (t1, t2, _) in c.points() {
                if t1.abs() < 0.1 && t2.abs() < 0.1 {
                    assert!(t1 * t2 <= 1e-12, "{t1} {t2}");
                }
            }
        }
        let csv = p.to_csv();
        assert!(csv.starts_with("lambda_re,lambda_im,flag,theta1,theta2,branch_id,component_id\n"));
        assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 7));
    }

    #[test]
    fn mbm_value_curves_are_flagged() {
        let f = catalog("mbm").unwrap();
        let sing = singularities(&f).unwrap();
        let p = portrait("mbm", &f, &sing, &portrait_levels(4, &sing), 256, None).unwrap();
        let flagged: Vec<_> = p.curves.iter().filter(|c| c.flag() == "value").collect();
        assert_eq!(flagged.len(), 2);
        let empty = portrait("mbm", &f, &sing, &[], 256, None).unwrap();
        assert!(empty.curves.is_empty());
        assert_eq!(empty.singular_points.len(), 2);
    }
}
