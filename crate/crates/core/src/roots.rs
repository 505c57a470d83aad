//! Univariate root finding and continuation of root families.
//!
//! Roots are found by Aberth–Ehrlich iteration (with a companion-matrix
//! fallback) and can be polished in double-double. Families of polynomials
//! indexed by an angle are followed by min-cost assignment between
//! consecutive parameter values, with a polynomial predictor and bisection
//! of steps whose assignment is ambiguous.

use crate::dd::{horner_with_derivative, DdComplex};
use crate::error::{Result, RifError};
use crate::poly2::UniPoly;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Default relative residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-12;
const MAX_ITER: usize = 200;
const RESTARTS: usize = 3;
/// Leading coefficients below this fraction of the largest one are treated as
/// zero (roots escaping to infinity).
const LEAD_CUT: f64 = 1e-14;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub residuals: Vec<f64>,
    pub degree_deficit: usize,
}

/// Relative backward residual `|p(z)| / sum |c_k| |z|^k`.
pub fn residual(c: &[Complex64], z: Complex64) -> f64 {
    let p = UniPoly::new(c.to_vec());
    let (num, den) = if z.norm() <= 1.0 {
        (p.eval(z).norm(), p.eval_abs(z))
    } else {
        let rev = UniPoly::new(c.iter().rev().copied().collect());
        let w = z.inv();
        (rev.eval(w).norm(), rev.eval_abs(w))
    };
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Newton correction `p(z)/p'(z)`, evaluated through the reversed polynomial
/// outside the unit disk to avoid overflow.
fn newton_ratio(c: &[Complex64], rev: &[Complex64], z: Complex64) -> Complex64 {
    let d = c.len() - 1;
    if z.norm() <= 1.0 {
        let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for &a in c.iter().rev() {
            dp = dp * z + p;
            p = p * z + a;
        }
        p / dp
    } else {
        let w = z.inv();
        let (mut q, mut dq) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for &a in rev.iter().rev() {
            dq = dq * w + q;
            q = q * w + a;
        }
        z * q / (q * d as f64 - w * dq)
    }
}

fn aberth(c: &[Complex64], rng: &mut ChaCha8Rng) -> Option<Vec<Complex64>> {
    let d = c.len() - 1;
    let rev: Vec<Complex64> = c.iter().rev().copied().collect();
    let rho = (c[0].norm() / c[d].norm()).powf(1.0 / d as f64);
    for attempt in 0..=RESTARTS {
        let jitter = if attempt == 0 { 0.0 } else { rng.random_range(-0.5..0.5) };
        let scale = if attempt == 0 { 1.0 } else { rng.random_range(0.5..2.0) };
        let mut z: Vec<Complex64> = (0..d)
            .map(|k| {
                Complex64::from_polar(
                    rho * scale,
                    2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4 + jitter,
                )
            })
            .collect();
        let mut done = vec![false; d];
        for _ in 0..MAX_ITER {
            let mut all = true;
            for i in 0..d {
                if done[i] {
                    continue;
                }
                let ratio = newton_ratio(c, &rev, z[i]);
                if !ratio.is_finite() {
                    done[i] = true;
                    continue;
                }
                let s: Complex64 = (0..d)
                    .filter(|&j| j != i)
                    .map(|j| (z[i] - z[j]).inv())
                    .sum();
                let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
                let w = if w.is_finite() { w } else { ratio };
                z[i] -= w;
                if w.norm() <= 2.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE)
                    || residual(c, z[i]) <= 2.0 * f64::EPSILON * d as f64
                {
                    done[i] = true;
                } else {
                    all = false;
                }
            }
            if all {
                break;
            }
        }
        if z.iter().all(|r| r.is_finite())
            && z.iter().all(|&r| residual(c, r) <= 1e3 * f64::EPSILON * d as f64)
        {
            return Some(z);
        }
    }
    None
}

fn companion_roots(c: &[Complex64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let lead = c[d];
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / lead;
    }
    let ev = m
        .clone()
        .schur()
        .eigenvalues()
        .map(|v| v.iter().copied().collect::<Vec<_>>())
        .unwrap_or_default();
    let rev: Vec<Complex64> = c.iter().rev().copied().collect();
    ev.into_iter()
        .map(|mut z| {
            for _ in 0..3 {
                let r = newton_ratio(c, &rev, z);
                if r.is_finite() {
                    z -= r;
                }
            }
            z
        })
        .collect()
}

/// All roots of `sum c[k] z^k`.
///
/// Leading coefficients that are negligible relative to the largest one are
/// dropped and counted in `degree_deficit`. Multiple roots come back as a
/// cluster of nearby copies.
///
/// # Errors
/// [`RifError::DegenerateInput`] if every coefficient is zero.
pub fn roots_univariate(c: &[Complex64], tol: f64) -> Result<RootSet> {
    let norm = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    if norm == 0.0 || c.is_empty() {
        return Err(RifError::DegenerateInput);
    }
    let declared = c.len() - 1;
    let top = c
        .iter()
        .rposition(|x| x.norm() > LEAD_CUT * norm)
        .expect("nonzero polynomial");
    let low = c.iter().position(|x| *x != Complex64::new(0.0, 0.0)).unwrap();
    let mut roots = vec![Complex64::new(0.0, 0.0); low];
    let core = &c[low..=top];
    let d = core.len() - 1;
    if d == 1 {
        roots.push(-core[0] / core[1]);
    } else if d > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED ^ d as u64);
        let worst = |v: &[Complex64]| v.iter().map(|&z| residual(core, z)).fold(0.0, f64::max);
        let found = match aberth(core, &mut rng) {
            Some(z) if worst(&z) <= tol => z,
            other => {
                let comp = companion_roots(core);
                match other {
                    Some(z) if worst(&z) <= worst(&comp) => z,
                    _ => comp,
                }
            }
        };
        roots.extend(found);
    }
    let residuals = roots.iter().map(|&z| residual(&c[..=top], z)).collect();
    Ok(RootSet {
        roots,
        residuals,
        degree_deficit: declared - top,
    })
}

/// Roots of a double-double polynomial: double roots of the rounded
/// coefficients refined by simultaneous double-double Aberth steps.
pub fn roots_dd(c: &[DdComplex]) -> Result<Vec<DdComplex>> {
    roots_dd_iters(c, 4)
}

/// [`roots_dd`] with a chosen number of refinement sweeps. Clusters from
/// multiple roots shrink linearly, so a few dozen sweeps pay off there.
pub fn roots_dd_iters(c: &[DdComplex], iters: usize) -> Result<Vec<DdComplex>> {
    let rounded: Vec<Complex64> = c.iter().map(|z| z.to_c64()).collect();
    let rs = roots_univariate(&rounded, DEFAULT_TOL)?;
    let top = rounded.len() - 1 - rs.degree_deficit;
    let coeffs = &c[..=top];
    let mut z: Vec<DdComplex> = rs.roots.iter().map(|&r| DdComplex::from(r)).collect();
    polish_all_dd(coeffs, &mut z, iters);
    Ok(z)
}

/// Simultaneous Aberth refinement in double-double. Keeps distinct roots
/// apart where plain Newton could collapse them onto one another. Stops
/// early once every correction is below `1e-30` relative.
pub fn polish_all_dd(c: &[DdComplex], z: &mut [DdComplex], iters: usize) {
    let n = z.len();
    for _ in 0..iters {
        let mut largest: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = horner_with_derivative(c, z[i]);
            if dp.norm_sqr().hi == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut s = DdComplex::ZERO;
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm_sqr().hi > 0.0 {
                        s = s + DdComplex::ONE / diff;
                    }
                }
            }
            let denom = DdComplex::ONE - ratio * s;
            let w = if denom.norm_sqr().hi > 0.0 { ratio / denom } else { ratio };
            if w.re.hi.is_finite() && w.im.hi.is_finite() {
                z[i] = z[i] - w;
                largest = largest.max(w.to_c64().norm() / (1.0 + z[i].to_c64().norm()));
            }
        }
        if largest < 1e-30 {
            break;
        }
    }
}

/// Newton polish of a single root in double-double.
pub fn polish_dd(c: &[DdComplex], z0: DdComplex, iters: usize) -> DdComplex {
    let mut z = z0;
    for _ in 0..iters {
        let (p, dp) = horner_with_derivative(c, z);
        if dp.norm_sqr().hi == 0.0 {
            break;
        }
        let step = p / dp;
        if !step.re.hi.is_finite() {
            break;
        }
        z = z - step;
    }
    z
}

/// Single-linkage grouping of points closer than `thr`.
pub fn cluster(points: &[Complex64], thr: f64) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(l: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while l[r] != r {
            r = l[r];
        }
        let mut c = i;
        while l[c] != r {
            let next = l[c];
            l[c] = r;
            c = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (points[i] - points[j]).norm() < thr {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut label, i);
        if index[r] == usize::MAX {
            index[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[index[r]].push(i);
    }
    groups
}

/// Refine a root of multiplicity `k` by Newton's method on the `(k-1)`-th
/// derivative, which has a simple root there.
pub fn refine_multiple_root_dd(c: &[DdComplex], z0: DdComplex, k: usize) -> DdComplex {
    let mut d: Vec<DdComplex> = c.to_vec();
    for _ in 1..k {
        if d.len() <= 1 {
            return z0;
        }
        d = d
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &x)| x.scale(crate::dd::Dd::new(i as f64)))
            .collect();
    }
    let z = polish_dd(&d, z0, 30);
    if (z - z0).norm().to_f64().is_finite() {
        z
    } else {
        z0
    }
}

/// Roots with `||z| - 1| <= tol`, projected radially onto the circle.
pub fn unimodular_filter(rs: &RootSet, tol: f64) -> Vec<Complex64> {
    rs.roots
        .iter()
        .filter(|z| (z.norm() - 1.0).abs() <= tol)
        .map(|z| z / z.norm())
        .collect()
}

/// Min-cost assignment of rows to columns (Hungarian algorithm with
/// potentials). Works for rectangular matrices; `result[i]` is the column of
/// row `i`, or `None` when there are more rows than columns.
pub fn assign(cost: &[Vec<f64>]) -> Vec<Option<usize>> {
    let rows = cost.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = cost[0].len();
    if cols == 0 {
        return vec![None; rows];
    }
    if rows > cols {
        let t: Vec<Vec<f64>> = (0..cols)
            .map(|j| (0..rows).map(|i| cost[i][j]).collect())
            .collect();
        let col_of = assign(&t);
        let mut out = vec![None; rows];
        for (j, i) in col_of.into_iter().enumerate() {
            if let Some(i) = i {
                out[i] = Some(j);
            }
        }
        return out;
    }
    // rows <= cols, 1-based arrays as in the classical formulation.
    let n = rows;
    let m = cols;
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![inf; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            if j1 == 0 {
                break;
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![None; n];
    for j in 1..=m {
        if p[j] != 0 {
            out[p[j] - 1] = Some(j - 1);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BranchKind {
    ZeroSet,
    Level { lambda: Complex64 },
}

/// A sampled curve `z1 = psi(e^{i theta})`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Branch {
    pub thetas: Vec<f64>,
    pub values: Vec<Complex64>,
    pub kind: BranchKind,
    pub component_id: usize,
    /// Indices into the singularity list whose points this branch reaches.
    pub anchors: Vec<usize>,
}

impl Branch {
    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }
}

/// Raw output of the tracker: samples in parameter order.
#[derive(Clone, Debug)]
pub struct Track {
    pub thetas: Vec<f64>,
    pub values: Vec<DdComplex>,
}

#[derive(Clone, Debug)]
pub struct TrackOptions {
    /// Absolute jump threshold; `None` derives it from recent root speed.
    pub match_jump: Option<f64>,
    /// Bisect ambiguous steps instead of failing.
    pub refine: bool,
    /// Smallest step the bisection may produce.
    pub min_step: f64,
    /// Pairs whose swapped cost is within this factor are ambiguous.
    pub ambiguity_ratio: f64,
}

impl Default for TrackOptions {
    fn default() -> Self {
        TrackOptions {
            match_jump: None,
            refine: true,
            min_step: 1e-9,
            ambiguity_ratio: 1.2,
        }
    }
}

fn predict(th: &[f64], vals: &[DdComplex], t: f64) -> Complex64 {
    let k = th.len().min(3);
    let xs = &th[th.len() - k..];
    let ys: Vec<Complex64> = vals[vals.len() - k..].iter().map(|v| v.to_c64()).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..k {
        let mut w = 1.0;
        for j in 0..k {
            if i != j {
                w *= (t - xs[j]) / (xs[i] - xs[j]);
            }
        }
        acc += ys[i] * w;
    }
    acc
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    v.sort_by(|a, b| a.total_cmp(b));
    v[v.len() / 2]
}

struct Attempt {
    assignment: Vec<Option<usize>>,
    ambiguous: Option<f64>,
}

fn try_match(
    tracks: &[Track],
    active: &[usize],
    roots: &[DdComplex],
    t: f64,
    opts: &TrackOptions,
) -> Attempt {
    let preds: Vec<Complex64> = active
        .iter()
        .map(|&a| predict(&tracks[a].thetas, &tracks[a].values, t))
        .collect();
    let rc: Vec<Complex64> = roots.iter().map(|r| r.to_c64()).collect();
    let cost: Vec<Vec<f64>> = preds
        .iter()
        .map(|p| rc.iter().map(|r| (p - r).norm()).collect())
        .collect();
    let assignment = assign(&cost);
    let floor = |z: Complex64| 1e-12 * (1.0 + z.norm());
    let mut worst: Option<f64> = None;
    for a in 0..active.len() {
        let Some(i) = assignment[a] else { continue };
        let ca = cost[a][i].max(floor(rc[i]));
        // Competing matched rows.
        for b in (a + 1)..active.len() {
            let Some(j) = assignment[b] else { continue };
            let cb = cost[b][j].max(floor(rc[j]));
            let swapped = cost[a][j] + cost[b][i];
            let ratio = swapped / (ca + cb);
            if ratio < opts.ambiguity_ratio {
                worst = Some(worst.map_or(ratio, |w: f64| w.min(ratio)));
            }
        }
        // Unmatched roots competing for this row.
        for (k, _) in rc.iter().enumerate() {
            if assignment.contains(&Some(k)) {
                continue;
            }
            let ratio = cost[a][k] / ca;
            if ratio < opts.ambiguity_ratio {
                worst = Some(worst.map_or(ratio, |w: f64| w.min(ratio)));
            }
        }
    }
    Attempt {
        assignment,
        ambiguous: worst,
    }
}

/// Follow the roots produced by `oracle` over the sorted parameter grid.
///
/// # Errors
/// Propagates oracle errors; [`RifError::TrackingAmbiguity`] when a step is
/// ambiguous and `opts.refine` is off.
pub fn track_roots<F>(oracle: F, thetas: &[f64], opts: &TrackOptions) -> Result<Vec<Track>>
where
    F: Fn(f64) -> Result<Vec<DdComplex>>,
{
    let mut tracks: Vec<Track> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    if thetas.is_empty() {
        return Ok(tracks);
    }
    for r in oracle(thetas[0])? {
        tracks.push(Track {
            thetas: vec![thetas[0]],
            values: vec![r],
        });
        active.push(tracks.len() - 1);
    }
    let mut cur = thetas[0];
    // Bisection midpoints are marked `false`.
    let mut pending: Vec<(f64, bool)> = thetas[1..].iter().rev().map(|&t| (t, true)).collect();
    let mut force_next = false;
    while let Some(&(target, _)) = pending.last() {
        let roots = oracle(target)?;
        let att = try_match(&tracks, &active, &roots, target, opts);
        let mut forced = false;
        if let Some(ratio) = att.ambiguous {
            if !force_next && (target - cur).abs() > opts.min_step {
                if !opts.refine {
                    return Err(RifError::TrackingAmbiguity { theta: target, ratio });
                }
                pending.push((0.5 * (cur + target), false));
                continue;
            }
            forced = true;
        }
        pending.pop();
        // Ambiguity that survives bisection is a crossing or a tight cluster:
        // assign the next grid point directly instead of creeping at min_step.
        force_next = forced && !force_next;
        if force_next {
            while pending.last().is_some_and(|p| !p.1) {
                pending.pop();
            }
        }
        let mut used = vec![false; roots.len()];
        let mut next_active = Vec::with_capacity(roots.len());
        for (a, &ti) in active.iter().enumerate() {
            let Some(k) = att.assignment[a] else { continue };
            let tr = &tracks[ti];
            let last = tr.values[tr.values.len() - 1].to_c64();
            let step = (roots[k].to_c64() - last).norm();
            let jump = match opts.match_jump {
                Some(j) => j,
                None if tr.thetas.len() >= 4 => {
                    let n = tr.thetas.len();
                    let speeds: Vec<f64> = (n.saturating_sub(6)..n - 1)
                        .map(|s| {
                            (tr.values[s + 1].to_c64() - tr.values[s].to_c64()).norm()
                                / (tr.thetas[s + 1] - tr.thetas[s]).abs().max(f64::MIN_POSITIVE)
                        })
                        .collect();
                    let pred = predict(&tr.thetas, &tr.values, target);
                    // Large steps are fine when the predictor saw them coming.
                    if (roots[k].to_c64() - pred).norm() * 4.0 < step {
                        f64::INFINITY
                    } else {
                        8.0 * (target - cur).abs() * median(speeds) + 1e-9
                    }
                }
                None => f64::INFINITY,
            };
            if step > jump {
                continue;
            }
            used[k] = true;
            tracks[ti].thetas.push(target);
            tracks[ti].values.push(roots[k]);
            next_active.push(ti);
        }
        for (k, r) in roots.iter().enumerate() {
            if !used[k] {
                tracks.push(Track {
                    thetas: vec![target],
                    values: vec![*r],
                });
                next_active.push(tracks.len() - 1);
            }
        }
        active = next_active;
        cur = target;
    }
    Ok(tracks)
}

/// Track the roots of a family of polynomials `theta -> family(theta)`.
///
/// # Errors
/// See [`track_roots`]; a family member that is identically zero yields
/// [`RifError::DegenerateInput`].
pub fn track_family<F>(
    family: F,
    thetas: &[f64],
    kind: BranchKind,
    opts: &TrackOptions,
) -> Result<Vec<Branch>>
where
    F: Fn(f64) -> UniPoly,
{
    let tracks = track_roots(
        |t| {
            let rs = roots_univariate(&family(t).coeffs, DEFAULT_TOL)?;
            Ok(rs.roots.into_iter().map(DdComplex::from).collect())
        },
        thetas,
        opts,
    )?;
    Ok(tracks
        .into_iter()
        .map(|t| Branch {
            thetas: t.thetas,
            values: t.values.iter().map(|v| v.to_c64()).collect(),
            kind,
            component_id: 0,
            anchors: Vec::new(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn quadratic_roots() {
        let rs = roots_univariate(&[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], DEFAULT_TOL).unwrap();
        let r = sorted(rs.roots);
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn triple_root_at_zero() {
        let rs = roots_univariate(&[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], DEFAULT_TOL)
            .unwrap();
        assert_eq!(rs.roots, vec![c(0.0, 0.0); 3]);
    }

    #[test]
    fn axis_structure_of_faveform_value_slice() {
        // ptilde + p at z2 = 1 for p = 2 - z1 - z2 is (z1 - 1) + (1 - z1) = 0
        // identically, and ptilde - p = 2 z1 - 2 vanishes at z1 = 1.
        let rs = roots_univariate(&[c(-2.0, 0.0), c(2.0, 0.0)], DEFAULT_TOL).unwrap();
        assert!((rs.roots[0] - 1.0).norm() < 1e-15);
        assert!(roots_univariate(&[c(0.0, 0.0), c(0.0, 0.0)], DEFAULT_TOL).is_err());
    }

    #[test]
    fn degree_deficit_counts_vanishing_leading_terms() {
        let rs = roots_univariate(&[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)], DEFAULT_TOL).unwrap();
        assert_eq!(rs.roots.len() + rs.degree_deficit, 2);
        assert_eq!(rs.degree_deficit, 1);
    }

    #[test]
    fn filter_examples() {
        let rs = RootSet {
            roots: vec![c(1.0, 0.0), c(0.5, 0.0), c(0.0, -1.0)],
            residuals: vec![0.0; 3],
            degree_deficit: 0,
        };
        assert_eq!(unimodular_filter(&rs, 1e-8), vec![c(1.0, 0.0), c(0.0, -1.0)]);
        assert!(unimodular_filter(&RootSet::default(), 1e-8).is_empty());
    }

    #[test]
    fn hungarian_small() {
        let cost = vec![vec![4.0, 1.0, 3.0], vec![2.0, 0.0, 5.0], vec![3.0, 2.0, 2.0]];
        assert_eq!(assign(&cost), vec![Some(1), Some(0), Some(2)]);
        let rect = vec![vec![1.0, 9.0], vec![9.0, 1.0], vec![5.0, 6.0]];
        let a = assign(&rect);
        assert_eq!(a.iter().filter(|x| x.is_some()).count(), 2);
        assert_eq!(a[0], Some(0));
        assert_eq!(a[1], Some(1));
    }

    #[test]
    fn single_moving_root() {
        let thetas: Vec<f64> = (0..200).map(|k| -3.1 + 6.2 * k as f64 / 199.0).collect();
        let br = track_family(
            |t| UniPoly::new(vec![-Complex64::from_polar(1.0, t), c(1.0, 0.0)]),
            &thetas,
            BranchKind::ZeroSet,
            &TrackOptions::default(),
        )
        .unwrap();
        assert_eq!(br.len(), 1);
        assert_eq!(br[0].len(), 200);
    }

    #[test]
    fn crossing_roots_keep_their_identity() {
        // z = t and z = -t cross at t = 0; straight lines must not swap.
        let thetas: Vec<f64> = (0..101).map(|k| -1.0 + 0.02 * k as f64 + 0.001).collect();
        let br = track_family(
            |t| UniPoly::new(vec![c(-t * t, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
            &thetas,
            BranchKind::ZeroSet,
            &TrackOptions::default(),
        )
        .unwrap();
        assert_eq!(br.len(), 2);
        for b in &br {
            let first = b.values[0].re.signum();
            let last = b.values[b.len() - 1].re.signum();
            assert_ne!(first, last);
        }
    }

    #[test]
    fn dd_polish_reaches_double_double_accuracy() {
        // (z - (1 - 1e-20)) (z + 0.5)
        let a = crate::dd::Dd::ONE - crate::dd::Dd::new(1e-20);
        let ad = DdComplex::new(a, crate::dd::Dd::ZERO);
        let half = DdComplex::from(c(0.5, 0.0));
        let coeffs = vec![-(ad * half), half - ad, DdComplex::ONE];
        let r = roots_dd(&coeffs).unwrap();
        let best = r
            .iter()
            .map(|z| z.one_minus_modulus().to_f64())
            .fold(f64::INFINITY, |m, x| if (x - 1e-20).abs() < (m - 1e-20).abs() { x } else { m });
        assert!((best - 1e-20).abs() < 1e-30);
    }

    #[test]
    fn companion_fallback_agrees() {
        let cs = UniPoly::from_roots(&[c(0.5, 0.1), c(-2.0, 0.0), c(0.0, 3.0)]).coeffs;
        let r = sorted(companion_roots(&cs));
        let want = sorted(vec![c(0.5, 0.1), c(-2.0, 0.0), c(0.0, 3.0)]);
        for (a, b) in r.iter().zip(want.iter()) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    proptest! {
        #[test]
        fn reconstruction_and_residuals(
            roots in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..12),
            lead in 0.1f64..10.0,
        ) {
            let want: Vec<Complex64> = roots.iter().map(|&(a, b)| c(a, b)).collect();
            let poly = UniPoly::from_roots(&want).scale(c(lead, 0.0));
            let rs = roots_univariate(&poly.coeffs, DEFAULT_TOL).unwrap();
            prop_assert_eq!(rs.roots.len() + rs.degree_deficit, poly.coeffs.len() - 1);
            for (&z, &res) in rs.roots.iter().zip(rs.residuals.iter()) {
                prop_assert!(res <= DEFAULT_TOL, "residual {} at {}", res, z);
            }
            let rebuilt = UniPoly::from_roots(&rs.roots).scale(c(lead, 0.0));
            let scale = poly.norm_inf();
            for (a, b) in rebuilt.coeffs.iter().zip(poly.coeffs.iter()) {
                prop_assert!((a - b).norm() <= 1e-8 * scale);
            }
        }
    }
}
