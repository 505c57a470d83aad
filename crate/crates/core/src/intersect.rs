//! Resultants, intersection multiplicities, Bézout audits and the identities
//! relating multiplicities to orders of contact.
//!
//! Sylvester determinants are evaluated in double-double. Multiplicities of
//! common zeros are read off as winding numbers of a sheared resultant on
//! small circles, which avoids forming and factoring the resultant exactly.

use crate::contact::{
    contact_matrix, has_vertical_component, local_branches, zero_branch_orders, LocalGrid, LocalKind,
};
use crate::dd::{Dd, DdComplex};
use crate::error::{Result, RifError};
use crate::poly2::{BiPoly, UniPoly, Var};
use crate::rif::{singularities, Rif};
use crate::roots::{cluster, roots_dd_iters, roots_univariate, DEFAULT_TOL};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Default seed for the random shears.
pub const DEFAULT_SEED: u64 = 0x5EED;
const MAX_SHEARS: usize = 5;

/// Determinant by Gaussian elimination with partial pivoting.
pub fn det_dd(mut a: Vec<Vec<DdComplex>>) -> DdComplex {
    let n = a.len();
    let mut det = DdComplex::ONE;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .norm_sqr()
                    .hi
                    .total_cmp(&a[j][col].norm_sqr().hi)
            })
            .unwrap();
        if a[piv][col].norm_sqr().hi == 0.0 {
            return DdComplex::ZERO;
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col];
        det = det * p;
        let inv = DdComplex::ONE / p;
        for r in (col + 1)..n {
            let f = a[r][col] * inv;
            if f.norm_sqr().hi == 0.0 {
                continue;
            }
            for c in (col + 1)..n {
                let t = f * a[col][c];
                a[r][c] = a[r][c] - t;
            }
        }
    }
    det
}

fn sylvester_matrix(a: &[DdComplex], b: &[DdComplex]) -> Vec<Vec<DdComplex>> {
    let da = a.len() - 1;
    let db = b.len() - 1;
    let n = da + db;
    let mut m = vec![vec![DdComplex::ZERO; n]; n];
    for k in 0..db {
        for (t, &c) in a.iter().rev().enumerate() {
            m[k][k + t] = c;
        }
    }
    for k in 0..da {
        for (t, &c) in b.iter().rev().enumerate() {
            m[db + k][k + t] = c;
        }
    }
    m
}

/// Resultant of two univariate polynomials with formal degrees
/// `a.len() - 1` and `b.len() - 1`.
pub fn sylvester_resultant(a: &[DdComplex], b: &[DdComplex]) -> DdComplex {
    det_dd(sylvester_matrix(a, b))
}

/// Hadamard bound of the Sylvester matrix, the scale for rounding noise.
fn sylvester_scale(a: &[DdComplex], b: &[DdComplex]) -> f64 {
    let na: f64 = a.iter().map(|c| c.to_c64().norm_sqr()).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|c| c.to_c64().norm_sqr()).sum::<f64>().sqrt();
    na.powi((b.len() - 1) as i32) * nb.powi((a.len() - 1) as i32)
}

fn degree_in(p: &BiPoly, var: Var) -> usize {
    let (m, n) = p.tight_bidegree();
    match var {
        Var::Z1 => m,
        Var::Z2 => n,
    }
}

/// Slice keeping the eliminated variable, truncated to its tight degree.
fn slice_for(p: &BiPoly, eliminate: Var, w: DdComplex) -> Vec<DdComplex> {
    let mut s = p.slice_dd(eliminate.other(), w);
    s.truncate(degree_in(p, eliminate) + 1);
    s
}

/// Coefficients (ascending, double-double) of `Res_eliminate(p, q)` as a
/// polynomial in the remaining variable.
///
/// # Errors
/// [`RifError::IdenticallyZero`] when the resultant vanishes identically.
pub fn resultant_dd(p: &BiPoly, q: &BiPoly, eliminate: Var) -> Result<Vec<DdComplex>> {
    let keep = eliminate.other();
    let da = degree_in(p, eliminate);
    let db = degree_in(q, eliminate);
    let bound = da * degree_in(q, keep) + db * degree_in(p, keep);
    let nodes = bound + 1;
    let mut vals = Vec::with_capacity(nodes);
    let mut max_val: f64 = 0.0;
    let mut max_scale: f64 = 0.0;
    for k in 0..nodes {
        let w = DdComplex::root_of_unity(k as i64, nodes as i64);
        let a = slice_for(p, eliminate, w);
        let b = slice_for(q, eliminate, w);
        let r = sylvester_resultant(&a, &b);
        max_val = max_val.max(r.to_c64().norm());
        max_scale = max_scale.max(sylvester_scale(&a, &b));
        vals.push(r);
    }
    if max_val <= 1e-24 * max_scale {
        return Err(RifError::IdenticallyZero);
    }
    let inv_n = Dd::new(nodes as f64).recip();
    let coeffs = (0..nodes)
        .map(|j| {
            let mut acc = DdComplex::ZERO;
            for (k, v) in vals.iter().enumerate() {
                acc = acc + *v * DdComplex::root_of_unity(-((j * k) as i64), nodes as i64);
            }
            acc.scale(inv_n)
        })
        .collect();
    Ok(coeffs)
}

/// `Res_eliminate(p, q)` rounded to double precision.
///
/// # Errors
/// [`RifError::IdenticallyZero`] when `p` and `q` share a factor.
pub fn resultant(p: &BiPoly, q: &BiPoly, eliminate: Var) -> Result<UniPoly> {
    let c = resultant_dd(p, q, eliminate)?;
    Ok(UniPoly::new(c.iter().map(|z| z.to_c64()).collect()).trimmed(1e-20))
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn total_degree(p: &BiPoly) -> usize {
    p.terms().map(|(i, j, _)| i + j).max().unwrap_or(0)
}

/// Coefficients in `z1` of `p(z1, v + s z1)` at a fixed `v`.
fn sheared_slice(p: &BiPoly, s: Complex64, v: DdComplex) -> Vec<DdComplex> {
    let d = total_degree(p);
    let (_, n) = p.bidegree();
    let sd = DdComplex::from(s);
    let mut vpow = vec![DdComplex::ONE; n + 1];
    let mut spow = vec![DdComplex::ONE; n + 1];
    for k in 1..=n {
        vpow[k] = vpow[k - 1] * v;
        spow[k] = spow[k - 1] * sd;
    }
    let mut out = vec![DdComplex::ZERO; d + 1];
    for (i, j, c) in p.terms() {
        let cd = DdComplex::from(c);
        for k in 0..=j {
            let t = cd * spow[k] * vpow[j - k];
            out[i + k] = out[i + k] + t.scale(Dd::new(binomial(j, k)));
        }
    }
    out
}

/// A sheared pair `(p, q)` in coordinates `(z1, v)` with `z2 = v + s z1`.
struct Sheared<'a> {
    p: &'a BiPoly,
    q: &'a BiPoly,
    s: Complex64,
}

impl<'a> Sheared<'a> {
    /// Reject shears that make a leading coefficient in `z1` nearly vanish.
    fn new(p: &'a BiPoly, q: &'a BiPoly, s: Complex64) -> Option<Self> {
        for f in [p, q] {
            let d = total_degree(f);
            let (lead, size) = f
                .terms()
                .filter(|(i, j, _)| i + j == d)
                .fold((Complex64::new(0.0, 0.0), 0.0), |(a, b), (_, j, c)| {
                    let t = c * s.powu(j as u32);
                    (a + t, b + t.norm())
                });
            if lead.norm() < 1e-3 * size {
                return None;
            }
        }
        Some(Sheared { p, q, s })
    }

    fn eval(&self, v: DdComplex) -> (DdComplex, f64) {
        let a = sheared_slice(self.p, self.s, v);
        let b = sheared_slice(self.q, self.s, v);
        (sylvester_resultant(&a, &b), sylvester_scale(&a, &b))
    }

    fn degree_bound(&self) -> usize {
        let (_, np) = self.p.tight_bidegree();
        let (_, nq) = self.q.tight_bidegree();
        total_degree(self.p) * nq + total_degree(self.q) * np
    }

    /// Winding number of the resultant around `center` at radius `rho`,
    /// with the minimum modulus seen relative to the rounding scale.
    fn winding(&self, center: DdComplex, rho: f64) -> Option<(i64, f64)> {
        let mut m: usize = 64;
        while m <= 4096 {
            let mut vals = Vec::with_capacity(m);
            let mut snr = f64::INFINITY;
            for k in 0..m {
                let v = center + DdComplex::root_of_unity(k as i64, m as i64).scale(Dd::new(rho));
                let (r, scale) = self.eval(v);
                snr = snr.min(r.to_c64().norm() / scale);
                vals.push(r);
            }
            let mut total = 0.0;
            let mut ok = true;
            for k in 0..m {
                let a = vals[k];
                let b = vals[(k + 1) % m];
                let ratio = (b / a).to_c64();
                let inc = ratio.arg();
                if !inc.is_finite() || inc.abs() > std::f64::consts::FRAC_PI_4 {
                    ok = false;
                    break;
                }
                total += inc;
            }
            if ok {
                let w = total / (2.0 * std::f64::consts::PI);
                return Some((w.round() as i64, snr));
            }
            m *= 2;
        }
        None
    }

    /// Multiplicity at `v0` from the smallest-radius run of three equal
    /// winding numbers among circles where the signal clears rounding noise.
    fn multiplicity_at(&self, v0: DdComplex, rho_max: f64) -> Option<usize> {
        let mut counts: Vec<i64> = Vec::new();
        for j in 0..48 {
            let rho = rho_max * 0.5f64.powf(j as f64 / 2.0);
            match self.winding(v0, rho) {
                Some((w, snr)) if snr > 1e-29 && w >= 0 => counts.push(w),
                _ => break,
            }
        }
        let mut best = None;
        for i in 0..counts.len().saturating_sub(2) {
            if counts[i] == counts[i + 1] && counts[i] == counts[i + 2] {
                best = Some(counts[i] as usize);
            }
        }
        best
    }
}

fn random_shear(rng: &mut ChaCha8Rng) -> Complex64 {
    let r = rng.random_range(0.5..1.5);
    let t = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    Complex64::from_polar(r, t)
}

/// Intersection multiplicity of `p` and `q` at the common zero `tau`.
///
/// # Errors
/// [`RifError::ShearFailure`] if no shear among five gives a stable count.
pub fn intersection_multiplicity(
    p: &BiPoly,
    q: &BiPoly,
    tau: (Complex64, Complex64),
    seed: u64,
) -> Result<usize> {
    intersection_multiplicity_with_shear(p, q, tau, seed).map(|(n, _)| n)
}

/// As [`intersection_multiplicity`], also returning the shear used.
pub fn intersection_multiplicity_with_shear(
    p: &BiPoly,
    q: &BiPoly,
    tau: (Complex64, Complex64),
    seed: u64,
) -> Result<(usize, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_SHEARS {
        let s = random_shear(&mut rng);
        let Some(sh) = Sheared::new(p, q, s) else { continue };
        let v0 = DdComplex::from(tau.1) - DdComplex::from(s) * DdComplex::from(tau.0);
        if let Some(n) = sh.multiplicity_at(v0, 0.25) {
            return Ok((n, s));
        }
    }
    Err(RifError::ShearFailure {
        attempts: MAX_SHEARS,
    })
}

/// A common zero of two polynomials found by the audit.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CommonZero {
    /// Coordinates; `None` marks the point at infinity in that variable.
    pub z1: Option<Complex64>,
    pub z2: Option<Complex64>,
    pub multiplicity: usize,
    pub on_torus: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MultiplicityReport {
    pub torus_points: Vec<CommonZero>,
    pub off_torus_points: Vec<CommonZero>,
    pub infinity_points: Vec<CommonZero>,
    pub at_infinity: usize,
    pub total: usize,
    pub bezout_expected: usize,
    pub shear_used: Complex64,
}

impl MultiplicityReport {
    pub fn torus_total(&self) -> usize {
        self.torus_points.iter().map(|z| z.multiplicity).sum()
    }

    pub fn off_torus_total(&self) -> usize {
        self.off_torus_points.iter().map(|z| z.multiplicity).sum()
    }
}

/// Finite common zeros of `p` and `q` with multiplicities, from the roots of
/// a sheared resultant. Returns the points and the shear.
pub fn common_zeros(
    p: &BiPoly,
    q: &BiPoly,
    seed: u64,
) -> Result<(Vec<(Complex64, Complex64, usize)>, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_SHEARS {
        let s = random_shear(&mut rng);
        let Some(sh) = Sheared::new(p, q, s) else { continue };
        let nodes = sh.degree_bound() + 1;
        let mut vals = Vec::with_capacity(nodes);
        let mut max_val: f64 = 0.0;
        let mut max_scale: f64 = 0.0;
        for k in 0..nodes {
            let (r, scale) = sh.eval(DdComplex::root_of_unity(k as i64, nodes as i64));
            max_val = max_val.max(r.to_c64().norm());
            max_scale = max_scale.max(scale);
            vals.push(r);
        }
        if max_val <= 1e-24 * max_scale {
            return Err(RifError::IdenticallyZero);
        }
        let inv_n = Dd::new(nodes as f64).recip();
        let mut coeffs: Vec<DdComplex> = (0..nodes)
            .map(|j| {
                let mut acc = DdComplex::ZERO;
                for (k, v) in vals.iter().enumerate() {
                    acc = acc + *v * DdComplex::root_of_unity(-((j * k) as i64), nodes as i64);
                }
                acc.scale(inv_n)
            })
            .collect();
        let cmax = coeffs.iter().map(|c| c.to_c64().norm()).fold(0.0, f64::max);
        while coeffs.len() > 1 && coeffs[coeffs.len() - 1].to_c64().norm() <= 1e-20 * cmax {
            coeffs.pop();
        }
        if coeffs.len() == 1 {
            return Ok((Vec::new(), s));
        }
        let vroots = roots_dd_iters(&coeffs, 120)?;
        let approx: Vec<Complex64> = vroots.iter().map(|z| z.to_c64()).collect();
        let groups = cluster(&approx, 0.03);
        let mut out = Vec::new();
        let mut consistent = true;
        for g in &groups {
            let center = g
                .iter()
                .fold(DdComplex::ZERO, |acc, &i| acc + vroots[i])
                .scale(Dd::new(g.len() as f64).recip());
            let a = sheared_slice(p, s, center);
            let b = sheared_slice(q, s, center);
            let Some(z1) = common_root(&a, &b) else {
                consistent = false;
                break;
            };
            let z2 = center.to_c64() + s * z1;
            out.push((z1, z2, g.len()));
        }
        if consistent {
            return Ok((out, s));
        }
    }
    Err(RifError::ShearFailure {
        attempts: MAX_SHEARS,
    })
}

/// The root of `a` at which `b` is smallest, averaged over its cluster.
fn common_root(a: &[DdComplex], b: &[DdComplex]) -> Option<Complex64> {
    let ac: Vec<Complex64> = a.iter().map(|z| z.to_c64()).collect();
    let bc = UniPoly::new(b.iter().map(|z| z.to_c64()).collect());
    let rs = roots_univariate(&ac, DEFAULT_TOL).ok()?;
    let groups = cluster(&rs.roots, 0.03);
    groups
        .iter()
        .map(|g| {
            let c = g.iter().map(|&i| rs.roots[i]).sum::<Complex64>() / g.len() as f64;
            let scale = bc.eval_abs(Complex64::new(c.norm().max(1.0), 0.0));
            let rel = bc.eval(c).norm() / scale.max(f64::MIN_POSITIVE);
            (c, rel)
        })
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(c, _)| c)
}

/// Tally all common zeros of `p` and `ptilde` in the four charts of
/// `(C u {inf})^2`, without checking the total.
pub fn bezout_tally(f: &Rif, seed: u64) -> Result<MultiplicityReport> {
    let p = f.p();
    let q = f.ptilde();
    let (m, n) = p.bidegree();
    let (finite, shear) = common_zeros(p, q, seed)?;
    // Clustered roots are only accurate to about 1e-6; torus candidates
    // snap to the singular points, which are located in extended precision.
    let sing = singularities(f)?;
    let mut torus_points = Vec::new();
    let mut off_torus_points = Vec::new();
    for (a, b, k) in finite {
        let snapped = sing
            .iter()
            .find(|sp| (sp.tau[0] - a).norm() < 1e-4 && (sp.tau[1] - b).norm() < 1e-4);
        if let Some(sp) = snapped {
            let (ta, tb) = sp.tau();
            let mult = intersection_multiplicity(p, q, (ta, tb), seed).unwrap_or(k);
            torus_points.push(CommonZero {
                z1: Some(ta),
                z2: Some(tb),
                multiplicity: mult,
                on_torus: true,
            });
        } else {
            off_torus_points.push(CommonZero {
                z1: Some(a),
                z2: Some(b),
                multiplicity: k,
                on_torus: false,
            });
        }
    }
    let small = |z: Complex64| z.norm() < 1e-6;
    let mut infinity_points = Vec::new();
    // (z1, inf): reverse z2 and keep points with w2 = 0.
    let p2 = p.reverse(Var::Z2);
    let q2 = q.reverse(Var::Z2);
    for (a, w, k) in common_zeros(&p2, &q2, seed)?.0 {
        if small(w) {
            infinity_points.push(CommonZero {
                z1: Some(a),
                z2: None,
                multiplicity: k,
                on_torus: false,
            });
        }
    }
    let p1 = p.reverse(Var::Z1);
    let q1 = q.reverse(Var::Z1);
    for (w, b, k) in common_zeros(&p1, &q1, seed)?.0 {
        if small(w) {
            infinity_points.push(CommonZero {
                z1: None,
                z2: Some(b),
                multiplicity: k,
                on_torus: false,
            });
        }
    }
    let p12 = p1.with_bidegree(m, n)?.reverse(Var::Z2);
    let q12 = q1.with_bidegree(m, n)?.reverse(Var::Z2);
    for (w1, w2, k) in common_zeros(&p12, &q12, seed)?.0 {
        if small(w1) && small(w2) {
            infinity_points.push(CommonZero {
                z1: None,
                z2: None,
                multiplicity: k,
                on_torus: false,
            });
        }
    }
    let at_infinity = infinity_points.iter().map(|z| z.multiplicity).sum();
    let per_point: usize = torus_points
        .iter()
        .chain(off_torus_points.iter())
        .map(|z| z.multiplicity)
        .sum();
    Ok(MultiplicityReport {
        torus_points,
        off_torus_points,
        infinity_points,
        at_infinity,
        total: per_point + at_infinity,
        bezout_expected: 2 * m * n,
        shear_used: shear,
    })
}

/// Bézout audit: all intersection multiplicities of `p` and `ptilde`,
/// including points at infinity, must add up to `2mn`.
///
/// # Errors
/// [`RifError::AuditMismatch`] when they do not.
pub fn bezout_audit(f: &Rif, seed: u64) -> Result<MultiplicityReport> {
    let r = bezout_tally(f, seed)?;
    if r.total != r.bezout_expected {
        return Err(RifError::AuditMismatch {
            total: r.total,
            expected: r.bezout_expected,
        });
    }
    Ok(r)
}

/// Both sides of the identity expressing `N_tau(p, ptilde)` as the sum of
/// the orders of contact between the branches of two level sets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumIdentityReport {
    pub n: usize,
    /// `kappa[i][j]` for branch `i` of the `mu` level set and `j` of `nu`.
    pub kappa: Vec<Vec<u32>>,
    pub sum_kappa: usize,
    pub holds: bool,
}

/// Compare `N_tau` with the sum of all pairwise orders of contact between
/// the branches through `tau` of the level sets at `mu` and `nu`.
///
/// # Errors
/// [`RifError::VerticalComponent`] if either level set contains the line
/// `{z2 = tau2}`; fitting errors are propagated.
pub fn contact_sum_identity(
    f: &Rif,
    tau: (Complex64, Complex64),
    mu: Complex64,
    nu: Complex64,
    grid: &LocalGrid,
    seed: u64,
) -> Result<SumIdentityReport> {
    if (mu - nu).norm() < 1e-12 {
        return Err(RifError::InvalidInput("level values must differ".into()));
    }
    let kinds = [LocalKind::Level { lambda: mu }, LocalKind::Level { lambda: nu }];
    if kinds.iter().any(|&k| has_vertical_component(f, k, tau.1)) {
        return Err(RifError::VerticalComponent);
    }
    let a = local_branches(f, kinds[0], tau, grid)?;
    let b = local_branches(f, kinds[1], tau, grid)?;
    let kappa = contact_matrix(&a, &b)
        .into_iter()
        .map(|row| row.into_iter().collect::<Result<Vec<u32>>>())
        .collect::<Result<Vec<_>>>()?;
    let sum_kappa: usize = kappa.iter().flatten().map(|&k| k as usize).sum();
    let n = intersection_multiplicity(f.p(), f.ptilde(), tau, seed)?;
    Ok(SumIdentityReport {
        n,
        kappa,
        sum_kappa,
        holds: n == sum_kappa,
    })
}

/// `N_tau` against the sum over pairs of zero-set branches of the smaller
/// contact order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub branch_orders: Vec<u32>,
    pub bound: usize,
    pub holds: bool,
}

pub fn co_vs_im_bound(
    f: &Rif,
    tau: (Complex64, Complex64),
    grid: &LocalGrid,
    seed: u64,
) -> Result<BoundReport> {
    let branch_orders = zero_branch_orders(f, tau, grid)?;
    let bound = branch_orders
        .iter()
        .flat_map(|&a| branch_orders.iter().map(move |&b| a.min(b) as usize))
        .sum();
    let n = intersection_multiplicity(f.p(), f.ptilde(), tau, seed)?;
    Ok(BoundReport {
        n,
        branch_orders,
        bound,
        holds: n <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn two_by_two_sylvester() {
        let p = BiPoly::from_real_terms(&[(1, 0, 1.0), (0, 1, -1.0)]);
        let q = BiPoly::from_real_terms(&[(1, 0, 1.0), (0, 1, 1.0)]);
        let r = resultant(&p, &q, Var::Z1).unwrap();
        assert!(r.coeffs[0].norm() < 1e-30);
        assert!((r.coeffs[1].norm() - 2.0).abs() < 1e-14);
        assert_eq!(r.degree(), Some(1));
    }

    #[test]
    fn resultant_of_p_with_itself_vanishes() {
        let p = BiPoly::from_real_terms(&[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)]);
        assert!(matches!(
            resultant(&p, &p, Var::Z1),
            Err(RifError::IdenticallyZero)
        ));
    }

    #[test]
    fn faveform_resultant_vanishes_at_one() {
        let p = BiPoly::from_real_terms(&[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)]);
        let r = resultant(&p, &p.reflect(), Var::Z1).unwrap();
        assert!(r.eval(c(1.0, 0.0)).norm() < 1e-14);
        assert!(r.eval(c(-1.0, 0.0)).norm() > 1e-3);
    }

    #[test]
    fn transversal_lines_meet_once() {
        let p = BiPoly::from_real_terms(&[(1, 0, 1.0), (0, 1, -1.0)]);
        let q = BiPoly::from_real_terms(&[(1, 0, 1.0), (0, 1, 1.0)]);
        let n = intersection_multiplicity(&p, &q, (c(0.0, 0.0), c(0.0, 0.0)), DEFAULT_SEED).unwrap();
        assert_eq!(n, 1);
    }

    #[test]
    fn tangency_counts_twice() {
        // z2 = z1^2 against z2 = 0.
        let p = BiPoly::from_real_terms(&[(2, 0, 1.0), (0, 1, -1.0)]);
        let q = BiPoly::from_real_terms(&[(0, 1, 1.0)]);
        let n = intersection_multiplicity(&p, &q, (c(0.0, 0.0), c(0.0, 0.0)), DEFAULT_SEED).unwrap();
        assert_eq!(n, 2);
    }

    #[test]
    fn faveform_multiplicity_is_two() {
        let p = BiPoly::from_real_terms(&[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)]);
        let n = intersection_multiplicity(&p, &p.reflect(), (c(1.0, 0.0), c(1.0, 0.0)), DEFAULT_SEED)
            .unwrap();
        assert_eq!(n, 2);
    }
}
