//! Constructions of new rational inner functions, Pick interlacing tests and
//! the built-in fixture catalog.

use crate::error::{Result, RifError};
use crate::poly2::{BiPoly, UniPoly};
use crate::rif::{semi_stability_witness, Rif, DEFAULT_SAMPLES};
use crate::roots::{roots_univariate, DEFAULT_TOL};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Relative tolerance for the coefficient identities checked after each
/// construction.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Largest matrix accepted by [`rif_from_transfer`].
pub const MAX_TRANSFER_SIZE: usize = 8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Realize the torus zero set of an essentially symmetric polynomial as a
/// level set of an inner function.
///
/// With `ptilde = z1 dr/dz1 + z2 dr/dz2` and `p` its reflection in the
/// bidegree of `r`, the function `-ptilde / p` is inner and its level set at
/// the symmetry value of `r` is the zero set of `r` on the torus. Factors
/// of `z1` and `z2` shared by `ptilde` are moved into the monomial.
///
/// # Errors
/// [`RifError::NotSymmetric`], [`RifError::NotSemiStable`] for a sampled
/// zero of `r` in the open bidisk, [`RifError::IdentityViolation`] if
/// `conj(lambda) p + ptilde` differs from `(m + n) r`, and anything raised
/// by [`Rif::validate`].
pub fn embed(r: &BiPoly) -> Result<Rif> {
    embed_with_samples(r, DEFAULT_SAMPLES)
}

pub fn embed_with_samples(r: &BiPoly, samples: usize) -> Result<Rif> {
    let r = r.tighten();
    let (m, n) = r.bidegree();
    if m + n == 0 {
        return Err(RifError::InvalidInput("r must be non-constant".into()));
    }
    let lambda = r.essential_symmetry(1e-10)?.ok_or(RifError::NotSymmetric)?;
    if let Some(witness) = semi_stability_witness(&r, samples)? {
        return Err(RifError::NotSemiStable { witness });
    }
    let ptilde = r.euler().with_bidegree(m, n)?;
    let p = ptilde.reflect();
    check_embed_identity(&r, &p, &ptilde, lambda)?;

    let (tm, tn) = p.tight_bidegree();
    let p = p.tighten();
    Rif::validate(p, -ONE, (m - tm, n - tn), samples)
}

/// `conj(lambda) p + ptilde == (m + n) r` up to rounding.
fn check_embed_identity(r: &BiPoly, p: &BiPoly, ptilde: &BiPoly, lambda: Complex64) -> Result<()> {
    let (m, n) = r.bidegree();
    let lhs = p.scale(lambda.conj()).add(ptilde);
    let rhs = r.scale(Complex64::new((m + n) as f64, 0.0));
    let err = lhs.max_distance(&rhs);
    if err > IDENTITY_TOL * rhs.norm_inf() {
        return Err(RifError::IdentityViolation(format!(
            "conj(lambda) p + ptilde differs from (m+n) r by {err:.3e}"
        )));
    }
    Ok(())
}

/// Embed `p^2 + ptilde^2`, whose level set at `1` is the union of the level
/// sets of `ptilde / p` at `i` and `-i`.
///
/// Only `p` and its reflection enter; the unimodular constant and monomial
/// of `f` are ignored.
pub fn glue(f: &Rif) -> Result<Rif> {
    glue_with_samples(f, DEFAULT_SAMPLES)
}

pub fn glue_with_samples(f: &Rif, samples: usize) -> Result<Rif> {
    let r = glue_polynomial(f)?;
    embed_with_samples(&r, samples)
}

/// `p^2 + ptilde^2`, checked against `(ptilde + i p)(ptilde - i p)`.
pub fn glue_polynomial(f: &Rif) -> Result<BiPoly> {
    let p = f.p();
    let pt = f.ptilde();
    let r = p.mul(p).add(&pt.mul(pt));
    let ip = p.scale(I);
    let factored = pt.add(&ip).mul(&pt.sub(&ip));
    let err = factored.max_distance(&r);
    if err > IDENTITY_TOL * r.norm_inf() {
        return Err(RifError::IdentityViolation(format!(
            "(ptilde + ip)(ptilde - ip) differs from p^2 + ptilde^2 by {err:.3e}"
        )));
    }
    Ok(r)
}

/// Substitute `x_k = (a_k + b_k z_k) / (c_k + d_k z_k)` into `poly`, viewed
/// with bidegree `(m, n)`, and clear denominators by `(c_k + d_k z_k)^deg`.
fn mobius_substitute(
    poly: &BiPoly,
    (m, n): (usize, usize),
    num: [Complex64; 2],
    den: [Complex64; 2],
) -> BiPoly {
    let powers = |base: [Complex64; 2], k: usize| -> Vec<UniPoly> {
        let lin = UniPoly::new(base.to_vec());
        let mut out = vec![UniPoly::new(vec![ONE])];
        for i in 1..=k {
            out.push(out[i - 1].mul(&lin));
        }
        out
    };
    let (n1, d1) = (powers(num, m), powers(den, m));
    let (n2, d2) = (powers(num, n), powers(den, n));
    let mut out = BiPoly::zero();
    for (i, j, c) in poly.terms() {
        let u = n1[i].mul(&d1[m - i]);
        let v = n2[j].mul(&d2[n - j]);
        let mut t = Vec::new();
        for (a, &x) in u.coeffs.iter().enumerate() {
            for (b, &y) in v.coeffs.iter().enumerate() {
                t.push((a, b, c * x * y));
            }
        }
        out = out.add(&BiPoly::from_terms(&t));
    }
    out
}

/// `(1 - i w1)^m (1 - i w2)^n r(beta(w1), beta(w2))` with
/// `beta(w) = (1 + i w) / (1 - i w)`, mapping the upper half-plane onto the
/// disk.
pub fn to_half_plane(r: &BiPoly, bidegree: (usize, usize)) -> BiPoly {
    mobius_substitute(r, bidegree, [ONE, I], [ONE, -I])
}

/// `(1 - z1)^m (1 - z2)^n g(alpha(z1), alpha(z2))` with
/// `alpha(z) = i (1 + z) / (1 - z)`, which maps the disk onto the upper
/// half-plane with `beta(alpha(z)) = -z`.
pub fn from_half_plane(g: &BiPoly, bidegree: (usize, usize)) -> BiPoly {
    mobius_substitute(g, bidegree, [I, I], [ONE, -ONE])
}

/// Half-plane pair `(R, Q)` for `f`: the transfers of `numerator - p` and
/// `numerator + p`, whose ratio is a constant multiple of a Pick function.
pub fn pick_pair(f: &Rif) -> (BiPoly, BiPoly) {
    let num = f.numerator();
    let r = num.sub(f.p());
    let q = num.add(f.p());
    let (a, b) = (r.bidegree(), q.bidegree());
    let deg = (a.0.max(b.0), a.1.max(b.1));
    (to_half_plane(&r, deg), to_half_plane(&q, deg))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum InterlaceCase {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii a")]
    IIa,
    #[serde(rename = "ii b")]
    IIb,
    #[serde(rename = "iii")]
    III,
    #[serde(rename = "fail")]
    Fail,
}

/// A slice `w -> (x1 + y1 w, x2 + y2 w)` of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Slice {
    pub x: [f64; 2],
    pub y: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterlaceVerdict {
    pub is_pick: bool,
    /// Case of the one-variable test, or of the first slice when two
    /// variables pass.
    pub case: InterlaceCase,
    pub witness: Option<Slice>,
    pub violated: Option<String>,
    pub trials: usize,
    pub seed: Option<u64>,
    /// Set when no slice was tested.
    pub vacuous: bool,
}

impl InterlaceVerdict {
    fn one_var(case: InterlaceCase, violated: Option<String>) -> Self {
        InterlaceVerdict {
            is_pick: case != InterlaceCase::Fail,
            case,
            witness: None,
            violated,
            trials: 1,
            seed: None,
            vacuous: false,
        }
    }
}

const REAL_TOL: f64 = 1e-8;

/// Real parts of the roots, or a description of the first non-real root.
fn real_roots(p: &UniPoly) -> Result<std::result::Result<Vec<f64>, String>> {
    let p = p.trimmed(1e-14 * p.norm_inf());
    if p.degree().unwrap_or(0) == 0 {
        return Ok(Ok(Vec::new()));
    }
    let rs = roots_univariate(&p.coeffs, DEFAULT_TOL)?;
    let scale = rs.roots.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut out = Vec::with_capacity(rs.roots.len());
    for z in rs.roots {
        if z.im.abs() > REAL_TOL * scale {
            return Ok(Err(format!("non-real zero {:.6}{:+.6}i", z.re, z.im)));
        }
        out.push(z.re);
    }
    out.sort_by(f64::total_cmp);
    Ok(Ok(out))
}

fn strictly_alternate(first: &[f64], second: &[f64]) -> bool {
    let mut merged: Vec<(f64, u8)> = first
        .iter()
        .map(|&x| (x, 0))
        .chain(second.iter().map(|&x| (x, 1)))
        .collect();
    merged.sort_by(|a, b| a.0.total_cmp(&b.0));
    merged.first().is_none_or(|m| m.1 == 0)
        && merged.windows(2).all(|w| w[0].1 != w[1].1 && w[0].0 < w[1].0)
}

/// Case table for zeros `a` of `R`, `b` of `Q` and leading ratio `c`.
fn classify(a: &[f64], b: &[f64], c: f64) -> (InterlaceCase, Option<String>) {
    let (m, n) = (a.len(), b.len());
    let (case, sign_ok, order_ok) = if m + 1 == n {
        (InterlaceCase::I, c < 0.0, strictly_alternate(b, a))
    } else if m == n && c < 0.0 {
        (InterlaceCase::IIa, true, strictly_alternate(a, b))
    } else if m == n {
        (InterlaceCase::IIb, c > 0.0, strictly_alternate(b, a))
    } else if m == n + 1 {
        (InterlaceCase::III, c > 0.0, strictly_alternate(a, b))
    } else {
        return (
            InterlaceCase::Fail,
            Some(format!("degrees {m} and {n} differ by more than one")),
        );
    };
    if !sign_ok {
        (
            InterlaceCase::Fail,
            Some(format!("leading ratio C = {c:.6e} has the wrong sign for case {case:?}")),
        )
    } else if !order_ok {
        (
            InterlaceCase::Fail,
            Some(format!("zeros do not interlace as required by case {case:?}")),
        )
    } else {
        (case, None)
    }
}

fn leading_ratio(r: &UniPoly, q: &UniPoly) -> std::result::Result<f64, String> {
    let r = r.trimmed(1e-14 * r.norm_inf());
    let q = q.trimmed(1e-14 * q.norm_inf());
    let c = r.leading() / q.leading();
    if c.im.abs() > REAL_TOL * c.norm() {
        return Err(format!("leading ratio {:.6}{:+.6}i is not real", c.re, c.im));
    }
    Ok(c.re)
}

/// Decide whether `R / Q` is a Pick function from the interlacing of their
/// zeros.
///
/// # Errors
/// [`RifError::CommonRoot`] if the polynomials have zeros closer than
/// `1e-8`; [`RifError::DegenerateInput`] if either vanishes.
pub fn interlace_1d(r: &UniPoly, q: &UniPoly) -> Result<InterlaceVerdict> {
    if r.is_zero() || q.is_zero() {
        return Err(RifError::DegenerateInput);
    }
    let rt = r.trimmed(1e-14 * r.norm_inf());
    let qt = q.trimmed(1e-14 * q.norm_inf());
    let za = roots_of(&rt)?;
    let zb = roots_of(&qt)?;
    for a in &za {
        if zb.iter().any(|b| (a - b).norm() < REAL_TOL * (1.0 + a.norm())) {
            return Err(RifError::CommonRoot);
        }
    }
    let c = match leading_ratio(&rt, &qt) {
        Ok(c) => c,
        Err(why) => return Ok(InterlaceVerdict::one_var(InterlaceCase::Fail, Some(why))),
    };
    let (a, b) = match (real_roots(&rt)?, real_roots(&qt)?) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(why), _) => return Ok(InterlaceVerdict::one_var(InterlaceCase::Fail, Some(format!("R has a {why}")))),
        (_, Err(why)) => return Ok(InterlaceVerdict::one_var(InterlaceCase::Fail, Some(format!("Q has a {why}")))),
    };
    let (case, violated) = classify(&a, &b, c);
    Ok(InterlaceVerdict::one_var(case, violated))
}

fn roots_of(p: &UniPoly) -> Result<Vec<Complex64>> {
    if p.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    Ok(roots_univariate(&p.coeffs, DEFAULT_TOL)?.roots)
}

/// Coefficients in `w` of `poly(x1 + y1 w, x2 + y2 w)`.
fn restrict(poly: &BiPoly, s: &Slice) -> UniPoly {
    let l1 = UniPoly::from_real(&[s.x[0], s.y[0]]);
    let l2 = UniPoly::from_real(&[s.x[1], s.y[1]]);
    let (m, n) = poly.bidegree();
    let mut p1 = vec![UniPoly::from_real(&[1.0])];
    for k in 1..=m {
        p1.push(p1[k - 1].mul(&l1));
    }
    let mut p2 = vec![UniPoly::from_real(&[1.0])];
    for k in 1..=n {
        p2.push(p2[k - 1].mul(&l2));
    }
    let mut out = UniPoly::new(vec![ZERO]);
    for (i, j, c) in poly.terms() {
        out = out.add(&p1[i].mul(&p2[j]).scale(c));
    }
    out
}

/// Rotate so the largest coefficient is real and positive; `None` if the
/// result still has non-real coefficients.
fn realify(p: &BiPoly) -> Option<BiPoly> {
    let (i, j) = p.argmax();
    let a = p.get(i, j);
    let q = p.scale(a.conj() / a.norm());
    let tol = 1e-9 * q.norm_inf();
    if q.terms().any(|(_, _, c)| c.im.abs() > tol) {
        return None;
    }
    let terms: Vec<_> = q.terms().map(|(i, j, c)| (i, j, c.re)).collect();
    Some(BiPoly::from_real_terms(&terms))
}

fn slice_verdict(r: &BiPoly, q: &BiPoly, s: &Slice) -> (InterlaceCase, Option<String>) {
    let rs = restrict(r, s);
    let qs = restrict(q, s);
    if rs.is_zero() || qs.is_zero() {
        return (InterlaceCase::Fail, Some("slice restriction vanishes".into()));
    }
    let c = match leading_ratio(&rs, &qs) {
        Ok(c) => c,
        Err(why) => return (InterlaceCase::Fail, Some(why)),
    };
    let (mut a, mut b) = match (real_roots(&rs), real_roots(&qs)) {
        (Ok(Ok(a)), Ok(Ok(b))) => (a, b),
        (Ok(Err(why)), _) => return (InterlaceCase::Fail, Some(format!("R has a {why}"))),
        (_, Ok(Err(why))) => return (InterlaceCase::Fail, Some(format!("Q has a {why}"))),
        (Err(e), _) | (_, Err(e)) => return (InterlaceCase::Fail, Some(e.to_string())),
    };
    let mut k = 0;
    while k < a.len() {
        let tol = REAL_TOL * (1.0 + a[k].abs());
        if let Some(pos) = b.iter().position(|&y| (y - a[k]).abs() <= tol) {
            b.remove(pos);
            a.remove(k);
        } else {
            k += 1;
        }
    }
    classify(&a, &b, c)
}

/// Random slice test of the two-variable interlacing criterion.
///
/// `R` and `Q` are first rotated to real coefficients; then `R / Q` and
/// `-R / Q` are each tested on the same `trials` slices with `x` uniform in
/// `[-5, 5]^2` and `y` log-uniform in `[1e-2, 1e2]^2`. The verdict is
/// positive when one sign passes every slice. A negative verdict carries the
/// first failing slice of the sign that survived longer.
pub fn interlace_2d(r: &BiPoly, q: &BiPoly, trials: usize, seed: u64) -> Result<InterlaceVerdict> {
    if r.is_zero() || q.is_zero() {
        return Err(RifError::DegenerateInput);
    }
    let fail = |violated: String, witness: Option<Slice>| InterlaceVerdict {
        is_pick: false,
        case: InterlaceCase::Fail,
        witness,
        violated: Some(violated),
        trials,
        seed: Some(seed),
        vacuous: false,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slices: Vec<Slice> = (0..trials)
        .map(|_| Slice {
            x: [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)],
            y: [
                10f64.powf(rng.random_range(-2.0..2.0)),
                10f64.powf(rng.random_range(-2.0..2.0)),
            ],
        })
        .collect();
    let (rr, qr) = match (realify(r), realify(q)) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            let w = slices.first().copied();
            return Ok(fail("R or Q is not real up to a constant".into(), w));
        }
    };
    if trials == 0 {
        return Ok(InterlaceVerdict {
            is_pick: true,
            case: InterlaceCase::Fail,
            witness: None,
            violated: None,
            trials,
            seed: Some(seed),
            vacuous: true,
        });
    }
    let mut best: Option<(usize, String)> = None;
    for sign in [1.0, -1.0] {
        let rs = rr.scale(Complex64::new(sign, 0.0));
        let results: Vec<(InterlaceCase, Option<String>)> = slices
            .par_iter()
            .map(|s| slice_verdict(&rs, &qr, s))
            .collect();
        match results.iter().position(|(c, _)| *c == InterlaceCase::Fail) {
            None => {
                return Ok(InterlaceVerdict {
                    is_pick: true,
                    case: results[0].0,
                    witness: None,
                    violated: None,
                    trials,
                    seed: Some(seed),
                    vacuous: false,
                })
            }
            Some(k) => {
                if best.as_ref().is_none_or(|b| k > b.0) {
                    best = Some((k, results[k].1.clone().unwrap_or_default()));
                }
            }
        }
    }
    let (k, why) = best.expect("both signs failed");
    Ok(fail(why, Some(slices[k])))
}

/// Determinant of a matrix of bivariate polynomials by expansion over
/// column subsets.
fn poly_det(mat: &[Vec<BiPoly>]) -> BiPoly {
    let n = mat.len();
    if n == 0 {
        return BiPoly::constant(ONE);
    }
    let mut table: Vec<BiPoly> = vec![BiPoly::zero(); 1 << n];
    table[0] = BiPoly::constant(ONE);
    for set in 1usize..(1 << n) {
        let row = set.count_ones() as usize - 1;
        let mut acc = BiPoly::zero();
        for col in 0..n {
            if set & (1 << col) == 0 || mat[row][col].is_zero() {
                continue;
            }
            let rest = set & !(1 << col);
            if table[rest].is_zero() {
                continue;
            }
            let above = (rest >> col).count_ones();
            let term = mat[row][col].mul(&table[rest]);
            acc = if above % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        table[set] = acc;
    }
    table[(1 << n) - 1].clone()
}

fn check_square(name: &str, m: &[Vec<Complex64>]) -> Result<usize> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(RifError::InvalidInput(format!("{name} must be a non-empty square matrix")));
    }
    Ok(n)
}

/// The resolvent entry `<(A - z_Y)^{-1} e0, e0>` as `(cofactor, det)`.
///
/// # Errors
/// [`RifError::NotSelfAdjoint`], [`RifError::InvalidInput`] for malformed
/// shapes, sizes above [`MAX_TRANSFER_SIZE`] or a non 0/1 diagonal `Y`, and
/// [`RifError::DegenerateResolvent`].
pub fn transfer_function(a: &[Vec<Complex64>], y: &[Vec<Complex64>]) -> Result<(BiPoly, BiPoly)> {
    let n = check_square("A", a)?;
    if check_square("Y", y)? != n {
        return Err(RifError::InvalidInput("A and Y differ in size".into()));
    }
    if n > MAX_TRANSFER_SIZE {
        return Err(RifError::InvalidInput(format!(
            "matrices larger than {MAX_TRANSFER_SIZE}x{MAX_TRANSFER_SIZE} are not supported"
        )));
    }
    let scale = a.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
    for i in 0..n {
        for j in 0..n {
            if (a[i][j] - a[j][i].conj()).norm() > 1e-12 * scale.max(1.0) {
                return Err(RifError::NotSelfAdjoint);
            }
            let yij = y[i][j];
            let ok = if i == j {
                yij.norm() < 1e-12 || (yij - ONE).norm() < 1e-12
            } else {
                yij.norm() < 1e-12
            };
            if !ok {
                return Err(RifError::InvalidInput("Y must be diagonal with entries 0 or 1".into()));
            }
        }
    }
    let z1 = BiPoly::monomial(1, 0);
    let z2 = BiPoly::monomial(0, 1);
    let mat: Vec<Vec<BiPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut e = BiPoly::constant(a[i][j]);
                    if i == j {
                        e = e.sub(if y[i][i].re > 0.5 { &z1 } else { &z2 });
                    }
                    e
                })
                .collect()
        })
        .collect();
    let minor: Vec<Vec<BiPoly>> = mat[1..].iter().map(|r| r[1..].to_vec()).collect();
    let cof = poly_det(&minor);
    let det = poly_det(&mat);
    if cof.is_zero() {
        return Err(RifError::DegenerateResolvent);
    }
    Ok((cof, det))
}

fn lowest_powers(p: &BiPoly) -> (usize, usize) {
    let a = p.terms().map(|(i, _, _)| i).min().unwrap_or(0);
    let b = p.terms().map(|(_, j, _)| j).min().unwrap_or(0);
    (a, b)
}

fn unshift(p: &BiPoly, a: usize, b: usize) -> BiPoly {
    let t: Vec<_> = p.terms().map(|(i, j, c)| (i - a, j - b, c)).collect();
    BiPoly::from_terms(&t)
}

/// The inner function `(f - i) / (f + i)` composed with `alpha`, where `f`
/// is the resolvent entry of [`transfer_function`].
///
/// The denominator is scaled so its largest coefficient is real and
/// positive and its smallest nonzero coefficient has modulus one.
pub fn rif_from_transfer(a: &[Vec<Complex64>], y: &[Vec<Complex64>]) -> Result<Rif> {
    rif_from_transfer_with_samples(a, y, DEFAULT_SAMPLES)
}

pub fn rif_from_transfer_with_samples(
    a: &[Vec<Complex64>],
    y: &[Vec<Complex64>],
    samples: usize,
) -> Result<Rif> {
    let (num, den) = transfer_function(a, y)?;
    let (a1, a2) = num.tight_bidegree();
    let (b1, b2) = den.tight_bidegree();
    let deg = (a1.max(b1), a2.max(b2));
    let nz = from_half_plane(&num, deg);
    let dz = from_half_plane(&den, deg);
    let top = nz.sub(&dz.scale(I));
    let bottom = nz.add(&dz.scale(I));

    let (i, j) = bottom.argmax();
    let lead = bottom.get(i, j);
    let tol = 1e-13 * bottom.norm_inf();
    let rot = lead.conj() / lead.norm();
    let (top, bottom) = (top.scale(rot).chop(tol), bottom.scale(rot).chop(tol));
    let smallest = bottom
        .terms()
        .map(|(_, _, c)| c.norm())
        .filter(|&v| v > 0.0)
        .fold(f64::INFINITY, f64::min);
    let s = Complex64::new(1.0 / smallest, 0.0);
    let (top, p) = (top.scale(s), bottom.scale(s).tighten());

    let (sa, sb) = lowest_powers(&top);
    let top = unshift(&top, sa, sb);
    let pt = p.reflect();
    let (ki, kj) = pt.argmax();
    let eta = top.get(ki, kj) / pt.get(ki, kj);
    let err = top.max_distance(&pt.scale(eta));
    if err > 1e-9 * top.norm_inf() || (eta.norm() - 1.0).abs() > 1e-9 {
        return Err(RifError::IdentityViolation(format!(
            "numerator is not a unimodular multiple of the reflected denominator (error {err:.3e})"
        )));
    }
    Rif::validate(p, eta / eta.norm(), (sa, sb), samples)
}

/// Names accepted by [`catalog`].
pub const CATALOG: [&str; 8] = [
    "faveform",
    "smooth3",
    "amy",
    "mbm",
    "minimal-co",
    "glued-fave",
    "exceptional",
    "bickel-pascoe",
];

fn catalog_json(name: &str) -> Option<&'static str> {
    Some(match name {
        "faveform" => include_str!("../fixtures/faveform.json"),
        "smooth3" => include_str!("../fixtures/smooth3.json"),
        "amy" => include_str!("../fixtures/amy.json"),
        "mbm" => include_str!("../fixtures/mbm.json"),
        "minimal-co" => include_str!("../fixtures/minimal-co.json"),
        "glued-fave" => include_str!("../fixtures/glued-fave.json"),
        "exceptional" => include_str!("../fixtures/exceptional.json"),
        "bickel-pascoe" => include_str!("../fixtures/bickel-pascoe.json"),
        _ => return None,
    })
}

/// A validated fixture by name.
pub fn catalog(name: &str) -> Result<Rif> {
    let s = catalog_json(name).ok_or_else(|| RifError::UnknownFixture(name.to_string()))?;
    Rif::from_json(s, DEFAULT_SAMPLES)
}

/// `(p / a, eta * conj(a) / a)` with `a` the first coefficient of largest
/// modulus, so that equal functions compare equal coefficientwise.
pub fn normalized(f: &Rif) -> (BiPoly, Complex64) {
    let (i, j) = f.p().argmax();
    let a = f.p().get(i, j);
    (f.p().scale(a.inv()), f.eta() * a.conj() / a)
}

/// Relative coefficient distance between two RIFs after normalization;
/// infinite if the monomials differ.
pub fn rif_distance(f: &Rif, g: &Rif) -> f64 {
    if f.monomial() != g.monomial() {
        return f64::INFINITY;
    }
    let (p, e) = normalized(f);
    let (q, h) = normalized(g);
    p.tighten().max_distance(&q.tighten()).max((e - h).norm())
}

/// A random essentially symmetric polynomial without zeros in the open
/// bidisk, of bidegree at most `max` (at least `(1, 1)`), with two or more
/// factors when `max` allows.
///
/// Built from factors `1 - u z1 z2` with `|u| = 1` and from `qtilde + mu q`
/// for stable `q` of bidegree `(1, 1)` and `|mu| = 1`.
pub fn random_symmetric(rng: &mut impl Rng, max: (usize, usize)) -> BiPoly {
    let unit = |rng: &mut dyn rand::RngCore| {
        Complex64::from_polar(1.0, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
    };
    let top = max.0.min(max.1).max(1);
    let factors = rng.random_range(top.min(2)..=top);
    let mut r = BiPoly::constant(ONE);
    for _ in 0..factors {
        let f = if rng.random_bool(0.5) {
            BiPoly::from_terms(&[(0, 0, ONE), (1, 1, -unit(rng))])
        } else {
            let w: [f64; 3] = [rng.random(), rng.random(), rng.random()];
            let budget = rng.random_range(0.3..0.95) / (w[0] + w[1] + w[2]);
            let c1 = unit(rng) * w[0] * budget;
            let c2 = unit(rng) * w[1] * budget;
            let c3 = unit(rng) * w[2] * budget;
            let q = BiPoly::from_terms(&[(0, 0, ONE), (1, 0, -c1), (0, 1, -c2), (1, 1, -c3)])
                .with_bidegree(1, 1)
                .expect("bidegree (1,1) fits");
            q.reflect().add(&q.scale(unit(rng)))
        };
        r = r.mul(&f);
    }
    exactly_self_reflexive(&r)
}

/// Rotate `r` so that `reflect(r) = r` holds, then enforce it coefficientwise
/// so rounding in the factor products leaves no asymmetry behind.
fn exactly_self_reflexive(r: &BiPoly) -> BiPoly {
    let (m, n) = r.bidegree();
    let (a, b) = r.argmax();
    let mu = r.reflect().get(a, b) / r.get(a, b);
    let r = r.scale(mu.sqrt());
    let terms: Vec<(usize, usize, Complex64)> = (0..=m)
        .flat_map(|i| (0..=n).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, (r.get(i, j) + r.get(m - i, n - j).conj()) * 0.5))
        .collect();
    BiPoly::from_terms(&terms).with_bidegree(m, n).expect("same bidegree")
}
