//! Validated rational inner functions and their torus singularities.

use crate::dd::{horner, Dd, DdComplex};
use crate::error::{Result, RifError};
use crate::intersect::resultant_dd;
use crate::poly2::{BiPoly, UniPoly, Var};
use crate::roots::{
    cluster, refine_multiple_root_dd, roots_dd_iters, roots_univariate, DEFAULT_TOL,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Default radial and angular resolution of the semi-stability sweep.
pub const DEFAULT_SAMPLES: usize = 200;

/// The on-disk description of a rational inner function.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RifRecord {
    pub p: BiPoly,
    pub eta: Complex64,
    pub monomial: [usize; 2],
}

/// `eta * z1^M * z2^N * ptilde / p` with `p` certified semi-stable by sampling.
#[derive(Clone, Debug, PartialEq)]
pub struct Rif {
    p: BiPoly,
    ptilde: BiPoly,
    eta: Complex64,
    monomial: (usize, usize),
}

impl Serialize for Rif {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.record().serialize(s)
    }
}

impl Rif {
    /// Assemble without any checks.
    pub fn new_unchecked(p: BiPoly, eta: Complex64, monomial: (usize, usize)) -> Self {
        let ptilde = p.reflect();
        Rif {
            p,
            ptilde,
            eta,
            monomial,
        }
    }

    /// Build and certify a RIF.
    ///
    /// The certificate has three parts: for `samples x samples` values of
    /// `z2` in the closed disk every root `z1` of `p(., z2)` lies outside the
    /// open disk; the resultants of `p` and `ptilde` in both variables do not
    /// vanish identically; and `|ptilde| = |p|` on a torus grid.
    ///
    /// # Errors
    /// [`RifError::NotSemiStable`] with a witness, [`RifError::CommonFactor`],
    /// or [`RifError::InvalidInput`] for a non-unimodular `eta`.
    pub fn validate(
        p: BiPoly,
        eta: Complex64,
        monomial: (usize, usize),
        samples: usize,
    ) -> Result<Self> {
        if p.is_zero() {
            return Err(RifError::DegenerateInput);
        }
        if (eta.norm() - 1.0).abs() > 1e-12 {
            return Err(RifError::InvalidInput(format!(
                "eta must be unimodular, got modulus {}",
                eta.norm()
            )));
        }
        let f = Rif::new_unchecked(p, eta / eta.norm(), monomial);
        f.check_semi_stable(samples)?;
        f.check_coprime()?;
        f.check_torus_modulus(samples.clamp(16, 64))?;
        Ok(f)
    }

    pub fn from_record(rec: RifRecord, samples: usize) -> Result<Self> {
        Rif::validate(
            rec.p,
            rec.eta,
            (rec.monomial[0], rec.monomial[1]),
            samples,
        )
    }

    pub fn from_json(s: &str, samples: usize) -> Result<Self> {
        let rec: RifRecord = serde_json::from_str(s)?;
        Rif::from_record(rec, samples)
    }

    pub fn record(&self) -> RifRecord {
        RifRecord {
            p: self.p.clone(),
            eta: Complex64::new(self.eta.re + 0.0, self.eta.im + 0.0),
            monomial: [self.monomial.0, self.monomial.1],
        }
    }

    pub fn p(&self) -> &BiPoly {
        &self.p
    }

    pub fn ptilde(&self) -> &BiPoly {
        &self.ptilde
    }

    pub fn eta(&self) -> Complex64 {
        self.eta
    }

    pub fn monomial(&self) -> (usize, usize) {
        self.monomial
    }

    pub fn bidegree(&self) -> (usize, usize) {
        self.p.bidegree()
    }

    /// Swap the variables.
    pub fn transpose(&self) -> Rif {
        Rif {
            p: self.p.transpose(),
            ptilde: self.ptilde.transpose(),
            eta: self.eta,
            monomial: (self.monomial.1, self.monomial.0),
        }
    }

    /// Numerator `eta z1^M z2^N ptilde`.
    pub fn numerator(&self) -> BiPoly {
        self.ptilde
            .shift(self.monomial.0, self.monomial.1)
            .scale(self.eta)
    }

    pub fn eval(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        self.numerator().eval(z1, z2) / self.p.eval(z1, z2)
    }

    pub fn eval_dd(&self, z1: DdComplex, z2: DdComplex) -> DdComplex {
        let num = self.ptilde.eval_dd(z1, z2);
        let den = self.p.eval_dd(z1, z2);
        let mut mono = DdComplex::from(self.eta);
        for _ in 0..self.monomial.0 {
            mono = mono * z1;
        }
        for _ in 0..self.monomial.1 {
            mono = mono * z2;
        }
        mono * num / den
    }

    /// Level polynomial `eta z1^M z2^N ptilde - lambda p`.
    pub fn level_poly(&self, lambda: Complex64) -> BiPoly {
        self.numerator().sub(&self.p.scale(lambda))
    }

    /// Double-double coefficients in `z1` of the level polynomial at `z2`.
    pub fn level_slice_dd(&self, lambda: DdComplex, z2: DdComplex) -> Vec<DdComplex> {
        let (mm, nn) = self.monomial;
        let a = self.ptilde.slice_dd(Var::Z2, z2);
        let b = self.p.slice_dd(Var::Z2, z2);
        let mut factor = DdComplex::from(self.eta);
        for _ in 0..nn {
            factor = factor * z2;
        }
        let len = (a.len() + mm).max(b.len());
        let mut out = vec![DdComplex::ZERO; len];
        for (i, &c) in a.iter().enumerate() {
            out[i + mm] = out[i + mm] + factor * c;
        }
        for (i, &c) in b.iter().enumerate() {
            out[i] = out[i] - lambda * c;
        }
        out
    }

    /// Double-precision level slice.
    pub fn level_slice(&self, lambda: Complex64, z2: Complex64) -> UniPoly {
        let v = self.level_slice_dd(DdComplex::from(lambda), DdComplex::from(z2));
        UniPoly::new(v.iter().map(|z| z.to_c64()).collect())
    }

    fn check_semi_stable(&self, samples: usize) -> Result<()> {
        match semi_stability_witness(&self.p, samples)? {
            Some(witness) => Err(RifError::NotSemiStable { witness }),
            None => Ok(()),
        }
    }

    fn check_coprime(&self) -> Result<()> {
        for var in [Var::Z1, Var::Z2] {
            match resultant_dd(&self.p, &self.ptilde, var) {
                Err(RifError::IdenticallyZero) => return Err(RifError::CommonFactor),
                Err(e) => return Err(e),
                Ok(_) => {}
            }
        }
        Ok(())
    }

    fn check_torus_modulus(&self, grid: usize) -> Result<()> {
        for a in 0..grid {
            for b in 0..grid {
                let z1 = Complex64::from_polar(1.0, 2.0 * PI * (a as f64 + 0.31) / grid as f64);
                let z2 = Complex64::from_polar(1.0, 2.0 * PI * (b as f64 + 0.17) / grid as f64);
                let u = self.p.eval(z1, z2).norm();
                let v = self.ptilde.eval(z1, z2).norm();
                if (u - v).abs() > 1e-10 * u.max(v) + 1e-13 * self.p.norm1() {
                    return Err(RifError::InvalidInput(
                        "|ptilde| differs from |p| on the torus".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Sampled search for a zero of `p` in the open bidisk.
///
/// `z2` runs over `samples` radii in `[0, 1 - 1e-9]` times `samples`
/// angles; any root `z1` of `p(., z2)` with `|z1| < 1 - 1e-9` is returned
/// together with its `z2`.
pub fn semi_stability_witness(
    p: &BiPoly,
    samples: usize,
) -> Result<Option<(Complex64, Complex64)>> {
    let samples = samples.max(2);
    let inner = 1.0 - 1e-9;
    for ri in 0..samples {
        let r = inner * ri as f64 / (samples - 1) as f64;
        let na = if ri == 0 { 1 } else { samples };
        for ti in 0..na {
            let t = -PI + 2.0 * PI * (ti as f64 + 0.5) / na as f64;
            let z2 = Complex64::from_polar(r, t);
            let s = p.slice(Var::Z2, z2);
            if s.is_zero() {
                return Ok(Some((Complex64::new(0.0, 0.0), z2)));
            }
            if s.degree() == Some(0) {
                continue;
            }
            let rs = roots_univariate(&s.coeffs, DEFAULT_TOL)?;
            if let Some(z1) = rs.roots.iter().find(|z| z.norm() < inner) {
                return Ok(Some((*z1, z2)));
            }
        }
    }
    Ok(None)
}

/// A singular point of a RIF on the torus.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SingularPoint {
    pub tau: [Complex64; 2],
    pub lambda0: Complex64,
    pub contact_order: Option<u32>,
    pub multiplicity: Option<u32>,
    pub branch_orders: Option<Vec<u32>>,
}

impl SingularPoint {
    pub fn tau(&self) -> (Complex64, Complex64) {
        (self.tau[0], self.tau[1])
    }
}

/// Roots of a double-double polynomial near the unit circle, one per
/// cluster, each refined as a multiple root of the cluster's size.
fn unimodular_cluster_roots(c: &[DdComplex], band: f64) -> Result<Vec<(DdComplex, usize)>> {
    let mut c = c.to_vec();
    let cmax = c.iter().map(|z| z.to_c64().norm()).fold(0.0, f64::max);
    while c.len() > 1 && c[c.len() - 1].to_c64().norm() <= 1e-24 * cmax {
        c.pop();
    }
    if c.len() <= 1 {
        return Ok(Vec::new());
    }
    let roots = roots_dd_iters(&c, 120)?;
    let mut out = Vec::new();
    let all: Vec<usize> = (0..roots.len()).collect();
    split_clusters(&c, &roots, &all, 0.15, band, &mut out);
    Ok(out)
}

/// Refine each cluster of `members` at radius `radius` as a multiple root;
/// clusters that do not refine onto the circle are split at a smaller radius.
fn split_clusters(
    c: &[DdComplex],
    roots: &[DdComplex],
    members: &[usize],
    radius: f64,
    band: f64,
    out: &mut Vec<(DdComplex, usize)>,
) {
    let approx: Vec<Complex64> = members.iter().map(|&i| roots[i].to_c64()).collect();
    for g in cluster(&approx, radius) {
        let g: Vec<usize> = g.into_iter().map(|k| members[k]).collect();
        let mean = g
            .iter()
            .fold(DdComplex::ZERO, |acc, &i| acc + roots[i])
            .scale(Dd::new(g.len() as f64).recip());
        if (mean.to_c64().norm() - 1.0).abs() > band {
            continue;
        }
        if g.len() == 1 {
            if (mean.to_c64().norm() - 1.0).abs() <= 1e-6 {
                out.push((mean.normalize(), 1));
            }
            continue;
        }
        let z = refine_multiple_root_dd(c, mean, g.len());
        if (z - mean).norm().to_f64() < radius && (z.to_c64().norm() - 1.0).abs() <= 1e-10 {
            out.push((z.normalize(), g.len()));
        } else if radius > 1e-5 {
            split_clusters(c, roots, &g, radius / 4.0, band, out);
        } else {
            for &i in &g {
                if (roots[i].to_c64().norm() - 1.0).abs() <= 1e-6 {
                    out.push((roots[i].normalize(), 1));
                }
            }
        }
    }
}

/// Torus singularities of `f`, ordered by the argument of `tau2`, then of
/// `tau1`, with nontangential values filled in.
///
/// # Errors
/// [`RifError::ResultantDegenerate`] if `Res(p, ptilde)` vanishes
/// identically.
pub fn singularities(f: &Rif) -> Result<Vec<SingularPoint>> {
    let res = match resultant_dd(f.p(), f.ptilde(), Var::Z1) {
        Err(RifError::IdenticallyZero) => return Err(RifError::ResultantDegenerate),
        r => r?,
    };
    let mut taus: Vec<(Complex64, Complex64)> = Vec::new();
    for (z2, _) in unimodular_cluster_roots(&res, 0.2)? {
        let sp = f.p().slice_dd(Var::Z2, z2);
        let st = f.ptilde().slice_dd(Var::Z2, z2);
        let scale: f64 = st.iter().map(|c| c.to_c64().norm()).sum();
        for (z1, _) in unimodular_cluster_roots(&sp, 0.2)? {
            let t = horner(&st, z1).to_c64().norm();
            if t <= 1e-8 * scale.max(f64::MIN_POSITIVE) {
                let cand = (z1.to_c64(), z2.to_c64());
                if !taus
                    .iter()
                    .any(|t| (t.0 - cand.0).norm() < 1e-7 && (t.1 - cand.1).norm() < 1e-7)
                {
                    taus.push(cand);
                }
            }
        }
    }
    taus.sort_by(|a, b| a.1.arg().total_cmp(&b.1.arg()).then(a.0.arg().total_cmp(&b.0.arg())));
    taus.into_iter()
        .map(|tau| {
            Ok(SingularPoint {
                tau: [tau.0, tau.1],
                lambda0: nontangential_value(f, tau)?,
                contact_order: None,
                multiplicity: None,
                branch_orders: None,
            })
        })
        .collect()
}

/// Radial limit of `f` at `tau`, from `f((1 - 2^-k) tau)` with two rounds of
/// Richardson extrapolation over a 13-term window.
///
/// Windows starting at `k = 4..=16` are tried and the one whose last two
/// extrapolants agree best is kept, so that a `tau` known only to
/// `~1e-13` still yields a clean limit before the error in `tau` takes over.
///
/// # Errors
/// [`RifError::NoLimit`] if no window has extrapolants agreeing to `1e-6`
/// with a limit unimodular to `1e-8`.
pub fn nontangential_value(f: &Rif, tau: (Complex64, Complex64)) -> Result<Complex64> {
    let vals = radial_values(f, tau, 4, 16 + WINDOW as u32 - 1);
    let mut best: Option<(f64, Complex64)> = None;
    for w in vals.windows(WINDOW) {
        let (spread, last) = richardson(w);
        let score = spread.max((last.norm() - 1.0).abs());
        if best.is_none_or(|(s, _)| score < s) {
            best = Some((score, last));
        }
    }
    let (score, last) = best.expect("at least one window");
    accept(score, last)
}

/// As [`nontangential_value`] with a single window starting at
/// `1 - 2^-k0`.
pub fn nontangential_value_from(f: &Rif, tau: (Complex64, Complex64), k0: u32) -> Result<Complex64> {
    let (spread, last) = richardson(&radial_values(f, tau, k0, k0 + WINDOW as u32 - 1));
    accept(spread.max((last.norm() - 1.0).abs()), last)
}

const WINDOW: usize = 13;

fn radial_values(f: &Rif, tau: (Complex64, Complex64), k_lo: u32, k_hi: u32) -> Vec<DdComplex> {
    let t1 = DdComplex::from(tau.0).normalize();
    let t2 = DdComplex::from(tau.1).normalize();
    (k_lo..=k_hi)
        .map(|k| {
            let r = Dd::ONE - Dd::new(0.5f64.powi(k as i32));
            f.eval_dd(t1.scale(r), t2.scale(r))
        })
        .collect()
}

/// Spread of the last two second-order extrapolants, and the last one.
fn richardson(vals: &[DdComplex]) -> (f64, Complex64) {
    let r1: Vec<DdComplex> = vals
        .windows(2)
        .map(|w| w[1].scale(Dd::new(2.0)) - w[0])
        .collect();
    let r2: Vec<DdComplex> = r1
        .windows(2)
        .map(|w| (w[1].scale(Dd::new(4.0)) - w[0]).scale(Dd::new(1.0 / 3.0)))
        .collect();
    let last = r2[r2.len() - 1].to_c64();
    let prev = r2[r2.len() - 2].to_c64();
    ((last - prev).norm(), last)
}

fn accept(score: f64, last: Complex64) -> Result<Complex64> {
    let defect = (last.norm() - 1.0).abs();
    if !(score < 1e-6 && defect <= 1e-8) {
        return Err(RifError::NoLimit { spread: score });
    }
    Ok(last / last.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fave() -> Rif {
        let p = BiPoly::from_real_terms(&[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)]);
        Rif::validate(p, c(-1.0, 0.0), (0, 0), 64).unwrap()
    }

    #[test]
    fn faveform_and_smooth3_validate() {
        let f = fave();
        assert_eq!(f.ptilde(), &f.p().reflect());
        let p3 = BiPoly::from_real_terms(&[(0, 0, 3.0), (1, 0, -1.0), (0, 1, -1.0)]);
        let g = Rif::validate(p3, c(-1.0, 0.0), (0, 0), 64).unwrap();
        assert!(singularities(&g).unwrap().is_empty());
    }

    #[test]
    fn interior_zero_is_rejected() {
        let p = BiPoly::from_real_terms(&[(1, 0, 1.0), (0, 0, -0.5)]);
        match Rif::validate(p, c(1.0, 0.0), (0, 0), 32) {
            Err(RifError::NotSemiStable { witness }) => {
                assert!((witness.0 - c(0.5, 0.0)).norm() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shared_symmetric_factor_is_rejected() {
        let p = BiPoly::from_real_terms(&[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)])
            .mul(&BiPoly::from_real_terms(&[(0, 0, 1.0), (1, 1, -1.0)]));
        assert!(matches!(
            Rif::validate(p, c(-1.0, 0.0), (0, 0), 32),
            Err(RifError::CommonFactor)
        ));
    }

    #[test]
    fn faveform_singularity_and_value() {
        let s = singularities(&fave()).unwrap();
        assert_eq!(s.len(), 1);
        assert!((s[0].tau[0] - 1.0).norm() < 1e-12);
        assert!((s[0].tau[1] - 1.0).norm() < 1e-12);
        assert!((s[0].lambda0 - 1.0).norm() < 1e-6);
    }

    #[test]
    fn value_is_stable_under_halving_the_offset() {
        let f = fave();
        let a = nontangential_value_from(&f, (c(1.0, 0.0), c(1.0, 0.0)), 8).unwrap();
        let b = nontangential_value_from(&f, (c(1.0, 0.0), c(1.0, 0.0)), 9).unwrap();
        assert!((a - b).norm() < 1e-6);
    }

    #[test]
    fn level_slice_matches_level_poly() {
        let p = BiPoly::from_real_terms(&[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)]);
        let f = Rif::new_unchecked(p, c(0.0, 1.0), (2, 1));
        let lam = Complex64::from_polar(1.0, 0.7);
        let z2 = Complex64::from_polar(1.0, -0.4);
        let a = f.level_slice(lam, z2);
        let b = f.level_poly(lam).slice(Var::Z2, z2);
        for k in 0..4 {
            let x = a.coeffs.get(k).copied().unwrap_or_default();
            let y = b.coeffs.get(k).copied().unwrap_or_default();
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn json_round_trip() {
        let f = fave();
        let s = serde_json::to_string(&f).unwrap();
        let g = Rif::from_json(&s, 32).unwrap();
        assert_eq!(f, g);
    }
}
