//! Dense bivariate and univariate polynomials over `Complex64`.
//!
//! A [`BiPoly`] carries a declared bidegree `(m, n)`. Arithmetic results are
//! always tight (no trailing zero rows or columns), but a polynomial may be
//! padded explicitly with [`BiPoly::with_bidegree`] because the reflection
//! depends on the declared bidegree, not on the tight one.

use crate::dd::{horner, DdComplex};
use crate::error::{Result, RifError};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Which variable an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Var {
    Z1,
    Z2,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::Z1 => Var::Z2,
            Var::Z2 => Var::Z1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly {
    m: usize,
    n: usize,
    coeffs: Vec<Complex64>,
    padded: bool,
}

impl BiPoly {
    /// Build from rows `rows[i][j]` = coefficient of `z1^i z2^j`, trimming
    /// trailing zero rows and columns. Ragged rows are zero-filled.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let m = rows.len().saturating_sub(1);
        let n = rows.iter().map(|r| r.len()).max().unwrap_or(1).saturating_sub(1);
        let mut p = BiPoly::zeros(m, n);
        for (i, row) in rows.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                p.coeffs[i * (n + 1) + j] = c;
            }
        }
        p.tighten()
    }

    /// Build from a list of `(i, j, c)` terms; repeated monomials add up.
    pub fn from_terms(terms: &[(usize, usize, Complex64)]) -> Self {
        let m = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let n = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let mut p = BiPoly::zeros(m, n);
        for &(i, j, c) in terms {
            p.coeffs[i * (n + 1) + j] += c;
        }
        p.tighten()
    }

    /// Real-coefficient shorthand for [`BiPoly::from_terms`].
    pub fn from_real_terms(terms: &[(usize, usize, f64)]) -> Self {
        let t: Vec<_> = terms
            .iter()
            .map(|&(i, j, c)| (i, j, Complex64::new(c, 0.0)))
            .collect();
        BiPoly::from_terms(&t)
    }

    pub fn constant(c: Complex64) -> Self {
        BiPoly {
            m: 0,
            n: 0,
            coeffs: vec![c],
            padded: false,
        }
    }

    pub fn zero() -> Self {
        BiPoly::constant(ZERO)
    }

    /// The monomial `z1^i z2^j`.
    pub fn monomial(i: usize, j: usize) -> Self {
        BiPoly::from_terms(&[(i, j, Complex64::new(1.0, 0.0))])
    }

    fn zeros(m: usize, n: usize) -> Self {
        BiPoly {
            m,
            n,
            coeffs: vec![ZERO; (m + 1) * (n + 1)],
            padded: false,
        }
    }

    /// Re-declare the bidegree. Growing pads with zeros and sets the padding
    /// flag; shrinking below the tight bidegree is rejected.
    pub fn with_bidegree(&self, m: usize, n: usize) -> Result<Self> {
        let (tm, tn) = self.tight_bidegree();
        if m < tm || n < tn {
            return Err(RifError::InvalidInput(format!(
                "bidegree ({m},{n}) is smaller than the tight bidegree ({tm},{tn})"
            )));
        }
        let mut p = BiPoly::zeros(m, n);
        for i in 0..=self.m.min(m) {
            for j in 0..=self.n.min(n) {
                p.coeffs[i * (n + 1) + j] = self.get(i, j);
            }
        }
        p.padded = (m, n) != (tm, tn);
        Ok(p)
    }

    /// Drop trailing zero rows and columns.
    pub fn tighten(&self) -> Self {
        let (tm, tn) = self.tight_bidegree();
        let mut p = BiPoly::zeros(tm, tn);
        for i in 0..=tm {
            for j in 0..=tn {
                p.coeffs[i * (tn + 1) + j] = self.get(i, j);
            }
        }
        p
    }

    pub fn tight_bidegree(&self) -> (usize, usize) {
        let mut tm = 0;
        let mut tn = 0;
        for i in 0..=self.m {
            for j in 0..=self.n {
                if self.get(i, j) != ZERO {
                    tm = tm.max(i);
                    tn = tn.max(j);
                }
            }
        }
        (tm, tn)
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn is_padded(&self) -> bool {
        self.padded
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == ZERO)
    }

    /// Coefficient of `z1^i z2^j`; zero outside the stored range.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if i <= self.m && j <= self.n {
            self.coeffs[i * (self.n + 1) + j]
        } else {
            ZERO
        }
    }

    /// Coefficient rows, `rows()[i][j]` for `z1^i z2^j`.
    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..=self.m)
            .map(|i| (0..=self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Iterate over `(i, j, c)` with `c != 0`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..=self.m).flat_map(move |i| {
            (0..=self.n).filter_map(move |j| {
                let c = self.get(i, j);
                (c != ZERO).then_some((i, j, c))
            })
        })
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn norm1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn eval(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        self.slice(Var::Z2, z2).eval(z1)
    }

    pub fn eval_dd(&self, z1: DdComplex, z2: DdComplex) -> DdComplex {
        horner(&self.slice_dd(Var::Z2, z2), z1)
    }

    /// `sum |c_ij| |z1|^i |z2|^j`, the natural scale for residuals.
    pub fn eval_abs(&self, z1: Complex64, z2: Complex64) -> f64 {
        let (a, b) = (z1.norm(), z2.norm());
        self.terms()
            .map(|(i, j, c)| c.norm() * a.powi(i as i32) * b.powi(j as i32))
            .sum()
    }

    /// Reflection with respect to the declared bidegree:
    /// `c~[i][j] = conj(c[m-i][n-j])`.
    pub fn reflect(&self) -> Self {
        let mut p = BiPoly::zeros(self.m, self.n);
        for i in 0..=self.m {
            for j in 0..=self.n {
                p.coeffs[i * (self.n + 1) + j] = self.get(self.m - i, self.n - j).conj();
            }
        }
        p.padded = p.tight_bidegree() != (self.m, self.n);
        p
    }

    /// Reflection with respect to an explicit bidegree `(m, n)`.
    pub fn reflect_in(&self, m: usize, n: usize) -> Result<Self> {
        Ok(self.with_bidegree(m, n)?.reflect())
    }

    pub fn add(&self, q: &BiPoly) -> Self {
        let m = self.m.max(q.m);
        let n = self.n.max(q.n);
        let mut r = BiPoly::zeros(m, n);
        for i in 0..=m {
            for j in 0..=n {
                r.coeffs[i * (n + 1) + j] = self.get(i, j) + q.get(i, j);
            }
        }
        r.tighten()
    }

    pub fn sub(&self, q: &BiPoly) -> Self {
        self.add(&q.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn mul(&self, q: &BiPoly) -> Self {
        let m = self.m + q.m;
        let n = self.n + q.n;
        let mut r = BiPoly::zeros(m, n);
        for (i, j, a) in self.terms() {
            for (k, l, b) in q.terms() {
                r.coeffs[(i + k) * (n + 1) + (j + l)] += a * b;
            }
        }
        r.tighten()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut r = self.clone();
        for x in &mut r.coeffs {
            *x *= c;
        }
        r.padded = false;
        r.tighten()
    }

    /// Integer power.
    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(BiPoly::constant(Complex64::new(1.0, 0.0)), |acc, _| acc.mul(self))
    }

    /// Multiply by `z1^a z2^b`.
    pub fn shift(&self, a: usize, b: usize) -> Self {
        let mut r = BiPoly::zeros(self.m + a, self.n + b);
        for (i, j, c) in self.terms() {
            r.coeffs[(i + a) * (self.n + b + 1) + (j + b)] = c;
        }
        r.tighten()
    }

    /// Formal partial derivative.
    pub fn partial(&self, var: Var) -> Self {
        let mut terms = Vec::new();
        for (i, j, c) in self.terms() {
            match var {
                Var::Z1 if i > 0 => terms.push((i - 1, j, c * i as f64)),
                Var::Z2 if j > 0 => terms.push((i, j - 1, c * j as f64)),
                _ => {}
            }
        }
        BiPoly::from_terms(&terms)
    }

    /// Euler operator `z1 d/dz1 + z2 d/dz2`.
    pub fn euler(&self) -> Self {
        let terms: Vec<_> = self
            .terms()
            .map(|(i, j, c)| (i, j, c * (i + j) as f64))
            .collect();
        BiPoly::from_terms(&terms)
    }

    /// Swap the roles of `z1` and `z2`.
    pub fn transpose(&self) -> Self {
        let mut r = BiPoly::zeros(self.n, self.m);
        for (i, j, c) in self.terms() {
            r.coeffs[j * (self.m + 1) + i] = c;
        }
        r.padded = self.padded;
        r
    }

    /// Substitute `z -> 1/z` in one variable and clear the denominator by the
    /// declared degree in that variable.
    pub fn reverse(&self, var: Var) -> Self {
        let mut r = BiPoly::zeros(self.m, self.n);
        for (i, j, c) in self.terms() {
            let (ii, jj) = match var {
                Var::Z1 => (self.m - i, j),
                Var::Z2 => (i, self.n - j),
            };
            r.coeffs[ii * (self.n + 1) + jj] = c;
        }
        r.padded = r.tight_bidegree() != (self.m, self.n);
        r
    }

    /// Restrict one variable to `value`, giving a polynomial in the other.
    pub fn slice(&self, var: Var, value: Complex64) -> UniPoly {
        match var {
            Var::Z2 => UniPoly::new(
                (0..=self.m)
                    .map(|i| {
                        (0..=self.n)
                            .rev()
                            .fold(ZERO, |acc, j| acc * value + self.get(i, j))
                    })
                    .collect(),
            ),
            Var::Z1 => UniPoly::new(
                (0..=self.n)
                    .map(|j| {
                        (0..=self.m)
                            .rev()
                            .fold(ZERO, |acc, i| acc * value + self.get(i, j))
                    })
                    .collect(),
            ),
        }
    }

    /// Double-double version of [`BiPoly::slice`].
    pub fn slice_dd(&self, var: Var, value: DdComplex) -> Vec<DdComplex> {
        let (outer, inner) = match var {
            Var::Z2 => (self.m, self.n),
            Var::Z1 => (self.n, self.m),
        };
        (0..=outer)
            .map(|a| {
                (0..=inner).rev().fold(DdComplex::ZERO, |acc, b| {
                    let c = match var {
                        Var::Z2 => self.get(a, b),
                        Var::Z1 => self.get(b, a),
                    };
                    acc * value + DdComplex::from(c)
                })
            })
            .collect()
    }

    /// Set coefficients below `tol * norm_inf` to zero and tighten.
    pub fn chop(&self, tol: f64) -> Self {
        let cut = tol * self.norm_inf();
        let mut r = self.clone();
        for c in &mut r.coeffs {
            if c.norm() <= cut {
                *c = ZERO;
            }
        }
        r.tighten()
    }

    /// Largest coefficient-wise distance to `q`.
    pub fn max_distance(&self, q: &BiPoly) -> f64 {
        let m = self.m.max(q.m);
        let n = self.n.max(q.n);
        let mut d: f64 = 0.0;
        for i in 0..=m {
            for j in 0..=n {
                d = d.max((self.get(i, j) - q.get(i, j)).norm());
            }
        }
        d
    }

    /// Index `(i, j)` of the first coefficient of largest modulus.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0);
        let mut bv = -1.0;
        for i in 0..=self.m {
            for j in 0..=self.n {
                let v = self.get(i, j).norm();
                if v > bv {
                    bv = v;
                    best = (i, j);
                }
            }
        }
        best
    }

    /// Find a unimodular `lambda` with `reflect(r) = lambda * r` up to
    /// `tol * norm_inf(r)`.
    ///
    /// # Errors
    /// [`RifError::AmbiguousSymmetry`] when the reflection matches a
    /// non-unimodular multiple, [`RifError::DegenerateInput`] for `r = 0`.
    pub fn essential_symmetry(&self, tol: f64) -> Result<Option<Complex64>> {
        if self.is_zero() {
            return Err(RifError::DegenerateInput);
        }
        let rt = self.reflect();
        let (i, j) = self.argmax();
        let lambda = rt.get(i, j) / self.get(i, j);
        if rt.max_distance(&self.scale(lambda)) > tol * self.norm_inf() {
            return Ok(None);
        }
        let modulus = lambda.norm();
        if (modulus - 1.0).abs() > tol.max(1e-12) * 100.0 {
            return Err(RifError::AmbiguousSymmetry { modulus });
        }
        Ok(Some(lambda / modulus))
    }
}

#[derive(Serialize, Deserialize)]
struct BiPolyJson {
    bidegree: [usize; 2],
    coeffs: Vec<Vec<Complex64>>,
}

impl Serialize for BiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BiPolyJson {
            bidegree: [self.m, self.n],
            coeffs: self
                .rows()
                .into_iter()
                .map(|r| r.into_iter().map(|c| Complex64::new(c.re + 0.0, c.im + 0.0)).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let j = BiPolyJson::deserialize(d)?;
        let [m, n] = j.bidegree;
        if j.coeffs.len() != m + 1 || j.coeffs.iter().any(|r| r.len() != n + 1) {
            return Err(D::Error::custom(format!(
                "coefficient array does not match bidegree ({m},{n})"
            )));
        }
        BiPoly::from_rows(&j.coeffs)
            .with_bidegree(m, n)
            .map_err(D::Error::custom)
    }
}

/// Univariate polynomial with ascending coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniPoly {
    pub coeffs: Vec<Complex64>,
}

impl UniPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        UniPoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Index of the last nonzero coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != ZERO)
    }

    /// Degree after discarding leading coefficients below `tol * norm_inf`.
    pub fn effective_degree(&self, tol: f64) -> Option<usize> {
        let cut = tol * self.norm_inf();
        self.coeffs.iter().rposition(|c| c.norm() > cut)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn norm_inf(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn norm1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn leading(&self) -> Complex64 {
        self.degree().map_or(ZERO, |d| self.coeffs[d])
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// `sum |c_k| |z|^k`.
    pub fn eval_abs(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return UniPoly::new(vec![ZERO]);
        }
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn mul(&self, q: &UniPoly) -> Self {
        let mut r = vec![ZERO; self.coeffs.len() + q.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in q.coeffs.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        UniPoly::new(r)
    }

    pub fn add(&self, q: &UniPoly) -> Self {
        let len = self.coeffs.len().max(q.coeffs.len());
        UniPoly::new(
            (0..len)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(ZERO)
                        + q.coeffs.get(k).copied().unwrap_or(ZERO)
                })
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex64) -> Self {
        UniPoly::new(self.coeffs.iter().map(|&x| x * c).collect())
    }

    /// Drop trailing coefficients below `tol * norm_inf`.
    pub fn trimmed(&self, tol: f64) -> Self {
        match self.effective_degree(tol) {
            Some(d) => UniPoly::new(self.coeffs[..=d].to_vec()),
            None => UniPoly::new(vec![ZERO]),
        }
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(UniPoly::from_real(&[1.0]), |acc, &r| {
            acc.mul(&UniPoly::new(vec![-r, Complex64::new(1.0, 0.0)]))
        })
    }

    pub fn to_dd(&self) -> Vec<DdComplex> {
        self.coeffs.iter().map(|&c| DdComplex::from(c)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fave() -> BiPoly {
        BiPoly::from_real_terms(&[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)])
    }

    #[test]
    fn eval_examples() {
        let p = fave();
        assert_eq!(p.eval(c(0.0, 0.0), c(0.0, 0.0)), c(2.0, 0.0));
        assert_eq!(p.reflect().eval(c(1.0, 0.0), c(1.0, 0.0)), c(0.0, 0.0));
        assert_eq!(p.eval(c(0.0, 1.0), c(0.0, -1.0)), c(2.0, 0.0));
    }

    #[test]
    fn reflection_examples() {
        let want = BiPoly::from_real_terms(&[(1, 1, 2.0), (1, 0, -1.0), (0, 1, -1.0)]);
        assert_eq!(fave().reflect(), want);
        let p3 = BiPoly::from_real_terms(&[(0, 0, 3.0), (1, 0, -1.0), (0, 1, -1.0)]);
        let w3 = BiPoly::from_real_terms(&[(1, 1, 3.0), (1, 0, -1.0), (0, 1, -1.0)]);
        assert_eq!(p3.reflect(), w3);
        let one = BiPoly::constant(c(1.0, 0.0));
        assert_eq!(one.reflect(), one);
    }

    #[test]
    fn reflection_depends_on_declared_bidegree() {
        let p = BiPoly::from_real_terms(&[(0, 0, 1.0), (1, 0, -0.5)]);
        let padded = p.with_bidegree(1, 1).unwrap();
        assert!(padded.is_padded());
        let r = padded.reflect();
        assert_eq!(r, BiPoly::from_real_terms(&[(1, 1, 1.0), (0, 1, -0.5)]).with_bidegree(1, 1).unwrap());
        assert!(p.with_bidegree(0, 0).is_err());
    }

    #[test]
    fn arithmetic_examples() {
        let p = fave();
        let d = p.reflect().sub(&p);
        assert_eq!(d, BiPoly::from_real_terms(&[(1, 1, 2.0), (0, 0, -2.0)]));
        assert!(p.add(&p.neg()).is_zero());
        let a = BiPoly::from_real_terms(&[(0, 0, 1.0), (1, 0, -1.0)]);
        let b = BiPoly::from_real_terms(&[(0, 0, 1.0), (0, 1, -1.0)]);
        assert_eq!(
            a.mul(&b),
            BiPoly::from_real_terms(&[(0, 0, 1.0), (1, 0, -1.0), (0, 1, -1.0), (1, 1, 1.0)])
        );
    }

    #[test]
    fn partial_and_euler() {
        assert_eq!(fave().partial(Var::Z1), BiPoly::constant(c(-1.0, 0.0)));
        assert_eq!(
            fave().reflect().partial(Var::Z2),
            BiPoly::from_real_terms(&[(1, 0, 2.0), (0, 0, -1.0)])
        );
        let r = BiPoly::from_real_terms(&[(0, 0, 1.0), (1, 0, -1.0)])
            .mul(&BiPoly::from_real_terms(&[(0, 0, 1.0), (0, 1, -1.0)]))
            .mul(&BiPoly::from_real_terms(&[(0, 0, 1.0), (1, 1, -1.0)]));
        let e = r.euler();
        let want = BiPoly::from_real_terms(&[
            (1, 0, -1.0),
            (0, 1, -1.0),
            (2, 1, 3.0),
            (1, 2, 3.0),
            (2, 2, -4.0),
        ]);
        assert_eq!(e, want);
    }

    #[test]
    fn slice_examples() {
        let s = fave().slice(Var::Z2, c(1.0, 0.0));
        assert_eq!(s, UniPoly::from_real(&[1.0, -1.0]));
        let t = fave().reflect().slice(Var::Z2, c(-1.0, 0.0));
        assert_eq!(t, UniPoly::from_real(&[1.0, -3.0]));
        assert_eq!(fave().slice(Var::Z2, c(0.3, 0.7)).degree(), Some(1));
    }

    #[test]
    fn symmetry_examples() {
        let r = BiPoly::from_real_terms(&[(0, 0, 1.0), (1, 0, -1.0)])
            .mul(&BiPoly::from_real_terms(&[(0, 0, 1.0), (0, 1, -1.0)]))
            .mul(&BiPoly::from_real_terms(&[(0, 0, 1.0), (1, 1, -1.0)]));
        let l = r.essential_symmetry(1e-10).unwrap().unwrap();
        assert!((l - c(-1.0, 0.0)).norm() < 1e-15);
        let r2 = BiPoly::from_real_terms(&[(0, 0, 1.0), (1, 1, -1.0)]);
        assert!((r2.essential_symmetry(1e-10).unwrap().unwrap() + 1.0).norm() < 1e-15);
        assert_eq!(fave().essential_symmetry(1e-10).unwrap(), None);
    }

    #[test]
    fn json_round_trip() {
        let p = BiPoly::from_terms(&[(0, 0, c(0.1, 1.0 / 3.0)), (2, 1, c(-7.25e-17, 2.0))]);
        let s = serde_json::to_string(&p).unwrap();
        let q: BiPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
        let bad = r#"{"bidegree":[1,1],"coeffs":[[[1,0]]]}"#;
        assert!(serde_json::from_str::<BiPoly>(bad).is_err());
    }

    fn arb_poly(maxd: usize) -> impl Strategy<Value = BiPoly> {
        (0..=maxd, 0..=maxd).prop_flat_map(|(m, n)| {
            prop::collection::vec((-4i32..=4, -4i32..=4), (m + 1) * (n + 1)).prop_map(move |v| {
                let rows: Vec<Vec<Complex64>> = (0..=m)
                    .map(|i| {
                        (0..=n)
                            .map(|j| {
                                let (a, b) = v[i * (n + 1) + j];
                                c(a as f64 * 0.5, b as f64 * 0.25)
                            })
                            .collect()
                    })
                    .collect();
                BiPoly::from_rows(&rows)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn reflection_is_an_involution(p in arb_poly(4)) {
            prop_assert_eq!(p.reflect().reflect(), p.clone());
        }
    }

    proptest! {
        #[test]
        fn mul_commutes_and_distributes(p in arb_poly(3), q in arb_poly(3), r in arb_poly(3)) {
            prop_assert_eq!(p.mul(&q), q.mul(&p));
            prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        }

        #[test]
        fn slice_matches_eval(p in arb_poly(4), a in -1.5f64..1.5, b in -1.5f64..1.5, t in -3.2f64..3.2) {
            let z1 = c(a, b);
            let z2 = Complex64::from_polar(1.1, t);
            let direct = p.eval(z1, z2);
            let s1 = p.slice(Var::Z2, z2).eval(z1);
            let s2 = p.slice(Var::Z1, z1).eval(z2);
            let scale = p.eval_abs(z1, z2).max(1e-300);
            prop_assert!((direct - s1).norm() <= 1e-12 * scale);
            prop_assert!((direct - s2).norm() <= 1e-12 * scale);
        }

        #[test]
        fn torus_modulus_identity(
            a in prop::collection::vec((0.0f64..1.0, -3.2f64..3.2), 1..3),
            b in prop::collection::vec((0.0f64..1.0, -3.2f64..3.2), 1..3),
            probes in prop::collection::vec((-3.2f64..3.2, -3.2f64..3.2), 20),
        ) {
            // Products of 1 - alpha z1 - beta z2 with |alpha| + |beta| <= 1
            // are semi-stable.
            let mut p = BiPoly::constant(c(1.0, 0.0));
            for (&(ra, ta), &(rb, tb)) in a.iter().zip(b.iter()) {
                let s = ra + rb;
                let (ra, rb) = if s > 1.0 { (ra / s, rb / s) } else { (ra, rb) };
                let f = BiPoly::from_terms(&[
                    (0, 0, c(1.0, 0.0)),
                    (1, 0, -Complex64::from_polar(ra, ta)),
                    (0, 1, -Complex64::from_polar(rb, tb)),
                ]);
                p = p.mul(&f);
            }
            let pt = p.reflect();
            for (t1, t2) in probes {
                let z1 = Complex64::from_polar(1.0, t1);
                let z2 = Complex64::from_polar(1.0, t2);
                let u = p.eval(z1, z2).norm();
                let v = pt.eval(z1, z2).norm();
                prop_assert!((u - v).abs() <= 1e-10 * u.max(1e-12) + 1e-14 * p.norm1());
            }
        }
    }
}
