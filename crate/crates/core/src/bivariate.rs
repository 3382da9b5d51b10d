//! Polynomials in (ξ, ξ̄) treated as independent variables, and the
//! elimination of η from the Lagrangian condition on cyclic curves.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::spectral::SpectralCurve;

/// Σ c[a][b] ξᵃ ξ̄ᵇ
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly {
    coeffs: Vec<Vec<Complex64>>,
}

impl BiPoly {
    pub fn zero() -> Self {
        Self { coeffs: vec![vec![Complex64::new(0.0, 0.0)]] }
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![vec![c]] }
    }

    pub fn monomial(c: Complex64, a: usize, b: usize) -> Self {
        let mut out = vec![vec![Complex64::new(0.0, 0.0); b + 1]; a + 1];
        out[a][b] = c;
        Self { coeffs: out }
    }

    pub fn in_xi(p: &Poly) -> Self {
        Self { coeffs: p.coeffs().iter().map(|&c| vec![c]).collect() }
    }

    /// The polynomial obtained from `p` by conjugating coefficients and
    /// substituting ξ̄ for ξ, so its value is conj(p(ξ)) on the diagonal.
    pub fn conj_of_xi(p: &Poly) -> Self {
        Self { coeffs: vec![p.coeffs().iter().map(|c| c.conj()).collect()] }
    }

    pub fn coeff(&self, a: usize, b: usize) -> Complex64 {
        self.coeffs.get(a).and_then(|row| row.get(b)).copied().unwrap_or_default()
    }

    /// (max power of ξ, max power of ξ̄) among nonzero coefficients.
    pub fn bidegree(&self) -> (usize, usize) {
        let mut out = (0, 0);
        for (a, row) in self.coeffs.iter().enumerate() {
            for (b, c) in row.iter().enumerate() {
                if c.norm() != 0.0 {
                    out = (out.0.max(a), out.1.max(b));
                }
            }
        }
        out
    }

    fn dims(&self) -> (usize, usize) {
        (self.coeffs.len(), self.coeffs.iter().map(Vec::len).max().unwrap_or(0))
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let (a1, b1) = self.dims();
        let (a2, b2) = other.dims();
        let (na, nb) = (a1.max(a2), b1.max(b2));
        let coeffs = (0..na)
            .map(|a| (0..nb).map(|b| self.coeff(a, b) + other.coeff(a, b)).collect())
            .collect();
        BiPoly { coeffs }
    }

    pub fn scale(&self, s: Complex64) -> BiPoly {
        BiPoly { coeffs: self.coeffs.iter().map(|row| row.iter().map(|&c| c * s).collect()).collect() }
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let (a1, b1) = self.dims();
        let (a2, b2) = other.dims();
        let mut out = vec![vec![Complex64::new(0.0, 0.0); b1 + b2 - 1]; a1 + a2 - 1];
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if x.norm() == 0.0 {
                    continue;
                }
                for (k, row2) in other.coeffs.iter().enumerate() {
                    for (l, &y) in row2.iter().enumerate() {
                        out[i + k][j + l] += x * y;
                    }
                }
            }
        }
        BiPoly { coeffs: out }
    }

    pub fn pow(&self, n: usize) -> BiPoly {
        (0..n).fold(BiPoly::constant(Complex64::new(1.0, 0.0)), |acc, _| acc.mul(self))
    }

    /// Conjugate coefficients and swap the roles of ξ and ξ̄.
    pub fn conj_swap(&self) -> BiPoly {
        let (na, nb) = self.dims();
        let coeffs = (0..nb).map(|b| (0..na).map(|a| self.coeff(a, b).conj()).collect()).collect();
        BiPoly { coeffs }
    }

    /// (P − conj_swap P) / 2i: equals Im P(ξ, ξ̄) on the diagonal.
    pub fn imag_part(&self) -> BiPoly {
        self.sub(&self.conj_swap()).scale(Complex64::new(0.0, -0.5))
    }

    /// (P + conj_swap P) / 2
    pub fn real_part(&self) -> BiPoly {
        self.add(&self.conj_swap()).scale(Complex64::new(0.5, 0.0))
    }

    pub fn eval(&self, xi: Complex64, xi_bar: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, row| {
                acc * xi + row.iter().rev().fold(Complex64::new(0.0, 0.0), |s, &c| s * xi_bar + c)
            })
    }

    /// Value at (ξ, conj ξ).
    pub fn eval_diagonal(&self, xi: Complex64) -> Complex64 {
        self.eval(xi, xi.conj())
    }

    /// Σ |c| |ξ|^{a+b}, a scale for relative residuals on the diagonal.
    pub fn abs_eval(&self, xi: Complex64) -> f64 {
        let r = xi.norm();
        let mut total = 0.0;
        for (a, row) in self.coeffs.iter().enumerate() {
            for (b, c) in row.iter().enumerate() {
                total += c.norm() * r.powi((a + b) as i32);
            }
        }
        total
    }
}

/// For a cyclic curve ηᵐ = Q(ξ), the η-free form of the Lagrangian
/// condition: E = Im(Hᵐ · Q̄ᵐ⁻¹) with H = (1+ξξ̄)Q′ − 2mξ̄Q.
///
/// On a sheet, ∂η − 2ξ̄η/(1+ξξ̄) = η H / (m(1+ξξ̄)Q), so λ = 0 forces
/// (ηH/Q)ᵐ = Hᵐ/Qᵐ⁻¹ to be real; E vanishes on every sheet's zero set and
/// on spurious branches introduced by the power.
pub fn eliminate_cyclic(c: &SpectralCurve) -> Result<BiPoly> {
    let q = c.cyclic_q().ok_or(Error::NotCyclic)?;
    let m = c.charge();
    let one = Complex64::new(1.0, 0.0);
    let w = BiPoly::constant(one).add(&BiPoly::monomial(one, 1, 1));
    let q_xi = BiPoly::in_xi(&q);
    let dq = BiPoly::in_xi(&q.derivative());
    let xib = BiPoly::monomial(Complex64::new(2.0 * m as f64, 0.0), 0, 1);
    let h = w.mul(&dq).sub(&xib.mul(&q_xi));
    let qbar = BiPoly::conj_of_xi(&q);
    Ok(h.pow(m).mul(&qbar.pow(m - 1)).imag_part())
}
