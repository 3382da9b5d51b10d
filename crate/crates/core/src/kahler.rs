//! Pointwise invariants of surfaces and curves in T P¹ under its neutral
//! Kähler structure.
//!
//! For a parameterized surface ν ↦ (ξ, η) the complex-tangency defect is
//! σ = ∂ξ ∂̄η − ∂̄ξ ∂η and the pulled-back symplectic form is governed by
//!
//! ```text
//! ρ = ∂η ∂̄ξ̄ − ∂̄η ∂ξ̄ − 2ξ̄η/(1+ξξ̄) · (∂ξ ∂̄ξ̄ − ∂̄ξ ∂ξ̄)
//! ```
//!
//! with Lagrangian defect λ = Im ρ. On a holomorphic section η = F(ξ) this
//! reduces to λ = Im[∂F − 2ξ̄F/(1+ξξ̄)].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// First derivatives of a surface parameterization at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstOrderJet {
    pub xi: Complex64,
    pub eta: Complex64,
    pub d_xi: Complex64,
    pub d_eta: Complex64,
    pub db_xi: Complex64,
    pub db_eta: Complex64,
}

impl FirstOrderJet {
    /// Jet of the section graph ξ ↦ (ξ, F(ξ)) parameterized by ξ itself.
    pub fn of_section(s: &SectionJet) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Self {
            xi: s.xi,
            eta: s.value,
            d_xi: Complex64::new(1.0, 0.0),
            d_eta: s.derivative,
            db_xi: zero,
            db_eta: zero,
        }
    }

    /// ∂ξ ∂̄ξ̄ − ∂̄ξ ∂ξ̄; vanishes where the surface fails to be a graph over P¹.
    pub fn projection_jacobian(&self) -> f64 {
        self.d_xi.norm_sqr() - self.db_xi.norm_sqr()
    }

    /// ∂η ∂̄η̄ − ∂̄η ∂η̄.
    pub fn fibre_jacobian(&self) -> f64 {
        self.d_eta.norm_sqr() - self.db_eta.norm_sqr()
    }

    /// The η-derivatives corrected by the connection term 2ξ̄η/(1+ξξ̄).
    pub fn covariant_eta(&self) -> (Complex64, Complex64) {
        let c = connection(self.xi, self.eta);
        (self.d_eta - c * self.d_xi, self.db_eta - c * self.db_xi)
    }
}

/// Value and holomorphic derivative of a local section η = F(ξ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectionJet {
    pub xi: Complex64,
    pub value: Complex64,
    pub derivative: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoValue {
    pub psi: f64,
    pub lambda: f64,
}

impl RhoValue {
    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.psi, self.lambda)
    }
}

/// 2ξ̄η / (1 + ξξ̄)
pub fn connection(xi: Complex64, eta: Complex64) -> Complex64 {
    2.0 * xi.conj() * eta / (1.0 + xi.norm_sqr())
}

pub fn sigma(j: &FirstOrderJet) -> Complex64 {
    j.d_xi * j.db_eta - j.db_xi * j.d_eta
}

/// The uncorrected part ∂η ∂̄ξ̄ − ∂̄η ∂ξ̄ of ρ.
pub fn rho_principal(j: &FirstOrderJet) -> Complex64 {
    j.d_eta * j.d_xi.conj() - j.db_eta * j.db_xi.conj()
}

pub fn rho(j: &FirstOrderJet) -> RhoValue {
    let value = rho_principal(j) - connection(j.xi, j.eta) * j.projection_jacobian();
    RhoValue { psi: value.re, lambda: value.im }
}

/// ρ of a holomorphic section: ∂F − 2ξ̄F/(1+ξξ̄).
pub fn rho_on_section(s: &SectionJet) -> RhoValue {
    let value = s.derivative - connection(s.xi, s.value);
    RhoValue { psi: value.re, lambda: value.im }
}

pub fn lambda_on_section(s: &SectionJet) -> f64 {
    rho_on_section(s).lambda
}

/// Null defect Im[(1+ξξ̄) η̇ ξ̄̇ + 2ξη̄ ξ̇ ξ̄̇] of a real curve's tangent.
///
/// The neutral metric evaluated on the tangent equals `-4/(1+ξξ̄)^3` times
/// this quantity, see [`metric_g`].
pub fn metric_along_curve(
    xi: Complex64,
    eta: Complex64,
    dot_xi: Complex64,
    dot_eta: Complex64,
) -> f64 {
    let w = 1.0 + xi.norm_sqr();
    (w * dot_eta * dot_xi.conj() + 2.0 * xi * eta.conj() * dot_xi.norm_sqr()).im
}

/// The neutral Kähler metric
///
/// ```text
/// G = 2i/(1+ξξ̄)² ( dη dξ̄ − dη̄ dξ + 2(ξη̄ − ξ̄η)/(1+ξξ̄) dξ dξ̄ )
/// ```
///
/// evaluated on two real tangent vectors `u = (u_ξ, u_η)`, `v = (v_ξ, v_η)`,
/// with symmetric products `da db (u, v) = ½(da(u) db(v) + db(u) da(v))`.
pub fn metric_g(
    xi: Complex64,
    eta: Complex64,
    u: (Complex64, Complex64),
    v: (Complex64, Complex64),
) -> f64 {
    let w = 1.0 + xi.norm_sqr();
    let sym = |a: (Complex64, Complex64), b: (Complex64, Complex64)| 0.5 * (a.0 * b.1 + a.1 * b.0);
    let (u_xi, u_eta) = u;
    let (v_xi, v_eta) = v;
    let deta_dxib = sym((u_eta, v_eta), (u_xi.conj(), v_xi.conj()));
    let detab_dxi = sym((u_eta.conj(), v_eta.conj()), (u_xi, v_xi));
    let dxi_dxib = sym((u_xi, v_xi), (u_xi.conj(), v_xi.conj()));
    let coef = 2.0 * (xi * eta.conj() - xi.conj() * eta) / w;
    let value = Complex64::new(0.0, 2.0) / (w * w) * (deta_dxib - detab_dxi + coef * dxi_dxib);
    value.re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correspondence::{point_to_section, EuclideanPoint};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sigma_vanishes_on_holomorphic_graph() {
        let j = FirstOrderJet::of_section(&SectionJet {
            xi: c(0.3, -0.2),
            value: c(1.0, 2.0),
            derivative: c(-0.4, 0.9),
        });
        assert_eq!(sigma(&j).norm(), 0.0);
    }

    #[test]
    fn sigma_arithmetic() {
        let one = c(1.0, 0.0);
        let j = FirstOrderJet {
            xi: c(0.0, 0.0),
            eta: c(0.0, 0.0),
            d_xi: one,
            db_xi: one,
            d_eta: one,
            db_eta: -one,
        };
        assert!((sigma(&j) - c(-2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn point_section_is_lagrangian_with_psi_minus_r() {
        let p = EuclideanPoint::new(0.7, -1.1, 0.4);
        let sec = point_to_section(&p);
        for xi in [c(0.0, 0.0), c(0.5, 0.5), c(-2.0, 1.3), c(10.0, -3.0)] {
            let rho = rho_on_section(&SectionJet {
                xi,
                value: sec.eval(xi),
                derivative: sec.derivative(xi),
            });
            assert!(rho.lambda.abs() < 1e-12);
            assert!((rho.psi + sec.parameter_at(xi)).abs() < 1e-10);
        }
    }

    #[test]
    fn section_rho_matches_general_rho() {
        let s = SectionJet { xi: c(0.8, -0.3), value: c(0.2, 1.7), derivative: c(-1.1, 0.4) };
        let a = rho_on_section(&s);
        let b = rho(&FirstOrderJet::of_section(&s));
        assert!((a.as_complex() - b.as_complex()).norm() < 1e-15);
    }

    #[test]
    fn fibre_direction_is_null() {
        let v = metric_along_curve(c(0.4, 0.1), c(2.0, -1.0), c(0.0, 0.0), c(3.0, 0.5));
        assert_eq!(v, 0.0);
    }
}
