//! Dense complex polynomials in one variable and a simultaneous root finder.
//!
//! Coefficients are stored in ascending order: `coeffs[i]` multiplies `x^i`.
//! Roots are found with the Aberth–Ehrlich iteration followed by a single
//! Newton polish per root; degrees in this crate stay small (at most a few
//! dozen), so robustness matters more than speed.

use num_complex::Complex64;

const MAX_ABERTH_ITER: usize = 800;

#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Nominal degree (length - 1), ignoring vanishing leading terms.
    pub fn nominal_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Degree after discarding leading coefficients smaller than
    /// `rel_tol * max|coeff|`. Returns `None` for the zero polynomial.
    pub fn effective_degree(&self, rel_tol: f64) -> Option<usize> {
        let scale = self.max_abs_coeff();
        if scale == 0.0 {
            return None;
        }
        self.coeffs.iter().rposition(|c| c.norm() > rel_tol * scale)
    }

    pub fn trimmed(&self, rel_tol: f64) -> Poly {
        match self.effective_degree(rel_tol) {
            Some(d) => Poly::new(self.coeffs[..=d].to_vec()),
            None => Poly::new(vec![Complex64::new(0.0, 0.0)]),
        }
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    /// Value and first derivative by Horner's scheme.
    pub fn eval_with_derivative(&self, x: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut p = zero;
        let mut dp = zero;
        for &c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    /// Sum of |a_i| |x|^i, the natural scale for backward-error tests.
    pub fn abs_eval(&self, x: Complex64) -> f64 {
        let r = x.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![Complex64::new(0.0, 0.0)]);
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        Poly::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).copied().unwrap_or(zero)
                        + other.coeffs.get(i).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// All roots of the polynomial (after trimming negligible leading terms
    /// at relative level `1e-14`).
    pub fn roots(&self) -> Vec<Complex64> {
        let p = self.trimmed(1e-14);
        let n = p.coeffs.len() - 1;
        match n {
            0 => Vec::new(),
            1 => vec![-p.coeffs[0] / p.coeffs[1]],
            _ => p.aberth(),
        }
    }

    fn aberth(&self) -> Vec<Complex64> {
        let n = self.coeffs.len() - 1;
        let lead = self.coeffs[n];
        // Zero roots are split off exactly; they slow the iteration otherwise.
        let zeros = self.coeffs.iter().take_while(|c| c.norm() == 0.0).count();
        if zeros > 0 {
            let reduced = Poly::new(self.coeffs[zeros..].to_vec());
            let mut roots = if reduced.coeffs.len() > 1 { reduced.roots() } else { Vec::new() };
            roots.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), zeros));
            return roots;
        }
        let radius = (self.coeffs[0].norm() / lead.norm()).powf(1.0 / n as f64);
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| {
                let angle = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
                Complex64::from_polar(radius, angle)
            })
            .collect();
        let mut done = vec![false; n];
        for _ in 0..MAX_ABERTH_ITER {
            let mut all_done = true;
            for k in 0..n {
                if done[k] {
                    continue;
                }
                let (p, dp) = self.eval_with_derivative(z[k]);
                if p.norm() <= 4.0 * f64::EPSILON * self.abs_eval(z[k]) {
                    done[k] = true;
                    continue;
                }
                all_done = false;
                if dp.norm() == 0.0 {
                    let bump = Complex64::new(1e-8, 1e-8) * (1.0 + z[k].norm());
                    z[k] += bump;
                    continue;
                }
                let ratio = p / dp;
                let repulsion: Complex64 = (0..n)
                    .filter(|&j| j != k)
                    .map(|j| {
                        let d = z[k] - z[j];
                        if d.norm() == 0.0 {
                            Complex64::new(0.0, 0.0)
                        } else {
                            d.inv()
                        }
                    })
                    .sum();
                let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
                z[k] -= step;
                if step.norm() <= 2.0 * f64::EPSILON * z[k].norm() {
                    done[k] = true;
                }
            }
            if all_done {
                break;
            }
        }
        z.into_iter().map(|r| self.polish(r)).collect()
    }

    /// One Newton step, kept only when it lowers the residual.
    fn polish(&self, z: Complex64) -> Complex64 {
        let (p, dp) = self.eval_with_derivative(z);
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            return z;
        }
        let cand = z - p / dp;
        if self.eval(cand).norm() < p.norm() {
            cand
        } else {
            z
        }
    }
}

/// Chordal distance on the Riemann sphere (unit-diameter convention doubled
/// to match the unit sphere): `2|a-b| / sqrt((1+|a|^2)(1+|b|^2))`.
pub fn chordal_distance(a: Complex64, b: Complex64) -> f64 {
    2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr())).sqrt()
}

/// Groups values whose pairwise distance (single linkage) is below `tol`.
/// Returns one cluster index per input value; cluster ids are assigned in
/// order of first appearance.
pub fn cluster_by<F>(values: &[Complex64], tol: f64, dist: F) -> Vec<usize>
where
    F: Fn(Complex64, Complex64) -> f64,
{
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
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
    for i in 0..n {
        for j in (i + 1)..n {
            if dist(values[i], values[j]) < tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut ids = vec![usize::MAX; n];
    let mut next = 0;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let r = find(&mut parent, i);
        if ids[r] == usize::MAX {
            ids[r] = next;
            next += 1;
        }
        out.push(ids[r]);
    }
    out
}
