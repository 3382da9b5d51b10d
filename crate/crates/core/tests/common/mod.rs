//! Oracles written independently of the library: closed forms evaluated from
//! scratch, brute-force numerics, and classical differential geometry.
#![allow(dead_code)]

use std::f64::consts::{PI, SQRT_2};

use minitwistor::correspondence::Chart;
use num_complex::Complex64;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub type V3 = [f64; 3];

pub fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn add(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn scale(a: V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: V3, b: V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

pub fn seg_dist(p: V3, a: V3, b: V3) -> f64 {
    let ab = sub(b, a);
    let l2 = dot(ab, ab);
    let t = if l2 > 0.0 { (dot(sub(p, a), ab) / l2).clamp(0.0, 1.0) } else { 0.0 };
    norm(sub(p, add(a, scale(ab, t))))
}

/// z = [2(η − η̄ξ²) + 2ξ(1+ξξ̄)r]/(1+ξξ̄)², t = [−2(ηξ̄ + η̄ξ) + (1−ξ²ξ̄²)r]/(1+ξξ̄)².
pub fn phi_north(xi: Complex64, eta: Complex64, r: f64) -> V3 {
    let w = 1.0 + xi.norm_sqr();
    let z = (2.0 * (eta - eta.conj() * xi * xi) + 2.0 * xi * w * r) / (w * w);
    let t = (-2.0 * (eta * xi.conj() + eta.conj() * xi).re + (1.0 - xi.norm_sqr().powi(2)) * r) / (w * w);
    [z.re, z.im, t]
}

/// South-chart lines are the North formula followed by the half-turn about x¹.
pub fn phi(chart: Chart, xi: Complex64, eta: Complex64, r: f64) -> V3 {
    let p = phi_north(xi, eta, r);
    match chart {
        Chart::North => p,
        Chart::South => [p[0], -p[1], -p[2]],
    }
}

/// (ξ, η) ↦ (1/ξ, −η/ξ²).
pub fn transition(xi: Complex64, eta: Complex64) -> (Complex64, Complex64) {
    let inv = xi.inv();
    (inv, -eta * inv * inv)
}

pub fn to_north(chart: Chart, xi: Complex64, eta: Complex64) -> (Complex64, Complex64) {
    match chart {
        Chart::North => (xi, eta),
        Chart::South => transition(xi, eta),
    }
}

/// Unit direction (2ξ, 1 − |ξ|²)/(1 + |ξ|²), read off the r-derivative of `phi_north`.
pub fn direction(xi: Complex64) -> V3 {
    let w = 1.0 + xi.norm_sqr();
    [2.0 * xi.re / w, 2.0 * xi.im / w, (1.0 - xi.norm_sqr()) / w]
}

pub fn xi_of_direction(d: V3) -> Complex64 {
    c(d[0], d[1]) / (1.0 + d[2])
}

/// The line through `p` with unit direction `d`, in North coordinates.
pub fn line_of(p: V3, d: V3) -> (Complex64, Complex64) {
    let xi = xi_of_direction(d);
    let z = c(p[0], p[1]);
    let t = p[2];
    (xi, 0.5 * (z - 2.0 * t * xi - z.conj() * xi * xi))
}

pub fn chordal(a: Complex64, b: Complex64) -> f64 {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => 2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr())).sqrt(),
        (false, false) => 0.0,
        (true, false) => 2.0 / (1.0 + a.norm_sqr()).sqrt(),
        (false, true) => 2.0 / (1.0 + b.norm_sqr()).sqrt(),
    }
}

/// Point of the sphere for a chart coordinate (South coordinates are 1/ξ).
pub fn sphere_point(chart: Chart, xi: Complex64) -> V3 {
    let north = match chart {
        Chart::North => xi,
        Chart::South => {
            if xi.norm() == 0.0 {
                return [0.0, 0.0, -1.0];
            }
            xi.inv()
        }
    };
    direction(north)
}

/// K(k) = ∫₀^{π/2} dθ/√(1 − k² sin²θ) by the trapezoid rule over a full period,
/// which converges geometrically for this analytic periodic integrand.
pub fn elliptic_k_quadrature(k: f64) -> f64 {
    let n = 4096;
    let h = 2.0 * PI / n as f64;
    let sum: f64 = (0..n).map(|i| 1.0 / (1.0 - (k * (i as f64 * h).sin()).powi(2)).sqrt()).sum();
    sum * h / 4.0
}

/// ln Γ(x) for x > 0 by recurrence up to x + 30 and the Stirling series there.
pub fn ln_gamma(x: f64) -> f64 {
    let shift = 30;
    let mut acc = 0.0;
    let mut y = x;
    for _ in 0..shift {
        acc -= y.ln();
        y += 1.0;
    }
    let b = [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360360.0];
    let mut series = 0.0;
    for (n, bn) in b.iter().enumerate() {
        series += bn / y.powi(2 * n as i32 + 1);
    }
    acc + (y - 0.5) * y.ln() - y + 0.5 * (2.0 * PI).ln() + series
}

pub fn gamma_one_third() -> f64 {
    ln_gamma(1.0 / 3.0).exp()
}

/// Roots of Σ aᵢ xⁱ by Durand–Kerner, after trimming vanishing leading terms.
pub fn poly_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let top = coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut n = coeffs.len() - 1;
    while n > 0 && coeffs[n].norm() <= 1e-13 * top {
        n -= 1;
    }
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs[..=n].iter().map(|z| z / lead).collect();
    let eval = |x: Complex64| monic.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * x + a);
    let radius = 1.0 + monic[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n).map(|i| Complex64::from_polar(radius, 0.4 + 2.0 * PI * i as f64 / n as f64)).collect();
    for _ in 0..2000 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let mut den = c(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                continue;
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * radius {
            break;
        }
    }
    z
}

/// Polynomial coefficients (ascending) of f restricted to degree ≤ n, recovered
/// from samples on a circle by a discrete Fourier transform.
pub fn interpolate(f: impl Fn(Complex64) -> Complex64, n: usize, radius: f64) -> Vec<Complex64> {
    let m = n + 1;
    let samples: Vec<Complex64> = (0..m).map(|i| f(Complex64::from_polar(radius, 2.0 * PI * i as f64 / m as f64))).collect();
    (0..m)
        .map(|k| {
            let s: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(i, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (i * k) as f64 / m as f64))
                .sum();
            s / (m as f64 * radius.powi(k as i32))
        })
        .collect()
}

/// A cyclic curve ηᵐ = c·Q(ξ) written out in one chart.
#[derive(Clone)]
pub struct Cyclic {
    pub m: usize,
    pub c: f64,
    pub q: Vec<f64>,
}

impl Cyclic {
    pub fn charge2(k: f64) -> Self {
        let alpha = (elliptic_k_quadrature(k) / 2.0).powi(2);
        let k2 = k * k;
        Cyclic { m: 2, c: alpha, q: vec![k2, 0.0, -2.0 * (2.0 - k2), 0.0, k2] }
    }

    /// Both charts agree for the charge-2 curve.
    pub fn charge2_south(k: f64) -> Self {
        Self::charge2(k)
    }

    pub fn charge3_constant() -> f64 {
        gamma_one_third().powi(9) / (48.0 * 6.0_f64.sqrt() * PI.powi(3))
    }

    pub fn charge3() -> Self {
        Cyclic { m: 3, c: Self::charge3_constant(), q: vec![1.0, 0.0, 0.0, -5.0 * SQRT_2, 0.0, 0.0, -1.0] }
    }

    /// η' = −η/ξ², ξ' = 1/ξ turns ηᵐ = cQ(ξ) into η'³ = c(1 + 5√2ξ'³ − ξ'⁶).
    pub fn charge3_south() -> Self {
        Cyclic { m: 3, c: Self::charge3_constant(), q: vec![1.0, 0.0, 0.0, 5.0 * SQRT_2, 0.0, 0.0, -1.0] }
    }

    pub fn q(&self, xi: Complex64) -> Complex64 {
        self.q.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * xi + a)
    }

    pub fn dq(&self, xi: Complex64) -> Complex64 {
        self.q.iter().enumerate().skip(1).rev().fold(c(0.0, 0.0), |acc, (i, &a)| acc * xi + a * i as f64)
    }

    pub fn residual(&self, xi: Complex64, eta: Complex64) -> f64 {
        let lhs = eta.powu(self.m as u32);
        let rhs = self.c * self.q(xi);
        (lhs - rhs).norm() / (1.0 + lhs.norm() + rhs.norm())
    }

    pub fn sheets(&self, xi: Complex64) -> Vec<Complex64> {
        let base = (self.c * self.q(xi)).powf(1.0 / self.m as f64);
        (0..self.m).map(|j| base * Complex64::from_polar(1.0, 2.0 * PI * j as f64 / self.m as f64)).collect()
    }

    /// ∂F = F Q'/(mQ) on the sheet through (ξ, F).
    pub fn d_eta(&self, xi: Complex64, eta: Complex64) -> Complex64 {
        eta * self.dq(xi) / (self.m as f64 * self.q(xi))
    }

    /// λ = Im(∂F − 2ξ̄F/(1+ξξ̄)).
    pub fn lambda(&self, xi: Complex64, eta: Complex64) -> f64 {
        (self.d_eta(xi, eta) - 2.0 * xi.conj() * eta / (1.0 + xi.norm_sqr())).im
    }

    /// Roots of Q, i.e. the finite branch points.
    pub fn branch_points(&self) -> Vec<Complex64> {
        let q: Vec<Complex64> = self.q.iter().map(|&a| c(a, 0.0)).collect();
        poly_roots(&q)
    }
}

/// Gauss curvature of X(s, r) = base(s) + r·dir(s) (unit dir) from the
/// classical formula K = −det(d, d′, b′)² / |X_s × d|⁴, with b′, d′ by
/// central differences of `line(s) -> (base, dir)` at step `h`.
pub fn ruled_curvature(line: impl Fn(f64) -> (V3, V3), s: f64, r: f64, h: f64) -> (f64, f64) {
    let (_, d0) = line(s);
    let (bp, dp) = line(s + h);
    let (bm, dm) = line(s - h);
    let db = scale(sub(bp, bm), 0.5 / h);
    let dd = scale(sub(dp, dm), 0.5 / h);
    let xs = add(db, scale(dd, r));
    let n = cross(xs, d0);
    let det = dot(d0, cross(dd, db));
    let den = dot(n, n);
    (-det * det / (den * den), den.sqrt())
}

/// The ruled-surface line map of a jet (ξ, η, ξ̇, η̇) moving along s.
pub fn jet_line(chart: Chart, xi: Complex64, eta: Complex64, dxi: Complex64, deta: Complex64) -> impl Fn(f64) -> (V3, V3) {
    move |s: f64| {
        let (x, e) = (xi + dxi * s, eta + deta * s);
        let b = phi(chart, x, e, 0.0);
        let d = sub(phi(chart, x, e, 1.0), b);
        (b, d)
    }
}

/// G(v, v) for v = (ξ̇, η̇) from G = 2i/w² (dη dξ̄ − dη̄ dξ + 2(ξη̄ − ξ̄η)/w dξ dξ̄).
pub fn metric_on(xi: Complex64, eta: Complex64, dxi: Complex64, deta: Complex64) -> f64 {
    let w = 1.0 + xi.norm_sqr();
    let inner = deta * dxi.conj() - deta.conj() * dxi + 2.0 * (xi * eta.conj() - xi.conj() * eta) / w * dxi.norm_sqr();
    (c(0.0, 2.0) / (w * w) * inner).re
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// Segments bucketed on a uniform grid; queries look at the 3ᴺ cells around
/// the query point, so answers are exact up to distance `cell`.
pub struct SegIndex<const N: usize> {
    cell: f64,
    segs: Vec<([f64; N], [f64; N], usize)>,
    buckets: std::collections::HashMap<[i64; N], Vec<usize>>,
}

impl<const N: usize> SegIndex<N> {
    pub fn new(cell: f64) -> Self {
        Self { cell, segs: Vec::new(), buckets: Default::default() }
    }

    fn key(&self, p: &[f64; N]) -> [i64; N] {
        let mut k = [0i64; N];
        for i in 0..N {
            k[i] = (p[i] / self.cell).floor() as i64;
        }
        k
    }

    pub fn insert(&mut self, a: [f64; N], b: [f64; N], tag: usize) {
        let id = self.segs.len();
        self.segs.push((a, b, tag));
        let len = (0..N).map(|i| (a[i] - b[i]).powi(2)).sum::<f64>().sqrt();
        let steps = (2.0 * len / self.cell).ceil().max(1.0) as usize;
        let mut seen = Vec::new();
        for s in 0..=steps {
            let t = s as f64 / steps as f64;
            let mut p = [0.0; N];
            for i in 0..N {
                p[i] = a[i] + t * (b[i] - a[i]);
            }
            let k = self.key(&p);
            if !seen.contains(&k) {
                seen.push(k);
                self.buckets.entry(k).or_default().push(id);
            }
        }
    }

    /// Smallest distance to a segment accepted by `keep`, or infinity when
    /// none lies in the neighbouring cells.
    pub fn nearest(&self, p: &[f64; N], keep: impl Fn(usize) -> bool) -> f64 {
        let k = self.key(p);
        let mut best = f64::INFINITY;
        for code in 0..3usize.pow(N as u32) {
            let mut q = k;
            let mut c = code;
            for qi in q.iter_mut() {
                *qi += (c % 3) as i64 - 1;
                c /= 3;
            }
            if let Some(ids) = self.buckets.get(&q) {
                for &id in ids {
                    let (a, b, tag) = &self.segs[id];
                    if keep(*tag) {
                        best = best.min(seg_dist_n(p, a, b));
                    }
                }
            }
        }
        best
    }
}

pub fn seg_dist_n<const N: usize>(p: &[f64; N], a: &[f64; N], b: &[f64; N]) -> f64 {
    let (mut ab2, mut apab) = (0.0, 0.0);
    for i in 0..N {
        ab2 += (b[i] - a[i]).powi(2);
        apab += (p[i] - a[i]) * (b[i] - a[i]);
    }
    let t = if ab2 > 0.0 { (apab / ab2).clamp(0.0, 1.0) } else { 0.0 };
    (0..N).map(|i| (p[i] - a[i] - t * (b[i] - a[i])).powi(2)).sum::<f64>().sqrt()
}
