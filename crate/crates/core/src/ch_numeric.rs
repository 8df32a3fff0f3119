//! Numerical Coleff–Herrera residues at isolated points.
//!
//! For a local biholomorphism `f = (f_1, …, f_k)` with `f(0) = 0` the
//! polytube `T_ε = {|f_i| = ε_i}` is parametrized by `θ ↦ y(θ) = f⁻¹(ε e^{iθ})`,
//! each point obtained by damped Newton iteration seeded with the
//! linearization. Pulling `g · df_1/f_1 ∧ … ∧ df_k/f_k` back along this map
//! gives `g(y(θ)) ∏ du_i/u_i`, so `(2πi)^{-k} ∫_{T_ε}` is the mean of `g ∘ y`
//! over the angular torus, evaluated with the product trapezoid rule. With
//! the `dy` pairing the integrand picks up `det(∂y/∂u) = det J_f(y)^{-1}`.
//!
//! Grid evaluations run in parallel; the reduction is sequential in grid
//! order, so results are reproducible bit for bit.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyDoc};
use crate::rational::{to_f64, Q};

/// Threshold below which `|det J_f(0)|` counts as singular.
pub const JACOBIAN_THRESHOLD: f64 = 1e-12;
pub const MAX_NEWTON_ITERATIONS: usize = 50;
/// Agreement required between an extrapolated residue and its exact limit.
pub const EXTRAPOLATED_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct LocalMap {
    components: Vec<Poly>,
    jacobian: Vec<Vec<Poly>>,
}

impl LocalMap {
    pub fn new(components: Vec<Poly>) -> Result<Self> {
        let k = components.len();
        if k == 0 {
            return Err(Error::input("local map has no components"));
        }
        if let Some(p) = components.iter().find(|p| p.nvars() != k) {
            return Err(Error::input(format!(
                "component {p} is not a polynomial in {k} variables"
            )));
        }
        if let Some((i, _)) = components
            .iter()
            .enumerate()
            .find(|(_, p)| !p.constant_term().is_zero())
        {
            return Err(Error::input(format!(
                "component {i} does not vanish at the origin"
            )));
        }
        let jacobian: Vec<Vec<Poly>> = components
            .iter()
            .map(|f| (0..k).map(|j| f.derivative(j)).collect())
            .collect();
        let map = LocalMap {
            components,
            jacobian,
        };
        let det0 = map.jacobian_det_at_origin();
        if to_f64(&det0).abs() <= JACOBIAN_THRESHOLD {
            return Err(Error::input(format!(
                "Jacobian determinant at the origin is {det0}; the map is not a local biholomorphism"
            )));
        }
        Ok(map)
    }

    pub fn codim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    /// Exact `det J_f(0)`.
    pub fn jacobian_det_at_origin(&self) -> Q {
        let m: Vec<Vec<Q>> = self
            .jacobian
            .iter()
            .map(|row| row.iter().map(Poly::constant_term).collect())
            .collect();
        rational_det(m)
    }

    pub fn eval(&self, y: &[Complex64]) -> Vec<Complex64> {
        self.components.iter().map(|f| f.eval_complex(y)).collect()
    }

    pub fn jacobian(&self, y: &[Complex64]) -> Vec<Vec<Complex64>> {
        self.jacobian
            .iter()
            .map(|row| row.iter().map(|p| p.eval_complex(y)).collect())
            .collect()
    }

    /// `M · f` for an invertible rational matrix `M`.
    pub fn compose_linear(&self, m: &[Vec<Q>]) -> Result<LocalMap> {
        let k = self.codim();
        if m.len() != k || m.iter().any(|row| row.len() != k) {
            return Err(Error::input(format!("transformation must be {k}×{k}")));
        }
        if rational_det(m.to_vec()).is_zero() {
            return Err(Error::input("transformation matrix is singular"));
        }
        let comps = m
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.components)
                    .fold(Poly::zero(k), |acc, (c, f)| acc.add(&f.scale(c)))
            })
            .collect();
        LocalMap::new(comps)
    }
}

fn rational_det(mut m: Vec<Vec<Q>>) -> Q {
    let n = m.len();
    let mut det = Q::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Q::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in (col + 1)..n {
            let factor = &m[r][col] / &p;
            if factor.is_zero() {
                continue;
            }
            let (upper, lower) = m.split_at_mut(r);
            for (x, y) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= &factor * y;
            }
        }
    }
    det
}

/// Which form the test function is paired with.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pairing {
    /// `g · df_1/f_1 ∧ … ∧ df_k/f_k`; the limit is `g(0)`.
    #[default]
    Df,
    /// `g · dy_1 ∧ … ∧ dy_k / (f_1⋯f_k)`; the limit is `g(0) / det J_f(0)`.
    Dy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Base radius ε.
    pub eps: f64,
    /// Per-factor multipliers: `ε_i = eps · radius_weights[i]`. Empty means
    /// all radii equal.
    #[serde(default)]
    pub radius_weights: Vec<f64>,
    /// Points per circle, a power of two.
    pub points: usize,
    pub newton_tol: f64,
    /// Base radii for the extrapolation ladder, coarse to fine.
    pub ladder: Vec<f64>,
    pub tolerance: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            eps: 0.1,
            radius_weights: Vec::new(),
            points: 64,
            newton_tol: 1e-14,
            ladder: vec![0.1, 0.05],
            tolerance: EXTRAPOLATED_TOLERANCE,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self, k: usize) -> Result<()> {
        if !self.eps.is_finite() || self.eps <= 0.0 {
            return Err(Error::input(format!(
                "radius {} must be positive",
                self.eps
            )));
        }
        if self.points == 0 || !self.points.is_power_of_two() {
            return Err(Error::input(format!(
                "points per circle {} is not a power of two",
                self.points
            )));
        }
        if !self.radius_weights.is_empty()
            && (self.radius_weights.len() != k
                || self.radius_weights.iter().any(|w| w.is_nan() || *w <= 0.0))
        {
            return Err(Error::input(format!("need {k} positive radius weights")));
        }
        if self.newton_tol.is_nan() || self.newton_tol <= 0.0 {
            return Err(Error::input("Newton tolerance must be positive"));
        }
        if self.ladder.iter().any(|e| e.is_nan() || *e <= 0.0) {
            return Err(Error::input("ladder radii must be positive"));
        }
        Ok(())
    }

    fn radii(&self, eps: f64, k: usize) -> Vec<f64> {
        if self.radius_weights.is_empty() {
            vec![eps; k]
        } else {
            self.radius_weights.iter().map(|w| eps * w).collect()
        }
    }

    pub fn with_eps(&self, eps: f64) -> Self {
        QuadratureConfig {
            eps,
            ..self.clone()
        }
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting. Returns the
/// solution and `det a`.
fn solve(mut a: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Option<(Vec<Complex64>, Complex64)> {
    let n = b.len();
    let mut det = Complex64::one();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))?;
        if a[pivot][col].norm() == 0.0 {
            return None;
        }
        if pivot != col {
            a.swap(pivot, col);
            b.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for r in (col + 1)..n {
            let factor = a[r][col] / p;
            let (upper, lower) = a.split_at_mut(r);
            for (x, y) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *x -= factor * y;
            }
            let delta = factor * b[col];
            b[r] -= delta;
        }
    }
    let mut x = vec![Complex64::zero(); n];
    for r in (0..n).rev() {
        let s: Complex64 = ((r + 1)..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some((x, det))
}

fn format_point(u: &[Complex64]) -> String {
    let parts: Vec<String> = u
        .iter()
        .map(|z| format!("{:.3e}{:+.3e}i", z.re, z.im))
        .collect();
    format!("({})", parts.join(", "))
}

/// Solve `f(y) = u` near the origin.
pub fn tube_point(
    map: &LocalMap,
    u: &[Complex64],
    cfg: &QuadratureConfig,
) -> Result<Vec<Complex64>> {
    let k = map.codim();
    if u.len() != k {
        return Err(Error::input(format!(
            "target point has {} coordinates, expected {k}",
            u.len()
        )));
    }
    let fail = |reason: &str| Error::TubeFailure {
        point: format_point(u),
        reason: reason.to_string(),
    };
    let j0 = map.jacobian(&vec![Complex64::zero(); k]);
    let (mut y, _) =
        solve(j0, u.to_vec()).ok_or_else(|| fail("singular Jacobian at the origin"))?;
    let residual = |y: &[Complex64]| -> Vec<Complex64> {
        map.eval(y).iter().zip(u).map(|(a, b)| a - b).collect()
    };
    let mut r = residual(&y);
    let mut rn = norm(&r);
    for _ in 0..MAX_NEWTON_ITERATIONS {
        if rn < cfg.newton_tol {
            return Ok(y);
        }
        let (step, _) = solve(map.jacobian(&y), r.clone())
            .ok_or_else(|| fail("singular Jacobian along the iteration"))?;
        let mut alpha = 1.0;
        loop {
            let trial: Vec<Complex64> = y.iter().zip(&step).map(|(a, s)| a - s * alpha).collect();
            let tr = residual(&trial);
            let tn = norm(&tr);
            if tn < rn || alpha < 1e-6 {
                y = trial;
                r = tr;
                rn = tn;
                break;
            }
            alpha *= 0.5;
        }
    }
    if rn < cfg.newton_tol {
        Ok(y)
    } else {
        Err(fail(&format!(
            "Newton did not converge in {MAX_NEWTON_ITERATIONS} iterations (residual {rn:.3e}); ε is too large"
        )))
    }
}

/// `(2πi)^{-k} ∫_{T_ε} g · ω` at the configured radius.
pub fn polytube_residue(
    map: &LocalMap,
    g: &Poly,
    cfg: &QuadratureConfig,
    pairing: Pairing,
) -> Result<Complex64> {
    let k = map.codim();
    cfg.validate(k)?;
    if g.nvars() != k {
        return Err(Error::input(format!(
            "test function must be a polynomial in {k} variables"
        )));
    }
    let n = cfg.points;
    let total = n
        .checked_pow(k as u32)
        .ok_or_else(|| Error::input("quadrature grid too large"))?;
    let radii = cfg.radii(cfg.eps, k);
    let values: Vec<Result<Complex64>> =
        (0..total)
            .into_par_iter()
            .map(|idx| {
                let mut rest = idx;
                let u: Vec<Complex64> = radii
                    .iter()
                    .map(|&eps| {
                        let j = rest % n;
                        rest /= n;
                        Complex64::from_polar(eps, 2.0 * PI * j as f64 / n as f64)
                    })
                    .collect();
                let y = tube_point(map, &u, cfg)?;
                let gy = g.eval_complex(&y);
                Ok(match pairing {
                    Pairing::Df => gy,
                    Pairing::Dy => {
                        let (_, det) = solve(map.jacobian(&y), vec![Complex64::zero(); k])
                            .ok_or_else(|| Error::TubeFailure {
                                point: format_point(&u),
                                reason: "singular Jacobian on the tube".into(),
                            })?;
                        gy / det
                    }
                })
            })
            .collect();
    let mut acc = Complex64::zero();
    for v in values {
        acc += v?;
    }
    Ok(acc / total as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RichardsonEstimate {
    /// Value at the smallest radius.
    pub raw: Complex64,
    pub extrapolated: Complex64,
}

/// Linear-in-ε extrapolation to ε = 0 from the last two samples.
pub fn richardson_limit(values: &[(f64, Complex64)]) -> Result<RichardsonEstimate> {
    if values.len() < 2 {
        return Err(Error::input(
            "Richardson extrapolation needs at least two samples",
        ));
    }
    let (e1, v1) = values[values.len() - 2];
    let (e2, v2) = values[values.len() - 1];
    if e1 == e2 {
        return Err(Error::input(format!(
            "repeated radius {e1} in the Richardson ladder"
        )));
    }
    Ok(RichardsonEstimate {
        raw: v2,
        extrapolated: (v2 * e1 - v1 * e2) / (e1 - e2),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueEstimate {
    pub samples: Vec<(f64, Complex64)>,
    pub raw: Complex64,
    pub extrapolated: Complex64,
}

/// Residues over the configured ladder of radii, extrapolated to ε = 0.
pub fn polytube_limit(
    map: &LocalMap,
    g: &Poly,
    cfg: &QuadratureConfig,
    pairing: Pairing,
) -> Result<ResidueEstimate> {
    let samples = cfg
        .ladder
        .iter()
        .map(|&eps| Ok((eps, polytube_residue(map, g, &cfg.with_eps(eps), pairing)?)))
        .collect::<Result<Vec<_>>>()?;
    let est = richardson_limit(&samples)?;
    Ok(ResidueEstimate {
        samples,
        raw: est.raw,
        extrapolated: est.extrapolated,
    })
}

/// Exact limit of the residue: `g(0)`, or `g(0)/det J_f(0)` for `dy`.
pub fn expected_residue(map: &LocalMap, g: &Poly, pairing: Pairing) -> Q {
    match pairing {
        Pairing::Df => g.constant_term(),
        Pairing::Dy => g.constant_term() / map.jacobian_det_at_origin(),
    }
}

/// Residues of `g` against `f` and against `M·f` (both paired with `df`).
/// The factors `det M` from `d(Mf)` and from the current cancel, so the two
/// values agree.
pub fn transformation_check(
    map: &LocalMap,
    m: &[Vec<Q>],
    g: &Poly,
    cfg: &QuadratureConfig,
) -> Result<(Complex64, Complex64)> {
    let transformed = map.compose_linear(m)?;
    let original = polytube_residue(map, g, cfg, Pairing::Df)?;
    let moved = polytube_residue(&transformed, g, cfg, Pairing::Df)?;
    Ok((original, moved))
}

/// Serialized residue problem: `{map: [poly...], test_function: poly, pairing}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidueDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub map: Vec<PolyDoc>,
    pub test_function: PolyDoc,
    #[serde(default)]
    pub pairing: Pairing,
}

impl ResidueDoc {
    pub fn build(&self) -> Result<(LocalMap, Poly)> {
        let k = self.map.len();
        let comps = self
            .map
            .iter()
            .map(|p| p.to_poly(k))
            .collect::<Result<Vec<_>>>()?;
        Ok((LocalMap::new(comps)?, self.test_function.to_poly(k)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn identity(k: usize) -> LocalMap {
        LocalMap::new((0..k).map(|i| Poly::var(k, i)).collect()).unwrap()
    }

    /// f = (y₀(1 + y₁), y₁)
    fn skew() -> LocalMap {
        let y0 = Poly::var(2, 0);
        let y1 = Poly::var(2, 1);
        LocalMap::new(vec![y0.mul(&Poly::one(2).add(&y1)), y1]).unwrap()
    }

    #[test]
    fn tube_points_invert_the_map() {
        let cfg = QuadratureConfig::default();
        let u = vec![c(0.03, -0.02), c(-0.01, 0.05)];
        let y = tube_point(&identity(2), &u, &cfg).unwrap();
        assert!(norm(&[y[0] - u[0], y[1] - u[1]]) < 1e-15);

        // linear map [[2, 1], [0, 3]]: y = M^{-1} u
        let m = LocalMap::new(vec![
            Poly::var(2, 0).scale(&q(2)).add(&Poly::var(2, 1)),
            Poly::var(2, 1).scale(&q(3)),
        ])
        .unwrap();
        let y = tube_point(&m, &u, &cfg).unwrap();
        let y1 = u[1] / 3.0;
        let y0 = (u[0] - y1) / 2.0;
        assert!(norm(&[y[0] - y0, y[1] - y1]) < 1e-15);

        // triangular system solved by hand: u = (ε, 0) gives y = (ε, 0)
        let y = tube_point(&skew(), &[c(0.1, 0.0), c(0.0, 0.0)], &cfg).unwrap();
        assert!(norm(&[y[0] - c(0.1, 0.0), y[1]]) < 1e-15);
    }

    #[test]
    fn newton_failure_is_reported() {
        // y + y² = u has no solution branch continuing from the seed at |u| = 10
        let f = LocalMap::new(vec![
            Poly::var(1, 0).add(&Poly::var(1, 0).pow(2).scale(&q(50)))
        ])
        .unwrap();
        let cfg = QuadratureConfig::default();
        let err = tube_point(&f, &[c(-10.0, 0.0)], &cfg).unwrap_err();
        assert!(matches!(err, Error::TubeFailure { .. }));
    }

    #[test]
    fn cauchy_integrals() {
        let cfg = QuadratureConfig::default();
        let y = Poly::var(1, 0);
        let g = Poly::one(1).add(&y).add(&y.pow(2).scale(&frac(1, 2)));
        let r = polytube_residue(&identity(1), &g, &cfg, Pairing::Df).unwrap();
        assert!((r - c(1.0, 0.0)).norm() < 1e-12);

        let g2 = Poly::constant(2, q(3)).add(&Poly::var(2, 0).mul(&Poly::var(2, 1)));
        let r = polytube_residue(&identity(2), &g2, &cfg, Pairing::Df).unwrap();
        assert!((r - c(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn nonlinear_map_extrapolates_to_point_mass() {
        let cfg = QuadratureConfig::default();
        let est = polytube_limit(&skew(), &Poly::one(2), &cfg, Pairing::Df).unwrap();
        assert!((est.extrapolated - c(1.0, 0.0)).norm() < 1e-6);
        let g = Poly::constant(2, q(2))
            .add(&Poly::var(2, 0))
            .add(&Poly::var(2, 1).pow(2));
        let est = polytube_limit(&skew(), &g, &cfg, Pairing::Df).unwrap();
        assert!((est.extrapolated - c(2.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn richardson_cases() {
        let constant = richardson_limit(&[(0.1, c(2.0, 1.0)), (0.05, c(2.0, 1.0))]).unwrap();
        assert!((constant.extrapolated - c(2.0, 1.0)).norm() < 1e-15);
        let linear = richardson_limit(&[(0.1, c(1.1, 0.0)), (0.05, c(1.05, 0.0))]).unwrap();
        assert!((linear.extrapolated - c(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(linear.raw, c(1.05, 0.0));
        assert!(richardson_limit(&[(0.1, c(1.0, 0.0)), (0.1, c(1.0, 0.0))]).is_err());
        assert!(richardson_limit(&[(0.1, c(1.0, 0.0))]).is_err());
    }

    #[test]
    fn linear_change_of_generators() {
        let cfg = QuadratureConfig::default();
        let m = vec![vec![q(2), q(1)], vec![q(0), q(3)]];
        let (a, b) = transformation_check(&identity(2), &m, &Poly::one(2), &cfg).unwrap();
        assert!((a - c(1.0, 0.0)).norm() < 1e-8);
        assert!((b - c(1.0, 0.0)).norm() < 1e-8);

        let y = Poly::var(1, 0);
        let (a, b) =
            transformation_check(&identity(1), &[vec![q(5)]], &Poly::one(1).add(&y), &cfg).unwrap();
        assert!((a - c(1.0, 0.0)).norm() < 1e-10);
        assert!((b - c(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn bare_current_transforms_with_inverse_determinant() {
        // with the dy pairing the residue of M·f is det(M)^{-1} times that of f
        let cfg = QuadratureConfig::default();
        let m = vec![vec![q(2), q(1)], vec![q(0), q(3)]];
        let f = skew();
        let mf = f.compose_linear(&m).unwrap();
        let g = Poly::one(2);
        let r_f = polytube_residue(&f, &g, &cfg, Pairing::Dy).unwrap();
        let r_mf = polytube_residue(&mf, &g, &cfg, Pairing::Dy).unwrap();
        assert!((r_mf * 6.0 - r_f).norm() < 1e-10);
        assert_eq!(expected_residue(&mf, &g, Pairing::Dy), frac(1, 6));
    }

    #[test]
    fn map_validation() {
        assert!(LocalMap::new(vec![Poly::var(1, 0).pow(2)]).is_err());
        assert!(LocalMap::new(vec![Poly::var(1, 0).add(&Poly::one(1))]).is_err());
        let cfg = QuadratureConfig {
            points: 48,
            ..QuadratureConfig::default()
        };
        assert!(polytube_residue(&identity(1), &Poly::one(1), &cfg, Pairing::Df).is_err());
        assert!(identity(2)
            .compose_linear(&[vec![q(1), q(2)], vec![q(2), q(4)]])
            .is_err());
    }
}
