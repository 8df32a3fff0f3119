//! Chart-local analysis of a logarithmic vector field.
//!
//! In coordinates `z_0..z_{n-1}` with boundary `D = {∏_{i∈L} z_i = 0}` the
//! field is `Σ_{i∈L} a_i z_i ∂_i + Σ_{i∉L} a_i ∂_i`. A component chart
//! declares `Z = {y = 0}` for a subset `y` of the coordinates; the remaining
//! coordinates `x` parametrize `Z`.
//!
//! Coordinate indices are 0-based throughout.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Poly, PolyDoc};
use crate::rational::{format_q, QText, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct LogChartField {
    dim: usize,
    log_indices: Vec<usize>,
    coeffs: Vec<Poly>,
}

impl LogChartField {
    pub fn new(dim: usize, mut log_indices: Vec<usize>, coeffs: Vec<Poly>) -> Result<Self> {
        if coeffs.len() != dim {
            return Err(Error::input(format!(
                "{} coefficients for a chart of dimension {dim}",
                coeffs.len()
            )));
        }
        if let Some(p) = coeffs.iter().find(|p| p.nvars() != dim) {
            return Err(Error::input(format!(
                "coefficient {p} is not a polynomial in {dim} variables"
            )));
        }
        log_indices.sort_unstable();
        log_indices.dedup();
        if let Some(i) = log_indices.iter().find(|&&i| i >= dim) {
            return Err(Error::input(format!(
                "boundary index {i} out of range for dimension {dim}"
            )));
        }
        Ok(LogChartField {
            dim,
            log_indices,
            coeffs,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn log_indices(&self) -> &[usize] {
        &self.log_indices
    }

    /// Components `a_i` in the logarithmic frame.
    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn is_log_index(&self, i: usize) -> bool {
        self.log_indices.binary_search(&i).is_ok()
    }

    /// Components in the coordinate frame `∂_0..∂_{n-1}`.
    pub fn coordinate_components(&self) -> Vec<Poly> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if self.is_log_index(i) {
                    a.mul(&Poly::var(self.dim, i))
                } else {
                    a.clone()
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentChart {
    pub normal_coords: Vec<usize>,
}

impl ComponentChart {
    pub fn new(normal_coords: Vec<usize>) -> Self {
        ComponentChart { normal_coords }
    }

    fn check(&self, dim: usize) -> Result<()> {
        let mut seen = vec![false; dim];
        for &i in &self.normal_coords {
            if i >= dim {
                return Err(Error::input(format!(
                    "normal coordinate {i} out of range for dimension {dim}"
                )));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::input(format!("normal coordinate {i} listed twice")));
            }
        }
        if self.normal_coords.is_empty() {
            return Err(Error::input(
                "component chart declares no normal coordinates",
            ));
        }
        Ok(())
    }

    /// Coordinates along `Z`.
    pub fn tangential_coords(&self, dim: usize) -> Vec<usize> {
        (0..dim)
            .filter(|i| !self.normal_coords.contains(i))
            .collect()
    }
}

/// Local generators of the zero ideal: `a_i z_i` on boundary coordinates,
/// `a_i` elsewhere.
pub fn zero_ideal(v: &LogChartField) -> Vec<Poly> {
    v.coordinate_components()
}

/// Matrix of the conormal action `[y_b] ↦ [v(y_b)]` in the basis
/// `[y_0], …, [y_{k-1}]`: entry `(b, c)` is `∂w_b/∂y_c` restricted to `Z`.
/// Its transpose is the action on the normal bundle.
#[derive(Clone, Debug, PartialEq)]
pub struct BottMatrix {
    pub dim: usize,
    pub normal_coords: Vec<usize>,
    pub entries: Vec<Vec<Poly>>,
}

impl BottMatrix {
    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn transpose(&self) -> BottMatrix {
        let k = self.size();
        BottMatrix {
            dim: self.dim,
            normal_coords: self.normal_coords.clone(),
            entries: (0..k)
                .map(|c| (0..k).map(|b| self.entries[b][c].clone()).collect())
                .collect(),
        }
    }

    /// Determinant by cofactor expansion; entries are polynomials on `Z`.
    pub fn determinant(&self) -> Poly {
        determinant(&self.entries, self.dim)
    }

    pub fn eval(&self, point: &[Q]) -> Vec<Vec<Q>> {
        self.entries
            .iter()
            .map(|row| row.iter().map(|p| p.eval(point)).collect())
            .collect()
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|row| {
                let cells: Vec<String> = row
                    .iter()
                    .map(|p| p.display_with(names).to_string())
                    .collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

fn determinant(m: &[Vec<Poly>], nvars: usize) -> Poly {
    match m.len() {
        0 => Poly::one(nvars),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Poly::zero(nvars);
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != col)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = m[0][col].mul(&determinant(&minor, nvars));
                acc = if col % 2 == 0 {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            acc
        }
    }
}

pub fn bott_matrix(v: &LogChartField, chart: &ComponentChart) -> Result<BottMatrix> {
    chart.check(v.dim)?;
    let w = v.coordinate_components();
    let ys = &chart.normal_coords;
    let mut entries = Vec::with_capacity(ys.len());
    for (b, &yb) in ys.iter().enumerate() {
        let on_z = w[yb].restrict_zero(ys);
        if let Some((m, _)) = on_z.terms().next() {
            return Err(Error::NotVanishing {
                component: b,
                witness: Poly::term(m.clone(), num_traits::One::one()).to_string(),
            });
        }
        let row = ys
            .iter()
            .map(|&yc| w[yb].derivative(yc).restrict_zero(ys))
            .collect();
        entries.push(row);
    }
    Ok(BottMatrix {
        dim: v.dim,
        normal_coords: ys.clone(),
        entries,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    /// `det` is a nonzero constant along `Z`.
    Nondegenerate { det: QText },
    /// `det` vanishes identically, or at the recorded point of `Z`.
    Degenerate {
        #[serde(skip_serializing_if = "Option::is_none", default)]
        witness: Option<Vec<QText>>,
    },
    /// `det` is a nonconstant polynomial with no zero among the samples.
    Indeterminate { samples: Vec<(Vec<QText>, QText)> },
}

impl Verdict {
    pub fn is_nondegenerate(&self) -> bool {
        matches!(self, Verdict::Nondegenerate { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Nondegenerate { .. } => "nondegenerate",
            Verdict::Degenerate { .. } => "degenerate",
            Verdict::Indeterminate { .. } => "indeterminate",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Nondegenerate { det } => {
                write!(f, "Nondegenerate (det = {})", format_q(&det.0))
            }
            Verdict::Degenerate { witness: None } => write!(f, "Degenerate (det ≡ 0)"),
            Verdict::Degenerate { witness: Some(p) } => {
                let pt: Vec<String> = p.iter().map(|x| format_q(&x.0)).collect();
                write!(f, "Degenerate (det vanishes at ({}))", pt.join(", "))
            }
            Verdict::Indeterminate { samples } => {
                write!(
                    f,
                    "Indeterminate (det nonconstant, nonzero at {} sample points)",
                    samples.len()
                )
            }
        }
    }
}

/// Number of sample points used when `det` is not constant.
pub const NONDEGENERACY_SAMPLES: usize = 16;

/// Decide pointwise invertibility of the Bott matrix along `Z`. Sample
/// points are drawn from a small rational grid using `seed`.
pub fn check_nondegenerate(m: &BottMatrix, seed: u64) -> Verdict {
    let det = m.determinant();
    if det.is_zero() {
        return Verdict::Degenerate { witness: None };
    }
    if det.is_constant() {
        return Verdict::Nondegenerate {
            det: QText(det.constant_term()),
        };
    }
    let tangential: Vec<usize> = (0..m.dim)
        .filter(|i| !m.normal_coords.contains(i))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(NONDEGENERACY_SAMPLES);
    for s in 0..NONDEGENERACY_SAMPLES {
        let mut point = vec![Q::zero(); m.dim];
        // the origin first, then grid points with coordinates in {-4..4}/{1,2}
        if s > 0 {
            for &i in &tangential {
                let num: i64 = rng.gen_range(-4..=4);
                let den: i64 = rng.gen_range(1..=2);
                point[i] = Q::new(num.into(), den.into());
            }
        }
        let value = det.eval(&point);
        let coords: Vec<QText> = point.into_iter().map(QText).collect();
        if value.is_zero() {
            return Verdict::Degenerate {
                witness: Some(coords),
            };
        }
        samples.push((coords, QText(value)));
    }
    Verdict::Indeterminate { samples }
}

/// Eigenvalue functions `a_i|_Z` on the boundary coordinates that cut out
/// `Z`; `[z_i]` is an eigenvector of the conormal action with eigenvalue
/// `a_i|_Z`. Boundary coordinates not lying in `I_Z` are rejected.
pub fn log_eigenvalues(v: &LogChartField, chart: &ComponentChart) -> Result<Vec<(usize, Poly)>> {
    chart.check(v.dim)?;
    v.log_indices
        .iter()
        .map(|&i| {
            if !chart.normal_coords.contains(&i) {
                return Err(Error::input(format!(
                    "boundary coordinate {i} is not among the normal coordinates of Z"
                )));
            }
            Ok((i, v.coeffs[i].restrict_zero(&chart.normal_coords)))
        })
        .collect()
}

/// True when every boundary component `a_i` (`i` a log index) is a nonzero
/// constant, so the field has no zeros on `D` in this chart.
pub fn boundary_zero_free(v: &LogChartField) -> bool {
    v.log_indices.iter().all(|&i| {
        let a = &v.coeffs[i];
        a.is_constant() && !a.is_zero()
    })
}

/// Serialized chart field: `{dim, log_indices, coeffs, component}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartFieldDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dim: usize,
    #[serde(default)]
    pub log_indices: Vec<usize>,
    pub coeffs: Vec<PolyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinate_names: Option<Vec<String>>,
    pub component: ComponentChart,
    /// Expected verdict label; `nondegenerate` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,
}

impl ChartFieldDoc {
    pub fn build(&self) -> Result<(LogChartField, ComponentChart)> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|p| p.to_poly(self.dim))
            .collect::<Result<Vec<_>>>()?;
        let field = LogChartField::new(self.dim, self.log_indices.clone(), coeffs)?;
        self.component.check(self.dim)?;
        Ok((field, self.component.clone()))
    }

    pub fn names(&self) -> Vec<String> {
        self.coordinate_names
            .clone()
            .unwrap_or_else(|| (0..self.dim).map(|i| format!("z{i}")).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn lin(n: usize, i: usize, c: i64) -> Poly {
        Poly::var(n, i).scale(&q(c))
    }

    #[test]
    fn zero_ideal_of_diagonal_fields() {
        // t∂_t + w∂_w
        let v = LogChartField::new(2, vec![], vec![lin(2, 0, 1), lin(2, 1, 1)]).unwrap();
        assert_eq!(zero_ideal(&v), vec![Poly::var(2, 0), Poly::var(2, 1)]);
        let zero = LogChartField::new(2, vec![0], vec![Poly::zero(2), Poly::zero(2)]).unwrap();
        assert!(zero_ideal(&zero).iter().all(Poly::is_zero));
    }

    #[test]
    fn nilpotent_normal_action() {
        // y_1 ∂_{y_0} on Z = {y_0 = y_1 = 0} in a 3-dimensional chart
        let v = LogChartField::new(
            3,
            vec![],
            vec![Poly::var(3, 1), Poly::zero(3), Poly::zero(3)],
        )
        .unwrap();
        let m = bott_matrix(&v, &ComponentChart::new(vec![0, 1])).unwrap();
        let expect = vec![
            vec![Poly::zero(3), Poly::one(3)],
            vec![Poly::zero(3), Poly::zero(3)],
        ];
        assert_eq!(m.entries, expect);
        assert_eq!(
            check_nondegenerate(&m, 0),
            Verdict::Degenerate { witness: None }
        );
    }

    #[test]
    fn non_vanishing_field_is_rejected() {
        // ∂_{y} + y ∂_x does not vanish on {y = 0}
        let v = LogChartField::new(2, vec![], vec![Poly::var(2, 1), Poly::one(2)]).unwrap();
        let err = bott_matrix(&v, &ComponentChart::new(vec![1])).unwrap_err();
        assert!(matches!(err, Error::NotVanishing { component: 0, .. }));
    }

    #[test]
    fn constant_determinants() {
        let v = LogChartField::new(2, vec![], vec![lin(2, 0, 1), lin(2, 1, 5)]).unwrap();
        let m = bott_matrix(&v, &ComponentChart::new(vec![0, 1])).unwrap();
        assert_eq!(
            check_nondegenerate(&m, 0),
            Verdict::Nondegenerate { det: QText(q(5)) }
        );
    }

    #[test]
    fn nonconstant_determinant_samples() {
        // (1 + x²) y ∂_y on Z = {y = 0}: det = 1 + x², never zero over ℚ
        let x = Poly::var(2, 0);
        let a = Poly::one(2).add(&x.mul(&x)).mul(&Poly::var(2, 1));
        let v = LogChartField::new(2, vec![], vec![Poly::zero(2), a]).unwrap();
        let m = bott_matrix(&v, &ComponentChart::new(vec![1])).unwrap();
        match check_nondegenerate(&m, 7) {
            Verdict::Indeterminate { samples } => assert_eq!(samples.len(), NONDEGENERACY_SAMPLES),
            other => panic!("unexpected verdict {other:?}"),
        }
        // x y ∂_y: det = x vanishes at the origin of Z
        let v =
            LogChartField::new(2, vec![], vec![Poly::zero(2), x.mul(&Poly::var(2, 1))]).unwrap();
        let m = bott_matrix(&v, &ComponentChart::new(vec![1])).unwrap();
        assert!(matches!(
            check_nondegenerate(&m, 0),
            Verdict::Degenerate { witness: Some(_) }
        ));
    }

    #[test]
    fn log_eigenvalue_on_boundary_direction() {
        // a z_0 ∂_{z_0} with z_0 a boundary coordinate
        let v = LogChartField::new(1, vec![0], vec![Poly::constant(1, q(4))]).unwrap();
        let eig = log_eigenvalues(&v, &ComponentChart::new(vec![0])).unwrap();
        assert_eq!(eig, vec![(0, Poly::constant(1, q(4)))]);
        assert!(boundary_zero_free(&v));

        let v2 = LogChartField::new(2, vec![0], vec![Poly::one(2), Poly::var(2, 1)]).unwrap();
        assert!(log_eigenvalues(&v2, &ComponentChart::new(vec![1])).is_err());
    }

    #[test]
    fn chart_validation() {
        assert!(LogChartField::new(2, vec![], vec![Poly::zero(2)]).is_err());
        assert!(LogChartField::new(1, vec![3], vec![Poly::zero(1)]).is_err());
        let v = LogChartField::new(2, vec![], vec![Poly::zero(2), Poly::zero(2)]).unwrap();
        assert!(bott_matrix(&v, &ComponentChart::new(vec![2])).is_err());
        assert!(bott_matrix(&v, &ComponentChart::new(vec![0, 0])).is_err());
    }
}
