//! Encoded worked examples.
//!
//! * `weighted-resolution`: `X = P_{P²}(O ⊕ O(k))` resolving `P(1,1,1,k)`,
//!   `D` the exceptional section, field `a z_0∂_0 + a z_1∂_1 + b z_2∂_2 + c z_3∂_3`
//!   with `a ≠ b`, `c ≠ ka`, `c ≠ kb` (all nonzero). Zeros: a rational curve
//!   `C` and an isolated point `p`.
//! * `p1-p1-pm`: `X = P¹ × P¹ × P^m`, `D = P¹ × P¹ × H_∞`, the field rotating
//!   both `P¹` factors. Zeros: four copies of `P^m`.
//! * `fm-p2-two-points`: `X = Bl_Δ(P² × P²)`, `D = E`. Only the global side is
//!   encoded; it is checked against `χ(P² × P²) − χ(Δ)`.
//!
//! # Chow ring of `Bl_Δ(P² × P²)`
//!
//! With `h_1, h_2` the pulled-back hyperplane classes and `e = [E]`, the blow-up
//! formula for a center whose Chow ring is a quotient of the ambient one gives
//! `A(X) = A(P² × P²)[e] / ((h_1 − h_2)e, e² − 3h_1 e + [Δ])`, where
//! `[Δ] = h_1² + h_1h_2 + h_2²` and `3h_1` lifts `c_1(N_Δ) = c_1(T_{P²})`.
//! Completing these relations under graded-lex order with `e > h_1 > h_2`
//! gives the confluent system
//!
//! ```text
//! e²   -> 3 e h_2 − h_1² − h_1 h_2 − h_2²
//! e h_1 -> e h_2
//! h_1³ -> 0,  h_2³ -> 0
//! ```
//!
//! whose only irreducible top monomial is `h_1² h_2²`, with integral 1.
//!
//! The log tangent bundle sits in `0 → T_X(−log E) → f*T_{P²×P²} → j_* g*N_Δ → 0`.
//! Since `N_Δ` is the restriction of `pr_1* T_{P²}`, the last term is resolved by
//! `V(−E) → V` with `V = f* pr_1* T_{P²}`, so
//!
//! ```text
//! c(T_X(−log E)) = (1 + h_2)³ (1 + h_1 − e)³ / (1 − e)
//! c(T_X)         = c(T_X(−log E)) · (1 + e)
//! ```
//!
//! Independent checks: `∫ c_4(T_X) = 12 = χ(P² × P²) + χ(Δ)` and
//! `∫ e⁴ = −6 = −(c_1(N)² − c_2(N))`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analyzer::{ComponentChart, LogChartField};
use crate::chern::{BundleData, Eigenblock, InvariantPolySpec};
use crate::error::{Error, Result};
use crate::localization::{
    verify, ComponentDoc, FixedComponent, GlobalDoc, GlobalSide, VerificationReport,
};
use crate::poly::Poly;
use crate::rational::{format_q, q, QText, Q};
use crate::ring::{Generator, GradedClass, RewriteRule, RingPresentation};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExampleId {
    WeightedResolution,
    ProductWithBoundary,
    FultonMacPherson,
}

impl ExampleId {
    pub const ALL: [ExampleId; 3] = [
        ExampleId::WeightedResolution,
        ExampleId::ProductWithBoundary,
        ExampleId::FultonMacPherson,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExampleId::WeightedResolution => "weighted-resolution",
            ExampleId::ProductWithBoundary => "p1-p1-pm",
            ExampleId::FultonMacPherson => "fm-p2-two-points",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = ExampleId::ALL.iter().map(|i| i.as_str()).collect();
                Error::input(format!(
                    "unknown example `{s}`; known: {}",
                    known.join(", ")
                ))
            })
    }
}

impl std::fmt::Display for ExampleId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters shared by the examples; each example reads the ones it uses.
#[derive(Clone, Debug, PartialEq)]
pub struct ExampleParams {
    pub k: i64,
    pub m: u32,
    pub a: Q,
    pub b: Q,
    pub c: Q,
}

impl Default for ExampleParams {
    fn default() -> Self {
        ExampleParams {
            k: 2,
            m: 2,
            a: q(1),
            b: q(2),
            c: q(7),
        }
    }
}

impl ExampleParams {
    /// Admissibility for the weighted resolution: `k ≥ 2`, `a, b, c ≠ 0`,
    /// `a ≠ b`, `c ≠ ka`, `c ≠ kb`.
    pub fn check_weighted_resolution(&self) -> Result<()> {
        let k = q(self.k);
        if self.k < 2 {
            return Err(Error::Constraint(format!(
                "k ≥ 2 required, got k = {}",
                self.k
            )));
        }
        for (name, v) in [("a", &self.a), ("b", &self.b), ("c", &self.c)] {
            if v.is_zero() {
                return Err(Error::Constraint(format!("{name} ≠ 0 required")));
            }
        }
        if self.a == self.b {
            return Err(Error::Constraint(format!(
                "a ≠ b violated (a = b = {})",
                format_q(&self.a)
            )));
        }
        if self.c == &k * &self.a {
            return Err(Error::Constraint(format!(
                "c ≠ ka violated (c = ka = {})",
                format_q(&self.c)
            )));
        }
        if self.c == &k * &self.b {
            return Err(Error::Constraint(format!(
                "c ≠ kb violated (c = kb = {})",
                format_q(&self.c)
            )));
        }
        Ok(())
    }

    pub fn check_product(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::Constraint(format!(
                "m ≥ 2 required, got m = {}",
                self.m
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExampleEntry {
    pub id: ExampleId,
    pub description: String,
    pub global: GlobalSide,
    pub components: Vec<FixedComponent>,
    pub phi: InvariantPolySpec,
    pub expected_global: Q,
    pub expected_contributions: Vec<Q>,
    /// False when per-component data is not encoded and only the global side
    /// is checked against `expected_global`.
    pub local_side: bool,
}

pub fn build_example(id: ExampleId, params: &ExampleParams) -> Result<ExampleEntry> {
    match id {
        ExampleId::WeightedResolution => weighted_resolution(params),
        ExampleId::ProductWithBoundary => product_with_boundary(params),
        ExampleId::FultonMacPherson => fulton_macpherson(),
    }
}

fn gens(names: &[&str]) -> Vec<Generator> {
    names
        .iter()
        .map(|n| Generator {
            name: n.to_string(),
            degree: 2,
        })
        .collect()
}

fn vanish(lead: Vec<u32>) -> RewriteRule {
    let n = lead.len();
    RewriteRule {
        lead,
        rhs: Poly::zero(n),
    }
}

/// ℚ[ξ, h]/(ξ² − kξh, h³), `∫ ξh² = 1`.
pub fn weighted_resolution_ring(k: i64) -> Result<Arc<RingPresentation>> {
    let mut table = BTreeMap::new();
    table.insert(vec![1, 2], Q::one());
    RingPresentation::new(
        gens(&["xi", "h"]),
        vec![
            RewriteRule {
                lead: vec![2, 0],
                rhs: Poly::term(vec![1, 1], q(k)),
            },
            vanish(vec![0, 3]),
        ],
        6,
        table,
    )
}

/// `(D, c(T_X))` on the weighted resolution, `D = ξ − kh`.
pub fn weighted_resolution_classes(
    ring: &Arc<RingPresentation>,
    k: i64,
) -> Result<(GradedClass, BundleData)> {
    let h = GradedClass::generator(ring, "h")?;
    let xi = GradedClass::generator(ring, "xi")?;
    let d = xi.sub(&h.scale(&q(k)))?;
    let c1 = d.scale(&q(2)).add(&h.scale(&q(k + 3)))?;
    let c2 = h
        .mul(&d)?
        .scale(&q(6))
        .add(&h.pow(2).scale(&q(3 * (k + 1))))?;
    let c3 = h.pow(2).mul(&d)?.scale(&q(6));
    let tangent = BundleData::new(ring, vec![c1, c2, c3])?;
    Ok((d, tangent))
}

fn weighted_resolution(p: &ExampleParams) -> Result<ExampleEntry> {
    p.check_weighted_resolution()?;
    let k = p.k;
    let ring = weighted_resolution_ring(k)?;
    let (d, tangent) = weighted_resolution_classes(&ring, k)?;
    let global = GlobalSide::new(Arc::clone(&ring), tangent, vec![d], None)?;

    let kq = q(k);
    // C: the line {z_2 = 0} in the section {z_3 = 0}; N_C = O(1) ⊕ O(k)
    let curve_ring = RingPresentation::projective_space(1, "x");
    let x = GradedClass::generator(&curve_ring, "x")?;
    let curve = FixedComponent::new(
        "C",
        Arc::clone(&curve_ring),
        vec![Eigenblock::new(
            Q::zero(),
            BundleData::line(x.scale(&q(2)))?,
        )],
        vec![
            Eigenblock::new(&p.b - &p.a, BundleData::line(x.clone())?),
            Eigenblock::new(&p.c - &kq * &p.a, BundleData::line(x.scale(&kq))?),
        ],
        true,
    )?;
    let pt = RingPresentation::point();
    let line = || BundleData::trivial(&pt, 1);
    let point = FixedComponent::new(
        "p",
        Arc::clone(&pt),
        vec![],
        vec![
            Eigenblock::new(&p.a - &p.b, line()),
            Eigenblock::new(&p.a - &p.b, line()),
            Eigenblock::new(&p.c - &kq * &p.b, line()),
        ],
        true,
    )?;
    Ok(ExampleEntry {
        id: ExampleId::WeightedResolution,
        description: format!(
            "resolution of P(1,1,1,{k}), weights (a,b,c) = ({}, {}, {}); zeros C ⊔ {{p}}",
            format_q(&p.a),
            format_q(&p.b),
            format_q(&p.c)
        ),
        global,
        components: vec![curve, point],
        phi: InvariantPolySpec::TopChern,
        expected_global: q(3),
        expected_contributions: vec![q(2), q(1)],
        local_side: true,
    })
}

/// ℚ[η₁, η₂, h]/(η₁², η₂², h^{m+1}), `∫ η₁η₂h^m = 1`.
pub fn product_ring(m: u32) -> Result<Arc<RingPresentation>> {
    let mut table = BTreeMap::new();
    table.insert(vec![1, 1, m], Q::one());
    RingPresentation::new(
        gens(&["eta1", "eta2", "h"]),
        vec![
            vanish(vec![2, 0, 0]),
            vanish(vec![0, 2, 0]),
            vanish(vec![0, 0, m + 1]),
        ],
        2 * (m + 2),
        table,
    )
}

fn product_with_boundary(p: &ExampleParams) -> Result<ExampleEntry> {
    p.check_product()?;
    let m = p.m;
    let ring = product_ring(m)?;
    let one = GradedClass::one(&ring);
    let eta1 = GradedClass::generator(&ring, "eta1")?;
    let eta2 = GradedClass::generator(&ring, "eta2")?;
    let h = GradedClass::generator(&ring, "h")?;
    let p1_factors = one
        .add(&eta1.scale(&q(2)))?
        .mul(&one.add(&eta2.scale(&q(2)))?)?;
    let rank = m as usize + 2;
    let tangent = BundleData::from_total(rank, &p1_factors.mul(&one.add(&h)?.pow(m + 1))?)?;
    let direct = BundleData::from_total(rank, &p1_factors.mul(&one.add(&h)?.pow(m))?)?;
    let global = GlobalSide::new(Arc::clone(&ring), tangent, vec![h], Some(direct))?;

    let pm = RingPresentation::projective_space(m, "h");
    let hm = GradedClass::generator(&pm, "h")?;
    let k_bundle = BundleData::from_total(m as usize, &GradedClass::one(&pm).add(&hm)?.pow(m))?;
    let sign = |at_zero: bool| if at_zero { q(1) } else { q(-1) };
    let components = [(true, true), (true, false), (false, true), (false, false)]
        .into_iter()
        .map(|(x0, y0)| {
            let tag = |z: bool| if z { "0" } else { "inf" };
            FixedComponent::new(
                format!("F({},{})", tag(x0), tag(y0)),
                Arc::clone(&pm),
                vec![Eigenblock::new(Q::zero(), k_bundle.clone())],
                vec![
                    Eigenblock::new(sign(x0), BundleData::trivial(&pm, 1)),
                    Eigenblock::new(sign(y0), BundleData::trivial(&pm, 1)),
                ],
                true,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExampleEntry {
        id: ExampleId::ProductWithBoundary,
        description: format!("P¹ × P¹ × P^{m} with D = P¹ × P¹ × H_∞; zeros: four copies of P^{m}"),
        global,
        components,
        phi: InvariantPolySpec::TopChern,
        expected_global: q(4),
        expected_contributions: vec![q(1); 4],
        local_side: true,
    })
}

/// Chow ring of `Bl_Δ(P² × P²)` with generators `e > h1 > h2`.
pub fn blowup_ring() -> Result<Arc<RingPresentation>> {
    let mut table = BTreeMap::new();
    table.insert(vec![0, 2, 2], Q::one());
    let e_sq = Poly::from_terms(
        3,
        [
            (vec![1, 0, 1], q(3)),
            (vec![0, 2, 0], q(-1)),
            (vec![0, 1, 1], q(-1)),
            (vec![0, 0, 2], q(-1)),
        ],
    )?;
    RingPresentation::new(
        gens(&["e", "h1", "h2"]),
        vec![
            RewriteRule {
                lead: vec![2, 0, 0],
                rhs: e_sq,
            },
            RewriteRule {
                lead: vec![1, 1, 0],
                rhs: Poly::term(vec![1, 0, 1], Q::one()),
            },
            vanish(vec![0, 3, 0]),
            vanish(vec![0, 0, 3]),
        ],
        8,
        table,
    )
}

/// Total Chern classes `(c(T_X(−log E)), c(T_X))` on the blow-up.
pub fn blowup_classes(ring: &Arc<RingPresentation>) -> Result<(GradedClass, GradedClass)> {
    let one = GradedClass::one(ring);
    let e = GradedClass::generator(ring, "e")?;
    let h1 = GradedClass::generator(ring, "h1")?;
    let h2 = GradedClass::generator(ring, "h2")?;
    let log = one
        .add(&h2)?
        .pow(3)
        .mul(&one.add(&h1)?.sub(&e)?.pow(3))?
        .mul(&one.sub(&e)?.invert_unit()?)?;
    let tangent = log.mul(&one.add(&e)?)?;
    Ok((log, tangent))
}

/// `χ(P^a × P^b)` minus `χ(P^c)`: the Euler characteristic of the
/// configuration space of two distinct points of `P²` when `a = b = c = 2`.
pub fn euler_oracle() -> Q {
    let chi_pn = |n: i64| n + 1;
    q(chi_pn(2) * chi_pn(2) - chi_pn(2))
}

fn fulton_macpherson() -> Result<ExampleEntry> {
    let ring = blowup_ring()?;
    let (log_total, tangent_total) = blowup_classes(&ring)?;
    let e = GradedClass::generator(&ring, "e")?;
    let global = GlobalSide::new(
        Arc::clone(&ring),
        BundleData::from_total(4, &tangent_total)?,
        vec![e],
        Some(BundleData::from_total(4, &log_total)?),
    )?;
    Ok(ExampleEntry {
        id: ExampleId::FultonMacPherson,
        description: "Bl_Δ(P² × P²) with D = E; global side against χ(Conf₂ P²)".into(),
        global,
        components: Vec::new(),
        phi: InvariantPolySpec::TopChern,
        expected_global: euler_oracle(),
        expected_contributions: Vec::new(),
        local_side: false,
    })
}

/// Result of checking one entry against its expected values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryOutcome {
    pub schema: u32,
    pub example: String,
    pub phi: InvariantPolySpec,
    pub global: Option<QText>,
    pub expected_global: QText,
    pub contributions: Vec<crate::localization::Contribution>,
    pub expected_contributions: Vec<QText>,
    pub sum: QText,
    pub local_side: bool,
    /// Localization identity (global = Σ local) when the local side is encoded.
    pub matched: bool,
    /// All computed values equal their expected values.
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

pub fn check_entry(entry: &ExampleEntry) -> EntryOutcome {
    let report: VerificationReport = verify(&entry.global, &entry.components, &entry.phi);
    let global_ok = report.global.as_ref().map(|g| &g.0) == Some(&entry.expected_global);
    let contributions_ok = report.contributions.len() == entry.expected_contributions.len()
        && report
            .contributions
            .iter()
            .zip(&entry.expected_contributions)
            .all(|(c, e)| c.value.as_ref().map(|v| &v.0) == Some(e));
    let matched = entry.local_side && report.matched;
    let passed = global_ok
        && contributions_ok
        && (!entry.local_side || matched)
        && report.errors().is_empty();
    EntryOutcome {
        schema: SCHEMA_VERSION,
        example: entry.id.to_string(),
        phi: report.phi.clone(),
        global: report.global.clone(),
        expected_global: QText(entry.expected_global.clone()),
        errors: report.errors(),
        contributions: report.contributions,
        expected_contributions: entry
            .expected_contributions
            .iter()
            .cloned()
            .map(QText)
            .collect(),
        sum: report.sum,
        local_side: entry.local_side,
        matched,
        passed,
    }
}

/// Build and check every example; entries are evaluated in parallel and
/// returned in catalog order.
pub fn verify_all(params: &ExampleParams) -> Vec<Result<EntryOutcome>> {
    ExampleId::ALL
        .par_iter()
        .map(|&id| build_example(id, params).map(|e| check_entry(&e)))
        .collect()
}

/// A chart of the weighted-resolution field with its component declaration.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedChart {
    pub name: &'static str,
    pub coordinate_names: Vec<String>,
    pub field: LogChartField,
    pub component: ComponentChart,
}

/// The four charts of the weighted-resolution field. No admissibility check
/// is made, so degenerate weights can be analyzed too.
pub fn weighted_resolution_charts(k: i64, a: &Q, b: &Q, c: &Q) -> Vec<NamedChart> {
    let kq = q(k);
    let lin = |i: usize, coef: Q| Poly::var(3, i).scale(&coef);
    let cst = |coef: Q| Poly::constant(3, coef);
    let names = |n: [&str; 3]| n.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let field = |log: Vec<usize>, coeffs: Vec<Poly>| {
        LogChartField::new(3, log, coeffs).expect("chart fields are well formed")
    };
    vec![
        NamedChart {
            name: "curve-chart",
            coordinate_names: names(["u1", "u2", "tau"]),
            field: field(
                vec![],
                vec![Poly::zero(3), lin(1, b - a), lin(2, c - &kq * a)],
            ),
            component: ComponentChart::new(vec![1, 2]),
        },
        NamedChart {
            name: "point-chart",
            coordinate_names: names(["v0", "v1", "eta"]),
            field: field(
                vec![],
                vec![lin(0, a - b), lin(1, a - b), lin(2, c - &kq * b)],
            ),
            component: ComponentChart::new(vec![0, 1, 2]),
        },
        NamedChart {
            name: "boundary-chart-sigma",
            coordinate_names: names(["u1", "u2", "sigma"]),
            field: field(
                vec![2],
                vec![Poly::zero(3), lin(1, b - a), cst(&kq * a - c)],
            ),
            component: ComponentChart::new(vec![1, 2]),
        },
        NamedChart {
            name: "boundary-chart-rho",
            coordinate_names: names(["v0", "v1", "rho"]),
            field: field(
                vec![2],
                vec![lin(0, a - b), lin(1, a - b), cst(&kq * b - c)],
            ),
            component: ComponentChart::new(vec![0, 1, 2]),
        },
    ]
}

/// Serialized entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryDoc {
    pub id: String,
    #[serde(default)]
    pub description: String,
    pub global: GlobalDoc,
    #[serde(default)]
    pub components: Vec<ComponentDoc>,
    pub phi: InvariantPolySpec,
    pub expected_global: QText,
    #[serde(default)]
    pub expected_contributions: Vec<QText>,
    #[serde(default = "default_true")]
    pub local_side: bool,
}

fn default_true() -> bool {
    true
}

/// A loaded entry that need not be one of the built-in examples.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedEntry {
    pub id: String,
    pub global: GlobalSide,
    pub components: Vec<FixedComponent>,
    pub phi: InvariantPolySpec,
    pub expected_global: Q,
    pub expected_contributions: Vec<Q>,
    pub local_side: bool,
}

impl ExampleEntry {
    pub fn to_doc(&self) -> EntryDoc {
        EntryDoc {
            id: self.id.to_string(),
            description: self.description.clone(),
            global: self.global.to_doc(),
            components: self.components.iter().map(FixedComponent::to_doc).collect(),
            phi: self.phi.clone(),
            expected_global: QText(self.expected_global.clone()),
            expected_contributions: self
                .expected_contributions
                .iter()
                .cloned()
                .map(QText)
                .collect(),
            local_side: self.local_side,
        }
    }
}

impl EntryDoc {
    pub fn build(&self) -> Result<LoadedEntry> {
        let expected_contributions: Vec<Q> = self
            .expected_contributions
            .iter()
            .map(|v| v.0.clone())
            .collect();
        if self.local_side {
            let total = expected_contributions
                .iter()
                .fold(Q::zero(), |acc, v| acc + v);
            if total != self.expected_global.0 {
                return Err(Error::Consistency(format!(
                    "entry `{}`: expected contributions sum to {}, expected global is {}",
                    self.id,
                    format_q(&total),
                    format_q(&self.expected_global.0)
                )));
            }
        }
        Ok(LoadedEntry {
            id: self.id.clone(),
            global: self.global.build()?,
            components: self
                .components
                .iter()
                .map(ComponentDoc::build)
                .collect::<Result<_>>()?,
            phi: self.phi.clone(),
            expected_global: self.expected_global.0.clone(),
            expected_contributions,
            local_side: self.local_side,
        })
    }
}

impl LoadedEntry {
    /// Same checks as [`check_entry`].
    pub fn check(&self) -> EntryOutcome {
        let entry = ExampleEntry {
            id: ExampleId::WeightedResolution,
            description: String::new(),
            global: self.global.clone(),
            components: self.components.clone(),
            phi: self.phi.clone(),
            expected_global: self.expected_global.clone(),
            expected_contributions: self.expected_contributions.clone(),
            local_side: self.local_side,
        };
        let mut out = check_entry(&entry);
        out.example = self.id.clone();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogDoc {
    pub schema: u32,
    pub entries: Vec<EntryDoc>,
}

pub fn export_catalog(params: &ExampleParams) -> Result<CatalogDoc> {
    let entries = ExampleId::ALL
        .iter()
        .map(|&id| build_example(id, params).map(|e| e.to_doc()))
        .collect::<Result<Vec<_>>>()?;
    Ok(CatalogDoc {
        schema: SCHEMA_VERSION,
        entries,
    })
}

impl CatalogDoc {
    pub fn load(&self) -> Result<Vec<LoadedEntry>> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::input(format!(
                "unsupported catalog schema {}",
                self.schema
            )));
        }
        self.entries.iter().map(EntryDoc::build).collect()
    }

    /// Parse JSON, or TOML when `toml` is set.
    pub fn parse(text: &str, toml: bool) -> Result<Self> {
        if toml {
            Ok(toml::from_str(text)?)
        } else {
            Ok(serde_json::from_str(text)?)
        }
    }

    pub fn render(&self, toml: bool) -> Result<String> {
        if toml {
            Ok(toml::to_string(self)?)
        } else {
            Ok(serde_json::to_string_pretty(self)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn default_entries_pass() {
        for outcome in verify_all(&ExampleParams::default()) {
            let o = outcome.unwrap();
            assert!(o.passed, "{o:?}");
        }
    }

    #[test]
    fn inadmissible_weights_are_rejected() {
        let p = ExampleParams {
            c: q(2),
            ..ExampleParams::default()
        };
        let err = build_example(ExampleId::WeightedResolution, &p).unwrap_err();
        assert!(err.to_string().contains("c ≠ ka"), "{err}");
        let p = ExampleParams {
            k: 1,
            ..ExampleParams::default()
        };
        assert!(matches!(
            build_example(ExampleId::WeightedResolution, &p),
            Err(Error::Constraint(_))
        ));
        let p = ExampleParams {
            m: 1,
            ..ExampleParams::default()
        };
        assert!(matches!(
            build_example(ExampleId::ProductWithBoundary, &p),
            Err(Error::Constraint(_))
        ));
        let p = ExampleParams {
            b: frac(7, 2),
            ..ExampleParams::default()
        };
        assert!(build_example(ExampleId::WeightedResolution, &p)
            .unwrap_err()
            .to_string()
            .contains("c ≠ kb"));
    }

    #[test]
    fn ids_parse() {
        for id in ExampleId::ALL {
            assert_eq!(ExampleId::parse(id.as_str()).unwrap(), id);
        }
        assert!(ExampleId::parse("nope").is_err());
    }

    #[test]
    fn blowup_ring_is_twelve_dimensional() {
        let r = blowup_ring().unwrap();
        let dims: Vec<usize> = (0..=4).map(|d| r.basis(2 * d).len()).collect();
        assert_eq!(dims, vec![1, 3, 4, 3, 1]);
    }
}
