//! Global characteristic numbers and their localization over fixed components.
//!
//! A component `Z` of the zero scheme of a logarithmic field carries the
//! restricted log tangent bundle split as `0 → K → T(−log D)|_Z → N → 0`,
//! with the linear action decomposed into eigenblocks on `K` and on `N`. The
//! residue form is the degree-`2r` part of
//!
//! ```text
//! Φ(A + Ω_K ⊕ A + Ω_N) · det(A + Ω_N)^{-1}
//! ```
//!
//! computed in the Chow ring of `Z`; its integral is the local contribution.

use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::chern::{
    block_product, equivariant_det, evaluate_phi, log_chern, shift_block, total_chern, BundleData,
    BundleDoc, Eigenblock, InvariantPolySpec, ShiftedChernPolynomial,
};
use crate::error::{Error, Result};
use crate::poly::PolyDoc;
use crate::rational::{format_q, QText, Q};
use crate::ring::{same_ring, GradedClass, RingDoc, RingPresentation};

#[derive(Clone, Debug, PartialEq)]
pub struct FixedComponent {
    pub name: String,
    pub dim: usize,
    pub codim: usize,
    pub ring: Arc<RingPresentation>,
    pub k_blocks: Vec<Eigenblock>,
    pub n_blocks: Vec<Eigenblock>,
    /// Logarithmic transversality is asserted by the caller, not computed.
    pub assert_log_transversal: bool,
}

impl FixedComponent {
    /// Checks the structural invariants: block ranks add up to `dim` and
    /// `codim`, every block lives over `ring`, and the ring's top degree is
    /// `2·dim`. Nonzero normal eigenvalues are checked when residues are
    /// formed, so that a degenerate component can still be reported.
    pub fn new(
        name: impl Into<String>,
        ring: Arc<RingPresentation>,
        k_blocks: Vec<Eigenblock>,
        n_blocks: Vec<Eigenblock>,
        assert_log_transversal: bool,
    ) -> Result<Self> {
        let name = name.into();
        let dim: usize = k_blocks.iter().map(|b| b.bundle.rank()).sum();
        let codim: usize = n_blocks.iter().map(|b| b.bundle.rank()).sum();
        if codim == 0 {
            return Err(Error::input(format!(
                "component `{name}` has codimension 0"
            )));
        }
        if ring.top_degree() as usize != 2 * dim {
            return Err(Error::input(format!(
                "component `{name}`: K has rank {dim} but the ring has top degree {}",
                ring.top_degree()
            )));
        }
        if k_blocks
            .iter()
            .chain(&n_blocks)
            .any(|b| !same_ring(&ring, b.bundle.ring()))
        {
            return Err(Error::RingMismatch);
        }
        Ok(FixedComponent {
            name,
            dim,
            codim,
            ring,
            k_blocks,
            n_blocks,
            assert_log_transversal,
        })
    }

    /// Full invariant check, including Bott nondegeneracy of `N`.
    pub fn validate(&self) -> Result<()> {
        let dim: usize = self.k_blocks.iter().map(|b| b.bundle.rank()).sum();
        let codim: usize = self.n_blocks.iter().map(|b| b.bundle.rank()).sum();
        if dim != self.dim || codim != self.codim {
            return Err(Error::Consistency(format!(
                "component `{}`: block ranks ({dim}, {codim}) differ from declared ({}, {})",
                self.name, self.dim, self.codim
            )));
        }
        if let Some(b) = self.n_blocks.iter().find(|b| b.lambda.is_zero()) {
            return Err(Error::Nondegeneracy(format!(
                "component `{}`: normal block of rank {} has eigenvalue 0",
                self.name,
                b.bundle.rank()
            )));
        }
        Ok(())
    }

    pub fn to_doc(&self) -> ComponentDoc {
        let blocks = |bs: &[Eigenblock]| {
            bs.iter()
                .map(|b| BlockDoc {
                    lambda: QText(b.lambda.clone()),
                    bundle: b.bundle.to_doc(),
                })
                .collect()
        };
        ComponentDoc {
            name: self.name.clone(),
            dim: self.dim,
            codim: self.codim,
            ring: self.ring.to_doc(),
            k_blocks: blocks(&self.k_blocks),
            n_blocks: blocks(&self.n_blocks),
            assert_log_transversal: self.assert_log_transversal,
        }
    }
}

/// Residue form of `Φ` on a component, homogeneous of degree `2·dim`.
pub fn residue_form(z: &FixedComponent, phi: &InvariantPolySpec) -> Result<GradedClass> {
    z.validate()?;
    let shifted: Vec<ShiftedChernPolynomial> = z
        .k_blocks
        .iter()
        .chain(&z.n_blocks)
        .map(|b| shift_block(&b.lambda, &b.bundle))
        .collect();
    let total = block_product(&shifted)?;
    let numerator = evaluate_phi(phi, &total)?;
    let det = equivariant_det(&z.ring, &z.n_blocks)?;
    let form = numerator.mul(&det.invert_unit()?)?;
    form.homogeneous_part(2 * z.dim as u32)
}

pub fn local_contribution(z: &FixedComponent, phi: &InvariantPolySpec) -> Result<Q> {
    residue_form(z, phi)?.integrate()
}

pub fn localization_sum(components: &[FixedComponent], phi: &InvariantPolySpec) -> Result<Q> {
    components
        .iter()
        .try_fold(Q::zero(), |acc, z| Ok(acc + local_contribution(z, phi)?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GlobalSide {
    pub ring: Arc<RingPresentation>,
    pub tangent: BundleData,
    pub divisors: Vec<GradedClass>,
    /// A known splitting of the log tangent bundle, cross-checked against
    /// the quotient formula.
    pub direct_log_bundle: Option<BundleData>,
}

impl GlobalSide {
    pub fn new(
        ring: Arc<RingPresentation>,
        tangent: BundleData,
        divisors: Vec<GradedClass>,
        direct_log_bundle: Option<BundleData>,
    ) -> Result<Self> {
        if ring.top_degree() as usize != 2 * tangent.rank() {
            return Err(Error::input(format!(
                "tangent bundle has rank {} but the ring has top degree {}",
                tangent.rank(),
                ring.top_degree()
            )));
        }
        if !same_ring(&ring, tangent.ring())
            || divisors.iter().any(|d| !same_ring(&ring, d.ring()))
            || direct_log_bundle
                .as_ref()
                .is_some_and(|b| !same_ring(&ring, b.ring()))
        {
            return Err(Error::RingMismatch);
        }
        if let Some(b) = &direct_log_bundle {
            if b.rank() != tangent.rank() {
                return Err(Error::input(
                    "direct log bundle rank differs from the tangent rank",
                ));
            }
        }
        Ok(GlobalSide {
            ring,
            tangent,
            divisors,
            direct_log_bundle,
        })
    }

    pub fn dim(&self) -> usize {
        self.tangent.rank()
    }

    /// The log tangent bundle, from the quotient formula and, when a
    /// splitting is supplied, checked against it.
    pub fn log_bundle(&self) -> Result<BundleData> {
        let quotient = log_chern(&self.tangent, &self.divisors)?;
        match &self.direct_log_bundle {
            Some(direct) => {
                if total_chern(direct) != total_chern(&quotient) {
                    return Err(Error::Consistency(format!(
                        "direct log bundle has c = {}, quotient formula gives {}",
                        total_chern(direct),
                        total_chern(&quotient)
                    )));
                }
                Ok(direct.clone())
            }
            None => Ok(quotient),
        }
    }

    pub fn to_doc(&self) -> GlobalDoc {
        GlobalDoc {
            ring: self.ring.to_doc(),
            tangent: self.tangent.to_doc(),
            divisors: self.divisors.iter().map(|d| d.to_poly().to_doc()).collect(),
            direct_log_bundle: self.direct_log_bundle.as_ref().map(BundleData::to_doc),
        }
    }
}

/// `∫_X Φ(T_X(−log D))`.
pub fn global_value(g: &GlobalSide, phi: &InvariantPolySpec) -> Result<Q> {
    let log = g.log_bundle()?;
    let form = evaluate_phi(phi, &ShiftedChernPolynomial::unshifted(&log))?;
    form.integrate()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contribution {
    pub component: String,
    pub value: Option<QText>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
    pub log_transversal_asserted: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub phi: InvariantPolySpec,
    pub global: Option<QText>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub global_error: Option<String>,
    pub contributions: Vec<Contribution>,
    /// Sum of the contributions that could be computed.
    pub sum: QText,
    pub matched: bool,
}

impl VerificationReport {
    pub fn errors(&self) -> Vec<String> {
        self.global_error
            .iter()
            .cloned()
            .chain(
                self.contributions
                    .iter()
                    .filter_map(|c| c.error.as_ref().map(|e| format!("{}: {e}", c.component))),
            )
            .collect()
    }
}

/// Both sides of the localization identity. Failures are recorded in the
/// report rather than returned.
pub fn verify(
    g: &GlobalSide,
    components: &[FixedComponent],
    phi: &InvariantPolySpec,
) -> VerificationReport {
    let (global, global_error) = match global_value(g, phi) {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let contributions: Vec<Contribution> = components
        .iter()
        .map(|z| {
            let (value, error) = match local_contribution(z, phi) {
                Ok(v) => (Some(QText(v)), None),
                Err(e) => (None, Some(e.to_string())),
            };
            Contribution {
                component: z.name.clone(),
                value,
                error,
                log_transversal_asserted: z.assert_log_transversal,
            }
        })
        .collect();
    let sum = contributions
        .iter()
        .filter_map(|c| c.value.as_ref())
        .fold(Q::zero(), |acc, v| acc + &v.0);
    let all_ok = contributions.iter().all(|c| c.error.is_none());
    let matched = all_ok && global.as_ref() == Some(&sum);
    VerificationReport {
        phi: phi.clone(),
        global: global.map(QText),
        global_error,
        contributions,
        sum: QText(sum),
        matched,
    }
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let global = self
            .global
            .as_ref()
            .map(|v| format_q(&v.0))
            .unwrap_or_else(|| "error".into());
        let parts: Vec<String> = self
            .contributions
            .iter()
            .map(|c| {
                c.value
                    .as_ref()
                    .map(|v| format_q(&v.0))
                    .unwrap_or_else(|| "error".into())
            })
            .collect();
        write!(
            f,
            "∫ {} = {global}; local {} = {}; {}",
            self.phi,
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join(" + ")
            },
            format_q(&self.sum.0),
            if self.matched { "matched" } else { "MISMATCH" }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockDoc {
    pub lambda: QText,
    pub bundle: BundleDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComponentDoc {
    pub name: String,
    pub dim: usize,
    pub codim: usize,
    pub ring: RingDoc,
    #[serde(default)]
    pub k_blocks: Vec<BlockDoc>,
    pub n_blocks: Vec<BlockDoc>,
    #[serde(default)]
    pub assert_log_transversal: bool,
}

impl ComponentDoc {
    pub fn build(&self) -> Result<FixedComponent> {
        let ring = self.ring.build()?;
        let blocks = |docs: &[BlockDoc]| {
            docs.iter()
                .map(|b| Ok(Eigenblock::new(b.lambda.0.clone(), b.bundle.build(&ring)?)))
                .collect::<Result<Vec<_>>>()
        };
        let z = FixedComponent::new(
            self.name.clone(),
            Arc::clone(&ring),
            blocks(&self.k_blocks)?,
            blocks(&self.n_blocks)?,
            self.assert_log_transversal,
        )?;
        if z.dim != self.dim || z.codim != self.codim {
            return Err(Error::input(format!(
                "component `{}` declares (dim, codim) = ({}, {}) but its blocks give ({}, {})",
                self.name, self.dim, self.codim, z.dim, z.codim
            )));
        }
        Ok(z)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlobalDoc {
    pub ring: RingDoc,
    pub tangent: BundleDoc,
    #[serde(default)]
    pub divisors: Vec<PolyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direct_log_bundle: Option<BundleDoc>,
}

impl GlobalDoc {
    pub fn build(&self) -> Result<GlobalSide> {
        let ring = self.ring.build()?;
        let tangent = self.tangent.build(&ring)?;
        let divisors = self
            .divisors
            .iter()
            .map(|d| GradedClass::from_poly(&ring, &d.to_poly(ring.nvars())?))
            .collect::<Result<Vec<_>>>()?;
        let direct = self
            .direct_log_bundle
            .as_ref()
            .map(|b| b.build(&ring))
            .transpose()?;
        GlobalSide::new(ring, tangent, divisors, direct)
    }
}
