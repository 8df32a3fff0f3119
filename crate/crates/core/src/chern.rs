//! Chern-class calculus on graded rings.
//!
//! Bundles are stored through their Chern classes, never through roots. An
//! eigenvalue shift of all Chern roots by `λ` is expressed with the binomial
//! identity
//!
//! ```text
//! e_i(λ + x_1, …, λ + x_r) = Σ_{j ≤ i} C(r − j, i − j) λ^{i−j} e_j(x)
//! ```
//!
//! and direct sums of shifted blocks multiply as polynomials in a formal
//! variable (Whitney rule).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::PolyDoc;
use crate::rational::{format_q, Q};
use crate::ring::{same_ring, GradedClass, RingPresentation};

/// Rank and Chern classes `c_1..c_rank` of a vector bundle.
#[derive(Clone, Debug, PartialEq)]
pub struct BundleData {
    ambient: Arc<RingPresentation>,
    chern: Vec<GradedClass>,
}

impl BundleData {
    /// `chern[i]` must be homogeneous of degree `2(i+1)` (or zero).
    pub fn new(ring: &Arc<RingPresentation>, chern: Vec<GradedClass>) -> Result<Self> {
        for (i, c) in chern.iter().enumerate() {
            if !same_ring(ring, c.ring()) {
                return Err(Error::RingMismatch);
            }
            let d = 2 * (i as u32 + 1);
            if !c.is_homogeneous_of(d) {
                return Err(Error::input(format!(
                    "c_{} = {c} is not homogeneous of degree {d}",
                    i + 1
                )));
            }
        }
        Ok(BundleData {
            ambient: Arc::clone(ring),
            chern,
        })
    }

    pub fn trivial(ring: &Arc<RingPresentation>, rank: usize) -> Self {
        BundleData {
            ambient: Arc::clone(ring),
            chern: vec![GradedClass::zero(ring); rank],
        }
    }

    /// A line bundle with first Chern class `c1`.
    pub fn line(c1: GradedClass) -> Result<Self> {
        let ring = Arc::clone(c1.ring());
        BundleData::new(&ring, vec![c1])
    }

    /// Read the classes of a rank-`rank` bundle off its total Chern class.
    /// Parts of degree above `2·rank` are discarded.
    pub fn from_total(rank: usize, total: &GradedClass) -> Result<Self> {
        if total.degree_zero() != Q::one() {
            return Err(Error::input(format!(
                "total Chern class {total} does not start with 1"
            )));
        }
        let chern = (1..=rank)
            .map(|i| total.homogeneous_part(2 * i as u32))
            .collect::<Result<Vec<_>>>()?;
        BundleData::new(total.ring(), chern)
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ambient
    }

    pub fn rank(&self) -> usize {
        self.chern.len()
    }

    /// `c_i` for `0 ≤ i`; `c_0 = 1` and `c_i = 0` above the rank.
    pub fn chern_class(&self, i: usize) -> GradedClass {
        match i {
            0 => GradedClass::one(&self.ambient),
            i if i <= self.rank() => self.chern[i - 1].clone(),
            _ => GradedClass::zero(&self.ambient),
        }
    }

    pub fn classes(&self) -> &[GradedClass] {
        &self.chern
    }

    pub fn to_doc(&self) -> BundleDoc {
        BundleDoc {
            rank: self.rank(),
            chern: self.chern.iter().map(|c| c.to_poly().to_doc()).collect(),
        }
    }
}

/// `1 + c_1 + … + c_rank`.
pub fn total_chern(bundle: &BundleData) -> GradedClass {
    bundle
        .chern
        .iter()
        .fold(GradedClass::one(&bundle.ambient), |acc, c| {
            acc.add(c).expect("bundle classes share a ring")
        })
}

/// Direct sum: ranks add, total classes multiply.
pub fn whitney_product(e: &BundleData, f: &BundleData) -> Result<BundleData> {
    if !same_ring(&e.ambient, &f.ambient) {
        return Err(Error::RingMismatch);
    }
    let total = total_chern(e).mul(&total_chern(f))?;
    BundleData::from_total(e.rank() + f.rank(), &total)
}

/// Chern classes of the logarithmic tangent bundle along a simple normal
/// crossings divisor with the given component classes:
/// `c(T(−log D)) = c(T) · ∏ (1 + D_i)^{-1}`.
pub fn log_chern(tangent: &BundleData, divisors: &[GradedClass]) -> Result<BundleData> {
    let mut total = total_chern(tangent);
    for d in divisors {
        if !same_ring(&tangent.ambient, d.ring()) {
            return Err(Error::RingMismatch);
        }
        if !d.is_homogeneous_of(2) {
            return Err(Error::input(format!(
                "divisor class {d} is not of degree 2"
            )));
        }
        let factor = GradedClass::one(&tangent.ambient).add(d)?.invert_unit()?;
        total = total.mul(&factor)?;
    }
    BundleData::from_total(tangent.rank(), &total)
}

/// Coefficients `s_0..s_rank` of `∏ (1 + t (λ_j + x_j))`, i.e. the elementary
/// symmetric functions of eigenvalue-shifted Chern roots.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftedChernPolynomial {
    ambient: Arc<RingPresentation>,
    coefficients: Vec<GradedClass>,
}

impl ShiftedChernPolynomial {
    /// The unshifted polynomial of a bundle (`λ = 0`).
    pub fn unshifted(bundle: &BundleData) -> Self {
        shift_block(&Q::zero(), bundle)
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ambient
    }

    pub fn rank(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[GradedClass] {
        &self.coefficients
    }

    /// `s_i`, zero above the rank.
    pub fn coefficient(&self, i: usize) -> GradedClass {
        self.coefficients
            .get(i)
            .cloned()
            .unwrap_or_else(|| GradedClass::zero(&self.ambient))
    }
}

impl fmt::Display for ShiftedChernPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(i, c)| format!("s{i} = {c}"))
            .collect();
        write!(f, "[{}]", shown.join(", "))
    }
}

fn binom(n: usize, k: usize) -> Q {
    Q::from_integer(binomial(BigInt::from(n), BigInt::from(k)))
}

/// Shift every Chern root of `bundle` by `lambda`.
pub fn shift_block(lambda: &Q, bundle: &BundleData) -> ShiftedChernPolynomial {
    let r = bundle.rank();
    let coefficients = (0..=r)
        .map(|i| {
            (0..=i).fold(GradedClass::zero(&bundle.ambient), |acc, j| {
                let w = binom(r - j, i - j) * num_traits::pow(lambda.clone(), i - j);
                acc.add(&bundle.chern_class(j).scale(&w))
                    .expect("same ring")
            })
        })
        .collect();
    ShiftedChernPolynomial {
        ambient: Arc::clone(&bundle.ambient),
        coefficients,
    }
}

/// Whitney rule in the formal variable: coefficient-wise convolution.
pub fn block_product(blocks: &[ShiftedChernPolynomial]) -> Result<ShiftedChernPolynomial> {
    let first = blocks
        .first()
        .ok_or_else(|| Error::input("block_product needs at least one block"))?;
    let ring = Arc::clone(&first.ambient);
    let mut acc = vec![GradedClass::one(&ring)];
    for b in blocks {
        if !same_ring(&ring, &b.ambient) {
            return Err(Error::RingMismatch);
        }
        let mut next = vec![GradedClass::zero(&ring); acc.len() + b.rank()];
        for (i, a) in acc.iter().enumerate() {
            for (j, s) in b.coefficients.iter().enumerate() {
                next[i + j] = next[i + j].add(&a.mul(s)?)?;
            }
        }
        acc = next;
    }
    Ok(ShiftedChernPolynomial {
        ambient: ring,
        coefficients: acc,
    })
}

/// An eigenvalue together with the bundle it acts on by that scalar.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenblock {
    pub lambda: Q,
    pub bundle: BundleData,
}

impl Eigenblock {
    pub fn new(lambda: Q, bundle: BundleData) -> Self {
        Eigenblock { lambda, bundle }
    }
}

/// `det(A + Ω)` for a block-diagonal action: the product over blocks of the
/// top shifted coefficient. Every eigenvalue must be nonzero.
pub fn equivariant_det(ring: &Arc<RingPresentation>, blocks: &[Eigenblock]) -> Result<GradedClass> {
    let mut det = GradedClass::one(ring);
    for (idx, b) in blocks.iter().enumerate() {
        if !same_ring(ring, &b.bundle.ambient) {
            return Err(Error::RingMismatch);
        }
        if b.lambda.is_zero() {
            return Err(Error::Nondegeneracy(format!(
                "normal block {idx} (rank {}) has eigenvalue 0",
                b.bundle.rank()
            )));
        }
        let shifted = shift_block(&b.lambda, &b.bundle);
        det = det.mul(&shifted.coefficient(b.bundle.rank()))?;
    }
    Ok(det)
}

/// An invariant polynomial: the top Chern class or a monomial `∏ c_i^{a_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InvariantPolySpec {
    TopChern,
    Monomial(Vec<(usize, u32)>),
}

impl InvariantPolySpec {
    /// Weighted degree `Σ i·a_i`; `None` for the top Chern class, whose degree
    /// follows the bundle it is evaluated on.
    pub fn weighted_degree(&self) -> Option<usize> {
        match self {
            InvariantPolySpec::TopChern => None,
            InvariantPolySpec::Monomial(f) => Some(f.iter().map(|(i, a)| i * *a as usize).sum()),
        }
    }
}

impl fmt::Display for InvariantPolySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantPolySpec::TopChern => write!(f, "c_top"),
            InvariantPolySpec::Monomial(factors) => {
                let shown: Vec<String> = factors
                    .iter()
                    .map(|(i, a)| {
                        if *a == 1 {
                            format!("c{i}")
                        } else {
                            format!("c{i}^{a}")
                        }
                    })
                    .collect();
                write!(f, "{}", shown.join("*"))
            }
        }
    }
}

/// Evaluate `Φ` on the (possibly shifted) Chern polynomial `total`.
pub fn evaluate_phi(
    phi: &InvariantPolySpec,
    total: &ShiftedChernPolynomial,
) -> Result<GradedClass> {
    let n = total.rank();
    match phi {
        InvariantPolySpec::TopChern => Ok(total.coefficient(n)),
        InvariantPolySpec::Monomial(factors) => {
            let deg = phi.weighted_degree().unwrap_or(0);
            if deg != n {
                return Err(Error::input(format!(
                    "Φ = {phi} has weighted degree {deg}, expected {n}"
                )));
            }
            if factors.iter().any(|(i, _)| *i == 0) {
                return Err(Error::input("Φ may not contain c_0"));
            }
            let mut acc = GradedClass::one(&total.ambient);
            for (i, a) in factors {
                acc = acc.mul(&total.coefficient(*i).pow(*a))?;
            }
            Ok(acc)
        }
    }
}

/// Serialized bundle: `{rank, chern: [poly, ...]}` with `chern[i] = c_{i+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleDoc {
    pub rank: usize,
    #[serde(default)]
    pub chern: Vec<PolyDoc>,
}

impl BundleDoc {
    /// Missing trailing classes are taken to be zero.
    pub fn build(&self, ring: &Arc<RingPresentation>) -> Result<BundleData> {
        if self.chern.len() > self.rank {
            return Err(Error::input(format!(
                "bundle of rank {} lists {} Chern classes",
                self.rank,
                self.chern.len()
            )));
        }
        let mut classes = Vec::with_capacity(self.rank);
        for i in 0..self.rank {
            let c = match self.chern.get(i) {
                Some(doc) => GradedClass::from_poly(ring, &doc.to_poly(ring.nvars())?)?,
                None => GradedClass::zero(ring),
            };
            classes.push(c);
        }
        BundleData::new(ring, classes)
    }
}

/// Human-readable `λ` list, used in reports.
pub fn format_eigenvalues(blocks: &[Eigenblock]) -> String {
    let shown: Vec<String> = blocks
        .iter()
        .map(|b| format!("{}^{}", format_q(&b.lambda), b.bundle.rank()))
        .collect();
    shown.join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::rational::{frac, q};
    use crate::ring::{Generator, RewriteRule};
    use std::collections::BTreeMap;

    fn p1xp1() -> Arc<RingPresentation> {
        let mut table = BTreeMap::new();
        table.insert(vec![1, 1], q(1));
        RingPresentation::new(
            vec![
                Generator {
                    name: "e1".into(),
                    degree: 2,
                },
                Generator {
                    name: "e2".into(),
                    degree: 2,
                },
            ],
            vec![
                RewriteRule {
                    lead: vec![2, 0],
                    rhs: Poly::zero(2),
                },
                RewriteRule {
                    lead: vec![0, 2],
                    rhs: Poly::zero(2),
                },
            ],
            4,
            table,
        )
        .unwrap()
    }

    fn tangent_pn(n: u32) -> BundleData {
        let r = RingPresentation::projective_space(n, "h");
        let h = GradedClass::generator(&r, "h").unwrap();
        let total = GradedClass::one(&r).add(&h).unwrap().pow(n + 1);
        BundleData::from_total(n as usize, &total).unwrap()
    }

    #[test]
    fn total_chern_of_p2() {
        let t = tangent_pn(2);
        let r = t.ring().clone();
        let h = GradedClass::generator(&r, "h").unwrap();
        let expected = GradedClass::one(&r)
            .add(&h.scale(&q(3)))
            .unwrap()
            .add(&h.pow(2).scale(&q(3)))
            .unwrap();
        assert_eq!(total_chern(&t), expected);
        assert_eq!(
            total_chern(&BundleData::trivial(&r, 0)),
            GradedClass::one(&r)
        );
    }

    #[test]
    fn whitney_on_p1_times_p1() {
        let r = p1xp1();
        let e1 = GradedClass::generator(&r, "e1").unwrap();
        let e2 = GradedClass::generator(&r, "e2").unwrap();
        let t1 = BundleData::line(e1.scale(&q(2))).unwrap();
        let t2 = BundleData::line(e2.scale(&q(2))).unwrap();
        let sum = whitney_product(&t1, &t2).unwrap();
        // oracle: (1 + 2e1)(1 + 2e2) = 1 + 2e1 + 2e2 + 4 e1 e2
        assert_eq!(sum.rank(), 2);
        assert_eq!(
            sum.chern_class(1),
            e1.scale(&q(2)).add(&e2.scale(&q(2))).unwrap()
        );
        assert_eq!(sum.chern_class(2), e1.mul(&e2).unwrap().scale(&q(4)));

        let oo = whitney_product(&BundleData::trivial(&r, 1), &BundleData::trivial(&r, 1)).unwrap();
        assert_eq!(oo, BundleData::trivial(&r, 2));
        assert_eq!(
            whitney_product(&t1, &BundleData::trivial(&r, 0)).unwrap(),
            t1
        );
    }

    #[test]
    fn log_quotient_on_pm() {
        for m in 2..=4 {
            let t = tangent_pn(m);
            let r = t.ring().clone();
            let h = GradedClass::generator(&r, "h").unwrap();
            let log = log_chern(&t, std::slice::from_ref(&h)).unwrap();
            assert_eq!(
                total_chern(&log),
                GradedClass::one(&r).add(&h).unwrap().pow(m)
            );
            assert_eq!(log.rank(), m as usize);
            assert_eq!(log_chern(&t, &[]).unwrap(), t);
        }
    }

    #[test]
    fn shifted_blocks() {
        let t = tangent_pn(2);
        let r = t.ring().clone();
        assert_eq!(shift_block(&q(0), &t).coefficients()[1..], t.classes()[..]);

        let s = shift_block(&q(1), &BundleData::trivial(&r, 2));
        let ints: Vec<Q> = s.coefficients().iter().map(|c| c.degree_zero()).collect();
        assert_eq!(ints, vec![q(1), q(2), q(1)]);

        let h = GradedClass::generator(&r, "h").unwrap();
        let lam = frac(3, 2);
        let line = shift_block(&lam, &BundleData::line(h.clone()).unwrap());
        assert_eq!(
            line.coefficient(1),
            GradedClass::constant(&r, lam).add(&h).unwrap()
        );
    }

    #[test]
    fn products_of_trivial_blocks() {
        let r = RingPresentation::point();
        let one = |l: i64| shift_block(&q(l), &BundleData::trivial(&r, 1));
        let single = block_product(&[one(4)]).unwrap();
        assert_eq!(single, one(4));
        let two = block_product(&[one(2), one(-3)]).unwrap();
        assert_eq!(two.coefficient(2).degree_zero(), q(-6));

        // (a−b), (a−b), (c−kb) with a=1, b=2, c=7, k=2
        let three = block_product(&[one(-1), one(-1), one(3)]).unwrap();
        assert_eq!(three.coefficient(3).degree_zero(), q(3));
    }

    #[test]
    fn determinant_and_degeneracy() {
        let r = RingPresentation::point();
        let blocks = vec![
            Eigenblock::new(q(1), BundleData::trivial(&r, 1)),
            Eigenblock::new(q(5), BundleData::trivial(&r, 1)),
        ];
        assert_eq!(
            equivariant_det(&r, &blocks).unwrap(),
            GradedClass::from_int(&r, 5)
        );
        let bad = vec![Eigenblock::new(q(0), BundleData::trivial(&r, 2))];
        assert!(matches!(
            equivariant_det(&r, &bad),
            Err(Error::Nondegeneracy(_))
        ));
    }

    #[test]
    fn phi_evaluation() {
        let r = RingPresentation::projective_space(1, "eta");
        let eta = GradedClass::generator(&r, "eta").unwrap();
        let tp1 = BundleData::line(eta.scale(&q(2))).unwrap();
        let top = evaluate_phi(
            &InvariantPolySpec::TopChern,
            &ShiftedChernPolynomial::unshifted(&tp1),
        )
        .unwrap();
        assert_eq!(top, eta.scale(&q(2)));

        let lam = q(7);
        let shifted = shift_block(&lam, &BundleData::line(eta.clone()).unwrap());
        let c1 = evaluate_phi(&InvariantPolySpec::Monomial(vec![(1, 1)]), &shifted).unwrap();
        assert_eq!(c1, GradedClass::constant(&r, lam).add(&eta).unwrap());

        let wrong = evaluate_phi(&InvariantPolySpec::Monomial(vec![(1, 2)]), &shifted);
        assert!(matches!(wrong, Err(Error::Input(_))));
    }

    #[test]
    fn phi_wire_format() {
        let top: InvariantPolySpec = serde_json::from_str(r#""top_chern""#).unwrap();
        assert_eq!(top, InvariantPolySpec::TopChern);
        let mono: InvariantPolySpec =
            serde_json::from_str(r#"{"monomial": [[1, 2], [2, 1]]}"#).unwrap();
        assert_eq!(mono, InvariantPolySpec::Monomial(vec![(1, 2), (2, 1)]));
        assert_eq!(mono.weighted_degree(), Some(4));
    }
}
