//! Graded quotient rings over ℚ with a rewrite-rule normal form.
//!
//! A [`RingPresentation`] is a polynomial ring on even-degree generators
//! modulo a finite set of homogeneous rewrite rules `lead -> rhs`, where every
//! monomial of `rhs` precedes `lead` in the graded-lexicographic order
//! (weighted degree first, then exponent vectors compared lexicographically
//! with the first declared generator most significant). Everything above
//! `top_degree` is zero. The integration functional is a table of values on
//! the irreducible monomials of top degree.
//!
//! Confluence is checked when a presentation is built: every critical pair of
//! rules whose overlap lies in degree at most `top_degree` must reduce to
//! zero. Critical pairs above the top degree vanish by truncation.
//!
//! [`GradedClass`] is an inhomogeneous element stored as normal-form
//! homogeneous parts keyed by degree.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, PolyDoc};
use crate::rational::{QText, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub lead: Monomial,
    pub rhs: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingPresentation {
    generators: Vec<Generator>,
    rules: Vec<RewriteRule>,
    top_degree: u32,
    integration: BTreeMap<Monomial, Q>,
}

impl RingPresentation {
    /// Validates and builds a presentation. Fails on odd or zero generator
    /// degrees, inhomogeneous or non-decreasing rules, a non-confluent rule
    /// set, or integration keys that are not irreducible top-degree monomials.
    pub fn new(
        generators: Vec<Generator>,
        rules: Vec<RewriteRule>,
        top_degree: u32,
        integration: BTreeMap<Monomial, Q>,
    ) -> Result<Arc<Self>> {
        if !top_degree.is_multiple_of(2) {
            return Err(Error::input(format!("top degree {top_degree} is odd")));
        }
        for g in &generators {
            if g.degree == 0 || g.degree % 2 != 0 {
                return Err(Error::input(format!(
                    "generator `{}` has degree {}; degrees must be positive and even",
                    g.name, g.degree
                )));
            }
        }
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::input(format!("duplicate generator `{}`", g.name)));
            }
        }
        let ring = RingPresentation {
            generators,
            rules,
            top_degree,
            integration: BTreeMap::new(),
        };
        let n = ring.generators.len();
        for (i, rule) in ring.rules.iter().enumerate() {
            if rule.lead.len() != n || rule.rhs.nvars() != n {
                return Err(Error::input(format!(
                    "rule {i} has the wrong number of variables"
                )));
            }
            if rule.lead.iter().all(|&e| e == 0) {
                return Err(Error::input(format!(
                    "rule {i} rewrites the constant monomial"
                )));
            }
            let lead_key = ring.key(&rule.lead);
            for (m, _) in rule.rhs.terms() {
                let key = ring.key(m);
                if key.0 != lead_key.0 {
                    return Err(Error::input(format!(
                        "rule {i} is not homogeneous: {} has degree {}, lead has degree {}",
                        ring.format_monomial(m),
                        key.0,
                        lead_key.0
                    )));
                }
                if key >= lead_key {
                    return Err(Error::input(format!(
                        "rule {i} does not terminate: {} does not precede the lead {}",
                        ring.format_monomial(m),
                        ring.format_monomial(&rule.lead)
                    )));
                }
            }
        }
        ring.check_confluence()?;

        let mut ring = ring;
        for (m, v) in integration {
            if m.len() != n {
                return Err(Error::input(format!(
                    "integration key {m:?} has the wrong length"
                )));
            }
            if ring.weighted_degree(&m) != top_degree {
                return Err(Error::input(format!(
                    "integration key {} is not of top degree {top_degree}",
                    ring.format_monomial(&m)
                )));
            }
            if ring.reducible(&m) {
                return Err(Error::input(format!(
                    "integration key {} is not in normal form",
                    ring.format_monomial(&m)
                )));
            }
            ring.integration.insert(m, v);
        }
        Ok(Arc::new(ring))
    }

    /// The ring ℚ, used for isolated points.
    pub fn point() -> Arc<Self> {
        let mut table = BTreeMap::new();
        table.insert(vec![], Q::one());
        RingPresentation::new(vec![], vec![], 0, table).expect("point ring is valid")
    }

    /// ℚ[h]/(h^{n+1}) with ∫hⁿ = 1.
    pub fn projective_space(n: u32, name: &str) -> Arc<Self> {
        let mut table = BTreeMap::new();
        table.insert(vec![n], Q::one());
        RingPresentation::new(
            vec![Generator {
                name: name.to_string(),
                degree: 2,
            }],
            vec![RewriteRule {
                lead: vec![n + 1],
                rhs: Poly::zero(1),
            }],
            2 * n,
            table,
        )
        .expect("projective space ring is valid")
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    pub fn integration_table(&self) -> &BTreeMap<Monomial, Q> {
        &self.integration
    }

    pub fn nvars(&self) -> usize {
        self.generators.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.name.clone()).collect()
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// The generator called `name` as a polynomial.
    pub fn gen(&self, name: &str) -> Result<Poly> {
        Ok(Poly::var(self.nvars(), self.generator_index(name)?))
    }

    /// Build `c * ∏ name^exp` from named factors.
    pub fn monomial(&self, factors: &[(&str, u32)], c: Q) -> Result<Poly> {
        let mut e = vec![0; self.nvars()];
        for (name, k) in factors {
            e[self.generator_index(name)?] += k;
        }
        Ok(Poly::term(e, c))
    }

    pub fn weighted_degree(&self, m: &[u32]) -> u32 {
        m.iter()
            .zip(&self.generators)
            .map(|(e, g)| e * g.degree)
            .sum()
    }

    /// Sort key realizing the graded-lexicographic order.
    fn key<'a>(&self, m: &'a [u32]) -> (u32, &'a [u32]) {
        (self.weighted_degree(m), m)
    }

    /// Compare two monomials in the ring's monomial order.
    pub fn cmp_monomials(&self, a: &[u32], b: &[u32]) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }

    fn reducible(&self, m: &[u32]) -> bool {
        self.rules.iter().any(|r| divides(&r.lead, m))
    }

    pub fn format_monomial(&self, m: &[u32]) -> String {
        Poly::term(m.to_vec(), Q::one())
            .display_with(&self.names())
            .to_string()
    }

    pub fn format_poly(&self, p: &Poly) -> String {
        p.display_with(&self.names()).to_string()
    }

    fn check_arity(&self, p: &Poly) -> Result<()> {
        if p.nvars() != self.nvars() {
            return Err(Error::input(format!(
                "polynomial has {} variables, ring has {} generators",
                p.nvars(),
                self.nvars()
            )));
        }
        Ok(())
    }

    /// Unique rewrite-irreducible representative of `p`; terms above the top
    /// degree are discarded.
    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        self.check_arity(p)?;
        Ok(self.reduce(p))
    }

    fn reduce(&self, p: &Poly) -> Poly {
        // work list ordered by (degree, exponents); pop the largest term
        let mut work: BTreeMap<(u32, Monomial), Q> = BTreeMap::new();
        let push =
            |work: &mut BTreeMap<(u32, Monomial), Q>, m: Monomial, c: Q, top: u32, deg: u32| {
                if deg > top || c.is_zero() {
                    return;
                }
                let entry = work.entry((deg, m)).or_insert_with(Q::zero);
                *entry += c;
            };
        for (m, c) in p.terms() {
            let d = self.weighted_degree(m);
            push(&mut work, m.clone(), c.clone(), self.top_degree, d);
        }
        let mut out = Poly::zero(self.nvars());
        while let Some(((deg, m), c)) = work.pop_last() {
            if c.is_zero() {
                continue;
            }
            match self.rules.iter().find(|r| divides(&r.lead, &m)) {
                Some(rule) => {
                    let quotient: Monomial = m.iter().zip(&rule.lead).map(|(a, b)| a - b).collect();
                    for (rm, rc) in rule.rhs.terms() {
                        let nm: Monomial = rm.iter().zip(&quotient).map(|(a, b)| a + b).collect();
                        push(&mut work, nm, rc * &c, self.top_degree, deg);
                    }
                }
                None => out.add_term(m, c),
            }
        }
        out
    }

    fn check_confluence(&self) -> Result<()> {
        for i in 0..self.rules.len() {
            for j in (i + 1)..self.rules.len() {
                let (a, b) = (&self.rules[i], &self.rules[j]);
                let coprime = a.lead.iter().zip(&b.lead).all(|(x, y)| *x == 0 || *y == 0);
                if coprime {
                    continue;
                }
                let lcm: Monomial = a.lead.iter().zip(&b.lead).map(|(x, y)| *x.max(y)).collect();
                if self.weighted_degree(&lcm) > self.top_degree {
                    continue;
                }
                let qa: Monomial = lcm.iter().zip(&a.lead).map(|(x, y)| x - y).collect();
                let qb: Monomial = lcm.iter().zip(&b.lead).map(|(x, y)| x - y).collect();
                // lcm rewritten through rule a minus lcm rewritten through rule b
                let s = a
                    .rhs
                    .mul_term(&qa, &Q::one())
                    .sub(&b.rhs.mul_term(&qb, &Q::one()));
                let r = self.reduce(&s);
                if !r.is_zero() {
                    return Err(Error::NotConfluent {
                        first: i,
                        second: j,
                        remainder: self.format_poly(&r),
                    });
                }
            }
        }
        Ok(())
    }

    /// Irreducible monomials of weighted degree `d`, in increasing order.
    pub fn basis(&self, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0; self.nvars()];
        self.enumerate(0, d, &mut cur, &mut out);
        out.retain(|m| !self.reducible(m));
        out.sort_by(|a, b| self.cmp_monomials(a, b));
        out
    }

    fn enumerate(&self, i: usize, remaining: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == self.nvars() {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let deg = self.generators[i].degree;
        let mut e = 0;
        while e * deg <= remaining {
            cur[i] = e;
            self.enumerate(i + 1, remaining - e * deg, cur, out);
            e += 1;
        }
        cur[i] = 0;
    }

    /// Pair the top-degree part of `x` against the integration table.
    pub fn integrate(self: &Arc<Self>, x: &GradedClass) -> Result<Q> {
        if !same_ring(self, &x.ambient) {
            return Err(Error::RingMismatch);
        }
        let mut acc = Q::zero();
        if let Some(top) = x.parts.get(&self.top_degree) {
            for (m, c) in top.terms() {
                let v = self
                    .integration
                    .get(m)
                    .ok_or_else(|| Error::PresentationIncomplete(self.format_monomial(m)))?;
                acc += c * v;
            }
        }
        Ok(acc)
    }

    pub fn to_doc(&self) -> RingDoc {
        RingDoc {
            generators: self.generators.clone(),
            rules: self
                .rules
                .iter()
                .map(|r| RuleDoc {
                    lead: r.lead.clone(),
                    rhs: r.rhs.to_doc(),
                })
                .collect(),
            top_degree: self.top_degree,
            integration_table: self
                .integration
                .iter()
                .map(|(m, v)| IntegrationDoc {
                    monomial: m.clone(),
                    value: QText(v.clone()),
                })
                .collect(),
        }
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn same_ring(a: &Arc<RingPresentation>, b: &Arc<RingPresentation>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Serialized presentation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingDoc {
    pub generators: Vec<Generator>,
    #[serde(default)]
    pub rules: Vec<RuleDoc>,
    pub top_degree: u32,
    pub integration_table: Vec<IntegrationDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleDoc {
    pub lead: Vec<u32>,
    pub rhs: PolyDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegrationDoc {
    pub monomial: Vec<u32>,
    pub value: QText,
}

impl RingDoc {
    pub fn build(&self) -> Result<Arc<RingPresentation>> {
        let n = self.generators.len();
        let rules = self
            .rules
            .iter()
            .map(|r| {
                Ok(RewriteRule {
                    lead: r.lead.clone(),
                    rhs: r.rhs.to_poly(n)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut table = BTreeMap::new();
        for entry in &self.integration_table {
            if table
                .insert(entry.monomial.clone(), entry.value.0.clone())
                .is_some()
            {
                return Err(Error::input(format!(
                    "duplicate integration key {:?}",
                    entry.monomial
                )));
            }
        }
        RingPresentation::new(self.generators.clone(), rules, self.top_degree, table)
    }
}

/// Inhomogeneous element of a graded ring, stored by degree.
#[derive(Clone, Debug)]
pub struct GradedClass {
    ambient: Arc<RingPresentation>,
    parts: BTreeMap<u32, Poly>,
}

impl PartialEq for GradedClass {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ambient, &other.ambient) && self.parts == other.parts
    }
}

impl GradedClass {
    pub fn zero(ring: &Arc<RingPresentation>) -> Self {
        GradedClass {
            ambient: Arc::clone(ring),
            parts: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<RingPresentation>, c: Q) -> Self {
        GradedClass::from_normal(ring, Poly::constant(ring.nvars(), c))
    }

    pub fn one(ring: &Arc<RingPresentation>) -> Self {
        GradedClass::constant(ring, Q::one())
    }

    pub fn from_int(ring: &Arc<RingPresentation>, n: i64) -> Self {
        GradedClass::constant(ring, Q::from_integer(n.into()))
    }

    /// Normal-form `p` and split it by degree.
    pub fn from_poly(ring: &Arc<RingPresentation>, p: &Poly) -> Result<Self> {
        let nf = ring.normal_form(p)?;
        Ok(GradedClass::from_normal(ring, nf))
    }

    /// The class of the generator `name`.
    pub fn generator(ring: &Arc<RingPresentation>, name: &str) -> Result<Self> {
        GradedClass::from_poly(ring, &ring.gen(name)?)
    }

    fn from_normal(ring: &Arc<RingPresentation>, p: Poly) -> Self {
        let mut parts: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in p.terms() {
            let d = ring.weighted_degree(m);
            if d > ring.top_degree {
                continue;
            }
            parts
                .entry(d)
                .or_insert_with(|| Poly::zero(ring.nvars()))
                .add_term(m.clone(), c.clone());
        }
        parts.retain(|_, p| !p.is_zero());
        GradedClass {
            ambient: Arc::clone(ring),
            parts,
        }
    }

    pub fn ring(&self) -> &Arc<RingPresentation> {
        &self.ambient
    }

    pub fn parts(&self) -> &BTreeMap<u32, Poly> {
        &self.parts
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// All parts summed into one polynomial.
    pub fn to_poly(&self) -> Poly {
        self.parts
            .values()
            .fold(Poly::zero(self.ambient.nvars()), |acc, p| acc.add(p))
    }

    /// True when `self` is zero or concentrated in degree `d`.
    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.parts.keys().all(|&k| k == d)
    }

    pub fn degree_zero(&self) -> Q {
        self.parts
            .get(&0)
            .map(|p| p.constant_term())
            .unwrap_or_else(Q::zero)
    }

    fn check(&self, other: &GradedClass) -> Result<()> {
        if same_ring(&self.ambient, &other.ambient) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &GradedClass) -> Result<GradedClass> {
        self.check(other)?;
        let mut parts = self.parts.clone();
        for (d, p) in &other.parts {
            let merged = match parts.remove(d) {
                Some(q) => q.add(p),
                None => p.clone(),
            };
            if !merged.is_zero() {
                parts.insert(*d, merged);
            }
        }
        Ok(GradedClass {
            ambient: Arc::clone(&self.ambient),
            parts,
        })
    }

    pub fn sub(&self, other: &GradedClass) -> Result<GradedClass> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GradedClass {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> GradedClass {
        if c.is_zero() {
            return GradedClass::zero(&self.ambient);
        }
        GradedClass {
            ambient: Arc::clone(&self.ambient),
            parts: self.parts.iter().map(|(d, p)| (*d, p.scale(c))).collect(),
        }
    }

    pub fn mul(&self, other: &GradedClass) -> Result<GradedClass> {
        self.check(other)?;
        let top = self.ambient.top_degree;
        let mut acc = Poly::zero(self.ambient.nvars());
        for (da, pa) in &self.parts {
            for (db, pb) in &other.parts {
                if da + db > top {
                    continue;
                }
                acc = acc.add(&pa.mul(pb));
            }
        }
        let nf = self.ambient.reduce(&acc);
        Ok(GradedClass::from_normal(&self.ambient, nf))
    }

    pub fn pow(&self, n: u32) -> GradedClass {
        let mut acc = GradedClass::one(&self.ambient);
        for _ in 0..n {
            acc = acc.mul(self).expect("same ring");
        }
        acc
    }

    /// Degree-`d` piece. Degrees above the top degree give zero; odd degrees
    /// are rejected.
    pub fn homogeneous_part(&self, d: u32) -> Result<GradedClass> {
        if !d.is_multiple_of(2) {
            return Err(Error::input(format!("degree {d} is odd")));
        }
        let mut parts = BTreeMap::new();
        if let Some(p) = self.parts.get(&d) {
            parts.insert(d, p.clone());
        }
        Ok(GradedClass {
            ambient: Arc::clone(&self.ambient),
            parts,
        })
    }

    /// Inverse of a class with nonzero degree-0 part, as a truncated
    /// geometric series.
    pub fn invert_unit(&self) -> Result<GradedClass> {
        let c0 = self.degree_zero();
        if c0.is_zero() {
            return Err(Error::NonInvertible);
        }
        let inv0 = c0.recip();
        // self = c0 (1 + y), y nilpotent of positive degree
        let y = self.scale(&inv0).sub(&GradedClass::one(&self.ambient))?;
        let mut term = GradedClass::one(&self.ambient);
        let mut sum = GradedClass::one(&self.ambient);
        let minus_y = y.neg();
        for _ in 0..(self.ambient.top_degree / 2) {
            term = term.mul(&minus_y)?;
            if term.is_zero() {
                break;
            }
            sum = sum.add(&term)?;
        }
        Ok(sum.scale(&inv0))
    }

    pub fn integrate(&self) -> Result<Q> {
        self.ambient.integrate(self)
    }
}

impl fmt::Display for GradedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for p in self.parts.values().rev() {
            let s = self.ambient.format_poly(p);
            if first {
                write!(f, "{s}")?;
                first = false;
            } else if let Some(rest) = s.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {s}")?;
            }
        }
        Ok(())
    }
}
