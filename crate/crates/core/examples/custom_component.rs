//! A user-defined localization problem: P^1 x P^1 with boundary {∞} x P^1
//! and the field z ∂_z on the first factor. Its zeros form the curve
//! {0} x P^1 with normal weight 1, so ∫ c_2(T(-log D)) = 2 comes entirely
//! from one component.

use std::sync::Arc;

use logbott::catalog::{CatalogDoc, EntryDoc, SCHEMA_VERSION};
use logbott::chern::{BundleData, Eigenblock, InvariantPolySpec};
use logbott::localization::{verify, FixedComponent, GlobalSide};
use logbott::rational::{q, QText};
use logbott::ring::{GradedClass, RingPresentation};

fn main() -> logbott::Result<()> {
    let x_ring = RingPresentation::projective_space(1, "x");
    let y_ring = RingPresentation::projective_space(1, "y");
    let ring = product(&x_ring, &y_ring)?;
    let one = GradedClass::one(&ring);
    let x = GradedClass::generator(&ring, "x")?;
    let y = GradedClass::generator(&ring, "y")?;
    let tangent_total = one.add(&x.scale(&q(2)))?.mul(&one.add(&y.scale(&q(2)))?)?;
    let global = GlobalSide::new(
        Arc::clone(&ring),
        BundleData::from_total(2, &tangent_total)?,
        vec![x.clone()],
        None,
    )?;

    let yc = GradedClass::generator(&y_ring, "y")?;
    let curve = FixedComponent::new(
        "{0} x P^1",
        Arc::clone(&y_ring),
        vec![Eigenblock::new(q(0), BundleData::line(yc.scale(&q(2)))?)],
        vec![Eigenblock::new(q(1), BundleData::trivial(&y_ring, 1))],
        true,
    )?;
    let report = verify(
        &global,
        std::slice::from_ref(&curve),
        &InvariantPolySpec::TopChern,
    );
    println!("{report}");

    let doc = CatalogDoc {
        schema: SCHEMA_VERSION,
        entries: vec![EntryDoc {
            id: "p1-p1-fiber".into(),
            description: "P^1 x P^1, D = {∞} x P^1".into(),
            global: global.to_doc(),
            components: vec![curve.to_doc()],
            phi: InvariantPolySpec::TopChern,
            expected_global: QText(q(2)),
            expected_contributions: vec![QText(q(2))],
            local_side: true,
        }],
    };
    println!("{}", doc.render(true)?);
    let reloaded = CatalogDoc::parse(&doc.render(false)?, false)?.load()?;
    println!("reloaded entry passes: {}", reloaded[0].check().passed);
    Ok(())
}

fn product(
    a: &Arc<RingPresentation>,
    b: &Arc<RingPresentation>,
) -> logbott::Result<Arc<RingPresentation>> {
    use logbott::poly::Poly;
    use logbott::ring::{Generator, RewriteRule};
    let gens: Vec<Generator> = a
        .generators()
        .iter()
        .chain(b.generators())
        .cloned()
        .collect();
    let n = gens.len();
    let rules = vec![
        RewriteRule {
            lead: vec![2, 0],
            rhs: Poly::zero(n),
        },
        RewriteRule {
            lead: vec![0, 2],
            rhs: Poly::zero(n),
        },
    ];
    let table = [(vec![1, 1], q(1))].into_iter().collect();
    RingPresentation::new(gens, rules, a.top_degree() + b.top_degree(), table)
}
