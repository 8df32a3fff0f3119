//! Build a graded quotient ring from rewrite rules, list its monomial basis
//! and integrate a few classes.

use std::collections::BTreeMap;

use logbott::poly::Poly;
use logbott::rational::{format_q, q};
use logbott::ring::{Generator, GradedClass, RewriteRule, RingPresentation};

fn main() -> logbott::Result<()> {
    // Q[xi, h] / (xi^2 - 3 xi h, h^3)
    let k = 3;
    let gens = vec![
        Generator {
            name: "xi".into(),
            degree: 2,
        },
        Generator {
            name: "h".into(),
            degree: 2,
        },
    ];
    let rules = vec![
        RewriteRule {
            lead: vec![2, 0],
            rhs: Poly::term(vec![1, 1], q(k)),
        },
        RewriteRule {
            lead: vec![0, 3],
            rhs: Poly::zero(2),
        },
    ];
    let mut table = BTreeMap::new();
    table.insert(vec![1, 2], q(1));
    let ring = RingPresentation::new(gens, rules, 6, table)?;

    for d in (0..=ring.top_degree()).step_by(2) {
        let basis: Vec<String> = ring
            .basis(d)
            .iter()
            .map(|m| ring.format_monomial(m))
            .collect();
        println!("degree {d}: {}", basis.join(", "));
    }

    let xi = GradedClass::generator(&ring, "xi")?;
    let h = GradedClass::generator(&ring, "h")?;
    let d = xi.sub(&h.scale(&q(k)))?;
    println!("xi^3 = {}", xi.pow(3));
    println!("∫ xi^3 = {}", format_q(&xi.pow(3).integrate()?));
    println!(
        "∫ D^3 = {}  (D = xi - {k} h)",
        format_q(&d.pow(3).integrate()?)
    );

    let unit = GradedClass::one(&ring).add(&h)?;
    println!("(1 + h)^-1 = {}", unit.invert_unit()?);

    // An inconsistent system is rejected at construction time.
    let bad = RingPresentation::new(
        vec![
            Generator {
                name: "x".into(),
                degree: 2,
            },
            Generator {
                name: "y".into(),
                degree: 2,
            },
        ],
        vec![
            RewriteRule {
                lead: vec![1, 1],
                rhs: Poly::term(vec![0, 2], q(1)),
            },
            RewriteRule {
                lead: vec![2, 0],
                rhs: Poly::zero(2),
            },
        ],
        4,
        BTreeMap::new(),
    );
    if let Err(e) = bad {
        println!("rejected: {e}");
    }
    Ok(())
}
