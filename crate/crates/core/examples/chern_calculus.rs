//! Chern classes of logarithmic tangent bundles and equivariant shifts on
//! the weighted resolution of P(1,1,1,k).

use logbott::catalog::{weighted_resolution_classes, weighted_resolution_ring};
use logbott::chern::{
    block_product, equivariant_det, evaluate_phi, log_chern, shift_block, total_chern, BundleData,
    Eigenblock, InvariantPolySpec,
};
use logbott::rational::{format_q, q};
use logbott::ring::{GradedClass, RingPresentation};

fn main() -> logbott::Result<()> {
    let k = 2;
    let ring = weighted_resolution_ring(k)?;
    let (d, tangent) = weighted_resolution_classes(&ring, k)?;
    println!("c(T_X)          = {}", total_chern(&tangent));
    let log = log_chern(&tangent, std::slice::from_ref(&d))?;
    println!("c(T_X(-log D))  = {}", total_chern(&log));
    for i in 1..=3 {
        let mixed = log.chern_class(i).mul(&d.pow(3 - i as u32))?;
        println!(
            "∫ c_{i}(log) D^{} = {}",
            3 - i,
            format_q(&mixed.integrate()?)
        );
    }
    println!(
        "∫ c_3(log) = {}",
        format_q(&log.chern_class(3).integrate()?)
    );

    // A rank-2 block on P^1 shifted by an eigenvalue.
    let p1 = RingPresentation::projective_space(1, "x");
    let x = GradedClass::generator(&p1, "x")?;
    let e = BundleData::new(&p1, vec![x.scale(&q(3)), GradedClass::zero(&p1)])?;
    let shifted = shift_block(&q(5), &e);
    println!("shifted by 5: {shifted}");

    let blocks = vec![
        Eigenblock::new(q(1), BundleData::line(x.clone())?),
        Eigenblock::new(q(3), BundleData::line(x.scale(&q(2)))?),
    ];
    let det = equivariant_det(&p1, &blocks)?;
    println!("det N = {det}, det^-1 = {}", det.invert_unit()?);
    let all: Vec<_> = blocks
        .iter()
        .map(|b| shift_block(&b.lambda, &b.bundle))
        .collect();
    let product = block_product(&all)?;
    println!(
        "c_top of N shifted: {}",
        evaluate_phi(&InvariantPolySpec::TopChern, &product)?
    );
    Ok(())
}
