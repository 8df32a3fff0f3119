//! Coleff-Herrera residues over shrinking polytubes: Cauchy's formula, a
//! nonlinear map, and the transformation law under a linear change of
//! generators.

use logbott::ch_numeric::{
    expected_residue, polytube_limit, transformation_check, LocalMap, Pairing, QuadratureConfig,
};
use logbott::poly::Poly;
use logbott::rational::{format_q, q};

fn main() -> logbott::Result<()> {
    let y0 = Poly::var(2, 0);
    let y1 = Poly::var(2, 1);
    let one = Poly::one(2);
    let cfg = QuadratureConfig {
        ladder: vec![0.2, 0.1, 0.05],
        ..QuadratureConfig::default()
    };

    let map = LocalMap::new(vec![y0.mul(&one.add(&y1)).scale(&q(2)), y1.add(&y0.pow(2))])?;
    let g = one.add(&y0).add(&y1.pow(2).scale(&q(3)));
    for pairing in [Pairing::Df, Pairing::Dy] {
        let est = polytube_limit(&map, &g, &cfg, pairing)?;
        for (eps, v) in &est.samples {
            println!("{pairing:?} eps = {eps:<5} {:.12}", v.re);
        }
        println!(
            "{pairing:?} extrapolated {:.12}, exact {}",
            est.extrapolated.re,
            format_q(&expected_residue(&map, &g, pairing))
        );
    }

    let m = vec![vec![q(2), q(1)], vec![q(0), q(3)]];
    let (before, after) = transformation_check(&map, &m, &g, &cfg)?;
    println!("R_f = {:.12}, R_Mf = {:.12}", before.re, after.re);
    Ok(())
}
