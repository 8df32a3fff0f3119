//! Bott matrices and nondegeneracy verdicts in the four charts of the
//! weighted-resolution field, for admissible and inadmissible weights.

use logbott::analyzer::{bott_matrix, check_nondegenerate, log_eigenvalues};
use logbott::catalog::weighted_resolution_charts;
use logbott::rational::q;

fn main() -> logbott::Result<()> {
    let k = 2;
    for (a, b, c) in [(1, 2, 7), (1, 2, 2), (1, 1, 7)] {
        println!("(a, b, c, k) = ({a}, {b}, {c}, {k})");
        for chart in weighted_resolution_charts(k, &q(a), &q(b), &q(c)) {
            let m = bott_matrix(&chart.field, &chart.component)?;
            let logs: Vec<String> = log_eigenvalues(&chart.field, &chart.component)?
                .iter()
                .map(|(i, p)| {
                    format!(
                        "{} -> {}",
                        chart.coordinate_names[*i],
                        p.display_with(&chart.coordinate_names)
                    )
                })
                .collect();
            println!(
                "  {:<22} {}  log [{}]  {}",
                chart.name,
                m.display_with(&chart.coordinate_names),
                logs.join(", "),
                check_nondegenerate(&m, 0)
            );
        }
    }
    Ok(())
}
