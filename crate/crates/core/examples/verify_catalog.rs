//! Check every built-in example: global integral against summed local
//! contributions, with exact rationals throughout.
//!
//! ```text
//! cargo run --example verify_catalog -- [k]
//! ```

use logbott::catalog::{verify_all, ExampleParams};
use logbott::rational::format_q;

fn main() -> logbott::Result<()> {
    let k = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("k must be an integer"))
        .unwrap_or(2);
    let params = ExampleParams {
        k,
        ..ExampleParams::default()
    };
    for outcome in verify_all(&params) {
        let o = outcome?;
        let global = o
            .global
            .as_ref()
            .map(|g| format_q(&g.0))
            .unwrap_or_else(|| "error".into());
        let locals: Vec<String> = o
            .contributions
            .iter()
            .map(|c| {
                format!(
                    "{}: {}",
                    c.component,
                    c.value.as_ref().map(|v| format_q(&v.0)).unwrap_or_default()
                )
            })
            .collect();
        println!(
            "{:<20} global {global:>3}  [{}]  {}",
            o.example,
            locals.join(", "),
            if o.passed { "ok" } else { "FAILED" }
        );
    }
    Ok(())
}
