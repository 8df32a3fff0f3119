//! Export the built-in catalog to JSON and TOML, then load and re-check it.
//!
//! ```text
//! cargo run --example export_catalog -- /tmp/catalog
//! ```

use logbott::catalog::{export_catalog, CatalogDoc, ExampleParams};

fn main() -> logbott::Result<()> {
    let stem = std::env::args().nth(1).unwrap_or_else(|| "catalog".into());
    let doc = export_catalog(&ExampleParams::default())?;
    for toml in [false, true] {
        let path = format!("{stem}.{}", if toml { "toml" } else { "json" });
        let text = doc.render(toml)?;
        std::fs::write(&path, &text)?;
        let back = CatalogDoc::parse(&text, toml)?;
        assert_eq!(back, doc);
        let passed = back.load()?.iter().all(|e| e.check().passed);
        println!(
            "{path}: {} bytes, {} entries, all pass: {passed}",
            text.len(),
            back.entries.len()
        );
    }
    Ok(())
}
