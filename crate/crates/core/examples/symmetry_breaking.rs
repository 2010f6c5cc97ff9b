//! Perturbing the carrier measure C can break symmetries, but only when
//! there are more outcomes than affine degrees of freedom.

use toricweyl::io::read_family;
use toricweyl::weyl::{enumerate_weyl, DEFAULT_LIMIT_M};

fn main() -> toricweyl::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    for file in ["perturbed_categorical.json", "perturbed_binomial.json"] {
        let fam = read_family(format!("{dir}/{file}").as_ref(), None)?;
        let report = enumerate_weyl(&fam, DEFAULT_LIMIT_M)?;
        println!(
            "{file}: m = {}, n = {}, order {} ({})",
            fam.m(),
            fam.n(),
            report.order,
            report.descriptors.name
        );
    }
    // With m = n + 1 the C-differences always lie in the span of [F | 1],
    // so the perturbed categorical family keeps all of S_3. The binomial
    // family with an extra weight on the last outcome loses its reversal.
    Ok(())
}
