//! Weyl groups of the categorical and binomial families.
//!
//! ```bash
//! cargo run --example weyl_groups
//! ```

use toricweyl::weyl::{enumerate_weyl, DEFAULT_LIMIT_M};
use toricweyl::FiniteExpFam;

fn main() -> toricweyl::Result<()> {
    for m in 3..=5 {
        let report = enumerate_weyl(&FiniteExpFam::categorical(m)?, DEFAULT_LIMIT_M)?;
        let d = &report.descriptors;
        println!(
            "categorical({m}): order {} = {}, element orders {:?}",
            d.order, d.name, d.element_orders
        );
    }

    for n in 2..=5 {
        let fam = FiniteExpFam::binomial(n)?;
        let report = enumerate_weyl(&fam, DEFAULT_LIMIT_M)?;
        let reversal = report
            .elements
            .iter()
            .find(|e| !e.is_identity())
            .expect("order 2");
        let w = reversal.exact().expect("rational family");
        println!(
            "binomial({n}): order {}, sigma {:?}, A = {}, u = {}",
            report.order,
            reversal.sigma().iter().map(|i| i + 1).collect::<Vec<_>>(),
            w.a[(0, 0)],
            w.u[0]
        );
    }

    let cat = FiniteExpFam::categorical(3)?;
    let report = enumerate_weyl(&cat, DEFAULT_LIMIT_M)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report.to_json()["elements"][5]).unwrap()
    );
    Ok(())
}
