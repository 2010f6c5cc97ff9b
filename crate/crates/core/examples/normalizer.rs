//! The normalizer T^n ⋊ W: twisted products and the model checks.

use toricweyl::linalg::identity;
use toricweyl::torus::{
    sd_inverse, sd_mul, verify_normalizer_model, NormalizerModel, SemidirectElement, TorusElement,
};
use toricweyl::weyl::{enumerate_weyl, DEFAULT_LIMIT_M};
use toricweyl::FiniteExpFam;

fn main() -> toricweyl::Result<()> {
    let report = enumerate_weyl(&FiniteExpFam::binomial(2)?, DEFAULT_LIMIT_M)?;
    let model = NormalizerModel::standard(&report)?;
    let s = (0..report.order)
        .find(|&i| i != report.identity_index())
        .unwrap();

    let x = SemidirectElement {
        a: TorusElement::parse(&["0.25"])?,
        w: s,
    };
    let y = SemidirectElement {
        a: TorusElement::parse(&["0.1"])?,
        w: s,
    };
    let xy = sd_mul(&model, &x, &y);
    println!("rho(s) = {}", model.rho(s)[(0, 0)]);
    println!(
        "({}, s)·({}, s) = ({}, {})",
        x.a,
        y.a,
        xy.a,
        if xy.w == s { "s" } else { "e" }
    );
    println!("({}, s)^-1 = ({}, s)", x.a, sd_inverse(&model, &x).a);

    let cat = enumerate_weyl(&FiniteExpFam::categorical(3)?, DEFAULT_LIMIT_M)?;
    let check = verify_normalizer_model(&cat, &identity(2), 1000, 1)?;
    println!("{check:#?}");
    Ok(())
}
