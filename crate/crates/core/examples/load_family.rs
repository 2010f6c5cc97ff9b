//! Reading family files and running the CLI in-process.

use toricweyl::cli::run_args;
use toricweyl::io::{family_to_json, read_family};

fn main() -> toricweyl::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");

    let fam = read_family(format!("{dir}/perturbed_categorical.json").as_ref(), None)?;
    println!("{}", family_to_json(&fam));

    match read_family(format!("{dir}/broken.json").as_ref(), None) {
        Err(e) => println!("broken.json: {e}"),
        Ok(_) => println!("broken.json unexpectedly loaded"),
    }

    let die = format!("{dir}/float_die.json");
    let out = run_args(["toricweyl", "weyl", "--family", die.as_str()]);
    print!("{}", out.stdout);
    println!("exit {}", out.code);
    Ok(())
}
