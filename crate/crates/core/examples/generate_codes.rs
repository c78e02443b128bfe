//! Samples a regular and an irregular code and prints their degree profiles.

use std::collections::BTreeMap;

use ldpc_forge::alist::{read_alist, write_alist};
use ldpc_forge::generate::{sample_irregular, sample_regular, DegreeDistribution};

fn histogram(degrees: &[usize]) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for &d in degrees {
        *h.entry(d).or_insert(0) += 1;
    }
    h
}

fn main() -> ldpc_forge::Result<()> {
    let regular = sample_regular(64, 3, 6, 1)?;
    println!(
        "(3,6) n=64: {} checks, {} edges, girth {:?} (in variable nodes)",
        regular.n_checks(),
        regular.n_edges(),
        regular.girth()
    );

    let dist = DegreeDistribution::new(&[(2, 0.4187), (3, 0.1626), (6, 0.4187)], &[(6, 1.0)])?;
    let irregular = sample_irregular(72, &dist, 1)?;
    println!(
        "irregular n=72 variable degrees {:?}",
        histogram(&irregular.var_degrees())
    );
    println!(
        "irregular n=72 check degrees {:?}",
        histogram(&irregular.check_degrees())
    );

    let text = write_alist(&irregular);
    assert_eq!(read_alist(&text)?, irregular);
    println!("alist round trip ok ({} bytes)", text.len());
    Ok(())
}
