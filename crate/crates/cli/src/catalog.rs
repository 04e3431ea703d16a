//! The eleven known seed parameter sets, addressable as `--family N`.

use dsrg_core::{BinaryMatrix, DsrgParams};

use crate::format::parse_text;

macro_rules! fixture_files {
    ($dir:literal) => {
        (
            include_str!(concat!("../fixtures/", $dir, "/a1.txt")),
            include_str!(concat!("../fixtures/", $dir, "/b1.txt")),
            include_str!(concat!("../fixtures/", $dir, "/c1.txt")),
        )
    };
}

/// Seed parameters `(v, k, t, lambda)` with `mu = t`, numbered from 1.
pub const SEEDS: [(usize, usize, usize, usize); 11] = [
    (6, 3, 2, 1),
    (8, 4, 3, 1),
    (10, 5, 3, 2),
    (12, 6, 4, 2),
    (14, 7, 4, 3),
    (16, 8, 5, 3),
    (18, 9, 5, 4),
    (18, 9, 6, 3),
    (20, 10, 6, 4),
    (22, 11, 6, 5),
    (24, 12, 7, 5),
];

pub fn family(n: usize) -> Option<DsrgParams> {
    let &(v, k, t, lambda) = SEEDS.get(n.checked_sub(1)?)?;
    DsrgParams::new(v, k, t, lambda, t).ok()
}

/// Bundled `(A1, B1, C1)` text files, for the families the bundled searches
/// solve quickly.
const FIXTURES: [(&str, &str, &str); 5] = [
    fixture_files!("family1"),
    fixture_files!("family2"),
    fixture_files!("family3"),
    fixture_files!("family4"),
    fixture_files!("family5"),
];

/// The bundled seed triple of family `n`, if there is one.
pub fn fixture(n: usize) -> Option<[BinaryMatrix; 3]> {
    let (a, b, c) = FIXTURES.get(n.checked_sub(1)?)?;
    let parse = |text: &str| parse_text(text.as_bytes()).expect("bundled fixtures parse");
    Some([parse(a), parse(b), parse(c)])
}
