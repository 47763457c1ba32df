//! Shared inputs for the criterion benches.

use palg::{parse, Term};

/// Terms of growing size in two variables.
pub fn sample_terms() -> Vec<(&'static str, Term)> {
    [
        ("small", "(x1 | x1*)**"),
        ("medium", "(x1 & x2*)* | (x2 & x1*)* | x1** & x2"),
        (
            "large",
            "((x1 | x2)* & (x1* | x2**))** | (x1 & x2*)* & ((x2 | x1*)** | x1 & x2)*",
        ),
    ]
    .into_iter()
    .map(|(name, src)| (name, parse(src).expect("bench terms parse")))
    .collect()
}
