//! Bundled sentences used by tests and the CLI.

/// `(name, sentence)` pairs.
pub const CORPUS: [(&str, &str); 8] = [
    ("commutator", "sup x . sup y . len(x*y*x^-1*y^-1)"),
    ("min-distance", "sup x . min(abs(len(x) - 1), len(x))"),
    ("diameter", "sup x . len(x)"),
    ("balance", "inf x . max(len(x), 1 - len(x))"),
    ("square-excess", "sup x . clamp(len(x^2) - len(x))"),
    ("conjugation", "sup x . sup y . abs(len(x*y*x^-1) - len(y))"),
    ("triangle-slack", "inf x . inf y . (len(x) + len(y) - len(x*y))"),
    ("cube-gap", "1/2 * (sup x . inf y . abs(len(x^3) - len(y^-1*x*y))) + 1/4"),
];

pub fn sentence(name: &str) -> Option<&'static str> {
    CORPUS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}
