//! Bundled scenarios, embedded at compile time so the binary is
//! self-contained. Loaders re-validate everything, including the spin
//! commutation relations in the two-particle scenario.

pub const NAMES: [&str; 6] = [
    "pauli",
    "diagonal-bohm",
    "singlet",
    "faithful",
    "bub-eigenstate",
    "maximal-family",
];

pub fn lookup(name: &str) -> Option<&'static str> {
    let key = name.strip_suffix(".json").unwrap_or(name);
    match key {
        "pauli" => Some(include_str!("../corpus/pauli.json")),
        "diagonal-bohm" => Some(include_str!("../corpus/diagonal-bohm.json")),
        "singlet" => Some(include_str!("../corpus/singlet.json")),
        "faithful" => Some(include_str!("../corpus/faithful.json")),
        "bub-eigenstate" => Some(include_str!("../corpus/bub-eigenstate.json")),
        "maximal-family" => Some(include_str!("../corpus/maximal-family.json")),
        _ => None,
    }
}
