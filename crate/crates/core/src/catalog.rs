//! Theorem morphisms bundled as data files.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::morphism::ExplicitMorphism;
use crate::symbolic::word::SymbolicMorphism;
use crate::word::Fraction;

const SYMBOLIC: &[(&str, &str)] = &[
    ("thm_102_38a_15b", include_str!("../catalog/symbolic/thm_102_38a_15b.json")),
    ("thm_10_11a_10b", include_str!("../catalog/symbolic/thm_10_11a_10b.json")),
    ("thm_12_7a_5b", include_str!("../catalog/symbolic/thm_12_7a_5b.json")),
    ("thm_13_7a_4b", include_str!("../catalog/symbolic/thm_13_7a_4b.json")),
    ("thm_14_6a_b_i", include_str!("../catalog/symbolic/thm_14_6a_b_i.json")),
    ("thm_14_6a_b_ii", include_str!("../catalog/symbolic/thm_14_6a_b_ii.json")),
    ("thm_14_8a_4b", include_str!("../catalog/symbolic/thm_14_8a_4b.json")),
    ("thm_158_53a_30b", include_str!("../catalog/symbolic/thm_158_53a_30b.json")),
    ("thm_16_9a_7b", include_str!("../catalog/symbolic/thm_16_9a_7b.json")),
    ("thm_18_10a_8b", include_str!("../catalog/symbolic/thm_18_10a_8b.json")),
    ("thm_191_66a_28b", include_str!("../catalog/symbolic/thm_191_66a_28b.json")),
    ("thm_20_11a_9b", include_str!("../catalog/symbolic/thm_20_11a_9b.json")),
    ("thm_24_13a_11b", include_str!("../catalog/symbolic/thm_24_13a_11b.json")),
    ("thm_26_9a_4b", include_str!("../catalog/symbolic/thm_26_9a_4b.json")),
    ("thm_279_67a_30b", include_str!("../catalog/symbolic/thm_279_67a_30b.json")),
    ("thm_29_14a_9b", include_str!("../catalog/symbolic/thm_29_14a_9b.json")),
    ("thm_2_2a_b", include_str!("../catalog/symbolic/thm_2_2a_b.json")),
    ("thm_30_10a_5b", include_str!("../catalog/symbolic/thm_30_10a_5b.json")),
    ("thm_37_24a_15b", include_str!("../catalog/symbolic/thm_37_24a_15b.json")),
    ("thm_38_12a_7b", include_str!("../catalog/symbolic/thm_38_12a_7b.json")),
    ("thm_3_a", include_str!("../catalog/symbolic/thm_3_a.json")),
    ("thm_42_13a_8b", include_str!("../catalog/symbolic/thm_42_13a_8b.json")),
    ("thm_46_14a_9b_i", include_str!("../catalog/symbolic/thm_46_14a_9b_i.json")),
    ("thm_46_14a_9b_ii", include_str!("../catalog/symbolic/thm_46_14a_9b_ii.json")),
    ("thm_4_5a_4b", include_str!("../catalog/symbolic/thm_4_5a_4b.json")),
    ("thm_4_a", include_str!("../catalog/symbolic/thm_4_a.json")),
    ("thm_54_13a_5b", include_str!("../catalog/symbolic/thm_54_13a_5b.json")),
    ("thm_6_4a_2b_i", include_str!("../catalog/symbolic/thm_6_4a_2b_i.json")),
    ("thm_6_4a_2b_ii", include_str!("../catalog/symbolic/thm_6_4a_2b_ii.json")),
    ("thm_8_5a_3b", include_str!("../catalog/symbolic/thm_8_5a_3b.json")),
];

const EXPLICIT: &[(&str, &str)] = &[
    ("thm_4_3", include_str!("../catalog/explicit/thm_4_3.json")),
    ("thm_5_3", include_str!("../catalog/explicit/thm_5_3.json")),
    ("thm_8_5", include_str!("../catalog/explicit/thm_8_5.json")),
    ("thm_9_5", include_str!("../catalog/explicit/thm_9_5.json")),
];

/// Rationals with a k-uniform morphism φ(n) = u·(n + d) whose fixed point is
/// w_{a/b}, as (a, b, d, k, ℓ).
pub const SPORADIC: &[(u32, u32, u32, usize, usize)] = &[
    (7, 4, 2, 50847, 12940),
    (8, 5, 2, 733, 301),
    (13, 9, 1, 45430, 11400),
    (15, 11, 1, 6168, 711),
    (16, 13, 1, 12945, 1321),
    (17, 10, 2, 55657, 37104),
    (18, 13, 1, 4188, 2094),
    (19, 13, 1, 7698, 946),
    (21, 16, 2, 25441, 5606),
    (25, 17, 1, 11705, 3268),
    (31, 22, 1, 1645, 1160),
    (33, 23, 1, 24995, 3576),
    (37, 26, 1, 2359, 1680),
    (37, 28, 1, 5349, 3861),
    (41, 28, 1, 2103, 999),
    (49, 34, 1, 4171, 3008),
    (55, 38, 1, 5269, 3816),
    (53, 40, 1, 9933, 4149),
    (59, 42, 1, 5861, 4332),
    (65, 46, 1, 7151, 5292),
    (67, 46, 1, 7849, 5720),
    (71, 50, 1, 8569, 6348),
    (73, 50, 1, 9331, 6816),
    (77, 54, 1, 10115, 7500),
];

pub fn symbolic_names() -> impl Iterator<Item = &'static str> {
    SYMBOLIC.iter().map(|(n, _)| *n)
}

pub fn symbolic_source(name: &str) -> Option<&'static str> {
    SYMBOLIC.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn symbolic(name: &str) -> Result<SymbolicMorphism> {
    let text = symbolic_source(name).ok_or_else(|| Error::Parse(format!("no catalog entry {name}")))?;
    SymbolicMorphism::parse(text)
}

pub fn symbolic_theorems() -> Vec<(&'static str, SymbolicMorphism)> {
    SYMBOLIC
        .iter()
        .map(|(n, s)| (*n, SymbolicMorphism::parse(s).expect("bundled theorem parses")))
        .collect()
}

pub fn explicit_source(name: &str) -> Option<&'static str> {
    EXPLICIT.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn explicit(name: &str) -> Result<ExplicitMorphism> {
    let text = explicit_source(name).ok_or_else(|| Error::Parse(format!("no catalog entry {name}")))?;
    Ok(ExplicitMorphism::parse(text)?.0)
}

/// Catalog entries whose statement covers a/b.
pub fn theorems_for(f: Fraction) -> Vec<String> {
    let x = Ratio::new(f.a as i64, f.b as i64);
    let mut out = Vec::new();
    for (name, text) in EXPLICIT {
        if text.contains(&format!("\"fraction\": \"{f}\"")) {
            out.push(name.to_string());
        }
    }
    for &(a, b, ..) in SPORADIC {
        if (a, b) == (f.a, f.b) {
            out.push(format!("sporadic {a}/{b}"));
        }
    }
    for (name, m) in symbolic_theorems() {
        if m.interval.contains(x) && m.admits(f.a as i64, f.b as i64).is_ok() {
            out.push(name.to_string());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::word::conj4r_morphism;

    #[test]
    fn every_entry_round_trips() {
        for (name, m) in symbolic_theorems() {
            let again = SymbolicMorphism::from_json(&m.to_json()).unwrap();
            assert_eq!(again, m, "{name}");
        }
        for (name, text) in EXPLICIT {
            let (m, extra) = ExplicitMorphism::parse(text).unwrap();
            let (again, extra2) = ExplicitMorphism::from_json(&m.to_json(&extra)).unwrap();
            assert_eq!((again, extra2), (m, extra), "{name}");
        }
    }

    #[test]
    fn four_r_family_matches_bundled_theorems() {
        for (r, name) in [
            (2, "thm_8_5a_3b"),
            (3, "thm_12_7a_5b"),
            (4, "thm_16_9a_7b"),
            (5, "thm_20_11a_9b"),
            (6, "thm_24_13a_11b"),
        ] {
            let m = conj4r_morphism(r).unwrap();
            let t = symbolic(name).unwrap();
            assert_eq!(m.blocks, t.blocks, "r = {r}");
            assert_eq!((m.d, m.k), (t.d, t.k), "r = {r}");
        }
    }
}
