//! Relative Weyl group data: tabulated orders/class numbers for the
//! exceptional types, wreath-product class counts for the classical series,
//! and the short table of unipotent-orbit exceptions.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;
use once_cell::sync::Lazy;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::orders::{LieFamily, Series};
use crate::partition::k_tuples;
use crate::arith::PrimePower;

/// Embedded data table; dumped verbatim by the CLI `tables` subcommand.
pub const REFLECTION_TABLE: &str = include_str!("../data/reflection_groups.tab");

/// A complex reflection group (or extension thereof) given by its
/// Shephard-Todd label or a conventional name, with order and class number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReflectionGroupData {
    pub label: String,
    pub order: u64,
    pub class_count: u64,
    /// False when class_count is only a lower bound.
    pub exact: bool,
}

#[derive(Debug, Clone)]
struct Row {
    levi: ReflectionGroupData,
    torus: ReflectionGroupData,
    regular: bool,
}

static TABLE: Lazy<HashMap<(Series, u32), Vec<Row>>> = Lazy::new(|| {
    let mut map: HashMap<(Series, u32), Vec<Row>> = HashMap::new();
    for line in REFLECTION_TABLE.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(f.len(), 11, "bad reflection table row: {line}");
        let series = Series::parse(f[0]).expect("series");
        // "4+"/"4-" (the two irrational factors of Phi_4 over the 2F4 field)
        // carry identical Weyl data and are keyed by the integer part.
        let e: u32 = f[1].trim_end_matches(['+', '-']).parse().expect("e");
        let parse_group = |label: &str, ord: &str, cls: &str, exact: &str| ReflectionGroupData {
            label: label.to_string(),
            order: ord.parse().expect("order"),
            class_count: cls.parse().expect("classCount"),
            exact: exact == "exact",
        };
        map.entry((series, e)).or_default().push(Row {
            levi: parse_group(f[2], f[3], f[4], f[5]),
            torus: parse_group(f[6], f[7], f[8], f[9]),
            regular: f[10] == "regular",
        });
    }
    for rows in map.values() {
        for r in rows {
            assert!(r.levi.class_count <= r.levi.order);
            assert!(r.torus.class_count <= r.torus.order);
            assert_eq!(r.levi, rows[0].levi);
        }
    }
    map
});

/// W(L_e) and W(T_e) data for an exceptional family, plus whether e is
/// regular (in which case the two coincide).
pub fn relative_weyl(
    family: LieFamily,
    e: u32,
) -> Result<(ReflectionGroupData, ReflectionGroupData, bool)> {
    let rows = TABLE.get(&(family.series, e)).ok_or_else(|| {
        Error::Domain(format!(
            "no relative-Weyl-group table row for {family}, e = {e}"
        ))
    })?;
    let r = &rows[0];
    Ok((r.levi.clone(), r.torus.clone(), r.regular))
}

/// Class number of the relative Weyl group for classical series: exactly
/// k(e, w) in type A, k(2e, w) in types B/C, and only the lower bound
/// ceil(k(2e,w)/2) for the index-2 situation in types D/2D.
pub fn classical_weyl_classcount(series: Series, e: u64, w: u64) -> Result<(BigUint, bool)> {
    match series {
        Series::A | Series::TwoA => Ok((k_tuples(e, w)?, true)),
        Series::B | Series::C => Ok((k_tuples(2 * e, w)?, true)),
        Series::D | Series::TwoD => {
            let k = k_tuples(2 * e, w)?;
            Ok(((&k + BigUint::one()) / 2u32, false))
        }
        other => Err(Error::Domain(format!(
            "classical_weyl_classcount applies to classical series, got {other}"
        ))),
    }
}

/// One of the finitely many configurations where extra graph/field
/// automorphism orbits correct the unipotent-character orbit count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionEntry {
    pub description: String,
    /// None for the D-series degenerate-symbol case, where no closed form
    /// is available and the correction is left symbolic.
    pub correction: Option<u64>,
}

/// Orbit-count correction table (graph automorphisms fusing unipotent
/// characters). Returns None when no exception applies.
pub fn unipotent_orbit_exception(family: LieFamily, q: PrimePower) -> Option<ExceptionEntry> {
    let f_odd = q.exponent % 2 == 1;
    match (family.series, family.rank, q.base) {
        (Series::D, 4, _) => Some(ExceptionEntry {
            description: "D4: triality fuses unipotent characters; correction 4".into(),
            correction: Some(4),
        }),
        (Series::D, n, _) if n % 2 == 0 => Some(ExceptionEntry {
            description: format!(
                "D{n}, n even: degenerate-symbol count unknown; correction left symbolic"
            ),
            correction: None,
        }),
        (Series::B, 2, 2) | (Series::C, 2, 2) if f_odd => Some(ExceptionEntry {
            description: "Sp4(2^f), f odd: graph automorphism gives 1 orbit of length 2".into(),
            correction: Some(1),
        }),
        (Series::G2, _, 3) if f_odd => Some(ExceptionEntry {
            description: "G2(3^f), f odd: graph automorphism gives 1 orbit of length 2".into(),
            correction: Some(1),
        }),
        (Series::F4, _, 2) if f_odd => Some(ExceptionEntry {
            description: "F4(2^f), f odd: graph automorphism gives 8 orbits of length 2".into(),
            correction: Some(8),
        }),
        _ => None,
    }
}

/// All (series, e) pairs present in the exceptional table, sorted.
pub fn tabulated_pairs() -> Vec<(Series, u32)> {
    let mut v: Vec<(Series, u32)> = TABLE.keys().copied().collect();
    v.sort();
    v
}
