//! Generic order data for finite groups of Lie type: cyclotomic factor
//! multiplicities, center/outer-automorphism data, Sylow p-structure
//! classification away from the defining characteristic, and the
//! defining-characteristic lower-bound check.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;
use serde::Serialize;

use crate::arith::{
    compare_ratio_to_scaled_threshold, cyclotomic_value, multiplicative_order, p_part, PrimePower,
    ThresholdVerdict,
};
use crate::error::{Error, Result};

/// Embedded data table; dumped verbatim by the CLI `tables` subcommand.
pub const GENERIC_ORDERS_TABLE: &str = include_str!("../data/generic_orders.tab");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Series {
    A,
    TwoA,
    B,
    C,
    D,
    TwoD,
    ThreeD4,
    G2,
    F4,
    E6,
    TwoE6,
    E7,
    E8,
    TwoB2,
    TwoG2,
    TwoF4,
}

impl Series {
    pub fn code(self) -> &'static str {
        match self {
            Series::A => "A",
            Series::TwoA => "2A",
            Series::B => "B",
            Series::C => "C",
            Series::D => "D",
            Series::TwoD => "2D",
            Series::ThreeD4 => "3D4",
            Series::G2 => "G2",
            Series::F4 => "F4",
            Series::E6 => "E6",
            Series::TwoE6 => "2E6",
            Series::E7 => "E7",
            Series::E8 => "E8",
            Series::TwoB2 => "2B2",
            Series::TwoG2 => "2G2",
            Series::TwoF4 => "2F4",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "A" => Series::A,
            "2A" => Series::TwoA,
            "B" => Series::B,
            "C" => Series::C,
            "D" => Series::D,
            "2D" => Series::TwoD,
            "3D4" => Series::ThreeD4,
            "G2" => Series::G2,
            "F4" => Series::F4,
            "E6" => Series::E6,
            "2E6" => Series::TwoE6,
            "E7" => Series::E7,
            "E8" => Series::E8,
            "2B2" => Series::TwoB2,
            "2G2" => Series::TwoG2,
            "2F4" => Series::TwoF4,
            other => return Err(Error::Domain(format!("unknown series {other:?}"))),
        })
    }

    pub fn is_classical(self) -> bool {
        matches!(
            self,
            Series::A | Series::TwoA | Series::B | Series::C | Series::D | Series::TwoD
        )
    }

    pub fn is_suzuki_ree(self) -> bool {
        matches!(self, Series::TwoB2 | Series::TwoG2 | Series::TwoF4)
    }

    /// Fixed rank for exceptional series, None for the classical families.
    pub fn fixed_rank(self) -> Option<u32> {
        match self {
            Series::ThreeD4 | Series::F4 | Series::TwoF4 => Some(4),
            Series::G2 | Series::TwoB2 | Series::TwoG2 => Some(2),
            Series::E6 | Series::TwoE6 => Some(6),
            Series::E7 => Some(7),
            Series::E8 => Some(8),
            _ => None,
        }
    }

    fn min_rank(self) -> u32 {
        match self {
            Series::A => 1,
            Series::TwoA | Series::B | Series::C => 2,
            Series::D | Series::TwoD => 4,
            _ => unreachable!(),
        }
    }
}

impl std::fmt::Display for Series {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

/// A family of finite groups of Lie type (adjoint form), e.g. A_3 = PGL_4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LieFamily {
    pub series: Series,
    pub rank: u32,
}

impl LieFamily {
    pub fn new(series: Series, rank: u32) -> Result<Self> {
        if let Some(fixed) = series.fixed_rank() {
            if rank != fixed {
                return Err(Error::Domain(format!(
                    "series {series} has fixed rank {fixed}, got {rank}"
                )));
            }
        } else if rank < series.min_rank() {
            return Err(Error::Domain(format!(
                "series {series} requires rank >= {}, got {rank}",
                series.min_rank()
            )));
        }
        Ok(LieFamily { series, rank })
    }
}

impl std::fmt::Display for LieFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

/// Cyclotomic factorization of the generic order: q^qExponent * prod Phi_d(q)^k_d.
/// For the Suzuki/Ree series the factorization involves irrational factors and
/// the order is evaluated directly from q instead.
#[derive(Debug, Clone)]
pub struct GenericOrder {
    pub family: LieFamily,
    pub q_exponent: u32,
    pub phi_mult: BTreeMap<u32, u32>,
    pub suzuki_ree: bool,
}

impl GenericOrder {
    pub fn phi_multiplicity(&self, e: u32) -> u32 {
        self.phi_mult.get(&e).copied().unwrap_or(0)
    }

    /// Group order at a given prime power.
    pub fn evaluate(&self, q: PrimePower) -> Result<BigUint> {
        if self.suzuki_ree {
            return suzuki_ree_order(self.family.series, q);
        }
        let qexp = BigUint::from(q.value).pow(self.q_exponent);
        let mut acc = qexp;
        for (&d, &k) in &self.phi_mult {
            acc *= cyclotomic_value(d, q.value).pow(k);
        }
        Ok(acc)
    }
}

fn check_suzuki_ree_field(series: Series, q: PrimePower) -> Result<()> {
    let base = match series {
        Series::TwoB2 | Series::TwoF4 => 2,
        Series::TwoG2 => 3,
        _ => unreachable!(),
    };
    if q.base != base || q.exponent % 2 == 0 {
        return Err(Error::Domain(format!(
            "{series} requires q an odd power of {base}, got {q}"
        )));
    }
    Ok(())
}

fn suzuki_ree_order(series: Series, q: PrimePower) -> Result<BigUint> {
    check_suzuki_ree_field(series, q)?;
    let qb = BigUint::from(q.value);
    Ok(match series {
        Series::TwoB2 => qb.pow(2) * (qb.pow(2) + BigUint::one()) * (&qb - BigUint::one()),
        Series::TwoG2 => qb.pow(3) * (qb.pow(3) + BigUint::one()) * (&qb - BigUint::one()),
        Series::TwoF4 => {
            qb.pow(12)
                * (qb.pow(6) + BigUint::one())
                * (qb.pow(4) - BigUint::one())
                * (qb.pow(3) + BigUint::one())
                * (&qb - BigUint::one())
        }
        _ => unreachable!(),
    })
}

/// Integer factors of the Suzuki/Ree orders with their multiplicities, with
/// the irrational cyclotomic pieces collapsed to their integer values.
/// Factors of multiplicity one are listed possibly composite; for odd p the
/// p-part of the order sits inside a single entry.
fn suzuki_ree_factors(series: Series, q: PrimePower) -> Result<Vec<(BigUint, u32)>> {
    check_suzuki_ree_field(series, q)?;
    let qv = q.value;
    // sqrt(2q) resp. sqrt(3q) is integral because the exponent is odd.
    let rt = q.base.pow((q.exponent + 1) / 2);
    Ok(match series {
        Series::TwoB2 => vec![
            (BigUint::from(qv - 1), 1),
            (BigUint::from(qv - rt + 1), 1),
            (BigUint::from(qv + rt + 1), 1),
        ],
        Series::TwoG2 => vec![
            (BigUint::from(qv - 1), 1),
            (BigUint::from(qv + 1), 1),
            (BigUint::from(qv - rt + 1), 1),
            (BigUint::from(qv + rt + 1), 1),
        ],
        Series::TwoF4 => vec![
            (BigUint::from(qv - 1), 2),
            (BigUint::from(qv + 1), 2),
            (BigUint::from(qv - rt + 1), 2),
            (BigUint::from(qv + rt + 1), 2),
            (cyclotomic_value(6, qv) * cyclotomic_value(12, qv), 1),
        ],
        _ => unreachable!(),
    })
}

static ORDER_TABLE: Lazy<HashMap<(Series, u32), GenericOrder>> = Lazy::new(|| {
    let mut map = HashMap::new();
    for line in GENERIC_ORDERS_TABLE.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let series = Series::parse(fields.next().expect("series")).expect("series code");
        let rank: u32 = fields.next().expect("rank").parse().expect("rank");
        let qexp: u32 = fields
            .next()
            .and_then(|f| f.strip_prefix("qexp="))
            .expect("qexp field")
            .parse()
            .expect("qexp value");
        let phi_str = fields
            .next()
            .and_then(|f| f.strip_prefix("phi="))
            .expect("phi field");
        let mut phi_mult = BTreeMap::new();
        for pair in phi_str.split(',') {
            let (d, k) = pair.split_once(':').expect("d:k pair");
            phi_mult.insert(d.parse().expect("d"), k.parse().expect("k"));
        }
        let family = LieFamily::new(series, rank).expect("valid family row");
        map.insert(
            (series, rank),
            GenericOrder {
                family,
                q_exponent: qexp,
                phi_mult,
                suzuki_ree: false,
            },
        );
    }
    for (series, rank, qexp) in [
        (Series::TwoB2, 2, 2),
        (Series::TwoG2, 2, 3),
        (Series::TwoF4, 4, 12),
    ] {
        map.insert(
            (series, rank),
            GenericOrder {
                family: LieFamily { series, rank },
                q_exponent: qexp,
                phi_mult: BTreeMap::new(),
                suzuki_ree: true,
            },
        );
    }
    map
});

/// Cyclotomic factorization data for a family, from the embedded table.
pub fn generic_order(family: LieFamily) -> Result<&'static GenericOrder> {
    ORDER_TABLE.get(&(family.series, family.rank)).ok_or_else(|| {
        Error::Domain(format!(
            "no generic-order table row for {family} (table covers classical ranks <= 12)"
        ))
    })
}

/// k_e: the multiplicity of Phi_e in the generic order.
pub fn phi_multiplicity(family: LieFamily, e: u32) -> Result<u32> {
    Ok(generic_order(family)?.phi_multiplicity(e))
}

/// Sylow p-subgroup structure of the adjoint group, for odd p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SylowShape {
    /// p is the defining characteristic.
    DefiningChar,
    /// Single contributing cyclotomic factor with k_e = 1: cyclic of order p^a.
    Cyclic { e: u64, a: u32 },
    /// Single contributing factor with k_e = k >= 2: (C_{p^a})^k.
    HomocyclicAbelian { e: u64, a: u32, k: u32 },
    /// Some Phi_{e p^i}, i >= 1, also divides the generic order.
    NonAbelian { e: u64 },
}

/// Classify the Sylow p-subgroup shape of the adjoint group.
pub fn sylow_shape(family: LieFamily, q: PrimePower, p: u64) -> Result<SylowShape> {
    if p == q.base {
        return Ok(SylowShape::DefiningChar);
    }
    if p < 3 {
        return Err(Error::Domain(format!("sylow_shape requires odd p, got {p}")));
    }
    let order = generic_order(family)?;
    let e = multiplicative_order(q.value, p)?;

    if order.suzuki_ree {
        let factors = suzuki_ree_factors(family.series, q)?;
        for (value, mult) in factors {
            let part = p_part(&value, p);
            if part.is_one() {
                continue;
            }
            let a = count_p_exponent(&part, p);
            return Ok(if mult == 1 {
                SylowShape::Cyclic { e, a }
            } else {
                SylowShape::HomocyclicAbelian { e, a, k: mult }
            });
        }
        return Err(Error::NotApplicable(format!(
            "p = {p} does not divide |{family}({q})|"
        )));
    }

    let k_e = if e <= u32::MAX as u64 {
        order.phi_multiplicity(e as u32)
    } else {
        0
    };
    let mut higher = false;
    let mut d = e.saturating_mul(p);
    let max_d = *order.phi_mult.keys().next_back().unwrap_or(&0) as u64;
    while d <= max_d {
        if order.phi_multiplicity(d as u32) > 0 {
            higher = true;
            break;
        }
        d = d.saturating_mul(p);
    }
    if higher {
        return Ok(SylowShape::NonAbelian { e });
    }
    if k_e == 0 {
        return Err(Error::NotApplicable(format!(
            "p = {p} does not divide |{family}({q})|"
        )));
    }
    let a = count_p_exponent(&p_part(&cyclotomic_value(e as u32, q.value), p), p);
    Ok(if k_e == 1 {
        SylowShape::Cyclic { e, a }
    } else {
        SylowShape::HomocyclicAbelian { e, a, k: k_e }
    })
}

fn count_p_exponent(part: &BigUint, p: u64) -> u32 {
    let pb = BigUint::from(p);
    let mut a = 0u32;
    let mut v = BigUint::one();
    while v < *part {
        v *= &pb;
        a += 1;
    }
    a
}

/// Center order of the simply connected form, automorphism-group data, and
/// the order of Out(S); standard table values evaluated at q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IsogenyData {
    pub center_order: u64,
    /// Order of the diagonal-automorphism group.
    pub diag: u64,
    /// Order of the graph-automorphism group.
    pub graph: u64,
    /// Field parameter f with q = l^f.
    pub field: u32,
    pub out_order: u64,
}

pub fn isogeny_data(family: LieFamily, q: PrimePower) -> Result<IsogenyData> {
    let f = q.exponent as u64;
    let n = family.rank as u64;
    let (z, graph, out) = match family.series {
        Series::A => {
            let z = gcd(n + 1, q.value - 1);
            let g = if n >= 2 { 2 } else { 1 };
            (z, g, z * f * g)
        }
        Series::TwoA => {
            let z = gcd(n + 1, q.value + 1);
            (z, 1, z * 2 * f)
        }
        Series::B | Series::C => {
            let z = gcd(2, q.value - 1);
            let g = if n == 2 && q.base == 2 { 2 } else { 1 };
            (z, g, z * f * g)
        }
        Series::D => {
            let z = gcd4_pow(q.value, family.rank, false);
            let g = if n == 4 { 6 } else { 2 };
            (z, g, z * f * g)
        }
        Series::TwoD => {
            let z = gcd4_pow(q.value, family.rank, true);
            (z, 1, z * 2 * f)
        }
        Series::ThreeD4 => (1, 1, 3 * f),
        Series::G2 => {
            let g = if q.base == 3 { 2 } else { 1 };
            (1, g, f * g)
        }
        Series::F4 => {
            let g = if q.base == 2 { 2 } else { 1 };
            (1, g, f * g)
        }
        Series::E6 => {
            let z = gcd(3, q.value - 1);
            (z, 2, z * f * 2)
        }
        Series::TwoE6 => {
            let z = gcd(3, q.value + 1);
            (z, 1, z * 2 * f)
        }
        Series::E7 => {
            let z = gcd(2, q.value - 1);
            (z, 1, z * f)
        }
        Series::E8 => (1, 1, f),
        Series::TwoB2 | Series::TwoG2 | Series::TwoF4 => {
            check_suzuki_ree_field(family.series, q)?;
            (1, 1, f)
        }
    };
    Ok(IsogenyData {
        center_order: z,
        diag: z,
        graph,
        field: q.exponent,
        out_order: out,
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// gcd(4, q^n -+ 1) without computing q^n in full.
fn gcd4_pow(q: u64, n: u32, plus: bool) -> u64 {
    let mut m = 1u64;
    for _ in 0..n {
        m = m * (q % 4) % 4;
    }
    let x = if plus { (m + 1) % 4 } else { (m + 3) % 4 };
    match x {
        0 => 4,
        2 => 2,
        _ => 1,
    }
}

/// Defining-characteristic check: the floor bound floor(q^r/|Z(X)|) - 1 and
/// the exact verdict of q^r/|Z(X)| against 2*sqrt(p-1)*|Out(S)| with p the
/// defining characteristic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefiningCharCheck {
    pub floor_bound: BigUint,
    pub ratio_num: BigUint,
    pub center_order: u64,
    pub out_order: u64,
    pub verdict: ThresholdVerdict,
}

pub fn defining_char_check(family: LieFamily, q: PrimePower) -> Result<DefiningCharCheck> {
    let iso = isogeny_data(family, q)?;
    let qr = BigUint::from(q.value).pow(family.rank);
    let z = BigUint::from(iso.center_order);
    let floor = &qr / &z;
    let floor_bound = if floor.is_zero() || floor.is_one() {
        BigUint::zero()
    } else {
        floor - BigUint::one()
    };
    let verdict = compare_ratio_to_scaled_threshold(
        &qr,
        &z,
        q.base,
        &BigUint::from(iso.out_order),
    );
    Ok(DefiningCharCheck {
        floor_bound,
        ratio_num: qr,
        center_order: iso.center_order,
        out_order: iso.out_order,
        verdict,
    })
}

/// The parameter e for classical types in the non-abelian Sylow analysis:
/// smallest e with p | q^e - eps^e (linear/unitary) or p | q^e +- 1
/// (symplectic/orthogonal).
pub fn classical_e(series: Series, q: PrimePower, p: u64) -> Result<u64> {
    let e_p = multiplicative_order(q.value, p)?;
    Ok(match series {
        Series::A => e_p,
        Series::TwoA => {
            if e_p % 4 == 0 {
                e_p
            } else if e_p % 2 == 0 {
                e_p / 2
            } else {
                2 * e_p
            }
        }
        Series::B | Series::C | Series::D | Series::TwoD => {
            if e_p % 2 == 0 {
                e_p / 2
            } else {
                e_p
            }
        }
        other => {
            return Err(Error::Domain(format!(
                "classical_e applies to classical series, got {other}"
            )))
        }
    })
}

/// Matrix-size parameter n of the natural module bookkeeping: n for
/// PGL_n/PGU_n, the subscript n for B_n/C_n/D_n.
pub fn natural_n(family: LieFamily) -> u64 {
    match family.series {
        Series::A | Series::TwoA => family.rank as u64 + 1,
        _ => family.rank as u64,
    }
}

/// Checks p <= w for non-abelian-Sylow classical instances, with
/// n = w*e + m per the case-split convention for e.
pub fn check_weight_claim(family: LieFamily, q: PrimePower, p: u64) -> Result<bool> {
    if !family.series.is_classical() {
        return Err(Error::NotApplicable(format!(
            "weight claim concerns classical series, got {}",
            family.series
        )));
    }
    match sylow_shape(family, q, p)? {
        SylowShape::NonAbelian { .. } => {}
        other => {
            return Err(Error::NotApplicable(format!(
                "weight claim requires non-abelian Sylow shape, got {other:?}"
            )))
        }
    }
    let e = classical_e(family.series, q, p)?;
    let w = natural_n(family) / e;
    Ok(p <= w)
}

/// Groups in these families that are not simple (or out of scope) at small q;
/// the theorems concern simple socles only.
pub fn validate_simple(family: LieFamily, q: PrimePower) -> Result<()> {
    let bad = match (family.series, family.rank, q.value) {
        (Series::A, 1, 2) | (Series::A, 1, 3) => true,
        (Series::TwoA, 2, 2) => true,
        (Series::B, 2, 2) | (Series::C, 2, 2) => true,
        (Series::G2, _, 2) => true,
        (Series::TwoB2, _, 2) => true,
        (Series::TwoG2, _, 3) => true,
        (Series::TwoF4, _, 2) => true,
        _ => false,
    };
    if bad {
        return Err(Error::Domain(format!(
            "{family}({q}) is not a simple group (or is the Tits group) and is excluded"
        )));
    }
    if family.series.is_suzuki_ree() {
        check_suzuki_ree_field(family.series, q)?;
    }
    Ok(())
}
