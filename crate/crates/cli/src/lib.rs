//! Sweep engine: enumerate (group, p) cells, evaluate the block-count
//! formulas, compare against the 2*sqrt(p-1) (or 2*(p-1)^{1/4}) threshold,
//! and emit deterministic machine-readable records.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use pblock::arith::{
    compare_to_threshold, is_prime, is_square_plus_one, BoundExponent, PrimePower,
    ThresholdVerdict,
};
use pblock::blocks::{
    k_b0_alternating, k_b0_classical, k_b0_gl, k_b0_symmetric, linear_params,
    orbit_lb_exceptional, BlockCountResult, CountKind,
};
use pblock::orders::{
    defining_char_check, generic_order, sylow_shape, validate_simple, LieFamily, Series,
    SylowShape,
};
use pblock::{Error, Result};

/// One verified (group, p) cell.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Record {
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub p: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub derivation: String,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FamilySel {
    Symmetric,
    Alternating,
    Linear,
    Unitary,
    Lie(Series),
}

impl FamilySel {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "symmetric" => FamilySel::Symmetric,
            "alternating" => FamilySel::Alternating,
            "linear" | "gl" | "A" => FamilySel::Linear,
            "unitary" | "gu" | "2A" => FamilySel::Unitary,
            other => FamilySel::Lie(Series::parse(other)?),
        })
    }

    pub fn name(&self) -> String {
        match self {
            FamilySel::Symmetric => "symmetric".into(),
            FamilySel::Alternating => "alternating".into(),
            FamilySel::Linear => "linear".into(),
            FamilySel::Unitary => "unitary".into(),
            FamilySel::Lie(s) => s.code().into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepOpts {
    pub families: Vec<FamilySel>,
    pub n_min: u64,
    pub n_max: u64,
    pub q_list: Vec<u64>,
    pub p_max: u64,
    /// None = choose per cell (square in general, fourth root where the
    /// source bound is stated that way).
    pub threshold: Option<BoundExponent>,
    pub allow_small_p: bool,
}

impl SweepOpts {
    pub fn defaults_for(families: Vec<FamilySel>) -> Self {
        SweepOpts {
            families,
            n_min: 0, // per-family default applied in cells()
            n_max: 0,
            q_list: vec![2, 3, 4, 5, 7, 8, 9],
            p_max: 200,
            threshold: None,
            allow_small_p: false,
        }
    }
}

/// A cell key; ordering defines the deterministic report order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Cell {
    family: FamilySel,
    n: u64,
    q: u64,
    p: u64,
}

fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&p| is_prime(p)).collect()
}

fn verdict_str(v: ThresholdVerdict) -> &'static str {
    match v {
        ThresholdVerdict::StrictPass => "StrictPass",
        ThresholdVerdict::Equality => "Equality",
        ThresholdVerdict::Fail => "Fail",
    }
}

fn kind_str(k: CountKind) -> &'static str {
    match k {
        CountKind::Exact => "Exact",
        CountKind::LowerBound => "LowerBound",
    }
}

fn na_record(family: &FamilySel, params: BTreeMap<String, String>, p: u64, reason: &str) -> Record {
    Record {
        family: family.name(),
        params,
        p,
        value: None,
        kind: None,
        derivation: String::new(),
        verdict: format!("NotApplicable({reason})"),
        diagnostics: None,
    }
}

fn count_record(
    family: &FamilySel,
    params: BTreeMap<String, String>,
    p: u64,
    result: &BlockCountResult,
    exp: BoundExponent,
    shape: Option<&SylowShape>,
) -> Record {
    let verdict = compare_to_threshold(&result.value, p, exp);
    let mut diagnostics: Option<BTreeMap<String, String>> = None;
    if verdict == ThresholdVerdict::Equality {
        let mut d = BTreeMap::new();
        if let Some(m) = is_square_plus_one(p) {
            d.insert("sqrt_p_minus_1".to_string(), m.to_string());
        }
        if let Some(s) = shape {
            d.insert("sylow_shape".to_string(), format!("{s:?}"));
        }
        diagnostics = Some(d);
    }
    let mut all_params = params;
    for (k, v) in &result.parameters {
        all_params.entry(k.clone()).or_insert_with(|| v.clone());
    }
    Record {
        family: family.name(),
        params: all_params,
        p,
        value: Some(result.value.to_string()),
        kind: Some(kind_str(result.kind).to_string()),
        derivation: result.derivation.clone(),
        verdict: verdict_str(verdict).to_string(),
        diagnostics,
    }
}

fn bmap(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect()
}

fn enumerate_cells(opts: &SweepOpts) -> Result<Vec<Cell>> {
    let mut cells = Vec::new();
    let p_lo = if opts.allow_small_p { 2 } else { 11 };
    for &family in &opts.families {
        match family {
            FamilySel::Symmetric | FamilySel::Alternating => {
                let (n_min, n_max) = if opts.n_max > 0 {
                    (opts.n_min.max(1), opts.n_max)
                } else {
                    (11, 60)
                };
                for n in n_min..=n_max {
                    for p in primes_in(p_lo, opts.p_max.min(n)) {
                        cells.push(Cell { family, n, q: 0, p });
                    }
                }
            }
            FamilySel::Linear | FamilySel::Unitary => {
                let (n_min, n_max) = if opts.n_max > 0 {
                    (opts.n_min.max(2), opts.n_max)
                } else {
                    (2, 12)
                };
                let series = if family == FamilySel::Linear {
                    Series::A
                } else {
                    Series::TwoA
                };
                for n in n_min..=n_max {
                    let Ok(fam) = LieFamily::new(series, (n - 1) as u32) else {
                        continue;
                    };
                    for &q in &opts.q_list {
                        let qq = PrimePower::new(q)?;
                        let order = generic_order(fam)?.evaluate(qq)?;
                        for p in primes_in(p_lo, opts.p_max) {
                            if p != qq.base && num_traits::Zero::is_zero(&(&order % p)) {
                                cells.push(Cell { family, n, q, p });
                            }
                        }
                    }
                }
            }
            FamilySel::Lie(series) => {
                let ranks: Vec<u32> = if let Some(r) = series.fixed_rank() {
                    vec![r]
                } else {
                    let lo = if opts.n_max > 0 { opts.n_min } else { 2 } as u32;
                    let hi = if opts.n_max > 0 { opts.n_max } else { 12 } as u32;
                    (lo.max(2)..=hi).collect()
                };
                for rank in ranks {
                    let Ok(fam) = LieFamily::new(series, rank) else {
                        continue;
                    };
                    for &q in &opts.q_list {
                        let Ok(qq) = PrimePower::new(q) else { continue };
                        if validate_simple(fam, qq).is_err() {
                            continue;
                        }
                        let Ok(go) = generic_order(fam) else { continue };
                        let Ok(order) = go.evaluate(qq) else { continue };
                        for p in primes_in(p_lo, opts.p_max) {
                            if p != qq.base && num_traits::Zero::is_zero(&(&order % p)) {
                                cells.push(Cell {
                                    family,
                                    n: rank as u64,
                                    q,
                                    p,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    cells.sort();
    cells.dedup();
    Ok(cells)
}

fn eval_cell(cell: &Cell, opts: &SweepOpts) -> Record {
    let exp = opts.threshold.unwrap_or(BoundExponent::Square);
    match cell.family {
        FamilySel::Symmetric => {
            let params = bmap(&[("n", cell.n.to_string())]);
            match k_b0_symmetric(cell.n, cell.p) {
                Ok(r) => {
                    let shape = symmetric_shape(cell.n, cell.p);
                    count_record(&cell.family, params, cell.p, &r, exp, Some(&shape))
                }
                Err(e) => na_record(&cell.family, params, cell.p, &e.to_string()),
            }
        }
        FamilySel::Alternating => {
            let params = bmap(&[("n", cell.n.to_string())]);
            match k_b0_alternating(cell.n, cell.p) {
                Ok(r) => {
                    let shape = symmetric_shape(cell.n, cell.p);
                    count_record(&cell.family, params, cell.p, &r, exp, Some(&shape))
                }
                Err(e) => na_record(&cell.family, params, cell.p, &e.to_string()),
            }
        }
        FamilySel::Linear | FamilySel::Unitary => {
            let eps = if cell.family == FamilySel::Linear { 1 } else { -1 };
            let params = bmap(&[
                ("n", cell.n.to_string()),
                ("q", cell.q.to_string()),
                ("epsilon", eps.to_string()),
            ]);
            let qq = PrimePower::new(cell.q).expect("cell q");
            match k_b0_gl(cell.n, qq, eps, cell.p) {
                Ok(r) => {
                    let series = if eps == 1 { Series::A } else { Series::TwoA };
                    let shape = LieFamily::new(series, (cell.n - 1) as u32)
                        .ok()
                        .and_then(|f| sylow_shape(f, qq, cell.p).ok());
                    count_record(&cell.family, params, cell.p, &r, exp, shape.as_ref())
                }
                Err(e) => na_record(&cell.family, params, cell.p, &e.to_string()),
            }
        }
        FamilySel::Lie(series) if series.is_classical() => {
            let params = bmap(&[("n", cell.n.to_string()), ("q", cell.q.to_string())]);
            let qq = PrimePower::new(cell.q).expect("cell q");
            match k_b0_classical(series, cell.n, qq, cell.p) {
                Ok(r) => {
                    let shape = LieFamily::new(series, cell.n as u32)
                        .ok()
                        .and_then(|f| sylow_shape(f, qq, cell.p).ok());
                    count_record(&cell.family, params, cell.p, &r, exp, shape.as_ref())
                }
                Err(e) => na_record(&cell.family, params, cell.p, &e.to_string()),
            }
        }
        FamilySel::Lie(series) => {
            let params = bmap(&[("q", cell.q.to_string())]);
            let qq = PrimePower::new(cell.q).expect("cell q");
            let fam = LieFamily::new(series, cell.n as u32).expect("cell family");
            match orbit_lb_exceptional(fam, qq, cell.p) {
                Ok(r) => {
                    // Bound exponent: square root when the homocyclic rank is
                    // >= 3, fourth root when it is 2 (the rank-2 bounds are
                    // only strong enough for the weaker threshold).
                    let k: u32 = r.bound.parameters["k"].parse().unwrap_or(1);
                    let exp = opts.threshold.unwrap_or(if k >= 3 {
                        BoundExponent::Square
                    } else {
                        BoundExponent::Fourth
                    });
                    let mut best = r.bound.clone();
                    if r.rougher > best.value {
                        best.value = r.rougher.clone();
                        best.derivation.push_str("+rougher");
                    }
                    let shape = sylow_shape(fam, qq, cell.p).ok();
                    count_record(&cell.family, params, cell.p, &best, exp, shape.as_ref())
                }
                Err(e) => na_record(&cell.family, params, cell.p, &e.to_string()),
            }
        }
    }
}

/// Sylow shape of S_n at p, for equality diagnostics: cyclic iff n < 2p.
fn symmetric_shape(n: u64, p: u64) -> SylowShape {
    if n < 2 * p {
        SylowShape::Cyclic { e: 1, a: 1 }
    } else {
        SylowShape::NonAbelian { e: 1 }
    }
}

/// Run a sweep with the given parallelism degree. Output order is
/// deterministic (lexicographic in the cell key) regardless of parallelism.
pub fn run_sweep(opts: &SweepOpts, parallel: usize) -> Result<Vec<Record>> {
    let cells = enumerate_cells(opts)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallel)
        .build()
        .map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
    let records: Vec<Record> = pool.install(|| {
        use rayon::prelude::*;
        cells.par_iter().map(|c| eval_cell(c, opts)).collect()
    });
    Ok(records)
}

/// Scan the exact-count families for equality cells k(B_0) = 2*sqrt(p-1).
pub fn equality_report(p_max: u64, parallel: usize) -> Result<Vec<Record>> {
    let mut opts = SweepOpts::defaults_for(vec![
        FamilySel::Symmetric,
        FamilySel::Alternating,
        FamilySel::Linear,
        FamilySel::Unitary,
        FamilySel::Lie(Series::B),
        FamilySel::Lie(Series::C),
        FamilySel::Lie(Series::D),
        FamilySel::Lie(Series::TwoD),
    ]);
    opts.p_max = p_max;
    let records = run_sweep(&opts, parallel)?;
    let eq: Vec<Record> = records
        .into_iter()
        .filter(|r| r.verdict == "Equality")
        .collect();
    for r in &eq {
        // Theorem-level necessary conditions.
        assert!(is_square_plus_one(r.p).is_some(), "equality at non-square p-1: p={}", r.p);
        assert_eq!(r.kind.as_deref(), Some("Exact"));
    }
    Ok(eq)
}

/// All families over all prime powers q <= q_max, checked in the defining
/// characteristic: q^r/|Z| vs 2*sqrt(p-1)*|Out|.
pub fn defining_sweep(q_max: u64) -> Result<Vec<Record>> {
    let mut records = Vec::new();
    let mut families: Vec<LieFamily> = Vec::new();
    for r in 1..=12 {
        families.push(LieFamily::new(Series::A, r)?);
    }
    for r in 2..=12 {
        families.push(LieFamily::new(Series::TwoA, r)?);
        families.push(LieFamily::new(Series::B, r)?);
        families.push(LieFamily::new(Series::C, r)?);
    }
    for r in 4..=12 {
        families.push(LieFamily::new(Series::D, r)?);
        families.push(LieFamily::new(Series::TwoD, r)?);
    }
    for s in [
        Series::ThreeD4,
        Series::G2,
        Series::F4,
        Series::E6,
        Series::TwoE6,
        Series::E7,
        Series::E8,
        Series::TwoB2,
        Series::TwoG2,
        Series::TwoF4,
    ] {
        families.push(LieFamily::new(s, s.fixed_rank().unwrap())?);
    }
    let mut qs: Vec<u64> = (2..=q_max)
        .filter(|&q| PrimePower::new(q).is_ok())
        .collect();
    qs.sort();
    for family in families {
        for &q in &qs {
            let qq = PrimePower::new(q)?;
            if validate_simple(family, qq).is_err() {
                continue;
            }
            let Ok(check) = defining_char_check(family, qq) else {
                continue;
            };
            let p = qq.base;
            let mut diagnostics = BTreeMap::new();
            // When the whole Sylow p-subgroup has order p (only A1 over a
            // prime field), the cyclic-Sylow case of the theorem covers the
            // group and a threshold failure here is expected.
            if family.series == Series::A && family.rank == 1 && qq.exponent == 1 {
                diagnostics.insert(
                    "covered_by_cyclic_case".to_string(),
                    "Sylow p-subgroup of order p".to_string(),
                );
            }
            records.push(Record {
                family: family.to_string(),
                params: bmap(&[
                    ("q", q.to_string()),
                    ("center", check.center_order.to_string()),
                    ("out", check.out_order.to_string()),
                    ("floor_bound", check.floor_bound.to_string()),
                ]),
                p,
                value: Some(check.ratio_num.to_string()),
                kind: Some("Exact".to_string()),
                derivation: "defining:q^r/|Z| vs 2 sqrt(p-1) |Out|".to_string(),
                verdict: verdict_str(check.verdict).to_string(),
                diagnostics: if diagnostics.is_empty() {
                    None
                } else {
                    Some(diagnostics)
                },
            });
        }
    }
    Ok(records)
}

/// Human-readable derivation trace for a single cell.
pub fn explain(family: &FamilySel, n: u64, q: Option<u64>, p: u64) -> Result<String> {
    let mut out = String::new();
    match family {
        FamilySel::Symmetric | FamilySel::Alternating => {
            let r = if *family == FamilySel::Symmetric {
                k_b0_symmetric(n, p)?
            } else {
                k_b0_alternating(n, p)?
            };
            writeln!(out, "{} group, n = {n}, p = {p}", family.name()).ok();
            writeln!(out, "  weight w = floor(n/p) = {}", n / p).ok();
            writeln!(out, "  k(B_0) = k(p, w) = {}", r.value).ok();
            finish_explain(&mut out, &r, p);
        }
        FamilySel::Linear | FamilySel::Unitary => {
            let eps = if *family == FamilySel::Linear { 1 } else { -1 };
            let q = q.ok_or_else(|| Error::Domain("explain needs --q for Lie families".into()))?;
            let qq = PrimePower::new(q)?;
            let lp = linear_params(n, qq, eps, p)?;
            writeln!(out, "{} group, n = {n}, q = {q}, p = {p}", family.name()).ok();
            writeln!(
                out,
                "  e-bar = {}, e' = {}, a = {}, p^a = {}, w = {}, m = {}, labels = {}",
                lp.e_bar, lp.e_prime, lp.a, lp.pa, lp.w, lp.m, lp.label_count
            )
            .ok();
            let r = k_b0_gl(n, qq, eps, p)?;
            writeln!(out, "  k(B_0) = k(e' + (p^a-1)/e', w) = {}", r.value).ok();
            finish_explain(&mut out, &r, p);
        }
        FamilySel::Lie(series) if series.is_classical() => {
            let q = q.ok_or_else(|| Error::Domain("explain needs --q for Lie families".into()))?;
            let qq = PrimePower::new(q)?;
            let r = k_b0_classical(*series, n, qq, p)?;
            writeln!(out, "type {series}, n = {n}, q = {q}, p = {p}").ok();
            for (k, v) in &r.parameters {
                writeln!(out, "  {k} = {v}").ok();
            }
            writeln!(out, "  k(B_0) at the conformal level = {}", r.value).ok();
            finish_explain(&mut out, &r, p);
        }
        FamilySel::Lie(series) => {
            let q = q.ok_or_else(|| Error::Domain("explain needs --q for Lie families".into()))?;
            let qq = PrimePower::new(q)?;
            let fam = LieFamily::new(*series, series.fixed_rank().unwrap_or(n as u32))?;
            let r = orbit_lb_exceptional(fam, qq, p)?;
            writeln!(out, "type {fam}, q = {q}, p = {p}").ok();
            for (k, v) in &r.bound.parameters {
                writeln!(out, "  {k} = {v}").ok();
            }
            writeln!(out, "  orbit lower bound = {}", r.bound.value).ok();
            writeln!(out, "  rougher variant = {}", r.rougher).ok();
            finish_explain(&mut out, &r.bound, p);
        }
    }
    Ok(out)
}

fn finish_explain(out: &mut String, r: &BlockCountResult, p: u64) {
    let verdict = compare_to_threshold(&r.value, p, BoundExponent::Square);
    writeln!(out, "  vs 2 sqrt(p-1): {}", verdict_str(verdict)).ok();
    if verdict == ThresholdVerdict::Equality {
        if let Some(m) = is_square_plus_one(p) {
            writeln!(out, "  equality case: p - 1 = {m}^2").ok();
        }
    }
}

/// JSON Lines serialization with stable key order.
pub fn records_to_jsonl(records: &[Record]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("record serialization"));
        out.push('\n');
    }
    out
}

/// Flattened CSV serialization.
pub fn records_to_csv(records: &[Record]) -> String {
    fn flat(map: &BTreeMap<String, String>) -> String {
        map.iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
    let mut out = String::from("family,params,p,value,kind,derivation,verdict,diagnostics\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.family,
            flat(&r.params),
            r.p,
            r.value.as_deref().unwrap_or(""),
            r.kind.as_deref().unwrap_or(""),
            r.derivation,
            r.verdict.replace(',', ";"),
            r.diagnostics.as_ref().map(flat).unwrap_or_default()
        )
        .ok();
    }
    out
}

/// True when any record carries a hard Fail verdict.
pub fn any_fail(records: &[Record]) -> bool {
    records.iter().any(|r| r.verdict == "Fail")
}

pub use pblock::orders::GENERIC_ORDERS_TABLE;
pub use pblock::reflection::REFLECTION_TABLE;
