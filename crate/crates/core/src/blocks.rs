//! Principal-block character counts and Aut-orbit lower bounds: symmetric
//! and alternating groups, linear/unitary groups, the other classical
//! series, and the exceptional types. Each operation returns a
//! `BlockCountResult` carrying a derivation tag and the intermediate
//! parameters that went into it.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{
    ceil_div, is_prime, multiplicative_order, p_part, PrimePower, ThresholdVerdict,
};
use crate::error::{Error, Result};
use crate::orders::{
    check_weight_claim, classical_e, isogeny_data, natural_n, sylow_shape, LieFamily, Series,
    SylowShape,
};
use crate::partition::{k_tuples, p_core, partition_count, partitions_of};
use crate::reflection::{classical_weyl_classcount, relative_weyl, unipotent_orbit_exception};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CountKind {
    Exact,
    LowerBound,
}

/// A computed character count or orbit count, with enough context to audit
/// how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockCountResult {
    pub value: BigUint,
    pub kind: CountKind,
    /// Short tag naming the formula used.
    pub derivation: String,
    /// Intermediate quantities (e, a, w, ...), stringified for reporting.
    pub parameters: BTreeMap<String, String>,
}

impl BlockCountResult {
    fn new(value: BigUint, kind: CountKind, derivation: &str) -> Self {
        BlockCountResult {
            value,
            kind,
            derivation: derivation.to_string(),
            parameters: BTreeMap::new(),
        }
    }

    fn with(mut self, key: &str, val: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), val.to_string());
        self
    }
}

fn require_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("p = {p} is not prime")));
    }
    Ok(())
}

/// a/b where b must divide a exactly.
fn exact_div(a: &BigUint, b: u64) -> Result<BigUint> {
    let bb = BigUint::from(b);
    let (q, r) = num_integer::Integer::div_rem(a, &bb);
    if !r.is_zero() {
        return Err(Error::Domain(format!("{b} does not divide {a} exactly")));
    }
    Ok(q)
}

fn to_u64(x: &BigUint, what: &str) -> Result<u64> {
    u64::try_from(x).map_err(|_| Error::Resource(format!("{what} = {x} exceeds u64 range")))
}

/// k(B_0(S_n)) = k(p, floor(n/p)): the principal block of the symmetric
/// group has weight floor(n/p).
pub fn k_b0_symmetric(n: u64, p: u64) -> Result<BlockCountResult> {
    require_prime(p)?;
    if p > n {
        return Err(Error::NotApplicable(format!(
            "p = {p} > n = {n}: principal block is a defect-zero situation"
        )));
    }
    let w = n / p;
    let value = k_tuples(p, w)?;
    Ok(BlockCountResult::new(value, CountKind::Exact, "symmetric:k(p,w)")
        .with("n", n)
        .with("p", p)
        .with("w", w))
}

/// k(B_0(A_n)) for odd p equals the symmetric-group count.
pub fn k_b0_alternating(n: u64, p: u64) -> Result<BlockCountResult> {
    if p == 2 {
        return Err(Error::NotApplicable(
            "alternating-group count requires odd p".into(),
        ));
    }
    if n < 5 {
        return Err(Error::Domain(format!("A_{n} is not simple; need n >= 5")));
    }
    let mut r = k_b0_symmetric(n, p)?;
    r.derivation = "alternating:k(p,w)".to_string();
    Ok(r)
}

/// Lower bound on Aut(A_n)-orbits on Irr(B_0): at least half the character
/// count, and at least (p+1)/2.
pub fn orbit_lb_alternating(n: u64, p: u64) -> Result<BlockCountResult> {
    if p < 11 {
        return Err(Error::NotApplicable("orbit bound stated for p >= 11".into()));
    }
    let k = k_b0_alternating(n, p)?;
    let half = ceil_div(&k.value, &BigUint::from(2u32));
    let floor = BigUint::from((p + 1) / 2);
    let value = half.max(floor);
    Ok(
        BlockCountResult::new(value, CountKind::LowerBound, "alternating:orbits")
            .with("n", n)
            .with("p", p)
            .with("k_b0", &k.value),
    )
}

/// Parameters of the principal block of GL_n^eps(q) away from the defining
/// characteristic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearParams {
    pub epsilon: i32,
    /// e_p(q-bar), with q-bar = q for eps = +1 and q^2 for eps = -1.
    pub e_bar: u64,
    pub e_prime: u64,
    pub a: u32,
    /// p^a = (q-bar^e-bar - 1)_p.
    pub pa: BigUint,
    pub w: u64,
    pub m: u64,
    /// 1 + (p^a - 1)/e': the number of block-label symbols.
    pub label_count: BigUint,
    pub p: u64,
}

pub fn linear_params(n: u64, q: PrimePower, epsilon: i32, p: u64) -> Result<LinearParams> {
    require_prime(p)?;
    if !(epsilon == 1 || epsilon == -1) {
        return Err(Error::Domain(format!("epsilon must be +-1, got {epsilon}")));
    }
    if p == q.base {
        return Err(Error::Domain(format!("p = {p} divides q = {q}")));
    }
    if n < 2 {
        return Err(Error::Domain("need n >= 2".into()));
    }
    let q_bar = if epsilon == 1 {
        q.value
    } else {
        q.value * q.value
    };
    let e_bar = multiplicative_order(q_bar, p)?;
    let e_prime = if epsilon == 1 {
        e_bar
    } else {
        // e-bar relative to q^2; p | q^e-bar - (-1)^e-bar decides the split.
        let qe = BigUint::from(q.value).pow(u32::try_from(e_bar).map_err(|_| {
            Error::Resource(format!("e-bar = {e_bar} out of range"))
        })?);
        let crit = if e_bar % 2 == 0 {
            &qe - BigUint::one()
        } else {
            qe + BigUint::one()
        };
        if (crit % p).is_zero() {
            e_bar
        } else {
            2 * e_bar
        }
    };
    let qe = BigUint::from(q_bar).pow(
        u32::try_from(e_bar).map_err(|_| Error::Resource(format!("e-bar = {e_bar} too large")))?,
    );
    let pa = p_part(&(qe - BigUint::one()), p);
    let a = {
        let mut a = 0u32;
        let mut v = BigUint::one();
        while v < pa {
            v *= p;
            a += 1;
        }
        a
    };
    let label_count = BigUint::one() + exact_div(&(&pa - BigUint::one()), e_prime)?;
    Ok(LinearParams {
        epsilon,
        e_bar,
        e_prime,
        a,
        pa,
        w: n / e_prime,
        m: n % e_prime,
        label_count,
        p,
    })
}

/// k(B_0) for GL_n(q) (eps = +1) / GU_n(q) (eps = -1) with abelian Sylow
/// p-subgroup: k(e' + (p^a-1)/e', w) after the rank reduction n -> we'.
pub fn k_b0_gl(n: u64, q: PrimePower, epsilon: i32, p: u64) -> Result<BlockCountResult> {
    let family = ambient_family(n, epsilon)?;
    match sylow_shape(family, q, p)? {
        SylowShape::NonAbelian { .. } => {
            return Err(Error::NotApplicable(
                "non-abelian Sylow shape: use orbit_lb_nonabelian".into(),
            ))
        }
        SylowShape::DefiningChar => {
            return Err(Error::NotApplicable("defining characteristic".into()))
        }
        _ => {}
    }
    let params = linear_params(n, q, epsilon, p)?;
    if params.w == 0 {
        return Err(Error::NotApplicable(format!(
            "p = {p} does not divide the relevant torus order (w = 0)"
        )));
    }
    let shift = exact_div(&(&params.pa - BigUint::one()), params.e_prime)?;
    let e_total = to_u64(&(BigUint::from(params.e_prime) + shift), "e' + (p^a-1)/e'")?;
    let value = k_tuples(e_total, params.w)?;
    let s_level = if params.e_prime > 1 {
        "equal"
    } else {
        "not computed (orbit argument only)"
    };
    Ok(BlockCountResult::new(value, CountKind::Exact, "linear:k(e'+(p^a-1)/e',w)")
        .with("n", n)
        .with("q", q)
        .with("epsilon", epsilon)
        .with("p", p)
        .with("e_prime", params.e_prime)
        .with("a", params.a)
        .with("pa", &params.pa)
        .with("w", params.w)
        .with("label_count", &params.label_count)
        .with("s_level", s_level))
}

fn ambient_family(n: u64, epsilon: i32) -> Result<LieFamily> {
    let rank = u32::try_from(n - 1).map_err(|_| Error::Resource("n out of range".into()))?;
    LieFamily::new(if epsilon == 1 { Series::A } else { Series::TwoA }, rank)
}

/// Brute-force count of the block-label pairs (weight vector over the label
/// symbols, partition tuple with the unipotent slot carrying a trivial
/// e'-core partition). Must agree with `k_b0_gl`.
pub fn gl_label_count_oracle(params: &LinearParams, w: u64) -> Result<BigUint> {
    let label_count = to_u64(&params.label_count, "labelCount")?;
    if label_count > 12 || w > 3 {
        return Err(Error::Resource(format!(
            "oracle limited to labelCount <= 12, w <= 3 (got {label_count}, {w})"
        )));
    }
    let e = params.e_prime;
    let mut total = BigUint::zero();
    // w0: weight on the unipotent symbol x - 1; its partition has size e*w0
    // and trivial e-core. The remaining label_count - 1 symbols carry
    // arbitrary partitions summing to w - w0.
    for w0 in 0..=w {
        let mut unip = 0u64;
        let ep = u32::try_from(e).map_err(|_| Error::Resource("e' too large for oracle".into()))?;
        for lambda in partitions_of(e * w0)? {
            // Every partition has trivial 1-core.
            if e == 1 || p_core(&lambda, ep)?.is_empty() {
                unip += 1;
            }
        }
        total += BigUint::from(unip) * tuple_count_brute(label_count - 1, w - w0)?;
    }
    Ok(total)
}

/// Number of `slots`-tuples of partitions of total size `w`, by direct
/// enumeration (independent of the generating-function route).
fn tuple_count_brute(slots: u64, w: u64) -> Result<BigUint> {
    if slots == 0 {
        return Ok(if w == 0 { BigUint::one() } else { BigUint::zero() });
    }
    let mut total = BigUint::zero();
    for first in 0..=w {
        let here = BigUint::from(partitions_of(first)?.len());
        total += here * tuple_count_brute(slots - 1, w - first)?;
    }
    Ok(total)
}

/// Lower bound on Aut(S)-orbits for linear/unitary type with w >= 2.
pub fn orbit_lb_linear(n: u64, q: PrimePower, epsilon: i32, p: u64) -> Result<BlockCountResult> {
    if p < 11 {
        return Err(Error::NotApplicable("orbit bound stated for p >= 11".into()));
    }
    let params = linear_params(n, q, epsilon, p)?;
    if params.w < 2 {
        return Err(Error::NotApplicable(format!(
            "w = {} < 2: cyclic-Sylow situation, handled separately",
            params.w
        )));
    }
    let pam1 = &params.pa - BigUint::one();
    let value = if params.e_prime > 1 {
        BigUint::from(params.e_prime) + ceil_div(&pam1, &BigUint::from(2 * params.e_prime))
    } else {
        if n < 3 {
            return Err(Error::NotApplicable("e' = 1 branch needs n >= 3".into()));
        }
        BigUint::from(2u32) + ceil_div(&pam1, &BigUint::from(2u32))
    };
    Ok(BlockCountResult::new(value, CountKind::LowerBound, "linear:orbits")
        .with("n", n)
        .with("q", q)
        .with("epsilon", epsilon)
        .with("p", p)
        .with("e_prime", params.e_prime)
        .with("pa", &params.pa)
        .with("w", params.w))
}

/// Parameters for symplectic/orthogonal types: e = e_p(q)/gcd(e_p(q),2),
/// p^a = (q^{2e} - 1)_p, n = we + m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalParams {
    pub e: u64,
    pub a: u32,
    pub pa: BigUint,
    pub w: u64,
    pub m: u64,
}

pub fn classical_params(n: u64, q: PrimePower, p: u64) -> Result<ClassicalParams> {
    require_prime(p)?;
    if p == q.base {
        return Err(Error::Domain(format!("p = {p} divides q = {q}")));
    }
    let e_p = multiplicative_order(q.value, p)?;
    let e = if e_p % 2 == 0 { e_p / 2 } else { e_p };
    let exp = u32::try_from(2 * e).map_err(|_| Error::Resource("2e out of range".into()))?;
    let pa = p_part(&(BigUint::from(q.value).pow(exp) - BigUint::one()), p);
    let mut a = 0u32;
    let mut v = BigUint::one();
    while v < pa {
        v *= p;
        a += 1;
    }
    Ok(ClassicalParams {
        e,
        a,
        pa,
        w: n / e,
        m: n % e,
    })
}

fn require_bcd(series: Series) -> Result<()> {
    if !matches!(series, Series::B | Series::C | Series::D | Series::TwoD) {
        return Err(Error::Domain(format!(
            "expected one of B/C/D/2D, got {series}"
        )));
    }
    Ok(())
}

/// k(B_0) at the conformal/full-orthogonal level for types B/C/D/2D with
/// abelian Sylow p-subgroup: k(2e + (p^a-1)/(2e), w).
pub fn k_b0_classical(series: Series, n: u64, q: PrimePower, p: u64) -> Result<BlockCountResult> {
    require_bcd(series)?;
    let family = LieFamily::new(series, u32::try_from(n).unwrap())?;
    match sylow_shape(family, q, p)? {
        SylowShape::NonAbelian { .. } => {
            return Err(Error::NotApplicable(
                "non-abelian Sylow shape: use orbit_lb_nonabelian".into(),
            ))
        }
        SylowShape::DefiningChar => {
            return Err(Error::NotApplicable("defining characteristic".into()))
        }
        _ => {}
    }
    let params = classical_params(n, q, p)?;
    if params.w == 0 {
        return Err(Error::NotApplicable(format!(
            "p = {p} does not meet the torus (w = 0)"
        )));
    }
    let shift = exact_div(&(&params.pa - BigUint::one()), 2 * params.e)?;
    let e_total = to_u64(&(BigUint::from(2 * params.e) + shift), "2e + (p^a-1)/(2e)")?;
    let value = k_tuples(e_total, params.w)?;
    Ok(BlockCountResult::new(value, CountKind::Exact, "classical:k(2e+(p^a-1)/(2e),w)")
        .with("series", series)
        .with("n", n)
        .with("q", q)
        .with("p", p)
        .with("e", params.e)
        .with("a", params.a)
        .with("pa", &params.pa)
        .with("w", params.w))
}

/// Lower bound on Aut(S)-orbits for types B/C/D/2D with w >= 2.
pub fn orbit_lb_classical(series: Series, n: u64, q: PrimePower, p: u64) -> Result<BlockCountResult> {
    require_bcd(series)?;
    if p < 11 {
        return Err(Error::NotApplicable("orbit bound stated for p >= 11".into()));
    }
    let params = classical_params(n, q, p)?;
    if params.w < 2 {
        return Err(Error::NotApplicable(format!(
            "w = {} < 2: cyclic-Sylow situation, handled separately",
            params.w
        )));
    }
    let pam1 = &params.pa - BigUint::one();
    let sp4_exception = matches!(series, Series::B | Series::C)
        && n == 2
        && q.base == 2
        && q.exponent % 2 == 1;
    let d4_exception = series == Series::D && n == 4;
    let (value, tag) = if sp4_exception {
        (
            BigUint::from(4u32) + ceil_div(&pam1, &BigUint::from(8u32)),
            "classical:orbits:Sp4(2^f)",
        )
    } else if d4_exception {
        let unip = k_tuples(2 * params.e, params.w)?;
        (
            unip - BigUint::from(4u32) + ceil_div(&pam1, &BigUint::from(12 * params.e)),
            "classical:orbits:D4",
        )
    } else {
        // D/2D use the halved (lower-bound) unipotent class count.
        let (unip, _exact) = classical_weyl_classcount(series, params.e, params.w)?;
        (
            unip + ceil_div(&pam1, &BigUint::from(4 * params.e)),
            "classical:orbits",
        )
    };
    Ok(BlockCountResult::new(value, CountKind::LowerBound, tag)
        .with("series", series)
        .with("n", n)
        .with("q", q)
        .with("p", p)
        .with("e", params.e)
        .with("pa", &params.pa)
        .with("w", params.w))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AlmostSimpleCase {
    Sp4,
    D4,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlmostSimpleFloor {
    pub value: BigUint,
    /// Verdict for the b-free AM-GM minimum against 2*sqrt(p-1).
    pub amgm: ThresholdVerdict,
}

/// Character-count floor for the two almost-simple special cases:
/// 3b + (p^a-1)^2/(8b) (Sp4) and 10b + (p-1)^2/(96b) (D4), floored.
pub fn almost_simple_floor(case: AlmostSimpleCase, p: u64, a: u32, b: u64) -> Result<AlmostSimpleFloor> {
    require_prime(p)?;
    if b == 0 {
        return Err(Error::Domain("b must be positive".into()));
    }
    let (u, num, den) = match case {
        AlmostSimpleCase::Sp4 => {
            let pam1 = BigUint::from(p).pow(a) - BigUint::one();
            (3u64, pam1.pow(2), 8u64)
        }
        AlmostSimpleCase::D4 => (10u64, BigUint::from(p - 1).pow(2), 96u64),
    };
    let value = BigUint::from(u * b) + &num / (den * b);
    // min_b (u b + num/(den b)) >= 2 sqrt(u num/den); compare u*num/den
    // against p - 1 exactly, i.e. u*num vs (p-1)*den.
    let lhs = BigUint::from(u) * &num;
    let rhs = BigUint::from(p - 1) * BigUint::from(den);
    let amgm = match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => ThresholdVerdict::StrictPass,
        std::cmp::Ordering::Equal => ThresholdVerdict::Equality,
        std::cmp::Ordering::Less => ThresholdVerdict::Fail,
    };
    Ok(AlmostSimpleFloor { value, amgm })
}

/// Orbit lower bound pi(w)/6 for classical groups with non-abelian Sylow
/// p-subgroup, where pi is the partition-counting function and p <= w.
pub fn orbit_lb_nonabelian(family: LieFamily, q: PrimePower, p: u64) -> Result<BlockCountResult> {
    if !family.series.is_classical() {
        return Err(Error::NotApplicable(format!(
            "non-abelian orbit bound concerns classical series, got {}",
            family.series
        )));
    }
    if p < 11 {
        return Err(Error::NotApplicable("orbit bound stated for p >= 11".into()));
    }
    if !check_weight_claim(family, q, p)? {
        return Err(Error::Domain(format!(
            "weight claim p <= w violated for {family}({q}), p = {p}"
        )));
    }
    let e = classical_e(family.series, q, p)?;
    let w = natural_n(family) / e;
    let value = ceil_div(&partition_count(w), &BigUint::from(6u32));
    Ok(BlockCountResult::new(value, CountKind::LowerBound, "nonabelian:pi(w)/6")
        .with("family", family)
        .with("q", q)
        .with("p", p)
        .with("e", e)
        .with("w", w))
}

/// Lower bound on semisimple characters in B_0 for homocyclic abelian Sylow
/// shape: (p^{ak} - 1)/|W(T_e)|, ceiled.
pub fn semisimple_count_lb(family: LieFamily, q: PrimePower, p: u64) -> Result<BigUint> {
    if family.series.is_classical() {
        return Err(Error::NotApplicable(format!(
            "semisimple count bound tabulated for exceptional series, got {}",
            family.series
        )));
    }
    let (e, a, k) = match sylow_shape(family, q, p)? {
        SylowShape::HomocyclicAbelian { e, a, k } => (e, a, k),
        other => {
            return Err(Error::NotApplicable(format!(
                "needs homocyclic abelian Sylow shape, got {other:?}"
            )))
        }
    };
    let e32 = u32::try_from(e).map_err(|_| Error::Resource("e out of range".into()))?;
    let (_, torus, _) = relative_weyl(family, e32)?;
    let num = BigUint::from(p).pow(a * k) - BigUint::one();
    Ok(ceil_div(&num, &BigUint::from(torus.order)))
}

/// Cap on the length of a field-automorphism orbit: min(f, p^a - p^{a-1}).
pub fn field_orbit_cap(f: u32, p: u64, a: u32) -> u64 {
    let cap = BigUint::from(p).pow(a) - BigUint::from(p).pow(a.saturating_sub(1));
    match u64::try_from(&cap) {
        Ok(v) if v < f as u64 => v,
        _ => f as u64,
    }
}

/// Orbit lower bound for exceptional types with homocyclic abelian Sylow
/// shape, plus the rougher field-independent variant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExceptionalOrbitBound {
    pub bound: BlockCountResult,
    /// Rougher variant k(W(L_e)) - correction + ceil((p+1)/(d g |W(T_e)|)),
    /// valid when the homocyclic rank k is at least 2.
    pub rougher: BigUint,
}

pub fn orbit_lb_exceptional(family: LieFamily, q: PrimePower, p: u64) -> Result<ExceptionalOrbitBound> {
    if family.series.is_classical() {
        return Err(Error::NotApplicable(format!(
            "exceptional orbit bound does not cover {}",
            family.series
        )));
    }
    let (e, a, k) = match sylow_shape(family, q, p)? {
        SylowShape::HomocyclicAbelian { e, a, k } => (e, a, k),
        other => {
            return Err(Error::NotApplicable(format!(
                "needs homocyclic abelian Sylow shape, got {other:?}"
            )))
        }
    };
    let e32 = u32::try_from(e).map_err(|_| Error::Resource("e out of range".into()))?;
    let (levi, torus, regular) = relative_weyl(family, e32)?;
    let iso = isogeny_data(family, q)?;
    let correction = unipotent_orbit_exception(family, q)
        .and_then(|x| x.correction)
        .unwrap_or(0);
    let base = BigUint::from(levi.class_count - correction);
    let dg_w = BigUint::from(iso.diag * iso.graph * torus.order);
    let num = BigUint::from(p).pow(k) - BigUint::one();
    let den = &dg_w * BigUint::from(p - 1);
    let value = &base + ceil_div(&num, &den);
    let rougher = if k >= 2 {
        base + ceil_div(&BigUint::from(p + 1), &dg_w)
    } else {
        value.clone()
    };
    let bound = BlockCountResult::new(value, CountKind::LowerBound, "exceptional:orbits")
        .with("family", family)
        .with("q", q)
        .with("p", p)
        .with("e", e)
        .with("a", a)
        .with("k", k)
        .with("d", iso.diag)
        .with("g", iso.graph)
        .with("W_levi_classes", levi.class_count)
        .with("W_torus_order", torus.order)
        .with("correction", correction)
        .with("regular", regular);
    Ok(ExceptionalOrbitBound { bound, rougher })
}
