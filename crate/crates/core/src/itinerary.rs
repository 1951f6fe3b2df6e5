//! Combinatorial itineraries and kneading sequences.
//!
//! Fix a partition address `s` (any non-`∞` point of the completed address
//! space). Its integer translates `m + s` cut the address line into open
//! slots, and the itinerary of an external address `r` records which slot
//! each shift visits:
//!
//! ```text
//! itin_s(r) = m₀ m₁ m₂ …   where   (mⱼ + s) < σʲ(r) < (mⱼ+1 + s).
//! ```
//!
//! A shift landing exactly on a translate leaves the itinerary undefined at
//! that index ([`ItinError::HitsPartition`]). The kneading sequence `K(s)`
//! applies the same slot rule to the forward shifts of `s` itself: entry `uⱼ`
//! comes from `σ^{j+1}(s)`, and the first shift that hits a translate of `s`
//! (for periodic `s`: `s` itself; for intermediate `s`: the point `∞`)
//! terminates the sequence with `*`. For a periodic address of period `n`
//! this yields exactly the `n−1` entries `u₀ … u_{n−2}` before the star.
//!
//! [`itinerary_interval`] realizes an itinerary prefix as the exact union of
//! open address intervals, by pulling the slot intervals back one shift at a
//! time; the endpoints are translates of shifts of `s` together with the
//! half-integer gap points `(k+½)∞`.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::address::{
    cmp_lex, CmpUndecided, ExtendedAddress, ExternalAddress, Slot,
};
use crate::model::{t_min, t_star, CertInterval, ModelCtx, ModelError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ItinError {
    #[error("the infinity address cannot serve as a partition address")]
    InvalidPartition,
    #[error("shift {0} of the moving address lies exactly on a translate of the partition")]
    HitsPartition(u64),
    #[error("comparison undecided at depth {}", .0.depth)]
    Undecided(CmpUndecided),
    #[error("preconditions for the sharing report fail: {0}")]
    PreconditionFailed(String),
    #[error("no address realizes the requested itinerary prefix")]
    EmptyRealization,
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl From<CmpUndecided> for ItinError {
    fn from(u: CmpUndecided) -> Self {
        ItinError::Undecided(u)
    }
}

/// A finite itinerary, optionally star-terminated.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Itinerary {
    pub entries: Vec<i64>,
    pub star_terminated: bool,
    pub requested_length: usize,
}

impl fmt::Display for Itinerary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.entries.iter().map(|v| v.to_string()).collect();
        if self.star_terminated {
            parts.push("*".to_string());
        }
        f.write_str(&parts.join(" "))
    }
}

/// Reported length convention for intermediate addresses.
///
/// An intermediate address with `k` finite entries has `k−1` kneading entries
/// before the star under either convention; the conventions differ in what
/// they call the address's *length* (and hence in the claimed entry count
/// `length − 1` versus `length − 2`). `CountInfinity` counts the `∞` symbol
/// (length `k+1`); `FiniteEntriesOnly` counts only the finite entries
/// (length `k`). Do not conflate the two: entry data is identical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LengthConvention {
    #[default]
    CountInfinity,
    FiniteEntriesOnly,
}

/// Declared length of an address under the chosen convention (infinite
/// addresses report `None`).
pub fn declared_length(s: &ExtendedAddress, convention: LengthConvention) -> Option<usize> {
    match s {
        ExtendedAddress::Infinite(_) => None,
        ExtendedAddress::Infinity => Some(match convention {
            LengthConvention::CountInfinity => 1,
            LengthConvention::FiniteEntriesOnly => 0,
        }),
        ExtendedAddress::Intermediate(ia) => Some(match convention {
            LengthConvention::CountInfinity => ia.length(),
            LengthConvention::FiniteEntriesOnly => ia.finite_entries(),
        }),
    }
}

/// The slot index `m` with `(m + s) < x < (m+1 + s)`, computed by first-entry
/// arithmetic with a single tail comparison in the tie case.
fn slot_index(
    s: &ExtendedAddress,
    x: &ExtendedAddress,
    depth_cap: u64,
) -> Result<i64, SlotOutcome> {
    let s0 = match s.slot(0) {
        Ok(Slot::Fin(v)) => v,
        _ => return Err(SlotOutcome::Undecided(CmpUndecided { depth: 0 })),
    };
    let x0 = match x.slot(0) {
        Ok(Slot::Fin(v)) => v,
        Ok(Slot::Inf) => return Err(SlotOutcome::MovingPointIsInfinity),
        _ => return Err(SlotOutcome::Undecided(CmpUndecided { depth: 0 })),
    };
    let diff = x0 - s0;
    if diff.rem_euclid(2) == 1 {
        // parities differ: the first entries alone decide the slot
        return Ok(((diff - 1) / 2) as i64);
    }
    let m0 = (diff / 2) as i64;
    match cmp_lex(&x.shift(), &s.shift(), depth_cap) {
        Ok(Ordering::Greater) => Ok(m0),
        Ok(Ordering::Less) => Ok(m0 - 1),
        Ok(Ordering::Equal) => Err(SlotOutcome::OnTranslate),
        Err(u) => Err(SlotOutcome::Undecided(u)),
    }
}

enum SlotOutcome {
    OnTranslate,
    MovingPointIsInfinity,
    Undecided(CmpUndecided),
}

/// Itinerary of `r` relative to the partition address `s`.
pub fn itinerary(
    s: &ExtendedAddress,
    r: &ExternalAddress,
    length: usize,
    depth_cap: u64,
) -> Result<Itinerary, ItinError> {
    if s.is_infinity() {
        return Err(ItinError::InvalidPartition);
    }
    let mut entries = Vec::with_capacity(length);
    let mut moving = r.clone();
    for j in 0..length {
        let x = ExtendedAddress::Infinite(moving.clone());
        match slot_index(s, &x, depth_cap) {
            Ok(m) => entries.push(m),
            Err(SlotOutcome::OnTranslate) => return Err(ItinError::HitsPartition(j as u64)),
            Err(SlotOutcome::MovingPointIsInfinity) => unreachable!("moving point is external"),
            Err(SlotOutcome::Undecided(u)) => return Err(ItinError::Undecided(u)),
        }
        moving = moving.shift();
    }
    Ok(Itinerary { entries, star_terminated: false, requested_length: length })
}

/// Kneading sequence `K(s)`: the slot entries of the forward shifts
/// `σ^{j+1}(s)`, star-terminated at the first shift that equals a translate
/// of `s` or the point `∞`. Stars replace the partition-hit error here.
pub fn kneading(
    s: &ExtendedAddress,
    max_entries: usize,
    depth_cap: u64,
) -> Result<Itinerary, ItinError> {
    if s.is_infinity() {
        return Err(ItinError::InvalidPartition);
    }
    let mut entries = Vec::new();
    let mut moving = s.shift();
    for _ in 0..max_entries {
        if moving.is_infinity() {
            return Ok(Itinerary {
                entries,
                star_terminated: true,
                requested_length: max_entries,
            });
        }
        match slot_index(s, &moving, depth_cap) {
            Ok(m) => entries.push(m),
            Err(SlotOutcome::OnTranslate) | Err(SlotOutcome::MovingPointIsInfinity) => {
                return Ok(Itinerary {
                    entries,
                    star_terminated: true,
                    requested_length: max_entries,
                })
            }
            Err(SlotOutcome::Undecided(u)) => return Err(ItinError::Undecided(u)),
        }
        moving = moving.shift();
    }
    Ok(Itinerary { entries, star_terminated: false, requested_length: max_entries })
}

/// Open interval `(lower, upper)` in the linear order on addresses.
/// `ExtendedAddress::Infinity` as the lower bound marks an interval unbounded
/// below (the circle wraps at `∞`); as the upper bound it is the genuine top
/// of the linear order. The full line is `(Infinity, Infinity)`.
#[derive(Debug, Clone)]
pub struct AddressInterval {
    pub lower: ExtendedAddress,
    pub upper: ExtendedAddress,
}

impl AddressInterval {
    fn full() -> Self {
        AddressInterval { lower: ExtendedAddress::Infinity, upper: ExtendedAddress::Infinity }
    }

    pub fn is_bounded_below(&self) -> bool {
        !self.lower.is_infinity()
    }

    pub fn is_bounded_above(&self) -> bool {
        !self.upper.is_infinity()
    }

    /// Strict containment test for an external address.
    pub fn contains(&self, r: &ExternalAddress, depth_cap: u64) -> Result<bool, CmpUndecided> {
        let x = ExtendedAddress::Infinite(r.clone());
        if self.is_bounded_below()
            && cmp_lex(&self.lower, &x, depth_cap)? != Ordering::Less
        {
            return Ok(false);
        }
        if self.is_bounded_above() && cmp_lex(&x, &self.upper, depth_cap)? != Ordering::Less {
            return Ok(false);
        }
        Ok(true)
    }
}

/// Maximal open intervals of external addresses whose itinerary relative to
/// `s` begins with `prefix`. Computed by pulling the slot strips back one
/// shift at a time; each pullback prepends one entry and splits at most one
/// interval at the image of `σ(s)`.
pub fn itinerary_interval(
    s: &ExtendedAddress,
    prefix: &[i64],
    depth_cap: u64,
) -> Result<Vec<AddressInterval>, ItinError> {
    if s.is_infinity() {
        return Err(ItinError::InvalidPartition);
    }
    if prefix.is_empty() {
        return Ok(vec![AddressInterval::full()]);
    }
    if prefix.len() == 1 {
        // base case: the slot strip between consecutive translates
        let p = prefix[0];
        return Ok(vec![AddressInterval {
            lower: s.translate(p).expect("partition is not infinity"),
            upper: s.translate(p + 1).expect("partition is not infinity"),
        }]);
    }
    let tails = itinerary_interval(s, &prefix[1..], depth_cap)?;
    let p = prefix[0];
    let s0 = match s.slot(0).map_err(|_| CmpUndecided { depth: 0 })? {
        Slot::Fin(v) => v,
        _ => return Err(ItinError::Undecided(CmpUndecided { depth: 0 })),
    };
    let lower_bound = s.translate(p).expect("partition is not infinity");
    let upper_bound = s.translate(p + 1).expect("partition is not infinity");
    let sh = s.shift();

    let mut out = Vec::new();
    if s0.rem_euclid(2) == 1 {
        // half-integer head: a single integer slot c = s0 + p + 1/2 maps the
        // strip onto everything below σ(s) = ∞
        let c_twice = s0 + 2 * p as i128 + 1;
        for iv in &tails {
            out.push(AddressInterval {
                lower: prepend_or_gap(&iv.lower, c_twice, GapSide::Below),
                upper: prepend_or_gap(&iv.upper, c_twice, GapSide::Above),
            });
        }
        return Ok(out);
    }

    // integer head: the strip splits into the slot c (tails above σ(s)) and
    // the slot c+1 (tails below σ(s))
    let c_twice = s0 + 2 * p as i128;
    for iv in &tails {
        // position of σ(s) relative to (lower, upper)
        let above_lower = if iv.is_bounded_below() {
            cmp_lex(&iv.lower, &sh, depth_cap)? == Ordering::Less
        } else {
            true
        };
        let below_upper = if iv.is_bounded_above() {
            cmp_lex(&sh, &iv.upper, depth_cap)? == Ordering::Less
        } else {
            !sh.is_infinity()
        };
        if above_lower && below_upper {
            // σ(s) sits strictly inside: two pieces
            out.push(AddressInterval {
                lower: lower_bound.clone(),
                upper: prepend_or_gap(&iv.upper, c_twice, GapSide::Above),
            });
            out.push(AddressInterval {
                lower: prepend_or_gap(&iv.lower, c_twice + 2, GapSide::Below),
                upper: upper_bound.clone(),
            });
        } else if !above_lower {
            // whole tail interval is ≥ σ(s); boundary coincidence collapses to
            // the strip edge
            let lower = if iv.is_bounded_below()
                && cmp_lex(&iv.lower, &sh, depth_cap)? == Ordering::Equal
            {
                lower_bound.clone()
            } else {
                prepend_or_gap(&iv.lower, c_twice, GapSide::Below)
            };
            out.push(AddressInterval {
                lower,
                upper: prepend_or_gap(&iv.upper, c_twice, GapSide::Above),
            });
        } else {
            // whole tail interval is ≤ σ(s)
            let upper = if iv.is_bounded_above()
                && cmp_lex(&sh, &iv.upper, depth_cap)? == Ordering::Equal
            {
                upper_bound.clone()
            } else {
                prepend_or_gap(&iv.upper, c_twice + 2, GapSide::Above)
            };
            out.push(AddressInterval {
                lower: prepend_or_gap(&iv.lower, c_twice + 2, GapSide::Below),
                upper,
            });
        }
    }
    out.retain(|iv| nonempty(iv, depth_cap));
    if out.is_empty() {
        return Err(ItinError::EmptyRealization);
    }
    Ok(out)
}

enum GapSide {
    Below,
    Above,
}

/// Prepend the slot entry onto an interval endpoint. An unbounded endpoint
/// becomes the half-integer gap point flanking the slot: the supremum of
/// `c·x` over all externals is `(c+½)∞` and the infimum is `(c−½)∞`.
fn prepend_or_gap(end: &ExtendedAddress, c_twice: i128, side: GapSide) -> ExtendedAddress {
    if end.is_infinity() {
        let gap = match side {
            GapSide::Below => c_twice - 1,
            GapSide::Above => c_twice + 1,
        };
        ExtendedAddress::Infinity.prepend_twice(gap)
    } else {
        end.prepend_twice(c_twice)
    }
}

fn nonempty(iv: &AddressInterval, depth_cap: u64) -> bool {
    if !iv.is_bounded_below() || !iv.is_bounded_above() {
        return true;
    }
    matches!(cmp_lex(&iv.lower, &iv.upper, depth_cap), Ok(Ordering::Less))
}

/// Construct `count` distinct eventually periodic addresses strictly inside
/// an open interval. The `spread` parameter varies the free tail entries so
/// repeated calls can produce richer samples.
pub fn sample_in_interval(
    iv: &AddressInterval,
    count: usize,
    depth_cap: u64,
) -> Result<Vec<ExternalAddress>, ItinError> {
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        out.push(sample_one(iv, i as i64, depth_cap)?);
    }
    Ok(out)
}

fn from_head(head: i64, second: i64) -> ExternalAddress {
    ExternalAddress::eventually_periodic(vec![head, second], vec![0]).unwrap()
}

fn sample_one(
    iv: &AddressInterval,
    variant: i64,
    depth_cap: u64,
) -> Result<ExternalAddress, ItinError> {
    let lower = &iv.lower;
    let upper = &iv.upper;
    match (iv.is_bounded_below(), iv.is_bounded_above()) {
        (false, false) => Ok(from_head(variant, 0)),
        (false, true) => {
            // anything with first entry below the upper bound's works
            let u0 = floor_of_slot(upper.slot(0)?)?;
            Ok(from_head(u0 - 1, -variant))
        }
        (true, false) => {
            let l0 = ceil_of_slot(lower.slot(0)?)?;
            Ok(from_head(l0 + 1, variant))
        }
        (true, true) => sample_between(lower, upper, variant, depth_cap),
    }
}

impl From<crate::address::AddressError> for ItinError {
    fn from(_: crate::address::AddressError) -> Self {
        ItinError::Undecided(CmpUndecided { depth: 0 })
    }
}

fn floor_of_slot(s: Slot) -> Result<i64, ItinError> {
    match s {
        Slot::Fin(t) => Ok(t.div_euclid(2) as i64),
        _ => Err(ItinError::Undecided(CmpUndecided { depth: 0 })),
    }
}

fn ceil_of_slot(s: Slot) -> Result<i64, ItinError> {
    match s {
        Slot::Fin(t) => Ok(((t + 1).div_euclid(2)) as i64),
        _ => Err(ItinError::Undecided(CmpUndecided { depth: 0 })),
    }
}

/// An eventually periodic address strictly between `a < b`, decided at the
/// first index where the two bounds differ.
fn sample_between(
    a: &ExtendedAddress,
    b: &ExtendedAddress,
    variant: i64,
    depth_cap: u64,
) -> Result<ExternalAddress, ItinError> {
    debug_assert!(matches!(cmp_lex(a, b, depth_cap), Ok(Ordering::Less)));
    // common exact prefix up to the first differing slot
    let mut prefix: Vec<i64> = Vec::new();
    for n in 0..depth_cap {
        let sa = a.slot(n)?;
        let sb = b.slot(n)?;
        let (ta, tb) = match (sa, sb) {
            (Slot::Fin(x), Slot::Fin(y)) => (x, y),
            (Slot::Fin(x), Slot::Inf) => {
                // integers above x fit under the ∞ tail of b
                let c = x.div_euclid(2) as i64 + 1;
                let tail = tail_above(a, n, c, variant)?;
                prefix.extend(tail);
                return assemble(prefix);
            }
            _ => return Err(ItinError::Undecided(CmpUndecided { depth: n })),
        };
        if ta == tb {
            // identical slots: necessarily an integer entry of both (two
            // intermediates cannot share their final half-integer and differ)
            debug_assert!(ta.rem_euclid(2) == 0);
            prefix.push((ta / 2) as i64);
            continue;
        }
        debug_assert!(ta < tb);
        // integer strictly between the two slots?
        let c_min = ta.div_euclid(2) + 1;
        let c_max = (tb - 1).div_euclid(2);
        if c_min <= c_max {
            let c = c_min + (variant.rem_euclid((c_max - c_min + 1) as i64) as i128);
            prefix.push(c as i64);
            prefix.push(variant);
            return assemble(prefix);
        }
        // adjacent slots: go down one side
        if ta.rem_euclid(2) == 0 {
            // a has an integer entry here and a proper (non-∞) continuation
            let c = (ta / 2) as i64;
            let tail = tail_above(a, n, c, variant)?;
            prefix.extend(tail);
            return assemble(prefix);
        }
        // then b's slot is an integer (adjacent odd/odd pairs have an
        // integer between and were handled above)
        debug_assert!(tb.rem_euclid(2) == 0);
        let c = (tb / 2) as i64;
        let tail = tail_below(b, n, c, variant)?;
        prefix.extend(tail);
        return assemble(prefix);
    }
    Err(ItinError::Undecided(CmpUndecided { depth: depth_cap }))
}

/// Entries `c, e, …` making the result exceed `a` strictly after copying its
/// first `n` entries: keep `a`'s entry `c` at position `n` and exceed its
/// tail at position `n+1`.
fn tail_above(
    a: &ExtendedAddress,
    n: u64,
    c: i64,
    variant: i64,
) -> Result<Vec<i64>, ItinError> {
    let next = a.slot(n + 1)?;
    match next {
        Slot::Fin(t) => {
            let bump = t.div_euclid(2) as i64 + 1 + variant.max(0);
            Ok(vec![c, bump])
        }
        _ => Err(ItinError::Undecided(CmpUndecided { depth: n + 1 })),
    }
}

fn tail_below(
    b: &ExtendedAddress,
    n: u64,
    c: i64,
    variant: i64,
) -> Result<Vec<i64>, ItinError> {
    let next = b.slot(n + 1)?;
    match next {
        Slot::Fin(t) => {
            let drop = ((t + 1).div_euclid(2)) as i64 - 1 - variant.max(0);
            Ok(vec![c, drop])
        }
        _ => Err(ItinError::Undecided(CmpUndecided { depth: n + 1 })),
    }
}

fn assemble(mut prefix: Vec<i64>) -> Result<ExternalAddress, ItinError> {
    prefix.push(0);
    Ok(ExternalAddress::eventually_periodic(prefix, vec![0]).unwrap())
}

/// Result of checking the slow-sharing bound for one pair.
#[derive(Debug, Clone, Serialize)]
pub struct SharingReport {
    pub t_star_r1: CertInterval,
    pub t_star_r2: CertInterval,
    pub bound: f64,
    pub holds: bool,
}

/// Checks the slowness bound for two addresses sharing an itinerary: after
/// the shared window the shift potentials must stay below `t + 2π`, where `t`
/// dominates the partition address's own potential data.
pub fn verify_slow_sharing(
    ctx: &ModelCtx,
    s: &ExtendedAddress,
    r1: &ExternalAddress,
    r2: &ExternalAddress,
    n: usize,
    tol: f64,
    depth_cap: u64,
) -> Result<SharingReport, ItinError> {
    let i1 = itinerary(s, r1, n, depth_cap)?;
    let i2 = itinerary(s, r2, n, depth_cap)?;
    if i1 != i2 {
        return Err(ItinError::PreconditionFailed("itineraries differ".into()));
    }
    match crate::combinatorics::first_difference(r1, r2, depth_cap) {
        Ok(j) if (j as usize) < n => {}
        Ok(_) => {
            return Err(ItinError::PreconditionFailed(
                "addresses agree throughout the shared window".into(),
            ))
        }
        Err(crate::combinatorics::CombiError::EqualAddresses) => {
            return Err(ItinError::PreconditionFailed("addresses are equal".into()));
        }
        Err(_) => return Err(ItinError::Undecided(CmpUndecided { depth: depth_cap })),
    }
    let t = partition_potential(ctx, s, depth_cap)?;
    let bound = t + crate::address::TAU;
    let s1 = t_star(ctx, &r1.shift_n(n as u64), ctx.tstar_depth);
    let s2 = t_star(ctx, &r2.shift_n(n as u64), ctx.tstar_depth);
    let holds = s1.hi <= bound + tol && s2.hi <= bound + tol;
    Ok(SharingReport { t_star_r1: s1, t_star_r2: s2, bound, holds })
}

/// A potential `t` with `2π|sₙ| ≤ Fⁿ(t)` for the partition's entries: the
/// certified upper end of the minimal potential for infinite addresses, or
/// the max of `F^{−n}(2π|sₙ|)` over the finite entries of an intermediate.
fn partition_potential(
    ctx: &ModelCtx,
    s: &ExtendedAddress,
    _depth_cap: u64,
) -> Result<f64, ItinError> {
    match s {
        ExtendedAddress::Infinity => Err(ItinError::InvalidPartition),
        ExtendedAddress::Infinite(a) => Ok(t_min(ctx, a, 1e-9, 512)?.hi),
        ExtendedAddress::Intermediate(ia) => {
            let mut t = 0.0f64;
            for (n, &e) in ia.heads().iter().enumerate() {
                if n == 0 {
                    continue; // entry 0 never enters the potential dynamics
                }
                let y = crate::address::TAU * e.unsigned_abs() as f64;
                t = t.max(crate::model::f_inv_iter(y, n as u64));
            }
            let n_half = ia.heads().len();
            if n_half >= 1 {
                let y = crate::address::TAU * (ia.last_twice().unsigned_abs() as f64 / 2.0);
                t = t.max(crate::model::f_inv_iter(y, n_half as u64));
            }
            Ok(t)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: u64 = 128;

    fn ep(pre: &[i64], per: &[i64]) -> ExternalAddress {
        ExternalAddress::eventually_periodic(pre.to_vec(), per.to_vec()).unwrap()
    }

    fn ext(a: ExternalAddress) -> ExtendedAddress {
        ExtendedAddress::Infinite(a)
    }

    #[test]
    fn itinerary_of_twos_relative_to_ones() {
        let s = ext(ep(&[], &[1]));
        let r = ep(&[], &[2]);
        let it = itinerary(&s, &r, 4, CAP).unwrap();
        assert_eq!(it.entries, vec![1, 1, 1, 1]);
        assert!(!it.star_terminated);
        assert_eq!(it.to_string(), "1 1 1 1");
    }

    #[test]
    fn itinerary_hits_partition() {
        let s = ext(ExternalAddress::zero());
        let r = ExternalAddress::zero();
        assert_eq!(itinerary(&s, &r, 1, CAP), Err(ItinError::HitsPartition(0)));

        let s = ext(ep(&[], &[0, 1]));
        let r = ep(&[], &[1, 0]);
        let it = itinerary(&s, &r, 1, CAP).unwrap();
        assert_eq!(it.entries, vec![0]);
        assert_eq!(itinerary(&s, &r, 2, CAP), Err(ItinError::HitsPartition(1)));
    }

    #[test]
    fn kneading_examples() {
        // period 1: immediate star
        let s = ext(ep(&[], &[1]));
        let k = kneading(&s, 4, CAP).unwrap();
        assert!(k.star_terminated);
        assert!(k.entries.is_empty());
        assert_eq!(k.to_string(), "*");

        // period 2: one entry then star
        let s = ext(ep(&[], &[1, 2]));
        let k = kneading(&s, 8, CAP).unwrap();
        assert!(k.star_terminated);
        assert_eq!(k.entries.len(), 1);
        // σ(s) = (2 1)^inf lies in the slot of translate 0: 1 2 < 2 1 < 2 2
        assert_eq!(k.entries, vec![0]);

        // intermediate address: finite entries then star at ∞
        let s = ExtendedAddress::intermediate(vec![1], 1); // 1 1/2 inf
        let k = kneading(&s, 8, CAP).unwrap();
        assert!(k.star_terminated);
        assert_eq!(k.entries.len(), 1, "k finite entries give k−1 kneading entries");
    }

    #[test]
    fn kneading_entry_counts_match_both_length_conventions() {
        // periodic of period n: n−1 entries before the star
        for per in [vec![1, 2, 3], vec![0, 2], vec![3, -1, 2, 5]] {
            let n = per.len();
            let s = ext(ep(&[], &per));
            let k = kneading(&s, 16, CAP).unwrap();
            assert!(k.star_terminated);
            assert_eq!(k.entries.len(), n - 1);
        }
        // intermediate with k finite entries: k−1 entries before the star,
        // i.e. length−2 counting ∞ and length−1 counting finite entries only
        let s = ExtendedAddress::intermediate(vec![2, 0], 3);
        let k = kneading(&s, 16, CAP).unwrap();
        assert!(k.star_terminated);
        let li = declared_length(&s, LengthConvention::CountInfinity).unwrap();
        let lf = declared_length(&s, LengthConvention::FiniteEntriesOnly).unwrap();
        assert_eq!(k.entries.len(), li - 2);
        assert_eq!(k.entries.len(), lf - 1);
    }

    #[test]
    fn kneading_stars_on_any_translate_hit() {
        // s = 1 0 0 0 …: σ(s) = (0)^inf = (−1) + s, an exact translate hit
        let s = ext(ep(&[1], &[0]));
        let k = kneading(&s, 8, CAP).unwrap();
        assert!(k.star_terminated);
        assert!(k.entries.is_empty());
    }

    #[test]
    fn interval_of_single_entry_prefix() {
        let s = ext(ep(&[], &[1]));
        let ivs = itinerary_interval(&s, &[1], CAP).unwrap();
        assert_eq!(ivs.len(), 1);
        let iv = &ivs[0];
        assert_eq!(iv.lower.to_text(), "2 [1]");
        assert_eq!(iv.upper.to_text(), "3 [1]");
    }

    #[test]
    fn interval_of_empty_prefix_is_full_line() {
        let s = ext(ep(&[], &[1]));
        let ivs = itinerary_interval(&s, &[], CAP).unwrap();
        assert_eq!(ivs.len(), 1);
        assert!(!ivs[0].is_bounded_below());
        assert!(!ivs[0].is_bounded_above());
    }

    #[test]
    fn deeper_prefix_gives_strict_subinterval() {
        let s = ext(ep(&[], &[1]));
        let one = itinerary_interval(&s, &[1], CAP).unwrap();
        let two = itinerary_interval(&s, &[1, 1], CAP).unwrap();
        // every depth-2 interval sits inside the depth-1 interval
        for iv in &two {
            assert_eq!(
                cmp_lex(&one[0].lower, &iv.lower, CAP).unwrap(),
                Ordering::Less
            );
            assert_eq!(cmp_lex(&iv.upper, &one[0].upper, CAP).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn cylinder_consistency_by_sampling() {
        let s = ext(ep(&[], &[1, 2]));
        for prefix in [vec![0], vec![0, 0], vec![1, 0, 1], vec![0, 1, 0, 0]] {
            let ivs = itinerary_interval(&s, &prefix, CAP).unwrap();
            assert!(!ivs.is_empty());
            for iv in &ivs {
                for r in sample_in_interval(iv, 3, CAP).unwrap() {
                    assert!(iv.contains(&r, CAP).unwrap());
                    let it = itinerary(&s, &r, prefix.len(), CAP).unwrap();
                    assert_eq!(it.entries, prefix, "sample {r} of {iv:?}");
                }
            }
        }
    }

    #[test]
    fn distinct_prefixes_have_disjoint_cylinders() {
        let s = ext(ep(&[], &[1, 2]));
        let a = itinerary_interval(&s, &[0, 1], CAP).unwrap();
        let b = itinerary_interval(&s, &[1, 1], CAP).unwrap();
        for ia in &a {
            for ib in &b {
                // disjoint open intervals: one upper ≤ other lower (or vice versa)
                let sep = cmp_lex(&ia.upper, &ib.lower, CAP).unwrap() != Ordering::Greater
                    || cmp_lex(&ib.upper, &ia.lower, CAP).unwrap() != Ordering::Greater;
                assert!(sep);
            }
        }
    }

    #[test]
    fn shift_compatibility_of_itineraries() {
        let s = ext(ep(&[], &[1, 2]));
        let r = ep(&[2, 0], &[3, 1]);
        let full = itinerary(&s, &r, 6, CAP).unwrap();
        let shifted = itinerary(&s, &r.shift(), 5, CAP).unwrap();
        assert_eq!(&full.entries[1..], &shifted.entries[..]);
    }

    #[test]
    fn sharing_preconditions() {
        let c = ModelCtx::default();
        let s = ext(ep(&[], &[1]));
        let r = ep(&[], &[2]);
        let err = verify_slow_sharing(&c, &s, &r, &r, 4, 1e-6, CAP).unwrap_err();
        assert!(matches!(err, ItinError::PreconditionFailed(_)));

        let r2 = ep(&[], &[3]);
        // itineraries differ: (2)^inf gets 1s, (3)^inf gets 2s
        let err = verify_slow_sharing(&c, &s, &r, &r2, 4, 1e-6, CAP).unwrap_err();
        assert!(matches!(err, ItinError::PreconditionFailed(_)));
    }

    #[test]
    fn sharing_bound_holds_for_constructed_pair() {
        let c = ModelCtx::default();
        let s = ext(ep(&[], &[1, 2]));
        let ivs = itinerary_interval(&s, &[0, 0, 0, 0, 0, 0], CAP).unwrap();
        assert!(ivs.len() >= 2, "splitting at σ(s) yields several intervals");
        let a = sample_in_interval(&ivs[0], 1, CAP).unwrap().remove(0);
        let b = sample_in_interval(&ivs[1], 1, CAP).unwrap().remove(0);
        let report = verify_slow_sharing(&c, &s, &a, &b, 6, 1e-6, CAP).unwrap();
        assert!(report.holds, "{report:?}");
    }
}
