//! Unlinkedness of address sets and the wandering-triangle refutation search.
//!
//! Two finite address sets are *unlinked* when each lies inside a single
//! complementary arc of the other in the circular order at infinity. A
//! *wandering triangle of exponential type* would be a 3-element set whose
//! shifted translates are pairwise disjoint and unlinked forever; no such set
//! exists, and [`nwt_search`] verifies this exhaustively at desk scale by
//! refuting every candidate triangle of eventually periodic addresses within
//! given bounds. A refutation horizon is always finite, so "survived" only
//! marks a search boundary, never a positive claim.
//!
//! All exhaustive checks run on eventually periodic addresses, where every
//! comparison is exact.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::address::{cmp_external, CmpUndecided, ExternalAddress};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CombiError {
    #[error("address sets must be disjoint")]
    NotDisjoint,
    #[error("addresses are equal")]
    EqualAddresses,
    #[error("set needs at least {0} distinct members")]
    TooSmall(usize),
    #[error("comparison undecided at depth {}", .0.depth)]
    Undecided(CmpUndecided),
    #[error("search budget exceeded")]
    SearchBudgetExceeded(Box<NwtSummary>),
}

impl From<CmpUndecided> for CombiError {
    fn from(u: CmpUndecided) -> Self {
        CombiError::Undecided(u)
    }
}

/// A finite set of pairwise distinct external addresses.
#[derive(Debug, Clone)]
pub struct AddressSet {
    members: Vec<ExternalAddress>,
}

impl AddressSet {
    /// Validates pairwise distinctness (exact comparison).
    pub fn new(members: Vec<ExternalAddress>, depth_cap: u64) -> Result<Self, CombiError> {
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                if cmp_external(&members[i], &members[j], depth_cap)? == Ordering::Equal {
                    return Err(CombiError::EqualAddresses);
                }
            }
        }
        Ok(AddressSet { members })
    }

    pub fn members(&self) -> &[ExternalAddress] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Shift every member, keeping duplicates (callers check for collapse).
    fn shift_all(&self) -> Vec<ExternalAddress> {
        self.members.iter().map(|a| a.shift()).collect()
    }
}

/// First index at which two distinct addresses differ; exact for eventually
/// periodic pairs.
pub fn first_difference(
    r1: &ExternalAddress,
    r2: &ExternalAddress,
    depth_cap: u64,
) -> Result<u64, CombiError> {
    if cmp_external(r1, r2, depth_cap)? == Ordering::Equal {
        return Err(CombiError::EqualAddresses);
    }
    let bound = match (r1.cycle_data(), r2.cycle_data()) {
        (Some((pa, qa)), Some((pb, qb))) => (pa.max(pb) + qa / gcd(qa, qb) * qb) as u64,
        _ => depth_cap,
    };
    for n in 0..bound {
        let ea = r1.entry_value(n).map_err(|_| CmpUndecided { depth: n })?;
        let eb = r2.entry_value(n).map_err(|_| CmpUndecided { depth: n })?;
        if ea != eb {
            return Ok(n);
        }
    }
    Err(CombiError::Undecided(CmpUndecided { depth: bound }))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Largest pairwise first-difference index of a 3-element set.
pub fn triangle_n(t: &AddressSet, depth_cap: u64) -> Result<u64, CombiError> {
    if t.len() < 3 {
        return Err(CombiError::TooSmall(3));
    }
    let mut best = 0;
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            best = best.max(first_difference(&t.members[i], &t.members[j], depth_cap)?);
        }
    }
    Ok(best)
}

/// Whether `a` lies in a single complementary arc of `b` on the circle closed
/// at `∞` (equivalently, `b` in a single arc of `a`; the implementation checks
/// the first form, tests assert the symmetry).
pub fn unlinked(a: &AddressSet, b: &AddressSet, depth_cap: u64) -> Result<bool, CombiError> {
    if a.is_empty() || b.is_empty() {
        return Err(CombiError::TooSmall(1));
    }
    for x in &a.members {
        for y in &b.members {
            if cmp_external(x, y, depth_cap)? == Ordering::Equal {
                return Err(CombiError::NotDisjoint);
            }
        }
    }
    unlinked_unchecked(&a.members, &b.members, depth_cap)
}

/// Arc test without the disjointness validation (callers that already know
/// the sets are disjoint).
fn unlinked_unchecked(
    a: &[ExternalAddress],
    b: &[ExternalAddress],
    depth_cap: u64,
) -> Result<bool, CombiError> {
    // sort b ascending; the k points cut the circle into k arcs, where the
    // slots "below all" and "above all" wrap into one arc through ∞
    let mut order: Vec<usize> = (0..b.len()).collect();
    let mut cmp_err = None;
    order.sort_by(|&i, &j| match cmp_external(&b[i], &b[j], depth_cap) {
        Ok(o) => o,
        Err(u) => {
            cmp_err.get_or_insert(u);
            Ordering::Equal
        }
    });
    if let Some(u) = cmp_err {
        return Err(CombiError::Undecided(u));
    }
    let k = b.len();
    let mut arc_of_first: Option<usize> = None;
    for x in a {
        let mut below = 0usize;
        for &i in &order {
            match cmp_external(&b[i], x, depth_cap)? {
                Ordering::Less => below += 1,
                Ordering::Greater => break,
                Ordering::Equal => return Err(CombiError::NotDisjoint),
            }
        }
        let arc = below % k;
        match arc_of_first {
            None => arc_of_first = Some(arc),
            Some(first) if first != arc => return Ok(false),
            _ => {}
        }
    }
    Ok(true)
}

/// Why a wandering candidate was refuted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RefutationKind {
    /// some shift of the set has fewer than 3 distinct members
    Collapsed,
    /// two shifted translates intersect
    NotDisjoint,
    /// two shifted translates are linked
    Linked,
}

/// Witness for a refuted candidate: the two shifted translates
/// `σ^{n1}(T) + m1` and `σ^{n2}(T) + m2` that clash.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RefutationWitness {
    pub n1: u64,
    pub m1: i64,
    pub n2: u64,
    pub m2: i64,
    pub kind: RefutationKind,
}

#[derive(Debug, Clone, Serialize)]
pub struct RefutationReport {
    pub refuted_at: Option<RefutationWitness>,
    pub horizon: u64,
    pub survived: bool,
}

impl RefutationReport {
    /// Shift depth at which the refutation was found.
    pub fn depth(&self) -> Option<u64> {
        self.refuted_at.map(|w| w.n1.max(w.n2))
    }
}

/// Tests whether a 3-element set could be a wandering triangle of exponential
/// type up to the horizon: every pair of shifted translates
/// `σ^{n1}(T)+m1 ≠ σ^{n2}(T)+m2` with `n ≤ horizon`, `|m| ≤ translate_window`
/// must be disjoint and unlinked, and no shift may collapse the set. The
/// first violation (in order of increasing `n2`, then `n1`, `m1`, `m2`) is
/// returned as the witness.
pub fn wandering_candidate(
    t: &AddressSet,
    horizon: u64,
    translate_window: i64,
    depth_cap: u64,
) -> Result<RefutationReport, CombiError> {
    if t.len() != 3 {
        return Err(CombiError::TooSmall(3));
    }
    let w = translate_window.max(0);

    // shifted sets up to the horizon, as plain member vectors
    let mut shifts: Vec<Vec<ExternalAddress>> = vec![t.members.to_vec()];
    for _ in 0..horizon {
        let prev = AddressSet { members: shifts.last().unwrap().clone() };
        shifts.push(prev.shift_all());
    }

    let translated = |n: u64, m: i64| -> Result<Vec<ExternalAddress>, CombiError> {
        shifts[n as usize]
            .iter()
            .map(|a| a.translate(m).map_err(|_| CombiError::Undecided(CmpUndecided { depth: 0 })))
            .collect()
    };

    let refute = |witness: RefutationWitness| -> Result<RefutationReport, CombiError> {
        Ok(RefutationReport { refuted_at: Some(witness), horizon, survived: false })
    };

    for n2 in 0..=horizon {
        // collapse check at the newly exposed shift depth
        if !distinct(&shifts[n2 as usize], depth_cap)? {
            return refute(RefutationWitness {
                n1: n2,
                m1: 0,
                n2,
                m2: 0,
                kind: RefutationKind::Collapsed,
            });
        }
        for n1 in 0..=n2 {
            for m1 in -w..=w {
                let lo2 = if n1 == n2 { m1 + 1 } else { -w };
                for m2 in lo2..=w {
                    let a = translated(n1, m1)?;
                    let b = translated(n2, m2)?;
                    if !pair_disjoint(&a, &b, depth_cap)? {
                        return refute(RefutationWitness {
                            n1,
                            m1,
                            n2,
                            m2,
                            kind: RefutationKind::NotDisjoint,
                        });
                    }
                    if !unlinked_unchecked(&a, &b, depth_cap)?
                        || !unlinked_unchecked(&b, &a, depth_cap)?
                    {
                        return refute(RefutationWitness {
                            n1,
                            m1,
                            n2,
                            m2,
                            kind: RefutationKind::Linked,
                        });
                    }
                }
            }
        }
    }
    Ok(RefutationReport { refuted_at: None, horizon, survived: true })
}

fn distinct(members: &[ExternalAddress], depth_cap: u64) -> Result<bool, CombiError> {
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if cmp_external(&members[i], &members[j], depth_cap)? == Ordering::Equal {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn pair_disjoint(
    a: &[ExternalAddress],
    b: &[ExternalAddress],
    depth_cap: u64,
) -> Result<bool, CombiError> {
    for x in a {
        for y in b {
            if cmp_external(x, y, depth_cap)? == Ordering::Equal {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Bounds for the exhaustive triangle search.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NwtBounds {
    /// entry magnitudes of the pool addresses
    pub entry_bound: u64,
    /// period length
    pub period_bound: usize,
    /// preperiod length
    pub preperiod_bound: usize,
    pub horizon: u64,
    pub translate_window: i64,
    /// optional cap on the number of triangles tested
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct NwtSummary {
    pub tested: u64,
    pub refuted: u64,
    pub survivors: u64,
    pub max_refutation_depth: u64,
    /// first few refutation witnesses in enumeration order
    pub witnesses_sample: Vec<RefutationWitness>,
    /// textual members of any surviving triangles (should stay empty)
    pub survivor_sample: Vec<Vec<String>>,
}

/// All canonical eventually periodic addresses with `|entries| ≤ m`,
/// period length ≤ `p`, preperiod length ≤ `l`, sorted lexicographically.
pub fn address_pool(m: u64, p: usize, l: usize) -> Vec<ExternalAddress> {
    let vals: Vec<i64> = (-(m as i64)..=m as i64).collect();
    let mut seen: HashSet<(Vec<i64>, Vec<i64>)> = HashSet::new();
    let mut pool = Vec::new();
    let mut per_words: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..p {
        let mut next = Vec::new();
        for w in &per_words {
            for &v in &vals {
                let mut w2 = w.clone();
                w2.push(v);
                next.push(w2);
            }
        }
        for w in &next {
            for pre in preperiod_words(&vals, l) {
                let a = ExternalAddress::eventually_periodic(pre, w.clone()).unwrap();
                let key = {
                    let (x, y) = a.periodic_structure().unwrap();
                    (x.to_vec(), y.to_vec())
                };
                if seen.insert(key) {
                    pool.push(a);
                }
            }
        }
        per_words = next;
    }
    pool.sort_by(|a, b| cmp_external(a, b, 64).expect("exact"));
    pool
}

fn preperiod_words(vals: &[i64], l: usize) -> Vec<Vec<i64>> {
    let mut words: Vec<Vec<i64>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..l {
        let mut next = Vec::new();
        for w in &frontier {
            for &v in vals {
                let mut w2 = w.clone();
                w2.push(v);
                next.push(w2);
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    words
}

/// Exhaustive refutation search over every triangle of pool addresses, up to
/// translation (each triangle is normalized so its least member starts with
/// entry 0). Any survivor within the horizon is reported — the absence of
/// wandering triangles predicts there are none.
pub fn nwt_search(bounds: &NwtBounds) -> Result<NwtSummary, CombiError> {
    const DEPTH_CAP: u64 = 64;
    let pool = address_pool(bounds.entry_bound, bounds.period_bound, bounds.preperiod_bound);
    let n = pool.len();

    // normalized triangles, deduped after translation
    let mut triangles: Vec<[ExternalAddress; 3]> = Vec::new();
    let mut seen: HashSet<Vec<(Vec<i64>, Vec<i64>)>> = HashSet::new();
    for i in 0..n {
        let shift0 = -pool[i].entry(0).expect("pool entries are exact");
        for j in i + 1..n {
            for k in j + 1..n {
                let tri = [
                    pool[i].translate(shift0).unwrap(),
                    pool[j].translate(shift0).unwrap(),
                    pool[k].translate(shift0).unwrap(),
                ];
                let key: Vec<(Vec<i64>, Vec<i64>)> = tri
                    .iter()
                    .map(|a| {
                        let (x, y) = a.periodic_structure().unwrap();
                        (x.to_vec(), y.to_vec())
                    })
                    .collect();
                if seen.insert(key) {
                    triangles.push(tri);
                }
            }
        }
    }

    let budget = bounds.budget.unwrap_or(u64::MAX);
    let tested = AtomicU64::new(0);
    let exhausted = AtomicU64::new(0);

    struct Partial {
        refuted: u64,
        max_depth: u64,
        witnesses: Vec<(usize, RefutationWitness)>,
        survivors: Vec<(usize, Vec<String>)>,
    }

    let partial = triangles
        .par_iter()
        .enumerate()
        .map(|(idx, tri)| {
            if exhausted.load(AtomicOrdering::Relaxed) != 0 {
                return Partial { refuted: 0, max_depth: 0, witnesses: Vec::new(), survivors: Vec::new() };
            }
            let before = tested.fetch_add(1, AtomicOrdering::Relaxed);
            if before >= budget {
                exhausted.store(1, AtomicOrdering::Relaxed);
                tested.fetch_sub(1, AtomicOrdering::Relaxed);
                return Partial { refuted: 0, max_depth: 0, witnesses: Vec::new(), survivors: Vec::new() };
            }
            let set = AddressSet { members: tri.to_vec() };
            let report = wandering_candidate(
                &set,
                bounds.horizon,
                bounds.translate_window,
                DEPTH_CAP,
            )
            .expect("exact addresses cannot stall");
            match report.refuted_at {
                Some(w) => Partial {
                    refuted: 1,
                    max_depth: report.depth().unwrap_or(0),
                    witnesses: vec![(idx, w)],
                    survivors: Vec::new(),
                },
                None => Partial {
                    refuted: 0,
                    max_depth: 0,
                    witnesses: Vec::new(),
                    survivors: vec![(idx, tri.iter().map(|a| a.to_text()).collect())],
                },
            }
        })
        .reduce(
            || Partial { refuted: 0, max_depth: 0, witnesses: Vec::new(), survivors: Vec::new() },
            |mut a, mut b| {
                a.refuted += b.refuted;
                a.max_depth = a.max_depth.max(b.max_depth);
                a.witnesses.append(&mut b.witnesses);
                a.survivors.append(&mut b.survivors);
                a
            },
        );

    let mut witnesses = partial.witnesses;
    witnesses.sort_by_key(|(idx, _)| *idx);
    let mut survivors = partial.survivors;
    survivors.sort_by_key(|(idx, _)| *idx);

    let summary = NwtSummary {
        tested: tested.load(AtomicOrdering::Relaxed),
        refuted: partial.refuted,
        survivors: survivors.len() as u64,
        max_refutation_depth: partial.max_depth,
        witnesses_sample: witnesses.into_iter().take(5).map(|(_, w)| w).collect(),
        survivor_sample: survivors.into_iter().take(5).map(|(_, t)| t).collect(),
    };
    if exhausted.load(AtomicOrdering::Relaxed) != 0 {
        return Err(CombiError::SearchBudgetExceeded(Box::new(summary)));
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const CAP: u64 = 64;

    fn ep(pre: &[i64], per: &[i64]) -> ExternalAddress {
        ExternalAddress::eventually_periodic(pre.to_vec(), per.to_vec()).unwrap()
    }

    fn set(addrs: &[ExternalAddress]) -> AddressSet {
        AddressSet::new(addrs.to_vec(), CAP).unwrap()
    }

    fn consts(ks: &[i64]) -> Vec<ExternalAddress> {
        ks.iter().map(|&k| ep(&[], &[k])).collect()
    }

    #[test]
    fn unlinked_separated_blocks() {
        let a = set(&consts(&[0, 1]));
        let b = set(&consts(&[5, 6]));
        assert!(unlinked(&a, &b, CAP).unwrap());
        assert!(unlinked(&b, &a, CAP).unwrap());
    }

    #[test]
    fn linked_interleaved_blocks() {
        let a = set(&consts(&[0, 6]));
        let b = set(&consts(&[3, 9]));
        assert!(!unlinked(&a, &b, CAP).unwrap());
        assert!(!unlinked(&b, &a, CAP).unwrap());
    }

    #[test]
    fn singleton_is_always_unlinked() {
        let a = set(&consts(&[0]));
        let b = set(&consts(&[3, 9, -4]));
        assert!(unlinked(&a, &b, CAP).unwrap());
    }

    #[test]
    fn overlap_is_an_error() {
        let a = set(&consts(&[0, 3]));
        let b = set(&consts(&[3, 9]));
        assert_eq!(unlinked(&a, &b, CAP), Err(CombiError::NotDisjoint));
    }

    #[test]
    fn first_difference_examples() {
        assert_eq!(first_difference(&ep(&[], &[0]), &ep(&[], &[1]), CAP).unwrap(), 0);
        assert_eq!(
            first_difference(&ep(&[], &[1, 2, 3]), &ep(&[], &[1, 2, 4]), CAP).unwrap(),
            2
        );
        assert_eq!(
            first_difference(&ep(&[], &[1]), &ep(&[1, 1, 1], &[2]), CAP).unwrap(),
            3
        );
        assert_eq!(
            first_difference(&ep(&[], &[1]), &ep(&[1], &[1]), CAP),
            Err(CombiError::EqualAddresses)
        );
    }

    #[test]
    fn triangle_n_examples() {
        let t = set(&consts(&[0, 1, 2]));
        assert_eq!(triangle_n(&t, CAP).unwrap(), 0);
        let t = set(&[ep(&[], &[0]), ep(&[0, 1], &[0]), ep(&[0, 2], &[0])]);
        assert_eq!(triangle_n(&t, CAP).unwrap(), 1);
        assert!(AddressSet::new(vec![ep(&[], &[0]), ep(&[0], &[0])], CAP).is_err());
    }

    #[test]
    fn constant_triangle_is_refuted_by_repetition() {
        let t = set(&consts(&[0, 1, 2]));
        let report = wandering_candidate(&t, 4, 2, CAP).unwrap();
        let w = report.refuted_at.expect("must refute");
        assert!(!report.survived);
        // fixed addresses already clash between shift 0 and shift 1
        assert!(w.n1.max(w.n2) <= 1);
    }

    #[test]
    fn eventually_periodic_triangles_are_refuted_within_cycle_bound() {
        let t = set(&[ep(&[], &[0, 1]), ep(&[1], &[2, 0]), ep(&[], &[2])]);
        // horizon covers preperiod + lcm of periods, so repetition is forced
        let report = wandering_candidate(&t, 8, 2, CAP).unwrap();
        assert!(!report.survived);
    }

    #[test]
    fn self_translate_bound_for_unlinked_sets() {
        // a set unlinked from its own translates has all pairwise entries
        // within 1: r2 < r1 + 1 for all members
        let t = set(&[ep(&[], &[0, 1]), ep(&[], &[0, 2]), ep(&[], &[1, 0])]);
        let t_plus = AddressSet::new(
            t.members().iter().map(|a| a.translate(1).unwrap()).collect(),
            CAP,
        )
        .unwrap();
        assert!(unlinked(&t, &t_plus, CAP).unwrap());
        for r1 in t.members() {
            let bound = r1.translate(1).unwrap();
            for r2 in t.members() {
                assert_eq!(cmp_external(r2, &bound, CAP).unwrap(), Ordering::Less);
            }
        }
    }

    #[test]
    fn pool_is_canonical_and_sorted() {
        let pool = address_pool(1, 2, 0);
        // 3 constant addresses plus 6 primitive 2-periodic words
        assert_eq!(pool.len(), 9);
        for w in pool.windows(2) {
            assert_eq!(cmp_external(&w[0], &w[1], CAP).unwrap(), Ordering::Less);
        }
    }

    #[test]
    fn zero_entry_bound_is_vacuous() {
        let b = NwtBounds {
            entry_bound: 0,
            period_bound: 2,
            preperiod_bound: 1,
            horizon: 4,
            translate_window: 2,
            budget: None,
        };
        let s = nwt_search(&b).unwrap();
        assert_eq!(s.tested, 0);
        assert_eq!(s.survivors, 0);
    }

    #[test]
    fn small_search_refutes_everything() {
        let b = NwtBounds {
            entry_bound: 1,
            period_bound: 2,
            preperiod_bound: 0,
            horizon: 8,
            translate_window: 2,
            budget: None,
        };
        let s = nwt_search(&b).unwrap();
        assert!(s.tested > 0);
        assert_eq!(s.survivors, 0, "survivors: {:?}", s.survivor_sample);
        assert_eq!(s.refuted, s.tested);
    }

    #[test]
    fn budget_produces_partial_summary() {
        let b = NwtBounds {
            entry_bound: 1,
            period_bound: 2,
            preperiod_bound: 0,
            horizon: 8,
            translate_window: 2,
            budget: Some(3),
        };
        match nwt_search(&b) {
            Err(CombiError::SearchBudgetExceeded(partial)) => {
                assert!(partial.tested <= 3);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn unlinked_is_symmetric(xs in proptest::collection::hash_set(-6i64..=6, 2..4),
                                 ys in proptest::collection::hash_set(-6i64..=6, 2..4)) {
            let xs: Vec<i64> = xs.into_iter().collect();
            let ys: Vec<i64> = ys.into_iter().filter(|v| !xs.contains(v)).collect();
            prop_assume!(ys.len() >= 2);
            let a = set(&consts(&xs));
            let b = set(&consts(&ys));
            prop_assert_eq!(unlinked(&a, &b, CAP).unwrap(), unlinked(&b, &a, CAP).unwrap());
        }

        #[test]
        fn unlinkedness_is_translation_invariant(
            xs in proptest::collection::hash_set(-5i64..=5, 2..4),
            ys in proptest::collection::hash_set(-5i64..=5, 2..4),
            m in -3i64..=3
        ) {
            let xs: Vec<i64> = xs.into_iter().collect();
            let ys: Vec<i64> = ys.into_iter().filter(|v| !xs.contains(v)).collect();
            prop_assume!(ys.len() >= 2);
            let a = set(&consts(&xs));
            let b = set(&consts(&ys));
            let ta = AddressSet::new(
                a.members().iter().map(|x| x.translate(m).unwrap()).collect(), CAP).unwrap();
            let tb = AddressSet::new(
                b.members().iter().map(|x| x.translate(m).unwrap()).collect(), CAP).unwrap();
            prop_assert_eq!(unlinked(&a, &b, CAP).unwrap(), unlinked(&ta, &tb, CAP).unwrap());
        }
    }
}
