//! External and intermediate external addresses.
//!
//! An external address is a one-sided infinite integer sequence
//! `s = s₀ s₁ s₂ …`. We only represent addresses with a finite descriptor:
//! either eventually periodic data (exact arithmetic, decidable comparison)
//! or a deterministic generator rule with a declared growth class
//! (comparisons are depth-capped and report [`CmpUndecided`] rather than
//! guessing).
//!
//! Intermediate external addresses are finite sequences ending in `∞` whose
//! last finite entry is a half-integer; they fill the order gaps between
//! infinite addresses. The bare address `∞` is not constructible as an
//! intermediate value; it only occurs as the shift of a length-2 intermediate
//! address and is represented by [`ExtendedAddress::Infinity`].
//!
//! Ordering convention: the `∞` tail compares strictly greater than every
//! integer and half-integer entry, so `∞` is the maximum of the linear order,
//! and the circular order on the address space closes at `∞`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// 2π, the horizontal translation length of `e^z`.
pub const TAU: f64 = std::f64::consts::TAU;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AddressError {
    #[error("period of an eventually periodic address must be nonempty")]
    EmptyPeriod,
    #[error("generated address violates its declared growth bound at index {index}")]
    GrowthBoundViolated { index: u64 },
    #[error("entry at index {index} exceeds the machine integer range")]
    EntryTooLarge { index: u64 },
    #[error("the infinity address has no entries to translate")]
    TranslateInfinity,
    #[error("first entry is not a machine integer; cannot translate")]
    HeadNotTranslatable,
}

/// Outcome of a depth-capped comparison that could not be decided.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("comparison undecided after {depth} entries")]
pub struct CmpUndecided {
    pub depth: u64,
}

/// A single sequence entry. Generator rules may produce entries whose
/// magnitude exceeds `i64`; those carry `ln(2π·|entry|)` so that potential
/// arithmetic can continue in log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Entry {
    Int(i64),
    Huge { positive: bool, ln_2pi_abs: f64 },
}

impl Entry {
    /// Natural log of `2π·|entry|`; `-∞` for the entry 0.
    pub fn ln_2pi_abs(&self) -> f64 {
        match *self {
            Entry::Int(0) => f64::NEG_INFINITY,
            Entry::Int(v) => (TAU * (v.unsigned_abs() as f64)).ln(),
            Entry::Huge { ln_2pi_abs, .. } => ln_2pi_abs,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match *self {
            Entry::Int(v) => Some(v),
            Entry::Huge { .. } => None,
        }
    }

    fn is_zero(&self) -> bool {
        matches!(self, Entry::Int(0))
    }
}

/// Declared growth class of a generated address. The tail bounds used by the
/// potential computations rely on this declaration; violations observed on
/// materialized entries are hard errors.
///
/// `IteratedExponential { valid_from }` declares `|sₙ| ≥ 1` and
/// `2π|sₙ₊₁| ≤ F(2π|sₙ|) + 2π` for all `n ≥ valid_from`. The built-in
/// `s_{k+1} = 2^{s_k}` rule satisfies it from index 1; flanking-sequence
/// generators from the first generated index. `Unbounded` promises nothing;
/// upper potential bounds degrade to `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeclaredGrowth {
    Bounded(u64),
    IteratedExponential { valid_from: u64 },
    Unbounded,
}

impl DeclaredGrowth {
    /// How the declaration transforms when the first `n` entries are dropped.
    fn shifted(self, n: u64) -> Self {
        match self {
            DeclaredGrowth::IteratedExponential { valid_from } => {
                DeclaredGrowth::IteratedExponential {
                    valid_from: valid_from.saturating_sub(n).max(1),
                }
            }
            other => other,
        }
    }
}

/// A deterministic index → entry rule backing a generated address.
///
/// Rules must be total and pure; memoization, when a rule needs it, is the
/// rule's own responsibility (internally synchronized).
pub trait GeneratorRule: Send + Sync {
    fn entry(&self, n: u64) -> Entry;

    /// `ln(2π·|sₙ|)`, allowed to be finite even when the integer entry
    /// overflows. The default derives it from `entry`.
    fn ln_2pi_abs(&self, n: u64) -> f64 {
        self.entry(n).ln_2pi_abs()
    }

    /// Printable label, e.g. `gen:iterexp:3`.
    fn label(&self) -> String;
}

/// Built-in iterated exponential generator: `s₀ = seed`, `s_{k+1} = 2^{s_k}`.
pub struct IterExpRule {
    seed: u32,
}

impl IterExpRule {
    pub fn new(seed: u32) -> Self {
        IterExpRule { seed }
    }

    /// log2(sₙ), saturating to +∞; note log2(s_{k+1}) = s_k.
    fn log2_entry(&self, n: u64) -> f64 {
        let mut l = (self.seed as f64).log2();
        for _ in 0..n {
            l = l.exp2();
        }
        l
    }
}

impl GeneratorRule for IterExpRule {
    fn entry(&self, n: u64) -> Entry {
        let mut v: i64 = self.seed as i64;
        for _ in 0..n {
            if v > 62 {
                return Entry::Huge { positive: true, ln_2pi_abs: self.ln_2pi_abs(n) };
            }
            v = 1i64 << v;
        }
        Entry::Int(v)
    }

    fn ln_2pi_abs(&self, n: u64) -> f64 {
        if self.seed == 0 && n == 0 {
            return f64::NEG_INFINITY;
        }
        TAU.ln() + self.log2_entry(n) * std::f64::consts::LN_2
    }

    fn label(&self) -> String {
        format!("gen:iterexp:{}", self.seed)
    }
}

/// View of an inner rule with the first `offset` entries dropped.
struct ShiftRule {
    inner: Arc<dyn GeneratorRule>,
    offset: u64,
}

impl GeneratorRule for ShiftRule {
    fn entry(&self, n: u64) -> Entry {
        self.inner.entry(n + self.offset)
    }
    fn ln_2pi_abs(&self, n: u64) -> f64 {
        self.inner.ln_2pi_abs(n + self.offset)
    }
    fn label(&self) -> String {
        format!("{}~shift{}", self.inner.label(), self.offset)
    }
}

/// Inner rule with finitely many entries overridden.
struct PatchRule {
    inner: Arc<dyn GeneratorRule>,
    patches: Vec<(u64, Entry)>,
}

impl PatchRule {
    fn lookup(&self, n: u64) -> Option<Entry> {
        self.patches.iter().find(|(k, _)| *k == n).map(|(_, e)| *e)
    }
}

impl GeneratorRule for PatchRule {
    fn entry(&self, n: u64) -> Entry {
        self.lookup(n).unwrap_or_else(|| self.inner.entry(n))
    }
    fn ln_2pi_abs(&self, n: u64) -> f64 {
        match self.lookup(n) {
            Some(e) => e.ln_2pi_abs(),
            None => self.inner.ln_2pi_abs(n),
        }
    }
    fn label(&self) -> String {
        format!("{}~patched", self.inner.label())
    }
}

/// One entry prepended in front of an inner rule.
struct PrependRule {
    head: i64,
    inner: Arc<dyn GeneratorRule>,
}

impl GeneratorRule for PrependRule {
    fn entry(&self, n: u64) -> Entry {
        if n == 0 {
            Entry::Int(self.head)
        } else {
            self.inner.entry(n - 1)
        }
    }
    fn ln_2pi_abs(&self, n: u64) -> f64 {
        if n == 0 {
            Entry::Int(self.head).ln_2pi_abs()
        } else {
            self.inner.ln_2pi_abs(n - 1)
        }
    }
    fn label(&self) -> String {
        format!("{}~pre{}", self.inner.label(), self.head)
    }
}

#[derive(Clone)]
enum Repr {
    /// `pre ++ period^∞`, kept in canonical form (primitive period, minimal
    /// preperiod). All exact arithmetic lives here.
    Periodic { pre: Arc<[i64]>, per: Arc<[i64]> },
    Generated { rule: Arc<dyn GeneratorRule>, growth: DeclaredGrowth },
}

/// An infinite external address with a finite descriptor.
///
/// Values are immutable after construction and cheap to clone; they can be
/// shared freely across threads.
#[derive(Clone)]
pub struct ExternalAddress {
    repr: Repr,
}

impl fmt::Debug for ExternalAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExternalAddress({})", self.to_text())
    }
}

impl PartialEq for ExternalAddress {
    /// Exact equality. Decidable for two eventually periodic addresses;
    /// generated addresses are equal only if they share the same rule object.
    fn eq(&self, other: &Self) -> bool {
        match (&self.repr, &other.repr) {
            (Repr::Periodic { pre: a, per: b }, Repr::Periodic { pre: c, per: d }) => {
                a == c && b == d
            }
            (Repr::Generated { rule: a, .. }, Repr::Generated { rule: b, .. }) => {
                Arc::ptr_eq(a, b)
            }
            _ => false,
        }
    }
}

impl Eq for ExternalAddress {}

impl std::hash::Hash for ExternalAddress {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match &self.repr {
            Repr::Periodic { pre, per } => {
                pre.hash(state);
                per.hash(state);
            }
            Repr::Generated { rule, .. } => {
                (Arc::as_ptr(rule) as *const () as usize).hash(state);
            }
        }
    }
}

/// Canonical form: primitive period, and no preperiod tail that merely
/// repeats the period (`1 0 0 [0] ≡ 1 [0]`, `x [y z] with x == z ≡ [z y]`
/// prefixed accordingly).
fn canonicalize(mut pre: Vec<i64>, mut per: Vec<i64>) -> (Vec<i64>, Vec<i64>) {
    // primitive period: smallest divisor d with per = per[..d] repeated
    let n = per.len();
    for d in 1..=n {
        if n % d == 0 && per.chunks(d).all(|c| c == &per[..d]) {
            per.truncate(d);
            break;
        }
    }
    // absorb redundant preperiod tail: if the last preperiod entry equals the
    // last period entry, rotate the period right and drop it
    while let Some(&last) = pre.last() {
        if last == *per.last().unwrap() {
            pre.pop();
            let l = per.pop().unwrap();
            per.insert(0, l);
        } else {
            break;
        }
    }
    (pre, per)
}

impl ExternalAddress {
    /// Purely periodic address `(period)^∞`.
    pub fn periodic(period: Vec<i64>) -> Result<Self, AddressError> {
        Self::eventually_periodic(Vec::new(), period)
    }

    pub fn eventually_periodic(pre: Vec<i64>, period: Vec<i64>) -> Result<Self, AddressError> {
        if period.is_empty() {
            return Err(AddressError::EmptyPeriod);
        }
        let (pre, per) = canonicalize(pre, period);
        Ok(ExternalAddress { repr: Repr::Periodic { pre: pre.into(), per: per.into() } })
    }

    /// The constant zero address `(0)^∞`.
    pub fn zero() -> Self {
        Self::periodic(vec![0]).unwrap()
    }

    pub fn generated(rule: Arc<dyn GeneratorRule>, growth: DeclaredGrowth) -> Self {
        ExternalAddress { repr: Repr::Generated { rule, growth } }
    }

    /// Built-in iterated exponential address `gen:iterexp:seed`.
    pub fn iterexp(seed: u32) -> Self {
        Self::generated(
            Arc::new(IterExpRule::new(seed)),
            DeclaredGrowth::IteratedExponential { valid_from: 1 },
        )
    }

    pub fn is_eventually_periodic(&self) -> bool {
        matches!(self.repr, Repr::Periodic { .. })
    }

    pub fn periodic_structure(&self) -> Option<(&[i64], &[i64])> {
        match &self.repr {
            Repr::Periodic { pre, per } => Some((pre, per)),
            Repr::Generated { .. } => None,
        }
    }

    pub fn declared_growth(&self) -> Option<DeclaredGrowth> {
        match &self.repr {
            Repr::Periodic { .. } => None,
            Repr::Generated { growth, .. } => Some(*growth),
        }
    }

    /// Maximum entry magnitude, when one is known exactly (eventually
    /// periodic) or declared (bounded generator).
    pub fn max_abs_entry(&self) -> Option<u64> {
        match &self.repr {
            Repr::Periodic { pre, per } => {
                pre.iter().chain(per.iter()).map(|v| v.unsigned_abs()).max()
            }
            Repr::Generated { growth: DeclaredGrowth::Bounded(m), .. } => Some(*m),
            Repr::Generated { .. } => None,
        }
    }

    /// Raw entry, with the declared growth bound checked lazily.
    pub fn entry_value(&self, n: u64) -> Result<Entry, AddressError> {
        match &self.repr {
            Repr::Periodic { pre, per } => {
                let k = n as usize;
                Ok(Entry::Int(if k < pre.len() {
                    pre[k]
                } else {
                    per[(k - pre.len()) % per.len()]
                }))
            }
            Repr::Generated { rule, growth } => {
                let e = rule.entry(n);
                match growth {
                    DeclaredGrowth::Bounded(m) => match e {
                        Entry::Int(v) if v.unsigned_abs() <= *m => Ok(e),
                        _ => Err(AddressError::GrowthBoundViolated { index: n }),
                    },
                    DeclaredGrowth::IteratedExponential { valid_from } => {
                        if n >= *valid_from && e.is_zero() {
                            return Err(AddressError::GrowthBoundViolated { index: n });
                        }
                        Ok(e)
                    }
                    DeclaredGrowth::Unbounded => Ok(e),
                }
            }
        }
    }

    /// Entry as a machine integer; `s_n` in the sequence.
    pub fn entry(&self, n: u64) -> Result<i64, AddressError> {
        match self.entry_value(n)? {
            Entry::Int(v) => Ok(v),
            Entry::Huge { .. } => Err(AddressError::EntryTooLarge { index: n }),
        }
    }

    /// `ln(2π·|sₙ|)`, finite even for entries beyond the integer range.
    pub fn ln_2pi_abs(&self, n: u64) -> f64 {
        match &self.repr {
            Repr::Periodic { .. } => self.entry_value(n).unwrap().ln_2pi_abs(),
            Repr::Generated { rule, .. } => rule.ln_2pi_abs(n),
        }
    }

    /// Drop the first entry.
    pub fn shift(&self) -> Self {
        match &self.repr {
            Repr::Periodic { pre, per } => {
                let (pre, per) = if pre.is_empty() {
                    let mut p = per.to_vec();
                    p.rotate_left(1);
                    (Vec::new(), p)
                } else {
                    (pre[1..].to_vec(), per.to_vec())
                };
                Self::eventually_periodic(pre, per).unwrap()
            }
            Repr::Generated { rule, growth } => Self::generated(
                Arc::new(ShiftRule { inner: Arc::clone(rule), offset: 1 }),
                growth.shifted(1),
            ),
        }
    }

    pub fn shift_n(&self, n: u64) -> Self {
        match &self.repr {
            Repr::Periodic { .. } => {
                let mut s = self.clone();
                for _ in 0..n {
                    s = s.shift();
                }
                s
            }
            Repr::Generated { rule, growth } => {
                if n == 0 {
                    self.clone()
                } else {
                    Self::generated(
                        Arc::new(ShiftRule { inner: Arc::clone(rule), offset: n }),
                        growth.shifted(n),
                    )
                }
            }
        }
    }

    /// Add `m` to the first entry, leaving all later entries unchanged.
    pub fn translate(&self, m: i64) -> Result<Self, AddressError> {
        if m == 0 {
            return Ok(self.clone());
        }
        let head = self.entry(0).map_err(|_| AddressError::HeadNotTranslatable)?;
        Ok(self.with_entry(0, Entry::Int(head + m)))
    }

    /// Copy of the address with entry `n` replaced.
    pub fn with_entry(&self, n: u64, v: Entry) -> Self {
        match (&self.repr, v) {
            (Repr::Periodic { pre, per }, Entry::Int(val)) => {
                let k = n as usize;
                if k < pre.len() {
                    let mut new_pre = pre.to_vec();
                    new_pre[k] = val;
                    Self::eventually_periodic(new_pre, per.to_vec()).unwrap()
                } else {
                    // materializing past the preperiod consumes period entries,
                    // so the remaining period starts at a rotated phase
                    let mut new_pre: Vec<i64> =
                        (0..=k).map(|i| self.entry(i as u64).unwrap()).collect();
                    new_pre[k] = val;
                    let mut new_per = per.to_vec();
                    new_per.rotate_left((k + 1 - pre.len()) % per.len());
                    Self::eventually_periodic(new_pre, new_per).unwrap()
                }
            }
            (Repr::Periodic { pre, per }, huge) => {
                // a huge patch leaves the exact domain; wrap the periodic
                // data as a rule and patch it, with no growth promise (the
                // patch value need not obey any declared class)
                let rule = Arc::new(PeriodicRule { pre: pre.to_vec(), per: per.to_vec() });
                let patched = Arc::new(PatchRule { inner: rule, patches: vec![(n, huge)] });
                Self::generated(patched, DeclaredGrowth::Unbounded)
            }
            (Repr::Generated { rule, growth }, v) => {
                let growth = match v {
                    Entry::Int(_) => *growth,
                    Entry::Huge { .. } => DeclaredGrowth::Unbounded,
                };
                let patched = Arc::new(PatchRule { inner: Arc::clone(rule), patches: vec![(n, v)] });
                Self::generated(patched, growth)
            }
        }
    }

    /// New address `head · self`.
    pub fn prepend(&self, head: i64) -> Self {
        match &self.repr {
            Repr::Periodic { pre, per } => {
                let mut p = Vec::with_capacity(pre.len() + 1);
                p.push(head);
                p.extend_from_slice(pre);
                Self::eventually_periodic(p, per.to_vec()).unwrap()
            }
            Repr::Generated { rule, growth } => Self::generated(
                Arc::new(PrependRule { head, inner: Arc::clone(rule) }),
                *growth,
            ),
        }
    }

    /// Exact equality where it is decidable.
    pub fn eq_exact(&self, other: &Self) -> Option<bool> {
        match (&self.repr, &other.repr) {
            (Repr::Periodic { .. }, Repr::Periodic { .. }) => Some(self == other),
            (Repr::Generated { rule: a, .. }, Repr::Generated { rule: b, .. })
                if Arc::ptr_eq(a, b) =>
            {
                Some(true)
            }
            _ => None,
        }
    }

    /// Number of leading entries after which the sequence is periodic, and
    /// the period length, when known. Generated addresses report `None`.
    pub fn cycle_data(&self) -> Option<(usize, usize)> {
        self.periodic_structure().map(|(pre, per)| (pre.len(), per.len()))
    }

    pub fn to_text(&self) -> String {
        match &self.repr {
            Repr::Periodic { pre, per } => {
                let per_s: Vec<String> = per.iter().map(|v| v.to_string()).collect();
                if pre.is_empty() {
                    format!("({})^inf", per_s.join(" "))
                } else {
                    let pre_s: Vec<String> = pre.iter().map(|v| v.to_string()).collect();
                    format!("{} [{}]", pre_s.join(" "), per_s.join(" "))
                }
            }
            Repr::Generated { rule, .. } => rule.label(),
        }
    }
}

impl fmt::Display for ExternalAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Eventually periodic data packaged as a generator rule, used when an exact
/// address acquires an out-of-range patched entry.
struct PeriodicRule {
    pre: Vec<i64>,
    per: Vec<i64>,
}

impl GeneratorRule for PeriodicRule {
    fn entry(&self, n: u64) -> Entry {
        let k = n as usize;
        Entry::Int(if k < self.pre.len() {
            self.pre[k]
        } else {
            self.per[(k - self.pre.len()) % self.per.len()]
        })
    }
    fn label(&self) -> String {
        "gen:periodic".to_string()
    }
}

/// An intermediate external address `s₀ … s_{k−1} h ∞` with integer entries
/// `sᵢ` and half-integer `h` (stored as its exact double).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntermediateAddress {
    heads: Vec<i64>,
    /// twice the final finite entry; always odd
    last_twice: i64,
}

impl IntermediateAddress {
    pub fn new(heads: Vec<i64>, last_twice: i64) -> Self {
        assert!(last_twice.rem_euclid(2) == 1, "final entry must be a half-integer");
        IntermediateAddress { heads, last_twice }
    }

    pub fn heads(&self) -> &[i64] {
        &self.heads
    }

    pub fn last_twice(&self) -> i64 {
        self.last_twice
    }

    /// Number of finite entries (integers plus the final half-integer).
    pub fn finite_entries(&self) -> usize {
        self.heads.len() + 1
    }

    /// Length counting the `∞` symbol: `s₀ … s_{n−2} ∞` has length `n`.
    pub fn length(&self) -> usize {
        self.finite_entries() + 1
    }

    pub fn to_text(&self) -> String {
        let mut parts: Vec<String> = self.heads.iter().map(|v| v.to_string()).collect();
        parts.push(format!("{}/2", self.last_twice));
        parts.push("inf".to_string());
        parts.join(" ")
    }
}

/// Points of the completed address space: infinite addresses, intermediate
/// addresses, and the gluing point `∞`.
#[derive(Clone, Debug)]
pub enum ExtendedAddress {
    Infinite(ExternalAddress),
    Intermediate(IntermediateAddress),
    Infinity,
}

impl From<ExternalAddress> for ExtendedAddress {
    fn from(a: ExternalAddress) -> Self {
        ExtendedAddress::Infinite(a)
    }
}

/// Position value at one index, in exact "twice the entry" arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slot {
    /// finite entry, stored as twice its value (even = integer, odd = half-integer)
    Fin(i128),
    HugePos,
    HugeNeg,
    /// the `∞` tail
    Inf,
}

fn cmp_slot(a: Slot, b: Slot, depth: u64) -> Result<Ordering, CmpUndecided> {
    use Slot::*;
    Ok(match (a, b) {
        (Inf, Inf) => Ordering::Equal,
        (Inf, _) => Ordering::Greater,
        (_, Inf) => Ordering::Less,
        (Fin(x), Fin(y)) => x.cmp(&y),
        (HugePos, HugePos) | (HugeNeg, HugeNeg) => return Err(CmpUndecided { depth }),
        (HugePos, _) => Ordering::Greater,
        (_, HugePos) => Ordering::Less,
        (HugeNeg, _) => Ordering::Less,
        (_, HugeNeg) => Ordering::Greater,
    })
}

impl ExtendedAddress {
    pub fn intermediate(heads: Vec<i64>, last_twice: i64) -> Self {
        ExtendedAddress::Intermediate(IntermediateAddress::new(heads, last_twice))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ExtendedAddress::Infinity)
    }

    /// Slot at position `n` (the `∞` tail for every position past the end of
    /// an intermediate address).
    pub fn slot(&self, n: u64) -> Result<Slot, AddressError> {
        Ok(match self {
            ExtendedAddress::Infinity => Slot::Inf,
            ExtendedAddress::Intermediate(ia) => {
                let k = n as usize;
                if k < ia.heads.len() {
                    Slot::Fin(2 * ia.heads[k] as i128)
                } else if k == ia.heads.len() {
                    Slot::Fin(ia.last_twice as i128)
                } else {
                    Slot::Inf
                }
            }
            ExtendedAddress::Infinite(a) => match a.entry_value(n)? {
                Entry::Int(v) => Slot::Fin(2 * v as i128),
                Entry::Huge { positive: true, .. } => Slot::HugePos,
                Entry::Huge { positive: false, .. } => Slot::HugeNeg,
            },
        })
    }

    /// Drop the first entry; a length-2 intermediate address shifts to `∞`.
    pub fn shift(&self) -> Self {
        match self {
            ExtendedAddress::Infinity => ExtendedAddress::Infinity,
            ExtendedAddress::Infinite(a) => ExtendedAddress::Infinite(a.shift()),
            ExtendedAddress::Intermediate(ia) => {
                if ia.heads.is_empty() {
                    ExtendedAddress::Infinity
                } else {
                    ExtendedAddress::Intermediate(IntermediateAddress::new(
                        ia.heads[1..].to_vec(),
                        ia.last_twice,
                    ))
                }
            }
        }
    }

    /// Add `m` to the first entry.
    pub fn translate(&self, m: i64) -> Result<Self, AddressError> {
        match self {
            ExtendedAddress::Infinity => Err(AddressError::TranslateInfinity),
            ExtendedAddress::Infinite(a) => Ok(ExtendedAddress::Infinite(a.translate(m)?)),
            ExtendedAddress::Intermediate(ia) => {
                if ia.heads.is_empty() {
                    Ok(ExtendedAddress::Intermediate(IntermediateAddress::new(
                        Vec::new(),
                        ia.last_twice + 2 * m,
                    )))
                } else {
                    let mut heads = ia.heads.clone();
                    heads[0] += m;
                    Ok(ExtendedAddress::Intermediate(IntermediateAddress::new(
                        heads,
                        ia.last_twice,
                    )))
                }
            }
        }
    }

    /// New address `head · self` where `head_twice` is twice the prepended
    /// entry. Prepending onto `∞` requires a half-integer head.
    pub fn prepend_twice(&self, head_twice: i128) -> Self {
        let head = i64::try_from(head_twice).expect("prepended entry out of range");
        match self {
            ExtendedAddress::Infinity => {
                assert!(head.rem_euclid(2) == 1, "only a half-integer can precede inf");
                ExtendedAddress::Intermediate(IntermediateAddress::new(Vec::new(), head))
            }
            ExtendedAddress::Intermediate(ia) => {
                assert!(head % 2 == 0, "an integer entry must precede a finite tail");
                let mut heads = vec![head / 2];
                heads.extend_from_slice(&ia.heads);
                ExtendedAddress::Intermediate(IntermediateAddress::new(heads, ia.last_twice))
            }
            ExtendedAddress::Infinite(a) => {
                assert!(head % 2 == 0, "an integer entry must precede a finite tail");
                ExtendedAddress::Infinite(a.prepend(head / 2))
            }
        }
    }

    /// Index bound beyond which two exact addresses are entrywise periodic in
    /// lockstep, or `None` when either side is generated.
    fn exact_bound(&self, other: &Self) -> Option<u64> {
        fn data(a: &ExtendedAddress) -> Option<(usize, usize)> {
            match a {
                ExtendedAddress::Infinity => Some((0, 1)),
                ExtendedAddress::Intermediate(ia) => Some((ia.finite_entries(), 1)),
                ExtendedAddress::Infinite(x) => x.cycle_data(),
            }
        }
        let (la, pa) = data(self)?;
        let (lb, pb) = data(other)?;
        let l = la.max(lb) as u64;
        let lcm = (pa / gcd(pa, pb)) as u64 * pb as u64;
        Some(l + lcm)
    }

    pub fn to_text(&self) -> String {
        match self {
            ExtendedAddress::Infinity => "inf".to_string(),
            ExtendedAddress::Infinite(a) => a.to_text(),
            ExtendedAddress::Intermediate(ia) => ia.to_text(),
        }
    }
}

impl fmt::Display for ExtendedAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// Lexicographic comparison with `∞` maximal.
///
/// Exact (never undecided) when both sides are eventually periodic,
/// intermediate or `∞`: entries are scanned up to the preperiod bound plus
/// the lcm of the periods, past which the sequences repeat in lockstep.
/// When a generated address is involved the scan stops at `depth_cap`.
pub fn cmp_lex(
    a: &ExtendedAddress,
    b: &ExtendedAddress,
    depth_cap: u64,
) -> Result<Ordering, CmpUndecided> {
    let bound = a.exact_bound(b);
    let scan = bound.unwrap_or(depth_cap);
    for n in 0..scan {
        let sa = a.slot(n).map_err(|_| CmpUndecided { depth: n })?;
        let sb = b.slot(n).map_err(|_| CmpUndecided { depth: n })?;
        match cmp_slot(sa, sb, n)? {
            Ordering::Equal => continue,
            ord => return Ok(ord),
        }
    }
    if bound.is_some() {
        Ok(Ordering::Equal)
    } else {
        Err(CmpUndecided { depth: scan })
    }
}

/// Comparison of two infinite addresses.
pub fn cmp_external(
    a: &ExternalAddress,
    b: &ExternalAddress,
    depth_cap: u64,
) -> Result<Ordering, CmpUndecided> {
    cmp_lex(
        &ExtendedAddress::Infinite(a.clone()),
        &ExtendedAddress::Infinite(b.clone()),
        depth_cap,
    )
}

/// Orientation of a triple in the circular order obtained from the linear
/// order by gluing at `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    Positive,
    Negative,
    Degenerate,
}

/// Cyclic orientation of `(a, b, c)`: positive iff the triple is a cyclic
/// rotation of an ascending one, degenerate iff two arguments compare equal.
pub fn cyclic_triple(
    a: &ExtendedAddress,
    b: &ExtendedAddress,
    c: &ExtendedAddress,
    depth_cap: u64,
) -> Result<Orientation, CmpUndecided> {
    let ab = cmp_lex(a, b, depth_cap)?;
    let bc = cmp_lex(b, c, depth_cap)?;
    let ca = cmp_lex(c, a, depth_cap)?;
    if ab == Ordering::Equal || bc == Ordering::Equal || ca == Ordering::Equal {
        return Ok(Orientation::Degenerate);
    }
    // ascending runs: a<b<c, b<c<a, c<a<b; each is two Less of the three
    // cyclic comparisons (the third closes the circle with Greater)
    let lts = [ab, bc, ca].iter().filter(|o| **o == Ordering::Less).count();
    Ok(if lts >= 2 { Orientation::Positive } else { Orientation::Negative })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ep(pre: &[i64], per: &[i64]) -> ExternalAddress {
        ExternalAddress::eventually_periodic(pre.to_vec(), per.to_vec()).unwrap()
    }

    fn ext(a: ExternalAddress) -> ExtendedAddress {
        ExtendedAddress::Infinite(a)
    }

    #[test]
    fn entry_of_constant_sequence() {
        assert_eq!(ExternalAddress::zero().entry(5).unwrap(), 0);
    }

    #[test]
    fn entry_of_preperiodic_sequence() {
        // 3 1 2 1 2 ...
        let a = ep(&[3], &[1, 2]);
        assert_eq!(a.entry(0).unwrap(), 3);
        assert_eq!(a.entry(4).unwrap(), 2);
    }

    #[test]
    fn entry_of_iterexp_rule() {
        let a = ExternalAddress::iterexp(1);
        assert_eq!(a.entry(0).unwrap(), 1);
        assert_eq!(a.entry(3).unwrap(), 16);
        assert_eq!(a.entry(4).unwrap(), 65536);
        // 2^65536 exceeds i64 but its log stays available
        assert!(matches!(a.entry_value(5).unwrap(), Entry::Huge { positive: true, .. }));
        let ln = a.ln_2pi_abs(5);
        let expected = TAU.ln() + 65536.0 * std::f64::consts::LN_2;
        assert!((ln - expected).abs() < 1e-6 * expected);
    }

    #[test]
    fn growth_bound_violation_is_reported() {
        struct Bad;
        impl GeneratorRule for Bad {
            fn entry(&self, n: u64) -> Entry {
                Entry::Int(n as i64)
            }
            fn label(&self) -> String {
                "gen:bad".into()
            }
        }
        let a = ExternalAddress::generated(Arc::new(Bad), DeclaredGrowth::Bounded(3));
        assert_eq!(a.entry(3).unwrap(), 3);
        assert!(matches!(
            a.entry(4),
            Err(AddressError::GrowthBoundViolated { index: 4 })
        ));
    }

    #[test]
    fn shift_drops_first_entry() {
        let a = ep(&[1], &[2, 3, 4]);
        let s = a.shift();
        assert_eq!(s.entry(0).unwrap(), 2);
        let periodic = ep(&[], &[1, 2, 3]);
        assert_eq!(periodic.shift().entry(0).unwrap(), 2);
        assert_eq!(periodic.shift().entry(2).unwrap(), 1);
    }

    #[test]
    fn shift_of_intermediates() {
        // (5, 1/2, inf) -> (1/2, inf) -> inf
        let s = ExtendedAddress::intermediate(vec![5], 1);
        let s1 = s.shift();
        match &s1 {
            ExtendedAddress::Intermediate(ia) => {
                assert!(ia.heads().is_empty());
                assert_eq!(ia.last_twice(), 1);
            }
            _ => panic!("expected intermediate"),
        }
        assert!(s1.shift().is_infinity());
    }

    #[test]
    fn translate_changes_only_first_entry() {
        let a = ep(&[], &[1]);
        let t = a.translate(1).unwrap();
        assert_eq!(t.entry(0).unwrap(), 2);
        assert_eq!(t.entry(1).unwrap(), 1);
        let id = ExternalAddress::zero().translate(0).unwrap();
        assert_eq!(id, ExternalAddress::zero());
        let im = ExtendedAddress::intermediate(vec![5], 1).translate(-2).unwrap();
        match im {
            ExtendedAddress::Intermediate(ia) => {
                assert_eq!(ia.heads(), &[3]);
                assert_eq!(ia.last_twice(), 1);
            }
            _ => panic!("expected intermediate"),
        }
    }

    #[test]
    fn cmp_basic_order() {
        let a01 = ext(ep(&[], &[0, 1]));
        let a10 = ext(ep(&[], &[1, 0]));
        assert_eq!(cmp_lex(&a01, &a10, 64).unwrap(), Ordering::Less);
        let ones = ext(ep(&[], &[1]));
        assert_eq!(cmp_lex(&ones, &ones.clone(), 64).unwrap(), Ordering::Equal);
        // 1 1 1 ... < 1 3/2 inf (second entries 1 < 3/2)
        let im = ExtendedAddress::intermediate(vec![1], 3);
        assert_eq!(cmp_lex(&ones, &im, 64).unwrap(), Ordering::Less);
    }

    #[test]
    fn infinity_tail_is_maximal() {
        let big = ext(ep(&[1000000], &[1000000]));
        assert_eq!(cmp_lex(&big, &ExtendedAddress::Infinity, 64).unwrap(), Ordering::Less);
        let im = ExtendedAddress::intermediate(vec![1], 3);
        assert_eq!(cmp_lex(&im, &ExtendedAddress::Infinity, 64).unwrap(), Ordering::Less);
    }

    #[test]
    fn exact_comparison_of_eventually_periodic_pairs() {
        // (1)^inf vs 1 1 1 [2]: differs first at index 3
        let a = ext(ep(&[], &[1]));
        let b = ext(ep(&[1, 1, 1], &[2]));
        assert_eq!(cmp_lex(&a, &b, 4).unwrap(), Ordering::Less);
        // equal sequences with different descriptors
        let c = ext(ep(&[1, 2], &[1, 2]));
        let d = ext(ep(&[], &[1, 2]));
        assert_eq!(cmp_lex(&c, &d, 2).unwrap(), Ordering::Equal);
    }

    #[test]
    fn generated_comparison_is_depth_capped() {
        struct Const(i64);
        impl GeneratorRule for Const {
            fn entry(&self, _n: u64) -> Entry {
                Entry::Int(self.0)
            }
            fn label(&self) -> String {
                format!("gen:const:{}", self.0)
            }
        }
        let a = ext(ExternalAddress::generated(Arc::new(Const(1)), DeclaredGrowth::Bounded(9)));
        let b = ext(
            ExternalAddress::generated(Arc::new(Const(1)), DeclaredGrowth::Bounded(9))
                .with_entry(40, Entry::Int(7)),
        );
        // the two differ only at index 40, far past the cap
        match cmp_lex(&a, &b, 10) {
            Err(CmpUndecided { depth }) => assert_eq!(depth, 10),
            other => panic!("expected undecided, got {other:?}"),
        }
        // different iterexp seeds decide at index 0
        let c = ext(ExternalAddress::iterexp(1));
        let d = ext(ExternalAddress::iterexp(2));
        assert_eq!(cmp_lex(&c, &d, 10).unwrap(), Ordering::Less);
        // huge entries of the same sign cannot be ordered and stay undecided
        let e = ext(ExternalAddress::iterexp(1));
        match cmp_lex(&c, &e, 10) {
            Err(CmpUndecided { .. }) => {}
            Ok(Ordering::Equal) => {} // same rule object short-circuits via exactness? not here
            other => panic!("expected undecided, got {other:?}"),
        }
    }

    #[test]
    fn cyclic_triple_examples() {
        let z = |k: i64| ext(ep(&[], &[k]));
        assert_eq!(
            cyclic_triple(&z(0), &z(1), &z(2), 64).unwrap(),
            Orientation::Positive
        );
        assert_eq!(
            cyclic_triple(&z(2), &z(1), &z(0), 64).unwrap(),
            Orientation::Negative
        );
        assert_eq!(
            cyclic_triple(&z(1), &ExtendedAddress::Infinity, &z(0), 64).unwrap(),
            Orientation::Positive
        );
        assert_eq!(
            cyclic_triple(&z(1), &z(1), &z(0), 64).unwrap(),
            Orientation::Degenerate
        );
    }

    #[test]
    fn canonical_forms_collapse_duplicates() {
        assert_eq!(ep(&[1], &[1]), ep(&[], &[1]));
        assert_eq!(ep(&[], &[1, 2, 1, 2]), ep(&[], &[1, 2]));
        assert_eq!(ep(&[5, 1, 2], &[1, 2]), ep(&[5], &[1, 2]));
    }

    proptest! {
        #[test]
        fn translate_is_monotone(pre in proptest::collection::vec(-5i64..=5, 0..3),
                                 per in proptest::collection::vec(-5i64..=5, 1..4),
                                 m1 in -4i64..=4, m2 in -4i64..=4) {
            prop_assume!(m1 < m2);
            let a = ep(&pre, &per);
            let t1 = ext(a.translate(m1).unwrap());
            let t2 = ext(a.translate(m2).unwrap());
            prop_assert_eq!(cmp_lex(&t1, &t2, 64).unwrap(), Ordering::Less);
        }

        #[test]
        fn shift_of_translate_is_shift(pre in proptest::collection::vec(-5i64..=5, 0..3),
                                       per in proptest::collection::vec(-5i64..=5, 1..4),
                                       m in -4i64..=4) {
            let a = ep(&pre, &per);
            let lhs = a.translate(m).unwrap().shift();
            let rhs = a.shift();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn cmp_is_a_total_order_on_exact_addresses(
            seqs in proptest::collection::vec(
                (proptest::collection::vec(-3i64..=3, 0..3),
                 proptest::collection::vec(-3i64..=3, 1..4)), 3)
        ) {
            let addrs: Vec<ExtendedAddress> =
                seqs.iter().map(|(pre, per)| ext(ep(pre, per))).collect();
            // decided, antisymmetric, transitive
            for x in &addrs {
                for y in &addrs {
                    let xy = cmp_lex(x, y, 8).unwrap();
                    let yx = cmp_lex(y, x, 8).unwrap();
                    prop_assert_eq!(xy, yx.reverse());
                }
            }
            let ab = cmp_lex(&addrs[0], &addrs[1], 8).unwrap();
            let bc = cmp_lex(&addrs[1], &addrs[2], 8).unwrap();
            if ab == Ordering::Less && bc == Ordering::Less {
                prop_assert_eq!(cmp_lex(&addrs[0], &addrs[2], 8).unwrap(), Ordering::Less);
            }
        }

        #[test]
        fn cyclic_triple_rotation_and_swap(
            a in proptest::collection::vec(-3i64..=3, 1..4),
            b in proptest::collection::vec(-3i64..=3, 1..4),
            c in proptest::collection::vec(-3i64..=3, 1..4)
        ) {
            let (a, b, c) = (ext(ep(&[], &a)), ext(ep(&[], &b)), ext(ep(&[], &c)));
            let o = cyclic_triple(&a, &b, &c, 64).unwrap();
            prop_assert_eq!(cyclic_triple(&b, &c, &a, 64).unwrap(), o);
            let swapped = cyclic_triple(&b, &a, &c, 64).unwrap();
            match o {
                Orientation::Positive => prop_assert_eq!(swapped, Orientation::Negative),
                Orientation::Negative => prop_assert_eq!(swapped, Orientation::Positive),
                Orientation::Degenerate => prop_assert_eq!(swapped, Orientation::Degenerate),
            }
        }
    }
}
