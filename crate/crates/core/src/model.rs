//! The growth model for exponential dynamics.
//!
//! The model map acts on pairs `(t, s)` of a potential `t ≥ 0` and an
//! external address `s`:
//!
//! ```text
//! (t, s) ↦ (F(t) − 2π|s₁|, σ(s)),     F(t) = e^t − 1.
//! ```
//!
//! The invariant set consists of the pairs whose forward orbit never acquires
//! a negative potential. For each address the minimal such potential `t_s` is
//! bracketed by `t*_s ≤ t_s ≤ t*_s + 1` where `t*_s = sup_{n≥1} F^{−n}(2π|sₙ|)`,
//! and this module turns that bracket into certified computations:
//!
//! * [`t_star`] evaluates the sup to a given depth and closes the tail with a
//!   bound derived from the address's (declared) growth class;
//! * [`in_j_geq_q`] produces three-valued membership certificates for the
//!   invariant set and its `T ≥ Q` sub-brushes (negative iterate ⇒ outside;
//!   potential exceeding the upper bracket, or a non-decreasing exact cycle
//!   revisit ⇒ inside);
//! * [`t_min`] runs certified bisection between the two certificates.
//!
//! Note that `s₀` never enters the potential dynamics — only `s₁ s₂ …` do.
//! All floating comparisons backing a certificate are inflated by
//! [`ModelCtx::eps`]; a borderline value resolves to `Unknown`, never to a
//! certificate.

use std::sync::{Arc, Mutex};

use serde::Serialize;
use thiserror::Error;

use crate::address::{DeclaredGrowth, Entry, ExternalAddress, GeneratorRule, TAU};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("potential must be nonnegative on construction (got {0})")]
    NegativePotential(f64),
    #[error("tolerance must be positive")]
    InvalidTolerance,
    #[error("address is not exponentially bounded at this depth (upper potential bound is infinite)")]
    NotExponentiallyBounded,
    #[error("membership oracle stalled; widest certified interval [{}, {}]", interval.lo, interval.hi)]
    CertificateStall { interval: CertInterval },
    #[error("point is not certified inside the required invariant set")]
    NotCertified,
    #[error("point is an endpoint candidate (margin {margin} above the certified minimal potential)")]
    IsEndpoint { margin: f64 },
    #[error("operation needs a periodic address structure")]
    NotPeriodic,
}

/// Certificate tag for an interval bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CertTag {
    /// both endpoints are proved bounds
    Certified,
    /// the upper endpoint uses the declared-growth tail bound at this depth
    TruncationBounded(u64),
}

/// A real interval `[lo, hi]` carrying its certification status.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertInterval {
    pub lo: f64,
    pub hi: f64,
    pub tag: CertTag,
}

impl CertInterval {
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// A point `(t, s)` of the model space.
#[derive(Debug, Clone)]
pub struct ModelPoint {
    pub t: f64,
    pub addr: ExternalAddress,
}

impl ModelPoint {
    pub fn new(t: f64, addr: ExternalAddress) -> Result<Self, ModelError> {
        if t < 0.0 || !t.is_finite() {
            return Err(ModelError::NegativePotential(t));
        }
        Ok(ModelPoint { t, addr })
    }
}

/// Numerical policy knobs shared by the certified operations.
#[derive(Debug, Clone, Copy)]
pub struct ModelCtx {
    /// certificate inflation for floating comparisons
    pub eps: f64,
    /// depth of the sup in `t_star` when called internally
    pub tstar_depth: u64,
}

impl Default for ModelCtx {
    fn default() -> Self {
        ModelCtx { eps: 1e-12, tstar_depth: 24 }
    }
}

/// The growth function `F(t) = e^t − 1`. Overflow is reported as the `+∞`
/// sentinel of `f64`.
pub fn f_growth(t: f64) -> f64 {
    t.exp_m1()
}

/// Inverse growth `F⁻¹(y) = ln(1 + y)`.
pub fn f_growth_inv(y: f64) -> f64 {
    y.ln_1p()
}

/// `F^{−n}(y)` for `y ≥ 0`.
pub fn f_inv_iter(y: f64, n: u64) -> f64 {
    let mut x = y;
    for _ in 0..n {
        x = x.ln_1p();
    }
    x
}

/// `F^{−n}(y)` where the argument is supplied as `ln y`; safe for arguments
/// far beyond the floating range. `ln_y = −∞` means `y = 0`; `+∞` yields `+∞`
/// (unknown magnitude beyond evaluation).
fn f_inv_iter_ln(ln_y: f64, n: u64) -> f64 {
    if ln_y == f64::NEG_INFINITY {
        return 0.0;
    }
    if n == 0 {
        return ln_y.exp();
    }
    // first inverse: ln(1+y) = ln y + ln(1 + 1/y)
    let mut x = if ln_y > 700.0 { ln_y + (-ln_y).exp().ln_1p() } else { ln_y.exp().ln_1p() };
    for _ in 1..n {
        x = x.ln_1p();
    }
    x
}

/// `2π|sₙ|` as a float, `+∞` when the entry magnitude exceeds the range.
fn tau_abs(addr: &ExternalAddress, n: u64) -> f64 {
    let l = addr.ln_2pi_abs(n);
    if l == f64::NEG_INFINITY {
        0.0
    } else if l > 709.0 {
        f64::INFINITY
    } else {
        l.exp()
    }
}

/// One potential step `F(t) − 2π|s|` with the entry supplied as `ln(2π|s|)`.
/// When both the growth value and the entry exceed the floating range the
/// sign of the difference is decided in log space (`ln F(t) ≈ t` there);
/// `None` marks the narrow band where even that comparison is ambiguous.
fn orbit_step(t: f64, l_tau: f64) -> Option<f64> {
    let ft = f_growth(t);
    let tau = if l_tau == f64::NEG_INFINITY {
        0.0
    } else if l_tau > 709.0 {
        f64::INFINITY
    } else {
        l_tau.exp()
    };
    if ft.is_infinite() && tau.is_infinite() {
        let margin = 1e-6 * t.abs().max(l_tau.abs()).max(1.0);
        if l_tau > t + margin {
            Some(f64::NEG_INFINITY)
        } else if t > l_tau + margin {
            Some(f64::INFINITY)
        } else {
            None
        }
    } else {
        Some(ft - tau)
    }
}

/// One application of the model map: `(F(t) − 2π|s₁|, σ(s))` together with a
/// flag marking a negative image potential.
pub fn apply_model(x: &ModelPoint) -> (f64, ExternalAddress, bool) {
    let t_next = f_growth(x.t) - tau_abs(&x.addr, 1);
    (t_next, x.addr.shift(), t_next < 0.0)
}

/// Two-sided bound for the minimal-potential sup `t*_s = sup_{n≥1} F^{−n}(2π|sₙ|)`.
///
/// `lo` is the exact maximum over `1 ≤ n ≤ depth` (every term is a true lower
/// bound). The tail `n > depth` is closed per growth class:
///
/// * eventually periodic, entries bounded by `M`: tail ≤ `F^{−(depth+1)}(2πM)`
///   since `F^{−n}(x)` decreases in `n` — a proved bound (`Certified`);
/// * declared `Bounded(M)`: the same bound, resting on the declaration
///   (`TruncationBounded`);
/// * declared `IteratedExponential`: the shifted terms
///   `ã_n = F^{−n}(2π|sₙ| + 1)` are non-increasing in `n` under the declared
///   growth inequality, so `ã_k` bounds the tail for any `k ≤ depth+1`; we use
///   the deepest `k` whose entry magnitude is still evaluable
///   (`TruncationBounded`).
pub fn t_star(_ctx: &ModelCtx, addr: &ExternalAddress, depth: u64) -> CertInterval {
    assert!(depth >= 1, "t_star needs depth >= 1");
    let mut lo = 0.0f64;
    // first index whose entry log exceeds the floating range; those terms are
    // skipped in `lo` (any subset of terms is a valid lower bound) and must
    // instead be covered by the tail rule
    let mut first_saturated: Option<u64> = None;
    for n in 1..=depth {
        let l = addr.ln_2pi_abs(n);
        if l == f64::INFINITY {
            first_saturated.get_or_insert(n);
            continue;
        }
        let term = f_inv_iter_ln(l, n);
        if term.is_finite() && term > lo {
            lo = term;
        }
    }

    let (tail, tag) = match addr.declared_growth() {
        None => {
            // eventually periodic: exact entry bound; logs never saturate
            let m = addr.max_abs_entry().unwrap_or(0);
            let ln_m = if m == 0 { f64::NEG_INFINITY } else { (TAU * m as f64).ln() };
            (f_inv_iter_ln(ln_m, depth + 1), CertTag::Certified)
        }
        Some(DeclaredGrowth::Bounded(m)) => {
            let ln_m = if m == 0 { f64::NEG_INFINITY } else { (TAU * m as f64).ln() };
            (f_inv_iter_ln(ln_m, depth + 1), CertTag::TruncationBounded(depth))
        }
        Some(DeclaredGrowth::IteratedExponential { valid_from }) => {
            // the shifted terms ã_n = F^{−n}(2π|sₙ|+1) are non-increasing
            // from `valid_from` on under the declared growth, so ã_k bounds
            // every term from index k on — including all saturated ones when
            // k precedes them
            let k_max = first_saturated.unwrap_or(depth + 1).min(depth + 1);
            let mut tail = f64::INFINITY;
            for k in (valid_from..=k_max).rev() {
                let l = addr.ln_2pi_abs(k);
                if l.is_finite() || l == f64::NEG_INFINITY {
                    // ln(2π|s_k| + 1); ln 1 = 0 for a zero entry
                    let l_plus = if l == f64::NEG_INFINITY {
                        0.0
                    } else if l > 700.0 {
                        l
                    } else {
                        (l.exp() + 1.0).ln()
                    };
                    tail = f_inv_iter_ln(l_plus, k);
                    break;
                }
            }
            (tail, CertTag::TruncationBounded(depth))
        }
        Some(DeclaredGrowth::Unbounded) => (f64::INFINITY, CertTag::TruncationBounded(depth)),
    };

    CertInterval { lo, hi: lo.max(tail), tag }
}

/// Three-valued membership certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Membership {
    ProvedInside,
    ProvedOutside(u64),
    Unknown,
}

/// Lazily computed `t_star` intervals along the shift orbit of an address,
/// collapsing onto the eventual cycle for exact addresses.
struct OrbitStars<'a> {
    ctx: &'a ModelCtx,
    base: &'a ExternalAddress,
    cycle: Option<(usize, usize)>,
    cache: Vec<Option<CertInterval>>,
    shifted: Vec<Option<ExternalAddress>>,
}

impl<'a> OrbitStars<'a> {
    fn new(ctx: &'a ModelCtx, base: &'a ExternalAddress) -> Self {
        OrbitStars { ctx, base, cycle: base.cycle_data(), cache: Vec::new(), shifted: Vec::new() }
    }

    fn index(&self, j: u64) -> usize {
        match self.cycle {
            Some((pre, per)) => {
                let j = j as usize;
                if j < pre {
                    j
                } else {
                    pre + (j - pre) % per
                }
            }
            None => j as usize,
        }
    }

    fn get(&mut self, j: u64) -> CertInterval {
        let idx = self.index(j);
        if self.cache.len() <= idx {
            self.cache.resize(idx + 1, None);
            self.shifted.resize(idx + 1, None);
        }
        if let Some(iv) = self.cache[idx] {
            return iv;
        }
        let base = self.base;
        let shifted = self.shifted[idx].get_or_insert_with(|| base.shift_n(idx as u64)).clone();
        let iv = t_star(self.ctx, &shifted, self.ctx.tstar_depth);
        self.cache[idx] = Some(iv);
        iv
    }
}

/// Membership certificate for the sub-brush `{x : T(𝔽ⁿx) ≥ q for all n}`.
///
/// `ProvedOutside(n)`: some iterate `n ≤ depth` has potential `< q − eps`.
/// `ProvedInside`: some iterate's potential exceeds the whole upper potential
/// bracket of its address by `1 + q` (forward images then dominate the
/// minimal orbit shifted up by `q`), or an exact cycle revisit shows a
/// non-decreasing potential at the same phase with the whole window `≥ q`.
/// Borderline values resolve to `Unknown`.
pub fn in_j_geq_q(ctx: &ModelCtx, x: &ModelPoint, q: f64, depth: u64) -> Membership {
    let mut stars = OrbitStars::new(ctx, &x.addr);
    let cycle = x.addr.cycle_data();
    let mut phase_seen: Vec<Option<f64>> = match cycle {
        Some((_, per)) => vec![None; per],
        None => Vec::new(),
    };
    let mut clean = true; // all potentials so far ≥ q exactly
    let mut t = x.t;
    for n in 0..=depth {
        if t < q - ctx.eps {
            return Membership::ProvedOutside(n);
        }
        if t < q {
            clean = false;
        }
        let star = stars.get(n);
        if star.hi.is_finite() && t >= star.hi + 1.0 + q + ctx.eps {
            return Membership::ProvedInside;
        }
        if let Some((pre, per)) = cycle {
            let n_us = n as usize;
            if n_us >= pre {
                let phase = (n_us - pre) % per;
                if let Some(prev) = phase_seen[phase] {
                    if clean && t >= prev {
                        return Membership::ProvedInside;
                    }
                }
                phase_seen[phase] = Some(t);
            }
        }
        if t == f64::INFINITY {
            // +∞ potential with an infinite upper bracket: undecidable here
            return Membership::Unknown;
        }
        match orbit_step(t, x.addr.ln_2pi_abs(n + 1)) {
            Some(next) => t = next,
            None => return Membership::Unknown,
        }
    }
    Membership::Unknown
}

/// Membership in the invariant set itself (`q = 0`).
pub fn in_j(ctx: &ModelCtx, x: &ModelPoint, depth: u64) -> Membership {
    in_j_geq_q(ctx, x, 0.0, depth)
}

/// Certified enclosure of the minimal potential `t_s` by bisection on
/// `[lo(t*), hi(t*) + 1]` with [`in_j`] as the oracle.
///
/// The returned interval has width ≤ `tol`; its lower end is outside-adjacent
/// and its upper end certified inside (or an initial bracket endpoint). When
/// the oracle returns `Unknown` at the midpoint, nearby probe points are
/// tried; a persistent stall reports the widest certified interval instead of
/// guessing.
pub fn t_min(
    ctx: &ModelCtx,
    addr: &ExternalAddress,
    tol: f64,
    depth: u64,
) -> Result<CertInterval, ModelError> {
    if !(tol > 0.0) {
        return Err(ModelError::InvalidTolerance);
    }
    let star = t_star(ctx, addr, ctx.tstar_depth);
    if !star.hi.is_finite() {
        return Err(ModelError::NotExponentiallyBounded);
    }
    let mut lo = star.lo;
    let mut hi = star.hi + 1.0;
    let probes = [0.5, 0.38196601125010515, 0.61803398874989485, 0.29, 0.71];
    while hi - lo > tol {
        let mut decided = false;
        for &w in &probes {
            let mid = lo + (hi - lo) * w;
            if !(mid > lo && mid < hi) {
                continue;
            }
            let point = ModelPoint { t: mid, addr: addr.clone() };
            match in_j(ctx, &point, depth) {
                Membership::ProvedOutside(_) => {
                    lo = mid;
                    decided = true;
                    break;
                }
                Membership::ProvedInside => {
                    hi = mid;
                    decided = true;
                    break;
                }
                Membership::Unknown => continue,
            }
        }
        if !decided {
            return Err(ModelError::CertificateStall {
                interval: CertInterval { lo, hi, tag: star.tag },
            });
        }
    }
    Ok(CertInterval { lo, hi, tag: star.tag })
}

/// Speed classification of an address.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AddressClass {
    NotExpBounded,
    Slow,
    Fast,
    UnknownAtDepth,
}

impl AddressClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            AddressClass::NotExpBounded => "not-exp-bounded",
            AddressClass::Slow => "slow",
            AddressClass::Fast => "fast",
            AddressClass::UnknownAtDepth => "unknown-at-depth",
        }
    }
}

/// Classify an address as slow/fast.
///
/// Bounded entries (eventually periodic data or a bounded declaration) keep
/// the shift potentials `t*_{σⁿs}` inside a fixed finite set, hence `Slow`.
/// For iterated-exponential growth the address is `Fast` once the lower
/// bounds for the shift potentials keep at least doubling over the last three
/// steps up to `depth`; otherwise the verdict is `UnknownAtDepth` (a deeper
/// scan may still resolve it).
pub fn classify(ctx: &ModelCtx, addr: &ExternalAddress, depth: u64) -> AddressClass {
    match addr.declared_growth() {
        None | Some(DeclaredGrowth::Bounded(_)) => AddressClass::Slow,
        Some(DeclaredGrowth::Unbounded) => AddressClass::UnknownAtDepth,
        Some(DeclaredGrowth::IteratedExponential { .. }) => {
            if !t_star(ctx, addr, ctx.tstar_depth).hi.is_finite() {
                return AddressClass::NotExpBounded;
            }
            if depth < 3 {
                return AddressClass::UnknownAtDepth;
            }
            // Lower bound for the shift potential t*_{σⁿs}. A first-term
            // entry log beyond the floating range certifies t* ≥ 700 and is
            // marked +∞ ("beyond range, still growing"); deeper saturated
            // terms prove nothing and are skipped.
            let shift_low = |n: u64| -> f64 {
                let shifted = addr.shift_n(n);
                let mut lo = 0.0f64;
                for k in 1..=ctx.tstar_depth {
                    let l = shifted.ln_2pi_abs(k);
                    if l == f64::INFINITY {
                        if k == 1 {
                            return f64::INFINITY;
                        }
                        continue;
                    }
                    lo = lo.max(f_inv_iter_ln(l, k));
                }
                lo
            };
            let lows: Vec<f64> = (0..=depth).map(shift_low).collect();
            let k = depth as usize;
            let doubling = (k - 2..=k).all(|i| {
                let (prev, cur) = (lows[i - 1], lows[i]);
                cur.is_infinite() || (prev.is_finite() && cur >= 1.0 && cur >= 2.0 * prev)
            });
            if doubling {
                AddressClass::Fast
            } else {
                AddressClass::UnknownAtDepth
            }
        }
    }
}

/// Entrywise magnitude dominance `|sₙ(x)| ≥ |s⁰ₙ|` for all `n ≥ 0` — the
/// membership test for the sub-fan over the base address. Exact for two
/// eventually periodic addresses; otherwise depth-capped.
pub fn in_subfan(
    x: &ModelPoint,
    base: &ExternalAddress,
    depth: u64,
) -> Result<bool, crate::address::CmpUndecided> {
    let bound = match (x.addr.cycle_data(), base.cycle_data()) {
        (Some((pa, qa)), Some((pb, qb))) => {
            let g = gcd(qa, qb);
            Some((pa.max(pb) + qa / g * qb) as u64)
        }
        _ => None,
    };
    let scan = bound.unwrap_or(depth + 1);
    for n in 0..scan {
        let ex = x.addr.entry_value(n).map_err(|_| crate::address::CmpUndecided { depth: n })?;
        let eb = base.entry_value(n).map_err(|_| crate::address::CmpUndecided { depth: n })?;
        match (ex, eb) {
            (Entry::Int(a), Entry::Int(b)) => {
                if a.unsigned_abs() < b.unsigned_abs() {
                    return Ok(false);
                }
            }
            (Entry::Huge { .. }, Entry::Int(_)) => {}
            (Entry::Int(_), Entry::Huge { .. }) => return Ok(false),
            (Entry::Huge { .. }, Entry::Huge { .. }) => {
                return Err(crate::address::CmpUndecided { depth: n })
            }
        }
    }
    if bound.is_some() {
        Ok(true)
    } else {
        Err(crate::address::CmpUndecided { depth: scan })
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

/// The endpoint-approximating address `s^j`: a copy of `addr(x)` whose entry
/// `j+1` is replaced by `⌈F(t_j)/2π⌉` where `t_j` is the `j`-th orbit
/// potential of `x`. The new entry dominates the old one in magnitude, so the
/// result stays in every sub-fan containing `x`.
pub fn endpoint_perturbation(x: &ModelPoint, j: u64) -> ExternalAddress {
    assert!(j >= 1, "perturbation index must be >= 1");
    let mut t = x.t;
    for k in 0..j {
        t = f_growth(t) - tau_abs(&x.addr, k + 1);
    }
    x.addr.with_entry(j + 1, ceil_growth_entry(t, true))
}

///`±⌈F(t)/2π⌉` as an entry, switching to log form past the integer range.
fn ceil_growth_entry(t: f64, positive: bool) -> Entry {
    let f = f_growth(t);
    if f.is_finite() && f / TAU < 9.0e18 {
        let c = (f / TAU).ceil().max(0.0) as i64;
        Entry::Int(if positive { c } else { -c })
    } else {
        // ln(2π·c) with 2πc ∈ [F(t), F(t)+2π]; for t beyond exp range use ln F(t) ≈ t
        let ln = if t > 700.0 { t } else { f.ln() };
        Entry::Huge { positive, ln_2pi_abs: ln }
    }
}

/// Orbit potential in a staged representation that survives the double
/// exponential growth: a plain value, then its natural log, then saturation.
#[derive(Debug, Clone, Copy)]
enum Pot {
    Val(f64),
    Ln(f64),
    Sat,
}

impl Pot {
    fn step(self, tau_next: f64) -> Pot {
        match self {
            Pot::Val(t) if t <= 700.0 => Pot::Val(f_growth(t) - tau_next),
            // ln(F(t) − c) = t + ln(1 − (1+c)e^{−t}) ≈ t for t > 700
            Pot::Val(t) => Pot::Ln(t),
            Pot::Ln(l) if l <= 709.0 => Pot::Ln(l.exp()),
            Pot::Ln(_) | Pot::Sat => Pot::Sat,
        }
    }

    /// entry `⌈F(t)/2π⌉` with the requested sign
    fn growth_entry(self, positive: bool) -> Entry {
        match self {
            Pot::Val(t) => ceil_growth_entry(t, positive),
            Pot::Ln(l) if l <= 709.0 => Entry::Huge { positive, ln_2pi_abs: l.exp() },
            Pot::Ln(_) | Pot::Sat => Entry::Huge { positive, ln_2pi_abs: f64::INFINITY },
        }
    }
}

/// Generator for a flanking sequence: agrees with the base address through
/// index `keep`, then takes the signed ceiling entries `±⌈F(t_{n−1})/2π⌉`
/// along the orbit potentials of the flanked point.
struct FlankRule {
    base: ExternalAddress,
    keep: u64,
    positive: bool,
    /// staged orbit potentials t_0, t_1, …, extended on demand
    orbit: Mutex<Vec<Pot>>,
}

impl FlankRule {
    fn new(base: ExternalAddress, keep: u64, t0: f64, positive: bool) -> Self {
        FlankRule { base, keep, positive, orbit: Mutex::new(vec![Pot::Val(t0)]) }
    }

    fn pot(&self, n: u64) -> Pot {
        let mut orbit = self.orbit.lock().unwrap();
        while orbit.len() <= n as usize {
            let k = orbit.len();
            let tau_next = tau_abs(&self.base, k as u64);
            let next = orbit[k - 1].step(tau_next);
            orbit.push(next);
        }
        orbit[n as usize]
    }
}

impl GeneratorRule for FlankRule {
    fn entry(&self, n: u64) -> Entry {
        if n <= self.keep {
            self.base.entry_value(n).unwrap_or(Entry::Huge {
                positive: true,
                ln_2pi_abs: self.base.ln_2pi_abs(n),
            })
        } else {
            self.pot(n - 1).growth_entry(self.positive)
        }
    }

    fn ln_2pi_abs(&self, n: u64) -> f64 {
        if n <= self.keep {
            self.base.ln_2pi_abs(n)
        } else {
            self.entry(n).ln_2pi_abs()
        }
    }

    fn label(&self) -> String {
        format!(
            "gen:flank:{}:{}:{}",
            if self.positive { "+" } else { "-" },
            self.keep,
            self.base
        )
    }
}

/// The pair of flanking addresses `s^{j−} < addr(x) < s^{j+}` for a certified
/// non-endpoint `x` of the `T ≥ q` sub-brush. Both results carry the
/// iterated-exponential growth declaration and classify as fast.
pub fn flank_sequences(
    ctx: &ModelCtx,
    x: &ModelPoint,
    j: u64,
    q: f64,
    depth: u64,
) -> Result<(ExternalAddress, ExternalAddress), ModelError> {
    if in_j_geq_q(ctx, x, q, depth) != Membership::ProvedInside {
        return Err(ModelError::NotCertified);
    }
    let tmin = t_min(ctx, &x.addr, 1e-9, depth)?;
    let margin = x.t - tmin.hi;
    if margin <= 0.0 {
        return Err(ModelError::IsEndpoint { margin });
    }
    let minus = ExternalAddress::generated(
        Arc::new(FlankRule::new(x.addr.clone(), j, x.t, false)),
        DeclaredGrowth::IteratedExponential { valid_from: j + 1 },
    );
    let plus = ExternalAddress::generated(
        Arc::new(FlankRule::new(x.addr.clone(), j, x.t, true)),
        DeclaredGrowth::IteratedExponential { valid_from: j + 1 },
    );
    Ok((minus, plus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ep(pre: &[i64], per: &[i64]) -> ExternalAddress {
        ExternalAddress::eventually_periodic(pre.to_vec(), per.to_vec()).unwrap()
    }

    fn ctx() -> ModelCtx {
        ModelCtx::default()
    }

    #[test]
    fn growth_function_basics() {
        assert_eq!(f_growth(0.0), 0.0);
        assert!((f_growth((1.0 + TAU).ln()) - TAU).abs() < 1e-12);
        assert!((f_growth(1.0) - (std::f64::consts::E - 1.0)).abs() < 1e-12);
        assert_eq!(f_growth_inv(0.0), 0.0);
        assert!((f_growth_inv(TAU) - (1.0 + TAU).ln()).abs() < 1e-15);
        assert!((f_growth_inv(f_growth(3.0)) - 3.0).abs() < 1e-12);
        assert!(f_growth(1e4).is_infinite());
    }

    #[test]
    fn apply_model_examples() {
        let fixed = ModelPoint::new(0.0, ExternalAddress::zero()).unwrap();
        let (t, a, flag) = apply_model(&fixed);
        assert_eq!(t, 0.0);
        assert!(!flag);
        assert_eq!(a, ExternalAddress::zero());

        let ones = ep(&[], &[1]);
        let x = ModelPoint::new(f_growth_inv(TAU), ones.clone()).unwrap();
        let (t, _, _) = apply_model(&x);
        assert!(t.abs() < 1e-12, "F(ln(1+2π)) − 2π should vanish, got {t}");

        let y = ModelPoint::new(0.0, ones).unwrap();
        let (t, _, flag) = apply_model(&y);
        assert!((t + TAU).abs() < 1e-12);
        assert!(flag);
    }

    #[test]
    fn t_star_of_zero_address_is_zero() {
        let iv = t_star(&ctx(), &ExternalAddress::zero(), 8);
        assert_eq!(iv.lo, 0.0);
        assert_eq!(iv.hi, 0.0);
        assert_eq!(iv.tag, CertTag::Certified);
    }

    #[test]
    fn t_star_of_ones_is_attained_at_depth_one() {
        let iv = t_star(&ctx(), &ep(&[], &[1]), 8);
        let expected = f_growth_inv(TAU);
        assert!((iv.lo - expected).abs() < 1e-15);
        assert_eq!(iv.lo, iv.hi, "tail bound must be dominated at depth 8");
        assert_eq!(iv.tag, CertTag::Certified);
        // the sup terms F^{−n}(2π) decrease in n
        let mut prev = f64::INFINITY;
        for n in 1..=8 {
            let term = f_inv_iter(TAU, n);
            assert!(term < prev);
            prev = term;
        }
    }

    #[test]
    fn t_star_of_iterexp_is_finite_and_truncation_bounded() {
        let a = ExternalAddress::iterexp(1);
        let iv = t_star(&ctx(), &a, 6);
        // sup attained at n = 1: F^{-1}(2π·2)
        let expected = f_growth_inv(2.0 * TAU);
        assert!((iv.lo - expected).abs() < 1e-12);
        assert!(iv.hi.is_finite());
        assert!(iv.hi >= iv.lo);
        assert!(matches!(iv.tag, CertTag::TruncationBounded(6)));
        // deep truncation still finite despite astronomically large entries
        let deep = t_star(&ctx(), &a, 40);
        assert!(deep.hi.is_finite());
    }

    #[test]
    fn membership_examples() {
        let c = ctx();
        let zero = ModelPoint::new(0.0, ExternalAddress::zero()).unwrap();
        assert_eq!(in_j(&c, &zero, 16), Membership::ProvedInside);

        let ones = ep(&[], &[1]);
        let low = ModelPoint::new(0.0, ones.clone()).unwrap();
        assert_eq!(in_j(&c, &low, 16), Membership::ProvedOutside(1));

        let high = ModelPoint::new(f_growth_inv(TAU) + 1.5, ones).unwrap();
        assert_eq!(in_j(&c, &high, 16), Membership::ProvedInside);
    }

    #[test]
    fn membership_with_threshold_examples() {
        let c = ctx();
        let x = ModelPoint::new(2.0, ExternalAddress::zero()).unwrap();
        assert_eq!(in_j_geq_q(&c, &x, 2.0, 32), Membership::ProvedInside);

        let y = ModelPoint::new(0.0, ExternalAddress::zero()).unwrap();
        assert_eq!(in_j_geq_q(&c, &y, 1.0, 32), Membership::ProvedOutside(0));

        let ones = ep(&[], &[1]);
        let tm = t_min(&c, &ones, 1e-9, 256).unwrap();
        let z = ModelPoint::new(tm.hi + 3.0, ones).unwrap();
        assert_eq!(in_j_geq_q(&c, &z, 3.0, 64), Membership::ProvedInside);
    }

    #[test]
    fn t_min_of_zero_address() {
        let iv = t_min(&ctx(), &ExternalAddress::zero(), 1e-9, 256).unwrap();
        assert!(iv.lo >= 0.0 && iv.hi <= 1e-9 + 1e-15);
        assert!(iv.width() <= 1e-9);
    }

    #[test]
    fn t_min_of_ones_matches_fixed_point_oracle() {
        // independent oracle: the minimal potential of (1)^inf is the
        // repelling fixed point of t ↦ F(t) − 2π, found by 1-d Newton
        let mut t = 2.0f64;
        for _ in 0..60 {
            let g = f_growth(t) - TAU - t;
            let dg = t.exp() - 1.0;
            t -= g / dg;
        }
        let iv = t_min(&ctx(), &ep(&[], &[1]), 1e-11, 512).unwrap();
        assert!(iv.lo <= t && t <= iv.hi, "oracle {t} outside [{}, {}]", iv.lo, iv.hi);
        // frozen regression value for the midpoint
        assert!((iv.mid() - 2.255_338_763_969_195).abs() < 1e-8, "midpoint {}", iv.mid());
        // bracket from the potential sup
        let star = t_star(&ctx(), &ep(&[], &[1]), 24);
        assert!(iv.lo >= star.lo - 1e-9 && iv.hi <= star.hi + 1.0 + 1e-9);
    }

    #[test]
    fn t_min_rejects_bad_tolerance() {
        assert!(matches!(
            t_min(&ctx(), &ExternalAddress::zero(), 0.0, 16),
            Err(ModelError::InvalidTolerance)
        ));
    }

    #[test]
    fn classify_examples() {
        let c = ctx();
        assert_eq!(classify(&c, &ep(&[], &[1, 2]), 6), AddressClass::Slow);
        assert_eq!(classify(&c, &ExternalAddress::iterexp(3), 6), AddressClass::Fast);
        assert_eq!(classify(&c, &ExternalAddress::iterexp(1), 6), AddressClass::Fast);

        // linear entries: genuinely fast but not certifiable at small depth
        struct Linear;
        impl GeneratorRule for Linear {
            fn entry(&self, n: u64) -> Entry {
                Entry::Int(n as i64 + 1)
            }
            fn label(&self) -> String {
                "gen:linear".into()
            }
        }
        let lin = ExternalAddress::generated(
            std::sync::Arc::new(Linear),
            DeclaredGrowth::IteratedExponential { valid_from: 1 },
        );
        assert_eq!(classify(&c, &lin, 6), AddressClass::UnknownAtDepth);
    }

    #[test]
    fn classify_not_exp_bounded_for_overflowing_rule() {
        struct Monster;
        impl GeneratorRule for Monster {
            fn entry(&self, _n: u64) -> Entry {
                Entry::Huge { positive: true, ln_2pi_abs: f64::INFINITY }
            }
            fn ln_2pi_abs(&self, _n: u64) -> f64 {
                f64::INFINITY
            }
            fn label(&self) -> String {
                "gen:monster".into()
            }
        }
        let m = ExternalAddress::generated(
            std::sync::Arc::new(Monster),
            DeclaredGrowth::IteratedExponential { valid_from: 1 },
        );
        assert_eq!(classify(&ctx(), &m, 6), AddressClass::NotExpBounded);
    }

    #[test]
    fn subfan_examples() {
        let x = ModelPoint::new(1.0, ep(&[], &[2])).unwrap();
        assert!(in_subfan(&x, &ep(&[], &[1]), 16).unwrap());
        let y = ModelPoint::new(1.0, ep(&[], &[1])).unwrap();
        assert!(!in_subfan(&y, &ep(&[], &[2]), 16).unwrap());
        let z = ModelPoint::new(1.0, ep(&[], &[-3, 1])).unwrap();
        assert!(in_subfan(&z, &ep(&[], &[2, 1]), 16).unwrap());
    }

    #[test]
    fn endpoint_perturbation_examples() {
        let x = ModelPoint::new(0.0, ExternalAddress::zero()).unwrap();
        let s1 = endpoint_perturbation(&x, 1);
        assert_eq!(s1, ExternalAddress::zero(), "t_j = 0 leaves the address unchanged");

        let y = ModelPoint::new(1.0, ExternalAddress::zero()).unwrap();
        let s2 = endpoint_perturbation(&y, 1);
        assert_eq!(s2.entry(2).unwrap(), 1, "⌈F(F(1))/2π⌉ = 1");
        assert_eq!(s2.entry(0).unwrap(), 0);
        assert_eq!(s2.entry(3).unwrap(), 0);

        // t_0 = 2, t_1 = F(2), t_2 = F(F(2)) ≈ 594.5; the entry ⌈F(t_2)/2π⌉
        // is astronomically large and lands in log form
        let z = ModelPoint::new(2.0, ExternalAddress::zero()).unwrap();
        let s3 = endpoint_perturbation(&z, 2);
        let t2 = f_growth(f_growth(2.0));
        match s3.entry_value(3).unwrap() {
            Entry::Huge { positive, ln_2pi_abs } => {
                assert!(positive);
                // 2π·entry ∈ [F(t_2), F(t_2) + 2π], so its log is ≈ t_2
                assert!((ln_2pi_abs - t2).abs() < 1e-6 * t2);
            }
            other => panic!("expected a log-form entry, got {other:?}"),
        }
    }

    #[test]
    fn flank_sequences_bracket_and_classify_fast() {
        let c = ctx();
        let addr = ep(&[], &[1]);
        let tm = t_min(&c, &addr, 1e-9, 512).unwrap();
        let x = ModelPoint::new(tm.hi + 3.0 + 0.4, addr.clone()).unwrap();
        let (minus, plus) = flank_sequences(&c, &x, 2, 3.0, 256).unwrap();
        // entries agree through index 2, then split with opposite signs
        assert_eq!(minus.entry(1).unwrap(), 1);
        assert_eq!(plus.entry(2).unwrap(), 1);
        let m3 = minus.entry_value(3).unwrap();
        let p3 = plus.entry_value(3).unwrap();
        match (m3, p3) {
            (Entry::Int(a), Entry::Int(b)) => {
                assert!(a < 0 && b > 0 && a == -b);
                assert!(b > 1, "flank entry must dominate the base entry");
            }
            _ => { /* huge entries also acceptable at growing potentials */ }
        }
        use crate::address::cmp_external;
        use std::cmp::Ordering;
        assert_eq!(cmp_external(&minus, &addr, 64).unwrap(), Ordering::Less);
        assert_eq!(cmp_external(&addr, &plus, 64).unwrap(), Ordering::Less);
        assert_eq!(classify(&c, &plus, 10), AddressClass::Fast);
        assert_eq!(classify(&c, &minus, 10), AddressClass::Fast);
    }

    #[test]
    fn flank_sequences_reject_endpoints() {
        let c = ctx();
        let addr = ExternalAddress::zero();
        let x = ModelPoint::new(0.0, addr).unwrap();
        assert!(matches!(
            flank_sequences(&c, &x, 2, 0.0, 256),
            Err(ModelError::IsEndpoint { .. })
        ));
    }

    #[test]
    fn backwards_shrinking_observation() {
        // same entry magnitudes at 1..=n and both orbits inside the invariant
        // set: the potential gap seen at step n contracts backwards by F^{-n}
        let addr = ep(&[], &[1]);
        let flipped = ep(&[], &[-1]); // same magnitudes, opposite signs
        let n = 4u64;
        let (tx, ty) = (2.26f64, 2.32f64);
        let mut ax = tx;
        let mut ay = ty;
        for k in 0..n {
            ax = f_growth(ax) - tau_abs(&addr, k + 1);
            ay = f_growth(ay) - tau_abs(&flipped, k + 1);
            assert!(ax >= 0.0 && ay >= 0.0);
        }
        let delta = ay - ax;
        assert!(delta > 0.0);
        let diff = ty - tx;
        assert!(diff >= 0.0 && diff <= f_inv_iter(delta, n) + 1e-9);
    }

    proptest! {
        /// F(x+δ) ≥ F(x) + F(δ) on a randomized grid
        #[test]
        fn growth_is_superadditive(x in 0.0f64..30.0, d in 0.0f64..30.0) {
            prop_assert!(f_growth(x + d) >= f_growth(x) + f_growth(d) - 1e-9 * f_growth(x + d).abs());
        }

        /// the certified bracket always contains the sup-based bracket
        #[test]
        fn lemma_bracket_randomized(pre in proptest::collection::vec(-4i64..=4, 0..3),
                                    per in proptest::collection::vec(-4i64..=4, 1..4)) {
            let c = ctx();
            let a = ep(&pre, &per);
            let star = t_star(&c, &a, c.tstar_depth);
            let tm = t_min(&c, &a, 1e-9, 512).unwrap();
            prop_assert!(tm.lo >= star.lo - 1e-9);
            prop_assert!(tm.hi <= star.hi + 1.0 + 1e-9);
        }

        /// apply_model is exact on the address part
        #[test]
        fn model_shifts_address(pre in proptest::collection::vec(-4i64..=4, 0..3),
                                per in proptest::collection::vec(-4i64..=4, 1..4),
                                t in 0.0f64..5.0) {
            let a = ep(&pre, &per);
            let x = ModelPoint::new(t, a.clone()).unwrap();
            let (_, shifted, _) = apply_model(&x);
            prop_assert_eq!(shifted, a.shift());
        }
    }
}
