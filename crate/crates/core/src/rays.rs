//! Dynamic rays of `f_a(z) = e^z + a` by inverse-branch pullback.
//!
//! A ray point at potential `t` and address `s` is computed from the model
//! orbit `(t_j, σʲs)`: once the potential climbs past an asymptotic threshold
//! (where the ray hugs the horizontal line `Im z = 2π·s_j` to within
//! `≈ e^{−t_j}`), the point is seeded as `t_j + 2πi·s_j` and pulled back
//! through the branches `z ↦ log(z − a) + 2πi·s_k` of `f_a^{-1}`. The branch
//! index is tied directly to the address entry; that convention is validated
//! by the vertical-order check rather than assumed.
//!
//! Pulled-back seeds contract hard (each level divides the error by
//! `|z − a|`), so the reported residual combines the empirical displacement
//! of a perturbed seed — the perturbation sized like the analytic seed error
//! — with the conjugacy defect against an independently assembled trace of
//! the image point.
//!
//! Rays are only traced from points certified inside the `T ≥ Q` sub-brush;
//! `Q` is a configuration knob (the conjugacy to the plane maps holds for
//! all large `Q`, and failures are reported rather than papered over).

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::address::{cmp_external, ExternalAddress, TAU};
use crate::model::{
    f_growth, in_j_geq_q, t_min, Membership, ModelCtx, ModelError, ModelPoint,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RayError {
    #[error("model point is not certified inside the T ≥ {q} sub-brush ({outcome:?})")]
    NotCertified { q: f64, outcome: Membership },
    #[error("seed potential is not representable; lower the depth or the potential")]
    OverflowInSeed,
    #[error("residual {residual} exceeds the tolerance; deepen the trace")]
    DepthInsufficient { residual: f64 },
    #[error("inverse branch evaluated at the singular value")]
    SingularValueHit,
    #[error("address entry at index {0} exceeds the branch-index range")]
    EntryOutOfRange(u64),
    #[error("refinement did not converge: {0}")]
    NoConvergence(String),
    #[error("operation needs a purely periodic address")]
    NotPeriodic,
    #[error("iterate {0} lies within the boundary margin of the strip partition")]
    BoundaryHit(u64),
    #[error("iterate {0} left the floating range before the itinerary was complete")]
    OverflowAt(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("addresses must be pairwise distinct")]
    DuplicateAddress,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Tracing policy.
#[derive(Debug, Clone, Copy)]
pub struct RayParams {
    /// certification threshold Q for the sub-brush membership precondition
    pub q: f64,
    /// iteration depth for the membership certificate
    pub cert_depth: u64,
    /// potential above which the asymptotic seed is trusted
    pub seed_threshold: f64,
    /// extra margin (nats) the potential must have over `ln(2π|s_next|)`
    /// before seeding, so fast addresses seed deeper
    pub seed_margin: f64,
    /// strip-boundary margin for plane itineraries
    pub boundary_eps: f64,
}

impl Default for RayParams {
    fn default() -> Self {
        RayParams {
            q: 5.0,
            cert_depth: 512,
            seed_threshold: 50.0,
            seed_margin: 40.0,
            boundary_eps: 1e-9,
        }
    }
}

/// One traced ray point.
#[derive(Debug, Clone, Serialize)]
pub struct RaySample {
    #[serde(skip)]
    pub addr: ExternalAddress,
    pub t: f64,
    pub re: f64,
    pub im: f64,
    pub residual: f64,
    /// number of pullbacks actually performed
    pub depth: u64,
}

impl RaySample {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// `e^z + a`. Overflow shows up as infinite components of the result.
pub fn exp_map(z: Complex64, a: Complex64) -> Complex64 {
    z.exp() + a
}

/// The branch `log(w − a) + 2πik` of `f_a^{-1}` (principal logarithm,
/// imaginary part in `(−π, π]`).
pub fn inverse_branch(w: Complex64, a: Complex64, k: i64) -> Result<Complex64, RayError> {
    if w == a {
        return Err(RayError::SingularValueHit);
    }
    Ok((w - a).ln() + Complex64::new(0.0, TAU * k as f64))
}

/// Internal: orbit potentials up to the seed level, the seed level itself,
/// and the pulled-back point together with a perturbed twin.
struct TraceCore {
    ts: Vec<f64>,
    z: Complex64,
    z_perturbed: Complex64,
    pullbacks: u64,
}

fn trace_core(
    p: &RayParams,
    a: Complex64,
    s: &ExternalAddress,
    t: f64,
    depth: u64,
) -> Result<TraceCore, RayError> {
    // climb the orbit until the asymptotic seed applies (or depth runs out)
    let mut ts = vec![t];
    let mut level = 0u64;
    loop {
        let tk = ts[level as usize];
        if !tk.is_finite() {
            return Err(RayError::OverflowInSeed);
        }
        let next_entry_ln = s.ln_2pi_abs(level + 1);
        let seed_ok = tk >= p.seed_threshold
            && (next_entry_ln == f64::NEG_INFINITY || tk >= next_entry_ln + p.seed_margin);
        if seed_ok || level == depth {
            break;
        }
        let tau_next = if next_entry_ln > 709.0 {
            f64::INFINITY
        } else if next_entry_ln == f64::NEG_INFINITY {
            0.0
        } else {
            next_entry_ln.exp()
        };
        ts.push(f_growth(tk) - tau_next);
        level += 1;
    }

    let seed_t = ts[level as usize];
    if !seed_t.is_finite() {
        return Err(RayError::OverflowInSeed);
    }
    let seed_entry = s.entry(level).map_err(|_| RayError::EntryOutOfRange(level))?;
    let seed_im = TAU * seed_entry as f64;
    if !seed_im.is_finite() {
        return Err(RayError::OverflowInSeed);
    }
    let seed = Complex64::new(seed_t, seed_im);

    // perturb by the analytic seed-error scale to measure the contraction
    let next_ln = s.ln_2pi_abs(level + 1);
    let tail_term = if next_ln == f64::NEG_INFINITY { 0.0 } else { (next_ln - seed_t).exp() };
    let delta = ((a.norm() + 2.0) * (-seed_t).exp() + tail_term).min(1.0);
    let unit = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2);
    let mut z = seed;
    let mut zp = seed + delta * unit;

    for k in (0..level).rev() {
        let entry = s.entry(k).map_err(|_| RayError::EntryOutOfRange(k))?;
        z = inverse_branch(z, a, entry)?;
        zp = inverse_branch(zp, a, entry)?;
    }
    Ok(TraceCore { ts, z, z_perturbed: zp, pullbacks: level })
}

/// Trace the ray of address `s` at potential `t`.
///
/// The point must be certified inside the `T ≥ Q` sub-brush first (with
/// `Q = params.q`); an `Unknown` certificate is treated as failure. The
/// sample is accepted when its residual is at most `tol`.
pub fn trace_ray(
    params: &RayParams,
    ctx: &ModelCtx,
    a: Complex64,
    s: &ExternalAddress,
    t: f64,
    depth: u64,
    tol: f64,
) -> Result<RaySample, RayError> {
    let point = ModelPoint::new(t, s.clone())?;
    let outcome = in_j_geq_q(ctx, &point, params.q, params.cert_depth);
    if outcome != Membership::ProvedInside {
        return Err(RayError::NotCertified { q: params.q, outcome });
    }
    trace_unchecked(params, a, s, t, depth, tol)
}

/// Same as [`trace_ray`] but without the membership precondition; used
/// internally for image traces and by the landing refinement, which walks
/// potentials down toward the hair's endpoint.
pub fn trace_unchecked(
    params: &RayParams,
    a: Complex64,
    s: &ExternalAddress,
    t: f64,
    depth: u64,
    tol: f64,
) -> Result<RaySample, RayError> {
    let core = trace_core(params, a, s, t, depth)?;
    let displacement = (core.z - core.z_perturbed).norm();

    // conjugacy defect against an independently assembled trace of the image
    let defect = if core.ts.len() >= 2 {
        let image = trace_core(params, a, &s.shift(), core.ts[1], depth.saturating_sub(1))?;
        (exp_map(core.z, a) - image.z).norm()
    } else {
        0.0
    };

    let floor = 4.0 * f64::EPSILON * (1.0 + core.z.norm());
    let residual = displacement.max(defect).max(floor);
    if residual > tol {
        return Err(RayError::DepthInsufficient { residual });
    }
    Ok(RaySample {
        addr: s.clone(),
        t,
        re: core.z.re,
        im: core.z.im,
        residual,
        depth: core.pullbacks,
    })
}

/// A traced polyline along a monotone potential grid. Failed samples are
/// collected separately instead of aborting the whole polyline.
#[derive(Debug)]
pub struct Polyline {
    pub samples: Vec<RaySample>,
    pub failures: Vec<(usize, RayError)>,
}

pub fn ray_polyline(
    params: &RayParams,
    ctx: &ModelCtx,
    a: Complex64,
    s: &ExternalAddress,
    t_lo: f64,
    t_hi: f64,
    samples: usize,
    depth: u64,
    tol: f64,
) -> Result<Polyline, RayError> {
    if !(t_lo.is_finite() && t_hi.is_finite()) || t_hi < t_lo {
        return Err(RayError::InvalidParameter("potential range must be finite and ordered".into()));
    }
    let n = if t_lo == t_hi { 1 } else { samples.max(2) };
    let mut out = Polyline { samples: Vec::new(), failures: Vec::new() };
    for i in 0..n {
        let t = if n == 1 {
            t_lo
        } else {
            t_lo + (t_hi - t_lo) * i as f64 / (n - 1) as f64
        };
        match trace_ray(params, ctx, a, s, t, depth, tol) {
            Ok(sample) => out.samples.push(sample),
            Err(e) => out.failures.push((i, e)),
        }
    }
    Ok(out)
}

/// Checks that the vertical order of traced ray points at a common potential
/// equals the lexicographic order of their addresses (independent of the
/// order in which the addresses are passed).
pub fn vertical_order_check(
    params: &RayParams,
    ctx: &ModelCtx,
    a: Complex64,
    addrs: &[ExternalAddress],
    t: f64,
    depth: u64,
    tol: f64,
) -> Result<bool, RayError> {
    let mut traced = Vec::with_capacity(addrs.len());
    for s in addrs {
        traced.push(trace_ray(params, ctx, a, s, t, depth, tol)?);
    }
    for i in 0..addrs.len() {
        for j in i + 1..addrs.len() {
            let ord = cmp_external(&addrs[i], &addrs[j], 256)
                .map_err(|_| RayError::InvalidParameter("undecidable address order".into()))?;
            match ord {
                std::cmp::Ordering::Equal => return Err(RayError::DuplicateAddress),
                std::cmp::Ordering::Less => {
                    if traced[i].im >= traced[j].im {
                        return Ok(false);
                    }
                }
                std::cmp::Ordering::Greater => {
                    if traced[i].im <= traced[j].im {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// A refined periodic landing point.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodicLanding {
    pub re: f64,
    pub im: f64,
    /// |(f_a^p)'(z)| at the landing point
    pub multiplier: f64,
    /// |f_a^p(z) − z|
    pub residual: f64,
    pub period: usize,
    /// strip-itinerary agreement with the address entries, when the plane
    /// partition is available (real a < −1); `None` otherwise
    pub itinerary_match: Option<bool>,
}

impl PeriodicLanding {
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// Landing point of the ray at a periodic address: trace at potentials
/// shrinking toward the hair's endpoint, then polish with Newton iteration on
/// `f_a^p(z) − z`. The result is verified (residual, and the strip itinerary
/// where defined); divergence is reported, never guessed.
pub fn land_periodic(
    params: &RayParams,
    ctx: &ModelCtx,
    a: Complex64,
    s: &ExternalAddress,
    tol: f64,
) -> Result<PeriodicLanding, RayError> {
    let period = match s.periodic_structure() {
        Some((pre, per)) if pre.is_empty() => per.len(),
        _ => return Err(RayError::NotPeriodic),
    };
    let endpoint = t_min(ctx, s, 1e-9, 4096)?;

    // walk the potential down toward the endpoint; keep the deepest trace
    let mut seed = None;
    let mut step = 0.6;
    for _ in 0..=12 {
        let t = endpoint.hi + step;
        if let Ok(sample) = trace_unchecked(params, a, s, t, 4096, 1e-6) {
            seed = Some(sample.z());
        }
        step /= 3.0;
    }
    let mut z = seed.ok_or_else(|| {
        RayError::NoConvergence("no trace near the endpoint potential succeeded".into())
    })?;

    // Newton on g(z) = f^p(z) − z; (f^p)'(z) = exp(Σ z_i)
    let mut converged = false;
    for _ in 0..80 {
        let (fz, deriv) = iterate_with_derivative(z, a, period);
        if !fz.is_finite() || z.norm() > 1e8 {
            return Err(RayError::NoConvergence("iteration left the working region".into()));
        }
        let g = fz - z;
        let dg = deriv - Complex64::new(1.0, 0.0);
        if dg.norm() < 1e-14 {
            return Err(RayError::NoConvergence("critical-like derivative".into()));
        }
        let stepz = g / dg;
        z -= stepz;
        if stepz.norm() < 1e-13 * (1.0 + z.norm()) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(RayError::NoConvergence("Newton did not settle".into()));
    }
    let (fz, deriv) = iterate_with_derivative(z, a, period);
    let residual = (fz - z).norm();
    if residual > tol {
        return Err(RayError::NoConvergence(format!("residual {residual} above tolerance")));
    }

    let itinerary_match = if a.im == 0.0 && a.re < -1.0 {
        match plane_itinerary(params, a.re, z, period as u64) {
            Ok(strip) => {
                let want: Vec<i64> =
                    (0..period as u64).map(|n| s.entry(n).unwrap()).collect();
                Some(strip == want)
            }
            Err(_) => None,
        }
    } else {
        None
    };

    Ok(PeriodicLanding {
        re: z.re,
        im: z.im,
        multiplier: deriv.norm(),
        residual,
        period,
        itinerary_match,
    })
}

fn iterate_with_derivative(z: Complex64, a: Complex64, p: usize) -> (Complex64, Complex64) {
    let mut w = z;
    let mut deriv = Complex64::new(1.0, 0.0);
    for _ in 0..p {
        let e = w.exp();
        deriv *= e;
        w = e + a;
    }
    (w, deriv)
}

/// Strip itinerary of a plane point for real `a < −1`: the preimage of the
/// negative real axis consists of the horizontal lines `Im z = (2k+1)π`, and
/// entry `j` is the integer `k` with `Im f_a^j(z) ∈ ((2k−1)π, (2k+1)π)`.
/// Orbits that come within `boundary_eps` of a strip boundary have no
/// meaningful itinerary and are rejected.
pub fn plane_itinerary(
    params: &RayParams,
    a: f64,
    z: Complex64,
    n: u64,
) -> Result<Vec<i64>, RayError> {
    if !(a < -1.0) {
        return Err(RayError::InvalidParameter(
            "the strip partition needs a real parameter a < -1".into(),
        ));
    }
    let ac = Complex64::new(a, 0.0);
    let mut w = z;
    let mut out = Vec::with_capacity(n as usize);
    for j in 0..n {
        if !w.is_finite() {
            return Err(RayError::OverflowAt(j));
        }
        let k = (w.im / TAU).round();
        if k.abs() > 9.0e18 {
            return Err(RayError::OverflowAt(j));
        }
        let margin = std::f64::consts::PI - (w.im - TAU * k).abs();
        if margin < params.boundary_eps {
            return Err(RayError::BoundaryHit(j));
        }
        out.push(k as i64);
        w = exp_map(w, ac);
    }
    Ok(out)
}
