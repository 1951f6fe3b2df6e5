//! Acceptance suite: every quantitative criterion of the build runs here at
//! full scale, printing one PASS/FAIL line per criterion (visible with
//! `cargo test --test acceptance -- --nocapture`).

use std::time::Instant;

use expfan::verify::{
    backwards_shrinking, conjugacy, endpoint_convergence, flanking, landing, lemma_bracket,
    monotonicity, nwt_default, sharing_slow, unlinked_itineraries, vertical_order, SuiteReport,
};

fn finish(name: &str, limit_s: Option<f64>, report: SuiteReport, started: Instant) {
    let elapsed = started.elapsed().as_secs_f64();
    let in_budget = limit_s.map_or(true, |l| elapsed < l);
    let status = if report.passed && in_budget { "PASS" } else { "FAIL" };
    match limit_s {
        Some(l) => println!(
            "{status} {name}: {} cases in {elapsed:.2}s (limit {l}s)",
            report.cases
        ),
        None => println!("{status} {name}: {} cases in {elapsed:.2}s", report.cases),
    }
    for f in &report.failures {
        println!("  failure: {f}");
    }
    for n in &report.notes {
        println!("  note: {n}");
    }
    assert!(report.passed, "{name} failed: {:?}", report.failures);
    if let Some(l) = limit_s {
        assert!(elapsed < l, "{name} exceeded the {l}s budget ({elapsed:.2}s)");
    }
}

/// 1000 random bounded addresses (|entries| ≤ 10, period ≤ 6, preperiod ≤ 3):
/// the certified minimal-potential interval sits inside
/// [lo(t*) − 1e−9, hi(t*) + 1 + 1e−9].
#[test]
fn criterion_lemma_bracket() {
    let t = Instant::now();
    finish("lemma-bracket", Some(30.0), lemma_bracket(7, 1000), t);
}

/// 500 dominating pairs: lo(t_min(s)) ≥ lo(t_min(s⁰)) − 1e−9.
#[test]
fn criterion_monotonicity() {
    let t = Instant::now();
    finish("monotonicity", Some(30.0), monotonicity(7, 500), t);
}

/// 100 non-endpoint points, j = 2..8:
/// |t − mid(t_min(s^j))| ≤ F^{−j}(2π + 1) + 1e−6.
#[test]
fn criterion_endpoint_approximation() {
    let t = Instant::now();
    finish("endpoint-approximation", Some(60.0), endpoint_convergence(7, 100), t);
}

/// 50 flanking constructions: lexicographic bracketing, fast classification,
/// and certified membership in the T ≥ 3 sub-brush.
#[test]
fn criterion_flanking_sequences() {
    let t = Instant::now();
    finish("flanking-sequences", Some(60.0), flanking(7, 50), t);
}

/// 100 pairs sharing a length-10 itinerary:
/// hi(t*(σ^10 r)) ≤ hi(t_min(s)) + 2π + 1e−6.
#[test]
fn criterion_sharing_is_slow() {
    let t = Instant::now();
    finish("sharing-is-slow", Some(60.0), sharing_slow(7, 100), t);
}

/// 200 cylinder pairs with distinct prefixes: sampled sets are unlinked,
/// zero violations.
#[test]
fn criterion_unlinked_cylinders() {
    let t = Instant::now();
    finish("unlinked-cylinders", None, unlinked_itineraries(7, 200), t);
}

/// Exhaustive wandering-triangle refutation: entries ≤ 1 / period ≤ 2 /
/// preperiod ≤ 1 / horizon 10 / window 2, and entries ≤ 2 / period ≤ 2 /
/// horizon 12 — zero survivors, within 5 minutes total.
#[test]
fn criterion_nwt_exhaustive() {
    let t = Instant::now();
    finish("nwt-exhaustive", Some(300.0), nwt_default(), t);
}

/// ≥ 50 (address, t, a) ray traces at depth 20: conjugacy residual ≤ 1e−6.
#[test]
fn criterion_conjugacy_residual() {
    let t = Instant::now();
    finish("conjugacy-residual", Some(60.0), conjugacy(7), t);
}

/// 20 families of 5 bounded addresses at t = 10, a = −2: the imaginary-part
/// order of traced points equals the lexicographic order, zero violations.
#[test]
fn criterion_vertical_order() {
    let t = Instant::now();
    finish("vertical-order", None, vertical_order(7, 20), t);
}

/// The zero ray of a = −2 lands on the real repelling fixed point to 1e−9
/// (independent bisection oracle), and traced samples of 10 bounded
/// addresses reproduce their address entries as strip itineraries (length 6,
/// zero mismatches).
#[test]
fn criterion_landing_crosscheck() {
    let t = Instant::now();
    finish("landing-crosscheck", None, landing(7), t);
}

/// Backward contraction of potential gaps (supporting property).
#[test]
fn property_backwards_shrinking() {
    let t = Instant::now();
    finish("backwards-shrinking", None, backwards_shrinking(7, 200), t);
}
