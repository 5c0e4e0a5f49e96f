//! Helpers shared by the integration test targets.

use deltashock::scalar::sampled_envelope_oracle;
use deltashock::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Envelope value at `u` read off an exact fan: chords across shocks, the
/// flux itself across rarefactions.
pub fn fan_envelope(flux: &Flux, fan: &Fan, u: f64) -> f64 {
    for w in fan.waves() {
        let (a, b) = (w.left().min(w.right()), w.left().max(w.right()));
        if u >= a && u <= b {
            return if w.is_shock() {
                let (fl, fr) = (flux.value(w.left()), flux.value(w.right()));
                fl + (fr - fl) * (u - w.left()) / (w.right() - w.left())
            } else {
                flux.value(u)
            };
        }
    }
    flux.value(u)
}

/// C¹ three-piece flux: concave middle, convex outer pieces.
pub fn random_double_well(rng: &mut ChaCha8Rng) -> Flux {
    let b = rng.gen_range(0.5..2.0);
    let s = rng.gen_range(-0.5..0.5);
    let e = rng.gen_range(-1.0..1.0);
    let mid = QuadraticPiece::new(-b, s, e);
    let p1: f64 = rng.gen_range(-1.5..-0.5);
    let p2: f64 = rng.gen_range(0.5..1.5);
    let outer = |p: f64, a: f64| {
        // a(u − p)² + m(u − p) + y expanded
        let (m, y) = (mid.slope(p), mid.value(p));
        QuadraticPiece::new(a, m - 2.0 * a * p, a * p * p - m * p + y)
    };
    let a1 = rng.gen_range(0.5..3.0);
    let a2 = rng.gen_range(0.5..3.0);
    Flux::new(vec![
        (f64::NEG_INFINITY, outer(p1, a1)),
        (p1, mid),
        (p2, outer(p2, a2)),
    ])
    .expect("C¹ by construction")
}

pub fn check_against_oracle(flux: &Flux, u_l: f64, u_r: f64, n: usize) -> Result<(), String> {
    let fan = solve_scalar(flux, u_l, u_r).map_err(|e| e.to_string())?;
    let oracle = sampled_envelope_oracle(flux, u_l, u_r, n);
    let scale = 1.0 + flux.value(u_l).abs().max(flux.value(u_r).abs());
    for k in 0..=400 {
        let u = u_l + (u_r - u_l) * k as f64 / 400.0;
        let d = (fan_envelope(flux, &fan, u) - oracle.value(u)).abs();
        if d > 1e-6 * scale {
            return Err(format!("envelope mismatch {d:e} at u = {u}"));
        }
    }
    let exact: Vec<(f64, f64)> = fan
        .shocks()
        .map(|w| (w.left(), w.right()))
        .filter(|(a, b)| (a - b).abs() > 1e-2)
        .collect();
    let sampled: Vec<(f64, f64)> = oracle
        .shock_states()
        .into_iter()
        .filter(|(a, b)| (a - b).abs() > 1e-2)
        .collect();
    if exact.len() != sampled.len() {
        return Err(format!("shock count {exact:?} vs {sampled:?}"));
    }
    for ((a, b), (c, d)) in exact.iter().zip(&sampled) {
        if (a - c).abs() > 1e-3 || (b - d).abs() > 1e-3 {
            return Err(format!("shock states {exact:?} vs {sampled:?}"));
        }
    }
    Ok(())
}
