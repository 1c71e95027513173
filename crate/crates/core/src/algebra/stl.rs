//! Smooth min/max robustness operators `A^r` and `O^r` on weighted families
//! of extended reals.

/// Weighted `A^r`, a smooth approximation of the minimum.
///
/// Members with weight 0 are ignored. `-inf` anywhere gives `-inf`; `+inf`
/// members carry no mass unless every member is `+inf`.
pub fn and_r(r: f64, family: &[(f64, f64)]) -> f64 {
    let live: Vec<(f64, f64)> = family.iter().copied().filter(|(w, _)| *w > 0.0).collect();
    if live.iter().any(|(_, a)| *a == f64::NEG_INFINITY) {
        return f64::NEG_INFINITY;
    }
    let finite: Vec<(f64, f64)> = live.into_iter().filter(|(_, a)| a.is_finite()).collect();
    if finite.is_empty() {
        return f64::INFINITY;
    }
    let a_min = finite.iter().map(|(_, a)| *a).fold(f64::INFINITY, f64::min);
    if a_min == 0.0 {
        return 0.0;
    }
    let tilde = |a: f64| (a - a_min) / a_min;
    let (mut num, mut den) = (0.0, 0.0);
    if a_min < 0.0 {
        // tilde <= 0 here, so every exponential is at most 1.
        for &(w, a) in &finite {
            let t = tilde(a);
            num += w * a_min * t.exp() * (r * t).exp();
            den += w * (r * t).exp();
        }
    } else {
        for &(w, a) in &finite {
            let t = tilde(a);
            num += w * a * (-r * t).exp();
            den += w * (-r * t).exp();
        }
    }
    num / den
}

/// Weighted `O^r(fam) = -A^r(-fam)`.
pub fn or_r(r: f64, family: &[(f64, f64)]) -> f64 {
    let negated: Vec<(f64, f64)> = family.iter().map(|&(w, a)| (w, -a)).collect();
    -and_r(r, &negated)
}
