/// `(f, fg)` on the level set `Φ1 = (1-k²)/4`, `Φ2 = (1+k²)/2`:
/// `f = (P + Q)/2`, `fg = (P - Q)/2` with `P = √(1+(x1+x2)²)`,
/// `Q = √(k²+(x1-x2)²)`.
pub fn dihedral_f_fg(x1: f64, x2: f64, k: f64) -> (f64, f64) {
    let p = (1.0 + (x1 + x2).powi(2)).sqrt();
    let q = (k * k + (x1 - x2).powi(2)).sqrt();
    ((p + q) / 2.0, (p - q) / 2.0)
}

/// Residuals of the two first integrals,
/// `Φ1 = f·fg - x1 x2` and `Φ2 = (fg)² + f² - x1² - x2²`, against their
/// level values; each is relative to the size of its largest term.
pub fn first_integral_residuals(x1: f64, x2: f64, k: f64) -> (f64, f64) {
    let (f, fg) = dihedral_f_fg(x1, x2, k);
    let rel = |terms: &[f64]| {
        let scale = terms.iter().fold(1.0f64, |m, t| m.max(t.abs()));
        terms.iter().sum::<f64>().abs() / scale
    };
    let phi1 = rel(&[f * fg, -x1 * x2, -(1.0 - k * k) / 4.0]);
    let phi2 = rel(&[fg * fg, f * f, -x1 * x1, -x2 * x2, -(1.0 + k * k) / 2.0]);
    (phi1, phi2)
}
