/// Distance between `u` and `v` on the unit circle `R / Z`.
///
/// Returns `min(d, 1 - d)` with `d = (u - v) mod 1`, so the result lies in
/// `[0, 0.5]` and is unchanged by adding integers to either argument.
pub fn circular_distance(u: f64, v: f64) -> f64 {
    let d = (u - v).rem_euclid(1.0);
    d.min(1.0 - d).max(0.0)
}

/// Representative of `u` in `[0, 1)`.
pub fn wrap_unit(u: f64) -> f64 {
    let r = u.rem_euclid(1.0);
    // rem_euclid rounds tiny negatives up to exactly 1.0
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}
