/// Swap count `round(τ·(1 − μ/M)^κ · active)` for interval `mu` of a
/// schedule with `num_intervals` (`M`) updates. Zero from `μ = M` on.
pub fn scheduler_upsilon(
    mu: usize,
    num_intervals: usize,
    swap_ratio: f64,
    decay: f64,
    active: usize,
) -> usize {
    if mu >= num_intervals {
        return 0;
    }
    let frac = 1.0 - mu as f64 / num_intervals as f64;
    let r = libm::round(swap_ratio * libm::pow(frac, decay) * active as f64);
    if r > 0.0 {
        r as usize
    } else {
        0
    }
}
