/// Twelve significant digits; scientific notation outside `[1e-4, 1e12)`.
pub fn sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-4..12).contains(&mag) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// `a + bi` / `a - bi` with [`sig`] parts.
pub fn cx(re: f64, im: f64) -> String {
    if im < 0.0 {
        format!("{} - {}i", sig(re), sig(-im))
    } else {
        format!("{} + {}i", sig(re), sig(im))
    }
}
