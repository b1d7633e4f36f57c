/// Fixed 17-significant-digit scientific notation, so identical values always
/// print identically.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}
