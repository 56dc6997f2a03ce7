//! Number rendering shared by the report and the CSV writers.

/// Nine significant digits in scientific notation, `.` as decimal separator.
/// Non-finite values render as `inf`, `-inf` and `NaN`, which `f64::from_str`
/// reads back.
pub fn sig9(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.8e}")
    } else {
        format!("{x}")
    }
}
