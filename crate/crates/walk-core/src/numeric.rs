//! Small numeric helpers shared across modules.

/// Neumaier-compensated sum. The norm and closure invariants are checked at
/// 1e-12 over up to ~10^5 terms, which plain left-to-right summation does not
/// reliably deliver.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
