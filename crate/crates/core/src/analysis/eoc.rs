/// Experimental orders of convergence `log(e_{i-1}/e_i) / log(h_{i-1}/h_i)`.
///
/// The first entry is always `None`; so is any rate involving a non-positive error.
pub fn eoc(errors: &[(f64, f64)]) -> Vec<Option<f64>> {
    let mut out = Vec::with_capacity(errors.len());
    if errors.is_empty() {
        return out;
    }
    out.push(None);
    for w in errors.windows(2) {
        let ((h0, e0), (h1, e1)) = (w[0], w[1]);
        let rate = if e0 > 0.0 && e1 > 0.0 && h0 > h1 && h1 > 0.0 {
            Some((e0 / e1).ln() / (h0 / h1).ln())
        } else {
            None
        };
        out.push(rate);
    }
    out
}

/// Mean of the defined rates, `None` if there is none.
pub fn mean_rate(rates: &[Option<f64>]) -> Option<f64> {
    let defined: Vec<f64> = rates.iter().flatten().copied().collect();
    (!defined.is_empty()).then(|| defined.iter().sum::<f64>() / defined.len() as f64)
}
