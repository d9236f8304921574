//! Small statistics helpers for the harness and its acceptance checks.

use statrs::distribution::{ContinuousCDF, StudentsT};

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Standard deviation of a binomial proportion estimate.
pub fn binomial_sigma(p: f64, shots: usize) -> f64 {
    (p * (1.0 - p) / shots as f64).sqrt()
}

#[derive(Clone, Copy, Debug)]
pub struct SpearmanResult {
    pub rho: f64,
    /// One-sided p-value for the alternative "rho > 0", from the
    /// t-approximation.
    pub p_positive: f64,
}

/// Average ranks, with ties sharing their midpoint rank.
fn ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap());
    let mut out = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            out[idx] = rank;
        }
        i = j + 1;
    }
    out
}

fn pearson(xs: &[f64], ys: &[f64]) -> f64 {
    let mx = mean(xs);
    let my = mean(ys);
    let mut cov = 0.0;
    let mut vx = 0.0;
    let mut vy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        cov += (x - mx) * (y - my);
        vx += (x - mx).powi(2);
        vy += (y - my).powi(2);
    }
    if vx == 0.0 || vy == 0.0 {
        return 0.0;
    }
    cov / (vx * vy).sqrt()
}

/// Spearman rank correlation with tie-averaged ranks, plus the one-sided
/// p-value for a positive association. Needs at least three points.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<SpearmanResult> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return None;
    }
    let rho = pearson(&ranks(xs), &ranks(ys));
    let df = (xs.len() - 2) as f64;
    let p_positive = if rho >= 1.0 {
        0.0
    } else if rho <= -1.0 {
        1.0
    } else {
        let t = rho * (df / (1.0 - rho * rho)).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("valid t distribution");
        1.0 - dist.cdf(t)
    };
    Some(SpearmanResult { rho, p_positive })
}
