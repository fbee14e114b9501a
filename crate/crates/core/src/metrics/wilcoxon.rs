use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Largest number of non-zero differences for which the exact null
/// distribution is used.
pub const EXACT_MAX_N: usize = 20;
pub const MIN_PAIRS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WilcoxonResult {
    /// `min(W+, W-)`.
    pub statistic: f64,
    pub w_plus: f64,
    pub w_minus: f64,
    pub p_two_sided: f64,
    /// Non-zero differences actually ranked.
    pub n: usize,
    pub exact: bool,
}

/// Average ranks (1-based) of `values`, doubled so that ties stay integral.
fn doubled_ranks(values: &[f64]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0u64; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i..=j share rank ((i+1) + (j+1)) / 2
        let doubled = (i + j + 2) as u64;
        for &k in &order[i..=j] {
            ranks[k] = doubled;
        }
        i = j + 1;
    }
    ranks
}

/// Paired two-sided Wilcoxon signed-rank test.
///
/// Zero differences are dropped, tied magnitudes share average ranks. For up
/// to [`EXACT_MAX_N`] pairs the p-value comes from the exact sign-flip
/// distribution of the (possibly tied) ranks; above that a normal
/// approximation with tie and continuity correction is used.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(Error::shape("wilcoxon_signed_rank", a.len(), b.len()));
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|d| *d != 0.0).collect();
    let n = diffs.len();
    if n < MIN_PAIRS {
        return Err(Error::InsufficientData(format!(
            "wilcoxon needs at least {MIN_PAIRS} non-zero differences, got {n}"
        )));
    }
    let magnitudes: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = doubled_ranks(&magnitudes);
    let plus2: u64 = diffs
        .iter()
        .zip(&ranks)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();
    let total2: u64 = ranks.iter().sum();
    let minus2 = total2 - plus2;
    let w2 = plus2.min(minus2);

    let (p, exact) = if n <= EXACT_MAX_N {
        // counts[s] = number of sign patterns whose doubled W+ equals s
        let mut counts = vec![0f64; total2 as usize + 1];
        counts[0] = 1.0;
        let mut reach = 0usize;
        for &r in &ranks {
            let r = r as usize;
            for s in (0..=reach).rev() {
                if counts[s] != 0.0 {
                    counts[s + r] += counts[s];
                }
            }
            reach += r;
        }
        let below: f64 = counts[..=w2 as usize].iter().sum();
        let p = 2.0 * below / 2f64.powi(n as i32);
        (p.min(1.0), true)
    } else {
        let nf = n as f64;
        let mean = nf * (nf + 1.0) / 4.0;
        let mut tie_term = 0.0;
        let mut sorted = ranks.clone();
        sorted.sort_unstable();
        for group in sorted.chunk_by(|x, y| x == y) {
            let t = group.len() as f64;
            tie_term += t * t * t - t;
        }
        let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term / 48.0;
        if var <= 0.0 {
            return Err(Error::Numeric("wilcoxon variance is zero".into()));
        }
        let w = w2 as f64 / 2.0;
        let z = ((w - mean).abs() - 0.5).max(0.0) / var.sqrt();
        let normal = Normal::new(0.0, 1.0).expect("standard normal");
        ((2.0 * (1.0 - normal.cdf(z))).min(1.0), false)
    };

    Ok(WilcoxonResult {
        statistic: w2 as f64 / 2.0,
        w_plus: plus2 as f64 / 2.0,
        w_minus: minus2 as f64 / 2.0,
        p_two_sided: p,
        n,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_positive_five() {
        let a = [2.0, 3.0, 4.0, 5.0, 6.0];
        let b = [1.0, 1.0, 1.0, 1.0, 1.0];
        let r = wilcoxon_signed_rank(&a, &b).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_two_sided - 2.0 / 32.0).abs() < 1e-15);
        assert!(r.exact);
    }

    #[test]
    fn identical_samples_are_insufficient() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        assert!(matches!(wilcoxon_signed_rank(&a, &a), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn tied_ranks_are_averaged() {
        assert_eq!(doubled_ranks(&[1.0, 2.0, 2.0, 3.0]), vec![2, 5, 5, 8]);
    }

    #[test]
    fn large_n_uses_normal_approximation() {
        let a: Vec<f64> = (0..30).map(|i| i as f64 + 0.5).collect();
        let b: Vec<f64> = (0..30)
            .map(|i| if i % 3 == 0 { i as f64 + 1.0 } else { i as f64 })
            .collect();
        let r = wilcoxon_signed_rank(&a, &b).unwrap();
        assert!(!r.exact);
        assert!(r.p_two_sided > 0.0 && r.p_two_sided < 1.0);
    }

    #[test]
    fn symmetric_in_arguments() {
        let a = [1.2, 3.4, 0.5, 7.7, 2.2, 9.1, 4.0];
        let b = [1.0, 3.9, 0.1, 6.0, 2.9, 9.0, 5.5];
        let ab = wilcoxon_signed_rank(&a, &b).unwrap();
        let ba = wilcoxon_signed_rank(&b, &a).unwrap();
        assert_eq!(ab.statistic, ba.statistic);
        assert_eq!(ab.p_two_sided, ba.p_two_sided);
    }
}
