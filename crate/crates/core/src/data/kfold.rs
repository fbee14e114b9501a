use crate::error::{Error, Result};
use crate::numkit::RngStream;

/// Assignment of every sample to one of `k` folds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldPlan {
    pub k: usize,
    pub assignments: Vec<usize>,
    /// Classes with fewer than `k` members (some folds miss them).
    pub warnings: Vec<String>,
}

impl FoldPlan {
    /// `(train, validation)` indices for fold `fold`, both ascending.
    pub fn split(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        let mut train = Vec::new();
        let mut valid = Vec::new();
        for (i, &f) in self.assignments.iter().enumerate() {
            if f == fold {
                valid.push(i);
            } else {
                train.push(i);
            }
        }
        (train, valid)
    }

    /// counts[fold][class].
    pub fn class_histograms(&self, y: &[usize], n_classes: usize) -> Vec<Vec<usize>> {
        let mut h = vec![vec![0; n_classes]; self.k];
        for (&f, &label) in self.assignments.iter().zip(y) {
            h[f][label] += 1;
        }
        h
    }
}

/// Stratified k-fold assignment: samples are shuffled within each class,
/// classes are laid end to end, and position `i` goes to fold `i mod k`.
/// Each fold then holds ⌊n_c/k⌋ or ⌈n_c/k⌉ samples of every class c.
pub fn stratified_kfold(y: &[usize], k: usize, rng: &mut RngStream) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::Param(format!("k must be >= 2, got {k}")));
    }
    if k > y.len() {
        return Err(Error::Param(format!("k = {k} exceeds the {} samples", y.len())));
    }
    let n_classes = y.iter().max().map_or(0, |m| m + 1);
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, &label) in y.iter().enumerate() {
        by_class[label].push(i);
    }
    let mut warnings = Vec::new();
    let mut assignments = vec![0; y.len()];
    let mut pos = 0;
    for (class, members) in by_class.iter_mut().enumerate() {
        if !members.is_empty() && members.len() < k {
            warnings.push(format!(
                "class {class} has {} members, fewer than k = {k}",
                members.len()
            ));
        }
        rng.shuffle(members);
        for &i in members.iter() {
            assignments[i] = pos % k;
            pos += 1;
        }
    }
    Ok(FoldPlan {
        k,
        assignments,
        warnings,
    })
}

/// Indices (ascending) of a class-proportional subsample of `target` rows.
/// Per-class quotas use largest remainders.
pub fn stratified_subsample(y: &[usize], target: usize, rng: &mut RngStream) -> Result<Vec<usize>> {
    if target == 0 || target > y.len() {
        return Err(Error::Param(format!("subsample size {target} not in 1..={}", y.len())));
    }
    let n_classes = y.iter().max().map_or(0, |m| m + 1);
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
    for (i, &label) in y.iter().enumerate() {
        by_class[label].push(i);
    }
    let n = y.len();
    let mut quotas: Vec<usize> = by_class.iter().map(|m| target * m.len() / n).collect();
    let mut remainders: Vec<(usize, usize)> = by_class
        .iter()
        .enumerate()
        .map(|(c, m)| ((target * m.len()) % n, c))
        .collect();
    remainders.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut missing = target - quotas.iter().sum::<usize>();
    for &(_, c) in &remainders {
        if missing == 0 {
            break;
        }
        if quotas[c] < by_class[c].len() {
            quotas[c] += 1;
            missing -= 1;
        }
    }
    let mut picked = Vec::with_capacity(target);
    for (members, &q) in by_class.iter_mut().zip(&quotas) {
        rng.shuffle(members);
        picked.extend_from_slice(&members[..q]);
    }
    picked.sort_unstable();
    Ok(picked)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_iris_layout() {
        let y: Vec<usize> = (0..150).map(|i| i / 50).collect();
        let plan = stratified_kfold(&y, 10, &mut RngStream::new(42)).unwrap();
        for row in plan.class_histograms(&y, 3) {
            assert_eq!(row, vec![5, 5, 5]);
        }
        assert!(plan.warnings.is_empty());
    }

    #[test]
    fn folds_partition_the_samples() {
        let y: Vec<usize> = (0..37).map(|i| i % 4).collect();
        let plan = stratified_kfold(&y, 5, &mut RngStream::new(1)).unwrap();
        let mut all: Vec<usize> = (0..5).flat_map(|f| plan.split(f).1).collect();
        all.sort_unstable();
        assert_eq!(all, (0..37).collect::<Vec<_>>());
        let (train, valid) = plan.split(2);
        assert_eq!(train.len() + valid.len(), 37);
        assert!(train.iter().all(|i| !valid.contains(i)));
    }

    #[test]
    fn deterministic_per_seed() {
        let y: Vec<usize> = (0..60).map(|i| i % 3).collect();
        let a = stratified_kfold(&y, 4, &mut RngStream::new(8)).unwrap();
        let b = stratified_kfold(&y, 4, &mut RngStream::new(8)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bad_k() {
        let y = vec![0, 1, 0, 1];
        assert!(stratified_kfold(&y, 1, &mut RngStream::new(0)).is_err());
        assert!(stratified_kfold(&y, 5, &mut RngStream::new(0)).is_err());
        let small = stratified_kfold(&[0, 0, 0, 1], 3, &mut RngStream::new(0)).unwrap();
        assert_eq!(small.warnings.len(), 1);
    }

    #[test]
    fn subsample_is_proportional() {
        let y: Vec<usize> = (0..1000)
            .map(|i| {
                if i < 700 {
                    0
                } else if i < 950 {
                    1
                } else {
                    2
                }
            })
            .collect();
        let idx = stratified_subsample(&y, 100, &mut RngStream::new(3)).unwrap();
        assert_eq!(idx.len(), 100);
        let mut counts = [0; 3];
        for &i in &idx {
            counts[y[i]] += 1;
        }
        assert_eq!(counts, [70, 25, 5]);
        assert!(idx.windows(2).all(|w| w[0] < w[1]));
    }
}
