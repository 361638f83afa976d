//! Test-fold generation for cross-validation.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::seed;

/// Disjoint test folds covering every index exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Folds {
    pub folds: Vec<Vec<usize>>,
    /// The labels held a single class, so stratification had nothing to balance.
    pub single_class: bool,
}

impl Folds {
    /// Indices outside fold `f`, ascending.
    pub fn train_indices(&self, f: usize) -> Vec<usize> {
        let n: usize = self.folds.iter().map(Vec::len).sum();
        let mut in_test = vec![false; n];
        for &i in &self.folds[f] {
            in_test[i] = true;
        }
        (0..n).filter(|&i| !in_test[i]).collect()
    }
}

/// Stratified k-fold: each class is shuffled, the classes are laid end to end
/// and position `i` goes to fold `i mod k`. Fold contents are sorted.
pub fn stratified_kfold(labels: &[bool], k: usize, seed_value: u64) -> Result<Folds, EvalError> {
    if k < 2 {
        return Err(EvalError::InvalidFolds(k));
    }
    let mut rng = seed::rng(seed_value);
    let mut order = Vec::with_capacity(labels.len());
    for class in [true, false] {
        let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        seed::shuffle(&mut members, &mut rng);
        order.extend(members);
    }
    let mut folds = vec![Vec::new(); k];
    for (pos, &i) in order.iter().enumerate() {
        folds[pos % k].push(i);
    }
    for f in &mut folds {
        f.sort_unstable();
    }
    let ones = labels.iter().filter(|&&l| l).count();
    Ok(Folds {
        folds,
        single_class: ones == 0 || ones == labels.len(),
    })
}

/// K-fold over groups: every index of a group lands in the same fold.
/// Uses `min(k, number of groups)` folds.
pub fn grouped_kfold(groups: &[u32], k: usize, seed_value: u64) -> Result<Folds, EvalError> {
    if k < 2 {
        return Err(EvalError::InvalidFolds(k));
    }
    let mut unique: Vec<u32> = groups.to_vec();
    unique.sort_unstable();
    unique.dedup();
    if unique.len() < 2 {
        return Err(EvalError::NotEnoughGroups(unique.len()));
    }
    let mut rng = seed::rng(seed_value);
    seed::shuffle(&mut unique, &mut rng);
    let k = k.min(unique.len());
    let mut folds = vec![Vec::new(); k];
    for (i, &g) in groups.iter().enumerate() {
        let pos = unique.iter().position(|&u| u == g).unwrap_or(0);
        folds[pos % k].push(i);
    }
    Ok(Folds {
        folds,
        single_class: false,
    })
}

/// One leave-one-subject-out split.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubjectSplit {
    pub test_subject: u32,
    pub train_subjects: Vec<u32>,
}

pub fn leave_one_subject_out(subjects: &[u32]) -> Result<Vec<SubjectSplit>, EvalError> {
    let mut unique: Vec<u32> = subjects.to_vec();
    unique.sort_unstable();
    unique.dedup();
    if unique.len() < 2 {
        return Err(EvalError::NotEnoughSubjects(unique.len()));
    }
    Ok(unique
        .iter()
        .map(|&s| SubjectSplit {
            test_subject: s,
            train_subjects: unique.iter().copied().filter(|&o| o != s).collect(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn class_count(fold: &[usize], labels: &[bool], class: bool) -> usize {
        fold.iter().filter(|&&i| labels[i] == class).count()
    }

    #[test]
    fn balanced_twenty_gives_one_of_each() {
        let labels: Vec<bool> = (0..20).map(|i| i % 2 == 0).collect();
        let f = stratified_kfold(&labels, 10, 3).unwrap();
        for fold in &f.folds {
            assert_eq!(class_count(fold, &labels, true), 1);
            assert_eq!(class_count(fold, &labels, false), 1);
        }
        assert!(!f.single_class);
    }

    #[test]
    fn minority_in_one_fold() {
        let mut labels = vec![false; 10];
        labels[4] = true;
        let f = stratified_kfold(&labels, 10, 1).unwrap();
        let holding: Vec<_> = f.folds.iter().filter(|fold| fold.contains(&4)).collect();
        assert_eq!(holding.len(), 1);
    }

    #[test]
    fn same_seed_same_folds() {
        let labels: Vec<bool> = (0..37).map(|i| i % 3 == 0).collect();
        assert_eq!(stratified_kfold(&labels, 5, 9), stratified_kfold(&labels, 5, 9));
        assert_ne!(stratified_kfold(&labels, 5, 9), stratified_kfold(&labels, 5, 10));
    }

    #[test]
    fn single_class_flagged() {
        let f = stratified_kfold(&[true; 12], 4, 0).unwrap();
        assert!(f.single_class);
        assert_eq!(f.folds.iter().map(Vec::len).sum::<usize>(), 12);
    }

    #[test]
    fn loso_examples() {
        let twelve: Vec<u32> = (0..12).flat_map(|s| [s, s]).collect();
        let splits = leave_one_subject_out(&twelve).unwrap();
        assert_eq!(splits.len(), 12);
        assert!(splits.iter().all(|s| s.train_subjects.len() == 11 && !s.train_subjects.contains(&s.test_subject)));
        assert_eq!(leave_one_subject_out(&[0, 1]).unwrap().len(), 2);
        assert_eq!(leave_one_subject_out(&[3, 3]), Err(EvalError::NotEnoughSubjects(1)));
    }

    #[test]
    fn grouped_folds_keep_groups_together() {
        let groups = [0, 0, 1, 1, 2, 2, 3];
        let f = grouped_kfold(&groups, 10, 5).unwrap();
        assert_eq!(f.folds.len(), 4);
        for fold in &f.folds {
            let g = groups[fold[0]];
            assert!(fold.iter().all(|&i| groups[i] == g));
        }
    }

    proptest! {
        #[test]
        fn stratified_folds_partition_and_balance(labels in proptest::collection::vec(any::<bool>(), 0..120), k in 2usize..12, s in any::<u64>()) {
            let f = stratified_kfold(&labels, k, s).unwrap();
            let mut all: Vec<usize> = f.folds.iter().flatten().copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..labels.len()).collect::<Vec<_>>());
            for class in [true, false] {
                let total = labels.iter().filter(|&&l| l == class).count() as f64;
                for fold in &f.folds {
                    let c = class_count(fold, &labels, class) as f64;
                    prop_assert!((c - total / k as f64).abs() < 1.0 + 1e-12);
                }
            }
        }
    }
}
