use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{EvalError, Result};

/// Assignment of every row index to exactly one test fold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    k: usize,
    assignment: Vec<usize>,
    stratified: bool,
}

impl FoldPlan {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_stratified(&self) -> bool {
        self.stratified
    }

    /// Fold index of row `i`.
    pub fn fold_of(&self, i: usize) -> usize {
        self.assignment[i]
    }

    /// Row indices held out in fold `f`, ascending.
    pub fn test_indices(&self, f: usize) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.assignment[i] == f).collect()
    }

    /// Row indices used for training when fold `f` is held out, ascending.
    pub fn train_indices(&self, f: usize) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.assignment[i] != f).collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.assignment {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Seeded k-fold split. Indices are shuffled and dealt round-robin; with
/// `strata`, each stratum is shuffled and dealt in turn, continuing from the
/// fold where the previous stratum stopped.
pub fn kfold_plan(n: usize, k: usize, seed: u64, strata: Option<&[usize]>) -> Result<FoldPlan> {
    if k < 2 {
        return Err(EvalError::BadFolds(format!("k = {k} must be at least 2")));
    }
    if k > n {
        return Err(EvalError::BadFolds(format!("k = {k} exceeds n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut assignment = vec![0; n];
    match strata {
        None => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            for (pos, &i) in order.iter().enumerate() {
                assignment[i] = pos % k;
            }
        }
        Some(labels) => {
            if labels.len() != n {
                return Err(EvalError::LengthMismatch(n, labels.len()));
            }
            let n_strata = labels.iter().max().map_or(0, |m| m + 1);
            let mut next = 0;
            for s in 0..n_strata {
                let mut members: Vec<usize> = (0..n).filter(|&i| labels[i] == s).collect();
                members.shuffle(&mut rng);
                for i in members {
                    assignment[i] = next;
                    next = (next + 1) % k;
                }
            }
        }
    }
    Ok(FoldPlan {
        k,
        assignment,
        stratified: strata.is_some(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_equal_folds() {
        let plan = kfold_plan(100, 10, 42, None).unwrap();
        assert_eq!(plan.fold_sizes(), vec![10; 10]);
        let mut seen = vec![0; 100];
        for f in 0..10 {
            for i in plan.test_indices(f) {
                seen[i] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn leave_one_out() {
        let plan = kfold_plan(7, 7, 1, None).unwrap();
        assert_eq!(plan.fold_sizes(), vec![1; 7]);
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        assert_eq!(kfold_plan(50, 5, 9, None).unwrap(), kfold_plan(50, 5, 9, None).unwrap());
        assert_ne!(kfold_plan(50, 5, 9, None).unwrap(), kfold_plan(50, 5, 10, None).unwrap());
    }

    #[test]
    fn errors() {
        assert!(kfold_plan(5, 6, 0, None).is_err());
        assert!(kfold_plan(5, 1, 0, None).is_err());
        assert!(kfold_plan(5, 2, 0, Some(&[0, 1])).is_err());
    }

    #[test]
    fn stratified_balance() {
        let labels: Vec<usize> = (0..103).map(|i| if i < 60 { 0 } else if i < 90 { 1 } else { 2 }).collect();
        let plan = kfold_plan(103, 10, 3, Some(&labels)).unwrap();
        let sizes = plan.fold_sizes();
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        for class in 0..3 {
            let global = labels.iter().filter(|&&l| l == class).count() as f64 / 10.0;
            for f in 0..10 {
                let in_fold = plan.test_indices(f).iter().filter(|&&i| labels[i] == class).count() as f64;
                assert!((in_fold - global).abs() <= 1.0);
            }
        }
    }
}
