/// 1-based ranks in ascending order, ties sharing their average rank.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let order = crate::surrogate::ascending_order(values);
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// `per_problem[p][a]` is algorithm `a`'s mean result on problem `p`.
/// Returns each algorithm's rank averaged over problems.
pub fn mean_rank(per_problem: &[Vec<f64>]) -> Vec<f64> {
    let Some(k) = per_problem.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut total = vec![0.0; k];
    for row in per_problem {
        assert_eq!(row.len(), k, "every problem needs a result for each algorithm");
        for (t, r) in total.iter_mut().zip(midranks(row)) {
            *t += r;
        }
    }
    total.into_iter().map(|t| t / per_problem.len() as f64).collect()
}
