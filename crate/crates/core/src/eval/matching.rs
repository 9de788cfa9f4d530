//! Maximum-weight bipartite matching (Hungarian method with potentials).

use crate::scalar::Weight;

/// Minimum-cost assignment of every row to a distinct column, for
/// `rows <= cols`. Returns the column of each row.
fn hungarian_min<W: Weight>(cost: &[Vec<W>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    let m = cost[0].len();
    debug_assert!(n <= m);

    // 1-based potentials; column 0 is a virtual start column.
    let mut u = vec![W::zero(); n + 1];
    let mut v = vec![W::zero(); m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];

    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0;
        let mut min_slack: Vec<Option<W>> = vec![None; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[col0] = true;
            let i0 = owner[col0];
            let mut delta: Option<W> = None;
            let mut col1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let reduced = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if min_slack[j].is_none_or(|s| reduced < s) {
                    min_slack[j] = Some(reduced);
                    way[j] = col0;
                }
                let slack = min_slack[j].expect("set above");
                if delta.is_none_or(|d| slack < d) {
                    delta = Some(slack);
                    col1 = j;
                }
            }
            let delta = delta.expect("a free column exists while rows <= cols");
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else if let Some(s) = min_slack[j].as_mut() {
                    *s -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let prev = way[col0];
            owner[col0] = owner[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }

    let mut assignment = vec![0; n];
    for j in 1..=m {
        if owner[j] > 0 {
            assignment[owner[j] - 1] = j - 1;
        }
    }
    assignment
}

/// Total weight of a maximum-weight matching of cardinality
/// `min(rows, cols)` restricted to the given rows and columns.
fn optimum<W: Weight>(weights: &[Vec<W>], rows: &[usize], cols: &[usize]) -> W {
    if rows.is_empty() || cols.is_empty() {
        return W::zero();
    }
    let transpose = rows.len() > cols.len();
    let (outer, inner) = if transpose {
        (cols, rows)
    } else {
        (rows, cols)
    };
    let cost: Vec<Vec<W>> = outer
        .iter()
        .map(|&a| {
            inner
                .iter()
                .map(|&b| {
                    let w = if transpose {
                        weights[b][a]
                    } else {
                        weights[a][b]
                    };
                    W::zero() - w
                })
                .collect()
        })
        .collect();
    hungarian_min(&cost)
        .into_iter()
        .enumerate()
        .fold(W::zero(), |acc, (i, j)| acc - cost[i][j])
}

/// Maximum-weight matching of cardinality `min(rows, cols)`.
///
/// Among optimal matchings the one returned is lexicographically smallest
/// when each row, in order, is assigned the lowest column index that still
/// allows an optimal completion (leaving a row unmatched sorts last).
/// Returns `(row, col)` pairs in row order.
pub fn max_weight_matching<W: Weight>(weights: &[Vec<W>]) -> Vec<(usize, usize)> {
    let n_rows = weights.len();
    let n_cols = weights.first().map_or(0, Vec::len);
    debug_assert!(weights.iter().all(|r| r.len() == n_cols));

    let mut rows: Vec<usize> = (0..n_rows).collect();
    let mut cols: Vec<usize> = (0..n_cols).collect();
    let mut target = optimum(weights, &rows, &cols);
    let mut pairs = Vec::new();

    while let Some(&row) = rows.first() {
        if cols.is_empty() {
            break;
        }
        let rest_rows = &rows[1..];
        let mut chosen = None;
        for (pos, &col) in cols.iter().enumerate() {
            let mut rest_cols = cols.clone();
            rest_cols.remove(pos);
            let value = weights[row][col] + optimum(weights, rest_rows, &rest_cols);
            if value.near(target) || value > target {
                chosen = Some((pos, col, value));
                break;
            }
        }
        match chosen {
            Some((pos, col, value)) => {
                pairs.push((row, col));
                cols.remove(pos);
                target = value - weights[row][col];
            }
            None => {
                // Only reachable with more rows than columns: this row stays
                // unmatched.
                debug_assert!(rows.len() > cols.len());
            }
        }
        rows.remove(0);
    }
    pairs
}

/// Sum of weights over `pairs`.
pub fn matching_weight<W: Weight>(weights: &[Vec<W>], pairs: &[(usize, usize)]) -> W {
    pairs
        .iter()
        .fold(W::zero(), |acc, &(r, c)| acc + weights[r][c])
}
