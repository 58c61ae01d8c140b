//! Small dense linear algebra: row reduction with partial pivoting, null vectors,
//! square solves and least squares. Matrices are row-major `Vec<Vec<f64>>`.

/// Reduces `m` in place to reduced row echelon form using partial pivoting.
/// Entries whose magnitude is at most `pivot_tol` times the largest entry are
/// treated as zero. Returns the pivot column of each nonzero row.
pub fn rref(m: &mut [Vec<f64>], pivot_tol: f64) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |a, &b| a.max(b.abs()))
        .max(f64::MIN_POSITIVE);
    let thresh = pivot_tol * scale;
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let (best, best_val) = (row..rows)
            .map(|r| (r, m[r][col].abs()))
            .fold((row, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best_val <= thresh {
            for r in row..rows {
                m[r][col] = 0.0;
            }
            continue;
        }
        m.swap(row, best);
        let p = m[row][col];
        for v in m[row].iter_mut() {
            *v /= p;
        }
        for r in 0..rows {
            if r != row {
                let f = m[r][col];
                if f != 0.0 {
                    for c in 0..cols {
                        let delta = f * m[row][c];
                        m[r][c] -= delta;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// A nonzero vector `a` with `Σ a_j columns[j] ≈ 0`, normalized to max-norm 1,
/// or `None` if the columns are numerically independent. The free variable
/// chosen is the first non-pivot column.
pub fn null_vector(columns: &[&[f64]], pivot_tol: f64) -> Option<Vec<f64>> {
    let n = columns.len();
    if n == 0 {
        return None;
    }
    let m = columns[0].len();
    let mut mat: Vec<Vec<f64>> = (0..m)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect();
    let pivots = rref(&mut mat, pivot_tol);
    let free = (0..n).find(|j| !pivots.contains(j))?;
    let mut a = vec![0.0; n];
    a[free] = 1.0;
    for (r, &pc) in pivots.iter().enumerate() {
        a[pc] = -mat[r][free];
    }
    let mx = a.iter().fold(0.0f64, |x, v| x.max(v.abs()));
    for v in a.iter_mut() {
        *v /= mx;
    }
    Some(a)
}

/// Solves the square system `a x = b` with partial pivoting; `None` if singular.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>, pivot_tol: f64) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |x, v| x.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= pivot_tol * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in (col + 1)..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    let delta = f * a[col][c];
                    a[r][c] -= delta;
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = ((r + 1)..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Least-squares coefficients `w` minimizing `|Σ w_j columns[j] - target|` via the
/// normal equations. `None` if the columns are numerically dependent.
pub fn least_squares(columns: &[&[f64]], target: &[f64], pivot_tol: f64) -> Option<Vec<f64>> {
    let n = columns.len();
    let gram: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| super::dot(columns[i], columns[j])).collect())
        .collect();
    let rhs: Vec<f64> = columns.iter().map(|c| super::dot(c, target)).collect();
    solve(gram, rhs, pivot_tol)
}
