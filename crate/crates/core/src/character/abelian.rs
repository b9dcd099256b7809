//! Smith normal form for the relation lattice of a finite abelian group.

/// `U * R * V = diag(invariants)` with `V` and `V^-1` kept.
#[derive(Clone, Debug)]
pub(crate) struct SmithForm {
    pub(crate) diagonal: Vec<i128>,
    pub(crate) v: Vec<Vec<i128>>,
    pub(crate) v_inv: Vec<Vec<i128>>,
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

/// Smith normal form of a square integer matrix of full rank.
pub(crate) fn smith_normal_form(rel: &[Vec<i128>]) -> SmithForm {
    let n = rel.len();
    let mut a: Vec<Vec<i128>> = rel.to_vec();
    let mut v = identity(n);
    let mut v_inv = identity(n);

    // column j -= q * column t
    let col_axpy = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, vi: &mut Vec<Vec<i128>>, t: usize, j: usize, q: i128| {
        for row in a.iter_mut() {
            row[j] -= q * row[t];
        }
        for row in v.iter_mut() {
            row[j] -= q * row[t];
        }
        for c in 0..n {
            let x = vi[j][c];
            vi[t][c] += q * x;
        }
    };
    let col_swap = |a: &mut Vec<Vec<i128>>, v: &mut Vec<Vec<i128>>, vi: &mut Vec<Vec<i128>>, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
        vi.swap(i, j);
    };

    for t in 0..n {
        loop {
            let mut pivot = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j] != 0 && pivot.is_none_or(|(_, _, m): (usize, usize, i128)| a[i][j].abs() < m) {
                        pivot = Some((i, j, a[i][j].abs()));
                    }
                }
            }
            let Some((pi, pj, _)) = pivot else { break };
            a.swap(t, pi);
            col_swap(&mut a, &mut v, &mut v_inv, t, pj);

            let mut dirty = false;
            for i in t + 1..n {
                let q = a[i][t].div_euclid(a[t][t]);
                if q != 0 {
                    let pivot_row = a[t].clone();
                    for (x, y) in a[i].iter_mut().zip(pivot_row.iter()) {
                        *x -= q * y;
                    }
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..n {
                let q = a[t][j].div_euclid(a[t][t]);
                if q != 0 {
                    col_axpy(&mut a, &mut v, &mut v_inv, t, j, q);
                }
                dirty |= a[t][j] != 0;
            }
            if dirty {
                continue;
            }
            let d = a[t][t];
            let offender = (t + 1..n).find(|&i| (t + 1..n).any(|j| a[i][j] % d != 0));
            match offender {
                Some(i) => {
                    let row = a[i].clone();
                    for (x, y) in a[t].iter_mut().zip(row.iter()) {
                        *x += y;
                    }
                }
                None => break,
            }
        }
        if a[t][t] < 0 {
            for row in a.iter_mut() {
                row[t] = -row[t];
            }
            for row in v.iter_mut() {
                row[t] = -row[t];
            }
            for x in v_inv[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    SmithForm { diagonal: (0..n).map(|i| a[i][i]).collect(), v, v_inv }
}
