//! Integer lattice algebra over `i64`: row-style Hermite normal form, integer
//! kernels, Smith normal form and sublattice intersection.
//!
//! Lattices are represented by the row span of a matrix. Matrices are plain
//! `Vec<Vec<i64>>`; every function takes the column count explicitly so that
//! empty matrices still carry their dimension.

pub type Matrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn transpose(a: &[Vec<i64>], ncols: usize) -> Matrix {
    (0..ncols)
        .map(|j| a.iter().map(|row| row[j]).collect())
        .collect()
}

fn row_sub(a: &mut [Vec<i64>], target: usize, source: usize, q: i64) {
    if q == 0 {
        return;
    }
    let (t, s) = if target < source {
        let (lo, hi) = a.split_at_mut(source);
        (&mut lo[target], &hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(target);
        (&mut hi[0], &lo[source])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        *x -= q * *y;
    }
}

/// Result of a row Hermite reduction `transform * input = rows`.
#[derive(Clone, Debug)]
pub struct Hermite {
    /// All rows of the reduced matrix; the first `rank` are nonzero and in
    /// echelon form, the rest are zero.
    pub rows: Matrix,
    /// Unimodular transform with `transform * input = rows`.
    pub transform: Matrix,
    pub rank: usize,
    /// Pivot column of each nonzero row.
    pub pivots: Vec<usize>,
}

impl Hermite {
    pub fn basis(&self) -> &[Vec<i64>] {
        &self.rows[..self.rank]
    }
}

/// Row-style Hermite normal form: pivots positive, entries above each pivot
/// reduced into `[0, pivot)`.
pub fn hermite(a: &[Vec<i64>], ncols: usize) -> Hermite {
    let r = a.len();
    let mut h: Matrix = a.to_vec();
    let mut u = identity(r);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == r {
            break;
        }
        let mut found = false;
        loop {
            let mut best: Option<usize> = None;
            for i in row..r {
                if h[i][col] != 0 && best.is_none_or(|b| h[i][col].abs() < h[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(p) = best else { break };
            found = true;
            h.swap(p, row);
            u.swap(p, row);
            let mut clean = true;
            for i in row + 1..r {
                if h[i][col] != 0 {
                    let q = h[i][col] / h[row][col];
                    row_sub(&mut h, i, row, q);
                    row_sub(&mut u, i, row, q);
                    if h[i][col] != 0 {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if !found {
            continue;
        }
        if h[row][col] < 0 {
            h[row].iter_mut().for_each(|x| *x = -*x);
            u[row].iter_mut().for_each(|x| *x = -*x);
        }
        let p = h[row][col];
        for i in 0..row {
            let q = h[i][col].div_euclid(p);
            row_sub(&mut h, i, row, q);
            row_sub(&mut u, i, row, q);
        }
        pivots.push(col);
        row += 1;
    }
    Hermite {
        rows: h,
        transform: u,
        rank: row,
        pivots,
    }
}

/// Canonical echelon basis of the row span of `a`.
pub fn hnf_basis(a: &[Vec<i64>], ncols: usize) -> Matrix {
    let h = hermite(a, ncols);
    h.rows[..h.rank].to_vec()
}

/// Basis of `{ y : y * a = 0 }`.
pub fn left_kernel(a: &[Vec<i64>], ncols: usize) -> Matrix {
    let h = hermite(a, ncols);
    let mut k: Matrix = h.transform[h.rank..].to_vec();
    let n = a.len();
    hnf_basis(&std::mem::take(&mut k), n)
}

/// Basis of `{ x : a * x = 0 }` for an `a` with `ncols` columns.
pub fn integer_kernel(a: &[Vec<i64>], ncols: usize) -> Matrix {
    let t = transpose(a, ncols);
    if t.is_empty() {
        return Vec::new();
    }
    left_kernel(&t, a.len())
}

/// Coefficients `c` with `c * basis = v`, where `basis` is an echelon basis
/// (as produced by [`hnf_basis`]). `None` when `v` is outside the lattice.
pub fn solve_echelon(basis: &[Vec<i64>], v: &[i64]) -> Option<Vec<i64>> {
    let mut rest = v.to_vec();
    let mut coeffs = vec![0; basis.len()];
    for (k, b) in basis.iter().enumerate() {
        let col = b.iter().position(|&x| x != 0)?;
        if rest[..col].iter().any(|&x| x != 0) {
            return None;
        }
        if rest[col] % b[col] != 0 {
            return None;
        }
        let q = rest[col] / b[col];
        coeffs[k] = q;
        for (x, y) in rest.iter_mut().zip(b.iter()) {
            *x -= q * y;
        }
    }
    rest.iter().all(|&x| x == 0).then_some(coeffs)
}

/// Canonical representative of `v` modulo the lattice spanned by the echelon
/// `basis`: each pivot coordinate is brought into `[0, pivot)`. Returns the
/// representative and the multiples subtracted.
pub fn reduce_mod(basis: &[Vec<i64>], v: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let mut rest = v.to_vec();
    let mut coeffs = vec![0; basis.len()];
    for (k, b) in basis.iter().enumerate() {
        let Some(col) = b.iter().position(|&x| x != 0) else { continue };
        let q = rest[col].div_euclid(b[col]);
        coeffs[k] = q;
        for (x, y) in rest.iter_mut().zip(b.iter()) {
            *x -= q * y;
        }
    }
    (rest, coeffs)
}

/// Smith form data with row-span semantics: the row span of `a * v` is the
/// row span of `diag(divisors)`, so `x -> x * v` identifies `Z^n / span(a)`
/// with `(+) Z/d_i (+) Z^(n - rank)`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub divisors: Vec<i64>,
    pub v: Matrix,
    pub v_inv: Matrix,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.divisors.iter().all(|&d| d == 1)
    }
}

pub fn smith(a: &[Vec<i64>], ncols: usize) -> Smith {
    let r = a.len();
    let n = ncols;
    let mut m: Matrix = a.to_vec();
    let mut v = identity(n);
    let mut v_inv = identity(n);
    let mut t = 0;

    let col_swap = |m: &mut Matrix, v: &mut Matrix, v_inv: &mut Matrix, j: usize, k: usize| {
        if j == k {
            return;
        }
        for row in m.iter_mut() {
            row.swap(j, k);
        }
        for row in v.iter_mut() {
            row.swap(j, k);
        }
        v_inv.swap(j, k);
    };
    // col_k -= q * col_j
    let col_sub = |m: &mut Matrix, v: &mut Matrix, v_inv: &mut Matrix, k: usize, j: usize, q: i64| {
        if q == 0 {
            return;
        }
        for row in m.iter_mut() {
            row[k] -= q * row[j];
        }
        for row in v.iter_mut() {
            row[k] -= q * row[j];
        }
        // inverse: row_j += q * row_k
        let rk = v_inv[k].clone();
        for (x, y) in v_inv[j].iter_mut().zip(rk.iter()) {
            *x += q * y;
        }
    };

    while t < r.min(n) {
        // pivot: smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..n {
                if m[i][j] != 0 && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(pi, t);
        col_swap(&mut m, &mut v, &mut v_inv, pj, t);
        loop {
            let mut changed = false;
            for i in t + 1..r {
                if m[i][t] != 0 {
                    let q = m[i][t] / m[t][t];
                    row_sub(&mut m, i, t, q);
                    if m[i][t] != 0 {
                        changed = true;
                    }
                }
            }
            for j in t + 1..n {
                if m[t][j] != 0 {
                    let q = m[t][j] / m[t][t];
                    col_sub(&mut m, &mut v, &mut v_inv, j, t, q);
                    if m[t][j] != 0 {
                        changed = true;
                    }
                }
            }
            if !changed {
                // divisibility of the rest of the block
                let p = m[t][t];
                let bad = (t + 1..r).find(|&i| (t + 1..n).any(|j| m[i][j] % p != 0));
                match bad {
                    Some(i) => {
                        // pull row i into the pivot row and keep reducing
                        row_sub(&mut m, t, i, -1);
                    }
                    None => break,
                }
            }
            // move the smallest entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..r {
                if m[i][t] != 0 && m[i][t].abs() < m[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..n {
                if m[t][j] != 0 && m[t][j].abs() < m[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                m.swap(best.0, t);
            }
            if best.1 != t {
                col_swap(&mut m, &mut v, &mut v_inv, best.1, t);
            }
        }
        if m[t][t] < 0 {
            m[t].iter_mut().for_each(|x| *x = -*x);
        }
        t += 1;
    }
    let divisors = (0..t).map(|i| m[i][i]).collect();
    Smith {
        divisors,
        v,
        v_inv,
    }
}

pub fn vec_mat(x: &[i64], m: &[Vec<i64>], ncols: usize) -> Vec<i64> {
    let mut out = vec![0; ncols];
    for (xi, row) in x.iter().zip(m.iter()) {
        if *xi == 0 {
            continue;
        }
        for (o, r) in out.iter_mut().zip(row.iter()) {
            *o += xi * r;
        }
    }
    out
}

/// Intersection of the row spans of `b1` and `b2` (both in `Z^dim`).
/// Returns the echelon basis of the intersection together with, for each
/// basis vector, its coefficients with respect to the rows of `b1`.
pub fn intersect(b1: &[Vec<i64>], b2: &[Vec<i64>], dim: usize) -> (Matrix, Matrix) {
    if b1.is_empty() || b2.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let mut stacked: Matrix = b1.to_vec();
    stacked.extend(b2.iter().map(|r| r.iter().map(|x| -x).collect::<Vec<_>>()));
    let k = left_kernel(&stacked, dim);
    let coeffs: Matrix = k.iter().map(|y| y[..b1.len()].to_vec()).collect();
    // reduce to a canonical basis, carrying coefficients along
    let vecs: Matrix = coeffs.iter().map(|c| vec_mat(c, b1, dim)).collect();
    let h = hermite(&vecs, dim);
    let basis = h.rows[..h.rank].to_vec();
    let basis_coeffs = h.transform[..h.rank]
        .iter()
        .map(|t| vec_mat(t, &coeffs, b1.len()))
        .collect();
    (basis, basis_coeffs)
}

/// Rank of an integer matrix.
pub fn rank(a: &[Vec<i64>], ncols: usize) -> usize {
    hermite(a, ncols).rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>], ncols: usize) -> Matrix {
        a.iter().map(|row| vec_mat(row, b, ncols)).collect()
    }

    #[test]
    fn hermite_small() {
        let a = vec![vec![2, 4], vec![3, 5]];
        let h = hermite(&a, 2);
        assert_eq!(h.rank, 2);
        assert_eq!(h.basis(), &[vec![1, 1], vec![0, 2]]);
        assert_eq!(mat_mul(&h.transform, &a, 2), h.rows);
    }

    #[test]
    fn kernel_of_projection() {
        // (x, y) -> x
        let k = integer_kernel(&[vec![1, 0]], 2);
        assert_eq!(k, vec![vec![0, 1]]);
    }

    #[test]
    fn kernel_is_saturated() {
        let k = integer_kernel(&[vec![2, 4, 6]], 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(2 * v[0] + 4 * v[1] + 6 * v[2], 0);
        }
        // (-2, 1, 0) must be reachable
        assert!(solve_echelon(&k, &[-2, 1, 0]).is_some());
        assert!(solve_echelon(&k, &[-3, 0, 1]).is_some());
    }

    #[test]
    fn smith_detects_torsion() {
        let s = smith(&[vec![2, 0]], 2);
        assert_eq!(s.divisors, vec![2]);
        assert!(!s.is_torsion_free());
        let s = smith(&[vec![2, 1]], 2);
        assert!(s.is_torsion_free());
        let s = smith(&[vec![2, 4], vec![6, 8]], 2);
        assert_eq!(s.divisors.iter().product::<i64>(), 8);
        assert_eq!(s.divisors[0], 2);
    }

    #[test]
    fn intersection_of_lines() {
        let (basis, coeffs) = intersect(&[vec![2, 0]], &[vec![3, 0]], 2);
        assert_eq!(basis, vec![vec![6, 0]]);
        assert_eq!(coeffs, vec![vec![3]]);
        let (basis, _) = intersect(&[vec![1, 0]], &[vec![0, 1]], 2);
        assert!(basis.is_empty());
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..4, 1usize..4).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-6i64..7, c), r)
        })
    }

    proptest! {
        #[test]
        fn hermite_transform_is_consistent(a in small_matrix()) {
            let n = a[0].len();
            let h = hermite(&a, n);
            prop_assert_eq!(mat_mul(&h.transform, &a, n), h.rows.clone());
            // every input row lies in the span of the basis
            for row in &a {
                prop_assert!(solve_echelon(h.basis(), row).is_some());
            }
        }

        #[test]
        fn smith_v_inverse(a in small_matrix()) {
            let n = a[0].len();
            let s = smith(&a, n);
            prop_assert_eq!(mat_mul(&s.v, &s.v_inv, n), identity(n));
            // row span of a*v equals the diagonal lattice
            let av = mat_mul(&a, &s.v, n);
            for row in &av {
                for (j, x) in row.iter().enumerate() {
                    if j < s.rank() {
                        prop_assert_eq!(x % s.divisors[j], 0);
                    } else {
                        prop_assert_eq!(*x, 0);
                    }
                }
            }
        }

        #[test]
        fn kernel_vectors_vanish(a in small_matrix()) {
            let n = a[0].len();
            for k in integer_kernel(&a, n) {
                for row in &a {
                    prop_assert_eq!(row.iter().zip(&k).map(|(x, y)| x * y).sum::<i64>(), 0);
                }
            }
        }
    }
}
