//! Dense exact linear algebra over the integers and rationals.
//!
//! Everything here works on small matrices (ambient dimension at most six in
//! practice), so the implementations favor clarity and exactness over
//! asymptotic cleverness: Euclidean reduction for Hermite and Smith forms,
//! fraction-free Bareiss for determinants, and textbook Gauss-Jordan over
//! `BigRational` for solving and null spaces.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::point::IntPoint;

/// Row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    pub rows: Vec<Vec<BigInt>>,
    pub cols: usize,
}

impl IntMat {
    pub fn new(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        IntMat { rows, cols }
    }

    pub fn from_points(points: &[IntPoint], cols: usize) -> Self {
        IntMat::new(points.iter().map(|p| p.coords().to_vec()).collect(), cols)
    }

    pub fn zero(nrows: usize, ncols: usize) -> Self {
        IntMat::new(vec![vec![BigInt::zero(); ncols]; nrows], ncols)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m.rows[i][i] = BigInt::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn transpose(&self) -> IntMat {
        let mut rows = vec![vec![BigInt::zero(); self.nrows()]; self.cols];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                rows[j][i] = v.clone();
            }
        }
        IntMat::new(rows, self.nrows())
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        debug_assert_eq!(v.len(), self.cols);
        self.rows
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Determinant by fraction-free Bareiss elimination; square input only.
    pub fn determinant(&self) -> BigInt {
        let n = self.nrows();
        assert_eq!(n, self.cols, "determinant of a non-square matrix");
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let swap = (k + 1..n).find(|&i| !a[i][k].is_zero());
                match swap {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = &num / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }
}

/// Result of a Hermite reduction: `hnf = transform * input` with `transform`
/// unimodular. Zero rows of `hnf` are trimmed; `rank` is the row count kept.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    pub hnf: IntMat,
    pub transform: IntMat,
    pub rank: usize,
    /// Column index of the pivot in each kept row, strictly increasing.
    pub pivots: Vec<usize>,
}

/// Row-style Hermite normal form with positive pivots and entries above each
/// pivot reduced into `[0, pivot)`. The form is unique for a given row span,
/// which makes it usable as a canonical key for sublattices.
pub fn hermite_normal_form(m: &IntMat) -> HermiteForm {
    let ncols = m.cols;
    let mut a = m.rows.clone();
    let mut u = IntMat::identity(a.len()).rows;
    let mut pivot_row = 0usize;
    let mut pivots = Vec::new();

    for col in 0..ncols {
        // Euclidean elimination below the pivot row.
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..a.len() {
                if !a[i][col].is_zero() {
                    best = match best {
                        None => Some(i),
                        Some(j) if a[i][col].abs() < a[j][col].abs() => Some(i),
                        keep => keep,
                    };
                }
            }
            let Some(i) = best else { break };
            a.swap(pivot_row, i);
            u.swap(pivot_row, i);
            let mut done = true;
            for i in pivot_row + 1..a.len() {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = div_floor_big(&a[i][col], &a[pivot_row][col]);
                row_sub_mul(&mut a, i, pivot_row, &q);
                row_sub_mul(&mut u, i, pivot_row, &q);
                if !a[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pivot_row < a.len() && !a[pivot_row][col].is_zero() {
            if a[pivot_row][col].is_negative() {
                negate_row(&mut a, pivot_row);
                negate_row(&mut u, pivot_row);
            }
            // Reduce the entries above the pivot into [0, pivot).
            for i in 0..pivot_row {
                let q = div_floor_big(&a[i][col], &a[pivot_row][col]);
                if !q.is_zero() {
                    row_sub_mul(&mut a, i, pivot_row, &q);
                    row_sub_mul(&mut u, i, pivot_row, &q);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
    }

    let rank = pivot_row;
    a.truncate(rank);
    HermiteForm {
        hnf: IntMat::new(a, ncols),
        transform: IntMat::new(u, m.nrows()),
        rank,
        pivots,
    }
}

/// Elementary divisors `d_1 | d_2 | ...` of the matrix (nonzero ones only),
/// computed by the classical row/column Euclidean reduction.
pub fn smith_divisors(m: &IntMat) -> Vec<BigInt> {
    let mut a = m.rows.clone();
    let nrows = a.len();
    let ncols = m.cols;
    let mut divisors = Vec::new();
    let mut top = 0usize;
    let mut left = 0usize;

    while top < nrows && left < ncols {
        // Find a nonzero entry of minimal absolute value to pivot on.
        let mut best: Option<(usize, usize)> = None;
        for i in top..nrows {
            for j in left..ncols {
                if !a[i][j].is_zero() {
                    best = match best {
                        None => Some((i, j)),
                        Some((bi, bj)) if a[i][j].abs() < a[bi][bj].abs() => Some((i, j)),
                        keep => keep,
                    };
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(top, pi);
        for row in a.iter_mut() {
            row.swap(left, pj);
        }

        let mut clean = true;
        for i in top + 1..nrows {
            if a[i][left].is_zero() {
                continue;
            }
            let q = div_floor_big(&a[i][left], &a[top][left]);
            row_sub_mul(&mut a, i, top, &q);
            if !a[i][left].is_zero() {
                clean = false;
            }
        }
        for j in left + 1..ncols {
            if a[top][j].is_zero() {
                continue;
            }
            let q = div_floor_big(&a[top][j], &a[top][left]);
            col_sub_mul(&mut a, j, left, &q);
            if !a[top][j].is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue; // Smaller remainders appeared; pivot again.
        }
        divisors.push(a[top][left].abs());
        top += 1;
        left += 1;
    }

    // Enforce the divisibility chain d_i | d_{i+1}.
    let n = divisors.len();
    for i in 0..n {
        for j in i + 1..n {
            if (&divisors[j] % &divisors[i]).is_zero() {
                continue;
            }
            let g = divisors[i].gcd(&divisors[j]);
            let l = divisors[i].lcm(&divisors[j]);
            divisors[i] = g;
            divisors[j] = l;
        }
    }
    divisors
}

/// Solves `M x = rhs` over the integers via a column Hermite form.
///
/// Returns `None` when no integer solution exists (including the case where
/// no rational solution exists).
pub fn integer_solve(m: &IntMat, rhs: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(rhs.len(), m.nrows());
    // Column HNF of M: transpose, row-reduce, transpose back.
    // M * W^T = H^T where H = hermite(M^T), W = transform.
    let hf = hermite_normal_form(&m.transpose());
    // Columns of H^T are the rows of hf.hnf; solve in the echelon basis.
    let mut coeffs = vec![BigInt::zero(); m.cols];
    let mut residual = rhs.to_vec();
    for (k, pivot_col) in hf.pivots.iter().enumerate() {
        // hf.hnf row k has its pivot at position pivot_col, meaning the k-th
        // transformed column of M has first nonzero entry there.
        let pivot = &hf.hnf.rows[k][*pivot_col];
        let (q, r) = residual[*pivot_col].div_rem(pivot);
        if !r.is_zero() {
            return None;
        }
        for j in 0..m.nrows() {
            residual[j] -= &q * &hf.hnf.rows[k][j];
        }
        coeffs[k] = q;
    }
    if residual.iter().any(|v| !v.is_zero()) {
        return None;
    }
    // x = W^T * coeffs, using only the first `rank` transformed columns.
    let mut x = vec![BigInt::zero(); m.cols];
    for (k, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for j in 0..m.cols {
            x[j] += c * &hf.transform.rows[k][j];
        }
    }
    Some(x)
}

fn div_floor_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn row_sub_mul(a: &mut [Vec<BigInt>], target: usize, source: usize, factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    let src = a[source].clone();
    for (t, s) in a[target].iter_mut().zip(&src) {
        *t -= factor * s;
    }
}

fn col_sub_mul(a: &mut [Vec<BigInt>], target: usize, source: usize, factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        let s = row[source].clone();
        row[target] -= factor * &s;
    }
}

fn negate_row(a: &mut [Vec<BigInt>], i: usize) {
    for v in a[i].iter_mut() {
        *v = -v.clone();
    }
}

// ---------------------------------------------------------------------------
// Rational elimination.
// ---------------------------------------------------------------------------

/// Row-major rational matrix helpers. Rows are plain `Vec`s because callers
/// routinely build augmented systems on the fly.
pub type RatRow = Vec<BigRational>;

pub fn rat_from_int_row(row: &[BigInt]) -> RatRow {
    row.iter()
        .map(|v| BigRational::from_integer(v.clone()))
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rat_rref(a: &mut Vec<RatRow>) -> Vec<usize> {
    let nrows = a.len();
    let ncols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0usize;
    for col in 0..ncols {
        if row >= nrows {
            break;
        }
        let Some(p) = (row..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].clone();
        for v in a[row].iter_mut() {
            *v /= inv.clone();
        }
        for i in 0..nrows {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                let src = a[row].clone();
                for (t, s) in a[i].iter_mut().zip(&src) {
                    *t -= &f * s;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Rank of the rational row span of an integer matrix.
pub fn rat_rank(m: &IntMat) -> usize {
    let mut rows: Vec<RatRow> = m.rows.iter().map(|r| rat_from_int_row(r)).collect();
    rat_rref(&mut rows).len()
}

/// Solves the square system `A x = b` exactly; `None` if singular.
pub fn rat_solve_square(a: &[RatRow], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    debug_assert!(a.iter().all(|r| r.len() == n));
    debug_assert_eq!(b.len(), n);
    let mut aug: Vec<RatRow> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rat_rref(&mut aug);
    if pivots.len() != n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n].clone()).collect())
}

/// General solver for `A x = b`: returns a particular solution together with
/// a basis of the null space, or `None` when the system is inconsistent.
pub fn rat_solve_general(
    a: &[RatRow],
    b: &[BigRational],
) -> Option<(Vec<BigRational>, Vec<Vec<BigRational>>)> {
    let ncols = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<RatRow> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rat_rref(&mut aug);
    if pivots.iter().any(|&c| c == ncols) {
        return None; // A pivot in the augmented column: inconsistent.
    }
    let mut particular = vec![BigRational::zero(); ncols];
    for (row, &col) in pivots.iter().enumerate() {
        particular[col] = aug[row][ncols].clone();
    }
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut nullspace = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (row, &col) in pivots.iter().enumerate() {
            v[col] = -aug[row][free].clone();
        }
        nullspace.push(v);
    }
    Some((particular, nullspace))
}

/// Primitive integer vector spanning the one-dimensional rational kernel of
/// `m`, if the kernel has dimension exactly one.
pub fn primitive_kernel_vector(m: &IntMat) -> Option<IntPoint> {
    if m.nrows() == 0 {
        // No constraints: the kernel is the whole space.
        if m.cols == 1 {
            return Some(IntPoint::new(vec![BigInt::one()]));
        }
        return None;
    }
    let a: Vec<RatRow> = m.rows.iter().map(|r| rat_from_int_row(r)).collect();
    let b = vec![BigRational::zero(); m.nrows()];
    let (_, nullspace) = rat_solve_general(&a, &b)?;
    if nullspace.len() != 1 {
        return None;
    }
    Some(clear_denominators(&nullspace[0]))
}

/// Scales a rational vector to a primitive integer vector with the same span.
pub fn clear_denominators(v: &[BigRational]) -> IntPoint {
    let mut lcm = BigInt::one();
    for c in v {
        lcm = lcm.lcm(c.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    IntPoint::new(ints).primitive()
}

/// Barycentric-style affine coordinates of `target` with respect to `basis`:
/// coefficients `l_i` with `sum l_i = 1` and `sum l_i basis_i = target`.
/// Returns `None` when `basis` is affinely dependent or the (unique)
/// representation does not exist in its affine span.
pub fn affine_coordinates(basis: &[IntPoint], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let dim = target.len();
    debug_assert!(basis.iter().all(|p| p.dim() == dim));
    // Rows: one for each ambient coordinate, plus the affine constraint.
    let mut a: Vec<RatRow> = Vec::with_capacity(dim + 1);
    for coord in 0..dim {
        a.push(
            basis
                .iter()
                .map(|p| BigRational::from_integer(p.coords()[coord].clone()))
                .collect(),
        );
    }
    a.push(vec![BigRational::one(); basis.len()]);
    let mut b: Vec<BigRational> = target.to_vec();
    b.push(BigRational::one());

    let (particular, nullspace) = rat_solve_general(&a, &b)?;
    if !nullspace.is_empty() {
        return None; // Affinely dependent basis: coordinates not unique.
    }
    Some(particular)
}

/// Classical adjugate satisfying `adj * M = det(M) * I`, via cofactors.
pub fn adjugate(m: &IntMat) -> IntMat {
    let n = m.cols;
    debug_assert_eq!(m.nrows(), n);
    let mut rows = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<BigInt>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != i)
                        .map(|c| m.rows[r][c].clone())
                        .collect()
                })
                .collect();
            let cof = IntMat::new(minor, n - 1).determinant();
            rows[i][j] = if (i + j) % 2 == 0 { cof } else { -cof };
        }
    }
    IntMat::new(rows, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn mat_i64(rows: &[&[i64]]) -> IntMat {
        let cols = rows.first().map_or(0, |r| r.len());
        IntMat::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
            cols,
        )
    }

    #[test]
    fn test_hnf_canonical_shape() {
        let m = mat_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let hf = hermite_normal_form(&m);
        // Echelon with positive pivots and reduced entries above them.
        for (k, &col) in hf.pivots.iter().enumerate() {
            assert!(hf.hnf.rows[k][col] > BigInt::zero());
            for i in 0..k {
                assert!(hf.hnf.rows[i][col] >= BigInt::zero());
                assert!(hf.hnf.rows[i][col] < hf.hnf.rows[k][col]);
            }
            for j in 0..col {
                assert!(hf.hnf.rows[k][j].is_zero());
            }
        }
        // transform * input reproduces the nonzero rows.
        let product = IntMat::new(
            hf.transform
                .rows
                .iter()
                .map(|u| {
                    let mut acc = vec![BigInt::zero(); m.cols];
                    for (coef, row) in u.iter().zip(&m.rows) {
                        for (a, b) in acc.iter_mut().zip(row) {
                            *a += coef * b;
                        }
                    }
                    acc
                })
                .collect(),
            m.cols,
        );
        for k in 0..hf.rank {
            assert_eq!(product.rows[k], hf.hnf.rows[k]);
        }
    }

    #[test]
    fn test_hnf_idempotent_and_span_invariant() {
        // Random matrices: permuting and mixing rows must not change the HNF.
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..40 {
            let nrows = rng.gen_range(1..5);
            let ncols = rng.gen_range(1..5);
            let m = IntMat::new(
                (0..nrows)
                    .map(|_| (0..ncols).map(|_| BigInt::from(rng.gen_range(-6..=6i64))).collect())
                    .collect(),
                ncols,
            );
            let h1 = hermite_normal_form(&m);
            // Mix: add row 0 to every other row (unimodular operation).
            let mut mixed = m.rows.clone();
            if nrows > 1 {
                let first = mixed[0].clone();
                for row in mixed.iter_mut().skip(1) {
                    for (t, s) in row.iter_mut().zip(&first) {
                        *t += s;
                    }
                }
                mixed.reverse();
            }
            let h2 = hermite_normal_form(&IntMat::new(mixed, ncols));
            assert_eq!(h1.hnf, h2.hnf, "HNF must be a lattice invariant");
            let h3 = hermite_normal_form(&h1.hnf);
            assert_eq!(h1.hnf, h3.hnf, "HNF must be idempotent");
        }
    }

    #[test]
    fn test_smith_divisors_known_cases() {
        let m = mat_i64(&[&[2, 0], &[0, 3]]);
        assert_eq!(
            smith_divisors(&m),
            vec![BigInt::from(1), BigInt::from(6)]
        );
        let unimodular = mat_i64(&[&[1, 2], &[3, 7]]);
        assert_eq!(
            smith_divisors(&unimodular),
            vec![BigInt::from(1), BigInt::from(1)]
        );
        let rank_deficient = mat_i64(&[&[2, 4], &[1, 2]]);
        assert_eq!(smith_divisors(&rank_deficient), vec![BigInt::from(1)]);
    }

    #[test]
    fn test_determinant_matches_cofactor_expansion() {
        let m = mat_i64(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // Expanded by hand: 2*(3*-2-4*5) - (-1)*(1*-2-4*0) + 0 = -52 - 2 = -54.
        assert_eq!(m.determinant(), BigInt::from(-54));
        assert_eq!(IntMat::identity(4).determinant(), BigInt::one());
    }

    #[test]
    fn test_integer_solve_exact_and_infeasible() {
        let m = mat_i64(&[&[2, 0], &[0, 2]]);
        assert_eq!(
            integer_solve(&m, &[BigInt::from(4), BigInt::from(-2)]),
            Some(vec![BigInt::from(2), BigInt::from(-1)])
        );
        // 2x = 3 has no integer solution.
        assert_eq!(integer_solve(&m, &[BigInt::from(3), BigInt::zero()]), None);
        // Wide system: x + 2y = 5 has integer solutions.
        let wide = mat_i64(&[&[1, 2]]);
        let sol = integer_solve(&wide, &[BigInt::from(5)]).unwrap();
        assert_eq!(&sol[0] + BigInt::from(2) * &sol[1], BigInt::from(5));
    }

    #[test]
    fn test_rat_solve_general_parametrizes_solutions() {
        // x + y + z = 3 with a 2-dimensional solution space.
        let a = vec![rat_from_int_row(&[
            BigInt::one(),
            BigInt::one(),
            BigInt::one(),
        ])];
        let b = vec![BigRational::from_integer(BigInt::from(3))];
        let (x0, null) = rat_solve_general(&a, &b).unwrap();
        assert_eq!(null.len(), 2);
        let sum: BigRational = x0.iter().cloned().sum();
        assert_eq!(sum, BigRational::from_integer(BigInt::from(3)));
    }

    #[test]
    fn test_affine_coordinates_of_simplex_point() {
        let basis = vec![
            IntPoint::from_i64(&[0, 0]),
            IntPoint::from_i64(&[2, 0]),
            IntPoint::from_i64(&[0, 2]),
        ];
        let target: Vec<BigRational> = vec![
            BigRational::new(BigInt::from(1), BigInt::from(1)),
            BigRational::new(BigInt::from(1), BigInt::from(1)),
        ];
        let l = affine_coordinates(&basis, &target).unwrap();
        let sum: BigRational = l.iter().cloned().sum();
        assert_eq!(sum, BigRational::one());
        assert_eq!(l[1], BigRational::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(l[2], BigRational::new(BigInt::from(1), BigInt::from(2)));
    }

    #[test]
    fn test_primitive_kernel_vector() {
        // Kernel of [1 1 -1] is 2-dimensional: no unique direction.
        let wide = mat_i64(&[&[1, 1, -1]]);
        assert!(primitive_kernel_vector(&wide).is_none());
        let m = mat_i64(&[&[1, 0, 1], &[0, 1, 1]]);
        let k = primitive_kernel_vector(&m).unwrap();
        assert!(m.mul_vec(k.coords()).iter().all(|v| v.is_zero()));
        assert_eq!(k.primitive(), k);
    }
}
