//! Fraction-free integer linear algebra backing the geometric predicates.
//!
//! Everything is generic over [`Zi`], instantiated at `i128` (checked
//! arithmetic, `None` on overflow) and at `BigInt` (never fails). Callers try
//! the `i128` path and transparently fall back to `BigInt` when a checked
//! operation reports `None`, so correctness never rests on magnitude
//! estimates; the fast path is purely an optimization.

use num::bigint::BigInt;
use num::{Integer, Signed};

pub(crate) trait Zi: Clone + Eq + Ord + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn ck_add(&self, o: &Self) -> Option<Self>;
    fn ck_sub(&self, o: &Self) -> Option<Self>;
    fn ck_mul(&self, o: &Self) -> Option<Self>;
    /// Exact quotient; `o` must be nonzero and divide `self` exactly.
    fn exact_div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn abs(&self) -> Self;
    fn gcd(&self, o: &Self) -> Self;
    /// Floor division (rounds toward negative infinity), for HNF reduction.
    fn div_floor(&self, o: &Self) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Zi for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    // i128::MIN is rejected along with genuine overflow so that abs/neg are
    // total on every value we ever hold.
    fn ck_add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o).filter(|v| *v != i128::MIN)
    }
    fn ck_sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o).filter(|v| *v != i128::MIN)
    }
    fn ck_mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o).filter(|v| *v != i128::MIN)
    }
    fn exact_div(&self, o: &Self) -> Self {
        debug_assert!(*o != 0 && self % o == 0);
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn abs(&self) -> Self {
        i128::abs(*self)
    }
    fn gcd(&self, o: &Self) -> Self {
        num::integer::gcd(*self, *o)
    }
    fn div_floor(&self, o: &Self) -> Self {
        num::Integer::div_floor(self, o)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Zi for BigInt {
    fn zero() -> Self {
        BigInt::ZERO
    }
    fn one() -> Self {
        BigInt::from(1)
    }
    fn is_zero(&self) -> bool {
        num::Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn ck_add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn ck_sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn ck_mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn exact_div(&self, o: &Self) -> Self {
        debug_assert!(!Zi::is_zero(o) && (self % o) == BigInt::ZERO);
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Determinant of a square matrix by fraction-free Bareiss elimination.
/// `None` signals arithmetic overflow (only possible for `i128`).
pub(crate) fn det<Z: Zi>(mut m: Vec<Vec<Z>>) -> Option<Z> {
    let n = m.len();
    debug_assert!(m.iter().all(|r| r.len() == n));
    if n == 0 {
        return Some(Z::one());
    }
    let mut sign = false;
    let mut prev = Z::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return Some(Z::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].ck_mul(&m[k][k])?;
                let b = m[i][k].ck_mul(&m[k][j])?;
                m[i][j] = a.ck_sub(&b)?.exact_div(&prev);
            }
            m[i][k] = Z::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Some(if sign { d.neg() } else { d })
}

/// Echelon data of a rectangular matrix: rank, pivot columns, and the
/// original row indices supplying the pivots.
pub(crate) struct Echelon {
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    pub pivot_rows: Vec<usize>,
}

/// Fraction-free row echelon pass recording rank and pivot positions.
pub(crate) fn echelon<Z: Zi>(mat: &[Vec<Z>]) -> Option<Echelon> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut m: Vec<Vec<Z>> = mat.to_vec();
    let mut orig: Vec<usize> = (0..rows).collect();
    let mut pivot_cols = Vec::new();
    let mut pivot_rows = Vec::new();
    let mut r = 0;
    let mut prev = Z::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        match (r..rows).find(|&i| !m[i][c].is_zero()) {
            None => continue,
            Some(p) => {
                m.swap(r, p);
                orig.swap(r, p);
            }
        }
        for i in r + 1..rows {
            for j in c + 1..cols {
                let a = m[i][j].ck_mul(&m[r][c])?;
                let b = m[i][c].ck_mul(&m[r][j])?;
                m[i][j] = a.ck_sub(&b)?.exact_div(&prev);
            }
            m[i][c] = Z::zero();
        }
        prev = m[r][c].clone();
        pivot_cols.push(c);
        pivot_rows.push(orig[r]);
        r += 1;
    }
    Some(Echelon {
        rank: r,
        pivot_cols,
        pivot_rows,
    })
}

pub(crate) fn rank<Z: Zi>(mat: &[Vec<Z>]) -> Option<usize> {
    echelon(mat).map(|e| e.rank)
}

fn submatrix<Z: Zi>(mat: &[Vec<Z>], rows: &[usize], cols: &[usize]) -> Vec<Vec<Z>> {
    rows.iter()
        .map(|&i| cols.iter().map(|&j| mat[i][j].clone()).collect())
        .collect()
}

/// Primitive integer basis of the right kernel `{x : mat * x = 0}`.
///
/// One basis vector per free column, built by Cramer's rule from the pivot
/// minor, then divided by the gcd of its entries. The vector for free column
/// `f` has a nonzero entry at `f` and support inside `pivot_cols ∪ {f}`.
pub(crate) fn kernel_basis<Z: Zi>(mat: &[Vec<Z>]) -> Option<Vec<Vec<Z>>> {
    let cols = if mat.is_empty() { 0 } else { mat[0].len() };
    let ech = echelon(mat)?;
    let piv: std::collections::BTreeSet<usize> = ech.pivot_cols.iter().copied().collect();
    let mut basis = Vec::new();
    for f in 0..cols {
        if piv.contains(&f) {
            continue;
        }
        let d = det(submatrix(mat, &ech.pivot_rows, &ech.pivot_cols))?;
        debug_assert!(!d.is_zero());
        let mut v = vec![Z::zero(); cols];
        v[f] = d;
        for (i, &pc) in ech.pivot_cols.iter().enumerate() {
            let mut cols_i = ech.pivot_cols.clone();
            cols_i[i] = f;
            let mut sub = submatrix(mat, &ech.pivot_rows, &cols_i);
            for row in sub.iter_mut() {
                row[i] = row[i].neg();
            }
            v[pc] = det(sub)?;
        }
        let mut g = Z::zero();
        for x in &v {
            g = g.gcd(x);
        }
        if !g.is_zero() {
            for x in v.iter_mut() {
                *x = x.exact_div(&g);
            }
        }
        debug_assert!({
            let vb: Vec<BigInt> = v.iter().map(|x| x.to_big()).collect();
            mat.iter().all(|row| {
                let mut s = BigInt::ZERO;
                for (j, x) in row.iter().enumerate() {
                    s += x.to_big() * &vb[j];
                }
                num::Zero::is_zero(&s)
            })
        });
        basis.push(v);
    }
    Some(basis)
}

/// Row-style Hermite normal form of the lattice spanned by `gens` in `Z^n`:
/// pivot entries positive, entries above each pivot reduced into `[0, pivot)`.
/// Returns one row per lattice rank. Deterministic.
pub(crate) fn hnf<Z: Zi>(gens: &[Vec<Z>], n: usize) -> Option<Vec<Vec<Z>>> {
    debug_assert!(gens.iter().all(|g| g.len() == n));
    let mut rows: Vec<Vec<Z>> = gens.to_vec();
    let mut out: Vec<Vec<Z>> = Vec::new();
    for c in 0..n {
        // gcd-reduce all rows with a nonzero entry in column c down to one
        loop {
            let mut idxs: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if idxs.len() <= 1 {
                break;
            }
            // reduce the larger entry by the smaller, Euclid-style
            idxs.sort_by_key(|&i| rows[i][c].abs());
            let (small, big) = (idxs[0], idxs[1]);
            let q = rows[big][c].div_floor(&rows[small][c]);
            for j in 0..n {
                let t = q.ck_mul(&rows[small][j])?;
                rows[big][j] = rows[big][j].ck_sub(&t)?;
            }
        }
        if let Some(i) = (0..rows.len()).find(|&i| !rows[i][c].is_zero()) {
            let mut piv = rows.swap_remove(i);
            if piv[c].is_negative() {
                for x in piv.iter_mut() {
                    *x = x.neg();
                }
            }
            out.push(piv);
        }
    }
    debug_assert!(rows.iter().all(|r| r.iter().all(|x| x.is_zero())));
    // reduce entries above each pivot into [0, pivot)
    out.sort_by_key(|r| r.iter().position(|x| !x.is_zero()).unwrap_or(n));
    for i in (0..out.len()).rev() {
        let pc = out[i].iter().position(|x| !x.is_zero()).unwrap();
        let p = out[i][pc].clone();
        for k in 0..i {
            let q = out[k][pc].div_floor(&p);
            if q.is_zero() {
                continue;
            }
            for j in 0..out[k].len() {
                let t = q.ck_mul(&out[i][j])?;
                out[k][j] = out[k][j].ck_sub(&t)?;
            }
        }
    }
    Some(out)
}

/// Index of the lattice spanned by `gens` inside `Z^n`: the product of the
/// HNF pivots. Zero when the generators do not span full rank.
pub(crate) fn lattice_index<Z: Zi>(gens: &[Vec<Z>], n: usize) -> Option<Z> {
    let h = hnf(gens, n)?;
    if h.len() < n {
        return Some(Z::zero());
    }
    let mut idx = Z::one();
    for (i, row) in h.iter().enumerate() {
        idx = idx.ck_mul(&row[i])?;
    }
    Some(idx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<i128>> {
        rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
    }

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn det_small() {
        assert_eq!(det::<i128>(vec![]), Some(1));
        assert_eq!(det(m(&[&[5]])), Some(5));
        assert_eq!(det(m(&[&[1, 2], &[3, 4]])), Some(-2));
        assert_eq!(det(m(&[&[0, 1], &[1, 0]])), Some(-1));
        assert_eq!(det(m(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 4]])), Some(24));
        assert_eq!(det(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), Some(0));
    }

    #[test]
    fn det_overflow_falls_to_none() {
        let huge = i128::MAX / 2;
        let mat = vec![vec![huge, 1], vec![1, huge]];
        assert_eq!(det(mat), None);
        let b = vec![
            vec![BigInt::from(i128::MAX / 2), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(i128::MAX / 2)],
        ];
        assert!(det(b).is_some());
    }

    #[test]
    fn det_matches_bigint_on_a_grid() {
        // deterministic pseudo-random 4x4 matrices, both backends agree
        let mut state = 0x2545f4914f6cdd1du64;
        for _ in 0..200 {
            let mut a = vec![vec![0i128; 4]; 4];
            let mut b = vec![vec![BigInt::ZERO; 4]; 4];
            for i in 0..4 {
                for j in 0..4 {
                    state ^= state << 13;
                    state ^= state >> 7;
                    state ^= state << 17;
                    let v = (state % 41) as i64 - 20;
                    a[i][j] = v as i128;
                    b[i][j] = BigInt::from(v);
                }
            }
            assert_eq!(det(a).unwrap().to_big(), det(b).unwrap());
        }
    }

    #[test]
    fn echelon_rank() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), Some(1));
        assert_eq!(rank(&m(&[&[1, 0, 0], &[0, 0, 1]])), Some(2));
        assert_eq!(rank::<i128>(&[]), Some(0));
        let e = echelon(&m(&[&[0, 1, 1], &[0, 2, 2], &[1, 0, 0]])).unwrap();
        assert_eq!(e.rank, 2);
        assert_eq!(e.pivot_cols, vec![0, 1]);
    }

    #[test]
    fn kernel_of_parallelogram() {
        // rows are homogenized square corners, columns the four points:
        // kernel of the transpose gives the affine dependence (+,-,-,+)
        let pts = [[0, 0], [1, 0], [0, 1], [1, 1]];
        let mat: Vec<Vec<i128>> = (0..3)
            .map(|r| {
                (0..4)
                    .map(|c| if r < 2 { pts[c][r] as i128 } else { 1 })
                    .collect()
            })
            .collect();
        let k = kernel_basis(&mat).unwrap();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        assert_eq!(v.iter().filter(|x| **x > 0).count(), 2);
        assert_eq!(v.iter().filter(|x| **x < 0).count(), 2);
        assert_eq!(v[0] * v[3], v[1] * v[2]);
    }

    #[test]
    fn kernel_of_zero_matrix_is_standard_basis() {
        let k = kernel_basis(&m(&[&[0, 0, 0]])).unwrap();
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            let mut e = vec![0i128; 3];
            e[i] = 1;
            assert_eq!(*v, e);
        }
    }

    #[test]
    fn kernel_empty_when_independent() {
        let k = kernel_basis(&m(&[&[1, 0], &[0, 1]])).unwrap();
        assert!(k.is_empty());
    }

    #[test]
    fn hnf_canonical() {
        let h = hnf(&m(&[&[2, 1], &[0, 3]]), 2).unwrap();
        assert_eq!(h, m(&[&[2, 1], &[0, 3]]));
        // generators in messy order and sign reduce to the same form
        let h2 = hnf(&m(&[&[0, -3], &[2, 4], &[2, 1]]), 2).unwrap();
        assert_eq!(h2, m(&[&[2, 1], &[0, 3]]));
        assert_eq!(lattice_index(&m(&[&[2, 1], &[0, 3]]), 2), Some(6));
    }

    #[test]
    fn hnf_rank_deficient() {
        assert_eq!(lattice_index(&m(&[&[1, 1], &[2, 2]]), 2), Some(0));
        let h = hnf(&m(&[&[1, 1], &[2, 2]]), 2).unwrap();
        assert_eq!(h, m(&[&[1, 1]]));
    }

    #[test]
    fn hnf_same_parity_sublattice() {
        // vectors with all coordinates of equal parity span an index-8
        // sublattice of Z^4
        let gens = m(&[
            &[2, 0, 0, 0],
            &[0, 2, 0, 0],
            &[0, 0, 2, 0],
            &[1, 1, 1, 1],
        ]);
        assert_eq!(lattice_index(&gens, 4), Some(8));
        let bg: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        assert_eq!(lattice_index(&bg, 4), Some(BigInt::from(8)));
        assert_eq!(big(&[&[8]])[0][0], BigInt::from(8));
    }
}
