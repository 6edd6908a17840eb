//! Exact sparse matrices over the rationals.
//!
//! Every rank and kernel computation here is exact: entries are arbitrary
//! precision rationals, elimination clears denominators and then works in
//! integer arithmetic with gcd normalization, so results are reproducible
//! bit for bit and there is no tolerance parameter anywhere.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// Scalar type used throughout the crate.
pub type Rat = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Sparse row-major matrix of exact rationals.
///
/// Rows store sorted `(column, value)` pairs with all explicit zeros dropped,
/// so very sparse operators (the coboundary and tangency maps) stay cheap
/// even when the nominal shape runs into the tens of thousands of rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(u32, Rat)>>,
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    /// Build from `(row, col, value)` triplets; duplicate positions are
    /// accumulated and entries that sum to zero are dropped.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rat)>,
    {
        let mut data: Vec<Vec<(u32, Rat)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r}, {c}) out of shape");
            if !v.is_zero() {
                data[r].push((c as u32, v));
            }
        }
        for row in &mut data {
            row.sort_by_key(|&(c, _)| c);
            let mut merged: Vec<(u32, Rat)> = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            *row = merged;
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    /// Sorted nonzero entries of one row.
    pub fn row(&self, r: usize) -> &[(u32, Rat)] {
        &self.data[r]
    }

    pub fn entry(&self, r: usize, c: usize) -> Rat {
        assert!(r < self.rows && c < self.cols);
        match self.data[r].binary_search_by_key(&(c as u32), |&(col, _)| col) {
            Ok(k) => self.data[r][k].1.clone(),
            Err(_) => Rat::zero(),
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    /// Stack `below` under `self` (column counts must agree).
    pub fn stack(&self, below: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, below.cols, "stack: column count mismatch");
        let mut data = self.data.clone();
        data.extend(below.data.iter().cloned());
        ExactMatrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut data: Vec<Vec<(u32, Rat)>> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c as usize].push((r as u32, v.clone()));
            }
        }
        ExactMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Matrix-vector product.  Panics on a length mismatch.
    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols, "apply: length mismatch");
        self.data
            .iter()
            .map(|row| {
                let mut acc = Rat::zero();
                for (c, a) in row {
                    let x = &v[*c as usize];
                    if !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// Exact matrix product `self * rhs`.
    pub fn mul(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "mul: inner dimension mismatch");
        let mut data: Vec<Vec<(u32, Rat)>> = vec![Vec::new(); self.rows];
        let mut acc: Vec<(u32, Rat)> = Vec::new();
        for (r, row) in self.data.iter().enumerate() {
            acc.clear();
            for (k, a) in row {
                for (c, b) in &rhs.data[*k as usize] {
                    acc.push((*c, a * b));
                }
            }
            acc.sort_by_key(|&(c, _)| c);
            let mut merged: Vec<(u32, Rat)> = Vec::new();
            for (c, v) in acc.drain(..) {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            data[r] = merged;
        }
        ExactMatrix {
            rows: self.rows,
            cols: rhs.cols,
            data,
        }
    }

    /// Exact rank by fraction-free integer elimination.
    ///
    /// Rows are scaled to integers (rank is invariant under row scaling) and
    /// inserted one by one into an echelon basis; the insertion order is the
    /// row order, so the result is deterministic.
    pub fn rank(&self) -> usize {
        let mut ech = IntEchelon::new();
        for row in &self.data {
            ech.insert(clear_denominators(row));
        }
        ech.rank()
    }

    /// Column-space membership structure (echelon basis of the transpose).
    pub fn column_space(&self) -> ColumnSpace {
        let mut ech = IntEchelon::new();
        let t = self.transpose();
        for row in &t.data {
            ech.insert(clear_denominators(row));
        }
        ColumnSpace {
            len: self.rows,
            ech,
        }
    }

    /// Kernel basis as dense coordinate vectors, via reduced row echelon form.
    ///
    /// Intended for operators of modest width; the basis vectors are the
    /// standard free-variable generators, ordered by free column, and the
    /// result is canonical for the matrix.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut dense: Vec<Vec<Rat>> = self
            .data
            .iter()
            .map(|row| {
                let mut d = vec![Rat::zero(); self.cols];
                for (c, v) in row {
                    d[*c as usize] = v.clone();
                }
                d
            })
            .collect();
        let pivots = rref(&mut dense);
        let pivot_set: Vec<Option<usize>> = {
            let mut s = vec![None; self.cols];
            for (row_idx, &pc) in pivots.iter().enumerate() {
                s[pc] = Some(row_idx);
            }
            s
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut v = vec![Rat::zero(); self.cols];
            v[free] = Rat::one();
            for (row_idx, &pc) in pivots.iter().enumerate() {
                let coeff = dense[row_idx][free].clone();
                if !coeff.is_zero() {
                    v[pc] = -coeff;
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Membership tester for the column space of a matrix.
///
/// `contains` reduces a vector against the echelon basis without mutating it,
/// so repeated queries all test membership in the original column space.
pub struct ColumnSpace {
    len: usize,
    ech: IntEchelon,
}

impl ColumnSpace {
    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    /// Vector length this space expects.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Does `v` lie in the column space?  Equivalent to: appending `v` as an
    /// extra column leaves the rank unchanged.
    pub fn contains(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.len, "column space: length mismatch");
        let sparse: Vec<(u32, Rat)> = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i as u32, x.clone()))
            .collect();
        self.ech.reduce(clear_denominators(&sparse)).is_empty()
    }
}

/// Echelon basis over the integers with gcd-normalized, fraction-free row
/// combination.  Rows are kept sorted by leading column with positive leading
/// coefficient and content 1, so the stored basis depends only on the
/// inserted span and insertion order.
struct IntEchelon {
    rows: Vec<Vec<(u32, BigInt)>>,
}

impl IntEchelon {
    fn new() -> Self {
        IntEchelon { rows: Vec::new() }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `row` against the basis without inserting; returns the residual.
    fn reduce(&self, mut row: Vec<(u32, BigInt)>) -> Vec<(u32, BigInt)> {
        while let Some(&(lead, _)) = row.first() {
            match self.rows.binary_search_by_key(&lead, |r| r[0].0) {
                Ok(k) => row = combine(&self.rows[k], row),
                Err(_) => break,
            }
        }
        row
    }

    /// Insert a row, returning whether the rank grew.
    fn insert(&mut self, row: Vec<(u32, BigInt)>) -> bool {
        let mut row = self.reduce(row);
        if row.is_empty() {
            return false;
        }
        normalize(&mut row);
        let lead = row[0].0;
        match self.rows.binary_search_by_key(&lead, |r| r[0].0) {
            Ok(_) => unreachable!("reduced row collides with existing pivot"),
            Err(pos) => self.rows.insert(pos, row),
        }
        true
    }
}

/// `pivot_lead * row - row_lead * pivot`; the leading terms cancel.
/// The result is gcd-normalized to keep coefficient growth in check.
fn combine(pivot: &[(u32, BigInt)], row: Vec<(u32, BigInt)>) -> Vec<(u32, BigInt)> {
    debug_assert_eq!(pivot[0].0, row[0].0);
    let a = &pivot[0].1;
    let b = &row[0].1;
    let mut out: Vec<(u32, BigInt)> = Vec::with_capacity(pivot.len() + row.len());
    let mut pi = 1;
    let mut ri = 1;
    while pi < pivot.len() || ri < row.len() {
        let pc = pivot.get(pi).map(|e| e.0);
        let rc = row.get(ri).map(|e| e.0);
        match (pc, rc) {
            (Some(p), Some(r)) if p == r => {
                let v = a * &row[ri].1 - b * &pivot[pi].1;
                if !v.is_zero() {
                    out.push((p, v));
                }
                pi += 1;
                ri += 1;
            }
            (Some(p), Some(r)) if p < r => {
                out.push((p, -(b * &pivot[pi].1)));
                pi += 1;
            }
            (Some(_), Some(_)) | (None, Some(_)) => {
                out.push((row[ri].0, a * &row[ri].1));
                ri += 1;
            }
            (Some(_), None) => {
                out.push((pivot[pi].0, -(b * &pivot[pi].1)));
                pi += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    let mut out = out;
    normalize(&mut out);
    out
}

/// Divide by the content gcd and make the leading coefficient positive.
fn normalize(row: &mut Vec<(u32, BigInt)>) {
    if row.is_empty() {
        return;
    }
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// Scale a sparse rational row to a primitive integer row (rank-preserving).
fn clear_denominators(row: &[(u32, Rat)]) -> Vec<(u32, BigInt)> {
    let mut lcm = BigInt::one();
    for (_, v) in row {
        lcm = lcm.lcm(v.denom());
    }
    row.iter()
        .map(|(c, v)| (*c, v.numer() * (&lcm / v.denom())))
        .collect()
}

/// In-place reduced row echelon form over the rationals; returns the pivot
/// column of each nonzero row, in order.  Pivot entries are scaled to 1 and
/// fully reduced upward, so the nonzero rows are canonical for the row space.
pub(crate) fn rref(mat: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..cols {
        let Some(src) = (next_row..rows).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(next_row, src);
        let inv = mat[next_row][col].clone();
        for x in &mut mat[next_row] {
            *x = &*x / &inv;
        }
        for r in 0..rows {
            if r != next_row && !mat[r][col].is_zero() {
                let f = mat[r][col].clone();
                for c in col..cols {
                    let sub = &f * &mat[next_row][c];
                    mat[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == rows {
            break;
        }
    }
    pivots
}

/// Exact inverse of a square dense matrix, if it is invertible.
pub(crate) fn invert_dense(mat: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = mat.len();
    let mut aug: Vec<Vec<Rat>> = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "invert_dense: not square");
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            }));
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(v: i64) -> Rat {
        Rat::from_integer(v.into())
    }

    fn from_dense(rows: &[&[i64]]) -> ExactMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        ExactMatrix::from_triplets(
            r,
            c,
            rows.iter().enumerate().flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(j, &v)| (i, j, rat(v)))
            }),
        )
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(from_dense(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(from_dense(&[&[1, 0], &[0, 1]]).rank(), 2);
        assert_eq!(from_dense(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(
            from_dense(&[&[2, 4, 6], &[1, 2, 3], &[3, 5, 7]]).rank(),
            2
        );
    }

    #[test]
    fn rank_handles_rational_entries() {
        let m = ExactMatrix::from_triplets(
            2,
            2,
            vec![
                (0, 0, Rat::new(1.into(), 2.into())),
                (0, 1, Rat::new(1.into(), 3.into())),
                (1, 0, Rat::new(3.into(), 2.into())),
                (1, 1, Rat::new(1.into(), 1.into())),
            ],
        );
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn triplets_accumulate_and_cancel() {
        let m = ExactMatrix::from_triplets(1, 2, vec![(0, 0, rat(1)), (0, 0, rat(-1)), (0, 1, rat(2))]);
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.entry(0, 1), rat(2));
        assert!(m.entry(0, 0).is_zero());
    }

    #[test]
    fn rank_nullity_on_random_shapes() {
        let m = from_dense(&[&[1, 2, 3, 4], &[0, 1, 1, 0], &[1, 3, 4, 4]]);
        let k = m.kernel_basis();
        assert_eq!(m.rank() + k.len(), m.n_cols());
        for v in &k {
            let prod: Vec<Rat> = (0..m.n_rows())
                .map(|r| {
                    m.row(r)
                        .iter()
                        .map(|(c, a)| a * &v[*c as usize])
                        .fold(Rat::zero(), |s, x| s + x)
                })
                .collect();
            assert!(prod.iter().all(Rat::is_zero));
        }
    }

    #[test]
    fn column_space_membership() {
        let m = from_dense(&[&[1, 0], &[0, 1], &[1, 1]]);
        let cs = m.column_space();
        assert_eq!(cs.rank(), 2);
        assert!(cs.contains(&[rat(1), rat(1), rat(2)]));
        assert!(!cs.contains(&[rat(1), rat(0), rat(0)]));
    }

    #[test]
    fn product_and_stack_shapes() {
        let a = from_dense(&[&[1, 2], &[3, 4]]);
        let b = from_dense(&[&[0, 1], &[1, 0]]);
        let p = a.mul(&b);
        assert_eq!(p.entry(0, 0), rat(2));
        assert_eq!(p.entry(1, 1), rat(3));
        let s = a.stack(&b);
        assert_eq!(s.n_rows(), 4);
        assert_eq!(s.rank(), 2);
    }

    #[test]
    fn inverse_round_trip() {
        let m = vec![
            vec![rat(2), rat(1)],
            vec![rat(1), rat(1)],
        ];
        let inv = invert_dense(&m).unwrap();
        assert_eq!(inv[0][0], rat(1));
        assert_eq!(inv[0][1], rat(-1));
        assert_eq!(inv[1][0], rat(-1));
        assert_eq!(inv[1][1], rat(2));
        let singular = vec![
            vec![rat(1), rat(2)],
            vec![rat(2), rat(4)],
        ];
        assert!(invert_dense(&singular).is_none());
    }
}
