//! Exact sparse linear algebra over the coefficient field: elimination to a
//! canonical reduced row echelon form, ranks, kernels, and subspace
//! arithmetic. Everything is deterministic; no floating point anywhere.

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Sparse vector: (index, value) pairs, strictly increasing indices, no zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

pub fn sparse_get<'a>(v: &'a SparseVec, idx: usize) -> Option<&'a Scalar> {
    v.binary_search_by_key(&idx, |e| e.0).ok().map(|i| &v[i].1)
}

/// `a + c * b`, merging sorted supports.
pub fn sparse_axpy(a: &SparseVec, b: &SparseVec, c: &Scalar) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + &(c * &b[j].1);
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_scale(v: &SparseVec, c: &Scalar) -> SparseVec {
    v.iter().map(|(i, a)| (*i, a * c)).collect()
}

/// Incremental echelon accumulator: pivot rows with distinct leading indices,
/// each normalized to leading coefficient 1, kept sorted by leading index.
/// Forward-reduced only; call `into_rref` for the canonical form.
struct Echelon {
    rows: Vec<SparseVec>,
}

impl Echelon {
    fn new() -> Echelon {
        Echelon { rows: Vec::new() }
    }

    fn reduce(&self, mut v: SparseVec) -> SparseVec {
        // Pivot indices are strictly increasing, and eliminating pivot p only
        // touches indices > p, so one ascending pass suffices.
        for row in &self.rows {
            let p = row[0].0;
            if let Some(c) = sparse_get(&v, p) {
                let factor = -c;
                v = sparse_axpy(&v, row, &factor);
            }
        }
        v
    }

    /// Reduces and, if a nonzero residue remains, adopts it as a new pivot
    /// row. Returns whether the vector enlarged the span.
    fn insert(&mut self, v: SparseVec) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        let lead = r[0].1.clone();
        let normalized = sparse_scale(&r, &lead.inv());
        let pos = self
            .rows
            .partition_point(|row| row[0].0 < normalized[0].0);
        self.rows.insert(pos, normalized);
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Back-eliminates every pivot column from the other rows, yielding the
    /// unique reduced echelon basis of the row space.
    fn into_rref(mut self) -> Vec<SparseVec> {
        for j in (0..self.rows.len()).rev() {
            let pivot_col = self.rows[j][0].0;
            for i in 0..j {
                if let Some(c) = sparse_get(&self.rows[i], pivot_col) {
                    let factor = -c;
                    self.rows[i] = sparse_axpy(&self.rows[i], &self.rows[j], &factor);
                }
            }
        }
        self.rows
    }
}

/// Seeds the accumulator with rows sorted sparsest-first (cheap fill-in
/// control; the final reduced form does not depend on the order).
fn echelon_of(rows: &[SparseVec]) -> Echelon {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by_key(|&i| (rows[i].len(), i));
    let mut ech = Echelon::new();
    for i in order {
        ech.insert(rows[i].clone());
    }
    ech
}

/// Sparse matrix with explicit shape. Entries at the same position accumulate.
#[derive(Debug, Clone)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    row_data: Vec<SparseVec>,
}

impl ScalarMatrix {
    pub fn from_entries(
        rows: usize,
        cols: usize,
        field: Field,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<ScalarMatrix> {
        let mut row_maps: Vec<std::collections::BTreeMap<usize, Scalar>> =
            vec![Default::default(); rows];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::ShapeMismatch(format!(
                    "entry ({r},{c}) outside {rows}x{cols} matrix"
                )));
            }
            if v.is_zero() {
                continue;
            }
            match row_maps[r].entry(c) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(v);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let sum = &*e.get() + &v;
                    if sum.is_zero() {
                        e.remove();
                    } else {
                        *e.get_mut() = sum;
                    }
                }
            }
        }
        Ok(ScalarMatrix {
            rows,
            cols,
            field,
            row_data: row_maps
                .into_iter()
                .map(|m| m.into_iter().collect())
                .collect(),
        })
    }

    pub fn zero(rows: usize, cols: usize, field: Field) -> ScalarMatrix {
        ScalarMatrix {
            rows,
            cols,
            field,
            row_data: vec![Vec::new(); rows],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        sparse_get(&self.row_data[r], c)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn nnz(&self) -> usize {
        self.row_data.iter().map(|r| r.len()).sum()
    }

    /// Rank via forward elimination only; no back-substitution.
    pub fn rank(&self) -> usize {
        echelon_of(&self.row_data).rank()
    }

    /// Canonical reduced echelon basis of the row space.
    pub fn rref_rows(&self) -> Vec<SparseVec> {
        echelon_of(&self.row_data).into_rref()
    }

    /// Canonical basis of the right kernel {v : M v = 0}.
    pub fn kernel_basis(&self) -> Subspace {
        let rref = echelon_of(&self.row_data).into_rref();
        let pivots: Vec<usize> = rref.iter().map(|r| r[0].0).collect();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut vectors: Vec<SparseVec> = Vec::new();
        for f in 0..self.cols {
            if pivot_set.contains(&f) {
                continue;
            }
            let mut v: SparseVec = Vec::new();
            for (row, &p) in rref.iter().zip(&pivots) {
                if let Some(a) = sparse_get(row, f) {
                    v.push((p, -a));
                }
            }
            v.push((f, self.field.one()));
            v.sort_by_key(|e| e.0);
            vectors.push(v);
        }
        debug_assert_eq!(vectors.len(), self.cols - rref.len());
        Subspace::from_spanning(self.cols, self.field, vectors)
    }

    /// Plain-text triplet dump (`row<TAB>col<TAB>value` per line), rows then
    /// columns ascending.
    pub fn to_coordinate_text(&self) -> String {
        let mut out = String::new();
        for (r, row) in self.row_data.iter().enumerate() {
            for (c, v) in row {
                out.push_str(&format!("{r}\t{c}\t{v}\n"));
            }
        }
        out
    }
}

/// A linear subspace held as the unique reduced echelon basis, so equal
/// subspaces compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    field: Field,
    basis: Vec<SparseVec>,
}

impl Subspace {
    pub fn zero(ambient: usize, field: Field) -> Subspace {
        Subspace {
            ambient,
            field,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize, field: Field) -> Subspace {
        let basis = (0..ambient).map(|i| vec![(i, field.one())]).collect();
        Subspace {
            ambient,
            field,
            basis,
        }
    }

    pub fn from_spanning(ambient: usize, field: Field, vectors: Vec<SparseVec>) -> Subspace {
        debug_assert!(vectors
            .iter()
            .all(|v| v.last().map_or(true, |e| e.0 < ambient)));
        Subspace {
            ambient,
            field,
            basis: echelon_of(&vectors).into_rref(),
        }
    }

    /// Caller guarantees `basis` is already a reduced echelon basis (pivots
    /// strictly increasing, pivot coefficient 1, pivot columns cleared in the
    /// other vectors). Used for block-structured tensor bases whose reduced
    /// form is known by construction.
    pub(crate) fn from_rref_unchecked(
        ambient: usize,
        field: Field,
        basis: Vec<SparseVec>,
    ) -> Subspace {
        #[cfg(debug_assertions)]
        {
            let redone = Subspace::from_spanning(ambient, field, basis.clone());
            debug_assert_eq!(redone.basis, basis, "basis was not in reduced form");
        }
        Subspace {
            ambient,
            field,
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    /// Residue of `v` after eliminating every basis pivot.
    pub fn reduce_vector(&self, v: &SparseVec) -> SparseVec {
        let mut r = v.clone();
        for row in &self.basis {
            if let Some(c) = sparse_get(&r, row[0].0) {
                let factor = -c;
                r = sparse_axpy(&r, row, &factor);
            }
        }
        r
    }

    pub fn contains_vector(&self, v: &SparseVec) -> bool {
        self.reduce_vector(v).is_empty()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains_vector(v))
    }

    /// Coordinates of `v` in the reduced basis, or None when `v` lies outside
    /// the subspace. Reading off pivot positions is enough because the basis
    /// is reduced.
    pub fn express(&self, v: &SparseVec) -> Option<Vec<Scalar>> {
        let coords: Vec<Scalar> = self
            .basis
            .iter()
            .map(|row| {
                sparse_get(v, row[0].0)
                    .cloned()
                    .unwrap_or_else(|| self.field.zero())
            })
            .collect();
        let mut residue = v.clone();
        for (row, c) in self.basis.iter().zip(&coords) {
            if !c.is_zero() {
                let factor = -c;
                residue = sparse_axpy(&residue, row, &factor);
            }
        }
        residue.is_empty().then_some(coords)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut vectors = self.basis.clone();
        vectors.extend(other.basis.iter().cloned());
        Ok(Subspace::from_spanning(self.ambient, self.field, vectors))
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient,
                right: other.ambient,
            });
        }
        Ok(())
    }

    /// Intersection via the kernel of the stacked basis matrix: a vector in
    /// both spaces is a combination u of self-basis and w of other-basis with
    /// Au - Bw = 0.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Subspace::zero(self.ambient, self.field));
        }
        let da = self.dim();
        let mut entries: Vec<(usize, usize, Scalar)> = Vec::new();
        for (k, v) in self.basis.iter().enumerate() {
            for (pos, c) in v {
                entries.push((*pos, k, c.clone()));
            }
        }
        for (j, v) in other.basis.iter().enumerate() {
            for (pos, c) in v {
                entries.push((*pos, da + j, -c));
            }
        }
        let stacked =
            ScalarMatrix::from_entries(self.ambient, da + other.dim(), self.field, entries)?;
        let ker = stacked.kernel_basis();
        let vectors: Vec<SparseVec> = ker
            .basis()
            .iter()
            .map(|kv| {
                let mut acc: SparseVec = Vec::new();
                for (idx, c) in kv {
                    if *idx < da {
                        acc = sparse_axpy(&acc, &self.basis[*idx], c);
                    }
                }
                acc
            })
            .collect();
        Ok(Subspace::from_spanning(self.ambient, self.field, vectors))
    }

    /// Greedy complement of `self` inside `within`, scanning `within`'s
    /// canonical basis in order, so the result is deterministic.
    pub fn complement_in(&self, within: &Subspace) -> Result<Subspace> {
        self.check_ambient(within)?;
        if !within.contains(self) {
            return Err(Error::NotContained);
        }
        let mut ech = Echelon::new();
        for row in &self.basis {
            ech.insert(row.clone());
        }
        let mut picked: Vec<SparseVec> = Vec::new();
        for v in &within.basis {
            if ech.insert(v.clone()) {
                picked.push(v.clone());
            }
        }
        debug_assert_eq!(picked.len(), within.dim() - self.dim());
        Ok(Subspace::from_spanning(self.ambient, self.field, picked))
    }
}

/// Determinant of a small dense matrix by fraction-free-ish Gaussian
/// elimination with exact division; row swaps flip the sign.
pub fn determinant(field: Field, m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    let mut work: Vec<Vec<Scalar>> = m.to_vec();
    debug_assert!(work.iter().all(|row| row.len() == n));
    let mut det = field.one();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !work[r][col].is_zero());
        let Some(p) = pivot_row else {
            return field.zero();
        };
        if p != col {
            work.swap(p, col);
            det = -&det;
        }
        let pv = work[col][col].clone();
        det = &det * &pv;
        let inv = pv.inv();
        for r in col + 1..n {
            if work[r][col].is_zero() {
                continue;
            }
            let factor = &work[r][col] * &inv;
            for c in col..n {
                let sub = &factor * &work[col][c];
                work[r][c] = &work[r][c] - &sub;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Field {
        Field::Rational
    }

    fn s(n: i64) -> Scalar {
        f().from_i64(n)
    }

    fn mat(rows: usize, cols: usize, dense: &[&[i64]]) -> ScalarMatrix {
        let mut entries = Vec::new();
        for (r, row) in dense.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                entries.push((r, c, s(v)));
            }
        }
        ScalarMatrix::from_entries(rows, cols, f(), entries).unwrap()
    }

    #[test]
    fn rank_and_kernel_dimension_add_up() {
        // 2x3 of rank 2: kernel has dimension 1
        let m = mat(2, 3, &[&[1, 2, 3], &[0, 1, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.dim(), 1);
        // M v = 0 for the kernel vector
        let v = &k.basis()[0];
        for r in 0..2 {
            let mut acc = f().zero();
            for (idx, c) in v {
                acc = &acc + &(&m.get(r, *idx) * c);
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn rref_is_canonical_under_row_shuffles() {
        let a = mat(3, 4, &[&[1, 2, 0, 1], &[0, 0, 1, 4], &[2, 4, 1, 6]]);
        let b = mat(3, 4, &[&[2, 4, 1, 6], &[1, 2, 0, 1], &[0, 0, 1, 4]]);
        assert_eq!(a.rref_rows(), b.rref_rows());
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn scaled_rows_do_not_change_rref() {
        let a = mat(2, 3, &[&[2, 4, 6], &[1, 1, 0]]);
        let b = mat(2, 3, &[&[1, 2, 3], &[3, 3, 0]]);
        assert_eq!(a.rref_rows(), b.rref_rows());
    }

    #[test]
    fn intersect_two_planes_in_3_space() {
        // span{e1, e2} meet span{e2, e3} = span{e2}
        let p1 = Subspace::from_spanning(3, f(), vec![vec![(0, s(1))], vec![(1, s(1))]]);
        let p2 = Subspace::from_spanning(3, f(), vec![vec![(1, s(1))], vec![(2, s(1))]]);
        let meet = p1.intersect(&p2).unwrap();
        assert_eq!(meet.dim(), 1);
        assert_eq!(meet.basis()[0], vec![(1, s(1))]);
    }

    #[test]
    fn intersect_generic_lines_is_zero() {
        let l1 = Subspace::from_spanning(2, f(), vec![vec![(0, s(1)), (1, s(1))]]);
        let l2 = Subspace::from_spanning(2, f(), vec![vec![(0, s(1)), (1, s(2))]]);
        assert_eq!(l1.intersect(&l2).unwrap().dim(), 0);
    }

    #[test]
    fn complement_dimensions_add_up() {
        let sub = Subspace::from_spanning(4, f(), vec![vec![(0, s(1)), (2, s(1))]]);
        let within = Subspace::full(4, f());
        let comp = sub.complement_in(&within).unwrap();
        assert_eq!(comp.dim(), 3);
        let total = sub.sum(&comp).unwrap();
        assert_eq!(total.dim(), 4);
        // disjointness
        assert_eq!(sub.intersect(&comp).unwrap().dim(), 0);
    }

    #[test]
    fn complement_requires_containment() {
        let sub = Subspace::from_spanning(3, f(), vec![vec![(0, s(1))]]);
        let within = Subspace::from_spanning(3, f(), vec![vec![(1, s(1))], vec![(2, s(1))]]);
        assert!(matches!(
            sub.complement_in(&within),
            Err(Error::NotContained)
        ));
    }

    #[test]
    fn express_in_reduced_basis() {
        let sp = Subspace::from_spanning(
            3,
            f(),
            vec![vec![(0, s(1)), (2, s(1))], vec![(1, s(1)), (2, s(-1))]],
        );
        let v = vec![(0, s(2)), (1, s(3)), (2, s(-1))];
        let coords = sp.express(&v).unwrap();
        assert_eq!(coords, vec![s(2), s(3)]);
        assert!(sp.express(&vec![(2, s(1))]).is_none());
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = Subspace::full(3, f());
        let b = Subspace::full(4, f());
        assert!(matches!(
            a.intersect(&b),
            Err(Error::AmbientMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn determinant_small_cases() {
        let m = vec![vec![s(1), s(2)], vec![s(3), s(4)]];
        assert_eq!(determinant(f(), &m), s(-2));
        let singular = vec![vec![s(1), s(2)], vec![s(2), s(4)]];
        assert!(determinant(f(), &singular).is_zero());
        // permutation matrix with sign -1
        let perm = vec![
            vec![s(0), s(1), s(0)],
            vec![s(1), s(0), s(0)],
            vec![s(0), s(0), s(1)],
        ];
        assert_eq!(determinant(f(), &perm), s(-1));
    }

    #[test]
    fn kernel_over_prime_field() {
        let fp = Field::prime(5).unwrap();
        let one = fp.one();
        let m = ScalarMatrix::from_entries(
            1,
            2,
            fp,
            vec![(0, 0, one.clone()), (0, 1, fp.from_i64(2))],
        )
        .unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.dim(), 1);
        // (-2, 1) = (3, 1), rescaled so the leading coefficient is 1
        assert_eq!(k.basis()[0], vec![(0, fp.one()), (1, fp.from_i64(2))]);
    }
}
