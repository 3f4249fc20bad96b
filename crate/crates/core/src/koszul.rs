//! Quadratic-dual side of a quadratic algebra: the intersection spaces
//! W_n inside the n-th tensor power of the generating space, the associated
//! complex over the algebra, and the two Koszulness certificates.
//!
//! Tensor coordinates are big-endian: the word g_1 g_2 ... g_n maps to the
//! index ((g_1 * v + g_2) * v + ...) + g_n, so the first factor varies
//! slowest.

use crate::error::{Error, Result};
use crate::linalg::{SparseVec, Subspace};
use crate::poly::NcPolynomial;
use crate::resolution::{Complex, FreeModule, ModuleMap};
use crate::rewriting::RewriteSystem;
use crate::scalar::Field;
use crate::word::Word;

/// Coordinate budget: refuse tensor powers with more than this many
/// coordinates instead of thrashing.
pub const DEFAULT_SIZE_BUDGET: usize = 65_536;

/// Generating space dimension plus the relation span inside the square of
/// the generating space.
#[derive(Debug, Clone)]
pub struct QuadraticData {
    v_dim: usize,
    field: Field,
    relation_space: Subspace,
}

impl QuadraticData {
    pub fn v_dim(&self) -> usize {
        self.v_dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn relation_space(&self) -> &Subspace {
        &self.relation_space
    }
}

/// Flattens degree-2 relations into vectors of length v_dim^2.
pub fn relation_space(
    names_len: usize,
    field: Field,
    relations: &[NcPolynomial],
) -> Result<QuadraticData> {
    let v = names_len;
    let mut vectors: Vec<SparseVec> = Vec::with_capacity(relations.len());
    for (index, rel) in relations.iter().enumerate() {
        if rel.homogeneous_degree() != Some(2) {
            return Err(Error::BadRelation {
                index,
                reason: "not homogeneous of degree 2".into(),
            });
        }
        let mut vec: SparseVec = Vec::new();
        for (w, c) in rel.terms() {
            let l = w.letters();
            vec.push((l[0] as usize * v + l[1] as usize, c.clone()));
        }
        vec.sort_by_key(|e| e.0);
        vectors.push(vec);
    }
    Ok(QuadraticData {
        v_dim: v,
        field,
        relation_space: Subspace::from_spanning(v * v, field, vectors),
    })
}

/// Convenience over a presentation.
pub fn quadratic_data(pres: &crate::presentation::Presentation) -> Result<QuadraticData> {
    relation_space(pres.n_generators(), pres.field, &pres.relations)
}

fn checked_pow(v: usize, n: usize, budget: usize) -> Result<usize> {
    let mut acc = 1usize;
    for _ in 0..n {
        acc = acc.checked_mul(v).unwrap_or(usize::MAX);
        if acc > budget {
            return Err(Error::SizeBudget {
                needed: acc,
                budget,
            });
        }
    }
    Ok(acc)
}

/// Basis of `space x V` (each basis vector tensored with each generator on
/// the right). The result is reduced by construction: pivots scale by v and
/// shift, and cleared columns stay cleared.
fn tensor_with_generators_right(space: &Subspace, v: usize) -> Subspace {
    let ambient = space.ambient() * v;
    let mut basis: Vec<SparseVec> = Vec::with_capacity(space.dim() * v);
    for b in space.basis() {
        for g in 0..v {
            basis.push(b.iter().map(|(pos, c)| (pos * v + g, c.clone())).collect());
        }
    }
    Subspace::from_rref_unchecked(ambient, space.field(), basis)
}

/// Basis of `V^(left) x space x V^(right)` for a relation block placed at a
/// fixed offset inside n tensor factors. Also reduced by construction.
fn placed_relation_space(qd: &QuadraticData, n: usize, left: usize) -> Subspace {
    let v = qd.v_dim;
    let right = n - 2 - left;
    let left_count = v.pow(left as u32);
    let right_count = v.pow(right as u32);
    let ambient = v.pow(n as u32);
    let block = v * v * right_count;
    let mut basis: Vec<SparseVec> = Vec::new();
    for u in 0..left_count {
        for b in qd.relation_space.basis() {
            for w in 0..right_count {
                basis.push(
                    b.iter()
                        .map(|(pos, c)| (u * block + pos * right_count + w, c.clone()))
                        .collect(),
                );
            }
        }
    }
    Subspace::from_rref_unchecked(ambient, qd.field, basis)
}

/// W_0 = k, W_1 = V, W_2 = R, and W_n = (W_{n-1} x V) meet (V^{n-2} x R).
/// Returns the whole chain W_0..=W_max_n; once some W_n vanishes the rest
/// are zero without further work.
pub fn koszul_chain_with_budget(
    qd: &QuadraticData,
    max_n: usize,
    budget: usize,
) -> Result<Vec<Subspace>> {
    let v = qd.v_dim;
    let mut chain: Vec<Subspace> = Vec::with_capacity(max_n + 1);
    for n in 0..=max_n {
        let ambient = checked_pow(v, n, budget)?;
        let next = match n {
            0 => Subspace::full(1, qd.field),
            1 => Subspace::full(v, qd.field),
            2 => qd.relation_space.clone(),
            _ => {
                let prev = &chain[n - 1];
                if prev.dim() == 0 {
                    Subspace::zero(ambient, qd.field)
                } else {
                    let grown = tensor_with_generators_right(prev, v);
                    let placed = placed_relation_space(qd, n, n - 2);
                    grown.intersect(&placed)?
                }
            }
        };
        chain.push(next);
    }
    Ok(chain)
}

pub fn koszul_space(qd: &QuadraticData, n: usize) -> Result<Subspace> {
    koszul_space_with_budget(qd, n, DEFAULT_SIZE_BUDGET)
}

pub fn koszul_space_with_budget(qd: &QuadraticData, n: usize, budget: usize) -> Result<Subspace> {
    Ok(koszul_chain_with_budget(qd, n, budget)?.pop().expect("nonempty chain"))
}

/// Splits the last tensor factor of a W_n basis vector: returns, for each
/// generator g, the coordinate vector u_g in V^(n-1) with
/// w = sum_g u_g x e_g.
fn split_last_factor(w: &SparseVec, v: usize) -> Vec<SparseVec> {
    let mut parts: Vec<SparseVec> = vec![Vec::new(); v];
    for (pos, c) in w {
        parts[pos % v].push((pos / v, c.clone()));
    }
    // positions arrive sorted, and pos/v preserves order within a residue
    parts
}

/// The complex W_n x B(-n) -> W_{n-1} x B(-(n-1)) induced by splitting the
/// last tensor factor into a right multiplication. Stops at max_n or at the
/// first vanishing W_n, whichever comes first.
pub fn koszul_complex(qd: &QuadraticData, rs: &RewriteSystem, max_n: usize) -> Result<Complex> {
    assert_eq!(
        qd.v_dim,
        rs.n_generators(),
        "quadratic data and rewrite system disagree on the generating space"
    );
    let chain = koszul_chain_with_budget(qd, max_n, DEFAULT_SIZE_BUDGET)?;
    let length = chain
        .iter()
        .position(|w| w.dim() == 0)
        .map(|z| z.saturating_sub(1))
        .unwrap_or(max_n);
    let field = qd.field;
    let base = FreeModule::new(vec![0]);
    let mut maps: Vec<ModuleMap> = Vec::new();
    for n in 1..=length {
        let src = FreeModule::new(vec![n as i64; chain[n].dim()]);
        let tgt = FreeModule::new(vec![(n - 1) as i64; chain[n - 1].dim()]);
        let mut entries =
            vec![vec![NcPolynomial::zero(); chain[n].dim()]; chain[n - 1].dim()];
        for (k, w) in chain[n].basis().iter().enumerate() {
            let parts = split_last_factor(w, qd.v_dim);
            for (g, part) in parts.iter().enumerate() {
                if part.is_empty() {
                    continue;
                }
                let coords = chain[n - 1]
                    .express(part)
                    .expect("W_n embeds in W_{n-1} tensor V");
                for (i, c) in coords.iter().enumerate() {
                    if !c.is_zero() {
                        entries[i][k].add_assign_term(
                            Word::single(g as u8),
                            c.clone(),
                        );
                    }
                }
            }
        }
        maps.push(ModuleMap::new(src, tgt, entries, field)?);
    }
    Complex::new(base, maps, field)
}

/// Both Koszulness certificates over degrees 1..=max_degree.
#[derive(Debug)]
pub struct KoszulnessReport {
    pub w_dims: Vec<usize>,
    /// Degrees where the alternating-sum identity fails, with the defect.
    pub euler_failures: Vec<(usize, i64)>,
    pub exactness: crate::resolution::ExactnessReport,
}

impl KoszulnessReport {
    pub fn euler_ok(&self) -> bool {
        self.euler_failures.is_empty()
    }

    pub fn exact_ok(&self) -> bool {
        self.exactness.interior_exact() && self.exactness.left_kernel_zero()
    }

    pub fn koszul_certified(&self) -> bool {
        self.euler_ok() && self.exact_ok()
    }
}

/// Certificate (a): for 1 <= d <= max_degree,
/// sum_n (-1)^n dim W_n dim B_{d-n} = 0.
/// Certificate (b): the complex is exact in every interior position and at
/// the left end in all degrees <= max_degree.
pub fn koszulness_check(
    qd: &QuadraticData,
    rs: &RewriteSystem,
    max_degree: usize,
) -> Result<KoszulnessReport> {
    let chain = koszul_chain_with_budget(qd, max_degree, DEFAULT_SIZE_BUDGET)?;
    let w_dims: Vec<usize> = chain.iter().map(|w| w.dim()).collect();
    let b_dims = rs.hilbert_coefficients(max_degree);
    let mut euler_failures = Vec::new();
    for d in 1..=max_degree {
        let mut acc: i64 = 0;
        for n in 0..=d {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            acc += sign * (w_dims[n] as i64) * (b_dims[d - n] as i64);
        }
        if acc != 0 {
            euler_failures.push((d, acc));
        }
    }
    let complex = koszul_complex(qd, rs, max_degree)?;
    let exactness = crate::resolution::degreewise_exactness(rs, &complex, max_degree)?;
    Ok(KoszulnessReport {
        w_dims,
        euler_failures,
        exactness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{build_base_algebra, build_double_extension, family_k, BaseData};
    use crate::rewriting::make_rewrite_system;
    use crate::scalar::Scalar;

    fn rat(n: i64) -> Scalar {
        Field::Rational.from_i64(n)
    }

    fn setup(alpha: i64) -> (QuadraticData, RewriteSystem) {
        let data = family_k(&rat(alpha)).unwrap();
        let pres = build_double_extension(&data);
        let rs = make_rewrite_system(&pres).unwrap();
        let qd = quadratic_data(&pres).unwrap();
        (qd, rs)
    }

    #[test]
    fn relation_span_has_dimension_6() {
        let (qd, _) = setup(1);
        assert_eq!(qd.relation_space().dim(), 6);
        assert_eq!(qd.relation_space().ambient(), 16);
    }

    #[test]
    fn w3_has_dimension_4() {
        let (qd, _) = setup(2);
        assert_eq!(koszul_space(&qd, 3).unwrap().dim(), 4);
    }

    #[test]
    fn w4_recursion_agrees_with_full_intersection_oracle() {
        // Independent route: intersect all three placements of the relation
        // block inside V^4 directly.
        let (qd, _) = setup(2);
        let w4 = koszul_space(&qd, 4).unwrap();
        let mut oracle = placed_relation_space(&qd, 4, 0);
        for left in 1..=2 {
            oracle = oracle.intersect(&placed_relation_space(&qd, 4, left)).unwrap();
        }
        assert_eq!(w4, oracle);
        assert_eq!(w4.dim(), 1);
    }

    #[test]
    fn w3_recursion_agrees_with_full_intersection_oracle() {
        let (qd, _) = setup(-1);
        let w3 = koszul_space(&qd, 3).unwrap();
        let oracle = placed_relation_space(&qd, 3, 0)
            .intersect(&placed_relation_space(&qd, 3, 1))
            .unwrap();
        assert_eq!(w3, oracle);
    }

    #[test]
    fn dims_collapse_after_w4() {
        let (qd, _) = setup(3);
        let chain = koszul_chain_with_budget(&qd, 6, DEFAULT_SIZE_BUDGET).unwrap();
        let dims: Vec<usize> = chain.iter().map(|w| w.dim()).collect();
        assert_eq!(dims, vec![1, 4, 6, 4, 1, 0, 0]);
    }

    #[test]
    fn free_algebra_has_no_relations_and_trivial_certificates() {
        // Two generators, no relations: W_2 = 0, complex is V x B(-1) -> B.
        let pres = crate::presentation::Presentation {
            names: vec!["x1".into(), "x2".into()],
            relations: vec![],
            field: Field::Rational,
        };
        let rs = make_rewrite_system(&pres).unwrap();
        let qd = quadratic_data(&pres).unwrap();
        assert_eq!(koszul_space(&qd, 2).unwrap().dim(), 0);
        let report = koszulness_check(&qd, &rs, 4).unwrap();
        assert!(report.koszul_certified());
        assert_eq!(report.w_dims[..3], [1, 2, 0]);
    }

    #[test]
    fn base_algebra_koszulness() {
        let base = BaseData::new(rat(-1), rat(0)).unwrap();
        let pres = build_base_algebra(&base);
        let rs = make_rewrite_system(&pres).unwrap();
        let qd = quadratic_data(&pres).unwrap();
        let report = koszulness_check(&qd, &rs, 5).unwrap();
        assert!(report.koszul_certified());
        assert_eq!(report.w_dims, vec![1, 2, 1, 0, 0, 0]);
    }

    #[test]
    fn size_budget_refuses_oversized_powers() {
        let (qd, _) = setup(1);
        let err = koszul_space_with_budget(&qd, 9, 65_536).unwrap_err();
        assert!(matches!(err, Error::SizeBudget { .. }));
        // 4^8 = 65536 is exactly at the default budget, so n = 8 still runs.
        assert!(koszul_space(&qd, 8).is_ok());
    }
}
