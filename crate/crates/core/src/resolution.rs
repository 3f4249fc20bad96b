//! Graded free right modules, maps between them, complexes, degreewise
//! exactness, and minimal graded free resolutions computed from scratch.
//!
//! Convention, fixed once: elements of a free module are coordinate columns
//! with coefficients from the algebra multiplying on the right; matrices act
//! on the left of coordinates; composition therefore multiplies entries in
//! the order (outer entry) * (inner entry).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{ScalarMatrix, SparseVec, Subspace};
use crate::poly::NcPolynomial;
use crate::rewriting::{DegreeBases, RewriteSystem};
use crate::scalar::{Field, Scalar};
use crate::word::Word;

/// A graded free right module: generator k in degree `shifts[k]`, i.e. the
/// direct sum of B(-shifts[k]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeModule {
    shifts: Vec<i64>,
}

impl FreeModule {
    pub fn new(shifts: Vec<i64>) -> FreeModule {
        FreeModule { shifts }
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn shift(&self, k: usize) -> i64 {
        self.shifts[k]
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    /// Per-generator coordinate offsets and the total dimension in degree d.
    fn offsets(&self, d: i64, bases: &DegreeBases) -> (Vec<usize>, usize) {
        let mut offsets = Vec::with_capacity(self.rank());
        let mut total = 0usize;
        for k in 0..self.rank() {
            offsets.push(total);
            total += bases.dim(d - self.shifts[k]);
        }
        (offsets, total)
    }
}

/// A graded map of free right modules: entries[i][k] is the target-row-i
/// component of the image of source generator k, stored in normal form.
/// Nonzero entries are homogeneous of degree source shift minus target shift.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    source: FreeModule,
    target: FreeModule,
    entries: Vec<Vec<NcPolynomial>>,
    field: Field,
}

impl ModuleMap {
    pub fn new(
        source: FreeModule,
        target: FreeModule,
        entries: Vec<Vec<NcPolynomial>>,
        field: Field,
    ) -> Result<ModuleMap> {
        if entries.len() != target.rank() || entries.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::ShapeMismatch(format!(
                "entry grid must be {}x{}",
                target.rank(),
                source.rank()
            )));
        }
        for (i, row) in entries.iter().enumerate() {
            for (k, e) in row.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let expected = source.shift(k) - target.shift(i);
                if expected < 0 || e.homogeneous_degree() != Some(expected as usize) {
                    return Err(Error::InhomogeneousEntry {
                        row: i,
                        col: k,
                        expected,
                    });
                }
            }
        }
        Ok(ModuleMap {
            source,
            target,
            entries,
            field,
        })
    }

    pub fn source(&self) -> &FreeModule {
        &self.source
    }

    pub fn target(&self) -> &FreeModule {
        &self.target
    }

    pub fn entry(&self, i: usize, k: usize) -> &NcPolynomial {
        &self.entries[i][k]
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Applies the map to a column of elements (one per source generator).
    pub fn apply_column(&self, rs: &RewriteSystem, column: &[NcPolynomial]) -> Vec<NcPolynomial> {
        assert_eq!(column.len(), self.source.rank(), "column length mismatch");
        (0..self.target.rank())
            .map(|i| {
                let mut acc = NcPolynomial::zero();
                for (k, c) in column.iter().enumerate() {
                    if c.is_zero() || self.entries[i][k].is_zero() {
                        continue;
                    }
                    acc = &acc + &rs.multiply(&self.entries[i][k], c);
                }
                acc
            })
            .collect()
    }

    /// The matrix of the degree-d piece: rows index the target monomial
    /// basis, columns the source monomial basis, both blocked by generator.
    pub fn instantiate(&self, rs: &RewriteSystem, d: i64, bases: &DegreeBases) -> ScalarMatrix {
        let (src_off, src_total) = self.source.offsets(d, bases);
        let (tgt_off, tgt_total) = self.target.offsets(d, bases);
        let mut triplets: Vec<(usize, usize, Scalar)> = Vec::new();
        for k in 0..self.source.rank() {
            let e = d - self.source.shift(k);
            if e < 0 {
                continue;
            }
            let level = bases.level(e as usize);
            for (mi, m) in level.words.iter().enumerate() {
                let col = src_off[k] + mi;
                for i in 0..self.target.rank() {
                    let entry = &self.entries[i][k];
                    if entry.is_zero() {
                        continue;
                    }
                    let image = rs.multiply(
                        entry,
                        &NcPolynomial::monomial(m.clone(), self.field.one()),
                    );
                    let tlevel = bases.level((d - self.target.shift(i)) as usize);
                    for (w, c) in image.terms() {
                        let row = tgt_off[i]
                            + *tlevel
                                .position
                                .get(w)
                                .expect("normal form lands in the monomial basis");
                        triplets.push((row, col, c.clone()));
                    }
                }
            }
        }
        ScalarMatrix::from_entries(tgt_total, src_total, self.field, triplets)
            .expect("triplets lie inside the computed shape")
    }
}

/// `f` after `g`: requires f.source = g.target; entry (i,k) is
/// sum_m f(i,m) * g(m,k), reduced.
pub fn compose(rs: &RewriteSystem, f: &ModuleMap, g: &ModuleMap) -> Result<ModuleMap> {
    if f.source.shifts() != g.target.shifts() {
        return Err(Error::ShapeMismatch(
            "inner shifts disagree, maps do not compose".into(),
        ));
    }
    let mut entries = vec![vec![NcPolynomial::zero(); g.source.rank()]; f.target.rank()];
    for i in 0..f.target.rank() {
        for k in 0..g.source.rank() {
            let mut acc = NcPolynomial::zero();
            for m in 0..f.source.rank() {
                if f.entries[i][m].is_zero() || g.entries[m][k].is_zero() {
                    continue;
                }
                acc = &acc + &rs.multiply(&f.entries[i][m], &g.entries[m][k]);
            }
            entries[i][k] = acc;
        }
    }
    ModuleMap::new(g.source.clone(), f.target.clone(), entries, f.field)
}

/// A chain F_0 <- F_1 <- ... with maps[p-1] = d_p : F_p -> F_{p-1}.
#[derive(Debug, Clone)]
pub struct Complex {
    base: FreeModule,
    maps: Vec<ModuleMap>,
    field: Field,
}

impl Complex {
    pub fn new(base: FreeModule, maps: Vec<ModuleMap>, field: Field) -> Result<Complex> {
        if let Some(first) = maps.first() {
            if first.target.shifts() != base.shifts() {
                return Err(Error::ShapeMismatch(
                    "first map does not land in the base module".into(),
                ));
            }
        }
        for w in maps.windows(2) {
            if w[1].target.shifts() != w[0].source.shifts() {
                return Err(Error::ShapeMismatch(
                    "consecutive maps do not chain".into(),
                ));
            }
        }
        Ok(Complex { base, maps, field })
    }

    /// Modules F_0, F_1, ..., F_L.
    pub fn modules(&self) -> Vec<&FreeModule> {
        let mut out = vec![&self.base];
        out.extend(self.maps.iter().map(|m| &m.source));
        out
    }

    pub fn maps(&self) -> &[ModuleMap] {
        &self.maps
    }

    /// Homological length L (index of the last module).
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Drops the last map; used to build deliberately incomplete chains.
    pub fn truncated(&self, keep_maps: usize) -> Complex {
        Complex {
            base: self.base.clone(),
            maps: self.maps[..keep_maps.min(self.maps.len())].to_vec(),
            field: self.field,
        }
    }
}

/// One failed composite entry: d_{after} o d_{after+1} at (row, col) reduced
/// to `residue` instead of zero.
#[derive(Debug)]
pub struct CompositeFailure {
    pub after_map: usize,
    pub row: usize,
    pub col: usize,
    pub residue: NcPolynomial,
}

#[derive(Debug)]
pub struct VerifyReport {
    pub composite_failures: Vec<CompositeFailure>,
    /// (map index p, row, col) of entries with a nonzero degree-0 part,
    /// which would make the complex non-minimal.
    pub nonminimal_entries: Vec<(usize, usize, usize)>,
}

impl VerifyReport {
    pub fn is_complex(&self) -> bool {
        self.composite_failures.is_empty()
    }

    pub fn is_minimal(&self) -> bool {
        self.nonminimal_entries.is_empty()
    }
}

/// Checks every consecutive composite reduces to zero entrywise and that no
/// entry has a scalar part.
pub fn verify_complex(rs: &RewriteSystem, complex: &Complex) -> Result<VerifyReport> {
    let mut composite_failures = Vec::new();
    for p in 1..complex.maps.len() {
        let outer = &complex.maps[p - 1];
        let inner = &complex.maps[p];
        let composite = compose(rs, outer, inner)?;
        for i in 0..composite.target.rank() {
            for k in 0..composite.source.rank() {
                let e = composite.entry(i, k);
                if !e.is_zero() {
                    composite_failures.push(CompositeFailure {
                        after_map: p,
                        row: i,
                        col: k,
                        residue: e.clone(),
                    });
                }
            }
        }
    }
    let mut nonminimal_entries = Vec::new();
    for (p, map) in complex.maps.iter().enumerate() {
        for i in 0..map.target.rank() {
            for k in 0..map.source.rank() {
                let e = map.entry(i, k);
                if !e.is_zero() && e.coeff(&Word::empty()).is_some() {
                    nonminimal_entries.push((p + 1, i, k));
                }
            }
        }
    }
    Ok(VerifyReport {
        composite_failures,
        nonminimal_entries,
    })
}

/// Numerical exactness data of one internal degree.
#[derive(Debug, Clone)]
pub struct DegreeReport {
    pub degree: usize,
    /// dim (F_p)_d for p = 0..=L.
    pub module_dims: Vec<usize>,
    /// rank of (d_p)_d for p = 1..=L.
    pub ranks: Vec<usize>,
    /// dim ker (d_p)_d - rank (d_{p+1})_d for interior positions p = 1..L-1.
    /// Meaningful once composites vanish (then it is the homology dimension).
    pub interior_homology: Vec<i64>,
    /// dim ker (d_L)_d: zero iff nothing is missing at the left end.
    pub left_kernel: usize,
    /// dim (F_0)_d - rank (d_1)_d: the degree-d dimension of the cokernel.
    pub coker: usize,
}

#[derive(Debug)]
pub struct ExactnessReport {
    pub degrees: Vec<DegreeReport>,
}

impl ExactnessReport {
    pub fn interior_exact(&self) -> bool {
        self.degrees
            .iter()
            .all(|d| d.interior_homology.iter().all(|&h| h == 0))
    }

    pub fn left_kernel_zero(&self) -> bool {
        self.degrees.iter().all(|d| d.left_kernel == 0)
    }

    pub fn coker_dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.coker).collect()
    }

    /// Exact in the interior, nothing missing on the left, and the cokernel
    /// matches the expected graded dimensions.
    pub fn is_resolution_of(&self, expected_coker: &[usize]) -> bool {
        self.interior_exact()
            && self.left_kernel_zero()
            && self.coker_dims() == expected_coker
    }
}

/// Rank data of every map in every internal degree 0..=max_degree. Refuses
/// to run on an uncertified rewriting system, since monomial coordinates
/// would be meaningless.
pub fn degreewise_exactness(
    rs: &RewriteSystem,
    complex: &Complex,
    max_degree: usize,
) -> Result<ExactnessReport> {
    rs.require_certified()?;
    let mut bases = DegreeBases::new(rs);
    let min_shift = complex
        .modules()
        .iter()
        .flat_map(|m| m.shifts().iter().copied())
        .min()
        .unwrap_or(0)
        .min(0);
    bases.ensure((max_degree as i64 - min_shift) as usize);
    let mut degrees = Vec::with_capacity(max_degree + 1);
    for d in 0..=max_degree {
        let module_dims: Vec<usize> = complex
            .modules()
            .iter()
            .map(|m| m.offsets(d as i64, &bases).1)
            .collect();
        let ranks: Vec<usize> = complex
            .maps
            .iter()
            .map(|m| m.instantiate(rs, d as i64, &bases).rank())
            .collect();
        let n_maps = ranks.len();
        let interior_homology: Vec<i64> = (1..n_maps)
            .map(|p| module_dims[p] as i64 - ranks[p - 1] as i64 - ranks[p] as i64)
            .collect();
        let left_kernel = if n_maps == 0 {
            0
        } else {
            module_dims[n_maps] - ranks[n_maps - 1]
        };
        let coker = if n_maps == 0 {
            module_dims[0]
        } else {
            module_dims[0] - ranks[0]
        };
        degrees.push(DegreeReport {
            degree: d,
            module_dims,
            ranks,
            interior_homology,
            left_kernel,
            coker,
        });
    }
    Ok(ExactnessReport { degrees })
}

/// Betti numbers: (homological degree i, internal degree j) -> count.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BettiTable {
    entries: BTreeMap<(usize, i64), usize>,
}

impl BettiTable {
    pub fn add(&mut self, i: usize, j: i64, count: usize) {
        if count > 0 {
            *self.entries.entry((i, j)).or_insert(0) += count;
        }
    }

    pub fn get(&self, i: usize, j: i64) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, i64), &usize)> {
        self.entries.iter()
    }

    pub fn total(&self, i: usize) -> usize {
        self.entries
            .iter()
            .filter(|((h, _), _)| *h == i)
            .map(|(_, c)| c)
            .sum()
    }

    pub fn max_homological(&self) -> usize {
        self.entries.keys().map(|(i, _)| *i).max().unwrap_or(0)
    }

    /// Every generator of homological degree i sits in internal degree i.
    pub fn is_diagonal(&self) -> bool {
        self.entries.keys().all(|(i, j)| *j == *i as i64)
    }

    /// Reads the table off a complex's shifts (position 0 contributes its
    /// generators in their own degrees).
    pub fn from_complex(complex: &Complex) -> BettiTable {
        let mut table = BettiTable::default();
        for (i, module) in complex.modules().iter().enumerate() {
            for &j in module.shifts() {
                table.add(i, j, 1);
            }
        }
        table
    }
}

/// The generating function sum beta_{i,j} s^i t^j of a Betti table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincareSeries {
    terms: BTreeMap<(usize, i64), usize>,
}

pub fn poincare_series(table: &BettiTable) -> PoincareSeries {
    PoincareSeries {
        terms: table.iter().map(|(k, v)| (*k, *v)).collect(),
    }
}

impl PoincareSeries {
    pub fn terms(&self) -> impl Iterator<Item = (&(usize, i64), &usize)> {
        self.terms.iter()
    }

    /// Coefficients of the single-variable specialization s = t = z, keyed by
    /// total... by homological degree with internal degree summed out.
    pub fn single_variable(&self) -> BTreeMap<usize, usize> {
        let mut out: BTreeMap<usize, usize> = BTreeMap::new();
        for ((i, _), c) in &self.terms {
            *out.entry(*i).or_insert(0) += c;
        }
        out
    }

    pub fn bivariate_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for ((i, j), c) in &self.terms {
            let mut factors: Vec<String> = Vec::new();
            if *c != 1 || (*i == 0 && *j == 0) {
                factors.push(c.to_string());
            }
            match i {
                0 => {}
                1 => factors.push("s".into()),
                _ => factors.push(format!("s^{i}")),
            }
            match j {
                0 => {}
                1 => factors.push("t".into()),
                _ => factors.push(format!("t^{j}")),
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }

    pub fn single_variable_string(&self) -> String {
        let coeffs = self.single_variable();
        if coeffs.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in &coeffs {
            let mut factors: Vec<String> = Vec::new();
            if *c != 1 || *i == 0 {
                factors.push(c.to_string());
            }
            match i {
                0 => {}
                1 => factors.push("z".into()),
                _ => factors.push(format!("z^{i}")),
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

fn generator_polys(field: Field) -> [NcPolynomial; 4] {
    [
        NcPolynomial::generator(0, field),
        NcPolynomial::generator(1, field),
        NcPolynomial::generator(2, field),
        NcPolynomial::generator(3, field),
    ]
}

/// The length-4 complex resolving the trivial module of the family at the
/// given parameter, entered from its closed form. Shifts 0 / 1^4 / 2^6 /
/// 3^4 / 4.
pub fn golden_resolution_k(alpha: &Scalar) -> Result<Complex> {
    if alpha.is_zero() {
        return Err(Error::ZeroParameter { name: "alpha" });
    }
    let field = alpha.field();
    let [x1, x2, y1, y2] = generator_polys(field);
    let z = NcPolynomial::zero;
    let ay1 = y1.scale(alpha);
    let f0 = FreeModule::new(vec![0]);
    let f1 = FreeModule::new(vec![1; 4]);
    let f2 = FreeModule::new(vec![2; 6]);
    let f3 = FreeModule::new(vec![3; 4]);
    let f4 = FreeModule::new(vec![4]);

    let d1 = ModuleMap::new(
        f1.clone(),
        f0.clone(),
        vec![vec![x1.clone(), x2.clone(), y1.clone(), y2.clone()]],
        field,
    )?;
    let d2 = ModuleMap::new(
        f2.clone(),
        f1.clone(),
        vec![
            vec![x2.clone(), z(), -&y1, z(), -&y2, z()],
            vec![x1.clone(), z(), z(), -&y2, z(), -&ay1],
            vec![z(), y2.clone(), x1.clone(), x2.clone(), z(), z()],
            vec![z(), y1.clone(), z(), z(), x1.clone(), x2.clone()],
        ],
        field,
    )?;
    let d3 = ModuleMap::new(
        f3.clone(),
        f2.clone(),
        vec![
            vec![y2.clone(), ay1.clone(), z(), z()],
            vec![z(), z(), x1.clone(), x2.clone()],
            vec![x2.clone(), z(), -&y2, z()],
            vec![x1.clone(), z(), z(), -&ay1],
            vec![z(), x2.clone(), -&y1, z()],
            vec![z(), x1.clone(), z(), -&y2],
        ],
        field,
    )?;
    let d4 = ModuleMap::new(
        f4,
        f3,
        vec![vec![ay1], vec![y2], vec![x2], vec![x1]],
        field,
    )?;
    Complex::new(f0, vec![d1, d2, d3, d4], field)
}

/// Golden complex for B modulo the right ideal on x1, x2:
/// B <- B(-1)^2 <- B(-2) with d1 = (x1 x2), d2 = (x2 x1)^T.
pub fn cyclic_module_resolution_x(field: Field) -> Result<Complex> {
    let [x1, x2, _, _] = generator_polys(field);
    cyclic_resolution(field, x1, x2)
}

/// Same shape for the right ideal on y1, y2.
pub fn cyclic_module_resolution_y(field: Field) -> Result<Complex> {
    let [_, _, y1, y2] = generator_polys(field);
    cyclic_resolution(field, y1, y2)
}

fn cyclic_resolution(field: Field, g1: NcPolynomial, g2: NcPolynomial) -> Result<Complex> {
    let f0 = FreeModule::new(vec![0]);
    let f1 = FreeModule::new(vec![1; 2]);
    let f2 = FreeModule::new(vec![2]);
    let d1 = ModuleMap::new(f1.clone(), f0.clone(), vec![vec![g1.clone(), g2.clone()]], field)?;
    let d2 = ModuleMap::new(f2, f1, vec![vec![g2], vec![g1]], field)?;
    Complex::new(f0, vec![d1, d2], field)
}

/// Named degree-3 and degree-4 syzygy candidates of the family complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyzygyCandidate {
    Eta1,
    Eta2,
    Eta3,
    Eta4,
    Omega,
}

/// Evaluates the previous differential on a named candidate: the etas go
/// through d_2, omega goes through d_3. A true syzygy returns all zeros.
pub fn syzygy_evaluate(
    rs: &RewriteSystem,
    alpha: &Scalar,
    which: SyzygyCandidate,
) -> Result<Vec<NcPolynomial>> {
    let complex = golden_resolution_k(alpha)?;
    let (map, source_col) = match which {
        SyzygyCandidate::Eta1 => (&complex.maps[1], column_of(&complex.maps[2], 0)),
        SyzygyCandidate::Eta2 => (&complex.maps[1], column_of(&complex.maps[2], 1)),
        SyzygyCandidate::Eta3 => (&complex.maps[1], column_of(&complex.maps[2], 2)),
        SyzygyCandidate::Eta4 => (&complex.maps[1], column_of(&complex.maps[2], 3)),
        SyzygyCandidate::Omega => (&complex.maps[2], column_of(&complex.maps[3], 0)),
    };
    Ok(map.apply_column(rs, &source_col))
}

fn column_of(map: &ModuleMap, k: usize) -> Vec<NcPolynomial> {
    (0..map.target().rank())
        .map(|i| map.entry(i, k).clone())
        .collect()
}

/// Minimal graded free resolution of B modulo the right ideal generated by
/// `generators` (homogeneous of degree 1), built stage by stage: minimal
/// generators of each kernel are a complement of (previous kernel part) * B_1
/// inside the kernel, degree by degree. Correct through internal degree
/// `max_degree`; stops early once the kernel vanishes in every tracked
/// degree.
pub fn minimal_resolution(
    rs: &RewriteSystem,
    generators: &[NcPolynomial],
    max_homological: usize,
    max_degree: usize,
) -> Result<(Complex, BettiTable)> {
    rs.require_certified()?;
    let field = rs.field();
    for (index, g) in generators.iter().enumerate() {
        if g.homogeneous_degree() != Some(1) {
            return Err(Error::BadIdealGenerator { index });
        }
    }
    let mut bases = DegreeBases::new(rs);
    bases.ensure(max_degree);

    let base = FreeModule::new(vec![0]);
    let mut betti = BettiTable::default();
    betti.add(0, 0, 1);

    // Stage 0: graded parts of the right ideal itself.
    let mut kernels: Vec<Subspace> = Vec::with_capacity(max_degree + 1);
    kernels.push(Subspace::zero(1, field));
    for d in 1..=max_degree {
        let mut vectors: Vec<SparseVec> = Vec::new();
        for g in generators {
            for m in bases.level(d - 1).words.clone() {
                let image = rs.multiply(g, &NcPolynomial::monomial(m, field.one()));
                vectors.push(poly_coords(&image, d, &bases));
            }
        }
        kernels.push(Subspace::from_spanning(bases.dim(d as i64), field, vectors));
    }

    let mut maps: Vec<ModuleMap> = Vec::new();
    let mut current = base.clone();
    for stage in 1..=max_homological {
        let new_gens = extract_minimal_generators(rs, &current, &kernels, &bases, max_degree)?;
        if new_gens.is_empty() {
            break;
        }
        let shifts: Vec<i64> = new_gens.iter().map(|(d, _)| *d as i64).collect();
        let source = FreeModule::new(shifts);
        let mut entries = vec![vec![NcPolynomial::zero(); source.rank()]; current.rank()];
        for (col, (d, v)) in new_gens.iter().enumerate() {
            let column = unflatten(&current, *d as i64, v, &bases);
            for (i, p) in column.into_iter().enumerate() {
                entries[i][col] = p;
            }
        }
        for (d, _) in &new_gens {
            betti.add(stage, *d as i64, 1);
        }
        let map = ModuleMap::new(source.clone(), current.clone(), entries, field)?;
        maps.push(map);
        if stage == max_homological {
            break;
        }
        let last = maps.last().expect("just pushed");
        kernels = (0..=max_degree)
            .map(|d| last.instantiate(rs, d as i64, &bases).kernel_basis())
            .collect();
        current = source;
    }
    let complex = Complex::new(base, maps, field)?;
    Ok((complex, betti))
}

/// Degree-by-degree complement of (kernel at d-1) * B_1 inside (kernel at d):
/// the canonical coordinates of a minimal generating set.
fn extract_minimal_generators(
    rs: &RewriteSystem,
    module: &FreeModule,
    kernels: &[Subspace],
    bases: &DegreeBases,
    max_degree: usize,
) -> Result<Vec<(usize, SparseVec)>> {
    let field = rs.field();
    let mut out = Vec::new();
    for d in 0..=max_degree {
        let k_d = &kernels[d];
        if k_d.dim() == 0 {
            continue;
        }
        let span_prev = if d == 0 {
            Subspace::zero(k_d.ambient(), field)
        } else {
            let mut vectors: Vec<SparseVec> = Vec::new();
            for v in kernels[d - 1].basis() {
                for letter in 0..rs.n_generators() as u8 {
                    vectors.push(vector_times_letter(rs, module, (d - 1) as i64, v, letter, bases));
                }
            }
            Subspace::from_spanning(k_d.ambient(), field, vectors)
        };
        let fresh = span_prev.complement_in(k_d)?;
        for v in fresh.basis() {
            out.push((d, v.clone()));
        }
    }
    Ok(out)
}

/// Coordinates of a polynomial inside the degree-d monomial basis.
fn poly_coords(p: &NcPolynomial, d: usize, bases: &DegreeBases) -> SparseVec {
    let level = bases.level(d);
    let mut v: SparseVec = p
        .terms()
        .map(|(w, c)| {
            (
                *level.position.get(w).expect("normal word of the right degree"),
                c.clone(),
            )
        })
        .collect();
    v.sort_by_key(|e| e.0);
    v
}

/// Right-multiplies a degree-d module vector by one algebra generator,
/// landing in degree d+1 coordinates.
fn vector_times_letter(
    rs: &RewriteSystem,
    module: &FreeModule,
    d: i64,
    v: &SparseVec,
    letter: u8,
    bases: &DegreeBases,
) -> SparseVec {
    let (off, _) = module.offsets(d, bases);
    let (off_next, _) = module.offsets(d + 1, bases);
    let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
    for (flat, c) in v {
        let k = block_of(&off, *flat);
        let e = (d - module.shift(k)) as usize;
        let w = &bases.level(e).words[*flat - off[k]];
        let image = rs.normal_form(&NcPolynomial::monomial(
            w.concat(&Word::single(letter)),
            rs.field().one(),
        ));
        let tlevel = bases.level(e + 1);
        for (iw, ic) in image.terms() {
            let idx = off_next[k] + *tlevel.position.get(iw).expect("normal word");
            let add = c * ic;
            match acc.entry(idx) {
                std::collections::btree_map::Entry::Vacant(slot) => {
                    slot.insert(add);
                }
                std::collections::btree_map::Entry::Occupied(mut slot) => {
                    let sum = &*slot.get() + &add;
                    if sum.is_zero() {
                        slot.remove();
                    } else {
                        *slot.get_mut() = sum;
                    }
                }
            }
        }
    }
    acc.into_iter().collect()
}

fn block_of(offsets: &[usize], flat: usize) -> usize {
    offsets.partition_point(|&o| o <= flat) - 1
}

/// Splits a flat degree-d coordinate vector into one polynomial per module
/// generator.
fn unflatten(
    module: &FreeModule,
    d: i64,
    v: &SparseVec,
    bases: &DegreeBases,
) -> Vec<NcPolynomial> {
    let (off, _) = module.offsets(d, bases);
    let mut out = vec![NcPolynomial::zero(); module.rank()];
    for (flat, c) in v {
        let k = block_of(&off, *flat);
        let e = (d - module.shift(k)) as usize;
        let w = bases.level(e).words[*flat - off[k]].clone();
        out[k].add_assign_term(w, c.clone());
    }
    out
}
