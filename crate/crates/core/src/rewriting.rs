//! Rewriting of free-algebra elements modulo oriented quadratic relations:
//! normal forms, critical overlaps, the confluence certificate, and bases of
//! normal monomials per degree.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::poly::NcPolynomial;
use crate::presentation::Presentation;
use crate::scalar::Field;
use crate::word::Word;

/// `lead -> tail`: replace the lead word by the tail polynomial. All tail
/// terms are deglex-smaller than the lead, so rewriting strictly decreases
/// the deglex-largest reducible term and terminates.
#[derive(Debug, Clone)]
pub struct RewriteRule {
    pub lead: Word,
    pub tail: NcPolynomial,
}

#[derive(Debug, Clone)]
pub struct RewriteSystem {
    rules: Vec<RewriteRule>,
    names: Vec<String>,
    field: Field,
}

/// Orients each relation by its deglex-leading term. Rejects zero or
/// inhomogeneous relations and lead words that divide one another.
pub fn make_rewrite_system(pres: &Presentation) -> Result<RewriteSystem> {
    let mut rules = Vec::with_capacity(pres.relations.len());
    for (index, rel) in pres.relations.iter().enumerate() {
        if rel.is_zero() {
            return Err(Error::BadRelation {
                index,
                reason: "zero".into(),
            });
        }
        if rel.homogeneous_degree().is_none() {
            return Err(Error::BadRelation {
                index,
                reason: "not homogeneous".into(),
            });
        }
        let (lead, coeff) = {
            let (w, c) = rel.leading().expect("nonzero");
            (w.clone(), c.clone())
        };
        // tail = lead - rel/coeff, i.e. the reduction target
        let mut tail = rel.scale(&coeff.inv());
        tail.add_assign_term(lead.clone(), pres.field.from_i64(-1));
        let tail = -&tail;
        if lead.is_empty() {
            return Err(Error::BadRelation {
                index,
                reason: "constant".into(),
            });
        }
        rules.push(RewriteRule { lead, tail });
    }
    for a in 0..rules.len() {
        for b in 0..rules.len() {
            if a != b && rules[b].lead.find_factor(&rules[a].lead).is_some() {
                return Err(Error::DividingLeads { a, b });
            }
        }
    }
    Ok(RewriteSystem {
        rules,
        names: pres.names.clone(),
        field: pres.field,
    })
}

/// One cubic (or longer) ambiguity: the lead of `left_rule` overlaps the lead
/// of `right_rule` in `overlap_len` letters, superposing to `word`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Overlap {
    pub left_rule: usize,
    pub right_rule: usize,
    pub word: Word,
    pub overlap_len: usize,
}

#[derive(Debug)]
pub struct GsBasisReport {
    pub overlaps: Vec<Overlap>,
    /// Overlaps whose S-element does not reduce to zero, with the residue.
    pub failures: Vec<(Overlap, NcPolynomial)>,
}

impl GsBasisReport {
    pub fn resolvable(&self) -> bool {
        self.failures.is_empty()
    }
}

impl RewriteSystem {
    pub fn n_generators(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn order_description(&self) -> String {
        format!("deglex({})", self.names.join(" < "))
    }

    /// (position, rule) of the leftmost reducible factor of `w`, if any.
    fn leftmost_reduction(&self, w: &Word) -> Option<(usize, usize)> {
        for pos in 0..w.degree() {
            for (ridx, rule) in self.rules.iter().enumerate() {
                if w.matches_at(&rule.lead, pos) {
                    return Some((pos, ridx));
                }
            }
        }
        None
    }

    /// Is `w` a normal monomial (no rule lead occurs as a factor)?
    pub fn is_normal(&self, w: &Word) -> bool {
        self.leftmost_reduction(w).is_none()
    }

    /// Rewrites the factor of `w` at `pos` by `rule`, returning
    /// prefix * tail * suffix scaled by `coeff`.
    fn rewrite_at(&self, w: &Word, pos: usize, rule: &RewriteRule) -> NcPolynomial {
        let prefix = w.prefix(pos);
        let suffix = w.suffix_from(pos + rule.lead.degree());
        let mut out = NcPolynomial::zero();
        for (t, c) in rule.tail.terms() {
            out.add_assign_term(prefix.concat(t).concat(&suffix), c.clone());
        }
        out
    }

    /// Fully reduces `p`. Strategy: pick the deglex-largest reducible word,
    /// rewrite its leftmost reducible factor, repeat. Terminates because each
    /// step replaces a word by strictly smaller ones in a well-order.
    pub fn normal_form(&self, p: &NcPolynomial) -> NcPolynomial {
        let mut work = p.clone();
        loop {
            let mut found: Option<(Word, usize, usize)> = None;
            for (w, _) in work.terms_desc() {
                if let Some((pos, ridx)) = self.leftmost_reduction(w) {
                    found = Some((w.clone(), pos, ridx));
                    break;
                }
            }
            let Some((w, pos, ridx)) = found else {
                return work;
            };
            let c = work.coeff(&w).expect("reducible term present").clone();
            work.add_assign_term(w.clone(), -&c);
            let replaced = self.rewrite_at(&w, pos, &self.rules[ridx]);
            for (t, tc) in replaced.terms() {
                work.add_assign_term(t.clone(), &c * tc);
            }
        }
    }

    /// Product in the quotient: free product, then normal form.
    pub fn multiply(&self, p: &NcPolynomial, q: &NcPolynomial) -> NcPolynomial {
        self.normal_form(&p.free_mul(q))
    }

    /// All superpositions lead_i = u v, lead_j = v w with a proper overlap v,
    /// of total degree at most `degree_bound`, sorted by (word, i, j).
    pub fn critical_overlaps(&self, degree_bound: usize) -> Vec<Overlap> {
        assert!(degree_bound >= 3, "cubic overlaps need degree bound >= 3");
        let mut out = Vec::new();
        for (i, ri) in self.rules.iter().enumerate() {
            for (j, rj) in self.rules.iter().enumerate() {
                let li = &ri.lead;
                let lj = &rj.lead;
                for k in 1..li.degree().min(lj.degree()) {
                    let mut matches = true;
                    for t in 0..k {
                        if li.letters()[li.degree() - k + t] != lj.letters()[t] {
                            matches = false;
                            break;
                        }
                    }
                    if !matches {
                        continue;
                    }
                    let word = li.concat(&lj.suffix_from(k));
                    if word.degree() <= degree_bound {
                        out.push(Overlap {
                            left_rule: i,
                            right_rule: j,
                            word,
                            overlap_len: k,
                        });
                    }
                }
            }
        }
        out.sort_by(|a, b| {
            a.word
                .cmp(&b.word)
                .then(a.left_rule.cmp(&b.left_rule))
                .then(a.right_rule.cmp(&b.right_rule))
        });
        out
    }

    /// Confluence certificate: every critical overlap's S-element (difference
    /// of its two one-step rewrites) must reduce to zero.
    pub fn gs_basis_check(&self, degree_bound: usize) -> GsBasisReport {
        let overlaps = self.critical_overlaps(degree_bound);
        let mut failures = Vec::new();
        for ov in &overlaps {
            let left = self.rewrite_at(&ov.word, 0, &self.rules[ov.left_rule]);
            let right_pos = self.rules[ov.left_rule].lead.degree() - ov.overlap_len;
            let right = self.rewrite_at(&ov.word, right_pos, &self.rules[ov.right_rule]);
            let residue = self.normal_form(&(&left - &right));
            if !residue.is_zero() {
                failures.push((ov.clone(), residue));
            }
        }
        GsBasisReport { overlaps, failures }
    }

    /// Errors out unless every overlap resolves. Homological routines call
    /// this before trusting normal forms as coordinates.
    pub fn require_certified(&self) -> Result<()> {
        let max_lead = self
            .rules
            .iter()
            .map(|r| r.lead.degree())
            .max()
            .unwrap_or(2);
        let report = self.gs_basis_check(2 * max_lead - 1);
        if report.resolvable() {
            return Ok(());
        }
        let (ov, residue) = &report.failures[0];
        Err(Error::Uncertified {
            details: format!(
                "overlap {} of rules {} and {} leaves residue {}",
                ov.word.render(&self.names),
                ov.left_rule,
                ov.right_rule,
                residue.render(&self.names)
            ),
        })
    }

    /// Normal monomials of the given degree, ascending deglex. Prunes any
    /// branch whose current suffix already ends in a rule lead.
    pub fn normal_monomials(&self, degree: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut current: Vec<u8> = Vec::with_capacity(degree);
        self.enumerate_normal(&mut current, degree, &mut out);
        out
    }

    fn enumerate_normal(&self, current: &mut Vec<u8>, degree: usize, out: &mut Vec<Word>) {
        if current.len() == degree {
            out.push(Word::from_letters(current));
            return;
        }
        for g in 0..self.names.len() as u8 {
            current.push(g);
            if !self.ends_in_lead(current) {
                self.enumerate_normal(current, degree, out);
            }
            current.pop();
        }
    }

    fn ends_in_lead(&self, letters: &[u8]) -> bool {
        self.rules.iter().any(|r| {
            let ld = r.lead.degree();
            ld <= letters.len() && letters[letters.len() - ld..] == *r.lead.letters()
        })
    }

    /// Dimension of each graded piece of the quotient, degrees 0..=max_degree.
    pub fn hilbert_coefficients(&self, max_degree: usize) -> Vec<usize> {
        (0..=max_degree)
            .map(|d| self.normal_monomials(d).len())
            .collect()
    }
}

/// Cache of normal-monomial bases by degree, with positions for coordinate
/// lookups. Grown on demand via `ensure`.
pub struct DegreeBases<'a> {
    rs: &'a RewriteSystem,
    levels: Vec<DegreeLevel>,
}

pub struct DegreeLevel {
    pub words: Vec<Word>,
    pub position: HashMap<Word, usize>,
}

impl<'a> DegreeBases<'a> {
    pub fn new(rs: &'a RewriteSystem) -> DegreeBases<'a> {
        DegreeBases {
            rs,
            levels: Vec::new(),
        }
    }

    pub fn ensure(&mut self, degree: usize) {
        while self.levels.len() <= degree {
            let words = self.rs.normal_monomials(self.levels.len());
            let position = words
                .iter()
                .enumerate()
                .map(|(i, w)| (w.clone(), i))
                .collect();
            self.levels.push(DegreeLevel { words, position });
        }
    }

    /// Panics if `ensure(degree)` has not run.
    pub fn level(&self, degree: usize) -> &DegreeLevel {
        &self.levels[degree]
    }

    pub fn dim(&self, degree: i64) -> usize {
        if degree < 0 {
            0
        } else {
            self.levels[degree as usize].words.len()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::{build_double_extension, family_k, X1, X2, Y1, Y2};
    use crate::scalar::Scalar;
    use std::collections::BTreeSet;

    fn rat(n: i64) -> Scalar {
        Field::Rational.from_i64(n)
    }

    fn system_k(alpha: i64) -> RewriteSystem {
        let data = family_k(&rat(alpha)).unwrap();
        make_rewrite_system(&build_double_extension(&data)).unwrap()
    }

    #[test]
    fn six_rules_with_expected_leads() {
        let rs = system_k(1);
        let leads: Vec<&[u8]> = rs.rules().iter().map(|r| r.lead.letters()).collect();
        assert_eq!(
            leads,
            vec![
                &[X2, X1][..],
                &[Y2, Y1],
                &[Y1, X1],
                &[Y1, X2],
                &[Y2, X1],
                &[Y2, X2],
            ]
        );
    }

    #[test]
    fn normal_form_straightens_a_crossed_word() {
        // y2*y1*x2 -> alpha * x2*y1*y2 for family parameter alpha
        let rs = system_k(7);
        let p = NcPolynomial::monomial(Word::from_letters(&[Y2, Y1, X2]), rat(1));
        let nf = rs.normal_form(&p);
        assert_eq!(
            nf,
            NcPolynomial::monomial(Word::from_letters(&[X2, Y1, Y2]), rat(7))
        );
    }

    #[test]
    fn normal_form_is_idempotent_and_linear_here() {
        let rs = system_k(2);
        let p = NcPolynomial::from_terms([
            (Word::from_letters(&[Y2, X2, X1]), rat(3)),
            (Word::from_letters(&[Y1, X2]), rat(-1)),
            (Word::empty(), rat(5)),
        ]);
        let q = NcPolynomial::monomial(Word::from_letters(&[Y2, Y1]), rat(4));
        let nf_p = rs.normal_form(&p);
        assert_eq!(rs.normal_form(&nf_p), nf_p);
        let sum_nf = rs.normal_form(&(&p + &q));
        assert_eq!(sum_nf, &nf_p + &rs.normal_form(&q));
    }

    #[test]
    fn exactly_four_cubic_overlaps() {
        let rs = system_k(1);
        let overlaps = rs.critical_overlaps(6);
        let words: Vec<Word> = overlaps.iter().map(|o| o.word.clone()).collect();
        let expected: Vec<Word> = [
            &[Y1, X2, X1][..],
            &[Y2, X2, X1],
            &[Y2, Y1, X1],
            &[Y2, Y1, X2],
        ]
        .iter()
        .map(|l| Word::from_letters(l))
        .collect();
        assert_eq!(words, expected);
        assert!(overlaps.iter().all(|o| o.overlap_len == 1));
    }

    #[test]
    fn family_systems_certify_for_various_parameters() {
        for alpha in [1, -1, 2, 5] {
            let rs = system_k(alpha);
            let report = rs.gs_basis_check(6);
            assert!(report.resolvable(), "alpha = {alpha}");
            assert_eq!(report.overlaps.len(), 4);
            assert!(rs.require_certified().is_ok());
        }
        let half = Field::Rational.ratio(1, 2).unwrap();
        let data = family_k(&half).unwrap();
        let rs = make_rewrite_system(&build_double_extension(&data)).unwrap();
        assert!(rs.gs_basis_check(6).resolvable());
    }

    #[test]
    fn broken_system_reports_offending_overlap() {
        // x2*x1 -> x1*x2 + x1^2, y1*x2 -> x2*y1, y1*x1 -> 2 x1*y1:
        // the single overlap y1*x2*x1 leaves a residue.
        let f = Field::Rational;
        let relations = vec![
            NcPolynomial::from_terms([
                (Word::from_letters(&[X2, X1]), rat(1)),
                (Word::from_letters(&[X1, X2]), rat(-1)),
                (Word::from_letters(&[X1, X1]), rat(-1)),
            ]),
            NcPolynomial::from_terms([
                (Word::from_letters(&[Y1, X2]), rat(1)),
                (Word::from_letters(&[X2, Y1]), rat(-1)),
            ]),
            NcPolynomial::from_terms([
                (Word::from_letters(&[Y1, X1]), rat(1)),
                (Word::from_letters(&[X1, Y1]), rat(-2)),
            ]),
        ];
        let pres = Presentation {
            names: vec!["x1".into(), "x2".into(), "y1".into()],
            relations,
            field: f,
        };
        let rs = make_rewrite_system(&pres).unwrap();
        let report = rs.gs_basis_check(4);
        assert_eq!(report.overlaps.len(), 1);
        assert_eq!(report.failures.len(), 1);
        let (ov, residue) = &report.failures[0];
        assert_eq!(ov.word, Word::from_letters(&[Y1, X2, X1]));
        assert!(!residue.is_zero());
        assert!(rs.require_certified().is_err());
    }

    #[test]
    fn duplicate_leads_are_rejected() {
        let f = Field::Rational;
        let rel = NcPolynomial::from_terms([
            (Word::from_letters(&[X2, X1]), rat(1)),
            (Word::from_letters(&[X1, X2]), rat(1)),
        ]);
        let pres = Presentation {
            names: vec!["x1".into(), "x2".into()],
            relations: vec![rel.clone(), rel.scale(&rat(2))],
            field: f,
        };
        assert!(matches!(
            make_rewrite_system(&pres),
            Err(Error::DividingLeads { .. })
        ));
    }

    #[test]
    fn degenerate_relations_are_rejected() {
        let f = Field::Rational;
        let mixed = NcPolynomial::from_terms([
            (Word::from_letters(&[X2, X1]), rat(1)),
            (Word::single(X1), rat(1)),
        ]);
        let pres = Presentation {
            names: vec!["x1".into(), "x2".into()],
            relations: vec![mixed],
            field: f,
        };
        assert!(matches!(
            make_rewrite_system(&pres),
            Err(Error::BadRelation { .. })
        ));
        let pres0 = Presentation {
            names: vec!["x1".into(), "x2".into()],
            relations: vec![NcPolynomial::zero()],
            field: f,
        };
        assert!(make_rewrite_system(&pres0).is_err());
    }

    #[test]
    fn normal_monomials_degree_2_and_counts() {
        let rs = system_k(1);
        let deg2 = rs.normal_monomials(2);
        assert_eq!(deg2.len(), 10);
        let as_sets: BTreeSet<&[u8]> = deg2.iter().map(|w| w.letters()).collect();
        // sorted pairs i <= j over four letters
        let mut expected = BTreeSet::new();
        let store: Vec<Vec<u8>> = (0u8..4)
            .flat_map(|i| (i..4).map(move |j| vec![i, j]))
            .collect();
        for v in &store {
            expected.insert(&v[..]);
        }
        assert_eq!(as_sets, expected);
        assert!(deg2.iter().all(|w| rs.is_normal(w)));
    }

    #[test]
    fn hilbert_matches_four_choose_three_pattern() {
        let rs = system_k(3);
        let coeffs = rs.hilbert_coefficients(8);
        let binom: Vec<usize> = (0..=8usize)
            .map(|d| (d + 1) * (d + 2) * (d + 3) / 6)
            .collect();
        assert_eq!(coeffs, binom);
    }

    #[test]
    fn multiply_reduces_products() {
        // x2 * x1 = -x1*x2 in the quotient
        let rs = system_k(1);
        let x2 = NcPolynomial::generator(X2, Field::Rational);
        let x1 = NcPolynomial::generator(X1, Field::Rational);
        let prod = rs.multiply(&x2, &x1);
        assert_eq!(
            prod,
            NcPolynomial::monomial(Word::from_letters(&[X1, X2]), rat(-1))
        );
    }

    /// Oracle: reduce by applying rules at every admissible position in every
    /// order, memoized. Any rewriting strategy must land on the same answer
    /// when the system is confluent.
    fn all_order_normal_forms(
        rs: &RewriteSystem,
        p: &NcPolynomial,
        memo: &mut std::collections::HashMap<Word, NcPolynomial>,
    ) -> NcPolynomial {
        let mut out = NcPolynomial::zero();
        for (w, c) in p.terms() {
            let nf = word_all_order_nf(rs, w, memo);
            for (t, tc) in nf.terms() {
                out.add_assign_term(t.clone(), c * tc);
            }
        }
        out
    }

    fn word_all_order_nf(
        rs: &RewriteSystem,
        w: &Word,
        memo: &mut std::collections::HashMap<Word, NcPolynomial>,
    ) -> NcPolynomial {
        if let Some(hit) = memo.get(w) {
            return hit.clone();
        }
        let mut results: BTreeSet<NcPolynomial> = BTreeSet::new();
        for pos in 0..w.degree() {
            for rule in rs.rules() {
                if w.matches_at(&rule.lead, pos) {
                    let one_step = rs.rewrite_at(w, pos, rule);
                    results.insert(all_order_normal_forms(rs, &one_step, memo));
                }
            }
        }
        let nf = match results.len() {
            0 => NcPolynomial::monomial(w.clone(), rs.field().one()),
            1 => results.into_iter().next().unwrap(),
            _ => panic!(
                "word {} has {} distinct normal forms",
                w.render(rs.names()),
                results.len()
            ),
        };
        memo.insert(w.clone(), nf.clone());
        nf
    }

    #[test]
    fn every_degree_4_word_reduces_uniquely() {
        let data = family_k(&Field::Rational.ratio(3, 5).unwrap()).unwrap();
        let rs = make_rewrite_system(&build_double_extension(&data)).unwrap();
        let mut memo = std::collections::HashMap::new();
        let mut seen_crossed = 0;
        for a in 0..4u8 {
            for b in 0..4u8 {
                for c in 0..4u8 {
                    for d in 0..4u8 {
                        let w = Word::from_letters(&[a, b, c, d]);
                        let p = NcPolynomial::monomial(w.clone(), rat(1));
                        let oracle = all_order_normal_forms(&rs, &p, &mut memo);
                        assert_eq!(rs.normal_form(&p), oracle, "word {:?}", w.letters());
                        if !rs.is_normal(&w) {
                            seen_crossed += 1;
                        }
                    }
                }
            }
        }
        assert!(seen_crossed > 100, "oracle exercised too few reductions");
    }
}
