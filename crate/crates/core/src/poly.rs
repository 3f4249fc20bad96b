//! Sparse elements of the free algebra: finite scalar combinations of words.
//!
//! Invariant: the term map never stores a zero coefficient, so structural
//! equality is semantic equality.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use crate::scalar::{Field, Scalar};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct NcPolynomial {
    terms: BTreeMap<Word, Scalar>,
}

impl NcPolynomial {
    pub fn zero() -> NcPolynomial {
        NcPolynomial::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn monomial(word: Word, coeff: Scalar) -> NcPolynomial {
        let mut p = NcPolynomial::zero();
        p.add_assign_term(word, coeff);
        p
    }

    /// The generator `g` as a degree-1 element.
    pub fn generator(g: u8, field: Field) -> NcPolynomial {
        NcPolynomial::monomial(Word::single(g), field.one())
    }

    pub fn constant(c: Scalar) -> NcPolynomial {
        NcPolynomial::monomial(Word::empty(), c)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, Scalar)>) -> NcPolynomial {
        let mut p = NcPolynomial::zero();
        for (w, c) in terms {
            p.add_assign_term(w, c);
        }
        p
    }

    /// Adds `coeff * word`, dropping the term if it cancels.
    pub fn add_assign_term(&mut self, word: Word, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn coeff(&self, word: &Word) -> Option<&Scalar> {
        self.terms.get(word)
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending deglex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    /// Terms in descending deglex order.
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter().rev()
    }

    /// Deglex-largest term.
    pub fn leading(&self) -> Option<(&Word, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> Option<usize> {
        self.leading().map(|(w, _)| w.degree())
    }

    /// All terms concentrated in degree `d`; the zero element vacuously
    /// qualifies for every degree.
    pub fn is_homogeneous_of(&self, d: usize) -> bool {
        self.terms.keys().all(|w| w.degree() == d)
    }

    /// `Some(d)` if nonzero with all terms in degree `d`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let d = self.degree()?;
        self.is_homogeneous_of(d).then_some(d)
    }

    pub fn scale(&self, c: &Scalar) -> NcPolynomial {
        if c.is_zero() {
            return NcPolynomial::zero();
        }
        NcPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(w, a)| (w.clone(), a * c))
                .collect(),
        }
    }

    /// Product in the free algebra: concatenate words pairwise.
    pub fn free_mul(&self, other: &NcPolynomial) -> NcPolynomial {
        let mut out = NcPolynomial::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_assign_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    /// `±(coeff)*word` terms, deglex-descending; `0` for the zero element.
    pub fn render(&self, names: &[impl AsRef<str>]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms_desc().enumerate() {
            let neg = -c;
            let (sign, mag) = if c.to_string().starts_with('-') {
                ("-", neg.to_string())
            } else {
                ("+", c.to_string())
            };
            if i == 0 {
                if sign == "-" {
                    out.push_str("-");
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            if w.is_empty() {
                out.push_str(&format!("({mag})"));
            } else {
                out.push_str(&format!("({mag})*{}", w.render(names)));
            }
        }
        out
    }
}

impl Add for &NcPolynomial {
    type Output = NcPolynomial;
    fn add(self, rhs: &NcPolynomial) -> NcPolynomial {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_assign_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &NcPolynomial {
    type Output = NcPolynomial;
    fn sub(self, rhs: &NcPolynomial) -> NcPolynomial {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_assign_term(w.clone(), -c);
        }
        out
    }
}

impl Neg for &NcPolynomial {
    type Output = NcPolynomial;
    fn neg(self) -> NcPolynomial {
        NcPolynomial {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NAMES: [&str; 4] = ["x1", "x2", "y1", "y2"];

    fn f() -> Field {
        Field::Rational
    }

    #[test]
    fn cancelling_terms_vanish() {
        let w = Word::from_letters(&[0, 1]);
        let mut p = NcPolynomial::monomial(w.clone(), f().one());
        p.add_assign_term(w, f().from_i64(-1));
        assert!(p.is_zero());
        assert_eq!(p.render(&NAMES), "0");
    }

    #[test]
    fn free_mul_concatenates() {
        let p = NcPolynomial::generator(1, f()); // x2
        let q = NcPolynomial::generator(0, f()); // x1
        let pq = p.free_mul(&q);
        assert_eq!(pq.coeff(&Word::from_letters(&[1, 0])), Some(&f().one()));
        assert_eq!(pq.support_len(), 1);
    }

    #[test]
    fn leading_term_is_deglex_max() {
        // x2*x1 + x1*x2: leading is x2*x1
        let p = NcPolynomial::from_terms([
            (Word::from_letters(&[0, 1]), f().one()),
            (Word::from_letters(&[1, 0]), f().one()),
        ]);
        assert_eq!(p.leading().unwrap().0, &Word::from_letters(&[1, 0]));
        assert_eq!(p.render(&NAMES), "(1)*x2.x1 + (1)*x1*x2");
    }

    #[test]
    fn homogeneity_detection() {
        let hom = NcPolynomial::from_terms([
            (Word::from_letters(&[0, 1]), f().one()),
            (Word::from_letters(&[2, 2]), f().from_i64(3)),
        ]);
        assert_eq!(hom.homogeneous_degree(), Some(2));
        let mixed = NcPolynomial::from_terms([
            (Word::from_letters(&[0]), f().one()),
            (Word::from_letters(&[2, 2]), f().one()),
        ]);
        assert_eq!(mixed.homogeneous_degree(), None);
        assert!(NcPolynomial::zero().is_homogeneous_of(5));
    }

    #[test]
    fn rendering_signs() {
        let p = NcPolynomial::from_terms([
            (Word::from_letters(&[1, 0]), f().from_i64(-1)),
            (Word::from_letters(&[0, 1]), f().ratio(3, 5).unwrap()),
            (Word::empty(), f().from_i64(2)),
        ]);
        assert_eq!(p.render(&NAMES), "-(1)*x2.x1 + (3/5)*x1*x2 + (2)");
    }
}
