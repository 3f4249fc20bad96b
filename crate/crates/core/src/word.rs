//! Words in a free monoid on an ordered alphabet, compared degree first and
//! lexicographically within a degree.

use std::cmp::Ordering;

/// A monomial in the free algebra: a sequence of generator indices.
/// The empty word is the unit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<u8>,
}

impl Word {
    pub fn empty() -> Word {
        Word { letters: Vec::new() }
    }

    pub fn from_letters(letters: &[u8]) -> Word {
        Word {
            letters: letters.to_vec(),
        }
    }

    pub fn single(letter: u8) -> Word {
        Word {
            letters: vec![letter],
        }
    }

    pub fn degree(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() + other.letters.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word::from_letters(&self.letters[..n])
    }

    pub fn suffix_from(&self, n: usize) -> Word {
        Word::from_letters(&self.letters[n..])
    }

    /// Does `factor` occur starting at position `pos`?
    pub fn matches_at(&self, factor: &Word, pos: usize) -> bool {
        pos + factor.degree() <= self.degree()
            && self.letters[pos..pos + factor.degree()] == factor.letters[..]
    }

    /// Leftmost occurrence of `factor`, if any.
    pub fn find_factor(&self, factor: &Word) -> Option<usize> {
        if factor.degree() > self.degree() {
            return None;
        }
        (0..=self.degree() - factor.degree()).find(|&pos| self.matches_at(factor, pos))
    }

    fn is_sorted(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] <= w[1])
    }

    /// Human form. Words with nondecreasing letters collapse to powers
    /// (`x1^2*y2`); anything else is spelled letter by letter with dots
    /// (`x2.x1`). The empty word renders as `1`.
    pub fn render(&self, names: &[impl AsRef<str>]) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        if self.is_sorted() {
            let mut parts: Vec<String> = Vec::new();
            let mut i = 0;
            while i < self.letters.len() {
                let g = self.letters[i];
                let mut run = 0;
                while i < self.letters.len() && self.letters[i] == g {
                    run += 1;
                    i += 1;
                }
                let name = names[g as usize].as_ref();
                if run == 1 {
                    parts.push(name.to_string());
                } else {
                    parts.push(format!("{name}^{run}"));
                }
            }
            parts.join("*")
        } else {
            self.letters
                .iter()
                .map(|&g| names[g as usize].as_ref())
                .collect::<Vec<_>>()
                .join(".")
        }
    }
}

impl From<Vec<u8>> for Word {
    fn from(letters: Vec<u8>) -> Word {
        Word { letters }
    }
}

/// Degree-lexicographic order: compare total degree first, ties broken
/// lexicographically by generator index. A well-order on words, so rewriting
/// along it terminates.
impl Ord for Word {
    fn cmp(&self, other: &Word) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The monomial order used everywhere in this crate.
pub fn deglex_compare(a: &Word, b: &Word) -> Ordering {
    a.cmp(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    const NAMES: [&str; 4] = ["x1", "x2", "y1", "y2"];

    #[test]
    fn degree_dominates_lex() {
        // x1*x2*y1 vs y2*y2: degree 3 beats degree 2
        let a = Word::from_letters(&[0, 1, 2]);
        let b = Word::from_letters(&[3, 3]);
        assert_eq!(deglex_compare(&a, &b), Ordering::Greater);
    }

    #[test]
    fn lex_breaks_ties() {
        let a = Word::from_letters(&[0, 3]); // x1*y2
        let b = Word::from_letters(&[1, 2]); // x2*y1
        assert_eq!(deglex_compare(&a, &b), Ordering::Less);
        assert_eq!(deglex_compare(&a, &a), Ordering::Equal);
    }

    #[test]
    fn unit_is_minimal() {
        let e = Word::empty();
        let x1 = Word::single(0);
        assert_eq!(deglex_compare(&e, &x1), Ordering::Less);
        assert_eq!(e.render(&NAMES), "1");
    }

    #[test]
    fn rendering() {
        assert_eq!(Word::from_letters(&[0, 0, 3]).render(&NAMES), "x1^2*y2");
        assert_eq!(Word::from_letters(&[1, 0]).render(&NAMES), "x2.x1");
        assert_eq!(Word::from_letters(&[0, 1, 2, 3]).render(&NAMES), "x1*x2*y1*y2");
    }

    #[test]
    fn factor_search_is_leftmost() {
        let w = Word::from_letters(&[2, 1, 0, 1, 0]);
        let f = Word::from_letters(&[1, 0]);
        assert_eq!(w.find_factor(&f), Some(1));
        assert_eq!(w.find_factor(&Word::from_letters(&[3])), None);
    }
}
