//! Words over a finite alphabet `[0, n)`.
//!
//! A [`Word`] is an immutable sequence of letters together with its alphabet
//! size. Slicing copies; words in this crate are short. A word is
//! `k`-periodic when `x[i] = x[i + k]` wherever both indices are valid, or
//! equivalently when `k >= |x|` or `x[..|x|-k] == x[k..]`.
//!
//! Besides the basic queries this module houses the periodicity-lemma oracle
//! ([`periodicity_lemma_check`], the Fine and Wilf property) used by the test
//! suites: it evaluates the implication "if `|x| >= a + b - gcd(a, b)` and
//! `x` is both `a`- and `b`-periodic then `x` is `gcd(a, b)`-periodic" on a
//! concrete instance and must always come back `true`.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gcd;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<u8>,
    alphabet: usize,
}

impl Word {
    pub fn new(letters: Vec<u8>, alphabet: usize) -> Result<Self> {
        if alphabet == 0 || alphabet > 256 {
            return Err(Error::InvalidParams(format!(
                "alphabet size {alphabet} out of range [1, 256]"
            )));
        }
        for &l in &letters {
            if l as usize >= alphabet {
                return Err(Error::LetterOutOfRange {
                    letter: l as usize,
                    alphabet,
                });
            }
        }
        Ok(Word { letters, alphabet })
    }

    pub fn constant(letter: u8, len: usize, alphabet: usize) -> Result<Self> {
        Word::new(vec![letter; len], alphabet)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn get(&self, i: usize) -> u8 {
        self.letters[i]
    }

    /// `x[from..to]`, copying. Panics when `from > to` or `to > |x|`,
    /// mirroring slice indexing.
    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word {
            letters: self.letters[from..to].to_vec(),
            alphabet: self.alphabet,
        }
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet,
                right: other.alphabet,
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Word {
            letters,
            alphabet: self.alphabet,
        })
    }

    /// `x[1..] + [letter]`; the one-step shift used throughout the
    /// dichotomy and shift-lemma checks.
    pub fn shift_append(&self, letter: u8) -> Result<Word> {
        if self.is_empty() {
            return Err(Error::EmptyWord);
        }
        if letter as usize >= self.alphabet {
            return Err(Error::LetterOutOfRange {
                letter: letter as usize,
                alphabet: self.alphabet,
            });
        }
        let mut letters = self.letters[1..].to_vec();
        letters.push(letter);
        Ok(Word {
            letters,
            alphabet: self.alphabet,
        })
    }

    /// Lexicographic rank among words of the same length, leftmost letter
    /// most significant. Panics if the rank overflows `usize`; ranks are
    /// only taken of table-sized words.
    pub fn index(&self) -> usize {
        index_of_letters(&self.letters, self.alphabet)
    }

    pub fn from_index(index: usize, len: usize, alphabet: usize) -> Word {
        Word {
            letters: letters_from_index(index, len, alphabet),
            alphabet,
        }
    }
}

impl std::fmt::Debug for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.letters)
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.letters)
    }
}

/// Words serialize as plain JSON arrays of integers.
impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.letters.len()))?;
        for &l in &self.letters {
            seq.serialize_element(&l)?;
        }
        seq.end()
    }
}

pub(crate) fn index_of_letters(letters: &[u8], alphabet: usize) -> usize {
    let mut idx: usize = 0;
    for &l in letters {
        idx = idx
            .checked_mul(alphabet)
            .and_then(|v| v.checked_add(l as usize))
            .expect("word rank overflows usize");
    }
    idx
}

pub(crate) fn letters_from_index(mut index: usize, len: usize, alphabet: usize) -> Vec<u8> {
    let mut letters = vec![0u8; len];
    for slot in letters.iter_mut().rev() {
        *slot = (index % alphabet) as u8;
        index /= alphabet;
    }
    debug_assert_eq!(index, 0);
    letters
}

pub(crate) fn letters_periodic(xs: &[u8], k: usize) -> bool {
    debug_assert!(k >= 1);
    k >= xs.len() || xs[..xs.len() - k] == xs[k..]
}

pub(crate) fn letters_shortest_period(xs: &[u8]) -> usize {
    debug_assert!(!xs.is_empty());
    (1..=xs.len())
        .find(|&k| letters_periodic(xs, k))
        .expect("|x| is always a period")
}

/// Is `x` periodic with period `k`? Rejects `k = 0`.
pub fn is_periodic(x: &Word, k: usize) -> Result<bool> {
    if k == 0 {
        return Err(Error::ZeroPeriod);
    }
    Ok(letters_periodic(x.letters(), k))
}

/// The smallest `k >= 1` such that `x` is `k`-periodic. Computed by a linear
/// scan over candidate periods; words here are at most a few hundred letters.
pub fn shortest_period(x: &Word) -> Result<usize> {
    if x.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(letters_shortest_period(x.letters()))
}

/// Truth of the periodicity-lemma implication on the instance `(x, a, b)`.
///
/// Returns `true` vacuously when the length bound or one of the periodicity
/// premises fails; a `false` would disprove the Fine and Wilf property.
pub fn periodicity_lemma_check(x: &Word, a: usize, b: usize) -> Result<bool> {
    if a == 0 || b == 0 {
        return Err(Error::ZeroPeriod);
    }
    let g = gcd(a, b);
    let xs = x.letters();
    if xs.len() >= a + b - g && letters_periodic(xs, a) && letters_periodic(xs, b) {
        Ok(letters_periodic(xs, g))
    } else {
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[u8], n: usize) -> Word {
        Word::new(letters.to_vec(), n).unwrap()
    }

    #[test]
    fn periodicity_basics() {
        assert!(is_periodic(&w(&[0, 0, 0, 0], 2), 1).unwrap());
        assert!(is_periodic(&w(&[0, 1, 0, 1, 0], 2), 2).unwrap());
        assert!(!is_periodic(&w(&[0, 1, 0, 1, 0], 2), 3).unwrap());
        assert!(matches!(
            is_periodic(&w(&[0], 2), 0),
            Err(Error::ZeroPeriod)
        ));
    }

    #[test]
    fn periodic_with_own_length_and_constant() {
        let x = w(&[0, 1, 2, 1], 3);
        assert!(is_periodic(&x, x.len()).unwrap());
        assert!(is_periodic(&x, x.len() + 5).unwrap());
        assert!(!is_periodic(&x, 1).unwrap());
        assert!(is_periodic(&w(&[2, 2, 2], 3), 1).unwrap());
    }

    #[test]
    fn shortest_periods() {
        assert_eq!(shortest_period(&w(&[0, 0, 0], 2)).unwrap(), 1);
        assert_eq!(shortest_period(&w(&[0, 1, 0, 1], 2)).unwrap(), 2);
        assert_eq!(shortest_period(&w(&[0, 1, 2], 3)).unwrap(), 3);
        assert!(matches!(
            shortest_period(&Word::new(vec![], 2).unwrap()),
            Err(Error::EmptyWord)
        ));
    }

    #[test]
    fn periodicity_lemma_examples() {
        assert!(periodicity_lemma_check(&w(&[0, 1, 0, 1, 0, 1], 2), 2, 4).unwrap());
        assert!(periodicity_lemma_check(&w(&[0, 0, 0], 2), 1, 2).unwrap());
        // short word: vacuous
        assert!(periodicity_lemma_check(&w(&[0, 1], 2), 5, 7).unwrap());
    }

    #[test]
    fn slicing_and_concat() {
        let x = w(&[0, 1, 2, 0, 1], 3);
        assert_eq!(x.slice(1, 4).letters(), &[1, 2, 0]);
        assert_eq!(x.slice(2, 2).len(), 0);
        let y = x.slice(0, 2).concat(&x.slice(2, 5)).unwrap();
        assert_eq!(y, x);
        assert_eq!(x.shift_append(2).unwrap().letters(), &[1, 2, 0, 1, 2]);
    }

    #[test]
    fn rank_round_trip() {
        let x = w(&[1, 0, 2], 3);
        assert_eq!(x.index(), 1 * 9 + 0 * 3 + 2);
        assert_eq!(Word::from_index(x.index(), 3, 3), x);
    }

    #[test]
    fn serializes_as_integer_array() {
        let x = w(&[0, 1, 1], 2);
        assert_eq!(serde_json::to_string(&x).unwrap(), "[0,1,1]");
    }
}
