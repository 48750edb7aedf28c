//! Derivative words over the alphabet {1, 2}.
//!
//! A word is written left to right and read as a composition of covariant
//! derivatives: `C_{i₁i₂…iₖ}` is `D_{i₁}(D_{i₂}(…D_{iₖ}(C)))`, so the last
//! letter is applied first.

use std::fmt;
use std::str::FromStr;

use crate::error::JetError;

/// Longest word representable by [`Word`].
pub const MAX_WORD_LEN: usize = 16;

/// A written word over {1, 2}. Letter `k` (counted from the left) is `2`
/// exactly when bit `k` of `bits` is set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    len: u8,
    bits: u16,
}

impl Word {
    pub const EMPTY: Word = Word { len: 0, bits: 0 };

    /// Builds a word from letters, each of which must be 1 or 2.
    pub fn from_letters(letters: &[u8]) -> Result<Word, JetError> {
        if letters.len() > MAX_WORD_LEN {
            return Err(JetError::WordTooLong(letters.len()));
        }
        let mut w = Word::EMPTY;
        for (k, &l) in letters.iter().enumerate() {
            match l {
                1 => {}
                2 => w.bits |= 1 << k,
                _ => return Err(JetError::BadLetter(l)),
            }
        }
        w.len = letters.len() as u8;
        Ok(w)
    }

    /// The word `1^a 2^b`.
    pub fn ascending(ones: usize, twos: usize) -> Word {
        let letters: Vec<u8> = std::iter::repeat_n(1, ones).chain(std::iter::repeat_n(2, twos)).collect();
        Word::from_letters(&letters).expect("ascending word within length bound")
    }

    /// The word `2^b 1^a`.
    pub fn descending(twos: usize, ones: usize) -> Word {
        let letters: Vec<u8> = std::iter::repeat_n(2, twos).chain(std::iter::repeat_n(1, ones)).collect();
        Word::from_letters(&letters).expect("descending word within length bound")
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    /// Letter at position `k`, counted from the left.
    pub fn letter(self, k: usize) -> u8 {
        assert!(k < self.len(), "letter index {k} out of range for word of length {}", self.len);
        if self.bits >> k & 1 == 1 {
            2
        } else {
            1
        }
    }

    pub fn letters(self) -> impl DoubleEndedIterator<Item = u8> + ExactSizeIterator {
        (0..self.len()).map(move |k| self.letter(k))
    }

    /// `i·w`: the derivative `D_i` applied after the word.
    pub fn prepend(self, i: u8) -> Word {
        let mut letters = vec![i];
        letters.extend(self.letters());
        Word::from_letters(&letters).expect("prepend within length bound")
    }

    /// Splits `w = i·u` into `(i, u)`.
    pub fn split_first(self) -> Option<(u8, Word)> {
        if self.is_empty() {
            return None;
        }
        let rest: Vec<u8> = self.letters().skip(1).collect();
        Some((self.letter(0), Word::from_letters(&rest).expect("suffix of a valid word")))
    }

    /// Concatenation `self·other`.
    pub fn concat(self, other: Word) -> Word {
        let letters: Vec<u8> = self.letters().chain(other.letters()).collect();
        Word::from_letters(&letters).expect("concatenation within length bound")
    }

    /// Swaps the letters 1 and 2.
    pub fn mirror(self) -> Word {
        let mask = if self.len == 16 { u16::MAX } else { (1u16 << self.len) - 1 };
        Word { len: self.len, bits: !self.bits & mask }
    }

    /// Number of letters equal to 1 and to 2.
    pub fn counts(self) -> (usize, usize) {
        let twos = self.bits.count_ones() as usize;
        (self.len() - twos, twos)
    }

    /// True for words of the form `1^a 2^b`.
    pub fn is_ascending(self) -> bool {
        let (ones, twos) = self.counts();
        self == Word::ascending(ones, twos)
    }

    /// True for words of the form `2^b 1^a`.
    pub fn is_descending(self) -> bool {
        let (ones, twos) = self.counts();
        self == Word::descending(twos, ones)
    }

    /// All words of exactly the given length, in lexicographic order.
    pub fn all_of_len(n: usize) -> Vec<Word> {
        (0u32..1 << n)
            .map(|m| {
                let letters: Vec<u8> = (0..n).map(|k| if m >> (n - 1 - k) & 1 == 1 { 2 } else { 1 }).collect();
                Word::from_letters(&letters).expect("short word")
            })
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.letters() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = JetError;

    fn from_str(s: &str) -> Result<Word, JetError> {
        let letters: Vec<u8> = s
            .chars()
            .map(|c| match c {
                '1' => Ok(1),
                '2' => Ok(2),
                _ => Err(JetError::BadLetter(c as u8)),
            })
            .collect::<Result<_, _>>()?;
        Word::from_letters(&letters)
    }
}
