//! Finite words over the alphabet `{1, ..., N}` and the pruned tree walk used
//! by every census.
//!
//! Digits are stored 0-based internally; all parsing, formatting, and
//! constructor arguments use the 1-based digits of the alphabet. That
//! conversion happens in exactly two places: [`Word::from_digits`] and
//! [`Word::parse`] / [`std::fmt::Display`].

use crate::{Error, Result};

/// A finite word. The empty word is allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    digits: Vec<u8>, // 0-based
    alphabet: u8,
}

impl Word {
    /// The empty word over an alphabet of size `alphabet >= 2`.
    pub fn empty(alphabet: u8) -> Result<Word> {
        if alphabet < 2 {
            return Err(Error::OutOfRange(format!(
                "alphabet size must be at least 2, got {alphabet}"
            )));
        }
        Ok(Word {
            digits: Vec::new(),
            alphabet,
        })
    }

    /// Build from 1-based digits.
    pub fn from_digits(alphabet: u8, digits: &[u8]) -> Result<Word> {
        let mut w = Word::empty(alphabet)?;
        for &d in digits {
            w.push(d)?;
        }
        Ok(w)
    }

    /// Parse a digit string such as `"1221"`. Only single-character digits
    /// `1..=9` are supported, which covers every system in this crate.
    pub fn parse(alphabet: u8, s: &str) -> Result<Word> {
        let mut w = Word::empty(alphabet)?;
        for c in s.chars() {
            let d = c
                .to_digit(10)
                .ok_or_else(|| Error::OutOfRange(format!("bad digit character {c:?}")))?;
            w.push(d as u8)?;
        }
        Ok(w)
    }

    /// Append a 1-based digit.
    pub fn push(&mut self, digit: u8) -> Result<()> {
        if digit == 0 || digit > self.alphabet {
            return Err(Error::OutOfRange(format!(
                "digit {digit} outside 1..={}",
                self.alphabet
            )));
        }
        self.digits.push(digit - 1);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn alphabet_size(&self) -> u8 {
        self.alphabet
    }

    /// 1-based digit at position `i`.
    pub fn digit(&self, i: usize) -> u8 {
        self.digits[i] + 1
    }

    /// 0-based digits, for index arithmetic.
    pub fn raw_digits(&self) -> &[u8] {
        &self.digits
    }

    /// The prefix of length `n`.
    pub fn restrict(&self, n: usize) -> Result<Word> {
        if n > self.len() {
            return Err(Error::OutOfRange(format!(
                "restrict to {n} exceeds length {}",
                self.len()
            )));
        }
        Ok(Word {
            digits: self.digits[..n].to_vec(),
            alphabet: self.alphabet,
        })
    }

    /// The word with its last digit dropped.
    pub fn parent(&self) -> Result<Word> {
        if self.is_empty() {
            return Err(Error::OutOfRange("empty word has no parent".into()));
        }
        self.restrict(self.len() - 1)
    }

    pub fn reverse(&self) -> Word {
        let mut digits = self.digits.clone();
        digits.reverse();
        Word {
            digits,
            alphabet: self.alphabet,
        }
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.alphabet != other.alphabet {
            return Err(Error::OutOfRange(
                "concatenation requires matching alphabets".into(),
            ));
        }
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        Ok(Word {
            digits,
            alphabet: self.alphabet,
        })
    }

    /// The periodic word `pattern pattern ...` truncated to length `n`.
    pub fn periodic(pattern: &Word, n: usize) -> Result<Word> {
        if pattern.is_empty() {
            return Err(Error::OutOfRange("periodic pattern must be nonempty".into()));
        }
        let digits = (0..n)
            .map(|i| pattern.digits[i % pattern.len()])
            .collect();
        Ok(Word {
            digits,
            alphabet: pattern.alphabet,
        })
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &d in &self.digits {
            write!(f, "{}", d + 1)?;
        }
        Ok(())
    }
}

/// Decision returned by an enumeration visitor at an interior node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visit {
    Descend,
    Prune,
}

/// Depth-first lexicographic enumeration of all words of length `depth`.
///
/// The visitor is called at every node, root included. Returning
/// [`Visit::Prune`] at an interior node skips its descendants. The returned
/// count is the number of terminal visits: leaves reached plus interior nodes
/// pruned, so with no pruning it equals `N^depth` and in general
/// `leaves visited + leaves under pruned roots = N^depth`.
pub fn enumerate_level<F>(alphabet: u8, depth: usize, visitor: &mut F) -> Result<u64>
where
    F: FnMut(&Word) -> Visit,
{
    let mut word = Word::empty(alphabet)?;
    Ok(walk(&mut word, depth, visitor))
}

fn walk<F>(word: &mut Word, remaining: usize, visitor: &mut F) -> u64
where
    F: FnMut(&Word) -> Visit,
{
    let action = visitor(word);
    if remaining == 0 {
        return 1;
    }
    if action == Visit::Prune {
        return 1;
    }
    let mut count = 0;
    for d in 0..word.alphabet {
        word.digits.push(d);
        count += walk(word, remaining - 1, visitor);
        word.digits.pop();
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reverse_and_periodic() {
        let w = Word::parse(2, "122").unwrap();
        assert_eq!(w.reverse().to_string(), "221");
        let p = Word::parse(2, "12").unwrap();
        assert_eq!(Word::periodic(&p, 5).unwrap().to_string(), "12121");
        assert_eq!(Word::periodic(&p, 0).unwrap().to_string(), "");
    }

    #[test]
    fn prefix_law() {
        let w = Word::parse(3, "1321").unwrap();
        let v = Word::parse(3, "22").unwrap();
        let c = w.concat(&v).unwrap();
        assert_eq!(c.restrict(w.len()).unwrap(), w);
        assert_eq!(c.parent().unwrap().to_string(), "13212");
    }

    #[test]
    fn digit_range_checks() {
        assert!(Word::parse(2, "123").is_err());
        assert!(Word::empty(1).is_err());
        let w = Word::parse(2, "12").unwrap();
        assert!(w.restrict(3).is_err());
        assert!(Word::empty(2).unwrap().parent().is_err());
    }

    #[test]
    fn enumerate_counts() {
        let mut n = 0u64;
        let visited = enumerate_level(2, 3, &mut |_w| {
            n += 1;
            Visit::Descend
        })
        .unwrap();
        assert_eq!(visited, 8);
        // visitor sees every node: 1 + 2 + 4 + 8
        assert_eq!(n, 15);

        let visited = enumerate_level(3, 2, &mut |_w| Visit::Descend).unwrap();
        assert_eq!(visited, 9);
    }

    #[test]
    fn enumerate_prunes_subtree() {
        // prune below the word "1": terminal visits are the pruned root plus
        // the four leaves starting with "2"
        let mut leaves = Vec::new();
        let visited = enumerate_level(2, 3, &mut |w| {
            if w.len() == 3 {
                leaves.push(w.to_string());
            }
            if w.to_string() == "1" {
                Visit::Prune
            } else {
                Visit::Descend
            }
        })
        .unwrap();
        assert_eq!(visited, 5);
        assert_eq!(leaves, vec!["211", "212", "221", "222"]);
    }

    #[test]
    fn enumerate_is_lexicographic() {
        let mut seen = Vec::new();
        enumerate_level(2, 2, &mut |w| {
            if w.len() == 2 {
                seen.push(w.to_string());
            }
            Visit::Descend
        })
        .unwrap();
        assert_eq!(seen, vec!["11", "12", "21", "22"]);
    }
}
