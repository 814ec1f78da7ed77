//! One-line permutations of `[n]` and the three statistics `maj`, `inv`, `imaj`.
//!
//! Positions and values are 1-based in every public accessor. The word is
//! stored as bytes, so `n` is capped at 255.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which statistic indexes the rows of a count matrix. Columns are always `imaj`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StatPair {
    #[serde(rename = "MAJ_IMAJ")]
    MajImaj,
    #[serde(rename = "INV_IMAJ")]
    InvImaj,
}

impl StatPair {
    pub fn as_str(self) -> &'static str {
        match self {
            StatPair::MajImaj => "MAJ_IMAJ",
            StatPair::InvImaj => "INV_IMAJ",
        }
    }

    pub fn row_stat(self, p: &Permutation) -> u32 {
        match self {
            StatPair::MajImaj => p.maj(),
            StatPair::InvImaj => p.inv(),
        }
    }
}

impl fmt::Display for StatPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StatPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "maj-imaj" => Ok(StatPair::MajImaj),
            "inv-imaj" => Ok(StatPair::InvImaj),
            _ => Err(Error::InvalidParameter(format!(
                "unknown statistic pair `{s}` (expected maj-imaj or inv-imaj)"
            ))),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Permutation {
    word: Vec<u8>,
}

impl Permutation {
    /// Validates that `word` is a bijection of `[n]`.
    pub fn new(word: Vec<u8>) -> Result<Self> {
        let n = word.len();
        if n > u8::MAX as usize {
            return Err(Error::InvalidPermutation(format!("length {n} exceeds 255")));
        }
        let mut seen = vec![false; n + 1];
        for &v in &word {
            let v = v as usize;
            if v == 0 || v > n {
                return Err(Error::InvalidPermutation(format!(
                    "value {v} outside 1..={n}"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidPermutation(format!("value {v} repeated")));
            }
        }
        Ok(Permutation { word })
    }

    pub(crate) fn from_word_unchecked(word: Vec<u8>) -> Self {
        debug_assert!(Permutation::new(word.clone()).is_ok());
        Permutation { word }
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            word: (1..=n as u8).collect(),
        }
    }

    pub fn empty() -> Self {
        Permutation { word: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn into_word(self) -> Vec<u8> {
        self.word
    }

    /// Value at 1-based position `i`.
    pub fn at(&self, i: usize) -> u8 {
        self.word[i - 1]
    }

    /// 1-based position of value `v`.
    pub fn position_of(&self, v: u8) -> usize {
        self.word.iter().position(|&a| a == v).expect("value in range") + 1
    }

    /// Sum of the descent positions `i` with `a_i > a_{i+1}`.
    pub fn maj(&self) -> u32 {
        self.word
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] > w[1])
            .map(|(i, _)| i as u32 + 1)
            .sum()
    }

    pub fn inv(&self) -> u32 {
        let mut count = 0;
        for (s, &a) in self.word.iter().enumerate() {
            count += self.word[s + 1..].iter().filter(|&&b| b < a).count() as u32;
        }
        count
    }

    /// Sum of the values `i` such that `i + 1` sits to the left of `i`.
    pub fn imaj(&self) -> u32 {
        let n = self.len();
        let mut pos = vec![0usize; n + 1];
        for (s, &a) in self.word.iter().enumerate() {
            pos[a as usize] = s;
        }
        (1..n).filter(|&i| pos[i + 1] < pos[i]).map(|i| i as u32).sum()
    }

    pub fn inverse(&self) -> Permutation {
        let mut word = vec![0u8; self.len()];
        for (s, &a) in self.word.iter().enumerate() {
            word[a as usize - 1] = s as u8 + 1;
        }
        Permutation { word }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() <= 9 {
            for &a in &self.word {
                write!(f, "{a}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.word.iter().map(u8::to_string).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let word: Vec<u8> = if s.contains(',') {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u8>()
                        .map_err(|_| Error::InvalidPermutation(format!("bad entry `{t}`")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as u8)
                        .ok_or_else(|| Error::InvalidPermutation(format!("bad digit `{c}`")))
                })
                .collect::<Result<_>>()?
        };
        Permutation::new(word)
    }
}

impl TryFrom<String> for Permutation {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Permutation> for String {
    fn from(p: Permutation) -> String {
        p.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn maj_examples() {
        assert_eq!(p("123").maj(), 0);
        assert_eq!(p("21").maj(), 1);
        assert_eq!(p("6371452").maj(), 10);
        assert_eq!(p("1").maj(), 0);
        assert_eq!(Permutation::empty().maj(), 0);
    }

    #[test]
    fn inv_examples() {
        assert_eq!(p("123").inv(), 0);
        assert_eq!(p("321").inv(), 3);
        assert_eq!(p("4123").inv(), 3);
    }

    #[test]
    fn imaj_examples() {
        assert_eq!(p("123").imaj(), 0);
        assert_eq!(p("312").imaj(), 2);
        assert_eq!(p("231").imaj(), 1);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(p("123").inverse(), p("123"));
        assert_eq!(p("312").inverse(), p("231"));
        assert_eq!(p("6371452").inverse(), p("4725613"));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 3]).is_err());
        assert!("12a".parse::<Permutation>().is_err());
    }

    #[test]
    fn serialization_switches_to_commas_above_nine() {
        assert_eq!(p("6371452").to_string(), "6371452");
        let long = Permutation::new(vec![10, 3, 7, 1, 2, 4, 5, 6, 8, 9]).unwrap();
        assert_eq!(long.to_string(), "10,3,7,1,2,4,5,6,8,9");
        assert_eq!(long.to_string().parse::<Permutation>().unwrap(), long);
        assert_eq!("".parse::<Permutation>().unwrap(), Permutation::empty());
    }

    #[test]
    fn statpair_parsing() {
        assert_eq!("maj-imaj".parse::<StatPair>().unwrap(), StatPair::MajImaj);
        assert_eq!("INV_IMAJ".parse::<StatPair>().unwrap(), StatPair::InvImaj);
        assert!("maj".parse::<StatPair>().is_err());
    }
}
