use std::fmt;
use std::ops::BitXorAssign;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Result, SqssError};

/// A string of classical bits, rendered as `"0110..."`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BitString(Vec<u8>);

impl BitString {
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return invalid("bit values must be 0 or 1");
        }
        Ok(Self(bits))
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Self((0..len).map(|_| u8::from(rng.random::<bool>())).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] ^= 1;
    }

    /// Bits at `positions`, in the order given.
    pub fn select(&self, positions: &[usize]) -> BitString {
        Self(positions.iter().map(|&p| self.0[p]).collect())
    }

    /// Number of positions where `self` and `other` agree.
    pub fn agreement(&self, other: &BitString) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a == b).count()
    }

    /// Bitwise XOR of equal-length strings; `None` for an empty iterator.
    pub fn xor_all<'a, I: IntoIterator<Item = &'a BitString>>(strings: I) -> Result<Option<BitString>> {
        let mut iter = strings.into_iter();
        let Some(first) = iter.next() else {
            return Ok(None);
        };
        let mut acc = first.clone();
        for s in iter {
            if s.len() != acc.len() {
                return invalid("XOR of bit strings with different lengths");
            }
            acc ^= s;
        }
        Ok(Some(acc))
    }
}

impl BitXorAssign<&BitString> for BitString {
    fn bitxor_assign(&mut self, rhs: &BitString) {
        for (a, b) in self.0.iter_mut().zip(&rhs.0) {
            *a ^= b;
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            f.write_str(if *b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = SqssError;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => invalid(format!("'{other}' is not a bit")),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Self)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_select() {
        let s: BitString = "1011".parse().unwrap();
        assert_eq!(s.select(&[0, 2]).to_string(), "11");
        assert!("10a".parse::<BitString>().is_err());
        assert!(BitString::from_bits(vec![2]).is_err());
    }

    #[test]
    fn xor_rejects_ragged_input() {
        let a: BitString = "10".parse().unwrap();
        let b: BitString = "1".parse().unwrap();
        assert!(BitString::xor_all([&a, &b]).is_err());
        assert_eq!(BitString::xor_all(std::iter::empty()).unwrap(), None);
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(bits in proptest::collection::vec(0u8..2, 0..64)) {
            let s = BitString::from_bits(bits).unwrap();
            prop_assert_eq!(s.to_string().parse::<BitString>().unwrap(), s.clone());
            let json = serde_json::to_string(&s).unwrap();
            prop_assert_eq!(serde_json::from_str::<BitString>(&json).unwrap(), s);
        }
    }
}
