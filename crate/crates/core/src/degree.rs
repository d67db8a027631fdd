//! Degrees in RO(Z/2) = Z ⊕ Zα.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ParseError;

/// The element `m + pα` of RO(Z/2).
///
/// Used both for the bidegree of homotopy classes and as the index `V` of a
/// spectrum in a real spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Degree {
    pub m: i64,
    pub p: i64,
}

impl Degree {
    pub const ZERO: Degree = Degree { m: 0, p: 0 };
    /// The sign representation α.
    pub const ALPHA: Degree = Degree { m: 0, p: 1 };
    pub const ONE: Degree = Degree { m: 1, p: 0 };

    pub const fn new(m: i64, p: i64) -> Self {
        Degree { m, p }
    }

    /// Collapse to an integer degree by restricting α to the trivial representation.
    pub const fn total(self) -> i64 {
        self.m + self.p
    }

    pub fn scale(self, k: i64) -> Self {
        Degree::new(self.m * k, self.p * k)
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        Degree::new(self.m + rhs.m, self.p + rhs.p)
    }
}

impl Sub for Degree {
    type Output = Degree;
    fn sub(self, rhs: Degree) -> Degree {
        Degree::new(self.m - rhs.m, self.p - rhs.p)
    }
}

impl Neg for Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree::new(-self.m, -self.p)
    }
}

/// Formats as `m+pa`, e.g. `0-1a`, `3+1a`; plain `m` when `p = 0`.
impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p == 0 {
            write!(f, "{}", self.m)
        } else {
            write!(f, "{}{:+}a", self.m, self.p)
        }
    }
}

/// Parses `m`, `m+pa`, `m-pa`, `pa`, `a`, `-a`, `+a`.
impl FromStr for Degree {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseError::Shift(s.to_string());
        let s = s.trim();
        if s.is_empty() {
            return Err(bad());
        }
        let Some(body) = s.strip_suffix('a') else {
            let m = s.parse::<i64>().map_err(|_| bad())?;
            return Ok(Degree::new(m, 0));
        };
        // split off the α coefficient at the last sign that is not leading
        let split = body
            .char_indices()
            .rev()
            .find(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i);
        let (m_part, p_part) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let m = if m_part.is_empty() { 0 } else { m_part.parse::<i64>().map_err(|_| bad())? };
        let p = match p_part {
            "" | "+" => 1,
            "-" => -1,
            other => other.parse::<i64>().map_err(|_| bad())?,
        };
        Ok(Degree::new(m, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_shift_syntax() {
        assert_eq!("0".parse::<Degree>().unwrap(), Degree::ZERO);
        assert_eq!("0-1a".parse::<Degree>().unwrap(), Degree::new(0, -1));
        assert_eq!("3+2a".parse::<Degree>().unwrap(), Degree::new(3, 2));
        assert_eq!("-3-2a".parse::<Degree>().unwrap(), Degree::new(-3, -2));
        assert_eq!("a".parse::<Degree>().unwrap(), Degree::ALPHA);
        assert_eq!("-a".parse::<Degree>().unwrap(), -Degree::ALPHA);
        assert_eq!("+1a".parse::<Degree>().unwrap(), Degree::ALPHA);
        assert_eq!("5a".parse::<Degree>().unwrap(), Degree::new(0, 5));
        assert!("x".parse::<Degree>().is_err());
        assert!("1+a+".parse::<Degree>().is_err());
        assert!("".parse::<Degree>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for d in [Degree::new(0, -1), Degree::new(-4, 3), Degree::ZERO] {
            assert_eq!(d.to_string().parse::<Degree>().unwrap(), d);
        }
    }

    #[test]
    fn group_laws() {
        let a = Degree::new(3, -2);
        let b = Degree::new(-1, 5);
        assert_eq!(a + b, b + a);
        assert_eq!(a + (-a), Degree::ZERO);
        assert_eq!((a - b).total(), a.total() - b.total());
    }
}
