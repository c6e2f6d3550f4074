use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

/// An element of ½ℤ, stored doubled so that ordering, hashing and equality
/// are exact.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub const fn from_int(n: i64) -> Self {
        HalfInt(2 * n)
    }

    pub const fn from_doubled(twice: i64) -> Self {
        HalfInt(twice)
    }

    /// `(l - 1) / 2`, the centre offset of a segment of length `l`.
    pub const fn segment_radius(l: u32) -> Self {
        HalfInt(l as i64 - 1)
    }

    pub const fn doubled(self) -> i64 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_int(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl Mul<i64> for HalfInt {
    type Output = HalfInt;
    fn mul(self, rhs: i64) -> HalfInt {
        HalfInt(self.0 * rhs)
    }
}

impl From<i64> for HalfInt {
    fn from(n: i64) -> Self {
        HalfInt::from_int(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a half-integer: {0:?}")]
pub struct ParseHalfIntError(pub String);

impl FromStr for HalfInt {
    type Err = ParseHalfIntError;

    /// Accepts `"3"`, `"-3/2"`, `"1.5"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseHalfIntError(s.to_string());
        let t = s.trim();
        if let Some((num, den)) = t.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| err())?;
            return match den.trim() {
                "1" => Ok(HalfInt::from_int(num)),
                "2" => Ok(HalfInt(num)),
                _ => Err(err()),
            };
        }
        if let Ok(n) = t.parse::<i64>() {
            return Ok(HalfInt::from_int(n));
        }
        let x: f64 = t.parse().map_err(|_| err())?;
        HalfInt::try_from_f64(x).ok_or_else(err)
    }
}

impl HalfInt {
    /// Exact conversion from a float that is a multiple of ½.
    pub fn try_from_f64(x: f64) -> Option<Self> {
        let twice = 2.0 * x;
        if twice.is_finite() && twice.fract() == 0.0 && twice.abs() < 9.0e15 {
            Some(HalfInt(twice as i64))
        } else {
            None
        }
    }
}

/// Serialized as a JSON number; deserialized from a number or a string
/// such as `"3/2"`.
impl serde::Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.to_int() {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_f64(self.to_f64()),
        }
    }
}

impl<'de> serde::Deserialize<'de> for HalfInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Float(f64),
            Text(String),
        }
        let bad = |s: String| serde::de::Error::custom(ParseHalfIntError(s));
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(HalfInt::from_int(n)),
            Raw::Float(x) => HalfInt::try_from_f64(x).ok_or_else(|| bad(x.to_string())),
            Raw::Text(t) => t.parse().map_err(|_| bad(t)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        assert_eq!(HalfInt::from_doubled(-3).to_string(), "-3/2");
        assert_eq!(HalfInt::from_int(4).to_string(), "4");
        assert_eq!("-3/2".parse::<HalfInt>().unwrap(), HalfInt::from_doubled(-3));
        assert_eq!("2.5".parse::<HalfInt>().unwrap(), HalfInt::from_doubled(5));
        assert_eq!("7".parse::<HalfInt>().unwrap(), HalfInt::from_int(7));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("0.25".parse::<HalfInt>().is_err());
    }

    #[test]
    fn segment_radius() {
        assert_eq!(HalfInt::segment_radius(1), HalfInt::ZERO);
        assert_eq!(HalfInt::segment_radius(2), HalfInt::from_doubled(1));
        assert_eq!(HalfInt::segment_radius(5), HalfInt::from_int(2));
    }
}
