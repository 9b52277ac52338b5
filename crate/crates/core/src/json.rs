//! Serde helpers: integers travel as decimal strings, rationals as `"p/q"`.
//!
//! Integer inputs are also accepted as plain JSON numbers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Deserialization shim for one integer.
#[derive(Debug, Clone)]
pub struct BigIntRepr(pub BigInt);

impl Serialize for BigIntRepr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for BigIntRepr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = BigIntRepr;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<BigIntRepr, E> {
                Ok(BigIntRepr(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<BigIntRepr, E> {
                Ok(BigIntRepr(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<BigIntRepr, E> {
                v.trim()
                    .parse()
                    .map(BigIntRepr)
                    .map_err(|_| E::custom(format!("bad integer `{v}`")))
            }
        }
        d.deserialize_any(V)
    }
}

pub mod big {
    use super::*;
    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        x.to_string().serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        Ok(BigIntRepr::deserialize(d)?.0)
    }
}

pub mod big_vec {
    use super::*;
    pub fn serialize<S: Serializer>(x: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
        x.iter().map(ToString::to_string).collect::<Vec<_>>().serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<BigInt>, D::Error> {
        Ok(Vec::<BigIntRepr>::deserialize(d)?
            .into_iter()
            .map(|x| x.0)
            .collect())
    }
}

pub mod big_vec2 {
    use super::*;
    pub fn serialize<S: Serializer>(
        x: &[Vec<BigInt>],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        x.iter()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<BigInt>>, D::Error> {
        Ok(Vec::<Vec<BigIntRepr>>::deserialize(d)?
            .into_iter()
            .map(|r| r.into_iter().map(|x| x.0).collect())
            .collect())
    }
}

pub mod big_vec3 {
    use super::*;
    pub fn serialize<S: Serializer>(
        x: &[Vec<Vec<BigInt>>],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        x.iter()
            .map(|m| {
                m.iter()
                    .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
            .serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<Vec<BigInt>>>, D::Error> {
        Ok(Vec::<Vec<Vec<BigIntRepr>>>::deserialize(d)?
            .into_iter()
            .map(|m| {
                m.into_iter()
                    .map(|r| r.into_iter().map(|x| x.0).collect())
                    .collect()
            })
            .collect())
    }
}

pub mod big_map {
    use super::*;
    use std::collections::BTreeMap;
    pub fn serialize<S: Serializer>(
        x: &BTreeMap<String, BigInt>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        x.iter()
            .map(|(k, v)| (k.clone(), v.to_string()))
            .collect::<BTreeMap<_, _>>()
            .serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<String, BigInt>, D::Error> {
        Ok(BTreeMap::<String, BigIntRepr>::deserialize(d)?
            .into_iter()
            .map(|(k, v)| (k, v.0))
            .collect())
    }
}

pub mod big_map_opt {
    use super::*;
    use std::collections::BTreeMap;
    pub fn serialize<S: Serializer>(
        x: &Option<BTreeMap<String, BigInt>>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(m) => s.serialize_some(&super::BigMap(m)),
            None => s.serialize_none(),
        }
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<BTreeMap<String, BigInt>>, D::Error> {
        Ok(Option::<BTreeMap<String, BigIntRepr>>::deserialize(d)?
            .map(|m| m.into_iter().map(|(k, v)| (k, v.0)).collect()))
    }
}

struct BigMap<'a>(&'a std::collections::BTreeMap<String, BigInt>);

impl Serialize for BigMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        big_map::serialize(self.0, s)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_parse_and_print() {
        let x = parse_rational("-6/4").unwrap();
        assert_eq!(format_rational(&x), "-3/2");
        assert_eq!(format_rational(&parse_rational("7").unwrap()), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/b").is_err());
    }

    #[test]
    fn integers_accept_numbers_and_strings() {
        let v: Vec<BigIntRepr> = serde_json::from_str(r#"[3, "-4", "99999999999999999999"]"#).unwrap();
        assert_eq!(v[0].0, BigInt::from(3));
        assert_eq!(v[1].0, BigInt::from(-4));
        assert_eq!(v[2].0.to_string(), "99999999999999999999");
    }
}
