//! JSON encoding for arbitrary-precision integers.
//!
//! Values that fit in an `i64` are written as JSON numbers, larger ones as
//! decimal strings. Both forms are accepted when reading.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

struct Wrapped<'a>(&'a BigInt);

impl Serialize for Wrapped<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct Owned(BigInt);

impl<'de> Deserialize<'de> for Owned {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Owned;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Owned, E> {
                Ok(Owned(v.into()))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Owned, E> {
                Ok(Owned(v.into()))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Owned, E> {
                Err(E::custom(format!("expected an integer, found {v}")))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Owned, E> {
                v.trim()
                    .parse::<BigInt>()
                    .map(Owned)
                    .map_err(|_| E::custom(format!("`{v}` is not an integer")))
            }
        }
        d.deserialize_any(V)
    }
}

pub mod integer {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        Wrapped(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        Owned::deserialize(d).map(|o| o.0)
    }
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&Wrapped(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v: Vec<Owned> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|o| o.0).collect())
    }
}

pub mod option_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
        match xs {
            Some(xs) => s.serialize_some(&xs.iter().map(Wrapped).collect::<Vec<_>>()),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigInt>>, D::Error> {
        let v: Option<Vec<Owned>> = Option::deserialize(d)?;
        Ok(v.map(|v| v.into_iter().map(|o| o.0).collect()))
    }
}

pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for row in rows {
            seq.serialize_element(&row.iter().map(Wrapped).collect::<Vec<_>>())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let v: Vec<Vec<Owned>> = Vec::deserialize(d)?;
        Ok(v.into_iter()
            .map(|row| row.into_iter().map(|o| o.0).collect())
            .collect())
    }
}

pub mod option_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(rows: &Option<Vec<Vec<BigInt>>>, s: S) -> Result<S::Ok, S::Error> {
        match rows {
            Some(rows) => s.serialize_some(
                &rows
                    .iter()
                    .map(|r| r.iter().map(Wrapped).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
            ),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Vec<BigInt>>>, D::Error> {
        let v: Option<Vec<Vec<Owned>>> = Option::deserialize(d)?;
        Ok(v.map(|v| {
            v.into_iter()
                .map(|row| row.into_iter().map(|o| o.0).collect())
                .collect()
        }))
    }
}
