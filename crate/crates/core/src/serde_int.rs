//! Serialize big integers as JSON numbers (strings only when they exceed i128).

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::{SerializeSeq, Serializer};

pub fn one<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i128() {
        Some(v) => s.serialize_i128(v),
        None => s.serialize_str(&x.to_string()),
    }
}

struct Wrap<'a>(&'a BigInt);

impl serde::Serialize for Wrap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        one(self.0, s)
    }
}

struct WrapVec<'a>(&'a [BigInt]);

impl serde::Serialize for WrapVec<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        vec(self.0, s)
    }
}

pub fn vec<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&Wrap(x))?;
    }
    seq.end()
}

pub fn vec_vec<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for row in v {
        seq.serialize_element(&WrapVec(row))?;
    }
    seq.end()
}
