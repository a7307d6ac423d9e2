//! Canonical JSON forms of scalars: rationals as `"p/q"` strings, series as
//! exponent-to-coefficient maps in graded-lex order.

use num_complex::Complex64;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::localzero::ZeroWithMultiplicity;
use crate::polynomials::{Monomial, Polynomial};
use crate::scalars::{Field, Fp, Ring, Series, SeriesCtx, Valuation, C64, Q, QI};

pub trait ToJson {
    fn to_json(&self) -> Value;
}

impl ToJson for Q {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl ToJson for Fp {
    fn to_json(&self) -> Value {
        json!(self.value())
    }
}

impl ToJson for QI {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl ToJson for C64 {
    fn to_json(&self) -> Value {
        json!([self.z.re, self.z.im])
    }
}

/// Key of an exponent vector: comma-joined exponents.
pub fn exponent_key(e: &[u32]) -> String {
    e.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

impl<K: Field + ToJson> ToJson for Series<K> {
    fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (e, c) in self.terms() {
            m.insert(exponent_key(e.exponents()), c.to_json());
        }
        Value::Object(m)
    }
}

impl<R: Ring> ToJson for Polynomial<R> {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
}

impl ToJson for Valuation {
    fn to_json(&self) -> Value {
        match self {
            Valuation::Finite(k) => json!(k),
            Valuation::AtLeast(k) => json!({ "atLeast": k }),
        }
    }
}

impl ToJson for Complex64 {
    fn to_json(&self) -> Value {
        json!([self.re, self.im])
    }
}

impl ToJson for ZeroWithMultiplicity {
    fn to_json(&self) -> Value {
        json!({
            "point": self.point.iter().map(ToJson::to_json).collect::<Vec<_>>(),
            "multiplicity": self.multiplicity,
        })
    }
}

/// Inverse of the [`Series`] encoding.
pub fn series_from_json(v: &Value, ctx: &SeriesCtx<Q>) -> Result<Series<Q>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidInput("series must be a JSON object".into()))?;
    let mut terms = Vec::with_capacity(obj.len());
    for (key, c) in obj {
        let exps = key
            .split(',')
            .map(str::parse)
            .collect::<std::result::Result<Vec<u32>, _>>()
            .map_err(|_| Error::InvalidInput(format!("bad exponent key `{key}`")))?;
        if exps.len() != ctx.nvars {
            return Err(Error::InvalidInput(format!(
                "exponent key `{key}` has the wrong length"
            )));
        }
        let c: Q = c
            .as_str()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::InvalidInput(format!("bad coefficient at `{key}`")))?;
        terms.push((Monomial::new(exps), c));
    }
    Ok(Series::from_terms(ctx, terms))
}
