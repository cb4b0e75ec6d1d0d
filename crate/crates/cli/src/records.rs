//! JSON encodings of exact values. Rationals are `"p/q"` strings and field
//! elements carry the defining polynomial of their field, so elements of `K`
//! and of `G` cannot be confused.

use std::str::FromStr;

use num_rational::BigRational;
use serde_json::{json, Value};

use formlab::exact::arith::format_rational;
use formlab::field::{FieldElement, NumberField};
use formlab::numeric::Interval;
use formlab::places::HeightValue;
use formlab::search::Point;

pub fn field_id(k: &NumberField) -> String {
    if k.is_rationals() {
        "Q".to_string()
    } else {
        format!("Q[t]/({})", k.label())
    }
}

pub fn rational(r: &BigRational) -> Value {
    Value::String(format_rational(r))
}

pub fn element(e: &FieldElement) -> Value {
    json!({
        "field": field_id(e.field()),
        "coeffs": e.coords().iter().map(rational).collect::<Vec<_>>(),
    })
}

pub fn point(p: &[FieldElement]) -> Value {
    Value::Array(p.iter().map(element).collect())
}

/// Outward `f64` bounds of an interval.
pub fn interval(iv: &Interval) -> Value {
    let (lo, hi) = iv.to_f64_pair();
    json!({ "lo": lo, "hi": hi })
}

pub fn height(h: &HeightValue) -> Value {
    match h {
        HeightValue::Exact(r) => rational(r),
        HeightValue::Log(_) => Value::Null,
    }
}

/// Inverse of [`element`]; `None` on a field mismatch or malformed input.
pub fn element_from(v: &Value, k: &NumberField) -> Option<FieldElement> {
    if v.get("field")?.as_str()? != field_id(k) {
        return None;
    }
    let coords = v
        .get("coeffs")?
        .as_array()?
        .iter()
        .map(|c| BigRational::from_str(c.as_str()?).ok())
        .collect::<Option<Vec<_>>>()?;
    if coords.len() != k.degree() {
        return None;
    }
    Some(FieldElement::from_coords(k, coords))
}

pub fn point_from(v: &Value, k: &NumberField) -> Option<Point> {
    v.as_array()?.iter().map(|e| element_from(e, k)).collect()
}

/// `(a, b, ...)` for humans.
pub fn point_text(p: &[FieldElement]) -> String {
    let parts: Vec<String> = p
        .iter()
        .map(|e| {
            let s = e.to_string();
            if s.contains(' ') {
                format!("[{s}]")
            } else {
                s
            }
        })
        .collect();
    format!("({})", parts.join(", "))
}

pub fn interval_text(iv: &Interval) -> String {
    let (lo, hi) = iv.to_f64_pair();
    if lo == hi {
        format!("{lo:.12}")
    } else {
        format!("{:.12} (+-{:.1e})", (lo + hi) / 2.0, (hi - lo) / 2.0)
    }
}
