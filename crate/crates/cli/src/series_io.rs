//! Series files: `{"precision": N, "terms": [[exp, [c0, ...]], ...]}`, an
//! array of such objects, or a bare array of terms (precision 1).

use std::sync::Arc;

use ramlab::asfield::{FqField, LaurentSeries};
use ramlab::{Error, Result};
use serde_json::{json, Value};

pub fn parse_series_document(field: &Arc<FqField>, text: &str) -> Result<Vec<LaurentSeries>> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("series JSON: {e}")))?;
    match &doc {
        Value::Object(_) => Ok(vec![parse_series(field, &doc)?]),
        Value::Array(items) if items.first().is_some_and(Value::is_object) => {
            items.iter().map(|v| parse_series(field, v)).collect()
        }
        Value::Array(items) => Ok(vec![parse_terms(field, items, 1)?]),
        _ => Err(Error::Parse("expected a series object or an array".into())),
    }
}

fn parse_series(field: &Arc<FqField>, v: &Value) -> Result<LaurentSeries> {
    let precision = v
        .get("precision")
        .and_then(Value::as_i64)
        .ok_or_else(|| Error::Parse("series needs an integer \"precision\"".into()))?;
    let terms = v
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("series needs a \"terms\" array".into()))?;
    parse_terms(field, terms, precision)
}

fn parse_terms(field: &Arc<FqField>, terms: &[Value], precision: i64) -> Result<LaurentSeries> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let pair = t.as_array().filter(|a| a.len() == 2);
        let (exp, coeffs) = pair
            .and_then(|a| Some((a[0].as_i64()?, a[1].as_array()?)))
            .ok_or_else(|| Error::Parse(format!("term {t} is not [exponent, [coefficients]]")))?;
        let cs: Vec<u64> = coeffs
            .iter()
            .map(|c| {
                c.as_u64().ok_or_else(|| {
                    Error::Parse(format!("coefficient {c} is not a non-negative integer"))
                })
            })
            .collect::<Result<_>>()?;
        out.push((exp, field.from_coeffs(&cs)?));
    }
    Ok(LaurentSeries::from_terms(field, &out, precision))
}

pub fn series_to_json(s: &LaurentSeries) -> Value {
    let terms: Vec<Value> = s.terms().map(|(e, c)| json!([e, c.coeffs()])).collect();
    json!({ "precision": s.precision(), "terms": terms })
}
