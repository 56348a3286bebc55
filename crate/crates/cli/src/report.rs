//! JSON encodings. Rationals are `"num/den"` strings, matrices row-major arrays of them.

use logconn_core::linalg::Matrix;
use logconn_core::param::RatFun;
use logconn_core::rational::Q;
use serde_json::{json, Value};

pub fn q(x: &Q) -> Value {
    Value::String(format!("{}/{}", x.numer(), x.denom()))
}

pub fn qs(v: &[Q]) -> Value {
    Value::Array(v.iter().map(q).collect())
}

pub fn matrix(m: &Matrix) -> Value {
    Value::Array((0..m.rows()).map(|i| qs(m.row(i))).collect())
}

pub fn ratfun(f: &RatFun, names: &[String]) -> Value {
    if f.is_zero() {
        return Value::String("0".into());
    }
    Value::String(format!("({}) / ({})", f.num.label(names), f.den.label(names)))
}

/// `[{label, value}]` pairs, keeping basis order.
pub fn labelled(labels: &[String], values: Vec<Value>) -> Value {
    Value::Array(labels.iter().zip(values).map(|(l, v)| json!({ "label": l, "value": v })).collect())
}

pub fn conventions() -> Value {
    json!({
        "rationals": "strings num/den",
        "matrices": "row-major",
        "degree2_orientation": "coefficients of alpha0^beta",
        "gauge_action": "g*(C,N) = (g C g^-1 - V(g) g^-1, g N g^-1)",
        "tangent_degree0_differential": "delta_{S,w} with the overall sign dropped",
    })
}
