//! Curve selection: builtin names and the JSON curve format
//! `{"m": 2, "alpha": [[[re, im], ...], ...]}`, where `alpha[j-1]` lists
//! the 2j+1 coefficients of αⱼ in ascending powers of ξ.

use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::monopoles::{charge2, charge3};
use crate::spectral::SpectralCurve;

pub const BUILTINS: [&str; 2] = ["charge2:k=0.8", "charge3"];

/// `charge2`, `charge2:k=<value>` or `charge3`.
pub fn builtin(name: &str) -> Option<Result<SpectralCurve>> {
    match name {
        "charge3" => Some(Ok(charge3())),
        "charge2" => Some(charge2(0.8).map(|(c, _)| c)),
        _ => {
            let k = name.strip_prefix("charge2:k=")?;
            Some(match k.parse::<f64>() {
                Ok(k) => charge2(k).map(|(c, _)| c),
                Err(_) => Err(Error::InvalidCurve(format!("cannot parse k in {name:?}"))),
            })
        }
    }
}

/// A builtin name, or else a path to a JSON curve file.
pub fn load_curve(spec: &str) -> Result<SpectralCurve> {
    if let Some(c) = builtin(spec) {
        return c;
    }
    if spec.starts_with("charge") && !Path::new(spec).exists() {
        return Err(Error::InvalidCurve(format!("unknown builtin {spec:?} (known: {})", BUILTINS.join(", "))));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::InvalidCurve(format!("{spec}: {e}")))?;
    curve_from_json(&text)
}

pub fn curve_from_json(text: &str) -> Result<SpectralCurve> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::InvalidCurve(format!("malformed JSON: {e}")))?;
    let m = v
        .get("m")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::InvalidCurve("field \"m\" must be a positive integer".into()))? as usize;
    let alpha = v
        .get("alpha")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::InvalidCurve("field \"alpha\" must be an array".into()))?;
    let mut coeffs = Vec::with_capacity(alpha.len());
    for (j, row) in alpha.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| Error::InvalidCurve(format!("alpha[{j}] must be an array")))?;
        let mut out = Vec::with_capacity(row.len());
        for (i, c) in row.iter().enumerate() {
            let pair = c.as_array().filter(|p| p.len() == 2);
            let parsed = pair.and_then(|p| Some(Complex64::new(p[0].as_f64()?, p[1].as_f64()?)));
            let z = parsed.ok_or_else(|| Error::InvalidCurve(format!("alpha[{j}][{i}] must be a [re, im] pair of numbers")))?;
            out.push(z);
        }
        coeffs.push(out);
    }
    SpectralCurve::new(m, coeffs)
}

pub fn curve_to_json(c: &SpectralCurve) -> String {
    let alpha: Vec<Vec<[f64; 2]>> = c.coeffs().iter().map(|row| row.iter().map(|z| [z.re, z.im]).collect()).collect();
    serde_json::to_string_pretty(&json!({ "m": c.charge(), "alpha": alpha })).expect("plain data")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_resolve() {
        assert_eq!(load_curve("charge3").unwrap().charge(), 3);
        assert_eq!(load_curve("charge2:k=0.8").unwrap().charge(), 2);
        assert!(matches!(load_curve("charge2:k=0"), Err(Error::SingularCurve(_))));
        assert!(matches!(load_curve("charge7"), Err(Error::InvalidCurve(_))));
    }

    #[test]
    fn json_round_trip() {
        let c = load_curve("charge2:k=0.6").unwrap();
        let back = curve_from_json(&curve_to_json(&c)).unwrap();
        assert_eq!(back.coeffs(), c.coeffs());
    }

    #[test]
    fn bad_coefficient_is_named() {
        let text = r#"{"m": 2, "alpha": [[[0,0],[0,0],[0,0]], [[1,0],[0,0],["x",0],[0,0],[1,0]]]}"#;
        let msg = curve_from_json(text).unwrap_err().to_string();
        assert!(msg.contains("alpha[1][2]"), "{msg}");
    }
}
