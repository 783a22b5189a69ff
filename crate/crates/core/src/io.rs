//! JSON file formats and 17-significant-digit output.
//!
//! States: `{"n": 3, "basis": "dicke", "coeffs": [[re, im], ...]}` or
//! `{"n": 3, "basis": "majorana", "points": [[theta, phi], ...]}`.
//! Density matrices: `{"n": 3, "matrix": [[[re, im], ...], ...]}`.

use std::io::{self, Write};

use nalgebra::DMatrix;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::majorana::{points_to_state, BlochPoint, MajoranaConfiguration, WeightedPoint};
use crate::states::{DensityMatrix, LocalUnitary, SingleQubitUnitary, SymmetricPureState, C64};
use crate::tolerances::Tolerances;

/// Compact JSON with every float as `{:.16e}`.
struct SeventeenDigits;

impl serde_json::ser::Formatter for SeventeenDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value == 0.0 {
            // drops the sign of -0.0
            writer.write_all(b"0.0")
        } else {
            write!(writer, "{value:.16e}")
        }
    }
}

/// Serializes `value` on one line, floats at 17 significant digits.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SeventeenDigits);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn complex_json(z: C64) -> Value {
    json!([z.re, z.im])
}

pub fn unitary_json(g: &SingleQubitUnitary) -> Value {
    json!([
        [complex_json(g.entry(0, 0)), complex_json(g.entry(0, 1))],
        [complex_json(g.entry(1, 0)), complex_json(g.entry(1, 1))]
    ])
}

pub fn local_unitary_json(u: &LocalUnitary) -> Value {
    Value::Array(u.factors().iter().map(unitary_json).collect())
}

pub fn state_json(psi: &SymmetricPureState) -> Value {
    json!({
        "n": psi.n(),
        "basis": "dicke",
        "coeffs": psi.coeffs().iter().map(|&c| complex_json(c)).collect::<Vec<_>>(),
    })
}

/// Points as `[theta, phi, multiplicity]`, readable back as a state.
pub fn configuration_json(config: &MajoranaConfiguration) -> Value {
    let points: Vec<Value> = config
        .clusters()
        .iter()
        .map(|c| json!([c.point.theta(), c.point.phi(), c.multiplicity]))
        .collect();
    json!({ "n": config.n(), "basis": "majorana", "points": points })
}

pub fn density_json(rho: &DensityMatrix) -> Value {
    let m = rho.matrix();
    let rows: Vec<Value> = (0..m.nrows())
        .map(|r| Value::Array((0..m.ncols()).map(|c| complex_json(m[(r, c)])).collect()))
        .collect();
    json!({ "n": rho.n(), "matrix": rows })
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Format(format!("missing field `{key}`")))
}

fn number(v: &Value, what: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::Format(format!("{what} must be a number")))
}

fn complex(v: &Value) -> Result<C64> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([re, im]) => Ok(C64::new(
            number(re, "real part")?,
            number(im, "imaginary part")?,
        )),
        _ => Err(Error::Format(format!("expected [re, im], found {v}"))),
    }
}

fn declared_n(obj: &Map<String, Value>) -> Result<Option<usize>> {
    obj.get("n")
        .map(|v| {
            v.as_u64()
                .map(|n| n as usize)
                .ok_or_else(|| Error::Format("`n` must be a nonnegative integer".into()))
        })
        .transpose()
}

fn object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Format("expected a JSON object".into()))
}

fn points_from(obj: &Map<String, Value>, tol: &Tolerances) -> Result<MajoranaConfiguration> {
    let list = field(obj, "points")?
        .as_array()
        .ok_or_else(|| Error::Format("`points` must be an array".into()))?;
    let mut clusters = Vec::with_capacity(list.len());
    for p in list {
        let (theta, phi, mult) = match p.as_array().map(|a| a.as_slice()) {
            Some([t, f]) => (number(t, "theta")?, number(f, "phi")?, 1),
            Some([t, f, m]) => {
                let m = m.as_u64().filter(|&m| m > 0).ok_or_else(|| {
                    Error::Format("multiplicity must be a positive integer".into())
                })?;
                (number(t, "theta")?, number(f, "phi")?, m as usize)
            }
            _ => {
                return Err(Error::Format(format!(
                    "expected [theta, phi] or [theta, phi, m], found {p}"
                )))
            }
        };
        clusters.push(WeightedPoint {
            point: BlochPoint::from_angles(theta, phi),
            multiplicity: mult,
        });
    }
    let config = MajoranaConfiguration::from_weighted(clusters, tol.cluster)?;
    if let Some(n) = declared_n(obj)? {
        if n != config.n() {
            return Err(Error::ArityMismatch {
                expected: n,
                found: config.n(),
            });
        }
    }
    Ok(config)
}

/// What a state-accepting command was given.
#[derive(Debug, Clone)]
pub enum StateInput {
    Dicke(SymmetricPureState),
    Points(MajoranaConfiguration),
}

impl StateInput {
    pub fn state(&self) -> Result<SymmetricPureState> {
        match self {
            StateInput::Dicke(psi) => Ok(psi.clone()),
            StateInput::Points(c) => points_to_state(c),
        }
    }
}

/// Reads a state file. Also accepts `majorana` output (points with
/// multiplicities) and `classify` output (through its `canonical` field).
/// Coefficients are renormalized.
pub fn read_state_input(text: &str, tol: &Tolerances) -> Result<StateInput> {
    let v: Value = serde_json::from_str(text)?;
    state_input_from_value(&v, tol)
}

fn state_input_from_value(v: &Value, tol: &Tolerances) -> Result<StateInput> {
    let obj = object(v)?;
    if let Some(inner) = obj.get("canonical") {
        return state_input_from_value(inner, tol);
    }
    let basis = obj.get("basis").and_then(Value::as_str);
    match basis {
        Some("dicke") | None if obj.contains_key("coeffs") => {
            let coeffs = field(obj, "coeffs")?
                .as_array()
                .ok_or_else(|| Error::Format("`coeffs` must be an array".into()))?
                .iter()
                .map(complex)
                .collect::<Result<Vec<_>>>()?;
            let n = declared_n(obj)?.unwrap_or(coeffs.len().saturating_sub(1));
            if coeffs.len() != n + 1 {
                return Err(Error::ArityMismatch {
                    expected: n + 1,
                    found: coeffs.len(),
                });
            }
            Ok(StateInput::Dicke(SymmetricPureState::normalized(
                n, coeffs,
            )?))
        }
        Some("majorana") | None if obj.contains_key("points") => {
            Ok(StateInput::Points(points_from(obj, tol)?))
        }
        Some(other) => Err(Error::Format(format!("unknown basis `{other}`"))),
        None => Err(Error::Format("expected `coeffs` or `points`".into())),
    }
}

pub fn read_state(text: &str, tol: &Tolerances) -> Result<SymmetricPureState> {
    read_state_input(text, tol)?.state()
}

/// Reads a density file; a state file is read as its projector.
pub fn read_density(text: &str, tol: &Tolerances) -> Result<DensityMatrix> {
    let v: Value = serde_json::from_str(text)?;
    let obj = object(&v)?;
    let Some(rows) = obj.get("matrix") else {
        return state_input_from_value(&v, tol)?.state()?.to_density();
    };
    let rows = rows
        .as_array()
        .ok_or_else(|| Error::Format("`matrix` must be an array of rows".into()))?;
    let dim = rows.len();
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::Format(format!(
            "matrix dimension {dim} is not a power of two"
        )));
    }
    let n = dim.trailing_zeros() as usize;
    if let Some(declared) = declared_n(obj)? {
        if declared != n {
            return Err(Error::ArityMismatch {
                expected: declared,
                found: n,
            });
        }
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for row in rows {
        let row = row
            .as_array()
            .filter(|r| r.len() == dim)
            .ok_or_else(|| Error::Format(format!("every row must have {dim} entries")))?;
        for z in row {
            entries.push(complex(z)?);
        }
    }
    DensityMatrix::with_tolerance(
        n,
        DMatrix::from_row_slice(dim, dim, &entries),
        tol.hermiticity,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorana::majorana_points;

    #[test]
    fn floats_have_seventeen_digits() {
        let s = to_json_string(&json!([0.1, 1.0, -0.0, 1e-300])).unwrap();
        assert_eq!(
            s,
            "[1.0000000000000001e-1,1.0000000000000000e0,0.0,1.0000000000000000e-300]"
        );
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![0.1, 1.0, 0.0, 1e-300]);
    }

    #[test]
    fn dicke_round_trip_is_exact() {
        let tol = Tolerances::default();
        let psi = SymmetricPureState::ghz(3, C64::new(0.6, 0.0), C64::new(0.0, 0.8)).unwrap();
        let text = to_json_string(&state_json(&psi)).unwrap();
        assert_eq!(read_state(&text, &tol).unwrap(), psi);
    }

    #[test]
    fn reader_normalizes_and_checks_length() {
        let tol = Tolerances::default();
        let psi = read_state(
            r#"{"n": 1, "basis": "dicke", "coeffs": [[3, 0], [0, 4]]}"#,
            &tol,
        )
        .unwrap();
        assert!((psi.coeffs()[0].re - 0.6).abs() < 1e-15);
        assert!(read_state(r#"{"n": 2, "basis": "dicke", "coeffs": [[1, 0]]}"#, &tol).is_err());
        assert!(read_state(r#"{"n": 1, "basis": "qutrit", "coeffs": []}"#, &tol).is_err());
    }

    #[test]
    fn majorana_output_reads_back() {
        let tol = Tolerances::default();
        let psi = SymmetricPureState::dicke(4, 1).unwrap();
        let text =
            to_json_string(&configuration_json(&majorana_points(&psi, &tol).unwrap())).unwrap();
        let back = read_state(&text, &tol).unwrap();
        assert!(back.distance_up_to_phase(&psi) < 1e-12);
        let pairs = read_state(
            r#"{"n": 2, "basis": "majorana", "points": [[0, 0], [3.141592653589793, 0]]}"#,
            &tol,
        )
        .unwrap();
        assert!(pairs.distance_up_to_phase(&SymmetricPureState::dicke(2, 1).unwrap()) < 1e-12);
    }

    #[test]
    fn density_round_trip() {
        let tol = Tolerances::default();
        let rho = SymmetricPureState::dicke(3, 1)
            .unwrap()
            .to_density()
            .unwrap();
        let text = to_json_string(&density_json(&rho)).unwrap();
        let back = read_density(&text, &tol).unwrap();
        assert_eq!(back, rho);
        let from_state = read_density(
            &to_json_string(&state_json(&SymmetricPureState::dicke(3, 1).unwrap())).unwrap(),
            &tol,
        )
        .unwrap();
        assert!(from_state.frobenius_distance(&rho) < 1e-15);
        assert!(read_density(r#"{"n": 1, "matrix": [[[1, 0], [0, 0], [0, 0]]]}"#, &tol).is_err());
    }
}
