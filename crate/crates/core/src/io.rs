//! Text formatting shared by the CSV and JSON emitters.
//!
//! Floats are written in Rust's shortest round-trip form; non-finite values
//! use the literals `-inf`, `+inf` and `nan`, both in CSV cells and as JSON
//! strings.

use serde::Serializer;

pub fn format_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v == f64::INFINITY {
        "+inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v}")
    }
}

pub fn parse_f64(s: &str) -> Option<f64> {
    match s.trim() {
        "nan" => Some(f64::NAN),
        "+inf" | "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        other => other.parse().ok(),
    }
}

/// Serializer for `f64` fields that may be non-finite.
pub fn serialize_f64<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_str(&format_f64(*v))
    }
}

pub fn serialize_opt_f64<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => serialize_f64(v, s),
        None => s.serialize_none(),
    }
}

pub fn serialize_f64_slice<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    struct Literal(f64);
    impl serde::Serialize for Literal {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            serialize_f64(&self.0, s)
        }
    }
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&Literal(*x))?;
    }
    seq.end()
}

/// Writes rows to a CSV string with a mandatory header.
pub fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> crate::Result<String> {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| crate::Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| crate::Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        assert_eq!(format_f64(f64::NEG_INFINITY), "-inf");
        assert_eq!(format_f64(f64::INFINITY), "+inf");
        assert_eq!(format_f64(f64::NAN), "nan");
        assert_eq!(format_f64(0.1), "0.1");
        assert!(parse_f64("nan").unwrap().is_nan());
        assert_eq!(parse_f64("+inf"), Some(f64::INFINITY));
        assert_eq!(parse_f64(" 2.5 "), Some(2.5));
    }
}
