//! Number formatting and output sinks. Every float is written with 17
//! significant digits so that it parses back to the identical double.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// `x` in scientific notation with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    if x.is_finite() {
        // Adding +0 folds -0 into 0.
        format!("{:.16e}", x + 0.0)
    } else {
        format!("{x}")
    }
}

/// A float serialized as a 17-significant-digit JSON number (`null` when
/// not finite).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        let raw = RawValue::from_string(fmt17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

pub fn open_output(out: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn csv_row(w: &mut dyn Write, values: &[f64]) -> io::Result<()> {
    let line: Vec<String> = values.iter().map(|&v| fmt17(v)).collect();
    writeln!(w, "{}", line.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_exactly() {
        for x in [std::f64::consts::PI, -0.1, 1e-300, 123456789.12345679, 0.0] {
            let s = fmt17(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
            let json = serde_json::to_string(&Sig17(x)).unwrap();
            assert_eq!(json, s);
            let back: f64 = serde_json::from_str(&json).unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
        assert_eq!(fmt17(-0.0), fmt17(0.0));
        assert_eq!(serde_json::to_string(&Sig17(f64::NAN)).unwrap(), "null");
    }
}
