//! Locale-independent number formatting shared by JSON and CSV output.
//!
//! Floats are written as the shortest decimal that round-trips, in
//! uppercase E notation (`2.5E-1`, `1E0`, `0E0`).

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

pub fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:E}")
    } else {
        "null".to_string()
    }
}

/// A float that serializes through [`float`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(float(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

pub fn nums(xs: &[f64]) -> Vec<Num> {
    xs.iter().copied().map(Num).collect()
}

pub fn csv_row<I, S>(cells: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut line = cells
        .into_iter()
        .map(|c| c.as_ref().to_string())
        .collect::<Vec<_>>()
        .join(",");
    line.push('\n');
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortest_uppercase() {
        assert_eq!(float(0.25), "2.5E-1");
        assert_eq!(float(1.0), "1E0");
        assert_eq!(float(0.0), "0E0");
        assert_eq!(float(-1234.5), "-1.2345E3");
        assert_eq!(float(0.1), "1E-1");
        for x in [std::f64::consts::PI, 1.0 / 3.0, 6.02214076e23, 5e-324] {
            assert_eq!(float(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
    }

    #[test]
    fn json_numbers_are_raw() {
        let s = serde_json::to_string(&vec![Num(0.5), Num(2.0)]).unwrap();
        assert_eq!(s, "[5E-1,2E0]");
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, vec![0.5, 2.0]);
    }
}
