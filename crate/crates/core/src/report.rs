use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// f64 serialized as a decimal string with 17 significant digits, enough to
/// round-trip every finite double bit-exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F17(pub f64);

impl From<f64> for F17 {
    fn from(v: f64) -> Self {
        F17(v)
    }
}

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{:.16e}", self.0))
    }
}

impl<'de> Deserialize<'de> for F17 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse::<f64>()
            .map(F17)
            .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_bit_exactly() {
        for &v in &[
            0.0,
            -0.0,
            1.0 / 3.0,
            std::f64::consts::PI,
            2.0f64.powi(-1074),
            f64::MAX,
            -123.456e-78,
        ] {
            let json = serde_json::to_string(&F17(v)).unwrap();
            let back: F17 = serde_json::from_str(&json).unwrap();
            assert_eq!(v.to_bits(), back.0.to_bits(), "value {v}");
        }
    }
}
