//! Number formatting and row emission.

use std::io::Write;

use serde::Serialize;

pub const LN_2: f64 = std::f64::consts::LN_2;

/// Nine significant digits, fixed-point for moderate magnitudes.
pub fn sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("integer exponent");
    if (-5..15).contains(&exp) {
        format!("{:.*}", (8 - exp).max(0) as usize, x)
    } else {
        sci
    }
}

/// Six decimals without a negative zero.
pub fn fixed6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s.trim_start_matches('-').bytes().all(|b| b == b'0' || b == b'.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

/// Converts bits to the requested output unit.
#[derive(Debug, Clone, Copy)]
pub struct Units {
    pub nats: bool,
}

impl Units {
    pub fn info(self, bits: f64) -> f64 {
        if self.nats {
            bits * LN_2
        } else {
            bits
        }
    }
}

/// Writes rows as CSV (with header) or as one JSON object per line.
pub fn emit<W: Write, R: Serialize>(
    out: &mut W,
    json: bool,
    header: &[&str],
    rows: &[(Vec<String>, R)],
) -> std::io::Result<()> {
    if json {
        for (_, row) in rows {
            serde_json::to_writer(&mut *out, row)?;
            out.write_all(b"\n")?;
        }
        return Ok(());
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for (fields, _) in rows {
        w.write_record(fields)?;
    }
    w.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(sig9(1.0), "1.00000000");
        assert_eq!(sig9(0.531004406410719), "0.531004406");
        assert_eq!(sig9(123.456789012), "123.456789");
        assert_eq!(sig9(-0.0012345678912), "-0.00123456789");
        assert_eq!(sig9(1e-9), "1.00000000e-9");
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(f64::INFINITY), "inf");
    }

    #[test]
    fn six_decimals() {
        assert_eq!(fixed6(1.0), "1.000000");
        assert_eq!(fixed6(-1e-17), "0.000000");
        assert_eq!(fixed6(-0.25), "-0.250000");
    }
}
