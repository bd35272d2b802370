//! Value lists given on the command line: `0.5,1,2` or `lo:hi:step`.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct GridError(pub String);

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for GridError {}

/// Upper bound on the length of a `lo:hi:step` range.
const MAX_POINTS: usize = 1_000_000;

fn number(s: &str) -> Result<f64, GridError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| GridError(format!("not a number: {s:?}")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(GridError(format!("not a finite number: {s:?}")))
    }
}

/// Parses a comma-separated list or an inclusive `lo:hi:step` range. Range
/// points are computed as `lo + j * step` so no rounding drift accumulates.
pub fn parse_values(s: &str) -> Result<Vec<f64>, GridError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(GridError("empty value list".into()));
    }
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, step] = parts[..] else {
            return Err(GridError(format!("range must be lo:hi:step, got {s:?}")));
        };
        let (lo, hi, step) = (number(lo)?, number(hi)?, number(step)?);
        if !(step > 0.0) || hi < lo {
            return Err(GridError(format!("range {s:?} needs lo <= hi and step > 0")));
        }
        // tolerate hi landing a hair off the lattice
        let count = ((hi - lo) / step * (1.0 + 1e-12) + 1e-9).floor() as usize + 1;
        if count > MAX_POINTS {
            return Err(GridError(format!("range {s:?} has more than {MAX_POINTS} points")));
        }
        return Ok((0..count).map(|j| lo + j as f64 * step).collect());
    }
    s.split(',').map(number).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_and_ranges() {
        assert_eq!(parse_values("0.5, 1,2").unwrap(), vec![0.5, 1.0, 2.0]);
        let r = parse_values("-2:2:0.5").unwrap();
        assert_eq!(r.len(), 9);
        assert_eq!(r[8], 2.0);
        assert_eq!(parse_values("0:0.3:0.1").unwrap().len(), 4);
        assert_eq!(parse_values("1:1:1").unwrap(), vec![1.0]);
    }

    #[test]
    fn malformed_input_is_rejected() {
        for bad in [
            "",
            "1,,2",
            "a",
            "0:1",
            "1:0:0.1",
            "0:1:0",
            "0:1:-1",
            "nan",
            "0:1e12:1e-6",
        ] {
            assert!(parse_values(bad).is_err(), "{bad}");
        }
    }
}
