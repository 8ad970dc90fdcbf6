use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::verify::fmt_f64;

/// A parsed cloud file: flat points plus the declared dimension and
/// level.
#[derive(Clone, Debug, PartialEq)]
pub struct CloudData {
    pub dim: usize,
    pub level: usize,
    pub points: Vec<f64>,
}

/// Writes a point cloud: the identifying header line, comment lines
/// echoing the configuration, then one comma-separated point per line
/// with '.'-decimal shortest round-trip numbers.
pub fn write_cloud<W: Write>(
    out: &mut W,
    points: &[f64],
    dim: usize,
    level: usize,
    echo: &[(String, String)],
) -> Result<()> {
    writeln!(out, "# tiletopo cloud d={dim} n={level}")?;
    for (k, v) in echo {
        writeln!(out, "# {k}={v}")?;
    }
    let mut line = String::new();
    for p in points.chunks(dim) {
        line.clear();
        for (j, x) in p.iter().enumerate() {
            if j > 0 {
                line.push(',');
            }
            line.push_str(&fmt_f64(*x));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Reads a cloud written by [`write_cloud`]. Comment lines other than
/// the header are ignored; data errors carry their line number.
pub fn read_cloud<R: BufRead>(input: R) -> Result<CloudData> {
    let mut dim = 0usize;
    let mut level = 0usize;
    let mut points = Vec::new();
    let mut saw_header = false;
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(spec) = rest.strip_prefix("tiletopo cloud") {
                for field in spec.split_whitespace() {
                    if let Some(v) = field.strip_prefix("d=") {
                        dim = v.parse().map_err(|_| Error::Config {
                            line: lineno,
                            message: format!("bad dimension field {field:?}"),
                        })?;
                    } else if let Some(v) = field.strip_prefix("n=") {
                        level = v.parse().map_err(|_| Error::Config {
                            line: lineno,
                            message: format!("bad level field {field:?}"),
                        })?;
                    }
                }
                saw_header = true;
            }
            continue;
        }
        if !saw_header {
            return Err(Error::Config {
                line: lineno,
                message: "missing '# tiletopo cloud' header".into(),
            });
        }
        let mut count = 0usize;
        for piece in trimmed.split(',') {
            let x: f64 = piece.trim().parse().map_err(|_| Error::Config {
                line: lineno,
                message: format!("bad coordinate {piece:?}"),
            })?;
            points.push(x);
            count += 1;
        }
        if count != dim {
            return Err(Error::Config {
                line: lineno,
                message: format!("expected {dim} coordinates, found {count}"),
            });
        }
    }
    if !saw_header {
        return Err(Error::Config {
            line: 1,
            message: "missing '# tiletopo cloud' header".into(),
        });
    }
    Ok(CloudData { dim, level, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_identical() {
        let points = vec![0.1, 2.0 / 3.0, -1.25e-7, 4.0, 0.0, 9.5];
        let echo = vec![("pair.p".to_string(), "3 3".to_string())];
        let mut first = Vec::new();
        write_cloud(&mut first, &points, 2, 5, &echo).unwrap();
        let parsed = read_cloud(&first[..]).unwrap();
        assert_eq!(parsed.dim, 2);
        assert_eq!(parsed.level, 5);
        assert_eq!(parsed.points, points);
        let mut second = Vec::new();
        write_cloud(&mut second, &parsed.points, parsed.dim, parsed.level, &echo).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn bad_lines_carry_numbers() {
        let text = "# tiletopo cloud d=2 n=1\n0.5,x\n";
        match read_cloud(text.as_bytes()) {
            Err(Error::Config { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(read_cloud("1,2\n".as_bytes()).is_err());
    }
}
