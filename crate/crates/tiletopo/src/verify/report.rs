/// Lossless float formatting: Rust's shortest round-trip decimal (at most
/// 17 significant digits; parsing the string recovers the exact bits).
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Outcome of one verification check. Reports are fully determined by
/// `(parameters, seed)`: identical runs produce identical bytes, and the
/// measured statistics are value-identical for any worker count.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub check: String,
    pub seed: u64,
    /// parameter echo, in insertion order
    pub params: Vec<(String, String)>,
    /// measured statistics, in insertion order
    pub stats: Vec<(String, f64)>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(check: &str, seed: u64) -> Self {
        VerificationReport {
            check: check.to_string(),
            seed,
            params: Vec::new(),
            stats: Vec::new(),
            pass: false,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn stat(&mut self, key: &str, value: f64) -> &mut Self {
        self.stats.push((key.to_string(), value));
        self
    }

    pub fn stat_value(&self, key: &str) -> Option<f64> {
        self.stats.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    /// Machine-readable key=value lines.
    pub fn kv_lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("check={}", self.check),
            format!("seed={}", self.seed),
        ];
        for (k, v) in &self.params {
            out.push(format!("param.{k}={v}"));
        }
        for (k, v) in &self.stats {
            out.push(format!("stat.{k}={}", fmt_f64(*v)));
        }
        out.push(format!("pass={}", self.pass));
        out
    }
}

impl std::fmt::Display for VerificationReport {
    /// One line of structured text per report.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "check={} seed={}", self.check, self.seed)?;
        for (k, v) in &self.params {
            write!(f, " {k}={v}")?;
        }
        for (k, v) in &self.stats {
            write!(f, " {k}={}", fmt_f64(*v))?;
        }
        write!(f, " pass={}", self.pass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_round_trips() {
        for v in [0.1, 1.0 / 3.0, 2.0_f64.powi(-40) * 0.7, -123.456e-8] {
            let s = fmt_f64(v);
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
        assert!(fmt_f64(1.0 / 3.0).starts_with("0.333333"));
    }

    #[test]
    fn report_lines_are_stable() {
        let mut r = VerificationReport::new("demo", 7);
        r.param("depth", 4).stat("min_sep", 0.5);
        r.pass = true;
        assert_eq!(r.to_string(), "check=demo seed=7 depth=4 min_sep=0.5 pass=true");
        assert_eq!(
            r.kv_lines(),
            vec![
                "check=demo".to_string(),
                "seed=7".to_string(),
                "param.depth=4".to_string(),
                "stat.min_sep=0.5".to_string(),
                "pass=true".to_string()
            ]
        );
    }
}
