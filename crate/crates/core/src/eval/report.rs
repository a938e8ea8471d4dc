use std::fmt;

use super::{Evaluation, Score};

fn pct(x: f64) -> String {
    format!("{:.1}%", 100.0 * x)
}

fn row(f: &mut fmt::Formatter<'_>, name: &str, s: &Score) -> fmt::Result {
    writeln!(
        f,
        "{:<12} {:>6} {:>6} {:>6} {:>8} {:>8} {:>6.1}",
        name,
        s.key_total,
        s.response_total,
        s.matches,
        pct(s.recall()),
        pct(s.precision()),
        100.0 * s.fscore()
    )
}

/// Fixed-layout text report: overall line, per-label rows, then the share of
/// key relations by length.
impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = &self.overall;
        writeln!(
            f,
            "R={} P={} F={:.1}",
            pct(o.recall()),
            pct(o.precision()),
            100.0 * o.fscore()
        )?;
        writeln!(
            f,
            "{:<12} {:>6} {:>6} {:>6} {:>8} {:>8} {:>6}",
            "label", "key", "resp", "match", "recall", "prec", "f"
        )?;
        for (name, s) in &self.per_label {
            row(f, name, s)?;
        }
        row(f, "total", o)?;
        writeln!(f)?;
        writeln!(
            f,
            "{:<12} {:>6} {:>6} {:>6} {:>6}",
            "length", "<=1", "<=2", "<=3", ">3"
        )?;
        let [a, b, c, d] = self.distance.fractions();
        writeln!(
            f,
            "{:<12} {:>6} {:>6} {:>6} {:>6}",
            "key",
            pct(a),
            pct(b),
            pct(c),
            pct(d)
        )
    }
}
