//! Result rows and their CSV serialisation.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use ris_v2v::{MetricEstimate, Scheme, User};

pub const CSV_HEADER: &str =
    "param,value,scheme,user,metric,analytic,mc_mean,mc_ci_low,mc_ci_high,trials,seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Op,
    Ec,
    Ee,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Op, Metric::Ec, Metric::Ee];

    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Op => "op",
            Metric::Ec => "ec",
            Metric::Ee => "ee",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "op" => Ok(Metric::Op),
            "ec" => Ok(Metric::Ec),
            "ee" => Ok(Metric::Ee),
            other => Err(format!("unknown metric {other:?} (expected op, ec or ee)")),
        }
    }
}

/// One evaluated metric at one scenario. For `ee` the value belongs to the
/// scheme; it is repeated on the row of each user.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub param: &'static str,
    pub value: f64,
    pub scheme: Scheme,
    pub user: User,
    pub metric: Metric,
    pub analytic: f64,
    pub mc: Option<MetricEstimate>,
    pub trials: usize,
    pub seed: u64,
}

impl ResultRow {
    pub fn write_csv(&self, out: &mut String) {
        let _ = write!(
            out,
            "{},{},{},{},{},{},",
            self.param, self.value, self.scheme, self.user, self.metric, self.analytic
        );
        match &self.mc {
            Some(mc) => {
                let _ = write!(out, "{},{},{}", mc.value, mc.ci_low, mc.ci_high);
            }
            None => out.push_str(",,"),
        }
        let _ = writeln!(out, ",{},{}", self.trials, self.seed);
    }
}

/// Header plus one line per row. Numbers use Rust's shortest round-trip
/// decimal formatting.
pub fn to_csv(rows: &[ResultRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        row.write_csv(&mut out);
    }
    out
}
