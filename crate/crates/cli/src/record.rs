//! Result records and their text rendering.

use serde::Serialize;

use dual_perron::{DualNumber, PerronResult};

/// One solved instance: eigenvalue, residual, iteration count, flag and wall time.
#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub source: String,
    pub n: usize,
    pub lambda_s: Option<f64>,
    pub lambda_d: Option<f64>,
    pub residual_frn: Option<f64>,
    pub iterations: usize,
    pub flag: u8,
    pub wall_time_seconds: f64,
}

impl RunRecord {
    pub fn new(source: String, n: usize, r: &PerronResult, wall_time_seconds: f64) -> Self {
        RunRecord {
            source,
            n,
            lambda_s: r.lambda.map(|l| l.standard),
            lambda_d: r.lambda.map(|l| l.dual),
            residual_frn: r.residual,
            iterations: r.iterations,
            flag: r.flag.code(),
            wall_time_seconds,
        }
    }

    pub fn eig(&self) -> String {
        match (self.lambda_s, self.lambda_d) {
            (Some(s), Some(d)) => format_eig(DualNumber { standard: s, dual: d }),
            _ => "none".into(),
        }
    }

    pub fn render(&self) -> String {
        let residual = self.residual_frn.map_or_else(|| "none".into(), |r| format!("{r:.2e}"));
        format!(
            "source      {}\nn           {}\nEig         {}\nresidual    {}\niterations  {}\nflag        {}\nwall time   {:.2e} s\n",
            self.source,
            self.n,
            self.eig(),
            residual,
            self.iterations,
            self.flag,
            self.wall_time_seconds
        )
    }
}

/// Two-decimal rendering `s+dε`, switching the standard part to scientific
/// notation from 1e4 upwards.
pub fn format_eig(l: DualNumber) -> String {
    let s = if l.standard.abs() >= 1e4 { format!("{:.2e}", l.standard) } else { format!("{:.2}", l.standard) };
    let sign = if l.dual.is_sign_negative() { '-' } else { '+' };
    format!("{s}{sign}{:.2}ε", l.dual.abs())
}

/// One row of the `table` command; random families are averaged over seeds.
#[derive(Clone, Debug, Serialize)]
pub struct TableRow {
    pub example: String,
    pub n: usize,
    pub trials: usize,
    pub lambda_s: f64,
    pub lambda_d: f64,
    pub residual_frn: f64,
    pub iterations: f64,
    pub wall_time_seconds: f64,
}

impl TableRow {
    pub fn average(example: String, n: usize, records: &[RunRecord]) -> Self {
        let k = records.len() as f64;
        let mean = |f: &dyn Fn(&RunRecord) -> f64| records.iter().map(f).sum::<f64>() / k;
        TableRow {
            example,
            n,
            trials: records.len(),
            lambda_s: mean(&|r| r.lambda_s.unwrap_or(f64::NAN)),
            lambda_d: mean(&|r| r.lambda_d.unwrap_or(f64::NAN)),
            residual_frn: mean(&|r| r.residual_frn.unwrap_or(f64::NAN)),
            iterations: mean(&|r| r.iterations as f64),
            wall_time_seconds: mean(&|r| r.wall_time_seconds),
        }
    }
}

pub fn render_table(rows: &[TableRow]) -> String {
    let mut out = format!("{:<6}{:>7}  {:<18}{:>12}{:>10}{:>12}\n", "Ex.", "n", "Eig", "residual", "iter", "time (s)");
    for r in rows {
        let eig = format_eig(DualNumber { standard: r.lambda_s, dual: r.lambda_d });
        let iter = if r.trials > 1 { format!("{:.1}", r.iterations) } else { format!("{}", r.iterations) };
        out.push_str(&format!(
            "{:<6}{:>7}  {:<18}{:>12.2e}{:>10}{:>12.2e}\n",
            r.example, r.n, eig, r.residual_frn, iter, r.wall_time_seconds
        ));
    }
    out
}
