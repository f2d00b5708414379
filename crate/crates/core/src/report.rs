//! CSV and JSON rendering. Numbers carry 12 significant digits; CSV comment
//! lines start with `#`; JSON objects use the CSV column names.

use serde_json::{json, Map, Value};

use crate::protocol::PointRun;
use crate::sweep::{FigureData, SweepRow};
use crate::DerivedRates;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format `{other}` (expected csv|json)")),
        }
    }
}

pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.11e}")
    }
}

fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(fmt_num(x).parse::<f64>().unwrap_or(x))
    } else {
        Value::String(fmt_num(x))
    }
}

/// A table of named columns with optional comment lines.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
        }
    }
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json_value(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (k, c) in self.columns.iter().zip(row) {
                    m.insert(k.clone(), c.json());
                }
                Value::Object(m)
            })
            .collect();
        json!({ "comments": self.comments, "rows": rows })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).unwrap_or_default() + "\n"
    }

    pub fn render(&self, f: Format) -> String {
        match f {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

pub const SWEEP_UNITS: &str = "units: e_n nats (natural log); eta_minus, xi_epr, nbar1, nbar2, alpha, n_cavity_t1 dimensionless; dt2_opt s";

pub fn sweep_table(value_column: &str, rows: &[SweepRow], comments: Vec<String>) -> Table {
    let columns = [value_column, "e_n", "eta_minus", "xi_epr", "nbar1", "nbar2", "alpha", "dt2_opt", "n_cavity_t1", "warnings", "error"];
    let mut comments = comments;
    comments.push(SWEEP_UNITS.into());
    Table {
        comments,
        columns: columns.iter().map(|s| s.to_string()).collect(),
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    Cell::Num(r.value),
                    Cell::Num(r.e_n),
                    Cell::Num(r.eta_minus),
                    Cell::Num(r.xi_epr),
                    Cell::Num(r.nbar1),
                    Cell::Num(r.nbar2),
                    Cell::Num(r.alpha),
                    Cell::Num(r.dt2_opt),
                    Cell::Num(r.n_cavity_t1),
                    Cell::Int(r.warnings),
                    Cell::Text(r.error.clone().unwrap_or_default()),
                ]
            })
            .collect(),
    }
}

pub fn rates_table(r: &DerivedRates) -> Table {
    let tau = std::f64::consts::TAU;
    let mut rows = Vec::new();
    let mut real = |name: &str, x: f64| rows.push(vec![Cell::Text(name.into()), Cell::Num(x), Cell::Num(x / tau)]);
    let complex = [
        ("chi1", r.chi1),
        ("chi2", r.chi2),
        ("chi1_leading", r.chi1_leading),
        ("chi1_exact", r.chi1_exact),
        ("chi2_leading", r.chi2_leading),
        ("chi2_exact", r.chi2_exact),
        ("kbar_l", r.kbar_l),
        ("kbar_b_p1", r.kbar_b_p1),
        ("kbar_b_m1", r.kbar_b_m1),
        ("kbar_b_p2", r.kbar_b_p2),
        ("kbar_b_m2", r.kbar_b_m2),
    ];
    let reals = [
        ("kappa", r.kappa),
        ("kappa_b", r.kappa_b),
        ("kappa_h", r.kappa_h),
        ("kappa_l", r.kappa_l),
        ("kappa_b_p1", r.kappa_b_p1),
        ("kappa_b_m1", r.kappa_b_m1),
        ("kappa_b_p2", r.kappa_b_p2),
        ("kappa_b_m2", r.kappa_b_m2),
        ("delta2", r.delta2),
        ("delta_prime", r.delta_prime),
        ("delta_nu", r.delta_nu),
        ("nu_prime", r.nu_prime),
        ("delta_1b", r.delta_1b),
        ("delta_2b", r.delta_2b),
        ("kappa_1s", r.kappa_1s),
        ("kappa_1d", r.kappa_1d),
        ("theta_1", r.theta_1),
        ("kappa_2s", r.kappa_2s),
        ("kappa_2d", r.kappa_2d),
        ("theta_2_re", r.theta_2.re),
        ("theta_2_im", r.theta_2.im),
    ];
    for (name, z) in complex {
        real(&format!("{name}_abs"), z.norm());
        real(&format!("{name}_re"), z.re);
        real(&format!("{name}_im"), z.im);
    }
    for (name, x) in reals {
        real(name, x);
    }
    // amplitudes κ̄ are in (rad/s)^1/2; their "hz" column divides by 2π regardless
    Table {
        comments: vec![
            format!("coupling mode: {:?}; noiseless: {}", r.chi_mode, r.noiseless),
            "rad_per_s is angular; hz = rad_per_s / 2pi. kbar_* amplitudes are in (rad/s)^(1/2)".into(),
        ],
        columns: vec!["quantity".into(), "rad_per_s".into(), "hz".into()],
        rows,
    }
}

pub fn point_table(run: &PointRun) -> Table {
    let mut columns: Vec<String> = [
        "e_n",
        "eta_minus",
        "entangled",
        "xi_epr",
        "simon_lhs",
        "simon_rhs",
        "nbar1",
        "nbar2",
        "n_cavity_t1",
        "e_n_intracavity",
        "alpha",
        "tm",
        "tm_optimal",
        "t1",
        "t",
        "t2",
        "dt2_opt",
        "warnings",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let r = &run.report;
    let mut row = vec![
        Cell::Num(r.log_negativity),
        Cell::Num(r.eta_minus),
        Cell::Int(r.entangled as usize),
        Cell::Num(r.xi_epr),
        Cell::Num(r.simon_lhs),
        Cell::Num(r.simon_rhs),
        Cell::Num(r.nbar_pulse1),
        Cell::Num(r.nbar_pulse2),
        Cell::Num(run.moments_t1.n_a),
        Cell::Num(run.intracavity_report.log_negativity),
        Cell::Num(run.window.alpha),
        Cell::Num(run.window.tm),
        Cell::Num(run.window.tm_optimal),
        Cell::Num(run.schedule.t1),
        Cell::Num(run.schedule.t),
        Cell::Num(run.schedule.t2),
        Cell::Num(run.dt2_opt.unwrap_or(f64::NAN)),
        Cell::Int(run.warnings.len()),
    ];
    for i in 0..4 {
        for j in 0..4 {
            columns.push(format!("vout_{}{}", i + 1, j + 1));
            row.push(Cell::Num(run.vout.get(i, j)));
        }
    }
    let mut comments = vec![
        "units: times s; e_n nats (natural log); vout in vacuum = 1/2 convention over (X1, P1, X2, P2)".to_string(),
        format!("coupling mode: {:?}; noiseless: {}", run.rates.chi_mode, run.rates.noiseless),
        format!(
            "|chi1| = {} Hz, |chi2| = {} Hz",
            fmt_num(run.rates.chi1.norm() / std::f64::consts::TAU),
            fmt_num(run.rates.chi2.norm() / std::f64::consts::TAU)
        ),
    ];
    for c in &run.regime {
        comments.push(format!("regime {}: ratio {} {:?}", c.name, fmt_num(c.ratio), c.verdict));
    }
    for w in &run.warnings {
        comments.push(format!("warning: {w}"));
    }
    Table { comments, columns, rows: vec![row] }
}

/// One CSV per curve, keyed by file stem.
pub fn figure_tables(fig: &FigureData) -> Vec<(String, Table)> {
    fig.curves
        .iter()
        .map(|c| {
            let comments = vec![
                format!("figure {} curve {}", fig.which, c.label),
                format!("kappa = {} Hz; noiseless = {}; policy {:?}", fmt_num(c.kappa_hz), c.noiseless, c.spec.policy),
            ];
            (format!("fig{}_{}", fig.which, c.label), sweep_table(c.spec.parameter.column_name(), &c.rows, comments))
        })
        .collect()
}

/// Per-curve maximum of the log-negativity and where it sits.
pub fn figure_summary(fig: &FigureData) -> Table {
    let rows = fig
        .curves
        .iter()
        .map(|c| {
            let best = c.rows.iter().filter(|r| r.e_n.is_finite()).max_by(|a, b| a.e_n.total_cmp(&b.e_n));
            let last = c.rows.iter().rev().find(|r| r.e_n.is_finite());
            vec![
                Cell::Text(c.label.clone()),
                Cell::Num(c.kappa_hz),
                Cell::Int(c.noiseless as usize),
                Cell::Num(best.map_or(f64::NAN, |r| r.value)),
                Cell::Num(best.map_or(f64::NAN, |r| r.e_n)),
                Cell::Num(last.map_or(f64::NAN, |r| r.e_n)),
            ]
        })
        .collect();
    Table {
        comments: vec![format!("figure {} summary; e_n in nats", fig.which)],
        columns: ["curve", "kappa_hz", "noiseless", "argmax", "e_n_max", "e_n_last"].iter().map(|s| s.to_string()).collect(),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(fmt_num(-12345.678901234), "-1.23456789012e4");
        assert_eq!(fmt_num(f64::NAN), "nan");
    }

    #[test]
    fn csv_layout() {
        let t = Table {
            comments: vec!["hello".into()],
            columns: vec!["a".into(), "b".into()],
            rows: vec![vec![Cell::Num(1.5), Cell::Text("x,y".into())]],
        };
        assert_eq!(t.to_csv(), "# hello\na,b\n1.50000000000e0,\"x,y\"\n");
        let v = t.to_json_value();
        assert_eq!(v["rows"][0]["a"], json!(1.5));
        assert_eq!(v["rows"][0]["b"], json!("x,y"));
    }
}
