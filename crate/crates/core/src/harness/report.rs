use std::fmt::Write;
use std::str::FromStr;

use crate::error::Error;
use crate::solvers::SolverKind;

use super::bench::BenchRow;

pub const CSV_HEADER: &str = "example,solver,seed,initial_point,deformed_value,raw_value,point,max_eq_residual,max_ineq_value,wall_time_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Markdown,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::InvalidInput(format!("unknown report format {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    /// Leave the wall-time cells empty so reports of equal runs compare equal.
    pub include_timing: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            include_timing: true,
        }
    }
}

/// Renders rows as markdown tables (one per solver) or as CSV.
pub fn emit_report(rows: &[BenchRow], format: ReportFormat) -> String {
    emit_report_with(rows, format, ReportOptions::default())
}

pub fn emit_report_with(rows: &[BenchRow], format: ReportFormat, options: ReportOptions) -> String {
    match format {
        ReportFormat::Markdown => markdown(rows, options),
        ReportFormat::Csv => csv(rows, options),
    }
}

/// `%g`-style formatting with six significant digits.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci
        .split_once('e')
        .expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `(a;b;c)`.
pub fn format_vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|&x| format_sig(x)).collect();
    format!("({})", parts.join(";"))
}

fn opt(v: Option<f64>, absent: &str) -> String {
    v.map_or_else(|| absent.to_string(), format_sig)
}

fn wall_ms(row: &BenchRow, options: ReportOptions) -> String {
    if options.include_timing {
        format_sig(row.wall_time.as_secs_f64() * 1e3)
    } else {
        String::new()
    }
}

fn csv(rows: &[BenchRow], options: ReportOptions) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let seed = row.seed.map_or(String::new(), |s| s.to_string());
        let initial = row
            .initial_point
            .as_deref()
            .map_or(String::new(), format_vector);
        let (deformed, raw, point, eq, ineq) = match &row.outcome {
            Ok(s) => (
                format_sig(s.deformed_value),
                format_sig(s.raw_value),
                format_vector(&s.point),
                opt(s.report.max_eq_residual, ""),
                opt(s.report.max_ineq_value, ""),
            ),
            Err(_) => Default::default(),
        };
        let _ = writeln!(
            out,
            "{},{},{seed},{initial},{deformed},{raw},{point},{eq},{ineq},{}",
            row.example,
            row.solver,
            wall_ms(row, options)
        );
    }
    out
}

fn markdown(rows: &[BenchRow], options: ReportOptions) -> String {
    let mut solvers: Vec<SolverKind> = Vec::new();
    for row in rows {
        if !solvers.contains(&row.solver) {
            solvers.push(row.solver);
        }
    }
    let mut out = String::new();
    for (n, solver) in solvers.into_iter().enumerate() {
        if n > 0 {
            out.push('\n');
        }
        let group: Vec<&BenchRow> = rows.iter().filter(|r| r.solver == solver).collect();
        let seeded = group.iter().any(|r| r.seed.is_some());
        let _ = writeln!(out, "### {}\n", title(solver));
        let mut header = String::from("| example |");
        if seeded {
            header.push_str(" seed |");
        }
        // pipes inside a cell must be escaped or they split it
        header.push_str(
            r" initial point | value | x | max\|g_i(x)\| | max h_j(x) | wall time (ms) |",
        );
        let columns = header.matches('|').count() - header.matches(r"\|").count() - 1;
        let _ = writeln!(out, "{header}");
        let _ = writeln!(out, "|{}", "---|".repeat(columns));
        for row in group {
            let mut line = format!("| {} |", row.example);
            if seeded {
                let _ = write!(
                    line,
                    " {} |",
                    row.seed.map_or("-".into(), |s| s.to_string())
                );
            }
            let initial = row
                .initial_point
                .as_deref()
                .map_or("-".into(), format_vector);
            match &row.outcome {
                Ok(s) => {
                    let _ = write!(
                        line,
                        " {initial} | {} | {} | {} | {} |",
                        format_sig(s.raw_value),
                        format_vector(&s.point),
                        opt(s.report.max_eq_residual, "-"),
                        opt(s.report.max_ineq_value, "-"),
                    );
                }
                Err(e) => {
                    let _ = write!(
                        line,
                        " {initial} | error: {} | - | - | - |",
                        e.replace('|', "/")
                    );
                }
            }
            let ms = wall_ms(row, options);
            let _ = write!(line, " {} |", if ms.is_empty() { "-" } else { &ms });
            let _ = writeln!(out, "{line}");
        }
    }
    out
}

fn title(solver: SolverKind) -> &'static str {
    match solver {
        SolverKind::Pso => "Particle swarm",
        SolverKind::Pattern => "Pattern search",
        SolverKind::Descent => "Projected descent",
    }
}
