//! Built-in test problems, all over `[-10, 10]^p`.
//!
//! Sign constraints such as `x1 >= 0` are kept as inequalities `-x1 <= 0`
//! rather than shrinking the box, so they show up in constraint reports.

use std::fmt;
use std::str::FromStr;

use crate::applications::{
    brouwer_problem, scalarize_sum, threshold_problem, SelfMap, ThresholdSpec,
};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::problem::{BoxDomain, Problem};
use crate::source::{parse_problem, parse_self_map};

pub const BOX_LOWER: f64 = -10.0;
pub const BOX_UPPER: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExampleId {
    Ex5_1,
    Ex5_2,
    Ex5_3,
    Ex5_4,
    Ex5_45,
    Ex5_5,
    Ex5_6,
    Ex5_8,
    Ex5_9,
}

impl ExampleId {
    pub const ALL: [ExampleId; 9] = [
        ExampleId::Ex5_1,
        ExampleId::Ex5_2,
        ExampleId::Ex5_3,
        ExampleId::Ex5_4,
        ExampleId::Ex5_45,
        ExampleId::Ex5_5,
        ExampleId::Ex5_6,
        ExampleId::Ex5_8,
        ExampleId::Ex5_9,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            ExampleId::Ex5_1 => "5.1",
            ExampleId::Ex5_2 => "5.2",
            ExampleId::Ex5_3 => "5.3",
            ExampleId::Ex5_4 => "5.4",
            ExampleId::Ex5_45 => "5.45",
            ExampleId::Ex5_5 => "5.5",
            ExampleId::Ex5_6 => "5.6",
            ExampleId::Ex5_8 => "5.8",
            ExampleId::Ex5_9 => "5.9",
        }
    }

    pub fn dim(self) -> usize {
        match self {
            ExampleId::Ex5_1 | ExampleId::Ex5_2 | ExampleId::Ex5_8 | ExampleId::Ex5_9 => 2,
            ExampleId::Ex5_3 | ExampleId::Ex5_4 | ExampleId::Ex5_45 => 3,
            ExampleId::Ex5_5 | ExampleId::Ex5_6 => 5,
        }
    }

    /// Fixed start for pattern search and descent: `(1, ..., 1)`, or the
    /// origin for the fixed-point examples.
    pub fn start_point(self) -> Vec<f64> {
        match self {
            ExampleId::Ex5_5 | ExampleId::Ex5_6 => vec![0.0; self.dim()],
            _ => vec![1.0; self.dim()],
        }
    }

    /// The self-map behind a fixed-point example.
    pub fn self_map(self) -> Option<SelfMap> {
        let src = match self {
            ExampleId::Ex5_5 => EX5_5_MAP,
            ExampleId::Ex5_6 => EX5_6_MAP,
            _ => return None,
        };
        Some(parse_self_map(src).expect("built-in map parses"))
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExampleId::ALL
            .into_iter()
            .find(|id| id.tag() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown example {s:?}")))
    }
}

const EX5_1: &str = "\
var x1 in [-10, 10]
var x2 in [-10, 10]
minimize x1^2 + x1*x2 + x2^2 - 5*x2
eq x1 + x2 - 1
le -x1
le -x2
";

const EX5_2: &str = "\
var x1 in [-10, 10]
var x2 in [-10, 10]
minimize -(x1 - 3)^6 - (x2 - 4)^6
le x1^2 + x2^2 <= 25
le x1 + x2 >= 7
le -x1
le -x2
";

const EX5_3: &str = "\
var x1 in [-10, 10]
var x2 in [-10, 10]
var x3 in [-10, 10]
minimize 1/(x1*x2*x3) + x1*x2
le 0.5*x1*x3 + 0.25*x1*x2 <= 1
le -x1
le -x2
le -x3
";

const EX5_4: &str = "\
var x1 in [-10, 10]
var x2 in [-10, 10]
var x3 in [-10, 10]
minimize 1/(x1*x2*x3) + x1*x2 + x3^7
le 0.5*x1*x3 + 0.25*x1*x2 <= 1
le -x1
le -x2
le -x3
";

const EX5_45: &str = "\
var x1 in [-10, 10]
var x2 in [-10, 10]
var x3 in [-10, 10]
minimize 4*x1 + 10*x2 + 15*x3
eq x1 + 2*x2 + 3*x3 = 3
eq 3*x1 + x2 + 2*x3 = 7.5
le -x1
le -x2
le -x3
";

const EX5_5_MAP: &str = "\
var x1 in [-10, 10]
var x2 in [-10, 10]
var x3 in [-10, 10]
var x4 in [-10, 10]
var x5 in [-10, 10]
map 0.5*cos(x1 + x2 - x3^4*x5)*x4
map 0.1*(abs(x1*x2 + x3 - x5) + x4^2)
map (x1 + x3*x4 - (x2 + x5)^2)/30
map (x1 - x2^2 + x3 - x5^2)/12
map (x1 + x2 - (x3 + x5 + x4)^2)/40
";

const EX5_6_MAP: &str = "\
var x1 in [-10, 10]
var x2 in [-10, 10]
var x3 in [-10, 10]
var x4 in [-10, 10]
var x5 in [-10, 10]
map 0.001*((x1 + 3)^2 + (x2 - 2)^4 + x3^2 + x4^2 + x5)
map 0.01*(x1 + (x2 + 5)^2 + x3 + x4 + (x5 + 2))
map 0.001*(x1^4 + (x4 - 3)^2 + (x5 + 2)^2)
map 0.001*((x3 - 3)^4 + x5^2 + x1^4) - 1
map 0.01*(x1^2 + x2 + x3 - (x5 - 1)^2)
";

const EX5_8_SUMMANDS: [&str; 4] = [
    "x1^2 - 5*x1 + 7*x2",
    "-x1^2 - x2^2",
    "(x1 - 1)^2",
    "(x2 - 5)^2",
];
const EX5_8_EQ: [&str; 2] = ["3*x1 + 4*x2 - 6", "x1 + x2 - 2"];
const EX5_8_LE: [&str; 3] = ["2*x1 + 3*x2 - 6", "-x1", "-x2"];

const EX5_9_CAPPED: [(&str, f64); 2] = [
    ("4*x1^2 + x2^2 - x1 - 2", 1.0),
    ("exp(-x1) - x1 - 2*x2", 1.0),
];
const EX5_9_LE: [&str; 4] = [
    "2*x1 + x2 - 1",
    "x1^2 - 1",
    "sqrt(x1^2 + x2^2) - x1^3 - 2",
    "-x1^3 + 0.5*(-x2 - x2^3 + abs(x2^3 - x2))",
];

fn exprs(sources: &[&str], p: usize) -> Vec<Expr> {
    sources
        .iter()
        .map(|s| Expr::parse(s, p).expect("built-in expression parses"))
        .collect()
}

fn cube(p: usize) -> BoxDomain {
    BoxDomain::cube(p, BOX_LOWER, BOX_UPPER).expect("valid cube")
}

/// The built-in problem for `id`.
pub fn builtin_example(id: ExampleId) -> Problem {
    let parsed = |src: &str| parse_problem(src).expect("built-in problem parses");
    match id {
        ExampleId::Ex5_1 => parsed(EX5_1),
        ExampleId::Ex5_2 => parsed(EX5_2),
        ExampleId::Ex5_3 => parsed(EX5_3),
        ExampleId::Ex5_4 => parsed(EX5_4),
        ExampleId::Ex5_45 => parsed(EX5_45),
        ExampleId::Ex5_5 | ExampleId::Ex5_6 => {
            brouwer_problem(&id.self_map().expect("fixed-point example"))
        }
        ExampleId::Ex5_8 => scalarize_sum(
            exprs(&EX5_8_SUMMANDS, 2),
            exprs(&EX5_8_EQ, 2),
            exprs(&EX5_8_LE, 2),
            cube(2),
        )
        .expect("valid sum scalarization"),
        ExampleId::Ex5_9 => {
            let (objectives, caps): (Vec<&str>, Vec<f64>) = EX5_9_CAPPED.into_iter().unzip();
            let spec = ThresholdSpec::new(exprs(&objectives, 2), caps, cube(2))
                .expect("matching caps")
                .with_base_constraints(Vec::new(), exprs(&EX5_9_LE, 2));
            threshold_problem(&spec).expect("valid threshold problem")
        }
    }
}

/// Problem-file text of a built-in example.
pub fn builtin_source(id: ExampleId) -> String {
    builtin_example(id).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(id: ExampleId) -> (usize, usize, usize) {
        let p = builtin_example(id);
        (p.dim(), p.equalities().len(), p.inequalities().len())
    }

    #[test]
    fn shapes() {
        assert_eq!(shape(ExampleId::Ex5_1), (2, 1, 2));
        assert_eq!(shape(ExampleId::Ex5_2), (2, 0, 4));
        assert_eq!(shape(ExampleId::Ex5_3), (3, 0, 4));
        assert_eq!(shape(ExampleId::Ex5_4), (3, 0, 4));
        assert_eq!(shape(ExampleId::Ex5_45), (3, 2, 3));
        assert_eq!(shape(ExampleId::Ex5_5), (5, 5, 0));
        assert_eq!(shape(ExampleId::Ex5_6), (5, 5, 0));
        assert_eq!(shape(ExampleId::Ex5_8), (2, 2, 3));
        assert_eq!(shape(ExampleId::Ex5_9), (2, 0, 6));
    }

    #[test]
    fn every_example_matches_its_dimension_and_box() {
        for id in ExampleId::ALL {
            let p = builtin_example(id);
            assert_eq!(p.dim(), id.dim(), "{id}");
            assert_eq!(id.start_point().len(), id.dim());
            assert!(p.domain().lower().iter().all(|&l| l == BOX_LOWER));
            assert!(p.domain().upper().iter().all(|&u| u == BOX_UPPER));
        }
    }

    #[test]
    fn tags_round_trip() {
        for id in ExampleId::ALL {
            assert_eq!(id.tag().parse::<ExampleId>().unwrap(), id);
        }
        assert!("5.7".parse::<ExampleId>().is_err());
    }

    #[test]
    fn text_form_reparses() {
        for id in ExampleId::ALL {
            let src = builtin_source(id);
            assert_eq!(parse_problem(&src).unwrap(), builtin_example(id), "{id}");
        }
    }

    #[test]
    fn known_values() {
        let ex51 = builtin_example(ExampleId::Ex5_1);
        assert_eq!(ex51.objective_value(&[0.0, 1.0]).unwrap(), -4.0);
        let ex58 = builtin_example(ExampleId::Ex5_8);
        assert_eq!(ex58.objective_value(&[2.0, 0.0]).unwrap(), 16.0);
        assert_eq!(ex58.feasibility_measure(&[2.0, 0.0]).unwrap(), 0.0);
        let ex545 = builtin_example(ExampleId::Ex5_45);
        // 3 * 2.4 is inexact in binary, so only round-off remains
        let report = ex545.constraint_report(&[2.4, 0.3, 0.0]).unwrap();
        assert!(report.max_eq_residual.unwrap() < 1e-12);
        assert_eq!(report.max_ineq_value, Some(0.0));
    }
}
