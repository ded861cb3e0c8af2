//! Self-check against the two worked examples: a 0.7 rating adjusted by 0.5,
//! and three candidate nuclei ranked by decision coefficient.

use std::fmt;
use std::io::{self, Write};

use fuzzylex_core::{decision_coefficient, final_decision, CandidateScore, DecisionResult, Rating, Trapezoid};

pub const TOLERANCE: f64 = 1e-12;

/// The formulas under test. Swappable so a corrupted formula can be shown to fail.
#[derive(Clone, Copy)]
pub struct Formulas {
    pub construct: fn(Rating) -> Trapezoid,
    pub adjust: fn(&Trapezoid, Rating) -> Trapezoid,
    pub coefficient: fn(&Trapezoid) -> f64,
    pub decide: fn(Vec<CandidateScore>) -> fuzzylex_core::Result<DecisionResult>,
}

impl Default for Formulas {
    fn default() -> Self {
        Formulas {
            construct: Trapezoid::construct,
            adjust: Trapezoid::adjust,
            coefficient: decision_coefficient,
            decide: final_decision,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(x) => write!(f, "{x}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub label: String,
    pub expected: Value,
    pub computed: Value,
}

impl Check {
    fn number(label: &str, expected: f64, computed: f64) -> Self {
        Check {
            label: label.to_owned(),
            expected: Value::Number(expected),
            computed: Value::Number(computed),
        }
    }

    fn text(label: &str, expected: &str, computed: &str) -> Self {
        Check {
            label: label.to_owned(),
            expected: Value::Text(expected.into()),
            computed: Value::Text(computed.into()),
        }
    }

    pub fn passed(&self) -> bool {
        match (&self.expected, &self.computed) {
            (Value::Number(e), Value::Number(c)) => (e - c).abs() <= TOLERANCE,
            (e, c) => e == c,
        }
    }
}

/// Candidate system objects for the user word "Substantive" with their nuclei.
pub const SUBSTANTIVE_NUCLEI: [(&str, f64, f64); 3] =
    [("ChaineofChar", 0.3, 0.6), ("Word", 0.2, 0.7), ("Character", 0.4, 0.5)];

pub fn run(formulas: &Formulas) -> Vec<Check> {
    let mut checks = Vec::new();

    // Example 1: first user rates 0.7, second user 0.5.
    let first = (formulas.construct)(Rating::new(0.7).expect("valid degree"));
    checks.push(Check::number("example 1 construct gamma", 0.4, first.gamma()));
    checks.push(Check::number("example 1 construct alpha", 0.7, first.alpha()));
    checks.push(Check::number("example 1 construct beta", 0.7, first.beta()));
    checks.push(Check::number("example 1 construct delta", 1.0, first.delta()));

    let second = (formulas.adjust)(&first, Rating::new(0.5).expect("valid degree"));
    checks.push(Check::number("example 1 adjusted alpha", 0.6, second.alpha()));
    checks.push(Check::number("example 1 adjusted gamma", 0.45, second.gamma()));
    checks.push(Check::number("example 1 adjusted beta", 0.7, second.beta()));
    checks.push(Check::number("example 1 adjusted delta", 1.0, second.delta()));
    checks.push(Check::number(
        "example 1 left observations",
        2.0,
        second.left_count() as f64,
    ));
    checks.push(Check::number(
        "example 1 right observations",
        1.0,
        second.right_count() as f64,
    ));

    // Example 2: rank the three candidates.
    let expected_dc = [0.525, 0.575, 0.475];
    let mut scores = Vec::new();
    for ((name, alpha, beta), expected) in SUBSTANTIVE_NUCLEI.iter().zip(expected_dc) {
        let t = Trapezoid::from_parts(0.0, *alpha, *beta, 1.0, 1, 1).expect("valid nucleus");
        let dc = (formulas.coefficient)(&t);
        checks.push(Check::number(&format!("example 2 D_c({name})"), expected, dc));
        scores.push(CandidateScore::new(*name, dc));
    }
    match (formulas.decide)(scores) {
        Ok(decision) => {
            checks.push(Check::number("example 2 D_c^f", 0.575, decision.final_coefficient));
            checks.push(Check::text(
                "example 2 chosen (nucleus 0.2..0.7)",
                "Word",
                &decision.chosen,
            ));
        }
        Err(e) => checks.push(Check::text("example 2 decision", "a decision", &format!("error: {e}"))),
    }
    checks
}

/// Prints one line per check. Returns whether all passed.
pub fn report(checks: &[Check], out: &mut impl Write) -> io::Result<bool> {
    let mut failed = 0;
    for c in checks {
        let verdict = if c.passed() { "ok  " } else { "FAIL" };
        writeln!(
            out,
            "{verdict} {:<40} expected {:<8} computed {}",
            c.label,
            c.expected.to_string(),
            c.computed
        )?;
        if !c.passed() {
            failed += 1;
        }
    }
    if failed == 0 {
        writeln!(out, "all {} checks passed", checks.len())?;
    } else {
        writeln!(out, "{failed} of {} checks failed", checks.len())?;
    }
    Ok(failed == 0)
}
