//! Ranking candidate system terms by decision coefficient.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trapezoid::Trapezoid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub candidate: String,
    pub coefficient: f64,
}

impl CandidateScore {
    pub fn new(candidate: impl Into<String>, coefficient: f64) -> Self {
        CandidateScore {
            candidate: candidate.into(),
            coefficient,
        }
    }
}

/// Outcome of ranking every candidate for one user word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionResult {
    /// Largest coefficient over all candidates.
    pub final_coefficient: f64,
    /// Every candidate attaining `final_coefficient`, in input order.
    pub winners: Vec<String>,
    /// First winner.
    pub chosen: String,
    pub scores: Vec<CandidateScore>,
}

/// `(alpha + 3 beta) / 4`, weighting the upper nucleus stone so that functions
/// sharing a nucleus midpoint can still be told apart.
///
/// The sum is compensated so decimal inputs such as `(0.3, 0.6)` land on the
/// nearest double of the exact result (`0.525`), not one ulp below it.
pub fn decision_coefficient(t: &Trapezoid) -> f64 {
    let (alpha, beta) = (t.alpha(), t.beta());
    let sum = compensated_sum(&[alpha, beta, beta, beta]);
    (sum / 4.0).clamp(alpha, beta)
}

/// Neumaier summation.
fn compensated_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0_f64;
    let mut carry = 0.0_f64;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Picks the maximum coefficient. Ties keep every argmax in `winners` and
/// choose the earliest one.
pub fn final_decision(scores: Vec<CandidateScore>) -> Result<DecisionResult> {
    let best = scores
        .iter()
        .map(|s| s.coefficient)
        .reduce(f64::max)
        .ok_or_else(|| Error::domain("no candidates"))?;
    let winners: Vec<String> = scores
        .iter()
        .filter(|s| s.coefficient == best)
        .map(|s| s.candidate.clone())
        .collect();
    let chosen = winners
        .first()
        .cloned()
        .ok_or_else(|| Error::Internal("maximum coefficient matched no candidate".into()))?;
    Ok(DecisionResult {
        final_coefficient: best,
        winners,
        chosen,
        scores,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nucleus(alpha: f64, beta: f64) -> Trapezoid {
        Trapezoid::from_parts(0.0, alpha, beta, 1.0, 1, 1).unwrap()
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(decision_coefficient(&nucleus(0.3, 0.6)), 0.525);
        assert_eq!(decision_coefficient(&nucleus(0.2, 0.7)), 0.575);
        assert_eq!(decision_coefficient(&nucleus(0.4, 0.5)), 0.475);
        assert_eq!(decision_coefficient(&nucleus(0.37, 0.37)), 0.37);
    }

    #[test]
    fn final_decision_picks_max() {
        let d = final_decision(vec![
            CandidateScore::new("ChaineofChar", 0.525),
            CandidateScore::new("Word", 0.575),
            CandidateScore::new("Character", 0.475),
        ])
        .unwrap();
        assert_eq!(d.final_coefficient, 0.575);
        assert_eq!(d.chosen, "Word");
        assert_eq!(d.winners, vec!["Word"]);
        assert_eq!(d.scores.len(), 3);
    }

    #[test]
    fn singleton_and_ties() {
        let d = final_decision(vec![CandidateScore::new("A", 0.4)]).unwrap();
        assert_eq!((d.final_coefficient, d.chosen.as_str()), (0.4, "A"));

        let d = final_decision(vec![CandidateScore::new("A", 0.5), CandidateScore::new("B", 0.5)]).unwrap();
        assert_eq!(d.winners, vec!["A", "B"]);
        assert_eq!(d.chosen, "A");
    }

    #[test]
    fn empty_is_domain_error() {
        let err = final_decision(Vec::new()).unwrap_err();
        assert!(matches!(err, Error::Domain(ref m) if m == "no candidates"));
    }
}
