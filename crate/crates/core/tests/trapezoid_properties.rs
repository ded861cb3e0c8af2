use fuzzylex_core::{decision_coefficient, final_decision, CandidateScore, Rating, Trapezoid};
use proptest::prelude::*;

fn r(v: f64) -> Rating {
    Rating::new(v).unwrap()
}

/// Per-side rating lists kept apart from `Trapezoid`. Each stone is the plain
/// mean of its constructed value and the ratings routed to its side.
struct SideLog {
    alpha0: f64,
    gamma0: f64,
    beta0: f64,
    delta0: f64,
    left: Vec<f64>,
    right: Vec<f64>,
}

impl SideLog {
    fn new(theta0: f64) -> Self {
        let (gamma0, delta0) = if theta0 < 0.5 {
            (0.0, 2.0 * theta0)
        } else {
            (2.0 * theta0 - 1.0, 1.0)
        };
        SideLog {
            alpha0: theta0,
            gamma0,
            beta0: theta0,
            delta0,
            left: vec![],
            right: vec![],
        }
    }

    fn mean_with(start: f64, xs: &[f64]) -> f64 {
        (start + xs.iter().sum::<f64>()) / (xs.len() + 1) as f64
    }

    fn stones(&self) -> [f64; 4] {
        [
            Self::mean_with(self.gamma0, &self.left),
            Self::mean_with(self.alpha0, &self.left),
            Self::mean_with(self.beta0, &self.right),
            Self::mean_with(self.delta0, &self.right),
        ]
    }

    fn push(&mut self, theta: f64) {
        let [_, alpha, beta, _] = self.stones();
        if theta <= (alpha + beta) / 2.0 {
            self.left.push(theta);
        } else {
            self.right.push(theta);
        }
    }
}

fn ordered(t: &Trapezoid) -> bool {
    let [g, a, b, d] = t.stones();
    0.0 <= g && g <= a && a <= b && b <= d && d <= 1.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn adjust_keeps_order_and_touches_one_side(
        theta0 in 0.0..=1.0f64,
        ratings in prop::collection::vec(0.0..=1.0f64, 0..60),
    ) {
        let mut t = Trapezoid::construct(r(theta0));
        prop_assert!(ordered(&t));
        for theta in ratings {
            let next = t.adjust(r(theta));
            prop_assert!(ordered(&next), "{:?} -> {:?}", t, next);
            let left_changed = next.left_count() != t.left_count();
            let right_changed = next.right_count() != t.right_count();
            prop_assert!(left_changed != right_changed);
            if left_changed {
                prop_assert_eq!((next.beta(), next.delta()), (t.beta(), t.delta()));
                prop_assert_eq!(next.left_count(), t.left_count() + 1);
            } else {
                prop_assert_eq!((next.gamma(), next.alpha()), (t.gamma(), t.alpha()));
                prop_assert_eq!(next.right_count(), t.right_count() + 1);
            }
            t = next;
        }
    }

    #[test]
    fn stones_are_running_means(
        theta0 in 0.0..=1.0f64,
        ratings in prop::collection::vec(0.0..=1.0f64, 0..80),
    ) {
        let mut t = Trapezoid::construct(r(theta0));
        let mut log = SideLog::new(theta0);
        for theta in ratings {
            t = t.adjust(r(theta));
            log.push(theta);
            for (got, want) in t.stones().iter().zip(log.stones()) {
                prop_assert!((got - want).abs() <= 1e-9, "{:?} vs {:?}", t.stones(), log.stones());
            }
            prop_assert_eq!(t.left_count() as usize, log.left.len() + 1);
            prop_assert_eq!(t.right_count() as usize, log.right.len() + 1);
        }
    }

    #[test]
    fn constant_stream_converges(theta0 in 0.0..=1.0f64, frac in 0.0..1.0f64, k in 1usize..400) {
        let target = theta0 * frac;
        prop_assume!(target < theta0);
        let mut t = Trapezoid::construct(r(theta0));
        for _ in 0..k {
            t = t.adjust(r(target));
        }
        let expected = (theta0 + k as f64 * target) / (k as f64 + 1.0);
        prop_assert!((t.alpha() - expected).abs() <= 1e-12);
        prop_assert!(((t.alpha() - target).abs() - (theta0 - target) / (k as f64 + 1.0)).abs() <= 1e-12);
        prop_assert_eq!(t.beta(), theta0);
    }

    #[test]
    fn evaluation_shape(
        theta0 in 0.0..=1.0f64,
        ratings in prop::collection::vec(0.0..=1.0f64, 0..20),
        xs in prop::collection::vec(0.0..=1.0f64, 2..40),
    ) {
        let t = ratings.iter().fold(Trapezoid::construct(r(theta0)), |t, &v| t.adjust(r(v)));
        let [g, a, b, d] = t.stones();
        let mut xs = xs;
        xs.extend([g, a, b, d]);
        xs.sort_by(f64::total_cmp);
        let mut prev: Option<(f64, f64)> = None;
        for &x in &xs {
            let mu = t.evaluate(x).unwrap();
            prop_assert!((0.0..=1.0).contains(&mu));
            if a <= x && x <= b { prop_assert_eq!(mu, 1.0); }
            if x < g || x > d { prop_assert_eq!(mu, 0.0); }
            if let Some((px, pmu)) = prev {
                if x <= a && px >= g { prop_assert!(mu >= pmu, "rising edge at {x}"); }
                if px >= b && x <= d { prop_assert!(mu <= pmu, "falling edge at {x}"); }
            }
            prev = Some((x, mu));
        }
    }

    #[test]
    fn coefficient_lies_in_nucleus_and_is_monotone(a in 0.0..=1.0f64, b in 0.0..=1.0f64, bump in 0.0..=1.0f64) {
        let (alpha, beta) = if a <= b { (a, b) } else { (b, a) };
        let t = Trapezoid::from_parts(0.0, alpha, beta, 1.0, 1, 1).unwrap();
        let dc = decision_coefficient(&t);
        prop_assert!(alpha <= dc && dc <= beta);
        prop_assert!((dc - (alpha + 3.0 * beta) / 4.0).abs() <= 1e-15);

        let higher_beta = beta + (1.0 - beta) * bump;
        let t2 = Trapezoid::from_parts(0.0, alpha, higher_beta, 1.0, 1, 1).unwrap();
        prop_assert!(decision_coefficient(&t2) >= dc);
        let higher_alpha = alpha + (beta - alpha) * bump;
        let t3 = Trapezoid::from_parts(0.0, higher_alpha, beta, 1.0, 1, 1).unwrap();
        prop_assert!(decision_coefficient(&t3) >= dc);
    }

    #[test]
    fn appending_a_lower_candidate_changes_nothing(
        coeffs in prop::collection::vec(0.0..=1.0f64, 1..10),
        frac in 0.0..1.0f64,
    ) {
        let scores: Vec<_> = coeffs.iter().enumerate().map(|(i, &c)| CandidateScore::new(format!("c{i}"), c)).collect();
        let before = final_decision(scores.clone()).unwrap();
        prop_assume!(before.final_coefficient > 0.0);
        let mut extended = scores;
        extended.push(CandidateScore::new("extra", before.final_coefficient * frac));
        let after = final_decision(extended).unwrap();
        prop_assert_eq!(after.final_coefficient, before.final_coefficient);
        prop_assert_eq!(after.chosen, before.chosen);
    }

    #[test]
    fn final_coefficient_is_order_free(coeffs in prop::collection::vec(0.0..=1.0f64, 1..10), rot in 0usize..10) {
        let scores: Vec<_> = coeffs.iter().enumerate().map(|(i, &c)| CandidateScore::new(format!("c{i}"), c)).collect();
        let mut rotated = scores.clone();
        rotated.rotate_left(rot % scores.len());
        let mut reversed = scores.clone();
        reversed.reverse();
        let base = final_decision(scores).unwrap().final_coefficient;
        prop_assert_eq!(final_decision(rotated).unwrap().final_coefficient, base);
        prop_assert_eq!(final_decision(reversed).unwrap().final_coefficient, base);
    }
}

#[test]
fn chosen_follows_explicit_order_on_ties() {
    let scores = |names: [&str; 3]| {
        vec![
            CandidateScore::new(names[0], 0.5),
            CandidateScore::new(names[1], 0.2),
            CandidateScore::new(names[2], 0.5),
        ]
    };
    assert_eq!(final_decision(scores(["A", "B", "C"])).unwrap().chosen, "A");
    assert_eq!(final_decision(scores(["C", "B", "A"])).unwrap().chosen, "C");
}

/// Every candidate set of size 1..=6 over a 5-point coefficient grid against a
/// plain linear scan.
#[test]
fn final_decision_matches_exhaustive_search() {
    let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
    for size in 1..=6u32 {
        for code in 0..grid.len().pow(size) {
            let mut rest = code;
            let coeffs: Vec<f64> = (0..size)
                .map(|_| {
                    let c = grid[rest % grid.len()];
                    rest /= grid.len();
                    c
                })
                .collect();

            let mut best = f64::NEG_INFINITY;
            let mut best_idx = 0;
            for (i, &c) in coeffs.iter().enumerate() {
                if c > best {
                    best = c;
                    best_idx = i;
                }
            }
            let argmax: Vec<String> = coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c == best)
                .map(|(i, _)| format!("c{i}"))
                .collect();

            let d = final_decision(
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| CandidateScore::new(format!("c{i}"), c))
                    .collect(),
            )
            .unwrap();
            assert_eq!(d.final_coefficient, best);
            assert_eq!(d.chosen, format!("c{best_idx}"));
            assert_eq!(d.winners, argmax);
        }
    }
}
