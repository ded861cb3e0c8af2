use fuzzylex_core::{
    parse_query, rewrite, start_session, submit_ratings, Lexicon, Policy, SessionState, TermKind, Trapezoid,
};
use proptest::prelude::*;

const OBJECTS: [&str; 3] = ["Word", "Character", "Line"];
const GOALS: [&str; 4] = ["EraseWithMenu", "EraseWithKey", "CutWithMenu", "Copy"];
const SURFACES: [&str; 3] = ["Gum", "Substantive", "Zap"];

#[derive(Debug, Clone)]
enum Op {
    AddTerm(TermKind, usize),
    SetApplicable(usize, usize),
    Rate(usize, TermKind, usize, f64),
}

fn kind() -> impl Strategy<Value = TermKind> {
    prop_oneof![Just(TermKind::Object), Just(TermKind::Goal)]
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        (kind(), 0usize..4).prop_map(|(k, i)| Op::AddTerm(k, i)),
        (0usize..4, 0usize..3).prop_map(|(g, o)| Op::SetApplicable(g, o)),
        (0usize..3, kind(), 0usize..4, -0.2..1.2f64).prop_map(|(s, k, c, t)| Op::Rate(s, k, c, t)),
    ]
}

fn name(kind: TermKind, i: usize) -> &'static str {
    match kind {
        TermKind::Object => OBJECTS[i % OBJECTS.len()],
        TermKind::Goal => GOALS[i % GOALS.len()],
    }
}

fn apply(lex: &mut Lexicon, op: &Op) {
    // errors are expected for some ops; they must leave the lexicon consistent
    let _ = match *op {
        Op::AddTerm(k, i) => lex.add_term(k, name(k, i)),
        Op::SetApplicable(g, o) => lex.set_applicable(name(TermKind::Goal, g), name(TermKind::Object, o)),
        Op::Rate(s, k, c, t) => lex.record_rating(SURFACES[s], k, name(k, c), t).map(|_| ()),
    };
}

fn integrity_holds(lex: &Lexicon) -> bool {
    let vocab = lex.vocabulary();
    let pairs_ok = vocab
        .applicability()
        .all(|(g, o)| vocab.contains(TermKind::Goal, g) && vocab.contains(TermKind::Object, o));
    let entries_ok = lex.entries().all(|e| {
        let mut functions = e.functions().peekable();
        functions.peek().is_some() && e.functions().all(|(c, _)| vocab.resolve(e.kind(), c) == Some(c))
    });
    pairs_ok && entries_ok
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn referential_integrity_survives_any_op_sequence(ops in prop::collection::vec(op(), 0..60)) {
        let mut lex = Lexicon::new();
        for op in &ops {
            apply(&mut lex, op);
            prop_assert!(integrity_holds(&lex));
        }
        let reloaded = Lexicon::from_json(&lex.to_json()).unwrap();
        prop_assert_eq!(&reloaded, &lex);
    }

    #[test]
    fn record_rating_is_construct_then_fold(ratings in prop::collection::vec((0usize..4, 0.0..=1.0f64), 1..50)) {
        let mut lex = Lexicon::new();
        lex.add_term(TermKind::Object, "Word").unwrap();
        for g in GOALS {
            lex.add_term(TermKind::Goal, g).unwrap();
        }
        for &(c, t) in &ratings {
            lex.record_rating("Gum", TermKind::Goal, GOALS[c], t).unwrap();
        }
        let entry = lex.entry("Gum", TermKind::Goal).unwrap();
        for (ci, goal) in GOALS.iter().enumerate() {
            let mut stream = ratings.iter().filter(|(c, _)| *c == ci).map(|&(_, t)| fuzzylex_core::Rating::new(t).unwrap());
            let expected = stream.next().map(|first| stream.fold(Trapezoid::construct(first), |t, r| t.adjust(r)));
            prop_assert_eq!(entry.function(goal).copied(), expected);
        }
    }

    #[test]
    fn candidates_offered_are_applicable(applicable in prop::collection::vec(any::<bool>(), 4)) {
        let mut lex = Lexicon::new();
        lex.add_term(TermKind::Object, "Word").unwrap();
        for (g, on) in GOALS.iter().zip(&applicable) {
            lex.add_term(TermKind::Goal, g).unwrap();
            if *on {
                lex.set_applicable(g, "Word").unwrap();
            }
        }
        match start_session(&lex, parse_query("how to Gum Word?").unwrap(), &Policy::default()) {
            Ok(s) => {
                let SessionState::NeedsElicitation { candidates, .. } = s.state else { panic!() };
                let expected: Vec<&str> = GOALS.iter().zip(&applicable).filter(|(_, on)| **on).map(|(g, _)| *g).collect();
                prop_assert_eq!(candidates, expected);
            }
            Err(e) => prop_assert!(applicable.iter().all(|on| !on), "{e}"),
        }
    }

    #[test]
    fn dialogue_replay_is_deterministic(ratings in prop::collection::vec(prop::option::of(0.0..=1.0f64), 4)) {
        let rated: Vec<(String, f64)> =
            GOALS.iter().zip(&ratings).filter_map(|(g, r)| r.map(|r| (g.to_string(), r))).collect();
        prop_assume!(!rated.is_empty());
        let mut base = Lexicon::new();
        base.add_term(TermKind::Object, "Word").unwrap();
        for g in GOALS {
            base.add_term(TermKind::Goal, g).unwrap();
            base.set_applicable(g, "Word").unwrap();
        }
        let run = || {
            let mut lex = base.clone();
            let policy = Policy::default();
            let s = start_session(&lex, parse_query("how to Gum Word?").unwrap(), &policy).unwrap();
            let s = submit_ratings(&mut lex, &s, &rated, &policy).unwrap();
            (s.state.clone(), rewrite(&s).unwrap(), lex)
        };
        let (a, b) = (run(), run());
        prop_assert_eq!(&a.0, &b.0);
        prop_assert_eq!(&a.1, &b.1);
        prop_assert_eq!(a.2.to_json(), b.2.to_json());
        let SessionState::Decided { decision, .. } = a.0 else { panic!() };
        prop_assert!(rated.iter().any(|(g, _)| *g == decision.chosen));
    }
}

#[test]
fn save_and_load_through_disk_keep_counters() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lex.json");
    let mut lex = Lexicon::new();
    lex.add_term(TermKind::Object, "Word").unwrap();
    for t in [0.7, 0.5, 0.9, 0.1, 0.65] {
        lex.record_rating("Substantive", TermKind::Object, "Word", t).unwrap();
    }
    lex.save(&path).unwrap();
    let loaded = Lexicon::load(&path).unwrap();
    assert_eq!(loaded, lex);
    let t = loaded
        .entry("Substantive", TermKind::Object)
        .unwrap()
        .function("Word")
        .unwrap();
    assert_eq!((t.left_count(), t.right_count()), (3, 3));
}
