//! One-round disambiguation dialogue over templated queries.
//!
//! A query `how to <goal> [a|an|the] <object>?` is checked against the
//! vocabulary. Known terms pass through. An unknown word that was learned
//! before is decided from its stored functions. Otherwise the user is asked to
//! rate the candidates the known term admits. The ratings are folded into the
//! lexicon and the word is decided from them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::decision::DecisionResult;
use crate::error::{Error, Result};
use crate::lexicon::{Lexicon, TermKind};
use crate::trapezoid::Rating;

const TEMPLATE: &str = "how to <goal> [a|an|the] <object>?";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub goal_surface: String,
    pub object_surface: String,
    pub raw: String,
}

impl Query {
    fn surface(&self, kind: TermKind) -> &str {
        match kind {
            TermKind::Goal => &self.goal_surface,
            TermKind::Object => &self.object_surface,
        }
    }
}

pub fn parse_query(text: &str) -> Result<Query> {
    let off_template = || Error::Parse(format!("query {text:?} does not match \"{TEMPLATE}\""));

    let body = text.trim();
    let body = body.strip_suffix('?').unwrap_or(body);
    let tokens: Vec<&str> = body.split_whitespace().collect();
    let (goal, object) = match tokens.as_slice() {
        [how, to, goal, object] if is_prefix(how, to) => (*goal, *object),
        [how, to, goal, article, object] if is_prefix(how, to) && is_article(article) => (*goal, *object),
        _ => return Err(off_template()),
    };
    if goal.contains('?') || object.contains('?') {
        return Err(off_template());
    }
    Ok(Query {
        goal_surface: goal.to_owned(),
        object_surface: object.to_owned(),
        raw: text.to_owned(),
    })
}

fn is_prefix(how: &str, to: &str) -> bool {
    how.eq_ignore_ascii_case("how") && to.eq_ignore_ascii_case("to")
}

fn is_article(word: &str) -> bool {
    ["a", "an", "the"].iter().any(|a| word.eq_ignore_ascii_case(a))
}

/// Dialogue knobs.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Policy {
    /// Ask for ratings even when the word already has learned functions.
    pub always_elicit: bool,
    /// A decision whose final coefficient falls below this is not accepted.
    pub min_final_coefficient: Option<f64>,
}

impl Policy {
    fn accepts(&self, decision: &DecisionResult) -> bool {
        self.min_final_coefficient
            .is_none_or(|min| decision.final_coefficient >= min)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SessionId(String);

impl SessionId {
    pub fn generate() -> Self {
        SessionId(uuid::Uuid::new_v4().to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<String> for SessionId {
    fn from(s: String) -> Self {
        SessionId(s)
    }
}

impl fmt::Display for SessionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// How one slot of the query is currently understood.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Interpretation {
    /// In the vocabulary; holds the canonical spelling.
    Known(String),
    /// Decided from learned functions; holds the chosen system term.
    Learned(String),
    Unknown,
}

impl Interpretation {
    fn system_term(&self) -> Option<&str> {
        match self {
            Interpretation::Known(t) | Interpretation::Learned(t) => Some(t),
            Interpretation::Unknown => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum SessionState {
    Resolved {
        rewritten: String,
    },
    NeedsElicitation {
        unknown: String,
        kind: TermKind,
        candidates: Vec<String>,
    },
    Decided {
        decision: DecisionResult,
        rewritten: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Session {
    pub id: SessionId,
    pub query: Query,
    pub state: SessionState,
    goal: Interpretation,
    object: Interpretation,
}

impl Session {
    pub fn interpretation(&self, kind: TermKind) -> &Interpretation {
        match kind {
            TermKind::Goal => &self.goal,
            TermKind::Object => &self.object,
        }
    }

    fn interpretation_mut(&mut self, kind: TermKind) -> &mut Interpretation {
        match kind {
            TermKind::Goal => &mut self.goal,
            TermKind::Object => &mut self.object,
        }
    }

    /// A slot that is still unknown after a decision. The rewritten query
    /// can be started as a new session to elicit it.
    pub fn pending_unknown(&self) -> Option<TermKind> {
        match self.state {
            SessionState::Decided { .. } => [TermKind::Object, TermKind::Goal]
                .into_iter()
                .find(|&k| self.interpretation(k) == &Interpretation::Unknown),
            _ => None,
        }
    }

    fn canonical_text(&self) -> String {
        let goal = self.goal.system_term().unwrap_or(&self.query.goal_surface);
        let object = self.object.system_term().unwrap_or(&self.query.object_surface);
        format!("How to {goal} a {object}?")
    }
}

fn interpret_slot(
    lex: &Lexicon,
    query: &Query,
    kind: TermKind,
    policy: &Policy,
) -> Result<(Interpretation, Option<DecisionResult>)> {
    let surface = query.surface(kind);
    if let Some(canonical) = lex.vocabulary().resolve(kind, surface) {
        return Ok((Interpretation::Known(canonical.to_owned()), None));
    }
    if !policy.always_elicit && lex.entry(surface, kind).is_some() {
        let decision = lex.interpret(surface, kind)?;
        if policy.accepts(&decision) {
            return Ok((Interpretation::Learned(decision.chosen.clone()), Some(decision)));
        }
    }
    Ok((Interpretation::Unknown, None))
}

fn elicitation_candidates(lex: &Lexicon, session: &Session, kind: TermKind) -> Result<Vec<String>> {
    let other = match kind {
        TermKind::Goal => TermKind::Object,
        TermKind::Object => TermKind::Goal,
    };
    let candidates = match session.interpretation(other).system_term() {
        Some(anchor) => lex.candidates_for(anchor, other)?,
        // nothing anchors the word: every term of its kind is a candidate
        None => lex.vocabulary().terms(kind).map(str::to_owned).collect(),
    };
    if candidates.is_empty() {
        return Err(Error::domain(format!(
            "no applicable candidates for {kind} {:?}",
            session.query.surface(kind)
        )));
    }
    Ok(candidates)
}

/// Opens a session for a parsed query.
///
/// When both words are unknown, the object is elicited first.
pub fn start_session(lex: &Lexicon, query: Query, policy: &Policy) -> Result<Session> {
    let (object, object_decision) = interpret_slot(lex, &query, TermKind::Object, policy)?;
    let (goal, goal_decision) = interpret_slot(lex, &query, TermKind::Goal, policy)?;
    let mut session = Session {
        id: SessionId::generate(),
        query,
        state: SessionState::Resolved {
            rewritten: String::new(),
        },
        goal,
        object,
    };

    let unknown = [TermKind::Object, TermKind::Goal]
        .into_iter()
        .find(|&k| session.interpretation(k) == &Interpretation::Unknown);
    session.state = match (unknown, object_decision.or(goal_decision)) {
        (Some(kind), _) => {
            let candidates = elicitation_candidates(lex, &session, kind)?;
            SessionState::NeedsElicitation {
                unknown: session.query.surface(kind).to_owned(),
                kind,
                candidates,
            }
        }
        (None, Some(decision)) => SessionState::Decided {
            decision,
            rewritten: session.canonical_text(),
        },
        (None, None) => SessionState::Resolved {
            rewritten: session.query.raw.clone(),
        },
    };
    Ok(session)
}

/// Folds one elicitation round into the lexicon and decides the word.
///
/// Every rating is validated before anything is written. Ratings are folded in
/// the session's candidate order. Candidates may be skipped. If the policy's
/// minimum coefficient is not reached the ratings stay learned but the session
/// keeps asking.
pub fn submit_ratings(
    lex: &mut Lexicon,
    session: &Session,
    ratings: &[(String, f64)],
    policy: &Policy,
) -> Result<Session> {
    let SessionState::NeedsElicitation {
        unknown,
        kind,
        candidates,
    } = &session.state
    else {
        return Err(Error::State(format!("session {} is not awaiting ratings", session.id)));
    };
    if ratings.is_empty() {
        return Err(Error::domain("at least one rating required"));
    }

    let mut by_candidate: Vec<Option<Rating>> = vec![None; candidates.len()];
    for (name, theta) in ratings {
        let index = candidates
            .iter()
            .position(|c| c.to_lowercase() == name.trim().to_lowercase())
            .ok_or_else(|| Error::domain(format!("{name:?} is not a candidate for {unknown:?}")))?;
        let rating = Rating::new(*theta).map_err(|e| Error::domain(format!("rating for {name:?}: {e}")))?;
        if by_candidate[index].replace(rating).is_some() {
            return Err(Error::domain(format!("candidate {name:?} rated twice")));
        }
    }

    let mut staged = lex.clone();
    for (candidate, rating) in candidates.iter().zip(&by_candidate) {
        if let Some(rating) = rating {
            staged.record_rating(unknown, *kind, candidate, rating.value())?;
        }
    }
    let decision = staged.interpret(unknown, *kind)?;
    *lex = staged;

    let mut next = session.clone();
    if policy.accepts(&decision) {
        *next.interpretation_mut(*kind) = Interpretation::Learned(decision.chosen.clone());
        next.state = SessionState::Decided {
            decision,
            rewritten: next.canonical_text(),
        };
    }
    Ok(next)
}

/// Canonical `How to <goal> a <object>?` with system terms in place of every
/// word understood so far.
pub fn rewrite(session: &Session) -> Result<String> {
    match session.state {
        SessionState::NeedsElicitation { .. } => {
            Err(Error::State(format!("session {} still needs ratings", session.id)))
        }
        _ => Ok(session.canonical_text()),
    }
}
