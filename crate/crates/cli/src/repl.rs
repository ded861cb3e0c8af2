//! Terminal rendition of the elicitation dialogue.

use std::io::{BufRead, Write};
use std::path::Path;

use anyhow::Context;
use fuzzylex_core::{
    parse_query, rewrite, start_session, submit_ratings, DecisionResult, Lexicon, Policy, Rating, Session,
    SessionState, TermKind, Trapezoid,
};

const SPARK_LEVELS: &[u8] = b" .:-=+*#@";
const SPARK_SAMPLES: usize = 21;

/// 21 samples across [0, 1], one ASCII character each.
pub fn sparkline(t: &Trapezoid) -> String {
    let top = (SPARK_LEVELS.len() - 1) as f64;
    (0..SPARK_SAMPLES)
        .map(|i| {
            let x = i as f64 / (SPARK_SAMPLES - 1) as f64;
            let mu = t.evaluate(x).unwrap_or(0.0);
            SPARK_LEVELS[(mu * top).round() as usize] as char
        })
        .collect()
}

pub struct Repl<'a, R, W> {
    input: R,
    out: W,
    lexicon: &'a mut Lexicon,
    policy: Policy,
    save_to: Option<&'a Path>,
}

enum Line {
    Text(String),
    Eof,
}

impl<'a, R: BufRead, W: Write> Repl<'a, R, W> {
    pub fn new(input: R, out: W, lexicon: &'a mut Lexicon, policy: Policy, save_to: Option<&'a Path>) -> Self {
        Repl {
            input,
            out,
            lexicon,
            policy,
            save_to,
        }
    }

    fn prompt(&mut self, text: &str) -> anyhow::Result<Line> {
        write!(self.out, "{text}")?;
        self.out.flush()?;
        let mut buf = String::new();
        if self.input.read_line(&mut buf)? == 0 {
            writeln!(self.out)?;
            return Ok(Line::Eof);
        }
        Ok(Line::Text(buf.trim().to_owned()))
    }

    /// Runs until `quit`, `exit` or end of input.
    pub fn run(&mut self) -> anyhow::Result<()> {
        writeln!(self.out, "Ask \"how to <goal> a <object>?\" (quit to leave).")?;
        loop {
            let Line::Text(text) = self.prompt("query> ")? else {
                return Ok(());
            };
            match text.as_str() {
                "" => continue,
                "quit" | "exit" => return Ok(()),
                _ => {}
            }
            let query = match parse_query(&text) {
                Ok(q) => q,
                Err(e) => {
                    writeln!(self.out, "{e}")?;
                    continue;
                }
            };
            let mut session = match start_session(self.lexicon, query, &self.policy) {
                Ok(s) => s,
                Err(e) => {
                    writeln!(self.out, "{e}")?;
                    continue;
                }
            };
            loop {
                match session.state.clone() {
                    SessionState::Resolved { .. } => {
                        writeln!(self.out, "understood: {}", rewrite(&session)?)?;
                        break;
                    }
                    SessionState::Decided { decision, rewritten } => {
                        self.print_decision(&session, &decision)?;
                        writeln!(self.out, "rewritten: {rewritten}")?;
                        if session.pending_unknown().is_none() {
                            break;
                        }
                        // the other word is still unknown; continue with the rewrite
                        session = match start_session(self.lexicon, parse_query(&rewritten)?, &self.policy) {
                            Ok(s) => s,
                            Err(e) => {
                                writeln!(self.out, "{e}")?;
                                break;
                            }
                        };
                    }
                    SessionState::NeedsElicitation {
                        unknown,
                        kind,
                        candidates,
                    } => {
                        let Some(ratings) = self.elicit(&unknown, kind, &candidates)? else {
                            return Ok(());
                        };
                        session = match submit_ratings(self.lexicon, &session, &ratings, &self.policy) {
                            Ok(s) => s,
                            Err(e) => {
                                writeln!(self.out, "{e}")?;
                                continue;
                            }
                        };
                        if let Some(path) = self.save_to {
                            self.lexicon
                                .save(path)
                                .with_context(|| format!("saving {}", path.display()))?;
                        }
                        if let SessionState::NeedsElicitation { unknown, kind, .. } = &session.state {
                            let decision = self.lexicon.interpret(unknown, *kind)?;
                            self.print_decision(&session, &decision)?;
                            writeln!(self.out, "final coefficient below the acceptance threshold; rate again")?;
                        }
                    }
                }
            }
        }
    }

    /// Reads one degree per candidate. `None` on end of input.
    fn elicit(
        &mut self,
        unknown: &str,
        kind: TermKind,
        candidates: &[String],
    ) -> anyhow::Result<Option<Vec<(String, f64)>>> {
        writeln!(
            self.out,
            "Unknown {} {unknown:?}. Rate each candidate with a possibility degree in [0, 1] (blank skips):",
            kind.as_str().to_lowercase()
        )?;
        loop {
            let mut ratings = Vec::new();
            for candidate in candidates {
                loop {
                    let Line::Text(answer) = self.prompt(&format!("  {candidate}: "))? else {
                        return Ok(None);
                    };
                    if answer.is_empty() {
                        break;
                    }
                    match answer.parse::<f64>().ok().and_then(|v| Rating::new(v).ok()) {
                        Some(r) => {
                            ratings.push((candidate.clone(), r.value()));
                            break;
                        }
                        None => writeln!(self.out, "  enter a number between 0 and 1, or leave blank to skip")?,
                    }
                }
            }
            if !ratings.is_empty() {
                return Ok(Some(ratings));
            }
            writeln!(self.out, "at least one rating required")?;
        }
    }

    fn print_decision(&mut self, session: &Session, decision: &DecisionResult) -> anyhow::Result<()> {
        let query = &session.query;
        let entry = [
            (query.object_surface.as_str(), TermKind::Object),
            (query.goal_surface.as_str(), TermKind::Goal),
        ]
        .into_iter()
        .filter_map(|(surface, kind)| self.lexicon.entry(surface, kind))
        .find(|e| e.decide().ok().as_ref() == Some(decision));
        if let Some(entry) = entry {
            writeln!(
                self.out,
                "{:<16} {:<34} {:>7} {:>6}  curve",
                "candidate", "[gamma, alpha, beta, delta]", "n(l,r)", "D_c"
            )?;
            for (candidate, t) in entry.functions() {
                let stones = format!("[{}]", t.stones().map(|v| format!("{v:.4}")).join(", "));
                let marker = if candidate == decision.chosen { "*" } else { " " };
                writeln!(
                    self.out,
                    "{marker}{candidate:<15} {stones:<34} {:>7} {:>6.4}  |{}|",
                    format!("{},{}", t.left_count(), t.right_count()),
                    fuzzylex_core::decision_coefficient(t),
                    sparkline(t),
                )?;
            }
        }
        writeln!(
            self.out,
            "D_c^f = {} -> {}",
            decision.final_coefficient, decision.chosen
        )?;
        if decision.winners.len() > 1 {
            writeln!(self.out, "tied: {}", decision.winners.join(", "))?;
        }
        Ok(())
    }
}
