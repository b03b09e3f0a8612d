use serde::Serialize;

use super::classify::{classify, Verdict};
use super::game::solve_game;
use super::q2sat::{solve_q2sat, tt2_implication_form};
use super::sentence::{eliminate_equality, Eliminated, QcspSentence};
use super::QcspError;
use crate::graph::Tournament;
use crate::limits::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Auto,
    Game,
    Q2sat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineUsed {
    Game,
    Q2sat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Solved {
    pub answer: bool,
    pub engine: EngineUsed,
}

/// Decides `t |= s`.
///
/// Equalities are eliminated first. `Auto` sends equality-free,
/// domain-free sentences over NL templates with at least two vertices
/// through the TT_2 implication solver and everything else to the game.
/// `Q2sat` refuses whatever `Auto` would not route there.
pub fn solve(
    s: &QcspSentence,
    t: &Tournament,
    engine: Engine,
    limits: &Limits,
) -> Result<Solved, QcspError> {
    let sentence = if t.n() <= 1 {
        s.without_equalities()
    } else {
        match eliminate_equality(s) {
            Eliminated::Sentence(x) => x,
            Eliminated::ConstantFalse => {
                let used = if engine == Engine::Q2sat {
                    EngineUsed::Q2sat
                } else {
                    EngineUsed::Game
                };
                return Ok(Solved {
                    answer: false,
                    engine: used,
                });
            }
        }
    };
    let nl = classify(t)?.verdict == Verdict::NL;
    let transferable = nl && t.n() >= 2 && sentence.domains().is_empty();
    match engine {
        Engine::Game => game(&sentence, t, limits),
        Engine::Auto if !transferable => game(&sentence, t, limits),
        Engine::Auto | Engine::Q2sat => {
            if !transferable {
                let why = if !nl {
                    "template is not NL"
                } else if t.n() < 2 {
                    "one-vertex template"
                } else {
                    "domain restrictions do not transfer to TT_2"
                };
                return Err(QcspError::EngineRefused(why.into()));
            }
            let sys = tt2_implication_form(&sentence)?;
            Ok(Solved {
                answer: solve_q2sat(&sys),
                engine: EngineUsed::Q2sat,
            })
        }
    }
}

fn game(s: &QcspSentence, t: &Tournament, limits: &Limits) -> Result<Solved, QcspError> {
    Ok(Solved {
        answer: solve_game(s, t.graph(), limits)?,
        engine: EngineUsed::Game,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{reflexive_directed_cycle, Digraph};
    use crate::qcsp::parse_sentence;

    fn s_cycle_t() -> Tournament {
        let mut edges = vec![(1, 2), (2, 3), (3, 1)];
        edges.extend((1..5).map(|v| (0, v)));
        edges.extend((1..4).map(|v| (v, 4)));
        Tournament::new(Digraph::new(5, edges, true).unwrap()).unwrap()
    }

    #[test]
    fn both_engines_agree_on_small_sentences() {
        let t = s_cycle_t();
        let lim = Limits::default();
        for text in ["A x E y : edge(x,y)", "E x A y : edge(x,y)", "A x A y : edge(x,y)"] {
            let s = parse_sentence(text).unwrap();
            let auto = solve(&s, &t, Engine::Auto, &lim).unwrap();
            let direct = solve(&s, &t, Engine::Game, &lim).unwrap();
            assert_eq!(auto.engine, EngineUsed::Q2sat);
            assert_eq!(auto.answer, direct.answer, "{text}");
        }
    }

    #[test]
    fn hard_templates_refuse_q2sat() {
        let c3 = Tournament::new(reflexive_directed_cycle(3).unwrap()).unwrap();
        let s = parse_sentence("A x E y : edge(x,y)").unwrap();
        let lim = Limits::default();
        assert_eq!(solve(&s, &c3, Engine::Auto, &lim).unwrap().engine, EngineUsed::Game);
        assert!(matches!(
            solve(&s, &c3, Engine::Q2sat, &lim),
            Err(QcspError::EngineRefused(_))
        ));
    }

    #[test]
    fn equality_false_short_circuits() {
        let c3 = Tournament::new(reflexive_directed_cycle(3).unwrap()).unwrap();
        let s = parse_sentence("E y A x : eq(x,y)").unwrap();
        assert!(!solve(&s, &c3, Engine::Auto, &Limits::default()).unwrap().answer);
    }

    #[test]
    fn one_vertex_template() {
        let one = crate::graph::transitive_tournament(1).unwrap();
        let s = parse_sentence("A x A y : edge(x,y) eq(x,y)").unwrap();
        let r = solve(&s, &one, Engine::Auto, &Limits::default()).unwrap();
        assert!(r.answer);
        assert_eq!(r.engine, EngineUsed::Game);
    }
}
