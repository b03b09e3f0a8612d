use serde::{Deserialize, Serialize};

use super::spill::spill;
use super::GadgetError;
use crate::graph::{hamilton_cycle, SccChain, Tournament};
use crate::limits::Limits;
use crate::morphisms::{
    is_endo_trivial, is_pair_endo_trivial, iso_embeddings, retract_to_core, retraction_to,
    MorphismError,
};

/// Largest tournament the certificate search accepts.
pub const CERTIFICATE_BOUND: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMode {
    /// The tournament is strongly connected and is its own component.
    Strong,
    /// The initial strong component is non-trivial.
    Initial,
    /// Only the final component is non-trivial; the search runs on the
    /// reversed tournament, whose initial component it is.
    Dual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Route {
    /// Endo-trivial and strongly connected: hardness without gadgets.
    #[serde(rename = "direct-endo-trivial")]
    Direct,
    BaseI,
    BaseII,
    GeneralI,
    GeneralII,
    #[serde(rename = "A-I")]
    AI,
    #[serde(rename = "A-II")]
    AII,
}

/// A checkable claim about vertex sets of the working tournament.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "fact", rename_all = "snake_case")]
pub enum Fact {
    EndoTrivial {
        set: Vec<usize>,
        holds: bool,
    },
    /// Every endomorphism of `outer` fixing `inner` pointwise is bijective.
    PairEndoTrivial {
        outer: Vec<usize>,
        inner: Vec<usize>,
        holds: bool,
    },
    SpillFull {
        host: Vec<usize>,
        core: Vec<usize>,
        cycle: Vec<usize>,
        plus: bool,
        holds: bool,
    },
    /// `witness[i]` is the image of `from[i]`.
    Retracts {
        from: Vec<usize>,
        to: Vec<usize>,
        holds: bool,
        witness: Option<Vec<usize>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardnessCertificate {
    pub mode: CertificateMode,
    pub route: Route,
    /// The non-trivial strong component the search ran on.
    pub component: Vec<usize>,
    /// The chain `H_0 ⊆ ... ⊆ H_{k+1}` (empty for the direct route).
    pub levels: Vec<Vec<usize>>,
    /// Hamilton cycles of `levels[0..=k]`.
    pub cycles: Vec<Vec<usize>>,
    pub facts: Vec<Fact>,
}

impl HardnessCertificate {
    /// The tournament the recorded vertex sets refer to.
    pub fn working_template(&self, t: &Tournament) -> Tournament {
        match self.mode {
            CertificateMode::Dual => t.reverse(),
            _ => t.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactCheck {
    pub fact: Fact,
    pub recomputed: bool,
    pub witness_ok: bool,
    pub ok: bool,
}

struct Ctx<'a> {
    t: &'a Tournament,
    plus: bool,
    limits: &'a Limits,
    facts: Vec<Fact>,
}

fn positions(outer: &[usize], inner: &[usize]) -> Result<Vec<usize>, GadgetError> {
    inner
        .iter()
        .map(|v| {
            outer.iter().position(|x| x == v).ok_or_else(|| {
                GadgetError::Invalid(format!("vertex {v} is not in {outer:?}"))
            })
        })
        .collect()
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn endo_trivial(t: &Tournament, set: &[usize], limits: &Limits) -> Result<bool, GadgetError> {
    Ok(is_endo_trivial(t.subtournament(set)?.graph(), limits)?)
}

fn pair_endo_trivial(t: &Tournament, outer: &[usize], inner: &[usize], limits: &Limits) -> Result<bool, GadgetError> {
    Ok(is_pair_endo_trivial(t.subtournament(outer)?.graph(), &positions(outer, inner)?, limits)?)
}

fn spill_full(
    t: &Tournament,
    host: &[usize],
    core: &[usize],
    cycle: &[usize],
    plus: bool,
    limits: &Limits,
) -> Result<bool, GadgetError> {
    let sub = t.subtournament(host)?;
    let report = spill(&sub, &positions(host, core)?, &positions(host, cycle)?, plus, limits)?;
    Ok(report.full)
}

fn retraction(t: &Tournament, from: &[usize], to: &[usize], limits: &Limits) -> Result<Option<Vec<usize>>, GadgetError> {
    let sub = t.subtournament(from)?;
    Ok(retraction_to(&sub, &positions(from, to)?, limits)?
        .map(|r| r.table().iter().map(|&i| from[i]).collect()))
}

fn default_cycle(t: &Tournament, set: &[usize]) -> Result<Vec<usize>, GadgetError> {
    let sub = t.subtournament(set)?;
    Ok(hamilton_cycle(&sub)?.into_iter().map(|i| set[i]).collect())
}

impl Ctx<'_> {
    fn record(&mut self, fact: Fact) {
        if !self.facts.contains(&fact) {
            self.facts.push(fact);
        }
    }

    fn endo_trivial(&mut self, set: &[usize]) -> Result<bool, GadgetError> {
        let holds = endo_trivial(self.t, set, self.limits)?;
        self.record(Fact::EndoTrivial {
            set: set.to_vec(),
            holds,
        });
        Ok(holds)
    }

    fn pair(&mut self, outer: &[usize], inner: &[usize]) -> Result<bool, GadgetError> {
        let holds = pair_endo_trivial(self.t, outer, inner, self.limits)?;
        self.record(Fact::PairEndoTrivial {
            outer: outer.to_vec(),
            inner: inner.to_vec(),
            holds,
        });
        Ok(holds)
    }

    fn spill(&mut self, host: &[usize], core: &[usize], cycle: &[usize]) -> Result<bool, GadgetError> {
        let holds = spill_full(self.t, host, core, cycle, self.plus, self.limits)?;
        self.record(Fact::SpillFull {
            host: host.to_vec(),
            core: core.to_vec(),
            cycle: cycle.to_vec(),
            plus: self.plus,
            holds,
        });
        Ok(holds)
    }

    fn retracts(&mut self, from: &[usize], to: &[usize]) -> Result<bool, GadgetError> {
        let witness = retraction(self.t, from, to, self.limits)?;
        let holds = witness.is_some();
        self.record(Fact::Retracts {
            from: from.to_vec(),
            to: to.to_vec(),
            holds,
            witness,
        });
        Ok(holds)
    }

    fn require(&mut self, holds: bool, what: &str) -> Result<(), GadgetError> {
        if holds {
            Ok(())
        } else {
            Err(GadgetError::ConstructionCheck(what.to_string()))
        }
    }

    /// Records the hypotheses of the final chain.
    fn chain_facts(&mut self, levels: &[Vec<usize>], cycles: &[Vec<usize>]) -> Result<(), GadgetError> {
        let h = self.endo_trivial(&levels[0])?;
        self.require(h, "bottom level is not endo-trivial")?;
        for i in 1..levels.len() - 1 {
            let p = self.pair(&levels[i], &levels[i - 1])?;
            self.require(p, "consecutive levels are not pair endo-trivial")?;
            let s = self.spill(&levels[i], &levels[i - 1], &cycles[i - 1])?;
            self.require(s, "a level does not spill over the one below")?;
        }
        Ok(())
    }
}

/// Runs the case analysis that locates a hardness reduction for `t`.
///
/// The search works on the non-trivial strong component (reversing the
/// tournament when only the final component is non-trivial) and records
/// every morphism and spill fact it relies on.
pub fn find_hardness_certificate(t: &Tournament, limits: &Limits) -> Result<HardnessCertificate, GadgetError> {
    if t.n() > CERTIFICATE_BOUND {
        return Err(MorphismError::TooLarge {
            what: "certificate search size",
            max: CERTIFICATE_BOUND,
            got: t.n(),
        }
        .into());
    }
    let chain = SccChain::new(t)?;
    let (mode, working) = if chain.len() == 1 && t.n() > 1 {
        (CertificateMode::Strong, t.clone())
    } else if chain.initial().len() > 1 {
        (CertificateMode::Initial, t.clone())
    } else if chain.terminal().len() > 1 {
        (CertificateMode::Dual, t.reverse())
    } else {
        return Err(GadgetError::Invalid(
            "both end components are trivial: no hardness certificate".into(),
        ));
    };
    let component = SccChain::new(&working)?.initial().to_vec();
    let plus = mode != CertificateMode::Strong;
    let mut ctx = Ctx {
        t: &working,
        plus,
        limits,
        facts: Vec::new(),
    };
    let h = component.clone();
    let done = |ctx: Ctx, route: Route, levels: Vec<Vec<usize>>, cycles: Vec<Vec<usize>>| HardnessCertificate {
        mode,
        route,
        component: component.clone(),
        levels,
        cycles,
        facts: ctx.facts,
    };

    if ctx.endo_trivial(&h)? {
        if !plus {
            return Ok(done(ctx, Route::Direct, Vec::new(), Vec::new()));
        }
        let cycle = default_cycle(&working, &h)?;
        let s = ctx.spill(&h, &h, &cycle)?;
        ctx.require(s, "a component does not spill over itself")?;
        return Ok(done(ctx, Route::AI, vec![h.clone(), h.clone()], vec![cycle]));
    }

    let (core_local, _) = retract_to_core(working.subtournament(&h)?.graph(), limits)?;
    let core: Vec<usize> = core_local.iter().map(|&i| h[i]).collect();
    let r = ctx.retracts(&h, &core)?;
    ctx.require(r, "the component does not retract to its core")?;
    let e = ctx.endo_trivial(&core)?;
    ctx.require(e, "the retract-trivial core is not endo-trivial")?;

    let mut levels = vec![core.clone()];
    let mut cycles = vec![default_cycle(&working, &core)?];
    for _ in 0..h.len() {
        let j = levels.len() - 1;
        let top = levels[j].clone();
        let (top_sub, _) = working.induced(&top)?;
        let (h_sub, _) = working.induced(&h)?;
        let embeddings = iso_embeddings(&top_sub, &h_sub, limits)?;
        let mut escape = None;
        for emb in &embeddings {
            let carry = |set: &[usize]| -> Vec<usize> {
                set.iter()
                    .map(|v| h[emb.apply(top.iter().position(|x| x == v).expect("inside top"))])
                    .collect()
            };
            let copy = sorted(carry(&top));
            let cycle = carry(&cycles[j]);
            if ctx.spill(&h, &copy, &cycle)? && !ctx.retracts(&h, &copy)? {
                let moved_levels: Vec<Vec<usize>> = levels.iter().map(|l| sorted(carry(l))).collect();
                let moved_cycles: Vec<Vec<usize>> = cycles.iter().map(|c| carry(c)).collect();
                escape = Some((copy, moved_levels, moved_cycles));
                break;
            }
        }
        let base = j == 0;
        let Some((copy, moved_levels, moved_cycles)) = escape else {
            let route = match (plus, base) {
                (true, _) => Route::AI,
                (false, true) => Route::BaseI,
                (false, false) => Route::GeneralI,
            };
            ctx.chain_facts(&levels, &cycles)?;
            levels.push(h.clone());
            return Ok(done(ctx, route, levels, cycles));
        };
        levels = moved_levels;
        cycles = moved_cycles;
        if ctx.pair(&h, &copy)? {
            let route = match (plus, base) {
                (true, _) => Route::AII,
                (false, true) => Route::BaseII,
                (false, false) => Route::GeneralII,
            };
            ctx.chain_facts(&levels, &cycles)?;
            levels.push(h.clone());
            return Ok(done(ctx, route, levels, cycles));
        }
        let next = intermediate_level(&working, &h, &copy, limits)?.ok_or_else(|| {
            GadgetError::ConstructionCheck(format!(
                "no retract strictly between {copy:?} and the component"
            ))
        })?;
        let r = ctx.retracts(&h, &next)?;
        ctx.require(r, "the intermediate level is not a retract")?;
        cycles.push(default_cycle(&working, &next)?);
        levels.push(next);
    }
    Err(GadgetError::ConstructionCheck(
        "the level chain did not terminate".into(),
    ))
}

/// The least set strictly between `inner` and `h` (by size, then
/// lexicographically) onto which `h` retracts and over which `inner` is
/// pair endo-trivial.
fn intermediate_level(
    t: &Tournament,
    h: &[usize],
    inner: &[usize],
    limits: &Limits,
) -> Result<Option<Vec<usize>>, GadgetError> {
    let free: Vec<usize> = h.iter().copied().filter(|v| !inner.contains(v)).collect();
    let mut candidates: Vec<Vec<usize>> = (1..(1usize << free.len()) - 1)
        .map(|mask| {
            let mut set = inner.to_vec();
            set.extend((0..free.len()).filter(|i| mask >> i & 1 == 1).map(|i| free[i]));
            sorted(set)
        })
        .collect();
    candidates.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    for set in candidates {
        if retraction(t, h, &set, limits)?.is_some() && pair_endo_trivial(t, &set, inner, limits)? {
            return Ok(Some(set));
        }
    }
    Ok(None)
}

/// Recomputes every recorded fact on the working template of `cert`.
pub fn verify_certificate(
    t: &Tournament,
    cert: &HardnessCertificate,
    limits: &Limits,
) -> Result<Vec<FactCheck>, GadgetError> {
    let w = cert.working_template(t);
    cert.facts
        .iter()
        .map(|fact| {
            let (recomputed, witness_ok, recorded) = match fact {
                Fact::EndoTrivial { set, holds } => (endo_trivial(&w, set, limits)?, true, *holds),
                Fact::PairEndoTrivial { outer, inner, holds } => {
                    (pair_endo_trivial(&w, outer, inner, limits)?, true, *holds)
                }
                Fact::SpillFull {
                    host,
                    core,
                    cycle,
                    plus,
                    holds,
                } => (spill_full(&w, host, core, cycle, *plus, limits)?, true, *holds),
                Fact::Retracts {
                    from,
                    to,
                    holds,
                    witness,
                } => {
                    let ok = match witness {
                        None => true,
                        Some(table) => witness_is_retraction(&w, from, to, table),
                    };
                    (retraction(&w, from, to, limits)?.is_some(), ok, *holds)
                }
            };
            Ok(FactCheck {
                fact: fact.clone(),
                recomputed,
                witness_ok,
                ok: witness_ok && recomputed == recorded,
            })
        })
        .collect()
}

fn witness_is_retraction(t: &Tournament, from: &[usize], to: &[usize], table: &[usize]) -> bool {
    if table.len() != from.len() {
        return false;
    }
    let image = |v: usize| from.iter().position(|&x| x == v).map(|i| table[i]);
    table.iter().all(|v| to.contains(v))
        && to.iter().all(|&v| image(v) == Some(v))
        && from.iter().all(|&u| {
            from.iter()
                .all(|&v| !t.has_edge(u, v) || t.has_edge(image(u).unwrap(), image(v).unwrap()))
        })
}
