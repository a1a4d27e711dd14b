//! The Spoiler/Duplicator game for external state bisimilarity of two NLMPs.
//!
//! From a position (x⁰, x¹) Spoiler picks a label a, a side i and a measure
//! μ ∈ T_a(xⁱ), and for every measure μ'_k on the other side a measurable
//! pair (C_k, C'_k) on which the two masses differ. Duplicator answers with
//! an index k and states (y⁰, y¹) such that exactly one of y⁰ ∈ C_k,
//! y¹ ∈ C'_k holds; play continues from (y⁰, y¹). A player who cannot move
//! loses and an infinite play is won by Duplicator.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bisim::external::pair_test_sets;
use crate::error::Result;
use crate::measurable::space::contains;
use crate::measurable::{closed_pair_atoms, FinSpace, Measure, Rel, StateSet};
use crate::nlmp::Nlmp;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Position {
    pub x0: usize,
    pub x1: usize,
    pub round: usize,
}

impl Position {
    pub fn start(x0: usize, x1: usize) -> Self {
        Position { x0, x1, round: 0 }
    }

    pub fn pair(&self) -> (usize, usize) {
        (self.x0, self.x1)
    }
}

/// `mu` indexes the sorted transition set on `side`; `pairs[k]` answers the
/// k-th measure of the opposing sorted set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpoilerMove {
    pub label: usize,
    pub side: usize,
    pub mu: usize,
    pub pairs: Vec<(StateSet, StateSet)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DuplicatorMove {
    pub x0: usize,
    pub x1: usize,
    pub k: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Spoiler,
    Duplicator,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub winner: Player,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Next(Position),
    Over(Outcome),
}

/// Two processes with the same labels.
#[derive(Clone, Debug)]
pub struct Game {
    pub left: Nlmp,
    pub right: Nlmp,
}

impl Game {
    pub fn new(left: Nlmp, right: Nlmp) -> Result<Self> {
        left.same_labels(&right)?;
        Ok(Game { left, right })
    }

    fn space(&self, side: usize) -> &FinSpace {
        if side == 0 { self.left.space() } else { self.right.space() }
    }

    /// T_a on `side` at the position, and the opposing set.
    fn sets(&self, pos: &Position, a: usize, side: usize) -> (&[Measure], &[Measure]) {
        let own = if side == 0 { self.left.transitions(a, pos.x0) } else { self.right.transitions(a, pos.x1) };
        let opp = if side == 0 { self.right.transitions(a, pos.x1) } else { self.left.transitions(a, pos.x0) };
        (own, opp)
    }

    /// Mass of a pair as seen from `side`.
    fn mass(&self, side: usize, m: &Measure, pair: (StateSet, StateSet)) -> Rational {
        let set = if side == 0 { pair.0 } else { pair.1 };
        m.mass(self.space(side), set).expect("pair checked measurable")
    }

    fn measurable(&self, pair: (StateSet, StateSet)) -> bool {
        self.left.space().is_measurable(pair.0) && self.right.space().is_measurable(pair.1)
    }

    pub fn num_positions(&self) -> usize {
        self.left.len() * self.right.len()
    }

    /// Rounds after which a play is declared infinite.
    pub fn cutoff(&self) -> usize {
        self.num_positions() + 1
    }

    fn all_pairs(&self) -> Vec<(StateSet, StateSet)> {
        let l = self.left.space().atoms().members().expect("small space");
        let r = self.right.space().atoms().members().expect("small space");
        let mut out: Vec<_> = l.iter().flat_map(|&a| r.iter().map(move |&b| (a, b))).collect();
        out.sort();
        out
    }

    /// First pair of `candidates` separating the two measures, trying (S,S') first.
    fn separate(&self, side: usize, mu: &Measure, nu: &Measure, candidates: &[(StateSet, StateSet)]) -> Option<(StateSet, StateSet)> {
        let full = (self.left.space().full(), self.right.space().full());
        std::iter::once(full)
            .chain(candidates.iter().copied())
            .find(|&p| self.mass(side, mu, p) != self.mass(1 - side, nu, p))
    }

    fn moves_from(&self, pos: &Position, candidates: &[(StateSet, StateSet)]) -> Vec<SpoilerMove> {
        let mut out = Vec::new();
        for label in 0..self.left.num_labels() {
            for side in 0..2 {
                let (own, opp) = self.sets(pos, label, side);
                for (mu, m) in own.iter().enumerate() {
                    let pairs: Option<Vec<_>> = opp.iter().map(|nu| self.separate(side, m, nu, candidates)).collect();
                    if let Some(pairs) = pairs {
                        out.push(SpoilerMove { label, side, mu, pairs });
                    }
                }
            }
        }
        out
    }
}

/// Every Spoiler move up to the choice of pairs: (S,S') when it separates,
/// otherwise the least measurable pair that does.
pub fn legal_spoiler_moves(game: &Game, pos: &Position) -> Vec<SpoilerMove> {
    game.moves_from(pos, &game.all_pairs())
}

/// Every reply satisfying the membership condition.
pub fn legal_duplicator_moves(game: &Game, m: &SpoilerMove) -> Vec<DuplicatorMove> {
    let mut out = Vec::new();
    for (k, &(c, c2)) in m.pairs.iter().enumerate() {
        for x0 in 0..game.left.len() {
            for x1 in 0..game.right.len() {
                if contains(c, x0) != contains(c2, x1) {
                    out.push(DuplicatorMove { x0, x1, k });
                }
            }
        }
    }
    out
}

fn spoiler_fault(game: &Game, pos: &Position, m: &SpoilerMove) -> Option<String> {
    if m.label >= game.left.num_labels() || m.side > 1 {
        return Some("unknown label or side".into());
    }
    let (own, opp) = game.sets(pos, m.label, m.side);
    let Some(mu) = own.get(m.mu) else {
        return Some(format!("no measure #{} at the chosen state", m.mu));
    };
    if m.pairs.len() != opp.len() {
        return Some(format!("{} pairs given for {} opposing measures", m.pairs.len(), opp.len()));
    }
    for (k, (&p, nu)) in m.pairs.iter().zip(opp).enumerate() {
        if p.0 & !game.left.space().full() != 0 || p.1 & !game.right.space().full() != 0 || !game.measurable(p) {
            return Some(format!("pair #{k} is not measurable"));
        }
        if game.mass(m.side, mu, p) == game.mass(1 - m.side, nu, p) {
            return Some(format!("pair #{k} does not separate the measures"));
        }
    }
    None
}

/// Validate one exchange and move on; an illegal move loses for its author.
pub fn referee_step(game: &Game, pos: &Position, m: &SpoilerMove, reply: Option<&DuplicatorMove>) -> Step {
    if let Some(reason) = spoiler_fault(game, pos, m) {
        return Step::Over(Outcome { winner: Player::Duplicator, reason: format!("illegal Spoiler move: {reason}") });
    }
    let Some(d) = reply else {
        let reason = if m.pairs.is_empty() { "the opposing transition set is empty" } else { "Duplicator has no reply" };
        return Step::Over(Outcome { winner: Player::Spoiler, reason: reason.into() });
    };
    let Some(&(c, c2)) = m.pairs.get(d.k) else {
        return Step::Over(Outcome { winner: Player::Spoiler, reason: format!("illegal Duplicator move: no pair #{}", d.k) });
    };
    if d.x0 >= game.left.len() || d.x1 >= game.right.len() {
        return Step::Over(Outcome { winner: Player::Spoiler, reason: "illegal Duplicator move: unknown state".into() });
    }
    if contains(c, d.x0) == contains(c2, d.x1) {
        return Step::Over(Outcome {
            winner: Player::Spoiler,
            reason: format!("illegal Duplicator move: both or neither state lie in pair #{}", d.k),
        });
    }
    Step::Next(Position { x0: d.x0, x1: d.x1, round: pos.round + 1 })
}

/// Winning region with strategies for both players.
#[derive(Clone, Debug)]
pub struct Solution {
    /// Positions won by Duplicator.
    pub region: Rel,
    /// Rounds Spoiler needs from each losing position.
    pub rank: BTreeMap<(usize, usize), usize>,
    pub spoiler: BTreeMap<(usize, usize), SpoilerMove>,
}

/// Backward induction: W₀ is every position; a position leaves W_r when
/// Spoiler has a move whose pairs are all closed under W_r, since then no
/// reply stays inside W_r.
pub fn solve(game: &Game) -> Result<Solution> {
    let (n0, n1) = (game.left.len(), game.right.len());
    let mut region = Rel::total(n0, n1);
    let mut rank = BTreeMap::new();
    let mut spoiler = BTreeMap::new();
    for r in 1.. {
        let closed = pair_test_sets(&closed_pair_atoms(game.left.space(), game.right.space(), &region)?);
        let mut losing = Vec::new();
        for (x0, x1) in region.pairs() {
            if let Some(m) = game.moves_from(&Position::start(x0, x1), &closed).into_iter().next() {
                losing.push(((x0, x1), m));
            }
        }
        if losing.is_empty() {
            break;
        }
        for (p, m) in losing {
            region.retain(|q| *q != p);
            rank.insert(p, r);
            spoiler.insert(p, m);
        }
    }
    Ok(Solution { region, rank, spoiler })
}

impl Solution {
    pub fn duplicator_wins(&self, x0: usize, x1: usize) -> bool {
        self.region.contains(x0, x1)
    }

    /// Spoiler's move at a position, the strategy move when it is winning.
    pub fn spoiler_move(&self, game: &Game, pos: &Position) -> Option<SpoilerMove> {
        self.spoiler.get(&pos.pair()).cloned().or_else(|| legal_spoiler_moves(game, pos).into_iter().next())
    }

    /// Duplicator's reply: a move back into the region when one exists,
    /// otherwise any legal move.
    pub fn duplicator_move(&self, game: &Game, m: &SpoilerMove) -> Option<DuplicatorMove> {
        let legal = legal_duplicator_moves(game, m);
        legal.iter().find(|d| self.region.contains(d.x0, d.x1)).or(legal.first()).copied()
    }
}

/// A uniformly random legal Spoiler move, pairs drawn from every separating
/// measurable pair.
pub fn random_spoiler_move<R: Rng>(game: &Game, pos: &Position, rng: &mut R) -> Option<SpoilerMove> {
    let all = game.all_pairs();
    let mut options = Vec::new();
    for label in 0..game.left.num_labels() {
        for side in 0..2 {
            let (own, opp) = game.sets(pos, label, side);
            for (mu, m) in own.iter().enumerate() {
                let seps: Vec<Vec<_>> = opp
                    .iter()
                    .map(|nu| all.iter().copied().filter(|&p| game.mass(side, m, p) != game.mass(1 - side, nu, p)).collect())
                    .collect();
                if seps.iter().all(|s| !s.is_empty()) {
                    options.push((label, side, mu, seps));
                }
            }
        }
    }
    let (label, side, mu, seps) = options.choose(rng)?;
    let pairs = seps.iter().map(|s| *s.choose(rng).expect("nonempty")).collect();
    Some(SpoilerMove { label: *label, side: *side, mu: *mu, pairs })
}

pub fn random_duplicator_move<R: Rng>(game: &Game, m: &SpoilerMove, rng: &mut R) -> Option<DuplicatorMove> {
    legal_duplicator_moves(game, m).choose(rng).copied()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub spoiler: SpoilerMove,
    pub duplicator: Option<DuplicatorMove>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub start: (usize, usize),
    pub human: Player,
    pub rounds: Vec<Round>,
    /// `None` when the human quit.
    pub outcome: Option<Outcome>,
    pub abandoned: bool,
}

/// Re-run a transcript through the referee.
pub fn replay(game: &Game, t: &Transcript) -> Option<Outcome> {
    let mut pos = Position::start(t.start.0, t.start.1);
    for round in &t.rounds {
        match referee_step(game, &pos, &round.spoiler, round.duplicator.as_ref()) {
            Step::Next(p) => pos = p,
            Step::Over(o) => return Some(o),
        }
    }
    if t.abandoned {
        return None;
    }
    Some(end_of_play(game, &pos))
}

/// Outcome once the recorded rounds run out: Spoiler stuck or cutoff reached.
fn end_of_play(game: &Game, pos: &Position) -> Outcome {
    if legal_spoiler_moves(game, pos).is_empty() {
        Outcome { winner: Player::Duplicator, reason: "Spoiler has no legal move".into() }
    } else {
        Outcome { winner: Player::Duplicator, reason: format!("play reached the cutoff of {} rounds", game.cutoff()) }
    }
}

/// Play a whole game between two move sources; used by both the engine
/// and the interactive session.
pub fn play<S, D>(game: &Game, start: (usize, usize), mut spoiler: S, mut duplicator: D) -> io::Result<Transcript>
where
    S: FnMut(&Position) -> io::Result<Option<SpoilerMove>>,
    D: FnMut(&Position, &SpoilerMove) -> io::Result<Option<Option<DuplicatorMove>>>,
{
    run(game, start, Player::Spoiler, &mut spoiler, &mut duplicator)
}

type SpoilerSource<'a> = dyn FnMut(&Position) -> io::Result<Option<SpoilerMove>> + 'a;
type DuplicatorSource<'a> = dyn FnMut(&Position, &SpoilerMove) -> io::Result<Option<Option<DuplicatorMove>>> + 'a;

/// Sources return `Ok(None)` to quit; Duplicator's inner `None` concedes.
fn run(game: &Game, start: (usize, usize), human: Player, spoiler: &mut SpoilerSource, duplicator: &mut DuplicatorSource) -> io::Result<Transcript> {
    let mut t = Transcript { start, human, rounds: Vec::new(), outcome: None, abandoned: false };
    let mut pos = Position::start(start.0, start.1);
    while pos.round < game.cutoff() {
        if legal_spoiler_moves(game, &pos).is_empty() {
            break;
        }
        let Some(m) = spoiler(&pos)? else {
            t.abandoned = true;
            return Ok(t);
        };
        let reply = if spoiler_fault(game, &pos, &m).is_some() {
            None
        } else {
            match duplicator(&pos, &m)? {
                Some(r) => r,
                None => {
                    t.rounds.push(Round { spoiler: m, duplicator: None });
                    t.abandoned = true;
                    return Ok(t);
                }
            }
        };
        let step = referee_step(game, &pos, &m, reply.as_ref());
        t.rounds.push(Round { spoiler: m, duplicator: reply });
        match step {
            Step::Next(p) => pos = p,
            Step::Over(o) => {
                t.outcome = Some(o);
                return Ok(t);
            }
        }
    }
    t.outcome = Some(end_of_play(game, &pos));
    Ok(t)
}

pub fn format_pair(game: &Game, p: (StateSet, StateSet)) -> String {
    format!("{}|{}", game.left.space().fmt_set(p.0), game.right.space().fmt_set(p.1))
}

/// A Spoiler move in the input syntax.
pub fn format_spoiler_move(game: &Game, m: &SpoilerMove) -> String {
    let mut s = format!("label={} side={} mu=#{}", game.left.labels()[m.label], m.side, m.mu);
    for (k, &p) in m.pairs.iter().enumerate() {
        s.push_str(&format!(" pair#{k}={}", format_pair(game, p)));
    }
    s
}

pub fn format_duplicator_move(game: &Game, d: &DuplicatorMove) -> String {
    format!("x0={} x1={} k={}", game.left.space().name(d.x0), game.right.space().name(d.x1), d.k)
}

fn parse_set(space: &FinSpace, text: &str) -> std::result::Result<StateSet, String> {
    let inner = text.strip_prefix('{').and_then(|t| t.strip_suffix('}')).ok_or_else(|| format!("expected {{...}}, got {text:?}"))?;
    let names: Vec<&str> = inner.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    space.set_of(&names).map_err(|e| e.to_string())
}

/// Parse `label=a side=0 mu=#2 pair#0={x}|{y'} ...`.
pub fn parse_spoiler_move(game: &Game, line: &str) -> std::result::Result<SpoilerMove, String> {
    let (mut label, mut side, mut mu) = (None, None, None);
    let mut pairs = BTreeMap::new();
    for tok in line.split_whitespace() {
        let (key, value) = tok.split_once('=').ok_or_else(|| format!("expected key=value, got {tok:?}"))?;
        match key {
            "label" => label = Some(game.left.label_index(value).map_err(|e| e.to_string())?),
            "side" => side = Some(value.parse::<usize>().ok().filter(|&s| s < 2).ok_or("side must be 0 or 1")?),
            "mu" => mu = Some(value.trim_start_matches('#').parse::<usize>().map_err(|_| "mu must be #<index>")?),
            k if k.starts_with("pair#") => {
                let idx: usize = k["pair#".len()..].parse().map_err(|_| "pair index must be a number")?;
                let (l, r) = value.split_once('|').ok_or("pair must be {..}|{..}")?;
                pairs.insert(idx, (parse_set(game.left.space(), l)?, parse_set(game.right.space(), r)?));
            }
            _ => return Err(format!("unknown key {key:?}")),
        }
    }
    let pairs: Vec<_> = pairs.into_iter().enumerate().map(|(i, (k, p))| if i == k { Ok(p) } else { Err(format!("missing pair#{i}")) }).collect::<std::result::Result<_, _>>()?;
    Ok(SpoilerMove { label: label.ok_or("missing label")?, side: side.ok_or("missing side")?, mu: mu.ok_or("missing mu")?, pairs })
}

/// Parse `x0=<state> x1=<state> k=<idx>`.
pub fn parse_duplicator_move(game: &Game, line: &str) -> std::result::Result<DuplicatorMove, String> {
    let (mut x0, mut x1, mut k) = (None, None, None);
    for tok in line.split_whitespace() {
        let (key, value) = tok.split_once('=').ok_or_else(|| format!("expected key=value, got {tok:?}"))?;
        match key {
            "x0" => x0 = Some(game.left.space().index_of(value).map_err(|e| e.to_string())?),
            "x1" => x1 = Some(game.right.space().index_of(value).map_err(|e| e.to_string())?),
            "k" => k = Some(value.parse::<usize>().map_err(|_| "k must be a number")?),
            _ => return Err(format!("unknown key {key:?}")),
        }
    }
    Ok(DuplicatorMove { x0: x0.ok_or("missing x0")?, x1: x1.ok_or("missing x1")?, k: k.ok_or("missing k")? })
}

fn describe(game: &Game, pos: &Position) -> String {
    format!("round {}: position ({}, {})", pos.round, game.left.space().name(pos.x0), game.right.space().name(pos.x1))
}

/// Text-mode play: the human takes `human`, the engine plays the solver's
/// strategy for the other role.
pub fn play_interactive<I: BufRead, O: Write>(
    game: &Game,
    sol: &Solution,
    human: Player,
    start: (usize, usize),
    input: &mut I,
    out: &mut O,
) -> io::Result<Transcript> {
    let out = std::cell::RefCell::new(out);
    let input = std::cell::RefCell::new(input);
    let read_line = || -> io::Result<Option<String>> {
        let mut line = String::new();
        if input.borrow_mut().read_line(&mut line)? == 0 {
            return Ok(None);
        }
        Ok(Some(line.trim().to_string()))
    };
    let mut human_spoiler = |pos: &Position| -> io::Result<Option<SpoilerMove>> {
        let menu = legal_spoiler_moves(game, pos);
        {
            let mut o = out.borrow_mut();
            writeln!(o, "{}", describe(game, pos))?;
            writeln!(o, "legal moves (enter pick=<n>, a move, or quit):")?;
            for (i, m) in menu.iter().enumerate() {
                writeln!(o, "  [{i}] {}", format_spoiler_move(game, m))?;
            }
        }
        loop {
            write!(out.borrow_mut(), "spoiler> ")?;
            out.borrow_mut().flush()?;
            let Some(line) = read_line()? else { return Ok(None) };
            if line == "quit" {
                return Ok(None);
            }
            let parsed = match line.strip_prefix("pick=") {
                Some(n) => n.parse::<usize>().ok().and_then(|i| menu.get(i).cloned()).ok_or_else(|| format!("no menu entry {n:?}")),
                None => parse_spoiler_move(game, &line),
            };
            match parsed {
                Ok(m) => return Ok(Some(m)),
                Err(e) => writeln!(out.borrow_mut(), "could not read move: {e}")?,
            }
        }
    };
    let mut human_duplicator = |pos: &Position, m: &SpoilerMove| -> io::Result<Option<Option<DuplicatorMove>>> {
        {
            let mut o = out.borrow_mut();
            writeln!(o, "{}", describe(game, pos))?;
            writeln!(o, "spoiler plays {}", format_spoiler_move(game, m))?;
            writeln!(o, "reply with x0=<state> x1=<state> k=<idx>, concede, or quit")?;
        }
        loop {
            write!(out.borrow_mut(), "duplicator> ")?;
            out.borrow_mut().flush()?;
            let Some(line) = read_line()? else { return Ok(None) };
            match line.as_str() {
                "quit" => return Ok(None),
                "concede" => return Ok(Some(None)),
                _ => match parse_duplicator_move(game, &line) {
                    Ok(d) => return Ok(Some(Some(d))),
                    Err(e) => writeln!(out.borrow_mut(), "could not read move: {e}")?,
                },
            }
        }
    };
    let mut engine_spoiler = |pos: &Position| -> io::Result<Option<SpoilerMove>> {
        let m = sol.spoiler_move(game, pos).expect("Spoiler has a legal move");
        Ok(Some(m))
    };
    let mut engine_duplicator = |_: &Position, m: &SpoilerMove| -> io::Result<Option<Option<DuplicatorMove>>> {
        let d = sol.duplicator_move(game, m);
        if let Some(d) = &d {
            writeln!(out.borrow_mut(), "duplicator answers {}", format_duplicator_move(game, d))?;
        }
        Ok(Some(d))
    };
    let t = match human {
        Player::Spoiler => run(game, start, human, &mut human_spoiler, &mut engine_duplicator)?,
        Player::Duplicator => run(game, start, human, &mut engine_spoiler, &mut human_duplicator)?,
    };
    let mut o = out.borrow_mut();
    match &t.outcome {
        Some(oc) => writeln!(o, "{:?} wins: {}", oc.winner, oc.reason)?,
        None => writeln!(o, "game abandoned")?,
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::nlmp::{embed_lmp, ext_state_bisimilarity, validate_nlmp};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn chains() -> Game {
        Game::new(embed_lmp(&fixtures::two_chain()), embed_lmp(&fixtures::three_sink())).unwrap()
    }

    fn idx(sp: &FinSpace, n: &str) -> usize {
        sp.index_of(n).unwrap()
    }

    #[test]
    fn region_is_external_bisimilarity() {
        let g = chains();
        let sol = solve(&g).unwrap();
        assert_eq!(sol.region, ext_state_bisimilarity(&g.left, &g.right).unwrap());
        let (x, x2, z2) = (idx(g.left.space(), "x"), idx(g.right.space(), "x'"), idx(g.right.space(), "z'"));
        assert!(sol.duplicator_wins(x, x2));
        assert!(!sol.duplicator_wins(x, z2));
        let m = &sol.spoiler[&(x, z2)];
        assert_eq!(m.pairs, vec![(g.left.space().full(), g.right.space().full())]);
        assert!(legal_duplicator_moves(&g, m).is_empty());
    }

    #[test]
    fn nondeterministic_region() {
        let n = fixtures::nd_branch();
        let g = Game::new(n.clone(), n.clone()).unwrap();
        assert_eq!(solve(&g).unwrap().region, ext_state_bisimilarity(&n, &n).unwrap());
    }

    #[test]
    fn idle_states_favour_duplicator() {
        let n = validate_nlmp(FinSpace::powerset(&["p"]).unwrap(), &["a"], &[]).unwrap();
        let g = Game::new(n.clone(), n).unwrap();
        assert!(solve(&g).unwrap().duplicator_wins(0, 0));
        assert!(legal_spoiler_moves(&g, &Position::start(0, 0)).is_empty());
    }

    #[test]
    fn dirac_versus_zero_uses_full_pair() {
        let d = embed_lmp(&fixtures::dirac_pair());
        let g = Game::new(d.clone(), d).unwrap();
        let (s, t) = (idx(g.left.space(), "s"), idx(g.right.space(), "t"));
        let moves = legal_spoiler_moves(&g, &Position::start(s, t));
        let full = (g.left.space().full(), g.right.space().full());
        assert!(!moves.is_empty());
        assert!(moves.iter().all(|m| m.pairs == vec![full]));
    }

    #[test]
    fn duplicator_reply_in_closed_pair_example() {
        let g = chains();
        let (x, x2) = (idx(g.left.space(), "x"), idx(g.right.space(), "x'"));
        let m = SpoilerMove { label: 0, side: 0, mu: 0, pairs: vec![(0, 1 << idx(g.right.space(), "y'"))] };
        assert_eq!(referee_step(&g, &Position::start(x, x2), &m, None), Step::Over(Outcome {
            winner: Player::Spoiler,
            reason: "Duplicator has no reply".into()
        }));
        let replies = legal_duplicator_moves(&g, &m);
        assert!(!replies.is_empty());
        assert!(replies.iter().all(|d| d.x1 == idx(g.right.space(), "y'")));
    }

    #[test]
    fn referee_rejects_false_claims() {
        let g = chains();
        let pos = Position::start(0, 0);
        let bogus = SpoilerMove { label: 0, side: 0, mu: 0, pairs: vec![(0, 0)] };
        assert!(matches!(referee_step(&g, &pos, &bogus, None), Step::Over(Outcome { winner: Player::Duplicator, .. })));
        let m = SpoilerMove { label: 0, side: 0, mu: 0, pairs: vec![(0, 1 << 1)] };
        let bad = DuplicatorMove { x0: 0, x1: 0, k: 0 };
        assert!(matches!(referee_step(&g, &pos, &m, Some(&bad)), Step::Over(Outcome { winner: Player::Spoiler, .. })));
        let good = DuplicatorMove { x0: 1, x1: 1, k: 0 };
        assert_eq!(referee_step(&g, &pos, &m, Some(&good)), Step::Next(Position { x0: 1, x1: 1, round: 1 }));
    }

    #[test]
    fn strategies_hold_against_random_play() {
        let g = chains();
        let sol = solve(&g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for x0 in 0..g.left.len() {
            for x1 in 0..g.right.len() {
                for _ in 0..10 {
                    let mut pos = Position::start(x0, x1);
                    let wins = sol.duplicator_wins(x0, x1);
                    for _ in 0..2 * g.num_positions() {
                        let m = if wins { random_spoiler_move(&g, &pos, &mut rng) } else { sol.spoiler_move(&g, &pos) };
                        let Some(m) = m else { break };
                        let d = if wins { sol.duplicator_move(&g, &m) } else { random_duplicator_move(&g, &m, &mut rng) };
                        match referee_step(&g, &pos, &m, d.as_ref()) {
                            Step::Next(p) => {
                                assert_eq!(sol.duplicator_wins(p.x0, p.x1), wins);
                                pos = p;
                            }
                            Step::Over(o) => {
                                assert_eq!(o.winner == Player::Duplicator, wins);
                                break;
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn interactive_session_replays() {
        let g = chains();
        let sol = solve(&g).unwrap();
        let (x, z2) = (idx(g.left.space(), "x"), idx(g.right.space(), "z'"));
        let mut input = io::Cursor::new("nonsense\nx0=x x1=y' k=0\n");
        let mut out = Vec::new();
        let t = play_interactive(&g, &sol, Player::Duplicator, (x, z2), &mut input, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("could not read move"));
        assert_eq!(t.outcome.as_ref().unwrap().winner, Player::Spoiler);
        assert_eq!(replay(&g, &t), t.outcome);

        let mut input = io::Cursor::new("pick=0\n");
        let t = play_interactive(&g, &sol, Player::Spoiler, (0, 0), &mut input, &mut Vec::new()).unwrap();
        assert_eq!(t.rounds.len(), 1);
        assert_eq!(t.outcome.as_ref().unwrap().winner, Player::Duplicator);
        assert_eq!(replay(&g, &t), t.outcome);

        let mut input = io::Cursor::new("quit\n");
        let t = play_interactive(&g, &sol, Player::Spoiler, (0, 0), &mut input, &mut Vec::new()).unwrap();
        assert!(t.abandoned);
        assert_eq!(replay(&g, &t), None);
        let json = serde_json::to_string(&t).unwrap();
        let back: Transcript = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn move_syntax_round_trips() {
        let g = chains();
        for m in legal_spoiler_moves(&g, &Position::start(0, 0)) {
            assert_eq!(parse_spoiler_move(&g, &format_spoiler_move(&g, &m)).unwrap(), m);
        }
        let d = DuplicatorMove { x0: 1, x1: 2, k: 0 };
        assert_eq!(parse_duplicator_move(&g, &format_duplicator_move(&g, &d)).unwrap(), d);
    }
}
