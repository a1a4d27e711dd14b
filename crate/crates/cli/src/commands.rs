use std::io::{BufReader, Write};

use lmpbench::bisim::{
    delta_bisimilarity, event_bisimilarity, ext_bisimilarity, is_cospan, is_delta_bisim, is_event_bisim, is_ext_bisim,
    is_oplus_bisim, is_span, is_state_bisim, make_cospan_witness, oplus_bisimilar, oplus_bisimilarity, oplus_p_bisimilar,
    state_bisimilarity, v_final_check, vee_bisimilarity, BisimVerdict, Cospan, Witness,
};
use lmpbench::game::{self, format_spoiler_move, Game, Player, Transcript};
use lmpbench::lmp::logic::distinguishing_formula;
use lmpbench::lmp::stable::stability_violation;
use lmpbench::lmp::{check_zigzag, direct_sum, parse_formula, quotient, semantics, smallest_stable, Lmp};
use lmpbench::measurable::{FinSpace, Rel};
use lmpbench::model::{Kind, Model, ModelFile};
use lmpbench::nlmp::{
    ext_event_bisimilarity, ext_hit_bisimilarity, ext_state_bisimilarity, int_event_bisimilarity, int_hit_bisimilarity,
    int_state_bisimilarity, is_ext_event_bisim, is_ext_hit_bisim, is_ext_state_bisim, is_int_event, is_int_hit_bisim,
    is_int_state_bisim, nlmp_semantics, separating_theta,
};
use lmpbench::random::{gen_random, RandomSpec, SigmaMode};
use lmpbench::report::{report_table, Notion};
use lmpbench::search::{search_separation, SearchBounds};
use lmpbench::Error;
use serde_json::{json, Value};

use crate::io::*;
use crate::{BisimCmd, CheckCmd, Cli, Command, Format, GameCmd, GenCmd, Internal, KindArg, LogicCmd, NlmpCmd, NlmpNotion, ReportCmd, Role, SearchCmd, SigmaArg};

/// Depth bound for distinguishing formulas in reports.
const FORMULA_DEPTH: usize = 4;

pub fn run(cli: &Cli) -> CliResult<u8> {
    let f = cli.format;
    match &cli.command {
        Command::Validate { model } => validate(f, model),
        Command::Bisim(cmd) => bisim(f, cmd),
        Command::Check(cmd) => check(f, cmd),
        Command::Logic(LogicCmd::Eval { model, formula }) => logic_eval(f, model, formula),
        Command::Quotient { model } => quotient_cmd(f, model),
        Command::Sum { left, right } => {
            let (sum, _) = direct_sum(&load_lmp(left)?, &load_lmp(right)?)?;
            print!("{}", ModelFile::from_lmp(&sum, None).to_json());
            Ok(0)
        }
        Command::Nlmp(NlmpCmd::Bisim { notion, left, right, relation, pair }) => {
            nlmp_bisim(f, *notion, left, right.as_deref(), relation.as_deref(), pair.as_deref())
        }
        Command::Game(cmd) => game_cmd(f, cmd),
        Command::Report(ReportCmd::Table { dir, expect }) => {
            let table = report_table(dir)?;
            print!("{table}");
            match expect {
                Some(path) => {
                    let want = std::fs::read_to_string(path)?;
                    if want == table {
                        Ok(0)
                    } else {
                        eprintln!("table differs from {}", path.display());
                        Ok(1)
                    }
                }
                None => Ok(0),
            }
        }
        Command::Search(SearchCmd::Separation { notions, max_states, seed, budget, labels, denominator, no_exhaustive }) => {
            let (a, b) = notions.split_once(',').ok_or_else(|| CliError::Usage("--notions expects A,B".into()))?;
            let a: Notion = a.trim().parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
            let b: Notion = b.trim().parse().map_err(|e: Error| CliError::Usage(e.to_string()))?;
            let bounds = SearchBounds {
                max_states: *max_states,
                labels: *labels,
                max_denominator: *denominator,
                sigma: SigmaMode::Mixed,
                budget: *budget,
                exhaustive: !no_exhaustive,
            };
            let r = search_separation(a, b, &bounds, *seed)?;
            emit(f, serde_json::to_value(&r).expect("serializes"), || match &r.found {
                Some(s) => format!(
                    "found: {} related by {a} but not by {b} ({}, after {} instances)\nleft:\n{}right:\n{}",
                    format_args!("({}, {})", s.pair.0, s.pair.1),
                    s.origin,
                    r.examined,
                    s.left.to_json(),
                    s.right.to_json()
                ),
                None => format!("exhausted: {} instances examined, {} over size limits, no pair related by {a} but not by {b}", r.examined, r.skipped),
            });
            Ok(verdict_code(r.found.is_some()))
        }
        Command::Gen(GenCmd::Random { kind, max_states, max_atoms, denominator, labels, sigma, max_measures, seed }) => {
            if *max_states == 0 || *denominator == 0 || *labels == 0 || *labels > 26 || max_atoms == &Some(0) {
                return Err(CliError::Usage("bounds must be positive (at most 26 labels)".into()));
            }
            if *max_states > 10 {
                return Err(CliError::Usage("at most 10 states".into()));
            }
            let spec = RandomSpec {
                kind: match kind {
                    KindArg::Lmp => Kind::Lmp,
                    KindArg::Nlmp => Kind::Nlmp,
                },
                max_states: *max_states,
                max_atoms: *max_atoms,
                max_denominator: *denominator,
                labels: *labels,
                sigma: match sigma {
                    SigmaArg::Powerset => SigmaMode::Powerset,
                    SigmaArg::Coarse => SigmaMode::Coarse,
                    SigmaArg::Mixed => SigmaMode::Mixed,
                },
                max_measures: *max_measures,
            };
            print!("{}", gen_random(&spec, *seed).to_json());
            Ok(0)
        }
    }
}

fn validate(f: Format, path: &std::path::Path) -> CliResult<u8> {
    let file = load_file(path)?;
    let (kind, space, labels) = match file.to_model()? {
        Model::Lmp(l) => ("lmp", l.space().clone(), l.labels().to_vec()),
        Model::Nlmp(n) => ("nlmp", n.space().clone(), n.labels().to_vec()),
    };
    let atoms = space.atom_names();
    emit(f, json!({ "valid": true, "kind": kind, "states": space.names(), "atoms": atoms, "labels": labels }), || {
        format!(
            "valid {kind}: {} states, {} atoms, labels {}\natoms: {}",
            space.len(),
            atoms.len(),
            labels.join(", "),
            fmt_classes(&atoms)
        )
    });
    Ok(0)
}

fn verdict_json(v: &BisimVerdict) -> Value {
    serde_json::to_value(v).expect("verdict serializes")
}

fn print_verdict(f: Format, what: &str, v: &BisimVerdict) -> u8 {
    emit(f, verdict_json(v), || {
        let mut s = format!("{what}: {}", if v.holds { "holds" } else { "fails" });
        if let Some(w) = &v.witness {
            s.push_str(&format!("\nwitness: {}", serde_json::to_string(w).expect("witness serializes")));
        }
        s
    });
    verdict_code(v.holds)
}

fn print_relation(f: Format, what: &str, left: &FinSpace, right: &FinSpace, r: &Rel) -> u8 {
    let pairs = r.to_names(left, right);
    emit(f, json!({ "relation": what, "pairs": pairs }), || format!("{what}: {}", fmt_pairs(&pairs)));
    0
}

fn print_membership(f: Format, what: &str, names: (&str, &str), related: bool, extra: Value, human_extra: String) -> u8 {
    emit(f, json!({ "relation": what, "pair": [names.0, names.1], "related": related, "detail": extra }), || {
        let mut s = format!("{what}: ({}, {}) {}", names.0, names.1, if related { "related" } else { "not related" });
        if !human_extra.is_empty() {
            s.push('\n');
            s.push_str(&human_extra);
        }
        s
    });
    verdict_code(related)
}

/// The process an internal check runs on, and how a pair maps into it.
fn internal_process(args: &Internal) -> CliResult<(Lmp, Option<(usize, usize)>)> {
    let left = load_lmp(&args.left)?;
    match &args.right {
        None => {
            let pair = args.pair.as_deref().map(|p| parse_pair(p, left.space(), left.space())).transpose()?;
            Ok((left, pair))
        }
        Some(r) => {
            let right = load_lmp(r)?;
            let pair = args.pair.as_deref().map(|p| parse_pair(p, left.space(), right.space())).transpose()?;
            let (sum, tags) = direct_sum(&left, &right)?;
            Ok((sum, pair.map(|(s, t)| (tags.inl(s), tags.inr(t)))))
        }
    }
}

fn bisim(f: Format, cmd: &BisimCmd) -> CliResult<u8> {
    match cmd {
        BisimCmd::State(args) | BisimCmd::Event(args) => {
            let state = matches!(cmd, BisimCmd::State(_));
            let what = if state { "state bisimilarity" } else { "event bisimilarity" };
            let (p, pair) = internal_process(args)?;
            if let Some(path) = &args.relation {
                let r = load_relation(path, p.space(), p.space())?;
                let v = if state { is_state_bisim(&p, &r)? } else { is_event_bisim(&p, &r)? };
                return Ok(print_verdict(f, if state { "state bisimulation" } else { "event bisimulation" }, &v));
            }
            let rel = if state { state_bisimilarity(&p) } else { event_bisimilarity(&p) };
            if let Some((s, t)) = pair {
                let related = rel.contains(s, t);
                let formula = if related { None } else { distinguishing_formula(&p, s, t, FORMULA_DEPTH)? };
                let (extra, human) = match &formula {
                    Some((phi, at_first)) => {
                        let holder = if *at_first { s } else { t };
                        (json!({ "formula": phi.to_string(), "true_at": p.space().name(holder) }), format!("distinguishing formula {phi}, true at {}", p.space().name(holder)))
                    }
                    None => (Value::Null, String::new()),
                };
                return Ok(print_membership(f, what, (p.space().name(s), p.space().name(t)), related, extra, human));
            }
            let classes = classes(p.space(), &rel.classes().expect("bisimilarity is an equivalence"));
            emit(f, json!({ "relation": what, "classes": classes }), || format!("{what} classes: {}", fmt_classes(&classes)));
            Ok(0)
        }
        BisimCmd::External(args) => {
            let (l, r) = (load_lmp(&args.left)?, load_lmp(&args.right)?);
            if let Some(path) = &args.relation {
                let rel = load_relation(path, l.space(), r.space())?;
                return Ok(print_verdict(f, "external bisimulation", &is_ext_bisim(&l, &r, &rel)?));
            }
            let rel = ext_bisimilarity(&l, &r)?;
            pair_or_relation(f, "external bisimilarity", &l, &r, &rel, args.pair.as_deref())
        }
        BisimCmd::Delta(args) => {
            let (l, r) = (load_lmp(&args.left)?, load_lmp(&args.right)?);
            if let Some(path) = &args.relation {
                let rel = load_relation(path, l.space(), r.space())?;
                return Ok(print_verdict(f, "Δ-bisimulation", &is_delta_bisim(&l, &r, &rel)?));
            }
            let rel = delta_bisimilarity(&l, &r)?;
            pair_or_relation(f, "Δ-bisimilarity", &l, &r, &rel, args.pair.as_deref())
        }
        BisimCmd::Oplus(args) => {
            let (l, r) = (load_lmp(&args.left)?, load_lmp(&args.right)?);
            if let Some(path) = &args.relation {
                let (sum, _) = direct_sum(&l, &r)?;
                let rel = load_relation(path, sum.space(), sum.space())?;
                return Ok(print_verdict(f, "⊕-bisimulation", &is_oplus_bisim(&l, &r, &rel)?));
            }
            if let Some(p) = &args.pair {
                let (s, t) = parse_pair(p, l.space(), r.space())?;
                return Ok(print_verdict(f, "⊕-bisimilar", &oplus_bisimilar(&l, &r, s, t)?));
            }
            let rel = oplus_bisimilarity(&l, &r)?;
            Ok(print_relation(f, "⊕-bisimilarity", l.space(), r.space(), &rel))
        }
        BisimCmd::Vee(args) => {
            let (l, r) = (load_lmp(&args.left)?, load_lmp(&args.right)?);
            if args.relation.is_some() {
                return Err(CliError::Usage("vee takes no --relation; use `check cospan` to verify a witness".into()));
            }
            if let Some(p) = &args.pair {
                let (s, t) = parse_pair(p, l.space(), r.space())?;
                return Ok(match make_cospan_witness(&l, &r, s, t)? {
                    Some(c) => {
                        let v = is_cospan(&l, &r, &c, s, t)?;
                        print_verdict(f, "∨-bisimilar", &v.verdict)
                    }
                    None => print_membership(f, "∨-bisimilarity", (l.space().name(s), r.space().name(t)), false, Value::Null, String::new()),
                });
            }
            let (sum, _) = direct_sum(&l, &r)?;
            let classes = classes(sum.space(), &smallest_stable(&sum));
            let pairs = vee_bisimilarity(&l, &r)?.to_names(l.space(), r.space());
            emit(f, json!({ "relation": "∨-bisimilarity", "classes": classes, "pairs": pairs }), || {
                format!("classes in the sum: {}\n∨-bisimilar pairs: {}", fmt_classes(&classes), fmt_pairs(&pairs))
            });
            Ok(0)
        }
        BisimCmd::OplusP(args) => {
            let (l, r) = (load_lmp(&args.left)?, load_lmp(&args.right)?);
            let p = args.pair.as_deref().ok_or_else(|| CliError::Usage("oplusP needs --pair s,t".into()))?;
            let (s, t) = parse_pair(p, l.space(), r.space())?;
            let rep = oplus_p_bisimilar(&l, &r, s, t)?;
            Ok(print_verdict(f, "⊕_P-bisimilar", &rep.verdict))
        }
    }
}

fn pair_or_relation(f: Format, what: &str, l: &Lmp, r: &Lmp, rel: &Rel, pair: Option<&str>) -> CliResult<u8> {
    match pair {
        Some(p) => {
            let (s, t) = parse_pair(p, l.space(), r.space())?;
            Ok(print_membership(f, what, (l.space().name(s), r.space().name(t)), rel.contains(s, t), Value::Null, String::new()))
        }
        None => Ok(print_relation(f, what, l.space(), r.space(), rel)),
    }
}

fn check(f: Format, cmd: &CheckCmd) -> CliResult<u8> {
    match cmd {
        CheckCmd::Zigzag { source, target, map } => {
            let (s, t) = (load_lmp(source)?, load_lmp(target)?);
            let m = load_map(&map.map, s.space(), t.space())?;
            let rep = check_zigzag(&s, &t, &m)?;
            emit(f, serde_json::to_value(&rep).expect("serializes"), || match &rep.counterexample {
                None => "zigzag: holds".into(),
                Some(c) => format!("zigzag: fails\nwitness: {}", serde_json::to_string(c).expect("serializes")),
            });
            Ok(verdict_code(rep.holds))
        }
        CheckCmd::Span { left, right, apex, f: fp, g: gp } => {
            let (l, r, w) = (load_lmp(left)?, load_lmp(right)?, load_lmp(apex)?);
            let fm = load_map(fp, w.space(), l.space())?;
            let gm = load_map(gp, w.space(), r.space())?;
            let rep = is_span(&l, &r, &w, &fm, &gm)?;
            Ok(print_verdict(f, "span of zigzags", &rep.verdict))
        }
        CheckCmd::Cospan { left, right, apex, f: fp, g: gp, pair } => {
            let (l, r, w) = (load_lmp(left)?, load_lmp(right)?, load_lmp(apex)?);
            let c = Cospan { f: load_map(fp, l.space(), w.space())?, g: load_map(gp, r.space(), w.space())?, apex: w };
            let (s, t) = parse_pair(pair, l.space(), r.space())?;
            let v = is_cospan(&l, &r, &c, s, t)?;
            emit(f, serde_json::to_value(&v).expect("serializes"), || {
                let mut s = format!("cospan: {}, maps {}surjective", if v.verdict.holds { "holds" } else { "fails" }, if v.surjective { "" } else { "not " });
                if let Some(w) = &v.verdict.witness {
                    s.push_str(&format!("\nwitness: {}", serde_json::to_string(w).expect("serializes")));
                }
                s
            });
            Ok(verdict_code(v.verdict.holds))
        }
        CheckCmd::Vfinal { source, target, map } => {
            let (s, t) = (load_lmp(source)?, load_lmp(target)?);
            let m = load_map(&map.map, s.space(), t.space())?;
            let holds = v_final_check(&s, &t, &m)?;
            emit(f, json!({ "v_final": holds }), || format!("V-final: {}", if holds { "yes" } else { "no" }));
            Ok(verdict_code(holds))
        }
        CheckCmd::Stable { model, family } => {
            let l = load_lmp(model)?;
            let fam = load_family(family, l.space())?;
            let v = stability_violation(&l, &fam)?;
            let violation = v.as_ref().map(|(a, set, q)| json!({ "label": l.labels()[*a], "set": l.space().names_of(*set), "threshold": q }));
            emit(f, json!({ "stable": v.is_none(), "violation": violation }), || match &v {
                None => "stable: yes".into(),
                Some((a, set, q)) => format!(
                    "stable: no\nthe states giving {} mass > {q} under {} are not a member",
                    l.space().fmt_set(*set),
                    l.labels()[*a]
                ),
            });
            Ok(verdict_code(v.is_none()))
        }
    }
}

fn logic_eval(f: Format, model: &std::path::Path, formula: &str) -> CliResult<u8> {
    let phi = parse_formula(formula)?;
    let (space, set) = match load_file(model)?.to_model()? {
        Model::Lmp(l) => {
            let s = semantics(&l, &phi)?;
            (l.space().clone(), s)
        }
        Model::Nlmp(n) => {
            let s = nlmp_semantics(&n, &phi)?;
            (n.space().clone(), s)
        }
    };
    let states = space.names_of(set);
    emit(f, json!({ "formula": phi.to_string(), "states": states }), || format!("{phi}: {}", space.fmt_set(set)));
    Ok(0)
}

fn quotient_cmd(f: Format, path: &std::path::Path) -> CliResult<u8> {
    let l = load_lmp(path)?;
    let lambda = smallest_stable(&l);
    let (q, pi) = quotient(&l, &lambda)?;
    let file = ModelFile::from_lmp(&q, None);
    let map: Vec<(String, String)> = pi.iter().enumerate().map(|(s, &t)| (l.space().name(s).to_string(), q.space().name(t).to_string())).collect();
    emit(f, json!({ "model": file, "map": map }), || {
        let mut s = file.to_json();
        for (a, b) in &map {
            s.push_str(&format!("{a} -> {b}\n"));
        }
        s
    });
    Ok(0)
}

fn nlmp_bisim(f: Format, notion: NlmpNotion, left: &std::path::Path, right: Option<&std::path::Path>, relation: Option<&std::path::Path>, pair: Option<&str>) -> CliResult<u8> {
    let l = load_nlmp(left)?;
    let external = matches!(notion, NlmpNotion::ExtState | NlmpNotion::ExtHit | NlmpNotion::ExtEvent);
    let r = match (external, right) {
        (true, Some(p)) => load_nlmp(p)?,
        (true, None) => return Err(CliError::Usage("external notions need two processes".into())),
        (false, Some(_)) => return Err(CliError::Usage("internal notions take one process".into())),
        (false, None) => l.clone(),
    };
    let name = match notion {
        NlmpNotion::IntState => "internal state bisimilarity",
        NlmpNotion::IntHit => "internal hit bisimilarity",
        NlmpNotion::IntEvent => "internal event bisimilarity",
        NlmpNotion::ExtState => "external state bisimilarity",
        NlmpNotion::ExtHit => "external hit bisimilarity",
        NlmpNotion::ExtEvent => "external event bisimilarity",
    };
    if let Some(path) = relation {
        let rel = load_relation(path, l.space(), r.space())?;
        let v = match notion {
            NlmpNotion::IntState => is_int_state_bisim(&l, &rel)?,
            NlmpNotion::IntHit => is_int_hit_bisim(&l, &rel)?,
            // the only candidate algebra is the partition into classes
            NlmpNotion::IntEvent => match rel.classes() {
                None => BisimVerdict::no(Witness::NotEquivalence),
                Some(p) if is_int_event(&l, &p)? => BisimVerdict::yes(None),
                Some(p) => BisimVerdict::no(Witness::Algebra { atoms: classes(l.space(), &p) }),
            },
            NlmpNotion::ExtState => is_ext_state_bisim(&l, &r, &rel)?,
            NlmpNotion::ExtHit => is_ext_hit_bisim(&l, &r, &rel)?,
            NlmpNotion::ExtEvent => is_ext_event_bisim(&l, &r, &rel)?,
        };
        return Ok(print_verdict(f, name, &v));
    }
    let rel = match notion {
        NlmpNotion::IntState => int_state_bisimilarity(&l),
        NlmpNotion::IntHit => int_hit_bisimilarity(&l)?,
        NlmpNotion::IntEvent => int_event_bisimilarity(&l)?,
        NlmpNotion::ExtState => ext_state_bisimilarity(&l, &r)?,
        NlmpNotion::ExtHit => ext_hit_bisimilarity(&l, &r)?,
        NlmpNotion::ExtEvent => ext_event_bisimilarity(&l, &r)?,
    };
    match pair {
        Some(p) => {
            let (s, t) = parse_pair(p, l.space(), r.space())?;
            let related = rel.contains(s, t);
            let (extra, human) = if !related && notion == NlmpNotion::ExtState {
                let sep = separating_theta(&l, &r, &rel, s, t)?;
                let conj: Vec<String> = sep
                    .conjuncts
                    .iter()
                    .map(|c| format!("μ({}|{}) {} {}", l.space().fmt_set(c.pair.0), r.space().fmt_set(c.pair.1), c.cmp.symbol(), c.q))
                    .collect();
                let text = format!(
                    "separated under {}: side {} has a transition in the set where {}",
                    l.labels()[sep.label],
                    sep.side,
                    conj.join(" and ")
                );
                (json!({ "label": l.labels()[sep.label], "side": sep.side, "conjuncts": conj }), text)
            } else {
                (Value::Null, String::new())
            };
            Ok(print_membership(f, name, (l.space().name(s), r.space().name(t)), related, extra, human))
        }
        None => Ok(print_relation(f, name, l.space(), r.space(), &rel)),
    }
}

fn load_game(left: &std::path::Path, right: &std::path::Path) -> CliResult<Game> {
    Ok(Game::new(load_nlmp(left)?, load_nlmp(right)?)?)
}

fn winner_name(p: Player) -> &'static str {
    match p {
        Player::Spoiler => "spoiler",
        Player::Duplicator => "duplicator",
    }
}

fn game_cmd(f: Format, cmd: &GameCmd) -> CliResult<u8> {
    match cmd {
        GameCmd::Solve { left, right, start } => {
            let g = load_game(left, right)?;
            let sol = game::solve(&g)?;
            let (ls, rs) = (g.left.space(), g.right.space());
            if let Some(st) = start {
                let (s, t) = parse_pair(st, ls, rs)?;
                let dup = sol.duplicator_wins(s, t);
                let m = sol.spoiler.get(&(s, t));
                emit(
                    f,
                    json!({
                        "start": [ls.name(s), rs.name(t)],
                        "winner": winner_name(if dup { Player::Duplicator } else { Player::Spoiler }),
                        "rounds": sol.rank.get(&(s, t)),
                        "spoiler_move": m.map(|m| format_spoiler_move(&g, m)),
                    }),
                    || match m {
                        None => format!("duplicator wins from ({}, {})", ls.name(s), rs.name(t)),
                        Some(m) => format!(
                            "spoiler wins from ({}, {}) within {} rounds\nopening move: {}",
                            ls.name(s),
                            rs.name(t),
                            sol.rank[&(s, t)],
                            format_spoiler_move(&g, m)
                        ),
                    },
                );
                return Ok(verdict_code(dup));
            }
            let region = sol.region.to_names(ls, rs);
            let strategy: Vec<Value> = sol
                .spoiler
                .iter()
                .map(|(&(s, t), m)| json!({ "position": [ls.name(s), rs.name(t)], "rounds": sol.rank[&(s, t)], "move": format_spoiler_move(&g, m) }))
                .collect();
            emit(f, json!({ "duplicator_region": region, "spoiler_strategy": strategy }), || {
                let mut s = format!("duplicator wins from: {}\n", fmt_pairs(&region));
                for (&(x, y), m) in &sol.spoiler {
                    s.push_str(&format!("spoiler at ({}, {}) [{} rounds]: {}\n", ls.name(x), rs.name(y), sol.rank[&(x, y)], format_spoiler_move(&g, m)));
                }
                s
            });
            Ok(0)
        }
        GameCmd::Play { left, right, start, role, transcript } => {
            let g = load_game(left, right)?;
            let sol = game::solve(&g)?;
            let st = parse_pair(start, g.left.space(), g.right.space())?;
            let human = match role {
                Role::Spoiler => Player::Spoiler,
                Role::Duplicator => Player::Duplicator,
            };
            let stdin = std::io::stdin();
            let mut input = BufReader::new(stdin.lock());
            let mut out = std::io::stdout();
            let t = game::play_interactive(&g, &sol, human, st, &mut input, &mut out)?;
            out.flush()?;
            if let Some(path) = transcript {
                std::fs::write(path, serde_json::to_string_pretty(&t).expect("transcript serializes") + "\n")?;
            }
            Ok(0)
        }
        GameCmd::Replay { left, right, transcript } => {
            let g = load_game(left, right)?;
            let t: Transcript = read_json(transcript)?;
            let outcome = game::replay(&g, &t);
            let matches = outcome == t.outcome;
            emit(f, json!({ "outcome": outcome, "matches_recorded": matches }), || match &outcome {
                Some(o) => format!("{} wins: {}{}", winner_name(o.winner), o.reason, if matches { "" } else { " (differs from the recorded outcome)" }),
                None => "game was abandoned".into(),
            });
            Ok(verdict_code(matches))
        }
    }
}
