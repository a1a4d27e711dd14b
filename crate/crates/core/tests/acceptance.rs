//! One line per acceptance criterion; exits nonzero if any fails.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use lmpbench::bisim::{
    brute_oracle_state_bisimilarity, cospan_family_is_stable, delta_bisimilarity, is_cospan, is_delta_bisim, is_ext_bisim,
    is_state_bisim, make_cospan_witness, oplus_bisimilar, oplus_p_bisimilar, state_bisimilarity, vee_bisimilarity, Witness,
};
use lmpbench::bisim::ext_bisimilarity;
use lmpbench::fixtures;
use lmpbench::game::{self, Game, Player, Position};
use lmpbench::lmp::{direct_sum, smallest_stable};
use lmpbench::measurable::{
    bi_sigma_atoms, delta_bowtie, delta_times_trace, descend, lift_complete, Cmp, FinSpace, Measure, PairFamily, Partition, Rel,
};
use lmpbench::nlmp::{
    ext_event_bisimilarity, ext_hit_bisimilarity, ext_state_bisimilarity, int_event_bisimilarity, int_hit_bisimilarity,
    int_state_bisimilarity,
};
use lmpbench::random::{random_lmp, random_lmp_pair, random_nlmp, random_nlmp_pair, rng_for, RandomSpec};
use lmpbench::report::{self, load_corpus};
use lmpbench::{Error, Rational};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("took {:?}, limit {:?}", start.elapsed(), limit))
}

fn err(e: Error) -> String {
    e.to_string()
}

fn c1() -> Outcome {
    let start = Instant::now();
    let (l, r) = (fixtures::two_chain(), fixtures::three_sink());
    let (sum, tags) = direct_sum(&l, &r).map_err(err)?;
    let rel = Rel::from_names(sum.space(), sum.space(), &[("L.x", "R.x'"), ("L.y", "R.z'"), ("R.y'", "R.z'")]).map_err(err)?;
    ensure(is_state_bisim(&sum, &rel).map_err(err)?.holds, || "R is not a state bisimulation on the sum".into())?;
    let d = descend(&tags, &rel);
    let v = is_ext_bisim(&l, &r, &d).map_err(err)?;
    ensure(!v.holds, || "descent passed the external check".into())?;
    let expected = Witness::ClosedPair {
        label: "a".into(),
        pair: ("x".into(), "x'".into()),
        sets: (vec![], vec!["y'".into()]),
        masses: (Rational::zero(), Rational::one()),
    };
    ensure(v.witness.as_ref() == Some(&expected), || format!("witness {:?}", v.witness))?;
    within(start, Duration::from_secs(1))?;
    Ok("witness (∅,{y'}) with masses 0 vs 1".into())
}

fn c2() -> Outcome {
    let start = Instant::now();
    let (sum, _) = direct_sum(&fixtures::fan(), &fixtures::fan_loop()).map_err(err)?;
    let got: Vec<Vec<String>> = smallest_stable(&sum).blocks().iter().map(|&b| sum.space().names_of(b)).collect();
    let want = vec![vec!["L.s1", "L.s2", "R.s1'"], vec!["L.s3", "R.s3'"], vec!["R.s4'"]];
    ensure(got == want, || format!("atoms {got:?}"))?;
    within(start, Duration::from_secs(1))?;
    Ok("atoms {s1,s2,s1'} {s3,s3'} {s4'}".into())
}

fn c3() -> Outcome {
    let start = Instant::now();
    let spec = RandomSpec::default();
    let mut coarse = 0;
    for seed in 0..200 {
        let l = random_lmp(&spec, &mut rng_for(3_000 + seed));
        coarse += !l.space().is_powerset() as usize;
        let oracle = brute_oracle_state_bisimilarity(&l).map_err(err)?;
        ensure(state_bisimilarity(&l) == oracle, || format!("seed {seed} disagrees"))?;
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("200 instances ({coarse} coarse) in {:.1?}", start.elapsed()))
}

fn c4() -> Outcome {
    let spec = RandomSpec { max_states: 5, ..RandomSpec::default() };
    let (mut pairs, mut skipped) = (0, 0);
    for seed in 0..100 {
        let (l, r) = random_lmp_pair(&spec, 4_000 + seed);
        let delta = delta_bisimilarity(&l, &r).map_err(err)?;
        ensure(is_delta_bisim(&l, &r, &delta).map_err(err)?.holds, || format!("seed {seed}: Δ relation not certified"))?;
        let ext = ext_bisimilarity(&l, &r).map_err(err)?;
        let (sum, tags) = direct_sum(&l, &r).map_err(err)?;
        let sx = descend(&tags, &state_bisimilarity(&sum));
        let vee = vee_bisimilarity(&l, &r).map_err(err)?;
        ensure(delta.is_subset(&ext), || format!("seed {seed}: Δ ⊄ ×"))?;
        ensure(ext.is_subset(&sx), || format!("seed {seed}: × ⊄ (~s)×"))?;
        ensure(sx.is_subset(&vee), || format!("seed {seed}: (~s)× ⊄ ∨"))?;
        for (s, t) in sx.pairs() {
            match oplus_bisimilar(&l, &r, s, t) {
                Ok(v) => ensure(v.holds, || format!("seed {seed}: (~s)× ⊄ ⊕"))?,
                Err(Error::TooLarge { .. }) => skipped += 1,
                Err(e) => return Err(e.to_string()),
            }
            pairs += 1;
        }
    }
    Ok(format!("100 pairs, {pairs} related pairs checked against ⊕, {skipped} over the size limit"))
}

fn c5() -> Outcome {
    let spec = RandomSpec::default();
    for seed in 0..100 {
        let l = random_lmp(&spec, &mut rng_for(5_000 + seed));
        let (sum, tags) = direct_sum(&l, &l).map_err(err)?;
        ensure(state_bisimilarity(&sum) == lift_complete(&tags, &state_bisimilarity(&l)), || format!("seed {seed}"))?;
    }
    Ok("100 instances".into())
}

fn c6() -> Outcome {
    let corpus = load_corpus(fixtures::corpus_dir()).map_err(err)?;
    let mut checked = 0;
    for p in &corpus {
        let vee = vee_bisimilarity(&p.left, &p.right).map_err(err)?;
        for (s, t) in vee.pairs() {
            let c = make_cospan_witness(&p.left, &p.right, s, t)
                .map_err(err)?
                .ok_or_else(|| format!("{}/{}: no cospan", p.left_name, p.right_name))?;
            ensure(is_cospan(&p.left, &p.right, &c, s, t).map_err(err)?.verdict.holds, || "cospan rejected".into())?;
            ensure(c.f[s] == c.g[t], || "pair not identified".into())?;
            ensure(cospan_family_is_stable(&p.left, &p.right, &c).map_err(err)?, || "family not stable".into())?;
            checked += 1;
        }
    }
    Ok(format!("{checked} ∨-bisimilar pairs over {} corpus pairs", corpus.len()))
}

fn c7() -> Outcome {
    let spec = RandomSpec::default();
    let mut positives = 0;
    for seed in 0..50 {
        let (l, r) = random_lmp_pair(&spec, 7_000 + seed);
        let vee = vee_bisimilarity(&l, &r).map_err(err)?;
        for s in 0..l.len() {
            for t in 0..r.len() {
                let rep = oplus_p_bisimilar(&l, &r, s, t).map_err(err)?;
                ensure(rep.verdict.holds == vee.contains(s, t), || format!("seed {seed}: disagreement at ({s},{t})"))?;
                if let Some(w) = rep.witness {
                    ensure(w.relation.contains(w.related.0, w.related.1), || "witness misses the pair".into())?;
                    ensure(is_state_bisim(&w.process, &w.relation).map_err(err)?.holds, || "witness rejected".into())?;
                    positives += 1;
                }
            }
        }
    }
    Ok(format!("50 pairs, {positives} witnesses re-verified"))
}

fn c8() -> Outcome {
    let spec = RandomSpec::nlmp();
    let mut skipped = 0;
    for seed in 0..100 {
        let n = random_nlmp(&spec, &mut rng_for(8_000 + seed));
        let st = int_state_bisimilarity(&n);
        let hit = int_hit_bisimilarity(&n).map_err(err)?;
        let ev = int_event_bisimilarity(&n).map_err(err)?;
        ensure(st == hit, || format!("seed {seed}: internal state ≠ hit"))?;
        ensure(hit.is_subset(&ev), || format!("seed {seed}: internal hit ⊄ event"))?;
        let (l, r) = random_nlmp_pair(&spec, 8_500 + seed);
        let est = ext_state_bisimilarity(&l, &r).map_err(err)?;
        let ehit = ext_hit_bisimilarity(&l, &r).map_err(err)?;
        ensure(est == ehit, || format!("seed {seed}: external state ≠ hit"))?;
        match ext_event_bisimilarity(&l, &r) {
            Ok(eev) => ensure(ehit.is_subset(&eev), || format!("seed {seed}: external hit ⊄ event"))?,
            Err(Error::TooLarge { .. }) => skipped += 1,
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(format!("100 processes and 100 pairs, {skipped} external event checks over the atom limit"))
}

fn c9() -> Outcome {
    let start = Instant::now();
    let spec = RandomSpec::nlmp();
    let mut plays = 0;
    for seed in 0..50u64 {
        let (l, r) = random_nlmp_pair(&spec, 9_000 + seed);
        let g = Game::new(l, r).map_err(err)?;
        let sol = game::solve(&g).map_err(err)?;
        ensure(sol.region == ext_state_bisimilarity(&g.left, &g.right).map_err(err)?, || format!("seed {seed}: region differs"))?;
        let rng = RefCell::new(rng_for(90_000 + seed));
        for _ in 0..20 {
            let start_pos = {
                let mut rng = rng.borrow_mut();
                (rng.gen_range(0..g.left.len()), rng.gen_range(0..g.right.len()))
            };
            let dup = sol.duplicator_wins(start_pos.0, start_pos.1);
            let t = game::play(
                &g,
                start_pos,
                |pos: &Position| {
                    Ok(if dup { game::random_spoiler_move(&g, pos, &mut *rng.borrow_mut()) } else { sol.spoiler_move(&g, pos) })
                },
                |_: &Position, m| {
                    Ok(Some(if dup { sol.duplicator_move(&g, m) } else { game::random_duplicator_move(&g, m, &mut *rng.borrow_mut()) }))
                },
            )
            .map_err(|e| e.to_string())?;
            for round in &t.rounds {
                if let Some(d) = &round.duplicator {
                    ensure(sol.duplicator_wins(d.x0, d.x1) == dup, || format!("seed {seed}: play left the predicted region"))?;
                }
            }
            let outcome = t.outcome.clone().ok_or("play abandoned")?;
            ensure((outcome.winner == Player::Duplicator) == dup, || format!("seed {seed}: wrong winner ({})", outcome.reason))?;
            ensure(game::replay(&g, &t) == t.outcome, || format!("seed {seed}: replay differs"))?;
            plays += 1;
        }
    }
    within(start, Duration::from_secs(600))?;
    Ok(format!("50 pairs, {plays} replayed plays in {:.1?}", start.elapsed()))
}

fn c10() -> Outcome {
    let table = report::report_table(fixtures::corpus_dir()).map_err(err)?;
    let golden = std::fs::read_to_string(fixtures::corpus_dir().join("expected_table.md")).map_err(|e| e.to_string())?;
    ensure(table == golden, || "table differs from the golden file".into())?;
    let rows: Vec<Vec<&str>> = table
        .lines()
        .filter(|l| l.starts_with("| ~") || l.starts_with("| (~"))
        .map(|l| l.trim_matches('|').split('|').map(str::trim).skip(1).collect())
        .collect();
    ensure(rows.len() == 6, || format!("{} rows", rows.len()))?;
    let expected: BTreeSet<(usize, usize)> =
        [(3, 1), (3, 2), (4, 1), (4, 2), (5, 1), (5, 2), (5, 3), (5, 4), (6, 1), (6, 2), (6, 3), (6, 4), (6, 5)].into();
    let mut got = BTreeSet::new();
    for (i, row) in rows.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            if *cell == report::NOT_FINITE {
                got.insert((i + 1, j + 1));
            }
        }
    }
    ensure(got == expected, || format!("n/a cells {got:?}"))?;
    Ok(format!("{} n/a cells, golden file matches", got.len()))
}

fn random_measures<R: Rng>(rng: &mut R, count: usize) -> Vec<Measure> {
    let mut out: Vec<Measure> = (0..count)
        .map(|_| {
            let den = rng.gen_range(1..=8i64);
            let a = rng.gen_range(0..=den);
            let b = rng.gen_range(0..=den - a);
            Measure::new(vec![Rational::new(a, den), Rational::new(b, den)]).expect("subprobability")
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

fn two_atom_space<R: Rng>(rng: &mut R, prefix: &str) -> FinSpace {
    let n = rng.gen_range(2..=4);
    let names: Vec<String> = (0..n).map(|i| format!("{prefix}{i}")).collect();
    let split = rng.gen_range(1..n);
    let labels: Vec<usize> = (0..n).map(|i| (i >= split) as usize).collect();
    FinSpace::from_parts(names, Partition::from_labels(&labels)).expect("valid")
}

fn c11() -> Outcome {
    for seed in 0..50 {
        let mut rng = rng_for(11_000 + seed);
        let (ls, rs) = (two_atom_space(&mut rng, "a"), two_atom_space(&mut rng, "b"));
        let count = rng.gen_range(1..=4);
        let (ul, ur) = (random_measures(&mut rng, count), random_measures(&mut rng, count));
        let lm = ls.atoms().members().map_err(err)?;
        let rm = rs.atoms().members().map_err(err)?;
        let d: Vec<_> = (0..rng.gen_range(1..=3)).map(|_| (lm[rng.gen_range(0..lm.len())], rm[rng.gen_range(0..rm.len())])).collect();
        let got = delta_times_trace(&ls, &rs, &ul, &ur, &PairFamily::new(ul.len(), ur.len(), d.iter().copied())).map_err(err)?;
        // every q = k/1680 covers all values with denominator ≤ 8 and the midpoints between them
        let grid = 2 * 840;
        let mut gens = Vec::new();
        for &(q, q2) in &d {
            for k in 0..=grid {
                let t = Rational::new(k, grid);
                gens.push((delta_bowtie(&ls, &ul, q, Cmp::Lt, &t).map_err(err)?, delta_bowtie(&rs, &ur, q2, Cmp::Lt, &t).map_err(err)?));
            }
        }
        gens.sort();
        gens.dedup();
        let brute = match bi_sigma_atoms(ul.len(), ur.len(), &gens).map_err(err)? {
            None => PairFamily::new(ul.len(), ur.len(), []),
            Some(a) => a.to_family().map_err(err)?,
        };
        ensure(got == brute, || format!("seed {seed}: traces differ"))?;
    }
    Ok("50 instances".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("restricted relation on the chain sum", c1),
        ("logical classes of the fan sum", c2),
        ("state bisimilarity matches the brute-force oracle", c3),
        ("inclusion lattice on random pairs", c4),
        ("bisimilarity of S⊕S is the complete lift", c5),
        ("cospan witnesses on the corpus", c6),
        ("⊕ with auxiliary summand agrees with ∨", c7),
        ("NLMP bisimilarity chain", c8),
        ("game region and replayed plays", c9),
        ("report marks finite-scale cells", c10),
        ("Δ trace against a rational grid", c11),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
