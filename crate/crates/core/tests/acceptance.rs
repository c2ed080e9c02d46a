//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use common::{all_targets, bits, injective, naive_cff};
use hyperlearn::designs::{grow_phf, random_cff, random_phf, verify_cff};
use hyperlearn::direct::{candidates, decode_direct, learn_direct, plan_direct, DirectDesigns};
use hyperlearn::harness::{bench, check_recovery, gen_instance, BenchConfig, DesignCache};
use hyperlearn::reduced::{decode_reduced, learn_reduced_with, plan_reduced, ReducedDesigns};
use hyperlearn::{Assignment, DesignMatrix, Error, HashFamily, Mdnf, Teacher, Verification};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Run = (Option<i32>, Vec<u8>, Vec<u8>);
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn verified_direct(n: usize, s: usize, r: usize, seed: u64) -> Result<DirectDesigns, String> {
    let d = DirectDesigns::build(n, s, r, 0.01, seed, true).map_err(|e| e.to_string())?;
    ensure(
        d.a.verified() == Verification::Verified && d.b.verified() == Verification::Verified,
        || format!("designs for n={n} s={s} r={r} not verified"),
    )?;
    Ok(d)
}

fn exact_recovery_direct() -> Outcome {
    let mut exhaustive = 0;
    for n in 1..=5 {
        for s in 1..=2 {
            for r in 1..=2.min(n) {
                let d = verified_direct(n, s, r, 0)?;
                for f in all_targets(n, s, r) {
                    let mut t = Teacher::new(f.clone());
                    let (h, _) = learn_direct(n, s, r, &mut t, d.a.clone(), d.b.clone())
                        .map_err(|e| e.to_string())?;
                    ensure(h.equivalent(&f).unwrap(), || {
                        format!("n={n} s={s} r={r}: {f} learned as {h}")
                    })?;
                    exhaustive += 1;
                }
            }
        }
    }
    let d = verified_direct(12, 3, 2, 1)?;
    for seed in 0..1000 {
        let f = gen_instance(12, 3, 2, seed).map_err(|e| e.to_string())?;
        let mut t = Teacher::new(f.clone());
        let (h, _) =
            learn_direct(12, 3, 2, &mut t, d.a.clone(), d.b.clone()).map_err(|e| e.to_string())?;
        ensure(h.equivalent(&f).unwrap(), || {
            format!("(12,3,2) seed {seed}: {f} learned as {h}")
        })?;
    }
    Ok(format!(
        "{exhaustive}/{exhaustive} exhaustive targets (n<=5, s<=2, r<=2), 1000/1000 at (12,3,2)"
    ))
}

/// Every `R ∪ {j}` is mapped one-to-one by some member, which is all the
/// elimination step needs from the family for this target.
fn certified_for(family: &HashFamily, f: &Mdnf) -> bool {
    let funcs: Vec<&[usize]> = family.funcs().iter().map(|h| h.images()).collect();
    let relevant: Vec<usize> = f.relevant_vars().unwrap().iter().map(|v| v - 1).collect();
    (0..family.n()).filter(|j| !relevant.contains(j)).all(|j| {
        let mut set = relevant.clone();
        set.push(j);
        funcs.iter().any(|h| injective(h, &set))
    })
}

fn reduced_campaign(n: usize, count: u64, seed: u64) -> Result<(usize, usize), String> {
    let d = ReducedDesigns::build(n, 2, 2, 0.01, seed, true).map_err(|e| e.to_string())?;
    ensure(
        d.inner.a.verified() == Verification::Verified
            && d.inner.b.verified() == Verification::Verified,
        || "inner designs not verified".into(),
    )?;
    let (plan, batch) =
        plan_reduced(n, 2, 2, d.family.clone(), d.inner.a, d.inner.b).map_err(|e| e.to_string())?;
    let mut certified = 0;
    for k in 0..count {
        let f = gen_instance(n, 2, 2, 1000 + k).map_err(|e| e.to_string())?;
        certified += certified_for(&d.family, &f) as usize;
        let answers = Teacher::new(f.clone())
            .query_batch(&batch)
            .map_err(|e| e.to_string())?;
        let h = decode_reduced(&plan, &answers).map_err(|e| format!("n={n} instance {k}: {e}"))?;
        ensure(check_recovery(&h, &f).unwrap(), || {
            format!("n={n} instance {k}: {f} learned as {h}")
        })?;
    }
    Ok((count as usize, certified))
}

fn exact_recovery_reduced() -> Outcome {
    let (ok200, cert200) = reduced_campaign(200, 200, 0)?;
    let (ok1000, cert1000) = reduced_campaign(1000, 100, 0)?;
    ensure(cert200 == ok200 && cert1000 == ok1000, || {
        format!(
            "hash family not certified on all instances ({cert200}/{ok200}, {cert1000}/{ok1000})"
        )
    })?;

    let phf = grow_phf(50, 48, 5, 0.01, 9).map_err(|e| e.to_string())?;
    ensure(phf.verification == Verification::Verified, || {
        "(50,48,5) family not verified".into()
    })?;
    let inner = verified_direct(48, 2, 2, 9)?;
    let (rplan, rbatch) =
        plan_reduced(50, 2, 2, phf.family, inner.a, inner.b).map_err(|e| e.to_string())?;
    let direct = verified_direct(50, 2, 2, 9)?;
    let (dplan, dbatch) = plan_direct(50, 2, 2, direct.a, direct.b).map_err(|e| e.to_string())?;
    for k in 0..100 {
        let f = gen_instance(50, 2, 2, 5000 + k).map_err(|e| e.to_string())?;
        let ra = Teacher::new(f.clone()).query_batch(&rbatch).unwrap();
        let da = Teacher::new(f.clone()).query_batch(&dbatch).unwrap();
        let red = decode_reduced(&rplan, &ra).map_err(|e| e.to_string())?;
        let dir = decode_direct(&dplan, &da).map_err(|e| e.to_string())?;
        ensure(red == dir && dir == f, || {
            format!("n=50 instance {k}: hidden {f}, reduced {red}, direct {dir}")
        })?;
    }
    Ok("200/200 at n=200 and 100/100 at n=1000 (family certified per instance), 100/100 reduced = direct at n=50 (verified family)".into())
}

fn slice_claims() -> Outcome {
    let shapes = [(12, 3, 2), (10, 2, 3), (15, 4, 2), (8, 2, 2), (20, 3, 1)];
    let mut checked = 0;
    for (i, &(n, s, r)) in shapes.iter().enumerate() {
        let d = verified_direct(n, s, r, i as u64)?;
        let (plan, batch) = plan_direct(n, s, r, d.a, d.b).unwrap();
        for k in 0..100 {
            let f = gen_instance(n, s, r, 10_000 * i as u64 + k).unwrap();
            let answers = Teacher::new(f.clone()).query_batch(&batch).unwrap();
            let cands = candidates(&plan, &answers).unwrap();
            for t in f.terms() {
                ensure(cands.iter().any(|c| c.term.as_ref() == Some(t)), || {
                    format!("({n},{s},{r}) {f}: no slice yields {t}")
                })?;
            }
            for c in &cands {
                let ok = match &c.term {
                    Some(t) if !c.positive => t.rank() == n,
                    Some(t) => f.terms().iter().any(|u| t.is_subset_of(u)),
                    None => c.positive,
                };
                ensure(ok, || {
                    format!("({n},{s},{r}) {f}: slice {} gave {:?}", c.b_row, c.term)
                })?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked}/{checked} instances: every term is some slice's candidate, every candidate is full or a subterm"))
}

fn cff_verifier() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut tally = [0; 2];
    for k in 0..50 {
        let m = rng.gen_range(80..280);
        let rows: Vec<Assignment> = (0..m)
            .map(|_| Assignment::from_bits(&(0..12).map(|_| rng.gen_bool(0.5)).collect::<Vec<_>>()))
            .collect();
        let d = DesignMatrix::new(12, 2, 2, rows).unwrap();
        let fast = verify_cff(&d).map_err(|e| e.to_string())?;
        let slow = naive_cff(&bits(d.rows()), 12, 2, 2);
        ensure(fast == slow, || {
            format!("matrix {k} (m={m}): verifier {fast}, naive {slow}")
        })?;
        tally[fast as usize] += 1;
    }
    let cube = DesignMatrix::complete_cube(3, 1, 1).unwrap();
    ensure(verify_cff(&cube).unwrap(), || {
        "complete cube rejected".into()
    })?;
    let zero = DesignMatrix::new(3, 1, 1, vec![Assignment::zeros(3)]).unwrap();
    ensure(!verify_cff(&zero).unwrap(), || {
        "single zero row accepted".into()
    })?;
    Ok(format!(
        "50/50 agree with the naive checker ({} pass, {} fail); cube passes, zero row fails",
        tally[1], tally[0]
    ))
}

fn construction_rates() -> Outcome {
    let cff_ok = (0..200)
        .filter(|&seed| verify_cff(&random_cff(20, 3, 2, 0.01, seed).unwrap()).unwrap())
        .count();
    let covered = (0..1000)
        .filter(|&seed| {
            let fam = random_phf(30, 10, 3, 0.1, seed).unwrap();
            fam.funcs().iter().any(|h| h.is_injective_on(&[1, 2, 3]))
        })
        .count();
    let msg = format!("random_cff verified {cff_ok}/200 (need 185), random_phf covered {{1,2,3}} {covered}/1000 (need 850)");
    ensure(cff_ok >= 185 && covered >= 850, || msg.clone())?;
    Ok(msg)
}

/// The direct learner split into two batches.
fn two_batch_learner(
    n: usize,
    s: usize,
    r: usize,
    teacher: &mut Teacher,
    d: DirectDesigns,
) -> hyperlearn::Result<Mdnf> {
    let (plan, batch) = plan_direct(n, s, r, d.a, d.b)?;
    let half = batch.len() / 2;
    let mut answers = teacher.query_batch(&batch[..half])?;
    answers.extend(teacher.query_batch(&batch[half..])?);
    decode_direct(&plan, &answers)
}

fn non_adaptivity() -> Outcome {
    let f = Mdnf::from_sets(40, &[&[3, 9], &[22]]).unwrap();
    let d = verified_direct(40, 2, 2, 0)?;

    let mut strict = Teacher::new(f.clone());
    let (h, tr) = learn_direct(40, 2, 2, &mut strict, d.a.clone(), d.b.clone()).unwrap();
    ensure(
        h == f && tr.batches() == 1 && strict.batches_served() == 1,
        || "direct learner".into(),
    )?;
    ensure(
        matches!(
            strict.query_batch(&[Assignment::ones(40)]),
            Err(Error::NonAdaptive)
        ),
        || "sealed teacher answered again".into(),
    )?;

    let rd = ReducedDesigns::build(60, 2, 2, 0.01, 0, true).unwrap();
    let g = Mdnf::from_sets(60, &[&[3, 9], &[52]]).unwrap();
    let mut strict = Teacher::new(g.clone());
    let (h, _) =
        learn_reduced_with(60, 2, 2, &mut strict, rd.family, rd.inner.a, rd.inner.b).unwrap();
    ensure(
        h == g && strict.batches_served() == 1 && strict.is_sealed(),
        || "reduced learner".into(),
    )?;

    let mutant = two_batch_learner(40, 2, 2, &mut Teacher::new(f.clone()), d.clone());
    ensure(matches!(mutant, Err(Error::NonAdaptive)), || {
        format!("two-batch mutant not stopped: {mutant:?}")
    })?;
    let relaxed = two_batch_learner(40, 2, 2, &mut Teacher::relaxed(f.clone()), d).unwrap();
    ensure(relaxed == f, || "mutant wrong even when allowed".into())?;
    Ok("both learners use exactly one batch; the two-batch mutant fails with a non-adaptivity error".into())
}

fn scaling() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = BenchConfig {
        reps: 4,
        ..BenchConfig::scaling()
    };
    let table = bench(&config, &DesignCache::at(dir.path())).map_err(|e| e.to_string())?;
    print!("{}", table.render(false));
    ensure(
        table.rows.iter().all(|row| row.report.exact == Some(true)),
        || "a bench run was not exact".into(),
    )?;
    let wins = |algo: &str, model: &str| {
        table
            .fits
            .iter()
            .filter(|f| f.algo.to_string() == algo && f.winner() == model)
            .count()
    };
    let (red, dir) = (wins("reduced", "log"), wins("direct", "log2"));
    let msg = format!("reduced fits c*log n better in {red}/4 reps, direct fits c*(log n)^2 better in {dir}/4 reps");
    ensure(red >= 3 && dir >= 3, || msg.clone())?;
    Ok(msg)
}

fn cli(cache: &Path, args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let o = Command::new(env!("CARGO_BIN_EXE_hyperlearn"))
        .env("HYPERLEARN_CACHE", cache)
        .args(args)
        .output()
        .unwrap();
    (o.status.code(), o.stdout)
}

fn determinism() -> Outcome {
    let work = tempfile::tempdir().unwrap();
    let p = |name: &str| work.path().join(name).to_str().unwrap().to_string();
    fs::write(p("hidden.mdnf"), "mdnf n=64\n5 9\n33\n").unwrap();
    let commands: Vec<Vec<String>> = vec![
        vec![
            "gen",
            "--n",
            "30",
            "--s",
            "3",
            "--r",
            "2",
            "--seed",
            "4",
            "--out",
            "{}gen.mdnf",
        ],
        vec![
            "design", "cff", "--n", "20", "--s", "3", "--r", "2", "--verify", "--out", "{}a.cff",
        ],
        vec![
            "design", "cff", "--n", "40", "--s", "2", "--r", "2", "--seed", "3",
        ],
        vec![
            "design", "phf", "--n", "50", "--q", "48", "--d", "5", "--verify", "--out", "{}p.phf",
        ],
        vec![
            "design", "phf", "--n", "300", "--q", "20", "--d", "3", "--seed", "8",
        ],
        vec!["verify", "--design", "{}a.cff"],
        vec!["verify", "--design", "{}p.phf"],
        vec![
            "learn", "--n", "30", "--s", "3", "--r", "2", "--seed", "2", "--verify", "--check",
        ],
        vec![
            "learn",
            "--algo",
            "reduced",
            "--n",
            "64",
            "--s",
            "2",
            "--r",
            "2",
            "--seed",
            "1",
            "--hidden",
            "HIDDEN",
            "--out",
            "{}learned.mdnf",
            "--transcript",
            "{}t.txt",
        ],
        vec![
            "replay",
            "--transcript",
            "{}t.txt",
            "--s",
            "2",
            "--r",
            "2",
            "--algo",
            "reduced",
            "--seed",
            "1",
            "--hidden",
            "HIDDEN",
        ],
        vec!["bench", "--ns", "64,256", "--reps", "2", "--seed", "3"],
    ]
    .into_iter()
    .map(|c| c.into_iter().map(String::from).collect())
    .collect();

    // run A and B each start from an empty cache; run C reuses A's cache
    let caches = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut runs: Vec<Vec<Run>> = Vec::new();
    for (tag, cache) in [("A", &caches[0]), ("B", &caches[1]), ("C", &caches[0])] {
        let mut outputs = Vec::new();
        for cmd in &commands {
            let args: Vec<String> = cmd
                .iter()
                .map(|a| {
                    a.replace("{}", &p(tag))
                        .replace("HIDDEN", &p("hidden.mdnf"))
                })
                .collect();
            let refs: Vec<&str> = args.iter().map(String::as_str).collect();
            let (code, out) = cli(cache.path(), &refs);
            let file = args
                .iter()
                .zip(args.iter().skip(1))
                .filter(|(flag, _)| *flag == "--out")
                .filter_map(|(_, path)| fs::read(path).ok())
                .next()
                .unwrap_or_default();
            ensure(code == Some(0), || {
                format!("`{}` exited with {code:?}", cmd.join(" "))
            })?;
            outputs.push((code, out, file));
        }
        runs.push(outputs);
    }
    for (i, cmd) in commands.iter().enumerate() {
        ensure(runs[0][i] == runs[1][i] && runs[0][i] == runs[2][i], || {
            format!("`{}` differs between runs", cmd.join(" "))
        })?;
    }
    let transcripts: Vec<Vec<u8>> = ["A", "B", "C"]
        .iter()
        .map(|t| fs::read(p(&format!("{t}t.txt"))).unwrap())
        .collect();
    ensure(transcripts.iter().all(|t| t == &transcripts[0]), || {
        "transcripts differ".into()
    })?;
    Ok(format!(
        "{} commands byte-identical over 3 runs (two cold caches, one warm)",
        commands.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("exact recovery, direct learner", exact_recovery_direct),
        ("exact recovery, reduced learner", exact_recovery_reduced),
        ("slice candidate claims", slice_claims),
        ("CFF verifier correctness", cff_verifier),
        ("randomized construction success rates", construction_rates),
        ("non-adaptivity", non_adaptivity),
        ("scaling trends", scaling),
        ("CLI determinism", determinism),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} [{secs:.1}s]"),
            Err(reason) => {
                failures += 1;
                println!("FAIL  {name}: {reason} [{secs:.1}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
