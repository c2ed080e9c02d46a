//! Experiment plumbing: instance generation, the on-disk design cache,
//! single runs and benchmark grids.
//!
//! Every report renders deterministically from its inputs; wall time is only
//! printed when asked for.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::Rng;

use crate::boolean::{Assignment, Mdnf, Monomial, MAX_EQUIV_VARS};
use crate::designs::{cff_lower_bound, design_for, grow_phf, DesignMatrix, HashFamily};
use crate::direct::{decode_direct, learn_direct, plan_direct, DirectDesigns};
use crate::error::{Error, Result};
use crate::math::rng_for;
use crate::oracle::{Teacher, Transcript};
use crate::reduced::{decode_reduced, learn_reduced_with, plan_reduced, reduction, ReducedDesigns};

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "HYPERLEARN_CACHE";

const GEN_ATTEMPTS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Algo {
    Direct,
    Reduced,
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Direct => "direct",
            Algo::Reduced => "reduced",
        })
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Algo::Direct),
            "reduced" => Ok(Algo::Reduced),
            other => Err(Error::invalid(format!("unknown algorithm {other:?}"))),
        }
    }
}

/// Process exit code for an error: 2 design failure, 4 bad input.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DesignFailure(_) | Error::PhfFailure(_) => 2,
        Error::NonAdaptive => 1,
        _ => 4,
    }
}

/// Random reduced `s`-term MDNF with term ranks uniform in `1..=r`.
///
/// Each attempt draws `s` terms independently (rank first, then a uniform
/// subset of that size) and is rejected unless no term contains another.
pub fn gen_instance(n: usize, s: usize, r: usize, seed: u64) -> Result<Mdnf> {
    if s < 1 || r < 1 || r > n {
        return Err(Error::invalid(format!(
            "need 1 <= s and 1 <= r <= n (n={n}, s={s}, r={r})"
        )));
    }
    let mut rng = rng_for(seed, 0);
    for _ in 0..GEN_ATTEMPTS {
        let terms = (0..s)
            .map(|_| {
                let k = rng.gen_range(1..=r);
                Monomial::new(sample(&mut rng, n, k).into_iter().map(|i| i + 1))
            })
            .collect::<Result<Vec<_>>>()?;
        let f = Mdnf::new(n, terms)?;
        if f.terms().len() == s && f.is_reduced() {
            return Ok(f);
        }
    }
    Err(Error::invalid(format!(
        "no reduced {s}-term instance over {n} variables after {GEN_ATTEMPTS} attempts"
    )))
}

/// Exact comparison: truth tables up to the brute-force limit, reduced
/// forms beyond it.
pub fn check_recovery(recovered: &Mdnf, hidden: &Mdnf) -> Result<bool> {
    if recovered.n() != hidden.n() {
        return Ok(false);
    }
    if hidden.n() <= MAX_EQUIV_VARS {
        recovered.equivalent(hidden)
    } else {
        Ok(recovered.reduce() == hidden.reduce())
    }
}

/// Design files keyed by construction parameters. Entries are written once
/// through a temporary file; concurrent writers race and the first rename
/// wins. A missing or unreadable entry is rebuilt.
#[derive(Clone, Debug)]
pub struct DesignCache {
    dir: Option<PathBuf>,
}

impl DesignCache {
    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Self {
            dir: Some(dir.into()),
        }
    }

    pub fn disabled() -> Self {
        Self { dir: None }
    }

    /// `$HYPERLEARN_CACHE`, else `hyperlearn-cache` in the temp directory.
    pub fn from_env() -> Self {
        match std::env::var_os(CACHE_ENV) {
            Some(dir) if !dir.is_empty() => Self::at(dir),
            _ => Self::at(std::env::temp_dir().join("hyperlearn-cache")),
        }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn cff(
        &self,
        n: usize,
        s: usize,
        r: usize,
        delta: f64,
        seed: u64,
        verify: bool,
    ) -> Result<DesignMatrix> {
        let name = format!(
            "cff-n{n}-s{s}-r{r}-delta{delta}-seed{seed}-verify{}.txt",
            verify as u8
        );
        self.fetch(
            &name,
            |text| {
                DesignMatrix::from_text(text)
                    .ok()
                    .filter(|d| (d.n(), d.s(), d.r()) == (n, s, r))
            },
            || design_for(n, s, r, delta, seed, verify),
            DesignMatrix::to_text,
        )
    }

    pub fn phf(&self, n: usize, q: usize, d: usize, delta: f64, seed: u64) -> Result<HashFamily> {
        let name = format!("phf-n{n}-q{q}-d{d}-delta{delta}-seed{seed}.txt");
        self.fetch(
            &name,
            |text| {
                HashFamily::from_text(text)
                    .ok()
                    .filter(|f| (f.n(), f.q(), f.d()) == (n, q, d))
            },
            || grow_phf(n, q, d, delta, seed).map(|b| b.family),
            HashFamily::to_text,
        )
    }

    pub fn direct_designs(
        &self,
        n: usize,
        s: usize,
        r: usize,
        delta: f64,
        seed: u64,
        verify: bool,
    ) -> Result<DirectDesigns> {
        DirectDesigns::build_with(n, s, r, seed, |n, s, r, seed| {
            self.cff(n, s, r, delta, seed, verify)
        })
    }

    pub fn reduced_designs(
        &self,
        n: usize,
        s: usize,
        r: usize,
        delta: f64,
        seed: u64,
        verify: bool,
    ) -> Result<ReducedDesigns> {
        ReducedDesigns::build_with(
            n,
            s,
            r,
            seed,
            |n, q, d, seed| self.phf(n, q, d, delta, seed),
            |n, s, r, seed| self.cff(n, s, r, delta, seed, verify),
        )
    }

    fn fetch<T>(
        &self,
        name: &str,
        parse: impl FnOnce(&str) -> Option<T>,
        build: impl FnOnce() -> Result<T>,
        render: impl FnOnce(&T) -> String,
    ) -> Result<T> {
        let Some(dir) = &self.dir else {
            return build();
        };
        let path = dir.join(name);
        if let Some(hit) = fs::read_to_string(&path).ok().and_then(|t| parse(&t)) {
            return Ok(hit);
        }
        let value = build()?;
        // a cache that cannot be written is only slower
        let _ = store_once(dir, &path, &render(&value));
        Ok(value)
    }
}

fn store_once(dir: &Path, path: &Path, text: &str) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist_noclobber(path).map_err(|e| e.error)?;
    Ok(())
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub n: usize,
    pub s: usize,
    pub r: usize,
    pub algo: Algo,
    pub delta: f64,
    pub seed: u64,
    pub verify_designs: bool,
}

impl ExperimentConfig {
    pub fn new(n: usize, s: usize, r: usize, algo: Algo) -> Self {
        Self {
            n,
            s,
            r,
            algo,
            delta: 0.01,
            seed: 0,
            verify_designs: false,
        }
    }

    /// Errors on invalid parameters; returns warnings otherwise.
    pub fn validate(&self) -> Result<Vec<String>> {
        if self.s < 1 || self.r < 1 || self.r > self.n {
            return Err(Error::invalid(format!(
                "need 1 <= s and 1 <= r <= n (n={}, s={}, r={})",
                self.n, self.s, self.r
            )));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::invalid(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        let mut warnings = Vec::new();
        if self.r > self.s {
            warnings.push(format!(
                "r={} exceeds s={}; the size bounds assume r <= s",
                self.r, self.s
            ));
        }
        Ok(warnings)
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub n: usize,
    pub s: usize,
    pub r: usize,
    pub algo: Algo,
    pub delta: f64,
    pub seed: u64,
    pub hidden: Mdnf,
    pub recovered: Mdnf,
    pub exact: Option<bool>,
    /// Queries before deduplication.
    pub raw_queries: usize,
    /// Distinct queries sent.
    pub queries: usize,
    pub baseline: f64,
    /// `queries / baseline`.
    pub ratio: f64,
    pub wall_time: Duration,
}

impl RunReport {
    pub fn human(&self, timing: bool) -> String {
        let mut out = format!(
            "{} learner, n={} s={} r={} delta={} seed={}\n",
            self.algo, self.n, self.s, self.r, self.delta, self.seed
        );
        out.push_str(&format!("hidden:    {}\n", self.hidden.formula()));
        out.push_str(&format!("recovered: {}\n", self.recovered.formula()));
        if let Some(exact) = self.exact {
            out.push_str(&format!("exact:     {exact}\n"));
        }
        out.push_str(&format!(
            "queries:   {} distinct of {} planned\n",
            self.queries, self.raw_queries
        ));
        out.push_str(&format!(
            "baseline:  {:.3} (N(s,r) log2 n), ratio {:.3}\n",
            self.baseline, self.ratio
        ));
        if timing {
            out.push_str(&format!(
                "time:      {:.3} s\n",
                self.wall_time.as_secs_f64()
            ));
        }
        out
    }

    /// One `key=value` line.
    pub fn record(&self, timing: bool) -> String {
        let mut out = format!(
            "run algo={} n={} s={} r={} delta={} seed={} queries={} raw={} baseline={:.6} ratio={:.6}",
            self.algo,
            self.n,
            self.s,
            self.r,
            self.delta,
            self.seed,
            self.queries,
            self.raw_queries,
            self.baseline,
            self.ratio
        );
        if let Some(exact) = self.exact {
            out.push_str(&format!(" exact={}", exact as u8));
        }
        out.push_str(&format!(" recovered={}", compact(&self.recovered)));
        if timing {
            out.push_str(&format!(" time_ms={}", self.wall_time.as_millis()));
        }
        out
    }
}

/// `1.2|3` for `x1x2 ∨ x3`, `0` for the zero function.
fn compact(f: &Mdnf) -> String {
    if f.is_zero() {
        return "0".into();
    }
    f.terms()
        .iter()
        .map(|t| {
            t.vars()
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join(".")
        })
        .collect::<Vec<_>>()
        .join("|")
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub report: RunReport,
    pub transcript: Transcript,
}

/// Learns `hidden` (or a generated instance) with a strict teacher.
pub fn run(
    config: &ExperimentConfig,
    hidden: Option<Mdnf>,
    cache: &DesignCache,
) -> Result<RunOutcome> {
    config.validate()?;
    let (n, s, r) = (config.n, config.s, config.r);
    let hidden = match hidden {
        Some(f) => {
            if f.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: f.n(),
                });
            }
            let f = f.reduce();
            if f.terms().len() > s || f.rank() > r {
                return Err(Error::invalid(format!(
                    "hidden function {f} is not a {s}-term {r}-MDNF"
                )));
            }
            f
        }
        None => gen_instance(n, s, r, config.seed)?,
    };
    let start = Instant::now();
    let mut teacher = Teacher::new(hidden.clone());
    let (recovered, transcript) = learn(config, &mut teacher, cache)?;
    let wall_time = start.elapsed();
    let exact = Some(check_recovery(&recovered, &hidden)?);
    let baseline = cff_lower_bound(n, s, r)?;
    let report = RunReport {
        n,
        s,
        r,
        algo: config.algo,
        delta: config.delta,
        seed: config.seed,
        hidden,
        recovered,
        exact,
        raw_queries: transcript.raw_queries(),
        queries: transcript.len(),
        baseline,
        ratio: transcript.len() as f64 / baseline,
        wall_time,
    };
    Ok(RunOutcome { report, transcript })
}

/// The selected learner with cached designs. The reduced learner falls back
/// to the direct one when hashing would not shrink the problem.
pub fn learn(
    config: &ExperimentConfig,
    teacher: &mut Teacher,
    cache: &DesignCache,
) -> Result<(Mdnf, Transcript)> {
    let (n, s, r) = (config.n, config.s, config.r);
    let (delta, seed, verify) = (config.delta, config.seed, config.verify_designs);
    if config.algo == Algo::Reduced && reduction(n, s, r).hashing {
        let d = cache.reduced_designs(n, s, r, delta, seed, verify)?;
        learn_reduced_with(n, s, r, teacher, d.family, d.inner.a, d.inner.b)
    } else {
        let d = cache.direct_designs(n, s, r, delta, seed, verify)?;
        learn_direct(n, s, r, teacher, d.a, d.b)
    }
}

/// Rebuilds the plan `config` describes, checks that `transcript` holds
/// exactly its batch, and decodes the recorded answers.
pub fn replay(
    config: &ExperimentConfig,
    transcript: &Transcript,
    cache: &DesignCache,
) -> Result<Mdnf> {
    config.validate()?;
    let (n, s, r) = (config.n, config.s, config.r);
    if transcript.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: transcript.n(),
        });
    }
    let (delta, seed, verify) = (config.delta, config.seed, config.verify_designs);
    let same = |batch: &[Assignment]| {
        if batch == transcript.queries() {
            Ok(())
        } else {
            Err(Error::invalid(
                "transcript queries differ from the plan for these parameters",
            ))
        }
    };
    if config.algo == Algo::Reduced && reduction(n, s, r).hashing {
        let d = cache.reduced_designs(n, s, r, delta, seed, verify)?;
        let (plan, batch) = plan_reduced(n, s, r, d.family, d.inner.a, d.inner.b)?;
        same(&batch)?;
        decode_reduced(&plan, transcript.answers())
    } else {
        let d = cache.direct_designs(n, s, r, delta, seed, verify)?;
        let (plan, batch) = plan_direct(n, s, r, d.a, d.b)?;
        same(&batch)?;
        decode_direct(&plan, transcript.answers())
    }
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub ns: Vec<usize>,
    pub s: usize,
    pub r: usize,
    pub algos: Vec<Algo>,
    pub delta: f64,
    pub seed: u64,
    /// Repetition `k` uses seed `seed + k`.
    pub reps: usize,
    pub verify_designs: bool,
}

impl BenchConfig {
    /// `n = 2^8, 2^10, 2^12, 2^14` at `s = r = 2`, both learners.
    pub fn scaling() -> Self {
        Self {
            ns: vec![256, 1024, 4096, 16384],
            s: 2,
            r: 2,
            algos: vec![Algo::Direct, Algo::Reduced],
            delta: 0.01,
            seed: 0,
            reps: 1,
            verify_designs: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub rep: usize,
    pub report: RunReport,
}

/// Least-squares fits through the origin of queries against `log2 n` and
/// `(log2 n)^2`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalingFit {
    pub algo: Algo,
    pub rep: usize,
    pub c_log: f64,
    pub rss_log: f64,
    pub c_log2: f64,
    pub rss_log2: f64,
}

impl ScalingFit {
    pub fn from_points(algo: Algo, rep: usize, points: &[(usize, usize)]) -> Self {
        let fit = |pow: i32| {
            let xy: Vec<(f64, f64)> = points
                .iter()
                .map(|&(n, y)| ((n as f64).log2().powi(pow), y as f64))
                .collect();
            let sxx: f64 = xy.iter().map(|(x, _)| x * x).sum();
            let sxy: f64 = xy.iter().map(|(x, y)| x * y).sum();
            let c = if sxx > 0.0 { sxy / sxx } else { 0.0 };
            let rss = xy.iter().map(|(x, y)| (y - c * x).powi(2)).sum();
            (c, rss)
        };
        let (c_log, rss_log) = fit(1);
        let (c_log2, rss_log2) = fit(2);
        Self {
            algo,
            rep,
            c_log,
            rss_log,
            c_log2,
            rss_log2,
        }
    }

    /// `"log"` or `"log2"`, whichever leaves the smaller residual.
    pub fn winner(&self) -> &'static str {
        if self.rss_log < self.rss_log2 {
            "log"
        } else {
            "log2"
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
    pub fits: Vec<ScalingFit>,
}

impl BenchTable {
    /// Smallest `n` of repetition 0 where the reduced learner asks fewer
    /// queries than the direct one.
    pub fn crossover(&self) -> Option<usize> {
        let count = |algo: Algo, n: usize| {
            self.rows
                .iter()
                .find(|row| row.rep == 0 && row.report.algo == algo && row.report.n == n)
                .map(|row| row.report.queries)
        };
        let mut ns: Vec<usize> = self.rows.iter().map(|row| row.report.n).collect();
        ns.sort_unstable();
        ns.dedup();
        ns.into_iter().find(
            |&n| match (count(Algo::Reduced, n), count(Algo::Direct, n)) {
                (Some(red), Some(dir)) => red < dir,
                _ => false,
            },
        )
    }

    pub fn render(&self, timing: bool) -> String {
        let mut out =
            String::from("   rep        n  s  r  algo     queries    baseline     ratio  exact");
        if timing {
            out.push_str("    time_s");
        }
        out.push('\n');
        for row in &self.rows {
            let rep = &row.report;
            out.push_str(&format!(
                "{:>6} {:>8} {:>2} {:>2}  {:<7} {:>8} {:>11.3} {:>9.3}  {}",
                row.rep,
                rep.n,
                rep.s,
                rep.r,
                rep.algo,
                rep.queries,
                rep.baseline,
                rep.ratio,
                rep.exact.unwrap_or(false)
            ));
            if timing {
                out.push_str(&format!(" {:>9.3}", rep.wall_time.as_secs_f64()));
            }
            out.push('\n');
        }
        out.push('\n');
        for fit in &self.fits {
            out.push_str(&format!(
                "fit rep={} algo={}: {:.3}*log2(n) rss={:.6e} | {:.3}*log2(n)^2 rss={:.6e} | better: {}\n",
                fit.rep,
                fit.algo,
                fit.c_log,
                fit.rss_log,
                fit.c_log2,
                fit.rss_log2,
                fit.winner()
            ));
        }
        match self.crossover() {
            Some(n) => out.push_str(&format!(
                "crossover: reduced asks fewer queries from n={n}\n"
            )),
            None => out.push_str("crossover: none in grid\n"),
        }
        out
    }

    /// `key=value` lines: one per run, one per fit.
    pub fn records(&self, timing: bool) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&format!("rep={} {}\n", row.rep, row.report.record(timing)));
        }
        for fit in &self.fits {
            out.push_str(&format!(
                "fit rep={} algo={} c_log={:.6} rss_log={:.6} c_log2={:.6} rss_log2={:.6} winner={}\n",
                fit.rep,
                fit.algo,
                fit.c_log,
                fit.rss_log,
                fit.c_log2,
                fit.rss_log2,
                fit.winner()
            ));
        }
        out
    }
}

/// Runs every grid cell on a generated instance and fits both growth
/// models per algorithm and repetition.
pub fn bench(config: &BenchConfig, cache: &DesignCache) -> Result<BenchTable> {
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    for rep in 0..config.reps {
        let seed = config.seed.wrapping_add(rep as u64);
        for &algo in &config.algos {
            let mut points = Vec::with_capacity(config.ns.len());
            for &n in &config.ns {
                let cfg = ExperimentConfig {
                    n,
                    s: config.s,
                    r: config.r,
                    algo,
                    delta: config.delta,
                    seed,
                    verify_designs: config.verify_designs,
                };
                let report = run(&cfg, None, cache)?.report;
                points.push((n, report.queries));
                rows.push(BenchRow { rep, report });
            }
            fits.push(ScalingFit::from_points(algo, rep, &points));
        }
    }
    Ok(BenchTable { rows, fits })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gen_instance_is_deterministic_and_reduced() {
        let f = gen_instance(10, 2, 3, 7).unwrap();
        assert_eq!(f.to_text(), gen_instance(10, 2, 3, 7).unwrap().to_text());
        assert_eq!(f.terms().len(), 2);
        assert!(f.is_reduced());
        assert!(f.rank() <= 3);
    }

    #[test]
    fn gen_instance_gives_up() {
        // only two distinct non-nested 1-terms exist at n = 2, r = 1
        assert!(gen_instance(2, 3, 1, 0).is_err());
        assert!(gen_instance(3, 1, 4, 0).is_err());
    }

    #[test]
    fn fits_prefer_matching_model() {
        let ns = [256usize, 1024, 4096, 16384];
        let lin: Vec<_> = ns
            .iter()
            .map(|&n| (n, 7 * (n as f64).log2() as usize))
            .collect();
        let quad: Vec<_> = ns
            .iter()
            .map(|&n| (n, 3 * ((n as f64).log2() as usize).pow(2)))
            .collect();
        assert_eq!(
            ScalingFit::from_points(Algo::Reduced, 0, &lin).winner(),
            "log"
        );
        assert_eq!(
            ScalingFit::from_points(Algo::Direct, 0, &quad).winner(),
            "log2"
        );
    }

    #[test]
    fn cache_round_trip_is_transparent() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DesignCache::at(dir.path());
        let first = cache.cff(20, 2, 2, 0.01, 3, false).unwrap();
        let again = cache.cff(20, 2, 2, 0.01, 3, false).unwrap();
        assert_eq!(first, again);
        assert_eq!(first, design_for(20, 2, 2, 0.01, 3, false).unwrap());
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);

        let fam = cache.phf(30, 12, 3, 0.1, 1).unwrap();
        assert_eq!(fam, cache.phf(30, 12, 3, 0.1, 1).unwrap());
    }

    #[test]
    fn corrupt_cache_entry_is_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DesignCache::at(dir.path());
        let good = cache.cff(10, 1, 2, 0.01, 0, false).unwrap();
        let path = fs::read_dir(dir.path())
            .unwrap()
            .next()
            .unwrap()
            .unwrap()
            .path();
        fs::write(&path, "garbage").unwrap();
        assert_eq!(cache.cff(10, 1, 2, 0.01, 0, false).unwrap(), good);
    }

    #[test]
    fn run_end_to_end() {
        let mut cfg = ExperimentConfig::new(12, 2, 2, Algo::Direct);
        cfg.verify_designs = true;
        let out = run(&cfg, None, &DesignCache::disabled()).unwrap();
        assert_eq!(out.report.exact, Some(true));
        assert!(out.report.queries <= out.report.raw_queries);
        assert_eq!(out.transcript.batches(), 1);
        assert!(out.report.record(false).contains(" exact=1 "));
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::new(5, 0, 1, Algo::Direct)
            .validate()
            .is_err());
        assert!(ExperimentConfig::new(5, 1, 6, Algo::Direct)
            .validate()
            .is_err());
        assert_eq!(
            ExperimentConfig::new(5, 1, 2, Algo::Direct)
                .validate()
                .unwrap()
                .len(),
            1
        );
        assert!(ExperimentConfig::new(5, 2, 2, Algo::Direct)
            .validate()
            .unwrap()
            .is_empty());
    }

    #[test]
    fn replay_decodes_recorded_answers() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DesignCache::at(dir.path());
        for algo in [Algo::Direct, Algo::Reduced] {
            let cfg = ExperimentConfig::new(60, 1, 2, algo);
            let out = run(&cfg, None, &cache).unwrap();
            assert_eq!(
                replay(&cfg, &out.transcript, &cache).unwrap(),
                out.report.recovered
            );
            let mut other = cfg.clone();
            other.seed = 1;
            assert!(replay(&other, &out.transcript, &cache).is_err());
        }
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::PhfFailure(String::new())), 2);
        assert_eq!(exit_code(&Error::DesignFailure(String::new())), 2);
        assert_eq!(exit_code(&Error::parse(1, "x")), 4);
    }
}
