use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::boolean::{parse_header, VarMap};
use crate::designs::{phf_size_target, Verification};
use crate::error::{Error, Result};
use crate::math::{ceil_tolerant, ln_binomial, rng_for};

/// Limit on `C(n, d)` for exhaustive PHF verification.
pub const PHF_GUARD: f64 = 1e7;

/// Extra members [`grow_phf`] may append while repairing a failed family.
const REGROW_LIMIT: usize = 256;

/// An ordered family of maps `[n] -> [q]` meant to be an `(n,q,d)`-PHF.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HashFamily {
    n: usize,
    q: usize,
    d: usize,
    funcs: Vec<VarMap>,
}

impl HashFamily {
    pub fn new(n: usize, q: usize, d: usize, funcs: Vec<VarMap>) -> Result<Self> {
        if n == 0 || q == 0 || d == 0 {
            return Err(Error::invalid("n, q and d must be positive"));
        }
        if q < d {
            return Err(Error::invalid(format!("q={q} is smaller than d={d}")));
        }
        if let Some(h) = funcs.iter().find(|h| h.n() != n || h.q() != q) {
            return Err(Error::invalid(format!(
                "member maps [{}] -> [{}], family is [{n}] -> [{q}]",
                h.n(),
                h.q()
            )));
        }
        Ok(Self { n, q, d, funcs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn funcs(&self) -> &[VarMap] {
        &self.funcs
    }

    pub fn len(&self) -> usize {
        self.funcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.funcs.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "phf n={} q={} d={} N={}\n",
            self.n,
            self.q,
            self.d,
            self.funcs.len()
        );
        for h in &self.funcs {
            let line: Vec<String> = h.images().iter().map(|j| j.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let body = text
            .strip_suffix('\n')
            .ok_or_else(|| Error::parse(1, "missing trailing newline"))?;
        let mut lines = body.split('\n');
        let header = parse_header(lines.next().unwrap_or(""), "phf", &["n", "q", "d", "N"])?;
        let [n, q, d, count] = header[..] else {
            unreachable!()
        };
        let mut funcs = Vec::with_capacity(count);
        for (idx, line) in lines.enumerate() {
            let lineno = idx + 2;
            let images = line
                .split(' ')
                .map(|tok| match tok.parse::<usize>() {
                    // reject forms like "07" that would not serialise back
                    Ok(v) if v.to_string() == tok => Ok(v),
                    _ => Err(Error::parse(lineno, format!("bad image {tok:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            if images.len() != n {
                return Err(Error::parse(
                    lineno,
                    format!("{} images, expected {n}", images.len()),
                ));
            }
            funcs.push(VarMap::new(q, images).map_err(|e| Error::parse(lineno, e.to_string()))?);
        }
        if funcs.len() != count {
            return Err(Error::parse(
                1,
                format!("header says N={count}, found {} functions", funcs.len()),
            ));
        }
        Self::new(n, q, d, funcs).map_err(|e| Error::parse(1, e.to_string()))
    }
}

impl fmt::Debug for HashFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HashFamily")
            .field("n", &self.n)
            .field("q", &self.q)
            .field("d", &self.d)
            .field("N", &self.funcs.len())
            .finish()
    }
}

/// Probability that a uniform map `[n] -> [q]` is one-to-one on a fixed
/// `d`-set: `(1 - 1/q)(1 - 2/q)...(1 - (d-1)/q)`.
pub fn phf_g(q: usize, d: usize) -> f64 {
    (1..d).map(|k| 1.0 - k as f64 / q as f64).product()
}

/// Number of uniform maps so that a fixed `d`-set is missed with
/// probability at most `exp(-ln_inv_delta)`:
/// `ceil( ln(1/delta) / ln(1 / (1 - g(q, d))) )`, and 1 when `d = 1`.
pub fn phf_count(q: usize, d: usize, ln_inv_delta: f64) -> usize {
    let g = phf_g(q, d);
    if g >= 1.0 {
        return 1;
    }
    let per_map = -(-g).ln_1p();
    (ceil_tolerant(ln_inv_delta / per_map) as usize).max(1)
}

fn check_phf_params(n: usize, q: usize, d: usize, delta: f64) -> Result<()> {
    if n == 0 || d == 0 {
        return Err(Error::invalid("n and d must be positive"));
    }
    if q * 2 <= d * (d - 1) {
        return Err(Error::invalid(format!("need q > d(d-1)/2 (q={q}, d={d})")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok(())
}

fn draw(n: usize, q: usize, rng: &mut ChaCha8Rng) -> VarMap {
    let images = (0..n).map(|_| rng.gen_range(1..=q)).collect();
    VarMap::new(q, images).expect("images drawn from 1..=q")
}

/// Independent uniform maps, enough that any fixed `d`-subset is mapped
/// one-to-one by some member with probability at least `1 - delta`.
pub fn random_phf(n: usize, q: usize, d: usize, delta: f64, seed: u64) -> Result<HashFamily> {
    check_phf_params(n, q, d, delta)?;
    let count = phf_count(q, d, -delta.ln());
    let mut rng = rng_for(seed, 0);
    let funcs = (0..count).map(|_| draw(n, q, &mut rng)).collect();
    HashFamily::new(n, q, d, funcs)
}

/// Result of an all-subsets PHF construction.
#[derive(Clone, Debug)]
pub struct PhfBuild {
    pub family: HashFamily,
    /// `Verified` when exhaustively checked, `Unverified` past [`PHF_GUARD`].
    pub verification: Verification,
    /// Members drawn from the union bound, before any regrowth.
    pub union_bound_size: usize,
    /// Size expression `d^2 log2 n / log2(q/d^2)` for comparison.
    pub target: Option<f64>,
}

/// Family meant to be one-to-one on every `d`-subset, needing only
/// `q > d(d-1)/2`.
///
/// Members are drawn with a per-subset failure budget `delta / C(n, d)`.
/// When `C(n, d)` is within [`PHF_GUARD`] the family is verified and grown
/// one fresh member at a time until it passes; beyond the guard the union
/// bound is the only guarantee (failure probability at most `delta`).
pub fn grow_phf(n: usize, q: usize, d: usize, delta: f64, seed: u64) -> Result<PhfBuild> {
    check_phf_params(n, q, d, delta)?;
    let ln_subsets = ln_binomial(n as u64, d as u64).max(0.0);
    let count = phf_count(q, d, ln_subsets - delta.ln());
    let mut rng = rng_for(seed, 1);
    let funcs: Vec<VarMap> = (0..count).map(|_| draw(n, q, &mut rng)).collect();
    let mut family = HashFamily::new(n, q, d, funcs)?;
    let target = phf_size_target(n, q, d);
    if ln_subsets.exp() > PHF_GUARD {
        return Ok(PhfBuild {
            family,
            verification: Verification::Unverified,
            union_bound_size: count,
            target,
        });
    }
    for _ in 0..=REGROW_LIMIT {
        if verify_phf(&family)? {
            return Ok(PhfBuild {
                family,
                verification: Verification::Verified,
                union_bound_size: count,
                target,
            });
        }
        family.funcs.push(draw(n, q, &mut rng));
    }
    Err(Error::DesignFailure(format!(
        "({n},{q},{d})-PHF still failing after {REGROW_LIMIT} extra members"
    )))
}

/// [`grow_phf`] under the stricter `q >= 2 d^2` regime in which the size
/// target is meaningful.
pub fn build_phf_all_subsets(
    n: usize,
    q: usize,
    d: usize,
    delta: f64,
    seed: u64,
) -> Result<PhfBuild> {
    if q < 2 * d * d {
        return Err(Error::invalid(format!("need q >= 2d^2 (q={q}, d={d})")));
    }
    grow_phf(n, q, d, delta, seed)
}

/// Exhaustive check that every `d`-subset of `[n]` is mapped one-to-one by
/// some member.
///
/// Depth-first over ascending subsets, carrying the members that are still
/// injective on the prefix; a prefix that kills every member is a witness of
/// failure since any completion is also bad.
pub fn verify_phf(family: &HashFamily) -> Result<bool> {
    let (n, d) = (family.n, family.d);
    if d > n {
        return Ok(true);
    }
    let subsets = ln_binomial(n as u64, d as u64).exp();
    if subsets > PHF_GUARD {
        return Err(Error::ResourceGuard {
            what: "C(n,d)",
            value: subsets,
            limit: PHF_GUARD,
        });
    }
    let images: Vec<&[usize]> = family.funcs.iter().map(VarMap::images).collect();
    let alive: Vec<usize> = (0..images.len()).collect();
    let mut prefix = Vec::with_capacity(d);
    Ok(injective_below(&images, n, d, &mut prefix, 0, &alive))
}

#[inline]
fn extends_injectively(h: &[usize], prefix: &[usize], x: usize) -> bool {
    let image = h[x];
    prefix.iter().all(|&p| h[p] != image)
}

fn injective_below(
    images: &[&[usize]],
    n: usize,
    d: usize,
    prefix: &mut Vec<usize>,
    start: usize,
    alive: &[usize],
) -> bool {
    let depth = prefix.len();
    if depth + 1 == d {
        return (start..n).all(|x| {
            alive
                .iter()
                .any(|&h| extends_injectively(images[h], prefix, x))
        });
    }
    for x in start..=n - (d - depth) {
        let next: Vec<usize> = alive
            .iter()
            .copied()
            .filter(|&h| extends_injectively(images[h], prefix, x))
            .collect();
        if next.is_empty() {
            return false;
        }
        prefix.push(x);
        let ok = injective_below(images, n, d, prefix, x + 1, &next);
        prefix.pop();
        if !ok {
            return false;
        }
    }
    true
}
