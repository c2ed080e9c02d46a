use std::fmt;

use rand::Rng;

use crate::boolean::{parse_header, Assignment};
use crate::error::{Error, Result};
use crate::math::{ceil_tolerant, ln_binomial, rng_for};

/// Limit on `C(n, s + r) * C(s + r, s)` for exhaustive CFF verification.
pub const CFF_GUARD: f64 = 1e8;

/// Largest `n` for which [`design_for`] falls back to the complete cube.
const CUBE_MAX_VARS: usize = 16;

/// Retry budget for [`random_cff_verified`].
const VERIFY_ATTEMPTS: u64 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verification {
    Unverified,
    Verified,
    Failed,
}

impl Verification {
    pub fn code(self) -> u8 {
        match self {
            Verification::Unverified => 0,
            Verification::Verified => 1,
            Verification::Failed => 2,
        }
    }

    pub fn from_code(code: usize) -> Option<Self> {
        match code {
            0 => Some(Verification::Unverified),
            1 => Some(Verification::Verified),
            2 => Some(Verification::Failed),
            _ => None,
        }
    }
}

/// Ordered rows claimed to form an `(n,(s,r))`-cover-free family.
///
/// Row order is generation order; query transcripts refer to row indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DesignMatrix {
    n: usize,
    s: usize,
    r: usize,
    rows: Vec<Assignment>,
    verified: Verification,
}

impl DesignMatrix {
    pub fn new(n: usize, s: usize, r: usize, rows: Vec<Assignment>) -> Result<Self> {
        if r < 1 {
            return Err(Error::invalid("a cover-free family needs r >= 1"));
        }
        if let Some(row) = rows.iter().find(|row| row.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: row.n(),
            });
        }
        Ok(Self {
            n,
            s,
            r,
            rows,
            verified: Verification::Unverified,
        })
    }

    /// Every assignment in `{0,1}^n`; a CFF for every admissible `(s, r)`.
    pub fn complete_cube(n: usize, s: usize, r: usize) -> Result<Self> {
        if n > CUBE_MAX_VARS {
            return Err(Error::invalid(format!(
                "complete cube limited to n <= {CUBE_MAX_VARS}"
            )));
        }
        let rows = (0..1u64 << n)
            .map(|m| Assignment::from_mask(n, m))
            .collect();
        let mut design = Self::new(n, s, r, rows)?;
        design.verified = Verification::Verified;
        Ok(design)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn rows(&self) -> &[Assignment] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn verified(&self) -> Verification {
        self.verified
    }

    pub fn set_verified(&mut self, v: Verification) {
        self.verified = v;
    }

    /// Runs [`verify_cff`] and records the outcome.
    pub fn verify(&mut self) -> Result<bool> {
        let ok = verify_cff(self)?;
        self.verified = if ok {
            Verification::Verified
        } else {
            Verification::Failed
        };
        Ok(ok)
    }

    /// Returns a copy with different rows and the flag reset.
    pub fn with_rows(&self, rows: Vec<Assignment>) -> Result<Self> {
        Self::new(self.n, self.s, self.r, rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity((self.n + 1) * self.rows.len() + 64);
        out.push_str(&format!(
            "cff n={} s={} r={} m={} verified={}\n",
            self.n,
            self.s,
            self.r,
            self.rows.len(),
            self.verified.code()
        ));
        for row in &self.rows {
            out.push_str(&row.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let body = text
            .strip_suffix('\n')
            .ok_or_else(|| Error::parse(1, "missing trailing newline"))?;
        let mut lines = body.split('\n');
        let header = parse_header(
            lines.next().unwrap_or(""),
            "cff",
            &["n", "s", "r", "m", "verified"],
        )?;
        let [n, s, r, m, code] = header[..] else {
            unreachable!()
        };
        let verified = Verification::from_code(code)
            .ok_or_else(|| Error::parse(1, format!("verified={code} is not 0, 1 or 2")))?;
        let mut rows = Vec::with_capacity(m);
        for (idx, line) in lines.enumerate() {
            let lineno = idx + 2;
            if line.len() != n {
                return Err(Error::parse(
                    lineno,
                    format!("row has {} characters, expected {n}", line.len()),
                ));
            }
            let row: Assignment = line
                .parse()
                .map_err(|_| Error::parse(lineno, "row must contain only 0 and 1"))?;
            rows.push(row);
        }
        // a header-only file with m = 0 splits into zero rows
        if rows.len() != m {
            return Err(Error::parse(
                1,
                format!("header says m={m}, found {} rows", rows.len()),
            ));
        }
        let mut design = Self::new(n, s, r, rows).map_err(|e| Error::parse(1, e.to_string()))?;
        design.verified = verified;
        Ok(design)
    }
}

impl fmt::Debug for DesignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DesignMatrix")
            .field("n", &self.n)
            .field("s", &self.s)
            .field("r", &self.r)
            .field("m", &self.rows.len())
            .field("verified", &self.verified)
            .finish()
    }
}

/// `C(n, s + r) * C(s + r, s)`: the number of (subset, pattern) checks.
pub fn cff_work(n: usize, s: usize, r: usize) -> f64 {
    let d = (s + r) as u64;
    (ln_binomial(n as u64, d) + ln_binomial(d, s as u64)).exp()
}

/// Union-bound row count for a random `(n,(s,r))`-CFF with density
/// `p = r / (s + r)`:
/// `ceil( ln(C(n,s+r) C(s+r,s) / delta) / -ln(1 - p^r (1-p)^s) )`.
pub fn cff_row_count(n: usize, s: usize, r: usize, delta: f64) -> Result<usize> {
    check_cff_params(n, s, r, delta)?;
    if s == 0 {
        return Ok(1);
    }
    let d = (s + r) as u64;
    let p = r as f64 / d as f64;
    let numerator = ln_binomial(n as u64, d) + ln_binomial(d, s as u64) - delta.ln();
    let hit = p.powi(r as i32) * (1.0 - p).powi(s as i32);
    let denominator = -(-hit).ln_1p();
    Ok(ceil_tolerant(numerator / denominator).max(1.0) as usize)
}

fn check_cff_params(n: usize, s: usize, r: usize, delta: f64) -> Result<()> {
    if r < 1 {
        return Err(Error::invalid("r must be at least 1"));
    }
    if n < s + r {
        return Err(Error::invalid(format!(
            "need n >= s + r (n={n}, s={s}, r={r})"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::invalid(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok(())
}

/// Random rows, each bit one with probability `r / (s + r)`; an
/// `(n,(s,r))`-CFF with probability at least `1 - delta`.
///
/// `s = 0` yields the single all-ones row.
pub fn random_cff(n: usize, s: usize, r: usize, delta: f64, seed: u64) -> Result<DesignMatrix> {
    random_cff_stream(n, s, r, delta, seed, 0)
}

fn random_cff_stream(
    n: usize,
    s: usize,
    r: usize,
    delta: f64,
    seed: u64,
    stream: u64,
) -> Result<DesignMatrix> {
    let m = cff_row_count(n, s, r, delta)?;
    if s == 0 {
        return DesignMatrix::new(n, s, r, vec![Assignment::ones(n)]);
    }
    let p = r as f64 / (s + r) as f64;
    let mut rng = rng_for(seed, stream);
    let rows = (0..m)
        .map(|_| {
            let bits: Vec<bool> = (0..n).map(|_| rng.gen_bool(p)).collect();
            Assignment::from_bits(&bits)
        })
        .collect();
    DesignMatrix::new(n, s, r, rows)
}

/// Draws random CFFs until one passes [`verify_cff`]; attempt `k` uses the
/// `k`-th stream of `seed`, so the result is still a function of the seed.
pub fn random_cff_verified(
    n: usize,
    s: usize,
    r: usize,
    delta: f64,
    seed: u64,
) -> Result<DesignMatrix> {
    for attempt in 0..VERIFY_ATTEMPTS {
        let mut design = random_cff_stream(n, s, r, delta, seed, attempt)?;
        if design.verify()? {
            return Ok(design);
        }
    }
    Err(Error::DesignFailure(format!(
        "no verified ({n},({s},{r}))-CFF after {VERIFY_ATTEMPTS} attempts"
    )))
}

/// The design a learner should use for an `(n,(s,r))` requirement.
///
/// `s = 0` is the single all-ones row. When `n < s + r` the CFF condition is vacuous but the learners still need
/// every smaller pattern, so the complete cube is returned. Otherwise a
/// random CFF, verified when asked and when the guard allows it.
pub fn design_for(
    n: usize,
    s: usize,
    r: usize,
    delta: f64,
    seed: u64,
    verify: bool,
) -> Result<DesignMatrix> {
    if s == 0 {
        let mut ones = DesignMatrix::new(n, 0, r, vec![Assignment::ones(n)])?;
        ones.verified = Verification::Verified;
        return Ok(ones);
    }
    if n < s + r {
        return DesignMatrix::complete_cube(n, s, r);
    }
    if verify && cff_work(n, s, r) <= CFF_GUARD {
        random_cff_verified(n, s, r, delta, seed)
    } else {
        random_cff(n, s, r, delta, seed)
    }
}

/// Exhaustive check of the cover-free property.
///
/// Enumerates the `r` indices that must be one, keeping the running AND of
/// their columns, then the `s` indices that must be zero, masking rows out;
/// an empty row set at any depth is a witness of failure.
pub fn verify_cff(design: &DesignMatrix) -> Result<bool> {
    let (n, s, r) = (design.n, design.s, design.r);
    if n < s + r {
        return Err(Error::invalid(format!(
            "verification needs s + r <= n (n={n}, s={s}, r={r})"
        )));
    }
    let work = cff_work(n, s, r);
    if work > CFF_GUARD {
        return Err(Error::ResourceGuard {
            what: "C(n,s+r)*C(s+r,s)",
            value: work,
            limit: CFF_GUARD,
        });
    }
    let columns = Columns::new(design);
    let mut ones = Vec::with_capacity(r);
    Ok(columns.cover_ones(&columns.all_rows(), 0, r, s, &mut ones))
}

/// Column-major bitsets: `bits[j]` has bit `k` set iff row `k` has variable
/// `j + 1` set.
struct Columns {
    words: usize,
    m: usize,
    bits: Vec<Vec<u64>>,
}

impl Columns {
    fn new(design: &DesignMatrix) -> Self {
        let m = design.rows.len();
        let words = m.div_ceil(64);
        let mut bits = vec![vec![0u64; words]; design.n];
        for (k, row) in design.rows.iter().enumerate() {
            for v in row.support() {
                bits[v - 1][k / 64] |= 1 << (k % 64);
            }
        }
        Self { words, m, bits }
    }

    fn all_rows(&self) -> Vec<u64> {
        let mut all = vec![u64::MAX; self.words];
        if !self.m.is_multiple_of(64) {
            all[self.words - 1] = (1u64 << (self.m % 64)) - 1;
        }
        all
    }

    fn cover_ones(
        &self,
        live: &[u64],
        start: usize,
        left: usize,
        s: usize,
        ones: &mut Vec<usize>,
    ) -> bool {
        if is_empty(live) {
            return false;
        }
        if left == 0 {
            return self.cover_zeros(live, 0, s, ones);
        }
        let n = self.bits.len();
        for j in start..=n - left {
            let next: Vec<u64> = live.iter().zip(&self.bits[j]).map(|(a, b)| a & b).collect();
            ones.push(j);
            let ok = self.cover_ones(&next, j + 1, left - 1, s, ones);
            ones.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    fn cover_zeros(&self, live: &[u64], start: usize, left: usize, ones: &[usize]) -> bool {
        if is_empty(live) {
            return false;
        }
        if left == 0 {
            return true;
        }
        let n = self.bits.len();
        let mut next = vec![0u64; self.words];
        for j in start..n {
            if ones.contains(&j) {
                continue;
            }
            // too few indices left to finish the zero set in ascending order
            let remaining = n - j - ones.iter().filter(|&&o| o >= j).count();
            if remaining < left {
                break;
            }
            for ((out, a), b) in next.iter_mut().zip(live).zip(&self.bits[j]) {
                *out = a & !b;
            }
            if !self.cover_zeros(&next, j + 1, left - 1, ones) {
                return false;
            }
        }
        true
    }
}

fn is_empty(bits: &[u64]) -> bool {
    bits.iter().all(|&w| w == 0)
}
