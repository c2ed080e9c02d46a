//! Assignments, monomials and monotone DNFs over `n` variables.
//!
//! Variables are numbered `1..=n` everywhere in the public API. An
//! [`Assignment`] doubles as a query (a pool): the set of variables it sets
//! to one is the vertex set handed to an edge-detecting query.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = u64::BITS as usize;

/// Largest `n` accepted by the truth-table equivalence check.
pub const MAX_EQUIV_VARS: usize = 24;

/// A fixed-width bit vector over `n` variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    n: usize,
    // bit (i - 1) holds variable i; bits past n are always zero
    words: Vec<u64>,
}

impl Assignment {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            words: vec![0; n.div_ceil(WORD)],
        }
    }

    pub fn ones(n: usize) -> Self {
        let mut a = Self {
            n,
            words: vec![u64::MAX; n.div_ceil(WORD)],
        };
        a.clear_tail();
        a
    }

    /// The characteristic assignment of a vertex set (1-based).
    pub fn from_support(n: usize, vars: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut a = Self::zeros(n);
        for v in vars {
            if v == 0 || v > n {
                return Err(Error::invalid(format!("variable {v} outside 1..={n}")));
            }
            a.set(v, true);
        }
        Ok(a)
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut a = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                a.words[i / WORD] |= 1 << (i % WORD);
            }
        }
        a
    }

    /// Low `n` bits of `mask`, bit `i - 1` for variable `i`. Requires `n <= 64`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        assert!(n <= WORD);
        let mut a = Self::zeros(n);
        if n > 0 {
            a.words[0] = mask;
            a.clear_tail();
        }
        a
    }

    pub(crate) fn from_words(n: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), n.div_ceil(WORD));
        let mut a = Self { n, words };
        a.clear_tail();
        a
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Value of variable `var` (1-based).
    #[inline]
    pub fn get(&self, var: usize) -> bool {
        debug_assert!(var >= 1 && var <= self.n);
        let i = var - 1;
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    pub fn set(&mut self, var: usize, value: bool) {
        assert!(
            var >= 1 && var <= self.n,
            "variable {var} outside 1..={}",
            self.n
        );
        let i = var - 1;
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    /// Bitwise AND of two assignments over the same variables.
    pub fn and(&self, other: &Assignment) -> Result<Assignment> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(self.and_unchecked(other))
    }

    pub(crate) fn and_unchecked(&self, other: &Assignment) -> Assignment {
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(x, y)| x & y)
            .collect();
        Assignment { n: self.n, words }
    }

    pub(crate) fn and_assign_unchecked(&mut self, other: &Assignment) {
        for (x, y) in self.words.iter_mut().zip(&other.words) {
            *x &= y;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_all_ones(&self) -> bool {
        self.count_ones() == self.n
    }

    /// Variables set to one, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.count_ones());
        for (wi, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * WORD + b + 1);
                w &= w - 1;
            }
        }
        out
    }

    /// Bitwise `self <= other`.
    pub fn le(&self, other: &Assignment) -> bool {
        self.n == other.n
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(x, y)| x & !y == 0)
    }

    /// True when every variable of `term` is set.
    #[inline]
    pub fn satisfies(&self, term: &Monomial) -> bool {
        term.vars().iter().all(|&v| self.get(v))
    }

    fn clear_tail(&mut self) {
        let rem = self.n % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::with_capacity(self.n);
        for v in 1..=self.n {
            s.push(if self.get(v) { '1' } else { '0' });
        }
        f.write_str(&s)
    }
}

impl fmt::Debug for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Assignment({self})")
    }
}

impl FromStr for Assignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::parse(
                        1,
                        format!("unexpected character {other:?} in assignment"),
                    ))
                }
            }
        }
        Ok(Assignment::from_bits(&bits))
    }
}

/// A nonempty conjunction of variables; one hyperedge.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<usize>);

impl Monomial {
    /// Builds a monomial from distinct 1-based indices in any order.
    pub fn new(vars: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut vars: Vec<usize> = vars.into_iter().collect();
        if vars.is_empty() {
            return Err(Error::invalid("a monomial needs at least one variable"));
        }
        if vars.contains(&0) {
            return Err(Error::invalid("variable indices start at 1"));
        }
        vars.sort_unstable();
        if vars.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate variable in monomial"));
        }
        Ok(Monomial(vars))
    }

    pub fn vars(&self) -> &[usize] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn max_var(&self) -> usize {
        *self.0.last().expect("monomials are nonempty")
    }

    pub fn contains(&self, var: usize) -> bool {
        self.0.binary_search(&var).is_ok()
    }

    /// Subset test on sorted variable lists.
    pub fn is_subset_of(&self, other: &Monomial) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        let mut it = other.0.iter();
        'outer: for v in &self.0 {
            for w in it.by_ref() {
                if w == v {
                    continue 'outer;
                }
                if w > v {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn is_proper_subset_of(&self, other: &Monomial) -> bool {
        self.0.len() < other.0.len() && self.is_subset_of(other)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.0 {
            write!(f, "x{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A monotone DNF over `n` variables; terms kept as a sorted set.
///
/// The empty term set is the constant-0 function. Terms may nest until
/// [`Mdnf::reduce`] is applied; values read from text are always reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mdnf {
    n: usize,
    terms: Vec<Monomial>,
}

impl Mdnf {
    pub fn new(n: usize, terms: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let mut terms: Vec<Monomial> = terms.into_iter().collect();
        if let Some(t) = terms.iter().find(|t| t.max_var() > n) {
            return Err(Error::invalid(format!(
                "term {t} uses a variable above n={n}"
            )));
        }
        terms.sort();
        terms.dedup();
        Ok(Self { n, terms })
    }

    /// Convenience constructor from index lists, e.g. `&[&[1, 2], &[3]]`.
    pub fn from_sets(n: usize, sets: &[&[usize]]) -> Result<Self> {
        let terms = sets
            .iter()
            .map(|s| Monomial::new(s.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, terms)
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest term rank, 0 for the constant-0 function.
    pub fn rank(&self) -> usize {
        self.terms.iter().map(Monomial::rank).max().unwrap_or(0)
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool> {
        if a.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: a.n(),
            });
        }
        Ok(self.eval_unchecked(a))
    }

    #[inline]
    pub(crate) fn eval_unchecked(&self, a: &Assignment) -> bool {
        self.terms.iter().any(|t| a.satisfies(t))
    }

    /// Drops every term that contains another term.
    pub fn reduce(&self) -> Mdnf {
        let mut by_rank: Vec<&Monomial> = self.terms.iter().collect();
        by_rank.sort_by_key(|t| t.rank());
        let mut kept: Vec<Monomial> = Vec::with_capacity(by_rank.len());
        for t in by_rank {
            if !kept.iter().any(|k| k.is_subset_of(t)) {
                kept.push(t.clone());
            }
        }
        kept.sort();
        Mdnf {
            n: self.n,
            terms: kept,
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.terms.iter().enumerate().all(|(i, t)| {
            self.terms
                .iter()
                .enumerate()
                .all(|(j, u)| i == j || !u.is_subset_of(t))
        })
    }

    /// One minimal satisfying assignment per term.
    pub fn minterms(&self) -> Result<Vec<Assignment>> {
        if !self.is_reduced() {
            return Err(Error::NotReduced);
        }
        self.terms
            .iter()
            .map(|t| Assignment::from_support(self.n, t.vars().iter().copied()))
            .collect()
    }

    /// Union of all terms' variables, ascending.
    pub fn relevant_vars(&self) -> Result<Vec<usize>> {
        if !self.is_reduced() {
            return Err(Error::NotReduced);
        }
        Ok(self.support())
    }

    pub(crate) fn support(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self
            .terms
            .iter()
            .flat_map(|t| t.vars().iter().copied())
            .collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    /// `f(x_{h(1)}, ..., x_{h(n)})` as a reduced MDNF over `h.q()` variables.
    pub fn project(&self, h: &VarMap) -> Result<Mdnf> {
        if h.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: h.n(),
            });
        }
        let terms = self
            .terms
            .iter()
            .map(|t| Monomial::from_sorted_dedup(t.vars().iter().map(|&v| h.apply(v))))
            .collect::<Vec<_>>();
        Ok(Mdnf::new(h.q(), terms)?.reduce())
    }

    /// Truth-table comparison; refuses above [`MAX_EQUIV_VARS`] variables.
    pub fn equivalent(&self, other: &Mdnf) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        if self.n > MAX_EQUIV_VARS {
            return Err(Error::ResourceGuard {
                what: "variables for truth-table equivalence",
                value: self.n as f64,
                limit: MAX_EQUIV_VARS as f64,
            });
        }
        let f = self.term_masks();
        let g = other.term_masks();
        let eval = |masks: &[u32], x: u32| masks.iter().any(|&m| m & !x == 0);
        Ok((0..1u32 << self.n).all(|x| eval(&f, x) == eval(&g, x)))
    }

    fn term_masks(&self) -> Vec<u32> {
        self.terms
            .iter()
            .map(|t| t.vars().iter().fold(0u32, |m, &v| m | 1 << (v - 1)))
            .collect()
    }

    /// Human-readable formula such as `x1x2 ∨ x3`; `0` when empty.
    pub fn formula(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(" ∨ ")
    }

    /// Serialises in the line-oriented `mdnf n=<n>` text format.
    pub fn to_text(&self) -> String {
        let mut out = format!("mdnf n={}\n", self.n);
        for t in &self.terms {
            let line: Vec<String> = t.vars().iter().map(|v| v.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the `mdnf n=<n>` text format, reducing on ingest.
    pub fn from_text(text: &str) -> Result<Self> {
        let body = text.strip_suffix('\n').unwrap_or(text);
        let mut lines = body.split('\n');
        let header = lines.next().unwrap_or("");
        let n = parse_header(header, "mdnf", &["n"])?[0];
        let mut terms = Vec::new();
        for (idx, line) in lines.enumerate() {
            let lineno = idx + 2;
            if line.trim().is_empty() {
                return Err(Error::parse(lineno, "empty line"));
            }
            let vars = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>()
                        .map_err(|_| Error::parse(lineno, format!("bad index {tok:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if let Some(&v) = vars.iter().find(|&&v| v == 0 || v > n) {
                return Err(Error::parse(lineno, format!("index {v} outside 1..={n}")));
            }
            let term = Monomial::new(vars).map_err(|e| Error::parse(lineno, e.to_string()))?;
            terms.push(term);
        }
        Ok(Mdnf::new(n, terms)?.reduce())
    }
}

impl Monomial {
    fn from_sorted_dedup(vars: impl Iterator<Item = usize>) -> Monomial {
        let mut v: Vec<usize> = vars.collect();
        v.sort_unstable();
        v.dedup();
        Monomial(v)
    }
}

impl fmt::Display for Mdnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.formula())
    }
}

impl fmt::Debug for Mdnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mdnf(n={}, {})", self.n, self.formula())
    }
}

/// A total map `[n] -> [q]`, both sides 1-based.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct VarMap {
    q: usize,
    images: Vec<usize>,
}

impl VarMap {
    /// `images[i - 1]` is the image of variable `i`.
    pub fn new(q: usize, images: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = images.iter().find(|&&j| j == 0 || j > q) {
            return Err(Error::invalid(format!("image {bad} outside 1..={q}")));
        }
        Ok(Self { q, images })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            q: n,
            images: (1..=n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, var: usize) -> usize {
        self.images[var - 1]
    }

    /// True when the images of `vars` are pairwise distinct.
    pub fn is_injective_on(&self, vars: &[usize]) -> bool {
        let mut seen: Vec<usize> = vars.iter().map(|&v| self.apply(v)).collect();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }
}

/// Simulates a query on the projection: `result_i = b_{h(i)}`.
pub fn lift(b: &Assignment, h: &VarMap) -> Result<Assignment> {
    if b.n() != h.q() {
        return Err(Error::DimensionMismatch {
            expected: h.q(),
            got: b.n(),
        });
    }
    let mut out = Assignment::zeros(h.n());
    for (i, &j) in h.images().iter().enumerate() {
        if b.get(j) {
            out.set(i + 1, true);
        }
    }
    Ok(out)
}

/// Parses `<tag> k1=v1 k2=v2 ...` with the keys in the given order.
pub(crate) fn parse_header(line: &str, tag: &str, keys: &[&str]) -> Result<Vec<usize>> {
    let mut toks = line.split(' ');
    if toks.next() != Some(tag) {
        return Err(Error::parse(
            1,
            format!("expected header starting with {tag:?}"),
        ));
    }
    let mut out = Vec::with_capacity(keys.len());
    for key in keys {
        let tok = toks
            .next()
            .ok_or_else(|| Error::parse(1, format!("missing {key}=")))?;
        let value = tok
            .strip_prefix(key)
            .and_then(|t| t.strip_prefix('='))
            .ok_or_else(|| Error::parse(1, format!("expected {key}=<value>, got {tok:?}")))?;
        let value = value
            .parse::<usize>()
            .map_err(|_| Error::parse(1, format!("bad value for {key}: {value:?}")))?;
        out.push(value);
    }
    if let Some(extra) = toks.next() {
        return Err(Error::parse(
            1,
            format!("unexpected header field {extra:?}"),
        ));
    }
    Ok(out)
}
