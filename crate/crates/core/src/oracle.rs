//! The simulated teacher and the query transcript it leaves behind.

use crate::boolean::{parse_header, Assignment, Mdnf};
use crate::error::{Error, Result};

/// Holds the hidden function and answers membership queries.
///
/// In strict mode the teacher seals itself after the first successful batch,
/// so a learner that tries to adapt to answers fails with
/// [`Error::NonAdaptive`].
#[derive(Debug, Clone)]
pub struct Teacher {
    hidden: Mdnf,
    strict: bool,
    sealed: bool,
    batches_served: usize,
    queries_served: usize,
}

impl Teacher {
    /// A strict teacher: exactly one batch.
    pub fn new(hidden: Mdnf) -> Self {
        Self {
            hidden,
            strict: true,
            sealed: false,
            batches_served: 0,
            queries_served: 0,
        }
    }

    /// A teacher that answers any number of batches; for test harnesses.
    pub fn relaxed(hidden: Mdnf) -> Self {
        Self {
            strict: false,
            ..Self::new(hidden)
        }
    }

    pub fn hidden(&self) -> &Mdnf {
        &self.hidden
    }

    pub fn n(&self) -> usize {
        self.hidden.n()
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn is_sealed(&self) -> bool {
        self.sealed
    }

    pub fn batches_served(&self) -> usize {
        self.batches_served
    }

    pub fn queries_served(&self) -> usize {
        self.queries_served
    }

    pub fn query_batch(&mut self, batch: &[Assignment]) -> Result<Vec<bool>> {
        if self.sealed {
            return Err(Error::NonAdaptive);
        }
        let n = self.hidden.n();
        if let Some(bad) = batch.iter().find(|a| a.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.n(),
            });
        }
        let answers = batch
            .iter()
            .map(|a| self.hidden.eval_unchecked(a))
            .collect();
        self.batches_served += 1;
        self.queries_served += batch.len();
        if self.strict {
            self.sealed = true;
        }
        Ok(answers)
    }

    /// Does the vertex set contain an edge? Counted as a batch of one.
    pub fn edge_detecting_query(&mut self, vertices: &[usize]) -> Result<bool> {
        let a = Assignment::from_support(self.hidden.n(), vertices.iter().copied())?;
        Ok(self.query_batch(std::slice::from_ref(&a))?[0])
    }
}

/// Queries actually sent, their answers and the bookkeeping counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    n: usize,
    queries: Vec<Assignment>,
    answers: Vec<bool>,
    batches: usize,
    raw_queries: usize,
}

impl Transcript {
    pub fn new(n: usize, queries: Vec<Assignment>, answers: Vec<bool>) -> Result<Self> {
        if queries.len() != answers.len() {
            return Err(Error::invalid(format!(
                "{} queries but {} answers",
                queries.len(),
                answers.len()
            )));
        }
        if let Some(bad) = queries.iter().find(|a| a.n() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.n(),
            });
        }
        let k = queries.len();
        Ok(Self {
            n,
            queries,
            answers,
            batches: 1,
            raw_queries: k,
        })
    }

    /// Records how many queries the plan had before deduplication and how
    /// many batches were used.
    pub fn with_counts(mut self, batches: usize, raw_queries: usize) -> Self {
        self.batches = batches;
        self.raw_queries = raw_queries;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn queries(&self) -> &[Assignment] {
        &self.queries
    }

    pub fn answers(&self) -> &[bool] {
        &self.answers
    }

    pub fn batches(&self) -> usize {
        self.batches
    }

    /// Distinct queries sent.
    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    /// Query count before deduplication.
    pub fn raw_queries(&self) -> usize {
        self.raw_queries
    }

    /// Positions where `f` disagrees with the recorded answers.
    pub fn inconsistencies(&self, f: &Mdnf) -> Result<Vec<usize>> {
        if f.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: f.n(),
            });
        }
        Ok(self
            .queries
            .iter()
            .zip(&self.answers)
            .enumerate()
            .filter(|(_, (q, &ans))| f.eval_unchecked(q) != ans)
            .map(|(i, _)| i)
            .collect())
    }

    /// `transcript n=<n> k=<k>` followed by `<bits> <answer>` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity((self.n + 3) * self.queries.len() + 32);
        out.push_str(&format!(
            "transcript n={} k={}\n",
            self.n,
            self.queries.len()
        ));
        for (q, &ans) in self.queries.iter().zip(&self.answers) {
            out.push_str(&q.to_string());
            out.push_str(if ans { " 1\n" } else { " 0\n" });
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let body = text
            .strip_suffix('\n')
            .ok_or_else(|| Error::parse(1, "missing trailing newline"))?;
        let mut lines = body.split('\n');
        let header = parse_header(lines.next().unwrap_or(""), "transcript", &["n", "k"])?;
        let (n, k) = (header[0], header[1]);
        let mut queries = Vec::with_capacity(k);
        let mut answers = Vec::with_capacity(k);
        for (idx, line) in lines.enumerate() {
            let lineno = idx + 2;
            let (bits, ans) = line
                .split_once(' ')
                .ok_or_else(|| Error::parse(lineno, "expected `<bits> <answer>`"))?;
            if bits.len() != n {
                return Err(Error::parse(
                    lineno,
                    format!("query has {} bits, expected {n}", bits.len()),
                ));
            }
            let q: Assignment = bits
                .parse()
                .map_err(|_| Error::parse(lineno, "query must contain only 0 and 1"))?;
            let ans = match ans {
                "0" => false,
                "1" => true,
                other => {
                    return Err(Error::parse(
                        lineno,
                        format!("answer {other:?} is not 0 or 1"),
                    ))
                }
            };
            queries.push(q);
            answers.push(ans);
        }
        if queries.len() != k {
            return Err(Error::parse(
                1,
                format!("header says k={k}, found {} lines", queries.len()),
            ));
        }
        Transcript::new(n, queries, answers)
    }
}
