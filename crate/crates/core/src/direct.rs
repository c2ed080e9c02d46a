//! The product learner: query every `a ∧ b` for `a` in an `(n,(1,r))`-CFF
//! `A` and `b` in an `(n,(s-1,r))`-CFF `B`, then read one candidate term off
//! each slice `A ∧ b`.
//!
//! For a fixed `b`, the candidate is the set of variables `i` with
//! `(a ∧ b)_i >= f(a ∧ b)` for every `a`, i.e. the intersection of all
//! positive queries in the slice. If `b` satisfies exactly one term, that
//! term comes back; if it satisfies several, a proper (possibly empty)
//! subterm of one of them comes back; if it satisfies none, the slice is
//! all-negative. Keeping only the maximal candidates recovers the target.

use indexmap::IndexSet;

use crate::boolean::{Assignment, Mdnf, Monomial};
use crate::designs::{design_for, DesignMatrix, Verification};
use crate::error::{Error, Result};
use crate::math::derive_seed;
use crate::oracle::{Teacher, Transcript};

/// Designs plus the map from `(a-row, b-row)` to the deduplicated batch.
#[derive(Debug, Clone)]
pub struct DirectPlan {
    n: usize,
    s: usize,
    r: usize,
    a: DesignMatrix,
    b: DesignMatrix,
    // raw position b_row * |A| + a_row -> position in the unique batch
    index: Vec<u32>,
    unique: usize,
}

impl DirectPlan {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn a(&self) -> &DesignMatrix {
        &self.a
    }

    pub fn b(&self) -> &DesignMatrix {
        &self.b
    }

    /// `|A| * |B|`.
    pub fn raw_len(&self) -> usize {
        self.index.len()
    }

    /// Distinct queries actually asked.
    pub fn len(&self) -> usize {
        self.unique
    }

    pub fn is_empty(&self) -> bool {
        self.unique == 0
    }

    /// Batch position answering `a_row ∧ b_row`.
    pub fn position(&self, a_row: usize, b_row: usize) -> usize {
        self.index[b_row * self.a.len() + a_row] as usize
    }

    /// The batch before deduplication, `b`-major.
    pub fn raw_batch(&self) -> Vec<Assignment> {
        self.b
            .rows()
            .iter()
            .flat_map(|b| self.a.rows().iter().map(move |a| a.and_unchecked(b)))
            .collect()
    }
}

/// Builds the plan and the deduplicated query batch.
pub fn plan_direct(
    n: usize,
    s: usize,
    r: usize,
    a: DesignMatrix,
    b: DesignMatrix,
) -> Result<(DirectPlan, Vec<Assignment>)> {
    if s < 1 || r < 1 {
        return Err(Error::invalid(format!(
            "need s >= 1 and r >= 1 (s={s}, r={r})"
        )));
    }
    if a.n() != n || b.n() != n {
        return Err(Error::invalid(format!(
            "designs are over {} and {} variables, expected {n}",
            a.n(),
            b.n()
        )));
    }
    if (a.s(), a.r()) != (1, r) {
        return Err(Error::invalid(format!(
            "A must be an (n,(1,{r}))-CFF, got (n,({},{}))",
            a.s(),
            a.r()
        )));
    }
    if (b.s(), b.r()) != (s - 1, r) {
        return Err(Error::invalid(format!(
            "B must be an (n,({},{r}))-CFF, got (n,({},{}))",
            s - 1,
            b.s(),
            b.r()
        )));
    }
    for (name, design) in [("A", &a), ("B", &b)] {
        if design.verified() == Verification::Failed {
            return Err(Error::DesignFailure(format!(
                "{name} failed CFF verification"
            )));
        }
    }
    let raw = a.len() * b.len();
    if raw > u32::MAX as usize {
        return Err(Error::invalid("batch too large"));
    }
    let mut unique: IndexSet<Assignment> = IndexSet::with_capacity(raw);
    let mut index = Vec::with_capacity(raw);
    for brow in b.rows() {
        for arow in a.rows() {
            let (pos, _) = unique.insert_full(arow.and_unchecked(brow));
            index.push(pos as u32);
        }
    }
    let batch: Vec<Assignment> = unique.into_iter().collect();
    let plan = DirectPlan {
        n,
        s,
        r,
        a,
        b,
        index,
        unique: batch.len(),
    };
    Ok((plan, batch))
}

/// The candidate read off one slice `A ∧ b`, before pruning.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub b_row: usize,
    /// Some query in the slice was answered 1.
    pub positive: bool,
    /// Variables `i` with `(a ∧ b)_i >= f(a ∧ b)` for all `a`; the full set
    /// `[n]` for an all-negative slice. `None` if that set is empty, as
    /// when `b` satisfies terms that no single `a` keeps apart.
    pub term: Option<Monomial>,
}

/// Per-`b` candidates.
pub fn candidates(plan: &DirectPlan, answers: &[bool]) -> Result<Vec<Candidate>> {
    if answers.len() != plan.unique {
        return Err(Error::invalid(format!(
            "{} answers for a batch of {}",
            answers.len(),
            plan.unique
        )));
    }
    let a_len = plan.a.len();
    let out = plan
        .b
        .rows()
        .iter()
        .enumerate()
        .map(|(b_row, b)| {
            let mut acc = Assignment::ones(plan.n);
            let mut positive = false;
            for (a_row, a) in plan.a.rows().iter().enumerate() {
                if answers[plan.index[b_row * a_len + a_row] as usize] {
                    acc.and_assign_unchecked(a);
                    positive = true;
                }
            }
            if positive {
                acc.and_assign_unchecked(b);
            }
            let support = acc.support();
            let term = if support.is_empty() {
                None
            } else {
                Some(Monomial::new(support).expect("support is sorted and nonempty"))
            };
            Candidate {
                b_row,
                positive,
                term,
            }
        })
        .collect();
    Ok(out)
}

/// Decodes the answers into the hypothesis.
///
/// Candidates from all-negative slices are dropped (they are the full term
/// and carry no information); then every candidate that is a proper subset
/// of another is dropped; equal candidates collapse to one. No candidate
/// left means the constant-0 function.
pub fn decode_direct(plan: &DirectPlan, answers: &[bool]) -> Result<Mdnf> {
    let mut terms: Vec<Monomial> = candidates(plan, answers)?
        .into_iter()
        .filter(|c| c.positive)
        .filter_map(|c| c.term)
        .collect();
    terms.sort();
    terms.dedup();
    let kept: Vec<Monomial> = terms
        .iter()
        .filter(|t| !terms.iter().any(|u| t.is_proper_subset_of(u)))
        .cloned()
        .collect();
    Mdnf::new(plan.n, kept)
}

/// Plan, one strict batch, decode.
pub fn learn_direct(
    n: usize,
    s: usize,
    r: usize,
    teacher: &mut Teacher,
    a: DesignMatrix,
    b: DesignMatrix,
) -> Result<(Mdnf, Transcript)> {
    if teacher.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: teacher.n(),
        });
    }
    let (plan, batch) = plan_direct(n, s, r, a, b)?;
    let answers = teacher.query_batch(&batch)?;
    let hypothesis = decode_direct(&plan, &answers)?;
    let transcript = Transcript::new(n, batch, answers)?.with_counts(1, plan.raw_len());
    Ok((hypothesis, transcript))
}

/// The `(n,(1,r))` and `(n,(s-1,r))` designs the learner consumes.
#[derive(Debug, Clone)]
pub struct DirectDesigns {
    pub a: DesignMatrix,
    pub b: DesignMatrix,
}

impl DirectDesigns {
    /// Seeded construction; `A` and `B` draw from independent child seeds.
    pub fn build(
        n: usize,
        s: usize,
        r: usize,
        delta: f64,
        seed: u64,
        verify: bool,
    ) -> Result<Self> {
        Self::build_with(n, s, r, seed, |n, s, r, seed| {
            design_for(n, s, r, delta, seed, verify)
        })
    }

    /// Same seeds as [`DirectDesigns::build`], custom construction
    /// `make(n, s, r, seed)`.
    pub fn build_with(
        n: usize,
        s: usize,
        r: usize,
        seed: u64,
        mut make: impl FnMut(usize, usize, usize, u64) -> Result<DesignMatrix>,
    ) -> Result<Self> {
        if s < 1 || r < 1 {
            return Err(Error::invalid(format!(
                "need s >= 1 and r >= 1 (s={s}, r={r})"
            )));
        }
        let a = make(n, 1, r, derive_seed(seed, 1))?;
        let b = make(n, s - 1, r, derive_seed(seed, 2))?;
        Ok(Self { a, b })
    }
}
