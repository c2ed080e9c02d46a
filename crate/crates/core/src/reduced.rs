//! Learning through variable projection.
//!
//! Every map `h` of an `(n,q,d+1)`-perfect hash family turns the target `f`
//! into `f_h = f(x_{h(1)}, ..., x_{h(n)})` over `q` variables, and a query to
//! `f_h` is simulated by lifting it back to `n` variables. One shared inner
//! plan over `q` variables is lifted through every `h`, so the whole scheme
//! is still a single batch. After decoding every projection:
//!
//! 1. `d_max` is the largest number of relevant variables over all `h`;
//! 2. each `h` reaching `d_max` eliminates every `i` whose image is not
//!    relevant in its projection;
//! 3. the first `h_0` reaching `d_max` is inverted on the survivors.

use indexmap::IndexSet;

use crate::boolean::{Assignment, Mdnf, Monomial, VarMap};
use crate::designs::{design_for, grow_phf, DesignMatrix, HashFamily};
use crate::direct::{decode_direct, learn_direct, plan_direct, DirectDesigns, DirectPlan};
use crate::error::{Error, Result};
use crate::math::derive_seed;
use crate::oracle::{Teacher, Transcript};

/// Relevant-variable bound `d` and projection width `q` for `(n, s, r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub d: usize,
    pub q: usize,
    /// False when `q >= n`, where projecting cannot save anything and the
    /// direct learner runs instead.
    pub hashing: bool,
}

/// `d = min(rs, n)`, `q = max(3 r^2 s^2, 2 d^2 + 1)`, at least `d + 1`.
pub fn reduction(n: usize, s: usize, r: usize) -> Reduction {
    let d = (r * s).min(n);
    let q = (3 * r * r * s * s).max(2 * d * d + 1).max(d + 1);
    Reduction {
        d,
        q,
        hashing: q < n,
    }
}

/// The flattened two-level plan.
#[derive(Debug, Clone)]
pub struct ReducedPlan {
    n: usize,
    family: HashFamily,
    inner: DirectPlan,
    inner_len: usize,
    // h * inner_len + inner position -> flat batch position
    index: Vec<u32>,
    unique: usize,
}

impl ReducedPlan {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> &HashFamily {
        &self.family
    }

    pub fn inner(&self) -> &DirectPlan {
        &self.inner
    }

    /// `|P|` times the inner plan size, before any deduplication.
    pub fn raw_len(&self) -> usize {
        self.family.len() * self.inner.raw_len()
    }

    pub fn len(&self) -> usize {
        self.unique
    }

    pub fn is_empty(&self) -> bool {
        self.unique == 0
    }

    /// Flat batch position holding `lift(inner_batch[inner_pos], h)`.
    pub fn position(&self, h: usize, inner_pos: usize) -> usize {
        self.index[h * self.inner_len + inner_pos] as usize
    }
}

/// Lifts `q`-variable assignments through one map by OR-ing precomputed
/// preimage masks.
struct Lifter {
    n: usize,
    masks: Vec<Vec<u64>>,
}

impl Lifter {
    fn new(h: &VarMap) -> Self {
        let n = h.n();
        let words = n.div_ceil(64);
        let mut masks = vec![vec![0u64; words]; h.q()];
        for (i, &j) in h.images().iter().enumerate() {
            masks[j - 1][i / 64] |= 1 << (i % 64);
        }
        Self { n, masks }
    }

    fn lift(&self, c: &Assignment) -> Assignment {
        let mut out = vec![0u64; self.n.div_ceil(64)];
        for j in c.support() {
            for (o, m) in out.iter_mut().zip(&self.masks[j - 1]) {
                *o |= m;
            }
        }
        Assignment::from_words(self.n, out)
    }
}

/// Lifts the inner plan's batch through every member of `family`.
pub fn plan_reduced(
    n: usize,
    s: usize,
    r: usize,
    family: HashFamily,
    a_q: DesignMatrix,
    b_q: DesignMatrix,
) -> Result<(ReducedPlan, Vec<Assignment>)> {
    if family.n() != n {
        return Err(Error::invalid(format!(
            "hash family is over {} variables, expected {n}",
            family.n()
        )));
    }
    let need = (r * s).min(n) + 1;
    if family.d() < need {
        return Err(Error::invalid(format!(
            "hash family must be perfect on {need} points, declared d={}",
            family.d()
        )));
    }
    let q = family.q();
    let (inner, inner_batch) = plan_direct(q, s, r, a_q, b_q)?;
    let inner_len = inner_batch.len();
    let raw = family.len() * inner_len;
    if raw > u32::MAX as usize {
        return Err(Error::invalid("batch too large"));
    }
    let mut unique: IndexSet<Assignment> = IndexSet::with_capacity(raw);
    let mut index = Vec::with_capacity(raw);
    for h in family.funcs() {
        let lifter = Lifter::new(h);
        for c in &inner_batch {
            let (pos, _) = unique.insert_full(lifter.lift(c));
            index.push(pos as u32);
        }
    }
    let batch: Vec<Assignment> = unique.into_iter().collect();
    let plan = ReducedPlan {
        n,
        family,
        inner,
        inner_len,
        index,
        unique: batch.len(),
    };
    Ok((plan, batch))
}

/// Intermediate results of [`decode_reduced`], exposed for inspection.
#[derive(Debug, Clone)]
pub struct ReducedDecode {
    /// Decoded projection `f'_h` per family member.
    pub projections: Vec<Mdnf>,
    /// Relevant variables `V_h` per family member (over `[q]`).
    pub relevant: Vec<Vec<usize>>,
    pub d_max: usize,
    /// Variables of `[n]` surviving elimination, ascending.
    pub survivors: Vec<usize>,
    /// First member reaching `d_max`.
    pub h0: usize,
    pub hypothesis: Mdnf,
}

pub fn decode_reduced(plan: &ReducedPlan, answers: &[bool]) -> Result<Mdnf> {
    decode_reduced_detailed(plan, answers).map(|d| d.hypothesis)
}

pub fn decode_reduced_detailed(plan: &ReducedPlan, answers: &[bool]) -> Result<ReducedDecode> {
    if answers.len() != plan.unique {
        return Err(Error::invalid(format!(
            "{} answers for a batch of {}",
            answers.len(),
            plan.unique
        )));
    }
    let funcs = plan.family.funcs();
    if funcs.is_empty() {
        return Err(Error::PhfFailure("empty hash family".into()));
    }
    let (s, r) = (plan.inner.s(), plan.inner.r());

    let mut projections = Vec::with_capacity(funcs.len());
    let mut relevant = Vec::with_capacity(funcs.len());
    let mut inner_answers = vec![false; plan.inner_len];
    for k in 0..funcs.len() {
        for (p, slot) in inner_answers.iter_mut().enumerate() {
            *slot = answers[plan.position(k, p)];
        }
        let f_h = decode_direct(&plan.inner, &inner_answers)?;
        if f_h.terms().len() > s || f_h.rank() > r {
            return Err(Error::DesignFailure(format!(
                "projection {k} decoded to {f_h}, which is not a {s}-term {r}-MDNF"
            )));
        }
        relevant.push(f_h.relevant_vars()?);
        projections.push(f_h);
    }

    let d_max = relevant.iter().map(Vec::len).max().unwrap_or(0);
    let h0 = relevant
        .iter()
        .position(|v| v.len() == d_max)
        .expect("d_max is attained");
    if d_max == 0 {
        return Ok(ReducedDecode {
            projections,
            relevant,
            d_max,
            survivors: Vec::new(),
            h0,
            hypothesis: Mdnf::zero(plan.n),
        });
    }

    let mut alive = vec![true; plan.n];
    for (h, v_h) in funcs.iter().zip(&relevant) {
        if v_h.len() != d_max {
            continue;
        }
        for (i, &image) in h.images().iter().enumerate() {
            if v_h.binary_search(&image).is_err() {
                alive[i] = false;
            }
        }
    }
    let survivors: Vec<usize> = (1..=plan.n).filter(|&i| alive[i - 1]).collect();

    let h_0 = &funcs[h0];
    let mut preimage = vec![0usize; plan.family.q() + 1];
    for &j in &relevant[h0] {
        let mut hits = survivors.iter().filter(|&&i| h_0.apply(i) == j);
        match (hits.next(), hits.next()) {
            (Some(&i), None) => preimage[j] = i,
            (None, _) => {
                return Err(Error::PhfFailure(format!(
                    "no surviving variable maps to x{j} under member {h0}"
                )))
            }
            (Some(_), Some(_)) => {
                return Err(Error::PhfFailure(format!(
                    "several surviving variables map to x{j} under member {h0}"
                )))
            }
        }
    }
    let terms = projections[h0]
        .terms()
        .iter()
        .map(|t| Monomial::new(t.vars().iter().map(|&j| preimage[j])))
        .collect::<Result<Vec<_>>>()?;
    let hypothesis = Mdnf::new(plan.n, terms)?.reduce();
    Ok(ReducedDecode {
        projections,
        relevant,
        d_max,
        survivors,
        h0,
        hypothesis,
    })
}

/// Hash family plus the inner designs over `q` variables.
#[derive(Debug, Clone)]
pub struct ReducedDesigns {
    pub reduction: Reduction,
    pub family: HashFamily,
    pub inner: DirectDesigns,
}

impl ReducedDesigns {
    /// Requires `reduction(n, s, r).hashing`.
    pub fn build(
        n: usize,
        s: usize,
        r: usize,
        delta: f64,
        seed: u64,
        verify: bool,
    ) -> Result<Self> {
        Self::build_with(
            n,
            s,
            r,
            seed,
            |n, q, d, seed| grow_phf(n, q, d, delta, seed).map(|b| b.family),
            |n, s, r, seed| design_for(n, s, r, delta, seed, verify),
        )
    }

    /// Same seeds as [`ReducedDesigns::build`], custom constructions
    /// `make_phf(n, q, d, seed)` and `make_cff(n, s, r, seed)`.
    pub fn build_with(
        n: usize,
        s: usize,
        r: usize,
        seed: u64,
        make_phf: impl FnOnce(usize, usize, usize, u64) -> Result<HashFamily>,
        make_cff: impl FnMut(usize, usize, usize, u64) -> Result<DesignMatrix>,
    ) -> Result<Self> {
        let red = reduction(n, s, r);
        if !red.hashing {
            return Err(Error::invalid(format!(
                "q={} is not below n={n}; use the direct learner",
                red.q
            )));
        }
        let family = make_phf(n, red.q, red.d + 1, derive_seed(seed, 3))?;
        let inner = DirectDesigns::build_with(red.q, s, r, derive_seed(seed, 4), make_cff)?;
        Ok(Self {
            reduction: red,
            family,
            inner,
        })
    }
}

/// Settings for [`learn_reduced`].
#[derive(Clone, Copy, Debug)]
pub struct LearnSettings {
    pub delta: f64,
    pub seed: u64,
    /// Exhaustively verify designs where the resource guards allow it.
    pub verify: bool,
}

impl Default for LearnSettings {
    fn default() -> Self {
        Self {
            delta: 0.01,
            seed: 0,
            verify: true,
        }
    }
}

/// Builds designs, asks one strict batch and decodes. Falls back to the
/// direct learner when `q >= n`.
pub fn learn_reduced(
    n: usize,
    s: usize,
    r: usize,
    teacher: &mut Teacher,
    settings: &LearnSettings,
) -> Result<(Mdnf, Transcript)> {
    if teacher.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: teacher.n(),
        });
    }
    if !reduction(n, s, r).hashing {
        let d = DirectDesigns::build(n, s, r, settings.delta, settings.seed, settings.verify)?;
        return learn_direct(n, s, r, teacher, d.a, d.b);
    }
    let designs = ReducedDesigns::build(n, s, r, settings.delta, settings.seed, settings.verify)?;
    learn_reduced_with(
        n,
        s,
        r,
        teacher,
        designs.family,
        designs.inner.a,
        designs.inner.b,
    )
}

/// [`learn_reduced`] with caller-supplied designs.
pub fn learn_reduced_with(
    n: usize,
    s: usize,
    r: usize,
    teacher: &mut Teacher,
    family: HashFamily,
    a_q: DesignMatrix,
    b_q: DesignMatrix,
) -> Result<(Mdnf, Transcript)> {
    let (plan, batch) = plan_reduced(n, s, r, family, a_q, b_q)?;
    let answers = teacher.query_batch(&batch)?;
    let hypothesis = decode_reduced(&plan, &answers)?;
    let transcript = Transcript::new(n, batch, answers)?.with_counts(1, plan.raw_len());
    Ok((hypothesis, transcript))
}
