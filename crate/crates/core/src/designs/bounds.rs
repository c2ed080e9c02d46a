use crate::designs::DesignMatrix;
use crate::error::{Error, Result};
use crate::math::ln_binomial;

/// Size figures for a cover-free family, for reporting only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SizeReport {
    /// `N(s, r)`.
    pub n_s_r: f64,
    /// `N(s, r) * log2 n`, the lower-bound baseline with its constant set to 1.
    pub cff_lower_bound: f64,
    pub achieved_rows: usize,
}

/// `N(s, r) = (s + r) / log2 C(s + r, r) * C(s + r, r)`.
///
/// Evaluated in log space; the result saturates to infinity past `f64`.
pub fn n_s_r(s: usize, r: usize) -> Result<f64> {
    if r < 1 || s + r < 2 {
        return Err(Error::invalid(format!(
            "N(s,r) needs r >= 1 and s + r >= 2 (got s={s}, r={r})"
        )));
    }
    let d = (s + r) as u64;
    let ln_c = ln_binomial(d, r as u64);
    let log2_c = ln_c / std::f64::consts::LN_2;
    Ok(((d as f64).ln() - log2_c.ln() + ln_c).exp())
}

/// `N(s, r) * log2 n`.
pub fn cff_lower_bound(n: usize, s: usize, r: usize) -> Result<f64> {
    Ok(n_s_r(s, r)? * (n as f64).log2())
}

pub fn size_report(design: &DesignMatrix) -> Result<SizeReport> {
    let n_s_r = n_s_r(design.s(), design.r())?;
    Ok(SizeReport {
        n_s_r,
        cff_lower_bound: n_s_r * (design.n() as f64).log2(),
        achieved_rows: design.len(),
    })
}

/// `d^2 log2 n / log2(q / d^2)` with the hidden constant set to 1; `None`
/// when `q <= d^2` makes the expression meaningless.
pub fn phf_size_target(n: usize, q: usize, d: usize) -> Option<f64> {
    let d2 = (d * d) as f64;
    let ratio = q as f64 / d2;
    if ratio <= 1.0 {
        return None;
    }
    Some(d2 * (n as f64).log2() / ratio.log2())
}
