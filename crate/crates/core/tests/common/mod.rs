//! Naive reference implementations shared by the integration tests. They
//! work on plain vectors and never call the library's checkers.

#![allow(dead_code)]

use hyperlearn::{Assignment, Mdnf};

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Rows as bit vectors.
pub fn bits(rows: &[Assignment]) -> Vec<Vec<bool>> {
    rows.iter()
        .map(|a| (1..=a.n()).map(|i| a.get(i)).collect())
        .collect()
}

/// Every `(s+r)`-set of columns and every `s`-subset `J` of it: some row is
/// 0 on `J` and 1 on the rest.
pub fn naive_cff(rows: &[Vec<bool>], n: usize, s: usize, r: usize) -> bool {
    for set in subsets(n, s + r) {
        for pick in subsets(s + r, s) {
            let zeros: Vec<usize> = pick.iter().map(|&p| set[p]).collect();
            let ones: Vec<usize> = set.iter().copied().filter(|c| !zeros.contains(c)).collect();
            let hit = rows
                .iter()
                .any(|row| zeros.iter().all(|&c| !row[c]) && ones.iter().all(|&c| row[c]));
            if !hit {
                return false;
            }
        }
    }
    true
}

/// `funcs[k][i]` is the image of variable `i + 1`.
pub fn naive_phf(funcs: &[Vec<usize>], n: usize, d: usize) -> bool {
    subsets(n, d)
        .iter()
        .all(|set| funcs.iter().any(|f| injective(f, set)))
}

pub fn injective(f: &[usize], zero_based: &[usize]) -> bool {
    let mut seen: Vec<usize> = zero_based.iter().map(|&i| f[i]).collect();
    seen.sort_unstable();
    seen.windows(2).all(|w| w[0] != w[1])
}

/// Every reduced MDNF over `n` variables with at most `s` terms of rank at
/// most `r`, the zero function included.
pub fn all_targets(n: usize, s: usize, r: usize) -> Vec<Mdnf> {
    let mut terms: Vec<Vec<usize>> = Vec::new();
    for k in 1..=r.min(n) {
        for t in subsets(n, k) {
            terms.push(t.into_iter().map(|i| i + 1).collect());
        }
    }
    let nested = |a: &Vec<usize>, b: &Vec<usize>| {
        a.iter().all(|x| b.contains(x)) || b.iter().all(|x| a.contains(x))
    };
    let mut out = Vec::new();
    for k in 0..=s {
        for pick in subsets(terms.len(), k) {
            let chosen: Vec<&Vec<usize>> = pick.iter().map(|&p| &terms[p]).collect();
            let antichain = (0..chosen.len())
                .all(|i| (i + 1..chosen.len()).all(|j| !nested(chosen[i], chosen[j])));
            if antichain {
                let sets: Vec<&[usize]> = chosen.iter().map(|t| t.as_slice()).collect();
                out.push(Mdnf::from_sets(n, &sets).unwrap());
            }
        }
    }
    out
}

/// Truth table by direct evaluation of the term sets.
pub fn truth_table(terms: &[Vec<usize>], n: usize) -> Vec<bool> {
    (0..1u64 << n)
        .map(|m| {
            terms
                .iter()
                .any(|t| t.iter().all(|&v| m >> (v - 1) & 1 == 1))
        })
        .collect()
}

pub fn term_sets(f: &Mdnf) -> Vec<Vec<usize>> {
    f.terms().iter().map(|t| t.vars().to_vec()).collect()
}
