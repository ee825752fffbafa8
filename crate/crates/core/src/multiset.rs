//! Multisets over `{0..m-1}` stored as sorted label vectors.
//!
//! The dense symmetric tensors index their entries by the lexicographic rank
//! of these vectors.

use std::cmp::Ordering;

use crate::combinat::{binomial_u128, factorial_u128};

/// Number of multisets of size `n` over `m` labels, `C(m+n-1, n)`.
pub fn multichoose(m: usize, n: usize) -> usize {
    if m == 0 {
        return usize::from(n == 0);
    }
    binomial_u128(m + n - 1, n) as usize
}

/// All size-`n` multisets over `m` labels in lexicographic order.
pub fn enumerate(m: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(multichoose(m, n));
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    if m == 0 {
        return out;
    }
    let mut cur = vec![0usize; n];
    loop {
        out.push(cur.clone());
        // rightmost slot that can still grow
        let Some(i) = (0..n).rev().find(|&i| cur[i] + 1 < m) else {
            break;
        };
        let v = cur[i] + 1;
        for c in &mut cur[i..] {
            *c = v;
        }
    }
    out
}

/// Lexicographic rank of a sorted multiset among all of its size.
pub fn rank(m: usize, idx: &[usize]) -> usize {
    let n = idx.len();
    let mut r = 0;
    let mut prev = 0;
    for (i, &a) in idx.iter().enumerate() {
        for v in prev..a {
            r += multichoose(m - v, n - i - 1);
        }
        prev = a;
    }
    r
}

/// Number of distinct orderings, `n! / ∏ mult!`.
pub fn perm_count(idx: &[usize]) -> u128 {
    let mut p = factorial_u128(idx.len());
    for run in runs(idx) {
        p /= factorial_u128(run.1);
    }
    p
}

/// `(label, multiplicity)` pairs of a sorted multiset.
pub fn runs(idx: &[usize]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = Vec::new();
    for &x in idx {
        match out.last_mut() {
            Some((y, c)) if *y == x => *c += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

pub fn counts(m: usize, idx: &[usize]) -> Vec<usize> {
    let mut c = vec![0; m];
    for &x in idx {
        c[x] += 1;
    }
    c
}

pub fn from_counts(c: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(c.iter().sum());
    for (x, &k) in c.iter().enumerate() {
        out.extend(std::iter::repeat_n(x, k));
    }
    out
}

pub fn is_sorted(idx: &[usize]) -> bool {
    idx.windows(2).all(|w| w[0] <= w[1])
}

pub fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

/// Sorted union (sum) of two sorted multisets.
pub fn merge(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

type SplitVisitor<'a> = dyn FnMut(&[usize], &[usize], u128) + 'a;

/// Calls `f(alpha, beta, ways)` for every split `z = alpha + beta` with
/// `|alpha| = a`, where `ways = ∏_v C(z_v, alpha_v)` counts the position
/// subsets of `z` carrying `alpha`.
pub fn for_each_split(z: &[usize], a: usize, mut f: impl FnMut(&[usize], &[usize], u128)) {
    let r = runs(z);
    let mut take = vec![0usize; r.len()];
    fn rec(r: &[(usize, usize)], take: &mut [usize], pos: usize, left: usize, f: &mut SplitVisitor) {
        if pos == r.len() {
            if left == 0 {
                let mut alpha = Vec::new();
                let mut beta = Vec::new();
                let mut ways = 1u128;
                for (i, &(x, c)) in r.iter().enumerate() {
                    alpha.extend(std::iter::repeat_n(x, take[i]));
                    beta.extend(std::iter::repeat_n(x, c - take[i]));
                    ways *= binomial_u128(c, take[i]);
                }
                f(&alpha, &beta, ways);
            }
            return;
        }
        let rest: usize = r[pos + 1..].iter().map(|p| p.1).sum();
        let lo = left.saturating_sub(rest);
        for t in lo..=r[pos].1.min(left) {
            take[pos] = t;
            rec(r, take, pos + 1, left - t, f);
        }
    }
    if a <= z.len() {
        rec(&r, &mut take, 0, a, &mut f);
    }
}

/// Every sub-multiset of `z` (each distinct multiset once), with the number
/// of position subsets realizing it.
pub fn sub_multisets(z: &[usize]) -> Vec<(Vec<usize>, u128)> {
    let mut out = Vec::new();
    for a in 0..=z.len() {
        for_each_split(z, a, |alpha, _, ways| out.push((alpha.to_vec(), ways)));
    }
    out
}

/// All distinct orderings of a sorted multiset, in lexicographic order.
pub fn arrangements(idx: &[usize]) -> Vec<Vec<usize>> {
    let mut cur = idx.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    while next_permutation(&mut cur) {
        out.push(cur.clone());
    }
    out
}

pub fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Sub-multisets picked by every one of the `2^n` position subsets.
pub fn position_subsets(z: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let n = z.len();
    (0u64..(1u64 << n)).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| z[i]).collect())
}

/// Lexicographic comparison used for canonical output ordering.
pub fn cmp_lex(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}
