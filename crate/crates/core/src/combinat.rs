//! Set partitions via restricted-growth strings, integer partitions and
//! compositions, and machine-integer factorials.

use std::collections::BTreeMap;

pub fn factorial_u128(n: usize) -> u128 {
    (2..=n as u128).product()
}

pub fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Restricted-growth strings of length `n` using exactly `k` block labels.
///
/// `a[0] = 0` and `a[i] <= 1 + max(a[..i])`; element `i` lies in block `a[i]`.
pub fn rgs(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        if k == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    if k == 0 || k > n {
        return out;
    }
    let mut a = vec![0usize; n];
    fn rec(a: &mut [usize], i: usize, used: usize, k: usize, out: &mut Vec<Vec<usize>>) {
        let n = a.len();
        if i == n {
            if used == k {
                out.push(a.to_vec());
            }
            return;
        }
        // not enough positions left to open the missing blocks
        if k - used > n - i {
            return;
        }
        for b in 0..=used.min(k - 1) {
            a[i] = b;
            rec(a, i + 1, used.max(b + 1), k, out);
        }
    }
    rec(&mut a, 1, 1, k, &mut out);
    out
}

/// Blocks of the set partition encoded by a restricted-growth string.
pub fn blocks(rgs: &[usize]) -> Vec<Vec<usize>> {
    let k = rgs.iter().max().map_or(0, |&b| b + 1);
    let mut out = vec![Vec::new(); k];
    for (i, &b) in rgs.iter().enumerate() {
        out[b].push(i);
    }
    out
}

/// All set partitions of `{0..n-1}` into exactly `k` blocks.
pub fn set_partitions(n: usize, k: usize) -> Vec<Vec<Vec<usize>>> {
    rgs(n, k).iter().map(|a| blocks(a)).collect()
}

/// Block sizes of a restricted-growth string, sorted decreasingly.
pub fn shape(rgs: &[usize]) -> Vec<usize> {
    let mut s: Vec<usize> = blocks(rgs).iter().map(Vec::len).collect();
    s.sort_unstable_by(|a, b| b.cmp(a));
    s
}

/// Number of set partitions of `{0..n-1}` of each block-size shape, for
/// partitions into exactly `k` blocks.
pub fn shape_tally(n: usize, k: usize) -> BTreeMap<Vec<usize>, u128> {
    let mut t = BTreeMap::new();
    for a in rgs(n, k) {
        *t.entry(shape(&a)).or_insert(0) += 1;
    }
    t
}

/// Integer compositions of `n` into exactly `k` positive parts.
pub fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            if n == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for p in 1..=n.saturating_sub(k - 1) {
            cur.push(p);
            rec(n - p, k - 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, &mut Vec::new(), &mut out);
    out
}

/// Checks that `blocks` is a partition of `{0..n-1}` into nonempty blocks.
pub fn validate_partition(n: usize, blocks: &[Vec<usize>]) -> Result<(), String> {
    let mut seen = vec![false; n];
    for b in blocks {
        if b.is_empty() {
            return Err("empty block".into());
        }
        for &x in b {
            if x >= n {
                return Err(format!("element {x} out of range"));
            }
            if seen[x] {
                return Err(format!("element {x} appears twice"));
            }
            seen[x] = true;
        }
    }
    match seen.iter().position(|s| !s) {
        Some(x) => Err(format!("element {x} is not covered")),
        None => Ok(()),
    }
}
