//! Explicit function families `[n] -> [q]`: interval and hash splitters,
//! greedy universal families, their composition, and brute-force checks.
//!
//! Domain elements and values are 0-based in memory. The text format in
//! [`crate::io`] writes values 1-based.

use std::collections::HashSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Largest `C(n, k) * q^k` a universal family is built or checked for.
pub const CONSTRAINT_CAP: u64 = 1 << 24;
/// Largest number of functions a construction may enumerate.
pub const FAMILY_CAP: u64 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerandError {
    #[error("invalid parameters: {0}")]
    Parameter(String),
    #[error("too large: {0}")]
    TooLarge(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    /// Some member splits every `k`-subset evenly.
    Splitter,
    /// Some member realizes every assignment on every `k`-subset.
    Universal,
    /// Some member is injective on every `k`-subset.
    PerfectHash,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Splitter => "splitter",
            FamilyKind::Universal => "universal",
            FamilyKind::PerfectHash => "perfect-hash",
        }
    }

    pub fn parse(s: &str) -> Option<FamilyKind> {
        match s {
            "splitter" => Some(FamilyKind::Splitter),
            "universal" => Some(FamilyKind::Universal),
            "perfect-hash" => Some(FamilyKind::PerfectHash),
            _ => None,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A list of total functions `[n] -> [q]` stored row by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionFamily {
    pub n: usize,
    pub q: u32,
    pub k: usize,
    pub kind: FamilyKind,
    pub meta: String,
    values: Vec<u8>,
}

impl FunctionFamily {
    pub fn new(n: usize, q: u32, k: usize, kind: FamilyKind, meta: impl Into<String>) -> FunctionFamily {
        assert!((1..=256).contains(&q), "range size must be in 1..=256");
        FunctionFamily {
            n,
            q,
            k,
            kind,
            meta: meta.into(),
            values: Vec::new(),
        }
    }

    /// Panics if `f` has the wrong length or a value outside `[q]`.
    pub fn push(&mut self, f: &[u8]) {
        assert_eq!(f.len(), self.n, "function must be total on [n]");
        assert!(f.iter().all(|&v| (v as u32) < self.q), "value outside range");
        self.values.extend_from_slice(f);
    }

    pub fn len(&self) -> usize {
        if self.n == 0 {
            0
        } else {
            self.values.len() / self.n
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> &[u8] {
        &self.values[i * self.n..(i + 1) * self.n]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u8]> + '_ {
        self.values.chunks_exact(self.n.max(1))
    }

    fn dedup(&mut self) {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(self.values.len());
        for f in self.values.chunks_exact(self.n.max(1)) {
            if seen.insert(f.to_vec()) {
                out.extend_from_slice(f);
            }
        }
        self.values = out;
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

fn checked_pow(q: u32, k: usize) -> u64 {
    (q as u64).checked_pow(k as u32).unwrap_or(u64::MAX)
}

/// Every function `[n] -> [q]`, as an `(n, n, q)`-universal family.
pub fn all_functions(n: usize, q: u32) -> Result<FunctionFamily, DerandError> {
    let count = checked_pow(q, n);
    if count > FAMILY_CAP {
        return Err(DerandError::TooLarge(format!("{q}^{n} functions")));
    }
    let mut fam = FunctionFamily::new(n, q, n, FamilyKind::Universal, "all");
    let mut f = vec![0u8; n];
    for _ in 0..count {
        fam.push(&f);
        for v in f.iter_mut() {
            if (*v as u32) + 1 < q {
                *v += 1;
                break;
            }
            *v = 0;
        }
    }
    Ok(fam)
}

/// Threshold functions: for split points `x_1 < ... < x_{q-1}` in `[n]`,
/// `f(x) = j` when `x_{j-1} < x <= x_j`, with `x_0 = 0` and `x_q = n`.
/// Split points may equal `n`, which leaves the last class empty.
pub fn build_interval_splitter(n: usize, k: usize, q: u32) -> Result<FunctionFamily, DerandError> {
    if k < 1 || q < 1 || k > n || q as usize > n || q > 256 {
        return Err(DerandError::Parameter(format!(
            "interval splitter needs 1 <= k, q <= n (n={n}, k={k}, q={q})"
        )));
    }
    if binomial(n as u64, q as u64 - 1) > FAMILY_CAP {
        return Err(DerandError::TooLarge(format!("C({n}, {})", q - 1)));
    }
    let mut fam = FunctionFamily::new(n, q, k, FamilyKind::Splitter, "interval");
    let mut f = vec![0u8; n];
    for_each_subset(n, q as usize - 1, |points| {
        // element x (1-based) gets the number of split points below it
        for (i, slot) in f.iter_mut().enumerate() {
            *slot = points.iter().filter(|&&p| p < i).count() as u8;
        }
        fam.push(&f);
    });
    fam.dedup();
    Ok(fam)
}

/// An `(n, k, k^2)`-splitter, that is, some member is injective on every
/// `k`-subset. Uses `h_a(x) = ((a x) mod p) mod k^2` for `a` in `1..p`,
/// with `p` the smallest prime at least `max(n, k^2 + 1)`.
pub fn build_hash_splitter(n: usize, k: usize) -> Result<FunctionFamily, DerandError> {
    if n < 1 || k < 1 {
        return Err(DerandError::Parameter(format!("hash splitter needs n, k >= 1 (n={n}, k={k})")));
    }
    if k * k > 256 {
        return Err(DerandError::TooLarge(format!("range k^2 = {}", k * k)));
    }
    let range = (k * k) as u32;
    let mut fam = FunctionFamily::new(n, range, k, FamilyKind::Splitter, "hash");
    if k == 1 {
        fam.push(&vec![0; n]);
        return Ok(fam);
    }
    if n <= k * k {
        let id: Vec<u8> = (0..n).map(|x| x as u8).collect();
        fam.push(&id);
        return Ok(fam);
    }
    let p = next_prime(n.max(k * k + 1)) as u64;
    let mut f = vec![0u8; n];
    for a in 1..p {
        for (i, slot) in f.iter_mut().enumerate() {
            let x = i as u64 + 1;
            *slot = ((a * x % p) % range as u64) as u8;
        }
        fam.push(&f);
    }
    fam.dedup();
    Ok(fam)
}

fn next_prime(mut m: usize) -> usize {
    let is_prime = |x: usize| x >= 2 && (2..).take_while(|d| d * d <= x).all(|d| !x.is_multiple_of(d));
    while !is_prime(m) {
        m += 1;
    }
    m
}

/// Greedy cover of all constraints `(S, phi)` with `|S| = k`.
///
/// Each round adds the candidate covering the most uncovered constraints.
/// When `q^n` is small the candidates are all functions. Otherwise they are
/// the functions constant on the blocks of a fresh random balanced partition
/// into `k` blocks, plus a few random functions overwritten to realize one
/// uncovered constraint each, so every round makes progress.
pub fn build_universal_greedy(n: usize, k: usize, q: u32) -> Result<FunctionFamily, DerandError> {
    if k < 1 || k > n || !(1..=256).contains(&q) {
        return Err(DerandError::Parameter(format!(
            "universal family needs 1 <= k <= n and 1 <= q <= 256 (n={n}, k={k}, q={q})"
        )));
    }
    let per_set = checked_pow(q, k);
    let total = binomial(n as u64, k as u64).saturating_mul(per_set);
    if total > CONSTRAINT_CAP {
        return Err(DerandError::TooLarge(format!("{total} constraints")));
    }
    let subsets = k_subsets(n, k);
    let mut table = Coverage::new(subsets.len(), per_set as usize);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ ((n as u64) << 32) ^ ((k as u64) << 16) ^ q as u64);
    let small_pool = if checked_pow(q, n) <= 1024 {
        Some(all_functions(n, q)?)
    } else {
        None
    };
    let mut fam = FunctionFamily::new(n, q, k, FamilyKind::Universal, "greedy");
    while table.uncovered > 0 {
        let pool: Vec<Vec<u8>> = match &small_pool {
            Some(all) => all.iter().map(<[u8]>::to_vec).collect(),
            None => random_pool(n, k, q, &subsets, &table, &mut rng),
        };
        let mut best: Option<(usize, &Vec<u8>)> = None;
        for f in &pool {
            let gain = table.gain(&subsets, q, f);
            if best.is_none_or(|(g, _)| gain > g) {
                best = Some((gain, f));
            }
        }
        match best {
            Some((gain, f)) if gain > 0 => {
                table.mark(&subsets, q, f);
                fam.push(f);
            }
            _ => break,
        }
    }
    // repair: one bespoke function per constraint still open
    while let Some((s, code)) = table.first_uncovered() {
        let mut f = vec![0u8; n];
        decode_into(&subsets[s], q, code, &mut f);
        table.mark(&subsets, q, &f);
        fam.push(&f);
    }
    Ok(fam)
}

fn random_pool(
    n: usize,
    k: usize,
    q: u32,
    subsets: &[Vec<usize>],
    table: &Coverage,
    rng: &mut ChaCha8Rng,
) -> Vec<Vec<u8>> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut block = vec![0usize; n];
    for (pos, &x) in order.iter().enumerate() {
        block[x] = pos % k;
    }
    let mut pool = Vec::new();
    let per_block = checked_pow(q, k);
    let push_block_fn = |assign: &[u8], pool: &mut Vec<Vec<u8>>| {
        pool.push((0..n).map(|x| assign[block[x]]).collect());
    };
    let mut assign = vec![0u8; k];
    if per_block <= 256 {
        for _ in 0..per_block {
            push_block_fn(&assign, &mut pool);
            for v in assign.iter_mut() {
                if (*v as u32) + 1 < q {
                    *v += 1;
                    break;
                }
                *v = 0;
            }
        }
    } else {
        for _ in 0..256 {
            for v in assign.iter_mut() {
                *v = rng.gen_range(0..q) as u8;
            }
            push_block_fn(&assign, &mut pool);
        }
    }
    for (s, code) in table.uncovered_sample(8, rng) {
        let mut f: Vec<u8> = (0..n).map(|_| rng.gen_range(0..q) as u8).collect();
        decode_into(&subsets[s], q, code, &mut f);
        pool.push(f);
    }
    pool
}

struct Coverage {
    words: usize,
    per_set: usize,
    bits: Vec<u64>,
    uncovered: usize,
}

impl Coverage {
    fn new(sets: usize, per_set: usize) -> Coverage {
        let words = per_set.div_ceil(64);
        Coverage {
            words,
            per_set,
            bits: vec![0; sets * words],
            uncovered: sets * per_set,
        }
    }

    fn is_set(&self, s: usize, code: usize) -> bool {
        self.bits[s * self.words + code / 64] >> (code % 64) & 1 == 1
    }

    fn gain(&self, subsets: &[Vec<usize>], q: u32, f: &[u8]) -> usize {
        subsets
            .iter()
            .enumerate()
            .filter(|(s, set)| !self.is_set(*s, encode(set, q, f)))
            .count()
    }

    fn mark(&mut self, subsets: &[Vec<usize>], q: u32, f: &[u8]) {
        for (s, set) in subsets.iter().enumerate() {
            let code = encode(set, q, f);
            let w = &mut self.bits[s * self.words + code / 64];
            if *w >> (code % 64) & 1 == 0 {
                *w |= 1 << (code % 64);
                self.uncovered -= 1;
            }
        }
    }

    fn first_uncovered(&self) -> Option<(usize, usize)> {
        if self.uncovered == 0 {
            return None;
        }
        let sets = self.bits.len() / self.words.max(1);
        (0..sets)
            .flat_map(|s| (0..self.per_set).map(move |c| (s, c)))
            .find(|&(s, c)| !self.is_set(s, c))
    }

    fn uncovered_sample(&self, want: usize, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
        let sets = self.bits.len() / self.words.max(1);
        let mut out = Vec::new();
        if self.uncovered == 0 || sets == 0 {
            return out;
        }
        let start = rng.gen_range(0..sets);
        for off in 0..sets {
            let s = (start + off) % sets;
            for c in 0..self.per_set {
                if !self.is_set(s, c) {
                    out.push((s, c));
                    break;
                }
            }
            if out.len() == want {
                break;
            }
        }
        out
    }
}

fn encode(set: &[usize], q: u32, f: &[u8]) -> usize {
    set.iter().rev().fold(0usize, |acc, &x| acc * q as usize + f[x] as usize)
}

fn decode_into(set: &[usize], q: u32, mut code: usize, f: &mut [u8]) {
    for &x in set {
        f[x] = (code % q as usize) as u8;
        code /= q as usize;
    }
}

fn ceil_log2(k: usize) -> usize {
    let mut b = 0;
    while (1usize << b) < k {
        b += 1;
    }
    b
}

/// Three-level composition: a hash splitter `A` into `[k^2]`, an interval
/// splitter `B` of `[k^2]` into `b = max(1, ceil(log2 k))` blocks, and a
/// greedy `(k^2, ceil(k / b), q)`-universal family `D`. Each tuple
/// `(f_a, f_b, g_1, ..., g_b)` yields `f(x) = g_r(f_a(x))` with
/// `r = f_b(f_a(x))`.
pub fn compose_universal(n: usize, k: usize, q: u32) -> Result<FunctionFamily, DerandError> {
    if n < 1 || k < 1 || k > n || q < 1 {
        return Err(DerandError::Parameter(format!(
            "composition needs 1 <= k <= n and q >= 1 (n={n}, k={k}, q={q})"
        )));
    }
    let a = build_hash_splitter(n, k)?;
    let b = ceil_log2(k).max(1);
    let cap = k.div_ceil(b);
    let bfam = build_interval_splitter(k * k, k, b as u32)?;
    let dfam = build_universal_greedy(k * k, cap, q)?;
    let tuples = (a.len() as u64)
        .saturating_mul(bfam.len() as u64)
        .saturating_mul((dfam.len() as u64).saturating_pow(b as u32));
    if tuples > FAMILY_CAP {
        return Err(DerandError::TooLarge(format!("{tuples} composite functions")));
    }
    let mut fam = FunctionFamily::new(n, q, k, FamilyKind::Universal, "compose");
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut pick = vec![0usize; b];
    let mut f = vec![0u8; n];
    for fa in a.iter() {
        for fb in bfam.iter() {
            pick.iter_mut().for_each(|p| *p = 0);
            loop {
                for x in 0..n {
                    let y = fa[x] as usize;
                    let r = fb[y] as usize;
                    f[x] = dfam.get(pick[r])[y];
                }
                if seen.insert(f.clone()) {
                    fam.push(&f);
                }
                // next tuple of D-members
                let mut i = 0;
                while i < b {
                    pick[i] += 1;
                    if pick[i] < dfam.len() {
                        break;
                    }
                    pick[i] = 0;
                    i += 1;
                }
                if i == b {
                    break;
                }
            }
        }
    }
    Ok(fam)
}

/// Brute-force check of the declared property over every `k`-subset (and
/// every assignment, for universal families).
pub fn verify_family(fam: &FunctionFamily) -> Result<bool, DerandError> {
    let (n, k, q) = (fam.n, fam.k, fam.q);
    if k > n {
        return Ok(true);
    }
    let sets = binomial(n as u64, k as u64);
    let per_set = if fam.kind == FamilyKind::Universal {
        checked_pow(q, k)
    } else {
        1
    };
    if sets.saturating_mul(per_set) > CONSTRAINT_CAP {
        return Err(DerandError::TooLarge(format!("{sets} subsets x {per_set} assignments")));
    }
    let mut ok = true;
    let mut counts = vec![0usize; q as usize];
    let mut seen = vec![false; per_set as usize];
    for_each_subset(n, k, |set| {
        if !ok {
            return;
        }
        ok = match fam.kind {
            FamilyKind::Universal => {
                seen.iter_mut().for_each(|s| *s = false);
                let mut missing = per_set as usize;
                for f in fam.iter() {
                    let c = encode(set, q, f);
                    if !seen[c] {
                        seen[c] = true;
                        missing -= 1;
                        if missing == 0 {
                            break;
                        }
                    }
                }
                missing == 0
            }
            FamilyKind::Splitter => fam.iter().any(|f| {
                counts.iter_mut().for_each(|c| *c = 0);
                for &x in set {
                    counts[f[x] as usize] += 1;
                }
                let lo = k / q as usize;
                counts.iter().all(|&c| c == lo || c == lo + 1)
                    && counts.iter().filter(|&&c| c == lo + 1).count() == k % q as usize
            }),
            FamilyKind::PerfectHash => fam.iter().any(|f| {
                let mut used = [0u64; 4];
                set.iter().all(|&x| {
                    let v = f[x] as usize;
                    let fresh = used[v / 64] >> (v % 64) & 1 == 0;
                    used[v / 64] |= 1 << (v % 64);
                    fresh
                })
            }),
        };
    });
    Ok(ok)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_subset(n, k, |s| out.push(s.to_vec()));
    out
}

pub(crate) fn for_each_subset<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    fn rec<F: FnMut(&[usize])>(n: usize, k: usize, from: usize, cur: &mut Vec<usize>, f: &mut F) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in from..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(n, k, i + 1, cur, f);
            cur.pop();
        }
    }
    if k <= n {
        rec(n, k, 0, &mut Vec::with_capacity(k), &mut f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn family(n: usize, q: u32, k: usize, kind: FamilyKind, fs: &[&[u8]]) -> FunctionFamily {
        let mut fam = FunctionFamily::new(n, q, k, kind, "test");
        for f in fs {
            fam.push(f);
        }
        fam
    }

    // Splitter check written straight from the definition: every pair of
    // classes differs by at most one.
    fn splits_evenly_somewhere(fam: &FunctionFamily, set: &[usize]) -> bool {
        fam.iter().any(|f| {
            let counts: Vec<usize> = (0..fam.q as u8)
                .map(|z| set.iter().filter(|&&x| f[x] == z).count())
                .collect();
            counts.iter().max().unwrap() - counts.iter().min().unwrap() <= 1
        })
    }

    #[test]
    fn interval_splitter_examples() {
        let fam = build_interval_splitter(4, 2, 2).unwrap();
        assert_eq!(fam.len(), 4);
        assert!(verify_family(&fam).unwrap());
        for set in k_subsets(4, 2) {
            assert!(splits_evenly_somewhere(&fam, &set));
        }
        let constant = build_interval_splitter(5, 3, 1).unwrap();
        assert_eq!(constant.len(), 1);
        assert!(constant.get(0).iter().all(|&v| v == 0));
        let full = build_interval_splitter(5, 2, 5).unwrap();
        assert!(full.iter().any(|f| f == [0, 1, 2, 3, 4]));
    }

    #[test]
    fn interval_splitter_size_is_binomial() {
        for n in 1..=8 {
            for q in 1..=n as u32 {
                let fam = build_interval_splitter(n, 1, q).unwrap();
                assert_eq!(fam.len() as u64, binomial(n as u64, q as u64 - 1), "n={n} q={q}");
            }
        }
    }

    #[test]
    fn interval_splitter_rejects_bad_parameters() {
        assert!(build_interval_splitter(3, 0, 2).is_err());
        assert!(build_interval_splitter(3, 2, 4).is_err());
    }

    #[test]
    fn hash_splitter_examples() {
        let fam = build_hash_splitter(5, 2).unwrap();
        assert_eq!(fam.q, 4);
        assert!(verify_family(&fam).unwrap());
        let one = build_hash_splitter(7, 1).unwrap();
        assert_eq!(one.len(), 1);
        let id = build_hash_splitter(4, 2).unwrap();
        assert_eq!(id.len(), 1);
        assert!(verify_family(&id).unwrap());
    }

    #[test]
    fn greedy_examples() {
        let fam = build_universal_greedy(3, 1, 2).unwrap();
        assert!(verify_family(&fam).unwrap());
        assert_eq!(fam.len(), 2);
        let fam = build_universal_greedy(2, 2, 2).unwrap();
        assert!(verify_family(&fam).unwrap());
        assert_eq!(fam.len(), 4);
    }

    #[test]
    fn greedy_with_random_pool_verifies() {
        let fam = build_universal_greedy(11, 2, 3).unwrap();
        assert!(verify_family(&fam).unwrap());
    }

    #[test]
    fn all_functions_are_universal() {
        let fam = all_functions(4, 3).unwrap();
        assert_eq!(fam.len(), 81);
        let mut as_k2 = fam.clone();
        as_k2.k = 2;
        assert!(verify_family(&fam).unwrap());
        assert!(verify_family(&as_k2).unwrap());
    }

    #[test]
    fn verify_rejects_constant_family() {
        let fam = family(2, 2, 1, FamilyKind::Universal, &[&[0, 0]]);
        assert!(!verify_family(&fam).unwrap());
        let split = family(2, 2, 2, FamilyKind::Splitter, &[&[0, 0]]);
        assert!(!verify_family(&split).unwrap());
        let hash = family(3, 3, 2, FamilyKind::PerfectHash, &[&[0, 1, 1], &[0, 0, 1]]);
        assert!(verify_family(&hash).unwrap());
    }

    #[test]
    fn composition_examples() {
        for (n, k, q) in [(6, 2, 2), (4, 2, 3), (5, 1, 3), (7, 3, 2)] {
            let fam = compose_universal(n, k, q).unwrap();
            assert!(verify_family(&fam).unwrap(), "n={n} k={k} q={q}");
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(12, 6), 924);
        assert_eq!(binomial(3, 5), 0);
    }
}
