//! Subset enumeration and ranking helpers.

/// Binomial coefficient `C(n, k)` in u128 (0 when `k > n`).
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// Lexicographic walker over the `k`-subsets of `0..n`.
///
/// Yields index slices in increasing lexicographic order without allocating per item.
#[derive(Debug, Clone)]
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    started: bool,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self { n, idx: (0..k).collect(), started: false, done: k > n }
    }

    /// Advances to the next subset and returns it, or `None` when exhausted.
    pub fn next_subset(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.idx);
        }
        let k = self.idx.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(&self.idx);
            }
        }
        self.done = true;
        None
    }
}

/// Calls `f` on every `k`-subset of `items` (in lexicographic order of positions).
pub fn for_each_subset<T: Copy>(items: &[T], k: usize, mut f: impl FnMut(&[T])) {
    let mut walker = Combinations::new(items.len(), k);
    let mut buf = Vec::with_capacity(k);
    while let Some(idx) = walker.next_subset() {
        buf.clear();
        buf.extend(idx.iter().map(|&i| items[i]));
        f(&buf);
    }
}

/// Number of transversal `t`-subsets: the elementary symmetric polynomial `e_t` of the class sizes.
pub fn transversal_count(class_sizes: &[usize], t: usize) -> u128 {
    let mut e = vec![0u128; t + 1];
    e[0] = 1;
    for &s in class_sizes {
        for j in (1..=t).rev() {
            e[j] = e[j].saturating_add(e[j - 1].saturating_mul(s as u128));
        }
    }
    e[t]
}

/// Calls `f` on every transversal `t`-subset (one point from each of `t` distinct classes).
///
/// Subsets come out with their points ordered by class index.
pub fn for_each_transversal(classes: &[Vec<u32>], t: usize, mut f: impl FnMut(&[u32])) {
    let mut walker = Combinations::new(classes.len(), t);
    let mut choice = vec![0usize; t];
    let mut buf = vec![0u32; t];
    while let Some(cls) = walker.next_subset() {
        choice.iter_mut().for_each(|c| *c = 0);
        'choices: loop {
            for i in 0..t {
                buf[i] = classes[cls[i]][choice[i]];
            }
            f(&buf);
            let mut i = t;
            loop {
                if i == 0 {
                    break 'choices;
                }
                i -= 1;
                choice[i] += 1;
                if choice[i] < classes[cls[i]].len() {
                    continue 'choices;
                }
                choice[i] = 0;
            }
        }
    }
}

/// Pascal table `table[n][k] = C(n, k)` for `n <= max_n`, `k <= max_k`, saturating at u64::MAX.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    rows: Vec<Vec<u64>>,
}

impl BinomialTable {
    pub fn new(max_n: usize, max_k: usize) -> Self {
        let mut rows = vec![vec![0u64; max_k + 1]; max_n + 1];
        for n in 0..=max_n {
            rows[n][0] = 1;
            for k in 1..=max_k.min(n) {
                rows[n][k] = rows[n - 1][k - 1].saturating_add(if k < n { rows[n - 1][k] } else { 0 });
            }
        }
        Self { rows }
    }

    pub fn get(&self, n: usize, k: usize) -> u64 {
        if k > n {
            0
        } else {
            self.rows[n][k]
        }
    }

    /// Rank of a strictly increasing sequence in the combinatorial number system.
    pub fn rank(&self, sorted: &[usize]) -> u64 {
        sorted.iter().enumerate().map(|(i, &c)| self.get(c, i + 1)).sum()
    }

    /// Inverse of [`BinomialTable::rank`] for subsets of size `k`.
    pub fn unrank(&self, mut rank: u64, k: usize) -> Vec<usize> {
        let mut out = vec![0; k];
        for i in (0..k).rev() {
            let mut c = i;
            while self.get(c + 1, i + 1) <= rank {
                c += 1;
            }
            rank -= self.get(c, i + 1);
            out[i] = c;
        }
        out
    }
}
