//! Exhaustive checking of the divisible-design axioms, lambda histograms,
//! hypersimplicity and isomorphism-invariant fingerprints.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::{binomial, for_each_transversal, transversal_count, BinomialTable, Combinations};
use crate::design::{DesignParams, DivisibleDesign};
use crate::limits::{GuardExceeded, Limits};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Guard(#[from] GuardExceeded),
    #[error("invalid input: {0}")]
    Input(String),
}

/// True iff no class contains two points of `y`.
pub fn is_transversal(y: &[u32], class_of: &[u32]) -> bool {
    let mut cls: Vec<u32> = y.iter().map(|&x| class_of[x as usize]).collect();
    cls.sort_unstable();
    cls.windows(2).all(|w| w[0] != w[1])
}

/// A concrete reason an axiom fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Two points of the block lie in one class.
    NonTransversalBlock { block: usize, points: [u32; 2], class: u32 },
    WrongBlockSize { block: usize, size: usize, expected: u64 },
    RepeatedBlock { first: usize, second: usize },
    WrongClassSize { class: usize, size: usize, expected: u64 },
    /// A transversal t-subset lies in `count` blocks instead of `expected`.
    WrongLambda { subset: Vec<u32>, count: u64, expected: u64 },
    TooFewClasses { t: u64, v: usize, s: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
}

impl AxiomCheck {
    fn ok() -> Self {
        Self { pass: true, witness: None }
    }

    fn fail(w: Witness) -> Self {
        Self { pass: false, witness: Some(w) }
    }
}

/// Parameters as measured; `None` where the design is not uniform.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasuredParams {
    pub t: u64,
    pub s: Option<u64>,
    pub k: Option<u64>,
    pub lambda: Option<u64>,
    /// `[count, number of transversal t-subsets in exactly count blocks]`, ascending.
    pub lambda_histogram: Vec<(u64, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub v: usize,
    pub b: usize,
    pub classes: usize,
    pub transversal_subsets: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub declared: DesignParams,
    pub axiom_a: AxiomCheck,
    pub axiom_b: AxiomCheck,
    pub axiom_c: AxiomCheck,
    pub axiom_d: AxiomCheck,
    pub measured: MeasuredParams,
    pub counts: Counts,
    /// `sum of block counts = b C(k,t)` when every block is transversal of size k.
    pub double_count: bool,
}

fn uniform(sizes: impl Iterator<Item = usize>) -> Option<u64> {
    let mut it = sizes;
    let first = it.next()?;
    it.all(|s| s == first).then_some(first as u64)
}

/// Counts, for every transversal t-subset, the blocks containing it.
struct SubsetCounter<'a> {
    classes: &'a [Vec<u32>],
    class_of: Vec<u32>,
    pos: Vec<u32>,
    t: usize,
    dense: Option<(BinomialTable, u64, Vec<u32>)>,
    sparse: HashMap<Vec<u32>, u32>,
}

impl<'a> SubsetCounter<'a> {
    fn new(d: &'a DivisibleDesign, t: usize, total: u128) -> Self {
        let classes = d.classes();
        let class_of = d.class_of();
        let mut pos = vec![0u32; d.v()];
        for c in classes {
            for (i, &x) in c.iter().enumerate() {
                pos[x as usize] = i as u32;
            }
        }
        // Dense layout: colex rank of the class t-set times s^t plus the within-class positions.
        let dense = uniform(classes.iter().map(Vec::len)).map(|s| {
            (BinomialTable::new(classes.len(), t), s, vec![0u32; total as usize])
        });
        Self { classes, class_of, pos, t, dense, sparse: HashMap::new() }
    }

    fn rank(&self, subset: &[u32]) -> u64 {
        let (table, s, _) = self.dense.as_ref().expect("dense layout");
        let mut pairs: Vec<(u32, u32)> =
            subset.iter().map(|&x| (self.class_of[x as usize], self.pos[x as usize])).collect();
        pairs.sort_unstable();
        let cls: Vec<usize> = pairs.iter().map(|p| p.0 as usize).collect();
        let within = pairs.iter().fold(0u64, |acc, p| acc * s + u64::from(p.1));
        table.rank(&cls) * s.pow(self.t as u32) + within
    }

    fn unrank(&self, rank: u64) -> Vec<u32> {
        let (table, s, _) = self.dense.as_ref().expect("dense layout");
        let block = s.pow(self.t as u32);
        let cls = table.unrank(rank / block, self.t);
        let mut within = rank % block;
        let mut out = vec![0u32; self.t];
        for i in (0..self.t).rev() {
            out[i] = self.classes[cls[i]][(within % s) as usize];
            within /= s;
        }
        out.sort_unstable();
        out
    }

    fn add(&mut self, subset: &[u32]) {
        if self.dense.is_none() {
            let mut key = subset.to_vec();
            key.sort_unstable();
            *self.sparse.entry(key).or_insert(0) += 1;
            return;
        }
        let r = self.rank(subset) as usize;
        if let Some((_, _, counts)) = &mut self.dense {
            counts[r] += 1;
        }
    }

    /// Calls `f(subset, count)` on every transversal t-subset, in a fixed order.
    fn for_each(&self, mut f: impl FnMut(&dyn Fn() -> Vec<u32>, u64) -> bool) {
        if let Some((_, _, counts)) = &self.dense {
            for (r, &c) in counts.iter().enumerate() {
                if !f(&|| self.unrank(r as u64), u64::from(c)) {
                    return;
                }
            }
        } else {
            let mut stop = false;
            for_each_transversal(self.classes, self.t, |y| {
                if stop {
                    return;
                }
                let mut key = y.to_vec();
                key.sort_unstable();
                let c = self.sparse.get(&key).copied().unwrap_or(0);
                stop = !f(&|| key.clone(), u64::from(c));
            });
        }
    }
}

fn count_subsets<'a>(
    d: &'a DivisibleDesign,
    t: usize,
    limits: &Limits,
) -> Result<(SubsetCounter<'a>, u128, u128), VerifyError> {
    if t == 0 {
        return Err(VerifyError::Input("t must be at least 1".into()));
    }
    let sizes: Vec<usize> = d.classes().iter().map(Vec::len).collect();
    let total = transversal_count(&sizes, t);
    GuardExceeded::check("transversal t-subsets", total, limits.max_subsets)?;
    let emitted: u128 = d.blocks().iter().map(|b| binomial(b.len() as u64, t as u64)).sum();
    GuardExceeded::check("t-subsets of blocks", emitted, limits.max_subsets)?;
    let mut counter = SubsetCounter::new(d, t, total);
    let mut added = 0u128;
    let mut buf = vec![0u32; t];
    for b in d.blocks() {
        let mut walker = Combinations::new(b.len(), t);
        while let Some(idx) = walker.next_subset() {
            for (slot, &i) in buf.iter_mut().zip(idx) {
                *slot = b[i];
            }
            if is_transversal(&buf, &counter.class_of) {
                counter.add(&buf);
                added += 1;
            }
        }
    }
    Ok((counter, total, added))
}

/// Frequencies of the number of blocks through each transversal t-subset.
pub fn lambda_histogram(d: &DivisibleDesign, t: u64, limits: &Limits) -> Result<BTreeMap<u64, u64>, VerifyError> {
    let (counter, _, _) = count_subsets(d, t as usize, limits)?;
    let mut hist = BTreeMap::new();
    counter.for_each(|_, c| {
        *hist.entry(c).or_insert(0) += 1;
        true
    });
    Ok(hist)
}

/// Checks axioms (A)-(D) for `t` against the declared parameters. When `t`
/// differs from the declared `t`, axiom (C) only asks for a constant count.
pub fn check_axioms(d: &DivisibleDesign, t: u64, limits: &Limits) -> Result<VerificationReport, VerifyError> {
    let declared = d.params();
    let class_of = d.class_of();

    let mut axiom_a = AxiomCheck::ok();
    let mut seen: HashMap<&[u32], usize> = HashMap::with_capacity(d.b());
    for (bi, b) in d.blocks().iter().enumerate() {
        if b.len() as u64 != declared.k {
            axiom_a = AxiomCheck::fail(Witness::WrongBlockSize { block: bi, size: b.len(), expected: declared.k });
            break;
        }
        let mut by_class: Vec<(u32, u32)> = b.iter().map(|&x| (class_of[x as usize], x)).collect();
        by_class.sort_unstable();
        if let Some(w) = by_class.windows(2).find(|w| w[0].0 == w[1].0) {
            axiom_a = AxiomCheck::fail(Witness::NonTransversalBlock { block: bi, points: [w[0].1, w[1].1], class: w[0].0 });
            break;
        }
        if let Some(&first) = seen.get(b.as_slice()) {
            axiom_a = AxiomCheck::fail(Witness::RepeatedBlock { first, second: bi });
            break;
        }
        seen.insert(b, bi);
    }

    let axiom_b = match d.classes().iter().position(|c| c.len() as u64 != declared.s) {
        Some(ci) => {
            AxiomCheck::fail(Witness::WrongClassSize { class: ci, size: d.classes()[ci].len(), expected: declared.s })
        }
        None => AxiomCheck::ok(),
    };

    let axiom_d = if t.saturating_mul(declared.s) <= d.v() as u64 {
        AxiomCheck::ok()
    } else {
        AxiomCheck::fail(Witness::TooFewClasses { t, v: d.v(), s: declared.s })
    };

    let (counter, total, added) = count_subsets(d, t as usize, limits)?;
    let fixed = (t == declared.t).then_some(declared.lambda);
    let mut hist: BTreeMap<u64, u64> = BTreeMap::new();
    let mut sum = 0u128;
    let mut expected = fixed;
    let mut witness = None;
    counter.for_each(|subset, c| {
        *hist.entry(c).or_insert(0) += 1;
        sum += u128::from(c);
        let want = *expected.get_or_insert(c);
        if c != want && witness.is_none() {
            witness = Some(Witness::WrongLambda { subset: subset(), count: c, expected: want });
        }
        true
    });
    let axiom_c = match witness {
        Some(w) => AxiomCheck::fail(w),
        None => AxiomCheck::ok(),
    };
    let lambda = (hist.len() == 1).then(|| *hist.keys().next().unwrap());
    let k = uniform(d.blocks().iter().map(Vec::len));
    let double_count = match (k, lambda) {
        (Some(k), Some(l)) if axiom_a.pass => {
            sum == added && (d.b() as u128) * binomial(k, t) == total * u128::from(l)
        }
        _ => sum == added,
    };
    let pass = axiom_a.pass && axiom_b.pass && axiom_c.pass && axiom_d.pass && double_count;
    Ok(VerificationReport {
        pass,
        declared,
        axiom_a,
        axiom_b,
        axiom_c,
        axiom_d,
        measured: MeasuredParams {
            t,
            s: uniform(d.classes().iter().map(Vec::len)),
            k,
            lambda,
            lambda_histogram: hist.into_iter().collect(),
        },
        counts: Counts { v: d.v(), b: d.b(), classes: d.classes().len(), transversal_subsets: total },
        double_count,
    })
}

/// Outcome of the hypersimplicity check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypersimpleReport {
    pub pass: bool,
    pub s_expected: u64,
    /// Block, subset of its class closure, and the number of blocks with the same closure through it.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<(usize, Vec<u32>, u64)>,
}

/// For every block `B` and transversal t-subset `Y` of the union `B*` of the
/// classes meeting `B`, exactly `s_expected` blocks `B'` with `B'* = B*` contain `Y`.
pub fn check_hypersimple(
    d: &DivisibleDesign,
    t: u64,
    s_expected: u64,
    limits: &Limits,
) -> Result<HypersimpleReport, VerifyError> {
    let t = t as usize;
    if t == 0 {
        return Err(VerifyError::Input("t must be at least 1".into()));
    }
    let class_of = d.class_of();
    let mut groups: BTreeMap<Vec<u32>, Vec<usize>> = BTreeMap::new();
    for (bi, b) in d.blocks().iter().enumerate() {
        let mut star: Vec<u32> = b.iter().map(|&x| class_of[x as usize]).collect();
        star.sort_unstable();
        star.dedup();
        groups.entry(star).or_default().push(bi);
    }
    let needed: u128 = groups
        .keys()
        .map(|star| transversal_count(&star.iter().map(|&c| d.classes()[c as usize].len()).collect::<Vec<_>>(), t))
        .sum();
    GuardExceeded::check("transversal t-subsets of class closures", needed, limits.max_subsets)?;
    let mut buf = vec![0u32; t];
    for (star, members) in &groups {
        let mut counts: HashMap<Vec<u32>, u64> = HashMap::new();
        for &bi in members {
            let b = &d.blocks()[bi];
            let mut walker = Combinations::new(b.len(), t);
            while let Some(idx) = walker.next_subset() {
                for (slot, &i) in buf.iter_mut().zip(idx) {
                    *slot = b[i];
                }
                if is_transversal(&buf, &class_of) {
                    *counts.entry(buf.clone()).or_insert(0) += 1;
                }
            }
        }
        let classes: Vec<Vec<u32>> = star.iter().map(|&c| d.classes()[c as usize].clone()).collect();
        let mut witness = None;
        for_each_transversal(&classes, t, |y| {
            if witness.is_some() {
                return;
            }
            let mut key = y.to_vec();
            key.sort_unstable();
            let c = counts.get(&key).copied().unwrap_or(0);
            if c != s_expected {
                witness = Some((members[0], key, c));
            }
        });
        if witness.is_some() {
            return Ok(HypersimpleReport { pass: false, s_expected, witness });
        }
    }
    Ok(HypersimpleReport { pass: true, s_expected, witness: None })
}

/// Isomorphism invariants. Equal for relabeled copies; differing fingerprints
/// prove non-isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fingerprint {
    pub v: u64,
    pub b: u64,
    pub s: Option<u64>,
    pub k: Option<u64>,
    pub t: u64,
    pub lambda: Option<u64>,
    pub class_sizes: Vec<(u64, u64)>,
    pub block_sizes: Vec<(u64, u64)>,
    pub lambda_histogram: Vec<(u64, u64)>,
    /// Sizes of `B ∩ B'` over unordered pairs of distinct block positions.
    pub intersection_sizes: Vec<(u64, u64)>,
    /// Number of blocks meeting each class.
    pub class_block_incidence: Vec<(u64, u64)>,
    /// Number of blocks through each point.
    pub replication: Vec<(u64, u64)>,
}

fn histogram(values: impl Iterator<Item = u64>) -> Vec<(u64, u64)> {
    let mut h = BTreeMap::new();
    for x in values {
        *h.entry(x).or_insert(0u64) += 1;
    }
    h.into_iter().collect()
}

/// Fingerprint with `t` taken from the declared parameters.
pub fn fingerprint(d: &DivisibleDesign, limits: &Limits) -> Result<Fingerprint, VerifyError> {
    let t = d.params().t;
    let v = d.v();
    let b = d.b();
    let mut incidence: Vec<Vec<u32>> = vec![Vec::new(); v];
    for (bi, blk) in d.blocks().iter().enumerate() {
        for &x in blk {
            incidence[x as usize].push(bi as u32);
        }
    }
    let steps: u128 = incidence.iter().map(|r| (r.len() as u128) * (r.len() as u128) / 2).sum::<u128>() + b as u128;
    GuardExceeded::check("block intersection steps", steps, limits.max_pair_operations)?;
    let mut inter: BTreeMap<u64, u64> = BTreeMap::new();
    let mut meet = vec![0u32; b];
    let mut touched = Vec::new();
    for (i, blk) in d.blocks().iter().enumerate() {
        for &x in blk {
            for &j in &incidence[x as usize] {
                let j = j as usize;
                if j > i {
                    if meet[j] == 0 {
                        touched.push(j);
                    }
                    meet[j] += 1;
                }
            }
        }
        let later = (b - 1 - i) as u64;
        let disjoint = later - touched.len() as u64;
        if disjoint > 0 {
            *inter.entry(0).or_insert(0) += disjoint;
        }
        for &j in &touched {
            *inter.entry(u64::from(meet[j])).or_insert(0) += 1;
            meet[j] = 0;
        }
        touched.clear();
    }
    let class_of = d.class_of();
    let mut class_meets = vec![0u64; d.classes().len()];
    for blk in d.blocks() {
        let mut cls: Vec<u32> = blk.iter().map(|&x| class_of[x as usize]).collect();
        cls.sort_unstable();
        cls.dedup();
        for c in cls {
            class_meets[c as usize] += 1;
        }
    }
    let lambda_hist = lambda_histogram(d, t, limits)?;
    Ok(Fingerprint {
        v: v as u64,
        b: b as u64,
        s: uniform(d.classes().iter().map(Vec::len)),
        k: uniform(d.blocks().iter().map(Vec::len)),
        t,
        lambda: (lambda_hist.len() == 1).then(|| *lambda_hist.keys().next().unwrap()),
        class_sizes: histogram(d.classes().iter().map(|c| c.len() as u64)),
        block_sizes: histogram(d.blocks().iter().map(|blk| blk.len() as u64)),
        lambda_histogram: lambda_hist.into_iter().collect(),
        intersection_sizes: inter.into_iter().collect(),
        class_block_incidence: histogram(class_meets.into_iter()),
        replication: histogram(incidence.iter().map(|r| r.len() as u64)),
    })
}
