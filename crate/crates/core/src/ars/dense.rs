//! Bitmask systems on at most eight nodes, used for exhaustive and random
//! sweeps. Row `i` of a relation is the set of successors of node `i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{ArsError, FiniteArs, Node, Rel};
use crate::exec::Exec;

pub const MAX_NODES: usize = 8;

type Rows = [u8; MAX_NODES];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DenseArs {
    n: usize,
    r0: Rows,
    r1: Rows,
}

/// Condition values for one `(a, a')` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DenseReport {
    pub a: Node,
    pub a_prime: Node,
    pub conditions: [bool; 4],
    pub bound: Option<usize>,
    pub conclusion: bool,
}

impl DenseReport {
    /// Bit `i` set iff condition `i + 1` holds.
    pub fn mask(&self) -> usize {
        self.conditions
            .iter()
            .enumerate()
            .map(|(i, &c)| usize::from(c) << i)
            .sum()
    }
}

fn bits(mut m: u8) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(i)
    })
}

/// Reflexive-transitive closure (Warshall).
fn star(rel: &Rows, n: usize) -> Rows {
    let mut s = [0u8; MAX_NODES];
    for i in 0..n {
        s[i] = rel[i] | (1 << i);
    }
    for k in 0..n {
        for i in 0..n {
            if s[i] & (1 << k) != 0 {
                s[i] |= s[k];
            }
        }
    }
    s
}

/// One or more steps of `rel`, given its reflexive-transitive closure.
fn plus(rel: &Rows, star: &Rows, n: usize) -> Rows {
    let mut p = [0u8; MAX_NODES];
    for i in 0..n {
        for j in bits(rel[i]) {
            p[i] |= star[j];
        }
    }
    p
}

impl DenseArs {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_NODES, "dense systems have at most {MAX_NODES} nodes");
        DenseArs {
            n,
            r0: [0; MAX_NODES],
            r1: [0; MAX_NODES],
        }
    }

    /// Decodes a mask of `2 n²` bits: bit `r n² + u n + v` is the edge
    /// `u →ᵣ v`.
    pub fn from_mask(n: usize, mask: u128) -> Self {
        let mut s = Self::new(n);
        let nn = n * n;
        let mut m = mask;
        while m != 0 {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            let (rel, rest) = (b / nn, b % nn);
            let (u, v) = (rest / n, rest % n);
            if rel == 0 {
                s.r0[u] |= 1 << v;
            } else {
                s.r1[u] |= 1 << v;
            }
        }
        s
    }

    pub fn add(&mut self, rel: Rel, u: usize, v: usize) {
        assert!(u < self.n && v < self.n);
        match rel {
            Rel::Zero => self.r0[u] |= 1 << v,
            Rel::One => self.r1[u] |= 1 << v,
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn to_finite(&self) -> FiniteArs {
        let mut s = FiniteArs::new(self.n as u32);
        for u in 0..self.n {
            for v in bits(self.r0[u]) {
                s.add(Rel::Zero, u as Node, v as Node).expect("in range");
            }
            for v in bits(self.r1[u]) {
                s.add(Rel::One, u as Node, v as Node).expect("in range");
            }
        }
        s
    }

    pub fn from_finite(s: &FiniteArs) -> Option<Self> {
        let n = s.size() as usize;
        if n > MAX_NODES {
            return None;
        }
        let mut d = Self::new(n);
        for &(u, v) in s.r0() {
            d.add(Rel::Zero, u as usize, v as usize);
        }
        for &(u, v) in s.r1() {
            d.add(Rel::One, u as usize, v as usize);
        }
        Some(d)
    }

    /// Reports for every valid pair: `a` has a successor and `a'` is a
    /// normal form reachable from `a`.
    pub fn check_all(&self) -> Vec<DenseReport> {
        let mut out = Vec::new();
        self.for_each_report(|r| out.push(r));
        out
    }

    pub fn check(&self, a: Node, a_prime: Node) -> Option<DenseReport> {
        let mut found = None;
        self.for_each_report(|r| {
            if r.a == a && r.a_prime == a_prime {
                found = Some(r);
            }
        });
        found
    }

    fn for_each_report(&self, mut visit: impl FnMut(DenseReport)) {
        let n = self.n;
        let mut r3 = [0u8; MAX_NODES];
        for i in 0..n {
            r3[i] = self.r0[i] | self.r1[i];
        }
        let star0 = star(&self.r0, n);
        let star3 = star(&r3, n);
        let plus0 = plus(&self.r0, &star0, n);
        let plus3 = plus(&r3, &star3, n);
        let mut r2 = [0u8; MAX_NODES];
        for i in 0..n {
            for j in bits(star0[i]) {
                r2[i] |= self.r1[j];
            }
        }
        let star2 = star(&r2, n);
        let plus2 = plus(&r2, &star2, n);

        let mut cyc0 = 0u8;
        let mut cyc2 = 0u8;
        let mut cyc3 = 0u8;
        let mut bad3 = 0u8;
        let mut bad4 = 0u8;
        let mut normal = 0u8;
        for c in 0..n {
            let bit = 1u8 << c;
            if plus0[c] & bit != 0 {
                cyc0 |= bit;
            }
            if plus2[c] & bit != 0 {
                cyc2 |= bit;
            }
            if plus3[c] & bit != 0 {
                cyc3 |= bit;
            }
            if r3[c] == 0 {
                normal |= bit;
            }
            for b1 in bits(r3[c]) {
                if bits(self.r1[c]).any(|b2| star3[b1] & star3[b2] == 0) {
                    bad3 |= bit;
                }
                if bits(self.r0[c]).any(|b2| star3[b1] & (r3[b2] | (1 << b2)) == 0) {
                    bad4 |= bit;
                }
            }
        }

        for a in 0..n {
            if r3[a] == 0 {
                continue;
            }
            let reach = star3[a];
            let cond1 = reach & cyc0 == 0;
            let cond3 = reach & bad3 == 0;
            let cond4 = reach & bad4 == 0;
            let conclusion = reach & cyc3 == 0;
            for ap in bits(reach & normal) {
                let mut ends = 0u8;
                for b in 0..n {
                    if star0[b] & (1 << ap) != 0 {
                        ends |= 1 << b;
                    }
                }
                let mut relevant = 0u8;
                for b in bits(star2[a]) {
                    if star2[b] & ends != 0 {
                        relevant |= 1 << b;
                    }
                }
                let cond2 = relevant & cyc2 == 0;
                let bound = cond2.then(|| longest(&r2, relevant, ends, a, n));
                visit(DenseReport {
                    a: a as Node,
                    a_prime: ap as Node,
                    conditions: [cond1, cond2, cond3, cond4],
                    bound,
                    conclusion,
                });
            }
        }
    }
}

/// Longest →₂-path from `a` into `ends` within the acyclic `relevant` set,
/// by `n` rounds of relaxation.
fn longest(r2: &Rows, relevant: u8, ends: u8, a: usize, n: usize) -> usize {
    if relevant & (1 << a) == 0 {
        return 0;
    }
    let mut best = [-1i32; MAX_NODES];
    for b in bits(ends & relevant) {
        best[b] = 0;
    }
    for _ in 0..n {
        for u in bits(relevant) {
            for v in bits(r2[u] & relevant) {
                if best[v] >= 0 {
                    best[u] = best[u].max(best[v] + 1);
                }
            }
        }
    }
    best[a].max(0) as usize
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SweepSummary {
    pub systems: u64,
    /// Valid `(a, a')` pairs checked.
    pub instances: u64,
    /// `[holding-condition mask][conclusion]` instance counts.
    pub by_mask: [[u64; 2]; 16],
    pub violations: u64,
    /// The first violation in enumeration order, as `(system, a, a')`.
    pub first_violation: Option<(String, Node, Node)>,
}

impl SweepSummary {
    fn record(&mut self, sys: &DenseArs, reports: &[DenseReport]) {
        self.systems += 1;
        for r in reports {
            self.instances += 1;
            self.by_mask[r.mask()][usize::from(r.conclusion)] += 1;
            if r.mask() == 15 && !r.conclusion {
                self.violations += 1;
                if self.first_violation.is_none() {
                    self.first_violation = Some((sys.to_finite().to_text(), r.a, r.a_prime));
                }
            }
        }
    }

    fn merge(mut self, other: SweepSummary) -> SweepSummary {
        self.systems += other.systems;
        self.instances += other.instances;
        for (m, o) in self.by_mask.iter_mut().zip(other.by_mask) {
            m[0] += o[0];
            m[1] += o[1];
        }
        self.violations += other.violations;
        if self.first_violation.is_none() {
            self.first_violation = other.first_violation;
        }
        self
    }

    pub fn all_conditions_hold(&self) -> u64 {
        self.by_mask[15][0] + self.by_mask[15][1]
    }
}

fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * u64::from(n - i) / u64::from(i + 1))
}

/// Calls `visit` on every mask below `1 << width` with exactly `k` bits whose
/// highest set bit is `top`, in increasing order (Gosper's hack).
fn masks_with_top(width: u32, k: u32, top: u32, mut visit: impl FnMut(u128)) {
    debug_assert!(top < width && k >= 1);
    let high = 1u128 << top;
    let rest = k - 1;
    if rest == 0 {
        visit(high);
        return;
    }
    if rest > top {
        return;
    }
    let mut m: u128 = (1u128 << rest) - 1;
    let limit = 1u128 << top;
    while m < limit {
        visit(high | m);
        let c = m & m.wrapping_neg();
        let r = m + c;
        m = (((r ^ m) >> 2) / c) | r;
    }
}

/// Checks every system on `1..=max_nodes` nodes with at most `max_edges`
/// edges in total, counting →₀ and →₁ edges separately.
pub fn exhaustive_sweep(max_nodes: usize, max_edges: usize, exec: Exec) -> SweepSummary {
    assert!(max_nodes <= 5, "2 n² must fit in a u128 mask with room to spare");
    let mut tasks: Vec<(usize, u32, u32)> = Vec::new();
    for n in 1..=max_nodes {
        let width = (2 * n * n) as u32;
        for k in 1..=max_edges.min(width as usize) as u32 {
            for top in (k - 1)..width {
                tasks.push((n, k, top));
            }
        }
    }
    let per_task = exec.map(&tasks, |&(n, k, top)| {
        let mut s = SweepSummary::default();
        let width = (2 * n * n) as u32;
        masks_with_top(width, k, top, |m| {
            let sys = DenseArs::from_mask(n, m);
            s.record(&sys, &sys.check_all());
        });
        s
    });
    // The edgeless systems: no node is in the domain, so no instances.
    let empty = SweepSummary {
        systems: max_nodes as u64,
        ..Default::default()
    };
    per_task.into_iter().fold(empty, SweepSummary::merge)
}

/// Number of systems `exhaustive_sweep` visits.
pub fn exhaustive_system_count(max_nodes: usize, max_edges: usize) -> u64 {
    (1..=max_nodes)
        .map(|n| {
            let width = (2 * n * n) as u32;
            (0..=max_edges as u32).map(|k| binomial(width, k)).sum::<u64>()
        })
        .sum()
}

/// Random systems with `min_nodes..=max_nodes` nodes. Each system has its
/// own ChaCha8 stream, so the result does not depend on scheduling.
pub fn fuzz_sweep(seed: u64, count: u64, min_nodes: usize, max_nodes: usize, exec: Exec) -> SweepSummary {
    assert!(min_nodes >= 1 && max_nodes <= MAX_NODES && min_nodes <= max_nodes);
    const CHUNK: u64 = 4096;
    let chunks = count.div_ceil(CHUNK);
    exec.map_reduce(
        0..chunks,
        SweepSummary::default,
        |c| {
            let mut s = SweepSummary::default();
            for i in c * CHUNK..((c + 1) * CHUNK).min(count) {
                let sys = random_system(seed, i, min_nodes, max_nodes);
                s.record(&sys, &sys.check_all());
            }
            s
        },
        SweepSummary::merge,
    )
}

fn random_system(seed: u64, index: u64, min_nodes: usize, max_nodes: usize) -> DenseArs {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let n = rng.gen_range(min_nodes..=max_nodes);
    // Sparse graphs are the interesting ones: aim for about one edge per node
    // per relation.
    let p = rng.gen_range(0.3..1.5) / n as f64;
    let mut s = DenseArs::new(n);
    for u in 0..n {
        for v in 0..n {
            if rng.gen_bool(p.min(1.0)) {
                s.r0[u] |= 1 << v;
            }
            if rng.gen_bool(p.min(1.0)) {
                s.r1[u] |= 1 << v;
            }
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NecessityWitness {
    /// Which of conditions 1-4 hold.
    pub conditions: [bool; 4],
    pub system: String,
    pub a: Node,
    pub a_prime: Node,
}

/// For each proper subset of the four conditions, looks for a system where
/// exactly those conditions hold and ←₄ is not well-founded. Systems on up
/// to three nodes are enumerated completely; larger ones, up to
/// `max_nodes`, are sampled `samples` times from `seed`. Entry `m` of the
/// result answers the subset with bit mask `m`; entry 15 is always `None`.
///
/// Fails if some system satisfies all four conditions with a non-well-founded
/// ←₄, since that would refute the theorem.
pub fn search_hypothesis_necessity(
    max_nodes: usize,
    seed: u64,
    samples: u64,
) -> Result<Vec<Option<NecessityWitness>>, ArsError> {
    assert!(max_nodes <= 6, "search budget");
    let mut found: Vec<Option<NecessityWitness>> = vec![None; 16];
    let mut consider = |sys: &DenseArs| -> Result<(), ArsError> {
        for r in sys.check_all() {
            if r.conclusion {
                continue;
            }
            let m = r.mask();
            if m == 15 {
                return Err(ArsError::TheoremFalsified {
                    system: sys.to_finite().to_text(),
                    a: r.a,
                    a_prime: r.a_prime,
                });
            }
            if found[m].is_none() {
                found[m] = Some(NecessityWitness {
                    conditions: r.conditions,
                    system: sys.to_finite().to_text(),
                    a: r.a,
                    a_prime: r.a_prime,
                });
            }
        }
        Ok(())
    };
    for n in 1..=max_nodes.min(3) {
        let width = 2 * n * n;
        for m in 0..(1u128 << width) {
            consider(&DenseArs::from_mask(n, m))?;
        }
    }
    if max_nodes > 3 {
        for i in 0..samples {
            consider(&random_system(seed, i, 4, max_nodes))?;
        }
    }
    Ok(found)
}
