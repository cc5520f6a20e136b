//! Minimum-distance computation: exhaustive enumeration and the
//! Brouwer–Zimmermann information-set algorithm.
//!
//! Both searches work on systematic generators `[I | A]`: a message `m`
//! yields a codeword whose weight is `wt(m) + wt(m A)`, so only the
//! redundancy part is accumulated. Messages are stored as scalar indices in
//! the order zero, `w^0`, `w^1`, ..., which makes index order agree with the
//! token order used for tie-breaking.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use super::matrix::{rref_with_order, Matrix};
use super::{CodeError, LinearCode};
use crate::gf::{Elem, Field};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMethod {
    Exhaustive,
    BrouwerZimmermann,
    AgBound,
}

/// Certified bounds on the minimum distance, with a codeword of weight
/// `d_up` when one was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceCertificate {
    pub d_low: usize,
    pub d_up: usize,
    pub method: DistanceMethod,
    pub witness: Option<Vec<Elem>>,
}

impl DistanceCertificate {
    pub fn is_exact(&self) -> bool {
        self.d_low == self.d_up && self.witness.is_some()
    }

    /// The exact distance, if certified.
    pub fn exact(&self) -> Option<usize> {
        self.is_exact().then_some(self.d_up)
    }
}

#[derive(Debug, Clone, Default)]
pub struct DistanceOptions {
    /// Largest `q^k` the exhaustive search accepts (default 2^32).
    pub max_messages: Option<u128>,
    /// Wall-clock budget; when it runs out a non-exact certificate is returned.
    pub budget: Option<Duration>,
    /// Stop as soon as the lower bound reaches this value.
    pub target: Option<usize>,
    /// A lower bound known from elsewhere (e.g. the designed distance).
    pub known_lower: Option<usize>,
    /// Deepest Brouwer–Zimmermann level to enumerate.
    pub max_level: Option<usize>,
}

pub const DEFAULT_MAX_MESSAGES: u128 = 1 << 32;

// ---------------------------------------------------------------------------
// Symbol arithmetic for the hot loops.

trait Adder: Sync {
    fn add(&self, a: u16, b: u16) -> u16;
}

struct XorAdd;

impl Adder for XorAdd {
    #[inline(always)]
    fn add(&self, a: u16, b: u16) -> u16 {
        a ^ b
    }
}

struct TableAdd<'a> {
    table: &'a [u16],
    q: usize,
}

impl Adder for TableAdd<'_> {
    #[inline(always)]
    fn add(&self, a: u16, b: u16) -> u16 {
        self.table[a as usize * self.q + b as usize]
    }
}

struct FieldAdd<'a>(&'a Field);

impl Adder for FieldAdd<'_> {
    #[inline(always)]
    fn add(&self, a: u16, b: u16) -> u16 {
        self.0.add(Elem(a as u32), Elem(b as u32)).raw() as u16
    }
}

/// Scalar multiples of the redundancy rows: `mults[(i q + s) r ..][..r]` is
/// `scalar(s) * A[i]`.
struct Multiples {
    q: usize,
    r: usize,
    data: Vec<u16>,
}

impl Multiples {
    fn new(f: &Field, scalars: &[Elem], a: &Matrix, r: usize) -> Multiples {
        let q = scalars.len();
        let mut data = Vec::with_capacity(a.len() * q * r);
        for row in a {
            for &s in scalars {
                data.extend(row.iter().map(|&x| f.mul(s, x).raw() as u16));
            }
        }
        Multiples { q, r, data }
    }

    #[inline(always)]
    fn row(&self, i: usize, s: u16) -> &[u16] {
        let start = (i * self.q + s as usize) * self.r;
        &self.data[start..start + self.r]
    }
}

struct Deadline {
    at: Option<Instant>,
    hit: AtomicBool,
}

impl Deadline {
    fn new(budget: Option<Duration>) -> Deadline {
        Deadline {
            at: budget.map(|b| Instant::now() + b),
            hit: AtomicBool::new(false),
        }
    }

    fn check(&self) -> bool {
        if self.hit.load(Ordering::Relaxed) {
            return true;
        }
        if let Some(at) = self.at {
            if Instant::now() >= at {
                self.hit.store(true, Ordering::Relaxed);
                return true;
            }
        }
        false
    }

    fn expired(&self) -> bool {
        self.hit.load(Ordering::Relaxed)
    }
}

#[derive(Clone, Debug)]
struct Best {
    weight: usize,
    msg: Vec<u16>,
}

fn better(a: Option<Best>, b: Option<Best>) -> Option<Best> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => {
            if (b.weight, &b.msg) < (a.weight, &a.msg) {
                Some(b)
            } else {
                Some(a)
            }
        }
    }
}

/// One enumeration task: the message template is fixed outside `free`, and
/// each free position ranges over its choice list.
struct Scan<'a> {
    mults: &'a Multiples,
    template: Vec<u16>,
    base_weight: usize,
    free: Vec<usize>,
    choices: Vec<&'a [u16]>,
    /// Only codewords strictly lighter than this are of interest.
    limit: usize,
}

impl Scan<'_> {
    fn run<A: Adder>(&self, adder: &A, deadline: &Deadline) -> Option<Best> {
        let r = self.mults.r;
        let t = self.free.len();
        let mut base = vec![0u16; r];
        for (i, &s) in self.template.iter().enumerate() {
            if s != 0 {
                for (b, &x) in base.iter_mut().zip(self.mults.row(i, s)) {
                    *b = adder.add(*b, x);
                }
            }
        }
        let mut partial = vec![0u16; (t + 1) * r];
        partial[..r].copy_from_slice(&base);
        let mut idx = vec![0usize; t];
        let recompute = |partial: &mut [u16], idx: &[usize], from: usize| {
            for l in from..t {
                let s = self.choices[l][idx[l]];
                let (lo, hi) = partial.split_at_mut((l + 1) * r);
                let src = &lo[l * r..];
                let dst = &mut hi[..r];
                if s == 0 {
                    dst.copy_from_slice(src);
                } else {
                    for ((d, &a), &b) in dst.iter_mut().zip(src).zip(self.mults.row(self.free[l], s)) {
                        *d = adder.add(a, b);
                    }
                }
            }
        };
        recompute(&mut partial, &idx, 0);
        let mut nonzero_free: usize = (0..t).filter(|&l| self.choices[l][0] != 0).count();

        let mut best: Option<Best> = None;
        let mut limit = self.limit;
        let mut counter: u32 = 0;
        loop {
            let last = &partial[t * r..];
            let w = self.base_weight + nonzero_free + last.iter().filter(|&&x| x != 0).count();
            if w <= limit && w > 0 {
                let mut msg = self.template.clone();
                for l in 0..t {
                    msg[self.free[l]] = self.choices[l][idx[l]];
                }
                let cand = Best { weight: w, msg };
                let improves = match &best {
                    None => w < self.limit,
                    Some(b) => (w, &cand.msg) < (b.weight, &b.msg),
                };
                if improves {
                    limit = w;
                    best = Some(cand);
                }
            }
            counter = counter.wrapping_add(1);
            if counter & 0xffff == 0 && deadline.check() {
                return best;
            }
            // advance the odometer, last position fastest
            let mut l = t;
            loop {
                if l == 0 {
                    return best;
                }
                l -= 1;
                let before = self.choices[l][idx[l]] != 0;
                idx[l] += 1;
                if idx[l] < self.choices[l].len() {
                    let after = self.choices[l][idx[l]] != 0;
                    nonzero_free = nonzero_free + after as usize - before as usize;
                    recompute(&mut partial, &idx, l);
                    break;
                }
                idx[l] = 0;
                let after = self.choices[l][0] != 0;
                nonzero_free = nonzero_free + after as usize - before as usize;
            }
        }
    }
}

fn run_scans(f: &Field, scans: &[Scan<'_>], deadline: &Deadline) -> Option<Best> {
    let run = |s: &Scan<'_>| -> Option<Best> {
        if f.characteristic() == 2 {
            s.run(&XorAdd, deadline)
        } else if let Some(table) = f.add_table() {
            s.run(
                &TableAdd {
                    table,
                    q: f.order() as usize,
                },
                deadline,
            )
        } else {
            s.run(&FieldAdd(f), deadline)
        }
    };
    scans.par_iter().map(run).reduce(|| None, better)
}

/// A generator in systematic form with respect to `pivots`.
struct InfoSet {
    pivots: Vec<usize>,
    redundancy: Vec<usize>,
    rows: Matrix,
    /// Number of pivots not shared with earlier information sets.
    fresh: usize,
}

impl InfoSet {
    fn from_order(code: &LinearCode, order: &[usize], used: &[bool]) -> InfoSet {
        let f = code.field();
        let mut rows = code.generator().clone();
        let pivots = rref_with_order(f, &mut rows, order);
        let fresh = pivots.iter().filter(|&&c| !used[c]).count();
        let redundancy = (0..code.n()).filter(|c| !pivots.contains(c)).collect();
        InfoSet {
            pivots,
            redundancy,
            rows,
            fresh,
        }
    }

    fn redundancy_matrix(&self) -> Matrix {
        self.rows
            .iter()
            .map(|row| self.redundancy.iter().map(|&c| row[c]).collect())
            .collect()
    }

    fn codeword(&self, f: &Field, scalars: &[Elem], msg: &[u16]) -> Vec<Elem> {
        let mut out = vec![Elem::ZERO; self.rows[0].len()];
        for (row, &s) in self.rows.iter().zip(msg) {
            if s == 0 {
                continue;
            }
            let c = scalars[s as usize];
            for (o, &x) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(c, x));
            }
        }
        out
    }
}

fn scalar_order(f: &Field) -> Vec<Elem> {
    f.elements_zero_first()
}

fn check_symbol_range(code: &LinearCode) -> Result<(), CodeError> {
    if code.k() == 0 {
        return Err(CodeError::EmptyCode);
    }
    if code.field().order() > u16::MAX as u32 + 1 {
        return Err(CodeError::FieldTooLarge(code.field().order()));
    }
    Ok(())
}

/// Exact minimum distance by enumerating every message up to scalars.
///
/// The witness is the codeword of the lexicographically least message (in
/// token order) among those of minimum weight.
pub fn min_distance_exhaustive(code: &LinearCode, opts: &DistanceOptions) -> Result<DistanceCertificate, CodeError> {
    check_symbol_range(code)?;
    let f = code.field();
    let k = code.k();
    let q = f.order() as u128;
    let max = opts.max_messages.unwrap_or(DEFAULT_MAX_MESSAGES);
    let total = (0..k).try_fold(1u128, |acc, _| acc.checked_mul(q));
    match total {
        Some(t) if t <= max => {}
        _ => return Err(CodeError::BudgetExceeded { q: f.order(), k, max }),
    }

    let order: Vec<usize> = (0..code.n()).collect();
    let info = InfoSet::from_order(code, &order, &vec![false; code.n()]);
    let scalars = scalar_order(f);
    let a = info.redundancy_matrix();
    let mults = Multiples::new(f, &scalars, &a, info.redundancy.len());
    let all: Vec<u16> = (0..scalars.len() as u16).collect();
    let deadline = Deadline::new(opts.budget);

    let mut scans = Vec::new();
    for lead in (0..k).rev() {
        let mut template = vec![0u16; k];
        template[lead] = 1;
        let rest: Vec<usize> = (lead + 1..k).collect();
        if let Some((&first, tail)) = rest.split_first() {
            for &s in &all {
                let mut tpl = template.clone();
                tpl[first] = s;
                scans.push(Scan {
                    mults: &mults,
                    base_weight: 1 + (s != 0) as usize,
                    template: tpl,
                    free: tail.to_vec(),
                    choices: vec![&all[..]; tail.len()],
                    limit: usize::MAX,
                });
            }
        } else {
            scans.push(Scan {
                mults: &mults,
                base_weight: 1,
                template,
                free: Vec::new(),
                choices: Vec::new(),
                limit: usize::MAX,
            });
        }
    }
    let best = run_scans(f, &scans, &deadline).expect("a nonzero code has a nonzero codeword");
    let witness = info.codeword(f, &scalars, &best.msg);
    let d_low = if deadline.expired() {
        opts.known_lower.unwrap_or(1).min(best.weight)
    } else {
        best.weight
    };
    Ok(DistanceCertificate {
        d_low,
        d_up: best.weight,
        method: DistanceMethod::Exhaustive,
        witness: Some(witness),
    })
}

/// Brouwer–Zimmermann minimum distance.
///
/// Information sets are chosen greedily left to right among the coordinates
/// not yet covered; a set whose rank on fresh coordinates is `r_j` certifies
/// `max(0, w + 1 - (k - r_j))` nonzeros once all its messages of weight at
/// most `w` have been enumerated.
pub fn min_distance_bz(code: &LinearCode, opts: &DistanceOptions) -> Result<DistanceCertificate, CodeError> {
    check_symbol_range(code)?;
    let f = code.field();
    let n = code.n();
    let k = code.k();
    let scalars = scalar_order(f);
    let nonzero: Vec<u16> = (1..scalars.len() as u16).collect();
    let deadline = Deadline::new(opts.budget);

    let mut used = vec![false; n];
    let mut sets: Vec<InfoSet> = Vec::new();
    loop {
        let order: Vec<usize> = (0..n)
            .filter(|&c| !used[c])
            .chain((0..n).filter(|&c| used[c]))
            .collect();
        let set = InfoSet::from_order(code, &order, &used);
        if set.fresh == 0 {
            break;
        }
        for &c in &set.pivots {
            used[c] = true;
        }
        sets.push(set);
        if used.iter().all(|&u| u) {
            break;
        }
    }
    let mults: Vec<Multiples> = sets
        .iter()
        .map(|s| Multiples::new(f, &scalars, &s.redundancy_matrix(), s.redundancy.len()))
        .collect();

    let known = opts.known_lower.unwrap_or(1).max(1);
    let mut level = vec![0usize; sets.len()];
    let lower = |level: &[usize]| -> usize {
        let bz: usize = sets
            .iter()
            .zip(level)
            .map(|(s, &e)| (e + 1).saturating_sub(k - s.fresh))
            .sum();
        bz.max(known)
    };
    let mut best_weight = n - k + 1 + 1;
    let mut witness: Option<Vec<Elem>> = None;
    let max_level = opts.max_level.unwrap_or(k).min(k);

    let done = |lb: usize, best_weight: usize, level: &[usize]| -> bool {
        lb >= best_weight || opts.target.is_some_and(|t| lb >= t) || level.contains(&k)
    };

    'outer: for w in 1..=max_level {
        for j in 0..sets.len() {
            if w < k - sets[j].fresh {
                continue;
            }
            while level[j] < w {
                if done(lower(&level), best_weight, &level) {
                    break 'outer;
                }
                let lvl = level[j] + 1;
                let found = run_combinations(f, &mults[j], k, lvl, &nonzero, best_weight, &deadline);
                if deadline.expired() {
                    if let Some(b) = found {
                        if b.weight < best_weight {
                            best_weight = b.weight;
                            witness = Some(sets[j].codeword(f, &scalars, &b.msg));
                        }
                    }
                    break 'outer;
                }
                if let Some(b) = found {
                    if b.weight < best_weight {
                        best_weight = b.weight;
                        witness = Some(sets[j].codeword(f, &scalars, &b.msg));
                    }
                }
                level[j] = lvl;
            }
        }
        if done(lower(&level), best_weight, &level) {
            break;
        }
    }

    let full = level.contains(&k);
    let mut d_low = lower(&level);
    if full && witness.is_some() {
        d_low = best_weight;
    }
    let d_up = best_weight.min(n - k + 1);
    Ok(DistanceCertificate {
        d_low: d_low.min(d_up),
        d_up,
        method: DistanceMethod::BrouwerZimmermann,
        witness: if witness.is_some() && best_weight == d_up {
            witness
        } else {
            None
        },
    })
}

/// Scans covering every message of weight exactly `w` whose first nonzero
/// coefficient is one, split by support.
/// Runs every message of weight exactly `w` whose first nonzero entry is 1,
/// building the scans lazily in batches so the deadline is honoured and the
/// weight limit tightens as results come in.
fn run_combinations(
    f: &Field,
    mults: &Multiples,
    k: usize,
    w: usize,
    nonzero: &[u16],
    mut limit: usize,
    deadline: &Deadline,
) -> Option<Best> {
    const BATCH: usize = 4096;
    let mut comb: Vec<usize> = (0..w).collect();
    let mut best: Option<Best> = None;
    let mut exhausted = false;
    while !exhausted {
        let mut scans = Vec::with_capacity(BATCH);
        while scans.len() < BATCH && !exhausted {
            let mut template = vec![0u16; k];
            template[comb[0]] = 1;
            scans.push(Scan {
                mults,
                template,
                base_weight: 1,
                free: comb[1..].to_vec(),
                choices: vec![nonzero; w - 1],
                limit,
            });
            exhausted = !next_combination(&mut comb, k);
        }
        best = better(best, run_scans(f, &scans, deadline));
        if let Some(b) = &best {
            limit = limit.min(b.weight);
        }
        if deadline.check() {
            break;
        }
    }
    best
}

/// Advances `comb` to the next `w`-subset of `0..k` in lexicographic order.
fn next_combination(comb: &mut [usize], k: usize) -> bool {
    let w = comb.len();
    let mut i = w;
    while i > 0 {
        i -= 1;
        if comb[i] < k - w + i {
            comb[i] += 1;
            for j in i + 1..w {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
