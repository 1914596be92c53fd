//! Depth-first search over candidate signatures.
//!
//! Subsets of `{1..m}` (`m = n - 1`) are decided in increasing numeric order,
//! which is a linear extension of the dominance order. A subset is forced out
//! of the family when a lower neighbour is out or when it would collide with
//! an earlier member (see [`Poset::clashes`]); otherwise both choices are
//! explored. Every complete candidate goes to the exact LP.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::db::{append_records, frontier_path, read_records, write_records, FrontierState, FRONTIER_SCHEMA};
use super::{solve_margin, ChamberRecord, ChamberSignature};
use crate::error::{Error, Result};
use crate::lengths::LengthVector;
use crate::subset::Subset;

/// Largest `n` enumerated without [`EnumerationOptions::allow_large`].
pub const DEFAULT_MAX_N: usize = 9;

#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    /// Number of branch decisions made before the tree is cut into tasks.
    pub split_depth: usize,
    /// Worker threads; `0` uses the global pool.
    pub threads: usize,
    pub time_limit: Option<Duration>,
    /// Also run the LP on partial candidates at every branch point.
    pub partial_lp: bool,
    pub allow_large: bool,
    pub db: Option<PathBuf>,
    pub resume: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            split_depth: 8,
            threads: 0,
            time_limit: None,
            partial_lp: false,
            allow_large: false,
            db: None,
            resume: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct EnumerationReport {
    pub n: usize,
    pub records: Vec<ChamberRecord>,
    pub tasks: usize,
    /// Tasks skipped because a previous run had finished them.
    pub resumed_tasks: usize,
    pub candidates: u64,
    pub lp_calls: u64,
}

/// All chambers for `n` links, sorted by signature.
pub fn enumerate_chambers(n: usize) -> Result<Vec<ChamberRecord>> {
    enumerate_with(n, &EnumerationOptions::default()).map(|r| r.records)
}

pub(crate) struct Poset {
    n: usize,
    size: usize,
    lower: Vec<Vec<u32>>,
    /// `C` and `C \ {j}` for `C` the complement of the mask.
    clash: Vec<Vec<u32>>,
}

impl Poset {
    pub(crate) fn new(n: usize) -> Self {
        let m = n - 1;
        let size = 1usize << m;
        let lower = (0..size).map(|k| Subset(k as u32).lower_neighbors().map(|s| s.0).collect()).collect();
        let clash = (0..size)
            .map(|k| {
                let c = Subset(k as u32).complement(m);
                std::iter::once(c.0).chain(c.iter().map(|j| c.without(j).0)).collect()
            })
            .collect();
        Poset { n, size, lower, clash }
    }

    /// Two members `T`, `U` cannot be disjoint with `|{1..m} \ (T ∪ U)| <= 1`:
    /// adding `l_n` twice would exceed the total length.
    fn clashes(&self, k: usize, state: &Bits) -> bool {
        self.clash[k].iter().any(|&c| (c as usize) < k && state.get(c as usize))
    }

    fn forced_out(&self, k: usize, state: &Bits) -> bool {
        self.lower[k].iter().any(|&r| !state.get(r as usize)) || self.clashes(k, state)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    fn new(size: usize) -> Self {
        Bits(vec![0; size.div_ceil(64)])
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn set(&mut self, i: usize, v: bool) {
        if v {
            self.0[i / 64] |= 1 << (i % 64);
        } else {
            self.0[i / 64] &= !(1 << (i % 64));
        }
    }
}

#[derive(Clone, Debug)]
struct Task {
    next: usize,
    state: Bits,
}

struct Aborted;

struct Walker<'a> {
    poset: &'a Poset,
    partial_lp: bool,
    deadline: Option<Instant>,
    abort: &'a AtomicBool,
    candidates: &'a AtomicU64,
    lp_calls: &'a AtomicU64,
    out: Vec<ChamberRecord>,
}

impl Walker<'_> {
    fn extremes(&self, upto: usize, state: &Bits) -> (Vec<Subset>, Vec<Subset>) {
        let m = self.poset.n - 1;
        let mut shorts = Vec::new();
        let mut longs = Vec::new();
        for k in 0..upto {
            let t = Subset(k as u32);
            if state.get(k) {
                if t.upper_neighbors(m).all(|u| (u.0 as usize) >= upto || !state.get(u.0 as usize)) {
                    shorts.push(t);
                }
            } else if self.poset.lower[k].iter().all(|&r| state.get(r as usize)) {
                longs.push(t);
            }
        }
        (shorts, longs)
    }

    fn feasible_prefix(&self, upto: usize, state: &Bits) -> bool {
        let (shorts, longs) = self.extremes(upto, state);
        self.lp_calls.fetch_add(1, Ordering::Relaxed);
        solve_margin(self.poset.n, &shorts, &longs).1.is_some()
    }

    fn check_time(&self) -> std::result::Result<(), Aborted> {
        if self.abort.load(Ordering::Relaxed) {
            return Err(Aborted);
        }
        if self.deadline.is_some_and(|d| Instant::now() >= d) {
            self.abort.store(true, Ordering::Relaxed);
            return Err(Aborted);
        }
        Ok(())
    }

    fn leaf(&mut self, state: &Bits) -> std::result::Result<(), Aborted> {
        self.check_time()?;
        self.candidates.fetch_add(1, Ordering::Relaxed);
        self.lp_calls.fetch_add(1, Ordering::Relaxed);
        let n = self.poset.n;
        let (shorts, longs) = self.extremes(self.poset.size, state);
        if let (_, Some(lengths)) = solve_margin(n, &shorts, &longs) {
            let witness = super::primitive_witness(&lengths);
            let record = ChamberRecord::from_witness(witness).expect("LP witness has positive margin");
            let members = (0..self.poset.size).filter(|&k| state.get(k)).map(|k| Subset(k as u32)).collect();
            assert_eq!(record.signature, ChamberSignature::new(n, members), "witness leaves its chamber");
            self.out.push(record);
        }
        Ok(())
    }

    fn walk(&mut self, k: usize, state: &mut Bits) -> std::result::Result<(), Aborted> {
        if k == self.poset.size {
            return self.leaf(state);
        }
        if self.poset.forced_out(k, state) {
            return self.walk(k + 1, state);
        }
        state.set(k, true);
        if !self.partial_lp || self.feasible_prefix(k + 1, state) {
            self.walk(k + 1, state)?;
        }
        state.set(k, false);
        if !self.partial_lp || self.feasible_prefix(k + 1, state) {
            self.walk(k + 1, state)?;
        }
        Ok(())
    }
}

fn split(poset: &Poset, depth: usize) -> Vec<Task> {
    fn go(poset: &Poset, k: usize, left: usize, state: &mut Bits, out: &mut Vec<Task>) {
        let mut k = k;
        while k < poset.size && poset.forced_out(k, state) {
            k += 1;
        }
        if k == poset.size || left == 0 {
            out.push(Task { next: k, state: state.clone() });
            return;
        }
        state.set(k, true);
        go(poset, k + 1, left - 1, state, out);
        state.set(k, false);
        go(poset, k + 1, left - 1, state, out);
    }
    let mut out = Vec::new();
    go(poset, 0, depth, &mut Bits::new(poset.size), &mut out);
    out
}

struct Sink {
    db: Option<PathBuf>,
    frontier: Option<FrontierState>,
}

impl Sink {
    fn complete(&mut self, id: usize, records: &[ChamberRecord]) -> Result<()> {
        if let (Some(db), Some(frontier)) = (&self.db, &mut self.frontier) {
            append_records(db, records)?;
            frontier.done.push(id);
            frontier.done.sort_unstable();
            frontier.store(&frontier_path(db))?;
        }
        Ok(())
    }
}

pub fn enumerate_with(n: usize, opts: &EnumerationOptions) -> Result<EnumerationReport> {
    let cap = if opts.allow_large { crate::MAX_N } else { DEFAULT_MAX_N };
    if !(3..=cap).contains(&n) {
        return Err(Error::Precondition(format!("enumeration supports 3 <= n <= {cap}, got {n}")));
    }
    let mut split_depth = opts.split_depth;
    let mut partial_lp = opts.partial_lp;
    let mut done = BTreeSet::new();
    let mut previous = Vec::new();
    let mut frontier = None;
    if let Some(db) = &opts.db {
        let saved = if opts.resume { FrontierState::load(&frontier_path(db))? } else { None };
        match saved {
            Some(state) => {
                if state.n != n {
                    return Err(Error::Malformed(format!("frontier is for n = {}, not {n}", state.n)));
                }
                split_depth = state.split_depth;
                partial_lp = state.partial_lp;
                done.extend(state.done.iter().copied());
                if db.exists() {
                    previous = read_records(db)?;
                }
                frontier = Some(state);
            }
            None if opts.resume && db.exists() => {
                let mut records = read_records(db)?;
                for r in &records {
                    r.verify()?;
                }
                records.sort_by(|a, b| a.signature.cmp(&b.signature));
                return Ok(EnumerationReport { n, records, tasks: 0, resumed_tasks: 0, candidates: 0, lp_calls: 0 });
            }
            None => {
                write_records(db, &[])?;
            }
        }
    }

    let poset = Poset::new(n);
    let tasks = split(&poset, split_depth);
    let frontier = frontier.unwrap_or(FrontierState {
        schema: FRONTIER_SCHEMA.into(),
        n,
        split_depth,
        partial_lp,
        tasks: tasks.len(),
        done: Vec::new(),
    });
    if frontier.tasks != tasks.len() {
        return Err(Error::Malformed("frontier does not match the task split".into()));
    }
    if let Some(db) = &opts.db {
        frontier.store(&frontier_path(db))?;
    }

    let deadline = opts.time_limit.map(|t| Instant::now() + t);
    let abort = AtomicBool::new(false);
    let candidates = AtomicU64::new(0);
    let lp_calls = AtomicU64::new(0);
    let sink = Mutex::new(Sink { db: opts.db.clone(), frontier: Some(frontier) });
    let pending: Vec<(usize, &Task)> = tasks.iter().enumerate().filter(|(id, _)| !done.contains(id)).collect();

    let run = || -> Vec<Result<Option<Vec<ChamberRecord>>>> {
        pending
            .par_iter()
            .map(|&(id, task)| {
                let mut walker = Walker {
                    poset: &poset,
                    partial_lp,
                    deadline,
                    abort: &abort,
                    candidates: &candidates,
                    lp_calls: &lp_calls,
                    out: Vec::new(),
                };
                let mut state = task.state.clone();
                match walker.walk(task.next, &mut state) {
                    Ok(()) => {
                        sink.lock().expect("sink lock").complete(id, &walker.out)?;
                        Ok(Some(walker.out))
                    }
                    Err(Aborted) => Ok(None),
                }
            })
            .collect()
    };
    let results = if opts.threads == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?
            .install(run)
    };

    let mut records = previous;
    let mut finished = done.len();
    for r in results {
        if let Some(found) = r? {
            records.extend(found);
            finished += 1;
        }
    }
    if finished < tasks.len() {
        return Err(Error::ResourceLimit(format!(
            "time limit hit after {finished} of {} search tasks; rerun with resume to continue",
            tasks.len()
        )));
    }
    records.sort_by(|a, b| a.signature.cmp(&b.signature));
    records.dedup_by(|a, b| a.signature == b.signature);
    if let Some(db) = &opts.db {
        write_records(db, &records)?;
        let fp = frontier_path(db);
        if fp.exists() {
            std::fs::remove_file(fp)?;
        }
    }
    Ok(EnumerationReport {
        n,
        records,
        tasks: tasks.len(),
        resumed_tasks: done.len(),
        candidates: candidates.into_inner(),
        lp_calls: lp_calls.into_inner(),
    })
}

/// Signatures of every ordered integer vector with entries in `1..=max` and
/// odd total, skipping non-generic ones. An independent source of chambers.
pub fn sampled_signatures(n: usize, max: i64) -> BTreeSet<ChamberSignature> {
    let mut out = BTreeSet::new();
    let mut v = vec![1i64; n];
    loop {
        if v.iter().sum::<i64>() % 2 == 1 {
            let lv = LengthVector::from_integers(&v).expect("positive");
            if let Ok(sig) = ChamberSignature::of(&lv) {
                out.insert(sig);
            }
        }
        // Next non-decreasing vector in lexicographic order from the right.
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if v[i] < max {
                v[i] += 1;
                let fill = v[i];
                for x in v.iter_mut().skip(i + 1) {
                    *x = fill;
                }
                break;
            }
        }
    }
}
