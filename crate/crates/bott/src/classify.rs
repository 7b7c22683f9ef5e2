//! Bott-class census: enumerate every isomorphism class of acyclic digraphs
//! on n vertices, close each seed under local complementations and slides,
//! and count the resulting equivalence classes with orientable/symplectic
//! subcounts.
//!
//! Determinism: the class list is a sorted, deduplicated vector of canonical
//! codes, orbits are intrinsic sets independent of traversal, and parallel
//! workers only ever compute pure per-seed closures that a sequential merge
//! combines in seed order. Output is bit-identical for any worker count.

use crate::canon::{canonical_word, decode_word, CanonicalForm, Code, CodeWord};
use crate::digraph::{BitIter, Digraph, N_MAX};
use crate::error::{Error, Result};
use crate::invariants::{is_orientable, is_symplectic, levels};
use std::collections::{BTreeSet, HashSet, VecDeque};

/// Census configuration. `threads == 0` means all available cores;
/// `threads == 1` forces the sequential path. `shards > 1` partitions seeds
/// by level sequence (orbit-constant) into separately processed passes.
#[derive(Clone, Debug)]
pub struct CensusConfig {
    pub threads: usize,
    pub shards: usize,
    pub mem_budget_mb: usize,
    pub filter: CensusFilter,
    pub keep_representatives: bool,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            threads: 0,
            shards: 1,
            mem_budget_mb: 2048,
            filter: CensusFilter::All,
            keep_representatives: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CensusFilter {
    All,
    Orientable,
    Symplectic,
}

impl CensusFilter {
    fn admits(&self, orientable: bool, symplectic: bool) -> bool {
        match self {
            CensusFilter::All => true,
            CensusFilter::Orientable => orientable,
            CensusFilter::Symplectic => symplectic,
        }
    }
}

/// Per-n census of Bott equivalence classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCensus {
    pub n: usize,
    /// Isomorphism classes of acyclic digraphs enumerated.
    pub dag_count: u64,
    pub total_classes: u64,
    pub orientable_classes: u64,
    pub symplectic_classes: u64,
    /// Representatives of the classes admitted by the filter, ascending by
    /// code, present when requested.
    pub representatives: Option<Vec<CanonicalForm>>,
}

/// The closure of one digraph under both moves and isomorphism.
#[derive(Clone, Debug)]
pub struct OrbitResult {
    pub representative: CanonicalForm,
    /// Number of isomorphism classes in the orbit (counts members found so
    /// far when truncated).
    pub size: usize,
    /// Orbit members ascending by code; truncated lists carry the members
    /// discovered before the limit hit.
    pub members: Vec<CanonicalForm>,
    pub truncated: bool,
}

// ---- move generation ----------------------------------------------------

/// Calls `f` with every move result that differs bitwise from `d`: all
/// non-trivial local complementations and all non-trivial slides between
/// ordered sibling pairs. Skipped moves are exactly the ones that fix `d`.
fn for_each_proper_move(d: &Digraph, mut f: impl FnMut(Digraph)) {
    let n = d.n();
    for v in 0..n {
        if d.column(v) != 0 && d.row(v) != 0 {
            f(d.local_complement_unchecked(v));
        }
    }
    for group in d.sibling_group_masks() {
        if group.count_ones() < 2 {
            continue;
        }
        for v in BitIter(group) {
            if d.row(v) == 0 {
                continue; // slide along an empty out-row fixes d
            }
            for w in BitIter(group) {
                if v != w {
                    f(d.slide_unchecked(v, w));
                }
            }
        }
    }
}

/// Canonical forms of every digraph one move away from `d`, as a set.
/// Includes `canonical(d)` itself exactly when some move fixes `d` (a local
/// complementation at a source always does).
pub fn bott_neighbors(d: &Digraph) -> BTreeSet<CanonicalForm> {
    let mut out = BTreeSet::new();
    out.insert(d.canonical_form());
    for_each_proper_move(d, |moved| {
        out.insert(moved.canonical_form());
    });
    out
}

// ---- orbit closure ------------------------------------------------------

struct OrbitScan<W> {
    representative: W,
    members: Vec<W>,
    truncated: bool,
    orientable: bool,
    symplectic: bool,
}

/// Breadth-first closure over canonical codes. Stops early when `target`
/// is reached (used for equivalence tests) or when `limit` members have
/// been collected.
fn orbit_scan<W: CodeWord>(
    seed: W,
    n: usize,
    target: Option<W>,
    limit: Option<usize>,
) -> OrbitScan<W> {
    let seed_digraph = decode_word(seed, n);
    let orientable = is_orientable(&seed_digraph);
    let symplectic = is_symplectic(&seed_digraph);

    let mut seen: HashSet<W> = HashSet::new();
    seen.insert(seed);
    let mut queue: VecDeque<W> = VecDeque::new();
    queue.push_back(seed);
    let mut representative = seed;
    let mut truncated = false;
    let mut raw: Vec<Digraph> = Vec::new();

    'bfs: while let Some(code) = queue.pop_front() {
        let d = decode_word(code, n);
        raw.clear();
        for_each_proper_move(&d, |moved| {
            if moved != d {
                raw.push(moved);
            }
        });
        // different moves often coincide bitwise; dedup before canonicalizing
        raw.sort_unstable();
        raw.dedup();
        for moved in &raw {
            let (canon, _) = canonical_word::<W>(moved);
            if !seen.insert(canon) {
                continue;
            }
            representative = representative.min(canon);
            if Some(canon) == target {
                truncated = true; // closure not exhausted, but target found
                break 'bfs;
            }
            if let Some(cap) = limit {
                if seen.len() > cap {
                    truncated = true;
                    break 'bfs;
                }
            }
            queue.push_back(canon);
        }
    }

    let mut members: Vec<W> = seen.into_iter().collect();
    members.sort_unstable();
    OrbitScan { representative, members, truncated, orientable, symplectic }
}

fn orbit_impl<W: CodeWord>(d: &Digraph, limit: Option<usize>) -> OrbitResult {
    let n = d.n();
    let (seed, _) = canonical_word::<W>(d);
    let scan = orbit_scan(seed, n, None, limit);
    OrbitResult {
        representative: CanonicalForm::from_code(scan.representative.to_code(), n),
        size: scan.members.len(),
        members: scan
            .members
            .iter()
            .map(|&w| CanonicalForm::from_code(w.to_code(), n))
            .collect(),
        truncated: scan.truncated,
    }
}

/// The full Bott orbit of `d` in isomorphism-class space. With a
/// `member_limit` the closure stops once the limit is exceeded and the
/// partial result is flagged `truncated`.
pub fn orbit(d: &Digraph, member_limit: Option<usize>) -> OrbitResult {
    if d.n() <= 8 {
        orbit_impl::<u64>(d, member_limit)
    } else {
        orbit_impl::<Code>(d, member_limit)
    }
}

fn equivalent_impl<W: CodeWord>(d: &Digraph, h: &Digraph) -> bool {
    let (a, _) = canonical_word::<W>(d);
    let (b, _) = canonical_word::<W>(h);
    if a == b {
        return true;
    }
    // sound pruning: fingerprints are orbit-constant
    if crate::invariants::fingerprint(d) != crate::invariants::fingerprint(h) {
        return false;
    }
    let scan = orbit_scan(a, d.n(), Some(b), None);
    scan.members.contains(&b)
}

/// True iff the two digraphs are related by local complementations, slides
/// and isomorphism.
pub fn are_bott_equivalent(d: &Digraph, h: &Digraph) -> bool {
    if d.n() != h.n() {
        return false;
    }
    if d.n() <= 8 {
        equivalent_impl::<u64>(d, h)
    } else {
        equivalent_impl::<Code>(d, h)
    }
}

// ---- parallel plumbing --------------------------------------------------

/// Runs `f` on a rayon pool with the configured thread count. One thread, or
/// a build without the `parallel` feature, runs `f` on the caller's thread.
pub fn run_with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    {
        if threads == 1 {
            return f();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("building a rayon pool");
        pool.install(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}

fn map_batch<W: CodeWord, T: Send>(
    items: &[W],
    sequential: bool,
    f: impl Fn(W) -> T + Sync,
) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        if !sequential {
            use rayon::prelude::*;
            return items.par_iter().map(|&w| f(w)).collect();
        }
    }
    let _ = sequential;
    items.iter().map(|&w| f(w)).collect()
}

fn sort_codes<W: CodeWord>(codes: &mut [W], sequential: bool) {
    #[cfg(feature = "parallel")]
    {
        if !sequential {
            use rayon::prelude::*;
            codes.par_sort_unstable();
            return;
        }
    }
    let _ = sequential;
    codes.sort_unstable();
}

// ---- enumeration --------------------------------------------------------

/// Store model: candidate and class vectors, doubled for sort scratch.
fn check_budget<W>(entries: usize, budget_mb: usize) -> Result<()> {
    let needed_bytes = entries.saturating_mul(2 * std::mem::size_of::<W>());
    if needed_bytes > budget_mb << 20 {
        return Err(Error::Resource { needed_mb: (needed_bytes >> 20) + 1, budget_mb });
    }
    Ok(())
}

/// Every isomorphism class of acyclic digraphs on 1..=n vertices is reached
/// by repeatedly extending an (m-1)-vertex class with a fresh sink over all
/// 2^(m-1) in-neighbor subsets: deleting any sink of an m-vertex DAG leaves
/// an (m-1)-vertex DAG, so the extensions cover everything. Canonical codes
/// are sorted and deduplicated per size.
fn enumerate_codes<W: CodeWord>(n: usize, cfg: &CensusConfig) -> Result<Vec<W>> {
    let sequential = cfg.threads == 1;
    let mut classes: Vec<W> = vec![W::ZERO]; // the one-vertex digraph
    for m in 2..=n {
        let extensions = classes.len() << (m - 1);
        check_budget::<W>(extensions + classes.len(), cfg.mem_budget_mb)?;
        let mut candidates: Vec<W> = Vec::with_capacity(extensions);
        let per_parent: Vec<Vec<W>> = map_batch(&classes, sequential, |parent| {
            let small = decode_word(parent, m - 1);
            let mut rows = [0u16; N_MAX];
            for v in 0..m - 1 {
                rows[v] = small.row(v);
            }
            let sink_bit = 1u16 << (m - 1);
            let mut out = Vec::with_capacity(1 << (m - 1));
            for subset in 0u16..(1 << (m - 1)) {
                let mut extended = rows;
                for u in BitIter(subset) {
                    extended[u] |= sink_bit;
                }
                let d = Digraph::from_parts_unchecked(m, extended);
                out.push(canonical_word::<W>(&d).0);
            }
            out
        });
        for batch in per_parent {
            candidates.extend(batch);
        }
        sort_codes(&mut candidates, sequential);
        candidates.dedup();
        classes = candidates;
    }
    Ok(classes)
}

/// The class stream produced by [`enumerate_dags`]: every isomorphism
/// class exactly once, ascending by canonical code.
pub struct DagClasses {
    n: usize,
    codes: DagCodes,
    next: usize,
}

enum DagCodes {
    Small(Vec<u64>),
    Wide(Vec<Code>),
}

impl DagClasses {
    pub fn len(&self) -> usize {
        match &self.codes {
            DagCodes::Small(v) => v.len(),
            DagCodes::Wide(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Iterator for DagClasses {
    type Item = CanonicalForm;

    fn next(&mut self) -> Option<CanonicalForm> {
        let code = match &self.codes {
            DagCodes::Small(v) => v.get(self.next)?.to_code(),
            DagCodes::Wide(v) => *v.get(self.next)?,
        };
        self.next += 1;
        Some(CanonicalForm::from_code(code, self.n))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = self.len() - self.next;
        (rest, Some(rest))
    }
}

impl ExactSizeIterator for DagClasses {}

/// Streams every isomorphism class of acyclic digraphs on `n` vertices,
/// exactly once, ascending by canonical code.
pub fn enumerate_dags(n: usize, cfg: &CensusConfig) -> Result<DagClasses> {
    if n == 0 || n > N_MAX {
        return Err(Error::VertexCount { n, max: N_MAX });
    }
    let cfg = cfg.clone();
    let codes = run_with_threads(cfg.threads, move || {
        if n <= 8 {
            Ok(DagCodes::Small(enumerate_codes::<u64>(n, &cfg)?))
        } else {
            Ok(DagCodes::Wide(enumerate_codes::<Code>(n, &cfg)?))
        }
    })?;
    Ok(DagClasses { n, codes, next: 0 })
}

// ---- census -------------------------------------------------------------

struct VisitedBits(Vec<u64>);

impl VisitedBits {
    fn new(len: usize) -> VisitedBits {
        VisitedBits(vec![0; len.div_ceil(64)])
    }
    #[inline]
    fn get(&self, i: usize) -> bool {
        self.0[i >> 6] & (1 << (i & 63)) != 0
    }
    #[inline]
    fn set(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }
}

/// Seeds per parallel round. Two seeds of one orbit in the same round cost a
/// redundant closure; the merge step counts each orbit once regardless.
const SEED_CHUNK: usize = 1024;

fn census_impl<W: CodeWord>(n: usize, cfg: &CensusConfig) -> Result<ClassCensus> {
    let sequential = cfg.threads == 1;
    let codes = enumerate_codes::<W>(n, cfg)?;
    let dag_count = codes.len() as u64;

    // Seeds grouped into shard passes by level sequence, which is constant
    // on orbits, so every orbit is confined to one pass.
    let seed_passes: Vec<Vec<usize>> = if cfg.shards > 1 {
        let keys: Vec<Vec<usize>> = map_batch(&codes, sequential, |code| {
            levels(&decode_word(code, n)).sequence().to_vec()
        });
        let distinct: BTreeSet<&Vec<usize>> = keys.iter().collect();
        let index_of: std::collections::HashMap<&Vec<usize>, usize> =
            distinct.iter().enumerate().map(|(i, k)| (*k, i)).collect();
        let mut passes: Vec<Vec<usize>> = vec![Vec::new(); cfg.shards];
        for (i, key) in keys.iter().enumerate() {
            passes[index_of[key] % cfg.shards].push(i);
        }
        passes
    } else {
        vec![(0..codes.len()).collect()]
    };

    let mut visited = VisitedBits::new(codes.len());
    let mut total = 0u64;
    let mut orientable = 0u64;
    let mut symplectic = 0u64;
    let mut member_sum = 0u64;
    let mut reps: Vec<W> = Vec::new();

    for pass in &seed_passes {
        for chunk in pass.chunks(SEED_CHUNK) {
            let live: Vec<W> = chunk
                .iter()
                .filter(|&&i| !visited.get(i))
                .map(|&i| codes[i])
                .collect();
            if live.is_empty() {
                continue;
            }
            let orbits = map_batch(&live, sequential, |seed| orbit_scan(seed, n, None, None));
            for (seed, scan) in live.iter().zip(&orbits) {
                let seed_rank = codes.binary_search(seed).expect("seed is enumerated");
                if visited.get(seed_rank) {
                    continue; // an earlier seed in this round owned the orbit
                }
                for member in &scan.members {
                    let rank = codes
                        .binary_search(member)
                        .expect("every orbit member is an enumerated class");
                    visited.set(rank);
                }
                total += 1;
                member_sum += scan.members.len() as u64;
                if scan.orientable {
                    orientable += 1;
                }
                if scan.symplectic {
                    symplectic += 1;
                }
                if cfg.keep_representatives && cfg.filter.admits(scan.orientable, scan.symplectic)
                {
                    reps.push(scan.representative);
                }
            }
        }
    }

    assert_eq!(member_sum, dag_count, "orbit sizes must partition the class count");
    assert!(symplectic <= orientable && orientable <= total);

    let representatives = if cfg.keep_representatives {
        reps.sort_unstable();
        Some(reps.into_iter().map(|w| CanonicalForm::from_code(w.to_code(), n)).collect())
    } else {
        None
    };

    Ok(ClassCensus {
        n,
        dag_count,
        total_classes: total,
        orientable_classes: orientable,
        symplectic_classes: symplectic,
        representatives,
    })
}

/// Enumerates all DAG classes on `n` vertices and partitions them into Bott
/// equivalence classes. Counts are independent of thread count, sharding
/// and chunking.
pub fn classify(n: usize, cfg: &CensusConfig) -> Result<ClassCensus> {
    if n == 0 || n > N_MAX {
        return Err(Error::VertexCount { n, max: N_MAX });
    }
    if cfg.shards == 0 {
        return Err(Error::Shape("shard count must be at least 1".into()));
    }
    let cfg = cfg.clone();
    run_with_threads(cfg.threads, move || {
        if n <= 8 {
            census_impl::<u64>(n, &cfg)
        } else {
            census_impl::<Code>(n, &cfg)
        }
    })
}
