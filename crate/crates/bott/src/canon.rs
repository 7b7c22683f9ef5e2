//! Canonical forms of acyclic digraphs: the lexicographically least
//! row-major adjacency bit-string over all acyclic orderings.
//!
//! Restricting to acyclic orderings is sound because isomorphisms map
//! acyclic orderings to acyclic orderings, and it keeps every candidate
//! matrix upper-triangular, which shrinks the search far below n!.
//!
//! The search places positions left to right, always choosing among the
//! current sources. Placing a vertex at position `k` fixes column `k` of
//! the relabeled matrix (all in-neighbors already sit at positions < k),
//! so the partial code grows monotonically and any branch whose partial
//! code reaches the best known full code can be cut.

use crate::digraph::{BitIter, Digraph, Permutation, N_MAX};

/// Row-major adjacency bits as a 256-bit big-endian integer: bit
/// `t = i*n + j` (arc from position `i` to position `j`) lives at word
/// `t / 64`, bit `63 - t % 64`. For n <= 8 the whole code is in word 0.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Code(pub [u64; 4]);

impl Code {
    pub const ZERO: Code = Code([0; 4]);

    #[inline]
    pub fn bit(&self, t: usize) -> bool {
        self.0[t >> 6] & (1u64 << (63 - (t & 63))) != 0
    }

    #[inline]
    pub fn set_bit(&mut self, t: usize) {
        self.0[t >> 6] |= 1u64 << (63 - (t & 63));
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; 4]
    }
}

impl std::fmt::Debug for Code {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Code({:016X}{:016X}{:016X}{:016X})", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

/// Word type the canonical search runs on. `u64` covers n <= 8 (64 bits of
/// code); `Code` covers the full range n <= 16.
pub(crate) trait CodeWord:
    Copy + Ord + Eq + std::hash::Hash + Send + Sync + std::fmt::Debug + 'static
{
    const ZERO: Self;
    const MAX: Self;
    /// Value with the single row-major bit `t` set.
    fn with_bit(t: usize) -> Self;
    fn bit(self, t: usize) -> bool;
    fn shr(self, k: usize) -> Self;
    fn or(self, other: Self) -> Self;
    fn xor(self, other: Self) -> Self;
    fn to_code(self) -> Code;
}

impl CodeWord for u64 {
    const ZERO: u64 = 0;
    const MAX: u64 = u64::MAX;

    #[inline]
    fn with_bit(t: usize) -> u64 {
        1u64 << (63 - t)
    }
    #[inline]
    fn bit(self, t: usize) -> bool {
        self & (1u64 << (63 - t)) != 0
    }
    #[inline]
    fn shr(self, k: usize) -> u64 {
        self >> k
    }
    #[inline]
    fn or(self, other: u64) -> u64 {
        self | other
    }
    #[inline]
    fn xor(self, other: u64) -> u64 {
        self ^ other
    }
    #[inline]
    fn to_code(self) -> Code {
        Code([self, 0, 0, 0])
    }
}

impl CodeWord for Code {
    const ZERO: Code = Code([0; 4]);
    const MAX: Code = Code([u64::MAX; 4]);

    #[inline]
    fn with_bit(t: usize) -> Code {
        let mut c = Code::ZERO;
        c.set_bit(t);
        c
    }
    #[inline]
    fn bit(self, t: usize) -> bool {
        Code::bit(&self, t)
    }
    #[inline]
    fn shr(self, k: usize) -> Code {
        if k == 0 {
            return self;
        }
        let w = k >> 6;
        let b = k & 63;
        let mut out = [0u64; 4];
        for i in 0..4 {
            if i + w < 4 {
                out[i + w] |= self.0[i] >> b;
                if b != 0 && i + w + 1 < 4 {
                    out[i + w + 1] |= self.0[i] << (64 - b);
                }
            }
        }
        Code(out)
    }
    #[inline]
    fn or(self, other: Code) -> Code {
        Code([
            self.0[0] | other.0[0],
            self.0[1] | other.0[1],
            self.0[2] | other.0[2],
            self.0[3] | other.0[3],
        ])
    }
    #[inline]
    fn xor(self, other: Code) -> Code {
        Code([
            self.0[0] ^ other.0[0],
            self.0[1] ^ other.0[1],
            self.0[2] ^ other.0[2],
            self.0[3] ^ other.0[3],
        ])
    }
    #[inline]
    fn to_code(self) -> Code {
        self
    }
}

/// A digraph's isomorphism class: the minimal code together with a
/// relabeling permutation that achieves it. Equality, ordering and hashing
/// use `(n, code)` only, so two digraphs have equal canonical forms iff
/// they are isomorphic.
#[derive(Clone, Copy, Debug)]
pub struct CanonicalForm {
    n: u8,
    code: Code,
    witness: Permutation,
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.code == other.code
    }
}
impl Eq for CanonicalForm {}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, self.code).cmp(&(other.n, other.code))
    }
}

impl std::hash::Hash for CanonicalForm {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.n, self.code).hash(state);
    }
}

impl CanonicalForm {
    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn code(&self) -> Code {
        self.code
    }

    /// The permutation that relabels the original digraph into its
    /// canonical labeling.
    pub fn witness(&self) -> Permutation {
        self.witness
    }

    /// The canonically labeled representative digraph.
    pub fn digraph(&self) -> Digraph {
        decode(self.code, self.n())
    }

    pub(crate) fn from_code(code: Code, n: usize) -> CanonicalForm {
        CanonicalForm {
            n: n as u8,
            code,
            witness: Permutation::identity(n).expect("n validated"),
        }
    }
}

/// Rebuilds the digraph whose row-major adjacency bits are `code`.
pub(crate) fn decode(code: Code, n: usize) -> Digraph {
    let mut rows = [0u16; N_MAX];
    for i in 0..n {
        for j in 0..n {
            if code.bit(i * n + j) {
                rows[i] |= 1 << j;
            }
        }
    }
    Digraph::from_parts_unchecked(n, rows)
}

pub(crate) fn decode_word<W: CodeWord>(word: W, n: usize) -> Digraph {
    decode(word.to_code(), n)
}

struct Search<W: CodeWord> {
    n: usize,
    rows: [u16; N_MAX],
    /// Full in-neighbor masks, fixed for the whole search.
    cols: [u16; N_MAX],
    /// `twins_below[v]`: vertices u < v with equal rows and columns;
    /// exploring v while such a u is unplaced would retrace a symmetric
    /// branch with an identical code.
    twins_below: [u16; N_MAX],
    /// Running column word per unplaced vertex: bit `i*n` is set once the
    /// in-neighbor placed at position i arrived; shifting right by the
    /// final position k turns it into column k of the relabeled matrix.
    colw: [W; N_MAX],
    placed: [u8; N_MAX],
    placed_mask: u16,
    best: W,
    best_order: [u8; N_MAX],
}

impl<W: CodeWord> Search<W> {
    fn run(digraph: &Digraph) -> (W, Permutation) {
        let n = digraph.n();
        let mut rows = [0u16; N_MAX];
        let mut cols = [0u16; N_MAX];
        for v in 0..n {
            rows[v] = digraph.row(v);
            cols[v] = digraph.column(v);
        }
        let mut twins_below = [0u16; N_MAX];
        for v in 0..n {
            for u in 0..v {
                if rows[u] == rows[v] && cols[u] == cols[v] {
                    twins_below[v] |= 1 << u;
                }
            }
        }
        let mut search = Search {
            n,
            rows,
            cols,
            twins_below,
            colw: [W::ZERO; N_MAX],
            placed: [0u8; N_MAX],
            placed_mask: 0,
            best: W::MAX,
            best_order: [0u8; N_MAX],
        };
        search.descend(0, W::ZERO);
        debug_assert!(search.best < W::MAX);

        let mut image = [0u8; N_MAX];
        for (pos, &v) in search.best_order[..n].iter().enumerate() {
            image[v as usize] = pos as u8;
        }
        (search.best, Permutation::from_parts_unchecked(n, image))
    }

    fn descend(&mut self, k: usize, partial: W) {
        if k == self.n {
            // prune guarantees partial < best here
            self.best = partial;
            self.best_order = self.placed;
            return;
        }
        // candidates: unplaced vertices whose in-neighbors are all placed,
        // skipping any with an unplaced twin of smaller index
        let mut cand: [(W, u8); N_MAX] = [(W::ZERO, 0); N_MAX];
        let mut count = 0;
        let unplaced = !self.placed_mask & if self.n == 16 { !0 } else { (1u16 << self.n) - 1 };
        for v in BitIter(unplaced) {
            if self.cols[v] & !self.placed_mask != 0 {
                continue;
            }
            if self.twins_below[v] & !self.placed_mask != 0 {
                continue;
            }
            cand[count] = (self.colw[v], v as u8);
            count += 1;
        }
        // insertion sort ascending by (column word, vertex)
        for i in 1..count {
            let item = cand[i];
            let mut j = i;
            while j > 0 && cand[j - 1] > item {
                cand[j] = cand[j - 1];
                j -= 1;
            }
            cand[j] = item;
        }
        for &(colw, v) in &cand[..count] {
            let v = v as usize;
            // column k bits are disjoint from the bits already in partial,
            // so the or-extension is monotone in colw: once a candidate
            // reaches best, all later candidates do too.
            let extended = partial.or(colw.shr(k));
            if extended >= self.best {
                break;
            }
            self.placed[k] = v as u8;
            self.placed_mask |= 1 << v;
            let delta = W::with_bit(k * self.n);
            let outs = self.rows[v] & !self.placed_mask;
            for u in BitIter(outs) {
                self.colw[u] = self.colw[u].xor(delta);
            }
            self.descend(k + 1, extended);
            for u in BitIter(outs) {
                self.colw[u] = self.colw[u].xor(delta);
            }
            self.placed_mask &= !(1 << v);
        }
    }
}

pub(crate) fn canonical_word<W: CodeWord>(d: &Digraph) -> (W, Permutation) {
    Search::<W>::run(d)
}

impl Digraph {
    /// The canonical form of this digraph's isomorphism class.
    pub fn canonical_form(&self) -> CanonicalForm {
        let n = self.n();
        let (code, witness) = if n <= 8 {
            let (w, p) = canonical_word::<u64>(self);
            (w.to_code(), p)
        } else {
            canonical_word::<Code>(self)
        };
        CanonicalForm { n: n as u8, code, witness }
    }

    /// True iff the two digraphs are related by a relabeling.
    pub fn is_isomorphic(&self, other: &Digraph) -> bool {
        self.n() == other.n() && self.canonical_form().code() == other.canonical_form().code()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::Digraph;

    fn p3() -> Digraph {
        Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap()
    }

    /// Oracle: minimum row-major code over every permutation that relabels
    /// `d` into upper-triangular form, by exhaustive search.
    fn brute_min_code(d: &Digraph) -> Code {
        let n = d.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best: Option<Code> = None;
        permute(&mut perm, 0, &mut |p| {
            let pi = Permutation::from_image(p).unwrap();
            let h = d.relabel(&pi).unwrap();
            let upper = h.arcs().iter().all(|&(u, v)| u < v);
            if !upper {
                return;
            }
            let mut code = Code::ZERO;
            for (u, v) in h.arcs() {
                code.set_bit(u * n + v);
            }
            if best.is_none_or(|b| code < b) {
                best = Some(code);
            }
        });
        best.expect("every DAG has an acyclic ordering")
    }

    fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
        if k == items.len() {
            visit(items);
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            permute(items, k + 1, visit);
            items.swap(k, i);
        }
    }

    fn all_dags(n: usize) -> Vec<Digraph> {
        let slots = n * n;
        let mut out = Vec::new();
        for bits in 0u32..(1 << slots) {
            let mut rows = vec![0u16; n];
            let mut ok = true;
            for i in 0..n {
                for j in 0..n {
                    if bits & (1 << (i * n + j)) != 0 {
                        if i == j {
                            ok = false;
                        }
                        rows[i] |= 1 << j;
                    }
                }
            }
            if !ok {
                continue;
            }
            if let Ok(d) = Digraph::from_rows(n, &rows) {
                out.push(d);
            }
        }
        out
    }

    #[test]
    fn edgeless_code_is_zero() {
        assert!(Digraph::edgeless(3).unwrap().canonical_form().code().is_zero());
    }

    #[test]
    fn path_code_bits() {
        let cf = p3().canonical_form();
        let mut expect = Code::ZERO;
        expect.set_bit(1); // (0,1)
        expect.set_bit(5); // (1,2)
        assert_eq!(cf.code(), expect);
    }

    #[test]
    fn relabeled_path_shares_code() {
        let other = Digraph::from_arcs(3, [(1, 2), (2, 0)]).unwrap();
        assert_eq!(p3().canonical_form(), other.canonical_form());
        assert!(p3().is_isomorphic(&other));
    }

    #[test]
    fn distinct_graphs_distinct_codes() {
        let arc = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        let none = Digraph::edgeless(2).unwrap();
        assert_ne!(arc.canonical_form().code(), none.canonical_form().code());
    }

    #[test]
    fn reversed_arc_is_isomorphic() {
        let a = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        let b = Digraph::from_arcs(2, [(1, 0)]).unwrap();
        assert!(a.is_isomorphic(&b));
    }

    #[test]
    fn stars_are_not_isomorphic() {
        let out_star = Digraph::from_arcs(3, [(0, 1), (0, 2)]).unwrap();
        let in_star = Digraph::from_arcs(3, [(0, 2), (1, 2)]).unwrap();
        assert!(!out_star.is_isomorphic(&in_star));
    }

    #[test]
    fn path_vs_tournament_not_isomorphic() {
        let t3 = Digraph::from_arcs(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        assert!(!p3().is_isomorphic(&t3));
    }

    #[test]
    fn witness_reaches_the_code() {
        for d in [
            p3(),
            Digraph::from_arcs(4, [(2, 1), (3, 1), (2, 0)]).unwrap(),
            Digraph::from_arcs(5, [(4, 0), (3, 0), (2, 1), (4, 2)]).unwrap(),
        ] {
            let cf = d.canonical_form();
            let relabeled = d.relabel(&cf.witness()).unwrap();
            assert_eq!(relabeled, cf.digraph());
        }
    }

    #[test]
    fn search_matches_brute_force_min_exhaustive_n3() {
        for d in all_dags(3) {
            assert_eq!(d.canonical_form().code(), brute_min_code(&d), "digraph {d:?}");
        }
    }

    #[test]
    fn search_matches_brute_force_min_sampled_n5() {
        // deterministic sample over arc patterns of an upper-triangular seed
        let mut checked = 0;
        for seed in (0..1024u32).step_by(7) {
            let mut rows = [0u16; 5];
            let mut bit = 0;
            for i in 0..5 {
                for j in (i + 1)..5 {
                    if seed & (1 << bit) != 0 {
                        rows[i] |= 1 << j;
                    }
                    bit += 1;
                }
            }
            let d = Digraph::from_rows(5, &rows).unwrap();
            // scramble with a fixed permutation so input is not already minimal
            let p = Permutation::from_image(&[3, 0, 4, 1, 2]).unwrap();
            let d = d.relabel(&p).unwrap();
            assert_eq!(d.canonical_form().code(), brute_min_code(&d));
            checked += 1;
        }
        assert!(checked > 100);
    }

    #[test]
    fn wide_path_used_above_n8() {
        let d = Digraph::from_arcs(10, [(0, 1), (5, 9), (9, 3)]).unwrap();
        let cf = d.canonical_form();
        let relabeled = d.relabel(&cf.witness()).unwrap();
        assert_eq!(relabeled, cf.digraph());
        // code must live beyond word 0 for n=10 once arcs sit low in the matrix
        assert!(!cf.code().is_zero());
    }

    #[test]
    fn wide_shift_crosses_words() {
        let one = Code::with_bit(0);
        assert!(one.shr(70).bit(70));
        assert!(one.shr(64).bit(64));
        assert!(one.shr(255).bit(255));
        assert_eq!(one.shr(0), one);
    }

    #[test]
    fn canonical_of_canonical_is_fixed() {
        let d = Digraph::from_arcs(6, [(5, 1), (4, 1), (3, 2), (5, 0)]).unwrap();
        let cf = d.canonical_form();
        let again = cf.digraph().canonical_form();
        assert_eq!(cf.code(), again.code());
        // a canonically labeled digraph canonicalizes with the identity
        let id = Permutation::identity(6).unwrap();
        assert_eq!(cf.digraph().relabel(&id).unwrap(), again.digraph());
    }
}
