//! Bit-packed acyclic digraphs on up to [`N_MAX`] vertices and the two
//! operations generating Bott equivalence: local complementation and slides.
//!
//! Vertices are `0..n`. Bit `j` of `row(i)` is set iff the arc `i -> j`
//! exists, so the rows are exactly the adjacency matrix of the digraph.

use crate::error::{Error, Result};

/// Hard cap on vertex count: rows fit in `u16`, canonical codes in 256 bits.
/// Classification workloads target n <= 8; the headroom is for experiments.
pub const N_MAX: usize = 16;

/// An acyclic digraph. Immutable: every operation returns a new value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Digraph {
    n: u8,
    rows: [u16; N_MAX],
}

/// A bijection on `{0..n}`, stored as the image of each vertex.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Permutation {
    n: u8,
    image: [u8; N_MAX],
}

/// Iterator over the set bits of a `u16` neighborhood mask.
#[derive(Clone, Copy)]
pub struct BitIter(pub u16);

impl Iterator for BitIter {
    type Item = usize;
    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

/// Kahn's algorithm with smallest-label tie-break. Returns the vertex order
/// (position -> vertex), or `None` if the rows contain a cycle.
fn kahn_order(n: usize, rows: &[u16; N_MAX]) -> Option<[u8; N_MAX]> {
    let mut cols = [0u16; N_MAX];
    for i in 0..n {
        for j in BitIter(rows[i]) {
            cols[j] |= 1 << i;
        }
    }
    let mut order = [0u8; N_MAX];
    let mut remaining: u16 = if n == 16 { !0 } else { (1u16 << n) - 1 };
    for pos in 0..n {
        // smallest remaining vertex whose in-neighbors are all removed
        let v = BitIter(remaining).find(|&v| cols[v] & remaining == 0)?;
        order[pos] = v as u8;
        remaining &= !(1 << v);
    }
    Some(order)
}

impl Digraph {
    fn check_n(n: usize) -> Result<()> {
        if n == 0 || n > N_MAX {
            return Err(Error::VertexCount { n, max: N_MAX });
        }
        Ok(())
    }

    /// Builds a digraph from an arc list. Duplicate arcs collapse.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Digraph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::check_n(n)?;
        let mut rows = [0u16; N_MAX];
        for (u, v) in arcs {
            if u >= n {
                return Err(Error::Range { index: u, n });
            }
            if v >= n {
                return Err(Error::Range { index: v, n });
            }
            if u == v {
                return Err(Error::SelfLoop { v: u });
            }
            rows[u] |= 1 << v;
        }
        if kahn_order(n, &rows).is_none() {
            return Err(Error::Cycle);
        }
        Ok(Digraph { n: n as u8, rows })
    }

    /// Builds a digraph directly from adjacency rows.
    pub fn from_rows(n: usize, rows: &[u16]) -> Result<Digraph> {
        Self::check_n(n)?;
        if rows.len() != n {
            return Err(Error::Size { left: rows.len(), right: n });
        }
        let width: u16 = if n == 16 { !0 } else { (1u16 << n) - 1 };
        let mut packed = [0u16; N_MAX];
        for (i, &r) in rows.iter().enumerate() {
            if r & !width != 0 {
                return Err(Error::Range { index: (r & !width).trailing_zeros() as usize, n });
            }
            if r & (1 << i) != 0 {
                return Err(Error::SelfLoop { v: i });
            }
            packed[i] = r;
        }
        if kahn_order(n, &packed).is_none() {
            return Err(Error::Cycle);
        }
        Ok(Digraph { n: n as u8, rows: packed })
    }

    /// Construction bypass for operations whose closure is a proven property.
    #[inline]
    pub(crate) fn from_parts_unchecked(n: usize, rows: [u16; N_MAX]) -> Digraph {
        let d = Digraph { n: n as u8, rows };
        debug_assert!(kahn_order(n, &rows).is_some(), "closure produced a cycle");
        d
    }

    /// Edgeless digraph on `n` vertices.
    pub fn edgeless(n: usize) -> Result<Digraph> {
        Self::check_n(n)?;
        Ok(Digraph { n: n as u8, rows: [0u16; N_MAX] })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Out-neighborhood of `v` as a bit mask.
    #[inline]
    pub fn row(&self, v: usize) -> u16 {
        self.rows[v]
    }

    /// In-neighborhood of `v` as a bit mask.
    #[inline]
    pub fn column(&self, v: usize) -> u16 {
        let mut c = 0u16;
        for i in 0..self.n() {
            c |= ((self.rows[i] >> v) & 1) << i;
        }
        c
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.rows[u] & (1 << v) != 0
    }

    #[inline]
    pub fn out_degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    #[inline]
    pub fn in_degree(&self, v: usize) -> usize {
        self.column(v).count_ones() as usize
    }

    pub fn out_neighbors(&self, v: usize) -> BitIter {
        BitIter(self.rows[v])
    }

    pub fn in_neighbors(&self, v: usize) -> BitIter {
        BitIter(self.column(v))
    }

    pub fn arc_count(&self) -> usize {
        self.rows[..self.n()].iter().map(|r| r.count_ones() as usize).sum()
    }

    /// All arcs in (row, column) order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.arc_count());
        for u in 0..self.n() {
            for v in BitIter(self.rows[u]) {
                out.push((u, v));
            }
        }
        out
    }

    /// An acyclic ordering of the vertices: every arc `(u, v)` satisfies
    /// `pi(u) < pi(v)`. Among available sources the smallest original label
    /// is placed first, so the result is reproducible.
    pub fn acyclic_ordering(&self) -> Permutation {
        let order = kahn_order(self.n(), &self.rows).expect("type invariant: acyclic");
        let mut image = [0u8; N_MAX];
        for (pos, &v) in order[..self.n()].iter().enumerate() {
            image[v as usize] = pos as u8;
        }
        Permutation { n: self.n, image }
    }

    /// Local complementation at `v`: toggles the arc `(u, w)` for every
    /// in-neighbor `u` and out-neighbor `w` of `v`. An involution, and the
    /// result is again acyclic.
    pub fn local_complement(&self, v: usize) -> Result<Digraph> {
        if v >= self.n() {
            return Err(Error::Range { index: v, n: self.n() });
        }
        Ok(self.local_complement_unchecked(v))
    }

    #[inline]
    pub(crate) fn local_complement_unchecked(&self, v: usize) -> Digraph {
        // Toggling N^-(v) x N^+(v) is adding row v to the row of each
        // in-neighbor of v. No in-neighbor of v is an out-neighbor of v
        // (that would be a 2-cycle), so no diagonal bit can be set.
        let mut rows = self.rows;
        let rv = rows[v];
        for u in BitIter(self.column(v)) {
            rows[u] ^= rv;
            debug_assert_eq!(rows[u] & (1 << u), 0);
        }
        Digraph::from_parts_unchecked(self.n(), rows)
    }

    /// Slide of `w` along `v`: replaces `N^+(w)` by `N^+(w) Δ N^+(v)`.
    /// Requires `v != w` and identical in-neighbor sets. An involution.
    pub fn slide(&self, v: usize, w: usize) -> Result<Digraph> {
        let n = self.n();
        if v >= n {
            return Err(Error::Range { index: v, n });
        }
        if w >= n {
            return Err(Error::Range { index: w, n });
        }
        if v == w {
            return Err(Error::Identity);
        }
        if self.column(v) != self.column(w) {
            return Err(Error::Sibling { v, w });
        }
        Ok(self.slide_unchecked(v, w))
    }

    #[inline]
    pub(crate) fn slide_unchecked(&self, v: usize, w: usize) -> Digraph {
        let mut rows = self.rows;
        rows[w] ^= rows[v];
        // v -> w would put v in N^-(w) = N^-(v), contradicting acyclicity,
        // so the XOR can never set the diagonal bit of w.
        debug_assert_eq!(rows[w] & (1 << w), 0);
        Digraph::from_parts_unchecked(self.n(), rows)
    }

    /// Relabels vertices: arc `(u, v)` maps to `(p(u), p(v))`.
    pub fn relabel(&self, p: &Permutation) -> Result<Digraph> {
        if p.n() != self.n() {
            return Err(Error::Size { left: p.n(), right: self.n() });
        }
        let mut rows = [0u16; N_MAX];
        for u in 0..self.n() {
            for v in BitIter(self.rows[u]) {
                rows[p.image(u)] |= 1 << p.image(v);
            }
        }
        Ok(Digraph { n: self.n, rows })
    }

    /// Sibling groups: the partition of the vertex set by equal in-neighbor
    /// sets, each group reported as a bit mask, ordered by smallest member.
    pub fn sibling_group_masks(&self) -> Vec<u16> {
        let n = self.n();
        let mut cols = [0u16; N_MAX];
        for v in 0..n {
            cols[v] = self.column(v);
        }
        let mut seen: u16 = 0;
        let mut groups = Vec::new();
        for v in 0..n {
            if seen & (1 << v) != 0 {
                continue;
            }
            let mut mask = 0u16;
            for w in v..n {
                if cols[w] == cols[v] {
                    mask |= 1 << w;
                }
            }
            seen |= mask;
            groups.push(mask);
        }
        groups
    }
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Digraph(n={}, arcs={:?})", self.n, self.arcs())
    }
}

impl Permutation {
    pub fn identity(n: usize) -> Result<Permutation> {
        Digraph::check_n(n)?;
        let mut image = [0u8; N_MAX];
        for (v, slot) in image.iter_mut().enumerate().take(n) {
            *slot = v as u8;
        }
        Ok(Permutation { n: n as u8, image })
    }

    /// Builds a permutation from the image sequence `v -> image[v]`.
    pub fn from_image(image: &[usize]) -> Result<Permutation> {
        let n = image.len();
        Digraph::check_n(n)?;
        let mut packed = [0u8; N_MAX];
        let mut seen = [false; N_MAX];
        for (v, &t) in image.iter().enumerate() {
            if t >= n {
                return Err(Error::Range { index: t, n });
            }
            if seen[t] {
                return Err(Error::DuplicateIndex(t));
            }
            seen[t] = true;
            packed[v] = t as u8;
        }
        Ok(Permutation { n: n as u8, image: packed })
    }

    pub(crate) fn from_parts_unchecked(n: usize, image: [u8; N_MAX]) -> Permutation {
        Permutation { n: n as u8, image }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn image(&self, v: usize) -> usize {
        self.image[v] as usize
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = [0u8; N_MAX];
        for v in 0..self.n() {
            image[self.image(v)] = v as u8;
        }
        Permutation { n: self.n, image }
    }

    pub fn compose(&self, then: &Permutation) -> Result<Permutation> {
        if self.n != then.n {
            return Err(Error::Size { left: self.n(), right: then.n() });
        }
        let mut image = [0u8; N_MAX];
        for v in 0..self.n() {
            image[v] = then.image[self.image(v)];
        }
        Ok(Permutation { n: self.n, image })
    }
}

impl std::fmt::Debug for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Permutation({:?})", &self.image[..self.n()])
    }
}
