//! Invariants constant on Bott equivalence classes: level sequence, rank,
//! cut-ranks between level sets, sibling-group profile and odd height.
//! These separate all classes up to 4 vertices but not beyond: there is a
//! 5-vertex pair of inequivalent digraphs with identical fingerprints.

use crate::digraph::{BitIter, Digraph, N_MAX};
use crate::error::{Error, Result};
use crate::gf2::IndexSet;
use std::hash::{Hash, Hasher};

/// The layering of a digraph by longest directed path from the roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelStructure {
    level_of: [u8; N_MAX],
    n: usize,
    /// `sequence[k] = |L_k|`, zero-padded out to length n.
    sequence: Vec<usize>,
}

impl LevelStructure {
    /// Level of a vertex: the edge length of a longest path ending there.
    pub fn level_of(&self, v: usize) -> usize {
        self.level_of[v] as usize
    }

    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    /// Number of nonempty levels; levels are contiguous from 0.
    pub fn height(&self) -> usize {
        self.sequence.iter().filter(|&&c| c > 0).count()
    }

    /// Bit mask of the vertices at level `k`.
    pub fn level_mask(&self, k: usize) -> u16 {
        let mut mask = 0u16;
        for v in 0..self.n {
            if self.level_of[v] as usize == k {
                mask |= 1 << v;
            }
        }
        mask
    }
}

/// Sibling-group size multisets, one per nonempty level, sizes descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SiblingProfile {
    per_level: Vec<Vec<usize>>,
}

impl SiblingProfile {
    pub fn per_level(&self) -> &[Vec<usize>] {
        &self.per_level
    }
}

/// Maximum level holding a vertex of odd out-degree; `Infinite` when every
/// out-degree is even.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OddHeight {
    Finite(usize),
    Infinite,
}

/// The bundle of all class invariants, comparable bit-exactly.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub n: usize,
    pub level_sequence: Vec<usize>,
    pub rank: usize,
    /// Indexed by level-subset bit mask over the nonempty levels:
    /// entry `m` is the cut-rank of the union of levels in `m` against the
    /// rest of the vertex set.
    pub levelset_cut_ranks: Vec<usize>,
    /// Cut-rank between consecutive nonempty levels.
    pub consecutive_cut_ranks: Vec<usize>,
    pub sibling_profile: SiblingProfile,
    pub odd_height: OddHeight,
}

impl Fingerprint {
    /// 64-bit digest for bucketing; collisions must be resolved by `Eq`.
    pub fn digest(&self) -> u64 {
        let mut hasher = std::collections::hash_map::DefaultHasher::new();
        self.hash(&mut hasher);
        hasher.finish()
    }
}

/// Longest-path layering by dynamic programming over an acyclic ordering.
pub fn levels(d: &Digraph) -> LevelStructure {
    let n = d.n();
    let order = d.acyclic_ordering();
    let mut by_position = [0u8; N_MAX];
    for v in 0..n {
        by_position[order.image(v)] = v as u8;
    }
    let mut level_of = [0u8; N_MAX];
    for pos in 0..n {
        let v = by_position[pos] as usize;
        let mut lvl = 0;
        for u in d.in_neighbors(v) {
            lvl = lvl.max(level_of[u] + 1);
        }
        level_of[v] = lvl;
    }
    let mut sequence = vec![0usize; n];
    for v in 0..n {
        sequence[level_of[v] as usize] += 1;
    }
    LevelStructure { level_of, n, sequence }
}

fn submatrix_rank(d: &Digraph, rows: u16, cols: u16) -> usize {
    let mut packed: Vec<u16> = Vec::with_capacity(rows.count_ones() as usize);
    for i in BitIter(rows) {
        let mut row = 0u16;
        for (jj, j) in BitIter(cols).enumerate() {
            row |= ((d.row(i) >> j) & 1) << jj;
        }
        packed.push(row);
    }
    let mut rank = 0;
    for col in 0..cols.count_ones() as usize {
        let bit = 1u16 << col;
        let Some(pivot) = (rank..packed.len()).find(|&i| packed[i] & bit != 0) else {
            continue;
        };
        packed.swap(rank, pivot);
        let lead = packed[rank];
        for (i, row) in packed.iter_mut().enumerate() {
            if i != rank && *row & bit != 0 {
                *row ^= lead;
            }
        }
        rank += 1;
    }
    rank
}

/// Cut-rank: the Z2 rank of the X-rows / Y-columns submatrix of the
/// adjacency matrix.
pub fn cut_rank(d: &Digraph, x: &IndexSet, y: &IndexSet) -> Result<usize> {
    let n = d.n();
    let mut xm = 0u16;
    let mut ym = 0u16;
    for &v in x.members() {
        if v >= n {
            return Err(Error::Range { index: v, n });
        }
        xm |= 1 << v;
    }
    for &v in y.members() {
        if v >= n {
            return Err(Error::Range { index: v, n });
        }
        ym |= 1 << v;
    }
    Ok(submatrix_rank(d, xm, ym))
}

fn cut_rank_against_rest(d: &Digraph, x: u16) -> usize {
    let all: u16 = if d.n() == 16 { !0 } else { (1u16 << d.n()) - 1 };
    submatrix_rank(d, x, all & !x)
}

/// Sibling groups per level, reported as size multisets sorted descending.
pub fn sibling_groups(d: &Digraph) -> SiblingProfile {
    let lv = levels(d);
    let mut per_level: Vec<Vec<usize>> = vec![Vec::new(); lv.height()];
    for mask in d.sibling_group_masks() {
        // vertices sharing an in-neighbor set share a level
        let member = mask.trailing_zeros() as usize;
        per_level[lv.level_of(member)].push(mask.count_ones() as usize);
    }
    for sizes in &mut per_level {
        sizes.sort_unstable_by(|a, b| b.cmp(a));
    }
    SiblingProfile { per_level }
}

pub fn odd_height(d: &Digraph) -> OddHeight {
    let lv = levels(d);
    let mut height = None;
    for v in 0..d.n() {
        if !d.out_degree(v).is_multiple_of(2) {
            let l = lv.level_of(v);
            height = Some(height.map_or(l, |h: usize| h.max(l)));
        }
    }
    match height {
        Some(k) => OddHeight::Finite(k),
        None => OddHeight::Infinite,
    }
}

/// The associated manifold is orientable iff every out-degree is even.
pub fn is_orientable(d: &Digraph) -> bool {
    (0..d.n()).all(|v| d.out_degree(v).is_multiple_of(2))
}

/// The associated manifold is symplectic iff every sibling group has even
/// cardinality.
pub fn is_symplectic(d: &Digraph) -> bool {
    d.sibling_group_masks().iter().all(|m| m.count_ones() % 2 == 0)
}

/// Computes the full invariant bundle of a digraph.
pub fn fingerprint(d: &Digraph) -> Fingerprint {
    let lv = levels(d);
    let h = lv.height();
    let level_masks: Vec<u16> = (0..h).map(|k| lv.level_mask(k)).collect();

    let mut levelset_cut_ranks = Vec::with_capacity(1 << h);
    for subset in 0u32..(1 << h) {
        let mut x = 0u16;
        for k in 0..h {
            if subset & (1 << k) != 0 {
                x |= level_masks[k];
            }
        }
        levelset_cut_ranks.push(cut_rank_against_rest(d, x));
    }

    let consecutive_cut_ranks = (0..h.saturating_sub(1))
        .map(|k| submatrix_rank(d, level_masks[k], level_masks[k + 1]))
        .collect();

    Fingerprint {
        n: d.n(),
        level_sequence: lv.sequence().to_vec(),
        rank: crate::gf2::adjacency_matrix(d).rank(),
        levelset_cut_ranks,
        consecutive_cut_ranks,
        sibling_profile: sibling_groups(d),
        odd_height: odd_height(d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Digraph {
        Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn collision_pair_left() -> Digraph {
        Digraph::from_arcs(5, [(0, 1), (0, 4), (2, 3), (3, 4)]).unwrap()
    }

    fn collision_pair_right() -> Digraph {
        Digraph::from_arcs(5, [(0, 1), (2, 1), (2, 3), (3, 4)]).unwrap()
    }

    #[test]
    fn levels_of_path() {
        let lv = levels(&p3());
        assert_eq!(lv.sequence(), &[1, 1, 1]);
        assert_eq!((lv.level_of(0), lv.level_of(1), lv.level_of(2)), (0, 1, 2));
    }

    #[test]
    fn levels_edgeless_all_roots() {
        let lv = levels(&Digraph::edgeless(3).unwrap());
        assert_eq!(lv.sequence(), &[3, 0, 0]);
        assert_eq!(lv.height(), 1);
    }

    #[test]
    fn levels_longest_path_wins() {
        let lv = levels(&collision_pair_left());
        assert_eq!(lv.sequence(), &[2, 2, 1, 0, 0]);
        assert_eq!(lv.level_of(4), 2);
    }

    #[test]
    fn level_soundness() {
        for d in [collision_pair_left(), collision_pair_right(), p3()] {
            let lv = levels(&d);
            for (u, v) in d.arcs() {
                assert!(lv.level_of(u) < lv.level_of(v));
            }
        }
    }

    #[test]
    fn cut_rank_examples() {
        let x = IndexSet::new(vec![0]).unwrap();
        let y = IndexSet::new(vec![1, 2]).unwrap();
        assert_eq!(cut_rank(&p3(), &x, &y).unwrap(), 1);

        let z = Digraph::edgeless(3).unwrap();
        assert_eq!(cut_rank(&z, &x, &y).unwrap(), 0);

        let t3 = Digraph::from_arcs(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let x01 = IndexSet::new(vec![0, 1]).unwrap();
        let y2 = IndexSet::new(vec![2]).unwrap();
        assert_eq!(cut_rank(&t3, &x01, &y2).unwrap(), 1);

        let bad = IndexSet::new(vec![7]).unwrap();
        assert!(matches!(cut_rank(&p3(), &bad, &y), Err(Error::Range { .. })));
    }

    #[test]
    fn sibling_profile_examples() {
        let profile = sibling_groups(&Digraph::edgeless(4).unwrap());
        assert_eq!(profile.per_level(), &[vec![4]]);

        let out_star = Digraph::from_arcs(3, [(0, 1), (0, 2)]).unwrap();
        assert_eq!(sibling_groups(&out_star).per_level(), &[vec![1], vec![2]]);

        let d = Digraph::from_arcs(4, [(0, 1), (0, 2), (1, 3)]).unwrap();
        assert_eq!(sibling_groups(&d).per_level(), &[vec![1], vec![2], vec![1]]);
    }

    #[test]
    fn odd_height_examples() {
        assert_eq!(odd_height(&Digraph::edgeless(3).unwrap()), OddHeight::Infinite);
        assert_eq!(odd_height(&Digraph::from_arcs(2, [(0, 1)]).unwrap()), OddHeight::Finite(0));
        assert_eq!(odd_height(&p3()), OddHeight::Finite(1));
    }

    #[test]
    fn orientability() {
        assert!(is_orientable(&Digraph::edgeless(5).unwrap()));
        assert!(!is_orientable(&Digraph::from_arcs(2, [(0, 1)]).unwrap()));
        assert!(is_orientable(&Digraph::from_arcs(3, [(0, 1), (0, 2)]).unwrap()));
    }

    #[test]
    fn symplecticness() {
        assert!(is_symplectic(&Digraph::edgeless(2).unwrap()));
        assert!(!is_symplectic(&Digraph::edgeless(3).unwrap()));
        assert!(!is_symplectic(&Digraph::from_arcs(4, [(0, 1), (0, 2), (1, 3)]).unwrap()));
    }

    #[test]
    fn fingerprint_of_edgeless_pair() {
        let fp = fingerprint(&Digraph::edgeless(2).unwrap());
        assert_eq!(fp.level_sequence, vec![2, 0]);
        assert_eq!(fp.rank, 0);
        assert_eq!(fp.levelset_cut_ranks, vec![0, 0]);
        assert!(fp.consecutive_cut_ranks.is_empty());
        assert_eq!(fp.sibling_profile.per_level(), &[vec![2]]);
        assert_eq!(fp.odd_height, OddHeight::Infinite);
    }

    #[test]
    fn fingerprint_of_path() {
        let fp = fingerprint(&p3());
        assert_eq!(fp.level_sequence, vec![1, 1, 1]);
        assert_eq!(fp.rank, 2);
        assert_eq!(fp.consecutive_cut_ranks, vec![1, 1]);
        assert_eq!(fp.sibling_profile.per_level(), &[vec![1], vec![1], vec![1]]);
        assert_eq!(fp.odd_height, OddHeight::Finite(1));
    }

    #[test]
    fn inequivalent_five_vertex_pair_has_identical_fingerprints() {
        let left = fingerprint(&collision_pair_left());
        let right = fingerprint(&collision_pair_right());
        assert_eq!(left, right);
        assert_eq!(left.digest(), right.digest());
    }

    #[test]
    fn fingerprint_constant_under_moves() {
        let d = Digraph::from_arcs(4, [(0, 1), (0, 2), (1, 3)]).unwrap();
        let base = fingerprint(&d);
        assert_eq!(fingerprint(&d.local_complement(1).unwrap()), base);
        assert_eq!(fingerprint(&d.slide(1, 2).unwrap()), base);
        let p = crate::digraph::Permutation::from_image(&[2, 0, 3, 1]).unwrap();
        assert_eq!(fingerprint(&d.relabel(&p).unwrap()), base);
    }
}
