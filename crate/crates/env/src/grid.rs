use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

/// A live connection and everything needed to release or re-place it.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveConn {
    pub id: u32,
    pub source: usize,
    pub dest: usize,
    pub bitrate_gbps: f64,
    pub arrival_time: f64,
    pub expiry_time: f64,
    /// Undirected edge ids of the allocated path.
    pub edges: Vec<usize>,
    pub start_fsu: usize,
    pub width: usize,
    pub path_index: usize,
    pub path_km: f64,
    pub path_hops: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Cell {
    conn: u32,
    expiry: f64,
}

const EMPTY: u32 = u32::MAX;

#[derive(PartialEq, Clone, Debug)]
struct TimeKey(f64);
impl Eq for TimeKey {}
impl Ord for TimeKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}
impl PartialOrd for TimeKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Per-edge FSU occupancy with expiry times.
///
/// Occupancy is tracked twice: one bit per (edge, FSU) for fast first-fit
/// window scans, and one cell per (edge, FSU) holding the owning connection
/// and its expiry for observations. A connection occupies the same
/// contiguous block on every edge of its path.
#[derive(Debug, Clone)]
pub struct SpectrumGrid {
    num_edges: usize,
    num_fsu: usize,
    words: usize,
    occ: Vec<u64>,
    cells: Vec<Cell>,
    active: HashMap<u32, ActiveConn>,
    expirations: BinaryHeap<Reverse<(TimeKey, u32)>>,
}

impl SpectrumGrid {
    pub fn new(num_edges: usize, num_fsu: usize) -> Self {
        let words = num_fsu.div_ceil(64);
        SpectrumGrid {
            num_edges,
            num_fsu,
            words,
            occ: vec![0; num_edges * words],
            cells: vec![Cell { conn: EMPTY, expiry: 0.0 }; num_edges * num_fsu],
            active: HashMap::new(),
            expirations: BinaryHeap::new(),
        }
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn num_fsu(&self) -> usize {
        self.num_fsu
    }

    pub fn active_count(&self) -> usize {
        self.active.len()
    }

    pub fn active(&self, id: u32) -> Option<&ActiveConn> {
        self.active.get(&id)
    }

    /// Active connections sorted by id (deterministic order).
    pub fn active_sorted(&self) -> Vec<ActiveConn> {
        let mut v: Vec<ActiveConn> = self.active.values().cloned().collect();
        v.sort_by_key(|c| c.id);
        v
    }

    pub fn is_free(&self, edge: usize, fsu: usize) -> bool {
        self.cells[edge * self.num_fsu + fsu].conn == EMPTY
    }

    pub fn cell(&self, edge: usize, fsu: usize) -> Option<(u32, f64)> {
        let c = self.cells[edge * self.num_fsu + fsu];
        (c.conn != EMPTY).then_some((c.conn, c.expiry))
    }

    pub fn occupied_cells(&self, edge: usize) -> usize {
        let row = &self.occ[edge * self.words..(edge + 1) * self.words];
        row.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn clear(&mut self) {
        self.occ.iter_mut().for_each(|w| *w = 0);
        self.cells.iter_mut().for_each(|c| *c = Cell { conn: EMPTY, expiry: 0.0 });
        self.active.clear();
        self.expirations.clear();
    }

    /// Allocate `conn` at its recorded block. Panics (debug) on double-booking.
    pub fn allocate(&mut self, conn: ActiveConn) {
        debug_assert!(conn.width >= 1);
        debug_assert!(conn.start_fsu + conn.width <= self.num_fsu);
        for &e in &conn.edges {
            for f in conn.start_fsu..conn.start_fsu + conn.width {
                let cell = &mut self.cells[e * self.num_fsu + f];
                debug_assert_eq!(cell.conn, EMPTY, "double booking on edge {e} fsu {f}");
                *cell = Cell { conn: conn.id, expiry: conn.expiry_time };
                self.occ[e * self.words + f / 64] |= 1u64 << (f % 64);
            }
        }
        self.expirations
            .push(Reverse((TimeKey(conn.expiry_time), conn.id)));
        self.active.insert(conn.id, conn);
    }

    fn release(&mut self, id: u32) -> Option<ActiveConn> {
        let conn = self.active.remove(&id)?;
        for &e in &conn.edges {
            for f in conn.start_fsu..conn.start_fsu + conn.width {
                let cell = &mut self.cells[e * self.num_fsu + f];
                debug_assert_eq!(cell.conn, id);
                *cell = Cell { conn: EMPTY, expiry: 0.0 };
                self.occ[e * self.words + f / 64] &= !(1u64 << (f % 64));
            }
        }
        Some(conn)
    }

    /// Release every connection with `expiry_time <= now`; the callback sees
    /// each released connection (metrics hooks). Returns the release count.
    pub fn release_expired(&mut self, now: f64, mut on_release: impl FnMut(&ActiveConn)) -> usize {
        let mut released = 0;
        while let Some(Reverse((TimeKey(t), id))) = self.expirations.peek().cloned() {
            if t > now {
                break;
            }
            self.expirations.pop();
            // stale entries can remain after clear/restore; release() ignores them
            if let Some(conn) = self.release(id) {
                on_release(&conn);
                released += 1;
            }
        }
        released
    }

    /// Bitwise AND of the free masks of `edges`, truncated to `num_fsu`.
    pub fn combined_free_mask(&self, edges: &[usize], out: &mut Vec<u64>) {
        out.clear();
        out.resize(self.words, u64::MAX);
        for &e in edges {
            let row = &self.occ[e * self.words..(e + 1) * self.words];
            for (o, w) in out.iter_mut().zip(row) {
                *o &= !w;
            }
        }
        let tail = self.num_fsu % 64;
        if tail != 0 {
            out[self.words - 1] &= (1u64 << tail) - 1;
        }
    }

    /// In-place transform of a free mask into a window mask: bit `s` set iff
    /// FSUs `[s, s + width)` are all free.
    pub fn window_mask(mask: &mut [u64], width: usize) {
        for _ in 1..width {
            let mut carry = 0u64;
            for w in mask.iter_mut().rev() {
                let shifted = (*w >> 1) | carry;
                carry = *w << 63;
                *w &= shifted;
            }
        }
    }

    /// Smallest start in `[lo, hi]` whose window of `width` FSUs is free on
    /// every edge of the path. The window may extend past `hi` but not past
    /// `num_fsu`.
    pub fn first_fit_start(
        &self,
        edges: &[usize],
        lo: usize,
        hi: usize,
        width: usize,
        scratch: &mut Vec<u64>,
    ) -> Option<usize> {
        if width == 0 || width > self.num_fsu {
            return None;
        }
        self.combined_free_mask(edges, scratch);
        Self::window_mask(scratch, width);
        let hi = hi.min(self.num_fsu - width);
        first_set_in_range(scratch, lo, hi)
    }

    /// FNV-1a over the full spectrum state (bit-exact rollback checks).
    pub fn state_hash(&self) -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        let mut eat = |x: u64| {
            h ^= x;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        };
        for w in &self.occ {
            eat(*w);
        }
        for c in &self.cells {
            eat(c.conn as u64);
            eat(c.expiry.to_bits());
        }
        h
    }
}

/// Index of the first set bit with `lo <= index <= hi`.
pub fn first_set_in_range(mask: &[u64], lo: usize, hi: usize) -> Option<usize> {
    if lo > hi {
        return None;
    }
    let mut word = lo / 64;
    let last_word = hi / 64;
    while word <= last_word && word < mask.len() {
        let mut bits = mask[word];
        if word == lo / 64 {
            bits &= u64::MAX << (lo % 64);
        }
        if word == last_word {
            let top = hi % 64;
            if top < 63 {
                bits &= (1u64 << (top + 1)) - 1;
            }
        }
        if bits != 0 {
            return Some(word * 64 + bits.trailing_zeros() as usize);
        }
        word += 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn conn(id: u32, edges: Vec<usize>, start: usize, width: usize, expiry: f64) -> ActiveConn {
        ActiveConn {
            id,
            source: 0,
            dest: 1,
            bitrate_gbps: 100.0,
            arrival_time: 0.0,
            expiry_time: expiry,
            edges,
            start_fsu: start,
            width,
            path_index: 0,
            path_km: 1.0,
            path_hops: 1,
        }
    }

    #[test]
    fn first_fit_skips_busy_prefix() {
        let mut g = SpectrumGrid::new(1, 4);
        g.allocate(conn(0, vec![0], 0, 2, 1.0));
        let mut scratch = Vec::new();
        assert_eq!(g.first_fit_start(&[0], 0, 3, 2, &mut scratch), Some(2));
    }

    #[test]
    fn first_fit_on_free_grid_returns_lower_edge() {
        let g = SpectrumGrid::new(2, 16);
        let mut scratch = Vec::new();
        assert_eq!(g.first_fit_start(&[0, 1], 4, 7, 3, &mut scratch), Some(4));
    }

    #[test]
    fn first_fit_respects_num_fsu() {
        let g = SpectrumGrid::new(1, 8);
        let mut scratch = Vec::new();
        // window of 4 starting at 6 would overrun the spectrum
        assert_eq!(g.first_fit_start(&[0], 6, 7, 4, &mut scratch), None);
        assert_eq!(g.first_fit_start(&[0], 4, 7, 4, &mut scratch), Some(4));
    }

    #[test]
    fn misaligned_free_blocks_on_two_links_give_none() {
        let mut g = SpectrumGrid::new(2, 6);
        g.allocate(conn(0, vec![0], 0, 2, 1.0)); // edge 0: busy 0..2
        g.allocate(conn(1, vec![1], 3, 3, 1.0)); // edge 1: busy 3..6
        // edge 0 free 2..6, edge 1 free 0..3 -> common free only 2, width 2 fails
        let mut scratch = Vec::new();
        assert_eq!(g.first_fit_start(&[0, 1], 0, 5, 2, &mut scratch), None);
        assert_eq!(g.first_fit_start(&[0, 1], 0, 5, 1, &mut scratch), Some(2));
    }

    #[test]
    fn release_expired_clears_all_edges_atomically() {
        let mut g = SpectrumGrid::new(3, 8);
        g.allocate(conn(7, vec![0, 2], 1, 3, 5.0));
        assert_eq!(g.release_expired(4.999, |_| {}), 0);
        assert_eq!(g.occupied_cells(0), 3);
        assert_eq!(g.release_expired(5.0, |_| {}), 1);
        assert_eq!(g.occupied_cells(0), 0);
        assert_eq!(g.occupied_cells(2), 0);
        assert_eq!(g.active_count(), 0);
    }

    #[test]
    fn simultaneous_expiries_release_together() {
        let mut g = SpectrumGrid::new(1, 8);
        g.allocate(conn(0, vec![0], 0, 1, 2.0));
        g.allocate(conn(1, vec![0], 1, 1, 2.0));
        assert_eq!(g.release_expired(2.0, |_| {}), 2);
    }

    #[test]
    fn rollback_restores_hash() {
        let mut g = SpectrumGrid::new(2, 32);
        g.allocate(conn(0, vec![0, 1], 4, 4, 9.0));
        let snap = g.clone();
        let h = g.state_hash();
        g.allocate(conn(1, vec![0], 10, 2, 3.0));
        g.release_expired(100.0, |_| {});
        assert_ne!(g.state_hash(), h);
        g = snap;
        assert_eq!(g.state_hash(), h);
    }

    #[test]
    fn window_mask_across_word_boundary() {
        let mut g = SpectrumGrid::new(1, 128);
        g.allocate(conn(0, vec![0], 0, 62, 1.0)); // free from 62
        let mut scratch = Vec::new();
        assert_eq!(g.first_fit_start(&[0], 0, 127, 8, &mut scratch), Some(62));
    }
}
