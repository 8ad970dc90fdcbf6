//! Uniform hash-grid over point sets in sup-norm geometry, shared by the
//! measure estimators, the adjacency-graph oracle, and the Hausdorff
//! machinery. Exactness of queries never depends on the cell size.

use std::collections::HashMap;

/// Points beyond this dimension fall back to brute-force paths.
pub const MAX_GRID_DIM: usize = 8;

type Key = [i32; MAX_GRID_DIM];

pub struct PointGrid {
    dim: usize,
    cell: f64,
    data: Vec<f64>,
    map: HashMap<Key, Vec<u32>>,
}

fn key_of(p: &[f64], cell: f64) -> Key {
    let mut k = [0i32; MAX_GRID_DIM];
    for (j, &x) in p.iter().enumerate() {
        k[j] = (x / cell).floor() as i32;
    }
    k
}

impl PointGrid {
    /// Builds a grid over `count` points stored flat in `data`. `cell`
    /// must be positive and finite.
    pub fn build(data: Vec<f64>, dim: usize, cell: f64) -> Self {
        assert!(dim >= 1 && dim <= MAX_GRID_DIM, "grid supports 1..=8 dims");
        assert!(cell.is_finite() && cell > 0.0, "bad cell size");
        let mut map: HashMap<Key, Vec<u32>> = HashMap::new();
        for (i, p) in data.chunks(dim).enumerate() {
            map.entry(key_of(p, cell)).or_default().push(i as u32);
        }
        PointGrid {
            dim,
            cell,
            data,
            map,
        }
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    fn sup_dist(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut best = 0.0f64;
        for j in 0..self.dim {
            let d = (a[j] - b[j]).abs();
            if d > best {
                best = d;
            }
        }
        best
    }

    /// Visits every stored point whose grid cell intersects the box
    /// `[lo, hi]` (componentwise).
    pub fn for_each_in_box(&self, lo: &[f64], hi: &[f64], mut f: impl FnMut(u32, &[f64])) {
        self.search_box(lo, hi, |i, p| {
            f(i, p);
            false
        });
    }

    /// Walks the box like [`for_each_in_box`] but stops early when the
    /// predicate returns true; returns whether it did.
    pub fn search_box(&self, lo: &[f64], hi: &[f64], mut pred: impl FnMut(u32, &[f64]) -> bool) -> bool {
        let mut lo_k = [0i32; MAX_GRID_DIM];
        let mut hi_k = [0i32; MAX_GRID_DIM];
        for j in 0..self.dim {
            lo_k[j] = (lo[j] / self.cell).floor() as i32;
            hi_k[j] = (hi[j] / self.cell).floor() as i32;
        }
        let mut cur = lo_k;
        loop {
            if let Some(bucket) = self.map.get(&cur) {
                for &i in bucket {
                    if pred(i, self.point(i as usize)) {
                        return true;
                    }
                }
            }
            // odometer over the cell box
            let mut j = 0;
            loop {
                if j == self.dim {
                    return false;
                }
                cur[j] += 1;
                if cur[j] <= hi_k[j] {
                    break;
                }
                cur[j] = lo_k[j];
                j += 1;
            }
        }
    }

    /// True if some stored point lies within sup-distance `r` of `q`.
    pub fn any_within(&self, q: &[f64], r: f64) -> bool {
        let mut lo = [0.0f64; MAX_GRID_DIM];
        let mut hi = [0.0f64; MAX_GRID_DIM];
        for j in 0..self.dim {
            lo[j] = q[j] - r;
            hi[j] = q[j] + r;
        }
        self.search_box(&lo[..self.dim], &hi[..self.dim], |_, p| {
            self.sup_dist(q, p) <= r
        })
    }

    /// Exact sup-norm nearest-neighbour distance from `q` to the stored
    /// set, by expanding ring search: a cell in Chebyshev ring `k` cannot
    /// hold a point closer than `(k-1) * cell`, so the scan stops as soon
    /// as that bound passes the best distance found.
    pub fn nearest_dist(&self, q: &[f64]) -> f64 {
        assert!(!self.is_empty(), "nearest_dist on empty grid");
        let center = key_of(q, self.cell);
        let mut best = f64::INFINITY;
        let mut ring = 0i32;
        loop {
            if best.is_finite() && ((ring - 1).max(0) as f64) * self.cell > best {
                return best;
            }
            let mut visited_any = false;
            self.for_each_ring_cell(&center, ring, |bucket| {
                visited_any = true;
                for &i in bucket {
                    let d = self.sup_dist(q, self.point(i as usize));
                    if d < best {
                        best = d;
                    }
                }
            });
            // Termination safeguard: once the ring is entirely past the
            // data's bounding cells the map lookups all miss; the bound
            // check above fires as soon as `best` is finite.
            let _ = visited_any;
            ring += 1;
        }
    }

    fn for_each_ring_cell(&self, center: &Key, ring: i32, mut f: impl FnMut(&Vec<u32>)) {
        if ring == 0 {
            if let Some(bucket) = self.map.get(center) {
                f(bucket);
            }
            return;
        }
        // all cells with Chebyshev distance exactly `ring`
        let d = self.dim;
        let mut offset = vec![-ring; d];
        'outer: loop {
            if offset.iter().any(|&o| o.abs() == ring) {
                let mut key = *center;
                for j in 0..d {
                    key[j] += offset[j];
                }
                if let Some(bucket) = self.map.get(&key) {
                    f(bucket);
                }
            }
            let mut j = 0;
            loop {
                if j == d {
                    break 'outer;
                }
                offset[j] += 1;
                if offset[j] <= ring {
                    break;
                }
                offset[j] = -ring;
                j += 1;
            }
        }
    }
}

/// Union-find with path halving.
pub struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    pub fn find(&mut self, mut i: u32) -> u32 {
        while self.parent[i as usize] != i {
            let gp = self.parent[self.parent[i as usize] as usize];
            self.parent[i as usize] = gp;
            i = gp;
        }
        i
    }

    pub fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra as usize] = rb;
        }
    }

    pub fn component_count(&mut self) -> usize {
        let n = self.parent.len();
        (0..n as u32).filter(|&i| self.find(i) == i).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_dist_matches_brute_force() {
        let mut data = Vec::new();
        let mut state = 88172645463325252u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..400 {
            data.push(next() * 4.0 - 2.0);
            data.push(next() * 4.0 - 2.0);
        }
        let grid = PointGrid::build(data.clone(), 2, 0.3);
        for _ in 0..200 {
            let q = [next() * 6.0 - 3.0, next() * 6.0 - 3.0];
            let brute = data
                .chunks(2)
                .map(|p| (p[0] - q[0]).abs().max((p[1] - q[1]).abs()))
                .fold(f64::INFINITY, f64::min);
            assert_eq!(grid.nearest_dist(&q), brute);
            assert_eq!(grid.any_within(&q, brute), true);
            assert_eq!(grid.any_within(&q, brute * 0.999999), brute == 0.0);
        }
    }

    #[test]
    fn union_find_components() {
        let mut uf = UnionFind::new(5);
        uf.union(0, 1);
        uf.union(3, 4);
        assert_eq!(uf.component_count(), 3);
        uf.union(1, 3);
        assert_eq!(uf.component_count(), 2);
    }
}
