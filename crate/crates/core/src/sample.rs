//! Seeded generic sampling.
//!
//! Genericity over `C` is realized by integer matrices with entries uniform
//! in `[-entry_bound, entry_bound]`. Each `(seed, stream)` pair names an
//! independent ChaCha stream, so parallel trial loops reproduce serial ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::Matrix;
use crate::subspace::{Dim, Subspace};

pub const DEFAULT_ENTRY_BOUND: i64 = 1000;

/// Redraws allowed before a rank or avoidance condition is declared
/// unreachable.
pub const MAX_REDRAWS: usize = 200;

pub struct Sampler {
    rng: ChaCha8Rng,
    entry_bound: i64,
}

impl Sampler {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self::with_bound(seed, stream, DEFAULT_ENTRY_BOUND)
    }

    pub fn with_bound(seed: u64, stream: u64, entry_bound: i64) -> Self {
        assert!(entry_bound >= 2, "entry_bound must be at least 2");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Sampler { rng, entry_bound }
    }

    pub fn entry_bound(&self) -> i64 {
        self.entry_bound
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.gen()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    pub fn entry(&mut self) -> i64 {
        self.rng.gen_range(-self.entry_bound..=self.entry_bound)
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        let data: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| self.entry()).collect())
            .collect();
        Matrix::from_i64_rows(cols, &data)
    }

    /// Integer matrix of full row rank, redrawn until it has one.
    pub fn full_rank_matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        assert!(rows <= cols, "cannot have full row rank with rows > cols");
        loop {
            let m = self.matrix(rows, cols);
            if m.rank() == rows {
                return m;
            }
        }
    }

    /// A random `d`-plane in `P^ambient`; `d = -1` gives `∅`.
    pub fn subspace(&mut self, ambient: usize, d: Dim) -> Subspace {
        assert!(
            (-1..=ambient as Dim).contains(&d),
            "subspace dimension {d} out of range for P^{ambient}"
        );
        if d < 0 {
            return Subspace::empty(ambient);
        }
        Subspace::span(ambient, &self.full_rank_matrix(d as usize + 1, ambient + 1))
    }

    /// A random `d`-plane containing `base`, obtained by extending its basis
    /// with sampled rows.
    pub fn subspace_through(&mut self, base: &Subspace, d: Dim) -> Subspace {
        let ambient = base.ambient();
        assert!(
            base.dim() <= d && d <= ambient as Dim,
            "cannot extend a {}-plane to a {d}-plane in P^{ambient}",
            base.dim()
        );
        let mut cur = base.clone();
        while cur.dim() < d {
            let extra = self.matrix(1, ambient + 1);
            let next = cur.join(&Subspace::span(ambient, &extra));
            if next.dim() > cur.dim() {
                cur = next;
            }
        }
        cur
    }

    /// A random `d`-plane inside `host`.
    pub fn subspace_inside(&mut self, host: &Subspace, d: Dim) -> Subspace {
        assert!(d <= host.dim(), "{d}-plane does not fit in a {}-plane", host.dim());
        if d < 0 {
            return Subspace::empty(host.ambient());
        }
        let rows = host.dim() as usize + 1;
        loop {
            let coeffs = self.matrix(d as usize + 1, rows);
            let spanning = coeffs.mul(host.basis());
            if spanning.rank() == d as usize + 1 {
                return Subspace::span(host.ambient(), &spanning);
            }
        }
    }

    /// A random `d`-plane meeting none of `avoid`, or `None` if
    /// [`MAX_REDRAWS`] draws all collided.
    pub fn subspace_avoiding(
        &mut self,
        ambient: usize,
        d: Dim,
        avoid: &[Subspace],
    ) -> Option<Subspace> {
        (0..MAX_REDRAWS)
            .map(|_| self.subspace(ambient, d))
            .find(|p| avoid.iter().all(|c| c.is_disjoint(p)))
    }
}

/// Samples a `d`-plane in `P^ambient` with entries in `[-entry_bound, entry_bound]`.
/// The result depends only on the arguments.
pub fn sample_subspace(ambient: usize, d: Dim, seed: u64, entry_bound: i64) -> Subspace {
    Sampler::with_bound(seed, 0, entry_bound).subspace(ambient, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_deterministic() {
        assert!(sample_subspace(3, -1, 1, 1000).is_empty());
        let a = sample_subspace(3, 1, 77, 1000);
        let b = sample_subspace(3, 1, 77, 1000);
        assert_eq!(a, b);
        assert_eq!(a.dim(), 1);
        assert_ne!(a, sample_subspace(3, 1, 78, 1000));
    }

    #[test]
    fn streams_are_independent_of_order() {
        let x = Sampler::new(3, 5).subspace(4, 2);
        let mut s = Sampler::new(3, 4);
        let _ = s.subspace(4, 2);
        assert_eq!(Sampler::new(3, 5).subspace(4, 2), x);
    }

    #[test]
    fn generic_lines_in_p3_are_disjoint() {
        let hits = (0..100u64)
            .filter(|&t| {
                let mut s = Sampler::new(2024, t);
                s.subspace(3, 1).is_disjoint(&s.subspace(3, 1))
            })
            .count();
        assert!(hits >= 99, "only {hits}/100 disjoint");
    }

    #[test]
    fn through_and_inside() {
        let mut s = Sampler::new(11, 0);
        let c = s.subspace(5, 1);
        let h = s.subspace_through(&c, 3);
        assert_eq!(h.dim(), 3);
        assert!(h.contains(&c));
        let v = s.subspace_inside(&h, 2);
        assert_eq!(v.dim(), 2);
        assert!(h.contains(&v));
    }

    #[test]
    fn avoiding_gives_up_when_impossible() {
        let mut s = Sampler::new(1, 0);
        // A line always meets a plane in P^3.
        let plane = s.subspace(3, 2);
        assert!(s.subspace_avoiding(3, 1, std::slice::from_ref(&plane)).is_none());
        let pt = s.subspace_avoiding(3, 0, std::slice::from_ref(&plane)).unwrap();
        assert!(pt.is_disjoint(&plane));
    }
}
