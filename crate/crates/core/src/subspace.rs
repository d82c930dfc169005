//! Projective subspaces of `P^N` and their lattice operations.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{parse_scalar, scalar_to_string, Matrix, Scalar};
use crate::sample::Sampler;

/// Projective dimension. The empty subspace has dimension `-1`.
pub type Dim = i64;

/// A linear subspace of `P^N`, stored as the reduced row-echelon basis of
/// its affine cone in `Q^{N+1}`.
///
/// The basis is canonical, so structural equality is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
}

impl Subspace {
    /// Span of the rows of `spanning`, which need not be independent.
    pub fn span(ambient: usize, spanning: &Matrix) -> Self {
        assert_eq!(
            spanning.cols(),
            ambient + 1,
            "spanning vectors must have N+1 coordinates"
        );
        let (basis, _) = spanning.rref();
        Subspace { ambient, basis }
    }

    pub fn span_i64(ambient: usize, rows: &[Vec<i64>]) -> Self {
        Self::span(ambient, &Matrix::from_i64_rows(ambient + 1, rows))
    }

    pub fn empty(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zeros(0, ambient + 1),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::identity(ambient + 1),
        }
    }

    /// The coordinate subspace spanned by the standard points `e_i`, `i` in `coords`.
    pub fn coordinate(ambient: usize, coords: &[usize]) -> Self {
        let rows: Vec<Vec<i64>> = coords
            .iter()
            .map(|&i| {
                let mut r = vec![0; ambient + 1];
                r[i] = 1;
                r
            })
            .collect();
        Self::span_i64(ambient, &rows)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> Dim {
        self.basis.rows() as Dim - 1
    }

    pub fn is_empty(&self) -> bool {
        self.basis.rows() == 0
    }

    pub fn is_full(&self) -> bool {
        self.basis.rows() == self.ambient + 1
    }

    /// Canonical basis, one row per spanning point.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Linear forms vanishing on the subspace, as rows.
    pub fn annihilator(&self) -> Matrix {
        if self.is_empty() {
            return Matrix::identity(self.ambient + 1);
        }
        self.basis.kernel()
    }

    fn check_ambient(&self, other: &Subspace) {
        assert_eq!(
            self.ambient, other.ambient,
            "subspaces live in different ambient spaces"
        );
    }

    /// `V ∨ W`: the smallest subspace containing both.
    pub fn join(&self, other: &Subspace) -> Subspace {
        self.check_ambient(other);
        if other.is_empty() {
            return self.clone();
        }
        if self.is_empty() {
            return other.clone();
        }
        Subspace::span(self.ambient, &self.basis.vstack(&other.basis))
    }

    /// `V ∧ W`: the intersection.
    pub fn meet(&self, other: &Subspace) -> Subspace {
        self.check_ambient(other);
        if self.is_empty() || other.is_empty() {
            return Subspace::empty(self.ambient);
        }
        if self.is_full() {
            return other.clone();
        }
        if other.is_full() {
            return self.clone();
        }
        let forms = self.annihilator().vstack(&other.annihilator());
        Subspace::span(self.ambient, &forms.kernel())
    }

    /// `W ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        self.check_ambient(other);
        if other.is_empty() {
            return true;
        }
        if other.dim() > self.dim() {
            return false;
        }
        self.basis.vstack(&other.basis).rank() == self.basis.rows()
    }

    /// True when the two subspaces share no point.
    pub fn is_disjoint(&self, other: &Subspace) -> bool {
        self.meet(other).is_empty()
    }

    /// A subspace of dimension `N - dim V - 1` disjoint from `self`,
    /// chosen at random but reproducibly from `seed`. The full space has
    /// the empty complement.
    pub fn dual_complement(&self, seed: u64) -> Subspace {
        let n = self.ambient;
        if self.is_full() {
            return Subspace::empty(n);
        }
        let target = n as Dim - self.dim() - 1;
        let mut sampler = Sampler::new(seed, 0);
        for _ in 0..64 {
            let cand = sampler.subspace(n, target);
            if self.join(&cand).is_full() {
                return cand;
            }
        }
        // Coordinate complement on the non-pivot columns always works.
        let (_, pivots) = self.basis.rref();
        let free: Vec<usize> = (0..=n).filter(|c| !pivots.contains(c)).collect();
        Subspace::coordinate(n, &free)
    }

    /// Image of the spanning points under `x ↦ m·x`, as a subspace of
    /// `P^{rows(m)-1}`.
    pub fn map(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient + 1, "map shape mismatch");
        let target = m.rows() - 1;
        if self.is_empty() {
            return Subspace::empty(target);
        }
        Subspace::span(target, &self.basis.mul(&m.transpose()))
    }
}

/// Intersection of a nonempty list of subspaces.
pub fn meet_many(spaces: &[Subspace]) -> Subspace {
    let (first, rest) = spaces
        .split_first()
        .expect("meet_many needs at least one subspace");
    rest.iter().fold(first.clone(), |acc, s| {
        if acc.is_empty() {
            acc
        } else {
            acc.meet(s)
        }
    })
}

/// Join of a list of subspaces in `P^ambient`; empty list gives `∅`.
pub fn join_many(ambient: usize, spaces: &[Subspace]) -> Subspace {
    spaces
        .iter()
        .fold(Subspace::empty(ambient), |acc, s| acc.join(s))
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in P^{}, {:?})", self.dim(), self.ambient, self.basis)
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    #[serde(rename = "N")]
    ambient: usize,
    basis: Vec<Vec<String>>,
}

/// Serializes a matrix as rows of `"a/b"` strings.
pub(crate) fn matrix_to_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.row_iter()
        .map(|r| r.iter().map(scalar_to_string).collect())
        .collect()
}

/// Parses rows of rational strings, checking every row has `cols` entries.
pub(crate) fn matrix_from_strings(
    rows: &[Vec<String>],
    cols: usize,
    field: &str,
) -> Result<Matrix, String> {
    let mut out: Vec<Vec<Scalar>> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(format!(
                "{field}[{i}]: expected {cols} entries, found {}",
                row.len()
            ));
        }
        let mut parsed = Vec::with_capacity(cols);
        for (j, s) in row.iter().enumerate() {
            let v = parse_scalar(s)
                .ok_or_else(|| format!("{field}[{i}][{j}]: invalid rational {s:?}"))?;
            parsed.push(v);
        }
        out.push(parsed);
    }
    Ok(Matrix::from_rows(cols, out))
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SubspaceRepr {
            ambient: self.ambient,
            basis: matrix_to_strings(&self.basis),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = SubspaceRepr::deserialize(deserializer)?;
        let m = matrix_from_strings(&repr.basis, repr.ambient + 1, "basis")
            .map_err(D::Error::custom)?;
        if m.rank() != m.rows() {
            return Err(D::Error::custom("basis: rows are not linearly independent"));
        }
        Ok(Subspace::span(repr.ambient, &m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::Sampler;

    #[test]
    fn two_points_span_a_line() {
        let p = Subspace::span_i64(2, &[vec![1, 0, 0]]);
        let q = Subspace::span_i64(2, &[vec![0, 1, 1]]);
        assert_eq!(p.join(&q).dim(), 1);
    }

    #[test]
    fn join_with_empty_is_identity() {
        let v = Subspace::span_i64(3, &[vec![1, 2, 3, 4], vec![0, 1, 0, 1]]);
        assert_eq!(v.join(&Subspace::empty(3)), v);
        assert_eq!(Subspace::empty(3).join(&v), v);
    }

    #[test]
    fn random_lines_in_p3() {
        let mut s = Sampler::new(5, 0);
        let a = s.subspace(3, 1);
        let b = s.subspace(3, 1);
        // Oracle: rank of the stacked bases.
        let stacked = a.basis().vstack(b.basis()).rank();
        assert_eq!(stacked, 4);
        assert_eq!(a.join(&b).dim(), 3);
        assert_eq!(a.meet(&b).dim(), -1);
    }

    #[test]
    fn lines_in_the_plane_meet() {
        let a = Subspace::span_i64(2, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Subspace::span_i64(2, &[vec![1, 1, 1], vec![0, 0, 1]]);
        let m = a.meet(&b);
        assert_eq!(m.dim(), 0);
        assert_eq!(m, Subspace::span_i64(2, &[vec![1, 1, 0]]));
        assert_eq!(a.meet(&a), a);
    }

    #[test]
    fn meet_many_common_point() {
        let x = Subspace::span_i64(3, &[vec![1, 1, 1, 1]]);
        let planes: Vec<Subspace> = [
            vec![vec![1, 1, 1, 1], vec![1, 0, 0, 0], vec![0, 1, 0, 0]],
            vec![vec![1, 1, 1, 1], vec![0, 0, 1, 0], vec![0, 0, 0, 1]],
            vec![vec![1, 1, 1, 1], vec![1, 0, 1, 0], vec![0, 2, 0, 1]],
        ]
        .iter()
        .map(|r| Subspace::span_i64(3, r))
        .collect();
        assert!(meet_many(&planes).contains(&x));
        assert_eq!(meet_many(&planes[..1]), planes[0]);
    }

    #[test]
    fn dual_complement_cases() {
        let p = Subspace::span_i64(2, &[vec![1, 2, 3]]);
        let d = p.dual_complement(1);
        assert_eq!(d.dim(), 1);
        assert!(d.is_disjoint(&p));
        assert_eq!(Subspace::empty(4).dual_complement(3), Subspace::full(4));
        assert!(Subspace::full(4).dual_complement(3).is_empty());

        let line = Sampler::new(9, 0).subspace(4, 1);
        let d = line.dual_complement(2);
        assert_eq!(d.dim(), 2);
        assert!(line.meet(&d).is_empty());
        assert_eq!(line.dual_complement(2), d);
    }

    #[test]
    fn containment() {
        let a = Subspace::span_i64(3, &[vec![1, 0, 0, 0]]);
        let b = Subspace::span_i64(3, &[vec![0, 1, 0, 0]]);
        let l = a.join(&b);
        assert!(l.contains(&a) && l.contains(&b));
        assert!(l.contains(&Subspace::empty(3)));
        assert!(!a.contains(&l));
    }

    #[test]
    fn json_round_trip_and_rejects_dependent_rows() {
        let v = Subspace::span_i64(3, &[vec![2, 4, 0, 1], vec![0, 3, 1, 1]]);
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.starts_with("{\"N\":3,\"basis\":[[\"1/1\""));
        let back: Subspace = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);

        let e: Subspace = serde_json::from_str(r#"{"N":2,"basis":[]}"#).unwrap();
        assert!(e.is_empty());
        let bad = serde_json::from_str::<Subspace>(r#"{"N":1,"basis":[["1","2"],["2/1","4"]]}"#);
        assert!(bad.is_err());
        let short = serde_json::from_str::<Subspace>(r#"{"N":2,"basis":[["1","2"]]}"#);
        assert!(short.unwrap_err().to_string().contains("basis[0]"));
    }
}
