//! Tutte and Edmonds matrices over GF(p), p = 2^31 − 1, and the randomized
//! perfect-matching tests built on them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

pub const P: u64 = (1 << 31) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct Fp(u64);

impl Fp {
    pub const ZERO: Fp = Fp(0);
    pub const ONE: Fp = Fp(1);

    pub fn new(x: i64) -> Fp {
        Fp(x.rem_euclid(P as i64) as u64)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let mut base = self;
        let mut acc = Fp::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Fp> {
        (!self.is_zero()).then(|| self.pow(P - 2))
    }

    /// Euler's criterion: zero or a square.
    pub fn is_square(self) -> bool {
        self.is_zero() || self.pow((P - 1) / 2) == Fp::ONE
    }

    pub fn random(rng: &mut impl Rng) -> Fp {
        Fp(rng.gen_range(0..P))
    }
}

impl std::ops::Add for Fp {
    type Output = Fp;
    fn add(self, o: Fp) -> Fp {
        Fp((self.0 + o.0) % P)
    }
}

impl std::ops::Sub for Fp {
    type Output = Fp;
    fn sub(self, o: Fp) -> Fp {
        Fp((self.0 + P - o.0) % P)
    }
}

impl std::ops::Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp((P - self.0) % P)
    }
}

impl std::ops::Mul for Fp {
    type Output = Fp;
    fn mul(self, o: Fp) -> Fp {
        Fp(self.0 * o.0 % P)
    }
}

/// Dense matrix over GF(p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Fp>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![Fp::ZERO; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::NotSquare);
        }
        let data = rows.into_iter().flatten().map(Fp::new).collect();
        Ok(Matrix { rows: r, cols: c, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Fp {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Fp) {
        self.data[i * self.cols + j] = x;
    }

    fn add_at(&mut self, i: usize, j: usize, x: Fp) {
        let k = i * self.cols + j;
        self.data[k] = self.data[k] + x;
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                self.get(i, i).is_zero() && (0..i).all(|j| self.get(i, j) == -self.get(j, i))
            })
    }

    /// Copy with row `i` and/or column `j` removed.
    pub fn minor(&self, row: Option<usize>, col: Option<usize>) -> Result<Matrix> {
        for (idx, bound) in [(row, self.rows), (col, self.cols)] {
            if let Some(x) = idx {
                if x >= bound {
                    return Err(Error::MatrixIndex {
                        row: row.unwrap_or(0),
                        col: col.unwrap_or(0),
                        rows: self.rows,
                        cols: self.cols,
                    });
                }
            }
        }
        let keep_r: Vec<usize> = (0..self.rows).filter(|&r| Some(r) != row).collect();
        let keep_c: Vec<usize> = (0..self.cols).filter(|&c| Some(c) != col).collect();
        let mut m = Matrix::zeros(keep_r.len(), keep_c.len());
        for (a, &r) in keep_r.iter().enumerate() {
            for (b, &c) in keep_c.iter().enumerate() {
                m.set(a, b, self.get(r, c));
            }
        }
        Ok(m)
    }

    /// Gaussian elimination; returns (determinant, rank). The determinant is
    /// zero for non-square matrices.
    pub fn det_rank(&self) -> (Fp, usize) {
        let mut a = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut det = Fp::ONE;
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(p) = (rank..rows).find(|&r| !a[r * cols + c].is_zero()) else {
                det = Fp::ZERO;
                continue;
            };
            if p != rank {
                for k in 0..cols {
                    a.swap(p * cols + k, rank * cols + k);
                }
                det = -det;
            }
            let pivot = a[rank * cols + c];
            det = det * pivot;
            let inv = pivot.inv().unwrap();
            for r in rank + 1..rows {
                let factor = a[r * cols + c] * inv;
                if factor.is_zero() {
                    continue;
                }
                for k in c..cols {
                    let v = a[rank * cols + k];
                    a[r * cols + k] = a[r * cols + k] - factor * v;
                }
            }
            rank += 1;
        }
        if rows != cols || rank < rows {
            det = Fp::ZERO;
        }
        (det, rank)
    }

    pub fn determinant(&self) -> Result<Fp> {
        if self.rows != self.cols {
            return Err(Error::NotSquare);
        }
        Ok(self.det_rank().0)
    }

    pub fn rank(&self) -> usize {
        self.det_rank().1
    }
}

/// Tutte matrix with the given value per edge: for an edge uv with u < v
/// the value is added at (u, v) and subtracted at (v, u); parallel edges
/// accumulate and loops are ignored.
pub fn tutte_matrix(g: &Graph, values: &[Fp]) -> Result<Matrix> {
    if values.len() != g.m() {
        return Err(Error::DimensionMismatch { expected: g.m(), got: values.len() });
    }
    let mut t = Matrix::zeros(g.n(), g.n());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if u == v {
            continue;
        }
        let (a, b) = (u.min(v), u.max(v));
        t.add_at(a, b, values[e]);
        t.add_at(b, a, -values[e]);
    }
    Ok(t)
}

/// Independent uniform values in GF(p), one per edge.
pub fn random_substitution(m: usize, rng: &mut impl Rng) -> Vec<Fp> {
    (0..m).map(|_| Fp::random(rng)).collect()
}

/// Random-substitution stream for `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PmVerdict {
    /// A substitution with non-zero determinant was found (certain).
    HasPerfectMatching { trial: u64, determinant: Fp },
    /// All trials gave zero; wrong with probability at most `error_bound`.
    NoPerfectMatching { trials: u64, error_bound: f64 },
}

impl PmVerdict {
    pub fn has_pm(&self) -> bool {
        matches!(self, PmVerdict::HasPerfectMatching { .. })
    }
}

/// Schwartz–Zippel bound (deg / p)^trials for a polynomial of degree `deg`.
pub fn error_bound(deg: usize, trials: u64) -> f64 {
    (deg as f64 / P as f64).powi(trials as i32)
}

/// Randomized perfect-matching test via det of the Tutte matrix.
pub fn randomized_pm_test(g: &Graph, trials: u64, seed: u64) -> Result<PmVerdict> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    for trial in 0..trials {
        let vals = random_substitution(g.m(), &mut trial_rng(seed, trial));
        let (det, _) = tutte_matrix(g, &vals)?.det_rank();
        if !det.is_zero() {
            return Ok(PmVerdict::HasPerfectMatching { trial, determinant: det });
        }
    }
    Ok(PmVerdict::NoPerfectMatching { trials, error_bound: error_bound(g.n(), trials) })
}

/// Maximum rank of the Tutte matrix over the trials: equals 2ν with high
/// probability.
pub fn tutte_rank_estimate(g: &Graph, trials: u64, seed: u64) -> Result<usize> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let mut best = 0;
    for trial in 0..trials {
        let vals = random_substitution(g.m(), &mut trial_rng(seed, trial));
        best = best.max(tutte_matrix(g, &vals)?.rank());
    }
    Ok(best)
}

/// A bipartition with sides of equal size when one exists; components are
/// flipped independently to balance.
pub fn balanced_bipartition(g: &Graph) -> Result<(Vec<Vertex>, Vec<Vertex>)> {
    let side = g.bipartition().ok_or(Error::NotBipartite)?;
    let all: Vec<Vertex> = (0..g.n()).collect();
    let comps = g.components(&all)?;
    // reachable[k] holds, for each difference |A| − |B| + n, a choice vector
    let n = g.n() as i64;
    let width = (2 * n + 1) as usize;
    let mut choice: Vec<Option<Vec<bool>>> = vec![None; width];
    choice[n as usize] = Some(Vec::new());
    for c in &comps {
        let a = c.iter().filter(|&&v| !side[v]).count() as i64;
        let b = c.len() as i64 - a;
        let mut next: Vec<Option<Vec<bool>>> = vec![None; width];
        for (k, ch) in choice.iter().enumerate() {
            let Some(ch) = ch else { continue };
            for (flip, delta) in [(false, a - b), (true, b - a)] {
                let t = k as i64 + delta;
                if (0..width as i64).contains(&t) && next[t as usize].is_none() {
                    let mut v = ch.clone();
                    v.push(flip);
                    next[t as usize] = Some(v);
                }
            }
        }
        choice = next;
    }
    let flips = choice[n as usize].clone().ok_or(Error::Unbalanced)?;
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut final_side = vec![false; g.n()];
    for (c, &flip) in comps.iter().zip(&flips) {
        for &v in c {
            final_side[v] = side[v] ^ flip;
        }
    }
    for v in 0..g.n() {
        if final_side[v] {
            right.push(v);
        } else {
            left.push(v);
        }
    }
    Ok((left, right))
}

/// Edmonds matrix of a bipartite graph for the sides `left` × `right`; the
/// values of parallel edges accumulate.
pub fn edmonds_matrix(g: &Graph, left: &[Vertex], right: &[Vertex], values: &[Fp]) -> Result<Matrix> {
    if values.len() != g.m() {
        return Err(Error::DimensionMismatch { expected: g.m(), got: values.len() });
    }
    let mut pos = vec![(false, 0usize); g.n()];
    for (i, &v) in left.iter().enumerate() {
        pos[v] = (false, i);
    }
    for (j, &v) in right.iter().enumerate() {
        pos[v] = (true, j);
    }
    let mut a = Matrix::zeros(left.len(), right.len());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let (pu, pv) = (pos[u], pos[v]);
        if pu.0 == pv.0 {
            return Err(Error::NotBipartite);
        }
        let (i, j) = if pu.0 { (pv.1, pu.1) } else { (pu.1, pv.1) };
        a.add_at(i, j, values[e]);
    }
    Ok(a)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdmondsVerdict {
    #[serde(flatten)]
    pub verdict: PmVerdict,
    pub rank_estimate: usize,
}

/// Randomized perfect-matching test for a bipartite graph through its
/// Edmonds matrix.
pub fn edmonds_pm_test(g: &Graph, trials: u64, seed: u64) -> Result<EdmondsVerdict> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let (left, right) = balanced_bipartition(g)?;
    let mut rank_estimate = 0;
    let mut found = None;
    for trial in 0..trials {
        let vals = random_substitution(g.m(), &mut trial_rng(seed, trial));
        let (det, rank) = edmonds_matrix(g, &left, &right, &vals)?.det_rank();
        rank_estimate = rank_estimate.max(rank);
        if found.is_none() && !det.is_zero() {
            found = Some(PmVerdict::HasPerfectMatching { trial, determinant: det });
        }
    }
    let verdict = found.unwrap_or(PmVerdict::NoPerfectMatching {
        trials,
        error_bound: error_bound(left.len(), trials),
    });
    Ok(EdmondsVerdict { verdict, rank_estimate })
}

/// Rank of the Edmonds matrix for any bipartition (sizes may differ); equals
/// ν with high probability.
pub fn edmonds_rank_estimate(g: &Graph, trials: u64, seed: u64) -> Result<usize> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    let side = g.bipartition().ok_or(Error::NotBipartite)?;
    let left: Vec<Vertex> = (0..g.n()).filter(|&v| !side[v]).collect();
    let right: Vec<Vertex> = (0..g.n()).filter(|&v| side[v]).collect();
    let mut best = 0;
    for trial in 0..trials {
        let vals = random_substitution(g.m(), &mut trial_rng(seed, trial));
        best = best.max(edmonds_matrix(g, &left, &right, &vals)?.rank());
    }
    Ok(best)
}

/// If deleting row `i` and column `j` lowers the rank, then deleting the
/// row alone or the column alone lowers it too.
pub fn rank_drop_check(a: &Matrix, i: usize, j: usize) -> Result<bool> {
    if i >= a.rows() || j >= a.cols() {
        return Err(Error::MatrixIndex { row: i, col: j, rows: a.rows(), cols: a.cols() });
    }
    let r = a.rank();
    let both = a.minor(Some(i), Some(j))?.rank();
    if both >= r {
        return Ok(true);
    }
    let row = a.minor(Some(i), None)?.rank();
    let col = a.minor(None, Some(j))?.rank();
    Ok(row < r || col < r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn field_basics() {
        let a = Fp::new(-1);
        assert_eq!(a.value(), P - 1);
        assert_eq!((a * a), Fp::ONE);
        assert_eq!(Fp::new(12345).inv().unwrap() * Fp::new(12345), Fp::ONE);
        assert!(Fp::new(4).is_square());
    }

    #[test]
    fn k2_tutte_det_is_square() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let t = tutte_matrix(&g, &[Fp::new(7)]).unwrap();
        assert!(t.is_skew_symmetric());
        assert_eq!(t.determinant().unwrap(), Fp::new(49));
    }

    #[test]
    fn k3_has_no_pm() {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let v = randomized_pm_test(&g, 3, 0).unwrap();
        assert!(!v.has_pm());
    }

    #[test]
    fn k4_has_pm_and_rank_4() {
        let e = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let g = Graph::new(4, e).unwrap();
        assert!(randomized_pm_test(&g, 3, 1).unwrap().has_pm());
        assert_eq!(tutte_rank_estimate(&g, 3, 1).unwrap(), 4);
    }

    #[test]
    fn edmonds_balances_components() {
        // P3 plus an isolated vertex: balanced but no perfect matching.
        let g = Graph::new(4, vec![(0, 1), (1, 2)]).unwrap();
        let v = edmonds_pm_test(&g, 3, 0).unwrap();
        assert!(!v.verdict.has_pm());
        assert_eq!(v.rank_estimate, 1);
        let c4 = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(edmonds_pm_test(&c4, 3, 0).unwrap().verdict.has_pm());
    }

    #[test]
    fn rank_drop_on_identity() {
        let id = Matrix::from_rows(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert!(rank_drop_check(&id, 0, 0).unwrap());
        assert!(rank_drop_check(&id, 0, 1).unwrap());
        assert!(rank_drop_check(&id, 2, 0).is_err());
    }

    proptest! {
        #[test]
        fn skew_det_is_square(edges in proptest::collection::vec((0usize..6, 0usize..6), 0..12), seed in 0u64..1000) {
            let g = Graph::new(6, edges).unwrap();
            let vals = random_substitution(g.m(), &mut trial_rng(seed, 0));
            let t = tutte_matrix(&g, &vals).unwrap();
            prop_assert!(t.is_skew_symmetric());
            prop_assert!(t.determinant().unwrap().is_square());
            prop_assert_eq!(t.rank() % 2, 0);
        }

        #[test]
        fn rank_drop_holds(rows in proptest::collection::vec(proptest::collection::vec(-2i64..3, 4), 4), i in 0usize..4, j in 0usize..4) {
            let a = Matrix::from_rows(rows).unwrap();
            prop_assert!(rank_drop_check(&a, i, j).unwrap());
        }
    }
}
