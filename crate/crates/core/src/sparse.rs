//! Exact integer sparse matrices, stored column by column.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Sparse vector with sorted indices and no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec(Vec<(usize, i64)>);

impl SparseVec {
    pub fn zero() -> Self {
        SparseVec(Vec::new())
    }

    pub fn unit(i: usize) -> Self {
        SparseVec(vec![(i, 1)])
    }

    fn from_map(m: BTreeMap<usize, i64>) -> Self {
        SparseVec(m.into_iter().filter(|&(_, v)| v != 0).collect())
    }

    pub fn entries(&self) -> &[(usize, i64)] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0
            .binary_search_by_key(&i, |e| e.0)
            .map_or(0, |p| self.0[p].1)
    }

    pub fn add(&self, other: &SparseVec) -> Result<SparseVec> {
        combine(&self.0, &other.0, 1).map(SparseVec)
    }

    pub fn sub(&self, other: &SparseVec) -> Result<SparseVec> {
        combine(&self.0, &other.0, -1).map(SparseVec)
    }
}

fn combine(a: &[(usize, i64)], b: &[(usize, i64)], sign: i64) -> Result<Vec<(usize, i64)>> {
    let mut m: BTreeMap<usize, i64> = a.iter().copied().collect();
    for &(i, v) in b {
        let e = m.entry(i).or_insert(0);
        *e = e
            .checked_add(v.checked_mul(sign).ok_or(Error::Overflow("sparse add"))?)
            .ok_or(Error::Overflow("sparse add"))?;
    }
    Ok(SparseVec::from_map(m).0)
}

/// Square integer matrix. Entries are exact; zeros are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseOp {
    dim: usize,
    cols: Vec<Vec<(usize, i64)>>,
}

impl SparseOp {
    pub fn zeros(dim: usize) -> Self {
        SparseOp {
            dim,
            cols: vec![Vec::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        SparseOp {
            dim,
            cols: (0..dim).map(|j| vec![(j, 1)]).collect(),
        }
    }

    /// Sums duplicate `(row, col)` entries and drops zeros.
    pub fn from_entries(
        dim: usize,
        entries: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Result<Self> {
        let mut cols: Vec<BTreeMap<usize, i64>> = vec![BTreeMap::new(); dim];
        for (r, c, v) in entries {
            assert!(
                r < dim && c < dim,
                "entry ({r},{c}) outside dimension {dim}"
            );
            let e = cols[c].entry(r).or_insert(0);
            *e = e.checked_add(v).ok_or(Error::Overflow("from_entries"))?;
        }
        Ok(SparseOp {
            dim,
            cols: cols.into_iter().map(|m| SparseVec::from_map(m).0).collect(),
        })
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal_of(values: &[i64]) -> Self {
        SparseOp {
            dim: values.len(),
            cols: values
                .iter()
                .enumerate()
                .map(|(j, &v)| if v == 0 { Vec::new() } else { vec![(j, v)] })
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn col(&self, j: usize) -> SparseVec {
        SparseVec(self.cols[j].clone())
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.cols[c]
            .binary_search_by_key(&r, |e| e.0)
            .map_or(0, |p| self.cols[c][p].1)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    /// `(row, col, value)` in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r, c, v)))
    }

    pub fn apply(&self, x: &SparseVec) -> Result<SparseVec> {
        let mut m: BTreeMap<usize, i64> = BTreeMap::new();
        for &(k, xv) in x.entries() {
            for &(r, v) in &self.cols[k] {
                let p = v.checked_mul(xv).ok_or(Error::Overflow("apply"))?;
                let e = m.entry(r).or_insert(0);
                *e = e.checked_add(p).ok_or(Error::Overflow("apply"))?;
            }
        }
        Ok(SparseVec::from_map(m))
    }

    pub fn mul(&self, other: &SparseOp) -> Result<SparseOp> {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let cols = (0..self.dim)
            .map(|j| self.apply(&other.col(j)).map(|v| v.0))
            .collect::<Result<_>>()?;
        Ok(SparseOp {
            dim: self.dim,
            cols,
        })
    }

    pub fn add(&self, other: &SparseOp) -> Result<SparseOp> {
        self.zip(other, 1)
    }

    pub fn sub(&self, other: &SparseOp) -> Result<SparseOp> {
        self.zip(other, -1)
    }

    fn zip(&self, other: &SparseOp, sign: i64) -> Result<SparseOp> {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| combine(a, b, sign))
            .collect::<Result<_>>()?;
        Ok(SparseOp {
            dim: self.dim,
            cols,
        })
    }

    /// Transpose; entries are real, so this is the adjoint.
    pub fn adjoint(&self) -> SparseOp {
        let mut cols = vec![Vec::new(); self.dim];
        for (r, c, v) in self.entries() {
            cols[r].push((c, v));
        }
        SparseOp {
            dim: self.dim,
            cols,
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.cols
            .iter()
            .enumerate()
            .all(|(j, col)| col.iter().all(|&(r, _)| r == j))
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.dim).map(|j| self.get(j, j)).collect()
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> Result<usize> {
        // Fast path: at most one nonzero per row and per column.
        let mut row_used = vec![false; self.dim];
        let monomial = self.cols.iter().all(|c| c.len() <= 1)
            && self
                .entries()
                .all(|(r, _, _)| !std::mem::replace(&mut row_used[r], true));
        if monomial {
            return Ok(self.nnz());
        }
        let rows: Vec<usize> = {
            let mut r: Vec<usize> = self.entries().map(|e| e.0).collect();
            r.sort_unstable();
            r.dedup();
            r
        };
        let cols: Vec<usize> = (0..self.dim)
            .filter(|&c| !self.cols[c].is_empty())
            .collect();
        let mut m: Vec<Vec<i128>> = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| self.get(r, c) as i128).collect())
            .collect();
        bareiss_rank(&mut m)
    }

    /// Coordinate text, one `row col value` line per entry, row-major.
    pub fn to_coordinate_text(&self) -> String {
        let mut e: Vec<_> = self.entries().collect();
        e.sort_unstable();
        let mut out = String::new();
        for (r, c, v) in e {
            let _ = writeln!(out, "{r} {c} {v}");
        }
        out
    }
}

/// Fraction-free elimination; exact for integer input.
fn bareiss_rank(m: &mut [Vec<i128>]) -> Result<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev: i128 = 1;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let a = m[rank][c].checked_mul(m[r][k]);
                let b = m[r][c].checked_mul(m[rank][k]);
                let v = match (a, b) {
                    (Some(a), Some(b)) => a.checked_sub(b).ok_or(Error::Overflow("rank"))?,
                    _ => return Err(Error::Overflow("rank")),
                };
                m[r][k] = v / prev;
            }
            m[r][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Ok(rank)
}
