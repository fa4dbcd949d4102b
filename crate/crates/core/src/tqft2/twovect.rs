//! Kapranov-Voevodsky 2-vector spaces: matrices of free modules and matrices
//! of linear maps between them.

use crate::error::{Error, Result};
use crate::scalar::{max_abs, Scalar};
use nalgebra::DMatrix;

/// A free module given by its labeled basis.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FreeModule {
    pub basis: Vec<String>,
}

impl FreeModule {
    pub fn new(basis: Vec<String>) -> Self {
        FreeModule { basis }
    }

    pub fn ground() -> Self {
        FreeModule::new(vec!["1".into()])
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<FreeModule>>,
}

impl TwoMatrix {
    pub fn identity(n: usize) -> Self {
        let entries = (0..n)
            .map(|h| {
                (0..n)
                    .map(|j| if h == j { FreeModule::ground() } else { FreeModule::default() })
                    .collect()
            })
            .collect();
        TwoMatrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn dims(&self) -> Vec<Vec<usize>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(FreeModule::dim).collect())
            .collect()
    }
}

/// Entry `(h, j)` is `⊕_i A[h][i] ⊗ B[i][j]`; basis vectors are ordered by `i`,
/// then the `A` label, then the `B` label.
pub fn twomatrix_multiply(a: &TwoMatrix, b: &TwoMatrix) -> Result<TwoMatrix> {
    if a.cols != b.rows {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let entries = (0..a.rows)
        .map(|h| {
            (0..b.cols)
                .map(|j| {
                    let mut basis = Vec::new();
                    for i in 0..a.cols {
                        for x in &a.entries[h][i].basis {
                            for y in &b.entries[i][j].basis {
                                basis.push(format!("{i}:{x}|{y}"));
                            }
                        }
                    }
                    FreeModule::new(basis)
                })
                .collect()
        })
        .collect();
    Ok(TwoMatrix {
        rows: a.rows,
        cols: b.cols,
        entries,
    })
}

/// A 2-morphism: one linear map per entry, `maps[h][j]` of shape
/// `target dim x source dim`.
#[derive(Clone, Debug)]
pub struct TwoHom {
    pub source: TwoMatrix,
    pub target: TwoMatrix,
    pub maps: Vec<Vec<DMatrix<Scalar>>>,
}

impl TwoHom {
    pub fn new(source: TwoMatrix, target: TwoMatrix, maps: Vec<Vec<DMatrix<Scalar>>>) -> Result<Self> {
        if source.rows != target.rows || source.cols != target.cols || maps.len() != source.rows {
            return Err(Error::ShapeMismatch("2-morphism grid does not fit".into()));
        }
        for (h, row) in maps.iter().enumerate() {
            if row.len() != source.cols {
                return Err(Error::ShapeMismatch(format!("row {h} has {} maps", row.len())));
            }
            for (j, m) in row.iter().enumerate() {
                let want = (target.entries[h][j].dim(), source.entries[h][j].dim());
                if m.shape() != want {
                    return Err(Error::ShapeMismatch(format!(
                        "entry ({h},{j}) is {:?}, expected {want:?}",
                        m.shape()
                    )));
                }
            }
        }
        Ok(TwoHom {
            source,
            target,
            maps,
        })
    }

    pub fn identity(m: &TwoMatrix) -> Self {
        let maps = m
            .entries
            .iter()
            .map(|r| r.iter().map(|e| DMatrix::identity(e.dim(), e.dim())).collect())
            .collect();
        TwoHom {
            source: m.clone(),
            target: m.clone(),
            maps,
        }
    }

    pub fn scale(&self, k: Scalar) -> Self {
        let maps = self
            .maps
            .iter()
            .map(|r| r.iter().map(|m| m * k).collect())
            .collect();
        TwoHom {
            source: self.source.clone(),
            target: self.target.clone(),
            maps,
        }
    }

    /// Largest entrywise difference, relative to the larger of the two norms when that exceeds 1.
    pub fn max_diff(&self, other: &TwoHom) -> f64 {
        if self.maps.len() != other.maps.len() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for (r1, r2) in self.maps.iter().zip(&other.maps) {
            if r1.len() != r2.len() {
                return f64::INFINITY;
            }
            for (a, b) in r1.iter().zip(r2) {
                if a.shape() != b.shape() {
                    return f64::INFINITY;
                }
                let scale = max_abs(a).max(max_abs(b)).max(1.0);
                worst = worst.max(max_abs(&(a - b)) / scale);
            }
        }
        worst
    }
}

/// Vertical composite: `first` then `second`, entrywise `second ∘ first`.
pub fn vertical_compose(first: &TwoHom, second: &TwoHom) -> Result<TwoHom> {
    if first.target.dims() != second.source.dims() {
        return Err(Error::ShapeMismatch("vertical composition of unmatched 2-morphisms".into()));
    }
    let maps = first
        .maps
        .iter()
        .zip(&second.maps)
        .map(|(r1, r2)| r1.iter().zip(r2).map(|(a, b)| b * a).collect())
        .collect();
    TwoHom::new(first.source.clone(), second.target.clone(), maps)
}

/// Horizontal composite: entry `(h, j)` is the block diagonal over `i` of
/// `α[h][i] ⊗ β[i][j]`, matching the basis order of [`twomatrix_multiply`].
pub fn horizontal_compose(alpha: &TwoHom, beta: &TwoHom) -> Result<TwoHom> {
    let source = twomatrix_multiply(&alpha.source, &beta.source)?;
    let target = twomatrix_multiply(&alpha.target, &beta.target)?;
    let mut maps = Vec::with_capacity(source.rows);
    for h in 0..source.rows {
        let mut row = Vec::with_capacity(source.cols);
        for j in 0..source.cols {
            let mut m = DMatrix::zeros(target.entries[h][j].dim(), source.entries[h][j].dim());
            let (mut r0, mut c0) = (0, 0);
            for i in 0..alpha.source.cols {
                let k = alpha.maps[h][i].kronecker(&beta.maps[i][j]);
                m.view_mut((r0, c0), k.shape()).copy_from(&k);
                r0 += k.nrows();
                c0 += k.ncols();
            }
            row.push(m);
        }
        maps.push(row);
    }
    TwoHom::new(source, target, maps)
}

/// The associator `(AB)C -> A(BC)` of 2-matrix multiplication, a permutation
/// of basis vectors in every entry.
pub fn associator(a: &TwoMatrix, b: &TwoMatrix, c: &TwoMatrix) -> Result<TwoHom> {
    let ab = twomatrix_multiply(a, b)?;
    let source = twomatrix_multiply(&ab, c)?;
    let bc = twomatrix_multiply(b, c)?;
    let target = twomatrix_multiply(a, &bc)?;
    let mut maps = Vec::with_capacity(a.rows);
    for h in 0..a.rows {
        let mut row = Vec::with_capacity(c.cols);
        for j in 0..c.cols {
            // (i, x, k, y, z) in the order of A(BC)
            let mut pos = std::collections::HashMap::new();
            let mut q = 0;
            for i in 0..a.cols {
                for x in 0..a.entries[h][i].dim() {
                    for k in 0..b.cols {
                        for y in 0..b.entries[i][k].dim() {
                            for z in 0..c.entries[k][j].dim() {
                                pos.insert((i, x, k, y, z), q);
                                q += 1;
                            }
                        }
                    }
                }
            }
            let mut m = DMatrix::zeros(q, q);
            let mut p = 0;
            for k in 0..b.cols {
                for i in 0..a.cols {
                    for x in 0..a.entries[h][i].dim() {
                        for y in 0..b.entries[i][k].dim() {
                            for z in 0..c.entries[k][j].dim() {
                                m[(pos[&(i, x, k, y, z)], p)] = Scalar::new(1.0, 0.0);
                                p += 1;
                            }
                        }
                    }
                }
            }
            row.push(m);
        }
        maps.push(row);
    }
    TwoHom::new(source, target, maps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module(n: usize) -> FreeModule {
        FreeModule::new((0..n).map(|k| k.to_string()).collect())
    }

    #[test]
    fn row_times_column() {
        let a = TwoMatrix {
            rows: 1,
            cols: 2,
            entries: vec![vec![module(2), module(3)]],
        };
        let b = TwoMatrix {
            rows: 2,
            cols: 1,
            entries: vec![vec![module(5)], vec![module(7)]],
        };
        assert_eq!(twomatrix_multiply(&a, &b).unwrap().dims(), vec![vec![2 * 5 + 3 * 7]]);
        assert!(matches!(twomatrix_multiply(&a, &a), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn identity_is_neutral() {
        let a = TwoMatrix {
            rows: 1,
            cols: 2,
            entries: vec![vec![module(2), module(3)]],
        };
        let p = twomatrix_multiply(&a, &TwoMatrix::identity(2)).unwrap();
        assert_eq!(p.dims(), a.dims());
    }
}
