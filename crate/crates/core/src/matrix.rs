//! Dense square integer matrices and their text formats.

use std::fmt;

use thiserror::Error;

const MM_HEADER: &str = "%%MatrixMarket matrix coordinate integer general";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("rows have unequal lengths or the matrix is not square")]
    NotSquare,
    #[error("matrix market line {line}: {reason}")]
    MatrixMarket { line: usize, reason: String },
}

/// Square matrix of exact `i64` entries, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return Err(MatrixError::NotSquare);
            }
            data.extend_from_slice(r);
        }
        Ok(IntMatrix { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[i64]> + '_ {
        (0..self.n).map(move |i| self.row(i))
    }

    pub fn nonzeros(&self) -> usize {
        self.data.iter().filter(|&&x| x != 0).count()
    }

    /// Row-major `(row, col, value)` for non-zero entries.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(move |(k, &x)| (k / self.n, k % self.n, x))
    }

    pub fn scale_row(&mut self, i: usize, c: i64) {
        let n = self.n;
        for x in &mut self.data[i * n..(i + 1) * n] {
            *x *= c;
        }
    }

    /// Copy of `self` placed at offset `at` on the diagonal of `target`.
    pub fn place_into(&self, target: &mut IntMatrix, at: usize) {
        for i in 0..self.n {
            for j in 0..self.n {
                target[(at + i, at + j)] = self[(i, j)];
            }
        }
    }

    /// Matrix with the given rows and columns (same index set) removed.
    pub fn delete(&self, remove: &[usize]) -> IntMatrix {
        let keep: Vec<usize> = (0..self.n).filter(|i| !remove.contains(i)).collect();
        let mut m = IntMatrix::zeros(keep.len());
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                m[(a, b)] = self[(i, j)];
            }
        }
        m
    }

    /// `P·M·Q` where row `i` of the result is row `rows[i]` and column `j` is column `cols[j]`.
    pub fn permuted(&self, rows: &[usize], cols: &[usize]) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m[(i, j)] = self[(rows[i], cols[j])];
            }
        }
        m
    }

    /// Coordinate Matrix Market text: 1-based indices, zeros omitted, row-major order.
    pub fn to_matrix_market(&self) -> String {
        let mut out = format!("{MM_HEADER}\n{} {} {}\n", self.n, self.n, self.nonzeros());
        for (i, j, x) in self.entries() {
            out.push_str(&format!("{} {} {}\n", i + 1, j + 1, x));
        }
        out
    }

    /// Reads coordinate integer Matrix Market text; repeated coordinates add.
    pub fn from_matrix_market(text: &str) -> Result<Self, MatrixError> {
        let err = |line: usize, reason: &str| MatrixError::MatrixMarket {
            line,
            reason: reason.to_string(),
        };
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, h)) if h.split_whitespace().collect::<Vec<_>>().join(" ") == MM_HEADER => {}
            _ => return Err(err(1, "expected coordinate integer general header")),
        }
        let mut lines = lines.filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('%'));
        let (size_line, size) = lines.next().ok_or_else(|| err(2, "missing size line"))?;
        let dims: Vec<usize> = size
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| err(size_line + 1, "bad size line"))?;
        let [rows, cols, nnz] = dims[..] else {
            return Err(err(size_line + 1, "size line needs three integers"));
        };
        if rows != cols {
            return Err(MatrixError::NotSquare);
        }
        let mut m = IntMatrix::zeros(rows);
        let mut seen = 0;
        for (idx, line) in lines {
            let t: Vec<&str> = line.split_whitespace().collect();
            let parsed = match t[..] {
                [i, j, x] => i
                    .parse::<usize>()
                    .ok()
                    .zip(j.parse::<usize>().ok())
                    .zip(x.parse::<i64>().ok()),
                _ => None,
            };
            let Some(((i, j), x)) = parsed else {
                return Err(err(idx + 1, "expected `row col value`"));
            };
            if i == 0 || j == 0 || i > rows || j > rows {
                return Err(err(idx + 1, "index out of range"));
            }
            m[(i - 1, j - 1)] += x;
            seen += 1;
        }
        if seen != nnz {
            return Err(err(size_line + 1, "entry count does not match size line"));
        }
        Ok(m)
    }

    /// One row per line, space-separated.
    pub fn to_dense_text(&self) -> String {
        let mut out = String::new();
        for r in self.rows() {
            let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;

    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.n + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}
