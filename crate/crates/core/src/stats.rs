//! Univariate robust primitives, vector norms and the sample container.

use crate::error::{Error, Result};

/// An `n x d` table of finite observations stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: Vec<f64>,
    nrows: usize,
    ncols: usize,
    column_names: Vec<String>,
    row_ids: Vec<String>,
    name: String,
}

impl DataMatrix {
    /// Builds a matrix from row-major values with default labels
    /// (`x1..xd` for columns, `1..n` for rows).
    pub fn new(values: Vec<f64>, nrows: usize, ncols: usize) -> Result<Self> {
        if nrows == 0 || ncols == 0 {
            return Err(Error::EmptySample);
        }
        if values.len() != nrows * ncols {
            return Err(Error::Shape(format!(
                "{} values cannot fill {nrows} x {ncols}",
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / ncols,
                col: pos % ncols,
            });
        }
        Ok(Self {
            values,
            nrows,
            ncols,
            column_names: (1..=ncols).map(|j| format!("x{j}")).collect(),
            row_ids: (1..=nrows).map(|i| i.to_string()).collect(),
            name: "sample".to_string(),
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptySample)?;
        let ncols = first.as_ref().len();
        let mut values = Vec::with_capacity(rows.len() * ncols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != ncols {
                return Err(Error::DimensionMismatch {
                    expected: ncols,
                    got: row.len(),
                });
            }
            values.extend_from_slice(row);
        }
        Self::new(values, rows.len(), ncols)
    }

    /// One-column matrix.
    pub fn from_column(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec(), values.len(), 1)
    }

    pub fn with_column_names<S: Into<String>>(
        mut self,
        names: impl IntoIterator<Item = S>,
    ) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() != self.ncols {
            return Err(Error::Shape(format!(
                "{} column names for {} columns",
                names.len(),
                self.ncols
            )));
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(Error::Shape(format!("duplicate column name {a:?}")));
            }
        }
        self.column_names = names;
        Ok(self)
    }

    pub fn with_row_ids<S: Into<String>>(mut self, ids: impl IntoIterator<Item = S>) -> Result<Self> {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        if ids.len() != self.nrows {
            return Err(Error::Shape(format!(
                "{} row ids for {} rows",
                ids.len(),
                self.nrows
            )));
        }
        self.row_ids = ids;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn row_ids(&self) -> &[String] {
        &self.row_ids
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.ncols)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    /// Sub-matrix of the given rows, in the given order. Labels follow the rows.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptySample);
        }
        let mut values = Vec::with_capacity(indices.len() * self.ncols);
        let mut ids = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.nrows {
                return Err(Error::Membership {
                    index: i,
                    len: self.nrows,
                });
            }
            values.extend_from_slice(self.row(i));
            ids.push(self.row_ids[i].clone());
        }
        Ok(Self {
            values,
            nrows: indices.len(),
            ncols: self.ncols,
            column_names: self.column_names.clone(),
            row_ids: ids,
            name: self.name.clone(),
        })
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &DataMatrix) -> Result<Self> {
        if other.ncols != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                got: other.ncols,
            });
        }
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        let mut ids = self.row_ids.clone();
        ids.extend(other.row_ids.iter().cloned());
        Ok(Self {
            values,
            nrows: self.nrows + other.nrows,
            ncols: self.ncols,
            column_names: self.column_names.clone(),
            row_ids: ids,
            name: format!("{}+{}", self.name, other.name),
        })
    }

    /// Applies `f` to every row, keeping labels. `f` must preserve the row length.
    pub fn map_rows(&self, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> Result<Self> {
        let mut values = Vec::with_capacity(self.values.len());
        for row in self.rows() {
            let mapped = f(row);
            if mapped.len() != self.ncols {
                return Err(Error::DimensionMismatch {
                    expected: self.ncols,
                    got: mapped.len(),
                });
            }
            values.extend(mapped);
        }
        let mut out = Self::new(values, self.nrows, self.ncols)?;
        out.column_names = self.column_names.clone();
        out.row_ids = self.row_ids.clone();
        out.name = self.name.clone();
        Ok(out)
    }

    /// The given columns, in the given order, keeping row labels.
    pub fn select_columns(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Shape("no columns selected".into()));
        }
        if let Some(&j) = indices.iter().find(|&&j| j >= self.ncols) {
            return Err(Error::Shape(format!("column {j} out of range for {} columns", self.ncols)));
        }
        let values = self
            .rows()
            .flat_map(|r| indices.iter().map(move |&j| r[j]))
            .collect();
        let mut out = Self::new(values, self.nrows, indices.len())?;
        out.column_names = indices.iter().map(|&j| self.column_names[j].clone()).collect();
        out.row_ids = self.row_ids.clone();
        out.name = self.name.clone();
        Ok(out)
    }

    pub(crate) fn check_dim(&self, d: usize) -> Result<()> {
        if d == self.ncols {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.ncols,
                got: d,
            })
        }
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite { row: i, col: 0 }),
        None => Ok(()),
    }
}

/// Median of a scratch buffer; reorders it.
pub(crate) fn median_in_place(buf: &mut [f64]) -> f64 {
    let n = buf.len();
    let mid = n / 2;
    let (lower, upper, _) = buf.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        upper
    } else {
        let lower = lower.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        lower + (upper - lower) / 2.0
    }
}

/// Sample median. Even lengths take the midpoint of the two central order statistics.
pub fn median_1d(values: &[f64]) -> Result<f64> {
    check_finite(values)?;
    Ok(median_in_place(&mut values.to_vec()))
}

/// Unscaled median absolute deviation from the median.
pub fn mad_1d(values: &[f64]) -> Result<f64> {
    check_finite(values)?;
    let mut buf = values.to_vec();
    let (_, mad) = med_mad_in_place(&mut buf);
    Ok(mad)
}

/// Median and MAD of a scratch buffer; the buffer is overwritten.
pub(crate) fn med_mad_in_place(buf: &mut [f64]) -> (f64, f64) {
    let med = median_in_place(buf);
    for v in buf.iter_mut() {
        *v = (*v - med).abs();
    }
    (med, median_in_place(buf))
}

/// The L^p norm `(sum |v_i|^p)^(1/p)` for finite `p >= 1`.
pub fn p_norm(v: &[f64], p: f64) -> Result<f64> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::NotANorm(p));
    }
    Ok(p_norm_unchecked(v, p))
}

pub(crate) fn p_norm_unchecked(v: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        v.iter().map(|x| x.abs()).sum()
    } else if p == 2.0 {
        v.iter().map(|x| x * x).sum::<f64>().sqrt()
    } else {
        // scaled by the largest entry so that large p cannot overflow
        let scale = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        let s: f64 = if p.fract() == 0.0 && p <= 64.0 {
            let k = p as i32;
            v.iter().map(|x| (x.abs() / scale).powi(k)).sum()
        } else {
            v.iter().map(|x| (x.abs() / scale).powf(p)).sum()
        };
        scale * s.powf(1.0 / p)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Two-sided standard normal tail probability `2 (1 - Phi(|z|))`.
pub fn normal_two_sided_p(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    statrs::function::erf::erfc(z.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0)
}
