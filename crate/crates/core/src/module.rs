//! Finite, totally ordered persistence modules with an explicit colimit.
//!
//! A module assigns an exact vector space to each point of a strictly
//! increasing rational grid, a step map to each consecutive pair, and a map
//! from every grid point into one distinguished colimit space standing in
//! for the direct limit of the whole (infinite) picture. Classes that
//! survive into the colimit show up as [`Death::Colimit`] bars.
//!
//! The barcode is computed from the rank function by inclusion–exclusion —
//! quadratically many exact rank computations, which at desk scale is cheap
//! and doubles as the specification of what the barcode means.

use alloc::format;
use alloc::vec::Vec;

use crate::barcode::{Bar, Barcode};
use crate::error::{Error, Violation};
use crate::field::{Extended, Field, Rational};
use crate::matrix::Matrix;

/// Persistence module over a strictly increasing rational grid
/// η_0 < … < η_{n−1} together with a colimit space.
///
/// Fields are public: values arrive from files and generators in arbitrary
/// states of disrepair, and [`PersistenceModule::validate`] is the single
/// arbiter of well-formedness. Operations whose meaning depends on the
/// invariants (barcode, dual) re-validate and report the first violation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PersistenceModule<F: Field> {
    /// Grid values, strictly increasing.
    pub grid: Vec<Rational>,
    /// Dimension of the space at each grid point.
    pub dims: Vec<usize>,
    /// `steps[i]` maps the space at `grid[i]` to the space at `grid[i+1]`;
    /// shape `dims[i+1]` × `dims[i]`.
    pub steps: Vec<Matrix<F>>,
    /// Dimension of the colimit space.
    pub colimit_dim: usize,
    /// `colimit_maps[i]` maps the space at `grid[i]` into the colimit;
    /// shape `colimit_dim` × `dims[i]`.
    pub colimit_maps: Vec<Matrix<F>>,
}

impl<F: Field> PersistenceModule<F> {
    pub fn points(&self) -> usize {
        self.grid.len()
    }

    /// Checks every structural invariant, reporting the first failure:
    /// matching lengths, a strictly increasing grid, step/colimit map
    /// shapes, and colimit compatibility ι_{i+1,∞} ∘ M_i = ι_{i,∞}.
    pub fn validate(&self) -> Result<(), Violation> {
        let n = self.grid.len();
        if self.dims.len() != n {
            return Err(Violation(format!(
                "dims has {} entries for {} grid points",
                self.dims.len(),
                n
            )));
        }
        if self.steps.len() != n.saturating_sub(1) {
            return Err(Violation(format!(
                "step_maps has {} entries, expected {}",
                self.steps.len(),
                n.saturating_sub(1)
            )));
        }
        if self.colimit_maps.len() != n {
            return Err(Violation(format!(
                "colimit_maps has {} entries for {} grid points",
                self.colimit_maps.len(),
                n
            )));
        }
        for i in 1..n {
            if self.grid[i - 1] >= self.grid[i] {
                return Err(Violation(format!(
                    "grid is not strictly increasing at index {i}"
                )));
            }
        }
        for (i, step) in self.steps.iter().enumerate() {
            if step.rows() != self.dims[i + 1] || step.cols() != self.dims[i] {
                return Err(Violation(format!(
                    "step map {i} is {}x{}, expected {}x{}",
                    step.rows(),
                    step.cols(),
                    self.dims[i + 1],
                    self.dims[i]
                )));
            }
        }
        for (i, map) in self.colimit_maps.iter().enumerate() {
            if map.rows() != self.colimit_dim || map.cols() != self.dims[i] {
                return Err(Violation(format!(
                    "colimit map {i} is {}x{}, expected {}x{}",
                    map.rows(),
                    map.cols(),
                    self.colimit_dim,
                    self.dims[i]
                )));
            }
        }
        for i in 0..n.saturating_sub(1) {
            let through = self.colimit_maps[i + 1]
                .compose(&self.steps[i])
                .expect("shapes checked above");
            if through != self.colimit_maps[i] {
                return Err(Violation(format!(
                    "colimit compatibility fails at index {i}"
                )));
            }
        }
        Ok(())
    }

    /// The composite ι_{η_i, η_j} = M_{j−1} ∘ … ∘ M_i (identity when i = j).
    pub fn composite_map(&self, i: usize, j: usize) -> Result<Matrix<F>, Error> {
        if i > j {
            return Err(Error::Argument(format!(
                "composite_map requires i <= j, got i={i}, j={j}"
            )));
        }
        if j >= self.grid.len() {
            return Err(Error::Argument(format!(
                "grid position {j} out of range ({} points)",
                self.grid.len()
            )));
        }
        let mut acc = Matrix::identity(self.dims[i]);
        for k in i..j {
            acc = self.steps[k].compose(&acc).expect("validated shapes");
        }
        Ok(acc)
    }

    /// Rank of the composite map from position i to position j.
    pub fn rank_invariant(&self, i: usize, j: usize) -> Result<usize, Error> {
        Ok(self.composite_map(i, j)?.rank())
    }

    /// Rank of the map into the colimit at position i.
    pub fn colimit_rank(&self, i: usize) -> Result<usize, Error> {
        self.colimit_maps
            .get(i)
            .map(Matrix::rank)
            .ok_or_else(|| {
                Error::Argument(format!(
                    "grid position {i} out of range ({} points)",
                    self.grid.len()
                ))
            })
    }

    /// Extracts the barcode by inclusion–exclusion on the rank function.
    ///
    /// For finite bars, with r(i,j) the rank from position i to j and the
    /// convention r(−1, ·) = 0:
    ///
    /// ```text
    /// mult[i,j] = r(i,j) − r(i−1,j) − r(i,succ j) + r(i−1,succ j)
    /// ```
    ///
    /// where `succ` of the last grid position is the colimit column, and
    /// colimit bars have mult[i] = r(i,∞) − r(i−1,∞).
    pub fn barcode(&self) -> Result<Barcode, Error> {
        self.validate()?;
        let n = self.grid.len();
        if n == 0 {
            return Ok(Barcode::default());
        }

        // rank[i][j - i] = rank of the composite from i to j.
        let mut rank = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n - i);
            let mut acc = Matrix::identity(self.dims[i]);
            row.push(self.dims[i]);
            for j in i + 1..n {
                acc = self.steps[j - 1].compose(&acc).expect("validated shapes");
                row.push(acc.rank());
            }
            rank.push(row);
        }
        let rank_inf: Vec<usize> = self.colimit_maps.iter().map(Matrix::rank).collect();

        let r = |i: isize, j: usize| -> i64 {
            if i < 0 {
                0
            } else {
                rank[i as usize][j - i as usize] as i64
            }
        };
        let r_inf = |i: isize| -> i64 {
            if i < 0 {
                0
            } else {
                rank_inf[i as usize] as i64
            }
        };

        let mut bars = Vec::new();
        for i in 0..n {
            let ii = i as isize;
            for j in i..n {
                let deaths_here = if j + 1 < n {
                    (r(ii, j) - r(ii - 1, j)) - (r(ii, j + 1) - r(ii - 1, j + 1))
                } else {
                    (r(ii, j) - r(ii - 1, j)) - (r_inf(ii) - r_inf(ii - 1))
                };
                debug_assert!(deaths_here >= 0, "rank function is not monotone");
                if deaths_here > 0 {
                    bars.push(Bar::finite(
                        self.grid[i].clone(),
                        self.grid[j].clone(),
                        deaths_here as usize,
                    ));
                }
            }
            let colimit_births = r_inf(ii) - r_inf(ii - 1);
            debug_assert!(colimit_births >= 0, "colimit ranks decreased");
            if colimit_births > 0 {
                bars.push(Bar::colimit(self.grid[i].clone(), colimit_births as usize));
            }
        }
        Ok(Barcode::new(bars))
    }

    /// Least grid value at which the colimit class `a` enters the image of
    /// the map into the colimit; +∞ if it never does. The zero class is
    /// +∞ by convention (it lies in every image, so the convention is an
    /// explicit override).
    pub fn spectral_invariant(&self, a: &[F]) -> Result<Extended, Error> {
        if a.len() != self.colimit_dim {
            return Err(Error::Argument(format!(
                "class has length {}, colimit dimension is {}",
                a.len(),
                self.colimit_dim
            )));
        }
        if a.iter().all(Field::is_zero) {
            return Ok(Extended::Infinity);
        }
        for (i, map) in self.colimit_maps.iter().enumerate() {
            if map.in_column_span(a).expect("length checked").is_some() {
                return Ok(Extended::Finite(self.grid[i].clone()));
            }
        }
        Ok(Extended::Infinity)
    }

    /// The dual module: negated, reversed grid; transposed step maps in
    /// reversed order; colimit = dual of the space at the *first* grid
    /// point, reached through the transposes of the composites from
    /// position 0.
    pub fn dual(&self) -> Result<PersistenceModule<F>, Error> {
        self.validate()?;
        let n = self.grid.len();
        let grid = self.grid.iter().rev().map(|v| -v).collect();
        let dims: Vec<usize> = self.dims.iter().rev().copied().collect();
        let steps = (0..n.saturating_sub(1))
            .map(|i| self.steps[n - 2 - i].transpose())
            .collect();
        let colimit_dim = self.dims.first().copied().unwrap_or(0);
        let colimit_maps = (0..n)
            .map(|i| {
                self.composite_map(0, n - 1 - i)
                    .expect("indices in range")
                    .transpose()
            })
            .collect();
        Ok(PersistenceModule {
            grid,
            dims,
            steps,
            colimit_dim,
            colimit_maps,
        })
    }

    /// The same module with every grid value translated by `s`.
    pub fn shift_values(&self, s: &Rational) -> PersistenceModule<F> {
        PersistenceModule {
            grid: self.grid.iter().map(|v| v + s).collect(),
            dims: self.dims.clone(),
            steps: self.steps.clone(),
            colimit_dim: self.colimit_dim,
            colimit_maps: self.colimit_maps.clone(),
        }
    }
}

/// Verifies a claimed δ-interleaving between two modules on a shared grid,
/// where δ is measured in grid steps: `phi[i]` maps V at position i to W at
/// position i + delta_steps, `psi[i]` the other way around.
///
/// Checks, reporting the first failure:
/// - both triangle identities ψ_{i+δ} ∘ φ_i = ι^V_{i,i+2δ} and
///   φ_{i+δ} ∘ ψ_i = ι^W_{i,i+2δ};
/// - commutation of both families with the step maps.
pub fn verify_interleaving<F: Field>(
    v: &PersistenceModule<F>,
    w: &PersistenceModule<F>,
    delta_steps: usize,
    phi: &[Matrix<F>],
    psi: &[Matrix<F>],
) -> Result<(), Error> {
    if v.grid != w.grid {
        return Err(Error::Argument(
            "interleaving requires modules on the same grid".into(),
        ));
    }
    v.validate().map_err(Error::Invalid)?;
    w.validate().map_err(Error::Invalid)?;

    let n = v.grid.len();
    let d = delta_steps;
    let expected = n.saturating_sub(d);
    if phi.len() != expected || psi.len() != expected {
        return Err(Error::Shape(format!(
            "expected {expected} phi and psi maps for {n} grid points at delta {d}, got {} and {}",
            phi.len(),
            psi.len()
        )));
    }
    for i in 0..expected {
        if phi[i].rows() != w.dims[i + d] || phi[i].cols() != v.dims[i] {
            return Err(Error::Shape(format!(
                "phi[{i}] is {}x{}, expected {}x{}",
                phi[i].rows(),
                phi[i].cols(),
                w.dims[i + d],
                v.dims[i]
            )));
        }
        if psi[i].rows() != v.dims[i + d] || psi[i].cols() != w.dims[i] {
            return Err(Error::Shape(format!(
                "psi[{i}] is {}x{}, expected {}x{}",
                psi[i].rows(),
                psi[i].cols(),
                v.dims[i + d],
                w.dims[i]
            )));
        }
    }

    for i in 0..n {
        if i + 2 * d < n {
            let round_trip = psi[i + d].compose(&phi[i]).expect("shapes checked");
            if round_trip != v.composite_map(i, i + 2 * d).expect("in range") {
                return Err(Error::Invalid(Violation(format!(
                    "triangle psi∘phi differs from the step composite at index {i}"
                ))));
            }
            let round_trip = phi[i + d].compose(&psi[i]).expect("shapes checked");
            if round_trip != w.composite_map(i, i + 2 * d).expect("in range") {
                return Err(Error::Invalid(Violation(format!(
                    "triangle phi∘psi differs from the step composite at index {i}"
                ))));
            }
        }
        if i + d + 1 < n {
            let ahead = phi[i + 1].compose(&v.steps[i]).expect("shapes checked");
            let behind = w.steps[i + d].compose(&phi[i]).expect("shapes checked");
            if ahead != behind {
                return Err(Error::Invalid(Violation(format!(
                    "phi does not commute with step maps at index {i}"
                ))));
            }
            let ahead = psi[i + 1].compose(&w.steps[i]).expect("shapes checked");
            let behind = v.steps[i + d].compose(&psi[i]).expect("shapes checked");
            if ahead != behind {
                return Err(Error::Invalid(Violation(format!(
                    "psi does not commute with step maps at index {i}"
                ))));
            }
        }
    }
    Ok(())
}
