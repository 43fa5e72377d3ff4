//! The unit co-sphere bundle of the round two-sphere, degree by degree.
//!
//! Filtered homology of this bundle is completely known in closed form: in
//! each degree k ≥ 1 the barcode is a union of intervals with explicit
//! endpoints on the grid {m + ε} (in units of 2π), and the two generators'
//! spectral invariants are ⌊(k−1)/2⌋ and ⌊(k−1)/2⌋ + 1 up to the ε offset.
//! [`build_s2_fixture`] constructs the corresponding 0-gapped module from
//! the rank table; [`s2_reference`] returns the closed-form answers the
//! construction must reproduce. Everything is exact — the 2π unit is a
//! label, never a number.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::barcode::{Bar, Barcode};
use crate::error::Error;
use crate::field::{Gf2, Rational};
use crate::gapped::GappedModule;
use crate::matrix::Matrix;

fn rint(n: usize) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parameters of the co-sphere-bundle model: degrees 1..=max_degree over the
/// window [0, max_m] (units of 2π), with grid values offset from the integer
/// spectrum by epsilon.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct S2FixtureSpec {
    /// Largest homological degree to model, ≥ 1.
    pub max_degree: usize,
    /// Number of full periods in the window; the grid is {m + ε : 0 ≤ m ≤ max_m}.
    pub max_m: usize,
    /// Offset of the grid from the integer spectrum, strictly between 0 and 1.
    pub epsilon: Rational,
}

impl S2FixtureSpec {
    /// Checks that epsilon ∈ (0, 1) and the window is long enough for every
    /// infinite bar of every requested degree to be visible:
    /// max_m ≥ ⌊(max_degree − 1)/2⌋ + 2.
    pub fn validate(&self) -> Result<(), Error> {
        if self.max_degree == 0 {
            return Err(Error::Argument("max_degree must be at least 1".into()));
        }
        if self.epsilon <= rint(0) || self.epsilon >= rint(1) {
            return Err(Error::Argument(
                "epsilon must lie strictly between 0 and 1".into(),
            ));
        }
        let needed = (self.max_degree - 1) / 2 + 2;
        if self.max_m < needed {
            return Err(Error::Argument(format!(
                "max_m = {} is too small for degree {}; need at least {}",
                self.max_m, self.max_degree, needed
            )));
        }
        Ok(())
    }
}

/// The degree-k filtered homology of the co-sphere bundle as a 0-gapped
/// module over GF2: grid {m + ε}, spectrum {0, …, max_m}, dimensions from
/// the rank table (degree 1: rank one everywhere; degree k ≥ 2: rank 0
/// before m★ = ⌊(k−1)/2⌋, 1 at m★, 2 after), step maps injective except the
/// forced zero map from m = 0 to m = 1 in degree 1, and colimit maps that
/// become isomorphisms exactly where 2m > k − 1.
pub fn build_s2_fixture(spec: &S2FixtureSpec, k: usize) -> Result<GappedModule<Gf2>, Error> {
    spec.validate()?;
    if k == 0 || k > spec.max_degree {
        return Err(Error::Argument(format!(
            "degree {k} outside the modeled range 1..={}",
            spec.max_degree
        )));
    }
    let points = spec.max_m + 1;
    let grid: Vec<Rational> = (0..points).map(|m| rint(m) + &spec.epsilon).collect();
    let spectrum: Vec<Rational> = (0..points).map(rint).collect();

    let (dims, steps, colimit_dim, colimit_maps) = if k == 1 {
        let mut steps = vec![Matrix::zeros(1, 1)];
        steps.extend(vec![Matrix::identity(1); points - 2]);
        let mut colimit_maps = vec![Matrix::zeros(1, 1)];
        colimit_maps.extend(vec![Matrix::identity(1); points - 1]);
        (vec![1; points], steps, 1, colimit_maps)
    } else {
        let threshold = (k - 1) / 2; // the m★ where the first class appears
        let dims: Vec<usize> = (0..points)
            .map(|m| match m.cmp(&threshold) {
                core::cmp::Ordering::Less => 0,
                core::cmp::Ordering::Equal => 1,
                core::cmp::Ordering::Greater => 2,
            })
            .collect();
        let inject = Matrix::from_rows(vec![vec![Gf2(true)], vec![Gf2(false)]])
            .expect("2x1 injection");
        let steps: Vec<Matrix<Gf2>> = (0..points - 1)
            .map(|m| {
                if m + 1 < threshold {
                    Matrix::zeros(0, 0)
                } else if m + 1 == threshold {
                    Matrix::zeros(1, 0)
                } else if m == threshold {
                    inject.clone()
                } else {
                    Matrix::identity(2)
                }
            })
            .collect();
        let colimit_maps: Vec<Matrix<Gf2>> = (0..points)
            .map(|m| match m.cmp(&threshold) {
                core::cmp::Ordering::Less => Matrix::zeros(2, 0),
                core::cmp::Ordering::Equal => inject.clone(),
                core::cmp::Ordering::Greater => Matrix::identity(2),
            })
            .collect();
        (dims, steps, 2, colimit_maps)
    };

    let maps: BTreeMap<(usize, usize), Matrix<Gf2>> = steps
        .into_iter()
        .enumerate()
        .map(|(m, step)| ((m, m + 1), step))
        .collect();

    Ok(GappedModule {
        lambda: rint(0),
        spectrum,
        grid,
        dims,
        maps,
        colimit_dim,
        colimit_maps,
    })
}

/// The two distinguished colimit classes of the degree-k fixture: the class
/// born at the threshold and, in degrees with a two-dimensional colimit, the
/// class born one period later.
pub fn s2_classes(k: usize) -> Result<(Vec<Gf2>, Option<Vec<Gf2>>), Error> {
    match k {
        0 => Err(Error::Argument("degree 0 is not modeled".into())),
        1 => Ok((vec![Gf2(true)], None)),
        _ => Ok((
            vec![Gf2(true), Gf2(false)],
            Some(vec![Gf2(false), Gf2(true)]),
        )),
    }
}

/// Closed-form reference data for degree k: the exact barcode and the two
/// spectral invariants (in grid units, carrying the ε offset).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct S2Reference {
    pub barcode: Barcode,
    pub c_a: Rational,
    pub c_b: Option<Rational>,
}

/// The known answers: degree 1 has a dot at ε and one infinite bar born at
/// 1 + ε; degree k ≥ 2 has two infinite bars born at ⌊(k−1)/2⌋ + ε and
/// ⌊(k−1)/2⌋ + 1 + ε, which are also the two spectral invariants.
pub fn s2_reference(k: usize, epsilon: &Rational) -> Result<S2Reference, Error> {
    if k == 0 {
        return Err(Error::Argument("degree 0 is not modeled".into()));
    }
    if k == 1 {
        let late = rint(1) + epsilon;
        return Ok(S2Reference {
            barcode: Barcode::new(vec![
                Bar::finite(epsilon.clone(), epsilon.clone(), 1),
                Bar::colimit(late.clone(), 1),
            ]),
            c_a: late,
            c_b: None,
        });
    }
    let threshold = (k - 1) / 2;
    let first = rint(threshold) + epsilon;
    let second = rint(threshold + 1) + epsilon;
    Ok(S2Reference {
        barcode: Barcode::new(vec![
            Bar::colimit(first.clone(), 1),
            Bar::colimit(second.clone(), 1),
        ]),
        c_a: first,
        c_b: Some(second),
    })
}
