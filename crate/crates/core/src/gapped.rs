//! λ-gapped persistence modules over a partially ordered index set.
//!
//! For a gap λ ≥ 0 the index order is s ≤_λ t iff s = t or s ≤ t − λ: values
//! closer than λ are incomparable. A gapped module assigns spaces to grid
//! values kept off a declared forbidden spectrum, and maps to ≤_λ-comparable
//! pairs — stored for a generating set and derived by composition elsewhere,
//! with functoriality checked exhaustively. Restricting along a sequence
//! whose gaps are at least λ produces an ordinary totally ordered
//! [`PersistenceModule`]; spectral invariants read first entry into the
//! colimit image and come with a sequence-based cross-check.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Violation};
use crate::field::{format_rational, Extended, Field, Rational};
use crate::matrix::Matrix;
use crate::module::PersistenceModule;

/// The gapped order: `eta` ≤_λ `eta2` iff `eta = eta2` or `eta ≤ eta2 − λ`.
/// Reflexive always; for λ ≥ 0 also antisymmetric and transitive.
pub fn leq_gap(eta: &Rational, eta2: &Rational, lambda: &Rational) -> bool {
    eta == eta2 || *eta <= eta2 - lambda
}

/// The default almost-optimality constant for a given gap: 100/λ′, an
/// explicit stand-in for "much larger than 1/λ′". Positive gaps only.
pub fn default_almost_optimal_constant(lambda_prime: &Rational) -> Result<Rational, Error> {
    if lambda_prime.numer().sign() != num_bigint::Sign::Plus {
        return Err(Error::Argument(
            "almost-optimality is only defined for a positive gap".into(),
        ));
    }
    Ok(Rational::from_integer(BigInt::from(100)) / lambda_prime)
}

/// Per-position slack allowance 1/(c_a · 2^(|i|+1), where i counts positions
/// relative to the origin and indexes the lower endpoint of a gap.
fn slack_bound(c_a: &Rational, i: isize) -> Rational {
    let shift = i.unsigned_abs() + 1;
    let two_pow = Rational::from_integer(BigInt::one() << shift);
    (c_a * two_pow).recip()
}

/// A finite window of a gap-certified sequence: strictly increasing values
/// with consecutive gaps ≥ `lambda_prime`, one position designated as the
/// origin (position 0) so that positions extend in both directions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GappedSequence {
    /// Strictly increasing values.
    pub values: Vec<Rational>,
    /// Index into `values` that carries position 0.
    pub origin: usize,
    /// The gap this sequence certifies.
    pub lambda_prime: Rational,
}

impl GappedSequence {
    pub fn new(values: Vec<Rational>, origin: usize, lambda_prime: Rational) -> Self {
        GappedSequence {
            values,
            origin,
            lambda_prime,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The value at position 0.
    pub fn origin_value(&self) -> &Rational {
        &self.values[self.origin]
    }

    /// Checks the stored invariants: a nonempty window, an in-range origin,
    /// a non-negative certified gap, and consecutive differences ≥ λ′.
    pub fn validate(&self) -> Result<(), Violation> {
        if self.values.is_empty() {
            return Err(Violation("sequence has no values".into()));
        }
        if self.origin >= self.values.len() {
            return Err(Violation(format!(
                "origin index {} out of range ({} values)",
                self.origin,
                self.values.len()
            )));
        }
        if self.lambda_prime < Rational::from_integer(BigInt::from(0)) {
            return Err(Violation("lambda_prime is negative".into()));
        }
        for p in 1..self.values.len() {
            if &self.values[p] - &self.values[p - 1] < self.lambda_prime {
                return Err(Violation(format!(
                    "gap below lambda_prime between positions {} and {}",
                    p - 1,
                    p
                )));
            }
        }
        Ok(())
    }

    /// True iff every consecutive gap exceeds λ′ by at most the per-position
    /// allowance: η_{p+1} − η_p − λ′ ∈ [0, 1/(c_a·2^(|i|+1))], with i the
    /// lower endpoint's position relative to the origin.
    ///
    /// Requires c_a > 1/λ′ (in particular a positive λ′).
    pub fn is_almost_optimal(&self, c_a: &Rational) -> Result<bool, Error> {
        let one = Rational::from_integer(BigInt::one());
        if self.lambda_prime.numer().sign() != num_bigint::Sign::Plus
            || c_a * &self.lambda_prime <= one
        {
            return Err(Error::Argument(
                "almost-optimality constant must exceed 1/lambda_prime".into(),
            ));
        }
        for p in 0..self.values.len().saturating_sub(1) {
            let i = p as isize - self.origin as isize;
            let slack = &self.values[p + 1] - &self.values[p] - &self.lambda_prime;
            if slack < Rational::from_integer(BigInt::from(0)) || slack > slack_bound(c_a, i) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Almost optimal at the default constant, with origin value in [0, λ′].
    pub fn is_normalized(&self) -> bool {
        let c_a = match default_almost_optimal_constant(&self.lambda_prime) {
            Ok(c) => c,
            Err(_) => return false,
        };
        if !self.is_almost_optimal(&c_a).expect("default constant is valid") {
            return false;
        }
        let zero = Rational::from_integer(BigInt::from(0));
        *self.origin_value() >= zero && *self.origin_value() <= self.lambda_prime
    }

    /// The index-shifted sequence: position i of the result carries what was
    /// at position i + n, intersected with the stored window. For n > 0 the
    /// first n values drop off; for n < 0 the last |n| do. The origin must
    /// land on a stored value: 0 ≤ origin + n ≤ len − 1.
    pub fn index_shift(&self, n: i64) -> Result<GappedSequence, Error> {
        let target = self.origin as i64 + n;
        if target < 0 || target >= self.values.len() as i64 {
            return Err(Error::Argument(format!(
                "index shift by {n} leaves the stored window"
            )));
        }
        let (values, origin) = if n >= 0 {
            (self.values[n as usize..].to_vec(), self.origin)
        } else {
            let keep = (self.values.len() as i64 + n) as usize;
            (self.values[..keep].to_vec(), target as usize)
        };
        Ok(GappedSequence {
            values,
            origin,
            lambda_prime: self.lambda_prime.clone(),
        })
    }

    /// Translates the sequence down by m·λ′ with m = ⌊origin value / λ′⌋, so
    /// that the origin value lands in [0, λ′]. Returns the translated
    /// sequence and m. Requires the sequence to be almost optimal at the
    /// default constant.
    pub fn normalize(&self) -> Result<(GappedSequence, BigInt), Error> {
        let c_a = default_almost_optimal_constant(&self.lambda_prime)?;
        if !self.is_almost_optimal(&c_a)? {
            return Err(Error::Argument(
                "normalize requires an almost optimal sequence".into(),
            ));
        }
        let m = (self.origin_value() / &self.lambda_prime).floor().to_integer();
        let shift = Rational::from_integer(m.clone()) * &self.lambda_prime;
        let values = self.values.iter().map(|v| v - &shift).collect();
        Ok((
            GappedSequence {
                values,
                origin: self.origin,
                lambda_prime: self.lambda_prime.clone(),
            },
            m,
        ))
    }
}

/// Result of evaluating a gapped spectral invariant both ways: by the image
/// test on the full grid, and as the infimum over restrictions along a
/// generated family of normalized sequences. When `covered` is true (the
/// family reaches the image test's entry value) the two must agree exactly;
/// in general only `restriction_inf ≥ image_test` is guaranteed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpectralCrossCheck {
    pub image_test: Extended,
    pub restriction_inf: Extended,
    pub covered: bool,
}

/// Upper bound on the generated normalized family; beyond this the search
/// stops and coverage is reported as found so far.
const MAX_FAMILY: usize = 1024;

/// A λ-gapped persistence module: spaces on a grid of values disjoint from
/// a forbidden spectrum, maps for ≤_λ-comparable pairs (stored for a
/// generating set, derived by composition), and an explicit colimit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GappedModule<F: Field> {
    /// The gap λ ≥ 0 defining the index order.
    pub lambda: Rational,
    /// Forbidden values, strictly increasing, disjoint from the grid.
    pub spectrum: Vec<Rational>,
    /// Grid values, strictly increasing.
    pub grid: Vec<Rational>,
    /// Dimension of the space at each grid value.
    pub dims: Vec<usize>,
    /// Stored maps, keyed by (from, to) grid indices; must cover a
    /// generating set of comparable pairs. `maps[(i, j)]` has shape
    /// `dims[j]` × `dims[i]`.
    pub maps: BTreeMap<(usize, usize), Matrix<F>>,
    /// Dimension of the colimit space.
    pub colimit_dim: usize,
    /// Map into the colimit at each grid value; shape `colimit_dim` × `dims[i]`.
    pub colimit_maps: Vec<Matrix<F>>,
}

impl<F: Field> GappedModule<F> {
    pub fn points(&self) -> usize {
        self.grid.len()
    }

    /// Whether the grid values at positions i and j are ≤_λ-comparable.
    pub fn comparable(&self, i: usize, j: usize) -> bool {
        i == j || (i < j && leq_gap(&self.grid[i], &self.grid[j], &self.lambda))
    }

    fn basic_checks(&self) -> Result<(), Violation> {
        let n = self.grid.len();
        if self.lambda < Rational::from_integer(BigInt::from(0)) {
            return Err(Violation("lambda is negative".into()));
        }
        for i in 1..n {
            if self.grid[i - 1] >= self.grid[i] {
                return Err(Violation(format!(
                    "grid is not strictly increasing at index {i}"
                )));
            }
        }
        for i in 1..self.spectrum.len() {
            if self.spectrum[i - 1] >= self.spectrum[i] {
                return Err(Violation(format!(
                    "spectrum is not strictly increasing at index {i}"
                )));
            }
        }
        for value in &self.grid {
            if self.spectrum.binary_search(value).is_ok() {
                return Err(Violation(format!(
                    "grid value {} lies on the spectrum",
                    format_rational(value)
                )));
            }
        }
        if self.dims.len() != n {
            return Err(Violation(format!(
                "dims has {} entries for {} grid points",
                self.dims.len(),
                n
            )));
        }
        if self.colimit_maps.len() != n {
            return Err(Violation(format!(
                "colimit_maps has {} entries for {} grid points",
                self.colimit_maps.len(),
                n
            )));
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
        for (&(i, j), map) in &self.maps {
            if i >= n || j >= n {
                return Err(Violation(format!(
                    "map stored for out-of-range pair ({i}, {j})"
                )));
            }
            if !self.comparable(i, j) {
                return Err(Violation(format!(
                    "map stored for non-comparable pair ({}, {})",
                    format_rational(&self.grid[i]),
                    format_rational(&self.grid[j])
                )));
            }
            if map.rows() != self.dims[j] || map.cols() != self.dims[i] {
                return Err(Violation(format!(
                    "stored map ({i}, {j}) is {}x{}, expected {}x{}",
                    map.rows(),
                    map.cols(),
                    self.dims[j],
                    self.dims[i]
                )));
            }
            if i == j && *map != Matrix::identity(self.dims[i]) {
                return Err(Violation(format!(
                    "stored map ({i}, {i}) is not the identity"
                )));
            }
        }
        Ok(())
    }

    /// Derives the full table of maps for every comparable pair, checking as
    /// it goes that every one-intermediate factorization agrees — which,
    /// taken over the whole table, is exactly the exhaustive functoriality
    /// check over comparable triples. Fails if some comparable pair has
    /// neither a stored map nor a derivation.
    pub fn derived_maps(&self) -> Result<BTreeMap<(usize, usize), Matrix<F>>, Violation> {
        self.basic_checks()?;
        let n = self.grid.len();
        let mut table: BTreeMap<(usize, usize), Matrix<F>> = (0..n)
            .map(|i| ((i, i), Matrix::identity(self.dims[i])))
            .collect();
        for span in 1..n {
            for i in 0..n - span {
                let j = i + span;
                if !self.comparable(i, j) {
                    continue;
                }
                let mut chosen = self.maps.get(&(i, j)).cloned();
                for k in i + 1..j {
                    if !(self.comparable(i, k) && self.comparable(k, j)) {
                        continue;
                    }
                    let through = table[&(k, j)]
                        .compose(&table[&(i, k)])
                        .expect("shapes checked");
                    match &chosen {
                        None => chosen = Some(through),
                        Some(existing) if *existing != through => {
                            return Err(Violation(format!(
                                "composition mismatch for the triple ({}, {}, {})",
                                format_rational(&self.grid[i]),
                                format_rational(&self.grid[k]),
                                format_rational(&self.grid[j])
                            )));
                        }
                        Some(_) => {}
                    }
                }
                match chosen {
                    Some(map) => {
                        table.insert((i, j), map);
                    }
                    None => {
                        return Err(Violation(format!(
                            "no stored or derivable map for the comparable pair ({}, {})",
                            format_rational(&self.grid[i]),
                            format_rational(&self.grid[j])
                        )));
                    }
                }
            }
        }
        Ok(table)
    }

    /// Checks every invariant: shapes, ordering, grid/spectrum disjointness,
    /// exhaustive functoriality over comparable triples, and compatibility
    /// of every derived map with the colimit maps.
    pub fn validate(&self) -> Result<(), Violation> {
        let table = self.derived_maps()?;
        for ((i, j), map) in &table {
            let through = self.colimit_maps[*j].compose(map).expect("shapes checked");
            if through != self.colimit_maps[*i] {
                return Err(Violation(format!(
                    "colimit compatibility fails for the pair ({}, {})",
                    format_rational(&self.grid[*i]),
                    format_rational(&self.grid[*j])
                )));
            }
        }
        Ok(())
    }

    /// The map from grid position i to grid position j, derived by
    /// composition if not stored. Argument error when the positions are out
    /// of range or not comparable.
    pub fn map(&self, i: usize, j: usize) -> Result<Matrix<F>, Error> {
        let n = self.grid.len();
        if i >= n || j >= n {
            return Err(Error::Argument(format!(
                "grid position out of range in pair ({i}, {j}) ({n} points)"
            )));
        }
        if !self.comparable(i, j) {
            return Err(Error::Argument(format!(
                "grid values {} and {} are not comparable at gap {}",
                format_rational(&self.grid[i]),
                format_rational(&self.grid[j]),
                format_rational(&self.lambda)
            )));
        }
        let mut memo = BTreeMap::new();
        self.derive_pair(i, j, &mut memo).map_err(Error::Invalid)
    }

    /// Derives the single map (i, j) through any comparable intermediate,
    /// memoized. On a valid module every factorization agrees, so one path
    /// suffices; `derived_maps` remains the exhaustive agreement check.
    fn derive_pair(
        &self,
        i: usize,
        j: usize,
        memo: &mut BTreeMap<(usize, usize), Matrix<F>>,
    ) -> Result<Matrix<F>, Violation> {
        if i == j {
            return Ok(Matrix::identity(self.dims[i]));
        }
        if let Some(map) = memo.get(&(i, j)) {
            return Ok(map.clone());
        }
        if let Some(map) = self.maps.get(&(i, j)) {
            if map.rows() != self.dims[j] || map.cols() != self.dims[i] {
                return Err(Violation(format!(
                    "stored map ({i}, {j}) is {}x{}, expected {}x{}",
                    map.rows(),
                    map.cols(),
                    self.dims[j],
                    self.dims[i]
                )));
            }
            memo.insert((i, j), map.clone());
            return Ok(map.clone());
        }
        for k in i + 1..j {
            if !(self.comparable(i, k) && self.comparable(k, j)) {
                continue;
            }
            let first = self.derive_pair(i, k, memo)?;
            let second = self.derive_pair(k, j, memo)?;
            let map = second.compose(&first).expect("shapes agree");
            memo.insert((i, j), map.clone());
            return Ok(map);
        }
        Err(Violation(format!(
            "no stored or derivable map for the comparable pair ({}, {})",
            format_rational(&self.grid[i]),
            format_rational(&self.grid[j])
        )))
    }

    /// True iff every sequence value sits on the grid and consecutive values
    /// strictly increase by at least λ.
    pub fn is_admissible(&self, seq: &GappedSequence) -> bool {
        for value in &seq.values {
            if self.grid.binary_search(value).is_err() {
                return false;
            }
        }
        for p in 1..seq.values.len() {
            if seq.values[p] <= seq.values[p - 1]
                || &seq.values[p] - &seq.values[p - 1] < self.lambda
            {
                return false;
            }
        }
        true
    }

    /// The totally ordered persistence module over the sequence's values,
    /// with spaces, step maps, and colimit data pulled from this module.
    /// Consecutive values are comparable by admissibility, so the steps are
    /// the derived maps between them.
    pub fn restrict(&self, seq: &GappedSequence) -> Result<PersistenceModule<F>, Error> {
        if !self.is_admissible(seq) {
            return Err(Error::Argument(
                "sequence is not admissible for this module".into(),
            ));
        }
        let indices: Vec<usize> = seq
            .values
            .iter()
            .map(|v| self.grid.binary_search(v).expect("admissible"))
            .collect();
        let mut memo = BTreeMap::new();
        let steps = indices
            .windows(2)
            .map(|w| self.derive_pair(w[0], w[1], &mut memo))
            .collect::<Result<_, _>>()
            .map_err(Error::Invalid)?;
        Ok(PersistenceModule {
            grid: seq.values.clone(),
            dims: indices.iter().map(|&i| self.dims[i]).collect(),
            steps,
            colimit_dim: self.colimit_dim,
            colimit_maps: indices
                .iter()
                .map(|&i| self.colimit_maps[i].clone())
                .collect(),
        })
    }

    /// Least grid value at which the colimit class `a` enters the image of
    /// the map into the colimit; +∞ if never, and +∞ for the zero class by
    /// convention.
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

    /// The full grid as a sequence certifying this module's own gap. Only
    /// admissible when consecutive grid values are at least λ apart — always
    /// the case at λ = 0.
    pub fn full_grid_sequence(&self) -> GappedSequence {
        GappedSequence {
            values: self.grid.clone(),
            origin: 0,
            lambda_prime: self.lambda.clone(),
        }
    }

    /// The same module with grid and spectrum translated by `s`.
    pub fn shift_values(&self, s: &Rational) -> GappedModule<F> {
        GappedModule {
            lambda: self.lambda.clone(),
            spectrum: self.spectrum.iter().map(|v| v + s).collect(),
            grid: self.grid.iter().map(|v| v + s).collect(),
            dims: self.dims.clone(),
            maps: self.maps.clone(),
            colimit_dim: self.colimit_dim,
            colimit_maps: self.colimit_maps.clone(),
        }
    }

    /// Enumerates maximal normalized sequences on the grid at gap λ′ = λ:
    /// origin value in [0, λ], all gaps within the almost-optimal allowance
    /// at the default constant, extended in both directions until no grid
    /// value fits. Truncated at an internal cap. Requires λ > 0.
    pub fn normalized_family(&self) -> Result<Vec<GappedSequence>, Error> {
        let c_a = default_almost_optimal_constant(&self.lambda)?;
        let zero = Rational::from_integer(BigInt::from(0));
        let mut family = Vec::new();
        let origin_lo = self.grid.partition_point(|v| *v < zero);
        let origin_hi = self.grid.partition_point(|v| *v <= self.lambda);
        for origin_idx in origin_lo..origin_hi {
            let mut rights = Vec::new();
            let mut current = alloc::vec![origin_idx];
            self.grow_right(&c_a, &mut current, &mut rights, family.len());
            for right in rights {
                if family.len() >= MAX_FAMILY {
                    return Ok(family);
                }
                let mut lefts = Vec::new();
                let mut current = alloc::vec![right[0]];
                self.grow_left(&c_a, &mut current, &mut lefts, family.len());
                for left in lefts {
                    if family.len() >= MAX_FAMILY {
                        return Ok(family);
                    }
                    // left holds indices from the origin leftward.
                    let mut indices: Vec<usize> = left[1..].iter().rev().copied().collect();
                    indices.extend_from_slice(&right);
                    let origin = left.len() - 1;
                    family.push(GappedSequence {
                        values: indices.iter().map(|&i| self.grid[i].clone()).collect(),
                        origin,
                        lambda_prime: self.lambda.clone(),
                    });
                }
            }
        }
        Ok(family)
    }

    /// Extends `current` (indices from the origin rightward) in all maximal
    /// ways, collecting completed runs into `out`.
    fn grow_right(
        &self,
        c_a: &Rational,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        emitted: usize,
    ) {
        if emitted + out.len() >= MAX_FAMILY {
            return;
        }
        let last = &self.grid[*current.last().expect("nonempty")];
        let position = current.len() as isize - 1;
        let lo = last + &self.lambda;
        let hi = &lo + slack_bound(c_a, position);
        let from = self.grid.partition_point(|v| *v < lo);
        let to = self.grid.partition_point(|v| *v <= hi);
        if from == to {
            out.push(current.clone());
            return;
        }
        for idx in from..to {
            current.push(idx);
            self.grow_right(c_a, current, out, emitted);
            current.pop();
        }
    }

    /// Extends `current` (indices from the origin leftward) in all maximal
    /// ways; positions run 0, −1, −2, … as the run grows.
    fn grow_left(
        &self,
        c_a: &Rational,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        emitted: usize,
    ) {
        if emitted + out.len() >= MAX_FAMILY {
            return;
        }
        let leftmost = &self.grid[*current.last().expect("nonempty")];
        let position = -(current.len() as isize); // lower endpoint of the next gap
        let hi = leftmost - &self.lambda;
        let lo = &hi - slack_bound(c_a, position);
        let from = self.grid.partition_point(|v| *v < lo);
        let to = self.grid.partition_point(|v| *v <= hi);
        if from == to {
            out.push(current.clone());
            return;
        }
        for idx in from..to {
            current.push(idx);
            self.grow_left(c_a, current, out, emitted);
            current.pop();
        }
    }

    /// Evaluates the spectral invariant by the image test and, independently,
    /// as the infimum over the generated normalized family of the
    /// restriction's invariant. Requires λ > 0 (normalized sequences need a
    /// positive gap).
    pub fn spectral_invariant_cross_checked(&self, a: &[F]) -> Result<SpectralCrossCheck, Error> {
        let image_test = self.spectral_invariant(a)?;
        let family = self.normalized_family()?;
        let mut restriction_inf = Extended::Infinity;
        for seq in &family {
            let si = self.restrict(seq)?.spectral_invariant(a)?;
            if si < restriction_inf {
                restriction_inf = si;
            }
        }
        let covered = match &image_test {
            Extended::Infinity => true,
            Extended::Finite(v) => family
                .iter()
                .any(|seq| seq.values.binary_search(v).is_ok()),
        };
        Ok(SpectralCrossCheck {
            image_test,
            restriction_inf,
            covered,
        })
    }
}
