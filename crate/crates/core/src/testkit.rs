//! Seeded generators for randomized test corpora.
//!
//! Everything here is deterministic in the seed: a corpus is reproducible by
//! re-running with the same 64-bit seed. The constructions are designed so
//! that the properties under test hold *by construction* — e.g. interleaved
//! pairs come with explicit morphisms that satisfy the interleaving
//! identities, and run modules make every maximal normalized sequence a full
//! arithmetic run — so test failures point at the library, not the data.
//!
//! This module is compiled only with the `testkit` feature and is meant for
//! property and acceptance suites, not for library consumers.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

use crate::envelope::ContactEnvelope;
use crate::field::{rat, rat_int, Gf2, Rational};
use crate::gapped::{leq_gap, GappedModule, GappedSequence};
use crate::matrix::Matrix;
use crate::module::PersistenceModule;

/// Deterministic stream-cipher RNG from a 64-bit seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0u32..items.len() as u32) as usize]
}

/// Random rational p/q with p in `lo..=hi` and q drawn from `denoms`.
pub fn gen_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64, denoms: &[i64]) -> Rational {
    let q = *pick(rng, denoms);
    rat(rng.gen_range(lo..=hi), q)
}

/// Random GF2 matrix; the fill density is itself randomized so that ranks
/// range from near-zero to full.
pub fn gen_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix<Gf2> {
    let density = rng.gen_range(1u32..=3);
    let mut m = Matrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if rng.gen_range(0u32..4) < density {
                m.set(r, c, Gf2(true));
            }
        }
    }
    m
}

/// Random GF2 vector of the given length (the zero vector is possible).
pub fn gen_class(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Gf2> {
    (0..dim).map(|_| Gf2(rng.gen_range(0u32..2) == 1)).collect()
}

/// Every GF2 vector of the given length, in mask order.
pub fn all_gf2_classes(dim: usize) -> Vec<Vec<Gf2>> {
    assert!(dim <= 16, "class enumeration is exponential in the dimension");
    (0u32..(1u32 << dim))
        .map(|mask| (0..dim).map(|b| Gf2(mask >> b & 1 == 1)).collect())
        .collect()
}

/// Strictly increasing grid of 1..=`max_points` distinct rationals.
pub fn gen_grid(rng: &mut ChaCha8Rng, max_points: usize) -> Vec<Rational> {
    let n = rng.gen_range(1u32..=max_points as u32) as usize;
    let mut set = BTreeSet::new();
    while set.len() < n {
        set.insert(gen_rational(rng, -24, 24, &[1, 2, 3, 4, 6, 12]));
    }
    set.into_iter().collect()
}

/// Random valid persistence module on the given grid: dimensions and step
/// maps are uniform, and the colimit maps are derived from a random map out
/// of the last space (ι_i = ι_{n−1} ∘ composite(i, n−1)), which makes the
/// colimit compatibility identities hold by construction.
pub fn gen_module_on_grid(
    rng: &mut ChaCha8Rng,
    grid: Vec<Rational>,
    max_dim: usize,
    max_colimit_dim: usize,
) -> PersistenceModule<Gf2> {
    let n = grid.len();
    assert!(n > 0);
    let dims: Vec<usize> = (0..n)
        .map(|_| rng.gen_range(0u32..=max_dim as u32) as usize)
        .collect();
    let steps: Vec<Matrix<Gf2>> = (1..n)
        .map(|i| gen_matrix(rng, dims[i], dims[i - 1]))
        .collect();
    let colimit_dim = rng.gen_range(0u32..=max_colimit_dim as u32) as usize;
    let mut colimit_maps = vec![Matrix::zeros(0, 0); n];
    let mut acc = gen_matrix(rng, colimit_dim, dims[n - 1]);
    for i in (0..n).rev() {
        colimit_maps[i] = acc.clone();
        if i > 0 {
            acc = acc.compose(&steps[i - 1]).expect("shapes agree");
        }
    }
    PersistenceModule {
        grid,
        dims,
        steps,
        colimit_dim,
        colimit_maps,
    }
}

/// Random valid persistence module with a random grid.
pub fn gen_module(
    rng: &mut ChaCha8Rng,
    max_points: usize,
    max_dim: usize,
    max_colimit_dim: usize,
) -> PersistenceModule<Gf2> {
    let grid = gen_grid(rng, max_points);
    gen_module_on_grid(rng, grid, max_dim, max_colimit_dim)
}

/// λ-gapped module assembled from rank-one summands: finite summands live on
/// the grid values inside a closed value interval [b, d], colimit summands
/// live on [b, ∞) and survive into the colimit. Because supports are value
/// intervals, every one-intermediate factorization agrees and the module is
/// valid with a map stored for every comparable pair.
pub fn interval_module(
    lambda: &Rational,
    spectrum: Vec<Rational>,
    grid: Vec<Rational>,
    finite: &[(Rational, Rational)],
    colimit_births: &[Rational],
) -> GappedModule<Gf2> {
    let n = grid.len();
    let colimit_dim = colimit_births.len();
    let alive_at: Vec<Vec<usize>> = grid
        .iter()
        .map(|v| {
            let mut ids = Vec::new();
            for (c, b) in colimit_births.iter().enumerate() {
                if v >= b {
                    ids.push(c);
                }
            }
            for (f, (b, d)) in finite.iter().enumerate() {
                if v >= b && v <= d {
                    ids.push(colimit_dim + f);
                }
            }
            ids
        })
        .collect();
    let dims: Vec<usize> = alive_at.iter().map(Vec::len).collect();

    let mut maps = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if !leq_gap(&grid[i], &grid[j], lambda) {
                continue;
            }
            let mut m = Matrix::zeros(dims[j], dims[i]);
            for (col, id) in alive_at[i].iter().enumerate() {
                if let Some(row) = alive_at[j].iter().position(|x| x == id) {
                    m.set(row, col, Gf2(true));
                }
            }
            maps.insert((i, j), m);
        }
    }

    let colimit_maps = (0..n)
        .map(|i| {
            let mut m = Matrix::zeros(colimit_dim, dims[i]);
            for (col, id) in alive_at[i].iter().enumerate() {
                if *id < colimit_dim {
                    m.set(*id, col, Gf2(true));
                }
            }
            m
        })
        .collect();

    GappedModule {
        lambda: lambda.clone(),
        spectrum,
        grid,
        dims,
        maps,
        colimit_dim,
        colimit_maps,
    }
}

/// A λ-gapped module whose grid is a union of full arithmetic λ-runs, plus
/// the runs themselves as normalized sequences.
pub struct RunModule {
    pub gm: GappedModule<Gf2>,
    /// The maximal normalized sequences of `gm`: one full run each, origin
    /// at the run's first value.
    pub runs: Vec<GappedSequence>,
}

/// Random run module. The run starts are distinct values in (0, λ) spaced
/// at least λ/7 apart — far wider than any normalized-slack window — so the
/// maximal normalized sequences are exactly the full runs; summand supports
/// stay inside [λ, (L−2)λ], a band that every run crosses, so restrictions
/// to different runs differ by less than λ bar-by-bar and colimit counts
/// agree across runs.
pub fn gen_run_module(rng: &mut ChaCha8Rng) -> RunModule {
    let lambda: Rational = pick(
        rng,
        &[rat(1, 3), rat(1, 2), rat_int(1), rat(3, 2), rat_int(2)],
    )
    .clone();
    let len = if rng.gen_range(0u32..8) == 0 {
        10
    } else {
        rng.gen_range(5u32..=8) as usize
    };
    let run_count = if len == 10 {
        4
    } else {
        rng.gen_range(4u32..=5) as usize
    };

    let run_values: Vec<Vec<Rational>> = (0..run_count)
        .map(|r| {
            let start = &lambda * rat(r as i64 + 1, run_count as i64 + 2);
            (0..len)
                .map(|j| &start + &lambda * rat_int(j as i64))
                .collect()
        })
        .collect();
    let mut grid: Vec<Rational> = run_values.iter().flatten().cloned().collect();
    grid.sort();

    // Summand endpoints on a quarter-λ lattice inside the common band.
    let lattice_value = |rng: &mut ChaCha8Rng| -> Rational {
        &lambda * rat(rng.gen_range(4i64..=4 * (len as i64 - 2)), 4)
    };
    let finite: Vec<(Rational, Rational)> = (0..rng.gen_range(0u32..=3))
        .map(|_| {
            let a = lattice_value(rng);
            let b = lattice_value(rng);
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    let colimit_births: Vec<Rational> = (0..rng.gen_range(1u32..=2))
        .map(|_| lattice_value(rng))
        .collect();

    let gm = interval_module(&lambda, Vec::new(), grid, &finite, &colimit_births);
    let runs = run_values
        .into_iter()
        .map(|values| GappedSequence {
            values,
            origin: 0,
            lambda_prime: lambda.clone(),
        })
        .collect();
    RunModule { gm, runs }
}

/// A λ-gapped module carrying two arithmetic runs k·λ apart, with all
/// colimit classes entering at each run's first value.
pub struct TwinModule {
    pub gm: GappedModule<Gf2>,
    /// Almost-optimal sequence tracing the high run, origin at its first
    /// value (which lies in (kλ, (k+1)λ), so normalizing subtracts kλ).
    pub high_run: GappedSequence,
    /// Integer separation between the runs in units of λ.
    pub k: i64,
}

/// Random twin module. The module data along the high run is the exact
/// translate by kλ of the data along the low run, so spectral invariants of
/// the two restrictions differ by exactly kλ — the correction term the
/// normalized restriction search must add back.
pub fn gen_twin_module(rng: &mut ChaCha8Rng) -> TwinModule {
    let lambda: Rational = pick(rng, &[rat(1, 2), rat_int(1), rat(3, 2), rat_int(2)]).clone();
    let len = rng.gen_range(3u32..=6) as usize;
    let origin = &lambda * rat(rng.gen_range(1i64..=7), 8);
    let k = rng.gen_range(len as i64 + 1..=len as i64 + 4);

    let low: Vec<Rational> = (0..len)
        .map(|j| &origin + &lambda * rat_int(j as i64))
        .collect();
    let high: Vec<Rational> = low.iter().map(|v| v + &lambda * rat_int(k)).collect();
    let mut grid = low.clone();
    grid.extend(high.iter().cloned());

    let colimit_births = vec![low[0].clone(); rng.gen_range(1u32..=3) as usize];
    // Finite summands do not touch colimit maps, so they may sit anywhere.
    let finite: Vec<(Rational, Rational)> = (0..rng.gen_range(0u32..=2))
        .map(|_| {
            let span = 8 * (len as i64 + k);
            let a = &lambda * rat(rng.gen_range(0i64..=span), 8);
            let b = &lambda * rat(rng.gen_range(0i64..=span), 8);
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();

    let gm = interval_module(&lambda, Vec::new(), grid, &finite, &colimit_births);
    let high_run = GappedSequence {
        values: high,
        origin: 0,
        lambda_prime: lambda,
    };
    TwinModule { gm, high_run, k }
}

/// A pair of persistence modules with explicit morphisms forming a
/// δ-interleaving, where δ spans `delta_steps` positions of a uniform grid.
pub struct InterleavedPair {
    pub v: PersistenceModule<Gf2>,
    pub w: PersistenceModule<Gf2>,
    pub delta_steps: usize,
    /// `delta_steps` times the uniform grid spacing.
    pub delta: Rational,
    pub phi: Vec<Matrix<Gf2>>,
    pub psi: Vec<Matrix<Gf2>>,
}

/// Random interleaved pair by index advance with clamping: W_i = V_{σ(i)}
/// with σ(i) = min(i + d, n−1) and the same colimit, and φ, ψ the evident
/// composites of V's structure maps. All interleaving identities then hold
/// by functoriality, and spectral invariants move by at most δ = d·spacing.
pub fn gen_interleaved_pair(rng: &mut ChaCha8Rng) -> InterleavedPair {
    let n = rng.gen_range(4u32..=9) as usize;
    let spacing: Rational = pick(rng, &[rat(1, 4), rat(1, 3), rat(1, 2), rat_int(1), rat_int(2)]).clone();
    let start = gen_rational(rng, -6, 6, &[1, 2]);
    let grid: Vec<Rational> = (0..n)
        .map(|i| &start + &spacing * rat_int(i as i64))
        .collect();
    let v = gen_module_on_grid(rng, grid, 4, 3);

    let d = (rng.gen_range(0u32..=3) as usize).min(n - 1);
    let sigma = |i: usize| (i + d).min(n - 1);

    let w = PersistenceModule {
        grid: v.grid.clone(),
        dims: (0..n).map(|i| v.dims[sigma(i)]).collect(),
        steps: (0..n - 1)
            .map(|i| v.composite_map(sigma(i), sigma(i + 1)).expect("in range"))
            .collect(),
        colimit_dim: v.colimit_dim,
        colimit_maps: (0..n).map(|i| v.colimit_maps[sigma(i)].clone()).collect(),
    };
    let phi = (0..n - d)
        .map(|i| v.composite_map(i, sigma(i + d)).expect("in range"))
        .collect();
    let psi = (0..n - d)
        .map(|i| v.composite_map(sigma(i), i + d).expect("in range"))
        .collect();
    let delta = &spacing * rat_int(d as i64);
    InterleavedPair {
        v,
        w,
        delta_steps: d,
        delta,
        phi,
        psi,
    }
}

/// Subadditive sequence c̃_k = αk + β·[period ∤ k] for k = 1..=horizon,
/// returned with α — the exact infimum of c̃_k/k, attained at k = period.
pub fn gen_subadditive(rng: &mut ChaCha8Rng, horizon: usize) -> (Vec<Rational>, Rational) {
    let alpha = rat(rng.gen_range(0i64..=8), rng.gen_range(1i64..=4));
    let beta = rat_int(rng.gen_range(0i64..=5));
    let period = rng.gen_range(2u32..=5) as usize;
    let ctilde = (1..=horizon)
        .map(|k| {
            let base = &alpha * rat_int(k as i64);
            if k % period == 0 {
                base
            } else {
                base + &beta
            }
        })
        .collect();
    (ctilde, alpha)
}

/// Random valid envelope: 1–4 pieces with breakpoints on a 1/12 lattice,
/// max ≥ min on each piece, and a short sorted spectrum.
pub fn gen_envelope(rng: &mut ChaCha8Rng) -> ContactEnvelope {
    let pieces = rng.gen_range(1u32..=4) as usize;
    let mut cuts = BTreeSet::new();
    while cuts.len() < pieces - 1 {
        cuts.insert(rng.gen_range(1i64..=11));
    }
    let mut breakpoints = vec![rat_int(0)];
    breakpoints.extend(cuts.into_iter().map(|c| rat(c, 12)));
    breakpoints.push(rat_int(1));

    let mut max_env = Vec::with_capacity(pieces);
    let mut min_env = Vec::with_capacity(pieces);
    for _ in 0..pieces {
        let lo = gen_rational(rng, -5, 5, &[1, 2, 4]);
        let hi = &lo + rat(rng.gen_range(0i64..=12), 2);
        min_env.push(lo);
        max_env.push(hi);
    }

    let mut spectrum: Vec<Rational> = (0..rng.gen_range(0u32..=3))
        .map(|_| gen_rational(rng, -4, 4, &[1, 2]))
        .collect();
    spectrum.sort();
    spectrum.dedup();

    ContactEnvelope {
        breakpoints,
        max_env,
        min_env,
        spectrum,
    }
}
