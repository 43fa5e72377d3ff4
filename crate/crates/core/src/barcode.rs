//! Barcodes — interval multisets over a rational grid — and the exact
//! bottleneck distance between them.
//!
//! Intervals are closed and recorded by grid values: `birth` is the first
//! grid value where a class lives, `death` either the last grid value where
//! it is still alive or [`Death::Colimit`] for classes that survive into the
//! colimit space. Degenerate one-point bars are legal and meaningful (they
//! carry the ε-scale of the fixture grids).

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::field::{Extended, Rational};
use crate::matching::max_matching;

/// Right endpoint of a bar.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Death {
    /// Last grid value at which the class is alive.
    At(Rational),
    /// The class survives into the colimit space.
    Colimit,
}

impl PartialOrd for Death {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Death {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Death::At(a), Death::At(b)) => a.cmp(b),
            (Death::At(_), Death::Colimit) => Ordering::Less,
            (Death::Colimit, Death::At(_)) => Ordering::Greater,
            (Death::Colimit, Death::Colimit) => Ordering::Equal,
        }
    }
}

/// One interval with multiplicity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bar {
    pub birth: Rational,
    pub death: Death,
    pub mult: usize,
}

impl Bar {
    pub fn finite(birth: Rational, death: Rational, mult: usize) -> Bar {
        Bar {
            birth,
            death: Death::At(death),
            mult,
        }
    }

    pub fn colimit(birth: Rational, mult: usize) -> Bar {
        Bar {
            birth,
            death: Death::Colimit,
            mult,
        }
    }
}

/// Interval multiset in canonical form: bars sorted by (birth, death),
/// equal bars merged, zero multiplicities dropped. Two barcodes are equal
/// as multisets iff they are equal as values.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Barcode {
    bars: Vec<Bar>,
}

impl Barcode {
    pub fn new(mut bars: Vec<Bar>) -> Barcode {
        bars.retain(|b| b.mult > 0);
        bars.sort_by(|a, b| a.birth.cmp(&b.birth).then_with(|| a.death.cmp(&b.death)));
        let mut merged: Vec<Bar> = Vec::with_capacity(bars.len());
        for bar in bars {
            match merged.last_mut() {
                Some(last) if last.birth == bar.birth && last.death == bar.death => {
                    last.mult += bar.mult;
                }
                _ => merged.push(bar),
            }
        }
        Barcode { bars: merged }
    }

    pub fn bars(&self) -> &[Bar] {
        &self.bars
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Total number of bars counted with multiplicity.
    pub fn total_mult(&self) -> usize {
        self.bars.iter().map(|b| b.mult).sum()
    }

    /// Number of colimit bars counted with multiplicity.
    pub fn colimit_count(&self) -> usize {
        self.bars
            .iter()
            .filter(|b| b.death == Death::Colimit)
            .map(|b| b.mult)
            .sum()
    }

    /// Translates every endpoint by `s`.
    pub fn shifted(&self, s: &Rational) -> Barcode {
        let bars = self
            .bars
            .iter()
            .map(|b| Bar {
                birth: &b.birth + s,
                death: match &b.death {
                    Death::At(d) => Death::At(d + s),
                    Death::Colimit => Death::Colimit,
                },
                mult: b.mult,
            })
            .collect();
        Barcode::new(bars)
    }

    /// Pointwise reflection of the interval multiset across zero, read over
    /// the negated grid. A bar supported on [b, d] maps to one supported on
    /// [−d, −b], where a colimit bar stands for support up to `grid_max` and
    /// a reflected bar reaching −`grid_min` (the maximum of the negated
    /// grid) becomes a colimit bar. This is the barcode of the dual module.
    pub fn mirrored(&self, grid_min: &Rational, grid_max: &Rational) -> Barcode {
        let bars = self
            .bars
            .iter()
            .map(|b| {
                let right = match &b.death {
                    Death::At(d) => d.clone(),
                    Death::Colimit => grid_max.clone(),
                };
                let death = if b.birth == *grid_min {
                    Death::Colimit
                } else {
                    Death::At(-&b.birth)
                };
                Bar {
                    birth: -&right,
                    death,
                    mult: b.mult,
                }
            })
            .collect();
        Barcode::new(bars)
    }

    /// Colimit-bar births and finite bars, each expanded by multiplicity.
    fn expand(&self) -> (Vec<Rational>, Vec<(Rational, Rational)>) {
        let mut colimit = Vec::new();
        let mut finite = Vec::new();
        for bar in &self.bars {
            for _ in 0..bar.mult {
                match &bar.death {
                    Death::Colimit => colimit.push(bar.birth.clone()),
                    Death::At(d) => finite.push((bar.birth.clone(), d.clone())),
                }
            }
        }
        (colimit, finite)
    }
}

fn abs_diff(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

fn match_cost(a: &(Rational, Rational), b: &(Rational, Rational)) -> Rational {
    let db = abs_diff(&a.0, &b.0);
    let dd = abs_diff(&a.1, &b.1);
    if db >= dd {
        db
    } else {
        dd
    }
}

fn delete_cost(bar: &(Rational, Rational)) -> Rational {
    (&bar.1 - &bar.0) / Rational::from_integer(2.into())
}

/// Exact bottleneck distance.
///
/// Colimit bars may only be matched with colimit bars (at cost
/// |Δbirth|) and can never be deleted, so mismatched colimit counts give
/// +∞. Finite bars are matched at cost max(|Δbirth|, |Δdeath|) or deleted
/// at cost (death − birth)/2. The minimum over matchings of the maximum
/// cost is found by binary search over the finite set of candidate costs,
/// with a maximum-matching feasibility test at each probe.
pub fn bottleneck_distance(b1: &Barcode, b2: &Barcode) -> Extended {
    let (colimit1, finite1) = b1.expand();
    let (colimit2, finite2) = b2.expand();
    if colimit1.len() != colimit2.len() {
        return Extended::Infinity;
    }

    let mut candidates: Vec<Rational> = Vec::new();
    candidates.push(Rational::from_integer(0.into()));
    for a in &colimit1 {
        for b in &colimit2 {
            candidates.push(abs_diff(a, b));
        }
    }
    for a in &finite1 {
        for b in &finite2 {
            candidates.push(match_cost(a, b));
        }
    }
    for bar in finite1.iter().chain(finite2.iter()) {
        candidates.push(delete_cost(bar));
    }
    candidates.sort();
    candidates.dedup();

    let feasible = |eps: &Rational| -> bool {
        // Colimit side: perfect matching under the |Δbirth| ≤ eps edges.
        let k = colimit1.len();
        if k > 0 {
            let mut edges = Vec::new();
            for (i, a) in colimit1.iter().enumerate() {
                for (j, b) in colimit2.iter().enumerate() {
                    if abs_diff(a, b) <= *eps {
                        edges.push((i, j));
                    }
                }
            }
            if max_matching(k, k, &edges) < k {
                return false;
            }
        }

        // Finite side: perfect matching on the diagonal-augmented graph.
        // Left = bars1 + one slot per bar2; right = bars2 + one slot per
        // bar1. A bar pairs with its own slot iff it is deletable at eps;
        // slots pair with each other freely.
        let (n1, n2) = (finite1.len(), finite2.len());
        if n1 + n2 == 0 {
            return true;
        }
        let mut edges = Vec::new();
        for (i, a) in finite1.iter().enumerate() {
            for (j, b) in finite2.iter().enumerate() {
                if match_cost(a, b) <= *eps {
                    edges.push((i, j));
                }
            }
        }
        for (i, a) in finite1.iter().enumerate() {
            if delete_cost(a) <= *eps {
                edges.push((i, n2 + i));
            }
        }
        for (j, b) in finite2.iter().enumerate() {
            if delete_cost(b) <= *eps {
                edges.push((n1 + j, j));
            }
        }
        for j in 0..n2 {
            for i in 0..n1 {
                edges.push((n1 + j, n2 + i));
            }
        }
        max_matching(n1 + n2, n1 + n2, &edges) == n1 + n2
    };

    // Smallest feasible candidate; the largest candidate is always feasible
    // (every pair and deletion fits under it), so the search cannot fail.
    let mut lo = 0;
    let mut hi = candidates.len() - 1;
    debug_assert!(feasible(&candidates[hi]));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if feasible(&candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Extended::Finite(candidates[lo].clone())
}
