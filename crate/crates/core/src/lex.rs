//! Lexicographic weight packing.
//!
//! Each criterion gets a bit segment wide enough to hold the sum of that
//! criterion over every edge of the graph. Segments are laid out with the
//! highest-priority criterion in the most significant bits, so integer
//! comparison of packed path lengths is lexicographic comparison of the
//! per-criterion sums.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::graph::{CriteriaVector, Graph};

/// A packed lexicographic weight.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EnsembledWeight(BigUint);

impl EnsembledWeight {
    pub fn from_biguint(v: BigUint) -> Self {
        EnsembledWeight(v)
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    /// Decimal representation, as used in result documents.
    pub fn to_decimal(&self) -> String {
        self.0.to_str_radix(10)
    }

    pub fn parse_decimal(s: &str) -> Option<Self> {
        BigUint::parse_bytes(s.as_bytes(), 10).map(EnsembledWeight)
    }
}

impl From<u64> for EnsembledWeight {
    fn from(v: u64) -> Self {
        EnsembledWeight(BigUint::from(v))
    }
}

impl Add for EnsembledWeight {
    type Output = EnsembledWeight;
    fn add(self, rhs: Self) -> Self {
        EnsembledWeight(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a EnsembledWeight> for &'a EnsembledWeight {
    type Output = EnsembledWeight;
    fn add(self, rhs: &'a EnsembledWeight) -> EnsembledWeight {
        EnsembledWeight(&self.0 + &rhs.0)
    }
}

impl std::iter::Sum for EnsembledWeight {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(EnsembledWeight::zero(), |a, b| a + b)
    }
}

impl Zero for EnsembledWeight {
    fn zero() -> Self {
        EnsembledWeight(BigUint::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for EnsembledWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LayoutError {
    #[error("ensembled weight {value} has bits set above the {budget}-bit budget")]
    MalformedWeight { value: String, budget: u64 },
    #[error("expected {expected} criteria, got {got}")]
    WrongLength { expected: usize, got: usize },
}

/// Segment widths and offsets for packing `q` criteria.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitLayout {
    totals: Vec<u64>,
    segment_bits: Vec<u64>,
    offsets: Vec<u64>,
}

impl BitLayout {
    /// Layout for the given per-criterion totals.
    pub fn from_totals(totals: Vec<u64>) -> Self {
        // ceil(log2(W + 1)) is the binary length of W
        let segment_bits: Vec<u64> = totals
            .iter()
            .map(|&w| 64 - w.leading_zeros() as u64)
            .collect();
        let mut offsets = vec![0u64; totals.len()];
        let mut acc = 0u64;
        for i in (0..totals.len()).rev() {
            offsets[i] = acc;
            acc += segment_bits[i];
        }
        BitLayout {
            totals,
            segment_bits,
            offsets,
        }
    }

    pub fn q(&self) -> usize {
        self.totals.len()
    }

    /// Per-criterion sums over all edges.
    pub fn totals(&self) -> &[u64] {
        &self.totals
    }

    pub fn segment_bits(&self) -> &[u64] {
        &self.segment_bits
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    /// Total number of bits used by all segments.
    pub fn bit_budget(&self) -> u64 {
        self.segment_bits.iter().sum()
    }

    pub fn pack(&self, v: &CriteriaVector) -> Result<EnsembledWeight, LayoutError> {
        if v.len() != self.q() {
            return Err(LayoutError::WrongLength {
                expected: self.q(),
                got: v.len(),
            });
        }
        let mut acc = BigUint::zero();
        for (&w, &r) in v.as_slice().iter().zip(&self.offsets) {
            acc += BigUint::from(w) << r;
        }
        Ok(EnsembledWeight(acc))
    }

    /// Splits a packed path length back into per-criterion sums.
    pub fn unpack(&self, w: &EnsembledWeight) -> Result<CriteriaVector, LayoutError> {
        let budget = self.bit_budget();
        if w.0.bits() > budget {
            return Err(LayoutError::MalformedWeight {
                value: w.to_decimal(),
                budget,
            });
        }
        let sums = self
            .offsets
            .iter()
            .zip(&self.segment_bits)
            .map(|(&r, &l)| {
                if l == 0 {
                    return 0;
                }
                let mask = (BigUint::one() << l) - 1u32;
                let seg = (&w.0 >> r) & mask;
                // l <= 64 since every total fits in a u64
                seg.iter_u64_digits().next().unwrap_or(0)
            })
            .collect();
        Ok(CriteriaVector::new(sums))
    }
}

/// Computes the packing layout from the graph-wide per-criterion totals.
pub fn compute_layout<W>(g: &Graph<W>) -> BitLayout
where
    W: AsRef<[u64]>,
{
    let mut totals = vec![0u64; g.q()];
    for e in g.edges() {
        for (t, &w) in totals.iter_mut().zip(e.weight.as_ref()) {
            // Graph::build rejects overflowing totals
            *t += w;
        }
    }
    BitLayout::from_totals(totals)
}

impl AsRef<[u64]> for CriteriaVector {
    fn as_ref(&self) -> &[u64] {
        self.as_slice()
    }
}

/// Packed weight of every edge, indexed by edge id (absent ids hold zero).
pub fn pack_edges(g: &Graph, layout: &BitLayout) -> Vec<EnsembledWeight> {
    let mut ew = vec![EnsembledWeight::zero(); g.edge_id_bound()];
    for e in g.edges() {
        ew[e.id] = layout.pack(&e.weight).expect("graph vectors have length q");
    }
    ew
}

/// Prioritized comparison: the first differing criterion decides.
pub fn compare_lex(a: &CriteriaVector, b: &CriteriaVector) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    a.as_slice().cmp(b.as_slice())
}
