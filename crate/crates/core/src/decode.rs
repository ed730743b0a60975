//! Syndrome decoding `s -> A^-1 s` for N-injective matrices.
//!
//! For an `N`-injective `A` every syndrome has at most one weight-`N`
//! preimage. Three decoders are provided: a lookup table, exhaustive search
//! and a meet-in-the-middle search over two half-weight tables.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::bits::{binomial, combinations, BitMatrix, BitVector};
use crate::error::{Error, Result};

/// Default cap on enumerated table entries.
pub const DEFAULT_BUDGET: u128 = 1 << 26;

/// Largest column count for exhaustive searches.
pub const BRUTE_FORCE_MAX_COLUMNS: usize = 24;

pub trait Decoder: Send + Sync {
    /// The unique weight-`N` preimage of `s`, if any.
    fn decode(&self, s: &BitVector) -> Option<BitVector>;

    fn particles(&self) -> usize;
}

fn syndrome(columns: &[BitVector], rows: usize, positions: &[usize]) -> BitVector {
    let mut s = BitVector::zeros(rows);
    for &p in positions {
        s ^= &columns[p - 1];
    }
    s
}

fn check_budget(what: &'static str, needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        return Err(Error::Budget {
            what,
            needed,
            budget,
        });
    }
    Ok(())
}

/// Even-weight kernel vector that is the difference of two weight-`N`
/// strings (weight at most `2 min(N, M - N)`), as column positions.
pub fn kernel_witness(a: &BitMatrix, n: usize) -> Result<Option<Vec<usize>>> {
    let m = a.ncols();
    if m > BRUTE_FORCE_MAX_COLUMNS {
        return Err(Error::Budget {
            what: "weight-bounded kernel search",
            needed: m as u128,
            budget: BRUTE_FORCE_MAX_COLUMNS as u128,
        });
    }
    let columns = a.columns();
    for k in 1..=n.min(m.saturating_sub(n)) {
        if let Some(c) = combinations(m, 2 * k)
            .par_bridge()
            .find_any(|c| syndrome(&columns, a.nrows(), c).is_zero())
        {
            // find_any is nondeterministic; rescan sequentially for the first hit
            let first = combinations(m, 2 * k)
                .find(|c| syndrome(&columns, a.nrows(), c).is_zero())
                .unwrap_or(c);
            return Ok(Some(first));
        }
    }
    Ok(None)
}

/// Whether no two weight-`N` strings share a syndrome.
pub fn is_n_injective(a: &BitMatrix, n: usize) -> Result<bool> {
    Ok(kernel_witness(a, n)?.is_none())
}

/// Exhaustive scan of all weight-`N` strings.
pub fn brute_force_decode(a: &BitMatrix, n: usize, s: &BitVector) -> Result<Option<BitVector>> {
    let m = a.ncols();
    if m > BRUTE_FORCE_MAX_COLUMNS {
        return Err(Error::Budget {
            what: "brute-force decode",
            needed: m as u128,
            budget: BRUTE_FORCE_MAX_COLUMNS as u128,
        });
    }
    if s.len() != a.nrows() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            actual: s.len(),
        });
    }
    let columns = a.columns();
    let mut found: Option<Vec<usize>> = None;
    for c in combinations(m, n) {
        if syndrome(&columns, a.nrows(), &c) == *s {
            if let Some(first) = found {
                return Err(Error::InjectivityViolation {
                    particles: n,
                    first,
                    second: c,
                });
            }
            found = Some(c);
        }
    }
    Ok(found.map(|c| BitVector::from_positions(m, c)))
}

/// Exhaustive decoder with a fixed matrix.
#[derive(Clone, Debug)]
pub struct BruteForceDecoder {
    a: BitMatrix,
    n: usize,
}

impl BruteForceDecoder {
    pub fn new(a: BitMatrix, n: usize) -> Result<Self> {
        if a.ncols() > BRUTE_FORCE_MAX_COLUMNS {
            return Err(Error::Budget {
                what: "brute-force decode",
                needed: a.ncols() as u128,
                budget: BRUTE_FORCE_MAX_COLUMNS as u128,
            });
        }
        Ok(BruteForceDecoder { a, n })
    }
}

impl Decoder for BruteForceDecoder {
    fn decode(&self, s: &BitVector) -> Option<BitVector> {
        brute_force_decode(&self.a, self.n, s).expect("matrix checked at construction")
    }

    fn particles(&self) -> usize {
        self.n
    }
}

/// Hash table of every weight-`N` syndrome.
#[derive(Clone, Debug)]
pub struct LookupDecoder {
    n: usize,
    table: HashMap<BitVector, BitVector>,
}

impl LookupDecoder {
    pub fn new(a: &BitMatrix, n: usize) -> Result<Self> {
        Self::with_budget(a, n, DEFAULT_BUDGET)
    }

    pub fn with_budget(a: &BitMatrix, n: usize, budget: u128) -> Result<Self> {
        let m = a.ncols();
        check_budget("syndrome lookup table", binomial(m, n), budget)?;
        let columns = a.columns();
        let mut table = HashMap::with_capacity(binomial(m, n) as usize);
        let mut owner: HashMap<BitVector, Vec<usize>> = HashMap::new();
        for c in combinations(m, n) {
            let s = syndrome(&columns, a.nrows(), &c);
            if let Some(first) = owner.get(&s) {
                return Err(Error::InjectivityViolation {
                    particles: n,
                    first: first.clone(),
                    second: c,
                });
            }
            owner.insert(s.clone(), c.clone());
            table.insert(s, BitVector::from_positions(m, c));
        }
        Ok(LookupDecoder { n, table })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl Decoder for LookupDecoder {
    fn decode(&self, s: &BitVector) -> Option<BitVector> {
        self.table.get(s).cloned()
    }

    fn particles(&self) -> usize {
        self.n
    }
}

/// Sorted syndrome tables `T_1, T_2` over weights `N_1 = ceil(N/2)` and
/// `N_2 = floor(N/2)`, each entry paired with its preimage.
#[derive(Clone, Debug)]
pub struct SyndromeTables {
    n: usize,
    n1: usize,
    n2: usize,
    t1: Vec<(BitVector, BitVector)>,
    t2: Vec<(BitVector, BitVector)>,
}

/// Table of all weight-`weight` syndromes. Two equal entries are an
/// injectivity violation whenever both can be completed to weight `n` by the
/// same columns; otherwise (only possible when `N > M/2`) they are kept.
fn build_table(a: &BitMatrix, weight: usize, n: usize) -> Result<Vec<(BitVector, BitVector)>> {
    let m = a.ncols();
    let columns = a.columns();
    let combos: Vec<Vec<usize>> = combinations(m, weight).collect();
    let mut table: Vec<(BitVector, Vec<usize>)> = combos
        .into_par_iter()
        .map(|c| (syndrome(&columns, a.nrows(), &c), c))
        .collect();
    table.par_sort();
    for w in table.windows(2).filter(|w| w[0].0 == w[1].0) {
        let used: Vec<usize> = (1..=m)
            .filter(|j| w[0].1.contains(j) || w[1].1.contains(j))
            .collect();
        let free: Vec<usize> = (1..=m)
            .filter(|j| !used.contains(j))
            .take(n - weight)
            .collect();
        if free.len() == n - weight {
            let extend = |c: &[usize]| {
                let mut v = [c, &free].concat();
                v.sort_unstable();
                v
            };
            return Err(Error::InjectivityViolation {
                particles: n,
                first: extend(&w[0].1),
                second: extend(&w[1].1),
            });
        }
    }
    Ok(table
        .into_iter()
        .map(|(s, c)| (s, BitVector::from_positions(m, c)))
        .collect())
}

impl SyndromeTables {
    pub fn n_split(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn table_sizes(&self) -> (usize, usize) {
        (self.t1.len(), self.t2.len())
    }

    /// Syndromes of `T_1`, in sorted order.
    pub fn t1_syndromes(&self) -> impl Iterator<Item = &BitVector> {
        self.t1.iter().map(|(s, _)| s)
    }
}

pub fn build_tables(a: &BitMatrix, n: usize) -> Result<SyndromeTables> {
    build_tables_with_budget(a, n, DEFAULT_BUDGET)
}

pub fn build_tables_with_budget(a: &BitMatrix, n: usize, budget: u128) -> Result<SyndromeTables> {
    let m = a.ncols();
    let n1 = n.div_ceil(2);
    let n2 = n / 2;
    check_budget(
        "meet-in-the-middle tables",
        binomial(m, n1) + binomial(m, n2),
        budget,
    )?;
    let t1 = build_table(a, n1, n)?;
    let t2 = if n2 == n1 {
        t1.clone()
    } else {
        build_table(a, n2, n)?
    };
    Ok(SyndromeTables { n, n1, n2, t1, t2 })
}

/// For each `t_1` in `T_1`, binary-searches `t_1 + s` in `T_2`. Hits whose
/// combined preimage does not have weight `N` are skipped.
pub fn mitm_decode(tables: &SyndromeTables, s: &BitVector) -> Option<BitVector> {
    for (t1, u1) in &tables.t1 {
        let target = t1 ^ s;
        let start = tables.t2.partition_point(|(t, _)| *t < target);
        for (_, u2) in tables.t2[start..].iter().take_while(|(t, _)| *t == target) {
            let x = u1 ^ u2;
            if x.weight() == tables.n {
                return Some(x);
            }
            log::debug!(
                "skipping overlapping halves for syndrome {s}: weight {} instead of {}",
                x.weight(),
                tables.n
            );
        }
    }
    None
}

impl Decoder for SyndromeTables {
    fn decode(&self, s: &BitVector) -> Option<BitVector> {
        mitm_decode(self, s)
    }

    fn particles(&self) -> usize {
        self.n
    }
}
