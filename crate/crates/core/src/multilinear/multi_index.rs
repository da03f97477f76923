use crate::error::{Error, Result};

/// Binomial coefficient `n choose k`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Strictly increasing `k`-tuples drawn from `0..n`, in lexicographic order.
///
/// Indices are zero-based. Every coefficient vector in the crate is laid out
/// against this table, so the ordering is part of the data format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiIndexTable {
    n: usize,
    k: usize,
    indices: Vec<Vec<usize>>,
}

impl MultiIndexTable {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::DegreeOutOfRange { n, k });
        }
        let mut indices = Vec::with_capacity(binomial(n, k));
        let mut current: Vec<usize> = (0..k).collect();
        loop {
            indices.push(current.clone());
            // advance to the next combination
            let mut pos = k;
            loop {
                if pos == 0 {
                    return Ok(Self { n, k, indices });
                }
                pos -= 1;
                if current[pos] < n - k + pos {
                    break;
                }
            }
            current[pos] += 1;
            for q in pos + 1..k {
                current[q] = current[q - 1] + 1;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn rank(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[Vec<usize>] {
        &self.indices
    }

    pub fn get(&self, pos: usize) -> &[usize] {
        &self.indices[pos]
    }

    /// Position of a strictly increasing tuple in the table.
    pub fn position(&self, index: &[usize]) -> Option<usize> {
        self.indices
            .binary_search_by(|probe| probe.as_slice().cmp(index))
            .ok()
    }

    /// Complement of the tuple at `pos`, as an increasing tuple.
    pub fn complement(&self, pos: usize) -> Vec<usize> {
        let idx = &self.indices[pos];
        (0..self.n).filter(|i| !idx.contains(i)).collect()
    }
}

/// Convenience wrapper matching the free-function form used elsewhere.
pub fn lex_multi_indices(n: usize, k: usize) -> Result<MultiIndexTable> {
    MultiIndexTable::new(n, k)
}

/// Sign of the permutation that sorts `seq` (entries distinct), or 0 if any repeat.
pub fn permutation_sign(seq: &[usize]) -> i32 {
    let mut sign = 1;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] == seq[j] {
                return 0;
            }
            if seq[i] > seq[j] {
                sign = -sign;
            }
        }
    }
    sign
}
