//! Linear algebra over F_2 on sparse vectors with arbitrary ordered keys.

use std::collections::BTreeMap;

/// Packed bit rows over a shared column index.
#[derive(Clone, Debug)]
struct Row {
    bits: Vec<u64>,
    /// Which input vectors were summed to produce this row.
    combo: Vec<u64>,
}

fn xor(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x ^= y;
    }
}

fn get(v: &[u64], i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

fn set(v: &mut [u64], i: usize) {
    v[i / 64] |= 1 << (i % 64);
}

fn first_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| 64 * i + w.trailing_zeros() as usize)
}

/// Echelon form of a list of vectors, remembering how each row was formed.
pub struct Echelon<K: Ord + Clone> {
    columns: BTreeMap<K, usize>,
    n_inputs: usize,
    pivots: BTreeMap<usize, Row>,
    kernel: Vec<Vec<usize>>,
}

impl<K: Ord + Clone> Echelon<K> {
    /// Row-reduces the vectors; keys outside every vector are ignored in `solve`.
    pub fn new(vectors: &[Vec<K>]) -> Echelon<K> {
        let mut columns = BTreeMap::new();
        for v in vectors {
            for k in v {
                let n = columns.len();
                columns.entry(k.clone()).or_insert(n);
            }
        }
        let words = columns.len().div_ceil(64).max(1);
        let cwords = vectors.len().div_ceil(64).max(1);
        let mut pivots: BTreeMap<usize, Row> = BTreeMap::new();
        let mut kernel = Vec::new();
        for (i, v) in vectors.iter().enumerate() {
            let mut bits = vec![0u64; words];
            for k in v {
                let c = columns[k];
                bits[c / 64] ^= 1 << (c % 64);
            }
            let mut combo = vec![0u64; cwords];
            set(&mut combo, i);
            let mut row = Row { bits, combo };
            while let Some(p) = first_bit(&row.bits) {
                match pivots.get(&p) {
                    Some(pr) => {
                        xor(&mut row.bits, &pr.bits);
                        xor(&mut row.combo, &pr.combo);
                    }
                    None => break,
                }
            }
            match first_bit(&row.bits) {
                Some(p) => {
                    pivots.insert(p, row);
                }
                None => kernel.push((0..vectors.len()).filter(|&j| get(&row.combo, j)).collect()),
            }
        }
        Echelon {
            columns,
            n_inputs: vectors.len(),
            pivots,
            kernel,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// A basis of the relations among the inputs, each as a list of input indices.
    pub fn kernel(&self) -> &[Vec<usize>] {
        &self.kernel
    }

    /// Indices of inputs summing to `target`, or None if it is outside the span.
    pub fn solve(&self, target: &[K]) -> Option<Vec<usize>> {
        let words = self.columns.len().div_ceil(64).max(1);
        let mut bits = vec![0u64; words];
        for k in target {
            let c = *self.columns.get(k)?;
            bits[c / 64] ^= 1 << (c % 64);
        }
        let mut combo = vec![0u64; self.n_inputs.div_ceil(64).max(1)];
        while let Some(p) = first_bit(&bits) {
            let pr = self.pivots.get(&p)?;
            xor(&mut bits, &pr.bits);
            xor(&mut combo, &pr.combo);
        }
        Some((0..self.n_inputs).filter(|&j| get(&combo, j)).collect())
    }
}
