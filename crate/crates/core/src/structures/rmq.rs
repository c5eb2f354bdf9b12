/// Sparse table answering inclusive range minima in O(1).
#[derive(Clone, Debug)]
pub struct RmqTable<T> {
    levels: Vec<Vec<T>>,
}

impl<T: Copy + PartialOrd> RmqTable<T> {
    pub fn new(values: Vec<T>) -> Self {
        let n = values.len();
        let mut levels = vec![values];
        let mut span = 1;
        while 2 * span <= n {
            let prev = levels.last().unwrap();
            let next: Vec<T> = (0..=n - 2 * span)
                .map(|i| {
                    let (a, b) = (prev[i], prev[i + span]);
                    if b < a {
                        b
                    } else {
                        a
                    }
                })
                .collect();
            levels.push(next);
            span *= 2;
        }
        RmqTable { levels }
    }

    pub fn len(&self) -> usize {
        self.levels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Minimum of `values[lo..=hi]` (0-based); `None` when the range is
    /// empty or out of bounds.
    pub fn query(&self, lo: usize, hi: usize) -> Option<T> {
        if lo > hi || hi >= self.len() {
            return None;
        }
        let k = (usize::BITS - 1 - (hi - lo + 1).leading_zeros()) as usize;
        let row = &self.levels[k];
        let (a, b) = (row[lo], row[hi + 1 - (1 << k)]);
        Some(if b < a { b } else { a })
    }
}
