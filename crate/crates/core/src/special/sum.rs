/// Neumaier (improved Kahan–Babuška) summation that also tracks the largest
/// term seen, so callers can report how much cancellation a sum suffered.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
    max_abs_term: f64,
    abs_total: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: f64) {
        let t = self.sum + term;
        if self.sum.abs() >= term.abs() {
            self.compensation += (self.sum - t) + term;
        } else {
            self.compensation += (term - t) + self.sum;
        }
        self.sum = t;
        self.max_abs_term = self.max_abs_term.max(term.abs());
        self.abs_total += term.abs();
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    pub fn max_abs_term(&self) -> f64 {
        self.max_abs_term
    }

    /// Sum of absolute values of every term added so far.
    pub fn abs_total(&self) -> f64 {
        self.abs_total
    }

    /// `max |term| / |sum|`; infinite when the sum cancels to zero exactly.
    pub fn cancellation(&self) -> f64 {
        let v = self.value().abs();
        if self.max_abs_term == 0.0 {
            1.0
        } else if v == 0.0 {
            f64::INFINITY
        } else {
            self.max_abs_term / v
        }
    }

    /// Rounding-error bound for the accumulated value: the terms themselves
    /// are assumed accurate to a few ulps, which dominates the Neumaier error.
    pub fn rounding_error(&self) -> f64 {
        8.0 * f64::EPSILON * self.abs_total
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for t in iter {
            s.add(t);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_addend_lost_by_naive_sum() {
        let terms = [1e16, 1.0, -1e16];
        let naive: f64 = terms.iter().sum();
        let s: CompensatedSum = terms.iter().copied().collect();
        assert_eq!(naive, 0.0);
        assert_eq!(s.value(), 1.0);
        assert_eq!(s.cancellation(), 1e16);
    }
}
