use serde::{Deserialize, Serialize};

use crate::analytics::Method;

use super::sweep::RunRecord;

/// Where one curve meets a target probability; `None` when it does not
/// bracket the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub curve: String,
    pub gamma_avg_db: Option<f64>,
}

/// First abscissa at which a decreasing curve falls through `target`,
/// interpolated linearly in `log10(P)` between the bracketing points.
/// Points without a positive value are skipped.
pub fn crossing(points: &[(f64, f64)], target: f64) -> Option<f64> {
    let valid: Vec<(f64, f64)> = points.iter().copied().filter(|&(x, p)| x.is_finite() && p > 0.0).collect();
    for pair in valid.windows(2) {
        let ((x0, p0), (x1, p1)) = (pair[0], pair[1]);
        if p0 >= target && target >= p1 {
            if p0 == p1 {
                return Some(x0);
            }
            let (l0, l1, lt) = (p0.log10(), p1.log10(), target.log10());
            return Some(x0 + (x1 - x0) * (l0 - lt) / (l0 - l1));
        }
    }
    None
}

/// Crossings of every curve of one method, in config order.
pub fn crossings(record: &RunRecord, method: Method, target: f64) -> Vec<Crossing> {
    record
        .curve_ids()
        .into_iter()
        .map(|id| {
            let points: Vec<(f64, f64)> =
                record.curve(id, method).iter().filter_map(|r| r.value.map(|v| (r.gamma_avg_db, v))).collect();
            Crossing { curve: id.to_string(), gamma_avg_db: crossing(&points, target) }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_linear_midpoint() {
        let x = crossing(&[(20.0, 1e-3), (22.0, 1e-5)], 1e-4).unwrap();
        assert!((x - 21.0).abs() < 1e-12);
    }

    #[test]
    fn flat_curve_never_crosses() {
        assert_eq!(crossing(&[(0.0, 0.5), (10.0, 0.5), (20.0, 0.5)], 1e-4), None);
    }

    #[test]
    fn exact_hit_and_gaps() {
        assert_eq!(crossing(&[(0.0, 1.0), (1.0, 1e-4), (2.0, 1e-6)], 1e-4), Some(1.0));
        assert_eq!(crossing(&[(0.0, 1.0), (1.0, 0.0), (2.0, 1e-2), (3.0, 1e-6)], 1e-4), Some(2.5));
        assert_eq!(crossing(&[], 1e-4), None);
    }
}
