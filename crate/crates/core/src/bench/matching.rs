use serde::{Deserialize, Serialize};

use super::cases::ReferenceSlot;

/// Default matching window in percent.
pub const DEFAULT_WINDOW: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchPair {
    pub computed: f64,
    pub reference: f64,
    /// Index of the reference slot, 0-based.
    pub slot: usize,
    /// `|computed - reference| / reference * 100`.
    pub error_pct: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MissedValue {
    pub slot: usize,
    pub reference: f64,
    pub singular: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchReport {
    pub pairs: Vec<MatchPair>,
    pub missed: Vec<MissedValue>,
    pub spurious: Vec<f64>,
    /// Computed values left over once every reference slot has been consumed.
    pub beyond_range: Vec<f64>,
    /// Error of every reference slot, `None` where the slot was missed.
    pub slot_errors: Vec<Option<f64>>,
    pub window_pct: f64,
}

impl MatchReport {
    /// Worst error among the first `k` slots; `None` if any of them was missed.
    pub fn max_error_first_k(&self, k: usize) -> Option<f64> {
        self.max_error_range(1, k)
    }

    /// Worst error among `k` slots starting at the 1-based rank `start`; `None` if any of
    /// them was missed or the range is empty.
    pub fn max_error_range(&self, start: usize, k: usize) -> Option<f64> {
        let from = start.max(1) - 1;
        let to = (from + k).min(self.slot_errors.len());
        if from >= to {
            return None;
        }
        self.slot_errors[from..to]
            .iter()
            .try_fold(0.0f64, |acc, e| e.map(|e| acc.max(e)))
    }

    pub fn missed_singular(&self) -> usize {
        self.missed.iter().filter(|m| m.singular).count()
    }

    /// Spurious values inside the open interval `(lo, hi)`.
    pub fn spurious_between(&self, lo: f64, hi: f64) -> usize {
        self.spurious.iter().filter(|&&v| v > lo && v < hi).count()
    }
}

fn relative_pct(computed: f64, reference: f64) -> f64 {
    (computed - reference).abs() / reference * 100.0
}

/// Greedy ascending assignment of computed eigenvalues to reference slots.
///
/// Both lists are walked in ascending order. The heads are paired when the computed value
/// lies within `window_pct` of the reference; otherwise the smaller head is emitted as
/// spurious (computed) or missed (reference). References left when the computed list runs
/// out are missed; computed values left when the references run out are beyond range.
pub fn match_eigenvalues(computed: &[f64], reference: &[ReferenceSlot], window_pct: f64) -> MatchReport {
    let mut computed = computed.to_vec();
    computed.sort_by(f64::total_cmp);
    let mut slots: Vec<(usize, ReferenceSlot)> = reference.iter().copied().enumerate().collect();
    slots.sort_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)));

    let mut report = MatchReport {
        pairs: Vec::new(),
        missed: Vec::new(),
        spurious: Vec::new(),
        beyond_range: Vec::new(),
        slot_errors: vec![None; reference.len()],
        window_pct,
    };
    let (mut i, mut j) = (0, 0);
    while i < computed.len() && j < slots.len() {
        let (c, (slot, r)) = (computed[i], slots[j]);
        let err = relative_pct(c, r.value);
        if err <= window_pct {
            report.pairs.push(MatchPair {
                computed: c,
                reference: r.value,
                slot,
                error_pct: err,
            });
            report.slot_errors[slot] = Some(err);
            i += 1;
            j += 1;
        } else if c < r.value {
            report.spurious.push(c);
            i += 1;
        } else {
            report.missed.push(MissedValue {
                slot,
                reference: r.value,
                singular: r.singular,
            });
            j += 1;
        }
    }
    report.beyond_range.extend_from_slice(&computed[i..]);
    report.missed.extend(slots[j..].iter().map(|&(slot, r)| MissedValue {
        slot,
        reference: r.value,
        singular: r.singular,
    }));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slot(value: f64) -> ReferenceSlot {
        ReferenceSlot { value, singular: false }
    }

    #[test]
    fn l_shape_q4_rows() {
        let refs = [
            ReferenceSlot {
                value: 0.591790,
                singular: true,
            },
            slot(1.432320),
            slot(4.005540),
            slot(4.005540),
        ];
        let r = match_eigenvalues(&[1.479654, 1.620830, 4.012869], &refs, DEFAULT_WINDOW);
        assert_eq!(r.missed[0].reference, 0.591790);
        assert!(r.missed[0].singular);
        assert_eq!(r.pairs[0].computed, 1.479654);
        assert_eq!(r.pairs[0].reference, 1.432320);
        assert!((r.pairs[0].error_pct - 3.30).abs() < 0.01);
        assert_eq!(r.spurious, vec![1.620830]);
        assert_eq!(r.pairs[1].computed, 4.012869);
        assert_eq!(r.pairs[1].reference, 4.005540);
        // the computed list ends before the second copy of 4.00554
        assert_eq!(r.missed.len(), 2);
        assert_eq!(r.missed_singular(), 1);
    }

    #[test]
    fn identical_lists_match_exactly() {
        let refs: Vec<_> = [1.0, 1.0, 2.0, 4.0].into_iter().map(slot).collect();
        let r = match_eigenvalues(&[1.0, 1.0, 2.0, 4.0], &refs, DEFAULT_WINDOW);
        assert_eq!(r.pairs.len(), 4);
        assert!(r.missed.is_empty() && r.spurious.is_empty());
        assert_eq!(r.max_error_first_k(4), Some(0.0));
    }

    #[test]
    fn edge_element_captures_the_singular_value() {
        let refs = [
            ReferenceSlot {
                value: 0.591790,
                singular: true,
            },
            slot(1.432320),
        ];
        let r = match_eigenvalues(&[0.596170, 1.434491], &refs, DEFAULT_WINDOW);
        assert!((r.pairs[0].error_pct - 0.74).abs() < 0.01);
        assert_eq!(r.missed_singular(), 0);
    }

    #[test]
    fn values_past_the_last_reference_are_not_spurious() {
        let refs: Vec<_> = [1.0, 2.0].into_iter().map(slot).collect();
        let r = match_eigenvalues(&[1.0, 1.5, 2.0, 2.1], &refs, 15.0);
        assert_eq!(r.spurious, vec![1.5]);
        assert_eq!(r.beyond_range, vec![2.1]);
    }

    #[test]
    fn ranges_and_missing_slots() {
        let refs: Vec<_> = [1.0, 2.0, 3.0].into_iter().map(slot).collect();
        let r = match_eigenvalues(&[1.01, 3.3], &refs, 15.0);
        assert_eq!(r.slot_errors[1], None);
        assert!((r.max_error_range(1, 1).unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(r.max_error_range(1, 2), None);
        assert!((r.max_error_range(3, 5).unwrap() - 10.0).abs() < 1e-9);
        assert_eq!(r.max_error_range(4, 1), None);
    }

    #[test]
    fn unsorted_input_is_sorted_first() {
        let refs: Vec<_> = [1.0, 2.0].into_iter().map(slot).collect();
        assert_eq!(
            match_eigenvalues(&[2.0, 1.0], &refs, 15.0),
            match_eigenvalues(&[1.0, 2.0], &refs, 15.0)
        );
    }
}
