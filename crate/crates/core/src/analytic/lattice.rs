//! Spectra of boxes and flat tori by best-first lattice enumeration.

use super::AnalyticError;
use crate::geom::BoxDomain;
use crate::spectrum::{BcMode, Domain, Spectrum};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BoxBc {
    Neumann,
    Dirichlet,
}

struct Entry {
    value: f64,
    index: Vec<u32>,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    // Reversed so the max-heap pops the smallest value first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .value
            .total_cmp(&self.value)
            .then_with(|| other.index.cmp(&self.index))
    }
}

/// Visits `c·Σ (p_i/L_i)²` over `p_i ≥ start` in ascending order, calling
/// `emit(value, index)` until it returns false.
fn enumerate(lengths: &[f64], c: f64, start: u32, mut emit: impl FnMut(f64, &[u32]) -> bool) {
    let value = |idx: &[u32]| c * idx.iter().zip(lengths).map(|(&p, l)| (p as f64 / l).powi(2)).sum::<f64>();
    let first = vec![start; lengths.len()];
    let mut heap = BinaryHeap::new();
    let mut seen = HashSet::new();
    seen.insert(first.clone());
    heap.push(Entry {
        value: value(&first),
        index: first,
    });
    while let Some(Entry { value: v, index }) = heap.pop() {
        if !emit(v, &index) {
            return;
        }
        for i in 0..index.len() {
            let mut next = index.clone();
            next[i] += 1;
            if seen.insert(next.clone()) {
                heap.push(Entry {
                    value: value(&next),
                    index: next,
                });
            }
        }
    }
}

fn check(lengths: &[f64], count: usize) -> Result<(), AnalyticError> {
    if count == 0 {
        return Err(AnalyticError::InvalidArgument("count must be positive".into()));
    }
    if lengths.is_empty() || lengths.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(AnalyticError::InvalidArgument(format!("bad side lengths {lengths:?}")));
    }
    Ok(())
}

/// The `count` smallest Laplacian eigenvalues of a box, with multiplicity.
pub fn box_spectrum(b: &BoxDomain, bc: BoxBc, count: usize) -> Result<Spectrum, AnalyticError> {
    check(b.lengths(), count)?;
    let start = match bc {
        BoxBc::Neumann => 0,
        BoxBc::Dirichlet => 1,
    };
    let mut values = Vec::with_capacity(count);
    enumerate(b.lengths(), PI * PI, start, |v, _| {
        values.push(v);
        values.len() < count
    });
    let mode = match bc {
        BoxBc::Neumann => BcMode::BoxNeumann,
        BoxBc::Dirichlet => BcMode::BoxDirichlet,
    };
    Ok(Spectrum::new(
        Domain::Box {
            lengths: b.lengths().to_vec(),
        },
        mode,
        values,
    ))
}

/// The `count` smallest eigenvalues of the flat torus `Π ℝ/L_iℤ`.
pub fn torus_spectrum(lengths: &[f64], count: usize) -> Result<Spectrum, AnalyticError> {
    check(lengths, count)?;
    let mut values = Vec::with_capacity(count);
    // Nonnegative indices stand for all sign patterns of the nonzero entries.
    enumerate(lengths, 4.0 * PI * PI, 0, |v, idx| {
        let mult = 1usize << idx.iter().filter(|&&p| p != 0).count();
        for _ in 0..mult {
            if values.len() == count {
                break;
            }
            values.push(v);
        }
        values.len() < count
    });
    Ok(Spectrum::new(
        Domain::Torus {
            lengths: lengths.to_vec(),
        },
        BcMode::Torus,
        values,
    ))
}

/// Number of box eigenvalues `≤ lambda`, with multiplicity.
pub fn box_counting(b: &BoxDomain, bc: BoxBc, lambda: f64) -> u64 {
    fn rec(lengths: &[f64], budget: f64, start: u64) -> u64 {
        match lengths.split_first() {
            None => 1,
            Some((&l, rest)) => {
                let mut total = 0;
                let mut p = start;
                loop {
                    let used = (PI * p as f64 / l).powi(2);
                    if used > budget {
                        break;
                    }
                    total += rec(rest, budget - used, start);
                    p += 1;
                }
                total
            }
        }
    }
    let start = match bc {
        BoxBc::Neumann => 0,
        BoxBc::Dirichlet => 1,
    };
    rec(b.lengths(), lambda, start)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    #[test]
    fn box_examples() {
        let sq = BoxDomain::cube(2, 1.0).unwrap();
        let s = box_spectrum(&sq, BoxBc::Neumann, 4).unwrap();
        let p2 = PI * PI;
        for (a, b) in s.eigenvalues.iter().zip([0.0, p2, p2, 2.0 * p2]) {
            assert!(close(*a, b));
        }
        assert_eq!(s.index_base, 0);
        let cube = BoxDomain::cube(3, 1.0).unwrap();
        let d = box_spectrum(&cube, BoxBc::Dirichlet, 1).unwrap();
        assert!(close(d.lambda(1).unwrap(), 3.0 * p2));
        let r = BoxDomain::new(vec![2.0, 1.0]).unwrap();
        let s = box_spectrum(&r, BoxBc::Neumann, 2).unwrap();
        assert!(close(s.lambda(1).unwrap(), p2 / 4.0));
    }

    #[test]
    fn torus_examples() {
        let four = 4.0 * PI * PI;
        let s = torus_spectrum(&[1.0, 1.0], 5).unwrap();
        assert_eq!(s.eigenvalues[0], 0.0);
        assert!(s.eigenvalues[1..].iter().all(|&v| close(v, four)));
        let s = torus_spectrum(&[1.0, 2.0], 2).unwrap();
        assert!(close(s.lambda(1).unwrap(), PI * PI));
        let s = torus_spectrum(&[1.0, 1.0, 1.0], 8).unwrap();
        assert!(s.eigenvalues[1..7].iter().all(|&v| close(v, four)));
        assert!(s.eigenvalues[7] > four * 1.5);
    }

    #[test]
    fn counting_matches_enumeration() {
        let b = BoxDomain::new(vec![1.3, 0.7]).unwrap();
        let s = box_spectrum(&b, BoxBc::Dirichlet, 200).unwrap();
        let lam = 0.5 * (s.eigenvalues[120] + s.eigenvalues[121]);
        if s.eigenvalues[120] < s.eigenvalues[121] {
            assert_eq!(box_counting(&b, BoxBc::Dirichlet, lam), 121);
        }
    }

    #[test]
    fn invalid() {
        assert!(torus_spectrum(&[], 3).is_err());
        assert!(torus_spectrum(&[1.0], 0).is_err());
    }
}
