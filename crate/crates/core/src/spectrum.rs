//! Eigenvalue lists with the metadata needed to index them correctly.

use crate::geom::Point;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BcMode {
    Neumann,
    Dirichlet,
    Mixed,
    Torus,
    BoxNeumann,
    BoxDirichlet,
    DiskNeumann,
    DiskDirichlet,
}

impl BcMode {
    /// 0 when the spectrum starts with the constant mode, 1 otherwise.
    pub fn index_base(self) -> usize {
        match self {
            BcMode::Neumann | BcMode::Torus | BcMode::BoxNeumann | BcMode::DiskNeumann => 0,
            BcMode::Dirichlet | BcMode::Mixed | BcMode::BoxDirichlet | BcMode::DiskDirichlet => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    Polygon { vertices: Vec<Point> },
    Box { lengths: Vec<f64> },
    Torus { lengths: Vec<f64> },
    Disk { radius: f64 },
    Matrix { n: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub domain: Domain,
    pub bc_mode: BcMode,
    pub index_base: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    pub eigenvalues: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<f64>,
    /// Relative uncertainty per eigenvalue from one mesh refinement step.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub uncertainty: Vec<f64>,
}

impl Spectrum {
    pub fn new(domain: Domain, bc_mode: BcMode, eigenvalues: Vec<f64>) -> Self {
        Spectrum {
            domain,
            bc_mode,
            index_base: bc_mode.index_base(),
            h: None,
            eigenvalues,
            residuals: Vec::new(),
            uncertainty: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Eigenvalue with index `k` in this spectrum's own convention.
    pub fn lambda(&self, k: usize) -> Option<f64> {
        k.checked_sub(self.index_base)
            .and_then(|i| self.eigenvalues.get(i).copied())
    }

    /// Relative uncertainty of the eigenvalue with index `k`, zero when
    /// none was recorded.
    pub fn uncertainty_of(&self, k: usize) -> f64 {
        k.checked_sub(self.index_base)
            .and_then(|i| self.uncertainty.get(i).copied())
            .unwrap_or(0.0)
    }

    /// Largest index available.
    pub fn max_index(&self) -> Option<usize> {
        (!self.eigenvalues.is_empty()).then(|| self.eigenvalues.len() - 1 + self.index_base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing_follows_bc_mode() {
        let neu = Spectrum::new(Domain::Disk { radius: 1.0 }, BcMode::Neumann, vec![0.0, 1.0, 2.0]);
        assert_eq!(neu.lambda(0), Some(0.0));
        assert_eq!(neu.lambda(2), Some(2.0));
        assert_eq!(neu.max_index(), Some(2));
        let dir = Spectrum::new(Domain::Disk { radius: 1.0 }, BcMode::Dirichlet, vec![5.0, 7.0]);
        assert_eq!(dir.lambda(0), None);
        assert_eq!(dir.lambda(1), Some(5.0));
        assert_eq!(dir.max_index(), Some(2));
    }

    #[test]
    fn json_shape() {
        let mut s = Spectrum::new(Domain::Box { lengths: vec![1.0, 2.0] }, BcMode::BoxNeumann, vec![0.0]);
        s.h = Some(0.1);
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["bc_mode"], "BOX_NEUMANN");
        assert_eq!(v["domain"]["kind"], "box");
        assert_eq!(v["h"], 0.1);
        let back: Spectrum = serde_json::from_value(v).unwrap();
        assert_eq!(back, s);
    }
}
