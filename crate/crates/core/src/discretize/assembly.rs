//! P1 stiffness and consistent mass matrices.

use super::mesh::Mesh;
use super::sparse::SparseSymMatrix;
use super::DiscretizeError;

/// Local stiffness, local mass and area.
pub type ElementMatrices = ([[f64; 3]; 3], [[f64; 3]; 3], f64);

/// Element stiffness and mass of one triangle, or `None` for a
/// non-positive area.
pub fn element_matrices(p: [crate::geom::Point; 3]) -> Option<ElementMatrices> {
    let area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]);
    if !(area > 0.0) {
        return None;
    }
    let e = [p[2] - p[1], p[0] - p[2], p[1] - p[0]];
    let mut k = [[0.0; 3]; 3];
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = e[i].dot(e[j]) / (4.0 * area);
            m[i][j] = area / 12.0 * if i == j { 2.0 } else { 1.0 };
        }
    }
    Some((k, m, area))
}

fn pattern(mesh: &Mesh) -> (Vec<usize>, Vec<usize>) {
    let n = mesh.vertices.len();
    let mut adj: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for t in &mesh.triangles {
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    adj[t[a]].push(t[b]);
                }
            }
        }
    }
    let mut row_ptr = Vec::with_capacity(n + 1);
    row_ptr.push(0);
    let mut col_idx = Vec::new();
    for row in &mut adj {
        row.sort_unstable();
        row.dedup();
        col_idx.extend_from_slice(row);
        row_ptr.push(col_idx.len());
    }
    (row_ptr, col_idx)
}

/// Stiffness `K` and mass `M` over all vertices of the mesh.
pub fn assemble(mesh: &Mesh) -> Result<(SparseSymMatrix, SparseSymMatrix), DiscretizeError> {
    let n = mesh.vertices.len();
    let (row_ptr, col_idx) = pattern(mesh);
    let mut k = SparseSymMatrix::with_pattern(n, row_ptr.clone(), col_idx.clone());
    let mut m = SparseSymMatrix::with_pattern(n, row_ptr, col_idx);
    let total = mesh.area();
    for (ti, t) in mesh.triangles.iter().enumerate() {
        let p = t.map(|i| mesh.vertices[i]);
        let (ke, me, area) = element_matrices(p).ok_or(DiscretizeError::DegenerateTriangle(ti))?;
        if area < 1e-14 * total {
            return Err(DiscretizeError::DegenerateTriangle(ti));
        }
        for a in 0..3 {
            for b in 0..3 {
                k.add(t[a], t[b], ke[a][b]);
                m.add(t[a], t[b], me[a][b]);
            }
        }
    }
    Ok((k, m))
}

/// Drops the rows and columns of Dirichlet vertices. A vertex is Dirichlet
/// when any boundary edge touching it is Dirichlet. Returns the reduced
/// matrices and, for each retained dof, the original vertex index.
pub fn reduce_system(
    k: &SparseSymMatrix,
    m: &SparseSymMatrix,
    mesh: &Mesh,
) -> Result<(SparseSymMatrix, SparseSymMatrix, Vec<usize>), DiscretizeError> {
    let fixed = mesh.dirichlet_vertices();
    let keep: Vec<usize> = (0..mesh.vertices.len()).filter(|&i| !fixed[i]).collect();
    if keep.is_empty() {
        return Err(DiscretizeError::AllConstrained);
    }
    Ok((k.principal_submatrix(&keep), m.principal_submatrix(&keep), keep))
}
