use super::SystemPair;
use crate::error::AssemblyError;
use crate::mesh::DofSet;
use crate::scalar::Scalar;

/// Removes the rows and columns of `constrained` dofs. The result may be empty (0 x 0),
/// which callers detect through [`SystemPair::is_empty`].
pub fn apply_essential_bc<T: Scalar>(sys: &SystemPair<T>, constrained: &DofSet) -> Result<SystemPair<T>, AssemblyError> {
    if let Some(&d) = constrained.iter().find(|&&d| d >= sys.fdof) {
        return Err(AssemblyError::DofOutOfRange(d));
    }
    let keep: Vec<usize> = (0..sys.fdof).filter(|d| !constrained.contains(d)).collect();
    Ok(SystemPair {
        k: sys.k.restrict(&keep),
        m: sys.m.restrict(&keep),
        dof_map: keep.iter().map(|&d| sys.dof_map[d]).collect(),
        formulation: sys.formulation,
        fdof: keep.len(),
    })
}
