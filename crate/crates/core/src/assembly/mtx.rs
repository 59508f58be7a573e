use std::io::{self, BufRead, Write};

use super::CscMatrix;
use crate::scalar::Scalar;

/// Writes a Matrix Market coordinate file (real, general, 1-based indices).
pub fn write_matrix_market<T: Scalar, W: Write>(m: &CscMatrix<T>, mut w: W) -> io::Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", m.nrows(), m.ncols(), m.nnz())?;
    for (i, j, v) in m.iter() {
        writeln!(w, "{} {} {:.17e}", i + 1, j + 1, v.to_f64_lossy())?;
    }
    Ok(())
}

/// Reads a real coordinate Matrix Market file written by [`write_matrix_market`].
pub fn read_matrix_market<R: BufRead>(r: R) -> io::Result<CscMatrix<f64>> {
    let bad = |msg: &str| io::Error::new(io::ErrorKind::InvalidData, msg.to_string());
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| bad("empty file"))??;
    if !header.starts_with("%%MatrixMarket matrix coordinate real") {
        return Err(bad("not a real coordinate Matrix Market file"));
    }
    let mut size = None;
    let mut t = Vec::new();
    for line in lines {
        let line = line?;
        if line.starts_with('%') || line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        if size.is_none() {
            let n: Vec<usize> = f.iter().map(|s| s.parse().map_err(|_| bad("bad size line"))).collect::<Result<_, _>>()?;
            if n.len() != 3 {
                return Err(bad("bad size line"));
            }
            size = Some((n[0], n[1]));
            continue;
        }
        if f.len() != 3 {
            return Err(bad("bad entry line"));
        }
        let i: usize = f[0].parse().map_err(|_| bad("bad row index"))?;
        let j: usize = f[1].parse().map_err(|_| bad("bad column index"))?;
        let v: f64 = f[2].parse().map_err(|_| bad("bad value"))?;
        t.push((i - 1, j - 1, v));
    }
    let (nr, nc) = size.ok_or_else(|| bad("missing size line"))?;
    Ok(CscMatrix::from_triplets(nr, nc, &t))
}
