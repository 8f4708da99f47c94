//! Linear codes: codeword enumeration, minimum weight, and the point set of a parity-check matrix.

use crate::field::{Elem, Field};
use crate::geometry::{for_each_vector, vector_count, ProjectivePoint};
use crate::limits::GuardExceeded;
use crate::matrix::Matrix;

use super::GeneratorError;

/// Codeword enumeration is capped at `q^k <= 2^20`.
pub const MAX_CODEWORDS: u64 = 1 << 20;

/// Calls `f` on every vector in the row space of `generator` (rows need not be independent).
pub fn codewords(field: &Field, generator: &Matrix, mut f: impl FnMut(&[Elem])) -> Result<(), GeneratorError> {
    let count = vector_count(field.q(), generator.rows()).unwrap_or(u128::MAX);
    GuardExceeded::check("codewords", count, MAX_CODEWORDS)?;
    for_each_vector(field.q(), generator.rows(), |msg| {
        let word = generator.left_mul_vec(field, msg);
        f(&word);
    });
    Ok(())
}

fn weight(word: &[Elem]) -> usize {
    word.iter().filter(|e| !e.is_zero()).count()
}

/// Minimum nonzero weight in the row space of `generator`, with one word attaining it.
/// `None` for the zero code.
pub fn min_weight_of_row_space(
    field: &Field,
    generator: &Matrix,
) -> Result<Option<(usize, Vec<Elem>)>, GeneratorError> {
    let mut best: Option<(usize, Vec<Elem>)> = None;
    codewords(field, generator, |w| {
        let wt = weight(w);
        if wt > 0 && best.as_ref().is_none_or(|(b, _)| wt < *b) {
            best = Some((wt, w.to_vec()));
        }
    })?;
    Ok(best)
}

/// Minimum weight of the code `{x : H x = 0}`.
pub fn min_weight_of_kernel(field: &Field, parity_check: &Matrix) -> Result<Option<(usize, Vec<Elem>)>, GeneratorError> {
    let basis = parity_check.kernel(field);
    min_weight_of_row_space(field, &basis)
}

/// Columns of a parity-check matrix as points of PG(rows-1, q), validated so that
/// every `t`-subset is independent and some `(t+1)`-subset is dependent, i.e. the
/// code has minimum weight exactly `t+1`.
pub fn code_point_set(field: &Field, parity_check: &Matrix, t: usize) -> Result<Vec<ProjectivePoint>, GeneratorError> {
    if t < 2 {
        return Err(GeneratorError::Input(format!("t = {t}: minimum weight t+1 must be at least 3")));
    }
    if parity_check.rows() == 0 {
        return Err(GeneratorError::Input("parity-check matrix has no rows".into()));
    }
    let mut points = Vec::with_capacity(parity_check.cols());
    for j in 0..parity_check.cols() {
        let col = parity_check.column(j);
        let p = ProjectivePoint::normalize(field, &col)
            .map_err(|_| GeneratorError::Input(format!("column {j} of the parity-check matrix is zero")))?;
        points.push(p);
    }
    match min_weight_of_kernel(field, parity_check)? {
        Some((d, word)) if d <= t => {
            // The support of a low-weight codeword is a dependent set; pad it to t points.
            let mut support: Vec<u32> = (0..word.len() as u32).filter(|&i| !word[i as usize].is_zero()).collect();
            let extra: Vec<u32> = (0..word.len() as u32).filter(|i| !support.contains(i)).collect();
            let missing = t.saturating_sub(support.len());
            support.extend_from_slice(&extra[..missing.min(extra.len())]);
            support.sort_unstable();
            Err(GeneratorError::DependentSubset { size: t, points: support })
        }
        Some((d, _)) if d == t + 1 => Ok(points),
        _ => Err(GeneratorError::NoDependentSubset { size: t + 1 }),
    }
}
