use core::fmt;

use super::moments::MomentAccumulator;

/// Slots with fewer samples keep their previous weights.
pub const MIN_SAMPLES: u64 = 1000;
/// Largest accepted 1-norm condition number of the normal matrix.
pub const MAX_CONDITION: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolveError {
    InsufficientData { count: u64 },
    IllConditioned { condition: f64 },
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::InsufficientData { count } => {
                write!(f, "insufficient data: {count} samples (need {MIN_SAMPLES})")
            }
            SolveError::IllConditioned { condition } => {
                write!(f, "insufficient data: normal matrix condition {condition:.3e}")
            }
        }
    }
}

impl core::error::Error for SolveError {}

#[inline]
fn abs(x: f64) -> f64 {
    if x < 0.0 {
        -x
    } else {
        x
    }
}

/// Gaussian elimination with partial pivoting. `None` for a singular matrix.
pub fn solve_3x3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let mut m = [[0.0f64; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&a[i]);
        m[i][3] = b[i];
    }
    let scale = a.iter().flatten().fold(0.0f64, |s, &v| s.max(abs(v)));
    if scale == 0.0 {
        return None;
    }
    let tiny = scale * 1e-14;
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| abs(m[i][col]).total_cmp(&abs(m[j][col])))
            .expect("non-empty range");
        if abs(m[pivot][col]) <= tiny {
            return None;
        }
        m.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut s = m[row][3];
        for k in row + 1..3 {
            s -= m[row][k] * x[k];
        }
        x[row] = s / m[row][row];
    }
    Some(x)
}

fn norm1(a: &[[f64; 3]; 3]) -> f64 {
    (0..3)
        .map(|j| (0..3).map(|i| abs(a[i][j])).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `‖A‖₁ · ‖A⁻¹‖₁`, infinite for singular matrices.
pub fn condition_number(a: [[f64; 3]; 3]) -> f64 {
    let mut inv = [[0.0; 3]; 3];
    for j in 0..3 {
        let mut e = [0.0; 3];
        e[j] = 1.0;
        match solve_3x3(a, e) {
            Some(col) => {
                for i in 0..3 {
                    inv[i][j] = col[i];
                }
            }
            None => return f64::INFINITY,
        }
    }
    norm1(&a) * norm1(&inv)
}

/// Least-squares weights of one slot, with the default sample threshold.
pub fn solve_normal_equations(acc: &MomentAccumulator) -> Result<[f64; 3], SolveError> {
    solve_with_threshold(acc, MIN_SAMPLES)
}

pub fn solve_with_threshold(acc: &MomentAccumulator, min_samples: u64) -> Result<[f64; 3], SolveError> {
    if acc.count() < min_samples || acc.count() == 0 {
        return Err(SolveError::InsufficientData { count: acc.count() });
    }
    let g = acc.gram();
    let condition = condition_number(g);
    if !(condition <= MAX_CONDITION) {
        return Err(SolveError::IllConditioned { condition });
    }
    solve_3x3(g, acc.rhs()).ok_or(SolveError::IllConditioned { condition })
}
