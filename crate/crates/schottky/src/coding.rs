//! Coding maps from admissible sequences to limit-set points and closed
//! geodesics.

use crate::error::{Result, SchottkyError};
use crate::moebius::{apply_boundary, fixed_points, word_to_matrix, Point, SchottkyGroup};
use crate::words::{group_multiply, inverse_letter, CyclicWord, Word};

/// Z(w a0..aN) = w z+(a0..aN): the limit point of the eventually periodic
/// sequence prefix.cycle.cycle...
pub fn code_fixed_point(group: &SchottkyGroup, prefix: &Word, cycle: &CyclicWord) -> Result<Point> {
    let g = group.genus;
    if let Some(&last) = prefix.letters.last() {
        if cycle.letters[0] == inverse_letter(g, last) {
            return Err(SchottkyError::WordNotReduced(prefix.len() - 1));
        }
    }
    let cyc = word_to_matrix(group, &cycle.window_word(0));
    let fp = fixed_points(&cyc)?;
    Ok(apply_boundary(&word_to_matrix(group, prefix), fp.z_plus))
}

/// Depth-|w| approximation of the coding map: (a0..al) x0.
pub fn code_truncated(group: &SchottkyGroup, w: &Word, base: Point) -> Point {
    apply_boundary(&word_to_matrix(group, w), base)
}

/// Ordered endpoints (z+, z-) of the closed geodesic of a primitive necklace.
pub fn orbit_geodesic(group: &SchottkyGroup, cycle: &CyclicWord) -> Result<(Point, Point)> {
    let m = word_to_matrix(group, &cycle.window_word(0));
    let fp = fixed_points(&m)?;
    Ok((fp.z_plus, fp.z_minus))
}

/// Free-group product of the prefix with n copies of the cycle.
pub fn prefix_power(g: usize, prefix: &Word, cycle: &CyclicWord, n: usize) -> Word {
    let mut acc = prefix.clone();
    for _ in 0..n {
        acc = group_multiply(g, &acc, &cycle.window_word(0));
    }
    acc
}
