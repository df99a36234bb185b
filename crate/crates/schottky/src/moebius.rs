//! Moebius transformations on the Riemann sphere and hyperbolic 3-space,
//! loxodromic fixed-point data, and Fuchsian Schottky groups built from
//! circle-pairing data.

use crate::error::{Result, SchottkyError};
use crate::words::Word;
use num_complex::Complex64;

const LOXODROMY_GAP: f64 = 1e-12;
const PAIRING_TOL: f64 = 1e-9;

/// A point of P1(C): a finite complex number or infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Point {
    Finite(Complex64),
    Infinity,
}

impl Point {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            Point::Finite(z) => Some(z),
            Point::Infinity => None,
        }
    }

    /// Chordal-style distance used in tests; infinity is far from everything
    /// finite of moderate size.
    pub fn dist(self, other: Point) -> f64 {
        match (self, other) {
            (Point::Finite(a), Point::Finite(b)) => (a - b).norm(),
            (Point::Infinity, Point::Infinity) => 0.0,
            _ => f64::INFINITY,
        }
    }
}

/// A determinant-one 2x2 complex matrix acting by fractional linear
/// transformations; the normalized representative of a PSL(2,C) class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MoebiusMap {
    pub fn identity() -> Self {
        MoebiusMap {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    pub fn new_normalized(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        MoebiusMap { a, b, c, d }.normalize()
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    /// Scales to determinant one and fixes the SL(2,C) lift so the first
    /// nonzero entry (in the order a, b, c, d) has argument in (-pi/2, pi/2].
    pub fn normalize(self) -> Self {
        let k = self.det().sqrt();
        let mut m = MoebiusMap { a: self.a / k, b: self.b / k, c: self.c / k, d: self.d / k };
        let lead = [m.a, m.b, m.c, m.d]
            .into_iter()
            .find(|z| z.norm() > 1e-14)
            .unwrap_or(m.a);
        let flip = lead.re < 0.0 || (lead.re == 0.0 && lead.im < 0.0);
        if flip {
            m = MoebiusMap { a: -m.a, b: -m.b, c: -m.c, d: -m.d };
        }
        m
    }

    /// Re-fixes only the SL(2,C) sign convention, leaving the scale alone.
    /// Products of determinant-one lifts have determinant one algebraically;
    /// recomputing it in floating point suffers catastrophic cancellation
    /// once the entries are large (long words), so compose must not rescale.
    fn sign_normalize(self) -> Self {
        let lead = [self.a, self.b, self.c, self.d]
            .into_iter()
            .find(|z| z.norm() > 1e-14)
            .unwrap_or(self.a);
        if lead.re < 0.0 || (lead.re == 0.0 && lead.im < 0.0) {
            MoebiusMap { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
        } else {
            self
        }
    }

    /// Inverse map (determinant-one adjugate), renormalized for the sign
    /// convention.
    pub fn inverse(&self) -> Self {
        MoebiusMap { a: self.d, b: -self.b, c: -self.c, d: self.a }.normalize()
    }

    /// |gamma'(z)| for the normalized representative: 1/|cz+d|^2.
    pub fn derivative_norm(&self, z: Complex64) -> f64 {
        let denom = self.c * z + self.d;
        1.0 / denom.norm_sqr()
    }

    /// Complex derivative gamma'(z) = 1/(cz+d)^2 for the det-1 lift.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let denom = self.c * z + self.d;
        1.0 / (denom * denom)
    }
}

/// Matrix product m1*m2 of two determinant-one representatives; the result
/// has determinant one by construction and only the sign convention is
/// re-fixed (see `sign_normalize`).
pub fn compose(m1: &MoebiusMap, m2: &MoebiusMap) -> MoebiusMap {
    MoebiusMap {
        a: m1.a * m2.a + m1.b * m2.c,
        b: m1.a * m2.b + m1.b * m2.d,
        c: m1.c * m2.a + m1.d * m2.c,
        d: m1.c * m2.b + m1.d * m2.d,
    }
    .sign_normalize()
}

/// The boundary action z -> (az+b)/(cz+d) with the conventions of P1(C).
pub fn apply_boundary(m: &MoebiusMap, z: Point) -> Point {
    match z {
        Point::Infinity => {
            if m.c.norm() == 0.0 {
                Point::Infinity
            } else {
                Point::Finite(m.a / m.c)
            }
        }
        Point::Finite(z) => {
            let denom = m.c * z + m.d;
            if denom.norm() == 0.0 {
                Point::Infinity
            } else {
                Point::Finite((m.a * z + m.b) / denom)
            }
        }
    }
}

/// The isometric action on upper half-space H^3 = {(z, y) : y > 0}.
pub fn apply_halfspace(m: &MoebiusMap, p: (Complex64, f64)) -> (Complex64, f64) {
    let (z, y) = p;
    let det = m.det();
    let num = (m.a * z + m.b) * (m.c * z + m.d).conj() + m.a * m.c.conj() * y * y;
    let den = (m.c * z + m.d).norm_sqr() + m.c.norm_sqr() * y * y;
    (num / den, y * det.norm() / den)
}

/// Attractive/repelling fixed points with multiplier data of a loxodromic
/// map.
#[derive(Debug, Clone, Copy)]
pub struct FixedPointData {
    pub z_plus: Point,
    pub z_minus: Point,
    /// N(gamma) = |lambda|^2 for the eigenvalue with |lambda| > 1.
    pub multiplier_norm: f64,
    /// Geodesic length l = log N(gamma).
    pub length: f64,
}

pub fn fixed_points(m: &MoebiusMap) -> Result<FixedPointData> {
    let t = m.trace();
    let disc = (t * t - 4.0).sqrt();
    let l1 = (t + disc) / 2.0;
    let l2 = (t - disc) / 2.0;
    let (big, _small) = if l1.norm() >= l2.norm() { (l1, l2) } else { (l2, l1) };
    if (big.norm() - 1.0 / big.norm()).abs() <= LOXODROMY_GAP {
        return Err(SchottkyError::NotLoxodromic);
    }
    let multiplier_norm = big.norm_sqr();
    let length = multiplier_norm.ln();

    let (zp, zm) = if m.c.norm() == 0.0 {
        // fixed points are infinity and b/(d-a)
        let finite = Point::Finite(m.b / (m.d - m.a));
        if m.a.norm() > m.d.norm() {
            (Point::Infinity, finite)
        } else {
            (finite, Point::Infinity)
        }
    } else {
        // roots of cz^2 + (d-a)z - b = 0
        let q = ((m.d - m.a) * (m.d - m.a) + 4.0 * m.b * m.c).sqrt();
        let r1 = (m.a - m.d + q) / (2.0 * m.c);
        let r2 = (m.a - m.d - q) / (2.0 * m.c);
        if m.derivative_norm(r1) < 1.0 {
            (Point::Finite(r1), Point::Finite(r2))
        } else {
            (Point::Finite(r2), Point::Finite(r1))
        }
    };
    Ok(FixedPointData { z_plus: zp, z_minus: zm, multiplier_norm, length })
}

/// A circle on the sphere given by center and radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleSpec {
    pub center: Complex64,
    pub radius: f64,
}

/// Exact Moebius image of a circle via the pole decomposition
/// f(z) = a/c + k/(z - p) and the inversive-distance formula.
pub fn circle_image(m: &MoebiusMap, circle: &CircleSpec) -> CircleSpec {
    if m.c.norm() == 0.0 {
        // affine map z -> (a/d) z + b/d
        let scale = m.a / m.d;
        return CircleSpec {
            center: scale * circle.center + m.b / m.d,
            radius: scale.norm() * circle.radius,
        };
    }
    let pole = -m.d / m.c;
    let k = (m.b * m.c - m.a * m.d) / (m.c * m.c);
    let u = circle.center - pole;
    let denom = u.norm_sqr() - circle.radius * circle.radius;
    let inv_center = u.conj() / denom;
    let inv_radius = circle.radius / denom.abs();
    CircleSpec {
        center: m.a / m.c + k * inv_center,
        radius: k.norm() * inv_radius,
    }
}

/// A marked Schottky group: 2g pairing circles in marking order (pairing
/// i <-> i+g) and the g generator matrices.
#[derive(Debug, Clone)]
pub struct SchottkyGroup {
    pub genus: usize,
    pub circles: Vec<CircleSpec>,
    pub generators: Vec<MoebiusMap>,
    pub fuchsian_flag: bool,
}

impl SchottkyGroup {
    /// Matrix of the letter: generator g_i for i < g, inverse for i >= g.
    pub fn letter_matrix(&self, letter: usize) -> MoebiusMap {
        if letter < self.genus {
            self.generators[letter]
        } else {
            self.generators[letter - self.genus].inverse()
        }
    }
}

/// Builds and validates a Fuchsian Schottky group from 2g circles with real
/// centers. Generator: g_i(z) = c_{i+g} - r_i r_{i+g} / (z - c_i), which maps
/// the exterior of C_i onto the interior of C_{i+g}.
pub fn build_fuchsian_schottky(genus: usize, circles: &[CircleSpec]) -> Result<SchottkyGroup> {
    if circles.len() != 2 * genus || genus < 2 {
        return Err(SchottkyError::GroupFileInvalid(format!(
            "expected 2g = {} circles for genus {genus}, got {}",
            2 * genus,
            circles.len()
        )));
    }
    for c in circles {
        if !(c.radius > 0.0) {
            return Err(SchottkyError::GroupFileInvalid("radius must be positive".into()));
        }
    }
    for i in 0..circles.len() {
        for j in (i + 1)..circles.len() {
            let gap = (circles[i].center - circles[j].center).norm();
            if gap <= circles[i].radius + circles[j].radius {
                return Err(SchottkyError::DiscsOverlap(i, j));
            }
        }
    }
    let mut generators = Vec::with_capacity(genus);
    for i in 0..genus {
        let ci = circles[i].center;
        let cj = circles[i + genus].center;
        let rr = circles[i].radius * circles[i + genus].radius;
        // matrix of z -> cj - rr/(z - ci), determinant rr > 0
        let m = MoebiusMap::new_normalized(
            cj,
            -ci * cj - Complex64::new(rr, 0.0),
            Complex64::new(1.0, 0.0),
            -ci,
        );
        generators.push(m);
    }
    let group = SchottkyGroup {
        genus,
        circles: circles.to_vec(),
        generators,
        fuchsian_flag: is_fuchsian(circles, genus),
    };
    // pairing: the image of C_i under the letter matrix is C_{i+g} (indices
    // mod 2g, so this also checks the inverse letters)
    for letter in 0..2 * genus {
        let target = (letter + genus) % (2 * genus);
        let image = circle_image(&group.letter_matrix(letter), &circles[letter]);
        let scale = circles[target].radius;
        if (image.center - circles[target].center).norm() > PAIRING_TOL * scale.max(1.0)
            || (image.radius - circles[target].radius).abs() > PAIRING_TOL * scale
        {
            return Err(SchottkyError::PairingBroken(letter, target));
        }
    }
    for m in &group.generators {
        fixed_points(m)?;
    }
    Ok(group)
}

fn is_fuchsian(circles: &[CircleSpec], _genus: usize) -> bool {
    circles.iter().all(|c| c.center.im.abs() <= 1e-14)
}

/// Ordered product of letter matrices for a reduced word; the empty word is
/// the identity.
pub fn word_to_matrix(group: &SchottkyGroup, w: &Word) -> MoebiusMap {
    let mut acc = MoebiusMap::identity();
    for &letter in &w.letters {
        acc = compose(&acc, &group.letter_matrix(letter));
    }
    acc
}

/// Point on the geodesic with finite endpoints a, b at parameter s:
/// ((a e^s + b e^-s)/(e^s + e^-s), |a-b|/(e^s + e^-s)).
pub fn geodesic_point(a: Complex64, b: Complex64, s: f64) -> Result<(Complex64, f64)> {
    if a == b {
        return Err(SchottkyError::DegenerateEndpoints);
    }
    let (es, ems) = (s.exp(), (-s).exp());
    let denom = es + ems;
    Ok(((a * es + b * ems) / denom, (a - b).norm() / denom))
}
