//! Finite-depth truncations of the Cuntz–Krieger generators on cylinder
//! functions: exact (symbolic) verification of the algebra relations, the
//! two-sided Dirac operator, commutator-boundedness trends, and the
//! projection-compressed route to the archimedean local factor.
//!
//! Derivative weights |g_i'(x)|^{δ/2} are never evaluated inside products:
//! each weight is carried as a symbol (letter, representative word, exponent)
//! and cancelled symbolically, so the relations hold exactly rather than up
//! to tolerance — mirroring the pointwise cancellation in the underlying
//! proofs.

use crate::cohomology::{embed_u, CochainLevel};
use crate::error::{Result, SchottkyError};
use crate::fractal::{cylinder_tree, hausdorff_dim, ps_measure, CylinderTree};
use crate::moebius::SchottkyGroup;
use crate::ratmat::rank_via_gram;
use crate::words::{count_words, inverse_letter, word_at_rank, word_rank, Word};
use crate::zeta::{regdet, LocalField, Progression, RegdetMethod, SpectrumDescriptor};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;

/// Cap on the truncated-space dimension.
pub const DIMENSION_CAP: usize = 200_000;

/// Depth-n truncation of L²(Λ_Γ, μ): the basis is the cylinder indicators
/// of the reduced words of length exactly n (indicators of shorter words
/// are sums of these, so this spans every level ≤ n).
#[derive(Debug, Clone)]
pub struct TruncatedSpace {
    pub g: usize,
    pub depth: usize,
    pub dim: usize,
    words: Vec<Vec<usize>>,
}

impl TruncatedSpace {
    pub fn new(g: usize, depth: usize) -> Result<Self> {
        if depth < 2 {
            return Err(SchottkyError::DepthTooLarge(depth, DIMENSION_CAP));
        }
        let dim = count_words(g, depth)
            .to_usize()
            .filter(|&d| d <= DIMENSION_CAP)
            .ok_or(SchottkyError::DepthTooLarge(depth, DIMENSION_CAP))?;
        let words = (0..dim).map(|r| word_at_rank(g, depth, r)).collect();
        Ok(TruncatedSpace { g, depth, dim, words })
    }

    pub fn word(&self, rank: usize) -> &[usize] {
        &self.words[rank]
    }
}

/// One symbolic weight: (letter i, representative word u) stands for
/// |g_i'(x_u)|^{δ/2}; the map value is its integer exponent.
pub type WeightSymbol = (usize, Vec<usize>);

/// A product term: integer coefficient times a product of weight symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: i64,
    pub weights: BTreeMap<WeightSymbol, i32>,
}

impl Term {
    fn constant(coeff: i64) -> Self {
        Term { coeff, weights: BTreeMap::new() }
    }

    fn single(coeff: i64, letter: usize, key: Vec<usize>, exp: i32) -> Self {
        let mut weights = BTreeMap::new();
        weights.insert((letter, key), exp);
        Term { coeff, weights }
    }

    fn mul(&self, other: &Term) -> Term {
        let mut weights = self.weights.clone();
        for (k, e) in &other.weights {
            let slot = weights.entry(k.clone()).or_insert(0);
            *slot += e;
            if *slot == 0 {
                weights.remove(k);
            }
        }
        Term { coeff: self.coeff * other.coeff, weights }
    }
}

fn push_term(entry: &mut Vec<Term>, term: Term) {
    if term.coeff == 0 {
        return;
    }
    for existing in entry.iter_mut() {
        if existing.weights == term.weights {
            existing.coeff += term.coeff;
            if existing.coeff == 0 {
                let weights = existing.weights.clone();
                entry.retain(|t| t.weights != weights || t.coeff != 0);
            }
            return;
        }
    }
    entry.push(term);
}

/// A sparse matrix with symbolic-weight entries; `domain_level` records the
/// largest word-length resolution on which the truncation is exact (checks
/// outside that domain are meaningless and never asserted).
#[derive(Debug, Clone)]
pub struct SymbolicOp {
    pub rows: usize,
    pub cols: usize,
    pub domain_level: usize,
    /// entries[row] maps column index to a combined sum of terms.
    pub entries: Vec<BTreeMap<usize, Vec<Term>>>,
}

impl SymbolicOp {
    pub fn zero(rows: usize, cols: usize, domain_level: usize) -> Self {
        SymbolicOp { rows, cols, domain_level, entries: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(dim: usize, domain_level: usize) -> Self {
        let mut op = SymbolicOp::zero(dim, dim, domain_level);
        for r in 0..dim {
            op.entries[r].insert(r, vec![Term::constant(1)]);
        }
        op
    }

    fn insert(&mut self, row: usize, col: usize, term: Term) {
        let entry = self.entries[row].entry(col).or_default();
        push_term(entry, term);
        if entry.is_empty() {
            self.entries[row].remove(&col);
        }
    }

    /// Matrix product self · other (other applied first).
    pub fn compose(&self, other: &SymbolicOp) -> SymbolicOp {
        assert_eq!(self.cols, other.rows);
        let dom = self.domain_level.min(other.domain_level).saturating_sub(1);
        let mut out = SymbolicOp::zero(self.rows, other.cols, dom);
        for r in 0..self.rows {
            for (&k, left) in &self.entries[r] {
                for (&c, right) in &other.entries[k] {
                    for lt in left {
                        for rt in right {
                            out.insert(r, c, lt.mul(rt));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &SymbolicOp) -> SymbolicOp {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        out.domain_level = self.domain_level.min(other.domain_level);
        for r in 0..other.rows {
            for (&c, terms) in &other.entries[r] {
                for t in terms {
                    out.insert(r, c, t.clone());
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &SymbolicOp) -> SymbolicOp {
        let mut negated = other.clone();
        for row in &mut negated.entries {
            for terms in row.values_mut() {
                for t in terms.iter_mut() {
                    t.coeff = -t.coeff;
                }
            }
        }
        self.add(&negated)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|row| row.values().all(|e| e.is_empty()))
    }

    /// Numeric realization: every weight symbol is evaluated through
    /// `symbol_value` (the value of |g_i'(x_u)|^{δ/2} for that symbol).
    pub fn evaluate<F: Fn(&WeightSymbol) -> f64>(&self, symbol_value: F) -> NumericOp {
        let rows = self
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(&c, terms)| {
                        let v: f64 = terms
                            .iter()
                            .map(|t| {
                                t.coeff as f64
                                    * t.weights
                                        .iter()
                                        .map(|(k, &e)| symbol_value(k).powi(e))
                                        .product::<f64>()
                            })
                            .sum();
                        (c, v)
                    })
                    .collect()
            })
            .collect();
        NumericOp { rows: self.rows, cols: self.cols, entries: rows }
    }
}

/// Smallest admissible letter after `last`.
fn min_extension(g: usize, last: usize) -> usize {
    if inverse_letter(g, last) == 0 {
        1
    } else {
        0
    }
}

/// Embedding of the word-length-m resolution into the depth-n space:
/// the indicator of a length-m cylinder is the sum of its depth-n
/// refinements (m = 0 embeds the constants).
pub fn e_dom(space: &TruncatedSpace, m: usize) -> SymbolicOp {
    assert!(m < space.depth);
    let cols = if m == 0 { 1 } else { count_words(space.g, m).to_usize().unwrap() };
    let mut op = SymbolicOp::zero(space.dim, cols, m);
    for v in 0..space.dim {
        let col = if m == 0 { 0 } else { word_rank(space.g, &space.word(v)[..m]) };
        op.insert(v, col, Term::constant(1));
    }
    op
}

/// Multiplication by the cylinder indicator of γ: a diagonal 0/1 projector.
pub fn op_p(space: &TruncatedSpace, gamma: &Word) -> Result<SymbolicOp> {
    if gamma.len() > space.depth {
        return Err(SchottkyError::WordTooLong(gamma.len(), space.depth));
    }
    let mut op = SymbolicOp::zero(space.dim, space.dim, space.depth);
    for v in 0..space.dim {
        if space.word(v).starts_with(&gamma.letters) {
            op.insert(v, v, Term::constant(1));
        }
    }
    Ok(op)
}

/// S_i: sends the (single-extension representative of the) cylinder
/// v₁..v_{n−1} into the cylinder i·v₁..v_{n−1} with weight
/// |g_i'(x_{v₁..v_{n−1}})|^{−δ/2}.
pub fn op_s(space: &TruncatedSpace, i: usize) -> SymbolicOp {
    let g = space.g;
    let mut op = SymbolicOp::zero(space.dim, space.dim, space.depth - 1);
    for v in 0..space.dim {
        let w = space.word(v);
        if w[0] != i {
            continue;
        }
        let key = w[1..].to_vec();
        let mut col_word = key.clone();
        col_word.push(min_extension(g, *key.last().unwrap()));
        let col = word_rank(g, &col_word);
        op.insert(v, col, Term::single(1, i, key, -1));
    }
    op
}

/// S_i*: spreads the cylinder i·u over all depth-n refinements of u with
/// weight |g_i'(x_u)|^{+δ/2}.
pub fn op_s_star(space: &TruncatedSpace, i: usize) -> SymbolicOp {
    let g = space.g;
    let mut op = SymbolicOp::zero(space.dim, space.dim, space.depth - 1);
    for v in 0..space.dim {
        let w = space.word(v);
        if w[0] == inverse_letter(g, i) {
            continue;
        }
        let key = w[..space.depth - 1].to_vec();
        let mut col_word = vec![i];
        col_word.extend_from_slice(&key);
        let col = word_rank(g, &col_word);
        op.insert(v, col, Term::single(1, i, key, 1));
    }
    op
}

/// The unitary letter action T_a = S_{a⁻¹} + S_a*.
pub fn op_t(space: &TruncatedSpace, a: usize) -> SymbolicOp {
    op_s(space, inverse_letter(space.g, a)).add(&op_s_star(space, a))
}

/// T_γ as the product of the letter unitaries; exact on word-length
/// resolutions up to depth − |γ|.
pub fn op_t_word(space: &TruncatedSpace, gamma: &Word) -> SymbolicOp {
    let mut acc = SymbolicOp::identity(space.dim, space.depth);
    for &a in &gamma.letters {
        acc = acc.compose(&op_t(space, a));
    }
    acc.domain_level = space.depth - gamma.len();
    acc
}

/// Numeric sparse matrix (rows of (column, value) pairs).
#[derive(Debug, Clone)]
pub struct NumericOp {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<(usize, f64)>>,
}

impl NumericOp {
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        for (r, row) in self.entries.iter().enumerate() {
            for &(c, v) in row {
                out[r] += v * x[c];
            }
        }
        out
    }

    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        for (r, row) in self.entries.iter().enumerate() {
            for &(c, v) in row {
                out[c] += v * x[r];
            }
        }
        out
    }
}

/// Weight-symbol values for the uniform Markov measure: every one-letter
/// refinement carries mass ratio 1/(2g−1), so the isometric weight is
/// (2g−1)^{−1/2} regardless of the representative.
pub fn uniform_symbol_value(g: usize) -> impl Fn(&WeightSymbol) -> f64 {
    let v = ((2 * g - 1) as f64).powf(-0.5);
    move |_| v
}

/// Weight-symbol values for the Patterson–Sullivan normalization:
/// |g_i'(x_u)|^{δ/2} at the enclosure center of the representative cylinder.
pub fn ps_symbol_value<'a>(
    group: &'a SchottkyGroup,
    tree: &'a CylinderTree,
    delta: f64,
) -> impl Fn(&WeightSymbol) -> f64 + 'a {
    move |(i, u): &WeightSymbol| {
        let x = tree.levels[u.len() - 1][word_rank(group.genus, u)].center;
        group.letter_matrix(*i).derivative_norm(x).powf(delta / 2.0)
    }
}

// ---------------------------------------------------------------------------
// Dirac operator
// ---------------------------------------------------------------------------

/// Conditional expectation onto the first m+1 letters for a weight vector
/// over depth-n words in rank order: words sharing a prefix are contiguous,
/// so each prefix class is one block.
fn block_average(g: usize, n: usize, m: usize, mu: &[f64], x: &[f64]) -> Vec<f64> {
    let block = (2 * g - 1).pow((n - 1 - m) as u32);
    let mut out = vec![0.0; x.len()];
    for start in (0..x.len()).step_by(block) {
        let mut num = 0.0;
        let mut den = 0.0;
        for j in start..start + block {
            num += mu[j] * x[j];
            den += mu[j];
        }
        let avg = num / den;
        for o in out.iter_mut().take(start + block).skip(start) {
            *o = avg;
        }
    }
    out
}

/// The two-copy Dirac operator on the depth-n truncation: eigenvalue m+1 on
/// the grade-m component of the first copy, −m on the second. Grades are cut
/// out by conditional expectations with respect to `mu`, so the operator is
/// self-adjoint for the corresponding inner product by construction.
#[derive(Debug, Clone)]
pub struct NumericDirac {
    pub g: usize,
    pub n: usize,
    pub mu: Vec<f64>,
}

impl NumericDirac {
    /// D on one copy: telescoping the grade sum gives
    /// D₁x = n·x − Σ_{m<n−1} Π_m x and D₂x = −(n−1)x + Σ_{m<n−1} Π_m x.
    pub fn apply(&self, first_copy: bool, x: &[f64]) -> Vec<f64> {
        let mut acc = vec![0.0; x.len()];
        for m in 0..self.n - 1 {
            let pim = block_average(self.g, self.n, m, &self.mu, x);
            for (a, p) in acc.iter_mut().zip(pim) {
                *a += p;
            }
        }
        let scale = if first_copy { self.n as f64 } else { -((self.n - 1) as f64) };
        let sign = if first_copy { -1.0 } else { 1.0 };
        x.iter().zip(acc).map(|(&xv, av)| scale * xv + sign * av).collect()
    }

    /// Transpose through self-adjointness: Dᵀ = G D G^{−1} with G = diag μ.
    pub fn apply_transpose(&self, first_copy: bool, x: &[f64]) -> Vec<f64> {
        let scaled: Vec<f64> = x.iter().zip(&self.mu).map(|(&v, &m)| v / m).collect();
        self.apply(first_copy, &scaled)
            .into_iter()
            .zip(&self.mu)
            .map(|(v, &m)| v * m)
            .collect()
    }
}

/// Exact rational conditional expectation for the uniform measure.
pub fn block_average_rational(g: usize, n: usize, m: usize, x: &[BigRational]) -> Vec<BigRational> {
    let block = (2 * g - 1).pow((n - 1 - m) as u32);
    let denom = BigRational::from(BigInt::from(block));
    let mut out = vec![BigRational::zero(); x.len()];
    for start in (0..x.len()).step_by(block) {
        let mut sum = BigRational::zero();
        for item in x.iter().take(start + block).skip(start) {
            sum = sum + item;
        }
        let avg = sum / &denom;
        for o in out.iter_mut().take(start + block).skip(start) {
            *o = avg.clone();
        }
    }
    out
}

/// Exact Dirac action (uniform measure) on one copy; see `NumericDirac`.
pub fn dirac_rational(g: usize, n: usize, first_copy: bool, x: &[BigRational]) -> Vec<BigRational> {
    let mut acc = vec![BigRational::zero(); x.len()];
    for m in 0..n - 1 {
        let pim = block_average_rational(g, n, m, x);
        for (a, p) in acc.iter_mut().zip(pim) {
            *a = &*a + p;
        }
    }
    let scale = BigRational::from(BigInt::from(if first_copy { n as i64 } else { -((n - 1) as i64) }));
    x.iter()
        .zip(acc)
        .map(|(xv, av)| if first_copy { xv * &scale - av } else { xv * &scale + av })
        .collect()
}

/// A function of the first ℓ letters extended to the depth-n indicator basis.
pub fn extend_cochain(g: usize, n: usize, f: &CochainLevel) -> Vec<BigRational> {
    let len = f.word_length();
    assert!(len <= n);
    let dim = count_words(g, n).to_usize().unwrap();
    (0..dim)
        .map(|rank| {
            let w = word_at_rank(g, n, rank);
            f.coefficients[word_rank(g, &w[..len])].clone()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Commutator trend
// ---------------------------------------------------------------------------

/// ‖[D, S]‖ restricted to the co-depth-1 exact domain, matrix-free: power
/// iteration on M†M with M = (D·S − S·D)∘E, adjoints taken in the weighted
/// inner products.
fn commutator_norm(
    g: usize,
    n: usize,
    s_op: &NumericOp,
    dirac: &NumericDirac,
    mu_n: &[f64],
    mu_parent: &[f64],
) -> Result<f64> {
    let embed = |y: &[f64]| -> Vec<f64> {
        (0..s_op.rows)
            .map(|v| y[word_rank(g, &word_at_rank(g, n, v)[..n - 1])])
            .collect()
    };
    let embed_t = |z: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; mu_parent.len()];
        for (v, &val) in z.iter().enumerate() {
            out[word_rank(g, &word_at_rank(g, n, v)[..n - 1])] += val;
        }
        out
    };
    let forward = |y: &[f64]| -> Vec<f64> {
        let x = embed(y);
        let ds = dirac.apply(true, &s_op.apply(&x));
        let sd = s_op.apply(&dirac.apply(true, &x));
        ds.iter().zip(sd).map(|(a, b)| a - b).collect()
    };
    let adjoint = |z: &[f64]| -> Vec<f64> {
        let weighted: Vec<f64> = z.iter().zip(mu_n).map(|(&v, &m)| v * m).collect();
        let ds_t = s_op.apply_transpose(&dirac.apply_transpose(true, &weighted));
        let sd_t = dirac.apply_transpose(true, &s_op.apply_transpose(&weighted));
        let ct: Vec<f64> = ds_t.iter().zip(sd_t).map(|(a, b)| a - b).collect();
        embed_t(&ct)
            .iter()
            .zip(mu_parent)
            .map(|(&v, &m)| v / m)
            .collect()
    };
    let dot = |a: &[f64], b: &[f64], w: &[f64]| -> f64 {
        a.iter().zip(b).zip(w).map(|((&x, &y), &m)| x * y * m).sum()
    };
    let mut y: Vec<f64> = (0..mu_parent.len()).map(|i| 1.0 + (i % 7) as f64 * 0.1).collect();
    let mut norm_sq = 0.0;
    for _ in 0..10_000 {
        let fy = forward(&y);
        let next_sq = dot(&fy, &fy, mu_n) / dot(&y, &y, mu_parent);
        let converged = (next_sq - norm_sq).abs() <= 1e-10 * next_sq.max(1e-300);
        norm_sq = next_sq;
        let mut z = adjoint(&fy);
        let scale = 1.0 / dot(&z, &z, mu_parent).sqrt();
        for v in &mut z {
            *v *= scale;
        }
        y = z;
        if converged {
            return Ok(norm_sq.sqrt());
        }
    }
    Err(SchottkyError::NonConvergence("commutator norm power iteration".to_string()))
}

/// Commutator norms ‖[D, S_i]‖ (and ‖[D, S_i*]‖) on the exact domains of a
/// range of depths, with the Patterson–Sullivan normalization.
#[derive(Debug, Clone, Serialize)]
pub struct CommutatorTrend {
    pub letter: usize,
    pub depths: Vec<usize>,
    pub s_norms: Vec<f64>,
    pub s_star_norms: Vec<f64>,
}

pub fn commutator_trend(
    group: &SchottkyGroup,
    i: usize,
    depths: &[usize],
) -> Result<CommutatorTrend> {
    let g = group.genus;
    let delta = hausdorff_dim(group, 5, 1e-9)?.estimate;
    let max_depth = *depths.iter().max().unwrap();
    let tree = cylinder_tree(group, max_depth)?;
    let mut s_norms = Vec::new();
    let mut s_star_norms = Vec::new();
    for &n in depths {
        let space = TruncatedSpace::new(g, n)?;
        let symval = ps_symbol_value(group, &tree, delta);
        let s_num = op_s(&space, i).evaluate(&symval);
        let s_star_num = op_s_star(&space, i).evaluate(&symval);
        let mu_n = ps_measure(group, n, delta)?.weights;
        let mu_parent = ps_measure(group, n - 1, delta)?.weights;
        let dirac = NumericDirac { g, n, mu: mu_n.clone() };
        s_norms.push(commutator_norm(g, n, &s_num, &dirac, &mu_n, &mu_parent)?);
        s_star_norms.push(commutator_norm(g, n, &s_star_num, &dirac, &mu_n, &mu_parent)?);
    }
    Ok(CommutatorTrend { letter: i, depths: depths.to_vec(), s_norms, s_star_norms })
}

// ---------------------------------------------------------------------------
// Compressed local factor
// ---------------------------------------------------------------------------

/// Rank of the embedded 2g middle-cohomology classes at one grade: the
/// trace weight Tr(π(V)Π(λ, D)) at the eigenvalue λ = −m.
pub fn trace_weight(g: usize, m: usize) -> Result<usize> {
    let mut cols = Vec::new();
    for k in 0..2 * g {
        let class = embed_u(g, -(m as i64), k)?;
        let lcm = class
            .coefficients
            .iter()
            .fold(BigInt::one(), |acc, c| num::integer::lcm(acc, c.denom().abs()));
        cols.push(
            class
                .coefficients
                .iter()
                .map(|c| c.numer() * (&lcm / c.denom()))
                .collect::<Vec<BigInt>>(),
        );
    }
    Ok(rank_via_gram(&cols))
}

/// log of the compressed determinant over the V-graded Dirac spectrum:
/// trace weight 2g at every eigenvalue λ ≤ 0 on the ℂ side (one unit-step
/// progression), or the g/g even-odd split on the ℝ side. Equals the
/// inverse of the corresponding degree-1 local factor.
pub fn compressed_local_factor(
    g: usize,
    s: Complex64,
    field: LocalField,
    grade_cap: usize,
) -> Result<Complex64> {
    for m in 0..=grade_cap {
        let weight = trace_weight(g, m)?;
        if weight != 2 * g {
            return Err(SchottkyError::DimensionOutOfRange);
        }
    }
    let spec = match field {
        LocalField::Complex => SpectrumDescriptor {
            progressions: vec![Progression { start: 0.0, step: -1.0, mult: 2 * g as u32 }],
            isolated: vec![],
        },
        LocalField::Real => SpectrumDescriptor {
            progressions: vec![
                Progression { start: 0.0, step: -2.0, mult: g as u32 },
                Progression { start: -1.0, step: -2.0, mult: g as u32 },
            ],
            isolated: vec![],
        },
    };
    regdet(&spec, s, RegdetMethod::Closed)
}

// ---------------------------------------------------------------------------
// Relation report
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    /// Word-length resolution the identity was verified on.
    pub domain_word_length: usize,
    pub exact: bool,
    pub max_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationReport {
    pub genus: usize,
    pub depth: usize,
    pub dimension: usize,
    pub measure: String,
    pub identities: Vec<IdentityCheck>,
}

fn exact_check(name: &str, domain: usize, holds: bool) -> IdentityCheck {
    IdentityCheck {
        name: name.to_string(),
        domain_word_length: domain,
        exact: holds,
        max_residual: if holds { 0.0 } else { f64::INFINITY },
    }
}

/// Verifies the Cuntz–Krieger relations on the depth-n truncation. The
/// algebraic identities are checked symbolically (exact); the Dirac checks
/// use exact rationals for the uniform measure and floating point with the
/// Patterson–Sullivan weights when a group is supplied.
pub fn verify_relations(
    g: usize,
    depth: usize,
    group: Option<&SchottkyGroup>,
) -> Result<RelationReport> {
    let space = TruncatedSpace::new(g, depth)?;
    let dim = space.dim;
    let mut identities = Vec::new();

    let s_ops: Vec<SymbolicOp> = (0..2 * g).map(|i| op_s(&space, i)).collect();
    let s_stars: Vec<SymbolicOp> = (0..2 * g).map(|i| op_s_star(&space, i)).collect();
    let identity = SymbolicOp::identity(dim, depth);
    let e1 = e_dom(&space, depth - 1);

    // S_i S_i* = P_i, exactly on the whole truncation
    let mut holds = true;
    for i in 0..2 * g {
        let p_i = op_p(&space, &Word::new(g, vec![i])?)?;
        holds &= s_ops[i].compose(&s_stars[i]).sub(&p_i).is_zero();
    }
    identities.push(exact_check("S_i S_i* = P_i", depth, holds));

    // Σ_j S_j S_j* = I
    let mut total = SymbolicOp::zero(dim, dim, depth);
    for j in 0..2 * g {
        total = total.add(&s_ops[j].compose(&s_stars[j]));
    }
    identities.push(exact_check("sum_j S_j S_j* = I", depth, total.sub(&identity).is_zero()));

    // S_i* S_i = Σ_j A_ij S_j S_j*, on the co-depth-1 domain
    let mut holds = true;
    for i in 0..2 * g {
        let mut rhs = SymbolicOp::zero(dim, dim, depth);
        for j in 0..2 * g {
            if j != inverse_letter(g, i) {
                rhs = rhs.add(&s_ops[j].compose(&s_stars[j]));
            }
        }
        let lhs = s_stars[i].compose(&s_ops[i]);
        holds &= lhs.sub(&rhs).compose(&e1).is_zero();
    }
    identities.push(exact_check("S_i* S_i = sum_j A_ij S_j S_j*", depth - 1, holds));

    // range projections P_γ = S_{i1}..S_{ik} S*_{ik}..S*_{i1}
    let mut holds = true;
    let samples: Vec<Vec<usize>> = vec![vec![0, 1], vec![0; depth - 1], vec![2 * g - 1, 0]];
    for letters in samples {
        let gamma = Word::new(g, letters)?;
        let mut fwd = SymbolicOp::identity(dim, depth);
        let mut bwd = SymbolicOp::identity(dim, depth);
        for &a in &gamma.letters {
            fwd = fwd.compose(&s_ops[a]);
        }
        for &a in gamma.letters.iter().rev() {
            bwd = bwd.compose(&s_stars[a]);
        }
        let p_gamma = op_p(&space, &gamma)?;
        holds &= fwd.compose(&bwd).sub(&p_gamma).is_zero();
    }
    identities.push(exact_check("P_gamma = S..S S*..S*", depth, holds));

    // Q_{i,k} = S_i^k S_i*^k acts as multiplication by the i^k cylinder
    let mut holds = true;
    for i in [0, 2 * g - 1] {
        for k in 2..depth {
            let mut fwd = SymbolicOp::identity(dim, depth);
            let mut bwd = SymbolicOp::identity(dim, depth);
            for _ in 0..k {
                fwd = fwd.compose(&s_ops[i]);
                bwd = bwd.compose(&s_stars[i]);
            }
            let p = op_p(&space, &Word::new(g, vec![i; k])?)?;
            holds &= fwd.compose(&bwd).sub(&p).is_zero();
        }
    }
    identities.push(exact_check("Q_{i,k} = P_{i^k}", depth, holds));

    // unitarity of the letter actions on domain: T_{a⁻¹} T_a E = E (and the
    // reverse), which realizes T_a* = T_{a⁻¹}
    let mut holds = true;
    for a in 0..2 * g {
        let gamma = Word::new(g, vec![a])?;
        let inv = gamma.inverse(g);
        let e = e_dom(&space, depth - 1);
        let t = op_t_word(&space, &gamma);
        let t_inv = op_t_word(&space, &inv);
        holds &= t_inv.compose(&t).compose(&e).sub(&e).is_zero();
        holds &= t.compose(&t_inv).compose(&e).sub(&e).is_zero();
    }
    identities.push(exact_check("T_a* = T_{a^{-1}} (two-sided inverse)", depth - 1, holds));

    // multi-letter T_γ: representatives of the intermediate stages differ,
    // so the inverse identity is numeric rather than symbolic; under the
    // uniform weights it holds to rounding
    let gamma = Word::new(g, vec![0, 1])?;
    let symval = uniform_symbol_value(g);
    let t_num = op_t_word(&space, &gamma).evaluate(&symval);
    let t_inv_num = op_t_word(&space, &gamma.inverse(g)).evaluate(&symval);
    let e2 = e_dom(&space, depth - 2);
    let mut residual = 0.0f64;
    for c in 0..e2.cols {
        let x: Vec<f64> = (0..dim)
            .map(|r| if e2.entries[r].contains_key(&c) { 1.0 } else { 0.0 })
            .collect();
        let z = t_inv_num.apply(&t_num.apply(&x));
        for (zv, xv) in z.iter().zip(&x) {
            residual = residual.max((zv - xv).abs());
        }
    }
    identities.push(IdentityCheck {
        name: "T_gamma* = T_{gamma^{-1}} (numeric, uniform weights)".to_string(),
        domain_word_length: depth - 2,
        exact: false,
        max_residual: residual,
    });

    // Dirac reproduces the grade eigenvalues on the embedded classes
    // (exact rational arithmetic, uniform measure)
    let mut holds = true;
    for m in 0..depth.min(3) {
        for k in 0..2 * g {
            let class = embed_u(g, -(m as i64), k)?;
            let x = extend_cochain(g, depth, &class.as_cochain());
            let second = dirac_rational(g, depth, false, &x);
            let first = dirac_rational(g, depth, true, &x);
            let p = BigRational::from(BigInt::from(-(m as i64)));
            let q = BigRational::from(BigInt::from(m as i64 + 1));
            holds &= second.iter().zip(&x).all(|(d, v)| *d == v * &p);
            holds &= first.iter().zip(&x).all(|(d, v)| *d == v * &q);
        }
    }
    identities.push(exact_check("D restricted to embedded V has eigenvalue p", depth, holds));

    let mut measure = "uniform".to_string();
    if let Some(group) = group {
        measure = "patterson-sullivan".to_string();
        // self-adjointness of D in the PS inner product
        let delta = hausdorff_dim(group, 5.min(depth), 1e-9)?.estimate;
        let mu = ps_measure(group, depth, delta)?.weights;
        let dirac = NumericDirac { g, n: depth, mu: mu.clone() };
        let x: Vec<f64> = (0..dim).map(|i| ((i * 37 + 11) % 101) as f64 / 101.0).collect();
        let y: Vec<f64> = (0..dim).map(|i| ((i * 53 + 29) % 97) as f64 / 97.0).collect();
        let mut residual = 0.0f64;
        for copy in [true, false] {
            let dx = dirac.apply(copy, &x);
            let dy = dirac.apply(copy, &y);
            let lhs: f64 = dx.iter().zip(&y).zip(&mu).map(|((a, b), m)| a * b * m).sum();
            let rhs: f64 = x.iter().zip(&dy).zip(&mu).map(|((a, b), m)| a * b * m).sum();
            residual = residual.max((lhs - rhs).abs() / lhs.abs().max(1.0));
        }
        identities.push(IdentityCheck {
            name: "D self-adjoint in L^2(mu)".to_string(),
            domain_word_length: depth,
            exact: false,
            max_residual: residual,
        });
    }

    Ok(RelationReport { genus: g, depth, dimension: dim, measure, identities })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::{build_fuchsian_schottky, CircleSpec};
    use crate::zeta::{gamma_c_log, local_factor};

    fn sym2() -> SchottkyGroup {
        let circles: Vec<CircleSpec> = [-3.0, -1.0, 1.0, 3.0]
            .iter()
            .map(|&x| CircleSpec { center: Complex64::new(x, 0.0), radius: 0.5 })
            .collect();
        build_fuchsian_schottky(2, &circles).unwrap()
    }

    #[test]
    fn relations_exact_small_genus() {
        for (g, depth) in [(2usize, 4usize), (3, 3)] {
            let report = verify_relations(g, depth, None).unwrap();
            assert_eq!(report.dimension, count_words(g, depth).to_usize().unwrap());
            for id in &report.identities {
                if id.exact {
                    assert_eq!(id.max_residual, 0.0, "residual for {}", id.name);
                } else {
                    assert!(id.max_residual <= 1e-12, "{}: {}", id.name, id.max_residual);
                }
            }
            let exact_count = report.identities.iter().filter(|i| i.exact).count();
            assert_eq!(exact_count, 7);
        }
    }

    #[test]
    fn projector_identities() {
        let space = TruncatedSpace::new(2, 3).unwrap();
        let p0 = op_p(&space, &Word::new(2, vec![0]).unwrap()).unwrap();
        let p1 = op_p(&space, &Word::new(2, vec![1]).unwrap()).unwrap();
        assert!(p0.compose(&p0).sub(&p0).is_zero());
        assert!(p0.compose(&p1).is_zero());
        let mut total = SymbolicOp::zero(space.dim, space.dim, 3);
        for i in 0..4 {
            total = total.add(&op_p(&space, &Word::new(2, vec![i]).unwrap()).unwrap());
        }
        assert!(total.sub(&SymbolicOp::identity(space.dim, 3)).is_zero());
        assert!(op_p(&space, &Word::new(2, vec![0, 1, 0, 1]).unwrap()).is_err());
    }

    #[test]
    fn t_matches_direct_construction() {
        // direct rule for T_a on indicators: the cylinder a⁻¹·v (shift off
        // the leading a⁻¹, weight up) or a·v (prepend, weight down)
        let space = TruncatedSpace::new(2, 4).unwrap();
        let g = 2;
        for a in 0..4 {
            let t = op_t(&space, a);
            let inv_a = inverse_letter(g, a);
            let mut direct = SymbolicOp::zero(space.dim, space.dim, space.depth - 1);
            for v in 0..space.dim {
                let w = space.word(v).to_vec();
                if w[0] == inv_a {
                    // row from S_{a⁻¹}: collapse onto the shifted word
                    let key = w[1..].to_vec();
                    let mut col = key.clone();
                    col.push(min_extension(g, *key.last().unwrap()));
                    direct.insert(v, word_rank(g, &col), Term::single(1, inv_a, key, -1));
                } else {
                    // row from S_a*: spread of the a-prefixed parent
                    let key = w[..space.depth - 1].to_vec();
                    let mut col = vec![a];
                    col.extend_from_slice(&key);
                    direct.insert(v, word_rank(g, &col), Term::single(1, a, key, 1));
                }
            }
            assert!(t.sub(&direct).is_zero());
        }
    }

    #[test]
    fn dirac_spectrum_on_truncation() {
        // grade projections: eigenvalues {1..n} on copy one, {-(n-1)..0} on
        // copy two, checked on grade components of indicator vectors
        let (g, n) = (2usize, 4usize);
        let dim = count_words(g, n).to_usize().unwrap();
        for m in 0..n {
            // build a vector in grade m: indicator minus its expectation at m-1
            let mut x = vec![BigRational::zero(); dim];
            x[0] = BigRational::one();
            let pim = block_average_rational(g, n, m.min(n - 1), &x);
            let component: Vec<BigRational> = if m == 0 {
                pim
            } else {
                let prev = block_average_rational(g, n, m - 1, &x);
                pim.iter().zip(&prev).map(|(a, b)| a - b).collect()
            };
            if component.iter().all(Zero::is_zero) {
                continue;
            }
            let d1 = dirac_rational(g, n, true, &component);
            let d2 = dirac_rational(g, n, false, &component);
            let e1 = BigRational::from(BigInt::from(m as i64 + 1));
            let e2 = BigRational::from(BigInt::from(-(m as i64)));
            assert!(d1.iter().zip(&component).all(|(d, v)| *d == v * &e1));
            assert!(d2.iter().zip(&component).all(|(d, v)| *d == v * &e2));
        }
    }

    #[test]
    fn ps_relation_report() {
        let group = sym2();
        let report = verify_relations(2, 4, Some(&group)).unwrap();
        let sa = report
            .identities
            .iter()
            .find(|i| i.name.starts_with("D self-adjoint"))
            .unwrap();
        assert!(sa.max_residual <= 1e-12, "self-adjointness residual {}", sa.max_residual);
    }

    #[test]
    fn commutator_norms_bounded_trend() {
        let group = sym2();
        let trend = commutator_trend(&group, 0, &[3, 4, 5, 6]).unwrap();
        let rho = cylinder_tree(&group, 5).unwrap().contraction_ratio();
        for norms in [&trend.s_norms, &trend.s_star_norms] {
            // bounded sequence converging geometrically: the increments
            // shrink at least as fast as the cylinder diameters
            assert!(norms.iter().all(|n| n.is_finite() && *n > 0.0));
            let inc: Vec<f64> = norms.windows(2).map(|p| (p[1] - p[0]).abs()).collect();
            assert!(inc[1] <= inc[0] + 1e-9 && inc[2] <= inc[1] + 1e-9, "increments grow: {norms:?}");
            if inc[1] > 1e-9 {
                assert!(
                    inc[2] / inc[1] <= rho.max(0.5) + 0.2,
                    "ratio {} vs rho {} for {norms:?}",
                    inc[2] / inc[1],
                    rho
                );
            }
        }
    }

    #[test]
    fn compressed_factor_matches_gamma() {
        let s = Complex64::new(2.0, 0.0);
        for g in [2usize, 3] {
            assert_eq!(trace_weight(g, 0).unwrap(), 2 * g);
            assert_eq!(trace_weight(g, 2).unwrap(), 2 * g);
            let c_side = compressed_local_factor(g, s, LocalField::Complex, 2).unwrap();
            let expected = -2.0 * g as f64 * gamma_c_log(s).unwrap();
            assert!((c_side - expected).norm() <= 1e-10 * expected.norm());
            let r_side = compressed_local_factor(g, s, LocalField::Real, 2).unwrap();
            let lf = local_factor(LocalField::Real, 1, g, s).unwrap();
            assert!((r_side + lf).norm() <= 1e-10 * lf.norm().max(1.0));
        }
    }
}
