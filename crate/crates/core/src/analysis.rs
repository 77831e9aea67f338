//! Linear-code analytics: exact rank, exact minimum distance, and the
//! permutation action of a point group on an evaluation code.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::autgroup::{AutGroup, GroupError, ProjMap};
use crate::geometry::ProjPoint;
use crate::gf::{FieldElement, FieldError, FieldSpec};

/// Default cap on `|F|^k` for exhaustive distance computation.
pub const DEFAULT_MESSAGE_GUARD: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("matrix rows must all have length {expected}, found {found}")]
    Ragged { expected: usize, found: usize },
    #[error("generator matrix has {cols} columns but {points} evaluation points")]
    LengthMismatch { cols: usize, points: usize },
    #[error("exhaustive search needs {messages} messages, above the guard of {guard}")]
    GuardExceeded { messages: u128, guard: u64 },
    #[error("codeword of weight {weight} is below the designed bound {bound}")]
    BoundViolated {
        weight: usize,
        bound: i64,
        message: Vec<u64>,
    },
    #[error("the code is zero; minimum distance is undefined")]
    EmptyCode,
    #[error("map sends {0:?} outside the evaluation set")]
    NotStabilizing(Vec<u64>),
    #[error("not a permutation of 0..{0}")]
    InvalidPermutation(usize),
}

pub type Result<T> = std::result::Result<T, AnalysisError>;

/// Reduced row echelon form with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    pub rows: Vec<Vec<FieldElement>>,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination. The pivot for each column is the first row at
/// or below the current one with a nonzero entry.
pub fn rank_and_rref(matrix: &[Vec<FieldElement>]) -> Result<Rref> {
    let mut rows = matrix.to_vec();
    let ncols = rows.first().map_or(0, Vec::len);
    if let Some(r) = rows.iter().find(|r| r.len() != ncols) {
        return Err(AnalysisError::Ragged {
            expected: ncols,
            found: r.len(),
        });
    }
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = rows[rank][col].inv()?;
        for x in rows[rank].iter_mut() {
            *x = x.checked_mul(&inv)?;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = x.checked_sub(&factor.checked_mul(p)?)?;
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    Ok(Rref { rank, rows, pivots })
}

/// A linear code given by a generator matrix whose columns are indexed by
/// an ordered evaluation set.
#[derive(Clone, Debug)]
pub struct EvalCode {
    field: FieldSpec,
    points: Vec<ProjPoint>,
    matrix: Vec<Vec<FieldElement>>,
    rref: Rref,
    distance_bound: i64,
    distance_exact: Option<usize>,
}

impl EvalCode {
    pub fn new(
        field: FieldSpec,
        points: Vec<ProjPoint>,
        matrix: Vec<Vec<FieldElement>>,
        distance_bound: i64,
    ) -> Result<Self> {
        if matrix.iter().flatten().any(|x| *x.field() != field) {
            return Err(FieldError::FieldMismatch.into());
        }
        let rref = rank_and_rref(&matrix)?;
        if let Some(row) = matrix.first() {
            if row.len() != points.len() {
                return Err(AnalysisError::LengthMismatch {
                    cols: row.len(),
                    points: points.len(),
                });
            }
        }
        Ok(EvalCode {
            field,
            points,
            matrix,
            rref,
            distance_bound,
            distance_exact: None,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn matrix(&self) -> &[Vec<FieldElement>] {
        &self.matrix
    }

    pub fn rref(&self) -> &Rref {
        &self.rref
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// Dimension, i.e. the rank of the generator matrix.
    pub fn k(&self) -> usize {
        self.rref.rank
    }

    /// Number of generator rows, which may exceed `k`.
    pub fn nominal_rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn distance_bound(&self) -> i64 {
        self.distance_bound
    }

    pub fn distance_exact(&self) -> Option<usize> {
        self.distance_exact
    }

    /// Records an exact distance; it must respect the bound.
    pub fn set_distance_exact(&mut self, d: usize) -> Result<()> {
        if (d as i64) < self.distance_bound {
            return Err(AnalysisError::BoundViolated {
                weight: d,
                bound: self.distance_bound,
                message: vec![],
            });
        }
        self.distance_exact = Some(d);
        Ok(())
    }

    /// `sum_i message[i] * row_i` over the generator rows.
    pub fn encode(&self, message: &[FieldElement]) -> Vec<FieldElement> {
        let mut out = vec![self.field.zero(); self.n()];
        for (c, row) in message.iter().zip(&self.matrix) {
            for (o, x) in out.iter_mut().zip(row) {
                *o = &*o + &(c * x);
            }
        }
        out
    }

    /// Row-space membership via the stored reduced matrix.
    pub fn contains(&self, word: &[FieldElement]) -> bool {
        if word.len() != self.n() {
            return false;
        }
        let mut w = word.to_vec();
        for (row, &col) in self.rref.rows.iter().zip(&self.rref.pivots) {
            let c = w[col].clone();
            if c.is_zero() {
                continue;
            }
            for (x, r) in w.iter_mut().zip(row) {
                *x = &*x - &(&c * r);
            }
        }
        w.iter().all(FieldElement::is_zero)
    }
}

/// Outcome of an exhaustive minimum-distance search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub distance: usize,
    pub bound: i64,
    pub codewords_scanned: u64,
    /// Coordinates of a minimum-weight codeword in the reduced basis.
    pub witness_message: Vec<u64>,
}

/// Addition of canonically encoded elements.
struct Adder {
    p: u64,
    k: u32,
    table: Option<Vec<u32>>,
    order: usize,
}

impl Adder {
    fn new(field: &FieldSpec) -> Self {
        let order = field.order() as usize;
        let mut adder = Adder {
            p: field.p(),
            k: field.k(),
            table: None,
            order,
        };
        if field.p() != 2 && order <= 256 {
            let mut t = vec![0u32; order * order];
            for a in 0..order {
                for b in 0..order {
                    t[a * order + b] = adder.add_digits(a as u64, b as u64) as u32;
                }
            }
            adder.table = Some(t);
        }
        adder
    }

    fn add_digits(&self, mut a: u64, mut b: u64) -> u64 {
        let mut out = 0;
        let mut scale = 1;
        for _ in 0..self.k {
            out += ((a % self.p + b % self.p) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            a ^ b
        } else if let Some(t) = &self.table {
            t[a as usize * self.order + b as usize]
        } else {
            self.add_digits(a as u64, b as u64) as u32
        }
    }
}

struct Scan<'a> {
    adder: Adder,
    /// `scaled[level][v]` is `v * basis_row[level]`, encoded.
    scaled: Vec<Vec<Vec<u32>>>,
    bound: i64,
    best: usize,
    best_message: Vec<u64>,
    digits: Vec<u64>,
    scanned: u64,
    field: &'a FieldSpec,
}

impl Scan<'_> {
    fn descend(&mut self, level: usize, partial: &[u32]) -> Result<()> {
        let q = self.field.order() as usize;
        let last = level + 1 == self.scaled.len();
        let mut next = vec![0u32; partial.len()];
        for v in 0..q {
            self.digits[level] = v as u64;
            for ((o, &a), &b) in next.iter_mut().zip(partial).zip(&self.scaled[level][v]) {
                *o = self.adder.add(a, b);
            }
            if last {
                let weight = next.iter().filter(|&&x| x != 0).count();
                if weight == 0 {
                    continue;
                }
                self.scanned += 1;
                if (weight as i64) < self.bound {
                    return Err(AnalysisError::BoundViolated {
                        weight,
                        bound: self.bound,
                        message: self.digits.clone(),
                    });
                }
                if weight < self.best {
                    self.best = weight;
                    self.best_message = self.digits.clone();
                }
            } else {
                self.descend(level + 1, &next)?;
            }
        }
        Ok(())
    }
}

/// Minimum Hamming weight over all nonzero codewords, by enumerating every
/// message over the reduced basis. Each weight is checked against the
/// code's designed bound during the scan.
pub fn min_distance_exact(code: &EvalCode, guard: u64) -> Result<DistanceReport> {
    let k = code.k();
    if k == 0 {
        return Err(AnalysisError::EmptyCode);
    }
    let field = code.field();
    let messages = (field.order() as u128)
        .checked_pow(k as u32)
        .unwrap_or(u128::MAX);
    if messages > guard as u128 {
        return Err(AnalysisError::GuardExceeded { messages, guard });
    }
    let elems: Vec<FieldElement> = field.elements().collect();
    let scaled = code.rref.rows[..k]
        .iter()
        .map(|row| {
            elems
                .iter()
                .map(|v| row.iter().map(|x| (v * x).enc() as u32).collect())
                .collect()
        })
        .collect();
    let mut scan = Scan {
        adder: Adder::new(field),
        scaled,
        bound: code.distance_bound(),
        best: usize::MAX,
        best_message: Vec::new(),
        digits: vec![0; k],
        scanned: 0,
        field,
    };
    scan.descend(0, &vec![0u32; code.n()])?;
    Ok(DistanceReport {
        distance: scan.best,
        bound: code.distance_bound(),
        codewords_scanned: scan.scanned,
        witness_message: scan.best_message,
    })
}

/// A bijection of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CoordPermutation {
    perm: Vec<usize>,
}

impl CoordPermutation {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &i in &perm {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(AnalysisError::InvalidPermutation(n));
            }
        }
        Ok(CoordPermutation { perm })
    }

    pub fn identity(n: usize) -> Self {
        CoordPermutation {
            perm: (0..n).collect(),
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Moves coordinate `j` to position `perm[j]`.
    pub fn apply<T: Clone>(&self, word: &[T]) -> Vec<T> {
        let mut out = word.to_vec();
        for (j, &t) in self.perm.iter().enumerate() {
            out[t] = word[j].clone();
        }
        out
    }

    /// Multiplicative order.
    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.perm.len()];
        let mut order = 1;
        for start in 0..self.perm.len() {
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.perm[i];
                len += 1;
            }
            if len > 0 {
                order = lcm(order, len);
            }
        }
        order
    }
}

fn lcm(a: usize, b: usize) -> usize {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// `perm[j]` is the index of `gamma(S[j])` in `S`.
pub fn permutation_of(gamma: &ProjMap, points: &[ProjPoint]) -> Result<CoordPermutation> {
    let index: HashMap<Vec<u64>, usize> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (p.enc(), i))
        .collect();
    let perm = points
        .iter()
        .map(|p| {
            let img = gamma.apply(p)?;
            index
                .get(&img.enc())
                .copied()
                .ok_or(AnalysisError::NotStabilizing(img.enc()))
        })
        .collect::<Result<Vec<_>>>()?;
    CoordPermutation::new(perm)
}

/// Whether every permuted generator row stays in the code.
pub fn preserves_code(perm: &CoordPermutation, code: &EvalCode) -> bool {
    perm.len() == code.n()
        && code
            .matrix()
            .iter()
            .all(|row| code.contains(&perm.apply(row)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaithfulnessReport {
    pub passed: bool,
    pub group_order: usize,
    pub image_order: usize,
    /// Non-identity element acting trivially on the evaluation set.
    pub kernel_witness: Option<Vec<u64>>,
    /// Element whose permutation does not preserve the code.
    pub non_automorphism_witness: Option<Vec<u64>>,
}

/// Checks that `group -> Aut(code)` via the action on `points` is a
/// well-defined injective homomorphism.
pub fn verify_faithful(
    group: &AutGroup,
    points: &[ProjPoint],
    code: &EvalCode,
) -> Result<FaithfulnessReport> {
    let mut image = std::collections::HashSet::new();
    let mut kernel_witness = None;
    let mut non_automorphism_witness = None;
    for g in group.elements() {
        let perm = permutation_of(g, points)?;
        if non_automorphism_witness.is_none() && !preserves_code(&perm, code) {
            non_automorphism_witness = Some(g.enc());
        }
        if kernel_witness.is_none() && perm.is_identity() && !g.is_identity() {
            kernel_witness = Some(g.enc());
        }
        image.insert(perm);
    }
    Ok(FaithfulnessReport {
        passed: kernel_witness.is_none()
            && non_automorphism_witness.is_none()
            && image.len() == group.order(),
        group_order: group.order(),
        image_order: image.len(),
        kernel_witness,
        non_automorphism_witness,
    })
}
