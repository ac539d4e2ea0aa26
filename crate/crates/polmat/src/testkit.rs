//! Slow, obviously-correct oracles and instance generators for the test and
//! acceptance suites.
//!
//! The Popov oracle here deliberately re-implements the iterative reduction
//! on top of the raw matrix primitives instead of calling into
//! [`crate::bases`], and it breaks degree ties the opposite way (smaller row
//! index reduces). Agreement between the oracle and the pipeline is then
//! evidence of canonicity rather than of a shared bug.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gfp::PrimeField;
use crate::matrix::{row_pivot, ColumnSet, FpMatrix, PolyMatrix, Shift};
use crate::poly::{Degree, Poly};

/// Shape of the shift attached to a generated instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftProfile {
    Zero,
    /// Entries drawn uniformly from `[-amplitude, amplitude]`.
    Uniform {
        amplitude: i64,
    },
    /// Decreasing multiples of a gap larger than any pivot degree, the shape
    /// that turns Popov into Hermite.
    HermiteLike,
}

/// A reproducible random full-rank instance description.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceSpec {
    pub p: u64,
    pub rows: usize,
    pub cols: usize,
    pub max_degree: usize,
    pub shift: ShiftProfile,
    pub seed: u64,
}

impl InstanceSpec {
    /// Generate the instance: a full-rank `rows x cols` matrix and a shift.
    pub fn generate(&self) -> Result<(PolyMatrix, Shift)> {
        if self.rows == 0 || self.cols < self.rows {
            return Err(Error::Dimension(
                "full-rank instances need 1 <= rows <= cols".into(),
            ));
        }
        let field = PrimeField::new(self.p)?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let matrix = random_full_rank(field, self.rows, self.cols, self.max_degree, &mut rng);
        let shift = match self.shift {
            ShiftProfile::Zero => Shift::zero(self.cols),
            ShiftProfile::Uniform { amplitude } => random_shift(self.cols, amplitude, &mut rng),
            ShiftProfile::HermiteLike => {
                let gap = (self.rows * self.max_degree + 1) as i64;
                Shift::new(
                    (0..self.cols)
                        .map(|j| (self.cols - j) as i64 * gap)
                        .collect(),
                )
            }
        };
        Ok((matrix, shift))
    }
}

/// Uniform random matrix: every coefficient up to `max_degree` uniform.
pub fn random_matrix<R: Rng + ?Sized>(
    field: PrimeField,
    rows: usize,
    cols: usize,
    max_degree: usize,
    rng: &mut R,
) -> PolyMatrix {
    let p = field.modulus();
    let mut out = PolyMatrix::zero(field, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let coeffs: Vec<u64> = (0..=max_degree).map(|_| rng.random_range(0..p)).collect();
            out.set(i, j, Poly::from_coeffs(field, &coeffs));
        }
    }
    out
}

/// Uniform random matrix, resampled until it has full row rank.
pub fn random_full_rank<R: Rng + ?Sized>(
    field: PrimeField,
    rows: usize,
    cols: usize,
    max_degree: usize,
    rng: &mut R,
) -> PolyMatrix {
    assert!(rows <= cols, "full row rank needs rows <= cols");
    loop {
        let candidate = random_matrix(field, rows, cols, max_degree, rng);
        let reduced = oracle_reduce(candidate.to_row_vecs(), &Shift::zero(cols));
        if reduced.iter().all(|r| r.iter().any(|p| !p.is_zero())) {
            return candidate;
        }
    }
}

/// A random matrix of rank at most `rank`, as a product of two uniform
/// factors; the product has degree up to `2 * max_degree`.
pub fn random_low_rank<R: Rng + ?Sized>(
    field: PrimeField,
    rows: usize,
    cols: usize,
    rank: usize,
    max_degree: usize,
    rng: &mut R,
) -> PolyMatrix {
    let left = random_matrix(field, rows, rank, max_degree, rng);
    let right = random_matrix(field, rank, cols, max_degree, rng);
    left.mul(&right).expect("inner dimensions agree")
}

/// Random shift with entries in `[-amplitude, amplitude]`.
pub fn random_shift<R: Rng + ?Sized>(n: usize, amplitude: i64, rng: &mut R) -> Shift {
    Shift::new(
        (0..n)
            .map(|_| rng.random_range(-amplitude..=amplitude))
            .collect(),
    )
}

/// A random unimodular matrix built from elementary row operations, so its
/// determinant is a nonzero constant by construction. `degree_budget` caps
/// the total degree spent on transvection multipliers; zero budget gives the
/// identity.
pub fn random_unimodular<R: Rng + ?Sized>(
    field: PrimeField,
    m: usize,
    degree_budget: usize,
    rng: &mut R,
) -> PolyMatrix {
    let p = field.modulus();
    let mut rows = PolyMatrix::identity(field, m).to_row_vecs();
    let mut remaining = degree_budget;
    while remaining > 0 {
        match rng.random_range(0..4u8) {
            // Transvection: row_i += c * x^e * row_j.
            0..=1 if m >= 2 => {
                let i = rng.random_range(0..m);
                let mut j = rng.random_range(0..m);
                while j == i {
                    j = rng.random_range(0..m);
                }
                let e = rng.random_range(0..=remaining.min(2));
                let c = rng.random_range(1..p);
                let src = rows[j].clone();
                for (dst, s) in rows[i].iter_mut().zip(&src) {
                    *dst = dst
                        .add(&s.mul(&Poly::monomial(field, c, e)).unwrap())
                        .unwrap();
                }
                remaining -= e.max(1);
            }
            // Scale a row by a nonzero constant.
            2 => {
                let i = rng.random_range(0..m);
                let c = Poly::constant(field, rng.random_range(1..p));
                for dst in rows[i].iter_mut() {
                    *dst = dst.mul(&c).unwrap();
                }
                remaining -= 1;
            }
            // Swap two rows.
            _ if m >= 2 => {
                let i = rng.random_range(0..m);
                let j = rng.random_range(0..m);
                rows.swap(i, j);
                remaining -= 1;
            }
            _ => {
                remaining -= 1;
            }
        }
    }
    PolyMatrix::from_rows(field, rows).expect("well-shaped rows")
}

/// Iterative weak Popov reduction, oracle flavor: scan for the first pivot
/// collision, reduce the row with the larger shifted degree, and on ties
/// reduce the one with the *smaller* row index.
fn oracle_reduce(mut rows: Vec<Vec<Poly>>, s: &Shift) -> Vec<Vec<Poly>> {
    loop {
        let pivots: Vec<_> = rows.iter().map(|r| row_pivot(r, s)).collect();
        let mut clash = None;
        for a in 0..rows.len() {
            let Some(ja) = pivots[a].index else { continue };
            if let Some(b) = (a + 1..rows.len()).find(|&b| pivots[b].index == Some(ja)) {
                clash = Some((a, b, ja));
                break;
            }
        }
        let Some((a, b, col)) = clash else {
            return rows;
        };
        // Opposite tie-break to the main pipeline: a (the smaller index)
        // reduces when the shifted degrees are equal.
        let (reducee, other) = if pivots[a].row_degree >= pivots[b].row_degree {
            (a, b)
        } else {
            (b, a)
        };
        let da = pivots[reducee].degree.finite().expect("nonzero row");
        let db = pivots[other].degree.finite().expect("nonzero row");
        let shift_by = (da - db) as usize;
        let ratio = rows[reducee][col]
            .leading_coeff()
            .unwrap()
            .div(rows[other][col].leading_coeff().unwrap())
            .unwrap();
        let xc = Poly::monomial(ratio.field(), ratio.value(), shift_by);
        let src = rows[other].clone();
        for (dst, sp) in rows[reducee].iter_mut().zip(&src) {
            *dst = dst.sub(&sp.mul(&xc).unwrap()).unwrap();
        }
    }
}

/// Popov normalization, oracle flavor: monicize, then clear pivot-column
/// offenses per row, always acting on the offense with the highest shifted
/// level (rightmost column on level ties), which is the schedule that makes
/// the loop provably terminate.
fn oracle_normalize(rows: &mut [Vec<Poly>], s: &Shift) {
    let pivots: Vec<(usize, usize)> = rows
        .iter()
        .map(|r| {
            let p = row_pivot(r, s);
            (
                p.index.expect("no zero rows"),
                p.degree.finite().unwrap() as usize,
            )
        })
        .collect();
    for (k, &(col, _)) in pivots.iter().enumerate() {
        let inv = rows[k][col].leading_coeff().unwrap().inv().unwrap();
        let c = Poly::constant(rows[k][col].field(), inv.value());
        for entry in rows[k].iter_mut() {
            *entry = entry.mul(&c).unwrap();
        }
    }
    for k in 0..rows.len() {
        loop {
            let mut worst: Option<(i64, usize, usize)> = None;
            for (i, &(col, deg)) in pivots.iter().enumerate() {
                if i == k {
                    continue;
                }
                if let Some(dk) = rows[k][col].deg_usize() {
                    if dk >= deg {
                        let level = dk as i64 + s.get(col);
                        let cand = (level, col, i);
                        if worst.is_none_or(|w| (cand.0, cand.1) > (w.0, w.1)) {
                            worst = Some(cand);
                        }
                    }
                }
            }
            let Some((_, col, i)) = worst else { break };
            let (q, _) = rows[k][col].div_rem(&rows[i][col]).unwrap();
            let src = rows[i].clone();
            for (dst, sp) in rows[k].iter_mut().zip(&src) {
                *dst = dst.sub(&q.mul(sp).unwrap()).unwrap();
            }
        }
    }
}

/// Ground-truth shifted Popov form: oracle reduction, zero rows dropped,
/// rows sorted by pivot index, then oracle normalization.
pub fn oracle_popov(f: &PolyMatrix, s: &Shift) -> Result<PolyMatrix> {
    if s.len() != f.cols() {
        return Err(Error::ShiftLength {
            expected: f.cols(),
            found: s.len(),
        });
    }
    let reduced = oracle_reduce(f.to_row_vecs(), s);
    let mut rows: Vec<Vec<Poly>> = reduced
        .into_iter()
        .filter(|r| r.iter().any(|p| !p.is_zero()))
        .collect();
    rows.sort_by_key(|r| row_pivot(r, s).index.expect("zero rows filtered"));
    oracle_normalize(&mut rows, s);
    let out = PolyMatrix::from_rows_with_cols(f.field(), f.cols(), rows)?;
    debug_assert!(out.rows() == 0 || out.is_popov(s));
    Ok(out)
}

/// Row space equality through the oracle canonical forms.
pub fn row_space_equal(a: &PolyMatrix, b: &PolyMatrix) -> Result<bool> {
    if a.cols() != b.cols() {
        return Err(Error::Dimension(
            "row spaces live in different ambient spaces".into(),
        ));
    }
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    let s = Shift::zero(a.cols());
    Ok(oracle_popov(a, &s)? == oracle_popov(b, &s)?)
}

/// Membership of a row vector in the row module spanned by a weak Popov
/// basis, by repeated cancellation of its pivot against a basis row.
pub fn reduces_to_zero(v: &PolyMatrix, basis: &PolyMatrix, s: &Shift) -> Result<bool> {
    if v.rows() != 1 || v.cols() != basis.cols() {
        return Err(Error::Dimension(
            "expected a single row over the basis columns".into(),
        ));
    }
    let profile = basis.pivot_profile(s)?;
    let mut row: Vec<Poly> = v.row(0).to_vec();
    loop {
        let piv = row_pivot(&row, s);
        let Some(col) = piv.index else {
            return Ok(true);
        };
        let vdeg = piv.degree.finite().expect("nonzero row");
        let Some(i) = (0..basis.rows()).find(|&i| {
            profile.rows[i].index == Some(col) && profile.rows[i].degree <= Degree::Fin(vdeg)
        }) else {
            return Ok(false);
        };
        let bdeg = profile.rows[i].degree.finite().unwrap();
        let ratio = row[col]
            .leading_coeff()
            .unwrap()
            .div(basis.entry(i, col).leading_coeff().unwrap())
            .unwrap();
        let xc = Poly::monomial(v.field(), ratio.value(), (vdeg - bdeg) as usize);
        for (dst, src) in row.iter_mut().zip(basis.row(i)) {
            *dst = dst.sub(&src.mul(&xc).unwrap()).unwrap();
        }
    }
}

/// Column rank profile by evaluation at many points: greedy profiles of the
/// evaluated constant matrices, keeping the lexicographically smallest
/// profile among those of maximal cardinality.
pub fn rank_profile_by_evaluation(f: &PolyMatrix) -> ColumnSet {
    let field = f.field();
    let d = f.degree().finite().unwrap_or(0).max(0) as usize;
    let points = f.rows() * d + f.rows() + 1;
    assert!(
        (points as u64) <= field.modulus(),
        "evaluation oracle needs at least {points} distinct points"
    );
    let mut best: Option<Vec<usize>> = None;
    for alpha in 0..points as u64 {
        let profile = constant_greedy_profile(&f.eval(field.element(alpha)));
        let better = match &best {
            None => true,
            Some(b) => profile.len() > b.len() || (profile.len() == b.len() && profile < *b),
        };
        if better {
            best = Some(profile);
        }
    }
    ColumnSet::new(best.unwrap_or_default()).expect("greedy profiles are increasing")
}

fn constant_greedy_profile(a: &FpMatrix) -> Vec<usize> {
    let f = a.field();
    let (m, n) = (a.rows(), a.cols());
    let mut w = a.clone();
    let mut profile = Vec::new();
    let mut r = 0usize;
    for j in 0..n {
        if r == m {
            break;
        }
        let Some(pivot) = (r..m).find(|&i| w.get(i, j) != 0) else {
            continue;
        };
        for l in 0..n {
            let (x, y) = (w.get(r, l), w.get(pivot, l));
            w.set(r, l, y);
            w.set(pivot, l, x);
        }
        let inv = f.inv_raw(w.get(r, j)).expect("pivot nonzero");
        for i in r + 1..m {
            let c = f.mul_raw(w.get(i, j), inv);
            if c == 0 {
                continue;
            }
            for l in j..n {
                let v = f.sub_raw(w.get(i, l), f.mul_raw(c, w.get(r, l)));
                w.set(i, l, v);
            }
        }
        profile.push(j);
        r += 1;
    }
    profile
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f7() -> PrimeField {
        PrimeField::new(7).unwrap()
    }

    fn example_matrix() -> PolyMatrix {
        PolyMatrix::from_signed(
            f7(),
            &[
                vec![vec![0, 0, 1], vec![1, 1], vec![2]],
                vec![vec![2, 2], vec![0, 2], vec![2]],
            ],
        )
        .unwrap()
    }

    fn example_popov() -> PolyMatrix {
        PolyMatrix::from_signed(
            f7(),
            &[
                vec![vec![6, 6, 1], vec![1], vec![1]],
                vec![vec![1, 1], vec![0, 1], vec![1]],
            ],
        )
        .unwrap()
    }

    #[test]
    fn oracle_popov_running_example() {
        let got = oracle_popov(&example_matrix(), &Shift::zero(3)).unwrap();
        assert_eq!(got, example_popov());
        // Idempotence.
        assert_eq!(oracle_popov(&got, &Shift::zero(3)).unwrap(), got);
    }

    #[test]
    fn oracle_popov_identity_and_hermite_shift() {
        let id = PolyMatrix::identity(f7(), 3);
        assert_eq!(oracle_popov(&id, &Shift::zero(3)).unwrap(), id);

        let spec = InstanceSpec {
            p: 7,
            rows: 2,
            cols: 3,
            max_degree: 2,
            shift: ShiftProfile::HermiteLike,
            seed: 99,
        };
        let (m, s_h) = spec.generate().unwrap();
        let h = oracle_popov(&m, &s_h).unwrap();
        assert!(
            h.is_hermite(),
            "hermite-like shift must give an echelon form: {h:?}"
        );
    }

    #[test]
    fn oracle_output_always_popov() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let m = random_matrix(f7(), 2, 4, 2, &mut rng);
            let s = random_shift(4, 3, &mut rng);
            let p = oracle_popov(&m, &s).unwrap();
            assert!(p.rows() == 0 || p.is_popov(&s));
        }
    }

    #[test]
    fn random_unimodular_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert_eq!(
            random_unimodular(f7(), 3, 0, &mut rng),
            PolyMatrix::identity(f7(), 3)
        );
        for _ in 0..50 {
            let u = random_unimodular(f7(), 3, 4, &mut rng);
            let p = oracle_popov(&u, &Shift::zero(3)).unwrap();
            assert_eq!(
                p,
                PolyMatrix::identity(f7(), 3),
                "unimodular iff Popov form I"
            );
        }
    }

    #[test]
    fn row_space_equal_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = example_matrix();
        let u = random_unimodular(f7(), 2, 3, &mut rng);
        assert!(row_space_equal(&a, &u.mul(&a).unwrap()).unwrap());

        let single_x = PolyMatrix::from_signed(f7(), &[vec![vec![0, 1], vec![1]]]).unwrap();
        let scaled = PolyMatrix::from_signed(f7(), &[vec![vec![0, 0, 1], vec![0, 1]]]).unwrap();
        assert!(!row_space_equal(&single_x, &scaled).unwrap());

        // Padding with zero rows changes nothing.
        let padded = a.stack(&PolyMatrix::zero(f7(), 1, 3)).unwrap();
        assert!(row_space_equal(&a, &padded).unwrap());

        // Equivalence relation on a few sampled triples.
        for _ in 0..20 {
            let m = random_matrix(f7(), 2, 3, 2, &mut rng);
            assert!(row_space_equal(&m, &m).unwrap());
            let u1 = random_unimodular(f7(), 2, 2, &mut rng);
            let u2 = random_unimodular(f7(), 2, 2, &mut rng);
            let a1 = u1.mul(&m).unwrap();
            let a2 = u2.mul(&m).unwrap();
            assert_eq!(
                row_space_equal(&m, &a1).unwrap() && row_space_equal(&a1, &a2).unwrap(),
                row_space_equal(&m, &a2).unwrap()
            );
        }
    }

    #[test]
    fn membership_reduction() {
        let basis = example_popov();
        let s = Shift::zero(3);
        // A combination of the basis rows reduces to zero.
        let coeffs = PolyMatrix::from_signed(f7(), &[vec![vec![1, 1], vec![0, 0, 3]]]).unwrap();
        let member = coeffs.mul(&basis).unwrap();
        assert!(reduces_to_zero(&member, &basis, &s).unwrap());
        // A unit vector is not in the module.
        let outsider = PolyMatrix::from_signed(f7(), &[vec![vec![1], vec![], vec![]]]).unwrap();
        assert!(!reduces_to_zero(&outsider, &basis, &s).unwrap());
    }
}
