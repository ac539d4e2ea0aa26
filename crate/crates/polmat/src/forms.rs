//! Top-level normal form algorithms: Las Vegas completion into a square
//! nonsingular matrix, deterministic pivot support computation through
//! saturation bases, shifted Popov forms from a known pivot support, and the
//! Popov/Hermite drivers that tie everything together.
//!
//! Every shifted computation works by degree bookkeeping; the monomial
//! diagonal a shift stands for is never materialized. The completion rows,
//! for instance, are monomial rows whose exponents per column are chosen so
//! that all completion rows sit at one uniform shifted level above the
//! input, which reduces to the classical constant-lift-times-`x^(d+1)`
//! construction when the shift is zero.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;

use crate::bases::{
    approximant_basis_owp, column_rank_profile, mat_quotient_left, minimal_kernel_basis,
    nonsingular_popov, popov_normalize, weak_popov_reduce, OrderTuple,
};
use crate::error::{Error, Result};
use crate::matrix::{ColumnSet, FpMatrix, PolyMatrix, Shift};
use crate::poly::{Degree, Poly};

/// A strict upper bound on the degree of a shifted Popov form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreeBound(usize);

impl DegreeBound {
    pub fn new(delta: usize) -> Result<DegreeBound> {
        if delta == 0 {
            return Err(Error::BadDegreeBound);
        }
        Ok(DegreeBound(delta))
    }

    pub fn get(&self) -> usize {
        self.0
    }
}

/// A computed shifted Popov form together with its pivot data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopovResult {
    /// The `r x n` matrix in shifted Popov form.
    pub popov: PolyMatrix,
    /// Columns containing the pivots, strictly increasing.
    pub pivot_support: ColumnSet,
    /// Degrees of the pivot entries, one per row.
    pub pivot_degrees: Vec<usize>,
}

/// Wrap a matrix that must be in `s`-Popov form, re-verifying the predicate.
fn assemble_result(popov: PolyMatrix, s: &Shift) -> Result<PopovResult> {
    if !popov.is_popov(s) {
        return Err(Error::InternalCheck(
            "computed matrix is not in shifted Popov form".into(),
        ));
    }
    let profile = popov.pivot_profile(s)?;
    let indices: Vec<usize> = profile
        .rows
        .iter()
        .map(|r| r.index.expect("Popov rows are nonzero"))
        .collect();
    let pivot_support = ColumnSet::new(indices)?;
    let pivot_degrees = profile.degrees();
    Ok(PopovResult {
        popov,
        pivot_support,
        pivot_degrees,
    })
}

/// Outcome of one completion attempt.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompletionOutcome {
    Success(PopovResult),
    /// The stacked matrix was singular.
    FailureSingular,
    /// The row degrees of the stacked Popov form did not contain a
    /// permutation of the completion row degrees.
    FailureDegrees,
}

/// One completion attempt: the sampled lift and what happened with it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionAttempt {
    /// The constant lift `L` whose monomial multiples complete the input.
    pub lift: FpMatrix,
    pub outcome: CompletionOutcome,
}

/// Las Vegas Popov form of a full-rank `m x n` input with `m < n` by
/// completing it to a square nonsingular matrix.
///
/// The completion block has one monomial row per missing dimension, with
/// entries `L[i,j] * x^(level - s[j])` for a uniform shifted level just above
/// the input; for the zero shift this is the constant lift scaled by
/// `x^(deg+1)`. Nonsingularity of the stack is decided deterministically by
/// weak Popov reduction (a zero row appears iff the stack is singular).
///
/// Columns listed in `known_pivots` get a zero lift column; when all `m`
/// pivot columns are known the remaining block is the identity and the
/// attempt is deterministic.
pub fn random_completion_popov<R: Rng + ?Sized>(
    f: &PolyMatrix,
    s: &Shift,
    rng: &mut R,
    known_pivots: Option<&ColumnSet>,
) -> Result<CompletionAttempt> {
    let (m, n) = (f.rows(), f.cols());
    s.check_len(n)?;
    if m >= n {
        return Err(Error::Dimension(format!(
            "completion needs strictly more columns than rows, got {m}x{n}"
        )));
    }
    if let Some(k) = known_pivots {
        k.check_bounds(n)?;
    }
    let (reduced, _) = weak_popov_reduce(f, s, false)?;
    if (0..m).any(|i| reduced.row_is_zero(i)) {
        return Err(Error::NotFullRank);
    }
    let field = f.field();
    let max_rdeg = f
        .rdeg_shifted(s)?
        .iter()
        .filter_map(|d| d.finite())
        .max()
        .expect("full-rank input has no zero rows");
    let level = (max_rdeg + 1).max(s.max());

    let mut lift = FpMatrix::zeros(field, n - m, n);
    let fully_known = known_pivots.is_some_and(|k| k.len() == m);
    if fully_known {
        let complement = known_pivots.expect("checked above").complement(n);
        for (i, j) in complement.iter().enumerate() {
            lift.set(i, j, 1);
        }
    } else {
        for i in 0..n - m {
            for j in 0..n {
                if known_pivots.is_some_and(|k| k.contains(j)) {
                    continue;
                }
                lift.set(i, j, rng.random_range(0..field.modulus()));
            }
        }
    }

    let mut completion = PolyMatrix::zero(field, n - m, n);
    for i in 0..n - m {
        for j in 0..n {
            let exp = (level - s.get(j)) as usize;
            completion.set(i, j, Poly::monomial(field, lift.get(i, j), exp));
        }
    }

    let stacked = f.stack(&completion)?;
    let (reduced, _) = weak_popov_reduce(&stacked, s, false)?;
    if (0..n).any(|i| reduced.row_is_zero(i)) {
        return Ok(CompletionAttempt {
            lift,
            outcome: CompletionOutcome::FailureSingular,
        });
    }
    let popov = popov_normalize(&reduced, s)?;
    let rdegs = popov.rdeg_shifted(s)?;
    let at_level = rdegs.iter().filter(|&&d| d == Degree::Fin(level)).count();
    if at_level < n - m {
        return Ok(CompletionAttempt {
            lift,
            outcome: CompletionOutcome::FailureDegrees,
        });
    }
    let keep: Vec<usize> = (0..n).filter(|&i| rdegs[i] < Degree::Fin(level)).collect();
    if keep.len() != m {
        return Err(Error::InternalCheck(
            "completion extracted a wrong row count".into(),
        ));
    }
    let extracted = popov.select_rows(&keep);
    let result = assemble_result(extracted, s)?;
    Ok(CompletionAttempt {
        lift,
        outcome: CompletionOutcome::Success(result),
    })
}

/// Lower bound on the success probability of one completion attempt with a
/// lift sampled from a set of `q` field elements: the exact rational
/// `prod_{i=1..n-m} (1 - q^-i)` when sampling the whole field, and
/// `1 - (n-m)/q` otherwise.
pub fn completion_success_probability_bound(
    q: u64,
    m: usize,
    n: usize,
    full_field: bool,
) -> BigRational {
    let k = n.saturating_sub(m);
    if full_field {
        let mut acc = BigRational::from_integer(BigInt::from(1));
        let q = BigInt::from(q);
        let mut qi = BigInt::from(1);
        for _ in 1..=k {
            qi *= &q;
            acc *= BigRational::new(&qi - 1, qi.clone());
        }
        acc
    } else {
        BigRational::from_integer(BigInt::from(1))
            - BigRational::new(BigInt::from(k as u64), BigInt::from(q))
    }
}

/// Pivot support of `f` (zero shift) through a saturation basis: a kernel
/// basis of `f`, an ordered weak Popov approximant basis of that kernel, and
/// the low-degree rows of the latter, whose pivot index tuple is returned.
pub fn pivot_support_via_factor(f: &PolyMatrix) -> Result<ColumnSet> {
    pivot_support_via_factor_shifted(f, &Shift::zero(f.cols()))
}

/// Shift-aware variant of the saturation route.
///
/// The kernel does not depend on the shift; the approximant basis is
/// computed under the row shift `s`, the degree window widens from `deg(f)`
/// to `deg(f) + 2*amp(s)`, and the per-column orders grow accordingly, so
/// the same extraction argument applies to the shifted saturation basis.
pub fn pivot_support_via_factor_shifted(f: &PolyMatrix, s: &Shift) -> Result<ColumnSet> {
    let (m, n) = (f.rows(), f.cols());
    s.check_len(n)?;
    if m > n {
        return Err(Error::UnsupportedShape);
    }
    if f.is_zero() {
        return Ok(ColumnSet::empty());
    }
    let kernel = minimal_kernel_basis(f)?;
    let d = f.degree().finite().expect("nonzero matrix");
    let window = d + 2 * s.amp();
    let orders: Vec<usize> = kernel
        .cdeg()
        .iter()
        .map(|c| (c.finite().expect("kernel basis columns are nonzero") + window + 1) as usize)
        .collect();
    let sigma = OrderTuple::new(orders)?;
    let basis = approximant_basis_owp(&kernel, &sigma, s)?;
    let keep: Vec<usize> = (0..n)
        .filter(|&i| {
            basis
                .row(i)
                .iter()
                .map(|p| p.degree())
                .max()
                .unwrap_or(Degree::NegInf)
                <= Degree::Fin(window)
        })
        .collect();
    let saturation = basis.select_rows(&keep);
    let profile = saturation.pivot_profile(s)?;
    ColumnSet::new(
        profile
            .rows
            .iter()
            .map(|r| r.index.expect("saturation rows are nonzero"))
            .collect(),
    )
}

/// Pivot support of a possibly very wide matrix (zero shift), by chunking.
pub fn wide_matrix_pivot_support(f: &PolyMatrix) -> Result<ColumnSet> {
    wide_matrix_pivot_support_shifted(f, &Shift::zero(f.cols()))
}

/// Shift-aware chunked pivot support: take the support of the leading `2m`
/// columns, discard the other columns of that block, recurse on what is
/// left, and re-embed the indices.
pub fn wide_matrix_pivot_support_shifted(f: &PolyMatrix, s: &Shift) -> Result<ColumnSet> {
    let (m, n) = (f.rows(), f.cols());
    s.check_len(n)?;
    if m == 0 {
        return Ok(ColumnSet::empty());
    }
    if n <= 2 * m {
        return pivot_support_via_factor_shifted(f, s);
    }
    let head = ColumnSet::full(2 * m);
    let head_support = pivot_support_via_factor_shifted(&f.columns(&head)?, &s.restrict(&head)?)?;
    let mut kept: Vec<usize> = head_support.indices().to_vec();
    kept.extend(2 * m..n);
    let kept = ColumnSet::new(kept)?;
    let sub = f.columns(&kept)?;
    let sub_support = wide_matrix_pivot_support_shifted(&sub, &s.restrict(&kept)?)?;
    Ok(kept.embed_set(&sub_support))
}

/// Shifted pivot support of an arbitrary matrix: inputs with more rows than
/// columns are first replaced by the row basis of a weak Popov reduction,
/// then chunked.
pub fn pivot_support(f: &PolyMatrix, s: &Shift) -> Result<ColumnSet> {
    if f.rows() > f.cols() {
        let (reduced, _) = weak_popov_reduce(f, s, false)?;
        let nonzero: Vec<usize> = (0..reduced.rows())
            .filter(|&i| !reduced.row_is_zero(i))
            .collect();
        wide_matrix_pivot_support_shifted(&reduced.select_rows(&nonzero), s)
    } else {
        wide_matrix_pivot_support_shifted(f, s)
    }
}

/// `1 + min(|rdeg f|, |cdeg f'|, deg f + amp(s))` with zero columns removed
/// from `f'`; the default strict bound on the degree of the Popov form.
fn default_degree_bound(f: &PolyMatrix, s: &Shift) -> Result<usize> {
    let mut rdeg_sum = 0i64;
    for d in f.rdeg() {
        let Some(d) = d.finite() else {
            return Err(Error::NotFullRank);
        };
        rdeg_sum += d;
    }
    let cdeg_sum: i64 = f.cdeg().iter().filter_map(|d| d.finite()).sum();
    let deg_amp = f.degree().finite().expect("no zero rows, hence nonzero") + s.amp();
    Ok((1 + rdeg_sum.min(cdeg_sum).min(deg_amp)) as usize)
}

/// Shifted Popov form of a full-rank `m x n` matrix with `m < n` whose
/// `s`-pivot support is already known.
///
/// The pivot columns are normalized as a square nonsingular problem; the
/// unimodular transformation is recovered as an exact quotient; the
/// pivot-free columns are one truncated inverse and one truncated product
/// away, at a precision just above the degree of the result.
///
/// A wrong support surfaces as [`Error::PivotSupportIncorrect`]: it signals
/// a caller bug, never a recoverable state.
pub fn known_support_popov(
    f: &PolyMatrix,
    s: &Shift,
    support: &ColumnSet,
    delta: Option<DegreeBound>,
) -> Result<PopovResult> {
    let (m, n) = (f.rows(), f.cols());
    s.check_len(n)?;
    support.check_bounds(n)?;
    if m >= n {
        return Err(Error::Dimension(format!(
            "known-support Popov needs strictly more columns than rows, got {m}x{n}"
        )));
    }
    if support.len() != m {
        return Err(Error::PivotSupportIncorrect);
    }
    let delta = match delta {
        Some(d) => d.get(),
        None => default_degree_bound(f, s)?,
    };

    let f_piv = f.columns(support)?;
    let s_piv = s.restrict(support)?;
    let p_piv = nonsingular_popov(&f_piv, &s_piv).map_err(|e| match e {
        Error::Singular => Error::PivotSupportIncorrect,
        other => other,
    })?;
    let transform = mat_quotient_left(&f_piv, &p_piv).map_err(|e| match e {
        Error::NotLeftMultiple | Error::ConstantTermSingular => Error::PivotSupportIncorrect,
        other => other,
    })?;

    let complement = support.complement(n);
    let max_rdeg = p_piv
        .rdeg_shifted(&s_piv)?
        .iter()
        .filter_map(|d| d.finite())
        .max()
        .expect("nonsingular Popov part has no zero rows");
    let min_comp = complement.iter().map(|j| s.get(j)).min().expect("m < n");
    let tightened = 1 + max_rdeg - min_comp;
    let precision = (delta as i64).min(tightened).max(0) as usize;

    let f_comp = f.columns(&complement)?;
    let rest = if precision == 0 {
        PolyMatrix::zero(f.field(), m, complement.len())
    } else {
        let inv = transform
            .truncated_inverse(precision)
            .map_err(|e| match e {
                Error::ConstantTermSingular => Error::PivotSupportIncorrect,
                other => other,
            })?;
        inv.mul_trunc(&f_comp, precision)?
    };

    let mut popov = PolyMatrix::zero(f.field(), m, n);
    for (k, j) in support.iter().enumerate() {
        for i in 0..m {
            popov.set(i, j, p_piv.entry(i, k).clone());
        }
    }
    for (k, j) in complement.iter().enumerate() {
        for i in 0..m {
            popov.set(i, j, rest.entry(i, k).clone());
        }
    }

    let result = assemble_result(popov, s).map_err(|_| Error::PivotSupportIncorrect)?;
    if result.pivot_support != *support {
        return Err(Error::PivotSupportIncorrect);
    }
    Ok(result)
}

/// How [`popov_form`] goes about its business.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// The deterministic support pipeline.
    #[default]
    Auto,
    /// Las Vegas completion with retries.
    Completion,
    /// Pivot support first, then the known-support algorithm.
    SupportPipeline,
}

/// Retry cap for the Las Vegas completion strategy.
const COMPLETION_RETRIES: usize = 10;

/// The `s`-Popov form of an arbitrary matrix over `F_p[x]`.
///
/// Rank-deficient inputs and inputs with more rows than columns are first
/// replaced by the row basis read off a weak Popov reduction; the square
/// full-rank case is normalized directly, everything else goes through the
/// selected strategy. The completion strategy draws its lifts from a fixed
/// internal seed; use [`popov_form_seeded`] to control the randomness.
pub fn popov_form(f: &PolyMatrix, s: &Shift, strategy: Strategy) -> Result<PopovResult> {
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(0x70_6f70_6f76);
    popov_form_seeded(f, s, strategy, &mut rng)
}

pub fn popov_form_seeded<R: Rng + ?Sized>(
    f: &PolyMatrix,
    s: &Shift,
    strategy: Strategy,
    rng: &mut R,
) -> Result<PopovResult> {
    let n = f.cols();
    s.check_len(n)?;
    let (reduced, _) = weak_popov_reduce(f, s, false)?;
    let nonzero: Vec<usize> = (0..reduced.rows())
        .filter(|&i| !reduced.row_is_zero(i))
        .collect();
    let basis = reduced.select_rows(&nonzero);
    let r = basis.rows();
    if r == 0 || r == n {
        // Zero matrix (an empty Popov form) or the square nonsingular case.
        let normalized = if r == 0 {
            basis
        } else {
            popov_normalize(&basis, s)?
        };
        return assemble_result(normalized, s);
    }
    match strategy {
        Strategy::Auto | Strategy::SupportPipeline => {
            let support = wide_matrix_pivot_support_shifted(&basis, s)?;
            known_support_popov(&basis, s, &support, None)
        }
        Strategy::Completion => {
            for _ in 0..COMPLETION_RETRIES {
                let attempt = random_completion_popov(&basis, s, rng, None)?;
                if let CompletionOutcome::Success(result) = attempt.outcome {
                    return Ok(result);
                }
            }
            Err(Error::CompletionExhausted(COMPLETION_RETRIES))
        }
    }
}

/// The Hermite form of an arbitrary matrix over `F_p[x]`, as the Popov form
/// under the extremal shift `(n*delta, .., 2*delta, delta)` with `delta`
/// one more than the smaller of the row and column degree sums of the row
/// basis; its pivot support is the column rank profile.
pub fn hermite_form(f: &PolyMatrix) -> Result<PopovResult> {
    let n = f.cols();
    let zero = Shift::zero(n);
    let (reduced, _) = weak_popov_reduce(f, &zero, false)?;
    let nonzero: Vec<usize> = (0..reduced.rows())
        .filter(|&i| !reduced.row_is_zero(i))
        .collect();
    let basis = reduced.select_rows(&nonzero);
    let r = basis.rows();

    let delta = if r == 0 {
        1
    } else {
        let rdeg_sum: i64 = basis.rdeg().iter().filter_map(|d| d.finite()).sum();
        let cdeg_sum: i64 = basis.cdeg().iter().filter_map(|d| d.finite()).sum();
        (1 + rdeg_sum.min(cdeg_sum)) as usize
    };
    let hermite_shift = Shift::new((0..n).map(|j| (n - j) as i64 * delta as i64).collect());

    let result = if r == n {
        assemble_result(nonsingular_popov(&basis, &hermite_shift)?, &hermite_shift)?
    } else if r == 0 {
        assemble_result(basis, &hermite_shift)?
    } else {
        let profile = column_rank_profile(&basis);
        known_support_popov(
            &basis,
            &hermite_shift,
            &profile,
            Some(DegreeBound::new(delta)?),
        )?
    };
    if !result.popov.is_hermite() {
        return Err(Error::InternalCheck(
            "Hermite form verification failed".into(),
        ));
    }
    Ok(result)
}

/// The four degree bounds tied to a full-rank input, its shift, and its
/// pivot support: on the Popov form via the shift amplitude, on the columns
/// and the degree of the unimodular transformation, and on the Popov form
/// via degree sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeBoundsReport {
    /// `deg(P) <= deg(F) + amp(s)`.
    pub popov_degree_shift: i64,
    /// `cdeg(U_i) <= |rdeg F| - rdeg(row i)`, one bound per column of `U`.
    pub transform_cdeg: Vec<i64>,
    /// `deg(U) <= |cdeg F_pivot|`.
    pub transform_degree: i64,
    /// `deg(P) <= min(|rdeg F|, |cdeg F'|)`, zero columns removed.
    pub popov_degree_global: i64,
}

pub fn degree_bounds(f: &PolyMatrix, s: &Shift, support: &ColumnSet) -> Result<DegreeBoundsReport> {
    let n = f.cols();
    s.check_len(n)?;
    support.check_bounds(n)?;
    let mut rdeg = Vec::with_capacity(f.rows());
    for d in f.rdeg() {
        let Some(d) = d.finite() else {
            return Err(Error::NotFullRank);
        };
        rdeg.push(d);
    }
    let rdeg_sum: i64 = rdeg.iter().sum();
    let cdeg_sum: i64 = f.cdeg().iter().filter_map(|d| d.finite()).sum();
    let deg = f.degree().finite().unwrap_or(0);
    let pivot_cdeg_sum: i64 = f
        .columns(support)?
        .cdeg()
        .iter()
        .filter_map(|d| d.finite())
        .sum();
    Ok(DegreeBoundsReport {
        popov_degree_shift: deg + s.amp(),
        transform_cdeg: rdeg.iter().map(|&d| rdeg_sum - d).collect(),
        transform_degree: pivot_cdeg_sum,
        popov_degree_global: rdeg_sum.min(cdeg_sum),
    })
}
