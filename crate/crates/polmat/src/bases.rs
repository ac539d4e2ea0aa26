//! Building-block algorithms behind the top-level normal form drivers:
//! iterative weak Popov reduction, Popov normalization, nonsingular shifted
//! Popov forms, approximant bases, minimal kernel bases, exact left
//! quotients, and column rank profiles.
//!
//! These are correct desk-scale implementations behind the same contracts as
//! the asymptotically fast algorithms from the literature, so the drivers in
//! [`crate::forms`] run unmodified if a faster backend is substituted later.

use crate::error::{Error, Result};
use crate::matrix::{row_pivot, ColumnSet, PolyMatrix, Shift};
use crate::poly::Poly;

/// Approximation orders, one positive entry per column of the approximated
/// matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderTuple {
    orders: Vec<usize>,
}

impl OrderTuple {
    pub fn new(orders: Vec<usize>) -> Result<OrderTuple> {
        if orders.contains(&0) {
            return Err(Error::BadOrder);
        }
        Ok(OrderTuple { orders })
    }

    pub fn uniform(n: usize, order: usize) -> Result<OrderTuple> {
        OrderTuple::new(vec![order; n])
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn entries(&self) -> &[usize] {
        &self.orders
    }

    /// `|sigma|`, the total order.
    pub fn sum(&self) -> usize {
        self.orders.iter().sum()
    }
}

/// Optional record of the row operations performed by a reduction.
#[derive(Debug, Clone)]
pub struct ReductionTrace {
    /// When tracked, `transformation * input = output` exactly.
    pub transformation: Option<PolyMatrix>,
    /// Number of elementary row operations applied.
    pub steps: u64,
}

/// Shift-aware Mulders-Storjohann reduction.
///
/// Returns a matrix unimodularly equivalent to `f` whose nonzero rows form an
/// `s`-weak Popov matrix; zero rows are compacted to the bottom. While two
/// nonzero rows share a pivot index, the one with larger shifted row degree
/// (ties: larger row index) loses the multiple `c*x^e` of the other that
/// cancels its pivot-degree coefficient.
pub fn weak_popov_reduce(
    f: &PolyMatrix,
    s: &Shift,
    track: bool,
) -> Result<(PolyMatrix, ReductionTrace)> {
    s.check_len(f.cols())?;
    let field = f.field();
    let m = f.rows();
    let mut rows = f.to_row_vecs();
    let mut trans = track.then(|| PolyMatrix::identity(field, m).to_row_vecs());
    let mut steps = 0u64;

    loop {
        let pivots: Vec<_> = rows.iter().map(|r| row_pivot(r, s)).collect();
        let mut owner: Vec<Option<usize>> = vec![None; f.cols()];
        let mut clash: Option<(usize, usize)> = None;
        for (i, p) in pivots.iter().enumerate() {
            if let Some(j) = p.index {
                if let Some(k) = owner[j] {
                    clash = Some((k, i));
                    break;
                }
                owner[j] = Some(i);
            }
        }
        let Some((a, b)) = clash else { break };
        // b > a by construction, so on equal shifted degrees b reduces.
        let (reducee, other) = if pivots[b].row_degree >= pivots[a].row_degree {
            (b, a)
        } else {
            (a, b)
        };
        let j = pivots[reducee].index.expect("clashing rows are nonzero");
        let (dr, do_) = (
            pivots[reducee].degree.finite().expect("nonzero row"),
            pivots[other].degree.finite().expect("nonzero row"),
        );
        let e = (dr - do_) as usize;
        let lc_r = rows[reducee][j]
            .leading_coeff()
            .expect("pivot entry nonzero");
        let lc_o = rows[other][j].leading_coeff().expect("pivot entry nonzero");
        let c = lc_r.div(lc_o).expect("same field, nonzero divisor").value();
        let other_row = rows[other].clone();
        for (dst, src) in rows[reducee].iter_mut().zip(&other_row) {
            *dst = dst.sub_raw(&src.scale_shift_raw(c, e));
        }
        if let Some(t) = trans.as_mut() {
            let other_row = t[other].clone();
            for (dst, src) in t[reducee].iter_mut().zip(&other_row) {
                *dst = dst.sub_raw(&src.scale_shift_raw(c, e));
            }
        }
        steps += 1;
    }

    // Compact zero rows to the bottom, keeping the relative order of the
    // nonzero rows.
    let mut order: Vec<usize> = (0..m)
        .filter(|&i| rows[i].iter().any(|p| !p.is_zero()))
        .collect();
    order.extend((0..m).filter(|&i| rows[i].iter().all(|p| p.is_zero())));
    let rows_out: Vec<_> = order.iter().map(|&i| rows[i].clone()).collect();
    let out = PolyMatrix::from_rows_with_cols(field, f.cols(), rows_out)?;
    let transformation = match trans {
        None => None,
        Some(t) => {
            let t_out: Vec<_> = order.iter().map(|&i| t[i].clone()).collect();
            Some(PolyMatrix::from_rows_with_cols(field, m, t_out)?)
        }
    };
    Ok((
        out,
        ReductionTrace {
            transformation,
            steps,
        },
    ))
}

/// Normalize an `s`-weak Popov matrix into the unique `s`-Popov matrix with
/// the same row space: sort rows by pivot index, make pivots monic, then
/// clear every entry sitting in a pivot column down to degree below the
/// pivot degree by division with remainder.
pub fn popov_normalize(w: &PolyMatrix, s: &Shift) -> Result<PolyMatrix> {
    if !w.is_weak_popov(s) {
        return Err(Error::NotWeakPopov);
    }
    let m = w.rows();
    let profile = w.pivot_profile(s)?;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| profile.rows[i].index.expect("weak Popov has no zero rows"));
    let mut rows: Vec<Vec<Poly>> = order.iter().map(|&i| w.row(i).to_vec()).collect();
    let pivots: Vec<(usize, usize)> = order
        .iter()
        .map(|&i| {
            let r = profile.rows[i];
            (r.index.unwrap(), r.degree.finite().unwrap() as usize)
        })
        .collect();

    for (i, &(j, _)) in pivots.iter().enumerate() {
        let lead = rows[i][j].leading_coeff().expect("pivot entry nonzero");
        let c = lead.inv().expect("nonzero leading coefficient").value();
        for p in rows[i].iter_mut() {
            *p = p.scale_raw(c);
        }
    }

    // Per-row elimination. Always acting on the offense with the largest
    // (shifted level, column) keeps the measure strictly decreasing, which
    // is what makes this loop terminate.
    for k in 0..m {
        loop {
            let mut best: Option<(usize, i64, usize)> = None;
            for (i, &(j, d)) in pivots.iter().enumerate() {
                if i == k {
                    continue;
                }
                if let Some(dk) = rows[k][j].deg_usize() {
                    if dk >= d {
                        let level = dk as i64 + s.get(j);
                        if best.is_none_or(|(_, bl, bj)| (level, j) > (bl, bj)) {
                            best = Some((i, level, j));
                        }
                    }
                }
            }
            let Some((i, _, j)) = best else { break };
            let (q, _) = rows[k][j].div_rem_raw(&rows[i][j]);
            let pivot_row = rows[i].clone();
            for (dst, src) in rows[k].iter_mut().zip(&pivot_row) {
                *dst = dst.sub_raw(&q.mul_raw(src));
            }
        }
    }

    let out = PolyMatrix::from_rows_with_cols(w.field(), w.cols(), rows)?;
    debug_assert!(out.is_popov(s));
    Ok(out)
}

/// The `s`-Popov form of a square nonsingular matrix.
pub fn nonsingular_popov(a: &PolyMatrix, s: &Shift) -> Result<PolyMatrix> {
    if a.rows() != a.cols() {
        return Err(Error::Dimension(format!(
            "nonsingular Popov form needs a square input, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let (w, _) = weak_popov_reduce(a, s, false)?;
    if (0..w.rows()).any(|i| w.row_is_zero(i)) {
        return Err(Error::Singular);
    }
    popov_normalize(&w, s)
}

/// Residual coefficient of `x^ord` in `(row * G)[col]`.
fn residual_coeff(row: &[Poly], g: &PolyMatrix, col: usize, ord: usize) -> u64 {
    let f = g.field();
    let mut acc = 0u64;
    for (l, p) in row.iter().enumerate() {
        let q = g.entry(l, col);
        if p.is_zero() || q.is_zero() {
            continue;
        }
        let lo = ord.saturating_sub(q.deg_usize().unwrap());
        let hi = ord.min(p.deg_usize().unwrap());
        for t in lo..=hi {
            acc = f.add_raw(acc, f.mul_raw(p.coeff_u64(t), q.coeff_u64(ord - t)));
        }
    }
    acc
}

/// A basis of the approximant module `{ p : p*G = 0 mod X^sigma }` in
/// `s`-ordered weak Popov form.
///
/// Iterative order-by-order elimination: for each column and each order
/// step, evaluate the residual coefficients, pick among the rows with
/// nonzero residual one of minimal shifted degree (largest pivot index on
/// ties), eliminate the other residuals against it, and multiply that row
/// by `x`. A final reduction plus row sort guarantees ordered weak Popov.
pub fn approximant_basis_owp(g: &PolyMatrix, sigma: &OrderTuple, s: &Shift) -> Result<PolyMatrix> {
    if sigma.len() != g.cols() {
        return Err(Error::Dimension(format!(
            "order tuple length {} does not match {} columns",
            sigma.len(),
            g.cols()
        )));
    }
    s.check_len(g.rows())?;
    let field = g.field();
    let m = g.rows();
    let mut rows = PolyMatrix::identity(field, m).to_row_vecs();

    for col in 0..g.cols() {
        for ord in 0..sigma.entries()[col] {
            let residuals: Vec<u64> = rows
                .iter()
                .map(|r| residual_coeff(r, g, col, ord))
                .collect();
            let active: Vec<usize> = (0..m).filter(|&i| residuals[i] != 0).collect();
            let Some(&first) = active.first() else {
                continue;
            };
            let mut pick = first;
            for &i in &active[1..] {
                let a = row_pivot(&rows[i], s);
                let b = row_pivot(&rows[pick], s);
                let key_a = (a.row_degree, std::cmp::Reverse(a.index));
                let key_b = (b.row_degree, std::cmp::Reverse(b.index));
                if key_a < key_b {
                    pick = i;
                }
            }
            let inv = field.inv_raw(residuals[pick]).expect("nonzero residual");
            let pivot_row = rows[pick].clone();
            for &i in &active {
                if i == pick {
                    continue;
                }
                let c = field.mul_raw(residuals[i], inv);
                for (dst, src) in rows[i].iter_mut().zip(&pivot_row) {
                    *dst = dst.sub_raw(&src.scale_raw(c));
                }
            }
            for p in rows[pick].iter_mut() {
                *p = p.scale_shift_raw(1, 1);
            }
        }
    }

    let basis = PolyMatrix::from_rows_with_cols(field, m, rows)?;
    let (w, _) = weak_popov_reduce(&basis, s, false)?;
    let profile = w.pivot_profile(s)?;
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| profile.rows[i].index.expect("basis rows are nonzero"));
    let out = w.select_rows(&order);
    debug_assert!(out.is_ordered_weak_popov(s));
    Ok(out)
}

/// A column reduced right kernel basis of `f`, one kernel vector per column,
/// with column degrees summing to at most `rank(f) * deg(f)`.
///
/// Computed as the exact-kernel rows of an ordered weak Popov approximant
/// basis of the transposed problem at uniform order `m*deg + deg + 1`, then
/// transposed back.
pub fn minimal_kernel_basis(f: &PolyMatrix) -> Result<PolyMatrix> {
    let (m, n) = (f.rows(), f.cols());
    if m > n {
        return Err(Error::UnsupportedShape);
    }
    let field = f.field();
    if f.is_zero() {
        return Ok(PolyMatrix::identity(field, n));
    }
    let d = f.degree().finite().expect("nonzero matrix") as usize;
    let order = m * d + d + 1;
    let transposed = f.transpose();
    let sigma = OrderTuple::uniform(m, order)?;
    let basis = approximant_basis_owp(&transposed, &sigma, &Shift::zero(n))?;
    let products = basis.mul(&transposed)?;
    let keep: Vec<usize> = (0..n).filter(|&i| products.row_is_zero(i)).collect();
    let kernel_rows = basis.select_rows(&keep);
    let out = kernel_rows.transpose();
    debug_assert!(f.mul(&out).map(|p| p.is_zero()).unwrap_or(false));
    Ok(out)
}

/// The exact quotient `Q` with `Q*A = B`, for `A` square and column reduced
/// and `B` a left multiple of `A`.
///
/// Works on column reversals: reversing `A` columnwise at its column degrees
/// puts the (invertible) column leading matrix in the constant term, so `Q`
/// comes out of one truncated inverse and one truncated product. The result
/// is always checked against `B` by an exact multiplication.
pub fn mat_quotient_left(b: &PolyMatrix, a: &PolyMatrix) -> Result<PolyMatrix> {
    if a.rows() != a.cols() {
        return Err(Error::Dimension("quotient divisor must be square".into()));
    }
    if b.cols() != a.rows() {
        return Err(Error::Dimension(format!(
            "quotient of {}x{} by {}x{}",
            b.rows(),
            b.cols(),
            a.rows(),
            a.cols()
        )));
    }
    let field = a.field();
    let n = a.cols();
    if b.is_zero() {
        return Ok(PolyMatrix::zero(field, b.rows(), n));
    }
    let e = b.degree().finite().expect("nonzero matrix") as usize;
    let cdeg_a: Vec<usize> = a
        .cdeg()
        .iter()
        .map(|d| d.finite().unwrap_or(0) as usize)
        .collect();
    for (j, bd) in b.cdeg().iter().enumerate() {
        if let Some(bd) = bd.finite() {
            if bd as usize > cdeg_a[j] + e {
                return Err(Error::NotLeftMultiple);
            }
        }
    }
    let mut a_rev = PolyMatrix::zero(field, n, n);
    let mut b_rev = PolyMatrix::zero(field, b.rows(), n);
    for (j, &dj) in cdeg_a.iter().enumerate() {
        for i in 0..n {
            a_rev.set(i, j, a.entry(i, j).shift_reverse(dj)?);
        }
        for i in 0..b.rows() {
            b_rev.set(i, j, b.entry(i, j).shift_reverse(e + dj)?);
        }
    }
    let a_rev_inv = a_rev.truncated_inverse(e + 1)?;
    let q_rev = b_rev.mul_trunc(&a_rev_inv, e + 1)?;
    let mut q = PolyMatrix::zero(field, b.rows(), n);
    for i in 0..b.rows() {
        for j in 0..n {
            q.set(i, j, q_rev.entry(i, j).shift_reverse(e)?);
        }
    }
    if q.mul(a)? != *b {
        return Err(Error::NotLeftMultiple);
    }
    Ok(q)
}

/// Rank over `F_p(x)` by fraction-free Bareiss elimination.
pub fn poly_rank(f: &PolyMatrix) -> usize {
    column_rank_profile(f).len()
}

/// The column rank profile: the lexicographically smallest set of linearly
/// independent columns of full cardinality, by left-to-right greedy Bareiss
/// elimination over `F_p[x]`.
pub fn column_rank_profile(f: &PolyMatrix) -> ColumnSet {
    let (m, n) = (f.rows(), f.cols());
    let mut w = f.to_row_vecs();
    let mut profile = Vec::new();
    let mut prev = Poly::one(f.field());
    let mut r = 0usize;
    for j in 0..n {
        if r == m {
            break;
        }
        let Some(pi) = (r..m).find(|&i| !w[i][j].is_zero()) else {
            continue;
        };
        w.swap(r, pi);
        for i in r + 1..m {
            for l in (j + 1..n).rev() {
                let num = w[r][j]
                    .mul_raw(&w[i][l])
                    .sub_raw(&w[i][j].mul_raw(&w[r][l]));
                let (q, rem) = num.div_rem_raw(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                let _ = rem;
                w[i][l] = q;
            }
            w[i][j] = Poly::zero(f.field());
        }
        prev = w[r][j].clone();
        profile.push(j);
        r += 1;
    }
    ColumnSet::new(profile).expect("profile indices are increasing by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gfp::PrimeField;
    use crate::poly::Degree;
    use crate::testkit;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

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
    fn weak_popov_reduce_leaves_weak_popov_untouched() {
        let m = example_matrix();
        let s = Shift::zero(3);
        let (w, trace) = weak_popov_reduce(&m, &s, false).unwrap();
        assert_eq!(w, m);
        assert_eq!(trace.steps, 0);
    }

    #[test]
    fn weak_popov_reduce_cancels_duplicate_rows() {
        let m = PolyMatrix::from_signed(
            f7(),
            &[vec![vec![0, 1], vec![1]], vec![vec![0, 1], vec![1]]],
        )
        .unwrap();
        let (w, trace) = weak_popov_reduce(&m, &Shift::zero(2), true).unwrap();
        assert_eq!(w.row(0), m.row(0));
        assert!(w.row_is_zero(1));
        let t = trace.transformation.unwrap();
        assert_eq!(t.mul(&m).unwrap(), w);
    }

    #[test]
    fn weak_popov_reduce_scrambled_example_recovers_pivots() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let s = Shift::zero(3);
        for _ in 0..20 {
            let u = testkit::random_unimodular(f7(), 2, 3, &mut rng);
            let scrambled = u.mul(&example_popov()).unwrap();
            let (w, trace) = weak_popov_reduce(&scrambled, &s, true).unwrap();
            assert!(w.is_weak_popov(&s));
            let prof = w.pivot_profile(&s).unwrap();
            let mut idx: Vec<usize> = prof.indices().into_iter().map(Option::unwrap).collect();
            idx.sort_unstable();
            assert_eq!(idx, vec![0, 1]);
            let t = trace.transformation.unwrap();
            assert_eq!(t.mul(&scrambled).unwrap(), w);
            assert!(testkit::row_space_equal(&w, &scrambled).unwrap());
        }
    }

    #[test]
    fn weak_popov_reduce_preserves_row_space_and_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for i in 0..1000 {
            let p = [2u64, 7, 97][i % 3];
            let field = PrimeField::new(p).unwrap();
            let m = testkit::random_matrix(field, 3, 4, 3, &mut rng);
            let s = Shift::new((0..4).map(|_| rng.random_range(-3..=3)).collect());
            let (w, _) = weak_popov_reduce(&m, &s, false).unwrap();
            assert!(testkit::row_space_equal(&w, &m).unwrap());
            let nonzero: Vec<usize> = (0..3).filter(|&i| !w.row_is_zero(i)).collect();
            assert!(w.select_rows(&nonzero).is_weak_popov(&s));
            // Sorted shifted row degrees never grow entrywise.
            let mut before = m.rdeg_shifted(&s).unwrap();
            let mut after = w.rdeg_shifted(&s).unwrap();
            before.sort();
            after.sort();
            for (a, b) in after.iter().zip(&before) {
                assert!(a <= b);
            }
        }
    }

    #[test]
    fn nonsingular_popov_is_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..100 {
            let n = rng.random_range(1..4usize);
            let s = Shift::new((0..n).map(|_| rng.random_range(-3..=3)).collect());
            let mut a = testkit::random_matrix(f7(), n, n, 2, &mut rng);
            while nonsingular_popov(&a, &s).is_err() {
                a = testkit::random_matrix(f7(), n, n, 2, &mut rng);
            }
            let u = testkit::random_unimodular(f7(), n, 3, &mut rng);
            let scrambled = u.mul(&a).unwrap();
            assert_eq!(
                nonsingular_popov(&scrambled, &s).unwrap(),
                nonsingular_popov(&a, &s).unwrap()
            );
        }
    }

    #[test]
    fn popov_normalize_running_example() {
        let s = Shift::zero(3);
        let p = popov_normalize(&example_matrix(), &s).unwrap();
        assert_eq!(p, example_popov());
        // Idempotence.
        assert_eq!(popov_normalize(&p, &s).unwrap(), p);
    }

    #[test]
    fn popov_normalize_scales_single_row() {
        let m = PolyMatrix::from_signed(f7(), &[vec![vec![2, 2], vec![0, 2], vec![2]]]).unwrap();
        let p = popov_normalize(&m, &Shift::zero(3)).unwrap();
        let expected =
            PolyMatrix::from_signed(f7(), &[vec![vec![1, 1], vec![0, 1], vec![1]]]).unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn popov_normalize_rejects_non_weak_popov() {
        let m = PolyMatrix::from_signed(f7(), &[vec![vec![0, 1]], vec![vec![1, 1]]]).unwrap();
        assert_eq!(
            popov_normalize(&m, &Shift::zero(1)),
            Err(Error::NotWeakPopov)
        );
    }

    #[test]
    fn nonsingular_popov_examples() {
        let id = PolyMatrix::identity(f7(), 3);
        for s in [Shift::zero(3), Shift::new(vec![2, -1, 5])] {
            assert_eq!(nonsingular_popov(&id, &s).unwrap(), id);
        }

        let a = PolyMatrix::from_signed(
            f7(),
            &[
                vec![vec![0, 0, 1], vec![1, 1]],
                vec![vec![2, 2], vec![0, 2]],
            ],
        )
        .unwrap();
        let p = nonsingular_popov(&a, &Shift::zero(2)).unwrap();
        assert_eq!(p, testkit::oracle_popov(&a, &Shift::zero(2)).unwrap());
        assert!(p.is_popov(&Shift::zero(2)));

        let diag = PolyMatrix::from_signed(
            f7(),
            &[vec![vec![0, 0, 1], vec![]], vec![vec![], vec![0, 0, 0, 1]]],
        )
        .unwrap();
        assert_eq!(nonsingular_popov(&diag, &Shift::zero(2)).unwrap(), diag);

        let singular = PolyMatrix::from_signed(
            f7(),
            &[vec![vec![0, 1], vec![1]], vec![vec![0, 2], vec![2]]],
        )
        .unwrap();
        assert_eq!(
            nonsingular_popov(&singular, &Shift::zero(2)),
            Err(Error::Singular)
        );
    }

    #[test]
    fn approximant_basis_hand_example() {
        // Approximants for the column (1,1)^T at order 2 over F_7.
        let g = PolyMatrix::from_signed(f7(), &[vec![vec![1]], vec![vec![1]]]).unwrap();
        let sigma = OrderTuple::new(vec![2]).unwrap();
        let b = approximant_basis_owp(&g, &sigma, &Shift::zero(2)).unwrap();
        let expected =
            PolyMatrix::from_signed(f7(), &[vec![vec![0, 0, 1], vec![]], vec![vec![1], vec![6]]])
                .unwrap();
        assert_eq!(b, expected);
        let degs: usize = b
            .pivot_profile(&Shift::zero(2))
            .unwrap()
            .degrees()
            .iter()
            .sum();
        assert_eq!(degs, 2);
    }

    #[test]
    fn approximant_basis_zero_matrix_gives_identity() {
        let g = PolyMatrix::zero(f7(), 3, 2);
        let sigma = OrderTuple::new(vec![4, 1]).unwrap();
        let b = approximant_basis_owp(&g, &sigma, &Shift::zero(3)).unwrap();
        assert_eq!(b, PolyMatrix::identity(f7(), 3));
    }

    #[test]
    fn approximant_basis_order_one_invertible_constant_term() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let n = rng.random_range(1..4usize);
            let mut g = testkit::random_matrix(f7(), n, n, 2, &mut rng);
            while !g.constant_term().is_invertible() {
                g = testkit::random_matrix(f7(), n, n, 2, &mut rng);
            }
            let sigma = OrderTuple::uniform(n, 1).unwrap();
            let b = approximant_basis_owp(&g, &sigma, &Shift::zero(n)).unwrap();
            let degsum: usize = b
                .pivot_profile(&Shift::zero(n))
                .unwrap()
                .degrees()
                .iter()
                .sum();
            assert_eq!(degsum, n);
            let prod = b.mul(&g).unwrap();
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(prod.entry(i, j).coeff_u64(0), 0);
                }
            }
        }
    }

    #[test]
    fn approximant_basis_congruence_and_owp_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let m = rng.random_range(1..4usize);
            let n = rng.random_range(1..3usize);
            let g = testkit::random_matrix(f7(), m, n, 2, &mut rng);
            let sigma = OrderTuple::new((0..n).map(|_| rng.random_range(1..4)).collect()).unwrap();
            let s = Shift::new((0..m).map(|_| rng.random_range(-2..=2)).collect());
            let b = approximant_basis_owp(&g, &sigma, &s).unwrap();
            assert!(b.is_ordered_weak_popov(&s));
            let prod = b.mul(&g).unwrap();
            for i in 0..m {
                for (j, &oj) in sigma.entries().iter().enumerate() {
                    for t in 0..oj {
                        assert_eq!(prod.entry(i, j).coeff_u64(t), 0, "congruence violated");
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_basis_hand_examples() {
        let f = PolyMatrix::from_signed(f7(), &[vec![vec![1], vec![0, 1]]]).unwrap();
        let n = minimal_kernel_basis(&f).unwrap();
        assert_eq!((n.rows(), n.cols()), (2, 1));
        assert!(f.mul(&n).unwrap().is_zero());
        assert_eq!(n.cdeg(), vec![Degree::Fin(1)]);

        let id = PolyMatrix::identity(f7(), 3);
        let n = minimal_kernel_basis(&id).unwrap();
        assert_eq!((n.rows(), n.cols()), (3, 0));

        let f = PolyMatrix::from_signed(
            f7(),
            &[
                vec![vec![0, 1], vec![1], vec![]],
                vec![vec![], vec![0, 1], vec![1]],
            ],
        )
        .unwrap();
        let n = minimal_kernel_basis(&f).unwrap();
        assert_eq!((n.rows(), n.cols()), (3, 1));
        assert!(f.mul(&n).unwrap().is_zero());
        // The kernel is spanned by (1, -x, x^2) up to a scalar.
        let c = n.entry(0, 0).clone();
        assert_eq!(c.degree(), Degree::Fin(0));
        let x = Poly::from_signed(f7(), &[0, 1]);
        assert_eq!(*n.entry(1, 0), c.mul(&x).unwrap().neg());
        assert_eq!(*n.entry(2, 0), c.mul(&x).unwrap().mul(&x).unwrap());

        let wide = PolyMatrix::zero(f7(), 3, 2);
        assert_eq!(minimal_kernel_basis(&wide), Err(Error::UnsupportedShape));
    }

    #[test]
    fn kernel_basis_contracts_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let m = rng.random_range(1..4usize);
            let n = rng.random_range(m..5usize);
            let d = rng.random_range(0..3usize);
            let f = testkit::random_matrix(f7(), m, n, d, &mut rng);
            let kernel = minimal_kernel_basis(&f).unwrap();
            assert!(f.mul(&kernel).unwrap().is_zero());
            let r = poly_rank(&f);
            assert_eq!(kernel.cols(), n - r);
            if kernel.cols() > 0 {
                let kt = kernel.transpose();
                assert!(kt.is_reduced(&Shift::zero(n)), "kernel not column reduced");
                let cdeg_sum: i64 = kernel
                    .cdeg()
                    .iter()
                    .map(|x| x.finite().expect("kernel columns nonzero"))
                    .sum();
                let dmax = f.degree().finite().unwrap_or(0);
                assert!(cdeg_sum <= r as i64 * dmax);
            }
        }
    }

    #[test]
    fn quotient_identity_and_hand_example() {
        let a =
            PolyMatrix::from_signed(f7(), &[vec![vec![0, 1], vec![1]], vec![vec![], vec![0, 1]]])
                .unwrap();
        assert_eq!(
            mat_quotient_left(&a, &a).unwrap(),
            PolyMatrix::identity(f7(), 2)
        );

        let b = PolyMatrix::from_signed(
            f7(),
            &[vec![vec![0, 1], vec![1, 0, 1]], vec![vec![], vec![0, 1]]],
        )
        .unwrap();
        let q = mat_quotient_left(&b, &a).unwrap();
        let expected =
            PolyMatrix::from_signed(f7(), &[vec![vec![1], vec![0, 1]], vec![vec![], vec![1]]])
                .unwrap();
        assert_eq!(q, expected);
    }

    #[test]
    fn quotient_recovers_random_unimodular_factor() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let n = rng.random_range(1..4usize);
            let u = testkit::random_unimodular(f7(), n, 3, &mut rng);
            // A column reduced divisor: the transpose of a weak Popov matrix.
            let a = loop {
                let candidate = testkit::random_matrix(f7(), n, n, 2, &mut rng);
                let (w, _) = weak_popov_reduce(&candidate, &Shift::zero(n), false).unwrap();
                if !(0..n).any(|i| w.row_is_zero(i)) {
                    break w.transpose();
                }
            };
            let b = u.mul(&a).unwrap();
            let q = mat_quotient_left(&b, &a).unwrap();
            assert_eq!(q, u);
        }
    }

    #[test]
    fn quotient_rejects_non_multiple() {
        let a =
            PolyMatrix::from_signed(f7(), &[vec![vec![0, 1], vec![1]], vec![vec![], vec![0, 1]]])
                .unwrap();
        let b =
            PolyMatrix::from_signed(f7(), &[vec![vec![1], vec![]], vec![vec![], vec![1]]]).unwrap();
        assert_eq!(mat_quotient_left(&b, &a), Err(Error::NotLeftMultiple));
    }

    #[test]
    fn column_rank_profile_examples() {
        let f = PolyMatrix::from_signed(f7(), &[vec![vec![], vec![1]], vec![vec![], vec![0, 1]]])
            .unwrap();
        assert_eq!(column_rank_profile(&f).indices(), &[1]);

        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let u = testkit::random_unimodular(f7(), 2, 2, &mut rng);
        let f = u.hstack(&PolyMatrix::identity(f7(), 2)).unwrap();
        assert_eq!(column_rank_profile(&f).indices(), &[0, 1]);

        assert!(column_rank_profile(&PolyMatrix::zero(f7(), 2, 3)).is_empty());
    }

    #[test]
    fn column_rank_profile_matches_evaluation_oracle() {
        let field = PrimeField::new(97).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..100 {
            let m = rng.random_range(1..4usize);
            let n = rng.random_range(1..5usize);
            let d = rng.random_range(0..3usize);
            let f = if rng.random_bool(0.5) {
                testkit::random_matrix(field, m, n, d, &mut rng)
            } else {
                let k = rng.random_range(1..=m);
                testkit::random_low_rank(field, m, n, k, d, &mut rng)
            };
            let got = column_rank_profile(&f);
            let oracle = testkit::rank_profile_by_evaluation(&f);
            assert_eq!(got, oracle, "profile mismatch for {f:?}");
        }
    }
}
