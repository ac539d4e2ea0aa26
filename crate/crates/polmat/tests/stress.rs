//! Randomized cross-validation on instances larger than the unit tests use:
//! the deterministic pipeline against the independent oracle, plus Hermite
//! form sanity, over mixed shapes, ranks, degrees and shifts.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use polmat::forms::{self, Strategy};
use polmat::testkit;
use polmat::{PrimeField, Shift};

#[test]
fn pipeline_matches_oracle_on_large_mixed_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(31337);
    for _ in 0..1000 {
        let p = [2u64, 3, 7, 97, 65537][rng.random_range(0..5)];
        let field = PrimeField::new(p).unwrap();
        let m = rng.random_range(1..=5usize);
        let n = rng.random_range(m..=15usize);
        let d = rng.random_range(0..=6usize);
        let f = if rng.random_bool(0.25) && m > 1 {
            testkit::random_low_rank(field, m, n, rng.random_range(1..m), d, &mut rng)
        } else {
            testkit::random_matrix(field, m, n, d, &mut rng)
        };
        let s = if rng.random_bool(0.5) {
            Shift::zero(n)
        } else {
            testkit::random_shift(n, 8, &mut rng)
        };
        let res = forms::popov_form(&f, &s, Strategy::Auto).unwrap();
        let oracle = testkit::oracle_popov(&f, &s).unwrap();
        assert_eq!(
            res.popov, oracle,
            "pipeline/oracle mismatch for p={p} m={m} n={n} d={d} s={s:?}"
        );

        let hermite = forms::hermite_form(&f).unwrap();
        assert!(hermite.popov.is_hermite());
        assert!(
            testkit::row_space_equal(&hermite.popov, &f).unwrap(),
            "Hermite form changed the row space"
        );
    }
}
