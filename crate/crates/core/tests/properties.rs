use proptest::prelude::*;

use winv_core::classic::{drazin, moore_penrose, one23_family, w_drazin};
use winv_core::exact;
use winv_core::gen::{cn_construct, cn_construct_exact, gaussian_matrix, random_parameter, random_spec, stream_rng};
use winv_core::io::{format_matrix, parse_matrix_str};
use winv_core::matrix::numerical_rank;
use winv_core::oracle::{check_membership, InverseSet};
use winv_core::w123k::{w1231k_family, w1231k_particular, w1241k_family, w1241k_particular};
use winv_core::{ExactMatrix, Matrix, Tolerance};

fn tol() -> Tolerance {
    Tolerance::default()
}

/// Random `rows × cols` matrix of rank at most `rank`.
fn low_rank(rows: usize, cols: usize, rank: usize, seed: u64) -> Matrix {
    let mut rng = stream_rng(seed, 0);
    let l = gaussian_matrix(rows, rank, &mut rng);
    let r = gaussian_matrix(rank, cols, &mut rng);
    &l * &r
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_invariant_under_adjoint(rows in 1usize..7, cols in 1usize..7, rank in 0usize..7, seed: u64) {
        let rank = rank.min(rows).min(cols);
        let m = low_rank(rows, cols, rank, seed);
        prop_assert_eq!(numerical_rank(&m, &tol()), rank);
        prop_assert_eq!(numerical_rank(&m.conj_transpose(), &tol()), rank);
    }

    #[test]
    fn drazin_commutes_and_is_outer_inverse(n in 1usize..7, rank in 0usize..7, seed: u64) {
        let m = low_rank(n, n, rank.min(n), seed);
        let x = drazin(&m, &tol()).unwrap();
        let scale = m.fro_norm() * x.fro_norm() + 1.0;
        prop_assert!((&(&m * &x) - &(&x * &m)).fro_norm() <= 1e-8 * scale);
        prop_assert!((&(&x * &m) * &x).rel_diff(&x) <= 1e-8);
    }

    #[test]
    fn moore_penrose_satisfies_all_four(rows in 1usize..7, cols in 1usize..7, rank in 0usize..7, seed: u64) {
        let m = low_rank(rows, cols, rank.min(rows).min(cols), seed);
        let x = moore_penrose(&m, &tol());
        let rep = check_membership(&m, &Matrix::zeros(0, 0), &x, None, InverseSet::MoorePenrose, &tol()).unwrap();
        prop_assert!(rep.pass, "{:?}", rep);
    }

    /// Of `Y ∈ M{1}`, `Y ∈ M{2}` and `r(Y) = r(M)`, any two imply the third.
    #[test]
    fn any_two_give_three(rows in 2usize..6, cols in 2usize..6, seed: u64, idx in 0u64..8) {
        let rank = 1 + (seed as usize % (rows.min(cols) - 1));
        let m = low_rank(rows, cols, rank, seed);
        let t = tol();
        let fam = one23_family(&m, &t);
        let y = fam.member(&random_parameter(fam.param_shape(), seed, idx)).unwrap();
        let no_w = Matrix::zeros(0, 0);
        let holds = |y: &Matrix, eq: &str| {
            let rep = check_membership(&m, &no_w, y, None, InverseSet::Classic123, &t).unwrap();
            rep.verdicts[eq]
        };
        prop_assert!(holds(&y, "1") && holds(&y, "2"));
        prop_assert_eq!(numerical_rank(&y, &t), rank);

        // 2Y keeps the rank but breaks both {1} and {2}.
        let scaled = y.scale(2.0);
        prop_assert_eq!(numerical_rank(&scaled, &t), rank);
        prop_assert!(!holds(&scaled, "1") && !holds(&scaled, "2"));

        // Adding a rank-one term outside the family raises the rank: {1} survives, {2} does not.
        let (u, v) = (low_rank(cols, 1, 1, seed ^ 1), low_rank(1, rows, 1, seed ^ 2));
        let pm = &Matrix::identity(cols) - &(&moore_penrose(&m, &t) * &m);
        let ql = &Matrix::identity(rows) - &(&m * &moore_penrose(&m, &t));
        let bumped = &y + &(&(&pm * &u) * &(&v * &ql));
        if numerical_rank(&bumped, &t) > rank {
            prop_assert!(holds(&bumped, "1") && !holds(&bumped, "2"));
        }

        // V(UMV)⁻¹U is a {2}-inverse of rank s < r, so {1} must fail.
        let s = rank - 1;
        let (u, v) = (low_rank(s, rows, s, seed ^ 3), low_rank(cols, s, s, seed ^ 4));
        let outer = &(&v * &(&(&u * &m) * &v).inverse().unwrap()) * &u;
        prop_assert!(holds(&outer, "2") && !holds(&outer, "1"));
    }

    #[test]
    fn generated_pairs_have_the_requested_structure(seed in 0u64..5000, k in 0usize..4) {
        let spec = random_spec(seed, k, 8, 5).unwrap();
        let (a, w) = cn_construct(&spec).unwrap();
        prop_assert_eq!(a.shape(), (spec.m, spec.n));
        prop_assert_eq!(w.shape(), (spec.n, spec.m));
        prop_assert_eq!(numerical_rank(&a, &tol()), spec.r);
        prop_assert_eq!(winv_core::decomp::weighted_index(&a, &w, &tol()).unwrap(), spec.k);
        let (a2, w2) = cn_construct(&spec).unwrap();
        prop_assert!(a == a2 && w == w2);
    }

    #[test]
    fn family_members_are_members(seed in 0u64..2000, k in 1usize..4, idx: u64) {
        let spec = random_spec(seed, k, 7, 4).unwrap();
        let (a, w) = cn_construct(&spec).unwrap();
        let t = tol();
        for (fam, set) in [
            (w1231k_family(&a, &w, None, &t).unwrap(), InverseSet::W1231k),
            (w1241k_family(&a, &w, None, &t).unwrap(), InverseSet::W124k1),
        ] {
            let x = fam.member(&random_parameter(fam.param_shape(), seed, idx)).unwrap();
            let rep = check_membership(&a, &w, &x, None, set, &t).unwrap();
            prop_assert!(rep.pass, "{:?}", rep);
        }
    }

    #[test]
    fn weighted_drazin_matches_exact(seed in 0u64..500, k in 0usize..3) {
        let spec = random_spec(seed, k, 5, 3).unwrap().integers();
        let (ea, ew) = cn_construct_exact(&spec).unwrap();
        let (a, w) = (ea.to_matrix(), ew.to_matrix());
        let t = tol();
        let exact_d = exact::w_drazin(&ea, &ew).to_matrix();
        prop_assert!(w_drazin(&a, &w, &t).unwrap().rel_diff(&exact_d) <= 1e-8);
        let x = exact::w1231k_particular(&ea, &ew).to_matrix();
        prop_assert!(w1231k_particular(&a, &w, None, &t).unwrap().rel_diff(&x) <= 1e-8);
        let x = exact::w1241k_particular(&ea, &ew).to_matrix();
        prop_assert!(w1241k_particular(&a, &w, None, &t).unwrap().rel_diff(&x) <= 1e-8);
    }

    #[test]
    fn matrix_market_round_trip(rows in 0usize..5, cols in 0usize..5, seed: u64) {
        let m = gaussian_matrix(rows, cols, &mut stream_rng(seed, 3)).scale(1e3);
        let back = parse_matrix_str(&format_matrix(&m), std::path::Path::new("p.mtx")).unwrap();
        prop_assert!(back == m);
    }

    #[test]
    fn float_to_exact_is_lossless(rows in 1usize..4, cols in 1usize..4, seed: u64) {
        let m = gaussian_matrix(rows, cols, &mut stream_rng(seed, 5));
        prop_assert!(ExactMatrix::from_matrix(&m).to_matrix() == m);
    }
}
