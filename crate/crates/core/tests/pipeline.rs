use convlab_core::lsys::{code_from_realization, markov_column_distance};
use convlab_core::realize::{check_fm1, complete_fm, partial_realization, verify_realization, MarkovSeq};
use convlab_core::search::{search, OracleMode, SearchConfig};
use convlab_core::toeplitz::{certify_mdp, certify_smds};
use convlab_core::{Budget, CertOptions, CodeParams, Field, Mat, Realization};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PARAMS: [(usize, usize, usize); 8] =
    [(3, 1, 1), (4, 2, 1), (4, 1, 2), (2, 1, 2), (3, 2, 2), (3, 1, 2), (5, 2, 2), (4, 2, 3)];

fn field(i: usize) -> Field {
    [(2, 2), (2, 3), (3, 1), (5, 1), (7, 1), (3, 2)].map(|(p, m)| Field::new(p, m).unwrap())[i].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn completed_prefix_is_smds_with_degree_delta(pi in 0..PARAMS.len(), seed in any::<u64>()) {
        let (n, k, d) = PARAMS[pi];
        let params = CodeParams::new(n, k, d).unwrap();
        prop_assume!(params.r > 0);
        let f = Field::new(2, 8).unwrap();
        let opts = CertOptions::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let prefix: Vec<Mat> = (0..=params.l)
            .map(|_| Mat::from_vec(&f, n - k, k, (0..(n - k) * k).map(|_| f.random(&mut rng)).collect()).unwrap())
            .collect();
        prop_assume!(certify_mdp(&prefix, &params, &opts).unwrap().holds);
        let seq = match complete_fm(&prefix, &params, &mut rng, 64, &opts) {
            Err(convlab_core::Error::FieldTooSmall { .. }) => return Err(TestCaseError::reject("field too small")),
            other => other.unwrap(),
        };
        prop_assert!(certify_smds(seq.blocks(), &params, &opts).unwrap().holds);
        prop_assert_eq!(seq.minimal_degree(), d);
        prop_assert!(check_fm1(&seq, &params).is_empty());
        prop_assert_eq!(&seq.blocks()[..=params.l], &prefix[..]);
    }

    #[test]
    fn partial_realization_inverts_markov(pi in 0..PARAMS.len(), fi in 0..6usize, seed in any::<u64>()) {
        let (n, k, d) = PARAMS[pi];
        let params = CodeParams::new(n, k, d).unwrap();
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = Realization::random_minimal(&f, &params, &mut rng, 500).unwrap();
        // a degree-d system is determined by its first 2d+1 parameters
        let count = params.m.max(2 * d) + 1;
        let seq = MarkovSeq::new(r.markov(count)).unwrap();
        prop_assert_eq!(seq.minimal_degree(), d);
        let r2 = partial_realization(&seq, d).unwrap();
        prop_assert!(verify_realization(&r2, &seq));
        prop_assert_eq!(r2.markov(count + 4), r.markov(count + 4));
        prop_assert!(r2.code().unwrap().same_code(&r.code().unwrap()).unwrap());
    }

    #[test]
    fn minimal_degree_is_realized_and_bounded(fi in 0..6usize, m in 1..5usize, seed in any::<u64>()) {
        let f = field(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, k) = (2, 1);
        let blocks: Vec<Mat> = (0..=m)
            .map(|_| Mat::from_vec(&f, p, k, (0..p * k).map(|_| f.random(&mut rng)).collect()).unwrap())
            .collect();
        let seq = MarkovSeq::new(blocks).unwrap();
        let deg = seq.minimal_degree();
        prop_assert!(deg <= m * p && deg <= m * k);
        let r = partial_realization(&seq, deg).unwrap();
        prop_assert!(verify_realization(&r, &seq));
        prop_assert!(partial_realization(&seq, deg + 1).is_err());
    }
}

#[test]
fn searched_codes_have_matching_distance_routes() {
    let budget = Budget::default();
    for (n, k, d) in PARAMS {
        let params = CodeParams::new(n, k, d).unwrap();
        let mut config = SearchConfig::new(params);
        config.oracle = OracleMode::Off;
        let Ok(res) = search(&config) else { continue };
        let code = code_from_realization(&res.realization).unwrap();
        for j in 0..=params.m {
            if code.column_distance_cost(j) > 1 << 20 {
                break;
            }
            let via_code = code.column_distance(j, &budget).unwrap();
            let via_state = res.realization.column_distance(j, &budget).unwrap();
            let via_markov = markov_column_distance(res.seq.blocks(), j, &budget).unwrap();
            assert_eq!((via_code, via_state), (via_markov, via_markov), "{params:?} j={j}");
            assert_eq!(via_markov, params.col_bound(j).min(params.singleton), "{params:?} j={j}");
        }
    }
}

#[test]
fn same_seed_same_result() {
    let mut config = SearchConfig::new(CodeParams::new(4, 1, 2).unwrap());
    config.seed = 77;
    let a = search(&config).unwrap();
    let b = search(&config).unwrap();
    assert_eq!(a.seq, b.seq);
    assert_eq!(a.realization, b.realization);
    assert_eq!(a.code.generator(), b.code.generator());
    assert_eq!((a.trials, a.mdp, a.smds), (b.trials, b.mdp, b.smds));
}
