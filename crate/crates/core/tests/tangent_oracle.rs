use multisecant::arith::{FiniteField, PrimeField};
use multisecant::instances::random_valid_section;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn grassmann_rows_match_jacobian() {
    let mut tally = [0usize; 2];
    for &p in &[2u64, 3, 5, 7, 101] {
        let f = PrimeField::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        for _ in 0..300 {
            let (inst, norm) = random_valid_section(&f, &mut rng);
            let ours = inst.grassmann_verdict(&norm);
            let oracle = inst.oracle();
            assert_eq!(ours.smooth_of_expected_dim, oracle.smooth_of_expected_dim, "{:?}", inst);
            assert_eq!(ours.expected_dim, oracle.expected_dim);
            tally[ours.smooth_of_expected_dim as usize] += 1;
        }
    }
    // both outcomes must actually occur
    assert!(tally[0] > 20 && tally[1] > 20, "{tally:?}");
}

#[test]
fn star_matrix_matches_star_jacobian_and_ignores_b() {
    let mut tally = [0usize; 2];
    for &p in &[7u64, 11] {
        let f = PrimeField::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(p + 1);
        let mut done = 0;
        while done < 200 {
            let (inst, norm) = random_valid_section(&f, &mut rng);
            let free: Vec<u64> = f.elements().into_iter().filter(|b| !inst.points.contains(b)).collect();
            if free.len() < 2 {
                continue;
            }
            let (b1, b2) = (free[0], free[free.len() - 1]);
            let v1 = inst.star_verdict(&norm, &b1);
            let v2 = inst.star_verdict(&norm, &b2);
            assert_eq!(v1.smooth_of_expected_dim, v2.smooth_of_expected_dim);
            assert_eq!(v1.smooth_of_expected_dim, inst.star_oracle(&b1).smooth_of_expected_dim, "{:?}", inst);
            if v1.smooth_of_expected_dim {
                assert!(inst.grassmann_verdict(&norm).smooth_of_expected_dim);
            }
            tally[v1.smooth_of_expected_dim as usize] += 1;
            done += 1;
        }
        
    }
    assert!(tally[0] > 10 && tally[1] > 10, "{tally:?}");
}
