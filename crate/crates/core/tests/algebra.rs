use nctwobody::algebra::{center_of_mass_block, commutator_table, total_momentum_brackets, NBodyRep, TwoBodyRep};
use nctwobody::scalar::{exact_decimal, Exact};
use nctwobody::{com_separation_check, kinetic_coefficients, kinetic_energy_bound_check, EpsilonMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MASSES: [f64; 5] = [0.25, 0.9, 1.0, 3.7, 1836.15];
const EPSILONS: [f64; 5] = [0.0, 0.05, 0.3, 0.61, 0.97];

#[test]
fn commutator_table_over_grid() {
    for &m1 in &MASSES {
        for &m2 in &MASSES {
            for &eps in &EPSILONS {
                let rep = TwoBodyRep::new(m1, m2, eps).unwrap();
                let table = commutator_table(&rep).unwrap();
                let m = m1 + m2;
                let want = [
                    1.0 - m2 * eps / m,
                    1.0 - m1 * eps / m,
                    m2 * eps / m,
                    m1 * eps / m,
                    0.0,
                    0.0,
                ];
                for (got, want) in table.as_array().iter().zip(want) {
                    assert!(
                        (got - want).abs() <= 1e-13,
                        "m1={m1} m2={m2} eps={eps}: {got} vs {want}"
                    );
                }
                assert_eq!(table.x1_x2, 0.0);
                assert_eq!(table.p1_p2, 0.0);
                for total in total_momentum_brackets(&rep).unwrap() {
                    assert!((total - 1.0).abs() <= 2.0 * f64::EPSILON);
                }
            }
        }
    }
}

#[test]
fn exact_representation_closes_exactly() {
    let one = exact_decimal("1").unwrap();
    for (m1, m2, eps) in [("1", "2", "0.3"), ("0.511", "938.27", "0.999"), ("7", "7", "0")] {
        let rep = TwoBodyRep::new(
            exact_decimal(m1).unwrap(),
            exact_decimal(m2).unwrap(),
            exact_decimal(eps).unwrap(),
        )
        .unwrap();
        for total in total_momentum_brackets(&rep).unwrap() {
            assert_eq!(total, one);
        }
        let table = commutator_table(&rep).unwrap();
        let swapped = commutator_table(&rep.swapped()).unwrap();
        assert_eq!(table.x1_p2, swapped.x2_p1);
        assert_eq!(table.x1_p1, swapped.x2_p2);
    }
}

#[test]
fn n_body_diagonal_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 2..=4 {
        let masses: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..5.0)).collect();
        let eps = random_eps(&mut rng, n);
        let rep = NBodyRep::new(masses.clone(), eps.clone()).unwrap();
        let brackets = rep.position_momentum_brackets().unwrap();
        let m: f64 = masses.iter().sum();
        for (j, row) in brackets.iter().enumerate() {
            let want = 1.0 - (0..n).map(|k| masses[k] / m * eps.get(j, k)).sum::<f64>();
            assert!((row[j] - want).abs() < 1e-13);
            let row: f64 = row.iter().sum();
            assert!((row - 1.0).abs() < 1e-13);
        }
        rep.like_operators_commute().unwrap();
    }
}

fn random_eps(rng: &mut ChaCha8Rng, n: usize) -> EpsilonMatrix<f64> {
    let mut entries = vec![0.0; n * n];
    for j in 0..n {
        for k in j + 1..n {
            let e = rng.random_range(0.0..0.99);
            entries[j * n + k] = e;
            entries[k * n + j] = e;
        }
    }
    EpsilonMatrix::new(n, entries).unwrap()
}

#[test]
fn random_com_separation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..20 {
        let n = 2 + case % 3;
        let masses: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..10.0)).collect();
        let eps = random_eps(&mut rng, n);
        let sep = com_separation_check(&masses, &eps).unwrap();
        let m: f64 = masses.iter().sum();
        assert!(sep.decoupled, "case {case}: {sep:?}");
        assert!(sep.max_coupling <= 1e-12);
        assert!((sep.com_coefficient - 1.0 / m).abs() <= 1e-12 * (1.0 / m).max(1.0));
    }
}

#[test]
fn exact_com_block_for_rational_masses() {
    let ex = |s: &str| exact_decimal(s).unwrap();
    let masses = vec![ex("1"), ex("2"), ex("3")];
    let eps = EpsilonMatrix::uniform(3, ex("0.1")).unwrap();
    let (com, coupling) = center_of_mass_block(&masses, &eps).unwrap();
    assert_eq!(com, ex("1") / ex("6"));
    assert!(coupling.iter().all(|c| *c == Exact::from_integer(0.into())));
}

#[test]
fn two_body_reduced_mass_form() {
    // relative coordinate r1 - r2 carries A1/m1 + A2/m2 - 2 B12/M
    let (m1, m2, eps): (f64, f64, f64) = (1.3, 4.1, 0.45);
    let c = kinetic_coefficients(&[m1, m2], &EpsilonMatrix::uniform(2, eps).unwrap()).unwrap();
    let coefficient = c.a[0] / m1 + c.a[1] / m2 - 2.0 * c.b[0][1] / (m1 + m2);
    let reduced = m1 * m2 / (m1 + m2);
    assert!((coefficient - (1.0 - eps) * (1.0 - eps) / reduced).abs() < 1e-13);
}

#[test]
fn noncommutativity_lowers_kinetic_energy() {
    for n in 2..=5 {
        for &eps in &[0.0, 0.1, 0.5, 0.9] {
            assert!(kinetic_energy_bound_check(&vec![1.7; n], &EpsilonMatrix::uniform(n, eps).unwrap()).unwrap());
        }
    }
}
