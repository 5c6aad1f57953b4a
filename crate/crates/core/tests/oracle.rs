mod common;

use common::{naive_optimum, random_instance};
use haan::{evaluate, solve, Algorithm, Objective, SolverConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn check_all_solvers(inst: &haan::Instance, objective: Objective) {
    let (envy, happy) = naive_optimum(inst);
    let cfg = SolverConfig::with_objective(objective);
    for algo in Algorithm::CONCRETE {
        let r = match solve(inst, algo, &cfg) {
            Ok(r) => r,
            Err(haan::Error::WrongSolver { .. }) => continue,
            Err(e) => panic!("{} failed on {:?}: {e}", algo.label(), inst),
        };
        let report = evaluate(inst, &r.allocation).unwrap();
        assert_eq!((report.n_envious, report.n_happy), (r.min_envy, r.happiness));
        assert_eq!(r.min_envy, envy, "{} envy on {:?}", algo.label(), inst);
        if objective == Objective::MinEnvyThenMaxHappy {
            assert_eq!(r.happiness, happy, "{} happiness on {:?}", algo.label(), inst);
        }
    }
}

#[test]
fn random_small_instances_agree_with_naive_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let inst = random_instance(&mut rng, 5, 2, 3);
        check_all_solvers(&inst, Objective::MinEnvy);
        check_all_solvers(&inst, Objective::MinEnvyThenMaxHappy);
    }
}
