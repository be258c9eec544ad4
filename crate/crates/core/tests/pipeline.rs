//! Cross-module flows: function box -> compiled protocol -> transcript ->
//! reconciliation, noisy boxes under amplification, and the bounded
//! halting table driven end to end.

use nsbox::{
    amplify, bounded_halting_fbox, bounded_halting_function, chsh_game, classical_value, compile,
    game_value, interpret, make_fbox, make_noisy_fbox, reconcile, run_compiled, AmplificationPlan,
    BigRational, BitString, BooleanFunction, BoundedHaltingSpec, EventKind, NoisyBoxSpec, Side,
    TinyProgram,
};
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn chsh_hierarchy_is_strict() {
    let game = chsh_game();
    let (classical, _) = classical_value(&game).unwrap();
    assert_eq!(classical, rat(3, 4));

    let (quantum_box, _) =
        nsbox::box_from_quantum(&nsbox::QuantumStrategy::optimal_chsh(), 1e-9).unwrap();
    let quantum = game_value(&game, &quantum_box).unwrap();

    let pr = game_value(&game, &make_fbox(&BooleanFunction::and())).unwrap();
    assert_eq!(pr, rat(1, 1));

    assert!(classical < quantum);
    assert!(quantum < pr);
    let tsirelson = 0.8535533905932737;
    assert!((quantum.to_f64().unwrap() - tsirelson).abs() < 1e-9);
}

#[test]
fn compiled_protocols_reconcile_like_the_sampler() {
    let mut outer = StdRng::seed_from_u64(101);
    for &(l, m) in &[(1usize, 1usize), (2, 2), (3, 2)] {
        for _ in 0..20 {
            let f = BooleanFunction::from_fn(l, m, |_, _| outer.random::<u64>() & 1 == 1);
            let protocol = compile(&f, Side::Min);
            let mut rng = StdRng::seed_from_u64(7);
            for xi in 0..f.x_count() {
                for yi in 0..f.y_count() {
                    let x = BitString::from_index(xi, l);
                    let y = BitString::from_index(yi, m);
                    let (_, _, mut transcript) = run_compiled(&protocol, &x, &y, &mut rng).unwrap();
                    let reconciled = reconcile(&mut transcript).unwrap();
                    assert_eq!(reconciled, f.eval_index(xi, yi));
                    assert!(transcript.events().iter().all(|e| matches!(
                        e.kind,
                        EventKind::LocalCompute | EventKind::BoxCall | EventKind::Output
                    )));
                    let last_kinds: Vec<EventKind> = transcript
                        .events()
                        .iter()
                        .rev()
                        .take(2)
                        .map(|e| e.kind)
                        .collect();
                    assert_eq!(last_kinds, vec![EventKind::Output, EventKind::Output]);
                }
            }
        }
    }
}

#[test]
fn noisy_box_chsh_value_equals_p() {
    // The noisy AND box is the (p, 1-p) mixture of the PR box (CHSH value 1)
    // and the anti-PR box (CHSH value 0), so linearity gives value p.
    let p = rat(3, 4);
    let spec = NoisyBoxSpec::new(BooleanFunction::and(), p.clone()).unwrap();
    let noisy = make_noisy_fbox(&spec);
    let value = game_value(&chsh_game(), &noisy).unwrap();
    assert_eq!(value, p);
}

#[test]
fn amplification_beats_the_target_for_every_input_pair() {
    let f = BooleanFunction::from_fn(1, 2, |x, y| x.bit(0) ^ (y.bit(0) & y.bit(1)));
    let spec = NoisyBoxSpec::new(f.clone(), rat(4, 5)).unwrap();
    let plan = AmplificationPlan::for_target(spec, rat(1, 100)).unwrap();
    assert!(plan.achieved_correctness() >= rat(99, 100));

    let mut rng = StdRng::seed_from_u64(404);
    for xi in 0..f.x_count() {
        for yi in 0..f.y_count() {
            let x = BitString::from_index(xi, 1);
            let y = BitString::from_index(yi, 2);
            let trials = 400;
            let correct = (0..trials)
                .filter(|_| {
                    let (bit, _) = amplify(&plan, &x, &y, &mut rng).unwrap();
                    bit == f.eval_index(xi, yi)
                })
                .count();
            // 1% failure target: 400 trials should essentially all land.
            assert!(correct >= trials - 12, "pair ({xi},{yi}): {correct}/{trials}");
        }
    }
}

#[test]
fn bounded_halting_box_reconciles_to_the_interpreter() {
    let spec = BoundedHaltingSpec::new(4, 2, 100).unwrap();
    let f = bounded_halting_function(&spec);
    let bx = bounded_halting_fbox(&spec);
    assert!(bx.check_no_signalling().unwrap().holds);

    let protocol = compile(&f, Side::Bob);
    let mut rng = StdRng::seed_from_u64(2);
    for code in 0..16usize {
        let x = BitString::from_index(code, 4);
        let program = TinyProgram::decode(&x);
        for value in 0..4usize {
            let y = BitString::from_index(value, 2);
            let (_, _, mut transcript) = run_compiled(&protocol, &x, &y, &mut rng).unwrap();
            let reconciled = reconcile(&mut transcript).unwrap();
            assert_eq!(
                reconciled,
                interpret(&program, &y, spec.step_bound()).halted(),
                "program {program} on input {y}"
            );
        }
    }
}
