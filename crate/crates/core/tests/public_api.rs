use pnn::dpnn::{map_binary, Dpnn};
use pnn::identifier::{IdentifierNet, PatternId};
use pnn::patterns::{apply_binary_noise, apply_qnary_noise, random_binary_patterns, random_qnary_patterns, NoiseSpec};
use pnn::{Memory, NetworkKind, Pattern, SeededRng, Session, UpdateOrder};

fn memory(m: usize, n: usize, q: u32, kind: NetworkKind, seed: u64) -> Memory {
    let mut rng = SeededRng::new(seed, 0).rng();
    Memory::build(random_qnary_patterns(m, n, q, kind, &mut rng).unwrap(), kind, q).unwrap()
}

#[test]
fn stored_patterns_settle_in_one_sweep() {
    for kind in [NetworkKind::Pnn2, NetworkKind::Pnn3] {
        let mem = memory(20, 120, 8, kind, 1);
        for p in mem.patterns() {
            let r = mem.retrieve(p, 10, UpdateOrder::Sequential).unwrap();
            assert_eq!(&r.final_state, p);
            assert!(r.converged);
            assert_eq!((r.sweeps_used, r.updates_changed), (1, 0));
        }
    }
}

#[test]
fn noisy_inputs_are_corrected() {
    let mem = memory(100, 200, 16, NetworkKind::Pnn2, 2);
    let mut rng = SeededRng::new(2, 1).rng();
    let noise = NoiseSpec::new(0.1, 0.5).unwrap();
    for p in mem.patterns().iter().take(20) {
        let x = apply_qnary_noise(p, noise, 16, &mut rng);
        assert_ne!(&x, p);
        let order = UpdateOrder::RandomPermutation { seed: 5 };
        assert_eq!(&mem.retrieve(&x, 20, order).unwrap().final_state, p);
    }
}

#[test]
fn negated_input_gives_negated_output() {
    let mem = memory(60, 100, 4, NetworkKind::Pnn2, 3);
    let mut rng = SeededRng::new(3, 1).rng();
    let x = random_qnary_patterns(1, 100, 4, NetworkKind::Pnn2, &mut rng).unwrap().remove(0);
    let a = mem.retrieve(&x, 30, UpdateOrder::Sequential).unwrap();
    let b = mem.retrieve(&x.negated(), 30, UpdateOrder::Sequential).unwrap();
    assert_eq!(b.final_state, a.final_state.negated());
    assert_eq!(a.sweeps_used, b.sweeps_used);
}

#[test]
fn session_sweeps_match_retrieve() {
    let mem = memory(40, 80, 3, NetworkKind::Pnn3, 4);
    let mut rng = SeededRng::new(4, 1).rng();
    let x = random_qnary_patterns(1, 80, 3, NetworkKind::Pnn3, &mut rng).unwrap().remove(0);
    let want = mem.retrieve(&x, 50, UpdateOrder::Sequential).unwrap();

    let mut session = Session::new(&mem, x).unwrap();
    let order: Vec<usize> = (0..80).collect();
    while session.sweep(&order, &mut |_, _| {}) > 0 {}
    assert_eq!(session.state(), &want.final_state);
    assert_eq!(session.energy(), mem.energy(&want.final_state).unwrap());
    assert!(mem.is_fixed_point(session.state()).unwrap());
}

#[test]
fn mismatched_inputs_are_rejected() {
    let mem = memory(5, 30, 4, NetworkKind::Pnn2, 5);
    let short = Pattern::from_levels(&[1; 29]).unwrap();
    assert!(mem.retrieve(&short, 5, UpdateOrder::Sequential).is_err());
    let high = Pattern::from_levels(&[5; 30]).unwrap();
    assert!(mem.energy(&high).is_err());
}

#[test]
fn dpnn_corrects_sign_noise() {
    let mut rng = SeededRng::new(6, 0).rng();
    let ys = random_binary_patterns(40, 300, &mut rng);
    let net = Dpnn::build(&ys, 2).unwrap();
    for y in ys.iter().take(10) {
        let noisy = apply_binary_noise(y, 0.1, &mut rng);
        assert_eq!(&net.retrieve(&noisy, 20).unwrap(), y);
    }
    assert_eq!(net.memory().neurons(), 100);
    assert_eq!(net.memory().patterns()[0], map_binary(&ys[0], 2).unwrap());
}

#[test]
fn identifier_names_noisy_patterns() {
    let mut rng = SeededRng::new(7, 0).rng();
    let pats = random_qnary_patterns(60, 100, 16, NetworkKind::Pnn3, &mut rng).unwrap();
    let net = IdentifierNet::build(pats, 16).unwrap();
    assert_eq!(net.digits(), 2);
    let noise = NoiseSpec::new(0.0, 0.3).unwrap();
    for mu in 0..60 {
        let x = apply_qnary_noise(&net.patterns()[mu], noise, 16, &mut rng);
        assert_eq!(net.identify(&x).unwrap(), PatternId(mu));
    }
}
