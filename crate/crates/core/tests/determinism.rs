//! Results must not depend on the worker count.

use chargemagic::harness::{
    records_to_bytes, run_experiment, with_threads, ExperimentConfig, ExperimentKind, OutputFormat,
};
use chargemagic::magic::stabilizer_purity_fast;
use chargemagic::sampler::haar_state;

#[test]
fn kernel_is_bit_identical_across_pools() {
    let s = haar_state(10, 99).unwrap();
    let reference = with_threads(1, || stabilizer_purity_fast(&s, 2.0).unwrap()).unwrap();
    for n in [2, 3, 5] {
        let v = with_threads(n, || stabilizer_purity_fast(&s, 2.0).unwrap()).unwrap();
        assert_eq!(v.to_bits(), reference.to_bits(), "{n} threads");
    }
}

#[test]
fn experiments_are_byte_identical_across_pools() {
    let mut configs = vec![];
    let mut c = ExperimentConfig::new(ExperimentKind::Mean);
    c.n_qubits = 6;
    c.charges = vec![0, 2];
    c.samples = 64;
    configs.push(c);
    let mut c = ExperimentConfig::new(ExperimentKind::CsykSweep);
    // dim-70 blocks are large enough for blocked dense kernels
    c.n_qubits = 8;
    c.charges = vec![0, -6];
    c.realizations = 4;
    configs.push(c);
    let mut c = ExperimentConfig::new(ExperimentKind::MixedCharge);
    c.n_qubits = 4;
    c.thetas = vec![0.2, 1.0];
    c.samples = 20;
    configs.push(c);
    for cfg in &configs {
        let bytes = |n: usize| {
            let out = with_threads(n, || run_experiment(cfg).unwrap()).unwrap();
            (
                records_to_bytes(out.records(), OutputFormat::Csv).unwrap(),
                records_to_bytes(out.records(), OutputFormat::Json).unwrap(),
            )
        };
        let one = bytes(1);
        assert!(one.0.len() > 100);
        assert_eq!(one, bytes(4), "{}", cfg.kind);
        assert_eq!(one, bytes(1), "{}", cfg.kind);
    }
}
