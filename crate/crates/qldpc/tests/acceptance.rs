//! The eight verification gates for this crate. Each test prints one
//! `ACCEPTANCE <n> <name>: PASS|FAIL` line (run with `--nocapture` to see
//! them as they complete). The Monte Carlo gates are sized for a single
//! core; seeds are fixed so reruns are reproducible.

use qldpc::channel::{init_llrs, init_probs};
use qldpc::decoder::{
    cbp_linear_decode, reference_vector_bp, DecodeOutcome, DecoderConfig, LlrBpDecoder,
};
use qldpc::galois::{FieldElement, FieldTables};
use qldpc::harness::{
    bdd_curve, convert_rate, decode_all_syndromes, run_sweep, BddSpec, DecoderBackend, StopRule,
    SweepConfig,
};
use qldpc::stabilizer::{
    bicycle_construct, binary_to_check_matrix, css_extend, BinaryMatrix, CheckMatrix,
};

use num_bigint::BigUint;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

struct Gate {
    label: &'static str,
    passed: bool,
}

impl Gate {
    fn new(label: &'static str) -> Gate {
        Gate {
            label,
            passed: false,
        }
    }

    fn pass(mut self) {
        self.passed = true;
    }
}

impl Drop for Gate {
    fn drop(&mut self) {
        println!(
            "ACCEPTANCE {}: {}",
            self.label,
            if self.passed { "PASS" } else { "FAIL" }
        );
    }
}

/// Scaled stack built from the first `rows` cyclic shifts of (1011100).
fn steane_stack(tables: &FieldTables, rows: usize) -> CheckMatrix {
    let full = BinaryMatrix::circulant(7, &[1, 3, 4, 5]).unwrap();
    let deleted: Vec<usize> = (rows + 1..=7).collect();
    let base = full.delete_rows(&deleted).unwrap();
    css_extend(
        tables,
        &binary_to_check_matrix(tables.l(), &base).unwrap(),
    )
    .unwrap()
}

const BICYCLE_GEN: [usize; 8] = [1, 3, 9, 59, 68, 69, 107, 112];
const BICYCLE_DELETE: [usize; 16] = [
    1, 2, 12, 59, 60, 68, 70, 73, 74, 76, 91, 92, 100, 115, 117, 120,
];

fn bicycle_code(l: usize) -> CheckMatrix {
    let tables = FieldTables::new(l).unwrap();
    let base = bicycle_construct(256, 16, &BICYCLE_GEN, &BICYCLE_DELETE).unwrap();
    css_extend(&tables, &binary_to_check_matrix(l, &base).unwrap()).unwrap()
}

fn random_element(rng: &mut ChaCha8Rng, q2: usize) -> FieldElement {
    FieldElement(rng.random_range(0..q2) as u8)
}

fn random_nonzero(rng: &mut ChaCha8Rng, q2: usize) -> FieldElement {
    FieldElement(rng.random_range(1..q2) as u8)
}

/// Random sparse matrix with per-row weights in 2..=w_max and no duplicate
/// columns.
fn random_code(
    rng: &mut ChaCha8Rng,
    tables: &FieldTables,
    n: usize,
    m: usize,
    w_max: usize,
) -> CheckMatrix {
    let rows = (0..m)
        .map(|_| {
            let w = rng.random_range(2..=w_max.min(n));
            let mut row: Vec<(usize, FieldElement)> = rand::seq::index::sample(rng, n, w)
                .iter()
                .map(|col| (col, random_nonzero(rng, tables.q2())))
                .collect();
            row.sort_by_key(|&(col, _)| col);
            row
        })
        .collect();
    CheckMatrix::new(tables.l(), n, rows).unwrap()
}

fn random_error(rng: &mut ChaCha8Rng, q2: usize, n: usize) -> Vec<FieldElement> {
    (0..n)
        .map(|_| {
            if rng.random_bool(0.5) {
                random_nonzero(rng, q2)
            } else {
                FieldElement::ZERO
            }
        })
        .collect()
}

#[test]
fn gate_1_field_algebra_exhaustives() {
    let gate = Gate::new("1 field-algebra-exhaustives");
    for l in 1..=3 {
        let t = FieldTables::new(l).unwrap();
        let q2 = t.q2();
        // the symplectic form equals its trace-of-Hermitian-products route,
        // on every scalar pair
        for u in 0..q2 {
            for v in 0..q2 {
                let a = FieldElement(u as u8);
                let b = FieldElement(v as u8);
                assert_eq!(t.scalar_commutation(a, b), t.commutation_via_trace(a, b));
            }
        }
        // and on random length-32 vector pairs
        let mut rng = ChaCha8Rng::seed_from_u64(100 + l as u64);
        for _ in 0..10_000 {
            let u: Vec<FieldElement> = (0..32).map(|_| random_element(&mut rng, q2)).collect();
            let v: Vec<FieldElement> = (0..32).map(|_| random_element(&mut rng, q2)).collect();
            assert_eq!(
                t.symplectic_ip(&u, &v).unwrap(),
                t.symplectic_ip_via_trace(&u, &v).unwrap()
            );
        }
        // the subfield trace kernel is an additive subgroup of size q/2
        let kernel = t.trace_kernel();
        assert_eq!(kernel.len(), t.q() / 2);
        assert!(kernel.contains(&0));
        for &a in &kernel {
            for &b in &kernel {
                assert_eq!(t.subfield_trace(a ^ b), 0);
            }
        }
        // every nonzero eta splits the field into two classes of size q^2/2
        for e in 1..q2 {
            let eta = FieldElement(e as u8);
            let com = t.commuting_class(eta);
            let anti = t.anticommuting_class(eta);
            assert_eq!(com.len(), q2 / 2);
            assert_eq!(anti.len(), q2 / 2);
            let mut union: Vec<u8> = com.iter().chain(anti).map(|x| x.0).collect();
            union.sort_unstable();
            assert_eq!(union, (0..q2 as u8).collect::<Vec<u8>>());
        }
    }
    // worked small-field facts: the GF(4) -> GF(2) trace values, and the
    // commuting class of omega for q = 2
    let t1 = FieldTables::new(1).unwrap();
    assert_eq!(t1.subfield_trace(0), 0);
    assert_eq!(t1.subfield_trace(1), 1);
    let om = t1.omega();
    assert_eq!(t1.commuting_class(om), &[FieldElement::ZERO, om]);
    let t2 = FieldTables::new(2).unwrap();
    let traces: Vec<u8> = (0..4).map(|v| t2.subfield_trace(v)).collect();
    assert_eq!(traces, vec![0, 0, 1, 1]);
    gate.pass();
}

/// Exact per-symbol posterior log-ratios by enumerating every error vector.
fn exact_posterior_llrs(
    tables: &FieldTables,
    matrix: &CheckMatrix,
    z: &[u8],
    prior: &[f64],
) -> Vec<Vec<f64>> {
    let n = matrix.num_symbols();
    let q2 = tables.q2();
    let mut mass = vec![vec![0.0f64; q2]; n];
    let mut v = vec![FieldElement::ZERO; n];
    loop {
        if matrix.syndrome(tables, &v).unwrap() == z {
            let p: f64 = v.iter().map(|&x| prior[x.index()]).product();
            for (i, &x) in v.iter().enumerate() {
                mass[i][x.index()] += p;
            }
        }
        let mut carry = true;
        for x in v.iter_mut() {
            let next = x.index() + 1;
            if next == q2 {
                *x = FieldElement::ZERO;
            } else {
                *x = FieldElement(next as u8);
                carry = false;
                break;
            }
        }
        if carry {
            break;
        }
    }
    (0..n)
        .map(|i| {
            (0..q2 - 1)
                .map(|k| {
                    let xi = tables.pow(tables.omega(), k as i64);
                    (mass[i][0] / mass[i][xi.index()]).ln()
                })
                .collect()
        })
        .collect()
}

/// Random cycle-free Tanner graph: each new check joins one connected
/// variable to at least one fresh variable.
fn random_tree_code(rng: &mut ChaCha8Rng, tables: &FieldTables, n_max: usize) -> CheckMatrix {
    let n = rng.random_range(2..=n_max);
    let mut fresh: Vec<usize> = (1..n).collect();
    fresh.shuffle(rng);
    let mut connected = vec![0usize];
    let mut rows = Vec::new();
    while !fresh.is_empty() {
        let anchor = connected[rng.random_range(0..connected.len())];
        let take = rng.random_range(1..=fresh.len().min(3));
        let mut row = vec![(anchor, random_nonzero(rng, tables.q2()))];
        for _ in 0..take {
            let v = fresh.pop().unwrap();
            row.push((v, random_nonzero(rng, tables.q2())));
            connected.push(v);
        }
        row.sort_by_key(|&(col, _)| col);
        rows.push(row);
    }
    CheckMatrix::new(tables.l(), n, rows).unwrap()
}

#[test]
fn gate_2_update_rule_equivalence() {
    let gate = Gate::new("2 update-rule-equivalence");
    let t = FieldTables::new(1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    // one iteration of the scalar-message decoder reproduces the
    // brute-force check-node marginalization
    for _ in 0..200 {
        let n = rng.random_range(3..=9);
        let m = rng.random_range(1..=4);
        let h = random_code(&mut rng, &t, n, m, 8);
        let e = random_error(&mut rng, 4, n);
        let z = h.syndrome(&t, &e).unwrap();
        let eps0: f64 = rng.random_range(0.02..0.3);
        let llrs = init_llrs(&t, eps0, n).unwrap();
        let probs = init_probs(&t, eps0, n).unwrap();
        let cfg = DecoderConfig {
            t_max: 1,
            ..DecoderConfig::default()
        };
        let a = LlrBpDecoder::new(&t, &h, cfg)
            .unwrap()
            .run(&z, &llrs, false, false)
            .unwrap();
        let b = reference_vector_bp(&t, &h, &z, &probs, 1, false, false).unwrap();
        for (ga, gb) in a.gamma.iter().zip(&b.gamma) {
            for (x, y) in ga.iter().zip(gb) {
                assert!((x - y).abs() <= 1e-9, "single-iteration gap {x} vs {y}");
            }
        }
    }
    // on cycle-free codes the converged beliefs are the exact posteriors
    for _ in 0..50 {
        let h = random_tree_code(&mut rng, &t, 6);
        let n = h.num_symbols();
        let e = random_error(&mut rng, 4, n);
        let z = h.syndrome(&t, &e).unwrap();
        let eps0: f64 = rng.random_range(0.05..0.3);
        let llrs = init_llrs(&t, eps0, n).unwrap();
        let prior: Vec<f64> = init_probs(&t, eps0, 1).unwrap()[0].clone();
        let cfg = DecoderConfig {
            t_max: 2 * (n + h.num_checks()) + 2,
            ..DecoderConfig::default()
        };
        let out = LlrBpDecoder::new(&t, &h, cfg)
            .unwrap()
            .run(&z, &llrs, false, false)
            .unwrap();
        let exact = exact_posterior_llrs(&t, &h, &z, &prior);
        for (ga, gb) in out.gamma.iter().zip(&exact) {
            for (x, y) in ga.iter().zip(gb) {
                assert!((x - y).abs() <= 1e-9, "posterior gap {x} vs {y}");
            }
        }
    }
    gate.pass();
}

#[test]
fn gate_3_oracle_equivalence() {
    let gate = Gate::new("3 oracle-equivalence");
    let t = FieldTables::new(1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(300);
    for _ in 0..50 {
        let n = rng.random_range(4..=15);
        let m = rng.random_range(2..=6);
        let h = random_code(&mut rng, &t, n, m, 7);
        let e = random_error(&mut rng, 4, n);
        let z = h.syndrome(&t, &e).unwrap();
        let eps0: f64 = rng.random_range(0.03..0.3);
        let llrs = init_llrs(&t, eps0, n).unwrap();
        let probs = init_probs(&t, eps0, n).unwrap();
        let cfg = DecoderConfig {
            t_max: 10,
            ..DecoderConfig::default()
        };
        let a = LlrBpDecoder::new(&t, &h, cfg)
            .unwrap()
            .run(&z, &llrs, false, true)
            .unwrap();
        let b = reference_vector_bp(&t, &h, &z, &probs, 10, false, true).unwrap();
        let ta = a.trace.as_ref().unwrap();
        let tb = b.trace.as_ref().unwrap();
        assert_eq!(ta.len(), 10);
        assert_eq!(tb.len(), 10);
        for (sa, sb) in ta.iter().zip(tb) {
            assert_eq!(sa.hard_decision, sb.hard_decision, "iteration {}", sa.iteration);
            assert_eq!(sa.syndrome_matched, sb.syndrome_matched);
        }
    }
    gate.pass();
}

fn weight(v: &[FieldElement]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

#[test]
fn gate_4_seven_qubit_case_study() {
    let gate = Gate::new("4 seven-qubit-case-study");
    let t = FieldTables::new(1).unwrap();
    let om = t.omega();
    let om2 = t.mul(om, om);
    let h7 = steane_stack(&t, 7);
    let h3 = steane_stack(&t, 3);
    let eps0 = 0.1;
    let priors = init_llrs(&t, eps0, 7).unwrap();
    let cfg = DecoderConfig {
        t_max: 10,
        ..DecoderConfig::default()
    };

    // the scalar decoder corrects (1,0,0,0,0,0,omega) on the 7-row stack
    let mut e_trap = vec![FieldElement::ZERO; 7];
    e_trap[0] = FieldElement::ONE;
    e_trap[6] = om;
    let z = h7.syndrome(&t, &e_trap).unwrap();
    let out = LlrBpDecoder::new(&t, &h7, cfg.clone())
        .unwrap()
        .decode(&z, &priors)
        .unwrap();
    assert!(out.converged);
    assert_eq!(out.e_hat, e_trap);

    // the linear-domain decoder fails on the same error, passing through a
    // large-weight state on the way
    let cbp: DecodeOutcome =
        cbp_linear_decode(&t, &h7, &z, &priors, 10, false, true).unwrap();
    assert!(!cbp.converged);
    let steps = cbp.trace.as_ref().unwrap();
    assert!(steps.iter().all(|s| !s.syndrome_matched));
    let max_weight = steps.iter().map(|s| weight(&s.hard_decision)).max().unwrap();
    assert!(max_weight >= 6, "largest visited weight {max_weight}");

    // on the 3-row stack, a single omega^2 error yields the same
    // large-weight degenerate output from both decoders
    let mut e_deg = vec![FieldElement::ZERO; 7];
    e_deg[4] = om2;
    let z3 = h3.syndrome(&t, &e_deg).unwrap();
    let expected = vec![
        FieldElement::ZERO,
        FieldElement::ZERO,
        om2,
        om2,
        om2,
        om2,
        FieldElement::ZERO,
    ];
    let a = LlrBpDecoder::new(&t, &h3, cfg.clone())
        .unwrap()
        .decode(&z3, &priors)
        .unwrap();
    assert!(a.converged);
    assert_eq!(a.e_hat, expected);
    let b = cbp_linear_decode(&t, &h3, &z3, &priors, 10, true, false).unwrap();
    assert!(b.converged);
    assert_eq!(b.e_hat, expected);

    // exhaustive audit of the 7-row stack
    let audit = decode_all_syndromes(&t, &h7, &cfg, DecoderBackend::Llr, eps0, 2).unwrap();
    assert_eq!(audit.per_weight[1].total, 21);
    assert_eq!(audit.per_weight[1].corrected, 21);
    assert_eq!(audit.per_weight[2].total, 189);
    assert_eq!(audit.per_weight[2].corrected, 42);
    assert!((audit.per_weight[2].gamma() - 0.2222).abs() < 1e-3);
    let cbp_audit = decode_all_syndromes(&t, &h7, &cfg, DecoderBackend::Cbp, eps0, 2).unwrap();
    assert!(cbp_audit.per_weight[2].corrected < audit.per_weight[2].corrected);
    println!(
        "gate 4: weight-two corrected {}/189 (scalar) vs {}/189 (linear-domain)",
        audit.per_weight[2].corrected, cbp_audit.per_weight[2].corrected
    );
    gate.pass();
}

#[test]
fn gate_5_bicycle_error_floor_separation() {
    let gate = Gate::new("5 bicycle-error-floor-separation");
    let t = FieldTables::new(1).unwrap();
    let h = bicycle_code(1);
    let plain = DecoderConfig {
        t_max: 12,
        ..DecoderConfig::default()
    };
    let offset = DecoderConfig {
        t_max: 12,
        beta: Some(2.75),
        epsilon_0: Some(5e-3),
        ..DecoderConfig::default()
    };
    let sweep = |stop: StopRule| SweepConfig {
        seed: 20_260_815,
        backend: DecoderBackend::Llr,
        stop,
        batch_size: 10_000,
        trial_offset: 0,
    };
    let plain_at = run_sweep(
        &t,
        &h,
        &[0.01],
        &plain,
        &sweep(StopRule {
            min_logical_errors: 100,
            min_trials: 20_000,
            max_trials: 200_000,
        }),
    )
    .unwrap();
    let plain_half = run_sweep(
        &t,
        &h,
        &[0.005],
        &plain,
        &sweep(StopRule {
            min_logical_errors: 50,
            min_trials: 20_000,
            max_trials: 200_000,
        }),
    )
    .unwrap();
    let offset_at = run_sweep(
        &t,
        &h,
        &[0.01],
        &offset,
        &sweep(StopRule {
            min_logical_errors: 100,
            min_trials: 20_000,
            max_trials: 600_000,
        }),
    )
    .unwrap();
    let pa = &plain_at.points[0];
    let ph = &plain_half.points[0];
    let po = &offset_at.points[0];
    let (lo_a, hi_a) = pa.ler_interval();
    let (lo_o, hi_o) = po.ler_interval();
    println!(
        "gate 5: plain {:.3e} [{:.3e},{:.3e}] ({} errs/{}), half-rate plain {:.3e} ({} errs/{}), \
         offset {:.3e} [{:.3e},{:.3e}] ({} errs/{})",
        pa.ler(), lo_a, hi_a, pa.error_count(), pa.trials,
        ph.ler(), ph.error_count(), ph.trials,
        po.ler(), lo_o, hi_o, po.error_count(), po.trials,
    );
    assert!(pa.error_count() >= 100);
    // floor: halving the channel rate shrinks the plain LER by less than 8x
    assert!(ph.ler() * 8.0 > pa.ler());
    // offset run is at least an order of magnitude below, with separated
    // 95% intervals
    assert!(pa.ler() >= 10.0 * po.ler());
    assert!(lo_a > hi_o);
    gate.pass();
}

#[test]
fn gate_6_nonbinary_extension() {
    let gate = Gate::new("6 nonbinary-extension");
    let t = FieldTables::new(2).unwrap();
    let h = bicycle_code(2);
    let plain = DecoderConfig {
        t_max: 6,
        ..DecoderConfig::default()
    };
    let offset = DecoderConfig {
        t_max: 6,
        beta: Some(2.75),
        epsilon_0: Some(5e-3),
        ..DecoderConfig::default()
    };
    let sweep = |stop: StopRule| SweepConfig {
        seed: 20_260_816,
        backend: DecoderBackend::Llr,
        stop,
        batch_size: 2_000,
        trial_offset: 0,
    };
    let plain_run = run_sweep(
        &t,
        &h,
        &[0.02],
        &plain,
        &sweep(StopRule {
            min_logical_errors: 100,
            min_trials: 2_000,
            max_trials: 20_000,
        }),
    )
    .unwrap();
    let offset_run = run_sweep(
        &t,
        &h,
        &[0.02],
        &offset,
        &sweep(StopRule {
            min_logical_errors: 100,
            min_trials: 20_000,
            max_trials: 20_000,
        }),
    )
    .unwrap();
    let pp = &plain_run.points[0];
    let po = &offset_run.points[0];
    let (lo_p, hi_p) = pp.ler_interval();
    let (lo_o, hi_o) = po.ler_interval();
    println!(
        "gate 6: plain {:.3e} [{:.3e},{:.3e}] ({} errs/{}), offset {:.3e} [{:.3e},{:.3e}] ({} errs/{})",
        pp.ler(), lo_p, hi_p, pp.error_count(), pp.trials,
        po.ler(), lo_o, hi_o, po.error_count(), po.trials,
    );
    assert!(po.ler() < pp.ler());
    assert!(lo_p > hi_o, "intervals overlap");
    gate.pass();
}

#[test]
fn gate_7_quantization_study() {
    let gate = Gate::new("7 quantization-study");
    let t = FieldTables::new(1).unwrap();
    let h7 = steane_stack(&t, 7);
    let h3 = steane_stack(&t, 3);
    let base = DecoderConfig {
        t_max: 10,
        beta: Some(0.5),
        ..DecoderConfig::default()
    };
    let with_k = |k: u32| DecoderConfig {
        bit_width: Some(k),
        ..base.clone()
    };
    // audit: six bits reproduce the unquantized capability exactly
    let full = decode_all_syndromes(&t, &h7, &base, DecoderBackend::Llr, 0.1, 2).unwrap();
    let k6 = decode_all_syndromes(&t, &h7, &with_k(6), DecoderBackend::Llr, 0.1, 2).unwrap();
    for (a, b) in full.per_weight.iter().zip(&k6.per_weight) {
        assert_eq!(a.corrected, b.corrected, "weight {}", a.weight);
    }
    // sweep on the irregular 3-row stack of the same code
    let sweep = SweepConfig {
        seed: 20_260_817,
        backend: DecoderBackend::Llr,
        stop: StopRule {
            min_logical_errors: 0,
            min_trials: 20_000,
            max_trials: 20_000,
        },
        batch_size: 5_000,
        trial_offset: 0,
    };
    let run = |cfg: &DecoderConfig| {
        let r = run_sweep(&t, &h3, &[0.1], cfg, &sweep).unwrap();
        r.points[0].clone()
    };
    let p_full = run(&base);
    let p_k6 = run(&with_k(6));
    let p_k3 = run(&with_k(3));
    let (lo_full, hi_full) = p_full.ler_interval();
    let (lo_k6, hi_k6) = p_k6.ler_interval();
    let (lo_k3, hi_k3) = p_k3.ler_interval();
    println!(
        "gate 7: unquantized {:.4} [{:.4},{:.4}], k=6 {:.4} [{:.4},{:.4}], k=3 {:.4} [{:.4},{:.4}]",
        p_full.ler(), lo_full, hi_full, p_k6.ler(), lo_k6, hi_k6, p_k3.ler(), lo_k3, hi_k3,
    );
    // six bits: overlapping intervals with the unquantized run
    assert!(lo_k6 <= hi_full && lo_full <= hi_k6);
    // three bits: measurably worse, intervals separated
    assert!(lo_k3 > hi_full);
    gate.pass();
}

#[test]
fn gate_8_formula_anchors() {
    let gate = Gate::new("8 formula-anchors");
    // radius zero reduces to the no-coverage closed form
    let spec = BddSpec::new(129, 0, vec![]).unwrap();
    let eps = [0.0, 0.001, 0.03, 0.2];
    let curve = bdd_curve(&spec, &eps);
    for (i, &e) in eps.iter().enumerate() {
        assert!((curve[i] - (1.0 - (1.0 - e).powi(129))).abs() < 1e-12);
    }
    // rate conversion endpoint
    assert!((convert_rate(2.0 / 3.0).unwrap() - 1.0).abs() < 1e-15);
    // initialization closed forms: ln 147 at (q=2, 0.02) and ln 2985 at
    // (q=4, 5e-3), the latter printing as 8.0014
    let t1 = FieldTables::new(1).unwrap();
    let l1 = init_llrs(&t1, 0.02, 2).unwrap();
    for row in &l1 {
        for &x in row {
            assert!((x - 147f64.ln()).abs() < 1e-12);
        }
    }
    let t2 = FieldTables::new(2).unwrap();
    let l2 = init_llrs(&t2, 5e-3, 1).unwrap();
    for &x in &l2[0] {
        assert!((x - 2985f64.ln()).abs() < 1e-12);
        assert!((x - 8.0014).abs() < 1e-4);
    }
    // partial-coverage curve against an arbitrary-precision rational oracle
    let spec = BddSpec::new(129, 2, vec![1.0, 1.0, 0.9873]).unwrap();
    let v = bdd_curve(&spec, &[0.03])[0];
    let big = |x: u32| BigUint::from(x);
    let p97 = |k: u32| big(97).pow(k);
    let num = big(10_000) * p97(129)
        + big(10_000) * big(129) * big(3) * p97(128)
        + big(9_873) * big(129 * 128 / 2) * big(9) * p97(127);
    let den = big(10_000) * big(100).pow(129);
    let scale = big(10).pow(20);
    let covered = u128::try_from(&((num * &scale) / den)).unwrap() as f64 / 1e20;
    let expected = 1.0 - covered;
    assert!(
        ((v - expected) / expected).abs() < 1e-12,
        "{v} vs {expected}"
    );
    gate.pass();
}
