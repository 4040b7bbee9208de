//! Acceptance criteria, one test per criterion. Each writes a single
//! `[PASS]`/`[FAIL]` line straight to stderr, so it shows without `--nocapture`.

mod common;

use std::collections::HashSet;
use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;
use std::time::Instant;

use common::*;
use num_complex::Complex64;
use rand::Rng;
use qglue::analysis::{average_purity, is_k_uniform, lu_correctable, max_uniformity, uniformity_scan, DEFAULT_TOL};
use qglue::builders::{
    asymmetric_w3, bell, ghz, m4, max_entangled_pair, parity_state, ring_graph_state, w, BellState, Parity,
};
use qglue::recursion::{chain_direct, chain_via_recursion, compose, power, recursion_from_gate, OutcomePolicy};
use qglue::{glue, glue_star, glue_star_star, Builtin, Operator, PureState, TwoQuditGate};

fn report(id: u32, what: &str, ok: bool, detail: String) {
    let tag = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr().lock(), "[{tag}] criterion {id:>2}: {what} ({detail})");
}

fn v(b: Builtin) -> TwoQuditGate {
    TwoQuditGate::builtin(b)
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn ops_all(n: usize, f: impl Fn(usize) -> Operator) -> Vec<Operator> {
    (0..n).map(f).collect()
}

/// Chain of `pairs` Bell pairs: the initial φ⁺ plus `pairs − 1` gluing steps,
/// each forced to outcome 0.
fn chain_of_pairs(gate: &TwoQuditGate, pairs: usize) -> PureState {
    chain_direct(gate, pairs - 1, &OutcomePolicy::zero()).unwrap().state
}

#[test]
fn criterion_01_swapping_branch_table() {
    let mut r = rng(101);
    let v1 = v(Builtin::V1);
    let mut worst_table = 0.0f64;
    let mut worst_compact = 0.0f64;
    let mut pairs = 0;
    while pairs < 100 {
        let m = 1 + r.random_range(0..4usize);
        let n = 1 + r.random_range(0..4usize);
        if m + n < 3 {
            continue;
        }
        let phi = random_state(&mut r, 2, m);
        let psi = random_state(&mut r, 2, n);
        let x = r.random_range(0..m);
        let y = r.random_range(0..n);
        let fp = coeffs_oracle(&phi, x);
        let fq = coeffs_oracle(&psi, y);
        let pp = |i: usize, j: usize| kron(&fp[i], &fq[j]);
        let combo = |a: Vec<Complex64>, b: Vec<Complex64>, sign: f64| -> Vec<Complex64> {
            a.iter().zip(&b).map(|(p, q)| (p + q * sign) * FRAC_1_SQRT_2).collect()
        };
        let table = [
            ((0, 0), combo(pp(0, 0), pp(1, 1), 1.0)),
            ((0, 1), combo(pp(0, 1), pp(1, 0), 1.0)),
            ((1, 0), combo(pp(0, 1), pp(1, 0), -1.0)),
            ((1, 1), combo(pp(0, 0), pp(1, 1), -1.0)),
        ];
        for ((a, b), expect) in &table {
            // compact form: (1/√2) Σ_j (−1)^{aj} |φ_j⟩|ψ_{j+a+b}⟩
            let mut compact = vec![c(0.0); expect.len()];
            for j in 0..2 {
                let sign = if (a * j) % 2 == 1 { -1.0 } else { 1.0 };
                for (slot, val) in compact.iter_mut().zip(pp(j, (j + a + b) % 2)) {
                    *slot += val * sign * FRAC_1_SQRT_2;
                }
            }
            worst_compact = worst_compact.max(max_diff(&compact, expect));

            let got = glue_star_star(&phi, x, &psi, y, &v1, Some((*a, *b)), 0);
            let branch_norm = expect.iter().map(|z| z.norm_sqr()).sum::<f64>();
            match got {
                Ok(g) => {
                    let unnorm: Vec<Complex64> =
                        g.state.amplitudes().iter().map(|z| z * g.probability.sqrt()).collect();
                    worst_table = worst_table.max(max_diff(&unnorm, expect));
                }
                Err(_) => assert!(branch_norm < 1e-12),
            }
        }
        pairs += 1;
    }
    let ok = worst_table < 1e-12 && worst_compact < 1e-12;
    report(
        1,
        "swapping reproduces the four-branch table and compact formula",
        ok,
        format!("max table dev {worst_table:.2e}, compact dev {worst_compact:.2e}"),
    );
    assert!(ok);
}

#[test]
fn criterion_02_ghz_identity() {
    let v1 = v(Builtin::V1);
    let mut worst = 1.0f64;
    for n in 3..=5 {
        for m in 3..=5 {
            let target = ghz(n + m - 2).unwrap();
            for a in 0..2 {
                for b in 0..2 {
                    let out = glue_star_star(&ghz(n).unwrap(), n - 1, &ghz(m).unwrap(), 0, &v1, Some((a, b)), 0).unwrap();
                    // X on every ȳ party when a⊕b = 1, Z on party 0 when a = 1
                    let corr = ops_all(n + m - 2, |p| {
                        let mut op = Operator::identity(2);
                        if p >= n - 1 && (a ^ b) == 1 {
                            op = Operator::pauli_x();
                        }
                        if p == 0 && a == 1 {
                            op = Operator::pauli_z().matmul(&op).unwrap();
                        }
                        op
                    });
                    let fixed = out.state.apply_product(&corr).unwrap();
                    worst = worst.min(phase_fidelity(&fixed, &target));
                    if (a, b) == (0, 0) {
                        assert!(phase_fidelity(&out.state, &target) >= 1.0 - 1e-10);
                    }
                }
            }
        }
    }
    let ok = worst >= 1.0 - 1e-10;
    report(2, "GHZ_n ⋄⋆⋆ GHZ_m = GHZ_{n+m-2}, all outcomes after Pauli fix", ok, format!("min fidelity {worst:.15}"));
    assert!(ok);
}

#[test]
fn criterion_03_w_identity() {
    let v1 = v(Builtin::V1);
    let mut worst_p = 0.0f64;
    let mut worst_f = 1.0f64;
    let mut p33 = 0.0;
    for n in 3..=5 {
        for m in 3..=5 {
            let wn = w(n).unwrap();
            let wm = w(m).unwrap();
            let target = w(n + m - 2).unwrap();
            let plus = glue_star_star(&wn, n - 1, &wm, 0, &v1, Some((0, 1)), 0).unwrap();
            let minus = glue_star_star(&wn, n - 1, &wm, 0, &v1, Some((1, 0)), 0).unwrap();
            let p = plus.probability + minus.probability;
            let expect = (m + n - 2) as f64 / (m * n) as f64;
            worst_p = worst_p.max((p - expect).abs());
            if n == 3 && m == 3 {
                p33 = p;
            }
            // ψ⁻ branch: relative sign between the halves, fixed by Z on all x̄ parties
            let z_left = ops_all(n + m - 2, |q| if q < n - 1 { Operator::pauli_z() } else { Operator::identity(2) });
            let id = ops_all(n + m - 2, |_| Operator::identity(2));
            worst_f = worst_f.min(phase_fidelity(&plus.state.apply_product(&id).unwrap(), &target));
            worst_f = worst_f.min(phase_fidelity(&minus.state.apply_product(&z_left).unwrap(), &target));
            assert!(lu_correctable(&[plus, minus], &[id, z_left]).unwrap());
        }
    }
    let ok = worst_p < 1e-10 && worst_f >= 1.0 - 1e-10 && (p33 - 4.0 / 9.0).abs() < 1e-10;
    report(
        3,
        "W_n ⋄⋆⋆ W_m: ψ± probability (m+n-2)/(mn), corrected branches = W_{m+n-2}",
        ok,
        format!("max prob dev {worst_p:.2e}, P(3,3)={p33:.12}, min fidelity {worst_f:.15}"),
    );
    assert!(ok);
}

#[test]
fn criterion_04_recursion_closed_form_and_parity_chain() {
    let g1 = recursion_from_gate(&v(Builtin::V1), 0).unwrap();
    let mut worst_closed = 0.0f64;
    let mut failing_n = Vec::new();
    for n in 1..=8 {
        let p = power(&g1, n).unwrap();
        let scale = 1.0 / 2f64.powi(n as i32 - 1).sqrt();
        let e = parity_state(n, Parity::Even).unwrap();
        let o = parity_state(n, Parity::Odd).unwrap();
        let closed = [&e, &o, &o, &e];
        let mut dev = 0.0f64;
        for (idx, want) in closed.iter().enumerate() {
            let want: Vec<Complex64> = want.amplitudes().iter().map(|z| z * scale).collect();
            dev = dev.max(max_diff(p.entry(idx / 2, idx % 2), &want));
        }
        if dev >= 1e-12 {
            failing_n.push(n);
        }
        worst_closed = worst_closed.max(dev);
    }
    let closed_ok = worst_closed < 1e-12;
    report(
        4,
        "𝒢₁ⁿ = 2^{-(n-1)/2} [[e_n,o_n],[o_n,e_n]] entrywise, n ≤ 8",
        closed_ok,
        format!("max dev {worst_closed:.3e}; failing n = {failing_n:?}"),
    );

    let mut worst_chain = 1.0f64;
    for pairs in 1..=8 {
        let s = chain_of_pairs(&v(Builtin::V1), pairs);
        worst_chain = worst_chain.min(phase_fidelity(&s, &parity_state(pairs + 1, Parity::Even).unwrap()));
    }
    let chain_ok = worst_chain >= 1.0 - 1e-10;
    report(
        4,
        "V1 chain of n Bell pairs = even-parity (n+1)-qubit state, n ≤ 8",
        chain_ok,
        format!("min fidelity {worst_chain:.15}"),
    );
    assert!(chain_ok, "parity chain");
    assert!(closed_ok, "closed form deviates by {worst_closed:e} for n in {failing_n:?}");
}

#[test]
fn criterion_05_ghz_chain() {
    let mut worst = 1.0f64;
    for pairs in 1..=8 {
        let s = chain_of_pairs(&v(Builtin::V3), pairs);
        worst = worst.min(phase_fidelity(&s, &ghz(pairs + 1).unwrap()));
    }
    let ok = worst >= 1.0 - 1e-10;
    report(5, "V3 chain of n Bell pairs = GHZ_{n+1}, n ≤ 8", ok, format!("min fidelity {worst:.15}"));
    assert!(ok);
}

#[test]
fn criterion_06_asymmetric_w() {
    let v4 = v(Builtin::V4);
    let phi = bell(BellState::PhiPlus);
    let aw = asymmetric_w3();
    let zero = glue_star(&phi, 1, &max_entangled_pair(2).unwrap(), 0, &v4, Some(0), 0).unwrap();
    let one = glue_star(&phi, 1, &max_entangled_pair(2).unwrap(), 0, &v4, Some(1), 0).unwrap();
    let flipped = zero.state.apply_local(&Operator::pauli_x(), &[2]).unwrap();
    let dev0 = max_diff(flipped.amplitudes(), aw.amplitudes());
    let xxz = vec![Operator::pauli_x(), Operator::pauli_x(), Operator::pauli_z()];
    let fixed = one.state.apply_product(&xxz).unwrap();
    let dev1 = max_diff(fixed.amplitudes(), aw.amplitudes());
    let id_id_x = vec![Operator::identity(2), Operator::identity(2), Operator::pauli_x()];
    assert!(lu_correctable(&[zero, one], &[id_id_x, xxz]).unwrap());
    let ok = dev0 < 1e-12 && dev1 < 1e-12;
    report(
        6,
        "V4 step from φ⁺ gives the asymmetric W state; outcome 1 fixed by X⊗X⊗Z",
        ok,
        format!("outcome-0 dev {dev0:.2e}, outcome-1 dev {dev1:.2e}"),
    );
    assert!(ok);
}

#[test]
fn criterion_07_m4() {
    let pi = average_purity(&m4()).unwrap();
    let pair = max_entangled_pair(2).unwrap();
    let step1 = glue_star(&bell(BellState::PhiPlus), 1, &pair, 0, &v(Builtin::V2), Some(0), 0).unwrap();
    let step2 = glue_star(&step1.state, 2, &pair, 0, &v(Builtin::V1), Some(0), 0).unwrap();
    // chain layout (a, c, e, f) → printed layout (a, f, c, e)
    let reordered = step2.state.permute_parties(&[0, 3, 1, 2]).unwrap();
    let fid = phase_fidelity(&reordered, &m4());

    // same through 𝒢₂𝒢₁: entries are (φ⁺, ψ⁺; ψ⁻, φ⁻)/√2
    let g21 = compose(
        &recursion_from_gate(&v(Builtin::V2), 0).unwrap(),
        &recursion_from_gate(&v(Builtin::V1), 0).unwrap(),
    )
    .unwrap();
    let mut g_dev = 0.0f64;
    for (idx, b) in [BellState::PhiPlus, BellState::PsiPlus, BellState::PsiMinus, BellState::PhiMinus]
        .into_iter()
        .enumerate()
    {
        let want: Vec<Complex64> = bell(b).amplitudes().iter().map(|z| z * FRAC_1_SQRT_2).collect();
        g_dev = g_dev.max(max_diff(g21.entry(idx / 2, idx % 2), &want));
    }
    let ok = (pi - 1.0 / 3.0).abs() < 1e-10 && fid >= 1.0 - 1e-10 && g_dev < 1e-12;
    report(
        7,
        "π_ME(M4) = 1/3 and the V2,V1 chain reproduces M4",
        ok,
        format!("π_ME = {pi:.15}, chain fidelity {fid:.15}, 𝒢₂𝒢₁ dev {g_dev:.2e}"),
    );
    assert!(ok);
}

#[derive(Default)]
struct CaseCoverage {
    both: usize,
    one: usize,
    neither: usize,
}

#[test]
fn criterion_08_uniformity_theorem() {
    let fixtures = vec![
        ("phi+", bell(BellState::PhiPlus), 1usize),
        ("ghz3", ghz(3).unwrap(), 1),
        ("ghz4", ghz(4).unwrap(), 1),
        ("ring5", ring_graph_state(5).unwrap(), 2),
    ];
    for (name, s, k) in &fixtures {
        assert_eq!(max_uniformity(s, DEFAULT_TOL), *k, "fixture {name}");
    }
    let gates = [
        ("generalized-bell", TwoQuditGate::generalized_bell(2).unwrap()),
        ("V1", v(Builtin::V1)),
    ];
    let mut cov = CaseCoverage::default();
    let mut violations = Vec::new();
    let mut checked = 0;
    for (gname, gate) in &gates {
        assert!(gate.is_entangling_basis());
        for (na, a, ka) in &fixtures {
            for (nb, b, kb) in &fixtures {
                let need = (*ka).min(*kb);
                for x in 0..a.num_parties() {
                    for y in 0..b.num_parties() {
                        let g = glue(a, x, b, y, gate).unwrap();
                        let got = max_uniformity(&g, DEFAULT_TOL);
                        checked += 1;
                        if got < need {
                            violations.push(format!("{gname}: {na}[{x}] ⋄ {nb}[{y}] k={got} < {need}"));
                        }
                        // glued layout puts x at m-1 and y at m
                        let (xp, yp) = (a.num_parties() - 1, a.num_parties());
                        for s in uniformity_scan(&g, need).unwrap() {
                            let hits = s.subset.iter().filter(|&&p| p == xp || p == yp).count();
                            match hits {
                                2 => cov.both += 1,
                                1 => cov.one += 1,
                                _ => cov.neither += 1,
                            }
                        }
                    }
                }
            }
        }
    }
    let covered = cov.both > 0 && cov.one > 0 && cov.neither > 0;

    let ring = ring_graph_state(5).unwrap();
    let start = Instant::now();
    let big = glue(&ring, 2, &ring, 2, &TwoQuditGate::generalized_bell(2).unwrap()).unwrap();
    let scan = uniformity_scan(&big, 2).unwrap();
    let big_ok = scan.len() == 45 && is_k_uniform(&big, 2, DEFAULT_TOL).unwrap() && max_uniformity(&big, DEFAULT_TOL) >= 2;
    let elapsed = start.elapsed();

    let ok = violations.is_empty() && covered && big_ok && elapsed.as_secs_f64() < 10.0;
    report(
        8,
        "⋄ preserves min(k,k') uniformity for all fixture pairs and sites",
        ok,
        format!(
            "{checked} gluings, {} violations; subsets with both/one/neither sites = {}/{}/{}; ring⋄ring in {:.3}s",
            violations.len(),
            cov.both,
            cov.one,
            cov.neither,
            elapsed.as_secs_f64()
        ),
    );
    assert!(violations.is_empty(), "{violations:?}");
    assert!(covered);
    assert!(big_ok);
    assert!(elapsed.as_secs_f64() < 10.0);
}

#[test]
fn criterion_09_fixture_validation() {
    let ring = ring_graph_state(5).unwrap();
    let scan = uniformity_scan(&ring, 2).unwrap();
    let subsets: HashSet<Vec<usize>> = scan.iter().map(|s| s.subset.clone()).collect();
    let ring_ok = scan.len() == 10 && subsets.len() == 10 && is_k_uniform(&ring, 2, 1e-9).unwrap();
    let w_k = max_uniformity(&w(3).unwrap(), DEFAULT_TOL);
    let g_k = max_uniformity(&ghz(4).unwrap(), DEFAULT_TOL);
    let ok = ring_ok && w_k == 0 && g_k == 1;
    let worst = scan.iter().map(|s| s.deviation).fold(0.0, f64::max);
    report(
        9,
        "ring5 is 2-uniform, W3 has k_max 0, GHZ4 has k_max 1",
        ok,
        format!("ring5 max dev {worst:.2e} over {} subsets; W3 k={w_k}; GHZ4 k={g_k}", scan.len()),
    );
    assert!(ok);
}

#[test]
fn criterion_10_purity_bounds() {
    let mut r = rng(1010);
    let mut violations = 0;
    for i in 0..1000 {
        let d = if i % 2 == 0 { 2 } else { 3 };
        let n = 2 + (i / 2) % 5;
        let s = random_state(&mut r, d, n);
        let p = average_purity(&s).unwrap();
        let lo = 1.0 / (d as f64).powi((n / 2) as i32);
        if !(p >= lo - 1e-10 && p <= 1.0 + 1e-10) {
            violations += 1;
        }
    }
    let mut exact = true;
    for d in 2..=3 {
        for n in 2..=6 {
            let prod = PureState::basis(d, &vec![0; n]).unwrap();
            exact &= average_purity(&prod).unwrap() == 1.0;
        }
        exact &= average_purity(&max_entangled_pair(d).unwrap()).unwrap() == 1.0 / d as f64;
    }
    let ok = violations == 0 && exact;
    report(
        10,
        "π_ME within [1/d^⌊n/2⌋, 1] for 1000 random states; exact endpoints",
        ok,
        format!("{violations} violations; endpoints exact: {exact}"),
    );
    assert!(ok);
}

#[test]
fn criterion_11_oracle_equivalence() {
    let mut r = rng(1111);
    let mut exact = true;
    for trial in 0..50 {
        let d = 2 + trial % 2;
        let phi = random_state(&mut r, d, 1 + trial % 3);
        let psi = random_state(&mut r, d, 1 + (trial / 3) % 3);
        let gate = TwoQuditGate::generalized_bell(d).unwrap();
        let (x, y) = (trial % phi.num_parties(), trial % psi.num_parties());
        let glued = glue(&phi, x, &psi, y, &gate).unwrap();
        for o in 0..d {
            let star = glue_star(&phi, x, &psi, y, &gate, Some(o), 0).unwrap();
            let meas = glued.measure_computational(phi.num_parties() - 1, Some(o), 0).unwrap();
            exact &= star.state.amplitudes() == meas.state.amplitudes() && star.probability == meas.probability;
        }
    }
    let mut worst = 1.0f64;
    for b in Builtin::ALL {
        for steps in 1..=5 {
            let via = chain_via_recursion(&v(b), &vec![0; steps]).unwrap();
            let direct = chain_direct(&v(b), steps, &OutcomePolicy::zero()).unwrap();
            worst = worst.min(phase_fidelity(&via.state, &direct.state));
        }
    }
    let ok = exact && worst >= 1.0 - 1e-10;
    report(
        11,
        "glue_star ≡ measure∘glue exactly; recursion chain ≡ direct chain",
        ok,
        format!("amplitude-exact: {exact}; min chain fidelity {worst:.15}"),
    );
    assert!(ok);
}
