use thermolab::linalg::{c, hermitian_eigen, trace_norm, CMatrix};
use thermolab::partition::Branch;
use thermolab::switch::{
    biased_gibbs, build_hamiltonian, evolve, evolve_sampled, lindblad_generator, number_operator, IntegratorOptions,
};
use thermolab::{DensityMatrix, SwitchParams};

fn thermal_osc(q: f64, n: usize) -> CMatrix {
    let z: f64 = (0..n).map(|k| q.powi(k as i32)).sum();
    CMatrix::from_fn(n, n, |i, j| if i == j { c(q.powi(i as i32) / z) } else { c(0.0) })
}

#[test]
fn uncoupled_hamiltonian_is_a_ladder() {
    let p = SwitchParams::new(1.3, 0.0, 1.0);
    let h = build_hamiltonian(&p, 16).unwrap();
    let mut e = hermitian_eigen(&h).eigenvalues.iter().copied().collect::<Vec<_>>();
    e.sort_by(f64::total_cmp);
    for (k, pair) in e.chunks(2).enumerate() {
        for v in pair {
            assert!((v - 1.3 * k as f64).abs() < 1e-12);
        }
    }
}

#[test]
fn polaron_levels_are_shifted_ladder() {
    // low eigenvalues of ω₀a†a − ω₀g(a† + a)σ³ are ω₀(n − g²), each twice
    let p = SwitchParams::new(1.0, 1.2, 1.0);
    let h = build_hamiltonian(&p, 60).unwrap();
    let mut e = hermitian_eigen(&h).eigenvalues.iter().copied().collect::<Vec<_>>();
    e.sort_by(f64::total_cmp);
    for n in 0..6 {
        let want = n as f64 - 1.44;
        assert!((e[2 * n] - want).abs() < 1e-8, "{n}: {}", e[2 * n]);
        assert!((e[2 * n + 1] - want).abs() < 1e-8);
    }
}

#[test]
fn generator_is_traceless_and_hermiticity_preserving() {
    let p = SwitchParams::new(1.0, 0.7, 0.8).with_rates(0.3, 0.2, 0.05);
    let n = 24;
    let gen = lindblad_generator(&p, n).unwrap();
    let d = 2 * n;
    let m = CMatrix::from_fn(d, d, |i, j| {
        num_complex::Complex64::new(((i * 7 + j * 3) % 5) as f64 - 2.0, ((i + 2 * j) % 3) as f64 - 1.0)
    });
    let rho = &m * m.adjoint();
    let out = gen.apply(&rho);
    assert!(out.trace().norm() < 1e-10 * rho.norm());
    assert!((&out - out.adjoint()).norm() < 1e-10 * rho.norm());
}

#[test]
fn biased_gibbs_states_are_stationary() {
    for (g, kt) in [(0.5, 0.5), (1.0, 1.0)] {
        let p = SwitchParams::new(1.0, g, kt);
        let n = 60;
        let gen = lindblad_generator(&p, n).unwrap();
        for branch in [Branch::Plus, Branch::Minus] {
            let rho = biased_gibbs(&p, branch, n, 1e-13).unwrap();
            assert!(trace_norm(&gen.apply(rho.matrix())) < 1e-8);
        }
    }
}

#[test]
fn mixture_of_pointer_states_does_not_move() {
    let p = SwitchParams::new(1.0, 0.5, 0.5).with_rates(1.0, 0.05, 0.0);
    let n = 24;
    let gen = lindblad_generator(&p, n).unwrap();
    let plus = biased_gibbs(&p, Branch::Plus, n, 1e-10).unwrap();
    let minus = biased_gibbs(&p, Branch::Minus, n, 1e-10).unwrap();
    let mix = plus.mix(0.3, &minus).unwrap();
    let out = evolve(&mix, &gen, 10.0 / p.gamma, IntegratorOptions::default()).unwrap();
    assert!(out.state.distance(&mix) < 1e-6);
    assert!(out.trace_drift < 1e-9);
}

#[test]
fn spin_coherence_decays_at_least_at_dephasing_rate() {
    let p = SwitchParams::new(1.0, 0.0, 1.0).with_rates(0.2, 0.3, 0.0);
    let n = 16;
    let osc = thermal_osc(p.boltzmann_factor(), n);
    let mut data = CMatrix::zeros(2 * n, 2 * n);
    for s in 0..2 {
        for t in 0..2 {
            data.view_mut((s * n, t * n), (n, n)).copy_from(&(&osc * c(0.5)));
        }
    }
    let rho = DensityMatrix::new(n, data).unwrap();
    let c0 = rho.spin_coherence_norm();
    let gen = lindblad_generator(&p, n).unwrap();
    let times = [0.5, 1.0, 2.0, 4.0];
    let mut seen = Vec::new();
    evolve_sampled(&rho, &gen, &times, IntegratorOptions::default(), |t, r| {
        seen.push((t, r.spin_coherence_norm()))
    })
    .unwrap();
    assert_eq!(seen.len(), times.len());
    for (t, coh) in seen {
        assert!(coh <= c0 * (-2.0 * p.gamma_dephase * t).exp() * (1.0 + 1e-6), "t={t}");
    }
}

#[test]
fn closed_system_keeps_purity() {
    let p = SwitchParams::new(1.0, 0.8, 1.0).with_rates(1e-12, 0.0, 0.0);
    let n = 30;
    let gen = lindblad_generator(&p, n).unwrap();
    let mut psi = CMatrix::zeros(2 * n, 1);
    psi[(0, 0)] = c(std::f64::consts::FRAC_1_SQRT_2);
    psi[(n, 0)] = c(std::f64::consts::FRAC_1_SQRT_2);
    let rho = DensityMatrix::new(n, &psi * psi.adjoint()).unwrap();
    let out = evolve(&rho, &gen, 3.0, IntegratorOptions::default()).unwrap();
    assert!((out.state.purity() - 1.0).abs() < 1e-8);
    // each branch oscillates about ±g, so ⟨a†a⟩ never exceeds 4g²
    let num = number_operator(n);
    let mut big = CMatrix::zeros(2 * n, 2 * n);
    big.view_mut((0, 0), (n, n)).copy_from(&num);
    big.view_mut((n, n), (n, n)).copy_from(&num);
    assert!(out.state.expectation(&big) <= 4.0 * 0.64 + 1e-6);
}
