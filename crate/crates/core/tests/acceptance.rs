//! Acceptance suite: one check per criterion, each printing a PASS/FAIL line.
//!
//! Runs without the libtest harness so the report is always visible:
//! `cargo test --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::Instant;

use dunkl::dihedral::{DihedralGroup, OrbitPairings, PlanePoint, C64};
use dunkl::kernel::{
    check_ek_bound, check_em_bound, delta_effective, ek_integral, ek_integral_with, ek_series, IntegralOptions,
};
use dunkl::metrics::{component_scales, rel_error, scaled_error};
use dunkl::polyalg::{a_op, dunkl_apply, h_op, oracle_em_sequence, Intertwiner, ParameterK, Poly2};
use dunkl::recurrence::em_sequence;
use dunkl::series::{a_coeffs, em_closed_sigma_sequence, em_genseries_sequence, residual_check};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_d0c1;
const NS: [usize; 5] = [2, 3, 4, 5, 7];

#[derive(Clone, Debug)]
struct Instance {
    group: DihedralGroup,
    param: ParameterK,
    x: PlanePoint,
    y: PlanePoint,
}

impl Instance {
    fn orbit(&self) -> OrbitPairings {
        OrbitPairings::new(&self.group, &self.x, &self.y)
    }

    fn delta(&self) -> f64 {
        delta_effective(&self.param).delta_effective
    }

    /// Integer `ν ∈ {1, 2}` with `Re γ > -ν`.
    fn nu(&self) -> u32 {
        if self.param.gamma.re > -1.0 {
            1
        } else {
            2
        }
    }
}

fn point_in_disk(rng: &mut ChaCha8Rng, radius: f64) -> PlanePoint {
    let r = radius * rng.gen::<f64>().sqrt();
    let t = rng.gen_range(0.0..std::f64::consts::TAU);
    PlanePoint::real(r * t.cos(), r * t.sin())
}

/// `γ` drawn with `Re γ ∈ (-2, 6)`, `|Im γ| < 2`, regularity margin at least `0.1`;
/// `‖x‖, ‖y‖ ≤ 2`; every fifth instance has `x` fixed by `σ`.
fn instances(seed: u64, count: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = NS[rng.gen_range(0..NS.len())];
            let param = loop {
                let gamma = C64::new(rng.gen_range(-1.9..6.0), rng.gen_range(-2.0..2.0));
                if let Ok(p) = ParameterK::new(n, gamma / n as f64) {
                    if p.regularity_margin() >= 0.1 {
                        break p;
                    }
                }
            };
            let mut x = point_in_disk(&mut rng, 2.0);
            let y = point_in_disk(&mut rng, 2.0);
            if i % 5 == 0 {
                x = PlanePoint::real(x.x1.re, 0.0);
            }
            Instance { group: DihedralGroup::new(n).unwrap(), param, x, y }
        })
        .collect()
}

fn random_c(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_poly(rng: &mut ChaCha8Rng, degree: usize, homogeneous: bool) -> Poly2 {
    let mut p = Poly2::zero(degree);
    let low = if homogeneous { degree } else { 0 };
    for m in low..=degree {
        for b in 0..=m {
            *p.coeff_mut(m - b, b) = random_c(rng);
        }
    }
    p
}

/// Largest scaled error between two component sequences.
fn worst(a: &[C64], b: &[C64], scales: &[f64]) -> f64 {
    a.iter().zip(b).zip(scales).map(|((u, v), s)| scaled_error(*u, *v, *s)).fold(0.0, f64::max)
}

type Criterion = (&'static str, fn() -> Report);

struct Report {
    ok: bool,
    detail: String,
}

fn report(ok: bool, detail: impl Into<String>) -> Report {
    Report { ok, detail: detail.into() }
}

fn e1_identity() -> Report {
    let mut max_err = 0.0f64;
    for inst in instances(SEED, 200) {
        let (g, p, x, y) = (&inst.group, &inst.param, &inst.x, &inst.y);
        let orbit = inst.orbit();
        let want = orbit.xy() / (p.gamma + 1.0);
        let scale = orbit.a_bound / (p.gamma + 1.0).norm();
        let s = a_coeffs(p, &orbit, 1).unwrap();
        let mut got = vec![
            em_sequence(g, p, x, y, 1).unwrap()[1],
            em_genseries_sequence(p, &orbit, &s, 1).unwrap()[1],
            oracle_em_sequence(g, p, x, y, 1).unwrap()[1],
        ];
        if orbit.is_sigma_symmetric(1e-12) {
            got.push(em_closed_sigma_sequence(g, p, x, y, 1).unwrap()[1]);
        }
        for v in got {
            max_err = max_err.max(scaled_error(v, want, scale));
        }
    }
    report(max_err <= 1e-12, format!("max error {max_err:.2e} over 200 instances (tol 1e-12)"))
}

fn method_agreement() -> Report {
    let (mut oracle_err, mut series_err, mut closed_err) = (0.0f64, 0.0f64, 0.0f64);
    let mut closed_count = 0;
    for inst in instances(SEED + 1, 50) {
        let (g, p, x, y) = (&inst.group, &inst.param, &inst.x, &inst.y);
        let orbit = inst.orbit();
        let scales = component_scales(p.gamma, orbit.a_bound, 30);
        let rec = em_sequence(g, p, x, y, 30).unwrap();
        let s = a_coeffs(p, &orbit, 30).unwrap();
        let gen = em_genseries_sequence(p, &orbit, &s, 30).unwrap();
        let oracle = oracle_em_sequence(g, p, x, y, 20).unwrap();
        oracle_err = oracle_err.max(worst(&rec, &oracle, &scales));
        series_err = series_err.max(worst(&rec, &gen, &scales));
        if orbit.is_sigma_symmetric(1e-12) {
            let closed = em_closed_sigma_sequence(g, p, x, y, 30).unwrap();
            closed_err = closed_err.max(worst(&rec, &closed, &scales));
            closed_count += 1;
        }
    }
    report(
        oracle_err <= 1e-9 && series_err <= 1e-9 && closed_err <= 1e-10 && closed_count > 0,
        format!(
            "oracle {oracle_err:.2e} (m ≤ 20), genseries {series_err:.2e} (m ≤ 30), \
             closed form {closed_err:.2e} on {closed_count} σ-invariant instances"
        ),
    )
}

fn eigen_relation() -> Report {
    let mut max_err = 0.0f64;
    for inst in instances(SEED + 2, 20) {
        let (g, p, y) = (&inst.group, &inst.param, &inst.y);
        let v = Intertwiner::new(g, p, 11).unwrap();
        for m in 0..=10 {
            let em = v.em_poly(y, m).unwrap();
            let next = v.em_poly(y, m + 1).unwrap();
            for xi in [[1.0, 0.0], [0.0, 1.0]] {
                let lhs = dunkl_apply(g, p, &xi, &next).unwrap();
                let xy = y.x1 * xi[0] + y.x2 * xi[1];
                let rhs = em.scale(xy);
                let scale = lhs.max_abs().max(rhs.max_abs()).max(em.max_abs() * y.norm());
                max_err = max_err.max(lhs.max_abs_diff(&rhs) / scale);
            }
        }
    }
    report(max_err <= 1e-9, format!("max coefficient error {max_err:.2e}, m ≤ 10, 20 instances"))
}

fn operator_identities() -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let (mut intertwine_err, mut inverse_err) = (0.0f64, 0.0f64);
    for inst in instances(SEED + 3, 20) {
        let (g, p) = (&inst.group, &inst.param);
        let v = Intertwiner::new(g, p, 8).unwrap();
        let f = random_poly(&mut rng, 8, false);
        for xi in [[1.0, 0.0], [0.0, 1.0], [0.6, -0.8]] {
            let lhs = dunkl_apply(g, p, &xi, &v.apply(&f).unwrap()).unwrap();
            let rhs = v.apply(&f.directional_deriv(&xi)).unwrap();
            let scale = lhs.max_abs().max(rhs.max_abs()).max(1e-300);
            intertwine_err = intertwine_err.max(lhs.max_abs_diff(&rhs) / scale);
        }
        for m in 1..=8 {
            let q = random_poly(&mut rng, m, true);
            let shifted = &q.scale(p.gamma + m as f64) - &a_op(g, p, &q);
            let back = h_op(g, p, m, &shifted).unwrap();
            inverse_err = inverse_err.max(back.max_abs_diff(&q) / q.max_abs());
        }
    }
    report(
        intertwine_err <= 1e-9 && inverse_err <= 1e-10,
        format!("T_ξ V = V ∂_ξ: {intertwine_err:.2e} (tol 1e-9), H_m inverse: {inverse_err:.2e} (tol 1e-10)"),
    )
}

fn structural_zeros() -> Report {
    let (mut b0, mut a1) = (0.0f64, 0.0f64);
    let mut a0_exact = true;
    for inst in instances(SEED, 200) {
        let p = &inst.param;
        let orbit = inst.orbit();
        let s = a_coeffs(p, &orbit, 2).unwrap();
        let lead = 2.0 * p.n as f64 / p.gamma.norm();
        let da = inst.delta() * orbit.a_bound;
        let b0_max = s.b[0].iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
        b0 = b0.max(b0_max / (p.gamma.norm() * orbit.a_bound).max(1e-300));
        a1 = a1.max(s.a_norm(1) / (lead * da).max(1e-300));
        a0_exact &= s.a[0] == [C64::new(2.0 * p.n as f64, 0.0) / p.gamma, C64::new(0.0, 0.0)];
    }
    report(
        b0 <= 1e-12 && a1 <= 1e-12 && a0_exact,
        format!("scaled ‖B_0‖ {b0:.2e}, scaled ‖A_1‖ {a1:.2e}, A_0 exact: {a0_exact}"),
    )
}

fn coefficient_bound() -> Report {
    let mut max_ratio = 0.0f64;
    for inst in instances(SEED, 200) {
        let p = &inst.param;
        let orbit = inst.orbit();
        let s = a_coeffs(p, &orbit, 80).unwrap();
        let lead = 2.0 * p.n as f64 / p.gamma.norm();
        let da = inst.delta() * orbit.a_bound;
        for q in 0..=80 {
            // compare in logs: (δa)^80 can overflow
            let ratio = (s.a_norm(q).ln() - lead.ln() - q as f64 * da.ln()).exp();
            max_ratio = max_ratio.max(ratio);
        }
    }
    report(max_ratio <= 1.0 + 1e-9, format!("max ‖A_p‖ / bound {max_ratio:.6}, p ≤ 80, 200 instances"))
}

fn ode_residual() -> Report {
    let mut max_res = 0.0f64;
    for inst in instances(SEED, 200) {
        let p = &inst.param;
        let orbit = inst.orbit();
        let s = a_coeffs(p, &orbit, 80).unwrap();
        let radius = 0.25 / (inst.delta() * orbit.a_bound);
        for j in 0..8 {
            let z = C64::from_polar(radius, 0.1 + j as f64 * std::f64::consts::FRAC_PI_4);
            max_res = max_res.max(residual_check(p, &orbit, &s, z).unwrap());
        }
    }
    report(max_res <= 1e-8, format!("max residual {max_res:.2e} at 8 points × 200 instances"))
}

/// `Re γ > 0`, `a ≤ 2`, and `δa ≤ 6` so that the contour sum stays well conditioned.
fn integral_instances(count: usize) -> Vec<Instance> {
    instances(SEED + 8, 2000)
        .into_iter()
        .filter(|i| {
            let a = i.orbit().a_bound;
            i.param.gamma.re > 0.0 && a <= 2.0 && a > 0.0 && i.delta() * a <= 6.0
        })
        .take(count)
        .collect()
}

fn integral_representation() -> Report {
    let (mut agree, mut stable) = (0.0f64, 0.0f64);
    let list = integral_instances(20);
    for inst in &list {
        let (g, p, x, y) = (&inst.group, &inst.param, &inst.x, &inst.y);
        let series = ek_series(g, p, x, y, 1e-15).unwrap().value;
        let base = ek_integral(g, p, x, y, 1e-11).unwrap().value;
        agree = agree.max(rel_error(series, base));
        let rho = 0.5 / (inst.delta() * inst.orbit().a_bound);
        for f in [0.75, 1.25] {
            let opts = IntegralOptions { tol: 1e-11, rho: Some(rho * f) };
            let v = ek_integral_with(g, p, x, y, &opts).unwrap().value;
            stable = stable.max(rel_error(base, v));
        }
    }
    report(
        agree <= 1e-6 && stable <= 1e-8 && list.len() == 20,
        format!(
            "integral vs series {agree:.2e} (tol 1e-6), ρ ±25% {stable:.2e} (tol 1e-8), {} instances with δa ≤ 6",
            list.len()
        ),
    )
}

fn growth_bounds() -> Report {
    let mut em_ratio = 0.0f64;
    let mut negative = 0;
    for inst in instances(SEED + 9, 200) {
        let r = check_em_bound(&inst.group, &inst.param, &inst.x, &inst.y, 60, inst.nu()).unwrap();
        em_ratio = em_ratio.max(r.max_ratio);
        negative += usize::from(inst.param.gamma.re < 0.0);
    }
    let mut corollary_ok = true;
    let mut worst_margin = 0.0f64;
    for inst in instances(SEED + 10, 20) {
        let grid: Vec<(PlanePoint, PlanePoint)> = (0..=16).map(|j| (inst.x.scale(j as f64 / 8.0), inst.y)).collect();
        let r = check_ek_bound(&inst.group, &inst.param, &grid, inst.nu()).unwrap();
        corollary_ok &= r.sup_ratio.is_finite() && r.constant.is_finite() && r.sup_ratio <= r.constant;
        worst_margin = worst_margin.max(r.sup_ratio / r.constant);
    }
    report(
        em_ratio <= 1.0 + 1e-9 && corollary_ok && negative > 0,
        format!(
            "component ratio {em_ratio:.4} (m ≤ 60, {negative} instances with Re γ < 0), \
             kernel sup/constant {worst_margin:.4}"
        ),
    )
}

fn degenerations() -> Report {
    let mut ok = true;
    let mut linearity = 0.0f64;
    for inst in instances(SEED + 11, 50) {
        let (g, p, y) = (&inst.group, &inst.param, &inst.y);
        let origin = PlanePoint::origin();
        ok &= ek_series(g, p, &origin, y, 1e-12).unwrap().value == C64::new(1.0, 0.0);
        if p.gamma.re > 0.0 {
            ok &= (ek_integral(g, p, &origin, y, 1e-12).unwrap().value - 1.0).norm() < 1e-10;
        }
        let seq = em_sequence(g, p, &origin, y, 20).unwrap();
        ok &= seq[0] == C64::new(1.0, 0.0) && seq[1..].iter().all(|v| *v == C64::new(0.0, 0.0));
        let orbit = OrbitPairings::new(g, y, &origin);
        let s = a_coeffs(p, &orbit, 20).unwrap();
        let gen = em_genseries_sequence(p, &orbit, &s, 20).unwrap();
        ok &= (gen[0] - 1.0).norm() < 1e-15 && gen[1..].iter().all(|v| *v == C64::new(0.0, 0.0));
        let oracle = oracle_em_sequence(g, p, y, &origin, 8).unwrap();
        ok &= oracle[1..].iter().all(|v| v.norm() == 0.0);

        // E_k - exp⟨x,y⟩ must vanish linearly as k → 0
        let exp = dunkl::dihedral::pairing(&inst.x, y).exp();
        let dev = |k: f64| {
            let tiny = ParameterK::real(p.n, k).unwrap();
            ek_series(g, &tiny, &inst.x, y, 1e-15).unwrap().value - exp
        };
        let (d1, d2) = (dev(1e-5), dev(2e-5));
        linearity = linearity.max((d2 - d1 * 2.0).norm() / d2.norm().max(1e-300));
    }

    let g = DihedralGroup::new(3).unwrap();
    let tiny = ParameterK::real(3, 1e-5).unwrap();
    let (x, y) = (PlanePoint::real(1.0, 0.0), PlanePoint::real(0.5, 0.5));
    let want = dunkl::dihedral::pairing(&x, &y).exp();
    let small_k_err = rel_error(ek_series(&g, &tiny, &x, &y, 1e-14).unwrap().value, want);
    report(
        ok && small_k_err <= 1e-3 && linearity <= 1e-2,
        format!(
            "x = 0 and a = 0 exact: {ok}, k = 1e-5 vs exp⟨x,y⟩ {small_k_err:.2e} (tol 1e-3), \
             departure from linear decay in k {linearity:.2e}"
        ),
    )
}

fn cli_determinism() -> Report {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_dunkl"))
            .args(["crosscheck", "--seed", "2024", "--samples", "50", "--tol", "1e-8"])
            .output()
            .expect("the dunkl binary runs")
    };
    let (a, b) = (run(), run());
    let identical = a.stdout == b.stdout && !a.stdout.is_empty();
    let ok = identical && a.status.success() && b.status.success();
    report(ok, format!("byte-identical: {identical}, exit codes {:?}/{:?}", a.status.code(), b.status.code()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("E_1 identity", e1_identity),
        ("method agreement", method_agreement),
        ("eigen-relation", eigen_relation),
        ("operator identities", operator_identities),
        ("structural zeros", structural_zeros),
        ("coefficient bound", coefficient_bound),
        ("ODE residual", ode_residual),
        ("integral representation", integral_representation),
        ("growth bounds", growth_bounds),
        ("degenerations", degenerations),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = check();
        let status = if r.ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} {name}: {} [{:.2}s]", i + 1, r.detail, start.elapsed().as_secs_f64());
        failed += usize::from(!r.ok);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
