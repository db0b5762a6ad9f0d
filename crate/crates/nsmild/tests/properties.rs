//! Property tests for the operator identities and norm invariants.

use std::sync::Arc;

use num_complex::Complex64;
use proptest::prelude::*;

use nsmild::besov::besov_norm_heat;
use nsmild::field::{ScalarField, VectorField};
use nsmild::grid::SpectralGrid;
use nsmild::norms::{lebesgue_norm, lorentz_norm, sobolev_lorentz_norm, NormIndex};
use nsmild::ops::{
    fractional_laplacian, heat_propagate, leray_project, riesz_transform, tensor_product,
};
use nsmild::rearrange::{decreasing_rearrangement, RearrangementProfile};

// ---------------------------------------------------------------------------
// Strategies
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct ModeSoup {
    n: usize,
    modes: Vec<(i64, i64, f64, f64)>,
}

fn mode_soup(n: usize, band: i64) -> impl Strategy<Value = ModeSoup> {
    prop::collection::vec(
        (
            -band..=band,
            -band..=band,
            -1.0f64..1.0,
            -1.0f64..1.0,
        ),
        1..6,
    )
    .prop_map(move |modes| ModeSoup { n, modes })
}

fn build_scalar(grid: &Arc<SpectralGrid>, soup: &ModeSoup) -> ScalarField {
    let mut f = ScalarField::zeros(grid);
    for &(m1, m2, re, im) in &soup.modes {
        if m1 == 0 && m2 == 0 {
            continue;
        }
        let extra =
            ScalarField::from_hermitian_modes(grid, &[(&[m1, m2], Complex64::new(re, im))])
                .unwrap();
        f = f.add(&extra).unwrap();
    }
    f
}

fn build_vector(grid: &Arc<SpectralGrid>, a: &ModeSoup, b: &ModeSoup) -> VectorField {
    VectorField::from_components(vec![build_scalar(grid, a), build_scalar(grid, b)]).unwrap()
}

fn grid_of(n: usize) -> Arc<SpectralGrid> {
    SpectralGrid::new(2, n, 2.0 * std::f64::consts::PI).unwrap()
}

fn max_coeff_distance(a: &VectorField, b: &VectorField) -> f64 {
    a.components()
        .iter()
        .zip(b.components())
        .map(|(x, y)| {
            x.coeffs()
                .iter()
                .zip(y.coeffs())
                .map(|(p, q)| (p - q).norm())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Operator identities
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn leray_is_idempotent(a in mode_soup(16, 4), b in mode_soup(16, 4)) {
        let g = grid_of(16);
        let u = build_vector(&g, &a, &b);
        let once = leray_project(&u).unwrap();
        let twice = leray_project(&once).unwrap();
        let scale = once.max_abs_coeff().max(1e-300);
        prop_assert!(max_coeff_distance(&once, &twice) <= 1e-12 * scale);
        prop_assert!(once.divergence_defect() <= 1e-10 * u.max_abs_coeff().max(1e-300));
    }

    #[test]
    fn heat_semigroup_law(a in mode_soup(16, 4), t1 in 0.0f64..1.0, t2 in 0.0f64..1.0) {
        let g = grid_of(16);
        let f = build_scalar(&g, &a);
        let two_step = heat_propagate(&heat_propagate(&f, t1).unwrap(), t2).unwrap();
        let one_step = heat_propagate(&f, t1 + t2).unwrap();
        let scale = f.max_abs_coeff().max(1e-300);
        let err: f64 = two_step
            .coeffs()
            .iter()
            .zip(one_step.coeffs())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        prop_assert!(err <= 1e-12 * scale);
    }

    #[test]
    fn heat_is_l2_contraction(a in mode_soup(16, 5), t in 0.0f64..2.0) {
        let g = grid_of(16);
        let f = build_scalar(&g, &a);
        let before = lebesgue_norm(&f, 2.0).unwrap();
        let after = lebesgue_norm(&heat_propagate(&f, t).unwrap(), 2.0).unwrap();
        prop_assert!(after <= before * (1.0 + 1e-12));
    }

    #[test]
    fn fractional_laplacian_composes(
        a in mode_soup(16, 4),
        s1 in -1.0f64..1.5,
        s2 in -1.0f64..1.5,
    ) {
        let g = grid_of(16);
        let f = build_scalar(&g, &a);
        let chained = fractional_laplacian(&fractional_laplacian(&f, s1).unwrap(), s2).unwrap();
        let direct = fractional_laplacian(&f, s1 + s2).unwrap();
        let scale = direct.max_abs_coeff().max(f.max_abs_coeff()).max(1e-300);
        let err: f64 = chained
            .coeffs()
            .iter()
            .zip(direct.coeffs())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        prop_assert!(err <= 1e-12 * scale);
    }

    #[test]
    fn operators_preserve_hermitian_symmetry(a in mode_soup(16, 4), t in 0.0f64..1.0) {
        let g = grid_of(16);
        let f = build_scalar(&g, &a);
        prop_assert!(heat_propagate(&f, t).unwrap().hermitian_defect() < 1e-12);
        prop_assert!(fractional_laplacian(&f, 0.7).unwrap().hermitian_defect() < 1e-12);
        prop_assert!(riesz_transform(&f, 0).unwrap().hermitian_defect() < 1e-12);
        prop_assert!(riesz_transform(&f, 1).unwrap().hermitian_defect() < 1e-12);
    }

    #[test]
    fn tensor_product_components_commute(
        a in mode_soup(16, 3),
        b in mode_soup(16, 3),
        c in mode_soup(16, 3),
        d in mode_soup(16, 3),
    ) {
        let g = grid_of(16);
        let u = build_vector(&g, &a, &b);
        let v = build_vector(&g, &c, &d);
        let uv = tensor_product(&u, &v).unwrap();
        let vu = tensor_product(&v, &u).unwrap();
        let scale = uv.max_abs_coeff().max(1e-300);
        for i in 0..2 {
            for j in 0..2 {
                let err: f64 = uv
                    .component(i, j)
                    .coeffs()
                    .iter()
                    .zip(vu.component(j, i).coeffs())
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max);
                prop_assert!(err <= 1e-12 * scale);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Norm invariants
// ---------------------------------------------------------------------------

/// Independent layer-cake oracle through the distribution function:
/// ‖f‖^r = q ∫₀^∞ λ^{r−1} d_f(λ)^{r/q} dλ, integrated exactly between the
/// distinct sample values; r = ∞ takes sup λ·d_f(λ)^{1/q}.
fn layer_cake_oracle(samples: &[f64], cell: f64, q: f64, r: f64) -> f64 {
    let mut values: Vec<f64> = samples.iter().map(|v| v.abs()).filter(|&v| v > 0.0).collect();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // Distinct values v_i with cumulative measure M_i of {|f| >= v_i}.
    let mut distinct: Vec<(f64, f64)> = Vec::new();
    let mut cumulative = 0.0;
    for v in values {
        cumulative += cell;
        match distinct.last_mut() {
            Some(last) if last.0 == v => last.1 = cumulative,
            _ => distinct.push((v, cumulative)),
        }
    }
    if distinct.is_empty() {
        return 0.0;
    }
    if r.is_infinite() {
        return distinct
            .iter()
            .map(|&(v, m)| v * m.powf(1.0 / q))
            .fold(0.0, f64::max);
    }
    let mut total = 0.0;
    for i in 0..distinct.len() {
        let (v_i, m_i) = distinct[i];
        let v_next = if i + 1 < distinct.len() { distinct[i + 1].0 } else { 0.0 };
        total += q * m_i.powf(r / q) * (v_i.powf(r) - v_next.powf(r)) / r;
    }
    total.powf(1.0 / r)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lorentz_norm_matches_layer_cake_oracle(
        a in mode_soup(8, 3),
        q in 1.1f64..4.0,
        r_sel in 0usize..4,
    ) {
        let g = grid_of(8);
        let f = build_scalar(&g, &a);
        let r = [1.0, q, 2.5, f64::INFINITY][r_sel];
        let samples = f.to_physical();
        let oracle = layer_cake_oracle(&samples, g.cell_volume(), q, r);
        let norm = lorentz_norm(&decreasing_rearrangement(&f), q, r).unwrap();
        prop_assert!(
            (norm - oracle).abs() <= 1e-12 * oracle.max(1e-300),
            "q={q} r={r}: {norm} vs oracle {oracle}"
        );
    }

    #[test]
    fn equimeasurability_lqq_equals_lq(a in mode_soup(16, 4), q in 1.1f64..4.0) {
        let g = grid_of(16);
        let f = build_scalar(&g, &a);
        let lq = lebesgue_norm(&f, q).unwrap();
        let lqq = lorentz_norm(&decreasing_rearrangement(&f), q, q).unwrap();
        prop_assert!((lq - lqq).abs() <= 1e-10 * lq.max(1e-300));
    }

    #[test]
    fn norms_are_positively_homogeneous(
        a in mode_soup(8, 3),
        c in 0.25f64..8.0,
        q in 1.1f64..3.5,
    ) {
        let g = grid_of(8);
        let f = build_scalar(&g, &a);
        let scaled = f.scale(c);
        let n1 = lorentz_norm(&decreasing_rearrangement(&f), q, 1.5).unwrap();
        let n2 = lorentz_norm(&decreasing_rearrangement(&scaled), q, 1.5).unwrap();
        prop_assert!((n2 - c * n1).abs() <= 1e-10 * (c * n1).max(1e-300));
        let b1 = besov_norm_heat(&f, 0.1, f64::INFINITY, q, 1.0).unwrap();
        let b2 = besov_norm_heat(&scaled, 0.1, f64::INFINITY, q, 1.0).unwrap();
        prop_assert!((b2 - c * b1).abs() <= 1e-9 * (c * b1).max(1e-300));
    }

    #[test]
    fn secondary_index_nesting_has_bounded_ratio(
        a in mode_soup(16, 4),
        q in 1.5f64..3.5,
        s in 0.0f64..0.5,
    ) {
        let g = grid_of(16);
        let f = build_scalar(&g, &a);
        if f.max_abs_coeff() == 0.0 {
            return Ok(());
        }
        // r = 1 is the strongest secondary index; ratios against larger r
        // stay bounded by a single corpus-wide constant.
        let strong = sobolev_lorentz_norm(&f, &NormIndex::new(q, 1.0, s)).unwrap();
        for r in [q, 2.0 * q, f64::INFINITY] {
            let weaker = sobolev_lorentz_norm(&f, &NormIndex::new(q, r, s)).unwrap();
            prop_assert!(weaker <= 2.0 * strong, "r={r}: {weaker} vs r=1: {strong}");
        }
    }

    #[test]
    fn heat_flow_never_inflates_sobolev_lorentz_norms(
        a in mode_soup(16, 4),
        t in 0.0f64..2.0,
        q in 1.5f64..3.5,
        r_sel in 0usize..3,
        s in 0.0f64..0.5,
    ) {
        let g = grid_of(16);
        let f = build_scalar(&g, &a);
        let r = [1.0, q, f64::INFINITY][r_sel];
        let idx = NormIndex::new(q, r, s);
        let before = sobolev_lorentz_norm(&f, &idx).unwrap();
        let after = sobolev_lorentz_norm(&heat_propagate(&f, t).unwrap(), &idx).unwrap();
        prop_assert!(
            after <= before * (1.0 + 1e-8),
            "t={t} q={q} r={r} s={s}: {after} > {before}"
        );
    }
}

// ---------------------------------------------------------------------------
// Deterministic spot checks that complement the proptest sweeps
// ---------------------------------------------------------------------------

#[test]
fn rearrangement_profile_oracle_agreement_is_tight_on_small_grids() {
    // 8² and 16² grids, 50 random fields each, a grid of (q, r) pairs.
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for n in [8usize, 16] {
        let g = grid_of(n);
        for _ in 0..50 {
            let samples: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let f = ScalarField::from_physical(&g, &samples).unwrap();
            let phys = f.to_physical();
            for q in [1.5, 2.0, 3.0] {
                for r in [1.0, 2.0, q, f64::INFINITY] {
                    let oracle = layer_cake_oracle(&phys, g.cell_volume(), q, r);
                    let norm =
                        lorentz_norm(&decreasing_rearrangement(&f), q, r).unwrap();
                    assert!(
                        (norm - oracle).abs() <= 1e-12 * oracle.max(1e-300),
                        "n={n} q={q} r={r}"
                    );
                }
            }
        }
    }
}

#[test]
fn holder_rows_stay_below_one() {
    // s = 0 product rows: discrete Hölder is exact when 1/r = 1/p + 1/q.
    let g = grid_of(16);
    let mk = |seed: u64| {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let samples: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        ScalarField::from_physical(&g, &samples).unwrap()
    };
    for seed in 0..8u64 {
        let u = mk(seed);
        let v = mk(seed + 100);
        for (p, q) in [(2.0, 2.0), (3.0, 1.5), (2.5, 4.0)] {
            let r = 1.0 / (1.0 / p + 1.0 / q);
            let uv = u.pointwise_mul(&v).unwrap();
            let lhs = lebesgue_norm(&uv, r).unwrap();
            let rhs = lebesgue_norm(&u, p).unwrap() * lebesgue_norm(&v, q).unwrap();
            assert!(lhs <= rhs * (1.0 + 1e-8), "p={p} q={q}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn indicator_profile_norms_match_closed_forms_across_exponents() {
    let m = 4.0f64;
    let p = RearrangementProfile::from_weighted_samples([(1.0, m)]);
    for q in [1.5, 2.0, 3.0] {
        for r in [1.0, 2.0, 5.0] {
            let expect = (q / r).powf(1.0 / r) * m.powf(1.0 / q);
            assert!((lorentz_norm(&p, q, r).unwrap() - expect).abs() < 1e-10);
        }
        let expect_inf = m.powf(1.0 / q);
        assert!((lorentz_norm(&p, q, f64::INFINITY).unwrap() - expect_inf).abs() < 1e-10);
    }
}
