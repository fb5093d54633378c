use std::f64::consts::PI;
use std::sync::OnceLock;

use proptest::prelude::*;

use wgfm::imaging::{
    fbsm_indicator, hermitian_sqrt, picard_indicator, scan, support_metrics, Eigensystem,
    IndicatorKind, Probe, SamplingGrid,
};
use wgfm::mfop::{assemble_backscatter, discrete_factors, FarFieldMatrix, OperatorKind};
use wgfm::modal::{BoundaryKind, Waveguide};
use wgfm::synth::{
    add_noise, synthesize_dataset, ForwardModel, FrequencyGrid, GridMode, MeasurementConfig,
    QuadratureRule, Region, Shape, SourceSpec,
};

const H: f64 = PI / 12.0;

struct Setup {
    wg: Waveguide,
    src: SourceSpec,
    x: MeasurementConfig,
    grid: FrequencyGrid,
    rule: QuadratureRule,
}

fn setup() -> Setup {
    let wg = Waveguide::new(H, BoundaryKind::Neumann).unwrap();
    let src = SourceSpec::new(
        vec![Region::unit(
            Shape::rectangle((-0.5, 0.5), (0.2 * H, 0.7 * H)).unwrap(),
        )],
        0.0,
    )
    .unwrap();
    Setup {
        wg,
        src,
        x: MeasurementConfig::left(8.0, 0.37 * H).unwrap(),
        grid: FrequencyGrid::full_band(&wg, 48, GridMode::Vertex).unwrap(),
        rule: QuadratureRule::new(H / 40.0).unwrap(),
    }
}

fn operator(s: &Setup, src: &SourceSpec, delta: f64) -> FarFieldMatrix {
    let ds =
        synthesize_dataset(&s.wg, src, &s.x, &s.grid, &ForwardModel::Quadrature(s.rule)).unwrap();
    assemble_backscatter(&add_noise(&ds, delta, 7).unwrap(), src.theta()).unwrap()
}

fn sampling() -> SamplingGrid {
    SamplingGrid::new((-2.0, 2.0), H, 161, 3).unwrap()
}

fn fm_ratio(s: &Setup, es: &Eigensystem, rho: f64) -> f64 {
    let img = scan(
        &sampling(),
        IndicatorKind::Fm { epsilon: 0.01, rho },
        |z, _| picard_indicator(es, &Probe::disc(z, 0.01, &s.x)?, &s.grid, rho),
    )
    .unwrap();
    assert!(img.rows_identical());
    support_metrics(&img, (-0.5, 0.5), 0.01).ratio
}

#[test]
fn spectral_cutoff_on_noisy_and_clean_data() {
    let s = setup();
    let noisy = hermitian_sqrt(&operator(&s, &s.src, 0.05)).unwrap();
    // With 5% noise the contrast survives even without a cutoff: the noise lifts the
    // small eigenvalues instead of leaving them near zero.
    for rho in [0.0, 0.01] {
        assert!(fm_ratio(&s, &noisy, rho) >= 10.0, "rho {rho}");
    }
    let clean = hermitian_sqrt(&operator(&s, &s.src, 0.0)).unwrap();
    assert!(clean.values[9] / clean.values[0] < 1e-3);
    assert!(clean.values.windows(2).all(|w| w[0] >= w[1]));
    assert!(fm_ratio(&s, &clean, 0.01) >= 10.0);
    // keeping only the leading eigenpairs loses the contrast
    assert!(fm_ratio(&s, &clean, 0.1) < 10.0);
}

#[test]
fn fbsm_lies_between_the_factor_bounds() {
    let s = setup();
    let f = operator(&s, &s.src, 0.0);
    let fac = discrete_factors(
        &s.wg,
        &s.src,
        &s.x,
        &s.grid,
        &s.rule,
        &OperatorKind::Backscatter { theta: 0.0 },
    )
    .unwrap();
    let (c1, c2) = (fac.min_abs_t(), fac.max_abs_t());
    for i in 0..=40 {
        let z = -2.0 + 0.1 * i as f64;
        let p = Probe::point(z, &s.x);
        let g = wgfm::imaging::probe_vector(&p, &s.grid);
        let energy = fac.s_norm_sq(&g);
        let value = fbsm_indicator(&f, &p).unwrap();
        assert!(
            value >= c1 * energy * (1.0 - 1e-6),
            "z {z}: {value} < {}",
            c1 * energy
        );
        assert!(
            value <= c2 * energy * (1.0 + 1e-6),
            "z {z}: {value} > {}",
            c2 * energy
        );
    }
}

#[test]
fn fbsm_scales_with_source_strength() {
    let s = setup();
    let f = operator(&s, &s.src, 0.0);
    let g = operator(&s, &s.src.scaled(3.5).unwrap(), 0.0);
    let grid = sampling();
    let a = scan(&grid, IndicatorKind::Fbsm, |z, _| {
        fbsm_indicator(&f, &Probe::point(z, &s.x))
    })
    .unwrap();
    let b = scan(&grid, IndicatorKind::Fbsm, |z, _| {
        fbsm_indicator(&g, &Probe::point(z, &s.x))
    })
    .unwrap();
    assert!((b.peak / a.peak - 3.5).abs() < 1e-12);
    let ma = support_metrics(&a, (-0.5, 0.5), 0.01);
    let mb = support_metrics(&b, (-0.5, 0.5), 0.01);
    assert_eq!(ma.argmax_z1, mb.argmax_z1);
    assert!(a.rows_identical() && b.rows_identical());
}

fn noisy_eigensystem() -> &'static (Setup, Eigensystem) {
    static CELL: OnceLock<(Setup, Eigensystem)> = OnceLock::new();
    CELL.get_or_init(|| {
        let s = setup();
        let es = hermitian_sqrt(&operator(&s, &s.src, 0.05)).unwrap();
        (s, es)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn picard_indicator_grows_with_the_cutoff(z in -2.0f64..2.0, a in 0.0f64..0.99, b in 0.0f64..0.99) {
        let (s, es) = noisy_eigensystem();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let p = Probe::disc(z, 0.01, &s.x).unwrap();
        let small = picard_indicator(es, &p, &s.grid, lo).unwrap();
        let large = picard_indicator(es, &p, &s.grid, hi).unwrap();
        prop_assert!(large >= small * (1.0 - 1e-12));
    }
}
