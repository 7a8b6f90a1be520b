use peer_pressure::experiments::{
    CSV_HEADER, DealKind, DealModel, Ratio, Sampling, SweepMode, SweepSpec, census, estimate_certificate_rate, estimate_draw_rate, sweep,
    wilson_interval, write_csv,
};
use peer_pressure::game::Position;
use peer_pressure::solver::SolverTable;

#[test]
fn census_is_symmetric() {
    let t = SolverTable::build(12).unwrap();
    for n in 2..=12 {
        let c = census(&t, n).unwrap();
        assert_eq!(c.deals, (1 << n) - 2);
        assert_eq!(c.alice_win + c.bob_win + c.draw, c.deals);
        assert_eq!(c.alice_win, c.bob_win, "n = {n}");
        assert_eq!(c.draw % 2, 0);
        for d in &c.draws {
            let mirror = d.parse::<Position>().unwrap().mirrored().to_string();
            assert!(c.draws.contains(&mirror), "{d}");
        }
    }
}

#[test]
fn exhaustive_rates_match_census() {
    let t = SolverTable::build(12).unwrap();
    for n in 2..=12u64 {
        let c = census(&t, n as usize).unwrap();
        let row = estimate_draw_rate(&t, &DealModel::unbiased_iid(n).unwrap(), Sampling::Exhaustive, 0).unwrap();
        assert_eq!((row.trials, row.draw), (1 << n, c.draw));
        assert_eq!(row.alice_win, c.alice_win + 1);
        if n % 2 == 0 {
            let half = c.draws.iter().filter(|d| d.parse::<Position>().unwrap().alice().len() == n as usize / 2).count();
            let model = DealModel::new(DealKind::UnbiasedExact, n, Ratio::ONE).unwrap();
            let row = estimate_draw_rate(&t, &model, Sampling::Exhaustive, 0).unwrap();
            assert_eq!(row.draw, half as u64, "n = {n}");
        }
    }
}

#[test]
fn monte_carlo_is_reproducible_and_close_to_exact() {
    let t = SolverTable::build(10).unwrap();
    let model = DealModel::unbiased_iid(10).unwrap();
    let exact = estimate_draw_rate(&t, &model, Sampling::Exhaustive, 0).unwrap();
    let a = estimate_draw_rate(&t, &model, Sampling::MonteCarlo { trials: 20_000 }, 3).unwrap();
    let b = estimate_draw_rate(&t, &model, Sampling::MonteCarlo { trials: 20_000 }, 3).unwrap();
    assert_eq!(a, b);
    // monte carlo never deals one-sided hands, exhaustive mode does
    let two_sided = exact.draw as f64 / (exact.trials - 2) as f64;
    assert!(a.ci_lo <= two_sided + 0.01 && two_sided - 0.01 <= a.ci_hi, "{a:?} vs {two_sided}");
}

#[test]
fn wilson_bounds() {
    let (lo, hi) = wilson_interval(0, 100);
    assert_eq!(lo, 0.0);
    assert!(hi > 0.03 && hi < 0.04);
    let (lo, hi) = wilson_interval(50, 100);
    assert!((lo + hi - 1.0).abs() < 1e-12);
    assert!((hi - 0.5 - 0.0963).abs() < 1e-3);
}

#[test]
fn certificate_rate_falls_as_bias_grows() {
    let spec = SweepSpec {
        kind: DealKind::BiasedIid,
        r_values: ["1", "1.2", "1.4", "1.6", "1.8", "2"].iter().map(|s| s.parse().unwrap()).collect(),
        n_values: vec![20_000],
        k: 6,
        trials: 200,
        seed: 4,
        mode: SweepMode::Certificate,
    };
    let rows = sweep(None, &spec).unwrap();
    for w in rows.windows(2) {
        assert!(w[1].alice_win <= w[0].alice_win, "{} then {}", w[0].alice_win, w[1].alice_win);
    }
    assert!(rows[0].rate > 0.9 && rows.last().unwrap().rate == 0.0);
}

#[test]
fn count_only_rate_rises_with_bias() {
    let spec = SweepSpec {
        kind: DealKind::BiasedExact,
        r_values: ["3/2", "8/5", "33/20", "7/4"].iter().map(|s| s.parse().unwrap()).collect(),
        n_values: vec![1000],
        k: 0,
        trials: 300,
        seed: 5,
        mode: SweepMode::CountOnly,
    };
    let rates: Vec<f64> = sweep(None, &spec).unwrap().iter().map(|r| r.rate).collect();
    assert_eq!(rates, vec![0.0, 0.0, 1.0, 1.0]);
}

#[test]
fn csv_shape() {
    let t = SolverTable::build(8).unwrap();
    let spec = SweepSpec {
        kind: DealKind::UnbiasedIid,
        r_values: vec![Ratio::ONE],
        n_values: vec![4, 6, 8],
        k: 0,
        trials: 50,
        seed: 1,
        mode: SweepMode::Solver,
    };
    let rows = sweep(Some(&t), &spec).unwrap();
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 4);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == CSV_HEADER.split(',').count()));
}

#[test]
fn bad_parameters() {
    let m = DealModel::unbiased_iid(10).unwrap();
    assert!(estimate_certificate_rate(&m, 1, 10, 0).is_err());
    assert!(estimate_certificate_rate(&m, 11, 10, 0).is_err());
    assert!(estimate_certificate_rate(&m, 3, 0, 0).is_err());
    assert!(DealModel::new(DealKind::UnbiasedExact, 7, Ratio::ONE).is_err());
    assert!(DealModel::new(DealKind::UnbiasedIid, 7, Ratio::new(3, 2).unwrap()).is_err());
    let t = SolverTable::build(6).unwrap();
    assert!(estimate_draw_rate(&t, &DealModel::unbiased_iid(7).unwrap(), Sampling::Exhaustive, 0).is_err());
}
