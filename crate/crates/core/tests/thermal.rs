use epictrl::thermal::{
    required_initial_temperature, required_initial_temperature_bisection, required_initial_temperature_series,
    unit_response_fd, unit_response_series, unit_response_series_average, CapCondition, Criterion, FdGrid,
    TransportScenario,
};

fn vial(nodes: usize, cap: CapCondition) -> TransportScenario {
    TransportScenario {
        cap,
        grid: FdGrid {
            radial_nodes: nodes,
            axial_nodes: nodes,
            time_steps: None,
        },
        ..TransportScenario::vaccine_vial()
    }
}

fn max_error(s: &TransportScenario) -> f64 {
    let f = unit_response_fd(s).unwrap();
    let mut worst = 0.0f64;
    for (j, z) in f.z.iter().enumerate() {
        for (i, r) in f.r.iter().enumerate() {
            let exact = unit_response_series(s, s.arrival_time, *r, *z).unwrap();
            worst = worst.max((f.at(i, j) - exact).abs());
        }
    }
    worst
}

#[test]
fn second_order_grid_convergence() {
    for cap in CapCondition::ALL {
        let e: Vec<f64> = [11, 21, 41].iter().map(|&n| max_error(&vial(n, cap))).collect();
        for w in e.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.0..5.5).contains(&ratio), "{cap}: errors {e:?}");
        }
    }
}

#[test]
fn fd_volume_average_tracks_series() {
    for cap in CapCondition::ALL {
        let s = vial(61, cap);
        let fd = unit_response_fd(&s).unwrap().volume_average();
        let exact = unit_response_series_average(&s, s.arrival_time).unwrap();
        assert!((fd - exact).abs() < 1e-3, "{cap}: {fd} vs {exact}");
    }
}

#[test]
fn inverse_methods_agree() {
    let s = TransportScenario {
        criterion: Criterion::Probe { r: 0.015, z: 0.02 },
        ..vial(41, CapCondition::Dirichlet)
    };
    let linear = required_initial_temperature(&s).unwrap();
    let series = required_initial_temperature_series(&s).unwrap();
    let bisect = required_initial_temperature_bisection(&s, (-400.0, -70.0), 1e-6).unwrap();
    assert!((linear.initial_temperature - bisect).abs() < 1e-4);
    assert!((linear.initial_temperature - series.initial_temperature).abs() < 0.5);
    assert!((linear.forward_check - s.target_temperature).abs() < 0.1);
}

#[test]
fn series_reference_values() {
    // independent 200-term sums for the vial at t = 7200 s
    let cases = [
        (CapCondition::Insulated, Criterion::Center, 0.9777011845468339),
        (CapCondition::Dirichlet, Criterion::Center, 0.8862539657960661),
        (CapCondition::Insulated, Criterion::Probe { r: 0.015, z: 0.02 }, 0.8031927659454079),
        (CapCondition::Dirichlet, Criterion::Probe { r: 0.015, z: 0.02 }, 0.7280678241663018),
    ];
    for (cap, criterion, phi) in cases {
        let s = TransportScenario {
            criterion,
            ..vial(21, cap)
        };
        let got = required_initial_temperature_series(&s).unwrap();
        assert!((got.unit_response - phi).abs() < 1e-9, "{cap} {criterion}");
        assert!((got.initial_temperature - (-70.0 / phi)).abs() < 1e-9);
    }
}
