mod common;

use common::{brute_force, small_battery_uav, suite, swap_suite};
use covroute::battery::{fixed_speed_energy_bound, stretch_budget};
use covroute::map::{BaseStation, ChargingStation};
use covroute::{
    plan_min_energy, plan_min_time, plan_unlimited, validate_trajectory, NetworkMap, Objective, Point, Step, Terminal,
    Trajectory, UavParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn corridor(cs: &[(f64, f64, f64)]) -> NetworkMap {
    NetworkMap {
        d0: 1400.0,
        stations: (0..7)
            .map(|k| BaseStation {
                position: Point::new(2000.0 * k as f64, 0.0),
                offset: 0.0,
            })
            .collect(),
        charging: cs
            .iter()
            .map(|&(x, y, tau)| ChargingStation::new(Point::new(x, y), tau))
            .collect(),
        u0: Point::new(0.0, 0.0),
        uf: Point::new(12000.0, 0.0),
        altitude: 100.0,
        cs_altitude: 100.0,
    }
}

#[test]
fn global_level_matches_enumeration() {
    let uav = small_battery_uav();
    let mut with_swaps = 0;
    let maps = suite(&uav, 20, 6000.0, 8, 4)
        .into_iter()
        .chain(swap_suite(&uav, 20, 6000.0));
    for map in maps {
        for objective in [Objective::Time, Objective::Energy] {
            let plan = match objective {
                Objective::Time => plan_min_time(&map, &uav).unwrap(),
                Objective::Energy => plan_min_energy(&map, &uav).unwrap(),
            };
            assert!(plan.feasible);
            assert_eq!(plan.value, brute_force(&map, &uav, &plan, objective));
            if plan.swap_count() > 0 {
                with_swaps += 1;
            }
        }
    }
    assert!(with_swaps >= 20, "suite barely exercises swaps ({with_swaps})");
}

#[test]
fn every_plan_validates() {
    let reference = UavParams::reference();
    let small = small_battery_uav();
    let cases = [
        (&reference, suite(&reference, 25, 8000.0, 10, 3)),
        (&small, suite(&small, 15, 6000.0, 10, 3)),
        (&small, swap_suite(&small, 15, 6000.0)),
    ];
    for (uav, maps) in cases {
        for map in maps {
            let plans = [
                plan_unlimited(&map, uav.speeds.max()).unwrap(),
                plan_min_time(&map, &uav).unwrap(),
                plan_min_energy(&map, &uav).unwrap(),
            ];
            // the unlimited plan ignores the battery, so only check it
            // against a UAV that cannot run out
            let mut unlimited = uav.clone();
            unlimited.battery.r_safe = 1e-9;
            for (k, p) in plans.iter().enumerate() {
                assert!(p.feasible);
                let who = if k == 0 { &unlimited } else { uav };
                let rep = validate_trajectory(&map, who, &p.trajectory);
                assert!(rep.pass, "plan {k}: {:?}", rep.violations);
            }
        }
    }
}

#[test]
fn time_and_energy_dominate_each_other() {
    let uav = small_battery_uav();
    for map in swap_suite(&uav, 25, 6000.0) {
        let t = plan_min_time(&map, &uav).unwrap();
        let e = plan_min_energy(&map, &uav).unwrap();
        assert_eq!(t.feasible, e.feasible);
        let tol = 1e-9;
        assert!(e.value <= t.trajectory.total_energy(&uav) * (1.0 + tol));
        assert!(t.value <= e.trajectory.total_time() * (1.0 + tol));
        assert!((t.trajectory.total_time() - t.value).abs() <= tol * t.value);
        assert!((e.trajectory.total_energy(&uav) - e.value).abs() <= tol * e.value);
    }
}

#[test]
fn energy_plans_cruise_at_the_economical_speed() {
    let uav = small_battery_uav();
    let v_eff = uav.energy_optimal_speed();
    for map in suite(&uav, 15, 6000.0, 8, 4)
        .into_iter()
        .chain(swap_suite(&uav, 15, 6000.0))
    {
        let plan = plan_min_energy(&map, &uav).unwrap();
        let mut steps = plan.trajectory.steps.iter();
        for hop in plan.visits.windows(2) {
            let route = plan
                .local_routes
                .iter()
                .find(|r| r.from == hop[0] && r.to == hop[1])
                .unwrap();
            let reach = v_eff * uav.battery.eta * stretch_budget(&map, &uav, hop[0]) / uav.power_at(v_eff);
            let legs = route.path.len().saturating_sub(1);
            for _ in 0..legs {
                let Some(Step::Flight(l)) = steps.next() else {
                    panic!("expected a leg");
                };
                if route.length <= reach {
                    assert_eq!(l.speed, v_eff);
                }
            }
            if matches!(hop[1], Terminal::Station(_)) {
                assert!(matches!(steps.next(), Some(Step::Swap(_))));
            }
        }
    }
}

#[test]
fn removing_stations_or_raising_delays_never_helps() {
    let uav = small_battery_uav();
    for map in swap_suite(&uav, 20, 6000.0) {
        let base = plan_min_time(&map, &uav).unwrap().value;
        for n in 0..map.charging.len() {
            let without = plan_min_time(&map.without_charging(n), &uav).unwrap();
            assert!(without.value >= base);
            let mut slower = map.clone();
            slower.charging[n].delay += 37.5;
            assert!(plan_min_time(&slower, &uav).unwrap().value >= base);
            let mut faster = map.clone();
            faster.charging[n].delay *= 0.5;
            assert!(plan_min_time(&faster, &uav).unwrap().value <= base);
        }
    }
}

#[test]
fn expensive_station_is_avoided() {
    let uav = UavParams::reference();
    let mut map = corridor(&[(6000.0, 0.0, 100.0), (5500.0, 300.0, 150.0)]);
    let cheap = plan_min_time(&map, &uav).unwrap();
    assert_eq!(
        cheap.visits,
        vec![Terminal::Start, Terminal::Station(0), Terminal::Goal]
    );
    assert!((cheap.value - 500.0).abs() < 1e-9);

    map.charging[0].delay = 200.0;
    let dear = plan_min_time(&map, &uav).unwrap();
    assert_eq!(dear.visits, vec![Terminal::Start, Terminal::Station(1), Terminal::Goal]);
    let via = Point::new(5500.0, 300.0);
    let want = (map.u0.dist(via) + via.dist(map.uf)) / 30.0 + 150.0;
    assert!((dear.value - want).abs() < 1e-9);
    assert!(dear.value >= cheap.value);
}

#[test]
fn one_mandatory_swap() {
    let uav = UavParams::reference();
    let map = corridor(&[(6000.0, 0.0, 100.0), (1000.0, 500.0, 10.0)]);
    let plan = plan_min_time(&map, &uav).unwrap();
    assert_eq!(plan.swap_count(), 1);
    assert_eq!(plan.value, brute_force(&map, &uav, &plan, Objective::Time));
    assert!((plan.value - (6000.0 / 30.0 + 100.0 + 6000.0 / 30.0)).abs() < 1e-9);
}

#[test]
fn jensen_on_random_splits() {
    let uav = UavParams::reference();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let k = rng.gen_range(1..=5);
        let splits: Vec<(f64, f64)> = (0..k)
            .map(|_| (rng.gen_range(1.0..2000.0), rng.gen_range(15.0..=30.0)))
            .collect();
        let (mixed, fixed) = fixed_speed_energy_bound(&splits, &uav).unwrap();
        assert!(fixed <= mixed * (1.0 + 1e-9), "{splits:?}");
    }
}

/// Battery bookkeeping by brute-force time stepping.
fn integrate(map: &NetworkMap, uav: &UavParams, traj: &Trajectory, dt: f64) -> f64 {
    let mut budget = uav.flight_budget();
    let mut energy = budget;
    let mut worst = f64::INFINITY;
    for s in &traj.steps {
        match s {
            Step::Flight(l) => {
                let p = uav.power_at(l.speed) / uav.battery.eta;
                let total = l.duration();
                let mut t = 0.0;
                while t + dt <= total {
                    energy -= p * dt;
                    t += dt;
                }
                energy -= p * (total - t);
            }
            Step::Swap(ev) => {
                worst = worst.min(energy);
                budget = stretch_budget(map, uav, Terminal::Station(ev.station));
                energy = budget;
            }
        }
    }
    worst.min(energy)
}

#[test]
fn validator_battery_matches_time_stepping() {
    let uav = UavParams::reference();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut map = NetworkMap {
        d0: 50_000.0,
        stations: vec![BaseStation {
            position: Point::new(0.0, 0.0),
            offset: 0.0,
        }],
        charging: (0..3)
            .map(|k| ChargingStation::new(Point::new(3000.0 * k as f64 - 3000.0, 2000.0), 60.0))
            .collect(),
        u0: Point::new(0.0, 0.0),
        uf: Point::new(0.0, 0.0),
        altitude: 100.0,
        cs_altitude: 100.0,
    };
    map.charging[1].energy_surcharge = 5000.0;
    for _ in 0..100 {
        let mut traj = Trajectory::default();
        let mut here = map.u0;
        for _ in 0..rng.gen_range(1..8) {
            let next = if rng.gen_bool(0.3) {
                let n = rng.gen_range(0..3);
                Some(n)
            } else {
                None
            };
            let to = match next {
                Some(n) => map.charging[n].position,
                None => Point::new(rng.gen_range(-4000.0..4000.0), rng.gen_range(-4000.0..4000.0)),
            };
            let v = f64::from(rng.gen_range(1..=30));
            traj.push_polyline(&[here, to], v);
            here = to;
            if let Some(n) = next {
                traj.steps.push(Step::Swap(covroute::SwapEvent {
                    station: n,
                    dwell: 60.0,
                }));
            }
        }
        map.uf = here;
        let rep = validate_trajectory(&map, &uav, &traj);
        let stepped = integrate(&map, &uav, &traj, 0.01);
        let scale = uav.flight_budget();
        assert!(
            (rep.min_battery_margin - stepped).abs() <= 1e-6 * scale,
            "{} vs {}",
            rep.min_battery_margin,
            stepped
        );
        assert_eq!(rep.battery, stepped >= -1e-9 * scale);
    }
}
