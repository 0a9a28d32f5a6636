use contraswarm::scenarios::pd::{PdAgent, PdAgentState};
use contraswarm::scenarios::{AntConfig, AntsScenario, GeeseScenario, GooseConfig, PdConfig, PdScenario, Scenario};
use proptest::prelude::*;

fn small_ants() -> AntConfig {
    AntConfig {
        grid: 24,
        ants: 20,
        units_per_source: 15,
        source_min_distance: 6,
        ..AntConfig::default()
    }
}

fn small_pd(mobile: bool) -> PdConfig {
    PdConfig {
        grid: 20,
        population: 150,
        mobile,
        ..PdConfig::default()
    }
}

fn sharpness_in_range(s: &dyn Scenario) {
    let snap = s.snapshot();
    for name in s.contradiction_names() {
        for v in snap.values(&name) {
            assert!(v > -1.0 && v < 1.0, "{name}: {v}");
        }
    }
}

fn trace(mut s: Box<dyn Scenario>, steps: u64) -> Vec<String> {
    let mut out = Vec::new();
    for _ in 0..steps {
        s.step().unwrap();
        out.push(s.world_state().to_string());
    }
    out
}

#[test]
fn every_scenario_replays_exactly_from_its_seed() {
    let build: [fn(u64) -> Box<dyn Scenario>; 3] = [
        |seed| Box::new(AntsScenario::new(small_ants(), seed).unwrap()),
        |seed| Box::new(GeeseScenario::new(GooseConfig::default(), seed).unwrap()),
        |seed| Box::new(PdScenario::new(small_pd(true), seed).unwrap()),
    ];
    for make in build {
        assert_eq!(trace(make(11), 40), trace(make(11), 40));
        assert_ne!(trace(make(11), 40), trace(make(12), 40));
    }
}

#[test]
fn ants_conserve_food_and_never_lose_deliveries() {
    for seed in 0..3 {
        let mut s = AntsScenario::new(small_ants(), seed).unwrap();
        let mut delivered = 0;
        for _ in 0..400 {
            s.step().unwrap();
            assert!(s.conservation_holds());
            let ledger = s.ledger();
            assert!(ledger.delivered >= delivered);
            assert!(ledger.picked_up >= ledger.delivered);
            delivered = ledger.delivered;
            let mut cells: Vec<_> = s.ants().iter().map(|a| a.properties.cell).collect();
            let nest = s.ants()[0].properties.nest;
            cells.retain(|c| *c != nest);
            let n = cells.len();
            cells.sort_unstable();
            cells.dedup();
            assert_eq!(cells.len(), n, "two ants share a cell");
        }
        assert!(delivered > 0, "seed {seed} delivered nothing");
        sharpness_in_range(&s);
    }
}

#[test]
fn pd_fraction_matches_the_agent_states() {
    let mut s = PdScenario::new(small_pd(false), 3).unwrap();
    for _ in 0..20 {
        s.step().unwrap();
        let coop = s.agents().iter().filter(|a| a.state.cooperates()).count();
        assert_eq!(s.cooperation_fraction(), coop as f64 / 150.0);
        let cap = PdConfig::default().intention_max;
        assert!(s.agents().iter().all(|a| a.state.intention.abs() <= cap));
    }
    sharpness_in_range(&s);
}

#[test]
fn pd_unanimous_cooperators_stay_cooperative() {
    let agents: Vec<PdAgent> = (0..100)
        .map(|i| PdAgent {
            x: i % 10,
            y: i / 10,
            state: PdAgentState {
                intention: 2,
                ..PdAgentState::default()
            },
        })
        .collect();
    let mut s = PdScenario::from_agents(PdConfig { grid: 10, population: 100, ..PdConfig::default() }, 0, agents).unwrap();
    for _ in 0..10 {
        s.step().unwrap();
        assert_eq!(s.cooperation_fraction(), 1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn geese_keep_their_flock_and_speed_limits(seed in any::<u64>(), flock in 10usize..=20) {
        let cfg = GooseConfig { flock, ..GooseConfig::default() };
        let (lo, hi) = (cfg.speed_min, cfg.speed_max);
        let mut s = GeeseScenario::new(cfg, seed).unwrap();
        for _ in 0..60 {
            s.step().unwrap();
            prop_assert_eq!(s.birds().len(), flock);
            for b in s.birds() {
                prop_assert!(b.properties.speed >= lo - 1e-12 && b.properties.speed <= hi + 1e-12);
                prop_assert!(b.properties.x.is_finite() && b.properties.y.is_finite());
            }
        }
        prop_assert_eq!(s.snapshot().agents().len(), flock);
    }

    #[test]
    fn pd_fraction_stays_a_fraction(seed in any::<u64>(), mobile in any::<bool>(), population in 10usize..200) {
        let mut s = PdScenario::new(PdConfig { population, ..small_pd(mobile) }, seed).unwrap();
        for _ in 0..5 {
            s.step().unwrap();
            let f = s.cooperation_fraction();
            prop_assert!((0.0..=1.0).contains(&f));
        }
        prop_assert_eq!(s.steps_done(), 5);
    }
}
