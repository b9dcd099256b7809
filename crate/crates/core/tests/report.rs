use localfactors::padic::ExtKind;
use localfactors::report::*;

fn small() -> RunConfig {
    RunConfig::parse(
        "# one prime, two extensions\nprimes = 3\next_kinds = unramified, ramified_up\nweil_forms = 3\nweil_lambdas = 2\n\
         epsilon_samples = 3\ncross_check_samples = 3\nlemma_231_instances = 1\nparams_samples = 2\nggp_pairs = 2\n",
    )
    .unwrap()
}

#[test]
fn defaults_match_the_documented_sweep() {
    let c = RunConfig::default();
    assert_eq!(c.primes, vec![3, 5, 7]);
    assert_eq!(c.ext_kinds, ExtKind::ALL.to_vec());
    assert_eq!((c.max_conductor, c.max_order), (2, 12));
    assert!(c.validate().is_ok());
    assert_eq!(c.fields().len(), 9);
}

#[test]
fn parse_reads_keys_and_comments() {
    let c = small();
    assert_eq!(c.primes, vec![3]);
    assert_eq!(c.ext_kinds, vec![ExtKind::Unramified, ExtKind::RamifiedUp]);
    assert_eq!(c.weil_forms, 3);
    assert_eq!(c.tolerance, 1e-8);
}

#[test]
fn invalid_configurations_name_the_constraint() {
    let err = RunConfig::parse("primes = 3, 2\n").unwrap_err();
    assert!(matches!(&err, ConfigError::BadValue { key, reason } if key == "primes" && reason.contains("odd prime")));
    assert!(matches!(RunConfig::parse("primes = 9\n"), Err(ConfigError::BadValue { .. })));
    assert!(matches!(RunConfig::parse("tolerance = 1e-13\n"), Err(ConfigError::BadValue { key, .. }) if key == "tolerance"));
    assert!(matches!(RunConfig::parse("tolerance = 1e-3\n"), Err(ConfigError::BadValue { key, .. }) if key == "tolerance"));
    assert!(matches!(RunConfig::parse("precision = 7\n"), Err(ConfigError::BadValue { key, .. }) if key == "precision"));
    assert!(matches!(RunConfig::parse("ext_kinds = cubic\n"), Err(ConfigError::BadValue { .. })));
    assert!(matches!(RunConfig::parse("just words\n"), Err(ConfigError::Syntax { line: 1, .. })));
    assert!(matches!(RunConfig::parse("shade = 3\n"), Err(ConfigError::UnknownKey(_))));
    assert!(matches!(RunConfig::parse("suites = weil, all\n"), Err(ConfigError::BadValue { .. })));
}

#[test]
fn suite_names_round_trip() {
    for s in Suite::EACH.into_iter().chain([Suite::All]) {
        assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        assert_eq!(serde_json::to_value(s).unwrap(), s.name());
    }
    assert!("weyl".parse::<Suite>().is_err());
}

#[test]
fn every_suite_passes_on_a_small_sweep() {
    let c = small();
    let report = run_suite(&c, Suite::All).unwrap();
    let s = &report.summary;
    assert_eq!(s.passed + s.failed + s.errors, s.total);
    assert_eq!(s.total, report.items.len());
    assert!(report.all_passed(), "{}", report.to_jsonl());
    for suite in Suite::EACH {
        assert!(report.items.iter().any(|i| i.suite == suite), "{suite} produced no items");
    }
    for item in &report.items {
        assert!(!item.anchor.is_empty());
        assert!(item.elapsed_ms.is_none());
    }
}

#[test]
fn reports_do_not_depend_on_the_pool_size() {
    let mut c = small();
    c.suites = vec![Suite::Weil, Suite::Ggp];
    let a = run_suite(&c, Suite::All).unwrap().to_jsonl();
    c.threads = 2;
    let b = run_suite(&c, Suite::All).unwrap().to_jsonl();
    let body = |s: &str| s.lines().filter(|l| !l.contains("\"kind\":\"summary\"")).map(str::to_owned).collect::<Vec<_>>();
    assert_eq!(body(&a), body(&b));
    assert_eq!(run_suite(&c, Suite::All).unwrap().to_jsonl(), b);
}

#[test]
fn timing_is_opt_in() {
    let mut c = small();
    c.timing = true;
    let report = run_suite(&c, Suite::Weil).unwrap();
    assert!(report.items.iter().all(|i| i.elapsed_ms.is_some()));
}

#[test]
fn jsonl_ends_with_the_summary() {
    let report = run_suite(&small(), Suite::Epsilon).unwrap();
    let text = report.to_jsonl();
    let last: serde_json::Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
    assert_eq!(last["kind"], "summary");
    assert_eq!(last["suite"], "epsilon");
    assert_eq!(text.lines().count(), report.items.len() + 1);
}
