//! Property batteries behind the `suite` subcommand.
//!
//! Each battery audits one statement the certificate machinery relies on,
//! writes a CSV report, and counts violations. Identical flags and seed
//! produce byte-identical reports.

use std::fs;
use std::io;
use std::path::PathBuf;

use verbal::{
    audit_pair_bounds, certify_svl_positive, certify_vl_lower_bound, cross_check_certificate,
    exceptional_indices, family_pattern, family_qm, verbal_values_bounded, vl_upper_bound,
    witness, CountingQM, Mode, SearchBudget, SplitMix64, Verdict, Word, WordMap,
};

pub struct SuiteConfig {
    pub seed: u64,
    pub k: u32,
    pub trials: u32,
    pub radius: usize,
    pub m: u32,
    pub budget: SearchBudget,
    pub out_dir: PathBuf,
}

struct Battery {
    name: &'static str,
    checks: &'static str,
    csv: String,
    cases: u64,
    failures: u64,
}

impl Battery {
    fn new(name: &'static str, checks: &'static str, header: &str) -> Self {
        Battery { name, checks, csv: format!("{header}\n"), cases: 0, failures: 0 }
    }

    fn record(&mut self, ok: bool) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
        }
    }

    fn row(&mut self, line: &str) {
        self.csv.push_str(line);
        self.csv.push('\n');
    }

    fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn rng_for(config: &SuiteConfig, battery_index: u64) -> SplitMix64 {
    // one independent deterministic stream per battery
    SplitMix64::new(config.seed.wrapping_mul(0x1000) ^ battery_index)
}

fn random_word(rng: &mut SplitMix64, max_len: u64) -> Word {
    let len = rng.below(max_len + 1) as usize;
    rng.random_reduced_word(2, len)
}

/// Scores of each detector on its own powers grow exactly linearly.
fn battery_pattern_powers(_: &SuiteConfig) -> Battery {
    let mut battery = Battery::new(
        "pattern_powers",
        "detector quasi-morphisms score their own pattern powers linearly",
        "i,n,mode,value",
    );
    for i in 1..=3u32 {
        let pattern = family_pattern(i);
        for mode in [Mode::Linear, Mode::Cyclic] {
            let qm = CountingQM::new(pattern.clone(), mode).unwrap();
            for n in 1..=10i64 {
                let value = qm.value(&pattern.pow(n));
                battery.record(value == n);
                battery.row(&format!("{i},{n},{mode},{value}"));
            }
        }
    }
    battery
}

/// Additivity defect of the first ten detectors never exceeds 3.
fn battery_defect_bound(config: &SuiteConfig) -> Battery {
    let mut battery = Battery::new(
        "defect_bound",
        "additivity defect of the detector family stays within 3",
        "scope,pairs,max_abs_defect",
    );
    let qms: Vec<_> = (1..=10).map(family_qm).collect();
    let scan = |battery: &mut Battery, scope: &str, pairs: &[(Word, Word)]| {
        let mut max_defect = 0i64;
        for (x, y) in pairs {
            let xy = x.mul(y);
            for (idx, qm) in qms.iter().enumerate() {
                let defect = qm.value(&xy) - qm.value(x) - qm.value(y);
                battery.record(defect.abs() <= 3);
                if defect.abs() > 3 {
                    battery.row(&format!("violation i={} x={x} y={y} defect={defect},,", idx + 1));
                }
                max_defect = max_defect.max(defect.abs());
            }
        }
        battery.row(&format!("{scope},{},{max_defect}", pairs.len()));
    };

    let ball = verbal::enumerate_ball(2, config.radius, 1_000_000).expect("radius guard");
    let exhaustive: Vec<(Word, Word)> = ball
        .iter()
        .flat_map(|x| ball.iter().map(move |y| (x.clone(), y.clone())))
        .collect();
    scan(&mut battery, "exhaustive", &exhaustive);

    let mut rng = rng_for(config, 2);
    let random: Vec<(Word, Word)> = (0..config.trials)
        .map(|_| (random_word(&mut rng, 20), random_word(&mut rng, 20)))
        .collect();
    scan(&mut battery, "random", &random);
    battery
}

/// At most three detector indices break additivity on any pair.
fn battery_exceptional_indices(config: &SuiteConfig) -> Battery {
    let mut battery = Battery::new(
        "exceptional_indices",
        "at most 3 detector indices break additivity per pair",
        "sizes,count",
    );
    let mut rng = rng_for(config, 3);
    let mut histogram = [0u64; 4];
    let mut pairs: Vec<(Word, Word)> = vec![(
        Word::parse("abbabb", 2).unwrap(),
        Word::parse("babba", 2).unwrap(),
    )];
    pairs.extend(
        (0..config.trials).map(|_| (random_word(&mut rng, 12), random_word(&mut rng, 12))),
    );
    for (y, z) in &pairs {
        let set = exceptional_indices(y, z, config.k);
        battery.record(set.len() <= 3);
        if set.len() <= 3 {
            histogram[set.len()] += 1;
        } else {
            let spelled: Vec<String> = set.iter().map(|i| i.to_string()).collect();
            battery.row(&format!("violation y={y} z={z} indices={},", spelled.join(" ")));
        }
    }
    for (size, count) in histogram.iter().enumerate() {
        battery.row(&format!("{size},{count}"));
    }
    battery
}

/// Non-vanishing bicombing counts stay within L, 2L, and 3L + 3.
fn battery_pair_bounds(config: &SuiteConfig) -> Battery {
    let mut battery = Battery::new(
        "pair_bounds",
        "bicombing non-vanishing counts stay within L / 2L / 3L+3",
        "trial,L,single,pair,triple,ok",
    );
    let mut rng = rng_for(config, 4);
    let mut worst = (0u64, 0u64, 0u64);
    for trial in 0..config.trials {
        let endpoints = |rng: &mut SplitMix64| {
            let base = random_word(rng, 10);
            let offset = random_word(rng, 6);
            let far = base.mul(&offset);
            (base, far)
        };
        let x = endpoints(&mut rng);
        let y = endpoints(&mut rng);
        let z = endpoints(&mut rng);
        let audit = audit_pair_bounds((&x.0, &x.1), (&y.0, &y.1), (&z.0, &z.1), config.k);
        battery.record(audit.all_ok());
        if !audit.all_ok() {
            battery.row(&format!(
                "{trial},{},{},{},{},false",
                audit.max_pair_distance,
                audit.nonzero_single,
                audit.nonzero_pair,
                audit.nonzero_triple
            ));
        }
        worst = (
            worst.0.max(audit.nonzero_single),
            worst.1.max(audit.nonzero_pair),
            worst.2.max(audit.nonzero_triple),
        );
    }
    battery.row(&format!("worst,,{},{},{},", worst.0, worst.1, worst.2));
    battery
}

/// Values on single verbal values are divisible by the degree outside a
/// bounded index set.
fn battery_divisibility(config: &SuiteConfig) -> Battery {
    let mut battery = Battery::new(
        "divisibility",
        "degree divides detector values on single values outside 3(|w|-1) indices",
        "trial,w,bad_count,bound",
    );
    let mut rng = rng_for(config, 5);
    for trial in 0..config.trials {
        let map = loop {
            let len = 2 + rng.below(4) as usize;
            let candidate = rng.random_word_map(2, len);
            if candidate.exponent_data().degree >= 2 {
                break candidate;
            }
        };
        let args: Vec<Word> = (0..map.arity()).map(|_| random_word(&mut rng, 4)).collect();
        let value = map.substitute(&args).unwrap();
        let degree = map.exponent_data().degree as i64;
        let bad = (1..=config.k).filter(|&i| family_qm(i).value(&value) % degree != 0).count();
        let bound = 3 * (map.len() as u64 - 1);
        battery.record(bad as u64 <= bound);
        if bad as u64 > bound {
            battery.row(&format!("{trial},{map},{bad},{bound}"));
        }
    }
    battery.row(&format!("checked,,{},", battery.cases));
    battery
}

/// The witness word scores 1 on the first K detectors and 0 afterwards.
fn battery_witness_values(config: &SuiteConfig) -> Battery {
    let mut battery = Battery::new(
        "witness_values",
        "witness scores 1 on the first K detectors and 0 on the next 40",
        "i,value,expected",
    );
    let map = WordMap::parse("x1 x2 x1 x2^-1").unwrap();
    let h = witness(&map, config.k).expect("witness construction");
    for i in 1..=(config.k + 40) {
        let value = family_qm(i).value(&h);
        let expected = if i <= config.k { 1 } else { 0 };
        battery.record(value == expected);
        battery.row(&format!("{i},{value},{expected}"));
    }
    battery
}

/// Bézout arguments express the degree-th power as one verbal value.
fn battery_bezout_power(config: &SuiteConfig) -> Battery {
    let mut battery = Battery::new(
        "bezout_power",
        "the degree-th power of any element is a single verbal value",
        "trial,w,degree,ok",
    );
    let mut rng = rng_for(config, 7);
    for trial in 0..config.trials {
        let map = loop {
            let arity = 1 + rng.below(3) as u8;
            let len = 1 + rng.below(6) as usize;
            let candidate = rng.random_word_map(arity, len);
            if candidate.exponent_data().degree >= 1 {
                break candidate;
            }
        };
        let g = random_word(&mut rng, 8);
        let degree = map.exponent_data().degree;
        let args = map.power_as_verbal_value(&g).expect("degree checked");
        let ok = map.substitute(&args).unwrap() == g.pow(degree as i64);
        battery.record(ok);
        if !ok {
            battery.row(&format!("{trial},{map},{degree},false"));
        }
    }
    battery.row(&format!("checked,,{},", battery.cases));
    battery
}

/// Stable evidence: power scores grow linearly and the bound is positive.
fn battery_svl_evidence(_: &SuiteConfig) -> Battery {
    let mut battery = Battery::new(
        "svl_evidence",
        "degree-0 maps admit elements with linearly growing scores and a positive stable bound",
        "w,n,value,ok",
    );
    for (text, search_len) in [("[x1,x2]", 4), ("[[x1,x2],[x3,x4]]", 2)] {
        let map = WordMap::parse(text).unwrap();
        match certify_svl_positive(&map, 8, search_len) {
            Ok(evidence) => {
                for (n, value) in &evidence.powers {
                    battery.record(*value >= i64::from(*n));
                    battery.row(&format!("{map},{n},{value},{}", *value >= i64::from(*n)));
                }
                let (numerator, denominator) = evidence.bound();
                battery.record(numerator == 1 && denominator > 0);
                battery.row(&format!("{map},bound,1/{denominator},{}", denominator > 0));
            }
            Err(err) => {
                battery.record(false);
                battery.row(&format!("{map},error,{err},false"));
            }
        }
    }
    battery
}

/// Brute-force upper bounds never undercut certified lower bounds.
fn battery_oracle_consistency(config: &SuiteConfig) -> Battery {
    let mut battery = Battery::new(
        "oracle_consistency",
        "bounded factor searches stay above certified lower bounds",
        "case,lower,upper,ok",
    );
    let map = WordMap::parse("x1 x2 x1 x2^-1").unwrap();
    for k in 1..=4u32 {
        let h = witness(&map, k).expect("witness construction");
        let cert = certify_vl_lower_bound(&map, &h, k, config.m).expect("certificate");
        let budget = SearchBudget {
            max_factor_len: 2 * k as usize + 2,
            max_product_factors: 2 * k,
            max_states: config.budget.max_states.max(200_000),
        };
        match cross_check_certificate(&cert, &budget) {
            Verdict::Consistent { upper_bound: Some(upper) } => {
                let ok = u64::from(upper) >= cert.lower_bound && upper <= 2 * k;
                battery.record(ok);
                battery.row(&format!("witness_K{k},{},{upper},{ok}", cert.lower_bound));
            }
            verdict => {
                battery.record(false);
                battery.row(&format!("witness_K{k},{},{},false", cert.lower_bound, verdict));
            }
        }
    }

    // explicit products of n bounded values are found with at most n factors
    let mut rng = rng_for(config, 9);
    let pool = ["[x1,x2]", "x1^2", "x1 x2 x1 x2^-1"];
    let budget =
        SearchBudget { max_factor_len: 1, max_product_factors: 3, max_states: 500_000 };
    for trial in 0..config.trials.min(200) {
        let map = WordMap::parse(pool[rng.below(pool.len() as u64) as usize]).unwrap();
        let values: Vec<Word> =
            verbal_values_bounded(&map, 2, &budget).expect("tiny budget").into_iter().collect();
        let factors = 1 + rng.below(3);
        let mut product = Word::identity(2);
        for _ in 0..factors {
            let pick = values[rng.below(values.len() as u64) as usize].clone();
            product = if rng.below(2) == 0 { product.mul(&pick) } else { product.mul(&pick.inverse()) };
        }
        match vl_upper_bound(&map, &product, &budget) {
            Ok(Some(upper)) => {
                let ok = u64::from(upper) <= factors;
                battery.record(ok);
                if !ok {
                    battery.row(&format!("product_{trial},{factors},{upper},false"));
                }
            }
            outcome => {
                battery.record(false);
                let detail = format!("{outcome:?}").replace(',', ";");
                battery.row(&format!("product_{trial},{factors},{detail},false"));
            }
        }
    }
    battery.row(&format!("checked,,{},", battery.cases));
    battery
}

pub fn run(config: &SuiteConfig) -> io::Result<bool> {
    fs::create_dir_all(&config.out_dir)?;
    let batteries: Vec<Battery> = vec![
        battery_pattern_powers(config),
        battery_defect_bound(config),
        battery_exceptional_indices(config),
        battery_pair_bounds(config),
        battery_divisibility(config),
        battery_witness_values(config),
        battery_bezout_power(config),
        battery_svl_evidence(config),
        battery_oracle_consistency(config),
    ];

    let mut summary = String::from("battery,checks,cases,failures,status\n");
    let mut all_ok = true;
    for battery in &batteries {
        fs::write(config.out_dir.join(format!("{}.csv", battery.name)), &battery.csv)?;
        let status = if battery.passed() { "pass" } else { "fail" };
        summary.push_str(&format!(
            "{},{},{},{},{}\n",
            battery.name, battery.checks, battery.cases, battery.failures, status
        ));
        println!(
            "battery {}: {} ({} cases, {} failures)",
            battery.name,
            if battery.passed() { "PASS" } else { "FAIL" },
            battery.cases,
            battery.failures
        );
        all_ok &= battery.passed();
    }
    fs::write(config.out_dir.join("summary.csv"), &summary)?;
    if all_ok {
        println!("suite: PASS, reports in {}", config.out_dir.display());
    } else {
        println!("suite: FAIL, counterexamples in {}", config.out_dir.display());
    }
    Ok(all_ok)
}
