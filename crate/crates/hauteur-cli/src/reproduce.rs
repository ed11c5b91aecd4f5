//! The `reproduce` suite: eight rows that recompute the bundled reference
//! values and compare them, at the recorded tolerances, against the golden
//! files shipped with the binary (or a caller-supplied golden directory).

use std::path::PathBuf;

use num::bigint::BigUint;
use num::rational::BigRational;
use num::traits::{Signed, ToPrimitive};
use serde::Deserialize;

use hauteur::compositum::{crude_bound, inertia_bound, ExtensionMultiset};
use hauteur::density::{natural_density, DensityQuery, SplittingKind};
use hauteur::exactmath::Factorization;
use hauteur::heightbound::evaluate_scenario;
use hauteur::krasner::{self, LocalField};

use crate::scenario::load_scenario;
use crate::CliError;

pub const ROW_NAMES: [&str; 8] = [
    "ex3_1",
    "ex3_2",
    "ex3_3",
    "ex3_4",
    "appendix_q11",
    "appendix_q5",
    "krasner_values",
    "density_values",
];

pub const SCENARIO_EX3_1: &str = include_str!("../scenarios/ex3_1.scenario");
pub const SCENARIO_EX3_2: &str = include_str!("../scenarios/ex3_2.scenario");
pub const SCENARIO_EX3_3: &str = include_str!("../scenarios/ex3_3.scenario");
pub const SCENARIO_EX3_4: &str = include_str!("../scenarios/ex3_4.scenario");

const GOLDENS: [(&str, &str); 8] = [
    ("ex3_1", include_str!("../goldens/ex3_1.toml")),
    ("ex3_2", include_str!("../goldens/ex3_2.toml")),
    ("ex3_3", include_str!("../goldens/ex3_3.toml")),
    ("ex3_4", include_str!("../goldens/ex3_4.toml")),
    ("appendix_q11", include_str!("../goldens/appendix_q11.toml")),
    ("appendix_q5", include_str!("../goldens/appendix_q5.toml")),
    (
        "krasner_values",
        include_str!("../goldens/krasner_values.toml"),
    ),
    (
        "density_values",
        include_str!("../goldens/density_values.toml"),
    ),
];

/// Where golden files come from: the copies embedded at build time, or a
/// directory of `<row>.toml` files.
pub struct GoldenSource {
    pub dir: Option<PathBuf>,
}

impl GoldenSource {
    fn text(&self, row: &str) -> Result<String, String> {
        match &self.dir {
            None => GOLDENS
                .iter()
                .find(|(name, _)| *name == row)
                .map(|(_, text)| text.to_string())
                .ok_or_else(|| format!("no embedded golden for row {row}")),
            Some(dir) => {
                let path = dir.join(format!("{row}.toml"));
                std::fs::read_to_string(&path)
                    .map_err(|e| format!("cannot read golden {}: {e}", path.display()))
            }
        }
    }

    fn load<T: serde::de::DeserializeOwned>(&self, row: &str) -> Result<T, String> {
        let text = self.text(row)?;
        toml::from_str(&text).map_err(|e| format!("golden {row} does not parse: {e}"))
    }
}

pub struct RowResult {
    pub name: &'static str,
    pub pass: bool,
    pub details: Vec<String>,
}

struct Checker {
    pass: bool,
    details: Vec<String>,
}

impl Checker {
    fn new() -> Self {
        Checker {
            pass: true,
            details: Vec::new(),
        }
    }

    fn fail(&mut self, message: String) {
        self.pass = false;
        self.details.push(message);
    }

    fn eq_str(&mut self, what: &str, got: &str, expected: &str) {
        if got != expected {
            self.fail(format!("{what}: expected {expected}, got {got}"));
        }
    }

    fn eq_u64(&mut self, what: &str, got: u64, expected: u64) {
        if got != expected {
            self.fail(format!("{what}: expected {expected}, got {got}"));
        }
    }

    fn in_window(&mut self, what: &str, got: f64, lo: f64, hi: f64) {
        fn show(x: f64) -> String {
            if x == 0.0 || (1e-4..1e9).contains(&x.abs()) {
                format!("{x}")
            } else {
                format!("{x:.6e}")
            }
        }
        if !(lo <= got && got <= hi) {
            self.fail(format!(
                "{what} = {} outside the window [{}, {}]",
                show(got),
                show(lo),
                show(hi)
            ));
        }
    }

    fn finish(self, name: &'static str) -> RowResult {
        RowResult {
            name,
            pass: self.pass,
            details: self.details,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioGoldenExact {
    e_bound: String,
    f_bound: String,
    k: u64,
    lambda: u64,
    beta: String,
    ln_bound: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioGoldenWindow {
    e_bound: String,
    f_bound: String,
    #[serde(default)]
    f_value: Option<String>,
    k: u64,
    lambda: u64,
    beta: String,
    ln_lo: f64,
    ln_hi: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AppendixGolden {
    refined_log10_lo: f64,
    refined_log10_hi: f64,
    crude_log10_lo: f64,
    crude_log10_hi: f64,
    #[serde(default)]
    refined_below_crude: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KrasnerGolden {
    n_q5_d5: u64,
    n_q5_d10: u64,
    nr_q5_d5: u64,
    profile_q5_e5_f2: u64,
    nr_q5_d10: u64,
    nr_q3_d3: u64,
    consistency_q5_d10: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityGolden {
    inert_3_2: String,
    inert_3_3: String,
    inert_3_4: String,
    inert_3_5: String,
    inert_5_2: String,
    inert_5_3: String,
    inert_5_4: String,
    inert_5_5: String,
    inert_7_2: String,
    inert_7_3: String,
    inert_7_4: String,
    inert_7_5: String,
    asym_tol: String,
}

fn scenario_row_exact(
    name: &'static str,
    scenario_text: &str,
    goldens: &GoldenSource,
    rel_tol: f64,
) -> RowResult {
    let mut c = Checker::new();
    let golden: ScenarioGoldenExact = match goldens.load(name) {
        Ok(g) => g,
        Err(e) => {
            c.fail(e);
            return c.finish(name);
        }
    };
    let report = match load_scenario(scenario_text).and_then(|sc| Ok(evaluate_scenario(&sc)?)) {
        Ok(r) => r,
        Err(e) => {
            c.fail(format!("evaluation failed: {e}"));
            return c.finish(name);
        }
    };
    c.eq_str("e_bound", &report.e_bound.to_string(), &golden.e_bound);
    c.eq_str("f_bound", &report.f_bound.to_string(), &golden.f_bound);
    c.eq_u64("k", report.k, golden.k);
    c.eq_u64("lambda", report.lambda, golden.lambda);
    c.eq_str("beta", &report.beta.to_string(), &golden.beta);
    match golden.ln_bound.parse::<f64>() {
        Ok(expected) => {
            let got = report.ln_bound.to_f64();
            let rel = ((got - expected) / expected).abs();
            if rel.is_nan() || rel > rel_tol {
                c.fail(format!(
                    "ln_bound: expected {expected} within {rel_tol:.1e} relative, \
                     got {got} (deviation {rel:.3e})"
                ));
            }
        }
        Err(e) => c.fail(format!("golden ln_bound does not parse: {e}")),
    }
    c.finish(name)
}

fn scenario_row_window(
    name: &'static str,
    scenario_text: &str,
    goldens: &GoldenSource,
) -> RowResult {
    let mut c = Checker::new();
    let golden: ScenarioGoldenWindow = match goldens.load(name) {
        Ok(g) => g,
        Err(e) => {
            c.fail(e);
            return c.finish(name);
        }
    };
    let report = match load_scenario(scenario_text).and_then(|sc| Ok(evaluate_scenario(&sc)?)) {
        Ok(r) => r,
        Err(e) => {
            c.fail(format!("evaluation failed: {e}"));
            return c.finish(name);
        }
    };
    c.eq_str("e_bound", &report.e_bound.to_string(), &golden.e_bound);
    c.eq_str("f_bound", &report.f_bound.to_string(), &golden.f_bound);
    if let Some(expected_value) = &golden.f_value {
        match report.f_bound.expand() {
            Ok(v) => c.eq_str("f_value", &v.to_string(), expected_value),
            Err(e) => c.fail(format!("f_bound expansion failed: {e}")),
        }
    }
    c.eq_u64("k", report.k, golden.k);
    c.eq_u64("lambda", report.lambda, golden.lambda);
    c.eq_str("beta", &report.beta.to_string(), &golden.beta);
    c.in_window(
        "ln_bound",
        report.ln_bound.to_f64(),
        golden.ln_lo,
        golden.ln_hi,
    );
    c.finish(name)
}

fn appendix_row(name: &'static str, p: u64, goldens: &GoldenSource) -> RowResult {
    let mut c = Checker::new();
    let golden: AppendixGolden = match goldens.load(name) {
        Ok(g) => g,
        Err(e) => {
            c.fail(e);
            return c.finish(name);
        }
    };
    let result = (|| -> Result<(Factorization, Factorization), CliError> {
        let field = LocalField::new(p, 1)?;
        let profiles = krasner::enumerate_profiles(&field, 10)?;
        let ms = ExtensionMultiset::new(p, profiles)?;
        let refined = inertia_bound(&ms, &ms.f_lcm())?;
        let counts: Vec<(u64, BigUint)> = (1..=10)
            .map(|d| Ok((d, krasner::count_extensions(&field, d)?)))
            .collect::<Result<_, CliError>>()?;
        let crude = crude_bound(&counts)?;
        Ok((refined, crude))
    })();
    let (refined, crude) = match result {
        Ok(pair) => pair,
        Err(e) => {
            c.fail(format!("evaluation failed: {e}"));
            return c.finish(name);
        }
    };
    let refined_log10 = refined.log10_f64();
    let crude_log10 = crude.log10_f64();
    c.in_window(
        "refined bound log10",
        refined_log10,
        golden.refined_log10_lo,
        golden.refined_log10_hi,
    );
    c.in_window(
        "crude bound log10",
        crude_log10,
        golden.crude_log10_lo,
        golden.crude_log10_hi,
    );
    if golden.refined_below_crude {
        match refined.cmp_value(&crude) {
            Ok(std::cmp::Ordering::Less) => {}
            Ok(order) => c.fail(format!(
                "refined bound is not below the crude bound ({order:?})"
            )),
            Err(e) => c.fail(format!("factored comparison failed: {e}")),
        }
    }
    c.finish(name)
}

fn krasner_row(goldens: &GoldenSource) -> RowResult {
    let name = "krasner_values";
    let mut c = Checker::new();
    let golden: KrasnerGolden = match goldens.load(name) {
        Ok(g) => g,
        Err(e) => {
            c.fail(e);
            return c.finish(name);
        }
    };
    let q5 = LocalField::new(5, 1).expect("valid field");
    let q3 = LocalField::new(3, 1).expect("valid field");
    let pairs: [(&str, hauteur::Result<BigUint>, u64); 7] = [
        ("n_q5_d5", krasner::count_extensions(&q5, 5), golden.n_q5_d5),
        (
            "n_q5_d10",
            krasner::count_extensions(&q5, 10),
            golden.n_q5_d10,
        ),
        (
            "nr_q5_d5",
            krasner::count_totally_ramified(&q5, 5),
            golden.nr_q5_d5,
        ),
        (
            "profile_q5_e5_f2",
            krasner::count_with_profile(&q5, 5, 2),
            golden.profile_q5_e5_f2,
        ),
        (
            "nr_q5_d10",
            krasner::count_totally_ramified(&q5, 10),
            golden.nr_q5_d10,
        ),
        (
            "nr_q3_d3",
            krasner::count_totally_ramified(&q3, 3),
            golden.nr_q3_d3,
        ),
        (
            "consistency_q5_d10",
            (|| {
                let mut total = BigUint::from(0u32);
                for f in [1u64, 2, 5, 10] {
                    total += krasner::count_with_profile(&q5, 10 / f, f)?;
                }
                Ok(total)
            })(),
            golden.consistency_q5_d10,
        ),
    ];
    for (what, got, expected) in pairs {
        match got {
            Ok(v) => {
                if v != BigUint::from(expected) {
                    c.fail(format!("{what}: expected {expected}, got {v}"));
                }
            }
            Err(e) => c.fail(format!("{what}: computation failed: {e}")),
        }
    }
    c.finish(name)
}

fn density_row(goldens: &GoldenSource) -> RowResult {
    let name = "density_values";
    let mut c = Checker::new();
    let golden: DensityGolden = match goldens.load(name) {
        Ok(g) => g,
        Err(e) => {
            c.fail(e);
            return c.finish(name);
        }
    };
    let table: [(&str, u64, u32, &str); 12] = [
        ("inert_3_2", 3, 2, &golden.inert_3_2),
        ("inert_3_3", 3, 3, &golden.inert_3_3),
        ("inert_3_4", 3, 4, &golden.inert_3_4),
        ("inert_3_5", 3, 5, &golden.inert_3_5),
        ("inert_5_2", 5, 2, &golden.inert_5_2),
        ("inert_5_3", 5, 3, &golden.inert_5_3),
        ("inert_5_4", 5, 4, &golden.inert_5_4),
        ("inert_5_5", 5, 5, &golden.inert_5_5),
        ("inert_7_2", 7, 2, &golden.inert_7_2),
        ("inert_7_3", 7, 3, &golden.inert_7_3),
        ("inert_7_4", 7, 4, &golden.inert_7_4),
        ("inert_7_5", 7, 5, &golden.inert_7_5),
    ];
    for (what, p, n, expected) in table {
        let expected_value: BigRational = match expected.parse() {
            Ok(v) => v,
            Err(e) => {
                c.fail(format!("{what}: golden value does not parse: {e}"));
                continue;
            }
        };
        match DensityQuery::new(p, n, SplittingKind::Inert).and_then(|q| natural_density(&q)) {
            Ok(v) => {
                if v != expected_value {
                    c.fail(format!("{what}: expected {expected}, got {v}"));
                }
            }
            Err(e) => c.fail(format!("{what}: computation failed: {e}")),
        }
    }
    // Asymptotic normalization at p = 10^6 + 3.
    match golden.asym_tol.parse::<BigRational>() {
        Ok(tol) => {
            let p = 1_000_003u64;
            for n in 2..=5u32 {
                match DensityQuery::new(p, n, SplittingKind::Inert)
                    .and_then(|q| natural_density(&q))
                {
                    Ok(d) => {
                        let gap = (BigRational::from_integer((n as i64).into()) * &d
                            - BigRational::from_integer(1.into()))
                        .abs();
                        if gap >= tol {
                            c.fail(format!(
                                "asymptotic check n={n}: |n*d - 1| = {:.3e} not below {}",
                                gap.to_f64().unwrap_or(f64::NAN),
                                golden.asym_tol
                            ));
                        }
                    }
                    Err(e) => c.fail(format!("asymptotic check n={n} failed: {e}")),
                }
            }
        }
        Err(e) => c.fail(format!("asym_tol does not parse: {e}")),
    }
    c.finish(name)
}

/// Run one row by name.
pub fn run_row(name: &str, goldens: &GoldenSource) -> Result<RowResult, CliError> {
    match name {
        "ex3_1" => Ok(scenario_row_exact("ex3_1", SCENARIO_EX3_1, goldens, 1e-12)),
        "ex3_2" => Ok(scenario_row_exact("ex3_2", SCENARIO_EX3_2, goldens, 1e-12)),
        "ex3_3" => Ok(scenario_row_window("ex3_3", SCENARIO_EX3_3, goldens)),
        "ex3_4" => Ok(scenario_row_window("ex3_4", SCENARIO_EX3_4, goldens)),
        "appendix_q11" => Ok(appendix_row("appendix_q11", 11, goldens)),
        "appendix_q5" => Ok(appendix_row("appendix_q5", 5, goldens)),
        "krasner_values" => Ok(krasner_row(goldens)),
        "density_values" => Ok(density_row(goldens)),
        other => Err(CliError::Input(format!(
            "unknown row '{other}' (expected one of {})",
            ROW_NAMES.join(", ")
        ))),
    }
}

/// Run the selected rows (all eight when `only` is `None`), printing one
/// line per row in fixed order plus a summary. Returns true iff all passed.
pub fn run(only: Option<&str>, goldens: &GoldenSource) -> Result<bool, CliError> {
    let selected: Vec<&str> = match only {
        Some(name) => {
            if !ROW_NAMES.contains(&name) {
                return Err(CliError::Input(format!(
                    "unknown row '{name}' (expected one of {})",
                    ROW_NAMES.join(", ")
                )));
            }
            vec![name]
        }
        None => ROW_NAMES.to_vec(),
    };
    let mut passed = 0usize;
    for name in &selected {
        let row = run_row(name, goldens)?;
        if row.pass {
            passed += 1;
            println!("PASS {}", row.name);
        } else {
            println!("FAIL {}", row.name);
            for detail in &row.details {
                println!("    {detail}");
            }
        }
    }
    println!("{passed}/{} passed", selected.len());
    Ok(passed == selected.len())
}
