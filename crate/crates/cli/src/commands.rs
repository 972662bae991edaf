//! The subcommands. Each one computes everything first and only then writes
//! its artifacts, so a failure leaves no partial output behind.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use rauzy::oracle::{oracle_reports, sample_distances, tent_check, OracleReport};
use rauzy::overlap::{boundary_report, DEFAULT_TYPE_CAP};
use rauzy::renorm::{covariogram_samples, patch_differences, PairSelector, Parity, Sample, PAIRS};
use rauzy::substitution::{Patch, A, B};
use rauzy::window::{
    iterate_windows, projected_points, tiling_seed_points, window_bounds, window_measures,
    Interval, WindowIfs,
};
use rauzy::{solve_self_consistent, CorrelationTable, Exec, FieldVal, QuadInt};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{pair_label, parse_selector, ColorBy, Setup};
use crate::error::{CliError, CliResult};
use crate::output::{write_csv, write_json, write_string};
use crate::svg::{scatter, Series, Style};

/// What a subcommand produced.
#[derive(Debug)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    /// Printed to stdout as JSON.
    pub report: Value,
    /// False when a check or oracle run found violations.
    pub passed: bool,
}

pub const CORE_HEADER: [&str; 4] = ["pair", "z", "value_exact", "value_float"];
pub const COVARIOGRAM_HEADER: [&str; 7] = [
    "pair",
    "za",
    "zb",
    "zstar_float",
    "value_exact",
    "value_float",
    "parity",
];
pub const WINDOWS_HEADER: [&str; 4] = ["letter", "a", "b", "xstar_float"];
pub const ORACLE_HEADER: [&str; 10] = [
    "pair",
    "za",
    "zb",
    "zstar_float",
    "frequency",
    "hits",
    "total",
    "value_exact",
    "value_float",
    "abs_error",
];

pub fn table(setup: &Setup) -> CliResult<CorrelationTable> {
    Ok(solve_self_consistent(&setup.sys, &setup.cutoff)?)
}

pub fn patch(setup: &Setup) -> CliResult<Patch> {
    Ok(setup.sys.generate_patch(setup.patch_level, &setup.seed)?)
}

fn interval_json(iv: &Interval) -> Value {
    let (lo, hi) = iv.to_f64();
    json!({ "lo": iv.lo.to_string(), "hi": iv.hi.to_string(), "lo_float": lo, "hi_float": hi })
}

fn letters_map<T>(setup: &Setup, f: impl Fn(usize) -> T) -> BTreeMap<String, T> {
    [A, B]
        .into_iter()
        .map(|i| (setup.sys.letter_name(i).to_string(), f(i)))
        .collect()
}

pub fn cmd_analyze(setup: &Setup) -> CliResult<Outcome> {
    let sys = &setup.sys;
    let (measures, volume) = window_measures(sys);
    let hulls = window_bounds(&WindowIfs::new(sys));
    let boundary = boundary_report(sys, setup.shift.as_ref(), DEFAULT_TYPE_CAP)?;
    let displacement: BTreeMap<String, Vec<String>> = PAIRS
        .iter()
        .map(|&(i, j)| {
            (
                pair_label(sys, PairSelector::Pair(i, j)),
                sys.displacement(i, j)
                    .iter()
                    .map(|t| t.to_string())
                    .collect(),
            )
        })
        .collect();
    let density = sys.density();
    let report = json!({
        "substitution": sys.to_string(),
        "seed": setup.seed,
        "matrix": sys.matrix(),
        "displacement": displacement,
        "pf_multiplier": sys.mu().to_string(),
        "pf_multiplier_float": sys.mu().embed(),
        "letter_frequencies": letters_map(setup, |i| sys.freq()[i].to_string()),
        "tile_lengths": letters_map(setup, |i| sys.tile_length(i).to_string()),
        "density": density.to_string(),
        "density_float": density.embed(),
        "covolume": sys.covolume().to_string(),
        "window_measures": letters_map(setup, |i| measures[i].to_string()),
        "window_volume": volume.to_string(),
        "window_hulls": letters_map(setup, |i| interval_json(&hulls[i])),
        "boundary_shift": boundary.shift,
        "boundary_factor": boundary.factor,
        "gamma": boundary.gamma,
        "dim_h": boundary.dimension,
    });
    let path = setup.output("analysis.json");
    write_json(&path, &report)?;
    Ok(Outcome {
        files: vec![path],
        report,
        passed: true,
    })
}

pub fn core_rows(setup: &Setup, table: &CorrelationTable) -> Vec<Vec<String>> {
    let mut entries = table.core_entries();
    entries.sort_by(|x, y| (x.0, x.1, &x.2).cmp(&(y.0, y.1, &y.2)));
    entries
        .into_iter()
        .map(|(i, j, z, v)| {
            vec![
                pair_label(&setup.sys, PairSelector::Pair(i, j)),
                z.to_string(),
                v.to_string(),
                v.embed().to_string(),
            ]
        })
        .collect()
}

pub fn cmd_core(setup: &Setup) -> CliResult<Outcome> {
    let table = table(setup)?;
    let rows = core_rows(setup, &table);
    let path = setup.output("core.csv");
    let report = json!({
        "rows": rows.len(),
        "distances": table.core_set().distances.len(),
        "cutoff": table.cutoff().to_string(),
    });
    write_csv(&path, &CORE_HEADER, rows)?;
    Ok(Outcome {
        files: vec![path],
        report,
        passed: true,
    })
}

fn parity_label(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
        Parity::Undefined => "undefined",
    }
}

pub fn cmd_covariogram(setup: &Setup, exec: Exec) -> CliResult<Outcome> {
    let cfg = &setup.config;
    let table = table(setup)?;
    let patch = patch(setup)?;
    let samples = covariogram_samples(&table, &patch, cfg.sample_cap, exec);
    let labels: Vec<String> = setup
        .selectors
        .iter()
        .map(|&s| pair_label(&setup.sys, s))
        .collect();

    let mut rows = Vec::with_capacity(samples.points.len() * labels.len());
    for s in &samples.points {
        let parity = parity_label(s.parity());
        for (sel, label) in setup.selectors.iter().zip(&labels) {
            let v = s.value(*sel);
            rows.push(vec![
                label.clone(),
                s.z.a().to_string(),
                s.z.b().to_string(),
                s.zstar.to_string(),
                v.to_string(),
                v.embed().to_string(),
                parity.to_string(),
            ]);
        }
    }

    let colors = &cfg.plot.colors;
    let series: Vec<Series> = match cfg.plot.color_by {
        ColorBy::Pair => setup
            .selectors
            .iter()
            .zip(&labels)
            .enumerate()
            .map(|(k, (sel, label))| Series {
                label: label.clone(),
                color: colors[k % colors.len()].clone(),
                points: samples
                    .points
                    .iter()
                    .map(|s| (s.zstar, s.value(*sel).embed()))
                    .collect(),
            })
            .collect(),
        ColorBy::Parity => [(Parity::Even, 0), (Parity::Odd, 1)]
            .into_iter()
            .map(|(p, k)| Series {
                label: format!("{} {}", parity_label(p), setup.sys.letter_name(B)),
                color: colors[k].clone(),
                points: samples
                    .points
                    .iter()
                    .filter(|s| s.parity() == p)
                    .flat_map(|s| {
                        setup
                            .selectors
                            .iter()
                            .map(move |sel| (s.zstar, s.value(*sel).embed()))
                    })
                    .collect(),
            })
            .collect(),
    };
    let svg = scatter(
        &series,
        &Style {
            width: cfg.plot.width,
            height: cfg.plot.height,
            point_size: cfg.plot.point_size,
            axes: cfg.plot.axes,
            title: format!("{} ({} points)", setup.sys, samples.points.len()),
            x_label: "z*".into(),
            y_label: "correlation".into(),
        },
    );

    let csv_path = setup.output("covariogram.csv");
    let svg_path = setup.output("covariogram.svg");
    let report = json!({
        "points": samples.points.len(),
        "rows": rows.len(),
        "truncated": samples.truncated,
        "patch_level": setup.patch_level,
        "patch_tiles": patch.len(),
        "classes": series.iter().filter(|s| !s.points.is_empty()).count(),
    });
    write_csv(&csv_path, &COVARIOGRAM_HEADER, rows)?;
    write_string(&svg_path, &svg)?;
    Ok(Outcome {
        files: vec![csv_path, svg_path],
        report,
        passed: true,
    })
}

/// Deepest approximant with at most `budget` points.
fn default_window_depth(setup: &Setup, budget: u128) -> usize {
    (1..=60)
        .take_while(|&d| projected_points(&setup.sys, d) <= budget)
        .last()
        .unwrap_or(1)
}

pub fn cmd_windows(setup: &Setup, exec: Exec) -> CliResult<Outcome> {
    let cfg = &setup.config;
    let sys = &setup.sys;
    let ifs = WindowIfs::new(sys);
    let depth = cfg
        .window_depth
        .unwrap_or_else(|| default_window_depth(setup, 200_000));
    let seeds = tiling_seed_points(sys);
    let approx = iterate_windows(
        sys,
        &ifs,
        depth,
        [&seeds[A], &seeds[B]],
        cfg.point_cap,
        exec,
    )?;
    let hulls = window_bounds(&ifs);
    let (measures, volume) = window_measures(sys);

    let mut rows = Vec::new();
    let mut series = Vec::new();
    for i in [A, B] {
        let mut pts: Vec<(f64, QuadInt)> = approx.points(i).map(|q| (q.embed(), q)).collect();
        pts.sort_by(|x, y| x.0.total_cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
        let letter = sys.letter_name(i).to_string();
        // fixed, arbitrary heights per letter
        let height = if i == A { 1.0 } else { 0.5 };
        series.push(Series {
            label: letter.clone(),
            color: cfg.plot.colors[i].clone(),
            points: pts.iter().map(|(x, _)| (*x, height)).collect(),
        });
        rows.extend(pts.into_iter().map(|(x, q)| {
            vec![
                letter.clone(),
                q.a().to_string(),
                q.b().to_string(),
                x.to_string(),
            ]
        }));
    }
    let svg = scatter(
        &series,
        &Style {
            width: cfg.plot.width,
            height: cfg.plot.height.min(320),
            point_size: cfg.plot.point_size,
            axes: cfg.plot.axes,
            title: format!("windows of {} (depth {depth})", sys),
            x_label: "x*".into(),
            y_label: "letter".into(),
        },
    );
    let report = json!({
        "depth": depth,
        "points": letters_map(setup, |i| approx.len(i)),
        "hulls": letters_map(setup, |i| interval_json(&hulls[i])),
        "measures": letters_map(setup, |i| measures[i].to_string()),
        "volume": volume.to_string(),
    });
    let csv_path = setup.output("windows.csv");
    let svg_path = setup.output("windows.svg");
    let json_path = setup.output("windows.json");
    write_csv(&csv_path, &WINDOWS_HEADER, rows)?;
    write_string(&svg_path, &svg)?;
    write_json(&json_path, &report)?;
    Ok(Outcome {
        files: vec![csv_path, svg_path, json_path],
        report,
        passed: true,
    })
}

pub fn cmd_hausdorff(setup: &Setup) -> CliResult<Outcome> {
    let report = boundary_report(&setup.sys, setup.shift.as_ref(), DEFAULT_TYPE_CAP)?;
    let path = setup.output("hausdorff.json");
    write_json(&path, &report)?;
    Ok(Outcome {
        files: vec![path],
        report: serde_json::to_value(&report)?,
        passed: true,
    })
}

/// Maximum and median error of an oracle run. The median runs over the
/// informative rows, those where either side is nonzero.
#[derive(Clone, Debug, Serialize)]
pub struct OracleStats {
    pub rows: usize,
    pub informative: usize,
    pub max_error: f64,
    pub median_error: f64,
    pub exceeding: usize,
}

pub fn oracle_stats(reports: &[OracleReport], max_tol: f64) -> OracleStats {
    let mut errs: Vec<f64> = reports
        .iter()
        .filter(|r| r.hits > 0 || !r.renorm_value.is_zero())
        .map(|r| r.abs_error_float)
        .collect();
    errs.sort_by(f64::total_cmp);
    let median_error = match errs.len() {
        0 => 0.0,
        n if n % 2 == 1 => errs[n / 2],
        n => 0.5 * (errs[n / 2 - 1] + errs[n / 2]),
    };
    OracleStats {
        rows: reports.len(),
        informative: errs.len(),
        max_error: reports
            .iter()
            .map(|r| r.abs_error_float)
            .fold(0.0, f64::max),
        median_error,
        exceeding: reports
            .iter()
            .filter(|r| !(r.abs_error_float <= max_tol))
            .count(),
    }
}

fn run_oracle(
    setup: &Setup,
    table: &CorrelationTable,
    exec: Exec,
) -> CliResult<(Vec<OracleReport>, OracleStats)> {
    let o = &setup.config.oracle;
    let patch = patch(setup)?;
    let distances = sample_distances(&patch, o.distances, o.max_span, o.rng_seed);
    let reports = oracle_reports(table, &patch, &distances, exec);
    let stats = oracle_stats(&reports, setup.config.tolerance.oracle_max);
    Ok((reports, stats))
}

pub fn cmd_oracle(setup: &Setup, exec: Exec) -> CliResult<Outcome> {
    let tol = &setup.config.tolerance;
    let table = table(setup)?;
    let (reports, stats) = run_oracle(setup, &table, exec)?;
    let rows = reports.iter().map(|r| {
        vec![
            pair_label(&setup.sys, PairSelector::Pair(r.pair.0, r.pair.1)),
            r.distance.a().to_string(),
            r.distance.b().to_string(),
            r.distance.embed_star().to_string(),
            r.frequency.to_string(),
            r.hits.to_string(),
            r.total.to_string(),
            r.renorm_value.to_string(),
            r.renorm_value.embed().to_string(),
            r.abs_error_float.to_string(),
        ]
    });
    let path = setup.output("oracle.csv");
    write_csv(&path, &ORACLE_HEADER, rows)?;
    let passed = stats.exceeding == 0 && stats.median_error <= tol.oracle_median;
    Ok(Outcome {
        files: vec![path],
        report: json!({ "stats": stats, "tolerance": tol, "passed": passed }),
        passed,
    })
}

/// Result of one invariant suite in `check`.
#[derive(Clone, Debug, Serialize)]
pub struct Suite {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    pub max_error: f64,
    /// Up to ten failing cases.
    pub examples: Vec<String>,
}

impl Suite {
    fn new(name: &str) -> Suite {
        Suite {
            name: name.into(),
            checked: 0,
            failures: 0,
            max_error: 0.0,
            examples: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, err: f64, what: impl FnOnce() -> String) {
        self.checked += 1;
        self.max_error = self.max_error.max(err);
        if !ok {
            self.failures += 1;
            if self.examples.len() < 10 {
                self.examples.push(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn corrupt(setup: &Setup, table: &mut CorrelationTable) -> CliResult<()> {
    let Some(c) = &setup.config.corrupt_core else {
        return Ok(());
    };
    let f = setup.sys.field();
    let bad = |e: rauzy::Error| CliError::Config(format!("corrupt_core: {e}"));
    let PairSelector::Pair(i, j) = parse_selector(&c.pair)? else {
        return Err(CliError::Config(
            "corrupt_core.pair must name two letters".into(),
        ));
    };
    let z = QuadInt::parse(f, &c.z).map_err(bad)?;
    let v = FieldVal::parse(f, &c.value).map_err(bad)?;
    table.set_core_value(i, j, z, v);
    Ok(())
}

fn residual_suite(setup: &Setup, table: &CorrelationTable, patch: &Patch, exec: Exec) -> Suite {
    let mut distances = table.core_set().distances.clone();
    let (diffs, _) = patch_differences(patch, setup.config.check.residual_distances, exec);
    distances.extend(diffs.into_iter().map(|d| patch.to_quad(d)));
    let results = exec.map(&distances, |z| PAIRS.map(|(i, j)| table.residual(i, j, z)));
    let mut suite = Suite::new("residual");
    for (z, res) in distances.iter().zip(results) {
        for ((i, j), r) in PAIRS.into_iter().zip(res) {
            suite.record(r.is_zero(), r.embed().abs(), || {
                format!("residual_{i}{j}({z}) = {r}")
            });
        }
    }
    suite
}

fn property_suites(table: &CorrelationTable, samples: &[Sample]) -> Vec<Suite> {
    let f = table.field();
    let zero = FieldVal::zero(f);
    let origin = QuadInt::zero(f);
    let diag = [A, B].map(|i| table.evaluate(i, i, &origin));
    let by_z: HashMap<&QuadInt, usize> =
        samples.iter().enumerate().map(|(k, s)| (&s.z, k)).collect();
    let mut sym = Suite::new("symmetry");
    let mut range = Suite::new("range");
    let mut comp = Suite::new("composition");
    let mut support = Suite::new("support");
    for s in samples {
        let minus = -&s.z;
        let mirror = by_z.get(&minus).map(|&k| &samples[k]);
        for (i, j) in PAIRS {
            let v = &s.nu[i][j];
            let w = match mirror {
                Some(m) => m.nu[j][i].clone(),
                None => table.evaluate(j, i, &minus),
            };
            sym.record(*v == w, (v - &w).embed().abs(), || {
                format!("nu_{i}{j}({}) = {v} but nu_{j}{i}(-z) = {w}", s.z)
            });
            let cap = diag[i].clone().min(diag[j].clone());
            let ok = *v >= zero && *v <= cap;
            range.record(ok, 0.0, || {
                format!("nu_{i}{j}({}) = {v} outside [0, {cap}]", s.z)
            });
            let inside = table.star_bound(i, j).contains(&FieldVal::from(s.z.star()));
            support.record(v.is_zero() || inside, 0.0, || {
                format!("nu_{i}{j}({}) = {v} with z* outside the star bound", s.z)
            });
        }
        let sum = s.nu.iter().flatten().fold(zero.clone(), |acc, v| &acc + v);
        let direct = table.total(&s.z);
        comp.record(
            sum == s.total && sum == direct,
            (&sum - &direct).embed().abs(),
            || format!("nu({}) = {direct}, pair sum {sum}", s.z),
        );
    }
    let mut norm = Suite::new("normalisation");
    let t0 = table.total(&origin);
    norm.record(
        t0 == FieldVal::one(f),
        (&t0 - &FieldVal::one(f)).embed().abs(),
        || format!("nu(0) = {t0}"),
    );
    vec![sym, range, comp, support, norm]
}

pub fn cmd_check(setup: &Setup, exec: Exec) -> CliResult<Outcome> {
    let cfg = &setup.config;
    let mut table = table(setup)?;
    corrupt(setup, &mut table)?;
    let patch = patch(setup)?;
    let mut suites = vec![residual_suite(setup, &table, &patch, exec)];

    let samples = covariogram_samples(&table, &patch, cfg.check.property_samples, exec);
    suites.extend(property_suites(&table, &samples.points));

    let (_, stats) = run_oracle(setup, &table, exec)?;
    let mut oracle = Suite::new("oracle");
    oracle.checked = stats.rows;
    oracle.failures = stats.exceeding;
    oracle.max_error = stats.max_error;
    if stats.exceeding > 0 {
        oracle.examples.push(format!(
            "{} rows above {}",
            stats.exceeding, cfg.tolerance.oracle_max
        ));
    }
    if stats.median_error > cfg.tolerance.oracle_median {
        oracle.failures += 1;
        oracle.examples.push(format!(
            "median error {} above {}",
            stats.median_error, cfg.tolerance.oracle_median
        ));
    }
    suites.push(oracle);

    // closed-form reference, available when the windows are intervals
    let boundary = boundary_report(&setup.sys, None, DEFAULT_TYPE_CAP)?;
    if boundary.dimension == 0.0 {
        let zs: Vec<QuadInt> = samples.points.iter().map(|s| s.z.clone()).collect();
        let t = tent_check(&table, &zs, exec);
        let mut tent = Suite::new("tent");
        tent.checked = t.checked;
        tent.failures = t.offending.len();
        tent.max_error = t.max_error.embed();
        tent.examples = t
            .offending
            .iter()
            .take(10)
            .map(|(z, i, j)| format!("{z} ({i},{j})"))
            .collect();
        suites.push(tent);
    }

    let passed = suites.iter().all(Suite::passed);
    let report = json!({
        "system": setup.sys.to_string(),
        "seed": setup.seed,
        "patch_level": setup.patch_level,
        "passed": passed,
        "suites": suites,
    });
    let path = setup.output("check.json");
    write_json(&path, &report)?;
    Ok(Outcome {
        files: vec![path],
        report,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;

    fn setup(name: &str, dir: &std::path::Path) -> Setup {
        Config {
            output_dir: dir.to_path_buf(),
            ..Config::preset(name)
        }
        .resolve()
        .unwrap()
    }

    #[test]
    fn core_csv_lists_zeros() {
        let dir = tempfile::tempdir().unwrap();
        let s = setup("ssm", dir.path());
        let rows = core_rows(&s, &table(&s).unwrap());
        // ν_ab(0) = 0 is listed, not omitted
        assert!(rows
            .iter()
            .any(|r| r[0] == "ab" && r[1] == "0+0*sqrt2" && r[2] == "(0+0*sqrt2)/1"));
        let d = rows.iter().filter(|r| r[0] == "aa").count();
        assert_eq!(rows.len(), 4 * d);
    }

    #[test]
    fn oracle_median_ignores_trivial_rows() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = setup("ssm", dir.path());
        s.patch_level = 7;
        s.config.oracle.distances = 20;
        let t = table(&s).unwrap();
        let (reports, stats) = run_oracle(&s, &t, Exec::Sequential).unwrap();
        assert_eq!(stats.rows, reports.len());
        assert!(stats.informative < stats.rows);
        assert!(stats.median_error <= stats.max_error);
    }

    #[test]
    fn corrupted_core_breaks_residuals() {
        let dir = tempfile::tempdir().unwrap();
        let mut s = setup("ssm", dir.path());
        s.patch_level = 6;
        s.config.check.residual_distances = 200;
        s.config.corrupt_core = Some(crate::config::Corruption {
            pair: "aa".into(),
            z: "1".into(),
            value: "1/3".into(),
        });
        let mut t = table(&s).unwrap();
        corrupt(&s, &mut t).unwrap();
        let p = patch(&s).unwrap();
        let suite = residual_suite(&s, &t, &p, Exec::Sequential);
        assert!(suite.failures > 0);
        assert!(suite.max_error > 0.0);
    }
}
