//! `lp-euler report`: merge inequality reports and simulation summaries
//! into one consolidated JSON document plus a human-readable table.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Failure, ReportArgs};

#[derive(Debug, Deserialize)]
struct InequalityIn {
    id: String,
    grid: GridIn,
    seed: u64,
    trials: usize,
    excluded: usize,
    max_ratio: f64,
    mean_ratio: f64,
    p95_ratio: f64,
}

#[derive(Debug, Deserialize)]
struct GridIn {
    d: usize,
    n: usize,
    #[serde(rename = "L")]
    l: f64,
}

#[derive(Debug, Deserialize)]
struct SimulationIn {
    u0_f_norm: f64,
    #[serde(rename = "fitted_C0")]
    fitted_c0: f64,
    #[serde(rename = "T0_estimate")]
    t0_estimate: f64,
    blowup_stop: bool,
    global_check: String,
}

#[derive(Debug, Serialize)]
struct InequalityOut {
    id: String,
    d: usize,
    n: usize,
    #[serde(rename = "L")]
    l: f64,
    seed: u64,
    trials: usize,
    excluded: usize,
    max_ratio: f64,
    mean_ratio: f64,
    p95_ratio: f64,
}

#[derive(Debug, Serialize)]
struct StabilityOut {
    id: String,
    n_low: usize,
    n_high: usize,
    max_ratio_low: f64,
    max_ratio_high: f64,
    growth_factor: f64,
    within_factor_2: bool,
}

#[derive(Debug, Serialize)]
struct SimulationOut {
    file: String,
    u0_f_norm: f64,
    #[serde(rename = "fitted_C0")]
    fitted_c0: f64,
    #[serde(rename = "T0_estimate")]
    t0_estimate: f64,
    blowup_stop: bool,
    global_check: String,
}

#[derive(Debug, Serialize)]
struct Consolidated {
    inequalities: Vec<InequalityOut>,
    stability: Vec<StabilityOut>,
    simulations: Vec<SimulationOut>,
}

pub fn cmd_report(args: &ReportArgs) -> Result<u8, Failure> {
    let mut inequalities: Vec<InequalityOut> = Vec::new();
    let mut simulations: Vec<SimulationOut> = Vec::new();

    for path in &args.inputs {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
        let value: serde_json::Value = serde_json::from_str(&text)
            .map_err(|e| Failure::Validation(format!("{}: not JSON: {e}", path.display())))?;

        if value.get("max_ratio").is_some() {
            let rep: InequalityIn = serde_json::from_value(value).map_err(|e| {
                Failure::Validation(format!("{}: bad inequality report: {e}", path.display()))
            })?;
            inequalities.push(InequalityOut {
                id: rep.id,
                d: rep.grid.d,
                n: rep.grid.n,
                l: rep.grid.l,
                seed: rep.seed,
                trials: rep.trials,
                excluded: rep.excluded,
                max_ratio: rep.max_ratio,
                mean_ratio: rep.mean_ratio,
                p95_ratio: rep.p95_ratio,
            });
        } else if value.get("fitted_C0").is_some() {
            let rep: SimulationIn = serde_json::from_value(value).map_err(|e| {
                Failure::Validation(format!("{}: bad simulation summary: {e}", path.display()))
            })?;
            simulations.push(SimulationOut {
                file: path.display().to_string(),
                u0_f_norm: rep.u0_f_norm,
                fitted_c0: rep.fitted_c0,
                t0_estimate: rep.t0_estimate,
                blowup_stop: rep.blowup_stop,
                global_check: rep.global_check,
            });
        } else {
            return Err(Failure::Validation(format!(
                "{}: unrecognized report schema",
                path.display()
            )));
        }
    }

    // Duplicate (id, n) pairs make stability factors ambiguous.
    let mut by_id: BTreeMap<String, BTreeMap<usize, f64>> = BTreeMap::new();
    for rep in &inequalities {
        let per_n = by_id.entry(rep.id.clone()).or_default();
        if per_n.insert(rep.n, rep.max_ratio).is_some() {
            return Err(Failure::Validation(format!(
                "duplicate reports for id {:?} at n = {}",
                rep.id, rep.n
            )));
        }
    }
    let mut stability = Vec::new();
    for (id, per_n) in &by_id {
        if per_n.len() < 2 {
            continue;
        }
        let (&n_low, &lo) = per_n.iter().next().unwrap();
        let (&n_high, &hi) = per_n.iter().next_back().unwrap();
        let growth_factor = hi / lo;
        stability.push(StabilityOut {
            id: id.clone(),
            n_low,
            n_high,
            max_ratio_low: lo,
            max_ratio_high: hi,
            growth_factor,
            within_factor_2: growth_factor <= 2.0,
        });
    }

    // Human-readable table on stderr, data on stdout / file.
    if !inequalities.is_empty() {
        eprintln!(
            "{:<12} {:>5} {:>7} {:>9} {:>13} {:>13}",
            "id", "n", "trials", "excluded", "max_ratio", "p95_ratio"
        );
        for r in &inequalities {
            eprintln!(
                "{:<12} {:>5} {:>7} {:>9} {:>13.6e} {:>13.6e}",
                r.id, r.n, r.trials, r.excluded, r.max_ratio, r.p95_ratio
            );
        }
    }
    for s in &stability {
        eprintln!(
            "stability {:<12} n {} -> {}: growth {:.3} ({})",
            s.id,
            s.n_low,
            s.n_high,
            s.growth_factor,
            if s.within_factor_2 { "ok" } else { "EXCEEDS 2" }
        );
    }
    for s in &simulations {
        eprintln!(
            "simulation {}: C0 = {:.6}, T0 = {:.6}, blow-up stop = {}, global check = {}",
            s.file, s.fitted_c0, s.t0_estimate, s.blowup_stop, s.global_check
        );
    }

    let consolidated = Consolidated {
        inequalities,
        stability,
        simulations,
    };
    let text = serde_json::to_string_pretty(&consolidated).unwrap() + "\n";
    match &args.out {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(0)
}
