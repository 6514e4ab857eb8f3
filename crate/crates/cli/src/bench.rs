//! Benchmark harness: runs algorithms over an instance corpus and writes a
//! CSV report plus a human summary. Instances are processed in sorted path
//! order so reports are deterministic.

use std::fs;
use std::time::Instant;

use gspkit::model::lower_bound;
use gspkit::model::Instance;
use gspkit::solvers::{exact_oracle, SolveBudgets, DEFAULT_ORACLE_LIMIT};

use crate::{run_algorithm, BenchArgs, CmdError, CmdResult};

pub fn run(args: &BenchArgs) -> CmdResult {
    let mut paths: Vec<_> = fs::read_dir(&args.corpus)
        .map_err(|e| CmdError::Usage(format!("{}: {e}", args.corpus.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|ext| ext == "txt"))
        .collect();
    paths.sort();

    let budgets = SolveBudgets {
        container_budget: args.budget_containers,
        ..Default::default()
    };
    let mut csv =
        String::from("instance,algorithm,height,lower_bound,ratio_lb,ratio_oracle,millis,status\n");
    let mut summary: Vec<(String, f64, usize)> = Vec::new();

    for path in &paths {
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        let instance = match fs::read_to_string(path)
            .map_err(|e| e.to_string())
            .and_then(|text| Instance::from_text(&text).map_err(|e| e.to_string()))
        {
            Ok(i) => i,
            Err(e) => {
                csv.push_str(&format!("{name},,,,,,,error: {}\n", e.replace(',', ";")));
                continue;
            }
        };
        let lb = lower_bound(&instance);
        let oracle_height = if instance.len() <= DEFAULT_ORACLE_LIMIT {
            exact_oracle(&instance, DEFAULT_ORACLE_LIMIT)
                .ok()
                .map(|r| r.height)
        } else {
            None
        };
        for alg in &args.algorithms {
            let started = Instant::now();
            match run_algorithm(&instance, *alg, args.eps, &budgets) {
                Ok(result) => {
                    let millis = started.elapsed().as_secs_f64() * 1e3;
                    let ratio_lb = if lb == 0 {
                        1.0
                    } else {
                        result.height as f64 / lb as f64
                    };
                    let ratio_oracle = oracle_height
                        .map(|o| {
                            if o == 0 {
                                "1.0000".to_string()
                            } else {
                                format!("{:.4}", result.height as f64 / o as f64)
                            }
                        })
                        .unwrap_or_default();
                    csv.push_str(&format!(
                        "{name},{},{},{lb},{ratio_lb:.4},{ratio_oracle},{millis:.2},ok\n",
                        alg.name(),
                        result.height,
                    ));
                    match summary.iter_mut().find(|(a, _, _)| a == alg.name()) {
                        Some(row) => {
                            row.1 += ratio_lb;
                            row.2 += 1;
                        }
                        None => summary.push((alg.name().to_string(), ratio_lb, 1)),
                    }
                }
                Err(e) => {
                    csv.push_str(&format!(
                        "{name},{},,,,,{:.2},error: {}\n",
                        alg.name(),
                        started.elapsed().as_secs_f64() * 1e3,
                        e.to_string().replace(',', ";"),
                    ));
                }
            }
        }
    }

    fs::write(&args.report, &csv)
        .map_err(|e| CmdError::Usage(format!("{}: {e}", args.report.display())))?;
    println!(
        "bench: {} instances, report {}",
        paths.len(),
        args.report.display()
    );
    for (alg, total, count) in &summary {
        println!(
            "  {alg}: mean ratio-to-lower-bound {:.4} over {count} runs",
            total / *count as f64
        );
    }
    Ok(())
}
