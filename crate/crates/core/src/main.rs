//! Thin command-line front end; all functionality lives in the library.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use descriptor_net::billiards::{divergence_report, evolve_original};
use descriptor_net::error::Error;
use descriptor_net::gauge::{
    check_invariance, step_map_support, transform_history, transformed_step_unitary, GaugeTransform,
};
use descriptor_net::network::{reduced_density, run, Axis, Network};
use descriptor_net::observable::Observable;
use descriptor_net::oracle::cross_check;
use descriptor_net::parse::{
    parse_billiard_spec, parse_gauge_file, parse_network, parse_randomizer_spec, print_network,
};
use descriptor_net::report::{self, VerdictOut};
use descriptor_net::scenarios::{
    default_probe_family, discriminate, fig2_pair, run_probe, time_reverse_check_with_tolerance,
    Verdict, DISCRIMINATION_THRESHOLD,
};
use descriptor_net::Result;

#[derive(Parser)]
#[command(
    name = "descriptor-net",
    version,
    about = "Heisenberg-picture qubit network simulator: descriptor tracking, locality ledgers, gauge transforms, probe experiments and a billiard analogy"
)]
struct Cli {
    /// Report directory (default: DESCRIPTOR_NET_REPORT_DIR, then `.`)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance for verification verdicts
    #[arg(long, global = true, default_value_t = 1e-10)]
    tolerance: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a network file: descriptor tables, ledger and densities
    Run {
        net: PathBuf,
        /// Cross-check against the dense reference simulator (n <= 5)
        #[arg(long)]
        oracle_check: bool,
        /// Density request `q[,q...][@t]`, 1-based qubits; default: every
        /// qubit at the final time
        #[arg(long)]
        density: Vec<String>,
    },
    /// Apply a gauge file to a network's history and verify invariance
    Gauge { net: PathBuf, gauge: PathBuf },
    /// Probe a network with the default gate-insertion family
    Probe {
        net: PathBuf,
        /// Plan family (only `default` is built in)
        #[arg(long, default_value = "default")]
        family: String,
        /// Second network to discriminate against
        #[arg(long)]
        versus: Option<PathBuf>,
    },
    /// Run a randomizer spec and compare relative states to direct runs
    Randomizer { spec: PathBuf },
    /// Append the inverted network and verify descriptors return
    Reverse { net: PathBuf },
    /// Run a billiard spec: trajectories and the divergence report
    Billiard { spec: PathBuf },
    /// Reproduce the canonical two-network pair end to end
    Fig2,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_dir = cli
        .out
        .clone()
        .or_else(|| std::env::var_os("DESCRIPTOR_NET_REPORT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    match dispatch(&cli, &out_dir) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("error: {}", err);
            let code = match err {
                Error::GaugeCondition { .. }
                | Error::NotUnitary(_)
                | Error::ZeroProbabilityBranch(_) => 1,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn dispatch(cli: &Cli, out_dir: &Path) -> Result<bool> {
    match &cli.command {
        Command::Run {
            net,
            oracle_check,
            density,
        } => cmd_run(net, *oracle_check, density, out_dir, cli.tolerance),
        Command::Gauge { net, gauge } => cmd_gauge(net, gauge, out_dir, cli.tolerance),
        Command::Probe {
            net,
            family,
            versus,
        } => cmd_probe(net, family, versus.as_deref(), out_dir),
        Command::Randomizer { spec } => cmd_randomizer(spec, out_dir, cli.tolerance),
        Command::Reverse { net } => cmd_reverse(net, out_dir, cli.tolerance),
        Command::Billiard { spec } => cmd_billiard(spec, out_dir),
        Command::Fig2 => cmd_fig2(out_dir, cli.tolerance),
    }
}

fn load_network(path: &Path) -> Result<Network> {
    let text = std::fs::read_to_string(path)?;
    parse_network(&text, path.parent())
}

fn cmd_run(
    net_path: &Path,
    oracle_check: bool,
    density_specs: &[String],
    out_dir: &Path,
    tolerance: f64,
) -> Result<bool> {
    let network = load_network(net_path)?;
    let (history, ledger) = run(&network)?;
    let final_time = history.final_time();
    let requests: Vec<(Vec<usize>, usize)> = if density_specs.is_empty() {
        (0..network.num_qubits())
            .map(|q| (vec![q], final_time))
            .collect()
    } else {
        density_specs
            .iter()
            .map(|s| parse_density_request(s, final_time))
            .collect::<Result<_>>()?
    };
    let densities = requests
        .iter()
        .map(|(subset, t)| {
            Ok(report::density_entry(
                &reduced_density(&history, subset, *t)?,
                *t,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let oracle = if oracle_check {
        Some(report::oracle_summary(
            &cross_check(&history, &network)?,
            tolerance,
        ))
    } else {
        None
    };
    let verified = oracle.as_ref().map(|o| o.passed).unwrap_or(true);
    let out = report::RunReport {
        qubits: network.num_qubits(),
        network: print_network(&network),
        descriptor_tables: report::descriptor_tables(&history),
        ledger: report::ledger_entries(&ledger),
        densities,
        oracle,
    };
    let path = report::write_json(out_dir, "run_report.json", &out)?;
    println!(
        "ran {} steps on {} qubits; report at {}",
        network.num_steps(),
        network.num_qubits(),
        path.display()
    );
    for (s, changed) in out.ledger.iter().enumerate() {
        println!("  step {}: changed qubits {:?}", s + 1, changed);
    }
    if let Some(o) = &out.oracle {
        println!(
            "  oracle deviation {:.3e} (tolerance {:.1e}): {}",
            o.expectation_deviation.max(o.density_deviation),
            o.tolerance,
            if o.passed { "ok" } else { "FAILED" }
        );
    }
    Ok(verified)
}

fn parse_density_request(spec: &str, final_time: usize) -> Result<(Vec<usize>, usize)> {
    let (qubits_part, time) = match spec.split_once('@') {
        Some((q, "end")) => (q, final_time),
        Some((q, t)) => (
            q,
            t.parse()
                .map_err(|_| Error::parse(0, format!("bad density time {:?}", t)))?,
        ),
        None => (spec, final_time),
    };
    let qubits: Result<Vec<usize>> = qubits_part
        .split(',')
        .map(|s| {
            let v: usize = s
                .trim()
                .parse()
                .map_err(|_| Error::parse(0, format!("bad density qubit {:?}", s)))?;
            if v == 0 {
                return Err(Error::parse(0, "density qubits are 1-based"));
            }
            Ok(v - 1)
        })
        .collect();
    Ok((qubits?, time))
}

fn cmd_gauge(net_path: &Path, gauge_path: &Path, out_dir: &Path, tolerance: f64) -> Result<bool> {
    let network = load_network(net_path)?;
    let vs = parse_gauge_file(&std::fs::read_to_string(gauge_path)?)?;
    for v in &vs {
        if v.num_qubits() != network.num_qubits() {
            return Err(Error::QubitCountMismatch(
                v.num_qubits(),
                network.num_qubits(),
            ));
        }
    }
    let gauge = GaugeTransform::validate_with_tolerance(vs, tolerance)?;
    let (history, _) = run(&network)?;
    let transformed = transform_history(&history, &gauge)?;
    let probes: Vec<Observable> = (0..network.num_qubits())
        .flat_map(|q| {
            Axis::ALL
                .into_iter()
                .map(move |axis| Observable::component(q, axis))
        })
        .collect();
    let invariance = check_invariance(&history, &transformed, &probes, tolerance)?;
    let mut step_maps = Vec::new();
    for s in 0..network.num_steps() {
        let w = transformed_step_unitary(&network, &history, &gauge, s)?;
        step_maps.push(report::StepSupportOut {
            step: s + 1,
            original_support: network.step_support(s)?.iter().map(|q| q + 1).collect(),
            transformed_support: step_map_support(&network, &history, &gauge, s)?
                .iter()
                .map(|q| q + 1)
                .collect(),
            transformed_unitary: w.to_records(),
        });
    }
    let verified = invariance.passed();
    let out = report::GaugeReport {
        qubits: network.num_qubits(),
        times: gauge.num_times(),
        phases: gauge.phases().to_vec(),
        probes: probes.iter().map(|p| p.to_string()).collect(),
        invariance: report::invariance_out(&invariance),
        step_maps,
        transformed_tables: report::descriptor_tables(&transformed),
    };
    let path = report::write_json(out_dir, "gauge_report.json", &out)?;
    println!(
        "gauge over {} times: max probe deviation {:.3e}; report at {}",
        out.times,
        out.invariance.max_deviation,
        path.display()
    );
    for m in &out.step_maps {
        println!(
            "  step {}: support {:?} -> {:?}",
            m.step, m.original_support, m.transformed_support
        );
    }
    Ok(verified)
}

fn cmd_probe(
    net_path: &Path,
    family_name: &str,
    versus: Option<&Path>,
    out_dir: &Path,
) -> Result<bool> {
    if family_name != "default" {
        return Err(Error::parse(
            0,
            format!("unknown probe family {:?} (only `default`)", family_name),
        ));
    }
    let network = load_network(net_path)?;
    let family = default_probe_family(network.num_qubits(), network.num_steps());
    let mut plans = Vec::with_capacity(family.len());
    for (i, template) in family.iter().enumerate() {
        let result = run_probe(&template.against(&network)?)?;
        plans.push(report::plan_out(i, template, &result));
    }
    let verdict = match versus {
        Some(other_path) => {
            let other = load_network(other_path)?;
            Some(report::verdict_out(&discriminate(
                &network,
                &other,
                &family,
                DISCRIMINATION_THRESHOLD,
            )?))
        }
        None => None,
    };
    let out = report::ProbeRunReport {
        network: print_network(&network),
        family_size: family.len(),
        plans,
        verdict,
    };
    let path = report::write_json(out_dir, "probe_report.json", &out)?;
    println!(
        "probed with {} plans; report at {}",
        out.family_size,
        path.display()
    );
    if let Some(v) = &out.verdict {
        match v {
            VerdictOut::Distinguished { plan, gap, .. } => {
                println!("  distinguished by plan {} with readout gap {}", plan, gap)
            }
            VerdictOut::Indistinguishable => println!("  indistinguishable over the family"),
        }
    }
    Ok(true)
}

fn cmd_randomizer(spec_path: &Path, out_dir: &Path, tolerance: f64) -> Result<bool> {
    let scenario = parse_randomizer_spec(&std::fs::read_to_string(spec_path)?)?;
    let comparison = scenario.compare(&scenario.default_probes())?;
    let out = report::randomizer_out(
        scenario.num_controls(),
        scenario.num_targets(),
        &comparison,
        tolerance,
    );
    let verified = out.passed;
    let path = report::write_json(out_dir, "randomizer_report.json", &out)?;
    println!(
        "randomizer over {} branches: max deviation {:.3e}, probability sum {:.12}; report at {}",
        out.branches.len(),
        out.max_deviation,
        out.probability_sum,
        path.display()
    );
    Ok(verified)
}

fn cmd_reverse(net_path: &Path, out_dir: &Path, tolerance: f64) -> Result<bool> {
    let network = load_network(net_path)?;
    let result = time_reverse_check_with_tolerance(&network, tolerance)?;
    let out = report::reverse_report(&network, &result);
    let path = report::write_json(out_dir, "reverse_report.json", &out)?;
    println!(
        "reversal deviation {:.3e}, ledger palindrome {}; report at {}",
        out.max_deviation,
        out.ledger_palindrome,
        path.display()
    );
    Ok(out.passed)
}

fn cmd_billiard(spec_path: &Path, out_dir: &Path) -> Result<bool> {
    let spec = parse_billiard_spec(&std::fs::read_to_string(spec_path)?)?;
    let original = evolve_original(&spec.state, spec.horizon, spec.dt)?;
    let divergence = divergence_report(
        &spec.state,
        &spec.perturbation,
        &spec.transform,
        spec.horizon,
        spec.dt,
    )?;
    let formal_csv =
        report::write_trajectory_csv(out_dir, "billiard_formal.csv", &divergence.formal)?;
    let cp_csv = report::write_trajectory_csv(
        out_dir,
        "billiard_content_preserving.csv",
        &divergence.content_preserving,
    )?;
    let out = report::billiard_out(
        spec.state.len(),
        spec.state.radius,
        spec.horizon,
        &spec.perturbation,
        &original,
        &divergence,
        vec![
            formal_csv.display().to_string(),
            cp_csv.display().to_string(),
        ],
    );
    let path = report::write_json(out_dir, "billiard_report.json", &out)?;
    println!(
        "billiards: max gap {:.6}, after first event {:.6}; report at {}",
        out.max_gap,
        out.max_gap_after_first_event,
        path.display()
    );
    Ok(true)
}

fn cmd_fig2(out_dir: &Path, tolerance: f64) -> Result<bool> {
    let (net, net_prime, gauge) = fig2_pair()?;
    let (history, ledger) = run(&net)?;
    let (history_prime, ledger_prime) = run(&net_prime)?;
    let transformed = transform_history(&history, &gauge)?;
    let mut maps_onto_prime = true;
    for t in 0..history.num_times() {
        for (a, d) in transformed.at(t)?.iter().enumerate() {
            if !d.approx_eq(&history_prime.at(t)?[a], tolerance) {
                maps_onto_prime = false;
            }
        }
    }
    let mut densities = Vec::new();
    for t in 0..history.num_times() {
        densities.push(report::density_entry(
            &reduced_density(&history, &[0, 1], t)?,
            t,
        ));
    }
    let mut step_maps = Vec::new();
    for s in 0..net.num_steps() {
        let w = transformed_step_unitary(&net, &history, &gauge, s)?;
        step_maps.push(report::StepSupportOut {
            step: s + 1,
            original_support: net.step_support(s)?.iter().map(|q| q + 1).collect(),
            transformed_support: step_map_support(&net, &history, &gauge, s)?
                .iter()
                .map(|q| q + 1)
                .collect(),
            transformed_unitary: w.to_records(),
        });
    }
    let family = default_probe_family(2, 2);
    let verdict = discriminate(&net, &net_prime, &family, DISCRIMINATION_THRESHOLD)?;
    let distinguished = matches!(
        verdict,
        Verdict::Distinguished { gap, .. } if gap >= 1.0 - 1e-10
    );
    let phases_ok = gauge.phases().iter().all(|p| p.abs() <= tolerance);
    let passed = maps_onto_prime && distinguished && phases_ok;
    let out = report::Fig2Report {
        network: print_network(&net),
        network_prime: print_network(&net_prime),
        tables: report::descriptor_tables(&history),
        tables_prime: report::descriptor_tables(&history_prime),
        densities,
        gauge_phases: gauge.phases().to_vec(),
        gauge_maps_onto_prime: maps_onto_prime,
        step_map_supports: step_maps,
        ledger: report::ledger_entries(&ledger),
        ledger_prime: report::ledger_entries(&ledger_prime),
        discrimination: report::verdict_out(&verdict),
        passed,
    };
    let path = report::write_json(out_dir, "fig2_report.json", &out)?;
    println!("two-network pair report at {}", path.display());
    println!(
        "  gauge maps history onto primed forms: {}",
        out.gauge_maps_onto_prime
    );
    println!("  ledger: {:?} vs {:?}", out.ledger, out.ledger_prime);
    match &out.discrimination {
        VerdictOut::Distinguished { plan, gap, .. } => {
            println!("  distinguished by insertion plan {} (gap {})", plan, gap)
        }
        VerdictOut::Indistinguishable => println!("  indistinguishable (unexpected)"),
    }
    Ok(passed)
}
