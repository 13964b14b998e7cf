use clap::{Parser, Subcommand};
use std::io::Read;
use std::process::ExitCode;
use wittkit::cli::{self, GroupQuery};
use wittkit::involution::InvolutionInput;
use wittkit::wittcalc::{node_laurent_witt, node_witt, FieldDesc, WittError};

/// Exact calculator and verifier for Witt and Grothendieck-Witt groups.
#[derive(Parser)]
#[command(name = "wittkit", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate group queries like "W^0(node(F5) x Gm)"; with no argument,
    /// reads one query per line from stdin.
    Eval {
        query: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Tate cohomology of a module with involution, read as JSON from stdin.
    Tate,
    /// Shifted Witt groups of the nodal curve over F_q.
    Node {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        json: bool,
        /// also report the Laurent extension R[t,1/t]
        #[arg(long)]
        laurent: bool,
    },
    /// Run the chain-level verification suite for the rank-n formed complex.
    KoszulVerify {
        #[arg(long)]
        n: usize,
        /// largest graded degree checked (default 3n+2)
        #[arg(long)]
        bound: Option<i64>,
        /// coefficient field: Q or Fp (e.g. F101)
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        json: bool,
    },
    /// Fixed tables: witt-fields, node, gw-proj.
    Table {
        name: String,
        /// field orders for the field-indexed tables
        #[arg(long, value_delimiter = ',', default_values_t = vec![3u64, 5, 7, 9, 11, 13])]
        q: Vec<u64>,
        /// dimension bound for gw-proj
        #[arg(long, default_value_t = 5)]
        n: u32,
    },
}

const EXIT_HYPOTHESIS: u8 = 2;

fn threads() -> usize {
    std::env::var("WITTKIT_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&t| t >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn eval_one(line: &str, json: bool) -> Result<(), u8> {
    let q: GroupQuery = match cli::parse(line) {
        Ok(q) => q,
        Err(e) => {
            eprintln!("{e}");
            return Err(1);
        }
    };
    match cli::run(&q) {
        Ok(ev) => {
            if json {
                let report = cli::report_for(line.trim(), &ev);
                println!("{}", serde_json::to_string(&report).unwrap());
            } else {
                println!("{} = {}", q, ev.result);
                for r in &ev.rules {
                    println!("  rule: {} [{}]", r.rule, r.anchor);
                }
                for w in &ev.warnings {
                    println!("  warning: {w}");
                }
            }
            Ok(())
        }
        Err(e @ WittError::HypothesisFailed { .. }) => {
            eprintln!("{q}: {e}");
            Err(EXIT_HYPOTHESIS)
        }
        Err(e) => {
            eprintln!("{q}: {e}");
            Err(1)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match cli.command {
        Command::Eval { query, json } => match query {
            Some(q) => eval_one(&q, json),
            None => {
                let mut input = String::new();
                if std::io::stdin().read_to_string(&mut input).is_err() {
                    eprintln!("failed to read stdin");
                    return ExitCode::from(1);
                }
                let mut worst = Ok(());
                for line in input.lines().filter(|l| !l.trim().is_empty()) {
                    if let Err(code) = eval_one(line, json) {
                        worst = Err(worst.err().unwrap_or(0).max(code));
                    }
                }
                worst
            }
        },
        Command::Tate => {
            let mut input = String::new();
            if std::io::stdin().read_to_string(&mut input).is_err() {
                eprintln!("failed to read stdin");
                return ExitCode::from(1);
            }
            match serde_json::from_str::<InvolutionInput>(&input)
                .map_err(|e| e.to_string())
                .and_then(|inp| cli::tate_report(&inp))
            {
                Ok(s) => {
                    println!("{s}");
                    Ok(())
                }
                Err(e) => {
                    eprintln!("{e}");
                    Err(1)
                }
            }
        }
        Command::Node { q, json, laurent } => match FieldDesc::finite(q) {
            Ok(k) => {
                let r = node_witt(k);
                if json {
                    let obj = serde_json::json!({
                        "q": q,
                        "groups": (0..4).map(|i| r.groups[i].to_string()).collect::<Vec<_>>(),
                        "rules": r.rules,
                    });
                    println!("{obj}");
                } else {
                    for (i, g) in r.groups.iter().enumerate() {
                        println!("W^{i}(node(F{q})) = {g}");
                    }
                    for rule in &r.rules {
                        println!("  rule: {} [{}]", rule.rule, rule.anchor);
                    }
                }
                if laurent {
                    let lr = node_laurent_witt(k);
                    println!("W^0(node(F{q})[t,1/t]) = {}", lr.w0);
                    println!("W^1(node(F{q})[t,1/t]) = {}", lr.w1);
                    for w in &lr.warnings {
                        println!("  warning: {w}");
                    }
                }
                Ok(())
            }
            Err(e) => {
                eprintln!("{e}");
                Err(1)
            }
        },
        Command::KoszulVerify { n, bound, field, json } => {
            match cli::koszul_report(n, bound, &field, threads()) {
                Ok((reports, ok)) => {
                    if json {
                        println!("{}", serde_json::to_string_pretty(&reports).unwrap());
                    } else {
                        for r in &reports {
                            println!("n={} {:<28} {}", r.n, r.check, r.result);
                        }
                    }
                    if ok {
                        Ok(())
                    } else {
                        Err(1)
                    }
                }
                Err(e) => {
                    eprintln!("{e}");
                    Err(1)
                }
            }
        }
        Command::Table { name, q, n } => match cli::table(&name, &q, (0, n)) {
            Ok(t) => {
                print!("{t}");
                Ok(())
            }
            Err(e) => {
                eprintln!("{e}");
                Err(1)
            }
        },
    };
    match status {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
