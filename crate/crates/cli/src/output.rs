//! Output rendering: one envelope type serialized three ways.
//!
//! Every command produces an [`OutputRecord`]; `--output json` serializes
//! the whole record (the only run-dependent field is `elapsed_ns`), while
//! `--output csv` and `--output text` render just the payload. All CSV
//! schemas are frozen — tools may parse them by position:
//!
//! | command                  | columns                                                          |
//! |--------------------------|------------------------------------------------------------------|
//! | `chi`                    | `n,chi,form,terms_evaluated,strategy`                            |
//! | `pi`                     | `x,count,form,source,strategy`                                   |
//! | `omega`                  | `n,omega,contributing_primes,strategy` (primes space-separated)  |
//! | `verify`                 | `max,checked,agreements,all_agree,pi_v1,pi_v2,pi_sieve,omega_checked_up_to,strategy` |
//! | `precision` (scan)       | `m,n_lo,n_hi,strategy,max_deviation,misclassification_count`     |
//! | `precision --find-first` | `n,m,raw_product`                                                |
//! | `precision --dump-factors` | `m,n,j,numerator_arg,numerator,denominator,ratio`              |
//! | `bench`                  | `form,x,count,elapsed_ns`                                        |

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};

use primesine::formulas::{ChiResult, OmegaResult, PiResult};
use primesine::indicator::FactorDump;
use primesine::precision::{reports_to_csv, reports_to_json, Misclassification, PrecisionReport};
use primesine::verify::VerifyReport;
use primesine::EvalStrategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

/// The uniform envelope around every command's payload.
#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub command: &'static str,
    pub inputs: BTreeMap<&'static str, Value>,
    pub result: Value,
    pub strategy: EvalStrategy,
    /// Wall-clock time of the computation. Excluded from golden
    /// comparisons; everything else is byte-stable across runs.
    pub elapsed_ns: u64,
}

impl OutputRecord {
    pub fn new(
        command: &'static str,
        inputs: BTreeMap<&'static str, Value>,
        result: Value,
        strategy: EvalStrategy,
        elapsed_ns: u64,
    ) -> Self {
        OutputRecord {
            command,
            inputs,
            result,
            strategy,
            elapsed_ns,
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// Payloads carry their own text and CSV renderings; JSON comes from the
/// envelope so its shape is uniform across commands.
pub enum Rendered {
    Chi(ChiResult),
    Pi(PiResult, &'static str),
    Omega(OmegaResult),
    Verify(VerifyReport),
    PrecisionScan(Vec<PrecisionReport>),
    FindFirst {
        m_max: u64,
        n_max: u64,
        witness: Option<Misclassification>,
    },
    Dump(Vec<FactorDump>),
    Bench {
        rows: Vec<BenchRow>,
        counts_agree: bool,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub form: String,
    pub x: u64,
    pub count: u64,
    pub elapsed_ns: u64,
}

impl Rendered {
    pub fn to_value(&self) -> Value {
        match self {
            Rendered::Chi(r) => serde_json::to_value(r).expect("chi payload"),
            Rendered::Pi(r, source) => {
                let mut v = serde_json::to_value(r).expect("pi payload");
                v["source"] = json!(source);
                v
            }
            Rendered::Omega(r) => serde_json::to_value(r).expect("omega payload"),
            Rendered::Verify(r) => serde_json::to_value(r).expect("verify payload"),
            Rendered::PrecisionScan(reports) => reports_to_json(reports),
            Rendered::FindFirst {
                m_max,
                n_max,
                witness,
            } => json!({
                "m_max": m_max,
                "n_max": n_max,
                "found": witness.is_some(),
                "witness": witness,
            }),
            Rendered::Dump(dumps) => serde_json::to_value(dumps).expect("dump payload"),
            Rendered::Bench { rows, counts_agree } => json!({
                "rows": rows,
                "counts_agree": counts_agree,
            }),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Rendered::Chi(r) => format!(
                "chi({}) = {}  [form={} terms={} strategy={}]\n",
                r.n, r.chi, r.form, r.terms_evaluated, r.strategy
            ),
            Rendered::Pi(r, source) => format!(
                "pi({}) = {}  [form={} source={}]\n",
                r.x, r.count, r.form, source
            ),
            Rendered::Omega(r) => {
                let primes: Vec<String> =
                    r.contributing_primes.iter().map(u64::to_string).collect();
                format!(
                    "omega({}) = {}  [primes={}]\n",
                    r.n,
                    r.omega,
                    primes.join(",")
                )
            }
            Rendered::Verify(r) => {
                let mut out = format!("{}\n", r.summary());
                let _ = writeln!(
                    out,
                    "pi({}): v1={} v2={} sieve={}",
                    r.max, r.pi_formula_v1, r.pi_formula_v2, r.pi_sieve
                );
                let _ = writeln!(out, "omega checked for n <= {}", r.omega_checked_up_to);
                if let Some(d) = &r.first_disagreement {
                    let _ = writeln!(
                        out,
                        "FIRST DISAGREEMENT at n={} [{}]: {}",
                        d.n, d.check, d.details
                    );
                }
                out
            }
            Rendered::PrecisionScan(reports) => {
                let mut out = String::new();
                for r in reports {
                    let _ = writeln!(
                        out,
                        "m={} n=[{},{}] strategy={} max_deviation={:e} misclassifications={}",
                        r.m,
                        r.n_lo,
                        r.n_hi,
                        r.strategy,
                        r.max_deviation,
                        r.misclassifications.len()
                    );
                }
                out
            }
            Rendered::FindFirst {
                m_max,
                n_max,
                witness,
            } => match witness {
                Some(w) => format!(
                    "first misclassification: m={} n={} raw_product={:e}\n",
                    w.m, w.n, w.raw_product
                ),
                None => format!("no misclassification for m <= {m_max}, n <= {n_max}\n"),
            },
            Rendered::Dump(dumps) => {
                let mut out = String::new();
                for d in dumps {
                    let _ = writeln!(
                        out,
                        "E_{}({}) raw_product={:e} e_value={}",
                        d.m, d.n, d.raw_product, d.e_value
                    );
                    for f in &d.factors {
                        let _ = writeln!(
                            out,
                            "  j={} arg={} numerator={:.16} denominator={:.16} ratio={:.16}",
                            f.j, f.numerator_arg, f.numerator, f.denominator, f.ratio
                        );
                    }
                }
                out
            }
            Rendered::Bench { rows, counts_agree } => {
                let mut out = String::new();
                for r in rows {
                    let _ = writeln!(
                        out,
                        "{}: pi({}) = {} in {:.3} ms",
                        r.form,
                        r.x,
                        r.count,
                        r.elapsed_ns as f64 / 1e6
                    );
                }
                let _ = writeln!(
                    out,
                    "{}",
                    if *counts_agree {
                        "counts agree"
                    } else {
                        "COUNTS DISAGREE"
                    }
                );
                out
            }
        }
    }

    pub fn to_csv(&self, strategy: EvalStrategy) -> String {
        match self {
            Rendered::Chi(r) => format!(
                "n,chi,form,terms_evaluated,strategy\n{},{},{},{},{}\n",
                r.n, r.chi, r.form, r.terms_evaluated, strategy
            ),
            Rendered::Pi(r, source) => format!(
                "x,count,form,source,strategy\n{},{},{},{},{}\n",
                r.x, r.count, r.form, source, strategy
            ),
            Rendered::Omega(r) => {
                let primes: Vec<String> =
                    r.contributing_primes.iter().map(u64::to_string).collect();
                format!(
                    "n,omega,contributing_primes,strategy\n{},{},{},{}\n",
                    r.n,
                    r.omega,
                    primes.join(" "),
                    strategy
                )
            }
            Rendered::Verify(r) => format!(
                "max,checked,agreements,all_agree,pi_v1,pi_v2,pi_sieve,omega_checked_up_to,strategy\n\
                 {},{},{},{},{},{},{},{},{}\n",
                r.max,
                r.checked,
                r.agreements,
                r.all_agree,
                r.pi_formula_v1,
                r.pi_formula_v2,
                r.pi_sieve,
                r.omega_checked_up_to,
                strategy
            ),
            Rendered::PrecisionScan(reports) => reports_to_csv(reports),
            Rendered::FindFirst { witness, .. } => {
                let mut out = String::from("n,m,raw_product\n");
                if let Some(w) = witness {
                    let _ = writeln!(out, "{},{},{}", w.n, w.m, w.raw_product);
                }
                out
            }
            Rendered::Dump(dumps) => {
                let mut out = String::from("m,n,j,numerator_arg,numerator,denominator,ratio\n");
                for d in dumps {
                    for f in &d.factors {
                        let _ = writeln!(
                            out,
                            "{},{},{},{},{},{},{}",
                            d.m, d.n, f.j, f.numerator_arg, f.numerator, f.denominator, f.ratio
                        );
                    }
                }
                out
            }
            Rendered::Bench { rows, .. } => {
                let mut out = String::from("form,x,count,elapsed_ns\n");
                for r in rows {
                    let _ = writeln!(out, "{},{},{},{}", r.form, r.x, r.count, r.elapsed_ns);
                }
                out
            }
        }
    }
}
