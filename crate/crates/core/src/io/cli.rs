//! The `folia` command line. Exit status 0 on success, 1 on a mathematical
//! negative (non-integrable input, failed verification, ...), 2 on usage
//! or parse errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use super::cert::CertificateDocument;
use super::parse::{parse_document, parse_point, parse_ratfun, FormDocument};
use crate::algebra::Rational;
use crate::blowup::{blowup_chart, case_tag, expand_at_point};
use crate::classify::{classify, verify_certificate, Hints};
use crate::error::Error;
use crate::foliation::{
    affine_restrict, check_integrable, jet_order, radial_contraction, saturate, ChartPoint,
    Foliation, Integrability,
};
use crate::forms::VField;
use crate::transverse::{gvs_compute, gvs_verify, DEFAULT_CAP};

#[derive(Parser, Debug)]
#[command(name = "folia", about = "Exact analysis of degree-four foliations on projective space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrability, radial condition and saturation of a form.
    Check { file: PathBuf },
    /// Degree of the foliation defined by the saturated form.
    Degree { file: PathBuf },
    /// Jet order at a point of an affine chart.
    Jet {
        file: PathBuf,
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        chart: Option<usize>,
    },
    /// Blow-up chart data and case tag at a point.
    Blowup {
        file: PathBuf,
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        chart: Option<usize>,
    },
    /// Godbillon-Vey sequence along a coordinate field.
    Gvs {
        file: PathBuf,
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Classify and print or write the certificate document.
    Classify {
        file: PathBuf,
        #[arg(long)]
        point: Option<String>,
        #[arg(long)]
        chart: Option<usize>,
        #[arg(long = "hint-factor")]
        hint_factor: Option<String>,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Re-verify a certificate document against a foliation.
    Verify { certificate: PathBuf, foliation: PathBuf },
}

enum Fail {
    Usage(String),
    Math(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        match e {
            Error::Syntax { .. } | Error::UnknownVariable(_) | Error::Io(_) | Error::Certificate(_) | Error::BadChart(_) | Error::PointDimension { .. } => {
                Fail::Usage(e.to_string())
            }
            _ => Fail::Math(e.to_string()),
        }
    }
}

type Out<'a> = &'a mut dyn Write;

fn read(path: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn document(path: &Path) -> Result<FormDocument, Fail> {
    Ok(parse_document(&read(path)?)?)
}

fn located(doc: &FormDocument, point: &Option<String>, chart: Option<usize>) -> Result<ChartPoint, Fail> {
    let chart = chart.or(doc.chart).unwrap_or(0);
    let point: Vec<Rational> = match point {
        Some(p) => parse_point(p)?,
        None => doc
            .point
            .clone()
            .ok_or_else(|| Fail::Usage("a point is required (--point or `point:`)".into()))?,
    };
    Ok(ChartPoint { chart, point })
}

fn w(out: Out, text: impl AsRef<str>) {
    let _ = writeln!(out, "{}", text.as_ref());
}

fn run(cli: Cli, out: Out) -> Result<(), Fail> {
    match cli.command {
        Command::Check { file } => {
            let doc = document(&file)?;
            let form = doc.form;
            let mut good = true;
            match check_integrable(&form) {
                Integrability::Integrable => w(out, "integrable: yes"),
                Integrability::NotIntegrable(t) => {
                    good = false;
                    w(out, "integrable: no");
                    w(out, format!("witness: {t}"));
                }
            }
            let r = radial_contraction(&form);
            good &= r.is_zero();
            w(out, format!("radial contraction: {}", r.render()));
            if !form.is_zero() {
                let s = saturate(&form)?;
                if s == form {
                    w(out, "saturated: yes");
                } else {
                    w(out, "saturated: no");
                    w(out, format!("saturation: {s}"));
                }
            }
            if good {
                Ok(())
            } else {
                Err(Fail::Math("check failed".into()))
            }
        }
        Command::Degree { file } => {
            let f = Foliation::saturating(document(&file)?.form)?;
            w(out, f.degree().to_string());
            Ok(())
        }
        Command::Jet { file, point, chart } => {
            let doc = document(&file)?;
            let p = located(&doc, &point, chart)?;
            let f = Foliation::saturating(doc.form)?;
            let a = affine_restrict(&f, p.chart)?;
            w(out, jet_order(&a, &p.point)?.to_string());
            Ok(())
        }
        Command::Blowup { file, point, chart } => {
            let doc = document(&file)?;
            let p = located(&doc, &point, chart)?;
            let f = Foliation::saturating(doc.form)?;
            let e = expand_at_point(&f, p.chart, &p.point)?;
            let b = blowup_chart(&e)?;
            let json = serde_json::json!({ "case": case_tag(&b), "chart_data": b });
            w(out, serde_json::to_string_pretty(&json).expect("serializable"));
            Ok(())
        }
        Command::Gvs { file, field, cap } => {
            let doc = document(&file)?;
            if !doc.vars.contains(&field) {
                return Err(Fail::Usage(format!("unknown field variable `{field}`")));
            }
            let s = gvs_compute(&doc.form, &VField::partial(&field), cap)?;
            for (k, f) in s.forms.iter().enumerate() {
                w(out, format!("omega{k}: {f}"));
            }
            if s.capped {
                w(out, format!("capped after {cap} steps"));
                return Err(Fail::Math("sequence did not terminate".into()));
            }
            w(out, format!("length: {}", s.length()));
            match gvs_verify(&s) {
                Ok(()) => {
                    w(out, "verified: Omega ^ dOmega = 0");
                    Ok(())
                }
                Err(e) => Err(Fail::Math(e.to_string())),
            }
        }
        Command::Classify {
            file,
            point,
            chart,
            hint_factor,
            emit,
        } => {
            let doc = document(&file)?;
            let p = if point.is_some() || doc.point.is_some() {
                Some(located(&doc, &point, chart)?)
            } else {
                None
            };
            let f = Foliation::saturating(doc.form)?;
            let hints = Hints {
                factor: match hint_factor {
                    Some(t) => Some(parse_ratfun(&t, None)?),
                    None => None,
                },
            };
            let c = classify(&f, p.as_ref(), &hints)?;
            let d = CertificateDocument::new(c, &f);
            match emit {
                Some(path) => {
                    std::fs::write(&path, d.to_text()).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))?;
                    w(out, format!("{} -> {}", d.certificate.tag(), path.display()));
                }
                None => {
                    let _ = write!(out, "{}", d.to_text());
                }
            }
            if d.passed() {
                Ok(())
            } else {
                Err(Fail::Math("certificate did not verify".into()))
            }
        }
        Command::Verify {
            certificate,
            foliation,
        } => {
            let d = CertificateDocument::from_text(&read(&certificate)?)?;
            let f = Foliation::saturating(document(&foliation)?.form)?;
            let report = verify_certificate(&d.certificate, &f);
            for line in report.transcript() {
                w(out, line);
            }
            if report.transcript() != d.transcript {
                w(out, "note: recorded transcript differs");
            }
            if report.ok() {
                Ok(())
            } else {
                Err(Fail::Math(format!("failed: {}", report.failures().join(", "))))
            }
        }
    }
}

/// Runs the command line `argv` (including the program name).
pub fn run_command<I, T>(argv: I, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match run(cli, out) {
        Ok(()) => 0,
        Err(Fail::Math(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Fail::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
    }
}
