//! Line-oriented instance and assignment files.
//!
//! ```text
//! # comment
//! p <machines> <jobs>
//! e <u> <v> <weight>          edge job (u = v for a loop)
//! j <weight> <m1> <m2> ...    job with an arbitrary allowed set
//! ```
//!
//! Weights are positive integers or `a/b` fractions. Assignment files hold
//! one `<job-id> <machine-id>` pair per line.

use num_rational::Ratio;
use thiserror::Error;

use crate::model::{Instance, ModelError, Orientation, RawJob};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

/// Non-blank lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.parse()
        .map_err(|_| ParseError::at(line, format!("invalid {what} `{tok}`")))
}

pub fn parse_weight(tok: &str, line: usize) -> Result<Ratio<u64>, ParseError> {
    let w = match tok.split_once('/') {
        Some((a, b)) => {
            let a: u64 = parse_num(a, line, "weight numerator")?;
            let b: u64 = parse_num(b, line, "weight denominator")?;
            if b == 0 {
                return Err(ParseError::at(line, "weight denominator is zero"));
            }
            Ratio::new(a, b)
        }
        None => Ratio::from_integer(parse_num(tok, line, "weight")?),
    };
    if *w.numer() == 0 {
        return Err(ParseError::at(line, "weight must be positive"));
    }
    Ok(w)
}

pub fn parse(text: &str) -> Result<Instance, ParseError> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| ParseError::at(0, "missing `p <machines> <jobs>` header"))?;
    let (machines, job_count): (usize, usize) = match header.as_slice() {
        ["p", m, n] => (
            parse_num(m, hline, "machine count")?,
            parse_num(n, hline, "job count")?,
        ),
        _ => return Err(ParseError::at(hline, "expected `p <machines> <jobs>`")),
    };

    let mut jobs = Vec::with_capacity(job_count);
    let mut distinct: Vec<Ratio<u64>> = Vec::new();
    let mut last_line = hline;
    for (line, tokens) in lines {
        last_line = line;
        if jobs.len() == job_count {
            return Err(ParseError::at(
                line,
                format!("more job lines than the {job_count} declared"),
            ));
        }
        let (weight, allowed): (Ratio<u64>, Vec<usize>) = match tokens.as_slice() {
            ["e", u, v, w] => (
                parse_weight(w, line)?,
                vec![
                    parse_num(u, line, "machine index")?,
                    parse_num(v, line, "machine index")?,
                ],
            ),
            ["j", w, ms @ ..] if !ms.is_empty() => (
                parse_weight(w, line)?,
                ms.iter()
                    .map(|m| parse_num(m, line, "machine index"))
                    .collect::<Result<_, _>>()?,
            ),
            _ => {
                return Err(ParseError::at(
                    line,
                    "expected `e <u> <v> <weight>` or `j <weight> <m1> ...`",
                ))
            }
        };
        if let Some(&m) = allowed.iter().find(|&&m| m >= machines) {
            return Err(ParseError::at(
                line,
                format!("machine index {m} out of range (0..{machines})"),
            ));
        }
        if !distinct.contains(&weight) {
            distinct.push(weight);
            if distinct.len() > 2 {
                return Err(ParseError::at(
                    line,
                    format!("third distinct weight {weight}; at most two are supported"),
                ));
            }
        }
        jobs.push(RawJob::new(weight, allowed));
    }
    if jobs.len() != job_count {
        return Err(ParseError::at(
            last_line,
            format!("header declares {job_count} jobs, found {}", jobs.len()),
        ));
    }
    Instance::new(machines, jobs).map_err(|e| {
        let line = match e {
            ModelError::BigJobArity { job, .. } => job_line(text, job),
            _ => 0,
        };
        ParseError::at(line, e.to_string())
    })
}

fn job_line(text: &str, job: usize) -> usize {
    content_lines(text).nth(job + 1).map_or(0, |(l, _)| l)
}

/// Canonical text form; `parse(&serialize(i)) == i`.
pub fn serialize(instance: &Instance) -> String {
    let mut out = format!("p {} {}\n", instance.machine_count(), instance.job_count());
    for job in instance.jobs() {
        let w = instance.raw_weight(job.id);
        match job.allowed[..] {
            [u] => out.push_str(&format!("e {u} {u} {w}\n")),
            [u, v] => out.push_str(&format!("e {u} {v} {w}\n")),
            ref many => {
                out.push_str(&format!("j {w}"));
                for m in many {
                    out.push_str(&format!(" {m}"));
                }
                out.push('\n');
            }
        }
    }
    out
}

/// Reads `<job-id> <machine-id>` lines into a per-job table. Unlisted jobs
/// stay `None`; listing a job twice is an error.
pub fn parse_assignment(text: &str, job_count: usize) -> Result<Vec<Option<usize>>, ParseError> {
    let mut table = vec![None; job_count];
    for (line, tokens) in content_lines(text) {
        let [job, machine] = tokens.as_slice() else {
            return Err(ParseError::at(line, "expected `<job-id> <machine-id>`"));
        };
        let job: usize = parse_num(job, line, "job id")?;
        let machine: usize = parse_num(machine, line, "machine id")?;
        let slot = table
            .get_mut(job)
            .ok_or_else(|| ParseError::at(line, format!("job {job} out of range")))?;
        if slot.replace(machine).is_some() {
            return Err(ParseError::at(line, format!("job {job} assigned twice")));
        }
    }
    Ok(table)
}

/// Completes a parsed table into an orientation, naming the first missing job.
pub fn assignment_to_orientation(
    table: &[Option<usize>],
) -> Result<Orientation, crate::model::VerifyError> {
    table
        .iter()
        .enumerate()
        .map(|(job, m)| m.ok_or(crate::model::VerifyError::Missing { job }))
        .collect::<Result<Vec<_>, _>>()
        .map(Orientation::new)
}

pub fn serialize_assignment(orientation: &Orientation) -> String {
    orientation
        .assignment
        .iter()
        .enumerate()
        .map(|(j, m)| format!("{j} {m}\n"))
        .collect()
}
