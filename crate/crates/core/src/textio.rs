//! Plain-text instance and schedule files.
//!
//! Both formats are line-oriented ASCII with LF endings and single-space
//! separators:
//!
//! ```text
//! pbs-instance 1          pbs-schedule 1
//! n m d                   P
//! E                       D k        (per packet)
//! v u w   (E lines)       v u amount (k lines per packet)
//! ```
//!
//! Station ids are 1-based on disk and zero-based in memory. Parsing is
//! strictly syntactic plus per-file sanity (positive weights, ids in range,
//! no duplicate edges); semantic agreement between a schedule and an
//! instance is `validate_schedule`'s job, so a parsed packet may well carry
//! an amount exceeding its duration.

use std::fmt;

use crate::model::{Edge, Instance, Packet, PacketItem, Schedule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    MalformedHeader,
    BadFieldCount { expected: usize },
    BadInteger,
    StationCountZero,
    OverheadZero,
    ZeroWeight,
    ZeroAmount,
    IdOutOfRange,
    DuplicateEdge,
    UnexpectedEnd,
    TrailingData,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::MalformedHeader => write!(f, "malformed header"),
            ParseErrorKind::BadFieldCount { expected } => {
                write!(f, "expected {expected} space-separated fields")
            }
            ParseErrorKind::BadInteger => write!(f, "bad integer"),
            ParseErrorKind::StationCountZero => write!(f, "station count must be ≥ 1"),
            ParseErrorKind::OverheadZero => write!(f, "overhead must be ≥ 1"),
            ParseErrorKind::ZeroWeight => write!(f, "weight must be ≥ 1"),
            ParseErrorKind::ZeroAmount => write!(f, "amount must be ≥ 1"),
            ParseErrorKind::IdOutOfRange => write!(f, "id out of range"),
            ParseErrorKind::DuplicateEdge => write!(f, "duplicate edge"),
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of file"),
            ParseErrorKind::TrailingData => write!(f, "unexpected trailing data"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// 1-based line number.
    pub line: usize,
}

impl ParseError {
    fn at(kind: ParseErrorKind, line: usize) -> Self {
        ParseError { kind, line }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, line {}", self.kind, self.line)
    }
}

impl std::error::Error for ParseError {}

/// Line cursor over the raw text; tracks 1-based line numbers and tolerates
/// exactly one trailing newline.
struct Lines<'a> {
    lines: Vec<&'a str>,
    next: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines: Vec<&str> = text.split('\n').collect();
        if lines.last() == Some(&"") {
            lines.pop();
        }
        Lines { lines, next: 0 }
    }

    fn line_no(&self) -> usize {
        self.next
    }

    fn take(&mut self) -> Result<&'a str, ParseError> {
        let line = self
            .lines
            .get(self.next)
            .copied()
            .ok_or_else(|| ParseError::at(ParseErrorKind::UnexpectedEnd, self.next + 1))?;
        self.next += 1;
        Ok(line)
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.next < self.lines.len() {
            Err(ParseError::at(ParseErrorKind::TrailingData, self.next + 1))
        } else {
            Ok(())
        }
    }
}

fn fields(line: &str, expected: usize, line_no: usize) -> Result<Vec<u64>, ParseError> {
    let parts: Vec<&str> = line.split(' ').collect();
    if parts.len() != expected {
        return Err(ParseError::at(
            ParseErrorKind::BadFieldCount { expected },
            line_no,
        ));
    }
    parts
        .into_iter()
        .map(|p| {
            p.parse::<u64>()
                .map_err(|_| ParseError::at(ParseErrorKind::BadInteger, line_no))
        })
        .collect()
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut lines = Lines::new(text);

    let header = lines.take()?;
    if header != "pbs-instance 1" {
        return Err(ParseError::at(ParseErrorKind::MalformedHeader, 1));
    }

    let dims = fields(lines.take()?, 3, lines.line_no())?;
    let (n, m, d) = (dims[0], dims[1], dims[2]);
    if n == 0 || m == 0 {
        return Err(ParseError::at(ParseErrorKind::StationCountZero, 2));
    }
    if d == 0 {
        return Err(ParseError::at(ParseErrorKind::OverheadZero, 2));
    }

    let count = fields(lines.take()?, 1, lines.line_no())?[0];

    let mut edges = Vec::with_capacity(count as usize);
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..count {
        let row = fields(lines.take()?, 3, lines.line_no())?;
        let line_no = lines.line_no();
        let (v, u, w) = (row[0], row[1], row[2]);
        if v < 1 || v > n || u < 1 || u > m {
            return Err(ParseError::at(ParseErrorKind::IdOutOfRange, line_no));
        }
        if w == 0 {
            return Err(ParseError::at(ParseErrorKind::ZeroWeight, line_no));
        }
        if !seen.insert((v, u)) {
            return Err(ParseError::at(ParseErrorKind::DuplicateEdge, line_no));
        }
        edges.push(Edge::new((v - 1) as usize, (u - 1) as usize, w));
    }
    lines.finish()?;

    Ok(Instance::new(n as usize, m as usize, d, edges)
        .expect("parser enforces every instance invariant"))
}

pub fn emit_instance(instance: &Instance) -> String {
    let mut out = String::new();
    out.push_str("pbs-instance 1\n");
    out.push_str(&format!(
        "{} {} {}\n",
        instance.n_transmitters(),
        instance.n_receivers(),
        instance.overhead()
    ));
    out.push_str(&format!("{}\n", instance.edges().len()));
    for e in instance.edges() {
        out.push_str(&format!("{} {} {}\n", e.tx + 1, e.rx + 1, e.weight));
    }
    out
}

pub fn parse_schedule(text: &str) -> Result<Schedule, ParseError> {
    let mut lines = Lines::new(text);

    let header = lines.take()?;
    if header != "pbs-schedule 1" {
        return Err(ParseError::at(ParseErrorKind::MalformedHeader, 1));
    }

    let packet_count = fields(lines.take()?, 1, lines.line_no())?[0];

    let mut packets = Vec::with_capacity(packet_count as usize);
    for _ in 0..packet_count {
        let head = fields(lines.take()?, 2, lines.line_no())?;
        let (duration, item_count) = (head[0], head[1]);
        let mut items = Vec::with_capacity(item_count as usize);
        for _ in 0..item_count {
            let row = fields(lines.take()?, 3, lines.line_no())?;
            let line_no = lines.line_no();
            let (v, u, amount) = (row[0], row[1], row[2]);
            if v < 1 || u < 1 {
                return Err(ParseError::at(ParseErrorKind::IdOutOfRange, line_no));
            }
            if amount == 0 {
                return Err(ParseError::at(ParseErrorKind::ZeroAmount, line_no));
            }
            items.push(PacketItem::new((v - 1) as usize, (u - 1) as usize, amount));
        }
        packets.push(Packet::with_duration(duration, items));
    }
    lines.finish()?;

    Ok(Schedule::new(packets))
}

pub fn emit_schedule(schedule: &Schedule) -> String {
    let mut out = String::new();
    out.push_str("pbs-schedule 1\n");
    out.push_str(&format!("{}\n", schedule.packets().len()));
    for p in schedule.packets() {
        out.push_str(&format!("{} {}\n", p.duration(), p.items().len()));
        for it in p.items() {
            out.push_str(&format!("{} {} {}\n", it.tx + 1, it.rx + 1, it.amount));
        }
    }
    out
}
