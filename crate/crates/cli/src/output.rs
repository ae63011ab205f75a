//! Rendering of results in the three output formats.

use std::io::{self, Write};

use pmotion::catalog::IdentityInfo;
use pmotion::combinatorics::{FrequencySequence, Members, MultiPartition};
use pmotion::motion::{render_config, render_steps, MotionTrace, StepKind, TraceStep};
use pmotion::verify::Report;
use pmotion::TruncatedSeries;
use serde::Serialize;
use serde_json::{json, Value};

use crate::Format;

pub struct Emitter<W: Write> {
    w: W,
    format: Format,
    no_timing: bool,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn kind_name(kind: StepKind) -> &'static str {
    match kind {
        StepKind::Motion => "motion",
        StepKind::Shift => "shift",
    }
}

fn steps_json(steps: &[TraceStep]) -> Value {
    steps
        .iter()
        .map(|s| json!({"kind": kind_name(s.kind), "focus": s.focus, "seq": s.seq}))
        .collect()
}

impl<W: Write> Emitter<W> {
    pub fn new(w: W, format: Format, no_timing: bool) -> Self {
        Emitter { w, format, no_timing }
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.w.flush()
    }

    fn json<T: Serialize + ?Sized>(&mut self, v: &T) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut self.w, v)?;
        writeln!(self.w)
    }

    pub fn registry(&mut self, infos: &[IdentityInfo]) -> io::Result<()> {
        match self.format {
            Format::Json => self.json(infos),
            Format::Csv => {
                writeln!(self.w, "name,params,constraint,sides")?;
                for i in infos {
                    writeln!(
                        self.w,
                        "{},{},{},{}",
                        i.name,
                        csv_field(&i.params.join(" ")),
                        csv_field(i.constraint),
                        csv_field(&i.sides.join(" "))
                    )?;
                }
                Ok(())
            }
            Format::Text => {
                for i in infos {
                    writeln!(
                        self.w,
                        "{:<18} [{}] {}  sides: {}",
                        i.name,
                        i.params.join(","),
                        i.constraint,
                        i.sides.join(", ")
                    )?;
                    writeln!(self.w, "{:<18} {}", "", i.summary)?;
                }
                Ok(())
            }
        }
    }

    /// A single report as an object, or several as an array.
    pub fn reports(&mut self, reports: &[Report], many: bool) -> io::Result<()> {
        let reports: Vec<Report> = reports
            .iter()
            .cloned()
            .map(|r| if self.no_timing { r.without_timing() } else { r })
            .collect();
        match self.format {
            Format::Json if many => self.json(&reports),
            Format::Json => self.json(&reports[0]),
            Format::Csv => {
                writeln!(
                    self.w,
                    "subject,params,status,checked,failures,check,at,left,right,elapsedMs"
                )?;
                for r in &reports {
                    let params = r
                        .params
                        .iter()
                        .map(|(k, v)| format!("{k}={v}"))
                        .collect::<Vec<_>>()
                        .join(" ");
                    let (check, at, left, right) = match &r.first_mismatch {
                        Some(m) => (
                            m.check.clone(),
                            m.at.map(|a| a.to_string()).unwrap_or_default(),
                            m.left.clone(),
                            m.right.clone(),
                        ),
                        None => Default::default(),
                    };
                    writeln!(
                        self.w,
                        "{},{},{},{},{},{},{},{},{},{}",
                        csv_field(&r.subject),
                        csv_field(&params),
                        if r.passed() { "pass" } else { "fail" },
                        r.checked,
                        r.failures,
                        csv_field(&check),
                        at,
                        csv_field(&left),
                        csv_field(&right),
                        r.elapsed_ms
                    )?;
                }
                Ok(())
            }
            Format::Text => {
                for r in &reports {
                    if self.no_timing {
                        writeln!(self.w, "{}", r.line())?;
                    } else {
                        writeln!(self.w, "{} ({} ms)", r.line(), r.elapsed_ms)?;
                    }
                }
                if many {
                    let failed = reports.iter().filter(|r| !r.passed()).count();
                    writeln!(self.w, "{} instances, {failed} failed", reports.len())?;
                }
                Ok(())
            }
        }
    }

    pub fn members(&mut self, members: &Members) -> io::Result<()> {
        match (self.format, members) {
            (Format::Json, Members::Sequences(v)) => self.json(v),
            (Format::Json, Members::Tuples(v)) => self.json(v),
            (Format::Csv, Members::Sequences(v)) => {
                writeln!(self.w, "weight,entries")?;
                for f in v {
                    writeln!(self.w, "{},{}", f.weight(), csv_field(&f.to_string()))?;
                }
                Ok(())
            }
            (Format::Csv, Members::Tuples(v)) => {
                writeln!(self.w, "weight,bla,frame")?;
                for t in v {
                    writeln!(
                        self.w,
                        "{},{},{}",
                        t.weight(),
                        csv_field(&t.bla.to_string()),
                        csv_field(&t.frame.to_string())
                    )?;
                }
                Ok(())
            }
            (Format::Text, Members::Sequences(v)) => {
                for f in v {
                    writeln!(self.w, "{}: {f}", f.weight())?;
                }
                Ok(())
            }
            (Format::Text, Members::Tuples(v)) => {
                for t in v {
                    writeln!(self.w, "{}: {} frame {}", t.weight(), t.bla, t.frame)?;
                }
                Ok(())
            }
        }
    }

    pub fn series(&mut self, s: &TruncatedSeries) -> io::Result<()> {
        match self.format {
            Format::Json => self.json(s),
            Format::Csv => write!(self.w, "{}", s.to_csv()),
            Format::Text => writeln!(self.w, "{s} + O(q^{})", s.order() + 1),
        }
    }

    pub fn motion_trace(
        &mut self,
        initial: &FrequencySequence,
        start: i64,
        m: u64,
        steps: &[TraceStep],
        result: &FrequencySequence,
        focus: i64,
    ) -> io::Result<()> {
        match self.format {
            Format::Json => self.json(&json!({
                "initial": initial,
                "start": start,
                "m": m,
                "steps": steps_json(steps),
                "result": result,
                "focus": focus,
            })),
            Format::Csv => {
                writeln!(self.w, "step,kind,focus,entries")?;
                writeln!(self.w, "0,start,{start},{}", csv_field(&initial.to_string()))?;
                for (n, s) in steps.iter().enumerate() {
                    writeln!(
                        self.w,
                        "{},{},{},{}",
                        n + 1,
                        kind_name(s.kind),
                        s.focus,
                        csv_field(&s.seq.to_string())
                    )?;
                }
                Ok(())
            }
            Format::Text => {
                write!(self.w, "{}", render_steps(initial, start, steps))?;
                writeln!(self.w, "{} steps; result {result} with focus {focus}", steps.len())
            }
        }
    }

    pub fn lambda_trace(&mut self, bla: &MultiPartition, trace: &MotionTrace) -> io::Result<()> {
        match self.format {
            Format::Json => {
                let stages: Vec<Value> = trace
                    .stages
                    .iter()
                    .map(|st| {
                        json!({
                            "i": st.i,
                            "part": st.part,
                            "component": st.component,
                            "start": st.start,
                            "end": st.end,
                            "after": st.after,
                            "steps": steps_json(&st.steps),
                        })
                    })
                    .collect();
                self.json(&json!({
                    "bla": bla.to_string(),
                    "frame": trace.frame,
                    "stages": stages,
                    "result": trace.result(),
                }))
            }
            Format::Csv => {
                writeln!(self.w, "i,part,component,start,end,after")?;
                for st in &trace.stages {
                    writeln!(
                        self.w,
                        "{},{},{},{},{},{}",
                        st.i,
                        st.part,
                        st.component,
                        st.start,
                        st.end,
                        csv_field(&st.after.to_string())
                    )?;
                }
                Ok(())
            }
            Format::Text => {
                writeln!(self.w, "bla {bla}, frame {}", trace.frame)?;
                for st in &trace.stages {
                    let before = trace.theta(st.i + 1);
                    writeln!(
                        self.w,
                        "θ({}) from θ({}): part {} of component {}, focus {} → {}",
                        st.i,
                        st.i + 1,
                        st.part,
                        st.component,
                        st.start,
                        st.end
                    )?;
                    if st.steps.is_empty() {
                        let lo = before.min_index().unwrap_or(st.start).min(st.start);
                        let hi = before.max_index().unwrap_or(st.start).max(st.start + 1);
                        writeln!(self.w, "  {}", render_config(before, lo, hi, st.start))?;
                    } else {
                        for line in render_steps(before, st.start, &st.steps).lines() {
                            writeln!(self.w, "  {line}")?;
                        }
                    }
                }
                writeln!(self.w, "Λ = {}", trace.result())
            }
        }
    }
}
