//! Acceptance criteria for `levyspec`, each checked against a reference computation
//! written independently of the library code it exercises.

use std::time::Instant;

mod criteria;
pub mod oracle;

pub use criteria::CRITERIA;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "{} {:>2} {:<28} {:>7.1}s  {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub run: fn() -> Result<String, String>,
}

/// Runs the selected criteria (all when `ids` is empty), calling `report` after each.
pub fn run(ids: &[u32], mut report: impl FnMut(&Outcome)) -> Vec<Outcome> {
    let mut out = vec![];
    for c in CRITERIA.iter().filter(|c| ids.is_empty() || ids.contains(&c.id)) {
        let t = Instant::now();
        let r = std::panic::catch_unwind(c.run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let (pass, detail) = match r {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let o = Outcome { id: c.id, name: c.name, pass, detail, seconds: t.elapsed().as_secs_f64() };
        report(&o);
        out.push(o);
    }
    out
}
