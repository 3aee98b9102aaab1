use std::io::{BufRead, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::{FrequencyOracle, OracleError};
use crate::poset::{Antichain, Taxonomy};

/// One answered question of an interactive session.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteractiveRecord {
    pub itemset: Vec<u64>,
    pub rendering: String,
    pub frequent: bool,
    /// Milliseconds since the Unix epoch.
    pub timestamp_ms: u64,
}

/// A human answering yes/no questions over a line-based channel.
pub struct InteractiveOracle<'t, R, W> {
    taxonomy: &'t Taxonomy,
    input: R,
    output: W,
    transcript: Vec<InteractiveRecord>,
}

impl<'t, R: BufRead, W: Write> InteractiveOracle<'t, R, W> {
    pub fn new(taxonomy: &'t Taxonomy, input: R, output: W) -> Self {
        InteractiveOracle {
            taxonomy,
            input,
            output,
            transcript: Vec::new(),
        }
    }

    pub fn transcript(&self) -> &[InteractiveRecord] {
        &self.transcript
    }

    pub fn into_transcript(self) -> Vec<InteractiveRecord> {
        self.transcript
    }

    /// Item labels joined by commas, or a placeholder for the empty itemset.
    pub fn render(&self, itemset: &Antichain) -> String {
        if itemset.is_empty() {
            return "(no items at all)".to_string();
        }
        itemset
            .iter()
            .map(|i| self.taxonomy.display_name(i))
            .collect::<Vec<_>>()
            .join(", ")
    }

    fn ask(&mut self, rendering: &str) -> Result<bool, OracleError> {
        writeln!(self.output, "Do these often occur together: {rendering}? [y/n]")?;
        loop {
            self.output.flush()?;
            let mut line = String::new();
            if self.input.read_line(&mut line)? == 0 {
                return Err(OracleError::SessionClosed);
            }
            match line.trim().to_ascii_lowercase().as_str() {
                "y" | "yes" => return Ok(true),
                "n" | "no" => return Ok(false),
                _ => writeln!(self.output, "Please answer y or n.")?,
            }
        }
    }
}

impl<R: BufRead, W: Write> FrequencyOracle for InteractiveOracle<'_, R, W> {
    fn is_frequent(&mut self, itemset: &Antichain) -> Result<bool, OracleError> {
        let rendering = self.render(itemset);
        let frequent = self.ask(&rendering)?;
        let timestamp_ms = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0);
        self.transcript.push(InteractiveRecord {
            itemset: self.taxonomy.ids_of(itemset),
            rendering,
            frequent,
            timestamp_ms,
        });
        Ok(frequent)
    }
}
