//! Event log schema and sinks.
//!
//! Every run appends typed events to a JSONL stream; all analyses consume
//! only this stream. The schema is the wire contract between the simulator
//! and the analysis tools, so records here are plain serialisable data, not
//! domain objects.

use serde::{Deserialize, Serialize};
use std::io::{self, BufWriter, Write};
use std::path::Path;

/// What a robot collided with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "target", content = "id")]
pub enum ContactWith {
    Wall,
    Robot(u8),
}

/// Serialised meme: id, parent and the (turn, advance) segment list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemeRecord {
    pub meme_id: u64,
    pub parent_id: Option<u64>,
    pub segments: Vec<[f64; 2]>,
    pub owners: Vec<u8>,
}

/// Serialised story as exchanged between robots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StoryRecord {
    pub story_id: u64,
    pub parent_story_id: Option<u64>,
    pub teller_id: u8,
    /// Robot whose own what-if started this story's lineage.
    pub root_teller_id: u8,
    pub origin: StoryOrigin,
    pub tokens: Vec<String>,
    pub told_outcome: String,
    pub imagined_outcome: Option<String>,
    pub divergence: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "from")]
pub enum StoryOrigin {
    OwnWhatif,
    Retold(u8),
}

/// One simulated what-if inside a consequence-engine trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhatIfRecord {
    pub index: usize,
    pub action: String,
    /// Predicted positions, decimated; first and last points always present.
    pub trajectory: Vec<[f64; 2]>,
    pub outcome: String,
    pub time_to_contact: Option<f64>,
    pub goal_distance: f64,
    pub cost: f64,
    /// Model time covered by the simulation, seconds.
    pub t_span: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Event {
    Pose {
        t: f64,
        robot: u8,
        x: f64,
        y: f64,
        theta: f64,
    },
    Collision {
        t: f64,
        robot: u8,
        with: ContactWith,
    },
    Encounter {
        t: f64,
        a: u8,
        b: u8,
    },
    Spawn {
        t: f64,
        robot: u8,
    },
    /// A canonical seed meme registered as a lineage root.
    Seed {
        t: f64,
        meme: MemeRecord,
    },
    /// A robot received its initial copy of a seed meme.
    SeedCopy {
        t: f64,
        robot: u8,
        meme: MemeRecord,
    },
    Enactment {
        t: f64,
        robot: u8,
        meme_id: u64,
    },
    Imitation {
        t: f64,
        learner: u8,
        teacher: u8,
        meme: MemeRecord,
        fidelity: f64,
        high_fidelity: bool,
    },
    ImitationFailure {
        t: f64,
        learner: u8,
        teacher: u8,
        reason: String,
    },
    Eviction {
        t: f64,
        robot: u8,
        meme_id: u64,
    },
    StoreSnapshot {
        t: f64,
        robot: u8,
        meme_ids: Vec<u64>,
    },
    CeTrace {
        t: f64,
        robot: u8,
        cycle: u64,
        records: Vec<WhatIfRecord>,
        selected: usize,
    },
    /// A fresh own what-if narrativised for the first time (a story root).
    StoryRoot {
        t: f64,
        robot: u8,
        story: StoryRecord,
    },
    Exchange {
        t: f64,
        teller: u8,
        listener: u8,
        story: StoryRecord,
        /// True when the teller told a story from memory rather than a fresh
        /// what-if.
        retell: bool,
        malformed: bool,
    },
    RlEpisode {
        t: f64,
        episode: u32,
        steps: u32,
        reward: f64,
        success: bool,
        with_imitation: bool,
    },
}

impl Event {
    pub fn time(&self) -> f64 {
        match self {
            Event::Pose { t, .. }
            | Event::Collision { t, .. }
            | Event::Encounter { t, .. }
            | Event::Spawn { t, .. }
            | Event::Seed { t, .. }
            | Event::SeedCopy { t, .. }
            | Event::Enactment { t, .. }
            | Event::Imitation { t, .. }
            | Event::ImitationFailure { t, .. }
            | Event::Eviction { t, .. }
            | Event::StoreSnapshot { t, .. }
            | Event::CeTrace { t, .. }
            | Event::StoryRoot { t, .. }
            | Event::Exchange { t, .. }
            | Event::RlEpisode { t, .. } => *t,
        }
    }
}

pub trait EventSink {
    fn emit(&mut self, event: &Event);
}

/// Collects events in memory; used by tests and short runs.
#[derive(Debug, Default)]
pub struct MemorySink {
    pub events: Vec<Event>,
}

impl EventSink for MemorySink {
    fn emit(&mut self, event: &Event) {
        self.events.push(event.clone());
    }
}

/// Appends one JSON object per line to a writer.
pub struct JsonlSink<W: Write> {
    writer: BufWriter<W>,
}

impl JsonlSink<std::fs::File> {
    pub fn create(path: &Path) -> io::Result<Self> {
        Ok(Self {
            writer: BufWriter::new(std::fs::File::create(path)?),
        })
    }
}

impl<W: Write> JsonlSink<W> {
    pub fn new(writer: W) -> Self {
        Self {
            writer: BufWriter::new(writer),
        }
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.writer.flush()
    }
}

impl<W: Write> EventSink for JsonlSink<W> {
    fn emit(&mut self, event: &Event) {
        // Events are plain data; serialisation cannot fail.
        serde_json::to_writer(&mut self.writer, event).expect("serialise event");
        self.writer.write_all(b"\n").expect("write event");
    }
}

impl<W: Write> Drop for JsonlSink<W> {
    fn drop(&mut self) {
        let _ = self.writer.flush();
    }
}

/// Sends each event to both sinks; handy when a run should be analysed
/// in-process and logged to disk.
pub struct TeeSink<'a, A: EventSink, B: EventSink> {
    pub first: &'a mut A,
    pub second: &'a mut B,
}

impl<'a, A: EventSink, B: EventSink> EventSink for TeeSink<'a, A, B> {
    fn emit(&mut self, event: &Event) {
        self.first.emit(event);
        self.second.emit(event);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn events_round_trip_through_jsonl() {
        let events = vec![
            Event::Pose {
                t: 0.05,
                robot: 1,
                x: 0.1,
                y: -0.2,
                theta: 0.3,
            },
            Event::Collision {
                t: 0.13,
                robot: 0,
                with: ContactWith::Wall,
            },
            Event::Collision {
                t: 0.14,
                robot: 0,
                with: ContactWith::Robot(2),
            },
        ];
        let mut buf = Vec::new();
        {
            let mut sink = JsonlSink::new(&mut buf);
            for e in &events {
                sink.emit(e);
            }
        }
        let text = String::from_utf8(buf).unwrap();
        let parsed: Vec<Event> = text
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(parsed, events);
        assert!(text.lines().next().unwrap().contains("\"kind\":\"pose\""));
    }
}
