//! Interactive search sessions over TCP. Frames are JSON objects, one per
//! line.
//!
//! Server to client:
//! `{"type":"state","goal":…,"proof":[…],"coins":[{"id","kind","description"}]}`,
//! `{"type":"jackpot","answer":"provable"|"notprovable","sequent":…,"proof_id":…}`,
//! `{"type":"illegal","reason":…}`.
//! Client to server: `{"type":"coin","id":…}`.

use std::io::{self, BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicU64, Ordering};
use std::thread;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::kernel::{machine, Answer, KernelConfig, LegalCoin, Output, Sequent, Slot};

static PROOF_IDS: AtomicU64 = AtomicU64::new(1);

#[derive(Deserialize)]
struct ClientFrame {
    #[serde(rename = "type")]
    kind: String,
    id: Option<String>,
}

/// Human-readable gloss of a coin on the current goal.
pub fn describe(slot: &Slot, coin: &LegalCoin) -> String {
    match coin {
        LegalCoin::ConsistencyCheck => "ask the theory whether the stored literals are inconsistent".into(),
        LegalCoin::Focus(i) => match slot.goal().gamma().iter().nth(*i) {
            Some(f) => format!("focus on {}", f.negate()),
            None => format!("focus on formula {i}"),
        },
        LegalCoin::Side(i) => format!("prove disjunct {}", i + 1),
        LegalCoin::Polarise(l) => format!("make {l} positive"),
        LegalCoin::Cut(l) => format!("cut on {l}"),
        LegalCoin::MoveNext { direction, kind } => {
            format!("move {:?} on {:?}", direction, kind).to_lowercase()
        }
    }
}

pub fn state_frame(slot: &Slot) -> Value {
    let coins: Vec<Value> = slot
        .legal_coins()
        .iter()
        .map(|c| json!({ "id": c.id(), "kind": c.kind(), "description": describe(slot, c) }))
        .collect();
    json!({
        "type": "state",
        "goal": slot.goal().to_string(),
        "proof": slot.outline(),
        "coins": coins,
    })
}

pub fn jackpot_frame(answer: &Answer) -> Value {
    let id = answer
        .proof()
        .map(|_| format!("proof-{}", PROOF_IDS.fetch_add(1, Ordering::Relaxed)));
    json!({
        "type": "jackpot",
        "answer": if answer.is_provable() { "provable" } else { "notprovable" },
        // the pruned sequent when there is a proof
        "sequent": answer.proof().map_or(answer.statement(), |p| &p.conclusion).to_string(),
        "proof_id": id,
    })
}

fn send(w: &mut impl Write, frame: &Value) -> io::Result<()> {
    writeln!(w, "{frame}")?;
    w.flush()
}

/// Runs one session to its jackpot. Returns `None` if the client leaves
/// first.
pub fn session<R: BufRead, W: Write>(
    reader: R,
    mut writer: W,
    start: Output,
) -> io::Result<Option<Answer>> {
    let mut slot = match start {
        Output::Jackpot(a) => {
            send(&mut writer, &jackpot_frame(&a))?;
            return Ok(Some(a));
        }
        Output::InsertCoin(s) => s,
    };
    send(&mut writer, &state_frame(&slot))?;
    let mut lines = reader.lines();
    while let Some(line) = lines.next().transpose()? {
        if line.trim().is_empty() {
            continue;
        }
        let illegal = |reason: String| json!({ "type": "illegal", "reason": reason });
        let id = match serde_json::from_str::<ClientFrame>(&line) {
            Ok(ClientFrame { kind, id: Some(id) }) if kind == "coin" => id,
            Ok(_) => {
                send(&mut writer, &illegal("expected {\"type\":\"coin\",\"id\":…}".into()))?;
                send(&mut writer, &state_frame(&slot))?;
                continue;
            }
            Err(e) => {
                send(&mut writer, &illegal(format!("malformed frame: {e}")))?;
                send(&mut writer, &state_frame(&slot))?;
                continue;
            }
        };
        let Some(coin) = slot.legal_coins().into_iter().find(|c| c.id() == id) else {
            send(&mut writer, &illegal(format!("no coin `{id}` in the current menu")))?;
            send(&mut writer, &state_frame(&slot))?;
            continue;
        };
        match slot.insert(coin.coin()) {
            Ok(Output::Jackpot(a)) => {
                send(&mut writer, &jackpot_frame(&a))?;
                return Ok(Some(a));
            }
            Ok(Output::InsertCoin(s)) => slot = s,
            Err(rejected) => {
                send(&mut writer, &illegal(rejected.error.to_string()))?;
                slot = rejected.slot;
            }
        }
        send(&mut writer, &state_frame(&slot))?;
    }
    Ok(None)
}

fn handle(stream: TcpStream, statement: Sequent, config: KernelConfig) -> io::Result<()> {
    let reader = BufReader::new(stream.try_clone()?);
    match machine(statement, &config) {
        Ok(start) => session(reader, stream, start).map(|_| ()),
        Err(e) => send(&mut &stream, &json!({ "type": "illegal", "reason": e.to_string() })),
    }
}

/// Accepts connections on `listener`, one thread and one independent search
/// per connection. Stops after `max_sessions` connections if given.
pub fn serve(
    listener: TcpListener,
    statement: Sequent,
    config: KernelConfig,
    max_sessions: Option<usize>,
) -> io::Result<()> {
    let mut workers = Vec::new();
    for (n, stream) in listener.incoming().enumerate() {
        let stream = stream?;
        let (statement, config) = (statement.clone(), config.clone());
        workers.push(thread::spawn(move || handle(stream, statement, config)));
        if max_sessions.is_some_and(|m| n + 1 >= m) {
            break;
        }
    }
    for w in workers {
        if let Ok(Err(e)) = w.join() {
            eprintln!("session ended with an error: {e}");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::io::Cursor;
    use std::sync::Arc;

    use super::*;
    use crate::formulas::Formula;
    use crate::theories::EmptyTheory;

    fn frames(bytes: &[u8]) -> Vec<Value> {
        std::str::from_utf8(bytes)
            .unwrap()
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect()
    }

    fn config() -> KernelConfig {
        KernelConfig::new(Arc::new(EmptyTheory))
    }

    #[test]
    fn true_statement_is_an_immediate_jackpot() {
        let start = machine(Sequent::goal(vec![Formula::TrueNeg]), &config()).unwrap();
        let mut out = Vec::new();
        let a = session(Cursor::new(""), &mut out, start).unwrap().unwrap();
        assert!(a.is_provable());
        let f = frames(&out);
        assert_eq!(f.len(), 1);
        assert_eq!(f[0]["type"], "jackpot");
        assert_eq!(f[0]["answer"], "provable");
    }

    #[test]
    fn illegal_ids_reoffer_the_state() {
        let start = machine(Sequent::goal(vec![Formula::FalseNeg]), &config()).unwrap();
        let script = "{\"type\":\"coin\",\"id\":\"focus:7\"}\nnot json\n{\"type\":\"coin\",\"id\":\"check\"}\n";
        let mut out = Vec::new();
        let a = session(Cursor::new(script), &mut out, start).unwrap().unwrap();
        assert!(!a.is_provable());
        let f = frames(&out);
        let kinds: Vec<&str> = f.iter().map(|x| x["type"].as_str().unwrap()).collect();
        assert_eq!(kinds, ["state", "illegal", "state", "illegal", "state", "jackpot"]);
        assert_eq!(f[0], f[2]);
        assert_eq!(f[0]["coins"][0]["id"], "check");
        assert_eq!(f[5]["proof_id"], Value::Null);
    }
}
