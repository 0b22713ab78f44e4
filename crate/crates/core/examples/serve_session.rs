//! Starts the interaction server on an ephemeral port and plays one session
//! as a client that always picks the first offered coin.

use std::io::{BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::thread;

use focused_smt::frontend::{parse_dimacs, serve};
use focused_smt::kernel::KernelConfig;
use focused_smt::theories::TheoryKind;
use serde_json::{json, Value};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let statement = parse_dimacs(include_str!("problems/units.cnf"))?.statement.unwrap();
    let listener = TcpListener::bind("127.0.0.1:0")?;
    let addr = listener.local_addr()?;
    let config = KernelConfig::new(TheoryKind::Empty.instantiate());
    let server = thread::spawn(move || serve::serve(listener, statement, config, Some(1)));

    let mut stream = TcpStream::connect(addr)?;
    let mut frames = BufReader::new(stream.try_clone()?).lines();
    while let Some(line) = frames.next().transpose()? {
        let frame: Value = serde_json::from_str(&line)?;
        println!("<- {frame}");
        if frame["type"] == "jackpot" {
            break;
        }
        if frame["type"] == "state" {
            let id = frame["coins"][0]["id"].clone();
            let msg = json!({ "type": "coin", "id": id });
            println!("-> {msg}");
            writeln!(stream, "{msg}")?;
        }
    }
    drop(stream);
    server.join().expect("server thread")?;
    Ok(())
}
