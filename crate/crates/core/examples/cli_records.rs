//! Driving the command line in-process and reading its JSON records back.

use watson_lattice::cli::{run_args, OutputRecord, Status};

fn main() {
    let out = run_args(["table", "--family", "J", "--d", "1,2,3", "--eta", "1,1.1", "--format", "json"]);
    let records: Vec<OutputRecord> = serde_json::from_str(&out.stdout).expect("table emits a JSON array");
    for r in &records {
        match r.status {
            Status::Ok => println!("J(d={}, eta={}) = {}", r.d, r.eta, r.value.unwrap()),
            s => println!("J(d={}, eta={}) is {}", r.d, r.eta, s.token()),
        }
    }

    let out = run_args(["eval", "--family", "J", "--d", "2", "--eta", "1"]);
    print!("\n{}", out.stdout);
    println!("exit code {}", out.exit_code);

    let out = run_args(["physics", "--d", "2.5", "--eta", "1", "--spin", "0.5", "--format", "csv"]);
    print!("\n{}", out.stdout);
}
