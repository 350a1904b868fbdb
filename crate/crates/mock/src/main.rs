//! Runs both mock servers until interrupted.

use relpub_mock::{MockArchive, MockGitLab};

fn main() {
    let gitlab = MockGitLab::start();
    let archive = MockArchive::start();
    println!("gitlab  {} token {}", gitlab.base_url(), gitlab.token());
    println!("archive {} token {}", archive.base_url(), archive.token());
    loop {
        std::thread::park();
    }
}
