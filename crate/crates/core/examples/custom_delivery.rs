//! Plug in a transport that counts messages and logs the first round.

use ratio_consensus::engine::{self, Delivery, Mailboxes, Message};
use ratio_consensus::{CounterexampleVariant, RunConfig, TopologySchedule};

struct Counting {
    inner: Mailboxes,
    sent: usize,
    log_first: usize,
}

impl Delivery for Counting {
    fn deliver(&mut self, sender: usize, receiver: usize, msg: Message) {
        if self.log_first > 0 {
            self.log_first -= 1;
            println!("{sender} -> {receiver}: x={:.4} y={:.4} z={} w={}", msg.x, msg.y, msg.z, msg.w);
        }
        self.sent += 1;
        self.inner.deliver(sender, receiver, msg);
    }

    fn take_inbox(&mut self, receiver: usize) -> Vec<(usize, Message)> {
        self.inner.take_inbox(receiver)
    }
}

fn main() -> ratio_consensus::Result<()> {
    let schedule = TopologySchedule::counterexample(CounterexampleVariant::Section5);
    let mut config = RunConfig::new(schedule, vec![2.0, 3.0, 2.0, 2.0, 2.0, 10.0]);
    config.n_prime = 5;

    let mut transport = Counting {
        inner: Mailboxes::new(6),
        sent: 0,
        log_first: 8,
    };
    let result = engine::run_with(&config, &mut transport)?;
    println!("{:?} after {} messages", result.outcome, transport.sent);
    println!("final ratios {:?}", result.final_ratios());
    Ok(())
}
