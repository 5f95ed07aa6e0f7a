use pi2bench::machines::{
    collatz, ground_truth, halt_after, loop_forever, parse_program, sample_programs, HaltStatus,
    Program,
};
use proptest::prelude::*;

fn collatz_reaches_one(mut n: u64, max_iter: u32) -> bool {
    for _ in 0..max_iter {
        if n == 1 {
            return true;
        }
        n = if n.is_multiple_of(2) {
            n / 2
        } else {
            3 * n + 1
        };
    }
    n == 1
}

#[test]
fn halt_after_halts_exactly_on_time() {
    for s in 1..1000 {
        let p = halt_after(s);
        assert_eq!(ground_truth(&p, 0, 5000), HaltStatus::HaltedAt(s), "s={s}");
        assert_eq!(ground_truth(&p, 12345, s - 1), HaltStatus::Running, "s={s}");
    }
    assert_eq!(ground_truth(&halt_after(0), 7, 10), HaltStatus::HaltedAt(0));
}

#[test]
fn loop_forever_never_halts() {
    for input in [0, 1, 2, 1000] {
        assert_eq!(
            ground_truth(&loop_forever(), input, 100_000),
            HaltStatus::Running
        );
    }
}

#[test]
fn collatz_machine_halts_on_every_small_input() {
    let p = collatz();
    for n in 1..=64 {
        assert!(collatz_reaches_one(n, 1000));
        assert!(
            ground_truth(&p, n, 2_000_000).is_halted(),
            "collatz machine did not halt on {n}"
        );
    }
    assert_eq!(ground_truth(&p, 0, 100_000), HaltStatus::Running);
}

#[test]
fn collatz_steps_grow_with_orbit_length() {
    // 27 has a famously long orbit; 32 collapses straight down.
    let p = collatz();
    let HaltStatus::HaltedAt(long) = ground_truth(&p, 27, 10_000_000) else {
        panic!("27 should halt");
    };
    let HaltStatus::HaltedAt(short) = ground_truth(&p, 32, 10_000_000) else {
        panic!("32 should halt");
    };
    assert!(long > 10 * short, "{long} vs {short}");
}

#[test]
fn library_round_trips_through_text() {
    for (name, p) in sample_programs() {
        let text = p.to_text();
        let back: Program = text.parse().unwrap();
        assert_eq!(back, p, "{name}");
        assert_eq!(back.to_text(), text);
    }
}

#[test]
fn parse_errors_name_the_line() {
    let cases = [
        ("states: a h ; init: a ; halt: h\na 0 -> b 0 R\n", "line 2"),
        ("states: a h ; init: a ; halt: h\na 0 -> h 0 X\n", "line 2"),
        ("states: a a ; init: a ; halt:\n", "duplicate state"),
        (
            "states: a h ; init: a ; halt: h\na * -> h * S\nh 0 -> a 0 S\n",
            "line 3",
        ),
        (
            "states: a h ; init: a ; halt: h\na 0 -> h 0 S\n",
            "not total",
        ),
        ("a 0 -> a 0 S\n", "header"),
    ];
    for (text, needle) in cases {
        let err = parse_program(text).unwrap_err().to_string();
        assert!(err.contains(needle), "{err:?} lacks {needle:?}");
    }
}

proptest! {
    #[test]
    fn quanta_compose(input in 0u64..200, a in 0u64..300, b in 0u64..300, which in 0usize..3) {
        let p = match which {
            0 => collatz(),
            1 => halt_after(250),
            _ => loop_forever(),
        };
        let (split, s1) = p.run_quantum(p.init(input), a);
        let (split, s2) = p.run_quantum(split, b);
        let (whole, s) = p.run_quantum(p.init(input), a + b);
        prop_assert_eq!(&split, &whole);
        prop_assert_eq!(s2, s);
        if s1.is_halted() {
            prop_assert_eq!(s1, s);
        }
    }

    #[test]
    fn runs_are_deterministic(input in any::<u32>(), steps in 0u64..2000) {
        let p = collatz();
        let a = p.run_quantum(p.init(input as u64), steps);
        let b = p.run_quantum(p.init(input as u64), steps);
        prop_assert_eq!(a, b);
    }
}
