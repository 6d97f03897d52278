#![no_main]

use libfuzzer_sys::fuzz_target;
use superrll_scalar::{parse_ratfunc, RatFunc};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(first) = parse_ratfunc(s) else { return };
    let printed = first.to_string();
    let second: RatFunc = parse_ratfunc(&printed)
        .unwrap_or_else(|e| panic!("printed form `{printed}` does not reparse: {e}"));
    assert_eq!(first, second, "roundtrip changed `{s}` via `{printed}`");
    assert_eq!(printed, second.to_string());
});
