#![no_main]

use libfuzzer_sys::fuzz_target;
use superrll::algebra::AlgebraElement;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(first) = s.parse::<AlgebraElement>() else { return };
    let printed = first.to_string();
    let second: AlgebraElement = printed
        .parse()
        .unwrap_or_else(|e| panic!("printed form `{printed}` does not reparse: {e}"));
    assert_eq!(first, second);
});
