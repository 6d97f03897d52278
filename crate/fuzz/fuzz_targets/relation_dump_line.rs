#![no_main]

use libfuzzer_sys::fuzz_target;
use superrll::relations::{parse_dump_line, read_dump};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    // whole files go through the reader; it must never panic
    let _ = read_dump(s.as_bytes());
    let line = s.lines().next().unwrap_or("");
    let Ok((element, prov)) = parse_dump_line(line, 1) else { return };
    if prov.contains('\n') || prov.contains('\r') {
        return;
    }
    let printed = format!("{element}  # {prov}");
    let (again, prov2) =
        parse_dump_line(&printed, 1).unwrap_or_else(|e| panic!("`{printed}` does not reparse: {e}"));
    assert_eq!(element, again);
    assert_eq!(prov, prov2);
});
