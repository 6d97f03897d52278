#![no_main]

use libfuzzer_sys::fuzz_target;
use superrll::VerificationReport;

fuzz_target!(|data: &[u8]| {
    let Ok(first) = serde_json::from_slice::<VerificationReport>(data) else { return };
    let printed = serde_json::to_string(&first).expect("report serializes");
    let second: VerificationReport = serde_json::from_str(&printed).expect("printed report reparses");
    assert_eq!(first, second);
    assert_eq!(printed, serde_json::to_string(&second).unwrap());
});
