#![no_main]

use libfuzzer_sys::fuzz_target;
use supertri::exactlin::CycloNumber;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(v) = text.parse::<CycloNumber>() else { return };
    let back: CycloNumber = v.to_string().parse().expect("emitted cells parse");
    assert!(back.identical(&v), "{text:?} -> {v}");
});
