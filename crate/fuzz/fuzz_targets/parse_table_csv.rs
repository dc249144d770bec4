#![no_main]

use libfuzzer_sys::fuzz_target;
use supertri::io::TableDocument;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = TableDocument::from_csv(text) else { return };
    let back = TableDocument::from_csv(&doc.to_csv()).expect("emitted tables parse");
    assert!(back.identical(&doc));
});
