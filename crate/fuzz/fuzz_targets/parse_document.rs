#![no_main]

use libfuzzer_sys::fuzz_target;
use supertri::algebra::validate_presentation;
use supertri::io::PresentationDocument;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = PresentationDocument::parse(text) else {
        return;
    };
    let again = PresentationDocument::parse(&doc.to_json()).expect("emitted documents parse");
    assert_eq!(again, doc);
    if let Ok(raw) = doc.to_presentation() {
        let _ = validate_presentation(&raw);
    }
});
