#![no_main]

use gdst::io::CbbaDocument;
use libfuzzer_sys::fuzz_target;

// Arbitrary bytes must never panic the parser or validator, and any
// document that validates must survive a canonical serialize/reparse
// round trip unchanged.
fuzz_target!(|data: &[u8]| {
    let Ok(doc) = CbbaDocument::from_slice(data) else {
        return;
    };
    let Ok(cbba) = doc.to_cbba() else {
        return;
    };
    let canonical = CbbaDocument::from_cbba(&cbba, doc.tolerance);
    let reparsed =
        CbbaDocument::from_slice(canonical.to_json().as_bytes()).expect("canonical form parses");
    assert_eq!(canonical, reparsed);
    let cbba2 = reparsed.to_cbba().expect("canonical form validates");
    assert_eq!(cbba, cbba2);
});
