#![no_main]

use gdst::io::DatasetDocument;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(doc) = DatasetDocument::from_slice(data) else {
        return;
    };
    let Ok(obs) = doc.to_observed() else {
        return;
    };
    let round = DatasetDocument::from_observed(&obs);
    let reparsed =
        DatasetDocument::from_slice(round.to_json().as_bytes()).expect("canonical form parses");
    assert_eq!(round, reparsed);
    reparsed.to_observed().expect("canonical form validates");
});
