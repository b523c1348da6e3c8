#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Parsing untrusted files must never panic or blow up; on success the
    // axiom checker must terminate and serialize∘parse must be stable.
    let Ok(c) = cohh::format::parse_presentation(text) else {
        return;
    };
    let _report = cohh::check_coalgebra(&c);
    let json = cohh::format::to_json(&c);
    let again = cohh::format::parse_presentation(&json).expect("serializer output parses");
    assert_eq!(json, cohh::format::to_json(&again));
});
