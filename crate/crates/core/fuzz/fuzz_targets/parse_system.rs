#![no_main]

use diamond::syntax::{parse_system, print_system};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    // never panics; anything accepted prints back to an equal system
    if let Ok(sys) = parse_system(text) {
        let printed = print_system(&sys);
        let again = parse_system(&printed).expect("printed system parses");
        assert_eq!(again.rules(), sys.rules());
        assert_eq!(print_system(&again), printed);
    }
});
