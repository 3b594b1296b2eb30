#![no_main]

use levyspec::construction::PointFile;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(pf) = PointFile::from_json_str(s) else { return };
    if pf.params.levels > 3 || pf.params.n0 > 4096 {
        return;
    }
    if let Ok(c) = pf.check(1 << 16) {
        assert!(!c.pass || c.report.as_ref().is_some_and(|r| r.pass));
    }
});
