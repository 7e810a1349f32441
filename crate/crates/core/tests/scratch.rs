// temporary debug scaffolding; removed before finalizing
use polarity_core::analysis::*;
use polarity_core::calculus::CalculusConfig;

#[test]
fn dbg_fuzz_timing() {
    let t = std::time::Instant::now();
    let report = soundness_fuzz(&CalculusConfig::base(), 500, 20260809, true);
    eprintln!("base fuzz: {:?}", t.elapsed());
    for l in report.lines() {
        eprintln!("{l}");
    }
    assert_eq!(report.total_violations(), 0);

    let t = std::time::Instant::now();
    let report = soundness_fuzz(&CalculusConfig::rough(), 500, 20260809, true);
    eprintln!("rough fuzz: {:?}", t.elapsed());
    for l in report.lines() {
        eprintln!("{l}");
    }
    assert_eq!(report.total_violations(), 0);

    let t = std::time::Instant::now();
    let mutated = soundness_fuzz(&CalculusConfig::base(), 500, 20260809, false);
    eprintln!("mutated fuzz: {:?} violations={}", t.elapsed(), mutated.total_violations());
    assert!(mutated.total_violations() > 0);
}
