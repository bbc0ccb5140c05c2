use std::time::Instant;

fn main() {
    let suite = hbl_core::verify::default_suite();
    let mut total_reports = 0;
    let start = Instant::now();
    for entry in &suite {
        let t = Instant::now();
        let reports = hbl_core::verify::run_check(entry).unwrap();
        let fails = reports.iter().filter(|r| !r.pass).count();
        total_reports += reports.len();
        println!(
            "{:<16} seed={:<4} reports={:<4} fails={} {:.2}s",
            entry.check,
            entry.seed,
            reports.len(),
            fails,
            t.elapsed().as_secs_f64()
        );
    }
    println!("total: {} reports in {:.1}s", total_reports, start.elapsed().as_secs_f64());
}
