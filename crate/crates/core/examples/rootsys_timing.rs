fn main() {
    let start = std::time::Instant::now();
    let table = drincert::rootsys::verify_main_theorem(3);
    println!("elapsed: {:?}", start.elapsed());
    for row in &table.rows {
        println!(
            "{}: {} orbits, {} with (a)+(b), {} counterexamples",
            row.system,
            row.orbits_checked,
            row.ab_orbits,
            row.counterexamples.len()
        );
    }
    assert_eq!(table.total_counterexamples, 0);
}
