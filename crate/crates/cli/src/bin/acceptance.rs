use freeloop_cli::acceptance::run_all;

fn main() {
    let outcomes = run_all();
    for o in &outcomes {
        println!("{o}");
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    println!("{passed}/{} criteria pass", outcomes.len());
    std::process::exit(if passed == outcomes.len() { 0 } else { 1 });
}
