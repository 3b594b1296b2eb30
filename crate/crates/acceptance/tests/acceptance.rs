fn main() {
    let ids: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let out = levyspec_acceptance::run(&ids, |o| println!("{}", o.line()));
    let failed = out.iter().filter(|o| !o.pass).count();
    println!("acceptance: {} passed, {failed} failed", out.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
