//! Drives the command-line front end in-process and lists the artifacts.

fn main() {
    let out = std::env::temp_dir().join("sphmax-cli-session");
    let out = out.to_str().expect("utf-8 temp path");
    let mut stdout = std::io::stdout().lock();
    for args in [
        vec![
            "avg", "--m", "2", "--f", "const:1", "--g", "const:1", "--t", "1", "--x", "0",
        ],
        vec!["region", "--m", "2", "--q", "1/3,1/3"],
        vec!["region", "--figure", "m=2"],
        vec!["norms", "--f", "plog:0.5,1,0.5"],
    ] {
        let argv = ["sphmax", "--out", out]
            .into_iter()
            .chain(args.iter().copied());
        let code = sphmax::cli::run(argv, &mut stdout);
        println!("-> exit {code}");
    }
    for entry in std::fs::read_dir(out).expect("output directory") {
        println!("{}", entry.expect("entry").path().display());
    }
}
