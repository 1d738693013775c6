use std::io::Write;

fn main() {
    let threads = match qwalk_cli::threads_from_env(std::env::var("QWALK_THREADS").ok().as_deref()) {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(qwalk_cli::EXIT_USAGE);
        }
    };
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .expect("global thread pool is configured once");
    }
    let out = qwalk_cli::run(std::env::args_os(), &mut std::io::stdin());
    std::io::stdout().write_all(out.stdout.as_bytes()).ok();
    std::io::stderr().write_all(out.stderr.as_bytes()).ok();
    std::process::exit(out.code);
}
