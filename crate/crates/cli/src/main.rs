use clap::{Parser, Subcommand};
use nilform_cli::KnotSource;

#[derive(Parser)]
#[command(name = "nilform", version, about = "Class-2 nilpotent quadratic-form invariants of knots and mapping classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Center of the free class-2 nilpotent group fixed by the companion lift.
    Center {
        /// Polynomial in t, e.g. "t^2 - 3*t + 1".
        #[arg(long)]
        poly: String,
        #[arg(long)]
        json: bool,
    },
    /// Quadratic form of a knot.
    Knot {
        /// PD code, inline or a file path.
        #[arg(long, group = "source")]
        pd: Option<String>,
        /// Knot table name, e.g. 5_2.
        #[arg(long, group = "source")]
        name: Option<String>,
        /// Pretzel parameters, e.g. "3,3,-3".
        #[arg(long, group = "source", allow_hyphen_values = true)]
        pretzel: Option<String>,
        /// Extra knot table (JSON object name -> PD string).
        #[arg(long, env = "NILFORM_TABLE")]
        table: Option<String>,
        #[arg(long)]
        lift_seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Quadratic form of a mapping class given by a twist word.
    Mcg {
        #[arg(long, default_value_t = 2)]
        genus: usize,
        /// Signed curve indices composed as written (leftmost outermost), e.g. "2 3 -4 -5 1".
        #[arg(long, allow_hyphen_values = true)]
        twists: String,
        #[arg(long)]
        json: bool,
    },
    /// Run the golden suite.
    Verify {
        #[arg(long, env = "NILFORM_TABLE")]
        table: Option<String>,
        #[arg(long)]
        lift_seed: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

fn parse_pretzel(s: &str) -> Result<Vec<i32>, String> {
    s.split(',').map(|p| p.trim().parse::<i32>().map_err(|e| format!("bad pretzel parameter '{p}': {e}"))).collect()
}

fn main() {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Center { poly, json } => nilform_cli::center(&poly, json),
        Command::Knot { pd, name, pretzel, table, lift_seed, json } => {
            let source = match (pd, name, pretzel) {
                (Some(p), _, _) => KnotSource::Pd(p),
                (_, Some(n), _) => KnotSource::Name(n),
                (_, _, Some(p)) => match parse_pretzel(&p) {
                    Ok(v) => KnotSource::Pretzel(v),
                    Err(e) => {
                        eprintln!("error: {e}");
                        std::process::exit(2);
                    }
                },
                _ => {
                    eprintln!("error: one of --pd, --name, --pretzel is required");
                    std::process::exit(2);
                }
            };
            nilform_cli::knot(&source, table.as_deref(), lift_seed, json)
        }
        Command::Mcg { genus, twists, json } => nilform_cli::mcg(genus, &twists, json),
        Command::Verify { table, lift_seed, json } => nilform_cli::verify(table.as_deref(), lift_seed, json),
    };
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
