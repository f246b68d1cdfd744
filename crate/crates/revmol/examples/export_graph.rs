//! Renders labeled molecules as DOT graphs: atoms become nodes, torus
//! families become edges annotated with their marks, and saddle families
//! carry their integer mark as a comment.

use revmol::cli::{self, RunConfig};

const CONFIG: &str = r#"
    [profile]
    L = 3.141592653589793
    surface = "projective-plane"
    f_coeffs = [[1, 0.4], [3, 0.2]]
    v_coeffs = [[0, 0.45], [1, -0.45]]

    [energy]
    h = 1.0
"#;

fn main() {
    let config = RunConfig::from_toml_str(CONFIG).unwrap();
    let artifacts = cli::run(&config).unwrap();
    print!("{}", artifacts.graph);

    // The graph renderer also covers skipped energies: they come out as an
    // empty graph holding only the reason.
    let singular = CONFIG.replace("h = 1.0", "h = 0.9");
    let config = RunConfig::from_toml_str(&singular).unwrap();
    let artifacts = cli::run(&config).unwrap();
    print!("{}", artifacts.graph);
}
