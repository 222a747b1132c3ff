use std::io::Write;

use super::hermite::SampledCurve;
use super::ode::RibaucourTrajectory;

/// Writes one row per node: `s,h1,h2,h3,K,phix,…,phitilx,…`.
pub fn write_csv(out: &mut impl Write, traj: &RibaucourTrajectory, transformed: &SampledCurve) -> std::io::Result<()> {
    let axes = ["x", "y", "z"];
    let d = traj.c().model_dim();
    let mut header = vec!["s", "h1", "h2", "h3", "K"].into_iter().map(String::from).collect::<Vec<_>>();
    header.extend(axes[..d].iter().map(|a| format!("phi{a}")));
    header.extend(axes[..d].iter().map(|a| format!("phitil{a}")));
    writeln!(out, "{}", header.join(","))?;
    let c = traj.c().curvature();
    for ((st, node), tilde) in traj.states.iter().zip(&traj.sampled.nodes).zip(&transformed.nodes) {
        let mut row = vec![st.s, st.h[0], st.h[1], st.h[2], st.first_integral(c)];
        row.extend(&node.position);
        row.extend(&tilde.position);
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.17e}")).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    Ok(())
}
