//! The full neck-and-gluing pipeline for twisted bundles over T^2 x S^2:
//! profiles, scaling, the neck with its closed-form cross-check, seams,
//! the glued contact form and its dividing set.

use contact_bundles::gallery::{build_t2s2, GalleryOptions};
use contact_bundles::profiles::ProfileParams;

fn main() -> contact_bundles::Result<()> {
    let opts = GalleryOptions {
        resolution_scale: 0.5,
        ..Default::default()
    };
    for k in 0..=2 {
        let (pipe, _) = build_t2s2(k, &opts, ProfileParams::default())?;
        let max_t = pipe
            .assembly
            .dividing_t_values
            .iter()
            .fold(0.0f64, |acc, t| acc.max(t.abs()));
        println!(
            "k = {k}: contact min {:.4}, seam residual {:.1e}, neck oracle {:.1e}, dividing set at |t| <= {:.1e}",
            pipe.assembly.contact.min_value,
            pipe.assembly.seam_residual,
            pipe.neck.oracle_rel_err,
            max_t,
        );
    }
    Ok(())
}
