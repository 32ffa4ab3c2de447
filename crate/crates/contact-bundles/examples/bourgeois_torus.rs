//! From the standard open book on the 3-sphere to an invariant contact
//! form on S^3 x T^2, with its dividing set and symplectic pieces.

use contact_bundles::bourgeois::{
    bourgeois_form, bourgeois_splitting, xy_fields, xy_identity_residual, OpenBookSpec,
};
use contact_bundles::contact_check;
use contact_bundles::profiles::make_cutoff;

fn main() -> contact_bundles::Result<()> {
    let ob = OpenBookSpec::standard_s3(10, 8, 0.8);
    let book = ob.validate()?;
    println!(
        "supported open book: contact min {:.3}, pages min {:.3}, binding slices min {:.3}",
        book.contact_on_n.min_value, book.pages_symplectic.min_value, book.binding_slices_min
    );

    let cutoff = make_cutoff(0.8, (0.25, 0.7))?;
    let (x, y) = xy_fields(&ob, &cutoff);
    println!(
        "x dy - y dx = rho^2 dphi residual: {:.2e}",
        xy_identity_residual(&ob, &x, &y)?
    );

    let (alpha, _) = bourgeois_form(&ob, &x, &y)?;
    let contact = contact_check(&alpha, 1e-9)?;
    println!("contact on S^3 x T^2: min {:.4}", contact.min_value);

    let split = bourgeois_splitting(&ob, &x, &y, 0.05)?;
    println!(
        "splitting: {} zeros on the pages, piece minima {:.3} / {:.3}",
        split.dividing.zero_points.len(),
        split.piece_plus.min_value,
        split.piece_minus.min_value
    );
    Ok(())
}
