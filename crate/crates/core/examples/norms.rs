//! Norm tables, J-norms and the binary field format.

use nsbl::fields::{curl, j_norm, norm_table, nsf1, Field, GridSpec, VectorField};

fn main() -> nsbl::Result<()> {
    let g = GridSpec::periodic_2pi(24)?;
    let u: VectorField = Field::from_fn(g, |x| [x[2].sin() + x[1].cos(), x[0].sin() + x[2].cos(), x[1].sin() + x[0].cos()]);
    let table = norm_table(&u, &[0, 1, 2], &[2.0, 3.0, f64::INFINITY])?;
    for e in table.entries() {
        println!("{e:?}");
    }
    println!("J_0..J_2: {:.4} {:.4} {:.4}", j_norm(&u, 0), j_norm(&u, 1), j_norm(&u, 2));
    println!("ABC is Beltrami: |curl u - u| = {:.1e}", curl(&u).max_abs_diff(&u)?);

    let mut buf = Vec::new();
    nsf1::write(&mut buf, &u)?;
    let back: VectorField = nsf1::read(buf.as_slice())?;
    println!("{} bytes, round trip exact: {}", buf.len(), back.max_abs_diff(&u)? == 0.0);
    Ok(())
}
