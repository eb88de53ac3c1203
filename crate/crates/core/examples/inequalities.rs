//! Evaluate functional inequalities on bump-modulated random fields.

use nsbl::inequalities::{
    check, constant_survey, default_check_grid, exponents_for, scalar_ensemble, BumpSettings, InequalityId, Params,
};

fn main() -> nsbl::Result<()> {
    let fields = scalar_ensemble(default_check_grid(), 3, 10, BumpSettings::default());

    let gn = exponents_for(InequalityId::GnL3, Params::default())?;
    let worst = fields.iter().map(|f| check(&gn, f).map(|c| c.ratio)).collect::<nsbl::Result<Vec<_>>>()?;
    println!("||v||_3 <= 0.59 ||v||^1/2 ||Dv||^1/2: worst ratio {:.3}", worst.iter().cloned().fold(0.0, f64::max));

    for (id, p) in [
        (InequalityId::Interpolation, Params::qr(3.0, 6.0)),
        (InequalityId::GagliardoSup, Params::q(6.0)),
        (InequalityId::HigherOrderGagliardo, Params::nqr(2, f64::INFINITY, 2.0)),
    ] {
        let spec = exponents_for(id, p)?;
        let s = constant_survey(&spec, &fields)?;
        println!("{:<24} {:?}  lhs/rhs in [{:.3}, {:.3}]", id.name(), spec.exponents, s.min, s.max);
    }
    Ok(())
}
