fn main() {
    // forward cone width at depth 10
    let ifs = slice_lab::takagi::takagi_ifs(2.0/3.0).unwrap();
    let params = slice_lab::takagi::constants(2.0/3.0).unwrap();
    let seed = slice_lab::takagi::forward_cone_seed(&params);
    for n in [1, 4, 8, 10, 12] {
        let out = slice_lab::affine_ifs::furstenberg_enclosure(&ifs, &seed, n, slice_lab::affine_ifs::ConeDirection::Forward).unwrap();
        println!("depth {n}: intervals {} total length {:.6}", out.intervals().len(), out.total_length());
    }
    // strip mass monotonicity probe
    use slice_lab::slicer::{Line, Strip};
    use slice_lab::linalg2::Vec2;
    let strip = Strip::new(Line::sloped(0.4, Vec2::new(0.3, 0.4)).unwrap(), 0.08).unwrap();
    for m in 6..=13 {
        let b = slice_lab::measure::strip_mass(2.0/3.0, &strip, m, slice_lab::takagi::HullKind::Box).unwrap();
        println!("m={m}: lower {:.6} upper {:.6}", b.lower, b.upper);
    }
}
