use specdec::gamma::gamma_from_decoration;
use specdec::spectrum::{assemble_decorated_spectrum, BaseSize, SpectrumSet};
use specdec::Graph;

#[test]
fn readme_snippet() -> specdec::Result<()> {
    let a = Graph::complete(3).laplacian();
    let dg = gamma_from_decoration(&a, 0)?;
    assert!((dg.map.c + 2.0).abs() < 1e-10);
    assert_eq!(dg.remainder, vec![3.0]);

    let base = SpectrumSet::new(vec![[0.0, 8.0]], vec![])?;
    let spectrum = assemble_decorated_spectrum(&dg, &base, BaseSize::Infinite)?;
    let _ = spectrum;
    Ok(())
}
