use supsim::markov::ChainModel;
use supsim::rng::replicate;
use supsim::sas::{simulate_sas, SeriesConfig};
use supsim::verify::ks_two_sample;

fn maxima(cfg: &SeriesConfig, reps: usize) -> Vec<f64> {
    let bn = cfg.bn();
    replicate(11, 0x70, reps, |rng| simulate_sas(cfg, rng).iter().fold(0.0, |m: f64, x| m.max(x.abs())) / bn)
}

#[test]
fn doubling_terms_barely_moves_the_maximum() {
    let model = ChainModel::zipf(0.7).unwrap();
    let base = SeriesConfig::new(&model, 1.2, 16384, 3e-3).unwrap();
    let doubled = SeriesConfig::with_terms(&model, 1.2, 16384, 2 * base.terms(), 3e-3).unwrap();
    let ks = ks_two_sample(&maxima(&base, 2000), &maxima(&doubled, 2000));
    assert!(ks < 0.005, "KS {ks} with J = {}", base.terms());
}
