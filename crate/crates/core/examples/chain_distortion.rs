//! Builds a chain, checks it, and evaluates both parties' expected distortion
//! for a few encoder/decoder pairs, along with the decoder's best responses.

use semcom::equilibria::{decoder_best_responses, TIE_TOLERANCE};
use semcom::model::{expected_distortion, validate_model};
use semcom::{ChainModel, ConditionalKernel, DecoderStrategy, DistortionSpec, EncoderStrategy, FiniteDistribution, Party};

fn main() -> semcom::Result<()> {
    let enc = vec![vec![0.6, 0.0], vec![1.0, 0.0]];
    let dec = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
    let model = ChainModel::new(
        FiniteDistribution::uniform(2),
        // Column u * |Y| + y.
        ConditionalKernel::new(vec![vec![0.54, 0.36, 0.06, 0.04], vec![0.04, 0.06, 0.36, 0.54]])?,
        2,
        2,
        ConditionalKernel::new(vec![vec![0.95, 0.05], vec![0.05, 0.95]])?,
        DistortionSpec::reduced(&enc, &dec, 2, 2)?,
        1.0,
    )?;
    assert!(validate_model(&model).is_empty());

    let truthful = EncoderStrategy::deterministic(2, &[0, 1]);
    let babbling = EncoderStrategy::deterministic(2, &[0, 0]);
    let follow = DecoderStrategy::channel_output(2, 2);
    let side_info = DecoderStrategy::deterministic(2, &[0, 0, 1, 1]);

    for (gn, g) in [("truthful", &truthful), ("babbling", &babbling)] {
        for (hn, h) in [("follow channel", &follow), ("follow side info", &side_info)] {
            let de = expected_distortion(&model, g, h, Party::Encoder)?;
            let dd = expected_distortion(&model, g, h, Party::Decoder)?;
            println!("{gn:>9} / {hn:<16}  D_E = {de:.4}  D_D = {dd:.4}");
        }
        let br = decoder_best_responses(&model, g, TIE_TOLERANCE)?;
        for c in &br.per_context {
            println!("    context (y={}, x̂={}) p={:.3} best {:?}", c.y, c.x_hat, c.probability, c.best);
        }
    }
    Ok(())
}
