//! Entropies and mutual informations of a joint built from a Markov
//! factorization, and the chain-rule and entropy forms of the encoder's rate.

use semcom::limits::rate_decomposition;
use semcom::prob::{compose, conditional_mutual_information, entropy, mutual_information, Factor};
use semcom::{ChainModel, ConditionalKernel, DistortionSpec, EncoderStrategy, FiniteDistribution};

fn main() -> semcom::Result<()> {
    let p_w = FiniteDistribution::new(vec![0.5, 0.3, 0.2])?;
    let obs = ConditionalKernel::new(vec![vec![0.8, 0.2], vec![0.3, 0.7], vec![0.1, 0.9]])?;
    let joint = compose(&[Factor::source("W", &p_w), Factor::kernel(&["W"], &[("U", 2)], &obs)])?;

    let h_w = entropy(&p_w);
    let h_u = joint.entropy_of(&["U"])?;
    let i_wu = mutual_information(&joint, &["W"], &["U"])?;
    println!("H(W) = {h_w:.6}  H(U) = {h_u:.6}  I(W;U) = {i_wu:.6} bits");
    let h_u_w = joint.entropy_of(&["W", "U"])? - h_w;
    let h_w_u = joint.entropy_of(&["W", "U"])? - h_u;
    println!("H(W) + H(U|W) - H(W|U) = {:.6}", h_w + h_u_w - h_w_u);

    // A binary chain with side information; the rate of an encoder through
    // the channel used as test channel.
    let model = ChainModel::new(
        FiniteDistribution::uniform(2),
        ConditionalKernel::new(vec![vec![0.54, 0.36, 0.06, 0.04], vec![0.04, 0.06, 0.36, 0.54]])?,
        2,
        2,
        ConditionalKernel::new(vec![vec![0.95, 0.05], vec![0.05, 0.95]])?,
        DistortionSpec::hamming(2, 2, 2),
        1.0,
    )?;
    let g = EncoderStrategy::new(ConditionalKernel::new(vec![vec![0.9, 0.1], vec![0.2, 0.8]])?);
    let r = rate_decomposition(&model, &g, &model.channel)?;
    println!("I(W,U;Z|Y)                     = {:.12}", r.achievable_rate);
    println!("I(W,U;Z,Y) - I(W,U;Y)          = {:.12}", r.mutual_information_form());
    println!("H(U|Y)+H(W|U,Y)+H(Z|Y)-H(WUZ|Y) = {:.12}", r.entropy_form());
    println!("saved by side information I(W,U;Y) = {:.6}", r.side_info_savings);

    let j = semcom::limits::test_channel_joint(&model, &g, &model.channel)?;
    let direct = conditional_mutual_information(&j, &["W", "U"], &["Z"], &["Y"])?;
    println!("direct conditional MI          = {direct:.12}");
    Ok(())
}
