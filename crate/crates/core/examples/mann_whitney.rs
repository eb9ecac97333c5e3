//! Compare two rank samples with the Mann-Whitney U test.
//!
//! ```bash
//! cargo run --example mann_whitney
//! ```

use quickar::mann_whitney_u;

fn main() {
    let reformulated = [1.0, 3.0, 4.0, 8.0, 9.0, 12.0, 15.0, 21.0, 30.0, 44.0];
    let baseline = [11.0, 14.0, 18.0, 25.0, 33.0, 47.0, 52.0, 60.0, 71.0, 90.0];

    let r = mann_whitney_u(&reformulated, &baseline).expect("non-empty samples");
    println!("U = {}, p = {:.4}, MRD = {:.1}", r.u_statistic, r.p_value, r.mean_rank_difference);
    if r.mean_rank_difference < 0.0 {
        println!("the first sample ranks relevant results closer to the top");
    }
    if r.small_sample {
        println!("note: fewer than 8 values in a sample; the normal approximation is coarse");
    }

    let tiny = mann_whitney_u(&[1.0, 2.0, 3.0], &[10.0, 11.0, 12.0]).unwrap();
    println!(
        "{{1,2,3}} vs {{10,11,12}}: U = {}, p = {:.4}, small sample = {}",
        tiny.u_statistic, tiny.p_value, tiny.small_sample
    );
}
