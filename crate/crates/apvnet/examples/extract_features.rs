//! Feature extraction on sample texts: plain APV, N-SAPV, and the
//! standard-subtracted variant.
//!
//! ```bash
//! cargo run --example extract_features
//! ```

use apvnet::features::{count_letters, extract, PreprocessConfig, StandardVector};

fn show(label: &str, components: &[f64]) {
    let sum: f64 = components.iter().sum();
    print!("{label:<12} sum {sum:+.6} | ");
    for (i, &c) in components.iter().enumerate().take(6) {
        print!("{}:{:.4} ", (b'a' + i as u8) as char, c);
    }
    println!("...");
}

fn main() {
    let text = "The quick brown fox jumps over the lazy dog, twice; the dog did not mind.";
    let counts = count_letters(text);
    println!("text: {text}");
    println!("letters counted: {}\n", counts.total());

    let apv = extract(text, &PreprocessConfig::apv()).unwrap();
    show("APV", apv.components());

    let one_sapv = extract(text, &PreprocessConfig::variant(1, false)).unwrap();
    show("1-SAPV", one_sapv.components());

    let one_sapv_ssm = extract(text, &PreprocessConfig::variant(1, true)).unwrap();
    show("1-SAPV, SSM", one_sapv_ssm.components());

    // The supplement makes letterless ("q"-free, digit-only, ...) inputs representable.
    let digits_only = extract("123 456 789", &PreprocessConfig::apv());
    println!("\ndigits-only text with N=0: {digits_only:?}");
    let rescued = extract("123 456 789", &PreprocessConfig::variant(1, false)).unwrap();
    println!(
        "digits-only text with N=1: every component = 1/26 = {:.6}",
        rescued.components()[0]
    );

    // Anagrams are indistinguishable by construction.
    let a = extract("listen", &PreprocessConfig::apv()).unwrap();
    let b = extract("silent", &PreprocessConfig::apv()).unwrap();
    println!("\n'listen' and 'silent' map to the same vector: {}", a.bits_eq(&b));

    let v0 = StandardVector::english();
    println!(
        "standard vector: e = {:.4}, z = {:.4} (unit sum {:.1})",
        v0.components()[4],
        v0.components()[25],
        v0.components().iter().sum::<f64>()
    );
}
