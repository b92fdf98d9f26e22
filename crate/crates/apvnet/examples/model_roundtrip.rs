//! Model persistence: the `APVNET` container round-trips parameters bit for
//! bit. See `nn::model_io` for the exact byte layout.
//!
//! ```bash
//! cargo run --example model_roundtrip
//! ```

use apvnet::nn::{MlpModel, DEFAULT_LAYER_DIMS};

fn main() {
    let model = MlpModel::init(42, &DEFAULT_LAYER_DIMS).unwrap();
    println!("layer dims: {:?}", model.layer_dims());
    println!("parameters: {}", model.num_parameters());

    let mut bytes = Vec::new();
    model.save(&mut bytes).unwrap();
    println!("serialized size: {} bytes", bytes.len());
    println!("magic: {:?}", std::str::from_utf8(&bytes[..6]).unwrap());

    let loaded = MlpModel::load(bytes.as_slice()).unwrap();
    println!("round trip bit-identical: {}", loaded == model);

    // A truncated stream or an unknown version is rejected.
    println!("truncated load: {:?}", MlpModel::load(&bytes[..40]).err().unwrap());
    let mut future = bytes.clone();
    future[6..10].copy_from_slice(&99u32.to_le_bytes());
    println!("version-99 load: {:?}", MlpModel::load(future.as_slice()).err().unwrap());
}
