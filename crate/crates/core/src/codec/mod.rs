//! Entropy coding and the `.cfl` container.

pub mod bits;
pub mod container;
pub mod predict;
pub mod rice;

pub use container::{
    decode_container, encode_container, encode_image, parse_container, ContainerHeader,
    EncodedImage, SubbandStream, WbSide, HEADER_LEN,
};
pub use rice::{rice_decode, rice_encode, rice_param_estimate, unzigzag, zigzag};
