//! PGM reading and writing, luma conversion and histograms.
//!
//! ```text
//! cargo run -p tonevis --example pgm_io
//! ```

use tonevis::{load_pgm, rgb_to_brightness, save_pgm};

fn main() {
    // ASCII PGM with a 4-bit maxval and comments in the header
    let ascii = b"P2\n# tiny test card\n4 2\n15\n0 5 10 15\n15 10 5 0\n";
    let image = load_pgm(ascii).unwrap();
    println!(
        "loaded {}x{}: {:?}",
        image.width(),
        image.height(),
        image.samples()
    );

    let binary = save_pgm(&image);
    let header_len = binary.len() - image.pixel_count();
    println!(
        "binary header {:?}, raster {:?}",
        String::from_utf8_lossy(&binary[..header_len]),
        &binary[header_len..]
    );
    assert_eq!(load_pgm(&binary).unwrap(), image);

    // colour input is reduced to luma before any analysis
    let rgb = [255, 0, 0, 0, 255, 0, 0, 0, 255, 255, 255, 255];
    let grey = rgb_to_brightness(&rgb, 2, 2).unwrap();
    println!("luma of R, G, B, white: {:?}", grey.samples());

    let hist = grey.histogram();
    for (tone, count) in hist.occupied() {
        println!("tone {tone:>3}: {count}");
    }
    println!("total {}", hist.total());
}
