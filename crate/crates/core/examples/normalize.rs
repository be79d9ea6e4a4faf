//! Turkish casing and grid normalization.

use karekurucu::textnorm::{contains_word, to_grid_form, to_grid_form_joined, to_lower_tr, to_upper_tr, word_count};

fn main() {
    for raw in ["istanbul", "ılgaz", "kâğıt", "ÇİÇEK", "covid-19", "Ağrı Dağı"] {
        match to_grid_form(raw) {
            Ok(w) => println!("{raw:>12} -> {w} ({} letters)", w.len()),
            Err(e) => println!("{raw:>12} -> rejected: {e}"),
        }
    }
    println!("joined: {}", to_grid_form_joined("Ağrı Dağı").unwrap());
    println!("upper: {}  lower: {}", to_upper_tr("iyi ılık"), to_lower_tr("İYİ ILIK"));
    let text = "Başkent Ankara'dır; Meclis 1920'de burada toplandı.";
    println!("{} words, contains ANKARA: {}", word_count(text), contains_word(text, &to_grid_form("ankara").unwrap()));
}
